//! Constructors for concrete PL Thurston maps.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use super::{CoverError, PLThurstonMap};
use crate::surface::{build_triangulation, MarkedSphere, Triangulation};

/// Build a map whose domain-to-codomain identification is given by an edge
/// path in the domain for every codomain edge `(a, b)`, `a < b`, running
/// from `embed[a]` to `embed[b]`.
pub fn from_edge_paths(
    sphere: MarkedSphere,
    domain: Triangulation,
    vertex_image: Vec<usize>,
    embed: Vec<usize>,
    paths: &BTreeMap<(usize, usize), Vec<usize>>,
) -> Result<PLThurstonMap, CoverError> {
    let t0 = &sphere.tri;
    let mut cut = BTreeSet::new();
    for (&(a, b), p) in paths {
        if p.first() != Some(&embed[a]) || p.last() != Some(&embed[b]) {
            return Err(CoverError::BadSubdivision(format!("path for {a}-{b} has wrong ends")));
        }
        for w in p.windows(2) {
            cut.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    let mut parent = vec![usize::MAX; domain.triangle_count()];
    for (s, &[x, y, _]) in t0.triangles().iter().enumerate() {
        let path = match paths.get(&(x.min(y), x.max(y))) {
            Some(p) if x < y => p.clone(),
            Some(p) => p.iter().rev().copied().collect(),
            None => return Err(CoverError::BadSubdivision(format!("no path for edge {x}-{y}"))),
        };
        let seed = domain
            .triangle_left_of(path[0], path[1])
            .ok_or_else(|| CoverError::BadSubdivision(format!("path for {x}-{y} is not an edge path")))?;
        let mut stack = vec![seed];
        while let Some(t) = stack.pop() {
            if parent[t] != usize::MAX {
                if parent[t] != s {
                    return Err(CoverError::BadSubdivision(format!("regions {s} and {} overlap", parent[t])));
                }
                continue;
            }
            parent[t] = s;
            let tv = domain.triangles()[t];
            for k in 0..3 {
                let (a, b) = (tv[k], tv[(k + 1) % 3]);
                if !cut.contains(&(a.min(b), a.max(b))) {
                    stack.push(domain.triangle_left_of(b, a).unwrap());
                }
            }
        }
    }
    if parent.contains(&usize::MAX) {
        return Err(CoverError::BadSubdivision("some triangles lie in no region".into()));
    }
    PLThurstonMap::new(sphere, domain, vertex_image, parent, embed)
}

/// Bipyramid over an `n`-gon: poles 0 (north) and 1 (south), equator
/// `2..n+2` in counterclockwise order seen from the north pole.
pub fn bipyramid(n: usize) -> Triangulation {
    let mut t = Vec::new();
    for j in 0..n {
        let (a, b) = (2 + j, 2 + (j + 1) % n);
        t.push([a, b, 0]);
        t.push([b, a, 1]);
    }
    build_triangulation(&t).expect("bipyramid is a sphere")
}

/// `z^d` on the bipyramid over an `n`-gon. The domain is the bipyramid over
/// a `dn`-gon mapped by `w_k -> p_{k mod n}`; equator vertex `p_j` of the
/// codomain sits at `w_{sigma[j]}` (strictly increasing, below `dn`).
pub fn power_map(
    n: usize,
    d: usize,
    sigma: &[usize],
    marked: Vec<usize>,
) -> Result<PLThurstonMap, CoverError> {
    assert_eq!(sigma.len(), n);
    assert!(sigma.windows(2).all(|w| w[0] < w[1]) && sigma[n - 1] < d * n);
    let t0 = bipyramid(n);
    let t1 = bipyramid(d * n);
    let sphere = MarkedSphere::new(t0.clone(), marked)?;
    let mut vertex_image = vec![0, 1];
    vertex_image.extend((0..d * n).map(|k| 2 + k % n));
    let mut embed = vec![0, 1];
    embed.extend(sigma.iter().map(|&s| 2 + s));
    // Equator sector containing w_k -> w_{k+1}.
    let sector = |k: usize| -> usize {
        (0..n)
            .rev()
            .find(|&j| sigma[j] <= k)
            .unwrap_or(n - 1)
    };
    let parent: Vec<usize> = t1
        .triangles()
        .iter()
        .map(|tv| {
            let pole = if tv.contains(&0) { 0 } else { 1 };
            let ks: Vec<usize> = tv.iter().filter(|&&v| v >= 2).map(|&v| v - 2).collect();
            // Lower endpoint of the equator edge in cyclic order.
            let k = if (ks[0] + 1) % (d * n) == ks[1] { ks[0] } else { ks[1] };
            let j = sector(k);
            let (a, b) = (2 + j, 2 + (j + 1) % n);
            let (from, to) = if pole == 0 { (a, b) } else { (b, a) };
            t0.triangle_left_of(from, to).unwrap()
        })
        .collect();
    PLThurstonMap::new(sphere, t1, vertex_image, parent, embed)
}

/// Vertex ids of the basilica model.
pub mod basilica_ids {
    pub const INFINITY: usize = 0;
    pub const MINUS_TWO: usize = 1;
    pub const MINUS_ONE: usize = 2;
    pub const ZERO: usize = 3;
    pub const ALPHA: usize = 4;
}

/// `z^2 - 1` with the fixed point `alpha = (1 + sqrt 5) / 2` available as a
/// vertex.
///
/// The codomain is the bipyramid over the real line with equator
/// `-2, -1, 0, alpha, ∞` and poles in the two half planes. The domain is its
/// preimage: the real and imaginary axes cut the plane into quadrants, each a
/// cone over its boundary. Vertices of the domain are
/// `∞, -alpha, -1, 0, 1, alpha, i, -i` and the four quadrant centres.
pub fn basilica(mark_alpha: bool) -> Result<PLThurstonMap, CoverError> {
    let t0 = build_triangulation(&[
        [1, 2, 5],
        [2, 3, 5],
        [3, 4, 5],
        [4, 0, 5],
        [0, 1, 5],
        [2, 1, 6],
        [3, 2, 6],
        [4, 3, 6],
        [0, 4, 6],
        [1, 0, 6],
    ])?;
    let t1 = build_triangulation(&[
        [3, 4, 8],
        [4, 5, 8],
        [5, 0, 8],
        [0, 6, 8],
        [6, 3, 8],
        [3, 6, 9],
        [6, 0, 9],
        [0, 1, 9],
        [1, 2, 9],
        [2, 3, 9],
        [3, 2, 10],
        [2, 1, 10],
        [1, 0, 10],
        [0, 7, 10],
        [7, 3, 10],
        [3, 7, 11],
        [7, 0, 11],
        [0, 5, 11],
        [5, 4, 11],
        [4, 3, 11],
    ])?;
    let vertex_image = vec![0, 4, 3, 2, 3, 4, 1, 1, 5, 6, 5, 6];
    let embed = vec![0, 1, 2, 3, 5, 9, 10];
    let mut marked = vec![0, 2, 3];
    if mark_alpha {
        marked.push(4);
    }
    let sphere = MarkedSphere::new(t0, marked)?;
    let paths: BTreeMap<(usize, usize), Vec<usize>> = [
        ((1, 2), vec![1, 2]),
        ((2, 3), vec![2, 3]),
        ((3, 4), vec![3, 4, 5]),
        ((0, 4), vec![0, 5]),
        ((0, 1), vec![0, 1]),
        ((1, 5), vec![1, 9]),
        ((2, 5), vec![2, 9]),
        ((3, 5), vec![3, 9]),
        ((0, 5), vec![0, 9]),
        ((4, 5), vec![5, 8, 6, 9]),
        ((1, 6), vec![1, 10]),
        ((2, 6), vec![2, 10]),
        ((3, 6), vec![3, 10]),
        ((0, 6), vec![0, 10]),
        ((4, 6), vec![5, 11, 7, 10]),
    ]
    .into_iter()
    .collect();
    from_edge_paths(sphere, t1, vertex_image, embed, &paths)
}

type Q = Ratio<i64>;
type Point = (Q, Q);

fn frac(x: Q) -> Q {
    x - x.floor()
}

/// Canonical representative of a point of the pillowcase
/// `R^2 / <z+1, z+i, -z>`.
pub fn pillow_point(p: Point) -> Point {
    let a = (frac(p.0), frac(p.1));
    let b = (frac(-p.0), frac(-p.1));
    a.min(b)
}

fn centroid(t: &[Point; 3]) -> Point {
    let three = Q::from_integer(3);
    (
        (t[0].0 + t[1].0 + t[2].0) / three,
        (t[0].1 + t[1].1 + t[2].1) / three,
    )
}

/// Canonical key of a triangle of the pillowcase: move its centroid to the
/// canonical representative and rotate the vertex list to start at its
/// least vertex.
fn pillow_triangle(t: [Point; 3]) -> [Point; 3] {
    let c = centroid(&t);
    let c0 = pillow_point(c);
    let flip = c0 != (frac(c.0), frac(c.1));
    let moved: Vec<Point> = t
        .iter()
        .map(|&(x, y)| {
            let (x, y) = if flip { (-x, -y) } else { (x, y) };
            let (cx, cy) = if flip { (-c.0, -c.1) } else { c };
            (x - cx.floor(), y - cy.floor())
        })
        .collect();
    let k = (0..3).min_by_key(|&k| moved[k]).unwrap();
    [moved[k], moved[(k + 1) % 3], moved[(k + 2) % 3]]
}

/// Pillowcase grid of spacing `1/n` (`n` even), each square cut by both
/// diagonals. Returns the triangulation, the canonical point of each
/// vertex and a planar lift of each triangle.
pub fn pillow_grid(n: i64) -> (Triangulation, Vec<Point>, Vec<[Point; 3]>) {
    assert!(n >= 4 && n % 2 == 0);
    let mut ids: BTreeMap<Point, usize> = BTreeMap::new();
    let mut pts = Vec::new();
    let mut tris = BTreeSet::new();
    let q = |a: i64, b: i64| Q::new(a, b);
    for i in 0..n {
        for j in 0..n {
            let p = |a: i64, b: i64| (q(a, n), q(b, n));
            let c = (q(2 * i + 1, 2 * n), q(2 * j + 1, 2 * n));
            let (p00, p10, p11, p01) = (p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
            for t in [[p00, p10, c], [p10, p11, c], [p11, p01, c], [p01, p00, c]] {
                tris.insert(pillow_triangle(t));
            }
        }
    }
    let mut out = Vec::new();
    for t in &tris {
        let mut tv = [0usize; 3];
        for k in 0..3 {
            let key = pillow_point(t[k]);
            tv[k] = *ids.entry(key).or_insert_with(|| {
                pts.push(key);
                pts.len() - 1
            });
        }
        out.push(tv);
    }
    (
        build_triangulation(&out).expect("pillowcase grid is a sphere"),
        pts,
        tris.into_iter().collect(),
    )
}

/// Quotient of `L(z) = Az + b` on the pillowcase, on the grid of spacing
/// `1/n`. The domain triangulation is `L^{-1}` of the grid; this is a
/// subdivision of the grid whenever `A` maps the four grid directions to
/// grid directions with compatible spacing, which is checked.
///
/// The four corners `0, 1/2, i/2, (1+i)/2` are always marked; `extra` adds
/// more marked points.
pub fn lattes(
    n: i64,
    a: [[i64; 2]; 2],
    b: Point,
    extra: &[Point],
) -> Result<PLThurstonMap, CoverError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det <= 0 {
        return Err(CoverError::Unsupported(format!("det A = {det} must be positive")));
    }
    let (t0, pts0, geo0) = pillow_grid(n);
    let id0: BTreeMap<Point, usize> = pts0.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let apply = |z: Point| -> Point {
        (
            Q::from(a[0][0]) * z.0 + Q::from(a[0][1]) * z.1 + b.0,
            Q::from(a[1][0]) * z.0 + Q::from(a[1][1]) * z.1 + b.1,
        )
    };
    let inv = |w: Point| -> Point {
        let (x, y) = (w.0 - b.0, w.1 - b.1);
        let d = Q::from(det);
        (
            (Q::from(a[1][1]) * x - Q::from(a[0][1]) * y) / d,
            (Q::from(-a[1][0]) * x + Q::from(a[0][0]) * y) / d,
        )
    };
    let mut tris1 = BTreeSet::new();
    for rep in &geo0 {
        for mx in 0..det {
            for my in 0..det {
                let m = (Q::from(mx), Q::from(my));
                let pre = rep.map(|p| inv((p.0 + m.0, p.1 + m.1)));
                tris1.insert(pillow_triangle(pre));
            }
        }
    }
    if tris1.len() != det as usize * t0.triangle_count() {
        return Err(CoverError::NotACover("preimage triangles do not tile".into()));
    }
    let mut id1: BTreeMap<Point, usize> = BTreeMap::new();
    let mut pts1 = Vec::new();
    let mut tv1 = Vec::new();
    let mut parent = Vec::new();
    for t in &tris1 {
        let mut tv = [0usize; 3];
        for k in 0..3 {
            let key = pillow_point(t[k]);
            tv[k] = *id1.entry(key).or_insert_with(|| {
                pts1.push(key);
                pts1.len() - 1
            });
        }
        tv1.push(tv);
        parent.push(locate(n, centroid(t), &t0, &id0)?);
    }
    let t1 = build_triangulation(&tv1)?;
    let vertex_image = pts1
        .iter()
        .map(|&z| {
            id0.get(&pillow_point(apply(z)))
                .copied()
                .ok_or_else(|| CoverError::NotSimplicial("vertex maps off the grid".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let embed = pts0
        .iter()
        .map(|p| {
            id1.get(p)
                .copied()
                .ok_or_else(|| CoverError::BadSubdivision("grid vertex missing from the preimage".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let half = Q::new(1, 2);
    let zero = Q::from(0);
    let mut marked = Vec::new();
    for p in [(zero, zero), (half, zero), (zero, half), (half, half)]
        .iter()
        .chain(extra)
    {
        let v = *id0
            .get(&pillow_point(*p))
            .ok_or_else(|| CoverError::MarkedSetNotInvariant("marked point is not a grid vertex".into()))?;
        if !marked.contains(&v) {
            marked.push(v);
        }
    }
    let sphere = MarkedSphere::new(t0, marked)?;
    PLThurstonMap::new(sphere, t1, vertex_image, parent, embed)
}

/// Grid triangle containing the point `u` in its interior.
fn locate(
    n: i64,
    u: Point,
    t0: &Triangulation,
    id0: &BTreeMap<Point, usize>,
) -> Result<usize, CoverError> {
    let nq = Q::from(n);
    let (sx, sy) = (u.0 * nq, u.1 * nq);
    let (i, j) = (sx.floor().to_integer(), sy.floor().to_integer());
    let (fx, fy) = (sx - sx.floor(), sy - sy.floor());
    let d1 = fy - fx;
    let d2 = fx + fy - Q::from(1);
    let zero = Q::from(0);
    if d1 == zero || d2 == zero {
        return Err(CoverError::BadSubdivision(format!("preimage triangle straddles a diagonal at {u:?}")));
    }
    let p = |a: i64, b: i64| (Q::new(a, n), Q::new(b, n));
    let c = (Q::new(2 * i + 1, 2 * n), Q::new(2 * j + 1, 2 * n));
    let corners = match (d1 > zero, d2 > zero) {
        (false, false) => [p(i, j), p(i + 1, j)],
        (false, true) => [p(i + 1, j), p(i + 1, j + 1)],
        (true, true) => [p(i + 1, j + 1), p(i, j + 1)],
        (true, false) => [p(i, j + 1), p(i, j)],
    };
    let v = |q: Point| id0[&pillow_point(q)];
    let (a, b) = (v(corners[0]), v(corners[1]));
    let t = t0
        .triangle_left_of(a, b)
        .filter(|&t| t0.apex(t, a, b) == v(c))
        .ok_or_else(|| CoverError::BadSubdivision("grid triangle lookup failed".into()))?;
    Ok(t)
}
