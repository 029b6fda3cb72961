//! Oriented triangulated 2-spheres with marked vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("empty triangle list")]
    Empty,
    #[error("complex is disconnected: {0}")]
    Disconnected(String),
    #[error("wrong Euler characteristic {0} (expected 2)")]
    WrongEuler(i64),
    #[error("not a manifold: {0}")]
    NonManifold(String),
    #[error("invalid marked set: {0}")]
    BadMarked(String),
}

/// A validated, coherently oriented triangulation of the 2-sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    vertex_count: usize,
    triangles: Vec<[usize; 3]>,
    directed: BTreeMap<(usize, usize), usize>,
}

impl Triangulation {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Undirected edges as sorted pairs, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.directed.keys().filter(|(a, b)| a < b).copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.directed.len() / 2
    }

    /// The triangle whose oriented boundary traverses `a -> b`.
    pub fn triangle_left_of(&self, a: usize, b: usize) -> Option<usize> {
        self.directed.get(&(a, b)).copied()
    }

    /// Third vertex of triangle `t` after the directed edge `a -> b`.
    pub fn apex(&self, t: usize, a: usize, b: usize) -> usize {
        let [x, y, z] = self.triangles[t];
        if (x, y) == (a, b) {
            z
        } else if (y, z) == (a, b) {
            x
        } else {
            debug_assert_eq!((z, x), (a, b));
            y
        }
    }

    /// Rotate triangle `t` so that it starts at vertex `v`.
    pub fn rotated_at(&self, t: usize, v: usize) -> [usize; 3] {
        let [x, y, z] = self.triangles[t];
        if v == x {
            [x, y, z]
        } else if v == y {
            [y, z, x]
        } else {
            assert_eq!(v, z, "vertex {v} not in triangle {t}");
            [z, x, y]
        }
    }

    /// Triangles around `v` in counterclockwise order, starting from the
    /// smallest triangle index.
    pub fn star(&self, v: usize) -> Vec<usize> {
        let start = (0..self.triangles.len())
            .find(|&t| self.triangles[t].contains(&v))
            .expect("vertex is used");
        let mut out = vec![start];
        let mut t = start;
        loop {
            let [_, _, y] = self.rotated_at(t, v);
            t = self.directed[&(v, y)];
            if t == start {
                break;
            }
            out.push(t);
        }
        out
    }

    /// Neighbours of `v` in counterclockwise order.
    pub fn link(&self, v: usize) -> Vec<usize> {
        self.star(v)
            .into_iter()
            .map(|t| self.rotated_at(t, v)[1])
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.star(v).len()
    }

    /// Triangle sharing the edge `{a, b}` with `t`.
    pub fn across(&self, t: usize, a: usize, b: usize) -> usize {
        let [x, y, z] = self.triangles[t];
        let fwd = (x, y) == (a, b) || (y, z) == (a, b) || (z, x) == (a, b);
        if fwd {
            self.directed[&(b, a)]
        } else {
            self.directed[&(a, b)]
        }
    }

    /// Index of the triangle with the given vertex set, in any rotation.
    pub fn find_triangle(&self, vs: [usize; 3]) -> Option<usize> {
        let [a, b, c] = vs;
        for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b), (a, c, b), (c, b, a), (b, a, c)] {
            if let Some(&t) = self.directed.get(&(p, q)) {
                if self.apex(t, p, q) == r {
                    return Some(t);
                }
            }
        }
        None
    }
}

/// Validate a triangle list as a sphere and normalize orientation.
///
/// Checks run in the order: connectivity, Euler characteristic, then the
/// local manifold conditions.
pub fn build_triangulation(triples: &[[usize; 3]]) -> Result<Triangulation, SurfaceError> {
    if triples.is_empty() {
        return Err(SurfaceError::Empty);
    }
    let vertex_count = triples.iter().flatten().max().unwrap() + 1;

    let mut parent: Vec<usize> = (0..vertex_count).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut used = vec![false; vertex_count];
    for t in triples {
        for &v in t {
            used[v] = true;
        }
        for i in 1..3 {
            let (a, b) = (root(&mut parent, t[0]), root(&mut parent, t[i]));
            parent[a] = b;
        }
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(SurfaceError::Disconnected(format!("vertex {v} is unused")));
    }
    let r0 = root(&mut parent, 0);
    if let Some(v) = (0..vertex_count).find(|&v| root(&mut parent, v) != r0) {
        return Err(SurfaceError::Disconnected(format!(
            "vertex {v} not connected to vertex 0"
        )));
    }

    let mut undirected: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in triples.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            undirected.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let chi = vertex_count as i64 - undirected.len() as i64 + triples.len() as i64;
    if chi != 2 {
        return Err(SurfaceError::WrongEuler(chi));
    }

    let mut seen = BTreeSet::new();
    for (i, t) in triples.iter().enumerate() {
        if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(SurfaceError::NonManifold(format!("triangle {i} is degenerate")));
        }
        let mut key = *t;
        key.sort_unstable();
        if !seen.insert(key) {
            return Err(SurfaceError::NonManifold(format!("triangle {i} is repeated")));
        }
    }
    for (&(a, b), ts) in &undirected {
        if ts.len() != 2 {
            return Err(SurfaceError::NonManifold(format!(
                "edge ({a},{b}) lies on {} triangles",
                ts.len()
            )));
        }
    }

    // Orient coherently by breadth-first flipping from triangle 0.
    let mut tris: Vec<[usize; 3]> = triples.to_vec();
    let mut fixed = vec![false; tris.len()];
    let mut queue = VecDeque::from([0usize]);
    fixed[0] = true;
    let has_dir = |t: &[usize; 3], a: usize, b: usize| {
        (0..3).any(|k| t[k] == a && t[(k + 1) % 3] == b)
    };
    while let Some(i) = queue.pop_front() {
        let t = tris[i];
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let ts = &undirected[&(a.min(b), a.max(b))];
            let j = if ts[0] == i { ts[1] } else { ts[0] };
            if fixed[j] {
                if has_dir(&tris[j], a, b) {
                    return Err(SurfaceError::NonManifold("non-orientable".into()));
                }
                continue;
            }
            if has_dir(&tris[j], a, b) {
                tris[j].swap(1, 2);
            }
            fixed[j] = true;
            queue.push_back(j);
        }
    }

    let mut directed = BTreeMap::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            directed.insert((t[k], t[(k + 1) % 3]), i);
        }
    }

    // Each link must be a single cycle.
    let mut next: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); vertex_count];
    for t in &tris {
        for k in 0..3 {
            next[t[k]].insert(t[(k + 1) % 3], t[(k + 2) % 3]);
        }
    }
    for (v, nx) in next.iter().enumerate() {
        let start = *nx.keys().next().unwrap();
        let mut x = start;
        let mut len = 0;
        loop {
            x = nx[&x];
            len += 1;
            if x == start {
                break;
            }
        }
        if len != nx.len() {
            return Err(SurfaceError::NonManifold(format!(
                "link of vertex {v} is not a single cycle"
            )));
        }
    }

    Ok(Triangulation {
        vertex_count,
        triangles: tris,
        directed,
    })
}

pub fn euler_characteristic(t: &Triangulation) -> i64 {
    t.vertex_count as i64 - t.edge_count() as i64 + t.triangle_count() as i64
}

/// Barycentric subdivision.
///
/// Old vertices keep their ids; edge midpoints follow in sorted edge order,
/// then face centres in triangle order. The returned map sends each old
/// vertex to its id in the refinement.
pub fn refine_barycentric(t: &Triangulation) -> (Triangulation, Vec<usize>) {
    let v = t.vertex_count;
    let edges = t.edges();
    let mid: BTreeMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, v + i)).collect();
    let m = |a: usize, b: usize| mid[&(a.min(b), a.max(b))];
    let mut out = Vec::with_capacity(6 * t.triangle_count());
    for (i, &[a, b, c]) in t.triangles.iter().enumerate() {
        let o = v + edges.len() + i;
        let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
        out.extend([
            [a, ab, o],
            [ab, b, o],
            [b, bc, o],
            [bc, c, o],
            [c, ca, o],
            [ca, a, o],
        ]);
    }
    let refined = build_triangulation(&out).expect("subdivision of a sphere is a sphere");
    (refined, (0..v).collect())
}

/// A triangulated sphere with marked set `Q` and postcritical subset `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSphere {
    pub tri: Triangulation,
    pub marked: Vec<usize>,
    pub postcritical: Vec<usize>,
}

impl MarkedSphere {
    pub fn new(tri: Triangulation, marked: Vec<usize>) -> Result<Self, SurfaceError> {
        let mut s = BTreeSet::new();
        for &q in &marked {
            if q >= tri.vertex_count() {
                return Err(SurfaceError::BadMarked(format!("vertex {q} out of range")));
            }
            if !s.insert(q) {
                return Err(SurfaceError::BadMarked(format!("vertex {q} repeated")));
            }
        }
        Ok(MarkedSphere {
            tri,
            marked,
            postcritical: Vec::new(),
        })
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked.contains(&v)
    }

    /// Position of `v` in the marked list.
    pub fn marked_index(&self, v: usize) -> Option<usize> {
        self.marked.iter().position(|&q| q == v)
    }
}

/// Boundary of a tetrahedron.
pub fn tetrahedron() -> Triangulation {
    build_triangulation(&[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
}

/// Boundary of an octahedron: poles 0 and 5, equator 1..=4.
pub fn octahedron() -> Triangulation {
    let mut t = Vec::new();
    for i in 0..4 {
        let (a, b) = (1 + i, 1 + (i + 1) % 4);
        t.push([0, a, b]);
        t.push([5, b, a]);
    }
    build_triangulation(&t).unwrap()
}
