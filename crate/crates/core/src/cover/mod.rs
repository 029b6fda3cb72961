//! PL Thurston maps as simplicial branched covers.
//!
//! A map is stored as a simplicial cover `f: T1 -> T0` together with an
//! identification of the domain sphere with the codomain sphere: `T1` is a
//! subdivision of `T0`, recorded by `parent` (the `T0` triangle containing
//! each `T1` triangle) and `embed` (the `T1` vertex sitting at each `T0`
//! vertex). The identification fixes the isotopy class rel the marked set,
//! which is what makes the map a dynamical system.
//!
//! Optional mapping class words turn the map into `post ∘ f ∘ pre`.

pub mod models;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::curves::spine::{dual_half_edge, dual_twin, Spine};
use crate::curves::{apply_mapping_class, curve_from_word, walk_sides, Curve, MappingClassWord};
use crate::surface::{build_triangulation, MarkedSphere, SurfaceError, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("not simplicial: {0}")]
    NotSimplicial(String),
    #[error("triangle {0} is mapped with reversed orientation")]
    OrientationReversed(usize),
    #[error("not a branched cover: {0}")]
    NotACover(String),
    #[error("marked set is not forward invariant: {0}")]
    MarkedSetNotInvariant(String),
    #[error("postcritical point {0} is not marked")]
    PostcriticalNotMarked(usize),
    #[error("domain is not a subdivision of the codomain: {0}")]
    BadSubdivision(String),
    #[error("branch value {0} is not a vertex")]
    BranchPointNotVertex(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Orbifold weight `N_f(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(n) => write!(f, "{n}"),
            Weight::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbifoldKind {
    Hyperbolic,
    /// Index into the six parabolic signatures, 1 = (∞,∞) ... 6 = (2,2,2,2).
    Parabolic(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldData {
    /// Weight of every codomain vertex with weight greater than one.
    pub weights: BTreeMap<usize, Weight>,
    /// Sorted weights greater than one.
    pub signature: Vec<Weight>,
    pub euler: Ratio<i64>,
    pub kind: OrbifoldKind,
}

impl OrbifoldData {
    pub fn signature_string(&self) -> String {
        let parts: Vec<String> = self.signature.iter().map(|w| w.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

const PARABOLIC: [&[Weight]; 6] = {
    use Weight::*;
    [
        &[Infinite, Infinite],
        &[Finite(2), Finite(2), Infinite],
        &[Finite(2), Finite(4), Finite(4)],
        &[Finite(2), Finite(3), Finite(6)],
        &[Finite(3), Finite(3), Finite(3)],
        &[Finite(2), Finite(2), Finite(2), Finite(2)],
    ]
};

/// A subdivision of a coarse triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub fine: Triangulation,
    /// Coarse triangle containing each fine triangle.
    pub parent: Vec<usize>,
    /// Fine vertex at each coarse vertex.
    pub embed: Vec<usize>,
}

impl Subdivision {
    pub fn trivial(t: &Triangulation) -> Subdivision {
        Subdivision {
            fine: t.clone(),
            parent: (0..t.triangle_count()).collect(),
            embed: (0..t.vertex_count()).collect(),
        }
    }
}

/// Where a fine vertex sits relative to the coarse triangle whose region
/// contains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Place {
    Corner(usize),
    /// Interior of the arc over the coarse edge `(a, b)`, `a < b`.
    Arc(usize, usize),
    Interior,
}

/// Check that `sub` subdivides `coarse` and classify the vertices of each
/// region.
fn check_subdivision(
    coarse: &Triangulation,
    sub: &Subdivision,
) -> Result<Vec<BTreeMap<usize, Place>>, CoverError> {
    let bad = |s: String| Err(CoverError::BadSubdivision(s));
    let fine = &sub.fine;
    if sub.parent.len() != fine.triangle_count() || sub.embed.len() != coarse.vertex_count() {
        return bad("parent or embed has the wrong length".into());
    }
    if sub.parent.iter().any(|&p| p >= coarse.triangle_count())
        || sub.embed.iter().any(|&v| v >= fine.vertex_count())
    {
        return bad("index out of range".into());
    }
    let corners: BTreeSet<usize> = sub.embed.iter().copied().collect();
    if corners.len() != sub.embed.len() {
        return bad("embed is not injective".into());
    }
    let mut regions: Vec<Vec<usize>> = vec![Vec::new(); coarse.triangle_count()];
    for (t, &p) in sub.parent.iter().enumerate() {
        regions[p].push(t);
    }
    let mut places = Vec::with_capacity(coarse.triangle_count());
    for (s, region) in regions.iter().enumerate() {
        if region.is_empty() {
            return bad(format!("coarse triangle {s} has no fine triangles"));
        }
        // Boundary edges, keyed by start vertex.
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        let mut verts = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for &t in region {
            let tv = fine.triangles()[t];
            for k in 0..3 {
                let (a, b) = (tv[k], tv[(k + 1) % 3]);
                verts.insert(a);
                edges.insert((a.min(b), a.max(b)));
                let other = fine.triangle_left_of(b, a).unwrap();
                if sub.parent[other] != s && next.insert(a, b).is_some() {
                    return bad(format!("region of {s} pinches at vertex {a}"));
                }
            }
        }
        let chi = verts.len() as i64 - edges.len() as i64 + region.len() as i64;
        if chi != 1 {
            return bad(format!("region of {s} is not a disk"));
        }
        // Connectedness of the region through interior edges.
        let mut seen = BTreeSet::from([region[0]]);
        let mut stack = vec![region[0]];
        while let Some(t) = stack.pop() {
            let tv = fine.triangles()[t];
            for k in 0..3 {
                let o = fine.triangle_left_of(tv[(k + 1) % 3], tv[k]).unwrap();
                if sub.parent[o] == s && seen.insert(o) {
                    stack.push(o);
                }
            }
        }
        if seen.len() != region.len() {
            return bad(format!("region of {s} is disconnected"));
        }
        let cv = coarse.triangles()[s];
        let start = sub.embed[cv[0]];
        if !next.contains_key(&start) {
            return bad(format!("corner {} is not on the boundary of region {s}", cv[0]));
        }
        let mut place: BTreeMap<usize, Place> = verts.iter().map(|&v| (v, Place::Interior)).collect();
        let mut cur = start;
        let mut steps = 0;
        for k in 0..3 {
            let (x, y) = (cv[k], cv[(k + 1) % 3]);
            if cur != sub.embed[x] {
                return bad(format!("corners of region {s} out of order"));
            }
            place.insert(cur, Place::Corner(x));
            let across = coarse.triangle_left_of(y, x).unwrap();
            loop {
                let n = match next.get(&cur) {
                    Some(&n) => n,
                    None => return bad(format!("boundary of region {s} is broken")),
                };
                let right = fine.triangle_left_of(n, cur).unwrap();
                if sub.parent[right] != across {
                    return bad(format!("arc {x}->{y} of region {s} borders the wrong region"));
                }
                steps += 1;
                cur = n;
                if cur == sub.embed[y] {
                    break;
                }
                if corners.contains(&cur) {
                    return bad(format!("arc {x}->{y} passes through a corner"));
                }
                place.insert(cur, Place::Arc(x.min(y), x.max(y)));
            }
        }
        if steps != next.len() {
            return bad(format!("boundary of region {s} is not a single cycle"));
        }
        places.push(place);
    }
    Ok(places)
}

/// A PL Thurston map.
#[derive(Debug, Clone)]
pub struct PLThurstonMap {
    sphere: MarkedSphere,
    domain: Triangulation,
    parent: Vec<usize>,
    embed: Vec<usize>,
    vertex_image: Vec<usize>,
    triangle_image: Vec<usize>,
    degree: usize,
    dynamics: Vec<usize>,
    pre: MappingClassWord,
    post: MappingClassWord,
    spine: Spine,
}

impl PLThurstonMap {
    /// Validate and build a map. `sphere` is the codomain with its marked
    /// set; `domain` subdivides it via `parent` and `embed`.
    pub fn new(
        sphere: MarkedSphere,
        domain: Triangulation,
        vertex_image: Vec<usize>,
        parent: Vec<usize>,
        embed: Vec<usize>,
    ) -> Result<PLThurstonMap, CoverError> {
        let t0 = &sphere.tri;
        if vertex_image.len() != domain.vertex_count() {
            return Err(CoverError::NotSimplicial("vertex_image has the wrong length".into()));
        }
        if let Some(&v) = vertex_image.iter().find(|&&v| v >= t0.vertex_count()) {
            return Err(CoverError::NotSimplicial(format!("image vertex {v} out of range")));
        }
        let mut triangle_image = Vec::with_capacity(domain.triangle_count());
        for (t, &[a, b, c]) in domain.triangles().iter().enumerate() {
            let (fa, fb, fc) = (vertex_image[a], vertex_image[b], vertex_image[c]);
            if fa == fb || fb == fc || fa == fc {
                return Err(CoverError::NotSimplicial(format!("triangle {t} collapses")));
            }
            match t0.triangle_left_of(fa, fb) {
                Some(s) if t0.apex(s, fa, fb) == fc => triangle_image.push(s),
                _ => {
                    let rev = t0
                        .triangle_left_of(fb, fa)
                        .is_some_and(|s| t0.apex(s, fb, fa) == fc);
                    return Err(if rev {
                        CoverError::OrientationReversed(t)
                    } else {
                        CoverError::NotSimplicial(format!("triangle {t} has no image triangle"))
                    });
                }
            }
        }
        let mut count = vec![0usize; t0.triangle_count()];
        for &s in &triangle_image {
            count[s] += 1;
        }
        let degree = count[0];
        if count.iter().any(|&c| c != degree) {
            return Err(CoverError::NotACover("triangles have different preimage counts".into()));
        }
        if degree < 2 {
            return Err(CoverError::NotACover(format!("degree {degree} is less than 2")));
        }
        for y in 0..domain.vertex_count() {
            let (a, b) = (domain.degree(y), t0.degree(vertex_image[y]));
            if a % b != 0 {
                return Err(CoverError::NotACover(format!("vertex {y} does not wrap its image")));
            }
        }
        let sub = Subdivision {
            fine: domain,
            parent,
            embed,
        };
        check_subdivision(t0, &sub)?;
        let Subdivision {
            fine: domain,
            parent,
            embed,
        } = sub;

        let mut dynamics = Vec::with_capacity(sphere.marked.len());
        for &q in &sphere.marked {
            let img = vertex_image[embed[q]];
            match sphere.marked_index(img) {
                Some(i) => dynamics.push(i),
                None => {
                    return Err(CoverError::MarkedSetNotInvariant(format!(
                        "marked vertex {q} maps to unmarked vertex {img}"
                    )))
                }
            }
        }
        let spine = Spine::new(t0, &sphere.marked);
        let mut f = PLThurstonMap {
            sphere,
            domain,
            parent,
            embed,
            vertex_image,
            triangle_image,
            degree,
            dynamics,
            pre: MappingClassWord::identity(),
            post: MappingClassWord::identity(),
            spine,
        };
        let p = f.postcritical_set()?;
        f.sphere.postcritical = p;
        Ok(f)
    }

    pub fn sphere(&self) -> &MarkedSphere {
        &self.sphere
    }

    pub fn codomain(&self) -> &Triangulation {
        &self.sphere.tri
    }

    pub fn domain(&self) -> &Triangulation {
        &self.domain
    }

    pub fn marked(&self) -> &[usize] {
        &self.sphere.marked
    }

    pub fn spine(&self) -> &Spine {
        &self.spine
    }

    pub fn parent(&self) -> &[usize] {
        &self.parent
    }

    pub fn embed(&self) -> &[usize] {
        &self.embed
    }

    pub fn vertex_image(&self) -> &[usize] {
        &self.vertex_image
    }

    pub fn triangle_image(&self) -> &[usize] {
        &self.triangle_image
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Marked dynamics as indices into the marked list.
    pub fn dynamics(&self) -> &[usize] {
        &self.dynamics
    }

    pub fn pre(&self) -> &MappingClassWord {
        &self.pre
    }

    pub fn post(&self) -> &MappingClassWord {
        &self.post
    }

    /// `post ∘ self ∘ pre`, with both words acting on the marked sphere.
    pub fn with_twists(&self, post: &MappingClassWord, pre: &MappingClassWord) -> PLThurstonMap {
        let mut g = self.clone();
        g.post = post.compose(&self.post);
        g.pre = self.pre.compose(pre);
        g
    }

    /// Drop the mapping class words.
    pub fn untwisted(&self) -> PLThurstonMap {
        self.with_words(MappingClassWord::identity(), MappingClassWord::identity())
    }

    pub fn with_words(&self, post: MappingClassWord, pre: MappingClassWord) -> PLThurstonMap {
        let mut g = self.clone();
        g.post = post;
        g.pre = pre;
        g
    }

    pub fn is_twisted(&self) -> bool {
        !self.pre.is_empty() || !self.post.is_empty()
    }

    /// Image of a codomain vertex viewed as a point of the domain sphere.
    pub fn point_image(&self, v: usize) -> usize {
        self.vertex_image[self.embed[v]]
    }

    /// Number of sheets of `f` around domain vertex `y`.
    pub fn local_degree(&self, y: usize) -> usize {
        self.domain.degree(y) / self.sphere.tri.degree(self.vertex_image[y])
    }

    pub fn critical_points(&self) -> Vec<usize> {
        (0..self.domain.vertex_count())
            .filter(|&y| self.local_degree(y) > 1)
            .collect()
    }

    /// Forward orbits of the critical values, as codomain vertices.
    pub fn postcritical_set(&self) -> Result<Vec<usize>, CoverError> {
        let mut p = BTreeSet::new();
        for y in self.critical_points() {
            let mut v = self.vertex_image[y];
            while p.insert(v) {
                v = self.point_image(v);
            }
        }
        if let Some(&v) = p.iter().find(|&&v| !self.sphere.is_marked(v)) {
            return Err(CoverError::PostcriticalNotMarked(v));
        }
        Ok(p.into_iter().collect())
    }

    pub fn postcritical(&self) -> &[usize] {
        &self.sphere.postcritical
    }

    pub fn orbifold_data(&self) -> OrbifoldData {
        let p: Vec<usize> = self.sphere.postcritical.clone();
        let in_p: BTreeSet<usize> = p.iter().copied().collect();
        let mut n: BTreeMap<usize, Weight> = p.iter().map(|&x| (x, Weight::Finite(1))).collect();
        // Periodic cycles through a critical point have infinite weight.
        for &x in &p {
            let mut cyc = vec![x];
            let mut v = self.point_image(x);
            while v != x && cyc.len() <= p.len() {
                cyc.push(v);
                v = self.point_image(v);
            }
            if v == x && cyc.iter().any(|&c| self.local_degree(self.embed[c]) > 1) {
                n.insert(x, Weight::Infinite);
            }
        }
        let mut pre: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for y in 0..self.domain.vertex_count() {
            if in_p.contains(&self.vertex_image[y]) {
                pre.entry(self.vertex_image[y]).or_default().push(y);
            }
        }
        let pos: BTreeMap<usize, usize> = self.embed.iter().enumerate().map(|(v, &y)| (y, v)).collect();
        for _ in 0..=4 * p.len() + 4 {
            let mut changed = false;
            for &x in &p {
                if n[&x] == Weight::Infinite {
                    continue;
                }
                let mut acc = 1u64;
                for &y in &pre[&x] {
                    let ny = pos
                        .get(&y)
                        .and_then(|v| n.get(v))
                        .copied()
                        .unwrap_or(Weight::Finite(1));
                    match ny {
                        Weight::Infinite => unreachable!("infinite weight off a critical cycle"),
                        Weight::Finite(k) => acc = acc.lcm(&(k * self.local_degree(y) as u64)),
                    }
                }
                if Weight::Finite(acc) != n[&x] {
                    n.insert(x, Weight::Finite(acc));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let weights: BTreeMap<usize, Weight> =
            n.into_iter().filter(|&(_, w)| w != Weight::Finite(1)).collect();
        let mut signature: Vec<Weight> = weights.values().copied().collect();
        signature.sort();
        let mut euler = Ratio::from_integer(2i64);
        for w in &signature {
            euler -= match w {
                Weight::Infinite => Ratio::from_integer(1),
                Weight::Finite(k) => Ratio::new(*k as i64 - 1, *k as i64),
            };
        }
        let kind = match PARABOLIC.iter().position(|s| *s == signature.as_slice()) {
            Some(i) if euler == Ratio::from_integer(0) => OrbifoldKind::Parabolic(i as u8 + 1),
            _ => OrbifoldKind::Hyperbolic,
        };
        OrbifoldData {
            weights,
            signature,
            euler,
            kind,
        }
    }

    /// True iff some marked point is its own unique preimage.
    pub fn is_topological_polynomial(&self) -> bool {
        self.marked().iter().any(|&w| {
            let y = self.embed[w];
            self.vertex_image[y] == w && self.local_degree(y) == self.degree
        })
    }

    /// Lift a closed walk in the dual graph of the codomain. Returns the
    /// closed dual walks of the components in the domain with their degrees.
    pub fn lift_dual_walk(&self, walk: &[usize]) -> Vec<(Vec<usize>, usize)> {
        let dom = &self.domain;
        if walk.is_empty() {
            return Vec::new();
        }
        let t0 = walk[0] / 3;
        let sheets: Vec<usize> = (0..dom.triangle_count())
            .filter(|&t| self.triangle_image[t] == t0)
            .collect();
        let mut lifts: BTreeMap<usize, (Vec<usize>, usize)> = BTreeMap::new();
        for &s in &sheets {
            let mut tau = s;
            let mut path = Vec::with_capacity(walk.len());
            for &h in walk {
                debug_assert_eq!(self.triangle_image[tau], h / 3);
                let tv = self.sphere.tri.triangles()[h / 3];
                let a = tv[h % 3];
                let uv = dom.triangles()[tau];
                let j = (0..3).find(|&j| self.vertex_image[uv[j]] == a).unwrap();
                let h1 = 3 * tau + j;
                path.push(h1);
                tau = dual_twin(dom, h1) / 3;
            }
            lifts.insert(s, (path, tau));
        }
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        for &s in &sheets {
            if done.contains(&s) {
                continue;
            }
            let mut w = Vec::new();
            let mut deg = 0;
            let mut cur = s;
            while done.insert(cur) {
                let (p, end) = &lifts[&cur];
                w.extend_from_slice(p);
                deg += 1;
                cur = *end;
            }
            out.push((w, deg));
        }
        out
    }

    /// Move a closed domain dual walk to the codomain through `parent`.
    pub fn transport_walk(&self, walk: &[usize]) -> Vec<usize> {
        let t0 = &self.sphere.tri;
        let dom = &self.domain;
        let mut out = Vec::new();
        for &h in walk {
            let (p, q) = (self.parent[h / 3], self.parent[dual_twin(dom, h) / 3]);
            if p == q {
                continue;
            }
            let pv = t0.triangles()[p];
            let k = (0..3)
                .find(|&k| t0.triangle_left_of(pv[(k + 1) % 3], pv[k]) == Some(q))
                .expect("adjacent regions share an edge");
            out.push(dual_half_edge(t0, pv[k], pv[(k + 1) % 3]));
        }
        out
    }

    /// Components of the preimage of `gamma` with full side information.
    pub fn lift_curve(&self, gamma: &Curve) -> CurveLift {
        let sp = &self.spine;
        let target = apply_mapping_class(sp, &self.post.inverse(), gamma);
        let walk = sp.realize_loop(target.word());
        let base = self.sphere.marked[0];
        let target_sides = walk_sides(&self.sphere.tri, &walk, base);
        let pre_inv = self.pre.inverse();
        let components = self
            .lift_dual_walk(&walk)
            .into_iter()
            .map(|(w, degree)| {
                let moved = curve_from_word(sp, &sp.dual_loop_to_word(&self.transport_walk(&w)));
                let curve = apply_mapping_class(sp, &pre_inv, &moved);
                let sides = walk_sides(&self.domain, &w, self.embed[base]);
                LiftedComponent {
                    curve,
                    degree,
                    sides,
                }
            })
            .collect();
        CurveLift {
            target,
            target_sides,
            components,
        }
    }

    /// Components of `f^{-1}(gamma)` with the degree of `f` on each.
    pub fn pullback_curve(&self, gamma: &Curve) -> Vec<(Curve, usize)> {
        if gamma.word().is_empty() {
            return Vec::new();
        }
        self.lift_curve(gamma)
            .components
            .into_iter()
            .map(|c| (c.curve, c.degree))
            .collect()
    }

    /// A lift `psi` of `phi`, so that `phi o f = f o psi`.
    ///
    /// Each twist `T_c^k` of `post^-1 phi post` lifts through the underlying
    /// cover to the product of `T_a^{k/d}` over components `a` of the
    /// preimage of `c` with degree `d`, which requires `d | k`.
    pub fn lift_mapping_class(&self, phi: &MappingClassWord) -> Result<MappingClassWord, CoverError> {
        let bare = self.untwisted();
        let mu = self.post.inverse().compose(phi).compose(&self.post);
        let mut word = Vec::new();
        for (c, k) in &mu.word {
            for comp in bare.lift_curve(c).components {
                if k % comp.degree as i64 != 0 {
                    return Err(CoverError::Unsupported(format!(
                        "twist power {k} is not divisible by preimage degree {}",
                        comp.degree
                    )));
                }
                if comp.curve.is_essential() {
                    word.push((comp.curve, k / comp.degree as i64));
                }
            }
        }
        let nu = MappingClassWord { word }.simplified();
        Ok(self.pre.inverse().compose(&nu).compose(&self.pre))
    }

    /// `f^n`, by repeated lifting of the domain triangulation.
    pub fn iterate(&self, n: usize) -> Result<PLThurstonMap, CoverError> {
        assert!(n >= 1);
        if self.is_twisted() {
            return Err(CoverError::Unsupported("iterate of a twisted map".into()));
        }
        let mut cur = self.clone();
        for _ in 1..n {
            // cur = f^k : (S, T_k) -> (S, T0); lift T_k through f.
            let sub = Subdivision {
                fine: cur.domain.clone(),
                parent: cur.parent.clone(),
                embed: cur.embed.clone(),
            };
            let (lifted, g) = lift_subdivision(self, &sub)?;
            let vertex_image: Vec<usize> = g.iter().map(|&u| cur.vertex_image[u]).collect();
            let parent: Vec<usize> = lifted.parent.iter().map(|&t| self.parent[t]).collect();
            let embed: Vec<usize> = self.embed.iter().map(|&y| lifted.embed[y]).collect();
            cur = PLThurstonMap::new(
                self.sphere.clone(),
                lifted.fine,
                vertex_image,
                parent,
                embed,
            )?;
        }
        Ok(cur)
    }
}

#[derive(Debug, Clone)]
pub struct LiftedComponent {
    pub curve: Curve,
    pub degree: usize,
    /// Side of each domain vertex, relative to the first marked point.
    pub sides: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct CurveLift {
    /// The curve actually lifted through the simplicial part of the map.
    pub target: Curve,
    /// Side of each codomain vertex relative to the first marked point.
    pub target_sides: Vec<bool>,
    pub components: Vec<LiftedComponent>,
}

/// Pull a subdivision of the codomain back through `f`.
///
/// Returns a subdivision of the domain of `f` (its `embed` is the identity on
/// domain vertices) and the simplicial map from the new fine triangulation
/// onto `sub.fine` covering `f`.
pub fn lift_subdivision(
    f: &PLThurstonMap,
    sub: &Subdivision,
) -> Result<(Subdivision, Vec<usize>), CoverError> {
    let t0 = &f.sphere.tri;
    let places = check_subdivision(t0, sub)?;
    let dom = &f.domain;
    let mut regions: Vec<Vec<usize>> = vec![Vec::new(); t0.triangle_count()];
    for (t, &p) in sub.parent.iter().enumerate() {
        regions[p].push(t);
    }
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    enum Key {
        Arc(usize, usize, usize),
        Inner(usize, usize),
    }
    let mut ids: BTreeMap<Key, usize> = BTreeMap::new();
    let mut g: Vec<usize> = (0..dom.vertex_count()).map(|y| f.embed_inv_image(y, sub)).collect();
    let mut tris = Vec::new();
    let mut parent = Vec::new();
    for (tau, &tv) in dom.triangles().iter().enumerate() {
        let s = f.triangle_image[tau];
        let over = |c: usize| tv[(0..3).find(|&j| f.vertex_image[tv[j]] == c).unwrap()];
        for &rho in &regions[s] {
            let rv = sub.fine.triangles()[rho];
            let mut nv = [0usize; 3];
            for k in 0..3 {
                let u = rv[k];
                nv[k] = match places[s][&u] {
                    Place::Corner(c) => over(c),
                    Place::Arc(a, b) => {
                        let (ya, yb) = (over(a), over(b));
                        let key = Key::Arc(ya.min(yb), ya.max(yb), u);
                        next_id(&mut ids, key, &mut g, u)
                    }
                    Place::Interior => next_id(&mut ids, Key::Inner(tau, u), &mut g, u),
                };
            }
            tris.push(nv);
            parent.push(tau);
        }
    }
    fn next_id<K: Ord>(ids: &mut BTreeMap<K, usize>, key: K, g: &mut Vec<usize>, u: usize) -> usize {
        *ids.entry(key).or_insert_with(|| {
            g.push(u);
            g.len() - 1
        })
    }
    let fine = build_triangulation(&tris)?;
    // build_triangulation may reorient; it keeps triangle order and ids.
    let lifted = Subdivision {
        fine,
        parent,
        embed: (0..dom.vertex_count()).collect(),
    };
    check_subdivision(dom, &lifted)?;
    Ok((lifted, g))
}

impl PLThurstonMap {
    /// Vertex of `sub.fine` lying over domain vertex `y` (a corner).
    fn embed_inv_image(&self, y: usize, sub: &Subdivision) -> usize {
        sub.embed[self.vertex_image[y]]
    }
}
