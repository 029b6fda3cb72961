//! Simple closed curves and mapping classes on a marked sphere.
//!
//! A curve is stored as the canonical cyclic word of its free homotopy class
//! in the spine `G`. The spine is trivalent and dual to an ideal
//! triangulation with vertices at the marked points, so the number of times
//! the word runs along each spine edge is the normal coordinate of the curve
//! with respect to that ideal triangulation.

pub mod spine;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::surface::Triangulation;
use crate::words::{self, canonical_cyclic, inverse, rotate};
use spine::{dual_edge, dual_half_edge, Spine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("path is not closed: {0}")]
    NotClosed(String),
    #[error("path is not embedded: vertex {0} repeats")]
    NotEmbedded(usize),
    #[error("path passes through marked vertex {0}")]
    PassesMarkedVertex(usize),
    #[error("curve is not essential")]
    CurveNotEssential,
    #[error("coordinates are not realizable: {0}")]
    BadCoordinates(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveClass {
    Trivial,
    /// Bounds a once-marked disk; the payload is the index in the marked list.
    Peripheral(usize),
    Essential,
}

/// Isotopy class of an unoriented simple closed curve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Curve {
    word: Vec<usize>,
    coords: Vec<u32>,
    class: CurveClass,
}

impl Curve {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Normal coordinates, one per spine edge.
    pub fn coordinates(&self) -> &[u32] {
        &self.coords
    }

    pub fn class(&self) -> CurveClass {
        self.class
    }

    pub fn is_essential(&self) -> bool {
        self.class == CurveClass::Essential
    }

    pub fn weight(&self) -> u32 {
        self.coords.iter().sum()
    }
}

/// A multicurve: sorted, pairwise disjoint and distinct essential curves.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multicurve {
    pub curves: Vec<Curve>,
}

impl Multicurve {
    pub fn new(mut curves: Vec<Curve>) -> Multicurve {
        curves.sort_by(order_key);
        curves.dedup();
        Multicurve { curves }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

/// Enumeration order: total weight, then coordinates.
pub fn order_key(a: &Curve, b: &Curve) -> std::cmp::Ordering {
    (a.weight(), &a.coords, &a.word).cmp(&(b.weight(), &b.coords, &b.word))
}

/// Product of Dehn twist powers, applied right to left.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MappingClassWord {
    pub word: Vec<(Curve, i64)>,
}

impl MappingClassWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    /// Sum of absolute exponents.
    pub fn syllable_length(&self) -> u64 {
        self.word.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Self {
        MappingClassWord {
            word: self.word.iter().rev().map(|(c, e)| (c.clone(), -e)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        MappingClassWord { word }.simplified()
    }

    /// Merge adjacent powers of the same twist and drop zero exponents.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<(Curve, i64)> = Vec::new();
        for (c, e) in &self.word {
            if let Some(last) = out.last_mut() {
                if &last.0 == c {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            if *e != 0 {
                out.push((c.clone(), *e));
            }
        }
        MappingClassWord { word: out }
    }
}

/// Build a curve from any closed word in the spine.
pub fn curve_from_word(sp: &Spine, w: &[usize]) -> Curve {
    let word = canonical_cyclic(w);
    let mut coords = vec![0u32; sp.edge_count()];
    for &h in &word {
        coords[h / 2] += 1;
    }
    let class = if word.is_empty() {
        CurveClass::Trivial
    } else if let Some(i) =
        (0..sp.marked().len()).find(|&i| canonical_cyclic(sp.face(i)) == word)
    {
        CurveClass::Peripheral(i)
    } else {
        CurveClass::Essential
    };
    Curve {
        word,
        coords,
        class,
    }
}

/// Left push-off of a closed embedded edge path, as a closed dual walk.
pub fn pushoff_walk(
    tri: &Triangulation,
    marked: &[usize],
    path: &[usize],
) -> Result<Vec<usize>, CurveError> {
    let mut p = path.to_vec();
    if p.len() >= 2 && p.first() == p.last() {
        p.pop();
    }
    if p.len() < 3 {
        return Err(CurveError::NotClosed("fewer than three vertices".into()));
    }
    let mut seen = BTreeSet::new();
    for &v in &p {
        if v >= tri.vertex_count() {
            return Err(CurveError::NotClosed(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(CurveError::NotEmbedded(v));
        }
        if marked.contains(&v) {
            return Err(CurveError::PassesMarkedVertex(v));
        }
    }
    let n = p.len();
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        if tri.triangle_left_of(a, b).is_none() {
            return Err(CurveError::NotClosed(format!("{a} and {b} are not adjacent")));
        }
    }
    let mut walk = Vec::new();
    for i in 0..n {
        let (prev, v, next) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
        let end = tri.triangle_left_of(v, next).unwrap();
        let mut t = tri.triangle_left_of(prev, v).unwrap();
        while t != end {
            let [_, x, _] = tri.rotated_at(t, v);
            walk.push(dual_half_edge(tri, v, x));
            t = tri.triangle_left_of(x, v).unwrap();
        }
    }
    Ok(walk)
}

/// Canonical form of a closed embedded edge path avoiding marked vertices.
pub fn canonical_form(sp: &Spine, path: &[usize]) -> Result<Curve, CurveError> {
    let walk = pushoff_walk(sp.triangulation(), sp.marked(), path)?;
    Ok(curve_from_word(sp, &sp.dual_loop_to_word(&walk)))
}

pub fn homotopic(a: &Curve, b: &Curve) -> bool {
    a.word == b.word
}

/// Parity of crossings of a closed dual walk with each vertex of `tri`,
/// relative to `base`: `true` means opposite side from `base`.
pub fn walk_sides(tri: &Triangulation, walk: &[usize], base: usize) -> Vec<bool> {
    let mut par: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    for &h in walk {
        let (a, b) = dual_edge(tri, h);
        let e = par.entry((a.min(b), a.max(b))).or_insert(false);
        *e = !*e;
    }
    let nv = tri.vertex_count();
    let mut side = vec![None; nv];
    side[base] = Some(false);
    let mut queue = VecDeque::from([base]);
    while let Some(u) = queue.pop_front() {
        let su = side[u].unwrap();
        for w in tri.link(u) {
            if side[w].is_none() {
                let flip = par.get(&(u.min(w), u.max(w))).copied().unwrap_or(false);
                side[w] = Some(su ^ flip);
                queue.push_back(w);
            }
        }
    }
    side.into_iter().map(|s| s.unwrap()).collect()
}

/// Marked indices on each side of `c`; the first set contains index 0.
pub fn sides(sp: &Spine, c: &Curve) -> (Vec<usize>, Vec<usize>) {
    let tri = sp.triangulation();
    let m = sp.marked();
    let s = walk_sides(tri, &sp.realize_loop(&c.word), m[0]);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, &q) in m.iter().enumerate() {
        if s[q] {
            b.push(i);
        } else {
            a.push(i);
        }
    }
    (a, b)
}

#[derive(Debug, Clone)]
struct Crossing {
    /// Interval of `b` indices shared with the lift, `lo..=hi`.
    lo: isize,
    hi: isize,
    /// Lift direction: `true` for `a`, `false` for `a^{-1}`.
    forward: bool,
    /// Index in the lift word aligned with `b[lo]`.
    ia: usize,
    /// `b` crosses the lift from its left to its right.
    lr: bool,
}

fn at(w: &[usize], i: isize) -> usize {
    let n = w.len() as isize;
    w[i.rem_euclid(n) as usize]
}

/// Linked common segments of `a` with `b`, in coordinates along `b`.
fn crossings(sp: &Spine, a: &[usize], b: &[usize]) -> Vec<Crossing> {
    let (na, nb) = (a.len(), b.len());
    let cap = na + nb;
    let mut out = Vec::new();
    for eps in [true, false] {
        let bb = if eps { b.to_vec() } else { inverse(b) };
        for i in 0..na as isize {
            for j in 0..nb as isize {
                if at(a, i) != at(&bb, j) || at(a, i - 1) == at(&bb, j - 1) {
                    continue;
                }
                let mut l = 0isize;
                while (l as usize) < cap && at(a, i + l) == at(&bb, j + l) {
                    l += 1;
                }
                if l as usize >= cap {
                    continue;
                }
                let y_in = at(&bb, j - 1) ^ 1;
                let left_start = sp.sigma(at(a, i)) == y_in;
                let left_end = sp.sigma(at(a, i + l)) == at(&bb, j + l);
                if left_start == left_end {
                    continue;
                }
                let (lo, ia) = if eps {
                    (j, i as usize)
                } else {
                    (
                        (nb as isize - j - l).rem_euclid(nb as isize),
                        (na as isize - i - l).rem_euclid(na as isize) as usize,
                    )
                };
                out.push(Crossing {
                    lo,
                    hi: lo + l - 1,
                    forward: eps,
                    ia,
                    lr: left_start,
                });
            }
        }
    }
    out
}

/// Geometric intersection number of two curves.
pub fn intersection_number(sp: &Spine, a: &Curve, b: &Curve) -> usize {
    if a.word.is_empty() || b.word.is_empty() || a.word == b.word {
        return 0;
    }
    crossings(sp, &a.word, &b.word).len()
}

/// Number of self-crossings of a closed word; zero for simple curves.
pub fn self_intersection(sp: &Spine, w: &[usize]) -> usize {
    if w.is_empty() {
        return 0;
    }
    crossings(sp, w, w).len() / 2
}

fn lift_word(a: &[usize], forward: bool) -> Vec<usize> {
    if forward {
        a.to_vec()
    } else {
        inverse(a)
    }
}

/// Edge of the lift `c`, shifted by `k` periods of `b`, at `b` index `q`.
fn lift_edge(a: &[usize], c: &Crossing, shift: isize, q: isize) -> usize {
    let w = lift_word(a, c.forward);
    at(&w, c.ia as isize + q - (c.lo + shift))
}

/// Whether lift `x` lies to the left of lift `y` (both running along `b`).
fn left_of(sp: &Spine, a: &[usize], x: (&Crossing, isize), y: (&Crossing, isize)) -> bool {
    let (cx, kx) = x;
    let (cy, ky) = y;
    let p = (cx.hi + kx).min(cy.hi + ky);
    let lim = 4 * (a.len() + 8) as isize;
    for q in p + 1..p + 1 + lim {
        let (ex, ey) = (lift_edge(a, cx, kx, q), lift_edge(a, cy, ky, q));
        if ex != ey {
            return sp.sigma(ey) == ex;
        }
    }
    let p = (cx.lo + kx).max(cy.lo + ky);
    for q in (p - lim..p).rev() {
        let (ex, ey) = (lift_edge(a, cx, kx, q), lift_edge(a, cy, ky, q));
        if ex != ey {
            return sp.sigma(ey ^ 1) != ex ^ 1;
        }
    }
    panic!("distinct lifts never diverge");
}

/// Whether `b` meets lift `x` before lift `y`.
fn before(sp: &Spine, a: &[usize], x: (&Crossing, isize), y: (&Crossing, isize), nb: isize) -> bool {
    let (xl, xh) = (x.0.lo + x.1 * nb, x.0.hi + x.1 * nb);
    let (yl, yh) = (y.0.lo + y.1 * nb, y.0.hi + y.1 * nb);
    if xh < yl {
        return true;
    }
    if yh < xl {
        return false;
    }
    let l = left_of(sp, a, (x.0, x.1 * nb), (y.0, y.1 * nb));
    if x.0.lr {
        l
    } else {
        !l
    }
}

/// `T_a^{sign}(b)` for a single positive or negative twist.
fn twist_once(sp: &Spine, a: &[usize], b: &[usize], positive: bool) -> Vec<usize> {
    if a.is_empty() || b.is_empty() || canonical_cyclic(a) == canonical_cyclic(b) {
        return b.to_vec();
    }
    let cs = crossings(sp, a, b);
    if cs.is_empty() {
        return b.to_vec();
    }
    let nb = b.len() as isize;
    let na = a.len() as isize;
    let span = (na + nb) / nb + 3;

    // Place every crossing on one period of the line starting at crossing 0.
    let x0 = (&cs[0], 0isize);
    let x1 = (&cs[0], 1isize);
    let mut placed: Vec<(usize, isize)> = vec![(0, 0)];
    for (ci, c) in cs.iter().enumerate().skip(1) {
        let k = (-span..=span)
            .find(|&k| before(sp, a, x0, (c, k), nb) && before(sp, a, (c, k), x1, nb))
            .expect("crossing fits in one period");
        placed.push((ci, k));
    }
    placed.sort_by(|&(i, ki), &(j, kj)| {
        if (i, ki) == (j, kj) {
            std::cmp::Ordering::Equal
        } else if before(sp, a, (&cs[i], ki), (&cs[j], kj), nb) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });

    // Greedy insertion points, as "after b index p".
    let start = cs[0].lo - 1;
    let mut prev = start;
    let mut inserts: Vec<(isize, Vec<usize>)> = Vec::new();
    for &(ci, k) in &placed {
        let c = &cs[ci];
        let (lo, hi) = (c.lo + k * nb, c.hi + k * nb);
        let p = prev.max(lo - 1);
        assert!(p <= hi, "crossing order is not realizable");
        prev = p;
        let lw = lift_word(a, c.forward);
        let m = (c.ia as isize + p + 1 - lo).rem_euclid(na) as usize;
        let lp = rotate(&lw, m);
        let lp = if c.lr == positive { lp } else { inverse(&lp) };
        inserts.push((p, lp));
    }
    let mut out = Vec::new();
    let mut it = inserts.into_iter().peekable();
    for q in start + 1..=start + nb {
        while let Some((p, _)) = it.peek() {
            if *p == q - 1 {
                out.extend(it.next().unwrap().1);
            } else {
                break;
            }
        }
        out.push(at(b, q));
    }
    for (_, lp) in it {
        out.extend(lp);
    }
    words::cyclic_reduce(&out)
}

/// Image of `b` under `T_a^k`.
pub fn twist_curve(sp: &Spine, a: &Curve, k: i64, b: &Curve) -> Curve {
    if k == 0 || !a.is_essential() || !b.is_essential() || a == b {
        return b.clone();
    }
    let mut w = b.word.clone();
    for _ in 0..k.unsigned_abs() {
        w = twist_once(sp, &a.word, &w, k > 0);
    }
    curve_from_word(sp, &w)
}

/// Single-generator word `T_c^k`.
pub fn dehn_twist(c: &Curve, k: i64) -> Result<MappingClassWord, CurveError> {
    if !c.is_essential() {
        return Err(CurveError::CurveNotEssential);
    }
    Ok(if k == 0 {
        MappingClassWord::identity()
    } else {
        MappingClassWord {
            word: vec![(c.clone(), k)],
        }
    })
}

pub fn apply_mapping_class(sp: &Spine, w: &MappingClassWord, c: &Curve) -> Curve {
    let mut cur = c.clone();
    for (a, k) in w.word.iter().rev() {
        cur = twist_curve(sp, a, *k, &cur);
    }
    cur
}

/// Components of the multicurve with the given normal coordinates, as
/// closed spine words.
pub fn trace_coordinates(sp: &Spine, x: &[u32]) -> Result<Vec<Vec<usize>>, CurveError> {
    let ne = sp.edge_count();
    if x.len() != ne {
        return Err(CurveError::BadCoordinates(format!(
            "expected {ne} coordinates, got {}",
            x.len()
        )));
    }
    let xh = |h: usize| x[h / 2] as i64;
    for u in 0..sp.node_count() {
        let r = sp.rotation(u);
        if r.len() != 3 {
            return Err(CurveError::BadCoordinates("spine is not trivalent".into()));
        }
        let (a, b, c) = (xh(r[0]), xh(r[1]), xh(r[2]));
        if (a + b + c) % 2 != 0 || a > b + c || b > a + c || c > a + b {
            return Err(CurveError::BadCoordinates(format!("node {u} fails matching")));
        }
    }
    let corner = |hj: usize| -> i64 {
        // strands turning from hj to sigma(hj)
        let h1 = sp.sigma(hj);
        let h2 = sp.sigma(h1);
        (xh(hj) + xh(h1) - xh(h2)) / 2
    };
    let mut visited: Vec<Vec<bool>> = x.iter().map(|&n| vec![false; n as usize]).collect();
    let mut comps = Vec::new();
    for e in 0..ne {
        for p0 in 0..x[e] as i64 {
            if visited[e][p0 as usize] {
                continue;
            }
            let mut word = Vec::new();
            let (mut h, mut p) = (2 * e, p0);
            loop {
                let ep = if h % 2 == 0 { p } else { xh(h) - 1 - p };
                if visited[h / 2][ep as usize] {
                    break;
                }
                visited[h / 2][ep as usize] = true;
                word.push(h);
                let hj = h ^ 1;
                let pj = xh(hj) - 1 - p;
                let c = corner(hj);
                if pj < c {
                    let out = sp.sigma(hj);
                    p = xh(out) - 1 - pj;
                    h = out;
                } else {
                    let out = sp.sigma_inv(hj);
                    p = xh(hj) - 1 - pj;
                    h = out;
                }
            }
            comps.push(word);
        }
    }
    Ok(comps)
}

/// All normal coordinate vectors of total weight at most `max_weight`
/// satisfying the matching conditions, by weight then lexicographically.
pub fn coordinate_vectors(sp: &Spine, max_weight: u32) -> Vec<Vec<u32>> {
    let ne = sp.edge_count();
    if sp.node_count() == 0 || ne == 0 || sp.marked().len() < 3 {
        return Vec::new();
    }
    // Nodes become checkable once all their edges are assigned.
    let mut check_at: Vec<Vec<[usize; 3]>> = vec![Vec::new(); ne];
    for u in 0..sp.node_count() {
        let r = sp.rotation(u);
        let es = [r[0] / 2, r[1] / 2, r[2] / 2];
        let last = *es.iter().max().unwrap();
        check_at[last].push(es);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; ne];
    fn rec(
        e: usize,
        left: u32,
        cur: &mut Vec<u32>,
        check_at: &[Vec<[usize; 3]>],
        out: &mut Vec<Vec<u32>>,
    ) {
        if e == cur.len() {
            if cur.iter().any(|&v| v > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left {
            cur[e] = v;
            let ok = check_at[e].iter().all(|es| {
                let (a, b, c) = (cur[es[0]], cur[es[1]], cur[es[2]]);
                (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
            });
            if ok {
                rec(e + 1, left - v, cur, check_at, out);
            }
        }
        cur[e] = 0;
    }
    rec(0, max_weight, &mut cur, &check_at, &mut out);
    out.sort_by(|a, b| {
        let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
        (sa, a).cmp(&(sb, b))
    });
    out
}

/// Multicurve with the given coordinates, if every component is essential
/// and the components are pairwise non-homotopic.
pub fn multicurve_from_coordinates(sp: &Spine, x: &[u32]) -> Option<Multicurve> {
    let comps = trace_coordinates(sp, x).ok()?;
    let mut curves: Vec<Curve> = comps.iter().map(|w| curve_from_word(sp, w)).collect();
    if curves.iter().any(|c| !c.is_essential()) {
        return None;
    }
    let n = curves.len();
    curves.sort_by(order_key);
    curves.dedup();
    if curves.len() != n {
        return None;
    }
    Some(Multicurve { curves })
}

/// Curve with the given coordinates, if it is a single essential curve.
pub fn curve_from_coordinates(sp: &Spine, x: &[u32]) -> Result<Curve, CurveError> {
    let comps = trace_coordinates(sp, x)?;
    if comps.len() != 1 {
        return Err(CurveError::BadCoordinates(format!(
            "{} components",
            comps.len()
        )));
    }
    Ok(curve_from_word(sp, &comps[0]))
}

/// Every multicurve of total weight at most `weight_bound`, each once.
pub fn enumerate_multicurves(sp: &Spine, weight_bound: u32) -> Vec<Multicurve> {
    coordinate_vectors(sp, weight_bound)
        .iter()
        .filter_map(|x| multicurve_from_coordinates(sp, x))
        .collect()
}

/// Every essential curve of weight at most `weight_bound`.
pub fn enumerate_curves(sp: &Spine, weight_bound: u32) -> Vec<Curve> {
    enumerate_multicurves(sp, weight_bound)
        .into_iter()
        .filter(|m| m.len() == 1)
        .map(|m| m.curves.into_iter().next().unwrap())
        .collect()
}

fn partition_key(sp: &Spine, c: &Curve) -> Vec<usize> {
    let (a, b) = sides(sp, c);
    if a.len() <= b.len() && !(a.len() == b.len() && b < a) {
        a
    } else {
        b
    }
}

/// Canonical key of the smaller side (ties: the side not containing the
/// larger lexicographic set).
pub fn small_side(sp: &Spine, c: &Curve) -> Vec<usize> {
    partition_key(sp, c)
}

fn normalized_subset(n: usize, s: &[usize]) -> Vec<usize> {
    let comp: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
    let mut a = s.to_vec();
    a.sort_unstable();
    if a.len() < comp.len() || (a.len() == comp.len() && a <= comp) {
        a
    } else {
        comp
    }
}

const CHAIN_WEIGHT_CAP: u32 = 24;

/// The filling chain: curves around consecutive marked pairs, consecutive
/// ones meeting twice, others disjoint.
pub fn filling_chain(sp: &Spine) -> &[Curve] {
    sp.chain_cache().get_or_init(|| compute_chain(sp))
}

fn compute_chain(sp: &Spine) -> Vec<Curve> {
    let n = sp.marked().len();
    if n < 4 {
        return Vec::new();
    }
    let mut targets: Vec<Vec<usize>> = Vec::new();
    for i in 0..n - 1 {
        let t = normalized_subset(n, &[i, i + 1]);
        if !targets.contains(&t) {
            targets.push(t);
        }
    }
    let mut w = 4;
    loop {
        let curves = enumerate_curves(sp, w);
        let cands: Vec<Vec<Curve>> = targets
            .iter()
            .map(|t| {
                curves
                    .iter()
                    .filter(|c| &partition_key(sp, c) == t)
                    .cloned()
                    .collect()
            })
            .collect();
        let mut chosen = Vec::new();
        if backtrack_chain(sp, &cands, &mut chosen) {
            return chosen;
        }
        assert!(w < CHAIN_WEIGHT_CAP, "no filling chain within weight cap");
        w += 2;
    }
}

fn backtrack_chain(sp: &Spine, cands: &[Vec<Curve>], chosen: &mut Vec<Curve>) -> bool {
    let k = chosen.len();
    if k == cands.len() {
        return true;
    }
    for c in &cands[k] {
        let ok = chosen.iter().enumerate().all(|(j, d)| {
            let want = if j + 1 == k { 2 } else { 0 };
            intersection_number(sp, c, d) == want
        });
        if ok {
            chosen.push(c.clone());
            if backtrack_chain(sp, cands, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Alexander-method test: the word fixes every curve of the filling chain.
pub fn is_identity_class(sp: &Spine, w: &MappingClassWord) -> bool {
    if w.is_empty() || sp.marked().len() < 4 {
        return true;
    }
    filling_chain(sp)
        .iter()
        .all(|c| &apply_mapping_class(sp, w, c) == c)
}

/// Action of a word on the filling chain; equal keys mean equal classes.
pub fn class_key(sp: &Spine, w: &MappingClassWord) -> Vec<Curve> {
    filling_chain(sp)
        .iter()
        .map(|c| apply_mapping_class(sp, w, c))
        .collect()
}

/// Curves around the runs `q_i, ..., q_j` of consecutive marked points,
/// each the boundary of a neighbourhood of the chain curves it contains.
/// Their twists generate the pure mapping class group.
pub fn generating_curves(sp: &Spine) -> &[Curve] {
    sp.generator_cache().get_or_init(|| compute_generators(sp))
}

fn compute_generators(sp: &Spine) -> Vec<Curve> {
    let n = sp.marked().len();
    if n < 4 {
        return Vec::new();
    }
    let chain = filling_chain(sp).to_vec();
    // chain[i] surrounds {q_i, q_{i+1}} (n = 4 keeps only two of them).
    let chain_for = |i: usize| -> Option<&Curve> {
        let t = normalized_subset(n, &[i, i + 1]);
        chain.iter().find(|c| partition_key(sp, c) == t)
    };
    let mut out: Vec<Curve> = Vec::new();
    for len in 2..=n - 2 {
        for i in 0..=n - len {
            let run: Vec<usize> = (i..i + len).collect();
            let t = normalized_subset(n, &run);
            if out.iter().any(|c| partition_key(sp, c) == t) {
                continue;
            }
            if len == 2 {
                out.push(chain_for(i).unwrap().clone());
                continue;
            }
            let inner: Vec<&Curve> = (i..i + len - 1).filter_map(chain_for).collect();
            let mut w = 4;
            let found = loop {
                let hit = enumerate_curves(sp, w).into_iter().find(|c| {
                    partition_key(sp, c) == t
                        && inner.iter().all(|d| intersection_number(sp, c, d) == 0)
                });
                if hit.is_some() || w >= CHAIN_WEIGHT_CAP + 8 {
                    break hit;
                }
                w += 2;
            };
            if let Some(c) = found {
                out.push(c);
            }
        }
    }
    out
}

/// Words over the generating twists of length at most `length_bound`,
/// one per mapping class (by action on the filling chain).
pub fn enumerate_mapping_classes(sp: &Spine, length_bound: usize) -> Vec<MappingClassWord> {
    let gens = generating_curves(sp);
    let mut out = vec![MappingClassWord::identity()];
    let mut keys = BTreeSet::from([class_key(sp, &MappingClassWord::identity())]);
    let mut frontier = vec![MappingClassWord::identity()];
    for _ in 0..length_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                for e in [1i64, -1] {
                    let mut cand = w.clone();
                    cand.word.push((g.clone(), e));
                    let cand = cand.simplified();
                    if cand.syllable_length() != w.syllable_length() + 1 {
                        continue;
                    }
                    let key = class_key(sp, &cand);
                    if keys.insert(key) {
                        out.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}
