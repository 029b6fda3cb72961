//! Thurston matrices, obstructions and Levy cycles.

pub mod lp;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::cover::{CurveLift, OrbifoldKind, PLThurstonMap};
use crate::curves::{
    enumerate_curves, intersection_number, small_side, Curve, CurveClass, Multicurve,
};
use crate::decomposition::thick_parts;
use crate::parabolic::{eigen_class, extract_affine_model, EigenClass};
use lp::{feasible_point, q};

pub type Rat = Ratio<i64>;

/// `M[i][j]` is the sum of `1/deg` over components of `f^{-1}(curves[j])`
/// homotopic to `curves[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThurstonMatrix {
    pub curves: Vec<Curve>,
    pub entries: Vec<Vec<Rat>>,
}

impl ThurstonMatrix {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

/// Search limits. Curves are enumerated up to `max_weight`; mapping classes
/// up to `max_word_length` twist syllables.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_weight: u32,
    pub max_word_length: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_weight: 12,
            max_word_length: 4,
            deadline: None,
        }
    }
}

impl Budget {
    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Memoized curve lifts for one map.
pub struct Pullbacks<'a> {
    f: &'a PLThurstonMap,
    cache: BTreeMap<Curve, CurveLift>,
}

impl<'a> Pullbacks<'a> {
    pub fn new(f: &'a PLThurstonMap) -> Self {
        Pullbacks {
            f,
            cache: BTreeMap::new(),
        }
    }

    pub fn map(&self) -> &'a PLThurstonMap {
        self.f
    }

    pub fn lift(&mut self, c: &Curve) -> &CurveLift {
        let f = self.f;
        self.cache.entry(c.clone()).or_insert_with(|| f.lift_curve(c))
    }

    pub fn pullback(&mut self, c: &Curve) -> Vec<(Curve, usize)> {
        self.lift(c)
            .components
            .iter()
            .map(|k| (k.curve.clone(), k.degree))
            .collect()
    }
}

pub fn thurston_matrix(f: &PLThurstonMap, curves: &[Curve]) -> ThurstonMatrix {
    thurston_matrix_with(&mut Pullbacks::new(f), curves)
}

pub fn thurston_matrix_with(pb: &mut Pullbacks, curves: &[Curve]) -> ThurstonMatrix {
    let n = curves.len();
    let mut entries = vec![vec![Rat::zero(); n]; n];
    for (j, delta) in curves.iter().enumerate() {
        for (alpha, deg) in pb.pullback(delta) {
            if let Some(i) = curves.iter().position(|g| *g == alpha) {
                entries[i][j] += Rat::new(1, deg as i64);
            }
        }
    }
    ThurstonMatrix {
        curves: curves.to_vec(),
        entries,
    }
}

fn big(r: &Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// A nonzero `v >= 0` with `Mv >= v`, normalized to sum 1, if one exists.
/// Such a vector exists iff the leading eigenvalue is at least 1.
pub fn spectral_witness(m: &[Vec<Rat>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    // Variables v (n), slack s (n): (M - I) v - s = 0, sum v = 1.
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![q(0); 2 * n];
        for j in 0..n {
            row[j] = big(&m[i][j]);
        }
        row[i] -= q(1);
        row[n + i] = q(-1);
        a.push(row);
        b.push(q(0));
    }
    let mut row = vec![q(0); 2 * n];
    for v in row.iter_mut().take(n) {
        *v = q(1);
    }
    a.push(row);
    b.push(q(1));
    feasible_point(&a, &b).map(|x| x[..n].to_vec())
}

pub fn spectral_at_least_one(m: &[Vec<Rat>]) -> bool {
    spectral_witness(m).is_some()
}

/// A vector `v >= 1` with `Mv >= v`, if one exists.
pub fn simple_witness(m: &[Vec<Rat>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    // v = 1 + u: (M - I) u - s = (I - M) 1.
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![q(0); 2 * n];
        let mut rhs = q(1);
        for j in 0..n {
            row[j] = big(&m[i][j]);
            rhs -= big(&m[i][j]);
        }
        row[i] -= q(1);
        row[n + i] = q(-1);
        a.push(row);
        b.push(rhs);
    }
    feasible_point(&a, &b).map(|x| x[..n].iter().map(|u| u + BigRational::one()).collect())
}

pub fn is_simple_obstruction(m: &[Vec<Rat>]) -> bool {
    simple_witness(m).is_some()
}

/// Every essential preimage component of every curve is homotopic to a curve
/// of the list.
pub fn is_stable(f: &PLThurstonMap, curves: &[Curve]) -> bool {
    is_stable_with(&mut Pullbacks::new(f), curves)
}

pub fn is_stable_with(pb: &mut Pullbacks, curves: &[Curve]) -> bool {
    curves.iter().all(|g| {
        pb.pullback(g)
            .iter()
            .all(|(a, _)| !a.is_essential() || curves.contains(a))
    })
}

/// Close `seeds` under pullback. Fails if the result cannot be a
/// multicurve.
pub fn stable_closure(pb: &mut Pullbacks, seeds: &[Curve]) -> Option<Multicurve> {
    let sp = pb.map().spine();
    let cap = sp.marked().len().saturating_sub(3);
    let mut out: Vec<Curve> = Vec::new();
    let mut queue: Vec<Curve> = seeds.to_vec();
    while let Some(c) = queue.pop() {
        if !c.is_essential() || out.contains(&c) {
            continue;
        }
        if out.iter().any(|d| intersection_number(sp, d, &c) != 0) {
            return None;
        }
        out.push(c.clone());
        if out.len() > cap {
            return None;
        }
        for (a, _) in pb.pullback(&c) {
            queue.push(a);
        }
    }
    Some(Multicurve::new(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found(Multicurve, ThurstonMatrix),
    NotFoundWithinBudget,
}

/// First stable obstruction in enumeration order.
///
/// Seeds are single curves: the closure of any curve in an irreducible
/// block of leading eigenvalue at least 1 is itself an obstruction, so no
/// obstruction is missed by skipping larger seeds.
pub fn search_obstruction(f: &PLThurstonMap, budget: &Budget) -> SearchResult {
    search_obstruction_with(&mut Pullbacks::new(f), budget)
}

pub fn search_obstruction_with(pb: &mut Pullbacks, budget: &Budget) -> SearchResult {
    let sp = pb.map().spine();
    if sp.marked().len() < 4 {
        return SearchResult::NotFoundWithinBudget;
    }
    let mut seen = Vec::new();
    for c in enumerate_curves(sp, budget.max_weight) {
        if budget.expired() {
            break;
        }
        let Some(mc) = stable_closure(pb, &[c]) else {
            continue;
        };
        if seen.contains(&mc) {
            continue;
        }
        let m = thurston_matrix_with(pb, &mc.curves);
        if spectral_at_least_one(&m.entries) {
            debug_assert!(is_stable_with(pb, &mc.curves));
            return SearchResult::Found(mc, m);
        }
        seen.push(mc);
    }
    SearchResult::NotFoundWithinBudget
}

/// `f^{-1}` of `cycle[i + 1]` has a degree-one component homotopic to
/// `cycle[i]`, cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevyWitness {
    pub cycle: Vec<Curve>,
    pub degrees: Vec<usize>,
    pub degenerate: bool,
    /// Marked indices inside each distinguished disk `D_i` (degenerate only).
    pub disk_sides: Vec<Vec<usize>>,
}

/// Marked indices of `mask`-side of a parity vector.
fn marked_side(marked: &[usize], side: &[bool], which: bool) -> Vec<usize> {
    (0..marked.len()).filter(|&i| side[marked[i]] == which).collect()
}

/// If the side of lift component `comp` whose marked set (through `embed`)
/// is `disk` maps into a single side of the lifted curve, return the marked
/// set of that image side.
pub fn disk_image(
    f: &PLThurstonMap,
    lift: &CurveLift,
    comp: usize,
    disk: &[usize],
) -> Option<Vec<usize>> {
    let c = &lift.components[comp];
    if c.degree != 1 {
        return None;
    }
    let embedded: Vec<usize> = f.marked().iter().map(|&q| f.embed()[q]).collect();
    let which = [false, true]
        .into_iter()
        .find(|&s| marked_side(&embedded, &c.sides, s) == disk)?;
    let mut image: Option<bool> = None;
    for (y, &s) in c.sides.iter().enumerate() {
        if s != which {
            continue;
        }
        let t = lift.target_sides[f.vertex_image()[y]];
        match image {
            None => image = Some(t),
            Some(u) if u != t => return None,
            _ => {}
        }
    }
    Some(marked_side(f.marked(), &lift.target_sides, image?))
}

fn other_side(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

/// Elementary cycles of a digraph on `0..n`, each listed from its least
/// vertex.
fn elementary_cycles(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn go(
        start: usize,
        v: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for &w in &adj[v] {
            if w == start {
                out.push(path.clone());
            } else if w > start && !path.contains(&w) {
                path.push(w);
                go(start, w, adj, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        go(s, s, adj, &mut vec![s], &mut out);
    }
    out
}

pub fn detect_levy(f: &PLThurstonMap, curves: &[Curve]) -> Option<LevyWitness> {
    detect_levy_with(&mut Pullbacks::new(f), curves)
}

pub fn detect_levy_with(pb: &mut Pullbacks, curves: &[Curve]) -> Option<LevyWitness> {
    let f = pb.map();
    let nq = f.marked().len();
    let n = curves.len();
    // links[i][j]: components of f^{-1}(curves[j]) of degree 1 homotopic to
    // curves[i].
    let mut links = vec![vec![Vec::new(); n]; n];
    for (j, delta) in curves.iter().enumerate() {
        let lift = pb.lift(delta).clone();
        for (k, c) in lift.components.iter().enumerate() {
            if c.degree != 1 {
                continue;
            }
            if let Some(i) = curves.iter().position(|g| *g == c.curve) {
                links[i][j].push(k);
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| !links[i][j].is_empty()).collect())
        .collect();
    let cycles = elementary_cycles(n, &adj);
    let mut fallback = None;
    for cyc in &cycles {
        let len = cyc.len();
        let mut choice = vec![0usize; len];
        loop {
            if let Some(sides) = degenerate_sides(pb, curves, cyc, &links, &choice, nq) {
                return Some(LevyWitness {
                    cycle: cyc.iter().map(|&i| curves[i].clone()).collect(),
                    degrees: vec![1; len],
                    degenerate: true,
                    disk_sides: sides,
                });
            }
            // Next component choice.
            let mut k = 0;
            while k < len {
                choice[k] += 1;
                if choice[k] < links[cyc[k]][cyc[(k + 1) % len]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
        }
        if fallback.is_none() {
            fallback = Some(LevyWitness {
                cycle: cyc.iter().map(|&i| curves[i].clone()).collect(),
                degrees: vec![1; len],
                degenerate: false,
                disk_sides: Vec::new(),
            });
        }
    }
    fallback
}

fn degenerate_sides(
    pb: &mut Pullbacks,
    curves: &[Curve],
    cyc: &[usize],
    links: &[Vec<Vec<usize>>],
    choice: &[usize],
    nq: usize,
) -> Option<Vec<Vec<usize>>> {
    let f = pb.map();
    let sp = f.spine();
    let first = small_side(sp, &curves[cyc[0]]);
    let len = cyc.len();
    for d0 in [first.clone(), other_side(nq, &first)] {
        let mut d = d0.clone();
        let mut out = Vec::with_capacity(len);
        let mut ok = true;
        for i in 0..len {
            let (a, b) = (cyc[i], cyc[(i + 1) % len]);
            let comp = links[a][b][choice[i]];
            let lift = pb.lift(&curves[b]).clone();
            out.push(d.clone());
            match disk_image(f, &lift, comp, &d) {
                Some(next) => d = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && d == d0 {
            return Some(out);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalObstruction {
    /// The canonical obstruction; empty for an unobstructed map.
    Found(Multicurve, ThurstonMatrix),
    Inconclusive(String),
}

/// Budgeted canonical obstruction.
///
/// Conclusive answers are only given with a certificate: at most three
/// marked points; a `(2,2,2,2)` map with `Q = P` whose matrix has equal or
/// non-integer eigenvalues; or a found stable obstruction whose subsets can
/// all be decided against the characterization of canonical obstructions
/// using only pieces with at most three punctures or homeomorphic disk
/// cycles.
pub fn canonical_obstruction(f: &PLThurstonMap, budget: &Budget) -> CanonicalObstruction {
    let empty = || {
        CanonicalObstruction::Found(
            Multicurve::default(),
            ThurstonMatrix {
                curves: Vec::new(),
                entries: Vec::new(),
            },
        )
    };
    let nq = f.marked().len();
    if nq <= 3 {
        return empty();
    }
    let mut pb = Pullbacks::new(f);
    let kind = f.orbifold_data().kind;
    if kind == OrbifoldKind::Parabolic(6) && f.postcritical().len() == nq {
        match extract_affine_model(f).and_then(|m| eigen_class(m.a)) {
            Ok(e) => match e.integer_pair {
                Some((l1, l2)) if l1 != l2 => {}
                _ if e.class == EigenClass::HasUnitEigenvalue => {
                    return CanonicalObstruction::Inconclusive(
                        "matrix has an eigenvalue of modulus one".into(),
                    );
                }
                _ => return empty(),
            },
            Err(e) => return CanonicalObstruction::Inconclusive(e.to_string()),
        }
    }
    let gamma = match search_obstruction_with(&mut pb, budget) {
        SearchResult::Found(g, _) => g,
        SearchResult::NotFoundWithinBudget => {
            return CanonicalObstruction::Inconclusive(
                "no obstruction found within budget and no certificate of absence".into(),
            )
        }
    };
    let n = gamma.len();
    let mut certified: Vec<Vec<usize>> = Vec::new();
    let mut uncertain: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let sub: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let cs: Vec<Curve> = sub.iter().map(|&i| gamma.curves[i].clone()).collect();
        if !is_stable_with(&mut pb, &cs) {
            continue;
        }
        let m = thurston_matrix_with(&mut pb, &cs);
        if !spectral_at_least_one(&m.entries) {
            continue;
        }
        if pieces_certified(&mut pb, &cs) {
            certified.push(sub);
        } else {
            uncertain.push(sub);
        }
    }
    if certified.is_empty() {
        return CanonicalObstruction::Inconclusive(
            "found obstruction has pieces that cannot be certified".into(),
        );
    }
    let meet: Vec<usize> = (0..n)
        .filter(|i| certified.iter().all(|s| s.contains(i)))
        .collect();
    if uncertain.iter().any(|u| !meet.iter().all(|i| u.contains(i))) {
        return CanonicalObstruction::Inconclusive(
            "a sub-obstruction with uncertified pieces may be smaller".into(),
        );
    }
    let cs: Vec<Curve> = meet.iter().map(|&i| gamma.curves[i].clone()).collect();
    let m = thurston_matrix_with(&mut pb, &cs);
    CanonicalObstruction::Found(Multicurve::new(cs), m)
}

/// Every periodic piece of the decomposition along `cs` either has at most
/// three punctures or lies in a cycle of disks mapped homeomorphically.
fn pieces_certified(pb: &mut Pullbacks, cs: &[Curve]) -> bool {
    let f = pb.map();
    let sp = f.spine();
    let nq = f.marked().len();
    let parts = thick_parts(sp, cs);
    // Marked points hidden in trivial preimage pockets do not lie in the
    // thick preimage pieces.
    let embedded: Vec<usize> = f.marked().iter().map(|&q| f.embed()[q]).collect();
    let mut hidden = vec![false; nq];
    for c in cs {
        let lift = pb.lift(c).clone();
        for comp in &lift.components {
            if comp.curve.class() == CurveClass::Essential {
                continue;
            }
            let a = marked_side(&embedded, &comp.sides, false);
            let b = marked_side(&embedded, &comp.sides, true);
            let pocket = if a.len() <= b.len() { a } else { b };
            for i in pocket {
                hidden[i] = true;
            }
        }
    }
    let region_of = |i: usize| parts.iter().position(|p| p.marked.contains(&i)).unwrap();
    // Piece map, where determined by a visible marked point.
    let mut image: Vec<Option<usize>> = vec![None; parts.len()];
    for (r, p) in parts.iter().enumerate() {
        for &i in &p.marked {
            if hidden[i] {
                continue;
            }
            let t = region_of(f.dynamics()[i]);
            match image[r] {
                None => image[r] = Some(t),
                Some(u) if u != t => return false,
                _ => {}
            }
        }
    }
    // Homeomorphic disk steps.
    let mut homeo: Vec<Option<usize>> = vec![None; parts.len()];
    for (r, p) in parts.iter().enumerate() {
        if p.boundary.len() != 1 {
            continue;
        }
        let g = &cs[p.boundary[0]];
        'outer: for delta in cs {
            let lift = pb.lift(delta).clone();
            for (k, comp) in lift.components.iter().enumerate() {
                if comp.curve != *g {
                    continue;
                }
                if let Some(img) = disk_image(f, &lift, k, &p.marked) {
                    let target = parts
                        .iter()
                        .position(|q| q.boundary.len() == 1 && q.marked == img);
                    if let Some(t) = target {
                        homeo[r] = Some(t);
                        break 'outer;
                    }
                }
            }
        }
    }
    for (r, p) in parts.iter().enumerate() {
        if p.punctures() <= 3 {
            continue;
        }
        // Periodic under the piece map?
        let Some(mut cur) = image[r] else { return false };
        let mut periodic = false;
        for _ in 0..parts.len() {
            if cur == r {
                periodic = true;
                break;
            }
            match image[cur] {
                Some(nx) => cur = nx,
                None => return false,
            }
        }
        if !periodic {
            continue;
        }
        let mut cur = r;
        for _ in 0..parts.len() {
            match homeo[cur] {
                Some(nx) => cur = nx,
                None => return false,
            }
            if cur == r {
                break;
            }
        }
        if cur != r {
            return false;
        }
    }
    true
}

/// Simultaneous permutation equality of two square matrices.
pub fn same_up_to_permutation(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if (0..n).all(|i| (0..n).all(|j| a[i][j] == b[perm[i]][perm[j]])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
