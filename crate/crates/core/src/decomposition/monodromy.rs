//! Sheet permutations of a branched cover and Hurwitz equivalence.
//!
//! Sheets over each codomain triangle are labelled by transport from
//! triangle 0 along a spanning tree of the dual graph. The primal edges not
//! crossed by that tree form a spanning tree `T` of the vertices; a loop
//! around a vertex only changes labels where it crosses `T`. Loops start in
//! the wedge just after the edge to the parent in `T` and are listed in
//! depth-first preorder, which makes them a standard system.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::cover::PLThurstonMap;

/// A permutation of sheets, `p[i]` the image of `i`.
pub type Perm = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyTuple {
    pub degree: usize,
    /// Codomain vertices, in loop order.
    pub branch_values: Vec<usize>,
    pub perms: Vec<Perm>,
}

/// `a` then `b`.
pub fn then(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&i| b[i]).collect()
}

pub fn inverse(a: &[usize]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j] = i;
    }
    out
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// Cycle lengths, descending.
pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

impl MonodromyTuple {
    pub fn product(&self) -> Perm {
        self.perms.iter().fold(identity(self.degree), |acc, p| then(&acc, p))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for p in &self.perms {
                if !seen[p[i]] {
                    seen[p[i]] = true;
                    queue.push_back(p[i]);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Sorted cycle types of the permutations.
    pub fn passport(&self) -> Vec<Vec<usize>> {
        let mut p: Vec<Vec<usize>> = self.perms.iter().map(|p| cycle_type(p)).collect();
        p.sort();
        p
    }
}

/// Sheet permutations around the branch values of the underlying cover.
pub fn monodromy_tuple(f: &PLThurstonMap) -> MonodromyTuple {
    let t0 = f.codomain();
    let dom = f.domain();
    let img = f.triangle_image();
    let vimg = f.vertex_image();
    let d = f.degree();

    // Domain triangle across the edge over `a -> b` from `tau`.
    let cross = |tau: usize, a: usize, b: usize| -> usize {
        let tv = dom.triangles()[tau];
        let k = (0..3)
            .find(|&k| vimg[tv[k]] == a && vimg[tv[(k + 1) % 3]] == b)
            .expect("edge lies over an edge");
        dom.triangle_left_of(tv[(k + 1) % 3], tv[k]).expect("closed surface")
    };

    let mut sheets: Vec<Option<Vec<usize>>> = vec![None; t0.triangle_count()];
    sheets[0] = Some((0..dom.triangle_count()).filter(|&t| img[t] == 0).collect());
    let mut dual_tree: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let tv = t0.triangles()[t];
        for k in 0..3 {
            let (a, b) = (tv[k], tv[(k + 1) % 3]);
            let u = t0.triangle_left_of(b, a).expect("closed surface");
            if sheets[u].is_some() {
                continue;
            }
            let here = sheets[t].as_ref().unwrap();
            sheets[u] = Some(here.iter().map(|&tau| cross(tau, a, b)).collect());
            dual_tree.insert((a.min(b), a.max(b)));
            queue.push_back(u);
        }
    }
    let sheets: Vec<Vec<usize>> = sheets.into_iter().map(|s| s.unwrap()).collect();
    let label: Vec<BTreeMap<usize, usize>> = sheets
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, &tau)| (tau, i)).collect())
        .collect();
    let crossing = |t: usize, a: usize, b: usize| -> Perm {
        let u = t0.triangle_left_of(b, a).unwrap();
        sheets[t].iter().map(|&tau| label[u][&cross(tau, a, b)]).collect()
    };

    let in_tree = |a: usize, b: usize| !dual_tree.contains(&(a.min(b), a.max(b)));
    let root = 0usize;
    let mut order = Vec::new();
    let mut loops: BTreeMap<usize, Perm> = BTreeMap::new();
    // Depth-first over T: (vertex, parent).
    let mut stack = vec![(root, None::<usize>)];
    while let Some((v, parent)) = stack.pop() {
        order.push(v);
        let star = t0.star(v);
        let link = t0.link(v);
        let m = star.len();
        // star[i] spans link[i] -> link[i + 1].
        let start = match parent {
            Some(p) => link.iter().position(|&w| w == p).unwrap(),
            None => 0,
        };
        let mut perm = identity(d);
        let mut children = Vec::new();
        for s in 0..m {
            let i = (start + s) % m;
            let w = link[(i + 1) % m];
            if in_tree(v, w) {
                perm = then(&perm, &crossing(star[i], w, v));
                if Some(w) != parent {
                    children.push(w);
                }
            }
        }
        loops.insert(v, perm);
        for &c in children.iter().rev() {
            stack.push((c, Some(v)));
        }
    }
    let mut branch_values = Vec::new();
    let mut perms = Vec::new();
    for v in order {
        let p = &loops[&v];
        if *p != identity(d) {
            branch_values.push(v);
            perms.push(p.clone());
        }
    }
    let t = MonodromyTuple {
        degree: d,
        branch_values,
        perms,
    };
    assert_eq!(t.product(), identity(d), "loops do not form a standard system");
    assert!(t.is_transitive(), "domain is connected");
    t
}

/// Relabel sheets so that the tuple is in canonical form under
/// simultaneous conjugation; requires a transitive tuple.
pub fn canonical_form(perms: &[Perm], d: usize) -> Vec<Perm> {
    let mut best: Option<Vec<Perm>> = None;
    for start in 0..d {
        // New label of each old sheet, by breadth-first discovery.
        let mut new = vec![usize::MAX; d];
        new[start] = 0;
        let mut next = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for p in perms {
                if new[p[i]] == usize::MAX {
                    new[p[i]] = next;
                    next += 1;
                    queue.push_back(p[i]);
                }
            }
        }
        if next < d {
            return perms.to_vec();
        }
        let old = inverse(&new);
        let relabelled: Vec<Perm> = perms
            .iter()
            .map(|p| (0..d).map(|j| new[p[old[j]]]).collect())
            .collect();
        if best.as_ref().is_none_or(|b| relabelled < *b) {
            best = Some(relabelled);
        }
    }
    best.unwrap_or_default()
}

/// A bijection `pi` of sheets with `pi a_i pi^-1 = b_i` for every `i`.
pub fn simultaneous_conjugator(a: &[Perm], b: &[Perm], d: usize) -> Option<Perm> {
    if a.len() != b.len() {
        return None;
    }
    'start: for x in 0..d {
        let mut pi = vec![usize::MAX; d];
        pi[0] = x;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (p, q) in a.iter().zip(b) {
                // pi(p(i)) = q(pi(i)).
                let (src, dst) = (p[i], q[pi[i]]);
                if pi[src] == usize::MAX {
                    pi[src] = dst;
                    queue.push_back(src);
                } else if pi[src] != dst {
                    continue 'start;
                }
            }
        }
        if pi.contains(&usize::MAX) {
            continue;
        }
        let mut seen = vec![false; d];
        if pi.iter().all(|&j| !std::mem::replace(&mut seen[j], true)) {
            return Some(pi);
        }
    }
    None
}

/// The two elementary moves at position `i`, preserving the product.
pub fn hurwitz_moves(perms: &[Perm], i: usize) -> [Vec<Perm>; 2] {
    let (g, h) = (&perms[i], &perms[i + 1]);
    let mut fwd = perms.to_vec();
    fwd[i] = then(&then(g, h), &inverse(g));
    fwd[i + 1] = g.clone();
    let mut back = perms.to_vec();
    back[i] = h.clone();
    back[i + 1] = then(&then(&inverse(h), g), h);
    [fwd, back]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Hurwitz {
    /// Equivalent; with a fixed branch correspondence, the sheet bijection.
    Equivalent(Option<Perm>),
    NotEquivalent,
    /// The orbit search exceeded its budget.
    Inconclusive,
}

/// Hurwitz equivalence of two covers given by their tuples.
///
/// With `h0`, branch value `i` of `a` corresponds to branch value `h0[i]`
/// of `b` and loops are assumed to correspond; only a simultaneous
/// conjugation is searched for. Without it, the braid orbit of `a` is
/// explored up to `max_orbit` conjugacy classes.
pub fn hurwitz_equivalent(
    a: &MonodromyTuple,
    b: &MonodromyTuple,
    h0: Option<&[usize]>,
    max_orbit: usize,
) -> Hurwitz {
    if a.degree != b.degree || a.perms.len() != b.perms.len() || a.passport() != b.passport() {
        return Hurwitz::NotEquivalent;
    }
    let d = a.degree;
    if let Some(h0) = h0 {
        let moved: Vec<Perm> = h0.iter().map(|&j| b.perms[j].clone()).collect();
        return match simultaneous_conjugator(&a.perms, &moved, d) {
            Some(pi) => Hurwitz::Equivalent(Some(pi)),
            None => Hurwitz::NotEquivalent,
        };
    }
    let target = canonical_form(&b.perms, d);
    let start = canonical_form(&a.perms, d);
    if start == target {
        return Hurwitz::Equivalent(None);
    }
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for i in 0..t.len().saturating_sub(1) {
            for m in hurwitz_moves(&t, i) {
                let c = canonical_form(&m, d);
                if c == target {
                    return Hurwitz::Equivalent(None);
                }
                if seen.insert(c.clone()) {
                    if seen.len() > max_orbit {
                        return Hurwitz::Inconclusive;
                    }
                    queue.push_back(c);
                }
            }
        }
    }
    Hurwitz::NotEquivalent
}
