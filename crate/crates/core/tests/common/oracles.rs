//! Oracles for the decomposition and decision tests.

use std::collections::BTreeMap;

use rand::Rng;
use thurston::cover::PLThurstonMap;
use thurston::curves::{apply_mapping_class, filling_chain, generating_curves, is_identity_class, Curve, MappingClassWord};
use thurston::decomposition::monodromy::*;
use thurston::decomposition::twist::TwistLattice;

use super::r;

/// All transitive tuples of `n` permutations of `d` sheets with product
/// the identity, none of them trivial.
pub fn all_tuples(d: usize, n: usize) -> Vec<Vec<Perm>> {
    let perms = all_perms(d);
    let nontrivial: Vec<Perm> = perms.iter().filter(|p| **p != identity(d)).cloned().collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(d: usize, n: usize, nt: &[Perm], cur: &mut Vec<Perm>, out: &mut Vec<Vec<Perm>>) {
        if cur.len() == n - 1 {
            let prod = cur.iter().fold(identity(d), |a, p| then(&a, p));
            let last = inverse(&prod);
            if last != identity(d) {
                cur.push(last);
                let t = MonodromyTuple {
                    degree: d,
                    branch_values: (0..n).collect(),
                    perms: cur.clone(),
                };
                if t.is_transitive() {
                    out.push(cur.clone());
                }
                cur.pop();
            }
            return;
        }
        for p in nt {
            cur.push(p.clone());
            rec(d, n, nt, cur, out);
            cur.pop();
        }
    }
    rec(d, n, &nontrivial, &mut cur, &mut out);
    out
}

pub fn all_perms(d: usize) -> Vec<Perm> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(d - 1) {
        for pos in 0..d {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Orbit label of every tuple under elementary braid moves and
/// simultaneous conjugation, by union-find over the full list.
pub fn orbits(d: usize, tuples: &[Vec<Perm>]) -> Vec<usize> {
    let index: BTreeMap<&Vec<Perm>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut parent: Vec<usize> = (0..tuples.len()).collect();
    let conj = all_perms(d);
    for (i, t) in tuples.iter().enumerate() {
        let mut nbrs = Vec::new();
        for k in 0..t.len() - 1 {
            // sigma_k: (g, h) -> (g h g^-1, g), in path order.
            let (g, h) = (&t[k], &t[k + 1]);
            let mut s = t.clone();
            s[k] = then(&then(g, h), &inverse(g));
            s[k + 1] = g.clone();
            nbrs.push(s);
        }
        for c in &conj {
            let ci = inverse(c);
            nbrs.push(t.iter().map(|p| then(&then(&ci, p), c)).collect());
        }
        for s in nbrs {
            let j = index[&s];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    (0..tuples.len()).map(|i| find(&mut parent, i)).collect()
}

pub fn tuple(perms: &[Perm]) -> MonodromyTuple {
    MonodromyTuple {
        degree: perms[0].len(),
        branch_values: (0..perms.len()).collect(),
        perms: perms.to_vec(),
    }
}

pub fn random_lattice(g: &mut impl Rng) -> TwistLattice {
    let k = g.gen_range(1..=3);
    let n = [1i64, 2, 3, 4, 6][g.gen_range(0..5)];
    let matrix = (0..k)
        .map(|_| (0..k).map(|_| r(g.gen_range(0..=2 * n), n)).collect())
        .collect();
    TwistLattice::new(vec![], matrix, n)
}

pub fn apply(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn brute_twist(l: &TwistLattice, rhs: &[i64], b: i64) -> Option<Vec<i64>> {
    let k = l.dim();
    let a = l.operator();
    let mut x = vec![-b; k];
    loop {
        if apply(&a, &x) == rhs {
            return Some(x);
        }
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            x[i] += 1;
            if x[i] <= b {
                break;
            }
            x[i] = -b;
            i += 1;
        }
    }
}

pub fn check_diagram(f: &PLThurstonMap, g: &PLThurstonMap, phi0: &MappingClassWord, phi1: &MappingClassWord) {
    let sp = f.spine();
    let mut curves: Vec<Curve> = filling_chain(sp).to_vec();
    curves.extend(generating_curves(sp).iter().cloned());
    for c in curves {
        let mut lhs: Vec<(Curve, usize)> = f
            .pullback_curve(&apply_mapping_class(sp, &phi0.inverse(), &c))
            .into_iter()
            .filter(|(a, _)| a.is_essential())
            .collect();
        let mut rhs: Vec<(Curve, usize)> = g
            .pullback_curve(&c)
            .into_iter()
            .map(|(a, d)| (apply_mapping_class(sp, &phi1.inverse(), &a), d))
            .filter(|(a, _)| a.is_essential())
            .collect();
        lhs.sort();
        rhs.sort();
        assert_eq!(lhs, rhs);
    }
    assert!(is_identity_class(sp, &phi0.inverse().compose(phi1)));
}

pub fn random_word(g: &mut impl Rng, f: &PLThurstonMap, len: usize) -> MappingClassWord {
    let gens = generating_curves(f.spine());
    MappingClassWord {
        word: (0..len)
            .map(|_| {
                let c = gens[g.gen_range(0..gens.len())].clone();
                let k = [1i64, -1, 2, -2][g.gen_range(0..4)];
                (c, k)
            })
            .collect(),
    }
}
