//! Budgeted equivalence decider.
//!
//! Conclusive answers always carry evidence. An equivalence comes with a
//! pair of mapping classes `phi0`, `phi1` such that `phi0 f = g phi1` holds
//! by construction and `phi0^-1 phi1` is checked to be the identity class,
//! or with an affine conjugacy of the parabolic models. A non-equivalence
//! names the invariant that differs.

use std::collections::BTreeMap;

use serde::Serialize;

use super::monodromy::{hurwitz_equivalent, monodromy_tuple, Hurwitz};
use super::twist::{solve_twist_equation, TwistLattice};
use crate::cover::{OrbifoldKind, PLThurstonMap};
use crate::curves::{enumerate_mapping_classes, intersection_number, is_identity_class, Curve, MappingClassWord};
use crate::obstruction::{
    canonical_obstruction, is_stable, same_up_to_permutation, thurston_matrix, Budget, CanonicalObstruction,
    ThurstonMatrix,
};
use crate::parabolic::{affine_equivalence, det2, eigen_class, extract_affine_model, AffineConjugacy, EigenClass};

/// Orbit budget for the braid search on monodromy tuples.
const HURWITZ_ORBIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `phi0 o f = g o phi1`, with `phi0` and `phi1` isotopic.
    MappingClass {
        phi0: MappingClassWord,
        phi1: MappingClassWord,
    },
    /// Conjugacy of the affine models of two parabolic maps.
    Affine(AffineConjugacy),
}

impl Witness {
    pub fn is_identity(&self) -> bool {
        matches!(self, Witness::MappingClass { phi0, phi1 } if phi0.is_empty() && phi1.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Canonical obstructions whose matrices differ up to relabelling.
    ObstructionMismatch { f: ThurstonMatrix, g: ThurstonMatrix },
    Degree(usize, usize),
    MarkedCount(usize, usize),
    Orbifold(String, String),
    /// No bijection of marked points respects dynamics and local degrees.
    MarkedDynamics,
    /// The underlying branched covers lie in different Hurwitz classes.
    HurwitzClass,
    /// Parabolic maps whose affine models are not conjugate by an
    /// orientation-preserving affine map.
    AffineModels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Reason {
    /// Mapping-class or residue search exhausted without a witness.
    Budget,
    /// The canonical obstruction of one map could not be certified.
    CanonicalObstruction,
    /// Witnesses are only searched between twists of one simplicial cover.
    DifferentCovers,
    /// A first-return map is a homeomorphism.
    HomeomorphismPiece,
    UnitEigenvalue,
    Deadline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Equivalent(Witness),
    NotEquivalent(Certificate),
    Inconclusive(Vec<Reason>),
}

fn same_cover(f: &PLThurstonMap, g: &PLThurstonMap) -> bool {
    f.sphere() == g.sphere()
        && f.domain() == g.domain()
        && f.vertex_image() == g.vertex_image()
        && f.parent() == g.parent()
        && f.embed() == g.embed()
}

/// Check `mu`: with `f = a F b`, `g = c F d` and `nu` the lift of `mu`
/// through `F`, the classes `phi0 = c mu a^-1` and `phi1 = d^-1 nu b`
/// satisfy `phi0 f = g phi1`; accept when they are isotopic.
pub fn try_witness(f: &PLThurstonMap, g: &PLThurstonMap, mu: &MappingClassWord) -> Option<Witness> {
    let bare = f.untwisted();
    let nu = bare.lift_mapping_class(mu).ok()?;
    let phi0 = g.post().compose(mu).compose(&f.post().inverse()).simplified();
    let phi1 = g.pre().inverse().compose(&nu).compose(f.pre()).simplified();
    let diff = phi0.inverse().compose(&phi1);
    is_identity_class(f.spine(), &diff).then_some(Witness::MappingClass { phi0, phi1 })
}

/// A bijection `pi` of marked indices with `pi o f = g o pi` on marked
/// points and equal local degrees.
fn marked_conjugacy(f: &PLThurstonMap, g: &PLThurstonMap) -> Option<Vec<usize>> {
    let n = f.marked().len();
    let df = f.dynamics();
    let dg = g.dynamics();
    let lf: Vec<usize> = f.marked().iter().map(|&q| f.local_degree(f.embed()[q])).collect();
    let lg: Vec<usize> = g.marked().iter().map(|&q| g.local_degree(g.embed()[q])).collect();
    fn extend(
        i: usize,
        pi: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[Option<usize>]) -> bool,
    ) -> bool {
        if i == pi.len() {
            return true;
        }
        for j in 0..pi.len() {
            if used[j] {
                continue;
            }
            pi[i] = Some(j);
            used[j] = true;
            if ok(pi) && extend(i + 1, pi, used, ok) {
                return true;
            }
            used[j] = false;
            pi[i] = None;
        }
        false
    }
    let ok = |pi: &[Option<usize>]| {
        (0..n).all(|i| match pi[i] {
            None => true,
            Some(j) => lf[i] == lg[j] && pi[df[i]].is_none_or(|k| k == dg[j]),
        })
    };
    let mut pi = vec![None; n];
    let mut used = vec![false; n];
    extend(0, &mut pi, &mut used, &ok).then(|| pi.into_iter().map(Option::unwrap).collect())
}

/// Exponents of a word in the twists about `curves`, or `None` if it uses
/// another curve.
fn multitwist_exponents(w: &MappingClassWord, curves: &[Curve]) -> Option<Vec<i64>> {
    let mut x = vec![0i64; curves.len()];
    for (c, k) in &w.word {
        let i = curves.iter().position(|d| d == c)?;
        x[i] += k;
    }
    Some(x)
}

fn multitwist(curves: &[Curve], x: &[i64]) -> MappingClassWord {
    MappingClassWord {
        word: curves
            .iter()
            .zip(x)
            .filter(|(_, &k)| k != 0)
            .map(|(c, &k)| (c.clone(), k))
            .collect(),
    }
}

/// Residue search for `f = F T^m`, `g = F T^n` with `T` twists about a
/// stable multicurve of `F`: candidates `T^(N x + r)` for `r` in
/// `[0, N)^k`, with `x` solving the twist equation.
fn twist_residue_search(f: &PLThurstonMap, g: &PLThurstonMap, budget: &Budget) -> Option<Witness> {
    if !f.post().is_empty() || !g.post().is_empty() {
        return None;
    }
    let mut curves: Vec<Curve> = f.pre().word.iter().chain(&g.pre().word).map(|(c, _)| c.clone()).collect();
    curves.sort();
    curves.dedup();
    if curves.is_empty() {
        return None;
    }
    let sp = f.spine();
    for (i, a) in curves.iter().enumerate() {
        if curves[i + 1..].iter().any(|b| intersection_number(sp, a, b) != 0) {
            return None;
        }
    }
    let bare = f.untwisted();
    if !is_stable(&bare, &curves) {
        return None;
    }
    let m = multitwist_exponents(f.pre(), &curves)?;
    let n = multitwist_exponents(g.pre(), &curves)?;
    let tm = thurston_matrix(&bare, &curves);
    let lattice = super::twist::twist_modulus(&bare, &tm);
    let big_n = lattice.n;
    let k = curves.len();
    let mut r = vec![0i64; k];
    loop {
        if budget.expired() {
            return None;
        }
        if let Some(w) = residue_candidate(f, g, &bare, &lattice, &m, &n, &r) {
            return Some(w);
        }
        // Next residue vector, lexicographically.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            r[i] += 1;
            if r[i] < big_n {
                break;
            }
            r[i] = 0;
        }
    }
}

fn residue_candidate(
    f: &PLThurstonMap,
    g: &PLThurstonMap,
    bare: &PLThurstonMap,
    lattice: &TwistLattice,
    m: &[i64],
    n: &[i64],
    r: &[i64],
) -> Option<Witness> {
    let curves = &lattice.curves;
    let lifted = bare.lift_mapping_class(&multitwist(curves, r)).ok()?;
    let s = multitwist_exponents(&lifted, curves)?;
    let m2: Vec<i64> = (0..r.len()).map(|i| m[i] + s[i] - r[i]).collect();
    let x = solve_twist_equation(lattice, &m2, n)?;
    let y: Vec<i64> = (0..r.len()).map(|i| lattice.n * x[i] + r[i]).collect();
    try_witness(f, g, &multitwist(curves, &y))
}

/// Decide whether `f` and `g` are Thurston equivalent, within `budget`.
pub fn decide_equivalence(f: &PLThurstonMap, g: &PLThurstonMap, budget: &Budget) -> Decision {
    let mut reasons = Vec::new();

    // Canonical obstructions.
    let cf = canonical_obstruction(f, budget);
    let cg = if same_cover(f, g) && f.pre() == g.pre() && f.post() == g.post() {
        cf.clone()
    } else {
        canonical_obstruction(g, budget)
    };
    match (&cf, &cg) {
        (CanonicalObstruction::Found(a, ma), CanonicalObstruction::Found(b, mb)) => {
            if a.len() != b.len() || !same_up_to_permutation(&ma.entries, &mb.entries) {
                return Decision::NotEquivalent(Certificate::ObstructionMismatch {
                    f: ma.clone(),
                    g: mb.clone(),
                });
            }
        }
        _ => reasons.push(Reason::CanonicalObstruction),
    }

    // Elementary invariants.
    if f.degree() != g.degree() {
        return Decision::NotEquivalent(Certificate::Degree(f.degree(), g.degree()));
    }
    if f.marked().len() != g.marked().len() {
        return Decision::NotEquivalent(Certificate::MarkedCount(f.marked().len(), g.marked().len()));
    }
    let (of, og) = (f.orbifold_data(), g.orbifold_data());
    if of.signature != og.signature {
        return Decision::NotEquivalent(Certificate::Orbifold(of.signature_string(), og.signature_string()));
    }
    if marked_conjugacy(f, g).is_none() {
        return Decision::NotEquivalent(Certificate::MarkedDynamics);
    }
    let covers_match = same_cover(f, g);
    if !covers_match {
        let (tf, tg) = (monodromy_tuple(f), monodromy_tuple(g));
        if hurwitz_equivalent(&tf, &tg, None, HURWITZ_ORBIT) == Hurwitz::NotEquivalent {
            return Decision::NotEquivalent(Certificate::HurwitzClass);
        }
    }

    // Mapping classes of one cover.
    if covers_match {
        for mu in enumerate_mapping_classes(f.spine(), budget.max_word_length) {
            if budget.expired() {
                reasons.push(Reason::Deadline);
                break;
            }
            if let Some(w) = try_witness(f, g, &mu) {
                return Decision::Equivalent(w);
            }
        }
        if let Some(w) = twist_residue_search(f, g, budget) {
            return Decision::Equivalent(w);
        }
        reasons.push(Reason::Budget);
    } else {
        reasons.push(Reason::DifferentCovers);
    }

    // Parabolic maps are classified by their affine models.
    if of.kind == OrbifoldKind::Parabolic(6) {
        if let (Ok(a), Ok(b)) = (extract_affine_model(f), extract_affine_model(g)) {
            let unit = |m| eigen_class(m).map_or(true, |e| e.class == EigenClass::HasUnitEigenvalue);
            if unit(a.a) || unit(b.a) {
                reasons.push(Reason::UnitEigenvalue);
            } else {
                match affine_equivalence(&a, &b) {
                    Ok(Some(w)) if det2(w.p) == 1 => return Decision::Equivalent(Witness::Affine(w)),
                    Ok(_) => return Decision::NotEquivalent(Certificate::AffineModels),
                    Err(_) => {}
                }
            }
        }
    }

    // Explain what blocked a piecewise answer.
    if let CanonicalObstruction::Found(gamma, _) = &cf {
        if !gamma.is_empty() {
            if let Ok(sf) = super::standard_form(&f.untwisted(), &gamma.curves) {
                if let Ok((glue, _)) = super::decompose(&sf) {
                    let homeo = super::first_return_maps(&glue)
                        .iter()
                        .any(|r| r.kind == super::ReturnKind::Homeomorphism);
                    if homeo {
                        reasons.push(Reason::HomeomorphismPiece);
                    }
                }
            }
        }
    }
    let mut seen = BTreeMap::new();
    reasons.retain(|r| seen.insert(*r, ()).is_none());
    Decision::Inconclusive(reasons)
}
