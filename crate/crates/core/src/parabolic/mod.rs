//! Maps with a `(2,2,2,2)` orbifold: affine quotients on the pillowcase,
//! Nielsen classes, Levy pairs, GL2(Z) conjugacy and affine equivalence.

pub mod forms;

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cover::models::pillow_point;
use crate::cover::{CoverError, OrbifoldKind, PLThurstonMap};
use crate::curves::{
    enumerate_curves, intersection_number, sides, twist_curve, Curve, MappingClassWord,
};
use forms::{Form, Mat, Z};

pub type M2 = [[i64; 2]; 2];
pub type Rat = Ratio<i64>;
pub type Pt = (Rat, Rat);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParabolicError {
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("map does not have a (2,2,2,2) orbifold with Q = P")]
    NotParabolic,
    #[error("marked point {0} is not periodic")]
    NotPeriodic(usize),
    #[error("marked set is not invariant at point {0}")]
    NotInvariant(usize),
    #[error("iteration cap {0} reached")]
    CapReached(usize),
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("twist about {0} is not in the generating set")]
    NotInGeneratingSet(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenClass {
    Expanding,
    HyperbolicNonexpanding,
    HasUnitEigenvalue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenInfo {
    pub class: EigenClass,
    /// Both eigenvalues, ascending, when they are integers.
    pub integer_pair: Option<(i64, i64)>,
}

pub fn det2(a: M2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn trace2(a: M2) -> i64 {
    a[0][0] + a[1][1]
}

/// Exact eigenvalue classification from the characteristic polynomial
/// `p(x) = x^2 - tr x + det`.
pub fn eigen_class(a: M2) -> Result<EigenInfo, ParabolicError> {
    let (t, d) = (trace2(a), det2(a));
    if d.abs() < 2 {
        return Err(ParabolicError::BadMatrix(format!("|det| = {} < 2", d.abs())));
    }
    let (p1, pm1) = (1 - t + d, 1 + t + d);
    let disc = t * t - 4 * d;
    let integer_pair = if disc >= 0 {
        let s = disc.isqrt();
        (s * s == disc).then(|| ((t - s) / 2, (t + s) / 2))
    } else {
        None
    };
    // With |det| >= 2 both roots cannot lie in (-1, 1), so the roots avoid
    // [-1, 1] exactly when p(1) and p(-1) have the same strict sign.
    let class = if p1 == 0 || pm1 == 0 {
        EigenClass::HasUnitEigenvalue
    } else if (p1 > 0) == (pm1 > 0) {
        EigenClass::Expanding
    } else {
        EigenClass::HyperbolicNonexpanding
    };
    Ok(EigenInfo {
        class,
        integer_pair,
    })
}

/// An element of the pillowcase group `<z + 1, z + i, -z>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum OrbifoldElement {
    /// `z -> z + v`.
    Translation([i64; 2]),
    /// `z -> w - z`, the half turn about `w / 2`.
    Symmetry([i64; 2]),
}

impl OrbifoldElement {
    pub fn apply(&self, z: Pt) -> Pt {
        match *self {
            OrbifoldElement::Translation([x, y]) => (z.0 + x, z.1 + y),
            OrbifoldElement::Symmetry([x, y]) => (Rat::from(x) - z.0, Rat::from(y) - z.1),
        }
    }

    /// `self o other`.
    pub fn compose(&self, other: &OrbifoldElement) -> OrbifoldElement {
        use OrbifoldElement::*;
        let add = |u: [i64; 2], v: [i64; 2]| [u[0] + v[0], u[1] + v[1]];
        let sub = |u: [i64; 2], v: [i64; 2]| [u[0] - v[0], u[1] - v[1]];
        match (*self, *other) {
            (Translation(u), Translation(v)) => Translation(add(u, v)),
            (Translation(u), Symmetry(w)) => Symmetry(add(w, u)),
            (Symmetry(w), Translation(u)) => Symmetry(sub(w, u)),
            (Symmetry(w), Symmetry(v)) => Translation(sub(w, v)),
        }
    }

    pub fn inverse(&self) -> OrbifoldElement {
        match *self {
            OrbifoldElement::Translation([x, y]) => OrbifoldElement::Translation([-x, -y]),
            s => s,
        }
    }

    /// `L g L^-1` for `L(z) = A z + b`, `b` in `(1/2) Z^2`.
    pub fn push_forward(&self, a: M2, b: Pt) -> OrbifoldElement {
        let lin = |v: [i64; 2]| [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]];
        match *self {
            OrbifoldElement::Translation(v) => OrbifoldElement::Translation(lin(v)),
            OrbifoldElement::Symmetry(w) => {
                let (bx, by) = (b.0 * 2, b.1 * 2);
                assert!(bx.is_integer() && by.is_integer(), "b must lie in (1/2) Z^2");
                let aw = lin(w);
                OrbifoldElement::Symmetry([aw[0] + bx.to_integer(), aw[1] + by.to_integer()])
            }
        }
    }
}

pub fn corners() -> [Pt; 4] {
    let (o, h) = (Rat::from(0), Rat::new(1, 2));
    [(o, o), (h, o), (o, h), (h, h)]
}

/// The quotient of `L(z) = A z + b` to the pillowcase, with marked points
/// given by lifts and their combinatorial dynamics.
///
/// Distinct marked indices may share a position; such data describe a
/// topological map whose geometrization collapses them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineQuotient {
    pub a: M2,
    pub b: Pt,
    pub lifts: Vec<Pt>,
    pub dynamics: Vec<usize>,
    /// Least `q` with every lift in `(1/q) Z^2`; always even.
    pub q: i64,
}

impl AffineQuotient {
    pub fn new(a: M2, b: Pt, lifts: Vec<Pt>, dynamics: Vec<usize>) -> Result<Self, ParabolicError> {
        if det2(a).abs() < 2 {
            return Err(ParabolicError::BadMatrix(format!("det = {}", det2(a))));
        }
        let two = Rat::from(2);
        if !(b.0 * two).is_integer() || !(b.1 * two).is_integer() {
            return Err(ParabolicError::BadMatrix("b must lie in (1/2) Z^2".into()));
        }
        if dynamics.len() != lifts.len() || dynamics.iter().any(|&j| j >= lifts.len()) {
            return Err(ParabolicError::BadMatrix("dynamics does not match the lifts".into()));
        }
        let lifts: Vec<Pt> = lifts.into_iter().map(pillow_point).collect();
        let mut m = AffineQuotient {
            a,
            b: pillow_point(b),
            lifts,
            dynamics,
            q: 2,
        };
        for c in corners() {
            if !m.lifts.contains(&c) {
                return Err(ParabolicError::Unsupported(
                    "the four cone points must be marked".into(),
                ));
            }
        }
        for (i, &x) in m.lifts.iter().enumerate() {
            if pillow_point(m.apply(x)) != m.lifts[m.dynamics[i]] {
                return Err(ParabolicError::NotInvariant(i));
            }
            m.q = m.q.lcm(x.0.denom()).lcm(x.1.denom());
        }
        Ok(m)
    }

    /// Dynamics read off from distinct positions.
    pub fn from_points(a: M2, b: Pt, lifts: Vec<Pt>) -> Result<Self, ParabolicError> {
        let canon: Vec<Pt> = lifts.iter().map(|&x| pillow_point(x)).collect();
        let mut dynamics = Vec::with_capacity(lifts.len());
        for (i, &x) in lifts.iter().enumerate() {
            let y = pillow_point(apply_affine(a, b, x));
            let hits: Vec<usize> = (0..canon.len()).filter(|&j| canon[j] == y).collect();
            match hits[..] {
                [j] => dynamics.push(j),
                [] => return Err(ParabolicError::NotInvariant(i)),
                _ => {
                    return Err(ParabolicError::BadMatrix(
                        "repeated marked position; give the dynamics explicitly".into(),
                    ))
                }
            }
        }
        AffineQuotient::new(a, b, lifts, dynamics)
    }

    pub fn apply(&self, z: Pt) -> Pt {
        apply_affine(self.a, self.b, z)
    }

    pub fn degree(&self) -> i64 {
        det2(self.a).abs()
    }

    pub fn period(&self, i: usize) -> Option<usize> {
        let mut j = self.dynamics[i];
        for n in 1..=self.lifts.len() {
            if j == i {
                return Some(n);
            }
            j = self.dynamics[j];
        }
        None
    }
}

pub fn apply_affine(a: M2, b: Pt, z: Pt) -> Pt {
    (
        z.0 * a[0][0] + z.1 * a[0][1] + b.0,
        z.0 * a[1][0] + z.1 * a[1][1] + b.1,
    )
}

// Exact affine arithmetic for iterates, whose entries outgrow 64 bits.

type BQ = BigRational;

#[derive(Clone)]
struct Affine {
    a: Mat,
    b: [BQ; 2],
}

fn bq(r: Rat) -> BQ {
    BQ::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn bq_int(z: &Z) -> BQ {
    BQ::from_integer(z.clone())
}

impl Affine {
    fn of(a: M2, b: Pt) -> Affine {
        Affine {
            a: forms::mat(a),
            b: [bq(b.0), bq(b.1)],
        }
    }

    fn apply(&self, z: &[BQ; 2]) -> [BQ; 2] {
        let row = |i: usize| {
            bq_int(&self.a[i][0]) * &z[0] + bq_int(&self.a[i][1]) * &z[1] + &self.b[i]
        };
        [row(0), row(1)]
    }

    /// `self o other`.
    fn after(&self, other: &Affine) -> Affine {
        Affine {
            a: forms::mul(&self.a, &other.a),
            b: self.apply(&other.b),
        }
    }

    fn pow(&self, n: usize) -> Affine {
        let mut out = Affine {
            a: forms::identity(),
            b: [BQ::zero(), BQ::zero()],
        };
        for _ in 0..n {
            out = self.after(&out);
        }
        out
    }
}

fn integral(v: &[BQ; 2]) -> Option<[Z; 2]> {
    (v[0].is_integer() && v[1].is_integer()).then(|| [v[0].to_integer(), v[1].to_integer()])
}

fn to_i64(v: &[Z; 2]) -> Result<[i64; 2], ParabolicError> {
    Ok([
        v[0].to_i64().ok_or(ParabolicError::Overflow)?,
        v[1].to_i64().ok_or(ParabolicError::Overflow)?,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Escape {
    /// Least `n >= 1` with `L^{-n}(v)` outside `(1/q) Z^2`.
    After(usize),
    /// `v` is the fixed point of `L`, whose backward orbit is constant.
    FixedPoint,
}

/// Escape time of `v` from the lattice `(1/q) Z^2` under backward iteration
/// of `L(z) = A z + b`.
pub fn lattice_escape_time(
    a: M2,
    b: Pt,
    v: Pt,
    q: i64,
    cap: usize,
) -> Result<Escape, ParabolicError> {
    let d = det2(a);
    if d == 0 {
        return Err(ParabolicError::BadMatrix("singular".into()));
    }
    let dq = BQ::from_integer(BigInt::from(d));
    let inv = |w: &[BQ; 2]| -> [BQ; 2] {
        let (x, y) = (&w[0] - bq(b.0), &w[1] - bq(b.1));
        [
            (&x * BigInt::from(a[1][1]) - &y * BigInt::from(a[0][1])) / &dq,
            (&y * BigInt::from(a[0][0]) - &x * BigInt::from(a[1][0])) / &dq,
        ]
    };
    let start = [bq(v.0), bq(v.1)];
    let lattice = |w: &[BQ; 2]| {
        let qb = BigInt::from(q);
        w.iter().all(|x| (x * &qb).is_integer())
    };
    let mut w = start.clone();
    for n in 1..=cap {
        w = inv(&w);
        if w == start {
            return Ok(Escape::FixedPoint);
        }
        if !lattice(&w) {
            return Ok(Escape::After(n));
        }
    }
    Err(ParabolicError::CapReached(cap))
}

/// `g` with `L^n(z~) = g(z~)` for the given lift `z~` of a marked point of
/// period `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NielsenIndex {
    pub period: usize,
    pub element: OrbifoldElement,
}

pub fn nielsen_index(m: &AffineQuotient, i: usize) -> Result<NielsenIndex, ParabolicError> {
    Ok(nielsen_indices(m, i)?.remove(0))
}

/// Every index of the stored lift; two for a cone point, whose index is
/// only defined up to the half turn about it.
pub fn nielsen_indices(m: &AffineQuotient, i: usize) -> Result<Vec<NielsenIndex>, ParabolicError> {
    let n = m.period(i).ok_or(ParabolicError::NotPeriodic(i))?;
    index_candidates(m, i, n)
        .into_iter()
        .map(|(is_t, v)| {
            let v = to_i64(&v)?;
            Ok(NielsenIndex {
                period: n,
                element: if is_t {
                    OrbifoldElement::Translation(v)
                } else {
                    OrbifoldElement::Symmetry(v)
                },
            })
        })
        .collect()
}

/// All indices of the stored lift of point `i` under `L^n`: `(true, u)` for
/// `z -> z + u`, `(false, w)` for `z -> w - z`. Cone points have two.
fn index_candidates(m: &AffineQuotient, i: usize, n: usize) -> Vec<(bool, [Z; 2])> {
    let ln = Affine::of(m.a, m.b).pow(n);
    let z = [bq(m.lifts[i].0), bq(m.lifts[i].1)];
    let w = ln.apply(&z);
    let mut out = Vec::new();
    if let Some(u) = integral(&[&w[0] - &z[0], &w[1] - &z[1]]) {
        out.push((true, u));
    }
    if let Some(s) = integral(&[&w[0] + &z[0], &w[1] + &z[1]]) {
        out.push((false, s));
    }
    assert!(!out.is_empty(), "lift {i} is not periodic under L^{n}");
    out
}

/// Integral solution of `M x = t` for nonsingular `M`.
fn solvable(mm: &Mat, t: &[Z; 2]) -> bool {
    let d = forms::det(mm);
    if d.is_zero() {
        return false;
    }
    let x = &mm[1][1] * &t[0] - &mm[0][1] * &t[1];
    let y = &mm[0][0] * &t[1] - &mm[1][0] * &t[0];
    x.is_multiple_of(&d) && y.is_multiple_of(&d)
}

/// Whether marked points `i` and `j`, both periodic, have lifts sharing a
/// Nielsen index under `L^n`, `n` the least common multiple of the periods.
///
/// With `L^n = A^n z + b_n` and `F` its push-forward on the group, the
/// indices of other lifts of `i` are `F(h) g h^-1`. Equality with `g'`
/// reduces to one integral linear system per kind of `h`.
pub fn same_nielsen_class(
    m: &AffineQuotient,
    i: usize,
    j: usize,
) -> Result<bool, ParabolicError> {
    let pi = m.period(i).ok_or(ParabolicError::NotPeriodic(i))?;
    let pj = m.period(j).ok_or(ParabolicError::NotPeriodic(j))?;
    same_nielsen_class_at(m, i, j, pi.lcm(&pj))
}

/// As [`same_nielsen_class`] for the iterate `L^n`, `n` a common multiple
/// of the periods.
pub fn same_nielsen_class_at(
    m: &AffineQuotient,
    i: usize,
    j: usize,
    n: usize,
) -> Result<bool, ParabolicError> {
    check_hyperbolic(m.a)?;
    for k in [i, j] {
        let p = m.period(k).ok_or(ParabolicError::NotPeriodic(k))?;
        if n == 0 || n % p != 0 {
            return Err(ParabolicError::NotPeriodic(k));
        }
    }
    let ln = Affine::of(m.a, m.b).pow(n);
    let two_bn: [Z; 2] = integral(&[&ln.b[0] * BigInt::from(2), &ln.b[1] * BigInt::from(2)])
        .expect("b_n lies in (1/2) Z^2");
    let id = forms::identity();
    let minus = |s: i64| -> Mat {
        let k = BigInt::from(s);
        [
            [&ln.a[0][0] + &k * &id[0][0], &ln.a[0][1] + &k * &id[0][1]],
            [&ln.a[1][0] + &k * &id[1][0], &ln.a[1][1] + &k * &id[1][1]],
        ]
    };
    let (a_minus, a_plus) = (minus(-1), minus(1));
    let ci = index_candidates(m, i, n);
    let cj = index_candidates(m, j, n);
    for (ti, gi) in &ci {
        for (tj, gj) in &cj {
            if ti != tj {
                continue;
            }
            let mm = if *ti { &a_minus } else { &a_plus };
            let diff = [&gj[0] - &gi[0], &gj[1] - &gi[1]];
            let sum = [
                &gi[0] + &gj[0] - &two_bn[0],
                &gi[1] + &gj[1] - &two_bn[1],
            ];
            if solvable(mm, &diff) || solvable(mm, &sum) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// First pair of distinct periodic marked points in one Nielsen class; such
/// a pair gives a Levy cycle.
pub fn find_levy_pair(m: &AffineQuotient) -> Result<Option<(usize, usize)>, ParabolicError> {
    check_hyperbolic(m.a)?;
    let periodic: Vec<usize> = (0..m.lifts.len()).filter(|&i| m.period(i).is_some()).collect();
    for (k, &i) in periodic.iter().enumerate() {
        for &j in &periodic[k + 1..] {
            if same_nielsen_class(m, i, j)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn check_hyperbolic(a: M2) -> Result<(), ParabolicError> {
    if eigen_class(a)?.class == EigenClass::HasUnitEigenvalue {
        return Err(ParabolicError::Unsupported(
            "eigenvalue of modulus one".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Geometrization {
    /// Two periodic marked points in one Nielsen class.
    Obstructed(usize, usize),
    /// An affine quotient with distinct marked positions.
    Affine(AffineQuotient),
}

/// Either a Levy pair or the geometric model.
pub fn geometrize(m: &AffineQuotient) -> Result<Geometrization, ParabolicError> {
    if let Some((i, j)) = find_levy_pair(m)? {
        return Ok(Geometrization::Obstructed(i, j));
    }
    let mut seen = BTreeMap::new();
    for (i, &x) in m.lifts.iter().enumerate() {
        if let Some(&k) = seen.get(&x) {
            return Err(ParabolicError::Unsupported(format!(
                "preperiodic points {k} and {i} share a position"
            )));
        }
        seen.insert(x, i);
    }
    Ok(Geometrization::Affine(m.clone()))
}

/// Witnesses of `S A1 S^-1 = A2`, split by the sign of `det S`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Conjugacy {
    pub proper: Option<M2>,
    pub improper: Option<M2>,
}

fn to_m2(m: &Mat) -> Option<M2> {
    Some([
        [m[0][0].to_i64()?, m[0][1].to_i64()?],
        [m[1][0].to_i64()?, m[1][1].to_i64()?],
    ])
}

fn proper_witness(a1: &Mat, a2: &Mat) -> Option<Mat> {
    let v = forms::proper_equivalence(&Form::of_matrix(a1), &Form::of_matrix(a2))?;
    Some(forms::inv(&v))
}

fn reflection() -> Mat {
    forms::mat([[1, 0], [0, -1]])
}

/// Conjugacy of integer matrices in GL2(Z). `None` when not conjugate.
pub fn gl2z_conjugacy(a1: M2, a2: M2) -> Option<Conjugacy> {
    if trace2(a1) != trace2(a2) || det2(a1) != det2(a2) {
        return None;
    }
    let scalar = |a: M2| a[0][1] == 0 && a[1][0] == 0 && a[0][0] == a[1][1];
    if scalar(a1) || scalar(a2) {
        return (a1 == a2).then_some(Conjugacy {
            proper: Some([[1, 0], [0, 1]]),
            improper: Some([[1, 0], [0, -1]]),
        });
    }
    let (m1, m2) = (forms::mat(a1), forms::mat(a2));
    let r = reflection();
    let proper = proper_witness(&m1, &m2);
    let improper = proper_witness(&forms::mul(&forms::mul(&r, &m1), &r), &m2)
        .map(|s| forms::mul(&s, &r));
    for s in proper.iter().chain(&improper) {
        assert_eq!(
            forms::mul(&forms::mul(s, &m1), &forms::inv(s)),
            m2,
            "conjugacy witness failed to verify"
        );
    }
    let c = Conjugacy {
        proper: proper.as_ref().and_then(to_m2),
        improper: improper.as_ref().and_then(to_m2),
    };
    (c.proper.is_some() || c.improper.is_some()).then_some(c)
}

/// Generators of the centralizer of `a` in GL2(Z).
pub fn centralizer_generators(a: M2) -> Vec<Mat> {
    let id = forms::identity();
    let neg = forms::scale(&BigInt::from(-1), &id);
    if a[0][1] == 0 && a[1][0] == 0 && a[0][0] == a[1][1] {
        return vec![
            forms::mat([[0, -1], [1, 0]]),
            forms::mat([[1, 1], [0, 1]]),
            reflection(),
            neg,
        ];
    }
    // a = a00 I + g A0 with A0 primitive; the centralizer is the unit group
    // of Z[A0].
    let g = a[0][1].gcd(&a[1][0]).gcd(&(a[1][1] - a[0][0]));
    let a0: M2 = [
        [0, a[0][1] / g],
        [a[1][0] / g, (a[1][1] - a[0][0]) / g],
    ];
    let (t, d) = (trace2(a0), det2(a0));
    let disc = t * t - 4 * d;
    let elem = |x: i64, y: i64| -> M2 {
        [
            [x + y * a0[0][0], y * a0[0][1]],
            [y * a0[1][0], x + y * a0[1][1]],
        ]
    };
    let unit = |x: i64, y: i64| det2(elem(x, y)).abs() == 1;
    let mut gens = vec![neg];
    if disc < 0 {
        for x in -2..=2 {
            for y in -2..=2 {
                if unit(x, y) {
                    gens.push(forms::mat(elem(x, y)));
                }
            }
        }
    } else if disc == 0 {
        gens.push(forms::mat(elem(1 - t / 2, 1)));
    } else {
        let s = disc.isqrt();
        if s * s == disc {
            // x + y mu = e1 and x + y nu = e2 at the integer eigenvalues.
            let (mu, nu) = ((t + s) / 2, (t - s) / 2);
            for e1 in [-1i64, 1] {
                for e2 in [-1i64, 1] {
                    if (e1 - e2) % (mu - nu) == 0 {
                        let y = (e1 - e2) / (mu - nu);
                        let x = e1 - y * mu;
                        gens.push(forms::mat(elem(x, y)));
                    }
                }
            }
        } else {
            let m = forms::mat(a);
            let f = Form::of_matrix(&m);
            gens.push(forms::fundamental_automorph(&f).expect("indefinite form"));
            let target = Form::new(-f.a.clone(), f.b.clone(), -f.c.clone());
            if let Some(v) = forms::proper_equivalence(&f, &target) {
                gens.push(forms::mul(&v, &reflection()));
            }
        }
    }
    let m = forms::mat(a);
    for c in &gens {
        debug_assert_eq!(forms::mul(c, &m), forms::mul(&m, c));
    }
    gens
}

fn reduce_mod(m: &Mat, n: &Z) -> [[i64; 2]; 2] {
    let r = |x: &Z| x.mod_floor(n).to_i64().unwrap();
    [[r(&m[0][0]), r(&m[0][1])], [r(&m[1][0]), r(&m[1][1])]]
}

/// One representative of each residue class modulo `n` of the group
/// generated by `gens`, found breadth first.
fn residues(gens: &[Mat], n: i64) -> Vec<Mat> {
    let nz = BigInt::from(n);
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = forms::identity();
    seen.insert(reduce_mod(&id, &nz), ());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let x = forms::mul(&m, g);
            if seen.insert(reduce_mod(&x, &nz), ()).is_none() {
                queue.push_back(x);
            }
        }
        out.push(m);
    }
    out
}

/// `S(z) = P z + t` with `g o S o L1 = L2 o S` and `S` carrying the marked
/// points of the first quotient onto those of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineConjugacy {
    pub p: M2,
    pub t: Pt,
    pub g: OrbifoldElement,
}

/// Affine conjugacy of two quotients on the pillowcase, or `None`.
pub fn affine_equivalence(
    m1: &AffineQuotient,
    m2: &AffineQuotient,
) -> Result<Option<AffineConjugacy>, ParabolicError> {
    if m1.lifts.len() != m2.lifts.len() || m1.degree() != m2.degree() {
        return Ok(None);
    }
    let mut target: Vec<Pt> = m2.lifts.clone();
    target.sort();
    let modulus = 2 * m1.q.lcm(&m2.q);
    let cent = residues(&centralizer_generators(m1.a), modulus);
    let half = Rat::new(1, 2);
    let zero = Rat::from(0);
    // Orientation-preserving witnesses first.
    for (proper, eps) in [(true, 1i64), (true, -1), (false, 1), (false, -1)] {
        let a2e = [
            [eps * m2.a[0][0], eps * m2.a[0][1]],
            [eps * m2.a[1][0], eps * m2.a[1][1]],
        ];
        let Some(conj) = gl2z_conjugacy(m1.a, a2e) else {
            continue;
        };
        let mut tried = BTreeMap::new();
        let seeds = if proper { &conj.proper } else { &conj.improper };
        for p0 in seeds.iter() {
            let p0 = forms::mat(*p0);
            for c in &cent {
                let pm = forms::mul(&p0, c);
                if tried.insert(reduce_mod(&pm, &BigInt::from(modulus)), ()).is_some() {
                    continue;
                }
                let Some(p) = to_m2(&pm) else {
                    return Err(ParabolicError::Overflow);
                };
                for t in [(zero, zero), (half, zero), (zero, half), (half, half)] {
                    if let Some(w) = try_conjugacy(m1, m2, p, t, a2e, eps, &target) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn try_conjugacy(
    m1: &AffineQuotient,
    m2: &AffineQuotient,
    p: M2,
    t: Pt,
    a2e: M2,
    eps: i64,
    target: &[Pt],
) -> Option<AffineConjugacy> {
    let zero = (Rat::from(0), Rat::from(0));
    // S L1 S^-1 (z) = eps A2 z + u.
    let pb = apply_affine(p, t, m1.b);
    let at = apply_affine(a2e, zero, t);
    let u = (pb.0 - at.0, pb.1 - at.1);
    let g = if eps == 1 {
        let v = (m2.b.0 - u.0, m2.b.1 - u.1);
        (v.0.is_integer() && v.1.is_integer())
            .then(|| OrbifoldElement::Translation([v.0.to_integer(), v.1.to_integer()]))?
    } else {
        let w = (m2.b.0 + u.0, m2.b.1 + u.1);
        (w.0.is_integer() && w.1.is_integer())
            .then(|| OrbifoldElement::Symmetry([w.0.to_integer(), w.1.to_integer()]))?
    };
    let mut moved: Vec<Pt> = m1
        .lifts
        .iter()
        .map(|&x| pillow_point(apply_affine(p, t, x)))
        .collect();
    moved.sort();
    if moved != target {
        return None;
    }
    Some(AffineConjugacy { p, t, g })
}

/// Orientation of the homology coordinates: the twist of `beta` about
/// `alpha` has class `(2 ORIENT, 1)`.
const ORIENT: i64 = -1;

/// Slope `(p, q)` of a curve relative to the basis curves.
fn slope(sp: &crate::curves::spine::Spine, c: &Curve, basis: &[Curve; 3]) -> (i64, i64) {
    let half = |x: &Curve| intersection_number(sp, c, x) as i64 / 2;
    let (p, q) = (half(&basis[1]), half(&basis[0]));
    if p > 0 && q > 0 && half(&basis[2]) != (p - 2 * ORIENT * q).abs() {
        (p, -q)
    } else {
        (p, q)
    }
}

/// Affine model of a map with a `(2,2,2,2)` orbifold and `Q = P`, read from
/// the action of pullback on curve slopes. `A` is determined up to sign,
/// since `-z` lies in the group.
pub fn extract_affine_model(f: &PLThurstonMap) -> Result<AffineQuotient, ParabolicError> {
    if f.orbifold_data().kind != OrbifoldKind::Parabolic(6) {
        return Err(ParabolicError::NotParabolic);
    }
    if f.marked().len() != 4 || f.postcritical().len() != 4 {
        return Err(ParabolicError::Unsupported(
            "affine model extraction needs Q = P".into(),
        ));
    }
    let sp = f.spine();
    let mut basis = None;
    for w in [4u32, 8, 12, 16] {
        let cs: Vec<Curve> = enumerate_curves(sp, w)
            .into_iter()
            .filter(|c| c.is_essential())
            .collect();
        let Some(alpha) = cs.first() else { continue };
        if let Some(beta) = cs.iter().find(|b| intersection_number(sp, alpha, b) == 2) {
            basis = Some((alpha.clone(), beta.clone()));
            break;
        }
    }
    let (alpha, beta) =
        basis.ok_or_else(|| ParabolicError::Unsupported("no basis curves found".into()))?;
    let delta = twist_curve(sp, &alpha, 1, &beta);
    let basis = [alpha, beta, delta];
    let mut cols = Vec::new();
    for g in &basis[..2] {
        let (c, deg) = f
            .pullback_curve(g)
            .into_iter()
            .find(|(c, _)| c.is_essential())
            .ok_or_else(|| ParabolicError::Unsupported("inessential pullback".into()))?;
        cols.push((slope(sp, &c, &basis), deg as i64));
    }
    let (wa, ma) = cols[0];
    let (wb, mb) = cols[1];
    let dw = wa.0 * wb.1 - wb.0 * wa.1;
    if dw == 0 {
        return Err(ParabolicError::Unsupported("parallel pullback slopes".into()));
    }
    let sb = dw.signum();
    // A = diag(ma, sb mb) W^-1 with W = [wa wb].
    let adj = [[wb.1, -wb.0], [-wa.1, wa.0]];
    let num = [
        [ma * adj[0][0], ma * adj[0][1]],
        [sb * mb * adj[1][0], sb * mb * adj[1][1]],
    ];
    if num.iter().flatten().any(|x| x % dw != 0) {
        return Err(ParabolicError::Unsupported("non-integral slope action".into()));
    }
    let a = [
        [num[0][0] / dw, num[0][1] / dw],
        [num[1][0] / dw, num[1][1] / dw],
    ];
    if det2(a) != f.degree() as i64 {
        return Err(ParabolicError::Unsupported(format!(
            "slope action has determinant {} for a map of degree {}",
            det2(a),
            f.degree()
        )));
    }
    // Corner coordinates from the sides of the basis curves.
    let (sa, sbeta) = (sides(sp, &basis[0]).0, sides(sp, &basis[1]).0);
    let half = Rat::new(1, 2);
    let zero = Rat::from(0);
    let lifts: Vec<Pt> = (0..4)
        .map(|i| {
            (
                if sbeta.contains(&i) { zero } else { half },
                if sa.contains(&i) { zero } else { half },
            )
        })
        .collect();
    let b = lifts[f.dynamics()[0]];
    AffineQuotient::new(a, b, lifts, f.dynamics().to_vec())
}

/// Lift of a word in the generators of the liftable subgroup: twists about
/// curves with no postcritical point on one side, and squares of twists
/// about curves with exactly one.
pub fn lift_rmcg_twist(
    f: &PLThurstonMap,
    w: &MappingClassWord,
) -> Result<MappingClassWord, ParabolicError> {
    let sp = f.spine();
    let p: Vec<usize> = (0..f.marked().len())
        .filter(|&i| f.postcritical().contains(&f.marked()[i]))
        .collect();
    for (c, k) in &w.word {
        let (s0, s1) = sides(sp, c);
        let on = |s: &[usize]| s.iter().filter(|i| p.contains(i)).count();
        let fewest = on(&s0).min(on(&s1));
        let ok = fewest == 0 || (fewest == 1 && k % 2 == 0);
        if !ok {
            return Err(ParabolicError::NotInGeneratingSet(format!("{:?}^{k}", c.word())));
        }
    }
    Ok(f.lift_mapping_class(w)?)
}
