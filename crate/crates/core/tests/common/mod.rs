//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod oracles;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use thurston::cover::models::{basilica, lattes, power_map};
use thurston::cover::PLThurstonMap;
use thurston::curves::{enumerate_curves, small_side, Curve};

pub type Rat = Ratio<i64>;

pub fn z2() -> PLThurstonMap {
    power_map(3, 2, &[0, 2, 4], vec![0, 1]).unwrap()
}

pub fn z3() -> PLThurstonMap {
    power_map(3, 3, &[0, 3, 6], vec![0, 1, 2]).unwrap()
}

pub fn lattes2() -> PLThurstonMap {
    let z = Rat::from(0);
    lattes(4, [[2, 0], [0, 2]], (z, z), &[]).unwrap()
}

pub fn lattes2_fine() -> PLThurstonMap {
    let z = Rat::from(0);
    lattes(6, [[2, 0], [0, 2]], (z, z), &[]).unwrap()
}

pub fn lattes_one_plus_i() -> PLThurstonMap {
    let z = Rat::from(0);
    lattes(4, [[1, -1], [1, 1]], (z, z), &[]).unwrap()
}

pub fn basilica_alpha() -> PLThurstonMap {
    basilica(true).unwrap()
}

/// `z^2` with two fixed points marked inside a disk mapped to itself with
/// degree one.
pub fn levy_disk() -> PLThurstonMap {
    power_map(3, 2, &[0, 1, 3], vec![0, 1, 2, 3]).unwrap()
}

/// `z^2` with two swapped disks, each holding two marked points.
pub fn levy_2cycle() -> PLThurstonMap {
    power_map(4, 2, &[2, 3, 4, 5], vec![0, 1, 2, 3, 4, 5]).unwrap()
}

/// First essential curve, in enumeration order, whose small side is `side`.
pub fn curve_around(f: &PLThurstonMap, side: &[usize]) -> Curve {
    let sp = f.spine();
    enumerate_curves(sp, 12)
        .into_iter()
        .find(|c| c.is_essential() && small_side(sp, c) == side)
        .unwrap_or_else(|| panic!("no curve around {side:?}"))
}

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn mat(rows: &[&[Rat]]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

// Exact eigenvalue oracle: characteristic polynomial and Sturm sequences.

type Q = BigRational;
/// Coefficients, lowest degree first.
type Poly = Vec<Q>;

fn big(x: &Rat) -> Q {
    Q::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// `det(x I - M)` by Faddeev-LeVerrier.
pub fn char_poly(m: &[Vec<Rat>]) -> Poly {
    let n = m.len();
    let a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(big).collect()).collect();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Q::zero();
                for l in 0..n {
                    s += &a[i][l] * &mk[l][j];
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        mk = next;
        let mut tr = Q::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        c[n - k] = -tr / Q::from_integer(BigInt::from(k));
    }
    c
}

fn eval(p: &Poly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &Poly) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
        .collect()
}

fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut a = trim(a.clone());
    let b = trim(b.clone());
    while a.len() >= b.len() && !a.is_empty() {
        let k = a.len() - b.len();
        let f = a.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            a[i + k] -= &f * c;
        }
        a = trim(a);
    }
    a
}

fn sign_changes(vals: &[Q]) -> usize {
    let s: Vec<bool> = vals.iter().filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Whether `p` has a real root `>= a`.
pub fn has_root_at_least(p: &Poly, a: &Q) -> bool {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return false;
    }
    if eval(&p, a).is_zero() {
        return true;
    }
    let mut seq = vec![p.clone(), trim(derivative(&p))];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at_a: Vec<Q> = seq.iter().map(|q| eval(q, a)).collect();
    let at_inf: Vec<Q> = seq.iter().map(|q| q.last().unwrap().clone()).collect();
    sign_changes(&at_a) > sign_changes(&at_inf)
}

/// Leading eigenvalue at least one, via the largest real root of the
/// characteristic polynomial.
pub fn perron_at_least_one(m: &[Vec<Rat>]) -> bool {
    !m.is_empty() && has_root_at_least(&char_poly(m), &Q::one())
}

/// Simple obstruction oracle: every principal block closed under the
/// matrix (zero block to its complement) has leading eigenvalue >= 1.
pub fn simple_oracle(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    if n == 0 {
        return false;
    }
    for mask in 1u32..(1 << n) {
        let inside: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let outside: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        let closed = inside
            .iter()
            .all(|&i| outside.iter().all(|&j| m[i][j] == Rat::zero()));
        if !closed {
            continue;
        }
        let block: Vec<Vec<Rat>> = inside
            .iter()
            .map(|&i| inside.iter().map(|&j| m[i][j]).collect())
            .collect();
        if !perron_at_least_one(&block) {
            return false;
        }
    }
    true
}

/// Spectral radius in floating point: `rho(M + I) - 1`, with `rho(M + I)`
/// from the growth of `(M + I)^(2^k)` under repeated squaring.
pub fn float_spectral_radius(m: &[Vec<Rat>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = m[i][j];
                    *x.numer() as f64 / *x.denom() as f64 + if i == j { 1.0 } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let mut log_scale = 0.0f64;
    let mut power = 1.0f64;
    for _ in 0..60 {
        let mut b = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    b[i][j] += a[i][k] * a[k][j];
                }
            }
        }
        log_scale *= 2.0;
        power *= 2.0;
        let s = b.iter().flatten().fold(0.0f64, |x, &y| x.max(y));
        for row in &mut b {
            for x in row.iter_mut() {
                *x /= s;
            }
        }
        log_scale += s.ln();
        a = b;
    }
    (log_scale / power).exp() - 1.0
}

// Random affine quotients and lattice oracles.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thurston::cover::models::pillow_point;
use thurston::parabolic::{det2, eigen_class, AffineQuotient, EigenClass, M2};

pub type Pt = (Rat, Rat);

pub fn zero() -> Pt {
    (r(0, 1), r(0, 1))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn affine(a: M2, b: Pt, z: Pt) -> Pt {
    (
        z.0 * a[0][0] + z.1 * a[0][1] + b.0,
        z.0 * a[1][0] + z.1 * a[1][1] + b.1,
    )
}

pub fn random_hyperbolic(g: &mut ChaCha8Rng, k: i64) -> M2 {
    loop {
        let a = [
            [g.gen_range(-k..=k), g.gen_range(-k..=k)],
            [g.gen_range(-k..=k), g.gen_range(-k..=k)],
        ];
        if det2(a).abs() >= 2 && eigen_class(a).unwrap().class != EigenClass::HasUnitEigenvalue {
            return a;
        }
    }
}

pub fn random_unimodular(g: &mut ChaCha8Rng, k: i64) -> M2 {
    loop {
        let s = [
            [g.gen_range(-k..=k), g.gen_range(-k..=k)],
            [g.gen_range(-k..=k), g.gen_range(-k..=k)],
        ];
        if det2(s).abs() == 1 {
            return s;
        }
    }
}

pub fn random_half(g: &mut ChaCha8Rng) -> Pt {
    (r(g.gen_range(0..2), 2), r(g.gen_range(0..2), 2))
}

/// The four corners plus the forward orbit of one random point of
/// `(1/q) Z^2`, with distinct positions. At most `max` points.
pub fn random_quotient(g: &mut ChaCha8Rng, max: usize) -> AffineQuotient {
    loop {
        let a = random_hyperbolic(g, 3);
        let b = random_half(g);
        let q = [2i64, 4, 6, 8][g.gen_range(0..4)];
        let h = r(1, 2);
        let z = r(0, 1);
        let mut pts: Vec<Pt> = vec![(z, z), (h, z), (z, h), (h, h)];
        let mut x = pillow_point((r(g.gen_range(0..q), q), r(g.gen_range(0..q), q)));
        while !pts.contains(&x) && pts.len() <= max {
            pts.push(x);
            x = pillow_point(affine(a, b, x));
        }
        if pts.len() > max {
            continue;
        }
        return AffineQuotient::from_points(a, b, pts).unwrap();
    }
}

/// Adds a second copy of one periodic cycle, chosen at random.
pub fn doubled(g: &mut ChaCha8Rng, m: &AffineQuotient) -> AffineQuotient {
    let periodic: Vec<usize> = (0..m.lifts.len()).filter(|&i| m.period(i).is_some()).collect();
    let start = periodic[g.gen_range(0..periodic.len())];
    let mut cycle = vec![start];
    while m.dynamics[*cycle.last().unwrap()] != start {
        cycle.push(m.dynamics[*cycle.last().unwrap()]);
    }
    let mut lifts = m.lifts.clone();
    let mut dynamics = m.dynamics.clone();
    let base = lifts.len();
    for (k, &i) in cycle.iter().enumerate() {
        lifts.push(m.lifts[i]);
        dynamics.push(base + (k + 1) % cycle.len());
    }
    AffineQuotient::new(m.a, m.b, lifts, dynamics).unwrap()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `L^n` as `(A^n, 2 b_n)` in 128-bit integers, `None` on overflow.
fn iterate(m: &AffineQuotient, n: usize) -> Option<([[i128; 2]; 2], [i128; 2])> {
    let a = m.a.map(|r| r.map(i128::from));
    let b2 = [(m.b.0 * 2).to_integer() as i128, (m.b.1 * 2).to_integer() as i128];
    let mut p = [[1i128, 0], [0, 1]];
    let mut c = [0i128, 0];
    for _ in 0..n {
        let mut np = [[0i128; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                np[i][j] = a[i][0].checked_mul(p[0][j])?.checked_add(a[i][1].checked_mul(p[1][j])?)?;
            }
        }
        let nc = [
            a[0][0].checked_mul(c[0])?.checked_add(a[0][1].checked_mul(c[1])?)?.checked_add(b2[0])?,
            a[1][0].checked_mul(c[0])?.checked_add(a[1][1].checked_mul(c[1])?)?.checked_add(b2[1])?,
        ];
        p = np;
        c = nc;
    }
    Some((p, c))
}

/// Indices `(is_translation, v)` of every lift `s z + w`, `|w| <= bound`,
/// of marked point `k` under `L^n`, computed lift by lift.
fn lift_indices(
    m: &AffineQuotient,
    k: usize,
    n: usize,
    bound: i128,
) -> Option<std::collections::BTreeSet<(bool, [i128; 2])>> {
    let (p, c) = iterate(m, n)?;
    let q = m.q as i128;
    let z = m.lifts[k];
    let zn = [(z.0 * m.q as i64).to_integer() as i128, (z.1 * m.q as i64).to_integer() as i128];
    let mut out = std::collections::BTreeSet::new();
    for s in [1i128, -1] {
        for wx in -bound..=bound {
            for wy in -bound..=bound {
                // Numerators over q.
                let x = [s * zn[0] + q * wx, s * zn[1] + q * wy];
                let y = [
                    p[0][0].checked_mul(x[0])?.checked_add(p[0][1].checked_mul(x[1])?)?.checked_add(q / 2 * c[0])?,
                    p[1][0].checked_mul(x[0])?.checked_add(p[1][1].checked_mul(x[1])?)?.checked_add(q / 2 * c[1])?,
                ];
                let (d, e) = ([y[0] - x[0], y[1] - x[1]], [y[0] + x[0], y[1] + x[1]]);
                if d[0] % q == 0 && d[1] % q == 0 {
                    out.insert((true, [d[0] / q, d[1] / q]));
                }
                if e[0] % q == 0 && e[1] % q == 0 {
                    out.insert((false, [e[0] / q, e[1] / q]));
                }
            }
        }
    }
    Some(out)
}

/// Brute-force Nielsen comparison over lifts with shifts `|w| <= bound`.
/// `None` when the iterate overflows 128 bits.
pub fn brute_same_class(m: &AffineQuotient, i: usize, j: usize, bound: i128) -> Option<bool> {
    let (pi, pj) = (m.period(i)?, m.period(j)?);
    let n = pi / gcd(pi, pj) * pj;
    let si = lift_indices(m, i, n, bound)?;
    let sj = lift_indices(m, j, n, bound)?;
    Some(si.intersection(&sj).next().is_some())
}

/// Backward escape time from `(1/q) Z^2` by direct iteration of
/// `L^-1(w) = adj(A) (w - b) / det A`; `None` for the fixed point.
pub fn brute_escape(a: M2, b: Pt, v: Pt, q: i64, cap: usize) -> Option<usize> {
    if affine(a, b, v) == v {
        return None;
    }
    let d = BigInt::from(det2(a));
    let adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]].map(|r| r.map(BigInt::from));
    // w = W / q with W integral while inside the lattice.
    let mut w = [BigInt::from((v.0 * q).to_integer()), BigInt::from((v.1 * q).to_integer())];
    let qbv = [BigInt::from((b.0 * q).to_integer()), BigInt::from((b.1 * q).to_integer())];
    for n in 1..=cap {
        let u = [&w[0] - &qbv[0], &w[1] - &qbv[1]];
        let x = &adj[0][0] * &u[0] + &adj[0][1] * &u[1];
        let y = &adj[1][0] * &u[0] + &adj[1][1] * &u[1];
        if !(&x % &d).is_zero() || !(&y % &d).is_zero() {
            return Some(n);
        }
        w = [x / &d, y / &d];
    }
    panic!("no escape within {cap} steps");
}

/// All matrices with entries in `[-k, k]` and determinant `det`.
pub fn unimodular_box(k: i64, det: i64) -> Vec<M2> {
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            for c in -k..=k {
                for d in -k..=k {
                    if a * d - b * c == det {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

pub fn mul2(x: M2, y: M2) -> M2 {
    let e = |i: usize, j: usize| x[i][0] * y[0][j] + x[i][1] * y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Brute-force conjugator search: `S A1 = A2 S` over a list of candidates.
pub fn brute_conjugator(a1: M2, a2: M2, cands: &[M2]) -> Option<M2> {
    cands.iter().copied().find(|&s| mul2(s, a1) == mul2(a2, s))
}

/// The quotient conjugated by `S(z) = P z + t`.
pub fn conjugate_quotient(m: &AffineQuotient, p: M2, t: Pt) -> AffineQuotient {
    let d = det2(p);
    let pinv = [[p[1][1] * d, -p[0][1] * d], [-p[1][0] * d, p[0][0] * d]];
    let a2 = mul2(mul2(p, m.a), pinv);
    let pb = affine(p, t, m.b);
    let at = affine(a2, zero(), t);
    let b2 = (pb.0 - at.0, pb.1 - at.1);
    let lifts = m.lifts.iter().map(|&x| affine(p, t, x)).collect();
    AffineQuotient::new(a2, b2, lifts, m.dynamics.clone()).unwrap()
}

pub fn check_witness(m1: &AffineQuotient, m2: &AffineQuotient, w: &thurston::parabolic::AffineConjugacy) {
    let s = |z: Pt| affine(w.p, w.t, z);
    for z in [zero(), (r(1, 1), r(0, 1)), (r(0, 1), r(1, 1)), (r(1, 3), r(2, 7))] {
        assert_eq!(w.g.apply(s(m1.apply(z))), m2.apply(s(z)));
    }
    let mut a: Vec<Pt> = m1.lifts.iter().map(|&x| thurston::cover::models::pillow_point(s(x))).collect();
    let mut b = m2.lifts.clone();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}
