//! Integral binary quadratic forms and proper equivalence.
//!
//! A 2x2 integer matrix `A = [[a, b], [c, d]]` is paired with the form
//! `Q_A(x, y) = c x^2 + (d - a) x y - b y^2`, whose zeros are the eigenlines
//! of `A`. For non-scalar matrices with equal trace and determinant,
//! `S A1 S^-1 = A2` with `S` in SL2(Z) exactly when `Q_A1 o S^-1 = Q_A2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Z = BigInt;
pub type Mat = [[Z; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Form {
    pub a: Z,
    pub b: Z,
    pub c: Z,
}

impl Form {
    pub fn new(a: Z, b: Z, c: Z) -> Form {
        Form { a, b, c }
    }

    pub fn of_matrix(m: &Mat) -> Form {
        Form::new(
            m[1][0].clone(),
            &m[1][1] - &m[0][0],
            -m[0][1].clone(),
        )
    }

    pub fn disc(&self) -> Z {
        &self.b * &self.b - Z::from(4) * &self.a * &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn eval(&self, x: &Z, y: &Z) -> Z {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `(x, y) -> self(U (x, y))`.
    pub fn act(&self, u: &Mat) -> Form {
        let [[p, q], [r, s]] = u;
        let two = Z::from(2);
        Form::new(
            self.eval(p, r),
            &two * &self.a * p * q + &self.b * (p * s + q * r) + &two * &self.c * r * s,
            self.eval(q, s),
        )
    }

    pub fn neg(&self) -> Form {
        Form::new(-self.a.clone(), -self.b.clone(), -self.c.clone())
    }
}

pub fn z(n: i64) -> Z {
    Z::from(n)
}

pub fn identity() -> Mat {
    [[z(1), z(0)], [z(0), z(1)]]
}

pub fn mat(m: [[i64; 2]; 2]) -> Mat {
    [[z(m[0][0]), z(m[0][1])], [z(m[1][0]), z(m[1][1])]]
}

pub fn mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det(m: &Mat) -> Z {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

/// Inverse of a unimodular matrix.
pub fn inv(m: &Mat) -> Mat {
    let d = det(m);
    debug_assert!(d.abs().is_one());
    [
        [&d * &m[1][1], -(&d * &m[0][1])],
        [-(&d * &m[1][0]), &d * &m[0][0]],
    ]
}

pub fn scale(k: &Z, m: &Mat) -> Mat {
    [
        [k * &m[0][0], k * &m[0][1]],
        [k * &m[1][0], k * &m[1][1]],
    ]
}

fn upper(k: Z) -> Mat {
    [[z(1), k], [z(0), z(1)]]
}

fn lower(k: Z) -> Mat {
    [[z(1), z(0)], [k, z(1)]]
}

fn quarter_turn() -> Mat {
    [[z(0), z(-1)], [z(1), z(0)]]
}

/// Gauss reduction of a positive definite form: `f o U` with
/// `|b| <= a <= c`, and `b >= 0` when either inequality is an equality.
fn reduce_definite(f: &Form) -> (Form, Mat) {
    let mut g = f.clone();
    let mut u = identity();
    loop {
        let two_a = &g.a * 2;
        let k = (&g.a - &g.b).div_floor(&two_a);
        if !k.is_zero() {
            let t = upper(k);
            g = g.act(&t);
            u = mul(&u, &t);
        }
        if g.a > g.c || (g.a == g.c && g.b.is_negative()) {
            let s = quarter_turn();
            g = g.act(&s);
            u = mul(&u, &s);
            continue;
        }
        return (g, u);
    }
}

/// Canonical representative of a form with square discriminant: each zero
/// line is moved to the second basis vector, giving `(a, b, 0)` with
/// `0 <= a < |b|`; the least candidate wins.
fn reduce_square(f: &Form, root: &Z) -> (Form, Mat) {
    let mut lines: Vec<(Z, Z)> = Vec::new();
    let mut push = |p: Z, r: Z| {
        let g = p.gcd(&r);
        let (mut p, mut r) = (p / &g, r / &g);
        if r.is_negative() || (r.is_zero() && p.is_negative()) {
            p = -p;
            r = -r;
        }
        if !lines.contains(&(p.clone(), r.clone())) {
            lines.push((p, r));
        }
    };
    if f.a.is_zero() {
        push(z(1), z(0));
        if !f.b.is_zero() || !f.c.is_zero() {
            push(f.c.clone(), -f.b.clone());
        }
    } else {
        for s in [root.clone(), -root.clone()] {
            push(-&f.b + s, &f.a * 2);
        }
    }
    let mut best: Option<(Form, Mat)> = None;
    for (p, r) in lines {
        // Complete (p, r) to a unimodular matrix with it as second column.
        let e = r.extended_gcd(&p);
        // e.x * r + e.y * p = 1, so first column (x, -y) gives det 1.
        let mut u: Mat = [[e.x.clone(), p.clone()], [-e.y.clone(), r.clone()]];
        if det(&u) != z(1) {
            u = [[-e.x.clone(), p.clone()], [e.y.clone(), r.clone()]];
        }
        debug_assert_eq!(det(&u), z(1));
        let mut g = f.act(&u);
        debug_assert!(g.c.is_zero());
        if !g.b.is_zero() {
            let k = -(g.a.div_floor(&g.b.abs())) * g.b.signum();
            let t = lower(k);
            g = g.act(&t);
            u = mul(&u, &t);
        }
        if best.as_ref().is_none_or(|(h, _)| g < *h) {
            best = Some((g, u));
        }
    }
    best.expect("a form with square discriminant has a zero line")
}

fn is_reduced_indefinite(f: &Form, s: &Z) -> bool {
    let two_a = &f.a.abs() * 2;
    f.b.is_positive() && f.b <= *s && &two_a + &f.b > *s && &two_a - &f.b <= *s
}

/// One step of the reduction operator for an indefinite form with
/// non-square discriminant `D`, `s = floor(sqrt(D))`.
fn rho(f: &Form, d: &Z, s: &Z) -> (Form, Mat) {
    let c_abs = f.c.abs();
    let two_c = &c_abs * 2;
    let nb = -f.b.clone();
    // Target window of length 2|c| for the new middle coefficient.
    let lo = if c_abs > *s {
        -c_abs.clone() + 1
    } else {
        s - &two_c + 1
    };
    let diff: Z = &nb - &lo;
    let b2 = &lo + diff.mod_floor(&two_c);
    let k = (&b2 + &f.b) / (&f.c * 2);
    let c2 = (&b2 * &b2 - d) / (&f.c * 4);
    let u = [[z(0), z(-1)], [z(1), k]];
    (Form::new(f.c.clone(), b2, c2), u)
}

fn reduce_indefinite(f: &Form, d: &Z, s: &Z) -> (Form, Mat) {
    let mut g = f.clone();
    let mut u = identity();
    let mut steps = 0usize;
    while !is_reduced_indefinite(&g, s) {
        let (h, t) = rho(&g, d, s);
        g = h;
        u = mul(&u, &t);
        steps += 1;
        assert!(steps < 100_000, "indefinite reduction did not terminate");
    }
    debug_assert_eq!(f.act(&u), g);
    (g, u)
}

/// The cycle of reduced forms through `r`: pairs `(r o W_k, W_k)` with
/// `W_0 = I`, followed by the full-cycle automorph.
fn cycle(r: &Form, d: &Z, s: &Z) -> (Vec<(Form, Mat)>, Mat) {
    let mut out = vec![(r.clone(), identity())];
    let mut g = r.clone();
    let mut w = identity();
    loop {
        let (h, t) = rho(&g, d, s);
        w = mul(&w, &t);
        if h == *r {
            return (out, w);
        }
        out.push((h.clone(), w.clone()));
        g = h;
    }
}

enum Kind {
    Zero,
    Definite,
    Square(Z),
    Indefinite(Z),
}

fn kind(f: &Form) -> Kind {
    if f.is_zero() {
        return Kind::Zero;
    }
    let d = f.disc();
    if d.is_negative() {
        return Kind::Definite;
    }
    let s = d.sqrt();
    if &s * &s == d {
        Kind::Square(s)
    } else {
        Kind::Indefinite(s)
    }
}

/// A unimodular `V` (determinant 1) with `f1 o V = f2`, if one exists.
pub fn proper_equivalence(f1: &Form, f2: &Form) -> Option<Mat> {
    let d = f1.disc();
    if d != f2.disc() {
        return None;
    }
    let v = match kind(f1) {
        Kind::Zero => f2.is_zero().then(identity)?,
        Kind::Definite => {
            if f1.a.signum() != f2.a.signum() {
                return None;
            }
            let flip = f1.a.is_negative();
            let (g1, g2) = if flip {
                (f1.neg(), f2.neg())
            } else {
                (f1.clone(), f2.clone())
            };
            let (r1, u1) = reduce_definite(&g1);
            let (r2, u2) = reduce_definite(&g2);
            (r1 == r2).then(|| mul(&u1, &inv(&u2)))?
        }
        Kind::Square(root) => {
            let (r1, u1) = reduce_square(f1, &root);
            let (r2, u2) = reduce_square(f2, &root);
            (r1 == r2).then(|| mul(&u1, &inv(&u2)))?
        }
        Kind::Indefinite(s) => {
            let (r1, u1) = reduce_indefinite(f1, &d, &s);
            let (r2, u2) = reduce_indefinite(f2, &d, &s);
            let (cyc, _) = cycle(&r1, &d, &s);
            let (_, w) = cyc.into_iter().find(|(g, _)| *g == r2)?;
            mul(&mul(&u1, &w), &inv(&u2))
        }
    };
    debug_assert_eq!(f1.act(&v), *f2);
    Some(v)
}

/// Generator, up to sign, of the proper automorphs of an indefinite form
/// with non-square discriminant.
pub fn fundamental_automorph(f: &Form) -> Option<Mat> {
    let Kind::Indefinite(s) = kind(f) else {
        return None;
    };
    let d = f.disc();
    let (r, u) = reduce_indefinite(f, &d, &s);
    let (_, w) = cycle(&r, &d, &s);
    let e = mul(&mul(&u, &w), &inv(&u));
    debug_assert_eq!(f.act(&e), *f);
    Some(e)
}
