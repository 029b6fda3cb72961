//! Multitwists about an invariant multicurve and the twist equation
//! `(N I - N M) x = m - n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cover::PLThurstonMap;
use crate::curves::Curve;
use crate::obstruction::{Rat, ThurstonMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistLattice {
    pub curves: Vec<Curve>,
    pub matrix: Vec<Vec<Rat>>,
    /// Common multiple of the degrees on preimages homotopic to the curves.
    pub n: i64,
}

impl TwistLattice {
    pub fn new(curves: Vec<Curve>, matrix: Vec<Vec<Rat>>, n: i64) -> TwistLattice {
        assert!(n >= 1);
        assert!(
            matrix.iter().flatten().all(|x| (x * n).is_integer()),
            "N M must be integral"
        );
        TwistLattice { curves, matrix, n }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// The integer matrix `N I - N M`.
    pub fn operator(&self) -> Vec<Vec<i64>> {
        let k = self.dim();
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let nm = (self.matrix[i][j] * self.n).to_integer();
                        if i == j {
                            self.n - nm
                        } else {
                            -nm
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Twist lattice of a stable multicurve of an untwisted map.
pub fn twist_modulus(f: &PLThurstonMap, m: &ThurstonMatrix) -> TwistLattice {
    let mut n = 1i64;
    for g in &m.curves {
        for comp in f.lift_curve(g).components {
            if m.curves.contains(&comp.curve) {
                n = n.lcm(&(comp.degree as i64));
            }
        }
    }
    TwistLattice::new(m.curves.clone(), m.entries.clone(), n)
}

/// Diagonal `D = U A V` with `U`, `V` unimodular.
pub struct Diagonal {
    pub d: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

fn eye(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

/// Smith normal form; the diagonal entries are nonnegative and each
/// divides the next.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Diagonal {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u = eye(rows);
    let mut v = eye(cols);

    let row_add = |m: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, k: &BigInt| {
        for c in 0..m[0].len() {
            let x = &m[src][c] * k;
            m[dst][c] += x;
        }
    };
    let col_add = |m: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, k: &BigInt| {
        for row in m.iter_mut() {
            let x = &row[src] * k;
            row[dst] += x;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the remaining block as pivot.
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by_key(|&(i, j)| d[i][j].abs())
            else {
                return normalize(d, u, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = d[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = -(d[i][t].div_floor(&p));
                row_add(&mut d, i, t, &q);
                row_add(&mut u, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = -(d[t][j].div_floor(&p));
                col_add(&mut d, j, t, &q);
                col_add(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Push a non-multiple into the pivot row.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[i][j].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    row_add(&mut d, t, i, &one);
                    row_add(&mut u, t, i, &one);
                }
                None => break,
            }
        }
    }
    normalize(d, u, v)
}

fn normalize(mut d: Vec<Vec<BigInt>>, mut u: Vec<Vec<BigInt>>, v: Vec<Vec<BigInt>>) -> Diagonal {
    for i in 0..d.len().min(d.first().map_or(0, Vec::len)) {
        if d[i][i].is_negative() {
            for x in d[i].iter_mut() {
                *x = -x.clone();
            }
            for x in u[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Diagonal { d, u, v }
}

/// Integer solutions of `A x = b`: one particular solution, or `None`.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), rows);
    let Diagonal { d, u, v } = smith_normal_form(a);
    let ub: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).map(|k| &u[i][k] * b[k]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let di = if i < cols { d[i][i].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(
        (0..cols)
            .map(|i| (0..cols).map(|k| &v[i][k] * &y[k]).sum())
            .collect(),
    )
}

/// An integer `x` with `(N I - N M) x = m - n`, or `None`.
pub fn solve_twist_equation(l: &TwistLattice, m: &[i64], n: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(m.len(), l.dim());
    assert_eq!(n.len(), l.dim());
    let rhs: Vec<i64> = m.iter().zip(n).map(|(a, b)| a - b).collect();
    solve_integer(&l.operator(), &rhs)?
        .iter()
        .map(ToPrimitive::to_i64)
        .collect()
}
