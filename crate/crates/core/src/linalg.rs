//! Exact Gaussian elimination over an abstract field, used with rational
//! entries for jet-space nullspaces and with scalar fractions for the
//! independence and expansion solves.

use crate::funcring::{Rat, ScalarFrac};
use num::{One, Zero};

pub trait FieldScalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl FieldScalar for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl FieldScalar for ScalarFrac {
    fn zero() -> Self {
        ScalarFrac::zero()
    }
    fn one() -> Self {
        ScalarFrac::one()
    }
    fn is_zero(&self) -> bool {
        ScalarFrac::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        ScalarFrac::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarFrac::mul(self, o)
    }
    fn inv(&self) -> Self {
        ScalarFrac::inv(self).expect("inverse of zero")
    }
    fn neg(&self) -> Self {
        ScalarFrac::neg(self)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: FieldScalar>(mat: &mut [Vec<F>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].inv();
        for x in mat[r][c..].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    let t = f.mul(p);
                    *x = x.sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldScalar>(mat: &[Vec<F>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

/// Solves `A x = b`. Returns `None` when inconsistent; free variables are set
/// to zero, so the solution is deterministic.
pub fn solve<F: FieldScalar>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the constant column
    }
    let mut x = vec![F::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace `{x : A x = 0}`, echelon-normalized with free
/// variables set to one in turn.
pub fn nullspace<F: FieldScalar>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = m[i][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial of a square rational matrix by the
/// Faddeev–LeVerrier recursion; coefficients ascending, leading 1.
pub fn char_poly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = vec![<Rat as Zero>::zero(); n + 1];
    coeffs[n] = <Rat as One>::one();
    if n == 0 {
        return coeffs;
    }
    let identity = |c: &Rat| -> Vec<Vec<Rat>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { c.clone() } else { <Rat as Zero>::zero() })
                    .collect()
            })
            .collect()
    };
    let mat_mul = |x: &[Vec<Rat>], y: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = <Rat as Zero>::zero();
                        for k in 0..n {
                            s += &x[i][k] * &y[k][j];
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let trace = |x: &[Vec<Rat>]| -> Rat {
        let mut s = <Rat as Zero>::zero();
        for (i, row) in x.iter().enumerate() {
            s += &row[i];
        }
        s
    };
    let mut m = identity(&<Rat as One>::one());
    for k in 1..=n {
        m = mat_mul(a, &m);
        let c = -(trace(&m) / Rat::from_integer(k.into()));
        coeffs[n - k] = c.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn solve_simple() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(5), rat(1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn inconsistent_detected() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let b = vec![rat(1), rat(3)];
        assert!(solve(&a, &b).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![rat(-2), rat(1)]);
    }

    #[test]
    fn char_poly_diag() {
        let a = vec![vec![rat(1), rat(0)], vec![rat(0), rat(4)]];
        // (t-1)(t-4) = t^2 - 5t + 4
        assert_eq!(char_poly(&a), vec![rat(4), rat(-5), rat(1)]);
    }
}
