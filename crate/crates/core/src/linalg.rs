//! Division-free characteristic polynomials over commutative rings.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Ring operations needed by [`charpoly`].
pub trait CommutativeRing:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> CommutativeRing for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// `det(xI - A)` by Berkowitz's algorithm, constant term first. Only ring
/// operations are used, so integer matrices give exact integer results.
pub fn charpoly<T: CommutativeRing>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    // coefficients of the leading principal minors' char polys, highest first
    let mut v: Vec<T> = vec![T::one()];
    for r in 0..n {
        let mut t: Vec<T> = vec![T::zero(); r + 2];
        t[0] = T::one();
        t[1] = -a[r][r].clone();
        let mut w: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for tk in t.iter_mut().skip(2) {
            let dot = (0..r).fold(T::zero(), |acc, j| acc + a[r][j].clone() * w[j].clone());
            *tk = -dot;
            w = (0..r)
                .map(|i| (0..r).fold(T::zero(), |acc, j| acc + a[i][j].clone() * w[j].clone()))
                .collect();
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                *slot = slot.clone() + t[i - j].clone() * vj.clone();
            }
        }
        v = next;
    }
    v.reverse();
    v
}

/// Determinant from the constant term of the characteristic polynomial.
pub fn determinant<T: CommutativeRing>(a: &[Vec<T>]) -> T {
    let c = charpoly(a);
    if a.len() % 2 == 0 {
        c[0].clone()
    } else {
        -c[0].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_complex::Complex64;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn two_by_two() {
        // x^2 - 5x - 2 for [[1, 2], [3, 4]]
        let c = charpoly(&big(&[&[1, 2], &[3, 4]]));
        assert_eq!(c, vec![BigInt::from(-2), BigInt::from(-5), BigInt::from(1)]);
        assert_eq!(determinant(&big(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
    }

    #[test]
    fn three_by_three_against_expansion() {
        let m = big(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // det by cofactor expansion: 2(3*-2 - 4*5) + 1(1*-2 - 0) = -52 - 2 = -54
        assert_eq!(determinant(&m), BigInt::from(-54));
        let c = charpoly(&m);
        // trace 3, sum of principal 2-minors: (6+1) + (-4-0) + (-6-20) = -23
        assert_eq!(c[3], BigInt::from(1));
        assert_eq!(c[2], BigInt::from(-3));
        assert_eq!(c[1], BigInt::from(-23));
        assert_eq!(c[0], BigInt::from(54));
    }

    #[test]
    fn complex_diagonal() {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let c = charpoly(&[vec![i, z], vec![z, -i]]);
        // (x - i)(x + i) = x^2 + 1
        assert!((c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c[1].norm() < 1e-15);
    }

    #[test]
    fn empty_matrix() {
        let c: Vec<BigInt> = charpoly(&[]);
        assert_eq!(c, vec![BigInt::from(1)]);
    }
}
