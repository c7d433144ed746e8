//! Dense polynomials over a small prime field, just enough for
//! distinct-degree factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_int(f: &IntPoly, p: u64) -> Self {
        let pb = BigInt::from(p);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced residue fits"))
            .collect();
        FpPoly::new(p, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.p;
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = o.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        FpPoly::new(p, c)
    }

    fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, vec![]);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.deg();
        let li = inv(*d.coeffs.last().expect("nonzero divisor"), p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dd], li, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &dc) in d.coeffs.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mulmod(c, dc, p)) % p;
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => {
                let li = inv(l, self.p);
                FpPoly::new(self.p, self.coeffs.iter().map(|&c| mulmod(c, li, self.p)).collect())
            }
        }
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn derivative(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % p, p))
                .collect(),
        )
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg() == 0
    }

    fn powmod_poly(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut result = FpPoly::new(self.p, vec![1]).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }

    /// Degrees of the irreducible factors of a square-free polynomial,
    /// sorted ascending, by distinct-degree factorization.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let mut degrees = Vec::new();
        let mut h = FpPoly::x(p);
        let mut k = 1;
        while 2 * k <= f.deg() {
            h = h.powmod_poly(p, &f);
            let g = h.sub(&FpPoly::x(p)).gcd(&f);
            if g.deg() > 0 {
                degrees.extend(std::iter::repeat_n(k, g.deg() / k));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            k += 1;
        }
        if f.deg() > 0 {
            degrees.push(f.deg());
        }
        degrees.sort_unstable();
        degrees
    }
}

/// All subset sums of a degree pattern, as a membership table over `0..=total`.
pub fn subset_sums(pattern: &[usize]) -> Vec<bool> {
    let total: usize = pattern.iter().sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in pattern {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

pub fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_degrees_mod_small_primes() {
        // x^4 + 1 splits into quadratics mod 3
        let f = FpPoly::from_int(&IntPoly::from_i64s(&[1, 0, 0, 0, 1]), 3);
        assert_eq!(f.factor_degrees(), vec![2, 2]);
        // x^2 + 1 = (x+2)(x+3) mod 5
        let g = FpPoly::from_int(&IntPoly::from_i64s(&[1, 0, 1]), 5);
        assert_eq!(g.factor_degrees(), vec![1, 1]);
        // x^2 + x + 1 irreducible mod 2
        let h = FpPoly::from_int(&IntPoly::from_i64s(&[1, 1, 1]), 2);
        assert_eq!(h.factor_degrees(), vec![2]);
    }

    #[test]
    fn subset_sum_table() {
        let s = subset_sums(&[1, 3]);
        assert_eq!(s, vec![true, true, false, true, true]);
    }

    #[test]
    fn primes() {
        assert_eq!(small_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn squarefree_mod_p() {
        let f = FpPoly::from_int(&IntPoly::from_i64s(&[1, 2, 1]), 7);
        assert!(!f.is_squarefree());
        let g = FpPoly::from_int(&IntPoly::from_i64s(&[-1, 0, 1]), 7);
        assert!(g.is_squarefree());
    }
}
