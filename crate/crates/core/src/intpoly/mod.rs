//! Exact integer polynomials.
//!
//! Coefficients are stored constant term first and kept normalized: the zero
//! polynomial is the empty vector and no other value has a trailing zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub mod irreducible;
pub mod modp;
pub mod ring;

pub use irreducible::{irreducibility_report, IrreducibilityConfig, Irreducibility};
pub use ring::RingElement;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^k`; zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut result = IntPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `x^deg · p(1/x)`.
    pub fn reversal(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `p(-x)`.
    pub fn negate_x(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Number of trailing zero coefficients, i.e. the multiplicity of the root 0.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Removes every factor `x`.
    pub fn strip_x(&self) -> IntPoly {
        let k = self.zero_root_multiplicity();
        IntPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Coefficients rounded to `f64`.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.to_f64s()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// True when the coefficient list reads the same in both directions.
    pub fn is_palindromic(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let n = self.coeffs.len();
        Ok((0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i]))
    }

    /// Monic `Q` of degree `d` with `p(y) = y^d · Q(y + 1/y)` for a monic
    /// palindromic `p` of degree `2d`.
    ///
    /// With `T_k(y + 1/y) = y^k + y^-k` (so `T_1 = w`, `T_2 = w² - 2`,
    /// `T_{k+1} = w·T_k - T_{k-1}`) the middle-anchored coefficients of `p`
    /// give `Q = a_d + Σ a_{d+k} T_k`.
    pub fn trace_polynomial(&self) -> Result<IntPoly> {
        if !self.is_palindromic()? {
            return Err(Error::NotPalindromic(self.clone()));
        }
        if !self.is_monic() {
            return Err(Error::NotMonic(self.clone()));
        }
        let n = self.deg();
        if n % 2 == 1 {
            return Err(Error::OddDegree(self.clone()));
        }
        let d = n / 2;
        let w = IntPoly::x();
        let two = IntPoly::from_i64s(&[2]);
        let mut q = IntPoly::new(vec![self.coeff(d)]);
        // T_0 = 2 is only needed to seed the recurrence.
        let mut prev = two;
        let mut cur = w.clone();
        for k in 1..=d {
            q = &q + &cur.scale(&self.coeff(d + k));
            let next = &(&w * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        Ok(q)
    }

    /// Root-squaring step: returns `q` with `q(x²) = (-1)^deg · p(x)·p(-x)`.
    ///
    /// The sign makes `q` monic whenever `p` is.
    pub fn graeffe(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let n = self.deg();
        let a = &self.coeffs;
        let mut q = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = BigInt::zero();
            let lo = (2 * k).saturating_sub(n);
            let hi = (2 * k).min(n);
            for i in lo..=hi {
                let j = 2 * k - i;
                let term = &a[i] * &a[j];
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            q.push(if n % 2 == 0 { acc } else { -acc });
        }
        IntPoly::new(q)
    }

    /// `p(-x²)`.
    pub fn compose_neg_x_squared(&self) -> IntPoly {
        let mut out = vec![BigInt::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k] = if k % 2 == 1 { -c } else { c.clone() };
        }
        IntPoly::new(out)
    }

    /// Exact quotient `self / d` over ℤ, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let ld = d.leading()?;
        let mut r = self.coeffs.clone();
        let n = self.deg();
        if n < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let lr = &r[k + dd];
            if lr.is_zero() {
                continue;
            }
            let (qk, rem) = lr.div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) · self mod d`.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.deg();
        let ld = d.leading().cloned().unwrap_or_else(BigInt::one);
        if self.deg() < dd || self.is_zero() {
            return self.clone();
        }
        let delta = self.deg() - dd;
        let mut r = self.clone();
        let mut steps = 0usize;
        while !r.is_zero() && r.deg() >= dd {
            let lr = r.leading().cloned().unwrap_or_default();
            let k = r.deg() - dd;
            r = &r.scale(&ld) - &d.scale(&lr).shift(k);
            steps += 1;
        }
        let missing = (delta + 1).saturating_sub(steps);
        r.scale(&num_traits::pow(ld, missing))
    }

    /// Primitive gcd over ℤ with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut f, mut g) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !g.is_zero() {
            let r = f.pseudo_rem(&g).primitive_part();
            f = g;
            g = r;
        }
        f.primitive_part()
    }

    /// Yun's square-free decomposition of the primitive part:
    /// `pp(self) = Π fᵢ^i` with each `fᵢ` square-free and primitive.
    /// Constant factors `fᵢ = 1` are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let a = self.primitive_part();
        let da = a.derivative();
        let b = a.gcd(&da);
        let mut c = a.div_exact(&b).expect("gcd divides");
        let mut d = &da.div_exact(&b).expect("gcd divides derivative") - &c.derivative();
        let mut i = 1;
        while !c.is_constant() {
            let g = c.gcd(&d);
            let c_next = c.div_exact(&g).expect("gcd divides");
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            d = &d.div_exact(&g).expect("gcd divides") - &c_next.derivative();
            c = c_next;
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Space-separated coefficients, constant term first.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Signed remainder sequence `f0 = a, f1 = b, f_{k+1} = -rem(f_{k-1}, f_k)`,
/// computed with sign-corrected pseudo-remainders and made primitive at every
/// step (positive rescaling leaves sign variations unchanged).
pub fn signed_remainder_sequence(a: &IntPoly, b: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![a.clone()];
    if b.is_zero() {
        return seq;
    }
    seq.push(b.clone());
    loop {
        let n = seq.len();
        let f = &seq[n - 2];
        let g = &seq[n - 1];
        if g.is_constant() {
            break;
        }
        let delta = f.deg().saturating_sub(g.deg());
        let mut r = f.pseudo_rem(g);
        if r.is_zero() {
            break;
        }
        let lg_negative = g.leading().is_some_and(|l| l.is_negative());
        // prem = lc(g)^(delta+1) · rem; undo the sign of that factor, then negate.
        let flip = lg_negative && (delta + 1) % 2 == 1;
        if !flip {
            r = -&r;
        }
        let c = r.content();
        let r = IntPoly::new(r.coeffs.iter().map(|x| x / &c).collect());
        seq.push(r);
    }
    seq
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly[{}]", self.to_text())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses the space-separated, constant-first text format; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.split('#').next().unwrap_or("");
        let body = body.replace(',', " ");
        let mut coeffs = Vec::new();
        for tok in body.split_whitespace() {
            let c = tok
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{tok}`")))?;
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("no coefficients".into()));
        }
        Ok(IntPoly::new(coeffs))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Lehmer's degree-10 polynomial.
pub fn lehmer_polynomial() -> IntPoly {
    IntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
}

/// `x³ - x - 1`, the smallest-measure non-palindromic polynomial.
pub fn smyth_polynomial() -> IntPoly {
    IntPoly::from_i64s(&[-1, -1, 0, 1])
}

/// The n-th cyclotomic polynomial, computed by exact division of `x^n - 1`.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1);
    let mut p = &IntPoly::monomial(BigInt::one(), n) - &IntPoly::one();
    for d in 1..n {
        if n % d == 0 {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divides x^n - 1");
        }
    }
    p
}

/// Euler's totient.
pub fn totient(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
