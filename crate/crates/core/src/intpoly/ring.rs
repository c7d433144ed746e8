//! Elements of ℚ[x]/(P) in the power basis `1, α, …, α^(deg P - 1)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::IntPoly;
use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

fn q_normalize(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn q_from_int(p: &IntPoly) -> QPoly {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn q_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    q_normalize(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn q_mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    q_normalize(out)
}

fn q_div_rem(a: &QPoly, d: &QPoly) -> (QPoly, QPoly) {
    let dd = d.len() - 1;
    let lead = d.last().expect("nonzero divisor").clone();
    let mut r = a.clone();
    if r.len() <= dd {
        return (Vec::new(), q_normalize(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = &r[k + dd] / &lead;
        if !c.is_zero() {
            for (i, dc) in d.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    (q_normalize(q), q_normalize(r))
}

/// Clears denominators and returns the primitive integer polynomial.
fn q_to_primitive(p: &QPoly) -> IntPoly {
    let l = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    IntPoly::new(
        p.iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect(),
    )
    .primitive_part()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingElement {
    #[serde(with = "rational_vec")]
    coords: Vec<BigRational>,
    modulus: IntPoly,
}

impl RingElement {
    /// Checked constructor; `coords` must have exactly `deg modulus` entries.
    pub fn new(coords: Vec<BigRational>, modulus: IntPoly) -> Result<Self> {
        Self::check_modulus(&modulus)?;
        if coords.len() != modulus.deg() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                modulus.deg(),
                coords.len()
            )));
        }
        Ok(RingElement { coords, modulus })
    }

    fn check_modulus(modulus: &IntPoly) -> Result<()> {
        if !modulus.is_monic() || modulus.deg() < 1 {
            return Err(Error::InvalidArgument(format!(
                "ring modulus must be monic of degree >= 1, got {modulus}"
            )));
        }
        Ok(())
    }

    /// Reduces an arbitrary rational polynomial modulo the modulus.
    fn from_qpoly(p: QPoly, modulus: &IntPoly) -> Self {
        let (_, r) = q_div_rem(&p, &q_from_int(modulus));
        let mut coords = r;
        coords.resize(modulus.deg(), BigRational::zero());
        RingElement {
            coords,
            modulus: modulus.clone(),
        }
    }

    pub fn from_int_poly(p: &IntPoly, modulus: &IntPoly) -> Result<Self> {
        Self::check_modulus(modulus)?;
        Ok(Self::from_qpoly(q_from_int(p), modulus))
    }

    pub fn one(modulus: &IntPoly) -> Result<Self> {
        Self::from_int_poly(&IntPoly::one(), modulus)
    }

    /// The class of `x`, i.e. the root α.
    pub fn alpha(modulus: &IntPoly) -> Result<Self> {
        Self::from_int_poly(&IntPoly::x(), modulus)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    fn lift(&self) -> QPoly {
        q_normalize(self.coords.clone())
    }

    fn same_ring(&self, o: &RingElement) {
        assert_eq!(self.modulus, o.modulus, "ring elements from different rings");
    }

    pub fn add(&self, o: &RingElement) -> RingElement {
        self.same_ring(o);
        RingElement {
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
            modulus: self.modulus.clone(),
        }
    }

    pub fn mul(&self, o: &RingElement) -> RingElement {
        self.same_ring(o);
        Self::from_qpoly(q_mul(&self.lift(), &o.lift()), &self.modulus)
    }

    pub fn pow(&self, k: u64) -> RingElement {
        let mut result = RingElement::one(&self.modulus).expect("modulus already checked");
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_one(&self) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over ℚ.
    pub fn invert(&self) -> Result<RingElement> {
        let m = q_from_int(&self.modulus);
        let (mut r0, mut r1) = (m, self.lift());
        let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = q_div_rem(&r0, &r1);
            let s = q_sub(&s0, &q_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            let gcd = if r0.is_empty() {
                self.modulus.clone()
            } else {
                q_to_primitive(&r0)
            };
            return Err(Error::NotInvertible {
                modulus: self.modulus.clone(),
                gcd,
            });
        }
        let c = r0[0].clone();
        let inv: QPoly = s0.iter().map(|x| x / &c).collect();
        Ok(Self::from_qpoly(inv, &self.modulus))
    }

    /// Coordinates as integers when they all are.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.integer_coords().is_some()
    }

    /// Image under the embedding `α ↦ z`.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coords.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }
}

mod rational_vec {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Inverts `e` in ℚ[x]/(P).
pub fn invert_in_ring(e: &RingElement) -> Result<RingElement> {
    e.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn alpha_inverse_quadratic() {
        let m = IntPoly::from_i64s(&[1, -3, 1]);
        let a = RingElement::alpha(&m).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv.coords(), ints(&[3, -1]).as_slice());
        assert!(a.mul(&inv).is_one());
    }

    #[test]
    fn one_inverts_to_one() {
        let m = lehmer_polynomial();
        let one = RingElement::one(&m).unwrap();
        assert!(one.invert().unwrap().is_one());
    }

    #[test]
    fn alpha_inverse_lehmer_has_integer_coords() {
        let m = lehmer_polynomial();
        let inv = RingElement::alpha(&m).unwrap().invert().unwrap();
        let expected: Vec<BigInt> = [-1, 0, 1, 1, 1, 1, 1, 0, -1, -1]
            .iter()
            .map(|&c| BigInt::from(c))
            .collect();
        assert_eq!(inv.integer_coords(), Some(expected));
        assert!(RingElement::alpha(&m).unwrap().mul(&inv).is_one());
    }

    #[test]
    fn non_invertible_reports_gcd() {
        // x^2 - 1 = (x - 1)(x + 1); the class of x - 1 is a zero divisor
        let m = IntPoly::from_i64s(&[-1, 0, 1]);
        let e = RingElement::from_int_poly(&IntPoly::from_i64s(&[-1, 1]), &m).unwrap();
        match e.invert() {
            Err(Error::NotInvertible { gcd, .. }) => assert_eq!(gcd, IntPoly::from_i64s(&[-1, 1])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_modulus_rejected() {
        assert!(RingElement::alpha(&IntPoly::from_i64s(&[1, 2])).is_err());
        assert!(RingElement::new(ints(&[1]), IntPoly::from_i64s(&[1, 0, 1])).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let m = IntPoly::from_i64s(&[1, -3, 1]);
        let e = RingElement::new(
            vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer(3.into())],
            m,
        )
        .unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<RingElement>(&s).unwrap(), e);
    }

    proptest! {
        #[test]
        fn inverse_multiplies_to_one(c in prop::collection::vec(-4i64..=4, 1..6)) {
            let m = lehmer_polynomial();
            let e = RingElement::from_int_poly(&IntPoly::from_i64s(&c), &m).unwrap();
            // Lehmer's polynomial is irreducible, so every nonzero class inverts.
            prop_assume!(e.coords().iter().any(|x| !x.is_zero()));
            let inv = e.invert().unwrap();
            prop_assert!(e.mul(&inv).is_one());
        }

        #[test]
        fn alpha_inverse_integral_for_palindromic(half in prop::collection::vec(-2i64..=2, 1..5)) {
            let d = half.len();
            let mut c = vec![0i64; 2 * d + 1];
            c[0] = 1;
            c[2 * d] = 1;
            for (i, v) in half.iter().enumerate() {
                c[i + 1] = *v;
                c[2 * d - 1 - i] = *v;
            }
            let m = IntPoly::from_i64s(&c);
            let inv = RingElement::alpha(&m).unwrap().invert().unwrap();
            prop_assert!(inv.is_integral());
        }
    }
}
