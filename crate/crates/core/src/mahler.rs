//! Mahler measure with a rigorous error radius, the exact Kronecker decision
//! and classical lower bounds.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::{smyth_polynomial, IntPoly};
use crate::roots::{count_real_roots, refine_roots, RootProfile};

const EPS: f64 = f64::EPSILON;

/// Radius targets tried in turn when certifying roots for a measure.
pub const PRECISION_LADDER: [f64; 3] = [1e-12, 1e-9, 1e-6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerCertificate {
    pub value: f64,
    pub error_radius: f64,
    pub is_one_exact: bool,
    pub poly: IntPoly,
}

impl MahlerCertificate {
    pub fn lower(&self) -> f64 {
        (self.value - self.error_radius).max(1.0)
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_radius
    }

    /// `log M` as a `(value, radius)` pair.
    pub fn log(&self) -> (f64, f64) {
        let v = self.value.ln();
        let r = (self.upper().ln() - v).max(v - self.lower().ln());
        (v, r * (1.0 + 4.0 * EPS) + 4.0 * EPS * v.abs())
    }
}

/// `Π max(1, |z|)` over certified roots, with an error radius that covers
/// both the root radii and the floating-point rounding of the product.
pub fn measure_from_profile(profile: &RootProfile) -> (f64, f64) {
    let mut value = 1.0f64;
    let mut hi = 1.0f64;
    let mut lo = 1.0f64;
    let mut ops = 0usize;
    for root in &profile.roots {
        let m = root.approx.norm();
        for _ in 0..root.multiplicity {
            value *= m.max(1.0);
            hi *= (m + root.radius).max(1.0) * (1.0 + 2.0 * EPS);
            lo *= (m - root.radius).max(1.0) * (1.0 - 2.0 * EPS);
            ops += 1;
        }
    }
    let slack = 1.0 + 4.0 * (ops as f64 + 1.0) * EPS;
    let radius = ((hi - value).max(value - lo.max(1.0))).max(0.0) * slack;
    (value, radius)
}

fn require_monic(p: &IntPoly) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.clone()));
    }
    Ok(())
}

/// Certified roots for `p`, loosening the radius target only when the
/// tighter one cannot be met.
pub fn certified_profile(p: &IntPoly) -> Result<RootProfile> {
    let mut last = None;
    for &prec in &PRECISION_LADDER {
        match refine_roots(p, prec) {
            Ok(profile) => return Ok(profile),
            Err(e @ Error::Certification { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("ladder is nonempty"))
}

pub fn mahler_measure(p: &IntPoly) -> Result<MahlerCertificate> {
    require_monic(p)?;
    if kronecker_test(p)? {
        return Ok(MahlerCertificate {
            value: 1.0,
            error_radius: 0.0,
            is_one_exact: true,
            poly: p.clone(),
        });
    }
    let profile = certified_profile(p)?;
    Ok(certificate_from_profile(&profile))
}

/// Certificate from roots already certified, for a polynomial known not to
/// have measure 1.
pub fn certificate_from_profile(profile: &RootProfile) -> MahlerCertificate {
    let (value, error_radius) = measure_from_profile(profile);
    MahlerCertificate {
        value,
        error_radius,
        is_one_exact: false,
        poly: profile.poly.clone(),
    }
}

fn binomials(d: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=d {
        let next = &row[k - 1] * BigInt::from(d - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// Whether every root of the monic polynomial `p` is zero or a root of unity.
///
/// After factors of `x` are removed, Graeffe steps are iterated. For a
/// measure-one polynomial every iterate again has all roots on the circle, so
/// its `k`-th coefficient is bounded by `binom(d, k)`; the iteration then lives
/// in a finite set and must revisit a vector. A coefficient beyond the bound
/// proves some root lies off the circle.
pub fn kronecker_test(p: &IntPoly) -> Result<bool> {
    require_monic(p)?;
    let q = p.strip_x();
    let d = q.deg();
    if d == 0 {
        return Ok(true);
    }
    if !q.coeff(0).abs().is_one() {
        return Ok(false);
    }
    let bound = binomials(d);
    let mut seen: HashSet<IntPoly> = HashSet::new();
    let mut cur = q;
    loop {
        if cur
            .coeffs()
            .iter()
            .zip(&bound)
            .any(|(c, b)| c.abs() > *b)
        {
            return Ok(false);
        }
        if !seen.insert(cur.clone()) {
            return Ok(true);
        }
        cur = cur.graeffe();
    }
}

fn log_ratio_cubed(d: u64) -> f64 {
    let l = (d as f64).ln();
    (l.ln() / l).powi(3)
}

fn require_degree(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree bound needs d >= 2, got {d}")));
    }
    Ok(())
}

/// `1 + (1/4) (log log d / log d)^3`; below 1 for `d = 2`.
pub fn voutier_bound(d: u64) -> Result<f64> {
    require_degree(d)?;
    Ok(1.0 + 0.25 * log_ratio_cubed(d))
}

/// `1 + (1/1200) (log log d / log d)^3`.
pub fn dobrowolski_bound(d: u64) -> Result<f64> {
    require_degree(d)?;
    Ok(1.0 + log_ratio_cubed(d) / 1200.0)
}

/// `((1 + √5) / 2)^(d/2)`, valid for totally real algebraic integers other
/// than `0` and `±1`; see [`schinzel_applies`].
pub fn schinzel_bound(d: u64) -> Result<f64> {
    require_degree(d)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    Ok(phi.powf(d as f64 / 2.0))
}

/// Whether the totally-real bound is applicable to `p`: all roots real and
/// none of them equal to `0`, `1` or `-1`. By multiplicativity the bound then
/// holds for reducible `p` as well, factor by factor.
pub fn schinzel_applies(p: &IntPoly) -> Result<bool> {
    require_monic(p)?;
    if p.deg() == 0 || count_real_roots(p) != p.deg() {
        return Ok(false);
    }
    let one = BigInt::one();
    Ok(!p.coeff(0).is_zero() && !p.eval_int(&one).is_zero() && !p.eval_int(&-one).is_zero())
}

/// `M(x^3 - x - 1)`, the smallest measure above 1 of a non-palindromic
/// polynomial.
pub fn smyth_threshold() -> f64 {
    smyth_certificate().value
}

pub fn smyth_certificate() -> &'static MahlerCertificate {
    static CELL: OnceLock<MahlerCertificate> = OnceLock::new();
    CELL.get_or_init(|| mahler_measure(&smyth_polynomial()).expect("cubic certifies"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;
    use crate::roots::Location;
    use proptest::prelude::*;

    #[test]
    fn lehmer_measure() {
        let c = mahler_measure(&lehmer_polynomial()).unwrap();
        assert!((c.value - 1.17628).abs() < 1e-4);
        assert!(c.error_radius <= 1e-6);
        assert!(!c.is_one_exact);
    }

    #[test]
    fn cyclotomic_is_exactly_one() {
        let c = mahler_measure(&IntPoly::from_i64s(&[1, -1, 1])).unwrap();
        assert_eq!((c.value, c.error_radius, c.is_one_exact), (1.0, 0.0, true));
    }

    #[test]
    fn smyth_value() {
        // unique real root of x^3 - x - 1 by bisection
        let (mut a, mut b) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let m = (a + b) / 2.0;
            if m * m * m - m - 1.0 > 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        assert!((smyth_threshold() - a).abs() < 1e-12);
        assert!((smyth_threshold() - 1.32472).abs() < 1e-4);
    }

    #[test]
    fn kronecker_examples() {
        let k = |c: &[i64]| kronecker_test(&IntPoly::from_i64s(c)).unwrap();
        assert!(k(&[1, 1, 1]));
        assert!(k(&[1, 0, 1, 0, 1]));
        assert!(!k(&[-1, -1, 1]));
        assert!(k(&[0, 0, 1]));
        assert!(k(&[1]));
        assert!(!k(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]));
        assert!(matches!(
            kronecker_test(&IntPoly::from_i64s(&[1, 2])),
            Err(Error::NotMonic(_))
        ));
    }

    #[test]
    fn bound_values() {
        // log 10 = 2.302585093, log log 10 = 0.834032445
        assert!((voutier_bound(10).unwrap() - 1.011_880_69).abs() < 1e-8);
        // log 3 = 1.098612289, log log 3 = 0.094047828
        assert!((voutier_bound(3).unwrap() - 1.000_156_84).abs() < 1e-8);
        assert!(voutier_bound(2).unwrap() < 1.0);
        assert!((dobrowolski_bound(10).unwrap() - 1.0000396).abs() < 1e-7);
        assert!((schinzel_bound(2).unwrap() - 1.618034).abs() < 1e-6);
        assert!(voutier_bound(1).is_err());
    }

    #[test]
    fn schinzel_hypothesis() {
        assert!(schinzel_applies(&IntPoly::from_i64s(&[-1, -1, 1])).unwrap());
        assert!(!schinzel_applies(&IntPoly::from_i64s(&[1, 0, 1])).unwrap());
        assert!(!schinzel_applies(&IntPoly::from_i64s(&[-1, 1])).unwrap());
    }

    #[test]
    fn product_order_does_not_matter() {
        let mut prof = refine_roots(&lehmer_polynomial(), 1e-12).unwrap();
        let (v1, r1) = measure_from_profile(&prof);
        prof.roots.reverse();
        prof.roots.rotate_left(3);
        let (v2, r2) = measure_from_profile(&prof);
        assert!((v1 - v2).abs() <= r1 + r2);
    }

    fn monic(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
        (1..=max_deg, prop::collection::vec(-h..=h, max_deg)).prop_map(|(d, c)| {
            let mut v = c[..d].to_vec();
            v.push(1);
            IntPoly::from_i64s(&v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn multiplicative(p in monic(6, 2), q in monic(6, 2)) {
            let a = mahler_measure(&p).unwrap();
            let b = mahler_measure(&q).unwrap();
            let c = mahler_measure(&(&p * &q)).unwrap();
            let tol = c.error_radius + a.error_radius * b.upper() + b.error_radius * a.upper() + 1e-12 * c.value;
            prop_assert!((c.value - a.value * b.value).abs() <= tol);
        }

        #[test]
        fn kronecker_matches_root_locations(p in monic(8, 2)) {
            let prof = refine_roots(&p, 1e-9).unwrap();
            let oracle = prof.roots.iter().all(|r| r.location == Location::OnCircle || r.approx.norm() == 0.0);
            prop_assert_eq!(kronecker_test(&p).unwrap(), oracle);
        }

        #[test]
        fn measure_survives_neg_x_squared(p in monic(6, 2)) {
            let a = mahler_measure(&p).unwrap();
            let mut q = p.compose_neg_x_squared();
            if !q.is_monic() {
                q = q.scale(&BigInt::from(-1));
            }
            let b = mahler_measure(&q).unwrap();
            prop_assert!((a.value - b.value).abs() <= a.error_radius + b.error_radius + 1e-12 * a.value);
        }
    }
}
