//! Irreducibility over ℚ for monic integer polynomials.
//!
//! Cheap tests run first (square-freeness, rational roots, cyclotomic
//! divisors, factor-degree patterns modulo small primes). What survives is
//! settled by trying every conjugation-closed subset of certified roots as a
//! candidate factor, with the candidate verified by exact division.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::modp::{small_primes, subset_sums, FpPoly};
use super::{cyclotomic, totient, IntPoly};
use crate::error::{Error, Result};
use crate::roots::numeric::{certify_squarefree, Disk};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityConfig {
    /// Largest degree for the root-subset search.
    pub exhaustive_degree_cap: usize,
    /// Number of good primes used for factor-degree patterns.
    pub prime_count: usize,
    /// Maximum number of search nodes in the root-subset search.
    pub subset_budget: u64,
}

impl Default for IrreducibilityConfig {
    fn default() -> Self {
        IrreducibilityConfig {
            exhaustive_degree_cap: 24,
            prime_count: 10,
            subset_budget: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Degree,
    SquarefreeGcd,
    RationalRoot,
    Cyclotomic,
    PrimeDegreePatterns,
    RootSubsets,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible { method: Method },
    Reducible { factor: IntPoly, method: Method },
    Unknown { reason: String },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, Irreducibility::Reducible { .. })
    }

    /// `Some(true)` when irreducible, `Some(false)` when reducible.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Irreducibility::Irreducible { .. } => Some(true),
            Irreducibility::Reducible { .. } => Some(false),
            Irreducibility::Unknown { .. } => None,
        }
    }
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn rational_root(p: &IntPoly) -> Option<IntPoly> {
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Some(IntPoly::x());
    }
    let n = a0.abs().to_u64().filter(|&n| n <= DIVISOR_LIMIT)?;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            for c in [d, n / d] {
                for s in [1i64, -1] {
                    let r = BigInt::from(c) * s;
                    if p.eval_int(&r).is_zero() {
                        return Some(IntPoly::new(vec![-r, BigInt::one()]));
                    }
                }
            }
        }
        d += 1;
    }
    None
}

fn cyclotomic_divisor(p: &IntPoly) -> Option<(IntPoly, bool)> {
    let d = p.deg();
    // totient(n) >= sqrt(n / 2), so n <= 2 d^2 covers every Φ_n of degree <= d.
    for n in 1..=(2 * d * d).max(2) {
        if totient(n) > d {
            continue;
        }
        let phi = cyclotomic(n);
        if phi == *p {
            return Some((phi, true));
        }
        if p.div_exact(&phi).is_some() {
            return Some((phi, false));
        }
    }
    None
}

/// Degrees `k` in `1..=d/2` still possible for a factor after intersecting
/// the subset sums of factor-degree patterns modulo good primes.
fn possible_factor_degrees(p: &IntPoly, prime_count: usize) -> Vec<usize> {
    let d = p.deg();
    let mut allowed = vec![true; d + 1];
    let mut used = 0;
    for q in small_primes(prime_count * 4 + 8) {
        if used == prime_count {
            break;
        }
        let f = FpPoly::from_int(p, q);
        if f.degree() != Some(d) || !f.is_squarefree() {
            continue;
        }
        used += 1;
        let sums = subset_sums(&f.factor_degrees());
        for (a, s) in allowed.iter_mut().zip(&sums) {
            *a &= *s;
        }
    }
    (1..=d / 2).filter(|&k| allowed[k]).collect()
}

/// A unit is a real root or a conjugate pair; it contributes a monic factor
/// of degree 1 or 2 with disk coefficients.
struct Unit {
    coeffs: Vec<Disk>,
}

fn disk(c: Complex64, r: f64) -> Disk {
    Disk { center: c, radius: r }
}

fn dmul(a: Disk, b: Disk) -> Disk {
    let c = a.center * b.center;
    let r = a.center.norm() * b.radius + b.center.norm() * a.radius + a.radius * b.radius;
    disk(c, (r + c.norm() * 4.0 * f64::EPSILON) * (1.0 + 4.0 * f64::EPSILON))
}

fn dadd(a: Disk, b: Disk) -> Disk {
    let c = a.center + b.center;
    disk(c, (a.radius + b.radius + c.norm() * 2.0 * f64::EPSILON) * (1.0 + 2.0 * f64::EPSILON))
}

fn pmul(a: &[Disk], b: &[Disk]) -> Vec<Disk> {
    let zero = disk(Complex64::new(0.0, 0.0), 0.0);
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = dadd(out[i + j], dmul(x, y));
        }
    }
    out
}

fn units_from_disks(disks: &[Disk]) -> Vec<Unit> {
    let one = disk(Complex64::new(1.0, 0.0), 0.0);
    let mut units = Vec::new();
    let mut i = 0;
    while i < disks.len() {
        let z = disks[i];
        if z.center.im == 0.0 {
            units.push(Unit {
                coeffs: vec![disk(-z.center, z.radius), one],
            });
            i += 1;
        } else {
            let w = disks[i + 1];
            units.push(Unit {
                coeffs: pmul(&[disk(-z.center, z.radius), one], &[disk(-w.center, w.radius), one]),
            });
            i += 2;
        }
    }
    units
}

enum Candidate {
    Integer(IntPoly),
    NotInteger,
    Ambiguous,
}

fn round_candidate(c: &[Disk]) -> Candidate {
    let mut out = Vec::with_capacity(c.len());
    for d in c {
        if d.radius >= 0.5 {
            return Candidate::Ambiguous;
        }
        let n = d.center.re.round();
        if (d.center - Complex64::new(n, 0.0)).norm() > d.radius {
            return Candidate::NotInteger;
        }
        match num_traits::FromPrimitive::from_f64(n) {
            Some(b) => out.push(b),
            None => return Candidate::Ambiguous,
        }
    }
    Candidate::Integer(IntPoly::new(out))
}

struct SubsetSearch<'a> {
    p: &'a IntPoly,
    units: Vec<Unit>,
    targets: Vec<bool>,
    budget: u64,
    nodes: u64,
    ambiguous: bool,
}

impl SubsetSearch<'_> {
    fn dfs(&mut self, start: usize, deg: usize, acc: &[Disk]) -> Option<IntPoly> {
        if deg > 0 && self.targets[deg] {
            match round_candidate(acc) {
                Candidate::Integer(g) => {
                    if self.p.div_exact(&g).is_some() {
                        return Some(g);
                    }
                }
                Candidate::Ambiguous => self.ambiguous = true,
                Candidate::NotInteger => {}
            }
        }
        let max = self.targets.len() - 1;
        for u in start..self.units.len() {
            let ud = self.units[u].coeffs.len() - 1;
            if deg + ud > max {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let next = pmul(acc, &self.units[u].coeffs);
            if let Some(g) = self.dfs(u + 1, deg + ud, &next) {
                return Some(g);
            }
        }
        None
    }
}

/// Decide irreducibility over ℚ of a monic integer polynomial.
pub fn irreducibility_report(p: &IntPoly, config: &IrreducibilityConfig) -> Result<Irreducibility> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.clone()));
    }
    let d = p.deg();
    if d == 0 {
        return Err(Error::InvalidArgument(
            "constant polynomials are units, not irreducibles".into(),
        ));
    }
    if d == 1 {
        return Ok(Irreducibility::Irreducible {
            method: Method::Degree,
        });
    }
    let g = p.gcd(&p.derivative());
    if g.deg() > 0 {
        return Ok(Irreducibility::Reducible {
            factor: g,
            method: Method::SquarefreeGcd,
        });
    }
    if let Some(f) = rational_root(p) {
        return Ok(Irreducibility::Reducible {
            factor: f,
            method: Method::RationalRoot,
        });
    }
    if d <= 3 && p.coeff(0).abs().to_u64().is_some_and(|n| n <= DIVISOR_LIMIT) {
        return Ok(Irreducibility::Irreducible {
            method: Method::RationalRoot,
        });
    }
    if let Some((phi, whole)) = cyclotomic_divisor(p) {
        return Ok(if whole {
            Irreducibility::Irreducible {
                method: Method::Cyclotomic,
            }
        } else {
            Irreducibility::Reducible {
                factor: phi,
                method: Method::Cyclotomic,
            }
        });
    }
    let degrees = possible_factor_degrees(p, config.prime_count);
    if degrees.is_empty() {
        return Ok(Irreducibility::Irreducible {
            method: Method::PrimeDegreePatterns,
        });
    }
    if d > config.exhaustive_degree_cap {
        return Ok(Irreducibility::Unknown {
            reason: format!(
                "degree {d} exceeds the root-subset cap {}",
                config.exhaustive_degree_cap
            ),
        });
    }
    let disks = match certify_squarefree(p, 1e-6) {
        Ok(d) => d,
        Err(_) => {
            return Ok(Irreducibility::Unknown {
                reason: "roots could not be isolated".into(),
            })
        }
    };
    let mut targets = vec![false; d / 2 + 1];
    for k in degrees {
        targets[k] = true;
    }
    let mut search = SubsetSearch {
        p,
        units: units_from_disks(&disks),
        targets,
        budget: config.subset_budget,
        nodes: 0,
        ambiguous: false,
    };
    let one = [disk(Complex64::new(1.0, 0.0), 0.0)];
    if let Some(f) = search.dfs(0, 0, &one) {
        return Ok(Irreducibility::Reducible {
            factor: f,
            method: Method::RootSubsets,
        });
    }
    if search.nodes > search.budget {
        return Ok(Irreducibility::Unknown {
            reason: format!("root-subset budget of {} nodes exhausted", search.budget),
        });
    }
    if search.ambiguous {
        return Ok(Irreducibility::Unknown {
            reason: "candidate factor coefficients not resolved to integers".into(),
        });
    }
    Ok(Irreducibility::Irreducible {
        method: Method::RootSubsets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;
    use proptest::prelude::*;

    fn report(c: &[i64]) -> Irreducibility {
        irreducibility_report(&IntPoly::from_i64s(c), &IrreducibilityConfig::default()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert!(report(&[1, 1, 1]).is_irreducible());
        assert!(report(&[-2, 0, 1]).is_irreducible());
        assert_eq!(
            report(&[1, 0, 1, 0, 1]),
            Irreducibility::Reducible {
                factor: IntPoly::from_i64s(&[1, 1, 1]),
                method: Method::Cyclotomic
            }
        );
        assert!(report(&[1, -1, -1, -1, 1]).is_irreducible());
        assert!(report(&[0, 1, 1]).is_reducible());
        assert!(report(&[1, 2, 1]).is_reducible());
    }

    #[test]
    fn lehmer_is_irreducible() {
        let r = irreducibility_report(&lehmer_polynomial(), &IrreducibilityConfig::default()).unwrap();
        assert!(r.is_irreducible());
    }

    #[test]
    fn product_of_quartics_is_found() {
        // (x^4 - x^3 - x^2 - x + 1)(x^4 + x + 1): no rational roots or cyclotomic part
        let a = IntPoly::from_i64s(&[1, -1, -1, -1, 1]);
        let b = IntPoly::from_i64s(&[1, 1, 0, 0, 1]);
        let p = &a * &b;
        match irreducibility_report(&p, &IrreducibilityConfig::default()).unwrap() {
            Irreducibility::Reducible { factor, .. } => {
                assert!(factor == a || factor == b);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_monic_rejected() {
        let e = irreducibility_report(&IntPoly::from_i64s(&[1, 2]), &IrreducibilityConfig::default());
        assert!(matches!(e, Err(Error::NotMonic(_))));
    }

    #[test]
    fn cap_gives_unknown() {
        let cfg = IrreducibilityConfig {
            exhaustive_degree_cap: 4,
            prime_count: 0,
            subset_budget: 10,
        };
        let r = irreducibility_report(&lehmer_polynomial(), &cfg).unwrap();
        assert!(matches!(r, Irreducibility::Unknown { .. }));
    }

    fn monic(max_deg: usize) -> impl Strategy<Value = IntPoly> {
        (1..=max_deg, prop::collection::vec(-3i64..=3, max_deg)).prop_map(|(d, c)| {
            let mut v = c[..d].to_vec();
            v.push(1);
            IntPoly::from_i64s(&v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn products_are_reducible(a in monic(4), b in monic(4)) {
            let p = &a * &b;
            let r = irreducibility_report(&p, &IrreducibilityConfig::default()).unwrap();
            prop_assert!(r.is_reducible(), "{} gave {:?}", p, r);
            if let Irreducibility::Reducible { factor, .. } = r {
                prop_assert!(factor.deg() > 0 && factor.deg() < p.deg());
                prop_assert!(p.div_exact(&factor).is_some());
            }
        }
    }
}
