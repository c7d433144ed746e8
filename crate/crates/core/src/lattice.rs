//! The element `γ = diag(α, α⁻¹, 1, …, 1)` of the unitary group of the
//! hermitian form `h(x, y) = Σ x_k τ(y_k)`, its blocks at the archimedean
//! places, the Dirichlet power `γ^{2c}` and membership of its eigenvalues in
//! the neighbourhoods
//! `U_m = { z : |log|z|| ≤ 1/m, |arg z| ≤ 2π/m }`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{classify_Psr, field_summary, EmbeddingClass, FieldSummary, Membership};
use crate::intpoly::{IntPoly, RingElement};
use crate::mahler::{mahler_measure, MahlerCertificate};

pub const DEFAULT_N: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicGamma {
    pub alpha: RingElement,
    pub alpha_inv: RingElement,
    /// `α · τ(α) = α · α⁻¹ = 1` in `ℤ[α]`, which makes `γ` unitary for `h`
    /// and of determinant 1.
    pub h_unitary: bool,
    /// `α⁻¹` has integer power-basis coordinates.
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceBlock {
    /// Index `i` of the embedding `σ_i`.
    pub index: usize,
    pub class: EmbeddingClass,
    /// Diagonal of `σ_i(γ)`.
    pub diagonal: Vec<Complex64>,
    pub radius: f64,
    pub determinant: Complex64,
}

impl PlaceBlock {
    pub fn is_compact(&self) -> bool {
        self.class == EmbeddingClass::CircleCompact
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaElement {
    pub summary: FieldSummary,
    pub n: usize,
    pub symbolic: SymbolicGamma,
    pub blocks: Vec<PlaceBlock>,
    pub cocompact: bool,
}

impl GammaElement {
    pub fn noncompact_blocks(&self) -> impl Iterator<Item = &PlaceBlock> {
        self.blocks.iter().filter(|b| !b.is_compact())
    }
}

pub fn build_gamma(summary: &FieldSummary, n: usize) -> Result<GammaElement> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("matrix size must be >= 2, got {n}")));
    }
    let alpha = RingElement::alpha(&summary.p)?;
    let alpha_inv = alpha.invert()?;
    let h_unitary = alpha.mul(&alpha_inv).is_one();
    let integral = alpha_inv.is_integral();
    if !h_unitary || !integral {
        return Err(Error::Internal(format!(
            "alpha^-1 is not an integral inverse in Z[alpha] for {}",
            summary.p
        )));
    }
    let mut blocks = Vec::with_capacity(summary.embeddings.len());
    for e in &summary.embeddings {
        let a = e.alpha;
        let mut diagonal = vec![Complex64::new(1.0, 0.0); n];
        diagonal[0] = a;
        diagonal[1] = a.inv();
        let determinant = diagonal.iter().product();
        if e.class == EmbeddingClass::CircleCompact && (a.norm() - 1.0).abs() > e.alpha_radius + 1e-12 {
            return Err(Error::Internal(format!(
                "compact place {} of {} is not unitary",
                e.index, summary.p
            )));
        }
        blocks.push(PlaceBlock {
            index: e.index,
            class: e.class,
            diagonal,
            radius: e.alpha_radius,
            determinant,
        });
    }
    Ok(GammaElement {
        summary: summary.clone(),
        n,
        symbolic: SymbolicGamma {
            alpha,
            alpha_inv,
            h_unitary,
            integral,
        },
        blocks,
        cocompact: summary.cocompact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletWitness {
    pub m: u64,
    pub t: usize,
    pub c: u64,
    pub targets: Vec<f64>,
    /// Signed distance of `c · x_i` to the nearest integer.
    pub residues: Vec<f64>,
}

/// `c · x - round(c · x)` computed exactly for the binary value of `x`.
fn exact_residue(x: &BigRational, c: u64) -> BigRational {
    let y = x * BigRational::from_integer(BigInt::from(c));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    y.clone() - (y + half).floor()
}

/// Smallest `c` in `1..=m^t` with every `c · x_i` within `1/m` of an integer
/// (closed window). The targets are taken as the exact binary values of the
/// floats, for which the pigeonhole argument guarantees a witness.
pub fn dirichlet_c(targets: &[f64], m: u64) -> Result<DirichletWitness> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let t = targets.len();
    let limit = u32::try_from(t)
        .ok()
        .and_then(|e| m.checked_pow(e))
        .ok_or_else(|| Error::InvalidArgument(format!("m^t overflows for m = {m}, t = {t}")))?;
    let exact: Vec<BigRational> = targets
        .iter()
        .map(|&x| {
            BigRational::from_float(x)
                .ok_or_else(|| Error::InvalidArgument(format!("target {x} is not finite")))
        })
        .collect::<Result<_>>()?;
    let window = BigRational::new(BigInt::one(), BigInt::from(m));
    for c in 1..=limit.max(1) {
        let res: Vec<BigRational> = exact.iter().map(|x| exact_residue(x, c)).collect();
        if res.iter().all(|r| r.abs() <= window) {
            return Ok(DirichletWitness {
                m,
                t,
                c,
                targets: targets.to_vec(),
                residues: res.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
            });
        }
    }
    Err(Error::Internal(format!(
        "no Dirichlet multiple up to {limit} for targets {targets:?} and m = {m}"
    )))
}

/// `1 / (2 m^{t+1})`.
pub fn eta(m: u64, t: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let den = BigInt::from(2) * num_traits::pow(BigInt::from(m), t + 1);
    Ok(BigRational::new(BigInt::one(), den))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenFlags {
    pub value: Complex64,
    pub log_modulus: f64,
    pub argument: f64,
    pub log_modulus_in_window: bool,
    pub argument_in_window: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacePower {
    pub index: usize,
    pub class: EmbeddingClass,
    pub eigenvalues: Vec<EigenFlags>,
    /// `|σ_i(α)^{2c}|`.
    pub power_modulus: f64,
    /// `|σ_i(α)|^{2 m^t}`.
    pub modulus_bound: f64,
    /// `σ_i(α^{2c})` evaluated from the exact element of `ℤ[α]` agrees with
    /// the numeric power.
    pub symbolic_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaPowerReport {
    pub poly: IntPoly,
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub t: usize,
    pub m: u64,
    pub witness: DirichletWitness,
    pub eta: String,
    pub eta_value: f64,
    pub power: u64,
    pub mahler: MahlerCertificate,
    /// `M(p) < exp(η)`, certified from the upper end of the measure.
    pub mahler_hypothesis_met: bool,
    /// `M(p) / exp(η)`.
    pub hypothesis_gap: f64,
    pub places: Vec<PlacePower>,
    /// Every noncompact eigenvalue of the power lies in `U_m`.
    pub all_in_u_m: bool,
    /// Every noncompact eigenvalue argument lies in `[-2π/m, 2π/m]`.
    pub arguments_in_window: bool,
    /// `1 < |σ_i(α)^{2c}| ≤ |σ_i(α)|^{2m^t} < exp(1/m)` at every noncompact
    /// place; only meaningful under the hypothesis.
    pub chain_holds: bool,
    /// Largest `|entry - identity entry|` over the noncompact blocks of the power.
    pub distance_to_identity: f64,
    pub infinite_order: bool,
    pub cocompact: bool,
    pub alpha_power: RingElement,
    pub note: String,
}

const LIMITATION: &str = "convergence of the powered elements to the identity needs a sequence of \
polynomials with measures tending to 1 at fixed (s, r); only the unconditional argument window and, \
under the stated hypothesis, the modulus chain are verified here";

fn principal_arg(z: Complex64) -> f64 {
    z.im.atan2(z.re)
}

pub fn gamma_power_report(element: &GammaElement, m: u64) -> Result<GammaPowerReport> {
    let sm = &element.summary;
    let t = sm.t;
    let r = sm.r;
    let targets: Vec<f64> = sm.embeddings[r..r + t]
        .iter()
        .map(|e| (2.0 * principal_arg(e.alpha) / (2.0 * PI)).rem_euclid(1.0))
        .collect();
    let witness = dirichlet_c(&targets, m)?;
    let c = witness.c;
    let power = 2 * c;
    let eta_q = eta(m, t)?;
    let eta_value = eta_q.to_f64().unwrap_or(0.0);
    let mahler = mahler_measure(&sm.p)?;
    let bound = eta_value.exp();
    let mahler_hypothesis_met = mahler.upper() < bound * (1.0 - 4.0 * f64::EPSILON);
    let hypothesis_gap = mahler.value / bound;
    let mt = (m as f64).powi(t as i32);
    let inv_m = 1.0 / m as f64;
    let alpha_power = element.symbolic.alpha.pow(power);

    let mut places = Vec::new();
    let mut distance: f64 = 0.0;
    let mut all_in = true;
    let mut args_in = true;
    let mut chain = true;
    for (b, e) in element.blocks.iter().zip(sm.embeddings.iter()).take(r + t) {
        let a = e.alpha;
        let rel = e.alpha_radius / a.norm();
        let tol_log = power as f64 * rel * 2.0 + 1e-12;
        let tol_arg = power as f64 * rel * 2.0 + 1e-12;
        let eigenvalues: Vec<EigenFlags> = b
            .diagonal
            .iter()
            .map(|&z| {
                let value = z.powu(power as u32);
                let log_modulus = power as f64 * z.norm().ln();
                let argument = principal_arg(value);
                EigenFlags {
                    value,
                    log_modulus,
                    argument,
                    log_modulus_in_window: log_modulus.abs() <= inv_m,
                    argument_in_window: argument.abs() <= 2.0 * PI * inv_m + tol_arg,
                }
            })
            .collect();
        for f in &eigenvalues {
            distance = distance.max((f.value - Complex64::new(1.0, 0.0)).norm());
            all_in &= f.log_modulus_in_window && f.argument_in_window;
            args_in &= f.argument_in_window;
        }
        let power_modulus = a.norm().powf(power as f64);
        let modulus_bound = a.norm().powf(2.0 * mt);
        let slack = 1.0 + tol_log;
        chain &= power_modulus > 1.0 / slack
            && power_modulus <= modulus_bound * slack
            && modulus_bound < inv_m.exp() * slack;
        let sym = alpha_power.eval_complex(a);
        let symbolic_consistent = (sym - eigenvalues[0].value).norm()
            <= 1e-6 * eigenvalues[0].value.norm().max(1.0);
        places.push(PlacePower {
            index: b.index,
            class: b.class,
            eigenvalues,
            power_modulus,
            modulus_bound,
            symbolic_consistent,
        });
    }
    if mahler_hypothesis_met && !chain {
        return Err(Error::Internal(format!(
            "modulus chain fails for {} at m = {m} although M < exp(eta)",
            sm.p
        )));
    }
    if mahler_hypothesis_met && !all_in {
        return Err(Error::Internal(format!(
            "powered eigenvalues of {} leave U_{m} although M < exp(eta)",
            sm.p
        )));
    }
    let infinite_order = places
        .iter()
        .any(|p| p.eigenvalues.iter().any(|f| f.log_modulus.abs() > 0.0 && f.value.norm() > 1.0));
    Ok(GammaPowerReport {
        poly: sm.p.clone(),
        n: element.n,
        s: sm.s,
        r,
        t,
        m,
        witness,
        eta: eta_q.to_string(),
        eta_value,
        power,
        mahler,
        mahler_hypothesis_met,
        hypothesis_gap,
        places,
        all_in_u_m: all_in,
        arguments_in_window: args_in,
        chain_holds: chain,
        distance_to_identity: distance,
        infinite_order,
        cocompact: element.cocompact,
        alpha_power,
        note: LIMITATION.to_string(),
    })
}

/// Report for `p` at level `m` with `n × n` matrices.
pub fn construct(p: &IntPoly, m: u64, n: usize) -> Result<GammaPowerReport> {
    let summary = field_summary(p)?;
    let element = build_gamma(&summary, n)?;
    gamma_power_report(&element, m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub poly: IntPoly,
    pub m: u64,
    pub eta: String,
    pub mahler: f64,
    pub mahler_radius: f64,
    pub threshold: f64,
    pub hypothesis_met: bool,
    /// `M(p) / exp(η)`; above 1 when the hypothesis fails.
    pub gap: f64,
    pub report: Option<GammaPowerReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub class: Option<(usize, usize)>,
    pub n: usize,
    pub entries: Vec<ScanEntry>,
    pub note: String,
}

/// Check `1 < M(P) < exp(η_{m,t})` for every polynomial and every level `m`,
/// producing the full power report whenever it holds. All polynomials must
/// lie in one class `P(s, r)` and have a root on the unit circle.
pub fn counterexample_scan(polys: &[IntPoly], n: usize, ms: &[u64]) -> Result<ScanReport> {
    let mut class: Option<(usize, usize)> = None;
    let mut summaries = Vec::with_capacity(polys.len());
    for p in polys {
        match classify_Psr(p) {
            Membership::Member { s, r, satisfies_l, .. } => {
                if !satisfies_l {
                    return Err(Error::NotMember {
                        poly: p.clone(),
                        reason: "no root on the unit circle".into(),
                    });
                }
                if let Some((s0, r0)) = class {
                    if (s0, r0) != (s, r) {
                        return Err(Error::MixedClasses(s0, r0, s, r));
                    }
                }
                class = Some((s, r));
            }
            Membership::NotMember { reason } => {
                return Err(Error::NotMember {
                    poly: p.clone(),
                    reason,
                })
            }
        }
        summaries.push(field_summary(p)?);
    }
    let mut entries = Vec::new();
    for summary in &summaries {
        let element = build_gamma(summary, n)?;
        let cert = mahler_measure(&summary.p)?;
        for &m in ms {
            let eta_q = eta(m, summary.t)?;
            let threshold = eta_q.to_f64().unwrap_or(0.0).exp();
            let hypothesis_met = cert.value > 1.0 && cert.upper() < threshold;
            let report = if hypothesis_met {
                Some(gamma_power_report(&element, m)?)
            } else {
                None
            };
            entries.push(ScanEntry {
                poly: summary.p.clone(),
                m,
                eta: eta_q.to_string(),
                mahler: cert.value,
                mahler_radius: cert.error_radius,
                threshold,
                hypothesis_met,
                gap: cert.value / threshold,
                report,
            });
        }
    }
    Ok(ScanReport {
        class,
        n,
        entries,
        note: LIMITATION.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;
    use proptest::prelude::*;

    fn lehmer_element(n: usize) -> GammaElement {
        build_gamma(&field_summary(&lehmer_polynomial()).unwrap(), n).unwrap()
    }

    #[test]
    fn lehmer_blocks() {
        let g = lehmer_element(2);
        assert_eq!(g.blocks.len(), 5);
        assert_eq!(g.noncompact_blocks().count(), 1);
        let b = &g.blocks[0];
        assert!((b.diagonal[0].re - 1.176_280_818).abs() < 1e-8);
        assert!((b.diagonal[1].re - 0.850_137_7).abs() < 1e-6);
        for blk in &g.blocks {
            assert!((blk.determinant - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
        assert!(g.cocompact);
        let g3 = lehmer_element(3);
        assert!(g3.blocks.iter().all(|b| b.diagonal[2] == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn quadratic_has_no_compact_place() {
        let s = field_summary(&IntPoly::from_i64s(&[1, -3, 1])).unwrap();
        let g = build_gamma(&s, 2).unwrap();
        assert_eq!(g.blocks.len(), 1);
        assert!(!g.cocompact);
        assert!((g.blocks[0].diagonal[0].re - 2.618_033_988_7).abs() < 1e-9);
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_c(&[1.0 / 3.0], 4).unwrap().c, 3);
        assert_eq!(dirichlet_c(&[], 7).unwrap().c, 1);
        assert_eq!(dirichlet_c(&[0.5, 0.25], 2).unwrap().c, 1);
    }

    #[test]
    fn eta_values() {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(eta(1, 0).unwrap(), q(1, 2));
        assert_eq!(eta(2, 1).unwrap(), q(1, 8));
        assert_eq!(eta(3, 2).unwrap(), q(1, 54));
    }

    #[test]
    fn lehmer_power_reports() {
        let g = lehmer_element(2);
        let r3 = gamma_power_report(&g, 3).unwrap();
        assert_eq!(r3.witness.c, 1);
        assert_eq!(r3.power, 2);
        // 2 log 1.17628 = 0.32474 < 1/3
        assert!(r3.places[0].eigenvalues[0].log_modulus_in_window);
        assert!(r3.arguments_in_window);
        assert!(r3.infinite_order);
        let r1 = gamma_power_report(&g, 1).unwrap();
        assert!(r1.mahler_hypothesis_met);
        assert!(r1.chain_holds && r1.all_in_u_m);
        let r10 = gamma_power_report(&g, 10).unwrap();
        assert!(!r10.mahler_hypothesis_met);
        assert!((r10.hypothesis_gap - 1.17628 / (0.05f64).exp()).abs() < 1e-4);
        assert!(r10.places.iter().all(|p| p.symbolic_consistent));
    }

    #[test]
    fn scan_examples() {
        let l = lehmer_polynomial();
        let rep = counterexample_scan(&[l.clone()], 2, &[1, 10]).unwrap();
        assert!(rep.entries[0].hypothesis_met && rep.entries[0].report.is_some());
        assert!(!rep.entries[1].hypothesis_met && rep.entries[1].report.is_none());
        assert!(counterexample_scan(&[], 2, &[1]).unwrap().entries.is_empty());
        let mixed = counterexample_scan(&[l, IntPoly::from_i64s(&[1, 1, 3, 1, 1])], 2, &[1]);
        assert!(matches!(mixed, Err(Error::MixedClasses(..)) | Err(Error::NotMember { .. })));
    }

    fn distance_to_integer(x: f64, c: u64) -> BigRational {
        let y = BigRational::from_float(x).unwrap() * BigRational::from_integer(BigInt::from(c));
        let below = y.clone() - y.floor();
        let above = y.ceil() - y;
        below.min(above)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn dirichlet_witness_is_valid_and_minimal(
            targets in prop::collection::vec(0.0f64..1.0, 0..=3),
            m in 1u64..=6,
        ) {
            let w = dirichlet_c(&targets, m).unwrap();
            prop_assert!(w.c >= 1 && w.c <= m.pow(targets.len() as u32).max(1));
            prop_assert!(w.residues.iter().all(|r| r.abs() <= 1.0 / m as f64));
            let window = BigRational::new(BigInt::one(), BigInt::from(m));
            prop_assert!(targets.iter().all(|&x| distance_to_integer(x, w.c) <= window));
            for c in 1..w.c {
                prop_assert!(targets.iter().any(|&x| distance_to_integer(x, c) > window));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn argument_window_for_complex_places(m in 1u64..=8) {
            // s = 2, r = 0, t = 1
            let p = IntPoly::from_i64s(&[1, 1, 3, 1, 1]);
            let rep = construct(&p, m, 2).unwrap();
            prop_assert_eq!(rep.t, 1);
            prop_assert!(rep.arguments_in_window);
            prop_assert!(rep.infinite_order);
            if rep.mahler_hypothesis_met {
                prop_assert!(rep.all_in_u_m);
            }
        }
    }
}
