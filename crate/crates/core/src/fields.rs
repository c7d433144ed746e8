//! The fields `L = ℚ(α)` and `K = ℚ(α + α⁻¹)` attached to a palindromic
//! polynomial, membership in the classes `P(s, r)`, embeddings and
//! signatures.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::{
    irreducibility_report, Irreducibility, IrreducibilityConfig, IntPoly, RingElement,
};
use crate::linalg::charpoly;
use crate::mahler::certified_profile;
use crate::roots::{count_real_roots, exact_counts, CertifiedRoot, Location, Realness, RootProfile};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    Member {
        s: usize,
        r: usize,
        /// Some root lies on the unit circle.
        satisfies_l: bool,
        on_circle: usize,
    },
    NotMember {
        reason: String,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn class(&self) -> Option<(usize, usize)> {
        match self {
            Membership::Member { s, r, .. } => Some((*s, *r)),
            Membership::NotMember { .. } => None,
        }
    }
}

fn not_member(reason: &str) -> Membership {
    Membership::NotMember {
        reason: reason.to_string(),
    }
}

/// Membership in `P(s, r)`: monic, irreducible, palindromic, with exact
/// counts `s` of roots outside the unit circle and `r` of real ones.
#[allow(non_snake_case)]
pub fn classify_Psr(p: &IntPoly) -> Membership {
    classify_with(p, &IrreducibilityConfig::default())
}

pub fn classify_with(p: &IntPoly, config: &IrreducibilityConfig) -> Membership {
    if p.is_zero() {
        return not_member("zero polynomial");
    }
    if !p.is_monic() {
        return not_member("not monic");
    }
    if p.deg() == 0 {
        return not_member("constant");
    }
    if !p.is_palindromic().unwrap_or(false) {
        return not_member("not palindromic");
    }
    match irreducibility_report(p, config) {
        Ok(Irreducibility::Irreducible { .. }) => {}
        Ok(Irreducibility::Reducible { factor, .. }) => {
            return Membership::NotMember {
                reason: format!("reducible, divisible by {factor}"),
            }
        }
        Ok(Irreducibility::Unknown { reason }) => {
            return Membership::NotMember {
                reason: format!("irreducibility undecided: {reason}"),
            }
        }
        Err(e) => return Membership::NotMember { reason: e.to_string() },
    }
    let c = match exact_counts(p) {
        Ok(c) => c,
        Err(e) => return Membership::NotMember { reason: e.to_string() },
    };
    Membership::Member {
        s: c.outside,
        r: c.real_outside,
        satisfies_l: c.on_circle >= 1,
        on_circle: c.on_circle,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingClass {
    /// `σ_i(α)` real with `|σ_i(α)| > 1`; `σ_i` is real on `K`.
    RealSplit,
    /// `σ_i(α)` non-real off the circle; `σ_i` is complex on `K`.
    ComplexSplit,
    /// `|σ_i(α)| = 1`; `σ_i` is real on `K` and the unitary group is compact.
    CircleCompact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    /// 1-based index `i` of `σ_i`.
    pub index: usize,
    pub alpha: Complex64,
    pub alpha_radius: f64,
    /// `σ_i(α + α⁻¹)`, taken from the certified roots of the trace polynomial.
    pub beta: Complex64,
    pub beta_radius: f64,
    pub class: EmbeddingClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub p: IntPoly,
    pub trace_poly: IntPoly,
    pub d: usize,
    pub s: usize,
    pub r: usize,
    pub t: usize,
    pub embeddings: Vec<Embedding>,
    /// `(r - s + d, (s - r) / 2)`.
    pub signature_k: (usize, usize),
    /// Real roots of the trace polynomial by Sturm count, and the number of
    /// complex-conjugate pairs left over.
    pub signature_counted: (usize, usize),
    /// `p(y) = y^d · Q(y + 1/y)` re-expanded exactly.
    pub trace_identity: bool,
    pub irreducibility_p: Irreducibility,
    pub irreducibility_trace: Irreducibility,
    /// `s < d`: some root on the circle, so the lattice is cocompact.
    pub cocompact: bool,
    pub squarefree: bool,
    pub profile: RootProfile,
}

impl FieldSummary {
    pub fn embeddings_of(&self, class: EmbeddingClass) -> impl Iterator<Item = &Embedding> {
        self.embeddings.iter().filter(move |e| e.class == class)
    }
}

/// `y^d · Q(y + 1/y)` as an integer polynomial, using
/// `y^d (y + 1/y)^k = y^(d-k) (y² + 1)^k`.
pub fn reexpand_trace(q: &IntPoly, d: usize) -> IntPoly {
    let y2p1 = IntPoly::from_i64s(&[1, 0, 1]);
    let mut acc = IntPoly::zero();
    let mut pow = IntPoly::one();
    for k in 0..=q.deg().min(d) {
        let term = pow.shift(d - k).scale(&q.coeff(k));
        acc = &acc + &term;
        pow = &pow * &y2p1;
    }
    acc
}

fn beta_radius(root: &CertifiedRoot) -> f64 {
    let m = root.modulus();
    let inner = (m - root.radius).max(f64::MIN_POSITIVE);
    root.radius * (1.0 + 1.0 / (m * inner)) * (1.0 + 4.0 * f64::EPSILON)
}

/// Field data for a member of some `P(s, r)` of even degree `2d`.
pub fn field_summary(p: &IntPoly) -> Result<FieldSummary> {
    let (s, r) = match classify_Psr(p) {
        Membership::Member { s, r, .. } => (s, r),
        Membership::NotMember { reason } => {
            return Err(Error::NotMember {
                poly: p.clone(),
                reason,
            })
        }
    };
    if p.deg() % 2 == 1 || p.deg() < 2 {
        return Err(Error::OddDegree(p.clone()));
    }
    let d = p.deg() / 2;
    if (s - r) % 2 != 0 {
        return Err(Error::Internal(format!("s - r = {} is odd for {p}", s - r)));
    }
    let t = (s - r) / 2;
    let trace_poly = p.trace_polynomial()?;
    let trace_identity = reexpand_trace(&trace_poly, d) == *p;
    if !trace_identity {
        return Err(Error::Internal(format!("trace identity fails for {p}")));
    }

    let profile = certified_profile(p)?;
    let outside: Vec<&CertifiedRoot> = profile.outside_roots().collect();
    let circle_upper: Vec<&CertifiedRoot> = profile
        .roots
        .iter()
        .filter(|x| x.location == Location::OnCircle && x.realness == Realness::NonRealUpper)
        .collect();
    if outside.len() != s || circle_upper.len() != d - s {
        return Err(Error::Internal(format!(
            "root layout of {p} disagrees with exact counts"
        )));
    }
    let trace_profile = certified_profile(&trace_poly)?;
    let mut embeddings = Vec::with_capacity(d);
    for (k, root) in outside.iter().chain(circle_upper.iter()).enumerate() {
        let i = k + 1;
        let class = if i <= r {
            EmbeddingClass::RealSplit
        } else if i <= s {
            EmbeddingClass::ComplexSplit
        } else {
            EmbeddingClass::CircleCompact
        };
        let w = root.approx + root.approx.inv();
        let wr = beta_radius(root);
        let matches: Vec<&CertifiedRoot> = trace_profile
            .roots
            .iter()
            .filter(|b| (b.approx - w).norm() <= b.radius + wr + 1e-9 * (1.0 + w.norm()))
            .collect();
        let beta = match matches.as_slice() {
            [b] => *b,
            _ => {
                return Err(Error::Internal(format!(
                    "cannot pair embedding {i} of {p} with a unique trace root"
                )))
            }
        };
        embeddings.push(Embedding {
            index: i,
            alpha: root.approx,
            alpha_radius: root.radius,
            beta: beta.approx,
            beta_radius: beta.radius,
            class,
        });
    }

    let real_trace = count_real_roots(&trace_poly);
    let signature_counted = (real_trace, (d - real_trace) / 2);
    let signature_k = (r + d - s, t);
    if signature_counted != signature_k || real_trace + 2 * signature_counted.1 != d {
        return Err(Error::Internal(format!(
            "signature of K for {p}: counted {signature_counted:?}, expected {signature_k:?}"
        )));
    }
    let real_betas = embeddings
        .iter()
        .filter(|e| e.class != EmbeddingClass::ComplexSplit)
        .count();
    if real_betas != real_trace {
        return Err(Error::Internal(format!(
            "embedding classes of {p} disagree with the real trace roots"
        )));
    }

    let config = IrreducibilityConfig::default();
    let irreducibility_p = irreducibility_report(p, &config)?;
    let irreducibility_trace = irreducibility_report(&trace_poly, &config)?;
    if irreducibility_p.decided().is_some()
        && irreducibility_trace.decided().is_some()
        && irreducibility_p.decided() != irreducibility_trace.decided()
    {
        return Err(Error::Internal(format!(
            "{p} and its trace polynomial disagree on irreducibility"
        )));
    }
    Ok(FieldSummary {
        p: p.clone(),
        trace_poly,
        d,
        s,
        r,
        t,
        embeddings,
        signature_k,
        signature_counted,
        trace_identity,
        irreducibility_p,
        irreducibility_trace,
        cocompact: s < d,
        squarefree: profile.squarefree,
        profile,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceBlock {
    /// `α + α⁻¹` in the power basis of `ℤ[α]`.
    pub trace_generator: RingElement,
    /// `[[0, -1], [1, w]]` with `w` the trace generator: multiplication by
    /// `α` on `L` over `K` in the basis `{1, α}`.
    pub display: [[String; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicationMatrix {
    /// Row-major companion matrix: column `j` holds the coordinates of
    /// `α · α^j`.
    #[serde(with = "crate::bigserde::matrix")]
    pub companion: Vec<Vec<BigInt>>,
    #[serde(with = "crate::bigserde::scalar")]
    pub determinant: BigInt,
    pub trace_block: Option<TraceBlock>,
}

pub fn companion_matrix(p: &IntPoly) -> Result<Vec<Vec<BigInt>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.clone()));
    }
    let n = p.deg();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (j, row) in m.iter_mut().enumerate().skip(1) {
        row[j - 1] = BigInt::one();
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n - 1] = -p.coeff(i);
    }
    Ok(m)
}

/// Multiplication by `α` on `ℚ[x]/(p)`, with the 2×2 form over the trace
/// field when `p` is palindromic of even degree.
pub fn multiplication_matrix(p: &IntPoly) -> Result<MultiplicationMatrix> {
    let companion = companion_matrix(p)?;
    let cp = charpoly(&companion);
    let determinant = if p.deg() % 2 == 0 {
        cp[0].clone()
    } else {
        -cp[0].clone()
    };
    let trace_block = if p.deg() % 2 == 0 && p.is_palindromic()? {
        let alpha = RingElement::alpha(p)?;
        let w = alpha.add(&alpha.invert()?);
        let text = ring_text(&w);
        Some(TraceBlock {
            trace_generator: w,
            display: [
                ["0".to_string(), "-1".to_string()],
                ["1".to_string(), text],
            ],
        })
    } else {
        None
    };
    Ok(MultiplicationMatrix {
        companion,
        determinant,
        trace_block,
    })
}

fn ring_text(e: &RingElement) -> String {
    let mut parts = Vec::new();
    for (k, c) in e.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(match k {
            0 => c.to_string(),
            1 => format!("{c}*a"),
            _ => format!("{c}*a^{k}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}
