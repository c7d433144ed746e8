//! Salem and complex Salem certification, bounded searches for small Mahler
//! measures and height-bounded `β_n` certificates.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::{irreducibility_report, Irreducibility, IrreducibilityConfig, IntPoly};
use crate::mahler::{certificate_from_profile, certified_profile, kronecker_test, MahlerCertificate};
use crate::roots::{exact_counts, Location, Realness, RootProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SalemKind {
    Salem,
    ComplexSalem,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalemCertificate {
    pub poly: IntPoly,
    pub kind: SalemKind,
    /// Kind the root data supports if irreducibility could not be decided.
    pub kind_if_irreducible: SalemKind,
    /// Modulus of the root outside the disk, when the kind is not `Neither`.
    pub salem_value: Option<f64>,
    pub salem_radius: Option<f64>,
    pub palindromic: bool,
    pub irreducibility: Irreducibility,
    pub mahler: MahlerCertificate,
    pub evidence: RootProfile,
}

impl SalemCertificate {
    pub fn irreducibility_confirmed(&self) -> bool {
        self.irreducibility.is_irreducible()
    }
}

fn kind_from_roots(profile: &RootProfile, palindromic: bool) -> SalemKind {
    let outside: Vec<_> = profile.outside_roots().collect();
    let circle = profile.on_circle >= 1;
    if profile.s == 1
        && profile.r == 1
        && circle
        && palindromic
        && outside[0].approx.re > 0.0
        && profile.degree >= 2
    {
        return SalemKind::Salem;
    }
    if profile.s == 2
        && profile.r == 0
        && circle
        && outside.len() == 2
        && outside.iter().all(|r| r.multiplicity == 1)
    {
        return SalemKind::ComplexSalem;
    }
    SalemKind::Neither
}

/// Classify `p` as the minimal polynomial of a Salem number, of a complex
/// Salem number, or neither.
pub fn certify(p: &IntPoly) -> Result<SalemCertificate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.clone()));
    }
    if p.deg() == 0 {
        return Err(Error::InvalidArgument("constant polynomial".into()));
    }
    let profile = certified_profile(p)?;
    let palindromic = p.is_palindromic()?;
    let irreducibility = irreducibility_report(p, &IrreducibilityConfig::default())?;
    let mahler = if kronecker_test(p)? {
        MahlerCertificate {
            value: 1.0,
            error_radius: 0.0,
            is_one_exact: true,
            poly: p.clone(),
        }
    } else {
        certificate_from_profile(&profile)
    };
    let candidate = kind_from_roots(&profile, palindromic);
    let kind = if irreducibility.is_irreducible() {
        candidate
    } else {
        SalemKind::Neither
    };
    let (salem_value, salem_radius) = match candidate {
        SalemKind::Neither => (None, None),
        _ => {
            let top = profile.outside_roots().next().expect("one root outside");
            (Some(top.modulus()), Some(top.radius))
        }
    };
    Ok(SalemCertificate {
        poly: p.clone(),
        kind,
        kind_if_irreducible: candidate,
        salem_value,
        salem_radius,
        palindromic,
        irreducibility,
        mahler,
        evidence: profile,
    })
}

/// `P(-x^2)` for a Salem polynomial `P`, with its certificate. The measures of
/// the two polynomials are checked to agree within their radii.
pub fn complex_salem_from_salem(p: &IntPoly) -> Result<(IntPoly, SalemCertificate)> {
    let base = certify(p)?;
    if base.kind != SalemKind::Salem {
        return Err(Error::NotSalem(p.clone()));
    }
    let q = p.compose_neg_x_squared();
    let cert = certify(&q)?;
    let (a, b) = (&base.mahler, &cert.mahler);
    let tol = a.error_radius + b.error_radius + 8.0 * f64::EPSILON * a.value;
    if (a.value - b.value).abs() > tol {
        return Err(Error::Internal(format!(
            "measure of {q} differs from that of {p}: {} vs {}",
            b.value, a.value
        )));
    }
    if cert.kind_if_irreducible != SalemKind::ComplexSalem {
        return Err(Error::Internal(format!(
            "{q} does not have the root pattern of a complex Salem polynomial"
        )));
    }
    Ok((q, cert))
}

/// Make the leading coefficient positive.
fn positive_lead(p: IntPoly) -> IntPoly {
    match p.leading() {
        Some(l) if l.sign() == num_bigint::Sign::Minus => p.scale(&BigInt::from(-1)),
        _ => p,
    }
}

/// Least coefficient vector (constant first) among `p`, its reversal, `p(-x)`
/// and the reversal of `p(-x)`, each with positive leading coefficient.
/// Reversals are only taken when the constant term is `±1`, so every member of
/// the orbit is monic with the same Mahler measure.
pub fn canonical_form(p: &IntPoly) -> IntPoly {
    let unit_constant = num_traits::Signed::abs(&p.coeff(0)) == BigInt::from(1);
    let neg = positive_lead(p.negate_x());
    let mut orbit = vec![p.clone(), neg.clone()];
    if unit_constant {
        orbit.push(positive_lead(p.reversal()));
        orbit.push(positive_lead(neg.reversal()));
    }
    orbit
        .into_iter()
        .min_by(|a, b| a.coeffs().cmp(b.coeffs()))
        .expect("orbit is nonempty")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub degree_max: usize,
    pub height_max: u32,
    /// Restrict to members of `P(s, r)`: monic, irreducible, palindromic
    /// with the given counts. Implies `palindromic_only`.
    pub filter: Option<(usize, usize)>,
    pub palindromic_only: bool,
    /// Require a root on the unit circle.
    pub require_circle: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub search_box: SearchBox,
    /// Maximum number of candidates enumerated.
    pub budget: Option<u64>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Number of minima kept.
    pub top_k: usize,
}

impl SearchConfig {
    pub fn new(degree_max: usize, height_max: u32) -> Self {
        SearchConfig {
            search_box: SearchBox {
                degree_max,
                height_max,
                filter: None,
                palindromic_only: false,
                require_circle: false,
            },
            budget: None,
            jobs: None,
            top_k: 10,
        }
    }

    pub fn palindromic(mut self) -> Self {
        self.search_box.palindromic_only = true;
        self
    }

    pub fn filter(mut self, s: usize, r: usize) -> Self {
        self.search_box.filter = Some((s, r));
        self.search_box.palindromic_only = true;
        self
    }

    pub fn require_circle(mut self) -> Self {
        self.search_box.require_circle = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub poly: IntPoly,
    pub certificate: MahlerCertificate,
    pub s: usize,
    pub r: usize,
    pub on_circle: usize,
    pub irreducibility: Option<Irreducibility>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub search_box: SearchBox,
    /// Ascending by measure, one representative per orbit.
    pub minima: Vec<SearchEntry>,
    /// Smallest measure found at each degree.
    pub per_degree_min: Vec<(usize, f64)>,
    pub scanned: u64,
    pub evaluated: u64,
    pub incomplete: bool,
    pub uncertified: Vec<IntPoly>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn candidates_at(degree: usize, height: u32, palindromic: bool) -> u64 {
    let base = 2 * height as u64 + 1;
    if palindromic {
        if degree % 2 == 1 {
            0
        } else {
            base.pow((degree / 2) as u32)
        }
    } else {
        2 * height as u64 * base.pow(degree as u32 - 1)
    }
}

fn candidate(degree: usize, height: u32, palindromic: bool, mut idx: u64) -> IntPoly {
    let base = 2 * height as u64 + 1;
    let h = height as i64;
    let mut c = vec![0i64; degree + 1];
    c[degree] = 1;
    if palindromic {
        c[0] = 1;
        for k in 1..=degree / 2 {
            let v = (idx % base) as i64 - h;
            idx /= base;
            c[k] = v;
            c[degree - k] = v;
        }
    } else {
        let v = (idx % (2 * height as u64)) as i64 - h;
        idx /= 2 * height as u64;
        c[0] = if v >= 0 { v + 1 } else { v };
        for k in 1..degree {
            c[k] = (idx % base) as i64 - h;
            idx /= base;
        }
    }
    IntPoly::from_i64s(&c)
}

enum Outcome {
    Skip,
    Entry(SearchEntry),
    Uncertified(IntPoly),
}

fn evaluate(p: &IntPoly, sbox: &SearchBox) -> Outcome {
    if canonical_form(p) != *p {
        return Outcome::Skip;
    }
    match kronecker_test(p) {
        Ok(false) => {}
        _ => return Outcome::Skip,
    }
    let counts = match exact_counts(p) {
        Ok(c) => c,
        Err(_) => return Outcome::Uncertified(p.clone()),
    };
    if sbox.require_circle && counts.on_circle == 0 {
        return Outcome::Skip;
    }
    let mut irreducibility = None;
    if let Some((s, r)) = sbox.filter {
        if counts.outside != s || counts.real_outside != r {
            return Outcome::Skip;
        }
        match irreducibility_report(p, &IrreducibilityConfig::default()) {
            Ok(rep) if rep.is_irreducible() => irreducibility = Some(rep),
            Ok(Irreducibility::Unknown { .. }) => return Outcome::Uncertified(p.clone()),
            _ => return Outcome::Skip,
        }
    }
    match certified_profile(p) {
        Ok(profile) => Outcome::Entry(SearchEntry {
            poly: p.clone(),
            certificate: certificate_from_profile(&profile),
            s: counts.outside,
            r: counts.real_outside,
            on_circle: counts.on_circle,
            irreducibility,
        }),
        Err(_) => Outcome::Uncertified(p.clone()),
    }
}

fn entry_order(a: &SearchEntry, b: &SearchEntry) -> std::cmp::Ordering {
    a.certificate
        .value
        .total_cmp(&b.certificate.value)
        .then(a.poly.deg().cmp(&b.poly.deg()))
        .then_with(|| a.poly.coeffs().cmp(b.poly.coeffs()))
}

fn run_search(config: &SearchConfig) -> Result<SearchResult> {
    let start = Instant::now();
    let sbox = &config.search_box;
    if sbox.height_max == 0 {
        return Err(Error::InvalidArgument("height bound must be at least 1".into()));
    }
    let palindromic = sbox.palindromic_only || sbox.filter.is_some();
    let budget = config.budget.unwrap_or(u64::MAX);
    let mut scanned = 0u64;
    let mut incomplete = false;
    let mut entries = Vec::new();
    let mut uncertified = Vec::new();
    let mut per_degree_min = Vec::new();
    for degree in 1..=sbox.degree_max {
        let total = candidates_at(degree, sbox.height_max, palindromic);
        let take = total.min(budget - scanned);
        if take < total {
            incomplete = true;
        }
        let outcomes: Vec<Outcome> = (0..take)
            .into_par_iter()
            .map(|i| evaluate(&candidate(degree, sbox.height_max, palindromic, i), sbox))
            .collect();
        scanned += take;
        let mut best: Option<f64> = None;
        for o in outcomes {
            match o {
                Outcome::Skip => {}
                Outcome::Uncertified(p) => uncertified.push(p),
                Outcome::Entry(e) => {
                    let v = e.certificate.value;
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                    entries.push(e);
                }
            }
        }
        if let Some(b) = best {
            per_degree_min.push((degree, b));
        }
        if scanned >= budget {
            if degree < sbox.degree_max {
                incomplete = true;
            }
            break;
        }
    }
    let evaluated = entries.len() as u64;
    entries.sort_by(entry_order);
    entries.truncate(config.top_k);
    for e in entries.iter_mut() {
        if e.irreducibility.is_none() {
            e.irreducibility = irreducibility_report(&e.poly, &IrreducibilityConfig::default()).ok();
        }
    }
    uncertified.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(SearchResult {
        search_box: sbox.clone(),
        minima: entries,
        per_degree_min,
        scanned,
        evaluated,
        incomplete,
        uncertified,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive search of monic polynomials in a degree and height box for the
/// smallest Mahler measures above 1. Only the canonical member of each orbit
/// under reversal and `x ↦ -x` is evaluated, so the minima carry no
/// duplicates; the result does not depend on the worker count.
pub fn search_box(config: &SearchConfig) -> Result<SearchResult> {
    match config.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| run_search(config))
        }
        None => run_search(config),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaCertificate {
    pub n: usize,
    pub height_max: u32,
    pub poly: IntPoly,
    pub salem_value: f64,
    pub salem_radius: f64,
    pub log_value: f64,
    pub log_radius: f64,
    pub candidates: u64,
    pub note: String,
}

/// Smallest `log λ` over Salem numbers `λ` whose minimal polynomial has degree
/// at most `n` and height at most `height_max`. This is an upper bound for
/// `β_n`; minimality is only certified inside the height box.
pub fn beta_n(n: usize, height_max: u32) -> Result<BetaCertificate> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "n must be an even integer >= 4, got {n}"
        )));
    }
    if height_max == 0 {
        return Err(Error::InvalidArgument("height bound must be at least 1".into()));
    }
    let mut cands = Vec::new();
    for degree in (4..=n).step_by(2) {
        let total = candidates_at(degree, height_max, true);
        cands.extend((0..total).map(|i| (degree, i)));
    }
    let count = cands.len() as u64;
    let found: Vec<SalemCertificate> = cands
        .into_par_iter()
        .filter_map(|(degree, i)| {
            let p = candidate(degree, height_max, true, i);
            let c = exact_counts(&p).ok()?;
            if c.outside != 1 || c.real_outside != 1 || c.on_circle == 0 {
                return None;
            }
            let cert = certify(&p).ok()?;
            (cert.kind == SalemKind::Salem).then_some(cert)
        })
        .collect();
    let best = found
        .into_iter()
        .min_by(|a, b| {
            a.salem_value
                .unwrap()
                .total_cmp(&b.salem_value.unwrap())
                .then(a.poly.deg().cmp(&b.poly.deg()))
                .then_with(|| a.poly.coeffs().cmp(b.poly.coeffs()))
        })
        .ok_or(Error::EmptySearch)?;
    let v = best.salem_value.unwrap();
    let r = best.salem_radius.unwrap();
    let log_value = v.ln();
    let log_radius = ((v + r).ln() - log_value).max(log_value - (v - r).ln()) + 4.0 * f64::EPSILON;
    Ok(BetaCertificate {
        n,
        height_max,
        poly: best.poly,
        salem_value: v,
        salem_radius: r,
        log_value,
        log_radius,
        candidates: count,
        note: format!(
            "upper bound for beta_{n}, certified minimal within height <= {height_max}"
        ),
    })
}

/// The Salem root's image `λ + 1/λ` exceeds 2 and every other root of the
/// trace polynomial lies in `[-2, 2]`, checked on the roots of `p`.
pub fn trace_roots_consistent(cert: &SalemCertificate) -> bool {
    cert.evidence.roots.iter().all(|root| {
        let w = root.approx + root.approx.inv();
        let tol = 4.0 * root.radius + 1e-12;
        match root.location {
            Location::OutsideDisk | Location::InsideDisk => {
                root.realness == Realness::Real && w.re.abs() > 2.0 - tol
            }
            Location::OnCircle => w.im.abs() <= tol && w.re.abs() <= 2.0 + tol,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;

    #[test]
    fn salem_examples() {
        let q = certify(&IntPoly::from_i64s(&[1, -1, -1, -1, 1])).unwrap();
        assert_eq!(q.kind, SalemKind::Salem);
        assert!((q.salem_value.unwrap() - 1.72208).abs() < 1e-4);
        let l = certify(&lehmer_polynomial()).unwrap();
        assert_eq!(l.kind, SalemKind::Salem);
        assert!((l.salem_value.unwrap() - 1.17628).abs() < 1e-4);
        assert!(trace_roots_consistent(&l));
        let n = certify(&IntPoly::from_i64s(&[1, -3, 1])).unwrap();
        assert_eq!(n.kind, SalemKind::Neither);
    }

    #[test]
    fn negated_salem_is_not_salem() {
        let p = IntPoly::from_i64s(&[1, 1, -1, 1, 1]);
        assert_eq!(certify(&p).unwrap().kind, SalemKind::Neither);
    }

    #[test]
    fn complex_salem_examples() {
        let (q, c) = complex_salem_from_salem(&lehmer_polynomial()).unwrap();
        assert_eq!(q.deg(), 20);
        assert_eq!(c.kind, SalemKind::ComplexSalem);
        assert!((c.mahler.value - 1.17628).abs() < 1e-4);
        let (q4, c4) = complex_salem_from_salem(&IntPoly::from_i64s(&[1, -1, -1, -1, 1])).unwrap();
        assert_eq!(q4.deg(), 8);
        assert!((c4.mahler.value - 1.72208).abs() < 1e-4);
        assert!(matches!(
            complex_salem_from_salem(&IntPoly::from_i64s(&[1, 1, 1])),
            Err(Error::NotSalem(_))
        ));
    }

    #[test]
    fn canonical_orbit() {
        let l = lehmer_polynomial();
        assert_eq!(canonical_form(&l), canonical_form(&l.negate_x()));
        let p = IntPoly::from_i64s(&[-1, -1, 0, 1]);
        let c = canonical_form(&p);
        assert!(c.is_monic());
        assert_eq!(c, canonical_form(&positive_lead(p.reversal())));
    }

    #[test]
    fn enumeration_covers_box() {
        let all: Vec<IntPoly> = (0..candidates_at(2, 1, false))
            .map(|i| candidate(2, 1, false, i))
            .collect();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|p| p.is_monic() && !num_traits::Zero::is_zero(&p.coeff(0))));
        let pal: Vec<IntPoly> = (0..candidates_at(4, 1, true))
            .map(|i| candidate(4, 1, true, i))
            .collect();
        assert_eq!(pal.len(), 9);
        assert!(pal.iter().all(|p| p.is_palindromic().unwrap()));
    }

    #[test]
    fn quartic_search_with_filter() {
        let res = search_box(&SearchConfig::new(4, 1).filter(1, 1)).unwrap();
        let top = &res.minima[0];
        assert_eq!(canonical_form(&top.poly), canonical_form(&IntPoly::from_i64s(&[1, -1, -1, -1, 1])));
        assert!((top.certificate.value - 1.72208).abs() < 1e-4);
    }

    #[test]
    fn low_degree_palindromic_box_is_empty() {
        let res = search_box(&SearchConfig::new(2, 1).palindromic().require_circle()).unwrap();
        assert!(res.minima.is_empty());
        assert!(!res.incomplete);
    }

    #[test]
    fn budget_marks_incomplete_and_is_deterministic() {
        let mut cfg = SearchConfig::new(5, 1);
        cfg.budget = Some(100);
        let a = search_box(&cfg).unwrap();
        assert!(a.incomplete);
        assert_eq!(a.scanned, 100);
        cfg.jobs = Some(1);
        let b = search_box(&cfg).unwrap();
        assert_eq!(a.minima, b.minima);
    }

    #[test]
    fn beta_four() {
        let b = beta_n(4, 1).unwrap();
        assert!((b.log_value - 0.54351).abs() < 1e-4);
        assert!(beta_n(2, 1).is_err());
        assert!(beta_n(5, 1).is_err());
    }
}
