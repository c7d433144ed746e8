//! Command-line front end: argument parsing, corpus files, the on-disk result
//! cache and report rendering.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use serde_json::Value;

use crate::adjoint::{global_integrality, AdjointReport};
use crate::error::{Error, Result};
use crate::fields::{classify_Psr, field_summary, FieldSummary, Membership};
use crate::intpoly::IntPoly;
use crate::lattice::{construct, counterexample_scan, GammaPowerReport, ScanReport, DEFAULT_N};
use crate::mahler::{
    dobrowolski_bound, kronecker_test, mahler_measure, schinzel_applies, schinzel_bound,
    smyth_certificate, voutier_bound, MahlerCertificate,
};
use crate::roots::{exact_counts, ExactCounts, RootProfile};
use crate::salem::{beta_n, certify, search_box, BetaCertificate, SalemCertificate, SearchConfig, SearchResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "LEHMER_CACHE_DIR";
const SIGNIFICANT_DIGITS: usize = 12;
const BUNDLED_CORPUS: &str = include_str!("../data/corpus.txt");

#[derive(Parser, Debug)]
#[command(name = "lehmer", version, about = "Certified Mahler measures, Salem numbers and lattice elements")]
pub struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write a two-column TSV series for plotting.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit_plot: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certified Mahler measure and Kronecker test.
    Mahler {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Root profile, class membership and Salem certificate.
    Classify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Trace polynomial and field summary.
    TracePoly {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Exhaustive search for small measures.
    Search {
        /// Polynomial degree.
        #[arg(long)]
        deg: usize,
        /// Bound on the absolute value of each coefficient.
        #[arg(long)]
        height: u32,
        /// Keep members of P(s, r) only.
        #[arg(long, requires = "r")]
        s: Option<usize>,
        #[arg(long, requires = "s")]
        r: Option<usize>,
        /// Enumerate palindromic polynomials only.
        #[arg(long)]
        palindromic: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Stop after this many candidates.
        #[arg(long)]
        budget: Option<u64>,
        /// Number of smallest measures to report.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Smallest Salem logarithm in a degree and height box.
    BetaN {
        /// Degree of the Salem polynomials.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        height: u32,
    },
    /// Power of the diagonal lattice element at level m.
    Construct {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Level m >= 1.
        #[arg(long)]
        m: u64,
        /// Matrix size of the lattice element.
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
    },
    /// Hypothesis check over a corpus file for a range of levels.
    Scan {
        corpus: PathBuf,
        /// Inclusive range `A..B`.
        #[arg(long, value_parser = parse_range)]
        m_range: (u64, u64),
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
    },
    /// Comparison with the classical lower bounds.
    Bounds {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Adjoint characteristic polynomials and their global product.
    Adjoint {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
    },
}

pub fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if a == 0 || b < a {
        return Err(format!("range must satisfy 1 <= A <= B, got {a}..{b}"));
    }
    Ok((a, b))
}

pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let p: IntPoly = text.parse()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub poly: IntPoly,
    pub label: Option<String>,
}

/// One polynomial per line; `#` starts a comment and a comment after the
/// coefficients becomes the label.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, Some(c.trim())),
            None => (line, None),
        };
        if body.trim().is_empty() {
            continue;
        }
        let poly = parse_poly(body).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(CorpusEntry {
            poly,
            label: comment.filter(|c| !c.is_empty()).map(str::to_string),
        });
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

/// The corpus shipped with the crate.
pub fn bundled_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUNDLED_CORPUS).expect("bundled corpus parses")
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    version: String,
    op: String,
    key: String,
    result: Value,
}

/// Results stored as JSON files, one per operation and input, tagged with the
/// crate version; records from another version are recomputed.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    fn path(&self, op: &str, key: &str) -> PathBuf {
        let mut h = DefaultHasher::new();
        key.hash(&mut h);
        self.dir.join(format!("{op}-{:016x}.json", h.finish()))
    }

    pub fn get<T: DeserializeOwned>(&self, op: &str, key: &str) -> Option<T> {
        let text = std::fs::read_to_string(self.path(op, key)).ok()?;
        let rec: CacheRecord = serde_json::from_str(&text).ok()?;
        if rec.version != env!("CARGO_PKG_VERSION") || rec.op != op || rec.key != key {
            return None;
        }
        serde_json::from_value(rec.result).ok()
    }

    pub fn put<T: Serialize>(&self, op: &str, key: &str, value: &T) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let rec = CacheRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            op: op.to_string(),
            key: key.to_string(),
            result: serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?,
        };
        let text = serde_json::to_string(&rec).map_err(|e| Error::Internal(e.to_string()))?;
        std::fs::write(self.path(op, key), text)?;
        Ok(())
    }

    pub fn get_or_compute<T, F>(&self, op: &str, key: &str, f: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.get(op, key) {
            return Ok(v);
        }
        let v = f()?;
        self.put(op, key, &v)?;
        Ok(v)
    }
}

fn cached<T, F>(cache: Option<&Cache>, op: &str, key: &str, f: F) -> Result<T>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T>,
{
    match cache {
        Some(c) => c.get_or_compute(op, key, f),
        None => f(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerReport {
    pub poly: IntPoly,
    pub value: f64,
    pub error_radius: f64,
    pub is_one_exact: bool,
    pub kronecker: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub poly: IntPoly,
    pub counts: ExactCounts,
    pub palindromic: bool,
    pub membership: Membership,
    pub salem: SalemCertificate,
    pub profile: RootProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub poly: IntPoly,
    pub trace_poly: IntPoly,
    pub summary: Option<FieldSummary>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub bound: Option<f64>,
    pub applies: bool,
    /// `None` when the bound does not apply.
    pub satisfied: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub poly: IntPoly,
    pub degree: usize,
    pub mahler: MahlerCertificate,
    pub kronecker: bool,
    pub irreducible: Option<bool>,
    pub palindromic: bool,
    pub rows: Vec<BoundRow>,
}

/// Measures within this relative distance of a bound count as meeting it.
const BOUND_SLACK: f64 = 1e-9;

pub fn bounds_report(p: &IntPoly) -> Result<BoundsReport> {
    let cert = certify(p)?;
    let mahler = cert.mahler.clone();
    let d = p.deg();
    let kron = mahler.is_one_exact;
    let irreducible = cert.irreducibility.decided();
    let palindromic = cert.palindromic;
    let meets = |b: f64| mahler.upper() >= b * (1.0 - BOUND_SLACK);
    let mut rows = Vec::new();
    let general = d >= 2 && irreducible == Some(true) && !kron;
    for (name, f) in [
        ("voutier", voutier_bound as fn(u64) -> Result<f64>),
        ("dobrowolski", dobrowolski_bound),
    ] {
        let bound = if d >= 2 { Some(f(d as u64)?) } else { None };
        rows.push(BoundRow {
            name: name.into(),
            bound,
            applies: general,
            satisfied: if general { bound.map(&meets) } else { None },
        });
    }
    let sch = d >= 2 && schinzel_applies(p)?;
    let bound = if d >= 2 { Some(schinzel_bound(d as u64)?) } else { None };
    rows.push(BoundRow {
        name: "schinzel".into(),
        bound,
        applies: sch,
        satisfied: if sch { bound.map(&meets) } else { None },
    });
    let smyth = smyth_certificate().value;
    let one = num_bigint::BigInt::from(1);
    let nonrec = !palindromic
        && !p.reversal().eq(&-p)
        && !p.coeff(0).is_zero()
        && !p.eval_int(&one).is_zero()
        && !kron;
    rows.push(BoundRow {
        name: "smyth".into(),
        bound: Some(smyth),
        applies: nonrec,
        satisfied: if nonrec { Some(meets(smyth)) } else { None },
    });
    Ok(BoundsReport {
        poly: p.clone(),
        degree: d,
        mahler,
        kronecker: kron,
        irreducible,
        palindromic,
        rows,
    })
}

pub fn mahler_report(p: &IntPoly) -> Result<MahlerReport> {
    let cert = mahler_measure(p)?;
    Ok(MahlerReport {
        poly: p.clone(),
        value: cert.value,
        error_radius: cert.error_radius,
        is_one_exact: cert.is_one_exact,
        kronecker: kronecker_test(p)?,
    })
}

pub fn classify_report(p: &IntPoly) -> Result<ClassifyReport> {
    let salem = certify(p)?;
    Ok(ClassifyReport {
        poly: p.clone(),
        counts: exact_counts(p)?,
        palindromic: salem.palindromic,
        membership: classify_Psr(p),
        profile: salem.evidence.clone(),
        salem,
    })
}

pub fn trace_report(p: &IntPoly) -> Result<TraceReport> {
    let trace_poly = p.trace_polynomial()?;
    let (summary, note) = match field_summary(p) {
        Ok(s) => (Some(s), None),
        Err(Error::NotMember { reason, .. }) => (None, Some(reason)),
        Err(e) => return Err(e),
    };
    Ok(TraceReport {
        poly: p.clone(),
        trace_poly,
        summary,
        note,
    })
}

/// Result of one command: its JSON value, a text rendering and an optional
/// plot series.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: &'static str,
    pub result: Value,
    pub text: String,
    pub plot: Option<Vec<(f64, f64)>>,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn roots_series(profile: &RootProfile) -> Vec<(f64, f64)> {
    profile.roots.iter().map(|r| (r.approx.re, r.approx.im)).collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".to_string(), |x| format!("{x:.10}"))
}

fn render_mahler(r: &MahlerReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly        {}", r.poly);
    if r.is_one_exact {
        let _ = writeln!(s, "mahler      1 (exact)");
    } else {
        let _ = writeln!(s, "mahler      {:.12} +/- {:.2e}", r.value, r.error_radius);
    }
    let _ = writeln!(s, "kronecker   {}", r.kronecker);
    s
}

fn render_classify(r: &ClassifyReport) -> String {
    let mut s = String::new();
    let c = &r.counts;
    let _ = writeln!(s, "poly        {}", r.poly);
    let _ = writeln!(
        s,
        "roots       degree {}, outside {} (real {}), on circle {}, inside {}, real {}",
        c.degree, c.outside, c.real_outside, c.on_circle, c.inside, c.real
    );
    let _ = writeln!(s, "s, r        {}, {}", c.outside, c.real_outside);
    let _ = writeln!(s, "palindromic {}", r.palindromic);
    match &r.membership {
        Membership::Member { s: ms, r: mr, satisfies_l, .. } => {
            let _ = writeln!(s, "class       P({ms},{mr}), root on circle: {satisfies_l}");
        }
        Membership::NotMember { reason } => {
            let _ = writeln!(s, "class       none ({reason})");
        }
    }
    let _ = writeln!(s, "salem       {:?}", r.salem.kind);
    if r.salem.kind != r.salem.kind_if_irreducible {
        let _ = writeln!(s, "            {:?} if irreducible", r.salem.kind_if_irreducible);
    }
    let _ = writeln!(s, "mahler      {:.12} +/- {:.2e}", r.salem.mahler.value, r.salem.mahler.error_radius);
    s
}

fn render_trace(r: &TraceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly        {}", r.poly);
    let _ = writeln!(s, "trace poly  {}", r.trace_poly);
    if let Some(sm) = &r.summary {
        let _ = writeln!(s, "d, s, r, t  {}, {}, {}, {}", sm.d, sm.s, sm.r, sm.t);
        let _ = writeln!(s, "signature   {:?} (counted {:?})", sm.signature_k, sm.signature_counted);
        let _ = writeln!(s, "identity    {}", sm.trace_identity);
        let _ = writeln!(s, "cocompact   {}", sm.cocompact);
        for e in &sm.embeddings {
            let _ = writeln!(
                s,
                "  sigma_{:<3} {:?}  alpha {:.10}{:+.10}i  beta {:.10}{:+.10}i",
                e.index, e.class, e.alpha.re, e.alpha.im, e.beta.re, e.beta.im
            );
        }
    }
    if let Some(n) = &r.note {
        let _ = writeln!(s, "note        {n}");
    }
    s
}

fn render_search(r: &SearchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scanned {}  evaluated {}  incomplete {}  uncertified {}",
        r.scanned,
        r.evaluated,
        r.incomplete,
        r.uncertified.len()
    );
    let _ = writeln!(s, "{:<4} {:<16} {:<3} {:<3} {:<3} poly", "deg", "mahler", "s", "r", "c");
    for e in &r.minima {
        let _ = writeln!(
            s,
            "{:<4} {:<16.12} {:<3} {:<3} {:<3} {}",
            e.poly.deg(),
            e.certificate.value,
            e.s,
            e.r,
            e.on_circle,
            e.poly
        );
    }
    s
}

fn render_beta(r: &BetaCertificate) -> String {
    format!(
        "n {}  height {}\npoly   {}\nsalem  {:.12} +/- {:.2e}\nlog    {:.12} +/- {:.2e}\ncandidates {}\n{}\n",
        r.n, r.height_max, r.poly, r.salem_value, r.salem_radius, r.log_value, r.log_radius, r.candidates, r.note
    )
}

fn render_construct(r: &GammaPowerReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly        {}", r.poly);
    let _ = writeln!(s, "n, m        {}, {}", r.n, r.m);
    let _ = writeln!(s, "s, r, t     {}, {}, {}", r.s, r.r, r.t);
    let _ = writeln!(s, "c, power    {}, {}", r.witness.c, r.power);
    let _ = writeln!(s, "eta         {} = {:.6e}", r.eta, r.eta_value);
    let _ = writeln!(
        s,
        "hypothesis  M < exp(eta): {} (M / exp(eta) = {:.10})",
        r.mahler_hypothesis_met, r.hypothesis_gap
    );
    for p in &r.places {
        for (k, f) in p.eigenvalues.iter().enumerate().take(2) {
            let _ = writeln!(
                s,
                "  sigma_{} lambda_{}  log|.| {:+.10} [{}]  arg {:+.10} [{}]",
                p.index,
                k + 1,
                f.log_modulus,
                f.log_modulus_in_window,
                f.argument,
                f.argument_in_window
            );
        }
    }
    let _ = writeln!(s, "in U_m      {}", r.all_in_u_m);
    let _ = writeln!(s, "distance    {:.10}", r.distance_to_identity);
    let _ = writeln!(s, "chain       {}", r.chain_holds);
    let _ = writeln!(s, "infinite    {}", r.infinite_order);
    s
}

fn render_scan(r: &ScanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<4} {:<14} {:<14} {:<6} {:<12} poly", "m", "mahler", "exp(eta)", "met", "gap");
    for e in &r.entries {
        let _ = writeln!(
            s,
            "{:<4} {:<14.10} {:<14.10} {:<6} {:<12.8} {}",
            e.m, e.mahler, e.threshold, e.hypothesis_met, e.gap, e.poly
        );
    }
    s
}

fn render_bounds(r: &BoundsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly        {}", r.poly);
    let _ = writeln!(s, "mahler      {:.12} +/- {:.2e}", r.mahler.value, r.mahler.error_radius);
    let _ = writeln!(s, "{:<12} {:<14} {:<8} satisfied", "bound", "value", "applies");
    for row in &r.rows {
        let sat = row.satisfied.map_or("-".to_string(), |b| b.to_string());
        let _ = writeln!(s, "{:<12} {:<14} {:<8} {}", row.name, fmt_opt(row.bound), row.applies, sat);
    }
    s
}

fn render_adjoint(r: &AdjointReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "poly        {}", r.poly);
    let _ = writeln!(s, "n           {}", r.n);
    let _ = writeln!(s, "global      {}", r.global);
    let _ = writeln!(s, "degree      {}", r.global_degree);
    let _ = writeln!(s, "rounding    {:.2e} (tolerance {:.2e})", r.max_rounding_error, r.tolerance);
    for (i, f) in &r.f_values {
        let _ = writeln!(s, "  f(sigma_{i}) {f:.12}");
    }
    let _ = writeln!(s, "total f     {:.12}", r.total_f);
    let _ = writeln!(s, "s           {} <= {}: {}", r.s_global, r.s_bound, r.s_bound_ok);
    let _ = writeln!(s, "torsion     {}", r.torsion_flag);
    s
}

pub fn execute(command: &Command, cache: Option<&Cache>) -> Result<Output> {
    match command {
        Command::Mahler { poly } => {
            let p = parse_poly(poly)?;
            let r: MahlerReport = cached(cache, "mahler", &p.to_text(), || mahler_report(&p))?;
            let plot = crate::mahler::certified_profile(&p).ok().map(|pr| roots_series(&pr));
            Ok(Output {
                command: "mahler",
                result: to_value(&r)?,
                text: render_mahler(&r),
                plot,
            })
        }
        Command::Classify { poly } => {
            let p = parse_poly(poly)?;
            let r: ClassifyReport = cached(cache, "classify", &p.to_text(), || classify_report(&p))?;
            Ok(Output {
                command: "classify",
                result: to_value(&r)?,
                text: render_classify(&r),
                plot: Some(roots_series(&r.profile)),
            })
        }
        Command::TracePoly { poly } => {
            let p = parse_poly(poly)?;
            let r: TraceReport = cached(cache, "trace-poly", &p.to_text(), || trace_report(&p))?;
            let plot = r.summary.as_ref().map(|s| {
                s.embeddings.iter().map(|e| (e.beta.re, e.beta.im)).collect()
            });
            Ok(Output {
                command: "trace-poly",
                result: to_value(&r)?,
                text: render_trace(&r),
                plot,
            })
        }
        Command::Search {
            deg,
            height,
            s,
            r,
            palindromic,
            jobs,
            budget,
            top,
        } => {
            let mut config = SearchConfig::new(*deg, *height);
            if *palindromic {
                config = config.palindromic();
            }
            if let (Some(s), Some(r)) = (s, r) {
                config = config.filter(*s, *r);
            }
            config.jobs = *jobs;
            config.budget = *budget;
            config.top_k = *top;
            let res = search_box(&config)?;
            let plot = res.per_degree_min.iter().map(|&(d, m)| (d as f64, m)).collect();
            Ok(Output {
                command: "search",
                result: to_value(&res)?,
                text: render_search(&res),
                plot: Some(plot),
            })
        }
        Command::BetaN { n, height } => {
            let b = beta_n(*n, *height)?;
            Ok(Output {
                command: "beta-n",
                result: to_value(&b)?,
                text: render_beta(&b),
                plot: Some(vec![(b.n as f64, b.log_value)]),
            })
        }
        Command::Construct { poly, m, n } => {
            let p = parse_poly(poly)?;
            let key = format!("{}|m={m}|n={n}", p.to_text());
            let r: GammaPowerReport = cached(cache, "construct", &key, || construct(&p, *m, *n))?;
            let plot = r
                .places
                .iter()
                .flat_map(|pl| pl.eigenvalues.iter().map(|f| (f.log_modulus, f.argument)))
                .collect();
            Ok(Output {
                command: "construct",
                result: to_value(&r)?,
                text: render_construct(&r),
                plot: Some(plot),
            })
        }
        Command::Scan { corpus, m_range, n } => {
            let entries = read_corpus(corpus)?;
            let polys: Vec<IntPoly> = entries.into_iter().map(|e| e.poly).collect();
            let ms: Vec<u64> = (m_range.0..=m_range.1).collect();
            let r = counterexample_scan(&polys, *n, &ms)?;
            let plot = r.entries.iter().map(|e| (e.m as f64, e.gap)).collect();
            Ok(Output {
                command: "scan",
                result: to_value(&r)?,
                text: render_scan(&r),
                plot: Some(plot),
            })
        }
        Command::Bounds { poly } => {
            let p = parse_poly(poly)?;
            let r: BoundsReport = cached(cache, "bounds", &p.to_text(), || bounds_report(&p))?;
            let plot = r
                .rows
                .iter()
                .enumerate()
                .filter_map(|(i, row)| row.bound.map(|b| (i as f64, b)))
                .collect();
            Ok(Output {
                command: "bounds",
                result: to_value(&r)?,
                text: render_bounds(&r),
                plot: Some(plot),
            })
        }
        Command::Adjoint { poly, n } => {
            let p = parse_poly(poly)?;
            let key = format!("{}|n={n}", p.to_text());
            let r: AdjointReport = cached(cache, "adjoint", &key, || {
                let summary = field_summary(&p)?;
                global_integrality(&summary, *n)
            })?;
            let plot = r.places.iter().map(|pl| (pl.index as f64, pl.f)).collect();
            Ok(Output {
                command: "adjoint",
                result: to_value(&r)?,
                text: render_adjoint(&r),
                plot: Some(plot),
            })
        }
    }
}

/// `x` rounded to twelve significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every non-integer number in a JSON tree to twelve significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_significant(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Versioned JSON envelope with rounded floats.
pub fn render_json(command: &str, result: &Value) -> String {
    let mut result = result.clone();
    round_floats(&mut result);
    let mut env = serde_json::Map::new();
    env.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    env.insert("command".into(), Value::from(command));
    env.insert("result".into(), result);
    serde_json::to_string_pretty(&Value::Object(env)).expect("JSON values serialize")
}

/// Serializes with the same float rounding used for command output.
pub fn to_json_string<T: Serialize>(v: &T) -> Result<String> {
    let mut value = to_value(v)?;
    round_floats(&mut value);
    serde_json::to_string(&value).map_err(|e| Error::Internal(e.to_string()))
}

pub fn write_plot(path: &Path, series: &[(f64, f64)]) -> Result<()> {
    let mut s = String::from("x\ty\n");
    for (x, y) in series {
        let _ = writeln!(s, "{}\t{}", round_significant(*x), round_significant(*y));
    }
    std::fs::write(path, s)?;
    Ok(())
}

/// Exit status for an error: 2 for internal consistency failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}

/// Runs a parsed command line, printing to stdout; returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let cache = Cache::from_env();
    let result = execute(&cli.command, cache.as_ref()).and_then(|out| {
        if let Some(path) = &cli.emit_plot {
            match &out.plot {
                Some(series) => write_plot(path, series)?,
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "no plot series available for `{}`",
                        out.command
                    )))
                }
            }
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", render_json(out.command, &out.result));
            } else {
                print!("{}", out.text);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..8"), Ok((1, 8)));
        assert_eq!(parse_range("2..=3"), Ok((2, 3)));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn corpus_parsing() {
        let c = parse_corpus("# header\n1 -3 1  # quadratic\n\n1 1 1\n").unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].label.as_deref(), Some("quadratic"));
        assert_eq!(c[1].label, None);
        assert!(parse_corpus("1 x 2").is_err());
        assert!(!bundled_corpus().is_empty());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_significant(1.176_280_818_259_917_5), 1.176_280_818_26);
        assert_eq!(round_significant(0.0), 0.0);
        assert_eq!(round_significant(-2.5e-20), -2.5e-20);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("lehmer-cache-test-{}", std::process::id()));
        let cache = Cache::new(&dir);
        let p = IntPoly::from_i64s(&[1, 1, 1]);
        let a: MahlerReport = cache.get_or_compute("mahler", &p.to_text(), || mahler_report(&p)).unwrap();
        let b: MahlerReport = cache
            .get_or_compute("mahler", &p.to_text(), || Err(Error::Internal("recomputed".into())))
            .unwrap();
        assert_eq!(a, b);
        let _ = std::fs::remove_dir_all(dir);
    }
}
