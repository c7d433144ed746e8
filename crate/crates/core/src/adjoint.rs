//! The adjoint action `X ↦ gXg⁻¹` on trace-zero matrices, the function
//! `f(g) = M(P_g)` of its characteristic polynomial, and the product of these
//! polynomials over every embedding of the field.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{EmbeddingClass, FieldSummary};
use crate::intpoly::IntPoly;
use crate::lattice::{build_gamma, PlaceBlock};
use crate::linalg::charpoly;
use crate::mahler::kronecker_test;
use crate::roots::exact_counts;
use crate::roots::numeric::complex_roots;

/// Rounding tolerance per unit of global degree.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;

type Matrix = Vec<Vec<Complex64>>;

fn czero() -> Complex64 {
    Complex64::zero()
}

fn invert(g: &[Vec<Complex64>]) -> Result<Matrix> {
    let n = g.len();
    let scale = g
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, z| m.max(z.norm()));
    let mut a: Matrix = g.to_vec();
    let mut inv: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::one() } else { czero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .ok_or(Error::SingularMatrix)?;
        if a[piv][col].norm() <= 1e-14 * scale.max(1e-300) {
            return Err(Error::SingularMatrix);
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col].inv();
        for j in 0..n {
            a[col][j] *= d;
            inv[col][j] *= d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                if f != czero() {
                    for j in 0..n {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[i][j] -= f * ac;
                        inv[i][j] -= f * ic;
                    }
                }
            }
        }
    }
    Ok(inv)
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(czero(), |acc, k| acc + a[i][k] * b[k][j]))
                .collect()
        })
        .collect()
}

/// Basis of trace-zero matrices: `E_ij` for `i ≠ j` in row-major order, then
/// `H_k = E_kk - E_{k+1,k+1}`.
fn basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = vec![vec![czero(); n]; n];
                m[i][j] = Complex64::one();
                out.push(m);
            }
        }
    }
    for k in 0..n - 1 {
        let mut m = vec![vec![czero(); n]; n];
        m[k][k] = Complex64::one();
        m[k + 1][k + 1] = -Complex64::one();
        out.push(m);
    }
    out
}

fn coordinates(x: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n * n - 1);
    for (i, row) in x.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                out.push(v);
            }
        }
    }
    let mut acc = czero();
    for (k, row) in x.iter().enumerate().take(n - 1) {
        acc += row[k];
        out.push(acc);
    }
    out
}

/// Matrix of `X ↦ gXg⁻¹` on the trace-zero space.
pub fn adjoint_matrix(g: &[Vec<Complex64>]) -> Result<Matrix> {
    let n = g.len();
    if n == 0 || g.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("block must be a nonempty square matrix".into()));
    }
    let gi = invert(g)?;
    let cols: Vec<Vec<Complex64>> = basis(n)
        .iter()
        .map(|b| coordinates(&matmul(&matmul(g, b), &gi)))
        .collect();
    let dim = cols.len();
    Ok((0..dim).map(|i| (0..dim).map(|j| cols[j][i]).collect()).collect())
}

/// Characteristic polynomial of the adjoint action, constant term first.
pub fn adjoint_charpoly(g: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    Ok(charpoly(&adjoint_matrix(g)?))
}

fn diagonal_matrix(diag: &[Complex64]) -> Matrix {
    let n = diag.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { diag[i] } else { czero() }).collect())
        .collect()
}

/// Mahler measure of a complex-coefficient polynomial from its root
/// approximations.
pub fn complex_mahler(coeffs: &[Complex64]) -> f64 {
    let lead = coeffs
        .iter()
        .rev()
        .find(|c| c.norm() > 0.0)
        .map_or(0.0, |c| c.norm());
    complex_roots(coeffs, &vec![0.0; coeffs.len()])
        .iter()
        .fold(lead, |acc, d| acc * d.center.norm().max(1.0))
}

/// `f(g) = M(P_g)`.
pub fn adjoint_mahler(g: &[Vec<Complex64>]) -> Result<f64> {
    Ok(complex_mahler(&adjoint_charpoly(g)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceAdjoint {
    pub index: usize,
    pub class: EmbeddingClass,
    pub charpoly: Vec<Complex64>,
    pub radii: Vec<f64>,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointReport {
    pub poly: IntPoly,
    pub n: usize,
    pub places: Vec<PlaceAdjoint>,
    pub global: IntPoly,
    pub global_degree: usize,
    pub max_rounding_error: f64,
    pub tolerance: f64,
    /// `(index, f)` at each noncompact embedding.
    pub f_values: Vec<(usize, f64)>,
    /// Product of `f` over every embedding.
    pub total_f: f64,
    /// Product of `f` over the noncompact embeddings.
    pub noncompact_f: f64,
    pub s_global: usize,
    pub s_bound: usize,
    pub s_bound_ok: bool,
    pub torsion_flag: bool,
    pub note: String,
}

const NOTE: &str = "integrality of the global product is checked numerically; the integral \
structure stabilized by the adjoint action is not constructed";

fn place_charpoly(b: &PlaceBlock) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let base = adjoint_charpoly(&diagonal_matrix(&b.diagonal))?;
    let a = b.diagonal[0];
    let r = b.radius.max(f64::EPSILON * a.norm());
    let mut radii = vec![0.0f64; base.len()];
    for dir in [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ] {
        let mut diag = b.diagonal.clone();
        diag[0] = a + dir * r;
        diag[1] = diag[0].inv();
        let moved = adjoint_charpoly(&diagonal_matrix(&diag))?;
        for (k, (x, y)) in base.iter().zip(&moved).enumerate() {
            radii[k] = radii[k].max(2.0 * (x - y).norm() + 8.0 * f64::EPSILON * x.norm());
        }
    }
    Ok((base, radii))
}

fn multiply(
    a: &[Complex64],
    ea: &[f64],
    b: &[Complex64],
    eb: &[f64],
) -> (Vec<Complex64>, Vec<f64>) {
    let mut c = vec![czero(); a.len() + b.len() - 1];
    let mut e = vec![0.0f64; c.len()];
    for i in 0..a.len() {
        for j in 0..b.len() {
            c[i + j] += a[i] * b[j];
            e[i + j] += a[i].norm() * eb[j]
                + ea[i] * b[j].norm()
                + ea[i] * eb[j]
                + 4.0 * f64::EPSILON * a[i].norm() * b[j].norm();
        }
    }
    (c, e)
}

/// Product of the adjoint characteristic polynomials of `γ` over all `d`
/// embeddings, rounded to an integer polynomial.
pub fn global_integrality(summary: &FieldSummary, n: usize) -> Result<AdjointReport> {
    let element = build_gamma(summary, n)?;
    let mut places = Vec::with_capacity(element.blocks.len());
    let mut prod = vec![Complex64::one()];
    let mut err = vec![0.0];
    for b in &element.blocks {
        let (cp, radii) = place_charpoly(b)?;
        let (p2, e2) = multiply(&prod, &err, &cp, &radii);
        prod = p2;
        err = e2;
        let f = complex_mahler(&cp);
        places.push(PlaceAdjoint {
            index: b.index,
            class: b.class,
            charpoly: cp,
            radii,
            f,
        });
    }
    let global_degree = prod.len() - 1;
    let tolerance = ROUNDING_TOLERANCE * (global_degree as f64).max(1.0);
    let mut coeffs = Vec::with_capacity(prod.len());
    let mut max_rounding_error: f64 = 0.0;
    for c in &prod {
        let rounded = c.re.round();
        max_rounding_error = max_rounding_error.max((c - Complex64::new(rounded, 0.0)).norm());
        coeffs.push(BigInt::from(rounded as i128));
    }
    if max_rounding_error > tolerance {
        return Err(Error::Internal(format!(
            "adjoint product for {} is {max_rounding_error:e} from integral (tolerance {tolerance:e})",
            summary.p
        )));
    }
    let global = IntPoly::new(coeffs);
    let f_values: Vec<(usize, f64)> = places
        .iter()
        .filter(|p| p.class != EmbeddingClass::CircleCompact)
        .map(|p| (p.index, p.f))
        .collect();
    let total_f = places.iter().map(|p| p.f).product();
    let noncompact_f = f_values.iter().map(|(_, f)| f).product();
    let s_global = exact_counts(&global)?.outside;
    let s_bound = (n * n - 1) * (summary.r + 2 * summary.t);
    let torsion_flag = torsion_test(&global)?;
    Ok(AdjointReport {
        poly: summary.p.clone(),
        n,
        places,
        global,
        global_degree,
        max_rounding_error,
        tolerance,
        f_values,
        total_f,
        noncompact_f,
        s_global,
        s_bound,
        s_bound_ok: s_global <= s_bound,
        torsion_flag,
        note: NOTE.to_string(),
    })
}

/// True when every root of the integer polynomial is a root of unity or zero.
pub fn torsion_test(global: &IntPoly) -> Result<bool> {
    kronecker_test(global)
}
