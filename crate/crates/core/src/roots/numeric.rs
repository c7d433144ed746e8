//! Floating-point root approximation with a posteriori inclusion disks.
//!
//! Approximations come from the Aberth–Ehrlich iteration. Each approximation
//! `zᵢ` of a degree-`n` polynomial `p` gets the Weierstrass correction
//! `Wᵢ = p(zᵢ) / (lc(p) Π_{j≠i} (zᵢ - zⱼ))`; the disks `D(zᵢ, n|Wᵢ|)` cover all
//! roots and every connected component of `k` disks holds exactly `k` roots
//! (Braess–Hadeler inclusion). When the disks are pairwise disjoint each one
//! isolates a single root. Rounding in the evaluation of `p(zᵢ)` is bounded
//! with a running Horner error bound and added to `|p(zᵢ)|` before the radius
//! is formed, so the radii stay valid under floating-point evaluation.

use num_complex::Complex64;

use super::counting::count_real_roots;
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;

const EPS: f64 = f64::EPSILON / 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a polynomial with complex coefficients (constant first) by
/// Aberth–Ehrlich iteration. Best effort: no certification here.
pub fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    // Roots at zero are split off so the starting radius is meaningful.
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = n - zeros;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 0 {
        return roots;
    }
    let lead = c[m];
    let r0 = (c[0].norm() / lead.norm()).powf(1.0 / m as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4;
            Complex64::from_polar(r0, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..m {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 4.0 * EPS {
            break;
        }
    }
    roots.extend(z);
    roots
}

fn newton_polish(coeffs: &[Complex64], z: Complex64, steps: usize) -> Complex64 {
    let mut z = z;
    for _ in 0..steps {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        if !next.is_finite() {
            break;
        }
        z = next;
    }
    z
}

/// Upper bound for `|p(z)|` including rounding in coefficient conversion and
/// Horner evaluation.
fn eval_upper(coeffs: &[Complex64], coeff_err: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let n = coeffs.len() as f64;
    let az = z.norm();
    let mut abs_sum = 0.0;
    let mut conv = 0.0;
    let mut zk = 1.0;
    for (c, e) in coeffs.iter().zip(coeff_err) {
        abs_sum += c.norm() * zk;
        conv += e * zk;
        zk *= az;
    }
    let gamma = 8.0 * n * EPS / (1.0 - 8.0 * n * EPS);
    (p.norm() + gamma * abs_sum + conv) * (1.0 + 4.0 * EPS)
}

/// Inclusion radii `n |Wᵢ|` for the given approximations.
pub fn inclusion_radii(coeffs: &[Complex64], coeff_err: &[f64], z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let lead = coeffs[n].norm() - coeff_err[n];
    let slack = 1.0 + 8.0 * (n as f64 + 2.0) * EPS;
    (0..n)
        .map(|i| {
            let num = eval_upper(coeffs, coeff_err, z[i]);
            let mut den = lead.max(0.0);
            for j in 0..n {
                if j != i {
                    den *= (z[i] - z[j]).norm();
                }
            }
            den /= slack;
            if den <= 0.0 {
                f64::INFINITY
            } else {
                n as f64 * num / den * slack
            }
        })
        .collect()
}

fn disjoint(disks: &[Disk]) -> bool {
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let gap = (disks[i].center - disks[j].center).norm();
            if gap <= (disks[i].radius + disks[j].radius) * (1.0 + 4.0 * EPS) {
                return false;
            }
        }
    }
    true
}

fn int_coeffs(p: &IntPoly) -> (Vec<Complex64>, Vec<f64>) {
    let f = p.to_f64s();
    let err = f.iter().map(|c| c.abs() * EPS).collect();
    (f.iter().map(|&c| Complex64::new(c, 0.0)).collect(), err)
}

/// Isolating disks for every root of a square-free integer polynomial.
///
/// Real roots have centers on the real axis and non-real roots come in exact
/// conjugate pairs with equal radii; the number of real roots is fixed by a
/// Sturm count, and realness is then certified by the disk geometry.
pub fn certify_squarefree(p: &IntPoly, precision: f64) -> Result<Vec<Disk>> {
    let n = p.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (coeffs, coeff_err) = int_coeffs(p);
    let real_count = count_real_roots(p);
    let mut approx = aberth(&coeffs);

    approx.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let mut roots: Vec<Complex64> = Vec::with_capacity(n);
    for z in &approx[..real_count] {
        let r = newton_polish(&coeffs, Complex64::new(z.re, 0.0), 4);
        roots.push(Complex64::new(r.re, 0.0));
    }
    let mut rest: Vec<Complex64> = approx[real_count..].to_vec();
    rest.sort_by(|a, b| b.im.total_cmp(&a.im));
    let pairs = rest.len() / 2;
    for z in rest.iter().take(pairs) {
        let zu = Complex64::new(z.re, z.im.abs());
        let r = newton_polish(&coeffs, zu, 4);
        let r = Complex64::new(r.re, r.im.abs());
        roots.push(r);
        roots.push(r.conj());
    }
    if roots.len() != n {
        return Err(Error::Certification {
            poly: p.clone(),
            achieved: f64::INFINITY,
            requested: precision,
        });
    }

    let radii = inclusion_radii(&coeffs, &coeff_err, &roots);
    let mut disks: Vec<Disk> = roots
        .iter()
        .zip(&radii)
        .map(|(&c, &r)| Disk { center: c, radius: r })
        .collect();
    // Conjugate partners share the larger radius.
    let mut i = real_count;
    while i + 1 < n {
        let r = disks[i].radius.max(disks[i + 1].radius);
        disks[i].radius = r;
        disks[i + 1].radius = r;
        i += 2;
    }

    let achieved = disks.iter().map(|d| d.radius).fold(0.0, f64::max);
    let nonreal_ok = disks[real_count..]
        .iter()
        .all(|d| d.center.im.abs() > d.radius);
    if !achieved.is_finite() || !disjoint(&disks) || !nonreal_ok || achieved > precision {
        return Err(Error::Certification {
            poly: p.clone(),
            achieved,
            requested: precision,
        });
    }
    Ok(disks)
}

/// Roots of a complex-coefficient polynomial with first-order inclusion radii.
/// The coefficients are taken as exact; `coeff_err` widens the radii.
pub fn complex_roots(coeffs: &[Complex64], coeff_err: &[f64]) -> Vec<Disk> {
    let mut c = coeffs.to_vec();
    let mut e = coeff_err.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
        e.pop();
    }
    let z: Vec<Complex64> = aberth(&c)
        .into_iter()
        .map(|z| newton_polish(&c, z, 3))
        .collect();
    if z.is_empty() {
        return Vec::new();
    }
    let radii = inclusion_radii(&c, &e, &z);
    z.into_iter()
        .zip(radii)
        .map(|(center, radius)| Disk { center, radius })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;

    #[test]
    fn quadratic_to_high_precision() {
        let disks = certify_squarefree(&IntPoly::from_i64s(&[1, -3, 1]), 1e-12).unwrap();
        let mut re: Vec<f64> = disks.iter().map(|d| d.center.re).collect();
        re.sort_by(f64::total_cmp);
        let s5 = 5f64.sqrt();
        assert!((re[1] - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert!((re[0] - (3.0 - s5) / 2.0).abs() < 1e-12);
        assert!(disks.iter().all(|d| d.radius < 1e-12));
    }

    #[test]
    fn lehmer_roots_isolated() {
        let disks = certify_squarefree(&lehmer_polynomial(), 1e-12).unwrap();
        assert_eq!(disks.len(), 10);
        let max = disks.iter().map(|d| d.center.norm()).fold(0.0, f64::max);
        assert!((max - 1.176_280_818_259_917).abs() < 1e-12);
    }

    #[test]
    fn radii_contain_true_roots() {
        // roots ±i, ±2
        let p = IntPoly::from_i64s(&[-4, 0, -3, 0, 1]);
        let disks = certify_squarefree(&p, 1e-10).unwrap();
        for t in [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-2.0, 0.0),
        ] {
            assert!(disks.iter().any(|d| (d.center - t).norm() <= d.radius.max(1e-300) + 1e-300 || (d.center - t).norm() < 1e-15));
        }
    }

    #[test]
    fn roots_at_zero_are_found() {
        let z = aberth(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let mut v: Vec<f64> = z.iter().map(|c| c.re).collect();
        v.sort_by(f64::total_cmp);
        assert!(v[0].abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-14);
    }
}
