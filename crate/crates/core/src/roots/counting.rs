//! Exact root counts: Sturm sequences on the real line, the Cayley map for the
//! unit circle, and the Schur–Cohn recursion for the open unit disk.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intpoly::{signed_remainder_sequence, IntPoly};

fn sign(c: &BigInt) -> i8 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn var_pos_inf(seq: &[IntPoly]) -> usize {
    variations(seq.iter().map(|p| p.leading().map_or(0, sign)))
}

fn var_neg_inf(seq: &[IntPoly]) -> usize {
    variations(seq.iter().map(|p| {
        let s = p.leading().map_or(0, sign);
        if p.deg() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

fn var_at(seq: &[IntPoly], x: &BigInt) -> usize {
    variations(seq.iter().map(|p| sign(&p.eval_int(x))))
}

/// Cauchy index of `num/den` over the whole real line.
fn cauchy_index(num: &IntPoly, den: &IntPoly) -> i64 {
    let seq = signed_remainder_sequence(den, num);
    var_neg_inf(&seq) as i64 - var_pos_inf(&seq) as i64
}

fn sturm(p: &IntPoly) -> Vec<IntPoly> {
    signed_remainder_sequence(p, &p.derivative())
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &IntPoly) -> usize {
    if p.is_constant() {
        return 0;
    }
    let seq = sturm(p);
    var_neg_inf(&seq) - var_pos_inf(&seq)
}

/// Distinct real roots in `(1, ∞)` and in `(-∞, -1)` of a square-free `f`.
fn real_outside_squarefree(f: &IntPoly) -> (usize, usize) {
    let mut g = f.clone();
    for r in [1i64, -1] {
        let lin = IntPoly::from_i64s(&[-r, 1]);
        if let Some(q) = g.div_exact(&lin) {
            g = q;
        }
    }
    if g.is_constant() {
        return (0, 0);
    }
    let seq = sturm(&g);
    let one = BigInt::one();
    let above = var_at(&seq, &one) - var_pos_inf(&seq);
    let below = var_neg_inf(&seq) - var_at(&seq, &-one);
    (above, below)
}

/// Roots on the unit circle of a square-free `f`.
///
/// The Cayley map `x = (1 + it)/(1 - it)` sends the real line onto the circle
/// minus `-1`, so circle roots other than `-1` are the common real roots of the
/// real and imaginary parts of `(1 - it)^n f(x(t))`.
fn circle_count_squarefree(f: &IntPoly) -> usize {
    let n = f.deg();
    if n == 0 {
        return 0;
    }
    // Gaussian-integer polynomials as (re, im) pairs.
    type GPoly = (IntPoly, IntPoly);
    fn gmul(a: &GPoly, b: &GPoly) -> GPoly {
        (&(&a.0 * &b.0) - &(&a.1 * &b.1), &(&a.0 * &b.1) + &(&a.1 * &b.0))
    }
    let plus: GPoly = (IntPoly::one(), IntPoly::from_i64s(&[0, 1]));
    let minus: GPoly = (IntPoly::one(), IntPoly::from_i64s(&[0, -1]));
    let mut pow_plus = vec![(IntPoly::one(), IntPoly::zero())];
    let mut pow_minus = vec![(IntPoly::one(), IntPoly::zero())];
    for k in 1..=n {
        pow_plus.push(gmul(&pow_plus[k - 1], &plus));
        pow_minus.push(gmul(&pow_minus[k - 1], &minus));
    }
    let mut re = IntPoly::zero();
    let mut im = IntPoly::zero();
    for (k, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let term = gmul(&pow_plus[k], &pow_minus[n - k]);
        re = &re + &term.0.scale(a);
        im = &im + &term.1.scale(a);
    }
    let common = re.gcd(&im);
    let mut count = count_real_roots(&common);
    if f.eval_int(&BigInt::from(-1)).is_zero() {
        count += 1;
    }
    count
}

/// Roots in the open unit disk of `f`, which must have no root on the circle,
/// by the Cauchy index of the Cayley-transformed polynomial along the
/// imaginary axis.
fn cauchy_index_inside(f: &IntPoly) -> usize {
    let n = f.deg();
    if n == 0 {
        return 0;
    }
    // q(w) = (1 - w)^n f((1 + w)/(1 - w)); the disk maps to Re w < 0.
    let plus = IntPoly::from_i64s(&[1, 1]);
    let minus = IntPoly::from_i64s(&[1, -1]);
    let mut q = IntPoly::zero();
    for (k, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        q = &q + &(&plus.pow(k as u32) * &minus.pow((n - k) as u32)).scale(a);
    }
    // q(iy) = A(y) + i B(y)
    let mut a_part = vec![BigInt::zero(); n + 1];
    let mut b_part = vec![BigInt::zero(); n + 1];
    for (k, c) in q.coeffs().iter().enumerate() {
        match k % 4 {
            0 => a_part[k] += c,
            1 => b_part[k] += c,
            2 => a_part[k] -= c,
            _ => b_part[k] -= c,
        }
    }
    let a_poly = IntPoly::new(a_part);
    let b_poly = IntPoly::new(b_part);
    let left_minus_right = if n % 2 == 0 {
        -cauchy_index(&b_poly, &a_poly)
    } else {
        cauchy_index(&a_poly, &b_poly)
    };
    ((n as i64 + left_minus_right) / 2) as usize
}

/// Schur–Cohn count of roots in the open unit disk for `h` without roots on
/// the unit circle.
///
/// With `h*(z) = z^n h(1/z)` and `T h = h(0)·h - lc(h)·h*`, Rouché on the
/// circle gives `inside(h) = inside(Th)` when `|h(0)| > |lc(h)|` and
/// `inside(h) = n - inside(Th)` when `|h(0)| < |lc(h)|`. A step with
/// `|h(0)| = |lc(h)|` is degenerate and is finished by the Cauchy-index count.
pub(crate) fn schur_cohn_inside(h: &IntPoly) -> usize {
    let mut f = h.primitive_part();
    // inside(h) = offset + sign · inside(f)
    let mut offset: i64 = 0;
    let mut sgn: i64 = 1;
    loop {
        let n = f.deg();
        if n == 0 {
            return offset as usize;
        }
        let a0 = f.coeff(0);
        let an = f.leading().cloned().unwrap_or_default();
        let gamma = &a0 * &a0 - &an * &an;
        if gamma.is_zero() {
            return (offset + sgn * cauchy_index_inside(&f) as i64) as usize;
        }
        let t = &f.scale(&a0) - &f.reversal().scale(&an);
        if gamma.is_negative() {
            offset += sgn * n as i64;
            sgn = -sgn;
        }
        f = t.primitive_part();
    }
}

/// Exact location counts for a polynomial, with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct ExactCounts {
    pub degree: usize,
    pub inside: usize,
    pub on_circle: usize,
    pub outside: usize,
    /// Real roots in `(-∞, -1) ∪ (1, ∞)`.
    pub real_outside: usize,
    /// All real roots.
    pub real: usize,
}

/// Counts for a square-free polynomial.
pub(crate) fn squarefree_counts(f: &IntPoly) -> Result<ExactCounts> {
    let n = f.deg();
    let on = circle_count_squarefree(f);
    // Every circle root sits in the self-reciprocal part gcd(f, f*).
    let g = f.gcd(&f.reversal());
    let h = f.div_exact(&g).ok_or_else(|| {
        Error::Internal(format!("self-reciprocal part does not divide {f}"))
    })?;
    let g_rest = g.deg().checked_sub(on).ok_or_else(|| {
        Error::Internal(format!("circle count {on} exceeds self-reciprocal degree for {f}"))
    })?;
    if g_rest % 2 != 0 {
        return Err(Error::Internal(format!(
            "self-reciprocal part of {f} has an unpaired root off the circle"
        )));
    }
    let inside = g_rest / 2 + schur_cohn_inside(&h);
    let outside = n
        .checked_sub(inside + on)
        .ok_or_else(|| Error::Internal(format!("root counts exceed degree for {f}")))?;
    let (above, below) = real_outside_squarefree(f);
    Ok(ExactCounts {
        degree: n,
        inside,
        on_circle: on,
        outside,
        real_outside: above + below,
        real: count_real_roots(f),
    })
}

/// Counts with multiplicity, via the square-free decomposition.
pub fn exact_counts(p: &IntPoly) -> Result<ExactCounts> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut total = ExactCounts {
        degree: p.deg(),
        ..Default::default()
    };
    for (f, m) in p.squarefree_decomposition() {
        let c = squarefree_counts(&f)?;
        total.inside += m * c.inside;
        total.on_circle += m * c.on_circle;
        total.outside += m * c.outside;
        total.real_outside += m * c.real_outside;
        total.real += m * c.real;
    }
    if total.inside + total.on_circle + total.outside != total.degree {
        return Err(Error::Internal(format!("root counts do not add up for {p}")));
    }
    Ok(total)
}

/// Roots with `|z| < 1`, with multiplicity.
pub fn count_inside_unit_disk(p: &IntPoly) -> Result<usize> {
    Ok(exact_counts(p)?.inside)
}

/// Roots with `|z| = 1`, with multiplicity.
pub fn count_on_unit_circle(p: &IntPoly) -> Result<usize> {
    Ok(exact_counts(p)?.on_circle)
}

/// Real roots in `(-∞, -1) ∪ (1, ∞)`, with multiplicity.
pub fn count_real_outside(p: &IntPoly) -> Result<usize> {
    Ok(exact_counts(p)?.real_outside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn inside_examples() {
        assert_eq!(count_inside_unit_disk(&p(&[-1, -1, 1])).unwrap(), 1);
        assert_eq!(count_inside_unit_disk(&p(&[1, -1, 1])).unwrap(), 0);
        assert_eq!(count_inside_unit_disk(&lehmer_polynomial()).unwrap(), 1);
    }

    #[test]
    fn circle_examples() {
        assert_eq!(count_on_unit_circle(&p(&[1, -1, 1])).unwrap(), 2);
        assert_eq!(count_on_unit_circle(&p(&[1, -3, 1])).unwrap(), 0);
        assert_eq!(count_on_unit_circle(&lehmer_polynomial()).unwrap(), 8);
        assert_eq!(count_on_unit_circle(&p(&[1, 1])).unwrap(), 1);
        assert_eq!(count_on_unit_circle(&p(&[-1, 1])).unwrap(), 1);
    }

    #[test]
    fn real_outside_examples() {
        assert_eq!(count_real_outside(&p(&[1, -3, 1])).unwrap(), 1);
        assert_eq!(count_real_outside(&p(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(count_real_outside(&lehmer_polynomial()).unwrap(), 1);
        // (x - 2)(x + 3)(x - 1)
        let f = &(&p(&[-2, 1]) * &p(&[3, 1])) * &p(&[-1, 1]);
        assert_eq!(count_real_outside(&f).unwrap(), 2);
    }

    #[test]
    fn multiplicities_are_counted() {
        let f = &p(&[1, 1, 1]).pow(2) * &p(&[-1, -1, 1]).pow(3);
        let c = exact_counts(&f).unwrap();
        assert_eq!(c.on_circle, 4);
        assert_eq!(c.outside, 3);
        assert_eq!(c.inside, 3);
        assert_eq!(c.real_outside, 3);
    }

    #[test]
    fn zero_root_is_inside() {
        let f = p(&[0, 0, -2, 1]);
        let c = exact_counts(&f).unwrap();
        assert_eq!((c.inside, c.on_circle, c.outside), (2, 0, 1));
    }

    #[test]
    fn degenerate_schur_step_uses_cauchy_index() {
        // (2x - 1)(x - 2) = 2x² - 5x + 2 has |a0| = |an|
        let f = p(&[2, -5, 2]);
        assert_eq!(schur_cohn_inside(&f), 1);
        assert_eq!(cauchy_index_inside(&f), 1);
        // (3x - 1)(x + 3)(x - 2)·x-free: |a0| = 6, |an| = 3
        let g = &(&p(&[-1, 3]) * &p(&[3, 1])) * &p(&[-2, 1]);
        assert_eq!(schur_cohn_inside(&g), 1);
        assert_eq!(cauchy_index_inside(&g), 1);
    }

    #[test]
    fn schur_cohn_agrees_with_cauchy_index() {
        // sweep of small non-reciprocal polynomials without circle roots
        let mut checked = 0;
        for a0 in -3i64..=3 {
            for a1 in -3i64..=3 {
                for a2 in -3i64..=3 {
                    for a3 in [1i64, 2, -3] {
                        let f = p(&[a0, a1, a2, a3]);
                        if !f.is_squarefree() || circle_count_squarefree(&f) != 0 {
                            continue;
                        }
                        let sc = schur_cohn_inside(&f);
                        let ci = cauchy_index_inside(&f);
                        assert_eq!(sc, ci, "{f}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn sturm_invariant_under_positive_scaling() {
        let f = lehmer_polynomial();
        let g = f.scale(&BigInt::from(7));
        assert_eq!(count_real_roots(&f), count_real_roots(&g));
        assert_eq!(exact_counts(&f).unwrap(), exact_counts(&g).unwrap());
    }
}
