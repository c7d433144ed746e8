//! Salem certification against a classifier built from numeric roots.

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use lehmer_core::salem::{certify, SalemKind};
use lehmer_core::IntPoly;

fn roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..3000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Salem: one real root above 1, its inverse, the rest on the circle and none
/// of them roots of unity. Any proper factor of such a polynomial would have
/// all roots on the circle and hence be cyclotomic, so this also decides
/// irreducibility.
fn oracle_is_salem(p: &IntPoly) -> bool {
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap()).collect();
    if c[0] == 0.0 || c.len() < 5 {
        return false;
    }
    let rev: Vec<f64> = c.iter().rev().copied().collect();
    if rev != c {
        return false;
    }
    let z = roots(&c);
    let outside: Vec<&Complex64> = z.iter().filter(|w| w.norm() > 1.0 + 1e-6).collect();
    let circle: Vec<&Complex64> = z.iter().filter(|w| (w.norm() - 1.0).abs() <= 1e-6).collect();
    if outside.len() != 1 || outside[0].re <= 0.0 || outside[0].im.abs() > 1e-6 || circle.len() != c.len() - 3 {
        return false;
    }
    !circle
        .iter()
        .any(|w| (1..=60).any(|n| (w.powu(n) - Complex64::one()).norm() < 1e-6))
}

#[test]
fn palindromic_box_matches_oracle() {
    let mut salem = 0;
    for half in 2..=4usize {
        let d = 2 * half;
        for idx in 0..3usize.pow(half as u32) {
            let mut c = vec![0i64; d + 1];
            c[0] = 1;
            c[d] = 1;
            let mut k = idx;
            for i in 1..=half {
                let v = (k % 3) as i64 - 1;
                k /= 3;
                c[i] = v;
                c[d - i] = v;
            }
            let p = IntPoly::from_i64s(&c);
            let cert = certify(&p).unwrap();
            let want = oracle_is_salem(&p);
            assert_eq!(cert.kind == SalemKind::Salem, want, "{p}");
            salem += want as usize;
        }
    }
    assert!(salem >= 3);
}
