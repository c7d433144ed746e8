//! Certified complex roots and exact location counts.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;

pub mod counting;
pub mod numeric;

pub use counting::{
    count_inside_unit_disk, count_on_unit_circle, count_real_outside, count_real_roots, exact_counts,
    ExactCounts,
};

/// Default radius target for [`refine_roots`].
pub const DEFAULT_PRECISION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Location {
    InsideDisk,
    OnCircle,
    OutsideDisk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realness {
    Real,
    NonRealUpper,
    NonRealLower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedRoot {
    pub approx: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
    pub location: Location,
    pub realness: Realness,
}

impl CertifiedRoot {
    pub fn modulus(&self) -> f64 {
        self.approx.norm()
    }
}

/// Certified roots of a polynomial together with the exact counts.
///
/// Roots are ordered: real roots outside the disk, then the non-real roots
/// outside in the upper half plane followed by their conjugates in the same
/// order, then the circle roots, then the roots inside the disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootProfile {
    pub poly: IntPoly,
    pub roots: Vec<CertifiedRoot>,
    pub degree: usize,
    /// Roots with `|z| > 1`, with multiplicity.
    pub s: usize,
    /// Real roots with `|z| > 1`, with multiplicity.
    pub r: usize,
    pub on_circle: usize,
    pub inside: usize,
    pub squarefree: bool,
}

impl RootProfile {
    pub fn outside_roots(&self) -> impl Iterator<Item = &CertifiedRoot> {
        self.roots
            .iter()
            .filter(|r| r.location == Location::OutsideDisk)
    }

    pub fn real_root_count(&self) -> usize {
        self.roots
            .iter()
            .filter(|r| r.realness == Realness::Real)
            .map(|r| r.multiplicity)
            .sum()
    }

    pub fn is_totally_real(&self) -> bool {
        self.real_root_count() == self.degree
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }
}

fn realness_of(z: Complex64) -> Realness {
    match z.im.partial_cmp(&0.0) {
        Some(Ordering::Greater) => Realness::NonRealUpper,
        Some(Ordering::Less) => Realness::NonRealLower,
        _ => Realness::Real,
    }
}

fn location_rank(l: Location) -> u8 {
    match l {
        Location::OutsideDisk => 0,
        Location::OnCircle => 1,
        Location::InsideDisk => 2,
    }
}

fn realness_rank(r: Realness) -> u8 {
    match r {
        Realness::Real => 0,
        Realness::NonRealUpper => 1,
        Realness::NonRealLower => 2,
    }
}

/// Sort key within one location group: reals by decreasing modulus, then
/// upper roots by argument, then lower roots in the order of their conjugates.
fn ordering(a: &CertifiedRoot, b: &CertifiedRoot) -> Ordering {
    location_rank(a.location)
        .cmp(&location_rank(b.location))
        .then(realness_rank(a.realness).cmp(&realness_rank(b.realness)))
        .then_with(|| match a.realness {
            Realness::Real => b
                .approx
                .norm()
                .total_cmp(&a.approx.norm())
                .then(b.approx.re.total_cmp(&a.approx.re)),
            Realness::NonRealUpper => a
                .approx
                .arg()
                .total_cmp(&b.approx.arg())
                .then(b.approx.norm().total_cmp(&a.approx.norm())),
            Realness::NonRealLower => b
                .approx
                .arg()
                .total_cmp(&a.approx.arg())
                .then(b.approx.norm().total_cmp(&a.approx.norm())),
        })
}

fn certification_error(p: &IntPoly, achieved: f64, requested: f64) -> Error {
    Error::Certification {
        poly: p.clone(),
        achieved,
        requested,
    }
}

/// Certified roots of `p` with exact location counts attached.
///
/// Each square-free factor is solved separately; the exact counts decide
/// which approximations lie outside, on, or inside the circle (by modulus
/// rank), and the disks are then checked against that assignment.
pub fn refine_roots(p: &IntPoly, precision: f64) -> Result<RootProfile> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(precision > 0.0) {
        return Err(Error::InvalidArgument("precision must be positive".into()));
    }
    let mut roots = Vec::new();
    let mut totals = ExactCounts {
        degree: p.deg(),
        ..Default::default()
    };
    let factors = p.squarefree_decomposition();
    let squarefree = factors.iter().all(|(_, m)| *m == 1);
    for (f, mult) in &factors {
        let counts = counting::squarefree_counts(f)?;
        let disks = numeric::certify_squarefree(f, precision)?;
        let mut idx: Vec<usize> = (0..disks.len()).collect();
        idx.sort_by(|&a, &b| disks[b].center.norm().total_cmp(&disks[a].center.norm()));
        let slack = 8.0 * f64::EPSILON;
        let mut real_outside = 0;
        for (rank, &i) in idx.iter().enumerate() {
            let d = disks[i];
            let m = d.center.norm();
            let location = if rank < counts.outside {
                Location::OutsideDisk
            } else if rank < counts.outside + counts.on_circle {
                Location::OnCircle
            } else {
                Location::InsideDisk
            };
            let consistent = match location {
                Location::OutsideDisk => m + d.radius > 1.0 - slack,
                Location::OnCircle => m - d.radius <= 1.0 + slack && m + d.radius >= 1.0 - slack,
                Location::InsideDisk => m - d.radius < 1.0 + slack,
            };
            if !consistent {
                return Err(certification_error(f, d.radius, precision));
            }
            let realness = realness_of(d.center);
            if location == Location::OutsideDisk && realness == Realness::Real {
                real_outside += 1;
            }
            roots.push(CertifiedRoot {
                approx: d.center,
                radius: d.radius,
                multiplicity: *mult,
                location,
                realness,
            });
        }
        if real_outside != counts.real_outside {
            return Err(certification_error(f, f64::NAN, precision));
        }
        totals.inside += mult * counts.inside;
        totals.on_circle += mult * counts.on_circle;
        totals.outside += mult * counts.outside;
        totals.real_outside += mult * counts.real_outside;
    }
    roots.sort_by(ordering);
    Ok(RootProfile {
        poly: p.clone(),
        roots,
        degree: p.deg(),
        s: totals.outside,
        r: totals.real_outside,
        on_circle: totals.on_circle,
        inside: totals.inside,
        squarefree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::lehmer_polynomial;
    use proptest::prelude::*;

    #[test]
    fn quadratic_profile() {
        let prof = refine_roots(&IntPoly::from_i64s(&[1, -3, 1]), 1e-12).unwrap();
        assert_eq!((prof.s, prof.r, prof.on_circle, prof.inside), (1, 1, 0, 1));
        assert!((prof.roots[0].approx.re - 2.618_033_988_749_895).abs() < 1e-12);
        assert!((prof.roots[1].approx.re - 0.381_966_011_250_105).abs() < 1e-12);
        assert!(prof.max_radius() < 1e-12);
    }

    #[test]
    fn salem_quartic_largest_root() {
        let prof = refine_roots(&IntPoly::from_i64s(&[1, -1, -1, -1, 1]), 1e-12).unwrap();
        assert!((prof.roots[0].approx.re - 1.722_083_805_739_043).abs() < 1e-9);
        assert_eq!(prof.roots[0].location, Location::OutsideDisk);
    }

    #[test]
    fn lehmer_profile_ordering() {
        let prof = refine_roots(&lehmer_polynomial(), DEFAULT_PRECISION).unwrap();
        assert_eq!((prof.s, prof.r, prof.on_circle, prof.inside), (1, 1, 8, 1));
        assert!((prof.roots[0].approx.re - 1.176_280_818).abs() < 1e-8);
        assert_eq!(prof.roots[9].location, Location::InsideDisk);
        for r in &prof.roots[1..9] {
            assert_eq!(r.location, Location::OnCircle);
        }
        // upper circle roots then their conjugates
        for i in 0..4 {
            assert_eq!(prof.roots[1 + i].approx, prof.roots[5 + i].approx.conj());
        }
    }

    #[test]
    fn repeated_roots_carry_multiplicity() {
        let p = &IntPoly::from_i64s(&[1, 1, 1]).pow(2) * &IntPoly::from_i64s(&[-2, 1]);
        let prof = refine_roots(&p, 1e-12).unwrap();
        assert!(!prof.squarefree);
        assert_eq!(prof.roots.len(), 3);
        assert_eq!(prof.on_circle, 4);
        assert_eq!(prof.s, 1);
    }

    fn random_poly() -> impl Strategy<Value = IntPoly> {
        (1usize..=10, prop::collection::vec(-2i64..=2, 10), prop::bool::ANY).prop_map(
            |(deg, c, pal)| {
                let mut v: Vec<i64> = c[..deg].to_vec();
                v.push(1);
                if pal {
                    let n = v.len();
                    for i in 0..n / 2 {
                        v[i] = v[n - 1 - i];
                    }
                }
                IntPoly::from_i64s(&v)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn counts_partition_degree_and_match_numeric(p in random_poly()) {
            let prof = refine_roots(&p, 1e-9).unwrap();
            prop_assert_eq!(prof.inside + prof.on_circle + prof.s, prof.degree);
            prop_assert!(prof.r <= prof.s);
            let total: usize = prof.roots.iter().map(|r| r.multiplicity).sum();
            prop_assert_eq!(total, prof.degree);
            for root in &prof.roots {
                let m = root.approx.norm();
                match root.location {
                    Location::OutsideDisk => prop_assert!(m + root.radius > 1.0),
                    Location::InsideDisk => prop_assert!(m - root.radius < 1.0),
                    Location::OnCircle => prop_assert!((m - 1.0).abs() <= root.radius + 1e-12),
                }
            }
        }

        #[test]
        fn conjugates_pair_up(p in random_poly()) {
            let prof = refine_roots(&p, 1e-9).unwrap();
            let upper: Vec<_> = prof.roots.iter().filter(|r| r.realness == Realness::NonRealUpper).collect();
            let lower: Vec<_> = prof.roots.iter().filter(|r| r.realness == Realness::NonRealLower).collect();
            prop_assert_eq!(upper.len(), lower.len());
            for u in &upper {
                prop_assert!(lower.iter().any(|l| l.approx == u.approx.conj() && l.radius == u.radius));
            }
        }

        #[test]
        fn palindromic_mirror(p in random_poly()) {
            prop_assume!(p.is_palindromic().unwrap());
            let prof = refine_roots(&p, 1e-9).unwrap();
            prop_assert_eq!(prof.inside, prof.s);
            for out in prof.roots.iter().filter(|r| r.location == Location::OutsideDisk) {
                let inv = out.approx.inv();
                let inv_r = out.radius / (out.approx.norm() * (out.approx.norm() - out.radius));
                prop_assert!(prof.roots.iter().any(|r| r.location == Location::InsideDisk
                    && (r.approx - inv).norm() <= r.radius + inv_r + 1e-12));
            }
        }
    }
}
