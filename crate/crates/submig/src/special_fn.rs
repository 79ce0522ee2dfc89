//! Real-argument Bessel functions of the first kind of orders 0–2 and complex
//! Hankel functions of the first kind of orders 0–1, as needed by the
//! fundamental solution, the forward kernels, and the closed-form structure
//! predictions.

use crate::error::{Error, Result};
use crate::scalar::{c, r, Cplx, Real};

/// Crossover below which `J₂` is evaluated by its power series instead of the
/// three-term recurrence (which would divide by a small argument).
const J2_SERIES_CROSSOVER: f64 = 0.01;

/// `J₂(z)` via the ascending power series, accurate to machine precision for
/// small `z` where the recurrence `2 J₁(z)/z − J₀(z)` would lose relative
/// accuracy.
fn j2_series<R: Real>(z: R) -> R {
    // J₂(z) = Σ_{m≥0} (−1)^m (z/2)^{2m+2} / (m! (m+2)!)
    let q = z * r::<R>(0.5);
    let q2 = q * q;
    let mut term = q2 * r::<R>(0.5); // m = 0: (z/2)^2 / (0! 2!)
    let mut acc = term;
    for m in 1..8 {
        let denom = r::<R>((m * (m + 2)) as f64);
        term = -term * q2 / denom;
        acc += term;
    }
    acc
}

/// Bessel function of the first kind `J_order(z)` for `order ∈ {0, 1, 2}`
/// and `z ≥ 0`.
pub fn bessel_j<R: Real>(order: u8, z: R) -> Result<R> {
    if !z.is_finite() {
        return Err(Error::Domain("bessel_j: non-finite argument".into()));
    }
    if z < R::zero() {
        return Err(Error::Domain(
            "bessel_j: negative argument (callers must pass |z|)".into(),
        ));
    }
    match order {
        0 => Ok(z.cyl_j0()),
        1 => Ok(z.cyl_j1()),
        2 => {
            if z < r::<R>(J2_SERIES_CROSSOVER) {
                Ok(j2_series(z))
            } else {
                Ok(z.cyl_j1() * r::<R>(2.0) / z - z.cyl_j0())
            }
        }
        _ => Err(Error::Domain(format!(
            "bessel_j: unsupported order {order} (only 0, 1, 2)"
        ))),
    }
}

/// Bessel function of the second kind `Y_order(z)` for `order ∈ {0, 1}`,
/// `z > 0`.
pub fn bessel_y<R: Real>(order: u8, z: R) -> Result<R> {
    if !z.is_finite() || z <= R::zero() {
        return Err(Error::Domain(
            "bessel_y: argument must be finite and positive".into(),
        ));
    }
    match order {
        0 => Ok(z.cyl_y0()),
        1 => Ok(z.cyl_y1()),
        _ => Err(Error::Domain(format!(
            "bessel_y: unsupported order {order} (only 0, 1)"
        ))),
    }
}

/// Hankel function of the first kind `H_order⁽¹⁾(z) = J_order(z) + i·Y_order(z)`
/// for `order ∈ {0, 1}` and `z > 0` (the logarithmic singularity at `z = 0`
/// is a domain error; scattering kernels only evaluate at distinct points).
pub fn hankel1<R: Real>(order: u8, z: R) -> Result<Cplx<R>> {
    if !z.is_finite() || z <= R::zero() {
        return Err(Error::Domain(
            "hankel1: argument must be finite and positive".into(),
        ));
    }
    Ok(c(bessel_j(order, z)?, bessel_y(order, z)?))
}

/// `J₀`, `J₁`, `J₂` evaluated at a common argument `z = k · distance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselTriple<R: Real> {
    /// `J₀(z)`
    pub j0: R,
    /// `J₁(z)`
    pub j1: R,
    /// `J₂(z)`
    pub j2: R,
}

impl<R: Real> BesselTriple<R> {
    /// Evaluate all three orders at `z ≥ 0`.
    pub fn at(z: R) -> Result<Self> {
        Ok(Self {
            j0: bessel_j(0, z)?,
            j1: bessel_j(1, z)?,
            j2: bessel_j(2, z)?,
        })
    }

    /// Residual of the three-term recurrence `J₀(z) + J₂(z) = (2/z) J₁(z)`.
    /// Zero at machine precision for consistent evaluations; the argument
    /// must be strictly positive for the recurrence to be defined.
    pub fn recurrence_residual(&self, z: R) -> R {
        (self.j0 + self.j2 - self.j1 * r::<R>(2.0) / z).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: `J_n(z) = (1/π) ∫_0^π cos(nτ − z sin τ) dτ`
    /// by trapezoidal quadrature over a full period (integrand is periodic).
    fn j_oracle(n: u8, z: f64) -> f64 {
        let m = 4096;
        let mut acc = 0.0;
        for j in 0..m {
            let tau = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            acc += (n as f64 * tau - z * tau.sin()).cos();
        }
        acc / m as f64
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j::<f64>(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j::<f64>(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j::<f64>(2, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_integral_representation_oracle() {
        for n in 0..=2u8 {
            for i in 0..=200 {
                let z = 0.5 * i as f64;
                let ours = bessel_j::<f64>(n, z).unwrap();
                assert_abs_diff_eq!(ours, j_oracle(n, z), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn first_j0_root_from_independent_bisection() {
        // Bracket the first positive root of J₀ using the oracle, then check
        // the library value vanishes there to the accuracy contract.
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if j_oracle(0, lo) * j_oracle(0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert_abs_diff_eq!(root, 2.404825557695773, epsilon = 1e-9);
        assert!(bessel_j::<f64>(0, root).unwrap().abs() < 1e-10);
    }

    #[test]
    fn recurrence_residual_small_over_sweep() {
        // log-spaced sweep over [1e-3, 100]
        for i in 0..=100 {
            let z = 1e-3 * (1e5_f64).powf(i as f64 / 100.0);
            let t = BesselTriple::<f64>::at(z).unwrap();
            assert!(
                t.recurrence_residual(z) <= 1e-9,
                "recurrence residual too large at z = {z}"
            );
        }
    }

    #[test]
    fn magnitudes_bounded_by_one() {
        for n in 0..=2u8 {
            for i in 0..=1000 {
                let z = 0.1 * i as f64;
                assert!(bessel_j::<f64>(n, z).unwrap().abs() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn j2_series_consistent_with_recurrence_at_crossover() {
        // Values straddling the crossover must agree to near machine epsilon.
        for &z in &[0.009_f64, 0.0099, 0.0101, 0.011] {
            let series = j2_series(z);
            let rec = 2.0 * libm::j1(z) / z - libm::j0(z);
            assert_abs_diff_eq!(series, rec, epsilon = 1e-14);
        }
    }

    #[test]
    fn hankel_real_part_is_bessel_j() {
        let z = 1.0_f64;
        let h = hankel1(0, z).unwrap();
        assert_abs_diff_eq!(h.re, bessel_j(0, z).unwrap(), epsilon = 1e-10);
        let h1 = hankel1(1, z).unwrap();
        assert_abs_diff_eq!(h1.re, bessel_j(1, z).unwrap(), epsilon = 1e-10);
    }

    #[test]
    fn hankel_large_argument_magnitude() {
        // |H₀⁽¹⁾(z)| ~ sqrt(2/(π z)) with relative error < 1e-3 at z = 50.
        let z = 50.0_f64;
        let h = hankel1::<f64>(0, z).unwrap();
        let asym = (2.0 / (std::f64::consts::PI * z)).sqrt();
        assert!((h.norm() - asym).abs() / asym < 1e-3);
    }

    #[test]
    fn wronskian_identity() {
        // J₁(z) Y₀(z) − J₀(z) Y₁(z) = 2/(π z) at z = 3.
        let z = 3.0_f64;
        let lhs = bessel_j::<f64>(1, z).unwrap() * bessel_y::<f64>(0, z).unwrap()
            - bessel_j::<f64>(0, z).unwrap() * bessel_y::<f64>(1, z).unwrap();
        assert_abs_diff_eq!(lhs, 2.0 / (std::f64::consts::PI * z), epsilon = 1e-9);
    }

    #[test]
    fn y_values_match_frozen_references() {
        // Reference values computed with mpmath (50 digits), rounded to f64.
        let cases: [(u8, f64, f64); 6] = [
            (0, 0.1, -1.5342386513503668),
            (0, 1.0, 0.08825696421567696),
            (0, 3.0, 0.3768500100127904),
            (1, 0.1, -6.4589510947020266),
            (1, 1.0, -0.7812128213002887),
            (1, 10.0, 0.24901542420695388),
        ];
        for (order, z, expect) in cases {
            assert_abs_diff_eq!(bessel_y::<f64>(order, z).unwrap(), expect, epsilon = 1e-8);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j::<f64>(0, f64::NAN).is_err());
        assert!(bessel_j::<f64>(0, -1.0).is_err());
        assert!(bessel_j::<f64>(3, 1.0).is_err());
        assert!(hankel1::<f64>(0, 0.0).is_err());
        assert!(hankel1::<f64>(0, -2.0).is_err());
        assert!(hankel1::<f64>(2, 1.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let z: f32 = 2.5;
        let t = BesselTriple::<f32>::at(z).unwrap();
        assert!((t.j0 - libm::j0(2.5) as f32).abs() < 1e-6);
        assert!(t.recurrence_residual(z) < 1e-6);
    }
}
