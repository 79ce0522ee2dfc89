//! Shared numerical primitives: periodic trapezoidal quadrature, adaptive
//! Gauss–Kronrod quadrature, and trigonometric interpolation with spectral
//! differentiation for periodic samples.

use crate::error::{Error, Result};
use crate::scalar::{c, r, Cplx, Real};

/// Trapezoidal rule for a `2π`-periodic integrand over one full period.
///
/// For smooth periodic integrands the composite trapezoidal rule converges
/// spectrally, which makes it the quadrature of choice for all unit-circle
/// integrals in this crate.
pub fn periodic_trapezoid<R: Real>(n: usize, mut f: impl FnMut(R) -> Cplx<R>) -> Cplx<R> {
    let h = R::two_pi() / r::<R>(n as f64);
    let mut acc = c(R::zero(), R::zero());
    for j in 0..n {
        acc += f(h * r::<R>(j as f64));
    }
    acc * c(h, R::zero())
}

/// Real-valued variant of [`periodic_trapezoid`].
pub fn periodic_trapezoid_real<R: Real>(n: usize, mut f: impl FnMut(R) -> R) -> R {
    let h = R::two_pi() / r::<R>(n as f64);
    let mut acc = R::zero();
    for j in 0..n {
        acc += f(h * r::<R>(j as f64));
    }
    acc * h
}

// 7-point Gauss / 15-point Kronrod node and weight pair on [-1, 1].
// Standard values; validated against polynomial exactness in the unit tests.
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod panel on `[a, b]`: returns `(kronrod, |kronrod - gauss|)`.
fn gk15_panel<R: Real>(f: &mut impl FnMut(R) -> R, a: R, b: R) -> (R, R) {
    let half = (b - a) * r::<R>(0.5);
    let mid = (a + b) * r::<R>(0.5);
    let mut kronrod = R::zero();
    let mut gauss = R::zero();
    for (i, (&x, &wk)) in GK_NODES.iter().zip(KRONROD_WEIGHTS.iter()).enumerate() {
        let xr = r::<R>(x);
        let (fp, fm) = if x == 0.0 {
            let v = f(mid);
            (v, R::zero())
        } else {
            (f(mid + half * xr), f(mid - half * xr))
        };
        let pair = fp + fm;
        kronrod += r::<R>(wk) * pair;
        // Odd-indexed Kronrod nodes coincide with the embedded Gauss rule.
        if i % 2 == 1 {
            let wg = GAUSS_WEIGHTS[i / 2];
            gauss += r::<R>(wg) * pair;
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss–Kronrod quadrature of a real integrand on `[a, b]`.
///
/// Recursively bisects panels until the embedded error estimate meets the
/// absolute tolerance, distributing the budget proportionally to panel width.
pub fn adaptive_gauss<R: Real>(
    mut f: impl FnMut(R) -> R,
    a: R,
    b: R,
    tol: R,
) -> Result<R> {
    fn recurse<R: Real>(
        f: &mut impl FnMut(R) -> R,
        a: R,
        b: R,
        tol: R,
        depth: usize,
    ) -> Result<R> {
        if depth > 60 {
            return Err(Error::Numerical(
                "adaptive quadrature exceeded maximum recursion depth".into(),
            ));
        }
        let (value, err) = gk15_panel(f, a, b);
        if err <= tol {
            return Ok(value);
        }
        let mid = (a + b) * r::<R>(0.5);
        let half_tol = tol * r::<R>(0.5);
        Ok(recurse(f, a, mid, half_tol, depth + 1)? + recurse(f, mid, b, half_tol, depth + 1)?)
    }
    recurse(&mut f, a, b, tol, 0)
}

/// Trigonometric interpolant of a complex `2π`-periodic function sampled on
/// the equispaced grid `t_j = j*π/n`, `j = 0..2n`.
///
/// Stores real-form coefficients `a_m` (cosine) and `b_m` (sine) so the
/// interpolant is `a_0 + Σ_{m=1}^{n} a_m cos(mt) + b_m sin(mt)`; its exact
/// derivative is evaluated at arbitrary points ("spectral differentiation").
pub struct TrigInterp<R: Real> {
    cos_coeffs: Vec<Cplx<R>>,
    sin_coeffs: Vec<Cplx<R>>,
}

impl<R: Real> TrigInterp<R> {
    /// Build the interpolant from `2n` equispaced samples over `[0, 2π)`.
    pub fn from_samples(values: &[Cplx<R>]) -> Result<Self> {
        let len = values.len();
        if len < 4 || len % 2 != 0 {
            return Err(Error::Numerical(
                "trigonometric interpolation needs an even sample count >= 4".into(),
            ));
        }
        let n = len / 2;
        let scale = r::<R>(2.0 / len as f64);
        let h = R::pi() / r::<R>(n as f64);
        let mut cos_coeffs = Vec::with_capacity(n + 1);
        let mut sin_coeffs = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mr = r::<R>(m as f64);
            let mut ac = c(R::zero(), R::zero());
            let mut bc = c(R::zero(), R::zero());
            for (j, v) in values.iter().enumerate() {
                let t = h * r::<R>(j as f64);
                let arg = mr * t;
                ac += *v * c(arg.cos(), R::zero());
                bc += *v * c(arg.sin(), R::zero());
            }
            ac *= c(scale, R::zero());
            bc *= c(scale, R::zero());
            if m == 0 || m == n {
                ac *= c(r::<R>(0.5), R::zero());
            }
            cos_coeffs.push(ac);
            sin_coeffs.push(bc);
        }
        Ok(Self {
            cos_coeffs,
            sin_coeffs,
        })
    }

    /// Evaluate the interpolant at `t`.
    pub fn value_at(&self, t: R) -> Cplx<R> {
        let mut acc = self.cos_coeffs[0];
        for m in 1..self.cos_coeffs.len() {
            let mr = r::<R>(m as f64);
            let arg = mr * t;
            acc += self.cos_coeffs[m] * c(arg.cos(), R::zero())
                + self.sin_coeffs[m] * c(arg.sin(), R::zero());
        }
        acc
    }

    /// Evaluate the derivative of the interpolant at `t`.
    pub fn derivative_at(&self, t: R) -> Cplx<R> {
        let mut acc = c(R::zero(), R::zero());
        for m in 1..self.cos_coeffs.len() {
            let mr = r::<R>(m as f64);
            let arg = mr * t;
            acc += self.cos_coeffs[m] * c(-mr * arg.sin(), R::zero())
                + self.sin_coeffs[m] * c(mr * arg.cos(), R::zero());
        }
        acc
    }
}
