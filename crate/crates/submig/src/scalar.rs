//! Scalar abstraction: every numerical routine in this crate is generic over a
//! real floating-point type implementing [`Real`]. Concrete `f64` aliases for
//! the main domain types live at the crate root.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type usable throughout the crate (`f32` or `f64`).
///
/// Extends [`nalgebra::RealField`] with the cylinder Bessel functions needed
/// by the scattering kernels. The Bessel evaluations are backed by `libm`
/// (correctly rounded within a few ulp); accuracy contracts are asserted by
/// the test suite, not assumed.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {
    /// Bessel function of the first kind, order 0.
    fn cyl_j0(self) -> Self;
    /// Bessel function of the first kind, order 1.
    fn cyl_j1(self) -> Self;
    /// Bessel function of the second kind, order 0.
    fn cyl_y0(self) -> Self;
    /// Bessel function of the second kind, order 1.
    fn cyl_y1(self) -> Self;
}

impl Real for f64 {
    #[inline]
    fn cyl_j0(self) -> Self {
        libm::j0(self)
    }
    #[inline]
    fn cyl_j1(self) -> Self {
        libm::j1(self)
    }
    #[inline]
    fn cyl_y0(self) -> Self {
        libm::y0(self)
    }
    #[inline]
    fn cyl_y1(self) -> Self {
        libm::y1(self)
    }
}

impl Real for f32 {
    #[inline]
    fn cyl_j0(self) -> Self {
        libm::j0f(self)
    }
    #[inline]
    fn cyl_j1(self) -> Self {
        libm::j1f(self)
    }
    #[inline]
    fn cyl_y0(self) -> Self {
        libm::y0f(self)
    }
    #[inline]
    fn cyl_y1(self) -> Self {
        libm::y1f(self)
    }
}

/// Convert an `f64` constant into the generic scalar type.
///
/// Panics only if the constant is not representable, which cannot happen for
/// the finite literals used in this crate.
#[inline]
pub fn r<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("finite f64 constant must convert to the scalar type")
}

/// Complex number over the generic scalar.
pub type Cplx<R> = Complex<R>;

/// Unit-modulus complex exponential `exp(i*phi)`.
#[inline]
pub fn cis<R: Real>(phi: R) -> Cplx<R> {
    Complex::new(phi.cos(), phi.sin())
}

/// Complex number from real/imaginary parts.
#[inline]
pub fn c<R: Real>(re: R, im: R) -> Cplx<R> {
    Complex::new(re, im)
}

/// Purely real complex number.
#[inline]
pub fn cr<R: Real>(re: R) -> Cplx<R> {
    Complex::new(re, R::zero())
}

/// Modulus of a complex number over the generic scalar.
///
/// (`Complex::norm` is only available when the component type implements
/// `num_traits::Float`, which `RealField` does not guarantee.)
#[inline]
pub fn cabs<R: Real>(z: Cplx<R>) -> R {
    (z.re * z.re + z.im * z.im).sqrt()
}
