//! Subspace-migration imaging of sound-hard arcs from multi-static far-field
//! data, with closed-form Bessel-function predictions of the imaging function.
//!
//! # Pipeline
//!
//! 1. [`forward`] — boundary-integral (or Kirchhoff surrogate) solution of
//!    the sound-hard scattering problem and its far-field pattern.
//! 2. [`msr`] — assembly of the multi-static response matrix over equispaced
//!    incident/observation directions, plus calibrated additive noise.
//! 3. [`spectral`] — SVD and signal-subspace rank selection.
//! 4. [`imaging`] — the subspace-migration imaging function on a grid, for
//!    several test-vector weighting schemes.
//! 5. [`analytic`] — closed-form Bessel predictions of the imaging function,
//!    adjudicated against two independent brute-force oracles, and
//!    map-vs-prediction comparison reports.
//! 6. [`experiment`] — config-driven experiment runner and identity sweep
//!    behind the `submig` CLI.
//!
//! All numerical code is generic over the scalar type through [`Real`]
//! (instantiable at `f32` or `f64`); the `*64` aliases below fix the default
//! double-precision instantiation used by the CLI and the experiment layer.

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod forward;
pub mod geometry;
pub mod imaging;
pub mod msr;
pub mod numeric;
pub mod rng;
pub mod scalar;
pub mod special_fn;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex scalar used by the default double-precision aliases.
pub type Cplx64 = scalar::Cplx<f64>;
/// Default double-precision arc.
pub type Arc64 = geometry::Arc<f64>;
/// Default double-precision arc point sample.
pub type ArcSample64 = geometry::ArcSample<f64>;
/// Default double-precision wave context.
pub type WaveContext64 = forward::WaveContext<f64>;
/// Default double-precision direction set.
pub type DirectionSet64 = msr::DirectionSet<f64>;
/// Default double-precision multi-static response matrix.
pub type MsrMatrix64 = msr::MsrMatrix<f64>;
/// Default double-precision singular-value basis.
pub type SvdBasis64 = spectral::SvdBasis<f64>;
/// Default double-precision rank policy.
pub type RankPolicy64 = spectral::RankPolicy<f64>;
/// Default double-precision test-vector scheme.
pub type TestVectorScheme64 = imaging::TestVectorScheme<f64>;
/// Default double-precision grid specification.
pub type GridSpec64 = imaging::GridSpec<f64>;
/// Default double-precision imaging map.
pub type ImageGrid64 = imaging::ImageGrid<f64>;
