//! Forward data generation: plane-wave incidence on a sound-hard arc.
//!
//! Two data sources are provided:
//!
//! * a full boundary-integral solver ([`bie::BieSolver`], production mode)
//!   that solves the Neumann problem for the double-layer density, and
//! * a Kirchhoff-type (physical optics) surrogate ([`kirchhoff_density`],
//!   fast/test mode) that generates synthetic data with the exact factorized
//!   low-rank structure the imaging theory predicts.
//!
//! Both feed the same far-field quadrature [`far_field`].

pub mod bie;

use nalgebra::{Point2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Arc, ArcSample};
use crate::scalar::{c, cis, cr, r, Cplx, Real};
use crate::special_fn::hankel1;

/// Wavenumber / wavelength pair with the consistency invariant `k·λ = 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveContext<R: Real> {
    k: R,
    lambda: R,
}

impl<R: Real> WaveContext<R> {
    /// Construct from the wavelength; `k = 2π/λ`.
    pub fn from_wavelength(lambda: R) -> Result<Self> {
        if lambda <= R::zero() || !lambda.is_finite() {
            return Err(Error::Config("wavelength must be positive and finite".into()));
        }
        Ok(Self {
            k: R::two_pi() / lambda,
            lambda,
        })
    }

    /// Construct from an explicit pair, enforcing `k·λ = 2π ± 1e-12`.
    pub fn new(k: R, lambda: R) -> Result<Self> {
        if k <= R::zero() || lambda <= R::zero() {
            return Err(Error::Config("wavenumber and wavelength must be positive".into()));
        }
        if (k * lambda - R::two_pi()).abs() > r::<R>(1e-12) {
            return Err(Error::Config(format!(
                "inconsistent wave context: k*lambda = {:?} differs from 2π",
                (k * lambda).to_f64()
            )));
        }
        Ok(Self { k, lambda })
    }

    /// Wavenumber `k` (radians per length).
    pub fn wavenumber(&self) -> R {
        self.k
    }

    /// Wavelength `λ`.
    pub fn wavelength(&self) -> R {
        self.lambda
    }
}

/// Forward data-generation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    /// Boundary-integral solver (production accuracy).
    Bie,
    /// Kirchhoff / physical-optics surrogate (fast synthetic data).
    Kirchhoff,
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverMode::Bie => write!(f, "bie"),
            SolverMode::Kirchhoff => write!(f, "kirchhoff"),
        }
    }
}

/// Boundary density associated with one incident direction, discretized at
/// quadrature nodes on the arc. Produced by either forward mode and consumed
/// by [`far_field`].
#[derive(Debug, Clone)]
pub struct DensitySolution<R: Real> {
    /// Incident direction `θ` this density corresponds to.
    pub incident_direction: Vector2<R>,
    /// Quadrature nodes on the arc.
    pub nodes: Vec<Point2<R>>,
    /// Unit normals at the nodes.
    pub normals: Vec<Vector2<R>>,
    /// Complex density values at the nodes.
    pub values: Vec<Cplx<R>>,
    /// Quadrature weights (arc-length measure).
    pub weights: Vec<R>,
}

/// Plane-wave incident field `exp(i k θ·x)`.
pub fn incident_field<R: Real>(x: &Point2<R>, theta: &Vector2<R>, ctx: &WaveContext<R>) -> Cplx<R> {
    cis(ctx.wavenumber() * theta.dot(&x.coords))
}

/// Two-dimensional outgoing fundamental solution of the Helmholtz equation,
/// `Φ(x, y) = −(i/4) H₀⁽¹⁾(k|x−y|)`.
pub fn fundamental_solution<R: Real>(
    x: &Point2<R>,
    y: &Point2<R>,
    ctx: &WaveContext<R>,
) -> Result<Cplx<R>> {
    let dist = (x - y).norm();
    if dist <= R::zero() {
        return Err(Error::Domain(
            "fundamental_solution: evaluation at the singular point x = y".into(),
        ));
    }
    let h = hankel1(0, ctx.wavenumber() * dist)?;
    // −(i/4)·(a+bi) = (b − ai)/4
    Ok(c(h.im, -h.re) * cr(r::<R>(0.25)))
}

/// Kirchhoff (physical-optics) surrogate density at the sample points:
/// `φ(y_m, θ) = 2 (θ·ν(y_m)) exp(i k θ·y_m)`, with unit quadrature weights.
///
/// The illumination factor `θ·ν(y_m)` is part of the surrogate: it makes the
/// synthetic multi-static matrix symmetric (reciprocal) and reproduces the
/// rank-`M` factorization with matched left/right subspaces that the imaging
/// structure analysis assumes. A surrogate without this factor produces a
/// non-reciprocal matrix whose imaging function vanishes identically on the
/// scatterer, contradicting both the analysis and the full solver.
pub fn kirchhoff_density<R: Real>(
    sample: &ArcSample<R>,
    theta: &Vector2<R>,
    ctx: &WaveContext<R>,
) -> DensitySolution<R> {
    let two = r::<R>(2.0);
    let values = sample
        .points
        .iter()
        .zip(sample.normals.iter())
        .map(|(y, nu)| incident_field(y, theta, ctx) * cr(two * theta.dot(nu)))
        .collect();
    DensitySolution {
        incident_direction: *theta,
        nodes: sample.points.clone(),
        normals: sample.normals.clone(),
        values,
        weights: vec![R::one(); sample.count()],
    }
}

/// Far-field pattern of the double-layer potential with the given density:
/// the quadrature discretization of
/// `ψ∞(ϑ, θ) = −√(k/8π) e^{−iπ/4} ∫_Γ (ϑ·ν(y)) e^{−i k ϑ·y} φ(y, θ) dy`.
pub fn far_field<R: Real>(
    density: &DensitySolution<R>,
    vartheta: &Vector2<R>,
    ctx: &WaveContext<R>,
) -> Cplx<R> {
    let k = ctx.wavenumber();
    let mut acc = c(R::zero(), R::zero());
    for i in 0..density.nodes.len() {
        let y = &density.nodes[i];
        let phase = cis(-k * vartheta.dot(&y.coords));
        let geom = vartheta.dot(&density.normals[i]) * density.weights[i];
        acc += phase * density.values[i] * cr(geom);
    }
    let amp = (k / (r::<R>(8.0) * R::pi())).sqrt();
    let quarter_turn = cis(-R::frac_pi_4());
    -(quarter_turn * acc * cr(amp))
}

/// Default boundary-integral node parameter, doubled for electrically large
/// arcs (`k·L > 40`).
pub fn default_bie_nodes<R: Real>(ctx: &WaveContext<R>, arc_length: R) -> usize {
    let electrical_size = (ctx.wavenumber() * arc_length).to_f64().unwrap_or(0.0);
    if electrical_size > 40.0 {
        128
    } else {
        64
    }
}

/// Solve the sound-hard (Neumann) boundary-value problem for the double-layer
/// density on `arc` under plane-wave incidence `theta`, using `nodes`
/// discretization points (must be even, at least 16).
///
/// One-shot convenience wrapper around [`bie::BieSolver`]; assembling the
/// solver once and calling [`bie::BieSolver::solve`] per direction is cheaper
/// when many incident directions share the same arc and wavenumber.
pub fn solve_density<R: Real>(
    arc: &Arc<R>,
    theta: &Vector2<R>,
    ctx: &WaveContext<R>,
    nodes: usize,
) -> Result<DensitySolution<R>> {
    let solver = bie::BieSolver::new(arc, ctx, nodes)?;
    solver.solve(theta)
}
