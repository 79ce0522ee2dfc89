//! Boundary-integral solver for the sound-hard (Neumann) open arc.
//!
//! The scattered field is a double-layer potential with density `φ`; imposing
//! the Neumann condition yields a hypersingular integral equation for `φ` on
//! the arc. The discretization uses the classical toolbox for open arcs:
//!
//! * **Cosine substitution** `s = cos t` maps the arc onto a `2π`-periodic
//!   problem and builds the square-root endpoint behavior of the density into
//!   the ansatz `φ(γ(cos t)) = μ(t) = Σ_{m=1}^{n−1} a_m sin(m t)`, which
//!   vanishes at the arc tips.
//! * **Maue regularization** rewrites the hypersingular operator as a
//!   weakly-singular one acting on `μ` plus a tangential derivative of a
//!   single-layer-type potential acting on `μ'`.
//! * **Kress quadrature** integrates the logarithmic kernel splits exactly on
//!   trigonometric polynomials: the kernel is written as
//!   `A(t,τ)·[ln(4sin²((t−τ)/2)) + ln(4sin²((t+τ)/2))] + B(t,τ)` with smooth
//!   `A`, `B`; the reflected log accounts for the second preimage of each arc
//!   point under `cos`.
//! * The outer tangential derivative is evaluated by **spectral
//!   differentiation** of the trigonometric interpolant of the inner
//!   potential, which is smooth and periodic.
//!
//! Collocation at the interior grid points `t_i = iπ/n`, `i = 1..n−1`, gives
//! a square system that is independent of the incident direction: one LU
//! factorization serves all right-hand sides.

use nalgebra::{DMatrix, DVector, Point2, Vector2};

use crate::error::{Error, Result};
use crate::forward::{DensitySolution, WaveContext};
use crate::geometry::Arc;
use crate::numeric::TrigInterp;
use crate::scalar::{c, cabs, cis, cr, r, Cplx, Real};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Geometry evaluated at a set of parameter values `t` (via `s = cos t`).
struct ChartPoints<R: Real> {
    positions: Vec<Point2<R>>,
    speeds: Vec<R>,
    normals: Vec<Vector2<R>>,
}

fn chart_points<R: Real>(arc: &Arc<R>, ts: &[R]) -> ChartPoints<R> {
    let mut positions = Vec::with_capacity(ts.len());
    let mut speeds = Vec::with_capacity(ts.len());
    let mut normals = Vec::with_capacity(ts.len());
    for &t in ts {
        let s = t.cos();
        let d = arc.derivative(s);
        let speed = d.norm();
        positions.push(arc.position(s));
        speeds.push(speed);
        normals.push(Vector2::new(-d.y, d.x) / speed);
    }
    ChartPoints {
        positions,
        speeds,
        normals,
    }
}

/// Direction-independent discretization of the hypersingular operator for one
/// (arc, wave context, node count) triple.
pub struct BieSolver<R: Real> {
    arc: Arc<R>,
    ctx: WaveContext<R>,
    /// Half the grid size: the periodic grid is `t_j = jπ/n`, `j = 0..2n`.
    n: usize,
    grid: Vec<R>,
    grid_geom: ChartPoints<R>,
    /// Signed Jacobian `|γ'(cos t_j)| sin t_j`.
    jac_signed: Vec<R>,
    /// `|jac_signed|`.
    jac_abs: Vec<R>,
    /// Sine basis samples `sin(m t_j)`, `(2n) × (n−1)`.
    basis_sin: DMatrix<R>,
    /// Basis derivative samples `m cos(m t_j)`, `(2n) × (n−1)`.
    basis_dsin: DMatrix<R>,
    /// Single-layer quadrature matrix on the full grid (for the Maue term).
    sl_plain_grid: DMatrix<Cplx<R>>,
    /// LU factorization of the collocation matrix.
    lu: nalgebra::linalg::LU<Cplx<R>, nalgebra::Dyn, nalgebra::Dyn>,
    /// Condition-number estimate of the collocation matrix.
    condition: R,
}

impl<R: Real> BieSolver<R> {
    /// Assemble and factorize the collocation system. `nodes` is the total
    /// number of periodic grid points (even, at least 16).
    pub fn new(arc: &Arc<R>, ctx: &WaveContext<R>, nodes: usize) -> Result<Self> {
        if nodes < 16 || nodes % 2 != 0 {
            return Err(Error::Config(format!(
                "boundary solver needs an even node count >= 16, got {nodes}"
            )));
        }
        let n = nodes / 2;
        let grid: Vec<R> = (0..2 * n)
            .map(|j| R::pi() * r::<R>(j as f64) / r::<R>(n as f64))
            .collect();
        let grid_geom = chart_points(arc, &grid);
        let jac_signed: Vec<R> = grid
            .iter()
            .zip(grid_geom.speeds.iter())
            .map(|(&t, &sp)| sp * t.sin())
            .collect();
        let jac_abs: Vec<R> = jac_signed.iter().map(|&j| j.abs()).collect();

        // Sine basis and its derivative on the grid.
        let basis_sin = DMatrix::<R>::from_fn(2 * n, n - 1, |j, m| {
            (r::<R>((m + 1) as f64) * grid[j]).sin()
        });
        let basis_dsin = DMatrix::<R>::from_fn(2 * n, n - 1, |j, m| {
            let mr = r::<R>((m + 1) as f64);
            mr * (mr * grid[j]).cos()
        });

        let solver_shell = SolverShell {
            ctx: *ctx,
            n,
            grid: grid.clone(),
            grid_geom: &grid_geom,
            jac_signed: &jac_signed,
        };

        let (sl_weighted_grid, sl_plain_grid) = solver_shell.quadrature_matrices(&grid, &grid_geom)?;

        // Inner potential G_m = SL_plain · (basis_dsin column m), spectrally
        // differentiated on the grid.
        let g_full = &sl_plain_grid * basis_dsin.map(|v| cr(v));
        let mut g_deriv = DMatrix::<Cplx<R>>::zeros(2 * n, n - 1);
        for m in 0..n - 1 {
            let samples: Vec<Cplx<R>> = (0..2 * n).map(|j| g_full[(j, m)]).collect();
            let interp = TrigInterp::from_samples(&samples)?;
            for j in 0..2 * n {
                g_deriv[(j, m)] = interp.derivative_at(grid[j]);
            }
        }

        // Collocation matrix at interior rows i = 1..n−1.
        let k = ctx.wavenumber();
        let k2 = cr(k * k);
        let weighted_sin = &sl_weighted_grid * basis_sin.map(|v| cr(v));
        let mut system = DMatrix::<Cplx<R>>::zeros(n - 1, n - 1);
        for i in 1..n {
            for m in 0..n - 1 {
                system[(i - 1, m)] =
                    k2 * weighted_sin[(i, m)] + g_deriv[(i, m)] * cr(R::one() / jac_abs[i]);
            }
        }

        // Condition estimate via singular values.
        let sv = system.clone().singular_values();
        let smax = sv.iter().fold(R::zero(), |a, &b| a.max(b));
        let smin = sv.iter().fold(smax, |a, &b| a.min(b));
        if smin <= R::zero() || !(smax / smin).is_finite() {
            return Err(Error::Solver(
                "collocation matrix is numerically singular".into(),
            ));
        }
        let condition = smax / smin;
        if condition > r::<R>(1e12) {
            return Err(Error::Solver(format!(
                "collocation matrix is ill-conditioned (estimate {:?} > 1e12)",
                condition.to_f64()
            )));
        }

        let lu = system.lu();

        Ok(Self {
            arc: arc.clone(),
            ctx: *ctx,
            n,
            grid,
            grid_geom,
            jac_signed,
            jac_abs,
            basis_sin,
            basis_dsin,
            sl_plain_grid,
            lu,
            condition,
        })
    }

    /// Condition-number estimate of the collocation matrix.
    pub fn condition(&self) -> R {
        self.condition
    }

    /// Node parameter the solver was built with (total grid points).
    pub fn nodes(&self) -> usize {
        2 * self.n
    }

    fn shell(&self) -> SolverShell<'_, R> {
        SolverShell {
            ctx: self.ctx,
            n: self.n,
            grid: self.grid.clone(),
            grid_geom: &self.grid_geom,
            jac_signed: &self.jac_signed,
        }
    }

    fn rhs(&self, theta: &Vector2<R>) -> DVector<Cplx<R>> {
        let k = self.ctx.wavenumber();
        DVector::from_fn(self.n - 1, |row, _| {
            let i = row + 1;
            let x = &self.grid_geom.positions[i];
            let nu = &self.grid_geom.normals[i];
            let phase = cis(k * theta.dot(&x.coords));
            // −i k (θ·ν) e^{ikθ·x}
            phase * c(R::zero(), -k * theta.dot(nu))
        })
    }

    /// Spectral coefficients `a_m` of the density for one incident direction.
    fn solve_coefficients(&self, theta: &Vector2<R>) -> Result<DVector<Cplx<R>>> {
        self.lu.solve(&self.rhs(theta)).ok_or_else(|| {
            Error::Solver("LU solve failed on the collocation system".into())
        })
    }

    /// Solve for the boundary density under incidence `theta`.
    ///
    /// The returned nodes are the interior grid points of the upper half
    /// `t_i = iπ/n`, `i = 1..n−1` (each physical arc point appears once);
    /// weights carry the arc-length measure `(π/n)·|γ'(cos t_i)| sin t_i` so
    /// that [`crate::forward::far_field`] reproduces the solver's far field.
    pub fn solve(&self, theta: &Vector2<R>) -> Result<DensitySolution<R>> {
        let a = self.solve_coefficients(theta)?;
        let mu = &self.basis_sin.map(|v| cr(v)) * &a;
        let h = R::pi() / r::<R>(self.n as f64);
        let mut nodes = Vec::with_capacity(self.n - 1);
        let mut normals = Vec::with_capacity(self.n - 1);
        let mut values = Vec::with_capacity(self.n - 1);
        let mut weights = Vec::with_capacity(self.n - 1);
        for i in 1..self.n {
            nodes.push(self.grid_geom.positions[i]);
            normals.push(self.grid_geom.normals[i]);
            values.push(mu[i]);
            weights.push(h * self.jac_abs[i]);
        }
        Ok(DensitySolution {
            incident_direction: *theta,
            nodes,
            normals,
            values,
            weights,
        })
    }

    /// Residual of the discretized Neumann boundary condition at off-
    /// collocation check points (midpoints between interior grid nodes).
    /// Returns `(max |N[μ] − g|, max |g|)`.
    pub fn boundary_residual(&self, theta: &Vector2<R>) -> Result<(R, R)> {
        let a = self.solve_coefficients(theta)?;
        let n = self.n;
        let mids: Vec<R> = (1..n)
            .map(|i| (r::<R>(i as f64) + r::<R>(0.5)) * R::pi() / r::<R>(n as f64))
            .collect();
        let mid_geom = chart_points(&self.arc, &mids);
        let shell = self.shell();
        let (sl_weighted, _) = shell.quadrature_matrices(&mids, &mid_geom)?;

        // Maue weakly-singular part at midpoints.
        let mu = &self.basis_sin.map(|v| cr(v)) * &a;
        let k = self.ctx.wavenumber();
        let term1 = &sl_weighted * &mu * cr(k * k);

        // Tangential-derivative part: interpolate the inner potential from the
        // grid and differentiate spectrally at the midpoints.
        let mu_prime = &self.basis_dsin.map(|v| cr(v)) * &a;
        let g_grid = &self.sl_plain_grid * &mu_prime;
        let samples: Vec<Cplx<R>> = (0..2 * n).map(|j| g_grid[j]).collect();
        let interp = TrigInterp::from_samples(&samples)?;

        let mut max_res = R::zero();
        let mut max_rhs = R::zero();
        for (row, &t) in mids.iter().enumerate() {
            let jac = mid_geom.speeds[row] * t.sin().abs();
            let lhs = term1[row] + interp.derivative_at(t) * cr(R::one() / jac);
            let x = &mid_geom.positions[row];
            let nu = &mid_geom.normals[row];
            let g = cis(k * theta.dot(&x.coords)) * c(R::zero(), -k * theta.dot(nu));
            max_res = max_res.max(cabs(lhs - g));
            max_rhs = max_rhs.max(cabs(g));
        }
        Ok((max_res, max_rhs))
    }
}

/// Borrowed view holding everything needed to build quadrature matrices at
/// arbitrary evaluation parameters.
struct SolverShell<'a, R: Real> {
    ctx: WaveContext<R>,
    n: usize,
    grid: Vec<R>,
    grid_geom: &'a ChartPoints<R>,
    jac_signed: &'a [R],
}

impl<'a, R: Real> SolverShell<'a, R> {
    /// Kress weights `R_j(t)` for the log-kernel quadrature: rows are the
    /// evaluation parameters `ts`, columns the periodic grid.
    fn kress_weights(&self, ts: &[R]) -> DMatrix<R> {
        let n = self.n;
        let nr = r::<R>(n as f64);
        let two_pi_over_n = R::two_pi() / nr;
        let pi_over_n2 = R::pi() / (nr * nr);
        DMatrix::from_fn(ts.len(), 2 * n, |i, j| {
            let dt = ts[i] - self.grid[j];
            let mut acc = R::zero();
            for m in 1..n {
                let mr = r::<R>(m as f64);
                acc += (mr * dt).cos() / mr;
            }
            -two_pi_over_n * acc - pi_over_n2 * (nr * dt).cos()
        })
    }

    /// Smooth/log kernel split at evaluation parameters `ts`:
    /// `A(t,τ) = J₀(k r)/(4π)` and
    /// `B(t,τ) = Φ(x(t),x(τ)) − A·[ln(4sin²((t−τ)/2)) + ln(4sin²((t+τ)/2))]`,
    /// with the analytic diagonal limit where the points coincide.
    fn kernel_split(
        &self,
        ts: &[R],
        ts_geom: &ChartPoints<R>,
    ) -> Result<(DMatrix<R>, DMatrix<Cplx<R>>)> {
        let n2 = 2 * self.n;
        let k = self.ctx.wavenumber();
        let four_pi = r::<R>(4.0) * R::pi();
        let quarter = r::<R>(0.25);
        let half = r::<R>(0.5);
        let mut a = DMatrix::<R>::zeros(ts.len(), n2);
        let mut b = DMatrix::<Cplx<R>>::zeros(ts.len(), n2);
        for i in 0..ts.len() {
            let t = ts[i];
            let xi = &ts_geom.positions[i];
            for j in 0..n2 {
                let dist = (xi - &self.grid_geom.positions[j]).norm();
                if dist < r::<R>(1e-12) {
                    // Coincident points: a[i][j] is the limit of J₀/(4π) and
                    // b the analytic limit of the regular part.
                    a[(i, j)] = R::one() / four_pi;
                    let log_term =
                        ((k * ts_geom.speeds[i] * quarter).ln() + r::<R>(EULER_GAMMA))
                            / R::two_pi();
                    b[(i, j)] = c(log_term, -quarter);
                } else {
                    let z = k * dist;
                    let j0 = z.cyl_j0();
                    let y0 = z.cyl_y0();
                    a[(i, j)] = j0 / four_pi;
                    // Φ = −(i/4) H₀⁽¹⁾ = Y₀/4 − i J₀/4
                    let phi = c(y0 * quarter, -j0 * quarter);
                    let sm = r::<R>(2.0) * ((t - self.grid[j]) * half).sin();
                    let sp = r::<R>(2.0) * ((t + self.grid[j]) * half).sin();
                    let logs = (sm * sm).ln() + (sp * sp).ln();
                    b[(i, j)] = phi - cr(a[(i, j)] * logs);
                }
            }
        }
        Ok((a, b))
    }

    /// Quadrature matrices mapping grid samples to operator values at `ts`:
    ///
    /// * weighted: `½ ∫ (ν(t)·ν(τ)) Φ(t,τ) f(τ) J̃(τ) dτ` (Maue weak part,
    ///   includes the normal-product and signed-Jacobian weighting), and
    /// * plain: `½ ∫ Φ(t,τ) f(τ) dτ` (single-layer potential of the density
    ///   derivative).
    fn quadrature_matrices(
        &self,
        ts: &[R],
        ts_geom: &ChartPoints<R>,
    ) -> Result<(DMatrix<Cplx<R>>, DMatrix<Cplx<R>>)> {
        let n = self.n;
        let n2 = 2 * n;
        let (a, b) = self.kernel_split(ts, ts_geom)?;
        let kress = self.kress_weights(ts);
        let trap = R::pi() / r::<R>(n as f64);
        let half = r::<R>(0.5);
        let mut weighted = DMatrix::<Cplx<R>>::zeros(ts.len(), n2);
        let mut plain = DMatrix::<Cplx<R>>::zeros(ts.len(), n2);
        for i in 0..ts.len() {
            let nu_i = &ts_geom.normals[i];
            for j in 0..n2 {
                // Reflected index for the image logarithm ln(4sin²((t+τ)/2)):
                // reuse the weights at 2π − τ_j.
                let refl = (n2 - j) % n2;
                let log_weight = kress[(i, j)] + kress[(i, refl)];
                let base = cr(log_weight * a[(i, j)]) + b[(i, j)] * cr(trap);
                let nunu = nu_i.dot(&self.grid_geom.normals[j]);
                weighted[(i, j)] = base * cr(half * nunu * self.jac_signed[j]);
                plain[(i, j)] = base * cr(half);
            }
        }
        Ok((weighted, plain))
    }
}
