//! Test vectors and the subspace-migration imaging function
//! `𝔉(x) = |Σ_m (W(x)*U_m)(W(x)*V̄_m)|`, evaluated on rectangular grids,
//! plus contrast statistics and raster/CSV export.

use nalgebra::{DVector, Point2, Vector2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::WaveContext;
use crate::geometry::{Arc, ArcSample};
use crate::msr::DirectionSet;
use crate::scalar::{cabs, cis, cr, r, Cplx, Real};
use crate::spectral::SvdBasis;

/// Choice of the direction weights `c_n` in the test vector
/// `W_n(x) = √(2/N) (θ_n·c_n) e^{i k θ_n·x}`.
#[derive(Debug, Clone)]
pub enum TestVectorScheme<R: Real> {
    /// One fixed unit vector `ξ` for every `n`.
    FixedXi(Vector2<R>),
    /// `c_n = θ_n`, so `θ_n·c_n = 1`.
    IncidentAligned,
    /// `c_n = ν(ŷ(x))` where `ŷ(x)` is the Euclidean-nearest point of the
    /// reference sample to `x`. The underlying closed-form analysis assumes
    /// `c_n ≈ ν(y_m)` per scatterer point; a single test vector must commit to
    /// one normal, and nearest-point is the least-assumption choice.
    OracleNormal(ArcSample<R>),
}

impl<R: Real> TestVectorScheme<R> {
    /// Fixed-`ξ` scheme from an angle (always unit norm).
    pub fn fixed_xi_angle(angle: R) -> Self {
        TestVectorScheme::FixedXi(Vector2::new(angle.cos(), angle.sin()))
    }

    /// Fixed-`ξ` scheme from a vector, which must have unit norm.
    pub fn fixed_xi(v: Vector2<R>) -> Result<Self> {
        if (v.norm() - R::one()).abs() > r(1e-9) {
            return Err(Error::Config(format!(
                "fixed test-vector direction must be unit length, |ξ| = {:?}",
                v.norm().to_f64()
            )));
        }
        Ok(TestVectorScheme::FixedXi(v))
    }

    /// Short scheme descriptor for metadata.
    pub fn describe(&self) -> String {
        match self {
            TestVectorScheme::FixedXi(v) => format!(
                "fixed_xi({:.6},{:.6})",
                v.x.to_f64().unwrap_or(f64::NAN),
                v.y.to_f64().unwrap_or(f64::NAN)
            ),
            TestVectorScheme::IncidentAligned => "incident_aligned".into(),
            TestVectorScheme::OracleNormal(_) => "oracle_normal".into(),
        }
    }
}

/// Test vector `W(x)` of length `N`.
pub fn test_vector<R: Real>(
    x: &Point2<R>,
    dirs: &DirectionSet<R>,
    ctx: &WaveContext<R>,
    scheme: &TestVectorScheme<R>,
) -> DVector<Cplx<R>> {
    let n = dirs.len();
    let amp = (r::<R>(2.0) / r::<R>(n as f64)).sqrt();
    let k = ctx.wavenumber();
    // For FixedXi and OracleNormal the weight vector is the same for all n.
    let fixed_c: Option<Vector2<R>> = match scheme {
        TestVectorScheme::FixedXi(v) => Some(*v),
        TestVectorScheme::OracleNormal(sample) => Some(nearest_normal(sample, x)),
        TestVectorScheme::IncidentAligned => None,
    };
    DVector::from_fn(n, |j, _| {
        let theta = dirs.incident(j);
        let weight = match &fixed_c {
            Some(c_vec) => theta.dot(c_vec),
            None => R::one(), // θ_n·θ_n
        };
        cis(k * theta.dot(&x.coords)) * cr(amp * weight)
    })
}

/// Unit normal of the sample point nearest to `x`.
fn nearest_normal<R: Real>(sample: &ArcSample<R>, x: &Point2<R>) -> Vector2<R> {
    let mut best = 0usize;
    let mut best_d = R::max_value().unwrap_or_else(R::one);
    for (i, p) in sample.points.iter().enumerate() {
        let d = (p - x).norm_squared();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    sample.normals[best]
}

/// Imaging function at a single point:
/// `𝔉(x) = |Σ_{m<M} (W*U_m)(W*V̄_m)|` over the selected signal triplets.
pub fn imaging_value<R: Real>(
    x: &Point2<R>,
    basis: &SvdBasis<R>,
    dirs: &DirectionSet<R>,
    ctx: &WaveContext<R>,
    scheme: &TestVectorScheme<R>,
) -> Result<R> {
    let rank = basis.rank()?;
    let w = test_vector(x, dirs, ctx, scheme);
    Ok(imaging_value_with_vector(&w, basis, rank))
}

fn imaging_value_with_vector<R: Real>(
    w: &DVector<Cplx<R>>,
    basis: &SvdBasis<R>,
    rank: usize,
) -> R {
    let mut acc = cr(R::zero());
    for m in 0..rank {
        let u = basis.left.column(m);
        let v = basis.right.column(m);
        // W*U_m = Σ conj(W_n) U_{nm};  W*V̄_m = conj(Σ W_n V_{nm}).
        let wu = w.dotc(&u);
        let wv = w.dot(&v).conj();
        acc += wu * wv;
    }
    cabs(acc)
}

/// Rectangular evaluation grid specification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec<R> {
    pub x_min: R,
    pub x_max: R,
    pub y_min: R,
    pub y_max: R,
    pub step: R,
}

impl<R: Real> GridSpec<R> {
    /// Default search domain `[−1, 1]²` at `λ/20` resolution.
    pub fn default_for(ctx: &WaveContext<R>) -> Self {
        let one = R::one();
        GridSpec {
            x_min: -one,
            x_max: one,
            y_min: -one,
            y_max: one,
            step: ctx.wavelength() / r(20.0),
        }
    }

    pub(crate) fn axis(&self, lo: R, hi: R) -> Vec<R> {
        let mut out = Vec::new();
        let mut i = 0usize;
        loop {
            let v = lo + self.step * r::<R>(i as f64);
            if v > hi + self.step * r(1e-9) {
                break;
            }
            out.push(v);
            i += 1;
        }
        out
    }

    pub(crate) fn validate(&self, ctx: &WaveContext<R>) -> Result<()> {
        if !(self.step > R::zero()) {
            return Err(Error::Config("grid step must be positive".into()));
        }
        if self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::Config("grid ranges must be non-degenerate".into()));
        }
        let limit = ctx.wavelength() / r(10.0);
        if self.step > limit * (R::one() + r(1e-12)) {
            return Err(Error::Config(format!(
                "grid step {:?} too coarse to sample the imaging oscillations; need ≤ λ/10 = {:?}",
                self.step.to_f64(),
                limit.to_f64()
            )));
        }
        Ok(())
    }
}

/// Imaging function sampled on a rectangular grid.
#[derive(Debug, Clone)]
pub struct ImageGrid<R: Real> {
    pub spec: GridSpec<R>,
    /// Grid abscissae (x) and ordinates (y).
    pub xs: Vec<R>,
    pub ys: Vec<R>,
    /// `values[(iy, ix)] = 𝔉(xs[ix], ys[iy]) ≥ 0`.
    pub values: nalgebra::DMatrix<R>,
}

/// Evaluate the imaging function on a grid. The step must resolve the Bessel
/// oscillations of the imaging kernel: `step ≤ λ/10` is enforced.
pub fn imaging_map<R: Real>(
    basis: &SvdBasis<R>,
    dirs: &DirectionSet<R>,
    ctx: &WaveContext<R>,
    scheme: &TestVectorScheme<R>,
    spec: &GridSpec<R>,
) -> Result<ImageGrid<R>> {
    spec.validate(ctx)?;
    let rank = basis.rank()?;
    let xs = spec.axis(spec.x_min, spec.x_max);
    let ys = spec.axis(spec.y_min, spec.y_max);
    let mut values = nalgebra::DMatrix::<R>::zeros(ys.len(), xs.len());
    for (iy, &y) in ys.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let p = Point2::new(x, y);
            let w = test_vector(&p, dirs, ctx, scheme);
            values[(iy, ix)] = imaging_value_with_vector(&w, basis, rank);
        }
    }
    Ok(ImageGrid {
        spec: *spec,
        xs,
        ys,
        values,
    })
}

/// Location and value of the grid maximum (first occurrence in row-major
/// y-then-x order on ties).
pub fn argmax<R: Real>(grid: &ImageGrid<R>) -> (Point2<R>, R) {
    let mut best = (0usize, 0usize);
    let mut best_v = -R::one();
    for iy in 0..grid.ys.len() {
        for ix in 0..grid.xs.len() {
            let v = grid.values[(iy, ix)];
            if v > best_v {
                best_v = v;
                best = (iy, ix);
            }
        }
    }
    (Point2::new(grid.xs[best.1], grid.ys[best.0]), best_v)
}

/// Contrast statistics of a map against the true arc: nodes within `λ/8`
/// count as on-arc, nodes farther than `λ/2` as off-arc.
#[derive(Debug, Clone, Serialize)]
pub struct ContrastStats {
    pub on_mean: f64,
    pub off_mean: f64,
    /// `on_mean / off_mean`.
    pub ratio: f64,
    pub off_p95: f64,
    pub on_count: usize,
    pub off_count: usize,
}

/// Compute contrast statistics of `grid` against `arc`.
pub fn contrast<R: Real>(
    grid: &ImageGrid<R>,
    arc: &Arc<R>,
    ctx: &WaveContext<R>,
) -> Result<ContrastStats> {
    let near = ctx.wavelength() / r(8.0);
    let far = ctx.wavelength() / r(2.0);
    let mut on_sum = 0.0f64;
    let mut on_count = 0usize;
    let mut off = Vec::new();
    for iy in 0..grid.ys.len() {
        for ix in 0..grid.xs.len() {
            let p = Point2::new(grid.xs[ix], grid.ys[iy]);
            let d = arc.distance_to(&p);
            let v = grid.values[(iy, ix)].to_f64().unwrap_or(f64::NAN);
            if d <= near {
                on_sum += v;
                on_count += 1;
            } else if d > far {
                off.push(v);
            }
        }
    }
    if on_count == 0 || off.is_empty() {
        return Err(Error::Domain(
            "contrast masks are empty; grid does not cover both the arc and its exterior".into(),
        ));
    }
    let off_mean = off.iter().sum::<f64>() / off.len() as f64;
    off.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let p95_idx = ((off.len() as f64 - 1.0) * 0.95).round() as usize;
    let on_mean = on_sum / on_count as f64;
    Ok(ContrastStats {
        on_mean,
        off_mean,
        ratio: on_mean / off_mean,
        off_p95: off[p95_idx],
        on_count,
        off_count: off.len(),
    })
}

impl<R: Real> ImageGrid<R> {
    /// CSV export with header `x,y,value`, rows in y-then-x order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for (iy, &y) in self.ys.iter().enumerate() {
            for (ix, &x) in self.xs.iter().enumerate() {
                out.push_str(&format!(
                    "{:e},{:e},{:e}\n",
                    x.to_f64().unwrap_or(f64::NAN),
                    y.to_f64().unwrap_or(f64::NAN),
                    self.values[(iy, ix)].to_f64().unwrap_or(f64::NAN)
                ));
            }
        }
        out
    }

    /// Binary 8-bit PGM (P5), values normalized to the grid maximum, with the
    /// given metadata string embedded as a comment. The raster is written
    /// top-to-bottom as the largest y first, matching image conventions.
    pub fn to_pgm(&self, comment: &str) -> Vec<u8> {
        let w = self.xs.len();
        let h = self.ys.len();
        let maxv = self
            .values
            .iter()
            .fold(R::zero(), |a, &b| if b > a { b } else { a });
        let mut out = Vec::with_capacity(w * h + 128);
        out.extend_from_slice(b"P5\n");
        for line in comment.lines() {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
        out.extend_from_slice(format!("{w} {h}\n255\n").as_bytes());
        for iy in (0..h).rev() {
            for ix in 0..w {
                let v = if maxv > R::zero() {
                    (self.values[(iy, ix)] / maxv).to_f64().unwrap_or(0.0)
                } else {
                    0.0
                };
                out.push((v.clamp(0.0, 1.0) * 255.0).round() as u8);
            }
        }
        out
    }
}
