//! Multi-static response (MSR) matrix: equispaced direction sets, assembly
//! from either forward model, additive measurement noise, and a JSON
//! container format.

use std::path::Path;

use nalgebra::{DMatrix, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{
    bie::BieSolver, default_bie_nodes, far_field, kirchhoff_density, SolverMode, WaveContext,
};
use crate::geometry::{sample_arc, Arc, ArcSample};
use crate::rng::{stream_rng, STREAM_NOISE};
use crate::scalar::{c, r, Cplx, Real};

/// Equispaced incident directions on the unit circle,
/// `θ_n = −(cos(2π(n−1)/N), sin(2π(n−1)/N))` for `n = 1..N`, with observation
/// directions `ϑ_j = −θ_j` (backscattering-aligned full-aperture array).
#[derive(Debug, Clone)]
pub struct DirectionSet<R: Real> {
    incident: Vec<Vector2<R>>,
}

impl<R: Real> DirectionSet<R> {
    /// Build `n ≥ 4` equispaced directions.
    pub fn equispaced(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Config(format!(
                "direction set needs at least 4 directions, got {n}"
            )));
        }
        let incident = (0..n)
            .map(|j| {
                let ang = R::two_pi() * r::<R>(j as f64) / r::<R>(n as f64);
                -Vector2::new(ang.cos(), ang.sin())
            })
            .collect();
        Ok(Self { incident })
    }

    /// Number of directions.
    pub fn len(&self) -> usize {
        self.incident.len()
    }

    /// True when the set is empty (never, for a validated set).
    pub fn is_empty(&self) -> bool {
        self.incident.is_empty()
    }

    /// Incident direction `θ_j` (0-based).
    pub fn incident(&self, j: usize) -> &Vector2<R> {
        &self.incident[j]
    }

    /// Observation direction `ϑ_j = −θ_j` (0-based).
    pub fn observation(&self, j: usize) -> Vector2<R> {
        -self.incident[j]
    }

    /// All incident directions.
    pub fn incident_all(&self) -> &[Vector2<R>] {
        &self.incident
    }
}

/// Multi-static response matrix `K_{jl} = ψ∞(ϑ_j, θ_l)` together with the
/// acquisition metadata needed to reproduce or reinterpret it.
#[derive(Debug, Clone)]
pub struct MsrMatrix<R: Real> {
    /// Far-field samples, row `j` = observation, column `l` = incidence.
    pub entries: DMatrix<Cplx<R>>,
    /// The direction set used for both rows and columns.
    pub directions: DirectionSet<R>,
    /// Wave context of the acquisition.
    pub ctx: WaveContext<R>,
    /// Forward model that produced the entries.
    pub mode: SolverMode,
    /// Signal-to-noise ratio in dB if noise was added, else `None`.
    pub snr_db: Option<R>,
    /// Seed used for the noise draw if noise was added, else `None`.
    pub seed: Option<u64>,
}

/// Assemble the noiseless MSR matrix for an arc.
///
/// In [`SolverMode::Bie`] mode the collocation system is factorized once and
/// re-used for every incident direction; `bie_nodes` overrides the default
/// node count (`None` selects [`default_bie_nodes`]). In
/// [`SolverMode::Kirchhoff`] mode the arc is sampled at half-wavelength
/// resolution and the physical-optics surrogate density is used.
pub fn assemble<R: Real>(
    arc: &Arc<R>,
    directions: &DirectionSet<R>,
    ctx: &WaveContext<R>,
    mode: SolverMode,
    bie_nodes: Option<usize>,
) -> Result<MsrMatrix<R>> {
    match mode {
        SolverMode::Kirchhoff => {
            let sample = sample_arc(arc, ctx.wavelength())?;
            assemble_from_sample(&sample, directions, ctx)
        }
        SolverMode::Bie => {
            let nodes = bie_nodes.unwrap_or_else(|| default_bie_nodes(ctx, arc.length()));
            let solver = BieSolver::new(arc, ctx, nodes)?;
            let n = directions.len();
            let mut entries = DMatrix::<Cplx<R>>::zeros(n, n);
            for l in 0..n {
                let density = solver.solve(directions.incident(l))?;
                for j in 0..n {
                    entries[(j, l)] = far_field(&density, &directions.observation(j), ctx);
                }
            }
            Ok(MsrMatrix {
                entries,
                directions: directions.clone(),
                ctx: *ctx,
                mode: SolverMode::Bie,
                snr_db: None,
                seed: None,
            })
        }
    }
}

/// Assemble the Kirchhoff-mode MSR matrix from a prescribed point sample
/// (used both by [`assemble`] and directly by tests that control the sample).
pub fn assemble_from_sample<R: Real>(
    sample: &ArcSample<R>,
    directions: &DirectionSet<R>,
    ctx: &WaveContext<R>,
) -> Result<MsrMatrix<R>> {
    let n = directions.len();
    let mut entries = DMatrix::<Cplx<R>>::zeros(n, n);
    for l in 0..n {
        let density = kirchhoff_density(sample, directions.incident(l), ctx);
        for j in 0..n {
            entries[(j, l)] = far_field(&density, &directions.observation(j), ctx);
        }
    }
    Ok(MsrMatrix {
        entries,
        directions: directions.clone(),
        ctx: *ctx,
        mode: SolverMode::Kirchhoff,
        snr_db: None,
        seed: None,
    })
}

impl<R: Real> MsrMatrix<R> {
    /// Number of directions (the matrix is `n × n`).
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Add complex white Gaussian noise at the given SNR (in dB, relative to
    /// the mean entry power). The draw is deterministic in `seed`: entries are
    /// perturbed in row-major order, real part before imaginary part, from the
    /// measurement-noise stream of a ChaCha12 generator. Noise values are
    /// sampled in double precision and then converted to the working scalar,
    /// so narrower scalar types see the same underlying draw.
    pub fn add_awgn(&self, snr_db: R, seed: u64) -> Result<MsrMatrix<R>> {
        let n = self.n();
        let mean_power: f64 = self
            .entries
            .iter()
            .map(|z| {
                let re = z.re.to_f64().unwrap_or(f64::NAN);
                let im = z.im.to_f64().unwrap_or(f64::NAN);
                re * re + im * im
            })
            .sum::<f64>()
            / (n * n) as f64;
        if !mean_power.is_finite() {
            return Err(Error::Numerical(
                "non-finite entries in the matrix to be perturbed".into(),
            ));
        }
        let snr = snr_db
            .to_f64()
            .ok_or_else(|| Error::Config("snr_db is not finite".into()))?;
        let noise_power = mean_power / 10f64.powf(snr / 10.0);
        let sigma = (noise_power / 2.0).sqrt();
        let mut rng = stream_rng(seed, STREAM_NOISE);
        let mut entries = self.entries.clone();
        for i in 0..n {
            for j in 0..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                entries[(i, j)] += c(r::<R>(re * sigma), r::<R>(im * sigma));
            }
        }
        Ok(MsrMatrix {
            entries,
            directions: self.directions.clone(),
            ctx: self.ctx,
            mode: self.mode,
            snr_db: Some(snr_db),
            seed: Some(seed),
        })
    }

    /// Serialize to the JSON container format (round-trips bit-exactly for
    /// `f64` data; the direction set is implied by `N`).
    pub fn to_json(&self) -> Result<String> {
        let file = MsrFile {
            n: self.n(),
            k: scalar_to_f64(self.ctx.wavenumber())?,
            lambda: scalar_to_f64(self.ctx.wavelength())?,
            mode: self.mode,
            seed: self.seed,
            snr_db: match self.snr_db {
                Some(v) => Some(scalar_to_f64(v)?),
                None => None,
            },
            entries: self
                .entries
                .row_iter()
                .flat_map(|row| {
                    row.iter()
                        .map(|z| {
                            [
                                z.re.to_f64().unwrap_or(f64::NAN),
                                z.im.to_f64().unwrap_or(f64::NAN),
                            ]
                        })
                        .collect::<Vec<_>>()
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Parse the JSON container format.
    pub fn from_json(text: &str) -> Result<MsrMatrix<R>> {
        let file: MsrFile = serde_json::from_str(text)?;
        if file.entries.len() != file.n * file.n {
            return Err(Error::Config(format!(
                "matrix container declares N={} but holds {} entries (need N²={})",
                file.n,
                file.entries.len(),
                file.n * file.n
            )));
        }
        let directions = DirectionSet::equispaced(file.n)?;
        let ctx = WaveContext::new(r::<R>(file.k), r::<R>(file.lambda))?;
        let entries = DMatrix::from_fn(file.n, file.n, |i, j| {
            let [re, im] = file.entries[i * file.n + j];
            c(r::<R>(re), r::<R>(im))
        });
        Ok(MsrMatrix {
            entries,
            directions,
            ctx,
            mode: file.mode,
            snr_db: file.snr_db.map(r::<R>),
            seed: file.seed,
        })
    }

    /// Write the JSON container to a file.
    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Read the JSON container from a file.
    pub fn read_json(path: impl AsRef<Path>) -> Result<MsrMatrix<R>> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

fn scalar_to_f64<R: Real>(v: R) -> Result<f64> {
    v.to_f64()
        .ok_or_else(|| Error::Numerical("scalar not representable as f64".into()))
}

/// On-disk JSON schema of the MSR container.
#[derive(Serialize, Deserialize)]
struct MsrFile {
    #[serde(rename = "N")]
    n: usize,
    k: f64,
    lambda: f64,
    mode: SolverMode,
    seed: Option<u64>,
    snr_db: Option<f64>,
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}
