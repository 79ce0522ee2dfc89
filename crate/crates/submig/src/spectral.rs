//! Singular-value decomposition of the multi-static matrix and selection of
//! the signal subspace (the span of the leading singular vectors).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::msr::MsrMatrix;
use crate::scalar::{Cplx, Real};

/// Full singular-triplet data of a multi-static matrix, ordered by
/// non-increasing singular value, plus the selected signal rank once a
/// [`RankPolicy`] has been applied.
#[derive(Debug, Clone)]
pub struct SvdBasis<R: Real> {
    /// Singular values `σ₁ ≥ σ₂ ≥ … ≥ 0`.
    pub singular_values: Vec<R>,
    /// Left singular vectors `U_m` as matrix columns.
    pub left: DMatrix<Cplx<R>>,
    /// Right singular vectors `V_m` as matrix columns (not conjugated).
    pub right: DMatrix<Cplx<R>>,
    /// Number of leading triplets spanning the signal subspace, once chosen.
    pub signal_rank: Option<usize>,
}

/// How the signal rank is chosen from the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankPolicy<R> {
    /// Use exactly this many leading triplets.
    Explicit(usize),
    /// Keep every `σ_m ≥ τ·σ₁` (relative threshold `τ`).
    Threshold(R),
}

impl<R: Real> Default for RankPolicy<R> {
    fn default() -> Self {
        RankPolicy::Threshold(crate::scalar::r(0.05))
    }
}

/// Compute the full SVD of raw complex entries, sorted by descending
/// singular value. `right` holds the unconjugated right vectors, so the
/// reconstruction is `K = Σ σ_m · U_m · V_m^H`.
pub fn decompose_entries<R: Real>(entries: &DMatrix<Cplx<R>>) -> Result<SvdBasis<R>> {
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical(
            "matrix with non-finite entries cannot be decomposed".into(),
        ));
    }
    let svd = nalgebra::linalg::SVD::new(entries.clone(), true, true);
    let u = svd
        .u
        .ok_or_else(|| Error::Numerical("SVD did not produce left vectors".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not produce right vectors".into()))?;
    let v = v_t.adjoint();

    // Order triplets by non-increasing singular value.
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });
    let singular_values: Vec<R> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let left = DMatrix::from_fn(u.nrows(), order.len(), |r_, c_| u[(r_, order[c_])]);
    let right = DMatrix::from_fn(v.nrows(), order.len(), |r_, c_| v[(r_, order[c_])]);

    Ok(SvdBasis {
        singular_values,
        left,
        right,
        signal_rank: None,
    })
}

/// Compute the full SVD of a multi-static matrix (rank not yet selected).
pub fn decompose<R: Real>(matrix: &MsrMatrix<R>) -> Result<SvdBasis<R>> {
    decompose_entries(&matrix.entries)
}

/// Apply a rank policy, returning the basis with `signal_rank` set.
pub fn select_rank<R: Real>(basis: SvdBasis<R>, policy: &RankPolicy<R>) -> Result<SvdBasis<R>> {
    let n = basis.singular_values.len();
    let rank = match *policy {
        RankPolicy::Explicit(m) => {
            if m < 1 || m > n {
                return Err(Error::Config(format!(
                    "explicit signal rank {m} outside valid range 1..={n}"
                )));
            }
            m
        }
        RankPolicy::Threshold(tau) => {
            if !(tau > R::zero()) {
                return Err(Error::Config(
                    "rank threshold must be positive".into(),
                ));
            }
            let sigma1 = basis.singular_values[0];
            let m = basis
                .singular_values
                .iter()
                .take_while(|&&s| s >= tau * sigma1)
                .count();
            if m == 0 || sigma1 <= R::zero() {
                return Err(Error::Numerical(
                    "no signal subspace: threshold selects no singular values".into(),
                ));
            }
            m
        }
    };
    Ok(SvdBasis {
        signal_rank: Some(rank),
        ..basis
    })
}

impl<R: Real> SvdBasis<R> {
    /// Selected signal rank; error if no policy has been applied yet.
    pub fn rank(&self) -> Result<usize> {
        self.signal_rank.ok_or_else(|| {
            Error::Config("signal rank not selected; apply a rank policy first".into())
        })
    }

    /// Singular-value spectrum as CSV (`index,singular_value,relative`),
    /// 1-based index, relative to `σ₁`.
    pub fn spectrum_csv(&self) -> String {
        let mut out = String::from("index,singular_value,relative\n");
        let sigma1 = self.singular_values.first().copied().unwrap_or(R::zero());
        for (i, &s) in self.singular_values.iter().enumerate() {
            let rel = if sigma1 > R::zero() {
                s / sigma1
            } else {
                R::zero()
            };
            out.push_str(&format!(
                "{},{:e},{:e}\n",
                i + 1,
                s.to_f64().unwrap_or(f64::NAN),
                rel.to_f64().unwrap_or(f64::NAN)
            ));
        }
        out
    }
}
