//! Shared helpers for the integration suites.

use nalgebra::Point2;
use submig::imaging::ImageGrid;

/// Median of a slice (averages the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Interior grid nodes strictly larger than all eight neighbours, sorted by
/// value, largest first.
pub fn local_maxima(grid: &ImageGrid<f64>) -> Vec<(Point2<f64>, f64)> {
    let ny = grid.ys.len();
    let nx = grid.xs.len();
    let mut peaks = Vec::new();
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            let v = grid.values[(iy, ix)];
            let mut is_peak = true;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dy == 0 && dx == 0 {
                        continue;
                    }
                    let jy = (iy as i64 + dy) as usize;
                    let jx = (ix as i64 + dx) as usize;
                    if grid.values[(jy, jx)] >= v {
                        is_peak = false;
                    }
                }
            }
            if is_peak {
                peaks.push((Point2::new(grid.xs[ix], grid.ys[iy]), v));
            }
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    peaks
}
