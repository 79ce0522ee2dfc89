//! Acceptance suite: one test per release criterion, each ending in a single
//! `criterion N (<name>): PASS` line with the measured figures. Run with
//! `cargo test --test acceptance -- --nocapture` to see the figures.

mod common;

use common::{local_maxima, median};
use nalgebra::{Point2, Vector2};
use rand::Rng;
use submig::analytic::{quadrature_oracle, series_oracle};
use submig::experiment::{
    run_experiment, verify_identities, ArcSpec, ExperimentConfig, IdentitySweepConfig, SchemeSpec,
};
use submig::forward::{bie::BieSolver, far_field, SolverMode, WaveContext};
use submig::geometry::{make_line_arc, ArcSample};
use submig::imaging::{contrast, imaging_map, imaging_value, GridSpec, TestVectorScheme};
use submig::msr::{assemble, assemble_from_sample, DirectionSet};
use submig::numeric::periodic_trapezoid_real;
use submig::rng::stream_rng;
use submig::special_fn::bessel_j;
use submig::spectral::{decompose, decompose_entries, select_rank, RankPolicy};

/// Criterion 1 — dual-oracle adjudication of the direction-average identity.
///
/// 200 random (ξ, ζ, x) with k|x| ≤ 20: the discrete N = 256 direction sum
/// must agree with the quadrature oracle to 1e-3, and the two independent
/// oracles (quadrature vs angular reduction with integral-representation
/// Bessel values) must agree to 1e-9. The closed-form bracket variants are
/// recorded, never asserted.
#[test]
fn criterion_1_identity_oracle_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = IdentitySweepConfig {
        out_dir: dir.path().join("ids"),
        ..IdentitySweepConfig::default()
    };
    assert_eq!(cfg.tuples, 200);
    assert_eq!(cfg.n_directions, 256);
    assert_eq!(cfg.max_kr, 20.0);
    let s = verify_identities(&cfg).expect("sweep runs");
    assert!(
        s.max_residual_discrete_vs_quadrature < 1e-3,
        "discrete sum vs quadrature: {}",
        s.max_residual_discrete_vs_quadrature
    );
    assert!(
        s.max_residual_series_vs_quadrature < 1e-9,
        "oracle disagreement: {}",
        s.max_residual_series_vs_quadrature
    );
    assert!(s.passed);
    println!(
        "criterion 1 (identity oracle suite): PASS \
         [discrete vs quad {:.2e}; oracle pair {:.2e}; recorded closed-form residuals: \
         sum-bracket {:.2e}, difference-bracket {:.2e}, coincident {:.2e}]",
        s.max_residual_discrete_vs_quadrature,
        s.max_residual_series_vs_quadrature,
        s.max_residual_sum_form,
        s.max_residual_difference_form,
        s.max_residual_coincident_form,
    );
}

/// Criterion 2 — the angular integral table behind the closed forms,
/// verified to 1e-10 for 50 random angle tuples and harmonics n = 1..8:
/// constant × harmonic integrals vanish; the second-harmonic kernel picks
/// out `π cos(2φ−ξ−ζ)` at n = 2 and vanishes otherwise; the squared-cosine
/// kernel integrates to π and couples only to n = 2.
#[test]
fn criterion_2_angular_integral_table() {
    let mut rng = stream_rng(2024, 60);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = rng.random::<f64>() * std::f64::consts::TAU;
        let b = rng.random::<f64>() * std::f64::consts::TAU;
        let phi = rng.random::<f64>() * std::f64::consts::TAU;
        for n in 1..=8u32 {
            let nf = n as f64;
            // Constant × harmonic.
            let t1 = periodic_trapezoid_real(4096, |t: f64| (a - b).cos() * (nf * (t - phi)).cos());
            worst = worst.max(t1.abs());
            // Second-harmonic kernel.
            let t3 =
                periodic_trapezoid_real(4096, |t: f64| (2.0 * t - a - b).cos() * (nf * (t - phi)).cos());
            let t3_expect = if n == 2 {
                std::f64::consts::PI * (2.0 * phi - a - b).cos()
            } else {
                0.0
            };
            worst = worst.max((t3 - t3_expect).abs());
            // Squared-cosine kernel.
            let t2 =
                periodic_trapezoid_real(4096, |t: f64| (t - a).cos().powi(2) * (nf * (t - phi)).cos());
            let t2_expect = if n == 2 {
                0.5 * std::f64::consts::PI * (2.0 * phi - 2.0 * a).cos()
            } else {
                0.0
            };
            worst = worst.max((t2 - t2_expect).abs());
        }
        let plain = periodic_trapezoid_real(4096, |t: f64| (t - a).cos().powi(2));
        worst = worst.max((plain - std::f64::consts::PI).abs());
    }
    assert!(worst < 1e-10, "worst integral-table residual {worst}");
    println!("criterion 2 (angular integral table): PASS [worst residual {worst:.2e}]");
}

/// Criterion 3 — rank detection: a noiseless Kirchhoff MSR from M point
/// scatterers (spacing ≥ λ/2) has exactly M significant singular values:
/// σ_M/σ₁ > 1e-3 and σ_{M+1}/σ₁ < 1e-8, for M ∈ {1, 3, 5} at N = 64.
#[test]
fn criterion_3_rank_detection() {
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let dirs = DirectionSet::equispaced(64).unwrap();
    let mut figures = Vec::new();
    for m in [1usize, 3, 5] {
        // Points on the horizontal line y = 0.3 with 0.25 ≥ λ/2 spacing.
        let points: Vec<Point2<f64>> = (0..m)
            .map(|i| Point2::new(-0.25 * ((m - 1) as f64) / 2.0 + 0.25 * i as f64, 0.3))
            .collect();
        let normals = vec![Vector2::new(0.0, 1.0); m];
        let sample = ArcSample::from_parts(points, normals).unwrap();
        let msr = assemble_from_sample(&sample, &dirs, &ctx).unwrap();
        let basis = decompose_entries(&msr.entries).unwrap();
        let s1 = basis.singular_values[0];
        let signal = basis.singular_values[m - 1] / s1;
        let noisefloor = basis.singular_values[m] / s1;
        assert!(signal > 1e-3, "M={m}: σ_M/σ₁ = {signal}");
        assert!(noisefloor < 1e-8, "M={m}: σ_(M+1)/σ₁ = {noisefloor}");
        figures.push(format!("M={m}: {signal:.1e}/{noisefloor:.1e}"));
    }
    println!(
        "criterion 3 (rank detection): PASS [σ_M/σ₁ and σ_M+1/σ₁ — {}]",
        figures.join(", ")
    );
}

/// Criterion 4 — the incident-aligned scheme's ghost-replica signature for a
/// single scatterer: the imaging function nearly vanishes at y₁ itself, and
/// the two dominant peaks sit on opposite sides of y₁ along the normal, each
/// within λ/4 of the J₁²-peak offset (derived here by locating the root of
/// J₀ − J₂ = 2J₁′ with the library Bessel routines, not hard-coded).
#[test]
fn criterion_4_ghost_replica_signature() {
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let k = ctx.wavenumber();
    let lambda = ctx.wavelength();
    let y1 = Point2::new(0.0, 0.3);
    let nu = Vector2::new(0.0, 1.0);
    let sample = ArcSample::from_parts(vec![y1], vec![nu]).unwrap();
    let dirs = DirectionSet::equispaced(64).unwrap();
    let msr = assemble_from_sample(&sample, &dirs, &ctx).unwrap();
    let basis = select_rank(decompose(&msr).unwrap(), &RankPolicy::Explicit(1)).unwrap();
    let scheme = TestVectorScheme::IncidentAligned;

    let at_scatterer = imaging_value(&y1, &basis, &dirs, &ctx, &scheme).unwrap();
    assert!(at_scatterer < 0.05, "𝔉(y₁) = {at_scatterer}");

    // J₁ peak: root of J₀(z) − J₂(z) in (1, 2.5), bisected on bessel_j.
    let g = |z: f64| bessel_j(0, z).unwrap() - bessel_j(2, z).unwrap();
    let (mut lo, mut hi) = (1.0f64, 2.5f64);
    assert!(g(lo) > 0.0 && g(hi) < 0.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d_star = 0.5 * (lo + hi) / k;

    let spec = GridSpec {
        x_min: -0.5,
        x_max: 0.5,
        y_min: -0.2,
        y_max: 0.8,
        step: lambda / 20.0,
    };
    let map = imaging_map(&basis, &dirs, &ctx, &scheme, &spec).unwrap();
    let peaks = local_maxima(&map);
    assert!(peaks.len() >= 2, "found {} local maxima", peaks.len());
    let s0 = (peaks[0].0 - y1).dot(&nu);
    let s1 = (peaks[1].0 - y1).dot(&nu);
    assert!(
        s0 * s1 < 0.0,
        "two dominant peaks on the same side: offsets {s0} and {s1}"
    );
    for (i, s) in [s0, s1].iter().enumerate() {
        assert!(
            (s.abs() - d_star).abs() < lambda / 4.0,
            "peak {i} offset {} vs predicted {d_star}",
            s.abs()
        );
    }
    println!(
        "criterion 4 (ghost replicas): PASS [𝔉(y₁) = {at_scatterer:.2e}; offsets {s0:.4}/{s1:.4} \
         vs predicted ±{d_star:.4}, tolerance λ/4 = {:.4}]",
        lambda / 4.0
    );
}

/// Criterion 5 — first full-pipeline experiment (boundary-integral data,
/// N = 20, λ = 0.4, 20 dB noise, seeds 0..9): the image contrast is ordered
/// ξ∠90° > ξ∠60° > ξ∠30° in the median, the 90° panel out-contrasts the 0°
/// panel at least 3×, and the 90° argmax lands within λ/4 of the arc in at
/// least 9 of 10 seeds.
#[test]
fn criterion_5_line_arc_contrast_ordering() {
    let arc = make_line_arc::<f64>();
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let lambda = ctx.wavelength();
    let dirs = DirectionSet::equispaced(20).unwrap();
    let noiseless = assemble(&arc, &dirs, &ctx, SolverMode::Bie, None).unwrap();
    let spec = GridSpec::default_for(&ctx);
    let angles = [90.0f64, 60.0, 30.0, 0.0];
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); angles.len()];
    let mut on_arc_hits = 0usize;
    for seed in 0..10u64 {
        let noisy = noiseless.add_awgn(20.0, seed).unwrap();
        let basis = select_rank(decompose(&noisy).unwrap(), &RankPolicy::default()).unwrap();
        for (i, angle) in angles.iter().enumerate() {
            let scheme = TestVectorScheme::fixed_xi_angle(angle.to_radians());
            let map = imaging_map(&basis, &dirs, &ctx, &scheme, &spec).unwrap();
            let stats = contrast(&map, &arc, &ctx).unwrap();
            ratios[i].push(stats.ratio);
            if i == 0 {
                let (peak, _) = submig::imaging::argmax(&map);
                if arc.distance_to(&peak) <= lambda / 4.0 {
                    on_arc_hits += 1;
                }
            }
        }
    }
    let med: Vec<f64> = ratios.iter().map(|r| median(r)).collect();
    assert!(med[0] > med[1], "90° {} vs 60° {}", med[0], med[1]);
    assert!(med[1] > med[2], "60° {} vs 30° {}", med[1], med[2]);
    assert!(
        med[0] >= 3.0 * med[3],
        "90° {} vs 3 × 0° {}",
        med[0],
        3.0 * med[3]
    );
    assert!(on_arc_hits >= 9, "argmax on the arc in {on_arc_hits}/10 seeds");
    println!(
        "criterion 5 (line-arc contrast ordering): PASS [median contrast 90°/60°/30°/0° = \
         {:.3}/{:.3}/{:.3}/{:.3}; 90° argmax within λ/4 of the arc in {on_arc_hits}/10 seeds]",
        med[0], med[1], med[2], med[3]
    );
}

/// Criterion 6 — second full-pipeline experiment (curved arc, N = 32,
/// λ = 0.5, 20 dB): the vertical test direction ξ = (0, 1) out-contrasts the
/// horizontal ξ = (1, 0) in at least 9 of 10 seeds, with contrast the
/// canonical on-arc-mean / off-arc-mean ratio.
///
/// KNOWN FAILURE, kept as stated rather than weakened. The closed-form
/// prediction maps themselves give ratio(vertical) ≈ 1.43 <
/// ratio(horizontal) ≈ 1.54 on this arc: the vertical map's (J₀+J₂) energy
/// extends far beyond the λ/2 off-mask while the horizontal map concentrates
/// in compact J₂ lobes, so the mean-ratio ordering is a near-tie that noise
/// flips seed to seed (observed 4–7 wins out of 10 across forward modes and
/// rank policies). The physical claim itself — the vertical panel lights up
/// the whole arc — holds decisively in the on-arc mean, which this test
/// reports alongside: it separates ≈ 0.67 vs ≈ 0.42 in all 10 seeds. See
/// README ("Known divergences") for the full analysis.
#[test]
fn criterion_6_curve_arc_vertical_beats_horizontal() {
    let cfg = ExperimentConfig::example2();
    let arc = cfg.arc.build().unwrap();
    let ctx = WaveContext::from_wavelength(cfg.lambda).unwrap();
    let dirs = DirectionSet::equispaced(cfg.n).unwrap();
    let noiseless = assemble(&arc, &dirs, &ctx, SolverMode::Bie, None).unwrap();
    let spec = GridSpec::default_for(&ctx);
    let mut ratio_wins = 0usize;
    let mut on_mean_wins = 0usize;
    let mut pairs = Vec::new();
    for seed in 0..10u64 {
        let noisy = noiseless.add_awgn(20.0, seed).unwrap();
        let basis = select_rank(decompose(&noisy).unwrap(), &RankPolicy::default()).unwrap();
        let stats_for = |angle: f64| {
            let scheme = TestVectorScheme::fixed_xi_angle(angle);
            let map = imaging_map(&basis, &dirs, &ctx, &scheme, &spec).unwrap();
            contrast(&map, &arc, &ctx).unwrap()
        };
        let vertical = stats_for(std::f64::consts::FRAC_PI_2);
        let horizontal = stats_for(0.0);
        if vertical.ratio > horizontal.ratio {
            ratio_wins += 1;
        }
        if vertical.on_mean > horizontal.on_mean {
            on_mean_wins += 1;
        }
        pairs.push(format!(
            "ratio {:.2} vs {:.2} / on-mean {:.2} vs {:.2}",
            vertical.ratio, horizontal.ratio, vertical.on_mean, horizontal.on_mean
        ));
    }
    println!(
        "criterion 6 companion figures: on-arc mean favors vertical in {on_mean_wins}/10 seeds; \
         per-seed [{}]",
        pairs.join("; ")
    );
    assert!(
        ratio_wins >= 9,
        "vertical wins the contrast ratio in only {ratio_wins}/10 seeds (on-arc mean: \
         {on_mean_wins}/10). The closed-form theory itself orders the mean-ratio statistic \
         horizontal ≥ vertical on this arc (≈1.54 vs ≈1.43), so per-seed ratio dominance is \
         unattainable; the underlying qualitative claim holds in the on-arc mean. \
         Per-seed figures: {pairs:?}"
    );
    println!("criterion 6 (curve-arc vertical vs horizontal): PASS [{ratio_wins}/10 seeds]");
}

/// Criterion 7 — forward-solver contracts: MSR reciprocity
/// ‖K − Kᵀ‖/‖K‖ < 1e-3 on the line arc, and far-field self-convergence
/// (relative change < 1e-3 from 128 to 256 boundary nodes).
#[test]
fn criterion_7_forward_solver_contracts() {
    let arc = make_line_arc::<f64>();
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let dirs = DirectionSet::equispaced(16).unwrap();
    let msr = assemble(&arc, &dirs, &ctx, SolverMode::Bie, None).unwrap();
    let asym = (&msr.entries - msr.entries.transpose()).norm() / msr.entries.norm();
    assert!(asym < 1e-3, "reciprocity residual {asym}");

    let theta = Vector2::new(0.6f64.cos(), 0.6f64.sin());
    let coarse_solver = BieSolver::new(&arc, &ctx, 128).unwrap();
    let fine_solver = BieSolver::new(&arc, &ctx, 256).unwrap();
    let coarse = coarse_solver.solve(&theta).unwrap();
    let fine = fine_solver.solve(&theta).unwrap();
    let mut worst = 0.0f64;
    for j in 0..12 {
        let ang = std::f64::consts::TAU * j as f64 / 12.0;
        let vartheta = Vector2::new(ang.cos(), ang.sin());
        let a = far_field(&coarse, &vartheta, &ctx);
        let b = far_field(&fine, &vartheta, &ctx);
        let rel = (a - b).norm() / b.norm().max(1e-300);
        worst = worst.max(rel);
    }
    assert!(worst < 1e-3, "self-convergence residual {worst}");
    println!(
        "criterion 7 (forward solver contracts): PASS [reciprocity {asym:.2e}; \
         128→256-node far-field change {worst:.2e}]"
    );
}

/// Criterion 8 — noise calibration: at 20 dB the empirical noise-to-signal
/// power ratio averages within ±10 % of 0.01 over 20 seeds on a 32×32
/// matrix.
#[test]
fn criterion_8_noise_calibration() {
    let arc = make_line_arc::<f64>();
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let dirs = DirectionSet::equispaced(32).unwrap();
    let clean = assemble(&arc, &dirs, &ctx, SolverMode::Kirchhoff, None).unwrap();
    let signal_power: f64 = clean.entries.iter().map(|z| z.norm_sqr()).sum();
    let mut ratios = Vec::new();
    for seed in 0..20u64 {
        let noisy = clean.add_awgn(20.0, seed).unwrap();
        let noise_power: f64 = (&noisy.entries - &clean.entries)
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        ratios.push(noise_power / signal_power);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(
        (0.009..=0.011).contains(&mean),
        "mean noise-to-signal power ratio {mean}"
    );
    println!(
        "criterion 8 (noise calibration): PASS [mean power ratio {mean:.5} over 20 seeds, \
         target 0.01 ± 10%]"
    );
}

/// Criterion 9 — determinism: the same config + seed produces byte-identical
/// CSV artifacts across independent runs.
#[test]
fn criterion_9_run_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let base = ExperimentConfig {
        arc: ArcSpec::Builtin("line".into()),
        n: 16,
        lambda: 0.4,
        snr_db: Some(20.0),
        seed: 11,
        mode: SolverMode::Kirchhoff,
        schemes: vec![
            SchemeSpec::FixedXi {
                angle_deg: 90.0,
                label: None,
            },
            SchemeSpec::IncidentAligned { label: None },
        ],
        rank_policy: RankPolicy::default(),
        grid: Some(GridSpec {
            x_min: -0.6,
            x_max: 0.6,
            y_min: 0.0,
            y_max: 0.6,
            step: 0.04,
        }),
        bie_nodes: None,
        out_dir: dir.path().join("a"),
    };
    let mut again = base.clone();
    again.out_dir = dir.path().join("b");
    run_experiment(&base).unwrap();
    run_experiment(&again).unwrap();
    let mut checked = 0usize;
    for entry in std::fs::read_dir(&base.out_dir).unwrap() {
        let name = entry.unwrap().file_name().to_string_lossy().into_owned();
        if name.ends_with(".csv") {
            let a = std::fs::read(base.out_dir.join(&name)).unwrap();
            let b = std::fs::read(again.out_dir.join(&name)).unwrap();
            assert_eq!(a, b, "{name} differs between identical runs");
            checked += 1;
        }
    }
    assert!(checked >= 3, "only {checked} CSV artifacts compared");
    println!(
        "criterion 9 (determinism): PASS [{checked} CSV artifacts byte-identical across two runs]"
    );
}

/// Companion check to criterion 1, pinning the oracle pair on the exact
/// configuration the acceptance text quotes (fresh tuples, not the sweep's):
/// 50 random tuples at k|x| ≤ 20 with both oracles head to head.
#[test]
fn criterion_1b_oracle_pair_head_to_head() {
    let ctx = WaveContext::from_wavelength(0.4).unwrap();
    let k = ctx.wavenumber();
    let mut rng = stream_rng(7, 61);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let a = rng.random::<f64>() * std::f64::consts::TAU;
        let b = rng.random::<f64>() * std::f64::consts::TAU;
        let phi = rng.random::<f64>() * std::f64::consts::TAU;
        let rad = rng.random::<f64>() * 20.0 / k;
        let xi = Vector2::new(a.cos(), a.sin());
        let zeta = Vector2::new(b.cos(), b.sin());
        let x = Point2::new(rad * phi.cos(), rad * phi.sin());
        let q = quadrature_oracle(&xi, &zeta, &x, &ctx).unwrap();
        let s = series_oracle(&xi, &zeta, &x, &ctx);
        worst = worst.max((q - s).norm());
    }
    assert!(worst < 1e-9, "oracle disagreement {worst}");
    println!("criterion 1b (oracle pair head-to-head): PASS [worst {worst:.2e}]");
}
