//! `submig` — subspace-migration imaging of sound-hard arcs from
//! multi-static far-field data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use submig::error::Error;
use submig::experiment::{
    export_msr, run_experiment, verify_identities, ExperimentConfig, IdentitySweepConfig,
    RunSummary, SchemeSpec, IdentitySweepSummary, VERSION,
};
use submig::forward::SolverMode;

#[derive(Parser)]
#[command(
    name = "submig",
    version,
    about = "Subspace-migration imaging of sound-hard arcs from multi-static far-field data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full imaging experiment and write all artifacts.
    Run(RunArgs),
    /// Sweep the closed-form identities against the brute-force oracles.
    VerifyIdentities(VerifyArgs),
    /// Assemble and write only the multi-static response matrix.
    ExportMsr(ExportArgs),
    /// Print version, presets, scheme syntax, and artifact conventions.
    Info,
}

#[derive(Args)]
struct ConfigSource {
    /// Built-in preset: example1 (line arc, N=20, λ=0.4) or example2
    /// (curved arc, N=32, λ=0.5).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON experiment config file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Overrides {
    /// Override the number of incident/observation directions.
    #[arg(long)]
    n: Option<usize>,
    /// Override the wavelength.
    #[arg(long)]
    lambda: Option<f64>,
    /// Override the noise level in dB.
    #[arg(long, conflicts_with = "no_noise")]
    snr_db: Option<f64>,
    /// Disable noise entirely.
    #[arg(long)]
    no_noise: bool,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the scheme list (repeatable): `xi=<degrees>`, `incident`,
    /// or `oracle-normal`.
    #[arg(long = "scheme")]
    schemes: Vec<String>,
    /// Override the forward-data mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: ConfigSource,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    source: ConfigSource,
    #[command(flatten)]
    overrides: Overrides,
    /// Exact output file (default: `<out_dir>/msr.json`).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of random (ξ, ζ, x) tuples.
    #[arg(long, default_value_t = 200)]
    tuples: usize,
    /// Directions in the discrete sum.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Cap on k|x| for the random evaluation points.
    #[arg(long, default_value_t = 20.0)]
    max_kr: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wavelength fixing the wavenumber k.
    #[arg(long, default_value_t = 0.4)]
    lambda: f64,
    /// Output directory for identities.csv / identity_summary.json.
    #[arg(long, default_value = "out/identities")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Bie,
    Kirchhoff,
}

impl From<ModeArg> for SolverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bie => SolverMode::Bie,
            ModeArg::Kirchhoff => SolverMode::Kirchhoff,
        }
    }
}

fn parse_scheme(text: &str) -> Result<SchemeSpec, Error> {
    let t = text.trim();
    match t {
        "incident" => Ok(SchemeSpec::IncidentAligned { label: None }),
        "oracle-normal" | "oracle_normal" => Ok(SchemeSpec::OracleNormal { label: None }),
        _ => {
            if let Some(angle) = t.strip_prefix("xi=") {
                let angle_deg: f64 = angle.parse().map_err(|_| {
                    Error::Config(format!("cannot parse angle in scheme {t:?}"))
                })?;
                Ok(SchemeSpec::FixedXi {
                    angle_deg,
                    label: None,
                })
            } else {
                Err(Error::Config(format!(
                    "unknown scheme {t:?}; expected xi=<degrees>, incident, or oracle-normal"
                )))
            }
        }
    }
}

fn load_config(source: &ConfigSource, overrides: &Overrides) -> Result<ExperimentConfig, Error> {
    let mut cfg = match (&source.preset, &source.config) {
        (Some(name), None) => ExperimentConfig::preset(name)?,
        (None, Some(path)) => ExperimentConfig::from_json_file(path)?,
        (None, None) => {
            return Err(Error::Config(
                "pass --preset <example1|example2> or --config <file.json>".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if let Some(n) = overrides.n {
        cfg.n = n;
    }
    if let Some(lambda) = overrides.lambda {
        cfg.lambda = lambda;
    }
    if overrides.no_noise {
        cfg.snr_db = None;
    } else if let Some(snr) = overrides.snr_db {
        cfg.snr_db = Some(snr);
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if !overrides.schemes.is_empty() {
        cfg.schemes = overrides
            .schemes
            .iter()
            .map(|s| parse_scheme(s))
            .collect::<Result<_, _>>()?;
    }
    if let Some(mode) = overrides.mode {
        cfg.mode = mode.into();
    }
    if let Some(out) = &overrides.out {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn print_run_summary(s: &RunSummary) {
    println!(
        "wrote {} ({} artifacts, config {})",
        s.out_dir.display(),
        s.artifacts.len(),
        &s.config_hash[..12.min(s.config_hash.len())]
    );
    let snr = s
        .snr_db
        .map(|v| format!("{v} dB"))
        .unwrap_or_else(|| "none".into());
    println!(
        "  mode {}, N = {}, lambda = {}, noise {}, seed {}",
        s.mode, s.n, s.lambda, snr, s.seed
    );
    let sigma1 = s.singular_values.first().copied().unwrap_or(0.0);
    let sigma_r = s
        .singular_values
        .get(s.selected_rank.saturating_sub(1))
        .copied()
        .unwrap_or(0.0);
    println!(
        "  signal rank {} (sigma_1 = {:.3e}, sigma_rank/sigma_1 = {:.3e})",
        s.selected_rank,
        sigma1,
        if sigma1 > 0.0 { sigma_r / sigma1 } else { 0.0 }
    );
    println!(
        "  {:<14} {:>9} {:>20} {:>10}",
        "scheme", "max", "argmax", "contrast"
    );
    for r in &s.schemes {
        println!(
            "  {:<14} {:>9.3e} ({:>8.4}, {:>8.4}) {:>10.3}",
            r.label, r.max_value, r.argmax[0], r.argmax[1], r.contrast.ratio
        );
    }
}

fn print_sweep_summary(s: &IdentitySweepSummary) {
    println!(
        "{} tuples at N = {} (k = {:.4}):",
        s.tuples, s.n_directions, s.wavenumber
    );
    println!(
        "  discrete sum vs quadrature oracle : {:.3e} (tolerance {:.0e})",
        s.max_residual_discrete_vs_quadrature, s.discrete_tolerance
    );
    println!(
        "  series oracle vs quadrature oracle: {:.3e} (tolerance {:.0e})",
        s.max_residual_series_vs_quadrature, s.oracle_tolerance
    );
    println!(
        "  sum-bracket closed form           : {:.3e} (reported)",
        s.max_residual_sum_form
    );
    println!(
        "  difference-bracket closed form    : {:.3e} (reported)",
        s.max_residual_difference_form
    );
    println!(
        "  coincident-direction shortcut     : {:.3e} (reported)",
        s.max_residual_coincident_form
    );
    println!(
        "  x = 0 rows                        : {:.3e}",
        s.origin_rows_max_residual
    );
    println!("{}", if s.passed { "PASS" } else { "FAIL" });
}

const INFO_TEXT: &str = "\
submig: subspace-migration imaging of sound-hard arcs.

Presets
  example1  line arc  {(s, 0.3) : |s| <= 0.5},          N = 20, lambda = 0.4, 20 dB
  example2  curved arc (s, 0.5cos(pi s/2)+0.2sin(pi s/2)-0.1cos(3 pi s/2)),
                                                        N = 32, lambda = 0.5, 20 dB
  Both run six imaging panels: fixed xi at 90/60/45/30/0 degrees plus
  incident-aligned weights, boundary-integral forward data.

Scheme syntax (--scheme, repeatable; replaces the preset list)
  xi=<degrees>   fixed weight direction at that angle
  incident       weights aligned with the incident directions
  oracle-normal  weights aligned with the true arc normals (synthetic runs)

Artifacts written by `run` (each with a <name>.meta.json sidecar carrying
config hash, seed, and version)
  config.json             resolved configuration
  msr.json                multi-static response matrix (row-major re/im pairs)
  spectrum.csv            singular values (index,singular_value,relative)
  map_<label>.csv/.pgm    imaging map per scheme (x,y,value / 8-bit preview)
  comparison_<label>.json imaging map vs closed-form prediction statistics
  contrast.json           on-arc/off-arc contrast statistics per scheme
  run_summary.json        everything above, summarized

`verify-identities` writes identities.csv and identity_summary.json: per-tuple
residuals of the discrete direction sum, two independent oracles, and every
closed-form variant; exits nonzero if the oracles disagree or the discrete
sum fails to converge.
";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => load_config(&args.source, &args.overrides)
            .and_then(|cfg| run_experiment(&cfg))
            .map(|summary| {
                print_run_summary(&summary);
                ExitCode::SUCCESS
            }),
        Command::VerifyIdentities(args) => {
            let cfg = IdentitySweepConfig {
                tuples: args.tuples,
                max_kr: args.max_kr,
                n_directions: args.n,
                seed: args.seed,
                lambda: args.lambda,
                out_dir: args.out,
            };
            verify_identities(&cfg).map(|summary| {
                print_sweep_summary(&summary);
                println!("wrote {}", cfg.out_dir.display());
                if summary.passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            })
        }
        Command::ExportMsr(args) => load_config(&args.source, &args.overrides)
            .and_then(|cfg| export_msr(&cfg, args.file.as_deref()))
            .map(|path| {
                println!("wrote {}", path.display());
                ExitCode::SUCCESS
            }),
        Command::Info => {
            println!("submig {VERSION}");
            println!();
            println!("{INFO_TEXT}");
            Ok(ExitCode::SUCCESS)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
