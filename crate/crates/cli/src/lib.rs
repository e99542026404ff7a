//! Command-line front end for `weak-dirac`. Each subcommand prints a short
//! summary to stdout and, with `--out`, writes a CSV or JSON report that
//! embeds the full [`RunConfig`].

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use weak_dirac::clifford::verify_clifford;
use weak_dirac::fields::{dirac_fd, gaussian_spinor, loss_yau, magnitude};
use weak_dirac::lab;
use weak_dirac::measure::dirac_inverse_apply;
use weak_dirac::quadrature::{halton, VectorNorm};
use weak_dirac::{build_gamma_set, QuadratureSpec};

pub use config::{Format, PGrid, RunConfig};
use output::{emit, Field, Table};

#[derive(Debug, Parser)]
#[command(
    name = "weak-dirac",
    version,
    about = "L¹ Dirac–Sobolev and Dirac–Hardy experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum NormArg {
    L1,
    L2,
}

/// Quadrature and reproducibility flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Gauss–Legendre panels on [0, 1] and per decade beyond it.
    #[arg(long, default_value_t = 64)]
    pub panels: usize,
    /// Radial cutoff for numerical integration [default: max(n)+2 for sweeps, else 50].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Gauss–Legendre order per polar angle on spheres.
    #[arg(long, default_value_t = 8)]
    pub angular_order: usize,
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Pointwise norm on spinor values.
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    pub norm: NormArg,
    /// Report format [default: from the file extension, csv unless .json].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    fn quadrature(&self, default_r_max: f64) -> QuadratureSpec {
        QuadratureSpec {
            panels: self.panels,
            r_max: self.r_max.unwrap_or(default_r_max),
            angular_order: self.angular_order,
            mc_samples: self.mc_samples,
            seed: self.seed,
            vector_norm: match self.norm {
                NormArg::L1 => VectorNorm::L1,
                NormArg::L2 => VectorNorm::L2,
            },
        }
    }
}

fn dimension(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (3..=12).contains(&m) {
        Ok(m)
    } else {
        Err(format!("m must be in 3..=12, got {m}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the gamma matrices and check the Clifford relations exactly.
    GammaCheck {
        #[arg(long, default_value = "3", value_parser = dimension)]
        m: usize,
        /// Write the generators as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Loss–Yau magnitude and eigen-equation at quasi-random points.
    ZeroMode {
        #[arg(long, default_value = "3", value_parser = dimension)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Strong norms of the cut-off zero mode against the L¹ norm of its Dirac image.
    Sweep {
        #[arg(long, default_value = "3", value_parser = dimension)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form and quadrature lower bounds on the Dirac–Sobolev constant.
    Constants {
        /// Grid A:B:STEP inside (1, 3).
        #[arg(long)]
        p_grid: PGrid,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Weak Dirac–Hardy chain for the cut-off zero mode.
    WeakHardy {
        #[arg(long, default_value = "3", value_parser = dimension)]
        m: usize,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Fuzz the weak Hölder inequality on random simple functions.
    WeakHolder {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
        dim: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Reconstruct a gaussian spinor from its Dirac image.
    RieszCheck {
        #[arg(long, default_value = "3", value_parser = dimension)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of a subcommand that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    /// False when a checked identity or inequality failed.
    pub passed: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Arguments parsed but were rejected by the library.
    Usage(String),
    /// Anything else, I/O included.
    Runtime(String),
}

impl From<weak_dirac::Error> for CliError {
    fn from(e: weak_dirac::Error) -> Self {
        use weak_dirac::Error as E;
        match e {
            E::DimensionRange { .. }
            | E::Argument(_)
            | E::Domain { .. }
            | E::NonConjugate { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.to_string_lossy().into_owned())
}

fn config(name: &str, common: &Common, default_r_max: f64, out: &Option<PathBuf>) -> RunConfig {
    let mut cfg = RunConfig::new(name, common.quadrature(default_r_max));
    cfg.output = path_string(out);
    cfg.format = common.format;
    cfg
}

const DEFAULT_R_MAX: f64 = 50.0;

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::GammaCheck { m, dump, common } => {
            let mut cfg = config("gamma-check", &common, DEFAULT_R_MAX, &dump);
            cfg.m = Some(m);
            gamma_check(&cfg)
        }
        Command::ZeroMode {
            m,
            points,
            out,
            common,
        } => {
            let mut cfg = config("zero-mode", &common, DEFAULT_R_MAX, &out);
            cfg.m = Some(m);
            cfg.points = Some(points);
            zero_mode(&cfg)
        }
        Command::Sweep { m, n, out, common } => {
            let r_max = n.iter().copied().fold(f64::MIN, f64::max) + 2.0;
            let mut cfg = config("sweep", &common, r_max, &out);
            cfg.m = Some(m);
            cfg.n_list = Some(n);
            sweep(&cfg)
        }
        Command::Constants {
            p_grid,
            out,
            common,
        } => {
            let mut cfg = config("constants", &common, DEFAULT_R_MAX, &out);
            cfg.p_grid = Some(p_grid);
            constants(&cfg)
        }
        Command::WeakHardy { m, n, out, common } => {
            let mut cfg = config("weak-hardy", &common, DEFAULT_R_MAX, &out);
            cfg.m = Some(m);
            cfg.n_list = Some(vec![n]);
            weak_hardy(&cfg)
        }
        Command::WeakHolder {
            dim,
            trials,
            out,
            common,
        } => {
            let mut cfg = config("weak-holder", &common, DEFAULT_R_MAX, &out);
            cfg.dim = Some(dim as usize);
            cfg.trials = Some(trials);
            weak_holder(&cfg)
        }
        Command::RieszCheck { m, out, common } => {
            let mut cfg = config("riesz-check", &common, DEFAULT_R_MAX, &out);
            cfg.m = Some(m);
            riesz_check(&cfg)
        }
    }
}

fn gamma_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = cfg.m.unwrap();
    let gs = build_gamma_set(m)?;
    let report = verify_clifford(&gs, 0.0);
    if let Some(out) = &cfg.output {
        let doc: serde_json::Value =
            serde_json::from_str(&gs.to_json()?).map_err(weak_dirac::Error::from)?;
        let mut table = Table::new(&[
            "m",
            "ell",
            "hermiticity_defect",
            "anticommutator_defect",
            "pass",
        ]);
        table.push(vec![
            Field::Int(m as u64),
            Field::Int(report.ell as u64),
            Field::Num(report.hermiticity_defect),
            Field::Num(report.anticommutator_defect),
            Field::Bool(report.pass),
        ]);
        let cfg = RunConfig {
            format: Some(cfg.format.unwrap_or(Format::Json)),
            output: Some(out.clone()),
            ..cfg.clone()
        };
        emit(
            &cfg,
            &table,
            &serde_json::json!({ "check": report, "gamma_set": doc }),
        )?;
    }
    Ok(Outcome {
        summary: format!(
            "gamma-check m = {m}, spinor dimension {}: hermiticity defect {}, anticommutator defect {}",
            report.ell, report.hermiticity_defect, report.anticommutator_defect
        ),
        passed: report.pass,
    })
}

fn zero_mode(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = cfg.m.unwrap();
    let points = cfg.points.unwrap();
    if points == 0 {
        return Err(CliError::Usage("--points must be >= 1".into()));
    }
    let psi = loss_yau(m)?;
    let gs = psi.gammas().unwrap().clone();
    let (h1, h2) = (1e-2, 5e-3);
    let mut header: Vec<String> = vec!["point".into()];
    header.extend((1..=m).map(|j| format!("x{j}")));
    for h in [
        "r",
        "magnitude",
        "expected",
        "identity_error",
        "fd_error_h",
        "fd_error_half_h",
    ] {
        header.push(h.into());
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let (mut worst, mut e1_sum, mut e2_sum) = (0.0f64, 0.0, 0.0);
    let mut rows_json = Vec::with_capacity(points);
    for k in 1..=points {
        let x: Vec<f64> = halton(k as u64, m).iter().map(|u| 4.0 * u - 2.0).collect();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let value = psi.evaluate(&x);
        let mag = magnitude(&value, VectorNorm::L2);
        let expected = (1.0 + r2).powf(-0.5 * (m as f64 - 1.0));
        let err = (mag - expected).abs();
        let target = &value * weak_dirac::clifford::C64::new(m as f64 / (1.0 + r2), 0.0);
        let e1 = (dirac_fd(&gs, &psi, &x, h1)? - &target).norm();
        let e2 = (dirac_fd(&gs, &psi, &x, h2)? - &target).norm();
        worst = worst.max(err);
        e1_sum += e1;
        e2_sum += e2;
        let mut row = vec![Field::Int(k as u64)];
        row.extend(x.iter().map(|v| Field::Num(*v)));
        row.extend([r2.sqrt(), mag, expected, err, e1, e2].map(Field::Num));
        table.push(row);
        rows_json.push(serde_json::json!({
            "point": k, "x": x, "magnitude": mag, "expected": expected,
            "identity_error": err, "fd_error_h": e1, "fd_error_half_h": e2,
        }));
    }
    let order = (e1_sum / e2_sum).log2();
    let passed = worst <= 1e-12 && (order - 2.0).abs() <= 0.1;
    let report = serde_json::json!({
        "m": m, "h": h1, "max_identity_error": worst, "convergence_order": order,
        "pass": passed, "rows": rows_json,
    });
    emit(cfg, &table, &report)?;
    Ok(Outcome {
        summary: format!(
            "zero-mode m = {m}, {points} points: max | |ψ| - (1+r²)^(-(m-1)/2) | = {worst:e}, finite-difference order {order:.4}"
        ),
        passed,
    })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = cfg.m.unwrap();
    let quad = &cfg.quadrature;
    let report = lab::counterexample_sweep(m, cfg.n_list.as_ref().unwrap(), quad)?;
    let bound = lab::rhs_envelope_bound(m, quad)?;
    let mut table = Table::new(&["n", "lhs", "rhs", "ratio", "note"]);
    let mut summary = format!(
        "sweep m = {m}\n{:>14} {:>14} {:>14} {:>14}\n",
        "n", "lhs", "rhs", "ratio"
    );
    for r in &report.rows {
        table.push(vec![
            Field::Num(r.n),
            Field::Num(r.lhs),
            Field::Num(r.rhs),
            Field::Num(r.ratio),
            Field::Text(r.note.clone().unwrap_or_default()),
        ]);
        let _ = writeln!(
            summary,
            "{:>14.6e} {:>14.8} {:>14.8} {:>14.8}",
            r.n, r.lhs, r.rhs, r.ratio
        );
    }
    let monotone = report.rows.windows(2).all(|w| w[0].ratio < w[1].ratio);
    let clean = report.rows.iter().all(|r| r.note.is_none());
    let bounded = report.max_rhs <= bound;
    let _ = write!(
        summary,
        "max rhs {:.8} (envelope bound {bound:.8})",
        report.max_rhs
    );
    if let Some(fit) = report.fit {
        let _ = write!(
            summary,
            "\nfit lhs^(m/(m-1)) = {:.6} ln n + {:.6}, R² = {:.6} over {} rows",
            fit.slope, fit.intercept, fit.r_squared, fit.points
        );
    }
    emit(
        cfg,
        &table,
        &serde_json::json!({ "sweep": report, "rhs_envelope_bound": bound }),
    )?;
    Ok(Outcome {
        summary,
        passed: monotone && clean && bounded,
    })
}

fn constants(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.p_grid.unwrap().points();
    let report = lab::constant_report(&grid, &cfg.quadrature)?;
    let mut table = Table::new(&[
        "p",
        "p_star",
        "lower_bound",
        "ratio",
        "sobolev",
        "contrast",
        "dominates",
    ]);
    for r in &report.rows {
        table.push(vec![
            Field::Num(r.p),
            Field::Num(r.p_star),
            Field::Num(r.lower_bound),
            Field::Num(r.ratio),
            Field::Num(r.sobolev),
            Field::Num(r.contrast),
            Field::Bool(r.dominates),
        ]);
    }
    emit(cfg, &table, &report)?;
    let worst = report
        .rows
        .iter()
        .map(|r| r.ratio / r.lower_bound)
        .fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        summary: format!(
            "constants over {} grid points: ratio >= bound everywhere: {} (smallest ratio/bound {worst:.6}); bound grows toward p = 1: {}",
            report.rows.len(),
            report.all_dominate,
            report.blowup_toward_one
        ),
        passed: report.all_dominate,
    })
}

fn weak_hardy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = cfg.m.unwrap();
    let n = cfg.n_list.as_ref().unwrap()[0];
    let f = lab::cutoff_zero_mode(m, n)?;
    let r = lab::weak_hardy_check(m, &f, &cfg.quadrature)?;
    let closed = lab::hardy_coefficient_closed_form(m);
    let forms_agree = (closed - r.coeff).abs() <= 1e-12 * r.coeff;
    let mut table = Table::new(&[
        "m",
        "n",
        "lhs",
        "rhs",
        "weak",
        "coeff",
        "coeff_closed_form",
        "slack",
    ]);
    table.push(vec![
        Field::Int(m as u64),
        Field::Num(n),
        Field::Num(r.lhs),
        Field::Num(r.rhs),
        Field::Num(r.weak),
        Field::Num(r.coeff),
        Field::Num(closed),
        Field::Num(r.slack),
    ]);
    emit(
        cfg,
        &table,
        &serde_json::json!({ "check": r, "coeff_closed_form": closed }),
    )?;
    Ok(Outcome {
        summary: format!(
            "weak-hardy m = {m}, n = {n}: ‖f/|x|‖_(1,∞) = {:.8} <= {:.6}·‖f‖_(m/(m-1),∞) = {:.8} (slack {:.8}); ‖(γ·p)f‖_1 = {:.8}",
            r.lhs,
            r.coeff,
            r.coeff * r.weak,
            r.slack,
            r.rhs
        ),
        passed: r.slack > 0.0 && forms_agree,
    })
}

fn weak_holder(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dim = cfg.dim.unwrap();
    let trials = cfg.trials.unwrap();
    let r = lab::weak_holder_fuzz(dim, trials, cfg.quadrature.seed)?;
    let mut table = Table::new(&[
        "dim",
        "trials",
        "seed",
        "annulus_trials",
        "box_trials",
        "max_ratio",
        "violations",
        "epsilon_checks",
        "epsilon_worst_gap",
        "epsilon_failures",
    ]);
    table.push(vec![
        Field::Int(dim as u64),
        Field::Int(trials),
        Field::Int(r.seed),
        Field::Int(r.annulus_trials),
        Field::Int(r.box_trials),
        Field::Num(r.max_ratio),
        Field::Int(r.violations.len() as u64),
        Field::Int(r.epsilon_checks),
        Field::Num(r.epsilon_worst_gap),
        Field::Int(r.epsilon_failures),
    ]);
    emit(cfg, &table, &r)?;
    Ok(Outcome {
        summary: format!(
            "weak-holder d = {dim}: {trials} trials, {} violations, largest lhs/rhs {:.6}; ε-split checked on {} trials, {} off-grid",
            r.violations.len(),
            r.max_ratio,
            r.epsilon_checks,
            r.epsilon_failures
        ),
        passed: r.violations.is_empty() && r.epsilon_failures == 0,
    })
}

/// Probe points for the reconstruction check: the origin and four points at
/// increasing radius in fixed, non-axial directions.
pub fn riesz_probes(m: usize) -> Vec<Vec<f64>> {
    [0.0, 0.5, 0.8, 1.2, 1.6]
        .iter()
        .enumerate()
        .map(|(k, &radius)| {
            let dir: Vec<f64> = (0..m).map(|j| ((k * m + j) as f64 + 0.5).cos()).collect();
            let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            dir.iter().map(|v| radius * v / len).collect()
        })
        .collect()
}

pub const RIESZ_TOLERANCE: f64 = 1e-4;

fn riesz_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let m = cfg.m.unwrap();
    let f = gaussian_spinor(m, 1.0)?;
    let g = f.dirac_image().unwrap();
    let gs = f.gammas().unwrap().clone();
    let mut header: Vec<String> = vec!["probe".into()];
    header.extend((1..=m).map(|j| format!("x{j}")));
    for h in ["exact", "relative_error", "error_estimate", "pass"] {
        header.push(h.into());
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    let mut rows_json = Vec::new();
    let mut passed = true;
    let mut worst = 0.0f64;
    for (k, x) in riesz_probes(m).into_iter().enumerate() {
        let exact = f.evaluate(&x);
        let q = dirac_inverse_apply(&gs, &g, &x, &cfg.quadrature)?;
        let scale = exact.norm();
        let rel = (&q.value - &exact).norm() / scale;
        let est = q.error_estimate / scale;
        let ok = rel <= RIESZ_TOLERANCE;
        passed &= ok;
        worst = worst.max(rel);
        let mut row = vec![Field::Int(k as u64)];
        row.extend(x.iter().map(|v| Field::Num(*v)));
        row.extend([
            Field::Num(scale),
            Field::Num(rel),
            Field::Num(est),
            Field::Bool(ok),
        ]);
        table.push(row);
        rows_json.push(serde_json::json!({
            "probe": k, "x": x, "exact": scale, "relative_error": rel,
            "error_estimate": est, "pass": ok,
        }));
    }
    emit(
        cfg,
        &table,
        &serde_json::json!({ "m": m, "tolerance": RIESZ_TOLERANCE, "probes": rows_json }),
    )?;
    Ok(Outcome {
        summary: format!(
            "riesz-check m = {m}: gaussian rebuilt from its Dirac image at 5 probes, worst relative error {worst:.3e} (tolerance {RIESZ_TOLERANCE:e})"
        ),
        passed,
    })
}
