//! Command-line front end: spectra, γ sweeps, level-gap analysis, quanta
//! scans and verification suites, all written as CSV or line reports.

pub mod analysis;
pub mod csv;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdimer::dimer::{build_dimer, Model};
use qdimer::spectral::solve;

use analysis::{gamma_grid, gap_analysis, quanta_scan, sweep, GridScale};
use csv::{fmt_num, CsvTable};
use verify::{Caps, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qdimer::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Dnls,
    Al,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Dnls => Model::Qdnls,
            ModelArg::Al => Model::Qal,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdimer", version, about = "Spectra of quantum DNLS and Ablowitz-Ladik dimers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "dnls")]
    pub model: ModelArg,
    /// Twice the spin, i.e. the number of quanta.
    #[arg(long)]
    pub two_j: u32,
    /// Hopping amplitude (DNLS only).
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub gamma_min: f64,
    #[arg(long)]
    pub gamma_max: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub scale: GridScale,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and normalization constants at one γ.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: f64,
    },
    /// Eigenvalues over a γ grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Splitting of the lowest level pairs and its log-log slope.
    Gaps {
        #[arg(long, value_enum, default_value = "dnls")]
        model: ModelArg,
        #[arg(long)]
        two_j: u32,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.25)]
        gamma_min: f64,
        #[arg(long, default_value_t = 16.0)]
        gamma_max: f64,
        #[arg(long, default_value_t = 25)]
        steps: usize,
        #[arg(long, value_enum, default_value = "log")]
        scale: GridScale,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lowest chain energies against the number of quanta.
    QuantaScan {
        #[arg(long, value_enum, default_value = "al")]
        model: ModelArg,
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long)]
        two_j_max: u32,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; exit status 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 40)]
        two_j_max: u32,
        #[arg(long, default_value_t = 3)]
        max_sites: usize,
        #[arg(long, default_value_t = 4)]
        max_quanta: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_failure: bool,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tol must be positive, got {tol}")))
    }
}

fn echo_common(t: &mut CsvTable, command: &str, model: Model, two_j: u32, epsilon: f64, tol: f64) {
    t.param("command", command)
        .param("model", model)
        .param("two_j", two_j)
        .param_num("epsilon", epsilon)
        .param_num("tol", tol)
        .param("version", env!("CARGO_PKG_VERSION"));
}

pub fn spectrum_csv(model: Model, two_j: u32, gamma: f64, epsilon: f64, tol: f64) -> Result<String, CliError> {
    check_tol(tol)?;
    let h = build_dimer(model, two_j, gamma, epsilon)?;
    let s = solve(&h, tol)?;
    let c = h.constants();
    let mut t = CsvTable::new(["index", "eigenvalue", "norm_constant", "chain_energy"]);
    echo_common(&mut t, "spectrum", model, two_j, epsilon, tol);
    t.param_num("gamma", gamma)
        .param_num("chain_scale", c.scale)
        .param_num("chain_shift", c.shift)
        .param_num("chain_gamma", c.chain_gamma);
    for (a, &l) in s.eigenvalues().iter().enumerate() {
        t.row(vec![
            a.to_string(),
            fmt_num(l),
            fmt_num(s.norm_constants()[a]),
            fmt_num(c.chain_energy(l)),
        ]);
    }
    Ok(t.render())
}

pub fn sweep_csv(model: Model, two_j: u32, epsilon: f64, tol: f64, grid: &GridArgs) -> Result<String, CliError> {
    check_tol(tol)?;
    let g = gamma_grid(grid.gamma_min, grid.gamma_max, grid.steps, grid.scale)?;
    let r = sweep(model, two_j, epsilon, &g, tol)?;
    let dim = two_j as usize + 1;
    let mut header = vec!["gamma".to_string(), "chain_scale".into(), "chain_shift".into()];
    header.extend((0..dim).map(|k| format!("lambda_{k}")));
    let mut t = CsvTable::new(header);
    echo_common(&mut t, "sweep", model, two_j, epsilon, tol);
    t.param_num("gamma_min", grid.gamma_min)
        .param_num("gamma_max", grid.gamma_max)
        .param("steps", grid.steps)
        .param("scale", grid.scale.name());
    for ((gamma, row), (scale, shift)) in r.gamma_grid.iter().zip(&r.eigenvalue_table).zip(&r.constants) {
        let mut cells = vec![fmt_num(*gamma), fmt_num(*scale), fmt_num(*shift)];
        cells.extend(row.iter().map(|&x| fmt_num(x)));
        t.row(cells);
    }
    Ok(t.render())
}

#[allow(clippy::too_many_arguments)]
pub fn gaps_csv(
    model: Model,
    two_j: u32,
    pairs: usize,
    epsilon: f64,
    tol: f64,
    grid: &GridArgs,
) -> Result<String, CliError> {
    check_tol(tol)?;
    let g = gamma_grid(grid.gamma_min, grid.gamma_max, grid.steps, grid.scale)?;
    let analyses = gap_analysis(model, two_j, pairs, epsilon, &g, tol)?;
    let mut header = vec!["gamma".to_string(), "ln_gamma".into()];
    for a in &analyses {
        let k = a.pair;
        header.extend([format!("gap_{k}"), format!("ln_gap_{k}"), format!("slope_{k}")]);
    }
    let mut t = CsvTable::new(header);
    echo_common(&mut t, "gaps", model, two_j, epsilon, tol);
    t.param("pairs", pairs)
        .param_num("gamma_min", grid.gamma_min)
        .param_num("gamma_max", grid.gamma_max)
        .param("steps", grid.steps)
        .param("scale", grid.scale.name())
        .param("energies", "chain");
    for (i, &gamma) in g.iter().enumerate() {
        let mut cells = vec![fmt_num(gamma), fmt_num(gamma.ln())];
        for a in &analyses {
            cells.push(fmt_num(a.gap[i]));
            cells.push(fmt_num(a.gap[i].ln()));
            cells.push(a.loglog_slope[i].map(fmt_num).unwrap_or_default());
        }
        t.row(cells);
    }
    for a in &analyses {
        match a.steepest_change() {
            Some((i, d2)) => t.trailer(format!(
                "steepest_change pair={} gamma={} abs_second_difference={}",
                a.pair,
                fmt_num(g[i]),
                fmt_num(d2)
            )),
            None => t.trailer(format!("steepest_change pair={} gamma=none", a.pair)),
        }
    }
    Ok(t.render())
}

pub fn quanta_scan_csv(
    model: Model,
    gamma: f64,
    epsilon: f64,
    two_j_max: u32,
    levels: usize,
    tol: f64,
) -> Result<String, CliError> {
    check_tol(tol)?;
    let rows = quanta_scan(model, gamma, epsilon, two_j_max, levels, tol)?;
    let mut header = vec!["two_j".to_string()];
    header.extend((0..levels).map(|k| format!("energy_{k}")));
    let mut t = CsvTable::new(header);
    t.param("command", "quanta-scan")
        .param("model", model)
        .param_num("gamma", gamma)
        .param_num("epsilon", epsilon)
        .param("two_j_max", two_j_max)
        .param("levels", levels)
        .param_num("tol", tol)
        .param("energies", "chain")
        .param("version", env!("CARGO_PKG_VERSION"));
    for (two_j, e) in rows {
        let mut cells = vec![two_j.to_string()];
        cells.extend((0..levels).map(|k| e.get(k).map(|&x| fmt_num(x)).unwrap_or_default()));
        t.row(cells);
    }
    Ok(t.render())
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Spectrum { common, gamma } => {
            let text = spectrum_csv(common.model.into(), common.two_j, gamma, common.epsilon, common.tol)?;
            emit(&common.out, &text)?;
        }
        Command::Sweep { common, grid } => {
            let text = sweep_csv(common.model.into(), common.two_j, common.epsilon, common.tol, &grid)?;
            emit(&common.out, &text)?;
        }
        Command::Gaps {
            model,
            two_j,
            pairs,
            epsilon,
            gamma_min,
            gamma_max,
            steps,
            scale,
            tol,
            out,
        } => {
            let grid = GridArgs {
                gamma_min,
                gamma_max,
                steps,
                scale,
            };
            let text = gaps_csv(model.into(), two_j, pairs, epsilon, tol, &grid)?;
            emit(&out, &text)?;
        }
        Command::QuantaScan {
            model,
            gamma,
            epsilon,
            two_j_max,
            levels,
            tol,
            out,
        } => {
            let text = quanta_scan_csv(model.into(), gamma, epsilon, two_j_max, levels, tol)?;
            emit(&out, &text)?;
        }
        Command::Verify {
            suite,
            two_j_max,
            max_sites,
            max_quanta,
            tol,
            out,
            inject_failure,
        } => {
            let lines = verify::run(
                suite,
                Caps {
                    two_j_max,
                    max_sites,
                    max_quanta,
                    tol,
                    inject_failure,
                },
            )?;
            let checks = lines.iter().filter(|l| matches!(l, verify::Line::Check { .. })).count();
            let failed = lines.iter().filter(|l| l.failed()).count();
            let mut text: String = lines.iter().map(|l| l.render() + "\n").collect();
            let status = if failed == 0 { "pass" } else { "fail" };
            text.push_str(&format!("summary checks={checks} failed={failed} status={status}\n"));
            emit(&out, &text)?;
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
    }
    Ok(EXIT_OK)
}
