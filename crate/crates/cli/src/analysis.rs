//! Parameter grids, eigenvalue sweeps, level-gap analysis and the
//! quanta scan. Grid points are solved in parallel and gathered by index.

use qdimer::dimer::{build_dimer, Model};
use qdimer::spectral::eigenvalues_bisection;
use rayon::prelude::*;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GridScale {
    Linear,
    Log,
}

impl GridScale {
    pub fn name(&self) -> &'static str {
        match self {
            GridScale::Linear => "linear",
            GridScale::Log => "log",
        }
    }
}

/// `steps` points from `min` to `max` inclusive; both endpoints exact.
pub fn gamma_grid(min: f64, max: f64, steps: usize, scale: GridScale) -> Result<Vec<f64>, CliError> {
    if !(min.is_finite() && max.is_finite()) || !(min < max) {
        return Err(CliError::Usage(format!("need gamma-min < gamma-max, got {min} and {max}")));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("need at least 2 steps, got {steps}")));
    }
    if scale == GridScale::Log && min <= 0.0 {
        return Err(CliError::Usage("log grid needs gamma-min > 0".into()));
    }
    let last = (steps - 1) as f64;
    let mut grid: Vec<f64> = (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            match scale {
                GridScale::Linear => min + t * (max - min),
                GridScale::Log => (min.ln() + t * (max.ln() - min.ln())).exp(),
            }
        })
        .collect();
    grid[0] = min;
    grid[steps - 1] = max;
    Ok(grid)
}

/// Dimer eigenvalues along a γ grid.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub model: Model,
    pub two_j: u32,
    pub epsilon: f64,
    pub gamma_grid: Vec<f64>,
    /// One ascending row per grid point.
    pub eigenvalue_table: Vec<Vec<f64>>,
    /// `(scale, shift)` of the chain reconstruction per grid point.
    pub constants: Vec<(f64, f64)>,
}

pub fn sweep(model: Model, two_j: u32, epsilon: f64, grid: &[f64], tol: f64) -> Result<SweepResult, CliError> {
    let solved: Vec<(Vec<f64>, (f64, f64))> = grid
        .par_iter()
        .map(|&gamma| {
            let h = build_dimer(model, two_j, gamma, epsilon)?;
            let c = h.constants();
            Ok((eigenvalues_bisection(&h, tol)?, (c.scale, c.shift)))
        })
        .collect::<Result<_, qdimer::Error>>()?;
    let (eigenvalue_table, constants) = solved.into_iter().unzip();
    Ok(SweepResult {
        model,
        two_j,
        epsilon,
        gamma_grid: grid.to_vec(),
        eigenvalue_table,
        constants,
    })
}

/// Chain energies (`scale · λ + shift`) in ascending order.
pub fn chain_energies(model: Model, two_j: u32, gamma: f64, epsilon: f64, tol: f64) -> Result<Vec<f64>, CliError> {
    let h = build_dimer(model, two_j, gamma, epsilon)?;
    let c = h.constants();
    let mut e: Vec<f64> = eigenvalues_bisection(&h, tol)?
        .into_iter()
        .map(|l| c.chain_energy(l))
        .collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Smallest gap between neighbouring levels.
pub fn min_neighbor_gap(levels: &[f64]) -> f64 {
    levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

/// `Δ_k(γ) = E_{2k+1} - E_{2k}` of the ascending chain spectrum, with the
/// centred log-log slope at interior grid points.
#[derive(Debug, Clone)]
pub struct GapAnalysis {
    /// 1-based: pair 1 is the lowest pair.
    pub pair: usize,
    pub gamma_grid: Vec<f64>,
    pub gap: Vec<f64>,
    /// `None` at the two endpoints.
    pub loglog_slope: Vec<Option<f64>>,
}

impl GapAnalysis {
    /// Grid point with the largest `|d² ln Δ / d(ln γ)²|`.
    pub fn steepest_change(&self) -> Option<(usize, f64)> {
        let x: Vec<f64> = self.gamma_grid.iter().map(|g| g.ln()).collect();
        let y: Vec<f64> = self.gap.iter().map(|d| d.ln()).collect();
        (1..x.len().saturating_sub(1))
            .filter_map(|i| {
                let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
                let d2 = 2.0 * (h0 * y[i + 1] - (h0 + h1) * y[i] + h1 * y[i - 1]) / (h0 * h1 * (h0 + h1));
                d2.is_finite().then_some((i, d2.abs()))
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn slope_at(&self, gamma: f64) -> Option<f64> {
        let i = self.gamma_grid.iter().position(|&g| g == gamma)?;
        self.loglog_slope[i]
    }
}

pub fn gap_analysis(
    model: Model,
    two_j: u32,
    pairs: usize,
    epsilon: f64,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<GapAnalysis>, CliError> {
    let levels = two_j as usize + 1;
    if pairs == 0 || 2 * pairs > levels {
        return Err(CliError::Usage(format!(
            "pair index out of range: {pairs} pairs requested, two_j = {two_j} has {} complete pairs",
            levels / 2
        )));
    }
    if grid.iter().any(|&g| g <= 0.0) {
        return Err(CliError::Usage("gap analysis needs gamma > 0 (log-log slopes)".into()));
    }
    let spectra: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&g| chain_energies(model, two_j, g, epsilon, tol))
        .collect::<Result<_, _>>()?;
    Ok((0..pairs)
        .map(|k| {
            let gap: Vec<f64> = spectra.iter().map(|e| e[2 * k + 1] - e[2 * k]).collect();
            let n = grid.len();
            let loglog_slope = (0..n)
                .map(|i| {
                    (i > 0 && i + 1 < n).then(|| (gap[i + 1].ln() - gap[i - 1].ln()) / (grid[i + 1].ln() - grid[i - 1].ln()))
                })
                .collect();
            GapAnalysis {
                pair: k + 1,
                gamma_grid: grid.to_vec(),
                gap,
                loglog_slope,
            }
        })
        .collect())
}

/// Lowest `levels` chain energies for every `two_j = 1..=two_j_max`.
pub fn quanta_scan(
    model: Model,
    gamma: f64,
    epsilon: f64,
    two_j_max: u32,
    levels: usize,
    tol: f64,
) -> Result<Vec<(u32, Vec<f64>)>, CliError> {
    if two_j_max < 1 {
        return Err(CliError::Usage("two-j-max must be at least 1".into()));
    }
    if levels == 0 {
        return Err(CliError::Usage("levels must be at least 1".into()));
    }
    (1..=two_j_max)
        .into_par_iter()
        .map(|two_j| {
            let mut e = chain_energies(model, two_j, gamma, epsilon, tol)?;
            e.truncate(levels);
            Ok((two_j, e))
        })
        .collect()
}
