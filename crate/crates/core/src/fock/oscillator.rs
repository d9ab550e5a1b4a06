//! The Ablowitz-Ladik oscillator on a truncated single-site Fock space.
//!
//! `b|n> = sqrt({n}) |n-1>`, so `b†b |n> = {n} |n>` and
//! `[b, b†] = 1 + (γ/2) b†b` away from the truncation edge.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, max_off_diagonal};
use crate::qnumbers::{basic_qnum, Q_CONTINUITY_THRESHOLD};
use crate::report::CheckReport;

pub const AL_RELATIVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct AlOscillator {
    pub gamma: f64,
    pub n_max: usize,
    pub b: DMatrix<f64>,
    pub b_dag: DMatrix<f64>,
    pub number: DMatrix<f64>,
}

/// Matrices of `b`, `b†` and `N` on `|0>, …, |n_max>`.
pub fn al_oscillator_ops(n_max: usize, gamma: f64) -> Result<AlOscillator> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be non-negative, got {gamma}")));
    }
    let dim = n_max + 1;
    let mut b = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        b[(n - 1, n)] = basic_qnum(n as u32, gamma).sqrt();
    }
    let number = DMatrix::from_fn(dim, dim, |i, j| if i == j { i as f64 } else { 0.0 });
    Ok(AlOscillator {
        gamma,
        n_max,
        b_dag: b.transpose(),
        b,
        number,
    })
}

fn relative(diff: &DMatrix<f64>, reference: &DMatrix<f64>) -> f64 {
    max_abs(diff) / max_abs(reference).max(1.0)
}

/// Residuals of `[b,b†] = 1 + (γ/2) b†b` and of
/// `N = ln(1 + (γ/2) b†b) / ln(1 + γ/2)`, on the rows and columns `n < n_max`.
pub fn verify_al_relations(osc: &AlOscillator) -> CheckReport {
    let keep = osc.n_max;
    let gamma = osc.gamma;
    let half = 0.5 * gamma;
    let sub = |m: &DMatrix<f64>| m.view((0, 0), (keep, keep)).into_owned();

    let bb = &osc.b_dag * &osc.b;
    let comm = &osc.b * &osc.b_dag - &bb;
    let expected = DMatrix::identity(keep + 1, keep + 1) + &bb * half;

    let mut report = CheckReport::new();
    report.push(
        "[b,b†]-(1+γ/2 b†b)",
        relative(&(sub(&comm) - sub(&expected)), &sub(&expected)),
        AL_RELATIVE_TOLERANCE,
    );
    report.push("b†b diagonal", max_off_diagonal(&bb), 0.0);

    let rebuilt = DMatrix::from_fn(keep + 1, keep + 1, |i, j| {
        if i != j {
            return 0.0;
        }
        let x = bb[(i, i)];
        if half < Q_CONTINUITY_THRESHOLD {
            x
        } else {
            (half * x).ln_1p() / half.ln_1p()
        }
    });
    report.push(
        "N=ln(1+γ/2 b†b)/ln(1+γ/2)",
        relative(&(sub(&rebuilt) - sub(&osc.number)), &sub(&osc.number)),
        AL_RELATIVE_TOLERANCE,
    );
    report
}
