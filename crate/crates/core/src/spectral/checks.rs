//! Orthonormality, completeness, non-degeneracy and parity checks on a
//! computed [`Spectrum`].

use nalgebra::DMatrix;

use crate::dimer::{Model, TridiagonalHamiltonian};
use crate::error::{Error, Result};
use crate::report::CheckResult;

use super::sturm::value_and_derivative;
use super::{Spectrum, VectorPath, CLUSTER_RELATIVE};

/// Tolerance for `λ_a = -λ_{N-1-a}`, relative to `max(1, |λ_a|)`, and the
/// absolute bound below which an eigenvalue counts as zero.
pub const PARITY_TOLERANCE: f64 = 1e-10;

/// Residuals of `𝒩_a 𝒩_b Σ_k (ψ_k(λ_a)/w_k)(ψ_k(λ_b)/w_k) - δ_ab`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfResidual {
    /// Largest `|·|` with `a = b`.
    pub diagonal: f64,
    /// Largest `|·|` with `a ≠ b`.
    pub off_diagonal: f64,
}

impl DfResidual {
    pub fn max(&self) -> f64 {
        self.diagonal.max(self.off_diagonal)
    }
}

/// Pairwise sums over the stored columns, each of which is
/// `𝒩_a ψ_k(λ_a) / w_k`.
pub fn df_orthonormality_check(spectrum: &Spectrum) -> DfResidual {
    let v = spectrum.vectors();
    let gram = v.transpose() * v;
    let n = spectrum.dim();
    let mut out = DfResidual {
        diagonal: 0.0,
        off_diagonal: 0.0,
    };
    for a in 0..n {
        for b in 0..n {
            if a == b {
                out.diagonal = out.diagonal.max((gram[(a, b)] - 1.0).abs());
            } else {
                out.off_diagonal = out.off_diagonal.max(gram[(a, b)].abs());
            }
        }
    }
    out
}

/// `‖Σ_a |ψ_a⟩⟨ψ_a| - I‖_max`.
pub fn completeness_check(spectrum: &Spectrum) -> f64 {
    let v = spectrum.vectors();
    let n = spectrum.dim();
    (v * v.transpose() - DMatrix::<f64>::identity(n, n)).abs().max()
}

/// `‖V Λ Vᵀ - H‖_max`.
pub fn reconstruction_check(spectrum: &Spectrum) -> f64 {
    let v = spectrum.vectors();
    let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(spectrum.eigenvalues()));
    (v * lambda * v.transpose() - spectrum.hamiltonian().to_dense()).abs().max()
}

/// Smallest consecutive eigenvalue gap; infinite for a 1×1 problem.
pub fn min_gap(spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Passes when every gap exceeds `threshold`. The reported norm is the
/// shortfall `threshold - min_gap` clamped at zero.
pub fn nondegeneracy_check(spectrum: &Spectrum, threshold: f64) -> CheckResult {
    let gap = min_gap(spectrum);
    let label = format!("min_gap={gap:e}");
    if gap > threshold {
        CheckResult::new(label, 0.0, 0.0)
    } else {
        CheckResult::new(label, threshold - gap + f64::MIN_POSITIVE, 0.0)
    }
}

/// `|Σ_a λ_a - tr H| / max(1, Σ_a |λ_a|)`.
pub fn trace_identity_check(spectrum: &Spectrum) -> f64 {
    let h = spectrum.hamiltonian();
    let trace: f64 = h.diag().iter().sum();
    let sum: f64 = spectrum.eigenvalues().iter().sum();
    let scale = spectrum.eigenvalues().iter().map(|l| l.abs()).sum::<f64>().max(1.0);
    (sum - trace).abs() / scale
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    /// `max_a |λ_a + λ_{N-1-a}|`.
    pub max_antisymmetry: f64,
    /// `max_a |λ_a + λ_{N-1-a}| / max(1, |λ_a|)`.
    pub max_relative_antisymmetry: f64,
    /// Eigenvalues with `|λ| ≤ PARITY_TOLERANCE`.
    pub zero_count: usize,
    pub expect_zero: bool,
    /// Indices `a` whose partner `N-1-a` breaks antisymmetry.
    pub offending: Vec<usize>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.max_relative_antisymmetry <= PARITY_TOLERANCE
            && self.offending.is_empty()
            && self.zero_count == usize::from(self.expect_zero)
    }
}

/// Doublet structure of the QAL spectrum: `λ_a = -λ_{N-1-a}`, one zero
/// eigenvalue exactly when the dimension is odd.
pub fn parity_structure_check(spectrum: &Spectrum) -> Result<ParityReport> {
    if spectrum.hamiltonian().model() != Model::Qal {
        return Err(Error::Domain("parity structure is a property of the QAL dimer".into()));
    }
    let ev = spectrum.eigenvalues();
    let n = ev.len();
    let mut report = ParityReport {
        max_antisymmetry: 0.0,
        max_relative_antisymmetry: 0.0,
        zero_count: ev.iter().filter(|x| x.abs() <= PARITY_TOLERANCE).count(),
        expect_zero: n % 2 == 1,
        offending: Vec::new(),
    };
    for a in 0..n {
        let r = (ev[a] + ev[n - 1 - a]).abs();
        let rel = r / ev[a].abs().max(1.0);
        report.max_antisymmetry = report.max_antisymmetry.max(r);
        report.max_relative_antisymmetry = report.max_relative_antisymmetry.max(rel);
        if rel > PARITY_TOLERANCE {
            report.offending.push(a);
        }
    }
    Ok(report)
}

/// Confluent Christoffel-Darboux identity
/// `𝒩_a⁻² = p'_N(λ_a) p_{N-1}(λ_a) / w_{N-1}²`, on isolated eigenvalues whose
/// vector came from the recurrence. Returns the largest relative deviation
/// and the number of eigenvalues tested.
pub fn confluent_cd_check(spectrum: &Spectrum) -> (f64, usize) {
    let h = spectrum.hamiltonian();
    let n = spectrum.dim();
    if n < 2 {
        return (0.0, 0);
    }
    let ev = spectrum.eigenvalues();
    let isolation = CLUSTER_RELATIVE * h.norm_inf().max(1.0);
    let ln_w_last = spectrum.ln_weights()[n - 1];
    let mut worst = 0.0f64;
    let mut tested = 0;
    for a in 0..n {
        if spectrum.paths()[a] != VectorPath::Recurrence {
            continue;
        }
        let isolated = (a == 0 || ev[a] - ev[a - 1] > isolation) && (a + 1 == n || ev[a + 1] - ev[a] > isolation);
        if !isolated {
            continue;
        }
        let (_, p_prev, dp) = value_and_derivative(h, ev[a]);
        let product = p_prev.mantissa * dp.mantissa;
        if product <= 0.0 {
            worst = f64::INFINITY;
            continue;
        }
        let ln_rhs = p_prev.ln_abs() + dp.ln_abs() - 2.0 * ln_w_last;
        let ln_lhs = -2.0 * spectrum.ln_norm_constants()[a];
        worst = worst.max((ln_rhs - ln_lhs).exp_m1().abs());
        tested += 1;
    }
    (worst, tested)
}

/// Coefficients of `p_N(λ) = det(λ - H)`, lowest power first, by
/// multiply-accumulate on coefficient arrays.
pub fn characteristic_coefficients(h: &TridiagonalHamiltonian) -> Vec<f64> {
    let d = h.diag();
    let o = h.off();
    let mut prev: Vec<f64> = Vec::new();
    let mut cur = vec![1.0];
    for k in 0..h.dim() {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= d[k] * c;
        }
        if k > 0 {
            let coupling = o[k - 1] * o[k - 1];
            for (i, c) in prev.iter().enumerate() {
                next[i] -= coupling * c;
            }
        }
        prev = cur;
        cur = next;
    }
    cur
}
