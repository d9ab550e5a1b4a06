//! Dimer eigenproblem by the three-term recurrence: Sturm bisection for the
//! eigenvalues, `ψ_k(λ) / w_k` for the eigenvectors, and the orthonormality,
//! completeness and parity checks built on them.

mod checks;
mod epsilon;
mod sturm;
mod vectors;

use nalgebra::DMatrix;

use crate::dimer::TridiagonalHamiltonian;
use crate::error::{Error, Result};

pub use checks::{
    characteristic_coefficients, completeness_check, confluent_cd_check, df_orthonormality_check, min_gap,
    nondegeneracy_check, parity_structure_check, reconstruction_check, trace_identity_check, DfResidual,
    ParityReport, PARITY_TOLERANCE,
};
pub use epsilon::{epsilon_factors, ln_epsilon_factors};
pub use sturm::{sturm_eval, SturmEvaluation};
pub use vectors::{eigenvector_from_recurrence, RecurrenceEigenvector, NOT_EIGENVALUE_RELATIVE};

/// Eigenvalues closer than this (times `max(1, ‖H‖)`) are treated as one
/// cluster when orthogonalizing fallback vectors.
pub const CLUSTER_RELATIVE: f64 = 1e-3;

const RECURRENCE_ACCEPT: f64 = 1e-11;
const OVERLAP_LIMIT: f64 = 1e-10;

/// How an eigenvector column was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorPath {
    Recurrence,
    InverseIteration,
    Dense,
}

/// Eigen-decomposition of a dimer Hamiltonian.
#[derive(Debug, Clone)]
pub struct Spectrum {
    hamiltonian: TridiagonalHamiltonian,
    eigenvalues: Vec<f64>,
    vectors: DMatrix<f64>,
    norm_constants: Vec<f64>,
    ln_norm_constants: Vec<f64>,
    ln_weights: Vec<f64>,
    paths: Vec<VectorPath>,
}

impl Spectrum {
    pub fn hamiltonian(&self) -> &TridiagonalHamiltonian {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `a` is the unit eigenvector of `eigenvalues()[a]`.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn vector(&self, a: usize) -> Vec<f64> {
        self.vectors.column(a).iter().copied().collect()
    }

    /// `𝒩_a`, the first component of each eigenvector.
    pub fn norm_constants(&self) -> &[f64] {
        &self.norm_constants
    }

    pub fn ln_norm_constants(&self) -> &[f64] {
        &self.ln_norm_constants
    }

    /// `ln w_k`, `w_k = o_0 … o_{k-1}`; equals `ln ε_k + k ln|ε|`.
    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    /// `ε_k` of the underlying model.
    pub fn epsilon_factors(&self) -> Result<Vec<f64>> {
        let h = &self.hamiltonian;
        epsilon_factors(h.sector().two_j(), h.model(), h.gamma())
    }

    pub fn paths(&self) -> &[VectorPath] {
        &self.paths
    }

    /// Energies of the originating chain, `scale · λ + shift`, ascending.
    pub fn chain_energies(&self) -> Vec<f64> {
        let c = self.hamiltonian.constants();
        let mut e: Vec<f64> = self.eigenvalues.iter().map(|&l| c.chain_energy(l)).collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// All eigenvalues, ascending, each bracketed by Sturm-count bisection to
/// width `tol · max(1, |λ|)` (never wider than `tol · max(1, ‖H‖)`) or to
/// the resolution of `f64`.
pub fn eigenvalues_bisection(h: &TridiagonalHamiltonian, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let n = h.dim();
    let (mut g_lo, mut g_hi) = h.gershgorin_bounds();
    // Rounding in the recurrence can misplace an eigenvalue sitting exactly
    // on a Gershgorin edge; widen until the counts are right.
    let mut pad = f64::EPSILON * h.norm_inf().max(1.0) * (n as f64 + 1.0);
    g_lo -= pad;
    g_hi += pad;
    while sturm::sturm_count(h, g_lo) > 0 || sturm::sturm_count(h, g_hi) < n {
        pad *= 2.0;
        g_lo -= pad;
        g_hi += pad;
    }
    let mut out = Vec::with_capacity(n);
    let mut floor = g_lo;
    for k in 0..n {
        // Smallest λ with more than k eigenvalues below it.
        let (mut lo, mut hi) = (floor, g_hi);
        debug_assert!(sturm::sturm_count(h, lo) <= k && sturm::sturm_count(h, hi) > k);
        loop {
            if hi - lo <= tol * lo.abs().max(hi.abs()).max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm::sturm_count(h, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        out.push(lambda);
        floor = lo;
    }
    Ok(out)
}

/// Eigenvalues by bisection, eigenvectors by the recurrence, with inverse
/// iteration for columns whose recurrence vector is not accurate enough.
///
/// Eigenvalues are bisected to `min(tol, ε)`: the recurrence vector is only
/// usable at a fully resolved root.
pub fn solve(h: &TridiagonalHamiltonian, tol: f64) -> Result<Spectrum> {
    let lambdas = eigenvalues_bisection(h, tol.min(f64::EPSILON))?;
    let n = h.dim();
    let scale = h.norm_inf().max(1.0);
    let (ln_weights, _) = vectors::coupling_weights(h);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut ln_norms = Vec::with_capacity(n);
    let mut paths = Vec::with_capacity(n);

    for (a, &lambda) in lambdas.iter().enumerate() {
        let gap = [a.checked_sub(1), (a + 1 < n).then_some(a + 1)]
            .into_iter()
            .flatten()
            .map(|b| (lambdas[b] - lambda).abs())
            .fold(f64::INFINITY, f64::min);
        let accepted = match eigenvector_from_recurrence(h, lambda) {
            Ok(v) if v.residual <= RECURRENCE_ACCEPT * scale && v.residual <= RECURRENCE_ACCEPT * gap => {
                let clash = columns.iter().any(|c: &Vec<f64>| {
                    c.iter().zip(&v.coefficients).map(|(x, y)| x * y).sum::<f64>().abs() > OVERLAP_LIMIT
                });
                (!clash).then_some(v)
            }
            _ => None,
        };
        match accepted {
            Some(v) => {
                ln_norms.push(v.ln_norm_constant);
                columns.push(v.coefficients);
                paths.push(VectorPath::Recurrence);
            }
            None => {
                let cluster: Vec<&[f64]> = (0..a)
                    .filter(|&b| (lambdas[b] - lambda).abs() <= CLUSTER_RELATIVE * scale)
                    .map(|b| columns[b].as_slice())
                    .collect();
                log::debug!(
                    "eigenvector {a} (λ = {lambda}) by inverse iteration, cluster of {}",
                    cluster.len()
                );
                let x = vectors::inverse_iteration(h, lambda, &cluster, 64.0 * f64::EPSILON * scale);
                ln_norms.push(x[0].abs().ln());
                columns.push(x);
                paths.push(VectorPath::InverseIteration);
            }
        }
    }

    let vectors = DMatrix::from_fn(n, n, |r, c| columns[c][r]);
    let norm_constants = (0..n).map(|a| columns[a][0]).collect();
    Ok(Spectrum {
        hamiltonian: h.clone(),
        eigenvalues: lambdas,
        vectors,
        norm_constants,
        ln_norm_constants: ln_norms,
        ln_weights,
        paths,
    })
}

/// Independent dense symmetric eigensolver, sorted ascending with the same
/// sign convention as [`solve`].
pub fn dense_oracle(h: &TridiagonalHamiltonian) -> Result<Spectrum> {
    let n = h.dim();
    let eig = h
        .to_dense()
        .try_symmetric_eigen(f64::EPSILON, 1000 * n.max(1))
        .ok_or_else(|| Error::Internal("dense symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let mut columns = Vec::with_capacity(n);
    for &i in &order {
        let mut c: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        vectors::fix_sign(&mut c);
        columns.push(c);
    }
    let vectors = DMatrix::from_fn(n, n, |r, c| columns[c][r]);
    let (ln_weights, _) = vectors::coupling_weights(h);
    Ok(Spectrum {
        hamiltonian: h.clone(),
        eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        norm_constants: columns.iter().map(|c| c[0]).collect(),
        ln_norm_constants: columns.iter().map(|c| c[0].abs().ln()).collect(),
        vectors,
        ln_weights,
        paths: vec![VectorPath::Dense; n],
    })
}
