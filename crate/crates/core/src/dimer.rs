//! The QDNLS and QAL dimers as symmetric tridiagonal matrices in the
//! (q-)spin basis `|j, m>`, `m = -j, …, j` ascending.
//!
//! QDNLS: `H = ε (J+ + J-) + (γ/2) J0²`.
//! QAL:   `H = J+^q + J-^q` with `J+^q |j,m> = sqrt([j-m][j+m+1]) |j,m+1>`
//! at `q = 1/sqrt(1 + γ/2)`.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::qnumbers::{q_from_gamma, sym_qnum};

/// A spin-j representation space, `j = two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSector {
    two_j: u32,
}

impl SpinSector {
    pub fn new(two_j: u32) -> Self {
        Self { two_j }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `m` of the k-th basis vector.
    pub fn m(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }

    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |k| self.m(k))
    }

    /// Total quanta `n_1 + n_2 = 2j` of the corresponding two-site sector.
    pub fn total_quanta(&self) -> u32 {
        self.two_j
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Qdnls,
    Qal,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Qdnls => "dnls",
            Model::Qal => "al",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Constants removed when reducing the two-site chain to the dimer:
/// a chain eigenvalue is `scale * λ + shift` for a dimer eigenvalue `λ`,
/// where the chain is built with nonlinearity `chain_gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroppedConstants {
    pub scale: f64,
    pub shift: f64,
    pub chain_gamma: f64,
}

impl DroppedConstants {
    pub fn chain_energy(&self, lambda: f64) -> f64 {
        self.scale * lambda + self.shift
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    sector: SpinSector,
    model: Model,
    gamma: f64,
    epsilon: f64,
    diag: Vec<f64>,
    off: Vec<f64>,
    constants: DroppedConstants,
}

impl TridiagonalHamiltonian {
    /// Build from raw arrays; used for custom matrices and tests.
    pub fn from_parts(
        sector: SpinSector,
        model: Model,
        gamma: f64,
        epsilon: f64,
        diag: Vec<f64>,
        off: Vec<f64>,
    ) -> Result<Self> {
        if diag.len() != sector.dim() || off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                left: sector.dim(),
                right: diag.len(),
            });
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self {
            sector,
            model,
            gamma,
            epsilon,
            diag,
            off,
            constants: DroppedConstants {
                scale: 1.0,
                shift: 0.0,
                chain_gamma: gamma,
            },
        })
    }

    pub fn sector(&self) -> SpinSector {
        self.sector
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Hopping amplitude; 1 for the QAL dimer.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Couplings between basis vectors `k` and `k+1`.
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn constants(&self) -> DroppedConstants {
        self.constants
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let left = if k > 0 { self.off[k - 1].abs() } else { 0.0 };
            let right = if k + 1 < n { self.off[k].abs() } else { 0.0 };
            lo = lo.min(self.diag[k] - left - right);
            hi = hi.max(self.diag[k] + left + right);
        }
        (lo, hi)
    }

    /// Infinity norm, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin_bounds();
        lo.abs().max(hi.abs())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for k in 0..n.saturating_sub(1) {
            m[(k, k + 1)] = self.off[k];
            m[(k + 1, k)] = self.off[k];
        }
        m
    }

    /// `H x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut y = self.diag[k] * x[k];
                if k > 0 {
                    y += self.off[k - 1] * x[k - 1];
                }
                if k + 1 < n {
                    y += self.off[k] * x[k + 1];
                }
                y
            })
            .collect()
    }
}

/// `H = ε (J+ + J-) + (γ/2) J0²` on spin `two_j / 2`.
pub fn build_qdnls_dimer(two_j: u32, gamma: f64, epsilon: f64) -> Result<TridiagonalHamiltonian> {
    if !gamma.is_finite() || !epsilon.is_finite() {
        return Err(Error::Domain("gamma and epsilon must be finite".into()));
    }
    if epsilon == 0.0 {
        return Err(Error::Domain(
            "epsilon must be nonzero: the recurrence needs an unreduced tridiagonal matrix".into(),
        ));
    }
    if gamma < 0.0 {
        log::warn!("negative gamma {gamma}: attractive sign convention");
    }
    if two_j == 0 {
        log::warn!("two_j = 0 gives a 1x1 Hamiltonian");
    }
    let sector = SpinSector::new(two_j);
    let j = sector.j();
    let diag = sector.m_values().map(|m| 0.5 * gamma * m * m).collect();
    let off = (0..two_j as usize)
        .map(|k| {
            let m = sector.m(k);
            epsilon * ((j - m) * (j + m + 1.0)).sqrt()
        })
        .collect();
    let mut h = TridiagonalHamiltonian::from_parts(sector, Model::Qdnls, gamma, epsilon, diag, off)?;
    let quanta = two_j as f64;
    h.constants = DroppedConstants {
        scale: -1.0,
        shift: -gamma * quanta * quanta / 8.0,
        chain_gamma: gamma / 2.0,
    };
    Ok(h)
}

/// `H = J+^q + J-^q` on q-spin `two_j / 2`, `q = 1/sqrt(1 + γ/2)`.
pub fn build_qal_dimer(two_j: u32, gamma: f64) -> Result<TridiagonalHamiltonian> {
    let deformation = q_from_gamma(gamma)?;
    if two_j == 0 {
        log::warn!("two_j = 0 gives a 1x1 Hamiltonian");
    }
    let q = deformation.q();
    let sector = SpinSector::new(two_j);
    let j = sector.j();
    let diag = vec![0.0; sector.dim()];
    let off = (0..two_j as usize)
        .map(|k| {
            let m = sector.m(k);
            (sym_qnum(j - m, q) * sym_qnum(j + m + 1.0, q)).sqrt()
        })
        .collect();
    let mut h = TridiagonalHamiltonian::from_parts(sector, Model::Qal, gamma, 1.0, diag, off)?;
    h.constants = DroppedConstants {
        scale: -q.powf(0.5 - j),
        shift: 2.0 * two_j as f64,
        chain_gamma: gamma,
    };
    Ok(h)
}

/// Build either model; `epsilon` is ignored for QAL.
pub fn build_dimer(model: Model, two_j: u32, gamma: f64, epsilon: f64) -> Result<TridiagonalHamiltonian> {
    match model {
        Model::Qdnls => build_qdnls_dimer(two_j, gamma, epsilon),
        Model::Qal => build_qal_dimer(two_j, gamma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_eigs(h: &TridiagonalHamiltonian) -> Vec<f64> {
        let mut v: Vec<f64> = h.to_dense().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn sector_labels() {
        let s = SpinSector::new(3);
        assert_eq!(s.dim(), 4);
        let ms: Vec<f64> = s.m_values().collect();
        assert_eq!(ms, vec![-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(SpinSector::new(0).dim(), 1);
    }

    #[test]
    fn qdnls_two_by_two() {
        let (gamma, eps) = (4.0, 1.0);
        let h = build_qdnls_dimer(1, gamma, eps).unwrap();
        assert_eq!(h.diag(), &[gamma / 8.0, gamma / 8.0]);
        assert_eq!(h.off(), &[eps]);
        let e = dense_eigs(&h);
        assert!((e[0] + 0.5).abs() < 1e-14 && (e[1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn qdnls_linear_limit() {
        let e = dense_eigs(&build_qdnls_dimer(2, 0.0, 1.0).unwrap());
        for (got, want) in e.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-13);
        }
        let e = dense_eigs(&build_qdnls_dimer(6, 0.0, 0.7).unwrap());
        for (k, got) in e.iter().enumerate() {
            assert!((got - 2.0 * 0.7 * (k as f64 - 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn qal_examples() {
        for gamma in [0.0, 1.0, 5.0] {
            let h = build_qal_dimer(1, gamma).unwrap();
            assert!((h.off()[0] - 1.0).abs() < 1e-15);
        }
        let h = build_qal_dimer(2, 2.0).unwrap();
        let q2 = 3.0 / 2f64.sqrt();
        assert!(h.off().iter().all(|o| (o - q2.sqrt()).abs() < 1e-14));
        let e = dense_eigs(&h);
        let top = (2.0 * q2).sqrt();
        assert!((e[0] + top).abs() < 1e-13 && e[1].abs() < 1e-13 && (e[2] - top).abs() < 1e-13);
        assert!((top - 2.0598).abs() < 1e-4);

        let e = dense_eigs(&build_qal_dimer(4, 0.0).unwrap());
        for (got, want) in e.iter().zip([-4.0, -2.0, 0.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn structural_invariants() {
        for two_j in 0..12 {
            let h = build_qal_dimer(two_j, 3.0).unwrap();
            assert!(h.diag().iter().all(|&d| d == 0.0));
            assert!(h.off().iter().all(|&o| o > 0.0));
            let h = build_qdnls_dimer(two_j, 3.0, 1.0).unwrap();
            let n = h.dim();
            for k in 0..n {
                assert_eq!(h.diag()[k], h.diag()[n - 1 - k]);
            }
        }
    }

    #[test]
    fn epsilon_sign_is_a_gauge() {
        let a = dense_eigs(&build_qdnls_dimer(7, 2.5, 1.0).unwrap());
        let b = dense_eigs(&build_qdnls_dimer(7, 2.5, -1.0).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_qdnls_dimer(3, 1.0, 0.0).is_err());
        assert!(build_qdnls_dimer(3, f64::NAN, 1.0).is_err());
        assert!(build_qal_dimer(3, -1.0).is_err());
        assert!(build_qdnls_dimer(3, -1.0, 1.0).is_ok());
    }

    #[test]
    fn gershgorin_contains_spectrum() {
        let h = build_qdnls_dimer(9, 3.0, 1.0).unwrap();
        let (lo, hi) = h.gershgorin_bounds();
        let e = dense_eigs(&h);
        assert!(lo <= e[0] && e[e.len() - 1] <= hi);
    }
}
