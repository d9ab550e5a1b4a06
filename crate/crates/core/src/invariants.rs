//! Open-chain QDNLS and QAL Hamiltonians on Fock sectors and the
//! conservation laws they satisfy.

use std::fmt;
use std::sync::Arc;

use crate::dimer::Model;
use crate::error::{Error, Result};
use crate::fock::{
    al_hop_operator, build_sector_basis, casimir_matrix, hop_operator, su_n_generators, suq2_casimir,
    suq_n_generators, total_number_operator, verify_chevalley, FockSectorBasis, SectorOperator,
};
use crate::linalg::commutator_norm;
use crate::qnumbers::q_from_gamma;
use crate::report::{CheckReport, CheckResult};

/// Largest sector handled by [`conservation_suite`].
pub const SUITE_MAX_DIM: usize = 500;

/// Relative tolerance for `[H, C₂]` and the q-Casimir, times the dimension.
pub const CASIMIR_TOLERANCE: f64 = 1e-10;
/// Relative tolerance for `[H, C₄]`, times the dimension.
pub const QUARTIC_CASIMIR_TOLERANCE: f64 = 1e-8;

fn symmetric_hops(
    basis: &Arc<FockSectorBasis>,
    hop: impl Fn(usize, usize) -> Result<SectorOperator>,
) -> Result<nalgebra::DMatrix<f64>> {
    let dim = basis.dim();
    let mut m = nalgebra::DMatrix::zeros(dim, dim);
    for i in 0..basis.n_sites().saturating_sub(1) {
        m += hop(i, i + 1)?.matrix();
        m += hop(i + 1, i)?.matrix();
    }
    Ok(m)
}

/// `H = -ε Σ (a_i† a_{i+1} + a_{i+1}† a_i) - (γ/2) Σ N_i²`, open boundary.
pub fn build_qdnls_chain(basis: &Arc<FockSectorBasis>, gamma: f64, epsilon: f64) -> Result<SectorOperator> {
    if !gamma.is_finite() || !epsilon.is_finite() {
        return Err(Error::Domain("gamma and epsilon must be finite".into()));
    }
    let hops = symmetric_hops(basis, |i, j| hop_operator(basis, i, j))?;
    let onsite = crate::fock::diagonal_operator(basis, |s| s.iter().map(|&n| (n * n) as f64).sum::<f64>());
    SectorOperator::new(basis.clone(), hops * (-epsilon) - onsite.matrix() * (0.5 * gamma))
}

/// `H = -Σ (b_i† b_{i+1} + b_{i+1}† b_i) + 2M` with Ablowitz-Ladik oscillators.
pub fn build_qal_chain(basis: &Arc<FockSectorBasis>, gamma: f64) -> Result<SectorOperator> {
    q_from_gamma(gamma)?;
    let hops = symmetric_hops(basis, |i, j| al_hop_operator(basis, i, j, gamma))?;
    let dim = basis.dim();
    let shift = 2.0 * basis.total_quanta() as f64;
    SectorOperator::new(
        basis.clone(),
        -hops + nalgebra::DMatrix::identity(dim, dim) * shift,
    )
}

/// `‖HO - OH‖_max` and whether it is within `tol`.
pub fn check_commutes(h: &SectorOperator, o: &SectorOperator, tol: f64) -> Result<(f64, bool)> {
    if h.dim() != o.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dim(),
            right: o.dim(),
        });
    }
    let norm = commutator_norm(h.matrix(), o.matrix());
    Ok((norm, norm <= tol))
}

/// Conservation residuals for one chain sector.
#[derive(Debug, Clone)]
pub struct ConservationReport {
    pub model: Model,
    pub n_sites: usize,
    pub total_quanta: u32,
    pub gamma: f64,
    pub epsilon: f64,
    pub checks: CheckReport,
}

impl ConservationReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }

    pub fn pairs(&self) -> &[CheckResult] {
        &self.checks.checks
    }
}

impl fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks.checks {
            writeln!(
                f,
                "model={} n_sites={} M={} gamma={} epsilon={} {}",
                self.model, self.n_sites, self.total_quanta, self.gamma, self.epsilon, c
            )?;
        }
        Ok(())
    }
}

/// QDNLS: `[H, C₂]`, `[H, C₄]`, `[H, h]`. QAL: `[H, h]`, plus `[H, C_q]` for
/// two sites and the q-Chevalley relations for longer chains.
pub fn conservation_suite(
    model: Model,
    n_sites: usize,
    total_quanta: u32,
    gamma: f64,
    epsilon: f64,
) -> Result<ConservationReport> {
    if n_sites < 2 {
        return Err(Error::Domain(format!("need at least two sites, got {n_sites}")));
    }
    let basis = build_sector_basis(n_sites, total_quanta)?;
    let dim = basis.dim();
    if dim > SUITE_MAX_DIM {
        return Err(Error::SectorTooLarge {
            dim: dim as u128,
            limit: SUITE_MAX_DIM,
        });
    }
    let scale = dim as f64;
    let number = total_number_operator(&basis);
    let mut checks = CheckReport::new();
    match model {
        Model::Qdnls => {
            let h = build_qdnls_chain(&basis, gamma, epsilon)?;
            let gens = su_n_generators(&basis)?;
            let c2 = casimir_matrix(&gens, 1)?;
            let c4 = casimir_matrix(&gens, 2)?;
            let (n2, _) = check_commutes(&h, &c2, 0.0)?;
            checks.push("[H,C2]", n2, CASIMIR_TOLERANCE * scale);
            let (n4, _) = check_commutes(&h, &c4, 0.0)?;
            checks.push("[H,C4]", n4, QUARTIC_CASIMIR_TOLERANCE * scale);
            let (nh, _) = check_commutes(&h, &number, 0.0)?;
            checks.push("[H,h]", nh, 0.0);
        }
        Model::Qal => {
            let h = build_qal_chain(&basis, gamma)?;
            let q = q_from_gamma(gamma)?.q();
            let gens = suq_n_generators(&basis, q)?;
            let (nh, _) = check_commutes(&h, &number, 0.0)?;
            checks.push("[H,h]", nh, 0.0);
            if n_sites == 2 {
                let cq = suq2_casimir(&gens)?;
                let (nc, _) = check_commutes(&h, &cq, 0.0)?;
                checks.push("[H,Cq]", nc, CASIMIR_TOLERANCE * scale);
            } else {
                checks.extend(verify_chevalley(&gens));
            }
        }
    }
    Ok(ConservationReport {
        model,
        n_sites,
        total_quanta,
        gamma,
        epsilon,
        checks,
    })
}
