//! Chevalley generators of su(n) and su_q(n) in the (q-)boson realization,
//! and residual checks of their defining relations.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::{diagonal_operator, hop_operator, number_operator, q_hop_operator, FockSectorBasis, SectorOperator};
use crate::error::{Error, Result};
use crate::linalg::{commutator, commutator_norm, max_abs, max_off_diagonal};
use crate::qnumbers::{q_binomial, sym_qnum, Q_CONTINUITY_THRESHOLD};
use crate::report::CheckReport;

/// Per-unit-dimension tolerance for the algebra residuals.
pub const ALGEBRA_TOLERANCE: f64 = 1e-12;

/// `e_i = a_i† a_{i+1}`, `f_i = e_i†`, `h_i = (N_i - N_{i+1})/2`, and in the
/// deformed case `k_i = q^{h_i}`, `C_i = q^{(N_i + N_{i+1})/2}`.
#[derive(Debug, Clone)]
pub struct ChevalleyGenerators {
    basis: Arc<FockSectorBasis>,
    q: f64,
    deformed: bool,
    pub e: Vec<SectorOperator>,
    pub f: Vec<SectorOperator>,
    pub h: Vec<SectorOperator>,
    /// Empty for the undeformed algebra.
    pub k: Vec<SectorOperator>,
    /// Empty for the undeformed algebra.
    pub c_loc: Vec<SectorOperator>,
}

impl ChevalleyGenerators {
    /// The `n` of su(n): number of sites.
    pub fn n(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_deformed(&self) -> bool {
        self.deformed
    }

    pub fn basis(&self) -> &Arc<FockSectorBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// All generators as `(label, operator)` pairs.
    pub fn all(&self) -> Vec<(String, &SectorOperator)> {
        let mut out = Vec::new();
        for (name, ops) in [
            ("e", &self.e),
            ("f", &self.f),
            ("h", &self.h),
            ("k", &self.k),
            ("C", &self.c_loc),
        ] {
            for (i, op) in ops.iter().enumerate() {
                out.push((format!("{name}{}", i + 1), op));
            }
        }
        out
    }
}

fn require_chain(basis: &FockSectorBasis) -> Result<()> {
    if basis.n_sites() < 2 {
        return Err(Error::Domain(
            "Chevalley generators need at least two sites".into(),
        ));
    }
    Ok(())
}

fn cartan(basis: &Arc<FockSectorBasis>, i: usize) -> Result<SectorOperator> {
    let a = number_operator(basis, i)?;
    let b = number_operator(basis, i + 1)?;
    Ok(a.map(|m| 0.5 * (m - b.matrix())))
}

/// Undeformed su(n) generators on a sector.
pub fn su_n_generators(basis: &Arc<FockSectorBasis>) -> Result<ChevalleyGenerators> {
    require_chain(basis)?;
    let rank = basis.n_sites() - 1;
    let mut gens = ChevalleyGenerators {
        basis: basis.clone(),
        q: 1.0,
        deformed: false,
        e: Vec::with_capacity(rank),
        f: Vec::with_capacity(rank),
        h: Vec::with_capacity(rank),
        k: Vec::new(),
        c_loc: Vec::new(),
    };
    for i in 0..rank {
        let e = hop_operator(basis, i, i + 1)?;
        gens.f.push(e.adjoint());
        gens.e.push(e);
        gens.h.push(cartan(basis, i)?);
    }
    Ok(gens)
}

/// su_q(n) generators from q-oscillators.
pub fn suq_n_generators(basis: &Arc<FockSectorBasis>, q: f64) -> Result<ChevalleyGenerators> {
    require_chain(basis)?;
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    let rank = basis.n_sites() - 1;
    let mut gens = ChevalleyGenerators {
        basis: basis.clone(),
        q,
        deformed: true,
        e: Vec::with_capacity(rank),
        f: Vec::with_capacity(rank),
        h: Vec::with_capacity(rank),
        k: Vec::with_capacity(rank),
        c_loc: Vec::with_capacity(rank),
    };
    for i in 0..rank {
        let e = q_hop_operator(basis, i, i + 1, q)?;
        gens.f.push(e.adjoint());
        gens.e.push(e);
        gens.h.push(cartan(basis, i)?);
        gens.k.push(diagonal_operator(basis, |s| {
            q.powf(0.5 * (s[i] as f64 - s[i + 1] as f64))
        }));
        gens.c_loc.push(diagonal_operator(basis, |s| {
            q.powf(0.5 * (s[i] as f64 + s[i + 1] as f64))
        }));
    }
    Ok(gens)
}

/// Cartan matrix of su(n), `(n-1) x (n-1)`.
pub fn cartan_matrix(n: usize) -> DMatrix<i64> {
    let r = n.saturating_sub(1);
    DMatrix::from_fn(r, r, |i, j| {
        if i == j {
            2
        } else if i + 1 == j || j + 1 == i {
            -1
        } else {
            0
        }
    })
}

/// Check the Chevalley relations (and for su_q(n) the k-conjugation,
/// `[e_i, f_j] = δ_ij [2h_i]_q` and `C_i` commutation relations).
pub fn verify_chevalley(gens: &ChevalleyGenerators) -> CheckReport {
    let tol = ALGEBRA_TOLERANCE * gens.dim() as f64;
    let alpha = cartan_matrix(gens.n());
    let rank = gens.rank();
    let q = gens.q;
    let mut report = CheckReport::new();

    for i in 0..rank {
        // Bit-identical conjugation.
        let conj = max_abs(&(gens.e[i].matrix().transpose() - gens.f[i].matrix()));
        report.push(format!("f{0}=e{0}^T", i + 1), conj, 0.0);
        report.push(format!("h{} diagonal", i + 1), max_off_diagonal(gens.h[i].matrix()), 0.0);
    }

    for i in 0..rank {
        let hi = gens.h[i].matrix();
        for j in 0..rank {
            let a = 0.5 * alpha[(i, j)] as f64;
            let ej = gens.e[j].matrix();
            let fj = gens.f[j].matrix();
            report.push(format!("[h{},h{}]", i + 1, j + 1), commutator_norm(hi, gens.h[j].matrix()), tol);
            report.push(
                format!("[h{},e{}]", i + 1, j + 1),
                max_abs(&(commutator(hi, ej) - ej * a)),
                tol,
            );
            report.push(
                format!("[h{},f{}]", i + 1, j + 1),
                max_abs(&(commutator(hi, fj) + fj * a)),
                tol,
            );

            let ef = commutator(gens.e[i].matrix(), fj);
            let expected = if i != j {
                DMatrix::zeros(gens.dim(), gens.dim())
            } else if gens.deformed {
                crate::linalg::map_diagonal(hi, |x| sym_qnum(2.0 * x, q))
            } else {
                hi * 2.0
            };
            report.push(format!("[e{},f{}]", i + 1, j + 1), max_abs(&(ef - expected)), tol);

            if gens.deformed {
                let ki = gens.k[i].matrix();
                let ki_inv = crate::linalg::map_diagonal(ki, |x| 1.0 / x);
                report.push(format!("[k{},k{}]", i + 1, j + 1), commutator_norm(ki, gens.k[j].matrix()), tol);
                let pow = q.powf(a);
                report.push(
                    format!("k{0} e{1} k{0}^-1", i + 1, j + 1),
                    max_abs(&(ki * ej * &ki_inv - ej * pow)),
                    tol,
                );
                report.push(
                    format!("k{0} f{1} k{0}^-1", i + 1, j + 1),
                    max_abs(&(ki * fj * &ki_inv - fj / pow)),
                    tol,
                );
            }
        }
        if gens.deformed {
            let ci = gens.c_loc[i].matrix();
            report.push(format!("k{0}=q^h{0}", i + 1), max_abs(&(crate::linalg::map_diagonal(hi, |x| q.powf(x)) - gens.k[i].matrix())), tol);
            report.push(format!("[C{0},e{0}]", i + 1), commutator_norm(ci, gens.e[i].matrix()), tol);
            report.push(format!("[C{0},f{0}]", i + 1), commutator_norm(ci, gens.f[i].matrix()), tol);
            report.push(format!("[C{0},k{0}]", i + 1), commutator_norm(ci, gens.k[i].matrix()), tol);
        }
    }
    report
}

fn serre_sum(xi: &DMatrix<f64>, xj: &DMatrix<f64>, degree: u32, q: f64) -> Result<DMatrix<f64>> {
    let dim = xi.nrows();
    let mut powers = vec![DMatrix::identity(dim, dim)];
    for r in 1..=degree as usize {
        powers.push(&powers[r - 1] * xi);
    }
    let mut acc = DMatrix::zeros(dim, dim);
    for r in 0..=degree {
        let s = degree - r;
        let coeff = q_binomial(degree, r, q)? * if r % 2 == 0 { 1.0 } else { -1.0 };
        acc += (&powers[r as usize] * xj * &powers[s as usize]) * coeff;
    }
    Ok(acc)
}

/// Residuals of the (q-)Serre relations for every ordered pair `i != j`.
pub fn verify_serre(gens: &ChevalleyGenerators) -> CheckReport {
    let rank = gens.rank();
    if rank < 2 {
        return CheckReport::vacuous();
    }
    let tol = ALGEBRA_TOLERANCE * gens.dim() as f64;
    let alpha = cartan_matrix(gens.n());
    let q = if (gens.q - 1.0).abs() < Q_CONTINUITY_THRESHOLD { 1.0 } else { gens.q };
    let mut report = CheckReport::new();
    for i in 0..rank {
        for j in (0..rank).filter(|&j| j != i) {
            let degree = (1 - alpha[(i, j)]) as u32;
            for (name, ops) in [("e", &gens.e), ("f", &gens.f)] {
                let norm = serre_sum(ops[i].matrix(), ops[j].matrix(), degree, q)
                    .map(|m| max_abs(&m))
                    .unwrap_or(f64::NAN);
                report.push(format!("serre {name}{},{}", i + 1, j + 1), norm, tol);
            }
        }
    }
    report
}

/// The `n x n` matrix with `Ω_ii = 1`, `Ω_{i,i+1} = -1` on the first `n-1`
/// rows and a last row of ones, so that `Ω N = (2h_1, …, 2h_{n-1}, h)`.
pub fn omega_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == n || i == j {
            1.0
        } else if j == i + 1 {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn omega_inverse(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::Domain("Ω needs n >= 2".into()));
    }
    let omega = omega_matrix(n);
    // det Ω = n
    if omega.determinant().abs() < 0.5 {
        return Err(Error::Internal("Ω is singular".into()));
    }
    omega
        .try_inverse()
        .ok_or_else(|| Error::Internal("Ω inversion failed".into()))
}

/// Check `N_i = 2 Σ_j (Ω⁻¹)_ij h_j + (Ω⁻¹)_in h` on a sector.
pub fn verify_number_reconstruction(basis: &Arc<FockSectorBasis>) -> Result<CheckReport> {
    let n = basis.n_sites();
    let inv = omega_inverse(n)?;
    let gens = su_n_generators(basis)?;
    let total = super::total_number_operator(basis);
    let tol = ALGEBRA_TOLERANCE;
    let mut report = CheckReport::new();
    for i in 0..n {
        let mut rebuilt = total.matrix() * inv[(i, n - 1)];
        for j in 0..n - 1 {
            rebuilt += gens.h[j].matrix() * (2.0 * inv[(i, j)]);
        }
        let ni = number_operator(basis, i)?;
        report.push(format!("N{} reconstruction", i + 1), max_abs(&(ni.matrix() - rebuilt)), tol);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_sector_basis;

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan_matrix(2), DMatrix::from_row_slice(1, 1, &[2]));
        assert_eq!(cartan_matrix(3), DMatrix::from_row_slice(2, 2, &[2, -1, -1, 2]));
        let c4 = cartan_matrix(4);
        let sums: Vec<i64> = (0..3).map(|i| c4.row(i).sum()).collect();
        assert_eq!(sums, vec![1, 0, 1]);
    }

    #[test]
    fn omega_examples() {
        let o = omega_matrix(2);
        assert_eq!(o, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, 1.0, 1.0]));
        let inv = omega_inverse(2).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, -0.5, 0.5]);
        assert!(max_abs(&(inv - want)) < 1e-15);
        for n in 2..7 {
            assert!((omega_matrix(n).determinant() - n as f64).abs() < 1e-12);
        }
        assert!(omega_inverse(1).is_err());
    }

    #[test]
    fn number_reconstruction() {
        let r = verify_number_reconstruction(&build_sector_basis(2, 3).unwrap()).unwrap();
        assert_eq!(r.max_norm(), 0.0);
        let r = verify_number_reconstruction(&build_sector_basis(3, 2).unwrap()).unwrap();
        assert!(r.passed(), "{r}");
        let r = verify_number_reconstruction(&build_sector_basis(5, 3).unwrap()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn su2_chevalley() {
        let g = su_n_generators(&build_sector_basis(2, 2).unwrap()).unwrap();
        let r = verify_chevalley(&g);
        assert!(r.max_norm() <= 1e-13, "{r}");
    }

    #[test]
    fn suq_at_one_matches_classical() {
        let b = build_sector_basis(3, 2).unwrap();
        let c = su_n_generators(&b).unwrap();
        let d = suq_n_generators(&b, 1.0).unwrap();
        for i in 0..2 {
            assert!(max_abs(&(c.e[i].matrix() - d.e[i].matrix())) <= 1e-14);
            assert!(max_abs(&(c.f[i].matrix() - d.f[i].matrix())) <= 1e-14);
            assert!(max_abs(&(c.h[i].matrix() - d.h[i].matrix())) <= 1e-14);
        }
        let rc = verify_chevalley(&c);
        let rd = verify_chevalley(&d);
        assert!(rc.passed() && rd.passed());
        for check in &rc.checks {
            let other = rd.get(&check.label).unwrap();
            assert!((check.norm - other.norm).abs() <= 1e-14);
        }
    }

    #[test]
    fn suq2_ef_relation() {
        let g = suq_n_generators(&build_sector_basis(2, 4).unwrap(), 0.5).unwrap();
        let r = verify_chevalley(&g);
        assert!(r.get("[e1,f1]").unwrap().norm <= 1e-12, "{r}");
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn serre_su3() {
        let g = su_n_generators(&build_sector_basis(3, 3).unwrap()).unwrap();
        let r = verify_serre(&g);
        assert!(!r.vacuous);
        assert_eq!(r.checks.len(), 4);
        assert!(r.max_norm() <= 1e-12, "{r}");

        let gq = suq_n_generators(&build_sector_basis(3, 3).unwrap(), 1.0).unwrap();
        let rq = verify_serre(&gq);
        for (a, b) in r.checks.iter().zip(&rq.checks) {
            assert_eq!(a.label, b.label);
            assert!((a.norm - b.norm).abs() <= 1e-14);
        }
    }

    #[test]
    fn q_serre_su3() {
        let g = suq_n_generators(&build_sector_basis(3, 2).unwrap(), std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let r = verify_serre(&g);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn q_serre_needs_deformed_binomial() {
        // With the classical binomial the deformed generators violate Serre.
        let b = build_sector_basis(3, 3).unwrap();
        let g = suq_n_generators(&b, 0.5).unwrap();
        let bad = serre_sum(g.e[0].matrix(), g.e[1].matrix(), 2, 1.0).unwrap();
        assert!(max_abs(&bad) > 1e-3);
    }

    #[test]
    fn serre_rank_one_is_vacuous() {
        let g = su_n_generators(&build_sector_basis(2, 3).unwrap()).unwrap();
        assert!(verify_serre(&g).vacuous);
    }

    #[test]
    fn generators_need_two_sites() {
        let b = build_sector_basis(1, 3).unwrap();
        assert!(su_n_generators(&b).is_err());
        assert!(suq_n_generators(&build_sector_basis(2, 1).unwrap(), -1.0).is_err());
    }

    #[test]
    fn deformed_commutants() {
        let g = suq_n_generators(&build_sector_basis(3, 4).unwrap(), 0.7).unwrap();
        for i in 0..2 {
            assert!(g.k[i].matrix().diagonal().iter().all(|&x| x > 0.0));
            assert!(g.c_loc[i].matrix().diagonal().iter().all(|&x| x > 0.0));
        }
        let r = verify_chevalley(&g);
        assert!(r.passed(), "{r}");
    }
}
