//! Occupation-number sectors of an n-site boson chain and the operators
//! acting on them.
//!
//! Every operator here conserves the total number of quanta, so a sector
//! with fixed `M` is an exact finite block. Site indices are 0-based.

mod casimir;
mod generators;
mod oscillator;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qnumbers::{basic_qnum, sym_qnum};

pub use casimir::{casimir_matrix, gelfand_matrix, su2_casimir, suq2_casimir, ChainIndex};
pub use generators::{
    cartan_matrix, omega_inverse, omega_matrix, su_n_generators, suq_n_generators,
    verify_chevalley, verify_number_reconstruction, verify_serre, ChevalleyGenerators,
};
pub use oscillator::{al_oscillator_ops, verify_al_relations, AlOscillator};

/// Largest sector dimension we are willing to build densely.
pub const MAX_SECTOR_DIM: usize = 1_000_000;

/// The basis of the sector `n_1 + … + n_sites = M`, in descending
/// lexicographic order: `(M,0,…,0)` first, `(0,…,0,M)` last.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSectorBasis {
    n_sites: usize,
    total_quanta: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockSectorBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn total_quanta(&self) -> u32 {
        self.total_quanta
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn index_of(&self, state: &[u32]) -> Option<usize> {
        self.index.get(state).copied()
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::IndexOutOfRange(format!(
                "site {site} not in 0..{}",
                self.n_sites
            )));
        }
        Ok(())
    }
}

/// `C(M + n - 1, n - 1)` in 128-bit arithmetic, saturating.
fn sector_dim(n_sites: usize, m: u32) -> u128 {
    let k = (n_sites - 1) as u128;
    let top = m as u128 + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(top - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn enumerate(n_sites: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n_sites {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for k in (0..=remaining).rev() {
        prefix.push(k);
        enumerate(n_sites, remaining - k, prefix, out);
        prefix.pop();
    }
}

/// Build the complete sector basis for `n_sites` sites and `m` quanta.
pub fn build_sector_basis(n_sites: usize, m: u32) -> Result<Arc<FockSectorBasis>> {
    if n_sites == 0 {
        return Err(Error::Domain("a chain needs at least one site".into()));
    }
    let dim = sector_dim(n_sites, m);
    if dim > MAX_SECTOR_DIM as u128 {
        return Err(Error::SectorTooLarge {
            dim,
            limit: MAX_SECTOR_DIM,
        });
    }
    let mut states = Vec::with_capacity(dim as usize);
    enumerate(n_sites, m, &mut Vec::with_capacity(n_sites), &mut states);
    debug_assert_eq!(states.len() as u128, dim);
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    Ok(Arc::new(FockSectorBasis {
        n_sites,
        total_quanta: m,
        states,
        index,
    }))
}

/// A real matrix acting on one sector.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    basis: Arc<FockSectorBasis>,
    matrix: DMatrix<f64>,
}

impl SectorOperator {
    pub fn new(basis: Arc<FockSectorBasis>, matrix: DMatrix<f64>) -> Result<Self> {
        let dim = basis.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: matrix.nrows(),
            });
        }
        Ok(Self { basis, matrix })
    }

    // Callers guarantee the shape.
    pub(crate) fn from_parts(basis: Arc<FockSectorBasis>, matrix: DMatrix<f64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim());
        Self { basis, matrix }
    }

    pub fn basis(&self) -> &Arc<FockSectorBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Conjugate transpose (plain transpose, the matrices are real).
    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.basis.clone(), self.matrix.transpose())
    }

    pub fn map(&self, f: impl FnOnce(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        Self::from_parts(self.basis.clone(), f(&self.matrix))
    }
}

/// Build `a_i† a_j` with a custom single-site matrix element: the amplitude
/// of `|…n_i…n_j…> -> |…n_i+1…n_j-1…>` is `amp(n_i, n_j)`.
fn hop_with(
    basis: &Arc<FockSectorBasis>,
    i: usize,
    j: usize,
    amp: impl Fn(u32, u32) -> f64,
) -> Result<SectorOperator> {
    basis.check_site(i)?;
    basis.check_site(j)?;
    if i == j {
        return Err(Error::IndexOutOfRange(format!(
            "hop needs distinct sites, got {i} twice"
        )));
    }
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    let mut target = Vec::with_capacity(basis.n_sites);
    for (col, state) in basis.states.iter().enumerate() {
        if state[j] == 0 {
            continue;
        }
        target.clear();
        target.extend_from_slice(state);
        target[j] -= 1;
        target[i] += 1;
        let row = basis.index[&target];
        m[(row, col)] = amp(state[i], state[j]);
    }
    Ok(SectorOperator::from_parts(basis.clone(), m))
}

/// Canonical boson hop `a_i† a_j`, matrix element `sqrt(n_i+1) sqrt(n_j)`.
pub fn hop_operator(basis: &Arc<FockSectorBasis>, i: usize, j: usize) -> Result<SectorOperator> {
    hop_with(basis, i, j, |ni, nj| ((ni + 1) as f64 * nj as f64).sqrt())
}

/// q-oscillator hop, matrix element `sqrt([n_i+1][n_j])`.
pub fn q_hop_operator(
    basis: &Arc<FockSectorBasis>,
    i: usize,
    j: usize,
    q: f64,
) -> Result<SectorOperator> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!("q must be positive, got {q}")));
    }
    hop_with(basis, i, j, |ni, nj| {
        (sym_qnum((ni + 1) as f64, q) * sym_qnum(nj as f64, q)).sqrt()
    })
}

/// Ablowitz-Ladik hop `b_i† b_j`, matrix element `sqrt({n_i+1}{n_j})`.
pub fn al_hop_operator(
    basis: &Arc<FockSectorBasis>,
    i: usize,
    j: usize,
    gamma: f64,
) -> Result<SectorOperator> {
    hop_with(basis, i, j, |ni, nj| {
        (basic_qnum(ni + 1, gamma) * basic_qnum(nj, gamma)).sqrt()
    })
}

/// A diagonal operator whose entry on each state is `f(state)`.
pub fn diagonal_operator(
    basis: &Arc<FockSectorBasis>,
    f: impl Fn(&[u32]) -> f64,
) -> SectorOperator {
    let diag: Vec<f64> = basis.states.iter().map(|s| f(s)).collect();
    SectorOperator::from_parts(
        basis.clone(),
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
    )
}

/// Site occupation `N_i`.
pub fn number_operator(basis: &Arc<FockSectorBasis>, site: usize) -> Result<SectorOperator> {
    basis.check_site(site)?;
    Ok(diagonal_operator(basis, |s| s[site] as f64))
}

/// The central element `h = N_1 + … + N_n`.
pub fn total_number_operator(basis: &Arc<FockSectorBasis>) -> SectorOperator {
    diagonal_operator(basis, |s| s.iter().map(|&x| x as f64).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs};

    #[test]
    fn sector_examples() {
        let b = build_sector_basis(2, 2).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.states(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(build_sector_basis(3, 2).unwrap().dim(), 6);
        assert_eq!(build_sector_basis(1, 5).unwrap().dim(), 1);
        assert_eq!(build_sector_basis(4, 0).unwrap().dim(), 1);
    }

    #[test]
    fn sector_invariants() {
        for n in 1..=4usize {
            for m in 0..=6u32 {
                let b = build_sector_basis(n, m).unwrap();
                assert_eq!(b.dim() as u128, sector_dim(n, m));
                for w in b.states().windows(2) {
                    assert!(w[0] > w[1], "descending lexicographic order");
                }
                assert!(b.states().iter().all(|s| s.iter().sum::<u32>() == m));
            }
        }
    }

    #[test]
    fn sector_size_guard() {
        let err = build_sector_basis(30, 30).unwrap_err();
        assert!(matches!(err, Error::SectorTooLarge { .. }));
        assert!(build_sector_basis(0, 3).is_err());
    }

    #[test]
    fn hop_examples() {
        let b = build_sector_basis(2, 1).unwrap();
        let h = hop_operator(&b, 0, 1).unwrap();
        let from = b.index_of(&[0, 1]).unwrap();
        let to = b.index_of(&[1, 0]).unwrap();
        assert_eq!(h.matrix()[(to, from)], 1.0);

        let b = build_sector_basis(2, 2).unwrap();
        let h = hop_operator(&b, 0, 1).unwrap();
        let from = b.index_of(&[1, 1]).unwrap();
        let to = b.index_of(&[2, 0]).unwrap();
        assert!((h.matrix()[(to, from)] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hop_errors() {
        let b = build_sector_basis(2, 2).unwrap();
        assert!(matches!(hop_operator(&b, 0, 0), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(hop_operator(&b, 0, 2), Err(Error::IndexOutOfRange(_))));
        assert!(q_hop_operator(&b, 0, 1, 0.0).is_err());
    }

    #[test]
    fn hop_adjoint_and_commutator() {
        let b = build_sector_basis(2, 3).unwrap();
        let up = hop_operator(&b, 0, 1).unwrap();
        let down = hop_operator(&b, 1, 0).unwrap();
        assert_eq!(up.adjoint().matrix(), down.matrix());
        let n1 = number_operator(&b, 0).unwrap();
        let n2 = number_operator(&b, 1).unwrap();
        let lhs = commutator(up.matrix(), down.matrix());
        assert!(max_abs(&(lhs - (n1.matrix() - n2.matrix()))) < 1e-14);
    }

    #[test]
    fn q_hop_reduces_at_q_one() {
        let b = build_sector_basis(3, 4).unwrap();
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let a = hop_operator(&b, i, j).unwrap();
            let q = q_hop_operator(&b, i, j, 1.0).unwrap();
            assert!(max_abs(&(a.matrix() - q.matrix())) <= 1e-15);
        }
        let b = build_sector_basis(2, 2).unwrap();
        let qh = q_hop_operator(&b, 0, 1, 0.6).unwrap();
        let from = b.index_of(&[1, 1]).unwrap();
        let to = b.index_of(&[2, 0]).unwrap();
        assert!((qh.matrix()[(to, from)] - sym_qnum(2.0, 0.6).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn su_q2_relation_on_hops() {
        // [e, f] = [2h]_q with 2h = N1 - N2
        let q = std::f64::consts::FRAC_1_SQRT_2;
        let b = build_sector_basis(2, 3).unwrap();
        let e = q_hop_operator(&b, 0, 1, q).unwrap();
        let f = e.adjoint();
        let lhs = commutator(e.matrix(), f.matrix());
        let rhs = diagonal_operator(&b, |s| sym_qnum(s[0] as f64 - s[1] as f64, q));
        assert!(max_abs(&(lhs - rhs.matrix())) <= 1e-12);
    }

    #[test]
    fn operators_preserve_sector() {
        let b = build_sector_basis(3, 3).unwrap();
        let h = total_number_operator(&b);
        for (i, j) in [(0, 1), (1, 0), (1, 2), (0, 2)] {
            for op in [
                hop_operator(&b, i, j).unwrap(),
                q_hop_operator(&b, i, j, 0.4).unwrap(),
                al_hop_operator(&b, i, j, 3.0).unwrap(),
            ] {
                assert!(crate::linalg::commutator_norm(op.matrix(), h.matrix()) <= 1e-13);
            }
        }
    }

    #[test]
    fn sector_operator_shape_check() {
        let b = build_sector_basis(2, 2).unwrap();
        assert!(SectorOperator::new(b.clone(), DMatrix::zeros(2, 2)).is_err());
        assert!(SectorOperator::new(b, DMatrix::zeros(3, 3)).is_ok());
    }
}
