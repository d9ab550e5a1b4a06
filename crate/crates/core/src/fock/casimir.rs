//! Casimir operators.
//!
//! The root vectors `E_ab` (a < b) are generated from the simple ones by
//! nested commutators `E_ab = E_ac E_cb - E_cb E_ac`. Together with the
//! traceless Cartan entries `ε_a` on the diagonal (`ε_a - ε_{a+1} = 2h_a`,
//! `Σ ε_a = 0`) and `F = E†` below it they form an operator-valued matrix
//! 𝔼, and `C_2p = tr (E F)^p = tr 𝔼^{2p}` is central.

use nalgebra::DMatrix;

use super::generators::{omega_inverse, ChevalleyGenerators};
use super::SectorOperator;
use crate::error::{Error, Result};
use crate::linalg::map_diagonal;
use crate::qnumbers::{sym_qnum, Q_CONTINUITY_THRESHOLD};

/// Which intermediate index `a < c < b` the root-vector recursion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChainIndex {
    /// `c = a + 1`
    #[default]
    First,
    /// `c = b - 1`
    Last,
}

type OperatorMatrix = Vec<Vec<DMatrix<f64>>>;

fn require_undeformed(gens: &ChevalleyGenerators) -> Result<()> {
    if gens.is_deformed() && (gens.q() - 1.0).abs() >= Q_CONTINUITY_THRESHOLD {
        return Err(Error::Unsupported(
            "higher Casimirs are only built for the undeformed algebra".into(),
        ));
    }
    Ok(())
}

/// The operator-valued `n x n` matrix 𝔼 described in the module docs.
pub fn gelfand_matrix(gens: &ChevalleyGenerators, chain: ChainIndex) -> Result<Vec<Vec<DMatrix<f64>>>> {
    require_undeformed(gens)?;
    let n = gens.n();
    let dim = gens.dim();
    let zero = DMatrix::<f64>::zeros(dim, dim);
    let mut e: OperatorMatrix = vec![vec![zero.clone(); n]; n];

    for a in 0..n - 1 {
        e[a][a + 1] = gens.e[a].matrix().clone();
    }
    for width in 2..n {
        for a in 0..n - width {
            let b = a + width;
            let c = match chain {
                ChainIndex::First => a + 1,
                ChainIndex::Last => b - 1,
            };
            e[a][b] = &e[a][c] * &e[c][b] - &e[c][b] * &e[a][c];
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            e[b][a] = e[a][b].transpose();
        }
    }
    // Cartan diagonal: ε = Ω⁻¹ (2h_1, …, 2h_{n-1}, 0).
    let inv = omega_inverse(n)?;
    for a in 0..n {
        let mut eps = zero.clone();
        for j in 0..n - 1 {
            eps += gens.h[j].matrix() * (2.0 * inv[(a, j)]);
        }
        e[a][a] = eps;
    }
    Ok(e)
}

fn op_matmul(x: &OperatorMatrix, y: &OperatorMatrix) -> OperatorMatrix {
    let n = x.len();
    let dim = x[0][0].nrows();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut acc = DMatrix::zeros(dim, dim);
                    for c in 0..n {
                        acc += &x[a][c] * &y[c][b];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn adjoint(x: &OperatorMatrix) -> OperatorMatrix {
    let n = x.len();
    (0..n)
        .map(|a| (0..n).map(|b| x[b][a].transpose()).collect())
        .collect()
}

/// `C_2p = Σ_a (M^p)_aa` with `M_ab = Σ_c E_ac F_cb`.
pub fn casimir_matrix(gens: &ChevalleyGenerators, p: u32) -> Result<SectorOperator> {
    casimir_matrix_with(gens, p, ChainIndex::First)
}

pub fn casimir_matrix_with(
    gens: &ChevalleyGenerators,
    p: u32,
    chain: ChainIndex,
) -> Result<SectorOperator> {
    if p == 0 {
        return Err(Error::Domain("Casimir degree index p must be >= 1".into()));
    }
    let e = gelfand_matrix(gens, chain)?;
    let f = adjoint(&e);
    let m = op_matmul(&e, &f);
    let mut power = m.clone();
    for _ in 1..p {
        power = op_matmul(&power, &m);
    }
    let dim = gens.dim();
    let mut trace = DMatrix::zeros(dim, dim);
    for (a, row) in power.iter().enumerate() {
        trace += &row[a];
    }
    Ok(SectorOperator::from_parts(gens.basis().clone(), trace))
}

fn require_rank_one(gens: &ChevalleyGenerators) -> Result<()> {
    if gens.rank() != 1 {
        return Err(Error::Domain(format!(
            "quadratic su(2) Casimir needs rank one, got rank {}",
            gens.rank()
        )));
    }
    Ok(())
}

/// `J0 (J0 - 1) + J+ J-` for su(2).
pub fn su2_casimir(gens: &ChevalleyGenerators) -> Result<SectorOperator> {
    require_rank_one(gens)?;
    require_undeformed(gens)?;
    let j0 = gens.h[0].matrix();
    let dim = gens.dim();
    let m = j0 * (j0 - DMatrix::identity(dim, dim)) + gens.e[0].matrix() * gens.f[0].matrix();
    Ok(SectorOperator::from_parts(gens.basis().clone(), m))
}

/// `[J0][J0 - 1] + J+ J-` for su_q(2).
pub fn suq2_casimir(gens: &ChevalleyGenerators) -> Result<SectorOperator> {
    require_rank_one(gens)?;
    let q = gens.q();
    let j0 = gens.h[0].matrix();
    let a = map_diagonal(j0, |x| sym_qnum(x, q));
    let b = map_diagonal(j0, |x| sym_qnum(x - 1.0, q));
    let m = a * b + gens.e[0].matrix() * gens.f[0].matrix();
    Ok(SectorOperator::from_parts(gens.basis().clone(), m))
}
