use nalgebra::DMatrix;
use qdimer::dimer::{build_qal_dimer, build_qdnls_dimer, Model};
use qdimer::fock::build_sector_basis;
use qdimer::invariants::{build_qal_chain, build_qdnls_chain, conservation_suite};
use qdimer::qnumbers::basic_qnum;
use qdimer::spectral::eigenvalues_bisection;

fn sorted_eigs(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn reconciled(h: &qdimer::dimer::TridiagonalHamiltonian) -> Vec<f64> {
    let c = h.constants();
    let mut e: Vec<f64> = eigenvalues_bisection(h, 1e-15)
        .unwrap()
        .iter()
        .map(|&l| c.chain_energy(l))
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

#[test]
fn two_site_sectors_match_dimers() {
    for m in 1..=12u32 {
        let basis = build_sector_basis(2, m).unwrap();
        for gamma in [0.0, 0.5, 2.0, 8.0] {
            let dimer = build_qdnls_dimer(m, gamma, 1.0).unwrap();
            let chain = build_qdnls_chain(&basis, dimer.constants().chain_gamma, 1.0).unwrap();
            for (x, y) in sorted_eigs(chain.matrix()).iter().zip(reconciled(&dimer)) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "dnls M={m} γ={gamma}: {x} vs {y}");
            }

            let dimer = build_qal_dimer(m, gamma).unwrap();
            let chain = build_qal_chain(&basis, dimer.constants().chain_gamma).unwrap();
            for (x, y) in sorted_eigs(chain.matrix()).iter().zip(reconciled(&dimer)) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "al M={m} γ={gamma}: {x} vs {y}");
            }
        }
    }
}

/// Hamiltonian on the full truncated Fock space of `n` sites, each holding at
/// most `cap` quanta, from Kronecker products of single-site ladders.
fn full_space(n: usize, cap: usize, amp: impl Fn(usize) -> f64, onsite: impl Fn(usize) -> f64) -> DMatrix<f64> {
    let d = cap + 1;
    let lower = DMatrix::from_fn(d, d, |r, c| if c == r + 1 { amp(c) } else { 0.0 });
    let id = DMatrix::<f64>::identity(d, d);
    let embed = |site: usize, op: &DMatrix<f64>| {
        (0..n).fold(DMatrix::<f64>::identity(1, 1), |acc, s| {
            acc.kronecker(if s == site { op } else { &id })
        })
    };
    let dim = d.pow(n as u32);
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..n - 1 {
        let hop = embed(i, &lower.transpose()) * embed(i + 1, &lower);
        h -= &hop + hop.transpose();
    }
    let diag = DMatrix::from_fn(d, d, |r, c| if r == c { onsite(r) } else { 0.0 });
    for i in 0..n {
        h += embed(i, &diag);
    }
    h
}

fn occupations(index: usize, n: usize, d: usize) -> Vec<usize> {
    // First site is the most significant digit of the Kronecker index.
    let mut out = vec![0; n];
    let mut x = index;
    for s in (0..n).rev() {
        out[s] = x % d;
        x /= d;
    }
    out
}

#[test]
fn full_space_is_block_diagonal_by_sector() {
    let (n, cap) = (3, 4);
    let gamma = 1.5;
    let cases: Vec<(Model, DMatrix<f64>)> = vec![
        (
            Model::Qdnls,
            full_space(n, cap, |k| (k as f64).sqrt(), |k| -0.5 * gamma * (k * k) as f64),
        ),
        (
            Model::Qal,
            full_space(n, cap, |k| basic_qnum(k as u32, gamma).sqrt(), |_| 0.0),
        ),
    ];
    let d = cap + 1;
    for (model, h) in cases {
        let dim = h.nrows();
        let quanta: Vec<usize> = (0..dim).map(|i| occupations(i, n, d).iter().sum()).collect();
        for r in 0..dim {
            for c in 0..dim {
                if quanta[r] != quanta[c] {
                    assert_eq!(h[(r, c)], 0.0, "{model}: leak between sectors");
                }
            }
        }
        // Sectors below the cap are untouched by truncation and must match
        // the sector builders entrywise.
        for m in 0..=cap as u32 {
            let basis = build_sector_basis(n, m).unwrap();
            let sector = match model {
                Model::Qdnls => build_qdnls_chain(&basis, gamma, 1.0).unwrap(),
                Model::Qal => build_qal_chain(&basis, gamma).unwrap(),
            };
            let shift = if model == Model::Qal { 2.0 * m as f64 } else { 0.0 };
            let idx: Vec<usize> = basis
                .states()
                .iter()
                .map(|s| s.iter().fold(0usize, |acc, &x| acc * d + x as usize))
                .collect();
            for (a, &ra) in idx.iter().enumerate() {
                for (b, &rb) in idx.iter().enumerate() {
                    let full = h[(ra, rb)] + if a == b { shift } else { 0.0 };
                    assert!((full - sector.matrix()[(a, b)]).abs() < 1e-13, "{model} M={m}");
                }
            }
        }
    }
}

#[test]
fn casimirs_conserved_across_sectors() {
    for n in 2..=3usize {
        for m in 0..=8u32 {
            let dim = build_sector_basis(n, m).unwrap().dim();
            if dim > 50 {
                continue;
            }
            for gamma in [0.0, 1.0, 5.0] {
                for model in [Model::Qdnls, Model::Qal] {
                    let r = conservation_suite(model, n, m, gamma, 1.0).unwrap();
                    assert!(r.passed(), "{r}");
                    for c in r.pairs() {
                        assert!(c.norm <= 1e-10 * dim as f64 || c.label == "[H,C4]", "{r}");
                    }
                }
            }
        }
    }
}
