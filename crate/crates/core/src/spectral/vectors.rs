//! Eigenvectors: the recurrence route `c_k ∝ p_k(λ) / w_k` with
//! `w_k = o_0 o_1 … o_{k-1}`, and inverse iteration as a fallback.

use crate::dimer::TridiagonalHamiltonian;
use crate::error::{Error, Result};

use super::sturm::recurrence_values;

/// Residual above which `eigenvector_from_recurrence` rejects its input,
/// relative to `max(1, ‖H‖)`.
pub const NOT_EIGENVALUE_RELATIVE: f64 = 1e-8;

/// Coefficients of one eigenvector from the recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceEigenvector {
    pub lambda: f64,
    /// Unit-norm coefficients in the `m`-ascending basis.
    pub coefficients: Vec<f64>,
    /// `𝒩` with `1/𝒩² = Σ_k ψ_k² / w_k²` and `ψ_0 = 1`.
    pub norm_constant: f64,
    pub ln_norm_constant: f64,
    /// `‖H c - λ c‖∞`.
    pub residual: f64,
}

/// `ln |w_k|` and `sign w_k` for `k = 0..dim`.
pub(crate) fn coupling_weights(h: &TridiagonalHamiltonian) -> (Vec<f64>, Vec<f64>) {
    let n = h.dim();
    let mut ln = Vec::with_capacity(n);
    let mut sign = Vec::with_capacity(n);
    let (mut acc, mut s) = (0.0f64, 1.0f64);
    ln.push(acc);
    sign.push(s);
    for &o in &h.off()[..n.saturating_sub(1)] {
        acc += o.abs().ln();
        s *= o.signum();
        ln.push(acc);
        sign.push(s);
    }
    (ln, sign)
}

pub(crate) fn residual(h: &TridiagonalHamiltonian, lambda: f64, c: &[f64]) -> f64 {
    h.apply(c)
        .iter()
        .zip(c)
        .map(|(hc, x)| (hc - lambda * x).abs())
        .fold(0.0, f64::max)
}

/// First component well above rounding noise made positive.
pub(crate) fn fix_sign(c: &mut [f64]) {
    let max = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = c.iter().find(|x| x.abs() > f64::EPSILON.sqrt() * max) {
        if *first < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Build the eigenvector belonging to a converged eigenvalue `lambda` from
/// the recurrence values.
pub fn eigenvector_from_recurrence(h: &TridiagonalHamiltonian, lambda: f64) -> Result<RecurrenceEigenvector> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("eigenvalue must be finite, got {lambda}")));
    }
    let n = h.dim();
    let values = recurrence_values(h, lambda);
    let (ln_w, sign_w) = coupling_weights(h);

    // ln |ψ_k / w_k| and its sign.
    let terms: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v = values[k];
            if v.mantissa == 0.0 {
                (f64::NEG_INFINITY, 0.0)
            } else {
                (v.ln_abs() - ln_w[k], v.mantissa.signum() * sign_w[k])
            }
        })
        .collect();
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let mut c: Vec<f64> = terms.iter().map(|&(l, s)| s * (l - top).exp()).collect();
    let sum_sq: f64 = c.iter().map(|x| x * x).sum();
    // 1/𝒩² = Σ exp(2 l_k) = exp(2 top) Σ c_k².
    let ln_norm = -top - 0.5 * sum_sq.ln();
    let scale = sum_sq.sqrt();
    // c_0 = 𝒩 > 0 already.
    c.iter_mut().for_each(|x| *x /= scale);

    let res = residual(h, lambda, &c);
    let threshold = NOT_EIGENVALUE_RELATIVE * h.norm_inf().max(1.0);
    if !(res <= threshold) {
        return Err(Error::NotAnEigenvalue {
            value: lambda,
            residual: res,
            threshold,
        });
    }
    Ok(RecurrenceEigenvector {
        lambda,
        coefficients: c,
        norm_constant: ln_norm.exp(),
        ln_norm_constant: ln_norm,
        residual: res,
    })
}

/// LU factorization of `H - σ I` with partial pivoting; `U` has two
/// superdiagonals.
struct ShiftedLu {
    diag: Vec<f64>,
    sup1: Vec<f64>,
    sup2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
    floor: f64,
}

impl ShiftedLu {
    fn new(h: &TridiagonalHamiltonian, shift: f64) -> Self {
        let n = h.dim();
        let off = h.off();
        let mut diag: Vec<f64> = h.diag().iter().map(|d| d - shift).collect();
        let mut sup1: Vec<f64> = off.to_vec();
        sup1.push(0.0);
        let mut sup2 = vec![0.0; n];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for k in 0..n.saturating_sub(1) {
            let below = off[k];
            if diag[k].abs() >= below.abs() {
                let m = if diag[k] == 0.0 { 0.0 } else { below / diag[k] };
                mult[k] = m;
                diag[k + 1] -= m * sup1[k];
            } else {
                let m = diag[k] / below;
                let (row_k1, row_k2) = (sup1[k], 0.0);
                let (next_k1, next_k2) = (diag[k + 1], sup1[k + 1]);
                diag[k] = below;
                sup1[k] = next_k1;
                sup2[k] = next_k2;
                diag[k + 1] = row_k1 - m * next_k1;
                sup1[k + 1] = row_k2 - m * next_k2;
                mult[k] = m;
                swapped[k] = true;
            }
        }
        let floor = f64::EPSILON * h.norm_inf().max(1.0);
        Self {
            diag,
            sup1,
            sup2,
            mult,
            swapped,
            floor,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for k in 0..n.saturating_sub(1) {
            if self.swapped[k] {
                rhs.swap(k, k + 1);
            }
            rhs[k + 1] -= self.mult[k] * rhs[k];
        }
        for k in (0..n).rev() {
            let mut acc = rhs[k];
            if k + 1 < n {
                acc -= self.sup1[k] * rhs[k + 1];
            }
            if k + 2 < n {
                acc -= self.sup2[k] * rhs[k + 2];
            }
            let mut p = self.diag[k];
            if p.abs() < self.floor {
                p = if p < 0.0 { -self.floor } else { self.floor };
            }
            rhs[k] = acc / p;
        }
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn orthogonalize(x: &mut [f64], against: &[&[f64]]) {
    // Two passes of classical Gram-Schmidt.
    for _ in 0..2 {
        for v in against {
            let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(v.iter()).for_each(|(a, b)| *a -= dot * b);
        }
    }
}

/// Inverse iteration at `lambda`, kept orthogonal to `against` (vectors of
/// numerically close eigenvalues). Returns a unit vector with fixed sign.
pub(crate) fn inverse_iteration(
    h: &TridiagonalHamiltonian,
    lambda: f64,
    against: &[&[f64]],
    target_residual: f64,
) -> Vec<f64> {
    let n = h.dim();
    let scale = h.norm_inf().max(1.0);
    // Nudge the shift so that H - σI is never exactly singular.
    let shift = lambda + 4.0 * f64::EPSILON * scale * (1 + against.len()) as f64;
    let lu = ShiftedLu::new(h, shift);
    let mut x: Vec<f64> = (0..n).map(|k| 1.0 + 0.25 * ((k as f64 + 1.0) * 0.7548776662).fract()).collect();
    orthogonalize(&mut x, against);
    normalize(&mut x);
    for _ in 0..6 {
        lu.solve(&mut x);
        orthogonalize(&mut x, against);
        if normalize(&mut x) == 0.0 {
            // Start vector lay in the span of `against`; restart from a unit vector.
            x = vec![0.0; n];
            x[n / 2] = 1.0;
            orthogonalize(&mut x, against);
            normalize(&mut x);
            continue;
        }
        if residual(h, lambda, &x) <= target_residual {
            break;
        }
    }
    fix_sign(&mut x);
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimer::{build_qal_dimer, build_qdnls_dimer};

    #[test]
    fn two_level_al() {
        let h = build_qal_dimer(1, 1.0).unwrap();
        let v = eigenvector_from_recurrence(&h, 1.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v.coefficients[0] - s).abs() < 1e-15);
        assert!((v.coefficients[1] - s).abs() < 1e-15);
        assert!((v.norm_constant - s).abs() < 1e-15);
    }

    #[test]
    fn zero_mode_has_node_in_the_middle() {
        let h = build_qal_dimer(2, 2.0).unwrap();
        let v = eigenvector_from_recurrence(&h, 0.0).unwrap();
        assert_eq!(v.coefficients[1], 0.0);
        assert!((v.coefficients[0] + v.coefficients[2]).abs() < 1e-15);
        assert!(v.coefficients[0] > 0.0);
    }

    #[test]
    fn rejects_non_eigenvalue() {
        let h = build_qal_dimer(3, 1.0).unwrap();
        assert!(matches!(
            eigenvector_from_recurrence(&h, 0.123),
            Err(Error::NotAnEigenvalue { .. })
        ));
        assert!(eigenvector_from_recurrence(&h, f64::INFINITY).is_err());
    }

    #[test]
    fn weights_match_epsilon_factors_form() {
        // w_k = k! sqrt(C(2j, k)) for unit hopping.
        let h = build_qdnls_dimer(6, 1.0, 1.0).unwrap();
        let (ln_w, sign) = coupling_weights(&h);
        let mut fact = 1.0;
        for k in 0..=6usize {
            if k > 0 {
                fact *= k as f64;
            }
            let binom = (0..k).fold(1.0, |acc, i| acc * (6 - i) as f64 / (i + 1) as f64);
            assert!((ln_w[k].exp() - fact * binom.sqrt()).abs() < 1e-9 * fact * binom.sqrt());
            assert_eq!(sign[k], 1.0);
        }
    }

    #[test]
    fn pivoted_solve_matches_dense() {
        let h = build_qdnls_dimer(7, 3.0, -0.9).unwrap();
        let shift = 1.234;
        let lu = ShiftedLu::new(&h, shift);
        let b: Vec<f64> = (0..h.dim()).map(|k| (k as f64).sin() + 0.5).collect();
        let mut x = b.clone();
        lu.solve(&mut x);
        let hx = h.apply(&x);
        for k in 0..h.dim() {
            assert!((hx[k] - shift * x[k] - b[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_iteration_converges() {
        let h = build_qdnls_dimer(10, 2.0, 1.0).unwrap();
        let eig = h.to_dense().symmetric_eigenvalues();
        let lambda = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let x = inverse_iteration(&h, lambda, &[], 1e-13);
        assert!(residual(&h, lambda, &x) < 1e-11);
    }
}
