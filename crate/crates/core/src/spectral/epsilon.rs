//! Weights `ε_k` relating recurrence values to eigenvector components.
//!
//! QDNLS: `ε_k = sqrt(k! ∏_{i<k} (2j - i))`; QAL: the same with q-numbers.

use crate::dimer::Model;
use crate::error::{Error, Result};
use crate::qnumbers::{q_from_gamma, sym_qnum};

/// `ln ε_k` for `k = 0..=two_j`.
pub fn ln_epsilon_factors(two_j: u32, model: Model, gamma: f64) -> Result<Vec<f64>> {
    if two_j == 0 {
        return Err(Error::Domain("two_j must be at least 1".into()));
    }
    let q = match model {
        Model::Qdnls => 1.0,
        Model::Qal => q_from_gamma(gamma)?.q(),
    };
    let num = |x: f64| if model == Model::Qal { sym_qnum(x, q) } else { x };
    let mut out = Vec::with_capacity(two_j as usize + 1);
    let mut acc = 0.0f64;
    out.push(acc);
    for k in 1..=two_j {
        // Factor k from the factorial and (2j - k + 1) from the product.
        acc += 0.5 * (num(k as f64).ln() + num((two_j - k + 1) as f64).ln());
        out.push(acc);
    }
    Ok(out)
}

/// `ε_k` for `k = 0..=two_j`; `Overflow` when a factor leaves the `f64` range,
/// in which case [`ln_epsilon_factors`] is the usable form.
pub fn epsilon_factors(two_j: u32, model: Model, gamma: f64) -> Result<Vec<f64>> {
    let ln = ln_epsilon_factors(two_j, model, gamma)?;
    let out: Vec<f64> = ln.iter().map(|l| l.exp()).collect();
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow(format!(
            "epsilon factors for two_j = {two_j} exceed f64; use ln_epsilon_factors"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnumbers::q_factorial;

    #[test]
    fn small_values() {
        for model in [Model::Qdnls, Model::Qal] {
            assert_eq!(epsilon_factors(5, model, 1.5).unwrap()[0], 1.0);
        }
        let e = epsilon_factors(2, Model::Qdnls, 0.0).unwrap();
        assert!((e[1] - 2f64.sqrt()).abs() < 1e-15);
        assert!((e[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn qdnls_is_factorial_times_root_binomial() {
        let e = epsilon_factors(12, Model::Qdnls, 0.0).unwrap();
        let mut fact = 1.0;
        let mut binom = 1.0;
        for k in 0..=12u32 {
            if k > 0 {
                fact *= k as f64;
                binom *= (12 - k + 1) as f64 / k as f64;
            }
            assert!((e[k as usize] / (fact * binom.sqrt()) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn qal_matches_q_factorials() {
        let gamma = 3.0;
        let q = q_from_gamma(gamma).unwrap().q();
        let e = epsilon_factors(7, Model::Qal, gamma).unwrap();
        for k in 0..=7u32 {
            let prod: f64 = (0..k).map(|i| sym_qnum((7 - i) as f64, q)).product();
            let expect = (q_factorial(k, q) * prod).sqrt();
            assert!((e[k as usize] / expect - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn qal_at_zero_gamma_is_qdnls() {
        let a = epsilon_factors(9, Model::Qal, 0.0).unwrap();
        let b = epsilon_factors(9, Model::Qdnls, 0.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x / y - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn large_sectors_overflow_to_log_form() {
        assert!(matches!(epsilon_factors(400, Model::Qdnls, 0.0), Err(Error::Overflow(_))));
        let ln = ln_epsilon_factors(400, Model::Qdnls, 0.0).unwrap();
        assert!(ln.iter().all(|x| x.is_finite()));
        assert!(epsilon_factors(0, Model::Qdnls, 0.0).is_err());
    }
}
