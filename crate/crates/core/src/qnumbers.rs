//! Symmetric and basic q-numbers, q-factorials and q-binomials.
//!
//! Two families of deformed integers appear in the models:
//!
//! * the symmetric q-number `[x] = (q^x - q^-x) / (q - 1/q)`, invariant under
//!   `q -> 1/q`, used by the su_q(n) generators and the QAL dimer;
//! * the basic number `{n} = ((1 + γ/2)^n - 1) / (γ/2)`, the eigenvalue of
//!   `b†b` for the Ablowitz-Ladik oscillator.
//!
//! They are related by `{n} = q^(1-n) [n]` when `q = 1/sqrt(1 + γ/2)`.

use crate::error::{Error, Result};

/// Below this distance from `q = 1` the q-numbers are evaluated by their
/// classical limits.
pub const Q_CONTINUITY_THRESHOLD: f64 = 1e-8;

/// The nonlinearity strength together with the deformation parameter it
/// induces on the AL oscillator: `q = 1/sqrt(1 + γ/2)`, `s = ln q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParameter {
    gamma: f64,
    q: f64,
    s: f64,
}

impl DeformationParameter {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `ln q`, never positive.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `1 + γ/2 = q^-2`, the base of the basic numbers.
    pub fn base(&self) -> f64 {
        1.0 + 0.5 * self.gamma
    }

    /// True when the deformation is numerically trivial.
    pub fn is_classical(&self) -> bool {
        (self.q - 1.0).abs() < Q_CONTINUITY_THRESHOLD
    }
}

/// Map a nonlinearity strength to the AL deformation parameter.
pub fn q_from_gamma(gamma: f64) -> Result<DeformationParameter> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "gamma must be finite and non-negative, got {gamma}"
        )));
    }
    // ln(1 + γ/2) via ln_1p keeps s accurate for small γ.
    let s = -0.5 * (0.5 * gamma).ln_1p();
    let q = if gamma == 0.0 { 1.0 } else { 1.0 / (1.0 + 0.5 * gamma).sqrt() };
    Ok(DeformationParameter { gamma, q, s })
}

/// Symmetric q-number `[x]_q`.
pub fn sym_qnum(x: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0, "q must be positive");
    if (q - 1.0).abs() < Q_CONTINUITY_THRESHOLD {
        return x;
    }
    // sinh(x s) / sinh(s) avoids cancellation in q^x - q^-x.
    let s = q.ln();
    (x * s).sinh() / s.sinh()
}

/// Basic number `{n} = ((1 + γ/2)^n - 1) / (γ/2)`.
pub fn basic_qnum(n: u32, gamma: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let half = 0.5 * gamma;
    if half.abs() < Q_CONTINUITY_THRESHOLD {
        return n as f64;
    }
    // expm1(n ln(1+γ/2)) keeps the small-γ regime accurate.
    (n as f64 * half.ln_1p()).exp_m1() / half
}

/// q-factorial `[m]! = [1][2]…[m]`, with `[0]! = 1`.
pub fn q_factorial(m: u32, q: f64) -> f64 {
    (1..=m).map(|k| sym_qnum(k as f64, q)).product()
}

/// Natural log of `[m]!`; finite where the factorial itself overflows.
pub fn ln_q_factorial(m: u32, q: f64) -> f64 {
    (1..=m).map(|k| sym_qnum(k as f64, q).ln()).sum()
}

/// q-binomial coefficient `[m]! / ([n]! [m-n]!)`.
pub fn q_binomial(m: u32, n: u32, q: f64) -> Result<f64> {
    if n > m {
        return Err(Error::Domain(format!(
            "q-binomial needs n <= m, got m={m}, n={n}"
        )));
    }
    let k = n.min(m - n);
    // Multiplicative form: prod_{i=1..k} [m-k+i]/[i], avoids large factorials.
    Ok((1..=k).fold(1.0, |acc, i| {
        acc * sym_qnum((m - k + i) as f64, q) / sym_qnum(i as f64, q)
    }))
}
