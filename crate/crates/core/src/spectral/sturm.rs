//! The characteristic-polynomial recurrence
//! `p_{k+1} = (λ - d_k) p_k - o_{k-1}² p_{k-1}`, `p_{-1} = 0`, `p_0 = 1`,
//! with power-of-two rescaling so that large dimers neither overflow nor
//! underflow.

use crate::dimer::TridiagonalHamiltonian;
use crate::error::{Error, Result};

const RESCALE_HI: f64 = 1.340_780_792_994_259_7e154; // 2^512
const RESCALE_LO: f64 = 7.458_340_731_200_207e-155; // 2^-512

/// Result of running the recurrence up to `p_N`, `N = dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SturmEvaluation {
    pub lambda: f64,
    /// `p_N(λ)` divided by `2^log_scale`.
    pub value: f64,
    /// Base-2 exponent removed from `value` by rescaling.
    pub log_scale: i64,
    /// Number of eigenvalues strictly below `λ`.
    pub sign_changes: usize,
}

impl SturmEvaluation {
    /// `ln |p_N(λ)|`.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.log_scale as f64 * std::f64::consts::LN_2
    }
}

/// One recurrence value `mantissa * 2^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub mantissa: f64,
    pub exponent: i64,
}

impl Scaled {
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }
}

/// Scale exponent bringing `x` near 1.
fn exponent_of(x: f64) -> i64 {
    x.abs().log2().floor() as i64
}

fn pow2(e: i64) -> f64 {
    // Split so that neither factor leaves the normal range.
    let half = e / 2;
    2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

/// Visit `p_0(λ), …, p_N(λ)` together with their (shared) scale exponents.
pub(crate) fn recurrence_values(h: &TridiagonalHamiltonian, lambda: f64) -> Vec<Scaled> {
    let n = h.dim();
    let d = h.diag();
    let o = h.off();
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut exponent: i64 = 0;
    out.push(Scaled { mantissa: cur, exponent });
    for k in 0..n {
        let coupling = if k > 0 { o[k - 1] * o[k - 1] } else { 0.0 };
        let next = (lambda - d[k]) * cur - coupling * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag != 0.0 && !(RESCALE_LO..=RESCALE_HI).contains(&mag) {
            let s = exponent_of(cur);
            let f = pow2(-s);
            cur *= f;
            prev *= f;
            exponent += s;
        }
        out.push(Scaled { mantissa: cur, exponent });
    }
    out
}

/// Sturm count: sign agreements between consecutive `p_k`, an exact zero
/// taking the sign opposite to its predecessor.
pub(crate) fn count_below(values: &[Scaled]) -> usize {
    let mut count = 0;
    let mut prev_sign = 1.0f64;
    for v in &values[1..] {
        let sign = if v.mantissa == 0.0 {
            -prev_sign
        } else {
            v.mantissa.signum()
        };
        if sign == prev_sign {
            count += 1;
        }
        prev_sign = sign;
    }
    count
}

/// Evaluate the characteristic polynomial and the Sturm count at `λ`.
pub fn sturm_eval(h: &TridiagonalHamiltonian, lambda: f64) -> Result<SturmEvaluation> {
    if lambda.is_nan() {
        return Err(Error::Domain("lambda is NaN".into()));
    }
    let values = recurrence_values(h, lambda);
    let last = values[values.len() - 1];
    Ok(SturmEvaluation {
        lambda,
        value: last.mantissa,
        log_scale: last.exponent,
        sign_changes: count_below(&values),
    })
}

/// Sturm count only, without the allocation of the full sequence.
pub(crate) fn sturm_count(h: &TridiagonalHamiltonian, lambda: f64) -> usize {
    let d = h.diag();
    let o = h.off();
    let mut prev = 0.0;
    let mut cur = 1.0f64;
    let mut prev_sign = 1.0f64;
    let mut count = 0;
    for k in 0..h.dim() {
        let coupling = if k > 0 { o[k - 1] * o[k - 1] } else { 0.0 };
        let next = (lambda - d[k]) * cur - coupling * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag != 0.0 && !(RESCALE_LO..=RESCALE_HI).contains(&mag) {
            let f = pow2(-exponent_of(cur));
            cur *= f;
            prev *= f;
        }
        let sign = if cur == 0.0 { -prev_sign } else { cur.signum() };
        if sign == prev_sign {
            count += 1;
        }
        prev_sign = sign;
    }
    count
}

/// `p_N`, `p_{N-1}` and `p_N'` at `λ`, all sharing one scale exponent.
pub(crate) fn value_and_derivative(h: &TridiagonalHamiltonian, lambda: f64) -> (Scaled, Scaled, Scaled) {
    let d = h.diag();
    let o = h.off();
    let (mut p_prev, mut p_cur) = (0.0, 1.0f64);
    let (mut dp_prev, mut dp_cur) = (0.0, 0.0f64);
    let mut exponent = 0i64;
    for k in 0..h.dim() {
        let coupling = if k > 0 { o[k - 1] * o[k - 1] } else { 0.0 };
        let p_next = (lambda - d[k]) * p_cur - coupling * p_prev;
        let dp_next = p_cur + (lambda - d[k]) * dp_cur - coupling * dp_prev;
        p_prev = p_cur;
        p_cur = p_next;
        dp_prev = dp_cur;
        dp_cur = dp_next;
        let mag = p_cur.abs().max(dp_cur.abs());
        if mag != 0.0 && !(RESCALE_LO..=RESCALE_HI).contains(&mag) {
            let s = exponent_of(mag);
            let f = pow2(-s);
            p_cur *= f;
            p_prev *= f;
            dp_cur *= f;
            dp_prev *= f;
            exponent += s;
        }
    }
    let wrap = |m| Scaled { mantissa: m, exponent };
    (wrap(p_cur), wrap(p_prev), wrap(dp_cur))
}
