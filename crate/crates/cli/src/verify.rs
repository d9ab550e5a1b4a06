//! `verify` suites: algebra, spectral and conservation checks emitted as one
//! machine-readable line each.

use nalgebra::DMatrix;
use qdimer::dimer::{build_dimer, Model};
use qdimer::fock::{
    al_oscillator_ops, build_sector_basis, casimir_matrix, su_n_generators, suq2_casimir, suq_n_generators,
    verify_al_relations, verify_chevalley, verify_number_reconstruction, verify_serre, SectorOperator,
};
use qdimer::invariants::{build_qal_chain, build_qdnls_chain, check_commutes, conservation_suite};
use qdimer::linalg::{commutator_norm, max_abs};
use qdimer::report::CheckResult;
use qdimer::spectral::{
    completeness_check, dense_oracle, df_orthonormality_check, nondegeneracy_check, parity_structure_check, solve,
    trace_identity_check,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Algebra,
    Spectral,
    Conservation,
    All,
}

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub two_j_max: u32,
    pub max_sites: usize,
    pub max_quanta: u32,
    pub tol: f64,
    pub inject_failure: bool,
}

pub const CAP_TWO_J: u32 = 200;
pub const CAP_SITES: usize = 5;
pub const CAP_QUANTA: u32 = 8;

/// One line of the verification transcript.
#[derive(Debug, Clone)]
pub enum Line {
    Check { suite: &'static str, context: String, result: CheckResult },
    /// Reported but not counted.
    Note { suite: &'static str, context: String, text: String },
}

impl Line {
    fn check(suite: &'static str, context: impl Into<String>, result: CheckResult) -> Self {
        Line::Check {
            suite,
            context: context.into(),
            result,
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self, Line::Check { result, .. } if !result.passed())
    }

    pub fn render(&self) -> String {
        match self {
            Line::Check { suite, context, result } => format!("suite={suite} {context} {result}"),
            Line::Note { suite, context, text } => format!("suite={suite} {context} status=info {text}"),
        }
    }
}

pub fn run(suite: Suite, caps: Caps) -> Result<Vec<Line>, CliError> {
    if caps.two_j_max == 0 || caps.two_j_max > CAP_TWO_J {
        return Err(CliError::Usage(format!("two-j-max must be in 1..={CAP_TWO_J}")));
    }
    if !(2..=CAP_SITES).contains(&caps.max_sites) {
        return Err(CliError::Usage(format!("max-sites must be in 2..={CAP_SITES}")));
    }
    if caps.max_quanta > CAP_QUANTA {
        return Err(CliError::Usage(format!("max-quanta must be at most {CAP_QUANTA}")));
    }
    if !(caps.tol > 0.0) {
        return Err(CliError::Usage("tol must be positive".into()));
    }
    let mut lines = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        algebra(&caps, &mut lines)?;
    }
    if matches!(suite, Suite::Spectral | Suite::All) {
        spectral(&caps, &mut lines)?;
    }
    if matches!(suite, Suite::Conservation | Suite::All) {
        conservation(&caps, &mut lines)?;
    }
    Ok(lines)
}

fn perturb(op: &SectorOperator, amount: f64) -> SectorOperator {
    op.map(|m| {
        let mut m = m.clone();
        if m.nrows() > 1 {
            m[(0, 1)] += amount;
        }
        m
    })
}

fn algebra(caps: &Caps, lines: &mut Vec<Line>) -> Result<(), CliError> {
    const S: &str = "algebra";
    let mut injected = !caps.inject_failure;
    for n in 2..=caps.max_sites {
        for m in 0..=caps.max_quanta {
            let basis = build_sector_basis(n, m)?;
            for q in [1.0, 0.8, 0.5] {
                let mut g = suq_n_generators(&basis, q)?;
                if !injected && basis.dim() > 1 {
                    g.e[0] = perturb(&g.e[0], 1e-3);
                    injected = true;
                }
                let ctx = format!("n_sites={n} M={m} q={q}");
                for r in verify_chevalley(&g).checks {
                    lines.push(Line::check(S, &ctx, r));
                }
                let serre = verify_serre(&g);
                for r in serre.checks {
                    lines.push(Line::check(S, &ctx, r));
                }
            }
            let classical = su_n_generators(&basis)?;
            let deformed = suq_n_generators(&basis, 1.0)?;
            let diff = classical
                .all()
                .into_iter()
                .zip(deformed.all())
                .map(|((_, a), (_, b))| max_abs(&(a.matrix() - b.matrix())))
                .fold(0.0, f64::max);
            let ctx = format!("n_sites={n} M={m}");
            lines.push(Line::check(S, &ctx, CheckResult::new("q1_equals_classical", diff, 1e-14)));
            for r in verify_number_reconstruction(&basis)?.checks {
                lines.push(Line::check(S, &ctx, r));
            }
            if n <= 3 {
                let dim = basis.dim() as f64;
                for p in 1..=2 {
                    let c = casimir_matrix(&classical, p)?;
                    let worst = classical
                        .all()
                        .into_iter()
                        .map(|(_, op)| commutator_norm(c.matrix(), op.matrix()))
                        .fold(0.0, f64::max);
                    lines.push(Line::check(
                        S,
                        &ctx,
                        CheckResult::new(format!("C{}_central", 2 * p), worst, 1e-10 * dim),
                    ));
                }
            }
        }
    }
    for gamma in [0.0, 2.0, 8.0] {
        let osc = al_oscillator_ops(20, gamma)?;
        for r in verify_al_relations(&osc).checks {
            lines.push(Line::check(S, format!("n_max=20 gamma={gamma}"), r));
        }
    }
    Ok(())
}

fn spectral(caps: &Caps, lines: &mut Vec<Line>) -> Result<(), CliError> {
    const S: &str = "spectral";
    let mut injected = !caps.inject_failure;
    for model in [Model::Qdnls, Model::Qal] {
        for gamma in [0.0, 0.5, 2.0, 8.0] {
            let mut oracle_worst = 0.0f64;
            let mut residual_worst = 0.0f64;
            let mut df_worst = 0.0f64;
            let mut complete_worst = 0.0f64;
            let mut trace_worst = 0.0f64;
            let mut parity_fail = Vec::new();
            let mut narrowest = (f64::INFINITY, 0);
            for two_j in 1..=caps.two_j_max {
                let h = build_dimer(model, two_j, gamma, 1.0)?;
                let s = solve(&h, caps.tol)?;
                let mut d = dense_oracle(&h)?;
                if !injected {
                    d = dense_oracle(&qdimer::dimer::TridiagonalHamiltonian::from_parts(
                        h.sector(),
                        h.model(),
                        h.gamma(),
                        h.epsilon(),
                        h.diag().iter().map(|x| x + 1e-3).collect(),
                        h.off().to_vec(),
                    )?)?;
                    injected = true;
                }
                let scale = h.norm_inf().max(1.0);
                let dim = h.dim() as f64;
                // Oracle equivalence relative to max(1, |λ|), with the dense
                // solver's own backward error ε‖H‖ allowed for.
                for (x, y) in s.eigenvalues().iter().zip(d.eigenvalues()) {
                    let allowed = 1e-10 * y.abs().max(1.0) + 16.0 * f64::EPSILON * scale;
                    oracle_worst = oracle_worst.max((x - y).abs() / allowed);
                }
                let v = s.vectors();
                let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(s.eigenvalues()));
                let res = max_abs(&(h.to_dense() * v - v * lambda));
                residual_worst = residual_worst.max(res / (1e-10 * scale));
                df_worst = df_worst.max(df_orthonormality_check(&s).max() / (1e-9 * dim));
                complete_worst = complete_worst.max(completeness_check(&s) / (1e-9 * dim));
                trace_worst = trace_worst.max(trace_identity_check(&s) / 1e-10);
                if model == Model::Qal {
                    if !parity_structure_check(&s)?.passed() {
                        parity_fail.push(two_j);
                    }
                    let nd = nondegeneracy_check(&s, 1e-8);
                    if !nd.passed() {
                        lines.push(Line::check(S, format!("model={model} two_j={two_j} gamma={gamma}"), nd));
                    }
                }
                let gap = qdimer::spectral::min_gap(&s);
                if gap < narrowest.0 {
                    narrowest = (gap, two_j);
                }
            }
            let ctx = format!("model={model} gamma={gamma} two_j=1..{}", caps.two_j_max);
            // Norms below are ratios to the respective tolerance.
            for (label, worst) in [
                ("oracle_equivalence", oracle_worst),
                ("eigen_residual", residual_worst),
                ("df_orthonormality", df_worst),
                ("completeness", complete_worst),
                ("trace_identity", trace_worst),
            ] {
                lines.push(Line::check(S, &ctx, CheckResult::new(label, worst, 1.0)));
            }
            if model == Model::Qal {
                lines.push(Line::check(
                    S,
                    &ctx,
                    CheckResult::new(format!("parity_structure offending_two_j={parity_fail:?}"), parity_fail.len() as f64, 0.0),
                ));
            }
            lines.push(Line::Note {
                suite: S,
                context: ctx.clone(),
                text: format!("min_gap={:e} at two_j={}", narrowest.0, narrowest.1),
            });
        }
    }
    Ok(())
}

fn conservation(caps: &Caps, lines: &mut Vec<Line>) -> Result<(), CliError> {
    const S: &str = "conservation";
    let n_max = caps.max_sites.min(3);
    for n in 2..=n_max {
        let m_max = if n == 2 { caps.max_quanta.max(8) } else { caps.max_quanta };
        for m in 0..=m_max {
            for gamma in [0.0, 1.0, 5.0] {
                for model in [Model::Qdnls, Model::Qal] {
                    let r = conservation_suite(model, n, m, gamma, 1.0)?;
                    let ctx = format!("model={model} n_sites={n} M={m} gamma={gamma}");
                    for c in r.checks.checks {
                        lines.push(Line::check(S, &ctx, c));
                    }
                }
            }
        }
    }
    if caps.inject_failure {
        // A non-central stand-in for the q-Casimir must be caught.
        let basis = build_sector_basis(2, 3)?;
        let h = build_qal_chain(&basis, 2.0)?;
        let g = suq_n_generators(&basis, qdimer::qnumbers::q_from_gamma(2.0)?.q())?;
        let c = perturb(&suq2_casimir(&g)?, 1e-3);
        let (norm, _) = check_commutes(&h, &c, 0.0)?;
        lines.push(Line::check(S, "injected", CheckResult::new("[H,Cq+δ]", norm, 1e-10 * basis.dim() as f64)));
    }
    for m in 1..=12u32 {
        let basis = build_sector_basis(2, m)?;
        for gamma in [0.5, 2.0, 8.0] {
            for model in [Model::Qdnls, Model::Qal] {
                let dimer = build_dimer(model, m, gamma, 1.0)?;
                let c = dimer.constants();
                let chain = match model {
                    Model::Qdnls => build_qdnls_chain(&basis, c.chain_gamma, 1.0)?,
                    Model::Qal => build_qal_chain(&basis, c.chain_gamma)?,
                };
                let mut a: Vec<f64> = chain.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
                a.sort_by(f64::total_cmp);
                let mut b: Vec<f64> = solve(&dimer, caps.tol)?
                    .eigenvalues()
                    .iter()
                    .map(|&l| c.chain_energy(l))
                    .collect();
                b.sort_by(f64::total_cmp);
                let worst = a
                    .iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
                    .fold(0.0, f64::max);
                lines.push(Line::check(
                    S,
                    format!("model={model} n_sites=2 M={m} gamma={gamma}"),
                    CheckResult::new("dimer_consistency", worst, 1e-12),
                ));
            }
        }
    }
    Ok(())
}
