use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::layout::{JointState, RegisterLayout};
use super::program::{AlgorithmProgram, Step};
use crate::linalg::OrthoBasis;
use crate::regrep::RegularRep;
use crate::{Error, Result};

/// Unitary steps may drift the norm by at most this much.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Inequalities pass when `rhs - lhs >= -SLACK_TOLERANCE`.
pub const SLACK_TOLERANCE: f64 = 1e-9;
/// Lemma-1 residuals above this fail.
pub const SUBSPACE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct ChallengeOutcome {
    pub y: usize,
    pub p_succ: f64,
}

/// One evaluated inequality. `rhs = None` marks a vacuous bound (non-positive denominator).
#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub y: Option<usize>,
    pub queries: Option<usize>,
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub pass: bool,
}

impl LemmaCheck {
    fn inequality(lemma: &'static str, y: Option<usize>, queries: Option<usize>, lhs: f64, rhs: Option<f64>) -> Self {
        let slack = rhs.map(|r| r - lhs);
        LemmaCheck {
            lemma,
            y,
            queries,
            lhs,
            rhs,
            slack,
            pass: slack.is_none_or(|s| s >= -SLACK_TOLERANCE),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GameTranscript {
    pub program: String,
    pub n: usize,
    pub w: usize,
    pub p: usize,
    pub t: usize,
    pub postselect_prob: f64,
    pub per_challenge: Vec<ChallengeOutcome>,
    pub mean_success: f64,
    pub max_norm_defect: f64,
    /// `‖(Π_y^high ⊗ I) φ‖` after 0..=T online queries, per challenge (only with checks).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high_norms: Option<Vec<Vec<f64>>>,
    pub lemma_checks: Vec<LemmaCheck>,
    pub pass: bool,
}

/// `1/√d`, or `None` when `d <= 0`.
fn inv_sqrt(d: f64) -> Option<f64> {
    (d > 0.0).then(|| 1.0 / d.sqrt())
}

struct Checker<'a> {
    rep: &'a RegularRep,
    rows: Vec<LemmaCheck>,
}

impl Checker<'_> {
    /// Oracle-side support of the state lies in `A_k` after `k` queries.
    fn lemma1(&mut self, state: &JointState, k: usize, y: Option<usize>) -> Result<()> {
        let n = self.rep.n();
        let residual = state.complement_norm(self.rep.subspace_a(k.min(n))?);
        self.rows.push(LemmaCheck {
            lemma: "lemma1",
            y,
            queries: Some(k),
            lhs: residual,
            rhs: Some(0.0),
            slack: Some(-residual),
            pass: residual <= SUBSPACE_TOLERANCE,
        });
        Ok(())
    }
}

fn apply(state: &mut JointState, step: &Step) {
    match step {
        Step::Query => state.apply_oracle(),
        Step::Unitary(u) => state.apply_local(&u.registers, &u.matrix),
    }
}

/// `φ_P`: offline phase then postselection on `b = 0`. Returns the state, the outcome
/// probability and the worst norm drift.
fn offline_phase(
    program: &AlgorithmProgram,
    layout: &RegisterLayout,
    mut checker: Option<&mut Checker<'_>>,
) -> Result<(JointState, f64, f64)> {
    let mut state = JointState::init(layout);
    let mut defect: f64 = 0.0;
    let mut queries = 0;
    for step in &program.offline {
        apply(&mut state, step);
        defect = defect.max((state.norm() - 1.0).abs());
        if matches!(step, Step::Query) {
            queries += 1;
            if let Some(c) = checker.as_deref_mut() {
                c.lemma1(&state, queries, None)?;
            }
        }
    }
    let prob = state.postselect_b_zero(&program.name)?;
    if let Some(c) = checker {
        c.lemma1(&state, program.p, None)?;
    }
    Ok((state, prob, defect))
}

/// `φ^y_{P+T}` for one challenge.
pub fn final_state(program: &AlgorithmProgram, layout: &RegisterLayout, y: usize) -> Result<JointState> {
    program.validate(layout)?;
    if y >= program.n {
        return Err(Error::Parameter(format!("challenge {y} out of range for N={}", program.n)));
    }
    let (mut state, _, _) = offline_phase(program, layout, None)?;
    for step in &program.online[y] {
        apply(&mut state, step);
    }
    Ok(state)
}

/// Runs the bit-fixing game for every challenge. With `rep`, also evaluates the
/// subspace-containment, per-step and final-success inequalities.
pub fn run_bit_fixing(program: &AlgorithmProgram, layout: &RegisterLayout, rep: Option<&RegularRep>) -> Result<GameTranscript> {
    program.validate(layout)?;
    if let Some(r) = rep {
        if r.n() != program.n {
            return Err(Error::SizeMismatch {
                expected: program.n,
                found: r.n(),
            });
        }
    }
    let n = program.n;
    let mut checker = rep.map(|rep| Checker { rep, rows: Vec::new() });
    let (phi_p, postselect_prob, mut defect) = offline_phase(program, layout, checker.as_mut())?;

    let highs: Option<Vec<&OrthoBasis>> = rep.map(|r| (0..n).map(|y| r.high_basis(y)).collect()).transpose()?;
    let mut per_challenge = Vec::with_capacity(n);
    let mut high_norms = Vec::new();
    for y in 0..n {
        let mut state = phi_p.clone();
        let mut h = Vec::new();
        if let Some(hb) = &highs {
            h.push(state.projected_norm(hb[y]));
        }
        let mut queries = 0;
        for step in &program.online[y] {
            apply(&mut state, step);
            defect = defect.max((state.norm() - 1.0).abs());
            if matches!(step, Step::Query) {
                queries += 1;
                if let (Some(c), Some(hb)) = (checker.as_mut(), &highs) {
                    c.lemma1(&state, program.p + queries, Some(y))?;
                    h.push(state.projected_norm(hb[y]));
                }
            }
        }
        per_challenge.push(ChallengeOutcome {
            y,
            p_succ: state.success_probability(y),
        });
        if highs.is_some() {
            high_norms.push(h);
        }
    }
    let mean_success = per_challenge.iter().map(|c| c.p_succ).sum::<f64>() / n as f64;

    let mut lemma_checks = Vec::new();
    if let Some(c) = checker {
        lemma_checks = c.rows;
        lemma_checks.extend(bound_checks(program, &per_challenge, &high_norms, mean_success));
    }
    let pass = defect <= NORM_TOLERANCE && lemma_checks.iter().all(|c| c.pass);
    Ok(GameTranscript {
        program: program.name.clone(),
        n,
        w: program.w,
        p: program.p,
        t: program.t,
        postselect_prob,
        per_challenge,
        mean_success,
        max_norm_defect: defect,
        high_norms: highs.map(|_| high_norms),
        lemma_checks,
        pass,
    })
}

fn bound_checks(program: &AlgorithmProgram, outcomes: &[ChallengeOutcome], h: &[Vec<f64>], mean_success: f64) -> Vec<LemmaCheck> {
    let nf = program.n as f64;
    let (p, t) = (program.p, program.t);
    let mut rows = Vec::new();
    for (out, hy) in outcomes.iter().zip(h) {
        for k in 1..=t {
            let rhs = inv_sqrt(nf - 4.0 * (p + k) as f64).map(|c| hy[k - 1] + 2.0 * 2f64.sqrt() * c);
            rows.push(LemmaCheck::inequality("lemma3", Some(out.y), Some(p + k), hy[k], rhs));
        }
        let rhs = inv_sqrt(nf - 2.0 * (p + t) as f64).map(|c| hy[t] + c);
        rows.push(LemmaCheck::inequality("lemma2", Some(out.y), Some(p + t), out.p_succ.sqrt(), rhs));
    }
    let avg_h0 = h.iter().map(|hy| hy[0] * hy[0]).sum::<f64>() / nf;
    rows.push(LemmaCheck::inequality("avg_bound", None, Some(p), avg_h0, Some(2.0 * p as f64 / nf)));
    let tail = 16.0 * ((t + 1) as f64).powi(2);
    let denom = nf - 4.0 * (p + t) as f64;
    let rhs = (denom > 0.0).then(|| 4.0 * p as f64 / nf + tail / denom);
    rows.push(LemmaCheck::inequality("bitfix_bound", None, Some(p + t), mean_success, rhs));
    rows
}

/// Terminal-measurement sampling against the exact success probability.
#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub y: usize,
    pub shots: usize,
    pub hits: usize,
    pub estimate: f64,
    pub exact: f64,
    pub sigma: f64,
    pub z_score: f64,
    pub pass: bool,
}

pub fn monte_carlo_check(program: &AlgorithmProgram, layout: &RegisterLayout, y: usize, shots: usize, seed: u64) -> Result<MonteCarloReport> {
    if shots == 0 {
        return Err(Error::Parameter("shots must be positive".into()));
    }
    let state = final_state(program, layout, y)?;
    let exact = state.success_probability(y) / state.norm_sqr();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = state.sample_success(y, shots, &mut rng)?;
    let estimate = hits as f64 / shots as f64;
    let sigma = (exact * (1.0 - exact) / shots as f64).sqrt();
    let z_score = if sigma > 0.0 {
        (estimate - exact) / sigma
    } else if (estimate - exact).abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MonteCarloReport {
        y,
        shots,
        hits,
        estimate,
        exact,
        sigma,
        z_score,
        pass: z_score.abs() <= 3.0,
    })
}
