use serde::Serialize;

use super::game::{run_bit_fixing, GameTranscript};
use super::program::random_program;
use crate::regrep::RegularRep;
use crate::{Error, Result};

/// Seeded random programs cycling through every `(P, T)` with `P <= max_p`, `T <= max_t`
/// and `P + T <= max_queries`.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteConfig {
    pub n: usize,
    pub w: usize,
    pub programs: usize,
    pub max_p: usize,
    pub max_t: usize,
    pub max_queries: usize,
    pub seed: u64,
}

impl LemmaSuiteConfig {
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..=self.max_p {
            for t in 0..=self.max_t {
                if p + t <= self.max_queries {
                    out.push((p, t));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgramSummary {
    pub program: String,
    pub seed: u64,
    pub p: usize,
    pub t: usize,
    pub postselect_prob: f64,
    pub mean_success: f64,
    pub max_norm_defect: f64,
    pub lemma1_max_residual: f64,
    pub inequalities_checked: usize,
    pub inequalities_vacuous: usize,
    /// Smallest `rhs - lhs` over the non-vacuous per-step and final-success inequalities.
    pub min_slack: Option<f64>,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteReport {
    pub config: LemmaSuiteConfig,
    pub programs: Vec<ProgramSummary>,
    pub lemma1_checked: usize,
    pub lemma1_max_residual: f64,
    pub inequalities_checked: usize,
    pub inequalities_vacuous: usize,
    pub min_slack: Option<f64>,
    pub pass: bool,
}

fn summarize(tr: &GameTranscript, seed: u64) -> ProgramSummary {
    let l1 = tr.lemma_checks.iter().filter(|c| c.lemma == "lemma1");
    let lemma1_max_residual = l1.map(|c| c.lhs).fold(0.0, f64::max);
    let ineq: Vec<_> = tr.lemma_checks.iter().filter(|c| c.lemma == "lemma2" || c.lemma == "lemma3").collect();
    let vacuous = ineq.iter().filter(|c| c.rhs.is_none()).count();
    let min_slack = ineq.iter().filter_map(|c| c.slack).reduce(f64::min);
    let failures = tr
        .lemma_checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} y={:?} queries={:?}: lhs {:e} rhs {:?}", c.lemma, c.y, c.queries, c.lhs, c.rhs))
        .collect();
    ProgramSummary {
        program: tr.program.clone(),
        seed,
        p: tr.p,
        t: tr.t,
        postselect_prob: tr.postselect_prob,
        mean_success: tr.mean_success,
        max_norm_defect: tr.max_norm_defect,
        lemma1_max_residual,
        inequalities_checked: ineq.len() - vacuous,
        inequalities_vacuous: vacuous,
        min_slack,
        failures,
        pass: tr.pass,
    }
}

/// Runs every program with all lemma checks enabled.
pub fn lemma_suite(rep: &RegularRep, config: &LemmaSuiteConfig) -> Result<LemmaSuiteReport> {
    if rep.n() != config.n {
        return Err(Error::SizeMismatch {
            expected: config.n,
            found: rep.n(),
        });
    }
    let shapes = config.shapes();
    if shapes.is_empty() || config.programs == 0 {
        return Err(Error::Parameter("lemma suite needs at least one program shape".into()));
    }
    let mut programs = Vec::with_capacity(config.programs);
    let mut lemma1_checked = 0;
    for i in 0..config.programs {
        let (p, t) = shapes[i % shapes.len()];
        let seed = config.seed.wrapping_add(i as u64);
        let prog = random_program(config.n, config.w, p, t, seed);
        let tr = run_bit_fixing(&prog, &prog.layout()?, Some(rep))?;
        lemma1_checked += tr.lemma_checks.iter().filter(|c| c.lemma == "lemma1").count();
        programs.push(summarize(&tr, seed));
    }
    let lemma1_max_residual = programs.iter().map(|p| p.lemma1_max_residual).fold(0.0, f64::max);
    let min_slack = programs.iter().filter_map(|p| p.min_slack).reduce(f64::min);
    Ok(LemmaSuiteReport {
        config: config.clone(),
        lemma1_checked,
        lemma1_max_residual,
        inequalities_checked: programs.iter().map(|p| p.inequalities_checked).sum(),
        inequalities_vacuous: programs.iter().map(|p| p.inequalities_vacuous).sum(),
        min_slack,
        pass: programs.iter().all(|p| p.pass),
        programs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_respect_query_cap() {
        let c = LemmaSuiteConfig {
            n: 4,
            w: 1,
            programs: 1,
            max_p: 3,
            max_t: 3,
            max_queries: 3,
            seed: 0,
        };
        let s = c.shapes();
        assert_eq!(s.len(), 10);
        assert!(s.iter().all(|&(p, t)| p + t <= 3));
    }

    #[test]
    fn n5_one_online_query_is_non_vacuous() {
        let rep = RegularRep::new(5).unwrap();
        let c = LemmaSuiteConfig {
            n: 5,
            w: 1,
            programs: 3,
            max_p: 0,
            max_t: 1,
            max_queries: 1,
            seed: 10,
        };
        let r = lemma_suite(&rep, &c).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.inequalities_checked > 0);
        // P = T = 0 makes the final-success bound tight: √(1/N) = 0 + 1/√N.
        assert!(r.min_slack.unwrap() >= -1e-12);
    }
}
