use perminv_core::attacks::{tradeoff_sweep, verify_sweep};
use perminv_core::querysim::{
    alternating_game, empty_program, grover_fit, grover_invert, grover_program, lemma_suite, monte_carlo_check,
    query_and_store_program, random_program, run_bit_fixing, Adversary, LemmaSuiteConfig, QueryAdversary,
    SwapAdversary,
};
use perminv_core::regrep::{avg_bound_check, decomposition_check, spectrum, DecompositionOptions};
use perminv_core::young::{branching_row, eigenvalue_m, identity_sweep, partitions, CharacterTable};
use perminv_core::{Error, RegularRep};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

/// Largest `n` for the exact Young tables (partition counts grow quickly).
const YOUNG_MAX_N: usize = 40;
const CHARACTER_MAX_N: usize = 16;
const IDENTITY_MAX_N: usize = 60;
const GROVER_MAX_N: usize = 1 << 24;
const FIT_TOLERANCE: f64 = 0.999;

pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Json(e))
    }
}

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub struct SuiteOutput {
    pub pass: bool,
    pub report: Value,
    pub table: Option<Table>,
    pub text: String,
}

impl SuiteOutput {
    fn new<T: Serialize>(pass: bool, report: &T) -> Result<Self, CliError> {
        Ok(SuiteOutput {
            pass,
            report: serde_json::to_value(report)?,
            table: None,
            text: String::new(),
        })
    }

    fn with_table(mut self, headers: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table {
            headers: headers.into_iter().map(String::from).collect(),
            rows,
        });
        self
    }

    fn with_text(mut self, text: String) -> Self {
        self.text = text;
        self
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn cap(name: &str, n: usize, max: usize) -> Result<(), CliError> {
    if n > max {
        return Err(usage(format!("--{name} {n} exceeds the limit {max}")));
    }
    Ok(())
}

/// `4/1` → `4`
fn ratio(r: &perminv_core::ExactRatio) -> String {
    let s = r.to_string();
    s.strip_suffix("/1").map(str::to_string).unwrap_or(s)
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

pub fn run(cmd: &Command, seed: u64) -> Result<SuiteOutput, CliError> {
    match cmd {
        Command::Young { table } => young(table),
        Command::Spectrum(a) => run_spectrum(a.n),
        Command::Avgbound(a) => avgbound(a, seed),
        Command::DecompCheck(a) => decomp(a),
        Command::LemmaCheck(a) => lemma(a, seed),
        Command::Game(a) => game(a, seed),
        Command::Altgame(a) => altgame(a, seed),
        Command::Grover(a) => grover(a),
        Command::Hellman(a) => hellman(a, seed),
    }
}

fn young(table: &YoungCommand) -> Result<SuiteOutput, CliError> {
    match table {
        YoungCommand::Dims(NArgs { n }) => {
            cap("n", *n, YOUNG_MAX_N)?;
            let rows: Vec<Value> = partitions(*n)
                .iter()
                .map(|l| json!({"lambda": l, "dim": l.dim(), "level": l.level()}))
                .collect();
            let table = partitions(*n).iter().map(|l| vec![l.to_string(), l.dim().to_string(), l.level().to_string()]).collect();
            let text = partitions(*n).iter().map(|l| format!("{l:<24} {}\n", l.dim())).collect();
            Ok(SuiteOutput::new(true, &json!({"n": n, "shapes": rows}))?
                .with_table(vec!["lambda", "dim", "level"], table)
                .with_text(text))
        }
        YoungCommand::Branching(NArgs { n }) => {
            cap("n", *n, YOUNG_MAX_N)?;
            if *n == 0 {
                return Err(usage("branching needs n >= 1"));
            }
            let rows: Vec<_> = partitions(*n).iter().map(branching_row).collect();
            let mut text = String::new();
            let table = rows
                .iter()
                .map(|r| {
                    let parts: Vec<String> = r.removable.iter().map(|(m, d)| format!("{m} ({d})")).collect();
                    text.push_str(&format!("{} ({}) = {} {}\n", r.lambda, r.dim, parts.join(" + "), if r.holds { "ok" } else { "MISMATCH" }));
                    vec![
                        r.lambda.to_string(),
                        r.dim.to_string(),
                        r.removable.iter().map(|(m, _)| m.to_string()).collect::<Vec<_>>().join(" "),
                        r.sum.to_string(),
                        r.holds.to_string(),
                    ]
                })
                .collect();
            let pass = rows.iter().all(|r| r.holds);
            Ok(SuiteOutput::new(pass, &json!({"n": n, "rows": rows}))?
                .with_table(vec!["lambda", "dim", "removable", "sum", "holds"], table)
                .with_text(text))
        }
        YoungCommand::Characters(NArgs { n }) => {
            cap("n", *n, CHARACTER_MAX_N)?;
            let ct = CharacterTable::new(*n);
            let num = |v: String| -> Value { v.parse::<i64>().map(Value::from).unwrap_or(Value::String(v)) };
            let rows: Vec<Value> = ct
                .shapes
                .iter()
                .zip(&ct.values)
                .map(|(l, vals)| json!({"lambda": l, "values": vals.iter().map(|v| num(v.to_string())).collect::<Vec<_>>()}))
                .collect();
            let mut table = Vec::new();
            let mut text = format!("classes: {}\n", ct.shapes.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
            for (l, vals) in ct.shapes.iter().zip(&ct.values) {
                let mut row = vec![l.to_string()];
                row.extend(vals.iter().map(|v| v.to_string()));
                text.push_str(&format!("{l}: {}\n", row[1..].join(" ")));
                table.push(row);
            }
            let mut out = SuiteOutput::new(true, &json!({"n": n, "classes": ct.shapes, "rows": rows}))?.with_text(text);
            let mut headers = vec!["lambda".to_string()];
            headers.extend(ct.shapes.iter().map(|c| c.to_string()));
            out.table = Some(Table { headers, rows: table });
            Ok(out)
        }
        YoungCommand::Eigenvalues(NArgs { n }) => {
            cap("n", *n, YOUNG_MAX_N)?;
            let mut rows = Vec::new();
            let mut table = Vec::new();
            let mut text = String::new();
            for l in partitions(*n) {
                let e = eigenvalue_m(&l, *n)?;
                let d = l.dim();
                text.push_str(&format!("{l:<24} {}\n", ratio(&e)));
                table.push(vec![l.to_string(), ratio(&e), fmt_f(e.to_f64()), d.to_string(), l.level().to_string()]);
                rows.push(json!({"lambda": l, "e": ratio(&e), "e_float": e.to_f64(), "dim": d, "level": l.level()}));
            }
            Ok(SuiteOutput::new(true, &json!({"n": n, "rows": rows}))?
                .with_table(vec!["lambda", "e", "e_float", "dim", "level"], table)
                .with_text(text))
        }
        YoungCommand::Identities(a) => {
            cap("max-n", a.max_n, IDENTITY_MAX_N)?;
            cap("orth-max-n", a.orth_max_n, CHARACTER_MAX_N)?;
            let r = identity_sweep(a.max_n, a.orth_max_n);
            let text = format!(
                "branching {} burnside {} ratio {} eigen-bound {} orthogonality {}: {} failures\n",
                r.branching_checked,
                r.burnside_checked,
                r.ratio_checked,
                r.eigen_bound_checked,
                r.orthogonality_checked,
                r.failures.len()
            );
            Ok(SuiteOutput::new(r.pass, &r)?.with_text(text))
        }
    }
}

fn rep(n: usize) -> Result<RegularRep, CliError> {
    Ok(RegularRep::new(n)?)
}

fn run_spectrum(n: usize) -> Result<SuiteOutput, CliError> {
    let r = spectrum(&rep(n)?)?;
    let mut text = format!("N={n} trace={} sweeps={} off-block={:e} ({})\n", r.trace, r.jacobi_sweeps, r.off_block_residual, r.residual_method);
    let table = r
        .clusters
        .iter()
        .map(|c| {
            text.push_str(&format!(
                "  {:>10.6} x{:<5} predicted {} x{} {}\n",
                if c.value.abs() < 5e-7 { 0.0 } else { c.value },
                c.multiplicity,
                c.predicted_value.as_ref().map(ratio).unwrap_or_else(|| "-".into()),
                c.predicted_multiplicity,
                if c.pass { "ok" } else { "FAIL" }
            ));
            vec![
                fmt_f(c.value),
                c.multiplicity.to_string(),
                c.predicted_value.as_ref().map(ratio).unwrap_or_default(),
                c.predicted_multiplicity.to_string(),
                c.lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
                c.pass.to_string(),
            ]
        })
        .collect();
    Ok(SuiteOutput::new(r.pass, &r)?
        .with_table(vec!["value", "multiplicity", "predicted_value", "predicted_multiplicity", "lambdas", "pass"], table)
        .with_text(text))
}

fn avgbound(a: &AvgboundArgs, seed: u64) -> Result<SuiteOutput, CliError> {
    let rep = rep(a.n)?;
    let ks: Vec<usize> = match a.k {
        Some(k) if k > a.n => return Err(usage(format!("--k {k} exceeds n = {}", a.n))),
        Some(k) => vec![k],
        None => (0..=a.n.min(3)).collect(),
    };
    let m = rep.build_m()?;
    let reports = ks.iter().map(|&k| avg_bound_check(&rep, &m, k, a.samples, seed)).collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mut text = String::new();
    let table = reports
        .iter()
        .map(|r| {
            text.push_str(&format!(
                "k={} bound {} predicted {} observed {:.9} sample max {:.9} {}\n",
                r.k,
                ratio(&r.bound),
                ratio(&r.predicted_max),
                r.observed_max,
                r.sample_max,
                if r.pass { "ok" } else { "FAIL" }
            ));
            vec![
                r.n.to_string(),
                r.k.to_string(),
                ratio(&r.bound),
                ratio(&r.predicted_max),
                fmt_f(r.observed_max),
                fmt_f(r.sample_max),
                fmt_f(r.min_slack),
                r.pass.to_string(),
            ]
        })
        .collect();
    Ok(SuiteOutput::new(pass, &json!({"n": a.n, "levels": reports}))?
        .with_table(vec!["n", "k", "bound", "predicted_max", "observed_max", "sample_max", "min_slack", "pass"], table)
        .with_text(text))
}

fn decomp(a: &DecompArgs) -> Result<SuiteOutput, CliError> {
    let rep = rep(a.n)?;
    let mut opts = DecompositionOptions::for_n(a.n);
    if let Some(e) = a.exact {
        opts.exact = e;
        opts.chain = e;
        opts.levels = e;
    }
    if let Some(r) = a.refined {
        opts.refined = r;
    }
    let r = decomposition_check(&rep, opts)?;
    let mut text = String::new();
    let mut table = Vec::new();
    for d in &r.a_dims {
        text.push_str(&format!("dim A_{} = {} (predicted {}) exact {:?}\n", d.k, d.float_dim, d.predicted, d.exact_rank));
        table.push(vec![format!("A_{}", d.k), d.predicted.to_string(), d.float_dim.to_string(), opt(d.exact_rank), d.pass.to_string()]);
    }
    for h in &r.high_low {
        text.push_str(&format!(
            "y={} high {} low {} (predicted {} / {})\n",
            h.y, h.high_float, h.low_float, h.high_predicted, h.low_predicted
        ));
        table.push(vec![format!("high[y={}]", h.y), h.high_predicted.to_string(), h.high_float.to_string(), opt(h.high_exact), h.pass.to_string()]);
        table.push(vec![format!("low[y={}]", h.y), h.low_predicted.to_string(), h.low_float.to_string(), opt(h.low_exact), h.pass.to_string()]);
    }
    for f in &r.failures {
        text.push_str(&format!("FAIL {f}\n"));
    }
    Ok(SuiteOutput::new(r.pass, &r)?
        .with_table(vec!["space", "predicted", "float", "exact", "pass"], table)
        .with_text(text))
}

fn opt(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn lemma(a: &LemmaArgs, seed: u64) -> Result<SuiteOutput, CliError> {
    let rep = rep(a.n)?;
    let cfg = LemmaSuiteConfig {
        n: a.n,
        w: a.w,
        programs: a.programs,
        max_p: a.max_p,
        max_t: a.max_t,
        max_queries: a.max_queries,
        seed,
    };
    let r = lemma_suite(&rep, &cfg)?;
    let mut text = format!(
        "N={} programs={} subspace checks={} (max residual {:e}) inequalities={} vacuous={} min slack {:?}\n",
        a.n, a.programs, r.lemma1_checked, r.lemma1_max_residual, r.inequalities_checked, r.inequalities_vacuous, r.min_slack
    );
    let table = r
        .programs
        .iter()
        .map(|p| {
            text.push_str(&format!("  seed {} P={} T={} success {:.6} {}\n", p.seed, p.p, p.t, p.mean_success, if p.pass { "ok" } else { "FAIL" }));
            vec![
                p.seed.to_string(),
                p.p.to_string(),
                p.t.to_string(),
                fmt_f(p.postselect_prob),
                fmt_f(p.mean_success),
                fmt_f(p.lemma1_max_residual),
                p.inequalities_checked.to_string(),
                p.inequalities_vacuous.to_string(),
                p.min_slack.map(fmt_f).unwrap_or_default(),
                p.pass.to_string(),
            ]
        })
        .collect();
    Ok(SuiteOutput::new(r.pass, &r)?
        .with_table(
            vec!["seed", "p", "t", "postselect_prob", "mean_success", "lemma1_residual", "checked", "vacuous", "min_slack", "pass"],
            table,
        )
        .with_text(text))
}

fn game(a: &GameArgs, seed: u64) -> Result<SuiteOutput, CliError> {
    let prog = match a.program {
        ProgramKind::Empty => empty_program(a.n),
        ProgramKind::Store => query_and_store_program(a.n),
        ProgramKind::Grover => grover_program(a.n, a.iterations),
        ProgramKind::Random => random_program(a.n, a.w, a.p, a.t, seed),
    };
    let layout = prog.layout()?;
    let rep = if a.check { Some(rep(a.n)?) } else { None };
    let tr = run_bit_fixing(&prog, &layout, rep.as_ref())?;
    let mc = match a.shots {
        Some(shots) => Some(
            (0..a.n)
                .map(|y| monte_carlo_check(&prog, &layout, y, shots, seed.wrapping_add(y as u64)))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let pass = tr.pass && mc.as_ref().is_none_or(|v| v.iter().all(|r| r.pass));
    let mut text = format!("{} N={} P={} T={} P[b=0]={:.9}\n", tr.program, tr.n, tr.p, tr.t, tr.postselect_prob);
    let table = tr
        .per_challenge
        .iter()
        .map(|c| {
            text.push_str(&format!("  y={} p_succ={:.12}\n", c.y, c.p_succ));
            vec![c.y.to_string(), fmt_f(c.p_succ)]
        })
        .collect();
    text.push_str(&format!("mean {:.12}\n", tr.mean_success));
    let mut report = serde_json::to_value(&tr)?;
    if let (Some(mc), Value::Object(map)) = (&mc, &mut report) {
        map.insert("monte_carlo".into(), serde_json::to_value(mc)?);
    }
    Ok(SuiteOutput {
        pass,
        report,
        table: None,
        text,
    }
    .with_table(vec!["y", "p_succ"], table))
}

fn altgame(a: &AltgameArgs, seed: u64) -> Result<SuiteOutput, CliError> {
    if a.adversaries == 0 {
        return Err(usage("--adversaries must be positive"));
    }
    let mut reports = Vec::with_capacity(a.adversaries);
    for i in 0..a.adversaries {
        let s = seed.wrapping_add(i as u64);
        let adv: Box<dyn Adversary> = match a.adversary {
            AdversaryKind::Query => Box::new(QueryAdversary::random(a.n, a.advice_dim, a.workspace, a.t, false, s)?),
            AdversaryKind::Uniform => Box::new(QueryAdversary::random(a.n, 1, a.workspace, a.t, true, s)?),
            AdversaryKind::Swap => Box::new(SwapAdversary::new(a.n, s)?),
        };
        reports.push(alternating_game(adv.as_ref(), a.g)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let mut text = String::new();
    let mut table = Vec::new();
    for r in &reports {
        text.push_str(&format!("{} plain {:.9}\n", r.adversary, r.plain_success));
        for row in &r.rows {
            text.push_str(&format!(
                "  g={} simulated {:.12} formula {:.12} jensen {:.12}\n",
                row.g, row.simulated, row.formula, row.jensen_lower
            ));
            table.push(vec![
                r.adversary.clone(),
                row.g.to_string(),
                fmt_f(row.simulated),
                fmt_f(row.formula),
                fmt_f(row.abs_diff),
                fmt_f(row.jensen_lower),
                fmt_f(row.conditional),
            ]);
        }
    }
    Ok(SuiteOutput::new(pass, &json!({"n": a.n, "adversaries": reports}))?
        .with_table(vec!["adversary", "g", "simulated", "formula", "abs_diff", "jensen_lower", "conditional"], table)
        .with_text(text))
}

fn grover(a: &GroverArgs) -> Result<SuiteOutput, CliError> {
    cap("n", a.n, GROVER_MAX_N)?;
    let points = a.t.iter().map(|&t| grover_invert(a.n, t, a.n.saturating_sub(1))).collect::<Result<Vec<_>, _>>()?;
    let mut pass = points.iter().all(|p| (p.simulated - p.closed_form).abs() <= 1e-9);
    let fit = if a.fit {
        let f = grover_fit(a.n, a.t.iter().copied().filter(|&t| t >= 1))?;
        pass &= f.r2_fixed >= FIT_TOLERANCE;
        Some(f)
    } else {
        None
    };
    let mut text = String::new();
    let table = points
        .iter()
        .map(|p| {
            text.push_str(&format!("T={:<4} simulated {:.12} closed form {:.12} small-angle {:.6}\n", p.t, p.simulated, p.closed_form, p.small_angle));
            vec![a.n.to_string(), p.t.to_string(), fmt_f(p.simulated), fmt_f(p.closed_form), fmt_f(p.small_angle)]
        })
        .collect();
    if let Some(f) = &fit {
        text.push_str(&format!("R² fixed model {:.6}, affine {:.6}\n", f.r2_fixed, f.r2_affine));
    }
    Ok(SuiteOutput::new(pass, &json!({"n": a.n, "points": points, "fit": fit, "fit_threshold": FIT_TOLERANCE}))?
        .with_table(vec!["n", "t", "simulated", "closed_form", "small_angle"], table)
        .with_text(text))
}

fn hellman(a: &HellmanArgs, seed: u64) -> Result<SuiteOutput, CliError> {
    let n = match (a.log_n, a.n) {
        (Some(l), None) if l <= 20 => 1usize << l,
        (Some(l), None) => return Err(usage(format!("--log-n {l} exceeds 20"))),
        (None, Some(n)) => n,
        _ => return Err(usage("give exactly one of --log-n and --n")),
    };
    let rows = tradeoff_sweep(n, &a.t, a.trials, seed)?;
    let verdict = verify_sweep(&rows);
    let mut text = format!("N={n} trials={} seed={seed}\n", a.trials);
    let table = rows
        .iter()
        .map(|r| {
            text.push_str(&format!(
                "  t={:<6} S={:<7} T_max={:<6} T_avg={:<10.3} success={} S*T_max={}\n",
                r.t, r.s_entries, r.t_max, r.t_avg, r.success, r.st_product
            ));
            vec![
                r.n.to_string(),
                r.t.to_string(),
                r.s_entries.to_string(),
                r.s_bits.to_string(),
                r.t_max.to_string(),
                fmt_f(r.t_avg),
                fmt_f(r.success),
                r.st_product.to_string(),
            ]
        })
        .collect();
    if let Some(s) = verdict.slope {
        text.push_str(&format!("log-log slope {s:.4}\n"));
    }
    Ok(SuiteOutput::new(verdict.pass, &json!({"rows": rows, "verdict": verdict}))?
        .with_table(vec!["n", "t", "s_entries", "s_bits", "t_max", "t_avg", "success", "st_product"], table)
        .with_text(text))
}
