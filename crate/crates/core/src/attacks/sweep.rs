use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::hellman::{build_table, ceil_log2, invert, OracleCounter};
use crate::regrep::Permutation;
use crate::{Error, Result};

pub const MAX_SWEEP_N: usize = 1 << 20;
/// Above this size a seeded sample of challenges is inverted instead of all of them.
pub const FULL_SWEEP_N: usize = 1 << 16;
pub const SAMPLED_CHALLENGES: usize = 10_000;

/// One row of the tradeoff table: a spacing `t` aggregated over all trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackStats {
    pub n: usize,
    pub t: usize,
    /// Largest table over the trials, in entries.
    pub s_entries: usize,
    pub s_bits: u64,
    pub t_max: u64,
    pub t_avg: f64,
    pub success: f64,
    pub st_product: u64,
}

struct Run {
    t: usize,
    s: usize,
    t_max: u64,
    total_queries: u64,
    inversions: u64,
    hits: u64,
}

/// Permutation `trial` of a sweep; identical across spacings.
pub fn sweep_permutation(n: usize, seed: u64, trial: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    Permutation::random(n, &mut rng)
}

fn challenges(n: usize, seed: u64, trial: u64) -> Vec<usize> {
    if n <= FULL_SWEEP_N {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(trial);
    let mut ys = sample(&mut rng, n, SAMPLED_CHALLENGES).into_vec();
    ys.sort_unstable();
    ys
}

fn run_one(n: usize, t: usize, seed: u64, trial: u64) -> Result<Run> {
    let pi = sweep_permutation(n, seed, trial);
    let table = build_table(&pi, t)?;
    let mut run = Run {
        t,
        s: table.len(),
        t_max: 0,
        total_queries: 0,
        inversions: 0,
        hits: 0,
    };
    let mut oracle = OracleCounter::new(&pi);
    for y in challenges(n, seed, trial) {
        oracle.reset();
        let x = invert(&table, &mut oracle, y)?;
        run.inversions += 1;
        if oracle.check(x) == y {
            run.hits += 1;
        }
        run.t_max = run.t_max.max(oracle.queries());
        run.total_queries += oracle.queries();
    }
    Ok(run)
}

/// Builds tables for `trials` seeded permutations per spacing and inverts every challenge
/// (a seeded sample for large `n`). Rows come back in the order of `t_values`.
pub fn tradeoff_sweep(n: usize, t_values: &[usize], trials: usize, seed: u64) -> Result<Vec<AttackStats>> {
    if !(2..=MAX_SWEEP_N).contains(&n) {
        return Err(Error::Parameter(format!("sweep size must be in 2..={MAX_SWEEP_N}, got {n}")));
    }
    if trials == 0 || t_values.is_empty() {
        return Err(Error::Parameter("need at least one trial and one spacing".into()));
    }
    if let Some(&bad) = t_values.iter().find(|&&t| t == 0) {
        return Err(Error::Parameter(format!("spacing must be positive, got {bad}")));
    }
    let jobs: Vec<(usize, u64)> = t_values.iter().flat_map(|&t| (0..trials as u64).map(move |k| (t, k))).collect();
    let runs: Vec<Run> = jobs.par_iter().map(|&(t, k)| run_one(n, t, seed, k)).collect::<Result<_>>()?;
    let bits_per_entry = 2 * ceil_log2(n) as u64;
    Ok(t_values
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let group = &runs[i * trials..(i + 1) * trials];
            debug_assert!(group.iter().all(|r| r.t == t));
            let s = group.iter().map(|r| r.s).max().unwrap_or(0);
            let t_max = group.iter().map(|r| r.t_max).max().unwrap_or(0);
            let inversions: u64 = group.iter().map(|r| r.inversions).sum();
            let queries: u64 = group.iter().map(|r| r.total_queries).sum();
            let hits: u64 = group.iter().map(|r| r.hits).sum();
            AttackStats {
                n,
                t,
                s_entries: s,
                s_bits: s as u64 * bits_per_entry,
                t_max,
                t_avg: queries as f64 / inversions as f64,
                success: hits as f64 / inversions as f64,
                st_product: s as u64 * t_max,
            }
        })
        .collect())
}

/// Checks the sweep against `T_max ≤ 2t+2`, full success, `N/8 ≤ S·T_max ≤ 8N` and a log-log
/// slope of `-1 ± 0.15` for spacings in `[√N, N/4]`.
#[derive(Clone, Debug, Serialize)]
pub struct SweepVerdict {
    pub in_range: Vec<usize>,
    pub success_ok: bool,
    pub query_cap_ok: bool,
    pub product_ok: bool,
    pub slope: Option<f64>,
    pub slope_ok: bool,
    pub pass: bool,
}

pub fn verify_sweep(rows: &[AttackStats]) -> SweepVerdict {
    let in_range_rows: Vec<&AttackStats> = rows
        .iter()
        .filter(|r| {
            let n = r.n as f64;
            r.t as f64 >= n.sqrt() && r.t * 4 <= r.n
        })
        .collect();
    let success_ok = rows.iter().all(|r| r.success == 1.0);
    let query_cap_ok = rows.iter().all(|r| r.t_max <= 2 * r.t as u64 + 2);
    let product_ok = in_range_rows.iter().all(|r| {
        let n = r.n as u64;
        8 * r.st_product >= n && r.st_product <= 8 * n
    });
    let points: Vec<(f64, f64)> = in_range_rows
        .iter()
        .filter(|r| r.s_entries > 0 && r.t_max > 0)
        .map(|r| ((r.s_entries as f64).ln(), (r.t_max as f64).ln()))
        .collect();
    let slope = (points.len() >= 2).then(|| {
        let m = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
        let my = points.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    let slope_ok = slope.is_none_or(|s| (s + 1.0).abs() <= 0.15);
    SweepVerdict {
        in_range: in_range_rows.iter().map(|r| r.t).collect(),
        success_ok,
        query_cap_ok,
        product_ok,
        slope,
        slope_ok,
        pass: success_ok && query_cap_ok && product_ok && slope_ok,
    }
}

/// `n,t,s_entries,s_bits,t_max,t_avg,success,st_product`
pub fn write_csv<W: Write>(rows: &[AttackStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let rows = tradeoff_sweep(1 << 12, &[16, 64, 256], 2, 7).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows {
            assert_eq!(r.success, 1.0);
            assert!(r.t_max <= 2 * r.t as u64 + 2);
        }
        let v = verify_sweep(&rows);
        assert!(v.pass, "{v:?}");
        assert_eq!(v.in_range, vec![64, 256]);
    }

    #[test]
    fn deterministic_across_runs() {
        let a = tradeoff_sweep(1000, &[10, 40], 3, 1).unwrap();
        let b = tradeoff_sweep(1000, &[10, 40], 3, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn advice_free_regime() {
        let rows = tradeoff_sweep(256, &[256, 1000], 2, 3).unwrap();
        for r in &rows {
            assert_eq!(r.s_entries, 0);
            assert!(r.t_max <= 256);
        }
    }

    #[test]
    fn csv_header() {
        let rows = tradeoff_sweep(64, &[8], 1, 0).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,t,s_entries,s_bits,t_max,t_avg,success,st_product\n"));
    }

    #[test]
    fn sampled_challenges_are_distinct() {
        let ys = challenges(FULL_SWEEP_N * 2, 5, 0);
        assert_eq!(ys.len(), SAMPLED_CHALLENGES);
        assert!(ys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(tradeoff_sweep(1, &[1], 1, 0).is_err());
        assert!(tradeoff_sweep(100, &[0], 1, 0).is_err());
        assert!(tradeoff_sweep(100, &[], 1, 0).is_err());
        assert!(tradeoff_sweep(MAX_SWEEP_N + 1, &[1], 1, 0).is_err());
    }
}
