//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero if any fail.

use std::process::ExitCode;
use std::time::Instant;

use perminv_core::attacks::{tradeoff_sweep, verify_sweep};
use perminv_core::querysim::{alternating_game, grover_fit, grover_invert, lemma_suite, LemmaSuiteConfig, QueryAdversary};
use perminv_core::regrep::{avg_bound_check, decomposition_check, spectrum, DecompositionOptions};
use perminv_core::young::identity_sweep;
use perminv_core::{RegularRep, Result};

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, id: &str, title: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} [{id}] {title}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
}

fn reps(ns: &[usize]) -> Result<Vec<RegularRep>> {
    ns.iter().map(|&n| RegularRep::new(n)).collect()
}

fn main() -> ExitCode {
    let mut gate = Gate { failed: 0 };

    gate.check("1", "spectrum of M at N=3", || {
        let r = spectrum(&RegularRep::new(3)?)?;
        let want = [(0.0, 1), (1.5, 4), (3.0, 1)];
        let got: Vec<_> = r.clusters.iter().map(|c| (c.value, c.multiplicity)).collect();
        let ok = r.pass
            && got.len() == want.len()
            && got.iter().zip(want).all(|(&(v, m), (wv, wm))| (v - wv).abs() <= 1e-6 && m == wm);
        Ok((ok, format!("clusters {got:?}")))
    });

    let small = match reps(&[3, 4, 5, 6]) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL [setup] regular representations: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rep = |n: usize| &small[n - 3];

    gate.check("2", "spectrum matches e_λ with multiplicity d_λ², N=3..6", || {
        let mut detail = Vec::new();
        let mut ok = true;
        for n in 3..=6 {
            let r = spectrum(rep(n))?;
            ok &= r.pass && r.off_block_residual <= 1e-8 && r.clusters.iter().all(|c| c.pass);
            detail.push(format!("N={n} clusters={} off-block={:.1e}", r.clusters.len(), r.off_block_residual));
        }
        Ok((ok, detail.join("; ")))
    });

    gate.check("3", "average high-subspace bound, N=4..6, k<=3, 100 samples", || {
        let mut ok = true;
        let mut min_slack = f64::INFINITY;
        let mut cases = 0;
        for n in 4..=6 {
            let m = rep(n).build_m()?;
            for k in 0..=3.min(n) {
                let r = avg_bound_check(rep(n), &m, k, 100, 17)?;
                let exact = r.predicted_max.to_f64();
                ok &= r.pass
                    && (r.observed_max - exact).abs() <= 1e-6
                    && exact <= r.bound.to_f64() + 1e-12
                    && r.sample_max <= r.bound.to_f64() + 1e-9;
                min_slack = min_slack.min(r.min_slack);
                cases += 1;
            }
        }
        Ok((ok, format!("{cases} (N,k) cases, min sample slack {min_slack:.3e}")))
    });

    gate.check("4", "dim A_k for N<=6, exact high/low ranks for N<=5", || {
        let mut ok = true;
        let mut rows = 0;
        for n in 3..=6 {
            let opts = DecompositionOptions {
                exact: n <= 5,
                chain: false,
                levels: false,
                refined: false,
            };
            let r = decomposition_check(rep(n), opts)?;
            ok &= r.a_dims.iter().all(|d| d.pass && d.float_dim as u64 == d.predicted);
            if n <= 5 {
                ok &= r.high_low.iter().all(|h| {
                    h.pass && h.high_exact == Some(h.high_predicted as usize) && h.low_exact == Some(h.low_predicted as usize)
                });
            }
            rows += r.a_dims.len() + r.high_low.len();
        }
        Ok((ok, format!("{rows} rows compared")))
    });

    gate.check("5", "exact combinatorial identities, N<=30", || {
        let r = identity_sweep(30, 8);
        Ok((
            r.pass && r.failures.is_empty(),
            format!(
                "branching {} burnside {} ratio {} eigen {} orthogonality {}, failures {}",
                r.branching_checked,
                r.burnside_checked,
                r.ratio_checked,
                r.eigen_bound_checked,
                r.orthogonality_checked,
                r.failures.len()
            ),
        ))
    });

    gate.check("6", "support residual after every query, N=4,5, <=3 queries, 20 programs", || {
        let mut ok = true;
        let mut worst = 0.0f64;
        let mut checked = 0;
        for n in [4, 5] {
            let cfg = LemmaSuiteConfig {
                n,
                w: 1,
                programs: 20,
                max_p: 3,
                max_t: 3,
                max_queries: 3,
                seed: 600,
            };
            let r = lemma_suite(rep(n), &cfg)?;
            ok &= r.lemma1_checked > 0 && r.lemma1_max_residual <= 1e-8;
            worst = worst.max(r.lemma1_max_residual);
            checked += r.lemma1_checked;
        }
        Ok((ok, format!("{checked} checks, max residual {worst:.2e}")))
    });

    gate.check("7", "per-step and final-success inequalities, N=5,6, P<=1, T<=2, 20 programs", || {
        let mut ok = true;
        let mut detail = Vec::new();
        for n in [5, 6] {
            let cfg = LemmaSuiteConfig {
                n,
                w: 1,
                programs: 20,
                max_p: 1,
                max_t: 2,
                max_queries: 3,
                seed: 700,
            };
            let r = lemma_suite(rep(n), &cfg)?;
            let slack_ok = r.min_slack.is_none_or(|s| s >= -1e-9);
            ok &= r.pass && slack_ok;
            detail.push(format!(
                "N={n} checked {} vacuous {} min slack {:?}",
                r.inequalities_checked, r.inequalities_vacuous, r.min_slack
            ));
        }
        Ok((ok, detail.join("; ")))
    });

    gate.check("8", "alternating game vs spectral formula, N=3, T<=1, g<=3, 10 adversaries", || {
        let mut ok = true;
        let mut worst = 0.0f64;
        let mut runs = 0;
        for t in 0..=1 {
            for s in 0..10 {
                let adv = QueryAdversary::random(3, 2, 1, t, false, 800 + s)?;
                let r = alternating_game(&adv, 3)?;
                ok &= r.max_abs_diff <= 1e-7 && r.jensen_ok;
                worst = worst.max(r.max_abs_diff);
                runs += 1;
            }
        }
        Ok((ok, format!("{runs} adversaries, max |sim - formula| {worst:.2e}")))
    });

    gate.check("9a", "Grover success equals sin²((2T+1)·asin(1/√N))", || {
        let mut ok = true;
        let mut worst = 0.0f64;
        for n in [2, 3, 4, 5, 8, 16, 64, 1024] {
            for t in 0..=6 {
                let p = grover_invert(n, t, n - 1)?;
                let err = (p.simulated - p.closed_form).abs();
                worst = worst.max(err);
                ok &= err <= 1e-9;
            }
        }
        let four = grover_invert(4, 1, 3)?.simulated;
        ok &= (four - 1.0).abs() <= 1e-12;
        Ok((ok, format!("max error {worst:.2e}, (4,1) -> {four:.15}")))
    });

    gate.check("9b", "Grover fit R² >= 0.999 against (2T+1)²/N at N=1024, T=1..10", || {
        let f = grover_fit(1024, 1..=10)?;
        Ok((
            f.r2_fixed >= 0.999,
            format!("R² fixed {:.4}, R² affine {:.4}", f.r2_fixed, f.r2_affine),
        ))
    });

    gate.check("10", "Hellman sweep N=2^14, t in {64,128,256,512}, 3 trials", || {
        let rows = tradeoff_sweep(1 << 14, &[64, 128, 256, 512], 3, 1000)?;
        let v = verify_sweep(&rows);
        let products: Vec<_> = rows.iter().map(|r| (r.t, r.st_product)).collect();
        Ok((
            v.success_ok && v.query_cap_ok && v.product_ok && !v.in_range.is_empty(),
            format!("in range {:?}, S·T_max {products:?}", v.in_range),
        ))
    });

    println!("{} criteria failed", gate.failed);
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
