use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::operator::ProjectionOperator;
use super::permutation::Permutation;
use super::rep::RegularRep;
use crate::linalg::{cluster_eigenvalues, dot, symmetric_eigen, ExactEchelon, Matrix, OrthoBasis};
use crate::report::stable;
use crate::young::{eigenvalue_m, partitions, ExactRatio, Partition};
use crate::Result;

pub const CLUSTER_TOLERANCE: f64 = 1e-6;
pub const OFF_BLOCK_TOLERANCE: f64 = 1e-8;
pub const BLOCK_TOLERANCE: f64 = 1e-7;
pub const PROJECTOR_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumBlock {
    pub lambda: Partition,
    pub e_predicted: ExactRatio,
    pub e_observed: f64,
    pub mult_predicted: u64,
    pub mult_observed: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub predicted_value: Option<ExactRatio>,
    pub predicted_multiplicity: u64,
    pub lambdas: Vec<Partition>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub blocks: Vec<SpectrumBlock>,
    pub clusters: Vec<SpectrumCluster>,
    /// `max_{λ≠μ} ‖Π_λ M Π_μ‖`, entrywise when `residual_method` is `direct`, otherwise the
    /// Frobenius norm of the compressed block (an upper bound on the entrywise maximum).
    pub off_block_residual: f64,
    /// `max_λ ‖M Π_λ - e_λ Π_λ‖`, same convention.
    pub block_residual: f64,
    pub residual_method: &'static str,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub jacobi_sweeps: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Eigendecomposes `M` and reconciles the spectrum with `eigenvalue_m` and the isotypic blocks.
pub fn spectrum(rep: &RegularRep) -> Result<SpectrumReport> {
    let n = rep.n();
    let order = rep.order();
    let m = rep.build_m()?;
    let eig = symmetric_eigen(&m.matrix, false);
    let observed = cluster_eigenvalues(&eig.values, CLUSTER_TOLERANCE);
    let mut failures = Vec::new();

    let shapes = partitions(n);
    let mut predicted: BTreeMap<ExactRatio, (u64, Vec<Partition>)> = BTreeMap::new();
    let mut total_mult = 0u64;
    for lam in &shapes {
        let d = lam.dim().to_u64().expect("dimension fits u64 at desk scale");
        let entry = predicted.entry(eigenvalue_m(lam, n)?).or_default();
        entry.0 += d * d;
        entry.1.push(lam.clone());
        total_mult += d * d;
    }
    if total_mult != order as u64 {
        failures.push(format!("predicted multiplicities sum to {total_mult}, not {order}"));
    }

    let mut clusters = Vec::new();
    if observed.len() != predicted.len() {
        failures.push(format!(
            "observed {} eigenvalue clusters, predicted {}",
            observed.len(),
            predicted.len()
        ));
    }
    let mut pred_iter = predicted.iter();
    for &(value, mult) in &observed {
        let (pv, pm, lambdas) = match pred_iter.next() {
            Some((v, (m, l))) => (Some(v.clone()), *m, l.clone()),
            None => (None, 0, Vec::new()),
        };
        let pass = pv
            .as_ref()
            .is_some_and(|v| (v.to_f64() - value).abs() <= CLUSTER_TOLERANCE && pm == mult as u64);
        if !pass {
            failures.push(format!(
                "cluster {value:.9} x{mult} does not match prediction {} x{pm}",
                pv.as_ref().map_or("none".to_string(), |v| v.to_string())
            ));
        }
        clusters.push(SpectrumCluster {
            value: stable(value),
            multiplicity: mult,
            predicted_value: pv,
            predicted_multiplicity: pm,
            lambdas,
            pass,
        });
    }

    // Compress M onto the isotypic bases: C = B M Bᵀ.
    let bases: Vec<OrthoBasis> = shapes
        .iter()
        .map(|l| rep.isotypic_basis(l))
        .collect::<Result<_>>()?;
    let mut offsets = Vec::with_capacity(shapes.len() + 1);
    let mut all: Vec<&[f64]> = Vec::with_capacity(order);
    for b in &bases {
        offsets.push(all.len());
        all.extend(b.vectors().iter().map(Vec::as_slice));
    }
    offsets.push(all.len());
    if all.len() != order {
        failures.push(format!("isotypic bases span {} of {order} dimensions", all.len()));
    }
    let mb: Vec<Vec<f64>> = all.iter().map(|b| m.matrix.mul_vec(b)).collect();
    let c = Matrix::from_fn(all.len(), all.len(), |i, j| dot(all[i], &mb[j]));

    let e_pred: Vec<ExactRatio> = shapes.iter().map(|l| eigenvalue_m(l, n)).collect::<Result<_>>()?;
    let mut off_bound: f64 = 0.0;
    let mut block_bound: f64 = 0.0;
    let mut blocks = Vec::new();
    for (li, lam) in shapes.iter().enumerate() {
        let e = e_pred[li].to_f64();
        let (r0, r1) = (offsets[li], offsets[li + 1]);
        let mut col_sq = 0.0;
        for (mi, _) in shapes.iter().enumerate() {
            let (s0, s1) = (offsets[mi], offsets[mi + 1]);
            let mut fro = 0.0;
            for i in s0..s1 {
                for j in r0..r1 {
                    let target = if i == j { e } else { 0.0 };
                    fro += (c.get(i, j) - target).powi(2);
                }
            }
            col_sq += fro;
            if mi != li {
                off_bound = off_bound.max(fro.sqrt());
            }
        }
        block_bound = block_bound.max(col_sq.sqrt());

        let size = r1 - r0;
        let sub = Matrix::from_fn(size, size, |i, j| c.get(r0 + i, r0 + j));
        let sub_eig = symmetric_eigen(&sub, false);
        let e_observed = if size == 0 {
            f64::NAN
        } else {
            sub_eig.values.iter().sum::<f64>() / size as f64
        };
        let mult_observed = sub_eig
            .values
            .iter()
            .filter(|v| (*v - e).abs() <= CLUSTER_TOLERANCE)
            .count();
        let d = lam.dim().to_u64().expect("fits");
        let pass = mult_observed as u64 == d * d && (e_observed - e).abs() <= CLUSTER_TOLERANCE;
        if !pass {
            failures.push(format!(
                "block {lam}: observed {e_observed:.9} x{mult_observed}, predicted {} x{}",
                e_pred[li],
                d * d
            ));
        }
        blocks.push(SpectrumBlock {
            lambda: lam.clone(),
            e_predicted: e_pred[li].clone(),
            e_observed: stable(e_observed),
            mult_predicted: d * d,
            mult_observed,
            pass,
        });
    }

    let (off_block_residual, block_residual, residual_method) = if n <= 5 {
        let projs: Vec<ProjectionOperator> = shapes
            .iter()
            .map(|l| rep.isotypic_projector(l))
            .collect::<Result<_>>()?;
        let mut off: f64 = 0.0;
        let mut blk: f64 = 0.0;
        for (li, pl) in projs.iter().enumerate() {
            let mp = m.matrix.matmul(&pl.matrix);
            blk = blk.max(mp.max_abs_diff(&pl.matrix.scale(e_pred[li].to_f64())));
            let pmp = pl.matrix.matmul(&m.matrix);
            for (mi, pm) in projs.iter().enumerate() {
                if mi != li {
                    off = off.max(pmp.matmul(&pm.matrix).max_abs());
                }
            }
        }
        (off, blk, "direct")
    } else {
        (off_bound, block_bound, "frobenius-bound")
    };
    if off_block_residual > OFF_BLOCK_TOLERANCE {
        failures.push(format!("off-block residual {off_block_residual:e} > {OFF_BLOCK_TOLERANCE:e}"));
    }
    if block_residual > BLOCK_TOLERANCE {
        failures.push(format!("block residual {block_residual:e} > {BLOCK_TOLERANCE:e}"));
    }
    let min_eigenvalue = eig.values.first().copied().unwrap_or(0.0);
    if min_eigenvalue < -1e-9 {
        failures.push(format!("M is not PSD: smallest eigenvalue {min_eigenvalue:e}"));
    }

    Ok(SpectrumReport {
        n,
        blocks,
        clusters,
        off_block_residual,
        block_residual,
        residual_method,
        min_eigenvalue: stable(min_eigenvalue),
        trace: stable(m.trace()),
        jacobi_sweeps: eig.sweeps,
        pass: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AvgBoundReport {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub dim_a_k: usize,
    /// `2k/N`
    pub bound: ExactRatio,
    /// `max_{level(λ) ≤ k} e_λ / N`
    pub predicted_max: ExactRatio,
    /// Largest eigenvalue of `M/N` compressed to `A_k`.
    pub observed_max: f64,
    pub sample_max: f64,
    /// `bound - sample_max`
    pub min_slack: f64,
    /// `‖Π_λ v‖²` for the sample with the largest value.
    pub worst_sample_decomposition: Vec<(Partition, f64)>,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// `E_y ‖Π_y^high v‖² = ⟨v|M|v⟩/N <= 2k/N` for unit `v ∈ A_k`, exactly (via the compressed
/// spectrum) and on seeded random samples.
pub fn avg_bound_check(rep: &RegularRep, m: &ProjectionOperator, k: usize, samples: usize, seed: u64) -> Result<AvgBoundReport> {
    let n = rep.n();
    let nf = n as f64;
    let basis = rep.subspace_a(k)?;
    let r = basis.len();
    let bound = ExactRatio::from_ratio(2 * k as i64, n as i64);
    let mut predicted_max = ExactRatio::zero();
    for lam in partitions(n) {
        if lam.level() <= k {
            let e = &eigenvalue_m(&lam, n)? * &ExactRatio::from_ratio(1, n as i64);
            if e > predicted_max {
                predicted_max = e;
            }
        }
    }

    let mb: Vec<Vec<f64>> = basis.vectors().iter().map(|b| m.matrix.mul_vec(b)).collect();
    let c = Matrix::from_fn(r, r, |i, j| dot(&basis.vectors()[i], &mb[j]) / nf);
    let observed_max = symmetric_eigen(&c, false).values.last().copied().unwrap_or(0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_max = f64::NEG_INFINITY;
    let mut worst = vec![0.0; rep.order()];
    for _ in 0..samples {
        let coeffs: Vec<f64> = (0..r).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mut v = vec![0.0; rep.order()];
        for (cf, b) in coeffs.iter().zip(basis.vectors()) {
            crate::linalg::axpy(*cf, b, &mut v);
        }
        let nv = crate::linalg::norm(&v);
        if nv == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let value = m.matrix.quadratic_form(&v) / nf;
        if value > sample_max {
            sample_max = value;
            worst = v;
        }
    }
    if samples == 0 || r == 0 {
        sample_max = 0.0;
    }

    let mut worst_sample_decomposition = Vec::new();
    for lam in partitions(n) {
        let p = rep.isotypic_projector(&lam)?;
        let w = dot(&worst, &p.apply(&worst));
        worst_sample_decomposition.push((lam, stable(w)));
    }

    let b = bound.to_f64();
    let mut failures = Vec::new();
    if predicted_max > bound {
        failures.push(format!("predicted maximum {predicted_max} exceeds bound {bound}"));
    }
    if observed_max > b + 1e-9 {
        failures.push(format!("exact maximum {observed_max} exceeds bound {bound}"));
    }
    if (observed_max - predicted_max.to_f64()).abs() > CLUSTER_TOLERANCE {
        failures.push(format!("exact maximum {observed_max} differs from predicted {predicted_max}"));
    }
    if sample_max > b + 1e-9 {
        failures.push(format!("sample value {sample_max} exceeds bound {bound}"));
    }
    Ok(AvgBoundReport {
        n,
        k,
        samples,
        seed,
        dim_a_k: r,
        bound,
        predicted_max,
        observed_max: stable(observed_max),
        sample_max: stable(sample_max),
        min_slack: stable(b - sample_max),
        worst_sample_decomposition,
        pass: failures.is_empty(),
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationTrial {
    pub pi_d: Permutation,
    pub pi_r: Permutation,
    pub y: usize,
    /// `‖V Π_y^high V⁻¹ - Π_{π_R(y)}^high‖_max`
    pub conjugation_residual: f64,
    /// `‖MV - VM‖_max`
    pub commutator_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChangeOfChallengeReport {
    pub n: usize,
    pub seed: u64,
    pub trials: Vec<ConjugationTrial>,
    pub max_conjugation_residual: f64,
    pub max_commutator_residual: f64,
    pub pass: bool,
}

/// Residuals of `V Π_y V⁻¹ = Π_{π_R(y)}` and `MV = VM` for one `(π_D, π_R, y)`.
pub fn conjugation_residuals(
    rep: &RegularRep,
    highs: &[ProjectionOperator],
    m: &ProjectionOperator,
    pi_d: &Permutation,
    pi_r: &Permutation,
    y: usize,
) -> (f64, f64) {
    let sigma = rep.group().action_map(pi_d, pi_r);
    let src = &highs[y].matrix;
    let dst = &highs[pi_r.apply(y)].matrix;
    let mut conj: f64 = 0.0;
    let mut comm: f64 = 0.0;
    for (i, &si) in sigma.iter().enumerate() {
        for (j, &sj) in sigma.iter().enumerate() {
            conj = conj.max((src.get(i, j) - dst.get(si, sj)).abs());
            comm = comm.max((m.matrix.get(i, j) - m.matrix.get(si, sj)).abs());
        }
    }
    (conj, comm)
}

pub fn change_of_challenge_check(rep: &RegularRep, trials: usize, seed: u64) -> Result<ChangeOfChallengeReport> {
    let n = rep.n();
    let highs: Vec<ProjectionOperator> = (0..n).map(|y| rep.high_projection(y)).collect::<Result<_>>()?;
    let mut m = highs[0].matrix.clone();
    for h in &highs[1..] {
        m.add_assign(&h.matrix);
    }
    let m = ProjectionOperator::new(n, super::operator::OperatorKind::M, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let pi_d = Permutation::random(n, &mut rng);
        let pi_r = Permutation::random(n, &mut rng);
        let y = rand::Rng::random_range(&mut rng, 0..n);
        let (c, k) = conjugation_residuals(rep, &highs, &m, &pi_d, &pi_r, y);
        out.push(ConjugationTrial {
            pi_d,
            pi_r,
            y,
            conjugation_residual: c,
            commutator_residual: k,
        });
    }
    let max_c = out.iter().map(|t| t.conjugation_residual).fold(0.0, f64::max);
    let max_k = out.iter().map(|t| t.commutator_residual).fold(0.0, f64::max);
    Ok(ChangeOfChallengeReport {
        n,
        seed,
        pass: max_c <= PROJECTOR_TOLERANCE && max_k <= PROJECTOR_TOLERANCE,
        trials: out,
        max_conjugation_residual: max_c,
        max_commutator_residual: max_k,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionRow {
    pub k: usize,
    pub predicted: u64,
    pub float_dim: usize,
    pub exact_rank: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HighLowRow {
    pub y: usize,
    pub high_predicted: u64,
    pub low_predicted: u64,
    pub high_float: usize,
    pub low_float: usize,
    pub high_exact: Option<usize>,
    pub low_exact: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainLink {
    pub y: usize,
    pub link: String,
    /// Largest residual of a basis vector of the smaller space against the larger one.
    pub float_residual: f64,
    pub exact_contained: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub k: usize,
    pub lambda: Partition,
    pub level: usize,
    /// `tr(Π_λ Π_{A_k})`
    pub weight: f64,
    pub expected: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedRow {
    pub y: usize,
    pub pieces: usize,
    /// Worst of idempotence and `rank = d_θ̄ d_ρ̄*` over all `Π_θ̄^{ρ̄_y}`.
    pub piece_residual: f64,
    /// `‖Π_θ̄ Π_θ̄^{ρ̄_y} - Π_θ̄^{ρ̄_y}‖_max`
    pub same_theta_residual: f64,
    /// `‖Π_θ̄' Π_θ̄^{ρ̄_y}‖_max`, `θ' ≠ θ`
    pub cross_theta_residual: f64,
    /// `‖Σ Π_θ̄^{ρ̄_y} - Π_y^high‖_max`
    pub high_residual: f64,
    /// `‖Σ Π_θ̄^{θ̄_y} - Π_y^low‖_max`
    pub low_residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub a_dims: Vec<DimensionRow>,
    pub high_low: Vec<HighLowRow>,
    pub chain: Vec<ChainLink>,
    pub levels: Vec<LevelRow>,
    pub refined: Vec<RefinedRow>,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct DecompositionOptions {
    pub exact: bool,
    pub chain: bool,
    pub levels: bool,
    pub refined: bool,
}

impl DecompositionOptions {
    /// Exact ranks, chain and level checks up to `N = 5`; projector identities up to `N = 4`.
    pub fn for_n(n: usize) -> Self {
        DecompositionOptions {
            exact: n <= 5,
            chain: n <= 5,
            levels: n <= 5,
            refined: n <= 4,
        }
    }
}

fn dim_u64(p: &Partition) -> u64 {
    p.dim().to_u64().expect("fits u64")
}

/// `Σ_{θ ∈ Y_{≤k}} d_θ̄²`
pub fn predicted_dim_a(n: usize, k: usize) -> u64 {
    let mut total = 0;
    for s in 0..=k.min(n) {
        for theta in partitions(s) {
            if let Ok(bar) = theta.bar(n) {
                total += dim_u64(&bar).pow(2);
            }
        }
    }
    total
}

/// `(Σ_θ Σ_{ρ≺θ} d_θ̄ d_ρ̄*, Σ_θ d_θ̄ d_θ̄*)` over `θ` with valid bars.
pub fn predicted_high_low(n: usize) -> (u64, u64) {
    let mut high = 0;
    let mut low = 0;
    for s in 0..=n {
        for theta in partitions(s) {
            let Ok(bar) = theta.bar(n) else { continue };
            let d = dim_u64(&bar);
            for rho in theta.removable() {
                if let Some(rs) = rho.bar_star(n) {
                    high += d * dim_u64(&rs);
                }
            }
            if let Some(ts) = theta.bar_star(n) {
                low += d * dim_u64(&ts);
            }
        }
    }
    (high, low)
}

fn max_residual(small: &OrthoBasis, big: &OrthoBasis) -> f64 {
    small
        .vectors()
        .iter()
        .map(|v| big.residual_norm(v))
        .fold(0.0, f64::max)
}

fn exact_contains(small: &ExactEchelon, big: &ExactEchelon) -> bool {
    small.rows().all(|r| big.contains(r.to_vec()))
}

pub fn decomposition_check(rep: &RegularRep, opts: DecompositionOptions) -> Result<DecompositionReport> {
    let n = rep.n();
    let mut failures = Vec::new();

    let exact_a: Vec<ExactEchelon> = if opts.exact {
        (0..n).map(|k| rep.exact_span_a(k)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut a_dims = Vec::new();
    for k in 0..n {
        let predicted = predicted_dim_a(n, k);
        let float_dim = rep.subspace_a(k)?.len();
        let exact_rank = exact_a.get(k).map(ExactEchelon::rank);
        let pass = float_dim as u64 == predicted && exact_rank.is_none_or(|r| r as u64 == predicted);
        if !pass {
            failures.push(format!(
                "dim A_{k}: predicted {predicted}, float {float_dim}, exact {exact_rank:?}"
            ));
        }
        a_dims.push(DimensionRow {
            k,
            predicted,
            float_dim,
            exact_rank,
            pass,
        });
    }

    let (high_predicted, low_predicted) = predicted_high_low(n);
    let mut high_low = Vec::new();
    let mut chain = Vec::new();
    for y in 0..n {
        let high_float = rep.high_pieces(y)?.iter().map(OrthoBasis::len).sum();
        let low_float = rep.low_pieces(y)?.iter().map(OrthoBasis::len).sum();
        let exact_y: Vec<ExactEchelon> = if opts.exact {
            (0..n).map(|k| rep.exact_span_a_y(k, y)).collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        let (high_exact, low_exact) = if opts.exact {
            let mut high = 0;
            let mut low = 0;
            for i in 0..n {
                low += exact_a[i].rank() - exact_y[i].rank();
                if i >= 1 {
                    high += exact_y[i].joint_rank(&exact_a[i - 1]) - exact_a[i - 1].rank();
                }
            }
            (Some(high), Some(low))
        } else {
            (None, None)
        };
        let pass = high_float as u64 == high_predicted
            && low_float as u64 == low_predicted
            && high_exact.is_none_or(|h| h as u64 == high_predicted)
            && low_exact.is_none_or(|l| l as u64 == low_predicted);
        if !pass {
            failures.push(format!(
                "y = {y}: high {high_float}/{high_exact:?} vs {high_predicted}, low {low_float}/{low_exact:?} vs {low_predicted}"
            ));
        }
        high_low.push(HighLowRow {
            y,
            high_predicted,
            low_predicted,
            high_float,
            low_float,
            high_exact,
            low_exact,
            pass,
        });

        if opts.chain {
            // A_0 ⊆ A_1^y ⊆ A_1 ⊆ A_2^y ⊆ … ⊆ A_{N-1}^y ⊆ A_{N-1}
            for i in 1..n {
                let ay = rep.subspace_a_y(i, y)?;
                let lower = rep.subspace_a(i - 1)?;
                let upper = rep.subspace_a(i)?;
                let links = [
                    (format!("A_{} <= A_{i}^y", i - 1), max_residual(lower, &ay), opts.exact.then(|| exact_contains(&exact_a[i - 1], &exact_y[i]))),
                    (format!("A_{i}^y <= A_{i}"), max_residual(&ay, upper), opts.exact.then(|| exact_contains(&exact_y[i], &exact_a[i]))),
                ];
                for (link, float_residual, exact_contained) in links {
                    let pass = float_residual <= PROJECTOR_TOLERANCE && exact_contained != Some(false);
                    if !pass {
                        failures.push(format!("y = {y}: chain link {link} fails ({float_residual:e})"));
                    }
                    chain.push(ChainLink {
                        y,
                        link,
                        float_residual,
                        exact_contained,
                        pass,
                    });
                }
            }
        }
    }

    let mut levels = Vec::new();
    if opts.levels {
        let shapes = partitions(n);
        let projs: Vec<ProjectionOperator> = shapes.iter().map(|l| rep.isotypic_projector(l)).collect::<Result<_>>()?;
        for k in 0..n {
            let basis = rep.subspace_a(k)?;
            for (lam, p) in shapes.iter().zip(&projs) {
                let weight: f64 = basis.vectors().iter().map(|b| dot(b, &p.apply(b))).sum();
                let expected = if lam.level() <= k { dim_u64(lam).pow(2) } else { 0 };
                let pass = (weight - expected as f64).abs() <= PROJECTOR_TOLERANCE;
                if !pass {
                    failures.push(format!("tr(Π_{lam} Π_A{k}) = {weight}, expected {expected}"));
                }
                levels.push(LevelRow {
                    k,
                    lambda: lam.clone(),
                    level: lam.level(),
                    weight: stable(weight),
                    expected,
                    pass,
                });
            }
        }
    }

    let mut refined = Vec::new();
    if opts.refined {
        for y in 0..n {
            let row = refined_check(rep, y)?;
            if !row.pass {
                failures.push(format!("y = {y}: refined projector identities fail"));
            }
            refined.push(row);
        }
    }

    Ok(DecompositionReport {
        n,
        a_dims,
        high_low,
        chain,
        levels,
        refined,
        pass: failures.is_empty(),
        failures,
    })
}

/// Builds `Π_θ̄^{ρ̄_y} = Π_θ̄ Q_{ρ̄*,y}` and checks the orthogonality relations and that they
/// reassemble the constructive `Π_y^high` and `Π_y^low`.
pub fn refined_check(rep: &RegularRep, y: usize) -> Result<RefinedRow> {
    let n = rep.n();
    let order = rep.order();
    let mut thetas = Vec::new();
    for s in 0..=n {
        for theta in partitions(s) {
            if let Ok(bar) = theta.bar(n) {
                thetas.push((theta, bar));
            }
        }
    }
    let iso: Vec<Matrix> = thetas
        .iter()
        .map(|(_, bar)| rep.isotypic_projector(bar).map(|p| p.matrix))
        .collect::<Result<_>>()?;
    let mut restricted: BTreeMap<Partition, Matrix> = BTreeMap::new();
    let mut restricted_for = |mu: &Partition| -> Result<Matrix> {
        if let Some(m) = restricted.get(mu) {
            return Ok(m.clone());
        }
        let m = rep.restricted_isotypic_projector(mu, y)?.matrix;
        restricted.insert(mu.clone(), m.clone());
        Ok(m)
    };

    let mut high_sum = Matrix::zeros(order, order);
    let mut low_sum = Matrix::zeros(order, order);
    let mut piece_residual: f64 = 0.0;
    let mut same: f64 = 0.0;
    let mut cross: f64 = 0.0;
    let mut pieces = 0;
    for (ti, (theta, bar)) in thetas.iter().enumerate() {
        let mut parts: Vec<(Matrix, u64, bool)> = Vec::new();
        for rho in theta.removable() {
            if let Some(rs) = rho.bar_star(n) {
                let piece = iso[ti].matmul(&restricted_for(&rs)?);
                parts.push((piece, dim_u64(bar) * dim_u64(&rs), true));
            }
        }
        if let Some(ts) = theta.bar_star(n) {
            let piece = iso[ti].matmul(&restricted_for(&ts)?);
            parts.push((piece, dim_u64(bar) * dim_u64(&ts), false));
        }
        for (piece, rank, is_high) in parts {
            pieces += 1;
            piece_residual = piece_residual
                .max(piece.matmul(&piece).max_abs_diff(&piece))
                .max((piece.trace() - rank as f64).abs());
            same = same.max(iso[ti].matmul(&piece).max_abs_diff(&piece));
            for (tj, other) in iso.iter().enumerate() {
                if tj != ti {
                    cross = cross.max(other.matmul(&piece).max_abs());
                }
            }
            if is_high {
                high_sum.add_assign(&piece);
            } else {
                low_sum.add_assign(&piece);
            }
        }
    }
    let high_residual = high_sum.max_abs_diff(&rep.high_projection(y)?.matrix);
    let low_residual = low_sum.max_abs_diff(&rep.low_projection(y)?.matrix);
    let pass = [piece_residual, same, cross, high_residual, low_residual]
        .iter()
        .all(|&r| r <= PROJECTOR_TOLERANCE);
    Ok(RefinedRow {
        y,
        pieces,
        piece_residual,
        same_theta_residual: same,
        cross_theta_residual: cross,
        high_residual,
        low_residual,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicted_counts_at_n4() {
        assert_eq!(predicted_dim_a(4, 0), 1);
        assert_eq!(predicted_dim_a(4, 1), 10);
        assert_eq!(predicted_dim_a(4, 2), 23);
        assert_eq!(predicted_dim_a(4, 3), 24);
        assert_eq!(predicted_high_low(4), (14, 10));
    }

    #[test]
    fn spectrum_n3() {
        let rep = RegularRep::new(3).unwrap();
        let r = spectrum(&rep).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        let vals: Vec<(f64, usize)> = r.clusters.iter().map(|c| (c.value, c.multiplicity)).collect();
        assert_eq!(vals.len(), 3);
        assert!((vals[1].0 - 1.5).abs() < 1e-9 && vals[1].1 == 4);
    }

    #[test]
    fn spectrum_n4_merges_equal_eigenvalues() {
        let rep = RegularRep::new(4).unwrap();
        let r = spectrum(&rep).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        let top = r.clusters.last().unwrap();
        assert_eq!(top.multiplicity, 5);
        assert_eq!(top.lambdas.len(), 2);
        assert!((r.trace - 56.0).abs() < 1e-9);
    }

    #[test]
    fn avg_bound_n4_k1_is_one_third() {
        let rep = RegularRep::new(4).unwrap();
        let m = rep.build_m().unwrap();
        let r = avg_bound_check(&rep, &m, 1, 20, 0).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.predicted_max, ExactRatio::from_ratio(1, 3));
        assert!((r.observed_max - 1.0 / 3.0).abs() < 1e-9);
        let r0 = avg_bound_check(&rep, &m, 0, 3, 0).unwrap();
        assert!(r0.pass && r0.observed_max.abs() < 1e-12);
    }

    #[test]
    fn change_of_challenge_identity_is_exact() {
        let rep = RegularRep::new(3).unwrap();
        let highs: Vec<ProjectionOperator> = (0..3).map(|y| rep.high_projection(y).unwrap()).collect();
        let m = rep.build_m().unwrap();
        let id = Permutation::identity(3);
        assert_eq!(conjugation_residuals(&rep, &highs, &m, &id, &id, 1), (0.0, 0.0));
        let r = change_of_challenge_check(&rep, 10, 1).unwrap();
        assert!(r.pass && r.max_commutator_residual <= 1e-12);
    }

    #[test]
    fn decomposition_n4() {
        let rep = RegularRep::new(4).unwrap();
        let r = decomposition_check(&rep, DecompositionOptions::for_n(4)).unwrap();
        assert!(r.pass, "{:?}", r.failures);
        assert_eq!(r.refined.len(), 4);
    }
}
