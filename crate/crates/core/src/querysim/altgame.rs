use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::linalg::{haar_unitary, hermitian_spectral_measure, CMatrix};
use crate::regrep::{Permutation, SymmetricGroup};
use crate::{Error, Result};

const AGREEMENT_TOLERANCE: f64 = 1e-7;
const JENSEN_TOLERANCE: f64 = 1e-9;
/// Per-permutation eigendecompositions get expensive beyond this.
pub const MAX_N: usize = 5;

/// A (possibly non-uniform) inverter seen as the family of unitaries `U_y^π` acting on its
/// own registers, with advice `|σ_π⟩` baked into the initial state.
pub trait Adversary {
    fn name(&self) -> String;
    fn n(&self) -> usize;
    fn dim(&self) -> usize;
    fn queries(&self) -> usize;
    fn initial_state(&self, pi_index: usize, pi: &Permutation) -> Vec<Complex64>;
    fn unitary(&self, pi: &Permutation, y: usize) -> CMatrix;
    /// Basis states whose `X` register holds `x`.
    fn answer_mask(&self, x: usize) -> Vec<bool>;
}

/// Haar-random unitaries interleaved with `T` queries to `|x, z⟩ ↦ |x, z + π(x)⟩`.
/// Registers `S ⊗ X ⊗ Z ⊗ L`: advice, answer, query output, workspace.
pub struct QueryAdversary {
    n: usize,
    s: usize,
    l: usize,
    unitaries: Vec<Vec<CMatrix>>,
    advice: Vec<Vec<Complex64>>,
    label: String,
}

impl QueryAdversary {
    /// `s = 1` (or `uniform`) gives an advice-free inverter.
    pub fn random(n: usize, s: usize, l: usize, t: usize, uniform: bool, seed: u64) -> Result<Self> {
        if n < 2 || s == 0 || l == 0 {
            return Err(Error::Parameter("need n >= 2 and positive register sizes".into()));
        }
        let group = SymmetricGroup::new(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = s * n * n * l;
        let unitaries = (0..n).map(|_| (0..=t).map(|_| haar_unitary(dim, &mut rng)).collect()).collect();
        let advice = (0..group.order())
            .map(|_| {
                let mut v = vec![Complex64::new(0.0, 0.0); s];
                if uniform || s == 1 {
                    v[0] = Complex64::new(1.0, 0.0);
                } else {
                    for z in v.iter_mut() {
                        *z = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                    }
                    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    v.iter_mut().for_each(|z| *z /= nrm);
                }
                v
            })
            .collect();
        let kind = if uniform || s == 1 { "uniform" } else { "advice" };
        Ok(QueryAdversary {
            n,
            s,
            l,
            unitaries,
            advice,
            label: format!("query-{kind}(s={s},l={l},t={t},seed={seed})"),
        })
    }

    fn oracle(&self, pi: &Permutation) -> CMatrix {
        let (n, l) = (self.n, self.l);
        let perm: Vec<usize> = (0..self.dim())
            .map(|i| {
                let li = i % l;
                let z = (i / l) % n;
                let x = (i / (l * n)) % n;
                let sa = i / (l * n * n);
                ((sa * n + x) * n + (z + pi.apply(x)) % n) * l + li
            })
            .collect();
        CMatrix::permutation(&perm)
    }
}

impl Adversary for QueryAdversary {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.s * self.n * self.n * self.l
    }

    fn queries(&self) -> usize {
        self.unitaries[0].len() - 1
    }

    fn initial_state(&self, pi_index: usize, _pi: &Permutation) -> Vec<Complex64> {
        let stride = self.n * self.n * self.l;
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (sa, a) in self.advice[pi_index].iter().enumerate() {
            v[sa * stride] = *a;
        }
        v
    }

    fn unitary(&self, pi: &Permutation, y: usize) -> CMatrix {
        let o = self.oracle(pi);
        let us = &self.unitaries[y];
        let mut u = us[0].clone();
        for next in &us[1..] {
            u = next.matmul(&o.matmul(&u));
        }
        u
    }

    fn answer_mask(&self, x: usize) -> Vec<bool> {
        (0..self.dim()).map(|i| (i / (self.l * self.n)) % self.n == x).collect()
    }
}

/// Query-free adversary whose unitaries depend on `π` directly. Registers `S ⊗ X` with
/// `S` a qubit: on `S = s` it swaps `X` values `s` and `π⁻¹(y)`, so it always wins from
/// `|0⟩|0⟩` and never from `|1⟩|0⟩`. Its `P^π` is a projector.
pub struct SwapAdversary {
    n: usize,
    advice: Vec<Vec<Complex64>>,
    seed: u64,
}

impl SwapAdversary {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("need n >= 2".into()));
        }
        let group = SymmetricGroup::new(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let advice = (0..group.order())
            .map(|_| {
                let theta: f64 = rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::FRAC_PI_2);
                vec![Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0)]
            })
            .collect();
        Ok(SwapAdversary { n, advice, seed })
    }
}

impl Adversary for SwapAdversary {
    fn name(&self) -> String {
        format!("swap(seed={})", self.seed)
    }

    fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        2 * self.n
    }

    fn queries(&self) -> usize {
        0
    }

    fn initial_state(&self, pi_index: usize, _pi: &Permutation) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = self.advice[pi_index][0];
        v[self.n] = self.advice[pi_index][1];
        v
    }

    fn unitary(&self, pi: &Permutation, y: usize) -> CMatrix {
        let target = pi.inverse().apply(y);
        let n = self.n;
        let perm: Vec<usize> = (0..2 * n)
            .map(|i| {
                let (sa, x) = (i / n, i % n);
                let x2 = if x == sa {
                    target
                } else if x == target {
                    sa
                } else {
                    x
                };
                sa * n + x2
            })
            .collect();
        CMatrix::permutation(&perm)
    }

    fn answer_mask(&self, x: usize) -> Vec<bool> {
        (0..self.dim()).map(|i| i % self.n == x).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AltGameRow {
    pub g: usize,
    pub simulated: f64,
    pub formula: f64,
    pub abs_diff: f64,
    /// `(ε^{⊗1})^g`
    pub jensen_lower: f64,
    pub jensen_ok: bool,
    /// `ε^{⊗g} / ε^{⊗(g-1)}`
    pub conditional: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AltGameReport {
    pub n: usize,
    pub adversary: String,
    pub queries: usize,
    pub g_max: usize,
    /// Ordinary inversion probability averaged over `π` and `y`.
    pub plain_success: f64,
    pub rows: Vec<AltGameRow>,
    pub max_abs_diff: f64,
    pub jensen_ok: bool,
    pub monotone_ok: bool,
    pub pass: bool,
}

/// Plays the alternating game: starting from `|+⟩_C ⊗ |σ_π⟩|0⟩`, apply the projective
/// measurements `Π_B = Σ_y |y⟩⟨y| ⊗ P_y^π` and `Π_A = |+⟩⟨+|_C ⊗ I` alternately (first
/// `Π_B`), and record the probability that the first `g` all accept. Compared with the
/// spectral formula `E_π Σ_i |α_i|² p_i^g` over the eigenpairs of `P^π = E_y P_y^π`.
pub fn alternating_game(adv: &dyn Adversary, g_max: usize) -> Result<AltGameReport> {
    if g_max == 0 {
        return Err(Error::Parameter("g_max must be at least 1".into()));
    }
    let n = adv.n();
    if n > MAX_N {
        return Err(Error::Capacity { n, cap: MAX_N });
    }
    let group = SymmetricGroup::new(n)?;
    let d = adv.dim();
    let nf = n as f64;
    let mut sim = vec![0.0; g_max];
    let mut formula = vec![0.0; g_max];
    let mut plain = 0.0;
    for (pi_index, pi) in group.elements().iter().enumerate() {
        let psi0 = adv.initial_state(pi_index, pi);
        let inv = pi.inverse();
        let projectors: Vec<CMatrix> = (0..n)
            .map(|y| {
                let u = adv.unitary(pi, y);
                let mask = adv.answer_mask(inv.apply(y));
                let v = CMatrix::from_fn(d, d, |i, j| {
                    if i == j && mask[i] {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                u.adjoint().matmul(&v.matmul(&u))
            })
            .collect();

        // Direct simulation on C ⊗ A.
        let plus = 1.0 / nf.sqrt();
        let mut blocks: Vec<Vec<Complex64>> = (0..n).map(|_| psi0.iter().map(|z| z * plus).collect()).collect();
        for (g, acc) in sim.iter_mut().enumerate() {
            if g % 2 == 0 {
                for (y, b) in blocks.iter_mut().enumerate() {
                    *b = projectors[y].mul_vec(b);
                }
            } else {
                let mut mean = vec![Complex64::new(0.0, 0.0); d];
                for b in &blocks {
                    for (m, z) in mean.iter_mut().zip(b) {
                        *m += z / nf;
                    }
                }
                blocks = vec![mean; n];
            }
            *acc += blocks.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
        }

        let mut p_avg = CMatrix::zeros(d, d);
        for p in &projectors {
            p_avg = p_avg.add(p);
        }
        let p_avg = p_avg.scale(1.0 / nf);
        for (lam, w) in hermitian_spectral_measure(&p_avg, &psi0) {
            let lam = lam.clamp(0.0, 1.0);
            for (g, acc) in formula.iter_mut().enumerate() {
                *acc += w * lam.powi(g as i32 + 1);
            }
        }
        plain += projectors
            .iter()
            .map(|p| p.mul_vec(&psi0).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            / nf;
    }
    let order = group.order() as f64;
    sim.iter_mut().for_each(|v| *v /= order);
    formula.iter_mut().for_each(|v| *v /= order);
    plain /= order;

    let eps1 = sim[0];
    let mut rows = Vec::with_capacity(g_max);
    let mut prev = 1.0;
    for g in 1..=g_max {
        let (s, f) = (sim[g - 1], formula[g - 1]);
        let jensen_lower = eps1.powi(g as i32);
        rows.push(AltGameRow {
            g,
            simulated: s,
            formula: f,
            abs_diff: (s - f).abs(),
            jensen_lower,
            jensen_ok: s >= jensen_lower - JENSEN_TOLERANCE,
            conditional: if prev > 0.0 { s / prev } else { 0.0 },
        });
        prev = s;
    }
    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let jensen_ok = rows.iter().all(|r| r.jensen_ok);
    let monotone_ok = rows.windows(2).all(|w| w[1].conditional >= w[0].conditional - JENSEN_TOLERANCE);
    let pass = max_abs_diff <= AGREEMENT_TOLERANCE && jensen_ok && monotone_ok && (plain - eps1).abs() <= AGREEMENT_TOLERANCE;
    Ok(AltGameReport {
        n,
        adversary: adv.name(),
        queries: adv.queries(),
        g_max,
        plain_success: plain,
        rows,
        max_abs_diff,
        jensen_ok,
        monotone_ok,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_adversary_is_flat_in_g() {
        let adv = SwapAdversary::new(3, 4).unwrap();
        let r = alternating_game(&adv, 4).unwrap();
        assert!(r.pass, "{r:?}");
        for row in &r.rows {
            assert!((row.simulated - r.rows[0].simulated).abs() < 1e-12);
        }
        assert!(r.rows[0].simulated > 0.0 && r.rows[0].simulated < 1.0);
    }

    #[test]
    fn query_adversaries_match_formula() {
        for (s, uniform) in [(1, true), (2, false)] {
            let adv = QueryAdversary::random(3, s, 1, 1, uniform, 11).unwrap();
            let r = alternating_game(&adv, 4).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.rows[3].simulated <= r.rows[0].simulated);
        }
    }

    #[test]
    fn unitaries_are_unitary() {
        let adv = QueryAdversary::random(3, 2, 1, 2, false, 1).unwrap();
        let pi = Permutation::new(vec![2, 0, 1]).unwrap();
        assert!(adv.unitary(&pi, 1).unitarity_defect() < 1e-10);
        let swap = SwapAdversary::new(4, 0).unwrap();
        assert!(swap.unitary(&pi_4(), 3).unitarity_defect() < 1e-14);
    }

    fn pi_4() -> Permutation {
        Permutation::new(vec![1, 3, 0, 2]).unwrap()
    }

    #[test]
    fn zero_rounds_rejected() {
        let adv = SwapAdversary::new(3, 0).unwrap();
        assert!(alternating_game(&adv, 0).is_err());
    }
}
