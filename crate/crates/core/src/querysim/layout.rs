use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::Serialize;

use crate::linalg::{CMatrix, Matrix, OrthoBasis};
use crate::regrep::{check_capacity, Permutation, SymmetricGroup};
use crate::{Error, Result};

/// Default ceiling on the number of complex amplitudes in a joint state (128 MiB).
pub const DEFAULT_BUDGET: usize = 1 << 23;

/// Algorithm-side registers; the oracle register `O` is implicit and never acted on locally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Register {
    X,
    Y,
    W,
    B,
}

/// `O ⊗ X ⊗ Y ⊗ W ⊗ B` with `O` most significant:
/// `index = ((((o·N + x)·N + y)·w + wi)·2 + b)`.
#[derive(Clone, Debug)]
pub struct RegisterLayout {
    n: usize,
    w: usize,
    group: SymmetricGroup,
}

impl RegisterLayout {
    pub fn new(n: usize, w: usize) -> Result<Self> {
        Self::with_budget(n, w, DEFAULT_BUDGET)
    }

    pub fn with_budget(n: usize, w: usize, budget: usize) -> Result<Self> {
        check_capacity(n)?;
        if w == 0 {
            return Err(Error::Parameter("workspace dimension w must be at least 1".into()));
        }
        let order: usize = (1..=n).product();
        let dim = order
            .checked_mul(n * n * w * 2)
            .ok_or(Error::Budget { dim: usize::MAX, budget })?;
        if dim > budget {
            return Err(Error::Budget { dim, budget });
        }
        Ok(RegisterLayout {
            n,
            w,
            group: SymmetricGroup::new(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    pub fn oracle_dim(&self) -> usize {
        self.group.order()
    }

    /// Dimension of `A = XYWB`.
    pub fn a_dim(&self) -> usize {
        self.n * self.n * self.w * 2
    }

    pub fn dim(&self) -> usize {
        self.oracle_dim() * self.a_dim()
    }

    pub fn register_dim(&self, r: Register) -> usize {
        match r {
            Register::X | Register::Y => self.n,
            Register::W => self.w,
            Register::B => 2,
        }
    }

    /// Stride of a register inside an `A` index.
    pub fn stride(&self, r: Register) -> usize {
        match r {
            Register::X => self.n * self.w * 2,
            Register::Y => self.w * 2,
            Register::W => 2,
            Register::B => 1,
        }
    }

    pub fn a_index(&self, x: usize, y: usize, wi: usize, b: usize) -> usize {
        ((x * self.n + y) * self.w + wi) * 2 + b
    }

    pub fn digit(&self, a: usize, r: Register) -> usize {
        (a / self.stride(r)) % self.register_dim(r)
    }
}

/// Dense complex amplitude vector over a [`RegisterLayout`].
#[derive(Clone, Debug)]
pub struct JointState {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl JointState {
    /// `|v_∅⟩_O ⊗ |0⟩_A`
    pub fn init(layout: &RegisterLayout) -> Self {
        let order = layout.oracle_dim();
        let a_dim = layout.a_dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        let amp = Complex64::new(1.0 / (order as f64).sqrt(), 0.0);
        for o in 0..order {
            amps[o * a_dim] = amp;
        }
        JointState {
            layout: layout.clone(),
            amps,
        }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `z ← z + π(x) mod N` on every `|π⟩|x⟩|z⟩` component.
    pub fn apply_oracle(&mut self) {
        let n = self.layout.n;
        let a_dim = self.layout.a_dim();
        let block = self.layout.w * 2;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (o, p) in self.layout.group.elements().iter().enumerate() {
            for x in 0..n {
                let shift = p.apply(x);
                for z in 0..n {
                    let src = o * a_dim + (x * n + z) * block;
                    let dst = o * a_dim + (x * n + (z + shift) % n) * block;
                    out[dst..dst + block].copy_from_slice(&self.amps[src..src + block]);
                }
            }
        }
        self.amps = out;
    }

    /// Applies `matrix` to the listed registers (first listed is most significant).
    pub fn apply_local(&mut self, registers: &[Register], matrix: &CMatrix) {
        let layout = &self.layout;
        let a_dim = layout.a_dim();
        let d: usize = registers.iter().map(|&r| layout.register_dim(r)).product();
        assert_eq!(matrix.rows(), d, "unitary dimension does not match registers");
        // Offsets inside A for each target sub-index, and the bases where all targets are 0.
        let offsets: Vec<usize> = (0..d)
            .map(|mut t| {
                let mut off = 0;
                for &r in registers.iter().rev() {
                    let rd = layout.register_dim(r);
                    off += (t % rd) * layout.stride(r);
                    t /= rd;
                }
                off
            })
            .collect();
        let bases: Vec<usize> = (0..a_dim)
            .filter(|&a| registers.iter().all(|&r| layout.digit(a, r) == 0))
            .collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); d];
        for o in 0..layout.oracle_dim() {
            let block = &mut self.amps[o * a_dim..(o + 1) * a_dim];
            for &base in &bases {
                for (t, &off) in offsets.iter().enumerate() {
                    buf[t] = block[base + off];
                }
                for (i, &off) in offsets.iter().enumerate() {
                    block[base + off] = matrix.row(i).iter().zip(&buf).map(|(m, v)| m * v).sum();
                }
            }
        }
    }

    /// Probability of `b = 0`.
    pub fn b_zero_mass(&self) -> f64 {
        self.amps.iter().step_by(2).map(|z| z.norm_sqr()).sum()
    }

    /// Projects `B` onto `|0⟩` and renormalizes; returns the outcome probability.
    pub fn postselect_b_zero(&mut self, program: &str) -> Result<f64> {
        let mass = self.b_zero_mass();
        if mass <= 1e-12 {
            return Err(Error::ZeroPostselection {
                program: program.to_string(),
                mass,
            });
        }
        let scale = 1.0 / mass.sqrt();
        for (i, z) in self.amps.iter_mut().enumerate() {
            if i % 2 == 1 {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= scale;
            }
        }
        Ok(mass)
    }

    /// `‖P_y ψ‖²` with `P_y = Σ_x Ξ_x^y ⊗ |x⟩⟨x|`.
    pub fn success_probability(&self, y: usize) -> f64 {
        let n = self.layout.n;
        let a_dim = self.layout.a_dim();
        let x_block = a_dim / n;
        let mut total = 0.0;
        for (o, p) in self.layout.group.elements().iter().enumerate() {
            let x = p.inverse().apply(y);
            let start = o * a_dim + x * x_block;
            total += self.amps[start..start + x_block].iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        total
    }

    /// Oracle-side matrix `[Re ψ | Im ψ]` of shape `N! × 2·dim(A)`.
    pub fn oracle_matrix(&self) -> Matrix {
        let a_dim = self.layout.a_dim();
        Matrix::from_fn(self.layout.oracle_dim(), 2 * a_dim, |o, c| {
            let z = self.amps[o * a_dim + c % a_dim];
            if c < a_dim {
                z.re
            } else {
                z.im
            }
        })
    }

    /// `‖(Π ⊗ I_A) ψ‖` for the projector onto an orthonormal basis of the oracle space.
    pub fn projected_norm(&self, basis: &OrthoBasis) -> f64 {
        if basis.is_empty() {
            return 0.0;
        }
        let psi = self.oracle_matrix();
        let b = Matrix::from_rows(basis.vectors());
        let c = b.matmul(&psi);
        c.frobenius()
    }

    /// `‖((I - Π) ⊗ I_A) ψ‖`, computed from the explicit residual rather than `1 - ‖Πψ‖²`.
    pub fn complement_norm(&self, basis: &OrthoBasis) -> f64 {
        let psi = self.oracle_matrix();
        if basis.is_empty() {
            return psi.frobenius();
        }
        let b = Matrix::from_rows(basis.vectors());
        let c = b.matmul(&psi);
        let back = b.transpose().matmul(&c);
        psi.sub(&back).frobenius()
    }

    /// Samples terminal measurements of `O` and `X`; counts outcomes with `π(x) = y`.
    pub fn sample_success<R: Rng + ?Sized>(&self, y: usize, shots: usize, rng: &mut R) -> Result<usize> {
        let weights: Vec<f64> = self.amps.iter().map(|z| z.norm_sqr()).collect();
        let dist = WeightedIndex::new(&weights).map_err(|e| Error::Parameter(format!("state cannot be sampled: {e}")))?;
        let a_dim = self.layout.a_dim();
        let elements: &[Permutation] = self.layout.group.elements();
        let mut hits = 0;
        for _ in 0..shots {
            let i = dist.sample(rng);
            let o = i / a_dim;
            let x = self.layout.digit(i % a_dim, Register::X);
            if elements[o].apply(x) == y {
                hits += 1;
            }
        }
        Ok(hits)
    }
}
