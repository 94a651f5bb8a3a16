use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::layout::{Register, RegisterLayout};
use crate::linalg::{haar_unitary, CMatrix};
use crate::{Error, Result};

const UNITARITY_TOLERANCE: f64 = 1e-9;

/// A unitary on a subset of the algorithm registers.
#[derive(Clone, Debug)]
pub struct LocalUnitary {
    pub registers: Vec<Register>,
    pub matrix: CMatrix,
    pub label: String,
}

impl LocalUnitary {
    pub fn new(registers: Vec<Register>, matrix: CMatrix, label: impl Into<String>) -> Self {
        LocalUnitary {
            registers,
            matrix,
            label: label.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Step {
    Query,
    Unitary(LocalUnitary),
}

/// An offline phase with `p` queries, then one online sequence (with `t` queries) per challenge.
#[derive(Clone, Debug)]
pub struct AlgorithmProgram {
    pub name: String,
    pub n: usize,
    pub w: usize,
    pub p: usize,
    pub t: usize,
    pub offline: Vec<Step>,
    pub online: Vec<Vec<Step>>,
}

fn count_queries(steps: &[Step]) -> usize {
    steps.iter().filter(|s| matches!(s, Step::Query)).count()
}

impl AlgorithmProgram {
    pub fn layout(&self) -> Result<RegisterLayout> {
        RegisterLayout::new(self.n, self.w)
    }

    pub fn validate(&self, layout: &RegisterLayout) -> Result<()> {
        let bad = |reason: String| Error::InvalidProgram {
            program: self.name.clone(),
            reason,
        };
        if layout.n() != self.n || layout.w() != self.w {
            return Err(bad(format!(
                "layout (n={}, w={}) does not match program (n={}, w={})",
                layout.n(),
                layout.w(),
                self.n,
                self.w
            )));
        }
        if count_queries(&self.offline) != self.p {
            return Err(bad(format!("offline phase makes {} queries, declared P={}", count_queries(&self.offline), self.p)));
        }
        if self.online.len() != self.n {
            return Err(bad(format!("expected {} online sequences, found {}", self.n, self.online.len())));
        }
        for (y, steps) in self.online.iter().enumerate() {
            if count_queries(steps) != self.t {
                return Err(bad(format!("online phase for y={y} makes {} queries, declared T={}", count_queries(steps), self.t)));
            }
        }
        let phases = std::iter::once((None, &self.offline)).chain(self.online.iter().enumerate().map(|(y, s)| (Some(y), s)));
        for (y, steps) in phases {
            for step in steps {
                let Step::Unitary(u) = step else { continue };
                let mut seen = Vec::new();
                for r in &u.registers {
                    if seen.contains(r) {
                        return Err(bad(format!("unitary '{}' lists register {r:?} twice", u.label)));
                    }
                    seen.push(*r);
                }
                if y.is_some() && u.registers.contains(&Register::B) {
                    return Err(bad(format!("online unitary '{}' acts on the postselection bit", u.label)));
                }
                let d: usize = u.registers.iter().map(|&r| layout.register_dim(r)).product();
                if u.matrix.rows() != d || u.matrix.cols() != d {
                    return Err(bad(format!("unitary '{}' is {}x{}, registers need {d}", u.label, u.matrix.rows(), u.matrix.cols())));
                }
                let defect = u.matrix.unitarity_defect();
                if defect > UNITARITY_TOLERANCE {
                    return Err(bad(format!("unitary '{}' has unitarity defect {defect:e}", u.label)));
                }
            }
        }
        Ok(())
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Discrete Fourier transform on `Z_n`.
pub fn dft(n: usize) -> CMatrix {
    let s = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |i, j| Complex64::from_polar(s, 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64))
}

/// `2|s⟩⟨s| - I` with `|s⟩` uniform.
pub fn diffusion(n: usize) -> CMatrix {
    let v = 2.0 / n as f64;
    CMatrix::from_fn(n, n, |i, j| Complex64::new(if i == j { v - 1.0 } else { v }, 0.0))
}

/// `I - 2|v⟩⟨v|`
pub fn phase_flip(n: usize, v: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else if i == v {
            -one()
        } else {
            one()
        }
    })
}

/// Swap of two registers of equal dimension `d`.
pub fn swap(d: usize) -> CMatrix {
    let perm: Vec<usize> = (0..d * d).map(|i| (i % d) * d + i / d).collect();
    CMatrix::permutation(&perm)
}

/// No queries; answers `x = 0`.
pub fn empty_program(n: usize) -> AlgorithmProgram {
    AlgorithmProgram {
        name: "empty".into(),
        n,
        w: 1,
        p: 0,
        t: 0,
        offline: Vec::new(),
        online: vec![Vec::new(); n],
    }
}

/// Queries `x = 0` offline, moves the answer into the workspace and ignores it.
pub fn query_and_store_program(n: usize) -> AlgorithmProgram {
    AlgorithmProgram {
        name: "query-and-store".into(),
        n,
        w: n,
        p: 1,
        t: 0,
        offline: vec![
            Step::Query,
            Step::Unitary(LocalUnitary::new(vec![Register::Y, Register::W], swap(n), "swap(Y,W)")),
        ],
        online: vec![Vec::new(); n],
    }
}

/// Grover search for the preimage of the challenge on the `X` register.
///
/// The oracle only adds `π(x)`, so a phase query is compute (1 query), flip on `Y = y`,
/// uncompute (`N - 1` further queries). Each iteration therefore costs `N` queries.
pub fn grover_program(n: usize, iterations: usize) -> AlgorithmProgram {
    let online = (0..n)
        .map(|y| {
            let mut steps = vec![Step::Unitary(LocalUnitary::new(vec![Register::X], dft(n), "dft(X)"))];
            for _ in 0..iterations {
                steps.push(Step::Query);
                steps.push(Step::Unitary(LocalUnitary::new(vec![Register::Y], phase_flip(n, y), format!("flip(Y={y})"))));
                steps.extend(std::iter::repeat_n(Step::Query, n - 1));
                steps.push(Step::Unitary(LocalUnitary::new(vec![Register::X], diffusion(n), "diffusion(X)")));
            }
            steps
        })
        .collect();
    AlgorithmProgram {
        name: format!("grover-{iterations}"),
        n,
        w: 1,
        p: 0,
        t: iterations * n,
        offline: Vec::new(),
        online,
    }
}

/// Haar-random unitaries between queries; offline steps act on all of `XYWB`, online steps
/// on `XYW` and depend on the challenge.
pub fn random_program(n: usize, w: usize, p: usize, t: usize, seed: u64) -> AlgorithmProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = vec![Register::X, Register::Y, Register::W, Register::B];
    let online_regs = vec![Register::X, Register::Y, Register::W];
    let a_dim = n * n * w * 2;
    let mut offline = vec![Step::Unitary(LocalUnitary::new(all.clone(), haar_unitary(a_dim, &mut rng), "haar0"))];
    for i in 1..=p {
        offline.push(Step::Query);
        offline.push(Step::Unitary(LocalUnitary::new(all.clone(), haar_unitary(a_dim, &mut rng), format!("haar{i}"))));
    }
    let online = (0..n)
        .map(|y| {
            let mut steps = vec![Step::Unitary(LocalUnitary::new(
                online_regs.clone(),
                haar_unitary(a_dim / 2, &mut rng),
                format!("haar0[y={y}]"),
            ))];
            for i in 1..=t {
                steps.push(Step::Query);
                steps.push(Step::Unitary(LocalUnitary::new(
                    online_regs.clone(),
                    haar_unitary(a_dim / 2, &mut rng),
                    format!("haar{i}[y={y}]"),
                )));
            }
            steps
        })
        .collect();
    AlgorithmProgram {
        name: format!("random(p={p},t={t},w={w},seed={seed})"),
        n,
        w,
        p,
        t,
        offline,
        online,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates_are_unitary() {
        for n in 2..6 {
            assert!(dft(n).unitarity_defect() < 1e-12);
            assert!(diffusion(n).unitarity_defect() < 1e-12);
            assert!(phase_flip(n, 1).unitarity_defect() < 1e-12);
            assert!(swap(n).unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn named_programs_validate() {
        for prog in [empty_program(3), query_and_store_program(3), grover_program(3, 1), random_program(3, 1, 1, 2, 7)] {
            let layout = prog.layout().unwrap();
            prog.validate(&layout).unwrap();
        }
    }

    #[test]
    fn online_b_access_rejected() {
        let mut prog = empty_program(3);
        prog.online[1].push(Step::Unitary(LocalUnitary::new(vec![Register::B], CMatrix::identity(2), "touch-b")));
        let layout = prog.layout().unwrap();
        assert!(matches!(prog.validate(&layout), Err(Error::InvalidProgram { .. })));
    }

    #[test]
    fn declared_counts_checked() {
        let mut prog = grover_program(3, 1);
        prog.t = 2;
        let layout = prog.layout().unwrap();
        assert!(prog.validate(&layout).is_err());
        let mut prog = random_program(3, 1, 1, 0, 1);
        prog.offline.push(Step::Unitary(LocalUnitary::new(vec![Register::X], CMatrix::identity(2), "wrong-dim")));
        assert!(prog.validate(&layout).is_err());
    }
}
