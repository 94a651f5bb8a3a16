use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::numbers::{factorial, BigCount};
use super::partition::{partitions, Partition};
use crate::{Error, Result};

/// Murnaghan–Nakayama evaluator with a memo keyed on (shape, remaining cycle lengths).
///
/// Shapes are manipulated through beta-sets: removing a rim hook of length `r` is the
/// same as moving one bead `b -> b - r` onto an empty position, with sign given by the
/// parity of the beads jumped over.
#[derive(Default)]
pub struct CharacterEvaluator {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterEvaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ` on the class of the given cycle type.
    pub fn character(&mut self, lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
        if lambda.size() != cycle_type.size() {
            return Err(Error::SizeMismatch {
                expected: lambda.size(),
                found: cycle_type.size(),
            });
        }
        Ok(self.eval(lambda.parts().to_vec(), cycle_type.parts()))
    }

    fn eval(&mut self, shape: Vec<usize>, cycles: &[usize]) -> BigInt {
        let Some((&r, rest)) = cycles.split_first() else {
            return if shape.is_empty() {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        };
        let key = (shape, cycles.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let shape = &key.0;
        let len = shape.len();
        let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
        let mut total = BigInt::zero();
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let jumped = beta.iter().filter(|&&c| c > target && c < b).count();
            let mut next_beta = beta.clone();
            next_beta[idx] = target;
            next_beta.sort_unstable_by(|a, b| b.cmp(a));
            let next_shape: Vec<usize> = next_beta
                .iter()
                .enumerate()
                .map(|(i, &c)| c - (len - 1 - i))
                .filter(|&p| p > 0)
                .collect();
            let sub = self.eval(next_shape, rest);
            if jumped % 2 == 0 {
                total += sub;
            } else {
                total -= sub;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// `χ_λ(cycle_type)` with a fresh memo.
pub fn character(lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
    CharacterEvaluator::new().character(lambda, cycle_type)
}

/// Size of the conjugacy class with the given cycle type: `n! / z_μ`.
pub fn class_size(cycle_type: &Partition) -> BigCount {
    let n = cycle_type.size();
    let mut z = BigUint::one();
    let parts = cycle_type.parts();
    let mut i = 0;
    while i < parts.len() {
        let len = parts[i];
        let mult = parts[i..].iter().take_while(|&&p| p == len).count();
        for _ in 0..mult {
            z *= len as u64;
        }
        z *= factorial(mult).into_inner();
        i += mult;
    }
    BigCount::new(factorial(n).into_inner() / z)
}

/// Full character table of `S_n`: rows indexed by `partitions(n)` (irreps), columns by
/// `partitions(n)` read as cycle types.
pub struct CharacterTable {
    pub n: usize,
    pub shapes: Vec<Partition>,
    pub values: Vec<Vec<BigInt>>,
}

impl CharacterTable {
    pub fn new(n: usize) -> Self {
        let shapes = partitions(n);
        let mut eval = CharacterEvaluator::new();
        let values = shapes
            .iter()
            .map(|lam| {
                shapes
                    .iter()
                    .map(|c| eval.eval(lam.parts().to_vec(), c.parts()))
                    .collect()
            })
            .collect();
        CharacterTable { n, shapes, values }
    }

    pub fn class_index(&self, cycle_type: &Partition) -> Option<usize> {
        self.shapes.iter().position(|c| c == cycle_type)
    }

    pub fn row(&self, lambda: &Partition) -> Option<&[BigInt]> {
        self.class_index(lambda).map(|i| self.values[i].as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_characters() {
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(-1));
        assert_eq!(character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), BigInt::from(0));
        assert_eq!(character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), BigInt::from(-1));
        for c in partitions(6) {
            assert_eq!(character(&p(&[6]), &c).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn identity_class_gives_dimension() {
        for n in 0..=9 {
            for lam in partitions(n) {
                let chi = character(&lam, &Partition::column(n)).unwrap();
                assert_eq!(chi, lam.dim().to_bigint(), "λ = {lam}");
            }
        }
    }

    #[test]
    fn sign_character_is_the_column() {
        // χ_(1^n)(σ) = sign(σ) = (-1)^(n - #cycles)
        for c in partitions(7) {
            let sign = if (7 - c.len()) % 2 == 0 { 1 } else { -1 };
            assert_eq!(character(&Partition::column(7), &c).unwrap(), BigInt::from(sign));
        }
    }

    #[test]
    fn mismatched_sizes_error() {
        assert!(character(&p(&[2, 1]), &p(&[2])).is_err());
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 0..=10 {
            let total: BigUint = partitions(n).iter().map(|c| class_size(c).into_inner()).sum();
            assert_eq!(total, factorial(n).into_inner());
        }
        assert_eq!(class_size(&p(&[2, 1])), 3);
        assert_eq!(class_size(&p(&[2, 2])), 3);
    }
}
