use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, Result};

/// Amplitudes over the lexicographically enumerated `S_N`.
#[derive(Clone, Debug, PartialEq)]
pub enum Amplitudes {
    Exact(Vec<BigRational>),
    Real(Vec<f64>),
}

/// A vector of the group algebra, tagged with its arithmetic flavor.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraVector {
    n: usize,
    amplitudes: Amplitudes,
}

impl GroupAlgebraVector {
    pub fn real(n: usize, values: Vec<f64>) -> Self {
        GroupAlgebraVector {
            n,
            amplitudes: Amplitudes::Real(values),
        }
    }

    pub fn exact(n: usize, values: Vec<BigRational>) -> Self {
        GroupAlgebraVector {
            n,
            amplitudes: Amplitudes::Exact(values),
        }
    }

    /// Basis vector `|π_index⟩` in the real flavor.
    pub fn basis(n: usize, order: usize, index: usize) -> Self {
        let mut v = vec![0.0; order];
        v[index] = 1.0;
        Self::real(n, v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match &self.amplitudes {
            Amplitudes::Exact(v) => v.len(),
            Amplitudes::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amplitudes
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.amplitudes, Amplitudes::Exact(_))
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.amplitudes {
            Amplitudes::Real(v) => Some(v),
            Amplitudes::Exact(_) => None,
        }
    }

    pub fn as_exact(&self) -> Option<&[BigRational]> {
        match &self.amplitudes {
            Amplitudes::Exact(v) => Some(v),
            Amplitudes::Real(_) => None,
        }
    }

    /// Explicit (lossy) conversion; exact vectors never degrade implicitly.
    pub fn to_real(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        match &self.amplitudes {
            Amplitudes::Real(v) => v.clone(),
            Amplitudes::Exact(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }

    pub fn norm_sq_exact(&self) -> Option<BigRational> {
        self.as_exact()
            .map(|v| v.iter().fold(BigRational::zero(), |acc, x| acc + x * x))
    }

    pub fn norm(&self) -> f64 {
        let v = self.to_real();
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Moves amplitude `i` to position `map[i]`.
    pub fn permuted(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found: map.len(),
            });
        }
        let amplitudes = match &self.amplitudes {
            Amplitudes::Real(v) => {
                let mut out = vec![0.0; v.len()];
                for (i, &j) in map.iter().enumerate() {
                    out[j] = v[i];
                }
                Amplitudes::Real(out)
            }
            Amplitudes::Exact(v) => {
                let mut out = vec![BigRational::zero(); v.len()];
                for (i, &j) in map.iter().enumerate() {
                    out[j] = v[i].clone();
                }
                Amplitudes::Exact(out)
            }
        };
        Ok(GroupAlgebraVector {
            n: self.n,
            amplitudes,
        })
    }

    /// Integer numerators when every exact amplitude is an integer.
    pub fn exact_integers(&self) -> Option<Vec<BigInt>> {
        self.as_exact()?
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }
}
