use std::fmt;

use serde::Serialize;

use super::permutation::Permutation;
use crate::{Error, Result};

/// Injective partial function on `[n]`, stored as `(input, output)` pairs sorted by input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PartialAssignment {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PartialAssignment {
    pub fn new(n: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut inputs = vec![false; n];
        let mut outputs = vec![false; n];
        for &(x, y) in &pairs {
            if x >= n || y >= n || inputs[x] || outputs[y] {
                return Err(Error::InvalidAssignment { pairs, n });
            }
            inputs[x] = true;
            outputs[y] = true;
        }
        Ok(PartialAssignment { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        PartialAssignment {
            n,
            pairs: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn has_output(&self, y: usize) -> bool {
        self.pairs.iter().any(|&(_, v)| v == y)
    }

    pub fn is_compatible(&self, p: &Permutation) -> bool {
        self.pairs.iter().all(|&(x, y)| p.apply(x) == y)
    }

    /// `π_R ∘ α ∘ π_D⁻¹`
    pub fn conjugate(&self, pi_d: &Permutation, pi_r: &Permutation) -> PartialAssignment {
        let pairs = self
            .pairs
            .iter()
            .map(|&(x, y)| (pi_d.apply(x), pi_r.apply(y)))
            .collect();
        PartialAssignment::new(self.n, pairs).expect("conjugation preserves injectivity")
    }

    /// All `k`-partial assignments on `[n]` in lexicographic order of their pair lists.
    pub fn all(n: usize, k: usize) -> Vec<PartialAssignment> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut pairs = Vec::with_capacity(k);
        let mut used = vec![false; n];
        extend(n, k, 0, &mut pairs, &mut used, &mut out);
        out
    }

    /// The `k`-partial assignments with `y` in the image, in lexicographic order.
    pub fn all_with_output(n: usize, k: usize, y: usize) -> Vec<PartialAssignment> {
        Self::all(n, k).into_iter().filter(|a| a.has_output(y)).collect()
    }
}

fn extend(
    n: usize,
    k: usize,
    next_input: usize,
    pairs: &mut Vec<(usize, usize)>,
    used: &mut [bool],
    out: &mut Vec<PartialAssignment>,
) {
    if pairs.len() == k {
        out.push(PartialAssignment {
            n,
            pairs: pairs.clone(),
        });
        return;
    }
    let remaining = k - pairs.len();
    for x in next_input..=(n - remaining) {
        for y in 0..n {
            if used[y] {
                continue;
            }
            used[y] = true;
            pairs.push((x, y));
            extend(n, k, x + 1, pairs, used, out);
            pairs.pop();
            used[y] = false;
        }
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialAssignment{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn falling(n: usize, k: usize) -> usize {
        (0..k).map(|i| n - i).product()
    }

    #[test]
    fn counts_match_closed_form() {
        for n in 1..=5 {
            for k in 0..=n {
                let all = PartialAssignment::all(n, k);
                assert_eq!(all.len(), binomial(n, k) * falling(n, k), "n={n} k={k}");
                let mut sorted = all.clone();
                sorted.sort();
                assert_eq!(sorted, all, "lexicographic order");
                if k > 0 {
                    let with_y = PartialAssignment::all_with_output(n, k, 0).len();
                    assert_eq!(with_y * n, all.len() * k);
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(PartialAssignment::new(3, vec![(0, 1), (1, 1)]).is_err());
        assert!(PartialAssignment::new(3, vec![(0, 1), (0, 2)]).is_err());
        assert!(PartialAssignment::new(3, vec![(3, 0)]).is_err());
        let a = PartialAssignment::new(3, vec![(2, 0), (0, 1)]).unwrap();
        assert_eq!(a.pairs(), &[(0, 1), (2, 0)]);
        assert_eq!(a.to_string(), "{0->1, 2->0}");
    }

    #[test]
    fn compatibility() {
        let a = PartialAssignment::new(3, vec![(0, 1)]).unwrap();
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let q = Permutation::identity(3);
        assert!(a.is_compatible(&p));
        assert!(!a.is_compatible(&q));
        assert!(PartialAssignment::empty(3).is_compatible(&q));
    }
}
