use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::numbers::{factorial, BigCount};
use crate::{Error, Result};

/// A Young diagram, stored as its weakly decreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row diagram `(n)`; empty for `n = 0`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column diagram `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(Partition::new(parts.clone()).is_ok(), "bad parts {parts:?}");
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of the first row, 0 for the empty diagram.
    pub fn first_row(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.first_row();
        let parts = (1..=cols)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    pub fn contains_box(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && row <= self.len() && self.parts[row - 1] >= col
    }

    /// Hook length of box `(row, col)`, both 1-indexed.
    pub fn hook_length(&self, row: usize, col: usize) -> Result<BigCount> {
        if !self.contains_box(row, col) {
            return Err(Error::BoxOutsideDiagram {
                partition: self.parts.clone(),
                row,
                col,
            });
        }
        let arm = self.parts[row - 1] - col;
        let leg = self.parts.iter().skip(row).take_while(|&&p| p >= col).count();
        Ok(BigCount::from((arm + leg + 1) as u64))
    }

    /// Product of all hook lengths.
    pub fn hook_product(&self) -> BigCount {
        let transposed = self.transpose();
        let mut acc = BigUint::one();
        for (i, &row_len) in self.parts.iter().enumerate() {
            for j in 0..row_len {
                let hook = (row_len - j - 1) + (transposed.parts[j] - i - 1) + 1;
                acc *= hook as u64;
            }
        }
        BigCount::new(acc)
    }

    /// Dimension of the Specht module, `size! / hook_product`.
    pub fn dim(&self) -> BigCount {
        let n_fact = factorial(self.size()).into_inner();
        BigCount::new(n_fact / self.hook_product().into_inner())
    }

    /// All diagrams obtained by deleting one corner box, top row first.
    pub fn removable(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            let next = self.parts.get(i + 1).copied().unwrap_or(0);
            if self.parts[i] > next {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// Number of boxes below the first row.
    pub fn level(&self) -> usize {
        self.size() - self.first_row()
    }

    /// The diagram with its first row deleted (the `θ` with `θ̄ = self`).
    pub fn below_first_row(&self) -> Partition {
        Partition {
            parts: self.parts.iter().skip(1).copied().collect(),
        }
    }

    /// `self` with the last box of the first row removed, if that is still a diagram.
    pub fn first_row_trimmed(&self) -> Option<Partition> {
        let first = self.first_row();
        if first == 0 {
            return None;
        }
        let second = self.parts.get(1).copied().unwrap_or(0);
        if first - 1 < second {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[0] -= 1;
        if parts[0] == 0 {
            parts.remove(0);
        }
        Some(Partition { parts })
    }

    fn with_top_row(&self, top: usize) -> Option<Partition> {
        if top < self.first_row() {
            return None;
        }
        let mut parts = Vec::with_capacity(self.len() + 1);
        if top > 0 {
            parts.push(top);
        }
        parts.extend_from_slice(&self.parts);
        Some(Partition { parts })
    }

    /// `θ̄ = (n - k, θ)` for `θ = self ⊢ k`.
    pub fn bar(&self, n: usize) -> Result<Partition> {
        let k = self.size();
        let invalid = || Error::InvalidBar {
            theta: self.parts.clone(),
            n,
        };
        if k > n {
            return Err(invalid());
        }
        self.with_top_row(n - k).ok_or_else(invalid)
    }

    /// `θ̄_* = (n - k - 1, θ)`, absent when that row would be too short.
    pub fn bar_star(&self, n: usize) -> Option<Partition> {
        let k = self.size();
        if k + 1 > n {
            return None;
        }
        self.with_top_row(n - k - 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `[5,3,2]`, `5,3,2`, `(5,3,2)` or `[]`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        if trimmed.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = trimmed
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("not a partition: {s:?}")))?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of every size `0..=max`, smallest size first.
pub fn partitions_up_to(max: usize) -> Vec<Partition> {
    (0..=max).flat_map(partitions).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Partition counts from the Euler pentagonal recurrence, independent of the enumerator.
    fn partition_count(n: usize) -> u64 {
        let mut table = vec![0i64; n + 1];
        table[0] = 1;
        for m in 1..=n {
            let mut acc = 0i64;
            for k in 1.. {
                let k = k as i64;
                let sign = if k % 2 == 1 { 1 } else { -1 };
                let g1 = (k * (3 * k - 1) / 2) as usize;
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                acc += sign * table[m - g1];
                if g2 <= m {
                    acc += sign * table[m - g2];
                }
            }
            table[m] = acc;
        }
        table[n] as u64
    }

    #[test]
    fn partitions_of_four_in_reverse_lex_order() {
        let got: Vec<_> = partitions(4).iter().map(|q| q.parts().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn partitions_of_zero_is_the_empty_diagram() {
        assert_eq!(partitions(0), vec![Partition::empty()]);
    }

    #[test]
    fn partition_counts_match_pentagonal_recurrence() {
        assert_eq!(partitions(7).len(), 15);
        for n in 0..=25 {
            assert_eq!(partitions(n).len() as u64, partition_count(n), "n = {n}");
        }
    }

    #[test]
    fn rejects_malformed_parts() {
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Partition::new(vec![]).is_ok());
    }

    #[test]
    fn hook_lengths_of_five_three_two() {
        let lam = p(&[5, 3, 2]);
        let rows: Vec<Vec<u64>> = (1..=3)
            .map(|i| {
                (1..=lam.parts()[i - 1])
                    .map(|j| lam.hook_length(i, j).unwrap().to_u64().unwrap())
                    .collect()
            })
            .collect();
        assert_eq!(rows, vec![vec![7, 6, 4, 2, 1], vec![4, 3, 1], vec![2, 1]]);
        assert_eq!(lam.hook_length(1, 1).unwrap(), 7);
        assert_eq!(lam.hook_length(2, 2).unwrap(), 3);
        assert_eq!(p(&[1]).hook_length(1, 1).unwrap(), 1);
        assert!(lam.hook_length(2, 4).is_err());
        assert!(lam.hook_length(0, 1).is_err());
    }

    #[test]
    fn dimensions_from_hook_formula() {
        assert_eq!(p(&[3]).dim(), 1);
        assert_eq!(p(&[2, 1]).dim(), 2);
        assert_eq!(p(&[1, 1, 1]).dim(), 1);
        assert_eq!(Partition::empty().dim(), 1);
        for n in 1..=12 {
            assert_eq!(Partition::row(n).dim(), 1);
        }
        // Hook product 7*6*4*2*1 * 4*3*1 * 2*1 = 8064 and 10!/8064 = 450.
        assert_eq!(p(&[5, 3, 2]).hook_product(), 8064);
        assert_eq!(p(&[5, 3, 2]).dim(), 450);
    }

    #[test]
    fn removable_corners() {
        assert_eq!(
            p(&[6, 3, 1]).removable(),
            vec![p(&[5, 3, 1]), p(&[6, 2, 1]), p(&[6, 3])]
        );
        assert_eq!(p(&[1]).removable(), vec![Partition::empty()]);
        assert_eq!(p(&[2, 2]).removable(), vec![p(&[2, 1])]);
    }

    #[test]
    fn bar_and_bar_star() {
        let theta = p(&[3, 2]);
        assert_eq!(theta.bar(12).unwrap(), p(&[7, 3, 2]));
        assert_eq!(theta.bar_star(12), Some(p(&[6, 3, 2])));
        assert_eq!(Partition::empty().bar(5).unwrap(), p(&[5]));
        assert_eq!(Partition::empty().bar_star(5), Some(p(&[4])));
        assert_eq!(p(&[2]).bar(4).unwrap(), p(&[2, 2]));
        assert_eq!(p(&[2]).bar_star(4), None);
        assert!(p(&[2, 1]).bar(4).is_err());
        assert!(p(&[3]).bar(2).is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(p(&[4, 1]).level(), 1);
        assert_eq!(p(&[7]).level(), 0);
        assert_eq!(p(&[2, 2, 1]).level(), 3);
    }

    #[test]
    fn first_row_trim() {
        assert_eq!(p(&[3, 1]).first_row_trimmed(), Some(p(&[2, 1])));
        assert_eq!(p(&[2, 2]).first_row_trimmed(), None);
        assert_eq!(p(&[1, 1, 1]).first_row_trimmed(), None);
        assert_eq!(p(&[1]).first_row_trimmed(), Some(Partition::empty()));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(p(&[5, 3, 2]).to_string(), "[5,3,2]");
        assert_eq!(Partition::empty().to_string(), "[]");
        assert_eq!("[5,3,2]".parse::<Partition>().unwrap(), p(&[5, 3, 2]));
        assert_eq!("(2,1)".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert!("[1,2]".parse::<Partition>().is_err());
        assert_eq!(serde_json::to_string(&p(&[5, 3, 2])).unwrap(), "[5,3,2]");
    }
}
