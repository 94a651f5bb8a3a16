use std::fmt;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::young::Partition;
use crate::{Error, Result};

/// A permutation of `{0, …, n-1}` in one-line notation: `map[x] = π(x)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(map));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(map.clone()).is_ok());
        Permutation { map }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// The single cycle `x ↦ x + 1 mod n`.
    pub fn cyclic_shift(n: usize) -> Self {
        Permutation {
            map: (0..n).map(|x| (x + 1) % n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation { map }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// `(self ∘ other)(x) = self(other(x))`
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different degree");
        Permutation {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_parts_unchecked(lens)
    }

    /// Cycle type with the fixed point `y` removed (a partition of `n - 1`).
    pub fn cycle_type_fixing(&self, y: usize) -> Option<Partition> {
        if self.map[y] != y {
            return None;
        }
        let mut lens: Vec<usize> = self
            .cycles()
            .iter()
            .filter(|c| c[0] != y || c.len() != 1)
            .map(Vec::len)
            .collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition::from_parts_unchecked(lens))
    }

    /// Position in the lexicographic enumeration of `S_n` (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        let mut used = vec![false; n];
        for (i, &v) in self.map.iter().enumerate() {
            let smaller = (0..v).filter(|&u| !used[u]).count();
            rank = rank * (n - i) + smaller;
            used[v] = true;
        }
        rank
    }

    pub fn from_lex_rank(n: usize, mut rank: usize) -> Permutation {
        let mut digits = vec![0; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut remaining: Vec<usize> = (0..n).collect();
        let map = digits.into_iter().map(|d| remaining.remove(d)).collect();
        Permutation { map }
    }

    /// Little-endian `u32` per entry.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for &v in &self.map {
            let v = u32::try_from(v).map_err(|_| Error::Parameter(format!("entry {v} exceeds u32")))?;
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Permutation> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() % 4 != 0 {
            return Err(Error::Parse(format!(
                "permutation file length {} is not a multiple of 4",
                bytes.len()
            )));
        }
        let map = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]) as usize)
            .collect();
        Permutation::new(map)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(map: Vec<usize>) -> Result<Self> {
        Permutation::new(map)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 10 {
            for v in &self.map {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.map)
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn compose_is_right_to_left() {
        let a = Permutation::new(vec![1, 2, 0]).unwrap();
        let b = Permutation::transposition(3, 0, 1);
        // a(b(0)) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn cycle_types() {
        let p = Permutation::new(vec![1, 0, 3, 4, 2, 5]).unwrap();
        assert_eq!(p.cycle_type().parts(), &[3, 2, 1]);
        assert_eq!(p.cycle_type_fixing(5).unwrap().parts(), &[3, 2]);
        assert!(p.cycle_type_fixing(0).is_none());
        assert_eq!(Permutation::identity(0).cycle_type().parts(), &[] as &[usize]);
    }

    #[test]
    fn lex_rank_of_s3() {
        let expected = ["012", "021", "102", "120", "201", "210"];
        for (r, s) in expected.iter().enumerate() {
            let p = Permutation::from_lex_rank(3, r);
            assert_eq!(&p.to_string(), s);
            assert_eq!(p.lex_rank(), r);
        }
    }

    #[test]
    fn binary_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Permutation::random(100, &mut rng);
        let mut buf = Vec::new();
        p.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 400);
        assert_eq!(Permutation::read_binary(&buf[..]).unwrap(), p);
        assert!(Permutation::read_binary(&buf[..3]).is_err());
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(n in 1usize..8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Permutation::random(n, &mut rng);
            prop_assert_eq!(Permutation::from_lex_rank(n, p.lex_rank()), p.clone());
            prop_assert!(p.inverse().inverse() == p);
            prop_assert_eq!(p.cycle_type().size(), n);
        }
    }
}
