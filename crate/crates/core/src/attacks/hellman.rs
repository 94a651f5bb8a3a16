use std::collections::HashMap;

use crate::regrep::Permutation;
use crate::{Error, Result};

/// Forward-evaluation oracle that counts queries.
#[derive(Clone, Debug)]
pub struct OracleCounter<'a> {
    pi: &'a Permutation,
    queries: u64,
}

impl<'a> OracleCounter<'a> {
    pub fn new(pi: &'a Permutation) -> Self {
        OracleCounter { pi, queries: 0 }
    }

    pub fn eval(&mut self, x: usize) -> usize {
        self.queries += 1;
        self.pi.apply(x)
    }

    /// Uncounted evaluation, for verifying answers.
    pub fn check(&self, x: usize) -> usize {
        self.pi.apply(x)
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn reset(&mut self) {
        self.queries = 0;
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }
}

/// Checkpoints on every cycle longer than `t`, each mapped to the point `t` steps before it.
#[derive(Clone, Debug)]
pub struct HellmanTable {
    n: usize,
    t: usize,
    entries: HashMap<usize, usize>,
    cycles: usize,
}

impl HellmanTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Advice size `S` in entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles
    }

    /// `S · 2⌈log₂ N⌉`
    pub fn bits(&self) -> u64 {
        self.len() as u64 * 2 * ceil_log2(self.n) as u64
    }

    pub fn get(&self, checkpoint: usize) -> Option<usize> {
        self.entries.get(&checkpoint).copied()
    }

    /// Cap on the online query count; exceeding it means the table does not belong to the oracle.
    pub fn query_cap(&self) -> u64 {
        2 * self.t as u64 + 2
    }
}

pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

pub fn build_table(pi: &Permutation, t: usize) -> Result<HellmanTable> {
    if t == 0 {
        return Err(Error::Parameter("spacing t must be at least 1".into()));
    }
    let cycles = pi.cycles();
    let mut entries = HashMap::new();
    for cycle in &cycles {
        let len = cycle.len();
        if len <= t {
            continue;
        }
        for pos in (0..len).step_by(t) {
            entries.insert(cycle[pos], cycle[(pos + len - t) % len]);
        }
    }
    Ok(HellmanTable {
        n: pi.n(),
        t,
        entries,
        cycles: cycles.len(),
    })
}

/// Finds `x` with `π(x) = y` by walking forward from `y` until the walk closes or meets a
/// checkpoint, then walking forward from the stored predecessor.
pub fn invert(table: &HellmanTable, oracle: &mut OracleCounter<'_>, y: usize) -> Result<usize> {
    if table.n != oracle.n() {
        return Err(Error::SizeMismatch {
            expected: table.n,
            found: oracle.n(),
        });
    }
    if y >= table.n {
        return Err(Error::Parameter(format!("challenge {y} out of range for N={}", table.n)));
    }
    let cap = table.query_cap();
    let start = oracle.queries();
    let exceeded = |oracle: &OracleCounter<'_>| oracle.queries() - start > cap;
    let mut z = y;
    loop {
        if let Some(back) = table.get(z) {
            z = back;
            break;
        }
        let next = oracle.eval(z);
        if next == y {
            return Ok(z);
        }
        if exceeded(oracle) {
            return Err(Error::WalkExceeded { y: y as u32, cap });
        }
        z = next;
    }
    loop {
        let next = oracle.eval(z);
        if next == y {
            return Ok(z);
        }
        if exceeded(oracle) {
            return Err(Error::WalkExceeded { y: y as u32, cap });
        }
        z = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn invert_all(pi: &Permutation, t: usize) -> u64 {
        let table = build_table(pi, t).unwrap();
        let mut worst = 0;
        for y in 0..pi.n() {
            let mut o = OracleCounter::new(pi);
            let x = invert(&table, &mut o, y).unwrap();
            assert_eq!(o.check(x), y);
            assert!(o.queries() <= table.query_cap());
            worst = worst.max(o.queries());
        }
        worst
    }

    #[test]
    fn identity_needs_no_advice() {
        let pi = Permutation::identity(50);
        let table = build_table(&pi, 4).unwrap();
        assert!(table.is_empty());
        assert_eq!(table.cycle_count(), 50);
        let mut o = OracleCounter::new(&pi);
        assert_eq!(invert(&table, &mut o, 17).unwrap(), 17);
        assert_eq!(o.queries(), 1);
    }

    #[test]
    fn single_cycle() {
        for n in [16usize, 100, 1000] {
            let pi = Permutation::cyclic_shift(n);
            let t = (n as f64).sqrt().round() as usize;
            let table = build_table(&pi, t).unwrap();
            assert_eq!(table.len(), n.div_ceil(t));
            assert!(invert_all(&pi, t) <= 2 * t as u64);
        }
    }

    #[test]
    fn table_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pi = Permutation::random(2000, &mut rng);
        let t = 13;
        let table = build_table(&pi, t).unwrap();
        for (&c, &back) in &table.entries {
            let mut z = back;
            for _ in 0..t {
                z = pi.apply(z);
            }
            assert_eq!(z, c);
        }
        assert!(invert_all(&pi, t) <= table.query_cap());
    }

    #[test]
    fn spacing_larger_than_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pi = Permutation::random(64, &mut rng);
        let table = build_table(&pi, 64).unwrap();
        assert!(table.is_empty());
        assert!(invert_all(&pi, 64) <= 64);
    }

    #[test]
    fn mismatched_table_hits_cap() {
        let pi = Permutation::cyclic_shift(100);
        let other = Permutation::identity(100);
        let table = build_table(&other, 3).unwrap();
        let mut o = OracleCounter::new(&pi);
        assert!(matches!(invert(&table, &mut o, 5), Err(Error::WalkExceeded { y: 5, cap: 8 })));
    }

    #[test]
    fn rejects_zero_spacing() {
        assert!(build_table(&Permutation::identity(3), 0).is_err());
    }

    #[test]
    fn log2() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(4096), 12);
        assert_eq!(ceil_log2(4097), 13);
    }
}
