use super::permutation::Permutation;
use crate::{Error, Result};

/// Default largest `N` materialized (720-dimensional group algebra).
pub const DEFAULT_MAX_N: usize = 6;
/// Absolute ceiling, reachable only through `PERMINV_MAX_N`.
pub const HARD_MAX_N: usize = 7;
pub const MAX_N_ENV: &str = "PERMINV_MAX_N";

/// Current cap: `PERMINV_MAX_N` if set (clamped to `HARD_MAX_N`), else `DEFAULT_MAX_N`.
pub fn capacity_cap() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.clamp(1, HARD_MAX_N))
        .unwrap_or(DEFAULT_MAX_N)
}

pub fn check_capacity(n: usize) -> Result<()> {
    let cap = capacity_cap();
    if n == 0 || n > cap {
        return Err(Error::Capacity { n, cap });
    }
    Ok(())
}

/// `S_N` in lexicographic order; element `i` has lex rank `i`.
#[derive(Clone, Debug)]
pub struct SymmetricGroup {
    n: usize,
    elements: Vec<Permutation>,
}

impl SymmetricGroup {
    /// Respects the capacity cap.
    pub fn new(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(Self::enumerate(n))
    }

    fn enumerate(n: usize) -> Self {
        let mut elements = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            elements.push(Permutation::from_vec_unchecked(current.clone()));
            if !next_permutation(&mut current) {
                break;
            }
        }
        SymmetricGroup { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &Permutation {
        &self.elements[index]
    }

    pub fn index_of(&self, p: &Permutation) -> usize {
        debug_assert_eq!(p.n(), self.n);
        p.lex_rank()
    }

    /// `σ` with `V^{π_R}_{π_D} |π_i⟩ = |π_{σ(i)}⟩`.
    pub fn action_map(&self, pi_d: &Permutation, pi_r: &Permutation) -> Vec<usize> {
        let d_inv = pi_d.inverse();
        self.elements
            .iter()
            .map(|p| pi_r.compose(p).compose(&d_inv).lex_rank())
            .collect()
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_in_lex_order() {
        let g = SymmetricGroup::new(3).unwrap();
        let names: Vec<String> = g.elements().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["012", "021", "102", "120", "201", "210"]);
        for (i, p) in g.elements().iter().enumerate() {
            assert_eq!(g.index_of(p), i);
        }
    }

    #[test]
    fn orders() {
        assert_eq!(SymmetricGroup::new(1).unwrap().order(), 1);
        assert_eq!(SymmetricGroup::new(5).unwrap().order(), 120);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(SymmetricGroup::new(0), Err(Error::Capacity { .. })));
        assert!(matches!(SymmetricGroup::new(8), Err(Error::Capacity { .. })));
    }

    #[test]
    fn identity_action_is_trivial() {
        let g = SymmetricGroup::new(4).unwrap();
        let id = Permutation::identity(4);
        let map = g.action_map(&id, &id);
        assert!(map.iter().enumerate().all(|(i, &j)| i == j));
    }
}
