use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Fraction-free row echelon form over the integers, grown one vector at a time.
///
/// Rows are kept primitive (content 1) so entries stay small for the 0/1 vectors used here.
#[derive(Clone, Debug, Default)]
pub struct ExactEchelon {
    dim: usize,
    /// Sorted by pivot column.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl ExactEchelon {
    pub fn new(dim: usize) -> Self {
        ExactEchelon {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (pivot, row) in &self.rows {
            let c = *pivot;
            if v[c].is_zero() {
                continue;
            }
            let g = row[c].gcd(&v[c]);
            let a = &row[c] / &g;
            let b = &v[c] / &g;
            for j in c..self.dim {
                if row[j].is_zero() && v[j].is_zero() {
                    continue;
                }
                v[j] = &a * &v[j] - &b * &row[j];
            }
            debug_assert!(v[c].is_zero());
            make_primitive(&mut v);
        }
        v
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim);
        let v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }

    pub fn insert_i64(&mut self, v: &[i64]) -> bool {
        self.insert(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Whether `v` lies in the row span.
    pub fn contains(&self, v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        self.contains(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Rank of the span of `self ∪ other`.
    pub fn joint_rank(&self, other: &ExactEchelon) -> usize {
        let mut merged = self.clone();
        for (_, row) in &other.rows {
            merged.insert(row.clone());
        }
        merged.rank()
    }

    /// `dim(self ∩ other) = rank(self) + rank(other) - rank(self + other)`.
    pub fn intersection_dim(&self, other: &ExactEchelon) -> usize {
        self.rank() + other.rank() - self.joint_rank(other)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    // Normalize the leading sign too, so equal spans give equal rows.
    let lead_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if lead_negative {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}
