//! Exact Young-diagram combinatorics: dimensions, branching, bar shapes, characters and
//! the closed-form eigenvalues of the averaged high-subspace operator `M`.
//!
//! Everything here is exact (`BigUint`/`BigRational`); no floating point is used.

mod character;
mod numbers;
mod partition;

pub use character::{character, class_size, CharacterEvaluator, CharacterTable};
pub use numbers::{factorial, BigCount, ExactRatio};
pub use partition::{partitions, partitions_up_to, Partition};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::{Error, Result};

/// Eigenvalue of `M` on the isotypic block `H_λ`: `n (1 - d_{λ'_*} / d_λ)`, or `n` when
/// the trimmed diagram `λ'_*` does not exist.
pub fn eigenvalue_m(lambda: &Partition, n: usize) -> Result<ExactRatio> {
    if lambda.size() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: lambda.size(),
        });
    }
    let n_big = BigInt::from(n);
    Ok(match lambda.first_row_trimmed() {
        None => ExactRatio::new(n_big, BigInt::from(1)),
        Some(trimmed) => {
            let d = lambda.dim().to_bigint();
            let d_star = trimmed.dim().to_bigint();
            ExactRatio::new(n_big * (&d - d_star), d)
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioCheck {
    pub theta: Partition,
    pub n: usize,
    /// `d_{θ̄_*} / d_{θ̄}`
    pub ratio: ExactRatio,
    /// `(n - 2k) / n`
    pub bound: ExactRatio,
    pub holds: bool,
}

/// Checks `d_{θ̄_*} / d_{θ̄} >= (n - 2k)/n` exactly for `θ ⊢ k`, `k <= n/2`, with both
/// bars valid.
pub fn ratio_bound_check(theta: &Partition, n: usize) -> Result<RatioCheck> {
    let k = theta.size();
    if 2 * k > n || n == 0 {
        return Err(Error::InvalidBar {
            theta: theta.parts().to_vec(),
            n,
        });
    }
    let bar = theta.bar(n)?;
    let bar_star = theta.bar_star(n).ok_or_else(|| Error::InvalidBar {
        theta: theta.parts().to_vec(),
        n,
    })?;
    let ratio = ExactRatio::from_counts(&bar_star.dim(), &bar.dim());
    let bound = ExactRatio::new(BigInt::from(n - 2 * k), BigInt::from(n));
    let holds = ratio >= bound;
    Ok(RatioCheck {
        theta: theta.clone(),
        n,
        ratio,
        bound,
        holds,
    })
}

/// `d_λ` next to the dimensions of every diagram obtained by removing one box.
#[derive(Clone, Debug, Serialize)]
pub struct BranchingRow {
    pub lambda: Partition,
    pub dim: BigCount,
    pub removable: Vec<(Partition, BigCount)>,
    pub sum: BigCount,
    pub holds: bool,
}

pub fn branching_row(lambda: &Partition) -> BranchingRow {
    let removable: Vec<(Partition, BigCount)> = lambda.removable().into_iter().map(|mu| {
        let d = mu.dim();
        (mu, d)
    }).collect();
    let sum = BigCount::new(removable.iter().map(|(_, d)| d.value()).sum());
    let dim = lambda.dim();
    BranchingRow {
        lambda: lambda.clone(),
        holds: lambda.size() == 0 || sum == dim,
        dim,
        removable,
        sum,
    }
}

/// One failed identity, recorded with enough context to reproduce it.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityFailure {
    pub identity: &'static str,
    pub n: usize,
    pub shape: Partition,
    pub detail: String,
}

/// Outcome of the exact identity sweep over all `n <= max_n`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub max_n: usize,
    pub branching_checked: usize,
    pub burnside_checked: usize,
    pub ratio_checked: usize,
    pub eigen_bound_checked: usize,
    pub orthogonality_checked: usize,
    pub failures: Vec<IdentityFailure>,
    pub pass: bool,
}

/// Sweeps the branching identity, `Σ d_λ² = n!`, the dimension-ratio inequality and the
/// eigenvalue bound `e_{θ̄} <= 2|θ|` for every `n <= max_n`, plus character orthogonality
/// for `n <= orth_max_n`.
pub fn identity_sweep(max_n: usize, orth_max_n: usize) -> IdentityReport {
    let mut failures = Vec::new();
    let mut branching_checked = 0;
    let mut burnside_checked = 0;
    let mut ratio_checked = 0;
    let mut eigen_bound_checked = 0;
    let mut orthogonality_checked = 0;

    for n in 0..=max_n {
        let shapes = partitions(n);
        let mut square_sum = BigUint::zero();
        for lam in &shapes {
            let d = lam.dim().into_inner();
            square_sum += &d * &d;
            if n >= 1 {
                let below: BigUint = lam.removable().iter().map(|mu| mu.dim().into_inner()).sum();
                branching_checked += 1;
                if below != d {
                    failures.push(IdentityFailure {
                        identity: "branching",
                        n,
                        shape: lam.clone(),
                        detail: format!("d = {d}, sum over removable = {below}"),
                    });
                }
            }
        }
        burnside_checked += 1;
        if square_sum != factorial(n).into_inner() {
            failures.push(IdentityFailure {
                identity: "burnside",
                n,
                shape: Partition::empty(),
                detail: format!("sum of squares = {square_sum}"),
            });
        }
        if n == 0 {
            continue;
        }
        for k in 0..=n {
            for theta in partitions(k) {
                let Ok(bar) = theta.bar(n) else { continue };
                if 2 * k <= n && theta.bar_star(n).is_some() {
                    ratio_checked += 1;
                    match ratio_bound_check(&theta, n) {
                        Ok(check) if check.holds => {}
                        Ok(check) => failures.push(IdentityFailure {
                            identity: "dimension-ratio",
                            n,
                            shape: theta.clone(),
                            detail: format!("ratio {} < bound {}", check.ratio, check.bound),
                        }),
                        Err(e) => failures.push(IdentityFailure {
                            identity: "dimension-ratio",
                            n,
                            shape: theta.clone(),
                            detail: e.to_string(),
                        }),
                    }
                }
                eigen_bound_checked += 1;
                let e = eigenvalue_m(&bar, n).expect("bar has size n");
                if bar.level() != k {
                    failures.push(IdentityFailure {
                        identity: "level-of-bar",
                        n,
                        shape: theta.clone(),
                        detail: format!("level {} != {k}", bar.level()),
                    });
                }
                if e > ExactRatio::from_integer(2 * k as i64) {
                    failures.push(IdentityFailure {
                        identity: "eigenvalue-bound",
                        n,
                        shape: theta.clone(),
                        detail: format!("e = {e} > {}", 2 * k),
                    });
                }
            }
        }
    }

    for n in 1..=orth_max_n {
        let table = CharacterTable::new(n);
        let sizes: Vec<BigInt> = table.shapes.iter().map(|c| class_size(c).to_bigint()).collect();
        let n_fact = factorial(n).to_bigint();
        for (i, lam) in table.shapes.iter().enumerate() {
            for j in i..table.shapes.len() {
                let inner: BigInt = (0..table.shapes.len())
                    .map(|c| &sizes[c] * &table.values[i][c] * &table.values[j][c])
                    .sum();
                let expected = if i == j { n_fact.clone() } else { BigInt::zero() };
                orthogonality_checked += 1;
                if inner != expected {
                    failures.push(IdentityFailure {
                        identity: "character-orthogonality",
                        n,
                        shape: lam.clone(),
                        detail: format!("against {}: {inner}", table.shapes[j]),
                    });
                }
            }
        }
    }

    IdentityReport {
        max_n,
        branching_checked,
        burnside_checked,
        ratio_checked,
        eigen_bound_checked,
        orthogonality_checked,
        pass: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn branching_row_631() {
        let r = branching_row(&Partition::new(vec![6, 3, 1]).unwrap());
        assert_eq!(r.removable.len(), 3);
        assert!(r.holds);
        assert_eq!(r.sum, r.dim);
    }

    #[test]
    fn eigenvalues_for_n3() {
        assert_eq!(eigenvalue_m(&p(&[3]), 3).unwrap(), ExactRatio::zero());
        assert_eq!(eigenvalue_m(&p(&[2, 1]), 3).unwrap(), ExactRatio::from_ratio(3, 2));
        assert_eq!(eigenvalue_m(&p(&[1, 1, 1]), 3).unwrap(), ExactRatio::from_integer(3));
    }

    #[test]
    fn eigenvalues_for_n4() {
        let cases = [
            (vec![4], (0, 1)),
            (vec![3, 1], (4, 3)),
            (vec![2, 2], (4, 1)),
            (vec![2, 1, 1], (8, 3)),
            (vec![1, 1, 1, 1], (4, 1)),
        ];
        for (parts, (a, b)) in cases {
            let lam = Partition::new(parts).unwrap();
            assert_eq!(eigenvalue_m(&lam, 4).unwrap(), ExactRatio::from_ratio(a, b), "{lam}");
        }
    }

    #[test]
    fn trivial_shape_has_zero_eigenvalue() {
        for n in 1..=15 {
            assert_eq!(eigenvalue_m(&Partition::row(n), n).unwrap(), ExactRatio::zero());
        }
    }

    #[test]
    fn eigenvalue_rejects_wrong_size() {
        assert!(eigenvalue_m(&p(&[2, 1]), 4).is_err());
    }

    #[test]
    fn ratio_checks() {
        let c = ratio_bound_check(&Partition::empty(), 5).unwrap();
        assert_eq!(c.ratio, ExactRatio::from_integer(1));
        assert_eq!(c.bound, ExactRatio::from_integer(1));
        assert!(c.holds);

        let c = ratio_bound_check(&p(&[1]), 4).unwrap();
        assert_eq!(c.ratio, ExactRatio::from_ratio(2, 3));
        assert_eq!(c.bound, ExactRatio::from_ratio(2, 4));
        assert!(c.holds);

        let c = ratio_bound_check(&p(&[2, 1]), 10).unwrap();
        // d_(7,2,1) = 160, d_(6,2,1) = 105
        assert_eq!(c.ratio, ExactRatio::from_ratio(105, 160));
        assert!(c.holds);

        assert!(ratio_bound_check(&p(&[2, 1]), 5).is_err());
    }

    #[test]
    fn identity_sweep_small() {
        let report = identity_sweep(12, 6);
        assert!(report.pass, "{:?}", report.failures);
        assert!(report.ratio_checked > 0 && report.orthogonality_checked > 0);
    }
}
