use serde::Serialize;

use crate::linalg::Matrix;
use crate::young::Partition;

/// Which operator a [`ProjectionOperator`] represents.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorKind {
    High { y: usize },
    Low { y: usize },
    Isotypic { lambda: Partition },
    /// Isotypic projector of the output-side action of the stabilizer of `y`.
    RestrictedIsotypic { mu: Partition, y: usize },
    /// `Π_θ̄ Q_{ρ̄_*, y}`
    Refined { theta: Partition, rho: Partition, y: usize },
    M,
    Subspace { label: String },
}

/// Dense symmetric operator on the group algebra.
#[derive(Clone, Debug)]
pub struct ProjectionOperator {
    pub n: usize,
    pub kind: OperatorKind,
    pub matrix: Matrix,
}

impl ProjectionOperator {
    pub fn new(n: usize, kind: OperatorKind, matrix: Matrix) -> Self {
        ProjectionOperator { n, kind, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Rank of a projector, read off its trace.
    pub fn rank(&self) -> usize {
        self.trace().round().max(0.0) as usize
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.matrix.mul_vec(v)
    }

    pub fn symmetry_residual(&self) -> f64 {
        self.matrix.symmetry_residual()
    }

    /// `‖P² - P‖_max`; meaningless for `M`.
    pub fn idempotence_residual(&self) -> f64 {
        self.matrix.matmul(&self.matrix).max_abs_diff(&self.matrix)
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.symmetry_residual() <= 1e-12 && self.idempotence_residual() <= tol
    }
}
