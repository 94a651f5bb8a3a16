use super::dense::{axpy, dot, norm, Matrix};

/// Residual norm (relative to the candidate's norm) below which a candidate is dependent.
pub const DROP_TOLERANCE: f64 = 1e-9;
/// Cheap prescreen on `‖v‖² - Σ⟨b_j, v⟩²` (relative); candidates below it skip the dense pass.
const PRESCREEN: f64 = 1e-13;

/// Incrementally grown orthonormal basis of a subspace of `R^dim`.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl OrthoBasis {
    pub fn new(dim: usize) -> Self {
        OrthoBasis {
            dim,
            vectors: Vec::new(),
        }
    }

    /// Wraps vectors that are already orthonormal.
    pub fn from_orthonormal(dim: usize, vectors: Vec<Vec<f64>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == dim));
        OrthoBasis { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    /// Adds the component of a sparse candidate orthogonal to the current span.
    /// Returns whether the span grew.
    pub fn push_sparse(&mut self, entries: &[(usize, f64)]) -> bool {
        let norm_sq: f64 = entries.iter().map(|(_, x)| x * x).sum();
        if norm_sq == 0.0 {
            return false;
        }
        let coeffs: Vec<f64> = self
            .vectors
            .iter()
            .map(|b| entries.iter().map(|&(i, x)| b[i] * x).sum())
            .collect();
        let est = norm_sq - coeffs.iter().map(|c| c * c).sum::<f64>();
        if est <= PRESCREEN * norm_sq {
            return false;
        }
        let mut r = vec![0.0; self.dim];
        for &(i, x) in entries {
            r[i] += x;
        }
        for (b, &c) in self.vectors.iter().zip(&coeffs) {
            axpy(-c, b, &mut r);
        }
        self.finish(r, norm_sq.sqrt())
    }

    pub fn push_dense(&mut self, v: &[f64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let n0 = norm(v);
        if n0 == 0.0 {
            return false;
        }
        let mut r = v.to_vec();
        for b in &self.vectors {
            let c = dot(b, &r);
            axpy(-c, b, &mut r);
        }
        self.finish(r, n0)
    }

    /// Second Gram–Schmidt pass, then accept if the residual survives the drop tolerance.
    fn finish(&mut self, mut r: Vec<f64>, original_norm: f64) -> bool {
        for b in &self.vectors {
            let c = dot(b, &r);
            axpy(-c, b, &mut r);
        }
        let nr = norm(&r);
        if nr <= DROP_TOLERANCE * original_norm {
            return false;
        }
        for x in r.iter_mut() {
            *x /= nr;
        }
        self.vectors.push(r);
        true
    }

    /// Coordinates of the orthogonal projection of `v` in this basis.
    pub fn coefficients(&self, v: &[f64]) -> Vec<f64> {
        self.vectors.iter().map(|b| dot(b, v)).collect()
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for b in &self.vectors {
            axpy(dot(b, v), b, &mut out);
        }
        out
    }

    /// `‖v - Πv‖`
    pub fn residual_norm(&self, v: &[f64]) -> f64 {
        let p = self.project(v);
        v.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Dense projector `Σ b bᵀ`.
    pub fn projector(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for b in &self.vectors {
            m.add_outer(b, 1.0);
        }
        m
    }

    /// Largest `|⟨b_i, b_j⟩ - δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }
}
