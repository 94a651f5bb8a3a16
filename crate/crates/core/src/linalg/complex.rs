use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::dense::Matrix;
use super::jacobi::symmetric_eigen;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_real(m: &Matrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(m.get(i, j), 0.0))
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `max |U†U - I|`
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&CMatrix::identity(self.cols))
    }

    /// `max |H - H†|`
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        CMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols) * other.get(i % other.rows, j % other.cols)
        })
    }

    /// Real symmetric embedding `[[Re, -Im], [Im, Re]]` of a Hermitian matrix.
    pub fn real_embedding(&self) -> Matrix {
        let n = self.rows;
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let h = self.get(i % n, j % n);
            match (i < n, j < n) {
                (true, true) | (false, false) => h.re,
                (true, false) => -h.im,
                (false, true) => h.im,
            }
        })
    }
}

/// Haar-distributed unitary: QR (Gram–Schmidt, positive diagonal) of a complex Gaussian matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        let mut ok = true;
        for j in 0..dim {
            // Two passes keep the columns orthonormal to machine precision.
            for _ in 0..2 {
                for i in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    let proj: Complex64 = done[i].iter().zip(&rest[0]).map(|(q, v)| q.conj() * v).sum();
                    for (v, q) in rest[0].iter_mut().zip(&done[i]) {
                        *v -= proj * q;
                    }
                }
            }
            let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm < 1e-8 {
                ok = false;
                break;
            }
            for z in cols[j].iter_mut() {
                *z /= nrm;
            }
        }
        if ok {
            return CMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
        }
    }
}

/// Spectral measure of `psi` under a Hermitian `h`: pairs `(eigenvalue, weight)` with
/// `Σ weight · f(eigenvalue) = ⟨psi| f(h) |psi⟩` for any `f`.
///
/// Computed through the real embedding, so every complex eigenvalue appears twice with the
/// weight split between the two copies.
pub fn hermitian_spectral_measure(h: &CMatrix, psi: &[Complex64]) -> Vec<(f64, f64)> {
    let n = h.rows();
    assert_eq!(psi.len(), n);
    let e = symmetric_eigen(&h.real_embedding(), true);
    let mut u = Vec::with_capacity(2 * n);
    u.extend(psi.iter().map(|z| z.re));
    u.extend(psi.iter().map(|z| z.im));
    let vectors = e.vectors.expect("requested eigenvectors");
    e.values
        .iter()
        .zip(&vectors)
        .map(|(&lam, w)| {
            let c: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
            (lam, c * c)
        })
        .collect()
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let e = symmetric_eigen(&h.real_embedding(), false);
    e.values.iter().step_by(2).copied().collect()
}
