use super::dense::Matrix;

/// Stop once the off-diagonal Frobenius norm drops below this, scaled by `max(1, ‖A‖_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors as rows, aligned with `values`; present only when requested.
    pub vectors: Option<Vec<Vec<f64>>>,
    pub sweeps: usize,
    pub off_norm: f64,
}

/// Cyclic Jacobi rotations on a real symmetric matrix.
///
/// Only the symmetric part of `a` is meaningful; the input is assumed symmetric to
/// working precision.
pub fn symmetric_eigen(a: &Matrix, with_vectors: bool) -> SymmetricEigen {
    assert!(a.is_square(), "eigen of non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    // Eigenvectors are accumulated transposed so each rotation touches two contiguous rows.
    let mut vt = with_vectors.then(|| Matrix::identity(n));
    let scale = a.frobenius().max(1.0);
    let target = JACOBI_TOLERANCE * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&m);
    while off > target && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                // Late sweeps: entries already below the diagonal's rounding level are zeroed.
                if sweeps > 4
                    && (app.abs() + 100.0 * apq.abs() == app.abs())
                    && (aqq.abs() + 100.0 * apq.abs() == aqq.abs())
                {
                    m.set(p, q, 0.0);
                    m.set(q, p, 0.0);
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, p, q, c, s);
                m.set(p, p, app - t * apq);
                m.set(q, q, aqq + t * apq);
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                if let Some(vt) = vt.as_mut() {
                    rotate_rows(vt, p, q, c, s);
                }
            }
        }
        off = off_diagonal_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let vectors = vt.map(|vt| order.iter().map(|&i| vt.row(i).to_vec()).collect());
    SymmetricEigen {
        values,
        vectors,
        sweeps,
        off_norm: off,
    }
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        let row = m.row(i);
        for (j, &x) in row.iter().enumerate() {
            if i != j {
                acc += x * x;
            }
        }
    }
    acc.sqrt()
}

/// Applies `Jᵀ A J` to every entry of rows/columns `p`, `q` except the 2x2 pivot block.
fn rotate(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m.get(p, k);
        let akq = m.get(q, k);
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        m.set(p, k, new_p);
        m.set(q, k, new_q);
        m.set(k, p, new_p);
        m.set(k, q, new_q);
    }
}

fn rotate_rows(vt: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = vt.cols();
    let (lo, hi) = (p.min(q), p.max(q));
    let data = vt.as_mut_slice();
    let (head, tail) = data.split_at_mut(hi * n);
    let row_lo = &mut head[lo * n..(lo + 1) * n];
    let row_hi = &mut tail[..n];
    let (row_p, row_q) = if p < q {
        (row_lo, row_hi)
    } else {
        (row_hi, row_lo)
    };
    for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let a = *vp;
        let b = *vq;
        *vp = c * a - s * b;
        *vq = s * a + c * b;
    }
}

/// Groups ascending eigenvalues into clusters whose consecutive gaps are at most `tol`.
/// Returns `(mean, multiplicity)` per cluster.
pub fn cluster_eigenvalues(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut clusters: Vec<(f64, usize, f64)> = Vec::new();
    for &v in sorted {
        match clusters.last_mut() {
            Some((sum, count, last)) if (v - *last).abs() <= tol => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => clusters.push((v, 1, v)),
        }
    }
    clusters
        .into_iter()
        .map(|(sum, count, _)| (sum / count as f64, count))
        .collect()
}
