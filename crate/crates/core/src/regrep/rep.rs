use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::assignment::PartialAssignment;
use super::group::{next_permutation, SymmetricGroup};
use super::operator::{OperatorKind, ProjectionOperator};
use super::permutation::Permutation;
use super::vector::GroupAlgebraVector;
use crate::linalg::{ExactEchelon, Matrix, OrthoBasis};
use crate::young::{factorial, CharacterTable, Partition};
use crate::{Error, Result};

/// The two-sided regular representation of `S_N`, materialized densely.
///
/// Float bases of `A_k` and the conjugacy-class table are built lazily and cached.
pub struct RegularRep {
    group: SymmetricGroup,
    table: CharacterTable,
    a_bases: Vec<OnceLock<OrthoBasis>>,
    high_bases: Vec<OnceLock<OrthoBasis>>,
    /// `class[a * order + b]` is the class index of `π_a⁻¹ ∘ π_b` in `table.shapes`.
    class: OnceLock<Vec<u16>>,
}

impl RegularRep {
    pub fn new(n: usize) -> Result<Self> {
        let group = SymmetricGroup::new(n)?;
        Ok(RegularRep {
            table: CharacterTable::new(n),
            a_bases: (0..=n).map(|_| OnceLock::new()).collect(),
            high_bases: (0..n).map(|_| OnceLock::new()).collect(),
            class: OnceLock::new(),
            group,
        })
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn group(&self) -> &SymmetricGroup {
        &self.group
    }

    pub fn character_table(&self) -> &CharacterTable {
        &self.table
    }

    fn check_y(&self, y: usize) -> Result<()> {
        if y >= self.n() {
            return Err(Error::Parameter(format!("challenge y = {y} outside [0, {})", self.n())));
        }
        Ok(())
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k > self.n() {
            return Err(Error::Parameter(format!("k = {k} exceeds N = {}", self.n())));
        }
        Ok(())
    }

    /// `V^{π_R}_{π_D}`: `|π⟩ ↦ |π_R ∘ π ∘ π_D⁻¹⟩`.
    pub fn act(
        &self,
        pi_d: &Permutation,
        pi_r: &Permutation,
        v: &GroupAlgebraVector,
    ) -> Result<GroupAlgebraVector> {
        for p in [pi_d, pi_r] {
            if p.n() != self.n() {
                return Err(Error::SizeMismatch {
                    expected: self.n(),
                    found: p.n(),
                });
            }
        }
        if v.len() != self.order() {
            return Err(Error::SizeMismatch {
                expected: self.order(),
                found: v.len(),
            });
        }
        v.permuted(&self.group.action_map(pi_d, pi_r))
    }

    /// Indices (ascending) of the permutations compatible with `alpha`.
    pub fn assignment_support(&self, alpha: &PartialAssignment) -> Vec<usize> {
        let n = self.n();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        for &(x, y) in alpha.pairs() {
            map[x] = y;
            used[y] = true;
        }
        let free_inputs: Vec<usize> = (0..n).filter(|&x| map[x] == usize::MAX).collect();
        let mut free_outputs: Vec<usize> = (0..n).filter(|&y| !used[y]).collect();
        let mut out = Vec::new();
        loop {
            for (&x, &y) in free_inputs.iter().zip(&free_outputs) {
                map[x] = y;
            }
            out.push(Permutation::from_vec_unchecked(map.clone()).lex_rank());
            if !next_permutation(&mut free_outputs) {
                break;
            }
        }
        out.sort_unstable();
        out
    }

    /// `|v_α⟩` with amplitude `1/√((N-k)!)` on each compatible permutation.
    pub fn assignment_vector(&self, alpha: &PartialAssignment) -> Result<GroupAlgebraVector> {
        if alpha.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: alpha.n(),
            });
        }
        let support = self.assignment_support(alpha);
        let amp = 1.0 / (support.len() as f64).sqrt();
        let mut v = vec![0.0; self.order()];
        for i in support {
            v[i] = amp;
        }
        Ok(GroupAlgebraVector::real(self.n(), v))
    }

    /// `√((N-k)!) |v_α⟩`: the 0/1 indicator of the compatible permutations, exact flavor.
    pub fn assignment_indicator(&self, alpha: &PartialAssignment) -> GroupAlgebraVector {
        let mut v = vec![BigRational::zero(); self.order()];
        for i in self.assignment_support(alpha) {
            v[i] = BigRational::from_integer(1.into());
        }
        GroupAlgebraVector::exact(self.n(), v)
    }

    fn sparse(&self, alpha: &PartialAssignment) -> Vec<(usize, f64)> {
        let support = self.assignment_support(alpha);
        let amp = 1.0 / (support.len() as f64).sqrt();
        support.into_iter().map(|i| (i, amp)).collect()
    }

    fn extend_basis<'a>(
        &self,
        basis: &mut OrthoBasis,
        alphas: impl IntoIterator<Item = &'a PartialAssignment>,
    ) {
        for alpha in alphas {
            basis.push_sparse(&self.sparse(alpha));
        }
    }

    /// Orthonormal basis of `A_k`, from `|v_α⟩` in lexicographic `α` order.
    pub fn subspace_a(&self, k: usize) -> Result<&OrthoBasis> {
        self.check_k(k)?;
        Ok(self.a_bases[k].get_or_init(|| {
            let mut basis = OrthoBasis::new(self.order());
            self.extend_basis(&mut basis, &PartialAssignment::all(self.n(), k));
            basis
        }))
    }

    /// Orthonormal basis of `A_k^y` (`A_0^y = {0}`).
    pub fn subspace_a_y(&self, k: usize, y: usize) -> Result<OrthoBasis> {
        self.check_k(k)?;
        self.check_y(y)?;
        let mut basis = OrthoBasis::new(self.order());
        self.extend_basis(&mut basis, &PartialAssignment::all_with_output(self.n(), k, y));
        Ok(basis)
    }

    fn exact_span<'a>(&self, alphas: impl IntoIterator<Item = &'a PartialAssignment>) -> ExactEchelon {
        let mut e = ExactEchelon::new(self.order());
        for alpha in alphas {
            let mut v = vec![BigInt::zero(); self.order()];
            for i in self.assignment_support(alpha) {
                v[i] = BigInt::from(1);
            }
            e.insert(v);
        }
        e
    }

    /// Exact span of the unnormalized `|v_α⟩`, `|α| = k`.
    pub fn exact_span_a(&self, k: usize) -> Result<ExactEchelon> {
        self.check_k(k)?;
        Ok(self.exact_span(&PartialAssignment::all(self.n(), k)))
    }

    pub fn exact_span_a_y(&self, k: usize, y: usize) -> Result<ExactEchelon> {
        self.check_k(k)?;
        self.check_y(y)?;
        Ok(self.exact_span(&PartialAssignment::all_with_output(self.n(), k, y)))
    }

    /// Orthonormal bases of the pieces `A_i^y ∩ A_{i-1}^⊥`, `i = 1..N-1`, obtained by
    /// projecting the `A_i^y` spanning set against `A_{i-1}`.
    pub fn high_pieces(&self, y: usize) -> Result<Vec<OrthoBasis>> {
        self.check_y(y)?;
        let n = self.n();
        let mut pieces = Vec::with_capacity(n.saturating_sub(1));
        for i in 1..n {
            let mut basis = self.subspace_a(i - 1)?.clone();
            let start = basis.len();
            self.extend_basis(&mut basis, &PartialAssignment::all_with_output(n, i, y));
            let piece = basis.into_vectors().split_off(start);
            pieces.push(OrthoBasis::from_orthonormal(self.order(), piece));
        }
        Ok(pieces)
    }

    /// Orthonormal bases of `A_i ∩ (A_i^y)^⊥`, `i = 0..N-1`.
    pub fn low_pieces(&self, y: usize) -> Result<Vec<OrthoBasis>> {
        self.check_y(y)?;
        let n = self.n();
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let mut basis = self.subspace_a_y(i, y)?;
            let start = basis.len();
            self.extend_basis(&mut basis, &PartialAssignment::all(n, i));
            let piece = basis.into_vectors().split_off(start);
            pieces.push(OrthoBasis::from_orthonormal(self.order(), piece));
        }
        Ok(pieces)
    }

    fn concat(&self, pieces: Vec<OrthoBasis>) -> OrthoBasis {
        let vectors = pieces.into_iter().flat_map(OrthoBasis::into_vectors).collect();
        OrthoBasis::from_orthonormal(self.order(), vectors)
    }

    /// Cached after the first call.
    pub fn high_basis(&self, y: usize) -> Result<&OrthoBasis> {
        if let Some(b) = self.high_bases.get(y).and_then(OnceLock::get) {
            return Ok(b);
        }
        let basis = self.concat(self.high_pieces(y)?);
        Ok(self.high_bases[y].get_or_init(|| basis))
    }

    pub fn low_basis(&self, y: usize) -> Result<OrthoBasis> {
        Ok(self.concat(self.low_pieces(y)?))
    }

    pub fn high_projection(&self, y: usize) -> Result<ProjectionOperator> {
        let basis = self.high_basis(y)?;
        Ok(ProjectionOperator::new(self.n(), OperatorKind::High { y }, basis.projector()))
    }

    pub fn low_projection(&self, y: usize) -> Result<ProjectionOperator> {
        let basis = self.low_basis(y)?;
        Ok(ProjectionOperator::new(self.n(), OperatorKind::Low { y }, basis.projector()))
    }

    /// `M = Σ_y Π_y^high`. Per-challenge projectors are built in parallel for `N <= 6` and
    /// summed in `y` order, so the result does not depend on the thread count.
    pub fn build_m(&self) -> Result<ProjectionOperator> {
        let n = self.n();
        // Warm the shared A_k cache before fanning out.
        for k in 0..n {
            self.subspace_a(k)?;
        }
        let mut m = Matrix::zeros(self.order(), self.order());
        if n <= 6 {
            let parts: Vec<Matrix> = (0..n)
                .into_par_iter()
                .map(|y| self.high_basis(y).map(|b| b.projector()))
                .collect::<Result<_>>()?;
            for p in &parts {
                m.add_assign(p);
            }
        } else {
            for y in 0..n {
                for b in self.high_basis(y)?.vectors() {
                    m.add_outer(b, 1.0);
                }
            }
        }
        Ok(ProjectionOperator::new(n, OperatorKind::M, m))
    }

    fn class_matrix(&self) -> &[u16] {
        self.class.get_or_init(|| {
            let order = self.order();
            let class_of: Vec<u16> = self
                .group
                .elements()
                .iter()
                .map(|p| {
                    self.table
                        .class_index(&p.cycle_type())
                        .expect("every cycle type is a partition of n") as u16
                })
                .collect();
            let id = Permutation::identity(self.n());
            let mut out = vec![0u16; order * order];
            for (a, pa) in self.group.elements().iter().enumerate() {
                // b ↦ a⁻¹ ∘ b
                let map = self.group.action_map(&id, &pa.inverse());
                for (b, &idx) in map.iter().enumerate() {
                    out[a * order + b] = class_of[idx];
                }
            }
            out
        })
    }

    /// `Π_λ = (d_λ / N!) Σ_π χ_λ(π) L_π`, entries `(d_λ/N!) χ_λ(π_a⁻¹ π_b)`.
    pub fn isotypic_projector(&self, lambda: &Partition) -> Result<ProjectionOperator> {
        let row = self
            .table
            .row(lambda)
            .ok_or_else(|| Error::SizeMismatch {
                expected: self.n(),
                found: lambda.size(),
            })?;
        let scale = lambda.dim().to_f64() / factorial(self.n()).to_f64();
        let values: Vec<f64> = row.iter().map(|c| c.to_f64().unwrap_or(f64::NAN) * scale).collect();
        let classes = self.class_matrix();
        let order = self.order();
        let mut m = Matrix::zeros(order, order);
        for (dst, &c) in m.as_mut_slice().iter_mut().zip(classes) {
            *dst = values[c as usize];
        }
        Ok(ProjectionOperator::new(
            self.n(),
            OperatorKind::Isotypic {
                lambda: lambda.clone(),
            },
            m,
        ))
    }

    /// Isotypic projector for `μ ⊢ N-1` of the stabilizer of `y` acting on outputs:
    /// `(d_μ/(N-1)!) Σ_{σ(y)=y} χ_μ(σ|) V^σ`.
    pub fn restricted_isotypic_projector(&self, mu: &Partition, y: usize) -> Result<ProjectionOperator> {
        self.check_y(y)?;
        let n = self.n();
        if mu.size() + 1 != n {
            return Err(Error::SizeMismatch {
                expected: n - 1,
                found: mu.size(),
            });
        }
        let sub_table = CharacterTable::new(n - 1);
        let row = sub_table.row(mu).expect("mu is a partition of n - 1");
        let scale = mu.dim().to_f64() / factorial(n - 1).to_f64();
        let value_of: Vec<Option<f64>> = self
            .group
            .elements()
            .iter()
            .map(|s| {
                s.cycle_type_fixing(y).map(|ct| {
                    let c = sub_table.class_index(&ct).expect("restricted cycle type");
                    row[c].to_f64().unwrap_or(f64::NAN) * scale
                })
            })
            .collect();
        let order = self.order();
        let id = Permutation::identity(n);
        let mut m = Matrix::zeros(order, order);
        for (b, pb) in self.group.elements().iter().enumerate() {
            // a ↦ a ∘ b⁻¹ = σ with σ ∘ b = a
            let map = self.group.action_map(pb, &id);
            for (a, &s) in map.iter().enumerate() {
                if let Some(v) = value_of[s] {
                    m.set(a, b, v);
                }
            }
        }
        Ok(ProjectionOperator::new(
            n,
            OperatorKind::RestrictedIsotypic { mu: mu.clone(), y },
            m,
        ))
    }

    /// Orthonormal basis of `H_λ`, by Gram–Schmidt on the columns of `Π_λ`.
    pub fn isotypic_basis(&self, lambda: &Partition) -> Result<OrthoBasis> {
        let p = self.isotypic_projector(lambda)?;
        let target = p.rank();
        let mut basis = OrthoBasis::new(self.order());
        let t = p.matrix.transpose();
        for j in 0..self.order() {
            if basis.len() == target {
                break;
            }
            basis.push_dense(t.row(j));
        }
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn assignment_vectors() {
        let rep = RegularRep::new(3).unwrap();
        let v = rep.assignment_vector(&PartialAssignment::empty(3)).unwrap();
        let amp = 1.0 / 6f64.sqrt();
        assert!(v.as_real().unwrap().iter().all(|&a| (a - amp).abs() < 1e-15));

        let alpha = PartialAssignment::new(3, vec![(0, 1)]).unwrap();
        let v = rep.assignment_vector(&alpha).unwrap();
        let nz: Vec<usize> = (0..6).filter(|&i| v.as_real().unwrap()[i] != 0.0).collect();
        assert_eq!(nz, vec![2, 3]); // 102, 120
        assert!((v.norm() - 1.0).abs() < 1e-15);

        let full = PartialAssignment::new(3, vec![(0, 2), (1, 0), (2, 1)]).unwrap();
        assert_eq!(rep.assignment_support(&full), vec![4]);
    }

    #[test]
    fn act_is_a_homomorphism() {
        let rep = RegularRep::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let v: Vec<f64> = (0..24).map(|i| (i as f64 * 0.37).sin()).collect();
        let v = GroupAlgebraVector::real(4, v);
        let (g, h, g2, h2) = (
            Permutation::random(4, &mut rng),
            Permutation::random(4, &mut rng),
            Permutation::random(4, &mut rng),
            Permutation::random(4, &mut rng),
        );
        let lhs = rep.act(&g, &h, &rep.act(&g2, &h2, &v).unwrap()).unwrap();
        let rhs = rep.act(&g.compose(&g2), &h.compose(&h2), &v).unwrap();
        assert_eq!(lhs, rhs);
        let id = Permutation::identity(4);
        assert_eq!(rep.act(&id, &id, &v).unwrap(), v);
        assert!((lhs.norm() - v.norm()).abs() < 1e-14);

        // right action on a basis vector
        let e = GroupAlgebraVector::basis(4, 24, 7);
        let moved = rep.act(&id, &g, &e).unwrap();
        let target = g.compose(rep.group().element(7)).lex_rank();
        assert_eq!(moved.as_real().unwrap()[target], 1.0);
    }

    #[test]
    fn dims_of_a_k_at_n4() {
        let rep = RegularRep::new(4).unwrap();
        let dims: Vec<usize> = (0..4).map(|k| rep.subspace_a(k).unwrap().len()).collect();
        assert_eq!(dims, vec![1, 10, 23, 24]);
        assert_eq!(rep.exact_span_a(1).unwrap().rank(), 10);
        assert_eq!(rep.exact_span_a(2).unwrap().rank(), 23);
        assert_eq!(rep.subspace_a_y(0, 2).unwrap().len(), 0);
    }

    #[test]
    fn high_and_low_ranks_at_n4() {
        let rep = RegularRep::new(4).unwrap();
        for y in 0..4 {
            let high = rep.high_basis(y).unwrap();
            let low = rep.low_basis(y).unwrap();
            assert_eq!(high.len(), 14);
            assert_eq!(low.len(), 10);
            let v0 = rep.assignment_vector(&PartialAssignment::empty(4)).unwrap();
            assert!(high.project(v0.as_real().unwrap()).iter().all(|x| x.abs() < 1e-12));
            // high ⊥ low
            for a in high.vectors() {
                for b in low.vectors() {
                    assert!(dot(a, b).abs() < 1e-10);
                }
            }
        }
        let proj = rep.high_projection(1).unwrap();
        assert!(proj.is_projector(1e-8));
    }

    #[test]
    fn m_trace_and_isotypic_ranks() {
        let rep = RegularRep::new(4).unwrap();
        let m = rep.build_m().unwrap();
        assert!((m.trace() - 56.0).abs() < 1e-9);
        assert!(m.symmetry_residual() <= 1e-12);

        let rep3 = RegularRep::new(3).unwrap();
        let ranks: Vec<usize> = [p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]
            .iter()
            .map(|l| rep3.isotypic_projector(l).unwrap().rank())
            .collect();
        assert_eq!(ranks, vec![1, 4, 1]);
        let triv = rep3.isotypic_projector(&p(&[3])).unwrap();
        assert!(triv.matrix.as_slice().iter().all(|&x| (x - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn isotypic_projectors_are_orthogonal_and_complete() {
        let rep = RegularRep::new(4).unwrap();
        let projs: Vec<ProjectionOperator> = crate::young::partitions(4)
            .iter()
            .map(|l| rep.isotypic_projector(l).unwrap())
            .collect();
        let mut sum = Matrix::zeros(24, 24);
        for (i, a) in projs.iter().enumerate() {
            assert!(a.is_projector(1e-8));
            sum.add_assign(&a.matrix);
            for b in &projs[i + 1..] {
                assert!(a.matrix.matmul(&b.matrix).max_abs() <= 1e-8);
            }
        }
        assert!(sum.max_abs_diff(&Matrix::identity(24)) < 1e-12);
    }

    #[test]
    fn character_from_trace_of_left_action_on_block() {
        // tr(L_g Π_λ) = d_λ χ_λ(g); g a 3-cycle in S_3, λ = (2,1) gives 2·(-1).
        let rep = RegularRep::new(3).unwrap();
        let proj = rep.isotypic_projector(&p(&[2, 1])).unwrap();
        let g = Permutation::new(vec![1, 2, 0]).unwrap();
        let id = Permutation::identity(3);
        let map = rep.group().action_map(&id, &g);
        let mut tr = 0.0;
        for col in 0..6 {
            // (L_g Π)[col, col] = Π[g⁻¹ col, col]
            let pre = map.iter().position(|&t| t == col).unwrap();
            tr += proj.matrix.get(pre, col);
        }
        assert!((tr - (-2.0)).abs() < 1e-12);
    }

    #[test]
    fn restricted_projectors_sum_to_identity() {
        let rep = RegularRep::new(4).unwrap();
        let mut sum = Matrix::zeros(24, 24);
        for mu in crate::young::partitions(3) {
            let q = rep.restricted_isotypic_projector(&mu, 2).unwrap();
            assert!(q.is_projector(1e-8), "{mu}");
            sum.add_assign(&q.matrix);
        }
        assert!(sum.max_abs_diff(&Matrix::identity(24)) < 1e-12);
    }
}
