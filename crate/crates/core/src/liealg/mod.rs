//! Finite-dimensional Lie algebras given by structure constants, and linear
//! maps between them.
//!
//! Only the brackets `[e_i, e_j]` with `i < j` are stored. The rest of the
//! structure tensor follows from antisymmetry, so `c[i][j][k] = -c[j][i][k]`
//! and `c[i][i][k] = 0` hold by construction.
//!
//! Both checkers here work on basis elements only. For the Jacobi identity
//! this suffices because the Jacobiator `J(x, y, z)` of an alternating
//! bilinear bracket is alternating and trilinear, so it vanishes everywhere
//! iff it vanishes on all triples `e_i, e_j, e_k` with `i < j < k`. For
//! homomorphisms, `f([x, y]) - [f(x), f(y)]` is bilinear in `(x, y)` and
//! alternating, so basis pairs `i < j` suffice.

pub mod catalog;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{vector, Field, Matrix, Scalar, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LieAlgebra {
    field: Field,
    labels: Vec<String>,
    /// `upper[pair_index(i, j)] = [e_i, e_j]` for `i < j`.
    upper: Vec<Vector>,
}

/// One failure of the Jacobi identity on a basis triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub defect: Vector,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl LieAlgebra {
    /// Builds an algebra from basis brackets `(i, j, [e_i, e_j])`.
    ///
    /// Pairs with `i > j` are stored negated; repeated pairs accumulate. The
    /// Jacobi identity is not enforced here, see [`LieAlgebra::check`].
    pub fn new(
        field: Field,
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vector)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut upper = vec![vector::zero(field, n); n * n.saturating_sub(1) / 2];
        for (i, j, v) in brackets {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidBracket { i, j, dim: n });
            }
            if v.len() != n {
                return Err(Error::DimensionMismatch { context: "bracket value", expected: n, found: v.len() });
            }
            if let Some(s) = v.iter().find(|s| s.field() != field) {
                return Err(Error::FieldMismatch { left: field, right: s.field() });
            }
            let (a, b, v) = if i < j { (i, j, v) } else { (j, i, v.iter().map(|s| -s).collect()) };
            let slot = &mut upper[pair_index(n, a, b)];
            *slot = vector::add(slot, &v);
        }
        Ok(LieAlgebra { field, labels, upper })
    }

    /// Like [`LieAlgebra::new`] but rejects tensors violating Jacobi.
    pub fn new_checked(
        field: Field,
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vector)>,
    ) -> Result<Self> {
        let alg = Self::new(field, labels, brackets)?;
        alg.ensure_lie()?;
        Ok(alg)
    }

    pub fn abelian(field: Field, labels: Vec<String>) -> Self {
        Self::new(field, labels, []).expect("no brackets")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]` in basis coordinates.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.upper[pair_index(n, j, i)].iter().map(|s| -s).collect(),
            std::cmp::Ordering::Equal => vector::zero(self.field, n),
        }
    }

    /// `c[i][j][k]`, the coefficient of `e_k` in `[e_i, e_j]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.basis_bracket(i, j)[k].clone()
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vector)> + '_ {
        let n = self.dim();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, &self.upper[pair_index(n, i, j)]))
            .filter(|(_, _, v)| !vector::is_zero(v))
    }

    fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { context: "algebra element", expected: self.dim(), found: v.len() });
        }
        if let Some(s) = v.iter().find(|s| s.field() != self.field) {
            return Err(Error::FieldMismatch { left: self.field, right: s.field() });
        }
        Ok(())
    }

    /// `[x, y] = sum_{i,j} x_i y_j [e_i, e_j]`.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        let n = self.dim();
        let mut out = vector::zero(self.field, n);
        for (i, j, v) in self.nonzero_brackets() {
            // x_i y_j - x_j y_i
            let coeff = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            vector::axpy(&mut out, &coeff, v);
        }
        Ok(out)
    }

    /// Matrix of `ad(e_i)`: column `j` is `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.basis_bracket(i, j)).collect();
        Matrix::from_columns(self.field, self.dim(), &cols).expect("bracket vectors have algebra dimension")
    }

    /// Jacobi violations over all basis triples `i < j < k`; empty iff this
    /// is a Lie algebra.
    pub fn check(&self) -> Vec<JacobiViolation> {
        let n = self.dim();
        let mut out = Vec::new();
        let br = |x: &[Scalar], k: usize| -> Vector {
            let mut acc = vector::zero(self.field, n);
            for (m, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    vector::axpy(&mut acc, c, &self.basis_bracket(m, k));
                }
            }
            acc
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t1 = br(&self.basis_bracket(i, j), k);
                    let t2 = br(&self.basis_bracket(j, k), i);
                    let t3 = br(&self.basis_bracket(k, i), j);
                    let defect = vector::add(&vector::add(&t1, &t2), &t3);
                    if !vector::is_zero(&defect) {
                        out.push(JacobiViolation { i, j, k, defect });
                    }
                }
            }
        }
        out
    }

    pub fn ensure_lie(&self) -> Result<()> {
        match self.check().len() {
            0 => Ok(()),
            v => Err(Error::NotALieAlgebra(v)),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.nonzero_brackets().next().is_none()
    }

    /// Basis of `[L, L]`: the span of all basis brackets.
    pub fn derived_subalgebra(&self) -> Vec<Vector> {
        let brackets: Vec<Vector> = self.nonzero_brackets().map(|(_, _, v)| v.clone()).collect();
        if brackets.is_empty() {
            return Vec::new();
        }
        Matrix::from_columns(self.field, self.dim(), &brackets)
            .expect("bracket vectors have algebra dimension")
            .image_basis()
    }

    /// The same algebra in the basis `f_j = sum_i p[i][j] e_i`.
    pub fn change_basis(&self, p: &Matrix, labels: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n || labels.len() != n {
            return Err(Error::DimensionMismatch { context: "change of basis", expected: n, found: p.rows() });
        }
        let inv = p.invert()?.ok_or(Error::NotInvertible)?;
        let cols = p.columns();
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = self.bracket(&cols[a], &cols[b])?;
                brackets.push((a, b, inv.mul_vec(&v)?));
            }
        }
        LieAlgebra::new(self.field, labels, brackets)
    }
}

/// A linear map between Lie algebras; columns are images of source basis
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    source: Arc<LieAlgebra>,
    target: Arc<LieAlgebra>,
    matrix: Matrix,
}

impl AlgebraMap {
    pub fn new(source: Arc<LieAlgebra>, target: Arc<LieAlgebra>, matrix: Matrix) -> Result<Self> {
        if source.field() != target.field() || matrix.field() != source.field() {
            return Err(Error::FieldMismatch {
                left: source.field(),
                right: if matrix.field() != source.field() { matrix.field() } else { target.field() },
            });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                context: "map columns vs source dimension",
                expected: source.dim(),
                found: matrix.cols(),
            });
        }
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch {
                context: "map rows vs target dimension",
                expected: target.dim(),
                found: matrix.rows(),
            });
        }
        Ok(AlgebraMap { source, target, matrix })
    }

    pub fn identity(alg: Arc<LieAlgebra>) -> Self {
        let m = Matrix::identity(alg.field(), alg.dim());
        AlgebraMap { source: alg.clone(), target: alg, matrix: m }
    }

    pub fn source(&self) -> &Arc<LieAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LieAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ first`
    pub fn after(&self, first: &AlgebraMap) -> Result<AlgebraMap> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(Error::DimensionMismatch {
                context: "composition through mismatched algebras",
                expected: self.source.dim(),
                found: first.target.dim(),
            });
        }
        AlgebraMap::new(first.source.clone(), self.target.clone(), self.matrix.checked_mul(&first.matrix)?)
    }

    /// True iff `f([e_i, e_j]) = [f(e_i), f(e_j)]` on all basis pairs `i < j`.
    pub fn is_homomorphism(&self) -> bool {
        self.homomorphism_defect().is_none()
    }

    /// First basis pair on which the bracket is not preserved.
    pub fn homomorphism_defect(&self) -> Option<(usize, usize)> {
        let n = self.source.dim();
        let images = self.matrix.columns();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.matrix.mul_vec(&self.source.basis_bracket(i, j)).expect("shape checked");
                let rhs = self.target.bracket(&images[i], &images[j]).expect("shape checked");
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target && self.matrix.is_invertible() && self.is_homomorphism()
    }

    pub fn inverse(&self) -> Result<AlgebraMap> {
        let inv = self.matrix.invert()?.ok_or(Error::NotInvertible)?;
        AlgebraMap::new(self.target.clone(), self.source.clone(), inv)
    }
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    fn v(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn bracket_examples() {
        let ab = catalog::abelian(q(), 3);
        assert!(vector::is_zero(&ab.bracket(&v(q(), &[1, 2, 3]), &v(q(), &[-1, 0, 5])).unwrap()));

        let h = catalog::heisenberg(q());
        assert_eq!(h.bracket(&v(q(), &[1, 0, 0]), &v(q(), &[0, 1, 0])).unwrap(), v(q(), &[0, 0, 1]));

        let sl2 = catalog::sl2(q());
        // basis e, h, f
        assert_eq!(sl2.bracket(&v(q(), &[1, 0, 0]), &v(q(), &[0, 0, 1])).unwrap(), v(q(), &[0, 1, 0]));
        assert_eq!(sl2.basis_bracket(1, 0), v(q(), &[2, 0, 0]));
        assert_eq!(sl2.basis_bracket(1, 2), v(q(), &[0, 0, -2]));
        assert!(matches!(sl2.bracket(&v(q(), &[1]), &v(q(), &[1, 0, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn antisymmetry_by_construction() {
        let alg = LieAlgebra::new(q(), labels(2), [(1, 0, v(q(), &[0, 3]))]).unwrap();
        assert_eq!(alg.structure_constant(0, 1, 1), q().from_i64(-3));
        assert_eq!(alg.structure_constant(1, 0, 1), q().from_i64(3));
        assert!(alg.structure_constant(1, 1, 1).is_zero());
        assert!(matches!(
            LieAlgebra::new(q(), labels(2), [(1, 1, v(q(), &[0, 1]))]),
            Err(Error::InvalidBracket { .. })
        ));
    }

    #[test]
    fn check_examples() {
        assert!(catalog::abelian(q(), 4).check().is_empty());
        // [e1, e2] = e1
        let two = LieAlgebra::new(q(), labels(2), [(0, 1, v(q(), &[1, 0]))]).unwrap();
        assert!(two.check().is_empty());

        // c[0][1][2] = 1, c[1][2][0] = 1, c[2][0][1] = 0. Expanding the single
        // triple by hand: [[e0,e1],e2] = [e2,e2] = 0, [[e1,e2],e0] = [e0,e0] = 0,
        // [[e2,e0],e1] = 0, so this tensor does satisfy Jacobi.
        let closed = LieAlgebra::new(q(), labels(3), [(0, 1, v(q(), &[0, 0, 1])), (1, 2, v(q(), &[1, 0, 0]))]).unwrap();
        assert!(closed.check().is_empty());

        // [e0,e1] = e2, [e0,e2] = e0: [[e2,e0],e1] = [-e0,e1] = -e2.
        let broken = LieAlgebra::new(q(), labels(3), [(0, 1, v(q(), &[0, 0, 1])), (0, 2, v(q(), &[1, 0, 0]))]).unwrap();
        let viol = broken.check();
        assert_eq!(viol, vec![JacobiViolation { i: 0, j: 1, k: 2, defect: v(q(), &[0, 0, -1]) }]);
        assert_eq!(broken.ensure_lie(), Err(Error::NotALieAlgebra(1)));
    }

    #[test]
    fn catalog_algebras_are_lie() {
        for field in [q(), Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::prime(5).unwrap()] {
            for alg in [
                catalog::abelian(field, 3),
                catalog::heisenberg(field),
                catalog::aff1(field),
                catalog::sl2(field),
                catalog::filiform4(field),
            ] {
                assert!(alg.check().is_empty(), "{alg:?}");
            }
        }
    }

    #[test]
    fn derived_examples() {
        assert!(catalog::abelian(q(), 3).derived_subalgebra().is_empty());
        assert_eq!(catalog::heisenberg(q()).derived_subalgebra(), vec![v(q(), &[0, 0, 1])]);
        assert_eq!(catalog::sl2(q()).derived_subalgebra().len(), 3);
        // char 2: [h, e] = 2e = 0, so sl2 collapses to a Heisenberg algebra.
        assert_eq!(catalog::sl2(Field::prime(2).unwrap()).derived_subalgebra().len(), 1);
    }

    fn heis_map(rows: &[&[i64]]) -> AlgebraMap {
        let h = Arc::new(catalog::heisenberg(q()));
        AlgebraMap::new(h.clone(), h, Matrix::from_i64(q(), rows)).unwrap()
    }

    #[test]
    fn homomorphism_examples() {
        let h = Arc::new(catalog::heisenberg(q()));
        assert!(AlgebraMap::identity(h.clone()).is_homomorphism());
        assert!(AlgebraMap::identity(h).is_automorphism());

        // x1 -> x2, x2 -> x1, z -> -z
        let swap = heis_map(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
        assert!(swap.is_homomorphism());
        assert!(swap.is_automorphism());

        // x1 -> x1, x2 -> x2, z -> 2z
        let bad = heis_map(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert!(!bad.is_homomorphism());
        assert_eq!(bad.homomorphism_defect(), Some((0, 1)));
        assert!(!bad.is_automorphism());

        // a homomorphism that is not invertible
        let zero = heis_map(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert!(zero.is_homomorphism());
        assert!(!zero.is_automorphism());
    }

    #[test]
    fn change_basis_permutation_preserves_lie() {
        let sl2 = catalog::sl2(q());
        let p = Matrix::from_i64(q(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let permuted = sl2.change_basis(&p, vec!["h".into(), "f".into(), "e".into()]).unwrap();
        assert!(permuted.check().is_empty());
        // new basis (h, f, e): [h, e] = 2e
        assert_eq!(permuted.basis_bracket(0, 2), v(q(), &[0, 0, 2]));
    }

    proptest! {
        #[test]
        fn bracket_is_alternating(xs in proptest::collection::vec(-4i64..=4, 3), ys in proptest::collection::vec(-4i64..=4, 3)) {
            for alg in [catalog::sl2(q()), catalog::heisenberg(q()), catalog::abelian(q(), 3)] {
                let (x, y) = (v(q(), &xs), v(q(), &ys));
                let xy = alg.bracket(&x, &y).unwrap();
                let yx = alg.bracket(&y, &x).unwrap();
                prop_assert!(vector::is_zero(&vector::add(&xy, &yx)));
                prop_assert!(vector::is_zero(&alg.bracket(&x, &x).unwrap()));
            }
        }

        #[test]
        fn derived_vectors_lie_in_bracket_image(_seed in 0u8..1) {
            for alg in [catalog::sl2(q()), catalog::heisenberg(q()), catalog::aff1(q()), catalog::filiform4(q())] {
                let brackets: Vec<Vector> = (0..alg.dim())
                    .flat_map(|i| (0..alg.dim()).map(move |j| (i, j)))
                    .map(|(i, j)| alg.basis_bracket(i, j))
                    .collect();
                let span = Matrix::from_columns(q(), alg.dim(), &brackets).unwrap();
                for d in alg.derived_subalgebra() {
                    prop_assert!(span.solve(&d).unwrap().is_some());
                }
            }
        }

        #[test]
        fn composed_automorphisms_are_automorphisms(a in 1i64..4, b in -3i64..4, c in -3i64..4) {
            // x1 -> a x1 + b x2 + c z, x2 -> x2, z -> a z is an automorphism of Heisenberg.
            let f = heis_map(&[&[a, 0, 0], &[b, 1, 0], &[c, 0, a]]);
            let swap = heis_map(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -1]]);
            prop_assert!(f.is_automorphism());
            prop_assert!(swap.after(&f).unwrap().is_automorphism());
            prop_assert!(f.after(&swap).unwrap().is_automorphism());
        }
    }
}
