//! Free 2-step nilpotent Lie algebras `L_{n,2}` and the exterior-square
//! criterion.
//!
//! Basis: `x_1, ..., x_n`, then `z_{i,j}` for `j < i` ordered
//! `z_{2,1} < z_{3,1} < z_{3,2} < z_{4,1} < ...` (by `i`, then `j`).
//! Brackets: `[x_i, x_j] = z_{i,j}` for `j < i`, so `[x_j, x_i] = -z_{i,j}`;
//! every bracket with a `z` vanishes.
//!
//! The derived subalgebra `A = span{z}` is central, `B = L / A` is abelian
//! on `x̄_1, ..., x̄_n`, and the section is `s(x̄_i) = x_i`. An automorphism
//! `φ` of `B` with `φ(x̄_i) = Σ_k a_{ik} x̄_k` extends to `L` only with
//! `z_{i,j} ↦ Σ_{k>l} (a_{ik} a_{jl} - a_{il} a_{jk}) z_{k,l}`, so a pair
//! `(θ, φ)` lifts iff `θ = Λ²φ` in these bases.
//!
//! Matrices act on column vectors, hence `a_{ik}` is the entry `M[k][i]`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{vector, Field, Matrix};
use crate::extension::ExtensionData;
use crate::liealg::{AlgebraMap, LieAlgebra};
use crate::lifting::AutPair;

/// Position of `z_{i,j}` (`j < i`, zero-based) in the z-ordering.
pub fn z_index(i: usize, j: usize) -> usize {
    debug_assert!(j < i);
    i * (i - 1) / 2 + j
}

/// `(i, j)` with `j < i` for every z-index, in order.
pub fn z_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect()
}

/// `n(n-1)/2`.
pub fn derived_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `L_{n,2}` with its central extension `0 → L' → L → L^ab → 0`.
#[derive(Clone, Debug)]
pub struct FreeNil2 {
    n: usize,
    extension: ExtensionData,
}

impl FreeNil2 {
    pub fn build(field: Field, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionMismatch {
                context: "free nilpotent rank (at least 2)",
                expected: 2,
                found: n,
            });
        }
        let m = derived_dim(n);
        let dim = n + m;
        let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        labels.extend(z_pairs(n).iter().map(|&(i, j)| format!("z{}_{}", i + 1, j + 1)));
        // stored as [x_j, x_i] = -z_{i,j} for j < i
        let brackets = z_pairs(n).into_iter().map(|(i, j)| {
            let mut v = vector::zero(field, dim);
            v[n + z_index(i, j)] = -field.one();
            (j, i, v)
        });
        let l = Arc::new(LieAlgebra::new(field, labels.clone(), brackets)?);
        let a = Arc::new(LieAlgebra::abelian(field, labels[n..].to_vec()));
        let b = Arc::new(LieAlgebra::abelian(field, (1..=n).map(|i| format!("x{i}_bar")).collect()));
        let unit = |r: usize, c: usize| if r == c { field.one() } else { field.zero() };
        let inj = AlgebraMap::new(a, l.clone(), Matrix::from_fn(field, dim, m, |r, c| unit(r, n + c)))?;
        let proj = AlgebraMap::new(l.clone(), b.clone(), Matrix::from_fn(field, n, dim, unit))?;
        let sect = AlgebraMap::new(b, l, Matrix::from_fn(field, dim, n, unit))?;
        let extension = ExtensionData::new(inj, proj, Some(sect))?;
        Ok(FreeNil2 { n, extension })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        self.extension.l()
    }

    pub fn extension(&self) -> &ExtensionData {
        &self.extension
    }

    /// `(θ, φ)` as automorphisms of `A = L'` and `B = L^ab`.
    pub fn pair(&self, theta: Matrix, phi: Matrix) -> Result<AutPair> {
        check_shapes(&theta, &phi, self.n)?;
        AutPair::from_matrices(self.extension.a(), self.extension.b(), theta, phi)
    }

    /// `γ` with `γ(x_i) = s(φ(x̄_i))` and `γ(z) = θ(z)`, for `θ = Λ²φ`.
    pub fn splitting_section(&self, pair: &AutPair) -> Result<AlgebraMap> {
        if !inducible_nil2(pair.theta().matrix(), pair.phi().matrix(), self.n)? {
            return Err(Error::NotInducible);
        }
        let gamma = pair.phi().matrix().direct_sum(pair.theta().matrix())?;
        let gamma = AlgebraMap::new(self.algebra().clone(), self.algebra().clone(), gamma)?;
        if !gamma.is_automorphism() {
            return Err(Error::Consistency("φ ⊕ Λ²φ is not an automorphism".into()));
        }
        Ok(gamma)
    }
}

/// The matrix of `z_{i,j} ↦ [φ(x_i), φ(x_j)]` in the z-ordering: entry
/// `((k,l), (i,j))` is `M[k][i] M[l][j] - M[l][i] M[k][j]`.
pub fn exterior_square(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let pairs = z_pairs(m.rows());
    Ok(Matrix::from_fn(m.field(), pairs.len(), pairs.len(), |r, c| {
        let (k, l) = pairs[r];
        let (i, j) = pairs[c];
        &(m.get(k, i) * m.get(l, j)) - &(m.get(l, i) * m.get(k, j))
    }))
}

fn check_shapes(theta: &Matrix, phi: &Matrix, n: usize) -> Result<()> {
    let m = derived_dim(n);
    if phi.rows() != n || phi.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "phi size vs rank",
            expected: n,
            found: phi.rows().max(phi.cols()),
        });
    }
    if theta.rows() != m || theta.cols() != m {
        return Err(Error::DimensionMismatch {
            context: "theta size vs n(n-1)/2",
            expected: m,
            found: theta.rows().max(theta.cols()),
        });
    }
    Ok(())
}

/// `θ = Λ²φ`, computed from minors alone.
pub fn inducible_nil2(theta: &Matrix, phi: &Matrix, n: usize) -> Result<bool> {
    check_shapes(theta, phi, n)?;
    if theta.field() != phi.field() {
        return Err(Error::FieldMismatch { left: theta.field(), right: phi.field() });
    }
    if !theta.is_invertible() || !phi.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(theta == &exterior_square(phi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom;
    use crate::liealg::catalog;
    use crate::lifting::{is_compatible, tau, try_lift};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rationals
    }

    fn random_matrix(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |_, _| field.from_i64(rng.gen_range(-3..=3)))
    }

    fn random_invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Matrix {
        loop {
            let m = random_matrix(rng, field, n);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn build_examples() {
        for (n, dim, derived) in [(2, 3, 1), (3, 6, 3), (4, 10, 6)] {
            let f = FreeNil2::build(q(), n).unwrap();
            assert_eq!(f.algebra().dim(), dim);
            assert_eq!(f.algebra().derived_subalgebra().len(), derived);
            assert!(f.algebra().check().is_empty());
            assert!(f.extension().action().is_trivial());
        }
        assert!(matches!(FreeNil2::build(q(), 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn brackets_follow_z_order() {
        let f = FreeNil2::build(q(), 4).unwrap();
        let l = f.algebra();
        assert_eq!(&l.labels()[4..], ["z2_1", "z3_1", "z3_2", "z4_1", "z4_2", "z4_3"]);
        for (i, j) in z_pairs(4) {
            let mut z = vector::zero(q(), 10);
            z[4 + z_index(i, j)] = q().one();
            assert_eq!(l.basis_bracket(i, j), z);
            for k in 0..10 {
                assert!(vector::is_zero(&l.bracket(&l.basis_bracket(i, j), &vector::unit(q(), 10, k)).unwrap()));
            }
        }
    }

    #[test]
    fn cocycle_is_the_bracket() {
        let f = FreeNil2::build(q(), 3).unwrap();
        let mu = f.extension().cocycle();
        for (i, j) in z_pairs(3) {
            // μ(x̄_i, x̄_j) = z_{i,j}
            let v = mu.eval(&[vector::unit(q(), 3, i), vector::unit(q(), 3, j)]).unwrap();
            assert_eq!(v, vector::unit(q(), 3, z_index(i, j)));
        }
    }

    #[test]
    fn rank_two_is_heisenberg() {
        let f = FreeNil2::build(q(), 2).unwrap();
        // z ↦ -z identifies [x1, x2] = -z_{2,1} with the catalog's [x1, x2] = z
        let p = Matrix::from_i64(q(), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let relabeled = f.algebra().change_basis(&p, vec!["x1".into(), "x2".into(), "z".into()]).unwrap();
        assert_eq!(relabeled, catalog::heisenberg(q()));
    }

    #[test]
    fn exterior_square_examples() {
        for n in 2..=4 {
            assert!(exterior_square(&Matrix::identity(q(), n)).unwrap().is_identity());
        }
        let m = Matrix::from_i64(q(), &[&[2, 3], &[5, 7]]);
        assert_eq!(exterior_square(&m).unwrap(), Matrix::from_i64(q(), &[&[-1]]));
        let d = Matrix::from_i64(q(), &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(exterior_square(&d).unwrap(), Matrix::from_i64(q(), &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 6]]));
        assert!(matches!(exterior_square(&Matrix::zeros(q(), 2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn exterior_square_matches_bracket_expansion() {
        // oracle: expand [φ x_i, φ x_j] with the bracket of L_{3,2} directly
        let f = FreeNil2::build(q(), 3).unwrap();
        let l = f.algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, q(), 3);
            let lifted = m.direct_sum(&Matrix::zeros(q(), 3, 3)).unwrap();
            let ext = exterior_square(&m).unwrap();
            for (c, &(i, j)) in z_pairs(3).iter().enumerate() {
                let br = l.bracket(&lifted.column(i), &lifted.column(j)).unwrap();
                assert_eq!(br[3..].to_vec(), ext.column(c));
            }
        }
    }

    proptest! {
        #[test]
        fn functorial(n in 2usize..=5, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, q(), n);
            let k = random_matrix(&mut rng, q(), n);
            let lhs = exterior_square(&(&m * &k)).unwrap();
            let rhs = &exterior_square(&m).unwrap() * &exterior_square(&k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn determinant_power(n in 2usize..=4, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_invertible(&mut rng, q(), n);
            let d = m.determinant().unwrap();
            prop_assert_eq!(exterior_square(&m).unwrap().determinant().unwrap(), d.pow(n as u32 - 1));
        }
    }

    #[test]
    fn inducible_examples() {
        let phi = Matrix::from_i64(q(), &[&[1, 1], &[0, 3]]);
        let det = phi.determinant().unwrap();
        assert!(inducible_nil2(&Matrix::from_fn(q(), 1, 1, |_, _| det.clone()), &phi, 2).unwrap());
        assert!(!inducible_nil2(&Matrix::from_fn(q(), 1, 1, |_, _| &det + &q().one()), &phi, 2).unwrap());

        let d = Matrix::from_i64(q(), &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert!(!inducible_nil2(&Matrix::identity(q(), 3), &d, 3).unwrap());
        assert!(inducible_nil2(&exterior_square(&d).unwrap(), &d, 3).unwrap());

        assert_eq!(inducible_nil2(&Matrix::from_i64(q(), &[&[0]]), &phi, 2).unwrap_err(), Error::NotInvertible);
        assert!(matches!(inducible_nil2(&Matrix::identity(q(), 2), &phi, 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(inducible_nil2(&Matrix::identity(q(), 3), &phi, 3), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn agrees_with_try_lift_over_gf5() {
        let field = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3] {
            let f = FreeNil2::build(field, n).unwrap();
            let h2 = cohom::cohomology(f.extension().action(), 2).unwrap();
            for round in 0..30 {
                let phi = random_invertible(&mut rng, field, n);
                // half the rounds probe the exterior square itself
                let theta = if round % 2 == 0 {
                    exterior_square(&phi).unwrap()
                } else {
                    random_invertible(&mut rng, field, derived_dim(n))
                };
                let pair = f.pair(theta.clone(), phi.clone()).unwrap();
                assert!(is_compatible(&pair, f.extension().action()));
                let closed = inducible_nil2(&theta, &phi, n).unwrap();
                let engine = crate::lifting::try_lift_in(&h2, &pair, f.extension()).unwrap().is_inducible();
                assert_eq!(closed, engine, "n = {n}, θ = {theta}, φ = {phi}");
            }
        }
    }

    #[test]
    fn rank_two_criterion_is_the_determinant() {
        let f = FreeNil2::build(q(), 2).unwrap();
        let phi = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        assert!(try_lift(&f.pair(Matrix::from_i64(q(), &[&[1]]), phi.clone()).unwrap(), f.extension())
            .unwrap()
            .is_inducible());
        let id = Matrix::identity(q(), 2);
        assert!(!try_lift(&f.pair(Matrix::from_i64(q(), &[&[2]]), id).unwrap(), f.extension()).unwrap().is_inducible());
    }

    #[test]
    fn splitting_section_examples() {
        let f = FreeNil2::build(q(), 2).unwrap();
        let id = f.pair(Matrix::identity(q(), 1), Matrix::identity(q(), 2)).unwrap();
        assert!(f.splitting_section(&id).unwrap().matrix().is_identity());

        let p = f.pair(Matrix::from_i64(q(), &[&[1]]), Matrix::from_i64(q(), &[&[1, 0], &[1, 1]])).unwrap();
        let g = f.splitting_section(&p).unwrap();
        // x1 ↦ x1 + x2, x2 ↦ x2, z ↦ z
        assert_eq!(g.matrix(), &Matrix::from_i64(q(), &[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(tau(&g, f.extension()).unwrap(), p);

        let bad = f.pair(Matrix::from_i64(q(), &[&[2]]), Matrix::identity(q(), 2)).unwrap();
        assert_eq!(f.splitting_section(&bad).unwrap_err(), Error::NotInducible);
    }

    #[test]
    fn splitting_section_is_multiplicative_over_gf3() {
        let field = Field::prime(3).unwrap();
        let f = FreeNil2::build(field, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (m1, m2) = (random_invertible(&mut rng, field, 2), random_invertible(&mut rng, field, 2));
            let p1 = f.pair(exterior_square(&m1).unwrap(), m1).unwrap();
            let p2 = f.pair(exterior_square(&m2).unwrap(), m2).unwrap();
            let lhs = f.splitting_section(&p1.compose(&p2).unwrap()).unwrap();
            let rhs = f.splitting_section(&p1).unwrap().after(&f.splitting_section(&p2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
