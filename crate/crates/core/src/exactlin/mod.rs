//! Exact scalars (rationals, prime fields) and dense exact linear algebra.
//!
//! Vectors are columns and maps compose as matrix products: `M2 * M1` applies
//! `M1` first. Every routine here is exact; there is no floating point in the
//! crate.

mod matrix;
mod scalar;

pub use matrix::{vector, Matrix, Rref, Vector};
pub use scalar::{Field, Prime, Scalar};

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(q(), 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);

        let m = Matrix::from_i64(q(), &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);

        let z = Matrix::zeros(q(), 3, 3);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn mixed_field_rows_rejected() {
        let rows = vec![vec![q().one(), gf(2).one()]];
        assert!(matches!(Matrix::from_rows(q(), rows), Err(crate::Error::FieldMismatch { .. })));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(q(), 3).kernel_basis().is_empty());

        // GF(2): enumerate all four vectors of GF(2)^2 to find the kernel of [1 1].
        let f = gf(2);
        let m = Matrix::from_i64(f, &[&[1, 1]]);
        let brute: Vec<Vector> = (0..4u64)
            .map(|bits| vec![f.from_u64(bits & 1), f.from_u64(bits >> 1)])
            .filter(|v| vector::is_zero(&m.mul_vec(v).unwrap()))
            .collect();
        assert_eq!(brute.len(), 2);
        let kernel = m.kernel_basis();
        assert_eq!(kernel, vec![vec![f.one(), f.one()]]);
        assert!(brute.contains(&kernel[0]));

        assert_eq!(Matrix::zeros(q(), 2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 2);
        let rhs = vec![q().from_i64(3), q().from_i64(5)];
        assert_eq!(id.solve(&rhs).unwrap(), Some(rhs.clone()));

        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let rhs = vec![q().from_i64(1), q().from_i64(3)];
        assert_eq!(m.rank(), 1);
        assert_eq!(m.hstack(&Matrix::from_columns(q(), 2, std::slice::from_ref(&rhs)).unwrap()).unwrap().rank(), 2);
        assert_eq!(m.solve(&rhs).unwrap(), None);

        let f = gf(2);
        let m = Matrix::from_i64(f, &[&[1, 1]]);
        let x = m.solve(&[f.zero()]).unwrap().unwrap();
        let valid = [vec![f.zero(), f.zero()], vec![f.one(), f.one()]];
        assert!(valid.contains(&x));

        assert!(matches!(id.solve(&[q().one()]), Err(crate::Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invert_examples() {
        let m = Matrix::from_i64(q(), &[&[2]]);
        assert_eq!(m.invert().unwrap(), Some(Matrix::from_rows(q(), vec![vec![q().fraction(1, 2).unwrap()]]).unwrap()));

        let m = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]);
        let inv = m.invert().unwrap().unwrap();
        assert_eq!(inv, Matrix::from_i64(q(), &[&[1, -1], &[0, 1]]));
        assert!((&m * &inv).is_identity());

        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.invert().unwrap(), None);

        assert!(matches!(Matrix::zeros(q(), 2, 3).invert(), Err(crate::Error::NotSquare { .. })));
        assert_eq!(Matrix::identity(q(), 0).invert().unwrap(), Some(Matrix::identity(q(), 0)));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(m: &Matrix) -> Scalar {
            let n = m.rows();
            if n == 0 {
                return m.field().one();
            }
            let mut acc = m.field().zero();
            for j in 0..n {
                let minor = Matrix::from_fn(m.field(), n - 1, n - 1, |r, c| {
                    m.get(r + 1, if c < j { c } else { c + 1 }).clone()
                });
                let term = m.get(0, j) * &cofactor(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        let m = Matrix::from_i64(q(), &[&[0, 2, 1], &[3, -1, 4], &[5, 0, -2]]);
        assert_eq!(m.determinant().unwrap(), cofactor(&m));
        let m = Matrix::from_i64(gf(3), &[&[0, 2, 1, 1], &[1, 1, 0, 2], &[2, 0, 2, 1], &[1, 2, 2, 0]]);
        assert_eq!(m.determinant().unwrap(), cofactor(&m));
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            Matrix::from_fn(Field::Rationals, rows, cols, |i, j| Field::Rationals.from_i64(v[i * cols + j]))
        })
    }

    fn arb_gf3_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0i64..3, rows * cols).prop_map(move |v| {
            let f = Field::prime(3).unwrap();
            Matrix::from_fn(f, rows, cols, |i, j| f.from_i64(v[i * cols + j]))
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_map_to_zero(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_matrix(r, c))) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(kernel.len() + m.rank(), m.cols());
            for v in kernel {
                prop_assert!(vector::is_zero(&m.mul_vec(&v).unwrap()));
            }
        }

        #[test]
        fn rref_is_idempotent(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| arb_gf3_matrix(r, c))) {
            let once = m.rref().matrix;
            prop_assert_eq!(once.rref().matrix, once);
        }

        #[test]
        fn solve_recovers_consistent_rhs(
            m in arb_matrix(3, 4),
            x in proptest::collection::vec(-5i64..=5, 4),
        ) {
            let x: Vector = x.into_iter().map(|v| Field::Rationals.from_i64(v)).collect();
            let rhs = m.mul_vec(&x).unwrap();
            let sol = m.solve(&rhs).unwrap().expect("consistent system");
            prop_assert_eq!(m.mul_vec(&sol).unwrap(), rhs);
        }

        #[test]
        fn inverse_is_two_sided(m in arb_matrix(3, 3)) {
            match m.invert().unwrap() {
                Some(inv) => {
                    prop_assert!((&m * &inv).is_identity());
                    prop_assert!((&inv * &m).is_identity());
                    prop_assert!(!m.determinant().unwrap().is_zero());
                }
                None => prop_assert!(m.determinant().unwrap().is_zero()),
            }
        }

        #[test]
        fn fraction_sums_are_canonical(a in -20i64..20, b in 1i64..20, c in -20i64..20, d in 1i64..20) {
            let f = Field::Rationals;
            let lhs = f.fraction(a, b).unwrap() + f.fraction(c, d).unwrap();
            let rhs = f.fraction(a * d + c * b, b * d).unwrap();
            prop_assert_eq!(lhs.to_string(), rhs.to_string());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
