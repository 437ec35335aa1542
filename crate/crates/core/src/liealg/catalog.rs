//! Small built-in algebras used as the canonical test corpus.

use super::LieAlgebra;
use crate::exactlin::{vector, Field, Vector};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn v(field: Field, n: usize, terms: &[(usize, i64)]) -> Vector {
    let mut out = vector::zero(field, n);
    for &(k, c) in terms {
        out[k] = field.from_i64(c);
    }
    out
}

/// `n`-dimensional abelian algebra with basis `e1..en`.
pub fn abelian(field: Field, n: usize) -> LieAlgebra {
    LieAlgebra::abelian(field, (1..=n).map(|i| format!("e{i}")).collect())
}

/// Heisenberg algebra: basis `x1, x2, z` with `[x1, x2] = z`.
pub fn heisenberg(field: Field) -> LieAlgebra {
    LieAlgebra::new(field, names(&["x1", "x2", "z"]), [(0, 1, v(field, 3, &[(2, 1)]))]).expect("valid")
}

/// Two-dimensional nonabelian algebra aff(1): basis `h, e` with `[h, e] = e`.
pub fn aff1(field: Field) -> LieAlgebra {
    LieAlgebra::new(field, names(&["h", "e"]), [(0, 1, v(field, 2, &[(1, 1)]))]).expect("valid")
}

/// sl(2): basis `e, h, f` with `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
pub fn sl2(field: Field) -> LieAlgebra {
    LieAlgebra::new(
        field,
        names(&["e", "h", "f"]),
        [(1, 0, v(field, 3, &[(0, 2)])), (1, 2, v(field, 3, &[(2, -2)])), (0, 2, v(field, 3, &[(1, 1)]))],
    )
    .expect("valid")
}

/// Four-dimensional filiform algebra: `[e1, e2] = e3`, `[e1, e3] = e4`.
///
/// `e4` spans the center and the quotient by it is the Heisenberg algebra.
pub fn filiform4(field: Field) -> LieAlgebra {
    LieAlgebra::new(
        field,
        names(&["e1", "e2", "e3", "e4"]),
        [(0, 1, v(field, 4, &[(2, 1)])), (0, 2, v(field, 4, &[(3, 1)]))],
    )
    .expect("valid")
}
