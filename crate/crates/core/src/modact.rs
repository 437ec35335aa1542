//! Module structures `α: B → End(A)` on an abelian Lie algebra `A`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar, Vector};
use crate::extension::ExtensionData;
use crate::liealg::{AlgebraMap, LieAlgebra};

/// `rho[i]` is the matrix of `α(b_i)` acting on `A`.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    b: Arc<LieAlgebra>,
    a: Arc<LieAlgebra>,
    rho: Vec<Matrix>,
    /// `coboundary[k]` memoizes the matrix of `∂^k`; filled by `cohom`.
    pub(crate) coboundary: Vec<OnceLock<Matrix>>,
}

impl PartialEq for ModuleAction {
    fn eq(&self, other: &Self) -> bool {
        self.b == other.b && self.a == other.a && self.rho == other.rho
    }
}

impl Eq for ModuleAction {}

/// Failure of `α([b_i, b_j]) = [α(b_i), α(b_j)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionViolation {
    pub i: usize,
    pub j: usize,
    pub defect: Matrix,
}

impl ModuleAction {
    /// Validates shapes, fields and that `A` is abelian. Lie compatibility is
    /// reported by [`ModuleAction::check`], not enforced.
    pub fn new(b: Arc<LieAlgebra>, a: Arc<LieAlgebra>, rho: Vec<Matrix>) -> Result<Self> {
        if b.field() != a.field() {
            return Err(Error::FieldMismatch { left: b.field(), right: a.field() });
        }
        if !a.is_abelian() {
            return Err(Error::NotAbelian(a.labels().join(",")));
        }
        if rho.len() != b.dim() {
            return Err(Error::DimensionMismatch {
                context: "one action matrix per basis element of B",
                expected: b.dim(),
                found: rho.len(),
            });
        }
        for m in &rho {
            if m.field() != a.field() {
                return Err(Error::FieldMismatch { left: a.field(), right: m.field() });
            }
            if m.rows() != a.dim() || m.cols() != a.dim() {
                return Err(Error::DimensionMismatch {
                    context: "action matrix size vs dim A",
                    expected: a.dim(),
                    found: if m.rows() != a.dim() { m.rows() } else { m.cols() },
                });
            }
        }
        let coboundary = (0..=b.dim()).map(|_| OnceLock::new()).collect();
        Ok(ModuleAction { b, a, rho, coboundary })
    }

    pub fn new_checked(b: Arc<LieAlgebra>, a: Arc<LieAlgebra>, rho: Vec<Matrix>) -> Result<Self> {
        let act = Self::new(b, a, rho)?;
        match act.check().len() {
            0 => Ok(act),
            n => Err(Error::NotAModule(n)),
        }
    }

    pub fn trivial(b: Arc<LieAlgebra>, a: Arc<LieAlgebra>) -> Result<Self> {
        let zero = Matrix::zeros(a.field(), a.dim(), a.dim());
        let rho = vec![zero; b.dim()];
        Self::new(b, a, rho)
    }

    /// Adjoint action of `b` on its own underlying vector space, viewed as an
    /// abelian algebra.
    pub fn adjoint(b: Arc<LieAlgebra>) -> Self {
        let a = Arc::new(LieAlgebra::abelian(b.field(), b.labels().to_vec()));
        let rho = (0..b.dim()).map(|i| b.ad(i)).collect();
        Self::new(b, a, rho).expect("adjoint matrices have the right shape")
    }

    pub fn field(&self) -> Field {
        self.b.field()
    }

    pub fn b(&self) -> &Arc<LieAlgebra> {
        &self.b
    }

    pub fn a(&self) -> &Arc<LieAlgebra> {
        &self.a
    }

    pub fn rho(&self) -> &[Matrix] {
        &self.rho
    }

    pub fn is_trivial(&self) -> bool {
        self.rho.iter().all(Matrix::is_zero)
    }

    /// Matrix of `α(b)` for an arbitrary element `b = sum_i b_i e_i`.
    pub fn operator(&self, b: &[Scalar]) -> Result<Matrix> {
        if b.len() != self.b.dim() {
            return Err(Error::DimensionMismatch { context: "element of B", expected: self.b.dim(), found: b.len() });
        }
        let mut out = Matrix::zeros(self.field(), self.a.dim(), self.a.dim());
        for (c, m) in b.iter().zip(&self.rho) {
            if !c.is_zero() {
                out = out.checked_add(&m.scale(c))?;
            }
        }
        Ok(out)
    }

    /// `b · a`
    pub fn apply(&self, b: &[Scalar], a: &[Scalar]) -> Result<Vector> {
        self.operator(b)?.mul_vec(a)
    }

    /// Violations of `α([b_i, b_j]) = α(b_i)α(b_j) - α(b_j)α(b_i)` over basis
    /// pairs `i < j`; empty iff this is a `B`-module structure.
    pub fn check(&self) -> Vec<ActionViolation> {
        let n = self.b.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.operator(&self.b.basis_bracket(i, j)).expect("shape checked");
                let commutator = &(&self.rho[i] * &self.rho[j]) - &(&self.rho[j] * &self.rho[i]);
                let defect = &lhs - &commutator;
                if !defect.is_zero() {
                    out.push(ActionViolation { i, j, defect });
                }
            }
        }
        out
    }

    /// The action `b ↦ α(φ(b))`.
    pub fn twist(&self, phi: &AlgebraMap) -> Result<ModuleAction> {
        if phi.source().as_ref() != self.b.as_ref() || !phi.is_automorphism() {
            return Err(Error::NotAnAutomorphism("phi must be an automorphism of B"));
        }
        let rho = phi.matrix().columns().iter().map(|col| self.operator(col)).collect::<Result<Vec<_>>>()?;
        ModuleAction::new(self.b.clone(), self.a.clone(), rho)
    }
}

/// The action `b · a = [s(b), a]` of an abelian extension, pulled back to
/// `A`-coordinates through `inj`.
///
/// The same computation is repeated with a second section `s + inj∘J` (`J`
/// all ones) and the two results must agree.
pub fn induced_action(ext: &ExtensionData) -> Result<ModuleAction> {
    let act = induced_action_with_section(ext.inj(), ext.proj().target(), ext.sect())?;
    let a = ext.inj().source();
    if a.dim() > 0 && ext.b().dim() > 0 {
        let field = act.field();
        let shift = Matrix::from_fn(field, a.dim(), ext.b().dim(), |_, _| field.one());
        let other = ext.sect().matrix().checked_add(&ext.inj().matrix().checked_mul(&shift)?)?;
        let other = AlgebraMap::new(ext.b().clone(), ext.l().clone(), other)?;
        let again = induced_action_with_section(ext.inj(), ext.b(), &other)?;
        if again != act {
            return Err(Error::Consistency("induced action depends on the section".into()));
        }
    }
    Ok(act)
}

/// [`induced_action`] for an explicit section, with no cross-check.
pub fn induced_action_with_section(inj: &AlgebraMap, b: &Arc<LieAlgebra>, sect: &AlgebraMap) -> Result<ModuleAction> {
    let a = inj.source();
    let l = inj.target();
    let inj_cols = inj.matrix().columns();
    let mut rho = Vec::with_capacity(b.dim());
    for sb in sect.matrix().columns() {
        let images = inj_cols.iter().map(|ia| l.bracket(&sb, ia)).collect::<Result<Vec<_>>>()?;
        let images = Matrix::from_columns(l.field(), l.dim(), &images)?;
        let m = inj
            .matrix()
            .solve_matrix(&images)?
            .ok_or_else(|| Error::MalformedExtension("[s(b), i(a)] leaves the image of i".into()))?;
        rho.push(m);
    }
    ModuleAction::new(b.clone(), a.clone(), rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn trivial_action_passes() {
        let b = Arc::new(catalog::sl2(q()));
        let a = Arc::new(catalog::abelian(q(), 2));
        let act = ModuleAction::trivial(b, a).unwrap();
        assert!(act.check().is_empty());
        assert!(act.is_trivial());
    }

    #[test]
    fn one_dimensional_scalar_action() {
        let act = ModuleAction::new(
            Arc::new(catalog::abelian(q(), 1)),
            Arc::new(catalog::abelian(q(), 1)),
            vec![Matrix::from_i64(q(), &[&[5]])],
        )
        .unwrap();
        assert!(act.check().is_empty());
    }

    #[test]
    fn adjoint_actions_are_modules() {
        for field in [q(), Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
            for alg in [
                catalog::sl2(field),
                catalog::heisenberg(field),
                catalog::aff1(field),
                catalog::filiform4(field),
                catalog::abelian(field, 2),
            ] {
                assert!(ModuleAction::adjoint(Arc::new(alg)).check().is_empty());
            }
        }
    }

    #[test]
    fn incompatible_action_is_reported() {
        // aff(1) acting on a 1-dim space with α(e) = 1 violates α([h, e]) = [α(h), α(e)] = 0.
        let act = ModuleAction::new(
            Arc::new(catalog::aff1(q())),
            Arc::new(catalog::abelian(q(), 1)),
            vec![Matrix::from_i64(q(), &[&[0]]), Matrix::from_i64(q(), &[&[1]])],
        )
        .unwrap();
        let viol = act.check();
        assert_eq!(viol.len(), 1);
        assert_eq!((viol[0].i, viol[0].j), (0, 1));
        assert_eq!(viol[0].defect, Matrix::from_i64(q(), &[&[1]]));
    }

    #[test]
    fn shape_errors() {
        let b = Arc::new(catalog::abelian(q(), 2));
        let a = Arc::new(catalog::abelian(q(), 2));
        let r = ModuleAction::new(b.clone(), a.clone(), vec![Matrix::identity(q(), 2)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = ModuleAction::new(b.clone(), a, vec![Matrix::identity(q(), 3), Matrix::identity(q(), 3)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = ModuleAction::trivial(b, Arc::new(catalog::heisenberg(q())));
        assert!(matches!(r, Err(Error::NotAbelian(_))));
    }

    #[test]
    fn twist_examples() {
        let b = Arc::new(catalog::abelian(q(), 1));
        let a = Arc::new(catalog::abelian(q(), 1));
        let act = ModuleAction::new(b.clone(), a.clone(), vec![Matrix::from_i64(q(), &[&[1]])]).unwrap();
        assert_eq!(act.twist(&AlgebraMap::identity(b.clone())).unwrap(), act);

        let phi = AlgebraMap::new(b.clone(), b.clone(), Matrix::from_i64(q(), &[&[2]])).unwrap();
        let twisted = act.twist(&phi).unwrap();
        assert_eq!(twisted.rho(), &[Matrix::from_i64(q(), &[&[2]])]);
        assert!(twisted.check().is_empty());

        let trivial = ModuleAction::trivial(b.clone(), a).unwrap();
        assert_eq!(trivial.twist(&phi).unwrap(), trivial);

        let singular = AlgebraMap::new(b.clone(), b, Matrix::from_i64(q(), &[&[0]])).unwrap();
        assert!(matches!(act.twist(&singular), Err(Error::NotAnAutomorphism(_))));
    }

    #[test]
    fn twist_composes() {
        let sl2 = Arc::new(catalog::sl2(q()));
        let act = ModuleAction::adjoint(sl2.clone());
        // Chevalley involution e -> -f, h -> -h, f -> -e and a diagonal torus element.
        let omega =
            AlgebraMap::new(sl2.clone(), sl2.clone(), Matrix::from_i64(q(), &[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]))
                .unwrap();
        let two = q().from_i64(2);
        let half = q().fraction(1, 2).unwrap();
        let torus = AlgebraMap::new(
            sl2.clone(),
            sl2.clone(),
            Matrix::from_rows(
                q(),
                vec![
                    vec![two, q().zero(), q().zero()],
                    vec![q().zero(), q().one(), q().zero()],
                    vec![q().zero(), q().zero(), half],
                ],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(omega.is_automorphism() && torus.is_automorphism());
        let composite = omega.after(&torus).unwrap();
        assert_eq!(act.twist(&composite).unwrap(), act.twist(&omega).unwrap().twist(&torus).unwrap());
    }
}
