//! Lifting automorphism pairs `(θ, φ) ∈ Aut(A) × Aut(B)` through an abelian
//! extension `0 → A → L → B → 0`.
//!
//! Coordinates: every `l ∈ L` is uniquely `inj(a) + s(b)`, and
//! [`ExtensionData::coordinates`] is the matrix `E` of `(a, b) ↦ inj(a) + s(b)`.
//! An automorphism `γ` preserving `inj(A)` is block upper triangular in these
//! coordinates:
//!
//! ```text
//! E⁻¹ γ E = [ θ  λ ]
//!           [ 0  φ ]
//! ```
//!
//! `τ(γ) = (θ, φ)`. Conversely `γ` given by such a block matrix is a
//! homomorphism iff `(θ, φ)` is compatible with the action and
//! `μ_{θ,φ} = ∂(λ φ⁻¹)`, where `μ_{θ,φ} = θ μ(φ⁻¹·, φ⁻¹·) - μ`.

pub mod enumerate;

use std::sync::Arc;

use num_bigint::BigUint;

use crate::cohom::{self, Cochain, CohomologyClass, CohomologySpace};
use crate::error::{Error, Result};
use crate::exactlin::Matrix;
use crate::extension::ExtensionData;
use crate::liealg::{AlgebraMap, LieAlgebra};
use crate::modact::ModuleAction;

pub use enumerate::{
    enumerate_aut, enumerate_aut_a, enumerate_gl, exactness_audit, ExactnessLedger, ENUMERATION_LIMIT,
    MAX_ENUMERATION_DIM,
};

/// `(θ, φ)` with both components automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutPair {
    theta: AlgebraMap,
    phi: AlgebraMap,
}

impl AutPair {
    pub fn new(theta: AlgebraMap, phi: AlgebraMap) -> Result<Self> {
        if theta.source() != theta.target() || !theta.is_automorphism() {
            return Err(Error::NotAnAutomorphism("theta"));
        }
        if phi.source() != phi.target() || !phi.is_automorphism() {
            return Err(Error::NotAnAutomorphism("phi"));
        }
        if theta.matrix().field() != phi.matrix().field() {
            return Err(Error::FieldMismatch { left: theta.matrix().field(), right: phi.matrix().field() });
        }
        Ok(AutPair { theta, phi })
    }

    /// Builds a pair from bare matrices over the algebras `a` and `b`.
    pub fn from_matrices(a: &Arc<LieAlgebra>, b: &Arc<LieAlgebra>, theta: Matrix, phi: Matrix) -> Result<Self> {
        Self::new(AlgebraMap::new(a.clone(), a.clone(), theta)?, AlgebraMap::new(b.clone(), b.clone(), phi)?)
    }

    pub fn identity(a: &Arc<LieAlgebra>, b: &Arc<LieAlgebra>) -> Self {
        AutPair { theta: AlgebraMap::identity(a.clone()), phi: AlgebraMap::identity(b.clone()) }
    }

    pub fn theta(&self) -> &AlgebraMap {
        &self.theta
    }

    pub fn phi(&self) -> &AlgebraMap {
        &self.phi
    }

    /// `(θ1 θ2, φ1 φ2)`: `other` is applied first.
    pub fn compose(&self, other: &AutPair) -> Result<AutPair> {
        Ok(AutPair { theta: self.theta.after(&other.theta)?, phi: self.phi.after(&other.phi)? })
    }

    pub fn inverse(&self) -> Result<AutPair> {
        Ok(AutPair { theta: self.theta.inverse()?, phi: self.phi.inverse()? })
    }

    fn check_against(&self, act: &ModuleAction) -> Result<()> {
        if self.theta.source() != act.a() {
            return Err(Error::DimensionMismatch {
                context: "theta vs module",
                expected: act.a().dim(),
                found: self.theta.source().dim(),
            });
        }
        if self.phi.source() != act.b() {
            return Err(Error::DimensionMismatch {
                context: "phi vs acting algebra",
                expected: act.b().dim(),
                found: self.phi.source().dim(),
            });
        }
        Ok(())
    }
}

/// An automorphism `γ` of `L` preserving `inj(A)` with `τ(γ)` the lifted
/// pair, and the off-diagonal block `λ: B → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftWitness {
    pub gamma: AlgebraMap,
    pub lambda: Matrix,
}

/// Result of [`try_lift`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    /// The pair is induced by `witness.gamma`.
    Inducible(LiftWitness),
    /// Compatible, but the Wells class is nonzero.
    Obstructed { class: CohomologyClass },
    /// `α(φ(b_i)) ≠ θ α(b_i) θ⁻¹` at this basis index.
    Incompatible { basis_index: usize },
}

impl LiftOutcome {
    pub fn is_inducible(&self) -> bool {
        matches!(self, LiftOutcome::Inducible(_))
    }

    pub fn witness(&self) -> Option<&LiftWitness> {
        match self {
            LiftOutcome::Inducible(w) => Some(w),
            _ => None,
        }
    }
}

/// `E [[top_left, top_right], [0, bottom_right]] E⁻¹` as an endomorphism of `L`.
fn from_blocks(
    ext: &ExtensionData,
    top_left: &Matrix,
    top_right: &Matrix,
    bottom_right: &Matrix,
) -> Result<AlgebraMap> {
    let (da, db) = (ext.a().dim(), ext.b().dim());
    let field = ext.l().field();
    let c = Matrix::from_fn(field, da + db, da + db, |r, col| match (r < da, col < da) {
        (true, true) => top_left.get(r, col).clone(),
        (true, false) => top_right.get(r, col - da).clone(),
        (false, true) => field.zero(),
        (false, false) => bottom_right.get(r - da, col - da).clone(),
    });
    let gamma = ext.coordinates().checked_mul(&c)?.checked_mul(ext.coordinates_inverse())?;
    AlgebraMap::new(ext.l().clone(), ext.l().clone(), gamma)
}

/// `E⁻¹ γ E`, the matrix of `γ` in `(a, b)` coordinates.
pub fn block_form(gamma: &AlgebraMap, ext: &ExtensionData) -> Result<Matrix> {
    ext.coordinates_inverse().checked_mul(gamma.matrix())?.checked_mul(ext.coordinates())
}

/// `τ(γ) = (γ|_A, p γ s)` for `γ ∈ Aut(L)` preserving `inj(A)`.
pub fn tau(gamma: &AlgebraMap, ext: &ExtensionData) -> Result<AutPair> {
    if gamma.source() != ext.l() || gamma.target() != ext.l() || !gamma.is_automorphism() {
        return Err(Error::NotAnAutomorphism("gamma"));
    }
    let (da, n) = (ext.a().dim(), ext.l().dim());
    let c = block_form(gamma, ext)?;
    if !c.submatrix(da..n, 0..da).is_zero() {
        return Err(Error::NotInAutA);
    }
    let theta = c.submatrix(0..da, 0..da);
    let phi = ext.proj().after(gamma)?.after(ext.sect())?;
    if phi.matrix() != &c.submatrix(da..n, da..n) {
        return Err(Error::Consistency("p γ s disagrees with the block form".into()));
    }
    AutPair::new(AlgebraMap::new(ext.a().clone(), ext.a().clone(), theta)?, phi)
}

/// First `i` with `α(φ(b_i)) θ ≠ θ α(b_i)`, if any.
pub fn compatibility_defect(pair: &AutPair, act: &ModuleAction) -> Result<Option<usize>> {
    pair.check_against(act)?;
    let theta = pair.theta.matrix();
    for i in 0..act.b().dim() {
        let lhs = act.operator(&pair.phi.matrix().column(i))?.checked_mul(theta)?;
        let rhs = theta.checked_mul(&act.rho()[i])?;
        if lhs != rhs {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `α(φ(b)) = θ α(b) θ⁻¹` for every `b ∈ B`.
pub fn is_compatible(pair: &AutPair, act: &ModuleAction) -> bool {
    matches!(compatibility_defect(pair, act), Ok(None))
}

fn require_compatible(pair: &AutPair, act: &ModuleAction) -> Result<()> {
    match compatibility_defect(pair, act)? {
        Some(i) => Err(Error::IncompatiblePair(i)),
        None => Ok(()),
    }
}

/// `^{(θ,φ)}ν(b_1, ..., b_k) = θ ν(φ⁻¹ b_1, ..., φ⁻¹ b_k)`.
pub fn act_on_cochain(pair: &AutPair, nu: &Cochain) -> Result<Cochain> {
    let act = nu.action();
    require_compatible(pair, act)?;
    let phi_inv = pair.phi.matrix().invert()?.ok_or(Error::NotInvertible)?;
    let cols = phi_inv.columns();
    let theta = pair.theta.matrix();
    let mut err = None;
    let out = Cochain::from_fn(act.clone(), nu.degree(), |t| {
        let args: Vec<_> = t.iter().map(|&i| cols[i].clone()).collect();
        match nu.eval(&args).and_then(|v| theta.mul_vec(&v)) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                vec![act.field().zero(); act.a().dim()]
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// The class of `^{(θ,φ)}ν` for a representative `ν` of `class`.
pub fn act_on_class(pair: &AutPair, class: &CohomologyClass, space: &CohomologySpace) -> Result<CohomologyClass> {
    space.class_of(&act_on_cochain(pair, &class.representative)?)
}

/// `μ_{θ,φ} = θ μ(φ⁻¹·, φ⁻¹·) - μ`; a 2-cocycle for compatible pairs.
pub fn obstruction_cocycle(pair: &AutPair, ext: &ExtensionData) -> Result<Cochain> {
    let mu = ext.cocycle();
    let out = act_on_cochain(pair, mu)?.sub(mu)?;
    if !cohom::is_cocycle(&out) {
        return Err(Error::Consistency("obstruction cochain is not a cocycle".into()));
    }
    Ok(out)
}

/// The Wells class `ω(θ, φ) = [μ_{θ,φ}]` in `space = H^2(B; A)`.
pub fn wells_in(space: &CohomologySpace, pair: &AutPair, ext: &ExtensionData) -> Result<CohomologyClass> {
    space.class_of(&obstruction_cocycle(pair, ext)?)
}

/// The Wells class `ω(θ, φ) = [μ_{θ,φ}]`.
pub fn wells(pair: &AutPair, ext: &ExtensionData) -> Result<CohomologyClass> {
    wells_in(&cohom::cohomology_unbounded(ext.action(), 2)?, pair, ext)
}

/// Decides whether `pair` is induced by an automorphism of `L`.
///
/// A lift uses the stored section: `λ' ` is the solver's witness for
/// `∂λ' = μ_{θ,φ}`, `λ = λ' φ`, and `γ(inj(a) + s(b)) = inj(θ a + λ b) + s(φ b)`.
/// The verdict is independent of the section; the witness is not.
///
/// Every inducible verdict is replayed exactly and every obstructed verdict is
/// confirmed by a nonzero Wells class; disagreement is an
/// [`Error::Consistency`].
pub fn try_lift(pair: &AutPair, ext: &ExtensionData) -> Result<LiftOutcome> {
    try_lift_in(&cohom::cohomology_unbounded(ext.action(), 2)?, pair, ext)
}

/// [`try_lift`] with a precomputed `H^2(B; A)`.
pub fn try_lift_in(space: &CohomologySpace, pair: &AutPair, ext: &ExtensionData) -> Result<LiftOutcome> {
    if let Some(i) = compatibility_defect(pair, ext.action())? {
        return Ok(LiftOutcome::Incompatible { basis_index: i });
    }
    let obstruction = obstruction_cocycle(pair, ext)?;
    let class = space.class_of(&obstruction)?;
    let Some(lambda_prime) = cohom::is_coboundary(&obstruction)? else {
        if class.is_zero() {
            return Err(Error::Consistency("obstruction is not a coboundary but its class is zero".into()));
        }
        return Ok(LiftOutcome::Obstructed { class });
    };
    if !class.is_zero() {
        return Err(Error::Consistency("obstruction is a coboundary but its class is nonzero".into()));
    }
    let lambda = lambda_prime.values().checked_mul(pair.phi.matrix())?;
    let gamma = from_blocks(ext, pair.theta.matrix(), &lambda, pair.phi.matrix())?;
    if !gamma.is_automorphism() || &tau(&gamma, ext)? != pair {
        return Err(Error::Consistency("constructed lift does not replay".into()));
    }
    Ok(LiftOutcome::Inducible(LiftWitness { gamma, lambda }))
}

/// `γ_λ(inj(a) + s(b)) = inj(a + λ b) + s(b)` for `λ ∈ Z^1(B; A)`.
pub fn derivation_to_aut(lambda: &Cochain, ext: &ExtensionData) -> Result<AlgebraMap> {
    if lambda.degree() != 1 || lambda.action() != ext.action() {
        return Err(Error::ActionMismatch);
    }
    if !cohom::is_cocycle(lambda) {
        return Err(Error::NotACocycle(1));
    }
    let field = ext.l().field();
    let gamma = from_blocks(
        ext,
        &Matrix::identity(field, ext.a().dim()),
        lambda.values(),
        &Matrix::identity(field, ext.b().dim()),
    )?;
    if !gamma.is_automorphism() {
        return Err(Error::Consistency("γ_λ is not an automorphism".into()));
    }
    Ok(gamma)
}

/// `Aut^{A,B}(L) ≅ Z^1(B; A)`: a basis of derivations and their automorphisms.
#[derive(Clone, Debug)]
pub struct AutFixingBoth {
    pub derivations: Vec<Cochain>,
    pub automorphisms: Vec<AlgebraMap>,
}

impl AutFixingBoth {
    pub fn dim(&self) -> usize {
        self.derivations.len()
    }

    /// `p^{dim Z^1}` over `GF(p)`; `None` over `Q`.
    pub fn order(&self, ext: &ExtensionData) -> Option<BigUint> {
        ext.l().field().modulus().map(|p| BigUint::from(p).pow(self.dim() as u32))
    }
}

pub fn aut_fixing_both(ext: &ExtensionData) -> Result<AutFixingBoth> {
    let space = cohom::cohomology(ext.action(), 1)?;
    let derivations = space.cocycle_basis().to_vec();
    let automorphisms = derivations.iter().map(|d| derivation_to_aut(d, ext)).collect::<Result<_>>()?;
    Ok(AutFixingBoth { derivations, automorphisms })
}

/// The block section `σ(θ, φ) = θ ⊕ φ` of a split extension, in the
/// coordinates `(a, b) ↦ inj(a) + s(b)`. Requires `s` to be a homomorphism.
pub fn split_section(pair: &AutPair, ext: &ExtensionData) -> Result<AlgebraMap> {
    if !ext.cocycle().is_zero() {
        return Err(Error::MalformedExtension("stored section is not a homomorphism".into()));
    }
    require_compatible(pair, ext.action())?;
    let zero = Matrix::zeros(ext.l().field(), ext.a().dim(), ext.b().dim());
    let gamma = from_blocks(ext, pair.theta.matrix(), &zero, pair.phi.matrix())?;
    if !gamma.is_automorphism() {
        return Err(Error::Consistency("θ ⊕ φ is not an automorphism".into()));
    }
    Ok(gamma)
}
