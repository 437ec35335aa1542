//! Abelian extensions `0 → A → L → B → 0` with a chosen linear section.

use std::sync::Arc;

use crate::cohom::{self, Cochain};
use crate::error::{Error, Result};
use crate::exactlin::{vector, Matrix, Vector};
use crate::liealg::{AlgebraMap, LieAlgebra};
use crate::modact::{self, ModuleAction};

/// `(L, inj, proj, sect)`, validated at construction.
///
/// The induced action, the 2-cocycle of the stored section and the
/// coordinate change `(a, b) ↦ inj(a) + sect(b)` are computed once.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    inj: AlgebraMap,
    proj: AlgebraMap,
    sect: AlgebraMap,
    action: Arc<ModuleAction>,
    cocycle: Cochain,
    /// Columns: `inj` basis images, then `sect` basis images.
    coords: Matrix,
    coords_inv: Matrix,
}

impl PartialEq for ExtensionData {
    fn eq(&self, other: &Self) -> bool {
        self.inj == other.inj && self.proj == other.proj && self.sect == other.sect
    }
}

fn malformed(msg: &str) -> Error {
    Error::MalformedExtension(msg.to_string())
}

/// A linear section of `proj`: solves `proj · S = I` with free variables at zero.
pub fn make_section(proj: &AlgebraMap) -> Result<AlgebraMap> {
    let b = proj.target();
    let id = Matrix::identity(b.field(), b.dim());
    let s = proj.matrix().solve_matrix(&id)?.ok_or_else(|| malformed("projection is not surjective"))?;
    AlgebraMap::new(b.clone(), proj.source().clone(), s)
}

impl ExtensionData {
    /// Validates exactness and abelianness; builds a section when none is
    /// supplied.
    pub fn new(inj: AlgebraMap, proj: AlgebraMap, sect: Option<AlgebraMap>) -> Result<Self> {
        let (a, l, b) = (inj.source().clone(), inj.target().clone(), proj.target().clone());
        if proj.source() != &l {
            return Err(malformed("inj and proj do not share the middle algebra"));
        }
        l.ensure_lie()?;
        b.ensure_lie()?;
        if !a.is_abelian() {
            return Err(Error::NotAbelian(a.labels().join(",")));
        }
        if inj.matrix().rank() != a.dim() {
            return Err(malformed("inj is not injective"));
        }
        if proj.matrix().rank() != b.dim() {
            return Err(malformed("proj is not surjective"));
        }
        if a.dim() + b.dim() != l.dim() || !proj.after(&inj)?.matrix().is_zero() {
            return Err(malformed("image of inj is not the kernel of proj"));
        }
        if !inj.is_homomorphism() {
            return Err(malformed("inj is not a homomorphism"));
        }
        if !proj.is_homomorphism() {
            return Err(malformed("proj is not a homomorphism"));
        }
        let sect = match sect {
            Some(s) => {
                if s.source() != &b || s.target() != &l {
                    return Err(malformed("section has the wrong source or target"));
                }
                if !proj.after(&s)?.matrix().is_identity() {
                    return Err(malformed("proj ∘ sect is not the identity"));
                }
                s
            }
            None => make_section(&proj)?,
        };
        Self::assemble(inj, proj, sect)
    }

    fn assemble(inj: AlgebraMap, proj: AlgebraMap, sect: AlgebraMap) -> Result<Self> {
        let coords = inj.matrix().hstack(sect.matrix())?;
        let coords_inv = coords.invert()?.ok_or_else(|| malformed("inj and sect do not span L"))?;
        let mut ext = ExtensionData {
            action: Arc::new(ModuleAction::trivial(proj.target().clone(), inj.source().clone())?),
            cocycle: Cochain::zero(Arc::new(ModuleAction::trivial(proj.target().clone(), inj.source().clone())?), 2),
            inj,
            proj,
            sect,
            coords,
            coords_inv,
        };
        let action = Arc::new(modact::induced_action(&ext)?);
        if !action.check().is_empty() {
            return Err(Error::Consistency("induced action is not a module".into()));
        }
        ext.action = action;
        ext.cocycle = ext.compute_cocycle()?;
        Ok(ext)
    }

    /// The same extension with a different section.
    pub fn with_section(&self, sect: AlgebraMap) -> Result<Self> {
        Self::new(self.inj.clone(), self.proj.clone(), Some(sect))
    }

    pub fn a(&self) -> &Arc<LieAlgebra> {
        self.inj.source()
    }

    pub fn l(&self) -> &Arc<LieAlgebra> {
        self.inj.target()
    }

    pub fn b(&self) -> &Arc<LieAlgebra> {
        self.proj.target()
    }

    pub fn inj(&self) -> &AlgebraMap {
        &self.inj
    }

    pub fn proj(&self) -> &AlgebraMap {
        &self.proj
    }

    pub fn sect(&self) -> &AlgebraMap {
        &self.sect
    }

    pub fn action(&self) -> &Arc<ModuleAction> {
        &self.action
    }

    /// `E = [inj | sect]`, taking `(a, b)`-coordinates to `L`-coordinates.
    pub fn coordinates(&self) -> &Matrix {
        &self.coords
    }

    pub fn coordinates_inverse(&self) -> &Matrix {
        &self.coords_inv
    }

    /// Does `v ∈ L` lie in `inj(A)`? Returns its `A`-coordinates if so.
    pub fn pull_back(&self, v: &[crate::exactlin::Scalar]) -> Result<Option<Vector>> {
        let c = self.coords_inv.mul_vec(v)?;
        let (a_part, b_part) = c.split_at(self.a().dim());
        Ok(vector::is_zero(b_part).then(|| a_part.to_vec()))
    }

    fn compute_cocycle(&self) -> Result<Cochain> {
        let l = self.l();
        let s_cols = self.sect.matrix().columns();
        let b = self.b().clone();
        let mut err = None;
        let mu = Cochain::from_fn(self.action.clone(), 2, |t| {
            let (i, j) = (t[0], t[1]);
            let lhs = l.bracket(&s_cols[i], &s_cols[j]).expect("shape");
            let rhs = self.sect.apply(&b.basis_bracket(i, j)).expect("shape");
            let defect = vector::sub(&lhs, &rhs);
            match self.pull_back(&defect) {
                Ok(Some(a)) => a,
                _ => {
                    err = Some(malformed("[s(b1), s(b2)] - s([b1, b2]) leaves the image of inj"));
                    vector::zero(l.field(), self.a().dim())
                }
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if !cohom::is_cocycle(&mu) {
            return Err(Error::Consistency("extension cocycle fails ∂μ = 0".into()));
        }
        Ok(mu)
    }

    /// `μ(b1, b2) = [s(b1), s(b2)] - s([b1, b2])` in `A`-coordinates.
    pub fn extract_cocycle(&self) -> Cochain {
        self.cocycle.clone()
    }

    pub fn cocycle(&self) -> &Cochain {
        &self.cocycle
    }

    /// True iff `[μ] = 0`, i.e. some section is a homomorphism.
    pub fn is_split(&self) -> Result<bool> {
        Ok(cohom::is_coboundary(&self.cocycle)?.is_some())
    }

    /// A bracket-preserving section `s - inj∘λ` with `∂λ = μ`, when one exists.
    pub fn splitting_section(&self) -> Result<Option<AlgebraMap>> {
        let Some(lam) = cohom::is_coboundary(&self.cocycle)? else {
            return Ok(None);
        };
        let shift = self.inj.matrix().checked_mul(lam.values())?;
        let s = self.sect.matrix().checked_sub(&shift)?;
        let s = AlgebraMap::new(self.b().clone(), self.l().clone(), s)?;
        if !s.is_homomorphism() {
            return Err(Error::Consistency("corrected section is not a homomorphism".into()));
        }
        Ok(Some(s))
    }
}

/// `L = A ⊕ B` with `[(a1, b1), (a2, b2)] = (b1·a2 - b2·a1 + μ(b1, b2), [b1, b2])`.
///
/// The basis of `L` is the basis of `A` followed by the basis of `B`, with
/// the canonical inclusion, projection and section.
pub fn extension_from_cocycle(act: &Arc<ModuleAction>, mu: &Cochain) -> Result<ExtensionData> {
    if mu.action() != act || mu.degree() != 2 {
        return Err(Error::ActionMismatch);
    }
    if !cohom::is_cocycle(mu) {
        return Err(Error::NotACocycle(2));
    }
    let (a, b) = (act.a().clone(), act.b().clone());
    let (da, db) = (a.dim(), b.dim());
    let field = act.field();
    let n = da + db;
    let mut brackets = Vec::new();
    // [a_i, b_j] = -(b_j · a_i)
    for i in 0..da {
        for j in 0..db {
            let col = act.rho()[j].column(i);
            let mut v = vector::zero(field, n);
            for (k, c) in col.iter().enumerate() {
                v[k] = -c;
            }
            brackets.push((i, da + j, v));
        }
    }
    for i in 0..db {
        for j in i + 1..db {
            let mut v = mu.on_basis(&[i, j]);
            v.extend(b.basis_bracket(i, j));
            brackets.push((da + i, da + j, v));
        }
    }
    let labels = a.labels().iter().chain(b.labels()).cloned().collect();
    let l = Arc::new(LieAlgebra::new(field, labels, brackets)?);
    let inj = AlgebraMap::new(
        a.clone(),
        l.clone(),
        Matrix::from_fn(field, n, da, |r, c| if r == c { field.one() } else { field.zero() }),
    )?;
    let proj = AlgebraMap::new(
        l.clone(),
        b.clone(),
        Matrix::from_fn(field, db, n, |r, c| if c == da + r { field.one() } else { field.zero() }),
    )?;
    let sect = AlgebraMap::new(
        b,
        l,
        Matrix::from_fn(field, n, db, |r, c| if r == da + c { field.one() } else { field.zero() }),
    )?;
    let ext = ExtensionData::new(inj, proj, Some(sect))?;
    if ext.action() != act || ext.cocycle() != mu {
        return Err(Error::Consistency("constructed extension does not reproduce (α, μ)".into()));
    }
    Ok(ext)
}

/// The split extension `A ⋊ B`.
pub fn semidirect(act: &Arc<ModuleAction>) -> Result<ExtensionData> {
    extension_from_cocycle(act, &Cochain::zero(act.clone(), 2))
}

/// Equivalence of extensions with the same `A`, `B` and induced action:
/// their cocycles define the same class in `H^2(B; A)`.
pub fn equivalent(e1: &ExtensionData, e2: &ExtensionData) -> Result<bool> {
    if e1.a() != e2.a() || e1.b() != e2.b() {
        return Err(Error::Incomparable("different kernels or quotients"));
    }
    if e1.action() != e2.action() {
        return Err(Error::Incomparable("induced actions differ"));
    }
    cohom::classes_equal(e1.cocycle(), e2.cocycle())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::coboundary;
    use crate::exactlin::Field;
    use crate::liealg::catalog;

    fn q() -> Field {
        Field::Rationals
    }

    /// Heisenberg `x1, x2, z` as the central extension of the plane by `z`.
    fn heisenberg_ext(field: Field) -> ExtensionData {
        let l = Arc::new(catalog::heisenberg(field));
        let a = Arc::new(LieAlgebra::abelian(field, vec!["z".into()]));
        let b = Arc::new(LieAlgebra::abelian(field, vec!["x1_bar".into(), "x2_bar".into()]));
        let inj = AlgebraMap::new(a, l.clone(), Matrix::from_i64(field, &[&[0], &[0], &[1]])).unwrap();
        let proj = AlgebraMap::new(l, b, Matrix::from_i64(field, &[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        ExtensionData::new(inj, proj, None).unwrap()
    }

    fn one_dim_action(field: Field, r: i64) -> Arc<ModuleAction> {
        Arc::new(
            ModuleAction::new(
                Arc::new(catalog::abelian(field, 1)),
                Arc::new(catalog::abelian(field, 1)),
                vec![Matrix::from_i64(field, &[&[r]])],
            )
            .unwrap(),
        )
    }

    fn plane_trivial(field: Field) -> Arc<ModuleAction> {
        Arc::new(
            ModuleAction::trivial(Arc::new(catalog::abelian(field, 2)), Arc::new(catalog::abelian(field, 1))).unwrap(),
        )
    }

    #[test]
    fn make_section_examples() {
        let ext = semidirect(&one_dim_action(q(), 1)).unwrap();
        assert_eq!(ext.sect().matrix(), &Matrix::from_i64(q(), &[&[0], &[1]]));

        let h = heisenberg_ext(q());
        assert_eq!(h.sect().matrix(), &Matrix::from_i64(q(), &[&[1, 0], &[0, 1], &[0, 0]]));
        assert!(h.proj().after(h.sect()).unwrap().matrix().is_identity());

        let l = Arc::new(catalog::abelian(q(), 2));
        let b = Arc::new(catalog::abelian(q(), 2));
        let proj = AlgebraMap::new(l, b, Matrix::from_i64(q(), &[&[1, 0], &[1, 0]])).unwrap();
        assert!(matches!(make_section(&proj), Err(Error::MalformedExtension(_))));
    }

    #[test]
    fn exactness_is_validated() {
        let field = q();
        let l = Arc::new(catalog::heisenberg(field));
        let a = Arc::new(LieAlgebra::abelian(field, vec!["z".into()]));
        let b = Arc::new(catalog::abelian(field, 2));
        // image of inj is x1, which is not the kernel of proj
        let inj = AlgebraMap::new(a.clone(), l.clone(), Matrix::from_i64(field, &[&[1], &[0], &[0]])).unwrap();
        let proj = AlgebraMap::new(l.clone(), b.clone(), Matrix::from_i64(field, &[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert!(matches!(ExtensionData::new(inj, proj, None), Err(Error::MalformedExtension(_))));

        // projection onto (x1, z) kills x2, which is not an ideal
        let inj = AlgebraMap::new(a, l.clone(), Matrix::from_i64(field, &[&[0], &[1], &[0]])).unwrap();
        let proj = AlgebraMap::new(l, b, Matrix::from_i64(field, &[&[1, 0, 0], &[0, 0, 1]])).unwrap();
        assert!(matches!(ExtensionData::new(inj, proj, None), Err(Error::MalformedExtension(_))));
    }

    #[test]
    fn extract_cocycle_examples() {
        let semi = semidirect(&one_dim_action(q(), 1)).unwrap();
        assert!(semi.extract_cocycle().is_zero());

        let h = heisenberg_ext(q());
        let mu = h.extract_cocycle();
        assert_eq!(mu.on_basis(&[0, 1]), vec![q().one()]);
        let x1 = vec![q().one(), q().zero()];
        let x2 = vec![q().zero(), q().one()];
        assert_eq!(mu.eval(&[x1, x2]).unwrap(), vec![q().one()]);

        // second section s'(x1_bar) = x1 + z differs by λ = (1, 0)
        let s2 =
            AlgebraMap::new(h.b().clone(), h.l().clone(), Matrix::from_i64(q(), &[&[1, 0], &[0, 1], &[1, 0]])).unwrap();
        let h2 = h.with_section(s2).unwrap();
        let mu2 = h2.extract_cocycle();
        let lam = Cochain::from_linear_map(h.action().clone(), &Matrix::from_i64(q(), &[&[1, 0]])).unwrap();
        assert_eq!(mu2.sub(&mu).unwrap(), coboundary(&lam));
        assert!(cohom::classes_equal(&mu, &mu2).unwrap());
    }

    #[test]
    fn heisenberg_induced_action_is_trivial() {
        let h = heisenberg_ext(q());
        assert!(h.action().is_trivial());
    }

    #[test]
    fn aff1_split_extension_action() {
        // L = aff(1) with basis (a, b), [b, a] = a; A = span(a)
        let field = q();
        let l = Arc::new(
            LieAlgebra::new(field, vec!["a".into(), "b".into()], [(1, 0, vec![field.one(), field.zero()])]).unwrap(),
        );
        let a = Arc::new(catalog::abelian(field, 1));
        let b = Arc::new(catalog::abelian(field, 1));
        let inj = AlgebraMap::new(a, l.clone(), Matrix::from_i64(field, &[&[1], &[0]])).unwrap();
        let proj = AlgebraMap::new(l, b, Matrix::from_i64(field, &[&[0, 1]])).unwrap();
        let ext = ExtensionData::new(inj, proj, None).unwrap();
        assert_eq!(ext.action().rho(), &[Matrix::from_i64(field, &[&[1]])]);
        assert!(ext.is_split().unwrap());
    }

    #[test]
    fn from_cocycle_examples() {
        let act = one_dim_action(q(), 1);
        let semi = semidirect(&act).unwrap();
        assert_eq!(semi.action(), &act);
        // [e_a, e_b] = -e_a
        assert_eq!(semi.l().basis_bracket(0, 1), vec![-q().one(), q().zero()]);

        let act = plane_trivial(q());
        let mu = Cochain::from_fn(act.clone(), 2, |_| vec![q().one()]).unwrap();
        let ext = extension_from_cocycle(&act, &mu).unwrap();
        // basis (a, b1, b2) with [b1, b2] = a: Heisenberg after relabeling
        let p = Matrix::from_i64(q(), &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let relabeled = ext.l().change_basis(&p, vec!["x1".into(), "x2".into(), "z".into()]).unwrap();
        assert_eq!(relabeled, catalog::heisenberg(q()));
        assert!(!ext.is_split().unwrap());
    }

    #[test]
    fn from_cocycle_round_trip() {
        let h = heisenberg_ext(q());
        let rebuilt = extension_from_cocycle(h.action(), h.cocycle()).unwrap();
        let iso = AlgebraMap::new(rebuilt.l().clone(), h.l().clone(), h.coordinates().clone()).unwrap();
        assert!(iso.is_homomorphism());
        assert!(iso.matrix().is_invertible());
    }

    #[test]
    fn from_cocycle_rejects_non_cocycles() {
        // abelian 3-dim B acting on a line by (1, 0, 0); ν(e2, e3) = 1 is not closed
        let b = Arc::new(catalog::abelian(q(), 3));
        let a = Arc::new(catalog::abelian(q(), 1));
        let z = Matrix::from_i64(q(), &[&[0]]);
        let act =
            Arc::new(ModuleAction::new_checked(b, a, vec![Matrix::from_i64(q(), &[&[1]]), z.clone(), z]).unwrap());
        let nu = Cochain::from_fn(act.clone(), 2, |t| vec![if t == [1, 2] { q().one() } else { q().zero() }]).unwrap();
        assert_eq!(extension_from_cocycle(&act, &nu).unwrap_err(), Error::NotACocycle(2));

        // building the bracket anyway breaks Jacobi
        let brackets = vec![
            (0, 1, vec![-q().one(), q().zero(), q().zero(), q().zero()]),
            (2, 3, vec![q().one(), q().zero(), q().zero(), q().zero()]),
        ];
        let l = LieAlgebra::new(q(), (0..4).map(|i| format!("e{i}")).collect(), brackets).unwrap();
        assert!(!l.check().is_empty());
    }

    #[test]
    fn split_examples() {
        for act in
            [one_dim_action(q(), 1), plane_trivial(q()), Arc::new(ModuleAction::adjoint(Arc::new(catalog::sl2(q()))))]
        {
            let ext = semidirect(&act).unwrap();
            assert!(ext.is_split().unwrap());
            assert!(ext.splitting_section().unwrap().is_some());
        }
        assert!(!heisenberg_ext(q()).is_split().unwrap());
        assert_eq!(heisenberg_ext(q()).splitting_section().unwrap(), None);

        let act = Arc::new(ModuleAction::adjoint(Arc::new(catalog::heisenberg(q()))));
        let lam = Cochain::from_linear_map(act.clone(), &Matrix::from_i64(q(), &[&[1, 0, 2], &[0, 3, 0], &[1, 1, 1]]))
            .unwrap();
        let ext = extension_from_cocycle(&act, &coboundary(&lam)).unwrap();
        assert!(ext.is_split().unwrap());
        let s = ext.splitting_section().unwrap().unwrap();
        assert!(s.is_homomorphism());
    }

    #[test]
    fn equivalence_examples() {
        let h = heisenberg_ext(q());
        let s2 = AlgebraMap::new(h.b().clone(), h.l().clone(), Matrix::from_i64(q(), &[&[1, 0], &[0, 1], &[3, -2]]))
            .unwrap();
        assert!(equivalent(&h, &h.with_section(s2).unwrap()).unwrap());

        let act = plane_trivial(q());
        let semi = semidirect(&act).unwrap();
        let mu = Cochain::from_fn(act.clone(), 2, |_| vec![q().one()]).unwrap();
        let central = extension_from_cocycle(&act, &mu).unwrap();
        assert!(!equivalent(&semi, &central).unwrap());

        let adj = Arc::new(ModuleAction::adjoint(Arc::new(catalog::aff1(q()))));
        let nu = Cochain::zero(adj.clone(), 2);
        let lam = Cochain::from_linear_map(adj.clone(), &Matrix::from_i64(q(), &[&[2, 1], &[0, 5]])).unwrap();
        let e1 = extension_from_cocycle(&adj, &nu).unwrap();
        let e2 = extension_from_cocycle(&adj, &nu.add(&coboundary(&lam)).unwrap()).unwrap();
        assert!(equivalent(&e1, &e2).unwrap());

        assert!(matches!(equivalent(&semi, &heisenberg_ext(q())), Err(Error::Incomparable(_))));
        let other = semidirect(&Arc::new(
            ModuleAction::new(
                act.b().clone(),
                act.a().clone(),
                vec![Matrix::from_i64(q(), &[&[1]]), Matrix::from_i64(q(), &[&[0]])],
            )
            .unwrap(),
        ))
        .unwrap();
        assert!(matches!(equivalent(&semi, &other), Err(Error::Incomparable(_))));
    }

    #[test]
    fn gf2_class_count_matches_h2() {
        let field = Field::prime(2).unwrap();
        let act = plane_trivial(field);
        let exts: Vec<ExtensionData> = (0..2)
            .map(|v| {
                extension_from_cocycle(&act, &Cochain::from_fn(act.clone(), 2, |_| vec![field.from_u64(v)]).unwrap())
                    .unwrap()
            })
            .collect();
        let mut classes: Vec<&ExtensionData> = Vec::new();
        for e in &exts {
            if !classes.iter().any(|c| equivalent(c, e).unwrap()) {
                classes.push(e);
            }
        }
        let h2 = cohom::cohomology(&act, 2).unwrap();
        assert_eq!(classes.len(), 1 << h2.dim_h());
    }

    #[test]
    fn induced_action_inverts_construction() {
        for act in [
            one_dim_action(q(), 3),
            plane_trivial(q()),
            Arc::new(ModuleAction::adjoint(Arc::new(catalog::sl2(q())))),
            Arc::new(ModuleAction::adjoint(Arc::new(catalog::heisenberg(q())))),
        ] {
            let ext = semidirect(&act).unwrap();
            assert_eq!(modact::induced_action(&ext).unwrap(), *act);
        }
    }
}
