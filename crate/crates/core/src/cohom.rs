//! The Chevalley–Eilenberg complex `C^k(B; A) = Hom(Λ^k B, A)`.
//!
//! A `k`-cochain is stored by its values on the increasing `k`-tuples of
//! basis indices of `B`, in lexicographic order. Flattened to a single column
//! (for expressing `∂^k` as a matrix) the `A`-coordinate varies fastest:
//! entry `t * dim A + a` is coordinate `a` of the value on tuple `t`.
//!
//! The coboundary is
//!
//! ```text
//! ∂ν(b_0, …, b_k) = Σ_i (-1)^i b_i·ν(…, b̂_i, …)
//!                 + Σ_{i<j} (-1)^{i+j} ν([b_i, b_j], …, b̂_i, …, b̂_j, …)
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{vector, Field, Matrix, Scalar, Vector};
use crate::modact::ModuleAction;

/// Increasing `k`-tuples of `0..n` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSubsetBasis {
    n: usize,
    k: usize,
    tuples: Vec<Vec<usize>>,
}

impl KSubsetBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mut tuples = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(0, n, k, &mut cur, &mut tuples);
        }
        KSubsetBasis { n, k, tuples }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    /// Position of a strictly increasing tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }

    /// Sorts arbitrary indices into a basis tuple, returning its position and
    /// the sign of the sorting permutation; `None` on a repeated index.
    pub fn signed_index(&self, indices: &[usize]) -> Option<(usize, bool)> {
        let mut sorted = indices.to_vec();
        let mut negative = false;
        // insertion sort, counting transpositions
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                negative = !negative;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        self.index_of(&sorted).map(|idx| (idx, negative))
    }
}

/// Element of `C^k(B; A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    action: Arc<ModuleAction>,
    /// `dim A × C(dim B, k)`; column `t` is the value on tuple `t`.
    values: Matrix,
}

impl Cochain {
    pub fn new(action: Arc<ModuleAction>, degree: usize, values: Matrix) -> Result<Self> {
        let count = KSubsetBasis::new(action.b().dim(), degree).len();
        if values.field() != action.field() {
            return Err(Error::FieldMismatch { left: action.field(), right: values.field() });
        }
        if values.rows() != action.a().dim() || values.cols() != count {
            return Err(Error::DimensionMismatch {
                context: "cochain value table",
                expected: action.a().dim() * count,
                found: values.rows() * values.cols(),
            });
        }
        Ok(Cochain { degree, action, values })
    }

    pub fn zero(action: Arc<ModuleAction>, degree: usize) -> Self {
        let count = KSubsetBasis::new(action.b().dim(), degree).len();
        let values = Matrix::zeros(action.field(), action.a().dim(), count);
        Cochain { degree, action, values }
    }

    /// Builds a cochain from its value on each basis tuple.
    pub fn from_fn(action: Arc<ModuleAction>, degree: usize, mut f: impl FnMut(&[usize]) -> Vector) -> Result<Self> {
        let basis = KSubsetBasis::new(action.b().dim(), degree);
        let cols: Vec<Vector> = basis.tuples().iter().map(|t| f(t)).collect();
        let values = Matrix::from_columns(action.field(), action.a().dim(), &cols)?;
        Cochain::new(action, degree, values)
    }

    /// A 1-cochain from the matrix of a linear map `B → A`.
    pub fn from_linear_map(action: Arc<ModuleAction>, map: &Matrix) -> Result<Self> {
        Cochain::new(action, 1, map.clone())
    }

    pub fn from_flat(action: Arc<ModuleAction>, degree: usize, flat: &[Scalar]) -> Result<Self> {
        let da = action.a().dim();
        let count = KSubsetBasis::new(action.b().dim(), degree).len();
        if flat.len() != da * count {
            return Err(Error::DimensionMismatch {
                context: "flattened cochain",
                expected: da * count,
                found: flat.len(),
            });
        }
        let values = Matrix::from_fn(action.field(), da, count, |a, t| flat[t * da + a].clone());
        Cochain::new(action, degree, values)
    }

    pub fn to_flat(&self) -> Vector {
        let mut out = Vec::with_capacity(self.values.rows() * self.values.cols());
        for t in 0..self.values.cols() {
            for a in 0..self.values.rows() {
                out.push(self.values.get(a, t).clone());
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn action(&self) -> &Arc<ModuleAction> {
        &self.action
    }

    pub fn field(&self) -> Field {
        self.action.field()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    fn compatible(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.action != other.action {
            return Err(Error::ActionMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        Ok(Cochain { values: self.values.checked_add(&other.values)?, ..self.clone() })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        Ok(Cochain { values: self.values.checked_sub(&other.values)?, ..self.clone() })
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain { values: self.values.scale(s), ..self.clone() }
    }

    /// Value on basis vectors `e_{i_1}, …, e_{i_k}` in any order.
    pub fn on_basis(&self, indices: &[usize]) -> Vector {
        assert_eq!(indices.len(), self.degree, "wrong arity");
        let basis = KSubsetBasis::new(self.action.b().dim(), self.degree);
        self.on_basis_in(&basis, indices)
    }

    fn on_basis_in(&self, basis: &KSubsetBasis, indices: &[usize]) -> Vector {
        match basis.signed_index(indices) {
            None => vector::zero(self.field(), self.values.rows()),
            Some((t, negative)) => {
                let col = self.values.column(t);
                if negative {
                    col.iter().map(|s| -s).collect()
                } else {
                    col
                }
            }
        }
    }

    /// Multilinear alternating evaluation on arbitrary elements of `B`.
    ///
    /// Expanding each argument in the basis, the coefficient of `ν(e_T)` for
    /// an increasing tuple `T` is the minor of the argument matrix on the
    /// columns `T`.
    pub fn eval(&self, args: &[Vector]) -> Result<Vector> {
        if args.len() != self.degree {
            return Err(Error::DimensionMismatch {
                context: "cochain arity",
                expected: self.degree,
                found: args.len(),
            });
        }
        let n = self.action.b().dim();
        if let Some(bad) = args.iter().find(|a| a.len() != n) {
            return Err(Error::DimensionMismatch { context: "cochain argument", expected: n, found: bad.len() });
        }
        let field = self.field();
        let basis = KSubsetBasis::new(n, self.degree);
        let mut out = vector::zero(field, self.values.rows());
        for (t, tuple) in basis.tuples().iter().enumerate() {
            let coeff = match self.degree {
                0 => field.one(),
                1 => args[0][tuple[0]].clone(),
                2 => &(&args[0][tuple[0]] * &args[1][tuple[1]]) - &(&args[0][tuple[1]] * &args[1][tuple[0]]),
                k => Matrix::from_fn(field, k, k, |r, c| args[r][tuple[c]].clone()).determinant()?,
            };
            if !coeff.is_zero() {
                vector::axpy(&mut out, &coeff, &self.values.column(t));
            }
        }
        Ok(out)
    }
}

/// `∂^k ν`, evaluated on every basis `(k+1)`-tuple straight from the defining
/// formula.
pub fn coboundary(nu: &Cochain) -> Cochain {
    let act = nu.action();
    let b = act.b();
    let n = b.dim();
    let k = nu.degree();
    let field = nu.field();
    let da = act.a().dim();
    let source = KSubsetBasis::new(n, k);
    let target = KSubsetBasis::new(n, k + 1);
    let cols: Vec<Vector> = target
        .tuples()
        .iter()
        .map(|t| {
            let mut acc = vector::zero(field, da);
            for i in 0..=k {
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
                let val = act.rho()[t[i]].mul_vec(&nu.on_basis_in(&source, &rest)).expect("shape");
                let sign = if i % 2 == 0 { field.one() } else { -field.one() };
                vector::axpy(&mut acc, &sign, &val);
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let br = b.basis_bracket(t[i], t[j]);
                    let rest: Vec<usize> =
                        t.iter().enumerate().filter(|&(p, _)| p != i && p != j).map(|(_, &x)| x).collect();
                    let sign = if (i + j) % 2 == 0 { field.one() } else { -field.one() };
                    for (m, c) in br.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut args = Vec::with_capacity(k);
                        args.push(m);
                        args.extend_from_slice(&rest);
                        let val = nu.on_basis_in(&source, &args);
                        vector::axpy(&mut acc, &(&sign * c), &val);
                    }
                }
            }
            acc
        })
        .collect();
    let values = Matrix::from_columns(field, da, &cols).expect("shape");
    Cochain::new(act.clone(), k + 1, values).expect("shape")
}

/// Matrix of `∂^k` on flattened cochains, `dim C^{k+1} × dim C^k`.
pub fn coboundary_matrix(act: &Arc<ModuleAction>, k: usize) -> Matrix {
    if let Some(cached) = act.coboundary.get(k).and_then(|c| c.get()) {
        return cached.clone();
    }
    let field = act.field();
    let da = act.a().dim();
    let n = act.b().dim();
    let dim_source = da * KSubsetBasis::new(n, k).len();
    let dim_target = da * KSubsetBasis::new(n, k + 1).len();
    let cols: Vec<Vector> = (0..dim_source)
        .map(|idx| {
            let nu = Cochain::from_flat(act.clone(), k, &vector::unit(field, dim_source, idx)).expect("shape");
            coboundary(&nu).to_flat()
        })
        .collect();
    let m = if cols.is_empty() {
        Matrix::zeros(field, dim_target, 0)
    } else {
        Matrix::from_columns(field, dim_target, &cols).expect("shape")
    };
    if let Some(slot) = act.coboundary.get(k) {
        let _ = slot.set(m.clone());
    }
    m
}

pub fn is_cocycle(nu: &Cochain) -> bool {
    coboundary(nu).is_zero()
}

/// `Z^k`, `B^k` and representatives of `H^k = Z^k / B^k`.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    degree: usize,
    action: Arc<ModuleAction>,
    cocycles: Vec<Cochain>,
    coboundaries: Vec<Cochain>,
    representatives: Vec<Cochain>,
    /// Columns: coboundary basis, then representatives.
    coordinates: Matrix,
}

/// A class in `H^k`, as coordinates against the representatives of its
/// [`CohomologySpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub coords: Vector,
    pub representative: Cochain,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        vector::is_zero(&self.coords)
    }
}

impl CohomologySpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn action(&self) -> &Arc<ModuleAction> {
        &self.action
    }

    pub fn cocycle_basis(&self) -> &[Cochain] {
        &self.cocycles
    }

    pub fn coboundary_basis(&self) -> &[Cochain] {
        &self.coboundaries
    }

    pub fn representatives(&self) -> &[Cochain] {
        &self.representatives
    }

    pub fn dim_z(&self) -> usize {
        self.cocycles.len()
    }

    pub fn dim_b(&self) -> usize {
        self.coboundaries.len()
    }

    pub fn dim_h(&self) -> usize {
        self.representatives.len()
    }

    /// Class of a cocycle.
    pub fn class_of(&self, nu: &Cochain) -> Result<CohomologyClass> {
        if nu.degree() != self.degree || nu.action() != &self.action {
            return Err(Error::ActionMismatch);
        }
        if !is_cocycle(nu) {
            return Err(Error::NotACocycle(self.degree));
        }
        let x = self
            .coordinates
            .solve(&nu.to_flat())?
            .ok_or_else(|| Error::Consistency("cocycle outside span of coboundaries and representatives".into()))?;
        let coords = x[self.coboundaries.len()..].to_vec();
        Ok(self.class_from_coords(coords))
    }

    pub fn class_from_coords(&self, coords: Vector) -> CohomologyClass {
        assert_eq!(coords.len(), self.dim_h(), "class coordinate length");
        let mut rep = Cochain::zero(self.action.clone(), self.degree);
        for (c, r) in coords.iter().zip(&self.representatives) {
            rep = rep.add(&r.scale(c)).expect("same space");
        }
        CohomologyClass { coords, representative: rep }
    }

    pub fn zero_class(&self) -> CohomologyClass {
        self.class_from_coords(vector::zero(self.action.field(), self.dim_h()))
    }

    pub fn sub(&self, x: &CohomologyClass, y: &CohomologyClass) -> CohomologyClass {
        self.class_from_coords(vector::sub(&x.coords, &y.coords))
    }

    /// Every class of `H^k` over a finite field, in lexicographic order of
    /// coordinates.
    pub fn all_classes(&self) -> Result<Vec<CohomologyClass>> {
        let p = self.action.field().modulus().ok_or(Error::FiniteFieldRequired)?;
        let field = self.action.field();
        let d = self.dim_h() as u32;
        let count = p
            .checked_pow(d)
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Error::EnumerationTooLarge(format!("{p}^{d} classes")))?;
        Ok((0..count)
            .map(|mut idx| {
                let mut coords = vec![field.zero(); d as usize];
                for c in coords.iter_mut().rev() {
                    *c = field.from_u64(idx % p);
                    idx /= p;
                }
                self.class_from_coords(coords)
            })
            .collect())
    }
}

/// Computes `Z^k = ker ∂^k`, `B^k = im ∂^{k-1}` and class representatives.
///
/// Representatives are the cocycle-basis vectors that are pivots of the
/// row reduction of `[B-basis | Z-basis]`, so they are deterministic.
pub fn cohomology(act: &Arc<ModuleAction>, k: usize) -> Result<CohomologySpace> {
    let n = act.b().dim();
    if k > n {
        return Err(Error::DegreeOutOfRange { degree: k, max: n });
    }
    cohomology_unbounded(act, k)
}

/// [`cohomology`] without the degree check; `C^k = 0` for `k > dim B`.
pub(crate) fn cohomology_unbounded(act: &Arc<ModuleAction>, k: usize) -> Result<CohomologySpace> {
    let n = act.b().dim();
    let field = act.field();
    let dim_ck = act.a().dim() * KSubsetBasis::new(n, k).len();
    let z_flat = coboundary_matrix(act, k).kernel_basis();
    let b_flat = if k == 0 { Vec::new() } else { coboundary_matrix(act, k - 1).image_basis() };
    let stacked: Vec<Vector> = b_flat.iter().chain(&z_flat).cloned().collect();
    let (rep_flat, coordinates) = if stacked.is_empty() {
        (Vec::new(), Matrix::zeros(field, dim_ck, 0))
    } else {
        let m = Matrix::from_columns(field, dim_ck, &stacked)?;
        let pivots = m.rref().pivots;
        if pivots[..b_flat.len().min(pivots.len())] != (0..b_flat.len()).collect::<Vec<_>>()[..] {
            return Err(Error::Consistency("coboundaries are not linearly independent".into()));
        }
        let reps: Vec<Vector> = pivots.iter().filter(|&&p| p >= b_flat.len()).map(|&p| stacked[p].clone()).collect();
        if pivots.len() != z_flat.len() {
            return Err(Error::Consistency("coboundaries are not all cocycles".into()));
        }
        let coords_cols: Vec<Vector> = b_flat.iter().chain(&reps).cloned().collect();
        (reps, Matrix::from_columns(field, dim_ck, &coords_cols)?)
    };
    let to_cochains =
        |vs: &[Vector]| -> Result<Vec<Cochain>> { vs.iter().map(|v| Cochain::from_flat(act.clone(), k, v)).collect() };
    Ok(CohomologySpace {
        degree: k,
        action: act.clone(),
        cocycles: to_cochains(&z_flat)?,
        coboundaries: to_cochains(&b_flat)?,
        representatives: to_cochains(&rep_flat)?,
        coordinates,
    })
}

/// Some `λ` with `∂λ = ν`, or `None` when the cocycle `ν` is not a
/// coboundary. Free variables of the solve are set to zero.
pub fn is_coboundary(nu: &Cochain) -> Result<Option<Cochain>> {
    let k = nu.degree();
    if k == 0 {
        return Err(Error::DegreeOutOfRange { degree: 0, max: nu.action().b().dim() });
    }
    if !is_cocycle(nu) {
        return Err(Error::NotACocycle(k));
    }
    let d = coboundary_matrix(nu.action(), k - 1);
    match d.solve(&nu.to_flat())? {
        None => Ok(None),
        Some(x) => {
            let witness = Cochain::from_flat(nu.action().clone(), k - 1, &x)?;
            if &coboundary(&witness) != nu {
                return Err(Error::Consistency("coboundary witness does not replay".into()));
            }
            Ok(Some(witness))
        }
    }
}

/// `[ν1] = [ν2]`, i.e. `ν1 - ν2 ∈ B^k`.
pub fn classes_equal(nu1: &Cochain, nu2: &Cochain) -> Result<bool> {
    Ok(is_coboundary(&nu1.sub(nu2)?)?.is_some())
}
