//! Brute-force enumeration over `GF(p)`, used as an independent oracle for
//! the exact sequence
//!
//! ```text
//! 0 → Z^1(B; A) → Aut_A(L) --τ--> C_α --ω--> H^2(B; A)
//! ```
//!
//! Candidates are scanned with plain `u64` arithmetic in parallel; results
//! come back in a fixed order (lexicographic in the candidate index).

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{tau, wells_in, AutPair};
use crate::cohom;
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix};
use crate::extension::ExtensionData;
use crate::liealg::{AlgebraMap, LieAlgebra};

/// Largest `dim L` accepted by [`enumerate_aut_a`].
pub const MAX_ENUMERATION_DIM: usize = 5;

/// Largest number of candidate matrices scanned by any enumeration.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

fn modulus(field: Field) -> Result<u64> {
    field.modulus().ok_or(Error::FiniteFieldRequired)
}

fn checked_count(p: u64, exp: usize, what: &str) -> Result<u64> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&c| c <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::EnumerationTooLarge(format!("{p}^{exp} candidate {what}")))
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Row-major `rows × cols` matrix whose entries are the base-`p` digits of
/// `idx`, most significant first.
fn decode(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn invertible_mod_p(m: &[u64], n: usize, p: u64) -> bool {
    let mut a = m.to_vec();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return false;
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
        }
        let inv = powmod(a[col * n + col], p - 2, p);
        for r in col + 1..n {
            let f = mulmod(a[r * n + col], inv, p);
            if f != 0 {
                for c in col..n {
                    let sub = mulmod(f, a[col * n + c], p);
                    a[r * n + c] = (a[r * n + c] + p - sub) % p;
                }
            }
        }
    }
    true
}

/// Dense structure constants `c[(i * n + j) * n + k]` reduced mod `p`.
struct Tensor {
    n: usize,
    p: u64,
    c: Vec<u64>,
}

impl Tensor {
    fn new(alg: &LieAlgebra, p: u64) -> Self {
        let n = alg.dim();
        let mut c = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, s) in alg.basis_bracket(i, j).iter().enumerate() {
                    c[(i * n + j) * n + k] = s.residue().expect("finite field");
                }
            }
        }
        Tensor { n, p, c }
    }

    /// `m [e_i, e_j] = [m e_i, m e_j]` for all `i < j`; `m` is row-major.
    fn preserves(&self, m: &[u64]) -> bool {
        let (n, p) = (self.n, self.p);
        let mut lhs = vec![0u64; n];
        let mut rhs = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                let br = &self.c[(i * n + j) * n..(i * n + j + 1) * n];
                for k in 0..n {
                    lhs[k] = (0..n).fold(0, |acc, t| (acc + mulmod(m[k * n + t], br[t], p)) % p);
                    rhs[k] = 0;
                }
                for u in 0..n {
                    let mu = m[u * n + i];
                    if mu == 0 {
                        continue;
                    }
                    for v in 0..n {
                        let f = mulmod(mu, m[v * n + j], p);
                        if f == 0 || u == v {
                            continue;
                        }
                        let br = &self.c[(u * n + v) * n..(u * n + v + 1) * n];
                        for k in 0..n {
                            rhs[k] = (rhs[k] + mulmod(f, br[k], p)) % p;
                        }
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

fn to_matrix(field: Field, n: usize, m: &[u64]) -> Matrix {
    Matrix::from_fn(field, n, n, |r, c| field.from_u64(m[r * n + c]))
}

fn gl_raw(p: u64, n: usize) -> Result<Vec<Vec<u64>>> {
    let total = checked_count(p, n * n, "matrices")?;
    Ok((0..total).into_par_iter().map(|idx| decode(idx, p, n * n)).filter(|m| invertible_mod_p(m, n, p)).collect())
}

/// `GL_n(GF(p))` in lexicographic order of row-major entries.
pub fn enumerate_gl(field: Field, n: usize) -> Result<Vec<Matrix>> {
    let p = modulus(field)?;
    Ok(gl_raw(p, n)?.iter().map(|m| to_matrix(field, n, m)).collect())
}

/// `Aut(B)` over `GF(p)` by scanning `GL_n`.
pub fn enumerate_aut(alg: &std::sync::Arc<LieAlgebra>) -> Result<Vec<AlgebraMap>> {
    let p = modulus(alg.field())?;
    let n = alg.dim();
    let t = Tensor::new(alg, p);
    let raw: Vec<Vec<u64>> = gl_raw(p, n)?.into_par_iter().filter(|m| t.preserves(m)).collect();
    raw.iter().map(|m| AlgebraMap::new(alg.clone(), alg.clone(), to_matrix(alg.field(), n, m))).collect()
}

/// Every automorphism of `L` mapping `inj(A)` into itself.
///
/// Candidates are the invertible block upper triangular matrices
/// `[[T, Λ], [0, P]]` in the coordinates `(a, b) ↦ inj(a) + s(b)`; over a
/// field these are exactly the invertible maps preserving `inj(A)`.
pub fn enumerate_aut_a(ext: &ExtensionData) -> Result<Vec<AlgebraMap>> {
    let field = ext.l().field();
    let p = modulus(field)?;
    let n = ext.l().dim();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::EnumerationTooLarge(format!("dim L = {n} exceeds {MAX_ENUMERATION_DIM}")));
    }
    let (da, db) = (ext.a().dim(), ext.b().dim());
    let lam_count = checked_count(p, da * db, "off-diagonal blocks")?;
    let gl_a = gl_raw(p, da)?;
    let gl_b = gl_raw(p, db)?;
    let total = (gl_a.len() as u64)
        .checked_mul(gl_b.len() as u64)
        .and_then(|c| c.checked_mul(lam_count))
        .filter(|&c| c <= ENUMERATION_LIMIT)
        .ok_or_else(|| {
            Error::EnumerationTooLarge(format!("{} × {} × {lam_count} candidates", gl_a.len(), gl_b.len()))
        })?;
    let labels = ext.l().labels().to_vec();
    let transported = ext.l().change_basis(ext.coordinates(), labels)?;
    let t = Tensor::new(&transported, p);
    let per_t = gl_b.len() as u64 * lam_count;
    let blocks: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let (ti, rest) = ((idx / per_t) as usize, idx % per_t);
            let (pi, li) = ((rest / lam_count) as usize, rest % lam_count);
            let lam = decode(li, p, da * db);
            let mut m = vec![0u64; n * n];
            for r in 0..da {
                for c in 0..da {
                    m[r * n + c] = gl_a[ti][r * da + c];
                }
                for c in 0..db {
                    m[r * n + da + c] = lam[r * db + c];
                }
            }
            for r in 0..db {
                for c in 0..db {
                    m[(da + r) * n + da + c] = gl_b[pi][r * db + c];
                }
            }
            t.preserves(&m).then_some(m)
        })
        .collect();
    blocks
        .iter()
        .map(|m| {
            let g = ext.coordinates().checked_mul(&to_matrix(field, n, m))?.checked_mul(ext.coordinates_inverse())?;
            AlgebraMap::new(ext.l().clone(), ext.l().clone(), g)
        })
        .collect()
}

/// Counts and set comparisons auditing exactness of the sequence at
/// `Aut_A(L)` and `C_α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessLedger {
    /// `|Aut_A(L)|`.
    pub aut_a: u64,
    /// `|Z^1(B; A)| = p^{dim Z^1}`.
    pub z1: u64,
    /// `|ker τ|`.
    pub kernel_tau: u64,
    /// `ker τ = {γ_λ : λ ∈ Z^1}`.
    pub kernel_tau_is_z1: bool,
    /// `|image τ|`.
    pub image_tau: u64,
    /// `|C_α|`.
    pub compatible: u64,
    /// `|ker ω|` among compatible pairs.
    pub kernel_wells: u64,
    /// `image τ = ker ω`.
    pub image_is_kernel: bool,
    /// `|Aut_A(L)| = |Z^1| · |image τ|`.
    pub order_identity: bool,
}

impl ExactnessLedger {
    pub fn passes(&self) -> bool {
        self.kernel_tau_is_z1 && self.image_is_kernel && self.order_identity
    }
}

type PairKey = (Matrix, Matrix);

fn key(p: &AutPair) -> PairKey {
    (p.theta().matrix().clone(), p.phi().matrix().clone())
}

/// Enumerates `Aut_A(L)`, `Z^1`, `C_α` and `ker ω` and compares them.
pub fn exactness_audit(ext: &ExtensionData) -> Result<ExactnessLedger> {
    let field = ext.l().field();
    let p = modulus(field)?;
    let auts = enumerate_aut_a(ext)?;
    let identity = AutPair::identity(ext.a(), ext.b());

    let mut image = HashSet::new();
    let mut kernel = HashSet::new();
    for g in &auts {
        let pair = tau(g, ext)?;
        if pair == identity {
            kernel.insert(g.matrix().clone());
        }
        image.insert(key(&pair));
    }

    let z1_basis = cohom::cohomology(ext.action(), 1)?.cocycle_basis().to_vec();
    let z1_count = checked_count(p, z1_basis.len(), "derivations")?;
    let mut from_z1 = HashSet::new();
    for idx in 0..z1_count {
        let coeffs = decode(idx, p, z1_basis.len());
        let mut lam = cohom::Cochain::zero(ext.action().clone(), 1);
        for (c, b) in coeffs.iter().zip(&z1_basis) {
            lam = lam.add(&b.scale(&field.from_u64(*c)))?;
        }
        from_z1.insert(super::derivation_to_aut(&lam, ext)?.into_matrix());
    }

    let space = cohom::cohomology_unbounded(ext.action(), 2)?;
    let gl_a = enumerate_gl(field, ext.a().dim())?;
    let aut_b = enumerate_aut(ext.b())?;
    let mut compatible = 0u64;
    let mut kernel_wells = HashSet::new();
    for theta in &gl_a {
        let theta = AlgebraMap::new(ext.a().clone(), ext.a().clone(), theta.clone())?;
        for phi in &aut_b {
            let pair = AutPair::new(theta.clone(), phi.clone())?;
            if !super::is_compatible(&pair, ext.action()) {
                continue;
            }
            compatible += 1;
            if wells_in(&space, &pair, ext)?.is_zero() {
                kernel_wells.insert(key(&pair));
            }
        }
    }

    let aut_a = auts.len() as u64;
    let image_tau = image.len() as u64;
    Ok(ExactnessLedger {
        aut_a,
        z1: z1_count,
        kernel_tau: kernel.len() as u64,
        kernel_tau_is_z1: kernel == from_z1,
        image_tau,
        compatible,
        kernel_wells: kernel_wells.len() as u64,
        image_is_kernel: image == kernel_wells,
        order_identity: aut_a == z1_count * image_tau,
    })
}
