//! Exact cohomology and automorphism lifting for abelian extensions of
//! finite-dimensional Lie algebras.
//!
//! Given `0 → A → L → B → 0` with `A` abelian, a pair `(θ, φ) ∈ Aut(A) × Aut(B)`
//! lifts to `Aut(L)` iff it is compatible with the induced action and its
//! Wells class in `H^2(B; A)` vanishes. [`lifting::try_lift`] decides this and
//! returns an explicit lift or a structured reason.
//!
//! All arithmetic is exact over `Q` or a prime field `GF(p)`.

pub mod cli;
pub mod cohom;
pub mod error;
pub mod exactlin;
pub mod extension;
pub mod freenil;
pub mod liealg;
pub mod lifting;
pub mod modact;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-linear-algebra.md")]
    mod exact_linear_algebra {}
    #[doc = include_str!("../../../book/src/algebras-and-modules.md")]
    mod algebras_and_modules {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/free-nilpotent.md")]
    mod free_nilpotent {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
