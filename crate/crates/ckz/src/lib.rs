//! Exact construction and machine verification of the confluent
//! Knizhnik–Zamolodchikov system for `sl_N` with Poincaré rank 2 at infinity.
//!
//! Layers, bottom up:
//! - [`rootsys`]: type-A roots, linear order, structure constants.
//! - [`ratfunc`]: exact rational functions, the coefficient field.
//! - [`ncalg`]: PBW normal ordering in `⊕ g ⊕ g_(2)`.
//! - [`fock`]: the tensor module `V_1 ⊗ … ⊗ V_n ⊗ V^(∞)`.
//! - [`hamiltonians`]: Gaudin operators, `H^(1)_p`, `H^(2)_p`, compatibility.
//! - [`classical`]: formal solutions at infinity and the classical one-forms.
//! - [`integrals`]: master function, `ω_m`, and the integral identities.
//! - [`acceptance`]: the end-to-end criteria behind `ckz selftest`.

pub mod acceptance;
pub mod classical;
pub mod error;
pub mod fock;
pub mod hamiltonians;
pub mod integrals;
pub mod linalg;
pub mod ncalg;
pub mod ratfunc;
pub mod rootsys;

pub use error::{Error, Result};

/// The guide's code snippets, run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/roots.md")]
    mod roots {}
    #[doc = include_str!("../../../book/src/ratfunc.md")]
    mod ratfunc {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    mod algebra {}
    #[doc = include_str!("../../../book/src/hamiltonians.md")]
    mod hamiltonians {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
