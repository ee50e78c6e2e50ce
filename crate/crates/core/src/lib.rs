//! Laplace-transform functional calculus for finite-dimensional models of
//! operator semigroups.
//!
//! For a compactly supported measure `mu` on `(0, inf)` with transform
//! `F = L mu`, the calculus sends a semigroup `T` with generator `A` to
//! `F(-uA) = \int T(u t) d mu(t)`. The crate evaluates that operator on a
//! handful of model semigroups and checks the lower estimates, curve
//! constructions and idempotent criteria that go with it.
//!
//! ```
//! use semigroup_calculus::measures::standard::two_point;
//! use semigroup_calculus::semigroups::NilpotentShift;
//! use semigroup_calculus::calculus::{func_calc, op_norm};
//!
//! let shift = NilpotentShift::new(64);
//! let value = func_calc(&shift, &two_point(), 8.0 / 64.0);
//! let norm = op_norm(&value.operator).value;
//! assert!(norm > 1.4);
//! ```

pub mod calculus;
pub mod complexfn;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod semigroups;
pub mod spectral;

pub use num_complex::Complex64 as C64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/semigroups.md")]
    mod semigroups {}
    #[doc = include_str!("../../../book/src/calculus.md")]
    mod calculus {}
    #[doc = include_str!("../../../book/src/resolvents.md")]
    mod resolvents {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
