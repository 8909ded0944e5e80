//! Exact construction and verification of the regular 3-polytopes of order
//! `4p^m` and type `{p, 2p}` arising from `R = G ⋊ ⟨σ, τ⟩`, where `G` is a
//! `p`-group of maximal class with an abelian maximal subgroup.
//!
//! Modules, bottom-up:
//!
//! - [`arith`]: binomials, classical identities, the `u_i` coefficients.
//! - [`pgroup`]: normal-form arithmetic in `G`.
//! - [`autos`]: σ and τ as generator-image tables.
//! - [`extension`]: arithmetic in `R`.
//! - [`cgroup`]: the involutions `ρ0, ρ1, ρ2` and the string C-group checks.
//! - [`polytope`]: the coset face lattice and its exports.
//! - [`cli`]: the `regpoly` command line.

pub mod arith;
pub mod autos;
pub mod cgroup;
pub mod cli;
pub mod closure;
pub mod extension;
pub mod json;
pub mod pgroup;
pub mod polytope;

pub use autos::{AutoLabel, GeneratorImageTable};
pub use cgroup::{verify_instance, Check, VerificationReport, VerifyConfig};
pub use closure::CapExceeded;
pub use extension::{ExtElement, Extension};
pub use pgroup::{BetaAction, Group, GroupElement, GroupParams, ParamError};
pub use polytope::{build_lattice, FaceLattice};
