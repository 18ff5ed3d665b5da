//! Tools for reasoning about which point-wise activations commute with a matrix group.
//!
//! The crate covers five layers:
//!
//! * [`matrix`] and [`group`]: dense matrices, monomial factorization and finite closure.
//! * [`tclass`]: the multiplicative group of row subset sums, its place among the
//!   subgroups of the non-zero reals, and the maximal activation family it admits.
//! * [`activations`]: standard activations, `b`-multiplicative activations built from
//!   profiles on `[1, b]`, family membership tests and point-wise equivariance checks.
//! * [`normalize`]: the positive diagonal scaling that turns a bounded monomial group
//!   into (signed) permutation matrices, or the cycle that rules it out.
//! * [`repspaces`]: permutation actions, orbits, tensor-power actions and the orbit
//!   bases of equivariant affine layers.

pub mod activations;
pub mod error;
pub mod group;
pub mod matrix;
pub mod normalize;
pub mod repspaces;
pub mod tclass;

pub use activations::{ActivationFn, EtaProfile};
pub use error::{Error, Result};
pub use group::{close_group, ClosureResult, GroupSpec};
pub use matrix::{is_unit_row, monomial_decompose, Matrix, MonomialForm};
pub use normalize::{positive_scaling, signed_normalize, ScalingResult};
pub use repspaces::{LayerBasis, OrbitDecomposition, Perm, PermAction};
pub use tclass::{
    classify_group, classify_subgroup, maximal_family, ActivationFamily, GroupClassification,
    SubgroupClass,
};

/// Default absolute tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default element cap for [`close_group`].
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
