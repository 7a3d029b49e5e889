//! Exact-arithmetic engine for nested algebraic Bethe ansatz computations.
//!
//! The crate implements, over exact rationals (and univariate rational
//! functions where a limit is needed), the combinatorial formulas governing
//! how monodromy-matrix entries act on nested Bethe vectors:
//!
//! * [`exactmath`]: rational scalars, dense polynomials, univariate rational
//!   functions with exact limits, and the two-parameter kernels `g`, `f`, `h`
//!   together with their graded variants and set products.
//! * [`partitions`]: ordered set partitions of parameter sets subject to
//!   per-level cardinality constraints, and the reordering maps used by the
//!   highest-coefficient symmetries.
//! * [`izergin`]: the domain-wall partition function (an Izergin-type
//!   determinant), a pole-free evaluation of its ratio with `f`, and two of
//!   its algebraic identities.
//! * [`action`]: multiple/single/dual/zero-mode actions of monodromy entries
//!   on formal Bethe vectors, the transfer-matrix action, and Bethe-equation
//!   residuals, all driven by a [`action::ModelContext`].
//! * [`superaction`]: the graded (supersymmetric) counterparts of the action
//!   formulas.
//! * [`scalar`]: highest coefficients of scalar products via four equivalent
//!   recursions (plus graded versions), the scalar-product sum formula, and
//!   its consistency checks.
//! * [`chain`]: a dense brute-force monodromy-matrix oracle on small spin
//!   chains used to validate every formula against first principles.
//!
//! All public entry points return structured errors instead of panicking on
//! invalid input; genuine poles (vanishing denominators that are not
//! removable) are reported as [`Error::Pole`].

pub mod action;
pub mod chain;
pub mod draw;
mod error;
pub mod exactmath;
pub mod izergin;
pub mod partitions;
pub mod scalar;
pub mod superaction;

pub use action::{AlphaMode, BetheSide, FormalBV, FormalCombination, ModelContext};
pub use error::Error;
pub use exactmath::{AlgebraSpec, LimitPoint, Poly, Rat, Scalar, UniRat};
pub use partitions::{BetheIndex, IJPartition, ParamSet};
pub use chain::{inner_product, ChainSpec, ExactMatrix, ExactVector, OracleReport, DIM_CAP};
pub use scalar::{
    check_beta_dressed_sum, check_generalized_model_reduction, check_hc_mu_symmetry,
    check_sp_symmetry, scalar_product_sum, scalar_product_sum_with, CheckReport, HCRequest,
    HCSelector, HcEngine,
};
pub use superaction::GammaProfile;
