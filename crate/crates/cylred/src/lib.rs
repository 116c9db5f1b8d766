//! Momentum maps valued in cylinders, the holonomy groups that force them,
//! and the reduced spaces they produce, for symplectic actions of Abelian
//! Lie groups with magnetic (cocycle) terms.
//!
//! A symplectic group action only admits a globally defined conserved
//! momentum when a certain period group vanishes. When it does not, the
//! honest conserved object lives on a quotient cylinder instead of the dual
//! of the Lie algebra. This crate computes that whole chain explicitly for
//! products of tori and lines:
//!
//! - exact closures of finitely generated subgroups of R^n with entries in
//!   a real quadratic field ([`subgroup`]),
//! - the holonomy group of the connection whose horizontal lifts integrate
//!   the would-be momentum ([`holonomy`]),
//! - the cylinder-valued momentum map, its non-equivariance cocycle, and
//!   the affine action fixing it ([`momentum`]),
//! - the Poisson geometry the projection pushes onto the cylinder and onto
//!   the dual of a one-dimensional central extension ([`poisson`]),
//! - the symplectic, Poisson, and optimal reduced spaces together with the
//!   kernel identities that make them commute ([`reduction`]).
//!
//! Exact data stays exact: subgroup bases, kernels, annihilators, isotropy
//! algebras, and lattice memberships are computed over Q(sqrt(d)) with no
//! tolerances. Floats appear only in integrators, finite-difference
//! cross-checks, and report gates, with every tolerance centralized in
//! [`tolerances`].

pub mod scalar;
pub mod lie;
pub mod linalg;
pub mod cylinder;
pub mod expr;
pub mod holonomy;
pub mod model;
pub mod momentum;
pub mod numeric;
pub mod subgroup;
pub mod tolerances;
