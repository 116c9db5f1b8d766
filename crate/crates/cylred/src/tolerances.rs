//! Every numerical tolerance in the crate, in one place, with the reason.
//!
//! Exact-arithmetic code paths never consult these. They exist only where
//! floats enter: integrators, finite differences, float subspace
//! comparisons, and report-level pass/fail gates.

/// Gate for RK4 holonomy displacements against closed-form values at the
/// reference step count of 1e4 steps per loop. Fourth-order error at that
/// resolution sits many orders below this.
pub const HOLONOMY_ABS: f64 = 1e-8;

/// Horizontal lifts of paths on a lifted surface must stay on it to this
/// residual at 1e4 integrator steps.
pub const LIFT_SURFACE_ABS: f64 = 1e-8;

/// Distance on the cylinder under which two momentum values count as the
/// same point, used by fiber-equivalence and equivariance sweeps. Wrapped
/// angle coordinates make this an absolute gate.
pub const CYLINDER_POINT_ABS: f64 = 1e-9;

/// Conserved-quantity drift allowed over a Hamiltonian trajectory of length
/// T = 10 at step 1e-3. Dominated by RK4 truncation, not roundoff.
pub const NOETHER_DRIFT_ABS: f64 = 1e-6;

/// Agreement between pulled-back brackets on phase space and cocycle
/// brackets downstairs, evaluated pointwise on random observable pairs.
pub const POISSON_MAP_ABS: f64 = 1e-8;

/// Principal angles between an exactly computed subspace and its float
/// counterpart (kernels, omega-orthogonals, finite-difference ranges).
pub const SUBSPACE_ANGLE_ABS: f64 = 1e-5;

/// Step for central finite differences of momentum components; paired with
/// angle unwrapping so wrapped coordinates cannot produce spurious O(1)
/// jumps.
pub const FD_STEP: f64 = 1e-6;

/// Containment gate for the epsilon-net closure oracle: every sampled
/// candidate point must sit this close to the exactly computed closure.
pub const ORACLE_CONTAINMENT_ABS: f64 = 1e-9;

/// Density gate for the epsilon-net closure oracle: every point of the
/// exact closure's fundamental patch must have a sampled group point this
/// close, witnessing that the closure is not too big.
pub const ORACLE_DENSITY_ABS: f64 = 1e-2;

/// Numerical holonomy generators are snapped to field elements with
/// denominators up to 1e4 when they sit within this distance of one.
pub const RATIONALIZE_ABS: f64 = 1e-6;

/// Nondegeneracy floor for symplectic forms supplied through configs;
/// determinants below this are rejected as singular.
pub const OMEGA_DET_MIN: f64 = 1e-10;

/// Angle wrap guard: values this close to the upper seam of [0, 1) are
/// treated as the seam itself when canonicalizing cylinder coordinates.
pub const ANGLE_WRAP_GUARD: f64 = 1e-9;

/// RK4 order check: halving the step must shrink the error by a factor in
/// this closed interval (16 in theory, slack for roundoff and constants).
pub const RK4_RATIO_RANGE: (f64, f64) = (12.0, 20.0);

/// Sampled loops must return to their start on the chart within this
/// distance (mod periods). This validates user-supplied path data, so it
/// is far looser than integrator accuracy.
pub const LOOP_CLOSURE_ABS: f64 = 1e-6;

/// A Hamiltonian declared invariant under (a subgroup of) the action must
/// have directional derivatives along the declared generators below this
/// at every sampled point; exact invariance is a modeling assumption, so
/// this is a typo detector, not a numeric gate.
pub const NOETHER_INVARIANCE_ABS: f64 = 1e-10;

/// Equivariance sweep gate: momentum of a translated point against the
/// affine action on the cylinder, in floats (identity is exact in field
/// arithmetic, so this only absorbs roundoff).
pub const EQUIVARIANCE_ABS: f64 = 1e-10;

/// Well-definedness sweep gate: changing a group element's covering
/// coordinates by a kernel-lattice vector must leave the momentum value
/// fixed on the cylinder.
pub const WELLDEF_ABS: f64 = 1e-12;

/// Additivity of the non-equivariance cocycle in floats.
pub const COCYCLE_ADD_ABS: f64 = 1e-12;

/// Commutation of momentum with restriction to a subalgebra, sampled on
/// random phase points and random representatives.
pub const RESTRICTION_DIAGRAM_ABS: f64 = 1e-10;

/// Defining relation of the group-valued momentum map, checked by central
/// finite differences (step FD_STEP), which dominate this budget.
pub const J_RELATION_ABS: f64 = 1e-6;

/// Singular values of finite-difference Jacobians below this count as
/// zero when ranking; FD truncation error sits near 1e-10 for our charts,
/// real singular values near one.
pub const FD_RANK_CUTOFF: f64 = 1e-6;
