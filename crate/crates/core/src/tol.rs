//! Centralized numerical tolerances.
//!
//! Every validation threshold used by the library lives here. Dimensions are
//! at most 16, so exact-arithmetic identities hold to a few ulps and the
//! thresholds below leave generous headroom over accumulated rounding.

/// Hermiticity check: max entrywise |M - M†|.
pub const HERMITICITY: f64 = 1e-10;

/// Unitarity check: max entrywise |U†U - 1|.
pub const UNITARITY: f64 = 1e-10;

/// Density-matrix trace check: |Tr ρ - 1|.
pub const UNIT_TRACE: f64 = 1e-10;

/// Density-matrix positivity: smallest eigenvalue must be ≥ -PSD_FLOOR.
pub const PSD_FLOOR: f64 = 1e-10;

/// Kraus completeness: max entrywise |Σ K†K - 1|.
pub const KRAUS_COMPLETENESS: f64 = 1e-9;

/// Choi-matrix positivity slack when re-extracting Kraus operators.
pub const CHOI_PSD: f64 = 1e-9;

/// Eigenvalues below this are discarded in Kraus extraction; they are
/// numerical noise and keeping them would inflate the set past dim².
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Branch probabilities below this carry no normalizable conditional state.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-12;

/// Off-diagonal magnitude allowed in a "diagonal" environment state.
pub const ENV_DIAGONAL: f64 = 1e-12;

/// Charger parallelism test on the cross product x₁y₂ - x₂y₁.
pub const PARALLEL_CHARGERS: f64 = 1e-12;

/// Fixed RK4 step for Lindblad integration; intervals here are O(1) in
/// natural units, so this is far below the method's stability limit.
pub const RK4_MAX_STEP: f64 = 1e-4;

/// How far an arccos argument may poke outside [-1, 1] before it is an
/// error rather than rounding to be clamped.
pub const ARCCOS_CLAMP: f64 = 1e-9;
