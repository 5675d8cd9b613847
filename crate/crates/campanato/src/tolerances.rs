//! Frozen regression constants.
//!
//! The equivalences and inequalities this crate checks hold with unspecified
//! constants, so the harness pins empirical ceilings: each value below was
//! measured once on the default grids, padded with the stated headroom, and
//! then frozen.  A regression that pushes a measurement past its ceiling is
//! a real behavioural change, not drift — these numbers must not be bumped
//! to make a failing run pass without understanding why it moved.

/// Ceiling for max/min of the ratio mobius_seminorm / campanato_seminorm
/// over the Cauchy-kernel family, |b| in {0.3, 0.6, 0.9, 0.97}, at
/// (p, eta) = (2, 0.5) and (2, 1).  Measured spread 1.344 at eta = 0.5 and
/// 1.040 at eta = 1 (default grids; 1.338 / 1.018 doubled); frozen at
/// ~1.5x headroom, far under the a-priori ceiling of 20.
pub const EQUIVALENCE_SPREAD_MOBIUS: f64 = 2.0;

/// Same ceiling for lp_star_seminorm / campanato_seminorm on the same
/// family and indices.  Measured spread 1.672 at eta = 0.5 and 1.914 at
/// eta = 1 (1.680 / 1.917 doubled); frozen at ~1.5x headroom.
pub const EQUIVALENCE_SPREAD_LPSTAR: f64 = 3.0;

/// Ceiling for bloch_norm(f, (p+1-eta)/p) / lp_star_seminorm(f, p, eta)
/// across the embedding family (monomials to degree 6, Cauchy kernels to
/// |b| = 0.97, the log kernel) at (2, 0.5) and (2, 1).  Measured max 3.06,
/// attained by the b = 0.97 kernel, stable to 0.2% under grid doubling;
/// frozen at ~1.3x headroom.
pub const EMBEDDING_CONSTANT: f64 = 4.0;

/// Ceiling for the Hardy-norm splitting ratio over the stress family
/// {Monomial{n} ∘ scaled monomials}, p in {2, 4}.  For f = z^n and
/// phi = s z^m the ratio is s^{n - 2/p} <= 1 exactly, and the measured
/// sweep peaks at 1.0000 (n = 1, p = 2); frozen with 25% headroom to
/// cover quadrature on future non-extremal members.
pub const SPLITTING_CEILING: f64 = 1.25;

/// Relative change allowed for each equivalence ratio when every grid
/// parameter is doubled.  Measured worst drift 2.1% (the b = 0.9 kernel at
/// eta = 1); the ceiling keeps the documented one-decade margin.
pub const REFINEMENT_DRIFT: f64 = 0.10;

/// Floor for the certified min/max ratio of the interleaved lacunary pair.
/// With the frozen base rule the sweep measured 0.369 at alpha = 1 and
/// never less than 0.095 for alpha in [0.3, 2]; frozen at roughly half the
/// worst case, above the 0.01 certification cutoff inside bloch_pair.
pub const BLOCH_PAIR_FLOOR: f64 = 0.05;

/// Floor for distance_estimate on the base-2 lacunary input at eta = 1
/// (coefficient exponent alpha = (3 - eta)/2 = 1).  Measured transition
/// threshold 2.889 on the default grids; frozen at a third, an order above
/// the exactly-zero polynomial readings.
pub const LACUNARY_DISTANCE_FLOOR: f64 = 1.0;
