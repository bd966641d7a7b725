//! Central tolerance table.
//!
//! Every floating-point comparison in the crate goes through one of these
//! constants so that numerical policy lives in a single place.

/// Optimality / cost-equality comparisons in the transport solver.
pub const OPTIMALITY: f64 = 1e-9;

/// Smallest plan entry kept; anything at or below is treated as zero mass.
pub const MASS_FLOOR: f64 = 1e-12;

/// Marginal-conservation check on transport plans.
pub const MARGINAL: f64 = 1e-9;

/// Discrete measures must have weights summing to one within this.
pub const WEIGHT_SUM: f64 = 1e-12;

/// A cycle is a monotonicity violation iff its total weight is below minus this.
pub const CYCLE_DEFECT: f64 = 1e-9;

/// Minimal strict improvement for a Bellman-Ford relaxation step.
pub const RELAX_EPS: f64 = 1e-12;

/// Triangle-inequality slack allowed on finite metric matrices and random triples.
pub const TRIANGLE: f64 = 1e-12;

/// Constant-speed property of geodesics.
pub const GEODESIC_SPEED: f64 = 1e-9;

/// Absolute resolution in t for the cone-membership ternary search.
pub const CONE_T_RESOLUTION: f64 = 1e-10;

/// Slack on the triangle lower bound of metric directional derivatives.
pub const DERIVATIVE_TRIANGLE: f64 = 1e-8;

/// Equidistance hypothesis d(x,y) = d(x,z) for non-branching scans.
pub const EQUIDISTANCE: f64 = 1e-9;

/// Dual-norm-one and Euler identities for norm gradients.
pub const GRADIENT_IDENTITY: f64 = 1e-9;

/// Exact point-coincidence checks (e.g. cone apex against a base point).
pub const POINT_EQ: f64 = 1e-12;
