//! Centralized numerical tolerances and size thresholds.
//!
//! Every fixed constant that decides "is this zero", "are these equal", or
//! "which algorithm runs" lives here, so the knobs are visible in one place
//! and tests can reference the same values the library uses.

/// Coefficients at or below this modulus are trimmed from sequence ends.
/// Far below any meaningful amplitude, just above the subnormal range.
pub const TRIM_THRESHOLD: f64 = 1e-300;

/// Convolution uses direct summation when the shorter operand has at most
/// this many entries; beyond it, the FFT path wins.
pub const DIRECT_CONV_MAX: usize = 32;

/// Acceptable deviation of sup |F| from 1 for a normalized symbol.
pub const TOL_NORM: f64 = 1e-10;

/// A refined local maximum of |F|^2 - 1 within this distance of 0 counts as
/// a tangency point.
pub const TOL_DETECT: f64 = 1e-10;

/// Relative threshold (against the largest log-series coefficient) below
/// which a Taylor coefficient is treated as zero during classification.
pub const TOL_COEFF: f64 = 1e-9;

/// Refined maxima closer than this along the circle are merged into one
/// tangency point.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Multiplicative slack allowed when checking remainder profiles against a
/// generalized-Gaussian envelope; absorbs quadrature and fit noise.
pub const ENVELOPE_SLACK: f64 = 0.05;

/// Envelope ratios are only scored where the envelope itself exceeds this
/// floor.  Below it the true remainder sits under the f64 roundoff of the
/// exact powers (~1e-15 absolute), so ratios would measure noise, not decay.
pub const ENVELOPE_FLOOR: f64 = 1e-10;

/// Quadrature node doubling stops once successive integral values agree to
/// this tolerance.
pub const QUAD_TOL: f64 = 1e-12;

/// Starting trapezoid node count for attractor quadrature.
pub const QUAD_NODES_START: usize = 8192;

/// Hard cap on trapezoid nodes.
pub const QUAD_NODES_MAX: usize = 1 << 20;

/// Attractor values are treated as identically zero outside the window
/// where their envelope falls below this fraction of the quadrature's
/// total variation.  The cutoff must stay well above the roundoff floor of
/// the node sum (about `2e-16` times the total variation), or the window
/// scan can never observe values as "zero".
pub const ATTRACTOR_TAIL: f64 = 1e-13;
