//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by sequence construction, symbol analysis, expansion
/// planning, and scheme parameter validation.
#[derive(Debug, Error)]
pub enum Error {
    /// A sequence had no entries above the trim threshold.
    #[error("sequence has no nonzero coefficients")]
    EmptySequence,

    /// A coefficient was NaN or infinite.
    #[error("non-finite coefficient at index {index}")]
    NonFinite {
        /// Lattice index of the offending coefficient.
        index: i64,
    },

    /// Convolution powers are defined for exponents n >= 1.
    #[error("convolution power requires n >= 1")]
    ZeroPower,

    /// An Lp norm order below 1 (or NaN) was requested.
    #[error("Lp norm requires p >= 1, got {p}")]
    InvalidNormOrder {
        /// The rejected order.
        p: f64,
    },

    /// The symbol vanished at the requested circle point, so its logarithm
    /// has no Taylor expansion there.
    #[error("symbol is zero at the expansion point")]
    ZeroConstantTerm,

    /// The supremum of |F| over the unit circle is not 1.  `factor` is the
    /// scalar that would normalize the sequence.
    #[error("symbol is not sup-normalized: sup |F| = {sup_modulus} (normalizing factor {factor})")]
    NotNormalized {
        /// Measured supremum of the symbol modulus over the circle.
        sup_modulus: f64,
        /// Multiplying the sequence by this factor normalizes it.
        factor: f64,
    },

    /// |F| equals 1 everywhere on the circle; there is no isolated tangency
    /// structure to classify.
    #[error("symbol modulus is identically 1 on the circle; no isolated tangency points exist")]
    AllModulusOne {
        /// Measured supremum of the symbol modulus over the circle.
        sup_modulus: f64,
    },

    /// The first-order log coefficient at a tangency point has a
    /// non-negligible imaginary part, so the drift is not a real number.
    #[error("drift at theta = {theta} is not real (imaginary part {imag})")]
    DriftNotReal {
        /// Circle angle of the offending point.
        theta: f64,
        /// Imaginary part of the would-be drift.
        imag: f64,
    },

    /// The leading log coefficient beyond the drift is odd-order or has
    /// non-positive real dissipation, so no generalized-Gaussian limit
    /// applies at this point.
    #[error("dispersive behavior at theta = {theta}: leading log coefficient of order {order} has no positive-definite even part")]
    DispersiveCase {
        /// Circle angle of the offending point.
        theta: f64,
        /// Order of the leading coefficient past the drift term.
        order: u32,
    },

    /// No log coefficient beyond the drift survived at any probed order;
    /// the symbol behaves like a pure modulation.
    #[error("no dissipation found at theta = {theta} up to series order {max_order}")]
    DegenerateSymbol {
        /// Circle angle of the probed point.
        theta: f64,
        /// Largest Taylor order probed.
        max_order: usize,
    },

    /// Building expansion polynomials of order m needs cumulants up to
    /// 2*mu + m, which the classified point does not carry.
    #[error("expansion order {requested} needs cumulants up to {needed}, point only has them up to {available}")]
    InsufficientCumulants {
        /// Requested polynomial order.
        requested: usize,
        /// Largest cumulant index required.
        needed: u32,
        /// Largest cumulant index available.
        available: u32,
    },

    /// A dissipation coefficient with non-positive real part reached the
    /// attractor layer.
    #[error("attractor requires Re(beta) > 0, got {re_beta}")]
    NonDissipativeBeta {
        /// Offending real part.
        re_beta: f64,
    },

    /// An expansion plan was assembled from an analysis that cannot drive
    /// the approximation (wrong alternative or no classified points).
    #[error("expansion plan is incomplete: {reason}")]
    PlanIncomplete {
        /// Human-readable cause.
        reason: String,
    },

    /// A slope fit was requested on fewer than three usable data points.
    #[error("slope fit needs at least 3 nonzero data points, got {count}")]
    DegenerateData {
        /// Number of usable points.
        count: usize,
    },

    /// A scheme parameter fell outside its admissible open interval.
    #[error("parameter {name} = {value} is outside {bounds}")]
    ParamOutOfRange {
        /// Parameter name.
        name: &'static str,
        /// Rejected value.
        value: f64,
        /// Human-readable admissible range.
        bounds: &'static str,
    },

    /// A sequence file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Filesystem failure while reading or writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// An unknown verification suite name was requested.
    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
