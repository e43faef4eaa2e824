//! Convolution powers of finitely supported complex sequences on the
//! integer lattice.
//!
//! The crate computes iterated convolutions `a^{*n}` and their local limit
//! behavior: it locates the circle points where the symbol modulus touches
//! its supremum, classifies each point by drift, dissipation order, and
//! cumulants, builds the correction polynomials of the expansion, evaluates
//! generalized-Gaussian attractors by quadrature, and measures how fast the
//! remainder decays in `l^p`.

pub mod analysis;
pub mod attractor;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod poly;
pub mod report;
pub mod sequence;
pub mod series;
pub mod tol;
pub mod verify;

pub use analysis::{
    analyze, classify, find_tangency_points, snap_angle, Alternative, Angle, SymbolReport,
    SymbolScan, TangencyPoint,
};
pub use attractor::{
    attractor_derivative, eval_applied, eval_attractor, AttractorEvaluator, AttractorSpec,
    QuadratureRule,
};
pub use engine::{
    default_n_list, fit_slope, EnvelopeCheck, ExpansionPlan, ExpansionResult, RemainderNorms,
    SlopeFit,
};
pub use error::{Error, Result};
pub use poly::{bell_sum_polynomial, build_polynomials, ExpansionPolynomial};
pub use sequence::{LpNorm, Sequence};
pub use series::TaylorSeries;
pub use verify::{run_suite, suite_names, CheckOutcome, SuiteReport};
