//! Named example schemes.
//!
//! Each constructor returns a finitely supported sequence already known to
//! satisfy the normalization `sup |F| = 1`, so they make good starting
//! points for the analysis and expansion machinery.  Parameters are
//! validated against their admissible open intervals.

use num_complex::Complex64;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sequence::Sequence;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 || v >= 1.0 {
        return Err(Error::ParamOutOfRange {
            name,
            value: v,
            bounds: "(0, 1)",
        });
    }
    Ok(())
}

/// Third-order upwind-biased advection scheme with Courant number
/// `lambda`, supported on `{-1, 0, 1, 2}`:
///
/// ```text
/// a_{-1} = lambda (2 - lambda)(lambda - 1) / 6
/// a_0    = (2 - lambda)(1 - lambda^2) / 2
/// a_1    = lambda (2 - lambda)(1 + lambda) / 2
/// a_2    = -lambda (1 - lambda^2) / 6
/// ```
///
/// The coefficients sum to 1 and the symbol modulus touches 1 only at
/// `kappa = 1`, where the dissipation is fourth-order (`mu = 2`).
pub fn o3(lambda: f64) -> Result<Sequence> {
    check_open_unit("lambda", lambda)?;
    let l = lambda;
    Sequence::from_pairs(&[
        (-1, real(l * (2.0 - l) * (l - 1.0) / 6.0)),
        (0, real((2.0 - l) * (1.0 - l * l) / 2.0)),
        (1, real(l * (2.0 - l) * (1.0 + l) / 2.0)),
        (2, real(-l * (1.0 - l * l) / 6.0)),
    ])
}

/// Bernoulli step: `{0 -> 1 - p, 1 -> p}`.
pub fn bernoulli(p: f64) -> Result<Sequence> {
    check_open_unit("p", p)?;
    Sequence::new(0, vec![real(1.0 - p), real(p)])
}

/// Symmetric nearest-neighbor walk: `{-1 -> 1/2, 1 -> 1/2}`.  Its symbol
/// touches modulus 1 at both `kappa = 1` and `kappa = -1`.
pub fn symmetric_walk() -> Sequence {
    Sequence::from_pairs(&[(-1, real(0.5)), (1, real(0.5))]).expect("fixed coefficients are valid")
}

/// Lax-Friedrichs advection scheme with Courant number `lambda`:
/// `a_{+1} = (1 + lambda) / 2`, `a_{-1} = (1 - lambda) / 2`, oriented so
/// the drift at `kappa = 1` equals `+lambda`.
pub fn lax_friedrichs(lambda: f64) -> Result<Sequence> {
    check_open_unit("lambda", lambda)?;
    Sequence::from_pairs(&[
        (-1, real((1.0 - lambda) / 2.0)),
        (1, real((1.0 + lambda) / 2.0)),
    ])
}

/// Reads a sequence from a JSON file (see [`Sequence::read_file`]).
pub fn from_file(path: impl AsRef<Path>) -> Result<Sequence> {
    Sequence::read_file(path)
}
