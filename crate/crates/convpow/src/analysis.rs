//! Locating and classifying the circle points where the symbol modulus
//! reaches its supremum.
//!
//! For a sup-normalized sequence the modulus of the symbol either equals 1
//! on the whole circle or touches 1 at finitely many points.  Each touching
//! point carries the local data that drives the limit expansion: a real
//! drift `alpha`, a dissipation order `2 mu` with coefficient `beta`
//! (`Re beta > 0`), and higher cumulants `gamma_nu`.  These are read off the
//! Taylor coefficients `t_nu` of `log(F(kappa e^{i xi}) / F(kappa))`:
//!
//! * `t_1 = i alpha`,
//! * `t_nu` negligible for `1 < nu < 2 mu`,
//! * `t_{2 mu} = -beta`,
//! * `t_nu = gamma_nu i^nu / nu!` for `nu > 2 mu`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::{powi64, Sequence};
use crate::series::TaylorSeries;
use crate::tol::{CLUSTER_TOL, TOL_COEFF, TOL_DETECT, TOL_NORM};

const TAU: f64 = 2.0 * PI;

/// Angles this close to a rational multiple of pi are snapped to it exactly.
const SNAP_TOL: f64 = 1e-9;

/// Largest denominator tried when snapping angles to rational multiples of pi.
const SNAP_MAX_DEN: i64 = 12;

/// Window around a refined maximum searched for a rational-angle
/// representative.  Maxima of order `2 mu` are flat to `eps^{1/(2 mu)}`
/// (about 1e-4 for `mu = 2`), so sampling alone cannot localize them more
/// tightly; a snap candidate is only accepted after verifying that the
/// symbol modulus actually touches 1 there.
const SNAP_WINDOW: f64 = 5e-4;

/// Which of the two mutually exclusive shapes the symbol modulus takes on
/// the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alternative {
    /// `|F| = 1` everywhere; no isolated structure exists.
    AllModulusOne,
    /// `|F| < 1` except at finitely many points.
    FiniteTangency,
}

/// A circle angle, with an exact representation when it is a rational
/// multiple of pi with small denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle {
    /// `Some((num, den))` encodes the exact angle `num * pi / den`, with
    /// `den >= 1`, `0 <= num < 2 den`, and `gcd(num, den) = 1`.
    pub exact: Option<(i64, i64)>,
    /// The angle in radians, reduced to `[0, 2 pi)`.
    pub radians: f64,
}

impl Angle {
    /// The point `e^{i angle}` on the unit circle; quarter-turn angles give
    /// exact values.
    pub fn unit(&self) -> Complex64 {
        if let Some((num, den)) = self.exact {
            if (2 * num) % den == 0 {
                return match (2 * num / den).rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        Complex64::from_polar(1.0, self.radians)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// Reduces `theta` to `[0, 2 pi)` and snaps it to `num * pi / den`
/// (`den <= 12`) when within 1e-9 of such an angle.
pub fn snap_angle(theta: f64) -> Angle {
    let mut radians = theta.rem_euclid(TAU);
    if TAU - radians < SNAP_TOL {
        radians = 0.0;
    }
    for den in 1..=SNAP_MAX_DEN {
        let num = (radians * den as f64 / PI).round() as i64;
        let snapped = num as f64 * PI / den as f64;
        if (radians - snapped).abs() <= SNAP_TOL {
            let g = gcd(num, den);
            let (num, den) = (num / g, den / g);
            let num = num.rem_euclid(2 * den);
            return Angle {
                exact: Some((num, den)),
                radians: num as f64 * PI / den as f64,
            };
        }
    }
    Angle {
        exact: None,
        radians,
    }
}

/// Result of scanning the circle: the measured supremum of `|F|`, which of
/// the two alternatives holds, and the (unclassified) tangency angles.
#[derive(Clone, Debug)]
pub struct SymbolScan {
    /// Supremum of the symbol modulus over the circle.
    pub sup_modulus: f64,
    /// Shape of the modulus profile.
    pub alternative: Alternative,
    /// Tangency angles in `[0, 2 pi)`, ascending; empty when the first
    /// alternative holds.
    pub thetas: Vec<f64>,
}

/// A classified tangency point of the symbol.
#[derive(Clone, Debug)]
pub struct TangencyPoint {
    /// Circle angle in `[0, 2 pi)`.
    pub theta: f64,
    /// The circle point `e^{i theta}`.
    pub kappa: Complex64,
    /// Symbol value `F(kappa)`, of modulus 1.
    pub value: Complex64,
    /// Real drift `alpha`.
    pub alpha: f64,
    /// Half the dissipation order: the leading log coefficient sits at
    /// `xi^{2 mu}`.
    pub mu: u32,
    /// Dissipation coefficient, `Re beta > 0`.
    pub beta: Complex64,
    /// Cumulants `gamma_nu` for `2 mu + 1 <= nu <= 2 mu + M`.
    pub cumulants: BTreeMap<u32, Complex64>,
    /// Number of cumulants carried (the expansion order `M`).
    pub order: usize,
    /// Set when `Re beta` sits within two decades of the zero threshold, so
    /// the dissipative classification is numerically marginal.
    pub marginal_dissipation: bool,
    /// Exact/approximate form of `theta`.
    pub kappa_angle: Angle,
    /// Exact/approximate form of `arg F(kappa)`.
    pub value_angle: Angle,
}

/// Full analysis of a symbol: normalization status, supremum, alternative,
/// and the classified tangency points.
#[derive(Clone, Debug)]
pub struct SymbolReport {
    /// Whether `sup |F|` equals 1 within tolerance (always true on the `Ok`
    /// path; non-normalized symbols are rejected with an error).
    pub normalized: bool,
    /// Supremum of the symbol modulus over the circle.
    pub sup_modulus: f64,
    /// Shape of the modulus profile.
    pub alternative: Alternative,
    /// Classified tangency points, ascending in `theta`.
    pub points: Vec<TangencyPoint>,
}

/// Symbol value, first, and second `theta`-derivative in one pass.
fn symbol_jet(a: &Sequence, theta: f64) -> (Complex64, Complex64, Complex64) {
    let z = Complex64::from_polar(1.0, theta);
    let zero = Complex64::new(0.0, 0.0);
    let (mut f0, mut f1, mut f2) = (zero, zero, zero);
    for (j, &c) in a.coeffs().iter().enumerate().rev() {
        let il = Complex64::new(0.0, (a.offset() + j as i64) as f64);
        f0 = f0 * z + c;
        f1 = f1 * z + c * il;
        f2 = f2 * z + c * il * il;
    }
    let zoff = powi64(z, a.offset());
    (f0 * zoff, f1 * zoff, f2 * zoff)
}

/// `g(theta) = |F(e^{i theta})|^2 - 1`, the tangency indicator.
fn g_value(a: &Sequence, theta: f64) -> f64 {
    a.symbol(theta).norm_sqr() - 1.0
}

/// First and second derivative of `g`.
fn g_derivatives(a: &Sequence, theta: f64) -> (f64, f64) {
    let (f0, f1, f2) = symbol_jet(a, theta);
    let d1 = 2.0 * (f1 * f0.conj()).re;
    let d2 = 2.0 * (f1.norm_sqr() + (f2 * f0.conj()).re);
    (d1, d2)
}

/// Golden-section maximization of `g` on `[lo, hi]`.
fn golden_max(a: &Sequence, mut lo: f64, mut hi: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut g1 = g_value(a, x1);
    let mut g2 = g_value(a, x2);
    while hi - lo > 1e-14 {
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - INVPHI * (hi - lo);
            g1 = g_value(a, x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + INVPHI * (hi - lo);
            g2 = g_value(a, x2);
        }
    }
    0.5 * (lo + hi)
}

/// Newton polish on `g' = 0`, keeping the iterate only while it genuinely
/// shrinks `|g'|`.  Near maxima of order 4 and higher the curvature signal
/// drowns in roundoff and the loop exits immediately, leaving the
/// golden-section estimate.
fn newton_polish(a: &Sequence, start: f64, radius: f64) -> f64 {
    let mut cur = start;
    let mut best = start;
    let mut best_d1 = g_derivatives(a, start).0.abs();
    for _ in 0..60 {
        let (d1, d2) = g_derivatives(a, cur);
        if d2 == 0.0 || !d2.is_finite() {
            break;
        }
        let next = cur - d1 / d2;
        if !next.is_finite() || (next - start).abs() > radius {
            break;
        }
        let nd1 = g_derivatives(a, next).0.abs();
        if nd1 < best_d1 {
            best = next;
            best_d1 = nd1;
            cur = next;
            if (d1 / d2).abs() < 1e-15 {
                break;
            }
        } else {
            break;
        }
    }
    best
}

/// Tries to replace `theta` by a nearby rational multiple of pi at which the
/// symbol modulus verifiably touches 1.  Smaller denominators win.
fn snap_tangency(a: &Sequence, theta: f64) -> f64 {
    for den in 1..=SNAP_MAX_DEN {
        let num = (theta * den as f64 / PI).round() as i64;
        let snapped = (num as f64 * PI / den as f64).rem_euclid(TAU);
        let dist = {
            let d = (theta - num as f64 * PI / den as f64).abs();
            d.min((TAU - d).abs())
        };
        if dist <= SNAP_WINDOW && g_value(a, snapped) >= -TOL_DETECT {
            return snapped;
        }
    }
    theta.rem_euclid(TAU)
}

/// Scans the circle for the supremum of `|F|` and the angles where it is
/// attained.
///
/// Rejects symbols whose supremum differs from 1 by more than the
/// normalization tolerance; the error carries the measured supremum and the
/// factor that would normalize the sequence.  Points are located on a
/// uniform grid, refined by golden-section and Newton steps, snapped to
/// rational multiples of pi when the touch verifies there, and clustered.
pub fn find_tangency_points(a: &Sequence) -> Result<SymbolScan> {
    let n_grid = 4096.max(64 * a.len());
    let gv: Vec<f64> = (0..n_grid)
        .map(|i| g_value(a, TAU * i as f64 / n_grid as f64))
        .collect();
    let g_min = gv.iter().copied().fold(f64::INFINITY, f64::min);
    let g_max_grid = gv.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Flat-modulus branch: |F| never drops below 1 (within tolerance), so
    // there are no isolated maxima to refine.
    if g_min >= -2.0 * TOL_NORM {
        let sup = (1.0 + g_max_grid).max(0.0).sqrt();
        if (sup - 1.0).abs() > TOL_NORM {
            return Err(Error::NotNormalized {
                sup_modulus: sup,
                factor: 1.0 / sup,
            });
        }
        return Ok(SymbolScan {
            sup_modulus: sup,
            alternative: Alternative::AllModulusOne,
            thetas: Vec::new(),
        });
    }

    // Refine every grid-local maximum; the global supremum is among them.
    let h = TAU / n_grid as f64;
    let mut refined: Vec<f64> = Vec::new();
    for i in 0..n_grid {
        let prev = gv[(i + n_grid - 1) % n_grid];
        let next = gv[(i + 1) % n_grid];
        if gv[i] >= prev && gv[i] >= next {
            let center = TAU * i as f64 / n_grid as f64;
            let rough = golden_max(a, center - h, center + h);
            refined.push(newton_polish(a, rough, 2.0 * h));
        }
    }
    let g_max = refined
        .iter()
        .map(|&t| g_value(a, t))
        .fold(g_max_grid, f64::max);
    let sup = (1.0 + g_max).max(0.0).sqrt();
    if (sup - 1.0).abs() > TOL_NORM {
        return Err(Error::NotNormalized {
            sup_modulus: sup,
            factor: 1.0 / sup,
        });
    }

    // Keep verified touches, snap them to exact angles, merge duplicates.
    let mut thetas: Vec<f64> = refined
        .into_iter()
        .filter(|&t| g_value(a, t) >= -TOL_DETECT)
        .map(|t| snap_tangency(a, t))
        .collect();
    thetas.sort_by(f64::total_cmp);
    let mut clustered: Vec<f64> = Vec::new();
    for t in thetas {
        match clustered.last() {
            Some(&prev) if (t - prev).abs() < CLUSTER_TOL => {
                if g_value(a, t) > g_value(a, prev) {
                    *clustered.last_mut().unwrap() = t;
                }
            }
            _ => clustered.push(t),
        }
    }
    // The circle wraps: a cluster may straddle 0.
    if clustered.len() > 1 {
        let first = clustered[0];
        let last = *clustered.last().unwrap();
        if (first + TAU - last).abs() < CLUSTER_TOL {
            if g_value(a, last) > g_value(a, first) {
                clustered[0] = last;
            }
            clustered.pop();
            clustered.sort_by(f64::total_cmp);
        }
    }

    Ok(SymbolScan {
        sup_modulus: sup,
        alternative: Alternative::FiniteTangency,
        thetas: clustered,
    })
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `i^nu` on the four-cycle.
fn i_pow(nu: u32) -> Complex64 {
    match nu % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Classifies the tangency point at `theta`, extracting drift, dissipation,
/// and `order` cumulants from the log-series of the symbol there.
///
/// `theta` is expected to come from [`find_tangency_points`].  The Taylor
/// order is chosen adaptively: probing starts at `2 * 4 + order + 2` and the
/// dissipation cap doubles (up to 64) while no coefficient past the drift
/// survives the relative zero threshold.
pub fn classify(a: &Sequence, theta: f64, order: usize) -> Result<TangencyPoint> {
    let kappa_angle = snap_angle(theta);
    let theta = kappa_angle.radians;
    let kappa = kappa_angle.unit();

    let mut mu_cap = 4usize;
    let (t, nu0, thresh) = loop {
        let n = 2 * mu_cap + order + 2;
        let t = TaylorSeries::of_symbol(a, theta, n).log()?;
        let scale = (1..=n).map(|nu| t.coeff(nu).norm()).fold(0.0, f64::max);
        let thresh = TOL_COEFF * scale;
        let found = (2..=n).find(|&nu| scale > 0.0 && t.coeff(nu).norm() > thresh);
        match found {
            Some(nu0) => break (t, nu0, thresh),
            None if mu_cap >= 64 => {
                return Err(Error::DegenerateSymbol {
                    theta,
                    max_order: n,
                })
            }
            None => mu_cap *= 2,
        }
    };

    let t1 = t.coeff(1);
    // alpha = t_1 / i; its imaginary part is -Re(t_1).
    if t1.re.abs() > thresh {
        return Err(Error::DriftNotReal {
            theta,
            imag: -t1.re,
        });
    }
    let alpha = t1.im;

    if nu0 % 2 == 1 {
        return Err(Error::DispersiveCase {
            theta,
            order: nu0 as u32,
        });
    }
    let mu = (nu0 / 2) as u32;
    let beta = -t.coeff(nu0);
    if beta.re <= thresh {
        return Err(Error::DispersiveCase {
            theta,
            order: nu0 as u32,
        });
    }
    let marginal_dissipation = beta.re < 100.0 * thresh;

    let needed = nu0 + order;
    let t = if t.order() >= needed {
        t
    } else {
        TaylorSeries::of_symbol(a, theta, needed).log()?
    };
    let mut cumulants = BTreeMap::new();
    for nu in (nu0 + 1)..=needed {
        let gamma = t.coeff(nu) * factorial(nu as u32) * i_pow(nu as u32).conj();
        cumulants.insert(nu as u32, gamma);
    }

    let value = a.symbol(theta);
    let value_angle = snap_angle(value.arg());
    Ok(TangencyPoint {
        theta,
        kappa,
        value,
        alpha,
        mu,
        beta,
        cumulants,
        order,
        marginal_dissipation,
        kappa_angle,
        value_angle,
    })
}

/// Scans the circle and classifies every tangency point at the given
/// expansion order.
///
/// Symbols with `|F| = 1` on the whole circle are rejected: there is no
/// isolated tangency structure to expand around.
pub fn analyze(a: &Sequence, order: usize) -> Result<SymbolReport> {
    let scan = find_tangency_points(a)?;
    if scan.alternative == Alternative::AllModulusOne {
        return Err(Error::AllModulusOne {
            sup_modulus: scan.sup_modulus,
        });
    }
    let points = scan
        .thetas
        .iter()
        .map(|&theta| classify(a, theta, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolReport {
        normalized: true,
        sup_modulus: scan.sup_modulus,
        alternative: Alternative::FiniteTangency,
        points,
    })
}
