//! Generalized-Gaussian attractors and their polynomial-applied variants.
//!
//! The order-`2 mu` attractor with dissipation `beta` (`Re beta > 0`) is
//!
//! ```text
//! H(x) = (1 / 2 pi) * integral e^{-i x theta} e^{-beta theta^{2 mu}} d theta
//! ```
//!
//! over the real line.  The integrand is entire and decays like
//! `exp(-Re(beta) theta^{2 mu})`, so a truncated trapezoid rule converges
//! spectrally: by Poisson summation its error is a sum of copies of `H`
//! shifted by `2 pi / step`, which the step keeps far outside the working
//! window.  Applying a polynomial `P` in `-d/dx` multiplies the integrand by
//! `P(i theta)`; the `N`-th derivative multiplies it by `(-i theta)^N`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ExpansionPolynomial;
use crate::tol::{ATTRACTOR_TAIL, QUAD_NODES_MAX, QUAD_NODES_START, QUAD_TOL};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Scan past the last visible value before declaring the tail reached.
const TAIL_RUN: usize = 4;

/// Dissipation order and coefficient of an attractor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttractorSpec {
    /// Half the dissipation order (`mu = 1` is the Gaussian).
    pub mu: u32,
    /// Dissipation coefficient, `Re beta > 0`.
    pub beta: Complex64,
}

impl AttractorSpec {
    /// Validates `mu >= 1` and `Re beta > 0`.
    pub fn new(mu: u32, beta: Complex64) -> Result<AttractorSpec> {
        if mu == 0 || !beta.re.is_finite() || !beta.im.is_finite() || beta.re <= 0.0 {
            return Err(Error::NonDissipativeBeta { re_beta: beta.re });
        }
        Ok(AttractorSpec { mu, beta })
    }
}

/// Trapezoid rule parameters settled on by the convergence loop.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureRule {
    /// Integration window `[-theta_max, theta_max]`.
    pub theta_max: f64,
    /// Number of nodes.
    pub nodes: usize,
    /// Node spacing.
    pub step: f64,
}

/// A cached quadrature for one attractor and one spectral factor: nodes and
/// the theta-dependent part of the integrand are precomputed once, so each
/// evaluation costs one pass of `e^{-i x theta_j}` against stored factors.
#[derive(Clone, Debug)]
pub struct AttractorEvaluator {
    spec: AttractorSpec,
    rule: QuadratureRule,
    nodes: Vec<f64>,
    /// Trapezoid weight times `factor(theta_j) e^{-beta theta_j^{2 mu}} / 2 pi`.
    factors: Vec<Complex64>,
    x_max: f64,
}

/// Which spectral multiplier sits in front of the decay factor.
#[derive(Clone, Copy)]
enum Multiplier<'a> {
    One,
    Poly(&'a ExpansionPolynomial),
    Derivative(u32),
}

impl Multiplier<'_> {
    fn eval(&self, theta: f64) -> Complex64 {
        match self {
            Multiplier::One => Complex64::new(1.0, 0.0),
            Multiplier::Poly(p) => p.eval(Complex64::new(0.0, theta)),
            Multiplier::Derivative(n) => Complex64::new(0.0, -theta).powu(*n),
        }
    }
}

/// Kahan-compensated dot product of `e^{-i x theta_j}` with the factors.
fn quad_eval(nodes: &[f64], factors: &[Complex64], x: f64) -> Complex64 {
    let (mut sr, mut si) = (0.0f64, 0.0f64);
    let (mut cr, mut ci) = (0.0f64, 0.0f64);
    for (&theta, f) in nodes.iter().zip(factors.iter()) {
        let (s, c) = (-x * theta).sin_cos();
        let term_re = c * f.re - s * f.im;
        let term_im = c * f.im + s * f.re;
        let yr = term_re - cr;
        let tr = sr + yr;
        cr = (tr - sr) - yr;
        sr = tr;
        let yi = term_im - ci;
        let ti = si + yi;
        ci = (ti - si) - yi;
        si = ti;
    }
    Complex64::new(sr, si)
}

fn build_arrays(
    spec: AttractorSpec,
    mult: Multiplier<'_>,
    theta_max: f64,
    n: usize,
) -> (Vec<f64>, Vec<Complex64>) {
    let step = 2.0 * theta_max / (n - 1) as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut factors = Vec::with_capacity(n);
    for j in 0..n {
        let theta = -theta_max + step * j as f64;
        let decay = (-spec.beta * theta.powi(2 * spec.mu as i32)).exp();
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        nodes.push(theta);
        factors.push(mult.eval(theta) * decay * (w * step / TAU));
    }
    (nodes, factors)
}

impl AttractorEvaluator {
    /// Evaluator for the bare attractor.
    pub fn new(spec: AttractorSpec) -> AttractorEvaluator {
        AttractorEvaluator::build(spec, Multiplier::One, QUAD_NODES_START)
    }

    /// Evaluator for `(P(-d/dx) H)(x)`.
    pub fn with_polynomial(spec: AttractorSpec, p: &ExpansionPolynomial) -> AttractorEvaluator {
        AttractorEvaluator::build(spec, Multiplier::Poly(p), QUAD_NODES_START)
    }

    /// Evaluator for the `n`-th derivative `H^{(n)}(x)`.
    pub fn with_derivative(spec: AttractorSpec, n: u32) -> AttractorEvaluator {
        AttractorEvaluator::build(spec, Multiplier::Derivative(n), QUAD_NODES_START)
    }

    #[cfg(test)]
    pub(crate) fn with_min_nodes(spec: AttractorSpec, min_nodes: usize) -> AttractorEvaluator {
        AttractorEvaluator::build(spec, Multiplier::One, min_nodes)
    }

    fn build(spec: AttractorSpec, mult: Multiplier<'_>, start_nodes: usize) -> AttractorEvaluator {
        // The decay factor alone is below 1e-20 past (46 / Re beta)^{1/2mu};
        // 10% margin covers polynomial growth in front of it.
        let theta_max = (46.0 / spec.beta.re).powf(1.0 / (2.0 * spec.mu as f64)) * 1.1;
        let mut n = start_nodes;
        loop {
            let (nodes, factors) = build_arrays(spec, mult, theta_max, n);
            let (nodes2, factors2) = build_arrays(spec, mult, theta_max, 2 * n);
            let total_variation: f64 = factors.iter().map(|f| f.norm()).sum();
            let converged = [0.0, 0.7, 3.3].iter().all(|&x| {
                let a = quad_eval(&nodes, &factors, x);
                let b = quad_eval(&nodes2, &factors2, x);
                (a - b).norm() < QUAD_TOL * total_variation.max(1.0)
            });
            if !converged && 2 * n <= QUAD_NODES_MAX {
                n *= 2;
                continue;
            }

            // Working window: walk outward until the values stay under the
            // tail threshold, then pad.  The threshold is relative to the
            // rule's total variation, which also bounds the roundoff noise
            // of the node sum; an absolute threshold below that noise floor
            // would never be reached.  The trapezoid aliases copies of H at
            // spacing 2 pi / step; if the window approaches them the rule
            // is too coarse for its own tail, so refine and retry.
            let tail = (ATTRACTOR_TAIL * total_variation).max(f64::MIN_POSITIVE);
            let alias_x = TAU / (2.0 * theta_max / (n - 1) as f64);
            let mut x = 0.0f64;
            let mut run = 0usize;
            let x_max = loop {
                x += 0.5;
                let v = quad_eval(&nodes, &factors, x)
                    .norm()
                    .max(quad_eval(&nodes, &factors, -x).norm());
                if v < tail {
                    run += 1;
                    if run >= TAIL_RUN {
                        break Some(x + 2.0);
                    }
                } else {
                    run = 0;
                }
                if x + 32.0 > alias_x {
                    break None;
                }
            };
            match x_max {
                Some(x_max) => {
                    let step = 2.0 * theta_max / (n - 1) as f64;
                    return AttractorEvaluator {
                        spec,
                        rule: QuadratureRule {
                            theta_max,
                            nodes: n,
                            step,
                        },
                        nodes,
                        factors,
                        x_max,
                    };
                }
                None => {
                    assert!(
                        2 * n <= QUAD_NODES_MAX,
                        "attractor window exceeded the quadrature alias bound at the node cap"
                    );
                    n *= 2;
                }
            }
        }
    }

    /// The attractor (or applied/derivative variant) at `x`.  Outside the
    /// working window the value is identically zero by construction.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x.abs() > self.x_max {
            return Complex64::new(0.0, 0.0);
        }
        quad_eval(&self.nodes, &self.factors, x)
    }

    /// The `(mu, beta)` pair this evaluator integrates.
    pub fn spec(&self) -> AttractorSpec {
        self.spec
    }

    /// The settled quadrature rule.
    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    /// Half-width of the working window; values vanish outside `[-w, w]`.
    pub fn x_window(&self) -> f64 {
        self.x_max
    }
}

/// One-off evaluation of `H(x)`; construct an [`AttractorEvaluator`] to
/// amortize the setup across many `x`.
pub fn eval_attractor(spec: AttractorSpec, x: f64) -> Complex64 {
    AttractorEvaluator::new(spec).eval(x)
}

/// One-off evaluation of `(P(-d/dx) H)(x)`.
pub fn eval_applied(spec: AttractorSpec, p: &ExpansionPolynomial, x: f64) -> Complex64 {
    AttractorEvaluator::with_polynomial(spec, p).eval(x)
}

/// One-off evaluation of `H^{(n)}(x)`.
pub fn attractor_derivative(spec: AttractorSpec, n: u32, x: f64) -> Complex64 {
    AttractorEvaluator::with_derivative(spec, n).eval(x)
}
