//! Correction polynomials of the local limit expansion.
//!
//! The order-`m` term of the expansion applies a polynomial `P_m` (in the
//! derivative `-d/dx`) to the attractor.  `P_m` collects every way the
//! cumulants `gamma_{2 mu + 1} .. gamma_{2 mu + m}` can combine at total
//! weight `m`; its coefficients are built here by two deliberately
//! independent routes:
//!
//! * [`build_polynomials`] exponentiates the cumulant series as a truncated
//!   bivariate power series (polynomial coefficients in the degree variable,
//!   truncated in the weight variable);
//! * [`bell_sum_polynomial`] sums over integer partitions directly.
//!
//! Agreement of the two routes is a standing test invariant; do not merge
//! them.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::analysis::TangencyPoint;
use crate::error::{Error, Result};

/// A sparse polynomial `sum_d c_d X^d` tagged with its expansion weight `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionPolynomial {
    /// Expansion weight: this is the coefficient polynomial of `n^{-(m+1)/(2 mu)}`.
    pub m: usize,
    /// Degree -> coefficient, ascending.
    pub terms: BTreeMap<u32, Complex64>,
}

impl ExpansionPolynomial {
    /// The zero polynomial of weight `m`.
    pub fn zero(m: usize) -> ExpansionPolynomial {
        ExpansionPolynomial {
            m,
            terms: BTreeMap::new(),
        }
    }

    /// Value at `x`, accumulating powers in ascending degree order.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        let mut last_deg = 0u32;
        for (&deg, &coeff) in &self.terms {
            for _ in last_deg..deg {
                power *= x;
            }
            last_deg = deg;
            acc += coeff * power;
        }
        acc
    }

    /// Largest degree with a stored coefficient (None when zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `X^d`.
    pub fn coeff(&self, d: u32) -> Complex64 {
        self.terms
            .get(&d)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Cumulant weights `gamma_{2 mu + j} / (2 mu + j)!` for `j = 1..=order`,
/// or the error naming what is missing.
fn cumulant_weights(point: &TangencyPoint, order: usize) -> Result<Vec<Complex64>> {
    let base = 2 * point.mu;
    let mut weights = Vec::with_capacity(order);
    for j in 1..=order as u32 {
        let nu = base + j;
        let gamma = point
            .cumulants
            .get(&nu)
            .ok_or(Error::InsufficientCumulants {
                requested: order,
                needed: base + order as u32,
                available: point.cumulants.keys().next_back().copied().unwrap_or(base),
            })?;
        weights.push(gamma / factorial(nu));
    }
    Ok(weights)
}

/// Builds `P_0 .. P_order` by exponentiating the cumulant series.
///
/// Work in the ring of polynomials in `X` with a series variable `Z`
/// truncated past `Z^order`: with `q_j = gamma_{2mu+j}/(2mu+j)! X^{2mu+j}`,
/// the generating identity `sum_m P_m Z^m = exp(sum_j q_j Z^j)` yields the
/// exponential recurrence `m P_m = sum_{j=1}^{m} j q_j P_{m-j}`.
pub fn build_polynomials(point: &TangencyPoint, order: usize) -> Result<Vec<ExpansionPolynomial>> {
    let weights = cumulant_weights(point, order)?;
    let base = 2 * point.mu;
    let mut out: Vec<BTreeMap<u32, Complex64>> = Vec::with_capacity(order + 1);
    out.push(BTreeMap::from([(0u32, Complex64::new(1.0, 0.0))]));
    for m in 1..=order {
        let mut acc: BTreeMap<u32, Complex64> = BTreeMap::new();
        for j in 1..=m {
            // j * q_j * P_{m-j}: q_j is the monomial weights[j-1] X^{base+j}.
            let shift = base + j as u32;
            let scale = weights[j - 1] * j as f64;
            for (&deg, &coeff) in &out[m - j] {
                *acc.entry(deg + shift).or_insert(Complex64::new(0.0, 0.0)) += scale * coeff;
            }
        }
        let inv_m = 1.0 / m as f64;
        acc.values_mut().for_each(|c| *c *= inv_m);
        out.push(acc);
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(m, terms)| ExpansionPolynomial { m, terms })
        .collect())
}

/// Builds `P_m` alone by direct summation over the integer partitions of
/// `m`: a partition with `nu_j` parts of size `j` contributes
/// `X^{m + 2 mu sum_j nu_j} / prod_j nu_j! * prod_j (gamma_{2mu+j}/(2mu+j)!)^{nu_j}`.
pub fn bell_sum_polynomial(point: &TangencyPoint, m: usize) -> Result<ExpansionPolynomial> {
    let weights = cumulant_weights(point, m)?;
    let base = 2 * point.mu;
    let mut terms: BTreeMap<u32, Complex64> = BTreeMap::new();
    // counts[j-1] = nu_j; enumerate recursively over part sizes.
    let mut counts = vec![0u32; m];
    fn walk(
        remaining: usize,
        max_part: usize,
        counts: &mut Vec<u32>,
        weights: &[Complex64],
        base: u32,
        m: usize,
        terms: &mut BTreeMap<u32, Complex64>,
    ) {
        if remaining == 0 {
            let mut coeff = Complex64::new(1.0, 0.0);
            let mut part_count = 0u32;
            for (j, &nu_j) in counts.iter().enumerate() {
                if nu_j == 0 {
                    continue;
                }
                part_count += nu_j;
                coeff *= weights[j].powu(nu_j) / factorial(nu_j);
            }
            let degree = m as u32 + base * part_count;
            *terms.entry(degree).or_insert(Complex64::new(0.0, 0.0)) += coeff;
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            counts[part - 1] += 1;
            walk(remaining - part, part, counts, weights, base, m, terms);
            counts[part - 1] -= 1;
        }
    }
    if m == 0 {
        terms.insert(0, Complex64::new(1.0, 0.0));
    } else {
        walk(m, m, &mut counts, &weights, base, m, &mut terms);
    }
    Ok(ExpansionPolynomial { m, terms })
}
