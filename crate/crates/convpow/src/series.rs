//! Truncated Taylor series of the symbol along the circle, and the series
//! logarithm/exponential used to extract drift, dissipation, and cumulants.
//!
//! For a sequence `a` and a circle point `kappa`, the function
//! `xi -> F_a(kappa e^{i xi})` is entire in `xi` with Taylor coefficients
//! `c_nu = sum_l a_l kappa^l (i l)^nu / nu!`.  Classification works on the
//! coefficients of `log(F_a(kappa e^{i xi}) / F_a(kappa))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::{powi64, Sequence};

/// Coefficients `c_0..c_N` of a truncated Taylor series in one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Wraps raw coefficients `c_0..c_N`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> TaylorSeries {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least its constant term"
        );
        TaylorSeries { coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `xi^nu` (zero past the truncation order).
    pub fn coeff(&self, nu: usize) -> Complex64 {
        self.coeffs
            .get(nu)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// All coefficients `c_0..c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Series value at `xi` by Horner's rule.
    pub fn eval(&self, xi: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * xi + c;
        }
        acc
    }

    /// Taylor coefficients of `xi -> F_a(kappa e^{i xi})` at `xi = 0`, up to
    /// order `n`, for `kappa = e^{i theta}`.
    pub fn of_symbol(a: &Sequence, theta: f64, n: usize) -> TaylorSeries {
        let kappa = Complex64::from_polar(1.0, theta);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        for (j, &al) in a.coeffs().iter().enumerate() {
            let l = a.offset() + j as i64;
            let weight = al * powi64(kappa, l);
            // term_nu = (i l)^nu / nu!, built incrementally.
            let il = Complex64::new(0.0, l as f64);
            let mut term = Complex64::new(1.0, 0.0);
            coeffs[0] += weight;
            for (nu, c) in coeffs.iter_mut().enumerate().skip(1) {
                term *= il / nu as f64;
                *c += weight * term;
            }
        }
        TaylorSeries { coeffs }
    }

    /// Coefficients of `log(f(xi) / f(0))` where `f` is this series.  The
    /// constant term of the result is zero; fails if `c_0 = 0`.
    ///
    /// Uses the standard recurrence for `t = log(s)` with `s_0 = 1`:
    /// `n t_n = n s_n - sum_{j=1}^{n-1} j t_j s_{n-j}`.
    pub fn log(&self) -> Result<TaylorSeries> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let s: Vec<Complex64> = self.coeffs.iter().map(|c| c / c0).collect();
        let mut t = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in 1..=n {
            let mut acc = s[k] * k as f64;
            for j in 1..k {
                acc -= t[j] * s[k - j] * j as f64;
            }
            t[k] = acc / k as f64;
        }
        Ok(TaylorSeries { coeffs: t })
    }

    /// Coefficients of `exp(t(xi))` where `t` is this series.
    ///
    /// Uses the recurrence `n E_n = sum_{j=1}^{n} j t_j E_{n-j}` with
    /// `E_0 = exp(t_0)`.
    pub fn exp(&self) -> TaylorSeries {
        let n = self.order();
        let t = &self.coeffs;
        let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
        e[0] = t[0].exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += t[j] * e[k - j] * j as f64;
            }
            e[k] = acc / k as f64;
        }
        TaylorSeries { coeffs: e }
    }
}
