//! Assembling the local limit approximation and measuring the remainder.
//!
//! For a normalized sequence whose symbol touches modulus 1 at points
//! `kappa_k = e^{i theta_k}`, the order-`M` approximation to `a^{*n}` at
//! site `ell` is
//!
//! ```text
//! sum_k kappa_k^{-ell} F(kappa_k)^n
//!       sum_{m=0}^{M} n^{-(m+1)/(2 mu_k)} (P_{k,m}(-d/dx) H_k)(x_k),
//! x_k = (ell - alpha_k n) / n^{1/(2 mu_k)}
//! ```
//!
//! where `H_k` is the order-`2 mu_k` attractor with dissipation `beta_k`
//! and `P_{k,m}` are the cumulant correction polynomials.  The plan caches
//! one quadrature per `(k, m)` pair, so a profile evaluation is a handful
//! of cached-node sums per site.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{analyze, Alternative, Angle, SymbolReport};
use crate::attractor::{AttractorEvaluator, AttractorSpec};
use crate::error::{Error, Result};
use crate::poly::{build_polynomials, ExpansionPolynomial};
use crate::sequence::{convolve_raw, lp_norm, LpNorm, Sequence};
use crate::tol::{ENVELOPE_FLOOR, ENVELOPE_SLACK};

/// Everything cached for one tangency point: its phases, drift, scaling,
/// and one quadrature per correction order.
#[derive(Debug)]
struct PointPart {
    theta: f64,
    alpha: f64,
    mu: u32,
    value: Complex64,
    kappa_angle: Angle,
    value_angle: Angle,
    polynomials: Vec<ExpansionPolynomial>,
    evaluators: Vec<AttractorEvaluator>,
    /// Largest working window among the evaluators; the whole contribution
    /// vanishes for `|x|` beyond it.
    window: f64,
}

/// A prepared order-`M` expansion for one sequence.
#[derive(Debug)]
pub struct ExpansionPlan {
    sequence: Sequence,
    report: SymbolReport,
    order: usize,
    parts: Vec<PointPart>,
}

/// Exact power, approximation, and remainder over one window of sites.
#[derive(Clone, Debug)]
pub struct ExpansionResult {
    /// Convolution power this result describes.
    pub n: u64,
    /// Site of the first entry; entry `i` describes site `offset + i`.
    pub offset: i64,
    /// Exact values of `a^{*n}` (zero outside its support).
    pub exact: Vec<Complex64>,
    /// The order-`M` approximation.
    pub approx: Vec<Complex64>,
    /// `exact - approx`.
    pub remainder: Vec<Complex64>,
    /// `max_ell |remainder|`.
    pub linf: f64,
    /// `sum_ell |remainder|`.
    pub l1: f64,
}

impl ExpansionResult {
    /// `l^p` norm of the remainder over the window.
    pub fn norm(&self, p: LpNorm) -> f64 {
        lp_norm(&self.remainder, p)
    }
}

/// Remainder norms for one `n`, as produced by [`ExpansionPlan::remainder_norms`].
#[derive(Clone, Copy, Debug)]
pub struct RemainderNorms {
    pub n: u64,
    pub linf: f64,
    pub l1: f64,
}

/// Least squares fit of `log10 y` against `log10 x`.
#[derive(Clone, Copy, Debug)]
pub struct SlopeFit {
    /// Fitted decay exponent.
    pub slope: f64,
    /// Fitted `log10` prefactor.
    pub intercept: f64,
    /// Coefficient of determination of the fit.
    pub r2: f64,
    /// Number of points that entered the fit.
    pub used: usize,
}

/// Outcome of comparing the remainder against a stretched-exponential
/// envelope at one `n`.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeCheck {
    pub n: u64,
    /// Envelope prefactor `C`.
    pub c_big: f64,
    /// Envelope decay rate `c`.
    pub c_small: f64,
    /// Largest `|remainder| / envelope` over the scored sites.
    pub max_ratio: f64,
    /// Site where the largest ratio occurred.
    pub worst_site: i64,
    /// Sites scored against the envelope.
    pub checked: usize,
    /// Sites skipped because the envelope value sat below the scoring
    /// floor, where double precision roundoff in the exact power swamps
    /// the true remainder.
    pub skipped: usize,
    pub passed: bool,
}

impl ExpansionPlan {
    /// Analyzes the sequence and prepares an order-`order` expansion.
    pub fn new(a: &Sequence, order: usize) -> Result<ExpansionPlan> {
        let report = analyze(a, order)?;
        ExpansionPlan::from_report(a.clone(), report, order)
    }

    /// Builds a plan from an existing analysis, validating that it carries
    /// everything the requested order needs.
    pub fn from_report(
        sequence: Sequence,
        report: SymbolReport,
        order: usize,
    ) -> Result<ExpansionPlan> {
        if report.alternative != Alternative::FiniteTangency {
            return Err(Error::PlanIncomplete {
                reason: "analysis reports modulus one on the whole circle".into(),
            });
        }
        if report.points.is_empty() {
            return Err(Error::PlanIncomplete {
                reason: "analysis carries no tangency points".into(),
            });
        }
        if !report.normalized {
            return Err(Error::PlanIncomplete {
                reason: "analysis reports a non-normalized symbol".into(),
            });
        }
        let mut parts = Vec::with_capacity(report.points.len());
        for point in &report.points {
            let spec = AttractorSpec::new(point.mu, point.beta)?;
            let polynomials = build_polynomials(point, order)?;
            let evaluators: Vec<AttractorEvaluator> = polynomials
                .iter()
                .map(|p| AttractorEvaluator::with_polynomial(spec, p))
                .collect();
            let window = evaluators
                .iter()
                .map(|e| e.x_window())
                .fold(0.0f64, f64::max);
            parts.push(PointPart {
                theta: point.theta,
                alpha: point.alpha,
                mu: point.mu,
                value: point.value,
                kappa_angle: point.kappa_angle,
                value_angle: point.value_angle,
                polynomials,
                evaluators,
                window,
            });
        }
        Ok(ExpansionPlan {
            sequence,
            report,
            order,
            parts,
        })
    }

    /// The analysis this plan was built from.
    pub fn report(&self) -> &SymbolReport {
        &self.report
    }

    /// Expansion order `M`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The sequence being expanded.
    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    /// Correction polynomials `P_0 .. P_M` of tangency point `k`.
    pub fn polynomials(&self, k: usize) -> &[ExpansionPolynomial] {
        &self.parts[k].polynomials
    }

    /// The approximation at a single site.
    pub fn approx_at(&self, n: u64, site: i64) -> Complex64 {
        debug_assert!(n >= 1);
        let nf = n as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for part in &self.parts {
            let root = nf.powf(1.0 / (2.0 * part.mu as f64));
            let x = (site as f64 - part.alpha * nf) / root;
            if x.abs() > part.window {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            let mut scale = 1.0 / root;
            for ev in &part.evaluators {
                inner += ev.eval(x) * scale;
                scale /= root;
            }
            total += phase_factor(part, site, n) * inner;
        }
        total
    }

    /// Exact power, approximation, and remainder over the union of the
    /// exact support and every attractor window.
    ///
    /// The window matters: for small `n` the approximation carries visible
    /// mass outside the exact support, and a remainder measured on the
    /// support alone would miss it.
    pub fn remainder(&self, n: u64) -> Result<ExpansionResult> {
        let exact = self.sequence.power(n)?;
        let nf = n as f64;
        let mut lo = exact.offset();
        let mut hi = exact.offset() + exact.len() as i64 - 1;
        for part in &self.parts {
            let root = nf.powf(1.0 / (2.0 * part.mu as f64));
            let pad = (part.window + 1.0) * root;
            lo = lo.min((part.alpha * nf - pad).floor() as i64);
            hi = hi.max((part.alpha * nf + pad).ceil() as i64);
        }
        let len = (hi - lo + 1) as usize;
        let mut exact_vals = Vec::with_capacity(len);
        let mut approx_vals = Vec::with_capacity(len);
        let mut remainder = Vec::with_capacity(len);
        let mut linf = 0.0f64;
        let mut l1 = 0.0f64;
        for site in lo..=hi {
            let e = exact.get(site);
            let a = self.approx_at(n, site);
            let r = e - a;
            let rn = r.norm();
            linf = linf.max(rn);
            l1 += rn;
            exact_vals.push(e);
            approx_vals.push(a);
            remainder.push(r);
        }
        Ok(ExpansionResult {
            n,
            offset: lo,
            exact: exact_vals,
            approx: approx_vals,
            remainder,
            linf,
            l1,
        })
    }

    /// Remainder norms across many powers, in parallel.
    pub fn remainder_norms(&self, ns: &[u64]) -> Result<Vec<RemainderNorms>> {
        ns.par_iter()
            .map(|&n| {
                self.remainder(n).map(|r| RemainderNorms {
                    n,
                    linf: r.linf,
                    l1: r.l1,
                })
            })
            .collect()
    }

    /// The pointwise envelope `max_k C n^{-(M+2)/(2 mu_k)}
    /// exp(-c |x_k|^{2 mu_k / (2 mu_k - 1)})` at one site.
    pub fn envelope_at(&self, n: u64, site: i64, c_big: f64, c_small: f64) -> f64 {
        let nf = n as f64;
        let mut best = 0.0f64;
        for part in &self.parts {
            let two_mu = 2.0 * part.mu as f64;
            let root = nf.powf(1.0 / two_mu);
            let x = (site as f64 - part.alpha * nf) / root;
            let stretch = two_mu / (two_mu - 1.0);
            let env = c_big
                * nf.powf(-((self.order as f64 + 2.0) / two_mu))
                * (-c_small * x.abs().powf(stretch)).exp();
            best = best.max(env);
        }
        best
    }

    /// Scores `|remainder| / envelope` over every site where the envelope
    /// sits above the scoring floor.
    ///
    /// The floor exists because the exact power is itself a double
    /// precision computation: far in the tails its roundoff (around
    /// `1e-14`) exceeds the true remainder, and a pointwise envelope many
    /// decades below that would be comparing noise against zero.
    pub fn check_envelope(&self, n: u64, c_big: f64, c_small: f64) -> Result<EnvelopeCheck> {
        let res = self.remainder(n)?;
        let mut max_ratio = 0.0f64;
        let mut worst_site = res.offset;
        let mut checked = 0usize;
        let mut skipped = 0usize;
        for (i, r) in res.remainder.iter().enumerate() {
            let site = res.offset + i as i64;
            let env = self.envelope_at(n, site, c_big, c_small);
            if env < ENVELOPE_FLOOR {
                skipped += 1;
                continue;
            }
            checked += 1;
            let ratio = r.norm() / env;
            if ratio > max_ratio {
                max_ratio = ratio;
                worst_site = site;
            }
        }
        Ok(EnvelopeCheck {
            n,
            c_big,
            c_small,
            max_ratio,
            worst_site,
            checked,
            skipped,
            passed: checked > 0 && max_ratio <= 1.0 + ENVELOPE_SLACK,
        })
    }

    /// `l^p` error of the approximate evolution of initial data `u0`:
    /// `|| (a^{*n} - approx_n) * u0 ||_p` for each requested `n`.
    pub fn initial_data_errors(
        &self,
        u0: &Sequence,
        ns: &[u64],
        p: LpNorm,
    ) -> Result<Vec<(u64, f64)>> {
        ns.par_iter()
            .map(|&n| {
                let res = self.remainder(n)?;
                let conv = convolve_raw(&res.remainder, u0.coeffs());
                Ok((n, lp_norm(&conv, p)))
            })
            .collect()
    }
}

/// `kappa^{-site} F(kappa)^n` for one tangency point.  When both angles
/// are known as exact rational multiples of pi the phase is accumulated in
/// integer arithmetic modulo a full turn, so structural cancellations
/// (parity lattices and the like) are exact in floating point too.
fn phase_factor(part: &PointPart, site: i64, n: u64) -> Complex64 {
    if let (Some((nk, dk)), Some((nv, dv))) = (part.kappa_angle.exact, part.value_angle.exact) {
        // Total phase is pi (n nv dk - site nk dv) / (dk dv), period 2 pi.
        let den = dk as i128 * dv as i128;
        let num = (n as i128 * nv as i128 * dk as i128 - site as i128 * nk as i128 * dv as i128)
            .rem_euclid(2 * den);
        if (2 * num) % den == 0 {
            return match 2 * num / den {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        let (s, c) = (std::f64::consts::PI * num as f64 / den as f64).sin_cos();
        return Complex64::new(c, s);
    }
    let phi = part.value.arg() * n as f64 - part.theta * site as f64;
    Complex64::from_polar(part.value.norm().powf(n as f64), phi)
}

/// Fits `log10 y = slope log10 x + intercept` by least squares, ignoring
/// points with nonpositive or nonfinite values.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    let clean: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|&(x, y)| (x.log10(), y.log10()))
        .collect();
    if clean.len() < 3 {
        return Err(Error::DegenerateData { count: clean.len() });
    }
    let n = clean.len() as f64;
    let sx: f64 = clean.iter().map(|p| p.0).sum();
    let sy: f64 = clean.iter().map(|p| p.1).sum();
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = clean.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = clean.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateData { count: clean.len() });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = clean
        .iter()
        .map(|p| {
            let d = p.1 - (slope * p.0 + intercept);
            d * d
        })
        .sum();
    let ss_tot: f64 = clean.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r2,
        used: clean.len(),
    })
}

/// At least 40 distinct powers, log-spaced over `1..=n_max` (or every
/// integer when `n_max` is small).
pub fn default_n_list(n_max: u64) -> Vec<u64> {
    let n_max = n_max.max(1);
    let mut raw = 40usize;
    loop {
        let mut out: Vec<u64> = (0..raw)
            .map(|i| {
                let t = i as f64 / (raw - 1) as f64;
                ((n_max as f64).powf(t)).round() as u64
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        if out.len() >= 40 || out.len() as u64 == n_max {
            return out;
        }
        raw = raw * 3 / 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coin(p: f64) -> Sequence {
        Sequence::new(0, vec![c(1.0 - p, 0.0), c(p, 0.0)]).unwrap()
    }

    fn centered_walk() -> Sequence {
        Sequence::from_pairs(&[(-1, c(0.5, 0.0)), (1, c(0.5, 0.0))]).unwrap()
    }

    /// Exact binomial from 128-bit Pascal arithmetic.
    fn binomial_prob(n: u64, k: i64) -> f64 {
        if k < 0 || k as u64 > n {
            return 0.0;
        }
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row[k as usize] as f64 / 2f64.powi(n as i32)
    }

    #[test]
    fn symmetric_coin_leading_term_tracks_binomial() {
        let plan = ExpansionPlan::new(&coin(0.5), 0).unwrap();
        let n = 64;
        for k in 20..=44 {
            let approx = plan.approx_at(n, k);
            let exact = binomial_prob(n, k);
            assert!(approx.im.abs() < 1e-13);
            assert!(
                (approx.re - exact).abs() < 1e-3,
                "k={k}: {} vs {exact}",
                approx.re
            );
        }
    }

    #[test]
    fn remainder_decays_between_powers() {
        let plan = ExpansionPlan::new(&coin(0.5), 0).unwrap();
        let small = plan.remainder(16).unwrap();
        let large = plan.remainder(256).unwrap();
        assert!(large.linf < small.linf / 10.0);
        assert!(large.l1 < small.l1 / 3.0);
        // The exact power is a probability mass function.
        let mass: Complex64 = small.exact.iter().sum();
        assert_relative_eq!(mass.re, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn symmetric_coin_gains_half_an_order_from_vanishing_gamma3() {
        // With gamma_3 = 0 the m = 1 correction is identically zero, so
        // even the order-0 approximation converges like n^{-3/2} in sup
        // norm instead of the generic n^{-1}.
        let plan = ExpansionPlan::new(&coin(0.5), 0).unwrap();
        let ns: Vec<u64> = vec![10, 16, 25, 40, 63, 100, 158, 251, 398];
        let norms = plan.remainder_norms(&ns).unwrap();
        let pts: Vec<(f64, f64)> = norms.iter().map(|r| (r.n as f64, r.linf)).collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(
            fit.slope < -1.35 && fit.slope > -1.65,
            "slope {}",
            fit.slope
        );
        assert!(fit.r2 > 0.99);
    }

    #[test]
    fn asymmetric_coin_slope_matches_first_correction() {
        let plan = ExpansionPlan::new(&coin(0.3), 0).unwrap();
        let ns: Vec<u64> = vec![10, 16, 25, 40, 63, 100, 158, 251, 398];
        let norms = plan.remainder_norms(&ns).unwrap();
        let pts: Vec<(f64, f64)> = norms.iter().map(|r| (r.n as f64, r.linf)).collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(
            fit.slope < -0.85 && fit.slope > -1.15,
            "slope {}",
            fit.slope
        );
    }

    #[test]
    fn higher_order_plan_converges_faster() {
        let plan0 = ExpansionPlan::new(&coin(0.3), 0).unwrap();
        let plan1 = ExpansionPlan::new(&coin(0.3), 1).unwrap();
        let r0 = plan0.remainder(200).unwrap();
        let r1 = plan1.remainder(200).unwrap();
        assert!(
            r1.linf < r0.linf / 3.0,
            "order 1 {} vs order 0 {}",
            r1.linf,
            r0.linf
        );
    }

    #[test]
    fn centered_walk_parity_is_exact() {
        // Two tangency points at theta = 0 and pi with exact quarter-turn
        // phases: on the wrong parity class the two contributions cancel
        // exactly, down to the last bit.
        let plan = ExpansionPlan::new(&centered_walk(), 0).unwrap();
        assert_eq!(plan.report().points.len(), 2);
        for n in [9u64, 10] {
            for site in -6i64..=6 {
                let v = plan.approx_at(n, site);
                if (site + n as i64).rem_euclid(2) == 1 {
                    assert_eq!(v, c(0.0, 0.0), "n={n} site={site}");
                } else {
                    assert!(v.norm() > 0.0);
                }
            }
        }
    }

    #[test]
    fn centered_walk_even_sites_track_exact_power() {
        let plan = ExpansionPlan::new(&centered_walk(), 0).unwrap();
        let res = plan.remainder(100).unwrap();
        assert!(res.linf < 5e-3);
        // Window reaches beyond the support on both sides.
        assert!(res.offset < -100);
        assert!(res.offset + res.exact.len() as i64 - 1 > 100);
    }

    #[test]
    fn envelope_peaks_at_drift_and_decays() {
        let plan = ExpansionPlan::new(&coin(0.3), 0).unwrap();
        let n = 100;
        let center = plan.envelope_at(n, 30, 1.0, 0.2);
        let off = plan.envelope_at(n, 60, 1.0, 0.2);
        let far = plan.envelope_at(n, 90, 1.0, 0.2);
        assert!(center > off && off > far);
        assert_relative_eq!(center, 100f64.powf(-1.0), max_relative = 1e-12);
    }

    #[test]
    fn envelope_check_counts_scored_and_skipped_sites() {
        let plan = ExpansionPlan::new(&coin(0.5), 0).unwrap();
        // The decay rate is steep enough that the envelope crosses the
        // scoring floor inside the comparison window.
        let check = plan.check_envelope(100, 1.0, 0.6).unwrap();
        assert!(check.checked > 10);
        assert!(check.skipped > 0);
        assert!(check.max_ratio.is_finite() && check.max_ratio > 0.0);
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..=30)
            .map(|k| {
                let x = k as f64;
                (x, 3.2 * x.powf(-1.37))
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert_relative_eq!(fit.slope, -1.37, max_relative = 1e-10);
        assert_relative_eq!(fit.intercept, 3.2f64.log10(), max_relative = 1e-9);
        assert!(fit.r2 > 0.999999);
        assert_eq!(fit.used, 30);
    }

    #[test]
    fn slope_fit_rejects_degenerate_data() {
        let err = fit_slope(&[(1.0, 1.0), (2.0, 0.5)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateData { count: 2 }));
        // Zero values are dropped before the count.
        let err = fit_slope(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::DegenerateData { count: 1 }));
    }

    #[test]
    fn default_n_list_is_dense_enough() {
        let ns = default_n_list(1000);
        assert!(ns.len() >= 40);
        assert_eq!(ns[0], 1);
        assert_eq!(*ns.last().unwrap(), 1000);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));

        let small = default_n_list(25);
        assert_eq!(small, (1..=25).collect::<Vec<u64>>());
    }

    #[test]
    fn initial_data_errors_decay() {
        let plan = ExpansionPlan::new(&coin(0.5), 0).unwrap();
        let box5 = Sequence::new(0, vec![c(1.0, 0.0); 5]).unwrap();
        let errs = plan
            .initial_data_errors(&box5, &[10, 40, 160], LpNorm::INFINITY)
            .unwrap();
        assert!(errs.iter().all(|&(_, e)| e > 0.0));
        assert!(errs[2].1 < errs[0].1 / 4.0);
    }

    #[test]
    fn plan_roundtrips_through_its_report() {
        let plan = ExpansionPlan::new(&coin(0.3), 2).unwrap();
        let rebuilt = ExpansionPlan::from_report(coin(0.3), plan.report().clone(), 2).unwrap();
        for site in -2i64..=10 {
            assert_eq!(plan.approx_at(25, site), rebuilt.approx_at(25, site));
        }
    }

    #[test]
    fn plan_validates_report_contents() {
        let plan = ExpansionPlan::new(&coin(0.3), 1).unwrap();
        // Asking for more correction orders than the analysis carries.
        let err = ExpansionPlan::from_report(coin(0.3), plan.report().clone(), 5).unwrap_err();
        assert!(matches!(err, Error::InsufficientCumulants { .. }));

        let mut report = plan.report().clone();
        report.points.clear();
        let err = ExpansionPlan::from_report(coin(0.3), report, 1).unwrap_err();
        assert!(matches!(err, Error::PlanIncomplete { .. }));
    }
}
