//! JSON and CSV views of analysis and expansion results.
//!
//! All numbers are emitted in shortest round-trip decimal form, struct
//! fields serialize in declaration order, and collections are sorted, so
//! identical runs produce byte-identical output.  Complex values appear as
//! two-element `[re, im]` arrays.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::SymbolReport;
use crate::engine::{EnvelopeCheck, ExpansionPlan, ExpansionResult, RemainderNorms, SlopeFit};
use crate::error::{Error, Result};
use crate::poly::{build_polynomials, ExpansionPolynomial};

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// One cumulant `gamma_nu`.
#[derive(Clone, Debug, Serialize)]
pub struct CumulantJson {
    pub nu: u32,
    pub value: [f64; 2],
}

/// One monomial of a correction polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub degree: u32,
    pub value: [f64; 2],
}

/// A correction polynomial `P_m`.
#[derive(Clone, Debug, Serialize)]
pub struct PolynomialJson {
    pub m: usize,
    pub terms: Vec<TermJson>,
}

impl PolynomialJson {
    fn from_polynomial(p: &ExpansionPolynomial) -> PolynomialJson {
        PolynomialJson {
            m: p.m,
            terms: p
                .terms
                .iter()
                .map(|(&degree, &c)| TermJson {
                    degree,
                    value: pair(c),
                })
                .collect(),
        }
    }
}

/// One classified tangency point, with its correction polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct PointJson {
    pub theta: f64,
    /// `Some([num, den])` when `theta` is exactly `num pi / den`.
    pub theta_exact: Option<(i64, i64)>,
    pub kappa: [f64; 2],
    pub value: [f64; 2],
    pub alpha: f64,
    pub mu: u32,
    pub beta: [f64; 2],
    pub marginal_dissipation: bool,
    pub cumulants: Vec<CumulantJson>,
    pub polynomials: Vec<PolynomialJson>,
}

/// JSON form of a full symbol analysis.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolReportJson {
    pub normalized: bool,
    pub sup_modulus: f64,
    pub alternative: &'static str,
    pub order: usize,
    pub points: Vec<PointJson>,
}

impl SymbolReportJson {
    /// Builds the JSON view, constructing the correction polynomials for
    /// each point at the given order.
    pub fn from_report(report: &SymbolReport, order: usize) -> Result<SymbolReportJson> {
        let mut points = Vec::with_capacity(report.points.len());
        for p in &report.points {
            let polynomials = build_polynomials(p, order)?
                .iter()
                .map(PolynomialJson::from_polynomial)
                .collect();
            points.push(PointJson {
                theta: p.theta,
                theta_exact: p.kappa_angle.exact,
                kappa: pair(p.kappa),
                value: pair(p.value),
                alpha: p.alpha,
                mu: p.mu,
                beta: pair(p.beta),
                marginal_dissipation: p.marginal_dissipation,
                cumulants: p
                    .cumulants
                    .iter()
                    .map(|(&nu, &g)| CumulantJson { nu, value: pair(g) })
                    .collect(),
                polynomials,
            });
        }
        Ok(SymbolReportJson {
            normalized: report.normalized,
            sup_modulus: report.sup_modulus,
            alternative: "FINITE_TANGENCY",
            order,
            points,
        })
    }
}

/// JSON form of an envelope comparison.
#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeJson {
    pub c_big: f64,
    pub c_small: f64,
    pub max_ratio: f64,
    pub worst_site: i64,
    pub checked: usize,
    pub skipped: usize,
    pub passed: bool,
}

impl From<&EnvelopeCheck> for EnvelopeJson {
    fn from(e: &EnvelopeCheck) -> EnvelopeJson {
        EnvelopeJson {
            c_big: e.c_big,
            c_small: e.c_small,
            max_ratio: e.max_ratio,
            worst_site: e.worst_site,
            checked: e.checked,
            skipped: e.skipped,
            passed: e.passed,
        }
    }
}

/// JSON form of a log-log slope fit.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFitJson {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
}

impl From<&SlopeFit> for SlopeFitJson {
    fn from(f: &SlopeFit) -> SlopeFitJson {
        SlopeFitJson {
            slope: f.slope,
            intercept: f.intercept,
            r2: f.r2,
            used: f.used,
        }
    }
}

/// Fitted decay rates over a list of powers.
#[derive(Clone, Debug, Serialize)]
pub struct SlopesJson {
    pub points: usize,
    pub linf: SlopeFitJson,
    pub l1: SlopeFitJson,
}

/// Summary emitted by an expansion run.
#[derive(Clone, Debug, Serialize)]
pub struct ExpandSummaryJson {
    pub scheme: String,
    pub order: usize,
    pub n: u64,
    pub window_lo: i64,
    pub window_hi: i64,
    pub linf: f64,
    pub l1: f64,
    pub envelope: EnvelopeJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<SlopesJson>,
}

/// Serializes any `Serialize` value as pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report structs always serialize");
    s.push('\n');
    s
}

/// Writes the per-site profile CSV: exact power, approximation, remainder
/// magnitude, and the pointwise envelope.
pub fn write_profile_csv(
    w: &mut impl Write,
    plan: &ExpansionPlan,
    res: &ExpansionResult,
    c_big: f64,
    c_small: f64,
) -> std::io::Result<()> {
    writeln!(
        w,
        "ell,exact_re,exact_im,approx_re,approx_im,remainder_abs,envelope"
    )?;
    for i in 0..res.exact.len() {
        let site = res.offset + i as i64;
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            site,
            res.exact[i].re,
            res.exact[i].im,
            res.approx[i].re,
            res.approx[i].im,
            res.remainder[i].norm(),
            plan.envelope_at(res.n, site, c_big, c_small),
        )?;
    }
    Ok(())
}

/// Writes the remainder-norm CSV with columns `n,linf,l1`.
pub fn write_slopes_csv(w: &mut impl Write, norms: &[RemainderNorms]) -> std::io::Result<()> {
    writeln!(w, "n,linf,l1")?;
    for r in norms {
        writeln!(w, "{},{},{}", r.n, r.linf, r.l1)?;
    }
    Ok(())
}

/// Stable machine-readable code for an error.
pub fn error_code(err: &Error) -> &'static str {
    match err {
        Error::EmptySequence => "EMPTY_SEQUENCE",
        Error::NonFinite { .. } => "NON_FINITE",
        Error::ZeroPower => "ZERO_POWER",
        Error::InvalidNormOrder { .. } => "INVALID_NORM_ORDER",
        Error::ZeroConstantTerm => "ZERO_CONSTANT_TERM",
        Error::NotNormalized { .. } => "NOT_NORMALIZED",
        Error::AllModulusOne { .. } => "ALL_MODULUS_ONE",
        Error::DriftNotReal { .. } => "DRIFT_NOT_REAL",
        Error::DispersiveCase { .. } => "DISPERSIVE_CASE",
        Error::DegenerateSymbol { .. } => "DEGENERATE_SYMBOL",
        Error::InsufficientCumulants { .. } => "INSUFFICIENT_CUMULANTS",
        Error::NonDissipativeBeta { .. } => "NON_DISSIPATIVE_BETA",
        Error::PlanIncomplete { .. } => "PLAN_INCOMPLETE",
        Error::DegenerateData { .. } => "DEGENERATE_DATA",
        Error::ParamOutOfRange { .. } => "PARAM_OUT_OF_RANGE",
        Error::Parse(_) => "PARSE_ERROR",
        Error::Io(_) => "IO_ERROR",
        Error::UnknownSuite(_) => "UNKNOWN_SUITE",
    }
}

/// Single-line JSON diagnostic for stderr.  Structured fields the caller
/// might act on (the rescaling factor of a non-normalized symbol, the
/// offending angle of a dispersive point) are carried alongside the text.
pub fn diagnostic_json(err: &Error) -> String {
    let mut fields: BTreeMap<&'static str, serde_json::Value> = BTreeMap::new();
    match err {
        Error::NotNormalized {
            sup_modulus,
            factor,
        } => {
            fields.insert("sup_modulus", (*sup_modulus).into());
            fields.insert("factor", (*factor).into());
        }
        Error::AllModulusOne { sup_modulus } => {
            fields.insert("sup_modulus", (*sup_modulus).into());
        }
        Error::DispersiveCase { theta, order } => {
            fields.insert("theta", (*theta).into());
            fields.insert("leading_order", (*order).into());
        }
        Error::ParamOutOfRange { name, value, .. } => {
            fields.insert("parameter", (*name).into());
            fields.insert("value", (*value).into());
        }
        Error::DegenerateData { count } => {
            fields.insert("count", (*count).into());
        }
        _ => {}
    }
    let mut obj = serde_json::Map::new();
    obj.insert("error".into(), error_code(err).into());
    obj.insert("message".into(), err.to_string().into());
    for (k, v) in fields {
        obj.insert(k.to_string(), v);
    }
    serde_json::Value::Object(obj).to_string()
}
