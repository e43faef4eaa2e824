//! Finitely supported complex sequences on the integer lattice.
//!
//! A [`Sequence`] stores the coefficients `a_l` for `l` in a contiguous
//! support window, in canonical trimmed form: the coefficient vector is
//! nonempty and its first and last entries are nonzero.  Convolution picks
//! direct summation or zero-padded FFT by operand size, powers use binary
//! exponentiation, and the symbol `F(e^{i theta}) = sum_l a_l e^{i l theta}`
//! is evaluated by Horner's rule on the circle.

use std::cell::RefCell;
use std::ops::RangeInclusive;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{DIRECT_CONV_MAX, TRIM_THRESHOLD};

/// Order marker for an `l^p` norm on sequences: a finite `p >= 1` or the
/// supremum norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpNorm {
    /// Finite order, guaranteed `>= 1` by [`LpNorm::new`].
    Finite(f64),
    /// Supremum of coefficient moduli.
    Infinity,
}

impl LpNorm {
    /// The `l^1` norm.
    pub const ONE: LpNorm = LpNorm::Finite(1.0);
    /// The `l^2` norm.
    pub const TWO: LpNorm = LpNorm::Finite(2.0);
    /// The supremum norm.
    pub const INFINITY: LpNorm = LpNorm::Infinity;

    /// Validates a finite order; rejects `p < 1` and NaN.
    pub fn new(p: f64) -> Result<LpNorm> {
        if p.is_finite() && p >= 1.0 {
            Ok(LpNorm::Finite(p))
        } else if p.is_infinite() && p > 0.0 {
            Ok(LpNorm::Infinity)
        } else {
            Err(Error::InvalidNormOrder { p })
        }
    }
}

/// `l^p` norm of a raw coefficient slice.
pub(crate) fn lp_norm(xs: &[Complex64], p: LpNorm) -> f64 {
    match p {
        LpNorm::Infinity => xs.iter().map(|z| z.norm()).fold(0.0, f64::max),
        LpNorm::Finite(1.0) => xs.iter().map(|z| z.norm()).sum(),
        LpNorm::Finite(2.0) => xs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        LpNorm::Finite(p) => xs
            .iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// A finitely supported complex sequence on the integers, in canonical
/// trimmed form.
///
/// # Examples
///
/// ```
/// use convpow::{LpNorm, Sequence};
/// use num_complex::Complex64;
///
/// let half = Complex64::new(0.5, 0.0);
/// let coin = Sequence::new(0, vec![half, half]).unwrap();
/// let walk = coin.power(10).unwrap();
/// assert_eq!(walk.support(), (0..=10));
/// assert!((walk.norm(LpNorm::ONE) - 1.0).abs() < 1e-12);
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    offset: i64,
    coeffs: Vec<Complex64>,
}

/// On-disk shape of a sequence: `{"offset": -1, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct SequenceJson {
    offset: i64,
    coeffs: Vec<[f64; 2]>,
}

impl Sequence {
    /// Builds a sequence from the coefficient for lattice index `offset`
    /// onward.  Trims leading and trailing entries with modulus at or below
    /// the trim threshold and rejects empty, all-zero, or non-finite data.
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Result<Sequence> {
        for (j, z) in coeffs.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    index: offset + j as i64,
                });
            }
        }
        let first = coeffs.iter().position(|z| z.norm() > TRIM_THRESHOLD);
        let Some(first) = first else {
            return Err(Error::EmptySequence);
        };
        let last = coeffs
            .iter()
            .rposition(|z| z.norm() > TRIM_THRESHOLD)
            .unwrap();
        Ok(Sequence {
            offset: offset + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        })
    }

    /// Builds a sequence from `(index, value)` pairs; unmentioned indices in
    /// between are zero.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Result<Sequence> {
        let lo = pairs
            .iter()
            .map(|&(l, _)| l)
            .min()
            .ok_or(Error::EmptySequence)?;
        let hi = pairs.iter().map(|&(l, _)| l).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for &(l, z) in pairs {
            coeffs[(l - lo) as usize] += z;
        }
        Sequence::new(lo, coeffs)
    }

    /// The unit impulse at index 0, the convolution identity.
    pub fn delta() -> Sequence {
        Sequence {
            offset: 0,
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// First lattice index of the support.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Coefficients over the support window, starting at [`Sequence::offset`].
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Canonical sequences are never empty.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Inclusive support window.
    pub fn support(&self) -> RangeInclusive<i64> {
        self.offset..=self.offset + (self.coeffs.len() as i64 - 1)
    }

    /// Coefficient at lattice index `l` (zero outside the support).
    pub fn get(&self, l: i64) -> Complex64 {
        let j = l - self.offset;
        if j >= 0 && (j as usize) < self.coeffs.len() {
            self.coeffs[j as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Sum of all coefficients, i.e. the symbol value at angle 0.
    pub fn sum(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    /// The sequence multiplied entrywise by a scalar.
    pub fn scale(&self, c: Complex64) -> Sequence {
        Sequence {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    /// Convolution `(a * b)_l = sum_j a_j b_{l-j}`.
    pub fn convolve(&self, other: &Sequence) -> Sequence {
        let coeffs = convolve_raw(&self.coeffs, &other.coeffs);
        match Sequence::new(self.offset + other.offset, coeffs) {
            Ok(s) => s,
            // Total underflow of every entry; only reachable when operand
            // magnitudes sit at the very bottom of the f64 range.
            Err(_) => Sequence {
                offset: self.offset + other.offset,
                coeffs: vec![Complex64::new(0.0, 0.0)],
            },
        }
    }

    /// The n-fold convolution power, by binary exponentiation.  `n = 0` is
    /// rejected: the expansion machinery works with `n >= 1`.
    pub fn power(&self, n: u64) -> Result<Sequence> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        let mut acc: Option<Sequence> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(r) => r.convolve(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.convolve(&base);
        }
        Ok(acc.unwrap())
    }

    /// `l^p` norm of the coefficients.
    pub fn norm(&self, p: LpNorm) -> f64 {
        lp_norm(&self.coeffs, p)
    }

    /// Symbol value `F(e^{i theta}) = sum_l a_l e^{i l theta}`.
    pub fn symbol(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * powi64(z, self.offset)
    }

    /// Derivative of the symbol in `theta`:
    /// `F'(theta) = sum_l a_l (i l) e^{i l theta}`.
    pub fn symbol_derivative(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            let l = self.offset + j as i64;
            acc = acc * z + c * Complex64::new(0.0, l as f64);
        }
        acc * powi64(z, self.offset)
    }

    /// Parses the JSON shape `{"offset": <int>, "coeffs": [[re, im], ...]}`.
    /// Non-finite numbers are rejected.
    pub fn from_json(text: &str) -> Result<Sequence> {
        let raw: SequenceJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Sequence::new(raw.offset, coeffs)
    }

    /// Serializes to the JSON file shape.
    pub fn to_json(&self) -> String {
        let raw = SequenceJson {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&raw).expect("sequence serialization cannot fail")
    }

    /// Reads a sequence from a JSON file.
    pub fn read_file(path: impl AsRef<Path>) -> Result<Sequence> {
        let text = std::fs::read_to_string(path)?;
        Sequence::from_json(&text)
    }

    /// Writes the sequence to a JSON file.
    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Integer power of a complex number, by squaring; negative exponents invert.
pub(crate) fn powi64(z: Complex64, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut base = if k < 0 { z.inv() } else { z };
    let mut k = k.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    loop {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k == 0 {
            return acc;
        }
        base *= base;
    }
}

/// Linear convolution of raw coefficient slices; picks direct summation when
/// the shorter operand is small, zero-padded FFT otherwise.
pub(crate) fn convolve_raw(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.len().min(b.len()) <= DIRECT_CONV_MAX {
        convolve_direct(a, b)
    } else {
        convolve_fft(a, b)
    }
}

fn convolve_direct(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    // Iterating the shorter operand outermost keeps the inner loop long.
    let (s, t) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for (i, &si) in s.iter().enumerate() {
        for (j, &tj) in t.iter().enumerate() {
            out[i + j] += si * tj;
        }
    }
    out
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn convolve_fft(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); size];
    let mut fb = vec![Complex64::new(0.0, 0.0); size];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let fwd = planner.plan_fft_forward(size);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(fb.iter()) {
            *x *= y;
        }
        let inv = planner.plan_fft_inverse(size);
        inv.process(&mut fa);
    });
    let scale = 1.0 / size as f64;
    fa.truncate(out_len);
    for x in fa.iter_mut() {
        *x *= scale;
    }
    fa
}
