//! Tabulate attractor profiles H^beta_{2 mu}(x) to a CSV file. The Gaussian
//! case (mu = 1) has the closed form e^{-x^2/(4 beta)} / sqrt(4 pi beta);
//! the quartic case (mu = 2) is the oscillatory profile that governs
//! higher-order schemes.
//!
//! Writes `attractor_profile.csv` with columns x, gaussian, quartic_re for
//! beta matching the third-order scheme at lambda = 1/2.

use std::io::Write;

use num_complex::Complex64;

use convpow::attractor::{AttractorEvaluator, AttractorSpec};

fn main() -> convpow::Result<()> {
    let gaussian = AttractorEvaluator::new(AttractorSpec::new(1, Complex64::new(0.125, 0.0))?);
    let quartic = AttractorEvaluator::new(AttractorSpec::new(2, Complex64::new(3.0 / 128.0, 0.0))?);

    let mut out = std::fs::File::create("attractor_profile.csv")?;
    writeln!(out, "x,gaussian,quartic_re")?;
    let mut x = -6.0;
    while x <= 6.0 {
        writeln!(out, "{},{},{}", x, gaussian.eval(x).re, quartic.eval(x).re)?;
        x += 0.05;
    }

    println!("wrote attractor_profile.csv");
    println!("gaussian H(0) = {:.12}", gaussian.eval(0.0).re);
    println!("quartic  H(0) = {:.12}", quartic.eval(0.0).re);
    println!(
        "quartic profile oscillates: H(4) = {:+.3e}, H(5) = {:+.3e}",
        quartic.eval(4.0).re,
        quartic.eval(5.0).re
    );
    Ok(())
}
