//! Build a sequence from raw complex coefficients, round-trip it through
//! the JSON file format, and push it through the same pipeline the
//! catalog schemes use: convolution powers, symbol classification, and an
//! expansion plan.

use num_complex::Complex64;

use convpow::analyze;
use convpow::engine::ExpansionPlan;
use convpow::sequence::Sequence;

fn main() -> convpow::Result<()> {
    // An asymmetric three-point sequence rotated by a global phase of
    // pi/3. It is not a probability distribution, but the machinery only
    // needs sup |F| = 1 with finite tangency; the phase shows up as
    // F(1) = e^{i pi/3} and is tracked exactly.
    let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let a = Sequence::new(-1, vec![phase * 0.2, phase * 0.5, phase * 0.3])?;

    let path = std::env::temp_dir().join("custom_sequence.json");
    a.write_file(&path)?;
    let b = Sequence::read_file(&path)?;
    println!("round-tripped through {}: {}", path.display(), b.to_json());

    let sq = b.power(2)?;
    println!("a*a = {}", sq.to_json());

    let report = analyze(&b, 1)?;
    let p = &report.points[0];
    println!();
    println!(
        "one tangency point: theta = {:.4}, F(kappa) = {:.4}, alpha = {:.4}, mu = {}, beta = {:.4}",
        p.theta, p.value, p.alpha, p.mu, p.beta
    );
    if let Some((num, den)) = p.value_angle.exact {
        println!("arg F(kappa) recognized exactly as {num} pi / {den}");
    }

    let plan = ExpansionPlan::new(&b, 1)?;
    let res = plan.remainder(400)?;
    println!(
        "n = 400 remainder: sup norm {:.3e}, l1 norm {:.3e}",
        res.linf, res.l1
    );
    std::fs::remove_file(&path).ok();
    Ok(())
}
