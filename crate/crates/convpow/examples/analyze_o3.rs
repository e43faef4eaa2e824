//! Classify the symbol of the third-order upwind scheme: find the points
//! where |F| touches 1, and print drift, dissipation order, and the
//! correction polynomials as a JSON report.

use convpow::report::{to_json_pretty, SymbolReportJson};
use convpow::{analyze, catalog};

fn main() -> convpow::Result<()> {
    let a = catalog::o3(0.5)?;
    let report = analyze(&a, 3)?;

    println!("tangency points: {}", report.points.len());
    for p in &report.points {
        println!(
            "  theta = {:+.6}  alpha = {:+.6}  mu = {}  beta = {:.6}",
            p.theta, p.alpha, p.mu, p.beta
        );
    }

    print!(
        "{}",
        to_json_pretty(&SymbolReportJson::from_report(&report, 3)?)
    );
    Ok(())
}
