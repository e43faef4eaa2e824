//! Measure how fast the order-M expansion closes in on the exact
//! convolution powers of the third-order scheme. With M = 3 and a quartic
//! tangency point (mu = 2), the sup-norm remainder should decay like
//! n^{-(M+2)/(2 mu)} = n^{-5/4} and the l1 remainder like n^{-1}.

use convpow::engine::{fit_slope, ExpansionPlan};
use convpow::{catalog, default_n_list};

fn main() -> convpow::Result<()> {
    let a = catalog::o3(0.5)?;
    let plan = ExpansionPlan::new(&a, 3)?;

    let ns = default_n_list(1000);
    let norms = plan.remainder_norms(&ns)?;

    println!("{:>6} {:>14} {:>14}", "n", "sup norm", "l1 norm");
    for r in norms.iter().step_by(6) {
        println!("{:>6} {:>14.6e} {:>14.6e}", r.n, r.linf, r.l1);
    }

    let linf: Vec<(f64, f64)> = norms.iter().map(|r| (r.n as f64, r.linf)).collect();
    let l1: Vec<(f64, f64)> = norms.iter().map(|r| (r.n as f64, r.l1)).collect();
    let fit_linf = fit_slope(&linf)?;
    let fit_l1 = fit_slope(&l1)?;

    println!();
    println!(
        "sup norm: slope {:.4} over {} powers (r2 = {:.4}), predicted -5/4",
        fit_linf.slope, fit_linf.used, fit_linf.r2
    );
    println!(
        "l1 norm:  slope {:.4} over {} powers (r2 = {:.4}), predicted -1",
        fit_l1.slope, fit_l1.used, fit_l1.r2
    );
    Ok(())
}
