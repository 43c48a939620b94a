// Empirical ROC curve, AUC and its asymptotic confidence interval.

use fnclass::roc::{default_p_grid, roc_step_points};
use fnclass::{auc_ci, roc_curve, Ecdf};

pub fn run_example() -> fnclass::Result<()> {
    let neg = [0.12, 0.30, 0.35, 0.41, 0.47, 0.52, 0.58, 0.66];
    let pos = [0.38, 0.55, 0.61, 0.70, 0.74, 0.83];

    let roc = roc_curve(&neg, &pos, &default_p_grid())?;
    for p in [0.0, 0.1, 0.25, 0.5, 1.0] {
        let k = roc.p.iter().position(|&x| x >= p).unwrap_or(roc.p.len() - 1);
        println!("R({:.2}) = {:.3}", roc.p[k], roc.sensitivity[k]);
    }
    println!("step vertices: {:?}", roc_step_points(&neg, &pos)?);

    let est = auc_ci(&neg, &pos, 0.95)?;
    println!(
        "AUC = {:.4}, var = {:.4}, 95% CI [{:.4}, {:.4}]",
        est.auc, est.variance, est.ci_low, est.ci_high
    );
    println!("trapezoid area of the gridded curve: {:.4}", roc.area());
    println!("median negative score: {}", Ecdf::new(&neg)?.quantile(0.5)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
