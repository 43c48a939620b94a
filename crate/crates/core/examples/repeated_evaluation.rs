// Repeated random splits of one sample, summarised and plotted.

use fnclass::harness::{repeated_evaluation, SplitConfig};
use fnclass::io::{write_replicates_csv, write_roc_csv, write_text};
use fnclass::plot::roc_svg;
use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, ModelSpec};
use fnclass::RocCurve;

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "III-b".parse()?;
    let sample = gen_sample(&model, 60, 30, &mut rng_from_seed(8))?;
    let summary = repeated_evaluation(&sample, &SplitConfig::with_seed(1), 40)?;
    println!(
        "mean AUC {:.3} (range {:.3} to {:.3}), mean CI [{:.3}, {:.3}], {} redraws",
        summary.mean_auc, summary.min_auc, summary.max_auc, summary.mean_ci_low, summary.mean_ci_high, summary.redraws
    );

    let dir = tempfile::tempdir().map_err(|e| fnclass::Error::io("tempdir", e))?;
    write_replicates_csv(&summary.results, dir.path().join("replicates.csv"))?;
    write_roc_csv(&summary.mean_roc, dir.path().join("mean_roc.csv"))?;
    let rays: Vec<RocCurve> = summary.results.iter().map(|r| r.roc.clone()).collect();
    write_text(
        dir.path().join("roc.svg"),
        &roc_svg(&rays, Some(&summary.mean_roc), "Model III-b"),
    )?;
    println!("wrote replicates.csv, mean_roc.csv and roc.svg");
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
