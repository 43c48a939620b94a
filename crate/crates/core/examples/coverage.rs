// Coverage of the AUC confidence intervals (small scale).

use fnclass::sim::{coverage_study, CoverageConfig, ModelSpec};

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "I-a".parse()?;
    let config = CoverageConfig {
        real_size: (300, 300),
        reference_test_size: (200, 200),
        ..CoverageConfig::with_seed(9)
    };
    for r in coverage_study(&model, &[(50, 50)], 40, &config)? {
        println!(
            "{} ({},{}): sample-system {:.1}%, real-system {:.1}%, mean length {:.3}",
            r.scenario, r.n0, r.n1, r.coverage_sample, r.coverage_real, r.mean_length
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
