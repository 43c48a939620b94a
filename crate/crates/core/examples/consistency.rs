// The in-sample ROC estimate approaches a large-sample reference as the
// sample grows.

use fnclass::harness::{consistency_check, ConsistencyConfig};
use fnclass::sim::ModelSpec;

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "I-b".parse()?;
    let config = ConsistencyConfig {
        reference_size: (400, 400),
        seed: 3,
        ..ConsistencyConfig::default()
    };
    for row in consistency_check(&model, &[(25, 25), (100, 100)], 10, &config)? {
        println!(
            "({},{}): mean sup distance {:.3} (sd {:.3})",
            row.n0, row.n1, row.mean_sup_distance, row.sd_sup_distance
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
