// One training/testing evaluation: a third of the sample becomes the
// system and the remaining curves are scored against it.

use fnclass::harness::{evaluate_split, SplitConfig};
use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, ModelSpec};

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "I-b".parse()?;
    let sample = gen_sample(&model, 50, 50, &mut rng_from_seed(21))?;
    let result = evaluate_split(&sample, &SplitConfig::with_seed(4))?;
    println!("system (ns0, ns1) = {:?}", result.train_counts);
    println!("test   (nc0, nc1) = {:?}", result.test_counts);
    println!(
        "AUC = {:.3}, 95% CI [{:.3}, {:.3}]",
        result.auc.auc, result.auc.ci_low, result.auc.ci_high
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
