// Minimum, maximum and integral of each curve as scalar markers.

use fnclass::baselines::{baseline_auc, reduce, ReducerKind};
use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, ModelSpec};

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "I-d".parse()?;
    let sample = gen_sample(&model, 100, 100, &mut rng_from_seed(17))?;
    let first = &sample.trajectories()[0];
    for kind in ReducerKind::ALL {
        let b = baseline_auc(&sample, kind, 0.95)?;
        println!(
            "{}: first curve {:+.3}, AUC {:.3} [{:.3}, {:.3}], raw {:.3}, {:?}",
            kind.name(),
            reduce(first, kind),
            b.estimate.auc,
            b.estimate.ci_low,
            b.estimate.ci_high,
            b.raw_auc,
            b.orientation
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
