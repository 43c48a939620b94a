// Leave-one-out PBC scores of a simulated sample.

use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, ModelSpec};
use fnclass::{auc, loo_scores, TransformSpec};

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "I-b".parse()?;
    let sample = gen_sample(&model, 30, 30, &mut rng_from_seed(11))?;
    let scores = loo_scores(&sample, &TransformSpec::identity())?;

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("mean score, negatives: {:.3}", mean(&scores.negative()));
    println!("mean score, positives: {:.3}", mean(&scores.positive()));
    // In-sample AUC of the scores; optimistic, see the train/test example.
    println!("in-sample AUC: {:.3}", auc(&scores.negative(), &scores.positive())?);
    assert!(scores.scores.iter().all(|s| (0.0..=1.0).contains(s)));
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
