// Build a system, save it, reload it, feed it and classify new curves.

use fnclass::pbc::{classification_threshold, score_new};
use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, gen_trajectory, ModelSpec};
use fnclass::{classify, SampleSystem, SystemMeta, TransformSpec};

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "IV-b".parse()?;
    let mut rng = rng_from_seed(5);
    let train = gen_sample(&model, 40, 40, &mut rng)?;
    let system = SampleSystem::new(
        train,
        TransformSpec::identity(),
        SystemMeta {
            seed: Some(5),
            note: "Model IV-b, 40 + 40".into(),
        },
    )?;

    let dir = tempfile::tempdir().map_err(|e| fnclass::Error::io("tempdir", e))?;
    let path = dir.path().join("iv-b.pbcsys.json");
    system.save(&path)?;
    let mut loaded = SampleSystem::load(&path)?;
    assert_eq!(loaded, system);

    let extra = gen_trajectory(&model, 1, &mut rng)?;
    loaded.feed(extra, 1, "fed-1")?;
    loaded.save(&path)?;
    println!("counts after feeding: {:?}", SampleSystem::load(&path)?.counts());

    // Threshold at 80% specificity on the system's own negatives.
    let neg = loaded.negative_reference_scores()?;
    println!("threshold: {:.3}", classification_threshold(0.2, &neg)?);
    for label in [0, 1] {
        let f = gen_trajectory(&model, label, &mut rng)?;
        println!(
            "true {label}: score {:.3}, class {}",
            score_new(&loaded, &f)?,
            classify(&loaded, &f, 0.2, &neg)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
