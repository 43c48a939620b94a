// The sixteen generative models and their noise processes.

use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_trajectory, Family, ModelSpec, Variant};

pub fn run_example() -> fnclass::Result<()> {
    let mut rng = rng_from_seed(3);
    for family in Family::ALL {
        for variant in Variant::ALL {
            let model = ModelSpec::new(family, variant);
            let f = gen_trajectory(&model, 1, &mut rng)?;
            let v = f.values();
            println!(
                "{:<6} noise {:?}/{:?}  f(-1) = {:+.3}  f(0) = {:+.3}  f(1) = {:+.3}",
                model.id(),
                model.noise(0).kind,
                model.noise(1).kind,
                v[0],
                v[v.len() / 2],
                v[v.len() - 1]
            );
        }
    }
    // Without noise the mean curves are recovered exactly.
    let clean = ModelSpec::new(Family::I, Variant::B).with_noise_scale(0.0);
    let f = gen_trajectory(&clean, 1, &mut rng)?;
    println!("noiseless I-b positive at t = 0.5: {}", f.values()[75]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
