// Reading labeled trajectories from CSV, with and without resampling.

use std::io::Write;

use fnclass::io::{ingest_csv, write_sample_csv, IngestOptions};
use fnclass::rng::rng_from_seed;
use fnclass::sim::{gen_sample, ModelSpec};

pub fn run_example() -> fnclass::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| fnclass::Error::io("tempdir", e))?;

    // Exact round trip through the long format.
    let model: ModelSpec = "II-b".parse()?;
    let sample = gen_sample(&model, 5, 4, &mut rng_from_seed(2))?;
    let path = dir.path().join("sample.csv");
    write_sample_csv(&sample, &path)?;
    let back = ingest_csv(&path, &IngestOptions::default())?;
    assert_eq!(back.sample, sample);
    println!("round trip: n0 = {}, n1 = {}", back.sample.n0(), back.sample.n1());

    // Subjects observed at different times are placed on a common grid.
    let ragged = dir.path().join("ragged.csv");
    let mut f = std::fs::File::create(&ragged).map_err(|e| fnclass::Error::io(&ragged, e))?;
    writeln!(
        f,
        "id,label,t,value\np1,0,0,0.0\np1,0,0.4,0.2\np1,0,1,1.0\np2,1,0.1,1.0\np2,1,0.9,3.0\np2,1,1.2,2.0"
    )
    .map_err(|e| fnclass::Error::io(&ragged, e))?;
    let ing = ingest_csv(
        &ragged,
        &IngestOptions {
            resample_to: Some(5),
            wide: false,
        },
    )?;
    println!("common grid: {:?}", ing.sample.grid().points());
    for d in &ing.diagnostics {
        println!(
            "{} (label {}): {} points on [{}, {}], resampled {}",
            d.id, d.label, d.points, d.t_min, d.t_max, d.resampled
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
