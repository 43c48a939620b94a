// Distance transforms on a mixture scenario: two kinds of positive curve
// (upward and downward parabolas) against two kinds of negative curve.

use fnclass::sim::{mc_auc_study, Criterion, ModelSpec, StudyConfig};
use fnclass::TransformSpec;

pub fn run_example() -> fnclass::Result<()> {
    let model: ModelSpec = "II-b".parse()?;
    for t in ["identity", "subgroup:0.5", "truncate:0.25"] {
        let mut config = StudyConfig::with_seed(6);
        config.split.transform = t.parse::<TransformSpec>()?;
        let rows = mc_auc_study(&model, &[(50, 50)], 20, &[Criterion::Pbc], &config)?;
        let mean = rows.iter().map(|r| r.auc).sum::<f64>() / rows.len() as f64;
        println!("{t:<14} mean AUC {mean:.3}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
