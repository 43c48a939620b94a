// AUC distributions of PBC and the scalar reductions across replicates.

use fnclass::baselines::ReducerKind;
use fnclass::sim::{mc_auc_study, Criterion, ModelSpec, StudyConfig};

pub fn run_example() -> fnclass::Result<()> {
    let criteria = [
        Criterion::Pbc,
        Criterion::Reducer(ReducerKind::Min),
        Criterion::Reducer(ReducerKind::Max),
        Criterion::Reducer(ReducerKind::Int),
    ];
    for id in ["I-a", "I-b", "IV-b"] {
        let model: ModelSpec = id.parse()?;
        let rows = mc_auc_study(&model, &[(50, 50)], 30, &criteria, &StudyConfig::with_seed(2))?;
        let mut line = format!("{id:<5}");
        for c in &criteria {
            let aucs: Vec<f64> = rows.iter().filter(|r| r.criterion == c.name()).map(|r| r.auc).collect();
            line += &format!("  {} {:.3}", c.name(), aucs.iter().sum::<f64>() / aucs.len() as f64);
        }
        println!("{line}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
