// Grids, trajectories and squared L2 distances.

use std::f64::consts::PI;
use std::sync::Arc;

use fnclass::{distance_matrix, integrate, l2_distance, Grid, LabeledSample, Trajectory};

pub fn run_example() -> fnclass::Result<()> {
    let grid = Arc::new(Grid::uniform(-1.0, 1.0, 101)?);
    let g = Trajectory::from_fn(grid.clone(), |t| (PI * t).sin())?;
    let f = Trajectory::from_fn(grid.clone(), |t| 1.4 * (PI * t).sin())?;

    // The squared distance between the two curves is 0.16 * int sin^2 = 0.16.
    let d = l2_distance(&g, &f)?;
    println!("d(g, f) = {d:.6}");
    println!("int g   = {:.2e}", integrate(g.values(), &grid)?);

    let sample = LabeledSample::new(vec![g.clone(), f.clone(), g], vec![0, 1, 0])?;
    let dm = distance_matrix(&sample);
    for i in 0..dm.len() {
        let row: Vec<String> = dm.row(i).iter().map(|v| format!("{v:.4}")).collect();
        println!("[{}]", row.join(", "));
    }
    assert_eq!(dm.get(0, 2), 0.0);
    assert_eq!(dm.get(0, 1), dm.get(1, 0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> fnclass::Result<()> {
    run_example()
}
