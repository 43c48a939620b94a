//! Grids, sampled trajectories and squared-L2 distances between them.
//!
//! Every distance is the composite trapezoid integral of the squared
//! difference over the shared grid. The trapezoid weights are computed once
//! per grid, so a distance is a single weighted sum over the sample points.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Ordered sample points `t_1 < ... < t_m` on a compact interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {}", points.len())));
        }
        if let Some(i) = points.iter().position(|t| !t.is_finite()) {
            return Err(Error::Grid(format!("point {i} is not finite")));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Grid(format!(
                "points must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                i,
                points[i],
                i + 1,
                points[i + 1]
            )));
        }
        let weights = trapezoid_weights(&points);
        Ok(Grid { points, weights })
    }

    /// `m` equispaced points from `a` to `b`, endpoints included exactly.
    pub fn uniform(a: f64, b: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Grid(format!("need at least 2 points, got {m}")));
        }
        let step = (b - a) / (m - 1) as f64;
        let mut points: Vec<f64> = (0..m).map(|i| a + step * i as f64).collect();
        points[m - 1] = b;
        Grid::new(points)
    }

    /// 101 equispaced points on `[-1, 1]`, the grid used by the simulation models.
    pub fn simulation_default() -> Self {
        Grid::uniform(-1.0, 1.0, 101).expect("static grid is valid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Trapezoid quadrature weights; `sum(w[i] * v[i])` integrates `v`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.points[0]
    }

    pub fn end(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

fn trapezoid_weights(points: &[f64]) -> Vec<f64> {
    let m = points.len();
    let mut w = vec![0.0; m];
    for i in 0..m - 1 {
        let half = 0.5 * (points[i + 1] - points[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// One sampled function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "trajectory has {} values but grid has {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "trajectory value at t = {} is {}",
                grid.points()[i],
                values[i]
            )));
        }
        Ok(Trajectory { grid, values })
    }

    /// Evaluates `f` at every grid point.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Trajectory::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn shares_grid(&self, other: &Trajectory) -> bool {
        same_grid(&self.grid, &other.grid)
    }
}

pub(crate) fn same_grid(a: &Arc<Grid>, b: &Arc<Grid>) -> bool {
    Arc::ptr_eq(a, b) || a.points == b.points
}

/// Composite trapezoid approximation of the integral of `values` over `grid`.
pub fn integrate(values: &[f64], grid: &Grid) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::Dimension(format!(
            "{} values for a grid of {} points",
            values.len(),
            grid.len()
        )));
    }
    Ok(values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum())
}

#[inline]
pub(crate) fn weighted_sq_distance(f: &[f64], g: &[f64], weights: &[f64]) -> f64 {
    f.iter()
        .zip(g)
        .zip(weights)
        .map(|((a, b), w)| {
            let d = a - b;
            w * d * d
        })
        .sum()
}

/// Squared L2 distance `integral (f - g)^2 dt` between two trajectories on the same grid.
pub fn l2_distance(f: &Trajectory, g: &Trajectory) -> Result<f64> {
    if !f.shares_grid(g) {
        return Err(Error::Dimension(
            "trajectories are sampled on different grids; resample first".into(),
        ));
    }
    Ok(weighted_sq_distance(f.values(), g.values(), f.grid.weights()))
}

/// A set of trajectories on one grid with binary labels (0 negative, 1 positive).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    grid: Arc<Grid>,
    trajectories: Vec<Trajectory>,
    labels: Vec<u8>,
    ids: Vec<String>,
}

impl LabeledSample {
    /// Builds a sample with ids `"0"`, `"1"`, ... .
    pub fn new(trajectories: Vec<Trajectory>, labels: Vec<u8>) -> Result<Self> {
        let ids = (0..trajectories.len()).map(|i| i.to_string()).collect();
        LabeledSample::with_ids(trajectories, labels, ids)
    }

    pub fn with_ids(trajectories: Vec<Trajectory>, labels: Vec<u8>, ids: Vec<String>) -> Result<Self> {
        if trajectories.is_empty() {
            return Err(Error::InsufficientData("sample has no trajectories".into()));
        }
        if trajectories.len() != labels.len() || ids.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} trajectories, {} labels, {} ids",
                trajectories.len(),
                labels.len(),
                ids.len()
            )));
        }
        if let Some(i) = labels.iter().position(|&l| l > 1) {
            return Err(Error::Class(format!(
                "label of trajectory {} is {}, expected 0 or 1",
                ids[i], labels[i]
            )));
        }
        let grid = trajectories[0].grid.clone();
        if trajectories.iter().any(|t| !same_grid(&t.grid, &grid)) {
            return Err(Error::Dimension(
                "all trajectories of a sample must share one grid".into(),
            ));
        }
        Ok(LabeledSample {
            grid,
            trajectories,
            labels,
            ids,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n0(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 0).count()
    }

    pub fn n1(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Returns the sub-sample at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<LabeledSample> {
        let trajectories = indices.iter().map(|&i| self.trajectories[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let ids = indices.iter().map(|&i| self.ids[i].clone()).collect();
        LabeledSample::with_ids(trajectories, labels, ids)
    }

    /// Appends one labelled trajectory; it must share the sample grid.
    pub fn push(&mut self, trajectory: Trajectory, label: u8, id: String) -> Result<()> {
        if label > 1 {
            return Err(Error::Class(format!("label of {id} is {label}, expected 0 or 1")));
        }
        if !same_grid(&trajectory.grid, &self.grid) {
            return Err(Error::Dimension(format!("trajectory {id} is not on the sample grid")));
        }
        self.trajectories.push(trajectory);
        self.labels.push(label);
        self.ids.push(id);
        Ok(())
    }

    /// Same trajectories with every label flipped.
    pub fn label_swapped(&self) -> LabeledSample {
        LabeledSample {
            labels: self.labels.iter().map(|l| 1 - l).collect(),
            ..self.clone()
        }
    }

    /// Distances from `f` to every trajectory of the sample, in sample order.
    pub fn distances_from(&self, f: &Trajectory) -> Result<Vec<f64>> {
        if !same_grid(f.grid(), &self.grid) {
            return Err(Error::Dimension(
                "trajectory is not on the sample grid; resample first".into(),
            ));
        }
        let w = self.grid.weights();
        Ok(self
            .trajectories
            .iter()
            .map(|g| weighted_sq_distance(f.values(), g.values(), w))
            .collect())
    }
}

/// Symmetric `n x n` matrix of pairwise squared-L2 distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// All pairwise distances of a sample, computed row-parallel.
///
/// Entry `(i, j)` with `i < j` is computed once and mirrored, so the matrix
/// is exactly symmetric and independent of the thread schedule.
pub fn distance_matrix(sample: &LabeledSample) -> DistanceMatrix {
    let n = sample.len();
    let w = sample.grid().weights();
    let curves = sample.trajectories();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let fi = curves[i].values();
            curves[i + 1..]
                .iter()
                .map(|g| weighted_sq_distance(fi, g.values(), w))
                .collect()
        })
        .collect();
    let mut entries = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (k, &d) in row.iter().enumerate() {
            let j = i + 1 + k;
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    DistanceMatrix { n, entries }
}

/// Linear interpolation of `f` onto `target`; no extrapolation.
pub fn resample(f: &Trajectory, target: &Arc<Grid>) -> Result<Trajectory> {
    let src = f.grid().points();
    let vals = f.values();
    let (lo, hi) = (src[0], src[src.len() - 1]);
    if target.start() < lo || target.end() > hi {
        return Err(Error::Range(format!(
            "target grid [{}, {}] extends beyond observed range [{lo}, {hi}]",
            target.start(),
            target.end()
        )));
    }
    let mut out = Vec::with_capacity(target.len());
    let mut k = 0;
    for &t in target.points() {
        while k + 2 < src.len() && src[k + 1] < t {
            k += 1;
        }
        // src[k] <= t <= src[k + 1] except when t is left of src[1] (then k = 0).
        let (t0, t1) = (src[k], src[k + 1]);
        let v = if t == t0 {
            vals[k]
        } else if t == t1 {
            vals[k + 1]
        } else {
            let s = (t - t0) / (t1 - t0);
            vals[k] + s * (vals[k + 1] - vals[k])
        };
        out.push(v);
    }
    Trajectory::new(target.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(a: f64, b: f64, m: usize) -> Arc<Grid> {
        Arc::new(Grid::uniform(a, b, m).unwrap())
    }

    #[test]
    fn grid_rejects_bad_points() {
        assert!(matches!(Grid::new(vec![0.0]), Err(Error::Grid(_))));
        assert!(matches!(Grid::new(vec![0.0, 0.0]), Err(Error::Grid(_))));
        assert!(matches!(Grid::new(vec![1.0, 0.5]), Err(Error::Grid(_))));
        assert!(matches!(Grid::new(vec![0.0, f64::NAN]), Err(Error::Grid(_))));
        let g = Grid::simulation_default();
        assert_eq!(g.len(), 101);
        assert_eq!((g.start(), g.end()), (-1.0, 1.0));
    }

    #[test]
    fn integrate_constant_and_linear() {
        let g = Grid::new(vec![-1.0, -0.25, 0.0, 0.5, 1.0]).unwrap();
        assert_eq!(integrate(&[1.0; 5], &g).unwrap(), 2.0);
        let g = grid(-1.0, 1.0, 101);
        assert!((integrate(&vec![1.0; 101], &g).unwrap() - 2.0).abs() < 1e-14);

        let g = grid(0.0, 1.0, 11);
        let lin: Vec<f64> = g.points().to_vec();
        assert!((integrate(&lin, &g).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrate_quadratic_against_antiderivative() {
        let g = grid(0.0, 1.0, 101);
        let sq: Vec<f64> = g.points().iter().map(|t| t * t).collect();
        // trapezoid error for t^2 is h^2/6 = 1.67e-5
        assert!((integrate(&sq, &g).unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn integrate_length_mismatch() {
        let g = grid(0.0, 1.0, 3);
        assert!(matches!(integrate(&[1.0, 2.0], &g), Err(Error::Dimension(_))));
    }

    #[test]
    fn l2_distance_examples() {
        let g = grid(-1.0, 1.0, 101);
        let zero = Trajectory::from_fn(g.clone(), |_| 0.0).unwrap();
        let one = Trajectory::from_fn(g.clone(), |_| 1.0).unwrap();
        assert_eq!(l2_distance(&zero, &zero).unwrap(), 0.0);
        assert!((l2_distance(&zero, &one).unwrap() - 2.0).abs() < 1e-14);

        let sin = Trajectory::from_fn(g.clone(), |t| (PI * t).sin()).unwrap();
        let sin75 = Trajectory::from_fn(g.clone(), |t| 1.4 * (PI * t).sin()).unwrap();
        assert!((l2_distance(&sin, &sin75).unwrap() - 0.16).abs() < 1e-3);
    }

    #[test]
    fn l2_distance_rejects_grid_mismatch() {
        let f = Trajectory::from_fn(grid(0.0, 1.0, 5), |t| t).unwrap();
        let g = Trajectory::from_fn(grid(0.0, 1.0, 6), |t| t).unwrap();
        assert!(matches!(l2_distance(&f, &g), Err(Error::Dimension(_))));
    }

    #[test]
    fn trajectory_rejects_non_finite() {
        let g = grid(0.0, 1.0, 3);
        assert!(matches!(
            Trajectory::new(g, vec![0.0, f64::INFINITY, 1.0]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn distance_matrix_small_cases() {
        let g = grid(-1.0, 1.0, 21);
        let zero = Trajectory::from_fn(g.clone(), |_| 0.0).unwrap();
        let one = Trajectory::from_fn(g.clone(), |_| 1.0).unwrap();

        let single = LabeledSample::new(vec![zero.clone()], vec![0]).unwrap();
        let dm = distance_matrix(&single);
        assert_eq!(dm.len(), 1);
        assert_eq!(dm.get(0, 0), 0.0);

        let pair = LabeledSample::new(vec![zero, one], vec![0, 1]).unwrap();
        let dm = distance_matrix(&pair);
        assert_eq!(dm.get(0, 0), 0.0);
        assert_eq!(dm.get(1, 1), 0.0);
        assert!((dm.get(0, 1) - 2.0).abs() < 1e-14);
        assert_eq!(dm.get(0, 1), dm.get(1, 0));
    }

    #[test]
    fn resample_identity_and_linear() {
        let g = grid(0.0, 2.0, 9);
        let f = Trajectory::from_fn(g.clone(), |t| 3.0 * t - 1.0).unwrap();
        assert_eq!(resample(&f, &g).unwrap().values(), f.values());

        let target = Arc::new(Grid::new(vec![0.0, 0.1, 0.77, 1.3, 2.0]).unwrap());
        let r = resample(&f, &target).unwrap();
        for (v, t) in r.values().iter().zip(target.points()) {
            assert!((v - (3.0 * t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_quadratic_within_gap_bound() {
        let g = grid(0.0, 1.0, 11);
        let f = Trajectory::from_fn(g.clone(), |t| t * t).unwrap();
        let mids: Vec<f64> = g.points().windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let target = Arc::new(Grid::new(mids).unwrap());
        let r = resample(&f, &target).unwrap();
        let gap: f64 = 0.1;
        for (v, t) in r.values().iter().zip(target.points()) {
            // linear interpolation error of t^2 is (h/2)^2 at the midpoint
            assert!((v - t * t).abs() <= gap * gap);
        }
    }

    #[test]
    fn resample_refuses_extrapolation() {
        let f = Trajectory::from_fn(grid(0.0, 1.0, 5), |t| t).unwrap();
        assert!(matches!(resample(&f, &grid(-0.1, 1.0, 5)), Err(Error::Range(_))));
        assert!(matches!(resample(&f, &grid(0.0, 1.1, 5)), Err(Error::Range(_))));
    }

    #[test]
    fn sample_validation() {
        let g = grid(0.0, 1.0, 3);
        let f = Trajectory::from_fn(g.clone(), |t| t).unwrap();
        assert!(matches!(
            LabeledSample::new(vec![f.clone()], vec![2]),
            Err(Error::Class(_))
        ));
        assert!(matches!(
            LabeledSample::new(vec![f.clone()], vec![0, 1]),
            Err(Error::Dimension(_))
        ));
        let other = Trajectory::from_fn(grid(0.0, 2.0, 3), |t| t).unwrap();
        assert!(LabeledSample::new(vec![f, other], vec![0, 1]).is_err());
    }
}
