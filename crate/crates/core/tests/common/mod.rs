// Independent reference implementations used by the integration tests.
//
// Everything here is written from the definitions by direct enumeration and
// shares no code with the library beyond its data types.

#![allow(dead_code)]

use std::sync::Arc;

use fnclass::{Grid, LabeledSample, Trajectory};
use rand::Rng;

/// Squared L2 distance by the trapezoid rule, summed interval by interval.
pub fn oracle_distance(t: &[f64], f: &[f64], g: &[f64]) -> f64 {
    let mut total = 0.0;
    for k in 0..t.len() - 1 {
        let a = (f[k] - g[k]).powi(2);
        let b = (f[k + 1] - g[k + 1]).powi(2);
        total += 0.5 * (t[k + 1] - t[k]) * (a + b);
    }
    total
}

/// Smallest sample value `s` with `#{x <= s} / n > q`.
pub fn oracle_quantile(xs: &[f64], q: f64) -> f64 {
    let n = xs.len() as f64;
    let mut best = f64::INFINITY;
    for &s in xs {
        let count = xs.iter().filter(|&&x| x <= s).count() as f64;
        if count / n > q && s < best {
            best = s;
        }
    }
    if best.is_infinite() {
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        best
    }
}

/// Transform applied to one distance, fitted on the positive distances.
#[derive(Clone, Copy, Debug)]
pub enum OracleTransform {
    Identity,
    Proximity(f64),
    Truncation(f64),
}

impl OracleTransform {
    fn apply(&self, pos: &[f64], x: f64) -> f64 {
        match *self {
            OracleTransform::Identity => x,
            OracleTransform::Proximity(tau) => (x - oracle_quantile(pos, tau)).abs(),
            OracleTransform::Truncation(tau) => x.min(oracle_quantile(pos, tau)),
        }
    }

    pub fn spec(&self) -> fnclass::TransformSpec {
        match *self {
            OracleTransform::Identity => fnclass::TransformSpec::identity(),
            OracleTransform::Proximity(tau) => fnclass::TransformSpec::subgroup_proximity(tau).unwrap(),
            OracleTransform::Truncation(tau) => fnclass::TransformSpec::subgroup_truncation(tau).unwrap(),
        }
    }
}

/// Mann-Whitney score over every (positive, negative) pair of references:
/// `#{h(d+) < h(d-)} + #{h(d+) = h(d-)} / 2`, divided by the pair count.
pub fn oracle_score(pos: &[f64], neg: &[f64], h: OracleTransform) -> f64 {
    let mut twice = 0u64;
    for &p in pos {
        for &q in neg {
            let (hp, hq) = (h.apply(pos, p), h.apply(pos, q));
            if hp < hq {
                twice += 2;
            } else if hp == hq {
                twice += 1;
            }
        }
    }
    twice as f64 / (2.0 * pos.len() as f64 * neg.len() as f64)
}

/// Leave-one-out scores by enumeration.
pub fn oracle_loo(t: &[f64], curves: &[Vec<f64>], labels: &[u8], h: OracleTransform) -> Vec<f64> {
    (0..curves.len())
        .map(|i| {
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for j in 0..curves.len() {
                if j == i {
                    continue;
                }
                let d = oracle_distance(t, &curves[i], &curves[j]);
                if labels[j] == 1 {
                    pos.push(d);
                } else {
                    neg.push(d);
                }
            }
            oracle_score(&pos, &neg, h)
        })
        .collect()
}

/// Score of a new curve against a full reference set.
pub fn oracle_new(t: &[f64], curves: &[Vec<f64>], labels: &[u8], f: &[f64], h: OracleTransform) -> f64 {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (c, &l) in curves.iter().zip(labels) {
        let d = oracle_distance(t, f, c);
        if l == 1 {
            pos.push(d);
        } else {
            neg.push(d);
        }
    }
    oracle_score(&pos, &neg, h)
}

/// `P(a < b) + P(a = b) / 2` by enumeration.
pub fn oracle_prob_less(a: &[f64], b: &[f64]) -> f64 {
    let mut twice = 0u64;
    for &x in a {
        for &y in b {
            twice += if x < y {
                2
            } else if x == y {
                1
            } else {
                0
            };
        }
    }
    twice as f64 / (2.0 * a.len() as f64 * b.len() as f64)
}

/// A small instance on a dyadic grid with small integer values, so every
/// distance is exact in floating point and ties between distances are common.
pub struct Instance {
    pub t: Vec<f64>,
    pub curves: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub probe: Vec<f64>,
}

impl Instance {
    pub fn random<R: Rng>(rng: &mut R, max_per_class: usize) -> Instance {
        let m = rng.random_range(3..=8);
        let mut t = vec![0.0];
        for _ in 1..m {
            let step = [0.25, 0.5, 1.0][rng.random_range(0..3)];
            t.push(t.last().unwrap() + step);
        }
        let n0 = rng.random_range(2..=max_per_class);
        let n1 = rng.random_range(2..=max_per_class);
        let mut curves: Vec<Vec<f64>> = Vec::new();
        for _ in 0..n0 + n1 {
            if !curves.is_empty() && rng.random_bool(0.15) {
                let k = rng.random_range(0..curves.len());
                curves.push(curves[k].clone());
            } else {
                curves.push((0..m).map(|_| rng.random_range(-3..=3) as f64).collect());
            }
        }
        let mut labels = vec![0u8; n0];
        labels.extend(vec![1u8; n1]);
        for i in (1..labels.len()).rev() {
            let j = rng.random_range(0..=i);
            labels.swap(i, j);
        }
        let probe = (0..m).map(|_| rng.random_range(-3..=3) as f64).collect();
        Instance {
            t,
            curves,
            labels,
            probe,
        }
    }

    pub fn sample(&self) -> LabeledSample {
        let grid = Arc::new(Grid::new(self.t.clone()).unwrap());
        let trajectories = self
            .curves
            .iter()
            .map(|c| Trajectory::new(grid.clone(), c.clone()).unwrap())
            .collect();
        LabeledSample::new(trajectories, self.labels.clone()).unwrap()
    }

    pub fn probe_trajectory(&self, sample: &LabeledSample) -> Trajectory {
        Trajectory::new(sample.grid().clone(), self.probe.clone()).unwrap()
    }
}
