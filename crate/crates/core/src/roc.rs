//! Empirical CDFs, ROC curves over specificity-complement levels, and AUC
//! inference for two independent score samples.
//!
//! Conventions used throughout:
//! - `F(x) = #{s <= x} / n` (right-continuous).
//! - `quantile(q) = inf { s in sample : F(s) > q }`, with the sample maximum
//!   returned for `q = 1` where that set is empty.
//! - A positive score beats a negative one when it is strictly larger; ties
//!   count one half.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Number of points in the default `p` grid (`0, 0.005, ..., 1`).
pub const DEFAULT_P_GRID_LEN: usize = 201;

/// Equispaced levels `0 = p_0 < ... < p_{len-1} = 1`.
pub fn p_grid(len: usize) -> Vec<f64> {
    assert!(len >= 2, "p grid needs at least two points");
    let mut grid: Vec<f64> = (0..len).map(|i| i as f64 / (len - 1) as f64).collect();
    grid[len - 1] = 1.0;
    grid
}

pub fn default_p_grid() -> Vec<f64> {
    p_grid(DEFAULT_P_GRID_LEN)
}

fn check_scores(name: &str, scores: &[f64]) -> Result<()> {
    if scores.is_empty() {
        return Err(Error::InsufficientData(format!("{name} score sample is empty")));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::NonFinite(format!("{name} scores contain NaN")));
    }
    Ok(())
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Empirical cumulative distribution function of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(sample: &[f64]) -> Result<Self> {
        check_scores("eCDF", sample)?;
        Ok(Ecdf { sorted: sorted(sample) })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_sample(&self) -> &[f64] {
        &self.sorted
    }

    /// Number of sample points `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&s| s <= x)
    }

    fn fraction_ge(&self, x: f64) -> f64 {
        let below = self.sorted.partition_point(|&s| s < x);
        (self.sorted.len() - below) as f64 / self.sorted.len() as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.sorted.len() as f64
    }

    /// `inf { s : F(s) > q }`; the maximum when `q = 1`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!("quantile level {q} outside [0, 1]")));
        }
        let n = self.sorted.len();
        // smallest k with (k + 1) / n > q; F is evaluated with the same division
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if (mid + 1) as f64 / n as f64 <= q {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(self.sorted[lo.min(n - 1)])
    }

    /// `integral F^2 dG - (integral F dG)^2`, with `G` the eCDF of `at`.
    pub fn spread_under(&self, at: &[f64]) -> f64 {
        let m = at.len() as f64;
        let (s1, s2) = at.iter().fold((0.0, 0.0), |(s1, s2), &x| {
            let f = self.eval(x);
            (s1 + f, s2 + f * f)
        });
        let mean = s1 / m;
        (s2 / m - mean * mean).max(0.0)
    }
}

/// Free-function form of [`Ecdf::quantile`].
pub fn ecdf_quantile(f: &Ecdf, q: f64) -> Result<f64> {
    f.quantile(q)
}

/// `P(a < b) + P(a = b) / 2` over all pairs of the two samples.
///
/// Sort-and-merge, `O((na + nb) log(na + nb))`. Pair counts are accumulated as
/// integers (twice the statistic), so the result is exact up to the final division.
pub fn prob_less(a: &[f64], b: &[f64]) -> f64 {
    debug_assert!(!a.is_empty() && !b.is_empty());
    let a = sorted(a);
    let b = sorted(b);
    prob_less_sorted(&a, &b)
}

pub(crate) fn prob_less_sorted(a: &[f64], b: &[f64]) -> f64 {
    let mut twice: u64 = 0;
    let (mut lt, mut le) = (0usize, 0usize);
    for &y in b {
        while lt < a.len() && a[lt] < y {
            lt += 1;
        }
        if le < lt {
            le = lt;
        }
        while le < a.len() && a[le] <= y {
            le += 1;
        }
        twice += 2 * lt as u64 + (le - lt) as u64;
    }
    twice as f64 / (2.0 * a.len() as f64 * b.len() as f64)
}

/// ROC curve sampled at specificity-complement levels `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    pub p: Vec<f64>,
    pub sensitivity: Vec<f64>,
}

impl RocCurve {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Largest absolute pointwise difference; both curves must share the p grid.
    pub fn sup_distance(&self, other: &RocCurve) -> Result<f64> {
        if self.p != other.p {
            return Err(Error::Dimension("ROC curves use different p grids".into()));
        }
        Ok(self
            .sensitivity
            .iter()
            .zip(&other.sensitivity)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Trapezoid area under the sampled curve.
    pub fn area(&self) -> f64 {
        self.p
            .windows(2)
            .zip(self.sensitivity.windows(2))
            .map(|(p, s)| (p[1] - p[0]) * 0.5 * (s[0] + s[1]))
            .sum()
    }
}

/// `R(p) = 1 - F_pos(F_neg^{-1}(1 - p))` at every level of `p_grid`.
///
/// At `p = 1` every trajectory is classified positive, so the value is 1.
pub fn roc_curve(neg_scores: &[f64], pos_scores: &[f64], p_grid: &[f64]) -> Result<RocCurve> {
    check_scores("negative", neg_scores)?;
    check_scores("positive", pos_scores)?;
    let neg = Ecdf::new(neg_scores)?;
    let pos = Ecdf::new(pos_scores)?;
    let mut sensitivity = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("ROC level {p} outside [0, 1]")));
        }
        let value = if p == 1.0 {
            1.0
        } else {
            1.0 - pos.eval(neg.quantile(1.0 - p)?)
        };
        sensitivity.push(value);
    }
    Ok(RocCurve {
        p: p_grid.to_vec(),
        sensitivity,
    })
}

/// Vertices `(1 - specificity, sensitivity)` of the empirical step ROC,
/// from `(0, 0)` to `(1, 1)`, one per distinct threshold.
pub fn roc_step_points(neg_scores: &[f64], pos_scores: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_scores("negative", neg_scores)?;
    check_scores("positive", pos_scores)?;
    let neg = Ecdf::new(neg_scores)?;
    let pos = Ecdf::new(pos_scores)?;
    let mut thresholds: Vec<f64> = neg.sorted_sample().iter().chain(pos.sorted_sample()).copied().collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut points = vec![(0.0, 0.0)];
    for t in thresholds {
        // classify positive when score >= t
        let fpr = neg.fraction_ge(t);
        let tpr = pos.fraction_ge(t);
        points.push((fpr, tpr));
    }
    Ok(points)
}

/// Pairwise (Mann-Whitney) AUC: `P(pos > neg) + P(pos = neg) / 2`.
///
/// Without ties this is exactly the area under the step ROC of [`roc_curve`].
pub fn auc(neg_scores: &[f64], pos_scores: &[f64]) -> Result<f64> {
    check_scores("negative", neg_scores)?;
    check_scores("positive", pos_scores)?;
    Ok(prob_less(neg_scores, pos_scores))
}

/// Plug-in asymptotic variance of `sqrt(n_pos) * (AUC_hat - AUC)`:
/// `||F_pos||_{F_neg} + (n_pos / n_neg) * ||F_neg||_{F_pos}`,
/// where `||F||_G = integral F^2 dG - (integral F dG)^2`.
pub fn auc_variance(neg_scores: &[f64], pos_scores: &[f64]) -> Result<f64> {
    check_scores("negative", neg_scores)?;
    check_scores("positive", pos_scores)?;
    let neg = Ecdf::new(neg_scores)?;
    let pos = Ecdf::new(pos_scores)?;
    let lambda_sq = pos_scores.len() as f64 / neg_scores.len() as f64;
    Ok(pos.spread_under(neg_scores) + lambda_sq * neg.spread_under(pos_scores))
}

/// AUC with its asymptotic variance and a normal-approximation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AucEstimate {
    pub auc: f64,
    /// Variance of the `sqrt(nc1)`-scaled statistic.
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
    pub nc0: usize,
    pub nc1: usize,
}

impl AucEstimate {
    pub fn ci_length(&self) -> f64 {
        self.ci_high - self.ci_low
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Two-sided standard normal critical value for a confidence `level`.
pub fn z_critical(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 * (1.0 + level)))
}

/// `AUC ± z * sigma / sqrt(nc1)`, clipped to `[0, 1]`.
pub fn auc_ci(neg_scores: &[f64], pos_scores: &[f64], level: f64) -> Result<AucEstimate> {
    let z = z_critical(level)?;
    let a = auc(neg_scores, pos_scores)?;
    let variance = auc_variance(neg_scores, pos_scores)?;
    let nc1 = pos_scores.len();
    let half = z * variance.sqrt() / (nc1 as f64).sqrt();
    Ok(AucEstimate {
        auc: a,
        variance,
        ci_low: (a - half).max(0.0),
        ci_high: (a + half).min(1.0),
        level,
        nc0: neg_scores.len(),
        nc1,
    })
}

/// Pointwise average of curves sharing one p grid.
pub fn vertical_mean(curves: &[RocCurve]) -> Result<RocCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InsufficientData("no ROC curves to average".into()))?;
    let mut sum = vec![0.0; first.len()];
    for c in curves {
        if c.p != first.p {
            return Err(Error::Dimension("ROC curves use different p grids".into()));
        }
        for (s, v) in sum.iter_mut().zip(&c.sensitivity) {
            *s += v;
        }
    }
    let n = curves.len() as f64;
    Ok(RocCurve {
        p: first.p.clone(),
        sensitivity: sum.into_iter().map(|s| s / n).collect(),
    })
}
