//! Training/testing protocol around PBC: a random fraction of the sample
//! becomes the system, the rest is scored against it and yields an ROC curve
//! and an AUC with its asymptotic interval. Repeated splits are aggregated
//! and run in parallel with per-replicate seeds, so a summary depends only on
//! `(seed, reps)`.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Cohort, Error, Result};
use crate::functional::LabeledSample;
use crate::pbc::{loo_scores, SampleSystem, ScoreSet, SystemMeta};
use crate::rng::{derive_seed, derived_rng, rng_from_seed, TAG_REFERENCE, TAG_REPLICATE, TAG_SAMPLE, TAG_SPLIT};
use crate::roc::{auc_ci, default_p_grid, roc_curve, vertical_mean, AucEstimate, RocCurve};
use crate::sim::{gen_sample, ModelSpec};
use crate::transform::TransformSpec;

/// Replicates that keep depleting a class are abandoned after this many draws.
pub const MAX_REDRAWS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub transform: TransformSpec,
    pub level: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: 1.0 / 3.0,
            transform: TransformSpec::identity(),
            level: 0.95,
            seed: 0,
        }
    }
}

impl SplitConfig {
    pub fn with_seed(seed: u64) -> Self {
        SplitConfig {
            seed,
            ..SplitConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Domain(format!(
                "train fraction {} outside (0, 1)",
                self.train_fraction
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Domain(format!("level {} outside (0, 1)", self.level)));
        }
        self.transform.validate()
    }
}

fn check_cohort(cohort: Cohort, sample: &LabeledSample, min: usize) -> Result<()> {
    for class in [0u8, 1] {
        let count = sample.labels().iter().filter(|&&l| l == class).count();
        if count < min {
            return Err(Error::ResampleNeeded { cohort, class, count });
        }
    }
    Ok(())
}

/// Simple random split: `round(train_fraction * n)` trajectories form the
/// training cohort. The training cohort needs 2 trajectories per class and
/// the test cohort 1, otherwise [`Error::ResampleNeeded`] says which failed.
pub fn split_sample<R: Rng + ?Sized>(
    sample: &LabeledSample,
    config: &SplitConfig,
    rng: &mut R,
) -> Result<(LabeledSample, LabeledSample)> {
    config.validate()?;
    let n = sample.len();
    let k = (config.train_fraction * n as f64).round() as usize;
    if k == 0 || k >= n {
        return Err(Error::InsufficientData(format!(
            "train fraction {} of {n} trajectories leaves an empty cohort",
            config.train_fraction
        )));
    }
    let mut chosen = index::sample(rng, n, k).into_vec();
    chosen.sort_unstable();
    let mut in_train = vec![false; n];
    for &i in &chosen {
        in_train[i] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !in_train[i]).collect();
    let train = sample.select(&chosen)?;
    check_cohort(Cohort::Train, &train, 2)?;
    let test = sample.select(&rest)?;
    check_cohort(Cohort::Test, &test, 1)?;
    Ok((train, test))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitResult {
    pub roc: RocCurve,
    pub auc: AucEstimate,
    pub train_counts: (usize, usize),
    pub test_counts: (usize, usize),
    pub seed: u64,
}

/// Split, build the system from the training cohort and score the test cohort.
pub fn fit_split(sample: &LabeledSample, config: &SplitConfig) -> Result<(SampleSystem, LabeledSample, ScoreSet)> {
    let mut rng = derived_rng(config.seed, &[TAG_SPLIT]);
    let (train, test) = split_sample(sample, config, &mut rng)?;
    let system = SampleSystem::new(
        train,
        config.transform,
        SystemMeta {
            seed: Some(config.seed),
            note: String::new(),
        },
    )?;
    let scores = system.score_sample(&test)?;
    Ok((system, test, scores))
}

/// One training/testing evaluation; the split is drawn from `config.seed`.
pub fn evaluate_split(sample: &LabeledSample, config: &SplitConfig) -> Result<SplitResult> {
    let (system, test, scores) = fit_split(sample, config)?;
    let (neg, pos) = (scores.negative(), scores.positive());
    Ok(SplitResult {
        roc: roc_curve(&neg, &pos, &default_p_grid())?,
        auc: auc_ci(&neg, &pos, config.level)?,
        train_counts: system.counts(),
        test_counts: (test.n0(), test.n1()),
        seed: config.seed,
    })
}

/// Runs `attempt(seed)` with seeds derived from `(master, rep, redraw)`,
/// redrawing while the split depletes a class.
pub(crate) fn with_redraws<T>(master: u64, rep: u64, mut attempt: impl FnMut(u64) -> Result<T>) -> Result<(T, u32)> {
    for redraw in 0..MAX_REDRAWS {
        let seed = derive_seed(master, &[TAG_REPLICATE, rep, redraw as u64]);
        match attempt(seed) {
            Err(Error::ResampleNeeded { .. }) => continue,
            other => return other.map(|v| (v, redraw)),
        }
    }
    Err(Error::InsufficientData(format!(
        "replicate {rep} depleted a class in {MAX_REDRAWS} consecutive splits"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatedSummary {
    pub results: Vec<SplitResult>,
    pub mean_roc: RocCurve,
    pub mean_auc: f64,
    pub min_auc: f64,
    pub max_auc: f64,
    pub mean_ci_low: f64,
    pub mean_ci_high: f64,
    /// Splits discarded because a cohort lacked a class.
    pub redraws: u32,
}

impl RepeatedSummary {
    pub fn aucs(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.auc.auc).collect()
    }

    fn from_results(results: Vec<SplitResult>, redraws: u32) -> Result<Self> {
        let n = results.len() as f64;
        let curves: Vec<RocCurve> = results.iter().map(|r| r.roc.clone()).collect();
        let mean_roc = vertical_mean(&curves)?;
        let mut sum = (0.0, 0.0, 0.0);
        let mut min_auc = f64::INFINITY;
        let mut max_auc = f64::NEG_INFINITY;
        for r in &results {
            sum.0 += r.auc.auc;
            sum.1 += r.auc.ci_low;
            sum.2 += r.auc.ci_high;
            min_auc = min_auc.min(r.auc.auc);
            max_auc = max_auc.max(r.auc.auc);
        }
        Ok(RepeatedSummary {
            results,
            mean_roc,
            mean_auc: sum.0 / n,
            min_auc,
            max_auc,
            mean_ci_low: sum.1 / n,
            mean_ci_high: sum.2 / n,
            redraws,
        })
    }
}

/// `reps` independent training/testing splits of the same sample.
pub fn repeated_evaluation(sample: &LabeledSample, config: &SplitConfig, reps: usize) -> Result<RepeatedSummary> {
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    config.validate()?;
    let outcomes = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            with_redraws(config.seed, rep, |seed| {
                evaluate_split(sample, &SplitConfig { seed, ..*config })
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let redraws = outcomes.iter().map(|(_, r)| r).sum();
    let results = outcomes.into_iter().map(|(r, _)| r).collect();
    RepeatedSummary::from_results(results, redraws)
}

/// In-sample (leave-one-out) PBC ROC curve of a whole sample.
pub fn in_sample_roc(sample: &LabeledSample, transform: &TransformSpec) -> Result<RocCurve> {
    let scores = loo_scores(sample, transform)?;
    roc_curve(&scores.negative(), &scores.positive(), &default_p_grid())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n0: usize,
    pub n1: usize,
    pub reps: usize,
    pub mean_sup_distance: f64,
    pub sd_sup_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyConfig {
    pub reference_size: (usize, usize),
    pub transform: TransformSpec,
    pub seed: u64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig {
            reference_size: (2000, 2000),
            transform: TransformSpec::identity(),
            seed: 0,
        }
    }
}

/// Large-sample reference ROC for a model (in-sample estimator at `reference_size`).
pub fn reference_roc(model: &ModelSpec, config: &ConsistencyConfig) -> Result<RocCurve> {
    let (n0, n1) = config.reference_size;
    let mut rng = derived_rng(config.seed, &[TAG_REFERENCE]);
    let sample = gen_sample(model, n0, n1, &mut rng)?;
    in_sample_roc(&sample, &config.transform)
}

/// Mean sup-norm distance between the in-sample ROC estimate and a
/// large-sample reference ROC, for each sample size.
pub fn consistency_check(
    model: &ModelSpec,
    sizes: &[(usize, usize)],
    reps: usize,
    config: &ConsistencyConfig,
) -> Result<Vec<ConsistencyRow>> {
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    let reference = reference_roc(model, config)?;
    sizes
        .iter()
        .map(|&(n0, n1)| {
            let distances = (0..reps as u64)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = rng_from_seed(derive_seed(config.seed, &[TAG_SAMPLE, n0 as u64, n1 as u64, rep]));
                    let sample = gen_sample(model, n0, n1, &mut rng)?;
                    in_sample_roc(&sample, &config.transform)?.sup_distance(&reference)
                })
                .collect::<Result<Vec<f64>>>()?;
            let n = distances.len() as f64;
            let mean = distances.iter().sum::<f64>() / n;
            let var = if distances.len() > 1 {
                distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            Ok(ConsistencyRow {
                n0,
                n1,
                reps,
                mean_sup_distance: mean,
                sd_sup_distance: var.sqrt(),
            })
        })
        .collect()
}
