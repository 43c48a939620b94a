//! Monte Carlo studies: AUC distributions per criterion and confidence
//! interval coverage.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_auc, ReducerKind};
use crate::error::{Error, Result};
use crate::harness::{fit_split, with_redraws, SplitConfig};
use crate::pbc::{SampleSystem, SystemMeta};
use crate::rng::{derive_seed, derived_rng, TAG_REFERENCE, TAG_SAMPLE};
use crate::roc::{auc, auc_ci};
use crate::sim::model::{gen_sample, ModelSpec};
use crate::transform::TransformSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    Pbc,
    Reducer(ReducerKind),
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Pbc => "pbc",
            Criterion::Reducer(k) => k.name(),
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("pbc") {
            Ok(Criterion::Pbc)
        } else {
            s.parse().map(Criterion::Reducer)
        }
    }
}

/// Settings shared by the Monte Carlo studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub split: SplitConfig,
}

impl StudyConfig {
    pub fn with_seed(seed: u64) -> Self {
        StudyConfig {
            split: SplitConfig::with_seed(seed),
        }
    }
}

/// One AUC of one criterion in one replicate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolinRow {
    pub scenario: String,
    pub n0: usize,
    pub n1: usize,
    pub rep: usize,
    pub criterion: String,
    /// Reported AUC (PBC: test-cohort AUC; reducers: `max(A, 1 - A)`).
    pub auc: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Directed AUC before any orientation flip.
    pub raw_auc: f64,
}

fn sample_seed(master: u64, n0: usize, n1: usize, rep: u64) -> u64 {
    derive_seed(master, &[TAG_SAMPLE, n0 as u64, n1 as u64, rep])
}

/// Per replicate: draw a sample from `model`, evaluate PBC on a random
/// training/testing split and the reducers on the whole sample.
pub fn mc_auc_study(
    model: &ModelSpec,
    sizes: &[(usize, usize)],
    reps: usize,
    criteria: &[Criterion],
    config: &StudyConfig,
) -> Result<Vec<ViolinRow>> {
    if criteria.is_empty() {
        return Ok(Vec::new());
    }
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    config.split.validate()?;
    let scenario = model.id();
    let mut rows = Vec::new();
    for &(n0, n1) in sizes {
        let per_rep = (0..reps as u64)
            .into_par_iter()
            .map(|rep| -> Result<Vec<ViolinRow>> {
                let seed = sample_seed(config.split.seed, n0, n1, rep);
                let mut rng = derived_rng(seed, &[]);
                let sample = gen_sample(model, n0, n1, &mut rng)?;
                let mut out = Vec::with_capacity(criteria.len());
                for c in criteria {
                    let row = |auc: f64, ci_low: f64, ci_high: f64, raw_auc: f64| ViolinRow {
                        scenario: scenario.clone(),
                        n0,
                        n1,
                        rep: rep as usize,
                        criterion: c.name().to_string(),
                        auc,
                        ci_low,
                        ci_high,
                        raw_auc,
                    };
                    match c {
                        Criterion::Pbc => {
                            let ((_, _, scores), _) = with_redraws(seed, 0, |s| {
                                fit_split(
                                    &sample,
                                    &SplitConfig {
                                        seed: s,
                                        ..config.split
                                    },
                                )
                            })?;
                            let est = auc_ci(&scores.negative(), &scores.positive(), config.split.level)?;
                            out.push(row(est.auc, est.ci_low, est.ci_high, est.auc));
                        }
                        Criterion::Reducer(kind) => {
                            let b = baseline_auc(&sample, *kind, config.split.level)?;
                            out.push(row(b.estimate.auc, b.estimate.ci_low, b.estimate.ci_high, b.raw_auc));
                        }
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(per_rep.into_iter().flatten());
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageConfig {
    pub split: SplitConfig,
    /// Size of each of the two independent samples (system and test) behind
    /// the real-system AUC.
    pub real_size: (usize, usize),
    /// Size of the fresh test sample scored against each replicate's system
    /// to obtain its sample-system AUC.
    pub reference_test_size: (usize, usize),
}

impl CoverageConfig {
    pub fn with_seed(seed: u64) -> Self {
        CoverageConfig {
            split: SplitConfig::with_seed(seed),
            real_size: (2000, 2000),
            reference_test_size: (1000, 1000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub scenario: String,
    pub n0: usize,
    pub n1: usize,
    pub reps: usize,
    /// Percentage of intervals containing their own system's reference AUC.
    pub coverage_sample: f64,
    /// Percentage of intervals containing the real-system AUC.
    pub coverage_real: f64,
    pub mean_length: f64,
    pub mean_auc: f64,
    pub real_auc: f64,
}

/// AUC of a large system scored on an independent large test sample.
pub fn real_system_auc(model: &ModelSpec, size: (usize, usize), transform: &TransformSpec, seed: u64) -> Result<f64> {
    let mut rng = derived_rng(seed, &[TAG_REFERENCE, 1]);
    let train = gen_sample(model, size.0, size.1, &mut rng)?;
    let test = gen_sample(model, size.0, size.1, &mut rng)?;
    let system = SampleSystem::new(train, *transform, SystemMeta::default())?;
    let scores = system.score_sample(&test)?;
    auc(&scores.negative(), &scores.positive())
}

/// Coverage of the training/testing confidence intervals for each size.
pub fn coverage_study(
    model: &ModelSpec,
    sizes: &[(usize, usize)],
    reps: usize,
    config: &CoverageConfig,
) -> Result<Vec<CoverageReport>> {
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    config.split.validate()?;
    let real_auc = real_system_auc(model, config.real_size, &config.split.transform, config.split.seed)?;
    let (r0, r1) = config.reference_test_size;
    sizes
        .iter()
        .map(|&(n0, n1)| {
            let outcomes = (0..reps as u64)
                .into_par_iter()
                .map(|rep| -> Result<(f64, f64, f64, f64)> {
                    let seed = sample_seed(config.split.seed, n0, n1, rep);
                    let sample = gen_sample(model, n0, n1, &mut derived_rng(seed, &[]))?;
                    let ((system, _, scores), _) = with_redraws(seed, 0, |s| {
                        fit_split(
                            &sample,
                            &SplitConfig {
                                seed: s,
                                ..config.split
                            },
                        )
                    })?;
                    let est = auc_ci(&scores.negative(), &scores.positive(), config.split.level)?;
                    let mut ref_rng = derived_rng(seed, &[TAG_REFERENCE, 2]);
                    let fresh = gen_sample(model, r0, r1, &mut ref_rng)?;
                    let fresh_scores = system.score_sample(&fresh)?;
                    let system_auc = auc(&fresh_scores.negative(), &fresh_scores.positive())?;
                    Ok((
                        f64::from(u8::from(est.covers(system_auc))),
                        f64::from(u8::from(est.covers(real_auc))),
                        est.ci_length(),
                        est.auc,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let n = outcomes.len() as f64;
            let sum = outcomes.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, o| {
                (acc.0 + o.0, acc.1 + o.1, acc.2 + o.2, acc.3 + o.3)
            });
            Ok(CoverageReport {
                scenario: model.id(),
                n0,
                n1,
                reps,
                coverage_sample: 100.0 * sum.0 / n,
                coverage_real: 100.0 * sum.1 / n,
                mean_length: sum.2 / n,
                mean_auc: sum.3 / n,
                real_auc,
            })
        })
        .collect()
}

/// Scenario description read from a config file (JSON or `key = value` lines).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: String,
    pub sizes: Vec<(usize, usize)>,
    pub reps: usize,
    pub seed: u64,
    #[serde(default = "default_criteria")]
    pub criteria: Vec<String>,
    #[serde(default = "default_transform")]
    pub transform: String,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
}

fn default_criteria() -> Vec<String> {
    ["pbc", "min", "max", "int"].map(String::from).to_vec()
}

fn default_transform() -> String {
    "identity".into()
}

fn default_level() -> f64 {
    0.95
}

fn default_train_fraction() -> f64 {
    1.0 / 3.0
}

/// `"50,50;200,100"` -> `[(50, 50), (200, 100)]`.
pub fn parse_sizes(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| Error::Usage(format!("size '{pair}' is not of the form n0,n1")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("invalid size '{x}'")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

impl ScenarioConfig {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let cfg: ScenarioConfig = if text.trim_start().starts_with('{') {
            serde_json::from_str(text)
                .map_err(|e| Error::parse(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))?
        } else {
            Self::parse_key_value(text, source)?
        };
        cfg.model_spec()?;
        cfg.criteria()?;
        cfg.split_config()?;
        Ok(cfg)
    }

    fn parse_key_value(text: &str, source: &str) -> Result<Self> {
        let mut map = serde_json::Map::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let loc = format!("{source}:{}", lineno + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(&loc, format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let json = match key {
                "model" | "transform" => serde_json::Value::String(value.to_string()),
                "criteria" => value
                    .split(',')
                    .map(|c| serde_json::Value::String(c.trim().to_string()))
                    .collect(),
                "sizes" => serde_json::to_value(parse_sizes(value).map_err(|e| Error::parse(&loc, e.to_string()))?)
                    .expect("sizes serialize"),
                "reps" | "seed" => serde_json::Value::Number(
                    value
                        .parse::<u64>()
                        .map_err(|_| Error::parse(&loc, format!("{key} must be a non-negative integer")))?
                        .into(),
                ),
                "level" | "train_fraction" => serde_json::Number::from_f64(
                    value
                        .parse::<f64>()
                        .map_err(|_| Error::parse(&loc, format!("{key} must be a number")))?,
                )
                .map(serde_json::Value::Number)
                .ok_or_else(|| Error::parse(&loc, format!("{key} must be finite")))?,
                other => return Err(Error::parse(&loc, format!("unknown key '{other}'"))),
            };
            map.insert(key.to_string(), json);
        }
        serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| Error::parse(source, e.to_string()))
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        self.model.parse()
    }

    pub fn criteria(&self) -> Result<Vec<Criterion>> {
        self.criteria.iter().map(|c| c.parse()).collect()
    }

    pub fn split_config(&self) -> Result<SplitConfig> {
        let cfg = SplitConfig {
            train_fraction: self.train_fraction,
            transform: self.transform.parse()?,
            level: self.level,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
