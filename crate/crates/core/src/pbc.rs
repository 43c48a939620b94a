//! Probability-based classification scores.
//!
//! A trajectory `f` is scored by the Mann-Whitney estimate of
//! `P(h_f(d(f, positive)) < h_f(d(f, negative)))`: the fraction of
//! (positive, negative) reference pairs where `f` is closer, after the
//! transform, to the positive member. Ties count one half.
//!
//! Scores come in two flavours:
//! - [`loo_scores`]: every member of a sample is scored against the rest of
//!   the same sample (leave-one-out). These feed the in-sample ROC estimate
//!   and the operating thresholds of a system.
//! - [`SampleSystem::score`]: a new trajectory is scored against a fixed
//!   reference set (the system). Scores of an independent test cohort are
//!   independent given the system, which is what the confidence intervals need.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{distance_matrix, Grid, LabeledSample, Trajectory};
use crate::roc::{prob_less_sorted, Ecdf};
use crate::transform::{fit_transform, FittedTransform, TransformSpec};

/// Scores in `[0, 1]` with the label of each scored trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    pub scores: Vec<f64>,
    pub labels: Vec<u8>,
}

impl ScoreSet {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    fn of_class(&self, class: u8) -> Vec<f64> {
        self.scores
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == class)
            .map(|(&s, _)| s)
            .collect()
    }

    pub fn negative(&self) -> Vec<f64> {
        self.of_class(0)
    }

    pub fn positive(&self) -> Vec<f64> {
        self.of_class(1)
    }
}

/// Mann-Whitney score of one function from its distances to a labelled
/// reference set, skipping index `skip` (the function itself, if present).
fn score_from_distances(distances: &[f64], labels: &[u8], skip: Option<usize>, spec: &TransformSpec) -> Result<f64> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (j, (&d, &l)) in distances.iter().zip(labels).enumerate() {
        if Some(j) == skip {
            continue;
        }
        if l == 1 {
            pos.push(d);
        } else {
            neg.push(d);
        }
    }
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::InsufficientData(format!(
            "reference set has {} positive and {} negative trajectories",
            pos.len(),
            neg.len()
        )));
    }
    let h = fit_transform(&pos, spec)?;
    if h != FittedTransform::Identity {
        pos.iter_mut().for_each(|d| *d = h.apply(*d));
        neg.iter_mut().for_each(|d| *d = h.apply(*d));
    }
    pos.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);
    Ok(prob_less_sorted(&pos, &neg))
}

/// Leave-one-out PBC score of every trajectory in `sample`.
///
/// Negatives are scored over `(n0 - 1) * n1` pairs, positives over
/// `n0 * (n1 - 1)` pairs.
pub fn loo_scores(sample: &LabeledSample, spec: &TransformSpec) -> Result<ScoreSet> {
    spec.validate()?;
    let (n0, n1) = (sample.n0(), sample.n1());
    if n0 < 2 || n1 < 2 {
        return Err(Error::InsufficientData(format!(
            "leave-one-out scoring needs at least 2 trajectories per class (n0 = {n0}, n1 = {n1})"
        )));
    }
    let dm = distance_matrix(sample);
    let labels = sample.labels();
    let scores = (0..sample.len())
        .into_par_iter()
        .map(|i| score_from_distances(dm.row(i), labels, Some(i), spec))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScoreSet {
        scores,
        labels: labels.to_vec(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemMeta {
    pub seed: Option<u64>,
    #[serde(default)]
    pub note: String,
}

/// A persisted reference set ("system") that new trajectories are scored against.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSystem {
    sample: LabeledSample,
    transform: TransformSpec,
    pub meta: SystemMeta,
}

impl SampleSystem {
    pub fn new(sample: LabeledSample, transform: TransformSpec, meta: SystemMeta) -> Result<Self> {
        transform.validate()?;
        let (n0, n1) = (sample.n0(), sample.n1());
        if n0 < 1 || n1 < 1 {
            return Err(Error::InsufficientData(format!(
                "a system needs both classes (n0 = {n0}, n1 = {n1})"
            )));
        }
        Ok(SampleSystem {
            sample,
            transform,
            meta,
        })
    }

    pub fn sample(&self) -> &LabeledSample {
        &self.sample
    }

    pub fn transform(&self) -> &TransformSpec {
        &self.transform
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.sample.grid()
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.sample.n0(), self.sample.n1())
    }

    /// PBC score of a new trajectory against every system member.
    pub fn score(&self, f: &Trajectory) -> Result<f64> {
        let d = self.sample.distances_from(f)?;
        score_from_distances(&d, self.sample.labels(), None, &self.transform)
    }

    /// Scores every trajectory of `test` (in parallel); labels are carried over.
    pub fn score_sample(&self, test: &LabeledSample) -> Result<ScoreSet> {
        let scores = test
            .trajectories()
            .par_iter()
            .map(|f| self.score(f))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ScoreSet {
            scores,
            labels: test.labels().to_vec(),
        })
    }

    /// Leave-one-out scores of the system's own negatives, the reference
    /// distribution for [`classify`] thresholds.
    pub fn negative_reference_scores(&self) -> Result<Vec<f64>> {
        Ok(loo_scores(&self.sample, &self.transform)?.negative())
    }

    /// Adds one labelled trajectory to the reference set.
    pub fn feed(&mut self, f: Trajectory, label: u8, id: impl Into<String>) -> Result<()> {
        self.sample.push(f, label, id.into())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = SystemFile::from(self);
        let text =
            serde_json::to_string_pretty(&file).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SampleSystem::from_json(&text, &path.display().to_string())
    }

    /// Parses a system document; `source` names it in error messages.
    pub fn from_json(text: &str, source: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("{source}:{}:{}", e.line(), e.column()), e.to_string()))?;
        file.into_system(source)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SystemFile::from(self)).expect("system serializes")
    }
}

pub fn save_system(system: &SampleSystem, path: impl AsRef<Path>) -> Result<()> {
    system.save(path)
}

pub fn load_system(path: impl AsRef<Path>) -> Result<SampleSystem> {
    SampleSystem::load(path)
}

pub fn score_new(system: &SampleSystem, f: &Trajectory) -> Result<f64> {
    system.score(f)
}

/// Classifies `f` as positive (1) when its score exceeds the `(1 - p)`
/// eCDF quantile of the negative reference scores, so that at most a
/// fraction `p` of those negatives would be called positive.
pub fn classify(system: &SampleSystem, f: &Trajectory, p: f64, neg_scores: &[f64]) -> Result<u8> {
    let threshold = classification_threshold(p, neg_scores)?;
    Ok(u8::from(system.score(f)? > threshold))
}

/// Score cut-off used by [`classify`] at false-positive level `p`.
pub fn classification_threshold(p: f64, neg_scores: &[f64]) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("level p = {p} outside [0, 1]")));
    }
    if neg_scores.is_empty() {
        return Err(Error::InsufficientData(
            "classification needs negative reference scores".into(),
        ));
    }
    Ecdf::new(neg_scores)?.quantile(1.0 - p)
}

pub const SYSTEM_FILE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TransformEntry {
    kind: String,
    tau: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SystemFile {
    version: u32,
    grid: Vec<f64>,
    labels: Vec<u8>,
    values: Vec<Vec<f64>>,
    transform: TransformEntry,
    meta: SystemMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ids: Option<Vec<String>>,
}

impl From<&SampleSystem> for SystemFile {
    fn from(s: &SampleSystem) -> Self {
        let kind = s.transform.kind.name();
        SystemFile {
            version: SYSTEM_FILE_VERSION,
            grid: s.grid().points().to_vec(),
            labels: s.sample.labels().to_vec(),
            values: s.sample.trajectories().iter().map(|t| t.values().to_vec()).collect(),
            transform: TransformEntry {
                kind: kind.into(),
                tau: s.transform.tau,
            },
            meta: s.meta.clone(),
            ids: Some(s.sample.ids().to_vec()),
        }
    }
}

impl SystemFile {
    fn into_system(self, source: &str) -> Result<SampleSystem> {
        let at = |field: &str| format!("{source}: field `{field}`");
        if self.version != SYSTEM_FILE_VERSION {
            return Err(Error::parse(
                at("version"),
                format!("unsupported version {}", self.version),
            ));
        }
        let grid = Arc::new(Grid::new(self.grid).map_err(|e| Error::parse(at("grid"), e.to_string()))?);
        if self.values.len() != self.labels.len() {
            return Err(Error::parse(
                at("values"),
                format!("{} trajectories but {} labels", self.values.len(), self.labels.len()),
            ));
        }
        let trajectories = self
            .values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                Trajectory::new(grid.clone(), v).map_err(|e| Error::parse(at(&format!("values[{i}]")), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = self
            .ids
            .unwrap_or_else(|| (0..self.labels.len()).map(|i| i.to_string()).collect());
        let sample = LabeledSample::with_ids(trajectories, self.labels, ids)
            .map_err(|e| Error::parse(at("labels"), e.to_string()))?;
        let kind = crate::transform::TransformKind::from_name(&self.transform.kind).ok_or_else(|| {
            Error::parse(
                at("transform.kind"),
                format!("unknown transform kind '{}'", self.transform.kind),
            )
        })?;
        let transform = TransformSpec {
            kind,
            tau: self.transform.tau,
        };
        transform
            .validate()
            .map_err(|e| Error::parse(at("transform.tau"), e.to_string()))?;
        SampleSystem::new(sample, transform, self.meta).map_err(|e| Error::parse(at("labels"), e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<Grid> {
        Arc::new(Grid::uniform(0.0, 1.0, 5).unwrap())
    }

    fn constant(c: f64) -> Trajectory {
        Trajectory::from_fn(grid(), |_| c).unwrap()
    }

    fn sample(levels: &[f64], labels: &[u8]) -> LabeledSample {
        LabeledSample::new(levels.iter().map(|&c| constant(c)).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn loo_hand_enumeration() {
        // constants: distance = (a - b)^2 on a unit interval
        let s = sample(&[0.0, 1.0, 3.0, 4.5], &[0, 0, 1, 1]);
        let scores = loo_scores(&s, &TransformSpec::identity()).unwrap();
        // i = 0: neg {1}, pos {9, 20.25}: d_pos < d_neg never -> 0
        // i = 1: neg {1}, pos {4, 12.25} -> 0
        // i = 2: neg {9, 4}, pos {2.25}: 2/2 -> 1
        // i = 3: neg {20.25, 12.25}, pos {2.25} -> 1
        assert_eq!(scores.scores, vec![0.0, 0.0, 1.0, 1.0]);

        let s = sample(&[0.0, 2.0, 1.0, 5.0], &[0, 0, 1, 1]);
        let scores = loo_scores(&s, &TransformSpec::identity()).unwrap();
        // i = 0: neg {4}, pos {1, 25} -> 1/2
        // i = 1: neg {4}, pos {1, 9} -> 1/2
        // i = 2: neg {1, 1}, pos {16} -> 0
        // i = 3: neg {25, 9}, pos {16} -> 1/2
        assert_eq!(scores.scores, vec![0.5, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn loo_total_ties() {
        let s = sample(&[1.0; 6], &[0, 0, 0, 1, 1, 1]);
        let scores = loo_scores(&s, &TransformSpec::identity()).unwrap();
        assert!(scores.scores.iter().all(|&x| x == 0.5));
    }

    #[test]
    fn loo_label_swap_duality() {
        let s = sample(&[0.0, 0.7, 2.0, 1.1, 3.3, 0.2], &[0, 1, 0, 1, 1, 0]);
        let a = loo_scores(&s, &TransformSpec::identity()).unwrap();
        let b = loo_scores(&s.label_swapped(), &TransformSpec::identity()).unwrap();
        // Both scores share the denominator 2 * 3 * 2 pairs; compare the counts.
        for (x, y) in a.scores.iter().zip(&b.scores) {
            assert_eq!((x * 12.0).round() + (y * 12.0).round(), 12.0);
            assert!((y - (1.0 - x)).abs() < 1e-15);
        }
    }

    #[test]
    fn loo_requires_two_per_class() {
        let s = sample(&[0.0, 1.0, 2.0], &[0, 1, 1]);
        assert!(matches!(
            loo_scores(&s, &TransformSpec::identity()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn score_new_separation_and_ties() {
        let sys = SampleSystem::new(
            sample(&[0.0, 0.5, 5.0, 5.5], &[0, 0, 1, 1]),
            TransformSpec::identity(),
            SystemMeta::default(),
        )
        .unwrap();
        assert_eq!(sys.score(&constant(5.2)).unwrap(), 1.0);
        assert_eq!(sys.score(&constant(0.1)).unwrap(), 0.0);

        let sys = SampleSystem::new(
            sample(&[-1.0, 1.0, -1.0, 1.0], &[0, 0, 1, 1]),
            TransformSpec::identity(),
            SystemMeta::default(),
        )
        .unwrap();
        assert_eq!(sys.score(&constant(0.0)).unwrap(), 0.5);
    }

    #[test]
    fn classify_boundaries() {
        let sys = SampleSystem::new(
            sample(&[0.0, 0.5, 5.0, 5.5], &[0, 0, 1, 1]),
            TransformSpec::identity(),
            SystemMeta::default(),
        )
        .unwrap();
        let neg = [0.1, 0.3, 0.6];
        assert_eq!(classification_threshold(1.0, &neg).unwrap(), 0.1);
        assert_eq!(classification_threshold(0.0, &neg).unwrap(), 0.6);
        // score 1 beats every threshold, score 0 none
        assert_eq!(classify(&sys, &constant(5.2), 0.0, &neg).unwrap(), 1);
        assert_eq!(classify(&sys, &constant(0.1), 1.0, &neg).unwrap(), 0);
        assert!(matches!(
            classify(&sys, &constant(0.1), 1.5, &neg),
            Err(Error::Domain(_))
        ));
        assert!(classify(&sys, &constant(0.1), 0.5, &[]).is_err());
    }

    #[test]
    fn system_needs_both_classes() {
        assert!(SampleSystem::new(
            sample(&[0.0, 1.0], &[0, 0]),
            TransformSpec::identity(),
            SystemMeta::default()
        )
        .is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let sys = SampleSystem::new(
            sample(&[0.1, 1.0 / 3.0, 2.0, 1e-300], &[0, 1, 0, 1]),
            TransformSpec::subgroup_proximity(0.25).unwrap(),
            SystemMeta {
                seed: Some(u64::MAX),
                note: "unit".into(),
            },
        )
        .unwrap();
        let back = SampleSystem::from_json(&sys.to_json(), "mem").unwrap();
        assert_eq!(back, sys);

        let broken = sys.to_json().replace("\"labels\"", "\"labelz\"");
        let err = SampleSystem::from_json(&broken, "mem").unwrap_err();
        assert!(err.to_string().contains("labels"), "{err}");

        let err = SampleSystem::from_json("{\"version\": 1,\n \"grid\": [0", "mem").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
