//! Scalar reductions of each trajectory (minimum, maximum, integral) used as
//! comparison markers.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{integrate, LabeledSample, Trajectory};
use crate::harness::{split_sample, SplitConfig};
use crate::roc::{auc_ci, AucEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReducerKind {
    Min,
    Max,
    Int,
}

impl ReducerKind {
    pub const ALL: [ReducerKind; 3] = [ReducerKind::Min, ReducerKind::Max, ReducerKind::Int];

    pub fn name(&self) -> &'static str {
        match self {
            ReducerKind::Min => "min",
            ReducerKind::Max => "max",
            ReducerKind::Int => "int",
        }
    }
}

impl std::str::FromStr for ReducerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "min" => Ok(ReducerKind::Min),
            "max" => Ok(ReducerKind::Max),
            "int" | "integral" => Ok(ReducerKind::Int),
            other => Err(Error::Usage(format!("unknown reducer '{other}'"))),
        }
    }
}

pub fn reduce(f: &Trajectory, kind: ReducerKind) -> f64 {
    let v = f.values();
    match kind {
        ReducerKind::Min => v.iter().copied().fold(f64::INFINITY, f64::min),
        ReducerKind::Max => v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        ReducerKind::Int => integrate(v, f.grid()).expect("trajectory matches its grid"),
    }
}

/// Which direction of the reduced marker points to the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Larger values indicate positives (raw AUC above 0.5).
    HigherPositive,
    /// Smaller values indicate positives; the reported AUC is `1 - raw`.
    LowerPositive,
    /// Raw AUC exactly 0.5.
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineAuc {
    pub kind: ReducerKind,
    /// Estimate in the reported orientation (`auc >= 0.5`).
    pub estimate: AucEstimate,
    /// AUC with larger values taken as positive.
    pub raw_auc: f64,
    pub orientation: Orientation,
}

fn split_scores(sample: &LabeledSample, kind: ReducerKind) -> (Vec<f64>, Vec<f64>) {
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for (f, &l) in sample.trajectories().iter().zip(sample.labels()) {
        let r = reduce(f, kind);
        if l == 1 {
            pos.push(r)
        } else {
            neg.push(r)
        }
    }
    (neg, pos)
}

fn oriented(kind: ReducerKind, neg: &[f64], pos: &[f64], flip: Option<bool>, level: f64) -> Result<BaselineAuc> {
    let raw = auc_ci(neg, pos, level)?;
    let flip = flip.unwrap_or(raw.auc < 0.5);
    let (estimate, orientation) = if flip {
        let negated = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        (auc_ci(&negated(neg), &negated(pos), level)?, Orientation::LowerPositive)
    } else if raw.auc == 0.5 {
        (raw, Orientation::Neutral)
    } else {
        (raw, Orientation::HigherPositive)
    };
    Ok(BaselineAuc {
        kind,
        estimate,
        raw_auc: raw.auc,
        orientation,
    })
}

/// Whole-sample AUC of a reduced marker, reported as `max(A, 1 - A)`.
pub fn baseline_auc(sample: &LabeledSample, kind: ReducerKind, level: f64) -> Result<BaselineAuc> {
    let (neg, pos) = split_scores(sample, kind);
    if neg.is_empty() || pos.is_empty() {
        return Err(Error::InsufficientData("baseline AUC needs both classes".into()));
    }
    oriented(kind, &neg, &pos, None, level)
}

/// Split-mode variant: the orientation is learned on the training cohort and
/// the AUC is evaluated on the test cohort only, mirroring the PBC protocol.
pub fn baseline_split_auc<R: Rng + ?Sized>(
    sample: &LabeledSample,
    kind: ReducerKind,
    config: &SplitConfig,
    rng: &mut R,
) -> Result<BaselineAuc> {
    let (train, test) = split_sample(sample, config, rng)?;
    let (tn, tp) = split_scores(&train, kind);
    let flip = crate::roc::auc(&tn, &tp)? < 0.5;
    let (neg, pos) = split_scores(&test, kind);
    oriented(kind, &neg, &pos, Some(flip), config.level)
}
