//! Per-function distance transforms applied before the Mann-Whitney comparison.
//!
//! `Identity` keeps raw distances: a function scores high when it is closer
//! to positives than to negatives. `SubgroupProximity` folds distances around
//! the `tau`-quantile of the function's own positive-distance sample, so being
//! as close as a typical positive neighbour counts more than being close to
//! every positive. That accommodates mixtures of positive sub-populations.
//! `SubgroupTruncation` caps distances at that quantile instead: every
//! positive or negative beyond the anchor counts as equally far, so only the
//! nearest subgroup drives the comparison while smaller distances still mean
//! "more positive".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roc::Ecdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformKind {
    Identity,
    SubgroupProximity,
    SubgroupTruncation,
}

impl TransformKind {
    /// Name used in system files.
    pub fn name(&self) -> &'static str {
        match self {
            TransformKind::Identity => "identity",
            TransformKind::SubgroupProximity => "subgroup_proximity",
            TransformKind::SubgroupTruncation => "subgroup_truncation",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            TransformKind::Identity,
            TransformKind::SubgroupProximity,
            TransformKind::SubgroupTruncation,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    /// Quantile level of the anchor; unused by `Identity`.
    pub tau: f64,
}

impl Default for TransformSpec {
    fn default() -> Self {
        TransformSpec::identity()
    }
}

impl TransformSpec {
    pub fn identity() -> Self {
        TransformSpec {
            kind: TransformKind::Identity,
            tau: 0.5,
        }
    }

    pub fn subgroup_proximity(tau: f64) -> Result<Self> {
        let spec = TransformSpec {
            kind: TransformKind::SubgroupProximity,
            tau,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn subgroup_truncation(tau: f64) -> Result<Self> {
        let spec = TransformSpec {
            kind: TransformKind::SubgroupTruncation,
            tau,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::Domain(format!("tau = {} outside [0, 1]", self.tau)));
        }
        Ok(())
    }
}

impl std::fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            TransformKind::Identity => f.write_str("identity"),
            TransformKind::SubgroupProximity => write!(f, "subgroup:{}", self.tau),
            TransformKind::SubgroupTruncation => write!(f, "truncate:{}", self.tau),
        }
    }
}

impl std::str::FromStr for TransformSpec {
    type Err = Error;

    /// `identity`, `subgroup[:tau]` or `truncate[:tau]` (tau defaults to 0.5).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, tau) = match s.split_once(':') {
            None => (s.as_str(), 0.5),
            Some((name, tau)) => (
                name,
                tau.parse().map_err(|_| Error::Usage(format!("invalid tau '{tau}'")))?,
            ),
        };
        let spec = match name {
            "identity" if !s.contains(':') => TransformSpec::identity(),
            "subgroup" => TransformSpec::subgroup_proximity(tau)?,
            "truncate" => TransformSpec::subgroup_truncation(tau)?,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown transform '{s}' (expected identity, subgroup[:tau] or truncate[:tau])"
                )))
            }
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedTransform {
    Identity,
    SubgroupProximity { anchor: f64 },
    SubgroupTruncation { anchor: f64 },
}

impl FittedTransform {
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            FittedTransform::Identity => x,
            FittedTransform::SubgroupProximity { anchor } => (x - anchor).abs(),
            FittedTransform::SubgroupTruncation { anchor } => x.min(anchor),
        }
    }

    pub fn anchor(&self) -> Option<f64> {
        match *self {
            FittedTransform::Identity => None,
            FittedTransform::SubgroupProximity { anchor } | FittedTransform::SubgroupTruncation { anchor } => {
                Some(anchor)
            }
        }
    }
}

/// Fits the transform from one function's distances to the positive trajectories.
pub fn fit_transform(dist_pos: &[f64], spec: &TransformSpec) -> Result<FittedTransform> {
    spec.validate()?;
    match spec.kind {
        TransformKind::Identity => Ok(FittedTransform::Identity),
        TransformKind::SubgroupProximity | TransformKind::SubgroupTruncation => {
            if dist_pos.is_empty() {
                return Err(Error::InsufficientData(
                    "subgroup transforms need at least one positive distance".into(),
                ));
            }
            let anchor = Ecdf::new(dist_pos)?.quantile(spec.tau)?;
            Ok(if spec.kind == TransformKind::SubgroupProximity {
                FittedTransform::SubgroupProximity { anchor }
            } else {
                FittedTransform::SubgroupTruncation { anchor }
            })
        }
    }
}

pub fn apply_transform(h: &FittedTransform, x: f64) -> f64 {
    h.apply(x)
}
