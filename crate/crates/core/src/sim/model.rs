//! The sixteen generative scenarios: four mean-curve families, each with
//! four noise variants.
//!
//! | family | negative mean                     | positive mean            |
//! |--------|-----------------------------------|--------------------------|
//! | I      | `sin(pi t)`                       | `1.4 sin(pi t)`          |
//! | II     | `b t^2` left of 0, `-b t^2` right | `a t^2`                  |
//! | III    | normal density, `mu ~ N(-0.15, 0.1)` | same with `mu ~ N(0.15, 0.1)` |
//! | IV     | `-t^3 / (2 (t - 2)^2)`            | `+t^3 / (2 (t - 2)^2)`   |
//!
//! `a`, `b` are drawn from the mixture `N(-2, 1/4)` / `N(2, 1/4)` with equal
//! weights (standard deviations), and Model III's `sigma = |N(0.5, 0.2)|`.
//!
//! Variants: `a` is the null variant for I and IV (both groups use the
//! negative mean plus Brownian noise) and noiseless for II and III; `b` adds
//! Brownian noise to both groups; `c` doubles the noise variance of the
//! positive group; `d` adds skewed exponential-marginal noise to both.
//!
//! Noise levels are set per grid step: the Brownian path is a cumulative sum
//! of independent `N(0, 1/200)` increments (`1/100` for the inflated group),
//! which on the default 101-point grid over `[-1, 1]` is a variance rate of
//! 0.25 per unit time. The skewed noise has marginal variance equal to the
//! Brownian variance at the middle of the domain (0.25 on the default grid).

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::functional::{Grid, LabeledSample, Trajectory};
use crate::sim::noise::{gen_noise, NoiseKind, NoiseSpec};

/// Per-step increment variance of the baseline Brownian noise.
pub const STEP_VARIANCE_A: f64 = 1.0 / 200.0;
/// Per-step increment variance of the inflated positive-group noise (c variants).
pub const STEP_VARIANCE_B: f64 = 1.0 / 100.0;
pub const VARIOGRAM_CORR_LENGTH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    I,
    II,
    III,
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::I, Family::II, Family::III, Family::IV];
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::A, Variant::B, Variant::C, Variant::D];
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: Family,
    pub variant: Variant,
    pub grid: Arc<Grid>,
    /// Multiplies every noise variance; 0 switches noise off.
    pub noise_scale: f64,
}

impl ModelSpec {
    pub fn new(family: Family, variant: Variant) -> Self {
        ModelSpec {
            family,
            variant,
            grid: Arc::new(Grid::simulation_default()),
            noise_scale: 1.0,
        }
    }

    pub fn with_grid(mut self, grid: Arc<Grid>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_noise_scale(mut self, scale: f64) -> Self {
        self.noise_scale = scale;
        self
    }

    /// Short id such as `I-b`.
    pub fn id(&self) -> String {
        self.to_string()
    }

    pub fn is_null(&self) -> bool {
        self.variant == Variant::A && matches!(self.family, Family::I | Family::IV)
    }

    /// Noise process added to trajectories of class `label`.
    pub fn noise(&self, label: u8) -> NoiseSpec {
        let steps = (self.grid.len() - 1) as f64;
        let unit_rate = |step_variance: f64| step_variance * steps / (self.grid.end() - self.grid.start());
        let base = match (self.family, self.variant) {
            (Family::II | Family::III, Variant::A) => NoiseSpec::none(),
            (_, Variant::A) | (_, Variant::B) => NoiseSpec::brownian(unit_rate(STEP_VARIANCE_A)),
            (_, Variant::C) if label == 1 => NoiseSpec::brownian(unit_rate(STEP_VARIANCE_B)),
            (_, Variant::C) => NoiseSpec::brownian(unit_rate(STEP_VARIANCE_A)),
            (_, Variant::D) => NoiseSpec::exp_variogram(STEP_VARIANCE_A * steps / 2.0, VARIOGRAM_CORR_LENGTH),
        };
        if self.noise_scale == 0.0 || base.kind == NoiseKind::None {
            NoiseSpec::none()
        } else {
            NoiseSpec {
                rate: base.rate * self.noise_scale,
                ..base
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.noise_scale >= 0.0 && self.noise_scale.is_finite()) {
            return Err(Error::Spec(format!(
                "noise scale {} must be finite and >= 0",
                self.noise_scale
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fam = match self.family {
            Family::I => "I",
            Family::II => "II",
            Family::III => "III",
            Family::IV => "IV",
        };
        let var = match self.variant {
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
            Variant::D => "d",
        };
        write!(f, "{fam}-{var}")
    }
}

impl std::str::FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (fam, var) = s
            .trim()
            .split_once('-')
            .ok_or_else(|| Error::Spec(format!("model '{s}' is not of the form <I|II|III|IV>-<a|b|c|d>")))?;
        let family = match fam.to_ascii_uppercase().as_str() {
            "I" | "1" => Family::I,
            "II" | "2" => Family::II,
            "III" | "3" => Family::III,
            "IV" | "4" => Family::IV,
            _ => return Err(Error::Spec(format!("unknown model family '{fam}'"))),
        };
        let variant = match var.to_ascii_lowercase().as_str() {
            "a" => Variant::A,
            "b" => Variant::B,
            "c" => Variant::C,
            "d" => Variant::D,
            _ => return Err(Error::Spec(format!("unknown model variant '{var}'"))),
        };
        Ok(ModelSpec::new(family, variant))
    }
}

/// Draw from the equal-weight mixture of `N(-2, 1/4)` and `N(2, 1/4)`.
pub(crate) fn mixture_coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let centre = if rng.random::<bool>() { 2.0 } else { -2.0 };
    let z: f64 = StandardNormal.sample(rng);
    centre + 0.25 * z
}

fn normal_density(t: f64, mu: f64, sigma: f64) -> f64 {
    let z = (t - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

fn cubic_tail(t: f64) -> f64 {
    0.5 * t.powi(3) / ((t - 2.0) * (t - 2.0))
}

/// Parameters of one random mean curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanCurve {
    Sine {
        amplitude: f64,
    },
    /// `coef * t^2` (positive) or the sign-flipping `coef * t^2 * sgn(-t)` (negative).
    Parabola {
        coef: f64,
        split: bool,
    },
    Density {
        mu: f64,
        sigma: f64,
    },
    Cubic {
        sign: f64,
    },
}

impl MeanCurve {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            MeanCurve::Sine { amplitude } => amplitude * (PI * t).sin(),
            MeanCurve::Parabola { coef, split } => {
                if split && t > 0.0 {
                    -coef * t * t
                } else {
                    coef * t * t
                }
            }
            MeanCurve::Density { mu, sigma } => normal_density(t, mu, sigma),
            MeanCurve::Cubic { sign } => sign * cubic_tail(t),
        }
    }
}

/// Draws the mean curve of one trajectory of class `label`.
pub fn draw_mean_curve<R: Rng + ?Sized>(model: &ModelSpec, label: u8, rng: &mut R) -> MeanCurve {
    let positive = label == 1;
    let null = model.is_null();
    match model.family {
        Family::I => MeanCurve::Sine {
            amplitude: if positive && !null { 1.4 } else { 1.0 },
        },
        Family::II => MeanCurve::Parabola {
            coef: mixture_coefficient(rng),
            split: !positive,
        },
        Family::III => {
            let mu_dist = Normal::new(if positive { 0.15 } else { -0.15 }, 0.1).expect("valid normal");
            let sd_dist = Normal::new(0.5, 0.2).expect("valid normal");
            let mu = mu_dist.sample(rng);
            let sigma = loop {
                let s: f64 = sd_dist.sample(rng);
                if s != 0.0 {
                    break s.abs();
                }
            };
            MeanCurve::Density { mu, sigma }
        }
        Family::IV => MeanCurve::Cubic {
            sign: if positive && !null { 1.0 } else { -1.0 },
        },
    }
}

/// One trajectory of class `label`: a random mean curve plus the variant's noise.
pub fn gen_trajectory<R: Rng + ?Sized>(model: &ModelSpec, label: u8, rng: &mut R) -> Result<Trajectory> {
    model.validate()?;
    if label > 1 {
        return Err(Error::Class(format!("label {label} is not 0 or 1")));
    }
    let mean = draw_mean_curve(model, label, rng);
    let noise = gen_noise(&model.noise(label), &model.grid, rng);
    let values = model
        .grid
        .points()
        .iter()
        .zip(noise)
        .map(|(&t, e)| mean.eval(t) + e)
        .collect();
    Trajectory::new(model.grid.clone(), values)
}

/// `n0` negatives followed by `n1` positives.
pub fn gen_sample<R: Rng + ?Sized>(model: &ModelSpec, n0: usize, n1: usize, rng: &mut R) -> Result<LabeledSample> {
    let mut trajectories = Vec::with_capacity(n0 + n1);
    let mut labels = Vec::with_capacity(n0 + n1);
    for (label, count) in [(0u8, n0), (1u8, n1)] {
        for _ in 0..count {
            trajectories.push(gen_trajectory(model, label, rng)?);
            labels.push(label);
        }
    }
    LabeledSample::new(trajectories, labels)
}
