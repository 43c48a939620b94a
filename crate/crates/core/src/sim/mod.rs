//! Simulation lab: generative models, noise processes and the Monte Carlo
//! studies built on them.

mod model;
mod noise;
mod study;

pub use model::{
    draw_mean_curve, gen_sample, gen_trajectory, Family, MeanCurve, ModelSpec, Variant, STEP_VARIANCE_A,
    STEP_VARIANCE_B, VARIOGRAM_CORR_LENGTH,
};
pub use noise::{gen_noise, NoiseKind, NoiseSpec};
pub use study::{
    coverage_study, mc_auc_study, parse_sizes, real_system_auc, CoverageConfig, CoverageReport, Criterion,
    ScenarioConfig, StudyConfig, ViolinRow,
};
