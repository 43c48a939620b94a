//! Probability-based classification (PBC) of functional markers.
//!
//! Each trajectory is turned into the probability that it lies closer, in
//! squared L2 distance, to a random positive trajectory than to a random
//! negative one. Those scores are then treated as an ordinary scalar marker:
//! ROC curves, AUCs and asymptotic confidence intervals follow from a
//! training/testing split in which the training cohort acts as the reference
//! "system".
//!
//! Module map:
//! - [`functional`]: grids, trajectories, trapezoid integration, distances.
//! - [`transform`]: per-function distance transforms.
//! - [`pbc`]: leave-one-out and new-trajectory scores, systems, classification.
//! - [`roc`]: eCDFs, ROC curves, AUC, variance and intervals.
//! - [`harness`]: train/test splits, repeated evaluation, consistency checks.
//! - [`sim`]: generative models, noise, Monte Carlo studies.
//! - [`baselines`]: min / max / integral reductions.
//! - [`io`], [`plot`], [`cli`]: CSV ingestion and output, SVG plots, commands.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod functional;
pub mod harness;
pub mod io;
pub mod pbc;
pub mod plot;
pub mod rng;
pub mod roc;
pub mod sim;
pub mod transform;

pub use error::{Error, Result};
pub use functional::{
    distance_matrix, integrate, l2_distance, resample, DistanceMatrix, Grid, LabeledSample, Trajectory,
};
pub use pbc::{classify, loo_scores, SampleSystem, ScoreSet, SystemMeta};
pub use roc::{auc, auc_ci, auc_variance, roc_curve, AucEstimate, Ecdf, RocCurve};
pub use transform::{TransformKind, TransformSpec};

/// Runs `f` on a dedicated rayon pool with `threads` workers (`None`: rayon default).
///
/// Results never depend on the thread count; this only bounds parallelism.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}
