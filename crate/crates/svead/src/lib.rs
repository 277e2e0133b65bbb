//! SVEAD: stochastic Voronoi ensemble anomaly detection.
//!
//! Scores tabular data by repeatedly partitioning it with random Voronoi
//! diagrams. Each of `t` partitions samples `m` data points as anchors and
//! assigns every point to its nearest anchor. Within a cell a point is
//! scored by its anchor distance normalized by the cell radius and weighted
//! by the cell's mean anchor distance,
//!
//! ```text
//! s(x) = (delta / delta_max) * delta_mean
//! ```
//!
//! so that edge points of cells in sparse regions outscore edge points of
//! cells in dense regions. The final score is the mean over the ensemble.
//! Higher scores mean more anomalous.
//!
//! Everything is deterministic given a master seed: partition seeds are
//! derived with a fixed mixing function, so results are independent of
//! evaluation order and thread count.
//!
//! ```
//! use svead::{fit_score, DetectorConfig};
//!
//! let dataset = svead::synth::gen_global_s1::<f64>(7);
//! let config = DetectorConfig::default();
//! let scores = fit_score(&dataset, &config).unwrap();
//! assert_eq!(scores.len(), dataset.n());
//! ```

pub mod config;
pub mod dataset;
pub mod error;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod scorer;
pub mod seed;
pub mod synth;

use std::fmt;

/// Scalar type the detector operates on.
pub trait Float:
    num_traits::Float + num_traits::FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl Float for f32 {}
impl Float for f64 {}

pub use config::{DetectorConfig, Normalization, ScoringVariant};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use metrics::{
    auc_pr, auc_roc, log_log_slope, repeated_eval, repeated_eval_seeded, EvalReport,
};
pub use partition::{build_partition, sample_anchors, VoronoiPartition};
pub use scorer::{fit_score, partition_score, FittedEnsemble, ScoreVector};
pub use seed::derive_partition_seed;

pub type Dataset32 = Dataset<f32>;
pub type Dataset64 = Dataset<f64>;
pub type VoronoiPartition32 = VoronoiPartition<f32>;
pub type VoronoiPartition64 = VoronoiPartition<f64>;
pub type ScoreVector32 = ScoreVector<f32>;
pub type ScoreVector64 = ScoreVector<f64>;
