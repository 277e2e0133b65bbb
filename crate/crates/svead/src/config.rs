//! Detector hyperparameters.

use crate::error::{Error, Result};

/// Which per-partition score a point receives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoringVariant {
    /// `(delta / delta_max) * delta_mean`: relative in-cell position
    /// weighted by the cell's local scale. The default.
    DualFactor,
    /// `delta / delta_max` alone, in [0, 1]. Ablation variant: every cell
    /// looks alike, so dense- and sparse-region edge points tie.
    PositionOnly,
    /// `delta_mean` of the point's cell alone. Ablation variant: points
    /// within one cell are indistinguishable.
    MeanOnly,
}

/// Optional feature preprocessing applied before fitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Score in the raw feature space.
    None,
    /// Per-feature mean 0 / standard deviation 1; zero-variance features
    /// map to 0.
    ZScore,
}

/// Ensemble hyperparameters. `anchor_count` larger than the dataset is
/// clamped to `n` at fit time (with a warning).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectorConfig {
    /// Anchors sampled per partition (`m`).
    pub anchor_count: usize,
    /// Number of partitions in the ensemble (`t`).
    pub ensemble_size: usize,
    /// Master seed; per-partition seeds are derived from it.
    pub seed: u64,
    pub variant: ScoringVariant,
    pub normalize: Normalization,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            anchor_count: 16,
            ensemble_size: 100,
            seed: 0,
            variant: ScoringVariant::DualFactor,
            normalize: Normalization::None,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.anchor_count == 0 {
            return Err(Error::InvalidConfig("anchor_count must be >= 1".into()));
        }
        if self.ensemble_size == 0 {
            return Err(Error::InvalidConfig("ensemble_size must be >= 1".into()));
        }
        Ok(())
    }

    /// Anchors actually used on a dataset of `n` rows.
    pub fn effective_anchor_count(&self, n: usize) -> usize {
        self.anchor_count.min(n)
    }
}
