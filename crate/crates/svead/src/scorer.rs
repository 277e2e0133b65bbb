//! Per-partition scoring and ensemble aggregation.

use rayon::prelude::*;

use crate::config::{DetectorConfig, Normalization, ScoringVariant};
use crate::dataset::{Dataset, ZScoreParams};
use crate::error::Result;
use crate::partition::{
    assign_nearest, build_partition_on, sample_anchor_indices, transpose_anchors, VoronoiPartition,
};
use crate::seed::derive_partition_seed;
use crate::Float;

/// Chunk width for the aggregation passes; fixed so results are identical
/// for any thread count.
const ACCUM_CHUNK: usize = 8192;

/// Final per-point anomaly scores plus, for each point, how many
/// partitions contributed a score (a partition contributes unless the
/// point sat alone in a singleton cell there).
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVector<F> {
    scores: Vec<F>,
    contributions: Vec<u32>,
}

impl<F: Float> ScoreVector<F> {
    pub fn scores(&self) -> &[F] {
        &self.scores
    }

    pub fn contributions(&self) -> &[u32] {
        &self.contributions
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn into_parts(self) -> (Vec<F>, Vec<u32>) {
        (self.scores, self.contributions)
    }
}

/// Score of one point within one partition, or `None` when the point is a
/// lone anchor in a singleton cell (such partitions are excluded from the
/// ensemble mean for that point).
///
/// A cell whose radius is 0 despite holding several points consists of
/// rows coinciding with the anchor; every member scores 0 there, which is
/// the limit of the dual-factor form.
pub fn partition_score<F: Float>(
    partition: &VoronoiPartition<F>,
    point_index: usize,
    variant: ScoringVariant,
) -> Option<F> {
    let cell = partition.assignment()[point_index] as usize;
    cell_score(
        partition.delta()[point_index],
        partition.cell_max()[cell],
        partition.cell_mean()[cell],
        partition.cell_count()[cell],
        variant,
    )
}

#[inline]
fn cell_score<F: Float>(
    delta: F,
    cell_max: F,
    cell_mean: F,
    cell_count: u32,
    variant: ScoringVariant,
) -> Option<F> {
    if cell_count <= 1 {
        return None;
    }
    let score = match variant {
        ScoringVariant::DualFactor => {
            if cell_max > F::zero() {
                (delta / cell_max) * cell_mean
            } else {
                F::zero()
            }
        }
        ScoringVariant::PositionOnly => {
            if cell_max > F::zero() {
                delta / cell_max
            } else {
                F::zero()
            }
        }
        ScoringVariant::MeanOnly => cell_mean,
    };
    Some(score)
}

/// Fits the ensemble on `dataset` and scores the same points
/// (transductive mode). Partition `k` uses the seed derived from
/// `config.seed` and `k`; scores are accumulated in ascending partition
/// index, so two runs with the same inputs agree bit for bit regardless of
/// thread count.
///
/// A point skipped by every partition (possible only when nearly all
/// points become anchors) gets score 0 and a warning is logged.
pub fn fit_score<F: Float>(
    dataset: &Dataset<F>,
    config: &DetectorConfig,
) -> Result<ScoreVector<F>> {
    config.validate()?;
    let normalized;
    let data = match config.normalize {
        Normalization::None => dataset,
        Normalization::ZScore => {
            normalized = dataset.zscore_normalized();
            &normalized
        }
    };

    let n = data.n();
    let m_eff = config.effective_anchor_count(n);
    if m_eff < config.anchor_count {
        log::warn!(
            "anchor count {} exceeds dataset size; m clamped to {}",
            config.anchor_count,
            n
        );
    }

    let mut sum = vec![F::zero(); n];
    let mut contributions = vec![0u32; n];
    for k in 0..config.ensemble_size {
        let partition = build_ensemble_partition(data, m_eff, config.seed, k);
        accumulate_partition(&partition, config.variant, &mut sum, &mut contributions);
    }

    Ok(finalize_scores(sum, contributions))
}

fn build_ensemble_partition<F: Float>(
    data: &Dataset<F>,
    m_eff: usize,
    master_seed: u64,
    k: usize,
) -> VoronoiPartition<F> {
    let anchors = sample_anchor_indices(data.n(), m_eff, derive_partition_seed(master_seed, k));
    build_partition_on(data.features(), data.n(), data.d(), &anchors)
}

fn accumulate_partition<F: Float>(
    partition: &VoronoiPartition<F>,
    variant: ScoringVariant,
    sum: &mut [F],
    contributions: &mut [u32],
) {
    let assignment = partition.assignment();
    let delta = partition.delta();
    let cell_max = partition.cell_max();
    let cell_mean = partition.cell_mean();
    let cell_count = partition.cell_count();

    sum.par_chunks_mut(ACCUM_CHUNK)
        .zip(contributions.par_chunks_mut(ACCUM_CHUNK))
        .zip(assignment.par_chunks(ACCUM_CHUNK))
        .zip(delta.par_chunks(ACCUM_CHUNK))
        .for_each(|(((sums, contribs), cells), deltas)| {
            for i in 0..sums.len() {
                let cell = cells[i] as usize;
                if let Some(s) = cell_score(
                    deltas[i],
                    cell_max[cell],
                    cell_mean[cell],
                    cell_count[cell],
                    variant,
                ) {
                    sums[i] = sums[i] + s;
                    contribs[i] += 1;
                }
            }
        });
}

fn finalize_scores<F: Float>(sum: Vec<F>, contributions: Vec<u32>) -> ScoreVector<F> {
    let mut skipped = 0usize;
    let scores = sum
        .into_iter()
        .zip(&contributions)
        .map(|(s, &c)| {
            if c > 0 {
                s / F::from_u32(c).unwrap()
            } else {
                skipped += 1;
                F::zero()
            }
        })
        .collect();
    if skipped > 0 {
        log::warn!("{skipped} point(s) were skipped by every partition; scored 0");
    }
    ScoreVector {
        scores,
        contributions,
    }
}

struct EnsembleMember<F> {
    /// Anchor coordinates, dimension-major and tile-padded.
    anchors_t: Vec<F>,
    num_anchors: usize,
    padded: usize,
    cell_max: Vec<F>,
    cell_mean: Vec<F>,
    cell_count: Vec<u32>,
}

/// A fitted ensemble retaining only anchor coordinates and cell statistics
/// (`O(t * m * d)` memory), able to score points that were not part of the
/// fitted dataset.
///
/// Experimental: a held-out point is placed in the cell of its nearest
/// stored anchor and scored against that cell's statistics. Points outside
/// the fitted data's extent can exceed the cell radius, so positional
/// scores above 1 (and dual-factor scores above the cell mean) are
/// possible there.
pub struct FittedEnsemble<F> {
    dim: usize,
    variant: ScoringVariant,
    zscore: Option<ZScoreParams<F>>,
    members: Vec<EnsembleMember<F>>,
}

impl<F: Float> FittedEnsemble<F> {
    /// Builds the same partitions as [`fit_score`] with the same seeds and
    /// keeps their summaries.
    pub fn fit(dataset: &Dataset<F>, config: &DetectorConfig) -> Result<Self> {
        config.validate()?;
        let normalized;
        let (data, zscore) = match config.normalize {
            Normalization::None => (dataset, None),
            Normalization::ZScore => {
                let params = dataset.zscore_params();
                normalized = dataset.zscore_normalized();
                (&normalized, Some(params))
            }
        };
        let m_eff = config.effective_anchor_count(data.n());
        if m_eff < config.anchor_count {
            log::warn!(
                "anchor count {} exceeds dataset size; m clamped to {}",
                config.anchor_count,
                data.n()
            );
        }

        let members = (0..config.ensemble_size)
            .map(|k| {
                let partition = build_ensemble_partition(data, m_eff, config.seed, k);
                let (anchors_t, padded) =
                    transpose_anchors(data.features(), data.d(), partition.anchor_indices());
                EnsembleMember {
                    anchors_t,
                    num_anchors: partition.num_cells(),
                    padded,
                    cell_max: partition.cell_max().to_vec(),
                    cell_mean: partition.cell_mean().to_vec(),
                    cell_count: partition.cell_count().to_vec(),
                }
            })
            .collect();

        Ok(Self {
            dim: data.d(),
            variant: config.variant,
            zscore,
            members,
        })
    }

    pub fn ensemble_size(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Scores arbitrary points of matching dimensionality. Applied to the
    /// fitted dataset itself this reproduces [`fit_score`] exactly.
    pub fn score_points(&self, points: &Dataset<F>) -> Result<ScoreVector<F>> {
        if points.d() != self.dim {
            return Err(crate::error::Error::LengthMismatch(format!(
                "query dimensionality {} does not match fitted dimensionality {}",
                points.d(),
                self.dim
            )));
        }
        let mut features = points.features().to_vec();
        if let Some(params) = &self.zscore {
            for row in features.chunks_exact_mut(self.dim) {
                params.transform_row(row);
            }
        }

        let n = points.n();
        let mut sum = vec![F::zero(); n];
        let mut contributions = vec![0u32; n];
        for member in &self.members {
            let (assignment, delta) = assign_nearest(
                &features,
                n,
                self.dim,
                &member.anchors_t,
                member.num_anchors,
                member.padded,
            );
            for i in 0..n {
                let cell = assignment[i] as usize;
                if let Some(s) = cell_score(
                    delta[i],
                    member.cell_max[cell],
                    member.cell_mean[cell],
                    member.cell_count[cell],
                    self.variant,
                ) {
                    sum[i] = sum[i] + s;
                    contributions[i] += 1;
                }
            }
        }
        Ok(finalize_scores(sum, contributions))
    }
}
