//! Independent reference implementations used as test oracles.
//!
//! These deliberately mirror the two-phase ensemble procedure in its
//! naivest form: true (rooted) distances everywhere, nearest anchors
//! recomputed from scratch in the scoring loop, plain uncompensated sums.
//! They share only the anchor sampling routine with the library, so both
//! sides see the same random draws and everything downstream is computed
//! twice by unrelated code paths.

#![allow(dead_code)]

use svead::{derive_partition_seed, sample_anchors, Dataset, DetectorConfig, ScoringVariant};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn nearest_anchor(dataset: &Dataset<f64>, anchors: &[usize], i: usize) -> usize {
    let mut best = 0usize;
    let mut best_dist = f64::INFINITY;
    for (j, &a) in anchors.iter().enumerate() {
        let d = distance(dataset.row(i), dataset.row(a));
        if d < best_dist {
            best_dist = d;
            best = j;
        }
    }
    best
}

/// Nearest-anchor assignment by plain scan over rooted distances.
pub fn naive_assignment(dataset: &Dataset<f64>, anchors: &[usize]) -> Vec<usize> {
    (0..dataset.n())
        .map(|i| nearest_anchor(dataset, anchors, i))
        .collect()
}

/// Full transcription of the ensemble: construct each partition, derive
/// cell statistics, then score every point per partition (recomputing its
/// nearest anchor) and average. Raw feature space only.
pub fn naive_ensemble_scores(dataset: &Dataset<f64>, config: &DetectorConfig) -> Vec<f64> {
    let n = dataset.n();
    let m = config.anchor_count.min(n);
    let mut totals = vec![0.0f64; n];
    let mut contributing = vec![0u32; n];

    for k in 0..config.ensemble_size {
        let anchors = sample_anchors(dataset, m, derive_partition_seed(config.seed, k));

        // Construction phase: assign, then per-cell max / mean / count.
        let assignment = naive_assignment(dataset, &anchors);
        let mut cell_max = vec![0.0f64; m];
        let mut cell_sum = vec![0.0f64; m];
        let mut cell_count = vec![0usize; m];
        for (i, &j) in assignment.iter().enumerate() {
            let d = distance(dataset.row(i), dataset.row(anchors[j]));
            if d > cell_max[j] {
                cell_max[j] = d;
            }
            cell_sum[j] += d;
            cell_count[j] += 1;
        }
        let cell_mean: Vec<f64> = (0..m)
            .map(|j| {
                if cell_count[j] > 0 {
                    cell_sum[j] / cell_count[j] as f64
                } else {
                    0.0
                }
            })
            .collect();

        // Scoring phase: recompute the nearest anchor for every point.
        for i in 0..n {
            let j = nearest_anchor(dataset, &anchors, i);
            if cell_count[j] <= 1 {
                continue;
            }
            let delta = distance(dataset.row(i), dataset.row(anchors[j]));
            let score = match config.variant {
                ScoringVariant::DualFactor => {
                    if cell_max[j] > 0.0 {
                        delta / cell_max[j] * cell_mean[j]
                    } else {
                        0.0
                    }
                }
                ScoringVariant::PositionOnly => {
                    if cell_max[j] > 0.0 {
                        delta / cell_max[j]
                    } else {
                        0.0
                    }
                }
                ScoringVariant::MeanOnly => cell_mean[j],
            };
            totals[i] += score;
            contributing[i] += 1;
        }
    }

    (0..n)
        .map(|i| {
            if contributing[i] > 0 {
                totals[i] / f64::from(contributing[i])
            } else {
                0.0
            }
        })
        .collect()
}

/// AUC-ROC by exhaustive pair counting: ties between a positive and a
/// negative score count half.
pub fn pair_counting_auc_roc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut wins = 0.0f64;
    let mut pairs = 0.0f64;
    for (i, &li) in labels.iter().enumerate() {
        if li != 1 {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Average precision by scanning unique thresholds in descending order and
/// counting retrieved/relevant sets from scratch at each cut.
pub fn rank_by_rank_average_precision(scores: &[f64], labels: &[u8]) -> f64 {
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();

    let total_positives = labels.iter().filter(|&&l| l == 1).count() as f64;
    let mut ap = 0.0f64;
    for &theta in &thresholds {
        let retrieved = scores.iter().filter(|&&s| s >= theta).count() as f64;
        let hits = scores
            .iter()
            .zip(labels)
            .filter(|(s, l)| **s >= theta && **l == 1)
            .count() as f64;
        let at_theta = scores
            .iter()
            .zip(labels)
            .filter(|(s, l)| **s == theta && **l == 1)
            .count() as f64;
        ap += at_theta * hits / retrieved;
    }
    ap / total_positives
}

/// Relative closeness with an absolute floor for near-zero pairs.
pub fn relatively_close(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale.max(1e-12)
}
