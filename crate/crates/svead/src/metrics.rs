//! Label-aware evaluation: AUC-ROC, AUC-PR and repeated seeded runs.
//!
//! Tie handling is explicit because it changes third-digit results on
//! small datasets: AUC-ROC uses average ranks (ties count half, the
//! Mann-Whitney convention); AUC-PR treats a block of tied scores as a
//! single cut, so every positive in the block sees the precision after the
//! whole block.

use crate::config::DetectorConfig;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scorer::fit_score;
use crate::seed::derive_partition_seed;
use crate::Float;

/// AUC-ROC / AUC-PR aggregated over repeated seeded runs. Standard
/// deviations are sample (n-1) form; a single run reports 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport {
    pub runs: usize,
    pub auc_roc_mean: f64,
    pub auc_roc_std: f64,
    pub auc_pr_mean: f64,
    pub auc_pr_std: f64,
}

fn validate_inputs<F: Float>(scores: &[F], labels: &[u8]) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::UndefinedMetric("no observations".into()));
    }
    if let Some(v) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::UndefinedMetric(format!("non-finite score {v}")));
    }
    if let Some(&v) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::UndefinedMetric(format!("label {v} is not 0/1")));
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedMetric(
            "need at least one positive and one negative label".into(),
        ));
    }
    Ok((positives, negatives))
}

/// Probability that a random positive outscores a random negative, ties
/// counting half: the Mann-Whitney statistic, computed with one sort and
/// average ranks.
pub fn auc_roc<F: Float>(scores: &[F], labels: &[u8]) -> Result<f64> {
    let (positives, negatives) = validate_inputs(scores, labels)?;
    let n = scores.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| scores[i].partial_cmp(&scores[j]).unwrap());

    let mut positive_rank_sum = 0.0f64;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // 1-based average rank of the tied block [start, end).
        let avg_rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            if labels[idx] == 1 {
                positive_rank_sum += avg_rank;
            }
        }
        start = end;
    }

    let p = positives as f64;
    let u = positive_rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

/// Average precision: mean over positives of the precision at that
/// positive's rank, scanning in descending score order with tied blocks
/// collapsed into one cut.
pub fn auc_pr<F: Float>(scores: &[F], labels: &[u8]) -> Result<f64> {
    let (positives, _) = validate_inputs(scores, labels)?;
    let n = scores.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| scores[j].partial_cmp(&scores[i]).unwrap());

    let mut sum = 0.0f64;
    let mut true_positives = 0usize;
    let mut retrieved = 0usize;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let block_positives = order[start..end]
            .iter()
            .filter(|&&idx| labels[idx] == 1)
            .count();
        true_positives += block_positives;
        retrieved += end - start;
        sum += block_positives as f64 * (true_positives as f64 / retrieved as f64);
        start = end;
    }

    Ok(sum / positives as f64)
}

/// Runs [`fit_score`] once per provided seed and aggregates both AUCs.
/// Requires labels.
pub fn repeated_eval_seeded<F: Float>(
    dataset: &Dataset<F>,
    config: &DetectorConfig,
    run_seeds: &[u64],
) -> Result<EvalReport> {
    let labels = dataset.labels().ok_or_else(|| Error::MissingLabels {
        name: dataset.name().to_string(),
    })?;
    if run_seeds.is_empty() {
        return Err(Error::InvalidConfig("need at least one run".into()));
    }

    let mut rocs = Vec::with_capacity(run_seeds.len());
    let mut prs = Vec::with_capacity(run_seeds.len());
    for &seed in run_seeds {
        let run_config = DetectorConfig { seed, ..*config };
        let scored = fit_score(dataset, &run_config)?;
        rocs.push(auc_roc(scored.scores(), labels)?);
        prs.push(auc_pr(scored.scores(), labels)?);
    }

    let (auc_roc_mean, auc_roc_std) = mean_std(&rocs);
    let (auc_pr_mean, auc_pr_std) = mean_std(&prs);
    Ok(EvalReport {
        runs: run_seeds.len(),
        auc_roc_mean,
        auc_roc_std,
        auc_pr_mean,
        auc_pr_std,
    })
}

/// Repeated evaluation with per-run seeds derived from `config.seed` and
/// the run index.
pub fn repeated_eval<F: Float>(
    dataset: &Dataset<F>,
    config: &DetectorConfig,
    runs: usize,
) -> Result<EvalReport> {
    if runs == 0 {
        return Err(Error::InvalidConfig("need at least one run".into()));
    }
    let seeds: Vec<u64> = (0..runs)
        .map(|r| derive_partition_seed(config.seed, r))
        .collect();
    repeated_eval_seeded(dataset, config, &seeds)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Least-squares slope of `ln(y)` against `ln(x)`; `None` unless there are
/// two or more distinct positive x values. Used to summarize runtime
/// scaling.
pub fn log_log_slope(pairs: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
