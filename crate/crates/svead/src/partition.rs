//! Random Voronoi partitions: anchor sampling, nearest-anchor assignment
//! and per-cell statistics.
//!
//! A partition never computes cell boundaries; membership is decided by a
//! brute-force nearest-anchor scan, `O(n * m * d)` per partition. The scan
//! is register-tiled over anchors and parallelized over fixed-size point
//! chunks, so results are bit-identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::Float;

/// Points per parallel work unit. Fixed so chunk boundaries (and therefore
/// all floating-point results) do not depend on the thread count.
const ASSIGN_CHUNK: usize = 4096;

/// Anchors whose running distances stay resident in registers.
const TILE: usize = 16;

/// One ensemble member: a sampled anchor set, the induced nearest-anchor
/// assignment and the per-cell distance statistics the scorer consumes.
///
/// Invariants established at build time:
/// - every point is assigned to exactly one cell and `sum(cell_count) == n`;
/// - `delta[i]` is the Euclidean distance from point `i` to its assigned
///   anchor, no larger than its distance to any other anchor;
/// - an anchor's own delta is 0;
/// - `0 <= cell_mean[j] <= cell_max[j]` for nonempty cells; empty cells
///   (possible only when duplicate rows are sampled as distinct anchors)
///   carry zeros.
#[derive(Clone, Debug)]
pub struct VoronoiPartition<F> {
    anchor_indices: Vec<usize>,
    assignment: Vec<u32>,
    delta: Vec<F>,
    cell_max: Vec<F>,
    cell_mean: Vec<F>,
    cell_count: Vec<u32>,
}

impl<F: Float> VoronoiPartition<F> {
    /// Rows in the partitioned dataset.
    pub fn num_points(&self) -> usize {
        self.assignment.len()
    }

    /// Number of cells (= number of anchors).
    pub fn num_cells(&self) -> usize {
        self.anchor_indices.len()
    }

    /// Dataset row indices of the anchors, in sampling order. Cell `j`
    /// belongs to `anchor_indices()[j]`.
    pub fn anchor_indices(&self) -> &[usize] {
        &self.anchor_indices
    }

    /// Cell index of every point.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Distance of every point to its assigned anchor.
    pub fn delta(&self) -> &[F] {
        &self.delta
    }

    pub fn cell_max(&self) -> &[F] {
        &self.cell_max
    }

    pub fn cell_mean(&self) -> &[F] {
        &self.cell_mean
    }

    pub fn cell_count(&self) -> &[u32] {
        &self.cell_count
    }
}

/// Samples `anchor_count` distinct row indices uniformly without
/// replacement, clamping to `n` when the dataset is smaller. Deterministic
/// in `seed`.
pub fn sample_anchors<F: Float>(
    dataset: &Dataset<F>,
    anchor_count: usize,
    seed: u64,
) -> Vec<usize> {
    sample_anchor_indices(dataset.n(), anchor_count, seed)
}

pub(crate) fn sample_anchor_indices(n: usize, anchor_count: usize, seed: u64) -> Vec<usize> {
    let m = anchor_count.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, n, m).into_vec()
}

/// Builds the Voronoi partition induced by the given anchors.
///
/// Equidistant points go to the anchor at the lowest position in
/// `anchor_indices` (first-wins argmin scan).
///
/// Panics if `anchor_indices` is empty, out of range or contains repeats.
pub fn build_partition<F: Float>(
    dataset: &Dataset<F>,
    anchor_indices: &[usize],
) -> VoronoiPartition<F> {
    build_partition_on(dataset.features(), dataset.n(), dataset.d(), anchor_indices)
}

pub(crate) fn build_partition_on<F: Float>(
    features: &[F],
    n: usize,
    d: usize,
    anchor_indices: &[usize],
) -> VoronoiPartition<F> {
    let m = anchor_indices.len();
    assert!(m >= 1, "need at least one anchor");
    assert!(m <= u32::MAX as usize, "too many anchors");
    let mut seen = vec![false; n];
    for &a in anchor_indices {
        assert!(a < n, "anchor index {a} out of range (n={n})");
        assert!(!seen[a], "anchor index {a} repeated");
        seen[a] = true;
    }

    let (anchors_t, m_pad) = transpose_anchors(features, d, anchor_indices);
    let (assignment, delta) = assign_nearest(features, n, d, &anchors_t, m, m_pad);
    let (cell_max, cell_mean, cell_count) = cell_stats(&assignment, &delta, m);

    VoronoiPartition {
        anchor_indices: anchor_indices.to_vec(),
        assignment,
        delta,
        cell_max,
        cell_mean,
        cell_count,
    }
}

/// Anchor coordinates in dimension-major layout (`d` rows of `m_pad`
/// columns), padded with +inf columns up to a tile multiple so the scan
/// kernel needs no remainder handling. Padded columns always lose the
/// argmin.
pub(crate) fn transpose_anchors<F: Float>(
    features: &[F],
    d: usize,
    anchor_indices: &[usize],
) -> (Vec<F>, usize) {
    let m = anchor_indices.len();
    let m_pad = m.div_ceil(TILE) * TILE;
    let mut anchors_t = vec![F::infinity(); d * m_pad];
    for (j, &a) in anchor_indices.iter().enumerate() {
        for k in 0..d {
            anchors_t[k * m_pad + j] = features[a * d + k];
        }
    }
    (anchors_t, m_pad)
}

pub(crate) fn assign_nearest<F: Float>(
    features: &[F],
    n: usize,
    d: usize,
    anchors_t: &[F],
    m: usize,
    m_pad: usize,
) -> (Vec<u32>, Vec<F>) {
    let mut assignment = vec![0u32; n];
    let mut delta = vec![F::zero(); n];

    features
        .par_chunks(ASSIGN_CHUNK * d)
        .zip(assignment.par_chunks_mut(ASSIGN_CHUNK))
        .zip(delta.par_chunks_mut(ASSIGN_CHUNK))
        .for_each(|((points, out_assign), out_delta)| {
            let mut dist_sq = vec![F::zero(); m_pad];
            assign_rows(
                points,
                d,
                anchors_t,
                m,
                m_pad,
                &mut dist_sq,
                out_assign,
                out_delta,
            );
        });

    (assignment, delta)
}

/// Nearest-anchor scan for a block of rows. Squared distances are
/// accumulated per anchor tile in registers; the winning distance is
/// rooted once per point.
#[allow(clippy::too_many_arguments)]
fn assign_rows<F: Float>(
    points: &[F],
    d: usize,
    anchors_t: &[F],
    m: usize,
    m_pad: usize,
    dist_sq: &mut [F],
    out_assign: &mut [u32],
    out_delta: &mut [F],
) {
    for (i, x) in points.chunks_exact(d).enumerate() {
        for jb in (0..m_pad).step_by(TILE) {
            let mut acc = [F::zero(); TILE];
            for (k, &xk) in x.iter().enumerate() {
                let row = &anchors_t[k * m_pad + jb..k * m_pad + jb + TILE];
                if cfg!(target_feature = "fma") {
                    for (a, &aj) in acc.iter_mut().zip(row) {
                        let diff = xk - aj;
                        *a = diff.mul_add(diff, *a);
                    }
                } else {
                    for (a, &aj) in acc.iter_mut().zip(row) {
                        let diff = xk - aj;
                        *a = *a + diff * diff;
                    }
                }
            }
            dist_sq[jb..jb + TILE].copy_from_slice(&acc);
        }

        let live = &dist_sq[..m];
        let mut min_sq = F::infinity();
        for &v in live {
            min_sq = min_sq.min(v);
        }
        let best = live.iter().position(|&v| v == min_sq).unwrap();
        out_assign[i] = best as u32;
        out_delta[i] = min_sq.sqrt();
    }
}

/// Per-cell max/mean/count over the assigned deltas. Means use Neumaier
/// compensated accumulation; the pass is serial in point order so sums do
/// not depend on how the assignment was parallelized.
fn cell_stats<F: Float>(assignment: &[u32], delta: &[F], m: usize) -> (Vec<F>, Vec<F>, Vec<u32>) {
    let mut max = vec![F::zero(); m];
    let mut sum = vec![F::zero(); m];
    let mut comp = vec![F::zero(); m];
    let mut count = vec![0u32; m];

    for (&cell, &dl) in assignment.iter().zip(delta) {
        let j = cell as usize;
        if dl > max[j] {
            max[j] = dl;
        }
        let s = sum[j];
        let t = s + dl;
        comp[j] = comp[j]
            + if s.abs() >= dl.abs() {
                (s - t) + dl
            } else {
                (dl - t) + s
            };
        sum[j] = t;
        count[j] += 1;
    }

    let mean = (0..m)
        .map(|j| {
            if count[j] > 0 {
                (sum[j] + comp[j]) / F::from_u32(count[j]).unwrap()
            } else {
                F::zero()
            }
        })
        .collect();
    (max, mean, count)
}
