//! Seeded synthetic datasets covering the three canonical anomaly regimes
//! (global, local, dependency) plus fixtures used by the property tests.
//!
//! Each regime fixes 300 samples at a 10% anomaly rate. The geometry
//! behind them is set by the named constants in [`constants`]; sample
//! counts and regime semantics are the contract, the coordinates are this
//! repository's choices.
//!
//! All generators draw in `f64` through a ChaCha8 stream seeded by the
//! caller, then cast to the requested scalar, so a seed pins the dataset
//! for every scalar type.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::Float;

/// Geometry constants for all generators.
pub mod constants {
    /// Normal points per synthetic regime dataset.
    pub const REGIME_NORMAL_COUNT: usize = 270;
    /// Anomalies per synthetic regime dataset (10% of 300).
    pub const REGIME_ANOMALY_COUNT: usize = 30;

    /// S1 global regime: anomalies live on an annulus around the central
    /// unit Gaussian.
    pub const GLOBAL_ANNULUS_INNER: f64 = 4.0;
    pub const GLOBAL_ANNULUS_OUTER: f64 = 6.0;

    /// S2 local regime: two interleaved half-circle arcs.
    pub const LOCAL_ARC_RADIUS: f64 = 1.0;
    /// Vertical offset of the lower arc's center.
    pub const LOCAL_ARC_OFFSET: f64 = 0.5;
    /// Standard deviation of the per-coordinate arc jitter.
    pub const LOCAL_ARC_JITTER: f64 = 0.05;
    /// Anomalies are drawn in this box between the arcs...
    pub const LOCAL_GAP_X: (f64, f64) = (-0.5, 1.5);
    pub const LOCAL_GAP_Y: (f64, f64) = (-0.25, 0.75);
    /// ...rejecting draws closer than this to either ideal arc.
    pub const LOCAL_GAP_MARGIN: f64 = 0.2;

    /// S3 dependency regime: normals on y = x, anomalies on y = -x.
    pub const DEP_X_RANGE: (f64, f64) = (-2.0, 2.0);
    pub const DEP_NOISE_SD: f64 = 0.1;

    /// Two-density fixture: dense blob deviation and the center spacing
    /// multiplier (centers sit `TWO_DENSITY_SPACING * scale_ratio` apart).
    pub const TWO_DENSITY_DENSE_SD: f64 = 1.0;
    pub const TWO_DENSITY_SPACING: f64 = 20.0;
}

use constants::*;

/// Global anomalies (S1): 270 normals from an isotropic 2-D unit Gaussian
/// at the origin, 30 anomalies uniform over the annulus with radii
/// [`GLOBAL_ANNULUS_INNER`, `GLOBAL_ANNULUS_OUTER`]. Labeled.
pub fn gen_global_s1<F: Float>(seed: u64) -> Dataset<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = Normal::new(0.0, 1.0).unwrap();
    let mut rows = Vec::with_capacity(300 * 2);
    for _ in 0..REGIME_NORMAL_COUNT {
        rows.push(gauss.sample(&mut rng));
        rows.push(gauss.sample(&mut rng));
    }
    let (r_in, r_out) = (GLOBAL_ANNULUS_INNER, GLOBAL_ANNULUS_OUTER);
    for _ in 0..REGIME_ANOMALY_COUNT {
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        // Area-uniform radius over the annulus.
        let r = (rng.gen::<f64>() * (r_out * r_out - r_in * r_in) + r_in * r_in).sqrt();
        rows.push(r * theta.cos());
        rows.push(r * theta.sin());
    }
    finish("s1-global", rows, regime_labels())
}

/// Local anomalies (S2): 270 normals on two interleaved jittered arcs, 30
/// anomalies uniform in the gap between the arcs (at least
/// [`LOCAL_GAP_MARGIN`] away from both ideal arcs). Labeled.
pub fn gen_local_s2<F: Float>(seed: u64) -> Dataset<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, LOCAL_ARC_JITTER).unwrap();
    let half = REGIME_NORMAL_COUNT / 2;
    let mut rows = Vec::with_capacity(300 * 2);
    for arc in 0..2 {
        for _ in 0..half {
            let theta = rng.gen::<f64>() * std::f64::consts::PI;
            let (mut x, mut y) = if arc == 0 {
                (
                    LOCAL_ARC_RADIUS * theta.cos(),
                    LOCAL_ARC_RADIUS * theta.sin(),
                )
            } else {
                (
                    LOCAL_ARC_RADIUS * (1.0 - theta.cos()),
                    LOCAL_ARC_OFFSET - LOCAL_ARC_RADIUS * theta.sin(),
                )
            };
            x += jitter.sample(&mut rng);
            y += jitter.sample(&mut rng);
            rows.push(x);
            rows.push(y);
        }
    }
    let gap_x = Uniform::new(LOCAL_GAP_X.0, LOCAL_GAP_X.1);
    let gap_y = Uniform::new(LOCAL_GAP_Y.0, LOCAL_GAP_Y.1);
    let mut placed = 0;
    while placed < REGIME_ANOMALY_COUNT {
        let x = gap_x.sample(&mut rng);
        let y = gap_y.sample(&mut rng);
        if arc_distance(x, y) >= LOCAL_GAP_MARGIN {
            rows.push(x);
            rows.push(y);
            placed += 1;
        }
    }
    finish("s2-local", rows, regime_labels())
}

/// Distance from a point to the nearer of the two ideal (jitter-free) arcs.
fn arc_distance(x: f64, y: f64) -> f64 {
    // Upper arc: radius-1 half circle around the origin, y >= 0.
    let upper = if y >= 0.0 {
        ((x * x + y * y).sqrt() - LOCAL_ARC_RADIUS).abs()
    } else {
        let to_left = ((x + 1.0) * (x + 1.0) + y * y).sqrt();
        let to_right = ((x - 1.0) * (x - 1.0) + y * y).sqrt();
        to_left.min(to_right)
    };
    // Lower arc: half circle around (1, offset), y <= offset.
    let (cx, cy) = (1.0, LOCAL_ARC_OFFSET);
    let lower = if y <= cy {
        (((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt() - LOCAL_ARC_RADIUS).abs()
    } else {
        let to_left = (x * x + (y - cy) * (y - cy)).sqrt();
        let to_right = ((x - 2.0) * (x - 2.0) + (y - cy) * (y - cy)).sqrt();
        to_left.min(to_right)
    };
    upper.min(lower)
}

/// Dependency anomalies (S3): normals follow y = x + noise over
/// [`DEP_X_RANGE`], anomalies follow y = -x + noise over the same range,
/// so both marginals overlap while the correlation flips sign. Labeled.
pub fn gen_dependency_s3<F: Float>(seed: u64) -> Dataset<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x_dist = Uniform::new(DEP_X_RANGE.0, DEP_X_RANGE.1);
    let noise = Normal::new(0.0, DEP_NOISE_SD).unwrap();
    let mut rows = Vec::with_capacity(300 * 2);
    for _ in 0..REGIME_NORMAL_COUNT {
        let x = x_dist.sample(&mut rng);
        rows.push(x);
        rows.push(x + noise.sample(&mut rng));
    }
    for _ in 0..REGIME_ANOMALY_COUNT {
        let x = x_dist.sample(&mut rng);
        rows.push(x);
        rows.push(-x + noise.sample(&mut rng));
    }
    finish("s3-dependency", rows, regime_labels())
}

/// Centers of the two blobs produced by [`gen_two_density`].
pub fn two_density_centers(scale_ratio: f64) -> ([f64; 2], [f64; 2]) {
    ([0.0, 0.0], [TWO_DENSITY_SPACING * scale_ratio, 0.0])
}

/// Unlabeled fixture with two well-separated Gaussian blobs: `n_dense`
/// points at deviation [`TWO_DENSITY_DENSE_SD`] and `n_sparse` points at
/// deviation `scale_ratio`, centers `TWO_DENSITY_SPACING * scale_ratio`
/// apart. Dense rows come first.
///
/// Requires `n_dense, n_sparse >= 10` and `scale_ratio >= 1`.
pub fn gen_two_density<F: Float>(
    seed: u64,
    n_dense: usize,
    n_sparse: usize,
    scale_ratio: f64,
) -> Result<Dataset<F>> {
    if n_dense < 10 || n_sparse < 10 {
        return Err(Error::InvalidConfig(
            "two-density blobs need at least 10 points each".into(),
        ));
    }
    if scale_ratio.is_nan() || scale_ratio < 1.0 {
        return Err(Error::InvalidConfig("scale_ratio must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dense = Normal::new(0.0, TWO_DENSITY_DENSE_SD).unwrap();
    let sparse = Normal::new(0.0, TWO_DENSITY_DENSE_SD * scale_ratio).unwrap();
    let (c_dense, c_sparse) = two_density_centers(scale_ratio);
    let mut rows = Vec::with_capacity((n_dense + n_sparse) * 2);
    for _ in 0..n_dense {
        rows.push(c_dense[0] + dense.sample(&mut rng));
        rows.push(c_dense[1] + dense.sample(&mut rng));
    }
    for _ in 0..n_sparse {
        rows.push(c_sparse[0] + sparse.sample(&mut rng));
        rows.push(c_sparse[1] + sparse.sample(&mut rng));
    }
    finish_unlabeled("two-density", rows, 2)
}

/// Unlabeled uniform noise on `[0, 1)^d`; workload generator for the
/// scalability benchmark and randomized tests.
pub fn gen_uniform<F: Float>(seed: u64, n: usize, d: usize) -> Dataset<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<f64> = (0..n * d).map(|_| rng.gen::<f64>()).collect();
    finish_unlabeled("uniform", rows, d).expect("uniform fixture is valid by construction")
}

fn regime_labels() -> Vec<u8> {
    let mut labels = vec![0u8; REGIME_NORMAL_COUNT];
    labels.extend(std::iter::repeat_n(1, REGIME_ANOMALY_COUNT));
    labels
}

fn finish<F: Float>(name: &str, rows: Vec<f64>, labels: Vec<u8>) -> Dataset<F> {
    let features = rows.iter().map(|&v| F::from_f64(v).unwrap()).collect();
    Dataset::new(name, features, 2, Some(labels))
        .expect("generator output is valid by construction")
}

fn finish_unlabeled<F: Float>(name: &str, rows: Vec<f64>, d: usize) -> Result<Dataset<F>> {
    let features = rows.iter().map(|&v| F::from_f64(v).unwrap()).collect();
    Dataset::new(name, features, d, None)
}
