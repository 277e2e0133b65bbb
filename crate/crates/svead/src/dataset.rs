//! In-memory dataset representation.

use crate::error::{Error, Result};
use crate::Float;

/// A row-major `n x d` feature matrix with optional binary labels
/// (1 = anomaly, 0 = normal). Construction validates shape, finiteness and
/// label values; instances are immutable afterwards and safe to share
/// across threads.
#[derive(Clone, Debug)]
pub struct Dataset<F> {
    name: String,
    features: Vec<F>,
    n: usize,
    d: usize,
    labels: Option<Vec<u8>>,
}

impl<F: Float> Dataset<F> {
    /// Builds a dataset from a row-major feature buffer of width `d`.
    pub fn new(
        name: impl Into<String>,
        features: Vec<F>,
        d: usize,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        if d == 0 || features.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if !features.len().is_multiple_of(d) {
            return Err(Error::ShapeMismatch {
                got: features.len(),
                width: d,
            });
        }
        let n = features.len() / d;
        for (i, v) in features.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature {
                    row: i / d,
                    col: i % d,
                });
            }
        }
        if let Some(ls) = &labels {
            if ls.len() != n {
                return Err(Error::LabelLength {
                    expected: n,
                    got: ls.len(),
                });
            }
            for (row, &v) in ls.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidLabel { row, value: v });
                }
            }
        }
        Ok(Self {
            name: name.into(),
            features,
            n,
            d,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of features.
    pub fn d(&self) -> usize {
        self.d
    }

    /// The full row-major feature buffer.
    pub fn features(&self) -> &[F] {
        &self.features
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn labels(&self) -> Option<&[u8]> {
        self.labels.as_deref()
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn anomaly_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|ls| ls.iter().filter(|&&l| l == 1).count())
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut features = Vec::with_capacity(rows.len() * self.d);
        for &r in rows {
            assert!(r < self.n, "row {r} out of range (n={})", self.n);
            features.extend_from_slice(self.row(r));
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| rows.iter().map(|&r| ls[r]).collect());
        Self {
            name: self.name.clone(),
            features,
            n: rows.len(),
            d: self.d,
            labels,
        }
    }

    /// Per-feature mean and standard deviation (population form).
    /// Zero-variance features get a stored deviation of 0.
    pub fn zscore_params(&self) -> ZScoreParams<F> {
        let (n, d) = (self.n, self.d);
        let mut means = vec![0.0f64; d];
        for row in self.features.chunks_exact(d) {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v.to_f64().unwrap();
            }
        }
        for m in means.iter_mut() {
            *m /= n as f64;
        }
        let mut vars = vec![0.0f64; d];
        for row in self.features.chunks_exact(d) {
            for ((var, &mean), v) in vars.iter_mut().zip(&means).zip(row) {
                let diff = v.to_f64().unwrap() - mean;
                *var += diff * diff;
            }
        }
        let from = |x: f64| F::from_f64(x).unwrap();
        ZScoreParams {
            means: means.iter().map(|&m| from(m)).collect(),
            sds: vars
                .iter()
                .map(|&v| {
                    let sd = (v / n as f64).sqrt();
                    if sd > 0.0 {
                        from(sd)
                    } else {
                        F::zero()
                    }
                })
                .collect(),
        }
    }

    /// Copy of the dataset with features standardized per [`ZScoreParams`].
    pub fn zscore_normalized(&self) -> Self {
        let params = self.zscore_params();
        let mut features = self.features.clone();
        for row in features.chunks_exact_mut(self.d) {
            params.transform_row(row);
        }
        Self {
            name: self.name.clone(),
            features,
            n: self.n,
            d: self.d,
            labels: self.labels.clone(),
        }
    }
}

/// Frozen standardization parameters, applied to held-out points so they
/// are scored in the same space the ensemble was fitted in.
#[derive(Clone, Debug)]
pub struct ZScoreParams<F> {
    pub means: Vec<F>,
    pub sds: Vec<F>,
}

impl<F: Float> ZScoreParams<F> {
    pub fn transform_row(&self, row: &mut [F]) {
        for ((v, &mean), &sd) in row.iter_mut().zip(&self.means).zip(&self.sds) {
            *v = if sd > F::zero() {
                (*v - mean) / sd
            } else {
                F::zero()
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(matches!(
            Dataset::<f64>::new("x", vec![], 2, None),
            Err(Error::EmptyDataset)
        ));
        assert!(matches!(
            Dataset::new("x", vec![1.0, 2.0, 3.0], 2, None),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_finite() {
        let err = Dataset::new("x", vec![1.0, f64::NAN, 3.0, 4.0], 2, None).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFeature { row: 0, col: 1 }));
        let err = Dataset::new("x", vec![1.0, 2.0, f64::INFINITY, 4.0], 2, None).unwrap_err();
        assert!(matches!(err, Error::NonFiniteFeature { row: 1, col: 0 }));
    }

    #[test]
    fn rejects_bad_labels() {
        let err = Dataset::new("x", vec![1.0, 2.0], 1, Some(vec![0])).unwrap_err();
        assert!(matches!(
            err,
            Error::LabelLength {
                expected: 2,
                got: 1
            }
        ));
        let err = Dataset::new("x", vec![1.0, 2.0], 1, Some(vec![0, 2])).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel { row: 1, value: 2 }));
    }

    #[test]
    fn row_access_and_counts() {
        let ds = Dataset::new(
            "x",
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            2,
            Some(vec![0, 1, 1]),
        )
        .unwrap();
        assert_eq!((ds.n(), ds.d()), (3, 2));
        assert_eq!(ds.row(1), &[3.0, 4.0]);
        assert_eq!(ds.anomaly_count(), Some(2));
    }

    #[test]
    fn select_rows_preserves_order_and_labels() {
        let ds = Dataset::new(
            "x",
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            2,
            Some(vec![0, 1, 0]),
        )
        .unwrap();
        let sub = ds.select_rows(&[2, 0]);
        assert_eq!(sub.features(), &[5.0, 6.0, 1.0, 2.0]);
        assert_eq!(sub.labels(), Some(&[0u8, 0][..]));
    }

    #[test]
    fn zscore_standardizes_and_zeroes_constant_features() {
        let ds = Dataset::new("x", vec![1.0, 5.0, 2.0, 5.0, 3.0, 5.0], 2, None).unwrap();
        let z = ds.zscore_normalized();
        let col0: Vec<f64> = (0..3).map(|i| z.row(i)[0]).collect();
        let mean: f64 = col0.iter().sum::<f64>() / 3.0;
        let var: f64 = col0.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / 3.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        // constant feature maps to 0
        assert!((0..3).all(|i| z.row(i)[1] == 0.0));
    }
}
