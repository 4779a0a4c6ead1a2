use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::Sample;
use crate::{Error, Result};

/// Pooled-covariance linear discriminant with equal priors: a point goes to
/// the class mean nearest in the pooled Mahalanobis metric.
pub struct LinearDiscriminant {
    means: Vec<DVector<f64>>,
    pooled: Cholesky<f64, Dyn>,
}

impl LinearDiscriminant {
    /// Fits on samples with their true classes. The pooled covariance gets
    /// `ridge · trace/p` added to its diagonal.
    pub fn fit(train: &[Sample], classes: usize, ridge: f64) -> Result<Self> {
        let first = train.first().ok_or(Error::EmptyLearningSet)?;
        let p = first.features.len();
        let mut sums = vec![DVector::zeros(p); classes];
        let mut counts = vec![0usize; classes];
        for (i, s) in train.iter().enumerate() {
            if s.features.len() != p {
                return Err(Error::DimensionMismatch {
                    case: i,
                    expected: p,
                    found: s.features.len(),
                });
            }
            if s.class >= classes {
                return Err(Error::BadSpec(format!(
                    "sample {i} has class {} of {classes}",
                    s.class
                )));
            }
            sums[s.class] += DVector::from_column_slice(&s.features);
            counts[s.class] += 1;
        }
        if let Some(k) = counts.iter().position(|&c| c == 0) {
            return Err(Error::BadSpec(format!("class {k} has no training samples")));
        }
        let means: Vec<DVector<f64>> = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| s / c as f64)
            .collect();

        let dof = train.len().saturating_sub(classes);
        if dof == 0 {
            return Err(Error::SingularPooledCovariance);
        }
        let mut pooled = DMatrix::zeros(p, p);
        for s in train {
            let d = DVector::from_column_slice(&s.features) - &means[s.class];
            pooled += &d * d.transpose();
        }
        pooled /= dof as f64;
        let shift = ridge * pooled.trace() / p as f64;
        for j in 0..p {
            pooled[(j, j)] += shift;
        }
        let pooled = pooled.cholesky().ok_or(Error::SingularPooledCovariance)?;
        Ok(LinearDiscriminant { means, pooled })
    }

    /// Nearest class; ties go to the lowest index.
    pub fn predict(&self, x: &[f64]) -> usize {
        let x = DVector::from_column_slice(x);
        let mut best = (0, f64::INFINITY);
        for (k, mu) in self.means.iter().enumerate() {
            let d = &x - mu;
            let dist = d.dot(&self.pooled.solve(&d));
            if dist < best.1 {
                best = (k, dist);
            }
        }
        best.0
    }
}

/// Percent of `test` samples the discriminant fitted on `train` gets right.
pub fn lda_baseline(train: &[Sample], test: &[Sample], classes: usize, ridge: f64) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let lda = LinearDiscriminant::fit(train, classes, ridge)?;
    let hits = test
        .iter()
        .filter(|s| lda.predict(&s.features) == s.class)
        .count();
    Ok(100.0 * hits as f64 / test.len() as f64)
}
