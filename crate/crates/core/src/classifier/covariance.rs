use nalgebra::{DMatrix, DVector};

use super::{ClassifierConfig, LearningSet};
use crate::{Error, Result};

/// Indices of the `k` training cases closest to `point` in Euclidean
/// distance, ties by index.
pub(crate) fn nearest(ls: &LearningSet, point: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = ls
        .cases()
        .iter()
        .enumerate()
        .map(|(j, c)| (squared_distance(&c.features, point), j))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.truncate(k);
    order.into_iter().map(|(_, j)| j).collect()
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sample covariance of the rows, denominator `n - 1` (or 1 for a single row).
pub(crate) fn sample_covariance(rows: &[&[f64]], p: usize) -> DMatrix<f64> {
    let n = rows.len();
    let mut mean = DVector::zeros(p);
    for r in rows {
        mean += DVector::from_column_slice(r);
    }
    mean /= n as f64;
    let mut cov = DMatrix::zeros(p, p);
    for r in rows {
        let d = DVector::from_column_slice(r) - &mean;
        cov += &d * d.transpose();
    }
    cov / (n.saturating_sub(1).max(1) as f64)
}

/// Adds `ridge · (trace / p) · I`.
pub(crate) fn add_ridge(cov: &mut DMatrix<f64>, ridge: f64) {
    let p = cov.nrows();
    let shift = ridge * cov.trace() / p as f64;
    for i in 0..p {
        cov[(i, i)] += shift;
    }
}

/// Covariance of the neighbourhood of case `index`: the sample covariance
/// of its `k_cov` Euclidean-nearest training cases (itself included) in
/// rescaled space, regularized by the configured ridge.
pub fn local_covariance(
    ls: &LearningSet,
    index: usize,
    cfg: &ClassifierConfig,
) -> Result<DMatrix<f64>> {
    let p = ls.dim();
    let k = cfg.neighbourhood(p, ls.len())?;
    let centre = &ls.cases()[index].features;
    let rows: Vec<&[f64]> = nearest(ls, centre, k)
        .into_iter()
        .map(|j| ls.cases()[j].features.as_slice())
        .collect();
    let mut cov = sample_covariance(&rows, p);
    add_ridge(&mut cov, cfg.ridge);
    if cov.clone().cholesky().is_none() {
        return Err(Error::SingularCovariance(index));
    }
    Ok(cov)
}
