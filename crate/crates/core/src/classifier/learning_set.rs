use serde::{Deserialize, Serialize};

use crate::{Error, Frame, Result, Subset};

/// One training case: a feature vector and the set of classes known to
/// contain its true class.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCase {
    pub features: Vec<f64>,
    pub pkc: Subset,
}

impl LabeledCase {
    pub fn new(features: Vec<f64>, pkc: Subset) -> Self {
        LabeledCase { features, pkc }
    }
}

/// Linear anchors of one feature: the 5th percentile maps to 0, the 95th to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureScale {
    pub p5: f64,
    pub p95: f64,
}

impl FeatureScale {
    /// Values outside the anchors extrapolate; nothing is clamped. A feature
    /// whose anchors coincide maps to 0 everywhere.
    pub fn apply(&self, x: f64) -> f64 {
        let span = self.p95 - self.p5;
        if span == 0.0 {
            0.0
        } else {
            (x - self.p5) / span
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.p95 == self.p5
    }
}

/// Percentile by linear interpolation between order statistics, with the
/// sample minimum at q = 0 and the maximum at q = 1.
///
/// `sorted` must be ascending and nonempty.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rescaler {
    scales: Vec<FeatureScale>,
}

impl Rescaler {
    pub fn fit<'a, I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let rows: Vec<&[f64]> = rows.into_iter().collect();
        let first = rows.first().ok_or(Error::EmptyLearningSet)?;
        let p = first.len();
        check_dims(rows.iter().copied(), p)?;
        let scales = (0..p)
            .map(|j| {
                let mut column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                column.sort_by(f64::total_cmp);
                FeatureScale {
                    p5: percentile(&column, 0.05),
                    p95: percentile(&column, 0.95),
                }
            })
            .collect();
        Ok(Rescaler { scales })
    }

    pub fn from_scales(scales: Vec<FeatureScale>) -> Self {
        Rescaler { scales }
    }

    pub fn scales(&self) -> &[FeatureScale] {
        &self.scales
    }

    pub fn dim(&self) -> usize {
        self.scales.len()
    }

    pub fn apply(&self, raw: &[f64]) -> Result<Vec<f64>> {
        if raw.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                case: 0,
                expected: self.dim(),
                found: raw.len(),
            });
        }
        Ok(raw
            .iter()
            .zip(&self.scales)
            .map(|(&x, s)| s.apply(x))
            .collect())
    }
}

fn check_dims<'a>(rows: impl Iterator<Item = &'a [f64]>, p: usize) -> Result<()> {
    for (case, row) in rows.enumerate() {
        if row.len() != p {
            return Err(Error::DimensionMismatch {
                case,
                expected: p,
                found: row.len(),
            });
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse(format!(
                "case {case} has a non-finite feature"
            )));
        }
    }
    Ok(())
}

/// Training cases in rescaled feature space plus the rescaler that put them
/// there. Immutable once fitted.
#[derive(Clone, Debug)]
pub struct LearningSet {
    frame: Frame,
    cases: Vec<LabeledCase>,
    rescaler: Rescaler,
}

impl LearningSet {
    /// Fits per-feature percentile anchors on `raw` and stores the rescaled
    /// cases.
    pub fn fit(frame: Frame, raw: Vec<LabeledCase>) -> Result<Self> {
        let rescaler = Rescaler::fit(raw.iter().map(|c| c.features.as_slice()))?;
        let cases = raw
            .into_iter()
            .map(|c| {
                Ok(LabeledCase {
                    features: rescaler.apply(&c.features)?,
                    pkc: c.pkc,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(frame, cases, rescaler)
    }

    /// Assembles a learning set whose cases are already rescaled.
    pub fn from_parts(frame: Frame, cases: Vec<LabeledCase>, rescaler: Rescaler) -> Result<Self> {
        if cases.is_empty() {
            return Err(Error::EmptyLearningSet);
        }
        check_dims(cases.iter().map(|c| c.features.as_slice()), rescaler.dim())?;
        for (i, c) in cases.iter().enumerate() {
            if c.pkc.is_empty() {
                return Err(Error::EmptyLabel(i));
            }
            frame.check(c.pkc)?;
        }
        Ok(LearningSet {
            frame,
            cases,
            rescaler,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn cases(&self) -> &[LabeledCase] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Number of features p.
    pub fn dim(&self) -> usize {
        self.rescaler.dim()
    }

    pub fn rescaler(&self) -> &Rescaler {
        &self.rescaler
    }

    /// Maps raw query features with the training anchors.
    pub fn rescale(&self, raw: &[f64]) -> Result<Vec<f64>> {
        self.rescaler.apply(raw)
    }

    /// The same learning set with case `index` held out. `None` when that
    /// would leave it empty.
    pub fn without(&self, index: usize) -> Option<LearningSet> {
        if self.cases.len() < 2 {
            return None;
        }
        let mut cases = self.cases.clone();
        cases.remove(index);
        Some(LearningSet {
            frame: self.frame.clone(),
            cases,
            rescaler: self.rescaler.clone(),
        })
    }
}
