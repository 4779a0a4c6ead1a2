//! Evidential classification from partially labelled data.
//!
//! Every training case `X_i` knows only that its class lies in `pkc_i`. Asked
//! about a query, it emits a simple support function on `pkc_i` whose weight
//! `f(d) = max(1 − a·d, 0)` decays with the Mahalanobis distance `d` measured
//! under a covariance estimated around `X_i`. The query pools all those
//! functions conjunctively and decides on the most probable pignistic class.

mod covariance;
mod learning_set;
mod model;

use nalgebra::{Cholesky, DVector, Dyn};

pub use covariance::local_covariance;
pub use learning_set::{percentile, FeatureScale, LabeledCase, LearningSet, Rescaler};
pub use model::{StoredCase, TrainedModel};

use crate::{Error, MassFunction, PignisticDistribution, Result};

/// Grid searched by [`tune_a`] when the caller has no better idea.
pub const DEFAULT_A_GRID: [f64; 6] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0];

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierConfig {
    /// Slope of the reliability function.
    pub a: f64,
    /// Neighbourhood size for local covariances; `None` picks `min(10p, N)`.
    pub k_cov: Option<usize>,
    /// Ridge fraction: `ridge · trace/p` is added to every local covariance diagonal.
    pub ridge: f64,
    /// Apply Dempster normalization to the pooled evidence.
    pub normalize_combination: bool,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            a: 1.0,
            k_cov: None,
            ridge: 1e-3,
            normalize_combination: false,
        }
    }
}

impl ClassifierConfig {
    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::BadConfig(format!(
                "slope a must be positive, got {}",
                self.a
            )));
        }
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(Error::BadConfig(format!(
                "ridge must be nonnegative, got {}",
                self.ridge
            )));
        }
        Ok(())
    }

    pub(crate) fn neighbourhood(&self, p: usize, n: usize) -> Result<usize> {
        match self.k_cov {
            None => Ok((10 * p).min(n)),
            Some(k) if k < p + 1 || k > n => Err(Error::BadConfig(format!(
                "k_cov must lie in [{}, {n}], got {k}",
                p + 1
            ))),
            Some(k) => Ok(k),
        }
    }
}

/// Reliability of a case at distance `d`.
pub fn reliability(a: f64, d: f64) -> f64 {
    (1.0 - a * d).max(0.0)
}

/// Outcome of classifying one query.
#[derive(Clone, Debug)]
pub struct Classification {
    /// Pooled evidence (unnormalized unless configured otherwise).
    pub mass: MassFunction,
    pub betp: PignisticDistribution,
    /// Index of the predicted class in the class frame.
    pub predicted: usize,
}

impl Classification {
    pub fn label(&self) -> &str {
        self.mass.frame().label(self.predicted)
    }
}

/// A learning set paired with a configuration, with every local covariance
/// factored once.
pub struct EvidentialClassifier<'a> {
    ls: &'a LearningSet,
    cfg: ClassifierConfig,
    metrics: Vec<Cholesky<f64, Dyn>>,
}

impl<'a> EvidentialClassifier<'a> {
    pub fn new(ls: &'a LearningSet, cfg: ClassifierConfig) -> Result<Self> {
        cfg.validate()?;
        let metrics = (0..ls.len())
            .map(|i| {
                local_covariance(ls, i, &cfg)?
                    .cholesky()
                    .ok_or(Error::SingularCovariance(i))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EvidentialClassifier { ls, cfg, metrics })
    }

    pub fn learning_set(&self) -> &LearningSet {
        self.ls
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.cfg
    }

    /// Square root of the Mahalanobis form between case `index` and a
    /// rescaled query, under the case's local covariance.
    pub fn distance(&self, index: usize, query: &[f64]) -> f64 {
        let case = &self.ls.cases()[index].features;
        let delta = DVector::from_iterator(case.len(), case.iter().zip(query).map(|(x, q)| x - q));
        let z = self.metrics[index]
            .l()
            .solve_lower_triangular(&delta)
            .expect("Cholesky factor has a positive diagonal");
        z.norm_squared().sqrt()
    }

    /// The simple support function case `index` emits about a rescaled query.
    pub fn case_evidence(&self, index: usize, query: &[f64]) -> Result<MassFunction> {
        let s = reliability(self.cfg.a, self.distance(index, query));
        MassFunction::simple_support(self.ls.frame().clone(), self.ls.cases()[index].pkc, s)
    }

    /// Classifies raw (not yet rescaled) query features.
    pub fn classify(&self, raw: &[f64]) -> Result<Classification> {
        let query = self.ls.rescale(raw)?;
        self.classify_rescaled(&query)
    }

    pub fn classify_rescaled(&self, query: &[f64]) -> Result<Classification> {
        let distances: Vec<f64> = (0..self.ls.len())
            .map(|i| self.distance(i, query))
            .collect();
        pool(
            self.ls,
            &distances,
            self.cfg.a,
            self.cfg.normalize_combination,
        )
    }
}

/// Pools the simple supports implied by per-case distances.
fn pool(ls: &LearningSet, distances: &[f64], a: f64, normalize: bool) -> Result<Classification> {
    let frame = ls.frame();
    let mut mass = MassFunction::vacuous(frame.clone());
    for (case, &d) in ls.cases().iter().zip(distances) {
        let s = reliability(a, d);
        if s > 0.0 {
            let evidence = MassFunction::simple_support(frame.clone(), case.pkc, s)?;
            mass = mass.conjunctive(&evidence)?;
        }
    }
    if normalize {
        mass = mass.normalized()?;
    }
    let betp = mass.pignistic()?;
    let predicted = betp.argmax();
    Ok(Classification {
        mass,
        betp,
        predicted,
    })
}

/// Evidence of case `index` about a query already mapped by the learning
/// set's rescaler.
pub fn case_evidence(
    ls: &LearningSet,
    index: usize,
    query: &[f64],
    cfg: &ClassifierConfig,
) -> Result<MassFunction> {
    cfg.validate()?;
    let cov = local_covariance(ls, index, cfg)?;
    let chol = cov.cholesky().ok_or(Error::SingularCovariance(index))?;
    let case = &ls.cases()[index];
    let delta = DVector::from_iterator(
        query.len(),
        case.features.iter().zip(query).map(|(x, q)| x - q),
    );
    let z = chol
        .l()
        .solve_lower_triangular(&delta)
        .expect("positive diagonal");
    let s = reliability(cfg.a, z.norm());
    MassFunction::simple_support(ls.frame().clone(), case.pkc, s)
}

/// Classifies raw query features against the learning set.
pub fn classify(ls: &LearningSet, raw: &[f64], cfg: &ClassifierConfig) -> Result<Classification> {
    EvidentialClassifier::new(ls, cfg.clone())?.classify(raw)
}

/// Percent of test cases (raw features, singleton labels) whose predicted
/// class is their true class.
pub fn evaluate_pcc(
    ls: &LearningSet,
    tests: &[LabeledCase],
    cfg: &ClassifierConfig,
) -> Result<f64> {
    if tests.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let classifier = EvidentialClassifier::new(ls, cfg.clone())?;
    let mut correct = 0usize;
    for (i, case) in tests.iter().enumerate() {
        if case.pkc.len() != 1 {
            return Err(Error::NonSingletonLabel(i));
        }
        let c = classifier.classify(&case.features)?;
        if case.pkc.contains(c.predicted) {
            correct += 1;
        }
    }
    Ok(100.0 * correct as f64 / tests.len() as f64)
}

/// Leave-one-out score of every slope in `grid`: the percentage of held-out
/// training cases whose predicted class falls inside their own `pkc`.
///
/// Each held-out case is classified by the remaining cases with their local
/// covariances re-estimated without it. The rescaler is not refitted.
pub fn loo_scores(ls: &LearningSet, grid: &[f64], cfg: &ClassifierConfig) -> Result<Vec<f64>> {
    let mut hits = vec![0usize; grid.len()];
    for (i, held_out) in ls.cases().iter().enumerate() {
        let Some(rest) = ls.without(i) else { break };
        let sub_cfg = ClassifierConfig {
            k_cov: cfg.k_cov.map(|k| k.min(rest.len())),
            ..cfg.clone()
        };
        let classifier = EvidentialClassifier::new(&rest, sub_cfg)?;
        let distances: Vec<f64> = (0..rest.len())
            .map(|j| classifier.distance(j, &held_out.features))
            .collect();
        for (slot, &a) in hits.iter_mut().zip(grid) {
            let c = pool(&rest, &distances, a, cfg.normalize_combination)?;
            if held_out.pkc.contains(c.predicted) {
                *slot += 1;
            }
        }
    }
    Ok(hits
        .into_iter()
        .map(|h| 100.0 * h as f64 / ls.len() as f64)
        .collect())
}

/// The slope in `grid` with the best leave-one-out score; ties go to the
/// smaller slope.
pub fn tune_a(ls: &LearningSet, grid: &[f64], cfg: &ClassifierConfig) -> Result<f64> {
    match grid {
        [] => Err(Error::BadConfig("empty slope grid".into())),
        [only] => Ok(*only),
        _ => {
            let scores = loo_scores(ls, grid, cfg)?;
            let mut best = 0;
            for i in 1..grid.len() {
                let better = scores[i] > scores[best];
                let tie_smaller = scores[i] == scores[best] && grid[i] < grid[best];
                if better || tie_smaller {
                    best = i;
                }
            }
            Ok(grid[best])
        }
    }
}
