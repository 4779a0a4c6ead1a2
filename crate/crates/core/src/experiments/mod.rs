//! Synthetic replications of the five Gaussian case studies, scored against
//! a linear discriminant trained on the true classes.
//!
//! | study | means | covariance | cases/class (train) | training labels |
//! |---|---|---|---|---|
//! | 1 | (0,0) (4,0) (2,2) | I | 200 (20) | pairs: half AB/AC, BA/BC, CA/CB |
//! | 2 | (−3,0) (3,0) (0,0) | I | 100 (30) | A, B exact; C half AC, half BC |
//! | 3 | 2√2·e₁ … 2√2·e₅ | I | 200 (30) | each other class added on a coin toss |
//! | 4 | equilateral, side 10 | σ²I, σ² = 10 | 200 (20) | exact |
//! | 5 | (10,0) (20,0) (30,0) | 10I, diag(10,1), 10I | 100 (30) | exact |
//!
//! Replication `r` uses the seed `splitmix64(master ^ r)`, so runs are
//! reproducible and replications independent of each other.

mod generate;
mod lda;

use std::fmt::Write as _;

use crate::classifier::{
    evaluate_pcc, tune_a, ClassifierConfig, LabeledCase, LearningSet, DEFAULT_A_GRID,
};
use crate::{Error, Result};

pub use generate::{
    case_study, coin_flip_pkc, generate, splitmix64, ClassSpec, GaussianMixtureSpec, NormalStream,
    PkcScheme, Sample, SplitData,
};
pub use lda::{lda_baseline, LinearDiscriminant};

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub classifier: ClassifierConfig,
    /// Slopes tried by leave-one-out tuning on each training set.
    pub grid: Vec<f64>,
    /// Overrides every class covariance with `sigma2 · I`.
    pub sigma2: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            classifier: ClassifierConfig::default(),
            grid: DEFAULT_A_GRID.to_vec(),
            sigma2: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Replication {
    pub rep: usize,
    pub seed: u64,
    /// Slope chosen by tuning.
    pub a: f64,
    pub tbm_pcc: f64,
    pub baseline_pcc: f64,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub case: u32,
    pub replications: Vec<Replication>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

fn summarize(values: impl Iterator<Item = f64>) -> Summary {
    let v: Vec<f64> = values.collect();
    Summary {
        mean: v.iter().sum::<f64>() / v.len() as f64,
        min: v.iter().copied().fold(f64::INFINITY, f64::min),
        max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

impl ExperimentResult {
    pub fn tbm(&self) -> Summary {
        summarize(self.replications.iter().map(|r| r.tbm_pcc))
    }

    pub fn baseline(&self) -> Summary {
        summarize(self.replications.iter().map(|r| r.baseline_pcc))
    }

    /// `rep,tbm_pcc,baseline_pcc` per replication, then `mean`, `min` and
    /// `max` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rep,tbm_pcc,baseline_pcc\n");
        for r in &self.replications {
            let _ = writeln!(out, "{},{:.2},{:.2}", r.rep + 1, r.tbm_pcc, r.baseline_pcc);
        }
        let (t, b) = (self.tbm(), self.baseline());
        let _ = writeln!(out, "mean,{:.2},{:.2}", t.mean, b.mean);
        let _ = writeln!(out, "min,{:.2},{:.2}", t.min, b.min);
        let _ = writeln!(out, "max,{:.2},{:.2}", t.max, b.max);
        out
    }
}

/// TBM and baseline PCC on one generated data set.
pub fn run_replication(data: &SplitData, cfg: &ExperimentConfig) -> Result<(f64, f64, f64)> {
    let raw: Vec<LabeledCase> = data
        .train
        .iter()
        .map(|s| LabeledCase::new(s.features.clone(), s.pkc))
        .collect();
    let ls = LearningSet::fit(data.frame.clone(), raw)?;
    let a = tune_a(&ls, &cfg.grid, &cfg.classifier)?;
    let tests: Vec<LabeledCase> = data
        .test
        .iter()
        .map(|s| LabeledCase::new(s.features.clone(), s.pkc))
        .collect();
    let tbm = evaluate_pcc(&ls, &tests, &cfg.classifier.clone().with_a(a))?;
    let baseline = lda_baseline(
        &data.train,
        &data.test,
        data.frame.len(),
        cfg.classifier.ridge,
    )?;
    Ok((a, tbm, baseline))
}

pub fn replication_seed(master: u64, rep: usize) -> u64 {
    splitmix64(master ^ rep as u64)
}

pub fn run_case_study(
    case: u32,
    replications: usize,
    master_seed: u64,
    cfg: &ExperimentConfig,
) -> Result<ExperimentResult> {
    if replications == 0 {
        return Err(Error::BadSpec(
            "at least one replication is required".into(),
        ));
    }
    let (spec, scheme) = case_study(case, cfg.sigma2)?;
    let mut reps = Vec::with_capacity(replications);
    for rep in 0..replications {
        let seed = replication_seed(master_seed, rep);
        let data = generate(&spec, &scheme, seed)?;
        let (a, tbm_pcc, baseline_pcc) = run_replication(&data, cfg)?;
        reps.push(Replication {
            rep,
            seed,
            a,
            tbm_pcc,
            baseline_pcc,
        });
    }
    Ok(ExperimentResult {
        case,
        replications: reps,
    })
}
