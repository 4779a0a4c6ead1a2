use serde::{Deserialize, Serialize};

use super::{ClassifierConfig, FeatureScale, LabeledCase, LearningSet, Rescaler};
use crate::{Frame, Result};

/// A fitted learning set and its configuration, as stored on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainedModel {
    pub classes: Vec<String>,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cov: Option<usize>,
    pub ridge: f64,
    #[serde(default)]
    pub normalize: bool,
    pub scales: Vec<FeatureScale>,
    pub cases: Vec<StoredCase>,
}

/// A training case after rescaling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredCase {
    pub features: Vec<f64>,
    pub pkc: Vec<String>,
}

impl TrainedModel {
    pub fn new(ls: &LearningSet, cfg: &ClassifierConfig) -> Self {
        let frame = ls.frame();
        TrainedModel {
            classes: frame.labels().to_vec(),
            a: cfg.a,
            k_cov: cfg.k_cov,
            ridge: cfg.ridge,
            normalize: cfg.normalize_combination,
            scales: ls.rescaler().scales().to_vec(),
            cases: ls
                .cases()
                .iter()
                .map(|c| StoredCase {
                    features: c.features.clone(),
                    pkc: frame.names(c.pkc).into_iter().map(str::to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn config(&self) -> ClassifierConfig {
        ClassifierConfig {
            a: self.a,
            k_cov: self.k_cov,
            ridge: self.ridge,
            normalize_combination: self.normalize,
        }
    }

    pub fn learning_set(&self) -> Result<LearningSet> {
        let frame = Frame::new(self.classes.iter().cloned())?;
        let cases = self
            .cases
            .iter()
            .map(|c| {
                Ok(LabeledCase::new(
                    c.features.clone(),
                    frame.subset(c.pkc.iter().map(String::as_str))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        LearningSet::from_parts(frame, cases, Rescaler::from_scales(self.scales.clone()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }
}
