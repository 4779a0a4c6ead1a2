use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Probability that any one citation link transmits relevance.
pub const DEFAULT_LAMBDA: f64 = 0.2644;

/// Logistic map from retrieval rank to the probability that a document is
/// relevant: `α = L(slope · ln(rank) + intercept)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogisticFit {
    pub slope: f64,
    pub intercept: f64,
}

impl Default for LogisticFit {
    fn default() -> Self {
        LogisticFit {
            slope: -2.42,
            intercept: 1.11,
        }
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn alpha_from_rank(rank: u32, fit: &LogisticFit) -> Result<f64> {
    if rank < 1 {
        return Err(Error::BadRank(rank));
    }
    Ok(logistic(fit.slope * f64::from(rank).ln() + fit.intercept))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    /// Position in the retrieval output, 1 = best. Unranked documents get α = 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
}

impl Document {
    pub fn new(id: impl Into<String>, rank: Option<u32>) -> Self {
        Document {
            id: id.into(),
            rank,
        }
    }
}

/// JSON shape: `{"docs":[{"id":"D1","rank":3}],"links":[["D1","D6"]]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub docs: Vec<Document>,
    #[serde(default)]
    pub links: Vec<(String, String)>,
}

/// Ranked documents and directed citation links `citing → cited`.
#[derive(Clone, Debug)]
pub struct CitationGraph {
    docs: Vec<Document>,
    links: BTreeSet<(usize, usize)>,
    lambda: f64,
    fit: LogisticFit,
}

impl CitationGraph {
    /// Duplicate links collapse; self-links, unknown ids, duplicate ids and
    /// rank 0 are errors.
    pub fn new<I, S>(docs: Vec<Document>, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        for (i, d) in docs.iter().enumerate() {
            if docs[..i].iter().any(|o| o.id == d.id) {
                return Err(Error::DuplicateDocument(d.id.clone()));
            }
            if d.rank == Some(0) {
                return Err(Error::BadRank(0));
            }
        }
        let mut graph = CitationGraph {
            docs,
            links: BTreeSet::new(),
            lambda: DEFAULT_LAMBDA,
            fit: LogisticFit::default(),
        };
        for (from, to) in links {
            let (from, to) = (graph.require(from.as_ref())?, graph.require(to.as_ref())?);
            if from == to {
                return Err(Error::SelfLink(graph.docs[from].id.clone()));
            }
            graph.links.insert((from, to));
        }
        Ok(graph)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        Self::new(doc.docs, doc.links)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::BadProbability(lambda));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_logistic(mut self, fit: LogisticFit) -> Self {
        self.fit = fit;
        self
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownDocument(id.to_string()))
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.docs.iter().position(|d| d.id == id)
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.links.iter().copied()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn logistic(&self) -> &LogisticFit {
        &self.fit
    }

    /// Retrieval probability α of document `index`.
    pub fn alpha(&self, index: usize) -> f64 {
        match self.docs[index].rank {
            Some(rank) => {
                alpha_from_rank(rank, &self.fit).expect("ranks validated at construction")
            }
            None => 0.0,
        }
    }

    /// Documents citing `index`.
    pub fn citing(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .iter()
            .filter(move |&&(_, to)| to == index)
            .map(|&(from, _)| from)
    }

    /// Adds a link (used to probe monotonicity).
    pub fn with_link(mut self, from: &str, to: &str) -> Result<Self> {
        let (f, t) = (self.require(from)?, self.require(to)?);
        if f == t {
            return Err(Error::SelfLink(from.to_string()));
        }
        self.links.insert((f, t));
        Ok(self)
    }
}
