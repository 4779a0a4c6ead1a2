//! Document support from citation links.
//!
//! Each document `D_i` carries an assumption `a_i` ("the retrieval system
//! was right about D_i", probability α from its rank) and each link
//! `D_i → D_j` an assumption `I_ij` (probability λ). An argument for a
//! target is a simple path ending there: the assumption of its first
//! document and the links along it. The degree of support of a target is
//! the probability that at least one of its arguments holds.

mod dnf;
mod graph;

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};
use dnf::{absorb, DnfEvaluator};

pub use graph::{
    alpha_from_rank, CitationGraph, Document, GraphDocument, LogisticFit, DEFAULT_LAMBDA,
};

/// Above this many live variables the exact evaluator refuses.
pub const MAX_EXACT_VARIABLES: usize = 30;

/// Default bound on enumerated paths per target.
pub const DEFAULT_MAX_PATHS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    /// `a_i`: document `i` is relevant per the retrieval system.
    Retrieval(usize),
    /// `I_ij`: the link from document `i` to document `j` transmits relevance.
    Link(usize, usize),
}

/// A conjunction of assumptions supporting one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Argument {
    /// Documents from the originating one to the target, no repeats.
    pub path: Vec<usize>,
}

impl Argument {
    pub fn source(&self) -> usize {
        self.path[0]
    }

    pub fn assumptions(&self) -> Vec<Assumption> {
        std::iter::once(Assumption::Retrieval(self.path[0]))
            .chain(self.path.windows(2).map(|w| Assumption::Link(w[0], w[1])))
            .collect()
    }
}

/// A monotone DNF over assumptions, absorbed, plus each variable's probability.
#[derive(Clone, Debug)]
pub struct SupportExpression {
    target: usize,
    variables: Vec<(Assumption, f64)>,
    /// Each term lists variable indices, ascending.
    terms: Vec<Vec<usize>>,
    arguments: Vec<Argument>,
    names: Vec<String>,
}

impl SupportExpression {
    pub fn target(&self) -> usize {
        self.target
    }

    pub fn variables(&self) -> &[(Assumption, f64)] {
        &self.variables
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    /// The surviving arguments, aligned with [`terms`](Self::terms).
    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    /// Each term as a set of assumptions.
    pub fn clauses(&self) -> Vec<Vec<Assumption>> {
        self.terms
            .iter()
            .map(|t| t.iter().map(|&v| self.variables[v].0).collect())
            .collect()
    }

    /// Replaces one variable's probability.
    pub fn with_probability(mut self, assumption: Assumption, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::BadProbability(p));
        }
        if let Some(v) = self.variables.iter_mut().find(|(a, _)| *a == assumption) {
            v.1 = p;
        }
        Ok(self)
    }

    fn variable_name(&self, a: Assumption) -> String {
        match a {
            Assumption::Retrieval(i) => format!("a{}", self.names[i]),
            Assumption::Link(i, j) => format!("I{}{}", self.names[i], self.names[j]),
        }
    }
}

/// `a6 ∨ (a1 ∧ I16)`, each argument in path order. Ids of the form
/// `D<digits>` are shortened to the digits.
impl fmt::Display for SupportExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .arguments
            .iter()
            .map(|arg| {
                let clause = arg.assumptions();
                let parts: Vec<String> = clause.iter().map(|&a| self.variable_name(a)).collect();
                if parts.len() == 1 {
                    parts[0].clone()
                } else {
                    format!("({})", parts.join(" ∧ "))
                }
            })
            .collect();
        f.write_str(&terms.join(" ∨ "))
    }
}

fn short_name(id: &str) -> String {
    match id.strip_prefix('D') {
        Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => {
            rest.to_string()
        }
        _ => id.to_string(),
    }
}

pub fn enumerate_arguments(g: &CitationGraph, target: &str) -> Result<SupportExpression> {
    enumerate_arguments_with_budget(g, target, DEFAULT_MAX_PATHS)
}

/// One argument per simple path into `target`, found by depth-first search
/// over reversed links. Fails once more than `max_paths` paths are seen.
pub fn enumerate_arguments_with_budget(
    g: &CitationGraph,
    target: &str,
    max_paths: usize,
) -> Result<SupportExpression> {
    let t = g
        .index_of(target)
        .ok_or_else(|| Error::UnknownDocument(target.to_string()))?;

    let mut citing: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (from, to) in g.links() {
        citing[to].push(from);
    }

    // The path is built backwards: `stack` holds target, …, current head.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut on_path = vec![false; g.len()];
    let mut stack = vec![t];
    on_path[t] = true;
    walk(&citing, &mut stack, &mut on_path, &mut paths, max_paths)?;

    let mut arguments: Vec<Argument> = paths
        .into_iter()
        .map(|mut p| {
            p.reverse();
            Argument { path: p }
        })
        .collect();

    let mut table: BTreeMap<Assumption, usize> = BTreeMap::new();
    for arg in &arguments {
        for a in arg.assumptions() {
            let next = table.len();
            table.entry(a).or_insert(next);
        }
    }
    let mut variables: Vec<(Assumption, f64)> = vec![(Assumption::Retrieval(0), 0.0); table.len()];
    for (&a, &v) in &table {
        let p = match a {
            Assumption::Retrieval(i) => g.alpha(i),
            Assumption::Link(..) => g.lambda(),
        };
        variables[v] = (a, p);
    }

    // Absorption on variable sets; paths are simple so terms are distinct sets.
    let term_of = |arg: &Argument| -> Vec<usize> {
        let mut t: Vec<usize> = arg.assumptions().iter().map(|a| table[a]).collect();
        t.sort_unstable();
        t
    };
    let mut terms: Vec<Vec<usize>> = arguments.iter().map(term_of).collect();
    let subsumed: Vec<bool> = (0..terms.len())
        .map(|i| {
            (0..terms.len()).any(|j| {
                j != i
                    && is_subset(&terms[j], &terms[i])
                    && (terms[j].len() < terms[i].len() || j < i)
            })
        })
        .collect();
    let mut keep = subsumed.iter().map(|s| !s);
    arguments.retain(|_| keep.next().unwrap());
    let mut keep = subsumed.iter().map(|s| !s);
    terms.retain(|_| keep.next().unwrap());

    let mut order: Vec<usize> = (0..terms.len()).collect();
    order.sort_by(|&a, &b| {
        terms[a]
            .len()
            .cmp(&terms[b].len())
            .then_with(|| terms[a].cmp(&terms[b]))
    });
    let terms = order.iter().map(|&i| terms[i].clone()).collect();
    let arguments = order.iter().map(|&i| arguments[i].clone()).collect();

    Ok(SupportExpression {
        target: t,
        variables,
        terms,
        arguments,
        names: g.docs().iter().map(|d| short_name(&d.id)).collect(),
    })
}

fn walk(
    citing: &[Vec<usize>],
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    paths: &mut Vec<Vec<usize>>,
    max_paths: usize,
) -> Result<()> {
    if paths.len() >= max_paths {
        return Err(Error::PathBudgetExceeded(max_paths));
    }
    paths.push(stack.clone());
    let head = *stack.last().expect("stack holds the target");
    for &prev in &citing[head] {
        if on_path[prev] {
            continue;
        }
        on_path[prev] = true;
        stack.push(prev);
        walk(citing, stack, on_path, paths, max_paths)?;
        stack.pop();
        on_path[prev] = false;
    }
    Ok(())
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Terms as bit masks over the variables that can still be true, plus their
/// probabilities. Terms containing a zero-probability variable are dropped.
fn live_terms(expr: &SupportExpression) -> Result<(Vec<u64>, Vec<f64>)> {
    let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
    let mut masks = Vec::new();
    for term in &expr.terms {
        if term.iter().any(|&v| expr.variables[v].1 == 0.0) {
            continue;
        }
        let mut mask = 0u64;
        for &v in term {
            if expr.variables[v].1 == 1.0 {
                continue;
            }
            let next = remap.len();
            let bit = *remap.entry(v).or_insert(next);
            if bit >= MAX_EXACT_VARIABLES {
                return Err(Error::TooManyVariables(count_live(expr)));
            }
            mask |= 1 << bit;
        }
        masks.push(mask);
    }
    let mut probs = vec![0.0; remap.len()];
    for (&v, &bit) in &remap {
        probs[bit] = expr.variables[v].1;
    }
    absorb(&mut masks);
    Ok((masks, probs))
}

fn count_live(expr: &SupportExpression) -> usize {
    let mut live: Vec<usize> = expr
        .terms
        .iter()
        .filter(|t| t.iter().all(|&v| expr.variables[v].1 > 0.0))
        .flatten()
        .copied()
        .filter(|&v| expr.variables[v].1 < 1.0)
        .collect();
    live.sort_unstable();
    live.dedup();
    live.len()
}

/// Exact probability that at least one argument holds.
pub fn degree_of_support(expr: &SupportExpression) -> Result<f64> {
    let (terms, probs) = live_terms(expr)?;
    Ok(DnfEvaluator::new(&probs)
        .probability(&terms)
        .clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Sampled degree of support, for expressions too wide for the exact evaluator.
pub fn monte_carlo_support(
    expr: &SupportExpression,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::BadConfig(
            "Monte Carlo needs at least one sample".into(),
        ));
    }
    let probs: Vec<f64> = expr.variables.iter().map(|v| v.1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut world = vec![false; probs.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (w, &p) in world.iter_mut().zip(&probs) {
            *w = rng.random::<f64>() < p;
        }
        if expr.terms.iter().any(|t| t.iter().all(|&v| world[v])) {
            hits += 1;
        }
    }
    let mean = hits as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        mean,
        std_error: (mean * (1.0 - mean) / samples as f64).sqrt(),
        samples,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DocumentSupport {
    pub id: String,
    pub rank: Option<u32>,
    pub alpha: f64,
    pub support: f64,
}

/// Every document with its exact support, by descending support then id.
pub fn rank_documents(g: &CitationGraph) -> Result<Vec<DocumentSupport>> {
    rank_documents_with(g, DEFAULT_MAX_PATHS)
}

pub fn rank_documents_with(g: &CitationGraph, max_paths: usize) -> Result<Vec<DocumentSupport>> {
    let mut out = Vec::with_capacity(g.len());
    for (i, doc) in g.docs().iter().enumerate() {
        let expr = enumerate_arguments_with_budget(g, &doc.id, max_paths)?;
        out.push(DocumentSupport {
            id: doc.id.clone(),
            rank: doc.rank,
            alpha: g.alpha(i),
            support: degree_of_support(&expr)?,
        });
    }
    out.sort_by(|a, b| {
        b.support
            .total_cmp(&a.support)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Six documents: D1 cites D2 and D6; D4, D3, D5 form a citation cycle.
    fn figure_graph() -> CitationGraph {
        let docs = (1..=6)
            .map(|i| Document::new(format!("D{i}"), Some(i)))
            .collect();
        CitationGraph::new(
            docs,
            [
                ("D1", "D2"),
                ("D1", "D6"),
                ("D4", "D3"),
                ("D3", "D5"),
                ("D5", "D4"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn figure_target_d6() {
        let g = figure_graph();
        let expr = enumerate_arguments(&g, "D6").unwrap();
        assert_eq!(expr.to_string(), "a6 ∨ (a1 ∧ I16)");
        assert_eq!(
            expr.clauses(),
            vec![
                vec![Assumption::Retrieval(5)],
                vec![Assumption::Retrieval(0), Assumption::Link(0, 5)],
            ]
        );
        let s = degree_of_support(&expr).unwrap();
        let (a1, a6, l) = (g.alpha(0), g.alpha(5), g.lambda());
        assert!((s - (a6 + (1.0 - a6) * a1 * l)).abs() < 1e-15);
        assert!(s >= a6);
    }

    #[test]
    fn worked_probability() {
        let g = figure_graph();
        let expr = enumerate_arguments(&g, "D6")
            .unwrap()
            .with_probability(Assumption::Retrieval(5), 0.3)
            .unwrap()
            .with_probability(Assumption::Retrieval(0), 0.5)
            .unwrap();
        assert!((degree_of_support(&expr).unwrap() - 0.39254).abs() < 1e-12);
    }

    #[test]
    fn cycle_is_cut() {
        let g = figure_graph();
        let expr = enumerate_arguments(&g, "D4").unwrap();
        assert_eq!(expr.to_string(), "a4 ∨ (a5 ∧ I54) ∨ (a3 ∧ I35 ∧ I54)");
        for arg in expr.arguments() {
            let mut p = arg.path.clone();
            p.sort_unstable();
            p.dedup();
            assert_eq!(p.len(), arg.path.len());
        }
        let d5 = enumerate_arguments(&g, "D5").unwrap();
        let cyclic = [
            Assumption::Retrieval(4),
            Assumption::Link(4, 3),
            Assumption::Link(3, 2),
            Assumption::Link(2, 4),
        ];
        assert!(d5.clauses().iter().all(|c| c.len() < cyclic.len()));
        assert!(d5.clauses().contains(&vec![Assumption::Retrieval(4)]));
    }

    #[test]
    fn no_links_means_own_assumption() {
        let docs = vec![Document::new("x", Some(3)), Document::new("y", Some(1))];
        let g = CitationGraph::new(docs, Vec::<(&str, &str)>::new()).unwrap();
        let expr = enumerate_arguments(&g, "x").unwrap();
        assert_eq!(expr.to_string(), "ax");
        assert_eq!(degree_of_support(&expr).unwrap(), g.alpha(0));
        let ranked = rank_documents(&g).unwrap();
        assert_eq!(ranked[0].id, "y");
        assert!(matches!(
            enumerate_arguments(&g, "z"),
            Err(Error::UnknownDocument(_))
        ));
    }

    #[test]
    fn top_rank_beats_weakly_linked_document() {
        let docs = vec![
            Document::new("top", Some(1)),
            Document::new("low", Some(100)),
            Document::new("cite", Some(50)),
        ];
        let g = CitationGraph::new(docs, [("cite", "low")]).unwrap();
        let ranked = rank_documents(&g).unwrap();
        assert_eq!(ranked[0].id, "top");
        assert!((ranked[0].support - 0.7521).abs() < 1e-4);
    }

    #[test]
    fn path_budget() {
        let g = figure_graph();
        assert!(matches!(
            enumerate_arguments_with_budget(&g, "D4", 2),
            Err(Error::PathBudgetExceeded(2))
        ));
    }

    #[test]
    fn unranked_arguments_contribute_nothing() {
        let docs = vec![Document::new("D1", None), Document::new("D2", Some(2))];
        let g = CitationGraph::new(docs, [("D1", "D2")]).unwrap();
        let expr = enumerate_arguments(&g, "D2").unwrap();
        assert_eq!(expr.terms().len(), 2);
        assert_eq!(degree_of_support(&expr).unwrap(), g.alpha(1));
    }

    #[test]
    fn too_many_variables() {
        // A chain of 40 documents into the last one.
        let docs: Vec<Document> = (0..40)
            .map(|i| Document::new(format!("n{i}"), Some(i + 1)))
            .collect();
        let links: Vec<(String, String)> = (0..39)
            .map(|i| (format!("n{i}"), format!("n{}", i + 1)))
            .collect();
        let g = CitationGraph::new(docs, links).unwrap();
        let expr = enumerate_arguments(&g, "n39").unwrap();
        assert!(matches!(
            degree_of_support(&expr),
            Err(Error::TooManyVariables(_))
        ));
        let mc = monte_carlo_support(&expr, 20_000, 1).unwrap();
        assert!(mc.mean > g.alpha(39));
    }

    #[test]
    fn monte_carlo_agrees() {
        let g = figure_graph();
        let expr = enumerate_arguments(&g, "D4").unwrap();
        let exact = degree_of_support(&expr).unwrap();
        let mc = monte_carlo_support(&expr, 200_000, 7).unwrap();
        let se = (exact * (1.0 - exact) / mc.samples as f64).sqrt();
        assert!((mc.mean - exact).abs() < 4.0 * se);
    }
}
