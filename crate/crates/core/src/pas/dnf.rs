//! Exact probability of a monotone DNF over independent variables.
//!
//! Terms are bit masks over variable indices. The evaluator absorbs
//! subsumed terms, splits variable-disjoint components, and otherwise
//! branches on the variable appearing in the most terms, memoizing every
//! canonical sub-expression it has solved.

use std::collections::HashMap;

/// Sorts, dedups, and drops every term that contains another term.
pub(crate) fn absorb(terms: &mut Vec<u64>) {
    terms.sort_by_key(|t| (t.count_ones(), *t));
    terms.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(terms.len());
    for &t in terms.iter() {
        if !kept.iter().any(|&k| k & !t == 0) {
            kept.push(t);
        }
    }
    kept.sort_unstable();
    *terms = kept;
}

pub(crate) struct DnfEvaluator<'a> {
    probs: &'a [f64],
    memo: HashMap<Vec<u64>, f64>,
}

impl<'a> DnfEvaluator<'a> {
    pub(crate) fn new(probs: &'a [f64]) -> Self {
        DnfEvaluator {
            probs,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn probability(&mut self, terms: &[u64]) -> f64 {
        let mut terms = terms.to_vec();
        absorb(&mut terms);
        self.solve(terms)
    }

    fn term_probability(&self, term: u64) -> f64 {
        let mut p = 1.0;
        let mut bits = term;
        while bits != 0 {
            p *= self.probs[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        p
    }

    /// `terms` must already be absorbed.
    fn solve(&mut self, terms: Vec<u64>) -> f64 {
        match terms.as_slice() {
            [] => return 0.0,
            [t] => return self.term_probability(*t),
            _ => {}
        }
        if terms.contains(&0) {
            return 1.0;
        }
        if let Some(&p) = self.memo.get(&terms) {
            return p;
        }

        let components = split_components(&terms);
        let p = if components.len() > 1 {
            let none = components
                .into_iter()
                .map(|c| 1.0 - self.solve(c))
                .product::<f64>();
            1.0 - none
        } else {
            let var = most_frequent(&terms);
            let bit = 1u64 << var;
            let mut on: Vec<u64> = terms.iter().map(|&t| t & !bit).collect();
            absorb(&mut on);
            let off: Vec<u64> = terms.iter().copied().filter(|&t| t & bit == 0).collect();
            let p_var = self.probs[var];
            p_var * self.solve(on) + (1.0 - p_var) * self.solve(off)
        };
        self.memo.insert(terms, p);
        p
    }
}

fn most_frequent(terms: &[u64]) -> usize {
    let mut counts = [0u32; 64];
    for &t in terms {
        let mut bits = t;
        while bits != 0 {
            counts[bits.trailing_zeros() as usize] += 1;
            bits &= bits - 1;
        }
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Groups terms that are connected through shared variables.
fn split_components(terms: &[u64]) -> Vec<Vec<u64>> {
    let mut groups: Vec<(u64, Vec<u64>)> = Vec::new();
    for &t in terms {
        let mut merged = (t, vec![t]);
        let mut rest = Vec::with_capacity(groups.len());
        for g in groups {
            if g.0 & merged.0 != 0 {
                merged.0 |= g.0;
                merged.1.extend(g.1);
            } else {
                rest.push(g);
            }
        }
        rest.push(merged);
        groups = rest;
    }
    groups
        .into_iter()
        .map(|(_, mut ts)| {
            ts.sort_unstable();
            ts
        })
        .collect()
}
