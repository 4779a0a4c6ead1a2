//! Generators and brute-force oracles shared by the integration tests and
//! the acceptance runner. The oracles work on dense arrays indexed by subset
//! bits and share no code with the library beyond its public types.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use tbm::pas::{CitationGraph, Document};
use tbm::{Frame, MassFunction, Subset};

pub fn frame(n: usize) -> Frame {
    Frame::new((0..n).map(|i| format!("w{i}"))).unwrap()
}

/// A random assignment with up to `max_focal` focal sets, possibly on ∅
/// when `allow_empty` is set.
pub fn random_mass(
    rng: &mut impl RngCore,
    frame: &Frame,
    max_focal: usize,
    allow_empty: bool,
) -> MassFunction {
    let n = frame.len();
    let count = rng.random_range(1..=max_focal);
    let mut entries: BTreeMap<u64, f64> = BTreeMap::new();
    for _ in 0..count {
        let lo = if allow_empty { 0 } else { 1 };
        let bits = rng.random_range(lo..1u64 << n);
        *entries.entry(bits).or_insert(0.0) += rng.random_range(0.05..1.0);
    }
    let total: f64 = entries.values().sum();
    MassFunction::new(
        frame.clone(),
        entries
            .into_iter()
            .map(|(b, w)| (Subset::from_bits(b), w / total)),
    )
    .unwrap()
}

pub fn dense(m: &MassFunction) -> Vec<f64> {
    let mut v = vec![0.0; 1 << m.frame().len()];
    for &(s, x) in m.focal() {
        v[s.bits() as usize] += x;
    }
    v
}

pub fn dense_conjunctive(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for (x, &ma) in a.iter().enumerate() {
        for (y, &mb) in b.iter().enumerate() {
            out[x & y] += ma * mb;
        }
    }
    out
}

pub fn dense_bel(m: &[f64], set: usize) -> f64 {
    (1..m.len()).filter(|&a| a & !set == 0).map(|a| m[a]).sum()
}

pub fn dense_pl(m: &[f64], set: usize) -> f64 {
    (1..m.len()).filter(|&a| a & set != 0).map(|a| m[a]).sum()
}

pub fn dense_betp(m: &[f64], n: usize) -> Vec<f64> {
    let norm = 1.0 - m[0];
    (0..n)
        .map(|w| {
            (1..m.len())
                .filter(|&a| a & (1 << w) != 0)
                .map(|a| m[a] / (a.count_ones() as f64) / norm)
                .sum()
        })
        .collect()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The overlapping-frame formula evaluated literally for every A ⊆ Ω₁ ∪ Ω₂.
/// Returns the union labels (Ω₁'s first) and the dense result. Terms whose
/// denominators vanish are skipped, so orphaned mass is missing here.
pub fn dense_overlap(m1: &MassFunction, m2: &MassFunction) -> (Vec<String>, Vec<f64>) {
    let mut labels: Vec<String> = m1.frame().labels().to_vec();
    for l in m2.frame().labels() {
        if !labels.contains(l) {
            labels.push(l.clone());
        }
    }
    let pos = |l: &str| labels.iter().position(|x| x == l).unwrap();
    let lift = |m: &MassFunction| -> Vec<(usize, f64)> {
        m.focal()
            .iter()
            .map(|&(s, x)| {
                let bits = s.indices().map(|i| 1usize << pos(m.frame().label(i))).sum();
                (bits, x)
            })
            .collect()
    };
    let omega1: usize = m1.frame().labels().iter().map(|l| 1usize << pos(l)).sum();
    let omega2: usize = m2.frame().labels().iter().map(|l| 1usize << pos(l)).sum();
    let shared = omega1 & omega2;
    let (f1, f2) = (lift(m1), lift(m2));
    let mass_at = |f: &[(usize, f64)], set: usize| {
        f.iter()
            .filter(|(s, _)| *s == set)
            .map(|p| p.1)
            .sum::<f64>()
    };
    let cond = |f: &[(usize, f64)], a0: usize| {
        f.iter()
            .filter(|(s, _)| s & shared == a0)
            .map(|p| p.1)
            .sum::<f64>()
    };

    let size = 1 << labels.len();
    let mut joint = vec![0.0; size];
    for a in 0..size {
        if a & !shared != 0 {
            continue;
        }
        for b in 0..size {
            if b & !shared != 0 {
                continue;
            }
            joint[a & b] += cond(&f1, a) * cond(&f2, b);
        }
    }
    let mut out = vec![0.0; size];
    for (a, slot) in out.iter_mut().enumerate() {
        let (a1, a2, a0) = (a & omega1, a & omega2, a & shared);
        let (c1, c2) = (cond(&f1, a0), cond(&f2, a0));
        if c1 == 0.0 || c2 == 0.0 {
            continue;
        }
        *slot = mass_at(&f1, a1) / c1 * mass_at(&f2, a2) / c2 * joint[a0];
    }
    (labels, out)
}

/// Expresses `m` on `target`, matching labels by name.
pub fn relabel(m: &MassFunction, target: &Frame) -> MassFunction {
    let mut acc: BTreeMap<Subset, f64> = BTreeMap::new();
    for &(s, x) in m.focal() {
        let t = target.subset(m.frame().names(s)).unwrap();
        *acc.entry(t).or_insert(0.0) += x;
    }
    MassFunction::new(target.clone(), acc).unwrap()
}

/// Probability of a monotone DNF by summing over all 2^n worlds.
pub fn dnf_truth_table(terms: &[Vec<usize>], probs: &[f64]) -> f64 {
    let n = probs.len();
    assert!(n <= 22, "truth table too large");
    let masks: Vec<u64> = terms
        .iter()
        .map(|t| t.iter().map(|&v| 1u64 << v).sum())
        .collect();
    (0u64..1 << n)
        .filter(|&w| masks.iter().any(|&t| t & !w == 0))
        .map(|w| {
            (0..n)
                .map(|i| {
                    if w >> i & 1 == 1 {
                        probs[i]
                    } else {
                        1.0 - probs[i]
                    }
                })
                .product::<f64>()
        })
        .sum()
}

/// Up to `max_docs` ranked documents and up to `max_links` distinct links.
pub fn random_graph(rng: &mut impl RngCore, max_docs: usize, max_links: usize) -> CitationGraph {
    let n = rng.random_range(2..=max_docs);
    let docs = (0..n)
        .map(|i| Document::new(format!("D{}", i + 1), Some(rng.random_range(1..=20))))
        .collect();
    let want = rng.random_range(0..=max_links.min(n * (n - 1)));
    let mut links = std::collections::BTreeSet::new();
    while links.len() < want {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            links.insert((format!("D{}", a + 1), format!("D{}", b + 1)));
        }
    }
    CitationGraph::new(docs, links).unwrap()
}
