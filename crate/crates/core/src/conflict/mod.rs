//! Estimating how many distinct events a set of sensors reports on.
//!
//! Sources that describe the same event should agree; combining them
//! conjunctively without normalization leaves little mass on ∅. Sources
//! describing different events contradict each other. Splitting the sources
//! into groups and summing each group's m(∅) therefore scores a hypothesis
//! about which sensor talks about which event, and the number of groups
//! needed to bring that total down to a tolerable level estimates the
//! number of events.

mod partition;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub use partition::{Partition, Partitions};

use crate::{Error, Frame, MassFunction, Result};

/// Largest pool searched exhaustively by [`Search::Auto`].
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Default tolerable total conflict for [`suggest_source_count`].
pub const DEFAULT_TOLERANCE: f64 = 0.05;
pub const DEFAULT_RESTARTS: usize = 10;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Mass functions from several sensors on one frame.
#[derive(Clone, Debug)]
pub struct EvidencePool {
    frame: Frame,
    sources: Vec<MassFunction>,
}

impl EvidencePool {
    pub fn new(sources: Vec<MassFunction>) -> Result<Self> {
        let frame = sources.first().ok_or(Error::EmptyPool)?.frame().clone();
        if sources.iter().any(|m| m.frame() != &frame) {
            return Err(Error::FrameMismatch);
        }
        if sources.len() > 64 {
            return Err(Error::TooManySources(sources.len()));
        }
        Ok(EvidencePool { frame, sources })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn sources(&self) -> &[MassFunction] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
}

/// Per-group and total conflict of one partition.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictReport {
    pub partition: Partition,
    /// m(∅) of each group, in the partition's group order.
    pub group_conflicts: Vec<f64>,
    pub total: f64,
    /// Set when the partition came from the local search rather than full
    /// enumeration, so it may not be optimal.
    pub heuristic: bool,
}

/// How [`best_partition_with`] explores the partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    /// Exhaustive up to [`EXHAUSTIVE_LIMIT`] sources, heuristic beyond.
    Auto,
    Exhaustive,
    /// Greedy seeding plus single-source moves, from the source order and
    /// from `restarts` random orders.
    Heuristic {
        restarts: usize,
        seed: u64,
    },
}

/// Memoizes group conflicts by member mask.
struct Evaluator<'a> {
    pool: &'a EvidencePool,
    cache: HashMap<u64, f64>,
}

impl<'a> Evaluator<'a> {
    fn new(pool: &'a EvidencePool) -> Self {
        Evaluator {
            pool,
            cache: HashMap::new(),
        }
    }

    fn group(&mut self, mask: u64) -> f64 {
        if mask == 0 {
            return 0.0;
        }
        if let Some(&c) = self.cache.get(&mask) {
            return c;
        }
        let members = (0..self.pool.len()).filter(|i| mask & (1 << i) != 0);
        let mut combined: Option<MassFunction> = None;
        for i in members {
            let m = &self.pool.sources[i];
            combined = Some(match combined {
                None => m.clone(),
                Some(acc) => acc.conjunctive(m).expect("pool shares one frame"),
            });
        }
        let c = combined.map_or(0.0, |m| m.conflict());
        self.cache.insert(mask, c);
        c
    }

    fn masks(labels: &[usize], k: usize) -> Vec<u64> {
        let mut masks = vec![0u64; k];
        for (i, &g) in labels.iter().enumerate() {
            masks[g] |= 1 << i;
        }
        masks
    }

    fn report(&mut self, partition: Partition, heuristic: bool) -> ConflictReport {
        let group_conflicts: Vec<f64> = Self::masks(partition.assignment(), partition.num_groups())
            .into_iter()
            .map(|m| self.group(m))
            .collect();
        let total = group_conflicts.iter().sum();
        ConflictReport {
            partition,
            group_conflicts,
            total,
            heuristic,
        }
    }

    fn total(&mut self, labels: &[usize], k: usize) -> f64 {
        Self::masks(labels, k)
            .into_iter()
            .map(|m| self.group(m))
            .sum()
    }
}

/// m(∅) of the unnormalized conjunctive combination of the listed sources.
pub fn group_conflict(pool: &EvidencePool, group: &[usize]) -> Result<f64> {
    if group.is_empty() {
        return Err(Error::BadConfig("empty group".into()));
    }
    let mut mask = 0u64;
    for &i in group {
        if i >= pool.len() {
            return Err(Error::BadConfig(format!("source {i} out of range")));
        }
        mask |= 1 << i;
    }
    Ok(Evaluator::new(pool).group(mask))
}

pub fn total_conflict(pool: &EvidencePool, partition: &Partition) -> Result<ConflictReport> {
    if partition.num_sources() != pool.len() {
        return Err(Error::BadConfig(format!(
            "partition covers {} sources, pool has {}",
            partition.num_sources(),
            pool.len()
        )));
    }
    Ok(Evaluator::new(pool).report(partition.clone(), false))
}

/// Reports for every partition into exactly `k` groups, in canonical order.
pub fn all_partitions(pool: &EvidencePool, k: usize) -> Result<Vec<ConflictReport>> {
    check_k(pool, k)?;
    let mut eval = Evaluator::new(pool);
    Ok(Partitions::new(pool.len(), k)
        .map(|p| eval.report(p, false))
        .collect())
}

fn check_k(pool: &EvidencePool, k: usize) -> Result<()> {
    if k == 0 || k > pool.len() {
        Err(Error::InvalidGroupCount {
            k,
            sources: pool.len(),
        })
    } else {
        Ok(())
    }
}

/// The partition into `k` groups with the least total conflict.
pub fn best_partition(pool: &EvidencePool, k: usize) -> Result<ConflictReport> {
    best_partition_with(pool, k, Search::Auto)
}

pub fn best_partition_with(
    pool: &EvidencePool,
    k: usize,
    search: Search,
) -> Result<ConflictReport> {
    check_k(pool, k)?;
    let search = match search {
        Search::Auto if pool.len() <= EXHAUSTIVE_LIMIT => Search::Exhaustive,
        Search::Auto => Search::Heuristic {
            restarts: DEFAULT_RESTARTS,
            seed: DEFAULT_SEED,
        },
        other => other,
    };
    let mut eval = Evaluator::new(pool);
    match search {
        Search::Exhaustive => {
            let mut best: Option<(f64, Partition)> = None;
            for p in Partitions::new(pool.len(), k) {
                let total = eval.total(p.assignment(), k);
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, p));
                }
            }
            let (_, p) = best.expect("1 <= k <= n admits a partition");
            Ok(eval.report(p, false))
        }
        Search::Heuristic { restarts, seed } => Ok(local_search(&mut eval, k, restarts, seed)),
        Search::Auto => unreachable!(),
    }
}

fn local_search(eval: &mut Evaluator<'_>, k: usize, restarts: usize, seed: u64) -> ConflictReport {
    let n = eval.pool.len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<(f64, Partition)> = None;
    for restart in 0..=restarts {
        if restart > 0 {
            order.shuffle(&mut rng);
        }
        let mut labels = greedy(eval, &order, k);
        improve(eval, &mut labels, k);
        let p = Partition::from_labels(&labels);
        let total = eval.total(p.assignment(), k);
        let better = match &best {
            None => true,
            Some((b, bp)) => total < *b || (total == *b && p < *bp),
        };
        if better {
            best = Some((total, p));
        }
    }
    let (_, p) = best.expect("at least one restart");
    eval.report(p, true)
}

/// Visits sources in `order`, placing each in the group whose conflict grows
/// least, opening new groups while fewer than `k` exist.
fn greedy(eval: &mut Evaluator<'_>, order: &[usize], k: usize) -> Vec<usize> {
    let n = order.len();
    let mut labels = vec![0; n];
    let mut masks: Vec<u64> = Vec::with_capacity(k);
    for (pos, &src) in order.iter().enumerate() {
        let bit = 1u64 << src;
        let must_open = n - pos == k - masks.len();
        let mut choice = masks.len();
        if !must_open {
            let mut best_delta = f64::INFINITY;
            for (g, &mask) in masks.iter().enumerate() {
                let delta = eval.group(mask | bit) - eval.group(mask);
                if delta < best_delta {
                    best_delta = delta;
                    choice = g;
                }
            }
            if masks.len() < k && eval.group(bit) < best_delta {
                choice = masks.len();
            }
        }
        if choice == masks.len() {
            masks.push(bit);
        } else {
            masks[choice] |= bit;
        }
        labels[src] = choice;
    }
    labels
}

/// First-improvement single-source moves until none lowers the total.
fn improve(eval: &mut Evaluator<'_>, labels: &mut [usize], k: usize) {
    let mut masks = Evaluator::masks(labels, k);
    loop {
        let mut moved = false;
        for (src, label) in labels.iter_mut().enumerate() {
            let bit = 1u64 << src;
            let from = *label;
            if masks[from] == bit {
                continue;
            }
            for to in (0..k).filter(|&g| g != from) {
                let before = eval.group(masks[from]) + eval.group(masks[to]);
                let after = eval.group(masks[from] & !bit) + eval.group(masks[to] | bit);
                if after < before {
                    masks[from] &= !bit;
                    masks[to] |= bit;
                    *label = to;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
}

/// Smallest `k ≤ k_max` whose best partition has total conflict at most
/// `tolerance`; failing that, the `k` with the least total.
pub fn suggest_source_count(
    pool: &EvidencePool,
    k_max: usize,
    tolerance: f64,
) -> Result<(usize, ConflictReport)> {
    check_k(pool, k_max)?;
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::BadConfig(format!(
            "tolerance must be nonnegative, got {tolerance}"
        )));
    }
    let mut fallback: Option<ConflictReport> = None;
    for k in 1..=k_max {
        let report = best_partition(pool, k)?;
        if report.total <= tolerance {
            return Ok((k, report));
        }
        if fallback.as_ref().is_none_or(|f| report.total < f.total) {
            fallback = Some(report);
        }
    }
    let report = fallback.expect("k_max >= 1");
    Ok((report.partition.num_groups(), report))
}
