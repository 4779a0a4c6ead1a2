use std::collections::BTreeMap;

use super::frame::{Frame, Subset};
use crate::{Error, Result};

/// Tolerance on Σm = 1 accepted at construction.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A basic belief assignment on a finite frame.
///
/// Only focal sets (strictly positive masses) are stored, sorted by bit
/// pattern. Mass on the empty set is allowed: under the open-world reading it
/// measures conflict rather than signalling an invalid assignment.
///
/// Values are immutable; every operation returns a new assignment.
#[derive(Clone, Debug)]
pub struct MassFunction {
    frame: Frame,
    focal: Vec<(Subset, f64)>,
}

impl MassFunction {
    /// Validates and builds an assignment from `(subset, mass)` pairs.
    ///
    /// Zero masses are accepted and dropped. Masses must sum to 1 within
    /// [`SUM_TOLERANCE`]; the result is then rescaled by the computed sum so
    /// decimal rounding in the input does not leak into later algebra.
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (set, mass) in entries {
            frame.check(set)?;
            if !mass.is_finite() || mass < 0.0 {
                return Err(Error::InvalidMass(mass));
            }
            if masses.insert(set, mass).is_some() {
                return Err(Error::DuplicateFocalSet(frame.format(set)));
            }
        }
        let sum: f64 = masses.values().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::MassSum(sum));
        }
        Ok(Self::from_accumulated(frame, masses))
    }

    /// Builds from masses produced by the algebra below. Drops zeros and
    /// rescales unless the sum is already 1 to floating-point resolution.
    pub(crate) fn from_accumulated(frame: Frame, masses: BTreeMap<Subset, f64>) -> Self {
        let mut focal: Vec<(Subset, f64)> = masses.into_iter().filter(|&(_, m)| m > 0.0).collect();
        let sum: f64 = focal.iter().map(|&(_, m)| m).sum();
        let resolution = 4.0 * focal.len() as f64 * f64::EPSILON;
        if sum > 0.0 && (sum - 1.0).abs() > resolution {
            for (_, m) in &mut focal {
                *m /= sum;
            }
        }
        MassFunction { frame, focal }
    }

    /// Total ignorance: m(Ω) = 1.
    pub fn vacuous(frame: Frame) -> Self {
        let full = frame.full();
        MassFunction {
            frame,
            focal: vec![(full, 1.0)],
        }
    }

    /// All mass on one subset (which may be ∅).
    pub fn categorical(frame: Frame, set: Subset) -> Result<Self> {
        frame.check(set)?;
        Ok(MassFunction {
            frame,
            focal: vec![(set, 1.0)],
        })
    }

    /// m(focus) = s, m(Ω) = 1 − s.
    pub fn simple_support(frame: Frame, focus: Subset, s: f64) -> Result<Self> {
        if focus.is_empty() {
            return Err(Error::EmptyFocus);
        }
        frame.check(focus)?;
        check_rate(s)?;
        let full = frame.full();
        let mut masses = BTreeMap::new();
        *masses.entry(focus).or_insert(0.0) += s;
        *masses.entry(full).or_insert(0.0) += 1.0 - s;
        Ok(Self::from_accumulated(frame, masses))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal sets with their masses, ascending by bit pattern.
    pub fn focal(&self) -> &[(Subset, f64)] {
        &self.focal
    }

    pub fn mass(&self, set: Subset) -> f64 {
        self.focal
            .binary_search_by_key(&set, |&(s, _)| s)
            .map_or(0.0, |i| self.focal[i].1)
    }

    /// m(∅).
    pub fn conflict(&self) -> f64 {
        self.mass(Subset::EMPTY)
    }

    pub fn is_vacuous(&self) -> bool {
        self.focal.len() == 1 && self.focal[0].0 == self.frame.full()
    }

    /// Σ m over nonempty focal sets, i.e. 1 − m(∅) without the cancellation.
    fn nonempty_mass(&self) -> f64 {
        self.focal
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|&(_, m)| m)
            .sum()
    }

    /// bel(B) = Σ m(A) over nonempty A ⊆ B.
    pub fn bel(&self, set: Subset) -> f64 {
        self.focal
            .iter()
            .filter(|(a, _)| !a.is_empty() && a.is_subset_of(set))
            .map(|&(_, m)| m)
            .sum()
    }

    /// pl(B) = Σ m(A) over A with A ∩ B ≠ ∅.
    pub fn pl(&self, set: Subset) -> f64 {
        self.focal
            .iter()
            .filter(|(a, _)| a.intersects(set))
            .map(|&(_, m)| m)
            .sum()
    }

    /// Spreads every nonempty focal mass uniformly over its elements after
    /// discarding m(∅).
    pub fn pignistic(&self) -> Result<PignisticDistribution> {
        let denominator = self.nonempty_mass();
        if denominator <= 0.0 {
            return Err(Error::TotalConflict);
        }
        let mut prob = vec![0.0; self.frame.len()];
        for &(set, m) in self.focal.iter().filter(|(s, _)| !s.is_empty()) {
            let share = m / (denominator * set.len() as f64);
            for i in set.indices() {
                prob[i] += share;
            }
        }
        Ok(PignisticDistribution {
            frame: self.frame.clone(),
            prob,
        })
    }

    fn check_frame(&self, other: &MassFunction) -> Result<()> {
        if self.frame.same_as(&other.frame) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    fn pairwise(
        &self,
        other: &MassFunction,
        op: impl Fn(Subset, Subset) -> Subset,
    ) -> Result<Self> {
        self.check_frame(other)?;
        let mut masses = BTreeMap::new();
        for &(x, mx) in &self.focal {
            for &(y, my) in &other.focal {
                *masses.entry(op(x, y)).or_insert(0.0) += mx * my;
            }
        }
        Ok(Self::from_accumulated(self.frame.clone(), masses))
    }

    /// Unnormalized conjunctive combination: m(A) = Σ_{X∩Y=A} m1(X) m2(Y).
    /// Mass landing on ∅ is kept. Follow with [`normalized`](Self::normalized)
    /// for Dempster's rule.
    pub fn conjunctive(&self, other: &MassFunction) -> Result<Self> {
        self.pairwise(other, |x, y| x & y)
    }

    /// Disjunctive combination: m(A) = Σ_{X∪Y=A} m1(X) m2(Y).
    pub fn disjunctive(&self, other: &MassFunction) -> Result<Self> {
        self.pairwise(other, |x, y| x | y)
    }

    /// Conjunctive combination, optionally normalized (Dempster's rule).
    pub fn combine_conjunctive(&self, other: &MassFunction, normalize: bool) -> Result<Self> {
        let combined = self.conjunctive(other)?;
        if normalize {
            combined.normalized()
        } else {
            Ok(combined)
        }
    }

    /// Removes m(∅) and rescales the remaining masses.
    pub fn normalized(&self) -> Result<Self> {
        let denominator = self.nonempty_mass();
        if denominator <= 0.0 {
            return Err(Error::TotalConflict);
        }
        let focal = self
            .focal
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|&(s, m)| (s, m / denominator))
            .collect();
        Ok(MassFunction {
            frame: self.frame.clone(),
            focal,
        })
    }

    /// Unnormalized conditioning on `set`: each focal mass moves to its
    /// intersection with `set` (possibly ∅).
    pub fn condition(&self, set: Subset) -> Self {
        let mut masses = BTreeMap::new();
        for &(x, m) in &self.focal {
            *masses.entry(x & set).or_insert(0.0) += m;
        }
        Self::from_accumulated(self.frame.clone(), masses)
    }

    /// Discounting at reliability `s`: every mass is scaled by `s` and the
    /// remainder goes to Ω.
    pub fn discount(&self, s: f64) -> Result<Self> {
        check_rate(s)?;
        let full = self.frame.full();
        let mut masses = BTreeMap::new();
        for &(x, m) in &self.focal {
            *masses.entry(x).or_insert(0.0) += s * m;
        }
        *masses.entry(full).or_insert(0.0) += 1.0 - s;
        Ok(Self::from_accumulated(self.frame.clone(), masses))
    }

    /// Largest per-set absolute difference; `None` on different frames.
    pub fn max_abs_diff(&self, other: &MassFunction) -> Option<f64> {
        if !self.frame.same_as(&other.frame) {
            return None;
        }
        let sets = self.focal.iter().chain(&other.focal).map(|&(s, _)| s);
        Some(
            sets.map(|s| (self.mass(s) - other.mass(s)).abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.focal.iter().map(|&(_, m)| m).sum()
    }
}

/// Left fold of conjunctive combination over any number of assignments.
pub fn combine_all<'a, I>(masses: I, normalize: bool) -> Result<MassFunction>
where
    I: IntoIterator<Item = &'a MassFunction>,
{
    let mut iter = masses.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::BadConfig("nothing to combine".into()))?
        .clone();
    let combined = iter.try_fold(first, |acc, m| acc.conjunctive(m))?;
    if normalize {
        combined.normalized()
    } else {
        Ok(combined)
    }
}

fn check_rate(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::RateOutOfRange(s))
    }
}

/// The betting distribution derived from a mass function.
#[derive(Clone, Debug)]
pub struct PignisticDistribution {
    frame: Frame,
    prob: Vec<f64>,
}

impl PignisticDistribution {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.prob
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.prob[index]
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.frame.index_of(label).map(|i| self.prob[i])
    }

    /// Index of the most probable element; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.prob.iter().enumerate().skip(1) {
            if p > self.prob[best] {
                best = i;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(labels: &[&str]) -> Frame {
        Frame::new(labels.iter().copied()).unwrap()
    }

    fn table6() -> (Frame, Vec<MassFunction>) {
        let f = frame(&["C1", "C2"]);
        let c1 = Subset::singleton(0);
        let c2 = Subset::singleton(1);
        let ms = vec![
            MassFunction::simple_support(f.clone(), c1, 0.7).unwrap(),
            MassFunction::simple_support(f.clone(), c1, 0.8).unwrap(),
            MassFunction::simple_support(f.clone(), c2, 0.6).unwrap(),
            MassFunction::simple_support(f.clone(), c2, 0.9).unwrap(),
        ];
        (f, ms)
    }

    /// Combined assignment m from the overlapping-frames worked example.
    fn table5_combined() -> (Frame, MassFunction) {
        let f = frame(&["A", "B", "C"]);
        let s = |names: &[&str]| f.subset(names.iter().copied()).unwrap();
        let m = MassFunction::new(
            f.clone(),
            [
                (s(&["B"]), 0.07),
                (s(&["A", "B"]), 0.21),
                (s(&["A", "C"]), 0.68),
                (s(&["B", "C"]), 0.01),
                (s(&["A", "B", "C"]), 0.03),
            ],
        )
        .unwrap();
        (f, m)
    }

    #[test]
    fn construction_rejects_bad_input() {
        let f = frame(&["a", "b"]);
        let a = Subset::singleton(0);
        assert!(matches!(
            MassFunction::new(f.clone(), [(a, 0.5)]),
            Err(Error::MassSum(_))
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(a, -0.1), (f.full(), 1.1)]),
            Err(Error::InvalidMass(_))
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(a, 0.5), (a, 0.5)]),
            Err(Error::DuplicateFocalSet(_))
        ));
        assert!(matches!(
            MassFunction::new(f.clone(), [(Subset::singleton(2), 1.0)]),
            Err(Error::SubsetOutOfFrame(_))
        ));
        let m =
            MassFunction::new(f, [(a, 0.6), (Subset::EMPTY, 0.0), (Subset::full(2), 0.4)]).unwrap();
        assert_eq!(m.focal().len(), 2);
    }

    #[test]
    fn construction_rescales_rounded_input() {
        let f = frame(&["a", "b"]);
        let m = MassFunction::new(
            f.clone(),
            [(Subset::singleton(0), 0.6 + 5e-10), (f.full(), 0.4)],
        )
        .unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn simple_support_cases() {
        let (f, ms) = table6();
        assert_eq!(ms[0].mass(Subset::singleton(0)), 0.7);
        assert!((ms[0].mass(f.full()) - 0.3).abs() < 1e-15);

        let m = MassFunction::simple_support(f.clone(), f.full(), 0.4).unwrap();
        assert!(m.is_vacuous());
        assert_eq!(m.mass(f.full()), 1.0);

        let g = frame(&["A", "B", "C"]);
        let m =
            MassFunction::simple_support(g.clone(), g.subset(["A", "B"]).unwrap(), 0.0).unwrap();
        assert!(m.is_vacuous());

        assert!(matches!(
            MassFunction::simple_support(g.clone(), Subset::EMPTY, 0.5),
            Err(Error::EmptyFocus)
        ));
        assert!(matches!(
            MassFunction::simple_support(g, Subset::singleton(0), 1.5),
            Err(Error::RateOutOfRange(_))
        ));
    }

    #[test]
    fn bel_values() {
        let (f, m) = table5_combined();
        let ac = f.subset(["A", "C"]).unwrap();
        assert!((m.bel(ac) - 0.68).abs() < 1e-12);
        assert_eq!(m.bel(Subset::EMPTY), 0.0);
        let (_, ms) = table6();
        assert_eq!(ms[0].bel(Subset::singleton(0)), 0.7);
    }

    #[test]
    fn bel_excludes_empty_mass() {
        let f = frame(&["a", "b"]);
        let m = MassFunction::new(f.clone(), [(Subset::EMPTY, 0.25), (f.full(), 0.75)]).unwrap();
        assert_eq!(m.bel(f.full()), 0.75);
    }

    #[test]
    fn pl_values() {
        let (f, m) = table5_combined();
        assert!((m.pl(f.singleton("C").unwrap()) - 0.72).abs() < 1e-12);
        assert!((m.pl(f.singleton("A").unwrap()) - 0.92).abs() < 1e-12);
        assert_eq!(m.pl(Subset::EMPTY), 0.0);
    }

    #[test]
    fn pignistic_values() {
        let (_, m) = table5_combined();
        let betp = m.pignistic().unwrap();
        // .07/1 + .21/2 + .01/2 + .03/3 = .19 for B; A and C likewise.
        assert!((betp.get("A").unwrap() - 0.455).abs() < 1e-12);
        assert!((betp.get("B").unwrap() - 0.190).abs() < 1e-12);
        assert!((betp.get("C").unwrap() - 0.355).abs() < 1e-12);

        let f = frame(&["a", "b", "c", "d"]);
        let u = MassFunction::vacuous(f).pignistic().unwrap();
        assert!(u.probabilities().iter().all(|&p| (p - 0.25).abs() < 1e-15));

        let f = frame(&["a", "b"]);
        let m =
            MassFunction::new(f.clone(), [(Subset::singleton(0), 0.6), (f.full(), 0.4)]).unwrap();
        let betp = m.pignistic().unwrap();
        assert!((betp.prob(0) - 0.8).abs() < 1e-15);
        assert!((betp.prob(1) - 0.2).abs() < 1e-15);

        let dead = MassFunction::categorical(f, Subset::EMPTY).unwrap();
        assert!(matches!(dead.pignistic(), Err(Error::TotalConflict)));
    }

    #[test]
    fn pignistic_ignores_empty_mass() {
        let f = frame(&["a", "b"]);
        let m = MassFunction::new(
            f.clone(),
            [
                (Subset::EMPTY, 0.5),
                (Subset::singleton(0), 0.3),
                (f.full(), 0.2),
            ],
        )
        .unwrap();
        let betp = m.pignistic().unwrap();
        assert!((betp.prob(0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn conjunctive_table6_pairs() {
        let (f, ms) = table6();
        let m13 = ms[0].conjunctive(&ms[2]).unwrap();
        assert!((m13.conflict() - 0.42).abs() < 1e-12);
        assert!((m13.mass(Subset::singleton(0)) - 0.28).abs() < 1e-12);
        assert!((m13.mass(Subset::singleton(1)) - 0.18).abs() < 1e-12);
        assert!((m13.mass(f.full()) - 0.12).abs() < 1e-12);

        let m12 = ms[0].conjunctive(&ms[1]).unwrap();
        assert!((m12.mass(Subset::singleton(0)) - 0.94).abs() < 1e-12);
        assert!((m12.mass(f.full()) - 0.06).abs() < 1e-12);
        assert_eq!(m12.conflict(), 0.0);
    }

    #[test]
    fn conjunctive_vacuous_is_neutral() {
        let (f, ms) = table6();
        let v = MassFunction::vacuous(f);
        let m = ms[2].conjunctive(&v).unwrap();
        assert_eq!(m.focal(), ms[2].focal());
    }

    #[test]
    fn dempster_normalization() {
        let (_, ms) = table6();
        let m = ms[0].combine_conjunctive(&ms[2], true).unwrap();
        assert_eq!(m.conflict(), 0.0);
        assert!((m.mass(Subset::singleton(0)) - 0.28 / 0.58).abs() < 1e-12);

        let f = frame(&["a", "b"]);
        let a = MassFunction::categorical(f.clone(), Subset::singleton(0)).unwrap();
        let b = MassFunction::categorical(f, Subset::singleton(1)).unwrap();
        assert!(matches!(
            a.combine_conjunctive(&b, true),
            Err(Error::TotalConflict)
        ));
    }

    #[test]
    fn frame_mismatch() {
        let a = MassFunction::vacuous(frame(&["a", "b"]));
        let b = MassFunction::vacuous(frame(&["a", "c"]));
        assert!(matches!(a.conjunctive(&b), Err(Error::FrameMismatch)));
        assert!(matches!(a.disjunctive(&b), Err(Error::FrameMismatch)));
    }

    #[test]
    fn disjunctive_cases() {
        let f = frame(&["a", "b", "c"]);
        let m1 = MassFunction::simple_support(f.clone(), Subset::singleton(0), 0.7).unwrap();
        let m2 = MassFunction::simple_support(f.clone(), Subset::singleton(1), 0.6).unwrap();
        let m = m1.disjunctive(&m2).unwrap();
        assert!((m.mass(Subset::from_indices([0, 1])) - 0.42).abs() < 1e-12);
        assert!((m.mass(f.full()) - 0.58).abs() < 1e-12);
        assert_eq!(m.focal().len(), 2);

        let v = MassFunction::vacuous(f.clone());
        assert!(m1.disjunctive(&v).unwrap().is_vacuous());

        let a = MassFunction::categorical(f, Subset::singleton(0)).unwrap();
        assert_eq!(a.disjunctive(&a).unwrap().focal(), a.focal());
    }

    #[test]
    fn condition_cases() {
        let f = frame(&["A", "B"]);
        let s = |names: &[&str]| f.subset(names.iter().copied()).unwrap();
        let m1 = MassFunction::new(
            f.clone(),
            [(s(&["A"]), 0.6), (s(&["B"]), 0.1), (s(&["A", "B"]), 0.3)],
        )
        .unwrap();
        let c = m1.condition(s(&["B"]));
        assert!((c.mass(s(&["B"])) - 0.4).abs() < 1e-12);
        assert!((c.conflict() - 0.6).abs() < 1e-12);

        let g = frame(&["B", "C"]);
        let t = |names: &[&str]| g.subset(names.iter().copied()).unwrap();
        let m2 = MassFunction::new(
            g.clone(),
            [(t(&["B"]), 0.7), (t(&["C"]), 0.2), (t(&["B", "C"]), 0.1)],
        )
        .unwrap();
        let c = m2.condition(t(&["B"]));
        assert!((c.mass(t(&["B"])) - 0.8).abs() < 1e-12);
        assert!((c.conflict() - 0.2).abs() < 1e-12);

        assert_eq!(m1.condition(f.full()).focal(), m1.focal());
        assert_eq!(m1.condition(Subset::EMPTY).conflict(), 1.0);
    }

    #[test]
    fn discount_cases() {
        let f = frame(&["a", "b"]);
        let m =
            MassFunction::new(f.clone(), [(Subset::singleton(0), 0.6), (f.full(), 0.4)]).unwrap();
        let d = m.discount(0.5).unwrap();
        assert!((d.mass(Subset::singleton(0)) - 0.3).abs() < 1e-15);
        assert!((d.mass(f.full()) - 0.7).abs() < 1e-15);
        assert_eq!(m.discount(1.0).unwrap().focal(), m.focal());
        assert!(m.discount(0.0).unwrap().is_vacuous());
        assert!(matches!(m.discount(-0.1), Err(Error::RateOutOfRange(_))));
        assert!(matches!(
            m.discount(f64::NAN),
            Err(Error::RateOutOfRange(_))
        ));
    }

    #[test]
    fn argmax_breaks_ties_low() {
        let f = frame(&["A", "B", "C"]);
        let m =
            MassFunction::simple_support(f.clone(), f.subset(["A", "B"]).unwrap(), 0.8).unwrap();
        let betp = m.pignistic().unwrap();
        assert_eq!(betp.prob(0), betp.prob(1));
        assert_eq!(betp.argmax(), 0);
    }

    #[test]
    fn combine_all_folds() {
        let (_, ms) = table6();
        let m = combine_all(&ms, false).unwrap();
        assert!((m.conflict() - 0.9).abs() < 0.005);
        assert!(combine_all(std::iter::empty(), false).is_err());
    }
}
