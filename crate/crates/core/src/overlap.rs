//! Fusion of two mass functions whose frames only partly overlap.
//!
//! Sensor 1 speaks about Ω₁, sensor 2 about Ω₂, and they share Ω = Ω₁ ∩ Ω₂.
//! The fused assignment lives on U = Ω₁ ∪ Ω₂ and is built so that
//! conditioning it on Ω gives the same answer as conditioning both inputs on
//! Ω and combining them there. For A ⊆ U with A_k = A ∩ Ω_k and A₀ = A ∩ Ω:
//!
//! ```text
//! m(A) = m1(A₁)/m1[Ω](A₀) · m2(A₂)/m2[Ω](A₀) · (m1[Ω] ⊕ m2[Ω])(A₀)
//! ```
//!
//! where conditioning and ⊕ are unnormalized. In words: the mass the
//! conditioned combination puts on A₀ is split across the extensions of A₀
//! in proportion to how each sensor spread its own mass over them.
//!
//! When Ω has two or more elements, the conditioned combination can put mass
//! on an A₀ that neither sensor (or only one) conditioned onto directly, so
//! there is nothing to split it by. Such orphaned mass goes to the least
//! committed extension `A₀ ∪ (Ω₁ \ Ω) ∪ (Ω₂ \ Ω)`, and is reported.
//!
//! More than two sources are fused by folding pairwise.

use std::collections::BTreeMap;

use crate::belief::MAX_FRAME_SIZE;
use crate::{Error, Frame, MassFunction, Result, Subset};

/// Mass that the proportional split could not place.
#[derive(Clone, Debug, PartialEq)]
pub struct Orphan {
    /// The intersection with Ω carrying the mass, in the union frame.
    pub core: Subset,
    /// Where it was sent.
    pub assigned_to: Subset,
    pub mass: f64,
}

#[derive(Clone, Debug)]
pub struct OverlapFusion {
    /// The fused assignment on Ω₁ ∪ Ω₂ (Ω₁'s labels first).
    pub mass: MassFunction,
    /// Ω₁ ∩ Ω₂ as a subset of the union frame.
    pub shared: Subset,
    pub orphans: Vec<Orphan>,
}

impl OverlapFusion {
    pub fn is_orphan_free(&self) -> bool {
        self.orphans.is_empty()
    }
}

/// Union frame with Ω₁'s labels first, plus the index maps of both frames into it.
fn union_frame(f1: &Frame, f2: &Frame) -> Result<(Frame, Vec<usize>, Vec<usize>)> {
    let mut labels: Vec<String> = f1.labels().to_vec();
    let map1: Vec<usize> = (0..f1.len()).collect();
    let mut map2 = Vec::with_capacity(f2.len());
    for label in f2.labels() {
        match f1.index_of(label) {
            Some(i) => map2.push(i),
            None => {
                map2.push(labels.len());
                labels.push(label.clone());
            }
        }
    }
    if labels.len() > MAX_FRAME_SIZE {
        return Err(Error::FrameTooLarge(labels.len()));
    }
    Ok((Frame::new(labels)?, map1, map2))
}

fn lift(set: Subset, map: &[usize]) -> Subset {
    Subset::from_indices(set.indices().map(|i| map[i]))
}

/// Conditioned masses m[Ω](A₀) keyed by A₀.
fn condition_on(focal: &[(Subset, f64)], shared: Subset) -> BTreeMap<Subset, f64> {
    let mut out = BTreeMap::new();
    for &(x, m) in focal {
        *out.entry(x & shared).or_insert(0.0) += m;
    }
    out
}

/// Fuses `m1` (on Ω₁) and `m2` (on Ω₂); labels are matched by name.
pub fn combine_overlapping(m1: &MassFunction, m2: &MassFunction) -> Result<OverlapFusion> {
    let (union, map1, map2) = union_frame(m1.frame(), m2.frame())?;
    let omega1 = lift(m1.frame().full(), &map1);
    let omega2 = lift(m2.frame().full(), &map2);
    let shared = omega1 & omega2;
    if shared.is_empty() {
        return Err(Error::DisjointFrames);
    }
    let private = (omega1 | omega2) - shared;

    let focal1: Vec<(Subset, f64)> = m1
        .focal()
        .iter()
        .map(|&(s, m)| (lift(s, &map1), m))
        .collect();
    let focal2: Vec<(Subset, f64)> = m2
        .focal()
        .iter()
        .map(|&(s, m)| (lift(s, &map2), m))
        .collect();
    let cond1 = condition_on(&focal1, shared);
    let cond2 = condition_on(&focal2, shared);

    let mut joint: BTreeMap<Subset, f64> = BTreeMap::new();
    for (&y, &my) in &cond1 {
        for (&z, &mz) in &cond2 {
            *joint.entry(y & z).or_insert(0.0) += my * mz;
        }
    }

    let mut masses: BTreeMap<Subset, f64> = BTreeMap::new();
    for &(x1, w1) in &focal1 {
        let core = x1 & shared;
        let Some(&k) = joint.get(&core) else { continue };
        let c1 = cond1[&core];
        for &(x2, w2) in focal2.iter().filter(|(x2, _)| *x2 & shared == core) {
            let c2 = cond2[&core];
            *masses.entry(x1 | x2).or_insert(0.0) += (w1 / c1) * (w2 / c2) * k;
        }
    }

    let mut orphans = Vec::new();
    for (&core, &k) in &joint {
        let splittable = cond1.contains_key(&core) && cond2.contains_key(&core);
        if !splittable && k > 0.0 {
            let target = core | private;
            *masses.entry(target).or_insert(0.0) += k;
            orphans.push(Orphan {
                core,
                assigned_to: target,
                mass: k,
            });
        }
    }

    Ok(OverlapFusion {
        mass: MassFunction::from_accumulated(union, masses),
        shared,
        orphans,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bba(labels: &[&str], entries: &[(&[&str], f64)]) -> MassFunction {
        let f = Frame::new(labels.iter().copied()).unwrap();
        let e: Vec<_> = entries
            .iter()
            .map(|(s, m)| (f.subset(s.iter().copied()).unwrap(), *m))
            .collect();
        MassFunction::new(f, e).unwrap()
    }

    fn table5() -> (MassFunction, MassFunction) {
        (
            bba(
                &["A", "B"],
                &[(&["A"], 0.6), (&["B"], 0.1), (&["A", "B"], 0.3)],
            ),
            bba(
                &["B", "C"],
                &[(&["B"], 0.7), (&["C"], 0.2), (&["B", "C"], 0.1)],
            ),
        )
    }

    #[test]
    fn worked_example() {
        let (m1, m2) = table5();
        let fused = combine_overlapping(&m1, &m2).unwrap();
        let m = &fused.mass;
        let f = m.frame();
        assert_eq!(f.labels(), ["A", "B", "C"]);
        let s = |names: &[&str]| f.subset(names.iter().copied()).unwrap();
        let expected = [
            (s(&["B"]), 0.07),
            (s(&["A", "B"]), 0.21),
            (s(&["A", "C"]), 0.68),
            (s(&["B", "C"]), 0.01),
            (s(&["A", "B", "C"]), 0.03),
        ];
        for (set, v) in expected {
            assert!((m.mass(set) - v).abs() < 1e-12, "{}", f.format(set));
        }
        assert_eq!(m.focal().len(), 5);
        assert!(fused.is_orphan_free());
        assert_eq!(fused.shared, s(&["B"]));
    }

    #[test]
    fn identical_frames_reduce_to_conjunctive() {
        let m1 = bba(
            &["a", "b", "c"],
            &[
                (&["a", "b"], 0.5),
                (&["b", "c"], 0.3),
                (&["a", "b", "c"], 0.2),
            ],
        );
        let m2 = bba(
            &["a", "b", "c"],
            &[(&["a"], 0.4), (&["c"], 0.35), (&["a", "b", "c"], 0.25)],
        );
        let fused = combine_overlapping(&m1, &m2).unwrap();
        let direct = m1.conjunctive(&m2).unwrap();
        assert!(fused.mass.max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn vacuous_meets_categorical() {
        let m1 = MassFunction::vacuous(Frame::new(["A", "B"]).unwrap());
        let m2 = bba(&["B", "C"], &[(&["B"], 1.0)]);
        let fused = combine_overlapping(&m1, &m2).unwrap();
        let ab = fused.mass.frame().subset(["A", "B"]).unwrap();
        assert_eq!(fused.mass.focal(), &[(ab, 1.0)]);
    }

    #[test]
    fn disjoint_frames_rejected() {
        let m1 = MassFunction::vacuous(Frame::new(["A"]).unwrap());
        let m2 = MassFunction::vacuous(Frame::new(["B"]).unwrap());
        assert!(matches!(
            combine_overlapping(&m1, &m2),
            Err(Error::DisjointFrames)
        ));
    }

    #[test]
    fn orphan_goes_to_least_committed_extension() {
        // Ω = {B}; sensor 1 is sure of B, sensor 2 sure of C, so the
        // conditioned combination puts everything on ∅, which sensor 1 never
        // conditioned onto.
        let m1 = bba(&["A", "B"], &[(&["B"], 1.0)]);
        let m2 = bba(&["B", "C"], &[(&["C"], 1.0)]);
        let fused = combine_overlapping(&m1, &m2).unwrap();
        let f = fused.mass.frame();
        let ac = f.subset(["A", "C"]).unwrap();
        assert_eq!(fused.orphans.len(), 1);
        assert_eq!(fused.orphans[0].core, Subset::EMPTY);
        assert_eq!(fused.orphans[0].assigned_to, ac);
        assert_eq!(fused.mass.focal(), &[(ac, 1.0)]);
    }

    #[test]
    fn orphan_from_wider_overlap() {
        // Ω = {b, c}. The conditioned combination reaches ∅, {b} and {c}
        // through intersections that neither input conditions onto directly.
        let m1 = bba(&["a", "b", "c"], &[(&["b"], 0.5), (&["a", "b", "c"], 0.5)]);
        let m2 = bba(&["b", "c", "d"], &[(&["c"], 0.5), (&["b", "c", "d"], 0.5)]);
        let fused = combine_overlapping(&m1, &m2).unwrap();
        assert!(!fused.is_orphan_free());
        assert!((fused.mass.total_mass() - 1.0).abs() < 1e-12);
        let restricted = fused.mass.condition(fused.shared);
        let f = fused.mass.frame();
        let bc = f.subset(["b", "c"]).unwrap();
        let empty = restricted.mass(Subset::EMPTY);
        assert!((empty - 0.25).abs() < 1e-12);
        assert!((restricted.mass(bc) - 0.25).abs() < 1e-12);
    }
}
