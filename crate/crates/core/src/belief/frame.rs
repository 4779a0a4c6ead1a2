use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use crate::{Error, Result};

/// Largest frame a [`Subset`] word can index.
pub const MAX_FRAME_SIZE: usize = 64;

/// A set of frame elements packed into one machine word: bit `i` is set when
/// the `i`-th label of the frame is a member.
///
/// A subset carries no reference to its frame; membership only makes sense
/// relative to the [`Frame`] it was built against.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        assert!(index < MAX_FRAME_SIZE, "element index {index} out of range");
        Subset(1 << index)
    }

    /// The subset holding the first `n` elements.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_FRAME_SIZE, "frame size {n} out of range");
        if n == MAX_FRAME_SIZE {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(Subset::EMPTY, |acc, i| acc | Subset::singleton(i))
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Cardinality.
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, index: usize) -> bool {
        index < MAX_FRAME_SIZE && self.0 & (1 << index) != 0
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    /// Member indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// An ordered set of distinct world labels.
///
/// Frames are cheap to clone (the labels live behind an `Arc`) and compare by
/// their label sequence, so two frames built from the same names are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame {
            labels: labels.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The whole frame Ω as a subset.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn contains(&self, subset: Subset) -> bool {
        subset.is_subset_of(self.full())
    }

    /// Errors with [`Error::SubsetOutOfFrame`] unless `subset ⊆ Ω`.
    pub fn check(&self, subset: Subset) -> Result<Subset> {
        if self.contains(subset) {
            Ok(subset)
        } else {
            Err(Error::SubsetOutOfFrame(subset.bits()))
        }
    }

    pub fn singleton(&self, label: &str) -> Result<Subset> {
        self.index_of(label)
            .map(Subset::singleton)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Builds a subset from label names. Repeated names are harmless.
    pub fn subset<I, S>(&self, names: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        names.into_iter().try_fold(Subset::EMPTY, |acc, name| {
            Ok(acc | self.singleton(name.as_ref())?)
        })
    }

    pub fn names(&self, subset: Subset) -> Vec<&str> {
        subset.indices().map(|i| self.label(i)).collect()
    }

    /// Renders a subset as `{A,B}`; the empty set prints as `{}`.
    pub fn format(&self, subset: Subset) -> String {
        format!("{{{}}}", self.names(subset).join(","))
    }

    pub(crate) fn same_as(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}
