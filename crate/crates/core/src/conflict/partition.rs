use std::fmt;

/// A grouping of sources in canonical restricted-growth form: source 0 is
/// in group 0, and every later source joins an existing group or opens the
/// next one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    assignment: Vec<usize>,
    groups: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling: groups are renumbered in order
    /// of their smallest member.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap: Vec<(usize, usize)> = Vec::new();
        let assignment = labels
            .iter()
            .map(|&l| match remap.iter().find(|(from, _)| *from == l) {
                Some(&(_, to)) => to,
                None => {
                    let to = remap.len();
                    remap.push((l, to));
                    to
                }
            })
            .collect();
        Partition {
            assignment,
            groups: remap.len(),
        }
    }

    /// Builds from explicit groups of source indices covering `0..n`.
    pub fn from_groups(groups: &[Vec<usize>]) -> Option<Self> {
        let n: usize = groups.iter().map(Vec::len).sum();
        let mut labels = vec![usize::MAX; n];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                if i >= n || labels[i] != usize::MAX {
                    return None;
                }
                labels[i] = g;
            }
        }
        if groups.iter().any(Vec::is_empty) {
            return None;
        }
        Some(Self::from_labels(&labels))
    }

    pub fn single_group(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            groups: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            groups: n,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn num_sources(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_groups(&self) -> usize {
        self.groups
    }

    /// Members of every group, groups ordered by smallest member.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.groups];
        for (i, &g) in self.assignment.iter().enumerate() {
            out[g].push(i);
        }
        out
    }
}

/// Groups written with 1-based source numbers, e.g. `12|34`. Numbers are
/// comma-separated once there are ten or more sources.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.num_sources() >= 10 { "," } else { "" };
        let groups: Vec<String> = self
            .groups()
            .iter()
            .map(|g| {
                g.iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect();
        f.write_str(&groups.join("|"))
    }
}

/// Every partition of `n` sources into exactly `k` nonempty groups, in
/// lexicographic order of their restricted-growth strings.
pub struct Partitions {
    current: Option<Vec<usize>>,
    k: usize,
}

impl Partitions {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k >= 1 && k <= n).then(|| {
            // Lexicographically smallest string using exactly k groups.
            let mut first = vec![0; n];
            for (g, slot) in first[n - k + 1..].iter_mut().enumerate() {
                *slot = g + 1;
            }
            first
        });
        Partitions { current, k }
    }

    /// Next restricted-growth string with values below `k`, regardless of
    /// how many groups it uses.
    fn advance(rgs: &mut [usize], k: usize) -> bool {
        let n = rgs.len();
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(rgs[i - 1]);
        }
        for i in (1..n).rev() {
            if rgs[i] < k - 1 && rgs[i] <= prefix_max[i] {
                rgs[i] += 1;
                for slot in &mut rgs[i + 1..] {
                    *slot = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        self.current = loop {
            if !Self::advance(&mut next, self.k) {
                break None;
            }
            let used = next.iter().max().map_or(0, |m| m + 1);
            if used == self.k {
                break Some(next.clone());
            }
        };
        Some(Partition {
            assignment: out,
            groups: self.k,
        })
    }
}
