//! Canonical enumeration of the unordered bipartitions `S|S̄` of `n` parties.
//!
//! Each split is stored by the block that contains party 0, so every unordered
//! split has exactly one representative. Enumeration order is by block size,
//! then lexicographic on the sorted index list.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Default upper limit on the party count accepted by [`enumerate_bipartitions`].
pub const DEFAULT_PARTY_CAP: usize = 16;

/// A split of `{0..n-1}` into `block` (always holding party 0) and its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    block: Vec<usize>,
    n: usize,
}

impl Bipartition {
    /// Builds the canonical split whose one side is `side`.
    ///
    /// `side` may be given in any order and may be either half of the split;
    /// if it does not contain party 0 its complement is stored instead.
    pub fn new(side: &[usize], n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPartition(format!("need at least 2 parties, got {n}")));
        }
        let mut member = vec![false; n];
        for &p in side {
            if p >= n {
                return Err(Error::InvalidPartition(format!("party {p} out of range for n = {n}")));
            }
            if member[p] {
                return Err(Error::InvalidPartition(format!("party {p} listed twice")));
            }
            member[p] = true;
        }
        let count = side.len();
        if count == 0 || count == n {
            return Err(Error::InvalidPartition("block must be a nonempty proper subset".into()));
        }
        if !member[0] {
            member.iter_mut().for_each(|m| *m = !*m);
        }
        let block = (0..n).filter(|&p| member[p]).collect();
        Ok(Self { block, n })
    }

    /// Parties on the side holding party 0, ascending.
    pub fn block(&self) -> &[usize] {
        &self.block
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|p| !self.contains(*p)).collect()
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn contains(&self, party: usize) -> bool {
        self.block.binary_search(&party).is_ok()
    }

    /// Product of local dimensions on each side, `(dim S, dim S̄)`.
    pub fn dims(&self, local_dims: &[usize]) -> (usize, usize) {
        let mut inside = 1;
        let mut outside = 1;
        for (p, &d) in local_dims.iter().enumerate() {
            if self.contains(p) {
                inside *= d;
            } else {
                outside *= d;
            }
        }
        (inside, outside)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.block), join(&self.complement()))
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    /// Parses `"0,2|1,3"`. Both sides must be listed and together cover `0..n`.
    fn from_str(s: &str) -> Result<Self> {
        let (left, right) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidPartition(format!("expected 'S|T', got {s:?}")))?;
        let parse = |part: &str| -> Result<Vec<usize>> {
            part.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad party index {t:?}")))
                })
                .collect()
        };
        let left = parse(left)?;
        let right = parse(right)?;
        let n = left.len() + right.len();
        let mut all: Vec<usize> = left.iter().chain(&right).copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(format!("{s:?} does not cover 0..{n} exactly once")));
        }
        let cut = Bipartition::new(&left, n)?;
        Ok(cut)
    }
}

impl Serialize for Bipartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bipartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All unordered bipartitions of `n` parties, using [`DEFAULT_PARTY_CAP`].
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    enumerate_bipartitions_capped(n, DEFAULT_PARTY_CAP)
}

pub fn enumerate_bipartitions_capped(n: usize, cap: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return domain(format!("bipartitions need n >= 2, got {n}"));
    }
    if n > cap {
        return Err(Error::ResourceCap { n, cap });
    }
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1);
    for size in 1..n {
        // choose the remaining `size - 1` members of the block from 1..n
        let mut pick: Vec<usize> = (1..size).collect();
        loop {
            let mut block = Vec::with_capacity(size);
            block.push(0);
            block.extend_from_slice(&pick);
            out.push(Bipartition { block, n });
            if !next_combination(&mut pick, n) {
                break;
            }
        }
    }
    Ok(out)
}

/// Advances `pick` (strictly increasing, values in `1..n`) to the next
/// combination in lexicographic order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        // largest admissible value at slot i
        let limit = n - (k - i);
        if pick[i] < limit {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of unordered bipartitions from the odd/even binomial sums.
///
/// Kept independent of the enumeration so the two can check each other;
/// both equal `2^(n-1) - 1`.
pub fn cardinality(n: usize) -> Result<u128> {
    if n < 2 {
        return domain(format!("cardinality needs n >= 2, got {n}"));
    }
    if n > 100 {
        return domain(format!("cardinality overflows for n = {n}"));
    }
    let n32 = n as u32;
    let total = if n % 2 == 1 {
        (1..=(n32 - 1) / 2).map(|m| binomial(n32, m)).sum()
    } else {
        (1..=(n32 - 2) / 2).map(|m| binomial(n32, m)).sum::<u128>() + binomial(n32, n32 / 2) / 2
    };
    Ok(total)
}
