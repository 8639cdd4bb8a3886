//! Young diagrams and Maya diagrams.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not decreasing")));
        }
        Ok(Partition(parts))
    }

    /// Drops trailing zeros and validates.
    pub fn from_padded(parts: &[i64]) -> Result<Self> {
        let mut v: Vec<u32> = Vec::new();
        for &x in parts {
            if x < 0 {
                return Err(Error::InvalidPartition(format!("{parts:?} has a negative part")));
            }
            if x > 0 {
                v.push(x as u32);
            }
        }
        if parts.iter().skip_while(|&&x| x > 0).any(|&x| x > 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not decreasing")));
        }
        Self::new(v)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `λ_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let w = self.part(1);
        Partition(
            (1..=w)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn of_weight(n: u32) -> Vec<Partition> {
        fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                go(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of weight at most `w`, by weight then reverse lex.
    pub fn up_to(w: u32) -> Vec<Partition> {
        (0..=w).flat_map(Partition::of_weight).collect()
    }

    /// Canonical ordering: by weight, then reverse lexicographic.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if s.trim().is_empty() || s.trim() == "0" {
            return Ok(Partition::empty());
        }
        let parts: std::result::Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse()).collect();
        Partition::new(parts.map_err(|_| Error::Parse(format!("bad partition {s:?}")))?)
    }
}

/// A downward-cofinite, upward-finite set of integers `T`, stored as the
/// finite part `T ∩ [tail_start, ∞)` together with all of `(-∞, tail_start)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationSet {
    tail_start: i64,
    finite: BTreeSet<i64>,
}

impl ValuationSet {
    pub fn new(tail_start: i64, finite: impl IntoIterator<Item = i64>) -> Self {
        let mut vs = ValuationSet {
            tail_start,
            finite: finite.into_iter().filter(|&v| v >= tail_start).collect(),
        };
        vs.compact();
        vs
    }

    fn compact(&mut self) {
        while self.finite.remove(&self.tail_start) {
            self.tail_start += 1;
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        v < self.tail_start || self.finite.contains(&v)
    }

    /// Every integer below this lies in the set.
    pub fn tail_start(&self) -> i64 {
        self.tail_start
    }

    /// Members at or above `tail_start`, increasing.
    pub fn finite_part(&self) -> impl Iterator<Item = i64> + '_ {
        self.finite.iter().copied()
    }

    /// Members `>= lo`, increasing.
    pub fn members_from(&self, lo: i64) -> Vec<i64> {
        (lo..self.tail_start).chain(self.finite.iter().copied().filter(|&v| v >= lo)).collect()
    }

    /// Largest member, if any member exists (always true).
    pub fn max(&self) -> i64 {
        self.finite.iter().next_back().copied().unwrap_or(self.tail_start - 1)
    }

    /// `#(T ∩ Z≥0) − #(Z<0 − T)`.
    pub fn index(&self) -> i64 {
        let nonneg = self.members_from(0).len() as i64;
        let missing_neg = (self.tail_start.min(0)..0).filter(|&v| !self.contains(v)).count() as i64;
        nonneg - missing_neg
    }

    /// Integers not in the set, below its maximum.
    pub fn gaps(&self) -> Vec<i64> {
        (self.tail_start..self.max()).filter(|&v| !self.contains(v)).collect()
    }

    pub fn shift(&self, n: i64) -> Self {
        ValuationSet::new(self.tail_start + n, self.finite.iter().map(|v| v + n))
    }

    /// The complement `S = Z − T` as a Maya diagram.
    pub fn complement(&self) -> MayaDiagram {
        let top = self.max() + 1;
        MayaDiagram::new(top, (self.tail_start..top).filter(|&v| !self.contains(v)))
    }
}

/// A strictly increasing integer sequence that is eventually consecutive,
/// stored as finite exceptional members below `tail_start` plus
/// `[tail_start, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MayaDiagram {
    tail_start: i64,
    finite: BTreeSet<i64>,
}

impl MayaDiagram {
    pub fn new(tail_start: i64, finite: impl IntoIterator<Item = i64>) -> Self {
        let mut md = MayaDiagram {
            tail_start,
            finite: finite.into_iter().filter(|&v| v < tail_start).collect(),
        };
        while md.finite.remove(&(md.tail_start - 1)) {
            md.tail_start -= 1;
        }
        md
    }

    pub fn vacuum() -> Self {
        MayaDiagram::new(0, [])
    }

    pub fn contains(&self, v: i64) -> bool {
        v >= self.tail_start || self.finite.contains(&v)
    }

    pub fn tail_start(&self) -> i64 {
        self.tail_start
    }

    /// Members below `tail_start`, increasing.
    pub fn exceptional(&self) -> impl Iterator<Item = i64> + '_ {
        self.finite.iter().copied()
    }

    /// `#(S − Z≥0) − #(Z≥0 − S)`.
    pub fn virtual_cardinal(&self) -> i64 {
        let below = self.finite.iter().filter(|&&v| v < 0).count() as i64;
        let missing = (0..self.tail_start.max(0)).filter(|&v| !self.contains(v)).count() as i64;
        below - missing
    }

    /// The complement `Z − S`.
    pub fn complement(&self) -> ValuationSet {
        let lo = self.finite.iter().next().copied().unwrap_or(self.tail_start);
        ValuationSet::new(lo, (lo..self.tail_start).filter(|&v| !self.contains(v)))
    }
}

/// `λ_i = t_i + i − n` with `T` listed decreasingly.
pub fn partition_of_valuations(t: &ValuationSet, n: i64) -> Result<Partition> {
    if t.index() != n {
        return Err(Error::IndexMismatch(format!(
            "valuation set has index {}, expected {n}",
            t.index()
        )));
    }
    let desc: Vec<i64> = t.members_from(t.tail_start() - 1).into_iter().rev().collect();
    let parts: Vec<i64> = desc.iter().enumerate().map(|(i, &v)| v + i as i64 + 1 - n).collect();
    Partition::from_padded(&parts)
}

/// `T = {λ_i − i + n : i ≥ 1}`.
pub fn valuations_of_partition(lambda: &Partition, n: i64) -> ValuationSet {
    let l = lambda.len() as i64;
    ValuationSet::new(
        n - l,
        (1..=l).map(|i| lambda.part(i as usize) as i64 - i + n),
    )
}

pub fn virtual_cardinal(s: &MayaDiagram) -> i64 {
    s.virtual_cardinal()
}
