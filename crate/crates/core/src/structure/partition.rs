use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A partition `λ ⊢ r`: positive parts in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Sorts the parts into nonincreasing order; zero parts are rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadPartition("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::BadPartition(format!("{parts:?} has a zero part")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `ℓ(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The partitioned integer `r`.
    pub fn target(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.parts[0]
    }

    pub fn smallest(&self) -> usize {
        *self.parts.last().unwrap()
    }

    /// Everything except `(r)` is nontrivial.
    pub fn is_nontrivial(&self) -> bool {
        self.parts.len() >= 2
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for IntegerPartition {
    type Err = Error;

    /// Accepts `2,1`, `(2,1)` or `2 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::BadPartition(format!("cannot parse {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        IntegerPartition::new(parts)
    }
}

/// All partitions of `r` whose largest part lies in `[min_largest, max_largest]`,
/// in descending lexicographic order.
pub fn partitions_of(r: usize, min_largest: usize, max_largest: usize) -> Vec<IntegerPartition> {
    fn rec(remaining: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=cap.min(remaining)).rev() {
            cur.push(part);
            rec(remaining - part, part, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    if r >= 1 {
        rec(r, r, &mut Vec::new(), &mut all);
    }
    all.into_iter()
        .filter(|p| (min_largest..=max_largest).contains(&p[0]))
        .map(|parts| IntegerPartition { parts })
        .collect()
}

/// True iff the parts of `lambda` can be subdivided into the parts of `mu`.
pub fn refines(mu: &IntegerPartition, lambda: &IntegerPartition) -> Result<bool> {
    if mu.target() != lambda.target() {
        return Err(Error::TargetMismatch(mu.target(), lambda.target()));
    }
    fn assign(mu: &[usize], capacity: &mut [usize]) -> bool {
        let Some((&part, rest)) = mu.split_first() else {
            return capacity.iter().all(|&c| c == 0);
        };
        for j in 0..capacity.len() {
            // identical remaining capacities are interchangeable
            if capacity[j] >= part && !capacity[..j].contains(&capacity[j]) {
                capacity[j] -= part;
                let ok = assign(rest, capacity);
                capacity[j] += part;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    let mut capacity = lambda.parts().to_vec();
    Ok(assign(mu.parts(), &mut capacity))
}
