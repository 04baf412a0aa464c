//! Integer partitions stored as multiplicity vectors `(m_1, m_2, ..., m_r)`.
//!
//! The multiplicity form is what the recursions index into: `m_i` is the
//! number of parts equal to `i`, i.e. the exponent of `t_i` in a monomial.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A partition in canonical multiplicity form (no trailing zeros).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    mult: Vec<u32>,
    weight: u32,
    parts: u32,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from `(m_1, m_2, ...)`; trailing zeros are dropped.
    pub fn from_multiplicities(mut mult: Vec<u32>) -> Self {
        while mult.last() == Some(&0) {
            mult.pop();
        }
        let weight = mult
            .iter()
            .enumerate()
            .map(|(i, &m)| (i as u32 + 1) * m)
            .sum();
        let parts = mult.iter().sum();
        Self {
            mult,
            weight,
            parts,
        }
    }

    /// Builds a partition from a list of parts in any order. Zero parts are ignored.
    pub fn from_parts(parts: &[u32]) -> Self {
        let max = parts.iter().copied().max().unwrap_or(0) as usize;
        let mut mult = vec![0; max];
        for &p in parts.iter().filter(|&&p| p > 0) {
            mult[p as usize - 1] += 1;
        }
        Self::from_multiplicities(mult)
    }

    /// `m_i` for `i >= 1`; zero past the largest part.
    #[inline]
    pub fn multiplicity(&self, i: usize) -> u32 {
        debug_assert!(i >= 1);
        self.mult.get(i.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// `sum_i i * m_i`.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// `sum_i m_i`.
    #[inline]
    pub fn num_parts(&self) -> u32 {
        self.parts
    }

    /// Largest part, or zero for the empty partition.
    #[inline]
    pub fn max_part(&self) -> usize {
        self.mult.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// Parts listed in decreasing order.
    pub fn parts_desc(&self) -> impl Iterator<Item = u32> + '_ {
        self.mult
            .iter()
            .enumerate()
            .rev()
            .flat_map(|(i, &m)| std::iter::repeat_n(i as u32 + 1, m as usize))
    }

    /// Distinct part sizes `i` with `m_i > 0`, increasing.
    pub fn distinct_parts(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
    }

    pub fn add_part(&mut self, i: usize) {
        debug_assert!(i >= 1);
        if self.mult.len() < i {
            self.mult.resize(i, 0);
        }
        self.mult[i - 1] += 1;
        self.weight += i as u32;
        self.parts += 1;
    }

    /// Removes one part equal to `i`; returns `false` (and leaves `self`
    /// untouched) when there is none.
    pub fn remove_part(&mut self, i: usize) -> bool {
        if self.multiplicity(i) == 0 {
            return false;
        }
        self.mult[i - 1] -= 1;
        self.weight -= i as u32;
        self.parts -= 1;
        while self.mult.last() == Some(&0) {
            self.mult.pop();
        }
        true
    }

    /// Applies `m_i += delta` for each `(i, delta)` in order; `None` if some
    /// multiplicity would become negative.
    pub fn adjusted(&self, deltas: &[(usize, i32)]) -> Option<Partition> {
        let mut out = self.clone();
        for &(i, delta) in deltas {
            if delta >= 0 {
                for _ in 0..delta {
                    out.add_part(i);
                }
            } else {
                for _ in 0..(-delta) {
                    if !out.remove_part(i) {
                        return None;
                    }
                }
            }
        }
        Some(out)
    }

    /// Multiset union: multiplicities add.
    pub fn union(&self, other: &Partition) -> Partition {
        let (long, short) = if self.mult.len() >= other.mult.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut mult = long.mult.clone();
        for (slot, &m) in mult.iter_mut().zip(&short.mult) {
            *slot += m;
        }
        Partition {
            mult,
            weight: self.weight + other.weight,
            parts: self.parts + other.parts,
        }
    }

    /// Multiset difference, `None` unless `other` is contained in `self`.
    pub fn difference(&self, other: &Partition) -> Option<Partition> {
        if other.mult.len() > self.mult.len() {
            return None;
        }
        let mut mult = self.mult.clone();
        for (slot, &m) in mult.iter_mut().zip(&other.mult) {
            *slot = slot.checked_sub(m)?;
        }
        Some(Partition::from_multiplicities(mult))
    }

    /// Every sub-multiset `0 <= n <= m` componentwise, in lexicographic order
    /// of the multiplicity vectors.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mut out = vec![Vec::with_capacity(self.mult.len())];
        for &m in &self.mult {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=m).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(Partition::from_multiplicities)
            .collect()
    }

    /// All partitions of `n`, in decreasing lexicographic order of their part lists.
    pub fn all_of_weight(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::from_parts(current));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                current.push(p);
                rec(rest - p, p, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Parses the exponent notation `i^m` joined by commas, e.g. `1^2,3^1`.
    /// Repeated part sizes accumulate.
    pub fn parse_exponents(s: &str) -> Result<Partition, Error> {
        let bad = |why: &str| Error::Parse(format!("profile `{s}`: {why}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = Partition::empty();
        for item in s.split(',') {
            let (part, mult) = item
                .trim()
                .split_once('^')
                .ok_or_else(|| bad("expected `part^multiplicity`"))?;
            let part: usize = part.trim().parse().map_err(|_| bad("bad part size"))?;
            let mult: u32 = mult.trim().parse().map_err(|_| bad("bad multiplicity"))?;
            if part == 0 {
                return Err(bad("part sizes start at 1"));
            }
            for _ in 0..mult {
                out.add_part(part);
            }
        }
        Ok(out)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mult.cmp(&other.mult)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as comma-separated parts in decreasing order, `-` when empty.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (n, p) in self.parts_desc().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| match p.parse::<u32>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(Error::Parse(format!("bad part `{p}` in profile `{s}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "profile `{s}` is not in decreasing order"
            )));
        }
        Ok(Partition::from_parts(&parts))
    }
}
