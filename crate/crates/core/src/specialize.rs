//! Genus-by-degree counts obtained by setting `u = v = t_i = 1` genus by
//! genus, and the closed formulas for genus 0 and 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::evolution::EngineState;
use crate::series::Rational;

/// Weighted count `G_{d,g}` and marked count `d * G_{d,g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountEntry {
    pub weighted: Rational,
    pub marked: BigInt,
}

/// `G_{d,g}` for `1 <= d <= dmax`, `0 <= g <= (d-1)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    dmax: u32,
    entries: BTreeMap<(u32, u32), CountEntry>,
}

/// Largest genus reachable in degree `d`.
pub fn max_genus(d: u32) -> u32 {
    d.saturating_sub(1) / 2
}

impl CountTable {
    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    pub fn get(&self, d: u32, g: u32) -> Option<&CountEntry> {
        self.entries.get(&(d, g))
    }

    /// `G_{d,g}`, zero outside the stored range.
    pub fn weighted(&self, d: u32, g: u32) -> Rational {
        self.get(d, g)
            .map(|e| e.weighted.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `d * G_{d,g}`, zero outside the stored range.
    pub fn marked(&self, d: u32, g: u32) -> BigInt {
        self.get(d, g)
            .map(|e| e.marked.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Number of rooted hypermaps on `d` darts, all genera.
    pub fn marked_row_sum(&self, d: u32) -> BigInt {
        (0..=max_genus(d)).map(|g| self.marked(d, g)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &CountEntry)> {
        self.entries.iter()
    }
}

/// Collapses every `F_d` to `G_{d,g}` by summing coefficients per genus.
pub fn genus_table(state: &EngineState) -> Result<CountTable> {
    let mut entries = BTreeMap::new();
    for (idx, piece) in state.pieces().iter().enumerate() {
        let d = idx as u32 + 1;
        let mut sums = vec![Rational::zero(); max_genus(d) as usize + 1];
        for (key, c) in piece.iter() {
            let g = key.genus()?;
            let slot = sums.get_mut(g as usize).ok_or_else(|| Error::NonPhysical {
                k: key.k,
                l: key.l,
                profile: key.m.to_string(),
                reason: format!("genus {g} exceeds the maximum {} for d={d}", max_genus(d)),
            })?;
            *slot += c;
        }
        for (g, weighted) in sums.into_iter().enumerate() {
            let marked = &weighted * Rational::from_integer(d.into());
            if !marked.is_integer() {
                return Err(Error::Integrality {
                    d,
                    g: g as u32,
                    value: marked.to_string(),
                });
            }
            entries.insert(
                (d, g as u32),
                CountEntry {
                    weighted,
                    marked: marked.to_integer(),
                },
            );
        }
    }
    Ok(CountTable {
        dmax: state.dmax(),
        entries,
    })
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Rooted planar hypermaps on `d` darts: `3 * 2^(d-1) * (2d)! / (d! (d+2)!)`.
pub fn closed_genus0(d: u32) -> BigInt {
    assert!(d >= 1, "degree starts at 1");
    let num = BigInt::from(3) * BigInt::from(2).pow(d - 1) * factorial(2 * d);
    let den = factorial(d) * factorial(d + 2);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}

/// Rooted genus-1 hypermaps on `d` darts:
/// `(1/3) sum_{i=0}^{d-3} 2^i (4^(d-2-i) - 1) C(d+i, i)`. Zero for `d < 3`.
pub fn closed_genus1(d: u32) -> BigInt {
    if d < 3 {
        return BigInt::zero();
    }
    let sum: BigInt = (0..=d - 3)
        .map(|i| BigInt::from(2).pow(i) * (BigInt::from(4).pow(d - 2 - i) - 1) * binomial(d + i, i))
        .sum();
    let (q, r) = sum.div_rem(&BigInt::from(3));
    debug_assert!(r.is_zero());
    q
}
