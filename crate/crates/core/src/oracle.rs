//! Brute-force recount of hypermaps as pairs of permutations.
//!
//! A hypermap on `d` darts is a pair `(sigma, tau)` in `S_d x S_d` generating
//! a transitive group. Labelled pairs with `sigma` having `k` cycles, `tau`
//! having `l` cycles and `sigma tau` of cycle type `m` number exactly
//! `d! * N_{k,l}(m)`. Nothing here touches the generating function.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::evolution::EngineState;
use crate::partition::Partition;
use crate::series::{GradedSeries, MonomialKey, Rational};

/// Largest degree enumerated over all of `S_d x S_d`.
pub const MAX_FULL_DEGREE: u32 = 7;
/// Largest degree enumerated with `sigma` reduced to class representatives.
pub const MAX_CLASS_DEGREE: u32 = 9;

const MAX_DEGREE: usize = MAX_CLASS_DEGREE as usize;

/// A bijection of `{0, ..., d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Self {
            images: (0..d).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        Ok(Self { images })
    }

    /// Builds a permutation of `{0, ..., d-1}` from disjoint cycles.
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..d).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= d {
                    return Err(Error::InvalidPermutation(format!(
                        "{x} out of range for d={d}"
                    )));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self * other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    /// Cycle lengths as a multiplicity vector.
    pub fn cycle_type(&self) -> Partition {
        let mut lengths = Vec::new();
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_parts(&lengths)
    }

    pub fn cycle_count(&self) -> u32 {
        self.cycle_type().num_parts()
    }

    /// A permutation whose cycle type is `p`, cycles laid out consecutively.
    pub fn with_cycle_type(p: &Partition) -> Permutation {
        let d = p.weight() as usize;
        let mut images = vec![0; d];
        let mut start = 0;
        for len in p.parts_desc() {
            let len = len as usize;
            for i in 0..len {
                images[start + i] = start + (i + 1) % len;
            }
            start += len;
        }
        Permutation { images }
    }
}

/// Whether `<a, b>` acts transitively on `{0, ..., d-1}`.
pub fn is_transitive(a: &Permutation, b: &Permutation) -> bool {
    assert_eq!(a.degree(), b.degree());
    let d = a.degree();
    if d == 0 {
        return true;
    }
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(x) = stack.pop() {
        for y in [a.apply(x), b.apply(x)] {
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                stack.push(y);
            }
        }
    }
    reached == d
}

/// Which permutation is binned as the face profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceConvention {
    /// `sigma * tau`
    Product,
    /// `sigma * tau^{-1}`
    ProductWithInverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every `sigma` in `S_d`.
    Full,
    /// One `sigma` per conjugacy class, weighted by the class size.
    ClassReduced,
}

impl Strategy {
    /// Full enumeration up to [`MAX_FULL_DEGREE`], class reduction beyond.
    pub fn for_degree(d: u32) -> Strategy {
        if d <= MAX_FULL_DEGREE {
            Strategy::Full
        } else {
            Strategy::ClassReduced
        }
    }

    pub fn max_degree(self) -> u32 {
        match self {
            Strategy::Full => MAX_FULL_DEGREE,
            Strategy::ClassReduced => MAX_CLASS_DEGREE,
        }
    }
}

/// Labelled transitive-pair counts in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTable {
    pub d: u32,
    pub counts: BTreeMap<MonomialKey, BigUint>,
}

impl OracleTable {
    /// Number of transitive pairs in `S_d x S_d`.
    pub fn total_pairs(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `N_{k,l}(m) = count / d!`.
    pub fn weighted(&self, key: &MonomialKey) -> Rational {
        let count = self.counts.get(key).cloned().unwrap_or_default();
        Rational::new(BigInt::from(count), factorial(self.d))
    }

    /// The counts as the weight-`d` piece of a series.
    pub fn to_series(&self) -> GradedSeries {
        GradedSeries::from_terms(
            self.counts.keys().map(|k| (k.clone(), self.weighted(k))),
            self.d,
        )
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

/// Fixed-size permutation used in the inner loop.
#[derive(Clone, Copy)]
struct Perm {
    img: [u8; MAX_DEGREE],
}

impl Perm {
    fn from(p: &Permutation) -> Self {
        let mut img = [0; MAX_DEGREE];
        for (x, &y) in p.images().iter().enumerate() {
            img[x] = y as u8;
        }
        Perm { img }
    }
}

/// Every permutation of `{0, ..., d-1}` in lexicographic order.
fn all_permutations(d: usize) -> Vec<Perm> {
    let mut current: Vec<u8> = (0..d as u8).collect();
    let mut out = Vec::new();
    loop {
        let mut img = [0; MAX_DEGREE];
        img[..d].copy_from_slice(&current);
        out.push(Perm { img });
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Cycle-type multiplicities packed four bits per length, plus the cycle count.
#[inline]
fn packed_cycle_type(p: &Perm, d: usize) -> (u64, u32) {
    let mut seen = 0u16;
    let mut packed = 0u64;
    let mut cycles = 0;
    for start in 0..d {
        if seen & (1 << start) != 0 {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while seen & (1 << x) == 0 {
            seen |= 1 << x;
            x = p.img[x] as usize;
            len += 1;
        }
        packed += 1 << (4 * (len - 1));
        cycles += 1;
    }
    (packed, cycles)
}

fn unpack_cycle_type(packed: u64) -> Partition {
    let mult = (0..MAX_DEGREE)
        .map(|i| ((packed >> (4 * i)) & 0xf) as u32)
        .collect();
    Partition::from_multiplicities(mult)
}

/// Bitmask of the cycle containing each point.
fn orbit_masks(p: &Perm, d: usize) -> [u16; MAX_DEGREE] {
    let mut masks = [0u16; MAX_DEGREE];
    for start in 0..d {
        if masks[start] != 0 {
            continue;
        }
        let mut mask = 0u16;
        let mut x = start;
        while mask & (1 << x) == 0 {
            mask |= 1 << x;
            x = p.img[x] as usize;
        }
        let mut x = start;
        loop {
            masks[x] = mask;
            x = p.img[x] as usize;
            if x == start {
                break;
            }
        }
    }
    masks
}

struct TauInfo {
    perm: Perm,
    inverse: Perm,
    cycles: u32,
    masks: [u16; MAX_DEGREE],
}

/// Counts transitive pairs with the first permutation fixed.
fn count_for_sigma(
    sigma: &Perm,
    taus: &[TauInfo],
    d: usize,
    convention: FaceConvention,
) -> FxHashMap<(u32, u32, u64), u64> {
    let (_, k) = packed_cycle_type(sigma, d);
    let sigma_masks = orbit_masks(sigma, d);
    let full: u16 = ((1u32 << d) - 1) as u16;
    let mut counts = FxHashMap::default();
    for tau in taus {
        // orbit of 0 under <sigma, tau>, grown cycle by cycle
        let mut reached = sigma_masks[0];
        loop {
            let mut next = reached;
            let mut rest = reached;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= tau.masks[x] | sigma_masks[x];
            }
            if next == reached {
                break;
            }
            reached = next;
        }
        if reached != full {
            continue;
        }
        let second = match convention {
            FaceConvention::Product => &tau.perm,
            FaceConvention::ProductWithInverse => &tau.inverse,
        };
        let mut product = Perm {
            img: [0; MAX_DEGREE],
        };
        for x in 0..d {
            product.img[x] = sigma.img[second.img[x] as usize];
        }
        let (faces, _) = packed_cycle_type(&product, d);
        *counts.entry((k, tau.cycles, faces)).or_insert(0) += 1;
    }
    counts
}

/// Enumerates labelled transitive pairs in degree `d`, binned by
/// `(cycles of sigma, cycles of tau, cycle type of the face permutation)`.
pub fn enumerate_counts(d: u32, strategy: Strategy) -> Result<OracleTable> {
    enumerate_counts_with(d, strategy, FaceConvention::Product)
}

pub fn enumerate_counts_with(
    d: u32,
    strategy: Strategy,
    convention: FaceConvention,
) -> Result<OracleTable> {
    if d == 0 || d > strategy.max_degree() {
        return Err(Error::OracleBudget {
            d,
            max: strategy.max_degree(),
        });
    }
    let n = d as usize;
    let perms = all_permutations(n);
    let taus: Vec<TauInfo> = perms
        .iter()
        .map(|p| {
            let mut inverse = Perm {
                img: [0; MAX_DEGREE],
            };
            for x in 0..n {
                inverse.img[p.img[x] as usize] = x as u8;
            }
            TauInfo {
                perm: *p,
                inverse,
                cycles: packed_cycle_type(p, n).1,
                masks: orbit_masks(p, n),
            }
        })
        .collect();

    // (sigma, multiplicity)
    let sigmas: Vec<(Perm, u64)> = match strategy {
        Strategy::Full => perms.iter().map(|p| (*p, 1)).collect(),
        Strategy::ClassReduced => Partition::all_of_weight(d)
            .iter()
            .map(|p| (Perm::from(&Permutation::with_cycle_type(p)), class_size(p)))
            .collect(),
    };

    let merged = sigmas
        .par_iter()
        .map(|(sigma, weight)| {
            let mut counts = count_for_sigma(sigma, &taus, n, convention);
            if *weight != 1 {
                counts.values_mut().for_each(|c| *c *= weight);
            }
            counts
        })
        .reduce(FxHashMap::default, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let counts = merged
        .into_iter()
        .map(|((k, l, faces), c)| {
            (
                MonomialKey::new(k, l, unpack_cycle_type(faces)),
                BigUint::from(c),
            )
        })
        .collect();
    Ok(OracleTable { d, counts })
}

/// Size of the conjugacy class of cycle type `p`: `d! / prod_i i^{m_i} m_i!`.
pub fn class_size(p: &Partition) -> u64 {
    let centralizer = p
        .distinct_parts()
        .map(|(i, m)| factorial(m) * BigInt::from(i).pow(m))
        .fold(BigInt::from(1), |acc, x| acc * x);
    (factorial(p.weight()) / centralizer)
        .to_u64()
        .expect("class size fits in u64")
}

/// One key on which the engine and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub key: MonomialKey,
    pub engine: Rational,
    pub oracle: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleDiff {
    pub d: u32,
    pub total_pairs: BigUint,
    pub mismatches: Vec<Mismatch>,
}

impl OracleDiff {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `F_d` with the brute-force table, key by key.
pub fn compare_with_engine(state: &EngineState, d: u32) -> Result<OracleDiff> {
    let piece = state.piece(d).ok_or(Error::OutOfTruncation {
        requested: d,
        dmax: state.dmax(),
    })?;
    let table = enumerate_counts(d, Strategy::for_degree(d))?;
    Ok(diff_against(piece, &table))
}

/// Key-by-key difference between a weight-`d` piece and an oracle table.
pub fn diff_against(piece: &GradedSeries, table: &OracleTable) -> OracleDiff {
    let oracle = table.to_series();
    let mut keys: Vec<&MonomialKey> = piece.keys().chain(oracle.keys()).collect();
    keys.sort();
    keys.dedup();
    let mismatches = keys
        .into_iter()
        .filter_map(|key| {
            let engine = piece.coefficient(key);
            let expected = oracle.coefficient(key);
            (engine != expected).then(|| Mismatch {
                key: key.clone(),
                engine,
                oracle: expected,
            })
        })
        .collect();
    OracleDiff {
        d: table.d,
        total_pairs: table.total_pairs(),
        mismatches,
    }
}
