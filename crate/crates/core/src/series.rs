//! Sparse polynomials in `u, v, t_1, t_2, ...` over the rationals, graded by
//! the t-weight `d = sum_i i * m_i`.
//!
//! A [`GradedSeries`] stores only nonzero coefficients, keyed by
//! [`MonomialKey`] in a fixed canonical order, and carries a truncation
//! degree: no stored monomial has weight above it, and every operation drops
//! the terms that would. The variable `s` of the generating function is never
//! stored; a monomial of weight `d` implicitly carries `s^d`.
//!
//! Bilinear operations clear denominators first and accumulate over
//! `BigInt`, splitting the left operand across the rayon pool. Exact integer
//! addition is associative, so the result does not depend on the schedule.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

pub type Rational = BigRational;

/// Exponents of one monomial `u^k v^l t_1^{m_1} t_2^{m_2} ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialKey {
    pub k: u32,
    pub l: u32,
    pub m: Partition,
}

impl MonomialKey {
    pub fn new(k: u32, l: u32, m: Partition) -> Self {
        Self { k, l, m }
    }

    pub fn constant() -> Self {
        Self::new(0, 0, Partition::empty())
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.m.weight()
    }

    /// Genus `g` from `2g - 2 = d - (k + l + parts(m))`.
    pub fn genus(&self) -> Result<u32> {
        genus_of(self)
    }

    /// Exponents of the product of two monomials.
    pub fn product(&self, other: &MonomialKey) -> MonomialKey {
        MonomialKey::new(self.k + other.k, self.l + other.l, self.m.union(&other.m))
    }

    fn non_physical(&self, reason: impl Into<String>) -> Error {
        Error::NonPhysical {
            k: self.k,
            l: self.l,
            profile: self.m.to_string(),
            reason: reason.into(),
        }
    }
}

/// Keys compare by `(weight(m), k, l, multiplicities)`.
impl Ord for MonomialKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.k.cmp(&other.k))
            .then(self.l.cmp(&other.l))
            .then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for MonomialKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Genus of a connected monomial, rejecting anything that is not a valid
/// type of a hypermap (`k, l, d >= 1`, non-negative integral genus).
pub fn genus_of(key: &MonomialKey) -> Result<u32> {
    let d = i64::from(key.weight());
    if key.k == 0 || key.l == 0 || d == 0 {
        return Err(key.non_physical("needs k >= 1, l >= 1 and d >= 1"));
    }
    let twice = d - i64::from(key.k) - i64::from(key.l) - i64::from(key.m.num_parts()) + 2;
    if twice < 0 {
        return Err(key.non_physical(format!("negative genus ({twice}/2)")));
    }
    if twice % 2 != 0 {
        return Err(key.non_physical(format!("half-integral genus ({twice}/2)")));
    }
    Ok((twice / 2) as u32)
}

/// Sparse graded polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    terms: BTreeMap<MonomialKey, Rational>,
    truncation: u32,
}

impl GradedSeries {
    pub fn zero(truncation: u32) -> Self {
        Self {
            terms: BTreeMap::new(),
            truncation,
        }
    }

    /// The constant series `1`.
    pub fn one(truncation: u32) -> Self {
        Self::monomial(MonomialKey::constant(), Rational::one(), truncation)
    }

    pub fn monomial(key: MonomialKey, coeff: Rational, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        s.add_term(key, coeff);
        s
    }

    pub fn from_terms<I>(terms: I, truncation: u32) -> Self
    where
        I: IntoIterator<Item = (MonomialKey, Rational)>,
    {
        let mut s = Self::zero(truncation);
        for (key, c) in terms {
            s.add_term(key, c);
        }
        s
    }

    /// Adds `coeff` to the coefficient of `key`. Terms above the truncation
    /// degree are discarded; zero results are removed.
    pub fn add_term(&mut self, key: MonomialKey, coeff: Rational) {
        if coeff.is_zero() || key.weight() > self.truncation {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Overwrites a coefficient (removing it when zero).
    pub fn set_coefficient(&mut self, key: MonomialKey, coeff: Rational) {
        if coeff.is_zero() {
            self.terms.remove(&key);
        } else if key.weight() <= self.truncation {
            self.terms.insert(key, coeff);
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Same terms with a new truncation degree; terms above it are dropped.
    pub fn with_truncation(mut self, truncation: u32) -> Self {
        self.truncation = truncation;
        self.terms.retain(|k, _| k.weight() <= truncation);
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &MonomialKey) -> Option<&Rational> {
        self.terms.get(key)
    }

    pub fn coefficient(&self, key: &MonomialKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical key order.
    pub fn iter(&self) -> impl Iterator<Item = (&MonomialKey, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &MonomialKey> {
        self.terms.keys()
    }

    /// The weight-`d` part.
    pub fn piece(&self, d: u32) -> GradedSeries {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.weight() == d)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        GradedSeries {
            terms,
            truncation: self.truncation,
        }
    }

    /// `Some(d)` when every term has weight `d`; `None` for mixed weights or zero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let first = self.terms.keys().next()?.weight();
        self.terms
            .keys()
            .all(|k| k.weight() == first)
            .then_some(first)
    }

    pub fn add(&self, other: &GradedSeries) -> GradedSeries {
        let truncation = self.truncation.min(other.truncation);
        let mut out = self.clone().with_truncation(truncation);
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GradedSeries) -> GradedSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> GradedSeries {
        if c.is_zero() {
            return GradedSeries::zero(self.truncation);
        }
        GradedSeries {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            truncation: self.truncation,
        }
    }

    /// Product truncated at `min(D_a, D_b)`.
    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let truncation = self.truncation.min(other.truncation);
        let left = IntegralTerms::from_series(self);
        let right = IntegralTerms::from_series(other);
        let acc = bilinear(&left.terms, &right.terms, |(lk, lc), (rk, rc), acc| {
            if lk.weight() + rk.weight() <= truncation {
                accumulate(acc, lk.product(rk), lc * rc);
            }
        });
        finish(acc, &(left.denom * right.denom), truncation)
    }

    /// Formal partial derivative with respect to `t_i`.
    pub fn diff_t(&self, i: usize) -> GradedSeries {
        assert!(i >= 1, "t-variables are indexed from 1");
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let mi = k.m.multiplicity(i);
                if mi == 0 {
                    return None;
                }
                let mut m = k.m.clone();
                m.remove_part(i);
                Some((MonomialKey::new(k.k, k.l, m), c * BigInt::from(mi)))
            })
            .collect();
        GradedSeries {
            terms,
            truncation: self.truncation,
        }
    }

    /// Multiplies every term by `t_i`.
    pub fn mul_t(&self, i: usize) -> GradedSeries {
        assert!(i >= 1, "t-variables are indexed from 1");
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.weight() + i as u32 <= self.truncation)
            .map(|(k, c)| {
                let mut m = k.m.clone();
                m.add_part(i);
                (MonomialKey::new(k.k, k.l, m), c.clone())
            })
            .collect();
        GradedSeries {
            terms,
            truncation: self.truncation,
        }
    }

    /// Multiplies every term by `u^du v^dv`.
    pub fn shift_uv(&self, du: u32, dv: u32) -> GradedSeries {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (MonomialKey::new(k.k + du, k.l + dv, k.m.clone()), c.clone()))
            .collect();
        GradedSeries {
            terms,
            truncation: self.truncation,
        }
    }

    /// Checks the invariants of a connected generating function: every key
    /// has a well-defined genus.
    pub fn check_connected_physical(&self) -> Result<()> {
        self.terms.keys().try_for_each(|k| genus_of(k).map(|_| ()))
    }

    /// Checks the invariants of a partition function: parity of
    /// `k + l + parts(m) - d` on every key and constant term 1.
    pub fn check_disconnected_physical(&self) -> Result<()> {
        for key in self.terms.keys() {
            let excess = key.k + key.l + key.m.num_parts() + key.weight();
            if excess % 2 != 0 {
                return Err(key.non_physical("parity of k + l + parts(m) differs from d"));
            }
        }
        if self.coefficient(&MonomialKey::constant()) != Rational::one() {
            return Err(MonomialKey::constant().non_physical("constant term is not 1"));
        }
        Ok(())
    }

    /// Canonical text form: one line `d k l <profile> <num>/<den>` per term,
    /// in canonical key order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, c) in &self.terms {
            render_term(&mut out, key, c);
        }
        out
    }

    /// Inverse of [`GradedSeries::render`]. Blank lines are skipped.
    pub fn parse(text: &str, truncation: u32) -> Result<GradedSeries> {
        let mut out = GradedSeries::zero(truncation);
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (key, c) = parse_term(line).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", n + 1)),
                other => other,
            })?;
            if key.weight() > truncation {
                return Err(Error::Parse(format!(
                    "line {}: weight {} above truncation {truncation}",
                    n + 1,
                    key.weight()
                )));
            }
            if out.terms.insert(key, c).is_some() {
                return Err(Error::Parse(format!("line {}: duplicate monomial", n + 1)));
            }
        }
        Ok(out)
    }
}

pub(crate) fn render_term(out: &mut String, key: &MonomialKey, c: &Rational) {
    let _ = writeln!(
        out,
        "{} {} {} {} {}/{}",
        key.weight(),
        key.k,
        key.l,
        key.m,
        c.numer(),
        c.denom()
    );
}

pub(crate) fn parse_term(line: &str) -> Result<(MonomialKey, Rational)> {
    let bad = || Error::Parse(format!("malformed term `{line}`"));
    let fields: Vec<&str> = line.split_whitespace().collect();
    let [d, k, l, profile, value] = fields[..] else {
        return Err(bad());
    };
    let d: u32 = d.parse().map_err(|_| bad())?;
    let k: u32 = k.parse().map_err(|_| bad())?;
    let l: u32 = l.parse().map_err(|_| bad())?;
    let m: Partition = profile.parse()?;
    if m.weight() != d {
        return Err(Error::Parse(format!(
            "`{line}`: degree {d} does not match profile weight {}",
            m.weight()
        )));
    }
    let (num, den) = value.split_once('/').ok_or_else(bad)?;
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() || num.is_zero() {
        return Err(bad());
    }
    if !num.gcd(&den).is_one() {
        return Err(Error::Parse(format!(
            "`{line}`: coefficient not in lowest terms"
        )));
    }
    Ok((MonomialKey::new(k, l, m), Rational::new_raw(num, den)))
}

/// A series rewritten as `terms / denom` with integer numerators.
pub(crate) struct IntegralTerms {
    pub denom: BigInt,
    pub terms: Vec<(MonomialKey, BigInt)>,
}

impl IntegralTerms {
    pub fn from_series(s: &GradedSeries) -> Self {
        let denom = s
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = s
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.numer() * (&denom / c.denom())))
            .collect();
        Self { denom, terms }
    }
}

pub(crate) type Accumulator = FxHashMap<MonomialKey, BigInt>;

#[inline]
pub(crate) fn accumulate(acc: &mut Accumulator, key: MonomialKey, value: BigInt) {
    match acc.get_mut(&key) {
        Some(slot) => *slot += value,
        None => {
            acc.insert(key, value);
        }
    }
}

pub(crate) fn merge(mut a: Accumulator, mut b: Accumulator) -> Accumulator {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (k, v) in b {
        accumulate(&mut a, k, v);
    }
    a
}

/// Runs `f` on every pair of terms, splitting `left` across threads.
pub(crate) fn bilinear<T, U, F>(left: &[T], right: &[U], f: F) -> Accumulator
where
    T: Sync,
    U: Sync,
    F: Fn(&T, &U, &mut Accumulator) + Sync,
{
    left.par_iter()
        .with_min_len(8)
        .fold(Accumulator::default, |mut acc, l| {
            for r in right {
                f(l, r, &mut acc);
            }
            acc
        })
        .reduce(Accumulator::default, merge)
}

/// Divides accumulated numerators by `denom` into canonical form.
pub(crate) fn finish(acc: Accumulator, denom: &BigInt, truncation: u32) -> GradedSeries {
    let terms = acc
        .into_iter()
        .filter(|(k, v)| !v.is_zero() && k.weight() <= truncation)
        .map(|(k, v)| (k, Rational::new(v, denom.clone())))
        .collect();
    GradedSeries { terms, truncation }
}
