//! Degree-by-degree construction of the generating function
//! `F = sum_d s^d F_d(u, v, t_1, t_2, ...)` of weighted hypermap counts.
//!
//! The operators
//!
//! ```text
//! L1 F = sum_{i>=2} (i-1) t_i dF/dt_{i-1}
//! M1 F = sum_{i>=2} sum_{j=1}^{i-1} (i-1) t_j t_{i-j} dF/dt_{i-1}
//!                                 + j(i-j) t_{i+1} d^2F/dt_j dt_{i-j}
//! Q1(A, B) = sum_{i>=2} sum_{j=1}^{i-1} j(i-j) t_{i+1} dA/dt_j dB/dt_{i-j}
//! ```
//!
//! drive the recursion
//!
//! ```text
//! d F_d = ((u+v) L1 + M1) F_{d-1} + sum_{n=1}^{d-2} Q1(F_n, F_{d-1-n}),   F_1 = u v t_1.
//! ```
//!
//! [`coeff_recursion_rhs`] evaluates the same identity coefficient by
//! coefficient and is kept as an independent cross-check of the operator path.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::series::{
    accumulate, bilinear, finish, merge, Accumulator, GradedSeries, IntegralTerms, MonomialKey,
    Rational,
};

/// `u v t_1`, the unique degree-1 hypermap.
pub fn seed() -> GradedSeries {
    GradedSeries::monomial(
        MonomialKey::new(1, 1, Partition::from_parts(&[1])),
        Rational::one(),
        1,
    )
}

/// Applies a per-term linear map, accumulating over integers.
fn linear<F>(a: &GradedSeries, truncation: u32, f: F) -> GradedSeries
where
    F: Fn(&MonomialKey, &BigInt, &mut Accumulator) + Sync,
{
    let src = IntegralTerms::from_series(a);
    let acc = src
        .terms
        .par_iter()
        .with_min_len(16)
        .fold(Accumulator::default, |mut acc, (k, c)| {
            f(k, c, &mut acc);
            acc
        })
        .reduce(Accumulator::default, merge);
    finish(acc, &src.denom, truncation)
}

/// `L1 a`: raises the weight by exactly one.
pub fn apply_l1(a: &GradedSeries) -> GradedSeries {
    linear(a, a.truncation() + 1, |key, c, acc| {
        for (r, mr) in key.m.distinct_parts() {
            // (i-1) t_i d/dt_{i-1} with r = i-1
            let mut m = key.m.clone();
            m.remove_part(r);
            m.add_part(r + 1);
            accumulate(
                acc,
                MonomialKey::new(key.k, key.l, m),
                c * BigInt::from(r as u64 * u64::from(mr)),
            );
        }
    })
}

/// `M1 a`: raises the weight by exactly one.
pub fn apply_m1(a: &GradedSeries) -> GradedSeries {
    linear(a, a.truncation() + 1, |key, c, acc| {
        let distinct: Vec<(usize, u32)> = key.m.distinct_parts().collect();
        // cut: (i-1) t_j t_{i-j} d/dt_{i-1}, r = i-1, j = 1..=r
        for &(r, mr) in &distinct {
            let factor = c * BigInt::from(r as u64 * u64::from(mr));
            let mut base = key.m.clone();
            base.remove_part(r);
            for j in 1..=r {
                let mut m = base.clone();
                m.add_part(j);
                m.add_part(r + 1 - j);
                accumulate(acc, MonomialKey::new(key.k, key.l, m), factor.clone());
            }
        }
        // join: j(i-j) t_{i+1} d^2/dt_j dt_{i-j} over ordered (j, j')
        for &(j, mj) in &distinct {
            for &(jp, mjp) in &distinct {
                let second = if j == jp { mjp - 1 } else { mjp };
                if second == 0 {
                    continue;
                }
                let mut m = key.m.clone();
                m.remove_part(j);
                m.remove_part(jp);
                m.add_part(j + jp + 1);
                let factor = (j * jp) as u64 * u64::from(mj) * u64::from(second);
                accumulate(
                    acc,
                    MonomialKey::new(key.k, key.l, m),
                    c * BigInt::from(factor),
                );
            }
        }
    })
}

/// All first derivatives of `terms`, as `(j, key without one t_j, coeff * m_j)`.
fn first_derivatives(terms: &[(MonomialKey, BigInt)]) -> Vec<(usize, MonomialKey, BigInt)> {
    let mut out = Vec::new();
    for (key, c) in terms {
        for (j, mj) in key.m.distinct_parts() {
            let mut m = key.m.clone();
            m.remove_part(j);
            out.push((j, MonomialKey::new(key.k, key.l, m), c * BigInt::from(mj)));
        }
    }
    out
}

/// `Q1(a, b)`: weight `d_a + d_b + 1` on homogeneous inputs. Symmetric in its
/// arguments.
pub fn apply_q1_pair(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    let truncation = a.truncation() + b.truncation() + 1;
    let left = IntegralTerms::from_series(a);
    let right = IntegralTerms::from_series(b);
    let da = first_derivatives(&left.terms);
    let db = first_derivatives(&right.terms);
    let acc = bilinear(&da, &db, |(j, ka, ca), (jp, kb, cb), acc| {
        let mut key = ka.product(kb);
        key.m.add_part(j + jp + 1);
        accumulate(acc, key, ca * cb * BigInt::from((j * jp) as u64));
    });
    finish(acc, &(left.denom * right.denom), truncation)
}

/// The pieces `F_1, ..., F_D` of the generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineState {
    pieces: Vec<GradedSeries>,
}

impl EngineState {
    /// State holding only `F_1`.
    pub fn seeded() -> Self {
        Self {
            pieces: vec![seed()],
        }
    }

    /// Rebuilds a state from stored pieces, validating every invariant.
    pub fn from_pieces(pieces: Vec<GradedSeries>) -> Result<Self> {
        let state = Self { pieces };
        state.validate()?;
        Ok(state)
    }

    pub fn compute(dmax: u32) -> Self {
        let mut state = Self::seeded();
        state.extend_to(dmax);
        state
    }

    pub fn dmax(&self) -> u32 {
        self.pieces.len() as u32
    }

    pub fn pieces(&self) -> &[GradedSeries] {
        &self.pieces
    }

    /// `F_d`, for `1 <= d <= dmax`.
    pub fn piece(&self, d: u32) -> Option<&GradedSeries> {
        (d >= 1).then(|| self.pieces.get(d as usize - 1)).flatten()
    }

    /// Computes `F_{dmax+1}` from the stored pieces.
    pub fn next_degree(&self) -> GradedSeries {
        let d = self.dmax() + 1;
        let prev = &self.pieces[d as usize - 2];
        let l1 = apply_l1(prev);
        let mut sum = l1
            .shift_uv(1, 0)
            .add(&l1.shift_uv(0, 1))
            .add(&apply_m1(prev));

        // Q1 is symmetric, so pair (n, d-1-n) with its mirror.
        let pairs: Vec<u32> = (1..d - 1).filter(|&n| 2 * n < d).collect();
        let nonlinear: Vec<GradedSeries> = pairs
            .par_iter()
            .map(|&n| {
                let a = &self.pieces[n as usize - 1];
                let b = &self.pieces[(d - 1 - n) as usize - 1];
                let q = apply_q1_pair(a, b);
                if 2 * n == d - 1 {
                    q
                } else {
                    q.scale(&Rational::from_integer(2.into()))
                }
            })
            .collect();
        for q in &nonlinear {
            sum = sum.add(q);
        }
        let piece = sum
            .scale(&Rational::new(BigInt::one(), BigInt::from(d)))
            .with_truncation(d);
        debug_assert!(piece.homogeneous_weight() == Some(d));
        piece
    }

    pub fn extend_to(&mut self, dmax: u32) {
        while self.dmax() < dmax {
            let next = self.next_degree();
            self.pieces.push(next);
        }
    }

    /// Keeps only `F_1..F_dmax`.
    pub fn truncated(&self, dmax: u32) -> EngineState {
        Self {
            pieces: self.pieces[..(dmax.max(1) as usize).min(self.pieces.len())].to_vec(),
        }
    }

    /// `N_{k,l}(m)`; zero for absent monomials, an error past the truncation.
    pub fn coefficient(&self, k: u32, l: u32, m: &Partition) -> Result<Rational> {
        let d = m.weight();
        if d > self.dmax() {
            return Err(Error::OutOfTruncation {
                requested: d,
                dmax: self.dmax(),
            });
        }
        Ok(self.lookup(k, l, m))
    }

    /// Coefficient lookup for weights known to be in range; weight 0 is zero.
    fn lookup(&self, k: u32, l: u32, m: &Partition) -> Rational {
        match self.piece(m.weight()) {
            Some(p) => p
                .get(&MonomialKey::new(k, l, m.clone()))
                .cloned()
                .unwrap_or_else(Rational::zero),
            None => Rational::zero(),
        }
    }

    /// Overwrites one coefficient of `F_d`. Intended for mutation tests.
    pub fn set_coefficient(&mut self, key: MonomialKey, value: Rational) -> Result<()> {
        let d = key.weight();
        let dmax = self.dmax();
        let piece = (d >= 1)
            .then(|| self.pieces.get_mut(d as usize - 1))
            .flatten()
            .ok_or(Error::OutOfTruncation { requested: d, dmax })?;
        piece.set_coefficient(key, value);
        Ok(())
    }

    /// `F` truncated at `dmax`, as one series.
    pub fn total(&self) -> GradedSeries {
        self.pieces
            .iter()
            .fold(GradedSeries::zero(self.dmax()), |acc, p| {
                acc.add(&p.clone().with_truncation(self.dmax()))
            })
    }

    /// Checks `F_1 = uvt_1`, homogeneity, physicality and integrality of
    /// `d * N` on every piece.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Error::InvalidArgument(msg);
        match self.pieces.first() {
            Some(first) if *first == seed() => {}
            _ => return Err(invalid("F_1 must be u v t_1".into())),
        }
        for (idx, piece) in self.pieces.iter().enumerate() {
            let d = idx as u32 + 1;
            if piece.is_empty() {
                return Err(invalid(format!("F_{d} is empty")));
            }
            if piece.keys().any(|k| k.weight() != d) {
                return Err(invalid(format!("F_{d} is not homogeneous of weight {d}")));
            }
            piece.check_connected_physical()?;
            for (key, c) in piece.iter() {
                if !(c * Rational::from_integer(d.into())).is_integer() {
                    return Err(Error::Integrality {
                        d,
                        g: key.genus()?,
                        value: format!("{d} * {c}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// `[F_1, ..., F_dmax]`.
pub fn compute_f(dmax: u32) -> EngineState {
    EngineState::compute(dmax)
}

/// Right-hand side of the coefficient recursion divided by `d`, evaluated
/// from the already computed lower-degree table. Every coefficient it reads
/// has weight `d - 1`.
pub fn coeff_recursion_rhs(state: &EngineState, key: &MonomialKey) -> Result<Rational> {
    let d = key.weight();
    if d == 0 || d > state.dmax() {
        return Err(Error::OutOfTruncation {
            requested: d,
            dmax: state.dmax(),
        });
    }
    if d == 1 {
        return Ok(seed().coefficient(key));
    }
    let (k, l, m) = (key.k, key.l, &key.m);
    let n = |k: u32, l: u32, p: &Partition| state.lookup(k, l, p);
    let int = |x: usize| Rational::from_integer(BigInt::from(x as u64));
    let delta = |a: usize, b: usize| usize::from(a == b);
    let mut total = Rational::zero();
    let imax = d as usize + 1;

    // (i-1)(m_{i-1}+1) [N_{k-1,l} + N_{k,l-1}](m + e_{i-1} - e_i)
    for i in 2..=imax {
        let Some(src) = m.adjusted(&[(i - 1, 1), (i, -1)]) else {
            continue;
        };
        let mut inner = Rational::zero();
        if k >= 1 {
            inner += n(k - 1, l, &src);
        }
        if l >= 1 {
            inner += n(k, l - 1, &src);
        }
        total += int((i - 1) * (m.multiplicity(i - 1) as usize + 1)) * inner;
    }

    // (i-1)(m_{i-1}+1-delta_{j,1}-delta_{i-j,1}) N_{k,l}(m - e_j - e_{i-j} + e_{i-1})
    for i in 2..=imax {
        for j in 1..i {
            let Some(src) = m.adjusted(&[(i - 1, 1), (j, -1), (i - j, -1)]) else {
                continue;
            };
            let mult = m.multiplicity(i - 1) as usize + 1 - delta(j, 1) - delta(i - j, 1);
            total += int((i - 1) * mult) * n(k, l, &src);
        }
    }

    // j(i-j)(m_j+1)(m_{i-j}+1+delta_{j,i-j}) N_{k,l}(m + e_j + e_{i-j} - e_{i+1})
    for i in 2..imax {
        for j in 1..i {
            let Some(src) = m.adjusted(&[(j, 1), (i - j, 1), (i + 1, -1)]) else {
                continue;
            };
            let mult = j
                * (i - j)
                * (m.multiplicity(j) as usize + 1)
                * (m.multiplicity(i - j) as usize + 1 + delta(j, i - j));
            total += int(mult) * n(k, l, &src);
        }
    }

    // j(i-j)(m1_j+1)(m2_{i-j}+1) N_{k1,l1}(m1 + e_j) N_{k2,l2}(m2 + e_{i-j})
    for i in 2..imax {
        let Some(rest) = m.adjusted(&[(i + 1, -1)]) else {
            continue;
        };
        let splits: Vec<(Partition, Partition)> = rest
            .sub_multisets()
            .into_iter()
            .map(|m1| {
                let m2 = rest.difference(&m1).expect("sub-multiset");
                (m1, m2)
            })
            .collect();
        for j in 1..i {
            for (m1, m2) in &splits {
                let mut a = m1.clone();
                a.add_part(j);
                let mut b = m2.clone();
                b.add_part(i - j);
                let mult = int(j
                    * (i - j)
                    * (m1.multiplicity(j) as usize + 1)
                    * (m2.multiplicity(i - j) as usize + 1));
                for k1 in 1..k {
                    for l1 in 1..l {
                        let x = n(k1, l1, &a);
                        if x.is_zero() {
                            continue;
                        }
                        let y = n(k - k1, l - l1, &b);
                        if !y.is_zero() {
                            total += &mult * x * y;
                        }
                    }
                }
            }
        }
    }

    Ok(total / int(d as usize))
}

/// `A x = (u+v) L1 x + M1 x + u v t_1 x`.
fn partition_operator(x: &GradedSeries) -> GradedSeries {
    let l1 = apply_l1(x);
    let uvt1 = x
        .shift_uv(1, 1)
        .with_truncation(x.truncation() + 1)
        .mul_t(1);
    l1.shift_uv(1, 0)
        .add(&l1.shift_uv(0, 1))
        .add(&apply_m1(x))
        .add(&uvt1)
}

/// `Z = exp(s A) 1` truncated at weight `dmax`; the weight-`d` part is
/// `A^d(1) / d!`.
pub fn partition_function(dmax: u32) -> GradedSeries {
    let mut piece = GradedSeries::one(0);
    let mut total = GradedSeries::one(dmax);
    for d in 1..=dmax {
        piece = partition_operator(&piece)
            .scale(&Rational::new(BigInt::one(), BigInt::from(d)))
            .with_truncation(d);
        total = total.add(&piece.clone().with_truncation(dmax));
    }
    total
}

/// Formal exponential `exp(F)` truncated at the state's `dmax`, via
/// `d Z_d = sum_{j=1}^{d} j F_j Z_{d-j}`.
pub fn exp_series(state: &EngineState) -> GradedSeries {
    let dmax = state.dmax();
    let mut z: Vec<GradedSeries> = vec![GradedSeries::one(dmax)];
    for d in 1..=dmax {
        let mut acc = GradedSeries::zero(dmax);
        for j in 1..=d {
            let f = state
                .piece(j)
                .expect("piece in range")
                .clone()
                .with_truncation(dmax);
            let term = f.mul(&z[(d - j) as usize]);
            acc = acc.add(&term.scale(&Rational::from_integer(BigInt::from(j))));
        }
        z.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(d))));
    }
    z.iter().fold(GradedSeries::zero(dmax), |acc, p| acc.add(p))
}
