//! Symbolic check of the first KP equations on the computed `F`.
//!
//! Equations are stored as text, e.g. `F22 = -1/2 F11^2 + F31 - 1/12 F1111`,
//! where `Fij...` is the partial derivative of `F` with respect to
//! `t_i, t_j, ...` (single-digit indices, or `F[10,1]` for larger ones).
//! A residual is the coefficient of `s^n` in `LHS - RHS`; it is a polynomial
//! in `u, v, t` and must vanish identically.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::EngineState;
use crate::series::{GradedSeries, Rational};

/// The printed equations, in order.
pub const STANDARD_EQUATIONS: [&str; 4] = [
    "F22 = -1/2 F11^2 + F31 - 1/12 F1111",
    "F32 = -F11 F21 + F41 - 1/6 F2111",
    "F42 = -1/2 F21^2 - F11 F31 + F51 + 1/8 F111^2 + 1/12 F11 F1111 - 1/4 F3111 + 1/120 F111111",
    "F33 = 1/3 F11^3 - F21^2 - F11 F31 + F51 + 1/4 F111^2 + 1/3 F11 F1111 - 1/3 F3111 + 1/45 F111111",
];

/// One monomial `coeff * prod_r F_{alpha_r}` of `LHS - RHS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpTerm {
    pub coeff: Rational,
    /// Derivative multi-indices, each sorted increasingly.
    pub factors: Vec<Vec<usize>>,
}

impl KpTerm {
    /// Sum of all derivative indices.
    pub fn weight(&self) -> usize {
        self.factors.iter().flatten().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpEquation {
    pub id: u32,
    pub text: String,
    pub terms: Vec<KpTerm>,
}

impl KpEquation {
    pub fn parse(id: u32, text: &str) -> Result<Self> {
        let (lhs, rhs) = text
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("equation `{text}` has no `=`")))?;
        let mut terms = parse_sum(lhs)?;
        for mut t in parse_sum(rhs)? {
            t.coeff = -t.coeff;
            terms.push(t);
        }
        Ok(Self {
            id,
            text: text.to_string(),
            terms,
        })
    }

    /// The four printed equations, numbered 1..=4.
    pub fn standard() -> Vec<KpEquation> {
        STANDARD_EQUATIONS
            .iter()
            .zip(1..)
            .map(|(text, id)| KpEquation::parse(id, text).expect("built-in equation parses"))
            .collect()
    }

    /// Common weight of all terms, `None` if the equation is not homogeneous.
    pub fn weight(&self) -> Option<usize> {
        let w = self.terms.first()?.weight();
        self.terms.iter().all(|t| t.weight() == w).then_some(w)
    }
}

fn parse_sum(text: &str) -> Result<Vec<KpTerm>> {
    let bad = |why: &str| Error::Parse(format!("`{text}`: {why}"));
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || chars[*pos] == '*') {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        chars[start..*pos].iter().collect::<String>().parse().ok()
    };

    skip_ws(&mut pos);
    while pos < chars.len() {
        let mut sign = BigInt::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !terms.is_empty() {
            return Err(bad("expected `+` or `-` between terms"));
        }
        let mut coeff = Rational::from_integer(sign);
        if pos < chars.len() && chars[pos].is_ascii_digit() {
            let num = number(&mut pos).ok_or_else(|| bad("bad coefficient"))?;
            let mut den = 1;
            if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                den = number(&mut pos).ok_or_else(|| bad("bad denominator"))?;
                if den == 0 {
                    return Err(bad("zero denominator"));
                }
            }
            coeff *= Rational::new(num.into(), den.into());
            skip_ws(&mut pos);
        }
        let mut factors = Vec::new();
        while pos < chars.len() && chars[pos] == 'F' {
            pos += 1;
            let mut index = Vec::new();
            if pos < chars.len() && chars[pos] == '[' {
                let close = chars[pos..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| bad("unclosed `[`"))?;
                let inner: String = chars[pos + 1..pos + close].iter().collect();
                for part in inner.split(',') {
                    index.push(part.trim().parse().map_err(|_| bad("bad index"))?);
                }
                pos += close + 1;
            } else {
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    index.push(chars[pos].to_digit(10).unwrap() as usize);
                    pos += 1;
                }
            }
            if index.is_empty() || index.contains(&0) {
                return Err(bad("derivative indices start at 1"));
            }
            index.sort_unstable();
            let mut power = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                power = number(&mut pos).ok_or_else(|| bad("bad exponent"))?;
            }
            for _ in 0..power {
                factors.push(index.clone());
            }
            skip_ws(&mut pos);
        }
        if factors.is_empty() {
            return Err(bad("term without a derivative factor"));
        }
        terms.push(KpTerm { coeff, factors });
    }
    if terms.is_empty() {
        return Err(bad("empty side"));
    }
    Ok(terms)
}

/// Every way to write `n` as an ordered sum of `parts` positive integers.
fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts as u32 - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The `s^n` coefficient of `LHS - RHS` for `eq` on the computed `F`.
pub fn kp_residual(state: &EngineState, eq: &KpEquation, n: u32) -> Result<GradedSeries> {
    if n > state.dmax() {
        return Err(Error::OutOfTruncation {
            requested: n,
            dmax: state.dmax(),
        });
    }
    let mut derivatives: HashMap<(u32, &[usize]), GradedSeries> = HashMap::new();
    let mut residual = GradedSeries::zero(n);
    for term in &eq.terms {
        for split in compositions(n, term.factors.len()) {
            let mut product = GradedSeries::one(n);
            for (&d, alpha) in split.iter().zip(&term.factors) {
                let factor = derivatives.entry((d, alpha.as_slice())).or_insert_with(|| {
                    let base = state.piece(d).expect("degree in range").clone();
                    alpha
                        .iter()
                        .fold(base, |acc, &i| acc.diff_t(i))
                        .with_truncation(n)
                });
                if factor.is_empty() {
                    product = GradedSeries::zero(n);
                    break;
                }
                product = product.mul(factor);
            }
            residual = residual.add(&product.scale(&term.coeff));
        }
    }
    Ok(residual)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KpRow {
    pub eq: u32,
    pub n: u32,
    pub residual_terms: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KpReport {
    pub rows: Vec<KpRow>,
    /// Largest number of monomials in any `F_n` that entered the check.
    pub max_piece_terms: usize,
}

impl KpReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Evaluates every equation in `equations` at every `1 <= n <= nmax`.
pub fn kp_report(state: &EngineState, nmax: u32, equations: &[KpEquation]) -> Result<KpReport> {
    if nmax > state.dmax() {
        return Err(Error::OutOfTruncation {
            requested: nmax,
            dmax: state.dmax(),
        });
    }
    let jobs: Vec<(&KpEquation, u32)> = equations
        .iter()
        .flat_map(|eq| (1..=nmax).map(move |n| (eq, n)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(eq, n)| {
            let residual = kp_residual(state, eq, n)?;
            Ok(KpRow {
                eq: eq.id,
                n,
                residual_terms: residual.len(),
                pass: residual.is_empty(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_piece_terms = (1..=nmax)
        .filter_map(|d| state.piece(d))
        .map(GradedSeries::len)
        .max()
        .unwrap_or(0);
    Ok(KpReport {
        rows,
        max_piece_terms,
    })
}

/// Convenience: the standard equations.
pub fn kp_report_standard(state: &EngineState, nmax: u32) -> Result<KpReport> {
    kp_report(state, nmax, &KpEquation::standard())
}
