//! Truncated Laurent series over an abstract coefficient ring.
//!
//! The same type serves as k((t)) with [`FieldElem`] coefficients and, through
//! [`PiElem`], as k((beta))((t)) for deformations. Precision is absolute: a series
//! with `prec = Some(p)` says nothing about the coefficients of `t^n` for `n >= p`.
//! `prec = None` marks an exact (finite) Laurent polynomial.

mod birational;
mod pi;

pub use birational::BiRational;
pub use pi::{PiElem, PiSeries};

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Default number of series terms kept when an operation would otherwise be infinite.
pub const DEFAULT_PRECISION: i64 = 256;

/// Valuation reported for the exact zero series.
pub const INFINITE_VALUATION: i64 = i64::MAX;

/// Coefficient ring of a [`LaurentSeries`]: a commutative ring of characteristic 2.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// True only when the value is known to be zero.
    fn is_certainly_zero(&self) -> bool;
    /// True only when the value is known to be nonzero.
    fn is_certainly_nonzero(&self) -> bool;
    fn square(&self) -> Self {
        self.mul(self)
    }
}

/// Coefficients that admit square roots and Artin-Schreier roots of constants.
pub trait AsCoefficient: Coefficient {
    fn sqrt(&self) -> Result<Self>;
    /// Some x with x^2 + x = self, growing `ctx` if the residue field must grow.
    fn as_root(&self, ctx: &mut FieldCtx) -> Result<Self>;
}

impl Coefficient for FieldElem {
    fn zero() -> Self {
        FieldElem::ZERO
    }
    fn one() -> Self {
        FieldElem::ONE
    }
    fn add(&self, other: &Self) -> Self {
        FieldElem::add(*self, *other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElem::mul(*self, *other)
    }
    fn inv(&self) -> Result<Self> {
        FieldElem::inv(*self)
    }
    fn is_certainly_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_certainly_nonzero(&self) -> bool {
        !self.is_zero()
    }
    fn square(&self) -> Self {
        FieldElem::square(*self)
    }
}

impl AsCoefficient for FieldElem {
    fn sqrt(&self) -> Result<Self> {
        Ok(FieldElem::sqrt(*self))
    }
    fn as_root(&self, ctx: &mut FieldCtx) -> Result<Self> {
        ctx.as_root_const(*self)
    }
}

/// A Laurent series `sum c_i t^(start+i)` known up to (excluding) `t^prec`.
#[derive(Clone, Debug)]
pub struct LaurentSeries<C> {
    start: i64,
    coeffs: Vec<C>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<C: Coefficient> LaurentSeries<C> {
    fn normalized(mut self) -> Self {
        if let Some(p) = self.prec {
            let keep = (p - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_certainly_zero()) {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_certainly_zero())
            .unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }

    /// The exact zero series.
    pub fn zero() -> Self {
        LaurentSeries {
            start: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// Zero up to `t^prec`, unknown beyond.
    pub fn zero_to(prec: i64) -> Self {
        LaurentSeries {
            start: 0,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, n: i64) -> Self {
        LaurentSeries {
            start: n,
            coeffs: vec![c],
            prec: None,
        }
        .normalized()
    }

    /// Builds a series from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, C)>, prec: Option<i64>) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().collect();
        if terms.is_empty() {
            return LaurentSeries {
                start: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let mut hi = terms.iter().map(|t| t.0).max().unwrap();
        if let Some(p) = prec {
            hi = hi.min(p - 1);
        }
        let len = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        let mut coeffs = vec![C::zero(); len];
        for (n, c) in terms {
            if n <= hi {
                let i = (n - lo) as usize;
                coeffs[i] = coeffs[i].add(&c);
            }
        }
        LaurentSeries {
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest stored exponent (0 for a series with no stored terms).
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the highest stored exponent.
    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Known coefficient of `t^n` (zero outside the stored range).
    pub fn coeff(&self, n: i64) -> C {
        if n < self.start || n >= self.end() {
            return C::zero();
        }
        self.coeffs[(n - self.start) as usize].clone()
    }

    /// Nonzero stored terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_certainly_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Lower bound for the valuation that never fails.
    fn low(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec.unwrap_or(INFINITE_VALUATION)
        } else {
            self.start
        }
    }

    /// Exponent of the leading term; [`INFINITE_VALUATION`] for the exact zero series.
    pub fn valuation(&self) -> Result<i64> {
        match self.coeffs.first() {
            None if self.prec.is_none() => Ok(INFINITE_VALUATION),
            None => Err(Error::precision(format!(
                "all coefficients below t^{} vanish",
                self.prec.unwrap()
            ))),
            Some(c) if c.is_certainly_nonzero() => Ok(self.start),
            Some(_) => Err(Error::precision(format!(
                "leading coefficient at t^{} cannot be certified nonzero",
                self.start
            ))),
        }
    }

    /// Leading exponent and coefficient.
    pub fn leading(&self) -> Result<(i64, C)> {
        let v = self.valuation()?;
        if v == INFINITE_VALUATION {
            return Err(Error::ZeroInput("series is zero".into()));
        }
        Ok((v, self.coeffs[0].clone()))
    }

    /// deg in t^-1, i.e. minus the valuation; 0 for the zero series.
    pub fn degree(&self) -> Result<i64> {
        let v = self.valuation()?;
        Ok(if v == INFINITE_VALUATION { 0 } else { -v })
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if other.coeffs.is_empty() {
            return LaurentSeries { prec, ..self.clone() }.normalized();
        }
        if self.coeffs.is_empty() {
            return LaurentSeries { prec, ..other.clone() }.normalized();
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        let mut coeffs = vec![C::zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.start - lo) as usize + i] = c.clone();
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let j = (other.start - lo) as usize + i;
            coeffs[j] = coeffs[j].add(c);
        }
        LaurentSeries {
            start: lo,
            coeffs,
            prec,
        }
        .normalized()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let (la, lb) = (self.low(), other.low());
        let prec = min_prec(self.prec.map(|p| p + lb), other.prec.map(|p| p + la));
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentSeries {
                start: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - start).max(0) as usize);
        }
        let mut coeffs = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_certainly_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_certainly_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        LaurentSeries {
            start,
            coeffs,
            prec,
        }
        .normalized()
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        LaurentSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            prec: self.prec,
        }
        .normalized()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            start: if self.coeffs.is_empty() { 0 } else { self.start + k },
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|p| p + k),
        }
    }

    /// Frobenius; precision doubles because squaring is additive in characteristic 2.
    pub fn square(&self) -> Self {
        let terms = self.terms().map(|(n, c)| (2 * n, c.square()));
        Self::from_terms(terms.collect::<Vec<_>>(), self.prec.map(|p| 2 * p))
    }

    /// The Artin-Schreier operator x^2 + x.
    pub fn wp(&self) -> Self {
        self.square().add(self)
    }

    /// Forgets every coefficient at or above `t^prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        LaurentSeries {
            start: self.start,
            coeffs: self.coeffs.clone(),
            prec: Some(min_prec(self.prec, Some(prec)).unwrap()),
        }
        .normalized()
    }

    /// Inverse with [`DEFAULT_PRECISION`] relative terms when the input is exact.
    pub fn inv(&self) -> Result<Self> {
        self.inv_rel(DEFAULT_PRECISION)
    }

    /// Inverse; `rel` bounds the number of terms produced for exact inputs.
    pub fn inv_rel(&self, rel: i64) -> Result<Self> {
        let v = self.valuation()?;
        if v == INFINITE_VALUATION {
            return Err(Error::DivisionByZero);
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::monomial(self.coeffs[0].inv()?, -v));
        }
        let r = match self.prec {
            Some(p) => p - v,
            None => rel,
        }
        .max(1) as usize;
        let c_inv = self.coeffs[0].inv()?;
        let mut out: Vec<C> = Vec::with_capacity(r);
        out.push(c_inv.clone());
        for k in 1..r {
            let mut acc = C::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out.push(acc.mul(&c_inv));
        }
        Ok(LaurentSeries {
            start: -v,
            coeffs: out,
            prec: Some(-v + r as i64),
        }
        .normalized())
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> LaurentSeries<D> {
        LaurentSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(f).collect(),
            prec: self.prec,
        }
        .normalized()
    }

    /// Part of the series with exponents strictly below `n`, exact.
    pub fn below(&self, n: i64) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|(e, _)| *e < n)
                .map(|(e, c)| (e, c.clone()))
                .collect::<Vec<_>>(),
            None,
        )
    }

    /// True if every term sits at a negative odd exponent.
    pub fn is_standard(&self) -> bool {
        self.terms().all(|(n, _)| n < 0 && n % 2 != 0)
    }
}

impl<C: Coefficient> PartialEq for LaurentSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.prec != other.prec {
            return false;
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        (lo..hi).all(|n| self.coeff(n) == other.coeff(n))
    }
}

impl<C: Coefficient> Default for LaurentSeries<C> {
    fn default() -> Self {
        Self::zero()
    }
}

fn coeff_needs_parens(s: &str) -> bool {
    s.contains('+')
}

impl<C: Coefficient> fmt::Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, c) in self.terms() {
            let cs = c.to_string();
            let cs = if coeff_needs_parens(&cs) {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match n {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{n}"),
            };
            parts.push(match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs.clone(),
                ("1", false) => mono,
                (_, false) => format!("{cs}*{mono}"),
            });
        }
        if let Some(p) = self.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Series with residue-field coefficients: elements of k((t)).
pub type Series = LaurentSeries<FieldElem>;

impl Series {
    /// Convenience constructor for exact series with coefficient 1 at each exponent.
    pub fn t_poly(exponents: &[i64]) -> Self {
        Self::from_terms(exponents.iter().map(|&n| (n, FieldElem::ONE)), None)
    }

    /// Highest tower level among the coefficients.
    pub fn coeff_level(&self) -> u8 {
        self.terms().map(|(_, c)| c.level()).max().unwrap_or(0)
    }
}
