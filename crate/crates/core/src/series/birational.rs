use std::fmt;

use super::PiSeries;
use super::{PiElem, Series};
use crate::error::{Error, Result};
use crate::field::FieldElem;

/// `numerator * (t - pi)^(-pole)` with a Laurent-polynomial numerator over k((beta)).
#[derive(Clone, Debug)]
pub struct BiRational {
    numerator: PiSeries,
    pole: u32,
}

fn binom_odd(n: u64, k: u64) -> bool {
    k <= n && (k & !n) == 0
}

/// `(t + pi)^e` as an exact polynomial in t.
fn pole_factor(e: u32) -> PiSeries {
    let e = e as u64;
    PiSeries::from_terms(
        (0..=e)
            .filter(|&k| binom_odd(e, k))
            .map(|k| (k as i64, PiElem::pi_pow(FieldElem::ONE, (e - k) as i64))),
        None,
    )
}

/// Expansion of `(x + pi)^(-m)` in x, kept up to `x^order`: `pi^-m * sum C(m+k-1,k) (x/pi)^k`.
fn inverse_power(m: u32, order: i64) -> PiSeries {
    let m = m as u64;
    if m == 0 {
        return PiSeries::one();
    }
    PiSeries::from_terms(
        (0..=order.max(0) as u64)
            .filter(|&k| binom_odd(m + k - 1, k))
            .map(|k| (k as i64, PiElem::pi_pow(FieldElem::ONE, -((m + k) as i64)))),
        Some(order.max(0) + 1),
    )
}

impl BiRational {
    pub fn new(numerator: PiSeries, pole: u32) -> Self {
        BiRational { numerator, pole }
    }

    /// An element of k((t)) with no pole at t = pi.
    pub fn from_series(s: &Series) -> Self {
        BiRational {
            numerator: PiSeries::from_residue(s),
            pole: 0,
        }
    }

    pub fn zero() -> Self {
        BiRational {
            numerator: PiSeries::zero(),
            pole: 0,
        }
    }

    pub fn numerator(&self) -> &PiSeries {
        &self.numerator
    }

    pub fn pole(&self) -> u32 {
        self.pole
    }

    fn lift_pole(&self, e: u32) -> PiSeries {
        self.numerator.mul(&pole_factor(e - self.pole))
    }

    pub fn add(&self, other: &Self) -> Self {
        let e = self.pole.max(other.pole);
        BiRational {
            numerator: self.lift_pole(e).add(&other.lift_pole(e)),
            pole: e,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        BiRational {
            numerator: self.numerator.mul(&other.numerator),
            pole: self.pole + other.pole,
        }
    }

    /// Multiplies by `t^k (t - pi)^(-e)`.
    pub fn twist(&self, k: i64, e: u32) -> Self {
        BiRational {
            numerator: self.numerator.shift(k),
            pole: self.pole + e,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Laurent expansion in t, correct through `t^(low + order)` where `low` is the
    /// numerator's lowest exponent.
    pub fn expand_at_zero(&self, order: i64) -> Result<PiSeries> {
        if self.numerator.is_exact_zero() {
            return Ok(PiSeries::zero());
        }
        if self.pole == 0 {
            return Ok(self.numerator.clone());
        }
        Ok(self.numerator.mul(&inverse_power(self.pole, order)))
    }

    /// Laurent expansion in `u = t - pi`, correct through `u^(order - pole)`.
    pub fn expand_at_pi(&self, order: i64) -> Result<PiSeries> {
        if !self.numerator.is_exact() {
            return Err(Error::precision(
                "recentering needs an exact numerator",
            ));
        }
        let mut acc = PiSeries::zero();
        let mut truncated = false;
        for (n, a) in self.numerator.terms() {
            let piece = if n >= 0 {
                // (u + pi)^n, exact
                let n = n as u64;
                PiSeries::from_terms(
                    (0..=n)
                        .filter(|&k| binom_odd(n, k))
                        .map(|k| (k as i64, PiElem::pi_pow(FieldElem::ONE, (n - k) as i64))),
                    None,
                )
            } else {
                truncated = true;
                inverse_power((-n) as u32, order)
            };
            acc = acc.add(&piece.scale(a));
        }
        if truncated || !self.numerator.is_exact() {
            acc = acc.truncate(order + 1);
        }
        Ok(acc.shift(-(self.pole as i64)))
    }

    /// The element at pi = 0: numerator evaluated at pi = 0, times `t^(-pole)`.
    pub fn special_fiber(&self) -> Result<Series> {
        let terms = self
            .numerator
            .terms()
            .map(|(n, c)| Ok((n, c.at_pi_zero()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::from_terms(terms, self.numerator.prec()).shift(-(self.pole as i64)))
    }

    /// Equality as rational functions.
    pub fn same_function(&self, other: &Self) -> bool {
        let e = self.pole.max(other.pole);
        self.lift_pole(e) == other.lift_pole(e)
    }
}

impl PartialEq for BiRational {
    fn eq(&self, other: &Self) -> bool {
        self.same_function(other)
    }
}

impl fmt::Display for BiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pole == 0 || self.numerator.is_exact_zero() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({})*(t-pi)^-{}", self.numerator, self.pole)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Coefficient, PiElem};

    fn pi(n: i64) -> PiElem {
        PiElem::pi_pow(FieldElem::ONE, n)
    }

    fn t_pole(k: i64, e: u32) -> BiRational {
        BiRational::new(PiSeries::monomial(PiElem::one(), k), e)
    }

    #[test]
    fn expand_pole_at_zero() {
        let x = t_pole(0, 2).expand_at_zero(2).unwrap();
        let expected = PiSeries::from_terms([(0, pi(-2)), (2, pi(-4))], Some(3));
        assert_eq!(x, expected);
        let y = t_pole(2, 2).expand_at_zero(0).unwrap();
        assert_eq!(y.leading().unwrap(), (2, pi(-2)));
        let z = t_pole(-1, 0).expand_at_zero(5).unwrap();
        assert_eq!(z.terms().count(), 1);
        assert_eq!(z.valuation().unwrap(), -1);
    }

    #[test]
    fn expand_at_pi_examples() {
        let x = t_pole(-1, 0).expand_at_pi(2).unwrap();
        let expected = PiSeries::from_terms([(0, pi(-1)), (1, pi(-2)), (2, pi(-3))], Some(3));
        assert_eq!(x, expected);
        assert_eq!(
            t_pole(0, 2).expand_at_pi(4).unwrap(),
            PiSeries::monomial(PiElem::one(), -2)
        );
        assert_eq!(t_pole(0, 0).expand_at_pi(4).unwrap(), PiSeries::one());
    }

    #[test]
    fn multiplying_back_recovers_numerator() {
        for e in [2u32, 4, 6] {
            let x = BiRational::new(PiSeries::from_residue(&Series::t_poly(&[-3, 0, 1])), e);
            let order = 30;
            let exp = x.expand_at_zero(order).unwrap();
            let back = exp.mul(&pole_factor(e));
            let num = x.numerator().truncate(back.prec().unwrap());
            assert_eq!(back, num);
        }
    }

    #[test]
    fn recentering_is_multiplicative() {
        let a = BiRational::new(PiSeries::from_residue(&Series::t_poly(&[-3, -1])), 2);
        let b = BiRational::new(PiSeries::from_residue(&Series::t_poly(&[-1, 2])), 0);
        let order = 20;
        let lhs = a.mul(&b).expand_at_pi(order).unwrap();
        let rhs = a.expand_at_pi(order).unwrap().mul(&b.expand_at_pi(order).unwrap());
        let p = lhs.prec().unwrap().min(rhs.prec().unwrap());
        assert_eq!(lhs.truncate(p), rhs.truncate(p));
    }

    #[test]
    fn special_fiber_recovers_residue_series() {
        let g = Series::t_poly(&[-3]);
        let tilde = BiRational::from_series(&g).twist(2, 2);
        assert_eq!(tilde.special_fiber().unwrap(), g);
        let sum = tilde.add(&BiRational::from_series(&Series::t_poly(&[-1])));
        assert_eq!(sum.special_fiber().unwrap(), Series::t_poly(&[-3, -1]));
    }
}
