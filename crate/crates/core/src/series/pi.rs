use std::fmt;

use super::{AsCoefficient, Coefficient, LaurentSeries, Series, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// An element of k((beta)) where `beta^(2^scale)` is the deformation parameter pi.
///
/// Square roots raise `scale`; exact values are kept at the smallest scale that
/// represents them, so equal elements compare equal regardless of history.
#[derive(Clone, Debug)]
pub struct PiElem {
    scale: u32,
    series: Series,
}

impl PiElem {
    pub fn new(scale: u32, series: Series) -> Self {
        PiElem { scale, series }.canonical()
    }

    pub fn constant(c: FieldElem) -> Self {
        PiElem {
            scale: 0,
            series: Series::constant(c),
        }
    }

    /// `c * pi^n`.
    pub fn pi_pow(c: FieldElem, n: i64) -> Self {
        PiElem {
            scale: 0,
            series: Series::monomial(c, n),
        }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Underlying series in `beta = pi^(1/2^scale)`.
    pub fn beta_series(&self) -> &Series {
        &self.series
    }

    fn canonical(mut self) -> Self {
        if !self.series.is_exact() {
            return self;
        }
        while self.scale > 0 && self.series.terms().all(|(n, _)| n % 2 == 0) {
            let halved: Vec<_> = self.series.terms().map(|(n, c)| (n / 2, *c)).collect();
            self.series = Series::from_terms(halved, None);
            self.scale -= 1;
        }
        if self.series.is_zero() {
            self.scale = 0;
        }
        self
    }

    fn at_scale(&self, s: u32) -> Series {
        let k = 1i64 << (s - self.scale);
        Series::from_terms(
            self.series.terms().map(|(n, c)| (n * k, *c)).collect::<Vec<_>>(),
            self.series.prec().map(|p| p * k),
        )
    }

    fn binary(&self, other: &Self, op: impl Fn(&Series, &Series) -> Series) -> Self {
        let s = self.scale.max(other.scale);
        PiElem {
            scale: s,
            series: op(&self.at_scale(s), &other.at_scale(s)),
        }
        .canonical()
    }

    /// Valuation in pi as the fraction `num / 2^scale`.
    pub fn pi_valuation(&self) -> Result<(i64, u32)> {
        Ok((self.series.valuation()?, self.scale))
    }

    /// True if this is an element of k (no pi-dependence).
    pub fn is_residue_constant(&self) -> bool {
        self.series.is_exact() && self.series.terms().all(|(n, _)| n == 0)
    }

    /// Value at pi = 0; fails when the element has a pole in pi.
    pub fn at_pi_zero(&self) -> Result<FieldElem> {
        if let Some((n, _)) = self.series.terms().next() {
            if n < 0 {
                return Err(Error::InvalidInput(format!(
                    "{self} has a pole at pi = 0"
                )));
            }
        }
        if self.series.prec().is_some_and(|p| p <= 0) {
            return Err(Error::precision("constant term in pi is unknown"));
        }
        Ok(self.series.coeff(0))
    }
}

impl PartialEq for PiElem {
    fn eq(&self, other: &Self) -> bool {
        let s = self.scale.max(other.scale);
        self.at_scale(s) == other.at_scale(s)
    }
}

impl Coefficient for PiElem {
    fn zero() -> Self {
        PiElem::constant(FieldElem::ZERO)
    }
    fn one() -> Self {
        PiElem::constant(FieldElem::ONE)
    }
    fn add(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a.add(b))
    }
    fn mul(&self, other: &Self) -> Self {
        self.binary(other, |a, b| a.mul(b))
    }
    fn inv(&self) -> Result<Self> {
        Ok(PiElem {
            scale: self.scale,
            series: self.series.inv()?,
        }
        .canonical())
    }
    fn is_certainly_zero(&self) -> bool {
        self.series.is_exact_zero()
    }
    fn is_certainly_nonzero(&self) -> bool {
        !self.series.is_zero()
    }
    fn square(&self) -> Self {
        PiElem {
            scale: self.scale,
            series: self.series.square(),
        }
        .canonical()
    }
}

impl AsCoefficient for PiElem {
    fn sqrt(&self) -> Result<Self> {
        let roots: Vec<_> = self.series.terms().map(|(n, c)| (n, FieldElem::sqrt(*c))).collect();
        Ok(PiElem {
            scale: self.scale + 1,
            series: Series::from_terms(roots, self.series.prec()),
        }
        .canonical())
    }

    fn as_root(&self, ctx: &mut FieldCtx) -> Result<Self> {
        let s = self.scale;
        let mut rest = self.series.clone();
        let mut root = Series::zero();
        // poles: only even exponents can be absorbed
        loop {
            let Some((n, c)) = rest.terms().next().map(|(n, c)| (n, *c)) else {
                break;
            };
            if n >= 0 {
                break;
            }
            if n % 2 != 0 {
                return Err(Error::NotSplitAtFiber(format!(
                    "{self} has a pole of odd order in beta"
                )));
            }
            let r = Series::monomial(FieldElem::sqrt(c), n / 2);
            root = root.add(&r);
            rest = rest.add(&r.wp());
        }
        let residue = rest.coeff(0);
        if !residue.is_zero() {
            let x = ctx.as_root_const(residue)?;
            root = root.add(&Series::constant(x));
            rest = rest.add(&Series::constant(residue));
        }
        if !rest.is_zero() {
            let bound = rest.prec().unwrap_or(DEFAULT_PRECISION);
            let mut p = rest.truncate(bound);
            while !p.is_zero() {
                root = root.add(&p);
                p = p.square().truncate(bound);
            }
            root = root.truncate(bound);
        }
        Ok(PiElem {
            scale: s,
            series: root,
        }
        .canonical())
    }
}

fn render_exponent(n: i64, scale: u32) -> String {
    let mut num = n;
    let mut den = 1i64 << scale;
    while den > 1 && num % 2 == 0 {
        num /= 2;
        den /= 2;
    }
    if den == 1 {
        format!("{num}")
    } else {
        format!("({num}/{den})")
    }
}

impl fmt::Display for PiElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (n, c) in self.series.terms() {
            let cs = c.to_string();
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            if n == 0 {
                parts.push(cs);
                continue;
            }
            let mono = format!("pi^{}", render_exponent(n, self.scale));
            parts.push(if cs == "1" { mono } else { format!("{cs}*{mono}") });
        }
        if let Some(p) = self.series.prec() {
            parts.push(format!("O(pi^{})", render_exponent(p, self.scale)));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join("+"))
    }
}

/// Series over k((beta)): the coefficient field of the generic fiber.
pub type PiSeries = LaurentSeries<PiElem>;

impl PiSeries {
    /// Embeds a series over k with pi-free coefficients.
    pub fn from_residue(s: &Series) -> Self {
        s.map(|c| PiElem::constant(*c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(n: i64) -> PiElem {
        PiElem::pi_pow(FieldElem::ONE, n)
    }

    #[test]
    fn sqrt_raises_scale() {
        let r = pi(1).sqrt().unwrap();
        assert_eq!(r.scale(), 1);
        assert_eq!(r.square(), pi(1));
        assert_eq!(pi(2).sqrt().unwrap(), pi(1));
        assert_eq!(r.to_string(), "pi^(1/2)");
    }

    #[test]
    fn as_root_positive_valuation() {
        let mut ctx = FieldCtx::new();
        let c = pi(1);
        let x = c.as_root(&mut ctx).unwrap();
        let back = x.square().add(&x);
        let diff = back.add(&c);
        assert!(diff.beta_series().is_zero());
        assert_eq!(diff.beta_series().prec(), Some(DEFAULT_PRECISION));
    }

    #[test]
    fn as_root_mixed() {
        let mut ctx = FieldCtx::new();
        let c = pi(-2).add(&pi(-1)).add(&PiElem::one());
        let x = c.as_root(&mut ctx).unwrap();
        assert_eq!(x.square().add(&x), c);
        assert_eq!(ctx.top_level(), 1);
        assert!(matches!(pi(-1).as_root(&mut ctx), Err(Error::NotSplitAtFiber(_))));
    }

    #[test]
    fn inverse_of_monomial_is_exact() {
        let x = PiElem::pi_pow(FieldElem::generator(1).unwrap(), -3);
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), PiElem::one());
    }
}
