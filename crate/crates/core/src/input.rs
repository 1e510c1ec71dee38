//! Text formats: series literals, field descriptors, break triples and extension files.
//!
//! An extension file is line oriented:
//!
//! ```text
//! # a Type I example
//! field = GF(2)
//! F = t^-1
//! G = t^-3
//! H = 0
//! precision = 128
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, MAX_LEVEL};
use crate::series::Series;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn error(&self, what: &str) -> Error {
        parse_err(format!("{what} at column {} in `{}`", self.pos + 1, self.src))
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek_raw(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("expected an integer"))
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// One factor of a product: a field constant or a power of t.
enum Factor {
    Const(FieldElem),
    Power(i64),
}

fn factor(cur: &mut Cursor) -> Result<Factor> {
    match cur.peek() {
        Some('(') => {
            cur.expect('(')?;
            let c = field_sum(cur)?;
            cur.expect(')')?;
            Ok(Factor::Const(c))
        }
        Some('w') => {
            cur.pos += 1;
            let k = cur.integer()?;
            if !(1..=MAX_LEVEL as i64).contains(&k) {
                return Err(cur.error(&format!("generator w{k} is outside the tower")));
            }
            Ok(Factor::Const(FieldElem::generator(k as u8)?))
        }
        Some('t') => {
            cur.pos += 1;
            if cur.eat('^') {
                Ok(Factor::Power(cur.integer()?))
            } else {
                Ok(Factor::Power(1))
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let n = cur.integer()?;
            match n {
                0 => Ok(Factor::Const(FieldElem::ZERO)),
                1 => Ok(Factor::Const(FieldElem::ONE)),
                _ => Ok(Factor::Const(if n % 2 == 0 { FieldElem::ZERO } else { FieldElem::ONE })),
            }
        }
        _ => Err(cur.error("expected a coefficient or a power of t")),
    }
}

/// Sum of products inside parentheses; powers of t are not allowed there.
fn field_sum(cur: &mut Cursor) -> Result<FieldElem> {
    let mut acc = FieldElem::ZERO;
    loop {
        let mut prod = FieldElem::ONE;
        loop {
            match factor(cur)? {
                Factor::Const(c) => prod = prod.mul(c),
                Factor::Power(_) => return Err(cur.error("t inside a coefficient")),
            }
            if !cur.eat('*') {
                break;
            }
        }
        acc = acc.add(prod);
        if !(cur.eat('+') || cur.eat('-')) {
            return Ok(acc);
        }
    }
}

/// Parses a field element literal such as `w1*w2+1`.
pub fn parse_field_elem(src: &str) -> Result<FieldElem> {
    let mut cur = Cursor::new(src);
    let x = field_sum(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(x)
}

/// Parses a series literal such as `t^-3 + (w1+1)*t^-1 + O(t^4)`.
///
/// `-` is accepted as a synonym for `+`.
pub fn parse_series(src: &str) -> Result<Series> {
    let mut cur = Cursor::new(src);
    let mut terms: Vec<(i64, FieldElem)> = Vec::new();
    let mut prec = None;
    loop {
        if cur.peek() == Some('O') {
            cur.pos += 1;
            cur.expect('(')?;
            cur.expect('t')?;
            let p = if cur.eat('^') { cur.integer()? } else { 1 };
            cur.expect(')')?;
            if prec.replace(p).is_some() {
                return Err(cur.error("more than one O(t^n) term"));
            }
        } else {
            let mut coeff = FieldElem::ONE;
            let mut exp = 0;
            loop {
                match factor(&mut cur)? {
                    Factor::Const(c) => coeff = coeff.mul(c),
                    Factor::Power(n) => exp += n,
                }
                if !cur.eat('*') {
                    break;
                }
            }
            terms.push((exp, coeff));
        }
        if cur.at_end() {
            break;
        }
        if !(cur.eat('+') || cur.eat('-')) {
            return Err(cur.error("expected `+` between terms"));
        }
    }
    if let Some(p) = prec {
        terms.retain(|(n, _)| *n < p);
    }
    Ok(Series::from_terms(terms, prec))
}

/// Parses `GF(2)`, `GF(4)`, `GF(16)`, `GF(256)`, ... or `GF(2^k)` with k a power of two.
pub fn parse_field(src: &str) -> Result<FieldCtx> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = s
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("field descriptor `{src}` is not GF(..)")))?;
    let degree: u64 = if let Some(k) = inner.strip_prefix("2^") {
        k.parse().map_err(|_| parse_err(format!("bad exponent in `{src}`")))?
    } else {
        let q: u64 = inner
            .parse()
            .map_err(|_| parse_err(format!("bad order in `{src}`")))?;
        if !q.is_power_of_two() || q < 2 {
            return Err(parse_err(format!("`{src}` is not a field of characteristic 2")));
        }
        q.trailing_zeros() as u64
    };
    if !degree.is_power_of_two() {
        return Err(parse_err(format!(
            "`{src}`: only degrees 2^j over GF(2) are supported"
        )));
    }
    let level = degree.trailing_zeros() as u8;
    FieldCtx::with_level(level).map_err(|e| parse_err(format!("`{src}`: {e}")))
}

/// Parses a break triple written `(a,b,c)` or `a,b,c`.
pub fn parse_triple(src: &str) -> Result<(i64, i64, i64)> {
    let s = src.trim();
    let s = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(parse_err(format!("`{src}` is not a triple of integers")));
    }
    let n = |p: &str| p.parse::<i64>().map_err(|_| parse_err(format!("`{p}` is not an integer")));
    Ok((n(parts[0])?, n(parts[1])?, n(parts[2])?))
}

/// The contents of an extension file.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub field: FieldCtx,
    pub first: Series,
    pub second: Series,
    pub top: Series,
    pub precision: Option<i64>,
}

impl ExtensionSpec {
    /// Builds a spec, sizing the field to the coefficients when `field` is `None`.
    pub fn new(
        field: Option<FieldCtx>,
        first: Series,
        second: Series,
        top: Series,
        precision: Option<i64>,
    ) -> Result<Self> {
        let needed = [&first, &second, &top]
            .iter()
            .map(|s| s.coeff_level())
            .max()
            .unwrap_or(0);
        let field = match field {
            Some(f) if f.top_level() < needed => {
                return Err(parse_err(format!(
                    "coefficients need GF(2^{}) but the field is {}",
                    1u32 << needed,
                    f.name()
                )))
            }
            Some(f) => f,
            None => FieldCtx::with_level(needed)?,
        };
        if let Some(p) = precision {
            if p <= 0 {
                return Err(parse_err(format!("precision must be positive, got {p}")));
            }
        }
        Ok(ExtensionSpec {
            field,
            first,
            second,
            top,
            precision,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut field = None;
        let mut moduli = None;
        let (mut f, mut g, mut h, mut precision) = (None, None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                parse_err(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let at = |e: Error| match e {
                Error::Parse(m) => parse_err(format!("line {}: {m}", lineno + 1)),
                other => other,
            };
            let slot = match key {
                "field" => {
                    field = Some(parse_field(value).map_err(at)?);
                    continue;
                }
                "moduli" => {
                    moduli = Some(value.to_string());
                    continue;
                }
                "precision" => {
                    let p = value.parse::<i64>().map_err(|_| {
                        parse_err(format!("line {}: precision `{value}` is not an integer", lineno + 1))
                    })?;
                    precision = Some(p);
                    continue;
                }
                "F" => &mut f,
                "G" => &mut g,
                "H" => &mut h,
                _ => return Err(parse_err(format!("line {}: unknown key `{key}`", lineno + 1))),
            };
            if slot.is_some() {
                return Err(parse_err(format!("line {}: `{key}` given twice", lineno + 1)));
            }
            *slot = Some(parse_series(value).map_err(at)?);
        }
        let f = f.ok_or_else(|| parse_err("missing `F`"))?;
        let g = g.ok_or_else(|| parse_err("missing `G`"))?;
        let spec = ExtensionSpec::new(field, f, g, h.unwrap_or_else(Series::zero), precision)?;
        if let Some(m) = moduli {
            let given: Vec<String> = m.split(',').map(|s| s.split_whitespace().collect()).collect();
            if given != spec.moduli() {
                return Err(parse_err(format!(
                    "moduli `{m}` differ from the fixed tower {}",
                    spec.moduli().join(", ")
                )));
            }
        }
        Ok(spec)
    }

    /// Defining polynomials of the field's levels above GF(2).
    pub fn moduli(&self) -> Vec<String> {
        self.field.levels().iter().skip(1).map(|l| l.modulus()).collect()
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field = {}", self.field.name())?;
        if self.field.top_level() > 0 {
            writeln!(f, "moduli = {}", self.moduli().join(", "))?;
        }
        writeln!(f, "F = {}", self.first)?;
        writeln!(f, "G = {}", self.second)?;
        writeln!(f, "H = {}", self.top)?;
        if let Some(p) = self.precision {
            writeln!(f, "precision = {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_literals() {
        let s = parse_series("t^-3 + w1*t^-1").unwrap();
        let w = FieldElem::generator(1).unwrap();
        assert_eq!(s, Series::t_poly(&[-3]).add(&Series::monomial(w, -1)));
        assert_eq!(s.to_string(), "t^-3 + w1*t^-1");
        let s = parse_series("(w1+1)*t^-5 + t^-5 + 1 + t").unwrap();
        assert_eq!(s.to_string(), "w1*t^-5 + 1 + t");
        assert!(parse_series("0").unwrap().is_exact_zero());
        let s = parse_series("t^-1 + t^2 + O(t^2)").unwrap();
        assert_eq!(s.prec(), Some(2));
        assert_eq!(s.to_string(), "t^-1 + O(t^2)");
        assert_eq!(parse_series("t^-3 - t^-1").unwrap(), Series::t_poly(&[-3, -1]));
        assert_eq!(parse_field_elem("w1*w2+w1").unwrap().to_string(), "w1*w2+w1");
    }

    #[test]
    fn bad_literals() {
        for bad in ["", "t^", "t^-x", "w9*t", "(t)", "t^-1 t^-3", "O(t^2) + O(t^3)"] {
            assert!(matches!(parse_series(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn fields() {
        assert_eq!(parse_field("GF(2)").unwrap().top_level(), 0);
        assert_eq!(parse_field("GF(4)").unwrap().top_level(), 1);
        assert_eq!(parse_field("GF(16)").unwrap().top_level(), 2);
        assert_eq!(parse_field("GF(2^32)").unwrap().top_level(), 5);
        assert!(parse_field("GF(8)").is_err());
        assert!(parse_field("GF(3)").is_err());
        assert!(parse_field("GF(2^128)").is_err());
    }

    #[test]
    fn triples() {
        assert_eq!(parse_triple("(1,3,4)").unwrap(), (1, 3, 4));
        assert_eq!(parse_triple(" 1, 3 ,4").unwrap(), (1, 3, 4));
        assert!(parse_triple("1,3").is_err());
    }

    #[test]
    fn spec_files() {
        let text = "# example\nfield = GF(4)\nF = t^-1\nG = w1*t^-1 # Type III\nprecision = 64\n";
        let spec = ExtensionSpec::parse(text).unwrap();
        assert_eq!(spec.field.top_level(), 1);
        assert!(spec.top.is_exact_zero());
        assert_eq!(spec.precision, Some(64));
        let rendered = spec.to_string();
        assert_eq!(
            rendered,
            "field = GF(4)\nmoduli = w1^2+w1+1\nF = t^-1\nG = w1*t^-1\nH = 0\nprecision = 64\n"
        );
        assert_eq!(ExtensionSpec::parse(&rendered).unwrap(), spec);

        assert!(ExtensionSpec::parse("F = t^-1\n").is_err());
        assert!(ExtensionSpec::parse("F = t^-1\nG = t^-3\nX = 1\n").is_err());
        assert!(ExtensionSpec::parse("field = GF(2)\nF = t^-1\nG = w1*t^-3\n").is_err());
        assert!(ExtensionSpec::parse("field = GF(4)\nmoduli = w1^2+1\nF = t^-1\nG = t^-3\n").is_err());
        let spec = ExtensionSpec::parse("F = t^-1\nG = w2*t^-3\n").unwrap();
        assert_eq!(spec.field.top_level(), 2);
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        proptest::collection::vec((-12i64..6, 0u64..16), 0..6).prop_map(|terms| {
            Series::from_terms(terms.into_iter().map(|(n, c)| (n, FieldElem::from_bits(c))), None)
        })
    }

    proptest! {
        #[test]
        fn series_round_trip(s in arb_series()) {
            prop_assert_eq!(parse_series(&s.to_string()).unwrap(), s);
        }

        #[test]
        fn spec_round_trip(f in arb_series(), g in arb_series(), h in arb_series(), p in proptest::option::of(1i64..500)) {
            let spec = ExtensionSpec::new(None, f, g, h, p).unwrap();
            let text = spec.to_string();
            let again = ExtensionSpec::parse(&text).unwrap();
            prop_assert_eq!(&again, &spec);
            prop_assert_eq!(again.to_string(), text);
        }
    }
}
