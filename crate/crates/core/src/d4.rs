//! Towers K[q, r] with q^2 + q = F and r^2 + r = G q + H.
//!
//! A triple (F, G, H) of standard-form series with F, G nonzero and distinct
//! describes a D4-extension; this module classifies raw triples, normalizes them,
//! lists the eight triples describing the same extension and constructs triples
//! with prescribed upper breaks.
//!
//! Equality of Artin-Schreier classes over the quadratic field M = K[q] is decided
//! inside K: for X in K, X lies in wp(M) exactly when its standard form is 0 or F.

use std::fmt;

use serde::Serialize;

use crate::artin_schreier::{reduce, standard_form};
use crate::breaks::{validate_upper, BreakSequence, DegreeProfile};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::series::Series;

/// Galois group of the Galois closure of K[q, r] over K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupTag {
    /// The top step is trivial: K[q, r] = K[q].
    Degenerate,
    KleinFour,
    CyclicFour,
    Dihedral8,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::Degenerate => "Degenerate",
            GroupTag::KleinFour => "KleinFour",
            GroupTag::CyclicFour => "CyclicFour",
            GroupTag::Dihedral8 => "Dihedral8",
        })
    }
}

/// Standard-form data (F, G, H) of a tower together with its degree profile.
#[derive(Clone, Debug, PartialEq)]
pub struct ASTriple {
    /// Generates the first quadratic step K[q].
    pub first: Series,
    /// Generates the second quadratic subfield K[s].
    pub second: Series,
    /// Constant part of the top step's Artin-Schreier element `second*q + top`.
    pub top: Series,
    pub profile: DegreeProfile,
}

fn degree_of(s: &Series) -> Result<i64> {
    s.degree()
}

impl ASTriple {
    /// Wraps standard-form series; no ordering of degrees is imposed.
    pub fn new(first: Series, second: Series, top: Series) -> Result<Self> {
        for (name, s) in [("F", &first), ("G", &second), ("H", &top)] {
            if !s.is_standard() || !s.is_exact() {
                return Err(Error::NotStandardForm(format!("{name} = {s}")));
            }
        }
        let profile = DegreeProfile {
            d: degree_of(&first.add(&second))?,
            f: degree_of(&first)?,
            g: degree_of(&second)?,
            h: degree_of(&top)?,
        };
        Ok(ASTriple {
            first,
            second,
            top,
            profile,
        })
    }

    /// Checks F != 0, G != 0, G != F.
    pub fn check_d4(&self) -> Result<()> {
        if self.first.is_zero() || self.second.is_zero() || self.first == self.second {
            return Err(Error::NotD4(self.tag().to_string()));
        }
        Ok(())
    }

    fn tag(&self) -> GroupTag {
        if self.second.is_zero() {
            GroupTag::KleinFour
        } else if self.second == self.first {
            GroupTag::CyclicFour
        } else {
            GroupTag::Dihedral8
        }
    }

    /// The triple with F and G exchanged: (G, F, std(H + FG)).
    pub fn swapped(&self, ctx: &mut FieldCtx) -> Result<Self> {
        let top = standard_form(&self.top.add(&self.first.mul(&self.second)), ctx)?;
        ASTriple::new(self.second.clone(), self.first.clone(), top)
    }

    /// Highest residue-field level used by the coefficients.
    pub fn coeff_level(&self) -> u8 {
        [&self.first, &self.second, &self.top]
            .iter()
            .map(|s| s.coeff_level())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ASTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F = {}, G = {}, H = {}", self.first, self.second, self.top)
    }
}

/// True if `x` becomes an Artin-Schreier value over K[q] where q^2 + q = `base`.
fn trivial_over(x: &Series, base: &Series, ctx: &mut FieldCtx) -> Result<bool> {
    let s = standard_form(x, ctx)?;
    Ok(s.is_zero() || &s == base)
}

/// Normalized (F, G, H) without the degree swap, plus the standard F.
fn normal_data(
    first: &Series,
    second: &Series,
    top: &Series,
    ctx: &mut FieldCtx,
) -> Result<(Series, Series, Series)> {
    let rf = reduce(first, ctx)?;
    let rg = reduce(second, ctx)?;
    if rf.standard.is_zero() {
        return Err(Error::InvalidInput(
            "F is an Artin-Schreier value: the first step is not a field extension".into(),
        ));
    }
    // G'q' + H' = G q + (H' + G' w_F + F w_G^2) modulo wp(K[q])
    let shifted = top
        .add(&second.mul(&rf.witness))
        .add(&rf.standard.mul(&rg.witness.square()));
    let h = standard_form(&shifted, ctx)?;
    Ok((rf.standard, rg.standard, h))
}

/// Galois group of the closure of the tower q^2 + q = F, r^2 + r = G q + H.
pub fn classify(first: &Series, second: &Series, top: &Series, ctx: &mut FieldCtx) -> Result<GroupTag> {
    let (f, g, h) = normal_data(first, second, top, ctx)?;
    Ok(if g.is_zero() {
        if trivial_over(&h, &f, ctx)? {
            GroupTag::Degenerate
        } else {
            GroupTag::KleinFour
        }
    } else if g == f {
        GroupTag::CyclicFour
    } else {
        GroupTag::Dihedral8
    })
}

/// Standard-form triple with f <= g generating the same D4-extension.
pub fn normalize_triple(
    first: &Series,
    second: &Series,
    top: &Series,
    ctx: &mut FieldCtx,
) -> Result<ASTriple> {
    let tag = classify(first, second, top, ctx)?;
    if tag != GroupTag::Dihedral8 {
        return Err(Error::NotD4(tag.to_string()));
    }
    let (f, g, h) = normal_data(first, second, top, ctx)?;
    let t = ASTriple::new(f, g, h)?;
    if t.profile.f > t.profile.g {
        t.swapped(ctx)
    } else {
        Ok(t)
    }
}

/// The eight standard-form triples describing the same D4-extension, starting with `t`.
pub fn orbit(t: &ASTriple, ctx: &mut FieldCtx) -> Result<Vec<ASTriple>> {
    t.check_d4()?;
    let (f, g, h) = (&t.first, &t.second, &t.top);
    let x = standard_form(&h.add(&f.mul(g)), ctx)?;
    let mut out = Vec::with_capacity(8);
    for (a, b, base) in [(f, g, h), (g, f, &x)] {
        for shift in [Series::zero(), a.clone(), b.clone(), a.add(b)] {
            out.push(ASTriple::new(a.clone(), b.clone(), base.add(&shift))?);
        }
    }
    Ok(out)
}

/// Whether two D4 triples describe the same extension.
pub fn same_extension(t1: &ASTriple, t2: &ASTriple, ctx: &mut FieldCtx) -> Result<bool> {
    t1.check_d4()?;
    t2.check_d4()?;
    let (f, g, h) = (&t1.first, &t1.second, &t1.top);
    let h2 = &t2.top;
    if &t2.first == f && &t2.second == g {
        return Ok(trivial_over(&h.add(h2), f, ctx)? || trivial_over(&h.add(h2).add(g), f, ctx)?);
    }
    if &t2.first == g && &t2.second == f {
        let x = h.add(&f.mul(g)).add(h2);
        return Ok(trivial_over(&x, g, ctx)? || trivial_over(&x.add(f), g, ctx)?);
    }
    Ok(false)
}

/// Artin-Schreier element `coefficient * var + constant` over a quadratic subfield.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeGenerator {
    pub field: String,
    pub var: char,
    pub coefficient: Series,
    pub constant: Series,
}

impl fmt::Display for RelativeGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ({})*{}", self.field, self.coefficient, self.var)?;
        if !self.constant.is_zero() {
            write!(f, " + {}", self.constant)?;
        }
        Ok(())
    }
}

/// Subfields of the D4-extension L = K[q, r, s] with their generators.
#[derive(Clone, Debug, PartialEq)]
pub struct SubfieldLattice {
    /// K[q], K[s], K[q+s] with their generators over K.
    pub quadratic: Vec<(String, Series)>,
    /// The Galois quartic K[q, s].
    pub normal_quartic: String,
    /// Non-normal quartics over K[q] then over K[s].
    pub non_normal: Vec<RelativeGenerator>,
}

impl fmt::Display for SubfieldLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "L = K[q,r,s]")?;
        for g in &self.non_normal {
            writeln!(f, "  {g}")?;
        }
        writeln!(f, "  {} (Galois over K)", self.normal_quartic)?;
        for (name, s) in &self.quadratic {
            writeln!(f, "  {name}: {s}")?;
        }
        write!(f, "K")
    }
}

pub fn lattice(t: &ASTriple) -> Result<SubfieldLattice> {
    t.check_d4()?;
    let (f, g, h) = (&t.first, &t.second, &t.top);
    let fg = h.add(&f.mul(g));
    let rel = |field: &str, var, coefficient: &Series, constant: Series| RelativeGenerator {
        field: field.to_string(),
        var,
        coefficient: coefficient.clone(),
        constant,
    };
    Ok(SubfieldLattice {
        quadratic: vec![
            ("K[q]".into(), f.clone()),
            ("K[s]".into(), g.clone()),
            ("K[q+s]".into(), f.add(g)),
        ],
        normal_quartic: "K[q,s]".into(),
        non_normal: vec![
            rel("K[q,r]", 'q', g, h.clone()),
            rel("K[q,r+s]", 'q', g, h.add(g)),
            rel("K[s,r+qs]", 's', f, fg.clone()),
            rel("K[s,r+qs+q]", 's', f, fg.add(f)),
        ],
    })
}

/// A D4 triple whose upper breaks are `u`.
pub fn witness_from_breaks(u: &BreakSequence, ctx: &mut FieldCtx) -> Result<ASTriple> {
    let Some((u1, u2, u3)) = u.as_triple() else {
        return Err(Error::InvalidBreaks(format!("{u}: need three upper breaks")));
    };
    if !validate_upper(u1, u2, u3) {
        return Err(Error::InvalidBreaks(format!("{u} is not a D4 upper sequence")));
    }
    let t = |n: i64| Series::monomial(FieldElem::ONE, -n);
    let (f, g, h) = if u1 < u2 && u3 != 2 * u2 {
        let h = if u3 > u1 + u2 { t(u3) } else { Series::zero() };
        (t(u1), t(u2), h)
    } else if u1 < u2 {
        (t(u2), t(u2).add(&t(u1)), Series::zero())
    } else {
        let omega = FieldElem::generator(1)?;
        ctx.absorb(omega);
        let h = if u3 > 2 * u2 { t(u3) } else { Series::zero() };
        (t(u1), Series::monomial(omega, -u1), h)
    };
    ASTriple::new(f, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breaks::d4_breaks;

    fn t(n: i64) -> Series {
        Series::monomial(FieldElem::ONE, n)
    }

    fn omega() -> FieldElem {
        FieldElem::generator(1).unwrap()
    }

    #[test]
    fn classification_examples() {
        let mut ctx = FieldCtx::new();
        assert_eq!(classify(&t(-1), &t(-1), &Series::zero(), &mut ctx).unwrap(), GroupTag::CyclicFour);
        assert_eq!(classify(&t(-1), &t(-3), &Series::zero(), &mut ctx).unwrap(), GroupTag::Dihedral8);
        assert_eq!(classify(&t(-1), &Series::zero(), &t(-3), &mut ctx).unwrap(), GroupTag::KleinFour);
        assert_eq!(classify(&t(-1), &Series::zero(), &t(-1), &mut ctx).unwrap(), GroupTag::Degenerate);
        assert_eq!(classify(&t(-1), &Series::zero(), &t(-2), &mut ctx).unwrap(), GroupTag::Degenerate);
        // G = wp(t^-1) is trivial, so only H decides
        let g = t(-1).wp();
        assert_eq!(classify(&t(-3), &g, &Series::zero(), &mut ctx).unwrap(), GroupTag::KleinFour);
        assert!(classify(&Series::one(), &t(-1), &Series::zero(), &mut ctx).is_err());
    }

    #[test]
    fn normalize_examples() {
        let mut ctx = FieldCtx::new();
        let n = normalize_triple(&t(-2), &t(-3), &Series::zero(), &mut ctx).unwrap();
        assert_eq!(n.first, t(-1));
        assert_eq!(n.second, t(-3));
        // H = std(G' * t^-1) = std(t^-4) = t^-1
        assert_eq!(n.top, t(-1));
        let orig = ASTriple::new(t(-1), t(-3), Series::zero()).unwrap();
        let again = normalize_triple(&orig.first, &orig.second, &orig.top, &mut ctx).unwrap();
        assert_eq!(again, orig);
        let sw = normalize_triple(&t(-3), &t(-1), &Series::zero(), &mut ctx).unwrap();
        assert_eq!(sw.first, t(-1));
        assert_eq!(sw.second, t(-3));
        assert_eq!(sw.top, t(-1)); // std(t^-4) = t^-1
        let back = ASTriple::new(t(-3), t(-1), Series::zero()).unwrap();
        assert!(same_extension(&back, &sw, &mut ctx).unwrap());
        assert!(matches!(
            normalize_triple(&t(-1), &t(-1), &Series::zero(), &mut ctx),
            Err(Error::NotD4(_))
        ));
    }

    #[test]
    fn orbit_is_eight_distinct() {
        let mut ctx = FieldCtx::new();
        let tr = ASTriple::new(t(-1), t(-3), t(-5)).unwrap();
        let o = orbit(&tr, &mut ctx).unwrap();
        assert_eq!(o.len(), 8);
        assert_eq!(o[0], tr);
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(i == j, o[i] == o[j]);
                assert!(same_extension(&o[i], &o[j], &mut ctx).unwrap());
            }
        }
    }

    #[test]
    fn distinct_extensions() {
        let mut ctx = FieldCtx::new();
        let a = ASTriple::new(t(-1), t(-3), Series::zero()).unwrap();
        let b = ASTriple::new(t(-1), t(-3), t(-5)).unwrap();
        assert!(!same_extension(&a, &b, &mut ctx).unwrap());
    }

    #[test]
    fn lattice_labels() {
        let mut ctx = FieldCtx::new();
        let tr = ASTriple::new(t(-1), t(-3), Series::zero()).unwrap();
        let l = lattice(&tr).unwrap();
        let quad: Vec<Series> = l.quadratic.iter().map(|q| q.1.clone()).collect();
        assert_eq!(quad, vec![t(-1), t(-3), Series::t_poly(&[-3, -1])]);
        assert_eq!(l.non_normal[2].coefficient, t(-1));
        assert_eq!(l.non_normal[2].constant, t(-4));
        // swapping F and G exchanges the two sides of the lattice
        let sw = tr.swapped(&mut ctx).unwrap();
        let ls = lattice(&sw).unwrap();
        for (a, b) in l.non_normal.iter().zip(ls.non_normal[2..].iter().chain(&ls.non_normal[..2])) {
            assert_eq!(a.coefficient, b.coefficient);
            let pair = [&a.constant, &b.constant];
            let diff = standard_form(&pair[0].add(pair[1]), &mut ctx).unwrap();
            assert!(diff.is_zero() || diff == b.coefficient);
        }
    }

    #[test]
    fn witnesses() {
        let mut ctx = FieldCtx::new();
        let w = witness_from_breaks(&BreakSequence::upper(&[1, 3, 4]).unwrap(), &mut ctx).unwrap();
        assert_eq!((w.first.clone(), w.second.clone(), w.top.clone()), (t(-1), t(-3), Series::zero()));
        let w = witness_from_breaks(&BreakSequence::upper(&[1, 3, 6]).unwrap(), &mut ctx).unwrap();
        assert_eq!((w.first.clone(), w.second.clone()), (t(-3), Series::t_poly(&[-3, -1])));
        assert_eq!(ctx.top_level(), 0);
        let w = witness_from_breaks(&BreakSequence::upper(&[1, 1, 2]).unwrap(), &mut ctx).unwrap();
        assert_eq!(w.second, Series::monomial(omega(), -1));
        assert_eq!(ctx.name(), "GF(4)");
        assert!(witness_from_breaks(&BreakSequence::upper(&[1, 3, 8]).unwrap(), &mut ctx).is_err());
    }

    #[test]
    fn witness_round_trip() {
        let mut ctx = FieldCtx::new();
        for g in (1..=15).step_by(2) {
            for f in (1..=g).step_by(2) {
                for u3 in 1..=40 {
                    if !validate_upper(f, g, u3) {
                        continue;
                    }
                    let u = BreakSequence::upper(&[f, g, u3]).unwrap();
                    let w = witness_from_breaks(&u, &mut ctx).unwrap();
                    assert_eq!(d4_breaks(&w.profile).unwrap().upper, u);
                    assert_eq!(classify(&w.first, &w.second, &w.top, &mut ctx).unwrap(), GroupTag::Dihedral8);
                }
            }
        }
    }
}
