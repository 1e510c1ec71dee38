//! Closed-form ramification data of D4-extensions.
//!
//! Everything here is integer arithmetic on degree profiles and break sequences.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// The t^-1 degrees of F+G, F, G and H (h = 0 when H = 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeProfile {
    pub d: i64,
    pub f: i64,
    pub g: i64,
    pub h: i64,
}

impl DegreeProfile {
    pub const fn new(d: i64, f: i64, g: i64, h: i64) -> Self {
        DegreeProfile { d, f, g, h }
    }

    /// Third upper break `max{f+g, h}`.
    pub fn u3(&self) -> i64 {
        (self.f + self.g).max(self.h)
    }

    /// Checks the shape conditions a standard-form D4 triple imposes.
    pub fn validate(&self) -> Result<()> {
        let DegreeProfile { d, f, g, h } = *self;
        let odd_pos = |x: i64| x > 0 && x % 2 == 1;
        if !(odd_pos(d) && odd_pos(f) && odd_pos(g)) {
            return Err(Error::InvalidProfile(format!(
                "{self}: d, f, g must be positive and odd"
            )));
        }
        if h != 0 && !odd_pos(h) {
            return Err(Error::InvalidProfile(format!(
                "{self}: h must be 0 or positive and odd"
            )));
        }
        if f > g {
            return Err(Error::InvalidProfile(format!("{self}: needs f <= g")));
        }
        Ok(())
    }
}

impl fmt::Display for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.d, self.f, self.g, self.h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BreakKind {
    Lower,
    Upper,
}

/// Lower or upper ramification breaks of a totally ramified 2-group of order 2, 4 or 8.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BreakSequence {
    pub kind: BreakKind,
    pub values: Vec<i64>,
}

impl BreakSequence {
    pub fn new(kind: BreakKind, values: Vec<i64>) -> Result<Self> {
        if values.is_empty() || values.len() > 3 {
            return Err(Error::InvalidBreaks(format!(
                "expected 1 to 3 breaks, got {}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v < 1) {
            return Err(Error::InvalidBreaks(format!("{values:?}: breaks must be positive")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidBreaks(format!("{values:?}: breaks must be nondecreasing")));
        }
        Ok(BreakSequence { kind, values })
    }

    pub fn upper(values: &[i64]) -> Result<Self> {
        Self::new(BreakKind::Upper, values.to_vec())
    }

    pub fn lower(values: &[i64]) -> Result<Self> {
        Self::new(BreakKind::Lower, values.to_vec())
    }

    pub fn group_order(&self) -> u32 {
        1 << self.values.len()
    }

    pub fn as_triple(&self) -> Option<(i64, i64, i64)> {
        match self.values[..] {
            [a, b, c] => Some((a, b, c)),
            _ => None,
        }
    }
}

impl fmt::Display for BreakSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Which group the second lower ramification group is: V4, Z/4 or Z/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SequenceType {
    TypeI,
    TypeII,
    TypeIII,
}

impl fmt::Display for SequenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceType::TypeI => "TypeI",
            SequenceType::TypeII => "TypeII",
            SequenceType::TypeIII => "TypeIII",
        })
    }
}

/// Result of composing two degree-2 extensions with known conductors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Composition {
    /// Distinct conductors: everything is forced.
    Determined {
        c3: i64,
        over_small: i64,
        over_large: i64,
    },
    /// Equal conductors: the third subfield's conductor must be supplied.
    NeedsC3,
}

/// Conductors of the compositum of two degree-2 extensions with conductors `c1`, `c2`.
///
/// `over_small` is the conductor of the compositum over the field with the smaller
/// conductor, `over_large` over the other one.
pub fn compose_conductors(c1: i64, c2: i64) -> Composition {
    let (lo, hi) = (c1.min(c2), c1.max(c2));
    if lo == hi {
        return Composition::NeedsC3;
    }
    Composition::Determined {
        c3: hi,
        over_small: 2 * hi - lo,
        over_large: lo,
    }
}

/// Relative conductors when `c1 = c2` and the third conductor `c3 <= c1` is known.
pub fn compose_equal(c: i64, c3: i64) -> Result<(i64, i64)> {
    if c3 > c || c3 < 1 {
        return Err(Error::InvalidInput(format!(
            "third conductor {c3} must lie in 1..={c}"
        )));
    }
    Ok((c3, c3))
}

/// Conductors of the degree-2 subfields and of the top step over K[q].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConductorSet {
    pub c_q: i64,
    pub c_s: i64,
    pub c_qs: i64,
    pub c_r: i64,
}

pub fn conductors(p: &DegreeProfile) -> ConductorSet {
    ConductorSet {
        c_q: p.f,
        c_s: p.g,
        c_qs: p.d,
        c_r: 2 * p.u3() - p.f,
    }
}

/// Breaks predicted by the degree profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D4Breaks {
    pub lower: BreakSequence,
    pub upper: BreakSequence,
    #[serde(rename = "type")]
    pub seq_type: SequenceType,
}

pub fn sequence_type(p: &DegreeProfile) -> Result<SequenceType> {
    let DegreeProfile { d, f, g, .. } = *p;
    if f < d && d == g {
        Ok(SequenceType::TypeI)
    } else if d < f && f == g {
        Ok(SequenceType::TypeII)
    } else if d == f && f == g {
        Ok(SequenceType::TypeIII)
    } else {
        Err(Error::InvalidProfile(format!(
            "{p} is not the profile of a standard-form D4 triple"
        )))
    }
}

pub fn d4_breaks(p: &DegreeProfile) -> Result<D4Breaks> {
    p.validate()?;
    let seq_type = sequence_type(p)?;
    let u1 = p.d.min(p.f);
    let u2 = p.g;
    let u3 = p.u3();
    Ok(D4Breaks {
        upper: BreakSequence::upper(&[u1, u2, u3])?,
        lower: BreakSequence::lower(&[u1, 2 * u2 - u1, 4 * u3 - 2 * u2 - u1])?,
        seq_type,
    })
}

fn exact_div(num: i64, den: i64, what: &str) -> Result<i64> {
    if num % den != 0 {
        return Err(Error::NonIntegralResult(format!("{what} = {num}/{den}")));
    }
    Ok(num / den)
}

/// Converts between lower and upper numbering via Herbrand's function.
pub fn herbrand(seq: &BreakSequence) -> Result<BreakSequence> {
    let v = &seq.values;
    match seq.kind {
        BreakKind::Lower => {
            let mut out = vec![v[0]];
            if v.len() >= 2 {
                out.push(exact_div(v[0] + v[1], 2, "u2")?);
            }
            if v.len() == 3 {
                out.push(exact_div(2 * v[0] + v[1] + v[2], 4, "u3")?);
            }
            BreakSequence::upper(&out)
        }
        BreakKind::Upper => {
            let mut out = vec![v[0]];
            if v.len() >= 2 {
                out.push(2 * v[1] - v[0]);
            }
            if v.len() == 3 {
                out.push(4 * v[2] - 2 * v[1] - v[0]);
            }
            BreakSequence::lower(&out)
        }
    }
}

/// Whether (alpha, beta, gamma) is the upper break sequence of some D4-extension.
pub fn validate_upper(alpha: i64, beta: i64, gamma: i64) -> bool {
    alpha > 0
        && alpha % 2 == 1
        && alpha <= beta
        && beta % 2 == 1
        && gamma >= alpha + beta
        && (gamma % 2 == 1 || gamma == alpha + beta || gamma == 2 * beta)
}

/// Whether (a, b, c) is the lower break sequence of some D4-extension.
pub fn validate_lower(a: i64, b: i64, c: i64) -> bool {
    a > 0
        && a % 2 == 1
        && a <= b
        && (b - a) % 4 == 0
        && c >= 4 * a + b
        && ((c - b) % 8 == 0 || c == 4 * a + b || c == 2 * a + 3 * b)
}

pub fn is_supersimple(upper: &BreakSequence) -> bool {
    upper.kind == BreakKind::Upper && upper.values.len() == 3 && upper.values[1] == 1
}

/// Degree of the different from the lower breaks (Hilbert's formula).
pub fn different_degree(lower: &BreakSequence) -> i64 {
    match lower.values[..] {
        [l1] => l1 + 1,
        [l1, l2] => 2 * l1 + l2 + 3,
        [l1, l2, l3] => 4 * l1 + 2 * l2 + l3 + 7,
        _ => unreachable!("break sequences have 1 to 3 entries"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn upper(v: &[i64]) -> BreakSequence {
        BreakSequence::upper(v).unwrap()
    }

    fn lower(v: &[i64]) -> BreakSequence {
        BreakSequence::lower(v).unwrap()
    }

    #[test]
    fn composition() {
        assert_eq!(
            compose_conductors(1, 3),
            Composition::Determined {
                c3: 3,
                over_small: 5,
                over_large: 1
            }
        );
        assert_eq!(compose_conductors(3, 3), Composition::NeedsC3);
        assert_eq!(compose_equal(1, 1).unwrap(), (1, 1));
        assert!(compose_equal(3, 5).is_err());
    }

    #[test]
    fn profile_breaks() {
        let b = d4_breaks(&DegreeProfile::new(3, 1, 3, 0)).unwrap();
        assert_eq!(b.upper, upper(&[1, 3, 4]));
        assert_eq!(b.lower, lower(&[1, 5, 9]));
        assert_eq!(b.seq_type, SequenceType::TypeI);

        let b = d4_breaks(&DegreeProfile::new(1, 3, 3, 0)).unwrap();
        assert_eq!(b.upper, upper(&[1, 3, 6]));
        assert_eq!(b.lower, lower(&[1, 5, 17]));
        assert_eq!(b.seq_type, SequenceType::TypeII);

        let b = d4_breaks(&DegreeProfile::new(1, 1, 1, 0)).unwrap();
        assert_eq!(b.upper, upper(&[1, 1, 2]));
        assert_eq!(b.lower, lower(&[1, 1, 5]));
        assert_eq!(b.seq_type, SequenceType::TypeIII);

        assert!(d4_breaks(&DegreeProfile::new(1, 3, 5, 0)).is_err());
        assert!(d4_breaks(&DegreeProfile::new(3, 3, 1, 0)).is_err());
        assert!(d4_breaks(&DegreeProfile::new(3, 1, 3, 4)).is_err());
    }

    #[test]
    fn herbrand_examples() {
        assert_eq!(herbrand(&lower(&[1, 5, 9])).unwrap(), upper(&[1, 3, 4]));
        assert_eq!(herbrand(&upper(&[1, 1, 2])).unwrap(), lower(&[1, 1, 5]));
        assert_eq!(herbrand(&lower(&[1, 1, 1])).unwrap(), upper(&[1, 1, 1]));
        assert!(matches!(
            herbrand(&lower(&[1, 2, 3])),
            Err(Error::NonIntegralResult(_))
        ));
    }

    #[test]
    fn predicates() {
        assert!(validate_upper(1, 3, 4));
        assert!(!validate_upper(1, 3, 8));
        assert!(!validate_upper(3, 1, 4));
        assert!(validate_lower(1, 5, 9));
        assert!(validate_lower(1, 5, 17));
        assert!(!validate_lower(1, 5, 15));
        assert!(is_supersimple(&upper(&[1, 1, 2])));
        assert!(!is_supersimple(&upper(&[1, 3, 4])));
        assert!(is_supersimple(&upper(&[1, 1, 3])));
    }

    #[test]
    fn different_examples() {
        assert_eq!(different_degree(&lower(&[1, 5, 9])), 30);
        assert_eq!(2 * different_degree(&lower(&[1, 1])), 12);
        assert_eq!(2 * different_degree(&lower(&[1, 5])), 20);
        assert_eq!(different_degree(&lower(&[1, 1, 9])), 22);
        assert_eq!(different_degree(&lower(&[3])), 4);
    }

    #[test]
    fn condcor_consistency() {
        // Z/4 sub-tower: F = G, so the top conductor is 2 max{2f, h} - f
        for f in [1i64, 3, 5] {
            for h in [0i64, 1, 3, 5, 7, 9, 11, 13] {
                let p = DegreeProfile::new(1, f, f, h);
                assert_eq!(conductors(&p).c_r, 2 * (2 * f).max(h) - f);
            }
        }
    }

    fn profile() -> impl Strategy<Value = DegreeProfile> {
        (0i64..8, 0i64..8, 0i64..8, 0i64..16, 0u8..3).prop_filter_map(
            "valid profile",
            |(a, b, c, h, kind)| {
                let (f, g) = (2 * a.min(b) + 1, 2 * a.max(b) + 1);
                let h = if h == 0 { 0 } else { 2 * h - 1 };
                let d = match kind {
                    0 if f < g => g,
                    1 if f == g && 2 * c + 1 < f => 2 * c + 1,
                    2 if f == g => f,
                    _ => return None,
                };
                Some(DegreeProfile::new(d, f, g, h))
            },
        )
    }

    proptest! {
        #[test]
        fn breaks_are_realizable(p in profile()) {
            let b = d4_breaks(&p).unwrap();
            let (u1, u2, u3) = b.upper.as_triple().unwrap();
            let (l1, l2, l3) = b.lower.as_triple().unwrap();
            prop_assert!(validate_upper(u1, u2, u3));
            prop_assert!(validate_lower(l1, l2, l3));
            prop_assert!(l3 > l2);
            prop_assert_eq!(herbrand(&b.lower).unwrap(), b.upper.clone());
            prop_assert_eq!(herbrand(&b.upper).unwrap(), b.lower.clone());
            prop_assert_eq!(b.seq_type == SequenceType::TypeIII, u1 == u2);
            if u3 < 2 * u2 {
                prop_assert_eq!(b.seq_type, SequenceType::TypeI);
            }
            if u1 < u2 && u3 == 2 * u2 {
                prop_assert_eq!(b.seq_type, SequenceType::TypeII);
            }
        }
    }
}
