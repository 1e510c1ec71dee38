//! Equicharacteristic deformations over k[[pi]] and their branch-fiber bookkeeping.
//!
//! Each deformation replaces (F, G, H) by rational functions in t with an extra pole at
//! `t = pi`. Over the generic fiber the ramification splits between `(t)` and `(t - pi)`;
//! the report predicts both fibers and the different-degree ledger that forces flatness.

use std::fmt;

use serde::Serialize;

use crate::artin_schreier::{reduce_with, ConstantPolicy};
use crate::breaks::{
    d4_breaks, different_degree, sequence_type, validate_upper, BreakSequence, D4Breaks,
    DegreeProfile, SequenceType,
};
use crate::d4::{ASTriple, GroupTag};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::series::{BiRational, Coefficient, PiElem, PiSeries, Series};

/// The three deformations, in the order they are introduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Deformation {
    /// Type I: keeps F, moves a double pole of G and H to `t = pi`.
    First,
    /// Type II: moves the leading term of F and G, and a fourfold pole of H.
    Second,
    /// `u1 > 1`: moves a double pole of F and G and a fourfold pole of H.
    Third,
}

impl Deformation {
    pub fn number(self) -> u8 {
        match self {
            Deformation::First => 1,
            Deformation::Second => 2,
            Deformation::Third => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Deformation::First),
            2 => Ok(Deformation::Second),
            3 => Ok(Deformation::Third),
            _ => Err(Error::InvalidInput(format!("no deformation numbered {n}"))),
        }
    }

    /// The deformation the reduction uses for a given sequence type.
    pub fn for_type(t: SequenceType) -> Self {
        match t {
            SequenceType::TypeI => Deformation::First,
            SequenceType::TypeII => Deformation::Second,
            SequenceType::TypeIII => Deformation::Third,
        }
    }

    /// Inertia group above `t = pi`.
    pub fn inertia_at_pi(self) -> GroupTag {
        match self {
            Deformation::First => GroupTag::KleinFour,
            Deformation::Second => GroupTag::CyclicFour,
            Deformation::Third => GroupTag::Dihedral8,
        }
    }

    /// Contribution of `t = pi` to the different, once its bounded conductor is pinned.
    pub fn contribution_at_pi(self) -> i64 {
        match self {
            Deformation::First => 12,
            Deformation::Second => 20,
            Deformation::Third => 22,
        }
    }

    /// How far H's pole order drops at `t = 0`.
    fn top_shift(self) -> i64 {
        match self {
            Deformation::First => 2,
            _ => 4,
        }
    }

    /// Checks that the deformation applies to a profile.
    pub fn check_applies(self, p: &DegreeProfile) -> Result<()> {
        let found = sequence_type(p)?;
        let wrong = |expected: SequenceType| Error::WrongType {
            which: self.number(),
            expected: expected.to_string(),
            found: found.to_string(),
        };
        match self {
            Deformation::First if found != SequenceType::TypeI => Err(wrong(SequenceType::TypeI)),
            Deformation::Second if found != SequenceType::TypeII => {
                Err(wrong(SequenceType::TypeII))
            }
            Deformation::Third if p.d.min(p.f) <= 1 => Err(Error::BreakTooSmall),
            _ => Ok(()),
        }
    }

    /// Degree profile of the generic fiber above `t = 0`.
    pub fn fiber_profile(self, p: &DegreeProfile) -> Result<DegreeProfile> {
        p.validate()?;
        self.check_applies(p)?;
        let h = if p.h > self.top_shift() { p.h - self.top_shift() } else { 0 };
        Ok(match self {
            Deformation::First => DegreeProfile::new(p.g - 2, p.f, p.g - 2, h),
            Deformation::Second => DegreeProfile::new(p.d, p.f - 2, p.g - 2, h),
            Deformation::Third => DegreeProfile::new(p.d - 2, p.f - 2, p.g - 2, h),
        })
    }

    /// Upper breaks above `t = 0` as shifts of the original ones.
    pub fn shifted_upper(self, u: &BreakSequence) -> Result<BreakSequence> {
        let v = &u.values;
        let (a, b, c) = match self {
            Deformation::First => (0, 2, 2),
            Deformation::Second => (0, 2, 4),
            Deformation::Third => (2, 2, 4),
        };
        BreakSequence::upper(&[v[0] - a, v[1] - b, v[2] - c])
    }

    /// Lower breaks above `t = 0` as shifts of the original ones.
    pub fn shifted_lower(self, l: &BreakSequence) -> Result<BreakSequence> {
        let v = &l.values;
        let (a, b, c) = match self {
            Deformation::First => (0, 4, 4),
            Deformation::Second => (0, 4, 12),
            Deformation::Third => (2, 2, 10),
        };
        BreakSequence::lower(&[v[0] - a, v[1] - b, v[2] - c])
    }

    /// Lower breaks above `t = pi` given the conductor `b` of the top step there.
    fn lower_at_pi(self, b: i64) -> Result<BreakSequence> {
        match self {
            Deformation::First => BreakSequence::lower(&[1, 1]),
            Deformation::Second => BreakSequence::lower(&[1, b]),
            Deformation::Third => BreakSequence::lower(&[1, 1, 2 * b - 1]),
        }
    }

    /// Different contribution of `t = pi` for a given conductor `b`.
    ///
    /// Non-D4 inertia means the fiber splits into two conjugate points.
    fn pi_different(self, b: i64) -> Result<i64> {
        let lower = self.lower_at_pi(b)?;
        let factors = if self == Deformation::Third { 1 } else { 2 };
        Ok(factors * different_degree(&lower))
    }
}

impl fmt::Display for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deform{}", self.number())
    }
}

/// Ramification above `t = 0` on the generic fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberAtZero {
    pub profile: DegreeProfile,
    pub breaks: D4Breaks,
}

/// Ramification above `t = pi` on the generic fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberAtPi {
    pub inertia: GroupTag,
    pub lower: BreakSequence,
}

/// Different degrees: the special fiber against the two generic branch points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub special: i64,
    pub at_zero: i64,
    pub at_pi: i64,
}

impl Ledger {
    pub fn balances(&self) -> bool {
        self.special == self.at_zero + self.at_pi
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.balances() { "=" } else { "!=" };
        write!(f, "{} {sign} {} + {}", self.special, self.at_zero, self.at_pi)
    }
}

/// A deformed triple with its predicted fibers.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationReport {
    pub which: Deformation,
    pub source: ASTriple,
    pub source_breaks: D4Breaks,
    pub first: BiRational,
    pub second: BiRational,
    pub top: BiRational,
    pub fiber_at_zero: FiberAtZero,
    pub fiber_at_pi: FiberAtPi,
    pub ledger: Ledger,
}

impl fmt::Display for DeformationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on {} ({})", self.which, self.source.profile, self.source_breaks.seq_type)?;
        writeln!(f, "  F~ = {}", self.first)?;
        writeln!(f, "  G~ = {}", self.second)?;
        writeln!(f, "  H~ = {}", self.top)?;
        writeln!(
            f,
            "  at t:      profile {} upper {} lower {} ({})",
            self.fiber_at_zero.profile,
            self.fiber_at_zero.breaks.upper,
            self.fiber_at_zero.breaks.lower,
            self.fiber_at_zero.breaks.seq_type
        )?;
        writeln!(
            f,
            "  at t-pi:   inertia {} lower {}",
            self.fiber_at_pi.inertia, self.fiber_at_pi.lower
        )?;
        write!(f, "  different: {}", self.ledger)
    }
}

fn leading_coefficient(s: &Series) -> Result<Series> {
    let (n, a) = s.leading()?;
    Ok(Series::monomial(a, n))
}

/// Builds the deformed triple and its predicted fibers.
pub fn deform(which: Deformation, t: &ASTriple) -> Result<DeformationReport> {
    t.check_d4()?;
    let source_breaks = d4_breaks(&t.profile)?;
    let profile = which.fiber_profile(&t.profile)?;
    let (f, g, h) = (&t.first, &t.second, &t.top);
    let lift = BiRational::from_series;
    let (first, second, top) = match which {
        Deformation::First => (lift(f), lift(g).twist(2, 2), lift(h).twist(2, 2)),
        Deformation::Second => {
            let moved = |s: &Series| -> Result<BiRational> {
                let lead = leading_coefficient(s)?;
                Ok(lift(&s.add(&lead)).add(&lift(&lead).twist(2, 2)))
            };
            (moved(f)?, moved(g)?, lift(h).twist(4, 4))
        }
        Deformation::Third => (lift(f).twist(2, 2), lift(g).twist(2, 2), lift(h).twist(4, 4)),
    };
    let breaks = d4_breaks(&profile)?;
    let special = different_degree(&source_breaks.lower);
    let at_pi = which.contribution_at_pi();
    Ok(DeformationReport {
        which,
        source: t.clone(),
        source_breaks,
        first,
        second,
        top,
        ledger: Ledger {
            special,
            at_zero: different_degree(&breaks.lower),
            at_pi,
        },
        fiber_at_zero: FiberAtZero { profile, breaks },
        fiber_at_pi: FiberAtPi {
            inertia: which.inertia_at_pi(),
            lower: which.lower_at_pi(pinned_conductor(which))?,
        },
    })
}

/// The conductor above `t = pi` that the different inequality forces.
fn pinned_conductor(which: Deformation) -> i64 {
    match which {
        Deformation::First => 1,
        _ => 5,
    }
}

pub fn deform1(t: &ASTriple) -> Result<DeformationReport> {
    deform(Deformation::First, t)
}

pub fn deform2(t: &ASTriple) -> Result<DeformationReport> {
    deform(Deformation::Second, t)
}

pub fn deform3(t: &ASTriple) -> Result<DeformationReport> {
    deform(Deformation::Third, t)
}

/// Picks the deformation the reduction would use.
pub fn deform_auto(t: &ASTriple) -> Result<DeformationReport> {
    let ty = sequence_type(&t.profile)?;
    deform(Deformation::for_type(ty), t)
}

/// One passed clause of [`verify_fibers`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: &'static str,
    pub detail: String,
}

/// Evidence collected by [`verify_fibers`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberVerification {
    pub checks: Vec<ClauseCheck>,
    /// Upper bound on the top-step conductor above `t = pi` found by reduction.
    pub conductor_bound: i64,
    /// The value the ledger forces.
    pub conductor: i64,
}

pub const CLAUSE_VALUATIONS: &str = "valuations";
pub const CLAUSE_PROFILE: &str = "profile";
pub const CLAUSE_BOUNDS: &str = "bounds";
pub const CLAUSE_LEDGER: &str = "ledger";
pub const CLAUSE_SPECIAL_FIBER: &str = "special-fiber";

fn mismatch(clause: &str, detail: impl Into<String>) -> Error {
    Error::VerificationMismatch {
        clause: clause.to_string(),
        detail: detail.into(),
    }
}

/// Pole order of a series whose known terms start before its precision.
fn pole_order(s: &PiSeries) -> i64 {
    s.terms()
        .find(|(_, c)| !c.is_certainly_zero())
        .map(|(n, _)| (-n).max(0))
        .unwrap_or(0)
}

/// Pole orders of a fiber expansion before and after standard-form reduction.
struct FiberReduction {
    raw: i64,
    standard: i64,
    /// Pole order of the reduction witness.
    witness: i64,
    leading: Option<PiElem>,
}

fn reduce_fiber(s: &PiSeries, ctx: &mut FieldCtx) -> Result<FiberReduction> {
    let r = reduce_with(s, ctx, ConstantPolicy::Absorb)?;
    let leading = r.standard.terms().next().map(|(_, c)| c.clone());
    Ok(FiberReduction {
        raw: pole_order(s),
        standard: pole_order(&r.standard),
        witness: pole_order(&r.witness),
        leading,
    })
}

const EXPANSION_MARGIN: i64 = 6;

fn at_zero(b: &BiRational) -> Result<PiSeries> {
    let low = b.numerator().terms().next().map(|(n, _)| n).unwrap_or(0);
    b.expand_at_zero((-low).max(0) + EXPANSION_MARGIN)
}

fn at_pi(b: &BiRational) -> Result<PiSeries> {
    b.expand_at_pi(b.pole() as i64 + EXPANSION_MARGIN)
}

/// Largest odd standard-form degree a series of pole order at most `n` can reduce to.
fn standard_bound(n: i64) -> i64 {
    if n <= 0 {
        0
    } else if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

/// Re-derives every fiber claim of a report by expansion and reduction.
///
/// Checks, in order: the valuations used at both branch points, the profile above
/// `t = 0`, the conductor bounds above `t = pi`, the different ledger, and recovery of the
/// original triple at `pi = 0`.
pub fn verify_fibers(rep: &DeformationReport, ctx: &mut FieldCtx) -> Result<FiberVerification> {
    let which = rep.which;
    let p = rep.source.profile;
    let mut checks = Vec::new();
    let sum = rep.first.add(&rep.second);

    // behavior at t = 0
    let z_first = reduce_fiber(&at_zero(&rep.first)?, ctx)?;
    let z_second = reduce_fiber(&at_zero(&rep.second)?, ctx)?;
    let z_sum = reduce_fiber(&at_zero(&sum)?, ctx)?;
    let z_top = reduce_fiber(&at_zero(&rep.top)?, ctx)?;
    let h_drop = if p.h == 0 { 0 } else { p.h - which.top_shift() };
    let expected_zero = match which {
        Deformation::First => [p.f, p.g - 2, p.g - 2],
        Deformation::Second => [p.f - 2, p.g - 2, p.d],
        Deformation::Third => [p.f - 2, p.g - 2, p.d - 2],
    };
    let found_zero = [z_first.raw, z_second.raw, z_sum.raw];
    if found_zero != expected_zero || z_top.raw.max(0) != h_drop.max(0) {
        return Err(mismatch(
            CLAUSE_VALUATIONS,
            format!(
                "pole orders at t of (F~, G~, F~+G~, H~) are ({},{},{},{}), expected ({},{},{},{})",
                found_zero[0], found_zero[1], found_zero[2], z_top.raw,
                expected_zero[0], expected_zero[1], expected_zero[2], h_drop.max(0)
            ),
        ));
    }
    if which == Deformation::First && p.f == p.g - 2 {
        let lead = z_sum.leading.clone().ok_or_else(|| {
            mismatch(CLAUSE_VALUATIONS, "F~+G~ reduces to zero at t")
        })?;
        if lead.is_residue_constant() {
            return Err(mismatch(
                CLAUSE_VALUATIONS,
                format!("leading coefficient {lead} of F~+G~ at t lies in k"),
            ));
        }
    }

    // behavior at t = pi
    let p_first = reduce_fiber(&at_pi(&rep.first)?, ctx)?;
    let p_second = reduce_fiber(&at_pi(&rep.second)?, ctx)?;
    let p_sum = reduce_fiber(&at_pi(&sum)?, ctx)?;
    let p_top = reduce_fiber(&at_pi(&rep.top)?, ctx)?;
    let expected_pi = match which {
        Deformation::First => [0, 2, 2],
        Deformation::Second => [2, 2, 0],
        Deformation::Third => [2, 2, 2],
    };
    let found_pi = [p_first.raw, p_second.raw, p_sum.raw];
    let top_limit = which.top_shift();
    if found_pi != expected_pi || p_top.raw > top_limit {
        return Err(mismatch(
            CLAUSE_VALUATIONS,
            format!(
                "pole orders at t-pi of (F~, G~, F~+G~) are {found_pi:?}, expected {expected_pi:?}; H~ has {} (limit {top_limit})",
                p_top.raw
            ),
        ));
    }
    if which == Deformation::Second && !sum.same_function(&BiRational::from_series(&rep.source.first.add(&rep.source.second))) {
        return Err(mismatch(CLAUSE_VALUATIONS, "F~+G~ differs from F+G"));
    }
    checks.push(ClauseCheck {
        clause: CLAUSE_VALUATIONS,
        detail: format!(
            "at t: F~,G~,F~+G~ have poles {found_zero:?}, H~ {}; at t-pi: {found_pi:?}, H~ {}",
            z_top.raw, p_top.raw
        ),
    });

    // profile above t = 0
    let computed = DegreeProfile::new(z_sum.standard, z_first.standard, z_second.standard, z_top.standard);
    if computed != rep.fiber_at_zero.profile {
        return Err(mismatch(
            CLAUSE_PROFILE,
            format!("reduced degrees {computed}, report says {}", rep.fiber_at_zero.profile),
        ));
    }
    let breaks = d4_breaks(&computed)?;
    let shifted_upper = which.shifted_upper(&rep.source_breaks.upper)?;
    let shifted_lower = which.shifted_lower(&rep.source_breaks.lower)?;
    let (u1, u2, u3) = breaks.upper.as_triple().expect("three upper breaks");
    if breaks != rep.fiber_at_zero.breaks
        || breaks.upper != shifted_upper
        || breaks.lower != shifted_lower
        || !validate_upper(u1, u2, u3)
    {
        return Err(mismatch(
            CLAUSE_PROFILE,
            format!(
                "fiber breaks upper {} lower {}, expected shifts upper {shifted_upper} lower {shifted_lower}",
                breaks.upper, breaks.lower
            ),
        ));
    }
    checks.push(ClauseCheck {
        clause: CLAUSE_PROFILE,
        detail: format!("{computed}, upper {}, lower {}", breaks.upper, breaks.lower),
    });

    // conductors above t = pi
    let trivial_step = match which {
        Deformation::First => &p_first,
        Deformation::Second => &p_sum,
        Deformation::Third => &p_first,
    };
    let ramified: Vec<&FiberReduction> = match which {
        Deformation::First => vec![&p_second, &p_sum],
        Deformation::Second => vec![&p_first, &p_second],
        Deformation::Third => vec![&p_first, &p_second, &p_sum],
    };
    if which != Deformation::Third && trivial_step.standard != 0 {
        return Err(mismatch(
            CLAUSE_BOUNDS,
            format!("expected a split quadratic step at t-pi, got degree {}", trivial_step.standard),
        ));
    }
    if let Some(bad) = ramified.iter().find(|r| r.standard != 1) {
        return Err(mismatch(
            CLAUSE_BOUNDS,
            format!("quadratic conductor at t-pi is {}, expected 1", bad.standard),
        ));
    }
    // Pole order of the top step's Artin-Schreier element after moving F, G to standard form.
    let j_pole = match which {
        Deformation::First => p_second.raw.max(p_top.raw),
        _ => {
            let q_shift = p_first.witness;
            let s_shift = p_second.witness;
            (p_second.standard + q_shift)
                .max(p_first.raw + 2 * s_shift)
                .max(p_top.raw)
        }
    };
    let j_bound = standard_bound(j_pole);
    let conductor_bound = match which {
        Deformation::First => j_bound,
        _ => 2 * j_bound.max(2) - 1,
    };
    let paper_bound = match which {
        Deformation::First => 1,
        _ => 5,
    };
    if conductor_bound > paper_bound {
        return Err(mismatch(
            CLAUSE_BOUNDS,
            format!("top conductor bound {conductor_bound} exceeds {paper_bound}"),
        ));
    }
    checks.push(ClauseCheck {
        clause: CLAUSE_BOUNDS,
        detail: format!("top step pole <= {j_pole}, conductor <= {conductor_bound}"),
    });

    // the different ledger pins the bounded conductor
    let at_zero = different_degree(&breaks.lower);
    let ledger = rep.ledger;
    if ledger.special != different_degree(&rep.source_breaks.lower) || ledger.at_zero != at_zero {
        return Err(mismatch(
            CLAUSE_LEDGER,
            format!("ledger {ledger} does not match recomputed differents"),
        ));
    }
    if !ledger.balances() {
        return Err(mismatch(CLAUSE_LEDGER, format!("ledger {ledger} does not balance")));
    }
    let needed = ledger.special - at_zero;
    let conductor = (1..=conductor_bound)
        .filter(|b| b % 2 == 1)
        .find(|&b| which.pi_different(b).ok() == Some(needed))
        .ok_or_else(|| {
            mismatch(
                CLAUSE_LEDGER,
                format!("no conductor <= {conductor_bound} gives contribution {needed} at t-pi"),
            )
        })?;
    if which.pi_different(conductor)? != which.contribution_at_pi()
        || ledger.at_pi != which.contribution_at_pi()
        || rep.fiber_at_pi.lower != which.lower_at_pi(conductor)?
    {
        return Err(mismatch(
            CLAUSE_LEDGER,
            format!("pinned conductor {conductor} disagrees with the report"),
        ));
    }
    checks.push(ClauseCheck {
        clause: CLAUSE_LEDGER,
        detail: format!("{ledger}, conductor at t-pi pinned to {conductor}"),
    });

    // special fiber
    for (name, deformed, original) in [
        ("F", &rep.first, &rep.source.first),
        ("G", &rep.second, &rep.source.second),
        ("H", &rep.top, &rep.source.top),
    ] {
        let back = deformed.special_fiber()?;
        if &back != original {
            return Err(mismatch(
                CLAUSE_SPECIAL_FIBER,
                format!("{name}~ at pi = 0 is {back}, expected {original}"),
            ));
        }
    }
    checks.push(ClauseCheck {
        clause: CLAUSE_SPECIAL_FIBER,
        detail: "F~, G~, H~ reduce to F, G, H at pi = 0".into(),
    });

    Ok(FiberVerification {
        checks,
        conductor_bound,
        conductor,
    })
}
