//! Chains of deformations that lower the second upper break to 1.

use std::fmt;

use serde::Serialize;

use crate::breaks::{
    d4_breaks, is_supersimple, sequence_type, validate_upper, BreakSequence, DegreeProfile,
    SequenceType,
};
use crate::d4::ASTriple;
use crate::deform::{deform, verify_fibers, Deformation, FiberVerification};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanStep {
    pub seq_type: SequenceType,
    pub which: Deformation,
    pub from: DegreeProfile,
    pub to: DegreeProfile,
    pub upper_from: BreakSequence,
    pub upper_to: BreakSequence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionPlan {
    pub start: DegreeProfile,
    pub steps: Vec<PlanStep>,
    /// Upper breaks of the supersimple extension the chain ends at.
    pub terminal: BreakSequence,
}

impl fmt::Display for ReductionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "step {}: {} {} {} -> {} | u: {} -> {}",
                i + 1,
                s.seq_type,
                s.which,
                s.from,
                s.to,
                s.upper_from,
                s.upper_to
            )?;
        }
        write!(f, "terminal: u = {} (supersimple)", self.terminal)
    }
}

/// Plans the reduction of a degree profile.
pub fn plan_profile(start: &DegreeProfile) -> Result<ReductionPlan> {
    let mut current = *start;
    let mut upper = d4_breaks(&current)?.upper;
    let mut steps = Vec::new();
    while upper.values[1] > 1 {
        let seq_type = sequence_type(&current)?;
        let which = Deformation::for_type(seq_type);
        let next = which.fiber_profile(&current)?;
        let next_upper = d4_breaks(&next)?.upper;
        steps.push(PlanStep {
            seq_type,
            which,
            from: current,
            to: next,
            upper_from: upper,
            upper_to: next_upper.clone(),
        });
        current = next;
        upper = next_upper;
    }
    Ok(ReductionPlan {
        start: *start,
        steps,
        terminal: upper,
    })
}

/// Plans the reduction of a D4 triple.
pub fn plan(t: &ASTriple) -> Result<ReductionPlan> {
    let invalid = |e: Error| Error::InvalidTriple(format!("{t}: {e}"));
    t.check_d4().map_err(invalid)?;
    plan_profile(&t.profile).map_err(invalid)
}

/// Outcome of [`check_plan`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanCheck {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// Re-validates every step of a plan without trusting how it was produced.
pub fn check_plan(p: &ReductionPlan) -> PlanCheck {
    let mut diagnostics = Vec::new();
    let mut current = p.start;
    let initial = match d4_breaks(&p.start) {
        Ok(b) => b.upper,
        Err(e) => {
            return PlanCheck {
                ok: false,
                diagnostics: vec![format!("start profile {}: {e}", p.start)],
            }
        }
    };
    let u2 = initial.values[1];
    let expected_steps = ((u2 - 1) / 2) as usize;
    if p.steps.len() != expected_steps {
        diagnostics.push(format!(
            "{} steps, expected {expected_steps} for u2 = {u2}",
            p.steps.len()
        ));
    }
    let mut upper = initial;
    for (i, s) in p.steps.iter().enumerate() {
        let n = i + 1;
        if s.from != current {
            diagnostics.push(format!("step {n}: starts at {}, previous state {current}", s.from));
        }
        if s.upper_from != upper {
            diagnostics.push(format!("step {n}: upper {} but state has {upper}", s.upper_from));
        }
        match sequence_type(&s.from) {
            Ok(ty) if ty == s.seq_type && Deformation::for_type(ty) == s.which => {}
            Ok(ty) => diagnostics.push(format!(
                "step {n}: {ty} should use {}, plan uses {}",
                Deformation::for_type(ty),
                s.which
            )),
            Err(e) => diagnostics.push(format!("step {n}: {e}")),
        }
        match s.which.fiber_profile(&s.from) {
            Ok(to) if to == s.to => {}
            Ok(to) => diagnostics.push(format!("step {n}: output {} but fiber rule gives {to}", s.to)),
            Err(e) => diagnostics.push(format!("step {n}: {e}")),
        }
        match d4_breaks(&s.to) {
            Ok(b) if b.upper == s.upper_to => {}
            Ok(b) => diagnostics.push(format!(
                "step {n}: output upper {} but profile gives {}",
                s.upper_to, b.upper
            )),
            Err(e) => diagnostics.push(format!("step {n}: {e}")),
        }
        if let Some((a, b, c)) = s.upper_to.as_triple() {
            if !validate_upper(a, b, c) {
                diagnostics.push(format!("step {n}: {} is not realizable", s.upper_to));
            }
            if b != s.upper_from.values[1] - 2 {
                diagnostics.push(format!("step {n}: u2 does not drop by 2"));
            }
        }
        current = s.to;
        upper = s.upper_to.clone();
    }
    if p.terminal != upper {
        diagnostics.push(format!("terminal {} but last state has {upper}", p.terminal));
    }
    if !is_supersimple(&p.terminal) {
        diagnostics.push(format!("terminal {} is not supersimple", p.terminal));
    }
    PlanCheck {
        ok: diagnostics.is_empty(),
        diagnostics,
    }
}

/// A concrete triple with the given profile: monomials, plus a GF(4) twist for Type III.
pub fn triple_for_profile(p: &DegreeProfile, ctx: &mut FieldCtx) -> Result<ASTriple> {
    p.validate()?;
    let t = |n: i64, c: FieldElem| Series::monomial(c, -n);
    let one = FieldElem::ONE;
    let h = if p.h == 0 { Series::zero() } else { t(p.h, one) };
    let (f, g) = match sequence_type(p)? {
        SequenceType::TypeI => (t(p.f, one), t(p.g, one)),
        SequenceType::TypeII => (t(p.f, one), t(p.g, one).add(&t(p.d, one))),
        SequenceType::TypeIII => {
            let w = FieldElem::generator(1)?;
            ctx.absorb(w);
            (t(p.f, one), t(p.g, w))
        }
    };
    let triple = ASTriple::new(f, g, h)?;
    debug_assert_eq!(&triple.profile, p);
    Ok(triple)
}

/// Runs [`verify_fibers`] on every step: the given triple first, then concrete triples
/// realizing each intermediate profile.
pub fn deep_verify(
    t: &ASTriple,
    p: &ReductionPlan,
    ctx: &mut FieldCtx,
) -> Result<Vec<FiberVerification>> {
    let mut out = Vec::new();
    let mut current = t.clone();
    for (i, s) in p.steps.iter().enumerate() {
        if i > 0 {
            current = triple_for_profile(&s.from, ctx)?;
        }
        let rep = deform(s.which, &current)?;
        if rep.fiber_at_zero.profile != s.to {
            return Err(Error::VerificationMismatch {
                clause: "plan".into(),
                detail: format!(
                    "step {}: deformation gives {}, plan says {}",
                    i + 1,
                    rep.fiber_at_zero.profile,
                    s.to
                ),
            });
        }
        out.push(verify_fibers(&rep, ctx)?);
    }
    Ok(out)
}
