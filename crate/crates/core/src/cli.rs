//! Command implementations behind the `d4ram` binary.
//!
//! Each command returns human-readable text together with a [`Report`]; the binary only
//! parses arguments, chooses one of the two to print, and maps errors to exit codes.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use crate::artin_schreier::standard_form;
use crate::breaks::{
    d4_breaks, different_degree, herbrand, validate_upper, BreakKind, BreakSequence,
    DegreeProfile,
};
use crate::d4::{classify as classify_group, lattice as subfields, normalize_triple, orbit as orbit_of, witness_from_breaks, ASTriple};
use crate::deform::{deform as run_deform, deform_auto, verify_fibers, Deformation};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::input::{parse_field, parse_series, ExtensionSpec};
use crate::oracle::build_tower;
use crate::planner::{check_plan, deep_verify, plan as plan_triple, triple_for_profile};
use crate::report::Report;
use crate::series::{Series, DEFAULT_PRECISION};

/// Environment variable overriding the default precision.
pub const PRECISION_ENV: &str = "D4RAM_PRECISION";

/// Output of one command.
#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub report: Report,
}

/// Where an extension comes from: a file and/or inline flags (flags win).
#[derive(Clone, Debug, Default)]
pub struct InputArgs<'a> {
    pub file: Option<&'a Path>,
    pub first: Option<&'a str>,
    pub second: Option<&'a str>,
    pub top: Option<&'a str>,
    pub field: Option<&'a str>,
    pub precision: Option<i64>,
}

pub fn load(args: &InputArgs) -> Result<ExtensionSpec> {
    let base = match args.file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            Some(ExtensionSpec::parse(&text)?)
        }
        None => None,
    };
    let pick = |flag: Option<&str>, from_file: Option<&Series>, name: &str| -> Result<Series> {
        match (flag, from_file) {
            (Some(s), _) => parse_series(s),
            (None, Some(s)) => Ok(s.clone()),
            (None, None) if name == "H" => Ok(Series::zero()),
            (None, None) => Err(Error::Parse(format!("no {name} given (use --{name} or a spec file)"))),
        }
    };
    let f = pick(args.first, base.as_ref().map(|b| &b.first), "F")?;
    let g = pick(args.second, base.as_ref().map(|b| &b.second), "G")?;
    let h = pick(args.top, base.as_ref().map(|b| &b.top), "H")?;
    let field = match args.field {
        Some(d) => Some(parse_field(d)?),
        None => base.as_ref().map(|b| b.field.clone()),
    };
    let precision = args.precision.or(base.as_ref().and_then(|b| b.precision));
    ExtensionSpec::new(field, f, g, h, precision)
}

/// Precision from the spec, else the environment, else `fallback`.
pub fn resolve_precision(spec: &ExtensionSpec, fallback: i64) -> Result<i64> {
    if let Some(p) = spec.precision {
        return Ok(p);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|p| *p > 0)
            .ok_or_else(|| Error::Parse(format!("{PRECISION_ENV}=`{v}` is not a positive integer"))),
        Err(_) => Ok(fallback),
    }
}

/// Oracle precision when none is requested: room for four times the largest break.
pub fn oracle_precision(p: &DegreeProfile) -> Result<i64> {
    let l3 = d4_breaks(p)?.lower.values[2];
    Ok(4 * (l3 + 8))
}

fn normalized(spec: &ExtensionSpec) -> Result<(ASTriple, FieldCtx)> {
    let mut ctx = spec.field.clone();
    let t = normalize_triple(&spec.first, &spec.second, &spec.top, &mut ctx)?;
    Ok((t, ctx))
}

fn triple_spec(t: &ASTriple, ctx: &FieldCtx, precision: Option<i64>) -> Result<ExtensionSpec> {
    ExtensionSpec::new(
        Some(ctx.clone()),
        t.first.clone(),
        t.second.clone(),
        t.top.clone(),
        precision,
    )
}

fn breaks_text(b: &crate::breaks::D4Breaks) -> String {
    format!(
        "upper {}\nlower {}\ntype {}\ndelta {}",
        b.upper,
        b.lower,
        b.seq_type,
        different_degree(&b.lower)
    )
}

pub fn classify(spec: &ExtensionSpec) -> Result<Output> {
    let mut ctx = spec.field.clone();
    let tag = classify_group(&spec.first, &spec.second, &spec.top, &mut ctx)?;
    let mut report = Report::new("classify");
    let mut text = format!("group {tag}");
    if tag == crate::d4::GroupTag::Dihedral8 {
        let t = normalize_triple(&spec.first, &spec.second, &spec.top, &mut ctx)?;
        let b = d4_breaks(&t.profile)?;
        write!(text, "\nprofile {}\ntype {}", t.profile, b.seq_type).unwrap();
        report = report.with_breaks(t.profile, &b);
    }
    write!(text, "\nfield {}", ctx.name()).unwrap();
    report.group = Some(tag);
    report.field = Some(ctx.name());
    Ok(Output { text, report })
}

pub fn normalize(spec: &ExtensionSpec) -> Result<Output> {
    let (t, ctx) = normalized(spec)?;
    let out = triple_spec(&t, &ctx, spec.precision)?;
    let mut report = Report::new("normalize");
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.profile = Some(t.profile);
    report.field = Some(ctx.name());
    report.details = json!({
        "F": t.first.to_string(),
        "G": t.second.to_string(),
        "H": t.top.to_string(),
    });
    Ok(Output {
        text: out.to_string().trim_end().to_string(),
        report,
    })
}

pub fn breaks(spec: &ExtensionSpec) -> Result<Output> {
    let (t, ctx) = normalized(spec)?;
    let b = d4_breaks(&t.profile)?;
    let mut report = Report::new("breaks").with_breaks(t.profile, &b);
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.field = Some(ctx.name());
    Ok(Output {
        text: format!("profile {}\n{}", t.profile, breaks_text(&b)),
        report,
    })
}

pub fn orbit(spec: &ExtensionSpec) -> Result<Output> {
    let (t, mut ctx) = normalized(spec)?;
    let members = orbit_of(&t, &mut ctx)?;
    let mut text = String::new();
    for (i, m) in members.iter().enumerate() {
        writeln!(text, "{}: F = {} ; G = {} ; H = {}", i + 1, m.first, m.second, m.top).unwrap();
    }
    let mut report = Report::new("orbit");
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.profile = Some(t.profile);
    report.field = Some(ctx.name());
    report.details = json!(members
        .iter()
        .map(|m| json!({"F": m.first.to_string(), "G": m.second.to_string(), "H": m.top.to_string()}))
        .collect::<Vec<_>>());
    Ok(Output {
        text: text.trim_end().to_string(),
        report,
    })
}

pub fn lattice(spec: &ExtensionSpec) -> Result<Output> {
    let (t, ctx) = normalized(spec)?;
    let lat = subfields(&t)?;
    let mut report = Report::new("lattice");
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.profile = Some(t.profile);
    report.field = Some(ctx.name());
    report.details = json!({
        "quadratic": lat.quadratic.iter().map(|(n, s)| json!({"field": n, "generator": s.to_string()})).collect::<Vec<_>>(),
        "normal_quartic": lat.normal_quartic,
        "non_normal": lat.non_normal.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    });
    Ok(Output {
        text: lat.to_string(),
        report,
    })
}

/// A D4 triple realizing the given breaks (lower breaks are converted first).
pub fn witness(values: (i64, i64, i64), kind: BreakKind) -> Result<Output> {
    let seq = BreakSequence::new(kind, vec![values.0, values.1, values.2])?;
    let upper = match kind {
        BreakKind::Upper => seq,
        BreakKind::Lower => herbrand(&seq).map_err(|e| Error::InvalidBreaks(format!("{e}")))?,
    };
    let mut ctx = FieldCtx::new();
    let t = witness_from_breaks(&upper, &mut ctx)?;
    let b = d4_breaks(&t.profile)?;
    let spec = triple_spec(&t, &ctx, None)?;
    let mut report = Report::new("witness").with_breaks(t.profile, &b);
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.field = Some(ctx.name());
    report.details = json!({"F": t.first.to_string(), "G": t.second.to_string(), "H": t.top.to_string()});
    Ok(Output {
        text: format!("{}profile {}\n{}", spec, t.profile, breaks_text(&b)),
        report,
    })
}

/// Runs a deformation (`None` picks it by type) and verifies its fibers.
pub fn deform(spec: &ExtensionSpec, which: Option<Deformation>) -> Result<Output> {
    let (t, mut ctx) = normalized(spec)?;
    let rep = match which {
        Some(w) => run_deform(w, &t)?,
        None => deform_auto(&t)?,
    };
    let check = verify_fibers(&rep, &mut ctx)?;
    let mut text = rep.to_string();
    for c in &check.checks {
        write!(text, "\n  check {}: {}", c.clause, c.detail).unwrap();
    }
    let mut report = Report::new("deform").with_breaks(t.profile, &rep.source_breaks);
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.ledger = Some(rep.ledger);
    report.field = Some(ctx.name());
    report.details = json!({
        "which": rep.which.number(),
        "fiber_at_t": rep.fiber_at_zero,
        "fiber_at_pi": rep.fiber_at_pi,
        "verification": check,
        "deformed": {"F": rep.first.to_string(), "G": rep.second.to_string(), "H": rep.top.to_string()},
    });
    Ok(Output { text, report })
}

pub fn plan(spec: &ExtensionSpec, deep: bool) -> Result<Output> {
    let (t, mut ctx) = normalized(spec)?;
    let p = plan_triple(&t)?;
    let check = check_plan(&p);
    if !check.ok {
        return Err(Error::VerificationMismatch {
            clause: "plan".into(),
            detail: check.diagnostics.join("; "),
        });
    }
    let mut text = p.to_string();
    let mut details = json!({"terminal": p.terminal.values, "check": check});
    if deep {
        let runs = deep_verify(&t, &p, &mut ctx)?;
        write!(text, "\ndeep verification: {} step(s) passed", runs.len()).unwrap();
        details["deep"] = json!(runs);
    }
    let b = d4_breaks(&t.profile)?;
    let mut report = Report::new("plan").with_breaks(t.profile, &b);
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.plan_steps = Some(p.steps.clone());
    report.field = Some(ctx.name());
    report.details = details;
    Ok(Output { text, report })
}

/// Builds the tower explicitly and compares its filtration with the closed form.
pub fn oracle(spec: &ExtensionSpec) -> Result<Output> {
    let (t, ctx) = normalized(spec)?;
    let precision = resolve_precision(spec, oracle_precision(&t.profile)?)?;
    let tower = build_tower(&t, precision)?;
    let shape = tower.group_shape()?;
    let fil = tower.filtration()?;
    let formula = d4_breaks(&t.profile)?;
    let agree = fil.lower == formula.lower && fil.different == different_degree(&formula.lower);
    let mut text = format!("group {shape} (presentation checked)\n");
    for (desc, i) in &fil.numbers {
        writeln!(text, "  i({desc}) = {i}").unwrap();
    }
    write!(
        text,
        "lower {} delta {}\nformula lower {} delta {}\n{}",
        fil.lower,
        fil.different,
        formula.lower,
        different_degree(&formula.lower),
        if agree { "agree" } else { "DISAGREE" }
    )
    .unwrap();
    let mut report = Report::new("oracle");
    report.group = Some(crate::d4::GroupTag::Dihedral8);
    report.profile = Some(t.profile);
    report.breaks_lower = Some(fil.lower.values.clone());
    report.breaks_upper = Some(herbrand(&fil.lower)?.values);
    report.seq_type = Some(formula.seq_type);
    report.delta = Some(fil.different);
    report.field = Some(ctx.name());
    report.details = json!({
        "precision": precision,
        "ramification_numbers": fil.numbers,
        "agrees_with_formula": agree,
    });
    if !agree {
        return Err(Error::VerificationMismatch {
            clause: "oracle".into(),
            detail: text,
        });
    }
    Ok(Output { text, report })
}

/// Every realizable upper triple with third break at most `max_u3`, each with a witness.
pub fn enumerate(max_u3: i64) -> Result<Output> {
    let mut triples = Vec::new();
    for c in 1..=max_u3 {
        for b in (1..=c).step_by(2) {
            for a in (1..=b).step_by(2) {
                if validate_upper(a, b, c) {
                    triples.push((a, b, c));
                }
            }
        }
    }
    let rows = triples
        .par_iter()
        .map(|&(a, b, c)| {
            let mut ctx = FieldCtx::new();
            let t = witness_from_breaks(&BreakSequence::upper(&[a, b, c])?, &mut ctx)?;
            let br = d4_breaks(&t.profile)?;
            Ok(((a, b, c), t.profile, br))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    for ((a, b, c), p, br) in &rows {
        writeln!(text, "({a},{b},{c}) profile {p} lower {} {}", br.lower, br.seq_type).unwrap();
    }
    write!(text, "{} triples", rows.len()).unwrap();
    let mut report = Report::new("enumerate");
    report.details = json!(rows
        .iter()
        .map(|(u, p, br)| json!({"upper": [u.0, u.1, u.2], "profile": p, "lower": br.lower.values, "type": br.seq_type}))
        .collect::<Vec<_>>());
    Ok(Output { text, report })
}

/// Oracle against closed form for every profile with d, f, g, h drawn from {1, 3, 5}.
pub fn selftest() -> Result<Output> {
    let vals = [1i64, 3, 5];
    let mut profiles = Vec::new();
    for &d in &vals {
        for &f in &vals {
            for &g in &vals {
                for h in [0, 1, 3, 5] {
                    let p = DegreeProfile::new(d, f, g, h);
                    if d4_breaks(&p).is_ok() {
                        profiles.push(p);
                    }
                }
            }
        }
    }
    let results = profiles
        .par_iter()
        .map(|p| {
            let mut ctx = FieldCtx::new();
            let t = triple_for_profile(p, &mut ctx)?;
            let fil = build_tower(&t, oracle_precision(p)?.max(DEFAULT_PRECISION))?.filtration()?;
            let b = d4_breaks(p)?;
            Ok((*p, fil.lower == b.lower && fil.different == different_degree(&b.lower)))
        })
        .collect::<Result<Vec<_>>>()?;
    let failed: Vec<String> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(p, _)| p.to_string())
        .collect();
    let mut report = Report::new("selftest");
    report.details = json!({"towers": results.len(), "failed": failed});
    if !failed.is_empty() {
        return Err(Error::VerificationMismatch {
            clause: "selftest".into(),
            detail: format!("oracle disagrees on {}", failed.join(", ")),
        });
    }
    Ok(Output {
        text: format!("selftest: {} towers, oracle agrees with the closed form on all", results.len()),
        report,
    })
}

/// Reduces each series to standard form, for callers that want to inspect inputs.
pub fn standardize(spec: &ExtensionSpec) -> Result<(Series, Series, Series)> {
    let mut ctx = spec.field.clone();
    Ok((
        standard_form(&spec.first, &mut ctx)?,
        standard_form(&spec.second, &mut ctx)?,
        standard_form(&spec.top, &mut ctx)?,
    ))
}
