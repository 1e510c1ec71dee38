//! Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use d4ram::artin_schreier::{equivalent, reduce};
use d4ram::breaks::{
    compose_conductors, compose_equal, d4_breaks, different_degree, herbrand, is_supersimple,
    validate_lower, validate_upper, BreakSequence, Composition, DegreeProfile, SequenceType,
};
use d4ram::cli::oracle_precision;
use d4ram::d4::{classify, orbit, same_extension, witness_from_breaks, ASTriple, GroupTag};
use d4ram::deform::{deform, verify_fibers, Deformation};
use d4ram::oracle::{biquadratic_tower, build_tower, relative_conductors};
use d4ram::planner::{check_plan, deep_verify, plan_profile, triple_for_profile};
use d4ram::{FieldCtx, FieldElem, Series};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn t(n: i64) -> Series {
    Series::monomial(FieldElem::ONE, -n)
}

fn omega() -> FieldElem {
    FieldElem::generator(1).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

/// Triples with f, g in {1,3,5,7} (either order), every realizable d, h up to f+g+4.
fn small_triples() -> Vec<ASTriple> {
    let degs = [1i64, 3, 5, 7];
    let mut out = Vec::new();
    for &f in &degs {
        for &g in &degs {
            let mut pairs: Vec<(Series, Series)> = Vec::new();
            if f != g {
                pairs.push((t(f), t(g)));
            } else {
                for d in (1..f).step_by(2) {
                    pairs.push((t(f), t(f).add(&t(d))));
                }
                pairs.push((t(f), Series::monomial(omega(), -f)));
            }
            for (a, b) in pairs {
                for h in std::iter::once(0).chain((1..=f + g + 4).step_by(2)) {
                    let top = if h == 0 { Series::zero() } else { t(h) };
                    out.push(ASTriple::new(a.clone(), b.clone(), top).unwrap());
                }
            }
        }
    }
    out
}

fn normalized(tr: &ASTriple) -> ASTriple {
    if tr.profile.f > tr.profile.g {
        tr.swapped(&mut FieldCtx::with_level(1).unwrap()).unwrap()
    } else {
        tr.clone()
    }
}

fn criterion_1() -> Outcome {
    let triples = small_triples();
    for tr in &triples {
        let formula = d4_breaks(&normalized(tr).profile).map_err(e2s("closed form"))?;
        let prec = oracle_precision(&normalized(tr).profile).unwrap();
        ensure(prec <= 256, || format!("{tr}: precision {prec} above 256"))?;
        let fil = build_tower(tr, prec)
            .and_then(|tw| tw.filtration())
            .map_err(|e| format!("{tr}: {e}"))?;
        ensure(fil.lower == formula.lower, || {
            format!("{tr}: oracle lower {} vs closed form {}", fil.lower, formula.lower)
        })?;
        let delta = different_degree(&formula.lower);
        ensure(fil.different == delta, || {
            format!("{tr}: oracle different {} vs {delta}", fil.different)
        })?;
    }
    Ok(format!("{} towers, lower breaks and different agree exactly", triples.len()))
}

fn random_standard(rng: &mut ChaCha8Rng, max_deg: i64) -> Series {
    let deg = 2 * rng.gen_range(0..=(max_deg - 1) / 2) + 1;
    let mut terms = vec![(-deg, FieldElem::from_bits(rng.gen_range(1..4)))];
    for n in (1..deg).step_by(2) {
        if rng.gen_bool(0.4) {
            terms.push((-n, FieldElem::from_bits(rng.gen_range(1..4))));
        }
    }
    Series::from_terms(terms, None)
}

fn random_d4(rng: &mut ChaCha8Rng, max_fg: i64, max_h: i64) -> ASTriple {
    loop {
        let f = random_standard(rng, max_fg);
        let g = random_standard(rng, max_fg);
        let h = if rng.gen_bool(0.2) {
            Series::zero()
        } else {
            random_standard(rng, max_h)
        };
        let mut ctx = FieldCtx::with_level(1).unwrap();
        if classify(&f, &g, &h, &mut ctx) == Ok(GroupTag::Dihedral8) {
            return ASTriple::new(f, g, h).unwrap();
        }
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b17);
    let mut towers = 0;
    let count = 60;
    for i in 0..count {
        // half the sample stays inside the oracle range
        let tr = if i % 2 == 0 {
            random_d4(&mut rng, 7, 11)
        } else {
            random_d4(&mut rng, 15, 31)
        };
        let mut ctx = FieldCtx::with_level(1).unwrap();
        let members = orbit(&tr, &mut ctx).map_err(e2s("orbit"))?;
        ensure(members.len() == 8, || format!("{tr}: orbit has {}", members.len()))?;
        for (a, x) in members.iter().enumerate() {
            for y in &members[a + 1..] {
                ensure(x != y, || format!("{tr}: repeated orbit member {x}"))?;
            }
            let tag = classify(&x.first, &x.second, &x.top, &mut ctx).map_err(e2s("classify"))?;
            ensure(tag == GroupTag::Dihedral8, || format!("{x}: classified {tag}"))?;
            for y in &members {
                let same = same_extension(x, y, &mut ctx).map_err(e2s("same_extension"))?;
                ensure(same, || format!("{x} and {y} not recognized as the same extension"))?;
            }
        }
        let p = normalized(&tr).profile;
        if p.f <= 7 && p.g <= 7 && p.h <= p.f + p.g + 4 {
            let prec = oracle_precision(&p).unwrap();
            let mut first = None;
            for m in &members {
                let fil = build_tower(m, prec)
                    .and_then(|tw| tw.filtration())
                    .map_err(|e| format!("{m}: {e}"))?;
                towers += 1;
                let key = (fil.lower.clone(), fil.different);
                match &first {
                    None => first = Some(key),
                    Some(k) => ensure(k == &key, || format!("{m}: filtration differs inside the orbit"))?,
                }
            }
        }
    }
    Ok(format!("{count} random triples, orbits of 8 verified; {towers} orbit towers share filtrations"))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for c1 in (1..=9).step_by(2) {
        for c2 in (1..=9).step_by(2) {
            let mut cases: Vec<(Series, Series)> = Vec::new();
            if c1 != c2 {
                cases.push((t(c1), t(c2)));
            } else {
                cases.push((t(c1), Series::monomial(omega(), -c1)));
                for c3 in (1..c1).step_by(2) {
                    cases.push((t(c1), t(c1).add(&t(c3))));
                }
            }
            for (a, b) in cases {
                let tw = biquadratic_tower(&a, &b, 256).map_err(e2s("tower"))?;
                let rc = relative_conductors(&tw).map_err(e2s("conductors"))?;
                match compose_conductors(c1, c2) {
                    Composition::Determined { c3, over_small, over_large } => {
                        let (over_first, over_second) = if c1 < c2 {
                            (over_small, over_large)
                        } else {
                            (over_large, over_small)
                        };
                        ensure(
                            rc.third == c3 && rc.over_first == over_first && rc.over_second == over_second,
                            || format!("({c1},{c2}): oracle {rc:?}, formula ({c3},{over_first},{over_second})"),
                        )?;
                    }
                    Composition::NeedsC3 => {
                        let (x, y) = compose_equal(c1, rc.third).map_err(e2s("compose_equal"))?;
                        ensure(rc.over_first == x && rc.over_second == y, || {
                            format!("({c1},{c1}) with c3 {}: oracle {rc:?}, formula ({x},{y})", rc.third)
                        })?;
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} biquadratic towers match the composition rules"))
}

fn criterion_4() -> Outcome {
    let mut reports = 0;
    for tr in small_triples().iter().filter(|t| t.profile.f <= t.profile.g) {
        let b = d4_breaks(&tr.profile).map_err(e2s("breaks"))?;
        let mut which = vec![Deformation::for_type(b.seq_type)];
        if b.seq_type != SequenceType::TypeIII && b.upper.values[0] > 1 {
            which.push(Deformation::Third);
        }
        if b.seq_type == SequenceType::TypeIII && b.upper.values[0] == 1 {
            continue;
        }
        for w in which {
            let rep = deform(w, tr).map_err(|e| format!("{w} on {tr}: {e}"))?;
            let constant = match w {
                Deformation::First => 12,
                Deformation::Second => 20,
                Deformation::Third => 22,
            };
            ensure(rep.ledger.balances() && rep.ledger.at_pi == constant, || {
                format!("{w} on {tr}: ledger {}", rep.ledger)
            })?;
            let u = &b.upper.values;
            let shifted = match w {
                Deformation::First => [u[0], u[1] - 2, u[2] - 2],
                Deformation::Second => [u[0], u[1] - 2, u[2] - 4],
                Deformation::Third => [u[0] - 2, u[1] - 2, u[2] - 4],
            };
            ensure(rep.fiber_at_zero.breaks.upper.values == shifted, || {
                format!("{w} on {tr}: fiber upper {}", rep.fiber_at_zero.breaks.upper)
            })?;
            let mut ctx = FieldCtx::with_level(1).unwrap();
            verify_fibers(&rep, &mut ctx).map_err(|e| format!("{w} on {tr}: {e}"))?;
            reports += 1;
        }
    }
    Ok(format!("{reports} deformation reports balance and verify"))
}

fn criterion_5() -> Outcome {
    let mut produced_upper = HashSet::new();
    let mut produced_lower = HashSet::new();
    for g in (1..=15).step_by(2) {
        for f in (1..=g).step_by(2) {
            for d in (1..=g).step_by(2) {
                for h in std::iter::once(0).chain((1..=31).step_by(2)) {
                    if let Ok(b) = d4_breaks(&DegreeProfile::new(d, f, g, h)) {
                        produced_upper.insert(b.upper.as_triple().unwrap());
                        produced_lower.insert(b.lower.as_triple().unwrap());
                    }
                }
            }
        }
    }
    let mut valid_upper = 0;
    for c in 1..=15 {
        for b in 1..=c {
            for a in 1..=b {
                if validate_upper(a, b, c) {
                    valid_upper += 1;
                    let seq = BreakSequence::upper(&[a, b, c]).unwrap();
                    let tr = witness_from_breaks(&seq, &mut FieldCtx::new())
                        .map_err(|e| format!("witness ({a},{b},{c}): {e}"))?;
                    let got = d4_breaks(&tr.profile).map_err(e2s("breaks"))?;
                    ensure(got.upper == seq, || format!("witness ({a},{b},{c}) gives {}", got.upper))?;
                    let back = herbrand(&herbrand(&seq).map_err(e2s("herbrand"))?).map_err(e2s("herbrand"))?;
                    ensure(back == seq, || format!("Herbrand round trip of {seq} gives {back}"))?;
                } else {
                    ensure(!produced_upper.contains(&(a, b, c)), || {
                        format!("({a},{b},{c}) rejected but produced by a profile")
                    })?;
                }
            }
        }
    }
    let mut valid_lower = 0;
    for c in 1..=45 {
        for b in 1..=c {
            for a in 1..=b {
                if validate_lower(a, b, c) {
                    valid_lower += 1;
                    let seq = BreakSequence::lower(&[a, b, c]).unwrap();
                    let upper = herbrand(&seq).map_err(|e| format!("({a},{b},{c}): {e}"))?;
                    ensure(herbrand(&upper).as_ref() == Ok(&seq), || format!("Herbrand round trip of {seq}"))?;
                    let tr = witness_from_breaks(&upper, &mut FieldCtx::new())
                        .map_err(|e| format!("witness for lower ({a},{b},{c}): {e}"))?;
                    let got = d4_breaks(&tr.profile).map_err(e2s("breaks"))?;
                    ensure(got.lower == seq, || format!("lower witness ({a},{b},{c}) gives {}", got.lower))?;
                } else {
                    ensure(!produced_lower.contains(&(a, b, c)), || {
                        format!("lower ({a},{b},{c}) rejected but produced by a profile")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{valid_upper} upper and {valid_lower} lower triples realized; rejected triples never produced"
    ))
}

fn criterion_6() -> Outcome {
    let mut profiles = Vec::new();
    for g in (1..=15).step_by(2) {
        for f in (1..=g).step_by(2) {
            for d in (1..=g).step_by(2) {
                for h in std::iter::once(0).chain((1..=2 * g + 3).step_by(2)) {
                    let p = DegreeProfile::new(d, f, g, h);
                    if d4_breaks(&p).is_ok() {
                        profiles.push(p);
                    }
                }
            }
        }
    }
    for p in &profiles {
        let plan = plan_profile(p).map_err(|e| format!("{p}: {e}"))?;
        let u2 = d4_breaks(p).unwrap().upper.values[1];
        ensure(plan.steps.len() as i64 == (u2 - 1) / 2, || {
            format!("{p}: {} steps for u2 = {u2}", plan.steps.len())
        })?;
        for s in &plan.steps {
            let (a, b, c) = s.upper_to.as_triple().unwrap();
            ensure(validate_upper(a, b, c), || format!("{p}: intermediate {} invalid", s.upper_to))?;
        }
        ensure(is_supersimple(&plan.terminal), || format!("{p}: terminal {}", plan.terminal))?;
        let check = check_plan(&plan);
        ensure(check.ok, || format!("{p}: {:?}", check.diagnostics))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x51a2);
    let nontrivial: Vec<&DegreeProfile> = profiles
        .iter()
        .filter(|p| d4_breaks(p).unwrap().upper.values[1] > 1)
        .collect();
    for _ in 0..20 {
        let p = nontrivial[rng.gen_range(0..nontrivial.len())];
        let mut ctx = FieldCtx::new();
        let tr = triple_for_profile(p, &mut ctx).map_err(e2s("triple"))?;
        let plan = plan_profile(p).unwrap();
        let runs = deep_verify(&tr, &plan, &mut ctx).map_err(|e| format!("deep {p}: {e}"))?;
        ensure(runs.len() == plan.steps.len(), || format!("deep {p}: incomplete"))?;
    }
    Ok(format!("{} profiles planned and checked; 20 deep verifications passed", profiles.len()))
}

fn random_series(rng: &mut ChaCha8Rng, lo: i64, hi: i64, level_bits: u64) -> Series {
    let mut terms = Vec::new();
    for n in lo..=hi {
        if rng.gen_bool(0.5) {
            terms.push((n, FieldElem::from_bits(rng.gen_range(0..level_bits))));
        }
    }
    Series::from_terms(terms, None)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x57d);
    let cases = 1000;
    for i in 0..cases {
        let bits = if i % 2 == 0 { 4 } else { 16 };
        let f = random_series(&mut rng, -15, 6, bits);
        let alpha = random_series(&mut rng, -7, 5, bits);
        let mut ctx = FieldCtx::with_level(2).unwrap();
        let r = reduce(&f, &mut ctx).map_err(e2s("reduce"))?;
        let again = reduce(&r.standard, &mut ctx).map_err(e2s("reduce"))?;
        ensure(again.standard == r.standard && again.witness.is_zero(), || {
            format!("reduce not idempotent on {f}")
        })?;
        let shifted = f.add(&alpha.square()).add(&alpha);
        let r2 = reduce(&shifted, &mut ctx).map_err(e2s("reduce"))?;
        ensure(r2.standard == r.standard, || {
            format!("reduce({f} + wp({alpha})) = {} but reduce(F) = {}", r2.standard, r.standard)
        })?;
        ensure(r.standard.is_standard() && r.standard.is_exact(), || format!("{} not exact standard", r.standard))?;
        let other = random_series(&mut rng, -15, -1, bits);
        let s1 = r.standard.clone();
        let s2 = reduce(&other, &mut ctx).map_err(e2s("reduce"))?.standard;
        if s1 != s2 {
            let eq = equivalent(&s1, &s2, &mut ctx).map_err(e2s("equivalent"))?;
            ensure(!eq, || format!("distinct standard forms {s1} and {s2} reported equivalent"))?;
        }
    }
    Ok(format!("{cases} random (F, alpha) pairs: idempotent, class-invariant, distinct forms inequivalent"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("oracle matches closed-form breaks", criterion_1),
        ("eight triples per extension", criterion_2),
        ("conductor composition", criterion_3),
        ("deformation ledgers", criterion_4),
        ("realizability predicates", criterion_5),
        ("reduction planner", criterion_6),
        ("standard-form algebra", criterion_7),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("criterion {} ({name}): PASS [{summary}; {secs:.1}s]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL [{why}; {secs:.1}s]", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
