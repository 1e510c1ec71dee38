//! Chains of deformations lowering the breaks down to a supersimple extension.

use d4ram::breaks::DegreeProfile;
use d4ram::planner::{check_plan, deep_verify, plan, plan_profile, triple_for_profile};
use d4ram::FieldCtx;

fn main() -> d4ram::Result<()> {
    let mut ctx = FieldCtx::new();
    for p in [DegreeProfile::new(7, 1, 7, 9), DegreeProfile::new(5, 5, 5, 3), DegreeProfile::new(1, 5, 5, 0)] {
        let pl = plan_profile(&p)?;
        println!("{pl}");
        let check = check_plan(&pl);
        println!("consistent: {}\n", check.ok);
    }

    let t = triple_for_profile(&DegreeProfile::new(5, 1, 5, 7), &mut ctx)?;
    let pl = plan(&t)?;
    println!("{t}\n{pl}");
    for (i, v) in deep_verify(&t, &pl, &mut ctx)?.iter().enumerate() {
        println!("  step {}: {} clauses verified, conductor {}", i + 1, v.checks.len(), v.conductor);
    }
    Ok(())
}
