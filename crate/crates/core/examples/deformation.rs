//! One deformation step: the family over k[[pi]], its two branch fibers and the
//! different ledger, checked on explicit series.

use d4ram::d4::ASTriple;
use d4ram::deform::{deform, deform_auto, verify_fibers, Deformation};
use d4ram::input::parse_series;
use d4ram::FieldCtx;

fn main() -> d4ram::Result<()> {
    let mut ctx = FieldCtx::new();
    let t = ASTriple::new(parse_series("t^-1")?, parse_series("t^-3")?, parse_series("t^-5")?)?;

    let rep = deform_auto(&t)?;
    println!("{rep}");
    let v = verify_fibers(&rep, &mut ctx)?;
    for c in &v.checks {
        println!("  ok: {} ({})", c.clause, c.detail);
    }
    println!("ledger {} balances: {}", rep.ledger, rep.ledger.balances());

    match deform(Deformation::Second, &t) {
        Ok(r) => println!("\n{r}"),
        Err(e) => println!("\ndeform2 refused: {e}"),
    }
    Ok(())
}
