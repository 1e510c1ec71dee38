//! Upper and lower breaks from degree profiles, and witnesses for given breaks.

use d4ram::breaks::{d4_breaks, different_degree, herbrand, is_supersimple, BreakSequence, DegreeProfile};
use d4ram::d4::witness_from_breaks;
use d4ram::FieldCtx;

fn main() -> d4ram::Result<()> {
    println!("{:<14} {:<10} {:<10} {:<9} {:>5}", "profile", "upper", "lower", "type", "delta");
    for (d, f, g, h) in [(3, 1, 3, 0), (1, 1, 1, 0), (3, 1, 3, 5), (1, 3, 3, 0), (5, 5, 5, 3), (7, 3, 7, 11)] {
        let p = DegreeProfile::new(d, f, g, h);
        let b = d4_breaks(&p)?;
        println!(
            "{:<14} {:<10} {:<10} {:<9} {:>5}",
            p.to_string(),
            b.upper.to_string(),
            b.lower.to_string(),
            b.seq_type.to_string(),
            different_degree(&b.lower)
        );
    }

    let lower = BreakSequence::lower(&[1, 5, 9])?;
    let upper = herbrand(&lower)?;
    println!("\nlower {lower} -> upper {upper}, supersimple: {}", is_supersimple(&upper));

    let mut ctx = FieldCtx::new();
    for u in [[1, 3, 4], [3, 3, 6], [1, 5, 10]] {
        let t = witness_from_breaks(&BreakSequence::upper(&u)?, &mut ctx)?;
        println!("witness for {u:?}: {t}");
    }
    Ok(())
}
