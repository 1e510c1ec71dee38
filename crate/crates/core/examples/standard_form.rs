//! Laurent series over the tower and Artin-Schreier standard forms.

use d4ram::artin_schreier::{conductor, reduce};
use d4ram::input::parse_series;
use d4ram::FieldCtx;

fn main() -> d4ram::Result<()> {
    let mut ctx = FieldCtx::new();
    for src in ["t^-4 + t^-3 + 1", "t^-8 + w1*t^-2 + t", "t^-6 + t^-3 + t^-2 + w1"] {
        let f = parse_series(src)?;
        let r = reduce(&f, &mut ctx)?;
        println!("F        = {f}");
        println!("standard = {}", r.standard);
        println!("alpha    = {}", r.witness);
        println!("conductor {}, field grew: {}", conductor(&r.standard)?, r.field_extended);
        let check = r.witness.wp().add(&r.standard).add(&f);
        println!("wp(alpha) + standard + F = {check}\n");
    }
    println!("coefficients live in {}", ctx.name());
    Ok(())
}
