//! Galois group, normal form, the eight equivalent triples and the subfield lattice.

use d4ram::d4::{classify, lattice, normalize_triple, orbit, same_extension};
use d4ram::input::parse_series;
use d4ram::FieldCtx;

fn main() -> d4ram::Result<()> {
    let mut ctx = FieldCtx::new();
    let f = parse_series("t^-3")?;
    let g = parse_series("t^-1")?;
    let h = parse_series("t^-2 + 1")?;

    println!("group: {}", classify(&f, &g, &h, &mut ctx)?);
    let t = normalize_triple(&f, &g, &h, &mut ctx)?;
    println!("normal form: {t} with profile {}", t.profile);

    for (i, u) in orbit(&t, &mut ctx)?.iter().enumerate() {
        println!("  orbit[{i}] {u}  same: {}", same_extension(&t, u, &mut ctx)?);
    }
    println!("{}", lattice(&t)?);

    let z = parse_series("0")?;
    println!("(F, F, 0): {}", classify(&f, &f, &z, &mut ctx)?);
    println!("(F, 0, 0): {}", classify(&f, &z, &z, &mut ctx)?);
    Ok(())
}
