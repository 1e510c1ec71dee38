//! Arithmetic in the Artin-Schreier tower GF(2) < GF(4) < GF(16) < ...

use d4ram::{FieldCtx, FieldElem};

fn main() -> d4ram::Result<()> {
    let w1 = FieldElem::generator(1)?;
    let w2 = FieldElem::generator(2)?;
    println!("w1^2 + w1 = {}", w1.square().add(w1));
    println!("w2^2 + w2 = {}", w2.square().add(w2));

    let x = w2.mul(w1).add(FieldElem::ONE);
    let inv = x.inv()?;
    println!("x = {x}, x^-1 = {inv}, x * x^-1 = {}", x.mul(inv));
    println!("sqrt(x)^2 = {}", x.sqrt().square());
    println!("x^15 = {}", x.pow(15));

    // Solving y^2 + y = c may need the next level up.
    let mut ctx = FieldCtx::new();
    let y = ctx.as_root_const(FieldElem::ONE)?;
    println!("root of y^2 + y = 1: {y} in {}", ctx.name());
    for level in ctx.levels() {
        println!("  level {} (degree {}): {}", level.index, level.degree, level.modulus());
    }
    Ok(())
}
