//! The ramification filtration computed inside the explicit degree-8 tower,
//! compared with the closed-form breaks.

use d4ram::breaks::d4_breaks;
use d4ram::d4::ASTriple;
use d4ram::input::parse_series;
use d4ram::oracle::{biquadratic_tower, build_tower, relative_conductors};

fn main() -> d4ram::Result<()> {
    let t = ASTriple::new(parse_series("t^-1")?, parse_series("t^-3")?, parse_series("0")?)?;
    let tower = build_tower(&t, 64)?;
    println!("group shape: {}", tower.group_shape()?);
    println!("uniformizer: {}", tower.render(tower.uniformizer()));
    println!("step breaks: {:?}", tower.step_breaks());

    let filt = tower.filtration()?;
    for (sigma, i) in &filt.numbers {
        println!("  i({sigma}) = {i}");
    }
    let expected = d4_breaks(&t.profile)?;
    println!("lower breaks {} (closed form {})", filt.lower, expected.lower);
    println!("different {}", filt.different);

    let quartic = biquadratic_tower(&parse_series("t^-1")?, &parse_series("t^-3")?, 64)?;
    println!("biquadratic conductors: {:?}", relative_conductors(&quartic)?);
    Ok(())
}
