//! Division, divisibility witnesses and the divisible hull.

use mvkit::divis::{
    div_solve, divisible_hull, is_divisible, match_hulls, via_chang, DivOutcome, Divisibility,
};
use mvkit::rational::rat;
use mvkit::Algebra;

fn main() -> mvkit::Result<()> {
    let q = Algebra::rational_chain();
    let a = q.rational(&rat(2, 3))?;
    if let DivOutcome::Witness(w) = div_solve(&q, &a, 5)? {
        println!("in Q[0,1]: (2/3)/5 = {}", q.format(&w.x));
    }

    let l5 = Algebra::chain(4)?;
    match is_divisible(&l5)? {
        Divisibility::NotDivisible { a, n } => println!(
            "L5 is not divisible: no x with {n}.x = {} solves both equations",
            l5.format(&a)
        ),
        Divisibility::Divisible(_) => println!("L5 is divisible"),
    }

    for a in [
        l5.clone(),
        Algebra::product(vec![Algebra::chain(2)?, Algebra::chain(1)?])?,
    ] {
        let hull = divisible_hull(&a)?;
        println!("hull of {}: {}", a.name(), hull.describe());
        for x in a.elements()? {
            println!(
                "  {} -> {}",
                a.format(&x),
                hull.hull().format(&hull.embed(&x)?)
            );
        }
    }
    let direct = divisible_hull(&l5)?;
    let chang = via_chang(&l5)?;
    println!(
        "both hull routes agree for L5: {}",
        match_hulls(&direct, &chang)?.is_some()
    );
    Ok(())
}
