//! Build algebras, verify the axioms and watch a corrupted table get rejected.

use mvkit::algebra::{classify, verify_axioms};
use mvkit::{Algebra, MvError};

fn main() -> mvkit::Result<()> {
    let l4 = Algebra::chain(3)?;
    let square = Algebra::product(vec![Algebra::chain(2)?, Algebra::chain(2)?])?;
    for a in [&l4, &square, &Algebra::boolean(3)?] {
        let c = classify(a)?;
        println!(
            "{}: {} elements, axioms hold: {}, linear {}, simple {}, boolean {}",
            a.name(),
            a.size().unwrap(),
            verify_axioms(a)?.passed(),
            c.is_linear,
            c.is_simple,
            c.is_boolean
        );
    }

    let x = l4.parse_element("1/3")?;
    let y = l4.parse_element("2/3")?;
    println!("in L4: 1/3 + 2/3 = {}", l4.format(&l4.oplus(&x, &y)?));
    println!("in L4: 1/3 . 2/3 = {}", l4.format(&l4.odot(&x, &y)?));
    println!("in L4: (1/3)' = {}", l4.format(&l4.neg(&x)?));

    let mut table = l4.table_spec()?;
    table.oplus[table.size + 1] = 3;
    match Algebra::from_table(table) {
        Err(MvError::AxiomViolation { axiom, witness }) => {
            println!("corrupted L4 rejected: {axiom} fails at {witness:?}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
