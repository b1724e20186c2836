//! a-extension checks with witnesses and the ideal correspondence, plus a-closedness.

use mvkit::algebra::Value;
use mvkit::divis::{a_closed_check, a_extension_check, AExtVerdict};
use mvkit::morphisms::{chain_inclusion, Hom, HomOrigin};
use mvkit::Algebra;

fn main() -> mvkit::Result<()> {
    let inc = chain_inclusion(2, 4)?;
    let report = a_extension_check(&inc, 8)?;
    println!("L3 <= L5 is an a-extension: {}", report.holds());
    for w in &report.witnesses {
        let t = inc.target();
        println!(
            "  y = {}: x = {} from L3 with y <= {n}.x and x <= {n}.y",
            t.format(&w.y),
            t.format(&w.x),
            n = w.n
        );
    }
    if let Some(l) = &report.lattice {
        println!(
            "  ideals: {} above, {} below, isomorphism: {}",
            l.larger_ideals, l.smaller_ideals, l.is_isomorphism
        );
    }

    let diagonal = Hom::new(
        Algebra::chain(1)?,
        Algebra::boolean(2)?,
        vec![Value::Index(0), Value::Index(3)],
        HomOrigin::Inclusion,
    )?;
    let report = a_extension_check(&diagonal, 8)?;
    if let AExtVerdict::Fails { y } = &report.verdict {
        println!(
            "diagonal L2 <= L2xL2 fails at {}",
            diagonal.target().format(y)
        );
    }

    for a in [
        Algebra::trivial(),
        Algebra::chain(3)?,
        Algebra::rational_chain(),
        Algebra::boolean(2)?,
    ] {
        println!("{} a-closed: {}", a.name(), a_closed_check(&a)?.label());
    }
    Ok(())
}
