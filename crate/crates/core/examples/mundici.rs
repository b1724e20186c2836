//! The Chang group of an algebra and the round trip back to it.

use mvkit::lgroup::{gamma, mundici_roundtrip, xi, UnitalGroup};
use mvkit::rational::rat;
use mvkit::Algebra;

fn main() -> mvkit::Result<()> {
    for a in [
        Algebra::chain(4)?,
        Algebra::product(vec![Algebra::chain(2)?, Algebra::chain(1)?])?,
    ] {
        let g = xi(&a)?;
        let (back, iso) = mundici_roundtrip(&a)?;
        println!(
            "{}: group {}, unit {}; Gamma has {} elements, bijective: {}",
            a.name(),
            g.name(),
            g.format(g.unit()),
            back.size().unwrap(),
            iso.is_injective() && iso.is_surjective()?
        );
    }
    let dense = gamma(UnitalGroup::dense(vec![rat(1, 1)])?)?;
    println!("Gamma(Q, 1) is {}", dense.name());
    Ok(())
}
