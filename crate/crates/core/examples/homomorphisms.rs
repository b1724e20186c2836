//! Homomorphisms between finite chains and epimorphism evidence.

use mvkit::algebra::Value;
use mvkit::morphisms::{
    bounded_epi_oracle, chain_inclusion, chain_inclusion_epi, enumerate_homs, EpiEvidence, Hom,
    HomOrigin,
};
use mvkit::Algebra;

fn show(f: &Hom) -> String {
    let images: Vec<String> = f
        .images()
        .iter()
        .map(|v| f.target().format_value(v))
        .collect();
    images.join(" ")
}

fn main() -> mvkit::Result<()> {
    println!("|Hom(Lm+1, Ln+1)| for m, n in 1..=6:");
    for m in 1..=6 {
        let row: Vec<String> = (1..=6)
            .map(|n| {
                Ok(enumerate_homs(&Algebra::chain(m)?, &Algebra::chain(n)?)?
                    .len()
                    .to_string())
            })
            .collect::<mvkit::Result<_>>()?;
        println!("  m = {m}: {}", row.join(" "));
    }

    let l2 = Algebra::chain(1)?;
    let diagonal = Hom::new(
        l2,
        Algebra::boolean(2)?,
        vec![Value::Index(0), Value::Index(3)],
        HomOrigin::Inclusion,
    )?;
    match bounded_epi_oracle(&diagonal, 4)? {
        EpiEvidence::NotEpi {
            cotarget,
            alpha,
            beta,
        } => println!(
            "diagonal L2 -> L2xL2 is not epi: two maps into {} agree on the image ({} vs {})",
            cotarget.name(),
            show(&alpha),
            show(&beta)
        ),
        other => println!("diagonal: {}", other.label()),
    }
    println!(
        "L2 -> L3 by search: {}",
        bounded_epi_oracle(&chain_inclusion(1, 2)?, 6)?.label()
    );
    println!(
        "L2 -> L3 by structure: {}",
        chain_inclusion_epi(1, 2, 6)?.label()
    );
    Ok(())
}
