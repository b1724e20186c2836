//! The epicompletion of finite chains with every certificate.

use mvkit::divis::epicompletion;
use mvkit::Algebra;

fn main() -> mvkit::Result<()> {
    for n in 1..=6 {
        let a = Algebra::chain(n)?;
        let e = epicompletion(&a)?;
        println!(
            "{} -> {}: injective {}, hull divisible {}, a-extension {}, idempotent {}, all certified {}",
            a.name(),
            e.hull.hull().name(),
            e.alpha_injective,
            e.hull_divisibility.is_divisible(),
            e.a_extension.holds(),
            e.idempotent,
            e.all_certified()
        );
        println!("  epi: {}", e.alpha_epi_reason);
    }
    Ok(())
}
