//! Ideals, primes, quotients and the Hasse diagram of L3 x L3.

use mvkit::cli::report::ideal_dot;
use mvkit::ideals::{enumerate_ideals, primes_and_minimal_primes, quotient, summand_decomposition};
use mvkit::Algebra;

fn main() -> mvkit::Result<()> {
    let a = Algebra::product(vec![Algebra::chain(2)?, Algebra::chain(2)?])?;
    let lattice = enumerate_ideals(&a)?;
    println!("{} has {} ideals:", a.name(), lattice.ideals.len());
    for i in &lattice.ideals {
        println!("  {}", i.describe(&a));
    }
    let primes = primes_and_minimal_primes(&a)?;
    println!(
        "{} primes, {} minimal",
        primes.primes.len(),
        primes.minimal.len()
    );
    for p in &primes.minimal {
        let (q, _) = quotient(&a, p)?;
        let summand = summand_decomposition(&a, p)?.is_some();
        println!(
            "  quotient by {} has {} elements; summand: {summand}",
            p.describe(&a),
            q.size().unwrap()
        );
    }
    println!("{}", ideal_dot(&a, &lattice));
    Ok(())
}
