//! Run every theorem selector over the built-in catalog.

use mvkit::catalog::default_catalog;
use mvkit::divis::harness::{run, Selector, Verdict};

fn main() -> mvkit::Result<()> {
    for s in Selector::ALL {
        let r = run(s, default_catalog())?;
        let t = &r.tally;
        println!(
            "{:>5}: {} consistent, {} vacuous, {} unsupported, {} counterexamples",
            s.label(),
            t.consistent,
            t.vacuous,
            t.unsupported,
            t.counterexample
        );
        println!("       {}", s.statement());
        if let Some(i) = r
            .instances
            .iter()
            .find(|i| i.verdict == Verdict::Consistent)
        {
            println!("       e.g. {}: {}", i.instance, i.conclusion.detail);
        }
    }
    Ok(())
}
