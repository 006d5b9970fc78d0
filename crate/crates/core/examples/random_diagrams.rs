//! Random spherical diagrams and the invariant suite run over them.
//!
//! cargo run --release -p diagramless --example random_diagrams [-- full]

use diagramless::checks::{run_suite, Suite};
use diagramless::generate::{is_alternating, random_alternating, random_diagram};
use diagramless::SignRule;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() {
    let mut rng = StdRng::seed_from_u64(11);
    for k in 1..=6 {
        let d = random_diagram(&mut rng, k);
        println!("{k} crossings  genus {}  components {}  alternating {:<5}  {d}", d.genus(), d.link_components(), is_alternating(&d));
    }
    let a = random_alternating(&mut rng, 7);
    println!("alternating sample: {a}");

    let suite = if std::env::args().nth(1).as_deref() == Some("full") { Suite::Full } else { Suite::Fast };
    println!("\n{suite:?} suite, seed 2024");
    for r in run_suite(suite, SignRule::Sigma, &[], 2024) {
        println!("{}  {:<48} {:>4} cases {:>7.3}s {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.cases, r.seconds, r.detail);
    }
}
