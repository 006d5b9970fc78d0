//! The two sign conventions for the differential give isomorphic complexes,
//! related by a diagonal change of basis.
//!
//! cargo run -p diagramless --example sign_rules

use diagramless::catalog::TREFOIL_RIGHT;
use diagramless::complex::{homology, khovanov_complex, sign_bridge, sign_bridge_formula, verify_sign_bridge, GradingScheme};
use diagramless::states::enumerate_states;
use diagramless::{parse_pd, SignRule};

fn main() -> diagramless::Result<()> {
    let d = parse_pd(TREFOIL_RIGHT)?;
    let (s, a) = (khovanov_complex(&d, SignRule::Sigma)?, khovanov_complex(&d, SignRule::Alpha)?);
    let states = enumerate_states(&d);
    let solved = sign_bridge(d.crossing_count())?;
    println!("{:<6} {:>7} {:>7}", "state", "solved", "formula");
    for (n, &m) in states.iter().enumerate() {
        println!("{:<6} {:>7} {:>7}", m.to_string(), solved[n], sign_bridge_formula(m));
    }
    println!("bridge intertwines the differentials: {}", verify_sign_bridge(&s, &a, &solved));
    let scheme = GradingScheme::Khovanov { normalized: true };
    println!("equal homology: {}", homology(&s, scheme)? == homology(&a, scheme)?);
    Ok(())
}
