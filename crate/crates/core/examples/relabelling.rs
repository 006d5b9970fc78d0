//! Reordering crossings: the relabelling map between the two complexes is a
//! chain isomorphism, so homology does not depend on the crossing order.
//!
//! cargo run -p diagramless --example relabelling

use diagramless::catalog::FIGURE_EIGHT;
use diagramless::complex::{homology, khovanov_complex, GradingScheme};
use diagramless::diagramless::{psi_composite, psi_sigma, verify_chain_map};
use diagramless::{parse_pd, SignRule};

fn main() -> diagramless::Result<()> {
    let d = parse_pd(FIGURE_EIGHT)?;
    for rule in [SignRule::Sigma, SignRule::Alpha] {
        let c = khovanov_complex(&d, rule)?;
        for p in 0..d.crossing_count() - 1 {
            let map = psi_sigma(&c, p)?;
            verify_chain_map(&c, &map)?;
            let flips = map.image.iter().filter(|(_, w)| *w < 0).count();
            println!("{rule:?}: swap {p}<->{}: commutes with d, {flips} of {} generators change sign", p + 1, c.len());
        }
        let map = psi_composite(&c, &[0, 1, 2, 0])?;
        verify_chain_map(&c, &map)?;
        let scheme = GradingScheme::Khovanov { normalized: true };
        println!("{rule:?}: reordered diagram {}; same homology: {}", map.target.diagram, homology(&c, scheme)? == homology(&map.target, scheme)?);
    }
    Ok(())
}
