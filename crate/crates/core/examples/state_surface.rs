//! Build the state surface of a trefoil state, its Goeritz form and its gradings.
//!
//! cargo run -p diagramless --example state_surface

use diagramless::catalog::TREFOIL_LEFT;
use diagramless::states::enumerate_states;
use diagramless::surface::checkerboard::classical_goeritz;
use diagramless::surface::{build_state_surface, cycle_basis, goeritz_matrix, gradings, signature};
use diagramless::{parse_pd, EnhancedState};

fn main() -> diagramless::Result<()> {
    let d = parse_pd(TREFOIL_LEFT)?;
    for m in enumerate_states(&d) {
        let f = build_state_surface(&d, &EnhancedState::new(m, 0))?;
        let basis = cycle_basis(&f);
        let g = goeritz_matrix(&f, &basis);
        println!(
            "{m}  facets {}  bands {}  components {}  b1 {}  Goeritz {:?}  signature {}  (I,J,K,B) {}",
            f.facet_count(),
            f.band_count(),
            f.component_count(),
            f.first_betti(),
            g.entries,
            signature(&g.entries),
            gradings(&f)
        );
    }
    for positive in [true, false] {
        if let Some(q) = classical_goeritz(&d, positive) {
            println!("checkerboard form for all markers {}: {q:?}, signature {}", if positive { '+' } else { '-' }, signature(&q));
        }
    }
    Ok(())
}
