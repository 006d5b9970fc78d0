//! Draw a state surface in space and recompute its Goeritz form and boundary
//! slope from exact linking numbers of lattice polygons.
//!
//! cargo run -p diagramless --example embedding_oracle [-- out.obj]

use diagramless::catalog::FIGURE_EIGHT;
use diagramless::states::enumerate_states;
use diagramless::surface::embed::{boundary_slope_on, embed_on, layout, oracle_goeritz_on, to_obj};
use diagramless::surface::{build_state_surface, cycle_basis, goeritz_matrix};
use diagramless::{parse_pd, EnhancedState};

fn main() -> diagramless::Result<()> {
    let d = parse_pd(FIGURE_EIGHT)?;
    let lay = layout(&d)?;
    let smallest = lay.eta.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("figure-eight layout: smallest crossing disk radius {smallest:.3e}");
    println!("{:<6} {:<22} {:<22} {:>6}", "state", "combinatorial", "embedded", "slope");
    for m in enumerate_states(&d) {
        let f = build_state_surface(&d, &EnhancedState::new(m, 0))?;
        let basis = cycle_basis(&f);
        let g = goeritz_matrix(&f, &basis).entries;
        let o = oracle_goeritz_on(&d, &lay, &f, &basis)?;
        let slope = boundary_slope_on(&d, &lay, &f)?;
        println!("{:<6} {:<22} {:<22} {:>6}{}", m.to_string(), format!("{g:?}"), format!("{o:?}"), slope, if g == o { "" } else { "  MISMATCH" });
    }
    if let Some(path) = std::env::args().nth(1) {
        let m = enumerate_states(&d)[0];
        let f = build_state_surface(&d, &EnhancedState::new(m, 0))?;
        let curves = embed_on(&d, &lay, &f, &cycle_basis(&f))?;
        let mut all = curves.cycles.clone();
        all.extend(curves.pushoffs.iter().flatten().cloned());
        std::fs::write(&path, to_obj(&all)).expect("writable output path");
        println!("wrote cycles and pushoffs of state {m} to {path}");
    }
    Ok(())
}
