//! Parse planar diagram and Gauss codes, inspect the result and see what is refused.
//!
//! cargo run -p diagramless --example parse_diagram

use diagramless::{parse_gauss, parse_pd, validate_pd, Error};

fn main() -> diagramless::Result<()> {
    let trefoil = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]")?;
    println!("PD       {trefoil}");
    println!("crossings {}  arcs {}  faces {}", trefoil.crossing_count(), trefoil.arc_count(), trefoil.faces().len());
    println!("genus {}  components {}  writhe {}", trefoil.genus(), trefoil.link_components(), trefoil.writhe());

    let from_gauss = parse_gauss("1 -2 3 -1 2 -3 / - - -")?;
    println!("\nGauss code gives {from_gauss} (writhe {})", from_gauss.writhe());

    let hopf = parse_pd("X[4,1,3,2] X[2,3,1,4]")?;
    println!("Hopf link: {} components, linking sign sum {}", hopf.link_components(), hopf.writhe());

    // three crossings glued so that the diagram only fits on a torus
    let report = validate_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]")?;
    println!("\nvalidation of a toroidal code: {}", serde_json::to_string(&report).expect("json"));
    match parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").and_then(|d| diagramless::surface::require_spherical(&d)) {
        Err(Error::NotSpherical(g)) => println!("refused: genus {g} diagram"),
        other => println!("unexpected: {other:?}"),
    }
    match parse_pd("X[1,2,3]") {
        Err(e) => println!("syntax error: {e}"),
        Ok(d) => println!("unexpected parse {d}"),
    }
    Ok(())
}
