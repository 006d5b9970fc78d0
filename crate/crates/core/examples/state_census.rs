//! Every enhanced state of the two one-crossing unknot diagrams with its gradings.
//!
//! cargo run -p diagramless --example state_census

use diagramless::catalog::{CURL_NEGATIVE, CURL_POSITIVE};
use diagramless::parse_pd;
use diagramless::states::{enumerate_enhanced, resolve};
use diagramless::surface::{build_state_surface, euler_characteristic, gradings};

fn main() -> diagramless::Result<()> {
    println!("{:<12} {:<6} {:<6} {:>7} {:>4} {:>5}  (I,J,K,B)", "diagram", "marker", "signs", "circles", "chi", "dots");
    for pd in [CURL_NEGATIVE, CURL_POSITIVE] {
        let d = parse_pd(pd)?;
        for s in enumerate_enhanced(&d) {
            let f = build_state_surface(&d, &s)?;
            let circles = resolve(&d, s.markers).circle_count();
            let signs: String = (0..circles).map(|c| if s.is_plus(c) { '+' } else { 'x' }).collect();
            println!(
                "{:<12} {:<6} {:<6} {:>7} {:>4} {:>5}  {}",
                pd,
                s.markers.to_string(),
                signs,
                circles,
                euler_characteristic(&f),
                f.dots(),
                gradings(&f)
            );
        }
    }
    Ok(())
}
