//! Graphviz rendering of a chain complex: one node per generator, one edge per
//! nonzero differential entry; negative entries carry a hollow dot at the tail.
//!
//! cargo run -p diagramless --example dot_export > hopf.dot && dot -Tsvg hopf.dot

use diagramless::catalog::HOPF;
use diagramless::complex::{khovanov_complex, to_dot, GradingScheme};
use diagramless::{parse_pd, SignRule};

fn main() -> diagramless::Result<()> {
    let d = parse_pd(HOPF)?;
    let c = khovanov_complex(&d, SignRule::Sigma)?;
    print!("{}", to_dot(&c, GradingScheme::Surface));
    Ok(())
}
