//! Diagramless homology of the unknot with one and two crossings: the sum over
//! diagram classes is a number of copies of Khovanov homology.
//!
//! cargo run -p diagramless --example diagramless_unknot

use diagramless::catalog::{UNKNOT_K1, UNKNOT_K2};
use diagramless::diagramless::{diagramless_homology, DiagramClassSet};
use diagramless::SignRule;

fn main() -> diagramless::Result<()> {
    for (name, manifest) in [("one crossing", UNKNOT_K1), ("two crossings", UNKNOT_K2)] {
        let ds = DiagramClassSet::parse_manifest(manifest)?;
        let report = diagramless_homology(&ds, SignRule::Sigma)?;
        println!("== unknot, {name}: {} classes", ds.classes.len());
        print!("{}", report.to_table());
        for c in &report.per_class {
            println!("  {:<6} B values {:?}  isolated pieces {:?}  copies {}", c.label, c.b_values, c.components, c.copies);
        }
        println!();
    }
    Ok(())
}
