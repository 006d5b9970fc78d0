//! Integer Khovanov homology of the catalog knots, cross-checked over Q, F2 and
//! against the bracket state sum.
//!
//! cargo run -p diagramless --example khovanov_homology [-- name]

use diagramless::catalog::{by_name, named};
use diagramless::complex::homology::universal_coefficients_consistent;
use diagramless::complex::{
    bracket_state_sum, graded_euler_characteristic, homology, homology_mod2, homology_rational, khovanov_complex, laurent_to_string, GradingScheme,
};
use diagramless::SignRule;

fn main() -> diagramless::Result<()> {
    let scheme = GradingScheme::Khovanov { normalized: true };
    let picked: Vec<_> = match std::env::args().nth(1) {
        Some(n) => vec![(n.clone(), by_name(&n).expect("a catalog name"))],
        None => named().into_iter().filter(|(n, _)| ["trefoil-left", "figure-eight", "hopf"].contains(n)).map(|(n, d)| (n.to_string(), d)).collect(),
    };
    for (name, d) in picked {
        let c = khovanov_complex(&d, SignRule::Sigma)?;
        let h = homology(&c, scheme)?;
        println!("== {name}: {d}");
        print!("{}", h.to_table());
        let chi = graded_euler_characteristic(&c, scheme);
        println!("Euler characteristic {}", laurent_to_string(&chi));
        println!("bracket state sum    {}", laurent_to_string(&bracket_state_sum(&d, true)));
        let ok = universal_coefficients_consistent(&h, &homology_rational(&c, scheme)?, &homology_mod2(&c, scheme)?);
        println!("Q and F2 ranks consistent with the integer groups: {ok}\n");
    }
    Ok(())
}
