//! The two rank-two Frobenius systems, their structure maps and an axiom check.
//!
//! cargo run -p diagramless --example frobenius_systems

use diagramless::frobenius::{check_axioms, Element, FrobeniusSystem};

fn show(sys: &FrobeniusSystem, name: &str) {
    let (one, x) = (Element::one(), Element::x());
    println!("{name}");
    println!("  x * x       = {}", sys.multiply(&x, &x));
    println!("  Delta(1)    = {}", sys.comultiply(&one));
    println!("  Delta(x)    = {}", sys.comultiply(&x));
    println!("  eps(1), eps(x) = {}, {}", sys.counit(&one), sys.counit(&x));
    let report = check_axioms(sys);
    for c in &report.checks {
        println!("  {:<22} {}", c.name, if c.passed { "ok" } else { "FAILS" });
    }
}

fn main() {
    show(&FrobeniusSystem::f1(), "F1 = Z[x]/(x^2)");
    show(&FrobeniusSystem::f5(), "F5 = Z[h,t][x]/(x^2 - hx - t)");
    let f = FrobeniusSystem::f5().substituted(0, 0);
    println!("F5 at h = t = 0 agrees with F1 on x*x: {}", f.multiply(&Element::x(), &Element::x()) == FrobeniusSystem::f1().multiply(&Element::x(), &Element::x()));

    // a deliberately broken comultiplication is caught
    let broken = FrobeniusSystem::f1().with_comultiplication(false, Element::basis(&[true, true]));
    let bad: Vec<&str> = check_axioms(&broken).checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    println!("broken system fails: {bad:?}");
}
