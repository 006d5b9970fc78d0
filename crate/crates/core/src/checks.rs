//! Invariant suites over named and random diagrams.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::catalog;
use crate::complex::homology::universal_coefficients_consistent;
use crate::complex::{
    bracket_state_sum, check_grading_shift, graded_euler_characteristic, homology, homology_mod2, homology_rational, khovanov_complex,
    sign_bridge_formula, verify_d_squared, verify_sign_bridge, ChainComplex, GradingScheme,
};
use crate::diagram::LinkDiagram;
use crate::diagramless::psi_sigma;
use crate::error::Result;
use crate::frobenius::{check_axioms, FrobeniusSystem};
use crate::generate::random_diagram;
use crate::states::{enumerate_states, EnhancedState, SignRule};
use crate::surface::embed::{boundary_slope_on, layout, oracle_goeritz_on};
use crate::surface::{build_state_surface, cycle_basis, goeritz_matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Fast,
    Full,
}

/// Crossing limits and sample sizes of a suite.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub random: usize,
    pub random_max: usize,
    pub shift_max: usize,
    pub psi_max: usize,
    pub oracle_max: usize,
    pub slope_max: usize,
}

impl Suite {
    pub fn limits(self) -> Limits {
        match self {
            Suite::Fast => Limits { random: 20, random_max: 5, shift_max: 4, psi_max: 4, oracle_max: 3, slope_max: 2 },
            Suite::Full => Limits { random: 200, random_max: 8, shift_max: 6, psi_max: 6, oracle_max: 5, slope_max: 4 },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: &str, f: impl FnOnce() -> (usize, Option<String>)) -> CheckResult {
    let t = Instant::now();
    let (cases, failure) = f();
    CheckResult { name: name.to_string(), passed: failure.is_none(), cases, detail: failure.unwrap_or_default(), seconds: t.elapsed().as_secs_f64() }
}

fn first_failure<T>(items: &[T], f: impl Fn(&T) -> Result<bool>, describe: impl Fn(&T) -> String) -> (usize, Option<String>) {
    for it in items {
        match f(it) {
            Ok(true) => {}
            Ok(false) => return (items.len(), Some(describe(it))),
            Err(e) => return (items.len(), Some(format!("{}: {e}", describe(it)))),
        }
    }
    (items.len(), None)
}

pub fn d_squared(d: &LinkDiagram) -> Result<bool> {
    for rule in [SignRule::Sigma, SignRule::Alpha] {
        if !verify_d_squared(&khovanov_complex(d, rule)?).ok {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn grading_shift(d: &LinkDiagram, rule: SignRule) -> Result<bool> {
    let c = khovanov_complex(d, rule)?;
    Ok(check_grading_shift(&c, GradingScheme::Surface).is_ok() && check_grading_shift(&c, GradingScheme::Khovanov { normalized: false }).is_ok())
}

pub fn psi_commutes(d: &LinkDiagram, rule: SignRule) -> Result<bool> {
    let c = khovanov_complex(d, rule)?;
    for p in 0..d.crossing_count().saturating_sub(1) {
        psi_sigma(&c, p)?;
    }
    Ok(true)
}

pub fn goeritz_matches_oracle(d: &LinkDiagram) -> Result<bool> {
    let lay = layout(d)?;
    for m in enumerate_states(d) {
        let f = build_state_surface(d, &EnhancedState::new(m, 0))?;
        let basis = cycle_basis(&f);
        if oracle_goeritz_on(d, &lay, &f, &basis)? != goeritz_matrix(&f, &basis).entries {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every cube edge raises the boundary slope by exactly two.
pub fn slope_increments(d: &LinkDiagram) -> Result<bool> {
    if d.crossing_count() == 0 {
        return Ok(true);
    }
    let states = enumerate_states(d);
    let lay = layout(d)?;
    let slopes: Vec<i64> = states
        .iter()
        .map(|&m| boundary_slope_on(d, &lay, &build_state_surface(d, &EnhancedState::new(m, 0))?))
        .collect::<Result<_>>()?;
    for (n, &m) in states.iter().enumerate() {
        for i in 0..d.crossing_count() {
            if m.is_positive(i) && slopes[n & !(1 << i)] != slopes[n] + 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn euler_matches_bracket(c: &ChainComplex) -> bool {
    graded_euler_characteristic(c, GradingScheme::Khovanov { normalized: true }) == bracket_state_sum(&c.diagram, true)
}

pub fn coefficients_consistent(c: &ChainComplex) -> Result<bool> {
    let scheme = GradingScheme::Khovanov { normalized: true };
    Ok(universal_coefficients_consistent(&homology(c, scheme)?, &homology_rational(c, scheme)?, &homology_mod2(c, scheme)?))
}

pub fn sign_rules_agree(d: &LinkDiagram) -> Result<bool> {
    let (s, a) = (khovanov_complex(d, SignRule::Sigma)?, khovanov_complex(d, SignRule::Alpha)?);
    let eps: Vec<i64> = enumerate_states(d).iter().map(|&m| sign_bridge_formula(m)).collect();
    Ok(verify_sign_bridge(&s, &a, &eps))
}

/// Random diagrams for a suite, with crossing counts spread over `1..=max`.
pub fn random_sample(n: usize, max: usize, seed: u64) -> Vec<LinkDiagram> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| {
        let k = rng.gen_range(1..=max);
        random_diagram(&mut rng, k)
    }).collect()
}

/// Algebra-level checks of a Frobenius system.
pub fn frobenius_suite(sys: &FrobeniusSystem) -> Vec<CheckResult> {
    let t = Instant::now();
    let report = check_axioms(sys);
    let secs = t.elapsed().as_secs_f64();
    report
        .checks
        .iter()
        .map(|c| CheckResult { name: format!("frobenius {}", c.name), passed: c.passed, cases: 1, detail: c.failures.join("; "), seconds: secs })
        .collect()
}

/// Runs the invariant suite over the given diagrams plus a random sample.
pub fn run_suite(suite: Suite, rule: SignRule, extra: &[LinkDiagram], seed: u64) -> Vec<CheckResult> {
    let lim = suite.limits();
    let mut named: Vec<LinkDiagram> = catalog::named().into_iter().map(|(_, d)| d).collect();
    named.extend(extra.iter().cloned());
    let random = random_sample(lim.random, lim.random_max, seed);
    let mut all = named.clone();
    all.extend(random.iter().cloned());
    let upto = |max: usize| -> Vec<LinkDiagram> { all.iter().filter(|d| d.crossing_count() <= max).cloned().collect() };
    let show = |d: &LinkDiagram| d.to_pd();
    let mut out = frobenius_suite(&FrobeniusSystem::f1());
    out.push(timed("d^2 = 0, both sign rules", || first_failure(&all, d_squared, show)));
    out.push(timed("sign rules related by the diagonal bridge", || first_failure(&upto(lim.shift_max), sign_rules_agree, show)));
    out.push(timed("edges raise I by one and fix J, K, B", || first_failure(&upto(lim.shift_max), |d| grading_shift(d, rule), show)));
    out.push(timed("relabelling maps commute with d", || first_failure(&upto(lim.psi_max), |d| psi_commutes(d, rule), show)));
    out.push(timed("Goeritz form equals embedded linking numbers", || first_failure(&upto(lim.oracle_max), goeritz_matches_oracle, show)));
    out.push(timed("edges raise boundary slope by two", || first_failure(&upto(lim.slope_max), slope_increments, show)));
    out.push(timed("Euler characteristic equals bracket state sum", || {
        first_failure(&upto(lim.shift_max), |d| Ok(euler_matches_bracket(&khovanov_complex(d, rule)?)), show)
    }));
    out.push(timed("integer, rational and mod-2 homology agree", || {
        first_failure(&upto(lim.shift_max), |d| coefficients_consistent(&khovanov_complex(d, rule)?), show)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        for rule in [SignRule::Sigma, SignRule::Alpha] {
            for r in run_suite(Suite::Fast, rule, &[], 1) {
                assert!(r.passed, "{}: {}", r.name, r.detail);
                assert!(r.cases > 0, "{}", r.name);
            }
        }
    }
}
