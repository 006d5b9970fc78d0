//! Rank-two Frobenius systems: the universal system over `Z[h,t]` and its
//! specialization `Z[x]/(x^2)` at `h = t = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

/// Polynomial in the commuting variables `h`, `t` with integer coefficients.
/// Keys are exponent pairs `(a, b)` for `h^a t^b`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly(BTreeMap<(u32, u32), BigInt>);

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }
    pub fn constant(c: i64) -> Poly {
        Poly::monomial(c, 0, 0)
    }
    pub fn one() -> Poly {
        Poly::constant(1)
    }
    pub fn h() -> Poly {
        Poly::monomial(1, 1, 0)
    }
    pub fn t() -> Poly {
        Poly::monomial(1, 0, 1)
    }
    pub fn monomial(c: i64, h: u32, t: u32) -> Poly {
        let mut p = Poly::zero();
        p.add_term((h, t), BigInt::from(c));
        p
    }
    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        let e = self.0.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&key);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.0.iter()
    }
    /// The integer value when the polynomial is constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.0.len() {
            0 => Some(BigInt::zero()),
            1 => self.0.get(&(0, 0)).cloned(),
            _ => None,
        }
    }
    /// Evaluates `h` and `t` at integers.
    pub fn substitute(&self, h: i64, t: i64) -> Poly {
        let mut out = Poly::zero();
        for (&(a, b), c) in &self.0 {
            out.add_term((0, 0), c * BigInt::from(h).pow(a) * BigInt::from(t).pow(b));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (&k, c) in &o.0 {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|(&k, c)| (k, -c)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(a, b), c) in &self.0 {
            for (&(x, y), d) in &o.0 {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.0 {
            let neg = c < &BigInt::zero();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = if neg { -c } else { c.clone() };
            let mut vars = String::new();
            for (name, e) in [("h", a), ("t", b)] {
                match e {
                    0 => {}
                    1 => vars.push_str(name),
                    _ => vars.push_str(&format!("{name}^{e}")),
                }
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{mag}{vars}")?;
            }
        }
        Ok(())
    }
}

/// Tensor word over the basis `{1, x}`: `false` is `1`, `true` is `x`.
pub type Word = Vec<bool>;

/// Element of a tensor power of the algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element(BTreeMap<Word, Poly>);

impl Element {
    pub fn zero() -> Element {
        Element::default()
    }
    pub fn basis(word: &[bool]) -> Element {
        Element::term(word.to_vec(), Poly::one())
    }
    pub fn one() -> Element {
        Element::basis(&[false])
    }
    pub fn x() -> Element {
        Element::basis(&[true])
    }
    pub fn term(word: Word, c: Poly) -> Element {
        let mut e = Element::zero();
        e.add_term(word, c);
        e
    }
    pub fn add_term(&mut self, word: Word, c: Poly) {
        let cur = self.0.remove(&word).unwrap_or_default();
        let sum = &cur + &c;
        if !sum.is_zero() {
            self.0.insert(word, sum);
        }
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.0.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn coefficient(&self, word: &[bool]) -> Poly {
        self.0.get(word).cloned().unwrap_or_default()
    }
    pub fn scaled(&self, c: &Poly) -> Element {
        let mut out = Element::zero();
        for (w, p) in &self.0 {
            out.add_term(w.clone(), p * c);
        }
        out
    }
    pub fn plus(&self, o: &Element) -> Element {
        let mut out = self.clone();
        for (w, p) in &o.0 {
            out.add_term(w.clone(), p.clone());
        }
        out
    }
    pub fn minus(&self, o: &Element) -> Element {
        self.plus(&o.scaled(&Poly::constant(-1)))
    }
    /// Swaps two adjacent tensor factors.
    pub fn swap(&self, pos: usize) -> Element {
        let mut out = Element::zero();
        for (w, p) in &self.0 {
            let mut w = w.clone();
            w.swap(pos, pos + 1);
            out.add_term(w, p.clone());
        }
        out
    }
    pub fn substitute(&self, h: i64, t: i64) -> Element {
        let mut out = Element::zero();
        for (w, p) in &self.0 {
            out.add_term(w.clone(), p.substitute(h, t));
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(w, p)| {
                let word: Vec<&str> = w.iter().map(|&b| if b { "x" } else { "1" }).collect();
                format!("({p})·{}", word.join("⊗"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SystemKind {
    F1,
    F5,
}

/// Structure tables of a rank-two Frobenius system on the basis `{1, x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSystem {
    pub kind: SystemKind,
    mult: [[Element; 2]; 2],
    comult: [Element; 2],
    counit: [Poly; 2],
}

impl FrobeniusSystem {
    /// Universal system: `x^2 = hx + t`, `Δ(1) = 1⊗x + x⊗1 − h 1⊗1`, `Δ(x) = x⊗x + t 1⊗1`.
    pub fn f5() -> FrobeniusSystem {
        let xx = Element::term(vec![true], Poly::h()).plus(&Element::term(vec![false], Poly::t()));
        let d1 = Element::basis(&[false, true])
            .plus(&Element::basis(&[true, false]))
            .minus(&Element::term(vec![false, false], Poly::h()));
        let dx = Element::basis(&[true, true]).plus(&Element::term(vec![false, false], Poly::t()));
        FrobeniusSystem {
            kind: SystemKind::F5,
            mult: [[Element::one(), Element::x()], [Element::x(), xx]],
            comult: [d1, dx],
            counit: [Poly::zero(), Poly::one()],
        }
    }

    /// `Z[x]/(x^2)`.
    pub fn f1() -> FrobeniusSystem {
        let mut s = FrobeniusSystem::f5().substituted(0, 0);
        s.kind = SystemKind::F1;
        s
    }

    pub fn substituted(&self, h: i64, t: i64) -> FrobeniusSystem {
        let m = |e: &Element| e.substitute(h, t);
        FrobeniusSystem {
            kind: self.kind,
            mult: [[m(&self.mult[0][0]), m(&self.mult[0][1])], [m(&self.mult[1][0]), m(&self.mult[1][1])]],
            comult: [m(&self.comult[0]), m(&self.comult[1])],
            counit: [self.counit[0].substitute(h, t), self.counit[1].substitute(h, t)],
        }
    }

    /// Replaces one comultiplication value; used to build broken systems for negative controls.
    pub fn with_comultiplication(mut self, basis: bool, value: Element) -> FrobeniusSystem {
        self.comult[basis as usize] = value;
        self
    }

    pub fn multiply_basis(&self, a: bool, b: bool) -> &Element {
        &self.mult[a as usize][b as usize]
    }

    pub fn comultiply_basis(&self, a: bool) -> &Element {
        &self.comult[a as usize]
    }

    /// Product of two single-factor elements.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (wa, pa) in a.terms() {
            for (wb, pb) in b.terms() {
                assert!(wa.len() == 1 && wb.len() == 1, "multiply takes single tensor factors");
                out = out.plus(&self.mult[wa[0] as usize][wb[0] as usize].scaled(&(pa * pb)));
            }
        }
        out
    }

    pub fn comultiply(&self, a: &Element) -> Element {
        self.apply_comultiplication(a, 0)
    }

    pub fn counit(&self, a: &Element) -> Poly {
        let mut out = Poly::zero();
        for (w, p) in a.terms() {
            assert_eq!(w.len(), 1, "counit takes a single tensor factor");
            out = &out + &(p * &self.counit[w[0] as usize]);
        }
        out
    }

    /// Multiplies tensor factors `pos` and `pos + 1`.
    pub fn apply_multiplication(&self, e: &Element, pos: usize) -> Element {
        let mut out = Element::zero();
        for (w, p) in e.terms() {
            for (r, q) in self.mult[w[pos] as usize][w[pos + 1] as usize].terms() {
                let mut nw = w[..pos].to_vec();
                nw.push(r[0]);
                nw.extend_from_slice(&w[pos + 2..]);
                out.add_term(nw, p * q);
            }
        }
        out
    }

    /// Splits tensor factor `pos` into two.
    pub fn apply_comultiplication(&self, e: &Element, pos: usize) -> Element {
        let mut out = Element::zero();
        for (w, p) in e.terms() {
            for (r, q) in self.comult[w[pos] as usize].terms() {
                let mut nw = w[..pos].to_vec();
                nw.extend_from_slice(r);
                nw.extend_from_slice(&w[pos + 1..]);
                out.add_term(nw, p * q);
            }
        }
        out
    }

    /// Applies the counit to tensor factor `pos`.
    pub fn apply_counit(&self, e: &Element, pos: usize) -> Element {
        let mut out = Element::zero();
        for (w, p) in e.terms() {
            let c = &self.counit[w[pos] as usize];
            if c.is_zero() {
                continue;
            }
            let mut nw = w.clone();
            nw.remove(pos);
            out.add_term(nw, p * c);
        }
        out
    }

    /// `x^n` written in the basis, and the number of `x^2` rewrites used.
    pub fn reduce_power(&self, n: u32) -> (Element, u32) {
        if n == 0 {
            return (Element::one(), 0);
        }
        let mut acc = Element::x();
        let mut steps = 0;
        for _ in 1..n {
            acc = self.multiply(&acc, &Element::x());
            steps += 1;
        }
        (acc, steps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Basis words on which the identity fails.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub system: SystemKind,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn words(n: usize) -> Vec<Word> {
    (0..1u32 << n).map(|b| (0..n).map(|i| b >> (n - 1 - i) & 1 == 1).collect()).collect()
}

fn word_name(w: &[bool]) -> String {
    w.iter().map(|&b| if b { "x" } else { "1" }).collect::<Vec<_>>().join("⊗")
}

pub fn check_axioms(sys: &FrobeniusSystem) -> AxiomReport {
    type Identity<'a> = Box<dyn Fn(&Element) -> (Element, Element) + 'a>;
    let s = sys;
    let cases: Vec<(&'static str, usize, Identity)> = vec![
        ("associativity", 3, Box::new(|e| (s.apply_multiplication(&s.apply_multiplication(e, 0), 0), s.apply_multiplication(&s.apply_multiplication(e, 1), 0)))),
        ("commutativity", 2, Box::new(|e| (s.apply_multiplication(e, 0), s.apply_multiplication(&e.swap(0), 0)))),
        ("unit", 1, Box::new(|e| (s.multiply(&Element::one(), e), e.clone()))),
        ("coassociativity", 1, Box::new(|e| {
            let d = s.apply_comultiplication(e, 0);
            (s.apply_comultiplication(&d, 0), s.apply_comultiplication(&d, 1))
        })),
        ("cocommutativity", 1, Box::new(|e| {
            let d = s.apply_comultiplication(e, 0);
            (d.swap(0), d)
        })),
        ("counit", 1, Box::new(|e| (s.apply_counit(&s.apply_comultiplication(e, 0), 0), e.clone()))),
        ("counit (right)", 1, Box::new(|e| (s.apply_counit(&s.apply_comultiplication(e, 0), 1), e.clone()))),
        ("frobenius (left)", 2, Box::new(|e| {
            let lhs = s.apply_multiplication(&s.apply_comultiplication(e, 1), 0);
            (lhs, s.apply_comultiplication(&s.apply_multiplication(e, 0), 0))
        })),
        ("frobenius (right)", 2, Box::new(|e| {
            let rhs = s.apply_multiplication(&s.apply_comultiplication(e, 0), 1);
            (s.apply_comultiplication(&s.apply_multiplication(e, 0), 0), rhs)
        })),
    ];
    let checks = cases
        .into_iter()
        .map(|(name, n, f)| {
            let failures: Vec<String> = words(n)
                .into_iter()
                .filter(|w| {
                    let (a, b) = f(&Element::basis(w));
                    a != b
                })
                .map(|w| word_name(&w))
                .collect();
            AxiomCheck { name, passed: failures.is_empty(), failures }
        })
        .collect();
    AxiomReport { system: sys.kind, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        let f1 = FrobeniusSystem::f1();
        let f5 = FrobeniusSystem::f5();
        assert!(f1.multiply(&Element::x(), &Element::x()).is_zero());
        let xx = f5.multiply(&Element::x(), &Element::x());
        assert_eq!(xx.coefficient(&[true]), Poly::h());
        assert_eq!(xx.coefficient(&[false]), Poly::t());
        for s in [&f1, &f5] {
            assert_eq!(s.multiply(&Element::one(), &Element::x()), Element::x());
        }
    }

    #[test]
    fn coproducts() {
        let f1 = FrobeniusSystem::f1();
        let f5 = FrobeniusSystem::f5();
        let dx = f5.comultiply(&Element::x());
        assert_eq!(dx, Element::basis(&[true, true]).plus(&Element::term(vec![false, false], Poly::t())));
        assert_eq!(f1.comultiply(&Element::one()), Element::basis(&[false, true]).plus(&Element::basis(&[true, false])));
        assert_eq!(f1.comultiply(&Element::x()), Element::basis(&[true, true]));
        let d1 = f5.comultiply(&Element::one());
        assert_eq!(d1.coefficient(&[false, false]), Poly::monomial(-1, 1, 0));
    }

    #[test]
    fn counits() {
        let f = FrobeniusSystem::f1();
        assert_eq!(f.counit(&Element::one()), Poly::zero());
        assert_eq!(f.counit(&Element::x()), Poly::one());
        let e = Element::term(vec![true], Poly::constant(3)).plus(&Element::term(vec![false], Poly::constant(5)));
        assert_eq!(f.counit(&e), Poly::constant(3));
    }

    #[test]
    fn axioms_hold() {
        for s in [FrobeniusSystem::f1(), FrobeniusSystem::f5()] {
            let r = check_axioms(&s);
            assert!(r.all_passed(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_comultiplication_is_caught() {
        let bad = FrobeniusSystem::f1().with_comultiplication(true, Element::basis(&[false, false]));
        let r = check_axioms(&bad);
        assert!(!r.check("coassociativity").unwrap().passed);
    }

    #[test]
    fn specialization_is_f1() {
        let s = FrobeniusSystem::f5().substituted(0, 0);
        let f1 = FrobeniusSystem::f1();
        for a in [false, true] {
            assert_eq!(s.comultiply_basis(a), f1.comultiply_basis(a));
            for b in [false, true] {
                assert_eq!(s.multiply_basis(a, b), f1.multiply_basis(a, b));
            }
        }
    }

    #[test]
    fn dot_reduction() {
        let f5 = FrobeniusSystem::f5();
        for n in 1..8 {
            let (e, steps) = f5.reduce_power(n);
            assert!(steps < n);
            assert!(e.terms().all(|(w, _)| w.len() == 1));
        }
        // x^3 = (h^2 + t) x + h t
        let (e, _) = f5.reduce_power(3);
        assert_eq!(e.coefficient(&[true]), &(&Poly::h() * &Poly::h()) + &Poly::t());
        assert_eq!(e.coefficient(&[false]), &Poly::h() * &Poly::t());
        assert!(FrobeniusSystem::f1().reduce_power(2).0.is_zero());
    }

    #[test]
    fn poly_display() {
        let p = &(&Poly::h() * &Poly::h()) - &Poly::constant(2);
        assert_eq!(p.to_string(), "-2 + h^2");
    }
}
