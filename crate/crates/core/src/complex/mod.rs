//! Graded chain complexes on enhanced states, integer homology, and the
//! oracles used to cross-check them.

pub mod homology;
pub mod snf;

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::frobenius::{Element, FrobeniusSystem, SystemKind};
use crate::states::{correspondence, enhancements, enumerate_states, EdgeKind, EnhancedState, MarkerVector, SignRule};
use crate::surface::{require_spherical, Gradings, MarkerData};

pub use homology::{homology, homology_mod2, homology_rational, Homology, HomologyGroup};
pub use snf::{smith_normal_form, Snf};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub state: EnhancedState,
    pub circles: usize,
    /// Surface gradings `(I, J, K, B)`.
    pub gradings: Gradings,
    /// Unnormalized Khovanov gradings `(i, j)`.
    pub kh: (i64, i64),
}

/// Which grading tuple bins the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GradingScheme {
    Surface,
    /// Khovanov `(i, j)` in the `i`, `j` slots; `k` and `b` carry crossing count and `B`.
    Khovanov { normalized: bool },
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub diagram: LinkDiagram,
    pub sign_rule: SignRule,
    pub generators: Vec<Generator>,
    /// Nonzero entries `(target, coefficient)` of the differential, per source generator.
    pub differential: Vec<Vec<(usize, i64)>>,
    index: HashMap<EnhancedState, usize>,
}

fn word_of(plus: bool) -> bool {
    plus
}

fn integer_entries(e: &Element) -> Result<Vec<(Vec<bool>, i64)>> {
    e.terms()
        .map(|(w, p)| {
            let c = p.as_integer().ok_or_else(|| Error::Precondition("integer complexes need a system with constant structure maps (f1)".into()))?;
            let c: i64 = c.try_into().map_err(|_| Error::Internal("structure constant overflow".into()))?;
            Ok((w.clone(), c))
        })
        .collect()
}

pub fn assemble(d: &LinkDiagram, sys: &FrobeniusSystem, rule: SignRule) -> Result<ChainComplex> {
    require_spherical(d)?;
    if sys.kind == SystemKind::F5 {
        return Err(Error::Precondition("integer homology runs over f1; f5 is available for algebra checks only".into()));
    }
    let k = d.crossing_count();
    if k > crate::states::MAX_CROSSINGS {
        return Err(Error::TooLarge(k));
    }
    let states = enumerate_states(d);
    let data: Vec<MarkerData> = states.par_iter().map(|&m| MarkerData::new(d, m)).collect();
    let mut generators = Vec::new();
    let mut start = Vec::with_capacity(states.len());
    for (m, md) in states.iter().zip(&data) {
        start.push(generators.len());
        let n = md.circles();
        let r = m.negatives() as i64;
        for s in enhancements(*m, n) {
            let plus = s.plus_count() as i64;
            let v = (n as i64 - plus) - plus;
            generators.push(Generator { state: s, circles: n, gradings: md.gradings(s.signs), kh: (r, v + r) });
        }
    }
    let index: HashMap<EnhancedState, usize> = generators.iter().enumerate().map(|(i, g)| (g.state, i)).collect();
    let columns: Vec<Vec<Vec<(usize, i64)>>> = states
        .par_iter()
        .enumerate()
        .map(|(mi, &m)| -> Result<Vec<Vec<(usize, i64)>>> {
            let src = &data[mi].surface.smoothing;
            let n = src.circle_count();
            let mut cols = vec![Vec::new(); 1 << n];
            for i in 0..k {
                if !m.is_positive(i) {
                    continue;
                }
                let tm = m.with(i, false);
                let ti = (tm.bits()) as usize;
                let tgt = &data[ti].surface.smoothing;
                debug_assert_eq!(data[ti].surface.markers(), tm);
                let corr = correspondence(d, src, tgt, i)?;
                let sign = rule.sign(m, i);
                for (si, col) in cols.iter_mut().enumerate() {
                    let s = EnhancedState::new(m, si as u64);
                    let mut base = 0u64;
                    for &(a, b) in &corr.untouched {
                        if s.is_plus(a) {
                            base |= 1 << b;
                        }
                    }
                    let (image, slots): (Element, Vec<usize>) = match corr.kind {
                        EdgeKind::Merge { a, b, into } => (sys.multiply(&Element::basis(&[word_of(s.is_plus(a))]), &Element::basis(&[word_of(s.is_plus(b))])), vec![into]),
                        EdgeKind::Split { from, a, b } => (sys.comultiply(&Element::basis(&[word_of(s.is_plus(from))])), vec![a, b]),
                    };
                    for (w, c) in integer_entries(&image)? {
                        let mut bits = base;
                        for (&slot, &x) in slots.iter().zip(&w) {
                            if x {
                                bits |= 1 << slot;
                            }
                        }
                        let t = index[&EnhancedState::new(tm, bits)];
                        col.push((t, sign * c));
                    }
                }
            }
            Ok(cols)
        })
        .collect::<Result<_>>()?;
    let mut differential = vec![Vec::new(); generators.len()];
    for (mi, cols) in columns.into_iter().enumerate() {
        for (si, col) in cols.into_iter().enumerate() {
            differential[start[mi] + si] = col;
        }
    }
    Ok(ChainComplex { diagram: d.clone(), sign_rule: rule, generators, differential, index })
}

impl ChainComplex {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, s: &EnhancedState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.differential.iter().map(|c| c.len()).sum()
    }

    /// Grading tuple of a generator under a scheme.
    pub fn key(&self, g: usize, scheme: GradingScheme) -> Gradings {
        let gen = &self.generators[g];
        match scheme {
            GradingScheme::Surface => gen.gradings,
            GradingScheme::Khovanov { normalized } => {
                let (mut i, mut j) = gen.kh;
                if normalized {
                    let np = self.diagram.positive_crossings() as i64;
                    let nn = self.diagram.negative_crossings() as i64;
                    i -= nn;
                    j += np - 2 * nn;
                }
                Gradings::new(i, j, gen.gradings.k, gen.gradings.b)
            }
        }
    }

    pub fn state_label(&self, g: usize) -> String {
        let s = &self.generators[g].state;
        let n = self.generators[g].circles;
        let signs: String = (0..n).map(|j| if s.is_plus(j) { '+' } else { '-' }).collect();
        format!("{}|{}", s.markers, signs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub source: String,
    pub target: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredReport {
    pub ok: bool,
    pub witnesses: Vec<Witness>,
}

pub fn verify_d_squared(c: &ChainComplex) -> DSquaredReport {
    let witnesses: Vec<Witness> = (0..c.len())
        .into_par_iter()
        .flat_map_iter(|g| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(t, a) in &c.differential[g] {
                for &(u, b) in &c.differential[t] {
                    *acc.entry(u).or_default() += a * b;
                }
            }
            acc.into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(u, v)| Witness { source: c.state_label(g), target: c.state_label(u), value: v })
                .collect::<Vec<_>>()
        })
        .collect();
    DSquaredReport { ok: witnesses.is_empty(), witnesses }
}

/// Checks that every differential entry raises the first grading by one and fixes the rest.
pub fn check_grading_shift(c: &ChainComplex, scheme: GradingScheme) -> Result<()> {
    for (g, col) in c.differential.iter().enumerate() {
        let a = c.key(g, scheme);
        for &(t, _) in col {
            let b = c.key(t, scheme);
            if b != Gradings::new(a.i + 1, a.j, a.k, a.b) {
                return Err(Error::Internal(format!("edge {} -> {} maps {a} to {b}", c.state_label(g), c.state_label(t))));
            }
        }
    }
    Ok(())
}

/// Laurent polynomial in `q`, exponent to coefficient.
pub type Laurent = BTreeMap<i64, i64>;

pub(crate) fn add_term(p: &mut Laurent, e: i64, c: i64) {
    let v = p.entry(e).or_default();
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

/// `Σ (-1)^i q^j` over generators.
pub fn graded_euler_characteristic(c: &ChainComplex, scheme: GradingScheme) -> Laurent {
    let mut p = Laurent::new();
    for g in 0..c.len() {
        let k = c.key(g, scheme);
        add_term(&mut p, k.j, if k.i % 2 == 0 { 1 } else { -1 });
    }
    p
}

/// Unnormalized bracket state sum `Σ_s (-1)^r q^r (q + q^-1)^circles`, with circles
/// counted by a union-find on arc labels independent of the smoothing engine.
pub fn bracket_state_sum(d: &LinkDiagram, normalized: bool) -> Laurent {
    let k = d.crossing_count();
    let labels: Vec<u32> = d.arc_labels().to_vec();
    let pos: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut total = Laurent::new();
    for bits in 0..1u64 << k {
        let mut parent: Vec<usize> = (0..labels.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut join = |a: u32, b: u32| {
            let (x, y) = (find(&mut parent, pos[&a]), find(&mut parent, pos[&b]));
            parent[x] = y;
        };
        for (c, x) in d.crossings().iter().enumerate() {
            let [a, b, cc, dd] = x.slots;
            if bits >> c & 1 == 1 {
                join(a, b);
                join(cc, dd);
            } else {
                join(a, dd);
                join(b, cc);
            }
        }
        let circles = (0..labels.len()).filter(|&i| find(&mut parent, i) == i).count();
        let r = k as i64 - bits.count_ones() as i64;
        // (q + 1/q)^circles
        let mut poly = Laurent::new();
        poly.insert(0, 1);
        for _ in 0..circles {
            let mut next = Laurent::new();
            for (&e, &c) in &poly {
                add_term(&mut next, e + 1, c);
                add_term(&mut next, e - 1, c);
            }
            poly = next;
        }
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for (e, c) in poly {
            add_term(&mut total, e + r, sign * c);
        }
    }
    if normalized {
        let np = d.positive_crossings() as i64;
        let nn = d.negative_crossings() as i64;
        let sign = if nn % 2 == 0 { 1 } else { -1 };
        total = total.into_iter().map(|(e, c)| (e + np - 2 * nn, sign * c)).collect();
    }
    total
}

pub fn laurent_to_string(p: &Laurent) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = p.iter().map(|(e, c)| format!("{c}q^{e}")).collect();
    parts.join(" + ")
}

/// Per-vertex sign turning the sigma-rule complex into the alpha-rule complex,
/// found by breadth-first search over the cube: `E d_sigma = d_alpha E` with `E`
/// diagonal in these signs. Errors if no such sign assignment exists.
pub fn sign_bridge(k: usize) -> Result<Vec<i64>> {
    if k > 20 {
        return Err(Error::TooLarge(k));
    }
    let n = 1usize << k;
    let mut eps = vec![0i64; n];
    let top = n - 1;
    eps[top] = 1;
    let mut queue = VecDeque::from([top]);
    while let Some(b) = queue.pop_front() {
        let m = MarkerVector::from_bits(b as u64, k);
        for i in 0..k {
            let nb = b ^ (1 << i);
            // edges run from a positive marker to a negative one; walk both ways
            let (src, tgt, i) = if m.is_positive(i) { (b, nb, i) } else { (nb, b, i) };
            let sm = MarkerVector::from_bits(src as u64, k);
            let want_ratio = SignRule::Alpha.sign(sm, i) * SignRule::Sigma.sign(sm, i);
            let other = if src == b { tgt } else { src };
            let value = eps[b] * want_ratio;
            if eps[other] == 0 {
                eps[other] = value;
                queue.push_back(other);
            } else if eps[other] != value {
                return Err(Error::Structural(format!("no consistent sign across edge at crossing {} from {}", i + 1, sm)));
            }
        }
    }
    Ok(eps)
}

/// Closed form of the bridge: `(-1)^(sum of positions of negative markers)`, positions counted from 0.
pub fn sign_bridge_formula(m: MarkerVector) -> i64 {
    let s: usize = (0..m.len()).filter(|&i| !m.is_positive(i)).sum();
    if s.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Checks `E d_sigma = d_alpha E` entrywise.
pub fn verify_sign_bridge(sigma: &ChainComplex, alpha: &ChainComplex, eps: &[i64]) -> bool {
    if sigma.len() != alpha.len() {
        return false;
    }
    (0..sigma.len()).all(|g| {
        let es = eps[sigma.generators[g].state.markers.bits() as usize];
        let mut a: Vec<(usize, i64)> = sigma.differential[g]
            .iter()
            .map(|&(t, v)| (t, v * eps[sigma.generators[t].state.markers.bits() as usize]))
            .collect();
        let mut b: Vec<(usize, i64)> = alpha.differential[g].iter().map(|&(t, v)| (t, v * es)).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    })
}

/// Graphviz rendering of the cube; negative entries get a hollow dot at the arrow tail.
pub fn to_dot(c: &ChainComplex, scheme: GradingScheme) -> String {
    let mut out = String::from("digraph cube {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    for g in 0..c.len() {
        let k = c.key(g, scheme);
        out.push_str(&format!("  g{g} [label=\"{}\\n{}\"];\n", k, c.state_label(g)));
    }
    for (g, col) in c.differential.iter().enumerate() {
        for &(t, v) in col {
            let label = if v.abs() == 1 { String::new() } else { format!(", label=\"{}\"", v.abs()) };
            if v < 0 {
                out.push_str(&format!("  g{g} -> g{t} [dir=both, arrowtail=odot{label}];\n"));
            } else {
                out.push_str(&format!("  g{g} -> g{t}{};\n", if label.is_empty() { String::new() } else { format!(" [{}]", &label[2..]) }));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Complex on `F1` with the given sign rule.
pub fn khovanov_complex(d: &LinkDiagram, rule: SignRule) -> Result<ChainComplex> {
    assemble(d, &FrobeniusSystem::f1(), rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn unknot_complex() {
        let c = khovanov_complex(&LinkDiagram::unknot(), SignRule::Alpha).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.edge_count(), 0);
        let keys: Vec<Gradings> = (0..2).map(|g| c.key(g, GradingScheme::Surface)).collect();
        assert!(keys.contains(&Gradings::new(0, -1, 0, 0)));
        assert!(keys.contains(&Gradings::new(0, 1, 0, 0)));
        let e = graded_euler_characteristic(&c, GradingScheme::Khovanov { normalized: false });
        assert_eq!(e, [(-1, 1), (1, 1)].into_iter().collect());
    }

    #[test]
    fn curl_complex() {
        for pd in ["X[1,2,2,1]", "X[2,2,1,1]"] {
            let c = khovanov_complex(&parse_pd(pd).unwrap(), SignRule::Alpha).unwrap();
            assert_eq!(c.len(), 6);
            let m: Vec<Vec<i64>> = (0..6)
                .map(|r| (0..6).map(|s| c.differential[s].iter().filter(|e| e.0 == r).map(|e| e.1).sum()).collect())
                .collect();
            assert_eq!(snf::rank_rational(&snf::from_i64(&m)), 2);
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for pd in [TREFOIL, "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "X[4,1,3,2] X[2,3,1,4]", "X[1,3,3,2] X[4,2,1,4]"] {
            let d = parse_pd(pd).unwrap();
            for rule in [SignRule::Sigma, SignRule::Alpha] {
                let c = khovanov_complex(&d, rule).unwrap();
                assert!(verify_d_squared(&c).ok, "{pd} {rule:?}");
                check_grading_shift(&c, GradingScheme::Surface).unwrap();
                check_grading_shift(&c, GradingScheme::Khovanov { normalized: true }).unwrap();
            }
        }
    }

    #[test]
    fn trivial_signs_break_d_squared() {
        // two crossings whose square mixes a merge and a split
        let d = parse_pd("X[1,3,3,2] X[2,4,4,1]").unwrap();
        let c = khovanov_complex(&d, SignRule::Trivial).unwrap();
        let r = verify_d_squared(&c);
        assert!(!r.ok);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn f5_is_refused() {
        assert!(matches!(assemble(&LinkDiagram::unknot(), &FrobeniusSystem::f5(), SignRule::Alpha), Err(Error::Precondition(_))));
    }

    #[test]
    fn table_driven_edges_match_viro_rules() {
        let d = parse_pd(TREFOIL).unwrap();
        let c = khovanov_complex(&d, SignRule::Sigma).unwrap();
        for (g, gen) in c.generators.iter().enumerate() {
            let mut want: Vec<(usize, i64)> = Vec::new();
            for i in 0..3 {
                if gen.state.markers.is_positive(i) {
                    let sign = SignRule::Sigma.sign(gen.state.markers, i);
                    for t in crate::states::viro_partial(&d, &gen.state, i).unwrap() {
                        want.push((c.index_of(&t).unwrap(), sign));
                    }
                }
            }
            let mut got = c.differential[g].clone();
            want.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn euler_matches_state_sum() {
        for pd in [TREFOIL, "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "X[4,1,3,2] X[2,3,1,4]", "X[1,2,2,1]"] {
            let d = parse_pd(pd).unwrap();
            let c = khovanov_complex(&d, SignRule::Alpha).unwrap();
            for normalized in [false, true] {
                assert_eq!(graded_euler_characteristic(&c, GradingScheme::Khovanov { normalized }), bracket_state_sum(&d, normalized), "{pd}");
            }
        }
    }

    #[test]
    fn sign_bridge_has_closed_form() {
        for k in 0..=6 {
            let eps = sign_bridge(k).unwrap();
            for (b, &e) in eps.iter().enumerate() {
                assert_eq!(e, sign_bridge_formula(MarkerVector::from_bits(b as u64, k)));
            }
        }
        let d = parse_pd(TREFOIL).unwrap();
        let s = khovanov_complex(&d, SignRule::Sigma).unwrap();
        let a = khovanov_complex(&d, SignRule::Alpha).unwrap();
        let eps = sign_bridge(3).unwrap();
        assert!(verify_sign_bridge(&s, &a, &eps));
        assert!(!verify_sign_bridge(&s, &a, &[1; 8]));
    }

    #[test]
    fn dot_marks_negative_edges() {
        let d = parse_pd("X[1,3,3,2] X[2,4,4,1]").unwrap();
        let c = khovanov_complex(&d, SignRule::Sigma).unwrap();
        let s = to_dot(&c, GradingScheme::Surface);
        assert!(s.starts_with("digraph cube"));
        assert!(s.contains("arrowtail=odot"));
    }
}
