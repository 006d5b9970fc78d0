//! The diagramless complex of a link: direct sums of state-surface complexes
//! over a set of diagram classes, split by the `B` grading and into isolated
//! pieces, with the crossing-relabelling isomorphisms between them.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{assemble, homology, ChainComplex, GradingScheme, Homology, HomologyGroup};
use crate::diagram::{parse_pd, LinkDiagram};
use crate::error::{Error, Result};
use crate::frobenius::FrobeniusSystem;
use crate::states::SignRule;
use crate::surface::Gradings;

#[derive(Clone, Debug)]
pub struct DiagramClass {
    pub label: String,
    pub diagram: LinkDiagram,
}

/// Diagrams the user declares pairwise inequivalent, all with the same crossing count.
#[derive(Clone, Debug)]
pub struct DiagramClassSet {
    pub classes: Vec<DiagramClass>,
}

impl DiagramClassSet {
    pub fn new(classes: Vec<DiagramClass>) -> Result<DiagramClassSet> {
        if classes.is_empty() {
            return Err(Error::Invalid("no diagram classes given".into()));
        }
        let mut counts: Vec<usize> = classes.iter().map(|c| c.diagram.crossing_count()).collect();
        counts.sort_unstable();
        counts.dedup();
        if counts.len() > 1 {
            return Err(Error::MixedCrossingCounts(counts));
        }
        for c in &classes {
            if !c.diagram.is_spherical() {
                return Err(Error::NotSpherical(c.diagram.genus()));
            }
        }
        Ok(DiagramClassSet { classes })
    }

    /// Reads `label: PD` lines; blank lines and lines starting with `#` are skipped.
    pub fn parse_manifest(text: &str) -> Result<DiagramClassSet> {
        let mut classes = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (label, pd) = line.split_once(':').ok_or_else(|| Error::Manifest { line: n + 1, msg: "expected `label: PD`".into() })?;
            let label = label.trim();
            if label.is_empty() {
                return Err(Error::Manifest { line: n + 1, msg: "empty label".into() });
            }
            if classes.iter().any(|c: &DiagramClass| c.label == label) {
                return Err(Error::Manifest { line: n + 1, msg: format!("duplicate label `{label}`") });
            }
            let diagram = parse_pd(pd).map_err(|e| Error::Manifest { line: n + 1, msg: e.to_string() })?;
            classes.push(DiagramClass { label: label.to_string(), diagram });
        }
        DiagramClassSet::new(classes)
    }

    pub fn crossing_count(&self) -> usize {
        self.classes[0].diagram.crossing_count()
    }
}

/// Generators of a complex grouped by their `B` grading.
pub fn b_decompose(c: &ChainComplex) -> BTreeMap<i64, Vec<usize>> {
    let mut out: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (g, gen) in c.generators.iter().enumerate() {
        out.entry(gen.gradings.b).or_default().push(g);
    }
    out
}

/// Connected pieces of the graph whose edges are nonzero differential entries
/// between the given generators. Pieces are ordered by their first generator.
pub fn iirreducible_split(c: &ChainComplex, gens: &[usize]) -> Vec<Vec<usize>> {
    let pos: HashMap<usize, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut parent: Vec<usize> = (0..gens.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (i, &g) in gens.iter().enumerate() {
        for &(t, _) in &c.differential[g] {
            if let Some(&j) = pos.get(&t) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &g) in gens.iter().enumerate() {
        groups.entry(find(&mut parent, i)).or_default().push(g);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for v in &mut out {
        v.sort_unstable();
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubcomplexId {
    pub diagram: usize,
    pub b: i64,
    pub component: usize,
}

/// Isomorphism between complexes: generator `g` maps to `weight * target[image]`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub target: ChainComplex,
    pub image: Vec<(usize, i64)>,
}

/// Weight of the relabelling `(p, p+1)` on a generator: -1 when both markers are
/// of the kind the sign rule counts, +1 otherwise.
pub fn psi_weight(rule: SignRule, m: crate::states::MarkerVector, p: usize) -> i64 {
    let (a, b) = (m.is_positive(p), m.is_positive(p + 1));
    let flip = match rule {
        SignRule::Alpha => !a && !b,
        SignRule::Sigma => a && b,
        SignRule::Trivial => false,
    };
    if flip {
        -1
    } else {
        1
    }
}

/// The chain isomorphism induced by swapping crossings `p` and `p + 1`,
/// checked against both differentials.
pub fn psi_sigma(c: &ChainComplex, p: usize) -> Result<ChainMap> {
    let k = c.diagram.crossing_count();
    if p + 1 >= k {
        return Err(Error::Precondition(format!("transposition ({}, {}) out of range for {k} crossings", p + 1, p + 2)));
    }
    let mut perm: Vec<usize> = (0..k).collect();
    perm.swap(p, p + 1);
    let target = assemble(&c.diagram.reordered(&perm), &FrobeniusSystem::f1(), c.sign_rule)?;
    let mut image = Vec::with_capacity(c.len());
    for gen in &c.generators {
        let s = crate::states::EnhancedState::new(gen.state.markers.swapped(p), gen.state.signs);
        let t = target
            .index_of(&s)
            .ok_or_else(|| Error::Internal(format!("relabelled state {} missing", s.markers)))?;
        if target.generators[t].gradings != gen.gradings {
            return Err(Error::Internal(format!("relabelling changes gradings of {}", c.state_label(t))));
        }
        image.push((t, psi_weight(c.sign_rule, gen.state.markers, p)));
    }
    let map = ChainMap { target, image };
    verify_chain_map(c, &map)?;
    Ok(map)
}

/// `psi d = d' psi` entrywise.
pub fn verify_chain_map(c: &ChainComplex, map: &ChainMap) -> Result<()> {
    let t = &map.target;
    for g in 0..c.len() {
        let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
        for &(u, v) in &c.differential[g] {
            let (iu, w) = map.image[u];
            *lhs.entry(iu).or_default() += v * w;
        }
        let (ig, wg) = map.image[g];
        let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
        for &(u, v) in &t.differential[ig] {
            *rhs.entry(u).or_default() += v * wg;
        }
        lhs.retain(|_, v| *v != 0);
        rhs.retain(|_, v| *v != 0);
        if lhs != rhs {
            return Err(Error::Internal(format!("relabelling fails to commute with d at {}", c.state_label(g))));
        }
    }
    Ok(())
}

/// Applies a sequence of adjacent transpositions; returns the final complex
/// and where each generator lands, with the accumulated weight.
pub fn psi_composite(c: &ChainComplex, transpositions: &[usize]) -> Result<ChainMap> {
    let mut cur = c.clone();
    let mut image: Vec<(usize, i64)> = (0..c.len()).map(|g| (g, 1)).collect();
    for &p in transpositions {
        let step = psi_sigma(&cur, p)?;
        for e in image.iter_mut() {
            let (t, w) = step.image[e.0];
            *e = (t, e.1 * w);
        }
        cur = step.target;
    }
    Ok(ChainMap { target: cur, image })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassContribution {
    pub label: String,
    pub homology: Homology,
    pub b_values: Vec<i64>,
    /// Isolated pieces per `B` value.
    pub components: BTreeMap<i64, usize>,
    /// Copies of the reference homology this class contributes.
    pub copies: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramlessReport {
    pub crossings: usize,
    pub homology: Homology,
    /// Normalized Khovanov homology of the first class, the unit that `n` counts.
    pub reference: Homology,
    pub n: usize,
    pub per_class: Vec<ClassContribution>,
    pub warnings: Vec<String>,
}

/// Affine regrading of a diagram's surface gradings into its normalized
/// Khovanov bigrading: `i = I - I0 - n_-` and `j = k - I0 - J + n_+ - 2 n_-`,
/// where `I0` is the signature of the all-positive state.
pub fn khovanov_regrading(c: &ChainComplex) -> impl Fn(Gradings) -> Gradings {
    let d = &c.diagram;
    let k = d.crossing_count() as i64;
    let top = c.generators.iter().find(|g| g.state.markers.negatives() == 0).map_or(0, |g| g.gradings.i);
    let np = d.positive_crossings() as i64;
    let nn = d.negative_crossings() as i64;
    move |g: Gradings| Gradings::new(g.i - top - nn, k - top - g.j + np - 2 * nn, g.k, 0)
}

/// `Some(n)` when `total` is exactly `n` copies of `unit` in every bidegree, torsion included.
pub fn copies_of(total: &Homology, unit: &Homology) -> Option<usize> {
    let ur = unit.total_rank();
    if unit.groups.is_empty() {
        return if total.groups.is_empty() { Some(0) } else { None };
    }
    let n = match total.total_rank().checked_div(ur) {
        Some(n) => n,
        None => {
            let ut: usize = unit.groups.values().map(|g| g.torsion.len()).sum();
            let tt: usize = total.groups.values().map(|g| g.torsion.len()).sum();
            tt / ut
        }
    };
    let mut keys: Vec<Gradings> = total.groups.keys().chain(unit.groups.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let ok = keys.iter().all(|&k| {
        let u = unit.get(k);
        let mut want = HomologyGroup::default();
        for _ in 0..n {
            want = want.sum(&u);
        }
        total.get(k) == want
    });
    ok.then_some(n)
}

/// Grading census used to flag classes that may be the same up to isotopy.
fn fingerprint(c: &ChainComplex) -> (Vec<Gradings>, Vec<i64>) {
    let mut g: Vec<Gradings> = c.generators.iter().map(|x| x.gradings).collect();
    g.sort();
    let mut sig: Vec<i64> = c.generators.iter().filter(|x| x.state.signs == 0).map(|x| x.gradings.i).collect();
    sig.sort();
    (g, sig)
}

pub fn diagramless_homology(ds: &DiagramClassSet, rule: SignRule) -> Result<DiagramlessReport> {
    let per: Vec<(ChainComplex, Homology, Homology)> = ds
        .classes
        .par_iter()
        .map(|cl| -> Result<(ChainComplex, Homology, Homology)> {
            let c = assemble(&cl.diagram, &FrobeniusSystem::f1(), rule)?;
            let h = homology(&c, GradingScheme::Surface)?;
            let kh = homology(&c, GradingScheme::Khovanov { normalized: true })?.project(|g| Gradings::new(g.i, g.j, g.k, 0));
            if h.project(khovanov_regrading(&c)) != kh {
                return Err(Error::Internal(format!("class `{}`: surface and Khovanov gradings disagree", cl.label)));
            }
            Ok((c, h, kh))
        })
        .collect::<Result<_>>()?;
    let reference = per[0].2.clone();
    let total = per.iter().fold(Homology::default(), |acc, (_, h, _)| acc.direct_sum(h));
    let total_kh = per.iter().fold(Homology::default(), |acc, (_, _, kh)| acc.direct_sum(kh));
    let n = copies_of(&total_kh, &reference).ok_or_else(|| {
        Error::Structural("total homology is not a whole number of copies of the reference in every bidegree; a duplicate class, a class of another link, or an internal fault".into())
    })?;
    let mut per_class = Vec::new();
    for (cl, (c, h, kh)) in ds.classes.iter().zip(&per) {
        let bs = b_decompose(c);
        let components = bs.iter().map(|(&b, gens)| (b, iirreducible_split(c, gens).len())).collect();
        let copies = copies_of(kh, &reference)
            .ok_or_else(|| Error::Structural(format!("class `{}` is not a whole number of reference copies", cl.label)))?;
        per_class.push(ClassContribution { label: cl.label.clone(), homology: h.clone(), b_values: bs.keys().copied().collect(), components, copies });
    }
    let mut warnings = Vec::new();
    let prints: Vec<_> = per.iter().map(|(c, _, _)| fingerprint(c)).collect();
    for i in 0..prints.len() {
        for j in i + 1..prints.len() {
            if prints[i] == prints[j] {
                warnings.push(format!(
                    "classes `{}` and `{}` have identical grading censuses; equivalence is unresolved",
                    ds.classes[i].label, ds.classes[j].label
                ));
            }
        }
    }
    Ok(DiagramlessReport { crossings: ds.crossing_count(), homology: total, reference, n, per_class, warnings })
}

impl DiagramlessReport {
    pub fn to_json(&self) -> Value {
        let per: Vec<Value> = self
            .per_class
            .iter()
            .map(|c| json!({"label": c.label, "copies": c.copies, "b": c.b_values, "homology": c.homology.to_json()}))
            .collect();
        json!({
            "k": self.crossings,
            "homology": self.homology.to_json(),
            "N": self.n,
            "classes": self.per_class.len(),
            "per_class_contributions": per,
            "warnings": self.warnings,
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = self.homology.to_table();
        out.push_str(&format!("N = {} from {} supplied diagram classes\n", self.n, self.per_class.len()));
        for c in &self.per_class {
            out.push_str(&format!("  {}: {} cop{} (b = {:?})\n", c.label, c.copies, if c.copies == 1 { "y" } else { "ies" }, c.b_values));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::khovanov_complex;

    pub(crate) const K2: &str = "NR+NR: X[1,3,3,2] X[2,4,4,1]
NR+NL: X[1,3,3,2] X[4,2,1,4]
PL+PL: X[1,2,3,3] X[2,1,4,4]
PL+PR: X[1,2,3,3] X[4,4,1,2]
NR+PR: X[1,3,3,2] X[4,4,1,2]
NR+PL: X[1,3,3,2] X[2,1,4,4]
";

    #[test]
    fn manifest_parsing() {
        let ds = DiagramClassSet::parse_manifest("# curls\nneg: X[1,2,2,1]\n\npos: X[2,2,1,1]\n").unwrap();
        assert_eq!(ds.classes.len(), 2);
        assert!(matches!(DiagramClassSet::parse_manifest("a: X[1,2,2,1]\nb: X[1,3,3,2] X[2,4,4,1]"), Err(Error::MixedCrossingCounts(v)) if v == vec![1, 2]));
        assert!(matches!(DiagramClassSet::parse_manifest("a X[1,2,2,1]"), Err(Error::Manifest { line: 1, .. })));
        assert!(matches!(DiagramClassSet::parse_manifest("a: X[1,2,2,1]\nb: X[1,2,2"), Err(Error::Manifest { line: 2, .. })));
        assert!(matches!(DiagramClassSet::parse_manifest("t: X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]"), Err(Error::NotSpherical(1))));
    }

    #[test]
    fn k1_unknot() {
        let ds = DiagramClassSet::parse_manifest("neg: X[1,2,2,1]\npos: X[2,2,1,1]").unwrap();
        let r = diagramless_homology(&ds, SignRule::Alpha).unwrap();
        assert_eq!(r.n, 2);
        let per_b = r.homology.project(|g| Gradings::new(g.i, 0, g.k, g.b));
        assert_eq!(per_b.groups.len(), 2);
        assert_eq!(per_b.get(Gradings::new(0, 0, 1, 0)), HomologyGroup::free(2));
        assert_eq!(per_b.get(Gradings::new(0, 0, 1, 1)), HomologyGroup::free(2));
    }

    #[test]
    fn k2_unknot() {
        let ds = DiagramClassSet::parse_manifest(K2).unwrap();
        let r = diagramless_homology(&ds, SignRule::Alpha).unwrap();
        assert_eq!(r.n, 6);
        let per_b = r.homology.project(|g| Gradings::new(g.i, 0, g.k, g.b));
        for b in 0..3 {
            assert_eq!(per_b.get(Gradings::new(0, 0, 2, b)), HomologyGroup::free(4), "b = {b}");
        }
        assert_eq!(per_b.groups.len(), 3);
    }

    #[test]
    fn b_pieces() {
        let d = parse_pd("X[1,2,2,1]").unwrap();
        let c = khovanov_complex(&d, SignRule::Alpha).unwrap();
        let bs = b_decompose(&c);
        assert_eq!(bs.len(), 1);
        let gens = &bs[&0];
        let comps = iirreducible_split(&c, gens);
        let mut sizes: Vec<usize> = comps.iter().map(|x| x.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(gens.iter().filter(|&&g| c.generators[g].gradings.i == 0).count(), 4);
        let u = khovanov_complex(&LinkDiagram::unknot(), SignRule::Alpha).unwrap();
        assert_eq!(iirreducible_split(&u, &[0, 1]).len(), 2);
        assert!(iirreducible_split(&u, &[]).is_empty());
    }

    #[test]
    fn psi_weights() {
        use crate::states::MarkerVector;
        let m = |s: &str| MarkerVector::parse(s).unwrap();
        assert_eq!(psi_weight(SignRule::Alpha, m("++"), 0), 1);
        assert_eq!(psi_weight(SignRule::Alpha, m("--"), 0), -1);
        assert_eq!(psi_weight(SignRule::Alpha, m("+-"), 0), 1);
    }

    #[test]
    fn psi_commutes_and_composes() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let c = khovanov_complex(&d, SignRule::Alpha).unwrap();
        for p in 0..2 {
            let twice = psi_composite(&c, &[p, p]).unwrap();
            assert!(twice.image.iter().enumerate().all(|(g, &(t, w))| t == g && w == 1));
        }
        let a = psi_composite(&c, &[0, 1, 0]).unwrap();
        let b = psi_composite(&c, &[1, 0, 1]).unwrap();
        assert_eq!(a.image, b.image);
        let s = khovanov_complex(&d, SignRule::Sigma).unwrap();
        assert!(psi_sigma(&s, 0).is_ok());
    }
}
