//! Planar diagram codes: parsing, validation, orientation and the rotation system.
//!
//! A crossing `X[a,b,c,d]` lists its four arc labels counterclockwise,
//! starting from the incoming under-strand. Darts are numbered `4 * crossing + slot`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ArcId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub slots: [ArcId; 4],
}

/// A crossing-free component. `face` names the face of the rest of the
/// diagram it sits in; `None` means the outer region.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeLoop {
    pub label: ArcId,
    pub face: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: Vec<FreeLoop>,
    topo: Topology,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Topology {
    arcs: Vec<ArcId>,
    partner: Vec<usize>,
    faces: Vec<Vec<usize>>,
    face_of_dart: Vec<usize>,
    graph_component: Vec<usize>,
    graph_components: usize,
    root_faces: Vec<usize>,
    genus: usize,
    incoming: Vec<bool>,
    link_component_of_dart: Vec<usize>,
    link_components: usize,
    orientation_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub crossings: usize,
    pub arcs: usize,
    pub incidence_ok: bool,
    pub bad_arcs: Vec<ArcId>,
    pub faces: Option<usize>,
    pub genus: Option<usize>,
    pub components: Option<usize>,
    pub orientation_consistent: Option<bool>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    X,
    O,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn parse_terms(text: &str) -> Result<(Vec<Crossing>, Vec<FreeLoop>)> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut crossings = Vec::new();
    let mut loops = Vec::new();
    let skip = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i].is_ascii_whitespace() || bytes[*i] == b',') {
            *i += 1;
        }
    };
    skip(&mut i);
    let mut wrapped = false;
    if text[i..].starts_with("PD[") {
        wrapped = true;
        i += 3;
    }
    loop {
        skip(&mut i);
        if i >= bytes.len() {
            if wrapped {
                return Err(syntax(i, "missing closing ']' of PD[...]"));
            }
            break;
        }
        if wrapped && bytes[i] == b']' {
            i += 1;
            skip(&mut i);
            if i < bytes.len() {
                return Err(syntax(i, "trailing input after PD[...]"));
            }
            break;
        }
        let tok = match bytes[i] {
            b'X' => Token::X,
            b'O' => Token::O,
            _ => return Err(syntax(i, format!("expected X[..] or O[..], found '{}'", bytes[i] as char))),
        };
        i += 1;
        if i >= bytes.len() || bytes[i] != b'[' {
            return Err(syntax(i, "expected '['"));
        }
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i] != b']' {
            i += 1;
        }
        if i >= bytes.len() {
            return Err(syntax(start, "unterminated term"));
        }
        let body = &text[start..i];
        i += 1;
        let mut nums = Vec::new();
        let mut off = start;
        for part in body.split(',') {
            let t = part.trim();
            let lead = part.len() - part.trim_start().len();
            let n: i64 = t.parse().map_err(|_| syntax(off + lead, format!("invalid integer '{t}'")))?;
            if n <= 0 {
                return Err(syntax(off + lead, "arc labels must be positive"));
            }
            nums.push(n as ArcId);
            off += part.len() + 1;
        }
        match tok {
            Token::X => {
                if nums.len() != 4 {
                    return Err(syntax(start, format!("crossing needs 4 labels, found {}", nums.len())));
                }
                crossings.push(Crossing { slots: [nums[0], nums[1], nums[2], nums[3]] });
            }
            Token::O => {
                if nums.is_empty() || nums.len() > 2 {
                    return Err(syntax(start, "free loop is O[label] or O[label,face]"));
                }
                loops.push(FreeLoop { label: nums[0], face: nums.get(1).map(|&f| f as usize - 1) });
            }
        }
    }
    Ok((crossings, loops))
}

fn incidence(crossings: &[Crossing], loops: &[FreeLoop]) -> (BTreeMap<ArcId, usize>, Vec<ArcId>) {
    let mut count: BTreeMap<ArcId, usize> = BTreeMap::new();
    for c in crossings {
        for &a in &c.slots {
            *count.entry(a).or_default() += 1;
        }
    }
    let mut bad: BTreeSet<ArcId> = count.iter().filter(|(_, &n)| n != 2).map(|(&a, _)| a).collect();
    let mut seen = BTreeSet::new();
    for l in loops {
        if count.contains_key(&l.label) || !seen.insert(l.label) {
            bad.insert(l.label);
        }
    }
    (count, bad.into_iter().collect())
}

impl Topology {
    fn build(crossings: &[Crossing], loops: &[FreeLoop]) -> Result<Topology> {
        let (count, bad) = incidence(crossings, loops);
        if !bad.is_empty() {
            return Err(Error::Incidence { arcs: bad });
        }
        let n = 4 * crossings.len();
        let mut ends: BTreeMap<ArcId, Vec<usize>> = BTreeMap::new();
        for (c, x) in crossings.iter().enumerate() {
            for s in 0..4 {
                ends.entry(x.slots[s]).or_default().push(4 * c + s);
            }
        }
        let mut partner = vec![0; n];
        for v in ends.values() {
            partner[v[0]] = v[1];
            partner[v[1]] = v[0];
        }
        // faces: the face to the left of an outgoing dart; phi(d) = rot^-1(partner(d))
        let mut face_of_dart = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for d0 in 0..n {
            if face_of_dart[d0] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut orbit = Vec::new();
            let mut d = d0;
            while face_of_dart[d] == usize::MAX {
                face_of_dart[d] = f;
                orbit.push(d);
                let e = partner[d];
                d = 4 * (e / 4) + (e % 4 + 3) % 4;
            }
            faces.push(orbit);
        }
        // connected components of the 4-valent graph
        let k = crossings.len();
        let mut comp = vec![usize::MAX; k];
        let mut ncomp = 0;
        for c0 in 0..k {
            if comp[c0] != usize::MAX {
                continue;
            }
            let mut stack = vec![c0];
            comp[c0] = ncomp;
            while let Some(c) = stack.pop() {
                for s in 0..4 {
                    let o = partner[4 * c + s] / 4;
                    if comp[o] == usize::MAX {
                        comp[o] = ncomp;
                        stack.push(o);
                    }
                }
            }
            ncomp += 1;
        }
        let mut vcount = vec![0i64; ncomp];
        let mut fcount = vec![0i64; ncomp];
        for c in 0..k {
            vcount[comp[c]] += 1;
        }
        for f in &faces {
            fcount[comp[f[0] / 4]] += 1;
        }
        let mut twice_genus = 0i64;
        for i in 0..ncomp {
            twice_genus += 2 - vcount[i] + 2 * vcount[i] - fcount[i];
        }
        let genus = (twice_genus / 2) as usize;
        let mut root_faces = vec![usize::MAX; ncomp];
        for (f, darts) in faces.iter().enumerate() {
            let ci = comp[darts[0] / 4];
            let r = root_faces[ci];
            if r == usize::MAX || darts.len() > faces[r].len() {
                root_faces[ci] = f;
            }
        }
        // link components and orientation
        let mut lc = vec![usize::MAX; n];
        let mut incoming = vec![false; n];
        let mut nlc = 0;
        let mut consistent = true;
        for d0 in 0..n {
            if lc[d0] != usize::MAX {
                continue;
            }
            // collect entering darts along the strand through d0
            let trace = |start: usize| {
                let mut seq = Vec::new();
                let mut d = start;
                loop {
                    seq.push(d);
                    let out = 4 * (d / 4) + (d % 4 + 2) % 4;
                    d = partner[out];
                    if d == start {
                        break;
                    }
                }
                seq
            };
            let seq = trace(d0);
            let enters_under_fwd = seq.iter().any(|&d| d % 4 == 0);
            let enters_under_bwd = seq.iter().any(|&d| d % 4 == 2);
            let seq = if enters_under_fwd {
                if enters_under_bwd {
                    consistent = false;
                }
                seq
            } else if enters_under_bwd {
                trace(4 * (d0 / 4) + (d0 % 4 + 2) % 4)
            } else {
                seq
            };
            for &d in &seq {
                lc[d] = nlc;
                lc[4 * (d / 4) + (d % 4 + 2) % 4] = nlc;
                incoming[d] = true;
            }
            nlc += 1;
        }
        let _ = count;
        let mut arcs: Vec<ArcId> = ends.keys().copied().collect();
        arcs.extend(loops.iter().map(|l| l.label));
        arcs.sort_unstable();
        for l in loops {
            if let Some(f) = l.face {
                if f >= faces.len() {
                    return Err(Error::Invalid(format!("free loop {} placed in missing face {}", l.label, f + 1)));
                }
            }
        }
        Ok(Topology {
            arcs,
            partner,
            faces,
            face_of_dart,
            graph_component: comp,
            graph_components: ncomp,
            root_faces,
            genus,
            incoming,
            link_component_of_dart: lc,
            link_components: nlc + loops.len(),
            orientation_consistent: consistent,
        })
    }
}

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: Vec<FreeLoop>) -> Result<LinkDiagram> {
        let topo = Topology::build(&crossings, &free_loops)?;
        Ok(LinkDiagram { crossings, free_loops, topo })
    }

    pub fn unknot() -> LinkDiagram {
        LinkDiagram::new(vec![], vec![FreeLoop { label: 1, face: None }]).unwrap()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn free_loops(&self) -> &[FreeLoop] {
        &self.free_loops
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    /// Sorted labels of all arcs, free loops included.
    pub fn arc_labels(&self) -> &[ArcId] {
        &self.topo.arcs
    }

    pub fn dart_arc(&self, d: usize) -> ArcId {
        self.crossings[d / 4].slots[d % 4]
    }

    /// The other end of the arc leaving through dart `d`.
    pub fn partner(&self, d: usize) -> usize {
        self.topo.partner[d]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.topo.faces
    }

    /// Face lying to the left of dart `d` when leaving its crossing, i.e. the
    /// sector between slots `s` and `s + 1`.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.topo.face_of_dart[d]
    }

    pub fn graph_component(&self, crossing: usize) -> usize {
        self.topo.graph_component[crossing]
    }

    pub fn graph_components(&self) -> usize {
        self.topo.graph_components
    }

    /// Outer face of each connected piece of the crossing graph.
    pub fn root_faces(&self) -> &[usize] {
        &self.topo.root_faces
    }

    pub fn genus(&self) -> usize {
        self.topo.genus
    }

    pub fn is_spherical(&self) -> bool {
        self.topo.genus == 0
    }

    /// Whether the strand enters its crossing through dart `d`.
    pub fn is_incoming(&self, d: usize) -> bool {
        self.topo.incoming[d]
    }

    pub fn link_component_of_dart(&self, d: usize) -> usize {
        self.topo.link_component_of_dart[d]
    }

    pub fn link_components(&self) -> usize {
        self.topo.link_components
    }

    pub fn orientation_consistent(&self) -> bool {
        self.topo.orientation_consistent
    }

    /// Sign of crossing `c` under the orientation derived from the code.
    pub fn crossing_sign(&self, c: usize) -> i32 {
        if self.topo.incoming[4 * c + 3] {
            1
        } else {
            -1
        }
    }

    pub fn writhe(&self) -> i32 {
        (0..self.crossing_count()).map(|c| self.crossing_sign(c)).sum()
    }

    pub fn positive_crossings(&self) -> usize {
        (0..self.crossing_count()).filter(|&c| self.crossing_sign(c) > 0).count()
    }

    pub fn negative_crossings(&self) -> usize {
        self.crossing_count() - self.positive_crossings()
    }

    /// Total number of regions of the sphere cut out by the diagram.
    pub fn sphere_faces(&self) -> usize {
        let pieces = self.topo.graph_components + self.free_loops.len();
        let f = self.topo.faces.len() + 2 * self.free_loops.len();
        if pieces == 0 {
            1
        } else {
            f + 1 - pieces
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut warnings = Vec::new();
        if self.genus() > 0 {
            warnings.push(format!("rotation system has genus {}; not a spherical diagram", self.genus()));
        }
        if !self.orientation_consistent() {
            warnings.push("under-strand directions disagree along a component".into());
        }
        ValidationReport {
            crossings: self.crossing_count(),
            arcs: self.arc_count(),
            incidence_ok: true,
            bad_arcs: vec![],
            faces: Some(self.sphere_faces()),
            genus: Some(self.genus()),
            components: Some(self.link_components()),
            orientation_consistent: Some(self.orientation_consistent()),
            warnings,
        }
    }

    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self
            .crossings
            .iter()
            .enumerate()
            .map(|(c, x)| {
                let [a, b, cc, d] = x.slots;
                if self.topo.incoming[4 * c + 1] {
                    Crossing { slots: [b, cc, d, a] }
                } else {
                    Crossing { slots: [d, a, b, cc] }
                }
            })
            .collect();
        LinkDiagram::new(crossings, self.free_loops.clone()).expect("mirror preserves incidence")
    }

    /// Same diagram with the crossing order permuted: new position `i` holds old crossing `perm[i]`.
    pub fn reordered(&self, perm: &[usize]) -> LinkDiagram {
        let crossings = perm.iter().map(|&i| self.crossings[i].clone()).collect();
        LinkDiagram::new(crossings, self.free_loops.clone()).expect("reordering preserves incidence")
    }

    pub fn to_pd(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X[{},{},{},{}]", x.slots[0], x.slots[1], x.slots[2], x.slots[3]))
            .collect();
        for l in &self.free_loops {
            match l.face {
                Some(f) => parts.push(format!("O[{},{}]", l.label, f + 1)),
                None => parts.push(format!("O[{}]", l.label)),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let (crossings, loops) = parse_terms(text)?;
    if crossings.is_empty() && loops.is_empty() {
        return Err(syntax(0, "empty diagram"));
    }
    LinkDiagram::new(crossings, loops)
}

/// Validation that reports incidence failures instead of rejecting them.
pub fn validate_pd(text: &str) -> Result<ValidationReport> {
    let (crossings, loops) = parse_terms(text)?;
    let (count, bad) = incidence(&crossings, &loops);
    if bad.is_empty() {
        return Ok(LinkDiagram::new(crossings, loops)?.validate());
    }
    Ok(ValidationReport {
        crossings: crossings.len(),
        arcs: count.len(),
        incidence_ok: false,
        warnings: bad.iter().map(|a| format!("arc {a} used {} times", count.get(a).copied().unwrap_or(0))).collect(),
        bad_arcs: bad,
        faces: None,
        genus: None,
        components: None,
        orientation_consistent: None,
    })
}

/// Converts a signed Gauss code to a planar diagram code.
///
/// Components are separated by `;`, passes are signed crossing numbers
/// (positive over, negative under) and the crossing signs follow a `/`,
/// e.g. `"1 -2 3 -1 2 -3 / + + +"`.
pub fn parse_gauss(text: &str) -> Result<LinkDiagram> {
    let (code, signs) = text.split_once('/').ok_or_else(|| syntax(0, "expected '/' before crossing signs"))?;
    let signs: Vec<i32> = signs
        .split_whitespace()
        .map(|s| match s {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            _ => Err(syntax(code.len() + 1, format!("bad crossing sign '{s}'"))),
        })
        .collect::<Result<_>>()?;
    let comps: Vec<Vec<i64>> = code
        .split(';')
        .map(|c| c.split(|ch: char| ch.is_whitespace() || ch == ',').filter(|t| !t.is_empty()).map(|t| t.parse::<i64>().map_err(|_| syntax(0, format!("bad pass '{t}'")))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    gauss_to_pd(&comps, &signs)
}

pub fn gauss_to_pd(components: &[Vec<i64>], signs: &[i32]) -> Result<LinkDiagram> {
    let k = signs.len();
    let mut under: Vec<Option<(ArcId, ArcId)>> = vec![None; k];
    let mut over: Vec<Option<(ArcId, ArcId)>> = vec![None; k];
    let mut loops = Vec::new();
    let mut next = 1;
    for comp in components {
        if comp.is_empty() {
            continue;
        }
        let base = next;
        let n = comp.len() as ArcId;
        for (p, &pass) in comp.iter().enumerate() {
            let c = pass.unsigned_abs() as usize;
            if c == 0 || c > k {
                return Err(Error::Invalid(format!("crossing {c} has no sign")));
            }
            let a_in = base + p as ArcId;
            let a_out = base + (p as ArcId + 1) % n;
            let slot = if pass > 0 { &mut over[c - 1] } else { &mut under[c - 1] };
            if slot.replace((a_in, a_out)).is_some() {
                return Err(Error::Invalid(format!("crossing {c} passed twice on the same level")));
            }
        }
        next += n;
    }
    if components.iter().any(|c| c.is_empty()) {
        for _ in components.iter().filter(|c| c.is_empty()) {
            loops.push(FreeLoop { label: next, face: None });
            next += 1;
        }
    }
    let mut crossings = Vec::with_capacity(k);
    for c in 0..k {
        let (Some((ui, uo)), Some((oi, oo))) = (under[c], over[c]) else {
            return Err(Error::Invalid(format!("crossing {} lacks an over or under pass", c + 1)));
        };
        let slots = if signs[c] > 0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] };
        crossings.push(Crossing { slots });
    }
    LinkDiagram::new(crossings, loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn unknot_faces() {
        let d = parse_pd("O[1]").unwrap();
        let r = d.validate();
        assert_eq!((r.faces, r.genus, r.components), (Some(2), Some(0), Some(1)));
        assert_eq!(d.crossing_count(), 0);
    }

    #[test]
    fn trefoil_is_spherical() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.genus(), 0);
        assert_eq!(d.faces().len(), 5);
        assert_eq!(d.link_components(), 1);
        assert!(d.orientation_consistent());
        assert_eq!(d.writhe(), -3);
    }

    #[test]
    fn three_pairwise_clasps_are_not_planar() {
        // each pair of components crosses once, so no planar embedding exists
        let d = parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").unwrap();
        assert_eq!(d.link_components(), 3);
        assert_eq!(d.genus(), 1);
        assert!(!d.validate().warnings.is_empty());
    }

    #[test]
    fn curls() {
        let a = parse_pd("X[1,2,2,1]").unwrap();
        let b = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!((a.genus(), b.genus()), (0, 0));
        assert_eq!(a.faces().len(), 3);
        let m = a.mirror();
        assert_ne!(m, a);
        assert_eq!(m.mirror(), a);
        assert_eq!(a.crossing_sign(0), -m.crossing_sign(0));
    }

    #[test]
    fn incidence_failure() {
        let r = validate_pd("X[1,2,3,4] X[4,3,2,7]").unwrap();
        assert!(!r.incidence_ok);
        assert!(r.bad_arcs.contains(&7));
        assert!(matches!(parse_pd("X[1,2,3,4] X[4,3,2,7]"), Err(Error::Incidence { .. })));
    }

    #[test]
    fn syntax_position() {
        match parse_pd("X[1,2,2,1] Y[3]") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("{other:?}"),
        }
        assert!(parse_pd("X[1,2,2]").is_err());
    }

    #[test]
    fn roundtrip_and_mirror() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(parse_pd(&d.to_pd()).unwrap(), d);
        assert_eq!(d.mirror().mirror(), d);
        assert_eq!(d.mirror().writhe(), 3);
        let u = LinkDiagram::unknot();
        assert_eq!(u.mirror(), u);
    }

    #[test]
    fn gauss_trefoil() {
        let d = parse_gauss("1 -2 3 -1 2 -3 / + + +").unwrap();
        assert_eq!(d.genus(), 0);
        assert_eq!(d.writhe(), 3);
        let m = parse_gauss("1 -2 3 -1 2 -3 / - - -").unwrap();
        assert_eq!(m.writhe(), -3);
        assert_eq!(m.genus(), 0);
    }

    #[test]
    fn hopf_two_components() {
        let d = parse_pd("X[4,1,3,2] X[2,3,1,4]").unwrap();
        assert_eq!(d.link_components(), 2);
        assert_eq!(d.genus(), 0);
    }
}
