//! Kauffman states, complete smoothings and the Viro local rules.
//!
//! A positive marker is the A-smoothing: at crossing `X[a,b,c,d]` it joins
//! slots 0-1 and 2-3. A negative marker joins 0-3 and 1-2.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::diagram::{ArcId, LinkDiagram};
use crate::error::{Error, Result};

pub const MAX_CROSSINGS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkerVector {
    bits: u64,
    len: u8,
}

impl MarkerVector {
    pub fn from_bits(bits: u64, len: usize) -> MarkerVector {
        assert!(len <= MAX_CROSSINGS);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        MarkerVector { bits: bits & mask, len: len as u8 }
    }

    pub fn all_positive(len: usize) -> MarkerVector {
        MarkerVector::from_bits(u64::MAX, len)
    }

    pub fn all_negative(len: usize) -> MarkerVector {
        MarkerVector::from_bits(0, len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(&self, i: usize, positive: bool) -> MarkerVector {
        let bits = if positive { self.bits | 1 << i } else { self.bits & !(1 << i) };
        MarkerVector { bits, len: self.len }
    }

    pub fn positives(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    pub fn positives_before(&self, i: usize) -> usize {
        (self.bits & ((1u64 << i) - 1)).count_ones() as usize
    }

    pub fn negatives_before(&self, i: usize) -> usize {
        i - self.positives_before(i)
    }

    /// Exchanges the markers at positions `i` and `i + 1`.
    pub fn swapped(&self, i: usize) -> MarkerVector {
        let a = self.is_positive(i);
        let b = self.is_positive(i + 1);
        self.with(i, b).with(i + 1, a)
    }

    pub fn parse(text: &str) -> Result<MarkerVector> {
        let mut bits = 0;
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '+' => bits |= 1 << i,
                '-' => {}
                _ => return Err(Error::Syntax { pos: i, msg: format!("marker must be '+' or '-', found '{ch}'") }),
            }
        }
        if text.len() > MAX_CROSSINGS {
            return Err(Error::TooLarge(text.len()));
        }
        Ok(MarkerVector::from_bits(bits, text.len()))
    }
}

impl fmt::Display for MarkerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.is_positive(i) { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// All `2^k` marker vectors; vector `n` has bit `i` of `n` as the marker of crossing `i`.
pub fn enumerate_states(d: &LinkDiagram) -> Vec<MarkerVector> {
    let k = d.crossing_count();
    assert!(k <= MAX_CROSSINGS, "crossing count above limit");
    (0..1u64 << k).map(|n| MarkerVector::from_bits(n, k)).collect()
}

/// Smoothing partner of a dart inside its crossing.
pub fn smoothing_mate(d: usize, positive: bool) -> usize {
    let c = d / 4;
    let s = d % 4;
    let t = if positive { s ^ 1 } else { 3 - s };
    4 * c + t
}

/// Which end of the band a corner belongs to: 0 or 1.
fn end_tag(slot: usize, positive: bool) -> u8 {
    if positive {
        (slot / 2) as u8
    } else {
        u8::from(slot == 1 || slot == 2)
    }
}

/// A band attachment on a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Site {
    pub crossing: usize,
    pub end: u8,
    /// Whether the band lies on the inner side of the circle.
    pub inside: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SiteRef {
    pub circle: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circle {
    /// Sorted arc labels on the circle.
    pub arcs: Vec<ArcId>,
    /// Outgoing darts in traversal order, inner side on the left.
    pub darts: Vec<usize>,
    /// Band sites in traversal order; site `j` follows arc `darts[j]`.
    pub sites: Vec<Site>,
    pub depth: usize,
    pub parent: Option<usize>,
    pub free_loop: Option<usize>,
    pub inner_region: usize,
    pub outer_region: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteSmoothing {
    pub markers: MarkerVector,
    pub circles: Vec<Circle>,
    /// Sites of both band ends, indexed by crossing then end tag.
    pub band_ends: Vec<[SiteRef; 2]>,
    pub regions: usize,
    pub root_region: usize,
}

impl CompleteSmoothing {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Circle holding a given arc label.
    pub fn circle_of_arc(&self, arc: ArcId) -> Option<usize> {
        self.circles.iter().position(|c| c.arcs.binary_search(&arc).is_ok())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Channel face of crossing `c`: the face on the band's side of the smoothing.
pub fn channel_faces(d: &LinkDiagram, c: usize, positive: bool) -> (usize, usize) {
    if positive {
        (d.face_of_dart(4 * c + 1), d.face_of_dart(4 * c + 3))
    } else {
        (d.face_of_dart(4 * c), d.face_of_dart(4 * c + 2))
    }
}

pub fn resolve(d: &LinkDiagram, m: MarkerVector) -> CompleteSmoothing {
    let k = d.crossing_count();
    assert_eq!(m.len(), k, "marker vector length must equal crossing count");
    let nf = d.faces().len();
    let universe = nf;
    let nloops = d.free_loops().len();
    let mut uf = UnionFind::new(nf + 1 + nloops);
    for &f in d.root_faces() {
        uf.union(f, universe);
    }
    for c in 0..k {
        let (f1, f2) = channel_faces(d, c, m.is_positive(c));
        uf.union(f1, f2);
    }
    let mut region_id = vec![usize::MAX; nf + 1 + nloops];
    let mut nregions = 0;
    for x in 0..region_id.len() {
        let r = uf.find(x);
        if region_id[r] == usize::MAX {
            region_id[r] = nregions;
            nregions += 1;
        }
        region_id[x] = region_id[r];
    }
    let root = region_id[universe];
    let face_region = |f: usize| region_id[f];

    // trace circles: (dart sequence, left region, right region)
    let mut raw: Vec<(Vec<usize>, usize, usize, Option<usize>)> = Vec::new();
    let mut seen = vec![false; 4 * k];
    for d0 in 0..4 * k {
        if seen[d0] {
            continue;
        }
        let mut darts = Vec::new();
        let mut dd = d0;
        loop {
            seen[dd] = true;
            darts.push(dd);
            let e = d.partner(dd);
            seen[e] = true;
            dd = smoothing_mate(e, m.is_positive(e / 4));
            if dd == d0 {
                break;
            }
        }
        let left = face_region(d.face_of_dart(darts[0]));
        let right = face_region(d.face_of_dart(d.partner(darts[0])));
        raw.push((darts, left, right, None));
    }
    for (l, fl) in d.free_loops().iter().enumerate() {
        let outer = match fl.face {
            Some(f) => face_region(f),
            None => root,
        };
        raw.push((vec![], region_id[nf + 1 + l], outer, Some(l)));
    }

    // region tree: BFS from the root region across circles
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nregions];
    for (ci, (_, l, r, _)) in raw.iter().enumerate() {
        adj[*l].push((*r, ci));
        adj[*r].push((*l, ci));
    }
    let mut depth = vec![usize::MAX; nregions];
    let mut via: Vec<Option<usize>> = vec![None; nregions];
    let mut queue = std::collections::VecDeque::new();
    depth[root] = 0;
    queue.push_back(root);
    while let Some(r) = queue.pop_front() {
        for &(o, ci) in &adj[r] {
            if depth[o] == usize::MAX {
                depth[o] = depth[r] + 1;
                via[o] = Some(ci);
                queue.push_back(o);
            }
        }
    }

    let mut circles: Vec<Circle> = raw
        .into_iter()
        .map(|(darts, left, right, fl)| {
            let (inner, outer, darts) = if depth[left] > depth[right] {
                (left, right, darts)
            } else {
                let rev: Vec<usize> = darts.iter().rev().map(|&x| d.partner(x)).collect();
                (right, left, rev)
            };
            let mut arcs: Vec<ArcId> = match fl {
                Some(l) => vec![d.free_loops()[l].label],
                None => darts.iter().map(|&x| d.dart_arc(x)).collect(),
            };
            arcs.sort_unstable();
            arcs.dedup();
            let sites = darts
                .iter()
                .map(|&x| {
                    let e = d.partner(x);
                    let c = e / 4;
                    let pos = m.is_positive(c);
                    let (f1, _) = channel_faces(d, c, pos);
                    Site { crossing: c, end: end_tag(e % 4, pos), inside: face_region(f1) == inner }
                })
                .collect();
            Circle { arcs, darts, sites, depth: depth[outer], parent: None, free_loop: fl, inner_region: inner, outer_region: outer }
        })
        .collect();
    circles.sort_by_key(|c| c.arcs[0]);
    // parent circle: the one whose inner region is this circle's outer region
    let inner_owner: std::collections::HashMap<usize, usize> =
        circles.iter().enumerate().map(|(i, c)| (c.inner_region, i)).collect();
    for c in circles.iter_mut() {
        c.parent = if c.outer_region == root { None } else { inner_owner.get(&c.outer_region).copied() };
    }
    let _ = via;
    let mut band_ends = vec![[SiteRef { circle: 0, index: 0 }; 2]; k];
    for (ci, c) in circles.iter().enumerate() {
        for (j, s) in c.sites.iter().enumerate() {
            band_ends[s.crossing][s.end as usize] = SiteRef { circle: ci, index: j };
        }
    }
    CompleteSmoothing { markers: m, circles, band_ends, regions: nregions, root_region: root }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EnhancedState {
    pub markers: MarkerVector,
    /// Bit `j` set when circle `j` (canonical order) carries a plus sign.
    pub signs: u64,
}

impl Serialize for MarkerVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl EnhancedState {
    pub fn new(markers: MarkerVector, signs: u64) -> EnhancedState {
        EnhancedState { markers, signs }
    }

    pub fn is_plus(&self, circle: usize) -> bool {
        self.signs >> circle & 1 == 1
    }

    pub fn plus_count(&self) -> usize {
        self.signs.count_ones() as usize
    }

    pub fn to_json(&self, sm: &CompleteSmoothing) -> Value {
        let circles: Vec<Value> = sm
            .circles
            .iter()
            .enumerate()
            .map(|(j, c)| json!({"arcs": c.arcs, "sign": if self.is_plus(j) { "+" } else { "-" }}))
            .collect();
        json!({"markers": self.markers.to_string(), "circles": circles})
    }
}

/// Enhanced states of one marker vector, in sign-bit counter order.
pub fn enhancements(m: MarkerVector, circles: usize) -> impl Iterator<Item = EnhancedState> {
    assert!(circles < 64);
    (0..1u64 << circles).map(move |s| EnhancedState::new(m, s))
}

pub fn enumerate_enhanced(d: &LinkDiagram) -> Vec<EnhancedState> {
    enumerate_states(d)
        .into_iter()
        .flat_map(|m| {
            let n = resolve(d, m).circle_count();
            enhancements(m, n)
        })
        .collect()
}

/// How the circles of two adjacent smoothings correspond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCorrespondence {
    pub kind: EdgeKind,
    /// Pairs (source circle, target circle) of circles away from the crossing.
    pub untouched: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Merge { a: usize, b: usize, into: usize },
    Split { from: usize, a: usize, b: usize },
}

pub fn correspondence(d: &LinkDiagram, src: &CompleteSmoothing, tgt: &CompleteSmoothing, i: usize) -> Result<EdgeCorrespondence> {
    let slots = d.crossings()[i].slots;
    let s_at: BTreeSet<usize> = slots.iter().map(|&a| src.circle_of_arc(a).unwrap()).collect();
    let t_at: BTreeSet<usize> = slots.iter().map(|&a| tgt.circle_of_arc(a).unwrap()).collect();
    let kind = match (s_at.len(), t_at.len()) {
        (2, 1) => {
            let mut it = s_at.iter();
            EdgeKind::Merge { a: *it.next().unwrap(), b: *it.next().unwrap(), into: *t_at.iter().next().unwrap() }
        }
        (1, 2) => {
            let mut it = t_at.iter();
            EdgeKind::Split { from: *s_at.iter().next().unwrap(), a: *it.next().unwrap(), b: *it.next().unwrap() }
        }
        (a, b) => return Err(Error::Internal(format!("smoothing change at crossing {} maps {a} circles to {b}", i + 1))),
    };
    let untouched = tgt
        .circles
        .iter()
        .enumerate()
        .filter(|(t, _)| !t_at.contains(t))
        .map(|(t, c)| (src.circle_of_arc(c.arcs[0]).unwrap(), t))
        .collect();
    Ok(EdgeCorrespondence { kind, untouched })
}

/// Sign conventions for the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SignRule {
    /// `(-1)^(positive markers before i)`.
    Sigma,
    /// `(-1)^(negative markers before i)`.
    Alpha,
    /// Every edge +1. Only useful as a negative control.
    Trivial,
}

impl SignRule {
    pub fn sign(self, m: MarkerVector, i: usize) -> i64 {
        let n = match self {
            SignRule::Sigma => m.positives_before(i),
            SignRule::Alpha => m.negatives_before(i),
            SignRule::Trivial => 0,
        };
        if n % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn khovanov_sign(s: &EnhancedState, i: usize) -> Result<i64> {
    if !s.markers.is_positive(i) {
        return Err(Error::Precondition(format!("marker at crossing {} is negative", i + 1)));
    }
    Ok(SignRule::Sigma.sign(s.markers, i))
}

/// Unsigned Viro partial derivative at crossing `i` using precomputed smoothings.
pub fn viro_partial_with(d: &LinkDiagram, s: &EnhancedState, i: usize, src: &CompleteSmoothing, tgt: &CompleteSmoothing) -> Result<Vec<EnhancedState>> {
    if !s.markers.is_positive(i) {
        return Err(Error::Precondition(format!("marker at crossing {} is negative", i + 1)));
    }
    let corr = correspondence(d, src, tgt, i)?;
    let m = s.markers.with(i, false);
    let mut base = 0u64;
    for &(a, b) in &corr.untouched {
        if s.is_plus(a) {
            base |= 1 << b;
        }
    }
    let out = match corr.kind {
        EdgeKind::Merge { a, b, into } => match (s.is_plus(a), s.is_plus(b)) {
            (false, false) => vec![base],
            (true, true) => vec![],
            _ => vec![base | 1 << into],
        },
        EdgeKind::Split { from, a, b } => {
            if s.is_plus(from) {
                vec![base | 1 << a | 1 << b]
            } else {
                vec![base | 1 << a, base | 1 << b]
            }
        }
    };
    Ok(out.into_iter().map(|sg| EnhancedState::new(m, sg)).collect())
}

pub fn viro_partial(d: &LinkDiagram, s: &EnhancedState, i: usize) -> Result<Vec<EnhancedState>> {
    let src = resolve(d, s.markers);
    let tgt = resolve(d, s.markers.with(i, false));
    viro_partial_with(d, s, i, &src, &tgt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn trefoil() -> LinkDiagram {
        parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap()
    }

    #[test]
    fn marker_counts() {
        let m = MarkerVector::parse("++-").unwrap();
        assert_eq!(m.positives_before(2), 2);
        assert_eq!(m.negatives_before(2), 0);
        assert_eq!(m.to_string(), "++-");
        assert_eq!(m.swapped(1).to_string(), "+-+");
    }

    #[test]
    fn unknot_one_circle() {
        let d = LinkDiagram::unknot();
        let sm = resolve(&d, MarkerVector::all_positive(0));
        assert_eq!(sm.circle_count(), 1);
        assert_eq!(enumerate_states(&d).len(), 1);
    }

    #[test]
    fn curl_circle_counts() {
        let d = parse_pd("X[1,2,2,1]").unwrap();
        let plus = resolve(&d, MarkerVector::all_positive(1)).circle_count();
        let minus = resolve(&d, MarkerVector::all_negative(1)).circle_count();
        assert_eq!((plus, minus), (1, 2));
        let m = d.mirror();
        let plus = resolve(&m, MarkerVector::all_positive(1)).circle_count();
        let minus = resolve(&m, MarkerVector::all_negative(1)).circle_count();
        assert_eq!((plus, minus), (2, 1));
        assert_eq!(enumerate_enhanced(&d).len() + enumerate_enhanced(&m).len(), 12);
    }

    #[test]
    fn trefoil_constant_states() {
        let d = trefoil();
        let a = resolve(&d, MarkerVector::all_positive(3)).circle_count();
        let b = resolve(&d, MarkerVector::all_negative(3)).circle_count();
        let pair: BTreeSet<usize> = [a, b].into_iter().collect();
        assert_eq!(pair, [2, 3].into_iter().collect());
        assert_eq!(enumerate_states(&d).len(), 8);
    }

    #[test]
    fn sites_cover_bands() {
        let d = trefoil();
        for m in enumerate_states(&d) {
            let sm = resolve(&d, m);
            let total: usize = sm.circles.iter().map(|c| c.sites.len()).sum();
            assert_eq!(total, 2 * d.crossing_count());
            for (c, ends) in sm.band_ends.iter().enumerate() {
                for (t, r) in ends.iter().enumerate() {
                    let s = sm.circles[r.circle].sites[r.index];
                    assert_eq!((s.crossing, s.end as usize), (c, t));
                }
            }
        }
    }

    #[test]
    fn khovanov_sign_examples() {
        let all = EnhancedState::new(MarkerVector::all_positive(3), 0);
        assert_eq!(khovanov_sign(&all, 0).unwrap(), 1);
        assert_eq!(khovanov_sign(&all, 2).unwrap(), 1);
        let s = EnhancedState::new(MarkerVector::parse("++-").unwrap(), 0);
        assert_eq!(khovanov_sign(&s, 1).unwrap(), -1);
        assert!(khovanov_sign(&s, 2).is_err());
    }

    #[test]
    fn viro_cases() {
        // merge of the two circles of the positive kink's A-state
        let d = parse_pd("X[1,2,2,1]").unwrap().mirror();
        let m = MarkerVector::all_positive(1);
        let both_plus = EnhancedState::new(m, 0b11);
        assert!(viro_partial(&d, &both_plus, 0).unwrap().is_empty());
        let both_minus = EnhancedState::new(m, 0);
        assert_eq!(viro_partial(&d, &both_minus, 0).unwrap(), vec![EnhancedState::new(MarkerVector::all_negative(1), 0)]);
        let mixed = EnhancedState::new(m, 0b01);
        assert_eq!(viro_partial(&d, &mixed, 0).unwrap(), vec![EnhancedState::new(MarkerVector::all_negative(1), 1)]);
        // splits on the negative kink
        let d = parse_pd("X[1,2,2,1]").unwrap();
        let plus = EnhancedState::new(MarkerVector::all_positive(1), 1);
        assert_eq!(viro_partial(&d, &plus, 0).unwrap(), vec![EnhancedState::new(MarkerVector::all_negative(1), 0b11)]);
        let minus = EnhancedState::new(MarkerVector::all_positive(1), 0);
        assert_eq!(viro_partial(&d, &minus, 0).unwrap().len(), 2);
    }
}
