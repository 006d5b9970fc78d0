//! Geometric oracle: a concrete embedding of a state surface in space and
//! exact linking numbers of polygonal curves drawn on it.
//!
//! The diagram is drawn with a Tutte layout of the second barycentric
//! subdivision of its crossing graph. Circles run along the drawn arcs and
//! cut each crossing disk at a corner. Disks are caps rising from their rims
//! into the upper half-space; each band is two bilinear patches meeting at a
//! vertical segment above the crossing point, carrying the under strand at
//! its bottom and the over strand at its top. Curves are quantized to an
//! integer lattice before crossings are counted, so every sign is exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;

use super::goeritz::Cycle;
use super::StateSurface;
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};

pub type P2 = [f64; 2];
pub type P3 = [f64; 3];

/// Lattice scale: coordinates are stored as integers over `2^LATTICE_BITS`.
pub const LATTICE_BITS: u32 = 52;

fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}
fn add2(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}
fn scale2(a: P2, s: f64) -> P2 {
    [a[0] * s, a[1] * s]
}
fn norm2(a: P2) -> f64 {
    a[0].hypot(a[1])
}
fn unit2(a: P2) -> P2 {
    scale2(a, 1.0 / norm2(a))
}
fn cross2(a: P2, b: P2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}
fn dot2(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}
fn lerp2(a: P2, b: P2, t: f64) -> P2 {
    add2(a, scale2(sub2(b, a), t))
}
fn lift(a: P2, z: f64) -> P3 {
    [a[0], a[1], z]
}
fn sub3(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn add3(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
fn scale3(a: P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}
fn dot3(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn cross3(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
fn unit3(a: P3) -> P3 {
    scale3(a, 1.0 / dot3(a, a).sqrt())
}
fn lerp3(a: P3, b: P3, t: f64) -> P3 {
    add3(a, scale3(sub3(b, a), t))
}

fn point_segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let ab = sub2(b, a);
    let t = (dot2(sub2(p, a), ab) / dot2(ab, ab)).clamp(0.0, 1.0);
    norm2(sub2(p, lerp2(a, b, t)))
}

fn segments_distance(a: P2, b: P2, c: P2, d: P2) -> f64 {
    let o1 = cross2(sub2(b, a), sub2(c, a));
    let o2 = cross2(sub2(b, a), sub2(d, a));
    let o3 = cross2(sub2(d, c), sub2(a, c));
    let o4 = cross2(sub2(d, c), sub2(b, c));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn signed_area(poly: &[P2]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| cross2(poly[i], poly[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Planar drawing of a diagram.
#[derive(Clone, Debug)]
pub struct Layout {
    pub crossing: Vec<P2>,
    /// Subdivision point on the drawn half-edge of each dart.
    pub mid: Vec<P2>,
    /// Drawn midpoint of the arc through each dart.
    pub arc_point: Vec<P2>,
    /// Where each dart meets the boundary of its crossing disk.
    pub end: Vec<P2>,
    /// Diagonal intersection of each crossing quad, the foot of the band twist.
    pub center: Vec<P2>,
    pub eta: Vec<f64>,
    pub face_point: Vec<P2>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum EdgeId {
    Dart(usize),
    Side(usize),
    Corner(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Vx {
    Crossing(usize),
    Arc(usize),
    Face(usize),
    Mid(EdgeId),
    Bary(usize, bool),
}

fn arc_key(d: &LinkDiagram, dart: usize) -> usize {
    dart.min(d.partner(dart))
}

pub fn layout(d: &LinkDiagram) -> Result<Layout> {
    if !d.is_spherical() {
        return Err(Error::NotSpherical(d.genus()));
    }
    let k = d.crossing_count();
    let nd = 4 * k;
    let mut crossing = vec![[0.0; 2]; k];
    let mut mid = vec![[0.0; 2]; nd];
    let mut arc_point = vec![[0.0; 2]; nd];
    let mut face_point = vec![[0.0; 2]; d.faces().len()];
    let mut stars: Vec<Vec<(P2, P2)>> = vec![Vec::new(); k];
    // split components side by side, the whole drawing scaled into the unit box
    let shrink = 1.0 / (1.5 * d.graph_components().saturating_sub(1) as f64 + 1.0);
    for comp in 0..d.graph_components() {
        let offset = [1.5 * comp as f64, 0.0];
        let darts: Vec<usize> = (0..nd).filter(|&x| d.graph_component(x / 4) == comp).collect();
        let mut index: HashMap<Vx, usize> = HashMap::new();
        let id = |v: Vx, index: &mut HashMap<Vx, usize>| -> usize {
            let n = index.len();
            *index.entry(v).or_insert(n)
        };
        let mut tris: Vec<[usize; 3]> = Vec::new();
        for &x in &darts {
            let c = x / 4;
            let s = x % 4;
            let e = Vx::Arc(arc_key(d, x));
            let f = Vx::Face(d.face_of_dart(x));
            let prev = 4 * c + (s + 3) % 4;
            let fr = Vx::Face(d.face_of_dart(prev));
            let first = [
                ([Vx::Crossing(c), e, f], [EdgeId::Dart(x), EdgeId::Side(x), EdgeId::Corner(x)], true),
                ([Vx::Crossing(c), fr, e], [EdgeId::Corner(prev), EdgeId::Side(d.partner(x)), EdgeId::Dart(x)], false),
            ];
            for (verts, edges, left) in first {
                let v: Vec<usize> = verts.iter().map(|&v| id(v, &mut index)).collect();
                let m: Vec<usize> = edges.iter().map(|&e| id(Vx::Mid(e), &mut index)).collect();
                let g = id(Vx::Bary(x, left), &mut index);
                tris.push([v[0], m[0], g]);
                tris.push([m[0], v[1], g]);
                tris.push([v[1], m[1], g]);
                tris.push([m[1], v[2], g]);
                tris.push([v[2], m[2], g]);
                tris.push([m[2], v[0], g]);
            }
        }
        let n = index.len();
        let root = d.root_faces()[comp];
        let root_v = index[&Vx::Face(root)];
        // the link of the root face centre, pinned to a circle; the centre itself is dropped
        let mut next: HashMap<usize, usize> = HashMap::new();
        for t in &tris {
            if let Some(p) = t.iter().position(|&v| v == root_v) {
                next.insert(t[(p + 1) % 3], t[(p + 2) % 3]);
            }
        }
        let first = *next.keys().min().expect("root face has a boundary");
        let mut ring = vec![first];
        while let Some(&v) = next.get(ring.last().unwrap()) {
            if v == first {
                break;
            }
            ring.push(v);
        }
        let mut pos = circle_pack(&tris, n, root_v, &ring)?;
        for t in &tris {
            if t.contains(&root_v) {
                continue;
            }
            let area = cross2(sub2(pos[t[1]], pos[t[0]]), sub2(pos[t[2]], pos[t[0]]));
            if area <= 0.0 {
                return Err(Error::Internal("Tutte layout produced a flipped triangle".into()));
            }
        }
        for p in pos.iter_mut() {
            *p = scale2(add2(*p, offset), shrink);
        }
        for (v, &i) in &index {
            match *v {
                Vx::Crossing(c) => crossing[c] = pos[i],
                Vx::Face(f) => face_point[f] = pos[i],
                Vx::Mid(EdgeId::Dart(x)) => mid[x] = pos[i],
                Vx::Arc(a) => {
                    arc_point[a] = pos[i];
                    arc_point[d.partner(a)] = pos[i];
                }
                _ => {}
            }
        }
        for t in &tris {
            for (i, &v) in t.iter().enumerate() {
                if let Some((Vx::Crossing(c), _)) = index.iter().find(|(_, &j)| j == v).map(|(k, j)| (*k, *j)) {
                    stars[c].push((pos[t[(i + 1) % 3]], pos[t[(i + 2) % 3]]));
                }
            }
        }
    }
    let mut end = vec![[0.0; 2]; nd];
    let mut center = vec![[0.0; 2]; k];
    let mut eta = vec![0.0; k];
    for c in 0..k {
        let x = crossing[c];
        let link = stars[c].iter().map(|&(a, b)| point_segment_distance(x, a, b)).fold(f64::INFINITY, f64::min);
        let rho = 0.5 * link;
        for s in 0..4 {
            end[4 * c + s] = add2(x, scale2(unit2(sub2(mid[4 * c + s], x)), rho));
        }
        let e = &end[4 * c..4 * c + 4];
        // diagonals e0-e2 and e1-e3
        let r = sub2(e[2], e[0]);
        let q = sub2(e[3], e[1]);
        let den = cross2(r, q);
        let t = cross2(sub2(e[1], e[0]), q) / den;
        let u = cross2(sub2(e[1], e[0]), r) / den;
        if !(0.0 < t && t < 1.0 && 0.0 < u && u < 1.0) {
            return Err(Error::Internal(format!("crossing quad {} is not convex", c + 1)));
        }
        let xp = lerp2(e[0], e[2], t);
        center[c] = xp;
        eta[c] = 0.25 * (0..4).map(|s| point_segment_distance(xp, e[s], e[(s + 1) % 4])).fold(f64::INFINITY, f64::min);
    }
    Ok(Layout { crossing, mid, arc_point, end, center, eta, face_point })
}

/// Tutte drawing with the `fixed` vertices pinned: every free vertex at the
/// average of its neighbours.
/// Angle at a circle of radius `a` between tangent circles of radii `b` and `c`.
fn petal_angle(a: f64, b: f64, c: f64) -> f64 {
    let (ab, ac, bc) = (a + b, a + c, b + c);
    ((ab * ab + ac * ac - bc * bc) / (2.0 * ab * ac)).clamp(-1.0, 1.0).acos()
}

/// Centres of a circle packing of the triangulated disc left after removing `root`.
/// Interior angle sums are `2pi`; each `ring` vertex gets `pi - 2pi/len`, so the boundary is convex.
/// Neighbouring radii differ by a factor bounded by the degree, so nested regions keep a usable size.
fn circle_pack(tris: &[[usize; 3]], n: usize, root: usize, ring: &[usize]) -> Result<Vec<P2>> {
    use std::f64::consts::{PI, TAU};
    let tris: Vec<[usize; 3]> = tris.iter().filter(|t| !t.contains(&root)).copied().collect();
    let mut petals: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for t in &tris {
        for i in 0..3 {
            petals[t[i]].push((t[(i + 1) % 3], t[(i + 2) % 3]));
        }
    }
    let mut target = vec![TAU; n];
    for &v in ring {
        target[v] = PI - TAU / ring.len() as f64;
    }
    let verts: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let mut r = vec![1.0f64; n];
    let mut converged = false;
    for _ in 0..200_000 {
        let mut worst = 0.0f64;
        for &v in &verts {
            let k = petals[v].len() as f64;
            let theta: f64 = petals[v].iter().map(|&(b, c)| petal_angle(r[v], r[b], r[c])).sum();
            worst = worst.max((theta - target[v]).abs());
            let beta = (theta / (2.0 * k)).sin();
            let delta = (target[v] / (2.0 * k)).sin();
            r[v] *= beta / (1.0 - beta) * (1.0 - delta) / delta;
        }
        let top = verts.iter().map(|&v| r[v]).fold(0.0, f64::max);
        for x in r.iter_mut() {
            *x /= top;
        }
        if worst < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Internal("circle packing did not converge".into()));
    }
    let mut pos: Vec<Option<P2>> = vec![None; n];
    let [a, b, _] = tris[0];
    pos[a] = Some([0.0, 0.0]);
    pos[b] = Some([r[a] + r[b], 0.0]);
    let mut progress = true;
    while progress {
        progress = false;
        for t in &tris {
            for i in 0..3 {
                let (p, q, s) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
                if let (Some(pp), Some(pq), None) = (pos[p], pos[q], pos[s]) {
                    let dir = sub2(pq, pp);
                    let ang = dir[1].atan2(dir[0]) + petal_angle(r[p], r[q], r[s]);
                    pos[s] = Some(add2(pp, scale2([ang.cos(), ang.sin()], r[p] + r[s])));
                    progress = true;
                }
            }
        }
    }
    let mut pos: Vec<P2> = pos.into_iter().enumerate().map(|(v, p)| p.unwrap_or(if v == root { [0.0; 2] } else { [f64::NAN; 2] })).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for &v in &verts {
        for j in 0..2 {
            lo[j] = lo[j].min(pos[v][j]);
            hi[j] = hi[j].max(pos[v][j]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    for &v in &verts {
        if pos[v][0].is_nan() {
            return Err(Error::Internal("circle packing left a vertex unplaced".into()));
        }
        pos[v] = scale2(sub2(pos[v], lo), 1.0 / span);
    }
    pos[root] = [0.5, 1.25];
    Ok(pos)
}

/// A state surface drawn on a layout.
pub struct SurfaceGeometry<'a> {
    d: &'a LinkDiagram,
    lay: &'a Layout,
    f: &'a StateSurface,
    polygons: Vec<Vec<P2>>,
    normals: Vec<Vec<P2>>,
    o_max: f64,
}

fn rung(lay: &Layout, c: usize, positive: bool, end: usize) -> (P2, P2) {
    let e = &lay.end[4 * c..4 * c + 4];
    match (positive, end) {
        (true, 0) => (e[0], e[1]),
        (true, _) => (e[2], e[3]),
        (false, 0) => (e[0], e[3]),
        (false, _) => (e[2], e[1]),
    }
}

impl<'a> SurfaceGeometry<'a> {
    pub fn new(d: &'a LinkDiagram, lay: &'a Layout, f: &'a StateSurface) -> Result<SurfaceGeometry<'a>> {
        let mut polygons = Vec::new();
        let mut normals = Vec::new();
        for c in &f.smoothing.circles {
            let mut poly = Vec::new();
            for &x in &c.darts {
                let y = d.partner(x);
                poly.extend([lay.end[x], lay.mid[x], lay.arc_point[x], lay.mid[y], lay.end[y]]);
            }
            if !poly.is_empty() && signed_area(&poly) <= 0.0 {
                return Err(Error::Internal("circle drawn with its inner side on the right".into()));
            }
            let n = poly.len();
            let nr: Vec<P2> = (0..n)
                .map(|i| {
                    let t = unit2(sub2(poly[(i + 1) % n], poly[i]));
                    [-t[1], t[0]]
                })
                .collect();
            polygons.push(poly);
            normals.push(nr);
        }
        // offset scale: small against edge lengths, corner sharpness and gaps
        let mut o = f64::INFINITY;
        let segs: Vec<(usize, usize, P2, P2)> = polygons
            .iter()
            .enumerate()
            .flat_map(|(ci, p)| (0..p.len()).map(move |i| (ci, i, p[i], p[(i + 1) % p.len()])))
            .collect();
        for (ci, p) in polygons.iter().enumerate() {
            let n = p.len();
            for i in 0..n {
                let l0 = norm2(sub2(p[i], p[(i + n - 1) % n]));
                let l1 = norm2(sub2(p[(i + 1) % n], p[i]));
                let c = ((1.0 + dot2(normals[ci][(i + n - 1) % n], normals[ci][i])) / 2.0).max(0.0).sqrt();
                o = o.min(l0.min(l1) * c);
            }
        }
        for (i, a) in segs.iter().enumerate() {
            for b in &segs[i + 1..] {
                if a.0 == b.0 {
                    let n = polygons[a.0].len();
                    if (a.1 + 1) % n == b.1 || (b.1 + 1) % n == a.1 {
                        continue;
                    }
                }
                o = o.min(segments_distance(a.2, a.3, b.2, b.3));
            }
        }
        for c in 0..d.crossing_count() {
            o = o.min(lay.eta[c]);
        }
        if !(o.is_finite() && o > 0.0) {
            o = 1.0;
        }
        Ok(SurfaceGeometry { d, lay, f, polygons, normals, o_max: 0.05 * o })
    }

    fn miter(&self, circle: usize, i: usize, off: f64) -> P2 {
        let p = &self.polygons[circle];
        let nr = &self.normals[circle];
        let n = p.len();
        let (a, b) = (nr[(i + n - 1) % n], nr[i % n]);
        add2(p[i % n], scale2(add2(a, b), off / (1.0 + dot2(a, b))))
    }

    fn strip_normal(&self, circle: usize, edge: usize) -> P3 {
        let n = self.normals[circle][edge];
        unit3([-n[0], -n[1], 1.0])
    }

    fn band_point(&self, c: usize, piece: usize, u: f64, v: f64) -> (P3, P3) {
        let pos = self.f.markers().is_positive(c);
        let (r0, r1) = rung(self.lay, c, pos, 0);
        let (c0, c1) = rung(self.lay, c, pos, 1);
        let eta = self.lay.eta[c];
        let b = lift(self.lay.center[c], eta * (2.0 * v - 1.0));
        let db = [0.0, 0.0, 2.0 * eta];
        if piece == 0 {
            let a = lift(lerp2(r0, r1, v), 0.0);
            let da = lift(sub2(r1, r0), 0.0);
            let p = lerp3(a, b, u);
            let du = sub3(b, a);
            let dv = lerp3(da, db, u);
            (p, unit3(cross3(du, dv)))
        } else {
            let cc = lift(lerp2(c0, c1, v), 0.0);
            let dc = lift(sub2(c1, c0), 0.0);
            let p = lerp3(b, cc, u);
            let du = sub3(cc, b);
            let dv = lerp3(db, dc, u);
            (p, unit3(cross3(du, dv)))
        }
    }

    /// Polygon edge index of the rung of site `index` on a circle.
    fn rung_edge(&self, index: usize) -> usize {
        5 * index + 4
    }

    fn rim_point(&self, c: usize, end: usize, v: f64) -> P2 {
        let (a, b) = rung(self.lay, c, self.f.markers().is_positive(c), end);
        lerp2(a, b, v)
    }

    fn cycle_runs(&self, cyc: &Cycle, v: f64, off: f64) -> Vec<Run> {
        const U: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
        let mut runs = Vec::new();
        let m = cyc.passages.len();
        for (j, p) in cyc.passages.iter().enumerate() {
            let c = p.band;
            let band = &self.f.bands[c];
            let pieces: [(usize, bool); 2] = if p.dir > 0 { [(0, true), (1, true)] } else { [(1, false), (0, false)] };
            for (idx, &(piece, forward)) in pieces.iter().enumerate() {
                let pts: Vec<(P3, P3)> = U
                    .iter()
                    .map(|&u| self.band_point(c, piece, if forward { u } else { 1.0 - u }, v))
                    .collect();
                let next = if idx == 0 {
                    Transition::Fold([0.0, 0.0, 1.0])
                } else {
                    let (r0, r1) = rung(self.lay, c, band.active, p.arrive());
                    Transition::Fold(lift(sub2(r1, r0), 0.0))
                };
                runs.push(Run { points: pts.iter().map(|x| x.0).collect(), normals: pts.iter().map(|x| x.1).collect(), next });
            }
            // the facet visit after arriving
            let arr = band.ends[p.arrive()];
            let nxt = &cyc.passages[(j + 1) % m];
            let dep = self.f.bands[nxt.band].ends[nxt.depart()];
            let circle = arr.circle;
            let n = self.polygons[circle].len();
            let ep = self.rung_edge(arr.index);
            let eq = self.rung_edge(dep.index);
            let r_in = self.rim_point(c, p.arrive(), v);
            let r_out = self.rim_point(nxt.band, nxt.depart(), v);
            let l_in = add2(r_in, scale2(self.normals[circle][ep], off));
            let l_out = add2(r_out, scale2(self.normals[circle][eq], off));
            let mut edge = ep;
            let mut pts = vec![lift(r_in, 0.0), lift(l_in, off)];
            loop {
                let nx = (edge + 1) % n;
                let mp = lift(self.miter(circle, nx, off), off);
                pts.push(mp);
                runs.push(Run { points: pts.clone(), normals: vec![self.strip_normal(circle, edge); pts.len()], next: Transition::Smooth });
                pts = vec![mp];
                edge = nx;
                if edge == eq {
                    break;
                }
            }
            pts.push(lift(l_out, off));
            pts.push(lift(r_out, 0.0));
            let (r0, r1) = rung(self.lay, nxt.band, self.f.bands[nxt.band].active, nxt.depart());
            runs.push(Run { points: pts.clone(), normals: vec![self.strip_normal(circle, edge); pts.len()], next: Transition::Fold(lift(sub2(r1, r0), 0.0)) });
        }
        runs
    }

    /// A basis cycle on the surface and its double pushoff.
    pub fn cycle_curves(&self, cyc: &Cycle, slot: usize, slots: usize) -> (Vec<P3>, Vec<Vec<P3>>) {
        let v = (slot + 1) as f64 / (slots + 1) as f64;
        let off = self.o_max * (slot + 1) as f64 / (slots + 1) as f64;
        let eps = self.o_max / (slots + 1) as f64 / 8.0;
        let runs = self.cycle_runs(cyc, v, off);
        walk(&runs, eps)
    }

    /// The oriented boundary link and its parallel copy inside the surface,
    /// following the facet collars at offset `off` and the bands near their edges.
    pub fn boundary_curves(&self) -> (Vec<Vec<P3>>, Vec<Vec<P3>>) {
        const U: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
        let d = self.d;
        let lay = self.lay;
        let off = self.o_max / 2.0;
        let delta = 0.25;
        let mut place: HashMap<usize, (usize, usize)> = HashMap::new();
        for (ci, c) in self.f.smoothing.circles.iter().enumerate() {
            for (j, &x) in c.darts.iter().enumerate() {
                place.insert(x, (ci, j));
            }
        }
        // band end and edge level of the boundary where it passes dart `x` of a crossing
        let pass = |x: usize| -> (usize, f64) {
            let s = x % 4;
            let pos = self.f.markers().is_positive(x / 4);
            let end = if s == 0 || (pos && s == 1) || (!pos && s == 3) { 0 } else { 1 };
            (end, if s.is_multiple_of(2) { 0.0 } else { 1.0 })
        };
        let inner = |v: f64| if v < 0.5 { delta } else { 1.0 - delta };
        let mut link = Vec::new();
        let mut par = Vec::new();
        let nd = 4 * d.crossing_count();
        let mut used = vec![false; nd];
        for start in 0..nd {
            if used[start] || d.is_incoming(start) {
                continue;
            }
            let mut pts: Vec<P3> = Vec::new();
            let mut inn: Vec<P3> = Vec::new();
            let mut x = start;
            loop {
                used[x] = true;
                let y = d.partner(x);
                for p in [lay.mid[x], lay.arc_point[x], lay.mid[y]] {
                    pts.push(lift(p, 0.0));
                }
                // collar of the facet owning the arc, from the rung at x to the rung at y
                let (ci, verts, e_in, e_out) = match place.get(&x) {
                    Some(&(ci, j)) => {
                        let n = self.polygons[ci].len();
                        (ci, (0..5).map(|t| 5 * j + t).collect::<Vec<_>>(), (5 * j + n - 1) % n, 5 * j + 4)
                    }
                    None => {
                        let (ci, j) = place[&y];
                        let n = self.polygons[ci].len();
                        (ci, (0..5).rev().map(|t| 5 * j + t).collect::<Vec<_>>(), 5 * j + 4, (5 * j + n - 1) % n)
                    }
                };
                let (ex, vx) = pass(x);
                let (ey, vy) = pass(y);
                let r_in = self.rim_point(x / 4, ex, inner(vx));
                let r_out = self.rim_point(y / 4, ey, inner(vy));
                inn.push(lift(add2(r_in, scale2(self.normals[ci][e_in], off)), off));
                for &i in &verts {
                    inn.push(lift(self.miter(ci, i, off), off));
                }
                inn.push(lift(add2(r_out, scale2(self.normals[ci][e_out], off)), off));
                // through the crossing at y along one band edge
                let c = y / 4;
                let s = y % 4;
                let (first, vv) = pass(y);
                let second = 1 - first;
                for (v, curve) in [(vv, &mut pts), (inner(vv), &mut inn)] {
                    for &u in &U[..4] {
                        curve.push(self.band_point(c, first, if first == 0 { u } else { 1.0 - u }, v).0);
                    }
                    for &u in &U {
                        curve.push(self.band_point(c, second, if second == 0 { 1.0 - u } else { u }, v).0);
                    }
                }
                x = 4 * c + (s + 2) % 4;
                if x == start {
                    break;
                }
            }
            link.push(pts);
            par.push(inn);
        }
        (link, par)
    }
}

impl super::goeritz::Passage {
    fn depart(&self) -> usize {
        if self.dir > 0 {
            0
        } else {
            1
        }
    }
    fn arrive(&self) -> usize {
        1 - self.depart()
    }
}

#[derive(Clone, Copy, Debug)]
enum Transition {
    /// Hinge along direction `w` between two surface pieces.
    Fold(P3),
    /// Continuation across a crease of the cap; normals stay on the same side.
    Smooth,
}

struct Run {
    points: Vec<P3>,
    normals: Vec<P3>,
    next: Transition,
}

/// Walks a curve carrying a surface normal; returns the curve and its double pushoff.
fn walk(runs: &[Run], eps: f64) -> (Vec<P3>, Vec<Vec<P3>>) {
    let r = runs.len();
    let mut sign = 1.0;
    let mut nodes: Vec<(P3, P3)> = Vec::new();
    for i in 0..r {
        let run = &runs[i];
        let nxt = &runs[(i + 1) % r];
        let len = run.points.len();
        for t in 1..len - 1 {
            nodes.push((run.points[t], scale3(run.normals[t], sign)));
        }
        let h = run.points[len - 1];
        let n1 = scale3(run.normals[len - 1], sign);
        let n2 = nxt.normals[0];
        let s2 = match run.next {
            Transition::Smooth => sign * dot3(run.normals[len - 1], n2).signum(),
            Transition::Fold(w) => {
                let t1 = sub3(run.points[len - 2], h);
                let t2 = sub3(nxt.points[1], h);
                let lam = dot3(n1, cross3(t1, w)).signum();
                let want = scale3(cross3(t2, w), -lam);
                dot3(want, n2).signum()
            }
        };
        nodes.push((h, unit3(add3(n1, scale3(n2, s2)))));
        sign = s2;
    }
    let curve: Vec<P3> = nodes.iter().map(|n| n.0).collect();
    let plus: Vec<P3> = nodes.iter().map(|(p, n)| add3(*p, scale3(*n, eps))).collect();
    let minus: Vec<P3> = nodes.iter().map(|(p, n)| add3(*p, scale3(*n, -eps))).collect();
    if sign < 0.0 {
        let mut once = plus;
        once.extend(minus);
        (curve, vec![once])
    } else {
        (curve, vec![plus, minus])
    }
}

/// Closed polylines with exact lattice coordinates over `2^LATTICE_BITS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedCurves {
    pub cycles: Vec<Vec<[i64; 3]>>,
    pub pushoffs: Vec<Vec<Vec<[i64; 3]>>>,
}

pub fn quantize(curve: &[P3]) -> Vec<[i64; 3]> {
    let s = (1u64 << LATTICE_BITS) as f64;
    let mut out: Vec<[i64; 3]> = curve.iter().map(|p| [(p[0] * s).round() as i64, (p[1] * s).round() as i64, (p[2] * s).round() as i64]).collect();
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

pub fn embed(d: &LinkDiagram, f: &StateSurface, basis: &[Cycle]) -> Result<EmbeddedCurves> {
    embed_on(d, &layout(d)?, f, basis)
}

/// As [`embed`], reusing a layout of `d`.
pub fn embed_on(d: &LinkDiagram, lay: &Layout, f: &StateSurface, basis: &[Cycle]) -> Result<EmbeddedCurves> {
    let geo = SurfaceGeometry::new(d, lay, f)?;
    let n = basis.len();
    let mut cycles = Vec::new();
    let mut pushoffs = Vec::new();
    for (i, c) in basis.iter().enumerate() {
        let (curve, push) = geo.cycle_curves(c, i, n);
        cycles.push(quantize(&curve));
        pushoffs.push(push.iter().map(|p| quantize(p)).collect());
    }
    Ok(EmbeddedCurves { cycles, pushoffs })
}

/// Projection directions tried in turn until one is generic.
const DIRECTIONS: [[i64; 3]; 8] = [[1, 2, 29], [3, -1, 31], [-2, 3, 37], [5, 1, 41], [-1, -4, 43], [2, -5, 47], [7, 3, 53], [-3, 7, 59]];

#[derive(Debug)]
struct Degenerate;

fn project(p: [i64; 3], dir: [i64; 3]) -> ([i128; 2], i128) {
    let [x, y, z] = p.map(|v| v as i128);
    let [a, b, c] = dir.map(|v| v as i128);
    ([c * x - a * z, c * y - b * z], a * x + b * y + c * z)
}

fn orient(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> i128 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn lk_projected(a: &[[i64; 3]], b: &[[i64; 3]], dir: [i64; 3]) -> std::result::Result<i64, Degenerate> {
    let pa: Vec<([i128; 2], i128)> = a.iter().map(|&p| project(p, dir)).collect();
    let pb: Vec<([i128; 2], i128)> = b.iter().map(|&p| project(p, dir)).collect();
    let mut total = 0;
    for i in 0..pa.len() {
        let (a0, da0) = pa[i];
        let (a1, da1) = pa[(i + 1) % pa.len()];
        for j in 0..pb.len() {
            let (c0, dc0) = pb[j];
            let (c1, dc1) = pb[(j + 1) % pb.len()];
            if a0[0].max(a1[0]) < c0[0].min(c1[0])
                || c0[0].max(c1[0]) < a0[0].min(a1[0])
                || a0[1].max(a1[1]) < c0[1].min(c1[1])
                || c0[1].max(c1[1]) < a0[1].min(a1[1])
            {
                continue;
            }
            let o1 = orient(a0, a1, c0);
            let o2 = orient(a0, a1, c1);
            let o3 = orient(c0, c1, a0);
            let o4 = orient(c0, c1, a1);
            if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
                return Err(Degenerate);
            }
            if (o1 > 0) == (o2 > 0) || (o3 > 0) == (o4 > 0) {
                continue;
            }
            // depths at the crossing as fractions over (o3 - o4) and (o1 - o2)
            let big = BigInt::from;
            let na = big(o3) * big(da1) - big(o4) * big(da0);
            let qa = big(o3) - big(o4);
            let nc = big(o1) * big(dc1) - big(o2) * big(dc0);
            let qc = big(o1) - big(o2);
            let diff = &na * &qc - &nc * &qa;
            let s = diff.signum() * (qa * qc).signum();
            if s.is_zero_sign() {
                return Err(Degenerate);
            }
            if s.is_positive() {
                let da = [a1[0] - a0[0], a1[1] - a0[1]];
                let dc = [c1[0] - c0[0], c1[1] - c0[1]];
                let cr = da[0] * dc[1] - da[1] * dc[0];
                total += if cr > 0 { 1 } else { -1 };
            }
        }
    }
    Ok(total)
}

trait ZeroSign {
    fn is_zero_sign(&self) -> bool;
}

impl ZeroSign for BigInt {
    fn is_zero_sign(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Linking number of two disjoint closed lattice polylines: the signed count
/// of crossings where `a` passes over `b` in a generic projection.
pub fn linking_number(a: &[[i64; 3]], b: &[[i64; 3]]) -> Result<i64> {
    for dir in DIRECTIONS {
        if let Ok(v) = lk_projected(a, b, dir) {
            return Ok(v);
        }
    }
    Err(Error::Internal("no generic projection direction found".into()))
}

/// Linking numbers under every generic direction; used to confirm direction independence.
pub fn linking_numbers_all_directions(a: &[[i64; 3]], b: &[[i64; 3]]) -> Vec<i64> {
    DIRECTIONS.iter().filter_map(|&dir| lk_projected(a, b, dir).ok()).collect()
}

/// Oracle Goeritz matrix: entry `(i, j)` is `lk(a_i, tau a_j)`.
pub fn oracle_goeritz(d: &LinkDiagram, f: &StateSurface, basis: &[Cycle]) -> Result<Vec<Vec<i64>>> {
    oracle_goeritz_on(d, &layout(d)?, f, basis)
}

/// As [`oracle_goeritz`], reusing a layout of `d`.
pub fn oracle_goeritz_on(d: &LinkDiagram, lay: &Layout, f: &StateSurface, basis: &[Cycle]) -> Result<Vec<Vec<i64>>> {
    let curves = embed_on(d, lay, f, basis)?;
    let n = basis.len();
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = 0;
            for p in &curves.pushoffs[j] {
                v += linking_number(&curves.cycles[i], p)?;
            }
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// Framing of the boundary link induced by the surface: `lk(L, L')` for a
/// parallel copy `L'` of `L` lying in the surface.
pub fn boundary_slope(d: &LinkDiagram, f: &StateSurface) -> Result<i64> {
    if d.crossing_count() == 0 {
        return Ok(0);
    }
    boundary_slope_on(d, &layout(d)?, f)
}

/// As [`boundary_slope`], reusing a layout of `d`.
pub fn boundary_slope_on(d: &LinkDiagram, lay: &Layout, f: &StateSurface) -> Result<i64> {
    if d.crossing_count() == 0 {
        return Ok(0);
    }
    let geo = SurfaceGeometry::new(d, lay, f)?;
    let (link, push) = geo.boundary_curves();
    let link: Vec<Vec<[i64; 3]>> = link.iter().map(|c| quantize(c)).collect();
    let push: Vec<Vec<[i64; 3]>> = push.iter().map(|c| quantize(c)).collect();
    let mut total = 0;
    for a in &link {
        for b in &push {
            total += linking_number(a, b)?;
        }
    }
    Ok(total)
}

/// Wavefront OBJ polylines for external viewers.
pub fn to_obj(curves: &[Vec<[i64; 3]>]) -> String {
    let s = (1u64 << LATTICE_BITS) as f64;
    let mut out = String::new();
    let mut base = 1;
    for c in curves {
        for p in c {
            out.push_str(&format!("v {} {} {}\n", p[0] as f64 / s, p[1] as f64 / s, p[2] as f64 / s));
        }
        let idx: Vec<String> = (0..c.len()).map(|i| (base + i).to_string()).chain(std::iter::once(base.to_string())).collect();
        out.push_str(&format!("l {}\n", idx.join(" ")));
        base += c.len();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(points: &[[f64; 3]]) -> Vec<[i64; 3]> {
        quantize(points)
    }

    fn square(cx: f64, cy: f64, z: f64, r: f64) -> Vec<[f64; 3]> {
        vec![[cx - r, cy - r, z], [cx + r, cy - r, z], [cx + r, cy + r, z], [cx - r, cy + r, z]]
    }

    #[test]
    fn split_squares() {
        let a = q(&square(0.0, 0.0, 0.0, 1.0));
        let b = q(&square(0.2, 0.1, 1.0, 1.0));
        assert_eq!(linking_number(&a, &b).unwrap(), 0);
    }

    #[test]
    fn hopf_rectangles() {
        // a horizontal square and a vertical rectangle threading it
        let a = q(&square(0.0, 0.0, 0.0, 1.0));
        let b = q(&[[0.5, 0.1, -1.0], [0.5, 0.1, 1.0], [3.0, 0.1, 1.0], [3.0, 0.1, -1.0]]);
        let l = linking_number(&a, &b).unwrap();
        assert_eq!(l.abs(), 1);
        assert_eq!(linking_number(&b, &a).unwrap(), l);
        let rev: Vec<[i64; 3]> = b.iter().rev().copied().collect();
        assert_eq!(linking_number(&a, &rev).unwrap(), -l);
        assert!(linking_numbers_all_directions(&a, &b).iter().all(|&x| x == l));
    }

    #[test]
    fn obj_lines() {
        let a = q(&square(0.0, 0.0, 0.0, 1.0));
        let s = to_obj(&[a]);
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert!(s.contains("l 1 2 3 4 1"));
    }

    const SMALL: [&str; 9] = [
        "X[1,2,2,1]",
        "X[2,2,1,1]",
        "X[1,3,3,2] X[2,4,4,1]",
        "X[1,3,3,2] X[4,2,1,4]",
        "X[1,2,3,3] X[4,4,1,2]",
        "X[4,1,3,2] X[2,3,1,4]",
        "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
        "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
        "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2] X[7,8,8,7]",
    ];

    #[test]
    fn oracle_matches_combinatorial_form() {
        use crate::diagram::parse_pd;
        use crate::states::{enumerate_states, EnhancedState};
        use crate::surface::{build_state_surface, cycle_basis, goeritz_matrix};
        for pd in SMALL {
            let d = parse_pd(pd).unwrap();
            for m in enumerate_states(&d) {
                let f = build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap();
                let basis = cycle_basis(&f);
                let g = goeritz_matrix(&f, &basis).entries;
                let o = oracle_goeritz(&d, &f, &basis).unwrap();
                assert_eq!(o, g, "{pd} {m}");
            }
        }
    }

    #[test]
    fn oracle_is_direction_independent() {
        use crate::diagram::parse_pd;
        use crate::states::{enumerate_states, EnhancedState};
        use crate::surface::{build_state_surface, cycle_basis};
        let mut nonzero_off_diagonal = 0;
        for pd in SMALL {
            let d = parse_pd(pd).unwrap();
            for m in enumerate_states(&d) {
                let f = build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap();
                let basis = cycle_basis(&f);
                let c = embed(&d, &f, &basis).unwrap();
                for i in 0..basis.len() {
                    for j in 0..basis.len() {
                        let per: Vec<Vec<i64>> = c.pushoffs[j].iter().map(|p| linking_numbers_all_directions(&c.cycles[i], p)).collect();
                        let sums: Vec<i64> = (0..per[0].len()).map(|k| per.iter().map(|v| v[k]).sum()).collect();
                        assert!(sums.len() >= 4, "{pd} {m}: too few generic directions");
                        assert!(sums.iter().all(|&x| x == sums[0]), "{pd} {m}: {sums:?}");
                        if i != j && sums[0] != 0 {
                            nonzero_off_diagonal += 1;
                        }
                    }
                }
            }
        }
        assert!(nonzero_off_diagonal > 0);
    }

    #[test]
    fn slope_tracks_signature() {
        use crate::diagram::parse_pd;
        use crate::states::{enumerate_states, EnhancedState};
        use crate::surface::{build_state_surface, MarkerData};
        // link signature recovered as sig(G) - slope/2 on every state
        let expected = [0, 0, 0, 0, 0, 1, 2, 0, -2];
        for (pd, want) in SMALL.iter().zip(expected) {
            let d = parse_pd(pd).unwrap();
            let states = enumerate_states(&d);
            let slopes: Vec<i64> = states
                .iter()
                .map(|&m| boundary_slope(&d, &build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap()).unwrap())
                .collect();
            for (n, &m) in states.iter().enumerate() {
                let sig = MarkerData::new(&d, m).signature;
                assert_eq!(2 * sig - slopes[n], 2 * want, "{pd} {m}");
                for i in 0..d.crossing_count() {
                    if n >> i & 1 == 1 {
                        assert_eq!(slopes[n], slopes[n & !(1 << i)] - 2, "{pd} {m}");
                    }
                }
            }
        }
        let curl = parse_pd("X[1,2,2,1]").unwrap();
        let disk = build_state_surface(&curl, &EnhancedState::new(crate::states::MarkerVector::all_negative(1), 0)).unwrap();
        assert_eq!(boundary_slope(&curl, &disk).unwrap(), 0);
    }
}
