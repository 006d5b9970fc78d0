//! State surfaces: one disk per smoothing circle and one half-twisted band
//! per crossing, with their Goeritz form and the four gradings.

pub mod checkerboard;
pub mod embed;
pub mod goeritz;
pub mod signature;

use serde::Serialize;
use serde_json::{json, Value};

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::states::{resolve, CompleteSmoothing, EnhancedState, MarkerVector, SiteRef};

pub use goeritz::{cycle_basis, cycle_basis_with_order, goeritz_matrix, random_cycle_basis, Cycle, GoeritzMatrix, Passage};
pub use signature::signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub crossing: usize,
    pub active: bool,
    pub ends: [SiteRef; 2],
}

impl Band {
    /// Half-twist weight: -1 for an active band, +1 otherwise.
    pub fn twist(&self) -> i64 {
        if self.active {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateSurface {
    pub smoothing: CompleteSmoothing,
    pub bands: Vec<Band>,
    /// Dot flag per facet; facet `j` bounds circle `j`.
    pub dotted: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gradings {
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub b: i64,
}

impl Gradings {
    pub fn new(i: i64, j: i64, k: i64, b: i64) -> Gradings {
        Gradings { i, j, k, b }
    }
}

impl std::fmt::Display for Gradings {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.i, self.j, self.k, self.b)
    }
}

impl StateSurface {
    pub fn from_smoothing(smoothing: CompleteSmoothing, signs: u64) -> StateSurface {
        let m = smoothing.markers;
        let bands = (0..m.len())
            .map(|c| Band { crossing: c, active: m.is_positive(c), ends: smoothing.band_ends[c] })
            .collect();
        let dotted = (0..smoothing.circles.len()).map(|j| signs >> j & 1 == 1).collect();
        StateSurface { smoothing, bands, dotted }
    }

    pub fn markers(&self) -> MarkerVector {
        self.smoothing.markers
    }

    pub fn facet_count(&self) -> usize {
        self.smoothing.circles.len()
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn active_count(&self) -> usize {
        self.bands.iter().filter(|b| b.active).count()
    }

    pub fn dots(&self) -> usize {
        self.dotted.iter().filter(|&&d| d).count()
    }

    /// Connected pieces of the ribbon graph (facets joined by bands).
    pub fn component_count(&self) -> usize {
        let n = self.facet_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut comps = n;
        for b in &self.bands {
            let (x, y) = (find(&mut parent, b.ends[0].circle), find(&mut parent, b.ends[1].circle));
            if x != y {
                parent[x] = y;
                comps -= 1;
            }
        }
        comps
    }

    pub fn first_betti(&self) -> usize {
        self.band_count() + self.component_count() - self.facet_count()
    }

    pub fn to_json(&self) -> Value {
        let facets: Vec<Value> = self
            .smoothing
            .circles
            .iter()
            .zip(&self.dotted)
            .map(|(c, &dot)| {
                let sites: Vec<Value> = c
                    .sites
                    .iter()
                    .map(|s| json!({"band": s.crossing + 1, "end": s.end, "inside": s.inside}))
                    .collect();
                json!({"arcs": c.arcs, "dotted": dot, "depth": c.depth, "parent": c.parent, "attachments": sites})
            })
            .collect();
        let bands: Vec<Value> = self
            .bands
            .iter()
            .map(|b| json!({"crosscut": b.crossing + 1, "active": b.active, "facets": [b.ends[0].circle, b.ends[1].circle]}))
            .collect();
        json!({"markers": self.markers().to_string(), "facets": facets, "bands": bands, "dots": self.dots()})
    }
}

pub fn require_spherical(d: &LinkDiagram) -> Result<()> {
    if d.is_spherical() {
        Ok(())
    } else {
        Err(Error::NotSpherical(d.genus()))
    }
}

pub fn build_state_surface(d: &LinkDiagram, s: &EnhancedState) -> Result<StateSurface> {
    require_spherical(d)?;
    if s.markers.len() != d.crossing_count() {
        return Err(Error::Precondition("marker vector length differs from crossing count".into()));
    }
    let sm = resolve(d, s.markers);
    if sm.circles.len() < 64 && s.signs >> sm.circles.len() != 0 {
        return Err(Error::Precondition("circle signs exceed circle count".into()));
    }
    Ok(StateSurface::from_smoothing(sm, s.signs))
}

pub fn euler_characteristic(f: &StateSurface) -> i64 {
    f.facet_count() as i64 - f.band_count() as i64
}

/// Grading data shared by every enhancement of one marker vector.
#[derive(Clone, Debug)]
pub struct MarkerData {
    pub surface: StateSurface,
    pub signature: i64,
}

impl MarkerData {
    pub fn new(d: &LinkDiagram, m: MarkerVector) -> MarkerData {
        let surface = StateSurface::from_smoothing(resolve(d, m), 0);
        let basis = cycle_basis(&surface);
        let signature = signature::signature(&goeritz_matrix(&surface, &basis).entries);
        MarkerData { surface, signature }
    }

    pub fn circles(&self) -> usize {
        self.surface.facet_count()
    }

    pub fn gradings(&self, signs: u64) -> Gradings {
        let chi = euler_characteristic(&self.surface);
        let i = self.signature;
        let delta = signs.count_ones() as i64;
        Gradings::new(i, -chi - i + 2 * delta, self.surface.band_count() as i64, i + self.surface.active_count() as i64)
    }
}

pub fn gradings(f: &StateSurface) -> Gradings {
    let basis = cycle_basis(f);
    let i = signature::signature(&goeritz_matrix(f, &basis).entries);
    let chi = euler_characteristic(f);
    Gradings::new(i, -chi - i + 2 * f.dots() as i64, f.band_count() as i64, i + f.active_count() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn g(i: i64, j: i64, k: i64, b: i64) -> Gradings {
        Gradings::new(i, j, k, b)
    }

    #[test]
    fn unknot_disk() {
        let d = LinkDiagram::unknot();
        let m = MarkerVector::all_positive(0);
        let f = build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap();
        assert_eq!(euler_characteristic(&f), 1);
        assert_eq!(gradings(&f), g(0, -1, 0, 0));
        let f = build_state_surface(&d, &EnhancedState::new(m, 1)).unwrap();
        assert_eq!(gradings(&f), g(0, 1, 0, 0));
    }

    #[test]
    fn curl_census() {
        let neg = parse_pd("X[1,2,2,1]").unwrap();
        let pos = neg.mirror();
        let plus = MarkerVector::all_positive(1);
        let minus = MarkerVector::all_negative(1);
        let gr = |d: &LinkDiagram, m, s| gradings(&build_state_surface(d, &EnhancedState::new(m, s)).unwrap());
        assert_eq!(gr(&neg, plus, 0), g(-1, 1, 1, 0));
        assert_eq!(gr(&neg, plus, 1), g(-1, 3, 1, 0));
        assert_eq!(gr(&pos, plus, 0), g(0, -1, 1, 1));
        assert_eq!(gr(&pos, minus, 0), g(1, -1, 1, 1));
        assert_eq!(gr(&pos, minus, 1), g(1, 1, 1, 1));
        assert_eq!(gr(&neg, minus, 0b11), g(0, 3, 1, 0));
    }

    #[test]
    fn euler_counts() {
        let d = parse_pd("X[1,2,2,1]").unwrap().mirror();
        let f = build_state_surface(&d, &EnhancedState::new(MarkerVector::all_positive(1), 0)).unwrap();
        assert_eq!((f.facet_count(), f.band_count(), euler_characteristic(&f)), (2, 1, 1));
        assert!(cycle_basis(&f).is_empty());
        let d = parse_pd("X[1,3,3,2] X[2,4,4,1]").unwrap();
        let f = build_state_surface(&d, &EnhancedState::new(MarkerVector::all_positive(2), 0)).unwrap();
        assert_eq!((f.facet_count(), euler_characteristic(&f)), (1, -1));
        assert_eq!(cycle_basis(&f).len(), 2);
    }

    #[test]
    fn signature_rises_along_edges() {
        for pd in [
            "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
            "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
            "X[4,1,3,2] X[2,3,1,4]",
            "X[1,3,3,2] X[4,2,1,4]",
            "X[1,2,3,3] X[4,4,1,2]",
        ] {
            let d = parse_pd(pd).unwrap();
            let data: Vec<MarkerData> = crate::states::enumerate_states(&d).into_iter().map(|m| MarkerData::new(&d, m)).collect();
            let b0 = data[0].gradings(0).b;
            for (n, md) in data.iter().enumerate() {
                assert_eq!(md.gradings(0).b, b0, "{pd}");
                for i in 0..d.crossing_count() {
                    if n >> i & 1 == 1 {
                        assert_eq!(data[n & !(1 << i)].signature, md.signature + 1, "{pd} state {n} crossing {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn refuses_non_spherical() {
        let d = parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]").unwrap();
        let s = EnhancedState::new(MarkerVector::all_positive(3), 0);
        assert!(matches!(build_state_surface(&d, &s), Err(Error::NotSpherical(1))));
    }
}
