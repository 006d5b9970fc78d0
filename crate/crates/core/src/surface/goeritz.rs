//! Cycle bases of the ribbon graph and the combinatorial Goeritz form.
//!
//! Each circle is oriented with its inner side on the left and every cycle
//! crosses a facet along a chord that follows the rim counterclockwise from
//! the entry site to the exit site. Bands attached on the inner side of a
//! circle pass underneath its disk, so a chord running past such a site
//! crosses over every cycle using that band.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::StateSurface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Passage {
    pub band: usize,
    /// +1 runs from band end 0 to end 1.
    pub dir: i8,
}

impl Passage {
    fn depart_end(&self) -> usize {
        if self.dir > 0 {
            0
        } else {
            1
        }
    }
    fn arrive_end(&self) -> usize {
        1 - self.depart_end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub passages: Vec<Passage>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoeritzMatrix {
    pub entries: Vec<Vec<i64>>,
    pub basis: Vec<Cycle>,
}

impl GoeritzMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

/// Spanning-forest basis, trying bands in crossing order.
pub fn cycle_basis(f: &StateSurface) -> Vec<Cycle> {
    let order: Vec<usize> = (0..f.band_count()).collect();
    cycle_basis_with_order(f, &order)
}

pub fn random_cycle_basis<R: Rng>(f: &StateSurface, rng: &mut R) -> Vec<Cycle> {
    let mut order: Vec<usize> = (0..f.band_count()).collect();
    order.shuffle(rng);
    cycle_basis_with_order(f, &order)
}

/// Kruskal forest over bands in the given order; each rejected band closes one cycle.
pub fn cycle_basis_with_order(f: &StateSurface, order: &[usize]) -> Vec<Cycle> {
    let n = f.facet_count();
    let ends = |e: usize| (f.bands[e].ends[0].circle, f.bands[e].ends[1].circle);
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut extra = Vec::new();
    for &e in order {
        let (u, v) = ends(e);
        let (ru, rv) = (find(&mut uf, u), find(&mut uf, v));
        if ru == rv {
            extra.push(e);
        } else {
            uf[ru] = rv;
            tree_adj[u].push((v, e));
            tree_adj[v].push((u, e));
        }
    }
    // root every tree and record parent links
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    for r in 0..n {
        if depth[r] != usize::MAX {
            continue;
        }
        depth[r] = 0;
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            for &(y, e) in &tree_adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
    }
    let step = |x: usize| -> (usize, Passage) {
        let (p, e) = parent[x].unwrap();
        let dir = if f.bands[e].ends[0].circle == x { 1 } else { -1 };
        (p, Passage { band: e, dir })
    };
    extra
        .into_iter()
        .map(|e| {
            let (u, v) = ends(e);
            let mut passages = vec![Passage { band: e, dir: 1 }];
            // tree path from v back to u
            let (mut x, mut y) = (v, u);
            let mut up = Vec::new();
            let mut down = Vec::new();
            while depth[x] > depth[y] {
                let (p, s) = step(x);
                up.push(s);
                x = p;
            }
            while depth[y] > depth[x] {
                let (p, s) = step(y);
                down.push(s);
                y = p;
            }
            while x != y {
                let (px, sx) = step(x);
                let (py, sy) = step(y);
                up.push(sx);
                down.push(sy);
                x = px;
                y = py;
            }
            passages.extend(up);
            passages.extend(down.into_iter().rev().map(|p| Passage { band: p.band, dir: -p.dir }));
            Cycle { passages }
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
struct Event {
    passage: usize,
    enters: bool,
}

struct CycleData {
    /// (circle, entry site, exit site) per visit
    visits: Vec<(usize, usize, usize)>,
    /// events per (circle, site)
    events: Vec<Vec<Vec<Event>>>,
}

fn cycle_data(f: &StateSurface, c: &Cycle) -> CycleData {
    let circles = &f.smoothing.circles;
    let mut events: Vec<Vec<Vec<Event>>> = circles.iter().map(|c| vec![Vec::new(); c.sites.len()]).collect();
    let m = c.passages.len();
    let mut visits = Vec::with_capacity(m);
    for (j, p) in c.passages.iter().enumerate() {
        let band = &f.bands[p.band];
        let dep = band.ends[p.depart_end()];
        let arr = band.ends[p.arrive_end()];
        events[dep.circle][dep.index].push(Event { passage: j, enters: false });
        events[arr.circle][arr.index].push(Event { passage: j, enters: true });
        let next = &c.passages[(j + 1) % m];
        let out = f.bands[next.band].ends[next.depart_end()];
        assert_eq!(out.circle, arr.circle, "cycle is not closed");
        visits.push((arr.circle, arr.index, out.index));
    }
    CycleData { visits, events }
}

fn chord_over(f: &StateSurface, a: &CycleData, b: &CycleData) -> i64 {
    let mut total = 0;
    for &(circle, p, q) in &a.visits {
        let sites = &f.smoothing.circles[circle].sites;
        let n = sites.len();
        let mut s = (p + 1) % n;
        while s != q && s != p {
            if sites[s].inside {
                for ev in &b.events[circle][s] {
                    total += if ev.enters { -1 } else { 1 };
                }
            }
            s = (s + 1) % n;
        }
    }
    total
}

fn same_site(f: &StateSurface, a: &CycleData, b: &CycleData, identical: bool) -> i64 {
    let mut total = 0;
    for (ci, c) in f.smoothing.circles.iter().enumerate() {
        for (s, site) in c.sites.iter().enumerate() {
            if !site.inside {
                continue;
            }
            for ea in &a.events[ci][s] {
                for eb in &b.events[ci][s] {
                    if identical && ea.passage == eb.passage && ea.enters == eb.enters {
                        continue;
                    }
                    total += match (ea.enters, eb.enters) {
                        (true, true) => -1,
                        (false, false) => 1,
                        _ => 0,
                    };
                }
            }
        }
    }
    total
}

fn twist_term(f: &StateSurface, a: &Cycle, b: &Cycle) -> i64 {
    let mut total = 0;
    for band in &f.bands {
        let sa: i64 = a.passages.iter().filter(|p| p.band == band.crossing).map(|p| p.dir as i64).sum();
        let sb: i64 = b.passages.iter().filter(|p| p.band == band.crossing).map(|p| p.dir as i64).sum();
        total += band.twist() * sa * sb;
    }
    total
}

pub fn goeritz_matrix(f: &StateSurface, basis: &[Cycle]) -> GoeritzMatrix {
    let data: Vec<CycleData> = basis.iter().map(|c| cycle_data(f, c)).collect();
    let n = basis.len();
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = twist_term(f, &basis[i], &basis[j])
                + chord_over(f, &data[i], &data[j])
                + chord_over(f, &data[j], &data[i])
                + same_site(f, &data[i], &data[j], i == j);
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    GoeritzMatrix { entries, basis: basis.to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::states::{EnhancedState, MarkerVector};
    use crate::surface::{build_state_surface, signature};

    fn surface(pd: &str, m: &str) -> StateSurface {
        let d = parse_pd(pd).unwrap();
        build_state_surface(&d, &EnhancedState::new(MarkerVector::parse(m).unwrap(), 0)).unwrap()
    }

    #[test]
    fn moebius_entries() {
        let active = surface("X[1,2,2,1]", "+");
        let b = cycle_basis(&active);
        assert_eq!(b.len(), 1);
        assert_eq!(goeritz_matrix(&active, &b).entries, vec![vec![-1]]);
        let inactive = surface("X[2,2,1,1]", "-");
        let b = cycle_basis(&inactive);
        assert_eq!(goeritz_matrix(&inactive, &b).entries, vec![vec![1]]);
    }

    #[test]
    fn tree_gives_empty_matrix() {
        let f = surface("X[2,2,1,1]", "+");
        assert!(goeritz_matrix(&f, &cycle_basis(&f)).entries.is_empty());
    }

    #[test]
    fn basis_rank() {
        let f = surface("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "+-+");
        assert_eq!(cycle_basis(&f).len(), f.first_betti());
    }

    #[test]
    fn symmetric_and_tree_independent() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let d = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]").unwrap();
        for m in crate::states::enumerate_states(&d) {
            let f = build_state_surface(&d, &EnhancedState::new(m, 0)).unwrap();
            let g = goeritz_matrix(&f, &cycle_basis(&f));
            let s0 = signature(&g.entries);
            for _ in 0..3 {
                let g2 = goeritz_matrix(&f, &random_cycle_basis(&f, &mut rng));
                assert_eq!(signature(&g2.entries), s0);
            }
        }
    }
}
