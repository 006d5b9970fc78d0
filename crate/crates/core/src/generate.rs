//! Random spherical diagrams, grown as planar four-valent maps by vertex insertion.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Crossing, LinkDiagram};

/// Four-valent map: darts `4v + s` counterclockwise at vertex `v`, `alpha` pairs the ends of an edge.
#[derive(Clone, Debug)]
struct Map {
    alpha: Vec<usize>,
}

impl Map {
    fn kink() -> Map {
        Map { alpha: vec![3, 2, 1, 0] }
    }

    fn vertices(&self) -> usize {
        self.alpha.len() / 4
    }

    fn faces(&self) -> usize {
        let n = self.alpha.len();
        let mut seen = vec![false; n];
        let mut faces = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                let e = self.alpha[d];
                d = 4 * (e / 4) + (e % 4 + 3) % 4;
            }
        }
        faces
    }

    fn is_planar(&self) -> bool {
        self.faces() == self.vertices() + 2
    }

    fn link(&mut self, a: usize, b: usize) {
        self.alpha[a] = b;
        self.alpha[b] = a;
    }

    /// Adds a vertex cutting the edges at darts `p` and `q`, wired by `slots`.
    fn insert(&self, p: usize, q: usize, slots: [usize; 4]) -> Map {
        let mut m = self.clone();
        let v = 4 * self.vertices();
        m.alpha.extend([0; 4]);
        let (pa, qa) = (self.alpha[p], self.alpha[q]);
        if p == q || pa == q {
            m.link(p, v + slots[0]);
            m.link(pa, v + slots[1]);
            m.link(v + slots[2], v + slots[3]);
        } else {
            m.link(p, v + slots[0]);
            m.link(pa, v + slots[1]);
            m.link(q, v + slots[2]);
            m.link(qa, v + slots[3]);
        }
        m
    }
}

fn random_map<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Map {
    let mut m = Map::kink();
    let mut slots = [0, 1, 2, 3];
    while m.vertices() < k {
        let n = m.alpha.len();
        let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
        slots.shuffle(rng);
        let next = m.insert(p, q, slots);
        if next.is_planar() {
            m = next;
        }
    }
    m
}

/// One pass of each strand: `(entering dart, exiting dart)`, grouped by component.
fn strands(m: &Map) -> Vec<Vec<(usize, usize)>> {
    let n = m.alpha.len();
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if used[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut d = s;
        while !used[d] {
            let exit = 4 * (d / 4) + (d % 4 + 2) % 4;
            used[d] = true;
            used[exit] = true;
            comp.push((d, exit));
            d = m.alpha[exit];
        }
        out.push(comp);
    }
    out
}

/// Crossings from a map and, per vertex, whether the strand through slots 0 and 2 passes under.
fn to_diagram(m: &Map, under02: &[bool]) -> LinkDiagram {
    let comps = strands(m);
    let n = m.alpha.len();
    let mut label = vec![0u32; n];
    let mut incoming = vec![false; n];
    let mut next = 1u32;
    for comp in &comps {
        for &(enter, exit) in comp {
            incoming[enter] = true;
            label[exit] = next;
            label[m.alpha[exit]] = next;
            next += 1;
        }
    }
    let crossings = (0..m.vertices())
        .map(|v| {
            let r = (0..4).find(|&s| incoming[4 * v + s] && ((s % 2 == 0) == under02[v])).expect("every strand enters once");
            Crossing { slots: [0, 1, 2, 3].map(|j| label[4 * v + (r + j) % 4]) }
        })
        .collect();
    LinkDiagram::new(crossings, vec![]).expect("generated maps have valid incidence")
}

/// A random connected spherical diagram with `k >= 1` crossings.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, k: usize) -> LinkDiagram {
    assert!(k >= 1, "need at least one crossing");
    let m = random_map(rng, k);
    let under: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
    to_diagram(&m, &under)
}

/// A random connected spherical diagram in which every strand alternates over and under.
pub fn random_alternating<R: Rng + ?Sized>(rng: &mut R, k: usize) -> LinkDiagram {
    assert!(k >= 1, "need at least one crossing");
    let m = random_map(rng, k);
    let comps = strands(&m);
    // passes: (vertex, through slots 0/2); consecutive passes alternate
    let mut under: Vec<Option<bool>> = vec![None; k];
    let mut constraints: Vec<Vec<(usize, bool)>> = vec![Vec::new(); k];
    for comp in &comps {
        for w in 0..comp.len() {
            let (a, b) = (comp[w].0, comp[(w + 1) % comp.len()].0);
            let (va, vb) = (a / 4, b / 4);
            let same = (a % 2 == 0) == (b % 2 == 0);
            // pass a under <=> pass b over; expressed on the 0/2 flags of the two vertices
            constraints[va].push((vb, same));
            constraints[vb].push((va, same));
        }
    }
    for root in 0..k {
        if under[root].is_some() {
            continue;
        }
        under[root] = Some(rng.gen());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let uv = under[v].unwrap();
            for &(w, same) in &constraints[v] {
                let want = if same { !uv } else { uv };
                match under[w] {
                    None => {
                        under[w] = Some(want);
                        stack.push(w);
                    }
                    Some(x) => debug_assert_eq!(x, want, "planar maps admit an alternating choice"),
                }
            }
        }
    }
    let under: Vec<bool> = under.into_iter().map(Option::unwrap).collect();
    to_diagram(&m, &under)
}

/// Whether every strand of the diagram alternates over and under.
pub fn is_alternating(d: &LinkDiagram) -> bool {
    let k = d.crossing_count();
    (0..4 * k).all(|dart| {
        if !d.is_incoming(dart) {
            return true;
        }
        let under = dart % 2 == 0;
        let exit = 4 * (dart / 4) + (dart % 4 + 2) % 4;
        let nxt = d.partner(exit);
        nxt.is_multiple_of(2) != under
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_diagrams_are_spherical() {
        let mut rng = StdRng::seed_from_u64(7);
        for k in 1..=9 {
            for _ in 0..20 {
                let d = random_diagram(&mut rng, k);
                assert_eq!(d.crossing_count(), k);
                assert!(d.is_spherical());
                assert!(d.orientation_consistent());
                let a = random_alternating(&mut rng, k);
                assert!(a.is_spherical());
                assert!(is_alternating(&a), "{a}");
            }
        }
    }

    #[test]
    fn alternation_detection() {
        assert!(is_alternating(&crate::parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap()));
        let mut rng = StdRng::seed_from_u64(3);
        assert!((0..50).any(|_| !is_alternating(&random_diagram(&mut rng, 5))));
    }
}
