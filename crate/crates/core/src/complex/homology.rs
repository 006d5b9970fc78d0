//! Integer homology of a graded complex, column by column.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::snf::{invariant_factors, rank_mod_p, rank_rational, IntMatrix};
use super::{add_term, check_grading_shift, ChainComplex, GradingScheme, Laurent};
use crate::error::{Error, Result};
use crate::surface::Gradings;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> HomologyGroup {
        HomologyGroup { rank, torsion: Vec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
    /// Direct sum; torsion kept as a sorted multiset of cyclic orders.
    pub fn sum(&self, o: &HomologyGroup) -> HomologyGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(&o.torsion);
        torsion.sort_unstable();
        HomologyGroup { rank: self.rank + o.rank, torsion }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub groups: BTreeMap<Gradings, HomologyGroup>,
}

impl Homology {
    pub fn get(&self, g: Gradings) -> HomologyGroup {
        self.groups.get(&g).cloned().unwrap_or_default()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    pub fn insert_sum(&mut self, key: Gradings, g: &HomologyGroup) {
        if g.is_zero() {
            return;
        }
        let cur = self.groups.remove(&key).unwrap_or_default();
        self.groups.insert(key, cur.sum(g));
    }

    /// Regrades by `f`, summing groups that land on the same key.
    pub fn project(&self, f: impl Fn(Gradings) -> Gradings) -> Homology {
        let mut out = Homology::default();
        for (k, g) in &self.groups {
            out.insert_sum(f(*k), g);
        }
        out
    }

    pub fn direct_sum(&self, o: &Homology) -> Homology {
        let mut out = self.clone();
        for (k, g) in &o.groups {
            out.insert_sum(*k, g);
        }
        out
    }

    /// `Σ (-1)^i q^j rank`.
    pub fn euler(&self) -> Laurent {
        let mut p = Laurent::new();
        for (k, g) in &self.groups {
            add_term(&mut p, k.j, if k.i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) });
        }
        p
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.groups
                .iter()
                .map(|(k, g)| json!({"gradings": {"i": k.i, "j": k.j, "k": k.k, "b": k.b}, "rank": g.rank, "torsion": g.torsion}))
                .collect(),
        )
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:>4} {:>4} {:>4} {:>4} {:>5}  {}\n", "i", "j", "k", "b", "rank", "torsion");
        for (k, g) in &self.groups {
            let t: Vec<String> = g.torsion.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{:>4} {:>4} {:>4} {:>4} {:>5}  {}\n", k.i, k.j, k.k, k.b, g.rank, if t.is_empty() { "-".into() } else { t.join(",") }));
        }
        out
    }
}

/// Generators binned by grading: `(j, k, b)` column, then `i`, then basis order.
type Columns = BTreeMap<(i64, i64, i64), BTreeMap<i64, Vec<usize>>>;

fn columns(c: &ChainComplex, scheme: GradingScheme, shuffle: Option<u64>) -> Columns {
    let mut cols: Columns = BTreeMap::new();
    for g in 0..c.len() {
        let k = c.key(g, scheme);
        cols.entry((k.j, k.k, k.b)).or_default().entry(k.i).or_default().push(g);
    }
    if let Some(seed) = shuffle {
        let mut rng = StdRng::seed_from_u64(seed);
        for col in cols.values_mut() {
            for v in col.values_mut() {
                v.shuffle(&mut rng);
            }
        }
    }
    cols
}

fn matrix(c: &ChainComplex, from: &[usize], to: &[usize]) -> IntMatrix {
    let pos: BTreeMap<usize, usize> = to.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut m = vec![vec![BigInt::zero(); from.len()]; to.len()];
    for (j, &g) in from.iter().enumerate() {
        for &(t, v) in &c.differential[g] {
            m[pos[&t]][j] += v;
        }
    }
    m
}

/// Runs `f` on every differential block; result keyed by `(column, i)` of the source.
fn per_block<T: Send>(c: &ChainComplex, cols: &Columns, f: impl Fn(&IntMatrix) -> T + Sync) -> BTreeMap<((i64, i64, i64), i64), T> {
    let blocks: Vec<((i64, i64, i64), i64)> = cols.iter().flat_map(|(ck, col)| col.keys().map(move |&i| (*ck, i))).collect();
    blocks
        .into_par_iter()
        .map(|(ck, i)| {
            let col = &cols[&ck];
            let empty = Vec::new();
            let to = col.get(&(i + 1)).unwrap_or(&empty);
            ((ck, i), f(&matrix(c, &col[&i], to)))
        })
        .collect()
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.try_into().map_err(|_| Error::Internal(format!("torsion coefficient {x} exceeds 64 bits")))
}

fn integral(c: &ChainComplex, scheme: GradingScheme, shuffle: Option<u64>) -> Result<Homology> {
    check_grading_shift(c, scheme)?;
    let cols = columns(c, scheme, shuffle);
    let factors = per_block(c, &cols, invariant_factors);
    let mut out = Homology::default();
    for (ck, col) in &cols {
        for (&i, gens) in col {
            let out_rank = factors[&(*ck, i)].len();
            let incoming = factors.get(&(*ck, i - 1));
            let in_rank = incoming.map_or(0, |f| f.len());
            let mut torsion = Vec::new();
            if let Some(f) = incoming {
                for x in f {
                    let a = num_traits::Signed::abs(x);
                    if !a.is_one() {
                        torsion.push(to_u64(&a)?);
                    }
                }
            }
            let g = HomologyGroup { rank: gens.len() - out_rank - in_rank, torsion };
            out.insert_sum(Gradings::new(i, ck.0, ck.1, ck.2), &g);
        }
    }
    Ok(out)
}

/// Integer homology per grading tuple, zero groups omitted.
pub fn homology(c: &ChainComplex, scheme: GradingScheme) -> Result<Homology> {
    integral(c, scheme, None)
}

/// Same computation with the basis order inside every bin shuffled.
pub fn homology_shuffled(c: &ChainComplex, scheme: GradingScheme, seed: u64) -> Result<Homology> {
    integral(c, scheme, Some(seed))
}

fn field_betti(c: &ChainComplex, scheme: GradingScheme, rank: impl Fn(&IntMatrix) -> usize + Sync) -> Result<BTreeMap<Gradings, usize>> {
    check_grading_shift(c, scheme)?;
    let cols = columns(c, scheme, None);
    let ranks = per_block(c, &cols, rank);
    let mut out = BTreeMap::new();
    for (ck, col) in &cols {
        for (&i, gens) in col {
            let b = gens.len() - ranks[&(*ck, i)] - ranks.get(&(*ck, i - 1)).copied().unwrap_or(0);
            if b > 0 {
                out.insert(Gradings::new(i, ck.0, ck.1, ck.2), b);
            }
        }
    }
    Ok(out)
}

/// Betti numbers over the rationals.
pub fn homology_rational(c: &ChainComplex, scheme: GradingScheme) -> Result<BTreeMap<Gradings, usize>> {
    field_betti(c, scheme, rank_rational)
}

/// Betti numbers over the field with two elements.
pub fn homology_mod2(c: &ChainComplex, scheme: GradingScheme) -> Result<BTreeMap<Gradings, usize>> {
    field_betti(c, scheme, |m| rank_mod_p(m, 2))
}

/// Checks integer homology against field Betti numbers via universal coefficients:
/// free ranks equal rational Betti numbers, and mod-2 Betti numbers count free rank
/// plus even torsion in the same degree and in the next one.
pub fn universal_coefficients_consistent(h: &Homology, q: &BTreeMap<Gradings, usize>, f2: &BTreeMap<Gradings, usize>) -> bool {
    let free: BTreeMap<Gradings, usize> = h.groups.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (*k, g.rank)).collect();
    if &free != q {
        return false;
    }
    let even = |k: Gradings| h.get(k).torsion.iter().filter(|&&t| t % 2 == 0).count();
    let mut keys: Vec<Gradings> = h.groups.keys().copied().collect();
    keys.extend(f2.keys().copied());
    keys.extend(h.groups.keys().map(|k| Gradings::new(k.i - 1, k.j, k.k, k.b)));
    keys.into_iter().all(|k| {
        let want = h.get(k).rank + even(k) + even(Gradings::new(k.i + 1, k.j, k.k, k.b));
        f2.get(&k).copied().unwrap_or(0) == want
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{bracket_state_sum, khovanov_complex};
    use crate::diagram::{parse_pd, LinkDiagram};
    use crate::states::SignRule;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    fn kh(pd: &str) -> Homology {
        let c = khovanov_complex(&parse_pd(pd).unwrap(), SignRule::Alpha).unwrap();
        homology(&c, GradingScheme::Khovanov { normalized: true }).unwrap().project(|g| Gradings::new(g.i, g.j, 0, 0))
    }

    fn g(i: i64, j: i64) -> Gradings {
        Gradings::new(i, j, 0, 0)
    }

    #[test]
    fn unknot() {
        let c = khovanov_complex(&LinkDiagram::unknot(), SignRule::Alpha).unwrap();
        let h = homology(&c, GradingScheme::Surface).unwrap();
        assert_eq!(h.groups.len(), 2);
        assert_eq!(h.get(Gradings::new(0, -1, 0, 0)), HomologyGroup::free(1));
        assert_eq!(h.get(Gradings::new(0, 1, 0, 0)), HomologyGroup::free(1));
    }

    #[test]
    fn curl_normalizes_to_unknot() {
        for pd in ["X[1,2,2,1]", "X[2,2,1,1]"] {
            let h = kh(pd);
            assert_eq!(h.groups.keys().copied().collect::<Vec<_>>(), vec![g(0, -1), g(0, 1)], "{pd}");
        }
    }

    #[test]
    fn trefoils() {
        let left = kh(TREFOIL);
        let want: BTreeMap<Gradings, HomologyGroup> = [
            (g(-3, -9), HomologyGroup::free(1)),
            (g(-2, -7), HomologyGroup { rank: 0, torsion: vec![2] }),
            (g(-2, -5), HomologyGroup::free(1)),
            (g(0, -3), HomologyGroup::free(1)),
            (g(0, -1), HomologyGroup::free(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(left.groups, want);
        let right = kh("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]");
        let want: BTreeMap<Gradings, HomologyGroup> = [
            (g(0, 1), HomologyGroup::free(1)),
            (g(0, 3), HomologyGroup::free(1)),
            (g(2, 5), HomologyGroup::free(1)),
            (g(3, 7), HomologyGroup { rank: 0, torsion: vec![2] }),
            (g(3, 9), HomologyGroup::free(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(right.groups, want);
    }

    #[test]
    fn field_cross_checks() {
        for pd in [TREFOIL, "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "X[4,1,3,2] X[2,3,1,4]"] {
            let d = parse_pd(pd).unwrap();
            let c = khovanov_complex(&d, SignRule::Sigma).unwrap();
            for scheme in [GradingScheme::Surface, GradingScheme::Khovanov { normalized: false }] {
                let h = homology(&c, scheme).unwrap();
                let q = homology_rational(&c, scheme).unwrap();
                let f2 = homology_mod2(&c, scheme).unwrap();
                assert!(universal_coefficients_consistent(&h, &q, &f2), "{pd}");
                assert_eq!(homology_shuffled(&c, scheme, 11).unwrap(), h);
            }
            let h = homology(&c, GradingScheme::Khovanov { normalized: true }).unwrap();
            assert_eq!(h.euler(), bracket_state_sum(&d, true));
        }
    }

    #[test]
    fn display() {
        assert_eq!(HomologyGroup { rank: 2, torsion: vec![2] }.to_string(), "Z^2 + Z/2");
        assert_eq!(HomologyGroup::default().to_string(), "0");
    }
}
