//! Named diagrams used by examples, checks and tests.

use crate::diagram::{parse_pd, LinkDiagram};

pub const UNKNOT: &str = "O[1]";
pub const CURL_NEGATIVE: &str = "X[1,2,2,1]";
pub const CURL_POSITIVE: &str = "X[2,2,1,1]";
pub const HOPF: &str = "X[4,1,3,2] X[2,3,1,4]";
pub const TREFOIL_LEFT: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
pub const TREFOIL_RIGHT: &str = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]";
pub const FIGURE_EIGHT: &str = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";
pub const CINQUEFOIL: &str = "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]";
pub const THREE_TWIST: &str = "X[1,4,2,5] X[3,8,4,9] X[5,10,6,1] X[9,6,10,7] X[7,2,8,3]";
pub const STEVEDORE: &str = "X[1,4,2,5] X[7,10,8,11] X[3,9,4,8] X[9,3,10,2] X[5,12,6,1] X[11,6,12,7]";
pub const KNOT_6_2: &str = "X[1,4,2,5] X[5,10,6,11] X[3,9,4,8] X[9,3,10,2] X[7,12,8,1] X[11,6,12,7]";
pub const KNOT_6_3: &str = "X[4,2,5,1] X[8,4,9,3] X[12,9,1,10] X[10,5,11,6] X[6,11,7,12] X[2,8,3,7]";

/// The two one-crossing unknot diagrams, as a manifest.
pub const UNKNOT_K1: &str = "neg: X[1,2,2,1]\npos: X[2,2,1,1]\n";

/// Two-crossing unknot diagrams on the sphere, one per class, as a manifest.
/// `N`/`P` name the curl sign and `L`/`R` the side of the strand it sits on.
pub const UNKNOT_K2: &str = "NR+NR: X[1,3,3,2] X[2,4,4,1]
NR+NL: X[1,3,3,2] X[4,2,1,4]
PL+PL: X[1,2,3,3] X[2,1,4,4]
PL+PR: X[1,2,3,3] X[4,4,1,2]
NR+PR: X[1,3,3,2] X[4,4,1,2]
NR+PL: X[1,3,3,2] X[2,1,4,4]
";

/// Every named diagram with its name.
pub fn named() -> Vec<(&'static str, LinkDiagram)> {
    [
        ("unknot", UNKNOT),
        ("curl-", CURL_NEGATIVE),
        ("curl+", CURL_POSITIVE),
        ("hopf", HOPF),
        ("trefoil-left", TREFOIL_LEFT),
        ("trefoil-right", TREFOIL_RIGHT),
        ("figure-eight", FIGURE_EIGHT),
        ("5_1", CINQUEFOIL),
        ("5_2", THREE_TWIST),
        ("6_1", STEVEDORE),
        ("6_2", KNOT_6_2),
        ("6_3", KNOT_6_3),
    ]
    .into_iter()
    .map(|(n, pd)| (n, parse_pd(pd).expect("catalog entries parse")))
    .collect()
}

pub fn by_name(name: &str) -> Option<LinkDiagram> {
    named().into_iter().find(|(n, _)| *n == name).map(|(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::bracket_state_sum;

    #[test]
    fn catalog_is_spherical_and_oriented() {
        for (name, d) in named() {
            assert!(d.is_spherical(), "{name}");
            assert!(d.orientation_consistent(), "{name}");
        }
        assert_eq!(by_name("hopf").unwrap().link_components(), 2);
        assert_eq!(by_name("6_3").unwrap().link_components(), 1);
    }

    /// `|J(-1)|` from the bracket: divide out the unknot factor and evaluate at `q = i`.
    fn determinant(name: &str) -> i64 {
        let mut r: std::collections::BTreeMap<i64, i64> = bracket_state_sum(&by_name(name).unwrap(), true).into_iter().map(|(e, c)| (e + 1, c)).collect();
        let mut value = 0;
        while let Some((&e, &c)) = r.iter().next() {
            value += if e.rem_euclid(4) == 0 { c } else { -c };
            for f in [e, e + 2] {
                let v = r.entry(f).or_default();
                *v -= c;
                if *v == 0 {
                    r.remove(&f);
                }
            }
        }
        value.abs()
    }

    #[test]
    fn knots_have_their_determinants() {
        let want = [("trefoil-left", 3), ("trefoil-right", 3), ("figure-eight", 5), ("5_1", 5), ("5_2", 7), ("6_1", 9), ("6_2", 11), ("6_3", 13)];
        for (name, det) in want {
            assert_eq!(determinant(name), det, "{name}");
        }
    }
}
