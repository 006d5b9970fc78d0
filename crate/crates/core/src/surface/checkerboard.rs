//! Classical Goeritz matrix of a checkerboard surface.
//!
//! When every marker agrees and each smoothing circle bounds a single face,
//! the state surface is a checkerboard surface. Its form is the reduced
//! Laplacian of the graph whose vertices are the channel faces and whose
//! edges are the crossings, scaled by the common half-twist weight.

use crate::diagram::LinkDiagram;
use crate::states::channel_faces;

/// `None` when the constant state is not a checkerboard state or the diagram is split.
pub fn classical_goeritz(d: &LinkDiagram, positive: bool) -> Option<Vec<Vec<i64>>> {
    if d.graph_components() != 1 || !d.free_loops().is_empty() {
        return None;
    }
    let k = d.crossing_count();
    let nf = d.faces().len();
    let mut channel = vec![None::<bool>; nf];
    let mut mark = |f: usize, is_channel: bool| -> bool {
        match channel[f] {
            Some(v) => v == is_channel,
            None => {
                channel[f] = Some(is_channel);
                true
            }
        }
    };
    for c in 0..k {
        let (a, b) = channel_faces(d, c, positive);
        let (x, y) = channel_faces(d, c, !positive);
        if !(mark(a, true) && mark(b, true) && mark(x, false) && mark(y, false)) {
            return None;
        }
    }
    let ids: Vec<usize> = (0..nf).filter(|&f| channel[f] == Some(true)).collect();
    let index = |f: usize| ids.iter().position(|&g| g == f).unwrap();
    let n = ids.len();
    let mut lap = vec![vec![0i64; n]; n];
    for c in 0..k {
        let (a, b) = channel_faces(d, c, positive);
        if a == b {
            continue;
        }
        let (i, j) = (index(a), index(b));
        lap[i][i] += 1;
        lap[j][j] += 1;
        lap[i][j] -= 1;
        lap[j][i] -= 1;
    }
    let t = if positive { -1 } else { 1 };
    Some(lap.into_iter().skip(1).map(|row| row.into_iter().skip(1).map(|x| t * x).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::surface::signature;

    #[test]
    fn trefoil_constant_states() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let a = classical_goeritz(&d, true).unwrap();
        let b = classical_goeritz(&d, false).unwrap();
        let sizes = [a.len(), b.len()];
        assert!(sizes.contains(&0) || sizes.contains(&1));
        assert_eq!(signature(&a), -(a.len() as i64));
        assert_eq!(signature(&b), b.len() as i64);
    }

    #[test]
    fn agrees_with_state_surface_form() {
        use crate::states::MarkerVector;
        use crate::surface::MarkerData;
        for pd in [
            "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
            "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
            "X[4,1,3,2] X[2,3,1,4]",
            "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]",
        ] {
            let d = parse_pd(pd).unwrap();
            let k = d.crossing_count();
            for (positive, m) in [(true, MarkerVector::all_positive(k)), (false, MarkerVector::all_negative(k))] {
                if let Some(g) = classical_goeritz(&d, positive) {
                    assert_eq!(signature(&g), MarkerData::new(&d, m).signature, "{pd} {m}");
                }
            }
        }
    }
}
