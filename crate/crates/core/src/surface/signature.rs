//! Signature of a symmetric integer matrix by exact congruence diagonalization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Positive minus negative eigenvalue count, computed over the rationals.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let (pos, neg) = inertia(m);
    pos as i64 - neg as i64
}

/// Number of positive and negative eigenvalues.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize) {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(m[i][j], m[j][i], "matrix must be symmetric");
        }
    }
    let mut live: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    while !live.is_empty() {
        let pivot = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // all diagonals vanish: add row/col q to p to create 2·a[p][q] on the diagonal
                let Some((p, q)) = live
                    .iter()
                    .flat_map(|&i| live.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                else {
                    break;
                };
                for k in 0..n {
                    let v = a[q][k].clone();
                    a[p][k] += v;
                }
                for k in 0..n {
                    let v = a[k][q].clone();
                    a[k][p] += v;
                }
                p
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        live.retain(|&i| i != p);
        for &i in &live {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for &j in &live {
                let v = &f * &a[p][j];
                a[i][j] -= v;
            }
        }
        for &i in &live {
            a[i][p] = BigRational::zero();
            a[p][i] = BigRational::zero();
        }
    }
    (pos, neg)
}

/// Rank over the rationals of a symmetric integer matrix.
pub fn rank(m: &[Vec<i64>]) -> usize {
    let (p, n) = inertia(m);
    p + n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(signature(&[]), 0);
        assert_eq!(signature(&[vec![-1, 0], vec![0, -1]]), -2);
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), 2);
        assert_eq!(signature(&[vec![1, 2], vec![2, 1]]), 0);
        assert_eq!(inertia(&[vec![0, 0], vec![0, 0]]), (0, 0));
    }

    #[test]
    fn hyperbolic_inside_larger() {
        let m = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -3]];
        assert_eq!(inertia(&m), (1, 2));
    }
}
