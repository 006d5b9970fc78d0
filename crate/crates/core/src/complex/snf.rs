//! Smith normal form and exact ranks of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_i64(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn multiply(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let inner = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// `S = U·M·V` with `S` diagonal, `d1 | d2 | ...`, and `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries of `S`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.len().min(self.s.first().map_or(0, |r| r.len()))).map(|i| self.s[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
    }
    /// row i -= q * row j
    fn row_op(&mut self, i: usize, j: usize, q: &BigInt) {
        fn apply(m: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
            let (ri, rj) = if i < j {
                let (x, y) = m.split_at_mut(j);
                (&mut x[i], &y[0])
            } else {
                let (x, y) = m.split_at_mut(i);
                (&mut y[0], &x[j])
            };
            for (a, b) in ri.iter_mut().zip(rj.iter()) {
                if !b.is_zero() {
                    *a -= q * b;
                }
            }
        }
        apply(&mut self.a, i, j, q);
        if let Some(u) = &mut self.u {
            apply(u, i, j, q);
        }
    }
    /// col i -= q * col j
    fn col_op(&mut self, i: usize, j: usize, q: &BigInt) {
        fn apply(m: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
            for r in m.iter_mut() {
                if !r[j].is_zero() {
                    let t = q * &r[j];
                    r[i] -= t;
                }
            }
        }
        apply(&mut self.a, i, j, q);
        if let Some(v) = &mut self.v {
            apply(v, i, j, q);
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a[t][t].clone();
                let mut again = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&p);
                    self.row_op(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        again = true;
                    }
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&p);
                    self.col_op(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        again = true;
                    }
                }
                if again {
                    // a smaller remainder exists in row or column t; move it to the pivot
                    let mut best = (t, t);
                    for i in t..self.rows {
                        if !self.a[i][t].is_zero() && self.a[i][t].abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t..self.cols {
                        if !self.a[t][j].is_zero() && self.a[t][j].abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                // divisibility of the remaining block by the pivot
                let bad = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_op(t, i, &BigInt::from(-1)),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = Reducer { a: m.clone(), u: Some(identity(rows)), v: Some(identity(cols)), rows, cols };
    r.run();
    Snf { u: r.u.unwrap(), s: r.a, v: r.v.unwrap() }
}

/// Nonzero invariant factors, without tracking the transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = Reducer { a: m.clone(), u: None, v: None, rows, cols };
    r.run();
    (0..rows.min(cols)).map(|i| r.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_rational(m: &IntMatrix) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank over the field with `p` elements.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&pb).try_into().unwrap_or(0u64)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let inv = |x: u64| -> u64 {
        let (mut r, mut e, mut b) = (1u64, p - 2, x % p);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(piv, rank);
        let iv = inv(a[rank][c]);
        for j in c..cols {
            a[rank][j] = a[rank][j] * iv % p;
        }
        for i in 0..rows {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c];
                for j in c..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(s: &Snf) -> Vec<i64> {
        s.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect()
    }

    fn check(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(multiply(&multiply(&s.u, m), &s.v), s.s);
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
        for i in 0..s.s.len() {
            for j in 0..s.s[i].len() {
                if i != j {
                    assert!(s.s[i][j].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn examples() {
        assert_eq!(check(&from_i64(&[vec![0]])).s, from_i64(&[vec![0]]));
        assert_eq!(diag(&check(&from_i64(&[vec![2, 0], vec![0, 3]]))), vec![1, 6]);
        let id = identity(3);
        assert_eq!(check(&id).s, id);
        assert_eq!(diag(&check(&from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]))), vec![2, 6, 12]);
    }

    #[test]
    fn ranks() {
        let m = from_i64(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(determinant(&from_i64(&[vec![2, 1], vec![1, 1]])), BigInt::one());
    }

    proptest! {
        #[test]
        fn snf_is_a_valid_decomposition(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-6i64..7, 25)) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect()).collect();
            let m = from_i64(&m);
            let s = check(&m);
            prop_assert_eq!(s.invariant_factors().len(), rank_rational(&m));
            prop_assert_eq!(invariant_factors(&m), s.invariant_factors());
        }
    }
}
