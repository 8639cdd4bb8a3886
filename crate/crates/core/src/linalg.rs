//! Dense exact linear algebra over a [`FieldSpec`].

use num_traits::{One, Zero};

use crate::scalar::{FieldSpec, Q};

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref(f: FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let k = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: FieldSpec, m: &Matrix) -> usize {
    rref(f, &mut m.clone()).len()
}

/// Determinant of a square matrix by Gaussian elimination.
pub fn det(f: FieldSpec, m: &Matrix) -> Q {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &a[c][c]);
        let inv = f.inv(&a[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let k = f.mul(&a[i][c], &inv);
            for j in c..n {
                let t = f.mul(&k, &a[c][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
    }
    d
}

/// Some solution `x` of `a x = b`, or `None` when the system is inconsistent.
pub fn solve(f: FieldSpec, a: &Matrix, b: &[Q]) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// A basis of the right kernel `{x : a x = 0}`.
pub fn kernel(f: FieldSpec, a: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.clone();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Q::zero(); cols];
            v[fc] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn determinant() {
        let f = FieldSpec::Rational;
        assert_eq!(det(f, &mat(&[&[0, 1], &[1, 0]])), q(-1));
        assert_eq!(det(f, &mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])), q(18));
        assert_eq!(det(FieldSpec::Prime(5), &mat(&[&[2, 1], &[1, 3]])), q(0));
    }

    #[test]
    fn solve_and_kernel() {
        let f = FieldSpec::Rational;
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(f, &a), 1);
        let ker = kernel(f, &a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let s: Q = a[0].iter().zip(v).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
        assert!(solve(f, &a, &[q(1), q(3)]).is_none());
        assert_eq!(solve(f, &a, &[q(3), q(6)]).unwrap(), vec![q(3), q(0), q(0)]);
    }
}
