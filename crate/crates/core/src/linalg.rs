//! Small dense linear algebra over a cyclotomic field.

use alloc::vec::Vec;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<CyclotomicNumber>>;

pub fn identity(field: &CyclotomicField, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}

pub fn from_ints(field: &CyclotomicField, m: &[Vec<i64>]) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect()
}

/// Gauss-Jordan inverse.
pub fn inverse(field: &CyclotomicField, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.clone();
    let mut inv = identity(field, n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inverse()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= &t;
                    let t = &inv[col][j] * &f;
                    inv[r][j] -= &t;
                }
            }
        }
    }
    Ok(inv)
}

/// Rank by row reduction.
pub fn rank(rows: &Matrix) -> usize {
    let mut a = rows.clone();
    let Some(width) = a.first().map(|r| r.len()) else {
        return 0;
    };
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let p = a[r][col].inverse().expect("nonzero pivot");
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = &a[i][col] * &p;
                for j in 0..width {
                    let t = &a[r][j] * &f;
                    a[i][j] -= &t;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}
