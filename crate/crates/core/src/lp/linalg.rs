//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Row-echelon reduction; returns the indices of the pivot rows of the
/// original matrix that form a basis of its row space.
pub fn row_basis(rows: &[Vec<Rational>]) -> Vec<usize> {
    let mut work: Vec<(usize, Vec<Rational>)> = rows.iter().cloned().enumerate().collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut basis = Vec::new();
    let mut top = 0;
    for col in 0..width {
        let Some(found) = (top..work.len()).find(|&r| !work[r].1[col].is_zero()) else {
            continue;
        };
        work.swap(top, found);
        let pivot = work[top].1[col].clone();
        let pivot_row = work[top].1.clone();
        for r in top + 1..work.len() {
            if work[r].1[col].is_zero() {
                continue;
            }
            let factor = &work[r].1[col] / &pivot;
            for (x, p) in work[r].1.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        basis.push(work[top].0);
        top += 1;
        if top == work.len() {
            break;
        }
    }
    basis.sort_unstable();
    basis
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    row_basis(rows).len()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let found = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, found);
        b.swap(col, found);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        b[col] *= &inv;
        let pivot_row = a[col].clone();
        let pivot_b = b[col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            b[r] -= &factor * &pivot_b;
        }
    }
    Some(b)
}
