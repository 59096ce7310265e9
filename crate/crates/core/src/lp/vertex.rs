//! Brute-force minimisation over basic feasible solutions.
//!
//! Every vertex of `{x >= 0 : A x = b}` is a basic feasible solution, so the
//! minimum of a linear objective over a nonempty bounded polytope is attained
//! at one of them. Enumerating all column subsets of size rank(A) gives an
//! answer that shares no code with the simplex path.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

use super::{linalg, LpInstance};

/// Default bound on the number of column subsets examined.
pub const DEFAULT_BASIS_LIMIT: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOptimum {
    pub optimum: Rational,
    pub weights: Vec<(usize, Rational)>,
    pub rank: usize,
    pub vertices: usize,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Minimises the coupling objective by visiting every basic feasible solution.
/// Returns `None` when the polytope is empty.
pub fn enumerate_min(lp: &LpInstance, limit: u128) -> Result<Option<VertexOptimum>> {
    let rows = lp.dense_rows();
    let rhs: Vec<Rational> = lp.constraints().iter().map(|c| c.rhs.clone()).collect();
    let basis_rows = linalg::row_basis(&rows);
    let r = basis_rows.len();
    let n = lp.atom_count();
    let required = binomial(n, r);
    if required > limit {
        return Err(Error::EnumerationTooLarge { required, limit });
    }

    let mut best: Option<VertexOptimum> = None;
    let mut vertices = 0;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let a: Vec<Vec<Rational>> = basis_rows
            .iter()
            .map(|&i| cols.iter().map(|&j| rows[i][j].clone()).collect())
            .collect();
        let b: Vec<Rational> = basis_rows.iter().map(|&i| rhs[i].clone()).collect();
        if let Some(x) = linalg::solve_square(a, b) {
            if !x.iter().any(Signed::is_negative) {
                let weights: Vec<(usize, Rational)> = cols
                    .iter()
                    .copied()
                    .zip(x)
                    .filter(|(_, w)| !w.is_zero())
                    .collect();
                // The pivot rows span the row space, but check every row anyway.
                if lp.is_feasible(&weights) {
                    vertices += 1;
                    let value = weights.iter().fold(Rational::zero(), |acc, (j, w)| {
                        acc + w * int(lp.objective()[*j] as i64)
                    });
                    if best.as_ref().is_none_or(|b| value < b.optimum) {
                        best = Some(VertexOptimum {
                            optimum: value,
                            weights,
                            rank: r,
                            vertices: 0,
                        });
                    }
                }
            }
        }
        if !next_combination(&mut cols, n) {
            break;
        }
    }
    Ok(best.map(|mut b| {
        b.vertices = vertices;
        b
    }))
}

fn next_combination(cols: &mut [usize], n: usize) -> bool {
    let k = cols.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if cols[i] < n - k + i {
            cols[i] += 1;
            for j in i + 1..k {
                cols[j] = cols[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
