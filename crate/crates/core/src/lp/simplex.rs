//! Two-phase revised simplex in exact arithmetic with Bland's rule.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0` for a column-sparse `A`. The basis
//! inverse is kept dense; it is small because coupling programs have few rows
//! and many columns.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Standard-form program with sparse columns.
#[derive(Debug, Clone, Default)]
pub struct StandardLp {
    pub rows: usize,
    /// `columns[j]` lists `(row, coefficient)` pairs.
    pub columns: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau<'a> {
    lp: &'a StandardLp,
    flip: Vec<bool>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a StandardLp) -> Self {
        let m = lp.rows;
        let n = lp.columns.len();
        let flip: Vec<bool> = lp.rhs.iter().map(Signed::is_negative).collect();
        let xb = lp.rhs.iter().map(|b| b.abs()).collect();
        let binv = (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| if i == k { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        let mut is_basic = vec![false; n + m];
        for flag in &mut is_basic[n..] {
            *flag = true;
        }
        Self {
            lp,
            flip,
            basis: (n..n + m).collect(),
            is_basic,
            binv,
            xb,
        }
    }

    fn structural(&self) -> usize {
        self.lp.columns.len()
    }

    /// Column `j` of the sign-adjusted matrix `[A | I]`.
    fn column(&self, j: usize) -> Vec<(usize, Rational)> {
        let n = self.structural();
        if j >= n {
            return vec![(j - n, Rational::one())];
        }
        self.lp.columns[j]
            .iter()
            .map(|(r, a)| (*r, if self.flip[*r] { -a.clone() } else { a.clone() }))
            .collect()
    }

    fn binv_times(&self, col: &[(usize, Rational)]) -> Vec<Rational> {
        self.binv
            .iter()
            .map(|row| {
                col.iter()
                    .filter(|(_, a)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (r, a)| acc + &row[*r] * a)
            })
            .collect()
    }

    fn pivot(&mut self, leave: usize, enter: usize, w: &[Rational]) {
        let inv = Rational::one() / &w[leave];
        for x in &mut self.binv[leave] {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.xb[leave] *= &inv;
        let pivot_row = self.binv[leave].clone();
        let pivot_x = self.xb[leave].clone();
        for (i, wi) in w.iter().enumerate() {
            if i == leave || wi.is_zero() {
                continue;
            }
            for (x, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= wi * p;
                }
            }
            self.xb[i] -= wi * &pivot_x;
        }
        self.is_basic[self.basis[leave]] = false;
        self.is_basic[enter] = true;
        self.basis[leave] = enter;
    }

    fn run(&mut self, cost: &[Rational], allowed: impl Fn(usize) -> bool) -> Step {
        let m = self.lp.rows;
        loop {
            // Simplex multipliers y = c_B B^-1.
            let mut y = vec![Rational::zero(); m];
            for (i, &b) in self.basis.iter().enumerate() {
                if cost[b].is_zero() {
                    continue;
                }
                for (yk, v) in y.iter_mut().zip(&self.binv[i]) {
                    if !v.is_zero() {
                        *yk += &cost[b] * v;
                    }
                }
            }
            // Bland: the lowest-index improving column enters.
            let entering = (0..cost.len()).find(|&j| {
                if self.is_basic[j] || !allowed(j) {
                    return false;
                }
                let reduced = self
                    .column(j)
                    .iter()
                    .fold(cost[j].clone(), |acc, (r, a)| acc - &y[*r] * a);
                reduced.is_negative()
            });
            let Some(enter) = entering else {
                return Step::Optimal;
            };
            let w = self.binv_times(&self.column(enter));
            // Ratio test; ties go to the lowest basic index.
            let mut leave: Option<(usize, Rational)> = None;
            for (i, wi) in w.iter().enumerate() {
                if !wi.is_positive() {
                    continue;
                }
                let t = &self.xb[i] / wi;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => t < *best || (t == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, t));
                }
            }
            let Some((leave, _)) = leave else {
                return Step::Unbounded;
            };
            self.pivot(leave, enter, &w);
        }
    }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column can replace them. Those that remain sit on redundant rows.
    fn drive_out_artificials(&mut self) {
        let n = self.structural();
        for l in 0..self.lp.rows {
            if self.basis[l] < n {
                continue;
            }
            let replacement = (0..n).find(|&j| {
                !self.is_basic[j]
                    && !self
                        .column(j)
                        .iter()
                        .fold(Rational::zero(), |acc, (r, a)| acc + &self.binv[l][*r] * a)
                        .is_zero()
            });
            if let Some(j) = replacement {
                let w = self.binv_times(&self.column(j));
                self.pivot(l, j, &w);
            }
        }
    }
}

pub fn minimize(lp: &StandardLp) -> SimplexOutcome {
    assert_eq!(lp.rhs.len(), lp.rows);
    assert_eq!(lp.cost.len(), lp.columns.len());
    let n = lp.columns.len();
    let m = lp.rows;
    let mut t = Tableau::new(lp);

    let phase_one: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();
    t.run(&phase_one, |_| true);
    let infeasibility = t
        .basis
        .iter()
        .zip(&t.xb)
        .filter(|(&b, _)| b >= n)
        .fold(Rational::zero(), |acc, (_, x)| acc + x);
    if infeasibility.is_positive() {
        return SimplexOutcome::Infeasible;
    }
    t.drive_out_artificials();

    let phase_two: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { lp.cost[j].clone() } else { Rational::zero() })
        .collect();
    if let Step::Unbounded = t.run(&phase_two, |j| j < n) {
        return SimplexOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for (&b, v) in t.basis.iter().zip(&t.xb) {
        if b < n {
            x[b] = v.clone();
        }
    }
    let value = x
        .iter()
        .zip(&lp.cost)
        .fold(Rational::zero(), |acc, (xi, c)| acc + xi * c);
    SimplexOutcome::Optimal { x, value }
}
