//! Couplings of two content-sharing variables taken in isolation.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::simplex::{self, SimplexOutcome, StandardLp};
use crate::rational::{int, Rational};
use crate::system::{Marginal, OutcomeSet, Probability};

/// Joint distribution of a pair `(X', Y')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointTable {
    pub row_outcomes: OutcomeSet,
    pub col_outcomes: OutcomeSet,
    /// `cells[i][j] = Pr[X' = row_outcomes[i], Y' = col_outcomes[j]]`.
    pub cells: Vec<Vec<Probability>>,
}

impl JointTable {
    pub fn row_sums(&self) -> Vec<Rational> {
        self.cells
            .iter()
            .map(|row| row.iter().fold(Rational::zero(), |acc, p| acc + p))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<Rational> {
        (0..self.col_outcomes.len())
            .map(|j| self.cells.iter().fold(Rational::zero(), |acc, row| acc + &row[j]))
            .collect()
    }

    /// `Pr[X' != Y']`, comparing outcomes by label.
    pub fn discrepancy(&self) -> Rational {
        let mut total = Rational::zero();
        for (i, row) in self.cells.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if self.row_outcomes.values()[i] != self.col_outcomes.values()[j] {
                    total += p;
                }
            }
        }
        total
    }

    pub fn get(&self, row: &str, col: &str) -> Option<&Probability> {
        let i = self.row_outcomes.index_of(row)?;
        let j = self.col_outcomes.index_of(col)?;
        Some(&self.cells[i][j])
    }
}

fn same_domain(m1: &Marginal, m2: &Marginal) -> Result<()> {
    if m1.outcomes != m2.outcomes {
        return Err(Error::MarginalDomainMismatch {
            left: m1.label(),
            right: m2.label(),
        });
    }
    Ok(())
}

/// Minimal `Pr[X' != Y']` over all couplings: the total variation distance.
pub fn isolated_delta(m1: &Marginal, m2: &Marginal) -> Result<Rational> {
    same_domain(m1, m2)?;
    let total = m1
        .probs
        .iter()
        .zip(&m2.probs)
        .fold(Rational::zero(), |acc, (p, q)| acc + (p - q).abs());
    Ok(total / int(2))
}

/// The unique coupling of two binary variables minimising `Pr[X' != Y']`.
pub fn min_coupling_pair(m1: &Marginal, m2: &Marginal) -> Result<JointTable> {
    same_domain(m1, m2)?;
    if m1.outcomes.len() != 2 {
        return Err(Error::NotBinary(m1.content.to_string()));
    }
    let (u, v) = (&m1.probs[0], &m2.probs[0]);
    let (nu, nv) = (&m1.probs[1], &m2.probs[1]);
    let low = u.min(v).clone();
    let high = nu.min(nv).clone();
    Ok(JointTable {
        row_outcomes: m1.outcomes.clone(),
        col_outcomes: m2.outcomes.clone(),
        cells: vec![vec![low.clone(), u - &low], vec![v - &low, high]],
    })
}

/// δ computed as a transportation program over all k×k couplings.
pub fn transport_delta(m1: &Marginal, m2: &Marginal) -> Result<(Rational, JointTable)> {
    same_domain(m1, m2)?;
    let k = m1.outcomes.len();
    // Cell (i, j) is column i*k + j; rows are the k row sums, then the k column sums.
    let columns = (0..k * k)
        .map(|c| vec![(c / k, int(1)), (k + c % k, int(1))])
        .collect();
    let lp = StandardLp {
        rows: 2 * k,
        columns,
        rhs: m1.probs.iter().chain(&m2.probs).cloned().collect(),
        cost: (0..k * k)
            .map(|c| if c / k == c % k { int(0) } else { int(1) })
            .collect(),
    };
    match simplex::minimize(&lp) {
        SimplexOutcome::Optimal { x, value } => Ok((
            value,
            JointTable {
                row_outcomes: m1.outcomes.clone(),
                col_outcomes: m2.outcomes.clone(),
                cells: x.chunks(k).map(<[Rational]>::to_vec).collect(),
            },
        )),
        other => unreachable!("the independent coupling is always feasible: {other:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::system::ContentId;

    fn binary(u: Rational) -> Marginal {
        Marginal {
            content: ContentId::from("q"),
            context: "c".into(),
            outcomes: OutcomeSet::plus_minus(),
            probs: vec![u.clone(), int(1) - u],
        }
    }

    fn ternary(p: [Rational; 3]) -> Marginal {
        Marginal {
            content: ContentId::from("t"),
            context: "c".into(),
            outcomes: OutcomeSet::new(["A", "B", "C"]),
            probs: p.to_vec(),
        }
    }

    #[test]
    fn equal_marginals_have_zero_delta() {
        let m = binary(ratio(1, 3));
        assert_eq!(isolated_delta(&m, &m).unwrap(), int(0));
    }

    #[test]
    fn binary_delta_is_absolute_difference() {
        assert_eq!(
            isolated_delta(&binary(ratio(3, 4)), &binary(ratio(1, 4))).unwrap(),
            ratio(1, 2)
        );
    }

    #[test]
    fn ternary_delta_matches_transport_program() {
        let a = ternary([ratio(1, 2), ratio(1, 2), int(0)]);
        let b = ternary([ratio(1, 2), int(0), ratio(1, 2)]);
        assert_eq!(isolated_delta(&a, &b).unwrap(), ratio(1, 2));
        let (lp_value, table) = transport_delta(&a, &b).unwrap();
        assert_eq!(lp_value, ratio(1, 2));
        assert_eq!(table.row_sums(), a.probs);
        assert_eq!(table.col_sums(), b.probs);
    }

    #[test]
    fn min_coupling_of_equal_halves_is_diagonal() {
        let t = min_coupling_pair(&binary(ratio(1, 2)), &binary(ratio(1, 2))).unwrap();
        assert_eq!(t.cells, vec![vec![ratio(1, 2), int(0)], vec![int(0), ratio(1, 2)]]);
    }

    #[test]
    fn min_coupling_of_disjoint_point_masses() {
        let t = min_coupling_pair(&binary(int(1)), &binary(int(0))).unwrap();
        assert_eq!(t.get("+1", "-1"), Some(&int(1)));
        assert_eq!(t.discrepancy(), int(1));
    }

    #[test]
    fn min_coupling_three_quarters_vs_one_quarter() {
        let (x, y) = (binary(ratio(3, 4)), binary(ratio(1, 4)));
        let t = min_coupling_pair(&x, &y).unwrap();
        assert_eq!(t.get("+1", "+1"), Some(&ratio(1, 4)));
        assert_eq!(t.get("+1", "-1"), Some(&ratio(1, 2)));
        assert_eq!(t.get("-1", "+1"), Some(&int(0)));
        assert_eq!(t.get("-1", "-1"), Some(&ratio(1, 4)));
        assert_eq!(t.row_sums(), x.probs);
        assert_eq!(t.col_sums(), y.probs);
    }

    #[test]
    fn domain_errors() {
        let b = binary(ratio(1, 2));
        let t = ternary([ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(matches!(
            isolated_delta(&b, &t),
            Err(Error::MarginalDomainMismatch { .. })
        ));
        assert!(matches!(min_coupling_pair(&t, &t), Err(Error::NotBinary(_))));
    }
}
