//! The whole-system coupling program.
//!
//! A coupling of a system assigns a probability to every atom, i.e. to every
//! joint assignment of one outcome to each variable R_q^c. The atoms must
//! reproduce each context's joint distribution, and the objective counts, per
//! atom, how many same-content variable pairs disagree.

pub mod linalg;
pub mod simplex;
pub mod vertex;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::system::{decode, encode, ValidatedSystem, Variable};

use self::simplex::{SimplexOutcome, StandardLp};

/// Largest coupling the analysis will attempt unless told otherwise.
pub const DEFAULT_ATOM_CAP: u128 = 1 << 20;

/// `Σ atoms agreeing with a cell = rhs`. All coefficients are 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub label: String,
    pub atoms: Vec<usize>,
    pub rhs: Rational,
}

#[derive(Debug, Clone)]
pub struct LpInstance {
    variables: Vec<Variable>,
    labels: Vec<String>,
    outcome_labels: Vec<Vec<String>>,
    radices: Vec<usize>,
    atom_count: usize,
    constraints: Vec<Constraint>,
    objective: Vec<u32>,
    pairs: Vec<(usize, usize)>,
}

impl LpInstance {
    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// `content@context` label per variable.
    pub fn variable_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    /// Outcome indices, one per variable, of atom `index`.
    pub fn atom(&self, index: usize) -> Vec<usize> {
        decode(index, &self.radices)
    }

    pub fn atom_index(&self, outcomes: &[usize]) -> usize {
        encode(outcomes, &self.radices)
    }

    pub fn atom_labels(&self, index: usize) -> Vec<String> {
        self.atom(index)
            .iter()
            .zip(&self.outcome_labels)
            .map(|(&o, names)| names[o].clone())
            .collect()
    }

    /// Cell constraints of every context in order, then the total-mass row.
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Number of disagreeing same-content pairs, per atom.
    pub fn objective(&self) -> &[u32] {
        &self.objective
    }

    /// Variable index pairs counted by the objective.
    pub fn compared_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The constraint matrix as dense rows.
    pub fn dense_rows(&self) -> Vec<Vec<Rational>> {
        self.constraints
            .iter()
            .map(|c| {
                let mut row = vec![Rational::zero(); self.atom_count];
                for &a in &c.atoms {
                    row[a] = int(1);
                }
                row
            })
            .collect()
    }

    pub fn constraint_rank(&self) -> usize {
        linalg::rank(&self.dense_rows())
    }

    pub fn evaluate(&self, weights: &[(usize, Rational)]) -> Rational {
        weights
            .iter()
            .fold(Rational::zero(), |acc, (a, w)| acc + w * int(self.objective[*a] as i64))
    }

    /// Exact check of nonnegativity and every equality constraint.
    pub fn is_feasible(&self, weights: &[(usize, Rational)]) -> bool {
        if weights.iter().any(|(a, w)| w.is_negative() || *a >= self.atom_count) {
            return false;
        }
        let mut dense = vec![Rational::zero(); self.atom_count];
        for (a, w) in weights {
            dense[*a] += w;
        }
        self.constraints.iter().all(|c| {
            c.atoms
                .iter()
                .fold(Rational::zero(), |acc, &a| acc + &dense[a])
                == c.rhs
        })
    }

    pub(crate) fn to_standard(&self) -> StandardLp {
        let mut columns = vec![Vec::new(); self.atom_count];
        for (r, c) in self.constraints.iter().enumerate() {
            for &a in &c.atoms {
                columns[a].push((r, int(1)));
            }
        }
        StandardLp {
            rows: self.constraints.len(),
            columns,
            rhs: self.constraints.iter().map(|c| c.rhs.clone()).collect(),
            cost: self.objective.iter().map(|&o| int(o as i64)).collect(),
        }
    }
}

/// Number of atoms the coupling of `sys` would need, saturating.
pub fn required_atoms(sys: &ValidatedSystem) -> u128 {
    sys.variables()
        .iter()
        .fold(1u128, |acc, v| acc.saturating_mul(sys.outcomes(v.content).len() as u128))
}

pub fn build_coupling_lp(sys: &ValidatedSystem, atom_cap: u128) -> Result<LpInstance> {
    let required = required_atoms(sys);
    if required > atom_cap || required > usize::MAX as u128 {
        return Err(Error::AtomCapExceeded {
            required,
            cap: atom_cap,
        });
    }
    let variables = sys.variables();
    let radices: Vec<usize> = variables.iter().map(|v| sys.outcomes(v.content).len()).collect();
    let atom_count = required as usize;

    // Variables of a context are contiguous in `variables`.
    let mut offsets = Vec::with_capacity(sys.contexts().len());
    let mut first_row = Vec::with_capacity(sys.contexts().len());
    let mut constraints = Vec::new();
    let mut var_at = 0;
    for ctx in sys.contexts() {
        offsets.push(var_at);
        first_row.push(constraints.len());
        var_at += ctx.contents().len();
        for (tuple, p) in ctx.cells() {
            let names: Vec<&str> = tuple
                .iter()
                .zip(ctx.contents())
                .map(|(&o, &q)| sys.outcomes(q).values()[o].as_str())
                .collect();
            constraints.push(Constraint {
                label: format!("{}[{}]", ctx.id(), names.join(",")),
                atoms: Vec::new(),
                rhs: p.clone(),
            });
        }
    }

    let mut pairs = Vec::new();
    for q in 0..sys.contents().len() {
        let members: Vec<usize> = sys
            .contexts_of(q)
            .iter()
            .map(|&ci| {
                variables
                    .iter()
                    .position(|v| v.context == ci && v.content == q)
                    .expect("variable exists")
            })
            .collect();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                pairs.push((members[i], members[j]));
            }
        }
    }

    let mut objective = Vec::with_capacity(atom_count);
    for a in 0..atom_count {
        let outcome = decode(a, &radices);
        for (ci, ctx) in sys.contexts().iter().enumerate() {
            let k = ctx.contents().len();
            let start = offsets[ci];
            let cell = encode(&outcome[start..start + k], ctx.radices());
            constraints[first_row[ci] + cell].atoms.push(a);
        }
        objective.push(pairs.iter().filter(|(i, j)| outcome[*i] != outcome[*j]).count() as u32);
    }
    constraints.push(Constraint {
        label: "total".to_string(),
        atoms: (0..atom_count).collect(),
        rhs: int(1),
    });

    Ok(LpInstance {
        labels: variables.iter().map(|&v| sys.variable_label(v)).collect(),
        outcome_labels: variables
            .iter()
            .map(|v| sys.outcomes(v.content).values().to_vec())
            .collect(),
        variables,
        radices,
        atom_count,
        constraints,
        objective,
        pairs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Minimal objective value; zero when infeasible.
    pub optimum: Rational,
    /// Nonzero atom weights, ascending by atom index.
    pub atom_weights: Vec<(usize, Rational)>,
}

impl LpSolution {
    /// Re-checks the weights against `lp` and recomputes the objective.
    pub fn verify(&self, lp: &LpInstance) -> bool {
        self.status == LpStatus::Optimal
            && lp.is_feasible(&self.atom_weights)
            && lp.evaluate(&self.atom_weights) == self.optimum
    }
}

pub fn solve_lp(lp: &LpInstance) -> LpSolution {
    match simplex::minimize(&lp.to_standard()) {
        SimplexOutcome::Optimal { x, value } => LpSolution {
            status: LpStatus::Optimal,
            optimum: value,
            atom_weights: x
                .into_iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .collect(),
        },
        SimplexOutcome::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            optimum: Rational::zero(),
            atom_weights: Vec::new(),
        },
        SimplexOutcome::Unbounded => unreachable!("objective coefficients are nonnegative"),
    }
}

/// An optimal coupling, listed as its nonzero atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub variables: Vec<String>,
    pub atoms: Vec<(Vec<String>, Rational)>,
}

impl Witness {
    pub(crate) fn from_solution(lp: &LpInstance, solution: &LpSolution) -> Self {
        Self {
            variables: lp.variable_labels().to_vec(),
            atoms: solution
                .atom_weights
                .iter()
                .map(|(a, w)| (lp.atom_labels(*a), w.clone()))
                .collect(),
        }
    }
}

/// Minimal total same-content discrepancy over all couplings of `sys`.
pub fn system_delta(sys: &ValidatedSystem, atom_cap: u128) -> Result<(Rational, Witness)> {
    let lp = build_coupling_lp(sys, atom_cap)?;
    let solution = solve_lp(&lp);
    assert_eq!(
        solution.status,
        LpStatus::Optimal,
        "a validated system always admits the product coupling"
    );
    Ok((solution.optimum.clone(), Witness::from_solution(&lp, &solution)))
}
