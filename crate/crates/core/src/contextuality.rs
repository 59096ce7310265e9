//! Full analysis of a system: isolated deltas, system delta, and their gap.

use num_traits::{One, Signed, Zero};

use crate::coupling::isolated_delta;
use crate::error::{Error, Result};
use crate::lp::{build_coupling_lp, solve_lp, LpStatus, Witness};
use crate::rational::{int, Rational};
use crate::system::{connections, ContentId, ContextId, ValidatedSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDelta {
    pub first: ContextId,
    pub second: ContextId,
    pub delta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionReport {
    pub content: ContentId,
    pub consistent: bool,
    /// Empty for contents measured in a single context.
    pub pairs: Vec<PairDelta>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub connections: Vec<ConnectionReport>,
    /// Sum of the isolated deltas.
    pub delta_sum: Rational,
    /// Minimal total discrepancy over couplings of the whole system.
    pub system_delta: Rational,
    /// `system_delta - delta_sum`; never negative.
    pub cnt: Rational,
    pub contextual: bool,
    pub consistent: bool,
    pub deterministic: bool,
    pub witness: Witness,
}

fn connection_reports(sys: &ValidatedSystem) -> Result<Vec<ConnectionReport>> {
    connections(sys)
        .into_iter()
        .map(|conn| {
            let pairs = conn
                .pairs()
                .map(|(i, j)| {
                    let (ci, mi) = &conn.members[i];
                    let (cj, mj) = &conn.members[j];
                    Ok(PairDelta {
                        first: ci.clone(),
                        second: cj.clone(),
                        delta: isolated_delta(mi, mj)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(ConnectionReport {
                consistent: conn.is_consistent(),
                content: conn.content,
                pairs,
            })
        })
        .collect()
}

fn assemble(
    sys: &ValidatedSystem,
    connections: Vec<ConnectionReport>,
    system_delta: Rational,
    witness: Witness,
) -> AnalysisReport {
    let delta_sum = connections
        .iter()
        .flat_map(|c| &c.pairs)
        .fold(Rational::zero(), |acc, p| acc + &p.delta);
    let cnt = &system_delta - &delta_sum;
    debug_assert!(!cnt.is_negative(), "system delta below the sum of isolated deltas");
    AnalysisReport {
        consistent: connections.iter().all(|c| c.consistent),
        contextual: cnt.is_positive(),
        deterministic: is_deterministic(sys),
        connections,
        delta_sum,
        system_delta,
        cnt,
        witness,
    }
}

/// Analyses `sys`, taking the exact shortcut for deterministic systems.
pub fn analyze(sys: &ValidatedSystem, atom_cap: u128) -> Result<AnalysisReport> {
    if is_deterministic(sys) {
        analyze_deterministic(sys)
    } else {
        analyze_lp(sys, atom_cap)
    }
}

/// Analyses `sys` through the coupling program, whatever its shape.
pub fn analyze_lp(sys: &ValidatedSystem, atom_cap: u128) -> Result<AnalysisReport> {
    let connections = connection_reports(sys)?;
    let lp = build_coupling_lp(sys, atom_cap)?;
    let solution = solve_lp(&lp);
    assert_eq!(
        solution.status,
        LpStatus::Optimal,
        "a validated system always admits the product coupling"
    );
    let witness = Witness::from_solution(&lp, &solution);
    Ok(assemble(sys, connections, solution.optimum, witness))
}

/// True iff every context distribution is a point mass.
pub fn is_deterministic(sys: &ValidatedSystem) -> bool {
    sys.contexts()
        .iter()
        .all(|ctx| ctx.table().iter().any(One::is_one))
}

/// Deterministic systems have a single coupling, so Δ is the plain count of
/// disagreeing same-content pairs and CNT is zero.
pub fn analyze_deterministic(sys: &ValidatedSystem) -> Result<AnalysisReport> {
    if !is_deterministic(sys) {
        return Err(Error::NotDeterministic);
    }
    let connections = connection_reports(sys)?;
    let variables = sys.variables();
    let mut values = Vec::with_capacity(variables.len());
    for ctx in sys.contexts() {
        let (tuple, _) = ctx
            .cells()
            .find(|(_, p)| p.is_one())
            .expect("point mass");
        values.extend(tuple);
    }
    let mut disagreements = 0i64;
    for q in 0..sys.contents().len() {
        let at: Vec<usize> = variables
            .iter()
            .enumerate()
            .filter(|(_, v)| v.content == q)
            .map(|(i, _)| values[i])
            .collect();
        for i in 0..at.len() {
            for j in i + 1..at.len() {
                if at[i] != at[j] {
                    disagreements += 1;
                }
            }
        }
    }
    let witness = Witness {
        variables: variables.iter().map(|&v| sys.variable_label(v)).collect(),
        atoms: vec![(
            variables
                .iter()
                .zip(&values)
                .map(|(v, &o)| sys.outcomes(v.content).values()[o].clone())
                .collect(),
            int(1),
        )],
    };
    Ok(assemble(sys, connections, int(disagreements), witness))
}
