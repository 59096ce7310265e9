//! Fixtures shared by the benchmarks.

use cbd_core::rational::{int, ratio};
use cbd_core::{liar_mixture, validate_system, Cell, OutcomeSet, ValidatedSystem};

pub fn liar(n: usize) -> ValidatedSystem {
    validate_system(&liar_mixture(n)).expect("Liar mixtures are valid")
}

/// A consistently connected but contextual rank-2 system.
pub fn consistent_pair() -> ValidatedSystem {
    let cells = |t: [(i64, i64); 4]| {
        [["+1", "+1"], ["+1", "-1"], ["-1", "+1"], ["-1", "-1"]]
            .into_iter()
            .zip(t)
            .filter(|(_, (n, _))| *n != 0)
            .map(|(o, (n, d))| Cell::new(o, ratio(n, d)))
            .collect::<Vec<_>>()
    };
    let spec = cbd_core::SystemSpec::new()
        .with_content("q1", OutcomeSet::plus_minus())
        .with_content("q2", OutcomeSet::plus_minus())
        .with_context("c1", ["q1", "q2"], cells([(1, 4), (0, 1), (1, 4), (1, 2)]))
        .with_context("c2", ["q1", "q2"], cells([(0, 1), (1, 4), (1, 2), (1, 4)]));
    validate_system(&spec).expect("valid fixture")
}

/// Deterministic ring of `n` contexts with a single point mass each.
pub fn deterministic_ring(n: usize) -> ValidatedSystem {
    let mut spec = cbd_core::SystemSpec::new();
    for i in 1..=n {
        spec = spec.with_content(format!("q{i}"), OutcomeSet::plus_minus());
    }
    for i in 1..=n {
        let next = i % n + 1;
        spec = spec.with_context(
            format!("c{i}"),
            [format!("q{i}"), format!("q{next}")],
            vec![Cell::new(["+1", "-1"], int(1))],
        );
    }
    validate_system(&spec).expect("valid fixture")
}
