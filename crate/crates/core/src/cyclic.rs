//! Cyclic systems: n contents and n contexts closed into a single ring, each
//! context holding two neighbouring contents.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::system::{expectation, ContentId, ContextId, ValidatedSystem};

/// Context `context` holds `first` and `second`; `second` is also the
/// `first` of the next link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleLink {
    pub context: ContextId,
    pub first: ContentId,
    pub second: ContentId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicStructure {
    pub rank: usize,
    pub cycle: Vec<CycleLink>,
}

/// Finds the ring, starting at the least context label; `None` if the
/// system is not cyclic.
pub fn detect_cyclic(sys: &ValidatedSystem) -> Option<CyclicStructure> {
    let n = sys.contexts().len();
    let used: Vec<usize> = (0..sys.contents().len())
        .filter(|&q| !sys.contexts_of(q).is_empty())
        .collect();
    if n < 2 || used.len() != n {
        return None;
    }
    if sys.contexts().iter().any(|c| c.contents().len() != 2)
        || used.iter().any(|&q| sys.contexts_of(q).len() != 2)
    {
        return None;
    }
    let other_context = |q: usize, c: usize| {
        let cs = sys.contexts_of(q);
        if cs[0] == c {
            cs[1]
        } else {
            cs[0]
        }
    };
    let other_content = |c: usize, q: usize| {
        let qs = sys.contexts()[c].contents();
        if qs[0] == q {
            qs[1]
        } else {
            qs[0]
        }
    };

    let start = 0;
    let (x, y) = (sys.contexts()[start].contents()[0], sys.contexts()[start].contents()[1]);
    // Walk towards the smaller neighbouring context; for rank 2 both
    // directions meet the same context and the smaller content leads.
    let (mut first, mut second) = if other_context(x, start) < other_context(y, start) {
        (y, x)
    } else {
        (x, y)
    };
    let mut cycle = Vec::with_capacity(n);
    let mut at = start;
    loop {
        cycle.push(CycleLink {
            context: sys.contexts()[at].id().clone(),
            first: sys.content_id(first).clone(),
            second: sys.content_id(second).clone(),
        });
        at = other_context(second, at);
        if at == start {
            break;
        }
        if cycle.len() == n {
            return None;
        }
        first = second;
        second = other_content(at, first);
    }
    (cycle.len() == n).then_some(CyclicStructure { rank: n, cycle })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C2Criterion {
    /// `|<R1 R2>_c1 - <R1 R2>_c2|`
    pub lhs: Rational,
    /// `|<R1>_c1 - <R1>_c2| + |<R2>_c1 - <R2>_c2|`
    pub rhs: Rational,
    pub margin: Rational,
    pub contextual: bool,
}

/// Closed-form contextuality test for rank-2 cyclic systems of ±1 variables.
pub fn c2_criterion(sys: &ValidatedSystem) -> Result<C2Criterion> {
    let ring = detect_cyclic(sys)
        .filter(|s| s.rank == 2)
        .ok_or(Error::NotCyclicRank2)?;
    let (c1, c2) = (&ring.cycle[0].context, &ring.cycle[1].context);
    let q1 = ring.cycle[0].first.clone();
    let q2 = ring.cycle[0].second.clone();
    let both = [q1.clone(), q2.clone()];
    let e = |c: &ContextId, qs: &[ContentId]| expectation(sys, c, qs);

    let lhs = (e(c1, &both)? - e(c2, &both)?).abs();
    let rhs = (e(c1, std::slice::from_ref(&q1))? - e(c2, &[q1])?).abs()
        + (e(c1, std::slice::from_ref(&q2))? - e(c2, &[q2])?).abs();
    let margin = &lhs - &rhs;
    Ok(C2Criterion {
        contextual: margin > Rational::zero(),
        lhs,
        rhs,
        margin,
    })
}
