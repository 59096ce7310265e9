//! Systems of epistemic random variables.
//!
//! A deterministic system whose exact values are unknown is described by the
//! set of its admissible variants; attaching (by default uniform) Bayesian
//! weights to the variants yields an ordinary system of random variables.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::system::{Cell, ContentId, ContextBlock, ContextId, OutcomeSet, SystemSpec};

pub const DEFAULT_VARIANT_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// The two variables of the context take the same value.
    Equal,
    /// The two variables of the context take different values.
    NotEqual,
    /// Explicit admissible outcome tuples, in the context's content order.
    Allowed(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextConstraint {
    pub context: ContextId,
    pub contents: Vec<ContentId>,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EpistemicSpec {
    pub contents: Vec<(ContentId, OutcomeSet)>,
    pub contexts: Vec<ContextConstraint>,
}

/// One way of filling every variable R_q^c with a fixed value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DeterministicVariant {
    pub assignment: BTreeMap<(ContentId, ContextId), String>,
}

impl DeterministicVariant {
    pub fn value(&self, content: &ContentId, context: &ContextId) -> Option<&str> {
        self.assignment
            .get(&(content.clone(), context.clone()))
            .map(String::as_str)
    }
}

fn invalid(context: &ContextId, reason: impl Into<String>) -> Error {
    Error::InvalidConstraint {
        context: context.to_string(),
        reason: reason.into(),
    }
}

/// Admissible outcome tuples of one context, in lexicographic index order.
fn admissible(spec: &EpistemicSpec, cc: &ContextConstraint) -> Result<Vec<Vec<String>>> {
    let sets: Vec<&OutcomeSet> = cc
        .contents
        .iter()
        .map(|q| {
            spec.contents
                .iter()
                .find(|(id, _)| id == q)
                .map(|(_, set)| set)
                .ok_or_else(|| Error::UnknownContent {
                    context: cc.context.to_string(),
                    content: q.to_string(),
                })
        })
        .collect::<Result<_>>()?;
    if cc.contents.is_empty() {
        return Err(Error::EmptyContext {
            context: cc.context.to_string(),
        });
    }
    let distinct: BTreeSet<&ContentId> = cc.contents.iter().collect();
    if distinct.len() != cc.contents.len() {
        return Err(Error::DuplicateContentInContext {
            context: cc.context.to_string(),
            content: cc.contents[0].to_string(),
        });
    }

    let mut all: Vec<Vec<String>> = vec![Vec::new()];
    for set in &sets {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                set.values().iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }

    match &cc.relation {
        Relation::Equal | Relation::NotEqual => {
            if sets.len() != 2 {
                return Err(invalid(&cc.context, "equality relations need exactly two contents"));
            }
            if sets[0] != sets[1] {
                return Err(invalid(&cc.context, "compared contents have different outcome sets"));
            }
            let want_equal = cc.relation == Relation::Equal;
            Ok(all.into_iter().filter(|t| (t[0] == t[1]) == want_equal).collect())
        }
        Relation::Allowed(tuples) => {
            if tuples.is_empty() {
                return Err(invalid(&cc.context, "allowed set is empty"));
            }
            for t in tuples {
                if t.len() != sets.len() {
                    return Err(Error::ArityMismatch {
                        context: cc.context.to_string(),
                        expected: sets.len(),
                        found: t.len(),
                    });
                }
                for (v, (q, set)) in t.iter().zip(cc.contents.iter().zip(&sets)) {
                    if set.index_of(v).is_none() {
                        return Err(Error::DomainMismatch {
                            content: q.to_string(),
                            context: cc.context.to_string(),
                            outcome: v.clone(),
                        });
                    }
                }
            }
            Ok(all.into_iter().filter(|t| tuples.contains(t)).collect())
        }
    }
}

fn sorted_contexts(spec: &EpistemicSpec) -> Result<Vec<&ContextConstraint>> {
    let mut ctxs: Vec<&ContextConstraint> = spec.contexts.iter().collect();
    ctxs.sort_by(|a, b| a.context.cmp(&b.context));
    if ctxs.is_empty() {
        return Err(Error::EmptySystem);
    }
    for w in ctxs.windows(2) {
        if w[0].context == w[1].context {
            return Err(Error::DuplicateContext(w[0].context.to_string()));
        }
    }
    Ok(ctxs)
}

/// All assignments satisfying every context constraint, in canonical order.
/// Values of one content may differ between contexts.
pub fn enumerate_variants(spec: &EpistemicSpec, cap: u128) -> Result<Vec<DeterministicVariant>> {
    let ctxs = sorted_contexts(spec)?;
    let mut space = 1u128;
    for cc in &ctxs {
        for q in &cc.contents {
            let size = spec
                .contents
                .iter()
                .find(|(id, _)| id == q)
                .map_or(1, |(_, set)| set.len());
            space = space.saturating_mul(size as u128);
        }
    }
    if space > cap {
        return Err(Error::CapExceeded {
            required: space,
            cap,
        });
    }

    let per_context: Vec<Vec<Vec<String>>> = ctxs
        .iter()
        .map(|cc| {
            let tuples = admissible(spec, cc)?;
            if tuples.is_empty() {
                return Err(Error::EmptyVariantSet(cc.context.to_string()));
            }
            Ok(tuples)
        })
        .collect::<Result<_>>()?;

    let mut variants = vec![BTreeMap::new()];
    for (cc, tuples) in ctxs.iter().zip(&per_context) {
        variants = variants
            .into_iter()
            .flat_map(|base| {
                tuples.iter().map(move |t| {
                    let mut a = base.clone();
                    for (q, v) in cc.contents.iter().zip(t) {
                        a.insert((q.clone(), cc.context.clone()), v.clone());
                    }
                    a
                })
            })
            .collect();
    }
    Ok(variants
        .into_iter()
        .map(|assignment| DeterministicVariant { assignment })
        .collect())
}

/// Mixes variants with equal weights.
pub fn uniform_mixture(spec: &EpistemicSpec, variants: &[DeterministicVariant]) -> Result<SystemSpec> {
    if variants.is_empty() {
        return Err(Error::EmptyVariantSet("<all>".to_string()));
    }
    let w = Rational::new(One::one(), variants.len().into());
    weighted_mixture(spec, variants, &vec![w; variants.len()])
}

/// Mixes variants with the given nonnegative weights summing to 1.
pub fn weighted_mixture(
    spec: &EpistemicSpec,
    variants: &[DeterministicVariant],
    weights: &[Rational],
) -> Result<SystemSpec> {
    if variants.is_empty() {
        return Err(Error::EmptyVariantSet("<all>".to_string()));
    }
    if weights.len() != variants.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} variants",
            weights.len(),
            variants.len()
        )));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::InvalidWeights("negative weight".to_string()));
    }
    let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
    if total != int(1) {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }

    let ctxs = sorted_contexts(spec)?;
    let mut contexts = Vec::with_capacity(ctxs.len());
    for cc in ctxs {
        let mut cells: BTreeMap<Vec<String>, Rational> = BTreeMap::new();
        for (variant, w) in variants.iter().zip(weights) {
            let tuple = cc
                .contents
                .iter()
                .map(|q| {
                    variant.value(q, &cc.context).map(str::to_string).ok_or_else(|| {
                        invalid(&cc.context, format!("variant leaves `{q}` unassigned"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            *cells.entry(tuple).or_insert_with(Rational::zero) += w;
        }
        contexts.push(ContextBlock {
            context: cc.context.clone(),
            contents: cc.contents.clone(),
            distribution: cells
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(outcomes, p)| Cell { outcomes, p })
                .collect(),
        });
    }
    Ok(SystemSpec {
        contents: spec.contents.clone(),
        contexts,
    })
}

/// The n-statement Liar: q_i says "q_{i+1} is true" for i < n, q_n says
/// "q_1 is false". Context i holds (q_i, q_{i+1 mod n}).
///
/// # Panics
/// If `n < 2`.
pub fn liar_system(n: usize) -> EpistemicSpec {
    assert!(n >= 2, "a Liar cycle needs at least two statements");
    let contents = (1..=n)
        .map(|i| (ContentId::new(format!("q{i}")), OutcomeSet::plus_minus()))
        .collect();
    let contexts = (1..=n)
        .map(|i| {
            let next = i % n + 1;
            // With two statements both contexts hold the same pair; the label
            // records the direction of inference.
            let label = if n == 2 {
                format!("c{i}:q{i}->q{next}")
            } else {
                format!("c{i}")
            };
            ContextConstraint {
                context: ContextId::new(label),
                contents: vec![ContentId::new(format!("q{i}")), ContentId::new(format!("q{next}"))],
                relation: if i < n {
                    Relation::Equal
                } else {
                    Relation::NotEqual
                },
            }
        })
        .collect();
    EpistemicSpec { contents, contexts }
}

/// Uniform mixture of all variants of [`liar_system`].
pub fn liar_mixture(n: usize) -> SystemSpec {
    let spec = liar_system(n);
    let variants = enumerate_variants(&spec, DEFAULT_VARIANT_CAP).expect("Liar constraints are satisfiable");
    uniform_mixture(&spec, &variants).expect("variants cover the Liar system")
}
