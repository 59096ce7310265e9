//! Content-context systems of finite-valued random variables.
//!
//! A [`SystemSpec`] is the raw content-context matrix as read from a file or
//! built in code. [`validate_system`] checks it and produces a
//! [`ValidatedSystem`], whose contexts and contents are held in lexicographic
//! order and whose context distributions are dense tables indexed by outcome
//! tuples. Everything downstream works on the validated form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Exact probability value.
pub type Probability = Rational;

/// What a random variable measures or responds to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentId(String);

/// The recorded conditions under which variables are observed together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(String);

macro_rules! label_impls {
    ($t:ident) => {
        impl $t {
            pub fn new(label: impl Into<String>) -> Self {
                Self(label.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

label_impls!(ContentId);
label_impls!(ContextId);

pub const PLUS: &str = "+1";
pub const MINUS: &str = "-1";

/// Ordered outcome labels of one content. The order fixes tuple indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutcomeSet(Vec<String>);

impl OutcomeSet {
    pub fn new<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(values.into_iter().map(Into::into).collect())
    }

    /// The `+1`, `-1` encoding used for dichotomous variables.
    pub fn plus_minus() -> Self {
        Self::new([PLUS, MINUS])
    }

    pub fn values(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, outcome: &str) -> Option<usize> {
        self.0.iter().position(|v| v == outcome)
    }

    pub fn is_plus_minus_one(&self) -> bool {
        self.0.len() == 2 && self.index_of(PLUS).is_some() && self.index_of(MINUS).is_some()
    }

    /// `+1` or `-1` for the outcome at `index`, if the set is the ±1 encoding.
    pub fn sign(&self, index: usize) -> Option<i64> {
        if !self.is_plus_minus_one() {
            return None;
        }
        match self.0.get(index).map(String::as_str) {
            Some(PLUS) => Some(1),
            Some(MINUS) => Some(-1),
            _ => None,
        }
    }
}

/// One entry of a context's joint distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub outcomes: Vec<String>,
    pub p: Probability,
}

impl Cell {
    pub fn new<S: Into<String>>(outcomes: impl IntoIterator<Item = S>, p: Probability) -> Self {
        Self {
            outcomes: outcomes.into_iter().map(Into::into).collect(),
            p,
        }
    }
}

/// A context together with the joint distribution of the variables it holds.
/// Outcome tuples follow the order of `contents`; missing tuples have probability 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextBlock {
    pub context: ContextId,
    pub contents: Vec<ContentId>,
    pub distribution: Vec<Cell>,
}

/// The raw content-context matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemSpec {
    pub contents: Vec<(ContentId, OutcomeSet)>,
    pub contexts: Vec<ContextBlock>,
}

impl SystemSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_content(mut self, id: impl Into<ContentId>, outcomes: OutcomeSet) -> Self {
        self.contents.push((id.into(), outcomes));
        self
    }

    pub fn with_context<C: Into<ContentId>>(
        mut self,
        id: impl Into<ContextId>,
        contents: impl IntoIterator<Item = C>,
        distribution: Vec<Cell>,
    ) -> Self {
        self.contexts.push(ContextBlock {
            context: id.into(),
            contents: contents.into_iter().map(Into::into).collect(),
            distribution,
        });
        self
    }
}

/// A validated context: content indices sorted, distribution stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    id: ContextId,
    contents: Vec<usize>,
    radices: Vec<usize>,
    table: Vec<Probability>,
}

impl Context {
    pub fn id(&self) -> &ContextId {
        &self.id
    }

    /// Indices into [`ValidatedSystem::contents`], ascending.
    pub fn contents(&self) -> &[usize] {
        &self.contents
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Dense joint table; the first content is the most significant digit.
    pub fn table(&self) -> &[Probability] {
        &self.table
    }

    pub fn position_of(&self, content: usize) -> Option<usize> {
        self.contents.iter().position(|&c| c == content)
    }

    /// Outcome-index tuples paired with their probabilities, in table order.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<usize>, &Probability)> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(|(i, p)| (decode(i, &self.radices), p))
    }
}

/// One random variable R_q^c, identified by indices into the validated system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub context: usize,
    pub content: usize,
}

/// A [`SystemSpec`] whose invariants have been checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedSystem {
    contents: Vec<(ContentId, OutcomeSet)>,
    contexts: Vec<Context>,
    content_contexts: Vec<Vec<usize>>,
}

impl ValidatedSystem {
    pub fn contents(&self) -> &[(ContentId, OutcomeSet)] {
        &self.contents
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn content_index(&self, id: &ContentId) -> Option<usize> {
        self.contents.binary_search_by(|(c, _)| c.cmp(id)).ok()
    }

    pub fn context_index(&self, id: &ContextId) -> Option<usize> {
        self.contexts.binary_search_by(|c| c.id.cmp(id)).ok()
    }

    pub fn content_id(&self, index: usize) -> &ContentId {
        &self.contents[index].0
    }

    pub fn outcomes(&self, content: usize) -> &OutcomeSet {
        &self.contents[content].1
    }

    /// Contexts (ascending) in which `content` appears.
    pub fn contexts_of(&self, content: usize) -> &[usize] {
        &self.content_contexts[content]
    }

    /// All variables, ordered by context and then by content.
    pub fn variables(&self) -> Vec<Variable> {
        self.contexts
            .iter()
            .enumerate()
            .flat_map(|(ci, ctx)| {
                ctx.contents.iter().map(move |&q| Variable {
                    context: ci,
                    content: q,
                })
            })
            .collect()
    }

    pub fn variable_label(&self, v: Variable) -> String {
        format!("{}@{}", self.contents[v.content].0, self.contexts[v.context].id)
    }

    /// Converts back to the raw form, listing only nonzero cells.
    pub fn to_spec(&self) -> SystemSpec {
        let contexts = self
            .contexts
            .iter()
            .map(|ctx| ContextBlock {
                context: ctx.id.clone(),
                contents: ctx.contents.iter().map(|&q| self.contents[q].0.clone()).collect(),
                distribution: ctx
                    .cells()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(tuple, p)| Cell {
                        outcomes: tuple
                            .iter()
                            .zip(&ctx.contents)
                            .map(|(&o, &q)| self.contents[q].1.values()[o].clone())
                            .collect(),
                        p: p.clone(),
                    })
                    .collect(),
            })
            .collect();
        SystemSpec {
            contents: self.contents.clone(),
            contexts,
        }
    }

    fn locate(&self, q: &ContentId, c: &ContextId) -> Result<(usize, usize)> {
        let not_in = || Error::VariableNotInContext {
            content: q.to_string(),
            context: c.to_string(),
        };
        let ci = self.context_index(c).ok_or_else(not_in)?;
        let qi = self.content_index(q).ok_or_else(not_in)?;
        let pos = self.contexts[ci].position_of(qi).ok_or_else(not_in)?;
        Ok((ci, pos))
    }

    /// Marginal of the variable at position `pos` of context `ci`.
    pub(crate) fn marginal_at(&self, ci: usize, pos: usize) -> Marginal {
        let ctx = &self.contexts[ci];
        let q = ctx.contents[pos];
        let mut probs = vec![Rational::zero(); ctx.radices[pos]];
        for (tuple, p) in ctx.cells() {
            probs[tuple[pos]] += p;
        }
        Marginal {
            content: self.contents[q].0.clone(),
            context: ctx.id.clone(),
            outcomes: self.contents[q].1.clone(),
            probs,
        }
    }
}

pub(crate) fn decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d = index % r;
        index /= r;
    }
    digits
}

pub(crate) fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Checks every invariant of `raw` and builds the canonical validated form.
pub fn validate_system(raw: &SystemSpec) -> Result<ValidatedSystem> {
    if raw.contexts.is_empty() {
        return Err(Error::EmptySystem);
    }

    let mut registry: BTreeMap<ContentId, OutcomeSet> = BTreeMap::new();
    for (id, outcomes) in &raw.contents {
        if id.as_str().is_empty() {
            return Err(Error::EmptyId);
        }
        let mut seen = BTreeSet::new();
        for v in outcomes.values() {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateOutcome {
                    content: id.to_string(),
                    outcome: v.clone(),
                });
            }
        }
        if outcomes.len() < 2 {
            return Err(Error::OutcomeSetTooSmall(id.to_string()));
        }
        if registry.insert(id.clone(), outcomes.clone()).is_some() {
            return Err(Error::DuplicateContent(id.to_string()));
        }
    }
    let contents: Vec<(ContentId, OutcomeSet)> = registry.into_iter().collect();
    let index_of = |id: &ContentId| contents.binary_search_by(|(c, _)| c.cmp(id)).ok();

    let mut seen_contexts = BTreeSet::new();
    let mut contexts = Vec::with_capacity(raw.contexts.len());
    for block in &raw.contexts {
        let cname = block.context.to_string();
        if cname.is_empty() {
            return Err(Error::EmptyId);
        }
        if !seen_contexts.insert(block.context.clone()) {
            return Err(Error::DuplicateContext(cname));
        }
        if block.contents.is_empty() {
            return Err(Error::EmptyContext { context: cname });
        }

        // Content indices in the order given by the block.
        let mut given = Vec::with_capacity(block.contents.len());
        for q in &block.contents {
            let qi = index_of(q).ok_or_else(|| Error::UnknownContent {
                context: cname.clone(),
                content: q.to_string(),
            })?;
            if given.contains(&qi) {
                return Err(Error::DuplicateContentInContext {
                    context: cname.clone(),
                    content: q.to_string(),
                });
            }
            given.push(qi);
        }
        let mut sorted = given.clone();
        sorted.sort_unstable();
        let radices: Vec<usize> = sorted.iter().map(|&q| contents[q].1.len()).collect();
        let size: usize = radices.iter().product();
        let mut table = vec![Rational::zero(); size];
        let mut filled = vec![false; size];

        let mut sum = Rational::zero();
        for cell in &block.distribution {
            if cell.outcomes.len() != given.len() {
                return Err(Error::ArityMismatch {
                    context: cname.clone(),
                    expected: given.len(),
                    found: cell.outcomes.len(),
                });
            }
            let mut digits = vec![0; sorted.len()];
            for (value, &qi) in cell.outcomes.iter().zip(&given) {
                let o = contents[qi].1.index_of(value).ok_or_else(|| Error::DomainMismatch {
                    content: contents[qi].0.to_string(),
                    context: cname.clone(),
                    outcome: value.clone(),
                })?;
                let pos = sorted.binary_search(&qi).expect("content is in its own context");
                digits[pos] = o;
            }
            if cell.p < Rational::zero() || cell.p > Rational::one() {
                return Err(Error::ProbabilityOutOfRange {
                    context: cname.clone(),
                    value: cell.p.clone(),
                });
            }
            let at = encode(&digits, &radices);
            if filled[at] {
                return Err(Error::DuplicateCell {
                    context: cname.clone(),
                    tuple: cell.outcomes.clone(),
                });
            }
            filled[at] = true;
            table[at] = cell.p.clone();
            sum += &cell.p;
        }
        if sum != int(1) {
            return Err(Error::ProbabilitySumMismatch { context: cname, sum });
        }
        contexts.push(Context {
            id: block.context.clone(),
            contents: sorted,
            radices,
            table,
        });
    }
    contexts.sort_by(|a, b| a.id.cmp(&b.id));

    let mut content_contexts = vec![Vec::new(); contents.len()];
    for (ci, ctx) in contexts.iter().enumerate() {
        for &q in &ctx.contents {
            content_contexts[q].push(ci);
        }
    }

    Ok(ValidatedSystem {
        contents,
        contexts,
        content_contexts,
    })
}

/// Distribution of a single variable R_q^c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marginal {
    pub content: ContentId,
    pub context: ContextId,
    pub outcomes: OutcomeSet,
    /// Aligned with `outcomes`.
    pub probs: Vec<Probability>,
}

impl Marginal {
    pub fn prob(&self, outcome: &str) -> Option<&Probability> {
        self.outcomes.index_of(outcome).map(|i| &self.probs[i])
    }

    pub fn label(&self) -> String {
        format!("{}@{}", self.content, self.context)
    }
}

/// Distribution of R_q^c, summing the context's joint table over the other contents.
pub fn marginal(sys: &ValidatedSystem, q: &ContentId, c: &ContextId) -> Result<Marginal> {
    let (ci, pos) = sys.locate(q, c)?;
    Ok(sys.marginal_at(ci, pos))
}

/// All variables sharing one content, ordered by context label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub content: ContentId,
    pub members: Vec<(ContextId, Marginal)>,
}

impl Connection {
    pub fn is_singleton(&self) -> bool {
        self.members.len() < 2
    }

    /// Member index pairs (i < j), in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.members.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn is_consistent(&self) -> bool {
        self.members.windows(2).all(|w| w[0].1.probs == w[1].1.probs)
    }
}

/// One connection per content that occurs in at least one context.
pub fn connections(sys: &ValidatedSystem) -> Vec<Connection> {
    (0..sys.contents.len())
        .filter(|&q| !sys.content_contexts[q].is_empty())
        .map(|q| Connection {
            content: sys.contents[q].0.clone(),
            members: sys.content_contexts[q]
                .iter()
                .map(|&ci| {
                    let pos = sys.contexts[ci].position_of(q).expect("indexed content");
                    (sys.contexts[ci].id.clone(), sys.marginal_at(ci, pos))
                })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub connections: Vec<(ContentId, bool)>,
    pub global: bool,
}

/// Whether every connection has identical member marginals.
pub fn is_consistently_connected(sys: &ValidatedSystem) -> ConsistencyReport {
    let per: Vec<(ContentId, bool)> = connections(sys)
        .into_iter()
        .map(|c| {
            let ok = c.is_consistent();
            (c.content, ok)
        })
        .collect();
    let global = per.iter().all(|(_, ok)| *ok);
    ConsistencyReport {
        connections: per,
        global,
    }
}

/// Expected product of the ±1 variables `qs` within context `c`.
pub fn expectation(sys: &ValidatedSystem, c: &ContextId, qs: &[ContentId]) -> Result<Rational> {
    let mut positions = Vec::with_capacity(qs.len());
    let mut ci = 0;
    for q in qs {
        let (at, pos) = sys.locate(q, c)?;
        let qi = sys.contexts[at].contents[pos];
        if !sys.contents[qi].1.is_plus_minus_one() {
            return Err(Error::NotPlusMinusOne(q.to_string()));
        }
        ci = at;
        positions.push((pos, qi));
    }
    if qs.is_empty() {
        sys.context_index(c).ok_or_else(|| Error::UnknownContext(c.to_string()))?;
        return Ok(int(1));
    }
    let ctx = &sys.contexts[ci];
    let mut total = Rational::zero();
    for (tuple, p) in ctx.cells() {
        if p.is_zero() {
            continue;
        }
        let sign: i64 = positions
            .iter()
            .map(|&(pos, qi)| sys.contents[qi].1.sign(tuple[pos]).expect("checked ±1"))
            .product();
        if sign > 0 {
            total += p;
        } else {
            total -= p;
        }
    }
    Ok(total)
}
