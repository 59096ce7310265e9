//! Shared generators and independent oracles for the integration tests.
//!
//! The oracles here rebuild the coupling polytope straight from the raw
//! `SystemSpec` and never touch the library's LP builder or solver.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cbd_core::rational::{int, ratio};
use cbd_core::{Cell, ContentId, OutcomeSet, Rational, SystemSpec};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn pm() -> OutcomeSet {
    OutcomeSet::plus_minus()
}

/// Random probability vector of length `n` with small denominators; zeros are common.
pub fn random_distribution(rng: &mut StdRng, n: usize) -> Vec<Rational> {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| ratio(x, total)).collect();
        }
    }
}

fn tuples(sets: &[&OutcomeSet]) -> Vec<Vec<String>> {
    let mut all = vec![Vec::new()];
    for set in sets {
        all = all
            .into_iter()
            .flat_map(|p: Vec<String>| {
                set.values().iter().map(move |v| {
                    let mut t = p.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    all
}

fn block_cells(spec: &SystemSpec, contents: &[ContentId], probs: &[Rational]) -> Vec<Cell> {
    let sets: Vec<&OutcomeSet> = contents
        .iter()
        .map(|q| &spec.contents.iter().find(|(id, _)| id == q).unwrap().1)
        .collect();
    tuples(&sets)
        .into_iter()
        .zip(probs)
        .filter(|(_, p)| !p.is_zero())
        .map(|(t, p)| Cell { outcomes: t, p: p.clone() })
        .collect()
}

pub fn atoms_of(spec: &SystemSpec) -> u128 {
    spec.contexts
        .iter()
        .flat_map(|b| &b.contents)
        .map(|q| spec.contents.iter().find(|(id, _)| id == q).unwrap().1.len() as u128)
        .product()
}

/// Random valid system with at most `max_atoms` coupling atoms.
pub fn random_system(rng: &mut StdRng, max_atoms: u128) -> SystemSpec {
    loop {
        let n_contents = rng.gen_range(1..=4);
        let n_contexts = rng.gen_range(1..=3);
        let mut spec = SystemSpec::new();
        for q in 0..n_contents {
            let set = if rng.gen_bool(0.8) {
                pm()
            } else {
                OutcomeSet::new(["a", "b", "c"])
            };
            spec = spec.with_content(format!("q{q}"), set);
        }
        for c in 0..n_contexts {
            let mut ids: Vec<usize> = (0..n_contents).collect();
            ids.shuffle(rng);
            let k = rng.gen_range(1..=n_contents.min(3));
            let contents: Vec<ContentId> =
                ids[..k].iter().map(|q| ContentId::new(format!("q{q}"))).collect();
            let size: usize = contents
                .iter()
                .map(|q| spec.contents.iter().find(|(id, _)| id == q).unwrap().1.len())
                .product();
            let probs = random_distribution(rng, size);
            let cells = block_cells(&spec, &contents, &probs);
            spec = spec.with_context(format!("c{c}"), contents, cells);
        }
        if atoms_of(&spec) <= max_atoms {
            return spec;
        }
    }
}

/// Rank-2 cyclic system of ±1 variables from two (++, +-, -+, --) tables.
pub fn c2_system(t1: &[Rational], t2: &[Rational]) -> SystemSpec {
    let cells = |t: &[Rational]| {
        [["+1", "+1"], ["+1", "-1"], ["-1", "+1"], ["-1", "-1"]]
            .iter()
            .zip(t)
            .map(|(o, p)| Cell::new(*o, p.clone()))
            .collect::<Vec<_>>()
    };
    SystemSpec::new()
        .with_content("q1", pm())
        .with_content("q2", pm())
        .with_context("c1", ["q1", "q2"], cells(t1))
        .with_context("c2", ["q1", "q2"], cells(t2))
}

pub fn random_c2(rng: &mut StdRng) -> SystemSpec {
    c2_system(&random_distribution(rng, 4), &random_distribution(rng, 4))
}

/// Binary table with the given expectations, if all four cells are nonnegative.
pub fn table_from_moments(x: &Rational, y: &Rational, xy: &Rational) -> Option<Vec<Rational>> {
    let one = int(1);
    let q = ratio(1, 4);
    let t = vec![
        (&one + x + y + xy) * &q,
        (&one + x - y - xy) * &q,
        (&one - x + y - xy) * &q,
        (&one - x - y + xy) * &q,
    ];
    t.iter().all(|p| !p.is_negative()).then_some(t)
}

/// Random rank-2 system whose two contexts share the same product expectation.
pub fn random_equal_correlation_c2(rng: &mut StdRng) -> SystemSpec {
    let t1 = random_distribution(rng, 4);
    let xy = &t1[0] - &t1[1] - &t1[2] + &t1[3];
    loop {
        let x = ratio(rng.gen_range(-8..=8), 8);
        let y = ratio(rng.gen_range(-8..=8), 8);
        if let Some(t2) = table_from_moments(&x, &y, &xy) {
            return c2_system(&t1, &t2);
        }
    }
}

/// Random deterministic system: up to 5 contents and 5 contexts.
pub fn random_deterministic(rng: &mut StdRng) -> SystemSpec {
    let n_contents = rng.gen_range(1..=5);
    let n_contexts = rng.gen_range(1..=5);
    let mut spec = SystemSpec::new();
    for q in 0..n_contents {
        let set = if rng.gen_bool(0.85) {
            pm()
        } else {
            OutcomeSet::new(["x", "y", "z"])
        };
        spec = spec.with_content(format!("q{q}"), set);
    }
    for c in 0..n_contexts {
        let mut ids: Vec<usize> = (0..n_contents).collect();
        ids.shuffle(rng);
        let k = rng.gen_range(1..=n_contents);
        let contents: Vec<ContentId> = ids[..k].iter().map(|q| ContentId::new(format!("q{q}"))).collect();
        let outcomes: Vec<String> = contents
            .iter()
            .map(|q| {
                let set = &spec.contents.iter().find(|(id, _)| id == q).unwrap().1;
                set.values()[rng.gen_range(0..set.len())].clone()
            })
            .collect();
        spec = spec.with_context(format!("c{c}"), contents, vec![Cell { outcomes, p: int(1) }]);
    }
    spec
}

/// Renames contents and contexts through random permutations and shuffles
/// each block's content order.
pub fn relabel(spec: &SystemSpec, rng: &mut StdRng) -> SystemSpec {
    let mut content_names: Vec<String> = (0..spec.contents.len()).map(|i| format!("k{i:02}")).collect();
    content_names.shuffle(rng);
    let mut context_names: Vec<String> = (0..spec.contexts.len()).map(|i| format!("z{i:02}")).collect();
    context_names.shuffle(rng);
    let rename: BTreeMap<ContentId, ContentId> = spec
        .contents
        .iter()
        .zip(&content_names)
        .map(|((id, _), n)| (id.clone(), ContentId::new(n.clone())))
        .collect();
    let mut out = SystemSpec::new();
    for (id, set) in &spec.contents {
        out = out.with_content(rename[id].clone(), set.clone());
    }
    for (block, name) in spec.contexts.iter().zip(&context_names) {
        let mut order: Vec<usize> = (0..block.contents.len()).collect();
        order.shuffle(rng);
        let contents: Vec<ContentId> = order.iter().map(|&i| rename[&block.contents[i]].clone()).collect();
        let cells = block
            .distribution
            .iter()
            .map(|c| Cell {
                outcomes: order.iter().map(|&i| c.outcomes[i].clone()).collect(),
                p: c.p.clone(),
            })
            .collect();
        out = out.with_context(name.clone(), contents, cells);
    }
    out
}

/// Coupling polytope rebuilt from the raw spec.
pub struct RawCoupling {
    /// (content, context) per variable.
    pub variables: Vec<(String, String)>,
    pub atoms: Vec<Vec<String>>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
}

pub fn raw_coupling(spec: &SystemSpec) -> RawCoupling {
    let mut variables = Vec::new();
    let mut sets = Vec::new();
    for b in &spec.contexts {
        for q in &b.contents {
            variables.push((q.to_string(), b.context.to_string()));
            sets.push(&spec.contents.iter().find(|(id, _)| id == q).unwrap().1);
        }
    }
    let atoms = tuples(&sets);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut offset = 0;
    for b in &spec.contexts {
        let k = b.contents.len();
        let block_sets: Vec<&OutcomeSet> = sets[offset..offset + k].to_vec();
        for t in tuples(&block_sets) {
            rows.push(
                atoms
                    .iter()
                    .map(|a| if a[offset..offset + k] == t[..] { int(1) } else { int(0) })
                    .collect(),
            );
            rhs.push(
                b.distribution
                    .iter()
                    .find(|c| c.outcomes == t)
                    .map_or_else(Rational::zero, |c| c.p.clone()),
            );
        }
        offset += k;
    }
    let cost = atoms
        .iter()
        .map(|a| {
            let mut n = 0;
            for i in 0..variables.len() {
                for j in i + 1..variables.len() {
                    if variables[i].0 == variables[j].0 && a[i] != a[j] {
                        n += 1;
                    }
                }
            }
            int(n)
        })
        .collect();
    RawCoupling { variables, atoms, rows, rhs, cost }
}

fn gauss_rank_and_basis(rows: &[Vec<Rational>]) -> Vec<usize> {
    let mut m: Vec<(usize, Vec<Rational>)> = rows.iter().cloned().enumerate().collect();
    let mut chosen = Vec::new();
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        if r == m.len() {
            break;
        }
        if let Some(p) = (r..m.len()).find(|&i| !m[i].1[col].is_zero()) {
            m.swap(r, p);
            for i in r + 1..m.len() {
                let f = &m[i].1[col] / &m[r].1[col];
                if f.is_zero() {
                    continue;
                }
                let pivot = m[r].1.clone();
                for (x, y) in m[i].1.iter_mut().zip(pivot) {
                    *x -= &f * y;
                }
            }
            chosen.push(m[r].0);
            r += 1;
        }
    }
    chosen
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    gauss_rank_and_basis(rows).len()
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                let (pr, pb) = (a[c].clone(), b[c].clone());
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
                b[i] -= &f * pb;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Minimum over all basic feasible solutions of the raw coupling polytope.
pub fn bfs_oracle(spec: &SystemSpec) -> Rational {
    let raw = raw_coupling(spec);
    let basis = gauss_rank_and_basis(&raw.rows);
    let r = basis.len();
    let n = raw.atoms.len();
    let mut best: Option<Rational> = None;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let a = basis
            .iter()
            .map(|&i| cols.iter().map(|&j| raw.rows[i][j].clone()).collect())
            .collect();
        let b = basis.iter().map(|&i| raw.rhs[i].clone()).collect();
        if let Some(x) = solve(a, b) {
            let full_ok = raw.rows.iter().zip(&raw.rhs).all(|(row, rhs)| {
                cols.iter().zip(&x).fold(Rational::zero(), |acc, (&j, xj)| acc + &row[j] * xj) == *rhs
            });
            if full_ok && x.iter().all(|v| !v.is_negative()) {
                let value = cols.iter().zip(&x).fold(Rational::zero(), |acc, (&j, xj)| acc + &raw.cost[j] * xj);
                if best.as_ref().is_none_or(|b| value < *b) {
                    best = Some(value);
                }
            }
        }
        // next combination
        let mut i = r;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cols[i] < n - r + i {
                cols[i] += 1;
                for j in i + 1..r {
                    cols[j] = cols[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    best.expect("coupling polytope is nonempty")
}

/// Parity oracle for Liar-type systems: a lower bound from the cheapest atom
/// compatible with every context's support, and an upper bound from an
/// explicit coupling. Returns both.
pub fn support_bounds(spec: &SystemSpec, explicit: &[(Vec<String>, Rational)]) -> (Rational, Option<Rational>) {
    let raw = raw_coupling(spec);
    let lower = (0..raw.atoms.len())
        .filter(|&a| {
            raw.rows
                .iter()
                .zip(&raw.rhs)
                .all(|(row, p)| row[a].is_zero() || !p.is_zero())
        })
        .map(|a| raw.cost[a].clone())
        .min()
        .expect("some atom is supported");
    let mut weights = vec![Rational::zero(); raw.atoms.len()];
    for (atom, w) in explicit {
        let idx = raw.atoms.iter().position(|a| a == atom).expect("atom exists");
        weights[idx] += w;
    }
    let feasible = raw.rows.iter().zip(&raw.rhs).all(|(row, p)| {
        row.iter().zip(&weights).fold(Rational::zero(), |acc, (r, w)| acc + r * w) == *p
    }) && weights.iter().all(|w| !w.is_negative());
    let upper = feasible.then(|| {
        weights
            .iter()
            .zip(&raw.cost)
            .fold(Rational::zero(), |acc, (w, c)| acc + w * c)
    });
    (lower, upper)
}

/// The two-atom coupling of an n-Liar mixture that lets only q1 disagree
/// between its two contexts. Variables are listed in raw spec order.
pub fn liar_explicit_coupling(spec: &SystemSpec) -> Vec<(Vec<String>, Rational)> {
    let raw = raw_coupling(spec);
    let last = spec.contexts.last().unwrap().context.to_string();
    ["+1", "-1"]
        .iter()
        .map(|&x| {
            let flip = if x == "+1" { "-1" } else { "+1" };
            let atom = raw
                .variables
                .iter()
                .map(|(q, c)| if q == "q1" && *c == last { flip.to_string() } else { x.to_string() })
                .collect();
            (atom, ratio(1, 2))
        })
        .collect()
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
