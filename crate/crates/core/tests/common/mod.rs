//! Brute-force oracles written directly from the definitions.
#![allow(dead_code)]

use std::collections::BTreeSet;

use oasp_core::grounder::{ground, herbrand_base};
use oasp_core::model::for_each_tuple;
use oasp_core::random::{rng, TestRng};
use oasp_core::{Atom, Program, Universe};

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn seeded(seed: u64) -> TestRng {
    rng(seed)
}

fn holds(a: &Atom, m: &BTreeSet<Atom>) -> bool {
    a.eval_equality().unwrap_or_else(|| m.contains(a))
}

/// Positive rules `(head, body)` left after removing generalized literals
/// and negation as failure with respect to `m`.
pub fn reduct(p: &Program, u: &Universe, m: &BTreeSet<Atom>) -> Vec<(Option<Atom>, Vec<Atom>)> {
    let mut out = Vec::new();
    'rules: for r in ground(p, u).unwrap().iter() {
        if r.body_neg().any(|a| holds(a, m)) || r.head_neg().any(|a| !holds(a, m)) {
            continue;
        }
        let mut body = Vec::new();
        for a in r.body_pos() {
            match a.eval_equality() {
                Some(true) => {}
                Some(false) => continue 'rules,
                None => body.push(a.clone()),
            }
        }
        for g in &r.glits {
            let mut blocked = false;
            for_each_tuple(u.elements(), g.bound.len(), |vals| {
                let (ante, cons) = g.instantiate(vals);
                if ante.eval(&|a: &Atom| holds(a, m)) {
                    match cons.eval_equality() {
                        Some(true) => {}
                        Some(false) => blocked = true,
                        None => body.push(cons),
                    }
                }
                !blocked
            });
            if blocked {
                continue 'rules;
            }
        }
        out.push((r.head_pos().next().cloned(), body));
    }
    out
}

fn is_model(rules: &[(Option<Atom>, Vec<Atom>)], m: &BTreeSet<Atom>) -> bool {
    rules.iter().all(|(h, b)| !b.iter().all(|a| m.contains(a)) || h.as_ref().is_some_and(|h| m.contains(h)))
}

fn subsets(base: &[Atom]) -> impl Iterator<Item = BTreeSet<Atom>> + '_ {
    assert!(base.len() <= 20, "oracle limited to 20 atoms");
    (0u32..(1 << base.len())).map(move |mask| {
        base.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone()).collect()
    })
}

/// `m` is a minimal model of its own reduct: checked against every subset.
pub fn is_answer_set(p: &Program, u: &Universe, m: &BTreeSet<Atom>) -> bool {
    let base = herbrand_base(p, u).unwrap();
    if !m.is_subset(&base) {
        return false;
    }
    let red = reduct(p, u, m);
    if !is_model(&red, m) {
        return false;
    }
    let atoms: Vec<Atom> = m.iter().cloned().collect();
    let minimal = subsets(&atoms).all(|n| n.len() == m.len() || !is_model(&red, &n));
    minimal
}

/// All answer sets over `u` by subset enumeration of the Herbrand base.
pub fn answer_sets(p: &Program, u: &Universe) -> BTreeSet<BTreeSet<Atom>> {
    let base: Vec<Atom> = herbrand_base(p, u).unwrap().into_iter().collect();
    subsets(&base).filter(|m| is_answer_set(p, u, m)).collect()
}

pub fn base_size(p: &Program, u: &Universe) -> usize {
    herbrand_base(p, u).map(|b| b.len()).unwrap_or(usize::MAX)
}
