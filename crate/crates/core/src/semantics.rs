//! Reducts, immediate consequence and answer set checks on ground programs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::grounder::{ground, GroundProgram, GroundRule};
use crate::model::{for_each_tuple, Atom, Literal, OpenInterpretation, Program, Rule};

/// Rule of a reduct: optional head atom and a positive body of regular atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ReductRule {
    pub name: crate::Symbol,
    pub head: Option<Atom>,
    pub body: BTreeSet<Atom>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReductProgram {
    pub rules: Vec<ReductRule>,
}

impl ReductProgram {
    pub fn as_set(&self) -> BTreeSet<ReductRule> {
        self.rules.iter().cloned().collect()
    }
}

fn holds(a: &Atom, m: &BTreeSet<Atom>) -> bool {
    a.eval_equality().unwrap_or_else(|| m.contains(a))
}

/// Replace each ground generalized literal by the consequents of the
/// instances whose antecedent holds in `m`.
pub fn geli_reduct(g: &GroundProgram, m: &OpenInterpretation) -> GroundProgram {
    let rules = g
        .rules
        .iter()
        .map(|gr| GroundRule { rule: geli_rule(&gr.rule, m), source: gr.source, binding: gr.binding.clone() })
        .collect();
    GroundProgram { rules }
}

fn geli_rule(r: &Rule, m: &OpenInterpretation) -> Rule {
    let mut body = r.body.clone();
    for gl in &r.glits {
        for_each_tuple(m.universe.elements(), gl.bound.len(), |vals| {
            let (ante, cons) = gl.instantiate(vals);
            if ante.eval(&|a| holds(a, &m.atoms)) {
                body.insert(Literal::pos(cons));
            }
            true
        });
    }
    Rule { name: r.name.clone(), head: r.head.clone(), body, glits: Default::default() }
}

/// Rule-wise reduct: drop rules whose negative parts are violated by `m`,
/// keep positive bodies, evaluate equalities eagerly. Generalized literals
/// must have been removed beforehand.
pub fn gl_reduct(g: &GroundProgram, m: &BTreeSet<Atom>) -> ReductProgram {
    let rules = g.iter().filter_map(|r| gl_rule(r, m)).collect();
    ReductProgram { rules }
}

fn gl_rule(r: &Rule, m: &BTreeSet<Atom>) -> Option<ReductRule> {
    debug_assert!(r.glits.is_empty(), "reduct of a rule with generalized literals");
    if !r.head_neg().all(|a| holds(a, m)) || r.body_neg().any(|a| holds(a, m)) {
        return None;
    }
    let mut body = BTreeSet::new();
    for a in r.body_pos() {
        match a.eval_equality() {
            Some(false) => return None,
            Some(true) => {}
            None => {
                body.insert(a.clone());
            }
        }
    }
    Some(ReductRule { name: r.name.clone(), head: r.head_atom().cloned(), body })
}

/// Reduct that keeps generalized literals in place (treated as positive).
pub fn gl_reduct_keep_glits(g: &GroundProgram, m: &BTreeSet<Atom>) -> GroundProgram {
    let rules = g
        .rules
        .iter()
        .filter(|gr| gr.rule.head_neg().all(|a| holds(a, m)) && !gr.rule.body_neg().any(|a| holds(a, m)))
        .map(|gr| {
            let r = &gr.rule;
            let rule = Rule {
                name: r.name.clone(),
                head: r.head_pos().cloned().map(Literal::pos).collect(),
                body: r.body.iter().filter(|l| !l.negated).cloned().collect(),
                glits: r.glits.clone(),
            };
            GroundRule { rule, source: gr.source, binding: gr.binding.clone() }
        })
        .collect();
    GroundProgram { rules }
}

/// Immediate consequence operator.
pub fn t_step(r: &ReductProgram, m: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    r.rules
        .iter()
        .filter(|rule| rule.body.iter().all(|a| m.contains(a)))
        .filter_map(|rule| rule.head.clone())
        .collect()
}

pub fn least_model(r: &ReductProgram) -> BTreeSet<Atom> {
    least_model_stages(r).pop().unwrap_or_default()
}

/// The chain T^1, T^2, ... up to and including the fixpoint.
pub fn least_model_stages(r: &ReductProgram) -> Vec<BTreeSet<Atom>> {
    let mut stages = Vec::new();
    let mut cur = BTreeSet::new();
    loop {
        let next = t_step(r, &cur);
        if next == cur {
            stages.push(cur);
            return stages;
        }
        stages.push(next.clone());
        cur = next;
    }
}

fn constraints_hold(r: &ReductProgram, m: &BTreeSet<Atom>) -> bool {
    r.rules.iter().filter(|x| x.head.is_none()).all(|x| !x.body.iter().all(|a| m.contains(a)))
}

/// Answer set test for a ground program without generalized literals.
pub fn is_answer_set(g: &GroundProgram, m: &BTreeSet<Atom>) -> bool {
    let red = gl_reduct(g, m);
    constraints_hold(&red, m) && least_model(&red) == *m
}

fn in_base(p: &Program, m: &OpenInterpretation) -> bool {
    let preds = p.predicates();
    m.atoms.iter().all(|a| {
        a.is_ground()
            && a.name().and_then(|n| preds.get(n)).copied() == Some(a.arity())
            && a.args.iter().all(|t| m.universe.contains(t.symbol()))
    })
}

/// Open answer set test: ground over the universe, remove generalized
/// literals with respect to `m`, then check the reduct.
pub fn is_open_answer_set(p: &Program, m: &OpenInterpretation) -> Result<bool> {
    if !in_base(p, m) {
        return Ok(false);
    }
    let g = ground(p, &m.universe)?;
    Ok(is_answer_set(&geli_reduct(&g, m), &m.atoms))
}

/// Intermediate artefacts of an open answer set check, for tracing.
#[derive(Clone, Debug)]
pub struct CheckTrace {
    pub ground: GroundProgram,
    pub geli: GroundProgram,
    pub reduct: ReductProgram,
    pub stages: Vec<BTreeSet<Atom>>,
    pub constraints_ok: bool,
    pub is_answer_set: bool,
}

pub fn check_with_trace(p: &Program, m: &OpenInterpretation) -> Result<CheckTrace> {
    let g = ground(p, &m.universe)?;
    let geli = geli_reduct(&g, m);
    let reduct = gl_reduct(&geli, &m.atoms);
    let stages = least_model_stages(&reduct);
    let constraints_ok = constraints_hold(&reduct, &m.atoms);
    let lm = stages.last().cloned().unwrap_or_default();
    let is_answer_set = in_base(p, m) && constraints_ok && lm == m.atoms;
    Ok(CheckTrace { ground: g, geli, reduct, stages, constraints_ok, is_answer_set })
}

/// First stage of the least model iteration at which each atom of `m`
/// appears. Atoms never derived are absent from the map.
pub fn derivation_depths(p: &Program, m: &OpenInterpretation) -> Result<BTreeMap<Atom, usize>> {
    let g = ground(p, &m.universe)?;
    let red = gl_reduct(&geli_reduct(&g, m), &m.atoms);
    let mut depths = BTreeMap::new();
    for (i, stage) in least_model_stages(&red).iter().enumerate() {
        for a in stage {
            depths.entry(a.clone()).or_insert(i + 1);
        }
    }
    depths.retain(|a, _| m.atoms.contains(a));
    Ok(depths)
}

/// Compare the two orders of applying the generalized-literal reduct and
/// the negation reduct. Both yield sets of rules over regular atoms.
pub fn reduct_commute_check(g: &GroundProgram, m: &OpenInterpretation) -> bool {
    let geli_first = gl_reduct(&geli_reduct(g, m), &m.atoms).as_set();
    let kept = geli_reduct(&gl_reduct_keep_glits(g, &m.atoms), m);
    let gl_first: BTreeSet<ReductRule> = kept
        .iter()
        .filter_map(|r| {
            let mut body = BTreeSet::new();
            for a in r.body_pos() {
                match a.eval_equality() {
                    Some(false) => return None,
                    Some(true) => {}
                    None => {
                        body.insert(a.clone());
                    }
                }
            }
            Some(ReductRule { name: r.name.clone(), head: r.head_atom().cloned(), body })
        })
        .collect();
    geli_first == gl_first
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Universe;
    use crate::parser::{parse_atoms, parse_program};

    fn interp(u: &[&str], atoms: &str) -> OpenInterpretation {
        OpenInterpretation::new(Universe::from_names(u).unwrap(), parse_atoms(atoms).unwrap())
    }

    #[test]
    fn simple_negation() {
        let p = parse_program("p :- not q. q :- not p.").unwrap();
        assert!(is_open_answer_set(&p, &interp(&["a"], "p")).unwrap());
        assert!(is_open_answer_set(&p, &interp(&["a"], "q")).unwrap());
        assert!(!is_open_answer_set(&p, &interp(&["a"], "p, q")).unwrap());
        assert!(!is_open_answer_set(&p, &interp(&["a"], "")).unwrap());
    }

    #[test]
    fn glit_reduct_uses_universe() {
        let p = parse_program("ok :- forall X (d(X) => e(X)). d(X) | not d(X). e(a).").unwrap();
        assert!(is_open_answer_set(&p, &interp(&["a", "b"], "d(a), e(a), ok")).unwrap());
        assert!(!is_open_answer_set(&p, &interp(&["a", "b"], "d(a), d(b), e(a), ok")).unwrap());
        assert!(is_open_answer_set(&p, &interp(&["a", "b"], "d(a), d(b), e(a)")).unwrap());
    }

    #[test]
    fn depths_are_stages() {
        let p = parse_program("a. b :- a. c :- b.").unwrap();
        let d = derivation_depths(&p, &interp(&["x"], "a, b, c")).unwrap();
        assert_eq!(d.values().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn atoms_outside_base_rejected() {
        let p = parse_program("p(a).").unwrap();
        assert!(!is_open_answer_set(&p, &interp(&["a"], "p(a), zz")).unwrap());
    }
}
