//! Stratified Datalog with generalized literals of the form
//! `forall Y (a => b)`: stratification, stratum-wise least fixed point
//! evaluation over input structures, queries and the LITE class checks.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grounder::ground;
use crate::model::{for_each_tuple, Atom, BoolFormula, Program, Rule, Symbol, Term, Universe};
use crate::semantics::{least_model, ReductProgram, ReductRule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedProgram {
    pub program: Program,
    /// Stratum (from 1) of every head predicate.
    pub strata: BTreeMap<Symbol, usize>,
    pub count: usize,
}

impl StratifiedProgram {
    /// Rules whose head predicate lives in stratum `i`.
    pub fn stratum_rules(&self, i: usize) -> Vec<&Rule> {
        self.program.rules.iter().filter(|r| self.stratum_of_rule(r) == i).collect()
    }

    fn stratum_of_rule(&self, r: &Rule) -> usize {
        r.head_atom().and_then(|a| a.name()).map_or(0, |q| self.strata[q])
    }

    /// Predicates used but not defined in stratum `i`.
    pub fn edb(&self, i: usize) -> BTreeSet<Symbol> {
        let rules = self.stratum_rules(i);
        let heads: BTreeSet<Symbol> = rules.iter().filter_map(|r| r.head_atom()?.name().cloned()).collect();
        rules
            .iter()
            .flat_map(|r| r.atoms())
            .filter_map(|a| a.name().cloned())
            .filter(|q| !heads.contains(q))
            .collect()
    }

    pub fn head_predicates(&self) -> BTreeSet<Symbol> {
        self.strata.keys().cloned().collect()
    }
}

/// Extensional relations over a domain; equality is always the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InputStructure {
    pub domain: BTreeSet<Symbol>,
    pub facts: BTreeSet<Atom>,
}

impl InputStructure {
    /// Active domain of the facts.
    pub fn from_facts(facts: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let facts: BTreeSet<Atom> = facts.into_iter().collect();
        if let Some(a) = facts.iter().find(|a| !a.is_ground() || a.is_equality()) {
            return Err(Error::Invalid(format!("input fact {a:?} must be a ground non-equality atom")));
        }
        let domain = facts.iter().flat_map(|a| a.constants()).collect();
        Ok(InputStructure { domain, facts })
    }

    /// Only the identity relation over `u`.
    pub fn identity(u: &Universe) -> Self {
        InputStructure { domain: u.elements().iter().cloned().collect(), facts: BTreeSet::new() }
    }

    /// Equality atoms `x = x` of the identity relation.
    pub fn identity_atoms(&self) -> BTreeSet<Atom> {
        self.domain.iter().map(|x| Atom::eq(Term::Const(x.clone()), Term::Const(x.clone()))).collect()
    }
}

/// Dependency edges `(body predicate, head predicate, strict)`.
fn dependencies(p: &Program) -> Vec<(Symbol, Symbol, bool)> {
    let mut out = Vec::new();
    for r in &p.rules {
        let Some(h) = r.head_atom().and_then(|a| a.name()).cloned() else { continue };
        for l in &r.body {
            if let Some(q) = l.atom.name() {
                out.push((q.clone(), h.clone(), l.negated));
            }
        }
        for g in &r.glits {
            for a in g.antecedent.atoms() {
                if let Some(q) = a.name() {
                    out.push((q.clone(), h.clone(), true));
                }
            }
            if let Some(q) = g.consequent.name() {
                out.push((q.clone(), h.clone(), false));
            }
        }
    }
    out
}

fn check_datalog(p: &Program) -> Result<()> {
    for r in &p.rules {
        let single = r.head.len() == 1 && r.head_atom().is_some();
        if !single {
            return Err(Error::Invalid(format!("rule {} is not a Datalog rule: head must be one atom", r.name)));
        }
        for g in &r.glits {
            let BoolFormula::Atom(a) = &g.antecedent else {
                return Err(Error::Invalid(format!("rule {}: antecedent must be a single atom", r.name)));
            };
            if !g.consequent.vars().is_subset(&a.vars()) {
                return Err(Error::Invalid(format!(
                    "rule {}: consequent variables must occur in the antecedent",
                    r.name
                )));
            }
        }
    }
    Ok(())
}

/// Least strata assignment: positive dependencies may stay in the same
/// stratum, negated ones and antecedents must be strictly lower.
pub fn stratify(p: &Program) -> Result<StratifiedProgram> {
    check_datalog(p)?;
    let heads: BTreeSet<Symbol> = p.rules.iter().filter_map(|r| r.head_atom()?.name().cloned()).collect();
    let deps = dependencies(p);
    let mut level: BTreeMap<Symbol, usize> = heads.iter().map(|h| (h.clone(), 1)).collect();
    let limit = heads.len();
    loop {
        let mut changed = false;
        for (b, h, strict) in &deps {
            let base = level.get(b).copied().unwrap_or(0);
            let need = if *strict { base + 1 } else { base };
            if level[h] < need {
                if need > limit {
                    return Err(Error::NotStratifiable(format!("predicate {h} depends negatively on itself")));
                }
                level.insert(h.clone(), need);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let used: BTreeSet<usize> = level.values().copied().collect();
    let rank: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &l)| (l, i + 1)).collect();
    let strata: BTreeMap<Symbol, usize> = level.into_iter().map(|(h, l)| (h, rank[&l])).collect();
    Ok(StratifiedProgram { program: p.clone(), count: rank.len(), strata })
}

/// True when no head predicate depends, directly or through other
/// predicates, on itself.
pub fn is_recursion_free(p: &Program) -> Result<bool> {
    let mut g = DiGraph::<Symbol, ()>::new();
    let mut idx = BTreeMap::new();
    let mut node = |g: &mut DiGraph<Symbol, ()>, s: &Symbol| *idx.entry(s.clone()).or_insert_with(|| g.add_node(s.clone()));
    for (b, h, _) in dependencies(p) {
        let (x, y) = (node(&mut g, &b), node(&mut g, &h));
        g.add_edge(x, y, ());
    }
    Ok(!is_cyclic_directed(&g))
}

/// Result of stratum-wise evaluation: the structures after each stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LfpModel {
    pub domain: BTreeSet<Symbol>,
    /// `stages[0]` is the input, `stages[i]` the structure after stratum `i`.
    pub stages: Vec<BTreeSet<Atom>>,
}

impl LfpModel {
    pub fn atoms(&self) -> &BTreeSet<Atom> {
        self.stages.last().expect("stage 0 always present")
    }
}

fn holds(a: &Atom, m: &BTreeSet<Atom>) -> bool {
    a.eval_equality().unwrap_or_else(|| m.contains(a))
}

/// Evaluate stratum by stratum over the input domain extended by the
/// program constants. Generalized literals expand to the conjunction of
/// consequents whose antecedent holds in the lower strata.
pub fn lfp_model(p: &StratifiedProgram, input: &InputStructure) -> Result<LfpModel> {
    let heads = p.head_predicates();
    if let Some(a) = input.facts.iter().find(|a| a.name().is_some_and(|q| heads.contains(q))) {
        return Err(Error::Invalid(format!("input defines head predicate {}", a.name().unwrap())));
    }
    let mut domain = input.domain.clone();
    domain.extend(p.program.constants());
    domain.extend(input.facts.iter().flat_map(|a| a.constants()));
    if domain.is_empty() {
        return Err(Error::Universe("empty domain".into()));
    }
    let universe = Universe::new(domain.iter().cloned())?;
    let mut current = input.facts.clone();
    let mut stages = vec![current.clone()];
    for i in 1..=p.count {
        let sub = Program { rules: p.stratum_rules(i).into_iter().cloned().collect() };
        let mut rules = Vec::new();
        for gr in ground(&sub, &universe)?.rules {
            let r = gr.rule;
            if r.body_neg().any(|a| holds(a, &current)) {
                continue;
            }
            let mut body = BTreeSet::new();
            let mut blocked = false;
            for a in r.body_pos() {
                match a.eval_equality() {
                    Some(true) => {}
                    Some(false) => blocked = true,
                    None => {
                        body.insert(a.clone());
                    }
                }
            }
            for g in &r.glits {
                for_each_tuple(universe.elements(), g.bound.len(), |vals| {
                    let (ante, cons) = g.instantiate(vals);
                    if ante.eval(&|a: &Atom| holds(a, &current)) {
                        match cons.eval_equality() {
                            Some(true) => {}
                            Some(false) => blocked = true,
                            None => {
                                body.insert(cons);
                            }
                        }
                    }
                    true
                });
            }
            if !blocked {
                rules.push(ReductRule { name: r.name.clone(), head: r.head_atom().cloned(), body });
            }
        }
        for a in &current {
            rules.push(ReductRule { name: Symbol::new("#input"), head: Some(a.clone()), body: BTreeSet::new() });
        }
        let next = least_model(&ReductProgram { rules });
        debug_assert!(next.is_superset(&current));
        debug_assert!(next
            .difference(&current)
            .all(|a| a.name().is_some_and(|q| p.strata.get(q) == Some(&i))));
        current = next;
        stages.push(current.clone());
    }
    Ok(LfpModel { domain, stages })
}

/// Tuples of `q` in the least fixed point model.
pub fn eval_query(p: &StratifiedProgram, q: &str, input: &InputStructure) -> Result<BTreeSet<Vec<Symbol>>> {
    let q = Symbol::new(q);
    let known = p.program.predicates().contains_key(&q) || input.facts.iter().any(|a| a.name() == Some(&q));
    if !known {
        return Err(Error::UnknownPredicate(q.to_string()));
    }
    let m = lfp_model(p, input)?;
    Ok(m
        .atoms()
        .iter()
        .filter(|a| a.name() == Some(&q))
        .map(|a| a.args.iter().map(|t| t.symbol().clone()).collect())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LiteClass {
    /// Recursion-free with every rule guarded.
    #[serde(rename = "LITER")]
    LiteR,
    /// Every rule guarded.
    #[serde(rename = "LITEM")]
    LiteM,
    /// Every rule monadic or guarded.
    #[serde(rename = "LITE")]
    Lite,
}

impl std::fmt::Display for LiteClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LiteClass::LiteR => "LITER",
            LiteClass::LiteM => "LITEM",
            LiteClass::Lite => "LITE",
        })
    }
}

/// Free variables per literal of the body and head, generalized literals included.
fn literal_var_sets(r: &Rule) -> Vec<BTreeSet<Symbol>> {
    let mut out: Vec<BTreeSet<Symbol>> = r.head.iter().chain(&r.body).map(|l| l.atom.vars()).collect();
    out.extend(r.glits.iter().map(|g| g.free_vars()));
    out
}

pub fn is_monadic_rule(r: &Rule) -> bool {
    literal_var_sets(r).iter().all(|vs| vs.len() <= 1)
}

pub fn is_guarded_datalog_rule(r: &Rule) -> bool {
    let vars: BTreeSet<Symbol> = literal_var_sets(r).into_iter().flatten().collect();
    vars.is_empty() || r.body_pos().any(|a| !a.is_equality() && vars.is_subset(&a.vars()))
}

/// Strongest LITE class of `p`, or `None` if it is not a stratified
/// Datalog program with monadic or guarded rules.
pub fn check_lite_class(p: &Program) -> Option<LiteClass> {
    stratify(p).ok()?;
    let guarded = p.rules.iter().all(is_guarded_datalog_rule);
    if guarded {
        if is_recursion_free(p).unwrap_or(false) {
            return Some(LiteClass::LiteR);
        }
        return Some(LiteClass::LiteM);
    }
    p.rules.iter().all(|r| is_guarded_datalog_rule(r) || is_monadic_rule(r)).then_some(LiteClass::Lite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_atoms, parse_program};

    #[test]
    fn two_strata() {
        let p = parse_program("q(X) :- b(X). p(X) :- d(X), not q(X).").unwrap();
        let s = stratify(&p).unwrap();
        assert_eq!(s.count, 2);
        assert_eq!(s.strata[&Symbol::new("q")], 1);
        assert_eq!(s.strata[&Symbol::new("p")], 2);
        assert!(s.edb(2).contains(&Symbol::new("q")));
    }

    #[test]
    fn even_loop_not_stratifiable() {
        let p = parse_program("a(X) :- d(X), not b(X). b(X) :- d(X), not a(X).").unwrap();
        assert!(matches!(stratify(&p), Err(Error::NotStratifiable(_))));
    }

    #[test]
    fn antecedent_is_strict() {
        let p = parse_program("a(X) :- c(X). h(Z) :- d(Z), forall Y (a(Y) => b(Y)). b(X) :- c(X).").unwrap();
        let s = stratify(&p).unwrap();
        assert!(s.strata[&Symbol::new("a")] < s.strata[&Symbol::new("h")]);
        assert!(s.strata[&Symbol::new("b")] <= s.strata[&Symbol::new("h")]);
    }

    #[test]
    fn rejects_non_datalog() {
        assert!(stratify(&parse_program("a | not a.").unwrap()).is_err());
        assert!(stratify(&parse_program(":- a.").unwrap()).is_err());
    }

    #[test]
    fn evaluation() {
        let p = parse_program("t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z). u(X) :- n(X), not t(X,X).").unwrap();
        let s = stratify(&p).unwrap();
        let input = InputStructure::from_facts(parse_atoms("e(a,b), e(b,a), e(b,c), n(a), n(c)").unwrap()).unwrap();
        let m = lfp_model(&s, &input).unwrap();
        assert_eq!(m.stages.len(), 3);
        assert!(m.stages.windows(2).all(|w| w[0].is_subset(&w[1])));
        let u = eval_query(&s, "u", &input).unwrap();
        assert_eq!(u, [vec![Symbol::new("c")]].into());
        assert!(eval_query(&s, "zz", &input).is_err());
    }

    #[test]
    fn glit_with_empty_antecedent() {
        let p = parse_program("h(X) :- d(X), forall Y (r(X,Y) => s(Y)).").unwrap();
        let s = stratify(&p).unwrap();
        let input = InputStructure::from_facts(parse_atoms("d(a), d(b), r(a,b)").unwrap()).unwrap();
        assert_eq!(eval_query(&s, "h", &input).unwrap(), [vec![Symbol::new("b")]].into());
    }

    #[test]
    fn classes() {
        let guarded = parse_program("q(X) :- b(X). p(X,Y) :- e(X,Y), not q(X).").unwrap();
        assert_eq!(check_lite_class(&guarded), Some(LiteClass::LiteR));
        let rec = parse_program("t(X,Y) :- e(X,Y). t(X,Y) :- t(X,Y), e(Y,X).").unwrap();
        assert_eq!(check_lite_class(&rec), Some(LiteClass::LiteM));
        let monadic = parse_program("p(X) :- a(X), b(Y).").unwrap();
        assert_eq!(check_lite_class(&monadic), Some(LiteClass::Lite));
        let dn = parse_program("q(X) :- f(X), forall Y (r(X,Y) => s(Y)).").unwrap();
        assert_eq!(check_lite_class(&dn), Some(LiteClass::LiteR));
        let none = parse_program("p(X,Y) :- a(X), b(Y).").unwrap();
        assert_eq!(check_lite_class(&none), None);
    }
}
