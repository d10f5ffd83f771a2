use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use super::ast::{FixKind, Fixpoint, Formula};
use crate::error::{Error, Result};
use crate::model::{for_each_tuple, Atom, Symbol, Term};

/// Finite domain with relations; equality is the identity and constants
/// denote themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    pub domain: Vec<Symbol>,
    pub atoms: BTreeSet<Atom>,
}

impl FiniteStructure {
    pub fn new(domain: impl IntoIterator<Item = Symbol>, atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let domain: Vec<Symbol> = domain.into_iter().filter(|d| seen.insert(d.clone())).collect();
        if domain.is_empty() {
            return Err(Error::Universe("empty domain".into()));
        }
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        let mut arities: BTreeMap<&Symbol, usize> = BTreeMap::new();
        for a in &atoms {
            let Some(name) = a.name() else {
                return Err(Error::Invalid("equality atoms are implicit".into()));
            };
            if !a.is_ground() {
                return Err(Error::Invalid(format!("non-ground atom for {name}")));
            }
            if let Some(c) = a.constants().into_iter().find(|c| !seen.contains(c)) {
                return Err(Error::Universe(format!("{c} is not in the domain")));
            }
            if *arities.entry(name).or_insert(a.arity()) != a.arity() {
                return Err(Error::ArityConflict {
                    pred: name.to_string(),
                    first: arities[name],
                    second: a.arity(),
                });
            }
        }
        Ok(FiniteStructure { domain, atoms })
    }
}

type Tuples = Rc<HashSet<Vec<Symbol>>>;

struct Evaluator<'a> {
    s: &'a FiniteStructure,
    atoms: HashSet<&'a Atom>,
    cache: RefCell<HashMap<*const Fixpoint, Tuples>>,
}

struct Env {
    vars: Vec<(Symbol, Symbol)>,
    preds: Vec<(Symbol, Tuples)>,
}

impl Env {
    fn var(&self, v: &Symbol) -> Result<&Symbol> {
        self.vars
            .iter()
            .rev()
            .find(|(k, _)| k == v)
            .map(|(_, x)| x)
            .ok_or_else(|| Error::Unbound(v.to_string()))
    }

    fn pred(&self, w: &Symbol) -> Result<&Tuples> {
        self.preds
            .iter()
            .rev()
            .find(|(k, _)| k == w)
            .map(|(_, x)| x)
            .ok_or_else(|| Error::Unbound(format!("predicate variable {w}")))
    }
}

impl<'a> Evaluator<'a> {
    fn term(&self, t: &Term, env: &Env) -> Result<Symbol> {
        match t {
            Term::Const(c) => Ok(c.clone()),
            Term::Var(v) => env.var(v).cloned(),
        }
    }

    fn terms(&self, ts: &[Term], env: &Env) -> Result<Vec<Symbol>> {
        ts.iter().map(|t| self.term(t, env)).collect()
    }

    fn quantify(&self, vs: &[Symbol], body: &Formula, env: &mut Env, universal: bool) -> Result<bool> {
        let mut result = universal;
        let mut err = None;
        for_each_tuple(&self.s.domain, vs.len(), |vals| {
            let n = env.vars.len();
            env.vars.extend(vs.iter().cloned().zip(vals.iter().cloned()));
            let r = self.eval(body, env);
            env.vars.truncate(n);
            match r {
                Ok(b) if b != universal => {
                    result = b;
                    false
                }
                Ok(_) => true,
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(result),
        }
    }

    fn fixpoint(&self, fp: &Fixpoint, env: &mut Env) -> Result<Tuples> {
        let closed = fp.body.free_pred_vars().iter().all(|w| w == &fp.var);
        let key = fp as *const Fixpoint;
        if closed {
            if let Some(t) = self.cache.borrow().get(&key) {
                return Ok(t.clone());
            }
        }
        let mut all = Vec::new();
        for_each_tuple(&self.s.domain, fp.params.len(), |vals| {
            all.push(vals.to_vec());
            true
        });
        let mut current: Tuples = Rc::new(match fp.kind {
            FixKind::Lfp => HashSet::new(),
            FixKind::Gfp => all.iter().cloned().collect(),
        });
        loop {
            let mut next = HashSet::new();
            let saved = std::mem::take(&mut env.vars);
            env.preds.push((fp.var.clone(), current.clone()));
            let mut res = Ok(());
            for tuple in &all {
                env.vars = fp.params.iter().cloned().zip(tuple.iter().cloned()).collect();
                match self.eval(&fp.body, env) {
                    Ok(true) => {
                        next.insert(tuple.clone());
                    }
                    Ok(false) => {}
                    Err(e) => {
                        res = Err(e);
                        break;
                    }
                }
            }
            env.preds.pop();
            env.vars = saved;
            res?;
            if next == *current {
                break;
            }
            current = Rc::new(next);
        }
        if closed {
            self.cache.borrow_mut().insert(key, current.clone());
        }
        Ok(current)
    }

    fn eval(&self, f: &Formula, env: &mut Env) -> Result<bool> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => {
                let vals = self.terms(&a.args, env)?;
                if a.is_equality() {
                    vals[0] == vals[1]
                } else {
                    let g = Atom::named(a.name().unwrap().clone(), vals.into_iter().map(Term::Const).collect());
                    self.atoms.contains(&g)
                }
            }
            Formula::Apply(w, ts) => {
                let vals = self.terms(ts, env)?;
                env.pred(w)?.contains(&vals)
            }
            Formula::Not(x) => !self.eval(x, env)?,
            Formula::And(xs) => {
                for x in xs {
                    if !self.eval(x, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(xs) => {
                for x in xs {
                    if self.eval(x, env)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            Formula::Iff(a, b) => self.eval(a, env)? == self.eval(b, env)?,
            Formula::Forall(vs, x) => self.quantify(vs, x, env, true)?,
            Formula::Exists(vs, x) => self.quantify(vs, x, env, false)?,
            Formula::Fix(fp) => {
                let vals = self.terms(&fp.args, env)?;
                self.fixpoint(fp, env)?.contains(&vals)
            }
        })
    }
}

fn check_constants(f: &Formula, s: &FiniteStructure) -> Result<()> {
    match f.constants().into_iter().find(|c| !s.domain.contains(c)) {
        Some(c) => Err(Error::Universe(format!("constant {c} is not in the domain"))),
        None => Ok(()),
    }
}

fn check_arities(f: &Formula, s: &FiniteStructure) -> Result<()> {
    let declared: BTreeMap<&Symbol, usize> = s.atoms.iter().map(|a| (a.name().unwrap(), a.arity())).collect();
    for (p, n) in f.predicates() {
        if let Some(&m) = declared.get(&p) {
            if m != n {
                return Err(Error::ArityConflict { pred: p.to_string(), first: m, second: n });
            }
        }
    }
    Ok(())
}

/// Truth of `f` under `assignment` of its free variables. Fixed points are
/// computed by iteration from the empty (least) or full (greatest) relation.
pub fn eval(f: &Formula, s: &FiniteStructure, assignment: &BTreeMap<Symbol, Symbol>) -> Result<bool> {
    check_constants(f, s)?;
    check_arities(f, s)?;
    if let Some(v) = assignment.values().find(|v| !s.domain.contains(v)) {
        return Err(Error::Universe(format!("{v} is not in the domain")));
    }
    let ev = Evaluator { s, atoms: s.atoms.iter().collect(), cache: RefCell::new(HashMap::new()) };
    let mut env = Env { vars: assignment.iter().map(|(k, v)| (k.clone(), v.clone())).collect(), preds: Vec::new() };
    ev.eval(f, &mut env)
}

pub fn eval_sentence(f: &Formula, s: &FiniteStructure) -> Result<bool> {
    eval(f, s, &BTreeMap::new())
}

/// Every sentence holds.
pub fn is_model(fs: &[Formula], s: &FiniteStructure) -> Result<bool> {
    for f in fs {
        if !eval_sentence(f, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stages `empty, op(empty), ...` of the least fixed point of a closed
/// fixed point formula, up to stabilization.
pub fn lfp_stages(fp: &Fixpoint, s: &FiniteStructure) -> Result<Vec<BTreeSet<Vec<Symbol>>>> {
    let ev = Evaluator { s, atoms: s.atoms.iter().collect(), cache: RefCell::new(HashMap::new()) };
    let mut all = Vec::new();
    for_each_tuple(&s.domain, fp.params.len(), |vals| {
        all.push(vals.to_vec());
        true
    });
    let mut stages = vec![BTreeSet::new()];
    loop {
        let current: Tuples = Rc::new(stages.last().unwrap().iter().cloned().collect());
        let mut env = Env { vars: Vec::new(), preds: vec![(fp.var.clone(), current)] };
        let mut next = BTreeSet::new();
        for t in &all {
            env.vars = fp.params.iter().cloned().zip(t.iter().cloned()).collect();
            if ev.eval(&fp.body, &mut env)? {
                next.insert(t.clone());
            }
        }
        if &next == stages.last().unwrap() {
            return Ok(stages);
        }
        stages.push(next);
    }
}

/// Rewrite greatest fixed points as negated least fixed points of the
/// negated body with the predicate variable negated.
pub fn eliminate_gfp(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Apply(..) => f.clone(),
        Formula::Not(x) => Formula::not(eliminate_gfp(x)),
        Formula::And(xs) => Formula::And(xs.iter().map(eliminate_gfp).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(eliminate_gfp).collect()),
        Formula::Implies(a, b) => Formula::implies(eliminate_gfp(a), eliminate_gfp(b)),
        Formula::Iff(a, b) => Formula::iff(eliminate_gfp(a), eliminate_gfp(b)),
        Formula::Forall(vs, x) => Formula::Forall(vs.clone(), Box::new(eliminate_gfp(x))),
        Formula::Exists(vs, x) => Formula::Exists(vs.clone(), Box::new(eliminate_gfp(x))),
        Formula::Fix(fp) => {
            let body = eliminate_gfp(&fp.body);
            match fp.kind {
                FixKind::Lfp => Formula::Fix(Box::new(Fixpoint { body, ..(**fp).clone() })),
                FixKind::Gfp => {
                    let w = fp.var.clone();
                    let negated = body.map_atoms(&|g| match g {
                        Formula::Apply(v, _) if *v == w => Some(Formula::not(g.clone())),
                        _ => None,
                    });
                    Formula::not(Formula::Fix(Box::new(Fixpoint {
                        kind: FixKind::Lfp,
                        var: fp.var.clone(),
                        params: fp.params.clone(),
                        body: Formula::not(negated),
                        args: fp.args.clone(),
                    })))
                }
            }
        }
    }
}

/// A sentence `forall Y (d(Y) <-> body)` (or `d <-> body` when nullary)
/// with distinct variables `Y` and `d` absent from `body`.
fn as_definition(f: &Formula) -> Option<(Symbol, Vec<Symbol>, &Formula)> {
    let (vs, inner) = match f {
        Formula::Forall(vs, x) => (vs.clone(), &**x),
        other => (Vec::new(), other),
    };
    let Formula::Iff(l, r) = inner else { return None };
    let Formula::Atom(a) = &**l else { return None };
    let name = a.name()?.clone();
    let args: Option<Vec<Symbol>> = a.args.iter().map(|t| t.as_var().cloned()).collect();
    let args = args?;
    let distinct: BTreeSet<&Symbol> = args.iter().collect();
    if distinct.len() != args.len() || distinct.len() != vs.len() || !vs.iter().all(|v| distinct.contains(v)) {
        return None;
    }
    if r.predicates().iter().any(|(p, _)| *p == name) {
        return None;
    }
    Some((name, args, r))
}

/// Limit on the number of guessed ground atoms in [`find_models`].
pub const MAX_GUESSED_ATOMS: usize = 22;

/// Models of all `fs` over exactly `domain`, in increasing order of the
/// guessed atom set. Predicates with a definitional biconditional whose
/// body uses only guessed predicates are computed rather than guessed.
pub fn find_models(fs: &[Formula], domain: &[Symbol], limit: Option<usize>) -> Result<Vec<FiniteStructure>> {
    let mut preds: BTreeMap<Symbol, usize> = BTreeMap::new();
    for f in fs {
        for (p, n) in f.predicates() {
            if *preds.entry(p.clone()).or_insert(n) != n {
                return Err(Error::ArityConflict { pred: p.to_string(), first: preds[&p], second: n });
            }
        }
    }
    let mut defs: Vec<(Symbol, Vec<Symbol>, &Formula)> = Vec::new();
    for f in fs {
        if let Some(d) = as_definition(f) {
            if !defs.iter().any(|(n, _, _)| *n == d.0) {
                defs.push(d);
            }
        }
    }
    loop {
        let names: BTreeSet<Symbol> = defs.iter().map(|d| d.0.clone()).collect();
        let before = defs.len();
        defs.retain(|(_, _, body)| body.predicates().iter().all(|(p, _)| !names.contains(p)));
        if defs.len() == before {
            break;
        }
    }
    let defined: BTreeSet<Symbol> = defs.iter().map(|d| d.0.clone()).collect();
    let mut guess = Vec::new();
    for (p, n) in &preds {
        if defined.contains(p) {
            continue;
        }
        for_each_tuple(domain, *n, |vals| {
            guess.push(Atom::named(p.clone(), vals.iter().cloned().map(Term::Const).collect()));
            true
        });
    }
    if guess.len() > MAX_GUESSED_ATOMS {
        return Err(Error::Budget(format!("{} ground atoms to guess, limit {MAX_GUESSED_ATOMS}", guess.len())));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << guess.len()) {
        let base: Vec<Atom> = guess.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone()).collect();
        let partial = FiniteStructure::new(domain.iter().cloned(), base.clone())?;
        let mut atoms = base;
        for (name, params, body) in &defs {
            let mut err = None;
            for_each_tuple(domain, params.len(), |vals| {
                let asg: BTreeMap<Symbol, Symbol> = params.iter().cloned().zip(vals.iter().cloned()).collect();
                match eval(body, &partial, &asg) {
                    Ok(true) => atoms.push(Atom::named(name.clone(), vals.iter().cloned().map(Term::Const).collect())),
                    Ok(false) => {}
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                }
                true
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        let s = FiniteStructure::new(domain.iter().cloned(), atoms)?;
        if is_model(fs, &s)? {
            out.push(s);
            if limit.is_some_and(|l| out.len() >= l) {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpl::parse_formula;

    fn structure(domain: &[&str], atoms: &str) -> FiniteStructure {
        let atoms = if atoms.is_empty() { Vec::new() } else { crate::parser::parse_atoms(atoms).unwrap().into_iter().collect() };
        FiniteStructure::new(domain.iter().map(|d| Symbol::new(d)), atoms).unwrap()
    }

    #[test]
    fn first_order() {
        let s = structure(&["a", "b"], "p(a)");
        assert!(eval_sentence(&parse_formula("exists X (X = X)").unwrap(), &s).unwrap());
        assert!(!eval_sentence(&parse_formula("forall X (p(X))").unwrap(), &s).unwrap());
        assert!(eval_sentence(&parse_formula("p(a) & ~p(b) & ~(a = b)").unwrap(), &s).unwrap());
        assert!(matches!(eval_sentence(&parse_formula("p(X)").unwrap(), &s), Err(Error::Unbound(_))));
        assert!(eval_sentence(&parse_formula("p(c)").unwrap(), &s).is_err());
    }

    #[test]
    fn infinity_axiom_fails_on_cycle() {
        let s = structure(&["a", "b", "c"], "f(a,b), f(b,c), f(c,a)");
        let wf = parse_formula("forall X,Y (f(X,Y) -> [LFP W(X). forall Y (f(Y,X) -> W(Y))](X))").unwrap();
        assert!(!eval_sentence(&wf, &s).unwrap());
        let chain = structure(&["a", "b", "c"], "f(a,b), f(b,c)");
        assert!(eval_sentence(&wf, &chain).unwrap());
    }

    #[test]
    fn gfp_elimination_agrees() {
        let f = parse_formula("forall X ([GFP W(X). exists Y (e(X,Y) & W(Y))](X) <-> p(X))").unwrap();
        let g = eliminate_gfp(&f);
        assert!(!crate::fpl::render_formula(&g).contains("GFP"));
        for atoms in ["e(a,b), e(b,a), p(a), p(b)", "e(a,b), p(a)", "e(a,a), p(a)", "e(a,b), e(b,b), p(a), p(b)"] {
            let s = structure(&["a", "b"], atoms);
            assert_eq!(eval_sentence(&f, &s).unwrap(), eval_sentence(&g, &s).unwrap(), "{atoms}");
        }
    }

    #[test]
    fn stages_ascend() {
        let s = structure(&["a", "b", "c"], "e(a,b), e(b,c)");
        let Formula::Fix(fp) = parse_formula("[LFP W(X). X = a | exists Y (e(Y,X) & W(Y))](a)").unwrap() else {
            panic!()
        };
        let st = lfp_stages(&fp, &s).unwrap();
        assert_eq!(st.len(), 4);
        assert!(st.windows(2).all(|w| w[0].is_subset(&w[1])));
    }

    #[test]
    fn model_search_uses_definitions() {
        let fs = vec![
            parse_formula("forall X (d(X) <-> ~p(X))").unwrap(),
            parse_formula("exists X (d(X))").unwrap(),
        ];
        let dom = [Symbol::new("a"), Symbol::new("b")];
        let ms = find_models(&fs, &dom, None).unwrap();
        assert_eq!(ms.len(), 3);
    }
}
