use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Atom, BoolFormula, GeneralizedLiteral, Literal, Subst, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixKind {
    Lfp,
    Gfp,
}

/// Fixed point formula `[LFP W(params). body](args)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixpoint {
    pub kind: FixKind,
    pub var: Symbol,
    pub params: Vec<Symbol>,
    pub body: Formula,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    /// Relational atom or equality.
    Atom(Atom),
    /// Application of a predicate variable.
    Apply(Symbol, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<Symbol>, Box<Formula>),
    Exists(Vec<Symbol>, Box<Formula>),
    Fix(Box<Fixpoint>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; empty is `true`, a single conjunct is returned as is.
    pub fn conj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; empty is `false`, a single disjunct is returned as is.
    pub fn disj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Universal closure over `vars`; no quantifier when `vars` is empty.
    pub fn forall(vars: Vec<Symbol>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<Symbol>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    /// Fixed point node; checks distinct parameters, closedness of the body
    /// over the parameters and positivity of the predicate variable.
    pub fn fix(kind: FixKind, var: Symbol, params: Vec<Symbol>, body: Formula, args: Vec<Term>) -> Result<Formula> {
        let distinct: BTreeSet<&Symbol> = params.iter().collect();
        if distinct.len() != params.len() {
            return Err(Error::Invalid("fixed point parameters must be distinct".into()));
        }
        if params.len() != args.len() {
            return Err(Error::Invalid("fixed point applied to the wrong number of arguments".into()));
        }
        let free = body.free_vars();
        if !free.iter().all(|v| distinct.contains(v)) {
            return Err(Error::Invalid(format!("free variables of the body of {var} not among its parameters")));
        }
        if !body.occurs_only_positively(&var) {
            return Err(Error::Invalid(format!("predicate variable {var} occurs negatively")));
        }
        Ok(Formula::Fix(Box::new(Fixpoint { kind, var, params, body, args })))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::eq(a, b))
    }

    pub fn from_bool(f: &BoolFormula) -> Formula {
        match f {
            BoolFormula::Atom(a) => Formula::Atom(a.clone()),
            BoolFormula::Not(x) => Formula::not(Formula::from_bool(x)),
            BoolFormula::And(xs) => Formula::conj(xs.iter().map(Formula::from_bool).collect()),
            BoolFormula::Or(xs) => Formula::disj(xs.iter().map(Formula::from_bool).collect()),
        }
    }

    pub fn from_literal(l: &Literal) -> Formula {
        let a = Formula::Atom(l.atom.clone());
        if l.negated {
            Formula::not(a)
        } else {
            a
        }
    }

    pub fn from_glit(g: &GeneralizedLiteral) -> Formula {
        Formula::forall(
            g.bound.clone(),
            Formula::implies(Formula::from_bool(&g.antecedent), Formula::Atom(g.consequent.clone())),
        )
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Apply(..) => vec![],
            Formula::Not(x) | Formula::Forall(_, x) | Formula::Exists(_, x) => vec![x],
            Formula::And(xs) | Formula::Or(xs) => xs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::Fix(fp) => vec![&fp.body],
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        let terms = |ts: &[Term], bound: &Vec<Symbol>, out: &mut BTreeSet<Symbol>| {
            for t in ts {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => terms(&a.args, bound, out),
            Formula::Apply(_, ts) => terms(ts, bound, out),
            Formula::Forall(vs, x) | Formula::Exists(vs, x) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                x.collect_free(bound, out);
                bound.truncate(n);
            }
            Formula::Fix(fp) => {
                terms(&fp.args, bound, out);
                let mut inner = fp.params.clone();
                fp.body.collect_free(&mut inner, out);
            }
            other => other.children().into_iter().for_each(|c| c.collect_free(bound, out)),
        }
    }

    /// Predicate variables occurring free.
    pub fn free_pred_vars(&self) -> BTreeSet<Symbol> {
        match self {
            Formula::Apply(w, _) => [w.clone()].into(),
            Formula::Fix(fp) => {
                let mut s = fp.body.free_pred_vars();
                s.remove(&fp.var);
                s
            }
            other => other.children().into_iter().flat_map(|c| c.free_pred_vars()).collect(),
        }
    }

    /// Regular predicate names with arities.
    pub fn predicates(&self) -> BTreeSet<(Symbol, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                if let Some(n) = a.name() {
                    out.insert((n.clone(), a.arity()));
                }
            }
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut add = |ts: &[Term]| out.extend(ts.iter().filter_map(|t| t.as_const().cloned()));
        self.visit(&mut |f| match f {
            Formula::Atom(a) => add(&a.args),
            Formula::Apply(_, ts) => add(ts),
            Formula::Fix(fp) => add(&fp.args),
            _ => {}
        });
        out
    }

    /// Every (first-order) variable name used, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(a) => out.extend(a.vars()),
            Formula::Apply(_, ts) => out.extend(ts.iter().filter_map(|t| t.as_var().cloned())),
            Formula::Forall(vs, _) | Formula::Exists(vs, _) => out.extend(vs.iter().cloned()),
            Formula::Fix(fp) => {
                out.extend(fp.params.iter().cloned());
                out.extend(fp.args.iter().filter_map(|t| t.as_var().cloned()));
            }
            _ => {}
        });
        out
    }

    /// True when every occurrence of `w` is under an even number of
    /// negations, counting the left side of `->` as negated and treating
    /// both sides of `<->` as mixed.
    pub fn occurs_only_positively(&self, w: &Symbol) -> bool {
        self.polarity_ok(w, true)
    }

    fn polarity_ok(&self, w: &Symbol, positive: bool) -> bool {
        match self {
            Formula::Apply(v, _) => v != w || positive,
            Formula::Not(x) => x.polarity_ok(w, !positive),
            Formula::Implies(a, b) => a.polarity_ok(w, !positive) && b.polarity_ok(w, positive),
            Formula::Iff(a, b) => !a.mentions_pred_var(w) && !b.mentions_pred_var(w),
            Formula::Fix(fp) if &fp.var == w => true,
            other => other.children().into_iter().all(|c| c.polarity_ok(w, positive)),
        }
    }

    pub fn mentions_pred_var(&self, w: &Symbol) -> bool {
        self.free_pred_vars().contains(w)
    }

    /// Symbol count: one per connective, quantified variable, predicate
    /// occurrence and term.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Atom(a) => 1 + a.args.len(),
            Formula::Apply(_, ts) => 1 + ts.len(),
            Formula::Not(x) => 1 + x.size(),
            Formula::And(xs) | Formula::Or(xs) => xs.len().saturating_sub(1).max(1) + xs.iter().map(|x| x.size()).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(vs, x) | Formula::Exists(vs, x) => 1 + vs.len() + x.size(),
            Formula::Fix(fp) => 2 + 2 * fp.params.len() + fp.body.size(),
        }
    }

    /// Largest number of free variables of a subformula.
    pub fn width(&self) -> usize {
        let mut w = 0;
        self.visit(&mut |f| w = w.max(f.free_vars().len()));
        w
    }

    /// Substitute free variables. Bound variables that would capture a
    /// substituted variable are renamed.
    pub fn subst(&self, s: &Subst) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => Formula::Atom(a.subst(s)),
            Formula::Apply(w, ts) => Formula::Apply(w.clone(), ts.iter().map(|t| t.subst(s)).collect()),
            Formula::Not(x) => Formula::not(x.subst(s)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.subst(s)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.subst(s)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst(s), b.subst(s)),
            Formula::Iff(a, b) => Formula::iff(a.subst(s), b.subst(s)),
            Formula::Forall(vs, x) | Formula::Exists(vs, x) => {
                let (vs2, body) = subst_under_binder(vs, x, s);
                if matches!(self, Formula::Forall(..)) {
                    Formula::Forall(vs2, Box::new(body))
                } else {
                    Formula::Exists(vs2, Box::new(body))
                }
            }
            Formula::Fix(fp) => Formula::Fix(Box::new(Fixpoint {
                kind: fp.kind,
                var: fp.var.clone(),
                params: fp.params.clone(),
                body: fp.body.clone(),
                args: fp.args.iter().map(|t| t.subst(s)).collect(),
            })),
        }
    }

    /// Replace atoms of the regular predicate `from` by applications of the
    /// predicate variable `to`.
    pub fn rename_predicate(&self, from: &Symbol, to: &Symbol) -> Formula {
        self.map_atoms(&|f| match f {
            Formula::Atom(a) if a.name() == Some(from) => Some(Formula::Apply(to.clone(), a.args.clone())),
            _ => None,
        })
    }

    /// Rebuild bottom-up, replacing leaves for which `f` returns a formula.
    pub fn map_atoms(&self, f: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
        if let Some(r) = f(self) {
            return r;
        }
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Apply(..) => self.clone(),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(vs, x) => Formula::Forall(vs.clone(), Box::new(x.map_atoms(f))),
            Formula::Exists(vs, x) => Formula::Exists(vs.clone(), Box::new(x.map_atoms(f))),
            Formula::Fix(fp) => Formula::Fix(Box::new(Fixpoint {
                kind: fp.kind,
                var: fp.var.clone(),
                params: fp.params.clone(),
                body: fp.body.map_atoms(f),
                args: fp.args.clone(),
            })),
        }
    }

    pub fn has_fixpoints(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Fix(_)));
        found
    }
}

fn subst_under_binder(vs: &[Symbol], body: &Formula, s: &Subst) -> (Vec<Symbol>, Formula) {
    let mut inner: Subst = s.iter().filter(|(k, _)| !vs.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
    let incoming: BTreeSet<Symbol> = inner.values().filter_map(|t| t.as_var().cloned()).collect();
    let mut used = body.all_vars();
    used.extend(incoming.iter().cloned());
    let mut vs2 = Vec::with_capacity(vs.len());
    for v in vs {
        if incoming.contains(v) {
            let mut fresh = format!("{v}'");
            while used.contains(&Symbol::from(fresh.clone())) {
                fresh.push('\'');
            }
            let fresh = Symbol::from(fresh);
            used.insert(fresh.clone());
            inner.insert(v.clone(), Term::Var(fresh.clone()));
            vs2.push(fresh);
        } else {
            vs2.push(v.clone());
        }
    }
    (vs2, body.subst(&inner))
}
