//! Core syntax trees: terms, atoms, literals, generalized literals, rules,
//! programs, universes and open interpretations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Interned-ish name shared by constants, variables, predicates and rule names.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Names starting with `#` are reserved for generated symbols.
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('#')
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Symbol::from(s))
    }
}

/// Variable-to-term substitution.
pub type Subst = HashMap<Symbol, Term>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
}

impl Term {
    pub fn constant(s: &str) -> Self {
        Term::Const(Symbol::new(s))
    }

    pub fn var(s: &str) -> Self {
        Term::Var(Symbol::new(s))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn symbol(&self) -> &Symbol {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }

    pub fn as_var(&self) -> Option<&Symbol> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&Symbol> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }

    pub fn subst(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
        }
    }
}

/// Predicate position of an atom. `Eq` sorts after every named predicate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Pred {
    Named(Symbol),
    Eq,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: Pred::Named(Symbol::new(pred)), args }
    }

    pub fn named(pred: Symbol, args: Vec<Term>) -> Self {
        Atom { pred: Pred::Named(pred), args }
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Atom { pred: Pred::Eq, args: vec![left, right] }
    }

    /// Ground atom from constant names.
    pub fn ground(pred: &str, args: &[&str]) -> Self {
        Atom::new(pred, args.iter().map(|a| Term::constant(a)).collect())
    }

    pub fn is_equality(&self) -> bool {
        self.pred == Pred::Eq
    }

    pub fn name(&self) -> Option<&Symbol> {
        match &self.pred {
            Pred::Named(s) => Some(s),
            Pred::Eq => None,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        self.args.iter().filter_map(|t| t.as_var().cloned()).collect()
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.args.iter().filter_map(|t| t.as_const().cloned()).collect()
    }

    pub fn subst(&self, s: &Subst) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.subst(s)).collect() }
    }

    /// Truth of a ground equality atom; `None` for other atoms or open terms.
    pub fn eval_equality(&self) -> Option<bool> {
        if !self.is_equality() {
            return None;
        }
        match (&self.args[0], &self.args[1]) {
            (Term::Const(a), Term::Const(b)) => Some(a == b),
            (Term::Var(a), Term::Var(b)) if a == b => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, negated: true }
    }

    pub fn subst(&self, s: &Subst) -> Literal {
        Literal { atom: self.atom.subst(s), negated: self.negated }
    }
}

/// Quantifier-free formula used as the antecedent of a generalized literal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BoolFormula {
    Atom(Atom),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
}

impl BoolFormula {
    pub fn not(f: BoolFormula) -> Self {
        BoolFormula::Not(Box::new(f))
    }

    /// Conjunction that collapses singletons; `parts` must be non-empty.
    pub fn and(mut parts: Vec<BoolFormula>) -> Self {
        assert!(!parts.is_empty(), "empty conjunction");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            BoolFormula::And(parts)
        }
    }

    pub fn or(mut parts: Vec<BoolFormula>) -> Self {
        assert!(!parts.is_empty(), "empty disjunction");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            BoolFormula::Or(parts)
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut |a| out.extend(a.vars()));
        out
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit(&mut |a| out.push(a));
        out
    }

    fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Atom)) {
        match self {
            BoolFormula::Atom(a) => f(a),
            BoolFormula::Not(x) => x.visit(f),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => xs.iter().for_each(|x| x.visit(f)),
        }
    }

    fn collect_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        self.visit(&mut |a| f(a));
    }

    pub fn subst(&self, s: &Subst) -> BoolFormula {
        match self {
            BoolFormula::Atom(a) => BoolFormula::Atom(a.subst(s)),
            BoolFormula::Not(x) => BoolFormula::Not(Box::new(x.subst(s))),
            BoolFormula::And(xs) => BoolFormula::And(xs.iter().map(|x| x.subst(s)).collect()),
            BoolFormula::Or(xs) => BoolFormula::Or(xs.iter().map(|x| x.subst(s)).collect()),
        }
    }

    pub fn eval(&self, truth: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            BoolFormula::Atom(a) => truth(a),
            BoolFormula::Not(x) => !x.eval(truth),
            BoolFormula::And(xs) => xs.iter().all(|x| x.eval(truth)),
            BoolFormula::Or(xs) => xs.iter().any(|x| x.eval(truth)),
        }
    }

    /// Top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&BoolFormula> {
        match self {
            BoolFormula::And(xs) => xs.iter().flat_map(|x| x.conjuncts()).collect(),
            other => vec![other],
        }
    }
}

/// `forall bound (antecedent => consequent)` occurring in a rule body.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GeneralizedLiteral {
    pub bound: Vec<Symbol>,
    pub antecedent: BoolFormula,
    pub consequent: Atom,
}

impl GeneralizedLiteral {
    /// Variables occurring in the antecedent or consequent that are not bound.
    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut vs = self.antecedent.vars();
        vs.extend(self.consequent.vars());
        for b in &self.bound {
            vs.remove(b);
        }
        vs
    }

    /// Substitution that leaves bound variables untouched.
    pub fn subst_free(&self, s: &Subst) -> GeneralizedLiteral {
        let mut inner = s.clone();
        for b in &self.bound {
            inner.remove(b);
        }
        GeneralizedLiteral {
            bound: self.bound.clone(),
            antecedent: self.antecedent.subst(&inner),
            consequent: self.consequent.subst(&inner),
        }
    }

    /// Instantiate the bound variables with `values`.
    pub fn instantiate(&self, values: &[Symbol]) -> (BoolFormula, Atom) {
        let s: Subst = self
            .bound
            .iter()
            .cloned()
            .zip(values.iter().map(|v| Term::Const(v.clone())))
            .collect();
        (self.antecedent.subst(&s), self.consequent.subst(&s))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rule {
    pub name: Symbol,
    pub head: BTreeSet<Literal>,
    pub body: BTreeSet<Literal>,
    pub glits: BTreeSet<GeneralizedLiteral>,
}

impl Rule {
    /// Build a rule, checking the per-rule invariants.
    pub fn new(
        name: &str,
        head: impl IntoIterator<Item = Literal>,
        body: impl IntoIterator<Item = Literal>,
        glits: impl IntoIterator<Item = GeneralizedLiteral>,
    ) -> Result<Rule> {
        let r = Rule {
            name: Symbol::new(name),
            head: head.into_iter().collect(),
            body: body.into_iter().collect(),
            glits: glits.into_iter().collect(),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let pos: Vec<_> = self.head_pos().collect();
        if pos.len() > 1 {
            return Err(Error::MultiplePositiveHead(self.name.to_string()));
        }
        if pos.iter().any(|a| a.is_equality()) {
            return Err(Error::EqualityInHead(self.name.to_string()));
        }
        let all_atoms = self
            .head
            .iter()
            .chain(self.body.iter())
            .map(|l| &l.atom)
            .chain(self.glits.iter().flat_map(|g| {
                g.antecedent.atoms().into_iter().chain(std::iter::once(&g.consequent))
            }));
        for a in all_atoms {
            if a.is_equality() && a.args.len() != 2 {
                return Err(Error::Invalid(format!("equality with {} arguments", a.args.len())));
            }
        }
        Ok(())
    }

    pub fn head_pos(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().filter(|l| !l.negated).map(|l| &l.atom)
    }

    pub fn head_neg(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().filter(|l| l.negated).map(|l| &l.atom)
    }

    pub fn body_pos(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| !l.negated).map(|l| &l.atom)
    }

    pub fn body_neg(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|l| l.negated).map(|l| &l.atom)
    }

    pub fn head_atom(&self) -> Option<&Atom> {
        self.head_pos().next()
    }

    pub fn is_constraint(&self) -> bool {
        self.head_pos().next().is_none()
    }

    /// `q(t) v not q(t).` with nothing else.
    pub fn is_free(&self) -> bool {
        if self.head.len() != 2 || !self.body.is_empty() || !self.glits.is_empty() {
            return false;
        }
        let mut it = self.head.iter();
        let (a, b) = (it.next().unwrap(), it.next().unwrap());
        a.atom == b.atom && a.negated != b.negated && !a.atom.is_equality()
    }

    /// Free variables of the rule (bound variables of generalized literals excluded).
    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut vs = BTreeSet::new();
        for l in self.head.iter().chain(self.body.iter()) {
            vs.extend(l.atom.vars());
        }
        for g in &self.glits {
            vs.extend(g.free_vars());
        }
        vs
    }

    pub fn is_ground(&self) -> bool {
        self.vars().is_empty()
    }

    pub fn subst(&self, s: &Subst) -> Rule {
        Rule {
            name: self.name.clone(),
            head: self.head.iter().map(|l| l.subst(s)).collect(),
            body: self.body.iter().map(|l| l.subst(s)).collect(),
            glits: self.glits.iter().map(|g| g.subst_free(s)).collect(),
        }
    }

    /// Every atom in the rule including those inside generalized literals.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out: Vec<&Atom> = self.head.iter().chain(self.body.iter()).map(|l| &l.atom).collect();
        for g in &self.glits {
            out.extend(g.antecedent.atoms());
            out.push(&g.consequent);
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.atoms().into_iter().flat_map(|a| a.constants()).collect()
    }
}

/// Atoms of the unnegated literals.
pub fn positive_part<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> BTreeSet<Atom> {
    lits.into_iter().filter(|l| !l.negated).map(|l| l.atom.clone()).collect()
}

/// Atoms under negation as failure.
pub fn negative_part<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> BTreeSet<Atom> {
    lits.into_iter().filter(|l| l.negated).map(|l| l.atom.clone()).collect()
}

pub fn is_free_rule(r: &Rule) -> bool {
    r.is_free()
}

pub fn program_signature(p: &Program) -> Result<Signature> {
    p.signature()
}

/// Constants, variables and predicate arities of a program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub constants: BTreeSet<Symbol>,
    pub variables: BTreeSet<Symbol>,
    pub predicates: BTreeMap<Symbol, usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Result<Program> {
        let p = Program { rules };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for r in &self.rules {
            r.validate()?;
            if !names.insert(r.name.clone()) {
                return Err(Error::DuplicateRule(r.name.to_string()));
            }
        }
        self.signature().map(|_| ())
    }

    pub fn signature(&self) -> Result<Signature> {
        let mut sig = Signature::default();
        for r in &self.rules {
            for a in r.atoms() {
                sig.constants.extend(a.constants());
                sig.variables.extend(a.vars());
                if let Some(n) = a.name() {
                    match sig.predicates.get(n) {
                        Some(&k) if k != a.arity() => {
                            return Err(Error::ArityConflict {
                                pred: n.to_string(),
                                first: k,
                                second: a.arity(),
                            })
                        }
                        Some(_) => {}
                        None => {
                            sig.predicates.insert(n.clone(), a.arity());
                        }
                    }
                }
            }
            for g in &r.glits {
                sig.variables.extend(g.bound.iter().cloned());
            }
        }
        if let Some(c) = sig.constants.iter().find(|c| sig.predicates.contains_key(*c)) {
            return Err(Error::NameClash(c.to_string()));
        }
        Ok(sig)
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.rules.iter().flat_map(|r| r.constants()).collect()
    }

    /// Predicate arities; panics only on programs that bypassed validation.
    pub fn predicates(&self) -> BTreeMap<Symbol, usize> {
        self.signature().expect("validated program").predicates
    }

    pub fn max_arity(&self) -> usize {
        self.predicates().values().copied().max().unwrap_or(0)
    }

    pub fn has_glits(&self) -> bool {
        self.rules.iter().any(|r| !r.glits.is_empty())
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name.as_str() == name)
    }

    /// Union of two programs; rule names from `other` are kept and must not clash.
    pub fn extend(&self, other: &Program) -> Result<Program> {
        let mut rules = self.rules.clone();
        rules.extend(other.rules.iter().cloned());
        Program::new(rules)
    }
}

/// Non-empty ordered set of constants serving as a domain.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Universe {
    elements: Vec<Symbol>,
}

impl Universe {
    /// Elements are kept in first-occurrence order with duplicates removed.
    pub fn new(elements: impl IntoIterator<Item = Symbol>) -> Result<Universe> {
        let mut seen = BTreeSet::new();
        let elements: Vec<Symbol> = elements.into_iter().filter(|e| seen.insert(e.clone())).collect();
        if elements.is_empty() {
            return Err(Error::Universe("universe must be non-empty".into()));
        }
        Ok(Universe { elements })
    }

    pub fn from_names(names: &[&str]) -> Result<Universe> {
        Universe::new(names.iter().map(|n| Symbol::new(n)))
    }

    /// Program constants (sorted) followed by `k` fresh elements.
    pub fn with_fresh(constants: &BTreeSet<Symbol>, k: usize) -> Result<Universe> {
        Universe::new(constants.iter().cloned().chain(fresh_elements(k)))
    }

    pub fn elements(&self) -> &[Symbol] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.elements.contains(s)
    }

    pub fn position(&self, s: &Symbol) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }
}

/// Reserved fresh names `#u1`, `#u2`, ... used to extend a universe.
pub fn fresh_elements(k: usize) -> impl Iterator<Item = Symbol> {
    (1..=k).map(|i| Symbol::from(format!("#u{i}")))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OpenInterpretation {
    pub universe: Universe,
    pub atoms: BTreeSet<Atom>,
}

impl OpenInterpretation {
    pub fn new(universe: Universe, atoms: impl IntoIterator<Item = Atom>) -> Self {
        OpenInterpretation { universe, atoms: atoms.into_iter().collect() }
    }

    /// Truth of a ground literal; equality is identity on constants.
    pub fn holds(&self, atom: &Atom) -> Result<bool> {
        if !atom.is_ground() {
            let v = atom.vars().into_iter().next().unwrap();
            return Err(Error::Unbound(v.to_string()));
        }
        Ok(match atom.eval_equality() {
            Some(b) => b,
            None => self.atoms.contains(atom),
        })
    }
}

/// Anything whose truth can be checked in an open interpretation.
pub enum Item<'a> {
    Literal(&'a Literal),
    Formula(&'a BoolFormula),
    Glit(&'a GeneralizedLiteral),
    Rule(&'a Rule),
}

pub fn satisfies(m: &OpenInterpretation, item: Item<'_>) -> Result<bool> {
    match item {
        Item::Literal(l) => Ok(m.holds(&l.atom)? != l.negated),
        Item::Formula(f) => {
            if let Some(v) = f.vars().into_iter().next() {
                return Err(Error::Unbound(v.to_string()));
            }
            Ok(f.eval(&|a| m.holds(a).unwrap_or(false)))
        }
        Item::Glit(g) => {
            if let Some(v) = g.free_vars().into_iter().next() {
                return Err(Error::Unbound(v.to_string()));
            }
            let mut ok = true;
            for_each_tuple(m.universe.elements(), g.bound.len(), |vals| {
                let (ante, cons) = g.instantiate(vals);
                if ante.eval(&|a| m.holds(a).unwrap_or(false)) && !m.holds(&cons).unwrap_or(false) {
                    ok = false;
                }
                ok
            });
            Ok(ok)
        }
        Item::Rule(r) => {
            let mut body = true;
            for l in &r.body {
                body &= satisfies(m, Item::Literal(l))?;
            }
            for g in &r.glits {
                body &= satisfies(m, Item::Glit(g))?;
            }
            if !body {
                return Ok(true);
            }
            for l in &r.head {
                if satisfies(m, Item::Literal(l))? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Visit every tuple over `domain` of length `n` in lexicographic order.
/// The callback returns `false` to stop early.
pub fn for_each_tuple<F: FnMut(&[Symbol]) -> bool>(domain: &[Symbol], n: usize, mut f: F) {
    if n == 0 {
        f(&[]);
        return;
    }
    if domain.is_empty() {
        return;
    }
    let mut idx = vec![0usize; n];
    let mut buf: Vec<Symbol> = vec![domain[0].clone(); n];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = domain[i].clone();
        }
        if !f(&buf) {
            return;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < domain.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_sorts_last() {
        let a = Atom::eq(Term::var("X"), Term::var("Y"));
        let b = Atom::new("zz", vec![]);
        assert!(b < a);
    }

    #[test]
    fn free_rule_shape() {
        let q = Atom::new("q", vec![Term::var("X")]);
        let r = Rule::new("f", [Literal::pos(q.clone()), Literal::neg(q.clone())], [], []).unwrap();
        assert!(r.is_free());
        let r2 = Rule::new("g", [Literal::pos(q.clone())], [Literal::neg(q)], []).unwrap();
        assert!(!r2.is_free());
    }

    #[test]
    fn glit_free_vars_skip_bound() {
        let g = GeneralizedLiteral {
            bound: vec![Symbol::new("X")],
            antecedent: BoolFormula::Atom(Atom::new("q", vec![Term::var("X"), Term::var("Z")])),
            consequent: Atom::new("b", vec![Term::var("X")]),
        };
        assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec![Symbol::new("Z")]);
        let mut s = Subst::new();
        s.insert(Symbol::new("X"), Term::constant("a"));
        assert_eq!(g.subst_free(&s), g);
    }

    #[test]
    fn arity_conflict_detected() {
        let r1 = Rule::new("r1", [Literal::pos(Atom::ground("p", &["a"]))], [], []).unwrap();
        let r2 = Rule::new("r2", [Literal::pos(Atom::ground("p", &["a", "b"]))], [], []).unwrap();
        assert!(matches!(Program::new(vec![r1, r2]), Err(Error::ArityConflict { .. })));
    }

    #[test]
    fn tuples_lexicographic() {
        let d = vec![Symbol::new("a"), Symbol::new("b")];
        let mut seen = Vec::new();
        for_each_tuple(&d, 2, |t| {
            seen.push(format!("{}{}", t[0], t[1]));
            true
        });
        assert_eq!(seen, vec!["aa", "ab", "ba", "bb"]);
    }
}
