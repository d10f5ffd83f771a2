//! Program-to-program constructions: single-predicate encoding, head
//! extension, pairwise guarding, free choice for extensional predicates
//! and the double-negation rewriting of generalized literals.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::datalog::{is_recursion_free, StratifiedProgram};
use crate::error::{Error, Result};
use crate::grounder::in_set_many;
use crate::model::{
    Atom, BoolFormula, GeneralizedLiteral, Literal, OpenInterpretation, Pred, Program, Rule, Symbol, Term, Universe,
};
use crate::ZERO;

/// Name of the single predicate of the encoding.
pub const P_PRED: &str = "#p";
/// Name of the pairwise guard predicate.
pub const G_PRED: &str = "#g";

/// Inverse of the single-predicate encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtomMapping {
    pub predicate: Symbol,
    pub arity: usize,
    pub predicates: BTreeMap<Symbol, usize>,
}

impl AtomMapping {
    /// Constants added by the encoding: predicate names and the padding constant.
    pub fn special_constants(&self) -> BTreeSet<Symbol> {
        let mut s: BTreeSet<Symbol> = self.predicates.keys().cloned().collect();
        s.insert(Symbol::new(ZERO));
        s
    }

    pub fn encode(&self, a: &Atom) -> Atom {
        match &a.pred {
            Pred::Eq => a.clone(),
            Pred::Named(q) => {
                let mut args = a.args.clone();
                while args.len() + 1 < self.arity {
                    args.push(Term::constant(ZERO));
                }
                args.push(Term::Const(q.clone()));
                Atom::named(self.predicate.clone(), args)
            }
        }
    }

    /// The original atom, if `a` encodes one whose arguments avoid the
    /// special constants.
    pub fn decode(&self, a: &Atom) -> Option<Atom> {
        if a.name() != Some(&self.predicate) || a.args.len() != self.arity {
            return None;
        }
        let q = a.args.last()?.as_const()?;
        let m = *self.predicates.get(q)?;
        let special = self.special_constants();
        let (args, pad) = a.args[..self.arity - 1].split_at(m);
        if args.iter().any(|t| t.as_const().map_or(true, |c| special.contains(c))) {
            return None;
        }
        if pad.iter().any(|t| t.as_const().map(|c| c.as_str()) != Some(ZERO)) {
            return None;
        }
        Some(Atom::named(q.clone(), args.to_vec()))
    }

    /// Restrict an open answer set of the encoding to the original program.
    pub fn decode_interpretation(&self, m: &OpenInterpretation) -> Result<OpenInterpretation> {
        let special = self.special_constants();
        let u = Universe::new(m.universe.elements().iter().filter(|e| !special.contains(*e)).cloned())?;
        Ok(OpenInterpretation::new(u, m.atoms.iter().filter_map(|a| self.decode(a))))
    }

    /// Universe of the encoding for a universe of the original program.
    pub fn extend_universe(&self, u: &Universe) -> Result<Universe> {
        Universe::new(u.elements().iter().cloned().chain(self.special_constants()))
    }
}

fn map_formula(f: &BoolFormula, m: &AtomMapping) -> BoolFormula {
    match f {
        BoolFormula::Atom(a) => BoolFormula::Atom(m.encode(a)),
        BoolFormula::Not(x) => BoolFormula::not(map_formula(x, m)),
        BoolFormula::And(xs) => BoolFormula::And(xs.iter().map(|x| map_formula(x, m)).collect()),
        BoolFormula::Or(xs) => BoolFormula::Or(xs.iter().map(|x| map_formula(x, m)).collect()),
    }
}

fn map_literals(ls: &BTreeSet<Literal>, m: &AtomMapping) -> BTreeSet<Literal> {
    ls.iter().map(|l| Literal { atom: m.encode(&l.atom), negated: l.negated }).collect()
}

/// Rewrite every regular atom `q(t)` as `#p(t, #0.., q)`. Non-free rules
/// get `X != c` for every rule variable and every added constant, and
/// antecedents of generalized literals get the same for bound variables.
pub fn to_p_program(p: &Program) -> Result<(Program, AtomMapping)> {
    let predicates = p.predicates();
    let arity = predicates.values().copied().max().unwrap_or(0) + 1;
    let mapping = AtomMapping { predicate: Symbol::new(P_PRED), arity, predicates };
    let mut rules = Vec::new();
    for r in &p.rules {
        let head = map_literals(&r.head, &mapping);
        if r.is_free() {
            rules.push(Rule { name: r.name.clone(), head, body: BTreeSet::new(), glits: BTreeSet::new() });
            continue;
        }
        let mut body = map_literals(&r.body, &mapping);
        body.extend(in_set_many(r.vars().iter(), p));
        let glits = r
            .glits
            .iter()
            .map(|g| {
                let mut parts = vec![map_formula(&g.antecedent, &mapping)];
                for lit in in_set_many(g.bound.iter(), p) {
                    parts.push(BoolFormula::not(BoolFormula::Atom(lit.atom)));
                }
                GeneralizedLiteral {
                    bound: g.bound.clone(),
                    antecedent: BoolFormula::and(parts),
                    consequent: mapping.encode(&g.consequent),
                }
            })
            .collect();
        rules.push(Rule { name: r.name.clone(), head, body, glits });
    }
    Ok((Program::new(rules)?, mapping))
}

/// Add `not b` to the head for every positive body atom `b`; free rules unchanged.
pub fn hbg(p: &Program) -> Program {
    let rules = p
        .rules
        .iter()
        .map(|r| {
            if r.is_free() {
                return r.clone();
            }
            let mut r2 = r.clone();
            for a in r.body_pos() {
                r2.head.insert(Literal::neg(a.clone()));
            }
            r2
        })
        .collect();
    Program { rules }
}

/// Add `#g(X,Y)` for every pair of rule variables (including `X = Y`) and
/// the facts `#g(a,b)` for all constants.
pub fn gua(p: &Program) -> Result<Program> {
    let g = Symbol::new(G_PRED);
    let mut rules = Vec::new();
    for r in &p.rules {
        let vars: Vec<Symbol> = r.vars().into_iter().collect();
        let mut r2 = r.clone();
        for (i, x) in vars.iter().enumerate() {
            for y in &vars[i..] {
                r2.body.insert(Literal::pos(Atom::named(g.clone(), vec![Term::Var(x.clone()), Term::Var(y.clone())])));
            }
        }
        rules.push(r2);
    }
    let cts: Vec<Symbol> = p.constants().into_iter().collect();
    let mut k = 0;
    for a in &cts {
        for b in &cts {
            k += 1;
            let fact = Atom::named(g.clone(), vec![Term::Const(a.clone()), Term::Const(b.clone())]);
            rules.push(Rule {
                name: Symbol::from(format!("#gfact{k}")),
                head: [Literal::pos(fact)].into(),
                body: BTreeSet::new(),
                glits: BTreeSet::new(),
            });
        }
    }
    Program::new(rules)
}

/// Predicates never occurring in a positive head, equality excluded.
pub fn extensional_predicates(p: &Program) -> BTreeMap<Symbol, usize> {
    let heads: BTreeSet<Symbol> = p.rules.iter().filter_map(|r| r.head_atom()).filter_map(|a| a.name().cloned()).collect();
    p.predicates().into_iter().filter(|(q, _)| !heads.contains(q)).collect()
}

/// The program together with a free rule for every extensional predicate.
pub fn free_choice(p: &StratifiedProgram) -> Result<Program> {
    let program = &p.program;
    let mut rules = program.rules.clone();
    for (q, arity) in extensional_predicates(program) {
        let args: Vec<Term> = (1..=arity).map(|i| Term::Var(Symbol::from(format!("X{i}")))).collect();
        let a = Atom::named(q.clone(), args);
        rules.push(Rule {
            name: Symbol::from(format!("#free_{q}")),
            head: [Literal::pos(a.clone()), Literal::neg(a)].into(),
            body: BTreeSet::new(),
            glits: BTreeSet::new(),
        });
    }
    Program::new(rules)
}

/// Replace each `forall Y (a => b)` by `not aux(Z)` with a new rule
/// `aux(Z) :- a, not b`, where `Z` are the free variables of the literal.
pub fn double_negation(p: &Program) -> Result<Program> {
    if !is_recursion_free(p)? {
        return Err(Error::Precondition("program is recursive".into()));
    }
    let taken: BTreeSet<Symbol> = p.predicates().into_keys().collect();
    let names: BTreeSet<Symbol> = p.rules.iter().map(|r| r.name.clone()).collect();
    let mut fresh: BTreeSet<Symbol> = BTreeSet::new();
    let mut rules = Vec::new();
    for r in &p.rules {
        let mut main = r.clone();
        main.glits.clear();
        for (i, g) in r.glits.iter().enumerate() {
            let BoolFormula::Atom(ante) = &g.antecedent else {
                return Err(Error::Precondition(format!(
                    "rule {}: antecedent is not a single atom",
                    r.name
                )));
            };
            let base = r.head_atom().and_then(|a| a.name()).map(|s| s.to_string()).unwrap_or_else(|| "c".into());
            let mut name = format!("#{base}'");
            while taken.contains(&Symbol::from(name.clone())) || fresh.contains(&Symbol::from(name.clone())) {
                name.push('\'');
            }
            let aux_pred = Symbol::from(name);
            fresh.insert(aux_pred.clone());
            let args: Vec<Term> = g.free_vars().into_iter().map(Term::Var).collect();
            let aux = Atom::named(aux_pred.clone(), args);
            main.body.insert(Literal::neg(aux.clone()));
            let mut rule_name = format!("{}_dn{}", r.name, i + 1);
            while names.contains(&Symbol::from(rule_name.clone())) {
                rule_name.push('_');
            }
            rules.push(Rule {
                name: Symbol::from(rule_name),
                head: [Literal::pos(aux)].into(),
                body: [Literal::pos(ante.clone()), Literal::neg(g.consequent.clone())].into(),
                glits: BTreeSet::new(),
            });
        }
        rules.insert(rules.len() - r.glits.len(), main);
    }
    Program::new(rules)
}

/// Symbol count: one per predicate occurrence, term, and bound variable.
pub fn program_size(p: &Program) -> usize {
    p.rules
        .iter()
        .map(|r| {
            let atoms: usize = r.atoms().iter().map(|a| 1 + a.args.len()).sum();
            let bound: usize = r.glits.iter().map(|g| g.bound.len()).sum();
            atoms + bound
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, render_rule};

    #[test]
    fn p_program_example() {
        let p = parse_program("h(a,b) :- q(X). q(X) | not q(X). :- q(a). :- q(b).").unwrap();
        let (pp, m) = to_p_program(&p).unwrap();
        assert_eq!(m.arity, 3);
        assert_eq!(
            render_rule(&pp.rules[0]),
            "r1: #p(a,b,h) :- #p(X,#0,q), X != #0, X != h, X != q."
        );
        assert_eq!(render_rule(&pp.rules[1]), "r2: #p(X,#0,q) | not #p(X,#0,q).");
        let enc = m.encode(&Atom::ground("q", &["x"]));
        assert_eq!(m.decode(&enc), Some(Atom::ground("q", &["x"])));
        assert_eq!(m.decode(&Atom::ground("#p", &["h", "#0", "q"])), None);
    }

    #[test]
    fn p_program_glit() {
        let p = parse_program("q(X) :- forall Y (r(Y) => s(X)). r(a). s(X) | not s(X).").unwrap();
        let (pp, _) = to_p_program(&p).unwrap();
        assert_eq!(
            render_rule(&pp.rules[0]),
            "r1: #p(X,q) :- X != #0, X != q, X != r, X != s, forall Y (#p(Y,r) & Y != #0 & Y != q & Y != r & Y != s => #p(X,s))."
        );
    }

    #[test]
    fn unary_program_gets_binary_predicate() {
        let p = parse_program("a(X) :- b(X).").unwrap();
        assert_eq!(to_p_program(&p).unwrap().1.arity, 2);
    }

    #[test]
    fn hbg_examples() {
        let p = parse_program("p(X) :- p(X). :- q(a). f(X) | not f(X).").unwrap();
        let h = hbg(&p);
        assert_eq!(render_rule(&h.rules[0]), "r1: p(X) | not p(X) :- p(X).");
        assert_eq!(render_rule(&h.rules[1]), "r2: not q(a) :- q(a).");
        assert_eq!(h.rules[2], p.rules[2]);
    }

    #[test]
    fn gua_example() {
        let p = parse_program("q(X) :- f(X,Y). f(a,Y) | not f(a,Y).").unwrap();
        let g = gua(&p).unwrap();
        assert_eq!(render_rule(&g.rules[0]), "r1: q(X) :- #g(X,X), #g(X,Y), #g(Y,Y), f(X,Y).");
        assert_eq!(render_rule(&g.rules[1]), "r2: f(a,Y) | not f(a,Y) :- #g(Y,Y).");
        assert_eq!(render_rule(&g.rules[2]), "#gfact1: #g(a,a).");
        assert_eq!(g.rules.len(), 3);
    }

    #[test]
    fn double_negation_example() {
        let p = parse_program("q(X) :- f(X), forall Y (r(X,Y) => s(Y)).").unwrap();
        let d = double_negation(&p).unwrap();
        assert_eq!(render_rule(&d.rules[0]), "r1: q(X) :- not #q'(X), f(X).");
        assert_eq!(render_rule(&d.rules[1]), "r1_dn1: #q'(X) :- r(X,Y), not s(Y).");
    }

    #[test]
    fn double_negation_rejects_compound_antecedent() {
        let p = parse_program("q(X) :- f(X), forall Y (r(X,Y) & t(Y) => s(Y)).").unwrap();
        assert!(matches!(double_negation(&p), Err(Error::Precondition(_))));
        let rec = parse_program("q(X) :- q(X).").unwrap();
        assert!(double_negation(&rec).is_err());
    }
}
