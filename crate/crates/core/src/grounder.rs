//! Instantiation of programs over a universe.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{for_each_tuple, Atom, Literal, Program, Rule, Subst, Symbol, Term, Universe};

/// A ground rule together with the rule and binding it came from.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroundRule {
    pub rule: Rule,
    pub source: usize,
    pub binding: Vec<(Symbol, Symbol)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().map(|g| &g.rule)
    }
}

fn check_constants(p: &Program, u: &Universe) -> Result<()> {
    for c in p.constants() {
        if !u.contains(&c) {
            return Err(Error::Universe(format!("constant {c} is not in the universe")));
        }
    }
    Ok(())
}

/// All instances of every rule, enumerated rule by rule with variable
/// bindings in lexicographic order (variables sorted, universe in its order).
pub fn ground(p: &Program, u: &Universe) -> Result<GroundProgram> {
    check_constants(p, u)?;
    let mut out = Vec::new();
    for (i, r) in p.rules.iter().enumerate() {
        let vars: Vec<Symbol> = r.vars().into_iter().collect();
        for_each_tuple(u.elements(), vars.len(), |vals| {
            let s: Subst = vars.iter().cloned().zip(vals.iter().map(|v| Term::Const(v.clone()))).collect();
            out.push(GroundRule {
                rule: r.subst(&s),
                source: i,
                binding: vars.iter().cloned().zip(vals.iter().cloned()).collect(),
            });
            true
        });
    }
    Ok(GroundProgram { rules: out })
}

/// Ground atoms over the program predicates (equality excluded).
pub fn herbrand_base(p: &Program, u: &Universe) -> Result<BTreeSet<Atom>> {
    check_constants(p, u)?;
    let mut out = BTreeSet::new();
    for (pred, arity) in p.predicates() {
        for_each_tuple(u.elements(), arity, |vals| {
            out.insert(Atom::named(pred.clone(), vals.iter().map(|v| Term::Const(v.clone())).collect()));
            true
        });
    }
    Ok(out)
}

/// Inequalities `var != c` for every predicate name `c` of the program and `#0`.
pub fn in_set(var: &Symbol, p: &Program) -> BTreeSet<Literal> {
    let mut names: Vec<Symbol> = p.predicates().into_keys().collect();
    names.push(Symbol::new(crate::ZERO));
    names
        .into_iter()
        .map(|c| Literal::neg(Atom::eq(Term::Var(var.clone()), Term::Const(c))))
        .collect()
}

pub fn in_set_many<'a>(vars: impl IntoIterator<Item = &'a Symbol>, p: &Program) -> BTreeSet<Literal> {
    vars.into_iter().flat_map(|v| in_set(v, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn instance_count() {
        let p = parse_program("r(X,Y) :- s(X), not t(Y). f: s(a).").unwrap();
        let u = Universe::from_names(&["a", "b", "c"]).unwrap();
        let g = ground(&p, &u).unwrap();
        assert_eq!(g.len(), 9 + 1);
        assert!(g.iter().all(|r| r.is_ground()));
    }

    #[test]
    fn glit_bound_vars_stay() {
        let p = parse_program("a(X) :- forall X (~q(X) => b(X)), not c(X).").unwrap();
        let u = Universe::from_names(&["x", "y"]).unwrap();
        let g = ground(&p, &u).unwrap();
        assert_eq!(g.len(), 2);
        let gl = g.rules[0].rule.glits.iter().next().unwrap();
        assert_eq!(gl.free_vars().len(), 0);
        assert_eq!(gl.antecedent.vars().len(), 1);
    }

    #[test]
    fn missing_constant() {
        let p = parse_program("p(a).").unwrap();
        let u = Universe::from_names(&["b"]).unwrap();
        assert!(matches!(ground(&p, &u), Err(Error::Universe(_))));
    }

    #[test]
    fn base_size() {
        let p = parse_program("p(X,Y) :- q(X). q(a).").unwrap();
        let u = Universe::from_names(&["a", "b"]).unwrap();
        assert_eq!(herbrand_base(&p, &u).unwrap().len(), 4 + 2);
    }
}
