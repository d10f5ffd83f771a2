//! Seeded generators of small programs and interpretations for property
//! suites. Every generator is deterministic given the rng state.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::datalog::stratify;
use crate::model::{Atom, BoolFormula, GeneralizedLiteral, Literal, Program, Rule, Symbol, Term};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vocabulary and size limits for random programs.
#[derive(Clone, Debug)]
pub struct Shape {
    pub max_rules: usize,
    pub predicates: Vec<(Symbol, usize)>,
    pub constants: Vec<Symbol>,
    pub variables: Vec<Symbol>,
    /// Names for variables bound by generalized literals.
    pub bound: Vec<Symbol>,
    pub max_body: usize,
    pub naf: bool,
    pub equality: bool,
    pub glits: bool,
    pub free_rules: bool,
    pub constraints: bool,
}

fn syms(names: &[&str]) -> Vec<Symbol> {
    names.iter().map(|n| Symbol::new(n)).collect()
}

impl Shape {
    /// Up to three rules over two predicates of arity at most two.
    pub fn small() -> Shape {
        Shape {
            max_rules: 3,
            predicates: vec![(Symbol::new("p"), 1), (Symbol::new("q"), 2)],
            constants: syms(&["a"]),
            variables: syms(&["X", "Y"]),
            bound: syms(&["Z"]),
            max_body: 2,
            naf: true,
            equality: false,
            glits: false,
            free_rules: true,
            constraints: true,
        }
    }

    /// Single predicate `p` of the given arity, as in a p-program.
    pub fn p_program(arity: usize) -> Shape {
        Shape {
            predicates: vec![(Symbol::new("p"), arity)],
            equality: true,
            ..Shape::small()
        }
    }

    pub fn with_glits(mut self) -> Shape {
        self.glits = true;
        self
    }
}

fn pick<'a, T>(rng: &mut TestRng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("non-empty choice")
}

fn term(rng: &mut TestRng, vars: &[Symbol], constants: &[Symbol]) -> Term {
    if constants.is_empty() || (!vars.is_empty() && rng.gen_bool(0.75)) {
        Term::Var(pick(rng, vars).clone())
    } else {
        Term::Const(pick(rng, constants).clone())
    }
}

fn atom_over(rng: &mut TestRng, pred: &(Symbol, usize), vars: &[Symbol], constants: &[Symbol]) -> Atom {
    Atom::named(pred.0.clone(), (0..pred.1).map(|_| term(rng, vars, constants)).collect())
}

pub fn random_atom(rng: &mut TestRng, shape: &Shape, vars: &[Symbol]) -> Atom {
    let pred = pick(rng, &shape.predicates).clone();
    atom_over(rng, &pred, vars, &shape.constants)
}

fn random_equality(rng: &mut TestRng, shape: &Shape, vars: &[Symbol]) -> Atom {
    let left = Term::Var(pick(rng, vars).clone());
    Atom::eq(left, term(rng, vars, &shape.constants))
}

fn random_glit(rng: &mut TestRng, shape: &Shape, vars: &[Symbol]) -> GeneralizedLiteral {
    let b = pick(rng, &shape.bound).clone();
    let mut scope = vars.to_vec();
    scope.push(b.clone());
    let mut ante = vec![BoolFormula::Atom(random_atom(rng, shape, &scope))];
    if rng.gen_bool(0.3) {
        ante.push(BoolFormula::not(BoolFormula::Atom(random_atom(rng, shape, &scope))));
    }
    GeneralizedLiteral { bound: vec![b], antecedent: BoolFormula::and(ante), consequent: random_atom(rng, shape, &scope) }
}

pub fn random_rule(rng: &mut TestRng, shape: &Shape, name: &str) -> Rule {
    let vars = &shape.variables;
    if shape.free_rules && rng.gen_bool(0.2) {
        let a = random_atom(rng, shape, vars);
        return Rule::new(name, [Literal::pos(a.clone()), Literal::neg(a)], [], []).unwrap();
    }
    let mut head = Vec::new();
    if !shape.constraints || rng.gen_bool(0.85) {
        head.push(Literal::pos(random_atom(rng, shape, vars)));
    }
    if shape.naf && rng.gen_bool(0.25) {
        head.push(Literal::neg(random_atom(rng, shape, vars)));
    }
    let mut body = Vec::new();
    for _ in 0..rng.gen_range(0..=shape.max_body) {
        let negated = shape.naf && rng.gen_bool(0.35);
        let a = if shape.equality && rng.gen_bool(0.15) {
            random_equality(rng, shape, vars)
        } else {
            random_atom(rng, shape, vars)
        };
        body.push(Literal { atom: a, negated });
    }
    let mut glits = Vec::new();
    if shape.glits && rng.gen_bool(0.4) {
        glits.push(random_glit(rng, shape, vars));
    }
    if head.is_empty() && body.is_empty() && glits.is_empty() {
        body.push(Literal::pos(random_atom(rng, shape, vars)));
    }
    Rule::new(name, head, body, glits).unwrap()
}

pub fn random_program(rng: &mut TestRng, shape: &Shape) -> Program {
    let n = rng.gen_range(1..=shape.max_rules);
    let rules = (1..=n).map(|i| random_rule(rng, shape, &format!("r{i}"))).collect();
    Program::new(rules).expect("generated program is valid")
}

/// Atoms over `vars` in which every pair of `vars` co-occurs, using
/// predicates of maximal arity.
fn covering_atoms(rng: &mut TestRng, shape: &Shape, vars: &[Symbol]) -> Vec<Atom> {
    let max = shape.predicates.iter().map(|p| p.1).max().unwrap_or(0);
    let widest: Vec<&(Symbol, usize)> = shape.predicates.iter().filter(|p| p.1 == max).collect();
    let groups: Vec<Vec<Symbol>> = if vars.len() <= max {
        vec![vars.to_vec()]
    } else {
        let mut out = Vec::new();
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                out.push(vec![vars[i].clone(), vars[j].clone()]);
            }
        }
        out
    };
    groups
        .into_iter()
        .map(|mut g| {
            let pred = (*pick(rng, &widest)).clone();
            g.shuffle(rng);
            let mut args: Vec<Term> = g.iter().cloned().map(Term::Var).collect();
            while args.len() < pred.1 {
                args.push(term(rng, &g, &shape.constants));
            }
            args.shuffle(rng);
            Atom::named(pred.0, args)
        })
        .collect()
}

/// A fully (loosely) guarded program: each non-free rule has a body guard
/// and a head guard built first, then extra literals over the same
/// variables. With `single` guards are single atoms and the result is
/// fully guarded; generalized literals are guarded when enabled.
pub fn random_guarded_program(rng: &mut TestRng, shape: &Shape, single: bool) -> Program {
    let max = shape.predicates.iter().map(|p| p.1).max().unwrap_or(0);
    let limit = if single { max.min(shape.variables.len()) } else { shape.variables.len() };
    let n = rng.gen_range(1..=shape.max_rules);
    let mut rules = Vec::new();
    for i in 1..=n {
        let name = format!("r{i}");
        if shape.free_rules && rng.gen_bool(0.2) {
            let a = random_atom(rng, shape, &shape.variables);
            rules.push(Rule::new(&name, [Literal::pos(a.clone()), Literal::neg(a)], [], []).unwrap());
            continue;
        }
        let k = rng.gen_range(0..=limit);
        let mut vars = shape.variables.clone();
        vars.shuffle(rng);
        vars.truncate(k);
        vars.sort();
        let mut head: Vec<Literal> = Vec::new();
        let mut body: Vec<Literal> = Vec::new();
        if !vars.is_empty() {
            body.extend(covering_atoms(rng, shape, &vars).into_iter().map(Literal::pos));
            head.extend(covering_atoms(rng, shape, &vars).into_iter().map(Literal::neg));
        }
        let scope = if vars.is_empty() { Vec::new() } else { vars.clone() };
        let atom = |rng: &mut TestRng| random_atom(rng, shape, &scope);
        if !shape.constraints || rng.gen_bool(0.85) {
            let a = atom(rng);
            head.push(Literal::pos(a));
        }
        for _ in 0..rng.gen_range(0..=shape.max_body.saturating_sub(1)) {
            let negated = shape.naf && rng.gen_bool(0.4);
            let a = if shape.equality && !scope.is_empty() && rng.gen_bool(0.2) {
                random_equality(rng, shape, &scope)
            } else {
                atom(rng)
            };
            body.push(Literal { atom: a, negated });
        }
        let mut glits = Vec::new();
        if shape.glits && rng.gen_bool(0.5) {
            glits.push(guarded_glit(rng, shape, &scope));
        }
        let head_pos: Vec<Literal> = head.iter().filter(|l| !l.negated).cloned().collect();
        if head_pos.len() > 1 {
            head.retain(|l| l.negated || l == &head_pos[0]);
        }
        if head.is_empty() && body.is_empty() && glits.is_empty() {
            head.push(Literal::pos(atom(rng)));
        }
        rules.push(Rule::new(&name, head, body, glits).unwrap());
    }
    Program::new(rules).expect("generated program is valid")
}

/// `forall B (g & rest => c)` where `g` holds `B`, one free variable (or
/// a constant) and covers everything else.
fn guarded_glit(rng: &mut TestRng, shape: &Shape, free: &[Symbol]) -> GeneralizedLiteral {
    let b = pick(rng, &shape.bound).clone();
    let max = shape.predicates.iter().map(|p| p.1).max().unwrap_or(1);
    let wide: Vec<(Symbol, usize)> = shape.predicates.iter().filter(|p| p.1 == max).cloned().collect();
    let pred = pick(rng, &wide).clone();
    let mut gvars = vec![b.clone()];
    if max >= 2 && !free.is_empty() && rng.gen_bool(0.6) {
        gvars.push(pick(rng, free).clone());
    }
    let mut args: Vec<Term> = gvars.iter().cloned().map(Term::Var).collect();
    while args.len() < pred.1 {
        args.push(term(rng, &gvars, &shape.constants));
    }
    args.truncate(pred.1);
    args.shuffle(rng);
    let guard = Atom::named(pred.0, args);
    let inner: Vec<Symbol> = guard.vars().into_iter().collect();
    let mut ante = vec![BoolFormula::Atom(guard)];
    if rng.gen_bool(0.4) {
        let extra = if shape.equality && rng.gen_bool(0.5) && !shape.constants.is_empty() {
            BoolFormula::not(BoolFormula::Atom(Atom::eq(
                Term::Var(b.clone()),
                Term::Const(pick(rng, &shape.constants).clone()),
            )))
        } else {
            BoolFormula::Atom(random_atom(rng, shape, &inner))
        };
        ante.push(extra);
    }
    GeneralizedLiteral {
        bound: vec![b],
        antecedent: BoolFormula::and(ante),
        consequent: random_atom(rng, shape, &inner),
    }
}

/// Stratified Datalog program with generalized literals. Extensional
/// predicates `e/1`, `f/2`; intensional `a/1`, `b/1`, `c/2`.
pub fn random_stratified(rng: &mut TestRng, max_rules: usize, glits: bool) -> Program {
    let edb = [(Symbol::new("e"), 1), (Symbol::new("f"), 2)];
    let idb = [(Symbol::new("a"), 1), (Symbol::new("b"), 1), (Symbol::new("c"), 2)];
    let all: Vec<(Symbol, usize)> = edb.iter().chain(idb.iter()).cloned().collect();
    let vars = syms(&["X", "Y"]);
    let constants = syms(&["k"]);
    loop {
        let n = rng.gen_range(1..=max_rules);
        let mut rules = Vec::new();
        for i in 1..=n {
            let head = {
                let pr = pick(rng, &idb).clone();
                atom_over(rng, &pr, &vars, &constants)
            };
            let mut body = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let negated = rng.gen_bool(0.3);
                let pr = pick(rng, &all).clone();
                body.push(Literal { atom: atom_over(rng, &pr, &vars, &constants), negated });
            }
            let mut gl = Vec::new();
            if glits && rng.gen_bool(0.4) {
                let z = Symbol::new("Z");
                let free = pick(rng, &vars).clone();
                let ante = Atom::named(Symbol::new("f"), {
                    let mut a = vec![Term::Var(z.clone()), Term::Var(free)];
                    a.shuffle(rng);
                    a
                });
                let inner: Vec<Symbol> = ante.vars().into_iter().collect();
                let pr = pick(rng, &all).clone();
                let cons = atom_over(rng, &pr, &inner, &[]);
                gl.push(GeneralizedLiteral { bound: vec![z], antecedent: BoolFormula::Atom(ante), consequent: cons });
            }
            rules.push(Rule::new(&format!("r{i}"), [Literal::pos(head)], body, gl).unwrap());
        }
        let p = Program::new(rules).expect("generated program is valid");
        if stratify(&p).is_ok() {
            return p;
        }
    }
}

/// Each atom of `base` independently with probability `density`.
pub fn random_subset(rng: &mut TestRng, base: &BTreeSet<Atom>, density: f64) -> BTreeSet<Atom> {
    base.iter().filter(|_| rng.gen_bool(density)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guardedness::rule_guards;

    #[test]
    fn deterministic() {
        let a = random_program(&mut rng(7), &Shape::small());
        let b = random_program(&mut rng(7), &Shape::small());
        assert_eq!(a, b);
    }

    #[test]
    fn guarded_generator_is_guarded() {
        let mut r = rng(1);
        for single in [true, false] {
            for _ in 0..200 {
                let shape = if single { Shape::p_program(2).with_glits() } else { Shape::p_program(2) };
                let shape = Shape { variables: syms(&["X", "Y", "W"]), ..shape };
                let p = random_guarded_program(&mut r, &shape, single);
                for rule in p.rules.iter().filter(|r| !r.is_free()) {
                    let g = rule_guards(rule);
                    let ok = if single { g.fully_guarded() } else { g.fully_loosely_guarded() };
                    assert!(ok, "{}", crate::parser::render_rule(rule));
                }
            }
        }
    }

    #[test]
    fn stratified_generator() {
        let mut r = rng(3);
        for _ in 0..50 {
            assert!(stratify(&random_stratified(&mut r, 3, true)).is_ok());
        }
    }
}
