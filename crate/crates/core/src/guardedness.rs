use std::collections::BTreeSet;

use serde::Serialize;

use crate::fpl::{sat_formulas, FixKind, Formula};
use crate::model::{Atom, GeneralizedLiteral, Program, Rule, Symbol, Term};
use crate::parser::{render_atom, render_glit};

/// Largest positive body (or negative head) searched exhaustively for a
/// minimum loose guard; larger sets fall back to the whole set.
const EXHAUSTIVE_GUARD_LIMIT: usize = 16;

/// Thresholds for the bounded check.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GuardConfig {
    pub max_width: usize,
    pub max_arity: usize,
}

impl Default for GuardConfig {
    fn default() -> Self {
        GuardConfig { max_width: 3, max_arity: 3 }
    }
}

/// Guards found for one rule. Sets are in canonical atom order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleGuards {
    /// Minimum loose body guard.
    pub loose_body: Option<Vec<Atom>>,
    /// Single-atom body guard; `X = X` when implicit.
    pub body: Option<Atom>,
    pub implicit_body: bool,
    pub loose_head: Option<Vec<Atom>>,
    pub head: Option<Atom>,
    /// Guard per generalized literal, in rule order.
    pub glits: Vec<Option<Atom>>,
    /// No free variables: every guard condition holds vacuously.
    pub ground: bool,
}

impl RuleGuards {
    pub fn glits_guarded(&self) -> bool {
        self.glits.iter().all(Option::is_some)
    }

    pub fn loosely_guarded(&self) -> bool {
        self.loose_body.is_some() && self.glits_guarded()
    }

    pub fn guarded(&self) -> bool {
        (self.ground || self.body.is_some()) && self.glits_guarded()
    }

    pub fn fully_loosely_guarded(&self) -> bool {
        self.loosely_guarded() && self.loose_head.is_some()
    }

    pub fn fully_guarded(&self) -> bool {
        self.guarded() && (self.ground || self.head.is_some())
    }
}

fn covers(guard: &[&Atom], vars: &BTreeSet<Symbol>) -> bool {
    let sets: Vec<BTreeSet<Symbol>> = guard.iter().map(|a| a.vars()).collect();
    vars.iter()
        .all(|x| vars.iter().filter(|y| x <= *y).all(|y| sets.iter().any(|s| s.contains(x) && s.contains(y))))
}

fn combinations(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if acc.len() == k {
        return f(acc);
    }
    for i in start..n {
        acc.push(i);
        let stop = combinations(n, k, i + 1, acc, f);
        acc.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Smallest subset of `atoms` in which every pair of `vars` (including a
/// variable with itself) co-occurs; ties go to the lexicographically first.
fn min_loose_guard(atoms: &BTreeSet<Atom>, vars: &BTreeSet<Symbol>) -> Option<Vec<Atom>> {
    let all: Vec<&Atom> = atoms.iter().collect();
    if !covers(&all, vars) {
        return None;
    }
    if vars.is_empty() {
        return Some(Vec::new());
    }
    if all.len() > EXHAUSTIVE_GUARD_LIMIT {
        return Some(all.into_iter().cloned().collect());
    }
    for k in 1..=all.len() {
        let mut found = None;
        combinations(all.len(), k, 0, &mut Vec::new(), &mut |idx| {
            let pick: Vec<&Atom> = idx.iter().map(|&i| all[i]).collect();
            if covers(&pick, vars) {
                found = Some(pick.into_iter().cloned().collect());
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    unreachable!("the full set covers")
}

fn single_guard(atoms: &BTreeSet<Atom>, vars: &BTreeSet<Symbol>) -> Option<Atom> {
    atoms.iter().find(|a| vars.is_subset(&a.vars())).cloned()
}

/// Guard of a generalized literal `forall B (guard & rest => consequent)`:
/// the first antecedent conjunct atom containing the bound variables that
/// occur in the literal, the variables of the other conjuncts and those of
/// the consequent.
pub fn analyze_glit(g: &GeneralizedLiteral) -> Option<Atom> {
    let conjuncts = g.antecedent.conjuncts();
    let mut used = g.antecedent.vars();
    used.extend(g.consequent.vars());
    let bound: BTreeSet<Symbol> = g.bound.iter().filter(|b| used.contains(*b)).cloned().collect();
    let mut candidates: Vec<(usize, &Atom)> = conjuncts
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            crate::model::BoolFormula::Atom(a) => Some((i, a)),
            _ => None,
        })
        .collect();
    candidates.sort_by(|x, y| x.1.cmp(y.1));
    candidates.into_iter().find_map(|(i, a)| {
        let mut need = bound.clone();
        for (j, c) in conjuncts.iter().enumerate() {
            if j != i {
                need.extend(c.vars());
            }
        }
        need.extend(g.consequent.vars());
        need.is_subset(&a.vars()).then(|| a.clone())
    })
}

/// Guards of a rule. Ground rules are vacuously guarded; a rule with a
/// single variable `X` and no explicit body guard gets the implicit body
/// guard `X = X`.
pub fn rule_guards(r: &Rule) -> RuleGuards {
    let vars = r.vars();
    let body_pos: BTreeSet<Atom> = r.body_pos().cloned().collect();
    let head_neg: BTreeSet<Atom> = r.head_neg().cloned().collect();
    let mut loose_body = min_loose_guard(&body_pos, &vars);
    let mut body = single_guard(&body_pos, &vars);
    let mut implicit_body = false;
    if vars.len() == 1 && body.is_none() {
        let x = Term::Var(vars.iter().next().unwrap().clone());
        let eq = Atom::eq(x.clone(), x);
        loose_body = Some(vec![eq.clone()]);
        body = Some(eq);
        implicit_body = true;
    }
    if vars.is_empty() {
        body = None;
        loose_body = Some(Vec::new());
    }
    let head = if vars.is_empty() { None } else { single_guard(&head_neg, &vars) };
    RuleGuards {
        loose_body,
        body,
        implicit_body,
        loose_head: min_loose_guard(&head_neg, &vars),
        head,
        glits: r.glits.iter().map(analyze_glit).collect(),
        ground: vars.is_empty(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlitReport {
    pub literal: String,
    pub guard: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleReport {
    pub rule: String,
    pub free: bool,
    pub ground: bool,
    pub loosely_guarded: bool,
    pub guarded: bool,
    pub fully_loosely_guarded: bool,
    pub fully_guarded: bool,
    pub body_guard: Option<Vec<String>>,
    pub head_guard: Option<Vec<String>>,
    /// The body guard is the implicit equality `X = X`.
    pub implicit_guard: bool,
    pub generalized_literals: Vec<GlitReport>,
}

/// Per-rule guard verdicts. The reported guards are single atoms when the
/// rule is guarded and minimum loose guards otherwise.
pub fn analyze_rule(r: &Rule) -> RuleReport {
    let g = rule_guards(r);
    let render = |v: &[Atom]| v.iter().map(render_atom).collect::<Vec<_>>();
    let body_guard = match (&g.body, &g.loose_body) {
        (Some(b), _) => Some(vec![render_atom(b)]),
        (None, Some(l)) => Some(render(l)),
        _ => None,
    };
    let head_guard = match (&g.head, &g.loose_head) {
        (Some(h), _) => Some(vec![render_atom(h)]),
        (None, Some(l)) => Some(render(l)),
        _ => None,
    };
    RuleReport {
        rule: r.name.to_string(),
        free: r.is_free(),
        ground: g.ground,
        loosely_guarded: g.loosely_guarded(),
        guarded: g.guarded(),
        fully_loosely_guarded: g.fully_loosely_guarded(),
        fully_guarded: g.fully_guarded(),
        body_guard,
        head_guard,
        implicit_guard: g.implicit_body,
        generalized_literals: r
            .glits
            .iter()
            .zip(&g.glits)
            .map(|(l, a)| GlitReport { literal: render_glit(l), guard: a.as_ref().map(render_atom) })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ProgramClass {
    #[serde(rename = "FGgP")]
    Fggp,
    #[serde(rename = "GgP")]
    Ggp,
    #[serde(rename = "FGP")]
    Fgp,
    #[serde(rename = "GP")]
    Gp,
    #[serde(rename = "FLGP")]
    Flgp,
    #[serde(rename = "LGP")]
    Lgp,
}

impl std::fmt::Display for ProgramClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProgramClass::Fggp => "FGgP",
            ProgramClass::Ggp => "GgP",
            ProgramClass::Fgp => "FGP",
            ProgramClass::Gp => "GP",
            ProgramClass::Flgp => "FLGP",
            ProgramClass::Lgp => "LGP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GuardReport {
    pub rules: Vec<RuleReport>,
    /// Strongest class, if any.
    pub class: Option<ProgramClass>,
    /// Every class the program belongs to.
    pub classes: Vec<ProgramClass>,
    pub width: usize,
    pub max_arity: usize,
    pub bound: bool,
    pub config: GuardConfig,
}

pub fn analyze_program(p: &Program) -> GuardReport {
    analyze_program_with(p, GuardConfig::default())
}

pub fn analyze_program_with(p: &Program, config: GuardConfig) -> GuardReport {
    let rules: Vec<RuleReport> = p.rules.iter().map(analyze_rule).collect();
    let all = |f: &dyn Fn(&RuleReport) -> bool| rules.iter().filter(|r| !r.free).all(f);
    let mut classes = Vec::new();
    if p.has_glits() {
        if all(&|r| r.fully_guarded) {
            classes.push(ProgramClass::Fggp);
        }
        if all(&|r| r.guarded) {
            classes.push(ProgramClass::Ggp);
        }
    } else {
        let checks: [(ProgramClass, &dyn Fn(&RuleReport) -> bool); 4] = [
            (ProgramClass::Fgp, &|r| r.fully_guarded),
            (ProgramClass::Gp, &|r| r.guarded),
            (ProgramClass::Flgp, &|r| r.fully_loosely_guarded),
            (ProgramClass::Lgp, &|r| r.loosely_guarded),
        ];
        for (c, f) in checks {
            if all(f) {
                classes.push(c);
            }
        }
    }
    let width = sat_formulas(p).iter().map(Formula::width).max().unwrap_or(0);
    let max_arity = p.max_arity();
    GuardReport {
        rules,
        class: classes.first().copied(),
        classes,
        width,
        max_arity,
        bound: width <= config.max_width && max_arity <= config.max_arity,
        config,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fragment {
    #[serde(rename = "GF")]
    Gf,
    #[serde(rename = "LGF")]
    Lgf,
    #[serde(rename = "muGF")]
    MuGf,
    #[serde(rename = "muLGF")]
    MuLgf,
}

impl std::fmt::Display for Fragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Fragment::Gf => "GF",
            Fragment::Lgf => "LGF",
            Fragment::MuGf => "muGF",
            Fragment::MuLgf => "muLGF",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaClass {
    pub fragment: Option<Fragment>,
    pub alternation_free: bool,
}

fn atom_guard(f: &Formula) -> Option<Vec<&Atom>> {
    match f {
        Formula::Atom(a) => Some(vec![a]),
        Formula::And(xs) => xs
            .iter()
            .map(|x| match x {
                Formula::Atom(a) => Some(a),
                _ => None,
            })
            .collect(),
        _ => None,
    }
}

fn guard_ok(guard: &[&Atom], quantified: &[Symbol], rest: &BTreeSet<Symbol>, loose: bool) -> bool {
    let gvars: BTreeSet<Symbol> = guard.iter().flat_map(|a| a.vars()).collect();
    if !quantified.iter().all(|y| gvars.contains(y)) || !rest.is_subset(&gvars) {
        return false;
    }
    if !loose {
        return guard.len() == 1;
    }
    let sets: Vec<BTreeSet<Symbol>> = guard.iter().map(|a| a.vars()).collect();
    quantified
        .iter()
        .all(|y| gvars.iter().all(|z| sets.iter().any(|s| s.contains(y) && s.contains(z))))
}

fn guarded(f: &Formula, loose: bool) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Apply(..) => true,
        Formula::Not(x) => guarded(x, loose),
        Formula::And(xs) | Formula::Or(xs) => xs.iter().all(|x| guarded(x, loose)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => guarded(a, loose) && guarded(b, loose),
        Formula::Fix(fp) => guarded(&fp.body, loose),
        Formula::Forall(ys, body) => {
            let Formula::Implies(g, rest) = &**body else { return false };
            let Some(atoms) = atom_guard(g) else { return false };
            if !loose && atoms.len() != 1 {
                return false;
            }
            guard_ok(&atoms, ys, &rest.free_vars(), loose) && guarded(rest, loose)
        }
        Formula::Exists(ys, body) => {
            let conjuncts: Vec<&Formula> = match &**body {
                Formula::And(xs) => xs.iter().collect(),
                other => vec![other],
            };
            let atomic: Vec<usize> =
                (0..conjuncts.len()).filter(|&i| matches!(conjuncts[i], Formula::Atom(_))).collect();
            let rest_ok = |skip: &dyn Fn(usize) -> bool| {
                let mut fv = BTreeSet::new();
                for (i, c) in conjuncts.iter().enumerate() {
                    if !skip(i) {
                        if !guarded(c, loose) {
                            return None;
                        }
                        fv.extend(c.free_vars());
                    }
                }
                Some(fv)
            };
            if loose {
                let atoms: Vec<&Atom> = atomic
                    .iter()
                    .map(|&i| match conjuncts[i] {
                        Formula::Atom(a) => a,
                        _ => unreachable!(),
                    })
                    .collect();
                match rest_ok(&|i| atomic.contains(&i)) {
                    Some(fv) => !atoms.is_empty() && guard_ok(&atoms, ys, &fv, true),
                    None => false,
                }
            } else {
                atomic.iter().any(|&g| {
                    let Formula::Atom(a) = conjuncts[g] else { unreachable!() };
                    match rest_ok(&|i| i == g) {
                        Some(fv) => guard_ok(&[a], ys, &fv, false),
                        None => false,
                    }
                })
            }
        }
    }
}

fn alternation_free(f: &Formula) -> bool {
    let mut ok = true;
    f.visit(&mut |outer| {
        if let Formula::Fix(fp) = outer {
            fp.body.visit(&mut |inner| {
                if let Formula::Fix(q) = inner {
                    if q.kind != fp.kind && q.body.free_pred_vars().contains(&fp.var) {
                        ok = false;
                    }
                }
            });
        }
    });
    ok
}

/// Syntactic membership in the (loosely) guarded fragment, with fixed
/// points when present. Guards are relational or equality atoms, never
/// fixed point variables.
pub fn formula_class(f: &Formula) -> FormulaClass {
    let mu = f.has_fixpoints();
    let fragment = if guarded(f, false) {
        Some(if mu { Fragment::MuGf } else { Fragment::Gf })
    } else if guarded(f, true) {
        Some(if mu { Fragment::MuLgf } else { Fragment::Lgf })
    } else {
        None
    };
    FormulaClass { fragment, alternation_free: alternation_free(f) }
}

/// Whether any greatest fixed point occurs.
pub fn has_gfp(f: &Formula) -> bool {
    let mut found = false;
    f.visit(&mut |g| found |= matches!(g, Formula::Fix(fp) if fp.kind == FixKind::Gfp));
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpl::parse_formula;
    use crate::parser::parse_program;

    fn rule(src: &str) -> Rule {
        parse_program(src).unwrap().rules.into_iter().next().unwrap()
    }

    #[test]
    fn loose_example() {
        let r = rule("r: a(X) | not g(X,Y,Z) :- not b(X,Y), f(X,Y), f(X,Z), h(Y,Z), not c(Y).");
        let rep = analyze_rule(&r);
        assert!(rep.loosely_guarded && rep.fully_loosely_guarded);
        assert!(!rep.guarded);
        assert_eq!(rep.body_guard.unwrap(), ["f(X,Y)", "f(X,Z)", "h(Y,Z)"]);
        assert_eq!(rep.head_guard.unwrap(), ["g(X,Y,Z)"]);
    }

    #[test]
    fn guarded_not_fully() {
        let rep = analyze_rule(&rule("r: p(X) :- p(X)."));
        assert!(rep.guarded && rep.loosely_guarded);
        assert!(!rep.fully_guarded && !rep.fully_loosely_guarded);
    }

    #[test]
    fn ground_rule_vacuous() {
        let rep = analyze_rule(&rule("a :- not b."));
        assert!(rep.guarded && rep.fully_guarded && rep.ground);
    }

    #[test]
    fn implicit_guard() {
        let rep = analyze_rule(&rule("r: p(X) :- not q(X)."));
        assert!(rep.guarded && rep.implicit_guard);
        assert_eq!(rep.body_guard.unwrap(), ["X = X"]);
    }

    #[test]
    fn minimum_guard_is_chosen() {
        let r = rule("r: p(X,Y) :- a(X), b(X,Y), c(Y), d(X,Y).");
        let g = rule_guards(&r);
        assert_eq!(g.loose_body.unwrap().len(), 1);
        assert_eq!(render_atom(&g.body.unwrap()), "b(X,Y)");
    }

    #[test]
    fn glit_guards() {
        let r = rule("r4: q(Y) :- forall X (f(X,Y) & X != a => well(X)).");
        assert_eq!(render_atom(&analyze_glit(r.glits.iter().next().unwrap()).unwrap()), "f(X,Y)");
        let r = rule("r: h(X) :- s(X), forall Y (r(Y) => s(X)).");
        assert!(analyze_glit(r.glits.iter().next().unwrap()).is_none());
        let r = rule("r: h :- forall Y (q(Y) => r(Y)).");
        assert_eq!(render_atom(&analyze_glit(r.glits.iter().next().unwrap()).unwrap()), "q(Y)");
    }

    #[test]
    fn program_classes() {
        let p = parse_program("r1: p(X) :- f(X,Y). r2: f(X,Y) | not f(X,Y).").unwrap();
        assert_eq!(analyze_program(&p).class, Some(ProgramClass::Gp));
        let p = parse_program("r1: p(X) :- q(X), r(Y).").unwrap();
        let rep = analyze_program(&p);
        assert_eq!(rep.class, None);
        assert!(rep.classes.is_empty());
    }

    #[test]
    fn formula_classes() {
        let inf = parse_formula(
            "(forall X,Y (f(X,Y) -> exists Z (f(Y,Z)))) & (forall X,Y (f(X,Y) -> [LFP W(X). forall Y (f(Y,X) -> W(Y))](X)))",
        )
        .unwrap();
        let c = formula_class(&inf);
        assert_eq!(c.fragment, Some(Fragment::MuGf));
        assert!(c.alternation_free);
        let loose = parse_formula("exists Y (leq(X,Y) & phi(Y) & (forall Z ((leq(X,Z) & lt(Z,Y)) -> psi(Z))))").unwrap();
        assert_eq!(formula_class(&loose).fragment, Some(Fragment::Lgf));
        let bad = parse_formula("forall X,Y (p(X) -> q(Y))").unwrap();
        assert_eq!(formula_class(&bad).fragment, None);
        let alt = parse_formula("[LFP W(X). [GFP V(X). W(X) & V(X)](X)](a)").unwrap();
        assert!(!formula_class(&alt).alternation_free);
    }
}
