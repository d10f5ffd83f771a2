use std::collections::{BTreeMap, BTreeSet};

use super::ast::{FixKind, Formula};
use crate::error::{Error, Result};
use crate::guardedness::{analyze_glit, rule_guards};
use crate::model::{
    for_each_tuple, Atom, BoolFormula, GeneralizedLiteral, Literal, Program, Rule, Subst, Symbol, Term, Universe,
};
use crate::transforms::P_PRED;

/// Which completion to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionKind {
    Comp,
    GComp,
    Compg,
    GCompg,
}

impl std::str::FromStr for CompletionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comp" => Ok(CompletionKind::Comp),
            "gcomp" => Ok(CompletionKind::GComp),
            "compg" => Ok(CompletionKind::Compg),
            "gcompg" => Ok(CompletionKind::GCompg),
            _ => Err(Error::Invalid(format!("unknown completion kind {s}"))),
        }
    }
}

/// Atom standing for a rule instance being in the reduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleAtom {
    pub rule: Symbol,
    pub predicate: Symbol,
    pub vars: Vec<Symbol>,
}

/// Atom standing for the antecedent of a generalized literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlitAtom {
    pub rule: Symbol,
    pub predicate: Symbol,
    pub vars: Vec<Symbol>,
    pub literal: GeneralizedLiteral,
}

#[derive(Clone, Debug)]
pub struct Completion {
    pub kind: CompletionKind,
    pub predicate: Symbol,
    pub arity: usize,
    pub constants: Vec<Formula>,
    pub nonempty: Formula,
    pub sat: Vec<Formula>,
    pub gl: Vec<Formula>,
    pub glit: Vec<Formula>,
    pub fpf: Formula,
    pub rule_atoms: Vec<RuleAtom>,
    pub glit_atoms: Vec<GlitAtom>,
}

impl Completion {
    /// All formulas: distinctness axioms, non-emptiness, sat, glit, gl, fpf.
    pub fn formulas(&self) -> Vec<Formula> {
        let mut out = self.constants.clone();
        out.push(self.nonempty.clone());
        out.extend(self.sat.iter().cloned());
        out.extend(self.glit.iter().cloned());
        out.extend(self.gl.iter().cloned());
        out.push(self.fpf.clone());
        out
    }

    /// `M` extended with the rule atoms of instances whose negative parts
    /// hold in `M` and the antecedent atoms of true antecedents.
    pub fn expand(&self, p: &Program, universe: &Universe, m: &BTreeSet<Atom>) -> BTreeSet<Atom> {
        let holds = |a: &Atom| match a.eval_equality() {
            Some(b) => b,
            None => m.contains(a),
        };
        let mut out = m.clone();
        for (r, ra) in p.rules.iter().zip(&self.rule_atoms) {
            for_each_tuple(universe.elements(), ra.vars.len(), |vals| {
                let s = subst_of(&ra.vars, vals);
                let ok = r.head_neg().all(|a| holds(&a.subst(&s))) && r.body_neg().all(|a| !holds(&a.subst(&s)));
                if ok {
                    out.insert(Atom::named(ra.predicate.clone(), consts(vals)));
                }
                true
            });
        }
        for ga in &self.glit_atoms {
            for_each_tuple(universe.elements(), ga.vars.len(), |vals| {
                let s = subst_of(&ga.vars, vals);
                if ga.literal.antecedent.subst(&s).eval(&holds) {
                    out.insert(Atom::named(ga.predicate.clone(), consts(vals)));
                }
                true
            });
        }
        out
    }

    /// Restriction of a structure to the program predicate.
    pub fn project(&self, atoms: &BTreeSet<Atom>) -> BTreeSet<Atom> {
        atoms.iter().filter(|a| a.name() == Some(&self.predicate)).cloned().collect()
    }
}

fn consts(vals: &[Symbol]) -> Vec<Term> {
    vals.iter().cloned().map(Term::Const).collect()
}

fn subst_of(vars: &[Symbol], vals: &[Symbol]) -> Subst {
    vars.iter().cloned().zip(vals.iter().cloned().map(Term::Const)).collect()
}

fn var_terms(vs: &[Symbol]) -> Vec<Term> {
    vs.iter().cloned().map(Term::Var).collect()
}

fn sorted_vars(r: &Rule) -> Vec<Symbol> {
    r.vars().into_iter().collect()
}

fn lit(l: &Literal) -> Formula {
    Formula::from_literal(l)
}

fn neg_atom(a: &Atom) -> Formula {
    Formula::not(Formula::Atom(a.clone()))
}

/// `forall Y (body -> head)` for every rule, with naf read as negation.
pub fn sat_formulas(p: &Program) -> Vec<Formula> {
    p.rules.iter().map(sat_formula).collect()
}

fn sat_formula(r: &Rule) -> Formula {
    let mut body: Vec<Formula> = r.body.iter().map(lit).collect();
    body.extend(r.glits.iter().map(Formula::from_glit));
    let head = Formula::disj(r.head.iter().map(lit).collect());
    Formula::forall(sorted_vars(r), Formula::implies(Formula::conj(body), head))
}

/// The single non-equality predicate; `#p/1` when there is none.
fn p_predicate(p: &Program) -> Result<(Symbol, usize)> {
    let preds = p.signature()?.predicates;
    match preds.len() {
        0 => Ok((Symbol::new(P_PRED), 1)),
        1 => Ok(preds.into_iter().next().unwrap()),
        n => Err(Error::Precondition(format!("not a p-program: {n} predicates"))),
    }
}

fn fresh(base: String, taken: &mut BTreeSet<Symbol>) -> Symbol {
    let mut name = base;
    while taken.contains(&Symbol::new(&name)) {
        name.push('\'');
    }
    let s = Symbol::new(&name);
    taken.insert(s.clone());
    s
}

struct Names {
    rule_atoms: Vec<RuleAtom>,
    glit_atoms: Vec<GlitAtom>,
    xs: Vec<Symbol>,
    w: Symbol,
}

fn names(p: &Program, arity: usize) -> Result<Names> {
    let sig = p.signature()?;
    let mut preds: BTreeSet<Symbol> = sig.predicates.keys().cloned().collect();
    preds.extend(sig.constants.iter().cloned());
    let rule_atoms = p
        .rules
        .iter()
        .map(|r| RuleAtom {
            rule: r.name.clone(),
            predicate: fresh(format!("#r_{}", r.name.as_str().trim_start_matches('#')), &mut preds),
            vars: sorted_vars(r),
        })
        .collect();
    let mut glit_atoms = Vec::new();
    for r in &p.rules {
        for g in &r.glits {
            glit_atoms.push(GlitAtom {
                rule: r.name.clone(),
                predicate: fresh(format!("#gl{}", glit_atoms.len() + 1), &mut preds),
                vars: g.antecedent.vars().into_iter().collect(),
                literal: g.clone(),
            });
        }
    }
    let mut vars = sig.variables.clone();
    let xs = (1..=arity).map(|i| fresh(format!("X{i}"), &mut vars)).collect();
    Ok(Names { rule_atoms, glit_atoms, xs, w: Symbol::new("W") })
}

fn constant_axioms(p: &Program) -> Vec<Formula> {
    let cs: Vec<Symbol> = p.constants().into_iter().collect();
    let mut out = Vec::new();
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i + 1..] {
            out.push(Formula::not(Formula::eq(Term::Const(a.clone()), Term::Const(b.clone()))));
        }
    }
    out
}

fn rule_atom(ra: &RuleAtom) -> Formula {
    Formula::Atom(Atom::named(ra.predicate.clone(), var_terms(&ra.vars)))
}

fn glit_atom(ga: &GlitAtom) -> Formula {
    Formula::Atom(Atom::named(ga.predicate.clone(), var_terms(&ga.vars)))
}

/// `forall B (g(Z) -> consequent)` with the predicate replaced by `W`.
fn reduct_glit(ga: &GlitAtom, pred: &Symbol, w: &Symbol) -> Formula {
    let g = &ga.literal;
    Formula::forall(
        g.bound.clone(),
        Formula::implies(glit_atom(ga), Formula::Atom(g.consequent.clone()).rename_predicate(pred, w)),
    )
}

fn gl_formula(r: &Rule, ra: &RuleAtom) -> Formula {
    let mut rhs: Vec<Formula> = r.head_neg().map(|a| Formula::Atom(a.clone())).collect();
    rhs.extend(r.body_neg().map(neg_atom));
    Formula::forall(ra.vars.clone(), Formula::iff(rule_atom(ra), Formula::conj(rhs)))
}

fn glits_of<'a>(n: &'a Names, r: &Rule) -> Vec<&'a GlitAtom> {
    n.glit_atoms.iter().filter(|g| g.rule == r.name).collect()
}

fn body_w(r: &Rule, pred: &Symbol, w: &Symbol) -> Vec<Formula> {
    r.body_pos().map(|a| Formula::Atom(a.clone()).rename_predicate(pred, w)).collect()
}

fn fpf_formula(pred: &Symbol, n: &Names, disjuncts: Vec<Formula>) -> Result<Formula> {
    let xs = var_terms(&n.xs);
    let mut phi = vec![Formula::Apply(n.w.clone(), xs.clone())];
    phi.extend(disjuncts);
    let fix = Formula::fix(FixKind::Lfp, n.w.clone(), n.xs.clone(), Formula::disj(phi), xs.clone())?;
    Ok(Formula::forall(n.xs.clone(), Formula::implies(Formula::Atom(Atom::named(pred.clone(), xs)), fix)))
}

fn build_plain(p: &Program, with_glits: bool) -> Result<Completion> {
    let (pred, arity) = p_predicate(p)?;
    if !with_glits && p.has_glits() {
        return Err(Error::Precondition("program has generalized literals; use compg".into()));
    }
    let n = names(p, arity)?;
    let mut disjuncts = Vec::new();
    for (r, ra) in p.rules.iter().zip(&n.rule_atoms) {
        let Some(h) = r.head_atom() else { continue };
        let mut parts: Vec<Formula> = n.xs.iter().zip(&h.args).map(|(x, t)| Formula::eq(Term::Var(x.clone()), t.clone())).collect();
        parts.extend(body_w(r, &pred, &n.w));
        parts.extend(glits_of(&n, r).into_iter().map(|ga| reduct_glit(ga, &pred, &n.w)));
        parts.push(rule_atom(ra));
        disjuncts.push(Formula::exists(ra.vars.clone(), Formula::conj(parts)));
    }
    let glit = n
        .glit_atoms
        .iter()
        .map(|ga| Formula::forall(ga.vars.clone(), Formula::iff(glit_atom(ga), Formula::from_bool(&ga.literal.antecedent))))
        .collect();
    Ok(Completion {
        kind: if with_glits { CompletionKind::Compg } else { CompletionKind::Comp },
        constants: constant_axioms(p),
        nonempty: Formula::exists(vec![Symbol::new("X")], Formula::True),
        sat: sat_formulas(p),
        gl: p.rules.iter().zip(&n.rule_atoms).map(|(r, ra)| gl_formula(r, ra)).collect(),
        glit,
        fpf: fpf_formula(&pred, &n, disjuncts)?,
        predicate: pred,
        arity,
        rule_atoms: n.rule_atoms,
        glit_atoms: n.glit_atoms,
    })
}

/// Fixed point completion of a p-program.
pub fn build_comp(p: &Program) -> Result<Completion> {
    build_plain(p, false)
}

/// Fixed point completion of a p-program with generalized literals.
pub fn build_compg(p: &Program) -> Result<Completion> {
    build_plain(p, true)
}

/// Guard split of an antecedent: the guard atom and the other conjuncts.
fn split_antecedent(g: &GeneralizedLiteral, guard: &Atom) -> Vec<Formula> {
    let mut skipped = false;
    g.antecedent
        .conjuncts()
        .into_iter()
        .filter(|c| {
            if !skipped && matches!(c, BoolFormula::Atom(a) if a == guard) {
                skipped = true;
                false
            } else {
                true
            }
        })
        .map(Formula::from_bool)
        .collect()
}

/// `forall B (guard -> consequent | ~rest)`, equivalent to the literal.
fn guarded_glit(g: &GeneralizedLiteral, guard: &Atom) -> Formula {
    let rest = split_antecedent(g, guard);
    let mut disj = vec![Formula::Atom(g.consequent.clone())];
    if !rest.is_empty() {
        disj.push(Formula::not(Formula::conj(rest)));
    }
    let gv = guard.vars();
    let bound: Vec<Symbol> = g.bound.iter().filter(|b| gv.contains(*b)).cloned().collect();
    Formula::forall(bound, Formula::implies(Formula::Atom(guard.clone()), Formula::disj(disj)))
}

fn build_guarded(p: &Program, with_glits: bool) -> Result<Completion> {
    let mut c = build_plain(p, with_glits)?;
    c.kind = if with_glits { CompletionKind::GCompg } else { CompletionKind::GComp };
    let pred = c.predicate.clone();
    let n = Names {
        rule_atoms: c.rule_atoms.clone(),
        glit_atoms: c.glit_atoms.clone(),
        xs: names(p, c.arity)?.xs,
        w: Symbol::new("W"),
    };
    let mut sat = Vec::new();
    let mut gl = Vec::new();
    let mut disjuncts = Vec::new();
    for (r, ra) in p.rules.iter().zip(&n.rule_atoms) {
        let g = rule_guards(r);
        let ok = if with_glits { g.fully_guarded() } else { g.fully_loosely_guarded() };
        if !r.is_free() && !ok {
            let what = if with_glits { "fully guarded" } else { "fully loosely guarded" };
            return Err(Error::Precondition(format!("rule {} is not {what}", r.name)));
        }
        let head_guard: Vec<Atom> = if r.is_free() {
            r.head_neg().cloned().collect()
        } else if with_glits {
            g.head.clone().into_iter().collect()
        } else {
            g.loose_head.clone().unwrap_or_default()
        };
        if !r.is_free() {
            let body_guard: Vec<Atom> = if with_glits {
                g.body.clone().into_iter().collect()
            } else {
                g.loose_body.clone().unwrap_or_default()
            };
            let mut disj: Vec<Formula> = r.head.iter().map(lit).collect();
            disj.extend(r.body_pos().filter(|a| !body_guard.contains(a)).map(neg_atom));
            disj.extend(r.body_neg().map(|a| Formula::Atom(a.clone())));
            for (lit, guard) in r.glits.iter().zip(&g.glits) {
                let guard = guard.as_ref().expect("guarded literal");
                disj.push(Formula::not(guarded_glit(lit, guard)));
            }
            let guard = Formula::conj(body_guard.into_iter().map(Formula::Atom).collect());
            sat.push(Formula::forall(ra.vars.clone(), Formula::implies(guard, Formula::disj(disj))));
        }
        let mut rhs: Vec<Formula> = r.head_neg().map(|a| Formula::Atom(a.clone())).collect();
        rhs.extend(r.body_neg().map(neg_atom));
        gl.push(Formula::forall(ra.vars.clone(), Formula::implies(rule_atom(ra), Formula::conj(rhs))));
        let mut back = vec![rule_atom(ra)];
        back.extend(r.body_neg().map(|a| Formula::Atom(a.clone())));
        back.extend(r.head_neg().filter(|a| !head_guard.contains(a)).map(neg_atom));
        let hg = Formula::conj(head_guard.into_iter().map(Formula::Atom).collect());
        gl.push(Formula::forall(ra.vars.clone(), Formula::implies(hg, Formula::disj(back))));

        let Some(h) = r.head_atom() else { continue };
        let mut outside = Vec::new();
        let mut s = Subst::new();
        for (x, t) in n.xs.iter().zip(&h.args) {
            let xt = Term::Var(x.clone());
            match t {
                Term::Const(_) => outside.push(Formula::eq(xt, t.clone())),
                Term::Var(v) => match s.get(v) {
                    Some(prev) => outside.push(Formula::eq(xt, prev.clone())),
                    None => {
                        s.insert(v.clone(), xt);
                    }
                },
            }
        }
        let mut inside = body_w(r, &pred, &n.w);
        inside.extend(glits_of(&n, r).into_iter().map(|ga| reduct_glit(ga, &pred, &n.w)));
        inside.push(rule_atom(ra));
        let z: Vec<Symbol> = ra.vars.iter().filter(|v| !s.contains_key(*v)).cloned().collect();
        let inside: Vec<Formula> = inside.iter().map(|f| f.subst(&s)).collect();
        if z.is_empty() {
            outside.extend(inside);
        } else {
            outside.push(Formula::exists(z, Formula::conj(inside)));
        }
        disjuncts.push(Formula::conj(outside));
    }
    c.nonempty = Formula::exists(vec![Symbol::new("X")], Formula::eq(Term::var("X"), Term::var("X")));
    c.sat = sat;
    c.gl = gl;
    if with_glits {
        let mut glit = Vec::new();
        for ga in &c.glit_atoms {
            let guard = analyze_glit(&ga.literal).expect("guarded literal");
            glit.push(Formula::forall(
                ga.vars.clone(),
                Formula::implies(glit_atom(ga), Formula::from_bool(&ga.literal.antecedent)),
            ));
            let rest = split_antecedent(&ga.literal, &guard);
            let mut disj = vec![glit_atom(ga)];
            if !rest.is_empty() {
                disj.push(Formula::not(Formula::conj(rest)));
            }
            glit.push(Formula::forall(ga.vars.clone(), Formula::implies(Formula::Atom(guard), Formula::disj(disj))));
        }
        c.glit = glit;
    }
    c.constants = constant_axioms(p);
    c.fpf = fpf_formula(&pred, &n, disjuncts)?;
    Ok(c)
}

/// Guarded rewriting of [`build_comp`] for fully (loosely) guarded p-programs.
pub fn build_gcomp(p: &Program) -> Result<Completion> {
    if p.has_glits() {
        return Err(Error::Precondition("program has generalized literals; use gcompg".into()));
    }
    build_guarded(p, false)
}

/// Guarded rewriting of [`build_compg`] for fully guarded p-programs with
/// generalized literals.
pub fn build_gcompg(p: &Program) -> Result<Completion> {
    build_guarded(p, true)
}

pub fn build(kind: CompletionKind, p: &Program) -> Result<Completion> {
    match kind {
        CompletionKind::Comp => build_comp(p),
        CompletionKind::GComp => build_gcomp(p),
        CompletionKind::Compg => build_compg(p),
        CompletionKind::GCompg => build_gcompg(p),
    }
}

/// Number of symbol occurrences over all formulas.
pub fn completion_size(fs: &[Formula]) -> usize {
    fs.iter().map(Formula::size).sum()
}

/// Predicate arities used by a formula set.
pub fn signature(fs: &[Formula]) -> BTreeMap<Symbol, usize> {
    fs.iter().flat_map(|f| f.predicates()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpl::{find_models, render_formula, FiniteStructure};
    use crate::guardedness::{formula_class, Fragment};
    use crate::parser::parse_program;

    fn show(fs: &[Formula]) -> Vec<String> {
        fs.iter().map(render_formula).collect()
    }

    #[test]
    fn fixpoint_example() {
        let p = parse_program("r: p(X) :- p(X).").unwrap();
        let c = build_comp(&p).unwrap();
        assert_eq!(render_formula(&c.nonempty), "exists X (true)");
        assert_eq!(show(&c.sat), ["forall X (p(X) -> p(X))"]);
        assert_eq!(show(&c.gl), ["forall X (#r_r(X) <-> true)"]);
        assert_eq!(
            render_formula(&c.fpf),
            "forall X1 (p(X1) -> [LFP W(X1). W(X1) | exists X (X1 = X & W(X) & #r_r(X))](X1))"
        );
    }

    #[test]
    fn fixpoint2_gl() {
        let p = parse_program("r1: p(X,b) | not p(X,b) :- X != a, X != b.").unwrap();
        let c = build_comp(&p).unwrap();
        assert_eq!(show(&c.gl), ["forall X (#r_r1(X) <-> (p(X,b) & ~(X = a) & ~(X = b)))"]);
        assert_eq!(show(&c.constants), ["~(a = b)"]);
    }

    #[test]
    fn empty_program() {
        let c = build_comp(&Program::default()).unwrap();
        assert_eq!(render_formula(&c.fpf), "forall X1 (#p(X1) -> [LFP W(X1). W(X1)](X1))");
    }

    #[test]
    fn gcomp_example() {
        let p = parse_program("r: p(X) | not p(X) :- p(X).").unwrap();
        let c = build_gcomp(&p).unwrap();
        assert_eq!(
            render_formula(&c.fpf),
            "forall X1 (p(X1) -> [LFP W(X1). W(X1) | (W(X1) & #r_r(X1))](X1))"
        );
        assert_eq!(show(&c.gl), ["forall X (#r_r(X) -> p(X))", "forall X (p(X) -> #r_r(X))"]);
        let cls = formula_class(&Formula::conj(c.formulas()));
        assert_eq!(cls.fragment, Some(Fragment::MuGf));
        let u = [Symbol::new("x")];
        let models = find_models(&c.formulas(), &u, None).unwrap();
        assert_eq!(models.len(), 1);
        assert!(models[0].atoms.is_empty());
    }

    #[test]
    fn gcompg_example() {
        let p = parse_program("r: p(X) | not p(X) :- p(X), forall Y (p(Y) & p(b) => p(a)).").unwrap();
        let c = build_gcompg(&p).unwrap();
        let text = show(&c.formulas());
        assert!(text.contains(&"forall Y (p(Y) -> (#gl1(Y) | ~p(b)))".to_string()), "{text:?}");
        assert!(text.contains(&"forall Y (#gl1(Y) -> (p(Y) & p(b)))".to_string()));
        assert_eq!(
            show(&c.sat),
            ["forall X (p(X) -> (p(X) | ~p(X) | ~forall Y (p(Y) -> (p(a) | ~p(b)))))"]
        );
        assert_eq!(
            render_formula(&c.fpf),
            "forall X1 (p(X1) -> [LFP W(X1). W(X1) | (W(X1) & forall Y (#gl1(Y) -> W(a)) & #r_r(X1))](X1))"
        );
        let cls = formula_class(&Formula::conj(c.formulas()));
        assert_eq!(cls.fragment, Some(Fragment::MuGf));
        assert!(cls.alternation_free);
    }

    #[test]
    fn compg_glit_definition() {
        let p = parse_program("r4: p(Y,#0,q) :- p(Y,#0,q), forall X (p(X,Y,f) & X != a => p(X,#0,well)).").unwrap();
        let c = build_compg(&p).unwrap();
        assert_eq!(show(&c.glit), ["forall X,Y (#gl1(X,Y) <-> (p(X,Y,f) & ~(X = a)))"]);
        assert!(render_formula(&c.fpf).contains("forall X (#gl1(X,Y) -> W(X,#0,well))"));
    }

    #[test]
    fn repeated_head_variable() {
        let p = parse_program("r: p(X,X) | not p(X,X) :- p(X,X).").unwrap();
        let c = build_gcomp(&p).unwrap();
        let fpf = render_formula(&c.fpf);
        assert!(fpf.contains("X2 = X1 & W(X1,X1) & #r_r(X1)"), "{fpf}");
        let plain = build_comp(&p).unwrap();
        let dom = [Symbol::new("a"), Symbol::new("b")];
        let a = find_models(&plain.formulas(), &dom, None).unwrap();
        let b = find_models(&c.formulas(), &dom, None).unwrap();
        let atoms = |v: Vec<FiniteStructure>| v.into_iter().map(|s| s.atoms).collect::<Vec<_>>();
        assert_eq!(atoms(a), atoms(b));
    }

    #[test]
    fn rejects_unguarded() {
        let p = parse_program("r: p(X) :- p(X).").unwrap();
        assert!(matches!(build_gcomp(&p), Err(Error::Precondition(_))));
        let two = parse_program("r: p(X) :- q(X).").unwrap();
        assert!(matches!(build_comp(&two), Err(Error::Precondition(_))));
    }
}
