mod common;

use std::collections::{BTreeMap, BTreeSet};

use oasp_core::fpl::{
    build_comp, build_compg, build_gcomp, build_gcompg, eliminate_gfp, eval, eval_sentence, find_models, lfp_stages,
    parse_formula, parse_fpl, render_fpl, FiniteStructure, Formula,
};
use oasp_core::guardedness::{formula_class, Fragment};
use oasp_core::parser::parse_program;
use oasp_core::random::{random_guarded_program, random_program, Shape};
use oasp_core::solver::enumerate_open_answer_sets;
use oasp_core::{Atom, Symbol, Universe};
use proptest::prelude::*;

#[test]
fn comp_golden() {
    let p = parse_program(&common::data("fixpoint.oasp")).unwrap();
    let c = build_comp(&p).unwrap();
    let golden = common::data("fixpoint.comp.fpl");
    assert_eq!(render_fpl(&c.formulas()), golden);
    assert_eq!(parse_fpl(&golden).unwrap(), c.formulas());
}

#[test]
fn gcomp_golden_and_unique_model() {
    let p = parse_program(&common::data("gcomp.oasp")).unwrap();
    let g = build_gcomp(&p).unwrap();
    let golden = common::data("gcomp.gcomp.fpl");
    assert_eq!(render_fpl(&g.formulas()), golden);
    assert_eq!(parse_fpl(&golden).unwrap(), g.formulas());
    let models = find_models(&g.formulas(), &[Symbol::new("x")], None).unwrap();
    assert_eq!(models.len(), 1);
    assert!(models[0].atoms.is_empty());
    let class = formula_class(&Formula::conj(g.formulas()));
    assert_eq!(class.fragment, Some(Fragment::MuGf));
    assert!(class.alternation_free);
}

#[test]
fn fixpoint2_bijection() {
    let p = parse_program(&common::data("fixpoint2.oasp")).unwrap();
    let c = build_comp(&p).unwrap();
    let u = Universe::from_names(&["x", "a", "b"]).unwrap();
    let lhs: BTreeSet<_> =
        enumerate_open_answer_sets(&p, &u, None).unwrap().iter().map(|m| c.expand(&p, &u, &m.atoms)).collect();
    let rhs: BTreeSet<_> = find_models(&c.formulas(), u.elements(), None).unwrap().into_iter().map(|s| s.atoms).collect();
    assert_eq!(lhs.len(), 2);
    assert_eq!(lhs, rhs);
}

fn structure(domain: &[&str], atoms: &[Atom]) -> FiniteStructure {
    FiniteStructure::new(domain.iter().map(|d| Symbol::new(d)), atoms.iter().cloned()).unwrap()
}

const GFP_FORMULAS: [&str; 3] = [
    "forall X ([GFP W(X). exists Y (e(X,Y) & W(Y))](X) -> q(X))",
    "exists X ([GFP W(X). q(X) & forall Y (e(X,Y) -> W(Y))](X))",
    "forall X (q(X) | ~[LFP V(X). q(X) | exists Y (e(X,Y) & [GFP W(Y). V(Y) | exists Z (e(Y,Z) & W(Z))](Y))](X))",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bijection_small(seed in any::<u64>(), arity in 1usize..=2, glits in any::<bool>(), extra in 0usize..=1) {
        let shape = Shape::p_program(arity);
        let p = random_program(&mut common::seeded(seed), &if glits { shape.with_glits() } else { shape });
        let cts = p.constants();
        prop_assume!(cts.len() + extra > 0);
        let u = Universe::with_fresh(&cts, extra).unwrap();
        let c = if p.has_glits() { build_compg(&p).unwrap() } else { build_comp(&p).unwrap() };
        let lhs: BTreeSet<_> =
            enumerate_open_answer_sets(&p, &u, None).unwrap().iter().map(|m| c.expand(&p, &u, &m.atoms)).collect();
        let rhs: BTreeSet<_> = find_models(&c.formulas(), u.elements(), None).unwrap().into_iter().map(|s| s.atoms).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn completions_round_trip(seed in any::<u64>(), fully in any::<bool>()) {
        let shape = if fully { Shape::p_program(2).with_glits() } else { Shape::p_program(2) };
        let p = random_guarded_program(&mut common::seeded(seed), &shape, fully);
        let cs = if fully {
            vec![build_compg(&p).unwrap(), build_gcompg(&p).unwrap()]
        } else {
            vec![build_comp(&p).unwrap(), build_gcomp(&p).unwrap()]
        };
        for c in cs {
            let text = render_fpl(&c.formulas());
            prop_assert_eq!(parse_fpl(&text).unwrap(), c.formulas(), "{}", text);
        }
    }

    #[test]
    fn gfp_elimination_agrees(edges in prop::collection::btree_set((0usize..3, 0usize..3), 0..6),
                              qs in prop::collection::btree_set(0usize..3, 0..3)) {
        let names = ["a", "b", "c"];
        let mut atoms: Vec<Atom> = edges.iter().map(|(x, y)| Atom::ground("e", &[names[*x], names[*y]])).collect();
        atoms.extend(qs.iter().map(|x| Atom::ground("q", &[names[*x]])));
        let s = structure(&names, &atoms);
        for src in GFP_FORMULAS {
            let f = parse_formula(src).unwrap();
            let g = eliminate_gfp(&f);
            prop_assert!(!oasp_core::guardedness::has_gfp(&g));
            prop_assert_eq!(eval_sentence(&f, &s).unwrap(), eval_sentence(&g, &s).unwrap(), "{}", src);
        }
    }

    #[test]
    fn lfp_stages_ascend(edges in prop::collection::btree_set((0usize..4, 0usize..4), 0..8)) {
        let names = ["a", "b", "c", "d"];
        let atoms: Vec<Atom> = edges.iter().map(|(x, y)| Atom::ground("e", &[names[*x], names[*y]])).collect();
        let s = structure(&names, &atoms);
        let Formula::Fix(fp) = parse_formula("[LFP W(X). X = a | exists Y (W(Y) & e(Y,X))](a)").unwrap() else {
            panic!("expected a fixpoint")
        };
        let stages = lfp_stages(&fp, &s).unwrap();
        for w in stages.windows(2) {
            prop_assert!(w[0].is_subset(&w[1]) && w[0] != w[1]);
        }
        // The last stage is the set reachable from a.
        let mut reach: BTreeSet<usize> = [0].into();
        loop {
            let next: BTreeSet<usize> = reach.iter().copied().chain(edges.iter().filter(|(x, _)| reach.contains(x)).map(|(_, y)| *y)).collect();
            if next == reach { break; }
            reach = next;
        }
        let last: BTreeSet<usize> = stages.last().unwrap().iter().map(|t| names.iter().position(|n| *n == t[0].as_str()).unwrap()).collect();
        prop_assert_eq!(last, reach);
        let asg: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        let f = parse_formula("[LFP W(X). X = a | exists Y (W(Y) & e(Y,X))](a)").unwrap();
        prop_assert!(eval(&f, &s, &asg).unwrap());
    }
}
