mod common;

use std::collections::BTreeSet;

use oasp_core::datalog::{check_lite_class, eval_query, lfp_model, stratify, InputStructure, LiteClass};
use oasp_core::parser::{parse_atoms, parse_program};
use oasp_core::random::random_stratified;
use oasp_core::solver::enumerate_open_answer_sets;
use oasp_core::{Program, Rule, Symbol, Universe};
use proptest::prelude::*;

fn tuples(v: &[&[&str]]) -> BTreeSet<Vec<Symbol>> {
    v.iter().map(|t| t.iter().map(|s| Symbol::new(s)).collect()).collect()
}

#[test]
fn reachability_example() {
    let p = stratify(&parse_program(&common::data("reach.dl")).unwrap()).unwrap();
    let input = InputStructure::from_facts(parse_atoms(&common::data("facts.dl")).unwrap()).unwrap();
    assert_eq!(eval_query(&p, "t", &input).unwrap(), tuples(&[&["a", "b"], &["a", "c"], &["b", "c"]]));
    assert_eq!(eval_query(&p, "hasout", &input).unwrap(), tuples(&[&["a"], &["b"]]));
    assert!(eval_query(&p, "sink", &input).unwrap().is_empty());
    assert_eq!(eval_query(&p, "src", &input).unwrap(), tuples(&[&["a"], &["b"]]));
}

#[test]
fn reachability_matches_solver() {
    let p = parse_program(&common::data("reach.dl")).unwrap();
    let facts = parse_atoms(&common::data("facts.dl")).unwrap();
    let mut rules = p.rules.clone();
    for (i, a) in facts.iter().enumerate() {
        rules.push(Rule::new(&format!("fact{i}"), [oasp_core::Literal::pos(a.clone())], [], []).unwrap());
    }
    let with_facts = Program::new(rules).unwrap();
    let u = Universe::from_names(&["a", "b", "c"]).unwrap();
    let sets = enumerate_open_answer_sets(&with_facts, &u, None).unwrap();
    assert_eq!(sets.len(), 1);
    let input = InputStructure::from_facts(facts).unwrap();
    let lfp: BTreeSet<_> = lfp_model(&stratify(&p).unwrap(), &input).unwrap().atoms().iter().filter(|a| !a.is_equality()).cloned().collect();
    assert_eq!(sets[0].atoms, lfp);
}

#[test]
fn lite_classes() {
    let class = |src: &str| check_lite_class(&parse_program(src).unwrap());
    // The transitive rule has three variables and no atom holding all of them.
    assert_eq!(check_lite_class(&parse_program(&common::data("reach.dl")).unwrap()), None);
    assert_eq!(class("t(X,Y) :- f(X,Y). t(X,Y) :- f(X,Y), t(Y,X)."), Some(LiteClass::LiteM));
    assert_eq!(class("a(X) :- e(X), not b(X). b(X) :- e(X)."), Some(LiteClass::LiteR));
    assert_eq!(class("a(X) :- e(X), b(Y). b(X) :- e(X), a(X)."), Some(LiteClass::Lite));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unique_answer_set_is_least_model(seed in any::<u64>(), extra in 0usize..=2) {
        let p = random_stratified(&mut common::seeded(seed), 3, true);
        let cts = p.constants();
        prop_assume!(cts.len() + extra > 0);
        let u = Universe::with_fresh(&cts, extra).unwrap();
        let sets = enumerate_open_answer_sets(&p, &u, None).unwrap();
        prop_assert_eq!(sets.len(), 1);
        let lfp: BTreeSet<_> = lfp_model(&stratify(&p).unwrap(), &InputStructure::identity(&u))
            .unwrap().atoms().iter().filter(|a| !a.is_equality()).cloned().collect();
        prop_assert_eq!(&sets[0].atoms, &lfp);
    }

    #[test]
    fn lite_r_is_recursion_free(seed in any::<u64>()) {
        let p = random_stratified(&mut common::seeded(seed), 4, true);
        if check_lite_class(&p) == Some(LiteClass::LiteR) {
            prop_assert!(oasp_core::datalog::is_recursion_free(&p).unwrap());
        }
    }
}
