mod common;

use std::collections::BTreeSet;

use oasp_core::grounder::ground;
use oasp_core::parser::{parse_atoms, parse_program};
use oasp_core::random::{random_program, random_subset, Shape};
use oasp_core::semantics::{derivation_depths, is_open_answer_set, reduct_commute_check};
use oasp_core::solver::enumerate_open_answer_sets;
use oasp_core::{Atom, OpenInterpretation, Program, Universe};
use proptest::prelude::*;

fn solver_sets(p: &Program, u: &Universe) -> BTreeSet<BTreeSet<Atom>> {
    enumerate_open_answer_sets(p, u, None).unwrap().into_iter().map(|m| m.atoms).collect()
}

fn set(src: &str) -> BTreeSet<Atom> {
    parse_atoms(src).unwrap().into_iter().collect()
}

/// Oracle and solver agree with counts frozen from the oracle.
#[test]
fn frozen_answer_set_counts() {
    let cases: [(&str, &[&str], usize); 6] = [
        ("fixpoint2.oasp", &["x", "y", "a", "b"], 4),
        ("infinity.oasp", &["#u1", "#u2"], 1),
        ("gp.oasp", &["x", "y"], 4),
        ("restore.oasp", &["#u1", "#u2"], 101),
        ("gua.oasp", &["a", "#u1"], 4),
        ("pprog.oasp", &["a", "#u1"], 4),
    ];
    for (file, names, count) in cases {
        let p = parse_program(&common::data(file)).unwrap();
        let u = Universe::from_names(names).unwrap();
        let oracle = common::answer_sets(&p, &u);
        assert_eq!(oracle.len(), count, "{file}");
        assert_eq!(solver_sets(&p, &u), oracle, "{file}");
    }
}

#[test]
fn frozen_answer_sets() {
    let p = parse_program(&common::data("gp.oasp")).unwrap();
    let u = Universe::from_names(&["x", "y"]).unwrap();
    let want: BTreeSet<_> = [
        set("p(x), p(y)"),
        set("p(x), p(y), q(x), q(y), r(x), r(y)"),
        set("p(x), p(y), q(x), r(x)"),
        set("p(x), p(y), q(y), r(y)"),
    ]
    .into();
    assert_eq!(solver_sets(&p, &u), want);

    let p = parse_program(&common::data("infinity.oasp")).unwrap();
    let u = Universe::from_names(&["#u1", "#u2"]).unwrap();
    assert_eq!(solver_sets(&p, &u), [BTreeSet::new()].into());
}

#[test]
fn restore_has_no_finite_restore_atom() {
    let p = parse_program(&common::data("restore.oasp")).unwrap();
    let u = Universe::from_names(&["#u1", "#u2"]).unwrap();
    let sets = solver_sets(&p, &u);
    assert!(sets.iter().flatten().all(|a| a.name().unwrap().as_str() != "restore"));
    assert!(sets.iter().flatten().any(|a| a.name().unwrap().as_str() == "backSucc"));
}

fn small_universe(p: &Program, extra: usize) -> Option<Universe> {
    let cts = p.constants();
    if cts.is_empty() && extra == 0 {
        return None;
    }
    Universe::with_fresh(&cts, extra).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_matches_subset_oracle(seed in any::<u64>(), glits in any::<bool>(), extra in 0usize..=2) {
        let shape = if glits { Shape::small().with_glits() } else { Shape::small() };
        let p = random_program(&mut common::seeded(seed), &shape);
        let Some(u) = small_universe(&p, extra) else { return Ok(()) };
        prop_assume!(common::base_size(&p, &u) <= 12);
        prop_assert_eq!(solver_sets(&p, &u), common::answer_sets(&p, &u));
    }

    #[test]
    fn checker_matches_oracle(seed in any::<u64>(), density in 0.0f64..1.0) {
        let mut r = common::seeded(seed);
        let p = random_program(&mut r, &Shape::small().with_glits());
        let Some(u) = small_universe(&p, 2) else { return Ok(()) };
        let base = oasp_core::grounder::herbrand_base(&p, &u).unwrap();
        prop_assume!(base.len() <= 12);
        let m = random_subset(&mut r, &base, density);
        let verdict = is_open_answer_set(&p, &OpenInterpretation::new(u.clone(), m.clone())).unwrap();
        prop_assert_eq!(verdict, common::is_answer_set(&p, &u, &m));
    }

    #[test]
    fn reducts_commute(seed in any::<u64>(), density in 0.0f64..1.0) {
        let mut r = common::seeded(seed);
        let p = random_program(&mut r, &Shape::small().with_glits());
        let Some(u) = small_universe(&p, 2) else { return Ok(()) };
        let base = oasp_core::grounder::herbrand_base(&p, &u).unwrap();
        let m = random_subset(&mut r, &base, density);
        prop_assert!(reduct_commute_check(&ground(&p, &u).unwrap(), &OpenInterpretation::new(u, m)));
    }

    #[test]
    fn grounding_size(seed in any::<u64>(), extra in 1usize..=3) {
        let p = random_program(&mut common::seeded(seed), &Shape::small().with_glits());
        let u = Universe::with_fresh(&p.constants(), extra).unwrap();
        let expected: usize = p.rules.iter().map(|r| u.len().pow(r.vars().len() as u32)).sum();
        prop_assert_eq!(ground(&p, &u).unwrap().len(), expected);
    }

    #[test]
    fn derivations_are_finite(seed in any::<u64>(), extra in 0usize..=2) {
        let p = random_program(&mut common::seeded(seed), &Shape::small().with_glits());
        let Some(u) = small_universe(&p, extra) else { return Ok(()) };
        for m in enumerate_open_answer_sets(&p, &u, None).unwrap() {
            let depths = derivation_depths(&p, &m).unwrap();
            for a in &m.atoms {
                let d = depths.get(a).copied();
                prop_assert!(d.is_some_and(|d| d <= m.atoms.len()), "{:?} depth {:?}", a, d);
            }
        }
    }

    #[test]
    fn renaming_fresh_elements(seed in any::<u64>()) {
        let p = random_program(&mut common::seeded(seed), &Shape::small());
        let cts = p.constants();
        let u = Universe::with_fresh(&cts, 2).unwrap();
        prop_assume!(common::base_size(&p, &u) <= 14);
        let fresh: Vec<_> = u.elements().iter().filter(|e| !cts.contains(*e)).cloned().collect();
        let mut swapped: Vec<_> = cts.iter().cloned().collect();
        swapped.extend(fresh.iter().rev().cloned());
        let v = Universe::new(swapped).unwrap();
        let swap = |m: &BTreeSet<Atom>| -> BTreeSet<Atom> {
            m.iter().map(|a| {
                let mut b = a.clone();
                for t in &mut b.args {
                    if let oasp_core::Term::Const(c) = t {
                        if *c == fresh[0] { *c = fresh[1].clone(); } else if *c == fresh[1] { *c = fresh[0].clone(); }
                    }
                }
                b
            }).collect()
        };
        let a: BTreeSet<_> = solver_sets(&p, &u).iter().map(swap).collect();
        prop_assert_eq!(a, solver_sets(&p, &v));
    }
}
