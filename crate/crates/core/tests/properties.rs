mod common;

use std::collections::BTreeSet;

use oasp_core::guardedness::{analyze_program, rule_guards, ProgramClass};
use oasp_core::parser::{parse_program, render_program};
use oasp_core::random::{random_guarded_program, random_program, Shape};
use oasp_core::{Literal, Program, Rule, Symbol};
use proptest::prelude::*;

#[test]
fn worked_example_classes() {
    let class = |f: &str| analyze_program(&parse_program(&common::data(f)).unwrap()).class;
    assert_eq!(class("infinity.oasp"), Some(ProgramClass::Ggp));
    assert_eq!(class("gcomp.oasp"), Some(ProgramClass::Fgp));
    assert_eq!(class("fixpoint.oasp"), Some(ProgramClass::Gp));
}

#[test]
fn data_files_round_trip() {
    for f in ["fixpoint2.oasp", "fixpoint.oasp", "gua.oasp", "gp.oasp", "pprog.oasp", "infinity.oasp", "restore.oasp"] {
        let p = parse_program(&common::data(f)).unwrap();
        assert_eq!(parse_program(&render_program(&p)).unwrap(), p, "{f}");
    }
}

fn covers_pairwise(guard: &[oasp_core::Atom], vars: &BTreeSet<Symbol>) -> bool {
    vars.iter().all(|x| vars.iter().all(|y| guard.iter().any(|a| a.vars().contains(x) && a.vars().contains(y))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn programs_round_trip(seed in any::<u64>(), glits in any::<bool>()) {
        let shape = if glits { Shape::small().with_glits() } else { Shape::small() };
        let p = random_program(&mut common::seeded(seed), &shape);
        let text = render_program(&p);
        prop_assert_eq!(parse_program(&text).unwrap(), p, "{}", text);
    }

    #[test]
    fn generated_guarded_programs(seed in any::<u64>(), single in any::<bool>()) {
        let shape = if single { Shape::small().with_glits() } else {
            Shape { variables: vec![Symbol::new("X"), Symbol::new("Y"), Symbol::new("V")], ..Shape::small() }
        };
        let p = random_guarded_program(&mut common::seeded(seed), &shape, single);
        let report = analyze_program(&p);
        let expected = match (single, p.has_glits()) {
            (true, true) => ProgramClass::Fggp,
            (true, false) => ProgramClass::Fgp,
            _ => ProgramClass::Flgp,
        };
        prop_assert!(report.classes.contains(&expected), "{:?} {}", report.classes, render_program(&p));
    }

    #[test]
    fn guards_are_sound(seed in any::<u64>(), glits in any::<bool>()) {
        let shape = if glits { Shape::small().with_glits() } else { Shape::small() };
        let p = random_program(&mut common::seeded(seed), &shape);
        for r in &p.rules {
            let g = rule_guards(r);
            let vars = r.vars();
            let body: BTreeSet<_> = r.body_pos().cloned().collect();
            let head: BTreeSet<_> = r.head_neg().cloned().collect();
            if let Some(l) = &g.loose_body {
                prop_assert!(g.implicit_body || l.iter().all(|a| body.contains(a)));
                prop_assert!(covers_pairwise(l, &vars));
            }
            if let Some(l) = &g.loose_head {
                prop_assert!(l.iter().all(|a| head.contains(a)) && covers_pairwise(l, &vars));
            }
            if let Some(b) = &g.body {
                prop_assert!(vars.is_subset(&b.vars()));
                prop_assert!(g.implicit_body || body.contains(b));
            }
            if let Some(h) = &g.head {
                prop_assert!(head.contains(h) && vars.is_subset(&h.vars()));
            }
            prop_assert!(!g.guarded() || g.ground || g.loosely_guarded() || g.implicit_body);
            prop_assert!(!g.fully_guarded() || g.guarded());
            prop_assert!(!g.fully_loosely_guarded() || g.loosely_guarded());
        }
    }

    #[test]
    fn guards_survive_extra_body_atoms(seed in any::<u64>()) {
        let mut r = common::seeded(seed);
        let p = random_guarded_program(&mut r, &Shape::small(), true);
        let extended: Vec<Rule> = p.rules.iter().map(|rule| {
            if rule.is_free() { return rule.clone(); }
            let mut rule = rule.clone();
            let extra = oasp_core::random::random_atom(&mut r, &Shape::small(), &rule.vars().into_iter().collect::<Vec<_>>());
            rule.body.insert(Literal::pos(extra));
            rule
        }).collect();
        let before = analyze_program(&p);
        let after = analyze_program(&Program::new(extended).unwrap());
        for (a, b) in before.rules.iter().zip(&after.rules) {
            prop_assert!(!a.guarded || b.guarded);
            prop_assert!(!a.loosely_guarded || b.loosely_guarded);
        }
    }
}
