mod common;

use std::collections::BTreeSet;

use oasp_core::ctl::{
    decode, encode, enumerate_normalized, model_check, normalize, sat_oracle, satisfying_states, Kripke,
};
use oasp_core::guardedness::{analyze_program_with, GuardConfig};
use oasp_core::parser::{parse_ctl, render_ctl};
use oasp_core::solver::{find_in_universe, SolverConfig};
use oasp_core::{Atom, Term, Universe};
use proptest::prelude::*;

const FORMULAS: [&str; 10] = [
    "AG p",
    "EF (p & q)",
    "A(p U q)",
    "E(p U ~q)",
    "AX (p | q)",
    "EG ~p",
    "AF q -> EX p",
    "p <-> AG q",
    "AG (p -> AF q)",
    "~EX true",
];

fn kripke(n: usize, edges: &BTreeSet<(usize, usize)>, labels: &[u8]) -> Kripke {
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut es: Vec<(String, String)> = edges.iter().filter(|(a, b)| *a < n && *b < n).map(|(a, b)| (states[*a].clone(), states[*b].clone())).collect();
    for i in 0..n {
        if !es.iter().any(|(a, _)| *a == states[i]) {
            es.push((states[i].clone(), states[i].clone()));
        }
    }
    let labels = (0..n)
        .map(|i| {
            let mut l = Vec::new();
            if labels[i] & 1 != 0 { l.push("p".to_string()); }
            if labels[i] & 2 != 0 { l.push("q".to_string()); }
            (states[i].clone(), l)
        })
        .collect();
    Kripke { states, edges: es, labels }
}

#[test]
fn structure_from_json() {
    let k: Kripke = serde_json::from_str(&common::data("kripke.json")).unwrap();
    assert!(model_check(&k, "s0", &parse_ctl("AF p").unwrap()).unwrap());
    assert!(!model_check(&k, "s0", &parse_ctl("p").unwrap()).unwrap());
    let back: Kripke = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
    assert_eq!(back, k);
}

#[test]
fn unsatisfiable_formula() {
    let f = parse_ctl("AG p & EF ~p").unwrap();
    assert!(sat_oracle(&f, 3).unwrap().is_none());
}

#[test]
fn witness_decodes() {
    let f = parse_ctl("EX p & AF q & ~q").unwrap();
    let enc = encode(&f);
    let report = analyze_program_with(&enc.program, GuardConfig { max_width: 2, max_arity: 2 });
    assert!(report.bound);
    let u = Universe::with_fresh(&BTreeSet::new(), 2).unwrap();
    let root = Atom::named(enc.root.clone(), vec![Term::Const(u.elements()[0].clone())]);
    let m = find_in_universe(&enc.program, &u, &[root], &SolverConfig::default()).unwrap().expect("satisfiable");
    let (k, s) = decode(&m, &enc).unwrap();
    assert!(model_check(&k, &s, &f).unwrap());
}

#[test]
fn enumeration_round_trips() {
    for f in enumerate_normalized(&["p", "q"], 2, 6) {
        assert_eq!(parse_ctl(&render_ctl(&f)).unwrap(), f);
        assert_eq!(normalize(&f), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalization_preserves_meaning(n in 1usize..=4,
                                       edges in prop::collection::btree_set((0usize..4, 0usize..4), 0..10),
                                       labels in prop::collection::vec(0u8..4, 4)) {
        let k = kripke(n, &edges, &labels);
        for src in FORMULAS {
            let f = parse_ctl(src).unwrap();
            prop_assert_eq!(satisfying_states(&k, &f).unwrap(), satisfying_states(&k, &normalize(&f)).unwrap(), "{}", src);
            prop_assert_eq!(parse_ctl(&render_ctl(&f)).unwrap(), f);
        }
    }
}
