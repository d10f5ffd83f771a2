//! CTL formulas, Kripke structures, model checking, a brute-force
//! satisfiability oracle, and the encoding of CTL satisfiability as a
//! guarded program with generalized literals.

mod ast;
mod check;
mod encode;
mod oracle;

use std::collections::BTreeSet;

pub use ast::Ctl;
pub use check::{model_check, satisfying_states, Kripke};
pub use encode::{decode, encode, encode_with, predicate_for, AfEncoding, CtlEncoding};
pub use oracle::{sat_oracle, sat_oracle_exact, ORACLE_BUDGET};

/// Negation that cancels a negation it would stack on top of.
fn neg(f: Ctl) -> Ctl {
    match f {
        Ctl::Not(x) => *x,
        other => Ctl::not(other),
    }
}

/// Rewrite into `~`, `&`, `EX`, `E(U)`, `AF`, `true` and propositions.
/// Negations written in the input are kept; only those introduced by the
/// rewriting are cancelled against each other.
pub fn normalize(f: &Ctl) -> Ctl {
    let n = |x: &Ctl| normalize(x);
    match f {
        Ctl::True => Ctl::True,
        Ctl::False => Ctl::not(Ctl::True),
        Ctl::Prop(p) => Ctl::Prop(p.clone()),
        Ctl::Not(a) => Ctl::not(n(a)),
        Ctl::And(a, b) => Ctl::and(n(a), n(b)),
        Ctl::Or(a, b) => neg(Ctl::and(neg(n(a)), neg(n(b)))),
        Ctl::Implies(a, b) => neg(Ctl::and(n(a), neg(n(b)))),
        Ctl::Iff(a, b) => Ctl::and(
            normalize(&Ctl::Implies(a.clone(), b.clone())),
            normalize(&Ctl::Implies(b.clone(), a.clone())),
        ),
        Ctl::EX(a) => Ctl::ex(n(a)),
        Ctl::AX(a) => neg(Ctl::ex(neg(n(a)))),
        Ctl::EU(a, b) => Ctl::eu(n(a), n(b)),
        Ctl::EF(a) => Ctl::eu(Ctl::True, n(a)),
        Ctl::AF(a) => Ctl::af(n(a)),
        Ctl::AG(a) => neg(Ctl::eu(Ctl::True, neg(n(a)))),
        Ctl::EG(a) => neg(Ctl::af(neg(n(a)))),
        Ctl::AU(a, b) => {
            let (na, nb) = (n(a), n(b));
            Ctl::and(
                neg(Ctl::eu(neg(nb.clone()), Ctl::and(neg(na), neg(nb.clone())))),
                Ctl::af(nb),
            )
        }
    }
}

/// Normalized formulas over `props` with at most `max_temporal` temporal
/// operators and at most `max_size` nodes. Conjunctions are kept with
/// strictly ordered operands and negations are never stacked.
pub fn enumerate_normalized(props: &[&str], max_temporal: usize, max_size: usize) -> Vec<Ctl> {
    let mut by_size: Vec<Vec<Ctl>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1].push(Ctl::True);
    for p in props {
        by_size[1].push(Ctl::prop(p));
    }
    for size in 2..=max_size {
        let mut level = Vec::new();
        for f in &by_size[size - 1] {
            if !matches!(f, Ctl::Not(_)) {
                level.push(Ctl::not(f.clone()));
            }
            level.push(Ctl::ex(f.clone()));
            level.push(Ctl::af(f.clone()));
        }
        for left in 1..size - 1 {
            let right = size - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    if a < b {
                        level.push(Ctl::and(a.clone(), b.clone()));
                    }
                    level.push(Ctl::eu(a.clone(), b.clone()));
                }
            }
        }
        level.retain(|f| f.temporal_count() <= max_temporal);
        by_size[size] = level;
    }
    let mut seen = BTreeSet::new();
    by_size.into_iter().flatten().filter(|f| seen.insert(f.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ctl;

    #[test]
    fn abbreviations() {
        let ef = normalize(&parse_ctl("EF p").unwrap());
        assert_eq!(ef, Ctl::eu(Ctl::True, Ctl::prop("p")));
        let ag = normalize(&parse_ctl("AG p").unwrap());
        assert_eq!(ag, Ctl::not(Ctl::eu(Ctl::True, Ctl::not(Ctl::prop("p")))));
        assert!(normalize(&parse_ctl("A(p U q) <-> EG (p | AX q)").unwrap()).is_normalized());
    }

    #[test]
    fn normal_input_unchanged() {
        for src in ["~~p", "AF (p & EX ~q)", "E(true U ~AF p)"] {
            let f = parse_ctl(src).unwrap();
            assert!(f.is_normalized());
            assert_eq!(normalize(&f), f);
        }
    }

    #[test]
    fn enumeration_respects_bounds() {
        let fs = enumerate_normalized(&["p", "q"], 1, 4);
        assert!(fs.iter().all(|f| f.is_normalized() && f.temporal_count() <= 1 && f.size() <= 4));
        assert!(fs.contains(&parse_ctl("AF ~p").unwrap()));
    }
}
