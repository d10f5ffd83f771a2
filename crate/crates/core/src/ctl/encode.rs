use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use super::check::Kripke;
use super::{normalize, Ctl};
use crate::error::{Error, Result};
use crate::model::{Atom, BoolFormula, GeneralizedLiteral, Literal, OpenInterpretation, Program, Rule, Symbol, Term};
use crate::parser::render_ctl;

/// How the "for all successors" rule of `AF` is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfEncoding {
    /// A generalized literal over the successors.
    Glit,
    /// A double negation through an auxiliary predicate; known to be unsound.
    DoubleNegation,
}

#[derive(Clone, Debug)]
pub struct CtlEncoding {
    pub program: Program,
    /// Predicate of the (normalized) input formula.
    pub root: Symbol,
    /// Predicate name to rendered subformula.
    pub mapping: BTreeMap<Symbol, String>,
    pub propositions: Vec<Symbol>,
}

/// Predicate standing for a subformula: `pr_<name>` for propositions, a
/// reserved hash-derived name otherwise.
pub fn predicate_for(q: &Ctl) -> Symbol {
    match q {
        Ctl::Prop(p) => Symbol::from(format!("pr_{p}")),
        Ctl::True => Symbol::new("pr_true"),
        _ => Symbol::from(format!("#pr_{}", hash_suffix(q))),
    }
}

fn hash_suffix(q: &Ctl) -> String {
    let digest = Sha256::digest(render_ctl(q).as_bytes());
    digest[..4].iter().map(|b| format!("{b:02x}")).collect()
}

fn s() -> Term {
    Term::var("S")
}

fn n() -> Term {
    Term::var("N")
}

fn pr(q: &Ctl, t: Term) -> Atom {
    Atom::named(predicate_for(q), vec![t])
}

fn next(a: Term, b: Term) -> Atom {
    Atom::new("next", vec![a, b])
}

fn rule(name: String, head: Option<Atom>, body: Vec<Literal>, glits: Vec<GeneralizedLiteral>) -> Rule {
    Rule {
        name: Symbol::from(name),
        head: head.into_iter().map(Literal::pos).collect(),
        body: body.into_iter().collect(),
        glits: glits.into_iter().collect(),
    }
}

fn closure(p: &Ctl, out: &mut Vec<Ctl>) {
    match p {
        Ctl::True | Ctl::False | Ctl::Prop(_) => {}
        Ctl::Not(a) | Ctl::EX(a) | Ctl::AF(a) => closure(a, out),
        Ctl::And(a, b) | Ctl::EU(a, b) => {
            closure(a, out);
            closure(b, out);
        }
        _ => unreachable!("normalized formula"),
    }
    if !out.contains(p) {
        out.push(p.clone());
    }
}

pub fn encode(p: &Ctl) -> CtlEncoding {
    encode_with(p, AfEncoding::Glit)
}

/// Generating rules for propositions and transitions, then one group of
/// defining rules per subformula of the normalized input.
pub fn encode_with(p: &Ctl, af: AfEncoding) -> CtlEncoding {
    let p = normalize(p);
    let props = p.props();
    let mut rules = Vec::new();
    for q in &props {
        let a = pr(&Ctl::Prop(q.clone()), s());
        rules.push(Rule {
            name: Symbol::from(format!("g1_{q}")),
            head: [Literal::pos(a.clone()), Literal::neg(a)].into(),
            body: BTreeSet::new(),
            glits: BTreeSet::new(),
        });
    }
    let nx = next(s(), n());
    rules.push(Rule {
        name: Symbol::new("g2"),
        head: [Literal::pos(nx.clone()), Literal::neg(nx.clone())].into(),
        body: BTreeSet::new(),
        glits: BTreeSet::new(),
    });
    let succ = Atom::new("succ", vec![s()]);
    rules.push(rule("g3a".into(), Some(succ.clone()), vec![Literal::pos(nx.clone())], vec![]));
    rules.push(rule("g3b".into(), None, vec![Literal::pos(Atom::eq(s(), s())), Literal::neg(succ)], vec![]));

    let mut sub = Vec::new();
    closure(&p, &mut sub);
    let mut mapping = BTreeMap::new();
    for q in &sub {
        let pred = predicate_for(q);
        mapping.insert(pred.clone(), render_ctl(q));
        let tag = pred.as_str().trim_start_matches('#').trim_start_matches("pr_").to_string();
        let head = Some(pr(q, s()));
        match q {
            Ctl::Prop(_) => {}
            Ctl::True => rules.push(rule("d_true".into(), head, vec![Literal::pos(Atom::eq(s(), s()))], vec![])),
            Ctl::Not(a) => rules.push(rule(format!("d1_{tag}"), head, vec![Literal::neg(pr(a, s()))], vec![])),
            Ctl::And(a, b) => rules.push(rule(
                format!("d2_{tag}"),
                head,
                vec![Literal::pos(pr(a, s())), Literal::pos(pr(b, s()))],
                vec![],
            )),
            Ctl::AF(a) => {
                rules.push(rule(format!("d3a_{tag}"), head.clone(), vec![Literal::pos(pr(a, s()))], vec![]));
                match af {
                    AfEncoding::Glit => {
                        let g = GeneralizedLiteral {
                            bound: vec![Symbol::new("N")],
                            antecedent: BoolFormula::Atom(nx.clone()),
                            consequent: pr(q, n()),
                        };
                        rules.push(rule(format!("d3b_{tag}"), head, vec![], vec![g]));
                    }
                    AfEncoding::DoubleNegation => {
                        let aux = Atom::named(Symbol::from(format!("#aux_{tag}")), vec![s()]);
                        rules.push(rule(format!("d3b_{tag}"), head, vec![Literal::neg(aux.clone())], vec![]));
                        rules.push(rule(
                            format!("d3c_{tag}"),
                            Some(aux),
                            vec![Literal::pos(nx.clone()), Literal::neg(pr(q, n()))],
                            vec![],
                        ));
                    }
                }
            }
            Ctl::EU(a, b) => {
                rules.push(rule(format!("d4_{tag}"), head.clone(), vec![Literal::pos(pr(b, s()))], vec![]));
                rules.push(rule(
                    format!("d5_{tag}"),
                    head,
                    vec![Literal::pos(pr(a, s())), Literal::pos(nx.clone()), Literal::pos(pr(q, n()))],
                    vec![],
                ));
            }
            Ctl::EX(a) => rules.push(rule(
                format!("d6_{tag}"),
                head,
                vec![Literal::pos(nx.clone()), Literal::pos(pr(a, n()))],
                vec![],
            )),
            _ => unreachable!("normalized formula"),
        }
    }
    CtlEncoding {
        program: Program { rules },
        root: predicate_for(&p),
        mapping,
        propositions: props,
    }
}

/// Kripke structure read off an open answer set of the encoding, with the
/// first state where the root predicate holds.
pub fn decode(m: &OpenInterpretation, enc: &CtlEncoding) -> Result<(Kripke, String)> {
    let name = |t: &Term| t.symbol().to_string();
    let state = m
        .universe
        .elements()
        .iter()
        .find(|e| m.atoms.contains(&Atom::named(enc.root.clone(), vec![Term::Const((*e).clone())])))
        .ok_or_else(|| Error::Invalid(format!("no {} atom in the interpretation", enc.root)))?;
    let states: Vec<String> = m.universe.elements().iter().map(|e| e.to_string()).collect();
    let mut edges = Vec::new();
    let mut labels: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for a in &m.atoms {
        let Some(pred) = a.name() else { continue };
        if pred.as_str() == "next" {
            edges.push((name(&a.args[0]), name(&a.args[1])));
        } else if let Some(prop) = enc.propositions.iter().find(|q| predicate_for(&Ctl::Prop((*q).clone())) == *pred) {
            labels.entry(name(&a.args[0])).or_default().push(prop.to_string());
        }
    }
    Ok((Kripke { states, edges, labels }, state.to_string()))
}
