use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Ctl;
use crate::error::{Error, Result};

/// Finite Kripke structure. JSON shape: `{states, edges, labels}` with edges
/// as `[from, to]` name pairs and labels mapping a state to its propositions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kripke {
    pub states: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
}

/// Index form used by the checker.
pub(crate) struct Indexed {
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<Vec<String>>,
}

impl Kripke {
    pub fn state_index(&self, s: &str) -> Option<usize> {
        self.states.iter().position(|x| x == s)
    }

    pub(crate) fn indexed(&self) -> Result<Indexed> {
        let n = self.states.len();
        if n == 0 {
            return Err(Error::Invalid("structure has no states".into()));
        }
        let mut succ = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            let i = self.state_index(a).ok_or_else(|| Error::Invalid(format!("unknown state {a}")))?;
            let j = self.state_index(b).ok_or_else(|| Error::Invalid(format!("unknown state {b}")))?;
            if !succ[i].contains(&j) {
                succ[i].push(j);
            }
        }
        if let Some(i) = succ.iter().position(|s| s.is_empty()) {
            return Err(Error::Invalid(format!("transition relation is not total at {}", self.states[i])));
        }
        for s in self.labels.keys() {
            if self.state_index(s).is_none() {
                return Err(Error::Invalid(format!("label for unknown state {s}")));
            }
        }
        let labels = self.states.iter().map(|s| self.labels.get(s).cloned().unwrap_or_default()).collect();
        Ok(Indexed { succ, labels })
    }
}

/// Truth of `p` at `state`.
pub fn model_check(k: &Kripke, state: &str, p: &Ctl) -> Result<bool> {
    let idx = k.indexed()?;
    let s = k.state_index(state).ok_or_else(|| Error::Invalid(format!("unknown state {state}")))?;
    Ok(label(&idx, p)[s])
}

/// Set of states satisfying `p`, as a membership vector.
pub fn satisfying_states(k: &Kripke, p: &Ctl) -> Result<Vec<bool>> {
    Ok(label(&k.indexed()?, p))
}

fn pre_exists(k: &Indexed, z: &[bool]) -> Vec<bool> {
    k.succ.iter().map(|ts| ts.iter().any(|&t| z[t])).collect()
}

fn pre_all(k: &Indexed, z: &[bool]) -> Vec<bool> {
    k.succ.iter().map(|ts| ts.iter().all(|&t| z[t])).collect()
}

/// Least fixpoint of `z = b | (a & pre(z))`.
fn until(k: &Indexed, a: &[bool], b: &[bool], universal: bool) -> Vec<bool> {
    let mut z = b.to_vec();
    loop {
        let pre = if universal { pre_all(k, &z) } else { pre_exists(k, &z) };
        let next: Vec<bool> = (0..z.len()).map(|i| b[i] || (a[i] && pre[i])).collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

/// Greatest fixpoint of `z = a & pre(z)`.
fn globally(k: &Indexed, a: &[bool], universal: bool) -> Vec<bool> {
    let mut z = a.to_vec();
    loop {
        let pre = if universal { pre_all(k, &z) } else { pre_exists(k, &z) };
        let next: Vec<bool> = (0..z.len()).map(|i| a[i] && pre[i]).collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

pub(crate) fn label(k: &Indexed, p: &Ctl) -> Vec<bool> {
    let n = k.succ.len();
    let map2 = |a: Vec<bool>, b: Vec<bool>, f: fn(bool, bool) -> bool| -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
    };
    match p {
        Ctl::True => vec![true; n],
        Ctl::False => vec![false; n],
        Ctl::Prop(q) => k.labels.iter().map(|l| l.iter().any(|x| x == q.as_str())).collect(),
        Ctl::Not(a) => label(k, a).into_iter().map(|x| !x).collect(),
        Ctl::And(a, b) => map2(label(k, a), label(k, b), |x, y| x && y),
        Ctl::Or(a, b) => map2(label(k, a), label(k, b), |x, y| x || y),
        Ctl::Implies(a, b) => map2(label(k, a), label(k, b), |x, y| !x || y),
        Ctl::Iff(a, b) => map2(label(k, a), label(k, b), |x, y| x == y),
        Ctl::EX(a) => pre_exists(k, &label(k, a)),
        Ctl::AX(a) => pre_all(k, &label(k, a)),
        Ctl::EU(a, b) => until(k, &label(k, a), &label(k, b), false),
        Ctl::AU(a, b) => until(k, &label(k, a), &label(k, b), true),
        Ctl::EF(a) => until(k, &vec![true; n], &label(k, a), false),
        Ctl::AF(a) => until(k, &vec![true; n], &label(k, a), true),
        Ctl::EG(a) => globally(k, &label(k, a), false),
        Ctl::AG(a) => globally(k, &label(k, a), true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ctl;

    pub(crate) fn figure_one() -> Kripke {
        Kripke {
            states: vec!["s0".into(), "s1".into(), "s2".into()],
            edges: vec![
                ("s0".into(), "s0".into()),
                ("s0".into(), "s1".into()),
                ("s1".into(), "s2".into()),
                ("s2".into(), "s0".into()),
            ],
            labels: [
                ("s0".to_string(), vec!["t".to_string()]),
                ("s1".to_string(), vec!["t".to_string()]),
                ("s2".to_string(), vec!["c".to_string()]),
            ]
            .into(),
        }
    }

    #[test]
    fn starvation_on_figure() {
        let k = figure_one();
        let f = parse_ctl("t -> AF c").unwrap();
        assert!(!model_check(&k, "s0", &f).unwrap());
        assert!(model_check(&k, "s1", &f).unwrap());
        assert!(model_check(&k, "s2", &f).unwrap());
        assert!(model_check(&k, "s0", &parse_ctl("p | ~p").unwrap()).unwrap());
    }

    #[test]
    fn rejects_non_total() {
        let mut k = figure_one();
        k.edges.pop();
        assert!(model_check(&k, "s0", &Ctl::True).is_err());
    }
}
