//! Bounded search for open answer sets.
//!
//! A program is grounded over a universe and compiled to atom ids. The
//! search branches on the atoms whose truth influences some reduct (negated
//! atoms and antecedent atoms of generalized literals). After every decision
//! a lower and an upper least model are computed; their disagreement with
//! the partial assignment prunes the branch and their agreement forces
//! further atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grounder::ground;
use crate::model::{
    fresh_elements, Atom, BoolFormula, Literal, OpenInterpretation, Program, Rule, Symbol, Term, Universe,
};
use crate::semantics::is_open_answer_set;

/// Search-node allowance shared by one solver call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 1 << 24;

    pub fn nodes(max_nodes: u64) -> Budget {
        Budget { max_nodes }
    }

    /// Default budget, overridden by the `OASP_BUDGET` environment variable.
    pub fn from_env() -> Budget {
        let max_nodes = std::env::var("OASP_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(Self::DEFAULT_NODES);
        Budget { max_nodes }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: Self::DEFAULT_NODES }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub budget: Budget,
    pub workers: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: Budget::default(), workers: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SatStatus {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT_UP_TO_BOUND")]
    UnsatUpToBound,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl std::fmt::Display for SatStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SatStatus::Sat => "SAT",
            SatStatus::UnsatUpToBound => "UNSAT_UP_TO_BOUND",
            SatStatus::Unknown => "UNKNOWN",
        })
    }
}

/// Outcome of a bounded satisfiability check. `bound_reached` is the number
/// of fresh elements of the universe where the search stopped: the witness
/// size for SAT, the bound for UNSAT, the exhausted level for UNKNOWN.
#[derive(Clone, Debug)]
pub struct SatResult {
    pub status: SatStatus,
    pub witness: Option<OpenInterpretation>,
    pub bound_reached: usize,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
enum Cond {
    True,
    Atom(u32),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

impl Cond {
    fn eval3(&self, vals: &[i8]) -> Option<bool> {
        match self {
            Cond::True => Some(true),
            Cond::Atom(a) => match vals[*a as usize] {
                1 => Some(true),
                0 => Some(false),
                _ => None,
            },
            Cond::Not(x) => x.eval3(vals).map(|b| !b),
            Cond::And(xs) => {
                let mut unknown = false;
                for x in xs {
                    match x.eval3(vals) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(true)
                }
            }
            Cond::Or(xs) => {
                let mut unknown = false;
                for x in xs {
                    match x.eval3(vals) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                if unknown {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }

    fn atoms(&self, out: &mut Vec<u32>) {
        match self {
            Cond::True => {}
            Cond::Atom(a) => out.push(*a),
            Cond::Not(x) => x.atoms(out),
            Cond::And(xs) | Cond::Or(xs) => xs.iter().for_each(|x| x.atoms(out)),
        }
    }
}

#[derive(Clone, Debug)]
struct Instance {
    cond: Cond,
    /// `None` when the consequent is a false equality.
    cons: Option<u32>,
}

#[derive(Clone, Debug)]
struct CRule {
    head: Option<u32>,
    head_neg: Vec<u32>,
    pos: Vec<u32>,
    neg: Vec<u32>,
    insts: std::ops::Range<usize>,
    free: bool,
}

/// Ground program over atom ids.
struct Compiled {
    universe: Universe,
    atoms: Vec<Atom>,
    ids: HashMap<Atom, u32>,
    rules: Vec<CRule>,
    insts: Vec<Instance>,
    /// (rule, element) pairs watching each atom; element `u32::MAX` is a
    /// positive body atom, otherwise an instance index.
    watch: Vec<Vec<(u32, u32)>>,
    decisions: Vec<u32>,
    is_decision: Vec<bool>,
    fixed_false: Vec<u32>,
}

enum Folded {
    Const(bool),
    Cond(Cond),
}

impl Compiled {
    fn new(p: &Program, u: &Universe, keep: &dyn Fn(&Atom) -> bool, drop_isolated: bool) -> Result<Compiled> {
        let g = ground(p, u)?;
        let mut c = Compiled {
            universe: u.clone(),
            atoms: Vec::new(),
            ids: HashMap::new(),
            rules: Vec::new(),
            insts: Vec::new(),
            watch: Vec::new(),
            decisions: Vec::new(),
            is_decision: Vec::new(),
            fixed_false: Vec::new(),
        };
        for base in crate::grounder::herbrand_base(p, u)? {
            c.intern(&base);
        }
        for r in g.iter() {
            c.add_rule(r, u);
        }
        c.watch = vec![Vec::new(); c.atoms.len()];
        for (ri, r) in c.rules.iter().enumerate() {
            for &a in &r.pos {
                c.watch[a as usize].push((ri as u32, u32::MAX));
            }
            for ii in r.insts.clone() {
                if let Some(a) = c.insts[ii].cons {
                    c.watch[a as usize].push((ri as u32, ii as u32));
                }
            }
        }
        let n = c.atoms.len();
        let mut in_d = vec![false; n];
        let mut free_head = vec![false; n];
        let mut occurrences = vec![0usize; n];
        for r in &c.rules {
            for &a in r.head_neg.iter().chain(&r.neg) {
                in_d[a as usize] = true;
            }
            let mut ante = Vec::new();
            for ii in r.insts.clone() {
                c.insts[ii].cond.atoms(&mut ante);
            }
            for &a in &ante {
                in_d[a as usize] = true;
            }
            if r.free {
                if let Some(h) = r.head {
                    free_head[h as usize] = true;
                }
            } else {
                let mut seen: Vec<u32> = r.head.iter().chain(&r.head_neg).chain(&r.pos).chain(&r.neg).copied().collect();
                seen.extend(ante);
                seen.extend(c.insts[r.insts.clone()].iter().filter_map(|i| i.cons));
                for a in seen {
                    occurrences[a as usize] += 1;
                }
            }
        }
        for a in 0..n {
            if drop_isolated && free_head[a] && occurrences[a] == 0 && !keep(&c.atoms[a]) {
                c.fixed_false.push(a as u32);
                continue;
            }
            if in_d[a] {
                c.decisions.push(a as u32);
            }
        }
        c.decisions.sort_by_key(|&a| (!free_head[a as usize], a));
        c.is_decision = vec![false; n];
        for &a in &c.decisions {
            c.is_decision[a as usize] = true;
        }
        Ok(c)
    }

    fn intern(&mut self, a: &Atom) -> u32 {
        if let Some(&id) = self.ids.get(a) {
            return id;
        }
        let id = self.atoms.len() as u32;
        self.atoms.push(a.clone());
        self.ids.insert(a.clone(), id);
        id
    }

    fn fold(&mut self, f: &BoolFormula) -> Folded {
        match f {
            BoolFormula::Atom(a) => match a.eval_equality() {
                Some(b) => Folded::Const(b),
                None => Folded::Cond(Cond::Atom(self.intern(a))),
            },
            BoolFormula::Not(x) => match self.fold(x) {
                Folded::Const(b) => Folded::Const(!b),
                Folded::Cond(c) => Folded::Cond(Cond::Not(Box::new(c))),
            },
            BoolFormula::And(xs) | BoolFormula::Or(xs) => {
                let is_and = matches!(f, BoolFormula::And(_));
                let mut parts = Vec::new();
                for x in xs {
                    match self.fold(x) {
                        Folded::Const(b) if b == is_and => {}
                        Folded::Const(b) => return Folded::Const(b),
                        Folded::Cond(c) => parts.push(c),
                    }
                }
                match parts.len() {
                    0 => Folded::Const(is_and),
                    1 => Folded::Cond(parts.pop().unwrap()),
                    _ => Folded::Cond(if is_and { Cond::And(parts) } else { Cond::Or(parts) }),
                }
            }
        }
    }

    fn add_rule(&mut self, r: &Rule, u: &Universe) {
        let mut head = None;
        if let Some(h) = r.head_atom() {
            head = Some(self.intern(h));
        }
        let mut head_neg = Vec::new();
        for a in r.head_neg() {
            match a.eval_equality() {
                Some(true) => {}
                Some(false) => return,
                None => head_neg.push(self.intern(a)),
            }
        }
        let mut pos = Vec::new();
        for a in r.body_pos() {
            match a.eval_equality() {
                Some(true) => {}
                Some(false) => return,
                None => pos.push(self.intern(a)),
            }
        }
        let mut neg = Vec::new();
        for a in r.body_neg() {
            match a.eval_equality() {
                Some(true) => return,
                Some(false) => {}
                None => neg.push(self.intern(a)),
            }
        }
        let start = self.insts.len();
        for gl in &r.glits {
            let mut pending = Vec::new();
            crate::model::for_each_tuple(u.elements(), gl.bound.len(), |vals| {
                pending.push(gl.instantiate(vals));
                true
            });
            for (ante, cons) in pending {
                let cond = match self.fold(&ante) {
                    Folded::Const(false) => continue,
                    Folded::Const(true) => Cond::True,
                    Folded::Cond(c) => c,
                };
                let cons = match cons.eval_equality() {
                    Some(true) => continue,
                    Some(false) => None,
                    None => Some(self.intern(&cons)),
                };
                self.insts.push(Instance { cond, cons });
            }
        }
        let insts = start..self.insts.len();
        self.rules.push(CRule { head, head_neg, pos, neg, insts, free: r.is_free() });
    }

    fn naf_definite(&self, r: &CRule, vals: &[i8]) -> bool {
        r.head_neg.iter().all(|&a| vals[a as usize] == 1) && r.neg.iter().all(|&a| vals[a as usize] == 0)
    }

    fn naf_possible(&self, r: &CRule, vals: &[i8]) -> bool {
        r.head_neg.iter().all(|&a| vals[a as usize] != 0) && r.neg.iter().all(|&a| vals[a as usize] != 1)
    }

    /// Least model of the rules whose negative conditions hold for sure
    /// (`lower`) or possibly (`!lower`). In the lower model, generalized
    /// literals contribute every consequent whose antecedent may hold and
    /// assigned-true atoms are facts; in the upper model only consequents
    /// of surely-true antecedents count and assigned-false atoms are blocked.
    fn least(&self, vals: &[i8], lower: bool) -> Vec<bool> {
        let n = self.atoms.len();
        let mut truth = vec![false; n];
        let mut count = vec![0u32; self.rules.len()];
        let mut included = vec![false; self.rules.len()];
        let mut active = vec![false; self.insts.len()];
        let mut queue: Vec<u32> = Vec::new();
        let fire = |a: u32, truth: &mut Vec<bool>, queue: &mut Vec<u32>| {
            if !truth[a as usize] {
                truth[a as usize] = true;
                queue.push(a);
            }
        };
        for (ri, r) in self.rules.iter().enumerate() {
            let Some(h) = r.head else { continue };
            if !lower && vals[h as usize] == 0 {
                continue;
            }
            let ok = if lower { self.naf_definite(r, vals) } else { self.naf_possible(r, vals) };
            if !ok {
                continue;
            }
            let mut c = r.pos.len() as u32;
            let mut impossible = false;
            for ii in r.insts.clone() {
                let inst = &self.insts[ii];
                let v = inst.cond.eval3(vals);
                let on = if lower { v != Some(false) } else { v == Some(true) };
                if on {
                    match inst.cons {
                        None => {
                            impossible = true;
                            break;
                        }
                        Some(_) => {
                            c += 1;
                            active[ii] = true;
                        }
                    }
                }
            }
            if impossible {
                continue;
            }
            included[ri] = true;
            count[ri] = c;
            if c == 0 {
                fire(h, &mut truth, &mut queue);
            }
        }
        if lower {
            for (a, &v) in vals.iter().enumerate() {
                if v == 1 {
                    fire(a as u32, &mut truth, &mut queue);
                }
            }
        }
        while let Some(a) = queue.pop() {
            for &(ri, elem) in &self.watch[a as usize] {
                let ri = ri as usize;
                if !included[ri] || (elem != u32::MAX && !active[elem as usize]) {
                    continue;
                }
                count[ri] -= 1;
                if count[ri] == 0 {
                    fire(self.rules[ri].head.unwrap(), &mut truth, &mut queue);
                }
            }
        }
        truth
    }

    fn constraint_violated(&self, vals: &[i8], low: &[bool]) -> bool {
        self.rules.iter().filter(|r| r.head.is_none()).any(|r| {
            self.naf_definite(r, vals)
                && r.pos.iter().all(|&a| low[a as usize])
                && self.insts[r.insts.clone()].iter().all(|inst| match inst.cond.eval3(vals) {
                    Some(false) => true,
                    _ => inst.cons.is_some_and(|a| low[a as usize]),
                })
        })
    }

    /// Returns the upper model after propagation, or `None` on conflict.
    fn propagate(&self, vals: &mut [i8]) -> Option<Vec<bool>> {
        loop {
            let low = self.least(vals, true);
            let up = self.least(vals, false);
            for a in 0..vals.len() {
                if (vals[a] == 1 && !up[a]) || (vals[a] == 0 && low[a]) {
                    return None;
                }
            }
            if self.constraint_violated(vals, &low) {
                return None;
            }
            let mut changed = false;
            for &a in &self.decisions {
                let a = a as usize;
                if vals[a] == -1 {
                    if low[a] {
                        vals[a] = 1;
                        changed = true;
                    } else if !up[a] {
                        vals[a] = 0;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(up);
            }
        }
    }

    fn initial(&self, required: &[u32]) -> Vec<i8> {
        let mut vals = vec![-1i8; self.atoms.len()];
        for &a in &self.fixed_false {
            vals[a as usize] = 0;
        }
        for &a in required {
            vals[a as usize] = 1;
        }
        vals
    }

    fn to_interpretation(&self, model: &[bool]) -> OpenInterpretation {
        let atoms = model.iter().enumerate().filter(|(_, &t)| t).map(|(i, _)| self.atoms[i].clone());
        OpenInterpretation::new(self.universe.clone(), atoms)
    }
}

enum Stop {
    Budget,
    Limit,
}

struct Search<'a> {
    c: &'a Compiled,
    nodes: &'a AtomicU64,
    budget: u64,
    limit: Option<usize>,
    found: Vec<Vec<bool>>,
}

impl Search<'_> {
    fn run(&mut self, mut vals: Vec<i8>) -> std::result::Result<(), Stop> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Stop::Budget);
        }
        let Some(up) = self.c.propagate(&mut vals) else { return Ok(()) };
        match self.c.decisions.iter().find(|&&a| vals[a as usize] == -1) {
            None => {
                self.found.push(up);
                if self.limit.is_some_and(|l| self.found.len() >= l) {
                    return Err(Stop::Limit);
                }
                Ok(())
            }
            Some(&a) => {
                for v in [1i8, 0] {
                    let mut child = vals.clone();
                    child[a as usize] = v;
                    self.run(child)?;
                }
                Ok(())
            }
        }
    }
}

/// Open subproblems obtained by expanding the search tree breadth first.
fn split(c: &Compiled, root: Vec<i8>, target: usize) -> Vec<Vec<i8>> {
    let mut frontier = vec![root];
    for _ in 0..16 {
        if frontier.len() >= target {
            break;
        }
        let mut next = Vec::new();
        for vals in frontier {
            match c.decisions.iter().find(|&&a| vals[a as usize] == -1) {
                None => next.push(vals),
                Some(&a) => {
                    for v in [1i8, 0] {
                        let mut child = vals.clone();
                        child[a as usize] = v;
                        if c.propagate(&mut child).is_some() {
                            next.push(child);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    frontier
}

struct Outcome {
    models: Vec<Vec<bool>>,
    exhausted: bool,
}

fn solve(c: &Compiled, required: &[u32], limit: Option<usize>, cfg: &SolverConfig, nodes: &AtomicU64) -> Outcome {
    let root = c.initial(required);
    if cfg.workers <= 1 {
        let mut s = Search { c, nodes, budget: cfg.budget.max_nodes, limit, found: Vec::new() };
        let exhausted = matches!(s.run(root), Err(Stop::Budget));
        return Outcome { models: s.found, exhausted };
    }
    use rayon::prelude::*;
    let mut root = root;
    if c.propagate(&mut root).is_none() {
        return Outcome { models: Vec::new(), exhausted: false };
    }
    let parts = split(c, root, cfg.workers * 4);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build().expect("thread pool");
    let results: Vec<(Vec<Vec<bool>>, bool)> = pool.install(|| {
        parts
            .into_par_iter()
            .map(|vals| {
                let mut s = Search { c, nodes, budget: cfg.budget.max_nodes, limit, found: Vec::new() };
                let exhausted = matches!(s.run(vals), Err(Stop::Budget));
                (s.found, exhausted)
            })
            .collect()
    });
    let exhausted = results.iter().any(|r| r.1);
    let mut models: Vec<Vec<bool>> = results.into_iter().flat_map(|r| r.0).collect();
    if let Some(l) = limit {
        models.truncate(l);
    }
    Outcome { models, exhausted }
}

/// All open answer sets with the given universe, in canonical order
/// (sorted atom lists compared lexicographically), truncated to `limit`.
pub fn enumerate_open_answer_sets(p: &Program, u: &Universe, limit: Option<usize>) -> Result<Vec<OpenInterpretation>> {
    enumerate_with(p, u, limit, &SolverConfig::default())
}

pub fn enumerate_with(
    p: &Program,
    u: &Universe,
    limit: Option<usize>,
    cfg: &SolverConfig,
) -> Result<Vec<OpenInterpretation>> {
    let c = Compiled::new(p, u, &|_| true, false)?;
    let nodes = AtomicU64::new(0);
    let out = solve(&c, &[], None, cfg, &nodes);
    if out.exhausted {
        return Err(Error::Budget(format!("more than {} search nodes", cfg.budget.max_nodes)));
    }
    let mut sets: Vec<OpenInterpretation> = out.models.iter().map(|m| c.to_interpretation(m)).collect();
    debug_assert!(sets.iter().all(|m| is_open_answer_set(p, m).unwrap_or(false)));
    sets.sort_by(|a, b| a.atoms.iter().cmp(b.atoms.iter()));
    sets.dedup();
    if let Some(l) = limit {
        sets.truncate(l);
    }
    Ok(sets)
}

/// Answer sets over the program constants (one fresh element when there are none).
pub fn classical_answer_sets(p: &Program) -> Result<Vec<BTreeSet<Atom>>> {
    let cts = p.constants();
    let u = if cts.is_empty() { Universe::with_fresh(&cts, 1)? } else { Universe::with_fresh(&cts, 0)? };
    Ok(enumerate_open_answer_sets(p, &u, None)?.into_iter().map(|m| m.atoms).collect())
}

/// Tuples over `u` of length `n` where fresh elements appear in first-use order.
fn canonical_tuples(u: &Universe, n: usize, fresh: &[Symbol]) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    crate::model::for_each_tuple(u.elements(), n, |t| {
        let mut next = 0;
        let ok = t.iter().all(|e| match fresh.iter().position(|f| f == e) {
            None => true,
            Some(i) if i < next => true,
            Some(i) if i == next => {
                next += 1;
                true
            }
            Some(_) => false,
        });
        if ok {
            out.push(t.to_vec());
        }
        true
    });
    out
}

/// A model of `p` over exactly the universe `u` containing `required`.
pub fn find_in_universe(
    p: &Program,
    u: &Universe,
    required: &[Atom],
    cfg: &SolverConfig,
) -> Result<Option<OpenInterpretation>> {
    let keep: BTreeSet<&Atom> = required.iter().collect();
    let c = Compiled::new(p, u, &|a| keep.contains(a), true)?;
    let mut ids = Vec::new();
    for a in required {
        match c.ids.get(a) {
            Some(&id) => ids.push(id),
            None => return Err(Error::Invalid(format!("atom {a:?} is not over the program and universe"))),
        }
    }
    let nodes = AtomicU64::new(0);
    let out = solve(&c, &ids, Some(1), cfg, &nodes);
    if let Some(m) = out.models.first() {
        return Ok(Some(c.to_interpretation(m)));
    }
    if out.exhausted {
        return Err(Error::Budget(format!("more than {} search nodes", cfg.budget.max_nodes)));
    }
    Ok(None)
}

/// Decide whether some open answer set with at most `k_max` elements beyond
/// the program constants contains a `q` atom.
pub fn satisfiable_up_to(p: &Program, q: &str, k_max: usize) -> Result<SatResult> {
    satisfiable_up_to_with(p, q, k_max, &SolverConfig::default())
}

pub fn satisfiable_up_to_with(p: &Program, q: &str, k_max: usize, cfg: &SolverConfig) -> Result<SatResult> {
    let preds = p.predicates();
    let q_sym = Symbol::new(q);
    let arity = *preds.get(&q_sym).ok_or_else(|| Error::UnknownPredicate(q.to_string()))?;
    let q_is_free = p.rules.iter().any(|r| r.is_free() && r.head_atom().and_then(|a| a.name()) == Some(&q_sym));
    let (program, query) = if q_is_free {
        let vars: Vec<Term> = (1..=arity).map(|i| Term::Var(Symbol::from(format!("X{i}")))).collect();
        let copy = Symbol::from(format!("#sat_{q}"));
        let rule = Rule {
            name: Symbol::new("#sat"),
            head: [Literal::pos(Atom::named(copy.clone(), vars.clone()))].into(),
            body: [Literal::pos(Atom::named(q_sym.clone(), vars))].into(),
            glits: Default::default(),
        };
        let mut rules = p.rules.clone();
        rules.push(rule);
        (Program { rules }, copy)
    } else {
        (p.clone(), q_sym.clone())
    };
    let cts = p.constants();
    let nodes = AtomicU64::new(0);
    for k in 0..=k_max {
        if cts.is_empty() && k == 0 {
            continue;
        }
        let u = Universe::with_fresh(&cts, k)?;
        let fresh: Vec<Symbol> = fresh_elements(k).collect();
        let tuples = canonical_tuples(&u, arity, &fresh);
        let targets: BTreeSet<Atom> = tuples
            .iter()
            .map(|t| Atom::named(query.clone(), t.iter().map(|e| Term::Const(e.clone())).collect()))
            .collect();
        let c = Compiled::new(&program, &u, &|a| a.name() == Some(&query) && targets.contains(a), true)?;
        for target in &targets {
            let id = c.ids[target];
            let out = solve(&c, &[id], Some(1), cfg, &nodes);
            if let Some(m) = out.models.first() {
                let mut w = c.to_interpretation(m);
                if q_is_free {
                    w.atoms.retain(|a| a.name() != Some(&query));
                }
                if !is_open_answer_set(p, &w)? {
                    return Err(Error::Invalid("solver produced a non-answer set".into()));
                }
                return Ok(SatResult {
                    status: SatStatus::Sat,
                    witness: Some(w),
                    bound_reached: k,
                    nodes: nodes.load(Ordering::Relaxed),
                });
            }
            if out.exhausted {
                return Ok(SatResult {
                    status: SatStatus::Unknown,
                    witness: None,
                    bound_reached: k,
                    nodes: nodes.load(Ordering::Relaxed),
                });
            }
        }
    }
    Ok(SatResult {
        status: SatStatus::UnsatUpToBound,
        witness: None,
        bound_reached: k_max,
        nodes: nodes.load(Ordering::Relaxed),
    })
}

/// Number of atoms per predicate in an interpretation, for summaries.
pub fn predicate_counts(m: &OpenInterpretation) -> BTreeMap<Symbol, usize> {
    let mut out = BTreeMap::new();
    for a in &m.atoms {
        if let Some(n) = a.name() {
            *out.entry(n.clone()).or_insert(0) += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    #[test]
    fn even_loop() {
        let p = parse_program("p :- not q. q :- not p. c(a).").unwrap();
        let u = Universe::from_names(&["a"]).unwrap();
        let sets = enumerate_open_answer_sets(&p, &u, None).unwrap();
        assert_eq!(sets.len(), 2);
    }

    #[test]
    fn odd_loop_has_none() {
        let p = parse_program("p :- not p. c(a).").unwrap();
        let u = Universe::from_names(&["a"]).unwrap();
        assert!(enumerate_open_answer_sets(&p, &u, None).unwrap().is_empty());
    }

    #[test]
    fn glit_rule() {
        let p = parse_program("ok :- forall X (d(X) => e(X)). d(X) | not d(X). e(a).").unwrap();
        let u = Universe::from_names(&["a", "b"]).unwrap();
        let sets = enumerate_open_answer_sets(&p, &u, None).unwrap();
        assert_eq!(sets.len(), 4);
        assert_eq!(sets.iter().filter(|m| m.atoms.contains(&Atom::ground("ok", &[]))).count(), 2);
    }

    #[test]
    fn sat_needs_fresh_element() {
        let p = parse_program("q(X) :- not r(X). r(a).").unwrap();
        let res = satisfiable_up_to(&p, "q", 2).unwrap();
        assert_eq!(res.status, SatStatus::Sat);
        assert_eq!(res.bound_reached, 1);
        let none = satisfiable_up_to(&p, "q", 0).unwrap();
        assert_eq!(none.status, SatStatus::UnsatUpToBound);
    }

    #[test]
    fn budget_reports_unknown() {
        let p = parse_program("p(X) | not p(X). s(X) | not s(X). t(X) | not t(X). q(X) :- p(X), s(X), t(X).").unwrap();
        let cfg = SolverConfig { budget: Budget::nodes(2), workers: 1 };
        let res = satisfiable_up_to_with(&p, "q", 3, &cfg).unwrap();
        assert_eq!(res.status, SatStatus::Unknown);
    }

    #[test]
    fn canonical_tuples_prune_symmetry() {
        let u = Universe::from_names(&["a", "#u1", "#u2"]).unwrap();
        let fresh = vec![Symbol::new("#u1"), Symbol::new("#u2")];
        let t = canonical_tuples(&u, 2, &fresh);
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn workers_agree() {
        let p = parse_program("p(X) | not p(X). q(X) :- p(X), not r(X). r(X) | not r(X).").unwrap();
        let u = Universe::from_names(&["a", "b"]).unwrap();
        let one = enumerate_open_answer_sets(&p, &u, None).unwrap();
        let cfg = SolverConfig { budget: Budget::default(), workers: 3 };
        let many = enumerate_with(&p, &u, None, &cfg).unwrap();
        assert_eq!(one, many);
    }
}
