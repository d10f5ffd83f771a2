//! Acceptance suites shared by the `acceptance` test target and the
//! `selftest` subcommand. Each criterion yields one pass/fail record.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ctl::{decode, encode, enumerate_normalized, model_check, sat_oracle_exact, Ctl, ORACLE_BUDGET};
use crate::datalog::{check_lite_class, eval_query, is_recursion_free, lfp_model, stratify, InputStructure};
use crate::error::{Error, Result};
use crate::fpl::{
    build_comp, build_compg, build_gcomp, build_gcompg, eval, find_models, Completion, FiniteStructure, Formula,
    MAX_GUESSED_ATOMS,
};
use crate::grounder::{ground, herbrand_base};
use crate::guardedness::{analyze_program_with, formula_class, Fragment, GuardConfig, ProgramClass};
use crate::model::{for_each_tuple, Atom, OpenInterpretation, Program, Symbol, Term, Universe};
use crate::parser::{parse_atoms, parse_program};
use crate::random::{random_guarded_program, random_program, random_stratified, random_subset, rng, Shape, TestRng};
use crate::semantics::{derivation_depths, is_open_answer_set, reduct_commute_check};
use crate::solver::{enumerate_with, find_in_universe, satisfiable_up_to_with, Budget, SatStatus, SolverConfig};
use crate::transforms::{double_negation, extensional_predicates, free_choice, gua, hbg, program_size, to_p_program};

pub const FIXPOINT2: &str = include_str!("../tests/data/fixpoint2.oasp");
pub const FIXPOINT: &str = include_str!("../tests/data/fixpoint.oasp");
pub const GUA: &str = include_str!("../tests/data/gua.oasp");
pub const GP: &str = include_str!("../tests/data/gp.oasp");
pub const PPROG: &str = include_str!("../tests/data/pprog.oasp");
pub const INFINITY: &str = include_str!("../tests/data/infinity.oasp");
pub const RESTORE: &str = include_str!("../tests/data/restore.oasp");

/// Pinned limits.
pub const GOLDEN_SECONDS: f64 = 1.0;
pub const INFINITY_SECONDS: f64 = 30.0;
pub const INFINITY_EXTRA: usize = 3;
pub const BIJECTION_CASES: usize = 200;
pub const GUARDED_CASES: usize = 100;
pub const TRANSFORM_CASES: usize = 200;
pub const COMMUTE_CASES: usize = 500;
pub const DATALOG_CASES: usize = 100;
pub const CTL_TEMPORAL: usize = 3;
pub const CTL_SIZE: usize = 8;
pub const CTL_STATES: usize = 3;
/// Envelope constants: |P_p| <= c|P|^2, |hbg(P)| <= c|P|, |gua(P)| <= c|P|^2.
pub const PPROG_FACTOR: f64 = 8.0;
pub const HBG_FACTOR: f64 = 2.0;
pub const GUA_FACTOR: f64 = 7.0;
pub const SIZE_CASES: usize = 500;

pub const NAMES: [&str; 10] = [
    "worked-example goldens",
    "infinity behaviour at desk scale",
    "completion bijection",
    "guardedness of completions",
    "transformation equivalences",
    "reduct commutation",
    "datalog correspondence",
    "ctl dual verdicts",
    "finite support",
    "size bounds",
];

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {:>2} {} ({} ms): {}", self.id, self.name, self.elapsed_ms, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub workers: usize,
    pub budget: Budget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 2024, workers: 1, budget: Budget::from_env() }
    }
}

/// Runs criteria and accumulates the finite-support tally over every open
/// answer set the suites produce.
pub struct Suite {
    cfg: SuiteConfig,
    support_checked: AtomicUsize,
    support_failures: Mutex<Vec<String>>,
}

type Outcome = (bool, String);

fn fail(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

fn atom_set(src: &str) -> Result<BTreeSet<Atom>> {
    Ok(parse_atoms(src)?.into_iter().collect())
}

fn show(sets: &BTreeSet<BTreeSet<Atom>>) -> String {
    let parts: Vec<String> = sets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(crate::parser::render_atom).collect::<Vec<_>>().join(", ")))
        .collect();
    parts.join(" ")
}

/// Universes `cts` plus `k` fresh elements with total size at most `max`.
fn universes(cts: &BTreeSet<Symbol>, max: usize) -> Result<Vec<Universe>> {
    let mut out = Vec::new();
    for k in 0..=max.saturating_sub(cts.len()) {
        if cts.len() + k == 0 {
            continue;
        }
        out.push(Universe::with_fresh(cts, k)?);
    }
    Ok(out)
}

/// Universes with at most `extra` fresh elements beyond `cts`.
fn extra_universes(cts: &BTreeSet<Symbol>, extra: usize) -> Result<Vec<Universe>> {
    let mut out = Vec::new();
    for k in 0..=extra {
        if cts.is_empty() && k == 0 {
            continue;
        }
        out.push(Universe::with_fresh(cts, k)?);
    }
    Ok(out)
}

/// Tally over a set of independent cases: count and the first failures.
struct Tally {
    cases: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn outcome(self, what: &str) -> Outcome {
        let ok = self.failed == 0;
        let mut detail = format!("{} {what}, {} failures", self.cases, self.failed);
        if !ok {
            detail.push_str(&format!("; first: {}", self.failures.join(" | ")));
        }
        (ok, detail)
    }
}

fn count(total: &AtomicUsize, r: Result<usize>) -> Result<()> {
    r.map(|n| {
        total.fetch_add(n, Ordering::Relaxed);
    })
}

fn tally<T: Send>(items: Vec<T>, f: impl Fn(T) -> Result<()> + Sync) -> Tally {
    let cases = items.len();
    let results: Vec<Option<String>> = items.into_par_iter().map(|x| f(x).err().map(|e| e.to_string())).collect();
    let errs: Vec<String> = results.into_iter().flatten().collect();
    Tally { cases, failed: errs.len(), failures: errs.into_iter().take(3).collect() }
}

/// Ground atoms of `vocab` over `domain`, within the guessing limit.
fn ground_atoms(vocab: &BTreeMap<Symbol, usize>, domain: &[Symbol]) -> Result<Vec<Atom>> {
    let mut base = Vec::new();
    for (p, n) in vocab {
        for_each_tuple(domain, *n, |vals| {
            base.push(Atom::named(p.clone(), vals.iter().cloned().map(Term::Const).collect()));
            true
        });
    }
    if base.len() > MAX_GUESSED_ATOMS {
        return Err(Error::Budget(format!("{} ground atoms, limit {MAX_GUESSED_ATOMS}", base.len())));
    }
    Ok(base)
}

const W_ATOM: &str = "#W";

/// Treat free applications of `W` as a regular predicate.
fn close_w(f: &Formula) -> Formula {
    f.map_atoms(&|g| match g {
        Formula::Apply(w, ts) if w.as_str() == "W" => Some(Formula::Atom(Atom::new(W_ATOM, ts.clone()))),
        _ => None,
    })
}

/// `f` and `g` agree on every structure over their vocabulary and every
/// assignment of `free`.
fn equivalent(f: &Formula, g: &Formula, free: &[Symbol], domain: &[Symbol]) -> Result<bool> {
    let mut vocab: BTreeMap<Symbol, usize> = BTreeMap::new();
    for (p, n) in f.predicates().into_iter().chain(g.predicates()) {
        vocab.insert(p, n);
    }
    let base = ground_atoms(&vocab, domain)?;
    for mask in 0u64..(1u64 << base.len()) {
        let atoms = base.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone());
        let s = FiniteStructure::new(domain.iter().cloned(), atoms)?;
        let mut bad = None;
        for_each_tuple(domain, free.len(), |vals| {
            let asg: BTreeMap<Symbol, Symbol> = free.iter().cloned().zip(vals.iter().cloned()).collect();
            match (eval(f, &s, &asg), eval(g, &s, &asg)) {
                (Ok(a), Ok(b)) if a == b => true,
                (Ok(_), Ok(_)) => {
                    bad = Some(Ok(()));
                    false
                }
                (Err(e), _) | (_, Err(e)) => {
                    bad = Some(Err(e));
                    false
                }
            }
        });
        match bad {
            None => {}
            Some(Ok(())) => return Ok(false),
            Some(Err(e)) => return Err(e),
        }
    }
    Ok(true)
}

/// Parameters and disjuncts (after `W`) of the fixpoint formula.
fn fpf_parts(c: &Completion) -> Result<(Vec<Symbol>, Vec<Formula>)> {
    let Formula::Forall(xs, body) = &c.fpf else { return Err(fail("fpf is not universally quantified")) };
    let Formula::Implies(_, fix) = body.as_ref() else { return Err(fail("fpf is not an implication")) };
    let Formula::Fix(fp) = fix.as_ref() else { return Err(fail("fpf has no fixpoint")) };
    let disjuncts = match &fp.body {
        Formula::Or(ds) => ds[1..].to_vec(),
        _ => Vec::new(),
    };
    Ok((xs.clone(), disjuncts))
}

/// Component-wise equivalence of a completion and its guarded rewriting:
/// distinctness and non-emptiness, sat per rule, the split gl and glit
/// formulas, and each disjunct of the fixpoint body with `W` read as a
/// regular predicate. Together these give equivalence of the conjunctions.
fn guarded_equivalent(p: &Program, plain: &Completion, guarded: &Completion, domain: &[Symbol]) -> Result<()> {
    let head = |c: &Completion| {
        let mut v = c.constants.clone();
        v.push(c.nonempty.clone());
        Formula::conj(v)
    };
    ensure(equivalent(&head(plain), &head(guarded), &[], domain)?, || "distinctness/non-emptiness differ".into())?;
    let mut gsat = guarded.sat.iter();
    for (r, f) in p.rules.iter().zip(&plain.sat) {
        let g = if r.is_free() { Formula::True } else { gsat.next().cloned().ok_or_else(|| fail("missing sat"))? };
        ensure(equivalent(f, &g, &[], domain)?, || format!("sat of rule {} differs", r.name))?;
    }
    ensure(guarded.gl.len() == 2 * plain.gl.len(), || "gl count".into())?;
    for (i, f) in plain.gl.iter().enumerate() {
        let g = Formula::conj(guarded.gl[2 * i..2 * i + 2].to_vec());
        ensure(equivalent(f, &g, &[], domain)?, || format!("gl {} differs", i + 1))?;
    }
    ensure(guarded.glit.len() == 2 * plain.glit.len(), || "glit count".into())?;
    for (i, f) in plain.glit.iter().enumerate() {
        let g = Formula::conj(guarded.glit[2 * i..2 * i + 2].to_vec());
        ensure(equivalent(f, &g, &[], domain)?, || format!("glit {} differs", i + 1))?;
    }
    let (xs, ds) = fpf_parts(plain)?;
    let (xs2, ds2) = fpf_parts(guarded)?;
    ensure(xs == xs2 && ds.len() == ds2.len(), || "fixpoint shapes differ".into())?;
    for (i, (d, d2)) in ds.iter().zip(&ds2).enumerate() {
        ensure(equivalent(&close_w(d), &close_w(d2), &xs, domain)?, || format!("fixpoint disjunct {} differs", i + 1))?;
    }
    Ok(())
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Suite {
        Suite { cfg, support_checked: AtomicUsize::new(0), support_failures: Mutex::new(Vec::new()) }
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig { budget: self.cfg.budget, workers: 1 }
    }

    fn rng(&self, id: u64) -> TestRng {
        rng(self.cfg.seed.wrapping_mul(1000).wrapping_add(id))
    }

    fn note_support(&self, p: &Program, m: &OpenInterpretation) -> Result<()> {
        let depths = derivation_depths(p, m)?;
        self.support_checked.fetch_add(1, Ordering::Relaxed);
        let bound = m.atoms.len();
        if let Some(a) = m.atoms.iter().find(|a| depths.get(*a).map_or(true, |&n| n > bound)) {
            let msg = format!("{} in a model of size {bound} has depth {:?}", crate::parser::render_atom(a), depths.get(a));
            self.support_failures.lock().unwrap().push(msg);
        }
        Ok(())
    }

    fn enumerate(&self, p: &Program, u: &Universe) -> Result<Vec<OpenInterpretation>> {
        let sets = enumerate_with(p, u, None, &self.solver())?;
        for m in &sets {
            self.note_support(p, m)?;
        }
        Ok(sets)
    }

    fn atoms_of(&self, p: &Program, u: &Universe) -> Result<BTreeSet<BTreeSet<Atom>>> {
        Ok(self.enumerate(p, u)?.into_iter().map(|m| m.atoms).collect())
    }

    fn find(&self, p: &Program, u: &Universe, required: &[Atom]) -> Result<Option<OpenInterpretation>> {
        let m = find_in_universe(p, u, required, &self.solver())?;
        if let Some(m) = &m {
            self.note_support(p, m)?;
        }
        Ok(m)
    }

    fn sat(&self, p: &Program, q: &str, k: usize) -> Result<SatStatus> {
        let r = satisfiable_up_to_with(p, q, k, &self.solver())?;
        if let Some(w) = &r.witness {
            self.note_support(p, w)?;
        }
        Ok(r.status)
    }

    pub fn run_all(&self) -> Vec<Criterion> {
        (1..=NAMES.len()).map(|id| self.run(id)).collect()
    }

    /// Run criterion `id` (1-based). Panics on an unknown id.
    pub fn run(&self, id: usize) -> Criterion {
        let start = Instant::now();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.cfg.workers.max(1)).build();
        let body = || match id {
            1 => self.goldens(),
            2 => self.infinity(),
            3 => self.bijection(),
            4 => self.guarded_completions(),
            5 => self.transformations(),
            6 => self.commutation(),
            7 => self.datalog(),
            8 => self.ctl(),
            9 => self.finite_support(),
            10 => self.size_bounds(),
            _ => panic!("unknown criterion {id}"),
        };
        let (passed, detail) = match pool {
            Ok(pool) => pool.install(body),
            Err(e) => (false, format!("thread pool: {e}")),
        };
        Criterion { id, name: NAMES[id - 1], passed, detail, elapsed_ms: start.elapsed().as_millis() }
    }

    fn timed(&self, name: &str, limit: f64, f: impl FnOnce() -> Result<()>) -> (bool, String) {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(()) if secs < limit => (true, format!("{name} ok {secs:.3}s")),
            Ok(()) => (false, format!("{name} too slow {secs:.3}s")),
            Err(e) => (false, format!("{name} failed: {e}")),
        }
    }

    fn combine(parts: Vec<(bool, String)>) -> Outcome {
        let ok = parts.iter().all(|p| p.0);
        (ok, parts.into_iter().map(|p| p.1).collect::<Vec<_>>().join("; "))
    }

    fn goldens(&self) -> Outcome {
        let parts = vec![
            self.timed("fixpoint2", GOLDEN_SECONDS, || {
                let p = parse_program(FIXPOINT2)?;
                let got = self.atoms_of(&p, &Universe::from_names(&["x", "a", "b"])?)?;
                let want: BTreeSet<_> = [atom_set("p(x,a)")?, atom_set("p(x,b)")?].into();
                ensure(got == want, || format!("got {}", show(&got)))
            }),
            self.timed("fixpoint", GOLDEN_SECONDS, || {
                let p = parse_program(FIXPOINT)?;
                let got = self.atoms_of(&p, &Universe::from_names(&["x"])?)?;
                ensure(got == [BTreeSet::new()].into(), || format!("got {}", show(&got)))
            }),
            self.timed("gua", GOLDEN_SECONDS, || {
                let p = parse_program(GUA)?;
                let g = gua(&p)?;
                let got = self.atoms_of(&g, &Universe::with_fresh(&p.constants(), 0)?)?;
                let ga = Atom::ground("#g", &["a", "a"]);
                let mut full = atom_set("f(a,a), q(a)")?;
                full.insert(ga.clone());
                let want: BTreeSet<_> = [full, [ga].into()].into();
                ensure(got == want, || format!("got {}", show(&got)))
            }),
            self.timed("gP", GOLDEN_SECONDS, || {
                let p = parse_program(GP)?;
                let m = OpenInterpretation::new(Universe::from_names(&["x", "y"])?, atom_set("p(x), r(x), q(x), p(y)")?);
                ensure(is_open_answer_set(&p, &m)?, || "displayed interpretation rejected".into())?;
                self.note_support(&p, &m)
            }),
            self.timed("p-prog", GOLDEN_SECONDS, || {
                let p = parse_program(PPROG)?;
                ensure(self.sat(&p, "q", 1)? == SatStatus::Sat, || "q not satisfiable".into())?;
                let m = OpenInterpretation::new(Universe::from_names(&["a", "x"])?, atom_set("s(x), r(a), q(x)")?);
                ensure(is_open_answer_set(&p, &m)?, || "displayed witness rejected".into())?;
                let (pp, map) = to_p_program(&p)?;
                let mp = OpenInterpretation::new(map.extend_universe(&m.universe)?, m.atoms.iter().map(|a| map.encode(a)));
                ensure(is_open_answer_set(&pp, &mp)?, || "encoded witness rejected".into())
            }),
        ];
        Self::combine(parts)
    }

    fn infinity(&self) -> Outcome {
        let run = |src: &'static str, q: &'static str| {
            self.timed(q, INFINITY_SECONDS, || {
                let p = parse_program(src)?;
                let status = self.sat(&p, q, INFINITY_EXTRA)?;
                ensure(status == SatStatus::UnsatUpToBound, || format!("{q}: {status}"))
            })
        };
        Self::combine(vec![run(RESTORE, "restore"), run(INFINITY, "q")])
    }

    fn bijection_case(&self, p: &Program) -> Result<usize> {
        let comp = if p.has_glits() { build_compg(p)? } else { build_comp(p)? };
        let fs = comp.formulas();
        let mut matched = 0;
        for u in extra_universes(&p.constants(), 2)? {
            let sets = self.enumerate(p, &u)?;
            matched += sets.len();
            let lhs: BTreeSet<BTreeSet<Atom>> = sets.iter().map(|m| comp.expand(p, &u, &m.atoms)).collect();
            ensure(lhs.len() == sets.len(), || "expansion is not injective".into())?;
            let rhs: BTreeSet<BTreeSet<Atom>> =
                find_models(&fs, u.elements(), None)?.into_iter().map(|s| s.atoms).collect();
            ensure(lhs == rhs, || {
                format!(
                    "{} over {} elements: answer sets {} vs models {}",
                    crate::parser::render_program(p).replace('\n', " "),
                    u.len(),
                    show(&lhs),
                    show(&rhs)
                )
            })?;
        }
        Ok(matched)
    }

    fn bijection(&self) -> Outcome {
        let mut r = self.rng(3);
        let programs: Vec<Program> = (0..BIJECTION_CASES)
            .map(|i| {
                let shape = Shape::p_program(1 + i % 2);
                let shape = if i % 4 >= 2 { shape.with_glits() } else { shape };
                random_program(&mut r, &shape)
            })
            .collect();
        let with_glits = programs.iter().filter(|p| p.has_glits()).count();
        let matched = AtomicUsize::new(0);
        let (ok, detail) = tally(programs, |p| count(&matched, self.bijection_case(&p))).outcome("programs");
        let matched = matched.into_inner();
        (ok, format!("{detail} ({with_glits} with generalized literals, {matched} answer sets matched)"))
    }

    fn guarded_case(&self, p: &Program, fully: bool) -> Result<()> {
        let (plain, guarded) = if fully { (build_compg(p)?, build_gcompg(p)?) } else { (build_comp(p)?, build_gcomp(p)?) };
        let class = formula_class(&Formula::conj(guarded.formulas()));
        let frag_ok = match class.fragment {
            Some(Fragment::MuGf) => true,
            Some(Fragment::MuLgf) => !fully,
            _ => false,
        };
        ensure(frag_ok && class.alternation_free, || format!("class {:?}", class))?;
        for u in universes(&p.constants(), 2)? {
            guarded_equivalent(p, &plain, &guarded, u.elements())?;
        }
        Ok(())
    }

    fn guarded_completions(&self) -> Outcome {
        let mut r = self.rng(4);
        let loose = Shape {
            variables: vec![Symbol::new("X"), Symbol::new("Y"), Symbol::new("V")],
            ..Shape::p_program(2)
        };
        let cases: Vec<(Program, bool)> = (0..GUARDED_CASES)
            .map(|i| {
                let fully = i % 2 == 1;
                let shape = if fully { Shape::p_program(2).with_glits() } else { loose.clone() };
                (random_guarded_program(&mut r, &shape, fully), fully)
            })
            .collect();
        tally(cases, |(p, fully)| self.guarded_case(&p, fully)).outcome("programs")
    }

    fn hbg_case(&self, p: &Program) -> Result<()> {
        let h = hbg(p);
        for u in universes(&p.constants(), 3)? {
            ensure(self.atoms_of(p, &u)? == self.atoms_of(&h, &u)?, || format!("differs over {} elements", u.len()))?;
        }
        Ok(())
    }

    fn pprog_case(&self, p: &Program) -> Result<usize> {
        let (pp, map) = to_p_program(p)?;
        let mut sat = 0;
        for u in extra_universes(&p.constants(), 1)? {
            let uu = map.extend_universe(&u)?;
            for (q, n) in p.predicates() {
                let mut atoms = Vec::new();
                for_each_tuple(u.elements(), n, |vals| {
                    atoms.push(Atom::named(q.clone(), vals.iter().cloned().map(Term::Const).collect()));
                    true
                });
                for a in atoms {
                    let here = self.find(p, &u, std::slice::from_ref(&a))?.is_some();
                    let there = self.find(&pp, &uu, &[map.encode(&a)])?.is_some();
                    sat += usize::from(here);
                    ensure(here == there, || format!("{} over {} elements: {here} vs {there}", crate::parser::render_atom(&a), u.len()))?;
                }
            }
        }
        Ok(sat)
    }

    fn gua_case(&self, p: &Program) -> Result<()> {
        let g = gua(p)?;
        let u = Universe::with_fresh(&p.constants(), 0)?;
        let want: BTreeSet<BTreeSet<Atom>> = self.atoms_of(p, &u)?;
        let sets = self.enumerate(&g, &u)?;
        let got: BTreeSet<BTreeSet<Atom>> = sets
            .iter()
            .map(|m| m.atoms.iter().filter(|a| a.name().map(|n| n.as_str()) != Some(crate::transforms::G_PRED)).cloned().collect())
            .collect();
        ensure(got.len() == sets.len() && got == want, || format!("{} vs {}", show(&want), show(&got)))
    }

    fn double_negation_case(&self, p: &Program) -> Result<()> {
        let d = double_negation(p)?;
        let fp = free_choice(&stratify(p)?)?;
        let fd = free_choice(&stratify(&d)?)?;
        let heads: BTreeSet<Symbol> =
            p.rules.iter().filter_map(|r| r.head_atom()).filter_map(|a| a.name().cloned()).collect();
        for q in heads {
            for k in 0..=1 {
                let a = self.sat(&fp, q.as_str(), k)?;
                let b = self.sat(&fd, q.as_str(), k)?;
                ensure(a == b && a != SatStatus::Unknown, || format!("{q} with {k} extra: {a} vs {b}"))?;
            }
        }
        Ok(())
    }

    fn transformations(&self) -> Outcome {
        let mut r = self.rng(5);
        let small = Shape::small();
        let hbg_progs: Vec<Program> = (0..TRANSFORM_CASES)
            .map(|i| random_program(&mut r, &if i % 2 == 0 { small.clone() } else { small.clone().with_glits() }))
            .collect();
        let pp_progs: Vec<Program> = (0..TRANSFORM_CASES)
            .map(|i| random_program(&mut r, &if i % 2 == 0 { small.clone() } else { small.clone().with_glits() }))
            .collect();
        let mut gua_progs = Vec::new();
        while gua_progs.len() < TRANSFORM_CASES {
            let p = random_program(&mut r, &small);
            if !p.constants().is_empty() {
                gua_progs.push(p);
            }
        }
        let mut dn_progs = Vec::new();
        while dn_progs.len() < TRANSFORM_CASES {
            let p = random_stratified(&mut r, 3, true);
            if p.has_glits() && is_recursion_free(&p).unwrap_or(false) && check_lite_class(&p).is_some() {
                dn_progs.push(p);
            }
        }
        let sat = AtomicUsize::new(0);
        let pp = tally(pp_progs, |p| count(&sat, self.pprog_case(&p))).outcome("p-program translations");
        let pp = (pp.0, format!("{} ({} satisfiable atoms)", pp.1, sat.into_inner()));
        Self::combine(vec![
            tally(hbg_progs, |p| self.hbg_case(&p)).outcome("hbg programs"),
            pp,
            tally(gua_progs, |p| self.gua_case(&p)).outcome("gua programs"),
            tally(dn_progs, |p| self.double_negation_case(&p)).outcome("double negation programs"),
        ])
    }

    fn commutation(&self) -> Outcome {
        let mut r = self.rng(6);
        let shape = Shape::small().with_glits();
        let mut cases = Vec::new();
        while cases.len() < COMMUTE_CASES {
            let p = random_program(&mut r, &shape);
            let k = r.gen_range(1..=2);
            let Ok(u) = Universe::with_fresh(&p.constants(), k) else { continue };
            let (Ok(g), Ok(base)) = (ground(&p, &u), herbrand_base(&p, &u)) else { continue };
            let density = r.gen_range(0.2..0.8);
            let m = OpenInterpretation::new(u, random_subset(&mut r, &base, density));
            cases.push((g, m));
        }
        tally(cases, |(g, m)| ensure(reduct_commute_check(&g, &m), || "reducts differ".into())).outcome("pairs")
    }

    fn datalog_case(&self, p: &Program) -> Result<()> {
        let sp = stratify(p)?;
        for u in universes(&p.constants(), 3)? {
            let sets = self.enumerate(p, &u)?;
            ensure(sets.len() == 1, || format!("{} open answer sets over {} elements", sets.len(), u.len()))?;
            let lfp: BTreeSet<Atom> =
                lfp_model(&sp, &InputStructure::identity(&u))?.atoms().iter().filter(|a| !a.is_equality()).cloned().collect();
            ensure(sets[0].atoms == lfp, || format!("answer set differs from the least fixpoint over {} elements", u.len()))?;
        }
        let fp = free_choice(&sp)?;
        let edb = extensional_predicates(p);
        let heads: BTreeSet<Symbol> = sp.head_predicates();
        for k in 0..=1 {
            for q in &heads {
                let solver = self.sat(&fp, q.as_str(), k)? == SatStatus::Sat;
                let mut input_side = false;
                for u in extra_universes(&p.constants(), k)? {
                    let mut base = Vec::new();
                    for (e, n) in &edb {
                        for_each_tuple(u.elements(), *n, |vals| {
                            base.push(Atom::named(e.clone(), vals.iter().cloned().map(Term::Const).collect()));
                            true
                        });
                    }
                    ensure(base.len() <= 16, || "input space too large".into())?;
                    let domain: BTreeSet<Symbol> = u.elements().iter().cloned().collect();
                    for mask in 0u32..(1u32 << base.len()) {
                        let facts = base.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone());
                        let input = InputStructure { domain: domain.clone(), facts: facts.collect() };
                        if !eval_query(&sp, q.as_str(), &input)?.is_empty() {
                            input_side = true;
                            break;
                        }
                    }
                    if input_side {
                        break;
                    }
                }
                ensure(solver == input_side, || format!("{q} with {k} extra: solver {solver}, inputs {input_side}"))?;
            }
        }
        Ok(())
    }

    fn datalog(&self) -> Outcome {
        let mut r = self.rng(7);
        let programs: Vec<Program> = (0..DATALOG_CASES).map(|_| random_stratified(&mut r, 3, true)).collect();
        let with_glits = programs.iter().filter(|p| p.has_glits()).count();
        let (ok, detail) = tally(programs, |p| self.datalog_case(&p)).outcome("programs");
        (ok, format!("{detail} ({with_glits} with generalized literals)"))
    }

    fn ctl_case(&self, f: &Ctl) -> Result<usize> {
        let enc = encode(f);
        let report = analyze_program_with(&enc.program, GuardConfig { max_width: 2, max_arity: 2 });
        ensure(report.bound && matches!(report.class, Some(ProgramClass::Ggp | ProgramClass::Fggp | ProgramClass::Gp | ProgramClass::Fgp)), || {
            format!("encoding is {:?}, width {}, bound {}", report.class, report.width, report.bound)
        })?;
        let mut sat = 0;
        for n in 1..=CTL_STATES {
            let oracle = sat_oracle_exact(f, n, ORACLE_BUDGET)?;
            let u = Universe::with_fresh(&BTreeSet::new(), n)?;
            let root = Atom::named(enc.root.clone(), vec![Term::Const(u.elements()[0].clone())]);
            let found = self.find(&enc.program, &u, &[root])?;
            let f_text = crate::parser::render_ctl(f);
            ensure(oracle.is_some() == found.is_some(), || {
                format!("{f_text} at {n} states: oracle {}, program {}", oracle.is_some(), found.is_some())
            })?;
            if let Some(m) = found {
                sat += 1;
                let (k, s) = decode(&m, &enc)?;
                ensure(model_check(&k, &s, f)?, || format!("{f_text}: decoded witness fails"))?;
            }
            if let Some((k, s)) = oracle {
                ensure(model_check(&k, &s, f)?, || format!("{f_text}: oracle witness fails"))?;
            }
        }
        Ok(sat)
    }

    fn ctl(&self) -> Outcome {
        let formulas = enumerate_normalized(&["p", "q"], CTL_TEMPORAL, CTL_SIZE);
        let sat = AtomicUsize::new(0);
        let (ok, detail) = tally(formulas, |f| count(&sat, self.ctl_case(&f)))
            .outcome(&format!("formulas (size <= {CTL_SIZE}) x {CTL_STATES} state counts"));
        (ok, format!("{detail}, {} satisfiable pairs decoded and checked", sat.into_inner()))
    }

    fn finite_support(&self) -> Outcome {
        let mut r = self.rng(9);
        let shape = Shape::small().with_glits();
        let programs: Vec<Program> = (0..200).map(|_| random_program(&mut r, &shape)).collect();
        let own = tally(programs, |p| {
            for u in universes(&p.constants(), 3)? {
                self.enumerate(&p, &u)?;
            }
            Ok(())
        });
        let checked = self.support_checked.load(Ordering::Relaxed);
        let failures = self.support_failures.lock().unwrap();
        let ok = own.failed == 0 && failures.is_empty() && checked > 0;
        let mut detail = format!("{checked} open answer sets checked, {} over the bound", failures.len());
        if own.failed > 0 {
            detail.push_str(&format!("; {} suite errors: {}", own.failed, own.failures.join(" | ")));
        }
        if let Some(f) = failures.first() {
            detail.push_str(&format!("; first: {f}"));
        }
        (ok, detail)
    }

    fn size_bounds(&self) -> Outcome {
        let mut r = self.rng(10);
        let mut worst = [0f64; 3];
        let mut failures = Vec::new();
        let mut largest = 0;
        for i in 0..SIZE_CASES {
            let shape = Shape { max_rules: 1 + i % 12, max_body: 1 + i % 4, ..Shape::small() };
            let shape = if i % 2 == 0 { shape.with_glits() } else { shape };
            let p = random_program(&mut r, &shape);
            let n = program_size(&p) as f64;
            largest = largest.max(program_size(&p));
            let pp = match to_p_program(&p) {
                Ok((pp, _)) => program_size(&pp) as f64,
                Err(e) => {
                    failures.push(e.to_string());
                    continue;
                }
            };
            let h = program_size(&hbg(&p)) as f64;
            let g = match gua(&p) {
                Ok(g) => program_size(&g) as f64,
                Err(e) => {
                    failures.push(e.to_string());
                    continue;
                }
            };
            let ratios = [pp / (n * n), h / n, g / (n * n)];
            for (w, x) in worst.iter_mut().zip(ratios) {
                *w = w.max(x);
            }
        }
        let limits = [PPROG_FACTOR, HBG_FACTOR, GUA_FACTOR];
        let ok = failures.is_empty() && worst.iter().zip(limits).all(|(w, l)| *w <= l);
        let mut detail = format!(
            "{SIZE_CASES} programs up to size {largest}; max |P_p|/|P|^2 = {:.2} (<= {PPROG_FACTOR}), |hbg|/|P| = {:.2} (<= {HBG_FACTOR}), |gua|/|P|^2 = {:.2} (<= {GUA_FACTOR})",
            worst[0], worst[1], worst[2]
        );
        if let Some(f) = failures.first() {
            detail.push_str(&format!("; error: {f}"));
        }
        (ok, detail)
    }
}

/// Run every criterion with `cfg`.
pub fn run_all(cfg: SuiteConfig) -> Vec<Criterion> {
    Suite::new(cfg).run_all()
}
