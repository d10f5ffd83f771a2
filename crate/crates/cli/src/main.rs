use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oasp_core::ctl::{self, Kripke};
use oasp_core::datalog::{eval_query, lfp_model, stratify, InputStructure};
use oasp_core::fpl::{self, find_models, lfp_stages, parse_fpl, render_formula, render_fpl, CompletionKind, Formula};
use oasp_core::grounder::ground;
use oasp_core::guardedness::{analyze_program_with, GuardConfig};
use oasp_core::model::fresh_elements;
use oasp_core::parser::{
    parse_atoms, parse_constants, parse_ctl, parse_program, render_atom, render_ctl, render_interpretation,
    render_program, render_rule,
};
use oasp_core::selftest::{Suite, SuiteConfig};
use oasp_core::semantics::{check_with_trace, derivation_depths};
use oasp_core::solver::{enumerate_with, find_in_universe, satisfiable_up_to_with, Budget, SatStatus, SolverConfig};
use oasp_core::transforms::{double_negation, free_choice, gua, hbg, to_p_program};
use oasp_core::{Atom, Error, OpenInterpretation, Program, Symbol, Term, Universe};

/// Print a line to stdout; a closed pipe ends the process quietly.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_UNSAT: u8 = 10;

const UNSAT_CAVEAT: &str = "UNSAT_UP_TO_BOUND: no witness within the bound; this is not a proof of unsatisfiability, \
since satisfiability over open domains is undecidable in general";

#[derive(Parser)]
#[command(name = "oasp", version, about = "Open answer set programming toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = 2024, global = true)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Search-node budget (default from OASP_BUDGET).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Print reducts, least model stages and fixed point approximants to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a program and print it in canonical syntax.
    Parse { file: PathBuf },
    /// Ground a program over a universe.
    Ground {
        #[arg(long)]
        universe: String,
        file: PathBuf,
    },
    /// Check whether a model is an open answer set over a universe.
    Check {
        #[arg(long)]
        universe: String,
        /// Ground atoms, inline or as a file path.
        #[arg(long)]
        model: String,
        file: PathBuf,
    },
    /// Bounded satisfiability of a predicate.
    Solve {
        #[arg(long)]
        pred: String,
        #[arg(long, default_value_t = 3)]
        max_extra: usize,
        file: PathBuf,
    },
    /// Enumerate open answer sets over one universe.
    Answersets {
        /// Universe elements; defaults to the constants plus --extra fresh elements.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long)]
        limit: Option<usize>,
        file: PathBuf,
    },
    /// Apply a program transformation.
    Transform {
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Write the mapping sidecar to this path.
        #[arg(long)]
        mapping: Option<PathBuf>,
        file: PathBuf,
    },
    /// Guardedness analysis.
    Guardcheck {
        #[arg(long, default_value_t = GuardConfig::default().max_width)]
        max_width: usize,
        #[arg(long, default_value_t = GuardConfig::default().max_arity)]
        max_arity: usize,
        file: PathBuf,
    },
    /// Fixed point logic completion of a program.
    Complete {
        #[arg(long, value_enum)]
        kind: Kind,
        file: PathBuf,
    },
    /// Models of a completion file over a domain of the given size.
    FplEval {
        #[arg(long)]
        domain: usize,
        #[arg(long)]
        limit: Option<usize>,
        file: PathBuf,
    },
    /// Stratified Datalog evaluation.
    Datalog {
        #[command(subcommand)]
        command: DatalogCommand,
    },
    /// CTL satisfiability through the program encoding.
    Ctl {
        #[command(subcommand)]
        command: CtlCommand,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Comma-separated criterion ids.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformOp {
    Pprog,
    Hbg,
    Gua,
    Freechoice,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Comp,
    Gcomp,
    Compg,
    Gcompg,
}

#[derive(Subcommand)]
enum DatalogCommand {
    Eval {
        /// Fact file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        query: String,
        program: PathBuf,
    },
}

#[derive(Subcommand)]
enum CtlCommand {
    /// Print the program encoding a formula.
    Encode { formula: String },
    /// Oracle and program verdicts up to a number of states.
    Sat {
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        formula: String,
    },
    /// Model check a formula at a state of a JSON Kripke structure.
    Mc { structure: PathBuf, state: String, formula: String },
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget(_)) { EXIT_BUDGET } else { EXIT_ERROR };
        Fail { code, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Fail {
    Fail { code: EXIT_ERROR, message: message.into() }
}

type Run = std::result::Result<u8, Fail>;

struct Ctx {
    format: Format,
    seed: u64,
    workers: usize,
    budget: Budget,
    trace: bool,
}

impl Ctx {
    fn solver(&self) -> SolverConfig {
        SolverConfig { budget: self.budget, workers: self.workers }
    }

    fn emit(&self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        match self.format {
            Format::Text => out!("{}", text().trim_end()),
            Format::Json => out!("{}", serde_json::to_string_pretty(&value()).expect("json")),
        }
    }

    fn trace(&self, title: &str, lines: impl IntoIterator<Item = String>) {
        if self.trace {
            eprintln!("== {title}");
            for l in lines {
                eprintln!("  {l}");
            }
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    if text.trim().is_empty() {
        return Err(fail(format!("{}: empty input", path.display())));
    }
    Ok(text)
}

fn program(path: &Path) -> std::result::Result<Program, Fail> {
    parse_program(&read(path)?).map_err(|e| fail(format!("{}:{e}", path.display())))
}

fn universe(elements: &str) -> std::result::Result<Universe, Fail> {
    Ok(Universe::new(parse_constants(elements)?)?)
}

fn atoms_json<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Value {
    Value::from(atoms.into_iter().map(render_atom).collect::<Vec<_>>())
}

fn interpretation_json(m: &OpenInterpretation) -> Value {
    json!({
        "universe": m.universe.elements(),
        "atoms": atoms_json(&m.atoms),
        "text": render_interpretation(m),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = Ctx {
        format: cli.format,
        seed: cli.seed,
        workers: cli.workers as usize,
        budget: cli.budget.map(Budget::nodes).unwrap_or_else(Budget::from_env),
        trace: cli.trace,
    };
    match dispatch(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> Run {
    match command {
        Command::Parse { file } => parse(ctx, &file),
        Command::Ground { universe: u, file } => ground_cmd(ctx, &u, &file),
        Command::Check { universe: u, model, file } => check(ctx, &u, &model, &file),
        Command::Solve { pred, max_extra, file } => solve(ctx, &pred, max_extra, &file),
        Command::Answersets { universe: u, extra, limit, file } => answersets(ctx, u.as_deref(), extra, limit, &file),
        Command::Transform { op, mapping, file } => transform(ctx, op, mapping.as_deref(), &file),
        Command::Guardcheck { max_width, max_arity, file } => guardcheck(ctx, GuardConfig { max_width, max_arity }, &file),
        Command::Complete { kind, file } => complete(ctx, kind, &file),
        Command::FplEval { domain, limit, file } => fpl_eval(ctx, domain, limit, &file),
        Command::Datalog { command: DatalogCommand::Eval { input, query, program } } => {
            datalog(ctx, &input, &query, &program)
        }
        Command::Ctl { command } => match command {
            CtlCommand::Encode { formula } => ctl_encode(ctx, &formula),
            CtlCommand::Sat { max_states, formula } => ctl_sat(ctx, max_states, &formula),
            CtlCommand::Mc { structure, state, formula } => ctl_mc(ctx, &structure, &state, &formula),
        },
        Command::Selftest { only } => selftest(ctx, only.as_deref()),
    }
}

fn parse(ctx: &Ctx, file: &Path) -> Run {
    let p = program(file)?;
    let text = render_program(&p);
    ctx.emit(
        || text.clone(),
        || {
            json!({
                "rules": p.rules.len(),
                "predicates": p.predicates(),
                "constants": p.constants(),
                "program": text,
            })
        },
    );
    Ok(0)
}

fn ground_cmd(ctx: &Ctx, u: &str, file: &Path) -> Run {
    let p = program(file)?;
    let g = ground(&p, &universe(u)?)?;
    let rules: Vec<String> = g.iter().map(render_rule).collect();
    ctx.emit(|| rules.join("\n"), || json!(rules));
    Ok(0)
}

fn check(ctx: &Ctx, u: &str, model: &str, file: &Path) -> Run {
    let p = program(file)?;
    let model_text = if Path::new(model).is_file() { read(Path::new(model))? } else { model.to_string() };
    let m = OpenInterpretation::new(universe(u)?, parse_atoms(&model_text)?);
    let t = check_with_trace(&p, &m)?;
    ctx.trace("ground program", t.ground.iter().map(render_rule));
    ctx.trace("generalized-literal reduct", t.geli.iter().map(render_rule));
    ctx.trace(
        "negation reduct",
        t.reduct.rules.iter().map(|r| {
            let head = r.head.as_ref().map(render_atom).unwrap_or_default();
            let body: Vec<String> = r.body.iter().map(render_atom).collect();
            format!("{}: {head} :- {}.", r.name, body.join(", "))
        }),
    );
    ctx.trace(
        "least model stages",
        t.stages.iter().enumerate().map(|(i, s)| format!("T^{} = {}", i + 1, atoms_json(s))),
    );
    let depths = derivation_depths(&p, &m)?;
    let depth_map: serde_json::Map<String, Value> =
        depths.iter().map(|(a, d)| (render_atom(a), Value::from(*d))).collect();
    let out = json!({
        "answer_set": t.is_answer_set,
        "constraints_hold": t.constraints_ok,
        "depths": depth_map,
    });
    out!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(0)
}

fn solve(ctx: &Ctx, pred: &str, max_extra: usize, file: &Path) -> Run {
    let p = program(file)?;
    let r = satisfiable_up_to_with(&p, pred, max_extra, &ctx.solver())?;
    let out = json!({
        "status": r.status,
        "predicate": pred,
        "bound_reached": r.bound_reached,
        "nodes": r.nodes,
        "witness": r.witness.as_ref().map(interpretation_json),
    });
    out!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(match r.status {
        SatStatus::Sat => 0,
        SatStatus::UnsatUpToBound => {
            eprintln!("{UNSAT_CAVEAT}");
            EXIT_UNSAT
        }
        SatStatus::Unknown => {
            eprintln!("search budget of {} nodes exhausted at {} extra elements", ctx.budget.max_nodes, r.bound_reached);
            EXIT_BUDGET
        }
    })
}

fn answersets(ctx: &Ctx, u: Option<&str>, extra: usize, limit: Option<usize>, file: &Path) -> Run {
    let p = program(file)?;
    let u = match u {
        Some(s) => universe(s)?,
        None => {
            let cts = p.constants();
            let k = if cts.is_empty() { extra.max(1) } else { extra };
            Universe::with_fresh(&cts, k)?
        }
    };
    let sets = enumerate_with(&p, &u, limit, &ctx.solver())?;
    ctx.emit(
        || {
            let mut s = format!("{} open answer set(s) over {}\n", sets.len(), json!(u.elements()));
            for m in &sets {
                s.push_str(&format!("{}\n", atoms_json(&m.atoms)));
            }
            s
        },
        || json!({ "universe": u.elements(), "answer_sets": sets.iter().map(|m| atoms_json(&m.atoms)).collect::<Vec<_>>() }),
    );
    Ok(0)
}

fn transform(ctx: &Ctx, op: TransformOp, mapping_path: Option<&Path>, file: &Path) -> Run {
    let p = program(file)?;
    let (out, mapping) = match op {
        TransformOp::Pprog => {
            let (q, m) = to_p_program(&p)?;
            let v = serde_json::to_value(&m).expect("json");
            (q, json!({ "op": "pprog", "mapping": v }))
        }
        TransformOp::Hbg => (hbg(&p), json!({ "op": "hbg" })),
        TransformOp::Gua => (gua(&p)?, json!({ "op": "gua" })),
        TransformOp::Freechoice => (free_choice(&stratify(&p)?)?, json!({ "op": "freechoice" })),
        TransformOp::Double => (double_negation(&p)?, json!({ "op": "double" })),
    };
    let mut mapping = mapping;
    let original: BTreeSet<Symbol> = p.predicates().into_keys().collect();
    let added: Vec<Symbol> = out.predicates().into_keys().filter(|s| !original.contains(s)).collect();
    mapping["original_predicates"] = json!(original);
    mapping["added_predicates"] = json!(added);
    if let Some(path) = mapping_path {
        let text = serde_json::to_string_pretty(&mapping).expect("json");
        std::fs::write(path, text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    }
    let text = render_program(&out);
    ctx.emit(|| text.clone(), || json!({ "program": text, "mapping": mapping }));
    Ok(0)
}

fn guardcheck(ctx: &Ctx, config: GuardConfig, file: &Path) -> Run {
    let p = program(file)?;
    let report = analyze_program_with(&p, config);
    let value = serde_json::to_value(&report).expect("json");
    match ctx.format {
        Format::Json => out!("{}", serde_json::to_string_pretty(&value).expect("json")),
        Format::Text => {
            let class = report.class.map(|c| c.to_string()).unwrap_or_else(|| "none".into());
            let all: Vec<String> = report.classes.iter().map(|c| c.to_string()).collect();
            out!("class: {class}");
            out!("classes: {}", all.join(", "));
            out!("width: {}, max arity: {}, bound: {}", report.width, report.max_arity, report.bound);
            for r in &report.rules {
                let guard = r.body_guard.as_ref().map(|g| g.join(", ")).unwrap_or_else(|| "none".into());
                out!("{}: guarded {}, fully guarded {}, body guard {guard}", r.rule, r.guarded, r.fully_guarded);
            }
        }
    }
    Ok(0)
}

fn complete(ctx: &Ctx, kind: Kind, file: &Path) -> Run {
    let p = program(file)?;
    let kind = match kind {
        Kind::Comp => CompletionKind::Comp,
        Kind::Gcomp => CompletionKind::GComp,
        Kind::Compg => CompletionKind::Compg,
        Kind::Gcompg => CompletionKind::GCompg,
    };
    let c = fpl::build(kind, &p)?;
    let fs = c.formulas();
    let text = render_fpl(&fs);
    ctx.emit(
        || text.clone(),
        || {
            json!({
                "predicate": c.predicate,
                "arity": c.arity,
                "formulas": fs.iter().map(render_formula).collect::<Vec<_>>(),
            })
        },
    );
    Ok(0)
}

fn fixpoints(fs: &[Formula]) -> Vec<&fpl::Fixpoint> {
    let mut out = Vec::new();
    for f in fs {
        f.visit(&mut |g| {
            if let Formula::Fix(fp) = g {
                out.push(&**fp);
            }
        });
    }
    out
}

fn fpl_eval(ctx: &Ctx, n: usize, limit: Option<usize>, file: &Path) -> Run {
    let fs = parse_fpl(&read(file)?)?;
    let cts: BTreeSet<Symbol> = fs.iter().flat_map(|f| f.constants()).collect();
    if cts.len() > n {
        return Err(fail(format!("domain size {n} is below the {} constants of the formulas", cts.len())));
    }
    let mut domain: Vec<Symbol> = cts.into_iter().collect();
    domain.extend(fresh_elements(n - domain.len()));
    let models = find_models(&fs, &domain, limit)?;
    if let Some(m) = models.first() {
        for fp in fixpoints(&fs) {
            let closed = fp.body.free_vars().iter().all(|v| fp.params.contains(v));
            if !closed {
                continue;
            }
            if let Ok(stages) = lfp_stages(fp, m) {
                ctx.trace(
                    &format!("approximants of {} in the first model", fp.var),
                    stages.iter().enumerate().map(|(i, s)| format!("stage {i}: {}", json!(s))),
                );
            }
        }
    }
    ctx.emit(
        || {
            let mut s = format!("{} model(s) over {}\n", models.len(), json!(domain));
            for m in &models {
                s.push_str(&format!("{}\n", atoms_json(&m.atoms)));
            }
            s
        },
        || json!({ "domain": domain, "models": models.iter().map(|m| atoms_json(&m.atoms)).collect::<Vec<_>>() }),
    );
    Ok(0)
}

fn datalog(ctx: &Ctx, input: &Path, query: &str, program_path: &Path) -> Run {
    let p = program(program_path)?;
    let facts = parse_atoms(&read(input)?)?;
    let sp = stratify(&p)?;
    let input = InputStructure::from_facts(facts)?;
    if ctx.trace {
        let m = lfp_model(&sp, &input)?;
        ctx.trace("strata", m.stages.iter().enumerate().map(|(i, s)| format!("after stratum {i}: {}", atoms_json(s))));
    }
    let answers = eval_query(&sp, query, &input)?;
    let rows: Vec<Vec<String>> = answers.iter().map(|t| t.iter().map(|s| s.to_string()).collect()).collect();
    ctx.emit(
        || rows.iter().map(|t| format!("{query}({})", t.join(", "))).collect::<Vec<_>>().join("\n"),
        || json!({ "query": query, "answers": rows }),
    );
    Ok(0)
}

fn formula(text: &str) -> std::result::Result<ctl::Ctl, Fail> {
    if text.trim().is_empty() {
        return Err(fail("empty formula"));
    }
    Ok(parse_ctl(text)?)
}

fn ctl_encode(ctx: &Ctx, text: &str) -> Run {
    let f = formula(text)?;
    let enc = ctl::encode(&f);
    let program_text = render_program(&enc.program);
    ctx.emit(
        || program_text.clone(),
        || {
            json!({
                "formula": render_ctl(&ctl::normalize(&f)),
                "root": enc.root,
                "program": program_text,
                "mapping": enc.mapping,
                "propositions": enc.propositions,
            })
        },
    );
    Ok(0)
}

fn kripke_json(k: &Kripke, state: &str) -> Value {
    json!({ "structure": k, "state": state })
}

fn ctl_sat(ctx: &Ctx, max_states: usize, text: &str) -> Run {
    let f = formula(text)?;
    if max_states == 0 {
        return Err(fail("--max-states must be positive"));
    }
    let oracle = ctl::sat_oracle(&f, max_states)?;
    let enc = ctl::encode(&f);
    let mut program = None;
    for n in 1..=max_states {
        let u = Universe::with_fresh(&BTreeSet::new(), n)?;
        let root = Atom::named(enc.root.clone(), vec![Term::Const(u.elements()[0].clone())]);
        if let Some(m) = find_in_universe(&enc.program, &u, &[root], &ctx.solver())? {
            let (k, s) = ctl::decode(&m, &enc)?;
            ctx.trace("witness", [render_interpretation(&m)]);
            program = Some((n, k, s));
            break;
        }
    }
    let status = |sat: bool| if sat { SatStatus::Sat } else { SatStatus::UnsatUpToBound };
    let out = json!({
        "formula": render_ctl(&f),
        "max_states": max_states,
        "oracle": {
            "status": status(oracle.is_some()),
            "states": oracle.as_ref().map(|(k, _)| k.states.len()),
            "witness": oracle.as_ref().map(|(k, s)| kripke_json(k, s)),
        },
        "program": {
            "status": status(program.is_some()),
            "states": program.as_ref().map(|(n, _, _)| *n),
            "witness": program.as_ref().map(|(_, k, s)| kripke_json(k, s)),
        },
        "agree": oracle.is_some() == program.is_some(),
    });
    out!("{}", serde_json::to_string_pretty(&out).expect("json"));
    if oracle.is_some() != program.is_some() {
        return Err(fail("oracle and program encoding disagree"));
    }
    if oracle.is_none() {
        eprintln!("{UNSAT_CAVEAT}");
        return Ok(EXIT_UNSAT);
    }
    Ok(0)
}

fn ctl_mc(ctx: &Ctx, structure: &Path, state: &str, text: &str) -> Run {
    let k: Kripke = serde_json::from_str(&read(structure)?).map_err(|e| fail(format!("{}: {e}", structure.display())))?;
    let f = formula(text)?;
    let holds = ctl::model_check(&k, state, &f)?;
    ctx.emit(|| holds.to_string(), || json!({ "state": state, "formula": render_ctl(&f), "holds": holds }));
    Ok(0)
}

fn selftest(ctx: &Ctx, only: Option<&str>) -> Run {
    let suite = Suite::new(SuiteConfig { seed: ctx.seed, workers: ctx.workers, budget: ctx.budget });
    let ids: Vec<usize> = match only {
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| fail(format!("bad criterion id {x}"))))
            .collect::<std::result::Result<_, _>>()?,
        None => (1..=10).collect(),
    };
    let mut results = Vec::new();
    for id in ids {
        let c = suite.run(id);
        if ctx.format == Format::Text {
            out!("{c}");
        }
        results.push(c);
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    match ctx.format {
        Format::Text => out!("selftest: {failed} failed"),
        Format::Json => out!("{}", serde_json::to_string_pretty(&results).expect("json")),
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
