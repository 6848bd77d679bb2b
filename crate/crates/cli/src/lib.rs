//! Command implementations behind the `splitreduc` binary.
//!
//! Every subcommand writes its primary output either to stdout or, with
//! `--out DIR`, to files in `DIR` together with a `manifest.json` that
//! [`Command::Replay`] can re-run and check byte for byte.

pub mod args;
pub mod manifest;
mod table1;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Parser;
use log::{info, warn};
use serde_json::{json, Map, Value};
use splitreduc::estimate::{estimate, EstimateReport};
use splitreduc::io::{from_json, parse, polynomial_document, serialize, SymbolTable};
use splitreduc::quadratize::{quadratize_with, LambdaPolicy, QuadratizeOptions};
use splitreduc::ramsey::{
    determine_ramsey, graph_bits, hamiltonian, minimize, Evidence, RamseySpec,
};
use splitreduc::solver::{SolveOptions, SolvePlan, SolveResult};
use splitreduc::split::{count_leaves, walk_leaves, SplitSummary};
use splitreduc::{Assignment, Polynomial, VarId};

use args::{
    Cli, Command, DeviceArgs, EstimateArgs, LimitArgs, Mode, QuadratizeArgs, RamseyCommand,
    RamseySolveArgs, ReplayArgs, SolveArgs, SolverArgs, SplitArgs,
};
use manifest::{digest, strip_out, RunManifest};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a finished subcommand reports to the manifest.
struct Done {
    subcommand: &'static str,
    options: Value,
    result: Value,
}

struct Session<'a> {
    json: bool,
    out: Option<PathBuf>,
    seed: Option<u64>,
    stdout: &'a mut dyn Write,
    inputs: Vec<PathBuf>,
    outputs: Vec<String>,
}

impl Session<'_> {
    fn input(&mut self, path: &Path) -> Result<(Polynomial, SymbolTable)> {
        let parsed = load(path)?;
        self.inputs.push(path.to_path_buf());
        Ok(parsed)
    }

    /// A file in the output directory, if there is one.
    fn create(&mut self, name: &str) -> Result<Option<BufWriter<File>>> {
        let Some(dir) = &self.out else {
            return Ok(None);
        };
        let path = dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.outputs.push(name.to_string());
        Ok(Some(BufWriter::new(file)))
    }

    /// Writes a JSON document to `name` and reports it on stdout.
    fn document(&mut self, name: &str, doc: &Value, human: &str) -> Result<()> {
        if let Some(mut f) = self.create(name)? {
            writeln!(f, "{}", serde_json::to_string_pretty(doc)?)?;
            f.flush()?;
        }
        self.report(doc, human)
    }

    /// Writes a polynomial in text form to `name` and reports it on stdout.
    fn polynomial(&mut self, name: &str, text: &str, doc: &Value) -> Result<()> {
        if let Some(mut f) = self.create(name)? {
            writeln!(f, "{text}")?;
            f.flush()?;
        }
        self.report(doc, text)
    }

    fn report(&mut self, doc: &Value, human: &str) -> Result<()> {
        if self.json {
            writeln!(self.stdout, "{doc}")?;
        } else {
            writeln!(self.stdout, "{}", human.trim_end())?;
        }
        Ok(())
    }
}

/// Reads a polynomial file; documents starting with `{` are JSON.
pub fn load(path: &Path) -> Result<(Polynomial, SymbolTable)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        from_json(&text)
    } else {
        parse(&text)
    };
    parsed.with_context(|| format!("in {}", path.display()))
}

/// Runs `cli`. `argv` holds the arguments after the program name and is
/// recorded verbatim in the manifest.
pub fn run(cli: &Cli, argv: &[String], stdout: &mut dyn Write) -> Result<()> {
    if let Command::Replay(a) = &cli.command {
        return replay(a, cli.out.as_deref(), cli.json, stdout);
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let started = Instant::now();
    let mut session = Session {
        json: cli.json,
        out: cli.out.clone(),
        seed: cli.seed,
        stdout,
        inputs: Vec::new(),
        outputs: Vec::new(),
    };
    let done = match &cli.command {
        Command::Split(a) => split(a, &mut session)?,
        Command::Estimate(a) => estimate_cmd(a, &mut session)?,
        Command::Quadratize(a) => quadratize_cmd(a, &mut session)?,
        Command::Ramsey(RamseyCommand::Gen { m, n, vertices }) => {
            ramsey_gen(*m, *n, *vertices, &mut session)?
        }
        Command::Ramsey(RamseyCommand::Solve(a)) => ramsey_solve(a, &mut session)?,
        Command::Solve(a) => solve(a, &mut session)?,
        Command::ReproTable1(a) => table1::run(a, &mut session)?,
        Command::Replay(_) => unreachable!("handled above"),
    };
    session.stdout.flush()?;
    let elapsed = started.elapsed().as_secs_f64();
    info!("{} finished in {elapsed:.3}s", done.subcommand);
    if let Some(dir) = &cli.out {
        let manifest = RunManifest {
            tool: "splitreduc".into(),
            version: VERSION.into(),
            subcommand: done.subcommand.into(),
            args: strip_out(argv),
            working_dir: std::env::current_dir()?.display().to_string(),
            options: done.options,
            inputs: session
                .inputs
                .iter()
                .map(|p| {
                    let abs = fs::canonicalize(p)?;
                    digest(&abs, abs.display().to_string())
                })
                .collect::<Result<_>>()?,
            outputs: session
                .outputs
                .iter()
                .map(|name| digest(&dir.join(name), name.clone()))
                .collect::<Result<_>>()?,
            wall_clock_seconds: elapsed,
            result: done.result,
        };
        let path = manifest.write(dir)?;
        info!("manifest written to {}", path.display());
    }
    Ok(())
}

fn bits(path: impl IntoIterator<Item = (VarId, bool)>, table: &SymbolTable) -> Value {
    let map: Map<String, Value> = path
        .into_iter()
        .map(|(v, b)| (table.name(v), Value::from(u8::from(b))))
        .collect();
    Value::Object(map)
}

fn bits_text(path: &[(VarId, bool)], table: &SymbolTable) -> String {
    let inner: Vec<String> = path
        .iter()
        .map(|&(v, b)| format!("{}={}", table.name(v), u8::from(b)))
        .collect();
    format!("{{{}}}", inner.join(", "))
}

fn split(a: &SplitArgs, s: &mut Session) -> Result<Done> {
    let (h, table) = s.input(&a.input)?;
    let cfg = a.device.config(s.seed);
    let limits = a.limits.limits();
    let summary = if a.summary_only {
        count_leaves(&h, &cfg, &limits)?
    } else {
        let mut file = s.create("leaves.jsonl")?;
        let json = s.json;
        let stdout = &mut *s.stdout;
        let mut io_error = None;
        let walked = walk_leaves(&h, &cfg, &limits, |path, leaf| {
            let written = match file.as_mut() {
                Some(f) => writeln!(f, "{}", leaf_record(path, leaf, &table)),
                None if json => writeln!(stdout, "{}", leaf_record(path, leaf, &table)),
                None => writeln!(
                    stdout,
                    "{} {}",
                    bits_text(path, &table),
                    serialize(leaf, &table)
                ),
            };
            written.map_err(|e| {
                io_error = Some(e);
                splitreduc::Error::InvalidOptions("leaf output failed".into())
            })
        });
        if let Some(e) = io_error {
            return Err(e).context("writing leaves");
        }
        if let Some(mut f) = file {
            f.flush()?;
        }
        walked?
    };
    let doc = serde_json::to_value(summary)?;
    s.document("summary.json", &doc, &summary_text(&summary))?;
    Ok(Done {
        subcommand: "split",
        options: json!({ "cost": cfg, "limits": limits, "summary_only": a.summary_only }),
        result: doc,
    })
}

fn leaf_record(path: &[(VarId, bool)], leaf: &Polynomial, table: &SymbolTable) -> Value {
    json!({
        "prefix": bits(path.iter().copied(), table),
        "polynomial": polynomial_document(leaf, table),
    })
}

fn summary_text(s: &SplitSummary) -> String {
    format!(
        "leaves {}, max depth {}, max leaf cost {}",
        s.leaf_count, s.max_depth, s.max_leaf_cost
    )
}

fn estimate_cmd(a: &EstimateArgs, s: &mut Session) -> Result<Done> {
    let (h, _) = s.input(&a.input)?;
    let cfg = a.device.config(s.seed);
    let report = estimate(&h, &cfg)?;
    let doc = serde_json::to_value(&report)?;
    s.document("estimate.json", &doc, &estimate_text(&report))?;
    Ok(Done {
        subcommand: "estimate",
        options: json!({ "cost": cfg }),
        result: json!({
            "shortest_path": report.shortest_path,
            "longest_path": report.longest_path,
            "combinatorial_estimate": report.combinatorial_estimate.to_string(),
        }),
    })
}

fn estimate_text(r: &EstimateReport) -> String {
    let join = |v: &[usize]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let positions: Vec<String> = r
        .right_move_positions
        .iter()
        .map(|(i, p)| format!("R_{i}={p}"))
        .collect();
    let rows = [
        ("shortest path s", r.shortest_path.to_string()),
        ("longest path l", r.longest_path.to_string()),
        ("d sequence", join(&r.left_moves_needed)),
        ("R positions", positions.join(" ")),
        ("lower bound 2^s", r.lower_bound.to_string()),
        ("upper bound 2^l", r.upper_bound.to_string()),
        ("binomial estimate", r.binomial_estimate.to_string()),
        (
            "combinatorial estimate",
            r.combinatorial_estimate.to_string(),
        ),
        ("substitutions", r.substitutions.to_string()),
    ];
    rows.iter().map(|(k, v)| format!("{k:<24}{v}\n")).collect()
}

fn quadratize_cmd(a: &QuadratizeArgs, s: &mut Session) -> Result<Done> {
    let (h, table) = s.input(&a.input)?;
    let opts = QuadratizeOptions {
        target_order: a.target_order,
        lambda: a.lambda.map_or(LambdaPolicy::Auto, LambdaPolicy::Fixed),
        max_aux: a.max_aux,
    };
    let r = quadratize_with(&h, &opts)?;
    // Auxiliaries are numbered after the largest live variable, so names of
    // declared but unused variables beyond it are dropped.
    let live = h.max_var().map_or(0, |v| v.0 as usize + 1);
    let mut names = SymbolTable::with_names(table.names()[..live].iter().cloned());
    let mut fresh = 0usize;
    for d in &r.aux_defs {
        let name = loop {
            let candidate = format!("b{fresh}");
            fresh += 1;
            if names.lookup(&candidate).is_none() {
                break candidate;
            }
        };
        let id = names.intern(&name);
        debug_assert_eq!(id, d.aux);
    }
    let aux: Vec<Value> = r
        .aux_defs
        .iter()
        .map(|d| json!({ "name": names.name(d.aux), "pair": [names.name(d.pair.0), names.name(d.pair.1)] }))
        .collect();
    let doc = json!({
        "polynomial": polynomial_document(&r.reduced, &names),
        "lambda": r.lambda,
        "aux": aux,
    });
    if let Some(mut f) = s.create("quadratization.json")? {
        writeln!(f, "{}", serde_json::to_string_pretty(&doc)?)?;
        f.flush()?;
    }
    let text = serialize(&r.reduced, &names);
    let mut human = text.clone();
    for d in &r.aux_defs {
        human += &format!(
            "\naux {} = {}*{}",
            names.name(d.aux),
            names.name(d.pair.0),
            names.name(d.pair.1)
        );
    }
    human += &format!("\nlambda {}", r.lambda);
    if let Some(mut f) = s.create("reduced.poly")? {
        writeln!(f, "{text}")?;
        f.flush()?;
    }
    s.report(&doc, &human)?;
    Ok(Done {
        subcommand: "quadratize",
        options: serde_json::to_value(opts)?,
        result: json!({ "aux_count": r.aux_count(), "lambda": r.lambda, "degree": r.reduced.degree() }),
    })
}

fn ramsey_gen(m: usize, n: usize, vertices: usize, s: &mut Session) -> Result<Done> {
    let spec = RamseySpec::new(m, n, vertices)?;
    let h = hamiltonian(&spec)?;
    let table = spec.edges().symbols();
    let doc = serde_json::to_value(polynomial_document(&h, &table))?;
    s.polynomial("hamiltonian.poly", &serialize(&h, &table), &doc)?;
    Ok(Done {
        subcommand: "ramsey gen",
        options: json!({ "m": m, "n": n, "vertices": vertices }),
        result: json!({ "terms": h.num_terms(), "variables": h.support().len(), "degree": h.degree() }),
    })
}

fn plan(
    solver: &SolverArgs,
    device: &DeviceArgs,
    limits: &LimitArgs,
    seed: Option<u64>,
    opts: SolveOptions,
) -> SolvePlan {
    let mut plan = match solver.mode {
        Mode::Exhaustive => SolvePlan::exhaustive(solver.workers),
        Mode::Split => SolvePlan::split(device.config(seed), solver.workers),
    };
    plan.split.limits = limits.limits();
    plan.split.leaf_var_cap = solver.leaf_var_cap;
    plan.with_options(opts)
}

fn ramsey_solve(a: &RamseySolveArgs, s: &mut Session) -> Result<Done> {
    // Ramsey Hamiltonians are nonnegative, so a zero is a global minimum.
    let plan = plan(
        &a.solver,
        &a.device,
        &a.limits,
        s.seed,
        SolveOptions::early_exit_zero(),
    );
    let start = a.start_vertices.unwrap_or(a.m.max(a.n));
    let (number, evidence) = if a.report_only {
        if start > a.max_vertices {
            bail!("start N={start} exceeds max N={}", a.max_vertices);
        }
        let mut evidence = Vec::new();
        for vertices in start..=a.max_vertices {
            let spec = RamseySpec::new(a.m, a.n, vertices)?;
            let r = minimize(&spec, &plan)?;
            info!("N={vertices}: min energy {}", r.min_energy);
            evidence.push((
                vertices,
                Evidence {
                    min_energy: r.min_energy,
                    leaves: r.leaves,
                    witness: graph_bits(&spec, &r.witness),
                },
            ));
        }
        (None, evidence)
    } else {
        let outcome = determine_ramsey(a.m, a.n, Some(start), a.max_vertices, &plan)?;
        (outcome.number, outcome.evidence.into_iter().collect())
    };
    let mut map = Map::new();
    let mut human = String::new();
    for (vertices, e) in &evidence {
        let symbols = RamseySpec::new(a.m, a.n, *vertices)?.edges().symbols();
        let witness = bits(
            e.witness
                .iter()
                .enumerate()
                .map(|(k, &b)| (VarId(k as u32), b)),
            &symbols,
        );
        map.insert(
            vertices.to_string(),
            json!({ "min_energy": e.min_energy, "leaves": e.leaves, "witness": witness }),
        );
        human += &format!(
            "N={vertices}: min energy {} over {} leaves\n",
            e.min_energy, e.leaves
        );
    }
    match number {
        Some(r) => human += &format!("R({},{}) = {r}\n", a.m, a.n),
        None if a.report_only => {}
        None => human += &format!("R({},{}) > {}\n", a.m, a.n, a.max_vertices),
    }
    let doc = json!({ "m": a.m, "n": a.n, "ramsey_number": number, "evidence": map });
    s.document("evidence.json", &doc, &human)?;
    let minima: Map<String, Value> = evidence
        .iter()
        .map(|(v, e)| (v.to_string(), Value::from(e.min_energy)))
        .collect();
    Ok(Done {
        subcommand: "ramsey solve",
        options: json!({
            "m": a.m,
            "n": a.n,
            "start_vertices": start,
            "max_vertices": a.max_vertices,
            "report_only": a.report_only,
            "plan": plan,
        }),
        result: json!({ "ramsey_number": number, "min_energy": minima }),
    })
}

fn solution_doc(r: &SolveResult, table: &SymbolTable) -> Value {
    json!({
        "min_energy": r.min_energy,
        "witness": bits(assignment_pairs(&r.witness), table),
        "num_minima": r.num_minima,
        "evaluations": r.evaluations,
        "leaves": r.leaves,
        "stopped_early": r.stopped_early,
    })
}

fn assignment_pairs(a: &Assignment) -> Vec<(VarId, bool)> {
    a.iter().collect()
}

fn solve(a: &SolveArgs, s: &mut Session) -> Result<Done> {
    let (h, table) = s.input(&a.input)?;
    let opts = SolveOptions {
        count_minima: a.count_minima,
        stop_at: a.early_exit_zero.then_some(0),
    };
    let plan = plan(&a.solver, &a.device, &a.limits, s.seed, opts);
    if a.early_exit_zero && a.solver.workers > 1 {
        warn!("early exit with several workers makes the evaluation count timing dependent");
    }
    let r = plan.run(&h)?;
    let doc = solution_doc(&r, &table);
    let mut human = format!("min energy {}\n", r.min_energy);
    if let Some(k) = r.num_minima {
        human += &format!("minimizers {k}\n");
    }
    let witness: Vec<(VarId, bool)> = assignment_pairs(&r.witness);
    human += &format!("witness {}\n", bits_text(&witness, &table));
    s.document("solution.json", &doc, &human)?;
    Ok(Done {
        subcommand: "solve",
        options: json!({ "plan": plan }),
        result: json!({ "min_energy": r.min_energy, "num_minima": r.num_minima }),
    })
}

fn replay(a: &ReplayArgs, out: Option<&Path>, json: bool, stdout: &mut dyn Write) -> Result<()> {
    let recorded = RunManifest::read(&a.manifest)?;
    if recorded.version != VERSION {
        warn!(
            "manifest was written by version {}, running {VERSION}",
            recorded.version
        );
    }
    recorded.check_inputs()?;
    let dir = match out {
        Some(d) => std::path::absolute(d)?,
        None => std::env::temp_dir().join(format!("splitreduc-replay-{}", std::process::id())),
    };
    std::env::set_current_dir(&recorded.working_dir)
        .with_context(|| format!("entering {}", recorded.working_dir))?;
    let mut argv = recorded.args.clone();
    argv.push("--out".into());
    argv.push(dir.display().to_string());
    let cli =
        Cli::try_parse_from(std::iter::once("splitreduc".to_string()).chain(argv.iter().cloned()))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!("a manifest cannot record a replay");
    }
    run(&cli, &argv, &mut io::sink())?;
    let mut identical = true;
    let mut rows = Vec::new();
    let mut human = String::new();
    for o in &recorded.outputs {
        let path = dir.join(&o.path);
        let actual = manifest::sha256_file(&path).unwrap_or_default();
        let same = actual == o.sha256;
        identical &= same;
        human += &format!(
            "{} {}\n",
            if same { "identical" } else { "DIFFERS  " },
            o.path
        );
        rows.push(
            json!({ "file": o.path, "expected": o.sha256, "actual": actual, "identical": same }),
        );
    }
    let doc =
        json!({ "replay_dir": dir.display().to_string(), "outputs": rows, "identical": identical });
    if json {
        writeln!(stdout, "{doc}")?;
    } else {
        write!(stdout, "{human}")?;
        writeln!(stdout, "replayed into {}", dir.display())?;
    }
    stdout.flush()?;
    if !identical {
        bail!("replayed outputs differ from the manifest");
    }
    Ok(())
}
