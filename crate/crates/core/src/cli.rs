//! Command-line front end. `run` returns the process exit code: 0 success,
//! 1 usage or I/O error, 2 validation failure, 3 enumeration cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds;
use crate::chain::{SwitchChain, UndirectedChain, DirectedChain, Variant};
use crate::construct::{realize, realize_directed};
use crate::degseq::{self, DegreeSequence, DirectedDegreeSequence};
use crate::encoding::{self, Encoding, Mode};
use crate::enumerate::{self, DEFAULT_CAP, DEFAULT_T_MAX};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::irreducibility;

/// Version of the JSON documents written by the CLI.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default enumeration cap.
pub const CAP_ENV: &str = "SWITCHMIX_CAP";

#[derive(Debug, Parser)]
#[command(name = "switchmix", version, about = "Switch-chain sampling and exact analysis for degree sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Input {
    /// Degree file: one degree per line, or `in out` per line with --directed.
    #[arg(long, value_name = "FILE", conflicts_with = "sequence", required_unless_present = "sequence")]
    degrees: Option<PathBuf>,
    /// Inline sequence, e.g. `2,2,1,1` or `1:1,1:1,1:1` with --directed.
    #[arg(long, value_name = "SEQ")]
    sequence: Option<String>,
    #[arg(long)]
    directed: bool,
}

#[derive(Debug, Clone, Args)]
struct Output {
    /// Write the JSON result here; the manifest goes to `<FILE>.manifest.json`.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Print JSON (with an embedded manifest) instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check realizability and bound hypotheses.
    Validate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Print a deterministic realization as an edge list.
    Realize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Draw thinned samples from the switch chain.
    Sample {
        #[command(flatten)]
        input: Input,
        /// Burn-in transitions before the first sample.
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, default_value_t = 100)]
        thin: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent chains, run concurrently on sub-streams of the seed.
        #[arg(long, default_value_t = 1)]
        replicas: u64,
        #[arg(long, default_value = "exact")]
        variant: Variant,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate the state space and compute exact mixing quantities.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long)]
        cap: Option<usize>,
        /// Index of the start state in canonical order.
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: usize,
        #[arg(long, default_value = "exact")]
        variant: Variant,
        #[command(flatten)]
        output: Output,
    },
    /// Decide switch-irreducibility by enumeration.
    Irreducible {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cap: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate the closed-form mixing bound.
    Bound {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Repair a CSV encoding matrix into a simple (di)graph.
    RepairEncoding {
        /// Dense CSV matrix with entries in -1..=2.
        #[arg(long, value_name = "FILE")]
        encoding: PathBuf,
        /// Reference graph (edge list) to check consistency against.
        #[arg(long, value_name = "FILE")]
        reference: Option<PathBuf>,
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub source: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

enum Sequence {
    Undirected(DegreeSequence),
    Directed(DirectedDegreeSequence),
}

struct Ctx<'a> {
    inputs: Vec<InputDigest>,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            source: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    fn sequence(&mut self, input: &Input) -> Result<Sequence> {
        let (text, inline) = match (&input.degrees, &input.sequence) {
            (Some(p), _) => (self.read(p)?, false),
            (None, Some(s)) => {
                self.inputs.push(InputDigest {
                    source: "inline".into(),
                    sha256: sha256_hex(s.as_bytes()),
                });
                (s.clone(), true)
            }
            (None, None) => return Err(Error::InvalidArgument("one of --degrees or --sequence is required".into())),
        };
        Ok(match (input.directed, inline) {
            (false, false) => Sequence::Undirected(degseq::parse_degrees(&text)?),
            (false, true) => Sequence::Undirected(degseq::parse_inline(&text)?),
            (true, false) => Sequence::Directed(degseq::parse_directed_degrees(&text)?),
            (true, true) => Sequence::Directed(degseq::parse_inline_directed(&text)?),
        })
    }
}

fn resolve_cap(cap: Option<usize>) -> Result<usize> {
    if let Some(c) = cap {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{CAP_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

/// Result of a subcommand before emission.
struct Outcome {
    doc: Value,
    text: String,
    code: i32,
    seed: Option<u64>,
}

impl Outcome {
    fn ok(doc: Value, text: String) -> Self {
        Outcome { doc, text, code: 0, seed: None }
    }
}

fn edges_text(n: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

fn cmd_validate(ctx: &mut Ctx, input: &Input) -> Result<Outcome> {
    match ctx.sequence(input)? {
        Sequence::Undirected(d) => {
            let c = d.classify();
            let reason = (!c.graphical).then(|| {
                if d.total() % 2 == 1 {
                    "odd degree sum"
                } else {
                    "not graphical"
                }
            });
            let doc = json!({
                "directed": false,
                "n": d.len(),
                "valid": c.graphical,
                "reason": reason,
                "classification": c,
                "stats": d.stats(),
            });
            let text = format!(
                "graphical: {}\nstable: {}\nbound hypotheses: {}\n{}",
                c.graphical,
                c.stable,
                c.mixing_bound_applies,
                reason.map(|r| format!("reason: {r}\n")).unwrap_or_default()
            );
            Ok(Outcome {
                code: if c.graphical { 0 } else { 2 },
                ..Outcome::ok(doc, text)
            })
        }
        Sequence::Directed(dd) => {
            let (ok, reason, class) = match dd.classify() {
                Ok(c) => (c.digraphical, (!c.digraphical).then(|| "not digraphical".to_string()), Some(c)),
                Err(e) => (false, Some(e.to_string()), None),
            };
            let doc = json!({
                "directed": true,
                "n": dd.len(),
                "valid": ok,
                "reason": reason,
                "classification": class,
                "stats": dd.stats(),
            });
            let text = format!(
                "digraphical: {ok}\nbound hypotheses: {}\n{}",
                class.is_some_and(|c| c.mixing_bound_degrees_ok),
                reason.as_ref().map(|r| format!("reason: {r}\n")).unwrap_or_default()
            );
            Ok(Outcome {
                code: if ok { 0 } else { 2 },
                ..Outcome::ok(doc, text)
            })
        }
    }
}

fn cmd_realize(ctx: &mut Ctx, input: &Input) -> Result<Outcome> {
    let (n, edges, directed) = match ctx.sequence(input)? {
        Sequence::Undirected(d) => {
            let g = realize(&d)?;
            (g.n(), g.sorted_edges(), false)
        }
        Sequence::Directed(dd) => {
            let g = realize_directed(&dd)?;
            (g.n(), g.sorted_arcs(), true)
        }
    };
    let doc = json!({ "directed": directed, "n": n, "edges": edges });
    Ok(Outcome::ok(doc, edges_text(n, &edges)))
}

#[derive(Serialize)]
struct ReplicaSamples {
    replica: u64,
    switched: u64,
    held: u64,
    samples: Vec<Vec<(usize, usize)>>,
}

fn run_replica_undirected(g: Graph, variant: Variant, seed: u64, r: u64, steps: u64, thin: u64, count: usize) -> Result<ReplicaSamples> {
    let mut chain = UndirectedChain::new(g, variant, seed, r)?;
    let samples = chain.sample(steps, thin, count)?;
    let (switched, held) = chain.counts();
    Ok(ReplicaSamples {
        replica: r,
        switched,
        held,
        samples: samples.iter().map(Graph::sorted_edges).collect(),
    })
}

fn run_replica_directed(g: Digraph, seed: u64, r: u64, steps: u64, thin: u64, count: usize) -> Result<ReplicaSamples> {
    let mut chain = DirectedChain::new(g, seed, r)?;
    let samples = chain.sample(steps, thin, count)?;
    let (switched, held) = chain.counts();
    Ok(ReplicaSamples {
        replica: r,
        switched,
        held,
        samples: samples.iter().map(Digraph::sorted_arcs).collect(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    ctx: &mut Ctx,
    input: &Input,
    steps: u64,
    thin: u64,
    count: usize,
    seed: u64,
    replicas: u64,
    variant: Variant,
) -> Result<Outcome> {
    if thin == 0 {
        return Err(Error::InvalidArgument("--thin must be at least 1".into()));
    }
    if replicas == 0 {
        return Err(Error::InvalidArgument("--replicas must be at least 1".into()));
    }
    let seq = ctx.sequence(input)?;
    let (n, directed, results) = match seq {
        Sequence::Undirected(d) => {
            let g = realize(&d)?;
            let n = g.n();
            let results: Vec<Result<ReplicaSamples>> = std::thread::scope(|s| {
                let handles: Vec<_> = (0..replicas)
                    .map(|r| {
                        let g = g.clone();
                        s.spawn(move || run_replica_undirected(g, variant, seed, r, steps, thin, count))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("replica thread panicked")).collect()
            });
            (n, false, results)
        }
        Sequence::Directed(dd) => {
            let g = realize_directed(&dd)?;
            let n = g.n();
            let results: Vec<Result<ReplicaSamples>> = std::thread::scope(|s| {
                let handles: Vec<_> = (0..replicas)
                    .map(|r| {
                        let g = g.clone();
                        s.spawn(move || run_replica_directed(g, seed, r, steps, thin, count))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("replica thread panicked")).collect()
            });
            (n, true, results)
        }
    };
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut text = String::new();
    for r in &results {
        for (i, s) in r.samples.iter().enumerate() {
            text.push_str(&format!("# replica {} sample {i}\n", r.replica));
            text.push_str(&edges_text(n, s));
        }
    }
    let doc = json!({
        "directed": directed,
        "n": n,
        "variant": if directed { None } else { Some(variant.name()) },
        "burn_in": steps,
        "thin": thin,
        "count": count,
        "seed": seed,
        "replicas": results,
    });
    Ok(Outcome {
        seed: Some(seed),
        ..Outcome::ok(doc, text)
    })
}

fn cmd_analyze(ctx: &mut Ctx, input: &Input, eps: f64, cap: Option<usize>, start: usize, t_max: usize, variant: Variant) -> Result<Outcome> {
    let cap = resolve_cap(cap)?;
    let (a, directed) = match ctx.sequence(input)? {
        Sequence::Undirected(d) => (enumerate::analyze(&d, variant, start, eps, cap, t_max)?, false),
        Sequence::Directed(dd) => (enumerate::analyze_directed(&dd, start, eps, cap, t_max)?, true),
    };
    let opt = |x: Option<usize>| x.map_or("none".to_string(), |t| t.to_string());
    let text = format!(
        "states: {}\ntransitions: {}\ncomponents: {}\nspectral gap: {}\nmixing time (worst start): {}\nmixing time (from start {}): {}\n",
        a.state_count,
        a.transitions,
        a.components,
        a.spectral_gap.map_or("none".to_string(), |g| format!("{g:.12}")),
        opt(a.mixing_time),
        a.start,
        opt(a.mixing_time_from_start),
    );
    let mut doc = serde_json::to_value(&a).map_err(|e| Error::Io(e.to_string()))?;
    doc["directed"] = json!(directed);
    doc["variant"] = json!(if directed { None } else { Some(variant.name()) });
    doc["cap"] = json!(cap);
    Ok(Outcome::ok(doc, text))
}

#[derive(Serialize)]
struct TriangleCheck {
    induced_cycles: usize,
    without_witness: usize,
}

fn cmd_irreducible(ctx: &mut Ctx, input: &Input, cap: Option<usize>) -> Result<Outcome> {
    let cap = resolve_cap(cap)?;
    let (conn, triangles) = match ctx.sequence(input)? {
        Sequence::Undirected(d) => (irreducibility::switch_connectivity(&d, cap)?, None),
        Sequence::Directed(dd) => {
            let conn = irreducibility::switch_connectivity_directed(&dd, cap)?;
            let mut check = TriangleCheck {
                induced_cycles: 0,
                without_witness: 0,
            };
            for g in enumerate::enum_states_directed(&dd, cap)? {
                for u in irreducibility::induced_three_cycles(&g) {
                    check.induced_cycles += 1;
                    if irreducibility::find_useful(&g, u)?.is_none() {
                        check.without_witness += 1;
                    }
                }
            }
            (conn, Some(check))
        }
    };
    let text = format!(
        "states: {}\ntransitions: {}\ncomponents: {}\nirreducible: {}\n",
        conn.states, conn.transitions, conn.component_count, conn.irreducible
    );
    let doc = json!({ "connectivity": conn, "triangle_check": triangles, "cap": cap });
    Ok(Outcome::ok(doc, text))
}

fn cmd_bound(ctx: &mut Ctx, input: &Input, eps: f64) -> Result<Outcome> {
    let (report, comps) = match ctx.sequence(input)? {
        Sequence::Undirected(d) => (bounds::mixing_bound(&d, eps)?, bounds::flow_components(&d)?),
        Sequence::Directed(dd) => (bounds::mixing_bound_directed(&dd, eps)?, bounds::flow_components_directed(&dd)?),
    };
    let mut text = format!(
        "bound: {}\nlog10: {:.6}\nformula: {}\napplicable: {}\n",
        report.value.to_scientific(15),
        report.log10_value,
        report.formula,
        report.applicability.applicable
    );
    for w in &report.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let doc = json!({
        "bound": report,
        "components": comps,
        "log10_size_bound": bounds::log10_size_bound(&comps),
    });
    Ok(Outcome::ok(doc, text))
}

fn cmd_repair(ctx: &mut Ctx, path: &Path, reference: Option<&Path>, directed: bool) -> Result<Outcome> {
    let mode = if directed { Mode::Directed } else { Mode::Undirected };
    let l = Encoding::from_csv(mode, &ctx.read(path)?)?;
    let validation = match reference {
        Some(p) => {
            let text = ctx.read(p)?;
            let z = if directed {
                Encoding::from_digraph(&Digraph::parse_edge_list(&text)?)
            } else {
                Encoding::from_graph(&Graph::parse_edge_list(&text)?)
            };
            Some(encoding::validate(&l, &z))
        }
        None => None,
    };
    let profile = l.profile().pq();
    let before = json!({ "p": profile.0, "q": profile.1, "valid": encoding::is_valid(&l), "good": encoding::is_good(&l) });
    let r = encoding::repair(&l)?;
    let edges: Vec<(usize, usize)> = if directed {
        r.encoding.to_digraph()?.sorted_arcs()
    } else {
        r.encoding.to_graph()?.sorted_edges()
    };
    let log: Vec<Value> = r.log.iter().map(|(ph, t)| json!({ "phase": ph, "tuple": t })).collect();
    let mut text = format!("switches: {}\n", r.log.len());
    for (ph, t) in &r.log {
        text.push_str(&format!("# {ph:?} {t:?}\n"));
    }
    text.push_str(&edges_text(l.n(), &edges));
    let doc = json!({
        "directed": directed,
        "n": l.n(),
        "before": before,
        "validation": validation,
        "switches": r.log.len(),
        "log": log,
        "edges": edges,
    });
    Ok(Outcome::ok(doc, text))
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Realize { .. } => "realize",
        Command::Sample { .. } => "sample",
        Command::Analyze { .. } => "analyze",
        Command::Irreducible { .. } => "irreducible",
        Command::Bound { .. } => "bound",
        Command::RepairEncoding { .. } => "repair-encoding",
    }
}

fn output_of(c: &Command) -> &Output {
    match c {
        Command::Validate { output, .. }
        | Command::Realize { output, .. }
        | Command::Sample { output, .. }
        | Command::Analyze { output, .. }
        | Command::Irreducible { output, .. }
        | Command::Bound { output, .. }
        | Command::RepairEncoding { output, .. } => output,
    }
}

fn dispatch(ctx: &mut Ctx, c: &Command) -> Result<Outcome> {
    match c {
        Command::Validate { input, .. } => cmd_validate(ctx, input),
        Command::Realize { input, .. } => cmd_realize(ctx, input),
        Command::Sample {
            input,
            steps,
            thin,
            count,
            seed,
            replicas,
            variant,
            ..
        } => cmd_sample(ctx, input, *steps, *thin, *count, *seed, *replicas, *variant),
        Command::Analyze {
            input,
            eps,
            cap,
            start,
            t_max,
            variant,
            ..
        } => cmd_analyze(ctx, input, *eps, *cap, *start, *t_max, *variant),
        Command::Irreducible { input, cap, .. } => cmd_irreducible(ctx, input, *cap),
        Command::Bound { input, eps, .. } => cmd_bound(ctx, input, *eps),
        Command::RepairEncoding {
            encoding,
            reference,
            directed,
            ..
        } => cmd_repair(ctx, encoding, reference.as_deref(), *directed),
    }
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize") + "\n"
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Runs the CLI with explicit streams. `args` includes the program name.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
            return code;
        }
    };
    let started = now_ms();
    let sub = subcommand_name(&cli.command);
    let output = output_of(&cli.command).clone();
    let mut ctx = Ctx {
        inputs: Vec::new(),
        stdout,
    };
    let result = dispatch(&mut ctx, &cli.command);
    let seed = match &cli.command {
        Command::Sample { seed, .. } => Some(*seed),
        _ => None,
    };
    let manifest = RunManifest {
        tool: "switchmix",
        version: crate::VERSION,
        schema_version: SCHEMA_VERSION,
        subcommand: sub.to_string(),
        args: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        seed: result.as_ref().ok().and_then(|o| o.seed).or(seed),
        inputs: ctx.inputs.clone(),
        started_unix_ms: started,
        finished_unix_ms: now_ms(),
    };
    let (mut doc, text, code) = match result {
        Ok(o) => (o.doc, o.text, o.code),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            let doc = json!({ "error": { "message": e.to_string(), "exit_code": e.exit_code() } });
            (doc, String::new(), e.exit_code())
        }
    };
    doc["schema_version"] = json!(SCHEMA_VERSION);
    doc["subcommand"] = json!(sub);
    let emitted = emit(ctx.stdout, stderr, &output, &mut doc, &text, &manifest, code);
    match emitted {
        Ok(()) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn emit(
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    output: &Output,
    doc: &mut Value,
    text: &str,
    manifest: &RunManifest,
    code: i32,
) -> Result<()> {
    if let Some(path) = &output.out {
        std::fs::write(path, pretty(doc)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mp = manifest_path(path);
        std::fs::write(&mp, pretty(manifest)).map_err(|e| Error::Io(format!("{}: {e}", mp.display())))?;
        if output.json {
            stdout.write_all(pretty(doc).as_bytes())?;
        }
        return Ok(());
    }
    if output.json {
        doc["manifest"] = serde_json::to_value(manifest).map_err(|e| Error::Io(e.to_string()))?;
        stdout.write_all(pretty(doc).as_bytes())?;
    } else {
        if code == 0 || !text.is_empty() {
            stdout.write_all(text.as_bytes())?;
        }
        writeln!(stderr, "{}", serde_json::to_string(manifest).map_err(|e| Error::Io(e.to_string()))?)?;
    }
    Ok(())
}

/// Runs the CLI on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
