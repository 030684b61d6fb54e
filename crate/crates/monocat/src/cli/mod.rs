//! Command-line front end: JSON I/O for representations, morphisms and trees,
//! and the `check-mono`, `mimo`, `decompose`, `tree`, `catalog` and `reptype`
//! subcommands.
//!
//! Exit codes: 0 pass, 1 negative answer, 2 input error, 3 internal failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::catalog::{rep_type, verify_catalog, verify_d4_catalog, CatalogReport};
use crate::decomp::{decompose, LocalityCert};
use crate::error::Error;
use crate::mimo::mimo;
use crate::par::{set_threads, Exec};
use crate::quiver::{Quiver, Rep, RepMorphism};
use crate::valuated::{
    enumerate_irretractable_trees_with, is_irretractable, m_of_t, s_of_t, tree_hull, TreeJson, ValuatedTree,
};
use crate::zpn::{RingParams, ZpnMatrix};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "monocat", version, about = "Monomorphism categories over Z/(p^n)")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Seed for every randomized step; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Run every driver sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Progress on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl CliConfig {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test whether a representation lies in the monomorphism category.
    CheckMono {
        /// Representation JSON file, or `-` for stdin.
        input: PathBuf,
    },
    /// Minimal right approximation by a monic representation.
    Mimo {
        input: PathBuf,
        /// Write the approximating representation here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the projection morphism here instead of stdout.
        #[arg(long)]
        projection: Option<PathBuf>,
    },
    /// Krull–Schmidt decomposition with certificates.
    Decompose { input: PathBuf },
    /// Valuated trees.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Indecomposable catalogs.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Representation type of mono(Q, Z/(p^n)).
    Reptype {
        /// Shorthand (`a2`..`a9`, `d4`..`d9`, `e6`..`e8`) or a quiver JSON file.
        #[arg(long)]
        quiver: String,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args, Debug, Clone)]
pub struct TreeArg {
    /// Tree string such as `3(2)(10)`, or a tree JSON file (`-` for stdin).
    pub tree: String,
    /// Bound n; taken from the JSON when a file is given.
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum TreeCommand {
    /// The simply presented valuated group S(T).
    SOfT {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Search for a nontrivial retraction.
    Irretractable {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// The hull T_{n-1} and the embedding of T.
    Hull {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// The representation M_T.
    Realize {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Irretractable trees with values below n, one per line.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 7)]
        max_nodes: usize,
        /// Emit a JSON array of tree JSON objects.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Verify the sub(Z/(p^n)) catalog.
    Verify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify the D4 catalog over Z/(p^2).
    VerifyD4 {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Quiver as a shorthand string or an explicit arrow list.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverJson {
    Shorthand(String),
    Explicit(ExplicitQuiver),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitQuiver {
    pub vertices: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl QuiverJson {
    pub fn to_quiver(&self) -> crate::Result<Quiver> {
        match self {
            QuiverJson::Shorthand(s) => Quiver::shorthand(s),
            QuiverJson::Explicit(e) => Quiver::new(e.vertices, e.arrows.clone()),
        }
    }

    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverJson::Explicit(ExplicitQuiver {
            vertices: q.vertex_count(),
            arrows: q.arrows().to_vec(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub arrow: usize,
    pub entries: Vec<Vec<i64>>,
}

/// `{schema, p, n, quiver, modules, maps}`; matrices have one row per target summand.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub p: u64,
    pub n: u32,
    pub quiver: QuiverJson,
    pub modules: Vec<Vec<u32>>,
    pub maps: Vec<MapJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexMapJson {
    pub vertex: usize,
    pub entries: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub maps: Vec<VertexMapJson>,
}

fn schema_one() -> u32 {
    1
}

impl RepJson {
    pub fn from_rep(m: &Rep) -> Self {
        RepJson {
            schema: 1,
            p: m.params().p() as u64,
            n: m.params().n(),
            quiver: QuiverJson::from_quiver(m.quiver()),
            modules: m.modules().iter().map(|p| p.parts().to_vec()).collect(),
            maps: m
                .maps()
                .iter()
                .enumerate()
                .map(|(k, h)| MapJson {
                    arrow: k,
                    entries: h.to_rows(),
                })
                .collect(),
        }
    }

    /// Builds the representation; vertex modules may list their parts in any order.
    pub fn to_rep(&self) -> crate::Result<Rep> {
        if self.schema != 1 {
            return Err(Error::Input(format!("unsupported schema {}", self.schema)));
        }
        let r = RingParams::new(self.p, self.n)?;
        let q = self.quiver.to_quiver()?;
        if self.modules.len() != q.vertex_count() {
            return Err(Error::Input("one module per vertex expected".into()));
        }
        if self.modules.iter().flatten().any(|&a| a > self.n) {
            return Err(Error::Input(format!("part exceeds n = {}", self.n)));
        }
        let mut maps = vec![None; q.arrows().len()];
        for m in &self.maps {
            let &(s, t) = q
                .arrows()
                .get(m.arrow)
                .ok_or_else(|| Error::Input(format!("no arrow {}", m.arrow)))?;
            if maps[m.arrow].is_some() {
                return Err(Error::Input(format!("arrow {} given twice", m.arrow)));
            }
            let (src, tgt) = (self.modules[s].clone(), self.modules[t].clone());
            // an empty target has no rows, so the entries carry no column count
            let rows = if tgt.is_empty() { Vec::new() } else { m.entries.clone() };
            maps[m.arrow] = Some(ZpnMatrix::new(r, src, tgt, &rows)?);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(k, h)| h.ok_or_else(|| Error::Input(format!("missing map for arrow {k}"))))
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(Rep::from_layout(q, r, self.modules.clone(), maps)?.0)
    }
}

impl MorphismJson {
    pub fn from_morphism(f: &RepMorphism) -> Self {
        MorphismJson {
            schema: 1,
            maps: f
                .maps
                .iter()
                .enumerate()
                .map(|(v, h)| VertexMapJson {
                    vertex: v,
                    entries: h.to_rows(),
                })
                .collect(),
        }
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn input_err(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_err(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| input_err(format!("malformed {what} JSON: {e}")))
}

fn read_rep(path: &Path) -> Result<Rep, CliError> {
    Ok(parse_json::<RepJson>(&read_source(path)?, "representation")?.to_rep()?)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn read_tree(arg: &TreeArg) -> Result<(ValuatedTree, Option<u32>), CliError> {
    let looks_like_file = arg.tree == "-" || arg.tree.ends_with(".json");
    if looks_like_file {
        let j: TreeJson = parse_json(&read_source(Path::new(&arg.tree))?, "tree")?;
        let (t, n) = ValuatedTree::from_json(&j)?;
        if let Some(m) = arg.n.filter(|&m| m != n) {
            return Err(input_err(format!("--n {m} disagrees with the tree file (n = {n})")));
        }
        Ok((t, Some(n)))
    } else {
        let t = ValuatedTree::parse(&arg.tree)?;
        if let Some(n) = arg.n {
            t.check_bound(n)?;
        }
        Ok((t, arg.n))
    }
}

fn need_n(n: Option<u32>) -> Result<u32, CliError> {
    n.ok_or_else(|| input_err("--n is required for a tree string"))
}

/// Output of a command: text for stdout and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn pass(stdout: String) -> Outcome {
    Outcome { stdout, code: EXIT_PASS }
}

#[derive(Serialize)]
struct MonoReport {
    schema: u32,
    seed: u64,
    mono: bool,
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct WitnessJson {
    vertex: usize,
    element: Vec<i64>,
}

#[derive(Serialize)]
struct MimoReport {
    schema: u32,
    seed: u64,
    mimo: RepJson,
    projection: MorphismJson,
}

#[derive(Serialize)]
struct SummandJson {
    rep: RepJson,
    multiplicity: usize,
    cert: LocalityCert,
}

#[derive(Serialize)]
struct DecomposeReport {
    schema: u32,
    seed: u64,
    factors: usize,
    summands: Vec<SummandJson>,
}

#[derive(Serialize)]
struct SOfTReport {
    schema: u32,
    tree: String,
    p: u64,
    n: u32,
    ambient: Vec<u32>,
    /// Generators of `B(i)` for `i = 1..n-1`, in ambient coordinates.
    levels: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize)]
struct IrretractableReport {
    schema: u32,
    tree: String,
    irretractable: bool,
    witness: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct HullReport {
    schema: u32,
    tree: String,
    hull: TreeJson,
    hull_encoding: String,
    gamma: Vec<usize>,
}

#[derive(Serialize)]
struct RepTypeReport {
    schema: u32,
    quiver: QuiverJson,
    n: u32,
    finite: bool,
    note: Option<crate::catalog::TypeNote>,
}

fn render_report(rep: &CatalogReport, format: Format) -> Outcome {
    let stdout = match format {
        Format::Text => rep.to_text(),
        Format::Json => to_json(rep),
    };
    Outcome {
        stdout,
        code: if rep.pass { EXIT_PASS } else { EXIT_NEGATIVE },
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = &cli.config;
    if cfg.threads > 0 {
        set_threads(cfg.threads);
    }
    let exec = cfg.exec();
    match &cli.command {
        Command::CheckMono { input } => {
            let m = read_rep(input)?;
            let w = m.mono_witness();
            let report = MonoReport {
                schema: 1,
                seed: cfg.seed,
                mono: w.is_none(),
                witness: w.map(|w| WitnessJson {
                    vertex: w.vertex,
                    element: w.element,
                }),
            };
            let code = if report.mono { EXIT_PASS } else { EXIT_NEGATIVE };
            Ok(Outcome {
                stdout: to_json(&report),
                code,
            })
        }
        Command::Mimo { input, out, projection } => {
            let m = read_rep(input)?;
            let (x, f) = mimo(&m)?;
            let (xj, fj) = (RepJson::from_rep(&x), MorphismJson::from_morphism(&f));
            let mut stdout = String::new();
            if let Some(path) = out {
                write_file(path, &to_json(&xj))?;
            }
            if let Some(path) = projection {
                write_file(path, &to_json(&fj))?;
            }
            if out.is_none() || projection.is_none() {
                stdout = to_json(&MimoReport {
                    schema: 1,
                    seed: cfg.seed,
                    mimo: xj,
                    projection: fj,
                });
            }
            Ok(pass(stdout))
        }
        Command::Decompose { input } => {
            let m = read_rep(input)?;
            let cert = decompose(&m, cfg.seed)?;
            let report = DecomposeReport {
                schema: 1,
                seed: cfg.seed,
                factors: cert.pieces.len(),
                summands: cert
                    .summands
                    .iter()
                    .map(|s| SummandJson {
                        rep: RepJson::from_rep(&s.rep),
                        multiplicity: s.multiplicity,
                        cert: s.cert.clone(),
                    })
                    .collect(),
            };
            Ok(pass(to_json(&report)))
        }
        Command::Tree(tc) => tree_command(tc, cfg, exec),
        Command::Catalog(CatalogCommand::Verify { n, p, format }) => {
            Ok(render_report(&verify_catalog(*n, *p, exec, cfg.seed)?, *format))
        }
        Command::Catalog(CatalogCommand::VerifyD4 { p, format }) => {
            Ok(render_report(&verify_d4_catalog(*p, exec, cfg.seed)?, *format))
        }
        Command::Reptype { quiver, n } => {
            let qj = if quiver.ends_with(".json") || quiver == "-" {
                parse_json::<QuiverJson>(&read_source(Path::new(quiver))?, "quiver")?
            } else {
                QuiverJson::Shorthand(quiver.clone())
            };
            let q = qj.to_quiver()?;
            let v = rep_type(&q, *n)?;
            Ok(pass(to_json(&RepTypeReport {
                schema: 1,
                quiver: qj,
                n: *n,
                finite: v.finite,
                note: v.note,
            })))
        }
    }
}

fn tree_command(tc: &TreeCommand, cfg: &CliConfig, exec: Exec) -> Result<Outcome, CliError> {
    match tc {
        TreeCommand::SOfT { tree, p } => {
            let (t, n) = read_tree(tree)?;
            let n = need_n(n)?;
            let b = s_of_t(&t, RingParams::new(*p, n)?)?;
            Ok(pass(to_json(&SOfTReport {
                schema: 1,
                tree: t.encoding(),
                p: *p,
                n,
                ambient: b.ambient().parts().to_vec(),
                levels: (1..n).map(|i| b.level(i).gens()).collect(),
            })))
        }
        TreeCommand::Irretractable { tree } => {
            let (t, _) = read_tree(tree)?;
            let r = is_irretractable(&t);
            let code = if r.irretractable { EXIT_PASS } else { EXIT_NEGATIVE };
            Ok(Outcome {
                stdout: to_json(&IrretractableReport {
                    schema: 1,
                    tree: t.encoding(),
                    irretractable: r.irretractable,
                    witness: r.witness,
                }),
                code,
            })
        }
        TreeCommand::Hull { tree } => {
            let (t, n) = read_tree(tree)?;
            let n = need_n(n)?;
            let h = tree_hull(&t, n)?;
            Ok(pass(to_json(&HullReport {
                schema: 1,
                tree: t.encoding(),
                hull: h.tree.to_json(n),
                hull_encoding: h.tree.encoding(),
                gamma: h.gamma,
            })))
        }
        TreeCommand::Realize { tree, p } => {
            let (t, n) = read_tree(tree)?;
            let m = m_of_t(&t, RingParams::new(*p, need_n(n)?)?)?;
            Ok(pass(to_json(&RepJson::from_rep(&m))))
        }
        TreeCommand::Enumerate { n, max_nodes, json } => {
            if *n == 0 {
                return Err(input_err("--n must be at least 1"));
            }
            let verbose = cfg.verbose > 0;
            let progress = |done: usize, total: usize| {
                if verbose {
                    eprintln!("checked {done}/{total} candidates");
                }
            };
            let trees = enumerate_irretractable_trees_with(*n, *max_nodes, exec, &progress);
            let stdout = if *json {
                to_json(&trees.iter().map(|t| t.to_json(*n)).collect::<Vec<_>>())
            } else {
                trees.iter().map(|t| format!("{}\n", t.encoding())).collect()
            };
            Ok(pass(stdout))
        }
    }
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return EXIT_INTERNAL;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
