//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 verification failure or claim mismatch, 2 usage
//! error (including inputs outside the supported range).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use derange_core::constructions::build_clique_over;
use derange_core::enumeration::cycle_class_reports;
use derange_core::math::prime_power;
use derange_core::{
    build_independent_set, coset_coloring, deranged_cycle_types, factor_adjacent_transposition,
    grow_clique_heuristic, max_clique, max_independent_set, predict_eulerian, verify_clique,
    verify_independent_set, AdjacencyCheck, AdjacencyMode, CayleyGraph, Error, FieldElement,
    FieldSpec, Permutation, SearchBudget, SearchMode, SearchResult, Witness,
};
use serde::Serialize;
use serde_json::json;

use crate::cache;
use crate::clock::InstantClock;
use crate::formats::{
    big_to_json, write_cycle_type_csv, write_graph, write_json, CertificateJson, GraphFormat,
    SearchResultJson,
};
use crate::report;
use crate::verify::{verify_text, Outcome};

#[derive(Parser, Debug)]
#[command(name = "derange", version, about = "Generalized derangement graphs")]
pub struct Cli {
    /// Worker threads for certificate verification (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Extra diagnostics on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Nk {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Clone)]
pub struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 300.0)]
    pub budget_seconds: f64,
    #[arg(long, default_value_t = 100_000_000)]
    pub budget_nodes: u64,
    /// Stop at a heuristic lower bound instead of proving optimality.
    #[arg(long)]
    pub heuristic: bool,
    /// RNG seed for the heuristic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// D_k(n) and the cycle types that are k-derangements.
    Count {
        #[command(flatten)]
        nk: Nk,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Every cycle type of S_n with its class size.
    Types {
        #[command(flatten)]
        nk: Nk,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Export the edge list of Γ_{k,n}.
    Graph {
        #[command(flatten)]
        nk: Nk,
        #[arg(long, value_enum, default_value = "dimacs")]
        format: GraphFormat,
        #[command(flatten)]
        out: OutArg,
    },
    /// Connected components of Γ_{k,n}.
    Components {
        #[command(flatten)]
        nk: Nk,
    },
    /// Predicted versus computed Eulerian status.
    Eulerian {
        #[command(flatten)]
        nk: Nk,
    },
    /// Finite-field clique of size C(n,2) in Γ_{2,n}, n an odd prime power.
    CliqueConstruct {
        #[arg(long)]
        n: usize,
        /// Slope labels, one from each pair {x, -x}.
        #[arg(long, value_delimiter = ',')]
        t_labels: Option<Vec<u32>>,
        /// Modulus coefficients, constant term first, ending in 1.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        /// Field labels for positions 1..n of the base arrangement.
        #[arg(long, value_delimiter = ',')]
        base_labels: Option<Vec<u32>>,
        #[command(flatten)]
        out: OutArg,
    },
    /// The stabilizer of {1..k}, an independent set of size k!(n-k)!.
    IndependentSet {
        #[command(flatten)]
        nk: Nk,
        #[command(flatten)]
        out: OutArg,
    },
    /// Proper coloring by the image of {1..k}.
    Coloring {
        #[command(flatten)]
        nk: Nk,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check a certificate file ("-" for stdin).
    Verify {
        path: PathBuf,
        /// Test adjacency by scanning k-subsets of positions.
        #[arg(long)]
        scan: bool,
    },
    /// Maximum clique search.
    SearchClique {
        #[command(flatten)]
        nk: Nk,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Maximum independent set search.
    SearchIndependent {
        #[command(flatten)]
        nk: Nk,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write (h h+1) as a product of two k-derangements.
    FactorTransposition {
        #[command(flatten)]
        nk: Nk,
        #[arg(long)]
        h: usize,
    },
    /// Run the full small-case sweep and write report.csv, report.json and
    /// counts.csv.
    Report {
        #[arg(long, default_value = "report")]
        out: PathBuf,
    },
}

enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(core) => core.into(),
            Err(e) => Failure::Failed(format!("{e:#}")),
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Ctx<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    tty: bool,
    threads: usize,
    verbose: bool,
}

impl Ctx<'_> {
    /// Runs `body` against `out` or stdout.
    fn emit(
        &mut self,
        out: &OutArg,
        body: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>,
    ) -> Result<(), Failure> {
        match &out.out {
            Some(path) => {
                let mut buf = Vec::new();
                body(&mut buf)?;
                fs::write(path, buf)
                    .map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
                if self.verbose {
                    let _ = writeln!(self.stderr, "wrote {}", path.display());
                }
            }
            None => body(&mut *self.stdout)?,
        }
        Ok(())
    }

    fn human(&self, out: &OutArg) -> bool {
        self.tty && out.out.is_none()
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, tty: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = if tty {
                e.render().ansi().to_string()
            } else {
                e.render().to_string()
            };
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let threads = cli
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let mut ctx = Ctx {
        stdout,
        stderr,
        tty,
        threads,
        verbose: cli.verbose,
    };
    let result = dispatch(cli.command, &mut ctx);
    let _ = ctx.stdout.flush();
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(ctx.stderr, "error: {m}");
            2
        }
        Err(Failure::Failed(m)) => {
            let _ = writeln!(ctx.stderr, "error: {m}");
            1
        }
    }
}

fn positive(nk: Nk) -> Result<(), Failure> {
    if nk.n == 0 || nk.k == 0 {
        return Err(Failure::Usage("n and k must be at least 1".into()));
    }
    Ok(())
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> CmdResult {
    match cmd {
        Command::Count { nk, format, out } => count(ctx, nk, format, &out),
        Command::Types { nk, format, out } => types(ctx, nk, format, &out),
        Command::Graph { nk, format, out } => {
            positive(nk)?;
            let g = CayleyGraph::new(nk.k, nk.n, AdjacencyMode::Auto)?;
            g.edges()?;
            ctx.emit(&out, |w| write_graph(w, &g, format))?;
            Ok(0)
        }
        Command::Components { nk } => components(ctx, nk),
        Command::Eulerian { nk } => eulerian(ctx, nk),
        Command::CliqueConstruct {
            n,
            t_labels,
            modulus,
            base_labels,
            out,
        } => clique_construct(ctx, n, t_labels, modulus, base_labels, &out),
        Command::IndependentSet { nk, out } => {
            positive(nk)?;
            let cert = build_independent_set(nk.k, nk.n)?;
            if let Err(v) = verify_independent_set(&cert) {
                return Err(Failure::Failed(v.to_string()));
            }
            ctx.emit(&out, |w| Ok(write_json(w, &CertificateJson::from(&cert))?))?;
            Ok(0)
        }
        Command::Coloring { nk, out } => {
            positive(nk)?;
            let cert = coset_coloring(nk.k, nk.n)?;
            ctx.emit(&out, |w| Ok(write_json(w, &CertificateJson::from(&cert))?))?;
            Ok(0)
        }
        Command::Verify { path, scan } => verify(ctx, &path, scan),
        Command::SearchClique { nk, budget, out } => search(ctx, nk, &budget, &out, false),
        Command::SearchIndependent { nk, budget, out } => search(ctx, nk, &budget, &out, true),
        Command::FactorTransposition { nk, h } => factor(ctx, nk, h),
        Command::Report { out } => run_report(ctx, &out),
    }
}

fn count(ctx: &mut Ctx, nk: Nk, format: Option<TableFormat>, out: &OutArg) -> CmdResult {
    positive(nk)?;
    let Nk { n, k } = nk;
    let dir = cache::cache_dir_from_env();
    let d = cache::count(k, n, dir.as_deref());
    let types: Vec<String> = deranged_cycle_types(k, n)
        .iter()
        .map(|t| t.to_plus_string())
        .collect();
    let predicted = predict_eulerian(k, n).ok();
    if format.is_none() && ctx.human(out) {
        writeln!(ctx.stdout, "D_{k}({n}) = {d}")?;
        writeln!(
            ctx.stdout,
            "cycle types: {}",
            if types.is_empty() {
                "none".into()
            } else {
                types.join(", ")
            }
        )?;
        if let Some(p) = predicted {
            writeln!(
                ctx.stdout,
                "Eulerian (predicted): {}",
                if p { "yes" } else { "no" }
            )?;
        }
        return Ok(0);
    }
    match format.unwrap_or(TableFormat::Json) {
        TableFormat::Json => {
            let v = json!({
                "n": n,
                "k": k,
                "D": big_to_json(&d),
                "eulerian_predicted": predicted,
                "deranged_cycle_types": types,
            });
            ctx.emit(out, |w| Ok(write_json(w, &v)?))?;
        }
        TableFormat::Csv => {
            let rows: Vec<_> = cycle_class_reports(k, n)
                .into_iter()
                .filter(|r| r.is_derangement_type)
                .collect();
            ctx.emit(out, |w| write_cycle_type_csv(w, n, k, &rows))?;
        }
    }
    Ok(0)
}

fn types(ctx: &mut Ctx, nk: Nk, format: Option<TableFormat>, out: &OutArg) -> CmdResult {
    positive(nk)?;
    let Nk { n, k } = nk;
    if n > 30 {
        return Err(Failure::Usage(format!(
            "types lists every partition; n = {n} is above 30"
        )));
    }
    let rows = cycle_class_reports(k, n);
    if format.is_none() && ctx.human(out) {
        writeln!(
            ctx.stdout,
            "{:<24} {:>24}  k-derangement",
            "cycle type", "class size"
        )?;
        for r in &rows {
            writeln!(
                ctx.stdout,
                "{:<24} {:>24}  {}",
                r.cycle_type.to_string(),
                r.class_size.to_string(),
                if r.is_derangement_type { "yes" } else { "no" }
            )?;
        }
        return Ok(0);
    }
    match format.unwrap_or(TableFormat::Csv) {
        TableFormat::Csv => ctx.emit(out, |w| write_cycle_type_csv(w, n, k, &rows))?,
        TableFormat::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "cycle_type": r.cycle_type.parts(),
                        "class_size": big_to_json(&r.class_size),
                        "is_derangement_type": r.is_derangement_type,
                    })
                })
                .collect();
            ctx.emit(out, |w| {
                Ok(write_json(w, &json!({"n": n, "k": k, "types": v}))?)
            })?;
        }
    }
    Ok(0)
}

fn components(ctx: &mut Ctx, nk: Nk) -> CmdResult {
    positive(nk)?;
    let g = CayleyGraph::new(nk.k, nk.n, AdjacencyMode::Auto)?;
    let c = g.connected_components();
    if ctx.tty {
        writeln!(
            ctx.stdout,
            "Γ_{{{},{}}}: {} component(s)",
            nk.k,
            nk.n,
            c.count()
        )?;
        for (rep, size) in c.representatives.iter().zip(&c.sizes) {
            let p = derange_core::unrank(*rep, nk.n)?;
            writeln!(ctx.stdout, "  {size} vertices, containing {p}")?;
        }
    } else {
        let reps: Vec<Vec<usize>> = c
            .representatives
            .iter()
            .map(|r| derange_core::unrank(*r, nk.n).map(|p| p.one_line()))
            .collect::<Result<_, _>>()?;
        write_json(
            ctx.stdout,
            &json!({"n": nk.n, "k": nk.k, "components": c.count(), "sizes": c.sizes, "representatives": reps}),
        )?;
    }
    Ok(0)
}

fn eulerian(ctx: &mut Ctx, nk: Nk) -> CmdResult {
    positive(nk)?;
    let g = CayleyGraph::new(nk.k, nk.n, AdjacencyMode::Auto)?;
    let computed = g.is_eulerian();
    let predicted = predict_eulerian(nk.k, nk.n).ok();
    let agree = predicted.is_none_or(|p| p == computed);
    if ctx.tty {
        let show = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            ctx.stdout,
            "Γ_{{{},{}}}: degree {}, predicted {}, computed {}",
            nk.k,
            nk.n,
            g.degree(),
            predicted.map_or("n/a", show),
            show(computed)
        )?;
    } else {
        write_json(
            ctx.stdout,
            &json!({"n": nk.n, "k": nk.k, "degree": g.degree(), "predicted": predicted, "computed": computed}),
        )?;
    }
    if !agree {
        writeln!(ctx.stderr, "prediction and computation disagree")?;
    }
    Ok(if agree { 0 } else { 1 })
}

fn labels(spec: &FieldSpec, labels: &[u32]) -> Result<Vec<FieldElement>, Failure> {
    Ok(labels
        .iter()
        .map(|&l| spec.element(l))
        .collect::<Result<_, _>>()?)
}

fn clique_construct(
    ctx: &mut Ctx,
    n: usize,
    t_labels: Option<Vec<u32>>,
    modulus: Option<Vec<u32>>,
    base_labels: Option<Vec<u32>>,
    out: &OutArg,
) -> CmdResult {
    let Some((p, deg)) = prime_power(n as u64) else {
        return Err(Failure::Usage(format!("n = {n} is not a prime power")));
    };
    if p == 2 {
        return Err(Error::CharacteristicTwo.into());
    }
    let spec = match modulus {
        Some(m) => {
            let spec = FieldSpec::with_modulus(p as u32, m)?;
            if spec.order() as usize != n {
                return Err(Failure::Usage(format!(
                    "modulus has degree {} but n = {n} needs degree {deg}",
                    spec.deg()
                )));
            }
            spec
        }
        None => FieldSpec::new(p as u32, deg)?,
    };
    let t = t_labels.map(|l| labels(&spec, &l)).transpose()?;
    let base = match base_labels {
        Some(l) => labels(&spec, &l)?,
        None => spec.elements(),
    };
    let cert = build_clique_over(&spec, t.as_deref(), &base)?;
    if let Err(v) = verify_clique(&cert) {
        return Err(Failure::Failed(format!(
            "constructed clique failed verification: {v}"
        )));
    }
    if ctx.verbose {
        writeln!(
            ctx.stderr,
            "GF({n}) modulus {:?}, {} members",
            spec.modulus(),
            cert.members.len()
        )?;
    }
    ctx.emit(out, |w| Ok(write_json(w, &CertificateJson::from(&cert))?))?;
    Ok(0)
}

fn verify(ctx: &mut Ctx, path: &Path, scan: bool) -> CmdResult {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    let check = if scan {
        AdjacencyCheck::PositionScan
    } else {
        AdjacencyCheck::CycleType
    };
    let outcome = verify_text(&text, ctx.threads, check);
    match &outcome {
        Outcome::Valid { summary } => writeln!(ctx.stdout, "valid: {summary}")?,
        Outcome::Invalid(v) => writeln!(ctx.stderr, "invalid: {v}")?,
        Outcome::Malformed(m) => writeln!(ctx.stderr, "malformed: {m}")?,
    }
    Ok(outcome.exit_code())
}

fn budget_of(args: &BudgetArgs) -> SearchBudget {
    SearchBudget {
        max_nodes: args.budget_nodes,
        max_seconds: args.budget_seconds,
        mode: if args.heuristic {
            SearchMode::LowerBoundOnly
        } else {
            SearchMode::Exact
        },
    }
}

fn search(ctx: &mut Ctx, nk: Nk, args: &BudgetArgs, out: &OutArg, independent: bool) -> CmdResult {
    positive(nk)?;
    let g = CayleyGraph::new(nk.k, nk.n, AdjacencyMode::Auto)?;
    let budget = budget_of(args);
    let clock = InstantClock::start();
    let result = if independent {
        max_independent_set(&g, budget, &clock)?
    } else if args.heuristic {
        let seed = args
            .seed
            .unwrap_or(derange_core::search::DEFAULT_HEURISTIC_SEED);
        let cert = grow_clique_heuristic(&g, &[], budget, &clock, seed)?;
        let nodes = match &cert.provenance {
            derange_core::Provenance::Search { nodes_explored, .. } => *nodes_explored,
            _ => 0,
        };
        SearchResult {
            best_size: cert.members.len(),
            witness: Witness::Clique(cert),
            proven_optimal: false,
            nodes_explored: nodes,
        }
    } else {
        max_clique(&g, budget, &clock)?
    };
    let check = match &result.witness {
        Witness::Clique(c) => verify_clique(c).map_err(|v| v.to_string()),
        Witness::IndependentSet(c) => verify_independent_set(c).map_err(|v| v.to_string()),
    };
    if let Err(v) = check {
        return Err(Failure::Failed(format!(
            "search witness failed verification: {v}"
        )));
    }
    if ctx.verbose {
        writeln!(
            ctx.stderr,
            "{} nodes in {:.3} s",
            result.nodes_explored,
            derange_core::Clock::elapsed_seconds(&clock)
        )?;
    }
    if ctx.human(out) {
        writeln!(
            ctx.stdout,
            "best size {} ({}), {} nodes",
            result.best_size,
            if result.proven_optimal {
                "proven optimal"
            } else {
                "lower bound"
            },
            result.nodes_explored
        )?;
        return Ok(0);
    }
    ctx.emit(out, |w| {
        Ok(write_json(w, &SearchResultJson::from(&result))?)
    })?;
    Ok(0)
}

#[derive(Serialize)]
struct FactorJson {
    n: usize,
    k: usize,
    h: usize,
    case: &'static str,
    first: Vec<usize>,
    second: Vec<usize>,
    first_cycles: String,
    second_cycles: String,
}

fn factor(ctx: &mut Ctx, nk: Nk, h: usize) -> CmdResult {
    positive(nk)?;
    let f = factor_adjacent_transposition(nk.n, nk.k, h)?;
    let target = Permutation::transposition(nk.n, h, h + 1)?;
    let ok = f.first.is_k_derangement(nk.k)
        && f.second.is_k_derangement(nk.k)
        && f.first.compose(&f.second)? == target;
    if ctx.tty {
        writeln!(ctx.stdout, "{target} = {} · {}", f.first, f.second)?;
    } else {
        write_json(
            ctx.stdout,
            &FactorJson {
                n: nk.n,
                k: nk.k,
                h,
                case: match f.case {
                    derange_core::FactorCase::SquaredCycle => "squared_cycle",
                    derange_core::FactorCase::InverseCycle => "inverse_cycle",
                },
                first: f.first.one_line(),
                second: f.second.one_line(),
                first_cycles: f.first.to_string(),
                second_cycles: f.second.to_string(),
            },
        )?;
    }
    if !ok {
        writeln!(ctx.stderr, "factorization does not check out")?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn run_report(ctx: &mut Ctx, dir: &Path) -> CmdResult {
    let r = report::run()?;
    r.write_to(dir)?;
    let failures: Vec<_> = r.failures().collect();
    for f in &failures {
        writeln!(
            ctx.stderr,
            "mismatch: {} (n={:?}, k={:?}): expected {}, computed {}",
            f.claim, f.n, f.k, f.expected, f.computed
        )?;
    }
    if ctx.tty {
        writeln!(
            ctx.stdout,
            "{} rows, {} mismatches, written to {}",
            r.rows.len(),
            failures.len(),
            dir.display()
        )?;
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}
