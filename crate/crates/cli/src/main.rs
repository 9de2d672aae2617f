use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use homq_core::algorithms::{build_algorithm, dn_family, named_class, AlgorithmParams, CycleFamilySpec, Parity};
use homq_core::analysis::{
    component_count, core_with_guard, gamma, is_berge_acyclic, shortest_directed_cycle, DEFAULT_CORE_GUARD,
};
use homq_core::catalog::{enumerate_structures, random_structure, DEFAULT_CATALOG_GUARD};
use homq_core::datalog::{builtin_program, evaluate_with_state, parse_program, DatalogProgram, BUILTIN_PROGRAMS};
use homq_core::experiments::{run_experiment, ExperimentParams, Limits, ReportFormat, EXPERIMENT_IDS};
use homq_core::format::{encode, encode_compact, read_structure, write_structure};
use homq_core::hom::{nu2, HomSolver, DEFAULT_BUDGET};
use homq_core::oracle::{dfs_has_directed_cycle, oracle_hom_count_with_guard, DEFAULT_ORACLE_GUARD};
use homq_core::structure::{
    complete_pair, directed_cycle, directed_path, n_ary_cycle, scalar_multiple, Signature, Structure,
};
use homq_core::{Error, Semiring};

#[derive(Parser)]
#[command(name = "homq", version, about = "Homomorphism-count queries over finite relational structures")]
struct Cli {
    /// Lift all size guards.
    #[arg(long, global = true)]
    guard_override: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Count or decide homomorphisms between two structure files.
    #[command(subcommand)]
    Hom(HomCommand),
    /// Structural summary of a structure file.
    Analyze {
        file: PathBuf,
    },
    /// Run a registered query algorithm on an input structure.
    Run(RunArgs),
    /// Write generated structures.
    #[command(subcommand)]
    Gen(GenCommand),
    /// List isomorphism classes of structures of one size.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "R/2")]
        signature: String,
        /// Print only the number of classes.
        #[arg(long)]
        count: bool,
    },
    /// Evaluate or classify Datalog programs.
    #[command(subcommand)]
    Datalog(DatalogCommand),
    /// Run a reproducible experiment; exits non-zero unless every check passes.
    Experiment(ExperimentArgs),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum HomCommand {
    Count {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value = "count")]
        semiring: Semiring,
    },
    Exists {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algorithm: String,
    #[arg(long)]
    input: PathBuf,
    /// Print every query and its answer.
    #[arg(long)]
    trace: bool,
    #[arg(long, default_value = "all")]
    class: String,
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long)]
    search_cap: Option<usize>,
    /// Signature for algorithms that build their queries from one; defaults
    /// to the input's.
    #[arg(long)]
    signature: Option<String>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// The family 2^(n-m)·C_(2^m) for m of one parity, one file per member.
    Dn {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        parity: Parity,
        #[arg(long)]
        out: PathBuf,
    },
    /// The directed cycle C_len.
    Cycle {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The directed path with len edges.
    Path {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// m disjoint copies of C_len.
    CycleUnion {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The n-ary cycle C_d^arity.
    NaryCycle {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The two-element structure holding every tuple.
    CompletePair {
        #[arg(long, default_value = "R/2")]
        signature: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A random labeled structure (uses --seed).
    Random {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value = "R/2")]
        signature: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DatalogCommand {
    /// Prints whether the program derives its goal on the structure.
    Run {
        /// A program file or a built-in program name.
        #[arg(long)]
        program: String,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Prints the monadic and linear flags of a program.
    Check {
        #[arg(long)]
        program: String,
    },
    /// Lists the built-in programs.
    List,
}

#[derive(Args)]
struct ExperimentArgs {
    id: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d_max: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_m: Option<u64>,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    pool_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Counts homomorphisms by walking every map.
    Hom {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

/// Something that went wrong, or checks that did not pass.
enum Failure {
    Error(Error),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CmdResult = Result<(), Failure>;

struct Ctx {
    guard_override: bool,
    seed: u64,
    format: OutputFormat,
}

impl Ctx {
    fn budget(&self) -> u64 {
        if self.guard_override {
            u64::MAX
        } else {
            DEFAULT_BUDGET
        }
    }

    fn guard(&self, default: usize) -> usize {
        if self.guard_override {
            usize::MAX
        } else {
            default
        }
    }

    /// Prints `key: value` lines, or one JSON object.
    fn emit(&self, fields: Vec<(&str, Value)>) {
        match self.format {
            OutputFormat::Text => {
                for (k, v) in fields {
                    match v {
                        Value::String(s) => println!("{k}: {s}"),
                        other => println!("{k}: {other}"),
                    }
                }
            }
            OutputFormat::Machine => {
                let map: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                println!("{}", Value::Object(map));
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.guard_override {
        eprintln!("warning: size guards lifted; large inputs may take a very long time");
    }
    let ctx = Ctx {
        guard_override: cli.guard_override,
        seed: cli.seed,
        format: cli.format,
    };
    match dispatch(&ctx, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command) -> CmdResult {
    match command {
        Command::Hom(cmd) => hom(ctx, cmd),
        Command::Analyze { file } => analyze(ctx, &file),
        Command::Run(args) => run(ctx, args),
        Command::Gen(cmd) => gen(ctx, cmd),
        Command::Enumerate { size, signature, count } => enumerate(ctx, size, &signature, count),
        Command::Datalog(cmd) => datalog(ctx, cmd),
        Command::Experiment(args) => experiment(ctx, args),
        Command::Oracle(OracleCommand::Hom { from, to }) => {
            let (a, b) = (read_structure(&from)?, read_structure(&to)?);
            let guard = if ctx.guard_override { u64::MAX } else { DEFAULT_ORACLE_GUARD };
            let count = oracle_hom_count_with_guard(&a, &b, guard)?;
            ctx.emit(vec![("count", Value::String(count.to_string()))]);
            Ok(())
        }
    }
}

fn hom(ctx: &Ctx, cmd: HomCommand) -> CmdResult {
    let solver = HomSolver::new(ctx.budget());
    match cmd {
        HomCommand::Count { from, to, semiring } => {
            let (a, b) = (read_structure(&from)?, read_structure(&to)?);
            let value = solver.value(&a, &b, semiring)?;
            match ctx.format {
                OutputFormat::Text => println!("{value}"),
                OutputFormat::Machine => ctx.emit(vec![
                    ("semiring", Value::String(semiring.to_string())),
                    ("count", Value::String(value.to_string())),
                ]),
            }
        }
        HomCommand::Exists { from, to } => {
            let (a, b) = (read_structure(&from)?, read_structure(&to)?);
            let exists = solver.exists(&a, &b)?;
            match ctx.format {
                OutputFormat::Text => println!("{}", exists as u8),
                OutputFormat::Machine => ctx.emit(vec![("exists", Value::Bool(exists))]),
            }
        }
    }
    Ok(())
}

fn analyze(ctx: &Ctx, file: &Path) -> CmdResult {
    let s = read_structure(file)?;
    let mut fields = vec![
        ("size", json!(s.size())),
        ("signature", Value::String(s.signature().to_string())),
        ("facts", json!(s.fact_count())),
        ("components", json!(component_count(&s))),
        ("berge_acyclic", json!(is_berge_acyclic(&s))),
    ];
    if s.is_digraph() {
        let g = gamma(&s)?;
        fields.push(("gamma", json!(g)));
        fields.push(("nu2_gamma", Value::String(nu2(g).to_string())));
        fields.push(("has_directed_cycle", json!(dfs_has_directed_cycle(&s)?)));
        let shortest = shortest_directed_cycle(&s)?;
        fields.push(("shortest_cycle", shortest.map_or(Value::String("none".into()), |l| json!(l))));
    }
    match core_with_guard(&s, ctx.guard(DEFAULT_CORE_GUARD)) {
        Ok(core) => {
            fields.push(("core_size", json!(core.size())));
            fields.push(("hom_equiv_to_acyclic", json!(is_berge_acyclic(&core))));
        }
        Err(Error::GuardExceeded { limit, .. }) => {
            let skipped = Value::String(format!("skipped (size above {limit}; use --guard-override)"));
            fields.push(("core_size", skipped.clone()));
            fields.push(("hom_equiv_to_acyclic", skipped));
        }
        Err(e) => return Err(e.into()),
    }
    ctx.emit(fields);
    Ok(())
}

fn run(ctx: &Ctx, args: RunArgs) -> CmdResult {
    let input = read_structure(&args.input)?;
    let class = named_class(&args.class).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown class {:?}; known: {}",
            args.class,
            homq_core::algorithms::CLASS_NAMES.join(", ")
        ))
    })?;
    let signature = match &args.signature {
        Some(text) => text.parse::<Signature>()?,
        None => input.signature().clone(),
    };
    let defaults = AlgorithmParams::default();
    let params = AlgorithmParams {
        class,
        n: args.n,
        size_cap: args.size_cap.or(ctx.guard_override.then_some(usize::MAX)),
        search_cap: args.search_cap.unwrap_or(defaults.search_cap),
        signature,
    };
    let algorithm = build_algorithm(&args.algorithm, &params)?;
    let report = algorithm.run(&input)?;
    let answers: Vec<String> = report.transcript.answers().iter().map(ToString::to_string).collect();
    match ctx.format {
        OutputFormat::Text => {
            if args.trace {
                for (i, (q, a)) in report.queries.iter().zip(&answers).enumerate() {
                    println!("query {}: {} -> {a}", i + 1, q);
                }
            }
            println!("verdict: {}", report.verdict);
            println!("queries: {}", report.query_count());
            println!("transcript: [{}]", answers.join(","));
        }
        OutputFormat::Machine => {
            let mut out = json!({
                "algorithm": args.algorithm,
                "orientation": algorithm.orientation().to_string(),
                "semiring": algorithm.semiring().to_string(),
                "verdict": report.verdict.to_string(),
                "queries": report.query_count(),
                "transcript": answers,
            });
            if args.trace {
                out["trace"] = Value::Array(report.queries.iter().map(|q| Value::String(q.to_string())).collect());
            }
            println!("{out}");
        }
    }
    Ok(())
}

fn output(ctx: &Ctx, s: &Structure, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            write_structure(path, s)?;
            println!("{}", path.display());
        }
        None => match ctx.format {
            OutputFormat::Text => print!("{}", encode(s)),
            OutputFormat::Machine => println!("{}", encode_compact(s)),
        },
    }
    Ok(())
}

fn gen(ctx: &Ctx, cmd: GenCommand) -> CmdResult {
    match cmd {
        GenCommand::Dn { n, parity, out } => {
            fs::create_dir_all(&out).map_err(Error::Io)?;
            for (m, s) in dn_family(CycleFamilySpec { n, parity })? {
                let path = out.join(format!("dn-n{n}-m{m}.json"));
                write_structure(&path, &s)?;
                println!("{}", path.display());
            }
            Ok(())
        }
        GenCommand::Cycle { len, out } => output(ctx, &directed_cycle(len)?, out.as_deref()),
        GenCommand::Path { len, out } => output(ctx, &directed_path(len), out.as_deref()),
        GenCommand::CycleUnion { m, len, out } => {
            output(ctx, &scalar_multiple(m, &directed_cycle(len)?)?, out.as_deref())
        }
        GenCommand::NaryCycle { d, arity, out } => output(ctx, &n_ary_cycle(d, arity)?, out.as_deref()),
        GenCommand::CompletePair { signature, out } => {
            output(ctx, &complete_pair(&signature.parse()?), out.as_deref())
        }
        GenCommand::Random {
            size,
            density,
            signature,
            out,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidArgument(format!("density must be in [0, 1], got {density}")).into());
            }
            let mut rng = StdRng::seed_from_u64(ctx.seed);
            let s = random_structure(&mut rng, &signature.parse()?, size, density)?;
            output(ctx, &s, out.as_deref())
        }
    }
}

fn enumerate(ctx: &Ctx, size: usize, signature: &str, count_only: bool) -> CmdResult {
    let catalog = enumerate_structures(&signature.parse()?, size, ctx.guard(DEFAULT_CATALOG_GUARD))?;
    match ctx.format {
        OutputFormat::Text => {
            println!("classes: {}", catalog.len());
            if !count_only {
                for s in catalog.representatives() {
                    println!("{}", encode_compact(&s));
                }
            }
        }
        OutputFormat::Machine => {
            let mut out = json!({ "size": size, "classes": catalog.len() });
            if !count_only {
                let reps: Vec<Value> = catalog
                    .representatives()
                    .map(|s| serde_json::from_str(&encode_compact(&s)).expect("encoder emits JSON"))
                    .collect();
                out["representatives"] = Value::Array(reps);
            }
            println!("{out}");
        }
    }
    Ok(())
}

fn load_program(source: &str) -> Result<DatalogProgram, Error> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        parse_program(&text)
    } else {
        builtin_program(source)
    }
}

fn datalog(ctx: &Ctx, cmd: DatalogCommand) -> CmdResult {
    match cmd {
        DatalogCommand::Run { program, structure } => {
            let p = load_program(&program)?;
            let s = read_structure(&structure)?;
            let state = evaluate_with_state(&p, &s)?;
            match ctx.format {
                OutputFormat::Text => println!("{}", state.goal_derived()),
                OutputFormat::Machine => {
                    println!("{}", json!({ "derived": state.goal_derived(), "rounds": state.rounds }))
                }
            }
        }
        DatalogCommand::Check { program } => {
            let flags = load_program(&program)?.classify();
            ctx.emit(vec![("monadic", json!(flags.monadic)), ("linear", json!(flags.linear))]);
        }
        DatalogCommand::List => {
            for name in BUILTIN_PROGRAMS {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn experiment(ctx: &Ctx, args: ExperimentArgs) -> CmdResult {
    if !EXPERIMENT_IDS.contains(&args.id.as_str()) {
        return Err(Error::InvalidArgument(format!(
            "unknown experiment {:?}; known: {}",
            args.id,
            EXPERIMENT_IDS.join(", ")
        ))
        .into());
    }
    let params = ExperimentParams {
        n: args.n,
        k: args.k,
        d_max: args.d_max,
        max_vertices: args.max_vertices,
        max_m: args.max_m,
        max_n: args.max_n,
        pool_max: args.pool_max,
        samples: args.samples,
        seed: ctx.seed,
        limits: if ctx.guard_override { Limits::lifted() } else { Limits::default() },
    };
    let report = run_experiment(&args.id, &params)?;
    let format = match ctx.format {
        OutputFormat::Text => ReportFormat::Text,
        OutputFormat::Machine => ReportFormat::Machine,
    };
    print!("{}", report.render(format));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}
