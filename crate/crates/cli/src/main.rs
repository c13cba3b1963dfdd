use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bmp_core::format::{emit_instance, emit_solution, parse_graph, parse_instance, parse_solution};
use bmp_core::generate::random_instance;
use bmp_core::lcs::build_metric;
use bmp_core::model::{border_length_masks, border_length_pairwise, tokens_of, validate_solution, Grid, Placement};
use bmp_core::oracle::bmp_exact;
use bmp_core::pbmp::pbmp_exact;
use bmp_core::pipeline::{ratio_report, solve_bmp_detailed, PipelineConfig, DEFAULT_SEED, DEFAULT_TRIALS};
use bmp_core::reductions::{
    build_hampath_instance, build_ipq, check_hampath_certificate, extract_scs, lift_1d_to_2d, scs_exact_dp, ScsInput,
};
use bmp_core::Error;

mod bench;
mod render;

const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Parser)]
#[command(name = "bmp", version, about = "Border minimization for microarray layouts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write a solution file.
    Solve(SolveArgs),
    /// Check a solution against its instance.
    Verify(VerifyArgs),
    /// Draw one frame per mask.
    Render {
        instance: PathBuf,
        solution: PathBuf,
        /// Also write an SVG picture of all masks.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the pairwise LCS distance matrix.
    Metric { instance: PathBuf },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Shortest common supersequence tools.
    #[command(subcommand)]
    Scs(ScsCommand),
    /// Run the fixed benchmark matrix and print a results table.
    Bench {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Pipeline,
    Exact,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "pipeline")]
    algo: Algo,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Solution file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report file; standard error when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// State budget of each exact search.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Keep probes in row-major order and only optimize the embedding (exact only).
    #[arg(long)]
    fixed: bool,
    /// Use the placement tree as the alignment guide too.
    #[arg(long)]
    shared_tree: bool,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct VerifyArgs {
    #[command(subcommand)]
    certificate: Option<VerifyCommand>,
    instance: Option<PathBuf>,
    solution: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Cost of the one-row layout induced by a vertex order.
    HampathCert {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated 1-based vertex order.
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Uniformly random probes.
    Random {
        /// Number of probes; a square count gives a square grid, otherwise one row.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        len: usize,
        /// Shortest probe length; defaults to `--len`.
        #[arg(long)]
        min_len: Option<usize>,
        /// One token per character.
        #[arg(long, default_value = "ACGT")]
        alphabet: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// The supersequence gadget for comma-separated binary strings.
    ScsIpq {
        #[arg(long, value_delimiter = ',')]
        strings: Vec<String>,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// The one-row Hamiltonian path gadget for an edge-list graph.
    Hampath {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Lift a one-row instance onto a square grid.
    Lift2d { instance: PathBuf },
}

#[derive(Subcommand)]
enum ScsCommand {
    /// Recover the shortest common supersequence from gadget optima.
    Extract {
        #[arg(long, value_delimiter = ',')]
        strings: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

/// Failure with its exit status.
enum Failure {
    Input(String),
    Budget(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) => Failure::Budget(e.to_string()),
            Error::Violation(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str, to_stderr: bool) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None if to_stderr => {
            eprint!("{text}");
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn with_path<T>(path: &Path, r: bmp_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn scs_input(strings: &[String]) -> Result<ScsInput, Failure> {
    Ok(ScsInput::new(strings.iter().map(|s| tokens_of(s)).collect())?)
}

fn solve(args: &SolveArgs) -> CmdResult {
    let instance = with_path(&args.instance, parse_instance(&read(&args.instance)?))?;
    let (solution, report) = match args.algo {
        Algo::Pipeline => {
            if args.fixed {
                return Err(Failure::Input("--fixed applies to --algo exact only".into()));
            }
            let config = PipelineConfig {
                seed: args.seed,
                trials: args.trials,
                shared_tree: args.shared_tree,
                ..PipelineConfig::default()
            };
            let run = solve_bmp_detailed(&instance, &config)?;
            let mut report = ratio_report(&instance, &run.solution, Some(&run), None)?;
            report.entries.insert(0, ("algo".into(), "pipeline".into()));
            (run.solution, report)
        }
        Algo::Exact => {
            let solution = if args.fixed {
                pbmp_exact(&instance, &Placement::row_major(instance.grid), args.budget)?
            } else {
                bmp_exact(&instance, args.budget)?
            };
            let mut report = ratio_report(&instance, &solution, None, (!args.fixed).then_some(solution.cost))?;
            report.entries.insert(0, ("algo".into(), "exact".into()));
            (solution, report)
        }
    };
    validate_solution(&instance, &solution).map_err(Error::from)?;
    write_or_print(args.out.as_deref(), &emit_solution(&solution), false)?;
    write_or_print(args.report.as_deref(), &report.to_text(), true)
}

fn verify(args: &VerifyArgs) -> CmdResult {
    if let Some(VerifyCommand::HampathCert { graph, order }) = &args.certificate {
        let g = with_path(graph, parse_graph(&read(graph)?))?;
        let cert = check_hampath_certificate(&g, order)?;
        println!("cost={}", cert.cost);
        println!("bound={}", cert.bound);
        println!("achieves_bound={}", cert.achieves_bound);
        return Ok(());
    }
    let (Some(ip), Some(sp)) = (&args.instance, &args.solution) else {
        return Err(Failure::Input("verify needs INSTANCE and SOLUTION".into()));
    };
    let instance = with_path(ip, parse_instance(&read(ip)?))?;
    let solution = with_path(sp, parse_solution(&read(sp)?))?;
    let solution = with_path(sp, solution.into_solution(instance.grid))?;
    validate_solution(&instance, &solution).map_err(|v| Failure::Verification(v.to_string()))?;
    let pairwise = border_length_pairwise(&solution.placement, &solution.schedule, instance.grid)?;
    let masks = border_length_masks(&solution.placement, &solution.schedule, instance.grid)?;
    println!("ok cost={} pairwise={pairwise} masks={masks}", solution.cost);
    Ok(())
}

fn render_cmd(instance: &Path, solution: &Path, svg: Option<&Path>) -> CmdResult {
    let inst = with_path(instance, parse_instance(&read(instance)?))?;
    let sol = with_path(solution, parse_solution(&read(solution)?))?;
    let sol = with_path(solution, sol.into_solution(inst.grid))?;
    validate_solution(&inst, &sol).map_err(|v| Failure::Verification(v.to_string()))?;
    write_or_print(None, &render::ascii(&inst, &sol)?, false)?;
    if let Some(path) = svg {
        write_or_print(Some(path), &render::svg(&inst, &sol)?, false)?;
    }
    Ok(())
}

fn metric(path: &Path) -> CmdResult {
    let instance = with_path(path, parse_instance(&read(path)?))?;
    let m = build_metric(&instance);
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(u64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    write_or_print(None, &out, false)
}

fn gen(cmd: &GenCommand) -> CmdResult {
    let instance = match cmd {
        GenCommand::Random {
            n,
            len,
            min_len,
            alphabet,
            seed,
        } => {
            let side = (*n as f64).sqrt().round() as usize;
            let grid = if side * side == *n { Grid::new(side, side)? } else { Grid::new(1, *n)? };
            random_instance(grid, &tokens_of(alphabet), min_len.unwrap_or(*len), *len, *seed)?
        }
        GenCommand::ScsIpq { strings, p, q } => build_ipq(&scs_input(strings)?, *p, *q)?.0,
        GenCommand::Hampath { graph } => {
            let g = with_path(graph, parse_graph(&read(graph)?))?;
            build_hampath_instance(&g)?
        }
        GenCommand::Lift2d { instance } => {
            let one_row = with_path(instance, parse_instance(&read(instance)?))?;
            lift_1d_to_2d(&one_row)?.instance
        }
    };
    write_or_print(None, &emit_instance(&instance), false)
}

fn scs(cmd: &ScsCommand) -> CmdResult {
    let ScsCommand::Extract { strings, budget } = cmd;
    let input = scs_input(strings)?;
    let found = extract_scs(&input, *budget)?;
    let dp = scs_exact_dp(&input.strings, *budget)?;
    let show = |w: &[bmp_core::Token]| w.iter().map(|t| t.as_str()).collect::<String>();
    println!("length={}", found.length);
    println!("witness={}", show(&found.witness));
    println!("dp_length={}", dp.length);
    println!("dp_witness={}", show(&dp.witness));
    if found.length != dp.length {
        return Err(Failure::Verification("gadget and direct lengths differ".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Verify(args) => verify(args),
        Command::Render { instance, solution, svg } => render_cmd(instance, solution, svg.as_deref()),
        Command::Metric { instance } => metric(instance),
        Command::Gen(cmd) => gen(cmd),
        Command::Scs(cmd) => scs(cmd),
        Command::Bench { seed, trials } => {
            let table = bench::run(*seed, *trials)?;
            write_or_print(None, &table, false)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(3)
        }
    }
}
