//! Command-line front end. Every stage reads and writes files, so the
//! `pipeline` subcommand is the composition of the others.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::asp_core::{parse_program, ParseError, Program};
use crate::bench::{self, BenchConfig, BenchError};
use crate::heuremit::{self, AnnotationMode, HeuristicError};
use crate::learner::{self, ExternalLearner, Hypothesis, LearnError, Provenance};
use crate::taskgen::{self, sanitize_id, TaskError};

/// Environment variable overriding the external learner executable.
pub const LEARNER_ENV: &str = "HEULEARN_LEARNER";
const DEFAULT_LEARNER: &str = "FastLAS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Task {
        path: PathBuf,
        #[source]
        source: TaskError,
    },
    #[error(transparent)]
    TaskGen(#[from] TaskError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

#[derive(Debug, Parser)]
#[command(name = "heulearn", version, about = "Learn domain-specific heuristics for ASP solvers from solved instances")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// More log output on standard error (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a learning task from an encoding and solved instances.
    GenTask {
        #[command(flatten)]
        inputs: TaskInputs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Learn a hypothesis from a task file.
    Learn {
        #[arg(short, long)]
        task: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        learner: LearnerArgs,
    },
    /// Turn a hypothesis into #heuristic directives.
    Emit {
        #[arg(short = 'H', long)]
        hypothesis: PathBuf,
        /// Task the hypothesis was learned from; its types are stripped.
        #[arg(short, long)]
        task: Option<PathBuf>,
        /// hard, soft, or a custom annotation such as `3@2,sign`.
        #[arg(long, default_value = "hard")]
        mode: AnnotationMode,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run all solver configurations over a corpus.
    Bench {
        #[arg(short, long)]
        config: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        /// Directory for results.csv and results.txt.
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Render a results.csv as an aligned table.
    Report {
        #[arg(short, long)]
        results: PathBuf,
        /// Defaults to standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// gen-task, learn, emit (hard and soft) and optionally bench.
    Pipeline {
        #[command(flatten)]
        inputs: TaskInputs,
        #[command(flatten)]
        learner: LearnerArgs,
        /// Benchmark config; its learned heuristics are replaced by the
        /// freshly emitted files.
        #[arg(short = 'c', long)]
        bench_config: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct TaskInputs {
    #[arg(short, long)]
    encoding: PathBuf,
    #[arg(short, long = "instance", required = true, num_args = 1..)]
    instances: Vec<PathBuf>,
    /// Answer sets, in the same order as the instances.
    #[arg(short, long = "model", required = true, num_args = 1..)]
    models: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct LearnerArgs {
    /// Use an external learner instead of the embedded one. Without a value
    /// the command is taken from HEULEARN_LEARNER, else `FastLAS`.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    external: Option<String>,
    /// Extra flag for the external learner (repeatable); replaces the
    /// default `--force-safety`.
    #[arg(long = "learner-flag", allow_hyphen_values = true)]
    learner_flags: Vec<String>,
    /// Maximum body length for the embedded learner.
    #[arg(long)]
    max_body: Option<usize>,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long)]
    timeout_s: Option<u64>,
    #[arg(long)]
    memory_mib: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn read_program(path: &Path) -> Result<Program, CliError> {
    parse_program(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn stem_id(path: &Path) -> String {
    sanitize_id(&path.file_stem().unwrap_or_default().to_string_lossy())
}

fn gen_task(inputs: &TaskInputs, output: &Path) -> Result<taskgen::LearningTask, CliError> {
    let encoding = read_program(&inputs.encoding)?;
    let mut instances = Vec::new();
    for p in &inputs.instances {
        instances.push((stem_id(p), read_program(p)?));
    }
    let mut models = Vec::new();
    for p in &inputs.models {
        let atoms = taskgen::parse_answer_set(&read(p)?).map_err(|source| CliError::Task {
            path: p.clone(),
            source,
        })?;
        models.push((stem_id(p), atoms));
    }
    let (task, text, diagnostics) = taskgen::generate_task(&encoding, &instances, &models)?;
    for d in &diagnostics {
        eprintln!("{d}");
    }
    write(output, &text)?;
    Ok(task)
}

fn learn(task_path: &Path, output: &Path, args: &LearnerArgs) -> Result<Hypothesis, CliError> {
    let text = read(task_path)?;
    let task = taskgen::parse_task(&text).map_err(|source| CliError::Task {
        path: task_path.to_path_buf(),
        source,
    })?;
    let hypothesis = match &args.external {
        None => {
            let (h, report) = learner::search_hypothesis(&task, args.max_body)?;
            for id in report.uncovered() {
                eprintln!("warning: example `{id}` is not covered");
            }
            h
        }
        Some(cmd) => {
            let program = Some(cmd.clone())
                .filter(|c| !c.is_empty())
                .or_else(|| std::env::var(LEARNER_ENV).ok().filter(|c| !c.is_empty()))
                .unwrap_or_else(|| DEFAULT_LEARNER.to_string());
            let mut ext = ExternalLearner::new(program);
            if !args.learner_flags.is_empty() {
                ext.flags = args.learner_flags.clone();
            }
            learner::run_external_learner(task_path, &ext)?
        }
    };
    if hypothesis.rules.is_empty() {
        eprintln!("warning: the learned hypothesis is empty");
    }
    write(output, &hypothesis.to_string())?;
    Ok(hypothesis)
}

fn emit(hyp_path: &Path, task_path: Option<&Path>, mode: AnnotationMode, output: &Path) -> Result<(), CliError> {
    let hypothesis = Hypothesis::parse(&read(hyp_path)?, Provenance::External)?;
    let types = match task_path {
        Some(t) => taskgen::parse_task(&read(t)?)
            .map_err(|source| CliError::Task {
                path: t.to_path_buf(),
                source,
            })?
            .type_names(),
        None => hypothesis
            .rules
            .iter()
            .flat_map(|r| r.literals().map(|l| l.atom.predicate.clone()))
            .filter(|p| heuremit::is_projection_type(p))
            .collect(),
    };
    let cleaned = heuremit::postprocess(&hypothesis, &types)?;
    write(output, &heuremit::emit_heuristics(&cleaned, mode)?)
}

fn apply_limits(cfg: &mut BenchConfig, limits: &LimitArgs) {
    if let Some(t) = limits.timeout_s {
        cfg.timeout_s = t;
    }
    if let Some(m) = limits.memory_mib {
        cfg.memory_mib = m;
    }
    if let Some(w) = limits.workers {
        cfg.workers = w;
    }
}

fn run_bench(cfg: &BenchConfig, out_dir: &Path) -> Result<(), CliError> {
    let records = bench::run_bench(cfg)?;
    for r in records.iter().filter(|r| r.status == bench::RunStatus::Error) {
        eprintln!("error: {} / {}: {}", r.instance, r.label, r.exit);
    }
    let meta = [
        ("timeout_s".to_string(), cfg.timeout_s.to_string()),
        ("memory_mib".to_string(), cfg.memory_mib.to_string()),
    ];
    let report = bench::report(&records, &meta);
    write(&out_dir.join("results.csv"), &report.csv)?;
    write(&out_dir.join("results.txt"), &report.table)?;
    print!("{}", report.table);
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenTask { inputs, output } => gen_task(&inputs, &output).map(drop),
        Command::Learn { task, output, learner } => learn(&task, &output, &learner).map(drop),
        Command::Emit {
            hypothesis,
            task,
            mode,
            output,
        } => emit(&hypothesis, task.as_deref(), mode, &output),
        Command::Bench { config, limits, output } => {
            let mut cfg = BenchConfig::load(&config)?;
            apply_limits(&mut cfg, &limits);
            run_bench(&cfg, &output)
        }
        Command::Report { results, output } => {
            let (records, meta) = bench::parse_results_csv(&read(&results)?)?;
            let report = bench::report(&records, &meta);
            match output {
                Some(p) => write(&p, &report.table),
                None => {
                    print!("{}", report.table);
                    Ok(())
                }
            }
        }
        Command::Pipeline {
            inputs,
            learner,
            bench_config,
            limits,
            output,
        } => {
            let task = output.join("task.las");
            let hyp = output.join("hypothesis.lp");
            let hard = output.join("heuristics_hard.heu");
            let soft = output.join("heuristics_soft.heu");
            gen_task(&inputs, &task)?;
            learn(&task, &hyp, &learner)?;
            emit(&hyp, Some(&task), AnnotationMode::Hard, &hard)?;
            emit(&hyp, Some(&task), AnnotationMode::Soft, &soft)?;
            if let Some(c) = bench_config {
                let mut cfg = BenchConfig::load(&c)?;
                apply_limits(&mut cfg, &limits);
                cfg.heuristics.hard = Some(hard);
                cfg.heuristics.soft = Some(soft);
                run_bench(&cfg, &output)?;
            }
            Ok(())
        }
    }
}

/// Parse `args` (program name first) and run the subcommand. Returns 0 on
/// success, 1 on a usage error and 2 when a stage fails.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format_timestamp(None)
        .try_init();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
