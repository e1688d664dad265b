use std::fs;
use std::io::Read;
use std::os::unix::process::{CommandExt, ExitStatusExt};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::report::natural_cmp;
use super::{parse_solver_output, BenchConfig, BenchError, Dialect, RunResult, RunStatus, SolverConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solver {
    pub executable: PathBuf,
    /// Passed before every configuration's own flags.
    pub flags: Vec<String>,
    pub dialect: Dialect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub time: Duration,
    pub memory_bytes: u64,
    /// Time between SIGTERM and SIGKILL.
    pub grace: Duration,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            time: Duration::from_secs(600),
            memory_bytes: 20 * 1024 * 1024 * 1024,
            grace: Duration::from_secs(5),
        }
    }
}

const POLL: Duration = Duration::from_millis(20);

fn require(what: &'static str, path: &Path) -> Result<(), BenchError> {
    if path.exists() {
        Ok(())
    } else {
        Err(BenchError::MissingFile {
            what,
            path: path.to_path_buf(),
        })
    }
}

fn resident_bytes(pid: u32) -> Option<u64> {
    let status = fs::read_to_string(format!("/proc/{pid}/status")).ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

fn signal_group(child: &Child, sig: libc::c_int) {
    // The child leads its own process group, so this reaches its helpers too.
    unsafe {
        libc::kill(-(child.id() as libc::pid_t), sig);
    }
}

fn drain<R: Read + Send + 'static>(r: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = r {
            let _ = r.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn instance_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Run the solver on `encoding`, `instance` and the configuration's files
/// under wall-clock and resident-memory limits. A breached limit terminates
/// the whole process group; the last value reported until then is kept.
pub fn run_config(
    solver: &Solver,
    encoding: &Path,
    config: &SolverConfig,
    instance: &Path,
    limits: &Limits,
) -> Result<RunResult, BenchError> {
    require("encoding", encoding)?;
    require("instance", instance)?;
    for f in &config.files {
        require("heuristics file", f)?;
    }

    let start = Instant::now();
    let mut child = Command::new(&solver.executable)
        .args(&solver.flags)
        .args(&config.flags)
        .arg(encoding)
        .arg(instance)
        .args(&config.files)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
        .map_err(|source| BenchError::Launch {
            solver: solver.executable.display().to_string(),
            source,
        })?;
    let stdout = drain(child.stdout.take());
    let stderr = drain(child.stderr.take());

    let mut breach = None;
    let mut term_sent: Option<Instant> = None;
    let status = loop {
        if let Some(st) = child.try_wait()? {
            break st;
        }
        match term_sent {
            None => {
                if start.elapsed() >= limits.time {
                    breach = Some("time limit");
                } else if resident_bytes(child.id()).is_some_and(|b| b > limits.memory_bytes) {
                    breach = Some("memory limit");
                }
                if breach.is_some() {
                    signal_group(&child, libc::SIGTERM);
                    term_sent = Some(Instant::now());
                }
            }
            Some(t) if t.elapsed() >= limits.grace => {
                signal_group(&child, libc::SIGKILL);
                break child.wait()?;
            }
            Some(_) => {}
        }
        thread::sleep(POLL);
    };
    let wall_time = start.elapsed().as_secs_f64();
    let out = stdout.join().unwrap_or_default();
    let err = stderr.join().unwrap_or_default();

    let (mut run_status, mut value) = parse_solver_output(&out, solver.dialect);
    let exit = match (breach, status.code(), status.signal()) {
        (Some(why), _, _) => format!("terminated: {why}"),
        (None, Some(code), _) => format!("exit {code}"),
        (None, None, Some(sig)) => {
            run_status = RunStatus::Error;
            value = None;
            let tail = err.lines().rev().find(|l| !l.trim().is_empty()).unwrap_or("");
            format!("signal {sig}: {}", tail.trim())
        }
        (None, None, None) => "unknown exit".to_string(),
    };
    let exit = if run_status == RunStatus::Error && status.signal().is_none() {
        format!("{exit} (unsatisfiable)")
    } else {
        exit
    };
    Ok(RunResult {
        instance: instance_id(instance),
        label: config.label.clone(),
        status: run_status,
        value,
        wall_time,
        exit,
    })
}

/// Every configuration on every corpus instance in a pool of `workers`
/// threads. Results are ordered by instance (natural order), then by
/// configuration.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<RunResult>, BenchError> {
    let solver = cfg.solver();
    let configs = cfg.configurations()?;
    let limits = cfg.limits();
    let instances = cfg.instances()?;
    require("encoding", &cfg.encoding)?;
    for c in &configs {
        for f in &c.files {
            require("heuristics file", f)?;
        }
    }
    let jobs: Vec<(&PathBuf, &SolverConfig)> =
        instances.iter().flat_map(|i| configs.iter().map(move |c| (i, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| BenchError::Config {
            path: PathBuf::new(),
            reason: e.to_string(),
        })?;
    let mut results = pool.install(|| {
        jobs.par_iter()
            .map(|(i, c)| run_config(&solver, &cfg.encoding, c, i, &limits))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let rank = |r: &RunResult| configs.iter().position(|c| c.label == r.label);
    results.sort_by(|a, b| natural_cmp(&a.instance, &b.instance).then(rank(a).cmp(&rank(b))));
    Ok(results)
}
