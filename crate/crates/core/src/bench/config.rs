use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;

use super::report::natural_cmp;
use super::{BenchError, ConfigLabel, Dialect, Limits, Solver, SolverConfig};

/// Environment variable overriding the solver executable.
pub const SOLVER_ENV: &str = "HEULEARN_SOLVER";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeuristicFiles {
    pub hard: Option<PathBuf>,
    pub soft: Option<PathBuf>,
    pub human: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomConfig {
    pub label: String,
    #[serde(default)]
    pub files: Vec<PathBuf>,
    #[serde(default)]
    pub flags: Vec<String>,
}

fn default_solver() -> PathBuf {
    PathBuf::from("clingo")
}
fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
fn default_timeout() -> u64 {
    600
}
fn default_memory() -> u64 {
    20480
}
fn default_grace() -> u64 {
    5
}
fn yes() -> bool {
    true
}

/// Benchmark description read from TOML. Relative paths are resolved
/// against the directory of the config file.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default = "default_solver")]
    pub solver: PathBuf,
    #[serde(default)]
    pub dialect: Dialect,
    #[serde(default)]
    pub solver_flags: Vec<String>,
    pub encoding: PathBuf,
    pub corpus: PathBuf,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_timeout")]
    pub timeout_s: u64,
    #[serde(default = "default_memory")]
    pub memory_mib: u64,
    #[serde(default = "default_grace")]
    pub grace_s: u64,
    #[serde(default = "yes")]
    pub built_in: bool,
    #[serde(default)]
    pub heuristics: HeuristicFiles,
    #[serde(default)]
    pub custom: Vec<CustomConfig>,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl BenchConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self, BenchError> {
        let mut cfg: BenchConfig = toml::from_str(text).map_err(|e| BenchError::Config {
            path: base.to_path_buf(),
            reason: e.to_string(),
        })?;
        // A bare command name is looked up on PATH; anything with a
        // separator is a path.
        if cfg.solver.components().count() > 1 {
            resolve(base, &mut cfg.solver);
        }
        resolve(base, &mut cfg.encoding);
        resolve(base, &mut cfg.corpus);
        for p in [&mut cfg.heuristics.hard, &mut cfg.heuristics.soft, &mut cfg.heuristics.human]
            .into_iter()
            .flatten()
        {
            resolve(base, p);
        }
        for c in &mut cfg.custom {
            for f in &mut c.files {
                resolve(base, f);
            }
        }
        if let Some(s) = std::env::var_os(SOLVER_ENV).filter(|s| !s.is_empty()) {
            cfg.solver = PathBuf::from(s);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = fs::read_to_string(path).map_err(|e| BenchError::Config {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).map_err(|e| match e {
            BenchError::Config { reason, .. } => BenchError::Config {
                path: path.to_path_buf(),
                reason,
            },
            e => e,
        })
    }

    pub fn solver(&self) -> Solver {
        Solver {
            executable: self.solver.clone(),
            flags: self.solver_flags.clone(),
            dialect: self.dialect,
        }
    }

    pub fn limits(&self) -> Limits {
        Limits {
            time: Duration::from_secs(self.timeout_s),
            memory_bytes: self.memory_mib * 1024 * 1024,
            grace: Duration::from_secs(self.grace_s),
        }
    }

    /// Plain first, then whichever of the learned, built-in and human-made
    /// configurations are set up, then custom ones.
    pub fn configurations(&self) -> Result<Vec<SolverConfig>, BenchError> {
        let mut out = vec![SolverConfig::plain()];
        if let Some(h) = &self.heuristics.hard {
            out.push(SolverConfig::learned_hard(h));
        }
        if let Some(h) = &self.heuristics.soft {
            out.push(SolverConfig::learned_soft(h));
        }
        if self.built_in {
            out.push(SolverConfig::built_in());
        }
        if let Some(h) = &self.heuristics.human {
            out.push(SolverConfig::human_made(h));
        }
        for c in &self.custom {
            let label = ConfigLabel::Custom(c.label.clone());
            if c.label.is_empty() || out.iter().any(|o| o.label.to_string() == c.label) {
                return Err(BenchError::Config {
                    path: PathBuf::new(),
                    reason: format!("duplicate or empty configuration label `{}`", c.label),
                });
            }
            out.push(SolverConfig {
                label,
                files: c.files.clone(),
                flags: c.flags.clone(),
            });
        }
        Ok(out)
    }

    /// `.lp` and `.asp` files of the corpus directory in natural order.
    pub fn instances(&self) -> Result<Vec<PathBuf>, BenchError> {
        if !self.corpus.is_dir() {
            return Err(BenchError::MissingFile {
                what: "corpus directory",
                path: self.corpus.clone(),
            });
        }
        let mut out: Vec<PathBuf> = fs::read_dir(&self.corpus)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "lp" || x == "asp"))
            .collect();
        out.sort_by(|a, b| natural_cmp(&a.to_string_lossy(), &b.to_string_lossy()));
        Ok(out)
    }
}
