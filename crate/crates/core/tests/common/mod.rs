#![allow(dead_code)]

use std::path::{Path, PathBuf};

use heulearn::asp_core::{parse_program, AtomSet, Program};
use heulearn::taskgen::{parse_answer_set, sanitize_id};

pub mod oracles;

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn program(rel: &str) -> Program {
    parse_program(&read(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub const HRP_INSTANCES: [&str; 4] = ["ec_1", "lt_1", "nr_1", "ss_1"];

pub type Instances = Vec<(String, Program)>;
pub type AnswerSets = Vec<(String, AtomSet)>;

/// Instances and answer sets of the HRP fixture, keyed by example id.
pub fn hrp_inputs() -> (Program, Instances, AnswerSets) {
    let enc = program("hrp/house.lp");
    let mut inst = Vec::new();
    let mut models = Vec::new();
    for stem in HRP_INSTANCES {
        let id = sanitize_id(stem);
        inst.push((id.clone(), program(&format!("hrp/{stem}.lp"))));
        models.push((id, parse_answer_set(&read(&format!("hrp/{stem}.model"))).unwrap()));
    }
    (enc, inst, models)
}
