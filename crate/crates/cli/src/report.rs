use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NoSolution,
    Invalid,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NoSolution => 2,
            Status::Invalid | Status::Error => 1,
        }
    }
}

/// The single JSON object printed on stdout at the end of every run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `sha256:<hex>` digest of every input file, keyed by its role.
    pub inputs: BTreeMap<String, String>,
    pub params: Map<String, Value>,
    pub result: Value,
    pub steps: BTreeMap<String, u64>,
    /// Verdicts recomputed from `result`, never taken from the solver.
    pub verification: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            status: Status::Ok,
            reason: None,
            inputs: BTreeMap::new(),
            params: Map::new(),
            result: Value::Null,
            steps: BTreeMap::new(),
            verification: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn step(&mut self, key: &str, count: usize) {
        self.steps.insert(key.to_string(), count as u64);
    }

    pub fn input(&mut self, role: &str, bytes: &[u8]) {
        self.inputs.insert(role.to_string(), digest(bytes));
    }

    pub fn no_solution(&mut self, reason: impl Into<String>) {
        self.status = Status::NoSolution;
        self.reason = Some(reason.into());
    }

    /// Records a recomputed verdict; a failed one turns the run into an
    /// internal error so it can never exit 0.
    pub fn verdict(&mut self, name: &str, holds: bool) {
        self.verification.insert(name.to_string(), holds);
        if !holds && self.status == Status::Ok {
            self.status = Status::Error;
            self.reason = Some(format!("internal error: re-verification failed ({name})"));
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}
