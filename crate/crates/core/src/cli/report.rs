// SPDX-License-Identifier: Apache-2.0

//! Structured run reports.

use serde::Serialize;
use serde_json::Value;

pub const REPORT_FORMAT: &str = "urysohn-report";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failure,
    BudgetExceeded,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 1,
            Status::BudgetExceeded => 2,
            Status::Error => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
}

/// Everything a command reports. Keys of `params` and `result` are
/// emitted in sorted order, so equal runs give equal bytes.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub version: u32,
    pub provenance: Provenance,
    pub status: Status,
    pub exit_code: i32,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, params: Value, seed: Option<u64>, status: Status, result: Value) -> Self {
        Report {
            format: REPORT_FORMAT,
            version: 1,
            provenance: Provenance {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                command: command.into(),
                params,
                seed,
            },
            status,
            exit_code: status.exit_code(),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}
