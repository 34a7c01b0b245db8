use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

/// One report per command run. Keys in `values` are sorted, so the JSON text
/// is byte-deterministic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub status: Status,
    pub witnesses: Vec<Value>,
    pub values: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            status: Status::Pass,
            witnesses: Vec::new(),
            values: Map::new(),
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.values.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
        self
    }

    /// Records a witness and marks the report failed.
    pub fn fail(&mut self, witness: impl Serialize) -> &mut Self {
        self.status = Status::Fail;
        self.witnesses
            .push(serde_json::to_value(witness).expect("serializable"));
        self
    }

    pub fn error(command: &str, message: impl Serialize) -> Self {
        let mut r = Report::new(command);
        r.status = Status::Error;
        r.value("error", message);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}
