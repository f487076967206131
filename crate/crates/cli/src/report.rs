use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "command        {}\ninputs_digest  {}\n",
            self.command, self.inputs_digest
        );
        let mut rows = Vec::new();
        flatten("", &self.results, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            out.push_str(&format!("{:width$}  {}\n", k, v, width = width));
        }
        for a in &self.assertions {
            let verdict = if a.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{} {}", verdict, a.name));
            if !a.detail.is_empty() {
                out.push_str(&format!(": {}", a.detail));
            }
            out.push('\n');
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{}.{}", prefix, k)
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, rows);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Accumulates inputs and assertions for a single invocation.
pub struct Builder {
    command: String,
    hasher: Sha256,
    assertions: Vec<Assertion>,
}

impl Builder {
    pub fn new(command: String) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Builder {
            command,
            hasher,
            assertions: Vec::new(),
        }
    }

    pub fn input(&mut self, bytes: &[u8]) {
        self.hasher.update([0u8]);
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn finish(self, results: Value) -> Report {
        Report {
            command: self.command,
            inputs_digest: hex::encode(self.hasher.finalize()),
            results,
            assertions: self.assertions,
        }
    }
}
