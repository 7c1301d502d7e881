//! Run manifests written next to CLI artifacts.

use serde::Serialize;

/// Everything needed to reproduce a run's files byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub subcommand: String,
    pub tool_version: &'static str,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    /// Every file the run wrote, in write order.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub const SCHEMA: &'static str = "manifest-v1";

    pub fn new(subcommand: impl Into<String>, config: serde_json::Value) -> Self {
        RunManifest {
            schema: Self::SCHEMA,
            subcommand: subcommand.into(),
            tool_version: env!("CARGO_PKG_VERSION"),
            config,
            seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_output(&mut self, path: impl Into<String>) {
        self.outputs.push(path.into());
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lists_outputs() {
        let mut m = RunManifest::new("witness", serde_json::json!({"degree": 5}));
        m.seeds.push(42);
        m.record_output("report.json");
        let j = m.to_json().unwrap();
        assert!(j.contains("\"manifest-v1\"") && j.contains("report.json"));
        assert_eq!(j, m.clone().to_json().unwrap());
    }
}
