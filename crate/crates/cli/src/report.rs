use lmono::monotonicity::ZeroConstants;
use serde::Serialize;
use serde_json::Value;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Serialize)]
pub struct Report<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub timestamp: u64,
    pub command: &'a str,
    pub config: &'a C,
    pub cache_dir: String,
    pub constants: Option<ZeroConstants>,
    pub result: Value,
}

impl<'a, C: Serialize> Report<'a, C> {
    pub fn new(command: &'a str, config: &'a C, constants: Option<ZeroConstants>, result: Value) -> Self {
        Self {
            tool: "lmono",
            version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            command,
            config,
            cache_dir: String::new(),
            constants,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
