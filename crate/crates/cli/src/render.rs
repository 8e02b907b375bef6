//! Structured-output helpers.
//!
//! Structured documents are JSON with sorted keys and floats rounded to 12
//! significant digits before insertion, so parsing the emitted document and
//! re-rendering it is byte-identical.

use serde_json::{Map, Value};

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// A structured output document: command, inputs, results.
pub struct Document {
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    command: String,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Self {
            inputs: Map::new(),
            results: Map::new(),
            command: command.into(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<InputValue>) {
        self.inputs.insert(key.into(), value.into().0);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn render(&self) -> String {
        let doc = serde_json::json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "results": Value::Object(self.results.clone()),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("document serialises");
        text.push('\n');
        text
    }
}

pub struct InputValue(Value);

impl From<f64> for InputValue {
    fn from(x: f64) -> Self {
        InputValue(serde_json::json!(x))
    }
}

impl From<&str> for InputValue {
    fn from(s: &str) -> Self {
        InputValue(Value::String(s.into()))
    }
}

impl From<&String> for InputValue {
    fn from(s: &String) -> Self {
        InputValue(Value::String(s.clone()))
    }
}
