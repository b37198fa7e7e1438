use serde_json::{json, Map, Value};

/// Output of one command: echoed inputs, results, certificate, notes.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, Value)>,
    pub result: Vec<(String, Value)>,
    pub certificate: Vec<(String, Value)>,
    pub notes: Vec<String>,
    pub timing_ms: Option<f64>,
    /// Exit status when the command itself ran; `selftest` sets 1 on failure.
    pub exit_code: u8,
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(text_value).collect();
            let multiline = items
                .iter()
                .any(|i| i.is_object() || i.as_str().is_some_and(|s| s.contains(' ')));
            if items.iter().all(Value::is_array) {
                parts.iter().map(|p| format!("[{p}]")).collect::<Vec<_>>().join("; ")
            } else if multiline {
                parts.iter().map(|p| format!("\n  {p}")).collect()
            } else {
                parts.join(", ")
            }
        }
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", text_value(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn line(key: &str, v: &Value) -> String {
    let text = text_value(v);
    if text.starts_with('\n') {
        format!("{key}:{text}\n")
    } else {
        format!("{key}: {text}\n")
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.push((key.into(), v.into()));
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.result.push((key.into(), v.into()));
    }

    pub fn cert(&mut self, key: &str, v: impl Into<Value>) {
        self.certificate.push((key.into(), v.into()));
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn to_json(&self) -> Value {
        let obj = |pairs: &[(String, Value)]| Value::Object(pairs.iter().cloned().collect::<Map<_, _>>());
        let mut v = json!({
            "command": self.command,
            "inputs": obj(&self.inputs),
            "result": obj(&self.result),
            "certificate": obj(&self.certificate),
            "notes": self.notes,
        });
        if let Some(ms) = self.timing_ms {
            v["timing_ms"] = json!(ms);
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in self.inputs.iter().chain(&self.result) {
            out.push_str(&line(k, v));
        }
        for (k, v) in &self.certificate {
            out.push_str(&line(&format!("certificate.{k}"), v));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing_ms: {ms:.3}\n"));
        }
        out
    }
}
