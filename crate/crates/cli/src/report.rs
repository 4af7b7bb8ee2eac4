use deltoid_core::render::SCHEMA;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// What a command hands back: whether its checks passed, a JSON body and a
/// human-readable rendering of the same.
pub struct Report {
    pub command: &'static str,
    pub ok: bool,
    pub body: Value,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str, ok: bool, body: impl Serialize, text: String) -> anyhow::Result<Self> {
        Ok(Report { command, ok, body: serde_json::to_value(body)?, text })
    }

    pub fn to_json(&self) -> Value {
        document(self.command, Some(self.ok), &self.body)
    }

    pub fn emit(&self, as_json: bool) {
        if as_json {
            println!("{}", serde_json::to_string_pretty(&self.to_json()).expect("serializable"));
        } else {
            print!("{}", self.text);
            if !self.text.ends_with('\n') {
                println!();
            }
            if !self.ok {
                println!("FAILED");
            }
        }
    }
}

/// `{"schema", "command", "ok"?, ...body}`; non-object bodies go under `"result"`.
pub fn document(command: &str, ok: Option<bool>, body: &Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    if let Some(ok) = ok {
        out.insert("ok".into(), json!(ok));
    }
    match body {
        Value::Object(m) => out.extend(m.clone()),
        other => {
            out.insert("result".into(), other.clone());
        }
    }
    Value::Object(out)
}

pub fn error_json(e: &anyhow::Error) -> String {
    json!({ "schema": SCHEMA, "ok": false, "error": format!("{e:#}") }).to_string()
}
