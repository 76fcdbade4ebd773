use serde_json::{json, Map, Value};
use twistlab::{Check, Error, ValidationReport};

/// Why a command stopped. Input problems exit with 2, failed mathematical
/// checks with 1.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Math(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Math(m) => m,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    inputs: Vec<String>,
    checks: Vec<Check>,
    outputs: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<String>) -> Self {
        Report {
            command: command.into(),
            inputs,
            checks: Vec::new(),
            outputs: Map::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, r: &ValidationReport) {
        self.checks.extend(r.checks.iter().cloned());
    }

    pub fn output(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.into(), v);
    }

    /// Fails with exit code 1 unless every recorded check passed.
    pub fn verdict(&self) -> Result<(), Failure> {
        match self.checks.iter().find(|c| !c.pass) {
            None => Ok(()),
            Some(c) => Err(Failure::Math(format!("check failed: {}", c.name))),
        }
    }

    /// Record what a library error says and classify it.
    pub fn absorb(&mut self, e: Error) -> Failure {
        match e {
            Error::Validation(r) | Error::WrongWeakContext(r) | Error::ProjectionMismatch(r) => {
                self.extend(&r);
                let name = r.first_failure().map(|c| c.name.clone()).unwrap_or_default();
                Failure::Math(format!("{}: {name} fails", r.subject))
            }
            Error::NotInvertible
            | Error::NotCentral
            | Error::NotTriangular
            | Error::CounitNotOne
            | Error::Inconclusive(_)
            | Error::CapExceeded(_) => Failure::Math(e.to_string()),
            Error::Internal(r) => {
                self.extend(&r);
                Failure::Math(format!("internal check failed: {}", r.subject))
            }
            _ => Failure::Input(e.to_string()),
        }
    }

    pub fn print(&self, json: bool, failure: Option<&Failure>) {
        if json {
            let mut v = json!({
                "command": self.command,
                "inputs": self.inputs,
                "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            });
            if !self.outputs.is_empty() {
                v["outputs"] = Value::Object(self.outputs.clone());
            }
            if let Some(f) = failure {
                v["error"] = json!({ "exit": f.code(), "message": f.message() });
            }
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            return;
        }
        for c in &self.checks {
            if c.pass {
                println!("ok    {}", c.name);
                continue;
            }
            let mut line = format!("FAIL  {}", c.name);
            if let Some(at) = &c.at {
                line.push_str(&format!(" at {at}"));
            }
            if let Some(r) = &c.residual {
                line.push_str(&format!(": residual {r}"));
            }
            if let Some(n) = &c.note {
                line.push_str(&format!(" ({n})"));
            }
            println!("{line}");
        }
        for (k, v) in &self.outputs {
            match v {
                Value::String(s) => println!("{k}: {s}"),
                Value::Object(m) => {
                    println!("{k}:");
                    for (k2, v2) in m {
                        println!("  {k2}: {}", v2.as_str().map(String::from).unwrap_or_else(|| v2.to_string()));
                    }
                }
                other => println!("{k}: {other}"),
            }
        }
        if let Some(f) = failure {
            eprintln!("error: {}", f.message());
        }
    }
}
