//! Machine-readable run reports. Every map is ordered and every float is
//! printed by serde_json, so a report is a pure function of its inputs.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One gating check: passes iff `residual < threshold`. A residual of
/// `None` means the quantity could not be computed; `note` says why.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn below(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            residual: Some(residual),
            threshold,
            pass: residual < threshold,
            note: None,
        }
    }

    /// A check whose residual could not be computed; always fails.
    pub fn failed(name: impl Into<String>, threshold: f64, note: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            residual: None,
            threshold,
            pass: false,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(name: impl Into<String>, bytes: &[u8]) -> Self {
        let hash = Sha256::digest(bytes);
        InputDigest {
            name: name.into(),
            sha256: hash.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Write as CSV; JSON nulls become empty fields.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|v| match v {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            }))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    /// Measured quantities that do not gate the exit status.
    pub properties: BTreeMap<String, Value>,
    pub tables: BTreeMap<String, Table>,
    /// Violated preconditions; any entry makes the exit status 3.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            pass: true,
            ..Default::default()
        }
    }

    pub fn input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.push(InputDigest::of(name, bytes));
    }

    pub fn check(&mut self, c: CheckRecord) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn property(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.properties.insert(key.into(), v);
    }

    pub fn table(&mut self, key: impl Into<String>, t: Table) {
        self.tables.insert(key.into(), t);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        let d = InputDigest::of("empty", b"");
        assert_eq!(
            d.sha256,
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn pass_is_the_conjunction() {
        let mut r = RunReport::new(vec!["x".into()]);
        r.check(CheckRecord::below("a", 0.0, 1.0));
        assert!(r.pass);
        r.check(CheckRecord::below("b", f64::NAN, 1.0));
        assert!(!r.pass);
        assert!(r.to_json().contains("\"residual\": null"));
    }

    #[test]
    fn csv_output() {
        let mut t = Table::new(["t", "kappa"]);
        t.push(vec![Value::from(0.5), Value::Null]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,kappa\n0.5,\n");
    }
}
