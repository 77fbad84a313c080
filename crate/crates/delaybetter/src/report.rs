//! Line-oriented `key=value` run reports.

use std::fmt::Display;
use std::io::Write;
use std::time::Instant;

/// Collects facts about one command run and writes them to stderr when
/// emitted or dropped, so every exit path produces a report.
#[derive(Debug)]
pub struct RunReport {
    started: Instant,
    fields: Vec<(String, String)>,
    emitted: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        let mut r = Self {
            started: Instant::now(),
            fields: Vec::new(),
            emitted: false,
        };
        r.set("command", command);
        r
    }

    /// Sets `key`, replacing an earlier value. Newlines are escaped.
    pub fn set(&mut self, key: &str, value: impl Display) {
        let value = value.to_string().replace('\n', "\\n");
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// The report text, with elapsed wall time appended.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&format!("wall_ms={}\n", self.started.elapsed().as_millis()));
        out
    }

    pub fn emit(&mut self) {
        if !self.emitted {
            self.emitted = true;
            let _ = std::io::stderr().write_all(self.render().as_bytes());
        }
    }
}

impl Drop for RunReport {
    fn drop(&mut self) {
        self.emit();
    }
}
