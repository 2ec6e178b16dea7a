//! Post-hoc trace auditor.
//!
//! Replays a JSON-lines trace and checks the server-disjointness invariant:
//! no server is ever held by two in-flight requests, completions release
//! exactly what was admitted, and no request reads a server twice. The
//! auditor deliberately shares no code with the scheduler; it parses the
//! serialized trace with its own event type.

use std::collections::HashMap;

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Deserialize)]
struct RawEvent {
    time: f64,
    kind: String,
    query: usize,
    servers: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub events: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audits a trace in JSON-lines form (one event object per line).
pub fn audit_jsonl(input: &str) -> Result<AuditReport> {
    let mut report = AuditReport::default();
    let mut owner: HashMap<usize, usize> = HashMap::new(); // server -> query
    let mut last_time = f64::NEG_INFINITY;
    for (lineno, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let e: RawEvent = serde_json::from_str(line).map_err(|err| Error::Parse {
            line: lineno + 1,
            message: err.to_string(),
        })?;
        report.events += 1;
        if e.time < last_time {
            report
                .violations
                .push(format!("line {}: time goes backwards", lineno + 1));
        }
        last_time = e.time;
        match e.kind.as_str() {
            "admit" | "replan" => {
                let mut seen = std::collections::HashSet::new();
                if e.kind == "replan" {
                    owner.retain(|_, q| *q != e.query);
                }
                for &s in &e.servers {
                    if !seen.insert(s) {
                        report.violations.push(format!(
                            "line {}: query {} reads server {} twice",
                            lineno + 1,
                            e.query,
                            s
                        ));
                    }
                    if let Some(&q) = owner.get(&s) {
                        report.violations.push(format!(
                            "line {}: server {} already held by query {}",
                            lineno + 1,
                            s,
                            q
                        ));
                    } else {
                        owner.insert(s, e.query);
                    }
                }
            }
            "complete" => {
                for &s in &e.servers {
                    match owner.get(&s) {
                        Some(&q) if q == e.query => {
                            owner.remove(&s);
                        }
                        Some(&q) => report.violations.push(format!(
                            "line {}: query {} releases server {} held by query {}",
                            lineno + 1,
                            e.query,
                            s,
                            q
                        )),
                        None => report.violations.push(format!(
                            "line {}: query {} releases free server {}",
                            lineno + 1,
                            e.query,
                            s
                        )),
                    }
                }
            }
            "stall" => {}
            other => report
                .violations
                .push(format!("line {}: unknown event kind {other:?}", lineno + 1)),
        }
    }
    for (s, q) in owner {
        report.violations.push(format!(
            "server {s} still held by query {q} at end of trace"
        ));
    }
    Ok(report)
}
