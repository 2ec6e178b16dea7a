//! External formats. Indices are 1-based in every serialized form; the
//! in-memory types are 0-based throughout.
//!
//! - matrix text: `k` lines of `n` characters from {0,1}, `#` comments;
//! - matrix JSON: `{"k":…, "n":…, "rows":["0101…", …]}`;
//! - hypergraph text: header `eta m [r]`, then one edge per line as
//!   space-separated vertex indices;
//! - bipartite graph JSON: `{"a":…, "b":…, "adj":[[…], …]}`;
//! - verifier verdicts and simulation traces as JSON values / JSON lines.

use std::path::Path;

use serde_json::{json, Value};

use crate::code::GeneratorMatrix;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::graphs::BipartiteGraph;
use crate::hypergraphs::Hypergraph;
use crate::sim::RetrievalTrace;
use crate::verify::{AsyncReport, BatchReport, PirReport, Query, RecoveryAssignment};

pub fn matrix_to_text(g: &GeneratorMatrix) -> String {
    let mut out = String::new();
    for r in g.rows() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_matrix_text(input: &str) -> Result<GeneratorMatrix> {
    let mut rows = Vec::new();
    let mut width = None;
    for (lineno, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut bits = Vec::with_capacity(line.len());
        for c in line.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        if let Some(w) = width {
            if bits.len() != w {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!("row length {} differs from {}", bits.len(), w),
                });
            }
        } else {
            width = Some(bits.len());
        }
        rows.push(BitVec::from_bits(&bits));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no matrix rows found".into(),
        });
    }
    GeneratorMatrix::new(rows)
}

pub fn matrix_from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<GeneratorMatrix> {
    let joined = rows
        .iter()
        .map(|s| s.as_ref())
        .collect::<Vec<_>>()
        .join("\n");
    parse_matrix_text(&joined)
}

pub fn matrix_to_json(g: &GeneratorMatrix) -> Value {
    json!({
        "k": g.k(),
        "n": g.n(),
        "rows": g.rows().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

pub fn matrix_from_json(v: &Value) -> Result<GeneratorMatrix> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("matrix JSON needs a \"rows\" array".into()))?;
    let strings: Vec<&str> = rows
        .iter()
        .map(|r| {
            r.as_str()
                .ok_or_else(|| Error::InvalidInput("matrix rows must be strings".into()))
        })
        .collect::<Result<_>>()?;
    let g = matrix_from_row_strings(&strings)?;
    if let Some(k) = v.get("k").and_then(Value::as_u64) {
        if k as usize != g.k() {
            return Err(Error::InvalidInput(format!(
                "declared k = {k} but {} rows given",
                g.k()
            )));
        }
    }
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != g.n() {
            return Err(Error::InvalidInput(format!(
                "declared n = {n} but rows have length {}",
                g.n()
            )));
        }
    }
    Ok(g)
}

/// Accepts matrix text, bare matrix JSON, or any JSON document carrying a
/// `"matrix"` member (as emitted by `construct`).
pub fn read_matrix_str(input: &str) -> Result<GeneratorMatrix> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(trimmed)?;
        if let Some(inner) = v.get("matrix") {
            matrix_from_json(inner)
        } else {
            matrix_from_json(&v)
        }
    } else {
        parse_matrix_text(input)
    }
}

pub fn read_matrix_file(path: &Path) -> Result<GeneratorMatrix> {
    read_matrix_str(&std::fs::read_to_string(path)?)
}

pub fn hypergraph_to_text(h: &Hypergraph) -> String {
    let mut out = match h.uniformity() {
        Some(r) => format!("{} {} {}\n", h.v_size(), h.edge_count(), r),
        None => format!("{} {}\n", h.v_size(), h.edge_count()),
    };
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph_text(input: &str) -> Result<Hypergraph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (lineno, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty hypergraph file".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(Error::Parse {
            line: lineno,
            message: "header must be: eta m [r]".into(),
        });
    }
    let parse_num = |s: &str, line: usize| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line,
            message: format!("not a number: {s:?}"),
        })
    };
    let eta = parse_num(fields[0], lineno)?;
    let m = parse_num(fields[1], lineno)?;
    let r = fields.get(2).map(|s| parse_num(s, lineno)).transpose()?;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let mut edge = Vec::new();
        for tok in line.split_whitespace() {
            let v = parse_num(tok, lineno)?;
            if v == 0 || v > eta {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("vertex {v} outside 1..={eta}"),
                });
            }
            edge.push(v - 1);
        }
        if let Some(r) = r {
            if edge.len() != r {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("edge has {} vertices, expected r = {r}", edge.len()),
                });
            }
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            message: format!("header declared {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::new(eta, edges)
}

pub fn bipartite_to_json(g: &BipartiteGraph) -> Value {
    json!({
        "a": g.a_size(),
        "b": g.b_size(),
        "adj": g
            .adjacency()
            .iter()
            .map(|list| list.iter().map(|&b| b + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn bipartite_from_json(v: &Value) -> Result<BipartiteGraph> {
    let a = v
        .get("a")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("bipartite JSON needs \"a\"".into()))?
        as usize;
    let b = v
        .get("b")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidInput("bipartite JSON needs \"b\"".into()))?
        as usize;
    let adj_val = v
        .get("adj")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("bipartite JSON needs \"adj\"".into()))?;
    let mut adj = Vec::with_capacity(adj_val.len());
    for row in adj_val {
        let row = row
            .as_array()
            .ok_or_else(|| Error::InvalidInput("adj rows must be arrays".into()))?;
        let mut list = Vec::with_capacity(row.len());
        for x in row {
            let x = x
                .as_u64()
                .ok_or_else(|| Error::InvalidInput("adj entries must be integers".into()))?
                as usize;
            if x == 0 || x > b {
                return Err(Error::IndexOutOfRange { index: x, bound: b });
            }
            list.push(x - 1);
        }
        adj.push(list);
    }
    BipartiteGraph::new(a, b, adj)
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|&x| x + 1).collect()
}

pub fn query_to_json(q: &Query) -> Value {
    json!(one_based(q.indices()))
}

pub fn assignment_to_json(a: &RecoveryAssignment) -> Value {
    json!(a
        .sets
        .iter()
        .map(|s| json!({ "symbol": s.target + 1, "servers": one_based(&s.coords) }))
        .collect::<Vec<_>>())
}

pub fn batch_report_to_json(t: usize, r: &BatchReport) -> Value {
    json!({
        "property": "batch",
        "t": t,
        "holds": r.holds,
        "counterexample": r.counterexample.as_ref().map(query_to_json),
        "nodes": r.cost.nodes,
        "warning": r.cost.space_warning,
    })
}

pub fn pir_report_to_json(t: usize, r: &PirReport) -> Value {
    json!({
        "property": "pir",
        "t": t,
        "holds": r.holds,
        "counterexample": r.counterexample.map(|i| i + 1),
        "nodes": r.cost.nodes,
        "warning": r.cost.space_warning,
    })
}

pub fn async_report_to_json(t: usize, relaxed: bool, r: &AsyncReport) -> Value {
    json!({
        "property": if relaxed { "async-relaxed" } else { "async-strict" },
        "t": t,
        "holds": r.holds,
        "not_batch": r.not_batch.as_ref().map(query_to_json),
        "witness": r.witness.as_ref().map(|w| json!({
            "query": query_to_json(&w.query),
            "assignment": assignment_to_json(&w.assignment),
            "completed_position": w.completed_pos + 1,
            "newcomer": w.newcomer + 1,
        })),
        "nodes": r.cost.nodes,
        "warning": r.cost.space_warning,
    })
}

/// One event per line, for streaming audit.
pub fn trace_to_jsonl(trace: &RetrievalTrace) -> String {
    let mut out = String::new();
    for e in &trace.events {
        out.push_str(&serde_json::to_string(e).expect("events serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example1_code;

    #[test]
    fn matrix_text_round_trip() {
        let g = example1_code();
        let text = matrix_to_text(&g);
        let parsed = parse_matrix_text(&text).unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn matrix_text_with_comments() {
        let g = parse_matrix_text("# a comment\n101\n # another\n011\n").unwrap();
        assert_eq!((g.k(), g.n()), (2, 3));
    }

    #[test]
    fn matrix_text_errors_carry_line_numbers() {
        match parse_matrix_text("101\n1x1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_matrix_text("101\n01\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let g = example1_code();
        let v = matrix_to_json(&g);
        assert_eq!(matrix_from_json(&v).unwrap(), g);
        // and via the sniffing reader, wrapped or bare
        let combined = json!({ "matrix": v, "report": {} });
        assert_eq!(read_matrix_str(&combined.to_string()).unwrap(), g);
        assert_eq!(read_matrix_str(&matrix_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn hypergraph_text_round_trip() {
        let h = crate::hypergraphs::Hypergraph::new(5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let text = hypergraph_to_text(&h);
        assert!(text.starts_with("5 2 3\n"));
        assert_eq!(parse_hypergraph_text(&text).unwrap(), h);
    }

    #[test]
    fn hypergraph_text_rejects_bad_vertex() {
        let err = parse_hypergraph_text("3 1 3\n1 2 9\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn bipartite_json_round_trip() {
        let g = BipartiteGraph::new(2, 3, vec![vec![0, 2], vec![1]]).unwrap();
        let v = bipartite_to_json(&g);
        assert_eq!(bipartite_from_json(&v).unwrap(), g);
    }
}
