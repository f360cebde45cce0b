//! Text formats: graph files, field files and matroid JSON.
//!
//! A graph file has a header line `n m` followed by `m` lines `u v p` with
//! 0-based vertex ids and a failure probability `p` in `(0, 1)`. Blank lines
//! and lines starting with `#` are skipped. A field file holds one positive
//! decimal per line.

use crate::error::{Error, Result};
use crate::matroid::{Fields, MatroidSpec};
use crate::reliability::NetworkInstance;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

/// Parses a graph file. Structural problems (disconnected graph, bad
/// probabilities) are reported as validation errors by the instance.
pub fn parse_graph(text: &str) -> Result<NetworkInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty graph file"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(hl, toks.next(), "vertex count")?;
    let m: usize = field(hl, toks.next(), "edge count")?;
    if toks.next().is_some() {
        return Err(parse_err(hl, "header must be 'n m'"));
    }
    // the header is untrusted; each edge needs at least six bytes of text
    let cap = m.min(text.len() / 6);
    let mut edges = Vec::with_capacity(cap);
    let mut p = Vec::with_capacity(cap);
    let mut last = hl;
    for (ln, l) in lines {
        if edges.len() == m {
            return Err(parse_err(ln, format!("more than the {m} edges announced in the header")));
        }
        let mut toks = l.split_whitespace();
        let u: usize = field(ln, toks.next(), "endpoint u")?;
        let v: usize = field(ln, toks.next(), "endpoint v")?;
        let pe: f64 = field(ln, toks.next(), "failure probability")?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "edge line must be 'u v p'"));
        }
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("endpoint outside 0..{n}")));
        }
        if !(pe > 0.0 && pe < 1.0) {
            return Err(parse_err(ln, format!("failure probability {pe} outside (0, 1)")));
        }
        edges.push([u, v]);
        p.push(pe);
        last = ln;
    }
    if edges.len() != m {
        return Err(parse_err(last, format!("header announces {m} edges, found {}", edges.len())));
    }
    NetworkInstance::new(n, edges, p)
}

/// Writes an instance in graph-file format.
pub fn write_graph(inst: &NetworkInstance) -> String {
    let mut out = format!("{} {}\n", inst.vertex_count(), inst.edge_count());
    for (&[u, v], p) in inst.edges().iter().zip(inst.failure_probs()) {
        out.push_str(&format!("{u} {v} {p}\n"));
    }
    out
}

/// Parses a field file holding exactly `n` positive values.
pub fn parse_fields(text: &str, n: usize) -> Result<Fields> {
    let mut lambda = Vec::with_capacity(n);
    let mut last = 1;
    for (ln, l) in content_lines(text) {
        let x: f64 = field(ln, Some(l), "field value")?;
        if !(x.is_finite() && x > 0.0) {
            return Err(parse_err(ln, format!("field value {x} must be positive")));
        }
        lambda.push(x);
        last = ln;
    }
    if lambda.len() != n {
        return Err(parse_err(last, format!("expected {n} field values, found {}", lambda.len())));
    }
    Fields::new(lambda)
}

/// Parses and validates a matroid description.
pub fn parse_matroid(text: &str) -> Result<MatroidSpec> {
    let spec: MatroidSpec = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}
