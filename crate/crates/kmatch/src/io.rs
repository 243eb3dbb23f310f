//! Line-oriented text formats.
//!
//! Graph files:
//! ```text
//! c optional comment
//! p kmatch <n> <m>
//! e <u> <v> [mult]
//! ```
//! Vertices are 1-based in files and 0-based in the library; `u = v` is a
//! loop and `mult` defaults to 1. `m` must equal the number of `e` lines.
//! Parsing normalizes parallel lines into one record, and serialization is
//! canonical, so parse -> serialize -> parse is the identity on normalized
//! graphs.
//!
//! Solution files:
//! ```text
//! s kmatch <n> <k> <feasible|infeasible>
//! w <edge-index> <weight>     (nonzero weights, 1-based input edge lines)
//! cert S <v1> <v2> ...        (violator set, 1-based, may be empty)
//! ```

use thiserror::Error;

use crate::graph::{EdgeRecord, GraphError, Multigraph, VertexSet};
use crate::solver::WeightFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing '{0}' header line")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn line_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| line_err(line, format!("invalid {what}: '{token}'")))
}

/// Parses the graph format; comments and blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<Multigraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut records: Vec<EdgeRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(head) = tokens.next() else {
            continue;
        };
        match head {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(line_err(line, "duplicate 'p' header"));
                }
                if tokens.next() != Some("kmatch") {
                    return Err(line_err(line, "expected 'p kmatch <n> <m>'"));
                }
                let n = parse_num(line, tokens.next().unwrap_or(""), "vertex count")?;
                let m = parse_num(line, tokens.next().unwrap_or(""), "edge count")?;
                if tokens.next().is_some() {
                    return Err(line_err(line, "trailing tokens after header"));
                }
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(line_err(line, "edge line before 'p kmatch' header"));
                };
                let u: usize = parse_num(line, tokens.next().unwrap_or(""), "endpoint")?;
                let v: usize = parse_num(line, tokens.next().unwrap_or(""), "endpoint")?;
                let mult: usize = match tokens.next() {
                    Some(t) => parse_num(line, t, "multiplicity")?,
                    None => 1,
                };
                if tokens.next().is_some() {
                    return Err(line_err(line, "trailing tokens after edge"));
                }
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(line_err(
                        line,
                        format!("endpoints must be in 1..={n}, got {u} {v}"),
                    ));
                }
                if mult == 0 {
                    return Err(line_err(line, "multiplicity must be at least 1"));
                }
                records.push(EdgeRecord::new(u - 1, v - 1, mult));
            }
            other => {
                return Err(line_err(line, format!("unknown line type '{other}'")));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(ParseError::MissingHeader("p kmatch"));
    };
    if records.len() != m {
        return Err(line_err(
            text.lines().count(),
            format!("header promises {m} edge lines, found {}", records.len()),
        ));
    }
    Ok(Multigraph::new(n, records)?)
}

/// Canonical serialization: records ascending, multiplicity printed only
/// when it exceeds 1.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("p kmatch {} {}\n", g.n(), g.record_count());
    for e in g.records() {
        if e.mult == 1 {
            out.push_str(&format!("e {} {}\n", e.u + 1, e.v + 1));
        } else {
            out.push_str(&format!("e {} {} {}\n", e.u + 1, e.v + 1, e.mult));
        }
    }
    out
}

/// For each record, the 0-based position of its first line in the
/// constructor input; identity-like for programmatically built graphs.
pub fn first_input_positions(g: &Multigraph) -> Vec<usize> {
    let mut first = vec![usize::MAX; g.record_count()];
    for (pos, &rec) in g.input_map().iter().enumerate() {
        if first[rec] == usize::MAX {
            first[rec] = pos;
        }
    }
    for (rec, slot) in first.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = rec;
        }
    }
    first
}

/// A parsed solution file; edge positions and vertices are 0-based here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub n: usize,
    pub k: usize,
    pub feasible: bool,
    /// (input edge position, weight) pairs with positive weight.
    pub weights: Vec<(usize, usize)>,
    /// Violator set from a `cert S` line.
    pub cert_s: Option<VertexSet>,
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, ParseError> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut weights = Vec::new();
    let mut cert_s = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(head) = tokens.next() else {
            continue;
        };
        match head {
            "c" => continue,
            "s" => {
                if header.is_some() {
                    return Err(line_err(line, "duplicate 's' header"));
                }
                if tokens.next() != Some("kmatch") {
                    return Err(line_err(line, "expected 's kmatch <n> <k> <decision>'"));
                }
                let n = parse_num(line, tokens.next().unwrap_or(""), "vertex count")?;
                let k = parse_num(line, tokens.next().unwrap_or(""), "k")?;
                let feasible = match tokens.next() {
                    Some("feasible") => true,
                    Some("infeasible") => false,
                    other => {
                        return Err(line_err(
                            line,
                            format!("expected feasible|infeasible, got '{}'", other.unwrap_or("")),
                        ))
                    }
                };
                header = Some((n, k, feasible));
            }
            "w" => {
                let pos: usize = parse_num(line, tokens.next().unwrap_or(""), "edge index")?;
                let weight: usize = parse_num(line, tokens.next().unwrap_or(""), "weight")?;
                if pos == 0 {
                    return Err(line_err(line, "edge indices are 1-based"));
                }
                weights.push((pos - 1, weight));
            }
            "cert" => {
                if tokens.next() != Some("S") {
                    return Err(line_err(line, "expected 'cert S <v1> <v2> ...'"));
                }
                let mut vs = Vec::new();
                for t in tokens {
                    let v: usize = parse_num(line, t, "vertex")?;
                    if v == 0 {
                        return Err(line_err(line, "vertices are 1-based"));
                    }
                    vs.push(v - 1);
                }
                cert_s = Some(VertexSet::new(vs));
            }
            other => {
                return Err(line_err(line, format!("unknown line type '{other}'")));
            }
        }
    }
    let Some((n, k, feasible)) = header else {
        return Err(ParseError::MissingHeader("s kmatch"));
    };
    Ok(SolutionFile {
        n,
        k,
        feasible,
        weights,
        cert_s,
    })
}

/// Feasible result: header plus nonzero weights keyed by 1-based input
/// edge positions, ascending.
pub fn write_feasible(g: &Multigraph, f: &WeightFunction) -> String {
    let positions = first_input_positions(g);
    let mut out = format!("s kmatch {} {} feasible\n", g.n(), f.k());
    let mut rows: Vec<(usize, usize)> = f.support().map(|i| (positions[i], f.weight(i))).collect();
    rows.sort_unstable();
    for (pos, w) in rows {
        out.push_str(&format!("w {} {}\n", pos + 1, w));
    }
    out
}

/// Infeasible result, with the violator set when one was found.
pub fn write_infeasible(n: usize, k: usize, violator: Option<&VertexSet>) -> String {
    let mut out = format!("s kmatch {n} {k} infeasible\n");
    if let Some(s) = violator {
        out.push_str("cert S");
        for v in s.iter() {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    out
}
