//! Text formats: the line-oriented graph file, the `--moduli` list and the
//! number rendering shared by every CSV writer.
//!
//! ```text
//! # comment
//! vertices 3
//! rank 1          (voltage graphs only)
//! edge 0 1 1      (tail head [voltage...])
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::MultiGraph;
use crate::towers::VoltageGraph;

/// Upper bound on `vertices` accepted from a file.
pub const MAX_VERTICES: usize = 1 << 20;
/// Upper bound on `rank` accepted from a file.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Graph file contents before interpretation as a plain or a voltage graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: MultiGraph,
    /// Value of the `rank` header, if present.
    pub rank: Option<usize>,
    /// Voltage integers given on each edge line (possibly empty).
    pub voltages: Vec<Vec<i64>>,
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

fn no_trailing(tok: Option<&str>, line: usize) -> Result<(), ParseError> {
    match tok {
        Some(extra) => Err(err(line, format!("unexpected token `{extra}`"))),
        None => Ok(()),
    }
}

/// Parses the graph text format, keeping any voltages.
pub fn parse_graph_file(text: &str) -> Result<GraphFile, ParseError> {
    let mut vertex_count: Option<usize> = None;
    let mut rank: Option<usize> = None;
    let mut edges = Vec::new();
    let mut voltages = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_ascii_whitespace();
        let keyword = toks.next().unwrap_or_default();
        match keyword {
            "vertices" => {
                if vertex_count.is_some() {
                    return Err(err(line_no, "duplicate `vertices` header"));
                }
                if !edges.is_empty() {
                    return Err(err(line_no, "`vertices` must precede edges"));
                }
                let n = parse_count(toks.next(), line_no, "vertex count")?;
                if n > MAX_VERTICES {
                    return Err(err(
                        line_no,
                        format!("vertex count {n} exceeds {MAX_VERTICES}"),
                    ));
                }
                no_trailing(toks.next(), line_no)?;
                vertex_count = Some(n);
            }
            "rank" => {
                if rank.is_some() {
                    return Err(err(line_no, "duplicate `rank` header"));
                }
                if !edges.is_empty() {
                    return Err(err(line_no, "`rank` must precede edges"));
                }
                let d = parse_count(toks.next(), line_no, "rank")?;
                if d == 0 || d > MAX_RANK {
                    return Err(err(line_no, format!("rank must be in 1..={MAX_RANK}")));
                }
                no_trailing(toks.next(), line_no)?;
                rank = Some(d);
            }
            "edge" => {
                let n =
                    vertex_count.ok_or_else(|| err(line_no, "`edge` before `vertices` header"))?;
                let tail = parse_count(toks.next(), line_no, "tail")?;
                let head = parse_count(toks.next(), line_no, "head")?;
                for v in [tail, head] {
                    if v >= n {
                        return Err(err(
                            line_no,
                            format!("vertex {v} out of range (graph has {n} vertices)"),
                        ));
                    }
                }
                let volts = toks
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| err(line_no, format!("invalid voltage `{t}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(d) = rank {
                    if volts.len() != d {
                        return Err(err(
                            line_no,
                            format!("expected {d} voltages, found {}", volts.len()),
                        ));
                    }
                }
                edges.push((tail, head));
                voltages.push(volts);
            }
            other => return Err(err(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let n = vertex_count.ok_or_else(|| err(0, "missing `vertices` header"))?;
    let graph = MultiGraph::new(n, edges).map_err(|e| err(0, e.to_string()))?;
    Ok(GraphFile {
        graph,
        rank,
        voltages,
    })
}

/// Parses a plain graph; voltages, if any, are ignored.
pub fn parse_graph(text: &str) -> Result<MultiGraph, ParseError> {
    parse_graph_file(text).map(|f| f.graph)
}

/// Parses a voltage graph. Without a `rank` header the rank is inferred from
/// the edge lines, which must then agree.
pub fn parse_voltage_graph(text: &str) -> Result<VoltageGraph, ParseError> {
    let file = parse_graph_file(text)?;
    let rank = match file.rank {
        Some(d) => d,
        None => {
            let d = file.voltages.first().map_or(0, Vec::len);
            if d == 0 {
                return Err(err(0, "voltage graph needs a `rank` header or voltages"));
            }
            if d > MAX_RANK {
                return Err(err(0, format!("rank must be in 1..={MAX_RANK}")));
            }
            if let Some(i) = file.voltages.iter().position(|v| v.len() != d) {
                return Err(err(
                    0,
                    format!(
                        "edge {i} has {} voltages, expected {d}",
                        file.voltages[i].len()
                    ),
                ));
            }
            d
        }
    };
    VoltageGraph::new(file.graph, rank, file.voltages).map_err(|e| err(0, e.to_string()))
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for &(t, h) in g.edges() {
        let _ = writeln!(out, "edge {t} {h}");
    }
    out
}

pub fn write_voltage_graph(vg: &VoltageGraph) -> String {
    let mut out = format!(
        "vertices {}\nrank {}\n",
        vg.base().vertex_count(),
        vg.rank()
    );
    for (&(t, h), volts) in vg.base().edges().iter().zip(vg.voltages()) {
        let _ = write!(out, "edge {t} {h}");
        for v in volts {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Parses a comma-separated list of positive integers, e.g. `4,4`.
pub fn parse_moduli(text: &str) -> Result<Vec<u64>, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(err(0, "empty moduli list"));
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok.parse::<u64>() {
                Ok(0) => Err(err(0, "moduli must be positive")),
                Ok(n) => Ok(n),
                Err(_) => Err(err(0, format!("invalid modulus `{tok}`"))),
            }
        })
        .collect()
}

/// Renders a float with 15 significant digits in the style of C's `%.15g`:
/// fixed notation for exponents in `[-5, 15)`, scientific otherwise, trailing
/// zeros removed.
pub fn fmt_g15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}
