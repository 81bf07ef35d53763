//! Text formats: digraph TSV, matrix CSV and spectrum JSON.
//!
//! Digraph TSV: a header line `n b`, then one `i j w` line per arc with 0-based
//! indices. Fields are separated by tabs or spaces; blank lines and lines
//! starting with `#` are skipped.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::WeightedDigraph;
use crate::linalg::{DenseMatrix, Spectrum};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on tabs/spaces, keeping the 1-based column of each field.
fn fields(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch == ' ' || ch == '\t', start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    })
}

fn parse_field<T: std::str::FromStr>(line: usize, (col, s): (usize, &str), what: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| err(line, col, format!("expected {what}, found `{s}`")))
}

pub fn parse_digraph_tsv(text: &str) -> Result<WeightedDigraph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| err(1, 1, "missing header `n b`"))?;
    let hf = fields(header);
    if hf.len() != 2 {
        return Err(err(hl, 1, format!("header needs 2 fields `n b`, found {}", hf.len())));
    }
    let n: usize = parse_field(hl, hf[0], "a vertex count")?;
    let b: f64 = parse_field(hl, hf[1], "a weight bound")?;
    if n == 0 {
        return Err(err(hl, hf[0].0, "vertex count must be at least 1"));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(err(hl, hf[1].0, "weight bound must be positive and finite"));
    }
    let mut seen = BTreeSet::new();
    let mut arcs = Vec::new();
    for (ln, line) in lines {
        let f = fields(line);
        if f.len() != 3 {
            let col = f.get(3).map_or(1, |x| x.0);
            return Err(err(
                ln,
                col,
                format!("arc line needs 3 fields `i j w`, found {}", f.len()),
            ));
        }
        let i: usize = parse_field(ln, f[0], "a vertex index")?;
        let j: usize = parse_field(ln, f[1], "a vertex index")?;
        let w: f64 = parse_field(ln, f[2], "a weight")?;
        for (v, fld) in [(i, f[0]), (j, f[1])] {
            if v >= n {
                return Err(err(ln, fld.0, format!("vertex {v} out of range 0..{n}")));
            }
        }
        if i == j {
            return Err(err(ln, f[1].0, format!("self-loop at vertex {i}")));
        }
        if !(w > 0.0 && w <= b) {
            return Err(err(ln, f[2].0, format!("weight {w} outside (0, {b}]")));
        }
        if !seen.insert((i, j)) {
            return Err(err(ln, f[0].0, format!("duplicate arc ({i}, {j})")));
        }
        arcs.push((i, j, w));
    }
    WeightedDigraph::new(n, arcs, b).map_err(|e| err(hl, 1, e.to_string()))
}

pub fn write_digraph_tsv(g: &WeightedDigraph) -> String {
    let mut s = format!("{}\t{}\n", g.n(), g.bound());
    for a in g.arcs() {
        let _ = writeln!(s, "{}\t{}\t{}", a.source, a.target, a.weight);
    }
    s
}

pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix, ParseError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first_line = 1;
    for (ln, line) in content_lines(text) {
        if rows.is_empty() {
            first_line = ln;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for cell in line.split(',') {
            let t = cell.trim();
            let lead = cell.len() - cell.trim_start().len();
            let x: f64 = t
                .parse()
                .map_err(|_| err(ln, col + lead, format!("expected a number, found `{t}`")))?;
            if !x.is_finite() {
                return Err(err(ln, col + lead, "entry is not finite"));
            }
            row.push(x);
            col += cell.chars().count() + 1;
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(err(
                    ln,
                    1,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(err(1, 1, "empty matrix"));
    }
    if rows[0].len() != n {
        return Err(err(
            first_line,
            1,
            format!("matrix is {n} x {}, expected square", rows[0].len()),
        ));
    }
    Ok(DenseMatrix::from_rows(&rows).expect("square by the checks above"))
}

/// One row per line, entries in shortest round-trip form.
pub fn write_matrix_csv(m: &DenseMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:?}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn spectrum_json(s: &Spectrum) -> Value {
    json!(s.entries())
}

/// Input file kinds accepted by the verify suite.
#[derive(Debug, Clone)]
pub enum Input {
    Digraph(WeightedDigraph),
    Matrix(DenseMatrix),
}

/// Chooses the parser by extension (`.tsv` or `.csv`), falling back on
/// whether the first content line contains a comma.
pub fn parse_input(name: &str, text: &str) -> Result<Input, ParseError> {
    let lower = name.to_ascii_lowercase();
    let csv = if lower.ends_with(".csv") {
        true
    } else if lower.ends_with(".tsv") {
        false
    } else {
        content_lines(text).next().is_some_and(|(_, l)| l.contains(','))
    };
    if csv {
        parse_matrix_csv(text).map(Input::Matrix)
    } else {
        parse_digraph_tsv(text).map(Input::Digraph)
    }
}
