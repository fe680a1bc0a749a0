//! Plain-text graph and coloring files.
//!
//! Graph: a header `n m d` with `d` one of `oriented` / `symmetric`, then `m`
//! lines `u v`. Coloring: `m` lines `u v c`, in the graph's edge order.
//! Fields are whitespace separated, lines end in LF.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Color, EdgeColoring, OrientedGraph};

pub fn write_graph(g: &OrientedGraph) -> String {
    let kind = if g.allow_antiparallel() {
        "symmetric"
    } else {
        "oriented"
    };
    let mut out = format!("{} {} {}\n", g.n(), g.edge_count(), kind);
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("write to string");
    }
    out
}

pub fn write_coloring(g: &OrientedGraph, coloring: &EdgeColoring) -> String {
    let mut out = String::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(out, "{u} {v} {}", coloring.colors()[id]).expect("write to string");
    }
    out
}

struct Field<'a> {
    text: &'a str,
    column: usize,
}

fn fields(line: &str) -> Vec<Field<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Field {
                    text: &line[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Field {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number(f: &Field<'_>, line: usize, what: &str) -> Result<usize> {
    f.text
        .parse::<usize>()
        .map_err(|_| parse_err(line, f.column, format!("expected {what}, found `{}`", f.text)))
}

fn expect_fields<'a>(line_text: &'a str, line: usize, count: usize) -> Result<Vec<Field<'a>>> {
    let fs = fields(line_text);
    if fs.len() != count {
        let column = fs.get(count).map_or(line_text.len() + 1, |f| f.column);
        return Err(parse_err(
            line,
            column,
            format!("expected {count} fields, found {}", fs.len()),
        ));
    }
    Ok(fs)
}

/// Content lines: everything up to the last non-empty line.
fn content_lines(text: &str) -> Vec<&str> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    lines
}

pub fn parse_graph(text: &str) -> Result<OrientedGraph> {
    let lines = content_lines(text);
    let header = lines.first().ok_or_else(|| parse_err(1, 1, "missing header `n m d`"))?;
    let fs = expect_fields(header, 1, 3)?;
    let n = number(&fs[0], 1, "vertex count")?;
    let m = number(&fs[1], 1, "edge count")?;
    let allow = match fs[2].text {
        "oriented" => false,
        "symmetric" => true,
        other => {
            return Err(parse_err(
                1,
                fs[2].column,
                format!("expected `oriented` or `symmetric`, found `{other}`"),
            ))
        }
    };
    if lines.len() - 1 != m {
        return Err(parse_err(
            lines.len().min(m + 1) + 1,
            1,
            format!("header declares {m} edges, found {} edge lines", lines.len() - 1),
        ));
    }
    let mut g = OrientedGraph::new(n, allow);
    for (i, l) in lines.iter().enumerate().skip(1) {
        let line = i + 1;
        let fs = expect_fields(l, line, 2)?;
        let u = number(&fs[0], line, "vertex")?;
        let v = number(&fs[1], line, "vertex")?;
        g.add_edge(u, v)
            .map_err(|e| parse_err(line, fs[0].column, e.to_string()))?;
    }
    Ok(g)
}

pub fn parse_coloring(text: &str, g: &OrientedGraph, num_colors: Color) -> Result<EdgeColoring> {
    let lines = content_lines(text);
    if lines.len() != g.edge_count() {
        return Err(parse_err(
            lines.len() + 1,
            1,
            format!("expected {} coloring lines, found {}", g.edge_count(), lines.len()),
        ));
    }
    let mut coloring = EdgeColoring::uncolored(g, num_colors);
    for (id, l) in lines.iter().enumerate() {
        let line = id + 1;
        let fs = expect_fields(l, line, 3)?;
        let u = number(&fs[0], line, "vertex")?;
        let v = number(&fs[1], line, "vertex")?;
        if g.edges()[id] != (u, v) {
            let (a, b) = g.edges()[id];
            return Err(parse_err(
                line,
                fs[0].column,
                format!("edge {u} {v} does not match graph edge {a} {b} at this position"),
            ));
        }
        let c = number(&fs[2], line, "color")?;
        if c == 0 || c > num_colors as usize {
            return Err(parse_err(
                line,
                fs[2].column,
                format!("color {c} out of range 1..={num_colors}"),
            ));
        }
        coloring.set(id, c as Color);
    }
    Ok(coloring)
}

/// Largest color id in a coloring file, for callers that do not know `q`.
pub fn max_color_in(text: &str) -> Result<Color> {
    let mut best = 0usize;
    for (i, l) in content_lines(text).iter().enumerate() {
        let fs = expect_fields(l, i + 1, 3)?;
        best = best.max(number(&fs[2], i + 1, "color")?);
    }
    Color::try_from(best.max(1)).map_err(|_| Error::InvalidInput(format!("color {best} too large")))
}
