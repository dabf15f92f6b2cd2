//! Line-based text format and DOT export.
//!
//! ```text
//! # comment
//! vertex x y z
//! arrow x y id=a1
//! thread y z (N . -N) id=t1
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Quiver, QuiverError, StdArrow, ThreadArrow, ThreadQuiver};
use crate::orders::{parse_order, OrderError};

enum Pending {
    Arrow { src: String, dst: String, id: Option<String> },
    Thread { src: String, dst: String, id: Option<String>, label: crate::orders::LinearOrder },
}

/// Splits a line into tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn syntax(line: usize, column: usize, expected: &str) -> QuiverError {
    QuiverError::Syntax {
        line,
        column,
        expected: expected.to_string(),
    }
}

pub fn parse(text: &str) -> Result<ThreadQuiver, QuiverError> {
    let mut vertices: Vec<String> = Vec::new();
    let mut vertex_set = BTreeSet::new();
    let mut pending = Vec::new();
    let mut explicit_ids = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, keyword)) = toks.first() else { continue };
        match keyword {
            "vertex" => {
                if toks.len() < 2 {
                    return Err(syntax(lineno, line.chars().count() + 1, "a vertex id"));
                }
                for &(_, v) in &toks[1..] {
                    if !vertex_set.insert(v.to_string()) {
                        return Err(QuiverError::DuplicateId(v.to_string()));
                    }
                    vertices.push(v.to_string());
                }
            }
            "arrow" | "thread" => {
                if toks.len() < 3 {
                    return Err(syntax(lineno, line.chars().count() + 1, "source and target vertices"));
                }
                let src = toks[1].1.to_string();
                let dst = toks[2].1.to_string();
                let mut rest = &toks[3..];
                let mut id = None;
                if let Some(&(_, last)) = rest.last() {
                    if let Some(value) = last.strip_prefix("id=") {
                        if value.is_empty() {
                            return Err(syntax(lineno, rest.last().expect("nonempty").0 + 3, "an arrow id"));
                        }
                        if !explicit_ids.insert(value.to_string()) {
                            return Err(QuiverError::DuplicateId(value.to_string()));
                        }
                        id = Some(value.to_string());
                        rest = &rest[..rest.len() - 1];
                    }
                }
                if keyword == "arrow" {
                    if let Some(&(c, _)) = rest.first() {
                        return Err(syntax(lineno, c, "end of line or id=<id>"));
                    }
                    pending.push(Pending::Arrow { src, dst, id });
                } else {
                    let Some(&(expr_col, _)) = rest.first() else {
                        return Err(syntax(lineno, line.chars().count() + 1, "an order expression"));
                    };
                    let expr = rest.iter().map(|(_, t)| *t).collect::<Vec<_>>().join(" ");
                    let label = parse_order(&expr).map_err(|e| match e {
                        OrderError::Syntax { column, expected } => syntax(lineno, expr_col + column - 1, &expected),
                        other => QuiverError::Order(other),
                    })?;
                    pending.push(Pending::Thread { src, dst, id, label });
                }
            }
            _ => return Err(syntax(lineno, col, "'vertex', 'arrow' or 'thread'")),
        }
    }

    let mut taken: BTreeSet<String> = explicit_ids.clone();
    let mut counter = 0usize;
    let mut fresh = |prefix: &str| loop {
        let candidate = format!("{prefix}{counter}");
        counter += 1;
        if taken.insert(candidate.clone()) {
            return candidate;
        }
    };
    let mut arrows = Vec::new();
    let mut threads = Vec::new();
    for p in pending {
        match p {
            Pending::Arrow { src, dst, id } => {
                let id = id.unwrap_or_else(|| fresh("e"));
                arrows.push(StdArrow { id, src, dst });
            }
            Pending::Thread { src, dst, id, label } => {
                let id = id.unwrap_or_else(|| fresh("t"));
                threads.push(ThreadArrow { id, src, dst, label });
            }
        }
    }
    ThreadQuiver::new(vertices, arrows, threads)
}

pub fn serialize(tq: &ThreadQuiver) -> String {
    let mut out = String::new();
    let mut vertices = tq.vertices.clone();
    vertices.sort();
    if !vertices.is_empty() {
        let _ = writeln!(out, "vertex {}", vertices.join(" "));
    }
    let mut arrows = tq.arrows.clone();
    arrows.sort_by(|a, b| a.id.cmp(&b.id));
    for a in arrows {
        let _ = writeln!(out, "arrow {} {} id={}", a.src, a.dst, a.id);
    }
    let mut threads = tq.threads.clone();
    threads.sort_by(|a, b| a.id.cmp(&b.id));
    for t in threads {
        let _ = writeln!(out, "thread {} {} {} id={}", t.src, t.dst, t.label, t.id);
    }
    out
}

pub(crate) fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT drawing: standard arrows solid, thread arrows dashed and labelled.
/// Vertices in `highlight` get a filled style.
pub fn to_dot(tq: &ThreadQuiver, highlight: &BTreeSet<String>) -> String {
    let mut out = String::from("digraph threadquiver {\n  rankdir=LR;\n");
    let mut vertices = tq.vertices.clone();
    vertices.sort();
    for v in &vertices {
        if highlight.contains(v) {
            let _ = writeln!(out, "  {} [style=filled, fillcolor=gray];", quote(v));
        } else {
            let _ = writeln!(out, "  {};", quote(v));
        }
    }
    let mut arrows = tq.arrows.clone();
    arrows.sort_by(|a, b| a.id.cmp(&b.id));
    for a in arrows {
        let _ = writeln!(out, "  {} -> {} [id={}];", quote(&a.src), quote(&a.dst), quote(&a.id));
    }
    let mut threads = tq.threads.clone();
    threads.sort_by(|a, b| a.id.cmp(&b.id));
    for t in threads {
        let _ = writeln!(
            out,
            "  {} -> {} [id={}, style=dashed, label={}];",
            quote(&t.src),
            quote(&t.dst),
            quote(&t.id),
            quote(&t.label.to_string())
        );
    }
    out.push_str("}\n");
    out
}

/// DOT drawing of a plain quiver; elided arrows are dotted.
pub fn quiver_to_dot(q: &Quiver) -> String {
    let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
    let mut vertices: Vec<&String> = q.vertices().iter().collect();
    vertices.sort();
    for v in vertices {
        let _ = writeln!(out, "  {};", quote(v));
    }
    let mut arrows: Vec<_> = q.arrows().iter().collect();
    arrows.sort_by(|a, b| a.id.cmp(&b.id));
    for a in arrows {
        let style = if a.elided { ", style=dotted" } else { "" };
        let _ = writeln!(
            out,
            "  {} -> {} [id={}{style}];",
            quote(q.name(a.src)),
            quote(q.name(a.dst)),
            quote(&a.id)
        );
    }
    out.push_str("}\n");
    out
}
