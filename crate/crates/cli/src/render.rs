//! Graphviz and plain-text pictures of diagrams.

use std::fmt::Write;

use moncat_core::{Diagram, Label};

fn default_names(d: &Diagram) -> Vec<String> {
    (0..d.holes().len()).map(|h| format!("#{h}")).collect()
}

fn box_label(d: &Diagram, label: Label, holes: &[String]) -> String {
    match label {
        Label::Gen(_) => d.label_name(label),
        Label::Hole(h) => holes.get(h as usize).cloned().unwrap_or_else(|| format!("#{h}")),
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// One box per slice, one edge per wire segment, the boundary on its own ranks.
pub fn render_dot(d: &Diagram) -> String {
    render_dot_named(d, &default_names(d))
}

pub fn render_dot_named(d: &Diagram, holes: &[String]) -> String {
    let mut s = String::new();
    s.push_str("digraph diagram {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n");
    s.push_str("  { rank=source;");
    for (i, x) in d.dom().iter().enumerate() {
        let _ = write!(s, " in{i} [shape=plaintext, label={}];", quote(x.name()));
    }
    s.push_str(" }\n");
    let mut frontier: Vec<String> = (0..d.dom().len()).map(|i| format!("in{i}")).collect();
    let mut edges = Vec::new();
    let frontiers = d.frontiers();
    for (t, sl) in d.slices().iter().enumerate() {
        let node = format!("n{t}");
        let text = quote(&box_label(d, sl.label, holes));
        match sl.label {
            Label::Gen(_) => {
                let _ = writeln!(s, "  {node} [shape=box, label={text}];");
            }
            Label::Hole(_) => {
                let _ = writeln!(s, "  {node} [shape=box, style=filled, fillcolor=lightgrey, label={text}];");
            }
        }
        let (input, output) = d.label_interface(sl.label);
        let (k, out) = (input.len(), output.len());
        let before = &frontiers[t];
        for (i, src) in frontier.drain(sl.left..sl.left + k).enumerate() {
            edges.push((src, node.clone(), before[sl.left + i].name().to_string()));
        }
        let fresh = (0..out).map(|_| node.clone());
        frontier.splice(sl.left..sl.left, fresh);
    }
    s.push_str("  { rank=sink;");
    for (i, x) in d.cod().iter().enumerate() {
        let _ = write!(s, " out{i} [shape=plaintext, label={}];", quote(x.name()));
    }
    s.push_str(" }\n");
    for (i, (src, x)) in frontier.into_iter().zip(d.cod()).enumerate() {
        edges.push((src, format!("out{i}"), x.name().to_string()));
    }
    for (a, b, x) in edges {
        let _ = writeln!(s, "  {a} -> {b} [label={}];", quote(&x));
    }
    s.push_str("}\n");
    s
}

/// Wires as columns of `|`, one boxed row per slice, sorts at both ends.
pub fn render_ascii(d: &Diagram) -> String {
    render_ascii_named(d, &default_names(d))
}

pub fn render_ascii_named(d: &Diagram, holes: &[String]) -> String {
    let span = |t: usize| {
        let (i, o) = d.label_interface(d.slices()[t].label);
        i.len().max(o.len()).max(1)
    };
    let mut cell = 4;
    for (t, sl) in d.slices().iter().enumerate() {
        let need = box_label(d, sl.label, holes).chars().count() + 3;
        cell = cell.max(need.div_ceil(span(t)));
    }
    for x in d.dom().iter().chain(d.cod()) {
        cell = cell.max(x.name().chars().count() + 1);
    }
    let pad = |s: &str, w: usize| format!("{s:<w$}");
    let sorts = |w: &[moncat_core::Sort]| w.iter().map(|x| pad(x.name(), cell)).collect::<String>();
    let wires = |n: usize| pad("|", cell).repeat(n);
    let mut lines = vec![sorts(d.dom()), wires(d.dom().len())];
    let frontiers = d.frontiers();
    for (t, sl) in d.slices().iter().enumerate() {
        let width = span(t) * cell - 1;
        let name = box_label(d, sl.label, holes);
        let (open, close) = match sl.label {
            Label::Gen(_) => ('[', ']'),
            Label::Hole(_) => ('{', '}'),
        };
        let inner = format!("{name:^w$}", w = width - 2);
        lines.push(format!("{}{open}{inner}{close} {}", wires(sl.left), wires(sl.right)));
        lines.push(wires(frontiers[t + 1].len()));
    }
    lines.push(sorts(d.cod()));
    let mut out = String::new();
    for l in lines {
        out.push_str(l.trim_end());
        out.push('\n');
    }
    out
}
