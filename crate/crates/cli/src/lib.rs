//! Command layer of the `moncat` tool.

mod render;

pub use render::{render_ascii, render_ascii_named, render_dot, render_dot_named};

use std::fmt::Write;
use std::path::Path;

use clap::{Subcommand, ValueEnum};
use moncat_core::contextfree::{cf_language, enumerate_derivations, evaluate_derivation, validate_grammar};
use moncat_core::optics::{optical_contour, raw_representative, regular_representative, verify_representation};
use moncat_core::regular::{accepts, enumerate_regular, grammar_language, pumping_witness};
use moncat_core::signatures::validate_polygraph;
use moncat_core::workspace::{parse_diagram, ItemKind, Workspace};
use moncat_core::{corpus, make_context, Budget, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Ascii,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check every item of the workspace.
    Validate,
    /// Decide whether an automaton accepts a diagram.
    Accept { automaton: String, expr: String },
    /// List the language of an automaton, regular grammar or cfg.
    Enumerate {
        name: String,
        #[arg(long)]
        max_gens: Option<usize>,
        #[arg(long)]
        max_rules: Option<usize>,
    },
    /// List derivations of a cfg with their values.
    Derive {
        cfg: String,
        #[arg(long, default_value_t = 4)]
        max_rules: usize,
    },
    /// Print the optical contour of a cfg's rule signature.
    Contour { cfg: String },
    /// Print the regular representative of a cfg.
    Represent { cfg: String },
    /// Compare a cfg's language with the image of its regular representative.
    Verify {
        cfg: String,
        #[arg(long, default_value_t = 5)]
        bound: usize,
    },
    /// Draw a diagram.
    Render {
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Polygraph of the expression; needed when it fits several.
        #[arg(long)]
        over: Option<String>,
    },
    /// Run the pumping check of a family.
    Pumpcheck { family: String },
}

/// Text to print and the exit status: 0 success, 1 a negative answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn new(text: String, ok: bool) -> Self {
        Output { text, code: if ok { 0 } else { 1 } }
    }
}

/// Reads a workspace file; a bare corpus file name such as `parens.mon`
/// that does not exist on disk falls back to the shipped copy.
pub fn parse_file(path: &Path) -> Result<Workspace> {
    if !path.exists() {
        if let Some(src) = path.to_str().and_then(corpus::source) {
            return Workspace::parse(src);
        }
    }
    Workspace::load(path)
}

fn lines<T>(items: impl IntoIterator<Item = T>, f: impl Fn(&T) -> String) -> String {
    items.into_iter().map(|x| f(&x) + "\n").collect()
}

pub fn run_command(ws: &Workspace, cmd: &Command) -> Result<Output> {
    let budget = Budget::default();
    match cmd {
        Command::Validate => validate(ws),
        Command::Accept { automaton, expr } => {
            let a = ws.automaton(automaton)?;
            let d = parse_diagram(&a.alphabet, expr)?;
            let ok = accepts(a, &d)?;
            Ok(Output::new(format!("{ok}\n"), ok))
        }
        Command::Enumerate { name, max_gens, max_rules } => {
            let (ds, bound): (Vec<_>, _) = match ws.kind_of(name) {
                Some(ItemKind::Automaton) => {
                    let n = max_gens.ok_or_else(|| usage("enumerate an automaton with --max-gens N"))?;
                    (enumerate_regular(ws.automaton(name)?, n, &budget)?.into_iter().collect(), n)
                }
                Some(ItemKind::Regular) => {
                    let n = max_gens.ok_or_else(|| usage("enumerate a regular grammar with --max-gens N"))?;
                    (grammar_language(ws.regular(name)?, n, &budget)?.into_iter().collect(), n)
                }
                Some(ItemKind::Grammar) => {
                    let n = max_rules.ok_or_else(|| usage("enumerate a cfg with --max-rules N"))?;
                    (cf_language(ws.grammar(name)?, n, &budget)?.into_values().collect(), n)
                }
                _ => return Err(Error::UnknownName(name.clone())),
            };
            let mut text = lines(&ds, |d| d.to_string());
            let _ = writeln!(text, "# {} diagrams, bound {bound}", ds.len());
            Ok(Output::new(text, true))
        }
        Command::Derive { cfg, max_rules } => {
            let g = ws.grammar(cfg)?;
            let ds = enumerate_derivations(g, g.start, *max_rules, &budget)?;
            let mut text = String::new();
            for d in &ds {
                let _ = writeln!(text, "{} => {}", d.render(g), evaluate_derivation(g, d)?);
            }
            let _ = writeln!(text, "# {} derivations, bound {max_rules}", ds.len());
            Ok(Output::new(text, true))
        }
        Command::Contour { cfg } => {
            let g = ws.grammar(cfg)?;
            let contour = optical_contour(&raw_representative(g)?.multigraph)?;
            let mut out = Workspace::default();
            push_polygraph(&mut out, &contour.polygraph);
            Ok(Output::new(out.to_string(), true))
        }
        Command::Represent { cfg } => {
            let g = ws.grammar(cfg)?;
            let contour = optical_contour(&raw_representative(g)?.multigraph)?;
            let r = regular_representative(g, &contour)?;
            let mut out = Workspace::default();
            push_polygraph(&mut out, &contour.polygraph);
            out.order.push((ItemKind::Regular, r.name.clone()));
            out.regulars.insert(r.name.clone(), r);
            Ok(Output::new(out.to_string(), true))
        }
        Command::Verify { cfg, bound } => {
            let g = ws.grammar(cfg)?;
            let report = verify_representation(g, *bound, &budget)?;
            let mut text = String::new();
            for d in &report.missing {
                let _ = writeln!(text, "missing {d}");
            }
            for d in &report.extra {
                let _ = writeln!(text, "extra {d}");
            }
            let _ = writeln!(text, "{report}");
            Ok(Output::new(text, report.equal()))
        }
        Command::Render { expr, format, over } => {
            let ctx = match over {
                Some(p) => make_context(ws.polygraph(p)?, &ws.term(p, expr)?)?,
                None => {
                    let mut fits = Vec::new();
                    let mut first_err = None;
                    for p in ws.polygraphs.keys() {
                        match ws.term(p, expr).and_then(|t| make_context(&ws.polygraphs[p], &t)) {
                            Ok(c) => fits.push(c),
                            Err(e) => {
                                first_err.get_or_insert(e);
                            }
                        }
                    }
                    match fits.len() {
                        1 => fits.remove(0),
                        0 => return Err(first_err.unwrap_or_else(|| usage("the workspace has no polygraph"))),
                        _ => return Err(usage("the expression fits several polygraphs; pick one with --over P")),
                    }
                }
            };
            let names = ctx.vars().to_vec();
            let d = ctx.into_diagram();
            let text = match format {
                Format::Dot => render_dot_named(&d, &names),
                Format::Ascii => render_ascii_named(&d, &names),
            };
            Ok(Output::new(text, true))
        }
        Command::Pumpcheck { family } => {
            let fam = ws.family(family)?;
            let member = |d: &moncat_core::Diagram| ws.member(fam, d).unwrap_or(false);
            let report = pumping_witness(&member, fam.k, &|n| fam.factorization(n), fam.max)?;
            let mut text = String::new();
            for (n, cases) in &report.cases {
                for v in cases {
                    let a = v.a.map_or("none".to_string(), |a| a.to_string());
                    let _ = writeln!(text, "n={n} cut=({},{}) leaves at exponent {a}", v.i, v.j);
                }
            }
            for n in &report.too_wide {
                let _ = writeln!(text, "n={n} wider than k={}", fam.k);
            }
            let ok = report.witness_found();
            let _ = writeln!(
                text,
                "PUMPCHECK {} k={} max={} pairs={} witness={ok}",
                fam.name,
                fam.k,
                fam.max,
                report.pairs_checked()
            );
            Ok(Output::new(text, ok))
        }
    }
}

fn usage(msg: &str) -> Error {
    Error::Syntax { line: 0, col: 0, msg: msg.to_string() }
}

fn push_polygraph(ws: &mut Workspace, p: &std::sync::Arc<moncat_core::Polygraph>) {
    ws.order.push((ItemKind::Polygraph, p.name.clone()));
    ws.polygraphs.insert(p.name.clone(), p.clone());
}

fn validate(ws: &Workspace) -> Result<Output> {
    let mut text = String::new();
    let mut ok = true;
    let mut report = |kind: ItemKind, name: &str, errs: Vec<String>| {
        if errs.is_empty() {
            let _ = writeln!(text, "ok {} {name}", kind.keyword());
        } else {
            ok = false;
            for e in errs {
                let _ = writeln!(text, "error {} {name}: {e}", kind.keyword());
            }
        }
    };
    let strings = |r: std::result::Result<(), Vec<Error>>| r.err().unwrap_or_default().iter().map(|e| e.to_string()).collect();
    for (kind, name) in &ws.order {
        let errs = match kind {
            ItemKind::Polygraph => strings(validate_polygraph(&ws.polygraphs[name])),
            ItemKind::Multigraph => strings(ws.multigraphs[name].validate()),
            ItemKind::Automaton => strings(ws.automata[name].validate().map_err(|e| vec![e])),
            ItemKind::Grammar => strings(validate_grammar(&ws.grammars[name])),
            ItemKind::Regular | ItemKind::Family => Vec::new(),
        };
        report(*kind, name, errs);
    }
    Ok(Output::new(text, ok))
}
