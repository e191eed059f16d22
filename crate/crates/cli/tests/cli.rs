use std::io::Write as _;
use std::process::Command as Proc;

use moncat_cli::{render_dot, run_command, Command};
use moncat_core::contextfree::cf_language;
use moncat_core::corpus;
use moncat_core::regular::enumerate_regular;
use moncat_core::Budget;

fn moncat(args: &[&str]) -> (String, String, i32) {
    moncat_env(args, None)
}

fn moncat_env(args: &[&str], work: Option<&str>) -> (String, String, i32) {
    let mut p = Proc::new(env!("CARGO_BIN_EXE_moncat"));
    p.args(args).env_remove("MONCAT_MAX_WORK");
    if let Some(w) = work {
        p.env("MONCAT_MAX_WORK", w);
    }
    let out = p.output().unwrap();
    let text = |b: Vec<u8>| String::from_utf8(b).unwrap();
    (text(out.stdout), text(out.stderr), out.status.code().unwrap())
}

/// Recogniser for the DOT language: graphs, subgraphs, node, edge and
/// attribute statements, IDs that are words, numerals or quoted strings.
mod dot {
    #[derive(Debug, PartialEq)]
    enum Tok {
        Id(String),
        Sym(char),
        Arrow,
    }

    fn lex(s: &str) -> Result<Vec<Tok>, String> {
        let cs: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < cs.len() {
            let c = cs[i];
            if c.is_whitespace() {
                i += 1;
            } else if "{}[]=;,:".contains(c) {
                out.push(Tok::Sym(c));
                i += 1;
            } else if c == '-' && cs.get(i + 1) == Some(&'>') {
                out.push(Tok::Arrow);
                i += 2;
            } else if c == '"' {
                let mut v = String::new();
                i += 1;
                loop {
                    match cs.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => {
                            v.push(*cs.get(i + 1).ok_or("dangling escape")?);
                            i += 2;
                        }
                        Some(&x) => {
                            v.push(x);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id(v));
            } else if c.is_alphanumeric() || c == '_' || c == '.' {
                let start = i;
                while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                    i += 1;
                }
                let w: String = cs[start..i].iter().collect();
                let numeral = w.chars().all(|x| x.is_ascii_digit() || x == '.');
                let word = !w.starts_with(|x: char| x.is_ascii_digit()) && !w.contains('.');
                if !numeral && !word {
                    return Err(format!("bad id `{w}`"));
                }
                out.push(Tok::Id(w));
            } else {
                return Err(format!("unexpected `{c}`"));
            }
        }
        Ok(out)
    }

    struct P {
        t: Vec<Tok>,
        i: usize,
    }

    impl P {
        fn peek(&self) -> Option<&Tok> {
            self.t.get(self.i)
        }
        fn sym(&mut self, c: char) -> bool {
            if self.peek() == Some(&Tok::Sym(c)) {
                self.i += 1;
                true
            } else {
                false
            }
        }
        fn expect(&mut self, c: char) -> Result<(), String> {
            if self.sym(c) {
                Ok(())
            } else {
                Err(format!("expected `{c}` at token {}", self.i))
            }
        }
        fn id(&mut self) -> Result<String, String> {
            match self.peek() {
                Some(Tok::Id(s)) => {
                    let s = s.clone();
                    self.i += 1;
                    Ok(s)
                }
                _ => Err(format!("expected id at token {}", self.i)),
            }
        }
        fn keyword(&self, k: &str) -> bool {
            matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(k))
        }
        fn attr_list(&mut self) -> Result<(), String> {
            while self.sym('[') {
                while !self.sym(']') {
                    self.id()?;
                    self.expect('=')?;
                    self.id()?;
                    let _ = self.sym(',') || self.sym(';');
                }
            }
            Ok(())
        }
        fn node_id(&mut self) -> Result<(), String> {
            self.id()?;
            if self.sym(':') {
                self.id()?;
                if self.sym(':') {
                    self.id()?;
                }
            }
            Ok(())
        }
        fn operand(&mut self) -> Result<(), String> {
            if self.keyword("subgraph") || self.peek() == Some(&Tok::Sym('{')) {
                self.subgraph()
            } else {
                self.node_id()
            }
        }
        fn subgraph(&mut self) -> Result<(), String> {
            if self.keyword("subgraph") {
                self.i += 1;
                if matches!(self.peek(), Some(Tok::Id(_))) {
                    self.id()?;
                }
            }
            self.expect('{')?;
            self.stmts()?;
            self.expect('}')
        }
        fn stmts(&mut self) -> Result<(), String> {
            while self.peek().is_some() && self.peek() != Some(&Tok::Sym('}')) {
                self.stmt()?;
                self.sym(';');
            }
            Ok(())
        }
        fn stmt(&mut self) -> Result<(), String> {
            if self.keyword("graph") || self.keyword("node") || self.keyword("edge") {
                self.i += 1;
                return self.attr_list();
            }
            if matches!(self.peek(), Some(Tok::Id(_))) && self.t.get(self.i + 1) == Some(&Tok::Sym('=')) {
                self.id()?;
                self.i += 1;
                return self.id().map(|_| ());
            }
            self.operand()?;
            while self.peek() == Some(&Tok::Arrow) {
                self.i += 1;
                self.operand()?;
            }
            self.attr_list()
        }
    }

    pub fn check(s: &str) -> Result<(), String> {
        let mut p = P { t: lex(s)?, i: 0 };
        if p.keyword("strict") {
            p.i += 1;
        }
        if !p.keyword("digraph") {
            return Err("expected digraph".into());
        }
        p.i += 1;
        if matches!(p.peek(), Some(Tok::Id(_))) {
            p.id()?;
        }
        p.expect('{')?;
        p.stmts()?;
        p.expect('}')?;
        if p.i != p.t.len() {
            return Err("trailing tokens".into());
        }
        Ok(())
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(check("digraph { a -> b; }").is_ok());
        assert!(check("digraph { a -> ; }").is_err());
        assert!(check("digraph { a [label=\"x] }").is_err());
        assert!(check("graph { a }").is_err());
        assert!(check("digraph { a } }").is_err());
    }
}

#[test]
fn accept_answers_with_exit_codes() {
    assert_eq!(moncat(&["accept", "parensAut", "open ; close"]), ("true\n".into(), String::new(), 0));
    let (out, _, code) = moncat(&["accept", "parensAut", "open"]);
    assert_eq!((out.as_str(), code), ("false\n", 1));
    let (_, err, code) = moncat(&["accept", "parensAut", "open ; nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn verify_reports_equality() {
    let (out, _, code) = moncat(&["verify", "unbraids", "--bound", "5"]);
    assert_eq!(code, 0);
    assert!(out.lines().last().unwrap().starts_with("VERIFY unbraids bound=5 equal=true"));
}

#[test]
fn outputs_are_deterministic() {
    let runs: [&[&str]; 7] = [
        &["render", "over ; under", "--over", "braid", "--format", "ascii"],
        &["render", "over ; under", "--over", "braid", "--format", "dot"],
        &["enumerate", "unbraids", "--max-rules", "5"],
        &["enumerate", "sierpinskiAut", "--max-gens", "4"],
        &["derive", "programs", "--max-rules", "4"],
        &["represent", "combs"],
        &["pumpcheck", "unbraidPump"],
    ];
    for args in runs {
        let first = moncat(args);
        assert_eq!(first.2, 0, "{args:?}: {}", first.1);
        assert!(!first.0.is_empty());
        assert_eq!(moncat(args), first, "{args:?}");
    }
}

#[test]
fn rendered_graphs_are_valid_dot() {
    let ws = corpus::all().unwrap();
    let budget = Budget::new(10_000_000);
    let mut diagrams = Vec::new();
    for a in ws.automata.values() {
        diagrams.extend(enumerate_regular(a, 4, &budget).unwrap());
    }
    for g in ws.grammars.values() {
        diagrams.extend(cf_language(g, 4, &budget).unwrap().into_values());
        for r in &g.rules {
            diagrams.push(r.body.diagram().clone());
        }
    }
    assert!(diagrams.len() > 20);
    for d in &diagrams {
        let s = render_dot(d);
        dot::check(&s).unwrap_or_else(|e| panic!("{e}\n{s}"));
        let boxes = s.matches("shape=box").count();
        assert_eq!(boxes, d.slices().len());
        assert_eq!(s.matches("lightgrey").count(), d.holes().len());
    }
    let (s, _, _) = moncat(&["render", "[x : w -> w w] ; close", "--over", "parens", "--format", "dot"]);
    dot::check(&s).unwrap();
    assert!(s.contains("label=\"x\""));
}

#[test]
fn files_and_errors() {
    let mut empty = tempfile::NamedTempFile::new().unwrap();
    assert_eq!(moncat(&["-f", empty.path().to_str().unwrap(), "validate"]), (String::new(), String::new(), 0));
    writeln!(empty, "polygraph p {{\n  sorts: w;\n  gen a : w -> v;\n}}").unwrap();
    let (_, err, code) = moncat(&["-f", empty.path().to_str().unwrap(), "validate"]);
    assert_eq!(code, 2);
    assert!(err.contains('3') && err.contains('v'), "{err}");

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus/parens.mon");
    let (out, _, code) = moncat(&["-f", path, "validate"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 5);
    assert_eq!(moncat(&["-f", "parens.mon", "validate"]).0, out);
    let (_, _, code) = moncat(&["-f", path, "render", "open"]);
    assert_eq!(code, 0);
    assert_eq!(moncat(&["-f", path, "render", "id[S]"]).2, 0);
    assert_eq!(moncat(&["render", "id[w]"]).2, 2);
    assert_eq!(moncat(&["enumerate", "parensAut"]).2, 2);
    assert_eq!(moncat(&["bogus"]).2, 2);
}

#[test]
fn work_limit_is_honoured() {
    let (_, err, code) = moncat_env(&["enumerate", "unbraids", "--max-rules", "9"], Some("50"));
    assert_eq!(code, 2);
    assert!(err.contains("50"), "{err}");
    let (_, _, code) = moncat_env(&["enumerate", "unbraids", "--max-rules", "3"], Some("1000000"));
    assert_eq!(code, 0);
}

#[test]
fn library_commands_match_the_binary() {
    let ws = corpus::all().unwrap();
    let cmd = Command::Contour { cfg: "parensCF".into() };
    let out = run_command(&ws, &cmd).unwrap();
    assert_eq!(out.code, 0);
    assert_eq!(moncat(&["contour", "parensCF"]).0, out.text);
    let back = moncat_core::workspace::Workspace::parse(&out.text).unwrap();
    assert_eq!(back.polygraphs.len(), 1);
    let rep = run_command(&ws, &Command::Represent { cfg: "unbraids".into() }).unwrap();
    let back = moncat_core::workspace::Workspace::parse(&rep.text).unwrap();
    assert_eq!(back.to_string(), rep.text);
}
