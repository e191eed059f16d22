use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use super::{Family, FamilyItem, ItemKind, Membership, Workspace};
use crate::contextfree::{validate_grammar, CFMonoidalGrammar};
use crate::diagrams::{make_context, Diagram, HoleType, Term};
use crate::error::{Error, Result};
use crate::regular::{MonoidalAutomaton, RegularMonoidalGrammar};
use crate::signatures::{Doctrine, Multigraph, Operation, Polygraph, PolygraphMorphism, Sort, Word};

fn syntax(t: (usize, usize), msg: impl Into<String>) -> Error {
    Error::Syntax { line: t.0, col: t.1, msg: msg.into() }
}

fn located(t: (usize, usize), e: Error) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => syntax(t, other.to_string()),
    }
}

fn joined(t: (usize, usize), errs: Vec<Error>) -> Error {
    syntax(t, errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], end: (usize, usize)) -> Self {
        Cursor { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn next(&mut self) -> Result<&'a Token> {
        let t = self.toks.get(self.pos).ok_or_else(|| syntax(self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self, s: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_ident(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        let at = self.here();
        let t = self.next()?;
        if t.is_sym(s) {
            Ok(())
        } else {
            Err(syntax(at, format!("expected `{s}`, found {}", t.describe())))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let at = self.here();
        match &self.next()?.tok {
            Tok::Ident(s) => Ok(s.clone()),
            Tok::Sym(s) => Err(syntax(at, format!("expected a name, found `{s}`"))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        let at = self.here();
        let s = self.ident()?;
        s.parse().map_err(|_| syntax(at, format!("expected a number, found `{s}`")))
    }

    /// Names up to `stop`, which is consumed; commas between them are allowed.
    fn names_until(&mut self, stop: &str) -> Result<Vec<(String, (usize, usize))>> {
        let mut out = Vec::new();
        loop {
            if self.eat_sym(stop) {
                return Ok(out);
            }
            if self.eat_sym(",") {
                continue;
            }
            let at = self.here();
            out.push((self.ident()?, at));
        }
    }

    /// A generator reference: `name` or `name[a, b]`.
    fn gen_name(&mut self) -> Result<String> {
        let head = self.ident()?;
        if !self.eat_sym("[") {
            return Ok(head);
        }
        let args: Vec<String> = self.names_until("]")?.into_iter().map(|(s, _)| s).collect();
        Ok(format!("{head}[{}]", args.join(",")))
    }
}

fn sort_word(sig: &Polygraph, names: &[(String, (usize, usize))]) -> Result<Word> {
    names
        .iter()
        .map(|(n, at)| {
            let s = Sort::new(n);
            if sig.has_sort(&s) {
                Ok(s)
            } else {
                Err(syntax(*at, format!("undeclared sort `{n}`")))
            }
        })
        .collect()
}

struct ExprParser<'a, F> {
    sig: &'a Arc<Polygraph>,
    hole: F,
}

impl<F: FnMut(&str, Option<HoleType>, (usize, usize)) -> Result<Term>> ExprParser<'_, F> {
    fn seq(&mut self, c: &mut Cursor) -> Result<Term> {
        let mut t = self.par(c)?;
        while c.eat_sym(";") {
            t = Term::seq(t, self.par(c)?);
        }
        Ok(t)
    }

    fn par(&mut self, c: &mut Cursor) -> Result<Term> {
        let mut t = self.atom(c)?;
        while c.eat_sym("*") {
            t = Term::par(t, self.atom(c)?);
        }
        Ok(t)
    }

    fn atom(&mut self, c: &mut Cursor) -> Result<Term> {
        let at = c.here();
        if c.eat_sym("(") {
            let t = self.seq(c)?;
            c.expect_sym(")")?;
            return Ok(t);
        }
        if c.eat_sym("[") {
            let name = c.ident()?;
            let ty = if c.eat_sym(":") {
                let dom = sort_word(self.sig, &c.names_until("->")?)?;
                let cod = sort_word(self.sig, &c.names_until("]")?)?;
                Some(HoleType { dom, cod })
            } else {
                c.expect_sym("]")?;
                None
            };
            return (self.hole)(&name, ty, at);
        }
        if c.peek().is_some_and(|t| t.is_ident("id")) && c.peek_at(1).is_some_and(|t| t.is_sym("[")) {
            c.pos += 2;
            return Ok(Term::Id(sort_word(self.sig, &c.names_until("]")?)?));
        }
        let name = c.gen_name()?;
        self.sig.lookup(&name).map(Term::Gen).ok_or_else(|| syntax(at, format!("unknown generator `{name}`")))
    }
}

fn parse_expr<F>(sig: &Arc<Polygraph>, c: &mut Cursor, hole: F) -> Result<Term>
where
    F: FnMut(&str, Option<HoleType>, (usize, usize)) -> Result<Term>,
{
    let at = c.here();
    let t = ExprParser { sig, hole }.seq(c)?;
    if !c.done() {
        return Err(syntax(c.here(), format!("unexpected {}", c.peek().expect("not done").describe())));
    }
    t.interface(sig).map_err(|e| located(at, e))?;
    Ok(t)
}

fn inline_holes(name: &str, ty: Option<HoleType>, at: (usize, usize)) -> Result<Term> {
    let ty = ty.ok_or_else(|| syntax(at, format!("hole `{name}` needs a type `[{name} : .. -> ..]`")))?;
    Ok(Term::Hole { var: name.to_string(), ty })
}

/// Parses an expression such as `id[w] * open ; close` over `sig`.
pub fn parse_term(sig: &Arc<Polygraph>, src: &str) -> Result<Term> {
    let toks = lex(src)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut c = Cursor::new(&toks, end);
    if c.done() {
        return Err(syntax(end, "empty expression"));
    }
    parse_expr(sig, &mut c, inline_holes)
}

/// Parses an expression and builds its diagram, keeping the written slice order.
pub fn parse_diagram(sig: &Arc<Polygraph>, src: &str) -> Result<Diagram> {
    let t = parse_term(sig, src)?;
    make_context(sig, &t).map_err(|e| located((1, 1), e))?;
    t.to_diagram(sig).map_err(|e| located((1, 1), e))
}

pub(crate) fn parse_workspace(src: &str) -> Result<Workspace> {
    let toks = lex(src)?;
    let end = toks.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
    let mut c = Cursor::new(&toks, end);
    let mut ws = Workspace::default();
    while !c.done() {
        let at = c.here();
        let kw = c.ident()?;
        let name_at = c.here();
        let name = c.ident()?;
        if ws.kind_of(&name).is_some() {
            return Err(syntax(name_at, format!("duplicate name `{name}`")));
        }
        let kind = match kw.as_str() {
            "polygraph" => {
                let p = polygraph_block(&mut c, &name, name_at)?;
                ws.polygraphs.insert(name.clone(), p);
                ItemKind::Polygraph
            }
            "multigraph" => {
                let m = multigraph_block(&mut c, &name, name_at)?;
                ws.multigraphs.insert(name.clone(), m);
                ItemKind::Multigraph
            }
            "automaton" => {
                let sig = over(&mut c, &ws)?;
                let a = automaton_block(&mut c, &name, sig, name_at)?;
                ws.automata.insert(name.clone(), a);
                ItemKind::Automaton
            }
            "cfg" => {
                let sig = over(&mut c, &ws)?;
                let g = grammar_block(&mut c, &name, sig, name_at)?;
                ws.grammars.insert(name.clone(), g);
                ItemKind::Grammar
            }
            "regular" => {
                let r = regular_block(&mut c, &name, &ws, name_at)?;
                ws.regulars.insert(name.clone(), r);
                ItemKind::Regular
            }
            "family" => {
                let sig = over(&mut c, &ws)?;
                let f = family_block(&mut c, &name, sig, &ws)?;
                ws.families.insert(name.clone(), f);
                ItemKind::Family
            }
            other => return Err(syntax(at, format!("unknown block `{other}`"))),
        };
        ws.order.push((kind, name));
    }
    Ok(ws)
}

fn over(c: &mut Cursor, ws: &Workspace) -> Result<Arc<Polygraph>> {
    let at = c.here();
    if !c.eat_ident("over") {
        return Err(syntax(at, "expected `over`"));
    }
    polygraph_ref(c, ws)
}

fn polygraph_ref(c: &mut Cursor, ws: &Workspace) -> Result<Arc<Polygraph>> {
    let at = c.here();
    let p = c.ident()?;
    ws.polygraphs.get(&p).cloned().ok_or_else(|| syntax(at, format!("unknown polygraph `{p}`")))
}

fn field(c: &mut Cursor, key: &str) -> Result<bool> {
    if c.peek().is_some_and(|t| t.is_ident(key)) && c.peek_at(1).is_some_and(|t| t.is_sym(":")) {
        c.pos += 2;
        Ok(true)
    } else {
        Ok(false)
    }
}

fn polygraph_block(c: &mut Cursor, name: &str, name_at: (usize, usize)) -> Result<Arc<Polygraph>> {
    let mut p = Polygraph::new(name);
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if field(c, "doctrine")? {
            let d = c.ident()?;
            p.doctrine = Doctrine::from_keyword(&d).ok_or_else(|| syntax(at, format!("unknown doctrine `{d}`")))?;
            c.expect_sym(";")?;
        } else if field(c, "sorts")? {
            for (s, _) in c.names_until(";")? {
                p.add_sort(Sort::new(&s));
            }
        } else if c.eat_ident("gen") {
            let g = c.ident()?;
            c.expect_sym(":")?;
            let dom = sort_word(&p, &c.names_until("->")?)?;
            let cod = sort_word(&p, &c.names_until(";")?)?;
            p.add_generator(&g, dom, cod);
        } else {
            return Err(syntax(at, format!("unexpected {} in polygraph", c.next()?.describe())));
        }
    }
    p.build().map_err(|e| joined(name_at, e))
}

fn multigraph_block(c: &mut Cursor, name: &str, name_at: (usize, usize)) -> Result<Multigraph> {
    let mut m = Multigraph::new(name);
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if field(c, "sorts")? {
            m.sorts.extend(c.names_until(";")?.into_iter().map(|(s, _)| Sort::new(&s)));
        } else if c.eat_ident("op") {
            let op = c.ident()?;
            c.expect_sym(":")?;
            let inputs = c.names_until("->")?.into_iter().map(|(s, _)| Sort::new(&s)).collect();
            let output = Sort::new(&c.ident()?);
            c.expect_sym(";")?;
            m.ops.push(Operation { name: op, inputs, output });
        } else {
            return Err(syntax(at, format!("unexpected {} in multigraph", c.next()?.describe())));
        }
    }
    m.validate().map_err(|e| joined(name_at, e))?;
    Ok(m)
}

fn state_word(a: &MonoidalAutomaton, names: &[(String, (usize, usize))]) -> Result<Vec<usize>> {
    names.iter().map(|(n, at)| a.state(n).map_err(|e| located(*at, e))).collect()
}

fn automaton_block(
    c: &mut Cursor,
    name: &str,
    sig: Arc<Polygraph>,
    name_at: (usize, usize),
) -> Result<MonoidalAutomaton> {
    let default_sort = match sig.sorts() {
        [s] => Some(s.clone()),
        _ => None,
    };
    let mut a = MonoidalAutomaton::new(name, sig.clone(), &[], &Sort::new(""));
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if field(c, "states")? {
            while !c.eat_sym(";") {
                let s_at = c.here();
                let s = c.ident()?;
                let sort = if c.eat_sym(":") {
                    Sort::new(&c.ident()?)
                } else {
                    default_sort.clone().ok_or_else(|| syntax(s_at, format!("state `{s}` needs a sort")))?
                };
                if !sig.has_sort(&sort) {
                    return Err(syntax(s_at, format!("undeclared sort `{sort}`")));
                }
                if a.states.contains(&s) {
                    return Err(syntax(s_at, format!("duplicate state `{s}`")));
                }
                a.states.push(s);
                a.state_sorts.push(sort);
                c.eat_sym(",");
            }
        } else if field(c, "init")? {
            a.initial = state_word(&a, &c.names_until(";")?)?;
        } else if field(c, "final")? {
            a.final_ = state_word(&a, &c.names_until(";")?)?;
        } else {
            let g = c.gen_name()?;
            let id = sig.lookup(&g).ok_or_else(|| syntax(at, format!("unknown generator `{g}`")))?;
            c.expect_sym(":")?;
            let from = state_word(&a, &c.names_until("->")?)?;
            let to = state_word(&a, &c.names_until(";")?)?;
            a.transitions.entry(id).or_default().insert((from, to));
        }
    }
    a.validate().map_err(|e| located(name_at, e))?;
    Ok(a)
}

/// Index just past the `;` that ends a rule body.
fn body_end(c: &Cursor) -> Result<usize> {
    let mut depth = 0usize;
    let mut i = c.pos;
    while let Some(t) = c.toks.get(i) {
        if t.is_sym("[") || t.is_sym("(") {
            depth += 1;
        } else if t.is_sym("]") || t.is_sym(")") {
            depth = depth.saturating_sub(1);
        } else if depth == 0 && t.is_sym(";") {
            let next = c.toks.get(i + 1);
            if next.is_none_or(|n| n.is_sym("}") || n.is_ident("rule") || n.is_ident("nt") || n.is_ident("start")) {
                return Ok(i + 1);
            }
        } else if depth == 0 && t.is_sym("}") {
            return Err(syntax((t.line, t.col), "rule body must end with `;`"));
        }
        i += 1;
    }
    Err(syntax(c.end, "unterminated rule body"))
}

fn grammar_block(
    c: &mut Cursor,
    name: &str,
    sig: Arc<Polygraph>,
    name_at: (usize, usize),
) -> Result<CFMonoidalGrammar> {
    let mut g = CFMonoidalGrammar::new(name, sig.clone());
    let mut start = None;
    let mut rules = Vec::new();
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if c.eat_ident("nt") {
            let n = c.ident()?;
            c.expect_sym(":")?;
            let dom = sort_word(&sig, &c.names_until("->")?)?;
            let cod = sort_word(&sig, &c.names_until(";")?)?;
            g.add_nonterminal(&n, HoleType { dom, cod }).map_err(|e| located(at, e))?;
        } else if c.eat_ident("start") {
            start = Some((c.ident()?, at));
            c.expect_sym(";")?;
        } else if c.eat_ident("rule") {
            let r = c.ident()?;
            c.expect_sym(":")?;
            let lhs = (c.ident()?, at);
            c.expect_sym(":=")?;
            let end = body_end(c)?;
            let body = &c.toks[c.pos..end - 1];
            let body_at = c.here();
            c.pos = end;
            rules.push((r, lhs, body, body_at));
        } else {
            return Err(syntax(at, format!("unexpected {} in cfg", c.next()?.describe())));
        }
    }
    if g.nonterminals.is_empty() {
        return Err(syntax(name_at, "a cfg needs at least one nonterminal"));
    }
    if let Some((s, at)) = start {
        g.start = g.nonterminal(&s).map_err(|e| located(at, e))?;
    }
    for (r, (lhs, lhs_at), body, body_at) in rules {
        let lhs = g.nonterminal(&lhs).map_err(|e| located(lhs_at, e))?;
        let mut args: Vec<usize> = Vec::new();
        let term = {
            let nts = &g.nonterminals;
            let mut hole = |n: &str, ty: Option<HoleType>, at: (usize, usize)| -> Result<Term> {
                if ty.is_some() {
                    return Err(syntax(at, "grammar holes are typed by their nonterminal"));
                }
                let a = nts.iter().position(|x| x.name == n).ok_or_else(|| syntax(at, format!("unknown nonterminal `{n}`")))?;
                args.push(a);
                Ok(Term::Hole { var: format!("x{}", args.len() - 1), ty: nts[a].interface.clone() })
            };
            let mut bc = Cursor::new(body, body_at);
            if bc.done() {
                return Err(syntax(body_at, "empty rule body"));
            }
            parse_expr(&sig, &mut bc, &mut hole)?
        };
        let ctx = make_context(&sig, &term).map_err(|e| located(body_at, e))?;
        // Holes were named `x{k}` in textual order; the context reorders them.
        let ordered = ctx.vars().iter().map(|v| args[v[1..].parse::<usize>().expect("generated name")]).collect();
        g.add_rule(&r, lhs, ordered, ctx).map_err(|e| located(body_at, e))?;
    }
    validate_grammar(&g).map_err(|e| joined(name_at, e))?;
    Ok(g)
}

fn regular_block(c: &mut Cursor, name: &str, ws: &Workspace, name_at: (usize, usize)) -> Result<RegularMonoidalGrammar> {
    c.expect_sym(":")?;
    let q = polygraph_ref(c, ws)?;
    c.expect_sym("->")?;
    let p = polygraph_ref(c, ws)?;
    let mut sort_map: BTreeMap<Sort, Sort> = BTreeMap::new();
    let mut gen_map = BTreeMap::new();
    let (mut init, mut fin) = (Vec::new(), Vec::new());
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if field(c, "init")? {
            init = sort_word(&q, &c.names_until(";")?)?;
        } else if field(c, "final")? {
            fin = sort_word(&q, &c.names_until(";")?)?;
        } else if c.eat_ident("sort") {
            let a = sort_word(&q, &[(c.ident()?, at)])?;
            c.expect_sym("=>")?;
            let b_at = c.here();
            let b = sort_word(&p, &[(c.ident()?, b_at)])?;
            c.expect_sym(";")?;
            sort_map.insert(a[0].clone(), b[0].clone());
        } else if c.eat_ident("gen") {
            let a = c.gen_name()?;
            let ia = q.lookup(&a).ok_or_else(|| syntax(at, format!("unknown generator `{a}`")))?;
            c.expect_sym("=>")?;
            let b_at = c.here();
            let b = c.gen_name()?;
            let ib = p.lookup(&b).ok_or_else(|| syntax(b_at, format!("unknown generator `{b}`")))?;
            c.expect_sym(";")?;
            gen_map.insert(ia, ib);
        } else {
            return Err(syntax(at, format!("unexpected {} in regular", c.next()?.describe())));
        }
    }
    for s in q.sorts() {
        if !sort_map.contains_key(s) {
            if !p.has_sort(s) {
                return Err(syntax(name_at, format!("no image for sort `{s}`")));
            }
            sort_map.insert(s.clone(), s.clone());
        }
    }
    let mut gens = Vec::new();
    for id in q.gen_ids() {
        let img = match gen_map.get(&id) {
            Some(&x) => x,
            None => {
                let n = &q.gen(id).name;
                p.lookup(n).ok_or_else(|| syntax(name_at, format!("no image for generator `{n}`")))?
            }
        };
        gens.push(img);
    }
    let psi = PolygraphMorphism::new(q, p, sort_map, gens).map_err(|e| located(name_at, e))?;
    RegularMonoidalGrammar::new(name, psi, init, fin).map_err(|e| located(name_at, e))
}

fn family_block(c: &mut Cursor, name: &str, sig: Arc<Polygraph>, ws: &Workspace) -> Result<Family> {
    let (mut items, mut member, mut k, mut max) = (None, None, 2, 6);
    c.expect_sym("{")?;
    while !c.eat_sym("}") {
        let at = c.here();
        if field(c, "factors")? {
            let mut list = Vec::new();
            while !c.eat_sym(";") {
                list.push(family_item(c, &sig)?);
            }
            items = Some(list);
        } else if field(c, "member")? {
            let kind_at = c.here();
            let kind = c.ident()?;
            member = Some(match kind.as_str() {
                "balanced" => {
                    let mut g = || -> Result<_> {
                        let g_at = c.here();
                        let n = c.gen_name()?;
                        sig.lookup(&n).ok_or_else(|| syntax(g_at, format!("unknown generator `{n}`")))
                    };
                    let a = g()?;
                    let b = g()?;
                    Membership::Balanced(a, b)
                }
                "automaton" => {
                    let x_at = c.here();
                    let x = c.ident()?;
                    if !ws.automata.contains_key(&x) {
                        return Err(syntax(x_at, format!("unknown automaton `{x}`")));
                    }
                    Membership::Automaton(x)
                }
                other => return Err(syntax(kind_at, format!("unknown membership `{other}`"))),
            });
            c.expect_sym(";")?;
        } else if field(c, "k")? {
            k = c.number()?;
            c.expect_sym(";")?;
        } else if field(c, "max")? {
            max = c.number()?;
            c.expect_sym(";")?;
        } else {
            return Err(syntax(at, format!("unexpected {} in family", c.next()?.describe())));
        }
    }
    let items = items.ok_or_else(|| syntax(c.here(), format!("family `{name}` has no factors")))?;
    let member = member.ok_or_else(|| syntax(c.here(), format!("family `{name}` has no member test")))?;
    Ok(Family { name: name.to_string(), polygraph: sig, items, member, k, max })
}

fn family_item(c: &mut Cursor, sig: &Arc<Polygraph>) -> Result<FamilyItem> {
    let at = c.here();
    if c.eat_sym("(") {
        let start = c.pos;
        let mut depth = 1;
        while depth > 0 {
            let t = c.next()?;
            if t.is_sym("(") {
                depth += 1;
            } else if t.is_sym(")") {
                depth -= 1;
            }
        }
        let mut inner = Cursor::new(&c.toks[start..c.pos - 1], at);
        let term = parse_expr(sig, &mut inner, inline_holes)?;
        let diagram = term.to_diagram(sig).map_err(|e| located(at, e))?;
        let repeated = c.eat_ident("^n");
        return Ok(FamilyItem { diagram, repeated });
    }
    let raw = c.gen_name()?;
    let (n, repeated) = match raw.strip_suffix("^n") {
        Some(base) if sig.lookup(&raw).is_none() => (base.to_string(), true),
        _ => (raw, false),
    };
    let id = sig.lookup(&n).ok_or_else(|| syntax(at, format!("unknown generator `{n}`")))?;
    Ok(FamilyItem { diagram: Diagram::of_generator(sig, id).map_err(|e| located(at, e))?, repeated })
}
