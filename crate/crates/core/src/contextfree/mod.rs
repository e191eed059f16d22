//! Context-free monoidal grammars: rules are diagram contexts whose holes are
//! labeled by nonterminals.

mod closure;
mod lift;

pub use closure::{map_image, union};
pub use lift::lift_regular;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::budget::Budget;
use crate::diagrams::{same_sig, Diagram, DiagramContext, HoleType};
use crate::doctrines::{normal_key, NormalKey};
use crate::error::{Error, Result};
use crate::signatures::{clique, Multigraph, Operation, Permutation, Polygraph, Sort, SymmetricMultigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nonterminal {
    pub name: String,
    pub interface: HoleType,
}

/// `lhs(args…) → body`; hole `k` of the body is filled by a derivation of `args[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: usize,
    pub args: Vec<usize>,
    pub body: DiagramContext,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFMonoidalGrammar {
    pub name: String,
    pub target: Arc<Polygraph>,
    pub nonterminals: Vec<Nonterminal>,
    pub rules: Vec<Rule>,
    pub start: usize,
}

impl CFMonoidalGrammar {
    pub fn new(name: &str, target: Arc<Polygraph>) -> Self {
        CFMonoidalGrammar { name: name.to_string(), target, nonterminals: Vec::new(), rules: Vec::new(), start: 0 }
    }

    pub fn nonterminal(&self, name: &str) -> Result<usize> {
        self.nonterminals.iter().position(|n| n.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn add_nonterminal(&mut self, name: &str, interface: HoleType) -> Result<usize> {
        if self.nonterminal(name).is_ok() {
            return Err(Error::DuplicateName(name.to_string()));
        }
        self.target.check_word(&interface.dom)?;
        self.target.check_word(&interface.cod)?;
        self.nonterminals.push(Nonterminal { name: name.to_string(), interface });
        Ok(self.nonterminals.len() - 1)
    }

    pub fn add_rule(&mut self, name: &str, lhs: usize, args: Vec<usize>, body: DiagramContext) -> Result<usize> {
        if self.rules.iter().any(|r| r.name == name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let rule = Rule { name: name.to_string(), lhs, args, body };
        let mut report = Vec::new();
        check_rule(self, &rule, &mut report);
        if !report.is_empty() {
            return Err(report.remove(0));
        }
        self.rules.push(rule);
        Ok(self.rules.len() - 1)
    }

    pub fn rule(&self, name: &str) -> Result<usize> {
        self.rules.iter().position(|r| r.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn start_interface(&self) -> &HoleType {
        &self.nonterminals[self.start].interface
    }

    /// The nonterminal signature: sorts are nonterminals, operations are rules
    /// with inputs in hole order.
    pub fn rule_multigraph(&self) -> Multigraph {
        Multigraph {
            name: format!("{}.rules", self.name),
            sorts: self.nonterminals.iter().map(|n| Sort::new(&n.name)).collect(),
            ops: self
                .rules
                .iter()
                .map(|r| Operation {
                    name: r.name.clone(),
                    inputs: r.args.iter().map(|&a| Sort::new(&self.nonterminals[a].name)).collect(),
                    output: Sort::new(&self.nonterminals[r.lhs].name),
                })
                .collect(),
        }
    }

    pub fn symmetric_multigraph(&self) -> SymmetricMultigraph {
        clique(&self.rule_multigraph())
    }

    /// The same grammar with the holes of `rule` relabeled by `σ` and its
    /// argument list permuted to match.
    pub fn permute_rule(&self, rule: usize, sigma: &Permutation) -> CFMonoidalGrammar {
        let mut g = self.clone();
        let r = &mut g.rules[rule];
        r.body = r.body.permute_holes(sigma);
        r.args = sigma.apply(&r.args);
        g
    }
}

/// Checks every rule against the interfaces of its nonterminals.
pub fn validate_grammar(g: &CFMonoidalGrammar) -> std::result::Result<(), Vec<Error>> {
    let mut report = Vec::new();
    let n = g.nonterminals.len();
    if g.start >= n {
        report.push(Error::UnknownName(format!("start symbol of `{}`", g.name)));
    }
    for r in &g.rules {
        check_rule(g, r, &mut report);
    }
    if report.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

fn check_rule(g: &CFMonoidalGrammar, r: &Rule, report: &mut Vec<Error>) {
    let n = g.nonterminals.len();
    if r.lhs >= n || r.args.iter().any(|&a| a >= n) {
        report.push(Error::UnknownName(format!("nonterminal in rule `{}`", r.name)));
        return;
    }
    if !same_sig(r.body.diagram().sig(), &g.target) {
        report.push(Error::PolygraphMismatch(g.target.name.clone(), r.body.diagram().sig().name.clone()));
        return;
    }
    let t = &g.nonterminals[r.lhs].interface;
    let d = r.body.diagram();
    if d.dom() != &t.dom {
        report.push(Error::InterfaceMismatch { expected: t.dom.clone(), found: d.dom().clone() });
    }
    if d.cod() != &t.cod {
        report.push(Error::InterfaceMismatch { expected: t.cod.clone(), found: d.cod().clone() });
    }
    if r.body.arity() != r.args.len() {
        report.push(Error::Grammar(format!(
            "rule `{}` has {} holes but {} arguments",
            r.name,
            r.body.arity(),
            r.args.len()
        )));
        return;
    }
    for (h, &a) in r.body.holes().iter().zip(&r.args) {
        let want = &g.nonterminals[a].interface;
        if h.dom != want.dom {
            report.push(Error::InterfaceMismatch { expected: want.dom.clone(), found: h.dom.clone() });
        }
        if h.cod != want.cod {
            report.push(Error::InterfaceMismatch { expected: want.cod.clone(), found: h.cod.clone() });
        }
    }
}

/// A closed tree of rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    pub rule: usize,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: usize) -> Self {
        Derivation { rule, children: Vec::new() }
    }

    pub fn node(rule: usize, children: Vec<Derivation>) -> Self {
        Derivation { rule, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    pub fn render(&self, g: &CFMonoidalGrammar) -> String {
        let mut s = g.rules[self.rule].name.clone();
        if !self.children.is_empty() {
            let parts: Vec<String> = self.children.iter().map(|c| c.render(g)).collect();
            s.push('(');
            s.push_str(&parts.join(", "));
            s.push(')');
        }
        s
    }

    /// Whether the tree is well typed for `g`.
    pub fn check(&self, g: &CFMonoidalGrammar) -> bool {
        let Some(r) = g.rules.get(self.rule) else { return false };
        r.args.len() == self.children.len()
            && self.children.iter().zip(&r.args).all(|(c, &a)| g.rules.get(c.rule).is_some_and(|cr| cr.lhs == a) && c.check(g))
    }
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let rest = parts - 1;
    for first in 1..=total.saturating_sub(rest) {
        cur.push(first);
        compositions(total - first, rest, out, cur);
        cur.pop();
    }
}

/// All derivations rooted at `sort` with at most `max_rules` nodes, ordered by
/// node count and then structurally.
pub fn enumerate_derivations(
    g: &CFMonoidalGrammar,
    sort: usize,
    max_rules: usize,
    budget: &Budget,
) -> Result<Vec<Derivation>> {
    let n_sorts = g.nonterminals.len();
    // exact[n][s]: derivations of sort s with exactly n nodes.
    let mut exact: Vec<Vec<Vec<Derivation>>> = vec![vec![Vec::new(); n_sorts]; max_rules + 1];
    for n in 1..=max_rules {
        for (ri, r) in g.rules.iter().enumerate() {
            let mut found = Vec::new();
            let mut splits = Vec::new();
            compositions(n - 1, r.args.len(), &mut splits, &mut Vec::new());
            for split in splits {
                let mut partial: Vec<Vec<Derivation>> = vec![Vec::new()];
                for (&a, &k) in r.args.iter().zip(&split) {
                    let choices = &exact[k][a];
                    let mut next = Vec::with_capacity(partial.len() * choices.len());
                    for p in &partial {
                        for c in choices {
                            let mut q = p.clone();
                            q.push(c.clone());
                            next.push(q);
                        }
                    }
                    budget.spend(next.len())?;
                    partial = next;
                }
                found.extend(partial.into_iter().map(|children| Derivation::node(ri, children)));
            }
            exact[n][r.lhs].extend(found);
        }
    }
    let mut out = Vec::new();
    for level in exact.iter().skip(1) {
        let mut l = level.get(sort).cloned().unwrap_or_default();
        l.sort();
        out.extend(l);
    }
    Ok(out)
}

/// `Ψ̂(d)`: the rule's context with each hole filled by its child's value.
pub fn evaluate_derivation(g: &CFMonoidalGrammar, d: &Derivation) -> Result<Diagram> {
    let r = g.rules.get(d.rule).ok_or_else(|| Error::UnknownName(format!("rule #{}", d.rule)))?;
    if r.args.len() != d.children.len() {
        return Err(Error::Grammar(format!("rule `{}` expects {} children", r.name, r.args.len())));
    }
    let mut args = Vec::with_capacity(d.children.len());
    for (c, &a) in d.children.iter().zip(&r.args) {
        if g.rules.get(c.rule).map(|cr| cr.lhs) != Some(a) {
            return Err(Error::Grammar(format!("child of `{}` has the wrong nonterminal", r.name)));
        }
        args.push(DiagramContext::new(evaluate_derivation(g, c)?));
    }
    Ok(r.body.substitute_all(&args)?.into_diagram())
}

/// A bounded language: one representative per doctrine normal form.
pub type Language = BTreeMap<NormalKey, Diagram>;

pub fn cf_language(g: &CFMonoidalGrammar, bound: usize, budget: &Budget) -> Result<Language> {
    let mut out = Language::new();
    for d in enumerate_derivations(g, g.start, bound, budget)? {
        let v = evaluate_derivation(g, &d)?;
        out.entry(normal_key(&v)?).or_insert(v);
    }
    Ok(out)
}

/// Keys of a set of diagrams under their doctrine's equality.
pub fn language_of(diagrams: impl IntoIterator<Item = Diagram>) -> Result<Language> {
    let mut out = Language::new();
    for d in diagrams {
        out.entry(normal_key(&d)?).or_insert(d);
    }
    Ok(out)
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.rule)?;
        if !self.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
