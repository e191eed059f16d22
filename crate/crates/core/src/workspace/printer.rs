use std::fmt::{self, Write};

use super::{Family, ItemKind, Membership, Workspace};
use crate::contextfree::CFMonoidalGrammar;
use crate::diagrams::Label;
use crate::regular::{MonoidalAutomaton, RegularMonoidalGrammar};
use crate::signatures::{Doctrine, Multigraph, Polygraph, Sort};

fn words(s: &[Sort]) -> String {
    s.iter().map(|x| x.name()).collect::<Vec<_>>().join(" ")
}

fn arrow(dom: &[Sort], cod: &[Sort]) -> String {
    let mut s = words(dom);
    if !s.is_empty() {
        s.push(' ');
    }
    s.push_str("->");
    if !cod.is_empty() {
        s.push(' ');
        s.push_str(&words(cod));
    }
    s
}

fn line(f: &mut impl Write, key: &str, body: &str) -> fmt::Result {
    if body.is_empty() {
        writeln!(f, "  {key}:;")
    } else {
        writeln!(f, "  {key}: {body};")
    }
}

pub(crate) fn write_workspace(f: &mut impl Write, ws: &Workspace) -> fmt::Result {
    for (i, (kind, name)) in ws.order.iter().enumerate() {
        if i > 0 {
            writeln!(f)?;
        }
        match kind {
            ItemKind::Polygraph => polygraph(f, &ws.polygraphs[name])?,
            ItemKind::Multigraph => multigraph(f, &ws.multigraphs[name])?,
            ItemKind::Automaton => automaton(f, &ws.automata[name])?,
            ItemKind::Grammar => grammar(f, &ws.grammars[name])?,
            ItemKind::Regular => regular(f, &ws.regulars[name])?,
            ItemKind::Family => family(f, &ws.families[name])?,
        }
    }
    Ok(())
}

fn polygraph(f: &mut impl Write, p: &Polygraph) -> fmt::Result {
    writeln!(f, "polygraph {} {{", p.name)?;
    if p.doctrine != Doctrine::Free {
        line(f, "doctrine", p.doctrine.keyword())?;
    }
    line(f, "sorts", &words(p.sorts()))?;
    for (_, g) in p.base_generators() {
        writeln!(f, "  gen {} : {};", g.name, arrow(&g.arity, &g.coarity))?;
    }
    writeln!(f, "}}")
}

fn multigraph(f: &mut impl Write, m: &Multigraph) -> fmt::Result {
    writeln!(f, "multigraph {} {{", m.name)?;
    line(f, "sorts", &words(&m.sorts))?;
    for op in &m.ops {
        writeln!(f, "  op {} : {} {};", op.name, arrow(&op.inputs, &[]), op.output)?;
    }
    writeln!(f, "}}")
}

fn automaton(f: &mut impl Write, a: &MonoidalAutomaton) -> fmt::Result {
    writeln!(f, "automaton {} over {} {{", a.name, a.alphabet.name)?;
    let typed = a.alphabet.sorts().len() != 1;
    let states: Vec<String> = a
        .states
        .iter()
        .zip(&a.state_sorts)
        .map(|(q, s)| if typed { format!("{q}:{s}") } else { q.clone() })
        .collect();
    line(f, "states", &states.join(" "))?;
    let w = |q: &[usize]| q.iter().map(|&i| a.states[i].as_str()).collect::<Vec<_>>().join(" ");
    line(f, "init", &w(&a.initial))?;
    line(f, "final", &w(&a.final_))?;
    for (g, ts) in &a.transitions {
        for (from, to) in ts {
            let (l, r) = (w(from), w(to));
            let mut t = l;
            if !t.is_empty() {
                t.push(' ');
            }
            t.push_str("->");
            if !r.is_empty() {
                t.push(' ');
                t.push_str(&r);
            }
            writeln!(f, "  {} : {};", a.alphabet.gen(*g).name, t)?;
        }
    }
    writeln!(f, "}}")
}

fn grammar(f: &mut impl Write, g: &CFMonoidalGrammar) -> fmt::Result {
    writeln!(f, "cfg {} over {} {{", g.name, g.target.name)?;
    for n in &g.nonterminals {
        writeln!(f, "  nt {} : {};", n.name, arrow(&n.interface.dom, &n.interface.cod))?;
    }
    writeln!(f, "  start {};", g.nonterminals[g.start].name)?;
    for r in &g.rules {
        let body = r.body.diagram().display_with(&|h| g.nonterminals[r.args[h as usize]].name.clone());
        writeln!(f, "  rule {} : {} := {};", r.name, g.nonterminals[r.lhs].name, body)?;
    }
    writeln!(f, "}}")
}

fn regular(f: &mut impl Write, r: &RegularMonoidalGrammar) -> fmt::Result {
    let (q, p) = (&r.psi.source, &r.psi.target);
    writeln!(f, "regular {} : {} -> {} {{", r.name, q.name, p.name)?;
    line(f, "init", &words(&r.initial))?;
    line(f, "final", &words(&r.final_))?;
    for (a, b) in &r.psi.sort_map {
        writeln!(f, "  sort {a} => {b};")?;
    }
    for id in q.gen_ids() {
        let (a, b) = (&q.gen(id).name, &p.gen(r.psi.gen_map[id.index()]).name);
        if q.gen(id).structural.is_none() || a != b {
            writeln!(f, "  gen {a} => {b};")?;
        }
    }
    writeln!(f, "}}")
}

fn family(f: &mut impl Write, fam: &Family) -> fmt::Result {
    writeln!(f, "family {} over {} {{", fam.name, fam.polygraph.name)?;
    let items: Vec<String> = fam
        .items
        .iter()
        .map(|it| {
            let d = &it.diagram;
            let bare = match d.slices() {
                [s] if s.left == 0 && s.right == 0 => match s.label {
                    Label::Gen(g) => Some(d.sig().gen(g).name.clone()),
                    Label::Hole(_) => None,
                },
                _ => None,
            };
            let base = bare.unwrap_or_else(|| format!("({d})"));
            if it.repeated {
                format!("{base}^n")
            } else {
                base
            }
        })
        .collect();
    line(f, "factors", &items.join(" "))?;
    match &fam.member {
        Membership::Balanced(a, b) => {
            line(f, "member", &format!("balanced {} {}", fam.polygraph.gen(*a).name, fam.polygraph.gen(*b).name))?
        }
        Membership::Automaton(x) => line(f, "member", &format!("automaton {x}"))?,
    }
    line(f, "k", &fam.k.to_string())?;
    line(f, "max", &fam.max.to_string())?;
    writeln!(f, "}}")
}
