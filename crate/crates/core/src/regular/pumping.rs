use crate::diagrams::Diagram;
use crate::error::{Error, Result};

/// A diagram split into non-identity factors `s_0 ⨾ … ⨾ s_{m-1}`. Cut `t` sits
/// before factor `t`; its width is the number of wires crossing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    parts: Vec<Diagram>,
}

impl Factorization {
    pub fn new(parts: Vec<Diagram>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidMorphism("a factorization needs at least one factor".into()));
        }
        for p in &parts {
            if p.is_identity() {
                return Err(Error::InvalidMorphism("factors must not be identities".into()));
            }
        }
        for w in parts.windows(2) {
            if w[0].cod() != w[1].dom() {
                return Err(Error::InterfaceMismatch { expected: w[0].cod().clone(), found: w[1].dom().clone() });
            }
        }
        Ok(Factorization { parts })
    }

    /// One factor per slice.
    pub fn of_slices(d: &Diagram) -> Result<Self> {
        Self::new((0..d.slices().len()).map(|i| d.segment(i..i + 1)).collect())
    }

    pub fn parts(&self) -> &[Diagram] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Widths of cuts `0..=m`.
    pub fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.parts[0].dom().len()];
        w.extend(self.parts.iter().map(|p| p.cod().len()));
        w
    }

    fn span(&self, r: std::ops::Range<usize>, at: &[crate::signatures::Sort]) -> Result<Diagram> {
        let mut acc = Diagram::identity(self.parts[0].sig(), at)?;
        for p in &self.parts[r] {
            acc = acc.compose(p)?;
        }
        Ok(acc)
    }

    pub fn composite(&self) -> Result<Diagram> {
        self.span(0..self.parts.len(), self.parts[0].dom())
    }
}

/// `s' ⨾ (s'')^a ⨾ s'''` where `s''` is the run of factors between cuts `i` and `j`.
pub fn pump(fact: &Factorization, i: usize, j: usize, a: usize) -> Result<Diagram> {
    let m = fact.len();
    if !(i < j && j <= m) {
        return Err(Error::InvalidMorphism(format!("cuts must satisfy {i} < {j} ≤ {m}")));
    }
    let w = fact.widths();
    if w[i] != w[j] {
        return Err(Error::WidthMismatch { i, j, ki: w[i], kj: w[j] });
    }
    let at = |t: usize| if t == 0 { fact.parts[0].dom().clone() } else { fact.parts[t - 1].cod().clone() };
    let head = fact.span(0..i, &at(0))?;
    let middle = fact.span(i..j, &at(i))?;
    let tail = fact.span(j..m, &at(j))?;
    let mut out = head;
    for _ in 0..a {
        out = out.compose(&middle)?;
    }
    out.compose(&tail)
}

/// A cut pair `(i, j)` within the pumping window and, when one exists, an
/// exponent that takes the diagram out of the language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub a: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// For each family index, every equal-width cut pair that was checked.
    pub cases: Vec<(usize, Vec<Violation>)>,
    /// Family indices whose factorization is wider than `k`.
    pub too_wide: Vec<usize>,
}

impl WitnessReport {
    /// Every checked cut pair of every member leaves the language for some exponent.
    pub fn witness_found(&self) -> bool {
        self.too_wide.is_empty() && self.cases.iter().all(|(_, v)| v.iter().all(|x| x.a.is_some()))
    }

    pub fn pairs_checked(&self) -> usize {
        self.cases.iter().map(|(_, v)| v.len()).sum()
    }
}

pub const PUMP_EXPONENTS: std::ops::RangeInclusive<usize> = 0..=3;

/// Checks the contrapositive of the pumping lemma on a family of members.
/// For member `n`, the candidate cut pairs are those among the first `n` cuts,
/// where a pigeonhole argument on an automaton with fewer than `n` states
/// would place a repeat.
pub fn pumping_witness(
    member: &dyn Fn(&Diagram) -> bool,
    k: usize,
    family: &dyn Fn(usize) -> Result<Factorization>,
    max_n: usize,
) -> Result<WitnessReport> {
    let mut report = WitnessReport { cases: Vec::new(), too_wide: Vec::new() };
    for n in 1..=max_n {
        let fact = family(n)?;
        let widths = fact.widths();
        if widths.iter().any(|&w| w > k) {
            report.too_wide.push(n);
            continue;
        }
        let window = n.min(fact.len());
        let mut checked = Vec::new();
        for i in 0..=window {
            for j in i + 1..=window {
                if widths[i] != widths[j] {
                    continue;
                }
                let mut a = None;
                for e in PUMP_EXPONENTS {
                    if !member(&pump(&fact, i, j, e)?) {
                        a = Some(e);
                        break;
                    }
                }
                checked.push(Violation { i, j, a });
            }
        }
        report.cases.push((n, checked));
    }
    Ok(report)
}
