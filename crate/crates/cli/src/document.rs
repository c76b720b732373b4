//! The line-oriented module document.
//!
//! ```text
//! [module]
//! n = 3
//! mode = quantum
//! bound = 2
//! seed = 20240601
//!
//! [base]
//! row 3 = 1/3 2/5 3/11
//! row 2 = 0 0
//! row 1 = 1/7
//!
//! [relations]
//! [3,1] >= [2,1]
//! [2,1] > [3,2]
//! order 1 2
//!
//! [singular]
//! pair = 2 1 2
//! ```
//!
//! `order i j` is shorthand for the top-row relation `[n,i] >= [n,j]`.
//! Blank lines and `#` comments are ignored.

use std::fmt;

use qgt_core::action::{ModuleSpec, Mutation};
use qgt_core::exactalg::{NumberSystem, Rat};
use qgt_core::tableaux::{detect_singular_pair, num_positions, Position, Relation, RelationSet, SingularPair, Tableau};
use qgt_core::verify::DEFAULT_SEED;

pub const DEFAULT_BOUND: u32 = 2;

/// A parse or validation failure pointing into the source text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic { line, col, message: message.into() }
    }
}

type PResult<T> = std::result::Result<T, Diagnostic>;

#[derive(Clone, Debug, PartialEq)]
pub struct SpecDocument {
    pub n: usize,
    pub mode: NumberSystem,
    pub bound: u32,
    pub seed: u64,
    pub mutation: Option<Mutation>,
    /// Row-major, row 1 first.
    pub base: Option<Vec<Rat>>,
    pub relations: Vec<Relation>,
    pub singular: Option<SingularPair>,
}

/// Where each section started, for diagnostics raised after parsing.
#[derive(Clone, Debug, Default)]
pub struct Spans {
    pub module: usize,
    pub base: Option<usize>,
    pub relations: Option<usize>,
    pub singular: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Module,
    Base,
    Relations,
    Singular,
}

/// A word of a line with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], col: line[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], col: line[..s].chars().count() + 1 });
    }
    out
}

fn parse_mode(s: &str) -> Option<NumberSystem> {
    match s {
        "quantum" => Some(NumberSystem::Quantum),
        "classical" => Some(NumberSystem::Classical),
        _ => None,
    }
}

pub fn parse_mutation(s: &str) -> Option<Mutation> {
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        ["drop-gate"] => Some(Mutation::DropGate),
        ["gamma-prefactor"] => Some(Mutation::GammaPrefactor),
        ["sign-flip", k, j] => Some(Mutation::SignFlip { k: k.parse().ok()?, j: j.parse().ok()? }),
        _ => None,
    }
}

/// `[r,c]` with no inner spaces.
fn parse_position(t: &Tok<'_>, line: usize) -> PResult<Position> {
    let bad = || Diagnostic::at(line, t.col, format!("expected a position like [2,1], found {:?}", t.text));
    let inner = t.text.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?;
    let (r, c) = inner.split_once(',').ok_or_else(bad)?;
    Ok(Position::new(r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn parse_usize(t: &Tok<'_>, line: usize, what: &str) -> PResult<usize> {
    t.text.parse().map_err(|_| Diagnostic::at(line, t.col, format!("expected {what}, found {:?}", t.text)))
}

struct Parser {
    n: Option<usize>,
    mode: Option<NumberSystem>,
    bound: Option<u32>,
    seed: Option<u64>,
    mutation: Option<Mutation>,
    rows: Vec<Option<(usize, Vec<Rat>)>>,
    /// Relations with the line they came from; checked once `n` is known.
    relations: Vec<(Relation, usize, usize)>,
    orders: Vec<(usize, usize, usize, usize)>,
    singular: Option<(SingularPair, usize, usize)>,
    spans: Spans,
    seen_module: bool,
}

impl Parser {
    fn module_line(&mut self, toks: &[Tok<'_>], raw: &str, ln: usize) -> PResult<()> {
        let key = &toks[0];
        if toks.len() < 3 || toks[1].text != "=" {
            return Err(Diagnostic::at(ln, key.col, "expected `key = value`"));
        }
        let value_col = toks[2].col;
        let value = raw[raw.char_indices().nth(value_col - 1).map(|(i, _)| i).unwrap_or(raw.len())..].trim();
        let dup = || Diagnostic::at(ln, key.col, format!("duplicate key {:?}", key.text));
        let single = || -> PResult<&Tok<'_>> {
            if toks.len() == 3 {
                Ok(&toks[2])
            } else {
                Err(Diagnostic::at(ln, toks[3].col, "unexpected trailing text"))
            }
        };
        match key.text {
            "n" => {
                let v = parse_usize(single()?, ln, "a positive integer")?;
                if v == 0 {
                    return Err(Diagnostic::at(ln, value_col, "n must be positive"));
                }
                if self.n.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "mode" => {
                let v = parse_mode(single()?.text)
                    .ok_or_else(|| Diagnostic::at(ln, value_col, "mode must be `quantum` or `classical`"))?;
                if self.mode.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "bound" => {
                let t = single()?;
                let v = t.text.parse().map_err(|_| Diagnostic::at(ln, t.col, "bound must be a non-negative integer"))?;
                if self.bound.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "seed" => {
                let t = single()?;
                let v = t.text.parse().map_err(|_| Diagnostic::at(ln, t.col, "seed must be a non-negative integer"))?;
                if self.seed.replace(v).is_some() {
                    return Err(dup());
                }
            }
            "mutation" => {
                let v = parse_mutation(value).ok_or_else(|| {
                    Diagnostic::at(ln, value_col, "mutation must be `sign-flip K J`, `drop-gate` or `gamma-prefactor`")
                })?;
                if self.mutation.replace(v).is_some() {
                    return Err(dup());
                }
            }
            other => return Err(Diagnostic::at(ln, key.col, format!("unknown key {other:?} in [module]"))),
        }
        Ok(())
    }

    fn base_line(&mut self, toks: &[Tok<'_>], ln: usize) -> PResult<()> {
        if toks.len() < 3 || toks[0].text != "row" || toks.get(2).map(|t| t.text) != Some("=") {
            return Err(Diagnostic::at(ln, toks[0].col, "expected `row K = entries...`"));
        }
        let k = parse_usize(&toks[1], ln, "a row number")?;
        let mut entries = Vec::new();
        for t in &toks[3..] {
            entries.push(
                t.text
                    .parse::<Rat>()
                    .map_err(|_| Diagnostic::at(ln, t.col, format!("invalid rational {:?}", t.text)))?,
            );
        }
        if k == 0 {
            return Err(Diagnostic::at(ln, toks[1].col, "rows are numbered from 1"));
        }
        if entries.len() != k {
            return Err(Diagnostic::at(ln, toks[0].col, format!("row {k} needs {k} entries, found {}", entries.len())));
        }
        if self.rows.len() < k {
            self.rows.resize(k, None);
        }
        if self.rows[k - 1].is_some() {
            return Err(Diagnostic::at(ln, toks[1].col, format!("row {k} given twice")));
        }
        self.rows[k - 1] = Some((ln, entries));
        Ok(())
    }

    fn relation_line(&mut self, toks: &[Tok<'_>], ln: usize) -> PResult<()> {
        if toks[0].text == "order" {
            if toks.len() != 3 {
                return Err(Diagnostic::at(ln, toks[0].col, "expected `order I J`"));
            }
            let i = parse_usize(&toks[1], ln, "a column")?;
            let j = parse_usize(&toks[2], ln, "a column")?;
            self.orders.push((i, j, ln, toks[0].col));
            return Ok(());
        }
        if toks.len() != 3 {
            return Err(Diagnostic::at(ln, toks[0].col, "expected `[r,c] >= [r,c]` or `[r,c] > [r,c]`"));
        }
        let lhs = parse_position(&toks[0], ln)?;
        let rhs = parse_position(&toks[2], ln)?;
        let strict = match toks[1].text {
            ">=" => false,
            ">" => true,
            other => return Err(Diagnostic::at(ln, toks[1].col, format!("unknown operator {other:?}; use >= or >"))),
        };
        self.relations.push((Relation { lhs, rhs, strict }, ln, toks[0].col));
        Ok(())
    }

    fn singular_line(&mut self, toks: &[Tok<'_>], ln: usize) -> PResult<()> {
        if toks.len() != 5 || toks[0].text != "pair" || toks[1].text != "=" {
            return Err(Diagnostic::at(ln, toks[0].col, "expected `pair = ROW I J`"));
        }
        if self.singular.is_some() {
            return Err(Diagnostic::at(ln, toks[0].col, "only one singular pair is supported"));
        }
        let row = parse_usize(&toks[2], ln, "a row")?;
        let i = parse_usize(&toks[3], ln, "a column")?;
        let j = parse_usize(&toks[4], ln, "a column")?;
        self.singular = Some((SingularPair { row, i, j }, ln, toks[2].col));
        Ok(())
    }

    fn finish(self) -> PResult<(SpecDocument, Spans)> {
        if !self.seen_module {
            return Err(Diagnostic::at(1, 1, "missing [module] section"));
        }
        let n = self.n.ok_or_else(|| Diagnostic::at(self.spans.module, 1, "[module] needs `n = ...`"))?;
        let mut relations = Vec::new();
        for (r, ln, col) in self.relations {
            if !r.in_universe(n) {
                return Err(Diagnostic::at(ln, col, format!("{r} is not an admissible relation shape for n = {n}")));
            }
            relations.push(r);
        }
        for (i, j, ln, col) in self.orders {
            let r = Relation::weak(Position::new(n, i), Position::new(n, j));
            if !r.in_universe(n) {
                return Err(Diagnostic::at(ln, col, format!("order {i} {j} does not name two top-row columns for n = {n}")));
            }
            relations.push(r);
        }
        // canonical order: interlacing relations first, then the top row
        relations.sort_by_key(|r| r.is_top_row());
        let base = match self.spans.base {
            None => None,
            Some(sec) => {
                if self.rows.len() > n {
                    let (ln, _) = self.rows[n..].iter().flatten().next().expect("extra row recorded");
                    return Err(Diagnostic::at(*ln, 1, format!("row number exceeds n = {n}")));
                }
                let mut flat = Vec::with_capacity(num_positions(n));
                for k in 1..=n {
                    match self.rows.get(k - 1).cloned().flatten() {
                        Some((_, entries)) => flat.extend(entries),
                        None => return Err(Diagnostic::at(sec, 1, format!("[base] is missing row {k}"))),
                    }
                }
                Some(flat)
            }
        };
        let singular = match self.singular {
            None => None,
            Some((p, ln, col)) => {
                if !(p.row >= 1 && p.row < n && p.i >= 1 && p.i < p.j && p.j <= p.row) {
                    return Err(Diagnostic::at(ln, col, "singular pair needs 1 <= i < j <= row < n"));
                }
                Some(p)
            }
        };
        let doc = SpecDocument {
            n,
            mode: self.mode.unwrap_or(NumberSystem::Quantum),
            bound: self.bound.unwrap_or(DEFAULT_BOUND),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            mutation: self.mutation,
            base,
            relations,
            singular,
        };
        Ok((doc, self.spans))
    }
}

impl SpecDocument {
    pub fn parse(text: &str) -> PResult<Self> {
        Self::parse_with_spans(text).map(|(d, _)| d)
    }

    pub fn parse_with_spans(text: &str) -> PResult<(Self, Spans)> {
        let mut p = Parser {
            n: None,
            mode: None,
            bound: None,
            seed: None,
            mutation: None,
            rows: Vec::new(),
            relations: Vec::new(),
            orders: Vec::new(),
            singular: None,
            spans: Spans::default(),
            seen_module: false,
        };
        let mut section: Option<Section> = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("");
            let toks = tokens(line);
            if toks.is_empty() {
                continue;
            }
            let head = toks[0].text;
            let header = match (toks.len(), head) {
                (1, "[module]") => Some(Section::Module),
                (1, "[base]") => Some(Section::Base),
                (1, "[relations]") => Some(Section::Relations),
                (1, "[singular]") => Some(Section::Singular),
                (1, h) if h.starts_with('[') && !h.contains(',') => {
                    return Err(Diagnostic::at(ln, toks[0].col, format!("unknown section {h}")));
                }
                _ => None,
            };
            if let Some(s) = header {
                let slot = match s {
                    Section::Module => {
                        let seen = p.seen_module;
                        p.seen_module = true;
                        p.spans.module = ln;
                        seen
                    }
                    Section::Base => p.spans.base.replace(ln).is_some(),
                    Section::Relations => p.spans.relations.replace(ln).is_some(),
                    Section::Singular => p.spans.singular.replace(ln).is_some(),
                };
                if slot {
                    return Err(Diagnostic::at(ln, toks[0].col, format!("section {head} appears twice")));
                }
                section = Some(s);
                continue;
            }
            match section {
                None => return Err(Diagnostic::at(ln, toks[0].col, "content before the first section header")),
                Some(Section::Module) => p.module_line(&toks, line, ln)?,
                Some(Section::Base) => p.base_line(&toks, ln)?,
                Some(Section::Relations) => p.relation_line(&toks, ln)?,
                Some(Section::Singular) => p.singular_line(&toks, ln)?,
            }
        }
        p.finish()
    }

    pub fn relation_set(&self) -> qgt_core::Result<RelationSet> {
        RelationSet::new(self.n, self.relations.clone())
    }

    /// Builds the module, checking a stated singular pair against the
    /// detected one.
    pub fn to_spec(&self, spans: &Spans) -> PResult<ModuleSpec> {
        let base = self
            .base
            .as_ref()
            .ok_or_else(|| Diagnostic::at(spans.module, 1, "a [base] section is required for this command"))?;
        let base_line = spans.base.unwrap_or(spans.module);
        let rel_line = spans.relations.unwrap_or(spans.module);
        let tableau = Tableau::new(self.n, base.clone()).map_err(|e| Diagnostic::at(base_line, 1, e.to_string()))?;
        let rels = self.relation_set().map_err(|e| Diagnostic::at(rel_line, 1, e.to_string()))?;
        if let Some(v) = rels.is_admissible().violations.first() {
            return Err(Diagnostic::at(rel_line, 1, format!("relation set is not admissible: {v}")));
        }
        let detected = detect_singular_pair(&tableau, &rels).map_err(|e| Diagnostic::at(base_line, 1, e.to_string()))?;
        if let Some(stated) = self.singular {
            if detected.pair() != Some(stated) {
                let found = match detected.pair() {
                    Some(p) => format!("the base has {p}"),
                    None => "the base is generic".to_string(),
                };
                return Err(Diagnostic::at(
                    spans.singular.unwrap_or(base_line),
                    1,
                    format!("declared singular pair {stated} does not match: {found}"),
                ));
            }
        }
        let spec = ModuleSpec::new(&tableau, rels, self.mode).map_err(|e| Diagnostic::at(base_line, 1, e.to_string()))?;
        Ok(spec.with_mutation(self.mutation))
    }
}

impl fmt::Display for SpecDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[module]")?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "mode = {}", self.mode.name())?;
        writeln!(f, "bound = {}", self.bound)?;
        writeln!(f, "seed = {}", self.seed)?;
        if let Some(m) = self.mutation {
            writeln!(f, "mutation = {m}")?;
        }
        if let Some(base) = &self.base {
            writeln!(f, "\n[base]")?;
            for k in (1..=self.n).rev() {
                let row: Vec<String> = (1..=k).map(|c| base[Position::new(k, c).index()].to_string()).collect();
                writeln!(f, "row {k} = {}", row.join(" "))?;
            }
        }
        if !self.relations.is_empty() {
            writeln!(f, "\n[relations]")?;
            for r in &self.relations {
                if r.is_top_row() {
                    writeln!(f, "order {} {}", r.lhs.col, r.rhs.col)?;
                } else {
                    writeln!(f, "{r}")?;
                }
            }
        }
        if let Some(p) = self.singular {
            writeln!(f, "\n[singular]")?;
            writeln!(f, "pair = {} {} {}", p.row, p.i, p.j)?;
        }
        Ok(())
    }
}
