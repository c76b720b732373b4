//! Subcommand bodies. Each returns the text for standard output and
//! whether the command's verdict was positive.

use std::collections::BTreeMap;
use std::fmt::Write;

use qgt_core::action::{canonicalize, BasisVector, Generator, Kind, Module, ModuleSpec};
use qgt_core::gtcenter::block_report;
use qgt_core::tableaux::{detect_singular_pair, enumerate_admissible, num_free_positions, Singularity, Tableau};
use qgt_core::verify::{run_suite, Status, Suite};

use crate::document::{Diagnostic, SpecDocument, Spans};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {diag}")]
    Document { path: String, diag: Diagnostic },
    #[error(transparent)]
    Core(#[from] qgt_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

/// A parsed input file together with its name for diagnostics.
pub struct Input {
    pub path: String,
    pub doc: SpecDocument,
    pub spans: Spans,
}

impl Input {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_string(), source })?;
        Self::from_text(path, &text)
    }

    pub fn from_text(path: &str, text: &str) -> Result<Self> {
        let (doc, spans) =
            SpecDocument::parse_with_spans(text).map_err(|diag| CliError::Document { path: path.to_string(), diag })?;
        Ok(Input { path: path.to_string(), doc, spans })
    }

    pub fn spec(&self) -> Result<ModuleSpec> {
        self.doc.to_spec(&self.spans).map_err(|diag| CliError::Document { path: self.path.clone(), diag })
    }
}

pub fn check_admissible(input: &Input) -> Result<Outcome> {
    let doc = &input.doc;
    let c = doc
        .relation_set()
        .map_err(|e| CliError::Document {
            path: input.path.clone(),
            diag: Diagnostic { line: input.spans.relations.unwrap_or(input.spans.module), col: 1, message: e.to_string() },
        })?;
    let report = c.is_admissible();
    let mut out = String::new();
    writeln!(out, "n = {}", doc.n).unwrap();
    writeln!(out, "relations = {c}").unwrap();
    writeln!(out, "admissible = {}", if report.admissible { "yes" } else { "no" }).unwrap();
    writeln!(out, "components = {}", c.num_components()).unwrap();
    for k in 0..c.num_components() {
        let cells: Vec<String> = c.component_positions(k).iter().map(|p| p.to_string()).collect();
        writeln!(out, "component {} = {}", k + 1, cells.join(" ")).unwrap();
    }
    for v in &report.violations {
        writeln!(out, "violation = {v}").unwrap();
    }
    if report.admissible {
        if let Some(base) = &doc.base {
            let t = Tableau::new(doc.n, base.clone())?;
            let verdict = match detect_singular_pair(&t, &c) {
                Ok(Singularity::Generic) => "realized, generic".to_string(),
                Ok(Singularity::Pair(p)) => format!("realized, singular {p}"),
                Err(e) => format!("not realized: {e}"),
            };
            writeln!(out, "base = {verdict}").unwrap();
        }
    }
    Ok(Outcome { text: out, passed: report.admissible })
}

/// `T[0,1]`, `DT[0,1]` or a bare `0,1`.
pub fn parse_vector(s: &str) -> Result<BasisVector> {
    let bad = || CliError::Usage(format!("cannot parse basis vector {s:?}; expected T[z1,...] or DT[z1,...]"));
    let s = s.trim();
    let (kind, rest) = if let Some(r) = s.strip_prefix("DT") {
        (Kind::Derivative, r)
    } else if let Some(r) = s.strip_prefix('T') {
        (Kind::Normal, r)
    } else {
        (Kind::Normal, s)
    };
    let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(rest).trim();
    let z = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|t| t.trim().parse::<i32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?
    };
    Ok(BasisVector { kind, z })
}

pub fn parse_generator(s: &str) -> Result<Generator> {
    let compact: String = s.chars().filter(|c| *c != '_').collect();
    Ok(compact.parse::<Generator>()?)
}

pub fn act(input: &Input, generator: &str, vector: &str) -> Result<Outcome> {
    let spec = input.spec()?;
    let g = parse_generator(generator)?;
    let b = parse_vector(vector)?;
    let dim = num_free_positions(spec.n());
    if b.z.len() != dim {
        return Err(CliError::Usage(format!("basis vector needs {dim} shift entries for n = {}, got {}", spec.n(), b.z.len())));
    }
    let bound = input.doc.bound;
    if b.z.iter().any(|v| v.unsigned_abs() > bound) {
        return Err(CliError::Usage(format!("{b} lies outside the window of bound {bound}")));
    }
    if !spec.in_basis(&b.z) {
        return Err(CliError::Usage(format!("{b} is not a basis vector of {}", spec.relations())));
    }
    if b.kind == Kind::Derivative && spec.pair().is_none() {
        return Err(CliError::Usage("derivative tableaux exist only for singular modules".into()));
    }
    let module = Module::new(spec.clone());
    let text = match canonicalize(&spec, b) {
        None => "0\n".to_string(),
        Some((sign, c)) => {
            let v = module.act(&g, &c)?;
            let v = if sign < 0 { v.scale(&qgt_core::exactalg::FieldElement::from_int(spec.system(), -1)) } else { v };
            format!("{v}\n")
        }
    };
    Ok(Outcome { text, passed: true })
}

pub fn verify(input: &Input, suite: &str) -> Result<Outcome> {
    let spec = input.spec()?;
    let suite: Suite = suite.parse().map_err(|_| {
        CliError::Usage(format!(
            "unknown suite {suite:?}; choose relations, compatibility, appendix, gamma, findim, irreducible or all"
        ))
    })?;
    let reports = run_suite(&spec, suite, input.doc.bound, input.doc.seed);
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{r}").unwrap();
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let passed = reports.iter().all(|r| r.passed());
    writeln!(out, "[summary]").unwrap();
    writeln!(out, "spec = {}", spec.summary()).unwrap();
    writeln!(out, "bound = {}", input.doc.bound).unwrap();
    writeln!(out, "seed = {}", input.doc.seed).unwrap();
    for r in &reports {
        writeln!(out, "{} = {}", r.name, r.status).unwrap();
    }
    writeln!(out, "passed = {}", count(Status::Pass)).unwrap();
    writeln!(out, "failed = {}", count(Status::Fail)).unwrap();
    writeln!(out, "skipped = {}", count(Status::Skipped)).unwrap();
    writeln!(out, "result = {}", if passed { "pass" } else { "fail" }).unwrap();
    Ok(Outcome { text: out, passed })
}

pub fn enumerate(n: usize) -> Result<Outcome> {
    let all = enumerate_admissible(n)?;
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for c in &all {
        groups.entry(c.num_components()).or_default().push(c.to_string());
    }
    let mut out = String::new();
    writeln!(out, "n = {n}").unwrap();
    writeln!(out, "admissible = {}", all.len()).unwrap();
    for (k, sets) in &groups {
        writeln!(out, "\n[components {k}]").unwrap();
        writeln!(out, "count = {}", sets.len()).unwrap();
        for s in sets {
            writeln!(out, "{s}").unwrap();
        }
    }
    Ok(Outcome { text: out, passed: true })
}

pub fn blocks(input: &Input) -> Result<Outcome> {
    let spec = input.spec()?;
    let bound = input.doc.bound;
    let blocks = block_report(&spec, bound)?;
    let mut out = String::new();
    writeln!(out, "spec = {}", spec.summary()).unwrap();
    writeln!(out, "bound = {bound}").unwrap();
    writeln!(out, "blocks = {}", blocks.len()).unwrap();
    writeln!(out, "# block dim jordan cells members key").unwrap();
    for (i, b) in blocks.iter().enumerate() {
        let cells: Vec<String> =
            b.jordan.iter().filter(|j| j.2 > 1).map(|(m, k, s)| format!("c{m}{k}:{}", size_label(*s))).collect();
        let cells = if cells.is_empty() { "-".to_string() } else { cells.join(",") };
        let members: Vec<String> = b.members.iter().map(|m| m.to_string()).collect();
        writeln!(
            out,
            "{} {} {} {} {} {}",
            i + 1,
            b.dimension(),
            size_label(b.max_jordan()),
            cells,
            members.join(","),
            b.key
        )
        .unwrap();
    }
    Ok(Outcome { text: out, passed: true })
}

fn size_label(s: usize) -> String {
    if s > 2 {
        ">2".to_string()
    } else {
        s.to_string()
    }
}
