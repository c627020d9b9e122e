//! Command implementations behind the `parsym` binary, and the table document format.
//!
//! # Structured table format, version 1
//!
//! Line oriented UTF-8. The first line is `format=parsym-table version=1`, the
//! second is a `provenance` record, and each further line is a `row` record.
//! A record is a keyword followed by space-separated `key=value` fields in a
//! fixed order. Values escape `%`, space, `=` and newline as `%XX`.
//!
//! | record       | fields                                                    |
//! |--------------|-----------------------------------------------------------|
//! | `provenance` | `catalog_sha256`, `numbering`, `tool`                     |
//! | `row`        | `form`, `xi`, `components`, `gamma`, `j`                  |
//!
//! Row values:
//! - `xi`: comma-separated node labels (`1,3`, or `2'` for the second copy of a complex form).
//! - `components`: `;`-separated `label@h@gamma` items, where `gamma` lists
//!   `α` labels joined by `+` (empty when none).
//! - `gamma`: comma-separated `α` labels shared by all components.
//! - `j`: `;`-separated `tuple/class/verdict` items, verdict `one` or `many`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Deserialize;

use crate::chevalley::build_structure_table;
use crate::construct::{annihilator_tower, central_symmetry_solutions, deform_many, tower_is_consistent};
use crate::error::{Error, Result};
use crate::fixtures::{parse_component, resolve_form};
use crate::golden::{check_table, load_all, RowStatus};
use crate::parabolic::{filtration_component, grade, ParabolicGrading, Xi};
use crate::realform::{Catalog, RealFormDescriptor};
use crate::symmetry::{classify, ClassificationRow, JClass, Verdict};

pub const FORMAT_NAME: &str = "parsym-table";
pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = concat!("parsym/", env!("CARGO_PKG_VERSION"));

/// Exit statuses of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const REFUSED: i32 = 2;
    pub const DIFF: i32 = 3;
}

/// Maps an error to the exit status it should produce.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inadmissible { .. }
        | Error::NonRegular(..)
        | Error::ImageNotInGMinus(_)
        | Error::JacobiFailure(_)
        | Error::NoSuchComponent { .. }
        | Error::SupportOutsidePPlus
        | Error::WrongClass(_) => exit::REFUSED,
        _ => exit::USAGE,
    }
}

/// Node numbering accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Numbering {
    Bourbaki,
    Paper,
}

impl Numbering {
    /// Converts 1-based nodes to Bourbaki numbering.
    ///
    /// The classification tables already number nodes as Bourbaki does, so the
    /// conversion is the identity for every family.
    pub fn to_bourbaki(self, nodes: &[usize]) -> Vec<usize> {
        nodes.to_vec()
    }

    pub fn name(self) -> &'static str {
        match self {
            Numbering::Bourbaki => "bourbaki",
            Numbering::Paper => "paper",
        }
    }
}

fn escape(v: &str) -> String {
    let mut out = String::with_capacity(v.len());
    for c in v.chars() {
        match c {
            '%' | ' ' | '=' | '\n' => {
                let _ = write!(out, "%{:02X}", c as u32);
            }
            _ => out.push(c),
        }
    }
    out
}

fn unescape(v: &str) -> Result<String> {
    let mut out = String::with_capacity(v.len());
    let mut it = v.chars();
    while let Some(c) = it.next() {
        if c == '%' {
            let hex: String = it.by_ref().take(2).collect();
            let code = u32::from_str_radix(&hex, 16).map_err(|_| Error::Parse(format!("bad escape `%{hex}`")))?;
            out.push(char::from_u32(code).ok_or_else(|| Error::Parse(format!("bad escape `%{hex}`")))?);
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn split_list(v: &str, sep: char) -> Vec<String> {
    if v.is_empty() {
        Vec::new()
    } else {
        v.split(sep).map(str::to_string).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocComponent {
    pub label: String,
    pub homogeneity: i64,
    pub gamma: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocAction {
    pub tuple: String,
    pub class: JClass,
    pub verdict: Verdict,
}

/// One classification row in document form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocRow {
    pub form: String,
    pub xi: Vec<String>,
    pub components: Vec<DocComponent>,
    pub gamma: Vec<String>,
    pub j: Vec<DocAction>,
}

impl DocRow {
    pub fn from_row(rf: &RealFormDescriptor, row: &ClassificationRow) -> DocRow {
        DocRow {
            form: row.real_form.clone(),
            xi: rf.display_nodes(&row.xi).iter().map(|&i| rf.node_label(i)).collect(),
            components: row
                .components
                .iter()
                .map(|c| DocComponent { label: c.label.clone(), homogeneity: c.homogeneity, gamma: c.gamma.clone() })
                .collect(),
            gamma: row.gamma.clone(),
            j: row
                .j_actions
                .iter()
                .map(|(j, v)| DocAction { tuple: j.tuple_repr(), class: j.class, verdict: *v })
                .collect(),
        }
    }

    pub fn render_structured(&self) -> String {
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("{}@{}@{}", c.label, c.homogeneity, c.gamma.join("+")))
            .collect();
        let js: Vec<String> = self
            .j
            .iter()
            .map(|a| {
                let v = match a.verdict {
                    Verdict::AtMostOne => "one",
                    Verdict::PossiblyMany => "many",
                };
                format!("{}/{}/{}", a.tuple, a.class, v)
            })
            .collect();
        format!(
            "row form={} xi={} components={} gamma={} j={}",
            escape(&self.form),
            escape(&self.xi.join(",")),
            escape(&comps.join(";")),
            escape(&self.gamma.join(",")),
            escape(&js.join(";"))
        )
    }

    pub fn render_table(&self) -> String {
        let comps: Vec<String> = self.components.iter().map(|c| format!("{} h={}", c.label, c.homogeneity)).collect();
        let js: Vec<String> = self.j.iter().map(|a| format!("{} {} [{}]", a.tuple, a.class, a.verdict)).collect();
        format!(
            "{:<12} Ξ={{{}}}  κ_H: {}  γ: {}  J: {}",
            self.form,
            self.xi.join(","),
            if comps.is_empty() { "-".into() } else { comps.join(", ") },
            if self.gamma.is_empty() { "-".into() } else { self.gamma.join(",") },
            if js.is_empty() { "-".into() } else { js.join(", ") }
        )
    }
}

fn parse_class(s: &str) -> Result<JClass> {
    Ok(match s {
        "identity" => JClass::Identity,
        "usual" => JClass::Usual,
        "para_complex" => JClass::ParaComplex,
        "complex" => JClass::Complex,
        _ => return Err(Error::Parse(format!("unknown class `{s}`"))),
    })
}

/// Splits a record into its keyword and ordered, unescaped field values.
fn fields(line: &str, keyword: &str, names: &[&str]) -> Result<Vec<String>> {
    let mut parts = line.split(' ');
    if parts.next() != Some(keyword) {
        return Err(Error::Parse(format!("expected `{keyword}` record: {line}")));
    }
    let mut out = Vec::with_capacity(names.len());
    for name in names {
        let part = parts.next().ok_or_else(|| Error::Parse(format!("missing field `{name}`: {line}")))?;
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad field `{part}`")))?;
        if k != *name {
            return Err(Error::Parse(format!("expected field `{name}`, found `{k}`")));
        }
        out.push(unescape(v)?);
    }
    if let Some(extra) = parts.next() {
        return Err(Error::Parse(format!("unexpected field `{extra}`")));
    }
    Ok(out)
}

fn parse_row(line: &str) -> Result<DocRow> {
    let f = fields(line, "row", &["form", "xi", "components", "gamma", "j"])?;
    let components = split_list(&f[2], ';')
        .into_iter()
        .map(|item| {
            let parts: Vec<&str> = item.split('@').collect();
            let [label, h, gamma] = parts[..] else {
                return Err(Error::Parse(format!("bad component `{item}`")));
            };
            Ok(DocComponent {
                label: label.to_string(),
                homogeneity: h.parse().map_err(|_| Error::Parse(format!("bad homogeneity `{h}`")))?,
                gamma: split_list(gamma, '+'),
            })
        })
        .collect::<Result<_>>()?;
    let j = split_list(&f[4], ';')
        .into_iter()
        .map(|item| {
            let parts: Vec<&str> = item.split('/').collect();
            let [tuple, class, verdict] = parts[..] else {
                return Err(Error::Parse(format!("bad action `{item}`")));
            };
            let verdict = match verdict {
                "one" => Verdict::AtMostOne,
                "many" => Verdict::PossiblyMany,
                _ => return Err(Error::Parse(format!("bad verdict `{verdict}`"))),
            };
            Ok(DocAction { tuple: tuple.to_string(), class: parse_class(class)?, verdict })
        })
        .collect::<Result<_>>()?;
    Ok(DocRow { form: f[0].clone(), xi: split_list(&f[1], ','), components, gamma: split_list(&f[3], ','), j })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub catalog_sha256: String,
    pub numbering: String,
    pub tool: String,
}

/// A full sweep: rows sorted by real form, then Ξ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDocument {
    pub provenance: Provenance,
    pub rows: Vec<DocRow>,
}

impl TableDocument {
    pub fn render(&self) -> String {
        let mut s = format!("format={FORMAT_NAME} version={FORMAT_VERSION}\n");
        let p = &self.provenance;
        let _ = writeln!(
            s,
            "provenance catalog_sha256={} numbering={} tool={}",
            escape(&p.catalog_sha256),
            escape(&p.numbering),
            escape(&p.tool)
        );
        for r in &self.rows {
            s.push_str(&r.render_structured());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<TableDocument> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty document".into()))?;
        let expected = format!("format={FORMAT_NAME} version={FORMAT_VERSION}");
        if header != expected {
            return Err(Error::Parse(format!("unsupported header `{header}`")));
        }
        let prov = lines.next().ok_or_else(|| Error::Parse("missing provenance".into()))?;
        let f = fields(prov, "provenance", &["catalog_sha256", "numbering", "tool"])?;
        let provenance = Provenance { catalog_sha256: f[0].clone(), numbering: f[1].clone(), tool: f[2].clone() };
        let rows = lines.filter(|l| !l.is_empty()).map(parse_row).collect::<Result<_>>()?;
        Ok(TableDocument { provenance, rows })
    }
}

/// Every σ-stable admissible Ξ of a real form, ordered by node list.
pub fn admissible_xis(rf: &RealFormDescriptor) -> Vec<Xi> {
    let n = rf.rank();
    let mut out: Vec<Xi> = (1u64..(1u64 << n))
        .filter_map(|mask| {
            let nodes: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if nodes.iter().any(|&i| mask >> rf.sigma[i] & 1 == 0) {
                return None;
            }
            let xi = Xi::new(nodes, n).ok()?;
            rf.admissible_xi(&xi).then_some(xi)
        })
        .collect();
    out.sort_by(|a, b| a.indices().cmp(b.indices()));
    out
}

/// Classifies every catalog form of rank ≤ `max_rank` over every admissible Ξ.
pub fn sweep(catalog: &Catalog, max_rank: usize, numbering: Numbering) -> Result<TableDocument> {
    let forms = catalog.instances_up_to_rank(max_rank);
    let jobs: Vec<(&RealFormDescriptor, Xi)> =
        forms.iter().flat_map(|rf| admissible_xis(rf).into_iter().map(move |xi| (rf, xi))).collect();
    // Results come back in job order, so worker scheduling cannot affect the output.
    let mut keyed: Vec<((String, Vec<usize>), DocRow)> = jobs
        .par_iter()
        .map(|(rf, xi)| {
            let row = classify(rf, xi)?;
            Ok(((rf.name.clone(), xi.indices().to_vec()), DocRow::from_row(rf, &row)))
        })
        .collect::<Result<_>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(TableDocument {
        provenance: Provenance {
            catalog_sha256: catalog.hash.clone(),
            numbering: numbering.name().into(),
            tool: TOOL_VERSION.into(),
        },
        rows: keyed.into_iter().map(|(_, r)| r).collect(),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownMismatch {
    pub table: u32,
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnownMismatchFile {
    #[serde(rename = "mismatch", default)]
    mismatches: Vec<KnownMismatch>,
}

pub const KNOWN_MISMATCH_FILE: &str = "known_mismatches.toml";

/// Rows recorded as disagreeing with the computed classification, keyed `(table, row)`.
pub fn load_known_mismatches(dir: &Path) -> Result<Vec<KnownMismatch>> {
    let path = dir.join(KNOWN_MISMATCH_FILE);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(&path)?;
    let f: KnownMismatchFile = toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Ok(f.mismatches)
}

#[derive(Debug, Clone, Default)]
pub struct DiffReport {
    /// Failing rows not listed as known mismatches.
    pub unexpected: Vec<String>,
    /// Known mismatches that now agree.
    pub resolved: Vec<(u32, usize)>,
    pub rows_checked: usize,
}

impl DiffReport {
    pub fn is_clean(&self) -> bool {
        self.unexpected.is_empty()
    }
}

/// Checks the golden tables in `dir` against the classification at rank ≤ `max_rank`.
pub fn diff_golden(catalog: &Catalog, dir: &Path, max_rank: usize) -> Result<DiffReport> {
    let tables = load_all(dir, catalog)?;
    let known: BTreeSet<(u32, usize)> = load_known_mismatches(dir)?.iter().map(|k| (k.table, k.row)).collect();
    let mut report = DiffReport::default();
    for t in &tables {
        for r in check_table(catalog, t, max_rank)? {
            if r.status == RowStatus::Uncovered {
                continue;
            }
            report.rows_checked += 1;
            let failing = r.failures().next().is_some();
            let key = (r.table, r.index);
            if failing && !known.contains(&key) {
                let detail: Vec<String> = r
                    .failures()
                    .map(|i| match &i.outcome {
                        crate::golden::InstanceOutcome::Fail(m) => format!("{}: {m}", i.form),
                        _ => String::new(),
                    })
                    .collect();
                report.unexpected.push(format!("T{}#{} {}: {}", r.table, r.index, r.summary, detail.join(" | ")));
            } else if !failing && known.contains(&key) {
                report.resolved.push(key);
            }
        }
    }
    Ok(report)
}

/// Grading summary of a type or real form.
pub fn grade_report(catalog: &Catalog, target: &str, nodes: &[usize]) -> Result<String> {
    let rf = resolve_form(catalog, target)?;
    let xi = xi_from_nodes(&rf, nodes)?;
    let g = grade(rf.rs.clone(), xi)?;
    Ok(render_grading(&rf, &g))
}

fn xi_from_nodes(rf: &RealFormDescriptor, nodes: &[usize]) -> Result<Xi> {
    let idx = nodes
        .iter()
        .map(|&n| {
            if n == 0 || n > rf.rank() {
                Err(Error::IndexOutOfRange { index: n, rank: rf.rank() })
            } else {
                Ok(n - 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    rf.table_xi(&idx)
}

fn render_grading(rf: &RealFormDescriptor, g: &ParabolicGrading) -> String {
    let mut s = String::new();
    let labels: Vec<String> = g.xi.indices().iter().map(|&i| rf.node_label(i)).collect();
    let _ = writeln!(s, "{} Ξ={{{}}} k={}", rf.name, labels.join(","), g.k);
    let dims: Vec<String> = (1..=g.k).map(|d| g.dim(-d).to_string()).collect();
    let _ = writeln!(s, "dims g_-1..g_-{}: ({})", g.k, dims.join(","));
    for d in -g.k..=g.k {
        let _ = writeln!(s, "  g_{d}: {}", g.dim(d));
    }
    for i in -g.k..=g.k {
        if let Ok(p) = filtration_component(g, i) {
            let dim = p.roots.len() + if p.includes_cartan { g.rs.rank() } else { 0 };
            let _ = writeln!(s, "  g^{i}: {dim}");
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Structured,
}

/// Classification of one real form at one Ξ.
pub fn classify_report(catalog: &Catalog, form: &str, nodes: &[usize], fmt: OutputFormat) -> Result<String> {
    let rf = catalog.parse_instance(form)?;
    let xi = xi_from_nodes(&rf, nodes)?;
    let row = classify(&rf, &xi)?;
    let doc = DocRow::from_row(&rf, &row);
    Ok(match fmt {
        OutputFormat::Table => doc.render_table(),
        OutputFormat::Structured => doc.render_structured(),
    } + "\n")
}

/// Runs the deformation construction and renders its report.
pub fn deform_report(catalog: &Catalog, target: &str, nodes: &[usize], comps: &[String], outer: bool) -> Result<String> {
    let rf = resolve_form(catalog, target)?;
    let xi = xi_from_nodes(&rf, nodes)?;
    if !rf.admissible_xi(&xi) {
        return Err(Error::Inadmissible { form: rf.name.clone(), xi: xi.to_string() });
    }
    let g = grade(rf.rs.clone(), xi)?;
    let cs = comps.iter().map(|c| parse_component(&rf, &g, c)).collect::<Result<Vec<_>>>()?;
    let table = Arc::new(build_structure_table(rf.rs.clone()));
    let d = deform_many(table, &g, &cs)?;
    let tower = annihilator_tower(&d);
    let sol = central_symmetry_solutions(&d, &rf, outer)?;
    let mut s = String::new();
    let labels: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "{} Ξ={} components {}", rf.name, g.xi, labels.join(" "));
    let _ = writeln!(s, "jacobi: ok");
    let _ = writeln!(s, "curvature homogeneity: {:?}", d.curvature.homogeneity_profile(&g));
    let dims = tower.dims();
    let rest: Vec<String> = dims[1..].iter().map(|d| d.to_string()).collect();
    let _ = writeln!(s, "tower: dim a0 = {}, dim a+ = {} ({};{})", tower.dim_a0(), tower.dim_a_plus(), dims[0], rest.join(","));
    let _ = writeln!(s, "tower consistent: {}", tower_is_consistent(&d, &tower));
    let tuples: Vec<String> = sol.finite.iter().map(|j| j.tuple_repr()).collect();
    let _ = writeln!(
        s,
        "finite-order solutions ({}): {}",
        if outer { "all" } else { "inner" },
        if tuples.is_empty() { "none".into() } else { tuples.join(" ") }
    );
    let par: Vec<String> = sol
        .parametric
        .iter()
        .map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(s, "parametric exponents: {}", if par.is_empty() { "none".into() } else { par.join(" ") });
    Ok(s)
}

/// Writes a sweep to `path`.
pub fn write_tables(catalog: &Catalog, max_rank: usize, numbering: Numbering, path: &Path) -> Result<TableDocument> {
    let doc = sweep(catalog, max_rank, numbering)?;
    std::fs::write(path, doc.render())?;
    Ok(doc)
}
