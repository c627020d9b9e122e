//! Golden classification tables: loading and row-by-row verification.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::{eval_bool, eval_int, render, Env};
use crate::realform::{Catalog, RealFormDescriptor};
use crate::symmetry::{
    gamma_orbits, grading_for, parse_phase_symbol, real_components, row_for, surviving_components, RealComponent,
};

pub const TABLE_NUMBERS: [u32; 5] = [2, 3, 4, 5, 6];

/// Directory holding the golden files shipped with the crate.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub root: String,
    #[serde(default)]
    pub when: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRow {
    pub forms: Vec<String>,
    #[serde(default)]
    pub vars: Vec<[String; 3]>,
    #[serde(default, rename = "where")]
    pub condition: Option<String>,
    pub xi: Vec<String>,
    pub components: Vec<String>,
    #[serde(default)]
    pub gamma: Vec<GammaSpec>,
    pub j: Vec<String>,
}

impl GoldenRow {
    pub fn summary(&self) -> String {
        format!(
            "{} {{{}}} {} J={}",
            self.forms.join("/"),
            self.xi.join(","),
            self.components.join(","),
            self.j.join(",")
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenTable {
    pub table: u32,
    pub catalog_sha256: String,
    #[serde(rename = "row")]
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    pub fn parse(text: &str, catalog: &Catalog) -> Result<GoldenTable> {
        let t: GoldenTable = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if t.catalog_sha256 != catalog.hash {
            return Err(Error::CatalogHashMismatch { expected: t.catalog_sha256, found: catalog.hash.clone() });
        }
        Ok(t)
    }

    pub fn load(path: &Path, catalog: &Catalog) -> Result<GoldenTable> {
        let text = std::fs::read_to_string(path)?;
        GoldenTable::parse(&text, catalog)
    }
}

pub fn table_path(dir: &Path, table: u32) -> PathBuf {
    dir.join(format!("table{table}.toml"))
}

pub fn load_all(dir: &Path, catalog: &Catalog) -> Result<Vec<GoldenTable>> {
    TABLE_NUMBERS.iter().map(|&t| GoldenTable::load(&table_path(dir, t), catalog)).collect()
}

/// Variable assignments of a row, in nested order.
pub fn row_environments(row: &GoldenRow) -> Result<Vec<Env>> {
    let mut envs = vec![Env::new()];
    for [name, lo, hi] in &row.vars {
        let mut next = Vec::new();
        for env in envs {
            let (a, b) = (eval_int(lo, &env)?, eval_int(hi, &env)?);
            for v in a..=b {
                let mut e = env.clone();
                e.insert(name.clone(), v);
                next.push(e);
            }
        }
        envs = next;
    }
    if let Some(c) = &row.condition {
        let mut kept = Vec::new();
        for e in envs {
            if eval_bool(c, &e)? {
                kept.push(e);
            }
        }
        envs = kept;
    }
    Ok(envs)
}

fn node(rf: &RealFormDescriptor, text: &str, env: &Env) -> Result<usize> {
    let t = text.trim();
    let (body, primed) = match t.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (t, false),
    };
    let v = eval_int(body, env)?;
    if v < 1 {
        return Err(Error::Parse(format!("node `{t}` evaluates to {v}")));
    }
    rf.parse_node_label(&format!("{v}{}", if primed { "'" } else { "" }))
}

/// Parses `(a,b)` into node indices.
pub fn parse_label(rf: &RealFormDescriptor, label: &str, env: &Env) -> Result<(usize, usize)> {
    let inner = label
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad component `{label}`")))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("bad component `{label}`")));
    }
    Ok((node(rf, parts[0], env)?, node(rf, parts[1], env)?))
}

/// Expands a J entry such as `(-,±,+)` into explicit phase tuples.
pub fn expand_j(entry: &str) -> Result<Vec<Vec<u8>>> {
    let inner = entry
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad J entry `{entry}`")))?;
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for tok in inner.split(',') {
        let opts: Vec<u8> = if tok.trim() == "±" { vec![0, 2] } else { vec![parse_phase_symbol(tok)?] };
        out = out
            .into_iter()
            .flat_map(|t| {
                opts.iter().map(move |&o| {
                    let mut t = t.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

fn add(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| (x + y) % 4).collect()
}

/// The full set of nontrivial actions a J column stands for: listed order-two
/// entries, plus every listed complex entry composed with the group they generate.
pub fn expected_j_set(entries: &[String]) -> Result<BTreeSet<Vec<u8>>> {
    let mut order_two = BTreeSet::new();
    let mut complex = BTreeSet::new();
    for e in entries {
        for t in expand_j(e)? {
            if t.iter().any(|p| p % 2 == 1) {
                complex.insert(t);
            } else if t.iter().any(|&p| p != 0) {
                order_two.insert(t);
            }
        }
    }
    let mut span: BTreeSet<Vec<u8>> = BTreeSet::new();
    if let Some(first) = order_two.iter().chain(complex.iter()).next() {
        span.insert(vec![0; first.len()]);
    }
    loop {
        let mut grew = false;
        let current: Vec<Vec<u8>> = span.iter().cloned().collect();
        for a in &current {
            for b in &order_two {
                if span.insert(add(a, b)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out = order_two;
    for c in &complex {
        for s in &span {
            out.insert(add(c, s));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceOutcome {
    Pass,
    Fail(String),
    Inadmissible,
}

#[derive(Debug, Clone)]
pub struct InstanceCheck {
    pub form: String,
    pub env: Env,
    pub quasi_split: bool,
    pub outcome: InstanceOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowStatus {
    Pass,
    /// Failures only on forms that are not quasi-split.
    Unverified,
    Fail,
    /// No instance within the rank bound is in the catalog.
    Uncovered,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Pass => "pass",
            RowStatus::Unverified => "unverified",
            RowStatus::Fail => "FAIL",
            RowStatus::Uncovered => "uncovered",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RowReport {
    pub table: u32,
    pub index: usize,
    pub summary: String,
    pub instances: Vec<InstanceCheck>,
    pub status: RowStatus,
}

impl RowReport {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceCheck> {
        self.instances.iter().filter(|i| matches!(i.outcome, InstanceOutcome::Fail(_)))
    }
}

fn show_set(s: &BTreeSet<Vec<u8>>) -> String {
    let v: Vec<String> = s
        .iter()
        .map(|t| {
            let p: Vec<&str> = t.iter().map(|&x| crate::symmetry::phase_symbol(x)).collect();
            format!("({})", p.join(","))
        })
        .collect();
    format!("{{{}}}", v.join(" "))
}

fn check_instance(rf: &RealFormDescriptor, row: &GoldenRow, env: &Env) -> Result<InstanceOutcome> {
    let nodes: Vec<usize> = row.xi.iter().map(|x| node(rf, x, env)).collect::<Result<_>>()?;
    let xi = rf.table_xi(&nodes)?;
    if !rf.admissible_xi(&xi) {
        return Ok(InstanceOutcome::Inadmissible);
    }
    let g = grading_for(rf, &xi)?;
    let comps = real_components(rf, &g)?;
    let mut chosen: Vec<&RealComponent> = Vec::new();
    for label in &row.components {
        let (i, j) = parse_label(rf, label, env)?;
        match comps.iter().find(|c| c.matches(rf, i, j)) {
            None => return Ok(InstanceOutcome::Fail(format!("component {label} does not exist"))),
            Some(c) if !c.is_regular() => {
                return Ok(InstanceOutcome::Fail(format!(
                    "component {label} has homogeneity {}",
                    c.homogeneity()
                )))
            }
            Some(c) => chosen.push(c),
        }
    }
    let mut expected_gamma = BTreeSet::new();
    for gs in &row.gamma {
        let on = match &gs.when {
            Some(w) => eval_bool(w, env)?,
            None => true,
        };
        if on {
            let k = node(rf, &gs.root, env)?;
            expected_gamma.insert(rf.orbits(&xi).into_iter().find(|o| o.contains(&k)).ok_or_else(|| {
                Error::Parse(format!("γ root {} is not in Ξ", gs.root))
            })?);
        }
    }
    let found_gamma: BTreeSet<Vec<usize>> = gamma_orbits(rf, &g, &chosen).into_iter().collect();
    let mut problems = Vec::new();
    if found_gamma != expected_gamma {
        let show = |s: &BTreeSet<Vec<usize>>| {
            s.iter().map(|o| format!("α{}", rf.node_label(o[0]))).collect::<Vec<_>>().join(",")
        };
        problems.push(format!("γ: expected {{{}}}, found {{{}}}", show(&expected_gamma), show(&found_gamma)));
    }
    let expected_j = expected_j_set(&row.j)?;
    let width = rf.display_nodes(&xi).len();
    if expected_j.iter().any(|t| t.len() != width) {
        return Err(Error::Parse(format!("J tuples of {} need {width} entries", row.summary())));
    }
    // A single component lists every action fixing it; several components list
    // the actions whose surviving regular set is exactly those components.
    let exact = chosen.len() > 1;
    let found_j: BTreeSet<Vec<u8>> = row_for(rf, &g, &chosen)
        .j_actions
        .iter()
        .filter(|(j, _)| {
            !exact || {
                let s = surviving_components(j, &comps);
                s.iter().filter(|c| c.is_regular()).count() == chosen.len()
            }
        })
        .map(|(j, _)| j.shown_phases())
        .collect();
    if found_j != expected_j {
        problems.push(format!("J: expected {}, found {}", show_set(&expected_j), show_set(&found_j)));
    }
    Ok(if problems.is_empty() { InstanceOutcome::Pass } else { InstanceOutcome::Fail(problems.join("; ")) })
}

/// Checks every instance of a row whose simple factor has rank ≤ `max_rank`.
pub fn check_row(catalog: &Catalog, table: u32, index: usize, row: &GoldenRow, max_rank: usize) -> Result<RowReport> {
    let mut seen = BTreeSet::new();
    let mut instances = Vec::new();
    for env in row_environments(row)? {
        for template in &row.forms {
            let name = render(template, &env)?;
            let Ok(rf) = catalog.parse_instance(&name) else { continue };
            if rf.factor_rank() > max_rank {
                continue;
            }
            let xi_key: Vec<i64> = row.xi.iter().map(|x| eval_int(x, &env)).collect::<Result<_>>()?;
            let comp_key: Vec<String> = row
                .components
                .iter()
                .map(|c| render(&c.replace('(', "{").replace(',', "},{").replace(')', "}").replace('\'', ""), &env))
                .collect::<Result<_>>()
                .unwrap_or_default();
            if !seen.insert((rf.name.clone(), xi_key, comp_key, env.clone())) {
                continue;
            }
            let outcome = check_instance(&rf, row, &env)?;
            instances.push(InstanceCheck { form: rf.name.clone(), env: env.clone(), quasi_split: rf.quasi_split, outcome });
        }
    }
    let checked: Vec<&InstanceCheck> =
        instances.iter().filter(|i| i.outcome != InstanceOutcome::Inadmissible).collect();
    let failed_qs = checked.iter().any(|i| i.quasi_split && matches!(i.outcome, InstanceOutcome::Fail(_)));
    let failed_other = checked.iter().any(|i| !i.quasi_split && matches!(i.outcome, InstanceOutcome::Fail(_)));
    let status = if checked.is_empty() {
        RowStatus::Uncovered
    } else if failed_qs {
        RowStatus::Fail
    } else if failed_other {
        RowStatus::Unverified
    } else {
        RowStatus::Pass
    };
    Ok(RowReport { table, index: index + 1, summary: row.summary(), instances, status })
}

pub fn check_table(catalog: &Catalog, table: &GoldenTable, max_rank: usize) -> Result<Vec<RowReport>> {
    table
        .rows
        .par_iter()
        .enumerate()
        .map(|(i, r)| check_row(catalog, table.table, i, r, max_rank))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_expansion() {
        assert_eq!(expand_j("(±,±)").unwrap().len(), 4);
        let s = expected_j_set(&["(±,±)".into()]).unwrap();
        assert_eq!(s.len(), 3);
        let s = expected_j_set(&["(-)".into(), "(i)".into()]).unwrap();
        assert_eq!(s, [vec![1], vec![2], vec![3]].into_iter().collect());
        let s = expected_j_set(&["(-,-)".into(), "(i,-i)".into()]).unwrap();
        assert_eq!(s, [vec![2, 2], vec![1, 3], vec![3, 1]].into_iter().collect());
    }

    #[test]
    fn hash_mismatch_is_refused() {
        let cat = Catalog::builtin();
        let text = "table = 2\ncatalog_sha256 = \"00\"\n[[row]]\nforms=[\"g2(2)\"]\nxi=[\"1\"]\ncomponents=[\"(1,2)\"]\nj=[\"(-)\"]\n";
        assert!(matches!(GoldenTable::parse(text, &cat), Err(Error::CatalogHashMismatch { .. })));
    }

    #[test]
    fn label_parsing() {
        let cat = Catalog::builtin();
        let rf = cat.parse_instance("sl(6,C)").unwrap();
        let env: Env = [("p".to_string(), 2)].into_iter().collect();
        assert_eq!(parse_label(&rf, "(p+1',p')", &env).unwrap(), (7, 6));
    }
}
