//! Real forms as Satake-style descriptors: the conjugation σ* on simple
//! roots and the compact (black) nodes, loaded from a versioned catalog.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use regex::Regex;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::{self, Env};
use crate::parabolic::Xi;
use crate::rootsys::{parse_types, Root, RootSystem, SimpleType};

pub const BUILTIN_CATALOG: &str = include_str!("../data/catalog.toml");
pub const CATALOG_ENV: &str = "PARSYM_CATALOG_DIR";
pub const CATALOG_FILE: &str = "catalog.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaKind {
    Identity,
    Reverse,
    SwapLastTwo,
    SwapFactors,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NodeRange {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub step: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FormSpec {
    pub id: String,
    pub pattern: String,
    #[serde(default)]
    pub from_match: BTreeMap<String, String>,
    #[serde(default)]
    pub derive: BTreeMap<String, String>,
    pub requires: String,
    pub name: String,
    pub types: Vec<String>,
    pub sigma: SigmaKind,
    #[serde(default)]
    pub compact: Vec<NodeRange>,
    pub quasi_split: String,
}

#[derive(Debug, Deserialize)]
struct CatalogFile {
    version: u32,
    form: Vec<FormSpec>,
}

pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct Catalog {
    pub version: u32,
    /// Hex SHA-256 of the catalog text.
    pub hash: String,
    forms: Vec<(FormSpec, Regex)>,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        if file.version != CATALOG_VERSION {
            return Err(Error::Catalog(format!("unsupported catalog version {}", file.version)));
        }
        let forms = file
            .form
            .into_iter()
            .map(|f| {
                let re = Regex::new(&f.pattern).map_err(|e| Error::Catalog(e.to_string()))?;
                Ok((f, re))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Catalog { version: file.version, hash: sha256_hex(text), forms })
    }

    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    /// Loads from `$PARSYM_CATALOG_DIR/catalog.toml` when set, else the built-in copy.
    pub fn load() -> Result<Catalog> {
        match std::env::var_os(CATALOG_ENV) {
            Some(dir) => {
                let path = std::path::Path::new(&dir).join(CATALOG_FILE);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
                Catalog::parse(&text)
            }
            None => Ok(Catalog::builtin()),
        }
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = Vec::new();
        for (f, _) in &self.forms {
            if !ids.contains(&f.id) {
                ids.push(f.id.clone());
            }
        }
        ids
    }

    /// Instantiates the family `id` at the given primary parameters.
    pub fn lookup(&self, id: &str, params: &Env) -> Result<RealFormDescriptor> {
        let mut known = false;
        let mut last_err = None;
        for (spec, _) in self.forms.iter().filter(|(f, _)| f.id == id) {
            known = true;
            match instantiate(spec, params.clone()) {
                Ok(Some(d)) => return Ok(d),
                Ok(None) => {}
                Err(e) => last_err = Some(e),
            }
        }
        if !known {
            return Err(Error::UnknownForm(id.to_string()));
        }
        Err(last_err.unwrap_or_else(|| Error::ParamOutOfRange {
            form: id.to_string(),
            detail: format!("{params:?}"),
        }))
    }

    /// Resolves an instance name such as `su(1,2)` or `sl(4,R)`.
    pub fn parse_instance(&self, name: &str) -> Result<RealFormDescriptor> {
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let mut matched = false;
        for (spec, re) in &self.forms {
            let Some(caps) = re.captures(&compact) else { continue };
            matched = true;
            let mut raw = Env::new();
            for gname in re.capture_names().flatten() {
                if let Some(m) = caps.name(gname) {
                    let v: i64 = m.as_str().parse().map_err(|_| Error::Parse(name.to_string()))?;
                    raw.insert(gname.to_string(), v);
                }
            }
            let params = if spec.from_match.is_empty() {
                raw
            } else {
                spec.from_match
                    .iter()
                    .map(|(k, e)| Ok((k.clone(), expr::eval_int(e, &raw)?)))
                    .collect::<Result<Env>>()?
            };
            if let Some(d) = instantiate(spec, params)? {
                return Ok(d);
            }
        }
        if matched {
            Err(Error::ParamOutOfRange { form: name.to_string(), detail: "no catalog entry accepts these parameters".into() })
        } else {
            Err(Error::UnknownForm(name.to_string()))
        }
    }

    /// Every instance whose simple complexified factor has rank ≤ `max_rank`,
    /// sorted by name.
    pub fn instances_up_to_rank(&self, max_rank: usize) -> Vec<RealFormDescriptor> {
        let bound = 2 * max_rank as i64 + 2;
        let mut out: BTreeMap<String, RealFormDescriptor> = BTreeMap::new();
        let mut cache = RsCache::new();
        for (spec, re) in &self.forms {
            let names: Vec<String> = if spec.from_match.is_empty() {
                re.capture_names().flatten().map(str::to_string).collect()
            } else {
                spec.from_match.keys().cloned().collect()
            };
            let mut grid: Vec<Env> = vec![Env::new()];
            for n in &names {
                grid = grid
                    .into_iter()
                    .flat_map(|env| {
                        (0..=bound).map(move |v| {
                            let mut e = env.clone();
                            e.insert(n.clone(), v);
                            e
                        })
                    })
                    .collect();
            }
            for env in grid {
                if let Ok(Some(d)) = instantiate_cached(spec, env, &mut cache, max_rank) {
                    out.entry(d.name.clone()).or_insert(d);
                }
            }
        }
        out.into_values().collect()
    }
}

type RsCache = BTreeMap<Vec<SimpleType>, Arc<RootSystem>>;

fn instantiate(spec: &FormSpec, env: Env) -> Result<Option<RealFormDescriptor>> {
    instantiate_cached(spec, env, &mut RsCache::new(), usize::MAX)
}

fn instantiate_cached(
    spec: &FormSpec,
    mut env: Env,
    cache: &mut RsCache,
    max_factor_rank: usize,
) -> Result<Option<RealFormDescriptor>> {
    for (k, e) in &spec.derive {
        let v = expr::eval_int(e, &env)?;
        env.insert(k.clone(), v);
    }
    if !expr::eval_bool(&spec.requires, &env)? {
        return Ok(None);
    }
    let name = expr::render(&spec.name, &env)?;
    let types: Vec<SimpleType> = spec
        .types
        .iter()
        .map(|t| parse_types(&expr::render(t, &env)?))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if types.iter().any(|t| t.rank > max_factor_rank) {
        return Ok(None);
    }
    let rs = match cache.get(&types) {
        Some(rs) => rs.clone(),
        None => {
            let rs = Arc::new(RootSystem::new(&types)?);
            cache.insert(types.clone(), rs.clone());
            rs
        }
    };
    let n = rs.rank();
    let sigma: Vec<usize> = match spec.sigma {
        SigmaKind::Identity => (0..n).collect(),
        SigmaKind::Reverse => (0..n).map(|i| n - 1 - i).collect(),
        SigmaKind::SwapLastTwo => {
            let mut s: Vec<usize> = (0..n).collect();
            s.swap(n - 2, n - 1);
            s
        }
        SigmaKind::SwapFactors => {
            if types.len() != 2 || types[0] != types[1] {
                return Err(Error::Catalog(format!("{name}: factor swap needs two equal factors")));
            }
            let r = types[0].rank;
            (0..n).map(|i| if i < r { i + r } else { i - r }).collect()
        }
    };
    let mut compact = BTreeSet::new();
    for range in &spec.compact {
        let from = expr::eval_int(&range.from, &env)?;
        let to = expr::eval_int(&range.to, &env)?;
        let step = range.step.unwrap_or(1).max(1);
        let mut i = from;
        while i <= to {
            if i < 1 || i as usize > n {
                return Err(Error::Catalog(format!("{name}: compact node {i} out of range")));
            }
            compact.insert(i as usize - 1);
            i += step as i64;
        }
    }
    let quasi_split = expr::eval_bool(&spec.quasi_split, &env)?;
    let d = RealFormDescriptor {
        id: spec.id.clone(),
        name,
        params: env,
        complex_type: types,
        sigma,
        compact_nodes: compact,
        complex_as_real: spec.sigma == SigmaKind::SwapFactors,
        quasi_split,
        rs,
    };
    d.validate()?;
    Ok(Some(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSpaceKindTag {
    Real,
    ComplexPair,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpaceKind {
    pub kind: RootSpaceKindTag,
    /// The σ*-image of the root (equal to the root itself for real root spaces).
    pub partner: Root,
}

#[derive(Debug, Clone)]
pub struct RealFormDescriptor {
    pub id: String,
    pub name: String,
    pub params: Env,
    pub complex_type: Vec<SimpleType>,
    /// Involution of the node set.
    pub sigma: Vec<usize>,
    pub compact_nodes: BTreeSet<usize>,
    pub complex_as_real: bool,
    pub quasi_split: bool,
    pub rs: Arc<RootSystem>,
}

impl RealFormDescriptor {
    /// The split real form of a complex type given directly, e.g. `A3` or `B2+G2`.
    pub fn split(types: &str) -> Result<RealFormDescriptor> {
        let complex_type = parse_types(types)?;
        let rs = Arc::new(RootSystem::new(&complex_type)?);
        let n = rs.rank();
        Ok(RealFormDescriptor {
            id: "split".into(),
            name: complex_type.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("+"),
            params: Env::new(),
            complex_type,
            sigma: (0..n).collect(),
            compact_nodes: BTreeSet::new(),
            complex_as_real: false,
            quasi_split: true,
            rs,
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.rs.rank();
        if self.sigma.len() != n || (0..n).any(|i| self.sigma[self.sigma[i]] != i) {
            return Err(Error::Catalog(format!("{}: σ is not an involution", self.name)));
        }
        if self.compact_nodes.iter().any(|&c| !self.compact_nodes.contains(&self.sigma[c])) {
            return Err(Error::Catalog(format!("{}: σ does not preserve the compact nodes", self.name)));
        }
        // σ must be a diagram automorphism.
        for i in 0..n {
            for j in 0..n {
                if self.rs.cartan[i][j] != self.rs.cartan[self.sigma[i]][self.sigma[j]] {
                    return Err(Error::Catalog(format!("{}: σ is not a diagram automorphism", self.name)));
                }
            }
        }
        if self.complex_as_real && !self.compact_nodes.is_empty() {
            return Err(Error::Catalog(format!("{}: complex form with compact nodes", self.name)));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Rank of one simple factor of the complexification.
    pub fn factor_rank(&self) -> usize {
        self.complex_type[0].rank
    }

    pub fn is_split(&self) -> bool {
        self.compact_nodes.is_empty() && (0..self.rank()).all(|i| self.sigma[i] == i)
    }

    pub fn admissible_xi(&self, xi: &Xi) -> bool {
        xi.indices().iter().all(|&i| {
            i < self.rank() && !self.compact_nodes.contains(&i) && xi.contains(self.sigma[i])
        })
    }

    pub fn sigma_coeffs(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coeffs.len()];
        for (i, &c) in coeffs.iter().enumerate() {
            out[self.sigma[i]] = c;
        }
        out
    }

    /// Real or complex-pair kind of a root space under the induced diagram action.
    pub fn root_space_kind(&self, r: &Root) -> RootSpaceKind {
        let partner = Root { coeffs: self.sigma_coeffs(&r.coeffs) };
        let kind = if partner == *r { RootSpaceKindTag::Real } else { RootSpaceKindTag::ComplexPair };
        RootSpaceKind { kind, partner }
    }

    /// σ*-orbits of the nodes of Ξ, each sorted, ordered by smallest member.
    pub fn orbits(&self, xi: &Xi) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &i in xi.indices() {
            if out.iter().any(|o| o.contains(&i)) {
                continue;
            }
            let mut o = vec![i];
            if self.sigma[i] != i {
                o.push(self.sigma[i]);
            }
            o.sort_unstable();
            out.push(o);
        }
        out
    }

    /// Table-style label of a node: `3`, or `3'` for the second copy of a complex form.
    pub fn node_label(&self, i: usize) -> String {
        if self.complex_as_real && i >= self.factor_rank() {
            format!("{}'", i - self.factor_rank() + 1)
        } else {
            (i + 1).to_string()
        }
    }

    /// Parses a node label such as `2` or `2'`.
    pub fn parse_node_label(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let (num, primed) = match s.strip_suffix('\'') {
            Some(t) => (t, true),
            None => (s, false),
        };
        let v: usize = num.parse().map_err(|_| Error::Parse(format!("bad node `{s}`")))?;
        if v == 0 {
            return Err(Error::Parse("nodes are numbered from 1".into()));
        }
        let idx = if primed {
            if !self.complex_as_real {
                return Err(Error::Parse(format!("primed node `{s}` on a non-complex form")));
            }
            v - 1 + self.factor_rank()
        } else {
            v - 1
        };
        self.rs.check_index(idx)?;
        Ok(idx)
    }

    /// Ξ from a table-style list; for complex forms unprimed nodes also select their copy.
    pub fn table_xi(&self, nodes: &[usize]) -> Result<Xi> {
        let mut all: Vec<usize> = nodes.to_vec();
        if self.complex_as_real {
            all.extend(nodes.iter().map(|&i| self.sigma[i]));
        }
        all.sort_unstable();
        all.dedup();
        Xi::new(all, self.rank())
    }

    /// Nodes of Ξ shown in table tuples (only the unprimed copy for complex forms).
    pub fn display_nodes(&self, xi: &Xi) -> Vec<usize> {
        xi.indices()
            .iter()
            .copied()
            .filter(|&i| !self.complex_as_real || i < self.factor_rank())
            .collect()
    }
}

impl fmt::Display for RealFormDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn split_sl_has_trivial_data() {
        let c = Catalog::builtin();
        let d = c.lookup("sl(n+1,R)", &env(&[("n", 3)])).unwrap();
        assert!(d.is_split());
        assert_eq!(d.name, "sl(4,R)");
    }

    #[test]
    fn quaternionic_form_compact_odd_nodes() {
        let c = Catalog::builtin();
        let d = c.lookup("sl(n+1,H)", &env(&[("n", 3)])).unwrap();
        assert_eq!(d.compact_nodes, [0, 2].into_iter().collect());
        assert!(d.admissible_xi(&Xi::new(vec![1], 3).unwrap()));
        assert!(!d.admissible_xi(&Xi::new(vec![0], 3).unwrap()));
        assert!(c.lookup("sl(n+1,H)", &env(&[("n", 2)])).is_err());
    }

    #[test]
    fn complex_form_swaps_copies() {
        let c = Catalog::builtin();
        let d = c.lookup("sl(n+1,C)", &env(&[("n", 2)])).unwrap();
        assert_eq!(d.complex_type.len(), 2);
        assert_eq!(d.sigma, vec![2, 3, 0, 1]);
        let xi = d.table_xi(&[0]).unwrap();
        assert_eq!(xi.indices(), &[0, 2]);
        assert!(d.admissible_xi(&xi));
        assert!(!d.admissible_xi(&Xi::new(vec![0], 4).unwrap()));
        assert_eq!(d.node_label(2), "1'");
        assert_eq!(d.parse_node_label("2'").unwrap(), 3);
        for r in &d.rs.roots {
            assert_eq!(d.root_space_kind(r).kind, RootSpaceKindTag::ComplexPair);
        }
    }

    #[test]
    fn su_middle_node_is_real() {
        let c = Catalog::builtin();
        let d = c.parse_instance("su(2,2)").unwrap();
        let mid = d.rs.simple_root(1);
        assert_eq!(d.root_space_kind(&mid).kind, RootSpaceKindTag::Real);
        let first = d.rs.simple_root(0);
        let k = d.root_space_kind(&first);
        assert_eq!(k.kind, RootSpaceKindTag::ComplexPair);
        assert_eq!(k.partner, d.rs.simple_root(2));
    }

    #[test]
    fn split_forms_have_only_real_roots() {
        let c = Catalog::builtin();
        for name in ["sl(5,R)", "g2(2)", "sp(8,R)", "so(4,4)", "so(3,4)"] {
            let d = c.parse_instance(name).unwrap();
            assert!(d.is_split(), "{name}");
            for r in &d.rs.roots {
                assert_eq!(d.root_space_kind(r).kind, RootSpaceKindTag::Real);
            }
        }
    }

    #[test]
    fn instance_parsing() {
        let c = Catalog::builtin();
        assert_eq!(c.parse_instance("su(2,1)").unwrap().name, "su(1,2)");
        let so35 = c.parse_instance("so(3,5)").unwrap();
        assert_eq!(so35.complex_type[0].to_string(), "D4");
        assert_eq!(so35.sigma, vec![0, 1, 3, 2]);
        assert!(so35.compact_nodes.is_empty());
        let spnn = c.parse_instance("sp(2,2)").unwrap();
        assert_eq!(spnn.compact_nodes, [0, 2].into_iter().collect());
        assert!(matches!(c.parse_instance("xx(3)"), Err(Error::UnknownForm(_))));
        assert!(matches!(c.parse_instance("sl(1,R)"), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(c.lookup("nope", &Env::new()), Err(Error::UnknownForm(_))));
    }

    #[test]
    fn every_instance_is_consistent() {
        let c = Catalog::builtin();
        let all = c.instances_up_to_rank(8);
        assert!(all.len() > 50);
        for d in &all {
            let n = d.rank();
            for i in 0..n {
                assert_eq!(d.sigma[d.sigma[i]], i);
            }
            for &k in &d.compact_nodes {
                assert!(d.compact_nodes.contains(&d.sigma[k]));
            }
            // stability of admissibility under σ
            for m in 1u32..(1 << n.min(10)) {
                let idx: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
                let xi = Xi::new(idx.clone(), n).unwrap();
                if d.admissible_xi(&xi) {
                    let s = Xi::new(idx.iter().map(|&i| d.sigma[i]).collect(), n).unwrap();
                    assert!(d.admissible_xi(&s));
                }
            }
        }
    }

    #[test]
    fn catalog_hash_is_stable() {
        let a = Catalog::builtin();
        assert_eq!(a.hash, sha256_hex(BUILTIN_CATALOG));
        assert_eq!(a.hash.len(), 64);
        assert!(Catalog::parse("version = 2\nform = []").is_err());
    }
}
