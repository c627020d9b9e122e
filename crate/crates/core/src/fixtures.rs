//! Worked construction examples stored as scale-invariant fixture data.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::chevalley::build_structure_table;
use crate::construct::{
    annihilator_tower, central_symmetry_solutions, deform_many, extension_curvature, matrix_structure_constants,
    tower_is_consistent, MatrixExtension,
};
use crate::error::{Error, Result};
use crate::kostant::{component, HarmonicComponent};
use crate::linalg::Matrix;
use crate::parabolic::{grade, ParabolicGrading, Xi};
use crate::realform::{Catalog, RealFormDescriptor};
use crate::scalar::{rat, Qi, Rat};

pub fn fixtures_dir() -> PathBuf {
    crate::golden::default_dir().join("fixtures")
}

#[derive(Debug, Clone, Deserialize)]
pub struct DeformCase {
    pub components: Vec<String>,
    pub dim_a0: Option<usize>,
    pub dim_a_plus: Option<usize>,
    pub parametric: Option<Vec<Vec<i64>>>,
    pub inner: Option<Vec<String>>,
    pub outer: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DeformFixture {
    pub form: String,
    pub xi: Vec<usize>,
    #[serde(rename = "case")]
    pub cases: Vec<DeformCase>,
}

/// What a deformation run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformOutcome {
    pub jacobi_ok: bool,
    pub tower_consistent: bool,
    pub dims: Vec<usize>,
    pub dim_a0: usize,
    pub dim_a_plus: usize,
    pub parametric: Vec<Vec<i64>>,
    pub inner: Vec<String>,
    pub outer: Vec<String>,
}

/// Resolves a real form name or a bare complex type (split form).
pub fn resolve_form(catalog: &Catalog, name: &str) -> Result<RealFormDescriptor> {
    match catalog.parse_instance(name) {
        Ok(rf) => Ok(rf),
        Err(e) => RealFormDescriptor::split(name).map_err(|_| e),
    }
}

/// Parses `"i,j"` with optional primes into a component of `g`.
pub fn parse_component(rf: &RealFormDescriptor, g: &ParabolicGrading, s: &str) -> Result<HarmonicComponent> {
    let parts: Vec<&str> = s.trim().trim_matches(|c| c == '(' || c == ')').split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("component `{s}` must be `i,j`")));
    }
    let i = rf.parse_node_label(parts[0])?;
    let j = rf.parse_node_label(parts[1])?;
    let factor = g.rs.factor_of_node(i);
    component(g, i, j, factor).or_else(|_| {
        // Commuting pairs may be written in either order.
        component(g, j, i, factor)
    })
}

pub fn run_deformation(rf: &RealFormDescriptor, xi_nodes: &[usize], comps: &[String]) -> Result<DeformOutcome> {
    let xi = Xi::new(xi_nodes.iter().map(|i| i - 1).collect(), rf.rank())?;
    if !rf.admissible_xi(&xi) {
        return Err(Error::Inadmissible { form: rf.name.clone(), xi: xi.to_string() });
    }
    let g = grade(rf.rs.clone(), xi)?;
    let cs = comps.iter().map(|c| parse_component(rf, &g, c)).collect::<Result<Vec<_>>>()?;
    let t = Arc::new(build_structure_table(rf.rs.clone()));
    let d = deform_many(t, &g, &cs)?;
    let tower = annihilator_tower(&d);
    let inner = central_symmetry_solutions(&d, rf, false)?;
    let outer = central_symmetry_solutions(&d, rf, true)?;
    Ok(DeformOutcome {
        jacobi_ok: true,
        tower_consistent: tower_is_consistent(&d, &tower),
        dims: tower.dims(),
        dim_a0: tower.dim_a0(),
        dim_a_plus: tower.dim_a_plus(),
        parametric: inner.parametric,
        inner: inner.finite.iter().map(|j| j.tuple_repr()).collect(),
        outer: outer.finite.iter().map(|j| j.tuple_repr()).collect(),
    })
}

fn normalized(v: &[String]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.replace('−', "-").replace(' ', "")).collect();
    v.sort();
    v
}

/// Mismatches between a case and its computed outcome; empty means pass.
pub fn check_deform_case(catalog: &Catalog, fx: &DeformFixture, case: &DeformCase) -> Vec<String> {
    let rf = match resolve_form(catalog, &fx.form) {
        Ok(rf) => rf,
        Err(e) => return vec![e.to_string()],
    };
    let out = match run_deformation(&rf, &fx.xi, &case.components) {
        Ok(o) => o,
        Err(e) => return vec![e.to_string()],
    };
    let mut bad = Vec::new();
    if !out.tower_consistent {
        bad.push("annihilator tower fails re-substitution".to_string());
    }
    let mut cmp = |what: &str, want: Option<String>, got: String| {
        if let Some(w) = want {
            if w != got {
                bad.push(format!("{what}: expected {w}, found {got}"));
            }
        }
    };
    cmp("dim a0", case.dim_a0.map(|d| d.to_string()), out.dim_a0.to_string());
    cmp("dim a+", case.dim_a_plus.map(|d| d.to_string()), out.dim_a_plus.to_string());
    cmp("parametric", case.parametric.as_ref().map(|p| format!("{p:?}")), format!("{:?}", out.parametric));
    cmp("inner", case.inner.as_ref().map(|v| normalized(v).join(" ")), normalized(&out.inner).join(" "));
    cmp("outer", case.outer.as_ref().map(|v| normalized(v).join(" ")), normalized(&out.outer).join(" "));
    bad
}

pub fn load_deform_fixture(path: &Path) -> Result<DeformFixture> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionTerm {
    pub row: usize,
    pub col: usize,
    pub var: usize,
    pub imag: bool,
    pub num: Vec<i64>,
    pub den: i64,
    pub pow: u32,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionExpect {
    pub flat_at: Vec<i64>,
    pub curved_at: Vec<i64>,
    pub ratio_entry: [usize; 2],
    pub ratio_pairs: [[usize; 2]; 2],
    pub ratio_i_power: i64,
    pub ratio_t_power: i32,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExtensionFixture {
    #[serde(rename = "term")]
    pub terms: Vec<ExtensionTerm>,
    pub expect: ExtensionExpect,
}

pub fn load_extension_fixture(path: &Path) -> Result<ExtensionFixture> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn so3_basis() -> Vec<Matrix<Qi>> {
    let m = |x: [i64; 3]| -> Matrix<Qi> {
        let [x1, x2, x3] = x;
        [[0, x3, -x1], [-x3, 0, -x2], [x1, x2, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| Qi::int(v)).collect())
            .collect()
    };
    vec![m([1, 0, 0]), m([0, 1, 0]), m([0, 0, 1])]
}

impl ExtensionFixture {
    /// `α_t(k_a)` with the starred entries completed by the Hermitian form.
    pub fn images(&self, t: &Rat) -> Vec<Matrix<Qi>> {
        (1..=3)
            .map(|var| {
                let mut m: Matrix<Qi> = vec![vec![Qi::default(); 3]; 3];
                for term in self.terms.iter().filter(|x| x.var == var) {
                    let mut num = rat(0);
                    let mut tk = rat(1);
                    for &c in &term.num {
                        num += rat(c) * &tk;
                        tk *= t;
                    }
                    let val = num / (rat(term.den) * num_traits::pow::pow(t.clone(), term.pow as usize));
                    let q = if term.imag { Qi::new(rat(0), val) } else { Qi::real(val) };
                    m[term.row - 1][term.col - 1] += &q;
                }
                m[0][1] = -m[1][2].conj();
                m[2][1] = -m[1][0].conj();
                m
            })
            .collect()
    }

    pub fn curvature(&self, t: &Rat) -> Result<BTreeMap<(usize, usize), Matrix<Qi>>> {
        let ext = MatrixExtension { brackets: matrix_structure_constants(&so3_basis())?, images: self.images(t) };
        extension_curvature(&ext, &|m: &Matrix<Qi>| vec![m[1][0].re.clone(), m[1][0].im.clone(), m[2][0].im.clone()])
    }
}

/// Mismatches for the extension fixture; empty means pass.
pub fn check_extension_fixture(fx: &ExtensionFixture) -> Vec<String> {
    let mut bad = Vec::new();
    let is_flat = |k: &BTreeMap<(usize, usize), Matrix<Qi>>| k.values().all(|m| m.iter().flatten().all(Qi::is_zero));
    for &t in &fx.expect.flat_at {
        match fx.curvature(&rat(t)) {
            Ok(k) if is_flat(&k) => {}
            Ok(_) => bad.push(format!("curvature nonzero at t = {t}")),
            Err(e) => bad.push(e.to_string()),
        }
    }
    let [r, c] = fx.expect.ratio_entry;
    let [p, q] = fx.expect.ratio_pairs;
    for &t in &fx.expect.curved_at {
        let k = match fx.curvature(&rat(t)) {
            Ok(k) => k,
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        if is_flat(&k) {
            bad.push(format!("curvature vanishes at t = {t}"));
            continue;
        }
        let num = &k[&(p[0] - 1, p[1] - 1)][r - 1][c - 1];
        let den = &k[&(q[0] - 1, q[1] - 1)][r - 1][c - 1];
        let expected = Qi::i_pow(fx.expect.ratio_i_power)
            .scale(&num_traits::pow::pow(rat(t), fx.expect.ratio_t_power as usize));
        match den.recip() {
            Some(inv) if num * &inv == expected => {}
            _ => bad.push(format!("t = {t}: ratio {num} / {den}, expected {expected}")),
        }
    }
    bad
}
