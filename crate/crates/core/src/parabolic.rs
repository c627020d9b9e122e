//! Gradings of g induced by a set Ξ of simple roots.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

/// A nonempty sorted set of 0-based simple-root indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Xi {
    indices: Vec<usize>,
}

impl Xi {
    pub fn new(mut indices: Vec<usize>, rank: usize) -> Result<Xi> {
        if indices.is_empty() {
            return Err(Error::InvalidXi("Ξ must be nonempty".into()));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidXi(format!("duplicate node in {indices:?}")));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= rank) {
            return Err(Error::IndexOutOfRange { index: bad + 1, rank });
        }
        Ok(Xi { indices })
    }

    /// Parses a 1-based comma list such as `1,2,3`.
    pub fn parse(s: &str, rank: usize) -> Result<Xi> {
        let idx = parse_node_list(s)?;
        Xi::new(idx, rank)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl fmt::Display for Xi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parses `1,2,3` (1-based) into 0-based indices.
pub fn parse_node_list(s: &str) -> Result<Vec<usize>> {
    s.trim()
        .trim_matches(|c| c == '{' || c == '}')
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: usize = p.trim().parse().map_err(|_| Error::Parse(format!("bad node `{p}`")))?;
            if v == 0 {
                return Err(Error::Parse("nodes are numbered from 1".into()));
            }
            Ok(v - 1)
        })
        .collect()
}

pub fn ht_xi(coeffs: &[i64], xi: &[usize]) -> i64 {
    xi.iter().map(|&i| coeffs[i]).sum()
}

#[derive(Debug, Clone)]
pub struct ParabolicGrading {
    pub rs: Arc<RootSystem>,
    pub xi: Xi,
    pub k: i64,
    /// Degree of each root, aligned with `rs.roots`.
    pub degree_of_root: Vec<i64>,
    /// Complex dimension of each graded piece.
    pub dims: BTreeMap<i64, usize>,
}

impl ParabolicGrading {
    pub fn ht(&self, coeffs: &[i64]) -> i64 {
        ht_xi(coeffs, self.xi.indices())
    }

    pub fn roots_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.rs.roots.len()).filter(|&r| self.degree_of_root[r] == d).collect()
    }

    /// Roots of `g₋` (negative degree).
    pub fn g_minus(&self) -> Vec<usize> {
        (0..self.rs.roots.len()).filter(|&r| self.degree_of_root[r] < 0).collect()
    }

    /// Roots of `p₊` (positive degree).
    pub fn p_plus(&self) -> Vec<usize> {
        (0..self.rs.roots.len()).filter(|&r| self.degree_of_root[r] > 0).collect()
    }

    pub fn dim(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }
}

pub fn grade(rs: Arc<RootSystem>, xi: Xi) -> Result<ParabolicGrading> {
    if xi.is_empty() {
        return Err(Error::InvalidXi("Ξ must be nonempty".into()));
    }
    if let Some(&bad) = xi.indices().iter().find(|&&i| i >= rs.rank()) {
        return Err(Error::IndexOutOfRange { index: bad + 1, rank: rs.rank() });
    }
    let degree_of_root: Vec<i64> = rs.roots.iter().map(|r| ht_xi(&r.coeffs, xi.indices())).collect();
    let k = rs
        .highest_roots
        .iter()
        .map(|r| ht_xi(&r.coeffs, xi.indices()))
        .max()
        .unwrap_or(0);
    let mut dims = BTreeMap::new();
    for d in -k..=k {
        dims.insert(d, 0);
    }
    for &d in &degree_of_root {
        *dims.entry(d).or_insert(0) += 1;
    }
    *dims.entry(0).or_insert(0) += rs.rank();
    Ok(ParabolicGrading { rs, xi, k, degree_of_root, dims })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGrading {
    pub xi_minus: Vec<usize>,
    pub xi_plus: Vec<usize>,
    /// `(ht_{Ξ⁻}, ht_{Ξ⁺})` per root, aligned with `rs.roots`.
    pub bidegree_of_root: Vec<(i64, i64)>,
}

impl BiGrading {
    pub fn bidegree(&self, coeffs: &[i64]) -> (i64, i64) {
        (ht_xi(coeffs, &self.xi_minus), ht_xi(coeffs, &self.xi_plus))
    }
}

pub fn bigrade(g: &ParabolicGrading, xi_minus: &[usize], xi_plus: &[usize]) -> Result<BiGrading> {
    let mut all: Vec<usize> = xi_minus.iter().chain(xi_plus).copied().collect();
    all.sort_unstable();
    if all != g.xi.indices() {
        return Err(Error::NotAPartition);
    }
    let mut xm = xi_minus.to_vec();
    let mut xp = xi_plus.to_vec();
    xm.sort_unstable();
    xp.sort_unstable();
    let bidegree_of_root = g
        .rs
        .roots
        .iter()
        .map(|r| (ht_xi(&r.coeffs, &xm), ht_xi(&r.coeffs, &xp)))
        .collect();
    Ok(BiGrading { xi_minus: xm, xi_plus: xp, bidegree_of_root })
}

/// Roots in `gⁱ = gᵢ ⊕ ⋯ ⊕ g_k`, with a flag for the Cartan subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationPiece {
    pub roots: Vec<usize>,
    pub includes_cartan: bool,
}

pub fn filtration_component(g: &ParabolicGrading, i: i64) -> Result<FiltrationPiece> {
    if i < -g.k || i > g.k {
        return Err(Error::DegreeOutOfRange { degree: i, k: g.k });
    }
    Ok(FiltrationPiece {
        roots: (0..g.rs.roots.len()).filter(|&r| g.degree_of_root[r] >= i).collect(),
        includes_cartan: i <= 0,
    })
}
