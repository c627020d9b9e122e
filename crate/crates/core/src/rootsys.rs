//! Root-system combinatorics in Bourbaki numbering.
//!
//! Roots are integer vectors over the simple roots, weights are rational
//! vectors over the fundamental weights. Nodes are 0-based internally; every
//! user-facing surface renders them 1-based. Semisimple systems concatenate
//! the node sets of their simple factors.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(Error::InvalidRank { family: family.letter(), rank })
        }
    }

    /// Number of roots (positive and negative) from the classical formulas.
    pub fn root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Family::F => 48,
            Family::G => 12,
        }
    }

    /// Squared lengths of the simple roots (short roots have length² 2).
    fn lengths(self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            Family::B => (0..n).map(|i| if i + 1 < n { 4 } else { 2 }).collect(),
            Family::C => (0..n).map(|i| if i + 1 < n { 2 } else { 4 }).collect(),
            Family::F => vec![4, 4, 2, 2],
            Family::G => vec![2, 6],
            _ => vec![2; n],
        }
    }

    fn edges(self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A | Family::B | Family::C | Family::F | Family::G => {
                (1..n).map(|i| (i - 1, i)).collect()
            }
            Family::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Family::E => {
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((4..n).map(|i| (i - 1, i)));
                e
            }
        }
    }

    /// Gram matrix `(αᵢ, αⱼ)` of the simple roots.
    pub fn gram(self) -> Vec<Vec<i64>> {
        let len = self.lengths();
        let n = self.rank;
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            g[i][i] = len[i];
        }
        for (a, b) in self.edges() {
            let v = -len[a].max(len[b]) / 2;
            g[a][b] = v;
            g[b][a] = v;
        }
        g
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::Parse(format!("unknown type `{s}`")))?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in `{s}`")))?;
        SimpleType::new(fam, rank)
    }
}

/// Parses a semisimple type such as `A3` or `A2+A2` (also `A2xA2`).
pub fn parse_types(s: &str) -> Result<Vec<SimpleType>> {
    s.split(['+', 'x', '×'])
        .map(SimpleType::from_str)
        .collect()
}

/// A root as integer coefficients over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root {
    pub coeffs: Vec<i64>,
}

impl Root {
    /// Accepts nonzero vectors whose entries share a sign.
    pub fn new(coeffs: Vec<i64>) -> Result<Root> {
        let pos = coeffs.iter().all(|&c| c >= 0);
        let neg = coeffs.iter().all(|&c| c <= 0);
        if !(pos || neg) || coeffs.iter().all(|&c| c == 0) {
            return Err(Error::NotARoot(format!("{coeffs:?}")));
        }
        Ok(Root { coeffs })
    }

    pub fn simple(rank: usize, i: usize) -> Root {
        let mut c = vec![0; rank];
        c[i] = 1;
        Root { coeffs: c }
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().any(|&c| c > 0)
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn neg(&self) -> Root {
        Root { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Rat>,
}

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight { coords: vec![Rat::zero(); rank] }
    }

    pub fn from_ints(v: &[i64]) -> Weight {
        Weight { coords: v.iter().map(|&x| rat(x)).collect() }
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub simple_types: Vec<SimpleType>,
    /// `cartan[i][j] = ⟨αⱼ, αᵢ∨⟩`.
    pub cartan: Vec<Vec<i64>>,
    /// `(αᵢ, αⱼ)` with short roots of squared length 2.
    pub gram: Vec<Vec<i64>>,
    /// Positive roots by increasing height, then their negatives in the same order.
    pub roots: Vec<Root>,
    pub highest_roots: Vec<Root>,
    pub rho: Weight,
    /// Node range of each simple factor.
    pub factor_nodes: Vec<Range<usize>>,
    index: HashMap<Vec<i64>, usize>,
    inv_cartan: Vec<Vec<Rat>>,
}

impl RootSystem {
    pub fn new(types: &[SimpleType]) -> Result<RootSystem> {
        build_root_system(types)
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.num_positive()]
    }

    pub fn dim(&self) -> usize {
        self.roots.len() + self.rank()
    }

    pub fn factor_of_node(&self, i: usize) -> usize {
        self.factor_nodes.iter().position(|r| r.contains(&i)).expect("node in range")
    }

    /// Factor containing a root (roots never straddle factors).
    pub fn factor_of_root(&self, r: &Root) -> usize {
        let i = r.coeffs.iter().position(|&c| c != 0).expect("nonzero root");
        self.factor_of_node(i)
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        self.index.contains_key(coeffs)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, rank: self.rank() })
        }
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Root::simple(self.rank(), i)
    }

    /// `⟨x, αᵢ∨⟩` for a vector of the root lattice.
    pub fn pairing_coeffs(&self, coeffs: &[i64], i: usize) -> i64 {
        self.cartan[i].iter().zip(coeffs).map(|(a, c)| a * c).sum()
    }

    pub fn pairing_root(&self, r: &Root, i: usize) -> Result<Rat> {
        self.check_index(i)?;
        Ok(rat(self.pairing_coeffs(&r.coeffs, i)))
    }

    pub fn pairing_weight(&self, w: &Weight, i: usize) -> Result<Rat> {
        self.check_index(i)?;
        Ok(w.coords[i].clone())
    }

    /// `sᵢ(x) = x − ⟨x, αᵢ∨⟩ αᵢ` on root-lattice coefficients.
    pub fn reflect_coeffs(&self, coeffs: &[i64], i: usize) -> Vec<i64> {
        let p = self.pairing_coeffs(coeffs, i);
        let mut out = coeffs.to_vec();
        out[i] -= p;
        out
    }

    pub fn reflect_root(&self, r: &Root, i: usize) -> Result<Root> {
        self.check_index(i)?;
        Root::new(self.reflect_coeffs(&r.coeffs, i))
    }

    pub fn reflect_weight(&self, w: &Weight, i: usize) -> Result<Weight> {
        self.check_index(i)?;
        // sᵢ(λ) = λ − λᵢ αᵢ, and αᵢ has fundamental coordinates cartan[·][i].
        let li = w.coords[i].clone();
        let coords = w
            .coords
            .iter()
            .enumerate()
            .map(|(j, c)| c - &li * rat(self.cartan[j][i]))
            .collect();
        Ok(Weight { coords })
    }

    /// Applies the word `w = s_{w₀} s_{w₁} ⋯` (rightmost letter acts first).
    pub fn apply_word_coeffs(&self, word: &[usize], coeffs: &[i64]) -> Vec<i64> {
        word.iter().rev().fold(coeffs.to_vec(), |acc, &i| self.reflect_coeffs(&acc, i))
    }

    pub fn apply_word_root(&self, word: &[usize], r: &Root) -> Result<Root> {
        for &i in word {
            self.check_index(i)?;
        }
        Root::new(self.apply_word_coeffs(word, &r.coeffs))
    }

    pub fn apply_word_weight(&self, word: &[usize], w: &Weight) -> Result<Weight> {
        word.iter().rev().try_fold(w.clone(), |acc, &i| self.reflect_weight(&acc, i))
    }

    /// `w(λ + ρ) − ρ`.
    pub fn affine_action(&self, word: &[usize], w: &Weight) -> Result<Weight> {
        let shifted = self.apply_word_weight(word, &w.add(&self.rho))?;
        Ok(shifted.sub(&self.rho))
    }

    /// A reduced word for the longest Weyl group element.
    pub fn longest_word(&self) -> Vec<usize> {
        // Walk ρ to the antidominant chamber, one descent at a time.
        let mut v: Vec<i64> = vec![1; self.rank()];
        let mut word = Vec::new();
        while let Some(i) = v.iter().position(|&c| c > 0) {
            let vi = v[i];
            for (j, c) in v.iter_mut().enumerate() {
                *c -= vi * self.cartan[j][i];
            }
            word.push(i);
        }
        word.reverse();
        word
    }

    /// The diagram involution `i ↦ π(i)` with `−w₀(αᵢ) = α_{π(i)}`.
    pub fn minus_w0(&self) -> Vec<usize> {
        let w0 = self.longest_word();
        (0..self.rank())
            .map(|i| {
                let image = self.apply_word_coeffs(&w0, &self.simple_root(i).coeffs);
                image.iter().position(|&c| c == -1).expect("w₀ maps simple roots to negative simple roots")
            })
            .collect()
    }

    pub fn root_to_weight(&self, coeffs: &[i64]) -> Weight {
        Weight {
            coords: (0..self.rank()).map(|i| rat(self.pairing_coeffs(coeffs, i))).collect(),
        }
    }

    /// Root-lattice (rational) coordinates of a weight.
    pub fn weight_to_root_coords(&self, w: &Weight) -> Vec<Rat> {
        linalg::mat_vec(&self.inv_cartan_t(), &w.coords)
    }

    fn inv_cartan_t(&self) -> Vec<Vec<Rat>> {
        // λ = Σⱼ cⱼ αⱼ has λᵢ = Σⱼ cartan[i][j] cⱼ, so c = cartan⁻¹ λ.
        self.inv_cartan.clone()
    }

    /// `(x, y)` for root-lattice vectors.
    pub fn inner_coeffs(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.gram[i][j] * yj;
            }
        }
        s
    }

    /// `(λ, μ)` for weights, through root coordinates.
    pub fn inner_weights(&self, a: &Weight, b: &Weight) -> Rat {
        let ca = self.weight_to_root_coords(a);
        // (αᵢ, μ) = ⟨μ, αᵢ∨⟩ (αᵢ, αᵢ) / 2
        ca.iter()
            .enumerate()
            .map(|(i, c)| c * &b.coords[i] * rat(self.gram[i][i]) / rat(2))
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn highest_root_of_factor(&self, f: usize) -> &Root {
        &self.highest_roots[f]
    }

    /// Length of the `α`-string through `β` below `β`: max `p` with `β − pα` a root.
    pub fn string_down(&self, alpha: &[i64], beta: &[i64]) -> i64 {
        let mut p = 0;
        let mut cur: Vec<i64> = beta.to_vec();
        loop {
            for (c, a) in cur.iter_mut().zip(alpha) {
                *c -= a;
            }
            if !self.is_root(&cur) {
                return p;
            }
            p += 1;
        }
    }

    pub fn record(&self) -> RootSystemRecord {
        RootSystemRecord {
            version: RECORD_VERSION,
            family: self.simple_types.iter().map(|t| t.family.letter().to_string()).collect(),
            rank: self.simple_types.iter().map(|t| t.rank).collect(),
            cartan: self.cartan.clone(),
            roots: self.roots.iter().map(|r| r.coeffs.clone()).collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.record()).expect("root system record serializes")
    }

    /// Rebuilds from a cached record, refusing records that disagree with a fresh build.
    pub fn from_toml(s: &str) -> Result<RootSystem> {
        let rec: RootSystemRecord = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if rec.version != RECORD_VERSION {
            return Err(Error::Parse(format!("unsupported record version {}", rec.version)));
        }
        if rec.family.len() != rec.rank.len() {
            return Err(Error::Parse("family/rank length mismatch".into()));
        }
        let types = rec
            .family
            .iter()
            .zip(&rec.rank)
            .map(|(f, &r)| {
                let fam = f
                    .chars()
                    .next()
                    .and_then(Family::from_letter)
                    .ok_or_else(|| Error::Parse(format!("bad family {f}")))?;
                SimpleType::new(fam, r)
            })
            .collect::<Result<Vec<_>>>()?;
        let rs = RootSystem::new(&types)?;
        if rs.cartan != rec.cartan || rs.record().roots != rec.roots {
            return Err(Error::Parse("cached root data disagrees with the type".into()));
        }
        Ok(rs)
    }
}

pub const RECORD_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemRecord {
    pub version: u32,
    pub family: Vec<String>,
    pub rank: Vec<usize>,
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<Vec<i64>>,
}

pub fn build_root_system(types: &[SimpleType]) -> Result<RootSystem> {
    if types.is_empty() {
        return Err(Error::Malformed("empty type list".into()));
    }
    for t in types {
        SimpleType::new(t.family, t.rank)?;
    }
    let rank: usize = types.iter().map(|t| t.rank).sum();
    let mut gram = vec![vec![0i64; rank]; rank];
    let mut factor_nodes = Vec::new();
    let mut off = 0;
    for t in types {
        let g = t.gram();
        for i in 0..t.rank {
            for j in 0..t.rank {
                gram[off + i][off + j] = g[i][j];
            }
        }
        factor_nodes.push(off..off + t.rank);
        off += t.rank;
    }
    let cartan: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
        .collect();

    // Positive roots by height via root strings: β + αᵢ is a root iff p − ⟨β, αᵢ∨⟩ > 0.
    let mut positive: Vec<Vec<i64>> = (0..rank).map(|i| Root::simple(rank, i).coeffs).collect();
    let mut seen: HashSet<Vec<i64>> = positive.iter().cloned().collect();
    let mut layer = positive.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..rank {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if seen.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = cartan[i].iter().zip(beta).map(|(a, c)| a * c).sum();
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        positive.extend(next.iter().cloned());
        layer = next;
    }
    positive.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let mut roots: Vec<Root> = positive.iter().map(|c| Root { coeffs: c.clone() }).collect();
    roots.extend(positive.iter().map(|c| Root { coeffs: c.iter().map(|x| -x).collect() }));
    let index = roots.iter().enumerate().map(|(k, r)| (r.coeffs.clone(), k)).collect();

    let highest_roots = factor_nodes
        .iter()
        .map(|range| {
            roots[..positive.len()]
                .iter()
                .filter(|r| range.clone().any(|i| r.coeffs[i] != 0))
                .max_by_key(|r| r.height())
                .cloned()
                .expect("factor has roots")
        })
        .collect();

    let cq: Vec<Vec<Rat>> = cartan.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
    let inv_cartan = linalg::inverse(&cq).expect("Cartan matrix is invertible");

    Ok(RootSystem {
        simple_types: types.to_vec(),
        cartan,
        gram,
        roots,
        highest_roots,
        rho: Weight { coords: vec![Rat::one(); rank] },
        factor_nodes,
        index,
        inv_cartan,
    })
}

/// Orbit closure of the simple roots under simple reflections (independent of root strings).
pub fn closure_oracle(rs: &RootSystem) -> HashSet<Vec<i64>> {
    let n = rs.rank();
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = (0..n).map(|i| Root::simple(n, i).coeffs).collect();
    while let Some(r) = queue.pop_front() {
        if !set.insert(r.clone()) {
            continue;
        }
        for i in 0..n {
            let s = rs.reflect_coeffs(&r, i);
            if !set.contains(&s) {
                queue.push_back(s);
            }
        }
    }
    set
}
