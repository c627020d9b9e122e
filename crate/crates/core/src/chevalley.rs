//! Chevalley basis structure constants and bracket arithmetic over ℚ(i).
//!
//! Basis layout: index `r < |Φ|` is the root vector `e_r` for `rs.roots[r]`,
//! index `|Φ| + i` is the simple coroot `hᵢ`. Signs follow the extraspecial
//! pair convention: for each positive non-simple root `ξ`, the pair `(αₛ, ξ−αₛ)`
//! with `s` the smallest simple index such that `ξ−αₛ` is a root gets
//! `N = +(p+1)`. Negative root vectors satisfy `N_{−α,−β} = −N_{α,β}` and
//! `[e_α, e_{−α}] = h_α`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::rootsys::RootSystem;
use crate::scalar::{rat, Qi, Rat};

/// A sparse element of `g`, keyed by basis index.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    pub coeffs: BTreeMap<usize, Qi>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(b: usize) -> Self {
        Self::term(b, Qi::int(1))
    }

    pub fn term(b: usize, c: Qi) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(b, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, b: usize) -> Qi {
        self.coeffs.get(&b).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, b: usize, c: &Qi) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(b).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, o: &AlgebraElement, s: &Qi) {
        for (b, c) in &o.coeffs {
            self.add_term(*b, &(c * s));
        }
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        r.add_scaled(o, &Qi::int(1));
        r
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        r.add_scaled(o, &Qi::int(-1));
        r
    }

    pub fn scale(&self, s: &Qi) -> AlgebraElement {
        let mut r = AlgebraElement::zero();
        r.add_scaled(self, s);
        r
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&Qi::int(-1))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(b, c)| format!("({c})·b{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone)]
pub struct StructureTable {
    pub rs: Arc<RootSystem>,
    /// `N_{α,β}` by root indices, for every pair whose sum is a root.
    pub n_constants: HashMap<(usize, usize), i64>,
    sums: HashMap<(usize, usize), usize>,
    /// Simple-coroot coordinates of `h_α` for every root.
    coroots: Vec<Vec<i64>>,
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.rs.dim()
    }

    pub fn num_roots(&self) -> usize {
        self.rs.roots.len()
    }

    /// Basis index of the simple coroot `hᵢ`.
    pub fn cartan_index(&self, i: usize) -> usize {
        self.num_roots() + i
    }

    pub fn is_cartan(&self, b: usize) -> bool {
        b >= self.num_roots()
    }

    pub fn n(&self, a: usize, b: usize) -> Option<i64> {
        self.n_constants.get(&(a, b)).copied()
    }

    /// `⟨β, αᵢ∨⟩` as the action of `hᵢ` on `e_β`.
    pub fn cartan_action(&self, i: usize, root: usize) -> i64 {
        self.rs.pairing_coeffs(&self.rs.roots[root].coeffs, i)
    }

    /// `h_α` in simple-coroot coordinates.
    pub fn coroot(&self, root: usize) -> &[i64] {
        &self.coroots[root]
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> AlgebraElement {
        let m = self.num_roots();
        match (a >= m, b >= m) {
            (true, true) => AlgebraElement::zero(),
            (true, false) => AlgebraElement::term(b, Qi::int(self.cartan_action(a - m, b))),
            (false, true) => AlgebraElement::term(a, Qi::int(-self.cartan_action(b - m, a))),
            (false, false) => {
                if let Some(&s) = self.sums.get(&(a, b)) {
                    return AlgebraElement::term(s, Qi::int(self.n_constants[&(a, b)]));
                }
                let ra = &self.rs.roots[a].coeffs;
                let rb = &self.rs.roots[b].coeffs;
                if ra.iter().zip(rb).all(|(x, y)| x + y == 0) {
                    let mut e = AlgebraElement::zero();
                    for (i, &c) in self.coroots[a].iter().enumerate() {
                        e.add_term(m + i, &Qi::int(c));
                    }
                    e
                } else {
                    AlgebraElement::zero()
                }
            }
        }
    }

    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, ca) in &x.coeffs {
            for (b, cb) in &y.coeffs {
                let br = self.bracket_basis(*a, *b);
                if !br.is_zero() {
                    out.add_scaled(&br, &(ca * cb));
                }
            }
        }
        out
    }

    /// Matrix of `ad x` on the full basis, column `b` holding `[x, b]`.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> Vec<Vec<Qi>> {
        let d = self.dim();
        let mut m = vec![vec![Qi::default(); d]; d];
        for b in 0..d {
            let col = self.bracket(x, &AlgebraElement::basis(b));
            for (r, c) in col.coeffs {
                m[r][b] = c;
            }
        }
        m
    }

    /// Killing form `tr(ad x ∘ ad y)`.
    pub fn killing_pairing(&self, x: &AlgebraElement, y: &AlgebraElement) -> Qi {
        let mut tr = Qi::default();
        for b in 0..self.dim() {
            let inner = self.bracket(y, &AlgebraElement::basis(b));
            if inner.is_zero() {
                continue;
            }
            let outer = self.bracket(x, &inner);
            tr += &outer.coeff(b);
        }
        tr
    }
}

pub fn build_structure_table(rs: Arc<RootSystem>) -> StructureTable {
    let m = rs.roots.len();
    let npos = rs.num_positive();
    let sq = |r: usize| rs.inner_coeffs(&rs.roots[r].coeffs, &rs.roots[r].coeffs);
    let coroots: Vec<Vec<i64>> = (0..m)
        .map(|r| {
            let len = sq(r);
            rs.roots[r]
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * rs.gram[i][i] / len)
                .collect()
        })
        .collect();

    let mut sums = HashMap::new();
    for a in 0..m {
        for b in 0..m {
            let s: Vec<i64> = rs.roots[a].coeffs.iter().zip(&rs.roots[b].coeffs).map(|(x, y)| x + y).collect();
            if let Some(r) = rs.root_index(&s) {
                sums.insert((a, b), r);
            }
        }
    }
    let neg = |r: usize| if r < npos { r + npos } else { r - npos };

    // Positive pairs, filled in order of the height of their sum.
    let mut pos: HashMap<(usize, usize), Rat> = HashMap::new();
    let mut by_sum: Vec<Vec<(usize, usize)>> = vec![Vec::new(); npos];
    for a in 0..npos {
        for b in 0..npos {
            if let Some(&s) = sums.get(&(a, b)) {
                by_sum[s].push((a, b));
            }
        }
    }

    // N for arbitrary roots, given all positive pairs with smaller sum height.
    fn lookup(
        a: usize,
        b: usize,
        npos: usize,
        pos: &HashMap<(usize, usize), Rat>,
        sums: &HashMap<(usize, usize), usize>,
        sq: &dyn Fn(usize) -> i64,
        neg: &dyn Fn(usize) -> usize,
    ) -> Rat {
        let s = match sums.get(&(a, b)) {
            Some(&s) => s,
            None => return Rat::zero(),
        };
        match (a < npos, b < npos) {
            (true, true) => pos[&(a, b)].clone(),
            (false, false) => -lookup(neg(a), neg(b), npos, pos, sums, sq, neg),
            (false, true) => -lookup(b, a, npos, pos, sums, sq, neg),
            (true, false) => {
                if s < npos {
                    // a + b = s with s positive: N_{a,b} = −(s,s)/(a,a) N_{−b,s}.
                    -rat(sq(s)) / rat(sq(a)) * lookup(neg(b), s, npos, pos, sums, sq, neg)
                } else {
                    // s negative: N_{a,b} = (s,s)/(b,b) N_{−s,a}.
                    rat(sq(s)) / rat(sq(b)) * lookup(neg(s), a, npos, pos, sums, sq, neg)
                }
            }
        }
    }

    for xi in 0..npos {
        if by_sum[xi].is_empty() {
            continue;
        }
        // Extraspecial pair: the smallest simple index.
        let (a1, b1) = *by_sum[xi]
            .iter()
            .filter(|(a, _)| rs.roots[*a].height() == 1)
            .min_by_key(|(a, _)| rs.roots[*a].coeffs.iter().position(|&c| c == 1))
            .expect("non-simple positive root has a simple summand");
        let p = rs.string_down(&rs.roots[a1].coeffs, &rs.roots[b1].coeffs);
        let n1 = rat(p + 1);
        pos.insert((a1, b1), n1.clone());
        pos.insert((b1, a1), -n1.clone());
        for &(a, b) in &by_sum[xi] {
            if pos.contains_key(&(a, b)) {
                continue;
            }
            // Four-root identity with (a, b, −a1, −b1).
            let mut acc = Rat::zero();
            let t1 = lookup(b, neg(a1), npos, &pos, &sums, &sq, &neg) * lookup(a, neg(b1), npos, &pos, &sums, &sq, &neg);
            if !t1.is_zero() {
                acc += t1 / rat(sq(sums[&(b, neg(a1))]));
            }
            let t2 = lookup(neg(a1), a, npos, &pos, &sums, &sq, &neg) * lookup(b, neg(b1), npos, &pos, &sums, &sq, &neg);
            if !t2.is_zero() {
                acc += t2 / rat(sq(sums[&(neg(a1), a)]));
            }
            let v = acc * rat(sq(xi)) / n1.clone();
            pos.insert((b, a), -v.clone());
            pos.insert((a, b), v);
        }
    }

    let mut n_constants = HashMap::new();
    for &(a, b) in sums.keys() {
        let v = lookup(a, b, npos, &pos, &sums, &sq, &neg);
        assert!(v.is_integer() && !v.is_zero(), "structure constant must be a nonzero integer");
        let v: i64 = v.to_integer().try_into().expect("small structure constant");
        n_constants.insert((a, b), v);
    }
    StructureTable { rs, n_constants, sums, coroots }
}

/// All Jacobi violations on basis triples, as index triples.
pub fn jacobi_violations(t: &StructureTable) -> Vec<(usize, usize, usize)> {
    let d = t.dim();
    let mut bad = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let ab = t.bracket_basis(a, b);
            for c in b + 1..d {
                let x = AlgebraElement::basis(c);
                let s = t
                    .bracket(&ab, &x)
                    .add(&t.bracket(&t.bracket_basis(b, c), &AlgebraElement::basis(a)))
                    .add(&t.bracket(&t.bracket_basis(c, a), &AlgebraElement::basis(b)));
                if !s.is_zero() {
                    bad.push((a, b, c));
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_mul, Matrix};
    use crate::rootsys::parse_types;
    use proptest::prelude::*;

    fn table(s: &str) -> StructureTable {
        build_structure_table(Arc::new(RootSystem::new(&parse_types(s).unwrap()).unwrap()))
    }

    fn idx(t: &StructureTable, c: &[i64]) -> usize {
        t.rs.root_index(c).unwrap()
    }

    #[test]
    fn a1_has_only_cartan_action() {
        let t = table("A1");
        assert!(t.n_constants.is_empty());
        assert_eq!(t.cartan_action(0, 0), 2);
    }

    #[test]
    fn a2_constants_have_modulus_one() {
        let t = table("A2");
        assert_eq!(t.n(idx(&t, &[1, 0]), idx(&t, &[0, 1])), Some(1));
        assert!(t.n_constants.values().all(|v| v.abs() == 1));
    }

    #[test]
    fn moduli_match_root_strings() {
        for s in ["B3", "C3", "G2", "F4", "D4"] {
            let t = table(s);
            let mut max = 0;
            for (&(a, b), &v) in &t.n_constants {
                let p = t.rs.string_down(&t.rs.roots[a].coeffs, &t.rs.roots[b].coeffs);
                assert_eq!(v.abs(), p + 1, "{s}");
                max = max.max(v.abs());
            }
            if s == "G2" {
                assert_eq!(max, 3);
            }
        }
    }

    #[test]
    fn jacobi_holds_on_small_systems() {
        for s in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "A1xA2", "B2xG2"] {
            assert!(jacobi_violations(&table(s)).is_empty(), "{s}");
        }
    }

    #[test]
    fn opposite_root_vectors_bracket_to_coroot() {
        let t = table("G2");
        let npos = t.rs.num_positive();
        for r in 0..npos {
            let h = t.bracket_basis(r, r + npos);
            // h_α acts on e_α by 2.
            let act = t.bracket(&h, &AlgebraElement::basis(r));
            assert_eq!(act, AlgebraElement::term(r, Qi::int(2)));
        }
    }

    /// sl(3) as 3×3 matrices; bracket of matrices maps to bracket in the table
    /// under the sign-fixed identification e_{εa−εb} ↦ ±E_ab.
    #[test]
    fn sl3_matrix_realization_agrees() {
        let t = table("A2");
        let unit = |a: usize, b: usize| -> Matrix<Qi> {
            let mut m = vec![vec![Qi::default(); 3]; 3];
            m[a][b] = Qi::int(1);
            m
        };
        // Positive roots α1=ε0−ε1, α2=ε1−ε2, α1+α2=ε0−ε2.
        let n12 = t.n(idx(&t, &[1, 0]), idx(&t, &[0, 1])).unwrap();
        let mats: Vec<(usize, Matrix<Qi>)> = vec![
            (idx(&t, &[1, 0]), unit(0, 1)),
            (idx(&t, &[0, 1]), unit(1, 2)),
            (idx(&t, &[1, 1]), crate::linalg::mat_scale(&unit(0, 2), &Qi::int(n12))),
            (idx(&t, &[-1, 0]), unit(1, 0)),
            (idx(&t, &[0, -1]), unit(2, 1)),
            (idx(&t, &[-1, -1]), crate::linalg::mat_scale(&unit(2, 0), &Qi::int(n12))),
        ];
        let to_mat = |e: &AlgebraElement| -> Matrix<Qi> {
            let mut out = vec![vec![Qi::default(); 3]; 3];
            for (b, c) in &e.coeffs {
                let m = if t.is_cartan(*b) {
                    let i = b - t.num_roots();
                    let mut h = vec![vec![Qi::default(); 3]; 3];
                    h[i][i] = Qi::int(1);
                    h[i + 1][i + 1] = Qi::int(-1);
                    h
                } else {
                    mats.iter().find(|(r, _)| r == b).unwrap().1.clone()
                };
                out = crate::linalg::mat_add(&out, &crate::linalg::mat_scale(&m, c));
            }
            out
        };
        for (a, ma) in &mats {
            for (b, mb) in &mats {
                let comm = crate::linalg::mat_add(
                    &mat_mul(ma, mb),
                    &crate::linalg::mat_scale(&mat_mul(mb, ma), &Qi::int(-1)),
                );
                assert_eq!(comm, to_mat(&t.bracket_basis(*a, *b)), "{a} {b}");
            }
        }
    }

    #[test]
    fn killing_form_on_cartan_is_proportional_to_coroot_gram() {
        for s in ["A2", "B2", "G2"] {
            let t = table(s);
            let r = t.rs.rank();
            let h = |i: usize| AlgebraElement::basis(t.cartan_index(i));
            // (αᵢ∨, αⱼ∨) = 4(αᵢ,αⱼ)/((αᵢ,αᵢ)(αⱼ,αⱼ)).
            let gram = |i: usize, j: usize| {
                Rat::new((4 * t.rs.gram[i][j]).into(), (t.rs.gram[i][i] * t.rs.gram[j][j]).into())
            };
            let c = t.killing_pairing(&h(0), &h(0)).re / gram(0, 0);
            for i in 0..r {
                for j in 0..r {
                    assert_eq!(t.killing_pairing(&h(i), &h(j)), Qi::real(gram(i, j) * &c), "{s}");
                }
            }
        }
    }

    #[test]
    fn killing_form_pairs_only_opposite_roots() {
        let t = table("A2");
        let npos = t.rs.num_positive();
        for a in 0..t.num_roots() {
            for b in 0..t.num_roots() {
                let v = t.killing_pairing(&AlgebraElement::basis(a), &AlgebraElement::basis(b));
                let opposite = (a + npos) % (2 * npos) == b;
                assert_eq!(!v.is_zero(), opposite);
                if opposite {
                    assert!(v.re > Rat::zero());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn killing_form_is_invariant(seed in proptest::collection::vec(-3i64..4, 42)) {
            let t = table("B2");
            let d = t.dim();
            let mk = |off: usize| {
                let mut e = AlgebraElement::zero();
                for b in 0..d {
                    e.add_term(b, &Qi::int(seed[off + b]));
                }
                e
            };
            let (x, y, z) = (mk(0), mk(d), mk(2 * d));
            let lhs = t.killing_pairing(&t.bracket(&x, &y), &z);
            let rhs = t.killing_pairing(&y, &t.bracket(&x, &z));
            prop_assert!((lhs + rhs).is_zero());
        }

        #[test]
        fn bracket_is_antisymmetric_and_graded(a in 0usize..20, b in 0usize..20) {
            let t = table("C3");
            let d = t.dim();
            let (a, b) = (a % d, b % d);
            let ab = t.bracket_basis(a, b);
            prop_assert_eq!(ab.clone(), t.bracket_basis(b, a).neg());
            let deg = |x: usize| if t.is_cartan(x) { 0 } else { t.rs.roots[x].height() };
            for s in ab.support() {
                prop_assert_eq!(deg(s), deg(a) + deg(b));
            }
        }
    }
}
