//! Harmonic curvature components: length-two elements of the Hasse graph W^p
//! acting on the highest root of each simple factor.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::parabolic::{BiGrading, ParabolicGrading};
use crate::rootsys::{Root, RootSystem, Weight};
use crate::scalar::rat;

/// One isotypical component of H²(g₋, g^{(l)}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicComponent {
    /// The component is `w = s_i s_j`; for commuting pairs the orientation is canonical.
    pub i: usize,
    pub j: usize,
    /// Simple factor whose highest root is moved by `w`.
    pub factor: usize,
    pub alpha_i: Root,
    /// `β = s_i(α_j)`, always positive.
    pub beta: Root,
    /// `ν = s_i s_j(μ^{(l)})`; the lowest weight vector is `X^{α_i} ∧ X^{β} ⊗ X^{−ν}`.
    pub nu: Root,
    /// `s_i s_j · μ^{(l)}` (affine action).
    pub mu_tilde: Weight,
    pub homogeneity: i64,
    /// Factors containing `α_i`, `β` and `ν`.
    pub factor_tags: (usize, usize, usize),
}

impl HarmonicComponent {
    pub fn is_regular(&self) -> bool {
        self.homogeneity >= 1
    }

    /// The Weyl word `[i, j]` for `s_i s_j`.
    pub fn word(&self) -> [usize; 2] {
        [self.i, self.j]
    }

    pub fn commuting(&self, rs: &RootSystem) -> bool {
        rs.cartan[self.i][self.j] == 0
    }
}

impl fmt::Display for HarmonicComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

#[derive(Debug, Clone)]
pub struct ComponentSet {
    pub components: Vec<HarmonicComponent>,
}

impl ComponentSet {
    pub fn regular(&self) -> impl Iterator<Item = &HarmonicComponent> {
        self.components.iter().filter(|c| c.is_regular())
    }

    pub fn find(&self, i: usize, j: usize, factor: usize) -> Option<&HarmonicComponent> {
        self.components.iter().find(|c| c.factor == factor && (c.i, c.j) == (i, j))
    }
}

/// `w = s_i s_j` is a minimal coset representative iff its inversion set
/// `{α_i, s_i(α_j)}` avoids the Levi roots.
pub fn in_hasse_graph(g: &ParabolicGrading, i: usize, j: usize) -> bool {
    if i == j || !g.xi.contains(i) {
        return false;
    }
    let beta = g.rs.reflect_coeffs(&g.rs.simple_root(j).coeffs, i);
    g.ht(&beta) >= 1
}

fn orient(rs: &RootSystem, i: usize, j: usize, factor: usize) -> (usize, usize) {
    if rs.cartan[i][j] != 0 {
        return (i, j);
    }
    let (fi, fj) = (rs.factor_of_node(i), rs.factor_of_node(j));
    if fi != fj && fj == factor {
        (j, i)
    } else if fi != fj && fi == factor {
        (i, j)
    } else {
        (i.min(j), i.max(j))
    }
}

pub fn component(g: &ParabolicGrading, i: usize, j: usize, factor: usize) -> Result<HarmonicComponent> {
    let rs = &g.rs;
    rs.check_index(i)?;
    rs.check_index(j)?;
    if factor >= rs.highest_roots.len() {
        return Err(Error::Malformed(format!("factor {factor} out of range")));
    }
    if !in_hasse_graph(g, i, j) {
        return Err(Error::NoSuchComponent { i: (i + 1).to_string(), j: (j + 1).to_string() });
    }
    let (i, j) = orient(rs, i, j, factor);
    let alpha_i = rs.simple_root(i);
    let beta = Root::new(rs.reflect_coeffs(&rs.simple_root(j).coeffs, i))?;
    let mu = &rs.highest_roots[factor];
    let nu = Root::new(rs.apply_word_coeffs(&[i, j], &mu.coeffs))?;
    let mu_w = rs.root_to_weight(&mu.coeffs);
    let mu_tilde = rs.affine_action(&[i, j], &mu_w)?;
    let homogeneity = g.ht(&alpha_i.coeffs) + g.ht(&beta.coeffs) - g.ht(&nu.coeffs);
    let factor_tags = (rs.factor_of_root(&alpha_i), rs.factor_of_root(&beta), rs.factor_of_root(&nu));
    Ok(HarmonicComponent { i, j, factor, alpha_i, beta, nu, mu_tilde, homogeneity, factor_tags })
}

/// All components, regular or not, ordered by factor, then `(i, j)`.
pub fn enumerate_components(g: &ParabolicGrading) -> ComponentSet {
    let rs = &g.rs;
    let n = rs.rank();
    let mut seen = BTreeSet::new();
    let mut components = Vec::new();
    for factor in 0..rs.highest_roots.len() {
        for &i in g.xi.indices() {
            for j in 0..n {
                if !in_hasse_graph(g, i, j) {
                    continue;
                }
                let (a, b) = orient(rs, i, j, factor);
                if !seen.insert((factor, a, b)) {
                    continue;
                }
                components.push(component(g, a, b, factor).expect("admitted pair"));
            }
        }
    }
    components.sort_by_key(|c| (c.factor, c.i, c.j));
    ComponentSet { components }
}

pub fn homogeneity(c: &HarmonicComponent, g: &ParabolicGrading) -> i64 {
    g.ht(&c.alpha_i.coeffs) + g.ht(&c.beta.coeffs) - g.ht(&c.nu.coeffs)
}

pub fn bihomogeneity(c: &HarmonicComponent, bg: &BiGrading) -> (i64, i64) {
    let (a1, b1) = bg.bidegree(&c.alpha_i.coeffs);
    let (a2, b2) = bg.bidegree(&c.beta.coeffs);
    let (a3, b3) = bg.bidegree(&c.nu.coeffs);
    (a1 + a2 - a3, b1 + b2 - b3)
}

/// Simple roots γ of positive height with `⟨μ̃, γ∨⟩ = 0`.
pub fn gamma_roots(c: &HarmonicComponent, g: &ParabolicGrading) -> Vec<usize> {
    g.xi
        .indices()
        .iter()
        .copied()
        .filter(|&k| c.mu_tilde.coords[k] == rat(0))
        .collect()
}

/// The five kinds of components for semisimple g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SemisimpleType {
    /// α_i, α_j and the highest root in three different factors.
    CrossThird = 1,
    /// α_i, α_j in one factor, j ∉ Ξ, highest root elsewhere.
    SameOtherNonXi = 2,
    /// α_i, α_j in one factor, j ∈ Ξ, highest root elsewhere.
    SameOtherXi = 3,
    /// α_i, α_j in different factors, highest root in the factor of α_i.
    Cross = 4,
    /// Everything inside one simple factor.
    Simple = 5,
}

#[derive(Debug, Clone)]
pub struct TypedComponent {
    pub component: HarmonicComponent,
    pub kind: SemisimpleType,
    /// Homogeneity predicted by the type's closed formula.
    pub formula_homogeneity: i64,
    /// Whether the side restrictions of the type hold.
    pub restriction_holds: bool,
    /// `b = ⟨α_j, α_i∨⟩` (types 2 and 3), `c` (type 4), `k` of the moved factor.
    pub b: i64,
    pub c: Option<i64>,
    pub k_factor: i64,
}

/// Classifies every component of a semisimple grading into the five types
/// and evaluates the closed homogeneity formulas.
pub fn semisimple_component_types(g: &ParabolicGrading) -> Result<Vec<TypedComponent>> {
    let rs = &g.rs;
    for (f, range) in rs.factor_nodes.iter().enumerate() {
        if !range.clone().any(|i| g.xi.contains(i)) {
            return Err(Error::Malformed(format!("Ξ does not meet factor {}", f + 1)));
        }
    }
    let k_of = |f: usize| g.ht(&rs.highest_roots[f].coeffs);
    let mut out = Vec::new();
    for c in enumerate_components(g).components {
        let (i, j, l) = (c.i, c.j, c.factor);
        let (fi, fj) = (rs.factor_of_node(i), rs.factor_of_node(j));
        let b = rs.cartan[i][j];
        let kl = k_of(l);
        let (kind, formula, restriction, cval) = if fi != fj && l != fi && l != fj {
            (SemisimpleType::CrossThird, 1, kl == 1, None)
        } else if fi == fj && l != fi {
            if g.xi.contains(j) {
                (SemisimpleType::SameOtherXi, 2 - b - kl, kl < 2 - b, None)
            } else {
                (SemisimpleType::SameOtherNonXi, 1 - b - kl, b != 0 && kl < 1 - b, None)
            }
        } else if fi != fj {
            // oriented so that α_i lies in the moved factor
            let s_mu = rs.reflect_coeffs(&rs.highest_roots[l].coeffs, i);
            let cv = g.ht(&rs.simple_root(i).coeffs) - g.ht(&s_mu);
            (SemisimpleType::Cross, 1 + cv, -1 < cv, Some(cv))
        } else {
            (SemisimpleType::Simple, c.homogeneity, c.is_regular(), None)
        };
        out.push(TypedComponent {
            component: c,
            kind,
            formula_homogeneity: formula,
            restriction_holds: restriction,
            b,
            c: cval,
            k_factor: kl,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::{bigrade, grade, Xi};
    use crate::rootsys::parse_types;
    use std::collections::HashMap;
    use std::sync::Arc;

    fn grading(t: &str, xi: &[usize]) -> ParabolicGrading {
        let rs = Arc::new(RootSystem::new(&parse_types(t).unwrap()).unwrap());
        let n = rs.rank();
        grade(rs, Xi::new(xi.to_vec(), n).unwrap()).unwrap()
    }

    fn regular_labels(g: &ParabolicGrading) -> Vec<(usize, usize)> {
        enumerate_components(g).regular().map(|c| (c.i + 1, c.j + 1)).collect()
    }

    #[test]
    fn projective_structures_have_one_component() {
        for n in 3..=7 {
            let g = grading(&format!("A{n}"), &[0]);
            assert_eq!(regular_labels(&g), vec![(1, 2)]);
            let c = &enumerate_components(&g).components[0];
            assert_eq!(c.homogeneity, 2);
            assert_eq!(homogeneity(c, &g), 2);
        }
    }

    #[test]
    fn a3_second_node() {
        let g = grading("A3", &[1]);
        assert_eq!(regular_labels(&g), vec![(2, 1), (2, 3)]);
    }

    #[test]
    fn g2_generic_distribution() {
        let g = grading("G2", &[0]);
        assert_eq!(regular_labels(&g), vec![(1, 2)]);
        let c = &enumerate_components(&g).components[0];
        assert_eq!(c.homogeneity, 4);
        assert!(gamma_roots(c, &g).is_empty());
    }

    #[test]
    fn gamma_examples() {
        let g = grading("A5", &[0, 1]);
        let cs = enumerate_components(&g);
        let c = cs.components.iter().find(|c| (c.i, c.j) == (1, 0)).unwrap();
        assert_eq!(gamma_roots(c, &g), vec![0]);
        for n in 4..=7 {
            let g = grading(&format!("C{n}"), &[0, n - 1]);
            let cs = enumerate_components(&g);
            let c = cs.components.iter().find(|c| (c.i, c.j) == (0, 1)).unwrap();
            assert_eq!(gamma_roots(c, &g), vec![n - 1], "C{n}");
        }
    }

    #[test]
    fn bihomogeneity_examples() {
        let g = grading("A3", &[0, 1, 2]);
        let cs = enumerate_components(&g);
        let c = cs.components.iter().find(|c| (c.i, c.j) == (1, 0)).unwrap();
        let all_minus = bigrade(&g, &[0, 1, 2], &[]).unwrap();
        assert_eq!(bihomogeneity(c, &all_minus), (c.homogeneity, 0));
        let all_plus = bigrade(&g, &[], &[0, 1, 2]).unwrap();
        assert_eq!(bihomogeneity(c, &all_plus), (0, c.homogeneity));
        let bg = bigrade(&g, &[1], &[0, 2]).unwrap();
        let (a, b) = bihomogeneity(c, &bg);
        assert_eq!(a + b, c.homogeneity);
        // node-2 contribution: α₂ (1) + α₁+α₂ (1) − α₃ (0)
        assert_eq!(a, 2);
    }

    #[test]
    fn nonexistent_component_is_rejected() {
        let g = grading("A4", &[0]);
        assert!(component(&g, 0, 3, 0).is_err());
        assert!(component(&g, 1, 0, 0).is_err());
    }

    fn subsets(n: usize) -> Vec<Vec<usize>> {
        (1u32..(1 << n)).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
    }

    /// Distinct Weyl group elements of length exactly two in W^p, found by
    /// brute force on the action on all roots.
    fn hasse_length_two_oracle(g: &ParabolicGrading) -> usize {
        let rs = &g.rs;
        let n = rs.rank();
        let mut elems: HashMap<Vec<usize>, ()> = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                let perm: Vec<usize> = rs
                    .roots
                    .iter()
                    .map(|r| rs.root_index(&rs.apply_word_coeffs(&[a, b], &r.coeffs)).unwrap())
                    .collect();
                let inv_count = rs
                    .positive_roots()
                    .iter()
                    .filter(|r| !rs.roots[perm[rs.root_index(&r.coeffs).unwrap()]].is_positive())
                    .count();
                if inv_count != 2 {
                    continue;
                }
                // w⁻¹ = s_b s_a must keep the Levi simple roots positive
                let ok = (0..n).filter(|k| !g.xi.contains(*k)).all(|k| {
                    rs.apply_word_coeffs(&[b, a], &rs.simple_root(k).coeffs)
                        .iter()
                        .all(|&c| c >= 0)
                });
                if ok {
                    elems.insert(perm, ());
                }
            }
        }
        elems.len()
    }

    #[test]
    fn component_count_matches_weyl_group_oracle() {
        for t in ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "G2",
                  "F4", "A2+A2", "B2+B2", "A3+A3"] {
            let rs = Arc::new(RootSystem::new(&parse_types(t).unwrap()).unwrap());
            let nf = rs.highest_roots.len();
            let subs = if rs.rank() > 5 { subsets(rs.rank()).into_iter().step_by(3).collect() } else { subsets(rs.rank()) };
            for xi in subs {
                let g = grade(rs.clone(), Xi::new(xi.clone(), rs.rank()).unwrap()).unwrap();
                let cs = enumerate_components(&g);
                assert_eq!(cs.components.len(), nf * hasse_length_two_oracle(&g), "{t} {xi:?}");
                let mut labels: Vec<_> = cs.components.iter().map(|c| (c.factor, c.i, c.j)).collect();
                labels.dedup();
                assert_eq!(labels.len(), cs.components.len());
            }
        }
    }

    #[test]
    fn component_invariants_sweep() {
        for t in ["A4", "B3", "C4", "D4", "G2", "F4", "A2+A2", "C3+C3"] {
            let rs = Arc::new(RootSystem::new(&parse_types(t).unwrap()).unwrap());
            for xi in subsets(rs.rank()) {
                let g = grade(rs.clone(), Xi::new(xi.clone(), rs.rank()).unwrap()).unwrap();
                for c in enumerate_components(&g).components {
                    assert!(c.beta.is_positive());
                    assert!(rs.is_root(&c.nu.coeffs));
                    assert!(g.ht(&c.alpha_i.coeffs) >= 1);
                    // weight of the lowest weight vector is −μ̃
                    let lw: Vec<i64> = (0..rs.rank())
                        .map(|k| c.nu.coeffs[k] - c.alpha_i.coeffs[k] - c.beta.coeffs[k])
                        .collect();
                    assert_eq!(rs.root_to_weight(&lw), c.mu_tilde);
                    for k in 0..rs.rank() {
                        if !g.xi.contains(k) {
                            assert!(c.mu_tilde.coords[k] >= rat(0), "{t} {xi:?} {c}");
                        }
                    }
                    for split in 0..(1u32 << xi.len()) {
                        let (m, p): (Vec<usize>, Vec<usize>) =
                            xi.iter().enumerate().fold((vec![], vec![]), |(mut m, mut p), (k, &x)| {
                                if split & (1 << k) != 0 { m.push(x) } else { p.push(x) }
                                (m, p)
                            });
                        let bg = bigrade(&g, &m, &p).unwrap();
                        let (a, b) = bihomogeneity(&c, &bg);
                        assert_eq!(a + b, c.homogeneity);
                    }
                }
            }
        }
    }

    #[test]
    fn semisimple_types_match_direct_homogeneity() {
        for t in ["A2+A2", "A3+A3", "B2+B2", "G2+G2", "C3+C3", "A1+A2+A3", "A2+G2"] {
            let rs = Arc::new(RootSystem::new(&parse_types(t).unwrap()).unwrap());
            for xi in subsets(rs.rank()) {
                let g = grade(rs.clone(), Xi::new(xi.clone(), rs.rank()).unwrap()).unwrap();
                let Ok(typed) = semisimple_component_types(&g) else { continue };
                for tc in typed {
                    let c = &tc.component;
                    assert_eq!(tc.restriction_holds, c.is_regular(), "{t} {xi:?} {c} {:?}", tc.kind);
                    if tc.restriction_holds {
                        assert_eq!(tc.formula_homogeneity, c.homogeneity, "{t} {xi:?} {c} {:?}", tc.kind);
                    }
                    if tc.kind == SemisimpleType::CrossThird {
                        assert!(c.homogeneity != 1 || tc.k_factor == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn type_three_boundary() {
        // A2 ⊕ A1 with Ξ = {1,2} ∪ {3}: (1,2) moving the A1 highest root has b = −1, k = 1 → h = 2.
        let g = grading("A2+A1", &[0, 1, 2]);
        let typed = semisimple_component_types(&g).unwrap();
        let t = typed
            .iter()
            .find(|t| t.kind == SemisimpleType::SameOtherXi && (t.component.i, t.component.j) == (0, 1))
            .unwrap();
        assert_eq!(t.b, -1);
        assert_eq!(t.formula_homogeneity, 2);
        // with b = 1 impossible in simply laced; k = 2 gives the excluded boundary h = 1 for b = −1
        let g2 = grading("A2+A2", &[0, 1, 2, 3]);
        let typed2 = semisimple_component_types(&g2).unwrap();
        let t2 = typed2
            .iter()
            .find(|t| t.kind == SemisimpleType::SameOtherXi && (t.component.i, t.component.j) == (0, 1))
            .unwrap();
        assert_eq!(t2.k_factor, 2);
        assert_eq!(t2.formula_homogeneity, 1);
    }
}
