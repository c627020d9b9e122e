//! Central actions `s_J` of finite order and their effect on harmonic curvature.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::kostant::{component, enumerate_components, HarmonicComponent};
use crate::parabolic::{grade, ParabolicGrading, Xi};
use crate::realform::RealFormDescriptor;
use crate::scalar::rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JClass {
    Identity,
    Usual,
    ParaComplex,
    Complex,
}

impl fmt::Display for JClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JClass::Identity => "identity",
            JClass::Usual => "usual",
            JClass::ParaComplex => "para_complex",
            JClass::Complex => "complex",
        })
    }
}

/// `λ_J` in quarter turns: `s_J` acts on `g_α` by `i^{phase(α)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JAction {
    pub class: JClass,
    /// Phase of every simple root; zero off Ξ.
    pub phases: Vec<u8>,
    pub xi: Xi,
    /// Nodes shown in the printed tuple.
    pub display: Vec<usize>,
}

pub fn phase_symbol(p: u8) -> &'static str {
    match p % 4 {
        0 => "+",
        1 => "i",
        2 => "-",
        _ => "-i",
    }
}

pub fn parse_phase_symbol(s: &str) -> Result<u8> {
    match s.trim().replace('−', "-").as_str() {
        "+" => Ok(0),
        "i" | "+i" => Ok(1),
        "-" => Ok(2),
        "-i" => Ok(3),
        other => Err(Error::Parse(format!("unknown phase `{other}`"))),
    }
}

fn classify_phases(rf: &RealFormDescriptor, xi: &Xi, phases: &[u8]) -> Result<JClass> {
    let vals: Vec<u8> = xi.indices().iter().map(|&i| phases[i]).collect();
    let odd = vals.iter().filter(|p| *p % 2 == 1).count();
    if odd == 0 {
        for &i in xi.indices() {
            if phases[i] != phases[rf.sigma[i]] {
                return Err(Error::InvalidPhases("order-two phases must be σ-invariant".into()));
            }
        }
        return Ok(if vals.iter().all(|&p| p == 0) {
            JClass::Identity
        } else if vals.iter().all(|&p| p == 2) {
            JClass::Usual
        } else {
            JClass::ParaComplex
        });
    }
    if odd != vals.len() {
        return Err(Error::InvalidPhases("phases mix odd and even values".into()));
    }
    for &i in xi.indices() {
        if !(phases[i] + phases[rf.sigma[i]]).is_multiple_of(4) {
            return Err(Error::InvalidPhases("complex phases must satisfy phase(σl) = −phase(l)".into()));
        }
    }
    Ok(JClass::Complex)
}

impl JAction {
    /// Builds an action from phases on the Ξ nodes, validating the σ constraints.
    pub fn new(rf: &RealFormDescriptor, xi: &Xi, xi_phases: &[u8]) -> Result<JAction> {
        if xi_phases.len() != xi.len() {
            return Err(Error::XiMismatch(format!("{} phases for {xi}", xi_phases.len())));
        }
        let mut phases = vec![0u8; rf.rank()];
        for (&i, &p) in xi.indices().iter().zip(xi_phases) {
            phases[i] = p % 4;
        }
        let class = classify_phases(rf, xi, &phases)?;
        Ok(JAction { class, phases, xi: xi.clone(), display: rf.display_nodes(xi) })
    }

    /// Builds an action from phases on the displayed nodes; hidden copies follow σ.
    pub fn from_display(rf: &RealFormDescriptor, xi: &Xi, shown: &[u8]) -> Result<JAction> {
        let display = rf.display_nodes(xi);
        if shown.len() != display.len() {
            return Err(Error::XiMismatch(format!("{} phases for {} shown nodes", shown.len(), display.len())));
        }
        let mut phases = vec![0u8; rf.rank()];
        for (&i, &p) in display.iter().zip(shown) {
            phases[i] = p % 4;
            if !display.contains(&rf.sigma[i]) {
                phases[rf.sigma[i]] = (4 - p % 4) % 4;
            }
        }
        let xi_phases: Vec<u8> = xi.indices().iter().map(|&i| phases[i]).collect();
        JAction::new(rf, xi, &xi_phases)
    }

    pub fn phase_of(&self, coeffs: &[i64]) -> u8 {
        let s: i64 = coeffs.iter().zip(&self.phases).map(|(&c, &p)| c * p as i64).sum();
        s.rem_euclid(4) as u8
    }

    pub fn shown_phases(&self) -> Vec<u8> {
        self.display.iter().map(|&i| self.phases[i]).collect()
    }

    pub fn tuple_repr(&self) -> String {
        let parts: Vec<&str> = self.shown_phases().into_iter().map(phase_symbol).collect();
        format!("({})", parts.join(","))
    }

    /// Pointwise sum of phases.
    pub fn compose(&self, other: &JAction, rf: &RealFormDescriptor) -> Result<JAction> {
        if self.xi != other.xi {
            return Err(Error::XiMismatch(format!("{} vs {}", self.xi, other.xi)));
        }
        let ph: Vec<u8> = self.xi.indices().iter().map(|&i| (self.phases[i] + other.phases[i]) % 4).collect();
        JAction::new(rf, &self.xi, &ph)
    }
}

impl fmt::Display for JAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tuple_repr())
    }
}

/// All actions of the given class compatible with σ*.
pub fn admissible_j(rf: &RealFormDescriptor, xi: &Xi, class: JClass) -> Vec<JAction> {
    let orbits = rf.orbits(xi);
    let mut out = Vec::new();
    let choices: &[u8] = if class == JClass::Complex { &[1, 3] } else { &[0, 2] };
    if class == JClass::Complex && !complex_pairing_free(rf, xi, ComplexPairing::Sigma) {
        return out;
    }
    let total = choices.len().pow(orbits.len() as u32);
    for code in 0..total {
        let mut phases = vec![0u8; rf.rank()];
        let mut c = code;
        for o in &orbits {
            let p = choices[c % choices.len()];
            c /= choices.len();
            phases[o[0]] = p;
            if o.len() == 2 {
                phases[o[1]] = if class == JClass::Complex { (4 - p) % 4 } else { p };
            }
        }
        let xp: Vec<u8> = xi.indices().iter().map(|&i| phases[i]).collect();
        if let Ok(j) = JAction::new(rf, xi, &xp) {
            if j.class == class {
                out.push(j);
            }
        }
    }
    out.sort_by_key(|j| j.shown_phases());
    out
}

/// Involution of the nodes used to pair the ±i phases of a complex action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexPairing {
    /// σ* itself; the choice used throughout classification.
    Sigma,
    /// σ* composed with −w₀.
    SigmaMinusW0,
}

/// Whether the pairing leaves no node of Ξ fixed, the necessary condition for complex actions.
pub fn complex_pairing_free(rf: &RealFormDescriptor, xi: &Xi, pairing: ComplexPairing) -> bool {
    let w0 = rf.rs.minus_w0();
    xi.indices().iter().all(|&i| {
        let k = match pairing {
            ComplexPairing::Sigma => rf.sigma[i],
            ComplexPairing::SigmaMinusW0 => rf.sigma[w0[i]],
        };
        k != i && xi.contains(k)
    })
}

/// Usual, para-complex and complex actions, in that order.
pub fn nontrivial_j(rf: &RealFormDescriptor, xi: &Xi) -> Vec<JAction> {
    [JClass::Usual, JClass::ParaComplex, JClass::Complex]
        .into_iter()
        .flat_map(|c| admissible_j(rf, xi, c))
        .collect()
}

pub fn eigenphase(j: &JAction, c: &HarmonicComponent) -> Result<u8> {
    if j.phases.len() != c.alpha_i.coeffs.len() {
        return Err(Error::XiMismatch("action and component live on different root systems".into()));
    }
    let p = j.phase_of(&c.alpha_i.coeffs) as i64 + j.phase_of(&c.beta.coeffs) as i64
        - j.phase_of(&c.nu.coeffs) as i64;
    Ok(p.rem_euclid(4) as u8)
}

/// A σ*-orbit of complex components.
#[derive(Debug, Clone)]
pub struct RealComponent {
    pub rep: HarmonicComponent,
    pub members: Vec<HarmonicComponent>,
    pub label: String,
}

impl RealComponent {
    pub fn homogeneity(&self) -> i64 {
        self.rep.homogeneity
    }

    pub fn is_regular(&self) -> bool {
        self.rep.is_regular()
    }

    /// Whether the table label `(i,j)` names this component; labels refer to the
    /// member moving the highest root of the first factor, and commuting pairs
    /// may be written in either order.
    pub fn matches(&self, rf: &RealFormDescriptor, i: usize, j: usize) -> bool {
        let key = |a: usize, b: usize| {
            if rf.rs.cartan[a][b] == 0 { (a.min(b), a.max(b)) } else { (a, b) }
        };
        self.members.iter().any(|m| m.factor == 0 && key(m.i, m.j) == key(i, j))
    }

    pub fn member_labels(&self, rf: &RealFormDescriptor) -> Vec<String> {
        self.members.iter().map(|c| component_label(rf, c)).collect()
    }
}

pub fn component_label(rf: &RealFormDescriptor, c: &HarmonicComponent) -> String {
    format!("({},{})", rf.node_label(c.i), rf.node_label(c.j))
}

fn sigma_factor(rf: &RealFormDescriptor, factor: usize) -> usize {
    let first = rf.rs.factor_nodes[factor].start;
    rf.rs.factor_of_node(rf.sigma[first])
}

/// Real components over `rf`, grouped into σ*-orbits; representatives minimise `(factor, i, j)`.
pub fn real_components(rf: &RealFormDescriptor, g: &ParabolicGrading) -> Result<Vec<RealComponent>> {
    let all = enumerate_components(g).components;
    let mut used = BTreeSet::new();
    let mut out = Vec::new();
    for c in &all {
        let key = (c.factor, c.i, c.j);
        if used.contains(&key) {
            continue;
        }
        let img = component(g, rf.sigma[c.i], rf.sigma[c.j], sigma_factor(rf, c.factor))?;
        let mut members = vec![c.clone()];
        if (img.factor, img.i, img.j) != key {
            members.push(img);
        }
        for m in &members {
            used.insert((m.factor, m.i, m.j));
        }
        members.sort_by_key(|m| (m.factor, m.i, m.j));
        let rep = members[0].clone();
        out.push(RealComponent { label: component_label(rf, &rep), rep, members });
    }
    Ok(out)
}

pub fn surviving_components<'a>(j: &JAction, cs: &'a [RealComponent]) -> Vec<&'a RealComponent> {
    cs.iter().filter(|c| eigenphase(j, &c.rep).map(|p| p == 0).unwrap_or(false)).collect()
}

/// Root indices of `p₊` on which `s_J` acts trivially.
pub fn fixed_plus_subalgebra(j: &JAction, g: &ParabolicGrading) -> Result<Vec<usize>> {
    if j.xi != g.xi {
        return Err(Error::XiMismatch(format!("{} vs {}", j.xi, g.xi)));
    }
    Ok(g.p_plus().into_iter().filter(|&r| j.phase_of(&g.rs.roots[r].coeffs) == 0).collect())
}

/// σ*-orbits of Ξ nodes pairing to zero with `μ̃` of every member of every given component.
pub fn gamma_orbits(rf: &RealFormDescriptor, g: &ParabolicGrading, comps: &[&RealComponent]) -> Vec<Vec<usize>> {
    rf.orbits(&g.xi)
        .into_iter()
        .filter(|o| {
            comps
                .iter()
                .flat_map(|c| c.members.iter())
                .all(|m| o.iter().all(|&k| m.mu_tilde.coords[k] == rat(0)))
        })
        .collect()
}

pub fn gamma_label(rf: &RealFormDescriptor, orbit: &[usize]) -> String {
    format!("α{}", rf.node_label(orbit[0]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    AtMostOne,
    PossiblyMany,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::AtMostOne => "at most one",
            Verdict::PossiblyMany => "possibly many",
        })
    }
}

pub fn multiplicity_verdict(j: &JAction, gamma: &[Vec<usize>]) -> Verdict {
    if gamma.iter().flatten().all(|&k| j.phases[k] == 0) {
        Verdict::AtMostOne
    } else {
        Verdict::PossiblyMany
    }
}

#[derive(Debug, Clone)]
pub struct ComponentSummary {
    pub label: String,
    pub homogeneity: i64,
    pub gamma: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ClassificationRow {
    pub real_form: String,
    pub xi: Xi,
    pub xi_display: String,
    pub components: Vec<ComponentSummary>,
    pub gamma: Vec<String>,
    pub j_actions: Vec<(JAction, Verdict)>,
}

/// Xi rendered with table labels over displayed nodes.
pub fn xi_display(rf: &RealFormDescriptor, xi: &Xi) -> String {
    let parts: Vec<String> = rf.display_nodes(xi).iter().map(|&i| rf.node_label(i)).collect();
    format!("{{{}}}", parts.join(","))
}

/// The data of one table row: `comps` together with every nontrivial J acting trivially on all of them.
pub fn row_for(rf: &RealFormDescriptor, g: &ParabolicGrading, comps: &[&RealComponent]) -> ClassificationRow {
    let gamma = gamma_orbits(rf, g, comps);
    let j_actions = nontrivial_j(rf, &g.xi)
        .into_iter()
        .filter(|j| comps.iter().all(|c| matches!(eigenphase(j, &c.rep), Ok(0))))
        .map(|j| {
            let v = multiplicity_verdict(&j, &gamma);
            (j, v)
        })
        .collect();
    ClassificationRow {
        real_form: rf.name.clone(),
        xi: g.xi.clone(),
        xi_display: xi_display(rf, &g.xi),
        components: comps
            .iter()
            .map(|c| ComponentSummary {
                label: c.label.clone(),
                homogeneity: c.homogeneity(),
                gamma: gamma_orbits(rf, g, &[c]).iter().map(|o| gamma_label(rf, o)).collect(),
            })
            .collect(),
        gamma: gamma.iter().map(|o| gamma_label(rf, o)).collect(),
        j_actions,
    }
}

pub fn grading_for(rf: &RealFormDescriptor, xi: &Xi) -> Result<ParabolicGrading> {
    if !rf.admissible_xi(xi) {
        return Err(Error::Inadmissible { form: rf.name.clone(), xi: xi.to_string() });
    }
    grade(rf.rs.clone(), xi.clone())
}

/// Every regular component and the nontrivial actions surviving all of them.
pub fn classify(rf: &RealFormDescriptor, xi: &Xi) -> Result<ClassificationRow> {
    let g = grading_for(rf, xi)?;
    let comps = real_components(rf, &g)?;
    let regular: Vec<&RealComponent> = comps.iter().filter(|c| c.is_regular()).collect();
    Ok(row_for(rf, &g, &regular))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant::bihomogeneity;
    use crate::parabolic::bigrade;
    use crate::realform::Catalog;

    fn form(name: &str) -> RealFormDescriptor {
        Catalog::builtin().parse_instance(name).unwrap()
    }

    fn setup(name: &str, nodes: &[usize]) -> (RealFormDescriptor, ParabolicGrading, Vec<RealComponent>) {
        let rf = form(name);
        let idx: Vec<usize> = nodes.iter().map(|n| n - 1).collect();
        let xi = rf.table_xi(&idx).unwrap();
        let g = grading_for(&rf, &xi).unwrap();
        let cs = real_components(&rf, &g).unwrap();
        (rf, g, cs)
    }

    fn js(rf: &RealFormDescriptor, g: &ParabolicGrading, comps: &[&RealComponent]) -> Vec<String> {
        let mut v: Vec<String> = row_for(rf, g, comps).j_actions.iter().map(|(j, _)| j.tuple_repr()).collect();
        v.sort();
        v
    }

    fn find<'a>(cs: &'a [RealComponent], rf: &RealFormDescriptor, label: &str) -> &'a RealComponent {
        cs.iter().find(|c| c.member_labels(rf).iter().any(|l| l == label)).unwrap()
    }

    #[test]
    fn usual_is_unique_and_identity_unique() {
        let (rf, g, _) = setup("sl(5,R)", &[1, 3]);
        assert_eq!(admissible_j(&rf, &g.xi, JClass::Usual).len(), 1);
        assert_eq!(admissible_j(&rf, &g.xi, JClass::Identity).len(), 1);
        assert!(admissible_j(&rf, &g.xi, JClass::Complex).is_empty());
        let para: Vec<String> = admissible_j(&rf, &g.xi, JClass::ParaComplex).iter().map(|j| j.tuple_repr()).collect();
        assert_eq!(para, vec!["(+,-)", "(-,+)"]);
    }

    #[test]
    fn phase_maps_are_distinct() {
        for name in ["sl(5,R)", "su(2,3)", "sl(3,C)", "so(4,4)", "sp(6,C)"] {
            let rf = form(name);
            let n = rf.rank();
            for m in 1u32..(1 << n) {
                let xi = Xi::new((0..n).filter(|i| m & (1 << i) != 0).collect(), n).unwrap();
                if !rf.admissible_xi(&xi) {
                    continue;
                }
                let mut all = nontrivial_j(&rf, &xi);
                all.extend(admissible_j(&rf, &xi, JClass::Identity));
                let set: BTreeSet<Vec<u8>> = all.iter().map(|j| j.phases.clone()).collect();
                assert_eq!(set.len(), all.len());
            }
        }
    }

    #[test]
    fn complex_requires_fixed_point_free_sigma() {
        let (rf, g, _) = setup("su(2,2)", &[1, 2, 3]);
        assert!(admissible_j(&rf, &g.xi, JClass::Complex).is_empty());
        let (rf, g, _) = setup("su(2,2)", &[1, 3]);
        let c: Vec<String> = admissible_j(&rf, &g.xi, JClass::Complex).iter().map(|j| j.tuple_repr()).collect();
        assert_eq!(c, vec!["(i,-i)", "(-i,i)"]);
    }

    #[test]
    fn mixed_phases_rejected() {
        let (rf, g, _) = setup("sl(3,C)", &[1, 2]);
        assert!(JAction::from_display(&rf, &g.xi, &[1, 2]).is_err());
        assert_eq!(JAction::from_display(&rf, &g.xi, &[1, 1]).unwrap().class, JClass::Complex);
    }

    #[test]
    fn usual_parity_law() {
        let cat = Catalog::builtin();
        for rf in cat.instances_up_to_rank(5) {
            let n = rf.rank();
            if n > 8 {
                continue;
            }
            for m in 1u32..(1 << n) {
                let xi = Xi::new((0..n).filter(|i| m & (1 << i) != 0).collect(), n).unwrap();
                if !rf.admissible_xi(&xi) {
                    continue;
                }
                let g = grading_for(&rf, &xi).unwrap();
                let u = &admissible_j(&rf, &xi, JClass::Usual)[0];
                for c in enumerate_components(&g).components {
                    assert_eq!(eigenphase(u, &c).unwrap() as i64, (2 * c.homogeneity).rem_euclid(4));
                }
            }
        }
    }

    #[test]
    fn complex_eigenphase_matches_bihomogeneity() {
        for name in ["sl(4,C)", "su(2,3)", "sp(6,C)", "g2(C)", "su(3,3)"] {
            let rf = form(name);
            let n = rf.rank();
            for m in 1u32..(1 << n) {
                let xi = Xi::new((0..n).filter(|i| m & (1 << i) != 0).collect(), n).unwrap();
                if !rf.admissible_xi(&xi) {
                    continue;
                }
                let g = grading_for(&rf, &xi).unwrap();
                for j in admissible_j(&rf, &xi, JClass::Complex) {
                    let minus: Vec<usize> = xi.indices().iter().copied().filter(|&k| j.phases[k] == 3).collect();
                    let plus: Vec<usize> = xi.indices().iter().copied().filter(|&k| j.phases[k] == 1).collect();
                    let bg = bigrade(&g, &minus, &plus).unwrap();
                    for c in enumerate_components(&g).components {
                        let (a, b) = bihomogeneity(&c, &bg);
                        assert_eq!(eigenphase(&j, &c).unwrap() as i64, (3 * a + b).rem_euclid(4));
                    }
                    let fixed = fixed_plus_subalgebra(&j, &g).unwrap();
                    let oracle: Vec<usize> = g
                        .p_plus()
                        .into_iter()
                        .filter(|&r| {
                            let (a, b) = bg.bidegree(&g.rs.roots[r].coeffs);
                            (3 * a + b).rem_euclid(4) == 0
                        })
                        .collect();
                    assert_eq!(fixed, oracle);
                }
            }
        }
    }

    #[test]
    fn composition_of_complex_is_order_two() {
        let (rf, g, _) = setup("sl(4,C)", &[1, 3]);
        let cs = admissible_j(&rf, &g.xi, JClass::Complex);
        for a in &cs {
            for b in &cs {
                let c = a.compose(b, &rf).unwrap();
                assert!(matches!(c.class, JClass::Identity | JClass::Usual | JClass::ParaComplex));
            }
        }
    }

    #[test]
    fn fixed_subalgebra_of_usual() {
        let (rf, g, _) = setup("sl(4,R)", &[1, 2, 3]);
        let u = &admissible_j(&rf, &g.xi, JClass::Usual)[0];
        let fixed = fixed_plus_subalgebra(u, &g).unwrap();
        let oracle: Vec<usize> = g.p_plus().into_iter().filter(|&r| g.degree_of_root[r] % 2 == 0).collect();
        assert_eq!(fixed, oracle);
        assert_eq!(fixed.len(), 2);
        let (rf, g, _) = setup("sl(5,R)", &[1]);
        let u = &admissible_j(&rf, &g.xi, JClass::Usual)[0];
        assert!(fixed_plus_subalgebra(u, &g).unwrap().is_empty());
    }

    #[test]
    fn surviving_examples() {
        let (rf, g, cs) = setup("sl(4,R)", &[2]);
        let u = &admissible_j(&rf, &g.xi, JClass::Usual)[0];
        assert_eq!(surviving_components(u, &cs).len(), 2);

        let (rf, g, cs) = setup("sl(6,R)", &[1, 2]);
        let j = JAction::from_display(&rf, &g.xi, &[0, 2]).unwrap();
        let s: Vec<&str> = surviving_components(&j, &cs).iter().map(|c| c.label.as_str()).collect();
        assert!(s.contains(&"(2,1)"));
        assert!(!s.contains(&"(2,3)"));
        let ident = JAction::from_display(&rf, &g.xi, &[0, 0]).unwrap();
        assert_eq!(surviving_components(&ident, &cs).len(), cs.len());
    }

    #[test]
    fn g2_split_row() {
        let rf = form("g2(2)");
        let row = classify(&rf, &Xi::new(vec![0], 2).unwrap()).unwrap();
        assert_eq!(row.components.len(), 1);
        assert_eq!(row.components[0].label, "(1,2)");
        assert!(row.gamma.is_empty());
        assert_eq!(row.j_actions.len(), 1);
        assert_eq!(row.j_actions[0].0.tuple_repr(), "(-)");
        assert_eq!(row.j_actions[0].1, Verdict::AtMostOne);
    }

    #[test]
    fn su12_row() {
        let (rf, g, cs) = setup("su(1,2)", &[1, 2]);
        let c = find(&cs, &rf, "(1,2)");
        assert_eq!(c.members.len(), 2);
        assert_eq!(js(&rf, &g, &[c]), vec!["(-,-)"]);
    }

    #[test]
    fn sl_one_two_p_row() {
        let (rf, g, cs) = setup("sl(8,R)", &[1, 2, 5]);
        let c = find(&cs, &rf, "(2,1)");
        let row = row_for(&rf, &g, &[c]);
        assert_eq!(row.gamma, vec!["α1", "α5"]);
        let j = js(&rf, &g, &[c]);
        for t in ["(-,-,-)", "(-,+,-)", "(+,-,+)"] {
            assert!(j.contains(&t.to_string()), "{t} in {j:?}");
        }
        for (j, v) in &row.j_actions {
            let expect = if j.phases[0] == 0 && j.phases[4] == 0 { Verdict::AtMostOne } else { Verdict::PossiblyMany };
            assert_eq!(*v, expect, "{j}");
        }
    }

    #[test]
    fn sp_tuple_follows_ascending_nodes() {
        let (rf, g, cs) = setup("sp(10,R)", &[4, 5]);
        let c = find(&cs, &rf, "(4,5)");
        assert_eq!(js(&rf, &g, &[c]), vec!["(+,-)"]);
    }

    #[test]
    fn complex_form_row() {
        let (rf, g, cs) = setup("sl(5,C)", &[1]);
        let c = find(&cs, &rf, "(1,1')");
        assert_eq!(js(&rf, &g, &[c]), vec!["(-)", "(-i)", "(i)"]);
        let d = find(&cs, &rf, "(1,2)");
        assert_eq!(js(&rf, &g, &[c, d]), vec!["(-)"]);
    }

    #[test]
    fn inadmissible_xi() {
        let rf = form("su(1,3)");
        assert!(classify(&rf, &Xi::new(vec![0], 3).unwrap()).is_err());
    }

    #[test]
    fn complex_pairing_choice() {
        // su(p+1,n−p) with Ξ = {1,n} carries the complex action (i,−i).
        for (name, n) in [("su(1,3)", 3), ("su(2,2)", 3), ("su(2,3)", 4)] {
            let rf = form(name);
            let xi = rf.table_xi(&[0, n - 1]).unwrap();
            assert!(complex_pairing_free(&rf, &xi, ComplexPairing::Sigma));
            assert!(!complex_pairing_free(&rf, &xi, ComplexPairing::SigmaMinusW0));
            let shown: Vec<Vec<u8>> = admissible_j(&rf, &xi, JClass::Complex).iter().map(|j| j.shown_phases()).collect();
            assert!(shown.contains(&vec![1, 3]), "{name}");
        }
        // sl(n+1,C): both pairings are free on a node and its copy.
        let rf = form("sl(3,C)");
        let xi = rf.table_xi(&[0]).unwrap();
        assert!(complex_pairing_free(&rf, &xi, ComplexPairing::Sigma));
    }
}
