//! Explicit constructions: deforming `g₋` by lowest weight vectors of
//! harmonic curvature, annihilator towers, central symmetries of the result,
//! BCH arithmetic in `p₊`, and the curvature of an extension map.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chevalley::{AlgebraElement, StructureTable};
use crate::error::{Error, Result};
use crate::kostant::HarmonicComponent;
use crate::linalg::{hermite_normal_form, integer_kernel, kernel, mat_add, mat_mul, mat_scale, rank, solve, Matrix};
use crate::parabolic::ParabolicGrading;
use crate::realform::RealFormDescriptor;
use crate::rootsys::{Family, RootSystem};
use crate::scalar::{rat, Qi, Rat};
use crate::symmetry::{eigenphase, JAction, JClass};

/// An antisymmetric bilinear map on `g₋` with values in `g`, keyed by
/// ordered basis pairs `(a, b)` with `a < b`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Cochain2 {
    pub values: BTreeMap<(usize, usize), AlgebraElement>,
}

impl Cochain2 {
    pub fn set(&mut self, a: usize, b: usize, v: AlgebraElement) {
        let (key, v) = if a < b { ((a, b), v) } else { ((b, a), v.neg()) };
        let entry = self.values.entry(key).or_default();
        *entry = entry.add(&v);
        if entry.is_zero() {
            self.values.remove(&key);
        }
    }

    pub fn eval_basis(&self, a: usize, b: usize) -> AlgebraElement {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => AlgebraElement::zero(),
            std::cmp::Ordering::Less => self.values.get(&(a, b)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => self.values.get(&(b, a)).map(|v| v.neg()).unwrap_or_default(),
        }
    }

    pub fn eval(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, ca) in &x.coeffs {
            for (b, cb) in &y.coeffs {
                let v = self.eval_basis(*a, *b);
                if !v.is_zero() {
                    out.add_scaled(&v, &(ca * cb));
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Cochain2 {
        Cochain2 { values: self.values.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Distinct homogeneities `deg(value) − deg(a) − deg(b)` of the nonzero terms.
    pub fn homogeneity_profile(&self, g: &ParabolicGrading) -> Vec<i64> {
        let deg = |b: usize| if b < g.rs.roots.len() { g.degree_of_root[b] } else { 0 };
        let mut out: Vec<i64> = self
            .values
            .iter()
            .flat_map(|((a, b), v)| v.support().map(move |s| deg(s) - deg(*a) - deg(*b)).collect::<Vec<_>>())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `g₋` with the bracket `[ , ]_{g₋} + φ`, φ the sum of the chosen lowest weight vectors.
#[derive(Debug, Clone)]
pub struct DeformedAlgebra {
    pub table: Arc<StructureTable>,
    pub grading: ParabolicGrading,
    pub components: Vec<HarmonicComponent>,
    /// Root indices spanning `g₋`.
    pub basis: Vec<usize>,
    pub insertion: Cochain2,
    /// Curvature of the induced extension, `−φ`.
    pub curvature: Cochain2,
}

impl DeformedAlgebra {
    pub fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.table.bracket(x, y).add(&self.insertion.eval(x, y))
    }

    /// Basis triples violating the Jacobi identity of the deformed bracket.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let e = AlgebraElement::basis;
        let mut bad = Vec::new();
        for (ia, &a) in self.basis.iter().enumerate() {
            for (ib, &b) in self.basis.iter().enumerate().skip(ia + 1) {
                let ab = self.bracket(&e(a), &e(b));
                for &c in self.basis.iter().skip(ib + 1) {
                    let s = self
                        .bracket(&ab, &e(c))
                        .add(&self.bracket(&self.bracket(&e(b), &e(c)), &e(a)))
                        .add(&self.bracket(&self.bracket(&e(c), &e(a)), &e(b)));
                    if !s.is_zero() {
                        bad.push((a, b, c));
                    }
                }
            }
        }
        bad
    }
}

fn lowest_weight_cochain(t: &StructureTable, g: &ParabolicGrading, c: &HarmonicComponent) -> Result<Cochain2> {
    let rs = &t.rs;
    let idx = |coeffs: &[i64]| -> usize {
        let neg: Vec<i64> = coeffs.iter().map(|x| -x).collect();
        rs.root_index(&neg).expect("negative of a root is a root")
    };
    if !c.is_regular() {
        return Err(Error::NonRegular(c.to_string(), c.homogeneity));
    }
    if !c.nu.is_positive() || g.ht(&c.nu.coeffs) < 1 {
        return Err(Error::ImageNotInGMinus(c.to_string()));
    }
    let mut phi = Cochain2::default();
    phi.set(idx(&c.alpha_i.coeffs), idx(&c.beta.coeffs), AlgebraElement::basis(idx(&c.nu.coeffs)));
    Ok(phi)
}

pub fn deform(t: Arc<StructureTable>, g: &ParabolicGrading, c: &HarmonicComponent) -> Result<DeformedAlgebra> {
    deform_many(t, g, std::slice::from_ref(c))
}

/// Deforms by the sum of the lowest weight vectors of several components.
pub fn deform_many(t: Arc<StructureTable>, g: &ParabolicGrading, cs: &[HarmonicComponent]) -> Result<DeformedAlgebra> {
    if cs.is_empty() {
        return Err(Error::Malformed("no component to deform by".into()));
    }
    let mut phi = Cochain2::default();
    for c in cs {
        for ((a, b), v) in lowest_weight_cochain(&t, g, c)?.values {
            phi.set(a, b, v);
        }
    }
    let d = DeformedAlgebra {
        basis: g.g_minus(),
        grading: g.clone(),
        components: cs.to_vec(),
        curvature: phi.neg(),
        insertion: phi,
        table: t,
    };
    if let Some(&(a, b, c)) = d.jacobi_violations().first() {
        return Err(Error::JacobiFailure(format!("basis triple ({a},{b},{c})")));
    }
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct AnnihilatorTower {
    pub a0: Vec<AlgebraElement>,
    /// Bases of `a₁, a₂, …`, stopping at the first zero space.
    pub a_plus: Vec<Vec<AlgebraElement>>,
}

impl AnnihilatorTower {
    pub fn dim_a0(&self) -> usize {
        self.a0.len()
    }

    pub fn dim_a_plus(&self) -> usize {
        self.a_plus.iter().map(Vec::len).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.a0.len()).chain(self.a_plus.iter().map(Vec::len)).collect()
    }
}

/// Basis indices of `g_d`, with the Cartan subalgebra in degree zero.
fn graded_basis(t: &StructureTable, g: &ParabolicGrading, d: i64) -> Vec<usize> {
    let mut b = g.roots_of_degree(d);
    if d == 0 {
        b.extend((0..t.rs.rank()).map(|i| t.cartan_index(i)));
    }
    b
}

fn element_from(basis: &[usize], v: &[Qi]) -> AlgebraElement {
    let mut e = AlgebraElement::zero();
    for (b, c) in basis.iter().zip(v) {
        e.add_term(*b, c);
    }
    e
}

/// `(X.φ)(u,v) = [X, φ(u,v)] − φ([X,u], v) − φ(u, [X,v])`.
pub fn act_on_cochain(t: &StructureTable, basis: &[usize], x: &AlgebraElement, phi: &Cochain2) -> Cochain2 {
    let mut out = Cochain2::default();
    for (iu, &u) in basis.iter().enumerate() {
        let eu = AlgebraElement::basis(u);
        let xu = t.bracket(x, &eu);
        for &v in basis.iter().skip(iu + 1) {
            let ev = AlgebraElement::basis(v);
            let val = t
                .bracket(x, &phi.eval_basis(u, v))
                .sub(&phi.eval(&xu, &ev))
                .sub(&phi.eval(&eu, &t.bracket(x, &ev)));
            if !val.is_zero() {
                out.set(u, v, val);
            }
        }
    }
    out
}

pub fn annihilator_tower(d: &DeformedAlgebra) -> AnnihilatorTower {
    let t = &d.table;
    let g = &d.grading;
    let phi = &d.insertion;

    let g0 = graded_basis(t, g, 0);
    let images: Vec<Cochain2> = g0.iter().map(|&b| act_on_cochain(t, &d.basis, &AlgebraElement::basis(b), phi)).collect();
    let mut rows: BTreeMap<(usize, usize, usize), Vec<Qi>> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for ((u, v), val) in &img.values {
            for (s, c) in &val.coeffs {
                rows.entry((*u, *v, *s)).or_insert_with(|| vec![Qi::default(); g0.len()])[col] = c.clone();
            }
        }
    }
    let m: Matrix<Qi> = rows.into_values().collect();
    let a0: Vec<AlgebraElement> = kernel(&m, g0.len()).iter().map(|v| element_from(&g0, v)).collect();

    let g_minus_one = g.roots_of_degree(-1);
    let mut a_plus = Vec::new();
    let mut prev = a0.clone();
    let mut prev_basis = g0;
    for i in 1..=g.k {
        let gi = graded_basis(t, g, i);
        // Functionals on g_{i−1} vanishing on a_{i−1}.
        let a_rows: Matrix<Qi> = prev.iter().map(|e| prev_basis.iter().map(|b| e.coeff(*b)).collect()).collect();
        let functionals = if a_rows.is_empty() {
            (0..prev_basis.len())
                .map(|j| (0..prev_basis.len()).map(|k| Qi::int(i64::from(j == k))).collect())
                .collect()
        } else {
            kernel(&a_rows, prev_basis.len())
        };
        let mut m: Matrix<Qi> = Vec::new();
        for &u in &g_minus_one {
            for f in &functionals {
                let row: Vec<Qi> = gi
                    .iter()
                    .map(|&b| {
                        let br = t.bracket_basis(b, u);
                        prev_basis.iter().zip(f).fold(Qi::default(), |acc, (pb, fc)| acc + br.coeff(*pb) * fc.clone())
                    })
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    m.push(row);
                }
            }
        }
        let ai: Vec<AlgebraElement> = kernel(&m, gi.len()).iter().map(|v| element_from(&gi, v)).collect();
        if ai.is_empty() {
            break;
        }
        a_plus.push(ai.clone());
        prev = ai;
        prev_basis = gi;
    }
    AnnihilatorTower { a0, a_plus }
}

/// Checks `[a_i, g₋₁] ⊆ a_{i−1}` by re-substitution.
pub fn tower_is_consistent(d: &DeformedAlgebra, tower: &AnnihilatorTower) -> bool {
    let t = &d.table;
    let g = &d.grading;
    let in_span = |basis: &[usize], span: &[AlgebraElement], x: &AlgebraElement| -> bool {
        if x.support().any(|s| !basis.contains(&s)) {
            return false;
        }
        let cols: Matrix<Qi> = basis.iter().map(|b| span.iter().map(|e| e.coeff(*b)).collect()).collect();
        let rhs: Vec<Qi> = basis.iter().map(|b| x.coeff(*b)).collect();
        if span.is_empty() {
            return x.is_zero();
        }
        solve(&cols, &rhs).is_some()
    };
    // a₀ annihilates φ.
    if tower.a0.iter().any(|x| !act_on_cochain(t, &d.basis, x, &d.insertion).is_zero()) {
        return false;
    }
    let mut prev = (graded_basis(t, g, 0), tower.a0.clone());
    for (i, ai) in tower.a_plus.iter().enumerate() {
        for x in ai {
            for u in g.roots_of_degree(-1) {
                if !in_span(&prev.0, &prev.1, &t.bracket(x, &AlgebraElement::basis(u))) {
                    return false;
                }
            }
        }
        prev = (graded_basis(t, g, i as i64 + 1), ai.clone());
    }
    true
}

/// Lattice of characters of the real torus used for inner-ness of order-two phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharacterLattice {
    Roots,
    Weights,
    RootsAndFirstWeight,
}

fn character_lattice(f: Family, rank: usize) -> CharacterLattice {
    match f {
        Family::A | Family::C => CharacterLattice::Weights,
        Family::B | Family::D => CharacterLattice::RootsAndFirstWeight,
        Family::E if rank <= 7 => CharacterLattice::Weights,
        _ => CharacterLattice::Roots,
    }
}

/// Root-lattice vectors `v ∈ {0,1}^r` (one factor at a time) with `v/2` in the character lattice.
fn half_lattice_vectors(rs: &RootSystem) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for (f, ty) in rs.simple_types.iter().enumerate() {
        let nodes: Vec<usize> = rs.factor_nodes[f].clone().collect();
        let lat = character_lattice(ty.family, ty.rank);
        let omega1: Vec<Rat> = {
            let mut w = vec![rat(0); rs.rank()];
            w[nodes[0]] = rat(1);
            rs.weight_to_root_coords(&crate::rootsys::Weight { coords: w })
        };
        for code in 1u64..(1 << nodes.len()) {
            let mut v = vec![0i64; rs.rank()];
            for (k, &n) in nodes.iter().enumerate() {
                v[n] = ((code >> k) & 1) as i64;
            }
            let half: Vec<Rat> = v.iter().map(|&c| Rat::new(c.into(), 2.into())).collect();
            let integral = |x: &[Rat]| x.iter().all(|c| c.is_integer());
            let member = match lat {
                CharacterLattice::Roots => integral(&half),
                CharacterLattice::Weights => (0..rs.rank()).all(|i| {
                    let p: Rat = half.iter().enumerate().map(|(j, c)| c * rat(rs.cartan[i][j])).sum();
                    p.is_integer()
                }),
                CharacterLattice::RootsAndFirstWeight => {
                    integral(&half) || integral(&half.iter().zip(&omega1).map(|(a, b)| a - b).collect::<Vec<_>>())
                }
            };
            if member {
                out.push(v);
            }
        }
    }
    out
}

/// True when the order-two phase map extends to a sign character of the
/// real split torus of the matrix group.
pub fn is_inner_order2(rs: &RootSystem, phases: &[u8]) -> bool {
    half_lattice_vectors(rs).iter().all(|v| {
        let s: i64 = v.iter().zip(phases).map(|(&c, &p)| c * (p as i64 / 2)).sum();
        s % 2 == 0
    })
}

#[derive(Debug, Clone)]
pub struct CentralSolutions {
    /// Ξ nodes indexing the exponent tuples.
    pub nodes: Vec<usize>,
    /// Hermite normal form basis of the integer exponents `λ` with `λ(μ) = 0` on every component.
    pub parametric: Vec<Vec<i64>>,
    /// Nontrivial finite-order actions fixing every component.
    pub finite: Vec<JAction>,
}

/// Central elements of `G₀` preserving the inserted curvature.
pub fn central_symmetry_solutions(d: &DeformedAlgebra, rf: &RealFormDescriptor, outer: bool) -> Result<CentralSolutions> {
    let xi = &d.grading.xi;
    let nodes = xi.indices().to_vec();
    let rows: Vec<Vec<i64>> = d
        .components
        .iter()
        .map(|c| nodes.iter().map(|&l| c.alpha_i.coeffs[l] + c.beta.coeffs[l] - c.nu.coeffs[l]).collect())
        .collect();
    let parametric = hermite_normal_form(&integer_kernel(&rows, nodes.len()));

    let mut finite = Vec::new();
    let total = 4usize.pow(nodes.len() as u32);
    for code in 1..total {
        let ph: Vec<u8> = (0..nodes.len()).map(|k| ((code >> (2 * k)) & 3) as u8).collect();
        let Ok(j) = JAction::new(rf, xi, &ph) else { continue };
        if j.class == JClass::Identity {
            continue;
        }
        let mut fixes = true;
        for c in &d.components {
            if eigenphase(&j, c)? != 0 {
                fixes = false;
            }
        }
        if !fixes {
            continue;
        }
        if !outer && j.class != JClass::Complex && !is_inner_order2(&rf.rs, &j.phases) {
            continue;
        }
        finite.push(j);
    }
    finite.sort_by_key(|j| j.shown_phases());
    Ok(CentralSolutions { nodes, parametric, finite })
}

fn ad_p_plus(t: &StructureTable, g: &ParabolicGrading, y: &AlgebraElement) -> Result<Matrix<Qi>> {
    if y.support().any(|b| t.is_cartan(b) || g.degree_of_root[b] < 1) {
        return Err(Error::SupportOutsidePPlus);
    }
    Ok(t.ad_matrix(y))
}

fn is_zero_mat(m: &Matrix<Qi>) -> bool {
    m.iter().all(|r| r.iter().all(Qi::is_zero))
}

/// `exp(N)` for nilpotent `N`.
pub fn exp_nilpotent(n: &Matrix<Qi>) -> Matrix<Qi> {
    let d = n.len();
    let mut out = crate::linalg::identity::<Qi>(d);
    let mut term = crate::linalg::identity::<Qi>(d);
    for k in 1..=d as i64 + 1 {
        term = mat_scale(&mat_mul(&term, n), &Qi::real(Rat::new(1.into(), k.into())));
        if is_zero_mat(&term) {
            break;
        }
        out = mat_add(&out, &term);
    }
    out
}

/// `log(M)` for unipotent `M`.
pub fn log_unipotent(m: &Matrix<Qi>) -> Matrix<Qi> {
    let d = m.len();
    let n = mat_add(m, &mat_scale(&crate::linalg::identity::<Qi>(d), &Qi::int(-1)));
    let mut out = vec![vec![Qi::default(); d]; d];
    let mut power = crate::linalg::identity::<Qi>(d);
    for k in 1..=d as i64 + 1 {
        power = mat_mul(&power, &n);
        if is_zero_mat(&power) {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out = mat_add(&out, &mat_scale(&power, &Qi::real(Rat::new(sign.into(), k.into()))));
    }
    out
}

/// Recovers `z ∈ p₊` from `ad z` through its action on the Cartan subalgebra.
fn element_from_ad(t: &StructureTable, m: &Matrix<Qi>) -> AlgebraElement {
    let mut z = AlgebraElement::zero();
    for b in 0..t.num_roots() {
        let i = (0..t.rs.rank()).find(|&i| t.cartan_action(i, b) != 0).expect("root pairs with some coroot");
        // [z, hᵢ] = −Σ z_b ⟨b, αᵢ∨⟩ e_b
        let c = &m[b][t.cartan_index(i)];
        if !c.is_zero() {
            z.add_term(b, &c.scale(&Rat::new((-1).into(), t.cartan_action(i, b).into())));
        }
    }
    z
}

/// `C(y₁, y₂)` with `exp(y₁) exp(y₂) = exp(C(y₁, y₂))`, computed exactly in the adjoint representation.
pub fn bch(t: &StructureTable, g: &ParabolicGrading, y1: &AlgebraElement, y2: &AlgebraElement) -> Result<AlgebraElement> {
    let e1 = exp_nilpotent(&ad_p_plus(t, g, y1)?);
    let e2 = exp_nilpotent(&ad_p_plus(t, g, y2)?);
    Ok(element_from_ad(t, &log_unipotent(&mat_mul(&e1, &e2))))
}

/// `Ad_s` of a central action on a sparse element.
pub fn ad_central(t: &StructureTable, s: &JAction, x: &AlgebraElement, inverse: bool) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (b, c) in &x.coeffs {
        let p = if t.is_cartan(*b) { 0 } else { s.phase_of(&t.rs.roots[*b].coeffs) as i64 };
        out.add_term(*b, &(c * &Qi::i_pow(if inverse { -p } else { p })));
    }
    out
}

#[derive(Debug, Clone)]
pub struct Reduction {
    /// Representative in `p_fix`.
    pub z_fixed: AlgebraElement,
    /// Conjugating elements in application order: `s·exp(z)` conjugated by `exp(Y₁)`, then `exp(Y₂)`, ….
    pub word: Vec<AlgebraElement>,
}

/// Conjugates `s·exp(z)` into `s·exp(z_f)` with `z_f` fixed by `Ad_s`, degree by degree.
pub fn reduce_representative(t: &StructureTable, g: &ParabolicGrading, s: &JAction, z: &AlgebraElement) -> Result<Reduction> {
    ad_p_plus(t, g, z)?;
    let mut cur = z.clone();
    let mut word = Vec::new();
    for l in 1..=g.k {
        let mut y = AlgebraElement::zero();
        for (b, c) in &cur.coeffs {
            if g.degree_of_root[*b] != l {
                continue;
            }
            let p = s.phase_of(&t.rs.roots[*b].coeffs) as i64;
            if p == 0 {
                continue;
            }
            // Y = −(id − Ad_s⁻¹)⁻¹ Z′
            let denom = Qi::int(1) - Qi::i_pow(-p);
            y.add_term(*b, &(-(c.clone() / denom)));
        }
        if y.is_zero() {
            continue;
        }
        let left = ad_central(t, s, &y, true).neg();
        cur = bch(t, g, &bch(t, g, &left, &cur)?, &y)?;
        word.push(y);
    }
    Ok(Reduction { z_fixed: cur, word })
}

/// Whether `s·exp(z)` lies in the conjugacy class of an order-two `s`:
/// `z` must be supported on the `−1` eigenspace of `Ad_s` in `p₊`.
pub fn symmetry_membership_order2(t: &StructureTable, g: &ParabolicGrading, s: &JAction, z: &AlgebraElement) -> Result<bool> {
    if s.class == JClass::Complex {
        return Err(Error::WrongClass(s.class.to_string()));
    }
    ad_p_plus(t, g, z)?;
    Ok(z.support().all(|b| s.phase_of(&t.rs.roots[b].coeffs) == 2))
}

/// An extension `α: k → g` of an abstract Lie algebra into a matrix Lie algebra.
#[derive(Debug, Clone)]
pub struct MatrixExtension {
    /// `[k_a, k_b] = Σ_c brackets[a][b][c] k_c`.
    pub brackets: Vec<Vec<Vec<Qi>>>,
    /// `α(k_a)`.
    pub images: Vec<Matrix<Qi>>,
}

impl MatrixExtension {
    fn alpha(&self, v: &[Qi]) -> Matrix<Qi> {
        let n = self.images[0].len();
        v.iter()
            .zip(&self.images)
            .fold(vec![vec![Qi::default(); n]; n], |acc, (c, m)| mat_add(&acc, &mat_scale(m, c)))
    }
}

fn commutator(a: &Matrix<Qi>, b: &Matrix<Qi>) -> Matrix<Qi> {
    mat_add(&mat_mul(a, b), &mat_scale(&mat_mul(b, a), &Qi::int(-1)))
}

/// `κ(k_a, k_b) = [α(k_a), α(k_b)] − α([k_a, k_b])` for `a < b`.
///
/// `quotient` gives real coordinates of a matrix modulo `p`; the induced map
/// `k → g/p` must be bijective.
pub fn extension_curvature(
    ext: &MatrixExtension,
    quotient: &dyn Fn(&Matrix<Qi>) -> Vec<Rat>,
) -> Result<BTreeMap<(usize, usize), Matrix<Qi>>> {
    let m = ext.images.len();
    let coords: Matrix<Rat> = ext.images.iter().map(quotient).collect();
    let target = coords.first().map_or(0, Vec::len);
    if rank(&coords) != m {
        return Err(Error::Malformed("extension is not injective modulo p".into()));
    }
    if target != m {
        return Err(Error::Malformed(format!("k has dimension {m} but g/p has dimension {target}")));
    }
    let mut out = BTreeMap::new();
    for a in 0..m {
        for b in a + 1..m {
            let k = mat_add(
                &commutator(&ext.images[a], &ext.images[b]),
                &mat_scale(&ext.alpha(&ext.brackets[a][b]), &Qi::int(-1)),
            );
            out.insert((a, b), k);
        }
    }
    Ok(out)
}

/// Structure constants of a matrix Lie algebra spanned by `basis`.
pub fn matrix_structure_constants(basis: &[Matrix<Qi>]) -> Result<Vec<Vec<Vec<Qi>>>> {
    let flat = |m: &Matrix<Qi>| -> Vec<Qi> { m.iter().flatten().cloned().collect() };
    let cols: Vec<Vec<Qi>> = basis.iter().map(flat).collect();
    let n = cols[0].len();
    let sys: Matrix<Qi> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut out = vec![vec![Vec::new(); basis.len()]; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let br = flat(&commutator(&basis[a], &basis[b]));
            out[a][b] = solve(&sys, &br).ok_or_else(|| Error::Malformed("basis is not closed under brackets".into()))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_structure_table;
    use crate::kostant::component;
    use crate::parabolic::{grade, Xi};
    use crate::symmetry::{fixed_plus_subalgebra, phase_symbol};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    struct Setup {
        rf: RealFormDescriptor,
        t: Arc<StructureTable>,
        g: ParabolicGrading,
    }

    fn setup(types: &str, xi: &[usize]) -> Setup {
        let rf = RealFormDescriptor::split(types).unwrap();
        let t = Arc::new(build_structure_table(rf.rs.clone()));
        let g = grade(rf.rs.clone(), Xi::new(xi.iter().map(|i| i - 1).collect(), rf.rank()).unwrap()).unwrap();
        Setup { rf, t, g }
    }

    fn comp(s: &Setup, i: usize, j: usize) -> HarmonicComponent {
        component(&s.g, i - 1, j - 1, 0).unwrap()
    }

    fn tuples(js: &[JAction]) -> Vec<String> {
        js.iter().map(|j| j.tuple_repr()).collect()
    }

    #[test]
    fn a3_borel_component_21() {
        let s = setup("A3", &[1, 2, 3]);
        let d = deform(s.t.clone(), &s.g, &comp(&s, 2, 1)).unwrap();
        assert_eq!(d.curvature.homogeneity_profile(&s.g), vec![2]);
        let tower = annihilator_tower(&d);
        assert_eq!((tower.dim_a0(), tower.dim_a_plus()), (2, 1));
        assert!(tower_is_consistent(&d, &tower));
        let sol = central_symmetry_solutions(&d, &s.rf, false).unwrap();
        let mut got = tuples(&sol.finite);
        got.sort();
        assert_eq!(got, vec!["(+,-,+)", "(-,+,-)", "(-,-,-)"]);
    }

    #[test]
    fn c4_inner_and_outer_solutions() {
        let s = setup("C4", &[1, 2, 4]);
        let d = deform(s.t.clone(), &s.g, &comp(&s, 2, 1)).unwrap();
        let tower = annihilator_tower(&d);
        assert_eq!((tower.dim_a0(), tower.dim_a_plus()), (4, 2));
        assert_eq!(tuples(&central_symmetry_solutions(&d, &s.rf, false).unwrap().finite), vec!["(+,-,+)"]);
        assert_eq!(central_symmetry_solutions(&d, &s.rf, true).unwrap().finite.len(), 3);
    }

    #[test]
    fn a4_parametric_families() {
        let s = setup("A4", &[2, 3]);
        let d21 = deform(s.t.clone(), &s.g, &comp(&s, 2, 1)).unwrap();
        assert_eq!(central_symmetry_solutions(&d21, &s.rf, false).unwrap().parametric, vec![vec![1, 2]]);
        assert_eq!(annihilator_tower(&d21).dim_a_plus(), 0);
        let d32 = deform(s.t.clone(), &s.g, &comp(&s, 3, 2)).unwrap();
        assert_eq!(central_symmetry_solutions(&d32, &s.rf, false).unwrap().parametric, vec![vec![1, 0]]);
        assert_eq!(annihilator_tower(&d32).dim_a_plus(), 1);
        let both = deform_many(s.t.clone(), &s.g, &[comp(&s, 2, 1), comp(&s, 3, 2)]).unwrap();
        let sol = central_symmetry_solutions(&both, &s.rf, false).unwrap();
        assert!(sol.parametric.is_empty());
        assert_eq!(tuples(&sol.finite), vec!["(-,+)"]);
    }

    #[test]
    fn image_in_p_plus_is_refused() {
        // su(2,1)-type CR geometry: A2 Borel, component (1,2) has ν of degree 0 or lower.
        let s = setup("A2", &[1, 2]);
        let c = comp(&s, 1, 2);
        assert!(c.nu.coeffs.iter().sum::<i64>() < 1 || !c.nu.is_positive());
        assert!(matches!(deform(s.t.clone(), &s.g, &c), Err(Error::ImageNotInGMinus(_))));
    }

    #[test]
    fn solutions_fix_the_component() {
        let s = setup("B4", &[1, 2]);
        let c = comp(&s, 1, 2);
        let d = deform(s.t.clone(), &s.g, &c).unwrap();
        for j in central_symmetry_solutions(&d, &s.rf, true).unwrap().finite {
            assert_eq!(eigenphase(&j, &c).unwrap(), 0);
        }
    }

    fn random_p_plus(rng: &mut impl Rng, s: &Setup) -> AlgebraElement {
        let mut z = AlgebraElement::zero();
        for b in s.g.p_plus() {
            z.add_term(b, &Qi::int(rng.gen_range(-3..=3)));
        }
        z
    }

    #[test]
    fn bch_basic_identities() {
        let s = setup("A3", &[1, 2, 3]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let y = random_p_plus(&mut rng, &s);
        assert_eq!(bch(&s.t, &s.g, &y, &AlgebraElement::zero()).unwrap(), y);
        assert!(bch(&s.t, &s.g, &y, &y.neg()).unwrap().is_zero());
        let h = AlgebraElement::basis(s.t.cartan_index(0));
        assert!(matches!(bch(&s.t, &s.g, &h, &y), Err(Error::SupportOutsidePPlus)));
    }

    #[test]
    fn bch_truncates_to_second_order_in_two_step_algebra() {
        // C2 with Ξ = {2}: p₊ is two-step nilpotent, so C = y₁ + y₂ + ½[y₁,y₂].
        let s = setup("B2", &[1]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let (a, b) = (random_p_plus(&mut rng, &s), random_p_plus(&mut rng, &s));
            let expect = a.add(&b).add(&s.t.bracket(&a, &b).scale(&Qi::real(Rat::new(1.into(), 2.into()))));
            assert_eq!(bch(&s.t, &s.g, &a, &b).unwrap(), expect);
        }
    }

    fn usual(s: &Setup) -> JAction {
        JAction::new(&s.rf, &s.g.xi, &vec![2; s.g.xi.len()]).unwrap()
    }

    /// `Ad(exp(−Y_m)…exp(−Y_1) s exp(z) exp(Y_1)…exp(Y_m))` against `Ad(s exp(z_f))`.
    fn reconjugates(s: &Setup, j: &JAction, z: &AlgebraElement, r: &Reduction) -> bool {
        let d = s.t.dim();
        let ad_s: Matrix<Qi> = (0..d)
            .map(|row| {
                (0..d)
                    .map(|col| {
                        if row != col {
                            Qi::default()
                        } else if s.t.is_cartan(row) {
                            Qi::int(1)
                        } else {
                            Qi::i_pow(j.phase_of(&s.t.rs.roots[row].coeffs) as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        let e = |x: &AlgebraElement| exp_nilpotent(&s.t.ad_matrix(x));
        let mut lhs = mat_mul(&ad_s, &e(z));
        for y in &r.word {
            lhs = mat_mul(&mat_mul(&e(&y.neg()), &lhs), &e(y));
        }
        lhs == mat_mul(&ad_s, &e(&r.z_fixed))
    }

    #[test]
    fn reduction_lands_in_fixed_subalgebra() {
        let s = setup("A3", &[1, 2, 3]);
        let j = usual(&s);
        let fixed = fixed_plus_subalgebra(&j, &s.g).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let z = random_p_plus(&mut rng, &s);
            let r = reduce_representative(&s.t, &s.g, &j, &z).unwrap();
            assert!(r.z_fixed.support().all(|b| fixed.contains(&b)));
            assert!(reconjugates(&s, &j, &z, &r));
            let again = reduce_representative(&s.t, &s.g, &j, &r.z_fixed).unwrap();
            assert_eq!(again.z_fixed, r.z_fixed);
            assert!(again.word.is_empty());
        }
    }

    #[test]
    fn odd_part_reduces_to_zero_under_usual_action() {
        let s = setup("A3", &[1, 2, 3]);
        let j = usual(&s);
        let mut z = AlgebraElement::zero();
        for b in s.g.p_plus() {
            if s.g.degree_of_root[b] % 2 == 1 {
                z.add_term(b, &Qi::int(1));
            }
        }
        // Only degrees 1 and 3 present: the degree-2 part created by conjugation is fixed.
        let r = reduce_representative(&s.t, &s.g, &j, &z).unwrap();
        assert!(r.z_fixed.support().all(|b| s.g.degree_of_root[b] % 2 == 0));
        assert!(symmetry_membership_order2(&s.t, &s.g, &j, &z).unwrap());
        let one_degree: AlgebraElement = AlgebraElement::basis(s.g.roots_of_degree(1)[0]);
        let r1 = reduce_representative(&s.t, &s.g, &j, &one_degree).unwrap();
        assert!(r1.z_fixed.is_zero());
    }

    #[test]
    fn membership_rejects_even_support_and_complex_class() {
        let s = setup("A3", &[1, 2, 3]);
        let j = usual(&s);
        let even = AlgebraElement::basis(s.g.roots_of_degree(2)[0]);
        assert!(!symmetry_membership_order2(&s.t, &s.g, &j, &even).unwrap());
        assert!(symmetry_membership_order2(&s.t, &s.g, &j, &AlgebraElement::zero()).unwrap());

        let rf = crate::realform::Catalog::builtin().parse_instance("sl(3,C)").unwrap();
        let g = grade(rf.rs.clone(), Xi::new(vec![0, 2], rf.rank()).unwrap()).unwrap();
        let t = build_structure_table(rf.rs.clone());
        let jc = JAction::new(&rf, &g.xi, &[1, 3]).unwrap();
        assert!(matches!(
            symmetry_membership_order2(&t, &g, &jc, &AlgebraElement::zero()),
            Err(Error::WrongClass(_))
        ));
    }

    #[test]
    fn para_membership_uses_odd_first_degree() {
        let s = setup("A3", &[1, 2, 3]);
        let j = JAction::new(&s.rf, &s.g.xi, &[2, 0, 0]).unwrap();
        let bg = crate::parabolic::bigrade(&s.g, &[0], &[1, 2]).unwrap();
        for b in s.g.p_plus() {
            let (a, _) = bg.bidegree(&s.t.rs.roots[b].coeffs);
            let z = AlgebraElement::basis(b);
            assert_eq!(symmetry_membership_order2(&s.t, &s.g, &j, &z).unwrap(), a % 2 != 0);
        }
        assert_eq!(phase_symbol(j.phases[0]), "-");
    }

    #[test]
    fn inner_check_on_classical_lattices() {
        let c4 = RootSystem::new(&crate::rootsys::parse_types("C4").unwrap()).unwrap();
        assert!(!is_inner_order2(&c4, &[2, 0, 0, 2]));
        assert!(is_inner_order2(&c4, &[0, 2, 0, 0]));
        let b4 = RootSystem::new(&crate::rootsys::parse_types("B4").unwrap()).unwrap();
        assert!(is_inner_order2(&b4, &[2, 2, 0, 0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn bch_is_associative(seed in any::<u64>()) {
            let s = setup("A3", &[1, 2, 3]);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (x, y, z) = (random_p_plus(&mut rng, &s), random_p_plus(&mut rng, &s), random_p_plus(&mut rng, &s));
            let l = bch(&s.t, &s.g, &x, &bch(&s.t, &s.g, &y, &z).unwrap()).unwrap();
            let r = bch(&s.t, &s.g, &bch(&s.t, &s.g, &x, &y).unwrap(), &z).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
