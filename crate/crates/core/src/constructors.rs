//! Builders for quantum tori, Cayley–Dickson doublings (and the octonion
//! torus they produce), and Clifford-type Jordan tori.

use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::algebra::{
    degree_of, fmt_elem, ga_invert_hom, memoized, ga_is_torus, require_involution, Elem, GradedAlgebra, InvolutionMap,
    Key, Kind, ProductRule,
};
use crate::error::{Error, Result};
use crate::group::{subgroup_generated, GroupElement, GroupSpec, SubgroupDesc, Window};
use crate::linalg::{add_entry, axpy, scaled, unit};
use crate::scalar::{powi, Q};

/// Commutation scalars `q_ij` with `tᵢtⱼ = q_ij tⱼtᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleMatrix(pub Vec<Vec<Q>>);

impl CocycleMatrix {
    pub fn trivial(n: usize) -> Self {
        CocycleMatrix(vec![vec![Q::one(); n]; n])
    }

    /// All entries 1 except `q_ij = −1 = q_ji` for each listed pair.
    pub fn minus_one_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut m = Self::trivial(n);
        for &(i, j) in pairs {
            m.0[i][j] = -Q::one();
            m.0[j][i] = -Q::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn validate(&self, spec: &GroupSpec) -> Result<()> {
        let n = spec.len();
        if self.0.len() != n || self.0.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidCocycleMatrix(format!("expected a {n}×{n} table")));
        }
        for i in 0..n {
            for j in 0..n {
                let x = &self.0[i][j];
                if x.is_zero() {
                    return Err(Error::InvalidCocycleMatrix(format!("q[{i}][{j}] = 0")));
                }
                if i == j && !x.is_one() {
                    return Err(Error::InvalidCocycleMatrix(format!("q[{i}][{i}] ≠ 1")));
                }
                if (x * &self.0[j][i]) != Q::one() {
                    return Err(Error::InvalidCocycleMatrix(format!("q[{j}][{i}] ≠ q[{i}][{j}]⁻¹")));
                }
            }
        }
        for i in spec.free_rank..n {
            let m = spec.modulus(i);
            for j in 0..n {
                if !powi(&self.0[i][j], m as i64).is_one() {
                    return Err(Error::InvalidCocycle { i, j, m });
                }
            }
        }
        Ok(())
    }
}

/// Twisted group algebra on monomials `t^a = t₁^{a₁}···tₙ^{aₙ}` with `tᵢ`
/// placed in degree `scale[i]·eᵢ`.
pub struct QuantumRule {
    spec: GroupSpec,
    q: Vec<Vec<Q>>,
    scale: Vec<i64>,
}

impl QuantumRule {
    fn exponents(&self, g: &GroupElement) -> Option<Vec<i64>> {
        g.coords().iter().zip(&self.scale).map(|(&c, &s)| (c % s == 0).then_some(c / s)).collect()
    }

    /// Normal-ordering scalar `∏_{i>j} q_ij^{aᵢ bⱼ}`.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> Q {
        let mut acc = Q::one();
        for i in 0..a.len() {
            for j in 0..i {
                let e = a[i] * b[j];
                if e != 0 && !self.q[i][j].is_one() {
                    acc *= powi(&self.q[i][j], e);
                }
            }
        }
        acc
    }

    /// Scalar picked up by reversing the word `t₁^{a₁}···tₙ^{aₙ}`.
    pub fn reversal_scalar(&self, a: &[i64]) -> Q {
        self.cocycle(a, a)
    }
}

impl ProductRule for QuantumRule {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn dim(&self, g: &GroupElement) -> usize {
        usize::from(self.exponents(g).is_some())
    }

    fn mul(&self, a: &Key, b: &Key) -> Elem {
        let (Some(x), Some(y)) = (self.exponents(&a.deg), self.exponents(&b.deg)) else {
            return Elem::new();
        };
        let mut out = Elem::new();
        out.insert(Key::new(self.spec.add(&a.deg, &b.deg), 0), self.cocycle(&x, &y));
        out
    }

    fn unit(&self) -> Option<Elem> {
        Some(unit(Key::new(self.spec.zero(), 0)))
    }

    fn period(&self) -> Option<Vec<i64>> {
        let n = self.spec.len();
        if self.q.iter().flatten().any(|x| !x.abs().is_one()) {
            return None;
        }
        Some(
            (0..self.spec.free_rank)
                .map(|i| {
                    let signed = (0..n).any(|j| !self.q[i][j].is_one());
                    self.scale[i] * if signed { 2 } else { 1 }
                })
                .collect(),
        )
    }
}

fn quantum_rule(spec: &GroupSpec, q: &CocycleMatrix, scale: Vec<i64>) -> Result<QuantumRule> {
    spec.validate()?;
    q.validate(spec)?;
    if scale.len() != spec.len() || scale.iter().enumerate().any(|(i, &s)| s < 1 || (i >= spec.free_rank && s != 1)) {
        return Err(Error::Config("generator degree scaling must be positive and 1 on torsion slots".into()));
    }
    Ok(QuantumRule { spec: spec.clone(), q: q.0.clone(), scale })
}

/// The quantum torus `tᵢtⱼ = q_ij tⱼtᵢ` on the standard generators of `spec`.
pub fn quantum_torus(spec: &GroupSpec, q: &CocycleMatrix) -> Result<GradedAlgebra> {
    let rule = quantum_rule(spec, q, vec![1; spec.len()])?;
    Ok(GradedAlgebra::new(Arc::new(rule), Kind::Associative))
}

/// Window used to validate maps over infinite groups: two periods of a
/// sign cocycle in every free direction, kept small for high rank.
fn validation_window(spec: &GroupSpec) -> Option<Window> {
    (!spec.is_finite()).then(|| Window::linf(if spec.free_rank <= 3 { 2 } else { 1 }))
}

/// `σ(t₁^{a₁}···tₙ^{aₙ}) = (sₙtₙ)^{aₙ}···(s₁t₁)^{a₁}`, re-normal-ordered.
pub fn reversal_involution(qt: &GradedAlgebra, q: &CocycleMatrix, signs: &[i64]) -> Result<InvolutionMap> {
    let spec = qt.spec().clone();
    if signs.len() != spec.len() || signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::Config("one sign ±1 per generator required".into()));
    }
    let rule = quantum_rule(&spec, q, vec![1; spec.len()])?;
    let signs = signs.to_vec();
    let sigma = InvolutionMap::new(move |k| {
        let a = k.deg.coords();
        let mut c = rule.reversal_scalar(a);
        for (&s, &e) in signs.iter().zip(a) {
            if s < 0 && e.rem_euclid(2) == 1 {
                c = -c;
            }
        }
        let mut v = Elem::new();
        add_entry(&mut v, k.clone(), &c);
        v
    });
    require_involution(qt, &sigma, validation_window(&spec).as_ref())?;
    Ok(sigma)
}

/// Where the new generator `x` of a doubling lives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DoublingDegree {
    /// An existing degree `g` with `2g = deg μ`.
    Existing(GroupElement),
    /// A fresh `ℤ₂` slot; needs `deg μ = 0`.
    FreshTorsion,
}

/// Pairs `(a, b)` standing for `a + b·x`, with
/// `(a,b)(c,d) = (ac + μ(dσ(b)), σ(a)d + cb)`.
struct DoubledRule {
    base: GradedAlgebra,
    sigma: InvolutionMap,
    mu: Elem,
    spec: GroupSpec,
    x: GroupElement,
    /// Position of the added torsion slot, if any.
    fresh: Option<usize>,
}

enum Half {
    First(Key),
    Second(Key),
}

impl DoubledRule {
    fn project(&self, g: &GroupElement) -> Option<GroupElement> {
        match self.fresh {
            None => Some(g.clone()),
            Some(s) => {
                if g.coords()[s] != 0 {
                    return None;
                }
                let mut c = g.0.clone();
                c.remove(s);
                Some(GroupElement(c))
            }
        }
    }

    fn embed(&self, g: &GroupElement) -> GroupElement {
        match self.fresh {
            None => g.clone(),
            Some(s) => {
                let mut c = g.0.clone();
                c.insert(s, 0);
                GroupElement(c)
            }
        }
    }

    fn base_dim(&self, g: &GroupElement) -> usize {
        self.project(g).map_or(0, |h| self.base.dim(&h))
    }

    fn decode(&self, k: &Key) -> Half {
        let first = self.base_dim(&k.deg) as u32;
        if k.slot < first {
            Half::First(Key::new(self.project(&k.deg).unwrap(), k.slot))
        } else {
            let h = self.spec.sub(&k.deg, &self.x);
            Half::Second(Key::new(self.project(&h).unwrap(), k.slot - first))
        }
    }

    fn first(&self, v: &Elem) -> Elem {
        v.iter().map(|(k, c)| (Key::new(self.embed(&k.deg), k.slot), c.clone())).collect()
    }

    fn second(&self, v: &Elem) -> Elem {
        v.iter()
            .map(|(k, c)| {
                let g = self.spec.add(&self.embed(&k.deg), &self.x);
                let offset = self.base_dim(&g) as u32;
                (Key::new(g, offset + k.slot), c.clone())
            })
            .collect()
    }
}

impl ProductRule for DoubledRule {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn dim(&self, g: &GroupElement) -> usize {
        self.base_dim(g) + self.base_dim(&self.spec.sub(g, &self.x))
    }

    fn mul(&self, a: &Key, b: &Key) -> Elem {
        let base = &self.base;
        match (self.decode(a), self.decode(b)) {
            (Half::First(a), Half::First(c)) => self.first(&base.mul_keys(&a, &c)),
            (Half::First(a), Half::Second(d)) => {
                self.second(&base.mul(&self.sigma.apply_key(&a), &unit(d)))
            }
            (Half::Second(b), Half::First(c)) => self.second(&base.mul_keys(&c, &b)),
            (Half::Second(b), Half::Second(d)) => {
                let dsb = base.mul(&unit(d), &self.sigma.apply_key(&b));
                self.first(&base.mul(&self.mu, &dsb))
            }
        }
    }

    fn unit(&self) -> Option<Elem> {
        self.base.unit().map(|u| self.first(&u))
    }

    fn period(&self) -> Option<Vec<i64>> {
        self.base.period()
    }
}

/// One Cayley–Dickson step. Returns the doubled algebra with the involution
/// `(a,b) ↦ (σ(a), −b)`.
pub fn cayley_dickson_double(
    alg: &GradedAlgebra,
    sigma: &InvolutionMap,
    mu: &Elem,
    degree: DoublingDegree,
) -> Result<(GradedAlgebra, InvolutionMap)> {
    let spec = alg.spec().clone();
    let mu_deg = degree_of(mu).ok_or(Error::NotHomogeneous)?.clone();
    let check_window = validation_window(&spec);
    // μ must be central and invertible.
    for k in alg.basis(check_window.as_ref())? {
        let kv = unit(k.clone());
        if alg.mul(mu, &kv) != alg.mul(&kv, mu) {
            return Err(Error::NotCentral(format!("{} does not commute with {k}", fmt_elem(mu))));
        }
    }
    if ga_invert_hom(alg, Kind::Associative, mu)?.is_none() {
        return Err(Error::NotInvertible(fmt_elem(mu)));
    }
    let (new_spec, x, fresh) = match degree {
        DoublingDegree::Existing(g) => {
            spec.conforms(&g)?;
            if spec.scale(2, &g) != mu_deg {
                return Err(Error::GradingViolation(format!("2·{g} ≠ deg μ = {mu_deg}")));
            }
            (spec.clone(), g, None)
        }
        DoublingDegree::FreshTorsion => {
            if !mu_deg.is_zero() {
                return Err(Error::GradingViolation(format!("a fresh ℤ₂ slot needs deg μ = 0, got {mu_deg}")));
            }
            let (s, slot) = spec.extended(2)?;
            (s.clone(), s.generator(slot), Some(slot))
        }
    };
    let kind = match alg.kind {
        Kind::Associative => {
            let keys = alg.basis(check_window.as_ref())?;
            let commutative =
                keys.iter().all(|a| keys.iter().all(|b| alg.mul_keys(a, b) == alg.mul_keys(b, a)));
            if commutative {
                Kind::Associative
            } else {
                Kind::Alternative
            }
        }
        _ => Kind::Unconstrained,
    };
    let rule = Arc::new(DoubledRule {
        base: alg.clone(),
        sigma: sigma.clone(),
        mu: mu.clone(),
        spec: new_spec,
        x,
        fresh,
    });
    let r2 = rule.clone();
    let mut new_sigma = InvolutionMap::new(move |k| match r2.decode(k) {
        Half::First(a) => r2.first(&r2.sigma.apply_key(&a)),
        Half::Second(b) => r2.second(&scaled(&-Q::one(), &unit(b))),
    });
    let period = if rule.spec.is_finite() { Some(vec![]) } else { rule.period() };
    if let Some(p) = period {
        new_sigma = new_sigma.memoized(rule.spec.clone(), p);
    }
    let doubled = GradedAlgebra::new(memoized(rule), kind);
    Ok((doubled, new_sigma))
}

/// `𝕆ₙ`: three doublings of `ℚ[t₁^{±1},…,tₙ^{±1}]` by `t₁, t₂, t₃`, graded
/// by `ℤⁿ` with `xᵢ` in degree `eᵢ` and `tᵢ = xᵢ²` in degree `2eᵢ`.
pub fn octonion_torus(n: usize) -> Result<(GradedAlgebra, InvolutionMap)> {
    if n < 3 {
        return Err(Error::Config(format!("octonion torus needs n ≥ 3, got {n}")));
    }
    let spec = GroupSpec::free(n);
    let scale: Vec<i64> = (0..n).map(|i| if i < 3 { 2 } else { 1 }).collect();
    let base = quantum_rule(&spec, &CocycleMatrix::trivial(n), scale)?;
    let mut alg = GradedAlgebra::new(Arc::new(base), Kind::Associative);
    let mut sigma = InvolutionMap::identity();
    for i in 0..3 {
        let e = spec.generator(i);
        let mu = unit(Key::new(spec.scale(2, &e), 0));
        let (a, s) = cayley_dickson_double(&alg, &sigma, &mu, DoublingDegree::Existing(e))?;
        alg = a;
        sigma = s;
    }
    alg.kind = Kind::Alternative;
    Ok((alg, sigma))
}

/// `A = ℚ[H]` for a subgroup `H`, and `B = ⊕ A·bᵢ` with `bᵢ` of degree
/// `module_degrees[i]` and `bᵢbⱼ = form[i][j]·u_{dᵢ+dⱼ}`.
#[derive(Debug, Clone)]
pub struct CliffordData {
    pub plus_subgroup: Vec<GroupElement>,
    pub module_degrees: Vec<GroupElement>,
    pub form: Vec<Vec<Q>>,
}

struct CliffordRule {
    spec: GroupSpec,
    h: SubgroupDesc,
    degrees: Vec<GroupElement>,
    form: Vec<Vec<Q>>,
}

impl CliffordRule {
    fn in_a(&self, g: &GroupElement) -> bool {
        self.h.membership(g)
    }

    /// Module generators contributing to degree `g`, in slot order.
    fn b_slots(&self, g: &GroupElement) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| self.h.membership(&self.spec.sub(g, &self.degrees[i]))).collect()
    }

    /// `None` for the A-slot, `Some(i)` for `u·bᵢ`.
    fn decode(&self, k: &Key) -> Option<usize> {
        let a = usize::from(self.in_a(&k.deg));
        if (k.slot as usize) < a {
            None
        } else {
            Some(self.b_slots(&k.deg)[k.slot as usize - a])
        }
    }

    fn b_key(&self, g: GroupElement, i: usize) -> Key {
        let a = u32::from(self.in_a(&g));
        let pos = self.b_slots(&g).iter().position(|&j| j == i).unwrap() as u32;
        Key::new(g, a + pos)
    }
}

impl ProductRule for CliffordRule {
    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn dim(&self, g: &GroupElement) -> usize {
        usize::from(self.in_a(g)) + self.b_slots(g).len()
    }

    fn mul(&self, a: &Key, b: &Key) -> Elem {
        let g = self.spec.add(&a.deg, &b.deg);
        let mut out = Elem::new();
        match (self.decode(a), self.decode(b)) {
            (None, None) => {
                out.insert(Key::new(g, 0), Q::one());
            }
            (None, Some(i)) | (Some(i), None) => {
                out.insert(self.b_key(g, i), Q::one());
            }
            (Some(i), Some(j)) => {
                add_entry(&mut out, Key::new(g, 0), &self.form[i][j]);
            }
        }
        out
    }

    fn unit(&self) -> Option<Elem> {
        Some(unit(Key::new(self.spec.zero(), 0)))
    }

    fn period(&self) -> Option<Vec<i64>> {
        (0..self.spec.free_rank)
            .map(|i| (1..=64).find(|&p| self.h.membership(&self.spec.scale(p, &self.spec.generator(i)))))
            .collect()
    }
}

/// Clifford-type Jordan algebra `A ⊕ B` with
/// `(a+b)(a'+b') = aa' + ζ(b,b') + ab' + a'b` and `σ = id_A ⊕ −id_B`.
/// With `require_torus`, the division and dimension conditions are checked
/// (on `window` for infinite groups).
pub fn clifford_torus(
    spec: &GroupSpec,
    data: &CliffordData,
    require_torus: bool,
    window: Option<&Window>,
) -> Result<(GradedAlgebra, InvolutionMap)> {
    spec.validate()?;
    let h = subgroup_generated(spec, &data.plus_subgroup)?;
    let m = data.module_degrees.len();
    if data.form.len() != m || data.form.iter().any(|r| r.len() != m) {
        return Err(Error::Config(format!("form must be {m}×{m}")));
    }
    for d in &data.module_degrees {
        spec.conforms(d)?;
    }
    for i in 0..m {
        for j in 0..m {
            if data.form[i][j] != data.form[j][i] {
                return Err(Error::Config(format!("form not symmetric at ({i},{j})")));
            }
            let s = spec.add(&data.module_degrees[i], &data.module_degrees[j]);
            if !data.form[i][j].is_zero() && !h.membership(&s) {
                return Err(Error::GradingViolation(format!("ζ(b{i},b{j}) has degree {s} outside the plus subgroup")));
            }
        }
    }
    let rule = Arc::new(CliffordRule {
        spec: spec.clone(),
        h,
        degrees: data.module_degrees.clone(),
        form: data.form.clone(),
    });
    let r2 = rule.clone();
    let sigma = InvolutionMap::diagonal(move |k| if r2.decode(k).is_none() { Q::one() } else { -Q::one() });
    let alg = GradedAlgebra::new(memoized(rule), Kind::Jordan);
    if require_torus {
        let c = ga_is_torus(&alg, Kind::Jordan, window)?;
        if !c.passed() {
            return Err(Error::NotDivision(c.witnesses.first().cloned().or(c.note).unwrap_or_default()));
        }
    }
    Ok((alg, sigma))
}

/// The Laurent polynomial ring in one variable `t` placed in degree `scale`.
pub fn laurent_torus(scale: i64) -> Result<GradedAlgebra> {
    let spec = GroupSpec::free(1);
    let rule = quantum_rule(&spec, &CocycleMatrix::trivial(1), vec![scale])?;
    Ok(GradedAlgebra::new(Arc::new(rule), Kind::Associative))
}

/// Sum of `c·k` for the listed keys.
pub fn elem(terms: &[(Key, Q)]) -> Elem {
    let mut v = Elem::new();
    for (k, c) in terms {
        add_entry(&mut v, k.clone(), c);
    }
    v
}

/// The scalar field `ℚ` as an algebra over the trivial group.
pub fn rationals() -> GradedAlgebra {
    quantum_torus(&GroupSpec::trivial(), &CocycleMatrix::trivial(0)).expect("trivial torus")
}

/// Combination of `x` and `y` with the given coefficients.
pub fn lin(a: &Q, x: &Elem, b: &Q, y: &Elem) -> Elem {
    let mut v = scaled(a, x);
    axpy(&mut v, b, y);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        check_grading, check_period, check_unit, ga_check_involution, ga_check_kind, ga_is_division_graded,
        ga_plus, ga_split_symmetric, nucleus_contains,
    };
    use crate::report::Verdict;

    fn k(spec: &GroupSpec, c: &[i64]) -> Key {
        Key::new(spec.element(c).unwrap(), 0)
    }

    /// Independent normal-ordering oracle: multiply words letter by letter,
    /// bubbling each letter of the right factor leftwards into place.
    fn word_product(q: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
        let mut word: Vec<usize> = Vec::new();
        for (i, &e) in a.iter().enumerate() {
            word.extend(std::iter::repeat(i).take(e as usize));
        }
        for (i, &e) in b.iter().enumerate() {
            word.extend(std::iter::repeat(i).take(e as usize));
        }
        let mut sign = 1;
        // bubble sort; each swap of tᵢtⱼ (i > j) into tⱼtᵢ costs q_ij
        for pass in 0..word.len() {
            for p in 0..word.len().saturating_sub(1 + pass) {
                if word[p] > word[p + 1] {
                    sign *= q[word[p]][word[p + 1]];
                    word.swap(p, p + 1);
                }
            }
        }
        sign
    }

    #[test]
    fn normal_ordering_matches_word_oracle() {
        let spec = GroupSpec::free(3);
        let qm = CocycleMatrix::minus_one_pairs(3, &[(0, 1), (1, 2)]);
        let qi: Vec<Vec<i64>> = vec![vec![1, -1, 1], vec![-1, 1, -1], vec![1, -1, 1]];
        let alg = quantum_torus(&spec, &qm).unwrap();
        for a in spec.window_elements(&Window::linf(2)).iter().filter(|g| g.coords().iter().all(|&c| c >= 0)) {
            for b in spec.window_elements(&Window::linf(2)).iter().filter(|g| g.coords().iter().all(|&c| c >= 0)) {
                let p = alg.mul_keys(&Key::new(a.clone(), 0), &Key::new(b.clone(), 0));
                let expect = word_product(&qi, a.coords(), b.coords());
                assert_eq!(p[&Key::new(spec.add(a, b), 0)], crate::scalar::qi(expect), "{a:?}·{b:?}");
            }
        }
    }

    #[test]
    fn quantum_plane_sign() {
        let spec = GroupSpec::free(2);
        let alg = quantum_torus(&spec, &CocycleMatrix::minus_one_pairs(2, &[(0, 1)])).unwrap();
        let p = alg.mul_keys(&k(&spec, &[0, 1]), &k(&spec, &[1, 0]));
        assert_eq!(p, elem(&[(k(&spec, &[1, 1]), -Q::one())]));
        let inv = ga_invert_hom(&alg, Kind::Associative, &unit(k(&spec, &[1, 0]))).unwrap().unwrap();
        assert_eq!(inv, unit(k(&spec, &[-1, 0])));
    }

    #[test]
    fn single_generator_is_commutative() {
        let spec = GroupSpec::finite(vec![3]).unwrap();
        let alg = quantum_torus(&spec, &CocycleMatrix::trivial(1)).unwrap();
        for a in alg.basis(None).unwrap() {
            for b in alg.basis(None).unwrap() {
                assert_eq!(alg.mul_keys(&a, &b), unit(Key::new(spec.add(&a.deg, &b.deg), 0)));
            }
        }
    }

    #[test]
    fn klein_four_quantum_torus() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let alg = quantum_torus(&spec, &CocycleMatrix::minus_one_pairs(2, &[(0, 1)])).unwrap();
        assert_eq!(alg.basis(None).unwrap().len(), 4);
        let one = alg.unit().unwrap();
        let (t1, t2) = (k(&spec, &[1, 0]), k(&spec, &[0, 1]));
        assert_eq!(alg.mul_keys(&t1, &t1), one);
        assert_eq!(alg.mul_keys(&t2, &t2), one);
        assert_eq!(alg.mul_keys(&t1, &t2), scaled(&-Q::one(), &alg.mul_keys(&t2, &t1)));
        assert!(ga_check_kind(&alg, Kind::Associative, None).unwrap().all_pass());
        assert!(ga_is_torus(&alg, Kind::Associative, None).unwrap().passed());
        assert!(check_grading(&alg, None).unwrap().passed());
        assert!(check_unit(&alg, None).unwrap().passed());
    }

    #[test]
    fn torsion_incompatible_cocycle() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let mut q = CocycleMatrix::trivial(2);
        q.0[0][1] = crate::scalar::qi(2);
        q.0[1][0] = crate::scalar::q(1, 2);
        assert!(matches!(quantum_torus(&spec, &q), Err(Error::InvalidCocycle { i: 0, j: 1, m: 2 })));
        let mut bad = CocycleMatrix::trivial(2);
        bad.0[0][1] = -Q::one();
        assert!(matches!(quantum_torus(&GroupSpec::free(2), &bad), Err(Error::InvalidCocycleMatrix(_))));
    }

    #[test]
    fn reversal_on_quantum_plane() {
        let spec = GroupSpec::free(2);
        let q = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &q).unwrap();
        let sigma = reversal_involution(&alg, &q, &[1, 1]).unwrap();
        let w = Window::linf(3);
        for g in spec.window_elements(&w) {
            let (a, b) = (g.coords()[0], g.coords()[1]);
            let expect = if (a * b).rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
            assert_eq!(sigma.apply_key(&Key::new(g.clone(), 0)), elem(&[(Key::new(g, 0), expect)]));
        }
        let split = ga_split_symmetric(&alg, &sigma, Some(&Window::linf(1))).unwrap();
        assert_eq!(split.skew.len(), 4);
        let signed = reversal_involution(&alg, &q, &[-1, 1]).unwrap();
        assert_eq!(signed.apply_key(&k(&spec, &[1, 0])), elem(&[(k(&spec, &[1, 0]), -Q::one())]));
    }

    #[test]
    fn reversal_on_commutative_torus_is_identity() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let q = CocycleMatrix::trivial(2);
        let alg = quantum_torus(&spec, &q).unwrap();
        let sigma = reversal_involution(&alg, &q, &[1, 1]).unwrap();
        for key in alg.basis(None).unwrap() {
            assert_eq!(sigma.apply_key(&key), unit(key.clone()));
        }
    }

    #[test]
    fn first_doubling_squares_to_mu() {
        let base = laurent_torus(2).unwrap();
        let spec = base.spec().clone();
        let t = unit(Key::new(spec.element(&[2]).unwrap(), 0));
        let (d, sigma) = cayley_dickson_double(
            &base,
            &InvolutionMap::identity(),
            &t,
            DoublingDegree::Existing(spec.element(&[1]).unwrap()),
        )
        .unwrap();
        let x = Key::new(spec.element(&[1]).unwrap(), 0);
        assert_eq!(d.mul_keys(&x, &x), t);
        assert_eq!(d.unit(), base.unit());
        assert!(check_unit(&d, Some(&Window::linf(3))).unwrap().passed());
        assert_eq!(sigma.apply_key(&x), scaled(&-Q::one(), &unit(x.clone())));
    }

    #[test]
    fn fresh_slot_doubling_gives_quaternions() {
        // ℚ → ℚ[i] (i² = −1) → ℍ over ℚ, graded by ℤ₂².
        let q0 = rationals();
        let minus_one = scaled(&-Q::one(), &q0.unit().unwrap());
        let (c, sc) =
            cayley_dickson_double(&q0, &InvolutionMap::identity(), &minus_one, DoublingDegree::FreshTorsion).unwrap();
        assert_eq!(c.kind, Kind::Associative);
        let minus_one = scaled(&-Q::one(), &c.unit().unwrap());
        let (h, sh) = cayley_dickson_double(&c, &sc, &minus_one, DoublingDegree::FreshTorsion).unwrap();
        assert_eq!(h.spec(), &GroupSpec::finite(vec![2, 2]).unwrap());
        assert!(ga_check_kind(&h, Kind::Associative, None).unwrap().all_pass());
        assert!(ga_check_involution(&h, &sh, None).unwrap().all_pass());
        assert!(!ga_check_kind(&h, Kind::Jordan, None).is_ok());
        let minus_one = scaled(&-Q::one(), &h.unit().unwrap());
        let (o, so) = cayley_dickson_double(&h, &sh, &minus_one, DoublingDegree::FreshTorsion).unwrap();
        assert!(ga_check_kind(&o, Kind::Alternative, None).unwrap().all_pass());
        assert!(!ga_check_kind(&o, Kind::Associative, None).unwrap().all_pass());
        assert!(ga_check_involution(&o, &so, None).unwrap().all_pass());
        assert!(ga_is_division_graded(&o, Kind::Alternative, None).unwrap().passed());
    }

    #[test]
    fn doubling_rejects_bad_mu() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let q = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &q).unwrap();
        let sigma = reversal_involution(&alg, &q, &[1, 1]).unwrap();
        let t1 = unit(k(&spec, &[1, 0]));
        let r = cayley_dickson_double(&alg, &sigma, &t1, DoublingDegree::FreshTorsion);
        assert!(matches!(r, Err(Error::NotCentral(_))));
        let r = cayley_dickson_double(&rationals(), &InvolutionMap::identity(), &Elem::new(), DoublingDegree::FreshTorsion);
        assert!(matches!(r, Err(Error::NotHomogeneous)));
    }

    fn x(spec: &GroupSpec, i: usize) -> Key {
        Key::new(spec.generator(i), 0)
    }

    #[test]
    fn octonion_torus_axioms() {
        let (o, sigma) = octonion_torus(3).unwrap();
        let spec = o.spec().clone();
        let w = Window::linf(1);
        assert!(ga_check_kind(&o, Kind::Alternative, Some(&w)).unwrap().all_pass());
        let assoc = ga_check_kind(&o, Kind::Associative, Some(&w)).unwrap();
        assert!(!assoc.all_pass());
        let (x1, x2, x3) = (unit(x(&spec, 0)), unit(x(&spec, 1)), unit(x(&spec, 2)));
        assert!(!o.associator(&x1, &x2, &x3).is_empty());
        assert_eq!(o.mul(&x1, &x1), unit(Key::new(spec.element(&[2, 0, 0]).unwrap(), 0)));
        assert!(ga_check_involution(&o, &sigma, Some(&w)).unwrap().all_pass());
        assert_eq!(sigma.apply(&x2), scaled(&-Q::one(), &x2));
        let split = ga_split_symmetric(&o, &sigma, Some(&w)).unwrap();
        let sym: Vec<Elem> = split.sym.into_iter().flat_map(|(_, v)| v).collect();
        assert!(nucleus_contains(&o, &sym, Some(&w)).unwrap().passed());
        let c = nucleus_contains(&o, &[x1], Some(&w)).unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(ga_is_torus(&o, Kind::Alternative, Some(&w)).unwrap().passed());
        assert!(check_period(&o, &w).unwrap().passed());
        assert!(check_grading(&o, Some(&w)).unwrap().passed());
        assert!(octonion_torus(2).is_err());
    }

    fn klein_clifford() -> (GradedAlgebra, InvolutionMap) {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let data = CliffordData {
            plus_subgroup: vec![spec.element(&[1, 0]).unwrap()],
            module_degrees: vec![spec.element(&[0, 1]).unwrap()],
            form: vec![vec![Q::one()]],
        };
        clifford_torus(&spec, &data, true, None).unwrap()
    }

    #[test]
    fn clifford_klein_instance() {
        let (c, sigma) = klein_clifford();
        let spec = c.spec().clone();
        let b = k(&spec, &[0, 1]);
        assert_eq!(c.mul_keys(&b, &b), c.unit().unwrap());
        assert!(ga_check_kind(&c, Kind::Jordan, None).unwrap().all_pass());
        assert!(ga_check_involution(&c, &sigma, None).unwrap().all_pass());
        assert!(ga_is_torus(&c, Kind::Jordan, None).unwrap().passed());
        let plus = ga_plus(&c);
        for a in c.basis(None).unwrap() {
            for b in c.basis(None).unwrap() {
                assert_eq!(plus.mul_keys(&a, &b), c.mul_keys(&a, &b));
            }
        }
    }

    #[test]
    fn clifford_without_module_is_group_algebra() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let data = CliffordData {
            plus_subgroup: vec![spec.generator(0), spec.generator(1)],
            module_degrees: vec![],
            form: vec![],
        };
        let (c, sigma) = clifford_torus(&spec, &data, true, None).unwrap();
        assert!(ga_check_kind(&c, Kind::Associative, None).unwrap().all_pass());
        assert!(ga_split_symmetric(&c, &sigma, None).unwrap().skew.is_empty());
    }

    #[test]
    fn degenerate_form_is_not_a_torus() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let data = CliffordData {
            plus_subgroup: vec![spec.element(&[1, 0]).unwrap()],
            module_degrees: vec![spec.element(&[0, 1]).unwrap()],
            form: vec![vec![Q::zero()]],
        };
        assert!(matches!(clifford_torus(&spec, &data, true, None), Err(Error::NotDivision(_))));
    }
}
