//! The Lie algebra `sp₂ᵣ(𝔞) = (𝔤⊗A) ⊕ (𝔰⊗B) ⊕ D` over a coordinate algebra
//! with involution, evaluated lazily on a bigraded basis.
//!
//! Basis vectors are [`LieKey`]s `(μ, g, i)`. In the cell `(μ, g)` the local
//! index `i` runs over
//! - `x_μ⊗a_j` for a long root `μ`;
//! - `x_μ⊗a_j`, then `s_μ⊗b_k` for a short root `μ`;
//! - `hᵢ⊗a_j`, then `s⁰ᵢ⊗b_k`, then a basis of `D^g` for `μ = 0`,
//!
//! where `a_j`, `b_k` are the symmetric and skew basis vectors of `𝔞^g`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{nucleus_contains, require_involution, split_component, Elem, GradedAlgebra, InvolutionMap, Key, Kind};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, Window};
use crate::linalg::{add_entry, axpy, kernel, scaled, Echelon, SparseVec};
use crate::report::{Check, Scope};
use crate::scalar::{half, qi, Q, Rat};
use crate::symplectic::{SpMat, SymplecticModel, Weight};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LieKey {
    pub weight: Weight,
    pub degree: GroupElement,
    pub idx: u32,
}

impl LieKey {
    pub fn new(weight: Weight, degree: GroupElement, idx: u32) -> Self {
        LieKey { weight, degree, idx }
    }
}

impl fmt::Debug for LieKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}|{}]", self.weight, self.degree, self.idx)
    }
}

impl fmt::Display for LieKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub type LieElem = SparseVec<LieKey>;

pub fn fmt_lie(x: &LieElem) -> String {
    if x.is_empty() {
        return "0".into();
    }
    x.iter()
        .map(|(k, c)| format!("{}*{k}", crate::scalar::fmt_q(c)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// A `(Cᵣ, G)`-bigraded Lie algebra given by brackets of basis vectors, with
/// a designated copy of `𝔤 = sp₂ᵣ` inside the degree-zero part.
pub trait GradedLie: Send + Sync {
    fn rank(&self) -> usize;
    fn spec(&self) -> &GroupSpec;
    /// `None` for a full (finite G) algebra; otherwise the degree window
    /// checks are confined to.
    fn window(&self) -> Option<Window>;
    fn dim(&self, weight: &Weight, g: &GroupElement) -> usize;
    fn bracket(&self, x: &LieKey, y: &LieKey) -> Result<LieElem>;
    /// Image of the `i`-th basis matrix of [`SymplecticModel::g`].
    fn embed_g(&self, i: usize) -> Result<LieElem>;

    fn model(&self) -> Result<Arc<SymplecticModel>> {
        SymplecticModel::get(self.rank())
    }

    /// `Δ ∪ {0}`.
    fn weights(&self) -> Vec<Weight> {
        let r = self.rank();
        let mut w = crate::symplectic::roots_c(r).map(|d| d.roots).unwrap_or_default();
        w.push(Weight::zero(r));
        w
    }

    fn degrees(&self) -> Result<Vec<GroupElement>> {
        let spec = self.spec();
        match self.window() {
            _ if spec.is_finite() => spec.elements(),
            Some(w) => Ok(spec.window_elements(&w)),
            None => Err(Error::WindowRequired),
        }
    }

    fn keys_at(&self, weight: &Weight, g: &GroupElement) -> Vec<LieKey> {
        (0..self.dim(weight, g) as u32).map(|i| LieKey::new(weight.clone(), g.clone(), i)).collect()
    }

    fn keys(&self) -> Result<Vec<LieKey>> {
        let mut out = Vec::new();
        let weights = self.weights();
        for g in self.degrees()? {
            for w in &weights {
                out.extend(self.keys_at(w, &g));
            }
        }
        out.sort();
        Ok(out)
    }

    fn scope(&self) -> Scope {
        if self.spec().is_finite() {
            Scope::Exhaustive
        } else {
            Scope::from(self.window())
        }
    }

    fn bracket_elems(&self, x: &LieElem, y: &LieElem) -> Result<LieElem> {
        let mut out = LieElem::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let p = self.bracket(a, b)?;
                if !p.is_empty() {
                    axpy(&mut out, &(ca * cb), &p);
                }
            }
        }
        Ok(out)
    }

    /// Image of an arbitrary element of `𝔤`.
    fn embed_matrix(&self, m: &SpMat) -> Result<LieElem> {
        let model = self.model()?;
        let mut out = LieElem::new();
        for (i, c) in model.g_coords(m)? {
            axpy(&mut out, &c, &self.embed_g(i)?);
        }
        Ok(out)
    }

    /// `μ∨` inside `ℒ₀⁰`.
    fn coroot(&self, mu: &Weight) -> Result<LieElem> {
        self.embed_matrix(&crate::symplectic::coroot(self.rank(), mu)?)
    }
}

fn is_weight(weights: &[Weight], w: &Weight) -> bool {
    weights.contains(w)
}

/// Symmetric and skew bases `a_j`, `b_k` of one component `𝔞^g`.
#[derive(Debug)]
pub struct CoordBasis {
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
    ech: Echelon<Key>,
}

impl CoordBasis {
    pub fn new(alg: &GradedAlgebra, sigma: &InvolutionMap, g: &GroupElement) -> Result<Self> {
        let (a, b) = split_component(alg, sigma, g);
        if a.len() + b.len() != alg.dim(g) {
            return Err(Error::NotAnInvolution(format!("eigenspaces do not span degree {g}")));
        }
        let ech = Echelon::from_vectors(a.iter().chain(&b));
        Ok(CoordBasis { a, b, ech })
    }

    pub fn na(&self) -> usize {
        self.a.len()
    }

    pub fn nb(&self) -> usize {
        self.b.len()
    }

    /// Coordinates of `x ∈ 𝔞^g` over `a_j` and over `b_k`.
    pub fn split(&self, x: &Elem) -> Result<(SparseVec<usize>, SparseVec<usize>)> {
        let combo = self
            .ech
            .express(x)
            .ok_or_else(|| Error::InternalInconsistency(format!("{} is not in its component", crate::algebra::fmt_elem(x))))?;
        let na = self.na();
        let mut sa = SparseVec::new();
        let mut sb = SparseVec::new();
        for (i, c) in combo {
            if i < na {
                sa.insert(i, c);
            } else {
                sb.insert(i - na, c);
            }
        }
        Ok((sa, sb))
    }
}

/// The operator `D_{α,α'}` on `𝔞`.
#[derive(Clone)]
pub struct DerOp {
    alg: GradedAlgebra,
    sigma: InvolutionMap,
    r: usize,
    pub alpha: Elem,
    pub alpha2: Elem,
}

impl fmt::Debug for DerOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D[{}, {}]",
            crate::algebra::fmt_elem(&self.alpha),
            crate::algebra::fmt_elem(&self.alpha2)
        )
    }
}

pub fn inner_der(alg: &GradedAlgebra, sigma: &InvolutionMap, r: usize, alpha: &Elem, alpha2: &Elem) -> Result<DerOp> {
    if r < 2 {
        return Err(Error::RankTooSmall(r));
    }
    Ok(DerOp { alg: alg.clone(), sigma: sigma.clone(), r, alpha: alpha.clone(), alpha2: alpha2.clone() })
}

impl DerOp {
    pub fn apply(&self, x: &Elem) -> Elem {
        let m = |u: &Elem, v: &Elem| self.alg.mul(u, v);
        let one = Q::one();
        let (a, b) = (&self.alpha, &self.alpha2);
        let (sa, sb) = (self.sigma.apply(a), self.sigma.apply(b));
        if self.r >= 3 {
            // [L_a,L_b] + [R_a,R_b] + sign·[L_a,R_b]
            let t = |a: &Elem, b: &Elem, sign: &Q| -> Elem {
                let (ax, bx, xa, xb) = (m(a, x), m(b, x), m(x, a), m(x, b));
                let mut o = m(a, &bx);
                axpy(&mut o, &-one.clone(), &m(b, &ax));
                axpy(&mut o, &one, &m(&xb, a));
                axpy(&mut o, &-one.clone(), &m(&xa, b));
                axpy(&mut o, sign, &m(a, &xb));
                axpy(&mut o, &-sign.clone(), &m(&ax, b));
                o
            };
            let mut o = t(a, b, &one);
            axpy(&mut o, &one, &t(&sa, &sb, &one));
            scaled(&(Q::one() / qi(4 * self.r as i64)), &o)
        } else {
            let lp = |u: &Elem, v: &Elem| -> Elem { scaled(&half(), &self.alg.circ(u, v)) };
            let comm = |a: &Elem, b: &Elem| -> Elem {
                let mut o = lp(a, &lp(b, x));
                axpy(&mut o, &-one.clone(), &lp(b, &lp(a, x)));
                o
            };
            let mut o = comm(a, b);
            axpy(&mut o, &one, &comm(&sa, &sb));
            scaled(&half(), &o)
        }
    }

    pub fn apply_key(&self, k: &Key) -> Elem {
        self.apply(&crate::linalg::unit(k.clone()))
    }
}

fn shift_elem(spec: &GroupSpec, x: Elem, p: &GroupElement) -> Elem {
    if p.is_zero() {
        return x;
    }
    x.into_iter().map(|(k, c)| (Key::new(spec.add(&k.deg, p), k.slot), c)).collect()
}

/// Independent generators `D_{α,α'}` of `D^ρ` and their signatures on the
/// probe keys.
struct DerSpace {
    gens: Vec<(Elem, Elem)>,
    ech: Echelon<(Key, Key)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMode {
    Full,
    Window(Window),
}

enum Term {
    G(usize, Elem),
    S(usize, Elem),
    D(GroupElement, usize),
}

/// Lazily evaluated `sp₂ᵣ(𝔞)`.
///
/// Derivation spaces and coordinate bases are computed per residue class of
/// the degree modulo the algebra's period and translated; brackets of basis
/// vectors are memoized.
pub struct SpLie {
    alg: GradedAlgebra,
    sigma: InvolutionMap,
    r: usize,
    model: Arc<SymplecticModel>,
    window: Option<Window>,
    period: Vec<i64>,
    reps: Vec<GroupElement>,
    probe: Vec<Key>,
    coords: RwLock<HashMap<GroupElement, Arc<CoordBasis>>>,
    ders: RwLock<HashMap<GroupElement, Arc<DerSpace>>>,
    memo: RwLock<HashMap<(LieKey, LieKey), LieElem>>,
    der_memo: RwLock<HashMap<(Key, Key), SparseVec<usize>>>,
}

impl fmt::Debug for SpLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpLie").field("r", &self.r).field("spec", self.spec()).field("window", &self.window).finish()
    }
}

/// Checks that `alg` is of a kind admissible for `sp₂ᵣ` at rank `r`.
pub fn check_rank_kind(alg: &GradedAlgebra, sigma: &InvolutionMap, r: usize, window: Option<&Window>) -> Result<()> {
    let ok = match (r, alg.kind) {
        (_, Kind::Associative) => true,
        (3, Kind::Alternative) => true,
        (2, Kind::Jordan) => true,
        _ => false,
    };
    if !ok {
        return Err(Error::KindMismatch(format!("a {} coordinate algebra is not admissible for rank {r}", alg.kind)));
    }
    if alg.kind == Kind::Alternative {
        let mut sym = Vec::new();
        for g in alg.degrees(window)? {
            sym.extend(split_component(alg, sigma, &g).0);
        }
        let c = nucleus_contains(alg, &sym, window)?;
        if !c.passed() {
            return Err(Error::KindMismatch(format!(
                "symmetric elements are not in the nucleus: {}",
                c.witnesses.first().cloned().unwrap_or_default()
            )));
        }
    }
    Ok(())
}

/// Builds `sp₂ᵣ(𝔞)`, verifying the involution, the kind precondition, closure
/// of the derivation span and the Jacobi identity on the whole domain.
pub fn build_sp(alg: &GradedAlgebra, sigma: &InvolutionMap, r: usize, mode: SpMode) -> Result<SpLie> {
    let lie = SpLie::assemble(alg, sigma, r, mode)?;
    let w = lie.window;
    require_involution(alg, sigma, w.as_ref())?;
    check_rank_kind(alg, sigma, r, w.as_ref())?;
    lie.check_closure()?;
    let keys = lie.keys()?;
    let jac = check_jacobi(&lie, &keys)?;
    if !jac.passed() {
        return Err(Error::NotLie(jac.witnesses.first().cloned().unwrap_or_default()));
    }
    Ok(lie)
}

impl SpLie {
    /// Sets up the algebra without running any verification.
    pub fn assemble(alg: &GradedAlgebra, sigma: &InvolutionMap, r: usize, mode: SpMode) -> Result<SpLie> {
        let model = SymplecticModel::get(r)?;
        let spec = alg.spec().clone();
        let unit = alg.unit().ok_or(Error::NoUnit)?;
        let (window, period, reps, probe) = match mode {
            SpMode::Full => {
                if !spec.is_finite() {
                    return Err(Error::WindowRequired);
                }
                (None, vec![], spec.elements()?, alg.basis(None)?)
            }
            SpMode::Window(w) => {
                let period = if spec.is_finite() {
                    vec![]
                } else {
                    alg.period().ok_or_else(|| {
                        Error::Config("window mode needs a coordinate algebra with periodic structure constants".into())
                    })?
                };
                let reps = spec.period_representatives(&period);
                let ranges: Vec<(i64, i64)> = period.iter().map(|&p| (0, p)).collect();
                let probe = spec.box_elements(&ranges).iter().flat_map(|g| alg.keys_at(g)).collect();
                (Some(w), period, reps, probe)
            }
        };
        let lie = SpLie {
            alg: alg.clone(),
            sigma: sigma.clone(),
            r,
            model,
            window,
            period,
            reps,
            probe,
            coords: RwLock::new(HashMap::new()),
            ders: RwLock::new(HashMap::new()),
            memo: RwLock::new(HashMap::new()),
            der_memo: RwLock::new(HashMap::new()),
        };
        let zero = lie.spec().zero();
        let cb = lie.coord(&zero)?;
        let (ua, ub) = cb.split(&unit)?;
        if !ub.is_empty() || ua.is_empty() {
            return Err(Error::NotAnInvolution("the unit is not symmetric".into()));
        }
        Ok(lie)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn involution(&self) -> &InvolutionMap {
        &self.sigma
    }

    fn reduce(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        let mut rep = g.clone();
        let mut shift = self.spec().zero();
        for (i, &p) in self.period.iter().enumerate() {
            rep.0[i] = g.0[i].rem_euclid(p);
            shift.0[i] = g.0[i] - rep.0[i];
        }
        (rep, shift)
    }

    pub fn coord(&self, g: &GroupElement) -> Result<Arc<CoordBasis>> {
        if let Some(c) = self.coords.read().get(g) {
            return Ok(c.clone());
        }
        let c = Arc::new(CoordBasis::new(&self.alg, &self.sigma, g)?);
        self.coords.write().insert(g.clone(), c.clone());
        Ok(c)
    }

    fn signature(&self, op: &dyn Fn(&Key) -> Elem, shift: &GroupElement) -> SparseVec<(Key, Key)> {
        let spec = self.spec();
        let back = spec.neg(shift);
        let mut sig = SparseVec::new();
        for x in &self.probe {
            for (k, c) in shift_elem(spec, op(x), &back) {
                sig.insert((x.clone(), k), c);
            }
        }
        sig
    }

    fn der_op(&self, a: &Elem, b: &Elem) -> DerOp {
        DerOp { alg: self.alg.clone(), sigma: self.sigma.clone(), r: self.r, alpha: a.clone(), alpha2: b.clone() }
    }

    fn der_space(&self, rho: &GroupElement) -> Result<Arc<DerSpace>> {
        if let Some(d) = self.ders.read().get(rho) {
            return Ok(d.clone());
        }
        let spec = self.spec().clone();
        let zero = spec.zero();
        let mut ech = Echelon::new();
        let mut gens = Vec::new();
        for h in &self.reps {
            let c1 = self.coord(h)?;
            let c2 = self.coord(&spec.sub(rho, h))?;
            let pairs = c1.a.iter().flat_map(|x| c2.a.iter().map(move |y| (x, y)));
            let pairs = pairs.chain(c1.b.iter().flat_map(|x| c2.b.iter().map(move |y| (x, y))));
            for (x, y) in pairs {
                let d = self.der_op(x, y);
                let sig = self.signature(&|k| d.apply_key(k), &zero);
                if !sig.is_empty() && ech.insert(sig).is_none() {
                    gens.push((x.clone(), y.clone()));
                }
            }
        }
        let sigs: Vec<_> = gens
            .iter()
            .map(|(x, y)| {
                let d = self.der_op(x, y);
                self.signature(&|k| d.apply_key(k), &zero)
            })
            .collect();
        let space = Arc::new(DerSpace { gens, ech: Echelon::from_vectors(sigs.iter()) });
        self.ders.write().insert(rho.clone(), space.clone());
        Ok(space)
    }

    pub fn der_dim(&self, g: &GroupElement) -> Result<usize> {
        Ok(self.der_space(&self.reduce(g).0)?.gens.len())
    }

    /// Applies the `j`-th basis derivation of degree `g`.
    pub fn apply_der(&self, g: &GroupElement, j: usize, x: &Elem) -> Result<Elem> {
        let (rho, p) = self.reduce(g);
        let space = self.der_space(&rho)?;
        let (a, b) = space
            .gens
            .get(j)
            .ok_or_else(|| Error::InternalInconsistency(format!("no derivation {j} in degree {g}")))?;
        Ok(shift_elem(self.spec(), self.der_op(a, b).apply(x), &p))
    }

    /// Coordinates in the `D^g` basis of the operator `op` of degree `g`.
    fn express_op(&self, g: &GroupElement, op: &dyn Fn(&Key) -> Elem) -> Result<SparseVec<usize>> {
        let (rho, p) = self.reduce(g);
        let space = self.der_space(&rho)?;
        let sig = self.signature(op, &p);
        space
            .ech
            .express(&sig)
            .ok_or_else(|| Error::ClosureFailure(format!("operator of degree {g} is outside the derivation span")))
    }

    fn der_coords(&self, a: &Elem, b: &Elem) -> Result<SparseVec<usize>> {
        let (ka, kb) = match (a.iter().next(), b.iter().next()) {
            (Some((ka, _)), Some((kb, _))) if a.len() == 1 && b.len() == 1 => (ka.clone(), kb.clone()),
            _ => return self.der_coords_uncached(a, b),
        };
        let memo_key = (ka, kb);
        if let Some(c) = self.der_memo.read().get(&memo_key) {
            let (ca, cb) = (a.values().next().unwrap(), b.values().next().unwrap());
            return Ok(scaled(&(ca * cb), c));
        }
        let ua = crate::linalg::unit(memo_key.0.clone());
        let ub = crate::linalg::unit(memo_key.1.clone());
        let c = self.der_coords_uncached(&ua, &ub)?;
        self.der_memo.write().insert(memo_key, c.clone());
        let (ca, cb) = (a.values().next().unwrap(), b.values().next().unwrap());
        Ok(scaled(&(ca * cb), &c))
    }

    fn der_coords_uncached(&self, a: &Elem, b: &Elem) -> Result<SparseVec<usize>> {
        let spec = self.spec();
        let g = match (crate::algebra::degree_of(a), crate::algebra::degree_of(b)) {
            (Some(x), Some(y)) => spec.add(x, y),
            _ => return Ok(SparseVec::new()),
        };
        let d = self.der_op(a, b);
        self.express_op(&g, &|k| d.apply_key(k))
    }

    /// Verifies `[D^g, D^h] ⊆ D^{g+h}` on basis pairs over all residue classes.
    pub fn check_closure(&self) -> Result<()> {
        let spec = self.spec().clone();
        for g in &self.reps {
            for h in &self.reps {
                let (ng, nh) = (self.der_dim(g)?, self.der_dim(h)?);
                for i in 0..ng {
                    for j in 0..nh {
                        self.der_commutator(g, i, h, j, &spec.add(g, h))?;
                    }
                }
            }
        }
        Ok(())
    }

    fn der_commutator(
        &self,
        g: &GroupElement,
        i: usize,
        h: &GroupElement,
        j: usize,
        gh: &GroupElement,
    ) -> Result<SparseVec<usize>> {
        let op = |k: &Key| -> Elem {
            let x = crate::linalg::unit(k.clone());
            let mut o = self.apply_der(g, i, &self.apply_der(h, j, &x).unwrap_or_default()).unwrap_or_default();
            axpy(&mut o, &-Q::one(), &self.apply_der(h, j, &self.apply_der(g, i, &x).unwrap_or_default()).unwrap_or_default());
            o
        };
        self.express_op(gh, &op)
    }

    fn counts(&self, g: &GroupElement) -> Result<(usize, usize)> {
        let c = self.coord(g)?;
        Ok((c.na(), c.nb()))
    }

    fn decode(&self, k: &LieKey) -> Result<Term> {
        let c = self.coord(&k.degree)?;
        let (na, nb) = (c.na(), c.nb());
        let i = k.idx as usize;
        let bad = || Error::InvalidRoot(format!("no basis vector {k}"));
        let m = &self.model;
        if k.weight.is_zero() {
            let r = self.r;
            if i < r * na {
                Ok(Term::G(m.h_index(i / na), c.a[i % na].clone()))
            } else if i < r * na + (r - 1) * nb {
                let t = i - r * na;
                Ok(Term::S(m.s_zero_index(t / nb), c.b[t % nb].clone()))
            } else if i < r * na + (r - 1) * nb + self.der_dim(&k.degree)? {
                Ok(Term::D(k.degree.clone(), i - r * na - (r - 1) * nb))
            } else {
                Err(bad())
            }
        } else if m.datum.is_long(&k.weight) {
            let gi = m.g_index(&k.weight).ok_or_else(bad)?;
            c.a.get(i).map(|a| Term::G(gi, a.clone())).ok_or_else(bad)
        } else if m.datum.is_short(&k.weight) {
            if i < na {
                Ok(Term::G(m.g_index(&k.weight).ok_or_else(bad)?, c.a[i].clone()))
            } else {
                let si = m.s_index(&k.weight).ok_or_else(bad)?;
                c.b.get(i - na).map(|b| Term::S(si, b.clone())).ok_or_else(bad)
            }
        } else {
            Err(bad())
        }
    }

    fn by_degree(&self, x: &Elem) -> BTreeMap<GroupElement, Elem> {
        let mut parts: BTreeMap<GroupElement, Elem> = BTreeMap::new();
        for (k, c) in x {
            parts.entry(k.deg.clone()).or_default().insert(k.clone(), c.clone());
        }
        parts
    }

    fn push_g(&self, out: &mut LieElem, gi: usize, x: &Elem, c: &Q) -> Result<()> {
        let w = &self.model.g_weight[gi];
        for (g, part) in self.by_degree(x) {
            let cb = self.coord(&g)?;
            let (sa, sb) = cb.split(&part)?;
            if !sb.is_empty() {
                return Err(Error::SlotViolation(format!("skew coefficient on a 𝔤 slot in degree {g}")));
            }
            let base = if w.is_zero() { (gi - self.model.datum.roots.len()) * cb.na() } else { 0 };
            for (j, v) in sa {
                add_entry(out, LieKey::new(w.clone(), g.clone(), (base + j) as u32), &(c * v));
            }
        }
        Ok(())
    }

    fn push_s(&self, out: &mut LieElem, si: usize, x: &Elem, c: &Q) -> Result<()> {
        let w = &self.model.s_weight[si];
        for (g, part) in self.by_degree(x) {
            let cb = self.coord(&g)?;
            let (sa, sb) = cb.split(&part)?;
            if !sa.is_empty() {
                return Err(Error::SlotViolation(format!("symmetric coefficient on an 𝔰 slot in degree {g}")));
            }
            let base = if w.is_zero() {
                let i = si - (self.model.s.len() - (self.r - 1));
                self.r * cb.na() + i * cb.nb()
            } else {
                cb.na()
            };
            for (k, v) in sb {
                add_entry(out, LieKey::new(w.clone(), g.clone(), (base + k) as u32), &(c * v));
            }
        }
        Ok(())
    }

    fn push_d(&self, out: &mut LieElem, g: &GroupElement, coords: &SparseVec<usize>, c: &Q) -> Result<()> {
        let (na, nb) = self.counts(g)?;
        let base = self.r * na + (self.r - 1) * nb;
        let w = Weight::zero(self.r);
        for (j, v) in coords {
            add_entry(out, LieKey::new(w.clone(), g.clone(), (base + j) as u32), &(c * v));
        }
        Ok(())
    }

    fn bracket_terms(&self, x: &Term, y: &Term, out: &mut LieElem) -> Result<()> {
        let m = &self.model;
        let alg = &self.alg;
        let spec = self.spec();
        let h = half();
        match (x, y) {
            (Term::G(i, a), Term::G(j, b)) => {
                let circ = alg.circ(a, b);
                if !circ.is_empty() {
                    for (l, c) in &m.gg_bracket[*i][*j] {
                        self.push_g(out, *l, &circ, &(c * &h))?;
                    }
                }
                let comm = alg.commutator(a, b);
                if !comm.is_empty() {
                    for (l, c) in &m.gg_circ[*i][*j] {
                        self.push_s(out, *l, &comm, &(c * &h))?;
                    }
                }
                let tr = &m.gg_trace[*i][*j];
                if !tr.is_zero() {
                    let d = self.der_coords(a, b)?;
                    let g = spec.add(crate::algebra::degree_of(a).unwrap(), crate::algebra::degree_of(b).unwrap());
                    self.push_d(out, &g, &d, tr)?;
                }
            }
            (Term::G(i, a), Term::S(j, b)) => {
                let comm = alg.commutator(a, b);
                if !comm.is_empty() {
                    for (l, c) in &m.gs_circ[*i][*j] {
                        self.push_g(out, *l, &comm, &(c * &h))?;
                    }
                }
                let circ = alg.circ(a, b);
                if !circ.is_empty() {
                    for (l, c) in &m.gs_bracket[*i][*j] {
                        self.push_s(out, *l, &circ, &(c * &h))?;
                    }
                }
            }
            (Term::S(i, a), Term::S(j, b)) => {
                let circ = alg.circ(a, b);
                if !circ.is_empty() {
                    for (l, c) in &m.ss_bracket[*i][*j] {
                        self.push_g(out, *l, &circ, &(c * &h))?;
                    }
                }
                let comm = alg.commutator(a, b);
                if !comm.is_empty() {
                    for (l, c) in &m.ss_circ[*i][*j] {
                        self.push_s(out, *l, &comm, &(c * &h))?;
                    }
                }
                let tr = &m.ss_trace[*i][*j];
                if !tr.is_zero() {
                    let d = self.der_coords(a, b)?;
                    let g = spec.add(crate::algebra::degree_of(a).unwrap(), crate::algebra::degree_of(b).unwrap());
                    self.push_d(out, &g, &d, tr)?;
                }
            }
            (Term::D(g, i), Term::G(l, a)) => {
                let da = self.apply_der(g, *i, a)?;
                self.push_g(out, *l, &da, &Q::one())?;
            }
            (Term::D(g, i), Term::S(l, b)) => {
                let db = self.apply_der(g, *i, b)?;
                self.push_s(out, *l, &db, &Q::one())?;
            }
            (Term::D(g, i), Term::D(k, j)) => {
                let gk = spec.add(g, k);
                let c = self.der_commutator(g, *i, k, *j, &gk)?;
                self.push_d(out, &gk, &c, &Q::one())?;
            }
            (Term::S(..), Term::G(..)) | (Term::G(..), Term::D(..)) | (Term::S(..), Term::D(..)) => {
                let mut tmp = LieElem::new();
                self.bracket_terms(y, x, &mut tmp)?;
                axpy(out, &-Q::one(), &tmp);
            }
        }
        Ok(())
    }

    /// The coordinate `a` or `b` of a basis vector `x⊗a` or `s⊗b`; `None` on
    /// derivations.
    pub fn coordinate_of(&self, k: &LieKey) -> Result<Option<Elem>> {
        Ok(match self.decode(k)? {
            Term::G(_, a) => Some(a),
            Term::S(_, b) => Some(b),
            Term::D(..) => None,
        })
    }

    /// Human-readable form of a basis vector.
    pub fn describe(&self, k: &LieKey) -> Result<String> {
        Ok(match self.decode(k)? {
            Term::G(i, a) => format!("g{i}⊗({})", crate::algebra::fmt_elem(&a)),
            Term::S(i, b) => format!("s{i}⊗({})", crate::algebra::fmt_elem(&b)),
            Term::D(g, j) => format!("D{g}#{j}"),
        })
    }

    /// `x⊗a` for a matrix `x ∈ 𝔤` and `a ∈ A`.
    pub fn g_tensor(&self, x: &SpMat, a: &Elem) -> Result<LieElem> {
        let mut out = LieElem::new();
        for (i, c) in self.model.g_coords(x)? {
            self.push_g(&mut out, i, a, &c)?;
        }
        Ok(out)
    }

    /// `s⊗b` for a matrix `s ∈ 𝔰` and `b ∈ B`.
    pub fn s_tensor(&self, s: &SpMat, b: &Elem) -> Result<LieElem> {
        let mut out = LieElem::new();
        for (i, c) in self.model.s_coords(s)? {
            self.push_s(&mut out, i, b, &c)?;
        }
        Ok(out)
    }

    /// `D_{α,α'}` as an element of `D ⊆ ℒ`.
    pub fn der_elem(&self, a: &Elem, b: &Elem) -> Result<LieElem> {
        let mut out = LieElem::new();
        let spec = self.spec();
        if let (Some(x), Some(y)) = (crate::algebra::degree_of(a), crate::algebra::degree_of(b)) {
            let g = spec.add(x, y);
            let d = self.der_coords_uncached(a, b)?;
            self.push_d(&mut out, &g, &d, &Q::one())?;
        }
        Ok(out)
    }
}

impl GradedLie for SpLie {
    fn rank(&self) -> usize {
        self.r
    }

    fn spec(&self) -> &GroupSpec {
        self.alg.spec()
    }

    fn window(&self) -> Option<Window> {
        self.window
    }

    fn dim(&self, weight: &Weight, g: &GroupElement) -> usize {
        let Ok((na, nb)) = self.counts(g) else { return 0 };
        let m = &self.model;
        if weight.is_zero() {
            self.r * na + (self.r - 1) * nb + self.der_dim(g).unwrap_or(0)
        } else if m.datum.is_long(weight) {
            na
        } else if m.datum.is_short(weight) {
            na + nb
        } else {
            0
        }
    }

    fn bracket(&self, x: &LieKey, y: &LieKey) -> Result<LieElem> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.memo.read().get(&key) {
            return Ok(v.clone());
        }
        let mut out = LieElem::new();
        let sum = x.weight.add(&y.weight);
        if sum.norm2() <= 4 {
            self.bracket_terms(&self.decode(x)?, &self.decode(y)?, &mut out)?;
        }
        self.memo.write().insert(key, out.clone());
        Ok(out)
    }

    fn embed_g(&self, i: usize) -> Result<LieElem> {
        let mut out = LieElem::new();
        let unit = self.alg.unit().ok_or(Error::NoUnit)?;
        self.push_g(&mut out, i, &unit, &Q::one())?;
        Ok(out)
    }
}

/// Runs `f` over `0..n` in parallel, merging partial checks in order and
/// stopping at the first error.
pub(crate) fn try_sweep<F>(name: &str, n: usize, f: F) -> Result<Check>
where
    F: Fn(usize, &mut Check) -> Result<()> + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c = Check::new(name);
            f(i, &mut c)?;
            Ok(c)
        })
        .try_reduce(
            || Check::new(name),
            |mut a, b| {
                a.absorb(b);
                Ok(a)
            },
        )
}

/// Jacobi identity on all triples of distinct keys whose weights can sum to
/// a weight of the algebra. Assumes antisymmetry (see [`check_structure`]).
pub fn check_jacobi(lie: &dyn GradedLie, keys: &[LieKey]) -> Result<Check> {
    let weights = lie.weights();
    let c = try_sweep("jacobi", keys.len(), |i, c| {
        let x = &keys[i];
        for j in i + 1..keys.len() {
            let y = &keys[j];
            let wxy = x.weight.add(&y.weight);
            let xy = lie.bracket(x, y)?;
            for z in &keys[j + 1..] {
                if !is_weight(&weights, &wxy.add(&z.weight)) {
                    continue;
                }
                c.tested += 1;
                let zx = lie.bracket(z, x)?;
                let yz = lie.bracket(y, z)?;
                let mut total = LieElem::new();
                for (k, v) in &xy {
                    axpy(&mut total, v, &lie.bracket(k, z)?);
                }
                for (k, v) in &yz {
                    axpy(&mut total, v, &lie.bracket(k, x)?);
                }
                for (k, v) in &zx {
                    axpy(&mut total, v, &lie.bracket(k, y)?);
                }
                if !total.is_empty() {
                    c.violation(format!("J({x}, {y}, {z}) = {}", fmt_lie(&total)));
                }
            }
        }
        Ok(())
    })?;
    Ok(c.with_scope(lie.scope()))
}

/// Antisymmetry and the bigrading law `[ℒ_μ^g, ℒ_ν^h] ⊆ ℒ_{μ+ν}^{g+h}` on all
/// pairs of `keys`.
pub fn check_structure(lie: &dyn GradedLie, keys: &[LieKey]) -> Result<(Check, Check)> {
    let spec = lie.spec().clone();
    let anti = try_sweep("antisymmetry", keys.len(), |i, c| {
        let x = &keys[i];
        for y in &keys[i..] {
            c.tested += 1;
            let mut s = lie.bracket(x, y)?;
            axpy(&mut s, &Q::one(), &lie.bracket(y, x)?);
            if !s.is_empty() {
                c.violation(format!("[{x},{y}] + [{y},{x}] = {}", fmt_lie(&s)));
            }
        }
        Ok(())
    })?;
    let bigrade = try_sweep("bigrading", keys.len(), |i, c| {
        let x = &keys[i];
        for y in keys {
            c.tested += 1;
            let w = x.weight.add(&y.weight);
            let g = spec.add(&x.degree, &y.degree);
            let p = lie.bracket(x, y)?;
            if let Some(k) = p.keys().find(|k| k.weight != w || k.degree != g) {
                c.violation(format!("[{x},{y}] has a term at {k}"));
            }
        }
        Ok(())
    })?;
    Ok((anti.with_scope(lie.scope()), bigrade.with_scope(lie.scope())))
}

/// Exact center, cell by cell (finite G only).
pub fn lie_center(lie: &dyn GradedLie) -> Result<Vec<LieElem>> {
    if lie.window().is_some() && !lie.spec().is_finite() {
        return Err(Error::Inconclusive("the center needs the full algebra".into()));
    }
    let keys = lie.keys()?;
    let mut cells: BTreeMap<(Weight, GroupElement), Vec<LieKey>> = BTreeMap::new();
    for k in &keys {
        cells.entry((k.weight.clone(), k.degree.clone())).or_default().push(k.clone());
    }
    let mut center = Vec::new();
    for cell in cells.values() {
        let images: Vec<SparseVec<(LieKey, LieKey)>> = cell
            .iter()
            .map(|k| {
                let mut v = SparseVec::new();
                for y in &keys {
                    for (o, c) in lie.bracket(k, y)? {
                        v.insert((y.clone(), o), c);
                    }
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        for rel in kernel(&images) {
            center.push(rel.into_iter().map(|(i, c)| (cell[i].clone(), c)).collect());
        }
    }
    Ok(center)
}

/// Graded simplicity: every basis vector generates an ideal containing a
/// root vector of `𝔤⊗1`, hence all of `ℒ`.
pub fn graded_simple(lie: &dyn GradedLie) -> Result<Check> {
    if lie.window().is_some() && !lie.spec().is_finite() {
        return Ok(Check::inconclusive("graded simple", "ideal closure needs the full algebra").with_scope(lie.scope()));
    }
    let keys = lie.keys()?;
    let target = lie.embed_g(0)?;
    let total = keys.len();
    try_sweep("graded simple", keys.len(), |i, c| {
        c.tested += 1;
        let mut ech: Echelon<LieKey> = Echelon::new();
        let start = crate::linalg::unit(keys[i].clone());
        ech.insert(start.clone());
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            if ech.contains(&target) || ech.rank() == total {
                return Ok(());
            }
            for y in &keys {
                let mut u = LieElem::new();
                for (k, a) in &v {
                    axpy(&mut u, a, &lie.bracket(k, y)?);
                }
                if !u.is_empty() && !ech.contains(&u) {
                    ech.insert(u.clone());
                    queue.push(u);
                }
            }
        }
        if !ech.contains(&target) {
            c.violation(format!("ideal generated by {} has dimension {} < {total}", keys[i], ech.rank()));
        }
        Ok(())
    })
}

/// Plain-text dimension table over all cells of the domain.
pub fn dimension_table(lie: &dyn GradedLie) -> Result<String> {
    let mut s = String::new();
    for g in lie.degrees()? {
        for w in lie.weights() {
            let d = lie.dim(&w, &g);
            if d > 0 {
                s.push_str(&format!("{w}\t{g}\t{d}\n"));
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BracketLine {
    x: LieKey,
    y: LieKey,
    result: Vec<(LieKey, Rat)>,
}

/// Nonzero brackets `[x, y]` with `x < y` as JSON lines.
pub fn export_jsonl(lie: &dyn GradedLie) -> Result<String> {
    let keys = lie.keys()?;
    let mut s = String::new();
    for (i, x) in keys.iter().enumerate() {
        for y in &keys[i + 1..] {
            let p = lie.bracket(x, y)?;
            if p.is_empty() {
                continue;
            }
            let line = BracketLine {
                x: x.clone(),
                y: y.clone(),
                result: p.into_iter().map(|(k, c)| (k, Rat(c))).collect(),
            };
            s.push_str(&serde_json::to_string(&line).map_err(|e| Error::Config(e.to_string()))?);
            s.push('\n');
        }
    }
    Ok(s)
}

/// A bigraded Lie algebra held as an explicit table of structure constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableLie {
    rank: usize,
    spec: GroupSpec,
    keys: Vec<LieKey>,
    #[serde(with = "table_serde")]
    table: HashMap<(LieKey, LieKey), LieElem>,
    #[serde(with = "embed_serde")]
    embed: Vec<LieElem>,
}

mod table_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &HashMap<(LieKey, LieKey), LieElem>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut lines: Vec<BracketLine> = t
            .iter()
            .map(|((x, y), v)| BracketLine {
                x: x.clone(),
                y: y.clone(),
                result: v.iter().map(|(k, c)| (k.clone(), Rat(c.clone()))).collect(),
            })
            .collect();
        lines.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
        lines.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<HashMap<(LieKey, LieKey), LieElem>, D::Error> {
        let lines = Vec::<BracketLine>::deserialize(d)?;
        Ok(lines
            .into_iter()
            .map(|l| ((l.x, l.y), l.result.into_iter().map(|(k, c)| (k, c.0)).collect()))
            .collect())
    }
}

mod embed_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &[LieElem], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<(LieKey, Rat)>> =
            e.iter().map(|x| x.iter().map(|(k, c)| (k.clone(), Rat(c.clone()))).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<LieElem>, D::Error> {
        let v = Vec::<Vec<(LieKey, Rat)>>::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.into_iter().map(|(k, c)| (k, c.0)).collect()).collect())
    }
}

impl TableLie {
    /// Evaluates every bracket of a finite algebra.
    pub fn materialize(lie: &dyn GradedLie) -> Result<TableLie> {
        if !lie.spec().is_finite() {
            return Err(Error::UnsupportedForInfiniteGroup(lie.spec().free_rank));
        }
        let keys = lie.keys()?;
        let rows: Vec<Vec<((LieKey, LieKey), LieElem)>> = keys
            .par_iter()
            .map(|x| {
                let mut row = Vec::new();
                for y in &keys {
                    let p = lie.bracket(x, y)?;
                    if !p.is_empty() {
                        row.push(((x.clone(), y.clone()), p));
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let model = lie.model()?;
        let embed = (0..model.dim_g()).map(|i| lie.embed_g(i)).collect::<Result<_>>()?;
        Ok(TableLie { rank: lie.rank(), spec: lie.spec().clone(), keys, table: rows.into_iter().flatten().collect(), embed })
    }

    pub fn basis(&self) -> &[LieKey] {
        &self.keys
    }

    /// `ℒ ⊕ 𝔽c` with `c` central of weight 0 and degree 0.
    pub fn with_central_line(&self) -> (TableLie, LieKey) {
        let mut t = self.clone();
        let zero_w = Weight::zero(self.rank);
        let zero_g = self.spec.zero();
        let idx = self.dim(&zero_w, &zero_g) as u32;
        let c = LieKey::new(zero_w, zero_g, idx);
        t.keys.push(c.clone());
        t.keys.sort();
        (t, c)
    }

    /// Adds `delta` to `[x, y]` and subtracts it from `[y, x]`.
    pub fn perturb(&mut self, x: &LieKey, y: &LieKey, delta: &LieElem) {
        let e = self.table.entry((x.clone(), y.clone())).or_default();
        axpy(e, &Q::one(), delta);
        let e = self.table.entry((y.clone(), x.clone())).or_default();
        axpy(e, &-Q::one(), delta);
    }
}

impl GradedLie for TableLie {
    fn rank(&self) -> usize {
        self.rank
    }

    fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn window(&self) -> Option<Window> {
        None
    }

    fn dim(&self, weight: &Weight, g: &GroupElement) -> usize {
        self.keys.iter().filter(|k| &k.weight == weight && &k.degree == g).count()
    }

    fn keys(&self) -> Result<Vec<LieKey>> {
        Ok(self.keys.clone())
    }

    fn bracket(&self, x: &LieKey, y: &LieKey) -> Result<LieElem> {
        Ok(self.table.get(&(x.clone(), y.clone())).cloned().unwrap_or_default())
    }

    fn embed_g(&self, i: usize) -> Result<LieElem> {
        self.embed.get(i).cloned().ok_or_else(|| Error::InvalidRoot(format!("no 𝔤 basis vector {i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{quantum_torus, rationals, reversal_involution, CocycleMatrix};
    use crate::scalar::q;
    use crate::symplectic::{g_basis, mat_bracket};

    fn klein_quantum() -> (GradedAlgebra, InvolutionMap) {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &qm).unwrap();
        let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
        (alg, sigma)
    }

    #[test]
    fn classical_dimensions_and_center() {
        for r in 2..=3 {
            let lie = build_sp(&rationals(), &InvolutionMap::identity(), r, SpMode::Full).unwrap();
            let keys = lie.keys().unwrap();
            assert_eq!(keys.len(), r * (2 * r + 1));
            assert!(lie_center(&lie).unwrap().is_empty());
        }
    }

    #[test]
    fn grading_subalgebra_embeds() {
        let lie = build_sp(&rationals(), &InvolutionMap::identity(), 2, SpMode::Full).unwrap();
        let m = lie.model().unwrap();
        for i in 0..m.dim_g() {
            for j in 0..m.dim_g() {
                let lhs = lie.bracket_elems(&lie.embed_g(i).unwrap(), &lie.embed_g(j).unwrap()).unwrap();
                let rhs = lie.embed_matrix(&mat_bracket(&m.g[i], &m.g[j]).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn klein_quantum_component_counts() {
        let (alg, sigma) = klein_quantum();
        let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
        let m = lie.model().unwrap();
        let mut na = 0;
        let mut nb = 0;
        for g in lie.degrees().unwrap() {
            let c = lie.coord(&g).unwrap();
            na += c.na();
            nb += c.nb();
        }
        assert_eq!(m.dim_g() * na, 30);
        assert_eq!(m.dim_s() * nb, 5);
        let (anti, bigrade) = check_structure(&lie, &lie.keys().unwrap()).unwrap();
        assert!(anti.passed() && bigrade.passed());
        assert!(lie_center(&lie).unwrap().is_empty());
        assert!(graded_simple(&lie).unwrap().passed());
    }

    #[test]
    fn unit_derivations_vanish() {
        let (alg, sigma) = klein_quantum();
        let one = alg.unit().unwrap();
        for k in alg.basis(None).unwrap() {
            let x = crate::linalg::unit(k.clone());
            for r in [2, 3] {
                let d = inner_der(&alg, &sigma, r, &one, &x).unwrap();
                for y in alg.basis(None).unwrap() {
                    assert!(d.apply_key(&y).is_empty());
                }
            }
        }
        assert!(matches!(inner_der(&alg, &sigma, 1, &one, &one), Err(Error::RankTooSmall(1))));
    }

    #[test]
    fn derivation_on_symmetric_elements_matches_circ_formula() {
        // D_{a,a'}a'' = (2/r)·(a·(a'·a'') − a'·(a·a'')) with · = ½∘.
        let (alg, sigma) = klein_quantum();
        let lie = SpLie::assemble(&alg, &sigma, 2, SpMode::Full).unwrap();
        let sym: Vec<Elem> = lie.degrees().unwrap().iter().flat_map(|g| lie.coord(g).unwrap().a.clone()).collect();
        let dot = |x: &Elem, y: &Elem| scaled(&half(), &alg.circ(x, y));
        for r in [2usize, 3, 4] {
            for a in &sym {
                for a2 in &sym {
                    let d = inner_der(&alg, &sigma, r, a, a2).unwrap();
                    for a3 in &sym {
                        let mut rhs = dot(a, &dot(a2, a3));
                        axpy(&mut rhs, &-Q::one(), &dot(a2, &dot(a, a3)));
                        assert_eq!(d.apply(a3), scaled(&q(2, r as i64), &rhs));
                    }
                    let sq = alg.mul(a, a);
                    let dsq = inner_der(&alg, &sigma, r, a, &sq).unwrap();
                    assert!(sym.iter().all(|x| dsq.apply(x).is_empty()));
                }
            }
        }
    }

    #[test]
    fn brackets_with_unit_reproduce_matrix_bracket() {
        let (alg, sigma) = klein_quantum();
        let lie = SpLie::assemble(&alg, &sigma, 2, SpMode::Full).unwrap();
        let one = alg.unit().unwrap();
        let r = 2;
        let mu = Weight::pair(r, 1, 1, 2, -1);
        let nu = Weight::pair(r, 1, -1, 1, -1);
        let x = g_basis(r, &mu).unwrap();
        let y = g_basis(r, &nu).unwrap();
        let lhs = lie.bracket_elems(&lie.g_tensor(&x, &one).unwrap(), &lie.g_tensor(&y, &one).unwrap()).unwrap();
        assert_eq!(lhs, lie.g_tensor(&mat_bracket(&x, &y).unwrap(), &one).unwrap());
    }

    #[test]
    fn central_line_is_found() {
        let lie = build_sp(&rationals(), &InvolutionMap::identity(), 2, SpMode::Full).unwrap();
        let t = TableLie::materialize(&lie).unwrap();
        let (t2, c) = t.with_central_line();
        assert_eq!(lie_center(&t2).unwrap(), vec![crate::linalg::unit(c)]);
        let json = serde_json::to_string(&t).unwrap();
        let back: TableLie = serde_json::from_str(&json).unwrap();
        assert_eq!(export_jsonl(&back).unwrap(), export_jsonl(&t).unwrap());
    }

    #[test]
    fn perturbation_breaks_jacobi() {
        let (alg, sigma) = klein_quantum();
        let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
        let mut t = TableLie::materialize(&lie).unwrap();
        let keys = t.basis().to_vec();
        assert!(check_jacobi(&t, &keys).unwrap().passed());
        let x = keys.iter().find(|k| k.weight == Weight::pair(2, 1, 1, 2, -1)).unwrap().clone();
        let y = keys.iter().find(|k| k.weight == Weight::pair(2, 2, 1, 2, 1)).unwrap().clone();
        let target = t.bracket(&x, &y).unwrap();
        assert!(!target.is_empty());
        t.perturb(&x, &y, &target);
        assert!(!check_jacobi(&t, &keys).unwrap().passed());
    }

    #[test]
    fn clifford_input_rejected_for_rank_three() {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let data = crate::constructors::CliffordData {
            plus_subgroup: vec![spec.element(&[1, 0]).unwrap()],
            module_degrees: vec![spec.element(&[0, 1]).unwrap()],
            form: vec![vec![Q::one()]],
        };
        let (alg, sigma) = crate::constructors::clifford_torus(&spec, &data, true, None).unwrap();
        assert!(matches!(build_sp(&alg, &sigma, 3, SpMode::Full), Err(Error::KindMismatch(_))));
        assert!(build_sp(&alg, &sigma, 2, SpMode::Full).is_ok());
    }

    #[test]
    fn window_mode_on_laurent_quantum_plane() {
        let spec = GroupSpec::free(2);
        let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &qm).unwrap();
        let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
        assert!(matches!(build_sp(&alg, &sigma, 2, SpMode::Full), Err(Error::WindowRequired)));
        let lie = build_sp(&alg, &sigma, 2, SpMode::Window(Window::l1(1))).unwrap();
        assert_eq!(lie.scope(), Scope::Window { radius: 1, norm: crate::group::Norm::L1 });
    }
}
