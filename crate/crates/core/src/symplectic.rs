//! The Cᵣ root datum and the 2r×2r matrix model: the symplectic Lie algebra
//! 𝔤, its module 𝔰 of M-symmetric trace-zero matrices, and the products
//! `∘`, `[·,·]` and `tr(wz)` between them, tabulated in weight bases.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{add_entry, axpy, Echelon, Mat, SparseVec};
use crate::scalar::{q, qi, Q};

/// Integer combination of `ε₁,…,εᵣ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub SmallVec<[i8; 8]>);

impl Weight {
    pub fn zero(r: usize) -> Self {
        Weight(SmallVec::from_elem(0, r))
    }

    /// `a·εᵢ + b·εⱼ` with 1-based indices.
    pub fn pair(r: usize, i: usize, a: i8, j: usize, b: i8) -> Self {
        let mut w = Self::zero(r);
        w.0[i - 1] += a;
        w.0[j - 1] += b;
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn inner(&self, o: &Weight) -> i64 {
        self.0.iter().zip(&o.0).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    pub fn norm2(&self) -> i64 {
        self.inner(self)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}e{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatumC {
    pub r: usize,
    pub roots: Vec<Weight>,
}

impl RootDatumC {
    pub fn new(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::RankTooSmall(r));
        }
        let mut roots = Vec::new();
        for i in 1..=r {
            for j in 1..=r {
                if i != j {
                    roots.push(Weight::pair(r, i, 1, j, -1));
                }
            }
        }
        for i in 1..=r {
            for j in i + 1..=r {
                roots.push(Weight::pair(r, i, 1, j, 1));
                roots.push(Weight::pair(r, i, -1, j, -1));
            }
        }
        for i in 1..=r {
            roots.push(Weight::pair(r, i, 1, i, 1));
            roots.push(Weight::pair(r, i, -1, i, -1));
        }
        Ok(RootDatumC { r, roots })
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        w.rank() == self.r && matches!(w.norm2(), 2 | 4) && self.roots.contains(w)
    }

    pub fn is_short(&self, w: &Weight) -> bool {
        self.is_root(w) && w.norm2() == 2
    }

    pub fn is_long(&self, w: &Weight) -> bool {
        self.is_root(w) && w.norm2() == 4
    }

    pub fn short_roots(&self) -> impl Iterator<Item = &Weight> {
        self.roots.iter().filter(|w| w.norm2() == 2)
    }

    pub fn long_roots(&self) -> impl Iterator<Item = &Weight> {
        self.roots.iter().filter(|w| w.norm2() == 4)
    }

    /// `⟨ν, μ∨⟩ = 2(ν,μ)/(μ,μ)`.
    pub fn cartan(&self, nu: &Weight, mu: &Weight) -> Result<i64> {
        if !self.is_root(mu) {
            return Err(Error::InvalidRoot(format!("{mu} is not a root of C{}", self.r)));
        }
        if nu.rank() != self.r {
            return Err(Error::InvalidRoot(format!("{nu} has the wrong rank")));
        }
        Ok(2 * nu.inner(mu) / mu.norm2())
    }

    /// Coroot as a combination of `hᵢ = E_{i,i} − E_{2r+1−i,2r+1−i}`.
    pub fn coroot_coords(&self, mu: &Weight) -> Result<Vec<i64>> {
        if !self.is_root(mu) {
            return Err(Error::InvalidRoot(format!("{mu}")));
        }
        let d = mu.norm2() / 2;
        Ok(mu.0.iter().map(|&c| c as i64 / d).collect())
    }
}

pub fn roots_c(r: usize) -> Result<RootDatumC> {
    RootDatumC::new(r)
}

/// Sparse square matrix, 0-based entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpMat {
    pub n: usize,
    pub entries: SparseVec<(usize, usize)>,
}

impl fmt::Debug for SpMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(&(i, j), c)| format!("{}E{},{}", crate::scalar::fmt_q(c), i + 1, j + 1))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl SpMat {
    pub fn zero(n: usize) -> Self {
        SpMat { n, entries: SparseVec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries.insert((i, i), Q::one());
        }
        m
    }

    /// `E_{i,j}` with 1-based indices.
    pub fn e(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries.insert((i - 1, j - 1), Q::one());
        m
    }

    /// Sum of `c·E_{i,j}` (1-based).
    pub fn from_terms(n: usize, terms: &[(i64, usize, usize)]) -> Self {
        let mut m = Self::zero(n);
        for &(c, i, j) in terms {
            add_entry(&mut m.entries, (i - 1, j - 1), &qi(c));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        SpMat { n: self.n, entries: crate::linalg::scaled(c, &self.entries) }
    }

    pub fn add(&self, o: &SpMat) -> Self {
        SpMat { n: self.n, entries: crate::linalg::add(&self.entries, &o.entries) }
    }

    pub fn sub(&self, o: &SpMat) -> Self {
        SpMat { n: self.n, entries: crate::linalg::sub(&self.entries, &o.entries) }
    }

    pub fn mul(&self, o: &SpMat) -> Self {
        let mut out = SparseVec::new();
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in o.entries.range((k, 0)..(k + 1, 0)) {
                add_entry(&mut out, (i, j), &(a * b));
            }
        }
        SpMat { n: self.n, entries: out }
    }

    pub fn transpose(&self) -> Self {
        SpMat { n: self.n, entries: self.entries.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn trace(&self) -> Q {
        self.entries.iter().filter(|((i, j), _)| i == j).map(|(_, c)| c.clone()).sum()
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (&(i, j), c) in &self.entries {
            m[(i, j)] = c.clone();
        }
        m
    }
}

/// The form matrix `M` with entries `sign(i−j)·δ_{i+j,2r+1}`.
pub fn form_matrix(r: usize) -> SpMat {
    let n = 2 * r;
    let mut m = SpMat::zero(n);
    for i in 1..=n {
        let j = n + 1 - i;
        let s = if i > j { 1 } else { -1 };
        m.entries.insert((i - 1, j - 1), qi(s));
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatTag {
    G,
    S,
    Other,
}

pub fn in_g(x: &SpMat) -> bool {
    let m = form_matrix(x.n / 2);
    x.transpose().mul(&m) == m.mul(x).scale(&-Q::one())
}

pub fn in_s(s: &SpMat) -> bool {
    let m = form_matrix(s.n / 2);
    s.transpose().mul(&m) == m.mul(s) && s.trace().is_zero()
}

pub fn tag(x: &SpMat) -> MatTag {
    if in_g(x) {
        MatTag::G
    } else if in_s(x) {
        MatTag::S
    } else {
        MatTag::Other
    }
}

fn size_check(w: &SpMat, z: &SpMat) -> Result<usize> {
    if w.n != z.n || w.n % 2 != 0 {
        return Err(Error::SizeMismatch(format!("{}×{} vs {}×{}", w.n, w.n, z.n, z.n)));
    }
    Ok(w.n / 2)
}

/// `w∘z = wz + zw − (1/r)·tr(wz)·id`.
pub fn mat_circ(w: &SpMat, z: &SpMat) -> Result<SpMat> {
    let r = size_check(w, z)?;
    let wz = w.mul(z);
    let t = wz.trace();
    let mut out = wz.add(&z.mul(w));
    if !t.is_zero() {
        out = out.sub(&SpMat::identity(2 * r).scale(&(t / qi(r as i64))));
    }
    Ok(out)
}

pub fn mat_bracket(w: &SpMat, z: &SpMat) -> Result<SpMat> {
    size_check(w, z)?;
    Ok(w.mul(z).sub(&z.mul(w)))
}

/// `tr(wz)`.
pub fn mat_trace(w: &SpMat, z: &SpMat) -> Result<Q> {
    size_check(w, z)?;
    Ok(w.mul(z).trace())
}

fn bar(r: usize, i: usize) -> usize {
    2 * r + 1 - i
}

/// Decomposes a root into `(i, a, j, b)` with `μ = a·εᵢ + b·εⱼ` (1-based;
/// `i = j` for long roots).
fn root_parts(w: &Weight) -> Vec<(usize, i8)> {
    w.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i + 1, c)).collect()
}

/// Root vector of `𝔤` for `μ`.
pub fn g_basis(r: usize, mu: &Weight) -> Result<SpMat> {
    let datum = RootDatumC::new(r)?;
    if !datum.is_root(mu) {
        return Err(Error::InvalidRoot(format!("{mu} is not a root of C{r}")));
    }
    let n = 2 * r;
    let p = root_parts(mu);
    let m = match p.as_slice() {
        [(i, 2)] => SpMat::from_terms(n, &[(2, *i, bar(r, *i))]),
        [(i, -2)] => SpMat::from_terms(n, &[(2, bar(r, *i), *i)]),
        [(i, a), (j, b)] => match (a, b) {
            (1, -1) => SpMat::from_terms(n, &[(1, *i, *j), (-1, bar(r, *j), bar(r, *i))]),
            (-1, 1) => SpMat::from_terms(n, &[(1, *j, *i), (-1, bar(r, *i), bar(r, *j))]),
            (1, 1) => SpMat::from_terms(n, &[(1, *i, bar(r, *j)), (1, *j, bar(r, *i))]),
            (-1, -1) => SpMat::from_terms(n, &[(1, bar(r, *j), *i), (1, bar(r, *i), *j)]),
            _ => unreachable!(),
        },
        _ => unreachable!(),
    };
    Ok(m)
}

/// Weight vector of `𝔰` for a short root `w`.
pub fn s_basis(r: usize, w: &Weight) -> Result<SpMat> {
    let datum = RootDatumC::new(r)?;
    if !datum.is_short(w) {
        return Err(Error::InvalidRoot(format!("{w} is not a nonzero weight of 𝔰 for C{r}")));
    }
    let n = 2 * r;
    let p = root_parts(w);
    let [(i, a), (j, b)] = p.as_slice() else { unreachable!() };
    let (i, j) = (*i, *j);
    let m = match (a, b) {
        (1, -1) => SpMat::from_terms(n, &[(1, i, j), (1, bar(r, j), bar(r, i))]),
        (-1, 1) => SpMat::from_terms(n, &[(1, j, i), (1, bar(r, i), bar(r, j))]),
        (1, 1) => SpMat::from_terms(n, &[(1, i, bar(r, j)), (-1, j, bar(r, i))]),
        (-1, -1) => SpMat::from_terms(n, &[(1, bar(r, j), i), (-1, bar(r, i), j)]),
        _ => unreachable!(),
    };
    Ok(m)
}

/// Zero-weight vectors of `𝔰`: `E_{i,i} + E_{ī,ī} − E_{i+1,i+1} − E_{ī−1,ī−1}`
/// for `i = 1, …, r−1`, where `ī = 2r+1−i`.
pub fn s_zero_basis(r: usize) -> Vec<SpMat> {
    let n = 2 * r;
    (1..r)
        .map(|i| SpMat::from_terms(n, &[(1, i, i), (1, bar(r, i), bar(r, i)), (-1, i + 1, i + 1), (-1, bar(r, i) - 1, bar(r, i) - 1)]))
        .collect()
}

/// `hᵢ = E_{i,i} − E_{2r+1−i,2r+1−i}`.
pub fn h_basis(r: usize) -> Vec<SpMat> {
    (1..=r).map(|i| SpMat::from_terms(2 * r, &[(1, i, i), (-1, bar(r, i), bar(r, i))])).collect()
}

/// `μ∨` as a diagonal matrix.
pub fn coroot(r: usize, mu: &Weight) -> Result<SpMat> {
    let c = RootDatumC::new(r)?.coroot_coords(mu)?;
    let h = h_basis(r);
    let mut out = SpMat::zero(2 * r);
    for (ci, hi) in c.iter().zip(&h) {
        if *ci != 0 {
            out = out.add(&hi.scale(&qi(*ci)));
        }
    }
    Ok(out)
}

/// Weight of `m` under `𝔥`, if `m` is a weight vector.
pub fn weight_of(m: &SpMat) -> Option<Weight> {
    let r = m.n / 2;
    let mut w = Weight::zero(r);
    for (i, h) in h_basis(r).iter().enumerate() {
        let br = h.mul(m).sub(&m.mul(h));
        let (&key, c) = m.entries.iter().next()?;
        let ratio = br.get(key.0, key.1) / c;
        if br != m.scale(&ratio) || !ratio.is_integer() {
            return None;
        }
        w.0[i] = i8::try_from(ratio.to_integer()).ok()?;
    }
    Some(w)
}

/// Weight bases of `𝔤` and `𝔰` together with all products between basis
/// vectors, expressed in basis coordinates.
#[derive(Debug)]
pub struct SymplecticModel {
    pub r: usize,
    pub datum: RootDatumC,
    /// Root vectors in `datum.roots` order, then `h₁, …, hᵣ`.
    pub g: Vec<SpMat>,
    pub g_weight: Vec<Weight>,
    /// Short-root vectors in `datum` order, then the zero-weight vectors.
    pub s: Vec<SpMat>,
    pub s_weight: Vec<Weight>,
    pub gg_bracket: Vec<Vec<SparseVec<usize>>>,
    pub gg_circ: Vec<Vec<SparseVec<usize>>>,
    pub gg_trace: Vec<Vec<Q>>,
    pub gs_circ: Vec<Vec<SparseVec<usize>>>,
    pub gs_bracket: Vec<Vec<SparseVec<usize>>>,
    pub ss_bracket: Vec<Vec<SparseVec<usize>>>,
    pub ss_circ: Vec<Vec<SparseVec<usize>>>,
    pub ss_trace: Vec<Vec<Q>>,
    g_ech: Echelon<(usize, usize)>,
    s_ech: Echelon<(usize, usize)>,
}

impl SymplecticModel {
    /// Shared model for rank `r`, built on first use.
    pub fn get(r: usize) -> Result<Arc<SymplecticModel>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SymplecticModel>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(m) = cache.lock().unwrap().get(&r) {
            return Ok(m.clone());
        }
        let m = Arc::new(Self::build(r)?);
        cache.lock().unwrap().insert(r, m.clone());
        Ok(m)
    }

    fn build(r: usize) -> Result<Self> {
        let datum = RootDatumC::new(r)?;
        let mut g = Vec::new();
        let mut g_weight = Vec::new();
        for mu in &datum.roots {
            g.push(g_basis(r, mu)?);
            g_weight.push(mu.clone());
        }
        for h in h_basis(r) {
            g.push(h);
            g_weight.push(Weight::zero(r));
        }
        let mut s = Vec::new();
        let mut s_weight = Vec::new();
        for w in datum.short_roots() {
            s.push(s_basis(r, w)?);
            s_weight.push(w.clone());
        }
        for z in s_zero_basis(r) {
            s.push(z);
            s_weight.push(Weight::zero(r));
        }
        let g_ech = Echelon::from_vectors(g.iter().map(|m| &m.entries));
        let s_ech = Echelon::from_vectors(s.iter().map(|m| &m.entries));
        let mut model = SymplecticModel {
            r,
            datum,
            g,
            g_weight,
            s,
            s_weight,
            gg_bracket: vec![],
            gg_circ: vec![],
            gg_trace: vec![],
            gs_circ: vec![],
            gs_bracket: vec![],
            ss_bracket: vec![],
            ss_circ: vec![],
            ss_trace: vec![],
            g_ech,
            s_ech,
        };
        let (ng, ns) = (model.g.len(), model.s.len());
        for i in 0..ng {
            let (mut br, mut ci, mut tr) = (vec![], vec![], vec![]);
            for j in 0..ng {
                br.push(model.g_coords(&mat_bracket(&model.g[i], &model.g[j])?)?);
                ci.push(model.s_coords(&mat_circ(&model.g[i], &model.g[j])?)?);
                tr.push(mat_trace(&model.g[i], &model.g[j])?);
            }
            model.gg_bracket.push(br);
            model.gg_circ.push(ci);
            model.gg_trace.push(tr);
            let (mut ci, mut br) = (vec![], vec![]);
            for j in 0..ns {
                ci.push(model.g_coords(&mat_circ(&model.g[i], &model.s[j])?)?);
                br.push(model.s_coords(&mat_bracket(&model.g[i], &model.s[j])?)?);
            }
            model.gs_circ.push(ci);
            model.gs_bracket.push(br);
        }
        for i in 0..ns {
            let (mut br, mut ci, mut tr) = (vec![], vec![], vec![]);
            for j in 0..ns {
                br.push(model.g_coords(&mat_bracket(&model.s[i], &model.s[j])?)?);
                ci.push(model.s_coords(&mat_circ(&model.s[i], &model.s[j])?)?);
                tr.push(mat_trace(&model.s[i], &model.s[j])?);
            }
            model.ss_bracket.push(br);
            model.ss_circ.push(ci);
            model.ss_trace.push(tr);
        }
        Ok(model)
    }

    pub fn dim_g(&self) -> usize {
        self.g.len()
    }

    pub fn dim_s(&self) -> usize {
        self.s.len()
    }

    pub fn g_coords(&self, m: &SpMat) -> Result<SparseVec<usize>> {
        self.g_ech
            .express(&m.entries)
            .ok_or_else(|| Error::InternalInconsistency(format!("{m:?} is not in 𝔤")))
    }

    pub fn s_coords(&self, m: &SpMat) -> Result<SparseVec<usize>> {
        self.s_ech
            .express(&m.entries)
            .ok_or_else(|| Error::InternalInconsistency(format!("{m:?} is not in 𝔰")))
    }

    pub fn g_matrix(&self, c: &SparseVec<usize>) -> SpMat {
        let mut out = SparseVec::new();
        for (&i, x) in c {
            axpy(&mut out, x, &self.g[i].entries);
        }
        SpMat { n: 2 * self.r, entries: out }
    }

    pub fn s_matrix(&self, c: &SparseVec<usize>) -> SpMat {
        let mut out = SparseVec::new();
        for (&i, x) in c {
            axpy(&mut out, x, &self.s[i].entries);
        }
        SpMat { n: 2 * self.r, entries: out }
    }

    /// Index of the root vector for `mu` in `g`.
    pub fn g_index(&self, mu: &Weight) -> Option<usize> {
        self.datum.roots.iter().position(|w| w == mu)
    }

    /// Index of the weight vector for a short root `w` in `s`.
    pub fn s_index(&self, w: &Weight) -> Option<usize> {
        self.s_weight.iter().position(|x| x == w && !w.is_zero())
    }

    /// Index of `hᵢ` (0-based `i`) in `g`.
    pub fn h_index(&self, i: usize) -> usize {
        self.datum.roots.len() + i
    }

    /// Index of the i-th zero-weight vector (0-based) in `s`.
    pub fn s_zero_index(&self, i: usize) -> usize {
        self.s.len() - (self.r - 1) + i
    }
}

/// The four matrices used for the division property at `ε₁ − ε₂`:
/// `e = E₁₂ − E_{2r−1,2r}`, `e' = ½(E₂₁ − E_{2r,2r−1})`,
/// `s = E₁₂ + E_{2r−1,2r}`, `s' = ½(E₂₁ + E_{2r,2r−1})`.
pub fn division_witnesses(r: usize) -> (SpMat, SpMat, SpMat, SpMat) {
    let n = 2 * r;
    let e = SpMat::from_terms(n, &[(1, 1, 2), (-1, n - 1, n)]);
    let e2 = SpMat::from_terms(n, &[(1, 2, 1), (-1, n, n - 1)]).scale(&q(1, 2));
    let s = SpMat::from_terms(n, &[(1, 1, 2), (1, n - 1, n)]);
    let s2 = SpMat::from_terms(n, &[(1, 2, 1), (1, n, n - 1)]).scale(&q(1, 2));
    (e, e2, s, s2)
}
