//! Recovery of the coordinate algebra `𝔞 = A ⊕ B` from a bigraded Lie
//! algebra of type `Cᵣ`, and the identity batteries that decide which kind of
//! torus it is.
//!
//! `A^g` is read off the long-root cell `(2ε₁, g)` and `B^g` off the kernel of
//! `ad(x_{ε₁−ε₂}⊗1)` on the cell `(ε₁+ε₂, g)`. Both are carried to every other
//! cell along chains of `ad(𝔤⊗1)`, and every structure constant is read off a
//! single bracket of carried vectors. Only the brackets of the input and its
//! copy of `𝔤` are used.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num::{One, Zero};
use sha2::{Digest, Sha256};

use crate::algebra::{fmt_elem, ga_invert_hom, sweep, Elem, GradedAlgebra, InvolutionMap, Key, Kind, TableRule};
use crate::error::{Error, Result};
use crate::group::{is_subgroup, subgroup_generated, GroupElement, GroupSpec, Window};
use crate::linalg::{axpy, kernel, scaled, solve, unit, Echelon, SparseVec};
use crate::report::{Check, Report, Scope};
use crate::scalar::{half, qi, Q};
use crate::sp::{fmt_lie, inner_der, DerOp, GradedLie, LieElem, LieKey, SpLie};
use crate::symplectic::{SymplecticModel, Weight};

/// The extracted algebra: structure constants of `∘` and `[·,·]` on a basis
/// of `A^g ⊕ B^g` per degree, with `a_j ↦ Key(g, j)` and
/// `b_k ↦ Key(g, |A^g| + k)`.
///
/// For an infinite group only degrees inside `domain` are extracted, and a
/// product is known only when both factors and the result lie in `domain`.
#[derive(Clone)]
pub struct CoordinateBundle {
    pub rank: usize,
    pub spec: GroupSpec,
    pub domain: Option<Window>,
    dims: Arc<BTreeMap<GroupElement, (usize, usize)>>,
    circ: HashMap<(Key, Key), Elem>,
    comm: HashMap<(Key, Key), Elem>,
    skew_on_b: bool,
    unit: Elem,
    /// The matrix pairs whose brackets produced the products.
    pub witnesses: Vec<String>,
    images: BTreeMap<Key, LieElem>,
    alg: GradedAlgebra,
    sigma: InvolutionMap,
}

impl fmt::Debug for CoordinateBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoordinateBundle(rank {}, {} degrees)", self.rank, self.dims.len())
    }
}

#[derive(Clone)]
struct Item {
    label: String,
    deg: GroupElement,
    x: Elem,
}

impl CoordinateBundle {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        rank: usize,
        spec: GroupSpec,
        domain: Option<Window>,
        dims: BTreeMap<GroupElement, (usize, usize)>,
        circ: HashMap<(Key, Key), Elem>,
        comm: HashMap<(Key, Key), Elem>,
        skew_on_b: bool,
        unit: Elem,
        witnesses: Vec<String>,
        images: BTreeMap<Key, LieElem>,
    ) -> Result<Self> {
        let dims = Arc::new(dims);
        let d = dims.clone();
        let sigma = InvolutionMap::diagonal(move |k| {
            let na = d.get(&k.deg).map(|p| p.0).unwrap_or(0);
            if (k.slot as usize) < na {
                Q::one()
            } else {
                -Q::one()
            }
        });
        let alg = GradedAlgebra::new(Arc::new(TableRule::new(spec.clone(), vec![], HashMap::new(), None)?), Kind::Unconstrained);
        let mut b = CoordinateBundle {
            rank,
            spec,
            domain,
            dims,
            circ,
            comm,
            skew_on_b,
            unit,
            witnesses,
            images,
            alg,
            sigma,
        };
        b.rebuild()?;
        Ok(b)
    }

    fn rebuild(&mut self) -> Result<()> {
        let keys = self.keys();
        let mut table: HashMap<(Key, Key), Elem> = HashMap::new();
        for (pair, v) in self.circ.iter().chain(self.comm.iter()) {
            axpy(table.entry(pair.clone()).or_default(), &half(), v);
        }
        table.retain(|_, v| !v.is_empty());
        self.alg = GradedAlgebra::new(Arc::new(TableRule::new(self.spec.clone(), keys, table, None)?), Kind::Unconstrained);
        Ok(())
    }

    pub fn degrees(&self) -> Vec<GroupElement> {
        self.dims.keys().cloned().collect()
    }

    /// `(dim A^g, dim B^g)`.
    pub fn dims_at(&self, g: &GroupElement) -> (usize, usize) {
        self.dims.get(g).copied().unwrap_or((0, 0))
    }

    pub fn is_symmetric(&self, k: &Key) -> bool {
        (k.slot as usize) < self.dims_at(&k.deg).0
    }

    pub fn keys(&self) -> Vec<Key> {
        let mut out = Vec::new();
        for (g, &(na, nb)) in self.dims.iter() {
            out.extend((0..(na + nb) as u32).map(|s| Key::new(g.clone(), s)));
        }
        out
    }

    pub fn a_keys(&self) -> Vec<Key> {
        self.keys().into_iter().filter(|k| self.is_symmetric(k)).collect()
    }

    pub fn b_keys(&self) -> Vec<Key> {
        self.keys().into_iter().filter(|k| !self.is_symmetric(k)).collect()
    }

    /// `S₊ = supp A`.
    pub fn s_plus(&self) -> Vec<GroupElement> {
        self.dims.iter().filter(|(_, d)| d.0 > 0).map(|(g, _)| g.clone()).collect()
    }

    /// `S₋ = supp B`.
    pub fn s_minus(&self) -> Vec<GroupElement> {
        self.dims.iter().filter(|(_, d)| d.1 > 0).map(|(g, _)| g.clone()).collect()
    }

    pub fn unit(&self) -> &Elem {
        &self.unit
    }

    /// Whether `[B, B]` is known: always for rank at least 3, and for rank 2
    /// after [`define_skew_product`].
    pub fn skew_on_b(&self) -> bool {
        self.skew_on_b
    }

    pub fn scope(&self) -> Scope {
        Scope::from(self.domain)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn involution(&self) -> &InvolutionMap {
        &self.sigma
    }

    fn bilinear(&self, table: &HashMap<(Key, Key), Elem>, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if let Some(p) = table.get(&(a.clone(), b.clone())) {
                    axpy(&mut out, &(ca * cb), p);
                }
            }
        }
        out
    }

    pub fn circ(&self, x: &Elem, y: &Elem) -> Elem {
        self.bilinear(&self.circ, x, y)
    }

    pub fn comm(&self, x: &Elem, y: &Elem) -> Elem {
        self.bilinear(&self.comm, x, y)
    }

    /// `xy = ½ x∘y + ½ [x, y]`.
    pub fn product(&self, x: &Elem, y: &Elem) -> Elem {
        self.alg.mul(x, y)
    }

    pub fn sigma(&self, x: &Elem) -> Elem {
        self.sigma.apply(x)
    }

    pub fn der(&self, a: &Elem, b: &Elem) -> DerOp {
        inner_der(&self.alg, &self.sigma, self.rank, a, b).expect("rank checked at extraction")
    }

    /// Whether every partial sum of the given degrees lies in the domain.
    pub fn fits(&self, degs: &[&GroupElement]) -> bool {
        let mut sums = Vec::new();
        for d in degs {
            match self.extend_sums(&sums, d) {
                Some(s) => sums = s,
                None => return false,
            }
        }
        true
    }

    fn extend_sums(&self, sums: &[GroupElement], d: &GroupElement) -> Option<Vec<GroupElement>> {
        let Some(w) = &self.domain else { return Some(Vec::new()) };
        let mut out = sums.to_vec();
        let mut fresh = vec![d.clone()];
        fresh.extend(sums.iter().map(|s| self.spec.add(s, d)));
        for s in &fresh {
            if !w.contains(&self.spec, s) {
                return None;
            }
        }
        out.extend(fresh);
        Some(out)
    }

    /// Overwrites one structure constant of `∘` (both orders).
    pub fn set_circ(&mut self, x: &Key, y: &Key, value: Elem) -> Result<()> {
        let target = self.spec.add(&x.deg, &y.deg);
        if value.keys().any(|k| k.deg != target) {
            return Err(Error::GradingViolation(format!("{x}∘{y} must have degree {target}")));
        }
        self.circ.insert((x.clone(), y.clone()), value.clone());
        self.circ.insert((y.clone(), x.clone()), value);
        self.rebuild()
    }

    fn set_comm(&mut self, x: &Key, y: &Key, value: Elem) {
        if value.is_empty() {
            self.comm.remove(&(x.clone(), y.clone()));
        } else {
            self.comm.insert((x.clone(), y.clone()), value);
        }
    }

    /// SHA-256 of the structure constants in canonical order.
    pub fn structure_hash(&self) -> String {
        let mut lines = Vec::new();
        let keys = self.keys();
        for x in &keys {
            for y in &keys {
                let (c, k) = (self.circ.get(&(x.clone(), y.clone())), self.comm.get(&(x.clone(), y.clone())));
                if c.is_some() || k.is_some() {
                    lines.push(format!(
                        "{x}|{y}|{}|{}",
                        c.map(fmt_elem).unwrap_or_default(),
                        k.map(fmt_elem).unwrap_or_default()
                    ));
                }
            }
        }
        let digest = Sha256::digest(lines.join("\n").as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// `(A, ·)` with `a·a' = ½ a∘a'`, as a Jordan algebra on the symmetric keys.
    pub fn jordan_part(&self) -> Result<GradedAlgebra> {
        let keys = self.a_keys();
        let mut table = HashMap::new();
        for x in &keys {
            for y in &keys {
                let p = scaled(&half(), &self.circ(&unit(x.clone()), &unit(y.clone())));
                if !p.is_empty() {
                    table.insert((x.clone(), y.clone()), p);
                }
            }
        }
        let rule = TableRule::new(self.spec.clone(), keys, table, Some(self.unit.clone()))?;
        Ok(GradedAlgebra::new(Arc::new(rule), Kind::Jordan))
    }

    fn items(&self, keys: Vec<Key>) -> Vec<Item> {
        keys.into_iter().map(|k| Item { label: k.to_string(), deg: k.deg.clone(), x: unit(k) }).collect()
    }

    fn items_of(&self, vs: &BTreeMap<GroupElement, Vec<Elem>>, tag: &str) -> Vec<Item> {
        let mut out = Vec::new();
        for (g, list) in vs {
            for (i, v) in list.iter().enumerate() {
                out.push(Item { label: format!("{tag}{g}#{i}"), deg: g.clone(), x: v.clone() });
            }
        }
        out
    }

    /// Sweeps all tuples drawn from `lists` whose partial degree sums stay in
    /// the domain; `f` returns residuals that must vanish.
    fn tuple_check<F>(&self, name: &str, lists: &[&[Item]], f: F) -> Check
    where
        F: Fn(&[&Item]) -> Vec<Elem> + Sync + Send,
    {
        let first = lists[0];
        let c = sweep(name, first.len(), |i, c| {
            let Some(sums) = self.extend_sums(&[], &first[i].deg) else { return };
            let mut stack = vec![&first[i]];
            self.dfs(lists, 1, &sums, &mut stack, &f, c);
        });
        c.with_scope(self.scope())
    }

    fn dfs<'a, F>(&self, lists: &[&'a [Item]], pos: usize, sums: &[GroupElement], stack: &mut Vec<&'a Item>, f: &F, c: &mut Check)
    where
        F: Fn(&[&Item]) -> Vec<Elem>,
    {
        if pos == lists.len() {
            c.tested += 1;
            if let Some(r) = f(stack).into_iter().find(|r| !r.is_empty()) {
                let labels: Vec<&str> = stack.iter().map(|i| i.label.as_str()).collect();
                c.violation(format!("({}): residual {}", labels.join(", "), fmt_elem(&r)));
            }
            return;
        }
        for it in lists[pos] {
            if let Some(s) = self.extend_sums(sums, &it.deg) {
                stack.push(it);
                self.dfs(lists, pos + 1, &s, stack, f, c);
                stack.pop();
            }
        }
    }
}

fn comb(terms: &[(i64, Elem)]) -> Elem {
    let mut out = Elem::new();
    for (c, v) in terms {
        axpy(&mut out, &qi(*c), v);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Side {
    G,
    S,
}

#[derive(Clone)]
struct Witness {
    left: Side,
    right: Side,
    i: usize,
    j: usize,
    /// Coordinates of the `𝔤`-part and `𝔰`-part matrices of the bracket.
    p: SparseVec<usize>,
    q: SparseVec<usize>,
}

fn side_roots(model: &SymplecticModel, side: Side) -> Vec<usize> {
    match side {
        Side::G => (0..model.datum.roots.len()).collect(),
        Side::S => (0..model.s.len()).filter(|&i| !model.s_weight[i].is_zero()).collect(),
    }
}

fn side_weight(model: &SymplecticModel, side: Side, i: usize) -> &Weight {
    match side {
        Side::G => &model.g_weight[i],
        Side::S => &model.s_weight[i],
    }
}

fn side_matrix(model: &SymplecticModel, side: Side, i: usize) -> String {
    match side {
        Side::G => format!("{:?}", model.g[i]),
        Side::S => format!("{:?}", model.s[i]),
    }
}

fn pair_parts(model: &SymplecticModel, left: Side, right: Side, i: usize, j: usize) -> (SparseVec<usize>, SparseVec<usize>) {
    match (left, right) {
        (Side::G, Side::G) => (model.gg_bracket[i][j].clone(), model.gg_circ[i][j].clone()),
        (Side::G, Side::S) => (model.gs_circ[i][j].clone(), model.gs_bracket[i][j].clone()),
        (Side::S, Side::S) => (model.ss_bracket[i][j].clone(), model.ss_circ[i][j].clone()),
        (Side::S, Side::G) => unreachable!("mixed pairs are taken in (𝔤, 𝔰) order"),
    }
}

/// Root-vector pairs whose bracket lands in a root cell with a nonzero `𝔤`
/// part and, when possible, a nonzero `𝔰` part; falls back to one pair for each.
fn find_witnesses(model: &SymplecticModel, left: Side, right: Side) -> Vec<Witness> {
    let mut cands = Vec::new();
    for &i in &side_roots(model, left) {
        for &j in &side_roots(model, right) {
            let w = side_weight(model, left, i).add(side_weight(model, right, j));
            if w.is_zero() || !model.datum.is_root(&w) {
                continue;
            }
            let (p, q) = pair_parts(model, left, right, i, j);
            if !p.is_empty() || !q.is_empty() {
                cands.push(Witness { left, right, i, j, p, q });
            }
        }
    }
    if let Some(c) = cands.iter().find(|c| !c.p.is_empty() && !c.q.is_empty()) {
        return vec![c.clone()];
    }
    let mut out = Vec::new();
    out.extend(cands.iter().find(|c| !c.p.is_empty()).cloned());
    out.extend(cands.iter().find(|c| !c.q.is_empty()).cloned());
    out
}

type Recipe = Vec<(Q, Vec<usize>)>;

/// Expresses every basis vector of `𝔤` (or `𝔰`) as a combination of iterated
/// brackets `[[v₀, e_{k₁}], e_{k₂}], …` of a start vector with root vectors.
fn recipes(model: &SymplecticModel, side: Side, start: usize) -> Result<Vec<Recipe>> {
    let dim = match side {
        Side::G => model.dim_g(),
        Side::S => model.dim_s(),
    };
    let step = |v: &SparseVec<usize>, k: usize| -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (i, c) in v {
            match side {
                Side::G => axpy(&mut out, c, &model.gg_bracket[*i][k]),
                Side::S => axpy(&mut out, &-c.clone(), &model.gs_bracket[k][*i]),
            }
        }
        out
    };
    let mut vecs: Vec<(SparseVec<usize>, Vec<usize>)> = vec![(unit(start), vec![])];
    let mut ech = Echelon::new();
    ech.insert(unit(start));
    let mut head = 0;
    while head < vecs.len() && ech.rank() < dim {
        let (v, chain) = vecs[head].clone();
        head += 1;
        for k in 0..model.datum.roots.len() {
            let w = step(&v, k);
            if w.is_empty() || ech.contains(&w) {
                continue;
            }
            ech.insert(w.clone());
            let mut c = chain.clone();
            c.push(k);
            vecs.push((w, c));
        }
    }
    (0..dim)
        .map(|t| {
            let combo = ech
                .express(&unit(t))
                .ok_or_else(|| Error::InternalInconsistency(format!("basis vector {t} not reached by transport")))?;
            Ok(combo.into_iter().map(|(i, c)| (c, vecs[i].1.clone())).collect())
        })
        .collect()
}

type ChainKey = (Side, GroupElement, usize, Vec<usize>);

/// `x⊗a` and `s⊗b` for arbitrary basis matrices, obtained from the base
/// cells by brackets with `𝔤⊗1`.
struct Transport<'a> {
    lie: &'a dyn GradedLie,
    model: Arc<SymplecticModel>,
    embed: Vec<LieElem>,
    recipe_g: Vec<Recipe>,
    recipe_s: Vec<Recipe>,
    long: Weight,
    b_base: HashMap<GroupElement, Vec<LieElem>>,
    chains: HashMap<ChainKey, LieElem>,
    memo: HashMap<(Side, usize, GroupElement, usize), LieElem>,
}

impl Transport<'_> {
    fn chain(&mut self, side: Side, g: &GroupElement, j: usize, chain: &[usize]) -> Result<LieElem> {
        let key = (side, g.clone(), j, chain.to_vec());
        if let Some(v) = self.chains.get(&key) {
            return Ok(v.clone());
        }
        let v = match chain.split_last() {
            None => match side {
                Side::G => unit(LieKey::new(self.long.clone(), g.clone(), j as u32)),
                Side::S => self.b_base[g][j].clone(),
            },
            Some((&k, rest)) => {
                let prev = self.chain(side, g, j, rest)?;
                self.lie.bracket_elems(&prev, &self.embed[k])?
            }
        };
        self.chains.insert(key, v.clone());
        Ok(v)
    }

    fn iota(&mut self, side: Side, i: usize, g: &GroupElement, j: usize) -> Result<LieElem> {
        let key = (side, i, g.clone(), j);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let recipe = match side {
            Side::G => self.recipe_g[i].clone(),
            Side::S => self.recipe_s[i].clone(),
        };
        let mut out = LieElem::new();
        for (c, chain) in &recipe {
            let v = self.chain(side, g, j, chain)?;
            axpy(&mut out, c, &v);
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn iota_vec(&mut self, side: Side, coords: &SparseVec<usize>, g: &GroupElement, j: usize) -> Result<LieElem> {
        let mut out = LieElem::new();
        for (i, c) in coords {
            let v = self.iota(side, *i, g, j)?;
            axpy(&mut out, c, &v);
        }
        Ok(out)
    }

    fn step(&self, side: Side, i: usize, k: usize) -> SparseVec<usize> {
        match side {
            Side::G => self.model.gg_bracket[i][k].clone(),
            Side::S => scaled(&-Q::one(), &self.model.gs_bracket[k][i]),
        }
    }
}

fn not_coord(msg: String) -> Error {
    Error::NotCoordinatizable(msg)
}

/// Extracts the coordinate algebra of `lie`.
///
/// Errors with `NotCoordinatizable` when a root cell is not `𝔤_μ⊗A ⊕ 𝔰_μ⊗B`,
/// when the transported copies depend on the root, or when a bracket leaves
/// the expected span. `domain` defaults to the algebra's window.
pub fn extract_coordinates(lie: &dyn GradedLie, domain: Option<Window>) -> Result<CoordinateBundle> {
    let r = lie.rank();
    if r < 2 {
        return Err(Error::RankTooSmall(r));
    }
    let spec = lie.spec().clone();
    let domain = if spec.is_finite() { None } else { Some(domain.or(lie.window()).ok_or(Error::WindowRequired)?) };
    let degrees = match &domain {
        None => spec.elements()?,
        Some(w) => spec.window_elements(w),
    };
    let model = lie.model()?;
    let long = Weight::pair(r, 1, 1, 1, 1);
    let short = Weight::pair(r, 1, 1, 2, 1);
    let lowering = Weight::pair(r, 1, 1, 2, -1);
    let gi_long = model.g_index(&long).ok_or_else(|| Error::InvalidRoot(format!("{long:?}")))?;
    let si_short = model.s_index(&short).ok_or_else(|| Error::InvalidRoot(format!("{short:?}")))?;
    let gi_low = model.g_index(&lowering).ok_or_else(|| Error::InvalidRoot(format!("{lowering:?}")))?;
    let embed = (0..model.dim_g()).map(|i| lie.embed_g(i)).collect::<Result<Vec<_>>>()?;

    let mut dims = BTreeMap::new();
    let mut b_base = HashMap::new();
    for g in &degrees {
        let na = lie.dim(&long, g);
        let cell = lie.keys_at(&short, g);
        let images = cell
            .iter()
            .map(|k| lie.bracket_elems(&unit(k.clone()), &embed[gi_low]))
            .collect::<Result<Vec<_>>>()?;
        let ker = kernel(&images);
        let base: Vec<LieElem> = ker.iter().map(|c| c.iter().map(|(i, x)| (cell[*i].clone(), x.clone())).collect()).collect();
        if na + base.len() != cell.len() {
            return Err(not_coord(format!(
                "cell ({short:?}, {g}) has dimension {} but |A| = {na}, |B| = {}",
                cell.len(),
                base.len()
            )));
        }
        dims.insert(g.clone(), (na, base.len()));
        b_base.insert(g.clone(), base);
    }

    let mut t = Transport {
        lie,
        model: model.clone(),
        embed,
        recipe_g: recipes(&model, Side::G, gi_long)?,
        recipe_s: recipes(&model, Side::S, si_short)?,
        long: long.clone(),
        b_base,
        chains: HashMap::new(),
        memo: HashMap::new(),
    };

    let zero = spec.zero();
    let unit_lie = t.embed[gi_long].clone();
    let na0 = dims.get(&zero).map(|d: &(usize, usize)| d.0).unwrap_or(0);
    let mut one = Elem::new();
    for (k, c) in &unit_lie {
        if k.weight != long || k.degree != zero || k.idx as usize >= na0 {
            return Err(not_coord(format!("x_{{2ε₁}}⊗1 has a term {k} outside its cell")));
        }
        one.insert(Key::new(zero.clone(), k.idx), c.clone());
    }

    for g in &degrees {
        check_cells(&mut t, g, dims[g])?;
        check_module(&mut t, g, dims[g])?;
    }

    let wit_gg = find_witnesses(&model, Side::G, Side::G);
    let wit_gs = find_witnesses(&model, Side::G, Side::S);
    let wit_ss = find_witnesses(&model, Side::S, Side::S);
    let skew_on_b = wit_ss.iter().any(|w| !w.q.is_empty());
    let mut witnesses = Vec::new();
    for w in wit_gg.iter().chain(&wit_gs).chain(&wit_ss) {
        witnesses.push(format!(
            "[{}, {}] -> 𝔤 part {}, 𝔰 part {}",
            side_matrix(&model, w.left, w.i),
            side_matrix(&model, w.right, w.j),
            if w.p.is_empty() { "0" } else { "nonzero" },
            if w.q.is_empty() { "0" } else { "nonzero" },
        ));
    }

    let keys: Vec<Key> = {
        let mut out = Vec::new();
        for (g, &(na, nb)) in &dims {
            out.extend((0..(na + nb) as u32).map(|s| Key::new(g.clone(), s)));
        }
        out
    };
    let is_a = |k: &Key| (k.slot as usize) < dims[&k.deg].0;
    let local = |k: &Key| if is_a(k) { k.slot as usize } else { k.slot as usize - dims[&k.deg].0 };
    let in_domain = |g: &GroupElement| domain.as_ref().is_none_or(|w| w.contains(&spec, g));

    let mut circ: HashMap<(Key, Key), Elem> = HashMap::new();
    let mut comm: HashMap<(Key, Key), Elem> = HashMap::new();
    let put = |m: &mut HashMap<(Key, Key), Elem>, x: &Key, y: &Key, v: Elem| {
        if !v.is_empty() {
            m.insert((x.clone(), y.clone()), v);
        }
    };
    for x in &keys {
        for y in &keys {
            let k = spec.add(&x.deg, &y.deg);
            if !in_domain(&k) {
                continue;
            }
            let wits = match (is_a(x), is_a(y)) {
                (true, true) => &wit_gg,
                (true, false) => &wit_gs,
                (false, true) => continue,
                (false, false) => &wit_ss,
            };
            for w in wits {
                let (al, be) = read_bracket(&mut t, w, x, local(x), y, local(y), &k, dims[&k])?;
                match (is_a(x), is_a(y)) {
                    (true, true) => {
                        if let Some(v) = al {
                            put(&mut circ, x, y, v);
                        }
                        if let Some(v) = be {
                            put(&mut comm, x, y, v);
                        }
                    }
                    (true, false) => {
                        if let Some(v) = al {
                            put(&mut comm, y, x, scaled(&-Q::one(), &v));
                            put(&mut comm, x, y, v);
                        }
                        if let Some(v) = be {
                            put(&mut circ, y, x, v.clone());
                            put(&mut circ, x, y, v);
                        }
                    }
                    _ => {
                        if let Some(v) = al {
                            put(&mut circ, x, y, v);
                        }
                        if let Some(v) = be {
                            put(&mut comm, x, y, v);
                        }
                    }
                }
            }
        }
    }

    let mut images = BTreeMap::new();
    for x in &keys {
        let side = if is_a(x) { Side::G } else { Side::S };
        let i = if is_a(x) { gi_long } else { si_short };
        images.insert(x.clone(), t.iota(side, i, &x.deg, local(x))?);
    }
    CoordinateBundle::assemble(r, spec, domain, dims, circ, comm, skew_on_b, one, witnesses, images)
}

/// Decomposes `[ι(w.left, x), ι(w.right, y)]` in its cell and returns twice
/// the `A`- and `B`-coefficients.
#[allow(clippy::too_many_arguments)]
fn read_bracket(
    t: &mut Transport<'_>,
    w: &Witness,
    x: &Key,
    jx: usize,
    y: &Key,
    jy: usize,
    k: &GroupElement,
    (na, nb): (usize, usize),
) -> Result<(Option<Elem>, Option<Elem>)> {
    let xv = t.iota(w.left, w.i, &x.deg, jx)?;
    let yv = t.iota(w.right, w.j, &y.deg, jy)?;
    let v = t.lie.bracket_elems(&xv, &yv)?;
    let mut images = Vec::new();
    if !w.p.is_empty() {
        for j in 0..na {
            images.push(t.iota_vec(Side::G, &w.p, k, j)?);
        }
    }
    if !w.q.is_empty() {
        for l in 0..nb {
            images.push(t.iota_vec(Side::S, &w.q, k, l)?);
        }
    }
    let sol = solve(&images, &v)
        .ok_or_else(|| not_coord(format!("bracket for ({x}, {y}) leaves the coordinate span: {}", fmt_lie(&v))))?;
    let two = qi(2);
    let mut pos = 0;
    let al = (!w.p.is_empty()).then(|| {
        let e: Elem = (0..na)
            .filter(|j| !sol[j + pos].is_zero())
            .map(|j| (Key::new(k.clone(), j as u32), &two * &sol[j]))
            .collect();
        pos += na;
        e
    });
    let be = (!w.q.is_empty()).then(|| {
        (0..nb)
            .filter(|l| !sol[l + pos].is_zero())
            .map(|l| (Key::new(k.clone(), (na + l) as u32), &two * &sol[l + pos]))
            .collect::<Elem>()
    });
    Ok((al, be))
}

/// Each root cell must be exactly `ι(x_μ⊗A^g) ⊕ ι(s_μ⊗B^g)`, and the
/// zero-weight images must be independent.
fn check_cells(t: &mut Transport<'_>, g: &GroupElement, (na, nb): (usize, usize)) -> Result<()> {
    let model = t.model.clone();
    let r = model.r;
    let mut cells: Vec<(Weight, Vec<LieElem>)> = Vec::new();
    for mu in &model.datum.roots {
        let mut imgs = Vec::new();
        let gi = model.g_index(mu).expect("root");
        for j in 0..na {
            imgs.push(t.iota(Side::G, gi, g, j)?);
        }
        if let Some(si) = model.s_index(mu) {
            for k in 0..nb {
                imgs.push(t.iota(Side::S, si, g, k)?);
            }
        }
        cells.push((mu.clone(), imgs));
    }
    let mut imgs = Vec::new();
    for i in 0..r {
        for j in 0..na {
            imgs.push(t.iota(Side::G, model.h_index(i), g, j)?);
        }
    }
    for i in 0..r - 1 {
        for k in 0..nb {
            imgs.push(t.iota(Side::S, model.s_zero_index(i), g, k)?);
        }
    }
    cells.push((Weight::zero(r), imgs));
    for (mu, imgs) in cells {
        if let Some(k) = imgs.iter().flat_map(|v| v.keys()).find(|k| k.weight != mu || &k.degree != g) {
            return Err(not_coord(format!("transported vector for ({mu:?}, {g}) has a term {k}")));
        }
        let rank = Echelon::from_vectors(imgs.iter()).rank();
        let dim = t.lie.dim(&mu, g);
        let exact = !mu.is_zero();
        if rank != imgs.len() || (exact && rank != dim) || rank > dim {
            return Err(not_coord(format!(
                "cell ({mu:?}, {g}): transported copies have rank {rank} of {} against dimension {dim}",
                imgs.len()
            )));
        }
    }
    Ok(())
}

/// `[ι(m⊗c), e⊗1] = ι([m, e]⊗c)` for all basis matrices.
fn check_module(t: &mut Transport<'_>, g: &GroupElement, (na, nb): (usize, usize)) -> Result<()> {
    let model = t.model.clone();
    for (side, n, count) in [(Side::G, model.dim_g(), na), (Side::S, model.dim_s(), nb)] {
        for i in 0..n {
            for j in 0..count {
                let v = t.iota(side, i, g, j)?;
                for k in 0..model.dim_g() {
                    let lhs = t.lie.bracket_elems(&v, &t.embed[k])?;
                    let rhs = t.iota_vec(side, &t.step(side, i, k), g, j)?;
                    if lhs != rhs {
                        return Err(not_coord(format!(
                            "transport is not 𝔤-equivariant at degree {g}: basis {i} of {side:?}, generator {k}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `B = [A, A] ⊕ B₀` with `B₀` the centralizer of `A` in `B`.
#[derive(Debug, Clone)]
pub struct SplitB {
    pub commutators: BTreeMap<GroupElement, Vec<Elem>>,
    pub centralizer: BTreeMap<GroupElement, Vec<Elem>>,
    /// Basis vectors `b = [a₁, a₂]` of `[A, A]` with their factors.
    pub factorizations: Vec<(Elem, Key, Key)>,
    pub check: Check,
}

pub fn split_b(bundle: &CoordinateBundle) -> SplitB {
    let spec = &bundle.spec;
    let a_keys = bundle.a_keys();
    let mut out = SplitB {
        commutators: BTreeMap::new(),
        centralizer: BTreeMap::new(),
        factorizations: Vec::new(),
        check: Check::new("B splits as [A,A] plus the centralizer of A").with_scope(bundle.scope()),
    };
    for g in bundle.degrees() {
        let (na, nb) = bundle.dims_at(&g);
        if nb == 0 {
            continue;
        }
        out.check.tested += 1;
        let mut ech = Echelon::new();
        let mut comms = Vec::new();
        for a1 in &a_keys {
            for a2 in &a_keys {
                if spec.add(&a1.deg, &a2.deg) != g || !bundle.fits(&[&a1.deg, &a2.deg]) {
                    continue;
                }
                let v = bundle.comm(&unit(a1.clone()), &unit(a2.clone()));
                if !v.is_empty() && ech.insert(v.clone()).is_none() {
                    out.factorizations.push((v.clone(), a1.clone(), a2.clone()));
                    comms.push(v);
                }
            }
        }
        let bs: Vec<Key> = (na..na + nb).map(|s| Key::new(g.clone(), s as u32)).collect();
        let sigs: Vec<SparseVec<(Key, Key)>> = bs
            .iter()
            .map(|b| {
                let mut s = SparseVec::new();
                for a in &a_keys {
                    if bundle.fits(&[&g, &a.deg]) {
                        for (o, c) in bundle.comm(&unit(b.clone()), &unit(a.clone())) {
                            s.insert((a.clone(), o), c);
                        }
                    }
                }
                s
            })
            .collect();
        let cent: Vec<Elem> =
            kernel(&sigs).into_iter().map(|c| c.into_iter().map(|(i, x)| (bs[i].clone(), x)).collect()).collect();
        let total = Echelon::from_vectors(comms.iter().chain(cent.iter())).rank();
        if total != comms.len() + cent.len() || total != nb {
            out.check.violation(format!(
                "degree {g}: dim [A,A] = {}, dim B₀ = {}, dim B = {nb}, rank of sum {total}",
                comms.len(),
                cent.len()
            ));
        }
        if !comms.is_empty() {
            out.commutators.insert(g.clone(), comms);
        }
        if !cent.is_empty() {
            out.centralizer.insert(g.clone(), cent);
        }
    }
    out
}

/// Whether `S₊` is a subgroup; inside a window, whether it is the trace of
/// the subgroup it generates.
pub fn s_plus_is_subgroup(bundle: &CoordinateBundle) -> Result<bool> {
    let sp = bundle.s_plus();
    match &bundle.domain {
        None => is_subgroup(&bundle.spec, &sp),
        Some(w) => {
            let h = subgroup_generated(&bundle.spec, &sp)?;
            let set: BTreeSet<&GroupElement> = sp.iter().collect();
            Ok(h.elements_in_window(w).iter().all(|g| set.contains(g)))
        }
    }
}

/// How `[B, B]` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewCase {
    /// Read off the Lie algebra (rank at least 3).
    Extracted,
    /// `S₊` is a subgroup and `[B, B] := 0`.
    Vanishing,
    /// `[b, b'] := φ⁻¹(4 D_{b,b'})` with `φ(c) = [c, ·]` on `A`.
    Derivation,
}

/// Completes a rank-2 bundle with a skew product on `B`.
pub fn define_skew_product(bundle: &CoordinateBundle, split: &SplitB) -> Result<(CoordinateBundle, SkewCase)> {
    if bundle.skew_on_b {
        return Ok((bundle.clone(), SkewCase::Extracted));
    }
    let mut out = bundle.clone();
    out.skew_on_b = true;
    if s_plus_is_subgroup(bundle)? {
        for x in bundle.b_keys() {
            for y in bundle.b_keys() {
                out.comm.remove(&(x.clone(), y));
            }
        }
        out.rebuild()?;
        return Ok((out, SkewCase::Vanishing));
    }
    if !split.check.passed() {
        return Err(Error::LemmaViolation(format!("B does not split: {}", split.check.witnesses.join("; "))));
    }
    let spec = &bundle.spec;
    let mut proj: HashMap<Key, Elem> = HashMap::new();
    for g in bundle.degrees() {
        let comms = split.commutators.get(&g).cloned().unwrap_or_default();
        let cent = split.centralizer.get(&g).cloned().unwrap_or_default();
        let ech = Echelon::from_vectors(comms.iter().chain(cent.iter()));
        let (na, nb) = bundle.dims_at(&g);
        for s in na..na + nb {
            let b = Key::new(g.clone(), s as u32);
            let combo = ech
                .express(&unit(b.clone()))
                .ok_or_else(|| Error::LemmaViolation(format!("{b} not in [A,A] + B₀")))?;
            let mut p = Elem::new();
            for (i, c) in combo {
                if i < comms.len() {
                    axpy(&mut p, &c, &comms[i]);
                }
            }
            proj.insert(b, p);
        }
    }
    let a_keys = bundle.a_keys();
    let b_keys = bundle.b_keys();
    for x in &b_keys {
        for y in &b_keys {
            if !bundle.fits(&[&x.deg, &y.deg]) {
                continue;
            }
            let (p, p2) = (&proj[x], &proj[y]);
            if p.is_empty() || p2.is_empty() {
                continue;
            }
            let k = spec.add(&x.deg, &y.deg);
            let avail: Vec<&Key> = a_keys.iter().filter(|a| bundle.fits(&[&x.deg, &y.deg, &a.deg])).collect();
            let d = bundle.der(p, p2);
            let mut target = SparseVec::new();
            for a in &avail {
                for (o, c) in d.apply_key(a) {
                    target.insert(((*a).clone(), o), qi(4) * c);
                }
            }
            if target.is_empty() {
                continue;
            }
            let basis = split.commutators.get(&k).cloned().unwrap_or_default();
            let images: Vec<SparseVec<(Key, Key)>> = basis
                .iter()
                .map(|c| {
                    let mut s = SparseVec::new();
                    for a in &avail {
                        for (o, v) in bundle.comm(c, &unit((*a).clone())) {
                            s.insert(((*a).clone(), o), v);
                        }
                    }
                    s
                })
                .collect();
            if Echelon::from_vectors(images.iter()).rank() != images.len() {
                return Err(Error::LemmaViolation(format!("ad restricted to A is not injective on [A,A] at degree {k}")));
            }
            let sol = solve(&images, &target)
                .ok_or_else(|| Error::LemmaViolation(format!("4D({x}, {y}) is not an inner derivation by [A,A]")))?;
            let mut v = Elem::new();
            for (c, b) in sol.iter().zip(&basis) {
                axpy(&mut v, c, b);
            }
            out.set_comm(x, y, v);
        }
    }
    out.rebuild()?;
    Ok((out, SkewCase::Derivation))
}

fn require_rank_two(bundle: &CoordinateBundle) -> Result<()> {
    if bundle.rank != 2 {
        return Err(Error::Config(format!("rank-2 identity battery requested for rank {}", bundle.rank)));
    }
    Ok(())
}

/// The fourteen identities satisfied by the coordinates of any Lie algebra
/// graded by `C₂`, each swept over all basis tuples.
pub fn seligman_suite(bundle: &CoordinateBundle) -> Result<Report> {
    require_rank_two(bundle)?;
    let a = bundle.items(bundle.a_keys());
    let b = bundle.items(bundle.b_keys());
    let all = bundle.items(bundle.keys());
    let c = |x: &Elem, y: &Elem| bundle.circ(x, y);
    let k = |x: &Elem, y: &Elem| bundle.comm(x, y);
    let d4 = |u: &Elem, v: &Elem, x: &Elem| scaled(&qi(4), &bundle.der(u, v).apply(x));
    let d = |u: &Elem, v: &Elem, x: &Elem| bundle.der(u, v).apply(x);
    let (a, b, all) = (&a[..], &b[..], &all[..]);
    let mut rep = Report::new();

    rep.push(bundle.tuple_check("A: circ associator against double commutator", &[a, a, a], |t| {
        let (x, x1, x2) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, c(x, &c(x2, x1))), (-1, c(x2, &c(x, x1))), (-1, k(x, &k(x2, x1))), (1, k(x2, &k(x, x1)))])]
    }));
    rep.push(bundle.tuple_check("A: commutator with a circ product", &[a, a, a], |t| {
        let (x, x1, x2) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(x, &c(x1, x2))), (-1, c(&k(x, x1), x2)), (1, c(&k(x2, x), x1))])]
    }));
    rep.push(bundle.tuple_check("A: double commutator as circ terms and derivation", &[a, a, a], |t| {
        let (x1, x2, x) = (&t[0].x, &t[1].x, &t[2].x);
        let lhs = k(&k(x1, x2), x);
        vec![
            comb(&[(1, lhs.clone()), (-1, c(x1, &c(x2, x))), (1, c(x2, &c(x, x1)))]),
            comb(&[(1, lhs), (-1, d4(x1, x2, x))]),
        ]
    }));
    rep.push(bundle.tuple_check("derivations: commutator in A against B", &[a, a, b, all], |t| {
        let (x, x1, y, z) = (&t[0].x, &t[1].x, &t[2].x, &t[3].x);
        vec![comb(&[(1, d(&k(x, x1), y, z)), (-1, d(&k(y, x1), x, z)), (1, d(&k(y, x), x1, z))])]
    }));
    rep.push(bundle.tuple_check("B with A: commutator with a circ product", &[b, a, a], |t| {
        let (y, x, x1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(y, &c(x, x1))), (-1, c(&k(y, x), x1)), (1, c(&k(x1, y), x))])]
    }));
    rep.push(bundle.tuple_check("B with A: commutator of a circ product", &[b, a, a], |t| {
        let (y, x, x1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(&c(y, x), x1)), (-1, k(y, &c(x, x1))), (-1, c(y, &k(x, x1))), (1, c(&k(y, x), x1))])]
    }));
    rep.push(bundle.tuple_check("B with A: circ with a commutator", &[b, a, a], |t| {
        let (y, x, x1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, c(x1, &k(y, x))), (-1, c(y, &k(x, x1))), (-1, k(&c(y, x1), x))])]
    }));
    rep.push(bundle.tuple_check("A-pair derivation on B", &[a, a, b], |t| {
        let (x, x1, y) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, d4(x, x1, y)), (-1, k(x, &k(x1, y))), (1, k(x1, &k(x, y)))])]
    }));
    rep.push(bundle.tuple_check("A with B: double commutator as circ associator", &[a, b, a], |t| {
        let (x, y, x1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(x, &k(y, x1))), (-1, c(&c(y, x), x1)), (1, c(y, &c(x, x1)))])]
    }));
    rep.push(bundle.tuple_check("derivations: cyclic sum over B circ products", &[b, b, a, all], |t| {
        let (y, y1, x, z) = (&t[0].x, &t[1].x, &t[2].x, &t[3].x);
        vec![comb(&[(1, d(&c(y, y1), x, z)), (1, d(&c(y1, x), y, z)), (1, d(&c(y, x), y1, z))])]
    }));
    rep.push(bundle.tuple_check("B-pair derivation on A", &[b, b, a], |t| {
        let (y, y1, x) = (&t[0].x, &t[1].x, &t[2].x);
        let dd = d4(y, y1, x);
        vec![
            comb(&[(1, c(y, &c(y1, x))), (-1, c(y1, &c(y, x))), (-1, dd.clone())]),
            comb(&[(1, dd), (-1, k(y, &k(y1, x))), (1, k(y1, &k(y, x)))]),
        ]
    }));
    rep.push(bundle.tuple_check("A circ a B circ product", &[a, b, b], |t| {
        let (x, y, y1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[
            (2, c(x, &c(y, y1))),
            (-1, c(y, &c(y1, x))),
            (-1, c(y1, &c(y, x))),
            (-1, k(y, &k(y1, x))),
            (-1, k(y1, &k(y, x))),
        ])]
    }));
    rep.push(bundle.tuple_check("A: commutator with a B circ product", &[a, b, b], |t| {
        let (x, y, y1) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(x, &c(y, y1))), (-1, c(&k(x, y), y1)), (1, c(&k(y1, x), y))])]
    }));
    rep.push(bundle.tuple_check("B: cyclic commutator with circ products", &[b, b, b], |t| {
        let (y, y1, y2) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(1, k(y, &c(y1, y2))), (1, k(y1, &c(y2, y))), (1, k(y2, &c(y, y1)))])]
    }));
    Ok(rep)
}

/// The structural lemmas on a rank-2 bundle: derivations from `B`-pairs,
/// nonvanishing of homogeneous products, the splitting of `B`, the subgroup
/// criteria, and the behaviour of the centralizer.
pub fn lemma_checks(bundle: &CoordinateBundle) -> Result<Report> {
    require_rank_two(bundle)?;
    let split = split_b(bundle);
    let subgroup = s_plus_is_subgroup(bundle)?;
    let (full, _) = define_skew_product(bundle, &split)?;
    let a = bundle.items(bundle.a_keys());
    let b = bundle.items(bundle.b_keys());
    let all = bundle.items(bundle.keys());
    let cent = bundle.items_of(&split.centralizer, "z");
    let (a, b, all, cent) = (&a[..], &b[..], &all[..], &cent[..]);
    let c = |x: &Elem, y: &Elem| bundle.circ(x, y);
    let k = |x: &Elem, y: &Elem| bundle.comm(x, y);
    let d = |u: &Elem, v: &Elem, x: &Elem| bundle.der(u, v).apply(x);
    let mut rep = Report::new();

    rep.push(bundle.tuple_check("B-pair derivation is a commutator of A-pair derivations", &[a, a, a, a, a], |t| {
        let (x1, x2, x3, x4, x) = (&t[0].x, &t[1].x, &t[2].x, &t[3].x, &t[4].x);
        let (u, v) = (scaled(&half(), &k(x1, x2)), scaled(&half(), &k(x3, x4)));
        let rhs = comb(&[(1, d(x1, x2, &d(x3, x4, x))), (-1, d(x3, x4, &d(x1, x2, x)))]);
        vec![comb(&[(1, d(&u, &v, x)), (-1, rhs)])]
    }));

    let nonvanishing = |name: &str, l: &[Item], r: &[Item]| {
        let mut ch = Check::new(name).with_scope(bundle.scope());
        for x in l {
            for y in r {
                if !bundle.fits(&[&x.deg, &y.deg]) {
                    continue;
                }
                ch.tested += 1;
                if c(&x.x, &y.x).is_empty() && k(&x.x, &y.x).is_empty() {
                    ch.violation(format!("{} and {}", x.label, y.label));
                }
            }
        }
        ch
    };
    rep.push(nonvanishing("homogeneous A-A products do not both vanish", a, a));
    rep.push(nonvanishing("homogeneous A-B products do not both vanish", a, b));

    rep.push(split.check.clone());
    let mut fac = Check::new("commutator basis vectors factor as [a1, a2]").with_scope(bundle.scope());
    for (v, a1, a2) in &split.factorizations {
        fac.tested += 1;
        if &bundle.comm(&unit(a1.clone()), &unit(a2.clone())) != v {
            fac.violation(format!("{} != [{a1}, {a2}]", fmt_elem(v)));
        }
    }
    rep.push(fac);

    let ab_zero = bundle.tuple_check("[A,B] = 0", &[a, b], |t| vec![k(&t[0].x, &t[1].x)]).passed();
    let aa_zero = bundle.tuple_check("[A,A] = 0", &[a, a], |t| vec![k(&t[0].x, &t[1].x)]).passed();
    let dot_agrees = bundle
        .tuple_check("A product is the dot product", &[a, a], |t| {
            vec![comb(&[(1, bundle.product(&t[0].x, &t[1].x)), (-1, scaled(&half(), &c(&t[0].x, &t[1].x)))])]
        })
        .passed();
    let dot_assoc = bundle
        .tuple_check("dot product associative on A", &[a, a, a], |t| {
            let dot = |x: &Elem, y: &Elem| scaled(&half(), &c(x, y));
            vec![comb(&[(1, dot(&dot(&t[0].x, &t[1].x), &t[2].x)), (-1, dot(&t[0].x, &dot(&t[1].x, &t[2].x)))])]
        })
        .passed();
    let flags = [subgroup, ab_zero, aa_zero, dot_agrees, dot_assoc];
    let agree = flags.iter().all(|&f| f == subgroup);
    rep.push(
        Check::from_bool("subgroup criteria agree", agree, || {
            format!(
                "S+ subgroup {subgroup}, [A,B]=0 {ab_zero}, [A,A]=0 {aa_zero}, dot equals product {dot_agrees}, dot associative {dot_assoc}"
            )
        })
        .with_scope(bundle.scope()),
    );

    let names = [
        "centralizer derivations vanish on the centralizer",
        "centralizer derivations vanish",
        "centralizer-B derivations vanish",
        "B-pair derivations kill the centralizer",
        "B-pair derivations lie among A-pair derivations",
        "B-pair derivations map B into [A,A]",
        "centralizer is central",
        "symmetric support generates G",
    ];
    if subgroup {
        for n in names {
            rep.push(Check::pass(n).with_note("hypothesis not met: S+ is a subgroup").with_scope(bundle.scope()));
        }
    } else {
        rep.push(bundle.tuple_check(names[0], &[cent, cent, cent], |t| vec![d(&t[0].x, &t[1].x, &t[2].x)]));
        rep.push(bundle.tuple_check(names[1], &[cent, cent, all], |t| vec![d(&t[0].x, &t[1].x, &t[2].x)]));
        rep.push(bundle.tuple_check(names[2], &[cent, b, all], |t| vec![d(&t[0].x, &t[1].x, &t[2].x)]));
        rep.push(bundle.tuple_check(names[3], &[b, b, cent], |t| vec![d(&t[0].x, &t[1].x, &t[2].x)]));
        rep.push(derivations_inside(bundle, names[4])?);
        let comms = split.commutators.clone();
        rep.push(bundle.tuple_check(names[5], &[b, b, b], |t| {
            let v = d(&t[0].x, &t[1].x, &t[2].x);
            let g = bundle.spec.add(&bundle.spec.add(&t[0].deg, &t[1].deg), &t[2].deg);
            let basis = comms.get(&g).cloned().unwrap_or_default();
            if v.is_empty() || Echelon::from_vectors(basis.iter()).contains(&v) {
                vec![]
            } else {
                vec![v]
            }
        }));
        rep.push(full.tuple_check(names[6], &[all, cent], |t| vec![full.comm(&t[0].x, &t[1].x)]));
        let h = subgroup_generated(&bundle.spec, &bundle.s_plus())?;
        let gen = if h.equals_whole_group() {
            Check::pass(names[7])
        } else if bundle.domain.is_some() {
            Check::inconclusive(names[7], "symmetric support inside the window generates a proper subgroup")
        } else {
            Check::fail(names[7], "S+ generates a proper subgroup")
        };
        rep.push(gen.with_scope(bundle.scope()));
    }

    rep.push(bundle.tuple_check("cyclic derivation identity on A", &[a, a, a, all], |t| {
        let (x, x1, x2, z) = (&t[0].x, &t[1].x, &t[2].x, &t[3].x);
        vec![comb(&[(1, d(x, &c(x1, x2), z)), (1, d(x1, &c(x2, x), z)), (1, d(x2, &c(x, x1), z))])]
    }));
    rep.push(full.tuple_check("skew product on B recovers B-pair derivations", &[b, b, a], |t| {
        let (y, y1, x) = (&t[0].x, &t[1].x, &t[2].x);
        vec![comb(&[(4, full.der(y, y1).apply(x)), (-1, full.comm(&full.comm(y, y1), x))])]
    }));
    rep.push(jordan_division(bundle)?);
    let sp: BTreeSet<GroupElement> = bundle.s_plus().into_iter().collect();
    let both: Vec<String> = bundle.s_minus().into_iter().filter(|g| sp.contains(g)).map(|g| g.to_string()).collect();
    rep.push(
        Check::from_bool("symmetric and skew supports are disjoint", both.is_empty(), || both.join(", "))
            .with_scope(bundle.scope()),
    );
    Ok(rep)
}

/// `D_{b,b'} ∈ span{D_{a,a'}}` as operators on the basis.
fn derivations_inside(bundle: &CoordinateBundle, name: &str) -> Result<Check> {
    let spec = &bundle.spec;
    let keys = bundle.keys();
    let a_keys = bundle.a_keys();
    let b_keys = bundle.b_keys();
    let mut ch = Check::new(name).with_scope(bundle.scope());
    for x in &b_keys {
        for y in &b_keys {
            if !bundle.fits(&[&x.deg, &y.deg]) {
                continue;
            }
            ch.tested += 1;
            let shift = spec.add(&x.deg, &y.deg);
            let probes: Vec<&Key> = keys.iter().filter(|z| bundle.fits(&[&x.deg, &y.deg, &z.deg])).collect();
            let sig = |u: &Elem, v: &Elem| -> SparseVec<(Key, Key)> {
                let op = bundle.der(u, v);
                let mut s = SparseVec::new();
                for z in &probes {
                    for (o, c) in op.apply_key(z) {
                        s.insert(((*z).clone(), o), c);
                    }
                }
                s
            };
            let target = sig(&unit(x.clone()), &unit(y.clone()));
            if target.is_empty() {
                continue;
            }
            let mut gens = Vec::new();
            for a1 in &a_keys {
                for a2 in &a_keys {
                    if spec.add(&a1.deg, &a2.deg) == shift
                        && probes.iter().all(|z| bundle.fits(&[&a1.deg, &a2.deg, &z.deg]))
                    {
                        gens.push(sig(&unit(a1.clone()), &unit(a2.clone())));
                    }
                }
            }
            if !Echelon::from_vectors(gens.iter()).contains(&target) {
                ch.violation(format!("D({x}, {y})"));
            }
        }
    }
    Ok(ch)
}

/// Every homogeneous symmetric basis vector is invertible in `(A, ·)`.
fn jordan_division(bundle: &CoordinateBundle) -> Result<Check> {
    let name = "symmetric part is a division Jordan algebra";
    let alg = bundle.jordan_part()?;
    let mut ch = Check::new(name).with_scope(bundle.scope());
    for a in bundle.a_keys() {
        let neg = bundle.spec.neg(&a.deg);
        if bundle.domain.is_some() && !(bundle.fits(&[&a.deg, &a.deg]) && bundle.fits(&[&neg])) {
            continue;
        }
        ch.tested += 1;
        if ga_invert_hom(&alg, Kind::Jordan, &unit(a.clone()))?.is_none() {
            ch.violation(format!("{a} has no inverse"));
        }
    }
    Ok(ch)
}

const TYPES: [&str; 2] = ["A", "B"];

/// Associativity of the completed product, tested through its two
/// symmetric/skew components on every type pattern and directly.
pub fn associativity_check(bundle: &CoordinateBundle) -> Result<Report> {
    if !bundle.skew_on_b {
        return Err(Error::Config("skew product on B is not defined yet".into()));
    }
    let a = bundle.items(bundle.a_keys());
    let b = bundle.items(bundle.b_keys());
    let all = bundle.items(bundle.keys());
    let parts = [&a[..], &b[..]];
    let c = |x: &Elem, y: &Elem| bundle.circ(x, y);
    let k = |x: &Elem, y: &Elem| bundle.comm(x, y);
    let mut rep = Report::new();
    for mask in 0..8usize {
        let sel: Vec<usize> = (0..3).map(|i| (mask >> (2 - i)) & 1).collect();
        let lists = [parts[sel[0]], parts[sel[1]], parts[sel[2]]];
        let tag: String = sel.iter().map(|&i| TYPES[i]).collect();
        rep.push(bundle.tuple_check(&format!("circ associator against double commutator ({tag})"), &lists, |t| {
            let (x, y, z) = (&t[0].x, &t[1].x, &t[2].x);
            vec![comb(&[(1, c(&c(x, y), z)), (-1, c(x, &c(y, z))), (-1, k(x, &k(y, z))), (1, k(&k(x, y), z))])]
        }));
        rep.push(bundle.tuple_check(&format!("commutator-circ exchange ({tag})"), &lists, |t| {
            let (x, y, z) = (&t[0].x, &t[1].x, &t[2].x);
            vec![comb(&[(1, c(&k(x, y), z)), (-1, c(x, &k(y, z))), (-1, k(x, &c(y, z))), (1, k(&c(x, y), z))])]
        }));
    }
    rep.push(associator_check(bundle, "associator vanishes", &all, &all, &all));
    Ok(rep)
}

fn associator_check(bundle: &CoordinateBundle, name: &str, x: &[Item], y: &[Item], z: &[Item]) -> Check {
    bundle.tuple_check(name, &[x, y, z], |t| vec![bundle.alg.associator(&t[0].x, &t[1].x, &t[2].x)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Associative torus with graded involution (a quantum torus).
    Associative,
    /// Alternative, non-associative torus with standard involution (an octonion torus).
    Alternative,
    /// Clifford torus: `A` commutative associative, `[B, B] = 0`.
    Clifford,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Associative => "quantum torus with graded involution",
            Branch::Alternative => "octonion torus with standard involution",
            Branch::Clifford => "Clifford torus",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub branch: Branch,
    pub rank: usize,
    pub skew_case: SkewCase,
    pub evidence: Report,
    pub structure_hash: String,
    pub bundle: CoordinateBundle,
}

/// Decides the branch of an extracted bundle, completing it first in rank 2.
/// Errors with `TheoremViolation` when no branch's identities hold.
pub fn classify(bundle: &CoordinateBundle) -> Result<Classification> {
    let r = bundle.rank;
    let (full, skew_case) = if r == 2 {
        let split = split_b(bundle);
        define_skew_product(bundle, &split)?
    } else {
        (bundle.clone(), SkewCase::Extracted)
    };
    let all = full.items(full.keys());
    let a = full.items(full.a_keys());
    let mut evidence = Report::new();
    let done = |branch, evidence| Classification {
        branch,
        rank: r,
        skew_case,
        evidence,
        structure_hash: full.structure_hash(),
        bundle: full.clone(),
    };

    if skew_case == SkewCase::Vanishing {
        evidence.push(Check::pass("S+ is a subgroup").with_scope(full.scope()));
        let b_items = full.items(full.b_keys());
        evidence.push(full.tuple_check("[B,B] = 0", &[&b_items, &b_items], |t| vec![full.comm(&t[0].x, &t[1].x)]));
        evidence.push(full.tuple_check("[A,A] = 0", &[&a, &a], |t| vec![full.comm(&t[0].x, &t[1].x)]));
        evidence.push(associator_check(&full, "A associative", &a, &a, &a));
        if evidence.all_pass() {
            return Ok(done(Branch::Clifford, evidence));
        }
        return Err(Error::TheoremViolation(format!("S+ is a subgroup but the Clifford identities fail:\n{evidence}")));
    }

    let assoc = associator_check(&full, "associator vanishes", &all, &all, &all);
    let assoc_ok = assoc.passed();
    evidence.push(assoc);
    if assoc_ok {
        if r == 2 {
            evidence.checks.extend(associativity_check(&full)?.checks.into_iter().filter(|c| c.name != "associator vanishes"));
        }
        return Ok(done(Branch::Associative, evidence));
    }
    if r != 3 {
        return Err(Error::TheoremViolation(format!("rank {r} coordinates are not associative:\n{evidence}")));
    }
    let alg = &full.alg;
    evidence.push(full.tuple_check("left alternative", &[&all, &all, &all], |t| {
        let (x, y, z) = (&t[0].x, &t[1].x, &t[2].x);
        let mut s = alg.associator(x, y, z);
        axpy(&mut s, &Q::one(), &alg.associator(y, x, z));
        vec![s]
    }));
    evidence.push(full.tuple_check("right alternative", &[&all, &all, &all], |t| {
        let (x, y, z) = (&t[0].x, &t[1].x, &t[2].x);
        let mut s = alg.associator(x, y, z);
        axpy(&mut s, &Q::one(), &alg.associator(x, z, y));
        vec![s]
    }));
    evidence.push(full.tuple_check("symmetric part in the nucleus", &[&a, &all, &all], |t| {
        let (u, x, y) = (&t[0].x, &t[1].x, &t[2].x);
        vec![alg.associator(u, x, y), alg.associator(x, u, y), alg.associator(x, y, u)]
    }));
    if evidence.failures().all(|c| c.name == "associator vanishes") {
        return Ok(done(Branch::Alternative, evidence));
    }
    Err(Error::TheoremViolation(format!("rank 3 coordinates are neither associative nor alternative:\n{evidence}")))
}

/// Maps the extracted basis back to the coordinates of a constructed
/// `sp₂ᵣ(𝔞)` and compares every product and the involution.
///
/// When `[B, B]` was set to zero because `S₊` is a subgroup, the Lie torus
/// carries no trace of the original commutator on `B`, so products of two
/// skew vectors are compared through their symmetric part `½ x∘y` only.
pub fn round_trip(c: &Classification, lie: &SpLie) -> Result<Check> {
    let bundle = &c.bundle;
    let modulo_skew = c.skew_case == SkewCase::Vanishing;
    let orig = lie.algebra();
    let sigma = lie.involution();
    let mut ident: HashMap<Key, Elem> = HashMap::new();
    for (k, v) in &bundle.images {
        let mut e = Elem::new();
        for (lk, c) in v {
            let a = lie
                .coordinate_of(lk)?
                .ok_or_else(|| Error::InternalInconsistency(format!("{lk} is not a coordinate vector")))?;
            axpy(&mut e, c, &a);
        }
        ident.insert(k.clone(), e);
    }
    let map = |x: &Elem| -> Elem {
        let mut out = Elem::new();
        for (k, c) in x {
            axpy(&mut out, c, &ident[k]);
        }
        out
    };
    let mut ch = Check::new("extracted structure constants match the original algebra").with_scope(bundle.scope());
    let keys = bundle.keys();
    let mut skew_pairs = 0;
    for x in &keys {
        let ux = unit(x.clone());
        ch.tested += 1;
        if map(&bundle.sigma(&ux)) != sigma.apply(&ident[x]) {
            ch.violation(format!("involution on {x}"));
        }
        for y in &keys {
            if !bundle.fits(&[&x.deg, &y.deg]) {
                continue;
            }
            ch.tested += 1;
            let uy = unit(y.clone());
            let got = map(&bundle.product(&ux, &uy));
            let want = if modulo_skew && !bundle.is_symmetric(x) && !bundle.is_symmetric(y) {
                skew_pairs += 1;
                scaled(&half(), &orig.circ(&ident[x], &ident[y]))
            } else {
                orig.mul(&ident[x], &ident[y])
            };
            if got != want {
                ch.violation(format!("{x}·{y}: extracted {} vs original {}", fmt_elem(&got), fmt_elem(&want)));
            }
        }
    }
    if skew_pairs > 0 {
        ch = ch.with_note(format!("{skew_pairs} products of skew vectors compared modulo [B,B]"));
    }
    Ok(ch)
}

/// Human-readable dump of the nonzero structure constants.
pub fn describe(bundle: &CoordinateBundle) -> String {
    let mut out = String::new();
    for (g, (na, nb)) in bundle.dims.iter() {
        out.push_str(&format!("degree {g}: |A| = {na}, |B| = {nb}\n"));
    }
    let keys = bundle.keys();
    for x in &keys {
        for y in &keys {
            let p = bundle.product(&unit(x.clone()), &unit(y.clone()));
            if !p.is_empty() {
                out.push_str(&format!("{x}·{y} = {}\n", fmt_elem(&p)));
            }
        }
    }
    out.push_str(&format!("unit = {}\n", fmt_elem(&bundle.unit)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{clifford_torus, quantum_torus, reversal_involution, CliffordData, CocycleMatrix};
    use crate::sp::{build_sp, SpMode};

    fn klein_quantum() -> (GradedAlgebra, InvolutionMap) {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &qm).unwrap();
        let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
        (alg, sigma)
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
    fn quantum_round_trip_and_branch() {
        let (alg, sigma) = klein_quantum();
        let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
        let bundle = extract_coordinates(&lie, None).unwrap();
        assert_eq!(bundle.a_keys().len(), 3);
        assert_eq!(bundle.b_keys().len(), 1);
        assert!(!bundle.skew_on_b());
        let cl = classify(&bundle).unwrap();
        assert_eq!(cl.branch, Branch::Associative);
        assert_eq!(cl.skew_case, SkewCase::Derivation);
        let rt = round_trip(&cl, &lie).unwrap();
        assert!(rt.passed(), "{rt}");
    }

    #[test]
    fn identities_and_lemmas_on_both_rank_two_branches() {
        for (alg, sigma) in [klein_quantum(), klein_clifford()] {
            let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
            let bundle = extract_coordinates(&lie, None).unwrap();
            let s = seligman_suite(&bundle).unwrap();
            assert_eq!(s.checks.len(), 14);
            assert!(s.all_pass(), "{s}");
            let l = lemma_checks(&bundle).unwrap();
            assert!(l.all_pass(), "{l}");
        }
    }

    #[test]
    fn clifford_branch_has_vanishing_skew_product() {
        let (alg, sigma) = klein_clifford();
        let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
        let cl = classify(&extract_coordinates(&lie, None).unwrap()).unwrap();
        assert_eq!(cl.branch, Branch::Clifford);
        let rt = round_trip(&cl, &lie).unwrap();
        assert!(rt.passed(), "{rt}");
    }

    #[test]
    fn corrupted_constant_breaks_an_identity() {
        let (alg, sigma) = klein_quantum();
        let lie = build_sp(&alg, &sigma, 2, SpMode::Full).unwrap();
        let mut bundle = extract_coordinates(&lie, None).unwrap();
        let spec = bundle.spec.clone();
        let t1 = Key::new(spec.element(&[1, 0]).unwrap(), 0);
        let old = bundle.circ(&unit(t1.clone()), &unit(t1.clone()));
        let mut new = old.clone();
        axpy(&mut new, &Q::one(), bundle.unit().clone().iter().next().map(|(k, _)| unit(k.clone())).as_ref().unwrap());
        bundle.set_circ(&t1, &t1, new).unwrap();
        assert!(seligman_suite(&bundle).unwrap().any_fail());
    }

    #[test]
    fn rank_three_quantum_is_associative() {
        let (alg, sigma) = klein_quantum();
        let lie = build_sp(&alg, &sigma, 3, SpMode::Full).unwrap();
        let bundle = extract_coordinates(&lie, None).unwrap();
        assert!(bundle.skew_on_b());
        let cl = classify(&bundle).unwrap();
        assert_eq!(cl.branch, Branch::Associative);
        assert!(round_trip(&cl, &lie).unwrap().passed());
    }
}
