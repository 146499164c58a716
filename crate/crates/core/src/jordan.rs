//! Jordan algebras with a triangle `(p₁, p₂, q)`: Peirce spaces, the
//! connection involution, the `q`-isotope and the product on the half space
//! `J₁₂` written through `J₁₁`.
//!
//! All routines here need a finite-dimensional `J`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{One, Zero};

use crate::algebra::{
    degree_of, fmt_elem, ga_check_kind, require_involution, split_component, Elem, GradedAlgebra, InvolutionMap, Key,
    Kind, TableRule,
};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::linalg::{axpy, kernel, scaled, sub, unit, Echelon};
use crate::report::{Check, Report};
use crate::scalar::{half, qi, Q};

/// A subspace spanned by homogeneous vectors.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: Vec<Elem>,
    ech: Echelon<Key>,
}

impl Subspace {
    pub fn new(basis: Vec<Elem>) -> Self {
        let ech = Echelon::from_vectors(basis.iter());
        Subspace { basis, ech }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        self.ech.contains(x)
    }

    /// Coefficients of `x` over `basis`.
    pub fn coords(&self, x: &Elem) -> Option<Vec<Q>> {
        let c = self.ech.express(x)?;
        let mut v = vec![Q::zero(); self.len()];
        for (i, q) in c {
            v[i] = q;
        }
        Some(v)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::new(self.basis.iter().chain(&other.basis).cloned().collect())
    }
}

#[derive(Debug, Clone)]
pub struct TriangleJordan {
    pub alg: GradedAlgebra,
    pub p1: Elem,
    pub p2: Elem,
    pub q: Elem,
}

impl TriangleJordan {
    /// Checks `p₁² = p₁`, `p₂² = p₂`, `p₁p₂ = 0`, `p₁q = p₂q = ½q` and
    /// `q² = p₁ + p₂ = 1`.
    pub fn new(alg: GradedAlgebra, p1: Elem, p2: Elem, q: Elem) -> Result<Self> {
        if alg.kind != Kind::Jordan {
            return Err(Error::KindMismatch(format!("a triangle needs a Jordan algebra, got {}", alg.kind)));
        }
        if !alg.is_finite() {
            return Err(Error::UnsupportedForInfiniteGroup(alg.spec().free_rank));
        }
        let one = alg.unit().ok_or(Error::NoUnit)?;
        let m = |x: &Elem, y: &Elem| alg.mul(x, y);
        let hq = scaled(&half(), &q);
        let p12 = crate::linalg::add(&p1, &p2);
        let rels = [
            ("p1^2 = p1", m(&p1, &p1) == p1),
            ("p2^2 = p2", m(&p2, &p2) == p2),
            ("p1 p2 = 0", m(&p1, &p2).is_empty()),
            ("p1 q = q/2", m(&p1, &q) == hq),
            ("p2 q = q/2", m(&p2, &q) == hq),
            ("q^2 = p1 + p2", m(&q, &q) == p12),
            ("p1 + p2 = 1", p12 == one),
        ];
        if let Some((name, _)) = rels.iter().find(|(_, ok)| !ok) {
            return Err(Error::NotTriangle(format!("relation {name} fails")));
        }
        Ok(TriangleJordan { alg, p1, p2, q })
    }

    fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        self.alg.mul(x, y)
    }

    /// `σ(x) = 2(qx)q − x`.
    pub fn sigma(&self, x: &Elem) -> Elem {
        let mut o = scaled(&qi(2), &self.mul(&self.mul(&self.q, x), &self.q));
        axpy(&mut o, &-Q::one(), x);
        o
    }
}

#[derive(Debug, Clone)]
pub struct Peirce {
    pub j11: Subspace,
    pub j12: Subspace,
    pub j22: Subspace,
}

/// Eigenspaces of `L_{p₁}` for `1`, `½` and `0`, computed per degree.
pub fn peirce(alg: &GradedAlgebra, p1: &Elem) -> Result<Peirce> {
    if !alg.is_finite() {
        return Err(Error::UnsupportedForInfiniteGroup(alg.spec().free_rank));
    }
    if alg.mul(p1, p1) != *p1 {
        return Err(Error::NotPeirce("p1 is not idempotent".into()));
    }
    let mut spaces: [Vec<Elem>; 3] = Default::default();
    let lambdas = [Q::one(), half(), Q::zero()];
    for g in alg.degrees(None)? {
        let keys = alg.keys_at(&g);
        let mut total = 0;
        for (space, lambda) in spaces.iter_mut().zip(&lambdas) {
            let images: Vec<Elem> = keys
                .iter()
                .map(|k| {
                    let x = unit(k.clone());
                    let mut v = alg.mul(p1, &x);
                    axpy(&mut v, &-lambda.clone(), &x);
                    v
                })
                .collect();
            for rel in kernel(&images) {
                space.push(rel.into_iter().map(|(i, c)| (keys[i].clone(), c)).collect());
                total += 1;
            }
        }
        if total != keys.len() {
            return Err(Error::NotPeirce(format!(
                "eigenspaces for 1, 1/2, 0 span {total} of {} dimensions in degree {g}",
                keys.len()
            )));
        }
    }
    let [j11, j12, j22] = spaces;
    Ok(Peirce { j11: Subspace::new(j11), j12: Subspace::new(j12), j22: Subspace::new(j22) })
}

fn containment(name: &str, alg: &GradedAlgebra, xs: &Subspace, ys: &Subspace, target: &Subspace) -> Check {
    let mut c = Check::new(name);
    for x in &xs.basis {
        for y in &ys.basis {
            c.tested += 1;
            let p = alg.mul(x, y);
            if !target.contains(&p) {
                c.violation(format!("({})·({}) = {}", fmt_elem(x), fmt_elem(y), fmt_elem(&p)));
            }
        }
    }
    c
}

/// Multiplication rules of the Peirce spaces and
/// `x₁₁(x₂₂x₁₂) = x₂₂(x₁₁x₁₂)` on basis triples.
pub fn peirce_report(alg: &GradedAlgebra, p: &Peirce) -> Report {
    let zero = Subspace::new(vec![]);
    let diag = p.j11.sum(&p.j22);
    let mut rep = Report::new();
    rep.push(containment("J11 J11 in J11", alg, &p.j11, &p.j11, &p.j11));
    rep.push(containment("J22 J22 in J22", alg, &p.j22, &p.j22, &p.j22));
    rep.push(containment("J11 J22 = 0", alg, &p.j11, &p.j22, &zero));
    rep.push(containment("J11 J12 in J12", alg, &p.j11, &p.j12, &p.j12));
    rep.push(containment("J22 J12 in J12", alg, &p.j22, &p.j12, &p.j12));
    rep.push(containment("J12 J12 in J11 + J22", alg, &p.j12, &p.j12, &diag));
    let mut c = Check::new("x11(x22 x12) = x22(x11 x12)");
    for x in &p.j11.basis {
        for y in &p.j22.basis {
            for z in &p.j12.basis {
                c.tested += 1;
                let v = sub(&alg.mul(x, &alg.mul(y, z)), &alg.mul(y, &alg.mul(x, z)));
                if !v.is_empty() {
                    c.violation(format!("{} | {} | {}: {}", fmt_elem(x), fmt_elem(y), fmt_elem(z), fmt_elem(&v)));
                }
            }
        }
    }
    rep.push(c);
    rep
}

/// The connection involution restricted to `J₁₂`, its eigenspaces
/// `J₁₂^(±)`, and the isomorphism `J₁₁ → J₁₂^(+)`, `x ↦ xq`.
#[derive(Debug, Clone)]
pub struct Connection {
    pub peirce: Peirce,
    pub plus: Subspace,
    pub minus: Subspace,
    times_q: Subspace,
}

fn eigen(t: &TriangleJordan, space: &Subspace, sign: i64) -> Vec<Elem> {
    // Per degree, so that basis vectors stay homogeneous.
    let mut by_deg: BTreeMap<GroupElement, Vec<&Elem>> = BTreeMap::new();
    for v in &space.basis {
        by_deg.entry(degree_of(v).cloned().unwrap_or_else(|| t.alg.spec().zero())).or_default().push(v);
    }
    let mut out = Vec::new();
    for vs in by_deg.values() {
        let images: Vec<Elem> = vs
            .iter()
            .map(|v| {
                let mut s = t.sigma(v);
                axpy(&mut s, &qi(-sign), v);
                s
            })
            .collect();
        for rel in kernel(&images) {
            let mut e = Elem::new();
            for (i, c) in rel {
                axpy(&mut e, &c, vs[i]);
            }
            out.push(e);
        }
    }
    out
}

/// Checks the properties of `σ(x) = 2(qx)q − x` on a basis of `J`.
pub fn connection_report(t: &TriangleJordan, p: &Peirce) -> Result<Report> {
    let basis: Vec<Elem> = t.alg.basis(None)?.into_iter().map(unit).collect();
    let mut rep = Report::new();
    let mut auto = Check::new("sigma is an automorphism");
    let mut order = Check::new("sigma^2 = id");
    let mut lq = Check::new("sigma L_q = L_q sigma = L_q");
    for x in &basis {
        let sx = t.sigma(x);
        order.tested += 1;
        if t.sigma(&sx) != *x {
            order.violation(fmt_elem(x));
        }
        lq.tested += 1;
        let qx = t.mul(&t.q, x);
        if t.sigma(&qx) != qx || t.mul(&t.q, &sx) != qx {
            lq.violation(fmt_elem(x));
        }
        for y in &basis {
            auto.tested += 1;
            if t.sigma(&t.mul(x, y)) != t.mul(&sx, &t.sigma(y)) {
                auto.violation(format!("{} | {}", fmt_elem(x), fmt_elem(y)));
            }
        }
    }
    rep.push(auto);
    rep.push(order);
    rep.push(lq);
    let mut stab = Check::new("sigma stabilizes J12 and swaps J11, J22");
    for (from, to) in [(&p.j12, &p.j12), (&p.j11, &p.j22), (&p.j22, &p.j11)] {
        for x in &from.basis {
            stab.tested += 1;
            if !to.contains(&t.sigma(x)) {
                stab.violation(fmt_elem(x));
            }
        }
    }
    rep.push(stab);
    Ok(rep)
}

/// Builds and verifies the connection involution; any failed property is a
/// [`Error::NotTriangle`].
pub fn connection_involution(t: &TriangleJordan) -> Result<Connection> {
    let p = peirce(&t.alg, &t.p1)?;
    let rep = connection_report(t, &p)?;
    if let Some(c) = rep.failures().next() {
        return Err(Error::NotTriangle(format!("{}: {}", c.name, c.witnesses.first().cloned().unwrap_or_default())));
    }
    let plus = Subspace::new(eigen(t, &p.j12, 1));
    let minus = Subspace::new(eigen(t, &p.j12, -1));
    if plus.len() + minus.len() != p.j12.len() {
        return Err(Error::NotTriangle("J12 is not the sum of the sigma eigenspaces".into()));
    }
    for b in &minus.basis {
        if !t.mul(&t.q, b).is_empty() {
            return Err(Error::NotTriangle(format!("q·({}) is not 0", fmt_elem(b))));
        }
    }
    let ann: Vec<Elem> = {
        let images: Vec<Elem> = p.j12.basis.iter().map(|x| t.mul(&t.q, x)).collect();
        kernel(&images)
            .into_iter()
            .map(|rel| {
                let mut e = Elem::new();
                for (i, c) in rel {
                    axpy(&mut e, &c, &p.j12.basis[i]);
                }
                e
            })
            .collect()
    };
    if ann.len() != minus.len() {
        return Err(Error::NotTriangle("the annihilator of q in J12 differs from the -1 eigenspace".into()));
    }
    let images: Vec<Elem> = p.j11.basis.iter().map(|x| t.mul(x, &t.q)).collect();
    let times_q = Subspace::new(images);
    if times_q.ech.rank() != p.j11.len() || p.j11.len() != plus.len() || !plus.basis.iter().all(|a| times_q.contains(a)) {
        return Err(Error::NotTriangle("x ↦ xq is not an isomorphism J11 → J12(+)".into()));
    }
    Ok(Connection { peirce: p, plus, minus, times_q })
}

impl Connection {
    /// The unique `x₁₁ ∈ J₁₁` with `x₁₁q = a`.
    pub fn preimage(&self, a: &Elem) -> Result<Elem> {
        let c = self
            .times_q
            .coords(a)
            .ok_or_else(|| Error::InternalInconsistency(format!("{} is not in J12(+)", fmt_elem(a))))?;
        let mut x = Elem::new();
        for (ci, b) in c.iter().zip(&self.peirce.j11.basis) {
            axpy(&mut x, ci, b);
        }
        Ok(x)
    }

    /// `(a, b)` with `u = a + b`, `a ∈ J₁₂^(+)`, `b ∈ J₁₂^(−)`.
    pub fn split(&self, t: &TriangleJordan, u: &Elem) -> Result<(Elem, Elem)> {
        if !self.peirce.j12.contains(u) {
            return Err(Error::InternalInconsistency(format!("{} is not in J12", fmt_elem(u))));
        }
        let su = t.sigma(u);
        let a = scaled(&half(), &crate::linalg::add(u, &su));
        let b = scaled(&half(), &sub(u, &su));
        Ok((a, b))
    }
}

/// `u ·_q v = (uq)v + u(qv) − (uv)q`.
pub fn isotope_product(alg: &GradedAlgebra, q: &Elem, u: &Elem, v: &Elem) -> Elem {
    let mut o = alg.mul(&alg.mul(u, q), v);
    axpy(&mut o, &Q::one(), &alg.mul(u, &alg.mul(q, v)));
    axpy(&mut o, &-Q::one(), &alg.mul(&alg.mul(u, v), q));
    o
}

/// The product on `J₁₂` written through preimages `x₁₁q = a`, `x₁₁'q = a'`:
/// `½(x₁₁a' + x₁₁'a + x₁₁b' + x₁₁^σ b' + x₁₁'b + (x₁₁')^σ b) − (bb')q`.
pub fn half_space_product(t: &TriangleJordan, conn: &Connection, u: &Elem, v: &Elem) -> Result<Elem> {
    let (a, b) = conn.split(t, u)?;
    let (a2, b2) = conn.split(t, v)?;
    let x = conn.preimage(&a)?;
    let x2 = conn.preimage(&a2)?;
    let (xs, x2s) = (t.sigma(&x), t.sigma(&x2));
    let mut o = Elem::new();
    for (l, r) in [(&x, &a2), (&x2, &a), (&x, &b2), (&xs, &b2), (&x2, &b), (&x2s, &b)] {
        axpy(&mut o, &Q::one(), &t.mul(l, r));
    }
    let mut o = scaled(&half(), &o);
    axpy(&mut o, &-Q::one(), &t.mul(&t.mul(&b, &b2), &t.q));
    Ok(o)
}

/// `(J₁₂, ·)` as a graded algebra on a homogeneous basis `J₁₂^(+) ∪ J₁₂^(−)`.
pub fn half_space_algebra(t: &TriangleJordan, conn: &Connection) -> Result<(GradedAlgebra, Vec<Elem>)> {
    let spec = t.alg.spec().clone();
    let vectors: Vec<Elem> = conn.plus.basis.iter().chain(&conn.minus.basis).cloned().collect();
    let mut slots: HashMap<GroupElement, u32> = HashMap::new();
    let mut keys = Vec::new();
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by_key(|&i| degree_of(&vectors[i]).cloned());
    let vectors: Vec<Elem> = order.iter().map(|&i| vectors[i].clone()).collect();
    for v in &vectors {
        let g = degree_of(v).cloned().ok_or(Error::NotHomogeneous)?;
        let s = slots.entry(g.clone()).or_default();
        keys.push(Key::new(g, *s));
        *s += 1;
    }
    let space = Subspace::new(vectors.clone());
    let to_keys = |x: &Elem| -> Result<Elem> {
        let c = space
            .coords(x)
            .ok_or_else(|| Error::InternalInconsistency(format!("{} is not in J12", fmt_elem(x))))?;
        Ok(keys.iter().cloned().zip(c).filter(|(_, c)| !c.is_zero()).collect())
    };
    let mut table = HashMap::new();
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let p = to_keys(&half_space_product(t, conn, u, v)?)?;
            if !p.is_empty() {
                table.insert((keys[i].clone(), keys[j].clone()), p);
            }
        }
    }
    let unit_elem = to_keys(&t.q)?;
    let rule = TableRule::new(spec, keys, table, Some(unit_elem))?;
    Ok((GradedAlgebra::new(Arc::new(rule), Kind::Jordan), vectors))
}

/// Compares the isotope product with the half-space product on a basis of
/// `J₁₂ × J₁₂`, runs the Jordan identity on `(J₁₂, ·)` and checks that `σ` is
/// an involution of it.
pub fn verify_isotope_theorem(t: &TriangleJordan) -> Result<Report> {
    let conn = connection_involution(t)?;
    let mut rep = Report::new();
    let basis: Vec<Elem> = conn.plus.basis.iter().chain(&conn.minus.basis).cloned().collect();
    let mut eq = Check::new("isotope product = half-space product");
    for u in &basis {
        for v in &basis {
            eq.tested += 1;
            let lhs = isotope_product(&t.alg, &t.q, u, v);
            let rhs = half_space_product(t, &conn, u, v)?;
            if lhs != rhs {
                eq.violation(format!("{} | {}: {} vs {}", fmt_elem(u), fmt_elem(v), fmt_elem(&lhs), fmt_elem(&rhs)));
            }
        }
    }
    rep.push(eq);
    let (half_alg, _) = half_space_algebra(t, &conn)?;
    rep.extend(ga_check_kind(&half_alg, Kind::Jordan, None)?.prefixed("half space"));
    let mut inv = Check::new("sigma is an involution of the half space");
    for u in &basis {
        let su = t.sigma(u);
        for v in &basis {
            inv.tested += 1;
            let lhs = t.sigma(&half_space_product(t, &conn, u, v)?);
            let rhs = half_space_product(t, &conn, &su, &t.sigma(v))?;
            if lhs != rhs {
                inv.violation(format!("{} | {}", fmt_elem(u), fmt_elem(v)));
            }
        }
    }
    rep.push(inv);
    Ok(rep)
}

/// Two auxiliary identities on `J_ii × J_ii × J₁₂`: a strong form
/// (`… (strong form)`) that already fails for symmetric 2×2 matrices, and a
/// general form (`… (general form)`) valid in every special Jordan algebra
/// with a triangle.
pub fn auxiliary_identities(t: &TriangleJordan) -> Result<Report> {
    let conn = connection_involution(t)?;
    let p = &conn.peirce;
    let m = |x: &Elem, y: &Elem| t.mul(x, y);
    let mut rep = Report::new();
    let mut strong3 = Check::new("(q x_ii) x12 = (q x12) x_ii + (q(x12 x_ii)) p_j (strong form)");
    let mut general3 = Check::new("(q x_ii) x12 = (q x12) x_ii + (q(x12 x_ii))(p_j - p_i) (general form)");
    let mut strong4 = Check::new("(x_ii y_ii) x12 = (x_ii x12) y_ii (strong form)");
    let mut general4 = Check::new("(x_ii y_ii) x12 = x_ii(y_ii x12) + y_ii(x_ii x12) (general form)");
    for (jii, pi, pj) in [(&p.j11, &t.p1, &t.p2), (&p.j22, &t.p2, &t.p1)] {
        for x in &jii.basis {
            for z in &p.j12.basis {
                strong3.tested += 1;
                general3.tested += 1;
                let lhs = m(&m(&t.q, x), z);
                let y = m(&t.q, &m(z, x));
                let mut rhs = m(&m(&t.q, z), x);
                axpy(&mut rhs, &Q::one(), &m(&y, pj));
                if lhs != rhs {
                    strong3.violation(format!("x = {}, x12 = {}", fmt_elem(x), fmt_elem(z)));
                }
                axpy(&mut rhs, &-Q::one(), &m(&y, pi));
                if lhs != rhs {
                    general3.violation(format!("x = {}, x12 = {}", fmt_elem(x), fmt_elem(z)));
                }
                for w in &jii.basis {
                    strong4.tested += 1;
                    general4.tested += 1;
                    let lhs = m(&m(x, w), z);
                    if lhs != m(&m(x, z), w) {
                        strong4.violation(format!("x = {}, y = {}, x12 = {}", fmt_elem(x), fmt_elem(w), fmt_elem(z)));
                    }
                    let mut rhs = m(x, &m(w, z));
                    axpy(&mut rhs, &Q::one(), &m(w, &m(x, z)));
                    if lhs != rhs {
                        general4.violation(format!("x = {}, y = {}, x12 = {}", fmt_elem(x), fmt_elem(w), fmt_elem(z)));
                    }
                }
            }
        }
    }
    for c in [strong3, general3, strong4, general4] {
        rep.push(c);
    }
    let mut key = Check::new("(a a') q = ((a q) a' + a (q a')) / 2");
    for a in &conn.plus.basis {
        for a2 in &conn.plus.basis {
            key.tested += 1;
            let lhs = m(&m(a, a2), &t.q);
            let mut rhs = m(&m(a, &t.q), a2);
            axpy(&mut rhs, &Q::one(), &m(a, &m(&t.q, a2)));
            if lhs != scaled(&half(), &rhs) {
                key.violation(format!("a = {}, a' = {}", fmt_elem(a), fmt_elem(a2)));
            }
        }
    }
    rep.push(key);
    Ok(rep)
}

type Mat2 = [Elem; 4];

/// `2×2` matrices over `alg` fixed by conjugate transpose, with product
/// `½(xy + yx)` and triangle `(E₁₁, E₂₂, E₁₂ + E₂₁)`.
///
/// Basis in degree `g`: `E₁₁⊗a_j`, `E₂₂⊗a_j` for a basis `a_j` of the
/// symmetric part of `alg^g`, then `E₁₂⊗k + E₂₁⊗σ(k)` for the basis keys `k`
/// of `alg^g`.
pub fn hermitian_2x2(alg: &GradedAlgebra, sigma: &InvolutionMap) -> Result<TriangleJordan> {
    if !alg.is_finite() {
        return Err(Error::UnsupportedForInfiniteGroup(alg.spec().free_rank));
    }
    if alg.kind != Kind::Associative {
        return Err(Error::KindMismatch(format!("hermitian matrices need an associative algebra, got {}", alg.kind)));
    }
    require_involution(alg, sigma, None)?;
    let spec = alg.spec().clone();
    let one = alg.unit().ok_or(Error::NoUnit)?;
    let mut sym: HashMap<GroupElement, Subspace> = HashMap::new();
    let mut keys = Vec::new();
    let mut decode: HashMap<Key, Mat2> = HashMap::new();
    let e = Elem::new;
    for g in alg.degrees(None)? {
        let a = split_component(alg, sigma, &g).0;
        let na = a.len() as u32;
        for (j, aj) in a.iter().enumerate() {
            let j = j as u32;
            decode.insert(Key::new(g.clone(), j), [aj.clone(), e(), e(), e()]);
            decode.insert(Key::new(g.clone(), na + j), [e(), e(), e(), aj.clone()]);
        }
        for (j, k) in alg.keys_at(&g).into_iter().enumerate() {
            let s = sigma.apply_key(&k);
            decode.insert(Key::new(g.clone(), 2 * na + j as u32), [e(), unit(k), s, e()]);
        }
        let n = 2 * na as usize + alg.dim(&g);
        keys.extend((0..n as u32).map(|i| Key::new(g.clone(), i)));
        sym.insert(g, Subspace::new(a));
    }
    let encode = |m: &Mat2| -> Result<Elem> {
        let mut out = Elem::new();
        let bad = |why: &str| Error::InternalInconsistency(format!("matrix is not hermitian: {why}"));
        if sigma.apply(&m[1]) != m[2] {
            return Err(bad("off-diagonal entries"));
        }
        for (idx, offset) in [(0usize, 0u32), (3, 1)] {
            let mut parts: BTreeMap<GroupElement, Elem> = BTreeMap::new();
            for (k, c) in &m[idx] {
                parts.entry(k.deg.clone()).or_default().insert(k.clone(), c.clone());
            }
            for (g, part) in parts {
                let s = &sym[&g];
                let c = s.coords(&part).ok_or_else(|| bad("diagonal entry not symmetric"))?;
                let base = offset * s.len() as u32;
                for (j, v) in c.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.insert(Key::new(g.clone(), base + j as u32), v);
                    }
                }
            }
        }
        for (k, c) in &m[1] {
            let na = sym[&k.deg].len() as u32;
            out.insert(Key::new(k.deg.clone(), 2 * na + k.slot), c.clone());
        }
        Ok(out)
    };
    let mm = |x: &Mat2, y: &Mat2| -> Mat2 {
        let entry = |i: usize, j: usize| {
            let mut v = alg.mul(&x[2 * i], &y[j]);
            axpy(&mut v, &Q::one(), &alg.mul(&x[2 * i + 1], &y[2 + j]));
            v
        };
        [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)]
    };
    let mut table = HashMap::new();
    for a in &keys {
        for b in &keys {
            let (x, y) = (&decode[a], &decode[b]);
            let (xy, yx) = (mm(x, y), mm(y, x));
            let m: Mat2 = std::array::from_fn(|i| scaled(&half(), &crate::linalg::add(&xy[i], &yx[i])));
            let p = encode(&m)?;
            if !p.is_empty() {
                table.insert((a.clone(), b.clone()), p);
            }
        }
    }
    let p1 = encode(&[one.clone(), e(), e(), e()])?;
    let p2 = encode(&[e(), e(), e(), one.clone()])?;
    let q = encode(&[e(), one.clone(), one.clone(), e()])?;
    let u = crate::linalg::add(&p1, &p2);
    let rule = TableRule::new(spec, keys, table, Some(u))?;
    TriangleJordan::new(GradedAlgebra::new(Arc::new(rule), Kind::Jordan), p1, p2, q)
}

/// Symmetric `2×2` rational matrices.
pub fn symmetric_2x2() -> TriangleJordan {
    hermitian_2x2(&crate::constructors::rationals(), &InvolutionMap::identity()).expect("rational matrices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{quantum_torus, reversal_involution, CocycleMatrix};
    use crate::group::GroupSpec;

    fn klein_hermitian() -> TriangleJordan {
        let spec = GroupSpec::finite(vec![2, 2]).unwrap();
        let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
        let alg = quantum_torus(&spec, &qm).unwrap();
        let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
        hermitian_2x2(&alg, &sigma).unwrap()
    }

    fn k(slot: u32) -> Elem {
        unit(Key::new(crate::group::GroupSpec::trivial().zero(), slot))
    }

    #[test]
    fn symmetric_peirce_spaces() {
        // Slots: E11, E22, E12 + E21.
        let t = symmetric_2x2();
        let p = peirce(&t.alg, &t.p1).unwrap();
        assert_eq!(p.j11.basis, vec![k(0)]);
        assert_eq!(p.j22.basis, vec![k(1)]);
        assert_eq!(p.j12.basis, vec![k(2)]);
        assert!(peirce_report(&t.alg, &p).all_pass());
        let one = t.alg.unit().unwrap();
        let all = peirce(&t.alg, &one).unwrap();
        assert_eq!((all.j11.len(), all.j12.len(), all.j22.len()), (3, 0, 0));
        let none = peirce(&t.alg, &Elem::new()).unwrap();
        assert_eq!((none.j11.len(), none.j12.len(), none.j22.len()), (0, 0, 3));
    }

    #[test]
    fn connection_swaps_diagonal() {
        let t = symmetric_2x2();
        assert_eq!(t.sigma(&k(0)), k(1));
        assert_eq!(t.sigma(&t.q), t.q);
        let conn = connection_involution(&t).unwrap();
        assert_eq!(conn.plus.len(), 1);
        assert!(conn.minus.is_empty());
        assert_eq!(conn.preimage(&t.q).unwrap(), scaled(&qi(2), &k(0)));
    }

    #[test]
    fn isotope_unit_and_half_space_agree() {
        let t = symmetric_2x2();
        assert_eq!(isotope_product(&t.alg, &t.q, &t.q, &t.q), t.q);
        let conn = connection_involution(&t).unwrap();
        assert_eq!(half_space_product(&t, &conn, &t.q, &t.q).unwrap(), t.q);
        assert!(verify_isotope_theorem(&t).unwrap().all_pass());
    }

    #[test]
    fn hermitian_over_klein_quantum_torus() {
        let t = klein_hermitian();
        let p = peirce(&t.alg, &t.p1).unwrap();
        assert_eq!(p.j12.len(), 4);
        assert!(peirce_report(&t.alg, &p).all_pass());
        let conn = connection_involution(&t).unwrap();
        assert_eq!((conn.plus.len(), conn.minus.len()), (3, 1));
        let b = &conn.minus.basis[0];
        let bb = half_space_product(&t, &conn, b, b).unwrap();
        assert!(conn.plus.contains(&bb) && !bb.is_empty());
        let rep = verify_isotope_theorem(&t).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn rational_hermitian_dimension() {
        let t = symmetric_2x2();
        assert_eq!(t.alg.basis(None).unwrap().len(), 3);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let t = symmetric_2x2();
        let one = t.alg.unit().unwrap();
        let r = TriangleJordan::new(t.alg.clone(), one, Elem::new(), t.q.clone());
        assert!(matches!(r, Err(Error::NotTriangle(_))));
    }

    #[test]
    fn strong_auxiliary_identities_are_refuted() {
        for t in [symmetric_2x2(), klein_hermitian()] {
            let rep = auxiliary_identities(&t).unwrap();
            for c in &rep.checks {
                let strong = c.name.ends_with("(strong form)");
                assert_eq!(c.passed(), !strong, "{c}");
            }
        }
        let rep = auxiliary_identities(&symmetric_2x2()).unwrap();
        let c = rep.get("(x_ii y_ii) x12 = (x_ii x12) y_ii (strong form)").unwrap();
        assert!(c.witnesses[0].contains("x12"));
    }
}
