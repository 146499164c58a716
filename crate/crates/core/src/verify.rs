//! Axiom checks for root-graded Lie algebras and Lie G-tori.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::group::{subgroup_generated, GroupElement};
use crate::linalg::{axpy, scaled, solve, Echelon, SparseVec};
use crate::report::{Check, Report};
use crate::scalar::{qi, Q};
use crate::sp::{check_structure, fmt_lie, try_sweep, GradedLie, LieElem, LieKey};
use crate::symplectic::{mat_bracket, Weight};

type Cells = BTreeMap<(Weight, GroupElement), Vec<LieKey>>;

fn cells(keys: &[LieKey]) -> Cells {
    let mut c = Cells::new();
    for k in keys {
        c.entry((k.weight.clone(), k.degree.clone())).or_default().push(k.clone());
    }
    c
}

fn cell<'a>(c: &'a Cells, w: &Weight, g: &GroupElement) -> &'a [LieKey] {
    c.get(&(w.clone(), g.clone())).map(|v| v.as_slice()).unwrap_or(&[])
}

fn windowed(lie: &dyn GradedLie) -> bool {
    !lie.spec().is_finite()
}

/// `ℒ₀^g = Σ_{μ,h} [ℒ_μ^h, ℒ_{−μ}^{g−h}]` for every degree `g`.
fn zero_span(lie: &dyn GradedLie, keys: &[LieKey], name: &str) -> Result<Check> {
    let spec = lie.spec().clone();
    let cs = cells(keys);
    let degrees = lie.degrees()?;
    let dom: BTreeSet<GroupElement> = degrees.iter().cloned().collect();
    let roots = lie.model()?.datum.roots.clone();
    let zero = Weight::zero(lie.rank());
    let truncated = windowed(lie);
    let mut c = try_sweep(name, degrees.len(), |i, c| {
        let g = &degrees[i];
        let target = cell(&cs, &zero, g);
        if target.is_empty() {
            return Ok(());
        }
        c.tested += 1;
        let mut ech: Echelon<LieKey> = Echelon::new();
        'outer: for mu in &roots {
            let neg = mu.neg();
            for h in &dom {
                let gh = spec.sub(g, h);
                if !dom.contains(&gh) {
                    continue;
                }
                for x in cell(&cs, mu, h) {
                    for y in cell(&cs, &neg, &gh) {
                        let v = lie.bracket(x, y)?;
                        if !v.is_empty() {
                            ech.insert(v);
                            if ech.rank() == target.len() {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        if let Some(k) = target.iter().find(|k| !ech.contains(&crate::linalg::unit((*k).clone()))) {
            c.violation(format!("{k} is not a sum of brackets of opposite root spaces (rank {} < {})", ech.rank(), target.len()));
        }
        Ok(())
    })?;
    if truncated && !c.passed() {
        c = Check::inconclusive(name, format!("window-limited: {}", c.witnesses.join("; ")));
    }
    Ok(c.with_scope(lie.scope()))
}

/// Checks that `L` is `Cᵣ`-graded with grading subalgebra the embedded `𝔤`.
pub fn verify_delta_graded(lie: &dyn GradedLie) -> Result<Report> {
    let model = lie.model()?;
    let keys = lie.keys()?;
    let mut rep = Report::new();
    let r = lie.rank();
    let zero_g = lie.spec().zero();

    let mut d1 = Check::new("grading subalgebra");
    let embedded: Vec<LieElem> = (0..model.dim_g()).map(|i| lie.embed_g(i)).collect::<Result<_>>()?;
    for (i, e) in embedded.iter().enumerate() {
        if let Some(k) = e.keys().find(|k| k.weight != model.g_weight[i] || k.degree != zero_g) {
            d1.violation(format!("embedded basis vector {i} has a term at {k}"));
        }
        for (j, f) in embedded.iter().enumerate() {
            d1.tested += 1;
            let lhs = lie.bracket_elems(e, f)?;
            let rhs = lie.embed_matrix(&mat_bracket(&model.g[i], &model.g[j])?)?;
            if lhs != rhs {
                d1.violation(format!("[g{i}, g{j}] differs from the matrix bracket"));
            }
        }
    }
    rep.push(d1);

    let h: Vec<LieElem> = (0..r).map(|i| lie.embed_g(model.h_index(i))).collect::<Result<_>>()?;
    let weights = lie.weights();
    let mut d2 = try_sweep("weight vectors", keys.len(), |n, c| {
        let k = &keys[n];
        c.tested += 1;
        if !weights.contains(&k.weight) {
            c.violation(format!("{k} has weight outside the root system"));
            return Ok(());
        }
        let x = crate::linalg::unit(k.clone());
        for (i, hi) in h.iter().enumerate() {
            let lhs = lie.bracket_elems(hi, &x)?;
            if lhs != scaled(&qi(k.weight.0[i] as i64), &x) {
                c.violation(format!("[h{}, {k}] = {}", i + 1, fmt_lie(&lhs)));
            }
        }
        Ok(())
    })?;
    d2.scope = lie.scope();
    rep.push(d2);

    rep.push(zero_span(lie, &keys, "degree-zero span")?);

    let mut d4 = Check::new("root system");
    for mu in &model.datum.roots {
        d4.tested += 1;
        if lie.dim(mu, &zero_g) == 0 {
            d4.violation(format!("no degree-zero root space for {mu}"));
        }
    }
    rep.push(d4);
    Ok(rep)
}

/// Solves `[x, y] = μ∨` for `y ∈ ℒ_{−μ}^{−g}`.
pub fn division_witness(lie: &dyn GradedLie, x: &LieElem, mu: &Weight, g: &GroupElement) -> Result<Option<LieElem>> {
    let ng = lie.spec().neg(g);
    let ys = lie.keys_at(&mu.neg(), &ng);
    let target = lie.coroot(mu)?;
    let images: Vec<LieElem> = ys.iter().map(|y| lie.bracket_elems(x, &crate::linalg::unit(y.clone()))).collect::<Result<_>>()?;
    Ok(solve(&images, &target).map(|c| ys.iter().cloned().zip(c).filter(|(_, v)| !v.is_zero()).collect()))
}

/// Solves for `y` with `[[x, y], z] = ⟨ν, μ∨⟩ z` on every basis vector `z`.
fn division_by_action(lie: &dyn GradedLie, keys: &[LieKey], x: &LieElem, mu: &Weight, g: &GroupElement) -> Result<Option<LieElem>> {
    let datum = &lie.model()?.datum;
    let ys = lie.keys_at(&mu.neg(), &lie.spec().neg(g));
    let mut images = Vec::new();
    for y in &ys {
        let t = lie.bracket_elems(x, &crate::linalg::unit(y.clone()))?;
        let mut v = SparseVec::new();
        for z in keys {
            for (o, c) in lie.bracket_elems(&t, &crate::linalg::unit(z.clone()))? {
                v.insert((z.clone(), o), c);
            }
        }
        images.push(v);
    }
    let mut target = SparseVec::new();
    for z in keys {
        let n = if z.weight.is_zero() { 0 } else { datum.cartan(&z.weight, mu)? };
        if n != 0 {
            target.insert((z.clone(), z.clone()), qi(n));
        }
    }
    Ok(solve(&images, &target).map(|c| ys.iter().cloned().zip(c).filter(|(_, v)| !v.is_zero()).collect()))
}

/// Checks the Lie G-torus axioms: bigrading, the degree-zero span, the
/// division property, the dimension bounds and generation of `G` by the
/// support. Window-limited verdicts are reported as inconclusive.
pub fn verify_lie_g_torus(lie: &dyn GradedLie) -> Result<Report> {
    let model = lie.model()?;
    let keys = lie.keys()?;
    let spec = lie.spec().clone();
    let cs = cells(&keys);
    let scope = lie.scope();
    let mut rep = Report::new();

    let (anti, bigrade) = check_structure(lie, &keys)?;
    rep.push(anti);
    rep.push(bigrade);
    rep.push(zero_span(lie, &keys, "degree-zero span")?);

    let root_cells: Vec<(&(Weight, GroupElement), &Vec<LieKey>)> =
        cs.iter().filter(|((w, _), _)| !w.is_zero()).collect();
    let mut div = try_sweep("division", root_cells.len(), |i, c| {
        let ((mu, g), ks) = root_cells[i];
        for k in ks {
            c.tested += 1;
            let x = crate::linalg::unit(k.clone());
            if division_witness(lie, &x, mu, g)?.is_some() {
                continue;
            }
            if division_by_action(lie, &keys, &x, mu, g)?.is_none() {
                c.violation(format!("no inverse partner for x = {k} (root {mu}, degree {g})"));
            }
        }
        Ok(())
    })?;
    div.scope = scope;
    rep.push(div);

    let zero_g = spec.zero();
    let mut dims = Check::new("dimension bounds").with_scope(scope);
    for ((mu, g), ks) in &cs {
        if mu.is_zero() {
            continue;
        }
        dims.tested += 1;
        if ks.len() > 1 {
            dims.violation(format!("dim L({mu}, {g}) = {}", ks.len()));
        }
    }
    for mu in &model.datum.roots {
        dims.tested += 1;
        if lie.dim(mu, &zero_g) != 1 {
            dims.violation(format!("dim L({mu}, 0) = {}", lie.dim(mu, &zero_g)));
        }
    }
    rep.push(dims);

    let support: Vec<GroupElement> = cs.iter().filter(|(_, v)| !v.is_empty()).map(|((_, g), _)| g.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let generated = subgroup_generated(&spec, &support)?.equals_whole_group();
    rep.push(if generated {
        Check::pass("support generates").with_scope(scope)
    } else if windowed(lie) {
        Check::inconclusive("support generates", "support inside the window generates a proper subgroup").with_scope(scope)
    } else {
        Check::fail("support generates", format!("support {support:?} generates a proper subgroup"))
    });

    let mut uniform = Check::new("root support uniformity").with_scope(scope);
    let degrees = lie.degrees()?;
    let supp = |mu: &Weight| -> BTreeSet<GroupElement> { degrees.iter().filter(|g| lie.dim(mu, g) > 0).cloned().collect() };
    for class in [model.datum.short_roots().collect::<Vec<_>>(), model.datum.long_roots().collect()] {
        if let Some(first) = class.first() {
            let s0 = supp(first);
            for mu in &class[1..] {
                uniform.tested += 1;
                if supp(mu) != s0 {
                    uniform.violation(format!("supports of {first} and {mu} differ"));
                }
            }
        }
    }
    rep.push(uniform);
    Ok(rep)
}

/// A basis `e ∈ ℒ_μ⁰`, `f ∈ ℒ_{−μ}⁰`, `t = [e, f]` of a copy of `sl₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2Triple {
    pub e: LieElem,
    pub f: LieElem,
    pub t: LieElem,
}

pub fn find_sl2_triple(lie: &dyn GradedLie, mu: &Weight) -> Result<Sl2Triple> {
    let zero = lie.spec().zero();
    let es = lie.keys_at(mu, &zero);
    if es.len() != 1 {
        return Err(Error::DivisionFailure(format!("dim L({mu}, 0) = {}", es.len())));
    }
    let e = crate::linalg::unit(es[0].clone());
    let f = match division_witness(lie, &e, mu, &zero)? {
        Some(f) => f,
        None => {
            let keys = lie.keys()?;
            division_by_action(lie, &keys, &e, mu, &zero)?
                .ok_or_else(|| Error::DivisionFailure(format!("no partner for {} at {mu}", es[0])))?
        }
    };
    let t = lie.bracket_elems(&e, &f)?;
    let two = qi(2);
    if lie.bracket_elems(&t, &e)? != scaled(&two, &e) || lie.bracket_elems(&t, &f)? != scaled(&-two, &f) {
        return Err(Error::DivisionFailure(format!("[e, f] does not act on e, f with eigenvalues ±2 at {mu}")));
    }
    Ok(Sl2Triple { e, f, t })
}

/// Finds all `sl₂` triples and checks `[t_λ, t_μ] = 0`, `t_μ = μ∨` and
/// `[t_μ, z] = ⟨ν, μ∨⟩z` on every basis vector.
pub fn check_sl2_triples(lie: &dyn GradedLie) -> Result<Check> {
    let model = lie.model()?;
    let keys = lie.keys()?;
    let roots = model.datum.roots.clone();
    let triples: Vec<Sl2Triple> = roots.iter().map(|mu| find_sl2_triple(lie, mu)).collect::<Result<_>>()?;
    let mut c = Check::new("sl2 triples").with_scope(lie.scope());
    for (i, (mu, tr)) in roots.iter().zip(&triples).enumerate() {
        c.tested += 1;
        if tr.t != lie.coroot(mu)? {
            c.violation(format!("t for {mu} is not the coroot"));
        }
        for other in &triples[i + 1..] {
            if !lie.bracket_elems(&tr.t, &other.t)?.is_empty() {
                c.violation(format!("t for {mu} does not commute with another t"));
            }
        }
        for z in &keys {
            let n = if z.weight.is_zero() { 0 } else { model.datum.cartan(&z.weight, mu)? };
            let zz = crate::linalg::unit(z.clone());
            if lie.bracket_elems(&tr.t, &zz)? != scaled(&qi(n), &zz) {
                c.violation(format!("[t({mu}), {z}] is not {n}·{z}"));
            }
        }
    }
    Ok(c)
}

/// `[x, y]` re-evaluated, for re-substitution checks.
pub fn resubstitute(lie: &dyn GradedLie, x: &LieElem, y: &LieElem) -> Result<LieElem> {
    lie.bracket_elems(x, y)
}

/// Sum `Σ cᵢ xᵢ` of Lie elements.
pub fn lin(terms: &[(Q, &LieElem)]) -> LieElem {
    let mut out = LieElem::new();
    for (c, x) in terms {
        axpy(&mut out, c, x);
    }
    out
}
