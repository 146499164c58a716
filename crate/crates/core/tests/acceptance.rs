//! Primary acceptance criteria, run in order with pinned thresholds.
//!
//! `cargo test -p sptorus-core --test acceptance -- --nocapture` shows one
//! line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use sptorus::algebra::{ga_check_kind, ga_invert_hom, nucleus_contains, split_component, GradedAlgebra, InvolutionMap, Kind};
use sptorus::constructors::{
    clifford_torus, octonion_torus, quantum_torus, rationals, reversal_involution, CliffordData, CocycleMatrix,
};
use sptorus::extract::{
    associativity_check, classify, define_skew_product, extract_coordinates, lemma_checks, round_trip, seligman_suite,
    split_b, Branch, CoordinateBundle, SkewCase,
};
use sptorus::group::{GroupSpec, Window};
use sptorus::jordan::{hermitian_2x2, symmetric_2x2, verify_isotope_theorem};
use sptorus::linalg::{add, scaled, sub, unit};
use sptorus::report::Report;
use sptorus::scalar::{q, qi};
use sptorus::sp::{build_sp, check_jacobi, lie_center, GradedLie, SpLie, SpMode};
use sptorus::symplectic::{coroot, division_witnesses, mat_bracket, mat_circ, mat_trace, SymplecticModel, Weight};
use sptorus::verify::{division_witness, resubstitute, verify_lie_g_torus};

const CLASSICAL_BUDGET: Duration = Duration::from_secs(1);
const QUANTUM_RANK_FOUR_BUDGET: Duration = Duration::from_secs(30);
const OCTONION_BUDGET: Duration = Duration::from_secs(120);
/// Coordinate window of the octonion algebra checks: |degree| ≤ 2 per coordinate.
const OCTONION_ALGEBRA_WINDOW: Window = Window { radius: 2, norm: sptorus::group::Norm::Linf };
const OCTONION_LIE_WINDOW: Window = Window { radius: 1, norm: sptorus::group::Norm::L1 };
const OCTONION_EXTRACT_WINDOW: Window = Window { radius: 1, norm: sptorus::group::Norm::Linf };
const PLANE_LIE_WINDOW: Window = Window { radius: 1, norm: sptorus::group::Norm::L1 };
const PLANE_EXTRACT_WINDOW: Window = Window { radius: 2, norm: sptorus::group::Norm::Linf };
const SELIGMAN_IDENTITIES: usize = 14;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(rep: &Report, what: &str) -> Result<(), String> {
    ensure(rep.all_pass(), || format!("{what}:\n{rep}"))
}

fn klein() -> GroupSpec {
    GroupSpec::finite(vec![2, 2]).unwrap()
}

fn klein_quantum() -> (GradedAlgebra, InvolutionMap) {
    let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
    let alg = quantum_torus(&klein(), &qm).unwrap();
    let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
    (alg, sigma)
}

fn klein_clifford() -> (GradedAlgebra, InvolutionMap) {
    let spec = klein();
    let data = CliffordData {
        plus_subgroup: vec![spec.element(&[1, 0]).unwrap()],
        module_degrees: vec![spec.element(&[0, 1]).unwrap()],
        form: vec![vec![qi(1)]],
    };
    clifford_torus(&spec, &data, true, None).unwrap()
}

fn quantum_plane() -> (GradedAlgebra, InvolutionMap) {
    let spec = GroupSpec::free(2);
    let qm = CocycleMatrix::minus_one_pairs(2, &[(0, 1)]);
    let alg = quantum_torus(&spec, &qm).unwrap();
    let sigma = reversal_involution(&alg, &qm, &[1, 1]).unwrap();
    (alg, sigma)
}

fn full(alg: &GradedAlgebra, sigma: &InvolutionMap, r: usize) -> SpLie {
    build_sp(alg, sigma, r, SpMode::Full).unwrap()
}

fn bundle_of(lie: &SpLie) -> CoordinateBundle {
    extract_coordinates(lie, None).unwrap()
}

fn classical_sanity() -> Outcome {
    let mut notes = Vec::new();
    for (r, dim) in [(2, 10), (3, 21), (4, 36)] {
        let t = Instant::now();
        let lie = build_sp(&rationals(), &InvolutionMap::identity(), r, SpMode::Full).map_err(|e| e.to_string())?;
        let keys = lie.keys().unwrap();
        let jac = check_jacobi(&lie, &keys).unwrap();
        let center = lie_center(&lie).unwrap();
        let dt = t.elapsed();
        ensure(keys.len() == dim, || format!("r = {r}: dimension {} != {dim}", keys.len()))?;
        ensure(jac.passed() && jac.tested > 0, || format!("r = {r}: {jac}"))?;
        ensure(center.is_empty(), || format!("r = {r}: center of dimension {}", center.len()))?;
        ensure(dt < CLASSICAL_BUDGET, || format!("r = {r}: {dt:?} over budget"))?;
        notes.push(format!("r={r} dim {dim} in {dt:.2?}"));
    }
    Ok(notes.join(", "))
}

fn quantum_forward() -> Outcome {
    let (alg, sigma) = klein_quantum();
    let mut notes = Vec::new();
    for r in [2, 4] {
        let t = Instant::now();
        let lie = full(&alg, &sigma, r);
        let rep = verify_lie_g_torus(&lie).unwrap();
        let dt = t.elapsed();
        all_pass(&rep, &format!("r = {r}"))?;
        let div = rep.get("division").unwrap();
        ensure(div.tested > 0, || "division check tested nothing".into())?;
        if r == 4 {
            ensure(dt < QUANTUM_RANK_FOUR_BUDGET, || format!("r = 4: {dt:?} over budget"))?;
        }
        notes.push(format!("r={r}: {} checks, {} root vectors inverted, {dt:.2?}", rep.checks.len(), div.tested));
    }
    Ok(notes.join("; "))
}

fn clifford_forward() -> Outcome {
    let (alg, sigma) = klein_clifford();
    let lie = full(&alg, &sigma, 2);
    all_pass(&verify_lie_g_torus(&lie).unwrap(), "axioms")?;
    let (e, e2, s, s2) = division_witnesses(2);
    let mu = Weight::pair(2, 1, 1, 2, -1);
    let target = lie.coroot(&mu).unwrap();
    let half = q(1, 2);
    let mut tested = 0;
    for g in alg.degrees(None).unwrap() {
        let (sym, skew) = split_component(&alg, &sigma, &g);
        let a = sym.first().cloned().unwrap_or_default();
        let b = skew.first().cloned().unwrap_or_default();
        let inv = ga_invert_hom(&alg, Kind::Jordan, &add(&a, &b))
            .unwrap()
            .ok_or_else(|| format!("a+b not invertible in degree {g}"))?;
        // (a+b)^-1 = a' + b' with a' symmetric and b' skew
        let sinv = sigma.apply(&inv);
        let a2 = scaled(&half, &add(&inv, &sinv));
        let b2 = scaled(&half, &sub(&inv, &sinv));
        let x = add(&lie.g_tensor(&e, &a).unwrap(), &lie.s_tensor(&s, &b).unwrap());
        let w = add(&lie.g_tensor(&e2, &a2).unwrap(), &lie.s_tensor(&s2, &b2).unwrap());
        // [e,e'] = coroot/2 and (a+b)∘(a'+b') = 2 put [x, w] at half the coroot
        ensure(resubstitute(&lie, &x, &w).unwrap() == scaled(&half, &target), || format!("degree {g}: [x, w] != coroot/2"))?;
        let y = scaled(&qi(2), &w);
        ensure(resubstitute(&lie, &x, &y).unwrap() == target, || format!("degree {g}: [x, y] is not the coroot"))?;
        let solved = division_witness(&lie, &x, &mu, &g).unwrap();
        ensure(solved.as_ref() == Some(&y), || format!("degree {g}: solver found {solved:?}"))?;
        tested += 1;
    }
    ensure(tested == 4, || format!("only {tested} degrees"))?;
    Ok(format!("axioms pass; solver witness is 2(e'⊗a' + s'⊗b') with (a+b)^-1 = a'+b' in all {tested} degrees, [x, y] = coroot"))
}

fn isotope_theorem() -> Outcome {
    let sym = verify_isotope_theorem(&symmetric_2x2()).unwrap();
    all_pass(&sym, "symmetric 2x2")?;
    let (alg, sigma) = klein_quantum();
    let herm = verify_isotope_theorem(&hermitian_2x2(&alg, &sigma).unwrap()).unwrap();
    all_pass(&herm, "hermitian 2x2 over the quantum torus")?;
    let tested = |r: &Report| r.checks.iter().map(|c| c.tested).sum::<usize>();
    Ok(format!("symmetric: {} tuples, hermitian: {} tuples, exact", tested(&sym), tested(&herm)))
}

fn seligman() -> Outcome {
    let mut notes = Vec::new();
    for (name, (alg, sigma)) in [("quantum", klein_quantum()), ("clifford", klein_clifford())] {
        let bundle = bundle_of(&full(&alg, &sigma, 2));
        let rep = seligman_suite(&bundle).unwrap();
        ensure(rep.checks.len() == SELIGMAN_IDENTITIES, || format!("{name}: {} identities", rep.checks.len()))?;
        all_pass(&rep, name)?;
        let mut bad = bundle.clone();
        let x = bundle.a_keys().into_iter().find(|k| !k.deg.is_zero()).unwrap();
        let ux = unit(x.clone());
        bad.set_circ(&x, &x, add(&bundle.circ(&ux, &ux), bundle.unit())).unwrap();
        let mutated = seligman_suite(&bad).unwrap();
        let failing = mutated.failures().count();
        ensure(failing >= 1, || format!("{name}: mutation went unnoticed"))?;
        notes.push(format!("{name}: 14/14 pass, mutation breaks {failing}"));
    }
    Ok(notes.join("; "))
}

fn round_trips() -> Outcome {
    let (alg, sigma) = klein_quantum();
    let lie = full(&alg, &sigma, 2);
    let bundle = bundle_of(&lie);
    let split = split_b(&bundle);
    let (completed, case) = define_skew_product(&bundle, &split).unwrap();
    ensure(case == SkewCase::Derivation, || format!("quantum: skew case {case:?}"))?;
    all_pass(&associativity_check(&completed).unwrap(), "quantum associativity")?;
    let c = classify(&bundle).unwrap();
    ensure(c.branch == Branch::Associative, || format!("quantum classified as {}", c.branch))?;
    let rt = round_trip(&c, &lie).unwrap();
    ensure(rt.passed(), || format!("quantum: {rt}"))?;

    let (alg, sigma) = klein_clifford();
    let lie = full(&alg, &sigma, 2);
    let bundle = bundle_of(&lie);
    let c = classify(&bundle).unwrap();
    ensure(c.branch == Branch::Clifford, || format!("clifford classified as {}", c.branch))?;
    let b = c.bundle.b_keys();
    ensure(!b.is_empty(), || "no B keys".into())?;
    for x in &b {
        for y in &b {
            let p = c.bundle.comm(&unit(x.clone()), &unit(y.clone()));
            ensure(p.is_empty(), || format!("[{x}, {y}] != 0"))?;
        }
    }
    let crt = round_trip(&c, &lie).unwrap();
    ensure(crt.passed(), || format!("clifford: {crt}"))?;
    Ok(format!("quantum -> associative ({} constants exact); clifford -> Clifford, [B,B] = 0", rt.tested))
}

fn octonion_branch() -> Outcome {
    let t = Instant::now();
    let (alg, sigma) = octonion_torus(3).unwrap();
    let w = Some(&OCTONION_ALGEBRA_WINDOW);
    all_pass(&ga_check_kind(&alg, Kind::Alternative, w).unwrap(), "alternativity")?;
    let assoc = ga_check_kind(&alg, Kind::Associative, w).unwrap();
    let witness = assoc.failures().flat_map(|c| c.witnesses.first()).next().cloned();
    let witness = witness.ok_or_else(|| "associativity did not fail".to_string())?;
    let mut symmetric = Vec::new();
    for g in alg.degrees(w).unwrap() {
        symmetric.extend(split_component(&alg, &sigma, &g).0);
    }
    let nucleus = nucleus_contains(&alg, &symmetric, w).unwrap();
    ensure(nucleus.passed() && nucleus.tested > 0, || format!("{nucleus}"))?;
    let lie = build_sp(&alg, &sigma, 3, SpMode::Window(OCTONION_LIE_WINDOW)).map_err(|e| e.to_string())?;
    let bundle = extract_coordinates(&lie, Some(OCTONION_EXTRACT_WINDOW)).unwrap();
    let c = classify(&bundle).unwrap();
    ensure(c.branch == Branch::Alternative, || format!("classified as {}", c.branch))?;
    let dt = t.elapsed();
    ensure(dt < OCTONION_BUDGET, || format!("{dt:?} over budget"))?;
    Ok(format!("alternative, associator witness {witness}, classified alternative in {dt:.1?}"))
}

fn lemma_battery() -> Outcome {
    let mut notes = Vec::new();
    for (name, (alg, sigma)) in [("quantum", klein_quantum()), ("clifford", klein_clifford())] {
        let rep = lemma_checks(&bundle_of(&full(&alg, &sigma, 2))).unwrap();
        all_pass(&rep, name)?;
        notes.push(format!("{name}: {} checks", rep.checks.len()));
    }
    let (alg, sigma) = quantum_plane();
    let lie = build_sp(&alg, &sigma, 2, SpMode::Window(PLANE_LIE_WINDOW)).unwrap();
    let rep = lemma_checks(&extract_coordinates(&lie, Some(PLANE_EXTRACT_WINDOW)).unwrap()).unwrap();
    all_pass(&rep, "quantum plane")?;
    notes.push(format!("quantum plane (window): {} checks", rep.checks.len()));
    Ok(notes.join(", "))
}

fn matrix_facts() -> Outcome {
    for r in 2..=4 {
        let (e, e2, s, s2) = division_witnesses(r);
        let mu = Weight::pair(r, 1, 1, 2, -1);
        let half_coroot = coroot(r, &mu).unwrap().scale(&q(1, 2));
        ensure(mat_bracket(&e, &e2).unwrap() == half_coroot, || format!("r = {r}: [e,e'] != coroot/2"))?;
        ensure(mat_bracket(&s, &s2).unwrap() == half_coroot, || format!("r = {r}: [s,s'] != coroot/2"))?;
        let (te, ts) = (mat_trace(&e, &e2).unwrap(), mat_trace(&s, &s2).unwrap());
        ensure(te == ts && te != qi(0), || format!("r = {r}: traces {te}, {ts}"))?;
        if r == 2 {
            ensure(mat_circ(&e, &e2).unwrap().is_zero(), || "e∘e' != 0".into())?;
            ensure(mat_circ(&s, &s2).unwrap().is_zero(), || "s∘s' != 0".into())?;
        }
    }
    let m = SymplecticModel::get(2).unwrap();
    for s in &m.s {
        for t in &m.s {
            ensure(mat_circ(s, t).unwrap().is_zero(), || "s∘t != 0 at rank 2".into())?;
        }
    }
    Ok(format!("ranks 2-4 exact; s∘t = 0 on all {} pairs of the rank-2 module basis", m.s.len() * m.s.len()))
}

#[test]
fn primary_criteria() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("classical sanity", classical_sanity),
        ("quantum torus forward direction", quantum_forward),
        ("Clifford sp4 and its division witness", clifford_forward),
        ("isotope theorem", isotope_theorem),
        ("Seligman identities with mutation guard", seligman),
        ("extraction round trip", round_trips),
        ("octonion rank-3 branch", octonion_branch),
        ("lemma battery", lemma_battery),
        ("matrix-layer facts", matrix_facts),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name} ({:.1?}): {detail}", i + 1, t.elapsed()),
            Err(why) => {
                println!("criterion {} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
