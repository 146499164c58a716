use std::collections::BTreeSet;

use proptest::prelude::*;
use sptorus::algebra::{ga_check_kind, ga_invert_hom, ga_is_torus, ga_split_symmetric, split_component, Elem, GradedAlgebra, InvolutionMap, Kind};
use sptorus::config::{Artifact, Config};
use sptorus::constructors::{cayley_dickson_double, clifford_torus, quantum_torus, reversal_involution, CliffordData, CocycleMatrix, DoublingDegree};
use sptorus::extract::{classify, extract_coordinates, lemma_checks, round_trip, Branch, SkewCase};
use sptorus::group::{is_subgroup, subgroup_generated, GroupElement, GroupSpec, Window};
use sptorus::jordan::{hermitian_2x2, isotope_product, peirce, peirce_report};
use sptorus::linalg::{scaled, unit};
use sptorus::report::{Check, Verdict};
use sptorus::scalar::{q as rat, qi, Q};
use sptorus::sp::{build_sp, check_jacobi, check_structure, GradedLie, SpLie, SpMode};
use sptorus::symplectic::{g_basis, h_basis, in_g, in_s, mat_bracket, mat_circ, roots_c, SymplecticModel};
use sptorus::verify::{division_witness, resubstitute, verify_lie_g_torus};

/// A quantum torus on `ℤ₂^k × ℤ^f`: `±1` commutation scalars from `flips`
/// (upper triangle, row-major) and reversal signs from `signs`.
#[derive(Debug, Clone)]
struct QuantumCase {
    torsion: usize,
    free: usize,
    flips: Vec<bool>,
    signs: Vec<bool>,
}

impl QuantumCase {
    fn spec(&self) -> GroupSpec {
        GroupSpec::new(self.free, vec![2; self.torsion]).unwrap()
    }

    fn cocycle(&self) -> CocycleMatrix {
        let n = self.free + self.torsion;
        let mut pairs = Vec::new();
        let mut it = self.flips.iter();
        for i in 0..n {
            for j in i + 1..n {
                if *it.next().unwrap() {
                    pairs.push((i, j));
                }
            }
        }
        CocycleMatrix::minus_one_pairs(n, &pairs)
    }

    fn noncommutative(&self) -> bool {
        self.flips.iter().any(|&f| f)
    }

    fn build(&self) -> (GradedAlgebra, InvolutionMap) {
        let qm = self.cocycle();
        let alg = quantum_torus(&self.spec(), &qm).unwrap();
        let signs: Vec<i64> = self.signs.iter().map(|&s| if s { -1 } else { 1 }).collect();
        let sigma = reversal_involution(&alg, &qm, &signs).unwrap();
        (alg, sigma)
    }

    fn window(&self) -> Option<Window> {
        (self.free > 0).then(|| Window::l1(1))
    }
}

fn quantum_case(torsion: std::ops::RangeInclusive<usize>, free: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QuantumCase> {
    (torsion, free).prop_flat_map(|(torsion, free)| {
        let n = torsion + free;
        (prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2), prop::collection::vec(any::<bool>(), n))
            .prop_map(move |(flips, signs)| QuantumCase { torsion, free, flips, signs })
    })
}

fn finite_quantum(max_torsion: usize) -> impl Strategy<Value = QuantumCase> {
    quantum_case(1..=max_torsion, 0..=0)
}

fn group_spec() -> impl Strategy<Value = GroupSpec> {
    (0usize..=2, prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6]), 0..=2))
        .prop_filter("non-trivial group", |(f, t)| f + t.len() > 0)
        .prop_map(|(f, t)| GroupSpec::new(f, t).unwrap())
}

fn elements(spec: GroupSpec, max: usize) -> impl Strategy<Value = (GroupSpec, Vec<GroupElement>)> {
    let n = spec.len();
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), 0..=max)
        .prop_map(move |cs| (spec.clone(), cs.iter().map(|c| spec.element(c).unwrap()).collect()))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_filter("non-zero", |(n, _)| *n != 0).prop_map(|(n, d)| rat(n, d))
}

fn finite_lie(case: &QuantumCase, r: usize) -> SpLie {
    let (alg, sigma) = case.build();
    build_sp(&alg, &sigma, r, SpMode::Full).unwrap()
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(n) }
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn generators_belong_to_their_subgroup((spec, s) in group_spec().prop_flat_map(|g| elements(g, 3))) {
        let h = subgroup_generated(&spec, &s).unwrap();
        for x in &s {
            prop_assert!(h.membership(x), "{x:?}");
        }
    }

    #[test]
    fn regenerating_a_subgroup_is_idempotent((spec, s) in group_spec().prop_flat_map(|g| elements(g, 3))) {
        let h = subgroup_generated(&spec, &s).unwrap();
        let again = subgroup_generated(&spec, h.generators()).unwrap();
        for g in spec.window_elements(&Window::linf(3)) {
            prop_assert_eq!(h.membership(&g), again.membership(&g), "{:?}", g);
        }
    }

    #[test]
    fn subset_is_subgroup_iff_it_generates_itself(
        (spec, s) in group_spec().prop_filter("finite", |g| g.is_finite()).prop_flat_map(|g| elements(g, 4)),
        close in any::<bool>(),
    ) {
        let w = Window::linf(0);
        let s = if close { subgroup_generated(&spec, &s).unwrap().elements_in_window(&w) } else { s };
        let own: BTreeSet<GroupElement> = s.iter().cloned().collect();
        let generated: BTreeSet<GroupElement> = subgroup_generated(&spec, &s).unwrap().elements_in_window(&w).into_iter().collect();
        prop_assert_eq!(is_subgroup(&spec, &s).unwrap(), own == generated);
        if close {
            prop_assert!(is_subgroup(&spec, &s).unwrap());
        }
    }

    #[test]
    fn quantum_tori_are_associative_tori(case in quantum_case(0..=2, 0..=2).prop_filter("non-trivial", |c| c.torsion + c.free > 0)) {
        let (alg, _) = case.build();
        let w = case.window();
        let rep = ga_check_kind(&alg, Kind::Associative, w.as_ref()).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
        let torus = ga_is_torus(&alg, Kind::Associative, w.as_ref()).unwrap();
        prop_assert!(torus.passed(), "{}", torus);
        for g in alg.support(w.as_ref()).unwrap() {
            prop_assert_eq!(alg.dim(&g), 1);
        }
    }

    #[test]
    fn products_of_homogeneous_elements_are_graded(case in finite_quantum(3)) {
        let (alg, _) = case.build();
        let keys = alg.basis(None).unwrap();
        let spec = alg.spec();
        for a in &keys {
            for b in &keys {
                let want = spec.add(&a.deg, &b.deg);
                for k in alg.mul_keys(a, b).keys() {
                    prop_assert_eq!(&k.deg, &want);
                }
            }
        }
    }

    #[test]
    fn involution_split_respects_products(case in finite_quantum(3)) {
        let (alg, sigma) = case.build();
        let split = ga_split_symmetric(&alg, &sigma, None).unwrap();
        let sym: Vec<&Elem> = split.sym.iter().flat_map(|(_, v)| v).collect();
        let skew: Vec<&Elem> = split.skew.iter().flat_map(|(_, v)| v).collect();
        let in_a = |x: &Elem| sigma.apply(x) == *x;
        let in_b = |x: &Elem| sigma.apply(x) == scaled(&qi(-1), x);
        for x in &sym {
            for y in &sym {
                prop_assert!(in_a(&alg.circ(x, y)));
                prop_assert!(in_b(&alg.commutator(x, y)));
            }
            for y in &skew {
                prop_assert!(in_b(&alg.circ(x, y)));
                prop_assert!(in_a(&alg.commutator(x, y)));
            }
        }
        for x in &skew {
            for y in &skew {
                prop_assert!(in_a(&alg.circ(x, y)));
            }
        }
    }

    #[test]
    fn homogeneous_inverses_multiply_back(case in finite_quantum(3), pick in any::<prop::sample::Index>(), c in nonzero_rational()) {
        let (alg, _) = case.build();
        let keys = alg.basis(None).unwrap();
        let x = scaled(&c, &unit(pick.get(&keys).clone()));
        let y = ga_invert_hom(&alg, Kind::Associative, &x).unwrap().expect("invertible");
        let one = alg.unit().unwrap();
        prop_assert_eq!(alg.mul(&x, &y), one.clone());
        prop_assert_eq!(alg.mul(&y, &x), one);
    }

    #[test]
    fn clifford_tori_are_jordan(
        module in prop::sample::subsequence(vec![[0i64, 1, 0], [0, 0, 1], [0, 1, 1]], 1..=3),
        form in prop::collection::vec(nonzero_rational(), 3),
    ) {
        let spec = GroupSpec::finite(vec![2, 2, 2]).unwrap();
        let m = module.len();
        let mut f = vec![vec![qi(0); m]; m];
        for i in 0..m {
            f[i][i] = form[i].clone();
        }
        let data = CliffordData {
            plus_subgroup: vec![spec.element(&[1, 0, 0]).unwrap()],
            module_degrees: module.iter().map(|d| spec.element(d).unwrap()).collect(),
            form: f,
        };
        let (alg, sigma) = clifford_torus(&spec, &data, true, None).unwrap();
        let rep = ga_check_kind(&alg, Kind::Jordan, None).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
        prop_assert!(ga_is_torus(&alg, Kind::Jordan, None).unwrap().passed());
        let plus = [spec.zero(), spec.element(&[1, 0, 0]).unwrap()];
        for k in alg.basis(None).unwrap() {
            let sign = if plus.contains(&k.deg) { 1 } else { -1 };
            prop_assert_eq!(sigma.apply_key(&k), scaled(&qi(sign), &unit(k.clone())));
        }
    }

    #[test]
    fn doubling_commutative_input_stays_associative(case in finite_quantum(2), c in nonzero_rational()) {
        prop_assume!(!case.noncommutative());
        let (alg, sigma) = case.build();
        let mu = scaled(&c, &alg.unit().unwrap());
        let (d, _) = cayley_dickson_double(&alg, &sigma, &mu, DoublingDegree::FreshTorsion).unwrap();
        let rep = ga_check_kind(&d, Kind::Associative, None).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
        prop_assert!(ga_is_torus(&d, Kind::Associative, None).unwrap().passed());
    }

    #[test]
    fn doubling_noncommutative_input_with_central_symmetric_part_is_alternative(case in finite_quantum(3), c in nonzero_rational()) {
        prop_assume!(case.noncommutative());
        let (alg, sigma) = case.build();
        let keys = alg.basis(None).unwrap();
        let split = ga_split_symmetric(&alg, &sigma, None).unwrap();
        let central = split.sym.iter().flat_map(|(_, v)| v).all(|a| keys.iter().all(|k| alg.commutator(a, &unit(k.clone())).is_empty()));
        prop_assume!(central);
        let mu = scaled(&c, &alg.unit().unwrap());
        let (d, _) = cayley_dickson_double(&alg, &sigma, &mu, DoublingDegree::FreshTorsion).unwrap();
        let alt = ga_check_kind(&d, Kind::Alternative, None).unwrap();
        prop_assert!(alt.all_pass(), "{}", alt);
        prop_assert!(!ga_check_kind(&d, Kind::Associative, None).unwrap().all_pass());
        prop_assert!(ga_is_torus(&d, Kind::Alternative, None).unwrap().passed());
    }

    #[test]
    fn doubling_tower_reaches_an_alternative_torus(mus in prop::collection::vec(nonzero_rational(), 3)) {
        let mut alg = sptorus::constructors::rationals();
        let mut sigma = InvolutionMap::identity();
        let mut kinds = Vec::new();
        for m in &mus {
            let mu = scaled(m, &alg.unit().unwrap());
            (alg, sigma) = cayley_dickson_double(&alg, &sigma, &mu, DoublingDegree::FreshTorsion).unwrap();
            let assoc = ga_check_kind(&alg, Kind::Associative, None).unwrap().all_pass();
            let alt = ga_check_kind(&alg, Kind::Alternative, None).unwrap().all_pass();
            kinds.push((assoc, alt));
        }
        prop_assert_eq!(kinds, vec![(true, true), (true, true), (false, true)]);
        prop_assert!(ga_is_torus(&alg, Kind::Alternative, None).unwrap().passed());
    }

    #[test]
    fn verdicts_never_upgrade_inconclusive(vs in prop::collection::vec(0u8..3, 1..6)) {
        let mk = |v: u8| match v {
            0 => Check::pass("x"),
            1 => Check::fail("x", "w"),
            _ => Check::inconclusive("x", "window"),
        };
        let mut acc = mk(vs[0]);
        for &v in &vs[1..] {
            acc.absorb(mk(v));
        }
        let want = if vs.contains(&1) {
            Verdict::Fail
        } else if vs.contains(&2) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        prop_assert_eq!(acc.verdict, want);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn symplectic_products_close_on_tags(r in 2usize..=4, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let m = SymplecticModel::get(r).unwrap();
        let (x, y) = (i.get(&m.g), j.get(&m.g));
        let (s, t) = (i.get(&m.s), j.get(&m.s));
        let zero_or = |z: sptorus::symplectic::SpMat, f: fn(&sptorus::symplectic::SpMat) -> bool| z.is_zero() || f(&z);
        prop_assert!(in_g(&mat_bracket(x, y).unwrap()));
        prop_assert!(zero_or(mat_circ(x, y).unwrap(), in_s));
        prop_assert!(zero_or(mat_bracket(x, s).unwrap(), in_s));
        prop_assert!(zero_or(mat_circ(x, s).unwrap(), in_g));
        prop_assert!(zero_or(mat_bracket(s, t).unwrap(), in_g));
        let st = mat_circ(s, t).unwrap();
        prop_assert!(zero_or(st.clone(), in_s));
        if r == 2 {
            prop_assert!(st.is_zero(), "s∘t ≠ 0 at rank 2");
        }
    }

    #[test]
    fn root_vectors_have_their_weight(r in 2usize..=4, pick in any::<prop::sample::Index>(), hi in any::<prop::sample::Index>()) {
        let datum = roots_c(r).unwrap();
        let mu = pick.get(&datum.roots);
        let x = g_basis(r, mu).unwrap();
        let hs = h_basis(r);
        let i = hi.index(r);
        let lhs = mat_bracket(&hs[i], &x).unwrap();
        prop_assert_eq!(lhs, x.scale(&qi(mu.0[i] as i64)));
    }

    #[test]
    fn model_dimensions(r in 2usize..=5) {
        let m = SymplecticModel::get(r).unwrap();
        prop_assert_eq!(m.dim_g(), r * (2 * r + 1));
        prop_assert_eq!(m.dim_s(), r * (2 * r - 1) - 1);
    }
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn constructed_sp_is_a_bigraded_lie_algebra(case in finite_quantum(2), r in 2usize..=3) {
        let lie = finite_lie(&case, r);
        let keys = lie.keys().unwrap();
        let (anti, graded) = check_structure(&lie, &keys).unwrap();
        prop_assert!(anti.passed(), "{}", anti);
        prop_assert!(graded.passed(), "{}", graded);
        let jac = check_jacobi(&lie, &keys).unwrap();
        prop_assert!(jac.passed(), "{}", jac);
    }

    #[test]
    fn matrix_part_brackets_like_matrices(case in finite_quantum(2), r in 2usize..=3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let lie = finite_lie(&case, r);
        let m = lie.model().unwrap();
        let (a, b) = (i.index(m.g.len()), j.index(m.g.len()));
        let lhs = lie.bracket_elems(&lie.embed_g(a).unwrap(), &lie.embed_g(b).unwrap()).unwrap();
        let rhs = lie.embed_matrix(&mat_bracket(&m.g[a], &m.g[b]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantum_sp_is_a_lie_torus(case in finite_quantum(3)) {
        let lie = finite_lie(&case, 2);
        let rep = verify_lie_g_torus(&lie).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn division_witnesses_resubstitute_to_coroots(
        case in finite_quantum(2),
        r in 2usize..=3,
        root in any::<prop::sample::Index>(),
        deg in any::<prop::sample::Index>(),
        slot in any::<prop::sample::Index>(),
    ) {
        let lie = finite_lie(&case, r);
        let datum = roots_c(r).unwrap();
        let mu = root.get(&datum.roots);
        let degs = lie.degrees().unwrap();
        let g = deg.get(&degs);
        let xs = lie.keys_at(mu, g);
        prop_assume!(!xs.is_empty());
        let x = unit(slot.get(&xs).clone());
        let y = division_witness(&lie, &x, mu, g).unwrap().expect("division witness");
        prop_assert_eq!(resubstitute(&lie, &x, &y).unwrap(), lie.coroot(mu).unwrap());
    }

    #[test]
    fn root_supports_match_coordinates(case in finite_quantum(3), r in 2usize..=3) {
        let (alg, sigma) = case.build();
        let lie = build_sp(&alg, &sigma, r, SpMode::Full).unwrap();
        let datum = roots_c(r).unwrap();
        for g in alg.spec().elements().unwrap() {
            let whole = alg.dim(&g) > 0;
            let sym = !split_component(&alg, &sigma, &g).0.is_empty();
            for mu in datum.short_roots() {
                prop_assert_eq!(lie.dim(mu, &g) > 0, whole, "short {} at {:?}", mu, g);
            }
            for mu in datum.long_roots() {
                prop_assert_eq!(lie.dim(mu, &g) > 0, sym, "long {} at {:?}", mu, g);
            }
        }
    }

    #[test]
    fn hermitian_triangles_have_peirce_structure(case in finite_quantum(2)) {
        let (alg, sigma) = case.build();
        let t = hermitian_2x2(&alg, &sigma).unwrap();
        let p = peirce(&t.alg, &t.p1).unwrap();
        let rep = peirce_report(&t.alg, &p);
        prop_assert!(rep.all_pass(), "{}", rep);
        let j12 = &p.j12.basis;
        for u in j12 {
            prop_assert_eq!(isotope_product(&t.alg, &t.q, &t.q, u), u.clone());
            for v in j12 {
                let uv = isotope_product(&t.alg, &t.q, u, v);
                prop_assert_eq!(&uv, &isotope_product(&t.alg, &t.q, v, u));
                prop_assert!(p.j12.contains(&uv));
            }
        }
    }

    #[test]
    fn coordinates_round_trip_at_rank_two(case in finite_quantum(3)) {
        let lie = finite_lie(&case, 2);
        let bundle = extract_coordinates(&lie, None).unwrap();
        let c = classify(&bundle).unwrap();
        let rt = round_trip(&c, &lie).unwrap();
        prop_assert!(rt.passed(), "{}", rt);
        if c.skew_case != SkewCase::Vanishing {
            prop_assert!(rt.note.is_none(), "{}", rt);
        }
        let lemmas = lemma_checks(&bundle).unwrap();
        prop_assert!(lemmas.all_pass(), "{}", lemmas);
    }

    #[test]
    fn coordinates_round_trip_exactly_at_rank_three(case in finite_quantum(2)) {
        let lie = finite_lie(&case, 3);
        let c = classify(&extract_coordinates(&lie, None).unwrap()).unwrap();
        prop_assert_eq!(c.branch, Branch::Associative);
        let rt = round_trip(&c, &lie).unwrap();
        prop_assert!(rt.passed() && rt.note.is_none(), "{}", rt);
    }

    #[test]
    fn artifacts_serialize_deterministically(case in finite_quantum(2), rank in prop::option::of(2usize..=2)) {
        let qm = case.cocycle();
        let entries: Vec<Vec<String>> = qm.0.iter().map(|row| row.iter().map(|x| format!("\"{x}\"")).collect()).collect();
        let q = entries.iter().map(|r| format!("[{}]", r.join(","))).collect::<Vec<_>>().join(",");
        let signs: Vec<String> = case.signs.iter().map(|&s| if s { "-1" } else { "1" }.to_string()).collect();
        let rank = rank.map(|r| format!(",\"rank\":{r}")).unwrap_or_default();
        let json = format!(
            r#"{{"kind":"quantum","group":{{"free_rank":0,"torsion":[{}]}},"q":[{q}],"signs":[{}]{rank}}}"#,
            vec!["2"; case.torsion].join(","),
            signs.join(",")
        );
        let cfg = Config::from_json(&json).unwrap();
        let a = Artifact::build(&cfg, None).unwrap().to_json().unwrap();
        let b = Artifact::build(&cfg, None).unwrap().to_json().unwrap();
        prop_assert_eq!(&a, &b);
        let again = Artifact::from_json(&a).unwrap().to_json().unwrap();
        prop_assert_eq!(a, again);
    }
}
