use super::*;
use crate::scalar::quantum_integer;
use proptest::prelude::*;

fn shape(l: usize, n: usize, r: usize) -> BoxShape {
    BoxShape { l, n, r }
}

fn graded(s: BoxShape, d: TLDiagram) -> GJSElement {
    GJSElement::from_diagram(Convention::Graded, s, d).unwrap()
}

fn filtered(s: BoxShape, d: TLDiagram) -> GJSElement {
    GJSElement::from_diagram(Convention::Filtered, s, d).unwrap()
}

fn d() -> Scalar {
    Scalar::delta()
}

fn scalar_box(c: Scalar, conv: Convention) -> GJSElement {
    GJSElement::unit(conv, 0).scale(&c)
}

fn two_cups(conv: Convention) -> GJSElement {
    GJSElement::from_diagram(conv, shape(0, 4, 0), TLDiagram::from_top_line(&[1, 0, 3, 2])).unwrap()
}

#[test]
fn unit_is_neutral_for_wedge() {
    for k in 0..=2 {
        let one = GJSElement::unit(Convention::Graded, k);
        for (s, dg) in level_boxes(k, 2) {
            let x = graded(s, dg);
            assert_eq!(one.graded_mul(&x, k).unwrap(), x);
            assert_eq!(x.graded_mul(&one, k).unwrap(), x);
        }
    }
}

#[test]
fn cup_wedge_cup() {
    let c = GJSElement::cup(Convention::Graded);
    assert_eq!(c.graded_mul(&c, 0).unwrap(), two_cups(Convention::Graded));
}

#[test]
fn wedge_rejects_wrong_level() {
    let c = GJSElement::cup(Convention::Graded);
    let one = GJSElement::unit(Convention::Graded, 1);
    assert!(c.graded_mul(&one, 0).is_err());
    let f = GJSElement::cup(Convention::Filtered);
    assert!(matches!(c.wedge(&f), Err(Error::Convention(_))));
    assert!(matches!(c.add(&f), Err(Error::Convention(_))));
}

#[test]
fn jones_projection_facts() {
    for k in 1..=3 {
        let e = jones_projection(k).unwrap();
        assert_eq!(e.wedge(&e).unwrap(), e, "e_{k} idempotent");
        assert_eq!(e.adjoint(), e, "e_{k} self-adjoint");
        assert_eq!(e.tau_infty().unwrap(), Scalar::delta_pow(k as i64 - 1));
        let one = GJSElement::unit(Convention::Graded, k + 1);
        assert_eq!(one.tau_infty().unwrap(), Scalar::delta_pow(k as i64 + 1));
    }
    assert!(jones_projection(0).is_err());
}

#[test]
fn voiculescu_trace_examples() {
    for k in 0..=3 {
        assert_eq!(GJSElement::unit(Convention::Graded, k).voiculescu_trace(k).unwrap(), Scalar::one());
    }
    let c = GJSElement::cup(Convention::Graded);
    assert_eq!(c.voiculescu_trace(0).unwrap(), d());
    let cc = c.wedge(&c).unwrap();
    assert_eq!(cc.voiculescu_trace(0).unwrap(), "d^2 + d".parse().unwrap());
    // τ_∞ vanishes off the diagonal l = r
    let off = graded(shape(2, 0, 0), TLDiagram::cup());
    assert_eq!(off.tau_infty().unwrap(), Scalar::zero());
}

#[test]
fn filtered_cup_square() {
    let c = GJSElement::cup(Convention::Filtered);
    let expect = two_cups(Convention::Filtered)
        .add(&c)
        .unwrap()
        .add(&scalar_box(d(), Convention::Filtered))
        .unwrap();
    assert_eq!(c.filtered_mul(&c).unwrap(), expect);
    assert_eq!(c.filtered_mul(&c).unwrap().compress(0).unwrap(), expect);
    assert!(c.filtered_mul(&c).unwrap().compress(1).unwrap().is_zero());
}

#[test]
fn filtered_unit_and_ground_algebra() {
    for (s, dg) in basis_boxes(4) {
        let x = filtered(s, dg.clone());
        let left = GJSElement::unit(Convention::Filtered, s.l);
        let right = GJSElement::unit(Convention::Filtered, s.r);
        assert_eq!(left.filtered_mul(&x).unwrap(), x);
        assert_eq!(x.filtered_mul(&right).unwrap(), x);
    }
    // on boxes without top strings the two products agree
    for (sa, da) in basis_boxes(4).into_iter().filter(|(s, _)| s.n == 0) {
        for (sb, db) in basis_boxes(4).into_iter().filter(|(s, _)| s.n == 0) {
            let f = filtered(sa, da.clone()).filtered_mul(&filtered(sb, db.clone())).unwrap();
            let g = graded(sa, da.clone()).wedge(&graded(sb, db.clone())).unwrap();
            assert_eq!(f.terms(), g.terms());
        }
    }
}

#[test]
fn filtered_trace_examples() {
    for k in 0..=3 {
        let one = GJSElement::unit(Convention::Filtered, k);
        assert_eq!(one.filtered_trace().unwrap(), Scalar::delta_pow(k as i64));
    }
    assert_eq!(GJSElement::cup(Convention::Filtered).filtered_trace().unwrap(), Scalar::zero());
    assert_eq!(filtered(shape(2, 0, 0), TLDiagram::cup()).filtered_trace().unwrap(), Scalar::zero());
}

#[test]
fn phi_examples() {
    for (s, dg) in basis_boxes(6).into_iter().filter(|(s, _)| s.n <= 1) {
        let x = graded(s, dg.clone());
        assert_eq!(x.phi().unwrap(), filtered(s, dg));
    }
    let c = GJSElement::cup(Convention::Graded);
    let expect = GJSElement::cup(Convention::Filtered).add(&scalar_box(d(), Convention::Filtered)).unwrap();
    assert_eq!(c.phi().unwrap(), expect);
    let cc = c.wedge(&c).unwrap().phi().unwrap();
    let pc = c.phi().unwrap();
    assert_eq!(cc, pc.filtered_mul(&pc).unwrap());
    assert!(matches!(pc.phi(), Err(Error::Convention(_))));
}

#[test]
fn phi_is_a_bijection_on_small_boxes() {
    let boxes = basis_boxes(6);
    for (s, dg) in &boxes {
        let x = graded(*s, dg.clone());
        let y = x.phi().unwrap();
        assert_eq!(y.phi_inverse().unwrap(), x);
        // leading part of Φ(x) is x itself, everything else has fewer top strings
        let top: BTreeMap<_, _> = y.terms().iter().filter(|(t, _)| t.n == s.n).map(|(t, v)| (*t, v.clone())).collect();
        assert_eq!(top, *x.terms());
        assert!(y.terms().keys().all(|t| t.n <= s.n && t.l == s.l && t.r == s.r));
    }
}

#[test]
fn expectation_examples() {
    for k in 0..=2 {
        let one = GJSElement::unit(Convention::Graded, k + 1);
        assert_eq!(one.cond_expectation().unwrap(), GJSElement::unit(Convention::Graded, k));
    }
    for k in 1..=3 {
        let e = jones_projection(k).unwrap();
        let expect = GJSElement::unit(Convention::Graded, k).scale(&Scalar::delta_pow(-2));
        assert_eq!(e.cond_expectation().unwrap(), expect);
    }
    assert!(GJSElement::unit(Convention::Graded, 0).cond_expectation().is_err());
}

#[test]
fn expectation_preserves_normalized_trace() {
    // τ_k(E(x)) = τ_{k+1}(x): the constant relating the two sides is 1
    for k in 0..=1 {
        for (s, dg) in level_boxes(k + 1, 2) {
            let x = graded(s, dg);
            let lhs = x.cond_expectation().unwrap().voiculescu_trace(k).unwrap();
            assert_eq!(lhs, x.voiculescu_trace(k + 1).unwrap());
        }
    }
}

#[test]
fn inclusion_facts() {
    for k in 0..=2 {
        let one = GJSElement::unit(Convention::Graded, k);
        assert_eq!(one.include().unwrap(), GJSElement::unit(Convention::Graded, k + 1));
    }
    for (s, dg) in level_boxes(0, 4) {
        let x = graded(s, dg);
        assert_eq!(x.include().unwrap().voiculescu_trace(1).unwrap(), x.voiculescu_trace(0).unwrap());
        assert_eq!(x.include().unwrap().cond_expectation().unwrap(), x);
    }
    let boxes = level_boxes(1, 2);
    for (sa, da) in &boxes {
        for (sb, db) in &boxes {
            let (x, y) = (graded(*sa, da.clone()), graded(*sb, db.clone()));
            let lhs = x.graded_mul(&y, 1).unwrap().include().unwrap();
            let rhs = x.include().unwrap().graded_mul(&y.include().unwrap(), 2).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn pulldown_examples() {
    for k in 1..=2 {
        assert!(check_pulldown(&GJSElement::unit(Convention::Graded, k + 1), k).unwrap());
        assert!(check_pulldown(&jones_projection(k).unwrap(), k).unwrap());
    }
    for (s, dg) in level_boxes(2, 2) {
        assert!(check_pulldown(&graded(s, dg), 1).unwrap());
    }
}

#[test]
fn jones_projection_implements_expectation() {
    // e_k ∧ include(x) ∧ e_k = include²(E(x)) ∧ e_k for x in Gr_k
    for k in 1..=2 {
        let e = jones_projection(k).unwrap();
        for (s, dg) in level_boxes(k, 2) {
            let x = graded(s, dg);
            let lhs = e.wedge(&x.include().unwrap()).unwrap().wedge(&e).unwrap();
            let ex = x.cond_expectation().unwrap().include().unwrap().include().unwrap();
            assert_eq!(lhs, ex.wedge(&e).unwrap(), "k={k} x={x}");
        }
    }
}

#[test]
fn phi_preserves_products_and_traces_small() {
    let boxes = basis_boxes(4);
    for (sa, da) in &boxes {
        let x = graded(*sa, da.clone());
        assert_eq!(x.tau_infty().unwrap(), x.phi().unwrap().filtered_trace().unwrap());
        for (sb, db) in &boxes {
            if sa.points() + sb.points() > 6 {
                continue;
            }
            let y = graded(*sb, db.clone());
            let lhs = x.wedge(&y).unwrap().phi().unwrap();
            let rhs = x.phi().unwrap().filtered_mul(&y.phi().unwrap()).unwrap();
            assert_eq!(lhs, rhs, "x={x} y={y}");
        }
    }
}

#[test]
fn fock_examples() {
    let x = GJSElement::from_diagram(Convention::Filtered, shape(1, 1, 0), TLDiagram::cup()).unwrap();
    let vac = FockVector::vacuum(4);
    assert!(FockVector::annihilate(&x.adjoint(), &vac).unwrap().is_zero());
    // L₋(x†)L₊(x)1₀ = <x|x> 1₀
    let created = FockVector::create(&x, &vac).unwrap();
    let back = FockVector::annihilate(&x.adjoint(), &created).unwrap();
    let ip = inner_product_b(shape(1, 1, 0), &x.terms()[&shape(1, 1, 0)], shape(1, 1, 0), &x.terms()[&shape(1, 1, 0)]);
    assert_eq!(back.terms(), ip.terms());
    // <∪|∪> = d
    let cup = GJSElement::cup(Convention::Filtered);
    let c = &cup.terms()[&shape(0, 2, 0)];
    assert_eq!(inner_product_b(shape(0, 2, 0), c, shape(0, 2, 0), c), scalar_box(d(), Convention::Filtered));
    let other = TLElement::from_diagram(TLDiagram::cup());
    assert!(inner_product_b(shape(2, 0, 0), &other, shape(0, 0, 2), &other).is_zero());
}

#[test]
fn fock_truncation_is_flagged() {
    let x = GJSElement::from_diagram(Convention::Filtered, shape(1, 1, 0), TLDiagram::cup()).unwrap();
    let y = GJSElement::from_diagram(Convention::Filtered, shape(0, 1, 1), TLDiagram::cup()).unwrap();
    let mut v = FockVector::vacuum(2);
    for _ in 0..2 {
        v = FockVector::create(&y, &FockVector::create(&x, &v).unwrap()).unwrap();
    }
    assert!(v.truncated());
    assert!(v.terms().keys().all(|s| s.n <= 2));
    assert!(FockVector::from_element(1, &GJSElement::cup(Convention::Filtered)).is_err());
}

#[test]
fn inner_product_is_self_adjoint() {
    for (s, dg) in basis_boxes(4) {
        let x = TLElement::from_diagram(dg);
        let ip = inner_product_b(s, &x, s, &x);
        assert_eq!(ip.adjoint(), ip);
    }
}

#[test]
fn tau_infty_of_jones_wenzl_box() {
    // f_n read as an (n,0,n) box has τ_∞ equal to its Markov trace [n+1]
    for n in 0..=3 {
        let f = crate::tl::jones_wenzl(n);
        let mut acc = Accumulator::new();
        for (dg, c) in f.iter() {
            // reversing the boundary order turns top points into left strings
            // and bottom points into right strings; τ_∞ then closes top i to bottom i
            let p = dg.partner();
            let big = 2 * n;
            let line: Vec<u16> = (0..big).map(|q| (big - 1 - p[big - 1 - q] as usize) as u16).collect();
            acc.add(TLDiagram::from_top_line(&line), c, 0);
        }
        let x = GJSElement::from_box(Convention::Graded, shape(n, 0, n), TLElement::from_map(0, 2 * n, acc.finish())).unwrap();
        assert_eq!(x.tau_infty().unwrap(), quantum_integer(n + 1));
    }
}

fn random_box(picks: &[(usize, i64)], max_points: usize, conv: Convention) -> GJSElement {
    let boxes = basis_boxes(max_points);
    let mut x = GJSElement::zero(conv);
    for &(i, c) in picks {
        let (s, dg) = &boxes[i % boxes.len()];
        let t = GJSElement::from_diagram(conv, *s, dg.clone()).unwrap().scale(&Scalar::from_int(c));
        x = x.add(&t).unwrap();
    }
    x
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    proptest::collection::vec((0usize..1000, -2i64..=2), 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wedge_is_associative(a in picks(), b in picks(), c in picks()) {
        let (x, y, z) = (
            random_box(&a, 4, Convention::Graded),
            random_box(&b, 4, Convention::Graded),
            random_box(&c, 2, Convention::Graded),
        );
        prop_assert_eq!(x.wedge(&y).unwrap().wedge(&z).unwrap(), x.wedge(&y.wedge(&z).unwrap()).unwrap());
    }

    #[test]
    fn filtered_product_is_associative(a in picks(), b in picks(), c in picks()) {
        let (x, y, z) = (
            random_box(&a, 4, Convention::Filtered),
            random_box(&b, 4, Convention::Filtered),
            random_box(&c, 2, Convention::Filtered),
        );
        prop_assert_eq!(
            x.filtered_mul(&y).unwrap().filtered_mul(&z).unwrap(),
            x.filtered_mul(&y.filtered_mul(&z).unwrap()).unwrap()
        );
    }

    #[test]
    fn traces_are_tracial(a in picks(), b in picks()) {
        let (x, y) = (random_box(&a, 4, Convention::Graded), random_box(&b, 4, Convention::Graded));
        prop_assert_eq!(x.wedge(&y).unwrap().tau_infty().unwrap(), y.wedge(&x).unwrap().tau_infty().unwrap());
        let (xf, yf) = (random_box(&a, 4, Convention::Filtered), random_box(&b, 4, Convention::Filtered));
        prop_assert_eq!(
            xf.filtered_mul(&yf).unwrap().filtered_trace().unwrap(),
            yf.filtered_mul(&xf).unwrap().filtered_trace().unwrap()
        );
    }

    #[test]
    fn moment_symmetry(a in picks(), m in 1usize..=3) {
        let x = random_box(&a, 4, Convention::Filtered);
        let xs = x.adjoint();
        let (p, q) = (xs.filtered_mul(&x).unwrap(), x.filtered_mul(&xs).unwrap());
        let (mut pp, mut qq) = (p.clone(), q.clone());
        for _ in 1..m {
            pp = pp.filtered_mul(&p).unwrap();
            qq = qq.filtered_mul(&q).unwrap();
        }
        prop_assert_eq!(pp.filtered_trace().unwrap(), qq.filtered_trace().unwrap());
    }

    #[test]
    fn adjoint_reverses_wedge(a in picks(), b in picks()) {
        let (x, y) = (random_box(&a, 4, Convention::Graded), random_box(&b, 4, Convention::Graded));
        prop_assert_eq!(x.wedge(&y).unwrap().adjoint(), y.adjoint().wedge(&x.adjoint()).unwrap());
    }

    #[test]
    fn fock_adjointness(xp in proptest::collection::vec((0usize..1000, -2i64..=2), 1..3),
                        vp in picks(), wp in picks()) {
        // x: one-top-string boxes
        let ones: Vec<(BoxShape, TLDiagram)> = basis_boxes(5).into_iter().filter(|(s, _)| s.n == 1).collect();
        let mut x = GJSElement::zero(Convention::Filtered);
        for (i, c) in xp {
            let (s, dg) = &ones[i % ones.len()];
            x = x.add(&GJSElement::from_diagram(Convention::Filtered, *s, dg.clone()).unwrap().scale(&Scalar::from_int(c))).unwrap();
        }
        let v = FockVector::from_element(4, &random_box(&vp, 4, Convention::Filtered)).unwrap();
        let w = FockVector::from_element(4, &random_box(&wp, 4, Convention::Filtered)).unwrap();
        let lhs = FockVector::inner(&FockVector::create(&x, &v).unwrap(), &w);
        let rhs = FockVector::inner(&v, &FockVector::annihilate(&x.adjoint(), &w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn quasi_basis_reconstructs_and_index_matches_oracle() {
    // Oracle for C ⊂ TL_2 with E = tr: Σ p/tr(p) over the minimal projections
    // p = e/d and 1 - p, which is basis independent.
    let q = quasi_basis(1).unwrap();
    assert!(q.reconstruction_failures().unwrap().is_empty());
    let e = TLElement::generator(2, 1).unwrap();
    let p = e.scale(&Scalar::delta_pow(-1));
    let one = TLElement::identity(2);
    let tr_p = p.markov_trace(true).unwrap();
    let q_proj = one.sub(&p).unwrap();
    let tr_q = q_proj.markov_trace(true).unwrap();
    let oracle = p.scale(&tr_p.recip().unwrap()).add(&q_proj.scale(&tr_q.recip().unwrap())).unwrap();
    assert_eq!(q.index, oracle);
    assert!(!q.index_is_delta_squared());
}
