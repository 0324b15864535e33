use num_traits::One;
use proptest::prelude::*;
use vosa_core::correspondence::*;
use vosa_core::cyclotomic::CyclotomicField;
use vosa_core::superfock::{ModeIndex, SuperVector};
use vosa_core::twisted_fermion::{build_perm_twisted, split_parity_unstable};
use vosa_core::Q;

fn f8() -> CyclotomicField {
    CyclotomicField::new(8)
}

fn h(n: i64) -> Q {
    Q::new(n, 2)
}

#[test]
fn phi_sector_images() {
    let f = f8();
    let bf = build_phi(1, &f).unwrap();
    let vac = bf.fermions.vacuum();
    assert_eq!(bf.apply(&bf.vl.vacuum()), vac);
    let ap = bf.fermions.apply_mode(ModeIndex::new(0, h(-1)), &vac).unwrap();
    assert_eq!(bf.apply(&bf.vl.sector_state(&[1])), ap);
    let s = bf.fermions.apply_mode(ModeIndex::new(1, h(-1)), &vac).unwrap();
    let s = bf.fermions.apply_mode(ModeIndex::new(1, h(-3)), &s).unwrap();
    assert_eq!(bf.apply(&bf.vl.sector_state(&[-2])), s);
}

#[test]
fn phi_intertwines_rank_one() {
    let bf = build_phi(1, &f8()).unwrap();
    let r = verify_phi_intertwines(&bf, Q::one(), 3);
    assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(5)]);
}

#[test]
fn phi_intertwines_weight_two() {
    let bf = build_phi(1, &f8()).unwrap();
    let r = verify_phi_intertwines(&bf, Q::from_integer(2), 3);
    assert!(r.passed() && r.checked > 100, "{:?}", &r.failures[..r.failures.len().min(5)]);
}

#[test]
fn phi_intertwines_rank_two() {
    let bf = build_phi(2, &f8()).unwrap();
    let r = verify_phi_intertwines(&bf, Q::one(), 2);
    assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(5)]);
}

#[test]
fn graded_map_inverts() {
    let bf = build_phi(1, &f8()).unwrap();
    let map = bf.graded_map(Q::from_integer(2)).unwrap();
    for m in bf.vl.module.basis_up_to(Q::from_integer(2)) {
        let v = SuperVector::from_monomial(m, bf.vl.module.one());
        assert_eq!(map.preimage(&map.apply(&v).unwrap()).unwrap(), v);
    }
}

#[test]
fn transport_examples() {
    let f = f8();
    let bf = build_phi(1, &f).unwrap();
    let i = f.i().unwrap();
    let vl = &bf.vl;
    let hv = vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &vl.vacuum()).unwrap();
    assert_eq!(transported_automorphism(vl, Transport::Perm, &vl.sector_state(&[1])).unwrap(), vl.sector_state(&[-1]).scale(&-&i));
    assert_eq!(transported_automorphism(vl, Transport::Perm, &hv).unwrap(), hv.scale(&-f.one()));
    assert_eq!(transported_automorphism(vl, Transport::SigmaPerm, &vl.sector_state(&[2])).unwrap(), vl.sector_state(&[-2]).scale(&-f.one()));
    for n in -3..=3i64 {
        let want = vl.sector_state(&[-n]).scale(&(-&i).pow(n).unwrap());
        assert_eq!(transported_automorphism(vl, Transport::Perm, &vl.sector_state(&[n])).unwrap(), want);
        let want = vl.sector_state(&[-n]).scale(&i.pow(n).unwrap());
        assert_eq!(transported_automorphism(vl, Transport::SigmaPerm, &vl.sector_state(&[n])).unwrap(), want);
    }
}

#[test]
fn transport_is_conjugated_swap() {
    let bf = build_phi(1, &f8()).unwrap();
    let r = verify_transport(&bf, Q::from_integer(2), 2).unwrap();
    assert!(r.passed(), "{:?}", &r.failures[..r.failures.len().min(5)]);
}

#[test]
fn four_cycle_obstruction() {
    let bf = build_phi(2, &f8()).unwrap();
    assert_eq!(four_cycle_image(&bf).unwrap(), four_cycle_expected(&bf));
}

#[test]
fn conjecture_one_evidence() {
    let f = f8();
    for (k, t) in [(2, 3), (4, 2)] {
        let r = conjecture1_evidence(k, Q::from_integer(t), &f).unwrap();
        assert!(r.consistent(), "{:?}", r);
        assert_eq!(r.status(), "evidence-consistent");
    }
    assert!(conjecture1_evidence(3, Q::one(), &f).is_err());
}

#[test]
fn conjecture_two_evidence() {
    let f = f8();
    for k in [2, 4] {
        let r = conjecture2_evidence(k, &f).unwrap();
        assert!(r.consistent(), "{:?}", r);
    }
}

#[test]
fn module_matching() {
    let f = f8();
    let bf = build_phi(1, &f).unwrap();
    let mods = lattice_twisted_modules(Transport::Perm, &f).unwrap();
    let w = Q::new(3, 2);
    for m in &mods {
        let r = self_correspondence_check(&bf, m, w, 1);
        assert!(r.passed(), "{:?}", r);
    }
    let r = flip_correspondence_check(&bf, &mods[0], &mods[1], w, 1);
    assert!(r.passed(), "{:?}", r);
    let mg = build_perm_twisted(2, false, &f).unwrap();
    let pair = split_parity_unstable(mg.module()).unwrap();
    for (s, m) in mods.iter().enumerate() {
        for sign in [1, -1] {
            // chi(e_alpha) = i goes with the + piece
            let r = module_correspondence_check(&bf, m, &mg, &pair, sign, w, 1).unwrap();
            assert_eq!(r.passed(), (s == 0) == (sign == 1), "module {} sign {}", s, sign);
        }
    }
}

#[test]
fn mismatched_dimensions_are_rejected() {
    let f = f8();
    let bf = build_phi(1, &f).unwrap();
    let mods = lattice_twisted_modules(Transport::Perm, &f).unwrap();
    let mg = build_perm_twisted(4, false, &f).unwrap();
    let pair = split_parity_unstable(mg.module()).unwrap();
    assert!(module_correspondence_check(&bf, &mods[0], &mg, &pair, 1, Q::one(), 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_preserves_weight_and_parity(idx in 0usize..40) {
        let bf = build_phi(1, &f8()).unwrap();
        let basis = bf.vl.module.basis_up_to(Q::new(5, 2));
        let m = basis[idx % basis.len()].clone();
        let v = SuperVector::from_monomial(m.clone(), bf.vl.module.one());
        let img = bf.apply(&v);
        prop_assert!(!img.is_empty());
        prop_assert_eq!(bf.fermions.homogeneous_weight(&img), Some(bf.vl.module.weight(&m)));
        prop_assert_eq!(bf.fermions.parity(&img), bf.vl.module.parity(&v));
        prop_assert_eq!(bf.standard_to_polar(&bf.polar_to_standard(&img)), img);
    }

    #[test]
    fn transported_lifts_are_involutions(n in -4i64..=4, level in 1i64..=3) {
        let f = f8();
        let bf = build_phi(1, &f).unwrap();
        let vl = &bf.vl;
        let v = vl.module.apply_mode(ModeIndex::new(0, Q::from_integer(-level)), &vl.sector_state(&[n])).unwrap();
        for which in [Transport::Perm, Transport::SigmaPerm] {
            let g = transported_automorphism(vl, which, &v).unwrap();
            prop_assert_eq!(transported_automorphism(vl, which, &g).unwrap(), v.clone());
        }
    }
}
