use num_traits::{One, Zero};
use proptest::prelude::*;
use vosa_core::cyclotomic::{CyclotomicField, CyclotomicNumber};
use vosa_core::lattice_vosa::*;
use vosa_core::qseries::{eta_series, series_eq, substitute_root};
use vosa_core::superfock::{binom, ModeIndex, SuperVector};
use vosa_core::twisted_fermion::Flipped;
use vosa_core::vertex::{mode_coset, vertex_mode};
use vosa_core::{Error, Q};

fn f8() -> CyclotomicField {
    CyclotomicField::new(8)
}

fn qr(c: Q, f: &CyclotomicField) -> CyclotomicNumber {
    f.ratio(*c.numer(), *c.denom())
}

fn z1() -> IntegralLattice {
    IntegralLattice::rank_one(1).unwrap()
}

/// nu = -1, k = 4 with nu-hat e^alpha = -i e^{-alpha}.
fn minus_one(phase: i64) -> IsometryTwist {
    IsometryTwist::new(&z1(), vec![vec![-1]], 4).unwrap().with_lift(vec![phase]).unwrap()
}

fn a2() -> (IntegralLattice, IsometryTwist) {
    let l = IntegralLattice::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
    let tw = IsometryTwist::new(&l, vec![vec![0, -1], vec![1, 1]], 6).unwrap();
    (l, tw)
}

fn z2_swap(k: usize) -> (IntegralLattice, IsometryTwist) {
    let l = IntegralLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
    let tw = IsometryTwist::new(&l, vec![vec![0, 1], vec![1, 0]], k).unwrap();
    (l, tw)
}

fn module(sign: usize) -> TwistedLatticeModule {
    let f = f8();
    let (l, tw) = (z1(), minus_one(6));
    let ext = module_extension(&l, &tw).unwrap();
    let chis = enumerate_chi(&l, &tw, &ext, &f, 4).unwrap();
    build_twisted_lattice_module(&l, &tw, chis[sign].clone(), &f).unwrap()
}

fn basis(m: &vosa_core::superfock::TwistedModule, w: Q) -> Vec<SuperVector> {
    m.basis_up_to(w).into_iter().map(|x| SuperVector::from_monomial(x, m.one())).collect()
}

#[test]
fn lattice_validation() {
    assert!(IntegralLattice::new(vec![vec![1, 2], vec![0, 1]]).is_err());
    assert!(IntegralLattice::new(vec![vec![1, 2], vec![2, 1]]).is_err());
    let l = z1();
    assert!(IsometryTwist::new(&l, vec![vec![2]], 2).is_err());
    assert!(IsometryTwist::new(&l, vec![vec![-1]], 3).is_err());
    let (l2, tw) = a2();
    assert_eq!(l2.pair(&tw.apply(1, &[1, 0]), &tw.apply(1, &[0, 1])), 1);
    assert_eq!(tw.power(6), vec![vec![1, 0], vec![0, 1]]);
}

#[test]
fn commutators_rank_one_are_trivial() {
    let f = f8();
    let (l, tw) = (z1(), minus_one(6));
    for m in -5..=5i64 {
        for n in -5..=5i64 {
            let (c0, c) = commutator_maps(&l, &tw, &f, &[m], &[n]).unwrap();
            assert!(c0.is_one() && c.is_one(), "m={} n={}", m, n);
        }
    }
}

#[test]
fn commutators_rank_two() {
    let (l, tw) = a2();
    let m = tw.modulus();
    let vs = l.box_vectors(2);
    for a in &vs {
        let (c0, c) = commutator_exponents(&l, &tw, a, a);
        assert_eq!((c0.rem_euclid(m), c.rem_euclid(m)), (0, 0));
        for b in &vs {
            let (x0, x) = commutator_exponents(&l, &tw, a, b);
            let (y0, y) = commutator_exponents(&l, &tw, b, a);
            assert_eq!((x0 + y0).rem_euclid(m), 0);
            assert_eq!((x + y).rem_euclid(m), 0);
        }
    }
}

#[test]
fn commutator_section_matches_brute_force() {
    let (l, tw) = a2();
    for kind in [ExtensionKind::Untwisted, ExtensionKind::Twisted] {
        let ext = CentralExtension::new(&l, &tw, kind).unwrap();
        for a in l.box_vectors(2) {
            for b in l.box_vectors(2) {
                let (c0, c) = commutator_exponents(&l, &tw, &a, &b);
                let want = if kind == ExtensionKind::Untwisted { c0 } else { c };
                let got = ext.commutator(&ext.section(&a), &ext.section(&b));
                assert_eq!((got - want).rem_euclid(tw.modulus()), 0);
            }
        }
    }
}

#[test]
fn lift_order_examples() {
    let r = lift_order_check(&z1(), &minus_one(6)).unwrap();
    assert!(!r.must_double);
    assert_eq!(r.entries[0].half_pairing, 1);
    assert!(r.entries[0].condition1 && r.entries[0].condition2);
    let (l, tw) = z2_swap(2);
    assert!(lift_order_check(&l, &tw).unwrap().must_double);
    let (l, tw) = z2_swap(4);
    assert!(!lift_order_check(&l, &tw).unwrap().must_double);
    let id = IsometryTwist::identity(&l, 2).unwrap();
    assert!(!lift_order_check(&l, &id).unwrap().must_double);
    let (l, tw) = a2();
    let r = lift_order_check(&l, &tw).unwrap();
    assert!(r.entries.iter().all(|e| e.condition1 && e.condition2));
    assert!(matches!(lift_order_check(&z1(), &IsometryTwist::identity(&z1(), 3).unwrap()), Err(Error::InvalidParameter(_))));
}

#[test]
fn rank_one_cocycles() {
    let (l, tw) = (z1(), minus_one(6));
    assert!(cocycle_section(&l, &tw, ExtensionKind::Twisted).unwrap().is_trivial());
    let ext = module_extension(&l, &tw).unwrap();
    assert_eq!(ext.kind, ExtensionKind::Twisted);
    for m in -4..=4i64 {
        for n in -4..=4i64 {
            // e_{m alpha} e_{n alpha} = (-i)^{mn} e_{(m+n) alpha}
            assert_eq!((ext.cocycle.eval(&[m], &[n]) - 6 * m * n).rem_euclid(8), 0, "m={} n={}", m, n);
        }
    }
}

#[test]
fn eigenspaces_of_minus_one() {
    let f = f8();
    let tw = minus_one(6);
    assert_eq!(eigenspace_dims(&tw).unwrap(), vec![0, 0, 1, 0]);
    let sp = eigenspaces(&tw, &f).unwrap();
    assert_eq!(sp[2].basis.len(), 1);
    let (_, tw) = a2();
    assert_eq!(eigenspace_dims(&tw).unwrap(), vec![0, 1, 0, 0, 0, 1]);
}

#[test]
fn vl_weights_and_central_charge() {
    let f = f8();
    let vl = build_vl(&z1(), &f).unwrap();
    assert_eq!(vl.module.central_charge, Q::one());
    let ea = vl.sector_state(&[1]);
    let wt = |v: &SuperVector| v.terms().next().map(|(m, _)| vl.module.weight(m)).unwrap();
    assert_eq!(wt(&ea), Q::new(1, 2));
    assert_eq!(wt(&vl.sector_state(&[2])), Q::from_integer(2));
    assert_eq!(vl.module.basis_up_to(Q::new(1, 2)).len(), 3);
    let l0 = vl_virasoro(&vl, 0, &ea);
    assert_eq!(l0, ea.scale(&f.ratio(1, 2)));
}

#[test]
fn vl_virasoro_bracket() {
    let f = f8();
    let vl = build_vl(&z1(), &f).unwrap();
    for w in basis(&vl.module, Q::from_integer(2)) {
        for m in -2..=2i64 {
            for n in -2..=2i64 {
                let lhs = vl_virasoro(&vl, m, &vl_virasoro(&vl, n, &w)).sub(&vl_virasoro(&vl, n, &vl_virasoro(&vl, m, &w)));
                let mut rhs = vl_virasoro(&vl, m + n, &w).scale(&f.int(m - n));
                if m + n == 0 {
                    rhs.add_scaled(&w, &f.ratio(m * m * m - m, 12));
                }
                assert_eq!(lhs, rhs, "m={} n={}", m, n);
            }
        }
    }
}

#[test]
fn vl_creation_and_sector_products() {
    let f = f8();
    let vl = build_vl(&z1(), &f).unwrap();
    let vac = vl.vacuum();
    for v in basis(&vl.module, Q::new(3, 2)) {
        assert_eq!(untwisted_lattice_mode(&vl, &v, -Q::one(), &vac), v);
        for n in 0..3 {
            assert!(untwisted_lattice_mode(&vl, &v, Q::from_integer(n), &vac).is_empty());
        }
    }
    let ea = vl.sector_state(&[1]);
    let eb = vl.sector_state(&[-1]);
    let h1 = vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &vac).unwrap();
    // e^alpha(x) e^{-alpha} = eps x^{-1} (1 + alpha(-1) x + ...)
    let p0 = untwisted_lattice_mode(&vl, &ea, Q::zero(), &eb);
    let p1 = untwisted_lattice_mode(&vl, &ea, -Q::one(), &eb);
    assert!(p0 == vac || p0 == vac.scale(&-f.one()));
    let sign = if p0 == vac { f.one() } else { -f.one() };
    assert_eq!(p1, h1.scale(&sign));
    assert!(untwisted_lattice_mode(&vl, &ea, Q::one(), &eb).is_empty());
    assert!(untwisted_lattice_mode(&vl, &ea, -Q::one(), &ea).is_empty());
    let p = untwisted_lattice_mode(&vl, &ea, Q::from_integer(-2), &ea);
    assert!(p == vl.sector_state(&[2]) || p == vl.sector_state(&[2]).scale(&-f.one()));
}

/// Borcherds identity for a nu-hat eigenvector u with coset cu, checked on a window.
fn jacobi_failures<M, V>(mode: M, vmode: V, pairs: &[(SuperVector, Q, SuperVector, i64)], ws: &[SuperVector], f: &CyclotomicField) -> usize
where
    M: Fn(&SuperVector, Q, &SuperVector) -> SuperVector,
    V: Fn(&SuperVector, Q, &SuperVector) -> SuperVector,
{
    let mut bad = 0;
    for (a, ca, b, e) in pairs {
        for w in ws {
            for im in -1..=1i64 {
                for ik in -4..=4i64 {
                    for nn in -2..=1i64 {
                        let mm = *ca + Q::from_integer(im);
                        let k = Q::new(ik, 4);
                        let n = Q::from_integer(nn);
                        let mut lhs = SuperVector::new();
                        let mut rhs = SuperVector::new();
                        for j in 0..6i64 {
                            let jq = Q::from_integer(j);
                            let c = binom(mm, j);
                            if !c.is_zero() {
                                lhs.add_scaled(&mode(&vmode(a, n + jq, b), mm + k - jq, w), &qr(c, f));
                            }
                            let c = binom(n, j) * Q::from_integer(if j % 2 == 0 { 1 } else { -1 });
                            if c.is_zero() {
                                continue;
                            }
                            let s2 = if nn.rem_euclid(2) == 0 { -e } else { *e };
                            rhs.add_scaled(&mode(a, mm + n - jq, &mode(b, k + jq, w)), &qr(c, f));
                            rhs.add_scaled(&mode(b, n + k - jq, &mode(a, mm + jq, w)), &qr(c * Q::from_integer(s2), f));
                        }
                        if lhs != rhs {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    bad
}

fn parity_sign(m: &TwistedLatticeModule, a: &SuperVector, b: &SuperVector) -> i64 {
    let pa = m.vl.module.parity(a).bit().unwrap();
    let pb = m.vl.module.parity(b).bit().unwrap();
    if pa * pb == 1 { -1 } else { 1 }
}

#[test]
fn vl_jacobi() {
    let f = f8();
    let vl = build_vl(&z1(), &f).unwrap();
    let h1 = vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &vl.vacuum()).unwrap();
    let states = [h1, vl.sector_state(&[1]), vl.sector_state(&[-1])];
    let mut pairs = Vec::new();
    for a in &states {
        for b in &states {
            let pa = vl.module.parity(a).bit().unwrap();
            let pb = vl.module.parity(b).bit().unwrap();
            pairs.push((a.clone(), Q::zero(), b.clone(), if pa * pb == 1 { -1 } else { 1 }));
        }
    }
    let ws = basis(&vl.module, Q::one());
    let md = |v: &SuperVector, n: Q, w: &SuperVector| untwisted_lattice_mode(&vl, v, n, w);
    assert_eq!(jacobi_failures(md, md, &pairs, &ws, &f), 0);
}

#[test]
fn tau_values() {
    let f = f8();
    let (l, tw) = (z1(), minus_one(6));
    for a in -4..=4i64 {
        let want = if a % 2 == 0 { f.one() } else { -f.one() };
        assert_eq!(tau_character(&l, &tw, &f, &[a]).unwrap(), want);
    }
    assert_eq!(tau_character(&l, &tw, &f, &[0]).unwrap(), f.one());
    let ext = CentralExtension::new(&l, &tw, ExtensionKind::Twisted).unwrap();
    for chi in enumerate_chi(&l, &tw, &ext, &f, 4).unwrap() {
        assert_eq!(chi.eval(&f, &ext.section(&[2])).unwrap(), f.i().unwrap());
    }
}

#[test]
fn tau_homomorphism_brute_force() {
    let (l, tw) = (z1(), minus_one(6));
    for kind in [ExtensionKind::Twisted] {
        let ext = CentralExtension::new(&l, &tw, kind).unwrap();
        let r = verify_tau_homomorphism(&l, &tw, &ext, 4);
        assert!(r.passed() && r.checked > 0, "{:?}", r);
        assert!(verify_tau_homomorphism(&l, &tw, &module_extension(&l, &tw).unwrap(), 4).passed());
    }
    let id = IsometryTwist::identity(&l, 2).unwrap();
    let ext = CentralExtension::new(&l, &id, ExtensionKind::Twisted).unwrap();
    assert!(verify_tau_homomorphism(&l, &id, &ext, 4).passed());
    // nu-hat has to fix the section over the fixed vector e_1 + e_2
    let (l, tw) = z2_swap(4);
    let ext = CentralExtension::new(&l, &tw, ExtensionKind::Twisted).unwrap();
    assert!(!verify_tau_homomorphism(&l, &tw, &ext, 3).passed());
    let tw = tw.with_lift(vec![2, 2]).unwrap();
    for ext in [CentralExtension::new(&l, &tw, ExtensionKind::Twisted).unwrap(), module_extension(&l, &tw).unwrap()] {
        let r = verify_tau_homomorphism(&l, &tw, &ext, 3);
        assert!(r.passed() && r.image_in_eta, "{:?}", r);
    }
}

#[test]
fn chi_extensions() {
    let f = f8();
    let (l, tw) = (z1(), minus_one(6));
    let s = sublattices(&l, &tw, 4);
    assert_eq!((s.index_r_m, s.index_n_r), (2, 1));
    let trivial = CentralExtension::new(&l, &tw, ExtensionKind::Twisted).unwrap();
    let mut got: Vec<i64> = enumerate_chi(&l, &tw, &trivial, &f, 4).unwrap().iter().map(|c| c.exponents[0]).collect();
    got.sort();
    assert_eq!(got, vec![1, 5]);
    let sigma = minus_one(2);
    let mut got: Vec<i64> = enumerate_chi(&l, &sigma, &trivial, &f, 4).unwrap().iter().map(|c| c.exponents[0]).collect();
    got.sort();
    assert_eq!(got, vec![3, 7]);
    let chis = enumerate_chi(&l, &tw, &trivial, &f, 4).unwrap();
    for chi in &chis {
        let z = f.root(chi.exponents[0]);
        for n in -3..=3i64 {
            assert_eq!(chi.eval(&f, &trivial.section(&[n])).unwrap(), z.pow(n).unwrap());
        }
    }
    let ident = module_extension(&l, &tw).unwrap();
    let mut got: Vec<i64> = enumerate_chi(&l, &tw, &ident, &f, 4).unwrap().iter().map(|c| c.exponents[0]).collect();
    got.sort();
    assert_eq!(got, vec![2, 6]);
    let id = IsometryTwist::identity(&l, 2).unwrap();
    let ext = CentralExtension::new(&l, &id, ExtensionKind::Twisted).unwrap();
    assert_eq!(enumerate_chi(&l, &id, &ext, &f, 4).unwrap().len(), 1);
}

#[test]
fn delta_constant_values() {
    let f = f8();
    let tw = minus_one(6);
    let c = delta_constants(&tw, &f, 4).unwrap();
    for r in 0..4 {
        assert!(c.get(0, 0, r).unwrap().is_zero());
    }
    // first order: c_{10r} = 1/(2k(1-z)), c_{01r} = -z/(2k(1-z)), z = eta^{-r}; c_{100} = -(k-1)/(4k)
    let i = f.i().unwrap();
    for r in 1..4i64 {
        let z = i.pow(-r).unwrap();
        let d = (&f.one() - &z).inverse().unwrap();
        assert_eq!(c.get(1, 0, r as usize).unwrap(), &(&d * &f.ratio(1, 8)));
        assert_eq!(c.get(0, 1, r as usize).unwrap(), &-&(&(&d * &z) * &f.ratio(1, 8)));
        assert_eq!(c.get(1, 1, r as usize).unwrap(), &(&(&z * &d.pow(2).unwrap()) * &f.ratio(1, 32)));
    }
    assert_eq!(c.get(1, 0, 0).unwrap(), &f.ratio(-3, 16));
    for m in 0..=4usize {
        for n in 0..=4 - m {
            for r in 0..4usize {
                assert_eq!(c.get(m, n, r), c.get(n, m, (4 - r) % 4), "m={} n={} r={}", m, n, r);
            }
        }
    }
}

#[test]
fn rho_values() {
    let f = f8();
    let (l, tw) = (z1(), minus_one(6));
    assert_eq!(rho_factor(&l, &tw, &f, &[0]).unwrap(), f.one());
    // sqrt2^{-1} (1 - i)^{-1}... with <nu^2 a,a> = 1, <nu a,a> = -1
    let want = &f.sqrt2().unwrap() * &(&f.one() - &f.i().unwrap().pow(-1).unwrap()).pow(-1).unwrap();
    assert_eq!(rho_factor(&l, &tw, &f, &[1]).unwrap(), want);
    assert_eq!(want, f.root(-1));
    for a in -3..=3i64 {
        assert_eq!(rho_factor(&l, &tw, &f, &[a]).unwrap(), rho_factor(&l, &tw, &f, &[-a]).unwrap());
    }
}

#[test]
fn vacuum_weights() {
    assert_eq!(vacuum_weight(&minus_one(6)).unwrap(), Q::new(1, 16));
    let (_, tw) = a2();
    assert_eq!(vacuum_weight(&tw).unwrap(), Q::new(5, 72));
    let (_, tw) = z2_swap(2);
    assert_eq!(vacuum_weight(&tw).unwrap(), Q::new(1, 16));
}

#[test]
fn twisted_module_grading() {
    let f = f8();
    let t = Q::from_integer(4);
    let t1 = t + Q::one();
    let expect = eta_series(&f, t1).div(&substitute_root(&eta_series(&f, Q::from_integer(2) * t1), 2)).unwrap();
    for s in 0..2 {
        let m = module(s);
        assert_eq!(m.vacuum_weight(), Q::new(1, 16));
        assert!(series_eq(&m.module.graded_dimension(t), &expect, t).unwrap());
        let vac = m.vacuum();
        assert_eq!(m.virasoro(0, &vac), vac.scale(&f.ratio(1, 16)));
        let om = lattice_omega(&m.vl);
        assert_eq!(m.mode_via_delta(&om, Q::one(), &vac).unwrap(), vac.scale(&f.ratio(1, 16)));
    }
}

#[test]
fn twisted_modes_agree_with_delta() {
    let f = f8();
    let m = module(0);
    let vl = &m.vl;
    let i = f.i().unwrap();
    let ea = vl.sector_state(&[1]);
    let eb = vl.sector_state(&[-1]);
    let h1 = vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &vl.vacuum()).unwrap();
    let vs = [ea.add(&eb.scale(&i)), ea.sub(&eb.scale(&i)), h1.clone(), untwisted_lattice_mode(vl, &h1, -Q::one(), &ea), lattice_omega(vl)];
    let ws = basis(&m.module, Q::new(1, 16) + Q::one());
    for v in &vs {
        for w in &ws {
            for n in -8..=8i64 {
                let mu = Q::new(n, 4);
                assert_eq!(m.mode(v, mu, w), m.mode_via_delta(v, mu, w).unwrap(), "mu={}", mu);
            }
        }
    }
    assert!(matches!(m.exp_delta(&vl.sector_state(&[5])), Err(Error::InsufficientPrecision { .. })));
}

#[test]
fn twisted_jacobi_identity() {
    let f = f8();
    let m = module(0);
    let vl = &m.vl;
    let i = f.i().unwrap();
    let ea = vl.sector_state(&[1]);
    let eb = vl.sector_state(&[-1]);
    let h1 = vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &vl.vacuum()).unwrap();
    let up = ea.add(&eb.scale(&i));
    let um = ea.sub(&eb.scale(&i));
    // nu-hat eigenvalues: up -> -up, um -> um, h1 -> -h1
    assert_eq!(lattice_automorphism(vl, &m.twist, &up).unwrap(), up.scale(&-f.one()));
    assert_eq!(lattice_automorphism(vl, &m.twist, &um).unwrap(), um);
    let us = [(up, Q::new(1, 2)), (um, Q::zero()), (h1.clone(), Q::new(1, 2))];
    let mut pairs = Vec::new();
    for (a, ca) in &us {
        for b in [&ea, &eb, &h1] {
            pairs.push((a.clone(), *ca, b.clone(), parity_sign(&m, a, b)));
        }
    }
    let vac = m.vacuum();
    let w1 = m.module.apply_mode(ModeIndex::new(0, Q::new(-1, 2)), &vac).unwrap();
    let md = |v: &SuperVector, n: Q, w: &SuperVector| m.mode(v, n, w);
    let vmd = |v: &SuperVector, n: Q, w: &SuperVector| untwisted_lattice_mode(vl, v, n, w);
    assert_eq!(jacobi_failures(md, vmd, &pairs, &[vac, w1], &f), 0);
}

#[test]
fn twisted_mode_cosets() {
    let m = module(1);
    let f = f8();
    let i = f.i().unwrap();
    let up = m.vl.sector_state(&[1]).add(&m.vl.sector_state(&[-1]).scale(&i));
    let h1 = m.vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &m.vl.vacuum()).unwrap();
    let (mono, _) = m.to_eigen(&h1).terms().next().map(|(a, b)| (a.clone(), b.clone())).unwrap();
    assert_eq!(mode_coset(&m, &mono), Some(Q::new(1, 2)));
    let (mono, _) = m.to_eigen(&up).terms().next().map(|(a, b)| (a.clone(), b.clone())).unwrap();
    assert_eq!(mode_coset(&m, &mono), None);
    let vac = m.vacuum();
    for n in -8..=8i64 {
        let mu = Q::new(n, 4);
        let out = m.mode(&up, mu, &vac);
        if !(mu - Q::new(1, 2)).is_integer() {
            assert!(out.is_empty(), "mu={}", mu);
        }
    }
}

#[test]
fn minus_module_is_flipped_plus() {
    let f = f8();
    let (mp, mm) = (module(0), module(1));
    let fl = Flipped(&mp);
    let i = f.i().unwrap();
    let up = mp.vl.sector_state(&[1]).add(&mp.vl.sector_state(&[-1]).scale(&i));
    let h1 = mp.vl.module.apply_mode(ModeIndex::new(0, -Q::one()), &mp.vl.vacuum()).unwrap();
    let ws = basis(&mp.module, Q::new(1, 16) + Q::one());
    let mut differ = false;
    for v in [mp.to_eigen(&up), mp.to_eigen(&h1)] {
        for w in &ws {
            for n in -4..=4i64 {
                let mu = Q::new(n, 2);
                let a = vertex_mode(&fl, &v, mu, w);
                let b = vertex_mode(&mm, &v, mu, w);
                assert_eq!(a, b);
                differ |= a != vertex_mode(&mp, &v, mu, w);
            }
        }
    }
    assert!(differ);
}

#[test]
fn unsupported_twists() {
    let f = CyclotomicField::new(24);
    let l = z1();
    let id = IsometryTwist::identity(&l, 2).unwrap();
    let ext = module_extension(&l, &id).unwrap();
    let chi = enumerate_chi(&l, &id, &ext, &f, 4).unwrap().remove(0);
    assert!(matches!(build_twisted_lattice_module(&l, &id, chi, &f), Err(Error::Unsupported(_))));
    let tw = minus_one(6);
    let trivial = CentralExtension::new(&l, &tw, ExtensionKind::Twisted).unwrap();
    let chi = enumerate_chi(&l, &tw, &trivial, &f8(), 4).unwrap().remove(0);
    assert!(build_twisted_lattice_module(&l, &tw, chi, &f8()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn central_extension_is_associative(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, p in 0i64..12) {
        let (l, tw) = a2();
        for kind in [ExtensionKind::Untwisted, ExtensionKind::Twisted] {
            let ext = CentralExtension::new(&l, &tw, kind).unwrap();
            let x = ext.element(p, vec![a, b]);
            let y = ext.section(&[c, d]);
            let z = ext.section(&[b, a]);
            prop_assert_eq!(ext.mul(&ext.mul(&x, &y), &z), ext.mul(&x, &ext.mul(&y, &z)));
            let e = ext.mul(&x, &ext.inv(&x));
            prop_assert_eq!(e.vector, vec![0, 0]);
            prop_assert_eq!(e.phase.rem_euclid(ext.modulus()), 0);
        }
    }

    #[test]
    fn lift_is_a_homomorphism(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3) {
        let (l, tw) = (z1(), minus_one(6));
        let ext = CentralExtension::new(&l, &tw, ExtensionKind::Untwisted).unwrap();
        let x = ext.section(&[a]);
        let y = ext.section(&[c]);
        prop_assert_eq!(ext.lift(&tw, &ext.mul(&x, &y)), ext.mul(&ext.lift(&tw, &x), &ext.lift(&tw, &y)));
        let (l2, tw2) = z2_swap(4);
        let ext2 = CentralExtension::new(&l2, &tw2, ExtensionKind::Untwisted).unwrap();
        let x = ext2.section(&[a, b]);
        let y = ext2.section(&[c, d]);
        prop_assert_eq!(ext2.lift(&tw2, &ext2.mul(&x, &y)), ext2.mul(&ext2.lift(&tw2, &x), &ext2.lift(&tw2, &y)));
    }

    #[test]
    fn tau_is_even_under_negation(a in -6i64..=6) {
        let (l, tw) = (z1(), minus_one(6));
        prop_assert_eq!(tau_exponent(&l, &tw, &[a]), tau_exponent(&l, &tw, &[-a]));
    }
}
