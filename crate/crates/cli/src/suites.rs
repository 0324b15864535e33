use std::collections::BTreeMap;

use vosa_core::correspondence::{
    build_phi, conjecture1_evidence, conjecture2_evidence, flip_correspondence_check, lattice_twisted_modules, verify_phi_intertwines,
    verify_transport, CheckReport, EvidenceReport, Transport,
};
use vosa_core::cyclotomic::CyclotomicField;
use vosa_core::free_fermion::{build_vfer, untwisted_mode, virasoro_mode};
use vosa_core::lattice_vosa::{
    build_vl, delta_constants, enumerate_chi, module_extension, rho_factor, untwisted_lattice_mode, vacuum_weight, verify_tau_homomorphism,
    vl_virasoro, CentralExtension, ExtensionKind, IntegralLattice, TwistedLatticeModule,
};
use vosa_core::qseries::{eta_series, series_eq, substitute_root, weber, PuiseuxSeries, Weber};
use vosa_core::superfock::{ModeIndex, SuperVector, TwistedModule};
use vosa_core::twisted_fermion::{
    build_parity_twisted, build_perm_twisted, check_grading, direct_sum_mode, parity_obstruction, split_parity_unstable, swap_grading, Flipped,
    PairVector, TwistedFermionModule,
};
use vosa_core::vertex::{jacobi_defect, mode_coset, vertex_mode, JacobiCase};
use vosa_core::Q;

use crate::error::{CliError, Result};
use crate::report::{Check, SeriesTable};
use crate::{RunConfig, Suite, Target};

fn basis(m: &TwistedModule, w: Q) -> Vec<SuperVector> {
    m.basis_up_to(w).into_iter().map(|x| SuperVector::from_monomial(x, m.one())).collect()
}

fn series_check(name: &str, reference: &str, got: &PuiseuxSeries, want: &PuiseuxSeries, t: Q) -> Result<Check> {
    let ok = series_eq(got, want, t)?;
    let detail = if ok {
        format!("agree through q^{}: {}", t, got.summary(6))
    } else {
        let (a, b) = (got.with_trunc(t), want.with_trunc(t));
        let e = a.terms().map(|(e, _)| *e).chain(b.terms().map(|(e, _)| *e)).filter(|e| a.coeff(*e) != b.coeff(*e)).min();
        match e {
            Some(e) => format!("first difference at q^{}: {} vs {}", e, short(&a.coeff(e)), short(&b.coeff(e))),
            None => "series differ".into(),
        }
    };
    Ok(Check::new(name, reference, ok, detail))
}

fn short(c: &vosa_core::cyclotomic::CyclotomicNumber) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => c.to_text(),
    }
}

fn from_report(r: &CheckReport, reference: &str) -> Check {
    let detail = if r.passed() {
        format!("{} checks", r.checked)
    } else {
        format!("{} of {} failed; first: {}", r.failures.len(), r.checked, r.failures[0])
    };
    Check::new(r.name.clone(), reference, r.passed(), detail)
}

fn need_even_k(cfg: &RunConfig, default: usize) -> Result<usize> {
    let k = cfg.k.unwrap_or(default);
    if k == 0 || k % 2 == 1 {
        return Err(CliError::Usage("odd k out of scope".into()));
    }
    Ok(k)
}

fn need_d(cfg: &RunConfig, default: usize) -> Result<usize> {
    match cfg.d.unwrap_or(default) {
        0 => Err(CliError::Usage("d must be at least 1".into())),
        d => Ok(d),
    }
}

pub type Tables = BTreeMap<String, SeriesTable>;

pub fn character(target: Target, cfg: &RunConfig) -> Result<(Vec<Check>, Tables)> {
    let f = cfg.field();
    let t = cfg.t_q;
    // closed forms are expanded one unit past T so the q^{-c/24} shift never starves the comparison
    let t1 = t + Q::from_integer(1);
    let mut out = Vec::new();
    let mut tables = Tables::new();
    let mut keep = |name: &str, s: &PuiseuxSeries| {
        tables.insert(name.to_string(), SeriesTable::new(s));
    };
    match target {
        Target::Vfer => {
            let d = need_d(cfg, 1)?;
            let v = build_vfer(d, &f)?;
            let (dim, sdim) = (v.graded_dimension(t), v.superdimension(t));
            keep("dim", &dim);
            keep("sdim", &sdim);
            let want = weber(Weber::F, &f, t1)?.pow(d as u32);
            out.push(series_check(&format!("matches f(q)^{}", d), "free fermion character", &dim, &want, t)?);
            let want = weber(Weber::F1, &f, t1)?.pow(d as u32);
            out.push(series_check(&format!("sdim matches f1(q)^{}", d), "free fermion supercharacter", &sdim, &want, t)?);
        }
        Target::Msigma => {
            let d = need_d(cfg, 1)?;
            let m = build_parity_twisted(d, &f)?;
            let mut want = weber(Weber::F2, &f, t1)?.pow(d as u32);
            let name = if d % 2 == 1 {
                want = want.scale(&f.sqrt2()?);
                format!("matches sqrt2*f2(q)^{}", d)
            } else {
                format!("matches f2(q)^{}", d)
            };
            let dim = m.module().graded_dimension(t);
            keep("dim", &dim);
            out.push(series_check(&name, "parity-twisted character", &dim, &want, t)?);
            let l0 = m.virasoro(0, &m.vacuum());
            let vw = Q::new(d as i64, 16);
            out.push(Check::new("lowest weight d/16", "parity-twisted vacuum weight", l0 == m.vacuum().scale(&qnum(&f, vw)), vw.to_string()));
        }
        Target::Mg => {
            let k = need_even_k(cfg, 2)?;
            let m = build_perm_twisted(k, false, &f)?;
            let kq = Q::from_integer(k as i64);
            let want = substitute_root(&weber(Weber::F2, &f, t1 * kq)?, k as i64).scale(&f.sqrt2()?);
            let dim = m.module().graded_dimension(t);
            keep("dim", &dim);
            out.push(series_check(&format!("matches sqrt2*f2(q^{{1/{}}})", k), "permutation-twisted character", &dim, &want, t)?);
            let pair = split_parity_unstable(m.module())?;
            let half = dim.scale(&f.ratio(1, 2));
            out.push(series_check("each piece is half", "parity-unstable pieces", &pair.graded_dimension(t), &half, t)?);
        }
        Target::Vl => {
            let vl = build_vl(&IntegralLattice::rank_one(1)?, &f)?;
            let want = weber(Weber::F, &f, t1)?.pow(2);
            let dim = vl.module.graded_dimension(t);
            keep("dim", &dim);
            out.push(series_check("matches f(q)^2", "rank one lattice character", &dim, &want, t)?);
        }
        Target::Mpm => {
            let want = eta_series(&f, t1).div(&substitute_root(&eta_series(&f, t1 * Q::from_integer(2)), 2))?;
            for (s, m) in lattice_twisted_modules(Transport::Perm, &f)?.iter().enumerate() {
                let pm = if s == 0 { "+" } else { "-" };
                let dim = m.module.graded_dimension(t);
                keep(&format!("dim M_{}", pm), &dim);
                out.push(series_check(&format!("M_{} matches eta(q)/eta(q^{{1/2}})", pm), "lattice twisted character", &dim, &want, t)?);
            }
        }
    }
    Ok((out, tables))
}

fn qnum(f: &CyclotomicField, q: Q) -> vosa_core::cyclotomic::CyclotomicNumber {
    f.ratio(*q.numer(), *q.denom())
}

fn bracket_failures(f: &CyclotomicField, c: Q, states: &[SuperVector], window: i64, l: impl Fn(i64, &SuperVector) -> SuperVector) -> (usize, usize) {
    let (mut checked, mut bad) = (0, 0);
    for w in states {
        for m in -window..=window {
            for n in -window..=window {
                let lhs = l(m, &l(n, w)).sub(&l(n, &l(m, w)));
                let mut rhs = l(m + n, w).scale(&f.int(m - n));
                if m + n == 0 {
                    rhs.add_scaled(w, &qnum(f, c * Q::new(m * m * m - m, 12)));
                }
                checked += 1;
                if lhs != rhs {
                    bad += 1;
                }
            }
        }
    }
    (checked, bad)
}

fn count_check(name: &str, reference: &str, checked: usize, bad: usize) -> Check {
    Check::new(name, reference, bad == 0, format!("{} checks, {} failures", checked, bad))
}

fn parity_sign(v: &TwistedModule, a: &SuperVector, b: &SuperVector) -> i64 {
    match (v.parity(a).bit(), v.parity(b).bit()) {
        (Some(1), Some(1)) => -1,
        _ => 1,
    }
}

fn untwisted_cases(v: &TwistedModule, states: &[SuperVector]) -> Vec<JacobiCase> {
    let mut out = Vec::new();
    for a in states {
        for b in states {
            out.push(JacobiCase { u: a.clone(), coset: Q::from_integer(0), v: b.clone(), sign: parity_sign(v, a, b) });
        }
    }
    out
}

fn quarter_levels(window: i64, step: i64) -> Vec<Q> {
    (-window * step..=window * step).map(|n| Q::new(n, step)).collect()
}

fn lattice_states(m: &TwistedLatticeModule) -> (Vec<(SuperVector, Q)>, Vec<SuperVector>) {
    let vl = &m.vl;
    let f = vl.field();
    let i = f.i().expect("order divisible by 4");
    let ea = vl.sector_state(&[1]);
    let eb = vl.sector_state(&[-1]);
    let h = vl.module.apply_mode(ModeIndex::new(0, -Q::from_integer(1)), &vl.vacuum()).expect("boson mode");
    let us = vec![(ea.add(&eb.scale(&i)), Q::new(1, 2)), (ea.sub(&eb.scale(&i)), Q::from_integer(0)), (h.clone(), Q::new(1, 2))];
    (us, vec![ea, eb, h])
}

fn fermion_twisted_jacobi(m: &TwistedFermionModule, window: i64, step: i64) -> (usize, usize) {
    let v = &m.rep.vosa;
    let states: Vec<SuperVector> = basis(v, Q::from_integer(1)).into_iter().skip(1).collect();
    let mut cases = Vec::new();
    for a in &states {
        let Some(c) = a.terms().next().and_then(|(mono, _)| mode_coset(m, mono)) else {
            continue;
        };
        for b in &states {
            cases.push(JacobiCase { u: a.clone(), coset: c, v: b.clone(), sign: parity_sign(v, a, b) });
        }
    }
    let ws = basis(m.module(), m.module().weight_offset + Q::from_integer(1));
    let total = cases.len() * ws.len() * (2 * window as usize + 1).pow(2) * (2 * (window * step) as usize + 1);
    let bad = jacobi_defect(&cases, &ws, &quarter_levels(window, step), window, 10, |x, n, w| vertex_mode(m, x, n, w), |x, n, w| {
        untwisted_mode(v, x, n, w)
    });
    (total, bad.len())
}

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    let f = cfg.field();
    let (w, window) = (cfg.w_q, cfg.window);
    let mut out = Vec::new();
    match suite {
        Suite::Virasoro => {
            let d = need_d(cfg, 2)?;
            let v = build_vfer(d, &f)?;
            let (c, b) = bracket_failures(&f, Q::new(d as i64, 2), &basis(&v, w), window, |m, x| virasoro_mode(&v, m, x));
            out.push(count_check(&format!("virasoro bracket V_fer^{} (c = {})", d, Q::new(d as i64, 2)), "fermionic Virasoro algebra", c, b));
            let vl = build_vl(&IntegralLattice::rank_one(1)?, &f)?;
            let (c, b) = bracket_failures(&f, Q::from_integer(1), &basis(&vl.module, w), window, |m, x| vl_virasoro(&vl, m, x));
            out.push(count_check("virasoro bracket V_Z (c = 1)", "lattice Virasoro algebra", c, b));
        }
        Suite::Jacobi => {
            let d = need_d(cfg, 2)?;
            let v = build_vfer(d, &f)?;
            let states: Vec<SuperVector> = basis(&v, Q::new(1, 2)).into_iter().skip(1).collect();
            let cases = untwisted_cases(&v, &states);
            let ws = basis(&v, Q::from_integer(1));
            let bad = jacobi_defect(&cases, &ws, &quarter_levels(window, 1), window, 10, |x, n, y| untwisted_mode(&v, x, n, y), |x, n, y| {
                untwisted_mode(&v, x, n, y)
            });
            out.push(count_check(&format!("jacobi V_fer^{}", d), "super Jacobi identity", cases.len() * ws.len(), bad.len()));
            let vl = build_vl(&IntegralLattice::rank_one(1)?, &f)?;
            let h = vl.module.apply_mode(ModeIndex::new(0, -Q::from_integer(1)), &vl.vacuum())?;
            let states = vec![h, vl.sector_state(&[1]), vl.sector_state(&[-1])];
            let cases = untwisted_cases(&vl.module, &states);
            let ws = basis(&vl.module, Q::from_integer(1));
            let md = |x: &SuperVector, n: Q, y: &SuperVector| untwisted_lattice_mode(&vl, x, n, y);
            let bad = jacobi_defect(&cases, &ws, &quarter_levels(window, 1), window, 10, md, md);
            out.push(count_check("jacobi V_Z", "super Jacobi identity", cases.len() * ws.len(), bad.len()));
        }
        Suite::TwistedJacobi => {
            let mods = lattice_twisted_modules(Transport::Perm, &f)?;
            for (s, m) in mods.iter().enumerate() {
                let (us, vs) = lattice_states(m);
                let mut cases = Vec::new();
                for (u, c) in &us {
                    for v in &vs {
                        cases.push(JacobiCase { u: u.clone(), coset: *c, v: v.clone(), sign: parity_sign(&m.vl.module, u, v) });
                    }
                }
                let vac = m.vacuum();
                let w1 = m.module.apply_mode(ModeIndex::new(0, Q::new(-1, 2)), &vac)?;
                let win = window.min(2);
                let bad = jacobi_defect(&cases, &[vac, w1], &quarter_levels(win, 4), win, 8, |x, n, y| m.mode(x, n, y), |x, n, y| {
                    untwisted_lattice_mode(&m.vl, x, n, y)
                });
                let name = format!("twisted jacobi lattice M_{}", if s == 0 { "+" } else { "-" });
                out.push(count_check(&name, "twisted Jacobi identity", cases.len() * 2, bad.len()));
            }
            let win = window.min(1);
            let (c, b) = fermion_twisted_jacobi(&build_parity_twisted(1, &f)?, win, 2);
            out.push(count_check("twisted jacobi M_sigma (d = 1)", "twisted Jacobi identity", c, b));
            let (c, b) = fermion_twisted_jacobi(&build_perm_twisted(2, false, &f)?, win, 2);
            out.push(count_check("twisted jacobi M_g (k = 2)", "twisted Jacobi identity", c, b));
        }
        Suite::Tau => {
            let l = IntegralLattice::rank_one(1)?;
            let tw = vosa_core::correspondence::transport_twist(Transport::Perm)?;
            let bound = cfg.bound;
            let trivial = CentralExtension::new(&l, &tw, ExtensionKind::Twisted)?;
            let ident = module_extension(&l, &tw)?;
            for (name, ext) in [("trivial", &trivial), ("identified", &ident)] {
                let r = verify_tau_homomorphism(&l, &tw, ext, bound);
                out.push(Check::new(
                    format!("tau homomorphism ({} cocycle)", name),
                    "tau is a well-defined homomorphism",
                    r.passed() && r.image_in_eta,
                    format!("{} products, {} violations", r.checked, r.violations.len()),
                ));
            }
            let chis = enumerate_chi(&l, &tw, &trivial, &f, bound)?;
            let mut exps: Vec<i64> = chis.iter().map(|c| c.exponents[0] * 8 / f.order() as i64).collect();
            exps.sort();
            out.push(Check::new("two chi extensions, pm zeta_8^n", "characters extending tau", exps == [1, 5], format!("chi(e_alpha) = zeta_8^{:?}", exps)));
            let c = delta_constants(&tw, &f, 4)?;
            let zero = (0..4).all(|r| c.get(0, 0, r).is_some_and(|x| x.is_zero()));
            out.push(Check::new("c_00r = 0", "constants c_mnr", zero, "r = 0..3"));
            let rho = (-3..=3).all(|a| rho_factor(&l, &tw, &f, &[a]).ok() == rho_factor(&l, &tw, &f, &[-a]).ok());
            out.push(Check::new("rho(nu a) = rho(a)", "constant rho", rho, "|a| <= 3"));
            let vw = vacuum_weight(&tw)?;
            out.push(Check::new("vacuum weight 1/16", "twisted vacuum weight", vw == Q::new(1, 16), vw.to_string()));
        }
        Suite::Phi => {
            let bf = build_phi(1, &f)?;
            out.push(from_report(&verify_phi_intertwines(&bf, w, window), "boson-fermion correspondence"));
        }
        Suite::Transport => {
            let bf = build_phi(1, &f)?;
            out.push(from_report(&verify_transport(&bf, w, window)?, "transported permutation"));
        }
        Suite::ParityStability => {
            let m = build_parity_twisted(1, &f)?;
            let pair = split_parity_unstable(m.module())?;
            let t = Q::from_integer(4);
            let half = m.module().graded_dimension(t).scale(&f.ratio(1, 2));
            out.push(series_check("pieces have equal graded dimension", "parity-unstable pair", &pair.graded_dimension(t), &half, t)?);
            let v = &m.rep.vosa;
            let states: Vec<SuperVector> = basis(v, Q::from_integer(1)).into_iter().skip(1).collect();
            let flipped = Flipped(&m);
            let levels = quarter_levels(window, 2);
            let (mut checked, mut bad) = (0, 0);
            for x in pair.basis(1, m.module().weight_offset + w) {
                let fx = pair.f_map(&x);
                checked += 1;
                if !pair.contains(-1, &fx) {
                    bad += 1;
                }
                for s in &states {
                    for &n in &levels {
                        checked += 1;
                        if pair.f_map(&vertex_mode(&flipped, s, n, &x)) != vertex_mode(&m, s, n, &fx) {
                            bad += 1;
                        }
                    }
                }
            }
            out.push(count_check("f intertwines flip(M^+) with M^-", "parity-stability construction", checked, bad));
            let vs: Vec<(SuperVector, u8)> = states.iter().map(|s| (s.clone(), v.parity(s).bit().unwrap_or(0))).collect();
            let xs: Vec<PairVector> = pair
                .basis(1, m.module().weight_offset + Q::from_integer(1))
                .into_iter()
                .flat_map(|b| [PairVector { left: b.clone(), right: SuperVector::new() }, PairVector { left: SuperVector::new(), right: b }])
                .collect();
            let ok = check_grading(&vs, &levels, &xs, |s, n, x| direct_sum_mode(&m, s, n, x), swap_grading, |x| PairVector {
                left: x.left.neg(),
                right: x.right.neg(),
            });
            out.push(Check::new("M (+) flip(M) is parity stable", "parity-stability predicate", ok.is_ok(), format!("{:?}", ok)));
            let wit = parity_obstruction(&m, &pair, 1);
            out.push(Check::new(
                "M^+ admits no compatible parity",
                "parity-unstable module",
                wit.is_some(),
                wit.map(|o| format!("odd mode acts by {} on the lowest weight vector", o.eigenvalue.to_text())).unwrap_or_default(),
            ));
            let bf = build_phi(1, &f)?;
            let mods = lattice_twisted_modules(Transport::Perm, &f)?;
            out.push(from_report(&flip_correspondence_check(&bf, &mods[0], &mods[1], w.min(Q::new(3, 2)), 1), "flip of a lattice module"));
        }
    }
    Ok(out)
}

fn evidence_checks(r: &EvidenceReport) -> Vec<Check> {
    r.items
        .iter()
        .enumerate()
        .map(|(i, it)| Check::new(format!("{:02} {}", i + 1, it.name), &format!("conjecture {}", r.conjecture), it.consistent, it.detail.clone()))
        .collect()
}

pub fn evidence(conjecture: u8, cfg: &RunConfig) -> Result<(Vec<Check>, String)> {
    let f = cfg.field();
    let k = need_even_k(cfg, 2)?;
    if k > 4 {
        return Err(CliError::Usage(format!("k = {} is beyond the supported range (2 or 4)", k)));
    }
    let r = match conjecture {
        1 => conjecture1_evidence(k, cfg.t_q, &f)?,
        _ => conjecture2_evidence(k, &f)?,
    };
    Ok((evidence_checks(&r), r.status().to_string()))
}
