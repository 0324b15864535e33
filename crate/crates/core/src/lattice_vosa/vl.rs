//! The untwisted lattice vertex operator superalgebra V_L = M(1) (x) C{L}.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Cocycle, IntegralLattice, IsometryTwist};
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::Result;
use crate::free_fermion::transform_state;
use crate::linalg;
use crate::superfock::{to_big, FockMonomial, Generator, SectorLattice, SuperVector, TwistedModule};
use crate::vertex::{vertex_mode, virasoro, FieldRep};
use crate::Q;

pub(crate) type Combo = Vec<(usize, CyclotomicNumber)>;

/// V_L with Heisenberg generators given by vectors of h = C (x) L.
#[derive(Clone, Debug)]
pub struct LatticeVosa {
    pub lattice: IntegralLattice,
    pub module: TwistedModule,
    /// cocycle of L-hat, values zeta_{modulus}^{..}
    pub cocycle: Cocycle,
    /// lattice basis vector e_i as a combination of the generators
    pub coords: Vec<Combo>,
}

/// Sector box used when enumerating states of V_L.
pub const DEFAULT_SECTOR_BOUND: i64 = 6;

/// V_L with generators h_i = e_i.
pub fn build_vl(lattice: &IntegralLattice, field: &CyclotomicField) -> Result<LatticeVosa> {
    let n = lattice.rank();
    let basis: Vec<Vec<CyclotomicNumber>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect();
    let labels: Vec<alloc::string::String> = (1..=n).map(|i| if n == 1 { "alpha".into() } else { format!("h{}", i) }).collect();
    LatticeVosa::with_generators(lattice, field, &labels, basis)
}

impl LatticeVosa {
    /// V_L presented through the Heisenberg generators b_a (lattice
    /// coordinates), which must form a basis of h.
    pub fn with_generators(
        lattice: &IntegralLattice,
        field: &CyclotomicField,
        labels: &[alloc::string::String],
        basis: Vec<Vec<CyclotomicNumber>>,
    ) -> Result<Self> {
        let n = lattice.rank();
        let g = lattice.gram_matrix(field);
        let pair = |a: &[CyclotomicNumber], b: &[CyclotomicNumber]| {
            let mut s = field.zero();
            for i in 0..n {
                for j in 0..n {
                    if !g[i][j].is_zero() {
                        s += &(&(&a[i] * &g[i][j]) * &b[j]);
                    }
                }
            }
            s
        };
        let gram: linalg::Matrix = basis.iter().map(|a| basis.iter().map(|b| pair(a, b)).collect()).collect();
        // columns of B are the generators; e_i = sum_a (B^{-1})_{a i} b_a
        let bmat: linalg::Matrix = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        let binv = linalg::inverse(field, &bmat)?;
        let coords = (0..n)
            .map(|i| (0..n).filter(|&a| !binv[a][i].is_zero()).map(|a| (a, binv[a][i].clone())).collect())
            .collect();
        let gens = labels.iter().zip(&basis).map(|(l, b)| Generator::boson(l, Q::zero(), b.clone())).collect();
        let module = TwistedModule {
            name: format!("V_L (rank {})", n),
            field: field.clone(),
            gens,
            gram,
            weight_offset: Q::zero(),
            central_charge: Q::from_integer(n as i64),
            sectors: Some(SectorLattice { gram: lattice.gram().clone(), bound: DEFAULT_SECTOR_BOUND }),
        };
        let trivial = IsometryTwist::identity(lattice, 1)?;
        let cocycle = super::cocycle_section(lattice, &trivial, super::ExtensionKind::Untwisted)?;
        Ok(LatticeVosa { lattice: lattice.clone(), module, cocycle, coords })
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.module.field
    }

    pub fn vacuum(&self) -> SuperVector {
        self.module.vacuum()
    }

    /// 1 (x) e^beta.
    pub fn sector_state(&self, beta: &[i64]) -> SuperVector {
        SuperVector::from_monomial(FockMonomial::sector(beta.to_vec()), self.module.one())
    }

    /// The vector beta of h as a combination of generators.
    pub fn combo(&self, beta: &[i64]) -> Combo {
        combine(&self.coords, beta)
    }

    /// Y(e^beta, x) = x^{<beta,gamma>} eps(beta,gamma) E^-(-beta,x) E^+(-beta,x) e^beta on 1 (x) e^gamma.
    pub fn sector_mode(&self, beta: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        let mut out = SuperVector::new();
        if !mu.is_integer() {
            return out;
        }
        let field = self.field();
        let v = &self.module;
        let combo = self.combo(beta);
        for (mono, c) in w.terms() {
            let gamma = &mono.sector;
            let p = self.lattice.pair(beta, gamma);
            let eps = field.root_of_unity(self.cocycle.modulus as u32, self.cocycle.eval(beta, gamma)).expect("cocycle root");
            let heis = (v.weight(mono) - v.sector_weight(gamma)).to_integer();
            let start = SuperVector::from_monomial(mono.clone(), c.clone());
            let plus = schur_chain(field, Q::one(), heis.max(0) as usize, &start, -1, |n, x| v.apply_combo(&combo, n, x));
            let target: Vec<i64> = beta.iter().zip(gamma).map(|(a, b)| a + b).collect();
            for (dp, pv) in plus.iter().enumerate() {
                let dm = dp as i64 - mu.to_integer() - 1 - p;
                if dm < 0 || pv.is_zero() {
                    continue;
                }
                let moved = move_sector(pv, &target);
                let minus = schur_chain(field, Q::one(), dm as usize, &moved, 1, |n, x| v.apply_combo(&combo, -n, x));
                out.add_scaled(&minus[dm as usize], &eps);
            }
        }
        out
    }
}

pub(crate) fn combine(coords: &[Combo], beta: &[i64]) -> Combo {
    let mut acc: alloc::collections::BTreeMap<usize, CyclotomicNumber> = alloc::collections::BTreeMap::new();
    for (i, &b) in beta.iter().enumerate() {
        if b == 0 {
            continue;
        }
        for (g, c) in &coords[i] {
            let e = acc.entry(*g).or_insert_with(|| c.field().zero());
            *e += &c.scale_int(b);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub(crate) fn move_sector(v: &SuperVector, target: &[i64]) -> SuperVector {
    v.terms().map(|(m, c)| (FockMonomial { sector: target.to_vec(), word: m.word.clone() }, c.clone())).collect()
}

/// P_0 = w, d P_d = sign sum_{0<n<=d} apply(n) P_{d-n} with d, n in step Z;
/// the coefficients of exp(sign sum_n apply(n) x^{-+n}/n) applied to w.
pub(crate) fn schur_chain(
    field: &CyclotomicField,
    step: Q,
    count: usize,
    w: &SuperVector,
    sign: i64,
    apply: impl Fn(Q, &SuperVector) -> SuperVector,
) -> Vec<SuperVector> {
    let mut out = vec![w.clone()];
    for i in 1..=count {
        let mut acc = SuperVector::new();
        for t in 1..=i {
            let prev = &out[i - t];
            if prev.is_zero() {
                continue;
            }
            acc = acc.add(&apply(step * Q::from_integer(t as i64), prev));
        }
        let d = step * Q::from_integer(i as i64);
        let c = field.rational(to_big(Q::from_integer(sign) / d));
        out.push(acc.scale(&c));
    }
    out
}

impl FieldRep for LatticeVosa {
    fn vosa(&self) -> &TwistedModule {
        &self.module
    }

    fn module(&self) -> &TwistedModule {
        &self.module
    }

    fn gen_coset(&self, _g: usize) -> Q {
        Q::zero()
    }

    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector {
        self.module.apply_combo(&[(g, self.module.one())], mu, w)
    }

    fn base_mode(&self, sector: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        if sector.iter().all(|c| *c == 0) {
            return if mu == -Q::one() { w.clone() } else { SuperVector::new() };
        }
        self.sector_mode(sector, mu, w)
    }
}

/// v_(n) w in V_L.
pub fn untwisted_lattice_mode(vl: &LatticeVosa, v: &SuperVector, n: Q, w: &SuperVector) -> SuperVector {
    vertex_mode(vl, v, n, w)
}

/// omega = 1/2 sum G^{ab} b_a(-1) b_b(-1) 1.
pub fn lattice_omega(vl: &LatticeVosa) -> SuperVector {
    let v = &vl.module;
    let ginv = linalg::inverse(&v.field, &v.gram).expect("nondegenerate form");
    let half = v.field.ratio(1, 2);
    let mut out = SuperVector::new();
    for (a, row) in ginv.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = v.apply_combo(&[(b, v.one())], -Q::one(), &v.vacuum());
            let s = v.apply_combo(&[(a, v.one())], -Q::one(), &s);
            out.add_scaled(&s, &(c * &half));
        }
    }
    out
}

pub fn vl_virasoro(vl: &LatticeVosa, m: i64, w: &SuperVector) -> SuperVector {
    virasoro(vl, &lattice_omega(vl), m, w)
}

/// The lift of nu to V_L: b(n) -> (nu b)(n), e^beta -> zeta_{2k}^s e^{nu beta}
/// where nu-hat e_beta = zeta_{2k}^s e_{nu beta} in L-hat.
pub fn lattice_automorphism(vl: &LatticeVosa, tw: &IsometryTwist, state: &SuperVector) -> Result<SuperVector> {
    let field = vl.field();
    let ext = super::CentralExtension::new(&vl.lattice, tw, super::ExtensionKind::Untwisted)?;
    let n = vl.lattice.rank();
    // nu b_g in generator coordinates
    let images: Vec<Combo> = vl
        .module
        .gens
        .iter()
        .map(|g| {
            let mut acc: alloc::collections::BTreeMap<usize, CyclotomicNumber> = alloc::collections::BTreeMap::new();
            for i in 0..n {
                let mut x = field.zero();
                for j in 0..n {
                    if tw.nu[i][j] != 0 {
                        x += &g.vector[j].scale_int(tw.nu[i][j]);
                    }
                }
                if x.is_zero() {
                    continue;
                }
                for (h, c) in &vl.coords[i] {
                    let e = acc.entry(*h).or_insert_with(|| field.zero());
                    *e += &(c * &x);
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    let mut moved = SuperVector::new();
    for (mono, c) in state.terms() {
        let img = ext.lift(tw, &ext.section(&mono.sector));
        let ph = tw.phase(field, img.phase)?;
        moved.add_term(FockMonomial { sector: img.vector.clone(), word: mono.word.clone() }, &(c * &ph));
    }
    Ok(transform_state(&vl.module, &vl.module, &images, &moved))
}
