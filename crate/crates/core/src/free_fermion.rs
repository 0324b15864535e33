//! The free fermion vertex operator superalgebra V_fer^{(x)d}.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::linalg;
use crate::superfock::{FockMonomial, Generator, ModeIndex, SuperVector, TwistedModule, ZeroRule};
use crate::vertex::{vertex_mode, virasoro, GeneratedRep};
use crate::Q;

/// Fermions b_1..b_r with levels in Z+1/2 and the given Gram matrix.
pub fn build_free_fermions(field: &CyclotomicField, labels: &[&str], gram: linalg::Matrix) -> TwistedModule {
    let d = labels.len();
    TwistedModule {
        name: format!("free fermions ({})", d),
        field: field.clone(),
        gens: labels.iter().map(|l| Generator::fermion(l, Q::new(1, 2), ZeroRule::Annihilator)).collect(),
        gram,
        weight_offset: Q::zero(),
        central_charge: Q::new(d as i64, 2),
        sectors: None,
    }
}

/// V_fer^{(x)d} with orthonormal generators a1..ad.
pub fn build_vfer(d: usize, field: &CyclotomicField) -> Result<TwistedModule> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let labels: Vec<alloc::string::String> = (1..=d).map(|j| format!("a{}", j)).collect();
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut v = build_free_fermions(field, &refs, linalg::identity(field, d));
    v.name = format!("V_fer^{}", d);
    Ok(v)
}

fn half(x: i64) -> Q {
    Q::new(x, 2)
}

/// omega = 1/2 sum G^{il} b_i(-3/2) b_l(-1/2) 1.
pub fn fermion_omega(v: &TwistedModule) -> SuperVector {
    let ginv = linalg::inverse(&v.field, &v.gram).expect("nondegenerate Gram matrix");
    let mut out = SuperVector::new();
    let vac = v.vacuum();
    for (i, row) in ginv.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = v.apply_unchecked(ModeIndex::new(l, half(-1)), &vac);
            let s = v.apply_unchecked(ModeIndex::new(i, half(-3)), &s);
            out.add_scaled(&s, &c.scale(&crate::superfock::to_big(half(1))));
        }
    }
    out
}

/// v_n w in V itself.
pub fn untwisted_mode(v: &TwistedModule, state: &SuperVector, n: Q, w: &SuperVector) -> SuperVector {
    vertex_mode(&GeneratedRep::adjoint(v), state, n, w)
}

/// L(m) w through omega_(m+1).
pub fn virasoro_mode(v: &TwistedModule, m: i64, w: &SuperVector) -> SuperVector {
    virasoro(&GeneratedRep::adjoint(v), &fermion_omega(v), m, w)
}

/// Re-express a state through a linear change of generators: generator g of
/// `src` becomes sum_h c_h h in `dst`. Sectors are kept.
pub fn transform_state(src: &TwistedModule, dst: &TwistedModule, map: &[Vec<(usize, CyclotomicNumber)>], v: &SuperVector) -> SuperVector {
    let _ = src;
    let mut out = SuperVector::new();
    for (mono, c) in v.terms() {
        let mut cur = SuperVector::from_monomial(FockMonomial { sector: mono.sector.clone(), word: Vec::new() }, dst.one());
        for x in mono.word.iter().rev() {
            cur = dst.apply_combo(&map[x.gen], x.level, &cur);
        }
        out.add_scaled(&cur, c);
    }
    out
}

/// A permutation of tensor factors: the content of factor j moves to factor perm[j].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
}

impl SignedPermutation {
    /// The cycle (1 2 ... k) in the convention a^{(j)} -> a^{(j-1)}.
    pub fn cycle(k: usize) -> Self {
        SignedPermutation { perm: (0..k).map(|j| (j + k - 1) % k).collect() }
    }

    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(a, b);
        SignedPermutation { perm }
    }

    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        SignedPermutation { perm: other.perm.iter().map(|&j| self.perm[j]).collect() }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut inv = vec![0; self.perm.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        SignedPermutation { perm: inv }
    }
}

/// Signed permutation of tensor factors of V_fer^{(x)k}; factor j holds the
/// modes of generator j. The Koszul sign counts crossings of odd factors.
pub fn signed_permutation_action(v: &TwistedModule, g: &SignedPermutation, state: &SuperVector) -> SuperVector {
    let k = g.perm.len();
    let inv = g.inverse();
    let mut out = SuperVector::new();
    for (mono, c) in state.terms() {
        let mut factors: Vec<Vec<ModeIndex>> = vec![Vec::new(); k];
        for x in &mono.word {
            factors[x.gen].push(*x);
        }
        let odd: Vec<bool> = factors.iter().map(|f| f.len() % 2 == 1).collect();
        // new order of old factors
        let order: Vec<usize> = (0..k).map(|slot| inv.perm[slot]).collect();
        let mut crossings = 0;
        for a in 0..k {
            for b in (a + 1)..k {
                if order[a] > order[b] && odd[order[a]] && odd[order[b]] {
                    crossings += 1;
                }
            }
        }
        let mut word = Vec::with_capacity(mono.word.len());
        for (slot, &old) in order.iter().enumerate() {
            word.extend(factors[old].iter().map(|x| ModeIndex::new(slot, x.level)));
        }
        let m = FockMonomial { sector: mono.sector.clone(), word };
        out.add_term(m, &if crossings % 2 == 1 { -c } else { c.clone() });
    }
    let _ = v;
    out
}

/// sigma_V.
pub fn parity_map(v: &TwistedModule, state: &SuperVector) -> SuperVector {
    v.parity_map(state)
}
