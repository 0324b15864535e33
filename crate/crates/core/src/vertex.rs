//! Modes of vertex operators of freely generated superalgebras.
//!
//! For a state v = a_(N) u with a a generator, the mode v_(m+K) is peeled off
//! with the Borcherds identity in the form
//!
//! sum_j binom(m,j) (a_(N+j) u)_(m+K-j)
//!   = sum_j (-1)^j binom(N,j) [ a_(m+N-j) u_(K+j) - (-1)^N e u_(N+K-j) a_(m+j) ]
//!
//! with e = (-1)^{|a||u|}. Picking m in the index coset of the field of a
//! with 0 <= m < 1 leaves a single left term when m = 0 (the normal ordered
//! product) and otherwise lower-weight corrections for j >= 1. The same code
//! therefore serves untwisted and twisted modules.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cyclotomic::CyclotomicNumber;
use crate::superfock::{binom, sign_pow, FockMonomial, ModeIndex, Statistics, SuperVector, TwistedModule};
use crate::Q;

pub(crate) fn frac(x: Q) -> Q {
    x - Q::from_integer(x.floor().to_integer())
}

/// Weight of the state g(-wt) 1 generating the field of generator g.
pub fn generator_weight(v: &TwistedModule, g: usize) -> Q {
    match v.gens[g].stats {
        Statistics::Fermi => Q::new(1, 2),
        Statistics::Bose => Q::one(),
    }
}

/// The data needed to evaluate Y_M(v, x) for v in a freely generated V.
pub trait FieldRep {
    /// V, presented by generators; states of V are monomials in these.
    fn vosa(&self) -> &TwistedModule;
    /// The module M on which the fields act.
    fn module(&self) -> &TwistedModule;
    /// Coset in [0,1) of the indices mu of a_(mu) for the generator g.
    fn gen_coset(&self, g: usize) -> Q;
    /// a_(mu) w for the generating state a of generator g.
    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector;
    /// Coset of the modes of the base state of a sector; `None` when the
    /// base state is not an eigenvector of the twisting automorphism.
    fn base_coset(&self, _sector: &[i64]) -> Option<Q> {
        Some(Q::zero())
    }
    /// Mode of the base state of a sector (the vacuum unless overridden).
    fn base_mode(&self, sector: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        assert!(sector.iter().all(|c| *c == 0), "sector states need a lattice representation");
        if mu == -Q::one() {
            w.clone()
        } else {
            SuperVector::new()
        }
    }
}

/// Coset of the mode indices of Y_M(u, x) for a monomial u, if it has one.
pub fn mode_coset<R: FieldRep + ?Sized>(rep: &R, u: &FockMonomial) -> Option<Q> {
    let mut c = rep.base_coset(&u.sector)?;
    for x in &u.word {
        c += rep.gen_coset(x.gen);
    }
    Some(frac(c))
}

/// v_(mu) w.
pub fn vertex_mode<R: FieldRep + ?Sized>(rep: &R, v: &SuperVector, mu: Q, w: &SuperVector) -> SuperVector {
    let mut out = SuperVector::new();
    if w.is_zero() {
        return out;
    }
    for (mono, c) in v.terms() {
        let r = monomial_mode(rep, mono, mu, w);
        out.add_scaled(&r, c);
    }
    out
}

/// L(m) w = omega_(m+1) w.
pub fn virasoro<R: FieldRep + ?Sized>(rep: &R, omega: &SuperVector, m: i64, w: &SuperVector) -> SuperVector {
    vertex_mode(rep, omega, Q::from_integer(m + 1), w)
}

fn monomial_mode<R: FieldRep + ?Sized>(rep: &R, u: &FockMonomial, mu: Q, w: &SuperVector) -> SuperVector {
    let v = rep.vosa();
    let m_mod = rep.module();
    if let Some(c) = mode_coset(rep, u) {
        if !frac(mu - c).is_zero() {
            return SuperVector::new();
        }
    }
    let min_wt = m_mod.weight_offset;
    let wt_u = v.weight(u);
    if wt_u + m_mod.max_weight(w) - mu - Q::one() < min_wt {
        return SuperVector::new();
    }
    let Some((&first, rest)) = u.word.split_first() else {
        return rep.base_mode(&u.sector, mu, w);
    };
    let g = first.gen;
    let wt_a = crate::vertex::generator_weight(v, g);
    let big_n = first.level + wt_a - Q::one();
    let tail = FockMonomial { sector: u.sector.clone(), word: rest.to_vec() };
    let wt_tail = v.weight(&tail);
    let m = rep.gen_coset(g);
    let k = mu - m;
    let eps = if v.gens[g].stats == Statistics::Fermi && v.parity_bit(&tail) == 1 { -1 } else { 1 };
    let tail_vec = SuperVector::from_monomial(tail.clone(), v.one());
    let mut out = SuperVector::new();

    // a_(m+N-j) u_(K+j) w
    let wmax = m_mod.max_weight(w);
    let j1 = (wt_tail + wmax - k - Q::one() - min_wt).floor().to_integer();
    for j in 0..=j1.max(-1) {
        let coef = binom(big_n, j) * Q::from_integer(sign_pow(Q::from_integer(j)));
        if coef.is_zero() {
            continue;
        }
        let inner = monomial_mode(rep, &tail, k + Q::from_integer(j), w);
        if inner.is_zero() {
            continue;
        }
        let r = rep.gen_mode(g, m + big_n - Q::from_integer(j), &inner);
        out.add_scaled(&r, &v.field.rational(crate::superfock::to_big(coef)));
    }

    // -(-1)^N e u_(N+K-j) a_(m+j) w
    let outer_sign = -sign_pow(big_n) * eps;
    let j2 = (wmax - min_wt - m - Q::one() + wt_a).floor().to_integer();
    for j in 0..=j2.max(-1) {
        let coef = binom(big_n, j) * Q::from_integer(sign_pow(Q::from_integer(j)) * outer_sign);
        if coef.is_zero() {
            continue;
        }
        let aw = rep.gen_mode(g, m + Q::from_integer(j), w);
        if aw.is_zero() {
            continue;
        }
        let r = monomial_mode(rep, &tail, big_n + k - Q::from_integer(j), &aw);
        out.add_scaled(&r, &v.field.rational(crate::superfock::to_big(coef)));
    }

    // - sum_{j>=1} binom(m,j) (a_(N+j) u)_(m+K-j) w
    if !m.is_zero() {
        let j3 = (wt_tail - big_n - Q::one() + wt_a).floor().to_integer();
        for j in 1..=j3.max(0) {
            let coef = -binom(m, j);
            if coef.is_zero() {
                continue;
            }
            let level = big_n + Q::from_integer(j) + Q::one() - wt_a;
            let au = v.apply_unchecked(ModeIndex::new(g, level), &tail_vec);
            if au.is_zero() {
                continue;
            }
            let r = vertex_mode(rep, &au, m + k - Q::from_integer(j), w);
            out.add_scaled(&r, &v.field.rational(crate::superfock::to_big(coef)));
        }
    }
    out
}

/// A module whose generator fields are linear combinations of its own modes:
/// a_(mu) acts as sum_h c_h h(mu + 1 - wt a).
#[derive(Clone, Debug)]
pub struct GeneratedRep {
    pub vosa: TwistedModule,
    pub module: TwistedModule,
    /// field_map[g] expresses V-generator g through module generators
    pub field_map: Vec<Vec<(usize, CyclotomicNumber)>>,
    pub cosets: Vec<Q>,
}

impl GeneratedRep {
    /// V acting on itself.
    pub fn adjoint(v: &TwistedModule) -> Self {
        let field_map = (0..v.gens.len()).map(|g| alloc::vec![(g, v.one())]).collect();
        let cosets = (0..v.gens.len()).map(|_| Q::zero()).collect();
        GeneratedRep { vosa: v.clone(), module: v.clone(), field_map, cosets }
    }
}

impl FieldRep for GeneratedRep {
    fn vosa(&self) -> &TwistedModule {
        &self.vosa
    }

    fn module(&self) -> &TwistedModule {
        &self.module
    }

    fn gen_coset(&self, g: usize) -> Q {
        self.cosets[g]
    }

    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector {
        let level = mu + Q::one() - generator_weight(&self.vosa, g);
        self.module.apply_combo(&self.field_map[g], level, w)
    }
}

/// An instance of the (twisted) Jacobi identity: u has modes in coset + Z,
/// sign = (-1)^{|u||v|}.
#[derive(Clone, Debug)]
pub struct JacobiCase {
    pub u: SuperVector,
    pub coset: Q,
    pub v: SuperVector,
    pub sign: i64,
}

/// Coefficients of the Jacobi identity in Borcherds form on the window
/// m in coset + [-window, window], K in `ks`, N in [-window, window]; the
/// sums over j stop at `depth`. `mode` acts on the module, `vmode` on V.
/// Returns the failing (case, w, m, K, N).
pub fn jacobi_defect<M, V>(
    cases: &[JacobiCase],
    ws: &[SuperVector],
    ks: &[Q],
    window: i64,
    depth: i64,
    mode: M,
    vmode: V,
) -> Vec<(usize, usize, Q, Q, Q)>
where
    M: Fn(&SuperVector, Q, &SuperVector) -> SuperVector,
    V: Fn(&SuperVector, Q, &SuperVector) -> SuperVector,
{
    let mut bad = Vec::new();
    for (ic, case) in cases.iter().enumerate() {
        let Some(f) = case.u.terms().next().map(|(_, c)| c.field()) else {
            continue;
        };
        let coef = |q: Q| f.rational(crate::superfock::to_big(q));
        for (iw, w) in ws.iter().enumerate() {
            for im in -window..=window {
                for &k in ks {
                    for nn in -window..=window {
                        let m = case.coset + Q::from_integer(im);
                        let n = Q::from_integer(nn);
                        let mut lhs = SuperVector::new();
                        let mut rhs = SuperVector::new();
                        for j in 0..=depth {
                            let jq = Q::from_integer(j);
                            let c = binom(m, j);
                            if !c.is_zero() {
                                lhs.add_scaled(&mode(&vmode(&case.u, n + jq, &case.v), m + k - jq, w), &coef(c));
                            }
                            let c = binom(n, j) * Q::from_integer(sign_pow(jq));
                            if c.is_zero() {
                                continue;
                            }
                            let s2 = if nn.rem_euclid(2) == 0 { -case.sign } else { case.sign };
                            rhs.add_scaled(&mode(&case.u, m + n - jq, &mode(&case.v, k + jq, w)), &coef(c));
                            rhs.add_scaled(&mode(&case.v, n + k - jq, &mode(&case.u, m + jq, w)), &coef(c * Q::from_integer(s2)));
                        }
                        if lhs != rhs {
                            bad.push((ic, iw, m, k, n));
                        }
                    }
                }
            }
        }
    }
    bad
}
