//! Twisted modules for V_fer^{(x)d}: the parity-twisted module M_sigma, the
//! cyclic permutation twisted modules M_g for even k, their parity-unstable
//! splits, and the flip construction that restores parity stability.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::free_fermion::{build_free_fermions, build_vfer, fermion_omega, transform_state};
use crate::linalg::Matrix;
use crate::qseries::{series_from_counts, PuiseuxSeries};
use crate::superfock::{to_big, FockMonomial, Generator, ModeIndex, Statistics, SuperVector, TwistedModule, ZeroRule};
use crate::vertex::{vertex_mode, FieldRep, GeneratedRep};
use crate::Q;

type Combo = Vec<(usize, CyclotomicNumber)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    /// parity twist of V_fer^{(x)d}
    Parity { d: usize },
    /// the cycle (1 2 ... k); `with_sigma` composes it with the parity map
    Cycle { k: usize, with_sigma: bool },
}

/// A twisted V_fer^{(x)d}-module with its twisted fields.
///
/// `rep.vosa` is V_fer^{(x)d} written in a basis of eigenvectors of the
/// twisting automorphism; `to_eigen` rewrites the standard generators a_j.
#[derive(Clone, Debug)]
pub struct TwistedFermionModule {
    pub kind: TwistKind,
    pub vfer: TwistedModule,
    pub rep: GeneratedRep,
    pub to_eigen: Vec<Combo>,
    omega: SuperVector,
}

impl FieldRep for TwistedFermionModule {
    fn vosa(&self) -> &TwistedModule {
        &self.rep.vosa
    }

    fn module(&self) -> &TwistedModule {
        &self.rep.module
    }

    fn gen_coset(&self, g: usize) -> Q {
        self.rep.gen_coset(g)
    }

    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector {
        self.rep.gen_mode(g, mu, w)
    }
}

impl TwistedFermionModule {
    pub fn module(&self) -> &TwistedModule {
        &self.rep.module
    }

    /// Rewrite a state of V_fer^{(x)d} in the eigenbasis.
    pub fn to_eigenbasis(&self, v: &SuperVector) -> SuperVector {
        transform_state(&self.vfer, &self.rep.vosa, &self.to_eigen, v)
    }

    /// Y^M(v, x) = sum v_n x^{-n-1}; v is given in the standard basis.
    pub fn mode(&self, v: &SuperVector, n: Q, w: &SuperVector) -> SuperVector {
        vertex_mode(self, &self.to_eigenbasis(v), n, w)
    }

    /// omega_(m+1) computed through the iterated twisted fields.
    pub fn omega_mode(&self, m: i64, w: &SuperVector) -> SuperVector {
        vertex_mode(self, &self.omega, Q::from_integer(m + 1), w)
    }

    /// The twisted Virasoro mode from its closed quadratic formula.
    pub fn virasoro(&self, m: i64, w: &SuperVector) -> SuperVector {
        match self.kind {
            TwistKind::Parity { .. } => l_sigma(self, m, w),
            TwistKind::Cycle { .. } => l_g(self, m, w),
        }
    }

    /// Lowest weight vectors of the module.
    pub fn vacuum(&self) -> SuperVector {
        self.module().vacuum()
    }
}

fn check_root(field: &CyclotomicField, m: u32) -> Result<()> {
    if field.order() % m != 0 {
        return Err(Error::MissingRoot { needed: m, order: field.order() });
    }
    Ok(())
}

/// M_sigma for V_fer^{(x)d}: generators b-j, b+j (j = 1..l) and e for odd d,
/// with integer levels and lowest weight d/16.
pub fn build_parity_twisted(d: usize, field: &CyclotomicField) -> Result<TwistedFermionModule> {
    check_root(field, 8)?;
    let vfer = build_vfer(d, field)?;
    let l = d / 2;
    let odd = d % 2 == 1;
    let mut gens = Vec::new();
    for j in 1..=l {
        gens.push(Generator::fermion(&format!("b-{}", j), Q::zero(), ZeroRule::Annihilator));
        gens.push(Generator::fermion(&format!("b+{}", j), Q::zero(), ZeroRule::Creator));
    }
    if odd {
        gens.push(Generator::fermion("e", Q::zero(), ZeroRule::Clifford));
    }
    let n = gens.len();
    let mut gram: Matrix = vec![vec![field.zero(); n]; n];
    for j in 0..l {
        gram[2 * j][2 * j + 1] = field.one();
        gram[2 * j + 1][2 * j] = field.one();
    }
    if odd {
        gram[n - 1][n - 1] = field.int(2);
    }
    let module = TwistedModule {
        name: format!("M_sigma (d={})", d),
        field: field.clone(),
        gens,
        gram,
        weight_offset: Q::new(d as i64, 16),
        central_charge: Q::new(d as i64, 2),
        sectors: None,
    };
    let inv_sqrt2 = field.sqrt2()?.inverse()?;
    let i = field.i()?;
    let mut field_map: Vec<Combo> = vec![Vec::new(); d];
    for j in 0..l {
        let (minus, plus) = (2 * j, 2 * j + 1);
        // a_j = (b+ + b-)/sqrt2, a_{j+l} = -i (b+ - b-)/sqrt2
        field_map[j] = vec![(minus, inv_sqrt2.clone()), (plus, inv_sqrt2.clone())];
        let c = &i * &inv_sqrt2;
        field_map[j + l] = vec![(minus, c.clone()), (plus, -&c)];
    }
    if odd {
        field_map[d - 1] = vec![(n - 1, inv_sqrt2)];
    }
    let cosets = vec![Q::new(1, 2); d];
    let to_eigen = (0..d).map(|g| vec![(g, field.one())]).collect();
    let omega = fermion_omega(&vfer);
    Ok(TwistedFermionModule {
        kind: TwistKind::Parity { d },
        rep: GeneratedRep { vosa: vfer.clone(), module, field_map, cosets },
        vfer,
        to_eigen,
        omega,
    })
}

/// Y^sigma(v, x) mode v_n acting on a state of M_sigma.
pub fn sigma_twisted_mode(m: &TwistedFermionModule, v: &SuperVector, n: Q, w: &SuperVector) -> SuperVector {
    m.mode(v, n, w)
}

/// L^sigma(m) = sum_j sum_{n > -m/2} (n + m/2) a_j(-n) a_j(n+m) + d/16 delta_{m,0}.
pub fn l_sigma(m: &TwistedFermionModule, mm: i64, w: &SuperVector) -> SuperVector {
    let module = m.module();
    let budget = (module.max_weight(w) - module.weight_offset).floor().to_integer();
    let mut out = SuperVector::new();
    for combo in &m.rep.field_map {
        let lo = (-mm).div_euclid(2) + 1;
        for n in lo..=(budget - mm).max(lo - 1) {
            let c = Q::from_integer(n) + Q::new(mm, 2);
            let a = module.apply_combo(combo, Q::from_integer(n + mm), w);
            let b = module.apply_combo(combo, Q::from_integer(-n), &a);
            out.add_scaled(&b, &module.field.rational(to_big(c)));
        }
    }
    if mm == 0 {
        out.add_scaled(w, &module.field.rational(to_big(module.weight_offset)));
    }
    out
}

/// M_g for g = (1 2 ... k), k even, or for sigma g when `with_sigma` is set.
///
/// Module generators c_r (r = 0..k-1) are the eigen-components b_r of a_1,
/// with levels in r/k + Z and <b_r, b_s> = delta_{r+s = 0 mod k}/k; c_0 has a
/// Clifford zero mode with c_0(0)^2 = 1/(2k).
pub fn build_perm_twisted(k: usize, with_sigma: bool, field: &CyclotomicField) -> Result<TwistedFermionModule> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!("k = {} must be even and at least 2", k)));
    }
    check_root(field, k as u32)?;
    let vfer = build_vfer(k, field)?;
    let kk = k as i64;
    let mut gram: Matrix = vec![vec![field.zero(); k]; k];
    for r in 0..k {
        gram[r][(k - r) % k] = field.ratio(1, kk);
    }
    let labels: Vec<String> = (0..k).map(|r| format!("b{}", r)).collect();
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let mut eig = build_free_fermions(field, &refs, gram.clone());
    eig.name = format!("V_fer^{} (eigenbasis)", k);

    let gens = (0..k)
        .map(|r| {
            let zero = if r == 0 { ZeroRule::Clifford } else { ZeroRule::Annihilator };
            Generator::fermion(&format!("c{}", r), Q::new(r as i64, kk), zero)
        })
        .collect();
    let module = TwistedModule {
        name: format!("M_g (k={}{})", k, if with_sigma { ", sigma" } else { "" }),
        field: field.clone(),
        gens,
        gram,
        weight_offset: Q::new(kk * kk + 2, 48 * kk),
        central_charge: Q::new(kk, 2),
        sectors: None,
    };
    let step = field.order() as i64 / kk;
    // a_j = sum_r s_i eta^{r i} b_r with i = (1 - j) mod k
    let to_eigen: Vec<Combo> = (0..k)
        .map(|j0| {
            let j = j0 as i64 + 1;
            let i = (1 - j).rem_euclid(kk);
            let s = if !with_sigma && i % 2 == 1 { -1 } else { 1 };
            (0..k).map(|r| (r, field.root(r as i64 * i * step).scale_int(s))).collect()
        })
        .collect();
    let field_map = (0..k).map(|r| vec![(r, field.one())]).collect();
    let cosets = (0..k).map(|r| crate::vertex::frac(Q::new(r as i64, kk) + Q::new(1, 2))).collect();
    let omega = fermion_omega(&eig);
    Ok(TwistedFermionModule {
        kind: TwistKind::Cycle { k, with_sigma },
        rep: GeneratedRep { vosa: eig, module, field_map, cosets },
        vfer,
        to_eigen,
        omega,
    })
}

/// L^g(m) = k sum_r sum_{n - r/k > -m/2} (n + m/2 - r/k) b_r(-n + r/k) b_{-r}(n + m - r/k)
///          + (k^2+2)/(48k) delta_{m,0}.
pub fn l_g(m: &TwistedFermionModule, mm: i64, w: &SuperVector) -> SuperVector {
    let module = m.module();
    let k = module.gens.len() as i64;
    let budget = (module.max_weight(w) - module.weight_offset).floor().to_integer() + 1;
    let mut out = SuperVector::new();
    for r in 0..k {
        let rk = Q::new(r, k);
        let lo = (-mm).div_euclid(2) + 1;
        for n in lo..=(budget - mm).max(lo - 1) {
            let n = Q::from_integer(n);
            let c = (n + Q::new(mm, 2) - rk) * Q::from_integer(k);
            if c <= Q::zero() {
                continue;
            }
            let a = module.apply_unchecked(ModeIndex::new(((k - r) % k) as usize, n + Q::from_integer(mm) - rk), w);
            if a.is_zero() {
                continue;
            }
            let b = module.apply_unchecked(ModeIndex::new(r as usize, -n + rk), &a);
            out.add_scaled(&b, &module.field.rational(to_big(c)));
        }
    }
    if mm == 0 {
        out.add_scaled(w, &module.field.rational(to_big(module.weight_offset)));
    }
    out
}

/// The +1 and -1 eigenspaces of P = c e(0) (-1)^N, where e(0) is the Clifford
/// zero mode, c normalizes P^2 = 1 and N counts the other fermionic modes.
#[derive(Clone, Debug)]
pub struct ParityUnstablePair {
    pub parent: TwistedModule,
    pub clifford: usize,
    pub scale: CyclotomicNumber,
}

/// Split a module with an odd Clifford zero mode into M^+ and M^-.
pub fn split_parity_unstable(m: &TwistedModule) -> Result<ParityUnstablePair> {
    let clifford = m
        .gens
        .iter()
        .enumerate()
        .find(|(g, gen)| {
            gen.stats == Statistics::Fermi
                && gen.zero == ZeroRule::Clifford
                && gen.coset.is_zero()
                && !m.gram[*g][*g].is_zero()
        })
        .map(|(g, _)| g)
        .ok_or(Error::ParityStable)?;
    // e(0)^2 = <e,e>/2, so c = sqrt(2 / <e,e>)
    let sq = m.gram[clifford][clifford].as_rational().ok_or(Error::Unsupported("irrational Clifford norm"))?;
    let (p, q) = (sq.numer().try_into().ok(), sq.denom().try_into().ok());
    let (Some(p), Some(q)): (Option<i64>, Option<i64>) = (p, q) else {
        return Err(Error::Unsupported("Clifford norm too large"));
    };
    let scale = m.field.sqrt_rational(2 * q, p)?;
    Ok(ParityUnstablePair { parent: m.clone(), clifford, scale })
}

impl ParityUnstablePair {
    fn zero_mode(&self) -> ModeIndex {
        ModeIndex::new(self.clifford, Q::zero())
    }

    fn others_odd(&self, mono: &FockMonomial) -> bool {
        let z = self.zero_mode();
        let n = mono.word.iter().filter(|x| **x != z && self.parent.gens[x.gen].stats == Statistics::Fermi).count();
        n % 2 == 1
    }

    /// P v.
    pub fn involution(&self, v: &SuperVector) -> SuperVector {
        let mut out = SuperVector::new();
        for (mono, c) in v.terms() {
            let single = SuperVector::from_monomial(mono.clone(), c.clone());
            let r = self.parent.apply_unchecked(self.zero_mode(), &single);
            let s = if self.others_odd(mono) { -&self.scale } else { self.scale.clone() };
            out.add_scaled(&r, &s);
        }
        out
    }

    /// (1 + sign P) v / 2.
    pub fn project(&self, sign: i64, v: &SuperVector) -> SuperVector {
        let pv = self.involution(v);
        let h = self.parent.field.ratio(1, 2);
        v.scale(&h).add(&pv.scale(&h.scale_int(sign)))
    }

    pub fn contains(&self, sign: i64, v: &SuperVector) -> bool {
        self.involution(v) == v.scale(&self.parent.field.int(sign))
    }

    fn free_monomials(&self, w: Q) -> Vec<FockMonomial> {
        let z = self.zero_mode();
        self.parent.basis_up_to(w).into_iter().filter(|m| !m.word.contains(&z)).collect()
    }

    /// Basis (1 + sign P) u over monomials u free of e(0), weight <= w.
    pub fn basis(&self, sign: i64, w: Q) -> Vec<SuperVector> {
        self.free_monomials(w)
            .into_iter()
            .map(|m| {
                let u = SuperVector::from_monomial(m, self.parent.one());
                u.add(&self.involution(&u).scale(&self.parent.field.int(sign)))
            })
            .collect()
    }

    /// Weight multiplicities of either piece (they coincide).
    pub fn weight_counts(&self, w: Q) -> alloc::collections::BTreeMap<Q, i64> {
        let mut dim = alloc::collections::BTreeMap::new();
        for m in self.free_monomials(w) {
            *dim.entry(self.parent.weight(&m)).or_insert(0) += 1;
        }
        dim
    }

    pub fn graded_dimension(&self, t: Q) -> PuiseuxSeries {
        let c = self.parent.central_charge;
        let dim = self.weight_counts(t + c / Q::from_integer(24));
        series_from_counts(&self.parent.field, &dim, c, t)
    }

    /// The map f: M^+ -> M^-, (1+P)(a + b) -> (1-P)(a - b) for a even, b odd
    /// and free of e(0). It intertwines Y o sigma_V on M^+ with Y on M^-.
    pub fn f_map(&self, x: &SuperVector) -> SuperVector {
        let z = self.zero_mode();
        let free = x.filter(|m| !m.word.contains(&z));
        let y = self.parent.parity_map(&free);
        y.sub(&self.involution(&y))
    }
}

/// The module (M, Y o sigma_V): odd generator fields and odd sectors change sign.
pub struct Flipped<'a, R: ?Sized>(pub &'a R);

impl<R: FieldRep + ?Sized> FieldRep for Flipped<'_, R> {
    fn vosa(&self) -> &TwistedModule {
        self.0.vosa()
    }

    fn module(&self) -> &TwistedModule {
        self.0.module()
    }

    fn gen_coset(&self, g: usize) -> Q {
        self.0.gen_coset(g)
    }

    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector {
        let r = self.0.gen_mode(g, mu, w);
        if self.0.vosa().gens[g].stats == Statistics::Fermi {
            r.neg()
        } else {
            r
        }
    }

    fn base_coset(&self, sector: &[i64]) -> Option<Q> {
        self.0.base_coset(sector)
    }

    fn base_mode(&self, sector: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        let r = self.0.base_mode(sector, mu, w);
        let v = self.0.vosa();
        if v.parity_bit(&FockMonomial::sector(sector.to_vec())) == 1 {
            r.neg()
        } else {
            r
        }
    }
}

pub fn flip_module<R: FieldRep + ?Sized>(m: &R) -> Flipped<'_, R> {
    Flipped(m)
}

/// An element of M (+) flip(M).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PairVector {
    pub left: SuperVector,
    pub right: SuperVector,
}

/// v_n on M (+) flip(M).
pub fn direct_sum_mode<R: FieldRep + ?Sized>(m: &R, v: &SuperVector, n: Q, x: &PairVector) -> PairVector {
    PairVector { left: vertex_mode(m, v, n, &x.left), right: vertex_mode(&Flipped(m), v, n, &x.right) }
}

/// The grading of M (+) flip(M) whose involution swaps the summands.
pub fn swap_grading(x: &PairVector) -> PairVector {
    PairVector { left: x.right.clone(), right: x.left.clone() }
}

/// Check Theta v_n = (-1)^{|v|} v_n Theta for the given states, modes and
/// vectors; returns the first failure.
pub fn check_grading<S: Clone + PartialEq>(
    vs: &[(SuperVector, u8)],
    ns: &[Q],
    xs: &[S],
    act: impl Fn(&SuperVector, Q, &S) -> S,
    theta: impl Fn(&S) -> S,
    neg: impl Fn(&S) -> S,
) -> core::result::Result<(), (usize, Q, usize)> {
    for (iv, (v, p)) in vs.iter().enumerate() {
        for &n in ns {
            for (ix, x) in xs.iter().enumerate() {
                let lhs = theta(&act(v, n, x));
                let mut rhs = act(v, n, &theta(x));
                if *p == 1 {
                    rhs = neg(&rhs);
                }
                if lhs != rhs {
                    return Err((iv, n, ix));
                }
            }
        }
    }
    Ok(())
}

/// An odd mode acting by a nonzero scalar on a one-dimensional lowest weight
/// space, which rules out any parity grading compatible with the fields.
#[derive(Clone, Debug)]
pub struct ParityObstruction {
    pub lowest: SuperVector,
    pub state: SuperVector,
    pub mode: Q,
    pub eigenvalue: CyclotomicNumber,
}

/// Search the odd generator states of V for such a witness on M^{sign}.
pub fn parity_obstruction<R: FieldRep + ?Sized>(rep: &R, pair: &ParityUnstablePair, sign: i64) -> Option<ParityObstruction> {
    let module = rep.module();
    let lowest_basis = pair.basis(sign, module.weight_offset);
    if lowest_basis.len() != 1 {
        return None;
    }
    let lowest = lowest_basis.into_iter().next()?;
    let v = rep.vosa();
    let half = Q::new(1, 2);
    for g in 0..v.gens.len() {
        if v.gens[g].stats != Statistics::Fermi {
            continue;
        }
        let state = v.apply_unchecked(ModeIndex::new(g, -half), &v.vacuum());
        let mode = -half;
        let r = vertex_mode(rep, &state, mode, &lowest);
        if r.is_zero() {
            continue;
        }
        // r = lambda * lowest?
        let (m0, c0) = lowest.terms().next()?;
        let lambda = r.coeff(m0)?.checked_div(c0).ok()?;
        if r == lowest.scale(&lambda) {
            return Some(ParityObstruction { lowest, state, mode, eigenvalue: lambda });
        }
    }
    None
}
