//! nu-hat twisted modules V_L^T = S[nu] (x) U_T for twists with h_(0) = 0.
//!
//! Two evaluations of Y^nu-hat are provided: the defining one through W and
//! e^{Delta_x}, and the twisted Borcherds recursion on eigenvector
//! generators with the fields of the sector states as input.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::vl::{combine, schur_chain, Combo, LatticeVosa};
use super::{
    eigenspaces, lattice_omega, rho_factor, sublattices, ChiCharacter, IntegralLattice, IsometryTwist, TwistConstants,
};
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::free_fermion::transform_state;
use crate::linalg;
use crate::superfock::{binom, to_big, FockMonomial, Generator, SuperVector, TwistedModule};
use crate::vertex::{vertex_mode, FieldRep};
use crate::Q;

#[derive(Clone, Debug)]
pub struct TwistedLatticeModule {
    pub lattice: IntegralLattice,
    pub twist: IsometryTwist,
    /// V_L with generators e_i
    pub vl: LatticeVosa,
    /// V_L with eigenvector generators of nu
    pub vl_eig: LatticeVosa,
    /// S[nu], one generator per eigenvector
    pub module: TwistedModule,
    pub chi: ChiCharacter,
    pub constants: TwistConstants,
    cosets: Vec<Q>,
    eig_to_std: Vec<Combo>,
    /// K^{mn}_{ab}: Delta_x = sum K^{mn}_{ab} e_a(m) e_b(n) x^{-m-n}
    delta: BTreeMap<(usize, usize), Vec<(usize, usize, CyclotomicNumber)>>,
    inv_sqrt_k: CyclotomicNumber,
}

/// Depth of the c_{mnr} table built with a module.
pub const DELTA_DEPTH: usize = 8;

pub fn build_twisted_lattice_module(
    lattice: &IntegralLattice,
    tw: &IsometryTwist,
    chi: ChiCharacter,
    field: &CyclotomicField,
) -> Result<TwistedLatticeModule> {
    let k = tw.k as i64;
    let spaces = eigenspaces(tw, field)?;
    if !spaces[0].basis.is_empty() {
        return Err(Error::Unsupported("twisted lattice modules with h_(0) != 0"));
    }
    if chi.ext != super::module_extension(lattice, tw)? {
        return Err(Error::InvalidParameter("chi must be a character of L-hat_nu in the presentation identified with L-hat".into()));
    }
    let subl = sublattices(lattice, tw, 4);
    if subl.index_n_r != 1 {
        return Err(Error::Unsupported("twisted lattice modules with R != N"));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut basis = Vec::new();
    let mut cosets = Vec::new();
    for sp in &spaces {
        for (a, b) in sp.basis.iter().enumerate() {
            labels.push(if lattice.rank() == 1 { String::from("alpha") } else { format!("h{}_{}", sp.j, a) });
            basis.push(b.clone());
            cosets.push(Q::new(sp.j as i64, k));
        }
    }
    let vl = super::build_vl(lattice, field)?;
    let vl_eig = LatticeVosa::with_generators(lattice, field, &labels, basis.clone())?;
    let constants = TwistConstants::new(tw, field, DELTA_DEPTH)?;
    let gens = labels
        .iter()
        .zip(&basis)
        .zip(&cosets)
        .map(|((l, b), c)| Generator::boson(l, *c, b.clone()))
        .collect();
    let module = TwistedModule {
        name: format!("V_L^T (k = {})", k),
        field: field.clone(),
        gens,
        gram: vl_eig.module.gram.clone(),
        weight_offset: constants.vacuum_weight,
        central_charge: Q::from_integer(lattice.rank() as i64),
        sectors: None,
    };
    let eig_to_std = basis
        .iter()
        .map(|b| b.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
        .collect();
    // K^{mn}_{ab} = sum_r c_{mnr} sum_i (nu^{-r})_{ai} G^{ib}
    let ginv = linalg::inverse(field, &lattice.gram_matrix(field))?;
    let n = lattice.rank();
    let mut delta = BTreeMap::new();
    for m in 0..=DELTA_DEPTH {
        for nn in 0..=DELTA_DEPTH - m {
            let mut entries = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    let mut acc = field.zero();
                    for r in 0..tw.k {
                        let c = constants.cmnr.get(m, nn, r).expect("within depth");
                        if c.is_zero() {
                            continue;
                        }
                        let p = tw.power(-(r as i64));
                        for (i, row) in ginv.iter().enumerate() {
                            if p[a][i] != 0 && !row[b].is_zero() {
                                acc += &(&row[b] * c).scale_int(p[a][i]);
                            }
                        }
                    }
                    if !acc.is_zero() {
                        entries.push((a, b, acc));
                    }
                }
            }
            if !entries.is_empty() {
                delta.insert((m, nn), entries);
            }
        }
    }
    let inv_sqrt_k = field.sqrt_rational(1, k)?;
    let out = TwistedLatticeModule {
        lattice: lattice.clone(),
        twist: tw.clone(),
        vl,
        vl_eig,
        module,
        chi,
        constants,
        cosets,
        eig_to_std,
        delta,
        inv_sqrt_k,
    };
    for i in 0..n {
        out.prefactor(&lattice.unit(i))?;
    }
    Ok(out)
}

impl TwistedLatticeModule {
    pub fn field(&self) -> &CyclotomicField {
        &self.module.field
    }

    pub fn vacuum(&self) -> SuperVector {
        self.module.vacuum()
    }

    pub fn vacuum_weight(&self) -> Q {
        self.constants.vacuum_weight
    }

    /// k^{-<b,b>/2} rho(b) chi(e_b).
    pub fn prefactor(&self, beta: &[i64]) -> Result<CyclotomicNumber> {
        let field = self.field();
        let norm = self.lattice.norm(beta);
        let c = self
            .chi
            .eval(field, &self.chi.ext.section(beta))
            .ok_or(Error::Unsupported("sector outside the domain of chi"))?;
        let r = rho_factor(&self.lattice, &self.twist, field, beta)?;
        Ok(&(&self.inv_sqrt_k.pow(norm)? * &r) * &c)
    }

    /// Y^nu-hat(e^beta)_(mu) w.
    pub fn sector_mode(&self, beta: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        let mut out = SuperVector::new();
        if beta.iter().all(|c| *c == 0) {
            return if mu == -Q::one() { w.clone() } else { out };
        }
        let field = self.field();
        let k = self.twist.k as i64;
        let step = Q::new(1, k);
        let half_norm = Q::new(self.lattice.norm(beta), 2);
        let pre = self.prefactor(beta).expect("prefactor checked at construction");
        let combo = self.vl_eig.combo(beta);
        let v = &self.module;
        for (mono, c) in w.terms() {
            let heis = v.weight(mono) - v.weight_offset;
            let count = (heis * Q::from_integer(k)).to_integer().max(0) as usize;
            let start = SuperVector::from_monomial(mono.clone(), c.clone());
            let plus = schur_chain(field, step, count, &start, -1, |n, x| v.apply_combo(&combo, n, x));
            for (i, pv) in plus.iter().enumerate() {
                if pv.is_zero() {
                    continue;
                }
                let dm = step * Q::from_integer(i as i64) - mu - Q::one() + half_norm;
                let steps = dm * Q::from_integer(k);
                if dm < Q::zero() || !steps.is_integer() {
                    continue;
                }
                let minus = schur_chain(field, step, steps.to_integer() as usize, pv, 1, |n, x| v.apply_combo(&combo, -n, x));
                out.add_scaled(minus.last().unwrap(), &pre);
            }
        }
        out
    }

    /// A state of V_L in the e_i generators rewritten in eigenvector generators.
    pub fn to_eigen(&self, v: &SuperVector) -> SuperVector {
        transform_state(&self.vl.module, &self.vl_eig.module, &self.vl_eig.coords, v)
    }

    pub fn from_eigen(&self, v: &SuperVector) -> SuperVector {
        transform_state(&self.vl_eig.module, &self.vl.module, &self.eig_to_std, v)
    }

    /// Y^nu-hat(v)_(mu) w for v in the e_i presentation, through the twisted
    /// Borcherds recursion.
    pub fn mode(&self, v: &SuperVector, mu: Q, w: &SuperVector) -> SuperVector {
        vertex_mode(self, &self.to_eigen(v), mu, w)
    }

    fn apply_delta(&self, u: &SuperVector) -> BTreeMap<i64, SuperVector> {
        let v = &self.vl.module;
        let mut out: BTreeMap<i64, SuperVector> = BTreeMap::new();
        for ((m, n), entries) in &self.delta {
            for (a, b, c) in entries {
                let x = v.apply_combo(&[(*b, v.one())], Q::from_integer(*n as i64), u);
                if x.is_zero() {
                    continue;
                }
                let y = v.apply_combo(&[(*a, v.one())], Q::from_integer(*m as i64), &x);
                out.entry((m + n) as i64).or_default().add_scaled(&y, c);
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// e^{Delta_x} v = sum_s x^{-s} v_s.
    pub fn exp_delta(&self, v: &SuperVector) -> Result<BTreeMap<i64, SuperVector>> {
        let top = self.vl.module.max_weight(v);
        if top > Q::from_integer(DELTA_DEPTH as i64) {
            return Err(Error::InsufficientPrecision { need: format!("{}", top), have: format!("{}", DELTA_DEPTH) });
        }
        let field = self.field();
        let mut total: BTreeMap<i64, SuperVector> = BTreeMap::new();
        total.insert(0, v.clone());
        let mut cur = total.clone();
        let mut p = 1;
        while !cur.is_empty() {
            let mut next: BTreeMap<i64, SuperVector> = BTreeMap::new();
            for (s, x) in &cur {
                for (t, y) in self.apply_delta(x) {
                    next.entry(s + t).or_default().add_scaled(&y, &field.ratio(1, p));
                }
            }
            next.retain(|_, x| !x.is_zero());
            for (s, x) in &next {
                total.entry(*s).or_default().add_scaled(x, &field.one());
            }
            cur = next;
            p += 1;
        }
        total.retain(|_, x| !x.is_zero());
        Ok(total)
    }

    /// W(u)_(K) w for a monomial u of V_L in the e_i generators.
    fn w_mode(&self, u: &FockMonomial, kk: Q, w: &SuperVector) -> SuperVector {
        let Some((&first, rest)) = u.word.split_first() else {
            return self.sector_mode(&u.sector, kk, w);
        };
        let mut out = SuperVector::new();
        if w.is_zero() {
            return out;
        }
        let m = &self.module;
        let k = self.twist.k as i64;
        let step = Q::new(1, k);
        let tail = FockMonomial { sector: u.sector.clone(), word: rest.to_vec() };
        let n = -first.level;
        let combo = &self.vl_eig.coords[first.gen];
        let wt_tail = self.vl.module.weight(&tail);
        let wmax = m.max_weight(w);
        let vac = m.weight_offset;
        // annihilation part, placed on the right
        let mut mu = step;
        while mu <= wmax - vac {
            let hw = m.apply_combo(combo, mu, w);
            if !hw.is_zero() {
                let c = binom(-mu - Q::one(), (n - Q::one()).to_integer());
                if !c.is_zero() {
                    let r = self.w_mode(&tail, kk - mu - n, &hw);
                    out.add_scaled(&r, &self.field().rational(to_big(c)));
                }
            }
            mu += step;
        }
        // creation part, placed on the left
        let low = vac - wt_tail + kk - n + Q::one() - wmax;
        let mut mu = -step;
        while mu >= low {
            let c = binom(-mu - Q::one(), (n - Q::one()).to_integer());
            if !c.is_zero() {
                let inner = self.w_mode(&tail, kk - mu - n, w);
                if !inner.is_zero() {
                    let r = m.apply_combo(combo, mu, &inner);
                    out.add_scaled(&r, &self.field().rational(to_big(c)));
                }
            }
            mu -= step;
        }
        out
    }

    /// Y^nu-hat(v)_(mu) w = sum_s W(v_s)_(mu - s) w, with v in the e_i
    /// presentation.
    pub fn mode_via_delta(&self, v: &SuperVector, mu: Q, w: &SuperVector) -> Result<SuperVector> {
        let mut out = SuperVector::new();
        for (s, vs) in self.exp_delta(v)? {
            for (mono, c) in vs.terms() {
                let r = self.w_mode(mono, mu - Q::from_integer(s), w);
                out.add_scaled(&r, c);
            }
        }
        Ok(out)
    }

    /// L(m) w through the Borcherds recursion.
    pub fn virasoro(&self, m: i64, w: &SuperVector) -> SuperVector {
        self.mode(&lattice_omega(&self.vl), Q::from_integer(m + 1), w)
    }

    /// beta^T(mu) w for a lattice vector beta.
    pub fn heisenberg_mode(&self, beta: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        self.module.apply_combo(&combine(&self.vl_eig.coords, beta), mu, w)
    }
}

impl FieldRep for TwistedLatticeModule {
    fn vosa(&self) -> &TwistedModule {
        &self.vl_eig.module
    }

    fn module(&self) -> &TwistedModule {
        &self.module
    }

    fn gen_coset(&self, g: usize) -> Q {
        self.cosets[g]
    }

    fn gen_mode(&self, g: usize, mu: Q, w: &SuperVector) -> SuperVector {
        self.module.apply_combo(&[(g, self.module.one())], mu, w)
    }

    fn base_coset(&self, sector: &[i64]) -> Option<Q> {
        if sector.iter().all(|c| *c == 0) {
            Some(Q::zero())
        } else {
            None
        }
    }

    fn base_mode(&self, sector: &[i64], mu: Q, w: &SuperVector) -> SuperVector {
        self.sector_mode(sector, mu, w)
    }
}
