//! Central extensions of L, the character tau and its extensions chi.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{box_vectors, commutator_exponents, det, mat_mul, mat_vec, IntMatrix, IntVector, IntegralLattice, IsometryTwist};
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionKind {
    /// L-hat, commutator C_0
    Untwisted,
    /// L-hat_nu, commutator C
    Twisted,
}

/// A bimultiplicative 2-cocycle with values zeta_{modulus}^{table[i][j]} on
/// basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    pub modulus: i64,
    pub table: IntMatrix,
}

impl Cocycle {
    pub fn trivial(rank: usize, modulus: i64) -> Self {
        Cocycle { modulus, table: vec![vec![0; rank]; rank] }
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * y * self.table[i][j];
            }
        }
        s.rem_euclid(self.modulus)
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|x| x.rem_euclid(self.modulus) == 0)
    }
}

fn commutator_exp(lattice: &IntegralLattice, tw: &IsometryTwist, which: ExtensionKind, a: &[i64], b: &[i64]) -> i64 {
    let (c0, c) = commutator_exponents(lattice, tw, a, b);
    match which {
        ExtensionKind::Untwisted => c0,
        ExtensionKind::Twisted => c,
    }
}

/// The cocycle equal to the commutator map on basis pairs i < j and trivial
/// otherwise; checked against the commutator map on a small box.
pub fn cocycle_section(lattice: &IntegralLattice, tw: &IsometryTwist, which: ExtensionKind) -> Result<Cocycle> {
    let n = lattice.rank();
    let mut c = Cocycle::trivial(n, tw.modulus());
    for i in 0..n {
        if commutator_exp(lattice, tw, which, &lattice.unit(i), &lattice.unit(i)) != 0 {
            return Err(Error::NoCocycle);
        }
        for j in i + 1..n {
            c.table[i][j] = commutator_exp(lattice, tw, which, &lattice.unit(i), &lattice.unit(j));
        }
    }
    if n <= 2 {
        let vs = box_vectors(n, if n == 1 { 5 } else { 2 });
        for a in &vs {
            for b in &vs {
                let lhs = (c.eval(a, b) - c.eval(b, a)).rem_euclid(c.modulus);
                if lhs != commutator_exp(lattice, tw, which, a, b) {
                    return Err(Error::NoCocycle);
                }
            }
        }
    }
    Ok(c)
}

/// The cocycle of L-hat_nu obtained from one of L-hat through
/// a x b = prod_{0<j<k/2} (-eta^j)^{<nu^{-j} a, b>} (a x_nu b).
pub fn identified_cocycle(lattice: &IntegralLattice, tw: &IsometryTwist, base: &Cocycle) -> Cocycle {
    let n = lattice.rank();
    let k = tw.k as i64;
    let mut out = base.clone();
    for i in 0..n {
        for l in 0..n {
            let mut f = 0;
            let mut j = 1;
            while 2 * j < k {
                f += (k + 2 * j) * lattice.pair(&tw.apply(-j, &lattice.unit(i)), &lattice.unit(l));
                j += 1;
            }
            out.table[i][l] = (out.table[i][l] - f).rem_euclid(out.modulus);
        }
    }
    out
}

/// L-hat_nu presented on the same set as L-hat through the identification
/// of the two products; the extension the twisted vertex operators use.
pub fn module_extension(lattice: &IntegralLattice, tw: &IsometryTwist) -> Result<CentralExtension> {
    let base = CentralExtension::new(lattice, tw, ExtensionKind::Untwisted)?;
    Ok(CentralExtension { kind: ExtensionKind::Twisted, cocycle: identified_cocycle(lattice, tw, &base.cocycle) })
}

/// (zeta^phase, vector) in a central extension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CentralExtElement {
    pub phase: i64,
    pub vector: IntVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtension {
    pub kind: ExtensionKind,
    pub cocycle: Cocycle,
}

impl CentralExtension {
    pub fn new(lattice: &IntegralLattice, tw: &IsometryTwist, kind: ExtensionKind) -> Result<Self> {
        Ok(CentralExtension { kind, cocycle: cocycle_section(lattice, tw, kind)? })
    }

    pub fn modulus(&self) -> i64 {
        self.cocycle.modulus
    }

    pub fn element(&self, phase: i64, vector: IntVector) -> CentralExtElement {
        CentralExtElement { phase: phase.rem_euclid(self.modulus()), vector }
    }

    /// The section e_v = (1, v).
    pub fn section(&self, v: &[i64]) -> CentralExtElement {
        self.element(0, v.to_vec())
    }

    pub fn mul(&self, x: &CentralExtElement, y: &CentralExtElement) -> CentralExtElement {
        let v = x.vector.iter().zip(&y.vector).map(|(a, b)| a + b).collect();
        self.element(x.phase + y.phase + self.cocycle.eval(&x.vector, &y.vector), v)
    }

    pub fn inv(&self, x: &CentralExtElement) -> CentralExtElement {
        let v: IntVector = x.vector.iter().map(|a| -a).collect();
        let p = -x.phase - self.cocycle.eval(&x.vector, &v);
        self.element(p, v)
    }

    pub fn pow(&self, x: &CentralExtElement, n: i64) -> CentralExtElement {
        let base = if n < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.element(0, vec![0; x.vector.len()]);
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Phase of x y x^{-1} y^{-1}.
    pub fn commutator(&self, x: &CentralExtElement, y: &CentralExtElement) -> i64 {
        let c = self.mul(&self.mul(x, y), &self.mul(&self.inv(x), &self.inv(y)));
        c.phase
    }

    /// e_1^{v_1} ... e_r^{v_r}.
    pub fn ordered_product(&self, basis: &[IntVector], coords: &[i64]) -> CentralExtElement {
        let n = basis.first().map_or(0, |b| b.len());
        let mut acc = self.element(0, vec![0; n]);
        for (b, &c) in basis.iter().zip(coords) {
            acc = self.mul(&acc, &self.pow(&self.section(b), c));
        }
        acc
    }

    /// nu-hat, determined by its values on the basis sections.
    pub fn lift(&self, tw: &IsometryTwist, x: &CentralExtElement) -> CentralExtElement {
        let n = x.vector.len();
        let units: Vec<IntVector> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let ordered = self.ordered_product(&units, &x.vector);
        let mut acc = self.element(x.phase - ordered.phase, vec![0; n]);
        for (i, &c) in x.vector.iter().enumerate() {
            let img = self.element(tw.lift[i], mat_vec(&tw.nu, &units[i]));
            acc = self.mul(&acc, &self.pow(&img, c));
        }
        acc
    }
}

/// Exponent of zeta_{2k} for tau(a nu-hat a^{-1}) = eta^{k<a,a>/2 - sum_j <nu^j a,a>/2}.
pub fn tau_exponent(lattice: &IntegralLattice, tw: &IsometryTwist, a: &[i64]) -> i64 {
    let (s, _) = tw.period_sums(lattice, a, a);
    (tw.k as i64 * lattice.norm(a) - s).rem_euclid(tw.modulus())
}

pub fn tau_character(lattice: &IntegralLattice, tw: &IsometryTwist, field: &CyclotomicField, a: &[i64]) -> Result<CyclotomicNumber> {
    tw.phase(field, tau_exponent(lattice, tw, a))
}

/// tau on the sections (1, v), v in (1 - nu)L, read off from a nu-hat a^{-1}
/// for a in a box; also returns the list of (a nu-hat a^{-1}, tau) pairs.
fn tau_table(
    lattice: &IntegralLattice,
    tw: &IsometryTwist,
    ext: &CentralExtension,
    bound: i64,
) -> (BTreeMap<IntVector, i64>, Vec<(CentralExtElement, i64)>, Vec<String>) {
    let m = ext.modulus();
    let mut table: BTreeMap<IntVector, i64> = BTreeMap::new();
    let mut pairs = Vec::new();
    let mut bad = Vec::new();
    for a in lattice.box_vectors(bound) {
        let x = ext.section(&a);
        let y = ext.mul(&x, &ext.inv(&ext.lift(tw, &x)));
        let t = tau_exponent(lattice, tw, &a);
        let normalized = (t - y.phase).rem_euclid(m);
        match table.get(&y.vector) {
            Some(&old) if old != normalized => {
                bad.push(format!("tau not well defined at {:?} (from a = {:?})", y.vector, a));
            }
            Some(_) => {}
            None => {
                table.insert(y.vector.clone(), normalized);
            }
        }
        pairs.push((y, t));
    }
    (table, pairs, bad)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauReport {
    pub checked: usize,
    pub violations: Vec<String>,
    /// every value of tau is a power of eta
    pub image_in_eta: bool,
}

impl TauReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Brute force check that tau is well defined and multiplicative on M-hat.
pub fn verify_tau_homomorphism(lattice: &IntegralLattice, tw: &IsometryTwist, ext: &CentralExtension, bound: i64) -> TauReport {
    let m = ext.modulus();
    let (table, pairs, mut violations) = tau_table(lattice, tw, ext, bound);
    let mut checked = pairs.len();
    for (x, tx) in &pairs {
        for (y, ty) in &pairs {
            let z = ext.mul(x, y);
            if let Some(norm) = table.get(&z.vector) {
                checked += 1;
                if (z.phase + norm - tx - ty).rem_euclid(m) != 0 {
                    violations.push(format!("tau not multiplicative at {:?} * {:?}", x.vector, y.vector));
                }
            }
        }
    }
    let image_in_eta = table.values().all(|e| e % 2 == 0) && pairs.iter().all(|(_, t)| t % 2 == 0);
    TauReport { checked, violations, image_in_eta }
}

/// Integer row reduction to a basis of the lattice spanned by the rows.
pub fn lattice_basis(gens: &[IntVector]) -> Vec<IntVector> {
    let dim = gens.first().map_or(0, |g| g.len());
    let mut rows: Vec<IntVector> = gens.iter().filter(|g| g.iter().any(|x| *x != 0)).cloned().collect();
    let mut basis = Vec::new();
    for col in 0..dim {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let piv = rows[p].clone();
            let mut done = true;
            for &i in &nz {
                if i == p {
                    continue;
                }
                let q = rows[i][col].div_euclid(piv[col]);
                for c in 0..dim {
                    rows[i][c] -= q * piv[c];
                }
                if rows[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                let mut b = rows.remove(p);
                if b[col] < 0 {
                    b.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(b);
                rows.retain(|r| r.iter().any(|x| *x != 0));
                break;
            }
        }
    }
    basis
}

fn gram_det(basis: &[IntVector]) -> i64 {
    let g: IntMatrix = basis.iter().map(|a| basis.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect()).collect();
    det(&g)
}

fn isqrt(n: i64) -> i64 {
    let mut r = 0;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Coordinates of v in the given basis, when integral.
pub fn coordinates(basis: &[IntVector], v: &[i64]) -> Option<IntVector> {
    let n = v.len();
    let r = basis.len();
    // rows: equations over the n coordinates, unknowns c_1..c_r
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| Q::from_integer(b[i])).collect();
            row.push(Q::from_integer(v[i]));
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Q::one() / a[row][col];
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for i in 0..n {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col];
                for c in 0..=r {
                    let t = a[row][c] * f;
                    a[i][c] -= t;
                }
            }
        }
        piv_cols.push(col);
        row += 1;
    }
    if a[row..].iter().any(|x| !x[r].is_zero()) {
        return None;
    }
    let mut c = vec![0; r];
    for (i, &col) in piv_cols.iter().enumerate() {
        if !a[i][r].is_integer() {
            return None;
        }
        c[col] = a[i][r].to_integer();
    }
    Some(c)
}

/// N = {a : <a, h_(0)> = 0}, M = (1 - nu)L and R = {a in N : C(a, N) = 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattices {
    pub n: Vec<IntVector>,
    pub m: Vec<IntVector>,
    pub r: Vec<IntVector>,
    pub index_r_m: i64,
    pub index_n_r: i64,
}

pub fn sublattices(lattice: &IntegralLattice, tw: &IsometryTwist, bound: i64) -> Sublattices {
    let rank = lattice.rank();
    let mut s = vec![vec![0; rank]; rank];
    for j in 0..tw.k as i64 {
        let p = tw.power(j);
        for a in 0..rank {
            for b in 0..rank {
                s[a][b] += p[a][b];
            }
        }
    }
    // S^T G
    let st: IntMatrix = (0..rank).map(|i| (0..rank).map(|j| s[j][i]).collect()).collect();
    let stg = mat_mul(&st, lattice.gram());
    let vs = lattice.box_vectors(bound);
    let n_gens: Vec<IntVector> = vs.iter().filter(|v| mat_vec(&stg, v).iter().all(|x| *x == 0)).cloned().collect();
    let n = lattice_basis(&n_gens);
    let m_gens: Vec<IntVector> =
        (0..rank).map(|i| lattice.unit(i).iter().zip(tw.apply(1, &lattice.unit(i))).map(|(a, b)| a - b).collect()).collect();
    let m = lattice_basis(&m_gens);
    let r_gens: Vec<IntVector> = n_gens
        .iter()
        .filter(|v| n.iter().all(|b| commutator_exponents(lattice, tw, v, b).1 == 0))
        .cloned()
        .collect();
    let r = lattice_basis(&r_gens);
    let index = |big: &[IntVector], small: &[IntVector]| -> i64 {
        if small.len() != big.len() {
            return 0;
        }
        if big.is_empty() {
            return 1;
        }
        isqrt(gram_det(small) / gram_det(big))
    };
    Sublattices { index_r_m: index(&r, &m), index_n_r: index(&n, &r), n, m, r }
}

/// A character of R-hat extending tau, fixed by its values on the
/// sections of a basis of R.
#[derive(Clone, Debug)]
pub struct ChiCharacter {
    pub ext: CentralExtension,
    pub r_basis: Vec<IntVector>,
    /// values on the basis sections, as exponents of zeta_n, n the field order
    pub exponents: Vec<i64>,
    pub values: Vec<CyclotomicNumber>,
    k: usize,
}

impl ChiCharacter {
    /// chi(x); None when the vector of x is not in R.
    pub fn eval(&self, field: &CyclotomicField, x: &CentralExtElement) -> Option<CyclotomicNumber> {
        let c = coordinates(&self.r_basis, &x.vector)?;
        let prod = self.ext.ordered_product(&self.r_basis, &c);
        let mut acc = field.root_of_unity(2 * self.k as u32, x.phase - prod.phase).ok()?;
        for (v, &e) in self.values.iter().zip(&c) {
            acc = &acc * &v.pow(e).ok()?;
        }
        Some(acc)
    }
}

/// All extensions of tau to R-hat with basis values among the roots of unity
/// of the field.
pub fn enumerate_chi(
    lattice: &IntegralLattice,
    tw: &IsometryTwist,
    ext: &CentralExtension,
    field: &CyclotomicField,
    bound: i64,
) -> Result<Vec<ChiCharacter>> {
    let subl = sublattices(lattice, tw, bound);
    let (table, _, bad) = tau_table(lattice, tw, ext, bound);
    if !bad.is_empty() {
        return Err(Error::InvalidParameter("tau is not well defined for this lift".into()));
    }
    let mut targets = Vec::new();
    for m in &subl.m {
        let t = table.get(m).ok_or_else(|| Error::InvalidParameter(format!("box too small to reach {:?}", m)))?;
        targets.push((m.clone(), tw.phase(field, *t)?));
    }
    let n = field.order() as i64;
    let r = subl.r.len();
    let mut out = Vec::new();
    let mut exps = vec![0i64; r];
    loop {
        let values: Vec<CyclotomicNumber> = exps.iter().map(|&e| field.root(e)).collect();
        let chi = ChiCharacter { ext: ext.clone(), r_basis: subl.r.clone(), exponents: exps.clone(), values, k: tw.k };
        let ok = targets.iter().all(|(m, t)| chi.eval(field, &ext.section(m)).as_ref() == Some(t));
        if ok {
            out.push(chi);
        }
        let mut i = 0;
        loop {
            if i == r {
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] < n {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}
