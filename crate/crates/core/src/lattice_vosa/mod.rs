//! Lattice vertex operator superalgebras V_L, the central extensions of L
//! attached to an isometry, and the twisted modules built from them.
//!
//! Phases of central extension elements are stored as exponents of
//! zeta_{2k}, which contains both eta_0 and every value of C_0 and C.

mod constants;
mod group;
mod twisted;
mod vl;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub use constants::{delta_constants, rho_factor, vacuum_weight, DeltaConstants, TwistConstants};
pub use group::{
    cocycle_section, enumerate_chi, identified_cocycle, lattice_basis, module_extension, sublattices, tau_character, tau_exponent,
    verify_tau_homomorphism, CentralExtElement, CentralExtension, ChiCharacter, Cocycle, ExtensionKind,
    Sublattices, TauReport,
};
pub use twisted::{build_twisted_lattice_module, TwistedLatticeModule};
pub use vl::{
    build_vl, lattice_automorphism, lattice_omega, untwisted_lattice_mode, vl_virasoro, LatticeVosa,
};

pub type IntVector = Vec<i64>;
pub type IntMatrix = Vec<Vec<i64>>;

/// A positive definite integral lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: IntMatrix,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("Gram matrix must be square and nonempty".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParameter("Gram matrix must be symmetric".into()));
                }
            }
        }
        for m in 1..=n {
            let minor: IntMatrix = gram[..m].iter().map(|r| r[..m].to_vec()).collect();
            if det(&minor) <= 0 {
                return Err(Error::InvalidParameter(format!("leading minor of size {} is not positive", m)));
            }
        }
        Ok(IntegralLattice { gram })
    }

    /// Z alpha with <alpha, alpha> = n.
    pub fn rank_one(n: i64) -> Result<Self> {
        Self::new(vec![vec![n]])
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
    }

    pub fn norm(&self, a: &[i64]) -> i64 {
        self.pair(a, a)
    }

    /// |a| = <a,a> mod 2.
    pub fn parity(&self, a: &[i64]) -> u8 {
        self.norm(a).rem_euclid(2) as u8
    }

    pub fn unit(&self, i: usize) -> IntVector {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    /// All coefficient vectors with entries in [-bound, bound].
    pub fn box_vectors(&self, bound: i64) -> Vec<IntVector> {
        box_vectors(self.rank(), bound)
    }

    pub fn gram_matrix(&self, field: &CyclotomicField) -> Matrix {
        crate::linalg::from_ints(field, &self.gram)
    }
}

pub(crate) fn box_vectors(rank: usize, bound: i64) -> Vec<IntVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            for c in -bound..=bound {
                let mut w = v.clone();
                w.push(c);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Fraction-free determinant.
pub(crate) fn det(m: &IntMatrix) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        (sign * a[n - 1][n - 1]) as i64
    }
}

pub(crate) fn mat_vec(m: &IntMatrix, v: &[i64]) -> IntVector {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub(crate) fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter().map(|r| (0..n).map(|j| r.iter().enumerate().map(|(l, x)| x * b[l][j]).sum()).collect()).collect()
}

pub(crate) fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// An isometry nu of period k together with a lift to the central
/// extensions, given by the phases of nu-hat on the basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryTwist {
    pub nu: IntMatrix,
    pub k: usize,
    /// nu-hat e_i = zeta_{2k}^{lift[i]} e_{nu e_i}
    pub lift: Vec<i64>,
}

impl IsometryTwist {
    pub fn new(lattice: &IntegralLattice, nu: IntMatrix, k: usize) -> Result<Self> {
        let n = lattice.rank();
        if k == 0 {
            return Err(Error::InvalidParameter("period must be positive".into()));
        }
        if nu.len() != n || nu.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("isometry has the wrong size".into()));
        }
        let tw = IsometryTwist { nu, k, lift: vec![0; n] };
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (lattice.unit(i), lattice.unit(j));
                if lattice.pair(&tw.apply(1, &a), &tw.apply(1, &b)) != lattice.pair(&a, &b) {
                    return Err(Error::InvalidParameter("nu does not preserve the form".into()));
                }
            }
        }
        let mut p = int_identity(n);
        for _ in 0..k {
            p = mat_mul(&tw.nu, &p);
        }
        if p != int_identity(n) {
            return Err(Error::InvalidParameter(format!("nu^{} is not the identity", k)));
        }
        Ok(tw)
    }

    pub fn with_lift(mut self, lift: Vec<i64>) -> Result<Self> {
        if lift.len() != self.nu.len() {
            return Err(Error::InvalidParameter("one lift phase per basis vector".into()));
        }
        self.lift = lift;
        Ok(self)
    }

    pub fn identity(lattice: &IntegralLattice, k: usize) -> Result<Self> {
        Self::new(lattice, int_identity(lattice.rank()), k)
    }

    pub fn rank(&self) -> usize {
        self.nu.len()
    }

    /// nu^j for any integer j.
    pub fn power(&self, j: i64) -> IntMatrix {
        let e = j.rem_euclid(self.k as i64);
        let mut m = int_identity(self.rank());
        for _ in 0..e {
            m = mat_mul(&self.nu, &m);
        }
        m
    }

    pub fn apply(&self, j: i64, v: &[i64]) -> IntVector {
        mat_vec(&self.power(j), v)
    }

    /// Order 2k of the phase group.
    pub fn modulus(&self) -> i64 {
        2 * self.k as i64
    }

    /// eta = zeta_{2k}^2.
    pub fn eta(&self, field: &CyclotomicField) -> Result<CyclotomicNumber> {
        self.phase(field, 2)
    }

    /// eta_0 = (-1)^k eta.
    pub fn eta0_exponent(&self) -> i64 {
        let k = self.k as i64;
        (k * k + 2).rem_euclid(2 * k)
    }

    pub fn eta0(&self, field: &CyclotomicField) -> Result<CyclotomicNumber> {
        self.phase(field, self.eta0_exponent())
    }

    /// zeta_{2k}^e.
    pub fn phase(&self, field: &CyclotomicField, e: i64) -> Result<CyclotomicNumber> {
        field.root_of_unity(2 * self.k as u32, e)
    }

    /// sum_j <nu^j a, b> and sum_j j <nu^j a, b> over one period.
    pub(crate) fn period_sums(&self, lattice: &IntegralLattice, a: &[i64], b: &[i64]) -> (i64, i64) {
        let mut s = 0;
        let mut t = 0;
        let mut cur = a.to_vec();
        for j in 0..self.k as i64 {
            let p = lattice.pair(&cur, b);
            s += p;
            t += j * p;
            cur = mat_vec(&self.nu, &cur);
        }
        (s, t)
    }
}

/// Exponents of zeta_{2k} for C_0(a,b) and C(a,b).
pub fn commutator_exponents(lattice: &IntegralLattice, tw: &IsometryTwist, a: &[i64], b: &[i64]) -> (i64, i64) {
    let k = tw.k as i64;
    let m = 2 * k;
    let pa = lattice.norm(a) * lattice.norm(b);
    let c0 = k * (pa + lattice.pair(a, b));
    let mut c = k * pa;
    let mut cur = a.to_vec();
    for j in 0..k {
        c += (k + 2 * j) * lattice.pair(&cur, b);
        cur = mat_vec(&tw.nu, &cur);
    }
    (c0.rem_euclid(m), c.rem_euclid(m))
}

/// (C_0(a,b), C(a,b)).
pub fn commutator_maps(
    lattice: &IntegralLattice,
    tw: &IsometryTwist,
    field: &CyclotomicField,
    a: &[i64],
    b: &[i64],
) -> Result<(CyclotomicNumber, CyclotomicNumber)> {
    let (c0, c) = commutator_exponents(lattice, tw, a, b);
    Ok((tw.phase(field, c0)?, tw.phase(field, c)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOrderEntry {
    pub vector: IntVector,
    /// <nu^{k/2} a, a>
    pub half_pairing: i64,
    pub parity: u8,
    /// <nu^{k/2} a, a> in 2Z + |a|
    pub no_doubling_needed: bool,
    /// sum_j <nu^j a, a> in |a| + <nu^{k/2} a, a> + 2Z
    pub condition1: bool,
    /// sum_j j <nu^j a, a> in (k/2) <nu^{k/2} a, a> + kZ
    pub condition2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftOrderReport {
    pub entries: Vec<LiftOrderEntry>,
    pub must_double: bool,
}

/// Whether k has to be doubled so that the lift has period k.
pub fn lift_order_check(lattice: &IntegralLattice, tw: &IsometryTwist) -> Result<LiftOrderReport> {
    if tw.k % 2 != 0 {
        return Err(Error::InvalidParameter("lift order check needs even k".into()));
    }
    let k = tw.k as i64;
    let mut entries = Vec::new();
    for i in 0..lattice.rank() {
        let a = lattice.unit(i);
        let half_pairing = lattice.pair(&tw.apply(k / 2, &a), &a);
        let parity = lattice.parity(&a);
        let (s, t) = tw.period_sums(lattice, &a, &a);
        entries.push(LiftOrderEntry {
            vector: a,
            half_pairing,
            parity,
            no_doubling_needed: (half_pairing - parity as i64).rem_euclid(2) == 0,
            condition1: (s - parity as i64 - half_pairing).rem_euclid(2) == 0,
            condition2: (t - k / 2 * half_pairing).rem_euclid(k) == 0,
        });
    }
    let must_double = entries.iter().any(|e| !e.no_doubling_needed);
    Ok(LiftOrderReport { entries, must_double })
}

/// The eigenspace of nu on h = C (x) L for the eigenvalue eta^j.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub j: usize,
    /// basis vectors in lattice coordinates
    pub basis: Vec<Vec<CyclotomicNumber>>,
}

/// P_j = (1/k) sum_l eta^{-jl} nu^l as a matrix.
pub fn eigen_projection(tw: &IsometryTwist, field: &CyclotomicField, j: usize) -> Result<Matrix> {
    let n = tw.rank();
    let mut p: Matrix = (0..n).map(|_| (0..n).map(|_| field.zero()).collect()).collect();
    let inv_k = field.ratio(1, tw.k as i64);
    for l in 0..tw.k as i64 {
        let c = &tw.phase(field, -2 * (j as i64) * l)? * &inv_k;
        let m = tw.power(l);
        for (r, row) in p.iter_mut().enumerate() {
            for (s, x) in row.iter_mut().enumerate() {
                if m[r][s] != 0 {
                    *x += &c.scale_int(m[r][s]);
                }
            }
        }
    }
    Ok(p)
}

/// Eigenspaces h_(j) for j = 0..k-1, bases taken from columns of P_j.
pub fn eigenspaces(tw: &IsometryTwist, field: &CyclotomicField) -> Result<Vec<Eigenspace>> {
    let n = tw.rank();
    let mut out = Vec::new();
    for j in 0..tw.k {
        let p = eigen_projection(tw, field, j)?;
        let mut basis: Vec<Vec<CyclotomicNumber>> = Vec::new();
        for c in 0..n {
            let col: Vec<CyclotomicNumber> = (0..n).map(|r| p[r][c].clone()).collect();
            if col.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut trial = basis.clone();
            trial.push(col.clone());
            if crate::linalg::rank(&trial) == trial.len() {
                basis.push(col);
            }
        }
        out.push(Eigenspace { j, basis });
    }
    Ok(out)
}

/// dim h_(j) for j = 0..k-1.
pub fn eigenspace_dims(tw: &IsometryTwist) -> Result<Vec<usize>> {
    let field = CyclotomicField::new(2 * tw.k as u32);
    Ok(eigenspaces(tw, &field)?.iter().map(|e| e.basis.len()).collect())
}
