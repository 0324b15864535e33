//! The constants rho, c_{mnr} and the vacuum weight of a lattice twist.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{IntegralLattice, IsometryTwist};
use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::Result;
use crate::superfock::{binom, to_big};
use crate::Q;

/// rho(a) = 2^{<nu^{k/2}a,a>/2} prod_{0<j<k/2} (1 - eta^{-j})^{<nu^j a,a>}, the
/// power of 2 only for even k.
pub fn rho_factor(lattice: &IntegralLattice, tw: &IsometryTwist, field: &CyclotomicField, a: &[i64]) -> Result<CyclotomicNumber> {
    let k = tw.k as i64;
    let mut acc = field.one();
    if k % 2 == 0 {
        let e = lattice.pair(&tw.apply(k / 2, a), a);
        if e != 0 {
            acc = field.sqrt2()?.pow(e)?;
        }
    }
    let mut j = 1;
    while 2 * j < k {
        let e = lattice.pair(&tw.apply(j, a), a);
        if e != 0 {
            let base = &field.one() - &tw.phase(field, -2 * j)?;
            acc = &acc * &base.pow(e)?;
        }
        j += 1;
    }
    Ok(acc)
}

/// wt 1 = (1/4k^2) sum_j j (k - j) dim h_(j).
pub fn vacuum_weight(tw: &IsometryTwist) -> Result<Q> {
    let k = tw.k as i64;
    let dims = super::eigenspace_dims(tw)?;
    let mut s = 0;
    for (j, d) in dims.iter().enumerate() {
        let j = j as i64;
        s += j * (k - j) * *d as i64;
    }
    Ok(Q::new(s, 4 * k * k))
}

/// Truncated bivariate series sum c[m][n] x^m y^n with m + n <= depth.
type Bivariate = Vec<Vec<CyclotomicNumber>>;

fn biv_zero(field: &CyclotomicField, depth: usize) -> Bivariate {
    (0..=depth).map(|m| vec![field.zero(); depth + 1 - m]).collect()
}

fn biv_mul(a: &Bivariate, b: &Bivariate, field: &CyclotomicField, depth: usize) -> Bivariate {
    let mut out = biv_zero(field, depth);
    for (m1, row) in a.iter().enumerate() {
        for (n1, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (m2, row2) in b.iter().enumerate() {
                for (n2, y) in row2.iter().enumerate() {
                    if m1 + m2 + n1 + n2 > depth || y.is_zero() {
                        continue;
                    }
                    out[m1 + m2][n1 + n2] += &(x * y);
                }
            }
        }
    }
    out
}

/// log(1 + u) for u without constant term.
fn biv_log1p(u: &Bivariate, field: &CyclotomicField, depth: usize) -> Bivariate {
    let mut out = biv_zero(field, depth);
    let mut pow = u.clone();
    for p in 1..=depth as i64 {
        let c = field.ratio(if p % 2 == 1 { 1 } else { -1 }, p);
        for (m, row) in pow.iter().enumerate() {
            for (n, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[m][n] += &(x * &c);
                }
            }
        }
        pow = biv_mul(&pow, u, field, depth);
    }
    out
}

/// c_{mnr} for m + n <= depth and r = 0..k-1.
#[derive(Clone, Debug)]
pub struct DeltaConstants {
    pub k: usize,
    pub depth: usize,
    pub values: BTreeMap<(usize, usize, usize), CyclotomicNumber>,
}

impl DeltaConstants {
    pub fn get(&self, m: usize, n: usize, r: usize) -> Option<&CyclotomicNumber> {
        self.values.get(&(m, n, r))
    }
}

/// Expand the logarithms defining c_{mnr}.
pub fn delta_constants(tw: &IsometryTwist, field: &CyclotomicField, depth: usize) -> Result<DeltaConstants> {
    let k = tw.k as i64;
    // (A - z B)/(1 - z) with A = (1+x)^{1/k} - 1, B the same in y
    let u_for = |z: &CyclotomicNumber| -> Result<Bivariate> {
        let d = (&field.one() - z).inverse()?;
        let mut u = biv_zero(field, depth);
        for m in 1..=depth {
            let b = field.rational(to_big(binom(Q::new(1, k), m as i64)));
            u[m][0] = &b * &d;
            u[0][m] = -&(&(&b * z) * &d);
        }
        Ok(u)
    };
    let half = field.ratio(1, 2);
    let mut values = BTreeMap::new();
    for r in 0..tw.k {
        let series = if r != 0 {
            let z = tw.phase(field, -2 * r as i64)?;
            let l = biv_log1p(&u_for(&z)?, field, depth);
            l.into_iter().map(|row| row.into_iter().map(|x| &x * &half).collect()).collect::<Bivariate>()
        } else {
            let mut acc = biv_zero(field, depth);
            for j in 1..k {
                let z = tw.phase(field, -2 * j)?;
                let l = biv_log1p(&u_for(&z)?, field, depth);
                for (m, row) in l.iter().enumerate() {
                    for (n, x) in row.iter().enumerate() {
                        acc[m][n] -= &(x * &half);
                    }
                }
            }
            acc
        };
        for (m, row) in series.into_iter().enumerate() {
            for (n, x) in row.into_iter().enumerate() {
                values.insert((m, n, r), x);
            }
        }
    }
    Ok(DeltaConstants { k: tw.k, depth, values })
}

/// The data entering the twisted vertex operators besides chi.
#[derive(Clone, Debug)]
pub struct TwistConstants {
    pub cmnr: DeltaConstants,
    pub vacuum_weight: Q,
    /// lambda-hat in h_(0), kept at zero
    pub lambda_hat: Vec<Q>,
}

impl TwistConstants {
    pub fn new(tw: &IsometryTwist, field: &CyclotomicField, depth: usize) -> Result<Self> {
        Ok(TwistConstants {
            cmnr: delta_constants(tw, field, depth)?,
            vacuum_weight: vacuum_weight(tw)?,
            lambda_hat: vec![Q::zero(); tw.rank()],
        })
    }
}
