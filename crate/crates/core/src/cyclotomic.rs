//! Exact arithmetic in the cyclotomic field Q(zeta_n).
//!
//! Values carry a shared handle to their field, which holds the n-th
//! cyclotomic polynomial and a table of the reductions of x^j for j < n.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer coefficients (low degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &den);
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qlen = rem.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    q
}

fn totient(n: u32) -> usize {
    (1..=n).filter(|j| j.gcd(&n) == 1).count()
}

#[derive(Debug)]
struct FieldData {
    order: u32,
    degree: usize,
    phi: Vec<i64>,
    // reduce[j] = coordinates of x^j modulo Phi_n, for 0 <= j < n
    reduce: Vec<Vec<i64>>,
}

impl FieldData {
    fn new(order: u32) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let phi = cyclotomic_polynomial(order);
        let degree = totient(order);
        let mut reduce = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..order {
            reduce.push(cur.clone());
            // multiply by x, then fold the top coefficient back using the monic Phi
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            next[1..degree].copy_from_slice(&cur[..(degree - 1)]);
            if top != 0 {
                for (i, slot) in next.iter_mut().enumerate() {
                    *slot -= top * phi[i];
                }
            }
            cur = next;
        }
        FieldData { order, degree, phi, reduce }
    }
}

/// Handle to Q(zeta_n); cheap to clone.
#[derive(Clone, Debug)]
pub struct CyclotomicField(Arc<FieldData>);

impl CyclotomicField {
    pub fn new(order: u32) -> Self {
        CyclotomicField(Arc::new(FieldData::new(order)))
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn zero(&self) -> CyclotomicNumber {
        CyclotomicNumber { field: self.clone(), coords: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CyclotomicNumber {
        self.rational(BigRational::one())
    }

    pub fn rational(&self, r: BigRational) -> CyclotomicNumber {
        let mut x = self.zero();
        x.coords[0] = r;
        x
    }

    pub fn int(&self, v: i64) -> CyclotomicNumber {
        self.rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(&self, p: i64, q: i64) -> CyclotomicNumber {
        self.rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// zeta_n^j for any integer j.
    pub fn root(&self, j: i64) -> CyclotomicNumber {
        let n = self.order() as i64;
        let e = j.rem_euclid(n) as usize;
        self.from_int_coords(&self.0.reduce[e])
    }

    /// A primitive m-th root of unity exp(2 pi i / m); m must divide the order.
    pub fn root_of_unity(&self, m: u32, j: i64) -> Result<CyclotomicNumber> {
        if m == 0 || self.order() % m != 0 {
            return Err(Error::MissingRoot { needed: m, order: self.order() });
        }
        Ok(self.root(j * (self.order() / m) as i64))
    }

    /// sqrt(2) = zeta_8 + zeta_8^{-1}; needs 8 | n.
    pub fn sqrt2(&self) -> Result<CyclotomicNumber> {
        let n = self.order();
        if n % 8 != 0 {
            return Err(Error::MissingRoot { needed: 8, order: n });
        }
        let e = (n / 8) as i64;
        Ok(&self.root(e) + &self.root(-e))
    }

    /// The imaginary unit; needs 4 | n.
    pub fn i(&self) -> Result<CyclotomicNumber> {
        self.root_of_unity(4, 1)
    }

    /// A square root of the nonnegative rational p/q when one exists in the
    /// field among the cases s^2 and 2 s^2.
    pub fn sqrt_rational(&self, p: i64, q: i64) -> Result<CyclotomicNumber> {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        if let Some(s) = rational_sqrt(&r) {
            return Ok(self.rational(s));
        }
        let half = &r / BigRational::from_integer(BigInt::from(2));
        if let Some(s) = rational_sqrt(&half) {
            return Ok(&self.sqrt2()? * &self.rational(s));
        }
        Err(Error::Unsupported("square root outside the supported cyclotomic cases"))
    }

    fn from_int_coords(&self, c: &[i64]) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.clone(),
            coords: c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(),
        }
    }

    fn same(&self, other: &CyclotomicField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.order() == other.order()
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// An element sum_j coords[j] zeta_n^j, reduced to degree < phi(n).
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: CyclotomicField,
    coords: Vec<BigRational>,
}

/// zeta_n^{j mod n}.
pub fn cyc_root(n: u32, j: i64) -> CyclotomicNumber {
    CyclotomicField::new(n).root(j)
}

/// sqrt(2) in Q(zeta_n).
pub fn cyc_sqrt2(n: u32) -> Result<CyclotomicNumber> {
    CyclotomicField::new(n).sqrt2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary operation, embedding when one order divides the other.
pub fn cyc_arith(a: &CyclotomicNumber, b: &CyclotomicNumber, op: CycOp) -> Result<CyclotomicNumber> {
    match op {
        CycOp::Add => a.checked_add(b),
        CycOp::Sub => a.checked_sub(b),
        CycOp::Mul => a.checked_mul(b),
        CycOp::Div => a.checked_div(b),
    }
}

impl CyclotomicNumber {
    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_m) for a multiple m of the current order.
    pub fn embed(&self, target: &CyclotomicField) -> Result<CyclotomicNumber> {
        let n = self.order();
        let m = target.order();
        if self.field.same(target) {
            return Ok(CyclotomicNumber { field: target.clone(), coords: self.coords.clone() });
        }
        if self.is_rational() {
            return Ok(target.rational(self.coords[0].clone()));
        }
        if m % n != 0 {
            return Err(Error::OrderMismatch(n, m));
        }
        let step = (m / n) as usize;
        let mut out = target.zero();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &target.0.reduce[(j * step) % m as usize];
            for (i, &r) in row.iter().enumerate() {
                if r != 0 {
                    out.coords[i] += c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        Ok(out)
    }

    fn common(&self, other: &CyclotomicNumber) -> Result<(CyclotomicNumber, CyclotomicNumber)> {
        if self.field.same(&other.field) {
            return Ok((self.clone(), other.clone()));
        }
        let (n, m) = (self.order(), other.order());
        if other.is_rational() || n % m == 0 {
            Ok((self.clone(), other.embed(&self.field)?))
        } else if self.is_rational() || m % n == 0 {
            Ok((self.embed(&other.field)?, other.clone()))
        } else {
            Err(Error::OrderMismatch(n, m))
        }
    }

    pub fn checked_add(&self, other: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coords.iter_mut().zip(b.coords.iter()) {
            *x += y;
        }
        Ok(a)
    }

    pub fn checked_sub(&self, other: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coords.iter_mut().zip(b.coords.iter()) {
            *x -= y;
        }
        Ok(a)
    }

    pub fn checked_mul(&self, other: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        let (a, b) = self.common(other)?;
        Ok(a.mul_same(&b))
    }

    pub fn checked_div(&self, other: &CyclotomicNumber) -> Result<CyclotomicNumber> {
        let (a, b) = self.common(other)?;
        let inv = b.inverse()?;
        Ok(a.mul_same(&inv))
    }

    fn mul_same(&self, b: &CyclotomicNumber) -> CyclotomicNumber {
        if b.is_rational() {
            return self.scale(&b.coords[0]);
        }
        if self.is_rational() {
            return b.scale(&self.coords[0]);
        }
        let n = self.order() as usize;
        let deg = self.field.degree();
        // accumulate modulo x^n - 1, then fold with the reduction table
        let mut acc = vec![BigRational::zero(); n];
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                acc[(i + j) % n] += x * y;
            }
        }
        let mut out = vec![BigRational::zero(); deg];
        for (e, c) in acc.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if e < deg {
                out[e] += c;
                continue;
            }
            for (i, &r) in self.field.0.reduce[e].iter().enumerate() {
                if r != 0 {
                    out[i] += &c * BigRational::from_integer(BigInt::from(r));
                }
            }
        }
        CyclotomicNumber { field: self.field.clone(), coords: out }
    }

    pub fn scale(&self, r: &BigRational) -> CyclotomicNumber {
        CyclotomicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, v: i64) -> CyclotomicNumber {
        self.scale(&BigRational::from_integer(BigInt::from(v)))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against Phi_n.
    pub fn inverse(&self) -> Result<CyclotomicNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(self.field.rational(self.coords[0].recip()));
        }
        let phi: Vec<BigRational> =
            self.field.0.phi.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
        let a = trim(self.coords.clone());
        // invariant: s * a == r (mod phi)
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !(r1.len() == 1 && !r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                // gcd not constant: cannot happen for an irreducible modulus
                return Err(Error::DivisionByZero);
            }
        }
        let c = r1[0].recip();
        let mut out = self.field.zero();
        let deg = self.field.degree();
        let s1 = poly_rem(&s1, &self.field.0.phi);
        for (i, v) in s1.into_iter().enumerate() {
            if i < deg {
                out.coords[i] = v * &c;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: i64) -> Result<CyclotomicNumber> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.field.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> CyclotomicNumber {
        let mut out = self.field.zero();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = self.field.root(-(j as i64));
            out += &t.scale(c);
        }
        out
    }

    /// Text form "c0 + c1*z + ... (z = zeta_n)".
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                s.push_str(" + ");
            }
            first = false;
            let _ = match j {
                0 => write!(s, "{}", c),
                1 => write!(s, "{}*z", c),
                _ => write!(s, "{}*z^{}", c, j),
            };
        }
        if first {
            s.push('0');
        }
        let _ = write!(s, " (z = zeta_{})", self.order());
        s
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = &r[r.len() - 1] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_rem(a: &[BigRational], phi: &[i64]) -> Vec<BigRational> {
    let b: Vec<BigRational> = phi.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    poly_divrem(a, &b).1
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.field.same(&other.field) {
            return self.coords == other.coords;
        }
        let m = self.order().lcm(&other.order());
        let f = CyclotomicField::new(m);
        match (self.embed(&f), other.embed(&f)) {
            (Ok(a), Ok(b)) => a.coords == b.coords,
            _ => false,
        }
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).expect("cyclotomic operation")
            }
        }
        impl $tr<CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$checked(&rhs).expect("cyclotomic operation")
            }
        }
        impl $tr<&CyclotomicNumber> for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                (&self).$checked(rhs).expect("cyclotomic operation")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl AddAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn add_assign(&mut self, rhs: &CyclotomicNumber) {
        if self.field.same(&rhs.field) {
            for (x, y) in self.coords.iter_mut().zip(rhs.coords.iter()) {
                if !y.is_zero() {
                    *x += y;
                }
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn sub_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CyclotomicNumber> for CyclotomicNumber {
    fn mul_assign(&mut self, rhs: &CyclotomicNumber) {
        *self = &*self * rhs;
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}
