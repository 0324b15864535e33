//! Truncated Puiseux series in q with cyclotomic coefficients.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::Q;

/// sum_e c_e q^e over e in offset + (1/denom)Z, with every e <= trunc.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    field: CyclotomicField,
    denom: i64,
    offset: Q,
    trunc: Q,
    coeffs: BTreeMap<Q, CyclotomicNumber>,
}

fn frac(x: Q) -> Q {
    x - Q::from_integer(x.floor().to_integer())
}

fn lattice_denom(a: &PuiseuxSeries, b: &PuiseuxSeries) -> i64 {
    let d = a.denom.lcm(&b.denom);
    d.lcm(&(a.offset - b.offset).denom().abs())
}

impl PuiseuxSeries {
    pub fn zero(field: &CyclotomicField, trunc: Q) -> Self {
        PuiseuxSeries { field: field.clone(), denom: 1, offset: Q::zero(), trunc, coeffs: BTreeMap::new() }
    }

    /// c q^e truncated at trunc.
    pub fn monomial(c: CyclotomicNumber, e: Q, trunc: Q) -> Self {
        let mut s = PuiseuxSeries {
            field: c.field().clone(),
            denom: *e.denom(),
            offset: frac(e),
            trunc,
            coeffs: BTreeMap::new(),
        };
        s.insert(e, c);
        s
    }

    pub fn one(field: &CyclotomicField, trunc: Q) -> Self {
        Self::monomial(field.one(), Q::zero(), trunc)
    }

    /// Build from explicit terms; the exponent lattice is the smallest one containing them.
    pub fn from_terms(field: &CyclotomicField, terms: impl IntoIterator<Item = (Q, CyclotomicNumber)>, trunc: Q) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let mut s = Self::zero(field, trunc);
        if let Some((e0, _)) = terms.first() {
            s.offset = frac(*e0);
            let mut d = 1i64;
            for (e, _) in &terms {
                d = d.lcm(&(*e - *e0).denom().abs());
            }
            s.denom = d;
        }
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    fn insert(&mut self, e: Q, c: CyclotomicNumber) {
        if e <= self.trunc && !c.is_zero() {
            self.coeffs.insert(e, c);
        }
    }

    fn add_term(&mut self, e: Q, c: &CyclotomicNumber) {
        if e > self.trunc || c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, sum);
        }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn offset(&self) -> Q {
        self.offset
    }

    pub fn trunc(&self) -> Q {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &CyclotomicNumber)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: Q) -> CyclotomicNumber {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.coeffs.keys().next().copied()
    }

    pub fn with_trunc(&self, trunc: Q) -> Self {
        let mut s = self.clone();
        s.trunc = trunc.min(self.trunc);
        s.coeffs.retain(|e, _| *e <= s.trunc);
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.denom = lattice_denom(self, other);
        s.trunc = self.trunc.min(other.trunc);
        s.coeffs.retain(|e, _| *e <= s.trunc);
        for (e, c) in &other.coeffs {
            s.add_term(*e, c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = -&*c;
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Self {
        let mut s = self.clone();
        s.coeffs = BTreeMap::new();
        for (e, v) in &self.coeffs {
            s.insert(*e, v * c);
        }
        s
    }

    /// Product; the truncation is min(T_f, T_g), lowered further when a
    /// factor has negative valuation so no stored coefficient is unreliable.
    pub fn mul(&self, other: &Self) -> Self {
        let mut trunc = self.trunc.min(other.trunc);
        if let Some(vg) = other.valuation() {
            trunc = trunc.min(self.trunc + vg);
        }
        if let Some(vf) = self.valuation() {
            trunc = trunc.min(other.trunc + vf);
        }
        let mut s = PuiseuxSeries {
            field: self.field.clone(),
            denom: self.denom.lcm(&other.denom),
            offset: frac(self.offset + other.offset),
            trunc,
            coeffs: BTreeMap::new(),
        };
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e = *e1 + *e2;
                if e > trunc {
                    break;
                }
                s.add_term(e, &(c1 * c2));
            }
        }
        s
    }

    /// Inverse of a unit series c q^e (1 + ...), valid up to T - 2e.
    pub fn inverse(&self) -> Result<Self> {
        let e = self.valuation().ok_or(Error::NotUnit)?;
        let a0 = self.coeffs[&e].inverse()?;
        let n = self.denom;
        let step = Q::new(1, n);
        let rel = ((self.trunc - e) * Q::from_integer(n)).floor().to_integer();
        if rel < 0 {
            return Err(Error::NotUnit);
        }
        let rel = rel as usize;
        let mut a = vec![self.field.zero(); rel + 1];
        for (x, c) in &self.coeffs {
            let j = ((*x - e) * Q::from_integer(n)).to_integer() as usize;
            a[j] = c.clone();
        }
        let mut b: Vec<CyclotomicNumber> = Vec::with_capacity(rel + 1);
        b.push(a0.clone());
        for j in 1..=rel {
            let mut acc = self.field.zero();
            for i in 1..=j {
                if !a[i].is_zero() && !b[j - i].is_zero() {
                    acc += &(&a[i] * &b[j - i]);
                }
            }
            b.push(-(&acc * &a0));
        }
        let trunc = self.trunc - e - e;
        let terms = b.into_iter().enumerate().map(|(j, c)| (-e + step * Q::from_integer(j as i64), c));
        let mut s = PuiseuxSeries { field: self.field.clone(), denom: n, offset: frac(-e), trunc, coeffs: BTreeMap::new() };
        for (x, c) in terms {
            s.insert(x, c);
        }
        Ok(s)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = PuiseuxSeries::one(&self.field, self.trunc);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by q^e, moving the truncation along.
    pub fn shift(&self, e: Q) -> Self {
        let mut s = self.clone();
        s.denom = self.denom.lcm(e.denom());
        s.offset = frac(self.offset + e);
        s.trunc = self.trunc + e;
        s.coeffs = self.coeffs.iter().map(|(x, c)| (*x + e, c.clone())).collect();
        s
    }

    /// q -> q^m for a positive integer m.
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m > 0);
        let mq = Q::from_integer(m);
        let mut s = PuiseuxSeries {
            field: self.field.clone(),
            denom: self.denom,
            offset: frac(self.offset * mq),
            trunc: self.trunc * mq,
            coeffs: BTreeMap::new(),
        };
        for (e, c) in &self.coeffs {
            s.coeffs.insert(*e * mq, c.clone());
        }
        s
    }

    /// One-line form of the first `n` terms, e.g. "2q^(1/48) + q^(25/48) + ...".
    pub fn summary(&self, n: usize) -> String {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .take(n)
            .map(|(e, c)| {
                let e = if e.is_integer() { format!("{}", e) } else { format!("({})", e) };
                match c.as_rational() {
                    Some(r) if r.is_one() => format!("q^{}", e),
                    Some(r) if (-r.clone()).is_one() => format!("-q^{}", e),
                    Some(r) => format!("{}q^{}", r, e),
                    None => format!("({})q^{}", c, e),
                }
            })
            .collect();
        if self.coeffs.len() > n {
            parts.push("...".into());
        }
        if parts.is_empty() {
            return "0".into();
        }
        parts.join(" + ")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.coeffs {
            out.push_str(&format!("{}/{} : {}\n", e.numer(), e.denom(), c.to_text()));
        }
        out
    }
}

/// q -> q^{1/k}.
pub fn substitute_root(f: &PuiseuxSeries, k: i64) -> PuiseuxSeries {
    assert!(k > 0);
    let kq = Q::from_integer(k);
    let mut s = PuiseuxSeries {
        field: f.field.clone(),
        denom: f.denom * k,
        offset: frac(f.offset / kq),
        trunc: f.trunc / kq,
        coeffs: BTreeMap::new(),
    };
    for (e, c) in &f.coeffs {
        s.coeffs.insert(*e / kq, c.clone());
    }
    s
}

/// Coefficientwise equality for exponents <= t.
pub fn series_eq(f: &PuiseuxSeries, g: &PuiseuxSeries, t: Q) -> Result<bool> {
    for s in [f, g] {
        if s.trunc < t {
            return Err(Error::InsufficientPrecision { need: format!("{}", t), have: format!("{}", s.trunc) });
        }
    }
    let a = f.with_trunc(t);
    let b = g.with_trunc(t);
    Ok(a.coeffs.len() == b.coeffs.len() && a.coeffs.iter().all(|(e, c)| b.coeffs.get(e) == Some(c)))
}

/// prod over the given exponents a of (1 + sign q^a), kept to exponent <= bound.
fn product_one_plus(field: &CyclotomicField, sign: i64, exps: impl Iterator<Item = Q>, bound: Q) -> PuiseuxSeries {
    let mut acc = PuiseuxSeries::one(field, bound);
    for a in exps {
        if a > bound {
            break;
        }
        let factor = PuiseuxSeries::one(field, bound).add(&PuiseuxSeries::monomial(field.int(sign), a, bound));
        acc = acc.mul(&factor);
    }
    acc
}

fn shifted(f: &PuiseuxSeries, e: Q) -> PuiseuxSeries {
    f.shift(e)
}

/// eta(q) = q^{1/24} prod_{n>=1} (1 - q^n), truncated at t.
pub fn eta_series(field: &CyclotomicField, t: Q) -> PuiseuxSeries {
    let off = Q::new(1, 24);
    let body = product_one_plus(field, -1, (1..).map(Q::from_integer), t - off);
    shifted(&body, off)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weber {
    F,
    F1,
    F2,
}

/// The Weber functions f, f1, f2 truncated at t; f2 needs 8 | order.
pub fn weber(which: Weber, field: &CyclotomicField, t: Q) -> Result<PuiseuxSeries> {
    let half_odd = (1..).map(|n: i64| Q::new(2 * n - 1, 2));
    match which {
        Weber::F => {
            let off = Q::new(-1, 48);
            Ok(shifted(&product_one_plus(field, 1, half_odd, t - off), off))
        }
        Weber::F1 => {
            let off = Q::new(-1, 48);
            Ok(shifted(&product_one_plus(field, -1, half_odd, t - off), off))
        }
        Weber::F2 => {
            let off = Q::new(1, 24);
            let body = product_one_plus(field, 1, (1..).map(Q::from_integer), t - off);
            Ok(shifted(&body, off).scale(&field.sqrt2()?))
        }
    }
}

/// Graded dimension from weight multiplicities: q^{-c/24} sum dim_w q^w.
pub fn series_from_counts(field: &CyclotomicField, counts: &BTreeMap<Q, i64>, c: Q, t: Q) -> PuiseuxSeries {
    let shift = c / Q::from_integer(24);
    let terms = counts.iter().map(|(w, n)| (*w - shift, field.int(*n)));
    PuiseuxSeries::from_terms(field, terms, t)
}
