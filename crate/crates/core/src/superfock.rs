//! Fock modules over Heisenberg and Clifford algebras.
//!
//! A module is described by its generators (statistics, admissible level
//! coset, zero-mode rule), a Gram matrix and an optional lattice of sector
//! labels. States are sparse combinations of canonical monomials: creation
//! modes sorted by generator id and then by level, most negative first,
//! applied to a sector vacuum.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::cyclotomic::{CyclotomicField, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::qseries::{series_from_counts, PuiseuxSeries};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Fermi,
    Bose,
}

/// What a level-0 mode of a generator does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroRule {
    /// creates; squares to zero for fermions
    Creator,
    /// kills the vacuum
    Annihilator,
    /// odd zero mode with x x = 1/2 <x,x>
    Clifford,
    /// acts on the sector e^b by <h, b>
    Sector,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub stats: Statistics,
    /// levels lie in coset + Z
    pub coset: Q,
    pub zero: ZeroRule,
    /// coordinates in the lattice basis, used by ZeroRule::Sector
    pub vector: Vec<CyclotomicNumber>,
}

impl Generator {
    pub fn fermion(label: &str, coset: Q, zero: ZeroRule) -> Self {
        Generator { label: label.into(), stats: Statistics::Fermi, coset, zero, vector: Vec::new() }
    }

    pub fn boson(label: &str, coset: Q, vector: Vec<CyclotomicNumber>) -> Self {
        Generator { label: label.into(), stats: Statistics::Bose, coset, zero: ZeroRule::Sector, vector }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub gen: usize,
    pub level: Q,
}

impl ModeIndex {
    pub fn new(gen: usize, level: Q) -> Self {
        ModeIndex { gen, level }
    }
}

/// Canonical creation word applied to the vacuum of a sector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FockMonomial {
    pub sector: Vec<i64>,
    pub word: Vec<ModeIndex>,
}

impl FockMonomial {
    pub fn vacuum(rank: usize) -> Self {
        FockMonomial { sector: vec![0; rank], word: Vec::new() }
    }

    pub fn sector(sector: Vec<i64>) -> Self {
        FockMonomial { sector, word: Vec::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn from_bit(b: u8) -> Self {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> Option<u8> {
        match self {
            Parity::Even => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }
}

/// Sparse linear combination of monomials; no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SuperVector {
    terms: BTreeMap<FockMonomial, CyclotomicNumber>,
}

impl SuperVector {
    pub fn new() -> Self {
        SuperVector { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: FockMonomial, c: CyclotomicNumber) -> Self {
        let mut v = SuperVector::new();
        v.add_term(m, &c);
        v
    }

    pub fn add_term(&mut self, m: FockMonomial, c: &CyclotomicNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SuperVector, c: &CyclotomicNumber) {
        if c.is_zero() {
            return;
        }
        let one = c.is_one();
        for (m, v) in &other.terms {
            if one {
                self.add_term(m.clone(), v);
            } else {
                self.add_term(m.clone(), &(v * c));
            }
        }
    }

    pub fn add(&self, other: &SuperVector) -> SuperVector {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &SuperVector) -> SuperVector {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), &-v);
        }
        out
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> SuperVector {
        let mut out = SuperVector::new();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> SuperVector {
        SuperVector { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &CyclotomicNumber)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Option<&CyclotomicNumber> {
        self.terms.get(m)
    }

    /// Keep only the terms satisfying the predicate.
    pub fn filter(&self, mut keep: impl FnMut(&FockMonomial) -> bool) -> SuperVector {
        SuperVector { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

impl FromIterator<(FockMonomial, CyclotomicNumber)> for SuperVector {
    fn from_iter<I: IntoIterator<Item = (FockMonomial, CyclotomicNumber)>>(iter: I) -> Self {
        let mut v = SuperVector::new();
        for (m, c) in iter {
            v.add_term(m, &c);
        }
        v
    }
}

impl fmt::Debug for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "[{}] {:?}{:?}", c, m.word, m.sector)?;
        }
        Ok(())
    }
}

/// Lattice sector data: Gram matrix of the lattice and the enumeration box.
#[derive(Clone, Debug)]
pub struct SectorLattice {
    pub gram: Vec<Vec<i64>>,
    pub bound: i64,
}

impl SectorLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn norm(&self, b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
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

    /// All lattice vectors in the box with <b,b>/2 <= w.
    pub fn vectors_up_to(&self, w: Q) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut cur = vec![-self.bound; r];
        loop {
            if Q::new(self.norm(&cur), 2) <= w {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == r {
                    out.sort_by_key(|v| (self.norm(v), v.clone()));
                    return out;
                }
                if cur[i] < self.bound {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -self.bound;
                i += 1;
            }
        }
    }
}

/// A highest-weight module over a Heisenberg/Clifford superalgebra.
#[derive(Clone, Debug)]
pub struct TwistedModule {
    pub name: String,
    pub field: CyclotomicField,
    pub gens: Vec<Generator>,
    pub gram: Vec<Vec<CyclotomicNumber>>,
    pub weight_offset: Q,
    pub central_charge: Q,
    pub sectors: Option<SectorLattice>,
}

impl TwistedModule {
    pub fn rank(&self) -> usize {
        self.sectors.as_ref().map_or(0, |s| s.rank())
    }

    pub fn vacuum(&self) -> SuperVector {
        SuperVector::from_monomial(FockMonomial::vacuum(self.rank()), self.field.one())
    }

    pub fn one(&self) -> CyclotomicNumber {
        self.field.one()
    }

    pub fn zero(&self) -> CyclotomicNumber {
        self.field.zero()
    }

    pub fn admissible(&self, m: ModeIndex) -> bool {
        m.gen < self.gens.len() && (m.level - self.gens[m.gen].coset).is_integer()
    }

    fn is_creator(&self, m: ModeIndex) -> bool {
        if m.level < Q::zero() {
            return true;
        }
        m.level.is_zero() && matches!(self.gens[m.gen].zero, ZeroRule::Creator | ZeroRule::Clifford)
    }

    fn fermionic(&self, m: ModeIndex) -> bool {
        self.gens[m.gen].stats == Statistics::Fermi
    }

    /// Super bracket of two modes, a scalar.
    pub fn bracket(&self, x: ModeIndex, y: ModeIndex) -> CyclotomicNumber {
        if !(x.level + y.level).is_zero() {
            return self.zero();
        }
        let (gx, gy) = (&self.gens[x.gen], &self.gens[y.gen]);
        match (gx.stats, gy.stats) {
            (Statistics::Fermi, Statistics::Fermi) => self.gram[x.gen][y.gen].clone(),
            (Statistics::Bose, Statistics::Bose) => {
                if x.level.is_zero() {
                    self.zero()
                } else {
                    self.gram[x.gen][y.gen].scale(&to_big(x.level))
                }
            }
            _ => self.zero(),
        }
    }

    fn sector_eigen(&self, m: ModeIndex, sector: &[i64]) -> CyclotomicNumber {
        let s = self.sectors.as_ref().expect("sector zero mode needs a lattice");
        let g = &self.gens[m.gen];
        let mut acc = self.zero();
        for (i, c) in g.vector.iter().enumerate() {
            let mut t = 0i64;
            for (j, b) in sector.iter().enumerate() {
                t += s.gram[i][j] * b;
            }
            if t != 0 {
                acc += &c.scale_int(t);
            }
        }
        acc
    }

    fn act_word(&self, x: ModeIndex, sector: &[i64], word: &[ModeIndex]) -> Vec<(CyclotomicNumber, Vec<ModeIndex>)> {
        if x.level.is_zero() && self.gens[x.gen].zero == ZeroRule::Sector {
            let e = self.sector_eigen(x, sector);
            return if e.is_zero() { Vec::new() } else { vec![(e, word.to_vec())] };
        }
        let creator = self.is_creator(x);
        let Some((&y, rest)) = word.split_first() else {
            return if creator { vec![(self.one(), vec![x])] } else { Vec::new() };
        };
        if creator {
            if x < y {
                let mut w = Vec::with_capacity(word.len() + 1);
                w.push(x);
                w.extend_from_slice(word);
                return vec![(self.one(), w)];
            }
            if x == y {
                if !self.fermionic(x) {
                    let mut w = Vec::with_capacity(word.len() + 1);
                    w.push(x);
                    w.extend_from_slice(word);
                    return vec![(self.one(), w)];
                }
                if self.gens[x.gen].zero == ZeroRule::Clifford && x.level.is_zero() {
                    let half = self.gram[x.gen][x.gen].scale(&num_rational::BigRational::new(1.into(), 2.into()));
                    return vec![(half, rest.to_vec())];
                }
                return Vec::new();
            }
        }
        // x y = s y x + [x, y]
        let sign_flip = self.fermionic(x) && self.fermionic(y);
        let mut out = Vec::new();
        for (c, mut w) in self.act_word(x, sector, rest) {
            w.insert(0, y);
            out.push((if sign_flip { -c } else { c }, w));
        }
        let b = self.bracket(x, y);
        if !b.is_zero() {
            out.push((b, rest.to_vec()));
        }
        out
    }

    /// Apply a single mode.
    pub fn apply_mode(&self, m: ModeIndex, v: &SuperVector) -> Result<SuperVector> {
        if !self.admissible(m) {
            return Err(Error::InadmissibleLevel(format!("{}", m.level), self.label(m.gen)));
        }
        Ok(self.apply_unchecked(m, v))
    }

    pub(crate) fn apply_unchecked(&self, m: ModeIndex, v: &SuperVector) -> SuperVector {
        let mut out = SuperVector::new();
        for (mono, c) in v.terms() {
            for (d, w) in self.act_word(m, &mono.sector, &mono.word) {
                out.add_term(FockMonomial { sector: mono.sector.clone(), word: w }, &(c * &d));
            }
        }
        out
    }

    /// Apply sum_g c_g g(level); terms at inadmissible levels are skipped.
    pub fn apply_combo(&self, combo: &[(usize, CyclotomicNumber)], level: Q, v: &SuperVector) -> SuperVector {
        let mut out = SuperVector::new();
        for (g, c) in combo {
            let m = ModeIndex::new(*g, level);
            if self.admissible(m) {
                out.add_scaled(&self.apply_unchecked(m, v), c);
            }
        }
        out
    }

    pub fn label(&self, g: usize) -> String {
        self.gens.get(g).map_or_else(|| format!("g{}", g), |x| x.label.clone())
    }

    pub fn sector_weight(&self, sector: &[i64]) -> Q {
        match &self.sectors {
            Some(s) => Q::new(s.norm(sector), 2),
            None => Q::zero(),
        }
    }

    pub fn weight(&self, m: &FockMonomial) -> Q {
        let mut w = self.weight_offset + self.sector_weight(&m.sector);
        for x in &m.word {
            w -= x.level;
        }
        w
    }

    /// Parity bit of a monomial: fermionic modes plus the sector norm.
    pub fn parity_bit(&self, m: &FockMonomial) -> u8 {
        let mut p = m.word.iter().filter(|x| self.fermionic(**x)).count() as i64;
        if let Some(s) = &self.sectors {
            p += s.norm(&m.sector);
        }
        (p.rem_euclid(2)) as u8
    }

    pub fn parity(&self, v: &SuperVector) -> Parity {
        let mut bits = v.terms().map(|(m, _)| self.parity_bit(m));
        match bits.next() {
            None => Parity::Even,
            Some(b) => {
                if bits.all(|c| c == b) {
                    Parity::from_bit(b)
                } else {
                    Parity::Mixed
                }
            }
        }
    }

    /// Largest weight among the terms (offset for the zero vector).
    pub fn max_weight(&self, v: &SuperVector) -> Q {
        v.terms().map(|(m, _)| self.weight(m)).max().unwrap_or(self.weight_offset)
    }

    /// Weight when every term has the same weight.
    pub fn homogeneous_weight(&self, v: &SuperVector) -> Option<Q> {
        let mut ws = v.terms().map(|(m, _)| self.weight(m));
        let w = ws.next()?;
        if ws.all(|x| x == w) {
            Some(w)
        } else {
            None
        }
    }

    /// sigma: w -> (-1)^{|w|} w.
    pub fn parity_map(&self, v: &SuperVector) -> SuperVector {
        v.terms()
            .map(|(m, c)| (m.clone(), if self.parity_bit(m) == 1 { -c } else { c.clone() }))
            .collect()
    }

    /// Creation modes of weight at most `budget`, in canonical order.
    fn creation_alphabet(&self, budget: Q) -> Vec<ModeIndex> {
        let mut out = Vec::new();
        for (g, gen) in self.gens.iter().enumerate() {
            // most negative admissible level above -budget
            let start = gen.coset - Q::from_integer((gen.coset + budget).floor().to_integer());
            let mut level = start;
            while level <= Q::zero() {
                let m = ModeIndex::new(g, level);
                if self.is_creator(m) && -level <= budget {
                    out.push(m);
                }
                level += Q::one();
            }
        }
        out.sort();
        out
    }

    /// All canonical monomials of weight <= w, ordered by weight then monomial.
    pub fn basis_up_to(&self, w: Q) -> Vec<FockMonomial> {
        let budget = w - self.weight_offset;
        if budget < Q::zero() {
            return Vec::new();
        }
        let sectors = match &self.sectors {
            Some(s) => s.vectors_up_to(budget),
            None => vec![Vec::new()],
        };
        let mut out = Vec::new();
        for sector in sectors {
            let left = budget - self.sector_weight(&sector);
            let alphabet = self.creation_alphabet(left);
            let mut word = Vec::new();
            self.enumerate_words(&alphabet, 0, left, &mut word, &sector, &mut out);
        }
        out.sort_by(|a, b| self.weight(a).cmp(&self.weight(b)).then_with(|| a.cmp(b)));
        out
    }

    fn enumerate_words(
        &self,
        alphabet: &[ModeIndex],
        from: usize,
        left: Q,
        word: &mut Vec<ModeIndex>,
        sector: &[i64],
        out: &mut Vec<FockMonomial>,
    ) {
        out.push(FockMonomial { sector: sector.to_vec(), word: word.clone() });
        for i in from..alphabet.len() {
            let m = alphabet[i];
            if -m.level > left {
                continue;
            }
            word.push(m);
            let next = if self.fermionic(m) { i + 1 } else { i };
            self.enumerate_words(alphabet, next, left + m.level, word, sector, out);
            word.pop();
        }
    }

    /// Weight multiplicities (dimension and superdimension) up to weight w.
    pub fn weight_counts(&self, w: Q) -> (BTreeMap<Q, i64>, BTreeMap<Q, i64>) {
        let mut dim = BTreeMap::new();
        let mut sdim = BTreeMap::new();
        for m in self.basis_up_to(w) {
            let wt = self.weight(&m);
            *dim.entry(wt).or_insert(0) += 1;
            *sdim.entry(wt).or_insert(0) += if self.parity_bit(&m) == 0 { 1 } else { -1 };
        }
        (dim, sdim)
    }

    /// q^{-c/24} sum dim M_w q^w, truncated at t.
    pub fn graded_dimension(&self, t: Q) -> PuiseuxSeries {
        let shift = self.central_charge / Q::from_integer(24);
        let (dim, _) = self.weight_counts(t + shift);
        series_from_counts(&self.field, &dim, self.central_charge, t)
    }

    pub fn superdimension(&self, t: Q) -> PuiseuxSeries {
        let shift = self.central_charge / Q::from_integer(24);
        let (_, sdim) = self.weight_counts(t + shift);
        series_from_counts(&self.field, &sdim, self.central_charge, t)
    }

    /// Text form "a1(-3/2) a2(-1/2) |0>".
    pub fn monomial_text(&self, m: &FockMonomial) -> String {
        let mut s = String::new();
        for x in &m.word {
            s.push_str(&format!("{}({}) ", self.label(x.gen), x.level));
        }
        if m.sector.iter().all(|c| *c == 0) {
            s.push_str("|0>");
        } else {
            let parts: Vec<String> = m.sector.iter().map(|c| format!("{}", c)).collect();
            s.push_str(&format!("|e^({})>", parts.join(",")));
        }
        s
    }

    pub fn vector_text(&self, v: &SuperVector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> =
            v.terms().map(|(m, c)| format!("({}) {}", c.to_text(), self.monomial_text(m))).collect();
        parts.join(" + ")
    }
}

pub(crate) fn to_big(q: Q) -> num_rational::BigRational {
    num_rational::BigRational::new((*q.numer()).into(), (*q.denom()).into())
}

/// Binomial coefficient binom(x, j) for rational x.
pub fn binom(x: Q, j: i64) -> Q {
    let mut acc = Q::one();
    for i in 0..j {
        acc = acc * (x - Q::from_integer(i)) / Q::from_integer(i + 1);
    }
    acc
}

/// Sign (-1)^n for an integer-valued rational.
pub fn sign_pow(n: Q) -> i64 {
    if n.to_integer().rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
