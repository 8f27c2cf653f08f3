//! Sparse multivariate polynomials over exact rationals.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient type.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)` as a rational (zero outside `0..=n`).
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Index of an indeterminate inside a [`Registry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

static NEXT_TAG: AtomicU32 = AtomicU32::new(1);

/// Interns variable names and stamps every polynomial it creates.
///
/// Polynomials built from two different registries cannot be combined:
/// the checked operations return [`Error::RegistryMismatch`] and the
/// operator impls panic. Constants carry no stamp and mix freely.
#[derive(Debug)]
pub struct Registry {
    tag: u32,
    names: Vec<String>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

impl Registry {
    pub fn new() -> Self {
        Registry {
            tag: NEXT_TAG.fetch_add(1, AtomicOrdering::Relaxed),
            names: Vec::new(),
        }
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    /// Id for `name`, interning it on first use.
    pub fn id(&mut self, name: &str) -> VarId {
        if let Some(v) = self.lookup(name) {
            return v;
        }
        self.names.push(name.to_string());
        VarId((self.names.len() - 1) as u32)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u32))
    }

    pub fn name(&self, v: VarId) -> Option<&str> {
        self.names.get(v.index()).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = (VarId, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (VarId(i as u32), n.as_str()))
    }

    /// The polynomial `name`, interning it if needed.
    pub fn var(&mut self, name: &str) -> MultiPoly {
        let v = self.id(name);
        self.var_poly(v)
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var_poly(&self, v: VarId) -> MultiPoly {
        let mut p = MultiPoly::monomial(Rational::one(), Monomial::var(v, 1));
        p.tag = self.tag;
        p
    }

    /// Checked product.
    pub fn mul(&self, p: &MultiPoly, q: &MultiPoly) -> Result<MultiPoly> {
        self.check(p)?;
        self.check(q)?;
        p.try_mul(q)
    }

    /// Confirms that `p` was built from this registry (or is a constant).
    pub fn check(&self, p: &MultiPoly) -> Result<()> {
        if p.tag == 0 || p.tag == self.tag {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    /// Stamps a polynomial whose variables are known to belong here.
    pub fn adopt(&self, mut p: MultiPoly) -> MultiPoly {
        if !p.is_constant() {
            p.tag = self.tag;
        }
        p
    }

    /// Canonical text form.
    pub fn format(&self, p: &MultiPoly) -> String {
        let mut out = String::new();
        write_poly(&mut out, p, &|v| self.name(v).map(|s| s.to_string())).expect("writing to a String cannot fail");
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        write_monomial(&mut out, m, &|v| self.name(v).map(|s| s.to_string())).expect("writing to a String cannot fail");
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// Parses the text form: integers, identifiers, `+ - * / ^` and parentheses.
    /// Division is allowed only by nonzero constants.
    pub fn parse(&mut self, text: &str) -> Result<MultiPoly> {
        let mut parser = Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
            reg: self,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(p)
    }
}

/// Exponent vector with trailing zeros removed.
///
/// Ordering is graded: total degree first, then within a degree the monomial
/// with the larger exponent on the lowest differing variable comes first, so
/// that ascending order reads `1, x, y, x^2, x*y, y^2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut exps = vec![0; v.index() + 1];
        exps[v.index()] = e;
        Monomial { deg: e, exps }
    }

    /// Builds from `(variable, exponent)` pairs; repeated variables add up.
    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut m = Monomial::one();
        for &(v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn exp(&self, v: VarId) -> u32 {
        self.exps.get(v.index()).copied().unwrap_or(0)
    }

    /// Nonzero `(variable, exponent)` pairs in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarId(i as u32), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.exps.len() >= other.exps.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.exps.clone();
        for (i, e) in short.exps.iter().enumerate() {
            exps[i] += e;
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg
            && self
                .exps
                .iter()
                .enumerate()
                .all(|(i, &e)| e <= other.exps.get(i).copied().unwrap_or(0))
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut exps = other.exps.clone();
        for (i, e) in self.exps.iter().enumerate() {
            exps[i] -= e;
        }
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial {
            deg: other.deg - self.deg,
            exps,
        }
    }

    /// Removes `v`, returning its exponent and the rest.
    fn split_off(&self, v: VarId) -> (u32, Monomial) {
        let e = self.exp(v);
        if e == 0 {
            return (0, self.clone());
        }
        let mut exps = self.exps.clone();
        exps[v.index()] = 0;
        while exps.last() == Some(&0) {
            exps.pop();
        }
        (
            e,
            Monomial {
                deg: self.deg - e,
                exps,
            },
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.exps.len().max(other.exps.len());
        for i in 0..n {
            let a = self.exps.get(i).copied().unwrap_or(0);
            let b = other.exps.get(i).copied().unwrap_or(0);
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: monomial to nonzero rational coefficient.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    tag: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

fn join_tags(a: u32, b: u32) -> Result<u32> {
    match (a, b) {
        (0, t) | (t, 0) => Ok(t),
        (s, t) if s == t => Ok(s),
        _ => Err(Error::RegistryMismatch),
    }
}

fn join_tags_or_panic(a: u32, b: u32) -> u32 {
    join_tags(a, b).expect("operands belong to different variable registries")
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::monomial(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        MultiPoly::constant(rat(n))
    }

    /// Untagged single-term polynomial. Prefer [`Registry::var_poly`] for
    /// variables so that mismatches are caught.
    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { tag: 0, terms }
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in(&self, v: VarId) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    /// Leading term under the graded order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coeff_in(&self, v: VarId, k: u32) -> MultiPoly {
        let mut out = MultiPoly {
            tag: self.tag,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.terms.insert(rest, c.clone());
            }
        }
        out.normalize_tag();
        out
    }

    fn normalize_tag(&mut self) {
        if self.is_constant() {
            self.tag = 0;
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let tag = join_tags(self.tag, other.tag)?;
        let mut out = self.clone();
        out.tag = tag;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.normalize_tag();
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let tag = join_tags(self.tag, other.tag)?;
        let mut out = self.clone();
        out.tag = tag;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out.normalize_tag();
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let tag = join_tags(self.tag, other.tag)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero());
        }
        let mut out = MultiPoly {
            tag,
            terms: BTreeMap::new(),
        };
        if let Some(c) = other.as_constant() {
            out.terms = self.terms.iter().map(|(m, a)| (m.clone(), a * &c)).collect();
        } else if let Some(c) = self.as_constant() {
            out.terms = other.terms.iter().map(|(m, a)| (m.clone(), a * &c)).collect();
        } else {
            for (ma, ca) in &self.terms {
                for (mb, cb) in &other.terms {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        out.normalize_tag();
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            tag: self.tag,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by `c * m` for a monomial `m`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let mut out = MultiPoly {
            tag: self.tag,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        };
        out.normalize_tag();
        out
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `v` by `r` and expands.
    pub fn substitute(&self, v: VarId, r: &MultiPoly) -> MultiPoly {
        let max = match self.degree_in(v) {
            Some(0) | None => return self.clone(),
            Some(d) => d,
        };
        let mut powers = vec![MultiPoly::one()];
        for i in 1..=max as usize {
            let next = &powers[i - 1] * r;
            powers.push(next);
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            let mut piece = powers[e as usize].mul_term(c, &rest);
            if !rest.is_one() {
                piece.tag = join_tags_or_panic(piece.tag, self.tag);
            }
            out += &piece;
        }
        out
    }

    /// Replaces several variables by rationals at once.
    pub fn evaluate(&self, values: &BTreeMap<VarId, Rational>) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match values.get(&v) {
                    Some(val) => coef *= num_traits::pow(val.clone(), e as usize),
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            let mut piece = MultiPoly::monomial(coef, rest);
            if !piece.is_constant() {
                piece.tag = self.tag;
            }
            out += &piece;
        }
        out
    }

    /// Every stored coefficient is nonnegative.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// The first negative term in canonical order.
    pub fn first_negative_term(&self) -> Option<(Monomial, Rational)> {
        self.terms
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MultiPoly {
            tag: join_tags(self.tag, d.tag).ok()?,
            terms: BTreeMap::new(),
        };
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c / &lc;
            rem = &rem - &d.mul_term(&qc, &qm);
            quot.add_term(qm, qc);
        }
        quot.normalize_tag();
        Some(quot)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> MultiPoly {
        let mut out = MultiPoly {
            tag: self.tag,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out.normalize_tag();
        out
    }

    /// Polynomial in `v` as a coefficient list (index = power of `v`).
    pub fn coefficients_in(&self, v: VarId) -> Vec<MultiPoly> {
        let d = self.degree_in(v).unwrap_or(0);
        (0..=d).map(|k| self.coeff_in(v, k)).collect()
    }
}

impl fmt::Display for MultiPoly {
    /// Writes the canonical form with placeholder names `v0, v1, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self, &|_| None)
    }
}

fn var_name(v: VarId, names: &dyn Fn(VarId) -> Option<String>) -> String {
    names(v).unwrap_or_else(|| format!("v{}", v.0))
}

fn write_monomial<W: fmt::Write>(w: &mut W, m: &Monomial, names: &dyn Fn(VarId) -> Option<String>) -> fmt::Result {
    let mut first = true;
    for (v, e) in m.iter() {
        if !first {
            w.write_char('*')?;
        }
        first = false;
        w.write_str(&var_name(v, names))?;
        if e > 1 {
            write!(w, "^{}", e)?;
        }
    }
    Ok(())
}

fn write_rational<W: fmt::Write>(w: &mut W, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(w, "{}", c.numer())
    } else {
        write!(w, "{}/{}", c.numer(), c.denom())
    }
}

fn write_poly<W: fmt::Write>(w: &mut W, p: &MultiPoly, names: &dyn Fn(VarId) -> Option<String>) -> fmt::Result {
    if p.is_zero() {
        return w.write_char('0');
    }
    for (i, (m, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        if neg {
            w.write_char('-')?;
        } else if i > 0 {
            w.write_char('+')?;
        }
        let a = c.abs();
        if m.is_one() {
            write_rational(w, &a)?;
        } else {
            if !a.is_one() {
                write_rational(w, &a)?;
                w.write_char('*')?;
            }
            write_monomial(w, m, names)?;
        }
    }
    Ok(())
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs)
            .expect("operands belong to different variable registries")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs)
            .expect("operands belong to different variable registries")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs)
            .expect("operands belong to different variable registries")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            tag: self.tag,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        self.tag = join_tags_or_panic(self.tag, rhs.tag);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self.normalize_tag();
    }
}

impl AddAssign<MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        self.tag = join_tags_or_panic(self.tag, rhs.tag);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self.normalize_tag();
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        self.tag = join_tags_or_panic(self.tag, rhs.tag);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
        self.normalize_tag();
    }
}

impl MulAssign<&MultiPoly> for MultiPoly {
    fn mul_assign(&mut self, rhs: &MultiPoly) {
        *self = &*self * rhs;
    }
}

impl From<i64> for MultiPoly {
    fn from(n: i64) -> Self {
        MultiPoly::int(n)
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl core::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        let mut acc = MultiPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    reg: &'a mut Registry,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "division by zero".to_string(),
                            })
                        }
                        None => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "division by a non-constant".to_string(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a nonnegative integer exponent"));
            }
            let e: u32 = self.text[start..self.pos]
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.text[start..self.pos]
                    .parse()
                    .map_err(|_| self.err("bad integer"))?;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                for ch in self.text[start..].chars() {
                    if ch.is_alphanumeric() || ch == '_' {
                        self.pos += ch.len_utf8();
                    } else {
                        break;
                    }
                }
                let name = &self.text[start..self.pos];
                Ok(self.reg.var(name))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Integer value of a rational, if it is an integer that fits in `i64`.
pub fn to_i64(c: &Rational) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}

/// Greatest common divisor of the numerators (content removal helper).
pub fn content(p: &MultiPoly) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    if g.is_zero() {
        return Rational::zero();
    }
    Rational::new(g, l)
}
