//! Truncated formal power series in `t` with polynomial coefficients.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{factorial, rat, MultiPoly, Rational};

/// Coefficients of `t^0 ..= t^trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<MultiPoly>,
}

fn unit_constant(p: &MultiPoly, what: &str) -> Result<Rational> {
    match p.as_constant() {
        Some(c) if !c.is_zero() => Ok(c),
        _ => Err(Error::Precondition(alloc::format!(
            "{what} must be a nonzero rational constant"
        ))),
    }
}

impl PowerSeries {
    /// Takes `coeffs` up to `trunc`, padding with zeros.
    pub fn new(mut coeffs: Vec<MultiPoly>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, MultiPoly::zero());
        PowerSeries { coeffs }
    }

    /// Truncation is `coeffs.len() - 1`. Panics on an empty list.
    pub fn from_coeffs(coeffs: Vec<MultiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    /// Series from integer coefficients.
    pub fn from_ints(coeffs: &[i64], trunc: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| MultiPoly::int(c)).collect(), trunc)
    }

    /// Builds `sum c_n t^n` with `c_n = f(n)`.
    pub fn from_fn(trunc: usize, f: impl FnMut(usize) -> MultiPoly) -> Self {
        PowerSeries {
            coeffs: (0..=trunc).map(f).collect(),
        }
    }

    /// Builds `sum e_n t^n / n!` from EGF coefficients `e_n`.
    pub fn from_egf(egf: &[MultiPoly], trunc: usize) -> Self {
        Self::from_fn(trunc, |n| match egf.get(n) {
            Some(e) => e.scale(&factorial(n).recip()),
            None => MultiPoly::zero(),
        })
    }

    pub fn zero(trunc: usize) -> Self {
        Self::new(Vec::new(), trunc)
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(MultiPoly::one(), trunc)
    }

    pub fn constant(c: MultiPoly, trunc: usize) -> Self {
        Self::new(alloc::vec![c], trunc)
    }

    /// The series `t`.
    pub fn t(trunc: usize) -> Self {
        Self::monomial(MultiPoly::one(), 1, trunc)
    }

    /// The series `c t^k`.
    pub fn monomial(c: MultiPoly, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if k <= trunc {
            s.coeffs[k] = c;
        }
        s
    }

    /// `1 / (1 - c t)`.
    pub fn geometric(c: &MultiPoly, trunc: usize) -> Self {
        let mut acc = MultiPoly::one();
        Self::from_fn(trunc, |_| {
            let out = acc.clone();
            acc = &acc * c;
            out
        })
    }

    /// `exp(c t)`.
    pub fn exp_linear(c: &MultiPoly, trunc: usize) -> Self {
        let mut acc = MultiPoly::one();
        Self::from_fn(trunc, |n| {
            let out = acc.scale(&factorial(n).recip());
            acc = &acc * c;
            out
        })
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^n`. Panics beyond the truncation.
    pub fn coeff(&self, n: usize) -> &MultiPoly {
        &self.coeffs[n]
    }

    /// Coefficient of `t^n`, `None` beyond the truncation.
    pub fn get(&self, n: usize) -> Option<&MultiPoly> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// EGF coefficients `n! [t^n]`.
    pub fn to_egf(&self) -> Vec<MultiPoly> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.scale(&factorial(n)))
            .collect()
    }

    /// Lowers the truncation. Panics if `n` exceeds the current one.
    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.trunc(), "cannot raise the truncation of a series");
        PowerSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn set_coeff(&mut self, n: usize, c: MultiPoly) {
        self.coeffs[n] = c;
    }

    pub fn map(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        self.map(|a| a * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        Self::from_fn(n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        Self::from_fn(n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Nonnegative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.trunc());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `sum n c_n t^(n-1)`; the truncation drops by one (but not below zero).
    pub fn derivative(&self) -> Self {
        let n = self.trunc().saturating_sub(1);
        Self::from_fn(n, |i| match self.coeffs.get(i + 1) {
            Some(c) => c.scale(&rat(i as i64 + 1)),
            None => MultiPoly::zero(),
        })
    }

    /// `sum c_n t^(n+1) / (n+1)`; the truncation rises by one.
    pub fn integral(&self) -> Self {
        let n = self.trunc() + 1;
        Self::from_fn(n, |i| {
            if i == 0 {
                MultiPoly::zero()
            } else {
                self.coeffs[i - 1].scale(&rat(i as i64).recip())
            }
        })
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = unit_constant(&self.coeffs[0], "constant term of an inverted series")?;
        let inv0 = c0.recip();
        let n = self.trunc();
        let mut out: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        out.push(MultiPoly::constant(inv0.clone()));
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `F(G)` by Horner evaluation; requires `G(0) = 0`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "inner series of a composition must have zero constant term".into(),
            ));
        }
        let n = self.trunc().min(g.trunc());
        let g = g.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse, solved order by order.
    ///
    /// Requires `F(0) = 0` and a nonzero rational linear coefficient.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(
                "series to reverse must have zero constant term".into(),
            ));
        }
        let n = self.trunc();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let f1 = unit_constant(&self.coeffs[1], "linear coefficient of a reversed series")?;
        let inv = f1.recip();
        let mut b = Self::zero(n);
        b.coeffs[1] = MultiPoly::constant(inv.clone());
        for k in 2..=n {
            let c = self.compose(&b.truncate(k))?;
            b.coeffs[k] = c.coeffs[k].scale(&-inv.clone());
        }
        Ok(b)
    }

    /// `exp(F)` for `F(0) = 0`, from `n G_n = sum_k k F_k G_(n-k)`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("exp needs a series with zero constant term".into()));
        }
        let n = self.trunc();
        let mut g: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        g.push(MultiPoly::one());
        for m in 1..=n {
            let mut acc = MultiPoly::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() && !g[m - k].is_zero() {
                    acc += (&self.coeffs[k] * &g[m - k]).scale(&rat(k as i64));
                }
            }
            g.push(acc.scale(&rat(m as i64).recip()));
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// `log(F)` for `F(0) = 1`, from `n L_n = n F_n - sum_(k<n) k L_k F_(n-k)`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition("log needs a series with constant term 1".into()));
        }
        let n = self.trunc();
        let mut l: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        l.push(MultiPoly::zero());
        for m in 1..=n {
            let mut acc = self.coeffs[m].scale(&rat(m as i64));
            for k in 1..m {
                if !l[k].is_zero() && !self.coeffs[m - k].is_zero() {
                    acc -= &(&l[k] * &self.coeffs[m - k]).scale(&rat(k as i64));
                }
            }
            l.push(acc.scale(&rat(m as i64).recip()));
        }
        Ok(PowerSeries { coeffs: l })
    }

    /// `F^e = exp(e log F)` for a polynomial exponent `e`; needs `F(0) = 1`.
    pub fn pow_sym(&self, e: &MultiPoly) -> Result<Self> {
        self.log()?.scale(e).exp()
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.map(|c| -c)
    }
}

/// `1 / (1 - t)` style helper: the series with every coefficient `c`.
pub fn constant_coeffs(c: &MultiPoly, trunc: usize) -> PowerSeries {
    PowerSeries::from_fn(trunc, |_| c.clone())
}
