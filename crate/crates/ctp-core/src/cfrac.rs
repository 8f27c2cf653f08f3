//! Classical and branched continued fractions as truncated power series,
//! and J-fraction fitting.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::paths::{AlphaWeights, BetaWeights};
use crate::poly::MultiPoly;
use crate::series::PowerSeries;

/// A continued fraction to expand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FractionSpec {
    /// `1/(1 - alpha_0 t/(1 - alpha_1 t/(1 - ...)))`.
    S(Vec<MultiPoly>),
    /// `1/(1 - gamma_0 t - b_0 t^2/(1 - gamma_1 t - b_1 t^2/(...)))`.
    J { gamma: Vec<MultiPoly>, b: Vec<MultiPoly> },
    /// m-branched S-fraction; the order is the weights' `m`.
    BranchedS(AlphaWeights),
    /// m-branched J-fraction; the order is the weights' depth.
    BranchedJ(BetaWeights),
}

/// `1 - t * g` lifted to truncation `n`, where `g` has truncation `n - 1`.
fn one_minus_t_times(g: &PowerSeries, n: usize) -> PowerSeries {
    PowerSeries::from_fn(n, |i| if i == 0 { MultiPoly::one() } else { -g.coeff(i - 1) })
}

/// Classical S-fraction with `N` levels; needs `alpha_0 .. alpha_(N-1)`.
pub fn sfrac_series(alpha: &[MultiPoly], n: usize) -> Result<PowerSeries> {
    if alpha.len() < n {
        return Err(Error::SequenceTooShort {
            required: n,
            got: alpha.len(),
        });
    }
    let mut f = PowerSeries::one(0);
    for i in (0..n).rev() {
        // f_i needs order n - i; f_(i+1) is only needed to order n - i - 1.
        let ord = n - i;
        let g = f.scale(&alpha[i]).truncate(ord - 1);
        f = one_minus_t_times(&g, ord).inverse()?;
    }
    Ok(f)
}

/// Classical J-fraction to order `N`; needs `gamma_i` for `2i + 1 <= N` and
/// `b_i` for `2i + 2 <= N`.
pub fn jfrac_series(gamma: &[MultiPoly], b: &[MultiPoly], n: usize) -> Result<PowerSeries> {
    let levels = n.div_ceil(2);
    if gamma.len() < levels || b.len() < n / 2 {
        return Err(Error::SequenceTooShort {
            required: levels,
            got: gamma.len().min(b.len()),
        });
    }
    // f_i is needed to order n - 2i.
    let mut f = PowerSeries::one(n.saturating_sub(2 * levels));
    for i in (0..levels).rev() {
        let ord = n - 2 * i;
        let bi = b.get(i).cloned().unwrap_or_else(MultiPoly::zero);
        let mut den = PowerSeries::one(ord);
        if ord >= 1 {
            den.set_coeff(1, -&gamma[i]);
        }
        for j in 2..=ord {
            if j - 2 <= f.trunc() {
                den.set_coeff(j, -(&bi * f.coeff(j - 2)));
            }
        }
        f = den.inverse()?;
    }
    Ok(f)
}

/// Expands a branched fraction to order `N`, returning `f_0`.
///
/// S case: `f_k = 1/(1 - alpha_(k+m) t prod_(i=1..m) f_(k+i))`, where `f_k`
/// is only needed to order `N - ceil(k/m)`.
/// J case: `f_k = 1/(1 - beta_k^(0) t - sum_l beta_(k+l)^(l) t^(l+1) prod_(i=1..l) rho_(k+i-1) f_(k+i))`
/// with `rho` the rise weight, `f_k` needed to order `N - k`.
pub fn branched_series(spec: &FractionSpec, n: usize) -> Result<PowerSeries> {
    match spec {
        FractionSpec::S(alpha) => sfrac_series(alpha, n),
        FractionSpec::J { gamma, b } => jfrac_series(gamma, b, n),
        FractionSpec::BranchedS(w) => branched_s(w, n),
        FractionSpec::BranchedJ(w) => branched_j(w, n),
    }
}

fn branched_s(w: &AlphaWeights, n: usize) -> Result<PowerSeries> {
    let m = w.m();
    let ord = |k: usize| n.saturating_sub(k.div_ceil(m));
    let mut fs: BTreeMap<usize, PowerSeries> = BTreeMap::new();
    for k in (0..=m * n).rev() {
        let o = ord(k);
        let f = if o == 0 {
            PowerSeries::one(0)
        } else {
            let mut prod = PowerSeries::constant(w.get(k + m)?, o - 1);
            for i in 1..=m {
                let fi = fs
                    .get(&(k + i))
                    .map(|s| s.truncate(o - 1))
                    .unwrap_or_else(|| PowerSeries::one(o - 1));
                prod = prod.mul(&fi);
            }
            one_minus_t_times(&prod, o).inverse()?
        };
        fs.insert(k, f);
        // Levels more than m above the current one are no longer needed.
        fs.retain(|&j, _| j <= k + m);
    }
    Ok(fs.remove(&0).expect("level 0 is always computed"))
}

fn branched_j(w: &BetaWeights, n: usize) -> Result<PowerSeries> {
    let mut fs: Vec<PowerSeries> = alloc::vec![PowerSeries::one(0); n + 1];
    for k in (0..n).rev() {
        let o = n - k;
        let mut den = PowerSeries::one(o);
        let level = w.get(0, k)?;
        if !level.is_zero() {
            den.set_coeff(1, -&level);
        }
        let mut l = 1;
        while l < o && l <= w.max_fall(k + l) {
            let beta = w.get(l as i64, k + l)?;
            if !beta.is_zero() {
                let inner = o - l - 1;
                let mut prod = PowerSeries::constant(beta, inner);
                for i in 1..=l {
                    let rho = w.rise(k + i - 1)?;
                    prod = prod.scale(&rho).mul(&fs[k + i].truncate(inner));
                }
                for j in 0..=inner {
                    let c = den.coeff(j + l + 1) - prod.coeff(j);
                    den.set_coeff(j + l + 1, c);
                }
            }
            l += 1;
        }
        fs[k] = den.inverse()?;
    }
    Ok(fs.swap_remove(0))
}

/// Fits `gamma_0..gamma_(depth-1)` and `b_0..b_(depth-1)` so that the
/// J-fraction reproduces `seq` to order `2 depth`.
///
/// Each coefficient is solved from the first order where it appears; the
/// pivot is `prod_(j<i) b_j`. A zero pivot or an inexact polynomial
/// division is reported, and the symbols should then be specialized.
pub fn fit_jfrac(seq: &[MultiPoly], depth: usize) -> Result<(Vec<MultiPoly>, Vec<MultiPoly>)> {
    let need = 2 * depth + 1;
    if seq.len() < need {
        return Err(Error::SequenceTooShort {
            required: need,
            got: seq.len(),
        });
    }
    if !seq[0].is_one() {
        return Err(Error::Precondition("sequence must start with 1".into()));
    }
    let mut gamma: Vec<MultiPoly> = Vec::with_capacity(depth);
    let mut b: Vec<MultiPoly> = Vec::with_capacity(depth);
    let mut pivot = MultiPoly::one();
    for i in 0..depth {
        for (which, order) in [(0usize, 2 * i + 1), (1usize, 2 * i + 2)] {
            let mut g = gamma.clone();
            let mut bb = b.clone();
            g.resize(i + 1, MultiPoly::zero());
            bb.resize(i + 1, MultiPoly::zero());
            let rest = jfrac_series(&g, &bb, order)?.coeff(order).clone();
            let diff = &seq[order] - &rest;
            if pivot.is_zero() {
                return Err(Error::ZeroPivot { index: order });
            }
            let value = diff.div_exact(&pivot).ok_or(Error::NotPolynomial { index: order })?;
            if which == 0 {
                gamma.push(value);
            } else {
                b.push(value);
            }
        }
        pivot = &pivot * &b[i];
    }
    Ok((gamma, b))
}

/// Ordinary generating function coefficients of column 0 of a triangle.
pub fn column_series(col: &[MultiPoly]) -> PowerSeries {
    PowerSeries::from_coeffs(col.to_vec())
}
