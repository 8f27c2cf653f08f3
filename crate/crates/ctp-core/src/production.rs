//! Production matrices: building blocks, products, output matrices and
//! conjugation by the binomial matrix.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::paths::BetaWeights;
use crate::poly::{binomial, factorial, rat, MultiPoly};
use crate::series::PowerSeries;

/// One diagonal of an explicit banded block: entry `(i, i + offset)` is
/// `base + i * step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub offset: i64,
    pub base: MultiPoly,
    pub step: MultiPoly,
}

/// A user-supplied matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExplicitBlock {
    /// Fixed entries; materializing beyond its size is an error.
    Dense(PolyMatrix),
    /// Affine diagonals, defined at every size.
    Bands(Vec<Band>),
}

/// One factor of a production matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSpec {
    /// Diagonal `ka + b`, subdiagonal `(k, k-1) = kc`.
    LowerBi {
        a: MultiPoly,
        b: MultiPoly,
        c: MultiPoly,
    },
    /// Diagonal `ka + b`, superdiagonal `(k, k+1) = (k+1)u + v`.
    UpperBi {
        a: MultiPoly,
        b: MultiPoly,
        u: MultiPoly,
        v: MultiPoly,
    },
    /// Tridiagonal with `r_n = un + u + v` above, `s_n = (2 lambda u + a)n + b + lambda(u + v)`
    /// on, and `t_n = lambda(a + lambda u)n` below the diagonal (in row `n`).
    TriJ {
        a: MultiPoly,
        b: MultiPoly,
        u: MultiPoly,
        v: MultiPoly,
        lambda: MultiPoly,
    },
    /// `(i, j) -> (i!/j!) f_(i-j)`; `f(0)` must be 1.
    GammaToeplitz(PowerSeries),
    /// `P^(m)(beta)`: rises above the diagonal, `(i, j) -> beta_i^(i-j)` for `i - m <= j <= i`.
    BandedHessenberg(BetaWeights),
    Explicit(ExplicitBlock),
}

impl BlockSpec {
    pub fn lower_bi(a: MultiPoly, b: MultiPoly, c: MultiPoly) -> Self {
        BlockSpec::LowerBi { a, b, c }
    }

    pub fn upper_bi(a: MultiPoly, b: MultiPoly, u: MultiPoly, v: MultiPoly) -> Self {
        BlockSpec::UpperBi { a, b, u, v }
    }

    pub fn tri_j(a: MultiPoly, b: MultiPoly, u: MultiPoly, v: MultiPoly, lambda: MultiPoly) -> Self {
        BlockSpec::TriJ { a, b, u, v, lambda }
    }

    /// Number of nonzero diagonals above the main one.
    pub fn upper_bandwidth(&self) -> usize {
        match self {
            BlockSpec::LowerBi { .. } | BlockSpec::GammaToeplitz(_) => 0,
            BlockSpec::UpperBi { .. } | BlockSpec::TriJ { .. } | BlockSpec::BandedHessenberg(_) => 1,
            BlockSpec::Explicit(ExplicitBlock::Dense(m)) => m.upper_bandwidth(),
            BlockSpec::Explicit(ExplicitBlock::Bands(bands)) => {
                bands.iter().map(|b| b.offset.max(0) as usize).max().unwrap_or(0)
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BlockSpec::LowerBi { .. } => "lower-bidiagonal",
            BlockSpec::UpperBi { .. } => "upper-bidiagonal",
            BlockSpec::TriJ { .. } => "tridiagonal-j",
            BlockSpec::GammaToeplitz(_) => "gamma",
            BlockSpec::BandedHessenberg(_) => "hessenberg",
            BlockSpec::Explicit(_) => "explicit",
        }
    }
}

fn k(n: usize) -> crate::poly::Rational {
    rat(n as i64)
}

/// `N x N` truncation of one block.
pub fn materialize_block(b: &BlockSpec, n: usize) -> Result<PolyMatrix> {
    let mut m = PolyMatrix::zeros(n, n);
    match b {
        BlockSpec::LowerBi { a, b, c } => {
            for i in 0..n {
                m.set(i, i, &a.scale(&k(i)) + b);
                if i > 0 {
                    m.set(i, i - 1, c.scale(&k(i)));
                }
            }
        }
        BlockSpec::UpperBi { a, b, u, v } => {
            for i in 0..n {
                m.set(i, i, &a.scale(&k(i)) + b);
                if i + 1 < n {
                    m.set(i, i + 1, &u.scale(&k(i + 1)) + v);
                }
            }
        }
        BlockSpec::TriJ { a, b, u, v, lambda } => {
            let uv = u + v;
            let diag_slope = &(&lambda.scale(&rat(2)) * u) + a;
            let diag_const = b + &(lambda * &uv);
            let sub_slope = lambda * &(a + &(lambda * u));
            for i in 0..n {
                m.set(i, i, &diag_slope.scale(&k(i)) + &diag_const);
                if i + 1 < n {
                    m.set(i, i + 1, &u.scale(&k(i)) + &uv);
                }
                if i > 0 {
                    m.set(i, i - 1, sub_slope.scale(&k(i)));
                }
            }
        }
        BlockSpec::GammaToeplitz(f) => {
            if !f.coeff(0).is_one() {
                return Err(Error::InvalidParam(
                    "gamma block series must have constant term 1".into(),
                ));
            }
            if n > 0 && f.trunc() < n - 1 {
                return Err(Error::Truncation {
                    required: n - 1,
                    available: f.trunc(),
                });
            }
            for i in 0..n {
                for j in 0..=i {
                    let c = f.coeff(i - j);
                    if !c.is_zero() {
                        m.set(i, j, c.scale(&(factorial(i) / factorial(j))));
                    }
                }
            }
        }
        BlockSpec::BandedHessenberg(w) => {
            for i in 0..n {
                if i + 1 < n {
                    m.set(i, i + 1, w.rise(i)?);
                }
                for l in 0..=w.max_fall(i) {
                    m.set(i, i - l, w.get(l as i64, i)?);
                }
            }
        }
        BlockSpec::Explicit(ExplicitBlock::Dense(d)) => {
            if n > d.rows() || n > d.cols() {
                return Err(Error::Truncation {
                    required: n,
                    available: d.rows().min(d.cols()),
                });
            }
            m = d.leading(n, n)?;
        }
        BlockSpec::Explicit(ExplicitBlock::Bands(bands)) => {
            for band in bands {
                for i in 0..n {
                    let j = i as i64 + band.offset;
                    if j < 0 || j >= n as i64 {
                        continue;
                    }
                    let e = &band.base + &band.step.scale(&k(i));
                    m.set(i, j as usize, e);
                }
            }
        }
    }
    Ok(m)
}

/// Ordered product of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductionSpec {
    blocks: Vec<BlockSpec>,
}

impl ProductionSpec {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidParam("a production needs at least one block".into()));
        }
        Ok(ProductionSpec { blocks })
    }

    pub fn single(b: BlockSpec) -> Self {
        ProductionSpec { blocks: alloc::vec![b] }
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.blocks.iter().map(|b| b.upper_bandwidth()).sum()
    }
}

/// Exact leading `N x N` block of the product. Factor `t` is materialized
/// with room for the superdiagonals of the factors before it.
pub fn materialize_product(p: &ProductionSpec, n: usize) -> Result<PolyMatrix> {
    let blocks = p.blocks();
    let mut upstream = 0;
    let mut acc: Option<PolyMatrix> = None;
    for (t, b) in blocks.iter().enumerate() {
        let rows = n + upstream;
        let cols = if t + 1 == blocks.len() {
            n
        } else {
            n + upstream + b.upper_bandwidth()
        };
        let full = materialize_block(b, rows.max(cols))?;
        let f = full.leading(rows, cols)?;
        acc = Some(match acc {
            None => f,
            Some(a) => a.try_mul(&f)?,
        });
        upstream += b.upper_bandwidth();
    }
    let out = acc.expect("production specs are nonempty");
    out.leading(n, n)
}

/// Size of production matrix needed for rows `0..=nmax` of the output.
pub fn required_production_size(nmax: usize, bandwidth: usize) -> usize {
    (nmax + 1).max(nmax.saturating_sub(1) * bandwidth + 1)
}

/// Output matrix `a_(n,k) = (P^n)_(0,k)`, rows and columns `0..=nmax`.
pub fn output_matrix(p: &PolyMatrix, nmax: usize) -> Result<PolyMatrix> {
    if !p.is_square() {
        return Err(Error::Shape("production matrix must be square".into()));
    }
    let size = p.rows();
    let bw = p.upper_bandwidth();
    let required = required_production_size(nmax, bw);
    if size < required {
        return Err(Error::Truncation {
            required,
            available: size,
        });
    }
    let mut out = PolyMatrix::zeros(nmax + 1, nmax + 1);
    let mut row = alloc::vec![MultiPoly::zero(); size];
    row[0] = MultiPoly::one();
    out.set(0, 0, MultiPoly::one());
    for n in 1..=nmax {
        let mut next = alloc::vec![MultiPoly::zero(); size];
        for (i, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (kk, slot) in next.iter_mut().enumerate() {
                let e = p.get(i, kk);
                if !e.is_zero() {
                    *slot += a * e;
                }
            }
        }
        row = next;
        for (kk, a) in row.iter().enumerate().take(nmax + 1) {
            out.set(n, kk, a.clone());
        }
    }
    Ok(out)
}

/// Output matrix of a block product, materialized at the required size.
pub fn output_matrix_of(p: &ProductionSpec, nmax: usize) -> Result<PolyMatrix> {
    let size = required_production_size(nmax, p.upper_bandwidth());
    output_matrix(&materialize_product(p, size)?, nmax)
}

/// `B_q = [C(n,k) q^(n-k)]`, size `N x N`.
pub fn binomial_matrix(q: &MultiPoly, n: usize) -> PolyMatrix {
    let mut powers = alloc::vec![MultiPoly::one()];
    for i in 1..n.max(1) {
        let next = &powers[i - 1] * q;
        powers.push(next);
    }
    PolyMatrix::from_fn(n, n, |i, j| {
        if j > i {
            MultiPoly::zero()
        } else {
            powers[i - j].scale(&binomial(i, j))
        }
    })
}

/// `B_(-q) P B_q`, leading `N x N` block.
pub fn conjugate_by_bq(p: &ProductionSpec, q: &MultiPoly, n: usize) -> Result<PolyMatrix> {
    let size = n + p.upper_bandwidth();
    let pm = materialize_product(p, size)?;
    let left = binomial_matrix(&-q, size).leading(n, size)?;
    let right = binomial_matrix(q, size).leading(size, n)?;
    left.try_mul(&pm)?.try_mul(&right)
}

/// `A B_q`; column 0 holds the row-generating polynomials.
pub fn row_gen_matrix(a: &PolyMatrix, q: &MultiPoly) -> Result<PolyMatrix> {
    if !a.is_lower_triangular() {
        return Err(Error::Precondition(
            "row-generating matrix needs a lower-triangular input".into(),
        ));
    }
    a.try_mul(&binomial_matrix(q, a.cols()))
}

/// Row polynomials `sum_k A_(n,k) q^k`.
pub fn row_polys(a: &PolyMatrix, q: &MultiPoly) -> Vec<MultiPoly> {
    (0..a.rows())
        .map(|i| {
            let mut acc = MultiPoly::zero();
            let mut qk = MultiPoly::one();
            for j in 0..a.cols() {
                let e = a.get(i, j);
                if !e.is_zero() {
                    acc += e * &qk;
                }
                qk = &qk * q;
            }
            acc
        })
        .collect()
}

/// Bands `(delta_k, gamma_k, beta_(k+1))` of a tridiagonal matrix, read as
/// the coefficients of `J_(n,k) = delta_(k-1) J_(n-1,k-1) + gamma_k J_(n-1,k) + beta_(k+1) J_(n-1,k+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TridiagonalBands {
    pub delta: Vec<MultiPoly>,
    pub gamma: Vec<MultiPoly>,
    pub beta: Vec<MultiPoly>,
}

/// Extracts the three bands, failing if anything lies outside them.
pub fn tridiagonal_bands(p: &PolyMatrix) -> Result<TridiagonalBands> {
    let n = p.rows().min(p.cols());
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            if (i as i64 - j as i64).abs() > 1 && !p.get(i, j).is_zero() {
                return Err(Error::Shape(format!(
                    "entry ({i},{j}) lies outside the tridiagonal band"
                )));
            }
        }
    }
    Ok(TridiagonalBands {
        delta: (0..n.saturating_sub(1)).map(|i| p.get(i, i + 1).clone()).collect(),
        gamma: (0..n).map(|i| p.get(i, i).clone()).collect(),
        beta: (0..n.saturating_sub(1)).map(|i| p.get(i + 1, i).clone()).collect(),
    })
}

impl TridiagonalBands {
    /// J-fraction data: `gamma_k` and `b_k = delta_k beta_(k+1)`.
    pub fn jfrac_coefficients(&self) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
        let b = self.delta.iter().zip(&self.beta).map(|(d, e)| d * e).collect();
        (self.gamma.clone(), b)
    }
}

/// `(prod_i L(0, 1, x_i)) U(x_0, y, 0, 1)`: the production of the
/// staircase-weighted m-Stieltjes-Rogers triangle. `xs` holds `x_0..x_m`.
pub fn staircase_production(m: usize, xs: &[MultiPoly], y: &MultiPoly) -> Result<ProductionSpec> {
    if xs.len() != m + 1 {
        return Err(Error::InvalidParam(format!(
            "staircase of order {m} needs {} x-parameters",
            m + 1
        )));
    }
    let mut blocks: Vec<BlockSpec> = xs[1..]
        .iter()
        .map(|x| BlockSpec::lower_bi(MultiPoly::zero(), MultiPoly::one(), x.clone()))
        .collect();
    blocks.push(BlockSpec::upper_bi(
        xs[0].clone(),
        y.clone(),
        MultiPoly::zero(),
        MultiPoly::one(),
    ));
    ProductionSpec::new(blocks)
}
