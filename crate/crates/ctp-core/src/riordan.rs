//! Exponential Riordan arrays `(g, f)` with `R_(n,k) = (n!/k!) [t^n] g f^k`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{factorial, rat, Monomial, MultiPoly, VarId};
use crate::production::{Band, BlockSpec, ExplicitBlock, ProductionSpec};
use crate::series::PowerSeries;

/// An exponential Riordan array.
///
/// `g(0)` must be a nonzero rational and `f(0) = 0` with `f_1 != 0`. The
/// operations that need `f`'s compositional inverse (inverse, Z/A
/// sequences) further require `f_1` to be rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERArray {
    g: PowerSeries,
    f: PowerSeries,
}

impl ERArray {
    pub fn new(g: PowerSeries, f: PowerSeries) -> Result<Self> {
        let n = g.trunc().min(f.trunc());
        let (g, f) = (g.truncate(n), f.truncate(n));
        match g.coeff(0).as_constant() {
            Some(c) if !c.is_zero() => {}
            _ => return Err(Error::Precondition("g(0) must be a nonzero rational".into())),
        }
        if !f.coeff(0).is_zero() {
            return Err(Error::Precondition("f(0) must vanish".into()));
        }
        if n >= 1 && f.coeff(1).is_zero() {
            return Err(Error::Precondition("f must have a nonzero linear term".into()));
        }
        Ok(ERArray { g, f })
    }

    /// `(1, t)`.
    pub fn identity(trunc: usize) -> Self {
        ERArray {
            g: PowerSeries::one(trunc),
            f: PowerSeries::t(trunc),
        }
    }

    pub fn g(&self) -> &PowerSeries {
        &self.g
    }

    pub fn f(&self) -> &PowerSeries {
        &self.f
    }

    pub fn trunc(&self) -> usize {
        self.g.trunc()
    }

    /// Rows and columns `0..=N`.
    pub fn matrix(&self, n: usize) -> Result<PolyMatrix> {
        era_matrix(&self.g, &self.f, n)
    }

    /// Group law `(g, f) * (h, l) = (g h(f), l(f))`.
    pub fn product(&self, other: &ERArray) -> Result<ERArray> {
        let g = self.g.mul(&other.g.compose(&self.f)?);
        let f = other.f.compose(&self.f)?;
        ERArray::new(g, f)
    }

    /// `(1 / g(fbar), fbar)`.
    pub fn inverse(&self) -> Result<ERArray> {
        let fbar = self.f.reverse()?;
        let g = self.g.compose(&fbar)?.inverse()?;
        ERArray::new(g, fbar)
    }

    fn normalized_g(&self) -> Result<PowerSeries> {
        let c = self.g.coeff(0).as_constant().expect("checked at construction");
        Ok(self.g.scale_rational(&c.recip()))
    }
}

/// `(N+1) x (N+1)` matrix of `(g, f)`.
pub fn era_matrix(g: &PowerSeries, f: &PowerSeries, n: usize) -> Result<PolyMatrix> {
    let avail = g.trunc().min(f.trunc());
    if avail < n {
        return Err(Error::Truncation {
            required: n,
            available: avail,
        });
    }
    if !f.coeff(0).is_zero() {
        return Err(Error::Precondition("f(0) must vanish".into()));
    }
    let g = g.truncate(n);
    let f = f.truncate(n);
    let mut out = PolyMatrix::zeros(n + 1, n + 1);
    let mut gfk = g;
    for k in 0..=n {
        for i in k..=n {
            let c = gfk.coeff(i);
            if !c.is_zero() {
                out.set(i, k, c.scale(&(factorial(i) / factorial(k))));
            }
        }
        gfk = gfk.mul(&f);
    }
    Ok(out)
}

/// `Z = g'(fbar)/g(fbar)` and `A = f'(fbar)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZAPair {
    pub z: PowerSeries,
    pub a: PowerSeries,
}

/// Z and A series to truncation `N`; needs the array to truncation `N + 1`.
pub fn za_sequences(r: &ERArray, n: usize) -> Result<ZAPair> {
    if r.trunc() < n + 1 {
        return Err(Error::Truncation {
            required: n + 1,
            available: r.trunc(),
        });
    }
    let g = r.normalized_g()?.truncate(n + 1);
    let f = r.f().truncate(n + 1);
    let fbar = f.reverse()?;
    let dlog = g.log()?.derivative();
    let z = dlog.compose(&fbar.truncate(n))?;
    let a = f.derivative().compose(&fbar.truncate(n))?;
    Ok(ZAPair { z, a })
}

/// `p_(i,j) = (i!/j!)(z_(i-j) + j a_(i-j+1))`, size `N x N`.
pub fn production_from_za(za: &ZAPair, n: usize) -> Result<PolyMatrix> {
    if n == 0 {
        return Ok(PolyMatrix::zeros(0, 0));
    }
    if za.a.trunc() < n || za.z.trunc() + 1 < n {
        return Err(Error::Precondition(alloc::format!(
            "Z and A must be known to orders {} and {}",
            n - 1,
            n
        )));
    }
    Ok(PolyMatrix::from_fn(n, n, |i, j| {
        if j > i + 1 {
            return MultiPoly::zero();
        }
        let d = i as i64 - j as i64;
        let mut e = if d >= 0 {
            za.z.coeff(d as usize).clone()
        } else {
            MultiPoly::zero()
        };
        e += za.a.coeff((d + 1) as usize).scale(&rat(j as i64));
        e.scale(&(factorial(i) / factorial(j)))
    }))
}

/// Production matrix of an array, `N x N`.
pub fn era_production(r: &ERArray, n: usize) -> Result<PolyMatrix> {
    production_from_za(&za_sequences(r, n)?, n)
}

/// `Rbar = R P` on the window where both sides are known: row `n + 1` of
/// `R` against row `n` of the product, for `n < P.rows()`.
pub fn shifted_rows_match(r: &PolyMatrix, p: &PolyMatrix) -> Result<bool> {
    let n = p.rows();
    if r.rows() < n + 1 || r.cols() < n {
        return Err(Error::Shape("triangle too small for the production window".into()));
    }
    let lead = r.leading(n, n)?;
    let prod = lead.try_mul(p)?;
    for i in 0..n {
        for j in 0..n {
            if r.get(i + 1, j) != prod.get(i, j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks `1/fbar' = phi psi` and `f' = phi(f) psi(f)` to order `N`.
pub fn ode_factor_check(f: &PowerSeries, phi: &PowerSeries, psi: &PowerSeries, n: usize) -> Result<bool> {
    if f.trunc() < n + 1 || phi.trunc() < n || psi.trunc() < n {
        return Err(Error::Truncation {
            required: n + 1,
            available: f.trunc().min(phi.trunc() + 1).min(psi.trunc() + 1),
        });
    }
    let f = f.truncate(n + 1);
    let fbar = f.reverse()?;
    let lhs = fbar.derivative().inverse()?.truncate(n);
    let rhs = phi.mul(psi).truncate(n);
    if lhs != rhs {
        return Ok(false);
    }
    let fn_ = f.truncate(n);
    let left = f.derivative().truncate(n);
    let right = phi.compose(&fn_)?.mul(&psi.compose(&fn_)?);
    Ok(left == right.truncate(n))
}

/// Row polynomials `R_n(q) = sum_k R_(n,k) q^k` for `n <= N`, computed from
/// the matrix and from `g exp(q f)`; the two must agree.
pub fn era_row_polys(r: &ERArray, q: VarId, n: usize) -> Result<Vec<MultiPoly>> {
    let qp = MultiPoly::monomial(num_traits::One::one(), Monomial::var(q, 1));
    let m = r.matrix(n)?;
    let by_matrix = crate::production::row_polys(&m, &qp);
    let egf = r.g().truncate(n).mul(&r.f().truncate(n).scale(&qp).exp()?).to_egf();
    if by_matrix != egf {
        return Err(Error::Inconsistent(
            "row polynomials differ between the matrix and the generating function".into(),
        ));
    }
    Ok(by_matrix)
}

/// Unsigned Stirling numbers of the first kind `[n k]`, rows `0..=N`.
pub fn stirling_cycle_numbers(n: usize) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(n + 1, n + 1);
    m.set(0, 0, MultiPoly::one());
    for i in 1..=n {
        for k in 1..=i {
            let v = m.get(i - 1, k - 1) + &m.get(i - 1, k).scale(&rat(i as i64 - 1));
            m.set(i, k, v);
        }
    }
    m
}

/// `F_diamond_(n,i)(q) = sum_k F_(n,k) q^k [k i]` for `(1, f)`; cross-checked
/// against the coefficients of `(1 - q f)^(-y)`.
pub fn diamond_transform(r: &ERArray, q: VarId, y: VarId, n: usize) -> Result<PolyMatrix> {
    if !r.g().truncate(n.min(r.trunc())).coeffs().iter().enumerate().all(
        |(i, c)| {
            if i == 0 {
                c.is_one()
            } else {
                c.is_zero()
            }
        },
    ) {
        return Err(Error::Precondition("diamond transform needs g = 1".into()));
    }
    let qp = MultiPoly::monomial(num_traits::One::one(), Monomial::var(q, 1));
    let yp = MultiPoly::monomial(num_traits::One::one(), Monomial::var(y, 1));
    let f = r.matrix(n)?;
    let s = stirling_cycle_numbers(n);
    let mut out = PolyMatrix::zeros(n + 1, n + 1);
    for row in 0..=n {
        let mut qk = MultiPoly::one();
        for k in 0..=row {
            let fk = f.get(row, k);
            if !fk.is_zero() {
                let w = fk * &qk;
                for i in 0..=k {
                    let st = s.get(k, i);
                    if !st.is_zero() {
                        let e = out.get(row, i) + &(&w * st);
                        out.set(row, i, e);
                    }
                }
            }
            qk = &qk * &qp;
        }
    }
    let base = &PowerSeries::one(n) - &r.f().truncate(n).scale(&qp);
    let egf = base.pow_sym(&-yp)?.to_egf();
    for (row, e) in egf.iter().enumerate() {
        let mut expect = MultiPoly::zero();
        let mut yi = MultiPoly::one();
        for i in 0..=row {
            expect += out.get(row, i) * &yi;
            yi = &yi * &MultiPoly::monomial(num_traits::One::one(), Monomial::var(y, 1));
        }
        if &expect != e {
            return Err(Error::Inconsistent(alloc::format!(
                "diamond row {row} differs from the generating function"
            )));
        }
    }
    Ok(out)
}

/// `Gamma(psi) * [diagonal lambda, superdiagonal 1] * Gamma(phi)`: the
/// production matrix of `(phi(f) e^(lambda f), f)` when `1/fbar' = phi psi`.
/// The middle factor is `Lambda M Lambda^(-1)` for `M` with diagonal lambda and
/// superdiagonal `1, 2, 3, ...`, which has unit superdiagonal.
pub fn factored_era_production(phi: &PowerSeries, psi: &PowerSeries, lambda: &MultiPoly) -> Result<ProductionSpec> {
    let middle = ExplicitBlock::Bands(alloc::vec![
        Band {
            offset: 0,
            base: lambda.clone(),
            step: MultiPoly::zero(),
        },
        Band {
            offset: 1,
            base: MultiPoly::one(),
            step: MultiPoly::zero(),
        },
    ]);
    ProductionSpec::new(alloc::vec![
        BlockSpec::GammaToeplitz(psi.clone()),
        BlockSpec::Explicit(middle),
        BlockSpec::GammaToeplitz(phi.clone()),
    ])
}

/// Builds `f` from `1/fbar' = h` with `h(0) = 1`: `fbar = integral(1/h)`,
/// then reverses. The result has truncation `h.trunc() + 1`.
pub fn f_from_inverse_derivative(h: &PowerSeries) -> Result<PowerSeries> {
    h.inverse()?.integral().reverse()
}
