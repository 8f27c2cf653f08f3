//! Hankel and Toeplitz matrices, minors, total-positivity sweeps and
//! log-convexity.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{MultiPoly, VarId};

/// `N x N` Hankel matrix `[seq[i + j]]`; needs `2N - 1` terms.
pub fn hankel_matrix(seq: &[MultiPoly], n: usize) -> Result<PolyMatrix> {
    let required = (2 * n).saturating_sub(1);
    if seq.len() < required {
        return Err(Error::SequenceTooShort {
            required,
            got: seq.len(),
        });
    }
    Ok(PolyMatrix::from_fn(n, n, |i, j| seq[i + j].clone()))
}

/// `N x N` Toeplitz matrix `[seq[i - j]]`, zero above the diagonal; needs `N` terms.
pub fn toeplitz_matrix(seq: &[MultiPoly], n: usize) -> Result<PolyMatrix> {
    if seq.len() < n {
        return Err(Error::SequenceTooShort {
            required: n,
            got: seq.len(),
        });
    }
    Ok(PolyMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            seq[i - j].clone()
        } else {
            MultiPoly::zero()
        }
    }))
}

/// Largest Hankel size supported by a sequence of length `len`.
pub fn max_hankel_size(len: usize) -> usize {
    len.div_ceil(2)
}

fn check_indices(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<()> {
    if rows.len() != cols.len() {
        return Err(Error::Shape("row and column index sets differ in size".into()));
    }
    if rows.iter().any(|&i| i >= m.rows()) || cols.iter().any(|&j| j >= m.cols()) {
        return Err(Error::Shape("minor index out of range".into()));
    }
    Ok(())
}

/// Determinant of the submatrix on `rows x cols`.
///
/// Laplace expansion up to size 3, fraction-free Bareiss elimination above.
pub fn minor_det(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<MultiPoly> {
    check_indices(m, rows, cols)?;
    let a = |i: usize, j: usize| m.get(rows[i], cols[j]);
    Ok(match rows.len() {
        0 => MultiPoly::one(),
        1 => a(0, 0).clone(),
        2 => &(a(0, 0) * a(1, 1)) - &(a(0, 1) * a(1, 0)),
        3 => {
            let c0 = &(a(1, 1) * a(2, 2)) - &(a(1, 2) * a(2, 1));
            let c1 = &(a(1, 0) * a(2, 2)) - &(a(1, 2) * a(2, 0));
            let c2 = &(a(1, 0) * a(2, 1)) - &(a(1, 1) * a(2, 0));
            &(&(a(0, 0) * &c0) - &(a(0, 1) * &c1)) + &(a(0, 2) * &c2)
        }
        k => {
            let rows_v: Vec<Vec<MultiPoly>> = (0..k).map(|i| (0..k).map(|j| a(i, j).clone()).collect()).collect();
            bareiss(rows_v)
        }
    })
}

/// Determinant of a square matrix.
pub fn det(m: &PolyMatrix) -> Result<MultiPoly> {
    if !m.is_square() {
        return Err(Error::Shape("determinant of a non-square matrix".into()));
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    minor_det(m, &idx, &idx)
}

fn bareiss(mut a: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = a.len();
    let mut negate = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly over an integral domain");
            }
            a[i][k] = MultiPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// A failing minor: its index sets, its value and the first negative term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: MultiPoly,
    pub offending_term: MultiPoly,
}

/// Outcome of [`check_tp_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPReport {
    pub order_checked: usize,
    pub size: usize,
    pub minors_checked: u64,
    pub witness: Option<Witness>,
}

impl TPReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of minors of size at most `r` in a `rows x cols` matrix.
pub fn minor_count(rows: usize, cols: usize, r: usize) -> u128 {
    (1..=r.min(rows).min(cols))
        .map(|k| binom_u128(rows, k).saturating_mul(binom_u128(cols, k)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Evaluates one minor and returns a witness if it has a negative coefficient.
pub fn check_minor(m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<Option<Witness>> {
    let d = minor_det(m, rows, cols)?;
    Ok(d.first_negative_term().map(|(mono, c)| Witness {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        offending_term: MultiPoly::monomial(c, mono),
        minor: d,
    }))
}

/// Checks every minor of size `k <= r`, by size, then row set, then column
/// set, stopping at the first one with a negative coefficient.
pub fn check_tp_order(m: &PolyMatrix, r: usize) -> TPReport {
    let size = m.rows().min(m.cols());
    let mut report = TPReport {
        order_checked: r,
        size,
        minors_checked: 0,
        witness: None,
    };
    for k in 1..=r.min(size) {
        let row_sets = combinations(m.rows(), k);
        let col_sets = combinations(m.cols(), k);
        for rs in &row_sets {
            for cs in &col_sets {
                report.minors_checked += 1;
                let w = check_minor(m, rs, cs).expect("index sets are generated in range");
                if w.is_some() {
                    report.witness = w;
                    return report;
                }
            }
        }
    }
    report
}

/// One level of a log-convexity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVerdict {
    pub level: usize,
    pub passed: bool,
    /// Position (in the original indexing) and value of the first negative entry.
    pub witness: Option<(usize, MultiPoly)>,
}

/// Per-level verdicts of iterated `L(a)_i = a_(i-1) a_(i+1) - a_i^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConvexity {
    pub requested: usize,
    pub levels: Vec<LevelVerdict>,
    /// Largest `l` such that levels `1..=l` all pass.
    pub highest_passing: usize,
}

impl LogConvexity {
    pub fn passed(&self) -> bool {
        self.highest_passing >= self.requested
    }
}

/// The operator `L` applied once; entry `i` of the output sits at index `i + 1`
/// of the input.
pub fn log_convexity_step(seq: &[MultiPoly]) -> Vec<MultiPoly> {
    (1..seq.len().saturating_sub(1))
        .map(|i| &(&seq[i - 1] * &seq[i + 1]) - &(&seq[i] * &seq[i]))
        .collect()
}

/// Applies `L` up to `k` times and reports each level.
pub fn log_convexity_order(seq: &[MultiPoly], k: usize) -> Result<LogConvexity> {
    if k > 0 && seq.len() < 2 * k + 1 {
        return Err(Error::SequenceTooShort {
            required: 2 * k + 1,
            got: seq.len(),
        });
    }
    let mut cur = seq.to_vec();
    let mut levels = Vec::with_capacity(k);
    let mut highest = 0;
    let mut all_so_far = true;
    for level in 1..=k {
        cur = log_convexity_step(&cur);
        let witness = cur
            .iter()
            .position(|p| !p.is_nonneg())
            .map(|i| (i + level, cur[i].clone()));
        let passed = witness.is_none();
        if passed && all_so_far {
            highest = level;
        } else {
            all_so_far = false;
        }
        levels.push(LevelVerdict { level, passed, witness });
    }
    Ok(LogConvexity {
        requested: k,
        levels,
        highest_passing: highest,
    })
}

/// `(a + b q)^n A_n((c + d q) / (a + b q))`, expanded; each `A_n` must have
/// degree at most `n` in `q`.
pub fn mobius_transform(
    seq: &[MultiPoly],
    q: VarId,
    a: &MultiPoly,
    b: &MultiPoly,
    c: &MultiPoly,
    d: &MultiPoly,
) -> Result<Vec<MultiPoly>> {
    let qp = MultiPoly::monomial(num_traits::One::one(), crate::poly::Monomial::var(q, 1));
    let den = a + &(b * &qp);
    let num = c + &(d * &qp);
    let longest = seq.len();
    let mut den_pows = vec![MultiPoly::one()];
    let mut num_pows = vec![MultiPoly::one()];
    for i in 1..longest.max(1) {
        den_pows.push(&den_pows[i - 1] * &den);
        num_pows.push(&num_pows[i - 1] * &num);
    }
    seq.iter()
        .enumerate()
        .map(|(n, p)| {
            let deg = p.degree_in(q).unwrap_or(0) as usize;
            if deg > n {
                return Err(Error::Precondition(alloc::format!(
                    "term {n} has degree {deg} in q, more than {n}"
                )));
            }
            let mut acc = MultiPoly::zero();
            for (k, ck) in p.coefficients_in(q).iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                acc += &(ck * &num_pows[k]) * &den_pows[n - k];
            }
            Ok(acc)
        })
        .collect()
}

/// Reversal `q^n A_n(1/q)`.
pub fn reversal(seq: &[MultiPoly], q: VarId) -> Result<Vec<MultiPoly>> {
    mobius_transform(
        seq,
        q,
        &MultiPoly::zero(),
        &MultiPoly::one(),
        &MultiPoly::one(),
        &MultiPoly::zero(),
    )
}

/// `z_n = sum_k T_(n,k) x_k y_(n-k)` for a lower-triangular `T`.
pub fn triangle_convolution(t: &PolyMatrix, xs: &[MultiPoly], ys: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    if !t.is_lower_triangular() {
        return Err(Error::Precondition("triangle must be lower triangular".into()));
    }
    let n = t.rows();
    if xs.len() < n || ys.len() < n {
        return Err(Error::SequenceTooShort {
            required: n,
            got: xs.len().min(ys.len()),
        });
    }
    Ok((0..n)
        .map(|i| {
            let mut acc = MultiPoly::zero();
            for k in 0..=i.min(t.cols().saturating_sub(1)) {
                let e = t.get(i, k);
                if !e.is_zero() {
                    acc += &(e * &xs[k]) * &ys[i - k];
                }
            }
            acc
        })
        .collect())
}
