//! Weighted m-Dyck and m-Lukasiewicz paths: triangles by dynamic
//! programming and a brute-force enumeration oracle.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::poly::{MultiPoly, Registry};

/// Periodic weights with an affine drift: entry `j` is
/// `base[j % p] + (j / p) * step[j % p]` where `p = base.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePattern {
    pub base: Vec<MultiPoly>,
    pub step: Vec<MultiPoly>,
}

impl AffinePattern {
    pub fn new(base: Vec<MultiPoly>, step: Vec<MultiPoly>) -> Result<Self> {
        if base.is_empty() || base.len() != step.len() {
            return Err(Error::InvalidParam(
                "pattern needs equally long, nonempty base and step lists".into(),
            ));
        }
        Ok(AffinePattern { base, step })
    }

    /// The same value everywhere.
    pub fn constant(p: MultiPoly) -> Self {
        AffinePattern {
            base: vec![p],
            step: vec![MultiPoly::zero()],
        }
    }

    /// Purely periodic values.
    pub fn periodic(base: Vec<MultiPoly>) -> Self {
        let step = vec![MultiPoly::zero(); base.len()];
        AffinePattern { base, step }
    }

    pub fn period(&self) -> usize {
        self.base.len()
    }

    pub fn at(&self, j: usize) -> MultiPoly {
        let p = self.period();
        let (block, pos) = (j / p, j % p);
        let drift = self.step[pos].scale(&crate::poly::rat(block as i64));
        &self.base[pos] + &drift
    }
}

/// What to return for weights that were not set explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fallback {
    Zero,
    One,
    Error,
    Pattern(AffinePattern),
}

impl Fallback {
    fn resolve(&self, j: usize) -> Option<MultiPoly> {
        match self {
            Fallback::Zero => Some(MultiPoly::zero()),
            Fallback::One => Some(MultiPoly::one()),
            Fallback::Error => None,
            Fallback::Pattern(p) => Some(p.at(j)),
        }
    }
}

/// Fall weights `alpha_i` for `i >= m` of an m-Dyck path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaWeights {
    m: usize,
    overrides: BTreeMap<usize, MultiPoly>,
    fallback: Fallback,
}

impl AlphaWeights {
    /// Panics when `m == 0`.
    pub fn new(m: usize, fallback: Fallback) -> Self {
        assert!(m >= 1, "branching order must be at least 1");
        AlphaWeights {
            m,
            overrides: BTreeMap::new(),
            fallback,
        }
    }

    pub fn all_ones(m: usize) -> Self {
        Self::new(m, Fallback::One)
    }

    /// `alpha_m, alpha_(m+1), ...` from a list; anything beyond is missing.
    pub fn from_list(m: usize, list: Vec<MultiPoly>) -> Self {
        let mut w = Self::new(m, Fallback::Error);
        for (j, p) in list.into_iter().enumerate() {
            w.overrides.insert(m + j, p);
        }
        w
    }

    /// Pattern indexed from `alpha_m`.
    pub fn pattern(m: usize, pattern: AffinePattern) -> Self {
        Self::new(m, Fallback::Pattern(pattern))
    }

    /// Independent symbols `<prefix><i>` for `m <= i <= max_height`.
    pub fn symbolic(reg: &mut Registry, m: usize, prefix: &str, max_height: usize) -> Self {
        let list = (m..=max_height).map(|i| reg.var(&format!("{prefix}{i}"))).collect();
        Self::from_list(m, list)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set(&mut self, i: usize, p: MultiPoly) -> Result<()> {
        if i < self.m {
            return Err(Error::InvalidParam(format!(
                "alpha_{i} is below the first index {}",
                self.m
            )));
        }
        self.overrides.insert(i, p);
        Ok(())
    }

    /// `alpha_i`, or an error naming the height.
    pub fn get(&self, i: usize) -> Result<MultiPoly> {
        if i < self.m {
            return Err(Error::MissingWeight(format!("alpha_{i} (heights start at {})", self.m)));
        }
        if let Some(p) = self.overrides.get(&i) {
            return Ok(p.clone());
        }
        self.fallback
            .resolve(i - self.m)
            .ok_or_else(|| Error::MissingWeight(format!("alpha_{i} at height {i}")))
    }

    /// `alpha_m, ..., alpha_(m+len-1)`.
    pub fn list(&self, len: usize) -> Result<Vec<MultiPoly>> {
        (self.m..self.m + len).map(|i| self.get(i)).collect()
    }
}

/// Maximal fall depth of a Lukasiewicz path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    /// Any fall that stays at or above height zero.
    Unbounded,
}

/// Step weights `beta_i^(l)` of an m-Lukasiewicz path: level `-1` is a rise,
/// `0` a level step and `l >= 1` an l-fall, each taken from height `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaWeights {
    depth: Depth,
    overrides: BTreeMap<(i64, usize), MultiPoly>,
    levels: BTreeMap<i64, Fallback>,
    default: Fallback,
}

impl BetaWeights {
    /// Panics on `Depth::Finite(0)`.
    pub fn new(depth: Depth, default: Fallback) -> Self {
        assert!(depth != Depth::Finite(0), "branching order must be at least 1");
        BetaWeights {
            depth,
            overrides: BTreeMap::new(),
            levels: BTreeMap::new(),
            default,
        }
    }

    pub fn all_ones(depth: Depth) -> Self {
        Self::new(depth, Fallback::One)
    }

    /// The classical Jacobi case: rises `delta_i`, levels `gamma_i`, falls
    /// `beta_i` (the latter indexed by the starting height, from 1).
    pub fn jacobi(delta: Fallback, gamma: Fallback, beta: Fallback) -> Self {
        let mut w = Self::new(Depth::Finite(1), Fallback::Error);
        w.levels.insert(-1, delta);
        w.levels.insert(0, gamma);
        w.levels.insert(1, beta);
        w
    }

    /// Independent symbols `<prefix><l>_<i>` (level `-1` written `m`) up to
    /// `max_height`. For `m > 1` rises stay at weight 1.
    pub fn symbolic(reg: &mut Registry, depth: Depth, prefix: &str, max_height: usize) -> Self {
        let mut w = Self::new(depth, Fallback::Error);
        let top = match depth {
            Depth::Finite(m) => m as i64,
            Depth::Unbounded => max_height as i64,
        };
        let lowest = if w.rise_is_weighted() { -1 } else { 0 };
        for l in lowest..=top {
            for i in (l.max(0) as usize)..=max_height {
                let name = if l < 0 {
                    format!("{prefix}m_{i}")
                } else {
                    format!("{prefix}{l}_{i}")
                };
                let p = reg.var(&name);
                w.overrides.insert((l, i), p);
            }
        }
        w
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    /// Rises carry their own weight only when `m = 1`.
    pub fn rise_is_weighted(&self) -> bool {
        self.depth == Depth::Finite(1)
    }

    fn check_level(&self, level: i64) -> Result<()> {
        if level < -1 {
            return Err(Error::InvalidParam(format!("level {level} is below -1")));
        }
        if level == -1 && !self.rise_is_weighted() {
            return Err(Error::InvalidParam("rise weights are fixed to 1 when m > 1".into()));
        }
        if let Depth::Finite(m) = self.depth {
            if level > m as i64 {
                return Err(Error::InvalidParam(format!(
                    "level {level} exceeds the branching order {m}"
                )));
            }
        }
        Ok(())
    }

    /// Sets one weight.
    pub fn set(&mut self, level: i64, height: usize, p: MultiPoly) -> Result<()> {
        self.check_level(level)?;
        if (height as i64) < level {
            return Err(Error::InvalidParam(format!(
                "a {level}-fall cannot start at height {height}"
            )));
        }
        self.overrides.insert((level, height), p);
        Ok(())
    }

    /// Sets the fallback for a whole level; patterns index from height `max(l, 0)`.
    pub fn set_level(&mut self, level: i64, fallback: Fallback) -> Result<()> {
        self.check_level(level)?;
        self.levels.insert(level, fallback);
        Ok(())
    }

    /// Largest fall allowed from `height`.
    pub fn max_fall(&self, height: usize) -> usize {
        match self.depth {
            Depth::Finite(m) => m.min(height),
            Depth::Unbounded => height,
        }
    }

    /// `beta_height^(level)`, or an error naming it.
    pub fn get(&self, level: i64, height: usize) -> Result<MultiPoly> {
        if level == -1 && !self.rise_is_weighted() {
            return Ok(MultiPoly::one());
        }
        if let Some(p) = self.overrides.get(&(level, height)) {
            return Ok(p.clone());
        }
        let start = level.max(0) as usize;
        let missing = || Error::MissingWeight(format!("beta^({level})_{height} at height {height}"));
        if height < start {
            return Err(missing());
        }
        let fb = self.levels.get(&level).unwrap_or(&self.default);
        fb.resolve(height - start).ok_or_else(missing)
    }

    pub fn rise(&self, height: usize) -> Result<MultiPoly> {
        self.get(-1, height)
    }
}

/// Staircase weights `(y, x_1..x_m, y + x_0, 2x_1..2x_m, ...)` from index `m`.
/// `xs` holds `x_0, ..., x_m`.
pub fn staircase_alpha(m: usize, xs: &[MultiPoly], y: &MultiPoly) -> Result<AlphaWeights> {
    if xs.len() != m + 1 {
        return Err(Error::InvalidParam(format!(
            "staircase of order {m} needs {} x-parameters, got {}",
            m + 1,
            xs.len()
        )));
    }
    let mut base = vec![y.clone()];
    let mut step = vec![xs[0].clone()];
    for x in &xs[1..] {
        base.push(x.clone());
        step.push(x.clone());
    }
    Ok(AlphaWeights::pattern(m, AffinePattern::new(base, step)?))
}

/// `S^(m)_(n,k)(alpha)` for `0 <= k <= n <= nmax`.
pub fn sr_triangle(w: &AlphaWeights, nmax: usize) -> Result<PolyMatrix> {
    let m = w.m();
    let p = m + 1;
    let steps = p * nmax;
    let mut out = PolyMatrix::zeros(nmax + 1, nmax + 1);
    let mut state = vec![MultiPoly::zero(); steps + 2];
    state[0] = MultiPoly::one();
    out.set(0, 0, MultiPoly::one());
    let mut cache: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    for s in 0..steps {
        let mut next = vec![MultiPoly::zero(); steps + 2];
        for h in 0..=s {
            if state[h].is_zero() {
                continue;
            }
            next[h + 1] += &state[h];
            if h >= m {
                let a = match cache.get(&h) {
                    Some(a) => a.clone(),
                    None => {
                        let a = w.get(h)?;
                        cache.insert(h, a.clone());
                        a
                    }
                };
                if !a.is_zero() {
                    next[h - m] += &state[h] * &a;
                }
            }
        }
        state = next;
        let done = s + 1;
        if done % p == 0 {
            let n = done / p;
            for k in 0..=n {
                out.set(n, k, state[p * k].clone());
            }
        }
    }
    Ok(out)
}

/// `J^(m)_(n,k)(beta)` for `0 <= k <= n <= nmax`.
pub fn jr_triangle(w: &BetaWeights, nmax: usize) -> Result<PolyMatrix> {
    let mut out = PolyMatrix::zeros(nmax + 1, nmax + 1);
    let mut state = vec![MultiPoly::zero(); nmax + 2];
    state[0] = MultiPoly::one();
    out.set(0, 0, MultiPoly::one());
    for n in 1..=nmax {
        let mut next = vec![MultiPoly::zero(); nmax + 2];
        for h in 0..n {
            if state[h].is_zero() {
                continue;
            }
            let r = w.rise(h)?;
            if !r.is_zero() {
                next[h + 1] += &state[h] * &r;
            }
            for l in 0..=w.max_fall(h) {
                let b = w.get(l as i64, h)?;
                if !b.is_zero() {
                    next[h - l] += &state[h] * &b;
                }
            }
        }
        state = next;
        for k in 0..=n {
            out.set(n, k, state[k].clone());
        }
    }
    Ok(out)
}

/// Weight source for [`enumerate_paths_oracle`].
#[derive(Clone, Copy, Debug)]
pub enum PathWeights<'a> {
    Dyck(&'a AlphaWeights),
    Lukasiewicz(&'a BetaWeights),
}

/// Default cap on visited nodes in the oracle.
pub const ORACLE_NODE_LIMIT: u64 = 200_000_000;

struct Oracle {
    tally: BTreeMap<Vec<(i64, usize)>, u64>,
    nodes: u64,
    limit: u64,
}

impl Oracle {
    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::Guard(format!("path enumeration exceeded {} nodes", self.limit)));
        }
        Ok(())
    }

    fn record(&mut self, keys: &[(i64, usize)]) {
        let mut k = keys.to_vec();
        k.sort_unstable();
        *self.tally.entry(k).or_insert(0) += 1;
    }

    fn dyck(&mut self, m: usize, h: usize, left: usize, target: usize, keys: &mut Vec<(i64, usize)>) -> Result<()> {
        self.visit()?;
        if left == 0 {
            if h == target {
                self.record(keys);
            }
            return Ok(());
        }
        if h + left < target || (h as i64) - (m * left) as i64 > target as i64 {
            return Ok(());
        }
        self.dyck(m, h + 1, left - 1, target, keys)?;
        if h >= m {
            keys.push((1, h));
            self.dyck(m, h - m, left - 1, target, keys)?;
            keys.pop();
        }
        Ok(())
    }

    fn luka(
        &mut self,
        w: &BetaWeights,
        h: usize,
        left: usize,
        target: usize,
        keys: &mut Vec<(i64, usize)>,
    ) -> Result<()> {
        self.visit()?;
        if left == 0 {
            if h == target {
                self.record(keys);
            }
            return Ok(());
        }
        if h + left < target {
            return Ok(());
        }
        keys.push((-1, h));
        self.luka(w, h + 1, left - 1, target, keys)?;
        keys.pop();
        for l in 0..=w.max_fall(h) {
            keys.push((l as i64, h));
            self.luka(w, h - l, left - 1, target, keys)?;
            keys.pop();
        }
        Ok(())
    }
}

/// Sums the weights of all paths by explicit depth-first enumeration.
///
/// Dyck: from `(0,0)` to `((m+1)n, (m+1)k)`. Lukasiewicz: from `(0,0)` to `(n,k)`.
/// Paths with the same multiset of steps are tallied before the weights are
/// multiplied out.
pub fn enumerate_paths_oracle(weights: PathWeights<'_>, n: usize, k: usize) -> Result<MultiPoly> {
    enumerate_paths_oracle_limited(weights, n, k, ORACLE_NODE_LIMIT)
}

/// [`enumerate_paths_oracle`] with an explicit node budget.
pub fn enumerate_paths_oracle_limited(weights: PathWeights<'_>, n: usize, k: usize, limit: u64) -> Result<MultiPoly> {
    let mut o = Oracle {
        tally: BTreeMap::new(),
        nodes: 0,
        limit,
    };
    let mut keys = Vec::new();
    match weights {
        PathWeights::Dyck(w) => {
            let p = w.m() + 1;
            o.dyck(w.m(), 0, p * n, p * k, &mut keys)?;
        }
        PathWeights::Lukasiewicz(w) => o.luka(w, 0, n, k, &mut keys)?,
    }
    let mut total = MultiPoly::zero();
    for (keys, count) in &o.tally {
        let mut term = MultiPoly::int(*count as i64);
        for &(l, h) in keys {
            let wt = match weights {
                PathWeights::Dyck(w) => w.get(h)?,
                PathWeights::Lukasiewicz(w) => w.get(l, h)?,
            };
            term = &term * &wt;
            if term.is_zero() {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}
