//! Text formats for polynomial lists, continued-fraction weights and
//! production-matrix specifications.
//!
//! Every parse error carries the byte position in the full input text.

use ctp_core::paths::{AffinePattern, AlphaWeights, BetaWeights, Depth};
use ctp_core::production::{BlockSpec, ProductionSpec};
use ctp_core::{Error, MultiPoly, PowerSeries, Registry, Result};

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
        other => other,
    }
}

fn parse_error(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Pieces of `text[start..end]` split on `sep`, each with its absolute offset.
fn split_at(text: &str, start: usize, end: usize, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut from = start;
    for (i, c) in text[start..end].char_indices() {
        if c == sep {
            out.push((from, &text[from..start + i]));
            from = start + i + c.len_utf8();
        }
    }
    out.push((from, &text[from..end]));
    out
}

fn parse_at(reg: &mut Registry, text: &str, offset: usize) -> Result<MultiPoly> {
    if text.trim().is_empty() {
        return Err(parse_error(offset, "empty entry"));
    }
    reg.parse(text).map_err(|e| shift(e, offset))
}

fn parse_list_range(reg: &mut Registry, text: &str, start: usize, end: usize) -> Result<Vec<MultiPoly>> {
    split_at(text, start, end, ',')
        .into_iter()
        .map(|(off, piece)| parse_at(reg, piece, off))
        .collect()
}

/// A comma-separated list of polynomials, such as `1, 2*q, q^2+1`.
pub fn parse_poly_list(reg: &mut Registry, text: &str) -> Result<Vec<MultiPoly>> {
    parse_list_range(reg, text, 0, text.len())
}

/// An inclusive row range `a..b`.
pub fn parse_row_range(text: &str) -> Result<(usize, usize)> {
    let Some(dots) = text.find("..") else {
        return Err(parse_error(0, "expected a range of the form a..b"));
    };
    let num = |s: &str, off: usize| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| parse_error(off, "expected a nonnegative integer"))
    };
    let a = num(&text[..dots], 0)?;
    let b = num(&text[dots + 2..], dots + 2)?;
    if a > b {
        return Err(parse_error(dots, "empty range"));
    }
    Ok((a, b))
}

fn strip_keyword<'a>(text: &'a str, keyword: &str) -> Option<(usize, &'a str)> {
    let lead = text.len() - text.trim_start().len();
    let rest = text[lead..].strip_prefix(keyword)?;
    let after = rest.trim_start();
    let colon = after.strip_prefix(':')?;
    Some((text.len() - colon.len(), colon))
}

/// Weights of an `m`-branched S-fraction.
///
/// Accepted forms:
/// * `all-ones`
/// * `a0, a1, a2, ...` (an explicit list)
/// * `periodic: a, b, ...` (the list repeated forever)
/// * `affine: b0, b1, ... | s0, s1, ...` (entry `j` of period `p` is
///   `b_(j mod p) + floor(j / p) s_(j mod p)`)
pub fn parse_alpha_weights(reg: &mut Registry, m: usize, text: &str) -> Result<AlphaWeights> {
    if m == 0 {
        return Err(Error::InvalidParam("branch order must be at least 1".into()));
    }
    if text.trim() == "all-ones" {
        return Ok(AlphaWeights::all_ones(m));
    }
    if let Some((off, _)) = strip_keyword(text, "periodic") {
        let base = parse_list_range(reg, text, off, text.len())?;
        return Ok(AlphaWeights::pattern(m, AffinePattern::periodic(base)));
    }
    if let Some((off, _)) = strip_keyword(text, "affine") {
        let Some(bar) = text[off..].find('|').map(|i| off + i) else {
            return Err(parse_error(text.len(), "expected `|` between base and step"));
        };
        let base = parse_list_range(reg, text, off, bar)?;
        let step = parse_list_range(reg, text, bar + 1, text.len())?;
        let pattern = AffinePattern::new(base, step).map_err(|e| match e {
            Error::InvalidParam(msg) => parse_error(bar, msg),
            other => other,
        })?;
        return Ok(AlphaWeights::pattern(m, pattern));
    }
    Ok(AlphaWeights::from_list(m, parse_poly_list(reg, text)?))
}

/// Coefficients of a classical J-fraction: `all-ones` or
/// `g0, g1, ... / b0, b1, ...`.
pub fn parse_jfrac(reg: &mut Registry, text: &str, levels: usize) -> Result<(Vec<MultiPoly>, Vec<MultiPoly>)> {
    if text.trim() == "all-ones" {
        return Ok((vec![MultiPoly::one(); levels], vec![MultiPoly::one(); levels]));
    }
    let Some(slash) = text.find('/') else {
        return Err(parse_error(text.len(), "expected `/` between the gamma and b lists"));
    };
    let gamma = parse_list_range(reg, text, 0, slash)?;
    let b = parse_list_range(reg, text, slash + 1, text.len())?;
    Ok((gamma, b))
}

fn block_args(text: &str, start: usize, end: usize) -> Result<(usize, &str, usize, usize)> {
    let body = &text[start..end];
    let lead = body.len() - body.trim_start().len();
    let Some(open) = body.find('(') else {
        return Err(parse_error(start + lead, "expected `kind(arguments)`"));
    };
    let trimmed_end = start + body.trim_end().len();
    if !text[..trimmed_end].ends_with(')') {
        return Err(parse_error(trimmed_end, "expected `)` at the end of the block"));
    }
    let name = body[..open].trim();
    Ok((start + lead, name, start + open + 1, trimmed_end - 1))
}

/// A production matrix written as a product of blocks, one per line or
/// separated by `;`. Block kinds and their positional arguments:
///
/// * `lower(a, b, c)`: diagonal `ka + b`, subdiagonal `kc`
/// * `upper(a, b, u, v)`: diagonal `ka + b`, superdiagonal `(k+1)u + v`
/// * `tri(a, b, u, v, lambda)`: the tridiagonal block of the same parameters
/// * `gamma(1, f1, f2, ...)`: the matrix `(i!/j!) f_(i-j)` of `f = 1 + f1 t + ...`
/// * `ones(m)`: the order-`m` Hessenberg block with every weight 1
///
/// Lines starting with `#` are ignored. `trunc` is the truncation used for
/// `gamma` series.
pub fn parse_production(reg: &mut Registry, text: &str, trunc: usize) -> Result<ProductionSpec> {
    let mut blocks = Vec::new();
    for (line_off, line) in split_at(text, 0, text.len(), '\n') {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for (off, piece) in split_at(text, line_off, line_off + line.len(), ';') {
            if piece.trim().is_empty() {
                continue;
            }
            let (name_off, name, args_start, args_end) = block_args(text, off, off + piece.len())?;
            let args = if text[args_start..args_end].trim().is_empty() {
                Vec::new()
            } else {
                parse_list_range(reg, text, args_start, args_end)?
            };
            let want = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(parse_error(
                        args_start,
                        format!("`{name}` takes {n} arguments, got {}", args.len()),
                    ))
                }
            };
            let a = |i: usize| args[i].clone();
            let block = match name {
                "lower" => {
                    want(3)?;
                    BlockSpec::lower_bi(a(0), a(1), a(2))
                }
                "upper" => {
                    want(4)?;
                    BlockSpec::upper_bi(a(0), a(1), a(2), a(3))
                }
                "tri" => {
                    want(5)?;
                    BlockSpec::tri_j(a(0), a(1), a(2), a(3), a(4))
                }
                "gamma" => {
                    if args.is_empty() || !args[0].is_one() {
                        return Err(parse_error(args_start, "`gamma` needs a series with constant term 1"));
                    }
                    let t = trunc.max(args.len() - 1);
                    BlockSpec::GammaToeplitz(PowerSeries::new(args, t))
                }
                "ones" => {
                    want(1)?;
                    let m = args[0]
                        .as_constant()
                        .and_then(|c| ctp_core::poly::to_i64(&c))
                        .filter(|&m| m >= 1)
                        .ok_or_else(|| parse_error(args_start, "`ones` needs a positive integer order"))?;
                    BlockSpec::BandedHessenberg(BetaWeights::all_ones(Depth::Finite(m as usize)))
                }
                _ => return Err(parse_error(name_off, format!("unknown block kind `{name}`"))),
            };
            blocks.push(block);
        }
    }
    if blocks.is_empty() {
        return Err(parse_error(0, "no blocks given"));
    }
    ProductionSpec::new(blocks)
}

/// A `name=value` assignment with the value in polynomial text form.
pub fn parse_assignment(reg: &mut Registry, text: &str) -> Result<(String, MultiPoly)> {
    let Some(eq) = text.find('=') else {
        return Err(parse_error(0, "expected name=value"));
    };
    let name = text[..eq].trim();
    if name.is_empty() {
        return Err(parse_error(0, "empty parameter name"));
    }
    let value = parse_at(reg, &text[eq + 1..], eq + 1)?;
    Ok((name.to_string(), value))
}
