//! Slope and Gieseker comparisons, and the rank one destabilizers of `2 - 2L`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ChernCharacter, FanoContext};
use crate::rational::{frac, q};
use crate::tilt::{bms_inequality, slope, Slope, TiltPoint};

/// `μ = c/r`, `+∞` for torsion classes with `c ≠ 0`.
pub fn mu_slope(ch: &ChernCharacter) -> Result<Slope> {
    if ch.r != q(0) {
        Ok(Slope::Finite(ch.c / ch.r))
    } else if ch.c != q(0) {
        Ok(Slope::PosInfinity)
    } else {
        Err(Error::UndefinedSlope)
    }
}

/// Compares `p_E(n)/r_E` against `p_F(n)/r_F` for `n ≫ 0`.
pub fn reduced_compare(e: &ChernCharacter, f: &ChernCharacter) -> Result<Ordering> {
    e.same_context(f)?;
    if e.r <= q(0) || f.r <= q(0) {
        return Err(Error::NonPositiveRank);
    }
    let (pe, pf) = (e.hilbert_polynomial(), f.hilbert_polynomial());
    Ok((0..4)
        .rev()
        .map(|i| (pe.coeffs[i] / e.r).cmp(&(pf.coeffs[i] / f.r)))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal))
}

/// Which of the three exhaustive conditions a destabilizer meets:
/// 1. `a > 0`; 2. `a = 0`, `b > -2`; 3. `a = 0`, `b = -2`, `c > 0`.
pub fn destabilizer_case(a: i64, b: i64, c: i64) -> Option<u8> {
    let cases = [a > 0, a == 0 && b > -2, a == 0 && b == -2 && c > 0];
    let mut hit = cases
        .iter()
        .enumerate()
        .filter(|(_, x)| **x)
        .map(|(i, _)| i as u8 + 1);
    match (hit.next(), hit.next()) {
        (Some(k), None) => Some(k),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DestabHit {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub case: u8,
    /// `1 + aH + (b/2)L + (c/2)P`.
    pub ch: ChernCharacter,
}

fn require_index_two(ctx: FanoContext) -> Result<()> {
    if ctx.index() == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedContext(
            ctx,
            "rank one destabilizers are scanned on Y_d",
        ))
    }
}

fn two_minus_2l(ctx: FanoContext) -> ChernCharacter {
    ChernCharacter::new(ctx, q(2), q(0), q(-2), q(0))
}

/// Rank one classes `G = 1 + aH + (b/2)L + (c/2)P`, `|a|, |b|, |c| ≤ bound`,
/// with reduced Hilbert polynomial above that of `1 - L`, sorted by `(a, b, c)`.
pub fn destabilizer_cases(ctx: FanoContext, bound: i64) -> Result<Vec<DestabHit>> {
    require_index_two(ctx)?;
    let half = two_minus_2l(ctx) * frac(1, 2);
    let rows: Vec<Result<DestabHit>> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(move |a| {
            (-bound..=bound).flat_map(move |b| {
                (-bound..=bound).filter_map(move |c| {
                    let g = ChernCharacter::new(
                        ctx,
                        q(1),
                        q(a as i128),
                        frac(b as i128, 2),
                        frac(c as i128, 2),
                    );
                    match reduced_compare(&g, &half) {
                        Ok(Ordering::Greater) => Some(
                            destabilizer_case(a, b, c)
                                .map(|case| DestabHit {
                                    a,
                                    b,
                                    c,
                                    case,
                                    ch: g,
                                })
                                .ok_or_else(|| {
                                    Error::UnclassifiedHit(format!("(a, b, c) = ({a}, {b}, {c})"))
                                }),
                        ),
                        Ok(_) => None,
                        Err(e) => Some(Err(e)),
                    }
                })
            })
        })
        .collect();
    rows.into_iter().collect()
}

/// Hits that can still destabilize `2 - 2L` in tilt stability: `μ(G) ≤ 0`,
/// `μ_{α,-1/2}(G) ≤ μ_{α,-1/2}(2 - 2L)`, `χ(G) ∈ ℤ`, and the BMS inequality
/// at `(0, -1/2)`. For `a = 0` both tilt slopes are `-α²` plus a constant,
/// so the comparison is made at `α = 0`.
pub fn surviving_destabilizers(ctx: FanoContext, bound: i64) -> Result<Vec<DestabHit>> {
    let total = two_minus_2l(ctx);
    let pt = TiltPoint::new(q(0), frac(-1, 2))?;
    let mu_total = slope(&total, &pt)?;
    let mut out = Vec::new();
    for hit in destabilizer_cases(ctx, bound)? {
        let g = &hit.ch;
        if mu_slope(g)? > Slope::Finite(q(0)) || slope(g, &pt)? > mu_total {
            continue;
        }
        if g.euler_char().is_integer() && bms_inequality(g, &pt) >= q(0) {
            out.push(hit);
        }
    }
    Ok(out)
}
