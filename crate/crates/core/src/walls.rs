//! Numerical walls and bounded destabilizer searches.
//!
//! Walls only see `ch_{≤2}`. Candidate subobjects are generated on the
//! truncated lattice and completed with the `ch₃` that makes `χ = 0`; the
//! quotient is always `total - sub`, so both are lattice members.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ChernCharacter, FanoContext};
use crate::rational::{frac, lt_sqrt, q, serde_q, to_i64, Q};
use crate::tilt::{
    central_charge, discriminant, rotated_slope, slope, slope_compare, Slope, TiltPoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WallLocus {
    Empty,
    Everywhere,
    Vertical {
        #[serde(with = "serde_q")]
        beta: Q,
    },
    /// `(β - center)² + t = radius_sq`, `radius_sq > 0`.
    Semicircle {
        #[serde(with = "serde_q")]
        center: Q,
        #[serde(with = "serde_q")]
        radius_sq: Q,
    },
}

impl WallLocus {
    /// Where the locus meets the vertical line `β = beta0` with `t > 0`.
    pub fn crossing(&self, beta0: Q) -> Option<LineHit> {
        match *self {
            WallLocus::Everywhere => Some(LineHit::Ray),
            WallLocus::Vertical { beta } if beta == beta0 => Some(LineHit::Ray),
            WallLocus::Semicircle { center, radius_sq } => {
                let t = radius_sq - (beta0 - center) * (beta0 - center);
                (t > q(0)).then_some(LineHit::At(t))
            }
            _ => None,
        }
    }

    pub fn contains(&self, pt: &TiltPoint) -> bool {
        match *self {
            WallLocus::Empty => false,
            WallLocus::Everywhere => true,
            WallLocus::Vertical { beta } => pt.beta == beta,
            WallLocus::Semicircle { center, radius_sq } => {
                (pt.beta - center) * (pt.beta - center) + pt.t == radius_sq
            }
        }
    }
}

impl fmt::Display for WallLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallLocus::Empty => f.write_str("empty"),
            WallLocus::Everywhere => f.write_str("everywhere"),
            WallLocus::Vertical { beta } => write!(f, "vertical beta = {beta}"),
            WallLocus::Semicircle { center, radius_sq } => {
                write!(f, "semicircle center {center}, radius^2 {radius_sq}")
            }
        }
    }
}

/// Intersection with a vertical line: the whole ray, or a single `t = α²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineHit {
    Ray,
    At(Q),
}

impl fmt::Display for LineHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineHit::Ray => f.write_str("ray"),
            LineHit::At(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for LineHit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LineHit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "ray" {
            Ok(LineHit::Ray)
        } else {
            crate::rational::parse_q(&s)
                .map(LineHit::At)
                .map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallFlag {
    /// `sub` and `total` have proportional `ch_{≤2}`; bounds no chamber.
    PseudoWall,
    /// `total` itself is proportional to `ch(O(-1))`.
    DegenerateEverywhere,
    /// `sub` or `quot` is a multiple of `ch_{≤2}(O(-1))`.
    OMinusOneFactor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCandidate {
    /// `(r', q·c', 2q²·m')` of `ch^{β}(sub)`, where `q` is the denominator of
    /// the reference `β`.
    pub params: [i64; 3],
    pub sub: ChernCharacter,
    pub quot: ChernCharacter,
    pub locus: WallLocus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<LineHit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<WallFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBounds {
    /// `|ch₀| ≤ rank`.
    pub rank: i64,
    /// `|ch₁| ≤ c1` in the untwisted scans.
    pub c1: i64,
    /// Bound on the integer encoding of `ch₂`.
    pub ch2: i64,
}

impl ScanBounds {
    pub fn for_context(ctx: FanoContext) -> Self {
        Self {
            rank: 8,
            c1: 8,
            ch2: 64 * ctx.degree(),
        }
    }

    pub fn scaled(self, k: i64) -> Self {
        Self {
            rank: self.rank * k,
            c1: self.c1 * k,
            ch2: self.ch2 * k,
        }
    }
}

pub fn is_truncated_zero(ch: &ChernCharacter) -> bool {
    ch.truncated().iter().all(|x| *x == q(0))
}

/// Locus where `μ_{α,β}(v) = μ_{α,β}(w)`.
///
/// With `X = r_v c_w - r_w c_v`, `Y = m_v r_w - m_w r_v`,
/// `W = m_w c_v - m_v c_w` the condition reads
/// `½·D·X·(t + β²) + Y·β + W = 0`.
pub fn numerical_wall(v: &ChernCharacter, w: &ChernCharacter) -> Result<WallLocus> {
    v.same_context(w)?;
    if is_truncated_zero(v) || is_truncated_zero(w) {
        return Err(Error::ZeroClass);
    }
    let d = v.ctx.degree_q();
    let x = v.r * w.c - w.r * v.c;
    let y = v.m * w.r - w.m * v.r;
    let wq = w.m * v.c - v.m * w.c;
    if x != q(0) {
        let center = -y / (d * x);
        let radius_sq = center * center - q(2) * wq / (d * x);
        Ok(if radius_sq > q(0) {
            WallLocus::Semicircle { center, radius_sq }
        } else {
            WallLocus::Empty
        })
    } else if y != q(0) {
        Ok(WallLocus::Vertical { beta: -wq / y })
    } else if wq == q(0) {
        Ok(WallLocus::Everywhere)
    } else {
        Ok(WallLocus::Empty)
    }
}

fn params_at(sub: &ChernCharacter, beta: Q) -> [i64; 3] {
    let qd = q(*beta.denom());
    let tw = sub.twist(beta);
    let enc = [tw.r, qd * tw.c, q(2) * qd * qd * tw.m];
    enc.map(|x| to_i64(&x).expect("lattice classes have integral parameters"))
}

fn o_minus_one(ctx: FanoContext) -> ChernCharacter {
    ChernCharacter::line_bundle(ctx, -1)
}

fn flags_for(
    sub: &ChernCharacter,
    quot: &ChernCharacter,
    total: &ChernCharacter,
    locus: &WallLocus,
) -> Vec<WallFlag> {
    let mut flags = Vec::new();
    if *locus == WallLocus::Everywhere || sub.proportional_truncated(total) {
        flags.push(WallFlag::PseudoWall);
    }
    let o = o_minus_one(total.ctx);
    if sub.proportional_truncated(&o) || quot.proportional_truncated(&o) {
        flags.push(WallFlag::OMinusOneFactor);
    }
    flags
}

/// Completes a truncated subobject class; `None` unless both it and the
/// quotient are nonzero on `ch_{≤2}` and lie in the lattice.
fn split(
    total: &ChernCharacter,
    sub_truncated: ChernCharacter,
) -> Option<(ChernCharacter, ChernCharacter)> {
    if !sub_truncated.has_integral_lift() {
        return None;
    }
    let sub = sub_truncated.with_zero_euler_char();
    let quot = *total - sub;
    (!is_truncated_zero(&sub) && !is_truncated_zero(&quot)).then_some((sub, quot))
}

/// `0 ≤ Δ(sub), Δ(quot) ≤ Δ(total)`.
fn discriminant_bounds(
    total: &ChernCharacter,
    sub: &ChernCharacter,
    quot: &ChernCharacter,
) -> bool {
    let de = discriminant(total);
    [sub, quot].iter().all(|x| {
        let dx = discriminant(x);
        q(0) <= dx && dx <= de
    })
}

fn require_member(total: &ChernCharacter) -> Result<()> {
    if total.is_lattice_member() {
        Ok(())
    } else {
        Err(Error::NotLatticeMember(total.to_string()))
    }
}

fn same_slope(a: &ChernCharacter, b: &ChernCharacter, pt: &TiltPoint) -> bool {
    matches!(slope_compare(a, b, pt), Ok(Ordering::Equal))
}

/// Decompositions `total = sub + quot` destabilizing somewhere on the
/// vertical line `β = beta0`.
///
/// Scans `ch^{β₀}(sub) = (a, b/q, c/(2q²))` over `|a| ≤ rank`, `|c| ≤ ch2`
/// and `b` between `0` and `q·ch₁^{β₀}(total)`, so that both factors have
/// `Im Z ≥ 0`. Both orderings of each split are reported, sorted by
/// `(a, b, c)`.
pub fn walls_on_line(
    total: &ChernCharacter,
    beta0: Q,
    bounds: &ScanBounds,
) -> Result<Vec<WallCandidate>> {
    require_member(total)?;
    let tw = total.twist(beta0);
    if tw.c == q(0) {
        return Err(Error::DegenerateLine(beta0.to_string()));
    }
    let qd = *beta0.denom();
    let b_total = to_i64(&(tw.c * q(qd))).expect("q·c' is integral");
    let (b_lo, b_hi) = (b_total.min(0), b_total.max(0));
    let [a_total, _, c_total] = params_at(total, beta0);
    let d = total.ctx.degree();
    // q²·Δ/D = D·b² - a·c in parameter coordinates
    let delta = move |a: i64, b: i64, c: i64| d * b * b - a * c;
    let de = delta(a_total, b_total, c_total);
    let ctx = total.ctx;
    let total = *total;
    let cb = bounds.ch2;
    let out = (-bounds.rank..=bounds.rank)
        .into_par_iter()
        .flat_map_iter(move |a| {
            (b_lo..=b_hi).flat_map(move |b| {
                (-cb..=cb).filter_map(move |c| {
                    let da = delta(a, b, c);
                    let db = delta(a_total - a, b_total - b, c_total - c);
                    if !(0 <= da && da <= de && 0 <= db && db <= de) {
                        return None;
                    }
                    let twisted = ChernCharacter::new(
                        ctx,
                        q(a as i128),
                        frac(b as i128, qd),
                        frac(c as i128, 2 * qd * qd),
                        q(0),
                    );
                    let (sub, quot) = split(&total, twisted.twist(-beta0))?;
                    if !discriminant_bounds(&total, &sub, &quot) {
                        return None;
                    }
                    let locus = numerical_wall(&sub, &total).ok()?;
                    let hit = locus.crossing(beta0)?;
                    let t = match hit {
                        LineHit::Ray => q(1),
                        LineHit::At(t) => t,
                    };
                    let pt = TiltPoint { t, beta: beta0 };
                    if !(same_slope(&sub, &total, &pt) && same_slope(&quot, &total, &pt)) {
                        return None;
                    }
                    let flags = flags_for(&sub, &quot, &total, &locus);
                    Some(WallCandidate {
                        params: [a, b, c],
                        sub,
                        quot,
                        locus,
                        t: Some(hit),
                        flags,
                    })
                })
            })
        })
        .collect();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Sub,
    Quot,
}

/// A split passing every step except the endpoint rule on exactly one side.
/// Near misses are collected on the truncated lattice, so `integral` records
/// whether the split also lifts to lattice classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearMiss {
    pub params: [i64; 3],
    pub failing: Side,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfinityScan {
    pub candidates: Vec<WallCandidate>,
    pub near_misses: Vec<NearMiss>,
}

/// Walls for a total class with `μ⁰ = +∞` at `pt0`, for the rotated charge
/// `Z⁰ = -i·Z`.
///
/// With `ch^{-1}(sub) = (a, b, c/2)` a split survives when, for both factors
/// `X`:
/// - `Re Z⁰(X) ≤ 0` at `pt0` and at `(0, -1)`;
/// - at `(0, -1)` either `Z(X) = Z(total)` or `μ⁰(X) = +∞`.
pub fn infinity_slope_candidates(
    total: &ChernCharacter,
    pt0: &TiltPoint,
    bounds: &ScanBounds,
) -> Result<InfinityScan> {
    let ctx = total.ctx;
    let rot0 = Slope::Finite(q(0));
    if !is_truncated_zero(total) && total.proportional_truncated(&o_minus_one(ctx)) {
        let cand = WallCandidate {
            params: params_at(total, q(-1)),
            sub: *total,
            quot: ChernCharacter::zero(ctx),
            locus: WallLocus::Everywhere,
            t: None,
            flags: vec![WallFlag::DegenerateEverywhere],
        };
        return Ok(InfinityScan {
            candidates: vec![cand],
            near_misses: vec![],
        });
    }
    require_member(total)?;
    if rotated_slope(total, pt0, rot0)? != Slope::PosInfinity {
        return Err(Error::Precondition(format!(
            "rotated slope of {total} at {pt0} is not +inf"
        )));
    }
    let end = TiltPoint {
        t: q(0),
        beta: q(-1),
    };
    let z_end = central_charge(total, &end);
    let b_total = to_i64(&total.twist(q(-1)).c).expect("integral c1");
    let c_total = params_at(total, q(-1))[2];
    let (b_lo, b_hi) = (b_total.min(0), b_total.max(0));
    let total = *total;
    let pt0 = *pt0;
    let cb = bounds.ch2;

    let im_nonpos = move |x: &ChernCharacter, pt: &TiltPoint| central_charge(x, pt).im <= q(0);
    let rule = move |x: &ChernCharacter| {
        central_charge(x, &end) == z_end
            || matches!(rotated_slope(x, &end, rot0), Ok(Slope::PosInfinity))
    };

    let rows: Vec<(Option<WallCandidate>, Option<NearMiss>)> = (-bounds.rank..=bounds.rank)
        .into_par_iter()
        .flat_map_iter(move |a| {
            (b_lo..=b_hi).flat_map(move |b| {
                (-cb..=cb).filter_map(move |c| {
                    // at (0, -1), Re Z = -c/2; the endpoint rule on either
                    // side needs Re Z(sub) = 0 or Re Z(quot) = 0
                    if c != 0 && c != c_total {
                        return None;
                    }
                    let twisted = ChernCharacter::new(
                        ctx,
                        q(a as i128),
                        q(b as i128),
                        frac(c as i128, 2),
                        q(0),
                    );
                    let trunc = twisted.twist(q(1));
                    let integral = trunc.has_integral_lift();
                    let sub = trunc.with_zero_euler_char();
                    let quot = total - sub;
                    if is_truncated_zero(&sub) || is_truncated_zero(&quot) {
                        return None;
                    }
                    let ok = [&sub, &quot]
                        .iter()
                        .all(|x| im_nonpos(x, &pt0) && im_nonpos(x, &end));
                    if !ok {
                        return None;
                    }
                    let params = [a, b, c];
                    match (rule(&sub), rule(&quot)) {
                        (true, true) if !integral => None,
                        (true, true) => {
                            let locus = numerical_wall(&sub, &total).ok()?;
                            let flags = flags_for(&sub, &quot, &total, &locus);
                            Some((
                                Some(WallCandidate {
                                    params,
                                    sub,
                                    quot,
                                    locus,
                                    t: None,
                                    flags,
                                }),
                                None,
                            ))
                        }
                        (true, false) => Some((
                            None,
                            Some(NearMiss {
                                params,
                                failing: Side::Quot,
                                integral,
                            }),
                        )),
                        (false, true) => Some((
                            None,
                            Some(NearMiss {
                                params,
                                failing: Side::Sub,
                                integral,
                            }),
                        )),
                        (false, false) => None,
                    }
                })
            })
        })
        .collect();
    let (cands, misses): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(InfinityScan {
        candidates: cands.into_iter().flatten().collect(),
        near_misses: misses.into_iter().flatten().collect(),
    })
}

/// Splits of `total` whose wall could touch `β = 0` from the left: equal
/// slopes at `(0, 0)`, `ch₁^β ≥ 0` for both factors as `β → 0⁻`, and the
/// discriminant bounds. Keeps pseudo-walls (flagged) and semicircles tangent
/// to `β = 0`. Params are `(r, c, 2m)`.
pub fn tangent_walls_at_zero(
    total: &ChernCharacter,
    bounds: &ScanBounds,
) -> Result<Vec<WallCandidate>> {
    require_member(total)?;
    let origin = TiltPoint {
        t: q(0),
        beta: q(0),
    };
    let mu_total = slope(total, &origin)?;
    // ch₁^β → c as β → 0⁻, with sign of r breaking the tie at c = 0
    let left_positive = |x: &ChernCharacter| x.c > q(0) || (x.c == q(0) && x.r > q(0));
    let ctx = total.ctx;
    let d = ctx.degree();
    let [re, ce, me2] = params_at(total, q(0));
    let delta = move |r: i64, c: i64, m2: i64| c * c * d - r * m2;
    let de = delta(re, ce, me2);
    // Z_{0,0} = (-m, D·c): nonzero and parallel to Z_{0,0}(total)
    let parallel = move |c: i64, m2: i64| (c, m2) != (0, 0) && m2 * ce == me2 * c;
    let positive = |r: i64, c: i64| c > 0 || (c == 0 && r > 0);
    let total = *total;
    let (cb, mb) = (bounds.c1, bounds.ch2);
    let out = (-bounds.rank..=bounds.rank)
        .into_par_iter()
        .flat_map_iter(move |r| {
            (-cb..=cb).flat_map(move |c| {
                (-mb..=mb).filter_map(move |m2| {
                    let (rq, cq, mq) = (re - r, ce - c, me2 - m2);
                    if !(positive(r, c) && positive(rq, cq) && parallel(c, m2) && parallel(cq, mq))
                    {
                        return None;
                    }
                    let (da, db) = (delta(r, c, m2), delta(rq, cq, mq));
                    if !(0 <= da && da <= de && 0 <= db && db <= de) {
                        return None;
                    }
                    let trunc = ChernCharacter::new(
                        ctx,
                        q(r as i128),
                        q(c as i128),
                        frac(m2 as i128, 2),
                        q(0),
                    );
                    let (sub, quot) = split(&total, trunc)?;
                    if !(left_positive(&sub) && left_positive(&quot)) {
                        return None;
                    }
                    if !discriminant_bounds(&total, &sub, &quot) {
                        return None;
                    }
                    if slope(&sub, &origin).ok()? != mu_total
                        || slope(&quot, &origin).ok()? != mu_total
                    {
                        return None;
                    }
                    let locus = numerical_wall(&sub, &total).ok()?;
                    let keep = match locus {
                        WallLocus::Everywhere => true,
                        WallLocus::Semicircle { center, radius_sq } => center * center == radius_sq,
                        _ => false,
                    };
                    keep.then(|| {
                        let flags = flags_for(&sub, &quot, &total, &locus);
                        WallCandidate {
                            params: [r, c, m2],
                            sub,
                            quot,
                            locus,
                            t: None,
                            flags,
                        }
                    })
                })
            })
        })
        .collect();
    Ok(out)
}

/// Whether some `β` in `[lo, hi]` lies strictly inside the semicircle and
/// keeps `Im Z ≥ 0` for both factors.
fn semicircle_feasible(
    center: Q,
    radius_sq: Q,
    lo: Q,
    hi: Q,
    factors: [&ChernCharacter; 2],
) -> bool {
    let (mut lower, mut upper) = (lo, hi);
    for x in factors {
        // Im Z = D(c - βr) ≥ 0
        if x.r > q(0) {
            upper = upper.min(x.c / x.r);
        } else if x.r < q(0) {
            lower = lower.max(x.c / x.r);
        } else if x.c < q(0) {
            return false;
        }
    }
    lower <= upper
        && lt_sqrt(&(lower - center), &radius_sq)
        && lt_sqrt(&(center - upper), &radius_sq)
}

/// The semicircular wall of largest radius meeting the window `lo ≤ β ≤ hi`,
/// over subobjects `(r, c, m)` with `|r| ≤ rank`, `|c| ≤ c1`, `|2m| ≤ ch2`.
/// Every split along one line through `ch_{≤2}(total)` gives the same
/// circle; ties go to the smallest `(Δ(sub), |r|, r, c, m)`, which picks the
/// factor closest to a line bundle. Params are `(r, c, 2m)`.
pub fn largest_wall(
    total: &ChernCharacter,
    lo: Q,
    hi: Q,
    bounds: &ScanBounds,
) -> Result<Option<WallCandidate>> {
    if lo > hi {
        return Err(Error::EmptyWindow(format!("[{lo}, {hi}]")));
    }
    require_member(total)?;
    let ctx = total.ctx;
    let d = ctx.degree() as i128;
    let int = |x: Q| *x.numer();
    let (re, ce, me2) = (int(total.r), int(total.c), int(total.m * q(2)));
    // Δ/D = c²D - r·(2m)
    let de = ce * ce * d - re * me2;
    let total = *total;
    let (cb, mb) = (bounds.c1, bounds.ch2);
    type Key = (i128, i64, i64, i64, i64);
    let best = (-bounds.rank..=bounds.rank)
        .into_par_iter()
        .flat_map_iter(move |r| {
            (-cb..=cb).flat_map(move |c| {
                (-mb..=mb).filter_map(move |m2| {
                    let (ri, ci, mi) = (r as i128, c as i128, m2 as i128);
                    let da = ci * ci * d - ri * mi;
                    let (rb, cbq, mbq) = (re - ri, ce - ci, me2 - mi);
                    let db = cbq * cbq * d - rb * mbq;
                    if !(0 <= da && da <= de && 0 <= db && db <= de) {
                        return None;
                    }
                    let trunc = ChernCharacter::new(ctx, q(ri), q(ci), frac(mi, 2), q(0));
                    let (sub, quot) = split(&total, trunc)?;
                    let locus = numerical_wall(&sub, &total).ok()?;
                    let WallLocus::Semicircle { center, radius_sq } = locus else {
                        return None;
                    };
                    if !semicircle_feasible(center, radius_sq, lo, hi, [&sub, &quot]) {
                        return None;
                    }
                    let key: Key = (da, r.abs(), r, c, m2);
                    let flags = flags_for(&sub, &quot, &total, &locus);
                    Some((
                        radius_sq,
                        key,
                        WallCandidate {
                            params: [r, c, m2],
                            sub,
                            quot,
                            locus,
                            t: None,
                            flags,
                        },
                    ))
                })
            })
        })
        .min_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    Ok(best.map(|(_, _, c)| c))
}
