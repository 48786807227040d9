//! Tilt central charges on the `(α, β)` half-plane.
//!
//! Points are stored as `(t, β)` with `t = α²`, so every charge is rational.
//! With `ch^β = (r', c', m', n')`:
//! `Z_{α,β} = ½·t·D·r' - m' + i·D·c'`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::ChernCharacter;
use crate::rational::{q, serde_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TiltPoint {
    /// `α²`.
    #[serde(with = "serde_q")]
    pub t: Q,
    #[serde(with = "serde_q")]
    pub beta: Q,
}

impl TiltPoint {
    pub fn new(t: Q, beta: Q) -> Result<Self> {
        if t < q(0) {
            return Err(Error::Precondition(format!("t = {t} must be nonnegative")));
        }
        Ok(Self { t, beta })
    }
}

impl fmt::Display for TiltPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t = {}, beta = {})", self.t, self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "serde_q")]
    pub re: Q,
    #[serde(with = "serde_q")]
    pub im: Q,
}

impl ChargeValue {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == q(0) && self.im == q(0)
    }

    /// `T·(re, im)ᵀ`.
    pub fn transform(&self, m: &[[Q; 2]; 2]) -> Self {
        Self::new(
            m[0][0] * self.re + m[0][1] * self.im,
            m[1][0] * self.re + m[1][1] * self.im,
        )
    }

    /// `-re/im`, or `+∞` on the real axis.
    pub fn slope(&self) -> Result<Slope> {
        if self.is_zero() {
            Err(Error::ZeroCharge)
        } else if self.im == q(0) {
            Ok(Slope::PosInfinity)
        } else {
            Ok(Slope::Finite(-self.re / self.im))
        }
    }
}

impl std::ops::Add for ChargeValue {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl fmt::Display for ChargeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// A slope in `ℚ ∪ {+∞}`; `+∞` is the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Q),
    PosInfinity,
}

impl Slope {
    pub fn finite(&self) -> Option<Q> {
        match self {
            Slope::Finite(x) => Some(*x),
            Slope::PosInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::PosInfinity)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => write!(f, "{x}"),
            Slope::PosInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "+inf" {
            Ok(Slope::PosInfinity)
        } else {
            crate::rational::parse_q(&s)
                .map(Slope::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

pub fn central_charge(ch: &ChernCharacter, pt: &TiltPoint) -> ChargeValue {
    let d = ch.ctx.degree_q();
    let tw = ch.twist(pt.beta);
    ChargeValue::new(pt.t * d * tw.r / q(2) - tw.m, tw.c * d)
}

/// `μ_{α,β} = -Re Z / Im Z`; zero charge has no slope.
pub fn slope(ch: &ChernCharacter, pt: &TiltPoint) -> Result<Slope> {
    central_charge(ch, pt).slope()
}

/// `Δ_H = (D·c)² - 2·D·r·(D·m/D)`, in the units where `H²·ch₁ = D·c`.
pub fn discriminant(ch: &ChernCharacter) -> Q {
    let d = ch.ctx.degree_q();
    (ch.c * d) * (ch.c * d) - q(2) * d * ch.r * ch.m
}

/// `t·Δ_H + 4(H·ch₂^β)² - 6(H²·ch₁^β)·ch₃^β`; nonnegative is the inequality.
pub fn bms_inequality(ch: &ChernCharacter, pt: &TiltPoint) -> Q {
    let d = ch.ctx.degree_q();
    let tw = ch.twist(pt.beta);
    pt.t * discriminant(ch) + q(4) * tw.m * tw.m - q(6) * tw.c * d * tw.n
}

/// Slope of `Z^{μ₀} = Z/u` with `-Re u/Im u = μ₀`. Only `μ₀ = 0` (`u = i`)
/// is supported, giving `Re Z⁰ = Im Z`, `Im Z⁰ = -Re Z`. A vanishing `Re Z`
/// (including `Z = 0`) is `+∞`.
pub fn rotated_slope(ch: &ChernCharacter, pt: &TiltPoint, mu0: Slope) -> Result<Slope> {
    if mu0 != Slope::Finite(q(0)) {
        return Err(Error::UnsupportedRotation);
    }
    let z = central_charge(ch, pt);
    if z.re == q(0) {
        Ok(Slope::PosInfinity)
    } else {
        Ok(Slope::Finite(z.im / z.re))
    }
}

pub fn slope_compare(a: &ChernCharacter, b: &ChernCharacter, pt: &TiltPoint) -> Result<Ordering> {
    a.same_context(b)?;
    Ok(slope(a, pt)?.cmp(&slope(b, pt)?))
}

/// Phase order on nonzero charges, phases taken in `(-1, 1]`. On the closed
/// upper half-plane minus `ℝ_{>0}` this agrees with slope order.
pub fn phase_compare(z1: &ChargeValue, z2: &ChargeValue) -> Result<Ordering> {
    if z1.is_zero() || z2.is_zero() {
        return Err(Error::ZeroCharge);
    }
    let upper = |z: &ChargeValue| z.im > q(0) || (z.im == q(0) && z.re < q(0));
    match upper(z1).cmp(&upper(z2)) {
        Ordering::Equal => {
            // both lie in one half-open half-plane, where phase order is the
            // sign of the cross product
            let cross = z1.re * z2.im - z1.im * z2.re;
            Ok(q(0).cmp(&cross))
        }
        o => Ok(o),
    }
}

/// Whether applying `T` (with `det T > 0`) to both charges keeps their phase
/// order.
pub fn gl_slope_order_invariance(
    a: &ChernCharacter,
    b: &ChernCharacter,
    pt: &TiltPoint,
    m: &[[Q; 2]; 2],
) -> Result<bool> {
    a.same_context(b)?;
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] <= q(0) {
        return Err(Error::NonPositiveDeterminant);
    }
    let (za, zb) = (central_charge(a, pt), central_charge(b, pt));
    let before = phase_compare(&za, &zb)?;
    let after = phase_compare(&za.transform(m), &zb.transform(m))?;
    Ok(before == after)
}
