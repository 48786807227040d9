//! Chern characters on a prime Fano threefold of Picard rank one.
//!
//! A class is stored as `r + c·H + m·L + n·P` where `L = H²/D` is the class of
//! a line and `P` the class of a point. The intersection ring is
//! `H·H = D·L`, `H·L = P`, with everything of degree above three vanishing.
//!
//! The Euler pairing is Hirzebruch–Riemann–Roch with `td(X) = 1 + (i/2)H +
//! td₂ + P`. Only two integrals of `td₂` are needed, and they follow from
//! `χ(O_X) = 1` and `c₁·c₂ = 24`: `∫ H·td₂ = (i²D + 24/i)/12`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{frac, is_integer, q, serde_q_vec, Q};

/// Discrete data of the ambient threefold: index `i` (with `-K = iH`) and
/// degree `D = H³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct FanoContext {
    index: u8,
    degree: i64,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    index: u8,
    degree: i64,
}

impl TryFrom<RawContext> for FanoContext {
    type Error = Error;
    fn try_from(raw: RawContext) -> Result<Self> {
        FanoContext::new(raw.index, raw.degree)
    }
}

impl From<FanoContext> for RawContext {
    fn from(ctx: FanoContext) -> Self {
        RawContext {
            index: ctx.index,
            degree: ctx.degree,
        }
    }
}

impl FanoContext {
    pub fn new(index: u8, degree: i64) -> Result<Self> {
        match index {
            1 if degree > 0 => Ok(Self { index, degree }),
            2 if (1..=5).contains(&degree) => Ok(Self { index, degree }),
            1 | 2 => Err(Error::InvalidContext(format!(
                "degree {degree} is not allowed for index {index}"
            ))),
            _ => Err(Error::InvalidContext(format!(
                "index {index} is not 1 or 2"
            ))),
        }
    }

    /// Index two threefold `Y_d`.
    pub fn y(d: i64) -> Result<Self> {
        Self::new(2, d)
    }

    /// Index one threefold `X_{2g-2}` of genus `g`.
    pub fn x_genus(g: i64) -> Result<Self> {
        Self::new(1, 2 * g - 2)
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn degree_q(&self) -> Q {
        q(self.degree as i128)
    }

    /// Genus `g` with `D = 2g - 2`; index one and even degree only.
    pub fn genus(&self) -> Option<i64> {
        (self.index == 1 && self.degree % 2 == 0).then(|| self.degree / 2 + 1)
    }

    /// `∫ H·td₂ = (i²D + 24/i)/12`.
    pub fn todd_pairing(&self) -> Q {
        let i = self.index as i128;
        (q(i * i * self.degree as i128) + frac(24, i)) / q(12)
    }

    /// `∫ L·td₁ = i/2`.
    pub fn half_index(&self) -> Q {
        frac(self.index as i128, 2)
    }
}

impl fmt::Display for FanoContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.index, self.genus()) {
            (2, _) => write!(f, "Y{}", self.degree),
            (_, Some(_)) => write!(f, "X{}", self.degree),
            _ => write!(f, "(index {}, degree {})", self.index, self.degree),
        }
    }
}

/// `ch = r + c·H + m·L + n·P` on a fixed threefold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChernCharacter {
    pub ctx: FanoContext,
    pub r: Q,
    pub c: Q,
    pub m: Q,
    pub n: Q,
}

#[derive(Serialize, Deserialize)]
struct RawChern {
    ctx: FanoContext,
    #[serde(with = "serde_q_vec")]
    ch: Vec<Q>,
}

impl Serialize for ChernCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawChern {
            ctx: self.ctx,
            ch: self.components().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChernCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawChern::deserialize(d)?;
        match raw.ch.as_slice() {
            &[r, c, m, n] => Ok(ChernCharacter::new(raw.ctx, r, c, m, n)),
            other => Err(serde::de::Error::custom(format!(
                "expected 4 components, got {}",
                other.len()
            ))),
        }
    }
}

impl ChernCharacter {
    pub fn new(ctx: FanoContext, r: Q, c: Q, m: Q, n: Q) -> Self {
        Self { ctx, r, c, m, n }
    }

    pub fn from_slice(ctx: FanoContext, xs: &[Q]) -> Result<Self> {
        match *xs {
            [r, c, m, n] => Ok(Self::new(ctx, r, c, m, n)),
            _ => Err(Error::Parse(format!(
                "a class needs 4 components, got {}",
                xs.len()
            ))),
        }
    }

    pub fn zero(ctx: FanoContext) -> Self {
        Self::new(ctx, q(0), q(0), q(0), q(0))
    }

    /// Class of the structure sheaf.
    pub fn one(ctx: FanoContext) -> Self {
        Self::new(ctx, q(1), q(0), q(0), q(0))
    }

    pub fn point(ctx: FanoContext) -> Self {
        Self::new(ctx, q(0), q(0), q(0), q(1))
    }

    pub fn line(ctx: FanoContext) -> Self {
        Self::new(ctx, q(0), q(0), q(1), q(0))
    }

    pub fn hyperplane(ctx: FanoContext) -> Self {
        Self::new(ctx, q(0), q(1), q(0), q(0))
    }

    /// `ch(O(k)) = e^{kH}`.
    pub fn line_bundle(ctx: FanoContext, k: i64) -> Self {
        Self::one(ctx).tensor_line_bundle(k)
    }

    /// Chern character from Chern classes `(rank, c₁·H, c₂·L, c₃·P)`.
    pub fn from_chern_classes(ctx: FanoContext, rank: i64, c1: i64, c2: Q, c3: Q) -> Self {
        let d = ctx.degree_q();
        let c1 = q(c1 as i128);
        let m = c1 * c1 * d / q(2) - c2;
        let n = (c1 * c1 * c1 * d - q(3) * c1 * c2 + q(3) * c3) / q(6);
        Self::new(ctx, q(rank as i128), c1, m, n)
    }

    pub fn components(&self) -> [Q; 4] {
        [self.r, self.c, self.m, self.n]
    }

    /// `(r, c, m)`, the part seen by tilt stability.
    pub fn truncated(&self) -> [Q; 3] {
        [self.r, self.c, self.m]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|x| *x == q(0))
    }

    pub fn same_context(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx, other.ctx))
        }
    }

    /// `e^{-βH}·ch`.
    pub fn twist(&self, beta: Q) -> Self {
        let d = self.ctx.degree_q();
        let b2 = beta * beta / q(2);
        let b3 = beta * beta * beta / q(6);
        Self::new(
            self.ctx,
            self.r,
            self.c - beta * self.r,
            self.m - beta * self.c * d + b2 * self.r * d,
            self.n - beta * self.m + b2 * self.c * d - b3 * self.r * d,
        )
    }

    /// `ch ⊗ O(k)`.
    pub fn tensor_line_bundle(&self, k: i64) -> Self {
        self.twist(q(-(k as i128)))
    }

    pub fn dual(&self) -> Self {
        Self::new(self.ctx, self.r, -self.c, self.m, -self.n)
    }

    /// Truncated product in the intersection ring. Contexts must agree.
    fn product(&self, o: &Self) -> Self {
        let d = self.ctx.degree_q();
        Self::new(
            self.ctx,
            self.r * o.r,
            self.r * o.c + self.c * o.r,
            self.r * o.m + self.c * o.c * d + self.m * o.r,
            self.r * o.n + self.c * o.m + self.m * o.c + self.n * o.r,
        )
    }

    /// `∫ ch·td(X)`.
    fn integrate_todd(&self) -> Q {
        self.r + self.c * self.ctx.todd_pairing() + self.m * self.ctx.half_index() + self.n
    }

    /// `χ(E, F) = ∫ ch(E)^∨·ch(F)·td(X)`.
    pub fn euler(&self, other: &Self) -> Result<Q> {
        self.same_context(other)?;
        Ok(self.dual().product(other).integrate_todd())
    }

    pub fn euler_char(&self) -> Q {
        self.integrate_todd()
    }

    /// `k ↦ χ(ch ⊗ O(k))` as a cubic.
    pub fn hilbert_polynomial(&self) -> HilbertPoly {
        let d = self.ctx.degree_q();
        let t = self.ctx.todd_pairing();
        let h = self.ctx.half_index();
        let (r, c, m) = (self.r, self.c, self.m);
        HilbertPoly {
            coeffs: [
                self.euler_char(),
                r * t + c * d * h + m,
                r * d * h / q(2) + c * d / q(2),
                r * d / q(6),
            ],
            rank: r,
        }
    }

    /// `r, c ∈ ℤ` and `χ(ch ⊗ O(k)) ∈ ℤ` for `k = 0, 1, 2`.
    pub fn is_lattice_member(&self) -> bool {
        is_integer(&self.r)
            && is_integer(&self.c)
            && (0..3).all(|k| is_integer(&self.tensor_line_bundle(k).euler_char()))
    }

    /// Whether some `ch₃` completes `(r, c, m)` to a lattice member.
    ///
    /// Changing `n` shifts every twisted Euler characteristic by the same
    /// amount, so only the differences between twists matter.
    pub fn has_integral_lift(&self) -> bool {
        if !is_integer(&self.r) || !is_integer(&self.c) {
            return false;
        }
        let chi: Vec<Q> = (0..3)
            .map(|k| self.tensor_line_bundle(k).euler_char())
            .collect();
        is_integer(&(chi[1] - chi[0])) && is_integer(&(chi[2] - chi[0]))
    }

    /// Replaces `ch₃` by the value making `χ = 0`. Walls only see `(r, c, m)`,
    /// and this lift is integral whenever [`Self::has_integral_lift`] holds.
    pub fn with_zero_euler_char(&self) -> Self {
        let without = Self { n: q(0), ..*self };
        Self {
            n: -without.euler_char(),
            ..*self
        }
    }

    /// Whether the `(r, c, m)` parts are proportional (over ℚ).
    pub fn proportional_truncated(&self, other: &Self) -> bool {
        let a = self.truncated();
        let b = other.truncated();
        (0..3).all(|i| (0..3).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    /// Human form in H-units, e.g. `1 - 1/3H^2` on `Y₃`.
    pub fn h_units(&self) -> [Q; 4] {
        let d = self.ctx.degree_q();
        [self.r, self.c, self.m / d, self.n / d]
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (x, sym) in self.components().iter().zip(["", "H", "L", "P"]) {
            if *x == q(0) {
                continue;
            }
            let neg = *x < q(0);
            let abs = if neg { -*x } else { *x };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if abs != q(1) || sym.is_empty() {
                if abs.is_integer() {
                    out.push_str(&abs.to_string());
                } else {
                    out.push_str(&format!("({abs})"));
                }
            }
            out.push_str(sym);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Add for ChernCharacter {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.ctx, o.ctx);
        Self::new(
            self.ctx,
            self.r + o.r,
            self.c + o.c,
            self.m + o.m,
            self.n + o.n,
        )
    }
}

impl Sub for ChernCharacter {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for ChernCharacter {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.ctx, -self.r, -self.c, -self.m, -self.n)
    }
}

impl Mul<Q> for ChernCharacter {
    type Output = Self;
    fn mul(self, k: Q) -> Self {
        Self::new(self.ctx, k * self.r, k * self.c, k * self.m, k * self.n)
    }
}

/// `p(n) = p₀ + p₁n + p₂n² + p₃n³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPoly {
    #[serde(with = "crate::rational::serde_q_arr4")]
    pub coeffs: [Q; 4],
    #[serde(with = "crate::rational::serde_q")]
    pub rank: Q,
}

impl HilbertPoly {
    pub fn eval(&self, n: Q) -> Q {
        self.coeffs.iter().rev().fold(q(0), |acc, c| acc * n + c)
    }
}
