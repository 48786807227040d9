//! Rank two numerical lattices of Kuznetsov components.
//!
//! Classes are integer pairs `(a, b)` in a fixed basis: `v = 1 - L`,
//! `w = H - (D/2)L + (D/6 - 1)P` on `Y_d`, and `s = 1 - 2L`,
//! `t = H - (g/2 + 1)L - ((16 - g)/12)P` on `X_{2g-2}`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ChernCharacter, FanoContext};
use crate::rational::{frac, is_square, q, to_i64, Q};

pub type IntMatrix = [[i64; 2]; 2];

/// Coordinates `a·b₀ + b·b₁` with respect to a [`KuLattice`] basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct KuClass {
    pub a: i64,
    pub b: i64,
}

impl From<[i64; 2]> for KuClass {
    fn from([a, b]: [i64; 2]) -> Self {
        Self { a, b }
    }
}

impl From<KuClass> for [i64; 2] {
    fn from(u: KuClass) -> Self {
        [u.a, u.b]
    }
}

impl std::ops::Neg for KuClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl std::ops::Sub for KuClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl KuClass {
    pub fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(k * self.a, k * self.b)
    }

    pub fn apply(self, m: &IntMatrix) -> Self {
        Self::new(
            m[0][0] * self.a + m[0][1] * self.b,
            m[1][0] * self.a + m[1][1] * self.b,
        )
    }

    /// First nonzero coordinate positive.
    pub fn is_canonical_sign(self) -> bool {
        self.a > 0 || (self.a == 0 && self.b > 0)
    }

    fn max_abs(self) -> i64 {
        self.a.abs().max(self.b.abs())
    }
}

impl fmt::Display for KuClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// JSON form `{"lattice":{"index":2,"degree":5},"class":[2,0]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub lattice: FanoContext,
    pub class: KuClass,
}

/// `Q(a, b) = qa·a² + qab·ab + qbb·b²`, equal to `-χ(u, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub qa: i64,
    pub qab: i64,
    pub qbb: i64,
}

impl QuadraticForm {
    pub fn eval(&self, u: KuClass) -> i64 {
        self.qa * u.a * u.a + self.qab * u.a * u.b + self.qbb * u.b * u.b
    }

    /// `4·qa·Q = X² - D'·Y²` with `X = 2·qa·a + qab·b`, `Y = b`.
    pub fn pell_transform(&self, u: KuClass) -> (i64, i64) {
        (2 * self.qa * u.a + self.qab * u.b, u.b)
    }

    /// `D' = qab² - 4·qa·qbb`.
    pub fn pell_discriminant(&self) -> i64 {
        self.qab * self.qab - 4 * self.qa * self.qbb
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}a^2 + {}ab + {}b^2", self.qa, self.qab, self.qbb)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuLattice {
    pub ctx: FanoContext,
    pub basis: [ChernCharacter; 2],
    /// `gram[i][j] = χ(basis[i], basis[j])`.
    pub gram: IntMatrix,
}

/// A split `total = sub + quot` meeting one pairing target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingSolution {
    pub sub: KuClass,
    pub quot: KuClass,
    /// `(χ(sub, quot), χ(quot, sub))`.
    pub target: (i64, i64),
}

pub const DEFAULT_PAIRING_EXTRA: i64 = 20;

impl KuLattice {
    pub fn new(ctx: FanoContext) -> Result<Self> {
        let mk = |r, c, m, n| ChernCharacter::new(ctx, r, c, m, n);
        let d = ctx.degree() as i128;
        let basis = match (ctx.index(), ctx.genus()) {
            (2, _) => [
                mk(q(1), q(0), q(-1), q(0)),
                mk(q(0), q(1), frac(-d, 2), frac(d, 6) - q(1)),
            ],
            (1, Some(g @ (8 | 10 | 12))) => {
                let g = g as i128;
                [
                    mk(q(1), q(0), q(-2), q(0)),
                    mk(q(0), q(1), -(frac(g, 2) + q(1)), -frac(16 - g, 12)),
                ]
            }
            _ => return Err(Error::UnsupportedLattice(ctx)),
        };
        let mut gram = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let e = basis[i].euler(&basis[j])?;
                gram[i][j] = to_i64(&e).ok_or_else(|| {
                    Error::NotLatticeMember(format!("basis pairing {e} is not integral"))
                })?;
            }
        }
        Ok(Self { ctx, basis, gram })
    }

    /// The eight supported lattices: `Y_1..Y_5`, then `X_14, X_18, X_22`.
    pub fn all() -> Vec<KuLattice> {
        let ys = (1..=5).map(FanoContext::y);
        let xs = [8, 10, 12].into_iter().map(FanoContext::x_genus);
        ys.chain(xs)
            .map(|c| KuLattice::new(c.expect("supported context")).expect("supported lattice"))
            .collect()
    }

    pub fn embed(&self, u: KuClass) -> ChernCharacter {
        self.basis[0] * q(u.a as i128) + self.basis[1] * q(u.b as i128)
    }

    /// `χ(u, w)` from the gram matrix.
    pub fn pairing(&self, u: KuClass, w: KuClass) -> i64 {
        let e = &self.gram;
        u.a * (e[0][0] * w.a + e[0][1] * w.b) + u.b * (e[1][0] * w.a + e[1][1] * w.b)
    }

    pub fn self_intersection(&self, u: KuClass) -> i64 {
        self.pairing(u, u)
    }

    pub fn quadratic_form(&self) -> QuadraticForm {
        let e = &self.gram;
        QuadraticForm {
            qa: -e[0][0],
            qab: -(e[0][1] + e[1][0]),
            qbb: -e[1][1],
        }
    }

    /// All `(a, b)` in the box `|a|, |b| ≤ bound` with `χ(u, u) = -r`, in
    /// lexicographic order.
    pub fn enumerate_classes(&self, r: i64, bound: i64, up_to_sign: bool) -> Vec<KuClass> {
        let form = self.quadratic_form();
        (-bound..=bound)
            .into_par_iter()
            .flat_map_iter(|a| {
                (-bound..=bound)
                    .map(move |b| KuClass::new(a, b))
                    .filter(move |u| form.eval(*u) == r)
                    .filter(move |u| !up_to_sign || u.is_canonical_sign() || (u.a == 0 && u.b == 0))
            })
            .collect()
    }

    /// `S = E⁻¹Eᵀ`, the numerical Serre operator with `χ(y, Sx) = χ(x, y)`.
    pub fn serre_matrix(&self) -> Result<IntMatrix> {
        let e = self.gram.map(|row| row.map(|x| q(x as i128)));
        let det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
        if det == q(0) {
            return Err(Error::SingularGram);
        }
        let inv = [
            [e[1][1] / det, -e[0][1] / det],
            [-e[1][0] / det, e[0][0] / det],
        ];
        let mut s = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                // (E⁻¹Eᵀ)[i][j] = Σ_k inv[i][k]·E[j][k]
                let x: Q = (0..2).map(|k| inv[i][k] * e[j][k]).sum();
                s[i][j] = to_i64(&x).ok_or_else(|| {
                    Error::NonIntegralSerre(format!("{} entry ({i},{j}) = {x}", self.ctx))
                })?;
            }
        }
        Ok(s)
    }

    /// Action of the rotation functor on `N(Ku(Y_5))`.
    pub fn rotation_matrix(&self) -> Result<IntMatrix> {
        if self.ctx.index() == 2 && self.ctx.degree() == 5 {
            Ok([[-4, -5], [1, 1]])
        } else {
            Err(Error::UnsupportedContext(
                self.ctx,
                "rotation is only given on Y5",
            ))
        }
    }

    pub fn rotation_inverse(&self) -> Result<IntMatrix> {
        let r = self.rotation_matrix()?;
        // det R = 1
        Ok([[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]])
    }

    /// `[u, Ru, R²u, …]` with `steps + 1` entries.
    pub fn rotation_orbit(&self, u: KuClass, steps: usize) -> Result<Vec<KuClass>> {
        let r = self.rotation_matrix()?;
        Ok(std::iter::successors(Some(u), |x| Some(x.apply(&r)))
            .take(steps + 1)
            .collect())
    }

    /// Every `±R^k u` (`k ∈ ℤ`) inside the box `|a|, |b| ≤ bound`, sorted.
    ///
    /// The rotation is hyperbolic, so each direction is followed until two
    /// consecutive images leave the box.
    pub fn signed_orbit_within(&self, u: KuClass, bound: i64) -> Result<Vec<KuClass>> {
        let mut found = BTreeSet::new();
        for m in [self.rotation_matrix()?, self.rotation_inverse()?] {
            let mut x = u;
            let mut outside = 0;
            let mut seen = BTreeSet::new();
            while outside < 2 && seen.insert(x) {
                if x.max_abs() <= bound {
                    found.insert(x);
                    found.insert(-x);
                    outside = 0;
                } else {
                    outside += 1;
                }
                if x.max_abs() > i64::MAX / 16 {
                    break;
                }
                x = x.apply(&m);
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Splits `total = A + B` with `(χ(A, B), χ(B, A))` among `targets`,
    /// scanning `|a₁|, |b₁| ≤ max(|total|) + extra`. Ordered by `A`, then by
    /// target position.
    pub fn pairing_system_solve(
        &self,
        total: KuClass,
        targets: &[(i64, i64)],
        extra: i64,
    ) -> Vec<PairingSolution> {
        let bound = total.max_abs() + extra;
        (-bound..=bound)
            .into_par_iter()
            .flat_map_iter(|a| {
                (-bound..=bound).flat_map(move |b| {
                    let sub = KuClass::new(a, b);
                    let quot = total - sub;
                    let got = (self.pairing(sub, quot), self.pairing(quot, sub));
                    targets
                        .iter()
                        .filter(move |t| **t == got)
                        .map(move |t| PairingSolution {
                            sub,
                            quot,
                            target: *t,
                        })
                })
            })
            .collect()
    }
}

/// All `(x, y)` with `x² - d'·y² = n` and `|x|, |y| ≤ bound`, sorted.
pub fn pell_solve(dprime: i64, n: i64, bound: i64) -> Result<Vec<(i64, i64)>> {
    if dprime <= 0 || is_square(dprime as i128) {
        return Err(Error::SquarePellCoefficient(dprime));
    }
    let mut out: Vec<(i64, i64)> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|y| {
            let x2 = n as i128 + dprime as i128 * (y as i128) * (y as i128);
            let x = crate::rational::isqrt(x2);
            let hit = x2 >= 0 && x * x == x2 && x <= bound as i128;
            let x = x as i64;
            let xs: Vec<(i64, i64)> = match (hit, x) {
                (false, _) => vec![],
                (true, 0) => vec![(0, y)],
                (true, x) => vec![(-x, y), (x, y)],
            };
            xs.into_iter()
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}
