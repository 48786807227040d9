//! Cross-module properties.

use fanowalls::lattice::{ChernCharacter, FanoContext};
use fanowalls::rational::{frac, q, Q};
use fanowalls::tilt::{slope_compare, TiltPoint};
use fanowalls::walls::{numerical_wall, walls_on_line, LineHit, ScanBounds, WallLocus};
use proptest::prelude::*;
use std::cmp::Ordering;

fn ctx_strategy() -> impl Strategy<Value = FanoContext> {
    prop_oneof![
        (1i64..=5).prop_map(|d| FanoContext::y(d).unwrap()),
        prop::sample::select(vec![8i64, 10, 12]).prop_map(|g| FanoContext::x_genus(g).unwrap()),
    ]
}

fn small_q() -> impl Strategy<Value = Q> {
    (-20i128..=20, 1i128..=6).prop_map(|(n, d)| frac(n, d))
}

fn ch_strategy() -> impl Strategy<Value = (FanoContext, [Q; 4], [Q; 4])> {
    (
        ctx_strategy(),
        prop::array::uniform4(small_q()),
        prop::array::uniform4(small_q()),
    )
}

proptest! {
    #[test]
    fn semicircle_points_are_on_the_wall((ctx, a, b) in ch_strategy(), s in 0i128..=16) {
        let v = ChernCharacter::new(ctx, a[0], a[1], a[2], a[3]);
        let w = ChernCharacter::new(ctx, b[0], b[1], b[2], b[3]);
        if let Ok(WallLocus::Semicircle { center, radius_sq }) = numerical_wall(&v, &w) {
            // |u| ≤ 1/(2N) with N > 1/R² keeps u² < R² and the denominators small
            let n = (q(1) / radius_sq).floor() + q(1);
            let u = frac(s - 8, 16) / n;
            let beta = center + u;
            let t = radius_sq - u * u;
            prop_assert!(t > q(0));
            let pt = TiltPoint::new(t, beta).unwrap();
            prop_assert_eq!(slope_compare(&v, &w, &pt).unwrap(), Ordering::Equal);
        }
    }

    #[test]
    fn wall_is_symmetric((ctx, a, b) in ch_strategy()) {
        let v = ChernCharacter::new(ctx, a[0], a[1], a[2], a[3]);
        let w = ChernCharacter::new(ctx, b[0], b[1], b[2], b[3]);
        prop_assert_eq!(numerical_wall(&v, &w).ok(), numerical_wall(&w, &v).ok());
    }

    #[test]
    fn wall_is_twist_equivariant((ctx, a, b) in ch_strategy(), k in -3i64..=3) {
        let v = ChernCharacter::new(ctx, a[0], a[1], a[2], a[3]);
        let w = ChernCharacter::new(ctx, b[0], b[1], b[2], b[3]);
        let shifted = numerical_wall(&v.tensor_line_bundle(k), &w.tensor_line_bundle(k)).ok();
        let kq = q(k as i128);
        let expect = numerical_wall(&v, &w).ok().map(|l| match l {
            WallLocus::Semicircle { center, radius_sq } => WallLocus::Semicircle { center: center + kq, radius_sq },
            WallLocus::Vertical { beta } => WallLocus::Vertical { beta: beta + kq },
            other => other,
        });
        prop_assert_eq!(shifted, expect);
    }
}

#[test]
fn line_walls_lie_on_their_loci() {
    for d in 1..=5 {
        let ctx = FanoContext::y(d).unwrap();
        let total = ChernCharacter::new(ctx, q(2), q(0), q(-2), q(0));
        let beta = frac(-1, 2);
        for w in walls_on_line(&total, beta, &ScanBounds::for_context(ctx)).unwrap() {
            assert_eq!(w.sub + w.quot, total);
            assert_eq!(numerical_wall(&w.sub, &w.quot).unwrap(), w.locus);
            if let Some(LineHit::At(t)) = w.t {
                let pt = TiltPoint::new(t, beta).unwrap();
                assert_eq!(slope_compare(&w.sub, &total, &pt).unwrap(), Ordering::Equal);
            }
        }
    }
}
