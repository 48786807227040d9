//! Acceptance suite. Every criterion is exact and prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};

use fanowalls::cli;
use fanowalls::gieseker::{destabilizer_case, destabilizer_cases};
use fanowalls::kuznetsov::{KuClass, KuLattice, PairingSolution};
use fanowalls::lattice::{ChernCharacter, FanoContext};
use fanowalls::rational::{frac, q, Q};
use fanowalls::tilt::{
    bms_inequality, central_charge, discriminant, gl_slope_order_invariance, slope, ChargeValue,
    Slope, TiltPoint,
};
use fanowalls::walls::{
    numerical_wall, tangent_walls_at_zero, walls_on_line, LineHit, ScanBounds, WallFlag, WallLocus,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn y(d: i64) -> FanoContext {
    FanoContext::y(d).unwrap()
}

fn x(g: i64) -> FanoContext {
    FanoContext::x_genus(g).unwrap()
}

fn k(a: i64, b: i64) -> KuClass {
    KuClass::new(a, b)
}

fn pt(t: Q, beta: Q) -> TiltPoint {
    TiltPoint::new(t, beta).unwrap()
}

fn two_minus_2l(ctx: FanoContext) -> ChernCharacter {
    ChernCharacter::new(ctx, q(2), q(0), q(-2), q(0))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(mut v: Vec<KuClass>) -> Vec<KuClass> {
    v.sort();
    v
}

fn euler_matrices() -> Outcome {
    for (ctx, expect) in (1..=5)
        .map(|d| (y(d), [[-1, -1], [1 - d, -d]]))
        .chain([8, 10, 12].map(|g| (x(g), [[-1, -2], [1 - g / 2, 1 - g]])))
    {
        let lat = KuLattice::new(ctx).map_err(|e| e.to_string())?;
        let mut got = [[0i64; 2]; 2];
        for (row, bi) in got.iter_mut().zip(&lat.basis) {
            for (cell, bj) in row.iter_mut().zip(&lat.basis) {
                let v = bi.euler(bj).map_err(|e| e.to_string())?;
                ensure(v.is_integer(), || {
                    format!("{ctx}: non-integral pairing {v}")
                })?;
                *cell = *v.numer() as i64;
            }
        }
        ensure(got == expect, || format!("{ctx}: {got:?} != {expect:?}"))?;
    }
    Ok(())
}

fn euler_anchors() -> Outcome {
    let e = ChernCharacter::new(x(8), q(2), q(1), q(1), frac(-2, 3));
    ensure(e.euler_char() == q(5), || {
        format!("chi(E) on X14 = {}", e.euler_char())
    })?;
    let kev = ChernCharacter::new(x(8), q(3), q(-1), q(-1), frac(2, 3));
    let kk = kev.euler(&kev).unwrap();
    ensure(kk == q(-1), || format!("chi(ker ev, ker ev) = {kk}"))?;
    let f = ChernCharacter::from_chern_classes(y(3), 2, 1, q(2), q(0));
    ensure(f.euler_char() == q(3), || {
        format!("chi(E) on Y3 = {}", f.euler_char())
    })?;
    let f1 = f.tensor_line_bundle(-1).euler_char();
    ensure(f1 == q(0), || format!("chi(E(-1)) on Y3 = {f1}"))
}

fn class_enumeration() -> Outcome {
    let y3 = KuLattice::new(y(3)).unwrap();
    let got = sorted(y3.enumerate_classes(1, 10, true));
    let want = sorted(vec![k(1, 0), k(1, -1), k(2, -1)]);
    ensure(got == want, || format!("Y3 (-1)-classes {got:?}"))?;
    let x14 = KuLattice::new(x(8)).unwrap();
    let got = sorted(x14.enumerate_classes(1, 10, true));
    let want = sorted(vec![k(1, 0), k(3, -1), k(2, -1)]);
    ensure(got == want, || format!("X14 (-1)-classes {got:?}"))?;
    for d in [4, 5] {
        let lat = KuLattice::new(y(d)).unwrap();
        for r in [2, 3] {
            let found = lat.enumerate_classes(r, 50, false);
            ensure(found.is_empty(), || {
                format!("Y{d} has (-{r})-classes {found:?}")
            })?;
        }
    }
    let zero: Vec<_> = KuLattice::new(y(5))
        .unwrap()
        .enumerate_classes(0, 50, false)
        .into_iter()
        .filter(|u| *u != k(0, 0))
        .collect();
    ensure(zero.is_empty(), || {
        format!("Y5 has nonzero (0)-classes {zero:?}")
    })
}

fn matmul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn serre_operator() -> Outcome {
    let mut bad = Vec::new();
    for lat in KuLattice::all() {
        let s = match lat.serre_matrix() {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("{}: {e}", lat.ctx));
                continue;
            }
        };
        let e = lat.gram;
        let et = [[e[0][0], e[1][0]], [e[0][1], e[1][1]]];
        if matmul(&e, &s) != et {
            bad.push(format!("{}: E*S != E^T", lat.ctx));
        }
        let cube = matmul(&s, &matmul(&s, &s));
        if cube != [[-1, 0], [0, -1]] {
            bad.push(format!("{}: S = {s:?}, S^3 = {cube:?}", lat.ctx));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn rotation_pell() -> Outcome {
    let lat = KuLattice::new(y(5)).unwrap();
    let r = lat.rotation_matrix().unwrap();
    ensure(r == [[-4, -5], [1, 1]], || format!("R = {r:?}"))?;
    let form = lat.quadratic_form();
    ensure((form.qa, form.qab, form.qbb) == (1, 5, 5), || {
        format!("Q = {form:?}")
    })?;
    for a in -30..=30 {
        for b in -30..=30 {
            let u = k(a, b);
            ensure(form.eval(u.apply(&r)) == form.eval(u), || {
                format!("Q(Ru) != Q(u) at {u}")
            })?;
        }
    }
    let orbit = lat.signed_orbit_within(k(1, 0), 50).unwrap();
    let classes = lat.enumerate_classes(1, 50, false);
    let missing: Vec<_> = classes.iter().filter(|u| !orbit.contains(u)).collect();
    ensure(missing.is_empty(), || format!("orbit misses {missing:?}"))
}

fn wall_system() -> Outcome {
    for d in 1..=5 {
        let ctx = y(d);
        let got = walls_on_line(
            &two_minus_2l(ctx),
            frac(-1, 2),
            &ScanBounds::for_context(ctx),
        )
        .map_err(|e| e.to_string())?;
        let mut keys: Vec<_> = got
            .iter()
            .map(|w| (w.params[0], w.params[2], w.t))
            .collect();
        keys.sort_by_key(|k| (k.0, k.1));
        let mut want = vec![(1, d - 8, Some(LineHit::Ray))];
        if d == 5 {
            want = vec![
                (-1, -5, Some(LineHit::At(frac(1, 20)))),
                (1, -3, Some(LineHit::Ray)),
                (3, -1, Some(LineHit::At(frac(1, 20)))),
            ];
        }
        ensure(keys == want, || format!("Y{d}: {keys:?}"))?;
    }
    Ok(())
}

fn largest_wall_locus() -> Outcome {
    for d in 3..=5i128 {
        let ctx = y(d as i64);
        let w = numerical_wall(&ChernCharacter::line_bundle(ctx, -1), &two_minus_2l(ctx))
            .map_err(|e| e.to_string())?;
        let want = WallLocus::Semicircle {
            center: frac(-(d + 2), 2 * d),
            radius_sq: frac((d - 2) * (d - 2), 4 * d * d),
        };
        ensure(w == want, || format!("Y{d}: {w}"))?;
    }
    for d in [1, 3, 4, 5] {
        let ctx = y(d);
        let ws = walls_on_line(&two_minus_2l(ctx), q(-1), &ScanBounds::for_context(ctx))
            .map_err(|e| e.to_string())?;
        let crossing: Vec<_> = ws
            .iter()
            .filter(|w| !w.flags.contains(&WallFlag::PseudoWall))
            .collect();
        ensure(crossing.is_empty(), || {
            format!("Y{d}: walls meet beta = -1: {crossing:?}")
        })?;
    }
    Ok(())
}

fn bms_cutoffs() -> Outcome {
    for d in 1..=5 {
        let ctx = y(d);
        let p = pt(q(0), frac(-1, 2));
        let ok = |x: i128| {
            bms_inequality(&ChernCharacter::new(ctx, q(1), q(0), q(-1), q(x)), &p) >= q(0)
        };
        let cutoff = (-50..=50).rev().find(|&x| ok(x)).ok_or("no admissible x")?;
        ensure((-50..=cutoff).all(ok), || {
            format!("Y{d}: admissible set not an interval")
        })?;
        let want = if d == 1 { 1 } else { 0 };
        ensure(cutoff == want, || format!("Y{d}: cutoff {cutoff}"))?;
    }
    Ok(())
}

fn slope_anchors() -> Outcome {
    let ts = [q(0), frac(1, 20), frac(1, 7), q(1), frac(9, 4)];
    for d in 1..=5i128 {
        let ctx = y(d as i64);
        let shifted = -ChernCharacter::line_bundle(ctx, -1);
        for t in ts {
            let p = pt(t, frac(-1, 2));
            let a = slope(&two_minus_2l(ctx), &p).map_err(|e| e.to_string())?;
            ensure(a == Slope::Finite(frac(d - 8, 4 * d) - t), || {
                format!("Y{d} t = {t}: 2-2L slope {a}")
            })?;
            let b = slope(&shifted, &p).map_err(|e| e.to_string())?;
            ensure(b == Slope::Finite(t - frac(1, 4)), || {
                format!("Y{d} t = {t}: O(-1)[1] slope {b}")
            })?;
            if d == 5 {
                ensure((a == b) == (t == frac(1, 20)), || {
                    format!("Y5: equality at t = {t}")
                })?;
            }
        }
    }
    Ok(())
}

fn pairing_systems() -> Outcome {
    let lat = KuLattice::new(y(5)).unwrap();
    let sols = lat.pairing_system_solve(k(2, 0), &[(-1, -1)], 20);
    let want = vec![PairingSolution {
        sub: k(1, 0),
        quot: k(1, 0),
        target: (-1, -1),
    }];
    ensure(sols == want, || format!("target (-1, -1): {sols:?}"))?;
    let none = lat.pairing_system_solve(k(2, 0), &[(0, -2)], 20);
    ensure(none.is_empty(), || format!("target (0, -2): {none:?}"))
}

fn gieseker_cases() -> Outcome {
    let hits = destabilizer_cases(y(3), 4).map_err(|e| e.to_string())?;
    let mut expect = Vec::new();
    for a in -4..=4 {
        for b in -4..=4 {
            for c in -4..=4 {
                if let Some(case) = destabilizer_case(a, b, c) {
                    expect.push((a, b, c, case));
                }
            }
        }
    }
    let got: Vec<_> = hits.iter().map(|h| (h.a, h.b, h.c, h.case)).collect();
    ensure(got == expect, || {
        format!(
            "{} hits, {} expected by the three conditions",
            got.len(),
            expect.len()
        )
    })?;
    for case in 1..=3 {
        ensure(got.iter().any(|h| h.3 == case), || {
            format!("case {case} empty")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let d: i128 = rng.gen_range(1..=5);
        let (a, b, c): (i128, i128, i128) = (
            rng.gen_range(-50..=50),
            rng.gen_range(-50..=50),
            rng.gen_range(-50..=50),
        );
        let g = ChernCharacter::new(y(d as i64), q(1), q(a), frac(b, 2), frac(c, 2));
        let (dq, aq, bq, cq) = (q(d), q(a), q(b), q(c));
        let t = (dq + q(3)) / q(3);
        let want = [
            q(1) + t * aq + (bq + cq) / q(2),
            t + dq * aq + bq / q(2),
            (aq + q(1)) * dq / q(2),
            dq / q(6),
        ];
        let have = g.hilbert_polynomial().coeffs;
        ensure(have == want, || {
            format!("(d, a, b, c) = ({d}, {a}, {b}, {c}): {have:?}")
        })?;
    }
    Ok(())
}

fn tangency_at_zero() -> Outcome {
    for g in [8, 10, 12] {
        let ctx = x(g);
        let total = ChernCharacter::new(ctx, q(2), q(0), q(-4), q(0));
        let ws = tangent_walls_at_zero(&total, &ScanBounds::for_context(ctx))
            .map_err(|e| e.to_string())?;
        let half = [q(1), q(0), q(-2)];
        let ok = ws.len() == 1
            && ws[0].sub.truncated() == half
            && ws[0].quot.truncated() == half
            && ws[0].flags.contains(&WallFlag::PseudoWall);
        ensure(ok, || format!("X{}: {ws:?}", 2 * g - 2))?;
    }
    Ok(())
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    frac(rng.gen_range(-24..=24), rng.gen_range(1..=6))
}

fn random_ctx(rng: &mut ChaCha8Rng) -> FanoContext {
    match rng.gen_range(0..8) {
        i @ 0..=4 => y(i + 1),
        i => x(2 * i - 2),
    }
}

fn random_ch(rng: &mut ChaCha8Rng, ctx: FanoContext) -> ChernCharacter {
    ChernCharacter::new(ctx, small_q(rng), small_q(rng), small_q(rng), small_q(rng))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        std::iter::once("fanowalls").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..100 {
        let ctx = random_ctx(&mut rng);
        let e = random_ch(&mut rng, ctx);
        let (a, b) = (small_q(&mut rng), small_q(&mut rng));
        ensure(e.twist(a).twist(b) == e.twist(a + b), || {
            format!("cocycle #{i}: {e}, {a}, {b}")
        })?;
        ensure(discriminant(&e.twist(a)) == discriminant(&e), || {
            format!("delta #{i}: {e}, {a}")
        })?;
        let (f, g) = (random_ch(&mut rng, ctx), random_ch(&mut rng, ctx));
        let (s, u) = (small_q(&mut rng), small_q(&mut rng));
        let lhs = (e * s + f * u).euler(&g).unwrap();
        let rhs = s * e.euler(&g).unwrap() + u * f.euler(&g).unwrap();
        let lhs2 = g.euler(&(e * s + f * u)).unwrap();
        let rhs2 = s * g.euler(&e).unwrap() + u * g.euler(&f).unwrap();
        ensure(lhs == rhs && lhs2 == rhs2, || format!("bilinearity #{i}"))?;
    }
    let mut done = 0;
    while done < 100 {
        let ctx = random_ctx(&mut rng);
        let (e, f) = (random_ch(&mut rng, ctx), random_ch(&mut rng, ctx));
        let t = small_q(&mut rng);
        let p = pt(if t < q(0) { -t } else { t }, small_q(&mut rng));
        let m = [
            [small_q(&mut rng), small_q(&mut rng)],
            [small_q(&mut rng), small_q(&mut rng)],
        ];
        let (ze, zf) = (central_charge(&e, &p), central_charge(&f, &p));
        let in_heart = |z: &ChargeValue| z.im > q(0) || (z.im == q(0) && z.re < q(0));
        if ![ze, zf, ze.transform(&m), zf.transform(&m)]
            .iter()
            .all(in_heart)
        {
            continue;
        }
        match gl_slope_order_invariance(&e, &f, &p, &m) {
            Ok(true) => done += 1,
            Ok(false) => return Err(format!("GL order changed: {e}, {f}, {p}, {m:?}")),
            Err(_) => continue,
        }
    }
    let runs: [&[&str]; 4] = [
        &[
            "--json", "walls", "--degree", "5", "--class", "2,0,-2,0", "--beta", "-1/2",
        ],
        &[
            "--json",
            "largest-wall",
            "--degree",
            "4",
            "--class",
            "2,0,-2,0",
        ],
        &["--json", "destab", "--degree", "3"],
        &[
            "plot-walls",
            "--degree",
            "5",
            "--class",
            "2,0,-2,0",
            "--line",
            "-1/2",
        ],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for workers in ["1", "4"] {
            for _ in 0..2 {
                let mut full = vec!["--workers", workers];
                full.extend_from_slice(args);
                let (code, out) = run_cli(&full);
                ensure(code == 0, || format!("{args:?} exited {code}"))?;
                outputs.push(out);
            }
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("{args:?} not byte-deterministic")
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Euler matrices of the eight lattices", euler_matrices),
        ("Euler characteristic anchors", euler_anchors),
        ("class enumeration", class_enumeration),
        ("Serre operator integral with S^3 = -Id", serre_operator),
        (
            "rotation preserves Q and its orbit covers the (-1)-classes",
            rotation_pell,
        ),
        ("wall system on beta = -1/2", wall_system),
        ("largest wall locus and beta = -1", largest_wall_locus),
        ("BMS cutoffs for 1 - L + xP", bms_cutoffs),
        ("tilt slope anchors", slope_anchors),
        ("pairing systems on Y5", pairing_systems),
        (
            "Gieseker case split and Hilbert closed form",
            gieseker_cases,
        ),
        ("tangent decompositions at beta = 0", tangency_at_zero),
        ("property suites and output determinism", property_suites),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(()) => println!("PASS criterion {}: {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
