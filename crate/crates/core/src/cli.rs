//! Command line front end.
//!
//! Data goes to `out`, diagnostics to `err`. Exit codes: `0` success, `2`
//! usage error, `3` domain error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::gieseker::{destabilizer_cases, surviving_destabilizers};
use crate::kuznetsov::{
    pell_solve, IntMatrix, KuClass, KuLattice, LatticeClass, DEFAULT_PAIRING_EXTRA,
};
use crate::lattice::{ChernCharacter, FanoContext};
use crate::parallel::with_workers;
use crate::plot::{items_from_candidates, render_svg, PlotWindow};
use crate::rational::{parse_q, parse_q_list, Q};
use crate::tilt::{bms_inequality, central_charge, discriminant, slope, TiltPoint};
use crate::walls::{
    infinity_slope_candidates, largest_wall, numerical_wall, tangent_walls_at_zero, walls_on_line,
    ScanBounds,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

pub const BOUND_SCALE_VAR: &str = "FANOWALLS_BOUND_SCALE";

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn class4(s: &str) -> Result<[Q; 4], String> {
    let v = parse_q_list(s).map_err(|e| e.to_string())?;
    v.try_into()
        .map_err(|v: Vec<Q>| format!("expected 4 components r,c,m,n, got {}", v.len()))
}

fn pair(s: &str) -> Result<(i64, i64), String> {
    let v = crate::rational::parse_i64_list(s).map_err(|e| e.to_string())?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(format!("expected 2 integers a,b, got {}", v.len())),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fanowalls",
    version,
    about = "Exact wall computations on prime Fano threefolds"
)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for the scans.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct CtxArgs {
    /// Fano index (1 or 2).
    #[arg(long, default_value_t = 2)]
    pub index: u8,
    /// Degree H^3.
    #[arg(long)]
    pub degree: i64,
}

impl CtxArgs {
    fn ctx(&self) -> Result<FanoContext, Error> {
        FanoContext::new(self.index, self.degree)
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PointArgs {
    /// t = alpha^2.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub t: Q,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub beta: Q,
}

#[derive(Args, Debug, Clone, Copy, Default)]
pub struct BoundArgs {
    /// Rank bound for the scans.
    #[arg(long)]
    pub max_rank: Option<i64>,
    /// ch1 bound for untwisted scans.
    #[arg(long)]
    pub max_c1: Option<i64>,
    /// Bound on the integer ch2 parameter.
    #[arg(long)]
    pub max_ch2: Option<i64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    /// Walls crossing the vertical line at --beta.
    Line,
    /// Walls of the rotated charge at a point with infinite rotated slope.
    Infinity,
    /// Walls touching beta = 0 from the left.
    Tangent,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chern character from Chern classes.
    Chern {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, allow_hyphen_values = true)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        c1: i64,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        c2: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        c3: Q,
    },
    /// Euler pairing chi(a, b).
    Euler {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        a: [Q; 4],
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        b: [Q; 4],
    },
    /// Hilbert polynomial n -> chi(E(n)).
    Hilbert {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
    },
    /// Classes with chi(u, u) = -r in the Kuznetsov lattice.
    Classes {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        up_to_sign: bool,
    },
    /// Numerical Serre operator.
    Serre {
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// Rotation orbit on the Y5 lattice.
    Rotate {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = pair, allow_hyphen_values = true)]
        class: (i64, i64),
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Solutions of x^2 - D'y^2 = N in a box.
    Pell {
        #[arg(long)]
        dprime: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 100)]
        bound: i64,
    },
    /// Splits of a lattice class with prescribed pairings.
    Pairing {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = pair, allow_hyphen_values = true)]
        total: (i64, i64),
        /// chi(A,B),chi(B,A); repeatable.
        #[arg(long, value_parser = pair, allow_hyphen_values = true, required = true)]
        target: Vec<(i64, i64)>,
        #[arg(long)]
        extra: Option<i64>,
    },
    /// Tilt slope.
    Slope {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[command(flatten)]
        pt: PointArgs,
    },
    /// Tilt central charge.
    Charge {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[command(flatten)]
        pt: PointArgs,
    },
    /// Discriminant Delta_H.
    Delta {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
    },
    /// BMS quadratic form value.
    Bms {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[command(flatten)]
        pt: PointArgs,
    },
    /// Numerical wall between two classes.
    WallBetween {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        a: [Q; 4],
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        b: [Q; 4],
    },
    /// Destabilizing decompositions.
    Walls {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[arg(long, value_enum, default_value_t = WallKind::Line)]
        kind: WallKind,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        beta: Option<Q>,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        t: Option<Q>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Largest semicircular wall meeting a beta window.
    LargestWall {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "-2")]
        beta_min: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        beta_max: Q,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Rank one Gieseker destabilizers of 2 - 2L on Y_d.
    Destab {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long)]
        bound: Option<i64>,
        /// Keep only hits surviving the tilt cross-check.
        #[arg(long)]
        surviving: bool,
    },
    /// SVG diagram of the walls of a class.
    PlotWalls {
        #[command(flatten)]
        ctx: CtxArgs,
        #[arg(long, value_parser = class4, allow_hyphen_values = true)]
        class: [Q; 4],
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "-2")]
        beta_min: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        beta_max: Q,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "1/4")]
        t_max: Q,
        /// Vertical line whose wall crossings are marked.
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        line: Option<Q>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<String, Failure>;

fn bound_scale() -> Result<i64, Failure> {
    match std::env::var(BOUND_SCALE_VAR) {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<i64>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(Failure::Usage(format!(
                "{BOUND_SCALE_VAR} must be a positive integer, got `{s}`"
            ))),
        },
    }
}

fn scan_bounds(ctx: FanoContext, scale: i64, b: &BoundArgs) -> ScanBounds {
    let d = ScanBounds::for_context(ctx).scaled(scale);
    ScanBounds {
        rank: b.max_rank.unwrap_or(d.rank),
        c1: b.max_c1.unwrap_or(d.c1),
        ch2: b.max_ch2.unwrap_or(d.ch2),
    }
}

fn ch(ctx: FanoContext, v: &[Q; 4]) -> ChernCharacter {
    ChernCharacter::new(ctx, v[0], v[1], v[2], v[3])
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values serialize")
}

/// Picks the JSON or the text rendering.
fn emit<T: Serialize>(json: bool, v: &T, text: impl FnOnce() -> String) -> String {
    if json {
        to_json(v)
    } else {
        text()
    }
}

fn matrix_text(m: &IntMatrix) -> String {
    format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (0..2).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

#[derive(Serialize)]
struct SerreOut {
    lattice: FanoContext,
    gram: IntMatrix,
    serre: IntMatrix,
    serre_cubed: IntMatrix,
}

fn lines<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    if xs.is_empty() {
        "none".to_string()
    } else {
        xs.iter().map(f).collect::<Vec<_>>().join("\n")
    }
}

fn candidate_text(w: &crate::walls::WallCandidate) -> String {
    let mut s = format!(
        "({}, {}, {})  sub = {}  quot = {}  locus: {}",
        w.params[0], w.params[1], w.params[2], w.sub, w.quot, w.locus
    );
    if let Some(t) = w.t {
        s.push_str(&format!("  t = {t}"));
    }
    if !w.flags.is_empty() {
        let flags: Vec<String> = w
            .flags
            .iter()
            .map(|f| to_json(f).trim_matches('"').to_string())
            .collect();
        s.push_str(&format!("  [{}]", flags.join(", ")));
    }
    s
}

fn execute(cli: Cli) -> Outcome {
    let json = cli.json;
    let scale = bound_scale()?;
    let out = match cli.command {
        Command::Chern {
            ctx,
            rank,
            c1,
            c2,
            c3,
        } => {
            let e = ChernCharacter::from_chern_classes(ctx.ctx()?, rank, c1, c2, c3);
            emit(json, &e, || e.to_string())
        }
        Command::Euler { ctx, a, b } => {
            let c = ctx.ctx()?;
            let x = ch(c, &a).euler(&ch(c, &b))?;
            emit(json, &x.to_string(), || x.to_string())
        }
        Command::Hilbert { ctx, class } => {
            let p = ch(ctx.ctx()?, &class).hilbert_polynomial();
            emit(json, &p, || {
                let [p0, p1, p2, p3] = p.coeffs;
                format!("{p0} + ({p1})n + ({p2})n^2 + ({p3})n^3")
            })
        }
        Command::Classes {
            ctx,
            r,
            bound,
            up_to_sign,
        } => {
            let c = ctx.ctx()?;
            let lat = KuLattice::new(c)?;
            let bound = bound.unwrap_or(10 * scale);
            let xs = lat.enumerate_classes(r, bound, up_to_sign);
            let tagged: Vec<LatticeClass> = xs
                .iter()
                .map(|u| LatticeClass {
                    lattice: c,
                    class: *u,
                })
                .collect();
            emit(json, &tagged, || lines(&xs, |u| u.to_string()))
        }
        Command::Serre { ctx } => {
            let lat = KuLattice::new(ctx.ctx()?)?;
            let s = lat.serre_matrix()?;
            let v = SerreOut {
                lattice: lat.ctx,
                gram: lat.gram,
                serre: s,
                serre_cubed: matmul(&s, &matmul(&s, &s)),
            };
            emit(json, &v, || {
                format!(
                    "S = {}\nS^3 = {}",
                    matrix_text(&v.serre),
                    matrix_text(&v.serre_cubed)
                )
            })
        }
        Command::Rotate { ctx, class, steps } => {
            let lat = KuLattice::new(ctx.ctx()?)?;
            let orbit = lat.rotation_orbit(KuClass::new(class.0, class.1), steps)?;
            emit(json, &orbit, || lines(&orbit, |u| u.to_string()))
        }
        Command::Pell { dprime, n, bound } => {
            let sols = pell_solve(dprime, n, bound)?;
            emit(json, &sols, || lines(&sols, |(x, y)| format!("({x}, {y})")))
        }
        Command::Pairing {
            ctx,
            total,
            target,
            extra,
        } => {
            let lat = KuLattice::new(ctx.ctx()?)?;
            let extra = extra.unwrap_or(DEFAULT_PAIRING_EXTRA * scale);
            let sols = lat.pairing_system_solve(KuClass::new(total.0, total.1), &target, extra);
            emit(json, &sols, || {
                lines(&sols, |s| {
                    format!(
                        "A = {}  B = {}  chi = ({}, {})",
                        s.sub, s.quot, s.target.0, s.target.1
                    )
                })
            })
        }
        Command::Slope { ctx, class, pt } => {
            let p = TiltPoint::new(pt.t, pt.beta)?;
            let s = slope(&ch(ctx.ctx()?, &class), &p)?;
            emit(json, &s, || s.to_string())
        }
        Command::Charge { ctx, class, pt } => {
            let p = TiltPoint::new(pt.t, pt.beta)?;
            let z = central_charge(&ch(ctx.ctx()?, &class), &p);
            emit(json, &z, || z.to_string())
        }
        Command::Delta { ctx, class } => {
            let x = discriminant(&ch(ctx.ctx()?, &class));
            emit(json, &x.to_string(), || x.to_string())
        }
        Command::Bms { ctx, class, pt } => {
            let p = TiltPoint::new(pt.t, pt.beta)?;
            let x = bms_inequality(&ch(ctx.ctx()?, &class), &p);
            emit(json, &x.to_string(), || x.to_string())
        }
        Command::WallBetween { ctx, a, b } => {
            let c = ctx.ctx()?;
            let w = numerical_wall(&ch(c, &a), &ch(c, &b))?;
            emit(json, &w, || w.to_string())
        }
        Command::Walls {
            ctx,
            class,
            kind,
            beta,
            t,
            bounds,
        } => {
            let c = ctx.ctx()?;
            let total = ch(c, &class);
            let sb = scan_bounds(c, scale, &bounds);
            match kind {
                WallKind::Line => {
                    let beta =
                        beta.ok_or_else(|| Failure::Usage("--kind line needs --beta".into()))?;
                    let ws = with_workers(cli.workers, || walls_on_line(&total, beta, &sb))?;
                    emit(json, &ws, || lines(&ws, candidate_text))
                }
                WallKind::Infinity => {
                    let (Some(beta), Some(t)) = (beta, t) else {
                        return Err(Failure::Usage(
                            "--kind infinity needs --t and --beta".into(),
                        ));
                    };
                    let p = TiltPoint::new(t, beta)?;
                    let scan =
                        with_workers(cli.workers, || infinity_slope_candidates(&total, &p, &sb))?;
                    emit(json, &scan, || {
                        let mut s = lines(&scan.candidates, candidate_text);
                        for m in &scan.near_misses {
                            s.push_str(&format!(
                                "\nnear miss ({}, {}, {}): endpoint rule fails on {}{}",
                                m.params[0],
                                m.params[1],
                                m.params[2],
                                to_json(&m.failing).trim_matches('"'),
                                if m.integral { "" } else { " (not integral)" }
                            ));
                        }
                        s
                    })
                }
                WallKind::Tangent => {
                    let ws = with_workers(cli.workers, || tangent_walls_at_zero(&total, &sb))?;
                    emit(json, &ws, || lines(&ws, candidate_text))
                }
            }
        }
        Command::LargestWall {
            ctx,
            class,
            beta_min,
            beta_max,
            bounds,
        } => {
            let c = ctx.ctx()?;
            let sb = scan_bounds(c, scale, &bounds);
            let w = with_workers(cli.workers, || {
                largest_wall(&ch(c, &class), beta_min, beta_max, &sb)
            })?;
            emit(json, &w, || {
                w.as_ref()
                    .map(candidate_text)
                    .unwrap_or_else(|| "none".into())
            })
        }
        Command::Destab {
            ctx,
            bound,
            surviving,
        } => {
            let c = ctx.ctx()?;
            let bound = bound.unwrap_or(4 * scale);
            let hits = with_workers(cli.workers, || {
                if surviving {
                    surviving_destabilizers(c, bound)
                } else {
                    destabilizer_cases(c, bound)
                }
            })?;
            emit(json, &hits, || {
                lines(&hits, |h| {
                    format!("({}, {}, {})  case {}  G = {}", h.a, h.b, h.c, h.case, h.ch)
                })
            })
        }
        Command::PlotWalls {
            ctx,
            class,
            beta_min,
            beta_max,
            t_max,
            line,
            bounds,
        } => {
            let c = ctx.ctx()?;
            let window = PlotWindow::new(beta_min, beta_max, t_max)?;
            let total = ch(c, &class);
            let sb = scan_bounds(c, scale, &bounds);
            let (big, hits) = with_workers(cli.workers, || {
                let big = largest_wall(&total, beta_min, beta_max, &sb)?;
                let hits = line.map(|b| walls_on_line(&total, b, &sb)).transpose()?;
                Ok::<_, Error>((big, hits))
            })?;
            let big: Vec<_> = big.into_iter().collect();
            let items = items_from_candidates(&big, line.zip(hits.as_deref()));
            let svg = render_svg(&window, &items);
            return Ok(svg.trim_end().to_string());
        }
    };
    Ok(out)
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli) {
        Ok(s) => {
            let _ = writeln!(out, "{s}");
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}
