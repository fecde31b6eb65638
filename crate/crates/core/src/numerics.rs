//! Numerical checks of the explicit immersions and geometric tb / rot oracles.
//!
//! Points of `C² = R⁴` are stored as `[x1, y1, x2, y2]` with `z_k = x_k + i y_k`;
//! the symplectic form is `ω = dx1∧dy1 + dx2∧dy2` and the contact form on `S³`
//! is `λ = ½ Σ (x_k dy_k - y_k dx_k)`.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::front::{fronts, EventKind, FrontDiagram, FrontError, Orientation};

pub type Point4 = [f64; 4];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("grid leaves the domain of {family}: {reason}")]
    GridOutsideDomain { family: String, reason: String },
    #[error("A = {0} is outside (0, √2)")]
    AOutOfRange(f64),
    #[error("no generic projection found")]
    DegenerateProjection,
    #[error("curve samples coincide or intersect")]
    SelfIntersectingSamples,
    #[error("tangent vanishes or leaves the contact plane")]
    TangentDegenerate,
    #[error("push-off {0} is too large for this curve")]
    PushOffTooLarge(f64),
    #[error("oracle did not stabilize up to {0} samples")]
    Unstable(usize),
    #[error(transparent)]
    Front(#[from] FrontError),
}

/// Outcome of one residual check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub max_residual: f64,
    pub grid: String,
    pub tolerance: f64,
    pub pass: bool,
    /// Named auxiliary quantities.
    pub details: Vec<(String, f64)>,
}

impl VerificationReport {
    fn new(check: &str, max_residual: f64, grid: String, tolerance: f64) -> Self {
        VerificationReport {
            check: check.to_string(),
            max_residual,
            grid,
            tolerance,
            pass: max_residual <= tolerance,
            details: Vec::new(),
        }
    }
}

fn from_complex(z1: C64, z2: C64) -> Point4 {
    [z1.re, z1.im, z2.re, z2.im]
}

fn sub(a: Point4, b: Point4) -> Point4 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

fn scale(a: Point4, k: f64) -> Point4 {
    a.map(|v| v * k)
}

fn dot(a: Point4, b: Point4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: Point4) -> f64 {
    dot(a, a).sqrt()
}

/// Standard symplectic form.
pub fn omega(u: Point4, v: Point4) -> f64 {
    u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]
}

/// Radial contact form `λ` at `p` applied to `v`.
pub fn lambda_rad(p: Point4, v: Point4) -> f64 {
    0.5 * (p[0] * v[1] - p[1] * v[0] + p[2] * v[3] - p[3] * v[2])
}

/// Boundary parameter of the Möbius strip: `|Γ_A(s, ±T_A)| = 1`.
pub fn t_a(a: f64) -> f64 {
    ((2.0 / 3.0) * (1.0 / (a * a) - 0.5)).sqrt()
}

pub fn gamma_a(a: f64, s: f64, t: f64) -> Point4 {
    let z1 = C64::new(0.0, -1.0 / SQRT_2) * (1.0 + t * t).sqrt() * C64::from_polar(1.0, 2.0 * s);
    let z2 = C64::from_polar(t, -s);
    scale(from_complex(z1, z2), a)
}

/// The cone over `L`, the `A → 0` limit of the rescaled Möbius strips.
pub fn g_cone(s: f64, t: f64) -> Point4 {
    let z1 = C64::new(0.0, -1.0 / SQRT_2) * t.abs() * C64::from_polar(1.0, 2.0 * s);
    let z2 = C64::from_polar(t, -s);
    from_complex(z1, z2)
}

/// Open Whitney umbrella `(q1, q2, p1, p2) = (t², u, tu, 2t³/3)`, stored as `[q1, p1, q2, p2]`.
pub fn f_umbrella(t: f64, u: f64) -> Point4 {
    [t * t, t * u, u, 2.0 * t * t * t / 3.0]
}

/// Exact partials `(∂_t F, ∂_u F)` in the same coordinate order.
pub fn f_umbrella_jacobian(t: f64, u: f64) -> (Point4, Point4) {
    ([2.0 * t, u, 0.0, 2.0 * t * t], [0.0, t, 1.0, 0.0])
}

/// Legendrian unknot with tb -2 on the unit sphere.
pub fn l_curve(s: f64) -> Point4 {
    let z1 = C64::new(0.0, -1.0 / 3f64.sqrt()) * C64::from_polar(1.0, 2.0 * s);
    let z2 = C64::from_polar((2.0f64 / 3.0).sqrt(), -s);
    from_complex(z1, z2)
}

pub fn l_curve_derivative(s: f64) -> Point4 {
    let z1 = C64::new(0.0, -1.0 / 3f64.sqrt()) * C64::new(0.0, 2.0) * C64::from_polar(1.0, 2.0 * s);
    let z2 = C64::new(0.0, -1.0) * C64::from_polar((2.0f64 / 3.0).sqrt(), -s);
    from_complex(z1, z2)
}

/// The trivial Legendrian as a great circle in the real plane.
pub fn great_circle(s: f64) -> Point4 {
    [s.cos(), 0.0, s.sin(), 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    GammaA { a: f64 },
    G,
    F,
    LCurve,
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::GammaA { a } => format!("GammaA(A={a})"),
            Family::G => "G".into(),
            Family::F => "F".into(),
            Family::LCurve => "L".into(),
        }
    }

    pub fn surface(&self, s: f64, t: f64) -> Option<Point4> {
        match *self {
            Family::GammaA { a } => Some(gamma_a(a, s, t)),
            Family::G => Some(g_cone(s, t)),
            Family::F => Some(f_umbrella(s, t)),
            Family::LCurve => None,
        }
    }
}

/// Uniform tensor grid with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Self {
        Grid { u, v, nu, nv }
    }

    fn axis(range: (f64, f64), n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| if n == 1 { range.0 } else { range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64 })
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        Grid::axis(self.u, self.nu).flat_map(move |u| Grid::axis(self.v, self.nv).map(move |v| (u, v)))
    }

    pub fn describe(&self) -> String {
        format!("{}x{} over [{}, {}] x [{}, {}]", self.nu, self.nv, self.u.0, self.u.1, self.v.0, self.v.1)
    }
}

/// Default grid for each surface family.
pub fn default_grid(family: &Family, n: usize) -> Grid {
    match *family {
        Family::GammaA { a } => Grid::new((0.0, PI), (-t_a(a), t_a(a)), n, n),
        Family::G => Grid::new((0.0, PI), (0.1, 1.0), n, n),
        Family::F | Family::LCurve => Grid::new((-1.0, 1.0), (-1.0, 1.0), n, n),
    }
}

fn check_a(a: f64) -> Result<(), NumericsError> {
    if a > 0.0 && a < SQRT_2 {
        Ok(())
    } else {
        Err(NumericsError::AOutOfRange(a))
    }
}

/// Max of `|ω(∂_u f, ∂_v f)|` over the grid, with central differences of width `step`.
pub fn pullback_residual(family: &Family, grid: &Grid, step: f64) -> Result<VerificationReport, NumericsError> {
    let outside = |reason: &str| NumericsError::GridOutsideDomain { family: family.name(), reason: reason.into() };
    if step <= 0.0 {
        return Err(outside("step must be positive"));
    }
    match *family {
        Family::GammaA { a } => {
            check_a(a)?;
            let lim = t_a(a) * (1.0 + 1e-12);
            if grid.v.0.abs() > lim || grid.v.1.abs() > lim {
                return Err(outside("|T| exceeds T_A"));
            }
        }
        Family::G => {
            if grid.v.0.min(grid.v.1) <= step && grid.v.0.max(grid.v.1) >= -step {
                return Err(outside("T range meets the apex T = 0"));
            }
        }
        Family::F => {}
        Family::LCurve => return Err(outside("L is a curve, not a surface")),
    }
    let f = |u: f64, v: f64| family.surface(u, v).expect("surface family");
    let mut worst = 0.0f64;
    for (u, v) in grid.points() {
        let du = scale(sub(f(u + step, v), f(u - step, v)), 0.5 / step);
        let dv = scale(sub(f(u, v + step), f(u, v - step)), 0.5 / step);
        worst = worst.max(omega(du, dv).abs());
    }
    Ok(VerificationReport::new(&format!("pullback {}", family.name()), worst, grid.describe(), 1e-6))
}

/// Deck identity, unit-sphere boundary and boundary transversality of `Γ_A`.
pub fn mobius_identities(a: f64, n: usize) -> Result<VerificationReport, NumericsError> {
    check_a(a)?;
    let ta = t_a(a);
    let grid = Grid::new((0.0, TAU), (-ta, ta), n, n);
    let mut deck = 0.0f64;
    for (s, t) in grid.points() {
        deck = deck.max(norm(sub(gamma_a(a, s + PI, -t), gamma_a(a, s, t))));
    }
    let mut modulus = 0.0f64;
    let mut radial = f64::INFINITY;
    let mut contact = f64::INFINITY;
    let h = 1e-6;
    for s in Grid::axis((0.0, TAU), n) {
        for t in [ta, -ta] {
            let p = gamma_a(a, s, t);
            modulus = modulus.max((norm(p) - 1.0).abs());
            let r2 = |t: f64| dot(gamma_a(a, s, t), gamma_a(a, s, t));
            let d = (r2(t + h) - r2(t - h)) / (2.0 * h);
            radial = radial.min(d.abs());
            let ds = scale(sub(gamma_a(a, s + h, t), gamma_a(a, s - h, t)), 0.5 / h);
            contact = contact.min(lambda_rad(p, ds).abs());
        }
    }
    let transverse = radial > 1e-6 && contact > 1e-6;
    let mut report = VerificationReport::new("mobius identities", deck.max(modulus), grid.describe(), 1e-12);
    report.pass &= transverse;
    report.details = vec![
        ("deck".into(), deck),
        ("boundary_modulus".into(), modulus),
        ("T_A".into(), ta),
        ("min_radial_derivative".into(), radial),
        ("expected_radial_derivative".into(), 3.0 * a * a * ta),
        ("min_contact_form_on_boundary".into(), contact),
    ];
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub a_values: Vec<f64>,
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Largest deviation of the sampled distance at `T = 1` from `(√(A²+1) - 1)/√2`.
    pub closed_form_error: f64,
    pub pass: bool,
}

/// Sup-distance between the rescaled strips `Γ_A(s, T/A)` and the cone `G(s, T)`.
pub fn convergence_to_cone(a_values: &[f64], grid: &Grid) -> Result<ConvergenceReport, NumericsError> {
    if grid.v.0.min(grid.v.1) <= 0.0 && grid.v.0.max(grid.v.1) >= 0.0 {
        return Err(NumericsError::GridOutsideDomain { family: "G".into(), reason: "grid meets T = 0".into() });
    }
    let mut distances = Vec::new();
    let mut closed_form_error = 0.0f64;
    for &a in a_values {
        if a <= 0.0 {
            return Err(NumericsError::AOutOfRange(a));
        }
        let mut d = 0.0f64;
        for (s, t) in grid.points() {
            d = d.max(norm(sub(gamma_a(a, s, t / a), g_cone(s, t))));
        }
        for s in Grid::axis(grid.u, grid.nu) {
            let sampled = norm(sub(gamma_a(a, s, 1.0 / a), g_cone(s, 1.0)));
            let exact = ((a * a + 1.0).sqrt() - 1.0) / SQRT_2;
            closed_form_error = closed_form_error.max((sampled - exact).abs());
        }
        distances.push(d);
    }
    let ratios: Vec<f64> = distances.windows(2).map(|w| w[1] / w[0]).collect();
    let monotone = distances.windows(2).all(|w| w[1] < w[0]);
    let pass = monotone && ratios.iter().all(|r| (0.2..=0.3).contains(r)) && closed_form_error <= 1e-12;
    Ok(ConvergenceReport { a_values: a_values.to_vec(), distances, ratios, closed_form_error, pass })
}

/// `X = (1/5)(2q1, 2q2, 3p1, 3p2)` in `[q1, p1, q2, p2]` order.
pub fn liouville_field(p: Point4) -> Point4 {
    [2.0 * p[0] / 5.0, 3.0 * p[1] / 5.0, 2.0 * p[2] / 5.0, 3.0 * p[3] / 5.0]
}

/// Max of `|DF·(t, 2u) - 5 X(F(t, u))|` using exact derivatives of `F`.
pub fn liouville_identity(grid: &Grid) -> VerificationReport {
    let mut worst = 0.0f64;
    for (t, u) in grid.points() {
        let (ft, fu) = f_umbrella_jacobian(t, u);
        let lhs: Point4 = std::array::from_fn(|k| t * ft[k] + 2.0 * u * fu[k]);
        let rhs = scale(liouville_field(f_umbrella(t, u)), 5.0);
        worst = worst.max(norm(sub(lhs, rhs)));
    }
    VerificationReport::new("liouville identity", worst, grid.describe(), 1e-12)
}

/// A closed curve in `S³` parametrized over `[0, 2π)`.
pub trait ClosedCurve {
    fn point(&self, s: f64) -> Point4;

    fn derivative(&self, s: f64) -> Point4 {
        let h = 1e-5;
        scale(sub(self.point(s + h), self.point(s - h)), 0.5 / h)
    }
}

pub struct LCurve;

impl ClosedCurve for LCurve {
    fn point(&self, s: f64) -> Point4 {
        l_curve(s)
    }

    fn derivative(&self, s: f64) -> Point4 {
        l_curve_derivative(s)
    }
}

pub struct GreatCircle;

impl ClosedCurve for GreatCircle {
    fn point(&self, s: f64) -> Point4 {
        great_circle(s)
    }
}

/// The curve traversed backwards.
pub struct Reversed<'a>(pub &'a dyn ClosedCurve);

impl ClosedCurve for Reversed<'_> {
    fn point(&self, s: f64) -> Point4 {
        self.0.point(TAU - s)
    }
}

/// The curve moved by `amplitude · sin(s)` along the Reeb direction `i·p`.
pub struct ReebWobble<'a> {
    pub curve: &'a dyn ClosedCurve,
    pub amplitude: f64,
}

impl ClosedCurve for ReebWobble<'_> {
    fn point(&self, s: f64) -> Point4 {
        let p = self.curve.point(s);
        let ip = [-p[1], p[0], -p[3], p[2]];
        std::array::from_fn(|k| p[k] + self.amplitude * s.sin() * ip[k])
    }
}

/// Checks `|γ| = 1` and `λ(γ') = 0` at `n` samples.
pub fn legendrian_residual(curve: &dyn ClosedCurve, n: usize) -> VerificationReport {
    let mut modulus = 0.0f64;
    let mut contact = 0.0f64;
    for k in 0..n {
        let s = TAU * k as f64 / n as f64;
        let p = curve.point(s);
        modulus = modulus.max((norm(p) - 1.0).abs());
        contact = contact.max(lambda_rad(p, curve.derivative(s)).abs());
    }
    let mut r = VerificationReport::new("legendrian", modulus.max(contact), format!("{n} samples"), 1e-6);
    r.details = vec![("modulus".into(), modulus), ("contact".into(), contact)];
    r
}

/// Rows `s, re z1, im z1, re z2, im z2`.
pub fn sample_csv(curve: &dyn ClosedCurve, n: usize) -> String {
    let mut out = String::from("s,re_z1,im_z1,re_z2,im_z2\n");
    for k in 0..n {
        let s = TAU * k as f64 / n as f64;
        let p = curve.point(s);
        out.push_str(&format!("{s:.12},{:.12},{:.12},{:.12},{:.12}\n", p[0], p[1], p[2], p[3]));
    }
    out
}

// ---------------------------------------------------------------------------
// Linking numbers

type P3 = [f64; 3];

fn det4(m: [Point4; 4]) -> f64 {
    let minor = |r: usize, c: usize| -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
        let e = |i: usize, j: usize| m[rows[i]][cols[j]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    (0..4).map(|c| if c % 2 == 0 { 1.0 } else { -1.0 } * m[0][c] * minor(0, c)).sum()
}

/// Orientation-preserving stereographic projection `S³ \ {q} → R³`.
struct Stereographic {
    q: Point4,
    basis: [Point4; 3],
}

impl Stereographic {
    fn new(q: Point4) -> Self {
        let mut basis: Vec<Point4> = Vec::new();
        for k in 0..4 {
            let mut v = [0.0; 4];
            v[k] = 1.0;
            let mut w = sub(v, scale(q, dot(v, q)));
            for b in &basis {
                w = sub(w, scale(*b, dot(w, *b)));
            }
            let n = norm(w);
            if n > 1e-6 && basis.len() < 3 {
                basis.push(scale(w, 1.0 / n));
            }
        }
        let mut basis = [basis[0], basis[1], basis[2]];
        // At the antipode -q the outward normal is -q, and the differential sends
        // basis vectors to coordinate axes; (-q, b1, b2, b3) must be positive.
        if det4([scale(q, -1.0), basis[0], basis[1], basis[2]]) < 0.0 {
            basis[2] = scale(basis[2], -1.0);
        }
        Stereographic { q, basis }
    }

    fn project(&self, p: Point4) -> P3 {
        let d = 1.0 - dot(p, self.q);
        [dot(p, self.basis[0]) / d, dot(p, self.basis[1]) / d, dot(p, self.basis[2]) / d]
    }
}

fn pole_candidates() -> Vec<Point4> {
    let mut out = Vec::new();
    for k in 0..4 {
        for sign in [1.0, -1.0] {
            let mut v = [0.0; 4];
            v[k] = sign;
            out.push(v);
        }
    }
    for mask in 0..16u32 {
        out.push(std::array::from_fn(|k| if mask & (1 << k) == 0 { 0.5 } else { -0.5 }));
    }
    out
}

fn best_pole(samples: &[Point4]) -> Point4 {
    let stride = (samples.len() / 512).max(1);
    pole_candidates()
        .into_iter()
        .map(|q| {
            let d = samples.iter().step_by(stride).map(|p| norm(sub(*p, q))).fold(f64::INFINITY, f64::min);
            (d, q)
        })
        .fold((f64::NEG_INFINITY, [0.0; 4]), |best, cur| if cur.0 > best.0 { cur } else { best })
        .1
}

fn rotation(a: f64, b: f64, c: f64) -> [P3; 3] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sc, cc) = c.sin_cos();
    [
        [ca * cc - sa * cb * sc, -ca * sc - sa * cb * cc, sa * sb],
        [sa * cc + ca * cb * sc, -sa * sc + ca * cb * cc, -ca * sb],
        [sb * sc, sb * cc, cb],
    ]
}

fn apply3(m: &[P3; 3], p: P3) -> P3 {
    std::array::from_fn(|i| m[i][0] * p[0] + m[i][1] * p[1] + m[i][2] * p[2])
}

const VIEWS: [(f64, f64, f64); 6] =
    [(0.31, 0.73, 1.17), (1.37, 0.41, 2.23), (2.11, 1.73, 0.53), (0.83, 2.41, 1.91), (2.71, 1.09, 0.29), (0.13, 1.37, 2.83)];

/// Linking number of two closed polygons in `R³`, by signed crossings of the
/// first over the second in the projection along `+z` after `view`.
fn crossing_linking(a: &[P3], b: &[P3], view: &[P3; 3]) -> Result<i64, NumericsError> {
    let a: Vec<P3> = a.iter().map(|p| apply3(view, *p)).collect();
    let b: Vec<P3> = b.iter().map(|p| apply3(view, *p)).collect();
    let seg_box = |p: P3, q: P3| (p[0].min(q[0]), p[0].max(q[0]), p[1].min(q[1]), p[1].max(q[1]));
    let bb: Vec<_> = (0..b.len()).map(|j| seg_box(b[j], b[(j + 1) % b.len()])).collect();
    let mut twice = 0i64;
    for i in 0..a.len() {
        let (p0, p1) = (a[i], a[(i + 1) % a.len()]);
        let ba = seg_box(p0, p1);
        for j in 0..b.len() {
            let bj = bb[j];
            if ba.1 < bj.0 || bj.1 < ba.0 || ba.3 < bj.2 || bj.3 < ba.2 {
                continue;
            }
            let (q0, q1) = (b[j], b[(j + 1) % b.len()]);
            let d1 = [p1[0] - p0[0], p1[1] - p0[1]];
            let d2 = [q1[0] - q0[0], q1[1] - q0[1]];
            let den = d1[0] * d2[1] - d1[1] * d2[0];
            let scale_ = (d1[0].hypot(d1[1])) * (d2[0].hypot(d2[1]));
            let r = [q0[0] - p0[0], q0[1] - p0[1]];
            if den.abs() <= 1e-12 * scale_ {
                if (r[0] * d1[1] - r[1] * d1[0]).abs() <= 1e-12 * scale_.max(1e-300) {
                    return Err(NumericsError::DegenerateProjection);
                }
                continue;
            }
            let s = (r[0] * d2[1] - r[1] * d2[0]) / den;
            let t = (r[0] * d1[1] - r[1] * d1[0]) / den;
            let eps = 1e-9;
            if s < -eps || s > 1.0 + eps || t < -eps || t > 1.0 + eps {
                continue;
            }
            if s.abs() < eps || (s - 1.0).abs() < eps || t.abs() < eps || (t - 1.0).abs() < eps {
                return Err(NumericsError::DegenerateProjection);
            }
            let za = p0[2] + s * (p1[2] - p0[2]);
            let zb = q0[2] + t * (q1[2] - q0[2]);
            if (za - zb).abs() < 1e-12 {
                return Err(NumericsError::DegenerateProjection);
            }
            // Positive when the over strand turns counterclockwise onto the under strand.
            let (over, under) = if za > zb { (d1, d2) } else { (d2, d1) };
            let cross = over[0] * under[1] - over[1] * under[0];
            twice += if cross > 0.0 { 1 } else { -1 };
        }
    }
    if twice % 2 != 0 {
        return Err(NumericsError::DegenerateProjection);
    }
    Ok(twice / 2)
}

/// Linking number of two disjoint closed polygons on `S³`.
pub fn linking_number_s3(a: &[Point4], b: &[Point4]) -> Result<i64, NumericsError> {
    let all: Vec<Point4> = a.iter().chain(b).copied().collect();
    let proj = Stereographic::new(best_pole(&all));
    let a3: Vec<P3> = a.iter().map(|p| proj.project(*p)).collect();
    let b3: Vec<P3> = b.iter().map(|p| proj.project(*p)).collect();
    linking_r3(&a3, &b3)
}

/// Linking number of two disjoint closed polygons in `R³`.
pub fn linking_r3(a: &[P3], b: &[P3]) -> Result<i64, NumericsError> {
    for (a0, b0, c0) in VIEWS {
        match crossing_linking(a, b, &rotation(a0, b0, c0)) {
            Ok(v) => return Ok(v),
            Err(NumericsError::DegenerateProjection) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(NumericsError::DegenerateProjection)
}

fn samples(curve: &dyn ClosedCurve, n: usize) -> Result<Vec<Point4>, NumericsError> {
    let pts: Vec<Point4> = (0..n).map(|k| curve.point(TAU * k as f64 / n as f64)).collect();
    for k in 0..n {
        if norm(sub(pts[k], pts[(k + 1) % n])) < 1e-14 {
            return Err(NumericsError::SelfIntersectingSamples);
        }
    }
    Ok(pts)
}

/// Reeb push-off `e^{iε}·p`.
fn push_off(p: Point4, eps: f64) -> Point4 {
    let r = C64::from_polar(1.0, eps);
    let z1 = C64::new(p[0], p[1]) * r;
    let z2 = C64::new(p[2], p[3]) * r;
    from_complex(z1, z2)
}

const START_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 1 << 15;

/// Doubles the resolution until three consecutive values agree.
fn stabilized(mut f: impl FnMut(usize) -> Result<i64, NumericsError>) -> Result<i64, NumericsError> {
    let mut history: Vec<i64> = Vec::new();
    let mut n = START_SAMPLES;
    while n <= MAX_SAMPLES {
        match f(n) {
            Ok(v) => history.push(v),
            Err(NumericsError::TangentDegenerate | NumericsError::DegenerateProjection) => history.clear(),
            Err(e) => return Err(e),
        }
        if history.len() >= 3 && history[history.len() - 3..].iter().all(|v| *v == history[history.len() - 1]) {
            return Ok(history[history.len() - 1]);
        }
        n *= 2;
    }
    Err(NumericsError::Unstable(MAX_SAMPLES))
}

/// Thurston–Bennequin number as the linking of the curve with its Reeb push-off.
///
/// The push-off is halved until two consecutive sizes give the same integer.
pub fn tb_oracle(curve: &dyn ClosedCurve, eps: f64) -> Result<i64, NumericsError> {
    let mut e = eps;
    let mut prev = stabilized(|n| tb_at(curve, e, n))?;
    for _ in 0..MAX_HALVINGS {
        e /= 2.0;
        let v = stabilized(|n| tb_at(curve, e, n))?;
        if v == prev {
            return Ok(v);
        }
        prev = v;
    }
    Err(NumericsError::PushOffTooLarge(eps))
}

const MAX_HALVINGS: usize = 6;

/// Reeb push-off size used unless a caller picks another.
pub const DEFAULT_PUSH_OFF: f64 = 1e-2;

pub fn tb_at(curve: &dyn ClosedCurve, eps: f64, n: usize) -> Result<i64, NumericsError> {
    let a = samples(curve, n)?;
    let b: Vec<Point4> = a.iter().map(|p| push_off(*p, eps)).collect();
    linking_number_s3(&a, &b)
}

fn frame_angle(curve: &dyn ClosedCurve, s: f64) -> Result<f64, NumericsError> {
    let p = curve.point(s);
    let tangent = curve.derivative(s);
    let v1 = [-p[2], p[3], p[0], -p[1]];
    let v2 = [-v1[1], v1[0], -v1[3], v1[2]];
    let (a, b) = (dot(tangent, v1), dot(tangent, v2));
    let t = norm(tangent);
    if t == 0.0 || a.hypot(b) < 1e-3 * t {
        return Err(NumericsError::TangentDegenerate);
    }
    Ok(b.atan2(a))
}

fn wrap(mut d: f64) -> f64 {
    while d > PI {
        d -= TAU;
    }
    while d < -PI {
        d += TAU;
    }
    d
}

/// Angle increment from `s0` to `s1`, bisecting until each step turns less than π/4.
fn angle_increment(curve: &dyn ClosedCurve, s0: f64, a0: f64, s1: f64, a1: f64, depth: u32) -> Result<f64, NumericsError> {
    let d = wrap(a1 - a0);
    if d.abs() < PI / 4.0 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(NumericsError::TangentDegenerate);
    }
    let sm = 0.5 * (s0 + s1);
    let am = frame_angle(curve, sm)?;
    Ok(angle_increment(curve, s0, a0, sm, am, depth - 1)? + angle_increment(curve, sm, am, s1, a1, depth - 1)?)
}

/// Winding of the tangent in the frame `(v, i·v)`, `v = (-w̄, z̄)`, before sign calibration.
pub fn rot_raw_at(curve: &dyn ClosedCurve, n: usize) -> Result<i64, NumericsError> {
    let params: Vec<f64> = (0..=n).map(|k| TAU * k as f64 / n as f64).collect();
    let angles = params.iter().map(|s| frame_angle(curve, *s)).collect::<Result<Vec<_>, _>>()?;
    let mut total = 0.0;
    for k in 0..n {
        total += angle_increment(curve, params[k], angles[k], params[k + 1], angles[k + 1], 24)?;
    }
    Ok((total / TAU).round() as i64)
}

/// Sign relating the raw frame winding to the front-formula rotation number,
/// fixed once on the front-derived `L_u` curve.
pub fn rot_calibration() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let lu = fronts::stabilized_unknot();
        let curve = FrontCurve::new(&lu).expect("L_u is a knot");
        let raw = stabilized(|n| rot_raw_at(&curve, n)).expect("L_u curve is regular");
        let formula = lu.invariants().rot[0];
        assert!(raw.abs() == 1, "L_u winding must be ±1");
        raw * formula
    })
}

/// Rotation number of a closed Legendrian in `S³`.
pub fn rot_oracle(curve: &dyn ClosedCurve) -> Result<i64, NumericsError> {
    let raw = stabilized(|n| rot_raw_at(curve, n))?;
    Ok(raw * rot_calibration())
}

// ---------------------------------------------------------------------------
// Fronts realized as Legendrian curves in S³

/// Odd cusp profile: `g(±1) = ±½`, `g'` and `g''` vanish at `±1`, `g ~ σ³` at 0.
fn cusp_profile(s: f64) -> f64 {
    (35.0 * s.powi(3) - 42.0 * s.powi(5) + 15.0 * s.powi(7)) / 16.0
}

/// `g'(σ) / (2σ)`.
fn cusp_slope(s: f64) -> f64 {
    105.0 * s * (1.0 - s * s).powi(2) / 32.0
}

fn smootherstep(t: f64) -> (f64, f64) {
    (t * t * t * (t * (6.0 * t - 15.0) + 10.0), 30.0 * t * t * (t - 1.0) * (t - 1.0))
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `z` moves from `z0` to `z1` over `[x0, x0 + w]`.
    Shift { x0: f64, z0: f64, z1: f64 },
    /// Branch leaving a left cusp tip at `x0` (`sign` +1 upper, -1 lower).
    Open { x0: f64, zc: f64, sign: f64 },
    /// Branch entering a right cusp tip at `x0`.
    Close { x0: f64, zc: f64, sign: f64 },
}

/// Smooth Legendrian realization of a knot front, mapped into `S³` by the
/// Cayley transform of the Heisenberg model.
pub struct FrontCurve {
    pieces: Vec<(Piece, bool)>,
    w: f64,
    h: f64,
    x_mid: f64,
    z_mid: f64,
}

impl FrontCurve {
    pub fn new(f: &FrontDiagram) -> Result<Self, NumericsError> {
        if f.component_count() != 1 {
            return Err(FrontError::MultiComponentInput { components: f.component_count() }.into());
        }
        let events = f.events();
        let w = 1.0 / (2.0 * events.len() as f64);
        let h = w;
        let states = f.slice_arcs();
        let level = |k: usize, arc: usize| states[k].iter().position(|a| *a == arc).expect("arc alive") as f64 + 1.0;
        let arcs = f.arcs();
        let path = |arc: usize| -> Vec<Piece> {
            let a = &arcs[arc];
            let mut out = Vec::new();
            let (il, ir) = (a.left_event, a.right_event);
            let pl = events[il].position as f64;
            let sign_l = if f.event_arcs()[il].upper == arc { 1.0 } else { -1.0 };
            out.push(Piece::Open { x0: (2 * il) as f64 * w + w, zc: -(pl + 0.5) * h, sign: sign_l });
            for k in il + 1..ir {
                let (q0, q1) = (level(k, arc), level(k + 1, arc));
                let x0 = (2 * k) as f64 * w;
                let (first, second) = match events[k].kind {
                    EventKind::RightCusp => ((q0, q0), (q0, q1)),
                    _ => ((q0, q1), (q1, q1)),
                };
                out.push(Piece::Shift { x0, z0: -first.0 * h, z1: -first.1 * h });
                out.push(Piece::Shift { x0: x0 + w, z0: -second.0 * h, z1: -second.1 * h });
            }
            let pr = events[ir].position as f64;
            let sign_r = if f.event_arcs()[ir].upper == arc { 1.0 } else { -1.0 };
            out.push(Piece::Close { x0: (2 * ir) as f64 * w + w, zc: -(pr + 0.5) * h, sign: sign_r });
            out
        };
        let mut order: Vec<(usize, i64)> = f.component_arcs(0).iter().map(|a| (*a, arcs[*a].default_dir)).collect();
        if f.orientations()[0] == Orientation::Negative {
            order.reverse();
            for o in &mut order {
                o.1 = -o.1;
            }
        }
        let mut pieces = Vec::new();
        for (arc, dir) in order {
            let mut p: Vec<(Piece, bool)> = path(arc).into_iter().map(|x| (x, false)).collect();
            if dir < 0 {
                p.reverse();
                for x in &mut p {
                    x.1 = true;
                }
            }
            pieces.extend(p);
        }
        let x_mid = events.len() as f64 * w;
        let z_mid = -(f.max_strands() as f64 + 1.0) * h / 2.0;
        Ok(FrontCurve { pieces, w, h, x_mid, z_mid })
    }

    /// Point `(x, y, z)` of the Legendrian in `(R³, dz - y dx)`.
    pub fn point_r3(&self, s: f64) -> P3 {
        let m = self.pieces.len() as f64;
        let u = (s.rem_euclid(TAU) / TAU) * m;
        let idx = (u.floor() as usize).min(self.pieces.len() - 1);
        let (piece, reversed) = self.pieces[idx];
        let mut tau = u - idx as f64;
        if reversed {
            tau = 1.0 - tau;
        }
        let (w, h) = (self.w, self.h);
        let (x, y, z) = match piece {
            Piece::Shift { x0, z0, z1 } => {
                let (sv, dv) = smootherstep(tau);
                (x0 + tau * w, (z1 - z0) * dv / w, z0 + (z1 - z0) * sv)
            }
            Piece::Open { x0, zc, sign } => {
                (x0 + w * tau * tau, sign * (h / w) * cusp_slope(tau), zc + sign * h * cusp_profile(tau))
            }
            Piece::Close { x0, zc, sign } => {
                let sg = 1.0 - tau;
                (x0 - w * sg * sg, -sign * (h / w) * cusp_slope(sg), zc + sign * h * cusp_profile(sg))
            }
        };
        [x - self.x_mid, y, z - self.z_mid]
    }
}

/// Contactomorphism `(R³, dz - y dx) → S³ \ {(0, 1)}`.
pub fn heisenberg_to_sphere(p: P3) -> Point4 {
    let [x, y, z] = p;
    let t = 4.0 * z - 2.0 * x * y;
    let zeta = C64::new(x, y);
    let w = C64::new(t, zeta.norm_sqr());
    let i = C64::new(0.0, 1.0);
    let z1 = 2.0 * zeta / (w + i);
    let z2 = (w - i) / (w + i);
    from_complex(z1, z2)
}

impl ClosedCurve for FrontCurve {
    fn point(&self, s: f64) -> Point4 {
        heisenberg_to_sphere(self.point_r3(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(center: P3, r: f64, plane: usize, n: usize) -> Vec<P3> {
        (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                let mut p = center;
                let (i, j) = match plane {
                    0 => (0, 1),
                    1 => (1, 2),
                    _ => (2, 0),
                };
                p[i] += r * a.cos();
                p[j] += r * a.sin();
                p
            })
            .collect()
    }

    /// Gauss integral, midpoint rule.
    fn gauss_linking(a: &[P3], b: &[P3]) -> f64 {
        let mut total = 0.0;
        for i in 0..a.len() {
            let da: P3 = std::array::from_fn(|k| a[(i + 1) % a.len()][k] - a[i][k]);
            let ma: P3 = std::array::from_fn(|k| 0.5 * (a[(i + 1) % a.len()][k] + a[i][k]));
            for j in 0..b.len() {
                let db: P3 = std::array::from_fn(|k| b[(j + 1) % b.len()][k] - b[j][k]);
                let mb: P3 = std::array::from_fn(|k| 0.5 * (b[(j + 1) % b.len()][k] + b[j][k]));
                let r: P3 = std::array::from_fn(|k| ma[k] - mb[k]);
                let c = [da[1] * db[2] - da[2] * db[1], da[2] * db[0] - da[0] * db[2], da[0] * db[1] - da[1] * db[0]];
                let d = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                total += (r[0] * c[0] + r[1] * c[1] + r[2] * c[2]) / (d * d * d);
            }
        }
        total / (4.0 * PI)
    }

    #[test]
    fn crossing_count_matches_gauss_integral() {
        let a = circle([0.0, 0.0, 0.0], 1.0, 0, 200);
        let b = circle([1.0, 0.0, 0.0], 1.0, 2, 200);
        let lk = linking_r3(&a, &b).unwrap();
        let g = gauss_linking(&a, &b);
        assert_eq!(lk.abs(), 1);
        assert!((g - lk as f64).abs() < 0.05, "gauss {g} crossings {lk}");
        let far = circle([5.0, 0.0, 0.0], 1.0, 2, 100);
        assert_eq!(linking_r3(&a, &far).unwrap(), 0);
    }

    #[test]
    fn stereographic_projection_preserves_orientation() {
        // Hopf fibers of S³ link positively for the boundary orientation of the ball.
        let fiber = |phase: f64| -> Vec<Point4> {
            (0..400)
                .map(|k| {
                    let s = TAU * k as f64 / 400.0;
                    let z = C64::from_polar(1.0, s);
                    let (a, b) = (0.6f64, 0.8f64);
                    from_complex(z * a, z * C64::from_polar(b, phase))
                })
                .collect()
        };
        assert_eq!(linking_number_s3(&fiber(0.0), &fiber(1.0)).unwrap(), 1);
    }

    #[test]
    fn l_values() {
        for s in [0.0, 0.7, 2.0, 5.5] {
            assert!((norm(l_curve(s)) - 1.0).abs() < 1e-15);
        }
        let r = legendrian_residual(&LCurve, 1024);
        assert!(r.pass && r.max_residual < 1e-12, "{r:?}");
    }

    #[test]
    fn liouville_at_one_one() {
        let (ft, fu) = f_umbrella_jacobian(1.0, 1.0);
        let lhs: Point4 = std::array::from_fn(|k| ft[k] + 2.0 * fu[k]);
        // [q1, p1, q2, p2] = (2, 3, 2, 2)
        assert_eq!(lhs, [2.0, 3.0, 2.0, 2.0]);
        assert_eq!(scale(liouville_field(f_umbrella(1.0, 1.0)), 5.0), [2.0, 3.0, 2.0, 2.0]);
        assert_eq!(liouville_field(f_umbrella(0.0, 0.0)), [0.0; 4]);
    }

    #[test]
    fn front_curves_are_legendrian() {
        for f in [fronts::trivial(), fronts::stabilized_unknot(), fronts::trivial_with_kink()] {
            let c = FrontCurve::new(&f).unwrap();
            let r = legendrian_residual(&c, 4000);
            assert!(r.details[0].1 < 1e-12);
            assert!(r.details[1].1 < 1e-6, "{}: {r:?}", f.word_string());
        }
    }

    #[test]
    fn a_out_of_range() {
        assert_eq!(mobius_identities(1.5, 8), Err(NumericsError::AOutOfRange(1.5)));
        assert!(matches!(
            pullback_residual(&Family::GammaA { a: 1.0 }, &Grid::new((0.0, 1.0), (-2.0, 2.0), 4, 4), 1e-4),
            Err(NumericsError::GridOutsideDomain { .. })
        ));
    }

    #[test]
    fn oracle_values_on_explicit_curves() {
        assert_eq!(tb_oracle(&GreatCircle, 1e-2).unwrap(), -1);
        assert_eq!(tb_oracle(&LCurve, 1e-2).unwrap(), -2);
        assert_eq!(rot_oracle(&GreatCircle).unwrap(), 0);
        assert_eq!(rot_oracle(&LCurve).unwrap(), 1);
        assert_eq!(rot_oracle(&Reversed(&LCurve)).unwrap(), -rot_oracle(&LCurve).unwrap());
    }

    fn trefoil() -> FrontDiagram {
        use crate::front::FrontEvent as E;
        FrontDiagram::new(vec![E::left(1), E::left(3), E::cross(2), E::cross(2), E::cross(2), E::right(1), E::right(1)]).unwrap()
    }

    #[test]
    fn oracle_values_on_front_curves() {
        for f in [
            fronts::trivial(),
            fronts::stabilized_unknot(),
            fronts::stabilized_unknot().reversed(),
            fronts::trivial_with_kink(),
            fronts::lu_chain(2),
            fronts::lu_chain(3),
            trefoil(),
        ] {
            let inv = f.invariants();
            let c = FrontCurve::new(&f).unwrap();
            assert_eq!(tb_oracle(&c, DEFAULT_PUSH_OFF).unwrap(), inv.tb, "{}", f.word_string());
            assert_eq!(rot_oracle(&c).unwrap(), inv.rot[0], "{}", f.word_string());
        }
    }

    #[test]
    fn wobbled_l_is_not_legendrian() {
        let r = legendrian_residual(&ReebWobble { curve: &LCurve, amplitude: 0.01 }, 1024);
        assert!(!r.pass && r.max_residual > 1e-3);
    }

    #[test]
    fn family_residuals() {
        for a in [0.5, 1.0, 1.3] {
            let fam = Family::GammaA { a };
            let r = pullback_residual(&fam, &default_grid(&fam, 40), 1e-5).unwrap();
            assert!(r.pass, "{r:?}");
            let m = mobius_identities(a, 64).unwrap();
            assert!(m.pass, "{m:?}");
        }
        let r = pullback_residual(&Family::G, &default_grid(&Family::G, 40), 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        let r = pullback_residual(&Family::F, &default_grid(&Family::F, 40), 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(liouville_identity(&default_grid(&Family::F, 40)).max_residual < 1e-12);
    }

    #[test]
    fn cone_convergence_is_quadratic() {
        let grid = Grid::new((0.0, TAU), (0.5, 1.0), 32, 16);
        let r = convergence_to_cone(&[0.2, 0.1, 0.05, 0.025], &grid).unwrap();
        assert!(r.pass, "{r:?}");
        for q in &r.ratios {
            assert!((q - 0.25).abs() < 0.05);
        }
    }
}
