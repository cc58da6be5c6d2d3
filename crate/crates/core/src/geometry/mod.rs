//! Spherical realization of a³b and a²bc tiles.
//!
//! Corners are labelled α, β, γ, δ in cyclic order. The edges are
//! αβ = a, αδ = a, γδ = b and βγ = c, with c = a for the a³b tile.

pub mod tables;

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Existence, closure and degeneracy decisions.
pub const EXIST_TOL: f64 = 1e-9;
/// Identity self-checks on closed forms.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Bisection stops once the bracket is this narrow.
pub const ROOT_WIDTH: f64 = 1e-13;
pub const DEFAULT_SAMPLES: usize = 10_000;
const ENDPOINT_GAP: f64 = 1e-9;

/// Existence tolerance, overridable through `QUADTILE_TOL`.
///
/// Values outside (0, 1e−3) are ignored.
pub fn tolerance() -> f64 {
    std::env::var("QUADTILE_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| *t > 0.0 && *t < 1e-3)
        .unwrap_or(EXIST_TOL)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("angles violate the four-angle sine identity (residual {0:e})")]
    IdentityViolated(f64),
    #[error("b = a within tolerance: the tile is a rhombus")]
    RhombusDegenerate,
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TileKind {
    #[serde(rename = "a3b")]
    A3B,
    #[serde(rename = "a2bc")]
    A2BC,
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TileKind::A3B => "a3b",
            TileKind::A2BC => "a2bc",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Convex,
    AlphaReflex,
    BetaReflex,
    GammaReflex,
    DeltaReflex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    None,
    TriangleAlphaPi,
    TriangleBetaPi,
    TriangleGammaPi,
    TriangleDeltaPi,
    Rhombus,
    Kite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeReduction {
    CEqualsA,
    BEqualsA,
    CEqualsB,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub coolsaet: f64,
    pub closure: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadGeometry {
    pub tile_kind: TileKind,
    /// α, β, γ, δ in radians.
    pub angles: [f64; 4],
    pub a: f64,
    pub b: f64,
    /// Only for a²bc tiles.
    pub c: Option<f64>,
    pub shape: Shape,
    pub degeneracy: Degeneracy,
    pub reductions: Vec<EdgeReduction>,
    pub residuals: Residuals,
    /// Oriented angle ∠ABD of an earth-map tile, equal to π − α.
    pub theta_oriented: Option<f64>,
}

impl QuadGeometry {
    /// The βγ edge: c for a²bc, a otherwise.
    pub fn c_edge(&self) -> f64 {
        self.c.unwrap_or(self.a)
    }
}

/// `sin(α/2)·sin(δ−β/2) − sin(β/2)·sin(γ−α/2)`; zero for every a³b tile.
pub fn coolsaet_residual(alpha: f64, beta: f64, gamma: f64, delta: f64) -> f64 {
    (alpha / 2.0).sin() * (delta - beta / 2.0).sin() - (beta / 2.0).sin() * (gamma - alpha / 2.0).sin()
}

pub fn rot_y(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

pub fn rot_z(t: f64) -> Matrix3<f64> {
    let (s, c) = t.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// The eight factors of the closure product, walking γ → β → α → δ → γ.
pub fn closure_factors(angles: [f64; 4], a: f64, b: f64, c: f64) -> [Matrix3<f64>; 8] {
    let [al, be, ga, de] = angles;
    [
        rot_y(c),
        rot_z(PI - be),
        rot_y(a),
        rot_z(PI - al),
        rot_y(a),
        rot_z(PI - de),
        rot_y(b),
        rot_z(PI - ga),
    ]
}

/// Product of the factors starting at index `shift` (cyclically).
pub fn closure_product_shifted(angles: [f64; 4], a: f64, b: f64, c: f64, shift: usize) -> Matrix3<f64> {
    let fs = closure_factors(angles, a, b, c);
    (0..8).fold(Matrix3::identity(), |m, i| m * fs[(i + shift) % 8])
}

/// Frobenius distance from the identity. Unlike the entrywise maximum it is
/// unchanged by conjugation, so cyclic shifts of the product agree.
pub fn distance_from_identity(m: &Matrix3<f64>) -> f64 {
    (m - Matrix3::identity()).norm()
}

pub fn closure_residual(g: &QuadGeometry) -> f64 {
    distance_from_identity(&closure_product_shifted(g.angles, g.a, g.b, g.c_edge(), 0))
}

fn near(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() < tol
}

/// Maps an angle into (0, 2π].
fn wrap_positive(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y <= 0.0 {
        2.0 * PI
    } else {
        y
    }
}

pub fn shape_of(angles: [f64; 4], tol: f64) -> Shape {
    match angles.iter().position(|&x| x > PI + tol) {
        Some(0) => Shape::AlphaReflex,
        Some(1) => Shape::BetaReflex,
        Some(2) => Shape::GammaReflex,
        Some(3) => Shape::DeltaReflex,
        _ => Shape::Convex,
    }
}

fn straight_angle(angles: [f64; 4], tol: f64) -> Degeneracy {
    let flags = [
        Degeneracy::TriangleAlphaPi,
        Degeneracy::TriangleBetaPi,
        Degeneracy::TriangleGammaPi,
        Degeneracy::TriangleDeltaPi,
    ];
    angles
        .iter()
        .zip(flags)
        .find(|(x, _)| near(**x, PI, tol))
        .map_or(Degeneracy::None, |(_, d)| d)
}

/// The two expressions for cos a of an a³b tile. Either is `None` when
/// its denominator vanishes.
pub fn cos_a_expressions(angles: [f64; 4]) -> (Option<f64>, Option<f64>) {
    let [al, be, ga, de] = angles;
    let d1 = (1.0 - be.cos()) * ga.sin();
    let d2 = (1.0 - al.cos()) * de.sin();
    let e1 = (d1.abs() > 1e-8).then(|| (be.sin() * ga.cos() + de.sin()) / d1);
    let e2 = (d2.abs() > 1e-8).then(|| (al.sin() * de.cos() + ga.sin()) / d2);
    (e1, e2)
}

/// `(sin γ cos b, sin γ sin b)` for the a²bc tile with edge `a`.
pub fn b_pair(angles: [f64; 4], a: f64) -> (f64, f64) {
    let [al, be, _, de] = angles;
    let (sa, ca) = a.sin_cos();
    let p = (1.0 - al.cos()) * be.sin() * de.cos() * ca * ca - al.sin() * (be + de).cos() * ca
        - be.sin() * de.cos()
        - al.cos() * be.cos() * de.sin();
    let q = ((1.0 - al.cos()) * be.sin() * ca - al.sin() * be.cos()) * sa;
    (p, q)
}

/// `(sin γ cos c, sin γ sin c)` for the a²bc tile with edge `a`.
pub fn c_pair(angles: [f64; 4], a: f64) -> (f64, f64) {
    let [al, be, _, de] = angles;
    let (sa, ca) = a.sin_cos();
    let p = (1.0 - al.cos()) * be.cos() * de.sin() * ca * ca - al.sin() * (be + de).cos() * ca
        - be.cos() * de.sin()
        - al.cos() * be.sin() * de.cos();
    let q = ((1.0 - al.cos()) * de.sin() * ca - al.sin() * de.cos()) * sa;
    (p, q)
}

/// Left side of the a²bc existence condition; zero iff the tile closes.
pub fn a2bc_existence_residual(angles: [f64; 4], a: f64) -> f64 {
    let [al, be, ga, de] = angles;
    let ca = a.cos();
    (al.cos() - 1.0) * be.sin() * de.sin() * ca * ca + al.sin() * (be + de).sin() * ca + be.sin() * de.sin()
        - al.cos() * be.cos() * de.cos()
        + ga.cos()
}

/// Recovers an edge in (0, 2π] from `(sin γ cos x, sin γ sin x)`.
fn edge_from_pair((p, q): (f64, f64), sin_gamma: f64) -> f64 {
    let s = sin_gamma.signum();
    wrap_positive((s * q).atan2(s * p))
}

/// Realizes the a³b tile with the given angles.
pub fn realize_a3b(angles: [f64; 4], tol: f64) -> Result<QuadGeometry, GeometryError> {
    if angles.iter().any(|x| !x.is_finite() || *x <= 0.0 || *x >= 2.0 * PI) {
        return Err(GeometryError::Domain("angles must lie in (0, 2π)".into()));
    }
    let [al, be, ga, de] = angles;
    let coolsaet = coolsaet_residual(al, be, ga, de);
    if coolsaet.abs() >= tol {
        return Err(GeometryError::IdentityViolated(coolsaet));
    }
    let cos_a = match cos_a_expressions(angles) {
        (Some(x), Some(y)) => {
            if (x - y).abs() >= tol.max(1e-10) * (1.0 + x.abs()) {
                return Err(GeometryError::IdentityViolated(x - y));
            }
            let d1 = ((1.0 - be.cos()) * ga.sin()).abs();
            let d2 = ((1.0 - al.cos()) * de.sin()).abs();
            if d1 >= d2 {
                x
            } else {
                y
            }
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => return Err(GeometryError::NotRealizable("γ and δ both straight".into())),
    };
    if cos_a.abs() >= 1.0 {
        return Err(GeometryError::NotRealizable(format!("|cos a| = {:.6} ≥ 1", cos_a.abs())));
    }
    let a = cos_a.acos();
    // The mirror image swaps α↔β and γ↔δ and keeps b; use whichever
    // of sin γ, sin δ is better conditioned.
    let b = if ga.sin().abs() >= de.sin().abs() {
        edge_from_pair(b_pair(angles, a), ga.sin())
    } else {
        edge_from_pair(b_pair([be, al, de, ga], a), de.sin())
    };
    if near(a, b, tol) {
        return Err(GeometryError::RhombusDegenerate);
    }
    let mut g = QuadGeometry {
        tile_kind: TileKind::A3B,
        angles,
        a,
        b,
        c: None,
        shape: shape_of(angles, tol),
        degeneracy: straight_angle(angles, tol),
        reductions: Vec::new(),
        residuals: Residuals { coolsaet, closure: 0.0 },
        theta_oriented: None,
    };
    g.residuals.closure = closure_residual(&g);
    Ok(g)
}

/// Realizes the a²bc tile with the given angles and equal edge `a`.
pub fn realize_a2bc(angles: [f64; 4], a: f64, tol: f64) -> Result<QuadGeometry, GeometryError> {
    if !(a > 0.0 && a < PI) {
        return Err(GeometryError::Domain(format!("a = {a} is outside (0, π)")));
    }
    let [al, be, ga, de] = angles;
    let sg = ga.sin();
    if sg.abs() < tol {
        return Err(GeometryError::Domain("sin γ = 0".into()));
    }
    let s = a2bc_existence_residual(angles, a);
    if s.abs() >= tol {
        return Err(GeometryError::NotRealizable(format!("existence residual {s:e}")));
    }
    let b = edge_from_pair(b_pair(angles, a), sg);
    let c = edge_from_pair(c_pair(angles, a), sg);
    let mut reductions = Vec::new();
    if near(c, a, tol) {
        reductions.push(EdgeReduction::CEqualsA);
    }
    if near(b, a, tol) {
        reductions.push(EdgeReduction::BEqualsA);
    }
    if near(b, c, tol) {
        reductions.push(EdgeReduction::CEqualsB);
    }
    let mut degeneracy = straight_angle(angles, tol);
    if degeneracy == Degeneracy::None && near(b, c, tol) {
        degeneracy = Degeneracy::Kite;
    }
    let mut g = QuadGeometry {
        tile_kind: TileKind::A2BC,
        angles,
        a,
        b,
        c: Some(c),
        shape: shape_of(angles, tol),
        degeneracy,
        reductions,
        residuals: Residuals { coolsaet: coolsaet_residual(al, be, ga, de), closure: 0.0 },
        theta_oriented: None,
    };
    g.residuals.closure = closure_residual(&g);
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplicityRule {
    /// Every angle below π with β > δ or α > γ forces b < π.
    AngleOrder,
    /// cos(β−δ) + cos γ > 0 with γ, δ < π forces b < π.
    CosineSum,
    /// The same criterion after swapping α↔β and γ↔δ.
    CosineSumSwapped,
    /// The computed b (and c) lie below π.
    EdgeValues,
    /// Every edge below π and at least three angles below π.
    ShortEdgesThreeAngles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Simplicity {
    Simple,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicityVerdict {
    pub verdict: Simplicity,
    pub trace: Vec<SimplicityRule>,
}

/// Sufficient-condition chain for simplicity. Never asserts non-simple.
pub fn simplicity_check(g: &QuadGeometry) -> SimplicityVerdict {
    let [al, be, ga, de] = g.angles;
    let below = |x: f64| x > 0.0 && x < PI;
    let mut trace = Vec::new();
    let mut b_short = false;
    if g.tile_kind == TileKind::A3B && below(g.a) {
        if g.angles.iter().all(|&x| below(x)) && (be > de || al > ga) {
            trace.push(SimplicityRule::AngleOrder);
            b_short = true;
        } else if below(ga) && below(de) && (be - de).cos() + ga.cos() > 0.0 {
            trace.push(SimplicityRule::CosineSum);
            b_short = true;
        } else if below(ga) && below(de) && (al - ga).cos() + de.cos() > 0.0 {
            trace.push(SimplicityRule::CosineSumSwapped);
            b_short = true;
        }
    }
    let c_short = g.c.is_none_or(below);
    if !b_short && below(g.b) && c_short {
        trace.push(SimplicityRule::EdgeValues);
        b_short = true;
    }
    let edges_short = b_short && below(g.a) && c_short;
    let angles_short = g.angles.iter().filter(|&&x| below(x)).count() >= 3;
    let verdict = if edges_short && angles_short {
        trace.push(SimplicityRule::ShortEdgesThreeAngles);
        Simplicity::Simple
    } else {
        Simplicity::Unknown
    };
    SimplicityVerdict { verdict, trace }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarthMapEdges {
    pub a: f64,
    pub b: f64,
    pub theta_oriented: f64,
    pub shape: Shape,
    pub degeneracy: Degeneracy,
}

/// Edges of the earth-map a³b tile, whose area equals β.
pub fn earth_map_edges(alpha: f64, beta: f64, tol: f64) -> Result<EarthMapEdges, GeometryError> {
    if !(alpha > PI / 2.0 && alpha < 1.5 * PI) {
        return Err(GeometryError::Domain(format!("α = {:.6}π is outside (π/2, 3π/2)", alpha / PI)));
    }
    if !(beta > 0.0 && beta < PI) {
        return Err(GeometryError::Domain(format!("β = {:.6}π is outside (0, π)", beta / PI)));
    }
    let ca = alpha.cos();
    let a = (ca / (ca - 1.0)).acos();
    let cos_b = ((2.0 * ca - 1.0) * (alpha + beta).cos() - ca * ca) / ((1.0 - ca) * (1.0 - ca));
    let b = cos_b.clamp(-1.0, 1.0).acos();
    let theta = PI - alpha;
    let shape = if theta < -tol {
        Shape::AlphaReflex
    } else if theta > beta + tol {
        Shape::GammaReflex
    } else {
        Shape::Convex
    };
    let degeneracy = if near(theta, 0.0, tol) {
        Degeneracy::TriangleAlphaPi
    } else if near(theta, beta, tol) {
        Degeneracy::TriangleGammaPi
    } else if near(theta, beta / 2.0, tol) {
        Degeneracy::Rhombus
    } else {
        Degeneracy::None
    };
    Ok(EarthMapEdges { a, b, theta_oriented: theta, shape, degeneracy })
}

fn walk(p: &Vector3<f64>, t: &Vector3<f64>, d: f64) -> Vector3<f64> {
    p * d.cos() + t * d.sin()
}

/// Unit tangent at `p` pointing along the great circle towards `q`.
fn toward(p: &Vector3<f64>, q: &Vector3<f64>) -> Vector3<f64> {
    (q - p * p.dot(q)).normalize()
}

/// Interior angle at `v` of a counterclockwise polygon, in [0, 2π).
fn interior_angle(prev: &Vector3<f64>, v: &Vector3<f64>, next: &Vector3<f64>) -> f64 {
    let tn = toward(v, next);
    let tp = toward(v, prev);
    v.dot(&tn.cross(&tp)).atan2(tn.dot(&tp)).rem_euclid(2.0 * PI)
}

/// Corner positions of the a³b tile built from α, β and the edges.
pub fn a3b_vertices(alpha: f64, beta: f64, a: f64) -> [Vector3<f64>; 4] {
    let pa = Vector3::z();
    let pb = walk(&pa, &Vector3::x(), a);
    let pd = walk(&pa, &Vector3::new(alpha.cos(), alpha.sin(), 0.0), a);
    let tp = toward(&pb, &pa);
    let tn = tp * beta.cos() - pb.cross(&tp) * beta.sin();
    let pc = walk(&pb, &tn, a);
    [pa, pb, pc, pd]
}

/// Interior angles of the spherical quadrilateral with the given corners.
pub fn quad_angles(p: &[Vector3<f64>; 4]) -> [f64; 4] {
    std::array::from_fn(|i| interior_angle(&p[(i + 3) % 4], &p[i], &p[(i + 1) % 4]))
}

/// The full earth-map tile: γ and δ are measured on the constructed tile.
pub fn earth_map_quad(alpha: f64, beta: f64, tol: f64) -> Result<QuadGeometry, GeometryError> {
    let e = earth_map_edges(alpha, beta, tol)?;
    let pts = a3b_vertices(alpha, beta, e.a);
    let measured = quad_angles(&pts);
    let angles = [alpha, beta, measured[2], measured[3]];
    let mut g = QuadGeometry {
        tile_kind: TileKind::A3B,
        angles,
        a: e.a,
        b: e.b,
        c: None,
        shape: e.shape,
        degeneracy: e.degeneracy,
        reductions: Vec::new(),
        residuals: Residuals { coolsaet: coolsaet_residual(alpha, beta, angles[2], angles[3]), closure: 0.0 },
        theta_oriented: Some(e.theta_oriented),
    };
    g.residuals.closure = closure_residual(&g);
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tag: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
}

/// Sign-change brackets of `h` on a uniform grid over `[lo, hi]`.
pub fn scan_brackets<F: Fn(f64) -> f64>(h: &F, lo: f64, hi: f64, samples: usize, tag: &str) -> Vec<RootBracket> {
    let n = samples.max(2);
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| h(x)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (v0, v1) = (vs[i], vs[i + 1]);
        let sign_change = v0 * v1 < 0.0 || (v1 == 0.0 && i + 1 < n);
        if sign_change && v0.is_finite() && v1.is_finite() {
            out.push(RootBracket { lo: xs[i], hi: xs[i + 1], tag: tag.to_string() });
        }
    }
    out
}

/// Bisects a bracket down to [`ROOT_WIDTH`].
pub fn bisect<F: Fn(f64) -> f64>(h: &F, bracket: &RootBracket) -> Root {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut vlo = h(lo);
    if h(hi) == 0.0 {
        return Root { x: hi, residual: 0.0 };
    }
    while hi - lo > ROOT_WIDTH {
        let mid = 0.5 * (lo + hi);
        let vm = h(mid);
        if vm == 0.0 {
            return Root { x: mid, residual: 0.0 };
        }
        if (vm < 0.0) == (vlo < 0.0) {
            lo = mid;
            vlo = vm;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Root { x, residual: h(x) }
}

/// All roots of a one-parameter residual on `[lo, hi]` found by scan and
/// bisection. Callers filter by their own admissible range.
pub fn solve_free_angle<F: Fn(f64) -> f64>(h: F, lo: f64, hi: f64, samples: usize) -> Vec<Root> {
    scan_brackets(&h, lo, hi, samples, "free-angle").iter().map(|b| bisect(&h, b)).collect()
}

/// Sine identity for the family with α = 2π − 2δ, β = 8π/f, γ = δ − 4π/f.
pub fn alpha_delta_sq_residual(f: u32, delta: f64) -> f64 {
    let t = 4.0 * PI / f as f64;
    delta.sin() * (delta - t).sin() + t.sin() * (2.0 * delta - t).sin()
}

/// Roots of [`alpha_delta_sq_residual`] with δ in ((1 − 4/f)π, π).
pub fn alpha_delta_sq_roots(f: u32) -> Vec<Root> {
    let lo = (1.0 - 4.0 / f as f64) * PI;
    solve_free_angle(|d| alpha_delta_sq_residual(f, d), lo, PI, DEFAULT_SAMPLES)
        .into_iter()
        // The residual vanishes identically at δ = (1 − 4/f)π for some f;
        // the interval is open, so endpoint hits are dropped.
        .filter(|r| r.x > lo + ENDPOINT_GAP && r.x < PI - ENDPOINT_GAP)
        .collect()
}

/// Corners of the a²bc earth-map tile with α at the north pole.
///
/// The β and δ corners sit at colatitude `a` on the meridians 0 and α; the
/// γ corner sits at colatitude π − a, `phi` east of the β meridian, so that
/// the half-turn swapping the poles carries the tile onto its southern twin.
pub fn a2bc_earth_map_vertices(alpha: f64, a: f64, phi: f64) -> [Vector3<f64>; 4] {
    let at = |colat: f64, lon: f64| Vector3::new(colat.sin() * lon.cos(), colat.sin() * lon.sin(), colat.cos());
    [Vector3::z(), at(a, 0.0), at(PI - a, phi), at(a, alpha)]
}

/// a²bc earth-map tile for `α = 4π/f`; β, γ, δ are measured on the construction.
pub fn a2bc_earth_map_quad(alpha: f64, a: f64, phi: f64, tol: f64) -> Result<QuadGeometry, GeometryError> {
    if !(phi > 0.0 && phi < alpha) {
        return Err(GeometryError::Domain(format!("phi = {phi} is outside (0, α)")));
    }
    let pts = a2bc_earth_map_vertices(alpha, a, phi);
    let mut angles = quad_angles(&pts);
    angles[0] = alpha;
    realize_a2bc(angles, a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: f64 = EXIST_TOL;

    #[test]
    fn coolsaet_examples() {
        assert!(coolsaet_residual(PI, PI / 2.0, PI / 2.0, PI / 4.0).abs() < 1e-15);
        let d = (0.5 * (1.0 - 3f64.sqrt() / 3.0)).acos();
        assert!(coolsaet_residual(2.0 * PI / 3.0, PI - d, PI / 2.0, d).abs() < IDENTITY_TOL);
        // sin(π/4)·sin(π/12) − sin(π/4)·sin(π/4)
        let expect = (PI / 4.0).sin() * ((PI / 12.0).sin() - (PI / 4.0).sin());
        let r = coolsaet_residual(PI / 2.0, PI / 2.0, PI / 2.0, PI / 3.0);
        assert!((r - expect).abs() < 1e-15 && r.abs() > 0.1);
    }

    #[test]
    fn s4_closure_and_perturbation() {
        let g = (((7.0 - 4.0 * 2f64.sqrt()) / 17.0).sqrt()).acos();
        let q = realize_a3b([PI / 2.0, 0.75 * PI, g, PI - g], T).unwrap();
        assert!((q.a - PI / 4.0).abs() < 1e-12);
        assert!((q.b.cos() - (2.0 * 2f64.sqrt() - 1.0) / 4.0).abs() < 1e-12);
        assert!(q.residuals.closure < 1e-9);
        let mut p = q.clone();
        p.b += 1e-3;
        assert!(closure_residual(&p) > 1e-4);
    }

    #[test]
    fn s3_triangle() {
        let q = realize_a3b([PI, PI / 2.0, PI / 2.0, PI / 4.0], T).unwrap();
        assert_eq!(q.degeneracy, Degeneracy::TriangleAlphaPi);
        assert!((q.a - PI / 4.0).abs() < 1e-12 && (q.b - PI / 2.0).abs() < 1e-12);
        assert!(q.residuals.closure < 1e-12);
    }

    #[test]
    fn qp6_prime_edges() {
        let angles = [2.0 * PI / 3.0, 2.0 * PI / 3.0, PI / 2.0, PI / 3.0];
        let a = (5f64.sqrt() / 3.0).acos();
        let q = realize_a2bc(angles, a, T).unwrap();
        let s3 = 2.0 * 3f64.sqrt();
        assert!((q.b - ((5f64.sqrt() - 1.0) / s3).acos()).abs() < 1e-12);
        assert!((q.c.unwrap() - ((5f64.sqrt() + 1.0) / s3).acos()).abs() < 1e-12);
        assert!(q.residuals.closure < 1e-9);
        assert!(q.reductions.is_empty());
    }

    #[test]
    fn qp6_kite() {
        let angles = [2.0 * PI / 3.0, PI / 2.0, PI / 2.0, PI / 2.0];
        let a = (1.0 / 3f64.sqrt()).asin();
        let q = realize_a2bc(angles, a, T).unwrap();
        assert!((q.b - PI / 4.0).abs() < 1e-12 && (q.c.unwrap() - PI / 4.0).abs() < 1e-12);
        assert_eq!(q.degeneracy, Degeneracy::Kite);
        assert_eq!(q.reductions, vec![EdgeReduction::CEqualsB]);
    }

    #[test]
    fn a2bc_rejections() {
        let angles = [2.0 * PI / 3.0, PI / 2.0, PI / 2.0, PI / 2.0];
        assert!(matches!(realize_a2bc(angles, 0.3, T), Err(GeometryError::NotRealizable(_))));
        let flat = [2.0 * PI / 3.0, PI / 2.0, PI, PI / 2.0];
        assert!(matches!(realize_a2bc(flat, 0.3, T), Err(GeometryError::Domain(_))));
    }

    #[test]
    fn a3b_rejections() {
        let r = realize_a3b([PI / 2.0, PI / 2.0, PI / 2.0, PI / 3.0], T);
        assert!(matches!(r, Err(GeometryError::IdentityViolated(_))));
        // The cube face: all angles 2π/3 and all edges equal.
        let t = 2.0 * PI / 3.0;
        assert_eq!(realize_a3b([t, t, t, t], T), Err(GeometryError::RhombusDegenerate));
    }

    #[test]
    fn earth_map_examples() {
        let e = earth_map_edges(2.0 * PI / 3.0, 2.0 * PI / 3.0, T).unwrap();
        assert!((e.a.cos() - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(e.degeneracy, Degeneracy::Rhombus);
        let e = earth_map_edges(PI, PI / 4.0, T).unwrap();
        assert!((e.a.cos() - 0.5).abs() < 1e-14);
        assert_eq!(e.degeneracy, Degeneracy::TriangleAlphaPi);
        let e = earth_map_edges(0.75 * PI, PI / 4.0, T).unwrap();
        assert_eq!(e.degeneracy, Degeneracy::TriangleGammaPi);
        assert!(earth_map_edges(0.4 * PI, 0.2, T).is_err());
    }

    #[test]
    fn earth_map_tile_closes() {
        for &(al, be) in &[(0.7 * PI, 0.25 * PI), (1.2 * PI, PI / 3.0), (0.6 * PI, 0.2 * PI)] {
            let g = earth_map_quad(al, be, T).unwrap();
            let [_, _, ga, de] = g.angles;
            assert!((al + ga + de - 2.0 * PI).abs() < 1e-10, "{al} {be}: {:?}", g.angles);
            assert!(g.residuals.closure < 1e-9, "{:?}", g);
            assert!(g.residuals.coolsaet.abs() < 1e-12);
            let r = realize_a3b(g.angles, T).unwrap();
            assert!((r.a - g.a).abs() < 1e-9 && (r.b - g.b).abs() < 1e-9);
        }
    }

    #[test]
    fn free_angle_roots() {
        let r12 = alpha_delta_sq_roots(12);
        assert_eq!(r12.len(), 1);
        assert!((r12[0].x.cos() + 10f64.sqrt() / 4.0).abs() < 1e-12);
        let r16 = alpha_delta_sq_roots(16);
        assert_eq!(r16.len(), 1);
        assert!((r16[0].x / PI - 0.7898).abs() < 1e-4);
        assert!(alpha_delta_sq_roots(20).is_empty());
    }

    #[test]
    fn simplicity_rules() {
        let s5 = realize_a3b([4.0 * PI / 9.0, 7.0 * PI / 9.0, PI / 3.0, 5.0 * PI / 9.0], T).unwrap();
        let v = simplicity_check(&s5);
        assert_eq!(v.verdict, Simplicity::Simple);
        assert_eq!(v.trace[0], SimplicityRule::AngleOrder);
        let mut odd = s5.clone();
        odd.angles = [1.1 * PI, 1.2 * PI, 1.3 * PI, 1.4 * PI];
        assert_eq!(simplicity_check(&odd).verdict, Simplicity::Unknown);
    }
}
