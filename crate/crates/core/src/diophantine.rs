//! Non-rational angles.
//!
//! With the quadrilateral sum and two fixed vertices, a third vertex
//! `αᵐβⁿγᵏδˡ` is compatible with a one-parameter (hence generically
//! non-rational) family of angles exactly when the 4×4 angle-sum matrix is
//! singular and the system stays consistent. That gives two conditions:
//! `λ(m,n,k,l) = 0`, an integer form, and `μ(m,n,k,l; f) = 0`, whose
//! `1/f`-part fixes `f` once the vertex is known.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_angles::{rint, Rat};
use crate::linalg::solve_affine;
use crate::rational_solver::{all_pairs, CandidatePair};
use crate::vertex_enum::{count_feasibility, Avc, AvcPattern, VertexCombo, VertexRay, EXPONENT_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiophantineError {
    #[error("degenerate pair {0}: the fixed rows do not have rank 3")]
    DegeneratePair(String),
}

/// Rows of the angle-sum system: the quadrilateral sum and two fixed vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AngleSumSystem {
    pub first: VertexCombo,
    pub second: VertexCombo,
}

impl AngleSumSystem {
    pub fn new(pair: &CandidatePair) -> Self {
        AngleSumSystem { first: pair.first, second: pair.second }
    }

    /// Augmented matrix `[A | b]` with `generic` as the last row, in π units.
    pub fn augmented(&self, generic: &VertexCombo, f: u32) -> Vec<Vec<Rat>> {
        let row = |v: &VertexCombo| {
            let mut r: Vec<Rat> = v.as_array().iter().map(|&e| rint(e as i64)).collect();
            r.push(rint(2));
            r
        };
        let mut sum = vec![Rat::one(); 4];
        sum.push(rint(2) + rint(4) / rint(f as i64));
        vec![sum, row(&self.first), row(&self.second), row(generic)]
    }
}

/// `λ·v = 0` and `μ0·v + μ0c + (4/f)(μ1·v) = 0`, all coefficients integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiophantineCondition {
    pub lambda: [i64; 4],
    pub mu0: [i64; 4],
    pub mu0_const: i64,
    pub mu1: [i64; 4],
}

fn dot(a: &[i64; 4], v: &VertexCombo) -> i64 {
    a.iter().zip(v.as_array()).map(|(x, e)| x * e as i64).sum()
}

impl DiophantineCondition {
    pub fn lambda_at(&self, v: &VertexCombo) -> i64 {
        dot(&self.lambda, v)
    }

    /// `f`-free part of μ.
    pub fn mu0_at(&self, v: &VertexCombo) -> i64 {
        dot(&self.mu0, v) + self.mu0_const
    }

    /// Coefficient of `4/f` in μ.
    pub fn mu1_at(&self, v: &VertexCombo) -> i64 {
        dot(&self.mu1, v)
    }

    pub fn mu_at(&self, v: &VertexCombo, f: u32) -> Rat {
        rint(self.mu0_at(v)) + rint(4 * self.mu1_at(v)) / rint(f as i64)
    }

    pub fn holds(&self, v: &VertexCombo, f: u32) -> bool {
        self.lambda_at(v) == 0 && self.mu0_at(v) * f as i64 + 4 * self.mu1_at(v) == 0
    }

    /// The unique `f` forced by `v`, when μ depends on `f` at `v`.
    pub fn forced_f(&self, v: &VertexCombo) -> Option<Rat> {
        let (a, b) = (self.mu0_at(v), self.mu1_at(v));
        (a != 0).then(|| rint(-4 * b) / rint(a))
    }
}

impl fmt::Display for DiophantineCondition {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "λ = {}, μ = {} + (4/f)({})",
            form(&self.lambda, 0),
            form(&self.mu0, self.mu0_const),
            form(&self.mu1, 0)
        )
    }
}

/// Integer linear form in `m, n, k, l` as text.
pub fn form(c: &[i64; 4], k: i64) -> String {
    let mut s = String::new();
    for (x, name) in c.iter().zip(["m", "n", "k", "l"]) {
        if *x == 0 {
            continue;
        }
        let sign = if *x < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let mag = x.abs();
        if mag == 1 {
            s.push_str(&format!("{sign}{name}"));
        } else {
            s.push_str(&format!("{sign}{mag}{name}"));
        }
    }
    if k != 0 || s.is_empty() {
        if s.is_empty() {
            s = k.to_string();
        } else if k < 0 {
            s.push_str(&format!("-{}", -k));
        } else {
            s.push_str(&format!("+{k}"));
        }
    }
    s
}

fn lcm_denoms(xs: &[Rat]) -> num_bigint::BigInt {
    xs.iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn to_i64s(xs: &[Rat], scale: &num_bigint::BigInt, g: &num_bigint::BigInt) -> Vec<i64> {
    xs.iter()
        .map(|x| (x * Rat::from_integer(scale.clone())).to_integer() / g)
        .map(|n| n.to_i64().expect("small coefficient"))
        .collect()
}

/// Integer primitive form of a rational vector.
fn primitive(xs: &[Rat]) -> Vec<i64> {
    let scale = lcm_denoms(xs);
    let ints: Vec<num_bigint::BigInt> =
        xs.iter().map(|x| (x * Rat::from_integer(scale.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { num_bigint::BigInt::one() } else { g };
    to_i64s(xs, &scale, &g)
}

/// The two non-rationality conditions for a pair.
///
/// λ is the primitive normal of the three fixed rows. μ comes from the angle
/// solution `p + q·(1/f)` with the last coordinate that λ involves set to zero.
pub fn nonrationality_conditions(pair: &CandidatePair) -> Result<DiophantineCondition, DiophantineError> {
    let sys = AngleSumSystem::new(pair);
    let row = |v: &VertexCombo| v.as_array().iter().map(|&e| rint(e as i64)).collect::<Vec<Rat>>();
    let a = vec![vec![Rat::one(); 4], row(&sys.first), row(&sys.second)];
    let degenerate = || DiophantineError::DegeneratePair(pair.to_string());
    let hom = solve_affine(&a, &[Rat::zero(), Rat::zero(), Rat::zero()]).ok_or_else(degenerate)?;
    if hom.null_basis.len() != 1 {
        return Err(degenerate());
    }
    let mut w = primitive(&hom.null_basis[0]);
    if w.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        w.iter_mut().for_each(|x| *x = -*x);
    }
    let j = (0..4).rev().find(|&i| w[i] != 0).expect("nonzero normal");
    let mut a_ext = a.clone();
    let mut pin = vec![Rat::zero(); 4];
    pin[j] = Rat::one();
    a_ext.push(pin);
    // Solve at 1/f = 0 and 1/f = 1; the solution is affine in 1/f.
    let solve_at = |t: i64| {
        let b = vec![rint(2) + rint(4 * t), rint(2), rint(2), Rat::zero()];
        solve_affine(&a_ext, &b).map(|s| s.particular)
    };
    let p = solve_at(0).ok_or_else(degenerate)?;
    let p1 = solve_at(1).ok_or_else(degenerate)?;
    // μ = v·p − 2 + (1/f)(v·q) = v·p − 2 + (4/f)(v·q/4).
    let q4: Vec<Rat> = (0..4).map(|i| (&p1[i] - &p[i]) / rint(4)).collect();
    let mut all: Vec<Rat> = p.clone();
    all.push(rint(-2));
    all.extend(q4.iter().cloned());
    let ints = primitive(&all);
    Ok(DiophantineCondition {
        lambda: [w[0], w[1], w[2], w[3]],
        mu0: [ints[0], ints[1], ints[2], ints[3]],
        mu0_const: ints[4],
        mu1: [ints[5], ints[6], ints[7], ints[8]],
    })
}

/// Sign of the `1/f` group, which splits the solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FCase {
    /// μ vanishes identically at the vertex, for every `f`.
    Zero,
    /// `1/f` coefficient positive, `f`-free part negative.
    Positive,
    /// `1/f` coefficient negative, `f`-free part positive.
    Negative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseSolutions {
    pub case: FCase,
    pub finite: Vec<VertexCombo>,
    pub rays: Vec<VertexRay>,
    /// `f` as a function of the exponents, or `"any"`.
    pub f_expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexFamily {
    pub threshold: u32,
    pub cases: Vec<CaseSolutions>,
}

impl VertexFamily {
    pub fn finite(&self) -> Vec<VertexCombo> {
        self.cases.iter().flat_map(|c| c.finite.iter().copied()).collect()
    }

    pub fn rays(&self) -> Vec<VertexRay> {
        self.cases.iter().flat_map(|c| c.rays.iter().copied()).collect()
    }

    /// Members that satisfy the conditions at `f`.
    pub fn instantiate(&self, cond: &DiophantineCondition, f: u32) -> Vec<VertexCombo> {
        let mut out = BTreeSet::new();
        for c in &self.cases {
            for v in &c.finite {
                if cond.holds(v, f) {
                    out.insert(*v);
                }
            }
            for r in &c.rays {
                for t in r.t_min..=EXPONENT_CAP {
                    let v = r.at(t);
                    if v.as_array().iter().any(|&e| e > EXPONENT_CAP) {
                        break;
                    }
                    if cond.holds(&v, f) {
                        out.insert(v);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

fn case_of(cond: &DiophantineCondition, v: &VertexCombo, threshold: u32) -> Option<FCase> {
    if cond.lambda_at(v) != 0 || v.degree() < 3 {
        return None;
    }
    let (a, b) = (cond.mu0_at(v), cond.mu1_at(v));
    let t = threshold as i64;
    if a == 0 && b == 0 {
        Some(FCase::Zero)
    } else if b > 0 && a < 0 && 4 * b + t * a >= 0 {
        Some(FCase::Positive)
    } else if b < 0 && a > 0 && 4 * b + t * a <= 0 {
        Some(FCase::Negative)
    } else {
        None
    }
}

/// Nonnegative integer points of `λ = 0` with exponents up to `cap`.
fn lambda_points(cond: &DiophantineCondition, cap: u32) -> Vec<VertexCombo> {
    let w = cond.lambda;
    let mut out = Vec::new();
    for m in 0..=cap {
        for n in 0..=cap {
            for k in 0..=cap {
                let part = w[0] * m as i64 + w[1] * n as i64 + w[2] * k as i64;
                if w[3] == 0 {
                    if part == 0 {
                        out.extend((0..=cap).map(|l| VertexCombo::new(m, n, k, l)));
                    }
                } else if (-part) % w[3] == 0 {
                    let l = -part / w[3];
                    if (0..=cap as i64).contains(&l) {
                        out.push(VertexCombo::new(m, n, k, l as u32));
                    }
                }
            }
        }
    }
    out
}

/// Minimal nonnegative directions keeping the case conditions along the ray.
fn ray_directions(cond: &DiophantineCondition, case: FCase) -> Vec<VertexCombo> {
    const D: u32 = 6;
    let hom0 = |d: &VertexCombo| dot(&cond.mu0, d);
    let mut cands: Vec<VertexCombo> = lambda_points(cond, D)
        .into_iter()
        .filter(|d| d.degree() > 0 && hom0(d) == 0)
        .filter(|d| {
            let b = cond.mu1_at(d);
            match case {
                FCase::Zero => b == 0,
                FCase::Positive => b >= 0,
                FCase::Negative => b <= 0,
            }
        })
        .filter(|d| d.as_array().iter().fold(0u32, |g, &e| g.gcd(&e)) == 1)
        .collect();
    cands.sort();
    let le = |a: &VertexCombo, b: &VertexCombo| a.as_array().iter().zip(b.as_array()).all(|(x, y)| *x <= y);
    let minimal: Vec<VertexCombo> =
        cands.iter().filter(|d| !cands.iter().any(|e| e != *d && le(e, d))).copied().collect();
    minimal
}

/// Solves the non-rationality conditions over nonnegative integers, split by the sign of the `1/f` group.
pub fn solve_vertex_families(cond: &DiophantineCondition, threshold: u32) -> VertexFamily {
    let cap = EXPONENT_CAP;
    let points = lambda_points(cond, cap);
    let mut cases = Vec::new();
    for case in [FCase::Zero, FCase::Positive, FCase::Negative] {
        let sols: BTreeSet<VertexCombo> =
            points.iter().filter(|v| case_of(cond, v, threshold) == Some(case)).copied().collect();
        let dirs = ray_directions(cond, case);
        let mut covered: BTreeSet<VertexCombo> = BTreeSet::new();
        let mut rays = Vec::new();
        for d in &dirs {
            for v in &sols {
                let next = add(v, d);
                if !next.as_array().iter().all(|&e| e <= cap) || !sols.contains(&next) {
                    continue;
                }
                if sub(v, d).is_some_and(|p| sols.contains(&p)) {
                    continue;
                }
                rays.push(VertexRay { base: *v, dir: *d, t_min: 0 });
                let mut cur = *v;
                while sols.contains(&cur) {
                    covered.insert(cur);
                    cur = add(&cur, d);
                }
            }
        }
        let finite: Vec<VertexCombo> = sols.iter().filter(|v| !covered.contains(v)).copied().collect();
        let f_expr = match case {
            FCase::Zero => "any".to_string(),
            _ => {
                // f = T + (4μ1 + Tμ0)/(−μ0)
                let t = threshold as i64;
                let num: [i64; 4] = [0, 1, 2, 3].map(|i| 4 * cond.mu1[i] + t * cond.mu0[i]);
                let den: [i64; 4] = cond.mu0.map(|x| -x);
                format!("f = {t} + ({})/({})", form(&num, t * cond.mu0_const), form(&den, -cond.mu0_const))
            }
        };
        if !finite.is_empty() || !rays.is_empty() {
            cases.push(CaseSolutions { case, finite, rays, f_expr });
        }
    }
    VertexFamily { threshold, cases }
}

fn add(a: &VertexCombo, b: &VertexCombo) -> VertexCombo {
    let (x, y) = (a.as_array(), b.as_array());
    VertexCombo::from_array([0, 1, 2, 3].map(|i| x[i] + y[i]))
}

fn sub(a: &VertexCombo, b: &VertexCombo) -> Option<VertexCombo> {
    let (x, y) = (a.as_array(), b.as_array());
    let mut r = [0u32; 4];
    for i in 0..4 {
        r[i] = x[i].checked_sub(y[i])?;
    }
    Some(VertexCombo::from_array(r))
}

/// Every vertex satisfying both conditions at `f`, by direct search. Test oracle.
pub fn brute_force_vertices(cond: &DiophantineCondition, f: u32, bound: u32) -> Vec<VertexCombo> {
    let mut out = Vec::new();
    for m in 0..=bound {
        for n in 0..=bound {
            for k in 0..=bound {
                for l in 0..=bound {
                    let v = VertexCombo::new(m, n, k, l);
                    if v.degree() >= 3 && cond.holds(&v, f) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// One AVC of the non-rational branch without αγδ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonRationalAvc {
    pub f: u32,
    pub pair: CandidatePair,
    pub avc: Avc,
    pub counts: Vec<u64>,
}

fn family_cache() -> &'static Vec<(CandidatePair, DiophantineCondition, VertexFamily)> {
    static CACHE: std::sync::OnceLock<Vec<(CandidatePair, DiophantineCondition, VertexFamily)>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(|| {
        all_pairs()
            .into_iter()
            .filter_map(|p| {
                let c = nonrationality_conditions(&p).ok()?;
                let fam = solve_vertex_families(&c, p.threshold);
                Some((p, c, fam))
            })
            .collect()
    })
}

/// Conditions and solved families for every candidate pair.
pub fn pair_families() -> Vec<(CandidatePair, DiophantineCondition, VertexFamily)> {
    family_cache().clone()
}

/// Feasible AVCs at `f` without αγδ, merged up to the α↔β, γ↔δ symmetry.
///
/// Vertices need degree ≥ 3, an even number of b-edge angles and degree at
/// most `f − 3`; AVCs that fail the global count with the pair required are dropped.
pub fn classify_nonrational(f: u32) -> Vec<NonRationalAvc> {
    let mut out: Vec<NonRationalAvc> = Vec::new();
    if f < 8 || f % 2 == 1 {
        return out;
    }
    for (pair, cond, fam) in family_cache() {
        if f < pair.threshold {
            continue;
        }
        let verts: Vec<VertexCombo> = fam
            .instantiate(cond, f)
            .into_iter()
            .filter(|v| (v.k + v.l) % 2 == 0 && v.degree() + 3 <= f)
            .collect();
        if !verts.contains(&pair.first) || !verts.contains(&pair.second) {
            continue;
        }
        let req: Vec<bool> = verts.iter().map(|v| *v == pair.first || *v == pair.second).collect();
        let Ok(Some(counts)) = count_feasibility(&verts, &req, f) else { continue };
        let avc = Avc::from_vertices(verts);
        let sw = avc.swapped();
        if out.iter().any(|o| o.avc == avc || o.avc == sw) {
            continue;
        }
        out.push(NonRationalAvc { f, pair: *pair, avc, counts });
    }
    out
}

/// Which of α, γ, δ are non-rational when αγδ is a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NonRationalSplit {
    GammaDelta,
    AlphaGamma,
    AlphaDelta,
    AlphaGammaDelta,
}

/// A family row for the αγδ branch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgdFamily {
    pub tiling: String,
    pub avc: AvcPattern,
}

/// Vertex shapes allowed in each split, as patterns; `β = 4π/f` and `α + γ + δ = 2π`.
///
/// Non-rational angles whose sum is rational must appear equally often at a vertex.
pub fn agd_split_avc(split: NonRationalSplit) -> AvcPattern {
    let s = match split {
        NonRationalSplit::GammaDelta => "{αγδ, α^m, α^mβ^n, β^n, β^nγ^kδ^k, γ^kδ^k}",
        // α²⋯ carries no γ, so equal α and γ counts leave only αγδ besides β^{f/2}.
        NonRationalSplit::AlphaGamma | NonRationalSplit::AlphaDelta | NonRationalSplit::AlphaGammaDelta => {
            "{αγδ, β^{f/2}}"
        }
    };
    AvcPattern::parse(s).expect("static pattern")
}

/// Checks that a concrete vertex respects the equal-count rule of a split.
pub fn equal_count_ok(split: NonRationalSplit, v: &VertexCombo) -> bool {
    match split {
        NonRationalSplit::GammaDelta => v.k == v.l,
        NonRationalSplit::AlphaGamma => v.m == v.k,
        NonRationalSplit::AlphaDelta => v.m == v.l,
        NonRationalSplit::AlphaGammaDelta => v.m == v.k && v.k == v.l,
    }
}

/// Tiling families of the αγδ branch with non-rational angles.
///
/// The split analysis yields `{αγδ, β^{f/2}}` and the larger AVC of the
/// γ, δ split; the flip modifications are the three-vertex sub-AVCs of the latter
/// that the earth map flips realise.
pub fn classify_nonrational_agd() -> Vec<AgdFamily> {
    let rows = [
        ("E", "{αγδ, β^{f/2}}"),
        ("E'", "{αγδ, α^m, β^nγδ}"),
        ("E'", "{αγδ, α^mβ^n, β^nγδ}"),
        ("E''", "{αγδ, αβ^n, γ^kδ^k}"),
        ("E''", "{αγδ, αβ^n, β^nγ^kδ^k}"),
    ];
    rows.iter()
        .map(|(t, s)| AgdFamily { tiling: t.to_string(), avc: AvcPattern::parse(s).expect("static pattern") })
        .collect()
}

/// True when every vertex of `sub` is an instance of some vertex in `sup`, treating
/// free exponents of `sub` as instances of free exponents of `sup`.
pub fn pattern_refines(sub: &AvcPattern, sup: &AvcPattern) -> bool {
    use crate::vertex_enum::PatExp;
    sub.vertices.iter().all(|p| {
        sup.vertices.iter().any(|q| {
            p.exps.iter().zip(q.exps.iter()).all(|(a, b)| match (a, b) {
                (PatExp::Fixed(x), PatExp::Fixed(y)) => x == y,
                (PatExp::Fixed(x), PatExp::Var(_)) => *x >= 1,
                (PatExp::Var(_), PatExp::Var(_)) => true,
                (PatExp::Affine { .. }, PatExp::Var(_)) => true,
                (a, b) => a == b,
            })
        })
    })
}

/// Whether the sign split leaves only integer `f`; used for reports.
pub fn f_value(cond: &DiophantineCondition, v: &VertexCombo) -> Option<u32> {
    let r = cond.forced_f(v)?;
    if r.is_integer() && r.is_positive() {
        r.to_integer().to_u32()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str, t: u32) -> CandidatePair {
        CandidatePair { first: VertexCombo::parse(a).unwrap(), second: VertexCombo::parse(b).unwrap(), threshold: t }
    }

    #[test]
    fn worked_example_degree3() {
        let c = nonrationality_conditions(&pair("αδ²", "βγ²", 8)).unwrap();
        assert_eq!(c.lambda, [2, -2, 1, -1]);
        assert_eq!((c.mu0, c.mu0_const, c.mu1), ([2, -2, 2, 0], -2, [0, 2, -1, 0]));
        let fam = solve_vertex_families(&c, 8);
        let finite: BTreeSet<_> = fam.finite().into_iter().collect();
        assert_eq!(finite, [VertexCombo::new(1, 0, 0, 2), VertexCombo::new(0, 1, 2, 0)].into_iter().collect());
        let rays = fam.rays();
        assert_eq!(rays.len(), 1);
        assert_eq!(rays[0].dir, VertexCombo::new(1, 1, 0, 0));
        assert_eq!(rays[0].base, VertexCombo::new(2, 2, 0, 0));
    }

    #[test]
    fn worked_example_degree4() {
        let c = nonrationality_conditions(&pair("αβ²", "γ²δ²", 16)).unwrap();
        assert_eq!(c.lambda.map(|x| x.abs()), [0, 0, 1, 1]);
        // (n + k − 2) + (4/f)(2m − n), up to sign.
        let s = if c.mu0_const < 0 { 1 } else { -1 };
        assert_eq!((c.mu0.map(|x| x * s), c.mu0_const * s, c.mu1.map(|x| x * s)), ([0, 1, 1, 0], -2, [2, -1, 0, 0]));
    }

    #[test]
    fn repeated_row_is_trivial() {
        let p = pair("α³", "βδ²", 8);
        let c = nonrationality_conditions(&p).unwrap();
        for f in [8, 12, 40] {
            assert!(c.holds(&p.first, f) && c.holds(&p.second, f));
        }
    }

    #[test]
    fn family_matches_oracle_at_24() {
        for (p, c, fam) in pair_families() {
            let a: Vec<_> = fam.instantiate(&c, 24);
            let b = brute_force_vertices(&c, 24, 24);
            let a: Vec<_> = a.into_iter().filter(|v| v.as_array().iter().all(|&e| e <= 24)).collect();
            if 24 >= p.threshold {
                assert_eq!(a, b, "pair {p}");
            }
        }
    }
}
