//! Rational angle assignments.
//!
//! Candidate angles come from three sources: the trivial (Type I) relations
//! between angles, the one-parameter (Type II) solution of
//! `sin x1 sin x2 = sin x3 sin x4`, and the fifteen sporadic (Type III)
//! solutions. Each solution is matched against the recalibration rows of a
//! range case, combined with the quadrilateral angle sum and the vertex sums
//! of a candidate pair, and solved exactly. Families that stay free in `f` are
//! kept as affine expressions in `1/f` and instantiated on demand.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact_angles::{format_pi, rat, rat_to_f64, rint, AngleExpr, Rat};
use crate::linalg::solve_affine;
use crate::vertex_enum::{
    balance_filter, count_feasibility, counting_filter, enumerate_vertices, AngleSet, Avc, EnumFilters,
    VertexCombo,
};

/// Sporadic rational solutions `(x1, x2, x3, x4)` in π units, each in `[0, 1/2]`.
/// Row 13 carries the corrected `x2 = 7/15`.
pub const MYERSON_ROWS: [[(i64, i64); 4]; 15] = [
    [(1, 21), (8, 21), (1, 14), (3, 14)],
    [(1, 14), (5, 14), (2, 21), (5, 21)],
    [(4, 21), (10, 21), (3, 14), (5, 14)],
    [(1, 20), (9, 20), (1, 15), (4, 15)],
    [(2, 15), (7, 15), (3, 20), (7, 20)],
    [(1, 30), (3, 10), (1, 15), (2, 15)],
    [(1, 15), (7, 15), (1, 10), (7, 30)],
    [(1, 10), (13, 30), (2, 15), (4, 15)],
    [(4, 15), (7, 15), (3, 10), (11, 30)],
    [(1, 30), (11, 30), (1, 10), (1, 10)],
    [(7, 30), (13, 30), (3, 10), (3, 10)],
    [(1, 15), (4, 15), (1, 10), (1, 6)],
    [(2, 15), (7, 15), (1, 6), (3, 10)],
    [(1, 12), (5, 12), (1, 10), (3, 10)],
    [(1, 10), (3, 10), (1, 6), (1, 6)],
];

/// Symmetries of `sin x1 sin x2 = sin x3 sin x4`; entry `p` maps `x` to `(x[p0], x[p1], x[p2], x[p3])`.
pub const PERMUTATIONS: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 0, 1],
    [2, 3, 1, 0],
    [3, 2, 1, 0],
];

/// One-parameter solutions `(π/6, θ, θ/2, π/2 − θ/2)` as `(θ coefficient, constant)`.
pub const TYPE_II: [((i64, i64), (i64, i64)); 4] = [((0, 1), (1, 6)), ((1, 1), (0, 1)), ((1, 2), (0, 1)), ((-1, 2), (1, 2))];

pub fn myerson_tuple(row: usize) -> [Rat; 4] {
    MYERSON_ROWS[row].map(|(n, d)| rat(n, d))
}

pub fn permute<T: Clone>(x: &[T; 4], p: usize) -> [T; 4] {
    let q = PERMUTATIONS[p];
    [x[q[0]].clone(), x[q[1]].clone(), x[q[2]].clone(), x[q[3]].clone()]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfCheckReport {
    pub rows_checked: usize,
    pub type_ii_checked: usize,
    pub max_residual: f64,
    pub failures: Vec<String>,
}

/// Residual `sin x1 sin x2 − sin x3 sin x4` for π-unit inputs.
pub fn sine_residual(x: &[f64; 4]) -> f64 {
    let s = |v: f64| (v * PI).sin();
    s(x[0]) * s(x[1]) - s(x[2]) * s(x[3])
}

/// Checks every sporadic row under every symmetry, and the one-parameter identity on `θ = kπ/120`.
pub fn myerson_self_check() -> SelfCheckReport {
    let mut rep = SelfCheckReport { rows_checked: 0, type_ii_checked: 0, max_residual: 0.0, failures: vec![] };
    for row in 0..MYERSON_ROWS.len() {
        let x = myerson_tuple(row).map(|r| rat_to_f64(&r));
        for p in 0..PERMUTATIONS.len() {
            let r = sine_residual(&permute(&x, p)).abs();
            rep.rows_checked += 1;
            rep.max_residual = rep.max_residual.max(r);
            if r >= 1e-12 {
                rep.failures.push(format!("row {} perm {p}: {r:e}", row + 1));
            }
        }
    }
    for k in 0..=60 {
        let th = k as f64 / 120.0;
        let x = [1.0 / 6.0, th, th / 2.0, 0.5 - th / 2.0];
        for p in 0..PERMUTATIONS.len() {
            let r = sine_residual(&permute(&x, p)).abs();
            rep.type_ii_checked += 1;
            rep.max_residual = rep.max_residual.max(r);
            if r >= 1e-12 {
                rep.failures.push(format!("type II θ={k}π/120 perm {p}: {r:e}"));
            }
        }
    }
    rep
}

/// Which angle, if any, is at least π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RangeCase {
    AllBelowPi,
    AlphaGePi,
    BetaGePi,
    GammaGePi,
    DeltaGePi,
}

pub const CASES: [RangeCase; 5] =
    [RangeCase::AllBelowPi, RangeCase::AlphaGePi, RangeCase::BetaGePi, RangeCase::GammaGePi, RangeCase::DeltaGePi];

impl RangeCase {
    pub fn holds(&self, a: &[Rat; 4]) -> bool {
        let one = Rat::one();
        let big: Vec<bool> = a.iter().map(|x| *x >= one).collect();
        let idx = match self {
            RangeCase::AllBelowPi => return big.iter().all(|b| !b),
            RangeCase::AlphaGePi => 0,
            RangeCase::BetaGePi => 1,
            RangeCase::GammaGePi => 2,
            RangeCase::DeltaGePi => 3,
        };
        (0..4).all(|i| big[i] == (i == idx))
    }
}

/// `Σ coef·angle + c` with all terms in π units.
#[derive(Clone, Debug, PartialEq)]
pub struct Lin {
    pub coef: [Rat; 4],
    pub c: Rat,
}

fn lin(c: [(i64, i64); 4], k: (i64, i64)) -> Lin {
    Lin { coef: c.map(|(n, d)| rat(n, d)), c: rat(k.0, k.1) }
}

impl Lin {
    pub fn eval(&self, a: &[Rat; 4]) -> Rat {
        self.coef.iter().zip(a).fold(self.c.clone(), |s, (c, x)| s + c * x)
    }
}

const H: (i64, i64) = (1, 2);
const MH: (i64, i64) = (-1, 2);
const O: (i64, i64) = (0, 1);
const P1: (i64, i64) = (1, 1);
const M1: (i64, i64) = (-1, 1);

fn x_g_minus_half_a() -> Lin {
    lin([MH, O, P1, O], O)
}
fn x_half_a_minus_g() -> Lin {
    lin([H, O, M1, O], O)
}
fn x_pi_plus_half_a_minus_g() -> Lin {
    lin([H, O, M1, O], P1)
}
fn x_half_b() -> Lin {
    lin([O, H, O, O], O)
}
fn x_half_a() -> Lin {
    lin([H, O, O, O], O)
}
fn x_d_minus_half_b() -> Lin {
    lin([O, MH, O, P1], O)
}
fn x_half_b_minus_d() -> Lin {
    lin([O, H, O, M1], O)
}
fn x_pi_plus_half_b_minus_d() -> Lin {
    lin([O, H, O, M1], P1)
}
fn x_pi_minus_half_a() -> Lin {
    lin([MH, O, O, O], P1)
}
fn x_pi_minus_half_b() -> Lin {
    lin([O, MH, O, O], P1)
}

/// Recalibration rows `(x1, x2, x3, x4)` for a range case.
pub fn recalibration_rows(case: RangeCase) -> Vec<[Lin; 4]> {
    use RangeCase::*;
    match case {
        AllBelowPi => vec![
            [x_g_minus_half_a(), x_half_b(), x_half_a(), x_d_minus_half_b()],
            [x_half_a_minus_g(), x_half_b(), x_half_a(), x_half_b_minus_d()],
            [x_g_minus_half_a(), x_half_b(), x_half_a(), x_pi_plus_half_b_minus_d()],
            [x_pi_plus_half_a_minus_g(), x_half_b(), x_half_a(), x_d_minus_half_b()],
            [x_pi_plus_half_a_minus_g(), x_half_b(), x_half_a(), x_pi_plus_half_b_minus_d()],
        ],
        AlphaGePi => vec![
            [x_g_minus_half_a(), x_half_b(), x_pi_minus_half_a(), x_d_minus_half_b()],
            [x_g_minus_half_a(), x_half_b(), x_pi_minus_half_a(), x_pi_plus_half_b_minus_d()],
            [lin([MH, O, P1, O], P1), x_half_b(), x_pi_minus_half_a(), x_half_b_minus_d()],
            [x_half_a_minus_g(), x_half_b(), x_pi_minus_half_a(), x_half_b_minus_d()],
        ],
        BetaGePi => vec![
            [x_g_minus_half_a(), x_pi_minus_half_b(), x_half_a(), x_d_minus_half_b()],
            [x_pi_plus_half_a_minus_g(), x_pi_minus_half_b(), x_half_a(), x_d_minus_half_b()],
            [x_half_a_minus_g(), x_pi_minus_half_b(), x_half_a(), lin([O, MH, O, P1], P1)],
            [x_half_a_minus_g(), x_pi_minus_half_b(), x_half_a(), x_half_b_minus_d()],
        ],
        GammaGePi => vec![
            [x_pi_plus_half_a_minus_g(), x_half_b(), x_half_a(), x_d_minus_half_b()],
            [x_pi_plus_half_a_minus_g(), x_half_b(), x_half_a(), x_pi_plus_half_b_minus_d()],
            [lin([MH, O, P1, O], M1), x_half_b(), x_half_a(), x_half_b_minus_d()],
            [lin([H, O, M1, O], (2, 1)), x_half_b(), x_half_a(), x_half_b_minus_d()],
        ],
        DeltaGePi => vec![
            [x_g_minus_half_a(), x_half_b(), x_half_a(), x_pi_plus_half_b_minus_d()],
            [x_pi_plus_half_a_minus_g(), x_half_b(), x_half_a(), x_pi_plus_half_b_minus_d()],
            [x_half_a_minus_g(), x_half_b(), x_half_a(), lin([O, MH, O, P1], M1)],
            [x_half_a_minus_g(), x_half_b(), x_half_a(), lin([O, H, O, M1], (2, 1))],
        ],
    }
}

/// Trivial-solution relations per case, each option being two equations `Lin = 0`.
pub fn type1_relations(case: RangeCase) -> Vec<[Lin; 2]> {
    use RangeCase::*;
    let halves = || [lin([P1, O, (-2, 1), O], O), lin([O, P1, O, (-2, 1)], O)];
    match case {
        AllBelowPi => vec![halves()],
        AlphaGePi | BetaGePi => {
            vec![halves(), [lin([P1, P1, O, O], (-2, 1)), lin([P1, M1, (-2, 1), (2, 1)], O)]]
        }
        GammaGePi => vec![
            [lin([O, O, P1, O], M1), lin([O, P1, O, M1], O)],
            [lin([P1, O, (-2, 1), O], (2, 1)), lin([O, P1, O, (-2, 1)], O)],
        ],
        DeltaGePi => vec![
            [lin([O, O, O, P1], M1), lin([P1, O, M1, O], O)],
            [lin([P1, O, (-2, 1), O], O), lin([O, P1, O, (-2, 1)], (2, 1))],
        ],
    }
}

/// Two vertices that a tiling without αγδ must contain, with the least admissible `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CandidatePair {
    pub first: VertexCombo,
    pub second: VertexCombo,
    /// 8, or 16/24 when the pair comes with a unique degree-3 vertex.
    pub threshold: u32,
}

impl CandidatePair {
    pub fn swapped(&self) -> Self {
        CandidatePair { first: self.first.swapped(), second: self.second.swapped(), threshold: self.threshold }
    }

    pub fn vertices(&self) -> [VertexCombo; 2] {
        [self.first, self.second]
    }
}

impl fmt::Display for CandidatePair {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{{{}, {}}}", self.first, self.second)
    }
}

fn v(s: &str) -> VertexCombo {
    VertexCombo::parse(s).expect("static vertex literal")
}

/// The candidate pairs, up to the α↔β, γ↔δ symmetry.
pub fn lemma_pairs() -> Vec<CandidatePair> {
    let mut out = Vec::new();
    let mut add = |a: &str, others: &[&str], threshold: u32| {
        for o in others {
            out.push(CandidatePair { first: v(a), second: v(o), threshold });
        }
    };
    add("α³", &["αγ²", "αδ²", "βγ²", "βδ²"], 8);
    add("α²β", &["αγ²", "αδ²", "βδ²"], 8);
    add("αδ²", &["βγ²"], 8);
    let b4 = ["γ⁴", "δ⁴", "γ³δ", "γδ³", "γ²δ²"];
    add("α³", &b4, 24);
    add("αβ²", &b4, 16);
    add("αγ²", &["α⁴", "β⁴", "δ⁴", "α³β", "αβ³", "α²β²", "α²δ²", "β²δ²", "αβδ²"], 16);
    add("αδ²", &["α⁴", "β⁴", "γ⁴", "α³β", "αβ³", "α²β²", "α²γ²", "β²γ²", "αβγ²"], 16);
    out
}

/// The candidate pairs together with their symmetric images.
pub fn all_pairs() -> Vec<CandidatePair> {
    let base = lemma_pairs();
    let mut out = base.clone();
    let key = |p: &CandidatePair| {
        let mut s = [p.first, p.second];
        s.sort();
        s
    };
    let mut seen: BTreeSet<[VertexCombo; 2]> = base.iter().map(key).collect();
    for p in &base {
        let q = p.swapped();
        if seen.insert(key(&q)) {
            out.push(q);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SolutionType {
    TypeI { relation: usize },
    TypeII { perm: usize, recal: usize },
    TypeIII { row: usize, perm: usize, recal: usize },
}

impl fmt::Display for SolutionType {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionType::TypeI { relation } => write!(out, "I(rel {})", relation + 1),
            SolutionType::TypeII { perm, recal } => write!(out, "II(perm {}, recal {})", perm + 1, recal + 1),
            SolutionType::TypeIII { row, perm, recal } => {
                write!(out, "III(row {}, perm {}, recal {})", row + 1, perm + 1, recal + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PairTag {
    Pair(CandidatePair),
    AlphaGammaDelta,
}

impl fmt::Display for PairTag {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairTag::Pair(p) => write!(out, "{p}"),
            PairTag::AlphaGammaDelta => write!(out, "{{αγδ}}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FConstraint {
    Fixed(u32),
    /// Angles are affine in `1/f`; admissible `f` are found by validation per value.
    Family,
}

/// Candidate angles with their origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleAssignment {
    pub angles: [AngleExpr; 4],
    pub f: FConstraint,
    pub kind: SolutionType,
    pub case: RangeCase,
    pub pair: PairTag,
}

impl AngleAssignment {
    /// Exact angles at `f`, when `f` is compatible.
    pub fn at(&self, f: u32) -> Option<[Rat; 4]> {
        match self.f {
            FConstraint::Fixed(g) if g != f => None,
            _ => Some(self.angles.clone().map(|a| a.exact_at(f).expect("affine angle"))),
        }
    }
}

/// Outcome of one exact solve, angles as `c0 + c1·t` with `t = 1/f`.
#[derive(Clone, Debug, PartialEq)]
enum Raw {
    Fixed { angles: [Rat; 4], t: Rat },
    Family { c0: [Rat; 4], c1: [Rat; 4] },
}

/// Solves rows over variables `(α, β, γ, δ, [θ], t)`; `t` is always last.
fn solve_rows(rows: &[(Vec<Rat>, Rat)]) -> Option<Raw> {
    let a: Vec<Vec<Rat>> = rows.iter().map(|r| r.0.clone()).collect();
    let b: Vec<Rat> = rows.iter().map(|r| r.1.clone()).collect();
    let sol = solve_affine(&a, &b)?;
    let n = a[0].len();
    let tcol = n - 1;
    let angles = |v: &Vec<Rat>| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()];
    match sol.null_basis.len() {
        0 => Some(Raw::Fixed { angles: angles(&sol.particular), t: sol.particular[tcol].clone() }),
        1 => {
            let d = &sol.null_basis[0];
            if d[tcol].is_zero() {
                // Free at fixed f: a continuum of angles, not an isolated rational solution.
                return None;
            }
            let c1: [Rat; 4] = angles(d).map(|x| x / &d[tcol]);
            let p = angles(&sol.particular);
            let pt = &sol.particular[tcol];
            let c0 = [0, 1, 2, 3].map(|i| &p[i] - pt * &c1[i]);
            Some(Raw::Family { c0, c1 })
        }
        _ => None,
    }
}

fn sum_row(nvars: usize) -> (Vec<Rat>, Rat) {
    let mut r = vec![Rat::zero(); nvars];
    for x in r.iter_mut().take(4) {
        *x = Rat::one();
    }
    r[nvars - 1] = rint(-4);
    (r, rint(2))
}

fn vertex_row(v: &VertexCombo, nvars: usize) -> (Vec<Rat>, Rat) {
    let mut r = vec![Rat::zero(); nvars];
    for (i, e) in v.as_array().iter().enumerate() {
        r[i] = rint(*e as i64);
    }
    (r, rint(2))
}

fn lin_row(l: &Lin, nvars: usize) -> (Vec<Rat>, Rat) {
    let mut r = vec![Rat::zero(); nvars];
    r[..4].clone_from_slice(&l.coef);
    (r, -l.c.clone())
}

/// Adds a vertex sum to a raw solution.
fn impose_vertex(raw: &Raw, v: &VertexCombo) -> Option<Raw> {
    let dot = |c: &[Rat; 4]| v.as_array().iter().zip(c).fold(Rat::zero(), |s, (&e, x)| s + x * rint(e as i64));
    match raw {
        Raw::Fixed { angles, .. } => (dot(angles) == rint(2)).then(|| raw.clone()),
        Raw::Family { c0, c1 } => {
            let a = dot(c1);
            let b = rint(2) - dot(c0);
            if a.is_zero() {
                b.is_zero().then(|| raw.clone())
            } else {
                let t = b / a;
                let angles = [0, 1, 2, 3].map(|i| &c0[i] + &c1[i] * &t);
                Some(Raw::Fixed { angles, t })
            }
        }
    }
}

/// Drops fixed-`f` assignments that fail validation; families are validated per `f` on instantiation.
fn admissible(a: &AngleAssignment) -> bool {
    let threshold = match &a.pair {
        PairTag::Pair(p) => p.threshold,
        PairTag::AlphaGammaDelta => 8,
    };
    match a.f {
        FConstraint::Fixed(f) => {
            validate_angles(&a.at(f).expect("fixed f"), f, Some(a.case), threshold) == Verdict::Accept
        }
        FConstraint::Family => true,
    }
}

fn to_assignment(raw: Raw, kind: SolutionType, case: RangeCase, pair: PairTag) -> Option<AngleAssignment> {
    match raw {
        Raw::Fixed { angles, t } => {
            if !t.is_positive() {
                return None;
            }
            let f = Rat::one() / t;
            if !f.is_integer() {
                return None;
            }
            let f = f.to_integer().to_u32()?;
            Some(AngleAssignment { angles: angles.map(AngleExpr::constant), f: FConstraint::Fixed(f), kind, case, pair })
        }
        Raw::Family { c0, c1 } => {
            let angles = [0, 1, 2, 3].map(|i| AngleExpr::affine(c0[i].clone(), c1[i].clone()));
            Some(AngleAssignment { angles, f: FConstraint::Family, kind, case, pair })
        }
    }
}

/// A solution of the sine equation matched against one recalibration row, before any vertex sum.
#[derive(Clone, Debug)]
struct Matched {
    kind: SolutionType,
    case: RangeCase,
    raw: Raw,
}

fn matched_solutions() -> &'static Vec<Matched> {
    static CACHE: OnceLock<Vec<Matched>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for case in CASES {
            for (ri, recal) in recalibration_rows(case).iter().enumerate() {
                for p in 0..PERMUTATIONS.len() {
                    // One-parameter family: variables (α, β, γ, δ, θ, t).
                    let entries = permute(&TYPE_II.map(|(th, c)| (rat(th.0, th.1), rat(c.0, c.1))), p);
                    let mut rows = vec![sum_row(6)];
                    for (x, (th, c)) in recal.iter().zip(entries.iter()) {
                        let (mut r, rhs) = lin_row(x, 6);
                        r[4] = -th.clone();
                        rows.push((r, rhs + c));
                    }
                    if let Some(raw) = solve_rows(&rows) {
                        out.push(Matched { kind: SolutionType::TypeII { perm: p, recal: ri }, case, raw });
                    }
                    for row in 0..MYERSON_ROWS.len() {
                        let x = permute(&myerson_tuple(row), p);
                        let mut rows = vec![sum_row(5)];
                        for (l, val) in recal.iter().zip(x.iter()) {
                            let (r, rhs) = lin_row(l, 5);
                            rows.push((r, rhs + val));
                        }
                        if let Some(raw) = solve_rows(&rows) {
                            out.push(Matched { kind: SolutionType::TypeIII { row, perm: p, recal: ri }, case, raw });
                        }
                    }
                }
            }
        }
        out
    })
}

/// Angle families from the one-parameter and sporadic solutions for a range case, before any vertex sum.
pub fn recalibrated_families(case: RangeCase) -> Vec<AngleAssignment> {
    matched_solutions()
        .iter()
        .filter(|m| m.case == case)
        .filter_map(|m| to_assignment(m.raw.clone(), m.kind.clone(), case, PairTag::AlphaGammaDelta))
        .collect()
}

fn impose_tag(raw: &Raw, tag: &PairTag) -> Option<Raw> {
    match tag {
        PairTag::Pair(p) => impose_vertex(&impose_vertex(raw, &p.first)?, &p.second),
        PairTag::AlphaGammaDelta => impose_vertex(raw, &VertexCombo::new(1, 0, 1, 1)),
    }
}

/// Trivial-solution assignments for the given vertices, over every applicable case.
pub fn type1_angle_families(tag: &PairTag) -> Vec<AngleAssignment> {
    let mut out = Vec::new();
    for case in CASES {
        for (ri, rel) in type1_relations(case).iter().enumerate() {
            let mut rows = vec![sum_row(5), lin_row(&rel[0], 5), lin_row(&rel[1], 5)];
            match tag {
                PairTag::Pair(p) => {
                    rows.push(vertex_row(&p.first, 5));
                    rows.push(vertex_row(&p.second, 5));
                }
                PairTag::AlphaGammaDelta => rows.push(vertex_row(&VertexCombo::new(1, 0, 1, 1), 5)),
            }
            if let Some(raw) = solve_rows(&rows) {
                if let Some(a) = to_assignment(raw, SolutionType::TypeI { relation: ri }, case, tag.clone()) {
                    if admissible(&a) {
                        out.push(a);
                    }
                }
            }
        }
    }
    out
}

/// One-parameter and sporadic assignments for the given vertices in one range case.
pub fn type23_angle_sets(tag: &PairTag, case: RangeCase) -> Vec<AngleAssignment> {
    matched_solutions()
        .iter()
        .filter(|m| m.case == case)
        .filter_map(|m| {
            let raw = impose_tag(&m.raw, tag)?;
            to_assignment(raw, m.kind.clone(), case, tag.clone())
        })
        .filter(admissible)
        .collect()
}

/// Why an assignment was dismissed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// `f` must be even and at least 8.
    FEvenAtLeast8,
    /// Unique degree-3 vertex needs `f ≥ 16` or `f ≥ 24`.
    FThreshold,
    AngleRange,
    ThreeDistinctValues,
    AtMostOneReflex,
    /// The range case the assignment was derived under does not hold.
    CaseHypothesis,
    /// α ≥ β iff γ ≥ δ.
    Exchange,
    /// β + π > γ + δ, δ + π > β + γ (α, β, γ < π) and the mirrored pair (α, β, δ < π).
    LuneEstimate,
    /// For γ, δ < π: α > γ iff β > δ.
    TriangleComparison,
    /// For α, β, δ < π: γ > π implies β > δ.
    ReflexGamma,
}

impl fmt::Display for Rule {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::FEvenAtLeast8 => "f even and ≥ 8",
            Rule::FThreshold => "f threshold for a unique degree-3 vertex",
            Rule::AngleRange => "angles in (0, 2π)",
            Rule::ThreeDistinctValues => "at least three distinct angle values",
            Rule::AtMostOneReflex => "at most one angle ≥ π",
            Rule::CaseHypothesis => "range case hypothesis",
            Rule::Exchange => "α ≥ β iff γ ≥ δ",
            Rule::LuneEstimate => "lune estimate",
            Rule::TriangleComparison => "α > γ iff β > δ",
            Rule::ReflexGamma => "γ > π implies β > δ",
        };
        write!(out, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Accept,
    Reject(Rule),
}

/// Geometric and combinatorial admissibility of exact angles at `f`.
pub fn validate_angles(a: &[Rat; 4], f: u32, case: Option<RangeCase>, threshold: u32) -> Verdict {
    use Verdict::Reject;
    if f % 2 == 1 || f < 8 {
        return Reject(Rule::FEvenAtLeast8);
    }
    if f < threshold {
        return Reject(Rule::FThreshold);
    }
    let zero = Rat::zero();
    let one = Rat::one();
    let two = rint(2);
    if a.iter().any(|x| *x <= zero || *x >= two) {
        return Reject(Rule::AngleRange);
    }
    let distinct: BTreeSet<&Rat> = a.iter().collect();
    if distinct.len() < 3 {
        return Reject(Rule::ThreeDistinctValues);
    }
    if a.iter().filter(|x| **x >= one).count() > 1 {
        return Reject(Rule::AtMostOneReflex);
    }
    if let Some(c) = case {
        if !c.holds(a) {
            return Reject(Rule::CaseHypothesis);
        }
    }
    let [al, be, ga, de] = a;
    if (al >= be) != (ga >= de) {
        return Reject(Rule::Exchange);
    }
    if al < &one && be < &one && ga < &one && (be + &one <= ga + de || de + &one <= be + ga) {
        return Reject(Rule::LuneEstimate);
    }
    if al < &one && be < &one && de < &one && (al + &one <= ga + de || ga + &one <= al + de) {
        return Reject(Rule::LuneEstimate);
    }
    if ga < &one && de < &one && (al > ga) != (be > de) {
        return Reject(Rule::TriangleComparison);
    }
    if al < &one && be < &one && de < &one && ga > &one && be <= de {
        return Reject(Rule::ReflexGamma);
    }
    Verdict::Accept
}

fn all_rational_assignments() -> &'static Vec<AngleAssignment> {
    static CACHE: OnceLock<Vec<AngleAssignment>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for p in all_pairs() {
            let tag = PairTag::Pair(p);
            out.extend(type1_angle_families(&tag));
            for case in CASES {
                out.extend(type23_angle_sets(&tag, case));
            }
        }
        out
    })
}

fn agd_assignments() -> &'static Vec<AngleAssignment> {
    static CACHE: OnceLock<Vec<AngleAssignment>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let tag = PairTag::AlphaGammaDelta;
        let mut out = type1_angle_families(&tag);
        for case in CASES {
            out.extend(type23_angle_sets(&tag, case));
        }
        out
    })
}

/// Curated outcome of the manual arrangement arguments for an AVC.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum CuratedNote {
    /// No tiling exists; the argument is summarised in `reason`.
    NoTilingKnown { reason: String },
    /// Reduces to a smaller AVC that is realised by the named tilings.
    ReducesTo { avc: Avc, tilings: Vec<String> },
}

/// One classified angle set at a fixed `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classified {
    pub f: u32,
    pub angles: [Rat; 4],
    pub sources: Vec<AngleAssignment>,
    pub avc: Avc,
    /// Vertices that the derivation forces to appear.
    pub required: Vec<VertexCombo>,
    /// A count vector when the AVC passes the global angle count, `None` when infeasible.
    pub counts: Option<Vec<u64>>,
    /// True when the AVC holds nothing beyond the forcing vertices.
    pub pair_only: bool,
    pub notes: Vec<CuratedNote>,
}

impl Classified {
    pub fn angle_string(&self) -> String {
        let names = ["α", "β", "γ", "δ"];
        names
            .iter()
            .zip(&self.angles)
            .map(|(n, a)| format!("{n}={}", format_pi(a)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn swap_angles(a: &[Rat; 4]) -> [Rat; 4] {
    [a[1].clone(), a[0].clone(), a[3].clone(), a[2].clone()]
}

/// Valid rational angle sets at `f` without αγδ, merged up to the α↔β, γ↔δ symmetry, with their AVCs.
pub fn classify_rational(f: u32) -> Vec<Classified> {
    let mut found: Vec<([Rat; 4], Vec<AngleAssignment>)> = Vec::new();
    for a in all_rational_assignments() {
        let Some(angles) = a.at(f) else { continue };
        let PairTag::Pair(p) = &a.pair else { continue };
        if validate_angles(&angles, f, Some(a.case), p.threshold) != Verdict::Accept {
            continue;
        }
        let swapped = swap_angles(&angles);
        if let Some(entry) = found.iter_mut().find(|(x, _)| *x == angles || *x == swapped) {
            entry.1.push(a.clone());
        } else {
            found.push((angles, vec![a.clone()]));
        }
    }
    found
        .into_iter()
        .map(|(angles, sources)| {
            // Orient the forcing pair to the stored representative.
            let required: Vec<VertexCombo> = match &sources[0].pair {
                PairTag::Pair(p) => {
                    let direct = sources[0].at(f).map(|x| x == angles).unwrap_or(false);
                    if direct { p.vertices().to_vec() } else { p.swapped().vertices().to_vec() }
                }
                PairTag::AlphaGammaDelta => vec![],
            };
            let avc = rational_avc(&angles, f);
            finish(f, angles, sources, avc, required)
        })
        .collect()
}

fn finish(f: u32, angles: [Rat; 4], sources: Vec<AngleAssignment>, avc: Avc, required: Vec<VertexCombo>) -> Classified {
    let verts: Vec<VertexCombo> = avc.vertices.iter().copied().collect();
    let req: Vec<bool> = verts.iter().map(|v| required.contains(v)).collect();
    let counts = if required.iter().all(|r| avc.vertices.contains(r)) {
        count_feasibility(&verts, &req, f).ok().flatten()
    } else {
        None
    };
    let pair_only = avc.vertices.iter().all(|v| required.contains(v));
    let notes = curated_notes(f, &avc);
    Classified { f, angles, sources, avc, required, counts, pair_only, notes }
}

/// All vertices with exact angles at `f`, Parity and the degree bound `f − 3` applied.
pub fn rational_avc(angles: &[Rat; 4], f: u32) -> Avc {
    let e = enumerate_vertices(&AngleSet::Exact(angles.clone()), &EnumFilters::for_f(f)).expect("valid angles");
    Avc::from_vertices(e.vertices)
}

/// Vertex filters that hold whenever αγδ is a vertex, iterated to a fixpoint.
pub fn agd_filter(vs: &[VertexCombo]) -> Vec<VertexCombo> {
    let mut cur: Vec<VertexCombo> = vs.to_vec();
    loop {
        let before = cur.clone();
        // α²⋯ carries neither γ nor δ.
        cur.retain(|v| v.m < 2 || !v.has_b_edge());
        // Without α²⋯, vertices with more δ than γ are αδ² or αβⁿδ².
        if !cur.iter().any(|v| v.m >= 2) {
            cur.retain(|v| v.l <= v.k || (v.m == 1 && v.k == 0 && v.l == 2));
        }
        cur = balance_filter(&cur);
        cur = counting_filter(&cur);
        if cur == before {
            return cur;
        }
    }
}

/// Vertex shapes admitted when γ = π: αγδ, α³, α²β², αβⁿ, βⁿ, βⁿγδ.
fn gamma_pi_shape(v: &VertexCombo) -> bool {
    let VertexCombo { m, n, k, l } = *v;
    (m == 1 && n == 0 && k == 1 && l == 1)
        || (m == 3 && n == 0 && k == 0 && l == 0)
        || (m == 2 && n == 2 && k == 0 && l == 0)
        || (m == 1 && k == 0 && l == 0)
        || (m == 0 && k == 0 && l == 0)
        || (m == 0 && k == 1 && l == 1)
}

/// Valid rational angle sets at `f` with αγδ as a vertex, with their AVCs.
pub fn classify_rational_agd(f: u32) -> Vec<Classified> {
    let agd = VertexCombo::new(1, 0, 1, 1);
    let mut found: Vec<([Rat; 4], Vec<AngleAssignment>)> = Vec::new();
    for a in agd_assignments() {
        let Some(angles) = a.at(f) else { continue };
        if validate_angles(&angles, f, Some(a.case), 8) != Verdict::Accept {
            continue;
        }
        if let Some(entry) = found.iter_mut().find(|(x, _)| *x == angles) {
            entry.1.push(a.clone());
        } else {
            found.push((angles, vec![a.clone()]));
        }
    }
    found
        .into_iter()
        .map(|(angles, sources)| {
            let raw = rational_avc(&angles, f);
            let mut verts = agd_filter(&raw.vertices.iter().copied().collect::<Vec<_>>());
            if angles[2] == Rat::one() {
                verts.retain(gamma_pi_shape);
            }
            let avc = Avc::from_vertices(verts);
            finish(f, angles, sources, avc, vec![agd])
        })
        .collect()
}

/// AVC reductions and eliminations established by manual arrangement arguments.
pub fn curated_notes(f: u32, avc: &Avc) -> Vec<CuratedNote> {
    let p = |s: &str| Avc::parse(s).expect("static AVC literal");
    let no = |r: &str| vec![CuratedNote::NoTilingKnown { reason: r.to_string() }];
    let facts: Vec<(u32, Avc, Vec<CuratedNote>)> = vec![
        (8, p("α³, βδ², δ⁴, α²γ², αγ⁴"), no("without β²⋯ the AVC reduces to {α³, βδ², δ⁴}, where γ cannot appear")),
        (
            16,
            p("αβ², αγ², αβδ², β⁴, β²γ², γ⁴, αδ⁴, β³δ², βγ²δ², β²δ⁴, γ²δ⁴, βδ⁶, δ⁸"),
            vec![CuratedNote::ReducesTo { avc: p("αγ², αβδ², β⁴"), tilings: vec!["S3".into(), "S'3".into()] }],
        ),
        (20, p("αβ², γδ³, α²γδ"), no("counting γ against δ removes γδ³")),
        (24, p("αβ², α⁴, γδ³, αβγ², αγ⁴"), no("reduces to {αβ², γδ³}, which fails the count of α against β")),
        (
            36,
            p("αβ², α²δ², γδ³, α³γ², αγ³δ, γ⁶"),
            vec![CuratedNote::ReducesTo { avc: p("αβ², α²δ², γδ³, αγ³δ, γ⁶"), tilings: vec!["S5".into()] }],
        ),
        (
            36,
            p("αδ², αβ³, γ³δ, α²βγ², α⁶"),
            vec![CuratedNote::ReducesTo { avc: p("αδ², αβ³, γ³δ, α²βγ²"), tilings: vec!["S6".into()] }],
        ),
        (60, p("αβ², γδ³, α³β, α⁵, βγ⁴, α²γ⁴"), no("without α²⋯ the vertex γδ³ cannot be arranged")),
        (84, p("αβ², γδ³, α³γδ, γ⁵δ"), no("no ααα arrangement, so γδ³ cannot be arranged")),
        (132, p("αβ², γδ³, α⁴γ², αγ⁶"), no("no ααα arrangement, so γδ³ cannot be arranged")),
    ];
    let sw = avc.swapped();
    facts
        .into_iter()
        .filter(|(g, a, _)| *g == f && (a.vertices == avc.vertices || a.vertices == sw.vertices))
        .flat_map(|(_, _, n)| n)
        .collect()
}

/// Value in π units as a float, for reports.
pub fn pi_units(a: &Rat) -> f64 {
    rat_to_f64(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_check_passes() {
        let r = myerson_self_check();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.rows_checked, 120);
    }

    #[test]
    fn convex_type_ii_family() {
        let fam = recalibrated_families(RangeCase::AllBelowPi);
        let want = [
            AngleExpr::affine(rat(5, 6), rint(-2)),
            AngleExpr::affine(rat(1, 3), rint(4)),
            AngleExpr::affine(rat(7, 12), rint(-1)),
            AngleExpr::affine(rat(1, 4), rint(3)),
        ];
        assert!(fam.iter().any(|a| a.f == FConstraint::Family && a.angles == want));
    }

    #[test]
    fn pair_counts() {
        assert_eq!(lemma_pairs().len(), 4 + 3 + 1 + 5 + 5 + 9 + 9);
    }

    #[test]
    fn lemma_rejections() {
        // The convex one-parameter family with αγδ has α − β = δ − γ.
        let a = [rat(1, 3), rat(1, 4), rat(19, 24), rat(7, 8)];
        assert_eq!(validate_angles(&a, 16, None, 8), Verdict::Reject(Rule::Exchange));
        let a = [rat(7, 6), rat(1, 2), rat(7, 12), rat(1, 4)];
        assert_eq!(validate_angles(&a, 8, Some(RangeCase::AllBelowPi), 8), Verdict::Reject(Rule::CaseHypothesis));
        let s5 = [rat(4, 9), rat(7, 9), rat(1, 3), rat(5, 9)];
        assert_eq!(validate_angles(&s5, 36, Some(RangeCase::AllBelowPi), 16), Verdict::Accept);
    }
}
