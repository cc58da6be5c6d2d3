//! Vertex angle combinations: enumeration, Parity and Balance filtering,
//! global count feasibility, and the Euler-type degree identities.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_angles::Rat;

/// Hard cap on any single exponent.
pub const EXPONENT_CAP: u32 = 64;
/// Accept band for numeric angle sums, radians.
pub const SUM_TOL: f64 = 1e-9;
/// Upper edge of the ambiguous band, radians.
pub const AMBIGUOUS_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VertexError {
    #[error("domain error: {0}")]
    Domain(String),
}

pub const ANGLE_NAMES: [&str; 4] = ["α", "β", "γ", "δ"];

/// Exponents (m, n, k, l) of α, β, γ, δ at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexCombo {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
}

impl VertexCombo {
    pub const fn new(m: u32, n: u32, k: u32, l: u32) -> Self {
        VertexCombo { m, n, k, l }
    }

    pub fn from_array(a: [u32; 4]) -> Self {
        VertexCombo::new(a[0], a[1], a[2], a[3])
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.m, self.n, self.k, self.l]
    }

    pub fn degree(&self) -> u32 {
        self.m + self.n + self.k + self.l
    }

    /// Image under α↔β, γ↔δ.
    pub fn swapped(&self) -> Self {
        VertexCombo::new(self.n, self.m, self.l, self.k)
    }

    pub fn has_b_edge(&self) -> bool {
        self.k + self.l > 0
    }

    /// Σ exponent·angle, in π units.
    pub fn exact_sum(&self, angles: &[Rat; 4]) -> Rat {
        self.as_array()
            .iter()
            .zip(angles)
            .map(|(&e, a)| a * Rat::from_integer(BigInt::from(e)))
            .fold(Rat::zero(), |s, x| s + x)
    }

    pub fn numeric_sum(&self, angles: &[f64; 4]) -> f64 {
        self.as_array().iter().zip(angles).map(|(&e, a)| e as f64 * a).sum()
    }

    /// Parses `αβ²γδ`, `a b2 g d`, `ab2gd` and the like.
    pub fn parse(s: &str) -> Option<Self> {
        let mut counts = [0u32; 4];
        let mut current: Option<usize> = None;
        let mut digits = String::new();
        let flush = |cur: Option<usize>, digits: &mut String, counts: &mut [u32; 4]| -> Option<()> {
            if let Some(i) = cur {
                let e = if digits.is_empty() { 1 } else { digits.parse::<u32>().ok()? };
                counts[i] += e;
            } else if !digits.is_empty() {
                return None;
            }
            digits.clear();
            Some(())
        };
        for ch in s.chars() {
            let idx = match ch {
                'α' | 'a' => Some(0),
                'β' | 'b' => Some(1),
                'γ' | 'g' | 'c' => Some(2),
                'δ' | 'd' => Some(3),
                _ => None,
            };
            if let Some(i) = idx {
                flush(current, &mut digits, &mut counts)?;
                current = Some(i);
                continue;
            }
            if let Some(d) = superscript_digit(ch) {
                digits.push(d);
            } else if ch.is_ascii_digit() {
                digits.push(ch);
            } else if ch.is_whitespace() || ch == '^' {
                continue;
            } else {
                return None;
            }
        }
        flush(current, &mut digits, &mut counts)?;
        Some(VertexCombo::from_array(counts))
    }
}

fn superscript_digit(c: char) -> Option<char> {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    SUP.iter().position(|&s| s == c).map(|i| char::from(b'0' + i as u8))
}

fn superscript(n: u32) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| SUP[c.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for VertexCombo {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in ANGLE_NAMES.iter().zip(self.as_array()) {
            match e {
                0 => {}
                1 => write!(out, "{name}")?,
                _ => write!(out, "{name}{}", superscript(e))?,
            }
        }
        Ok(())
    }
}

/// Parametric family `base + t·dir` for integers `t ≥ t_min`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexRay {
    pub base: VertexCombo,
    pub dir: VertexCombo,
    pub t_min: u32,
}

impl VertexRay {
    pub fn at(&self, t: u32) -> VertexCombo {
        let b = self.base.as_array();
        let d = self.dir.as_array();
        VertexCombo::from_array([0, 1, 2, 3].map(|i| b[i] + t * d[i]))
    }
}

impl fmt::Display for VertexRay {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.base.as_array();
        let d = self.dir.as_array();
        for i in 0..4 {
            let name = ANGLE_NAMES[i];
            match (b[i], d[i]) {
                (0, 0) => {}
                (1, 0) => write!(out, "{name}")?,
                (e, 0) => write!(out, "{name}{}", superscript(e))?,
                (0, 1) => write!(out, "{name}^t")?,
                (0, s) => write!(out, "{name}^({s}t)")?,
                (e, 1) => write!(out, "{name}^(t+{e})")?,
                (e, s) => write!(out, "{name}^({s}t+{e})")?,
            }
        }
        Ok(())
    }
}

/// A set of admissible vertices, optionally with parametric families.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Avc {
    pub vertices: BTreeSet<VertexCombo>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<VertexRay>,
}

impl Avc {
    pub fn from_vertices<I: IntoIterator<Item = VertexCombo>>(it: I) -> Self {
        Avc { vertices: it.into_iter().collect(), rays: Vec::new() }
    }

    /// Parses a comma separated list such as `αδ², αβ³`.
    pub fn parse(s: &str) -> Option<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = BTreeSet::new();
        for part in inner.split(',') {
            if part.trim().is_empty() {
                continue;
            }
            out.insert(VertexCombo::parse(part)?);
        }
        Some(Avc { vertices: out, rays: Vec::new() })
    }

    pub fn swapped(&self) -> Self {
        Avc {
            vertices: self.vertices.iter().map(|v| v.swapped()).collect(),
            rays: self
                .rays
                .iter()
                .map(|r| VertexRay { base: r.base.swapped(), dir: r.dir.swapped(), t_min: r.t_min })
                .collect(),
        }
    }
}

impl fmt::Display for Avc {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = sort_for_display(&self.vertices).iter().map(|v| v.to_string()).collect();
        parts.extend(self.rays.iter().map(|r| r.to_string()));
        write!(out, "{{{}}}", parts.join(", "))
    }
}

/// Orders vertices by degree, then by exponents descending (α-heavy first).
pub fn sort_for_display(vs: &BTreeSet<VertexCombo>) -> Vec<VertexCombo> {
    let mut v: Vec<VertexCombo> = vs.iter().copied().collect();
    v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.as_array().cmp(&a.as_array())));
    v
}

/// The four angles of a tile, exact (π units) or numeric (radians).
#[derive(Clone, Debug, PartialEq)]
pub enum AngleSet {
    Exact([Rat; 4]),
    Numeric([f64; 4]),
}

impl AngleSet {
    pub fn radians(&self) -> [f64; 4] {
        match self {
            AngleSet::Exact(a) => a.clone().map(|x| crate::exact_angles::rat_to_f64(&x) * PI),
            AngleSet::Numeric(a) => *a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumFilters {
    /// Apply the Balance Lemma to the candidate set.
    pub balance: bool,
    /// Maximal vertex degree, e.g. `f − 3` from the degree identities.
    pub max_degree: Option<u32>,
    pub exponent_cap: u32,
}

impl Default for EnumFilters {
    fn default() -> Self {
        EnumFilters { balance: false, max_degree: None, exponent_cap: EXPONENT_CAP }
    }
}

impl EnumFilters {
    /// Degree cap implied by `f = 6 + Σ(h−3)v_h`: a vertex of degree `h` needs `h ≤ f − 3`.
    pub fn for_f(f: u32) -> Self {
        EnumFilters { max_degree: Some(f.saturating_sub(3)), ..Default::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Enumeration {
    pub vertices: Vec<VertexCombo>,
    /// Numeric candidates whose sum misses 2π by a residual inside the ambiguous band.
    pub ambiguous: Vec<(VertexCombo, f64)>,
}

/// All `(m, n, k, l)` with `mα + nβ + kγ + lδ = 2π`, degree ≥ 3 and `k + l` even.
pub fn enumerate_vertices(angles: &AngleSet, filters: &EnumFilters) -> Result<Enumeration, VertexError> {
    let rad = angles.radians();
    for (i, a) in rad.iter().enumerate() {
        if !(*a > 0.0 && *a < 2.0 * PI) {
            return Err(VertexError::Domain(format!("{} = {a} is outside (0, 2π)", ANGLE_NAMES[i])));
        }
    }
    let mut out = match angles {
        AngleSet::Exact(a) => Enumeration { vertices: enumerate_exact(a, filters.exponent_cap)?, ambiguous: vec![] },
        AngleSet::Numeric(a) => enumerate_numeric(a, filters.exponent_cap),
    };
    let keep = |v: &VertexCombo| v.degree() >= 3 && (v.k + v.l).is_multiple_of(2) && filters.max_degree.is_none_or(|d| v.degree() <= d);
    out.vertices.retain(keep);
    out.ambiguous.retain(|(v, _)| keep(v));
    if filters.balance {
        out.vertices = balance_filter(&out.vertices);
    }
    out.vertices.sort();
    Ok(out)
}

fn enumerate_exact(angles: &[Rat; 4], cap: u32) -> Result<Vec<VertexCombo>, VertexError> {
    let mut den = BigInt::from(1);
    for a in angles {
        if !a.is_positive() {
            return Err(VertexError::Domain("non-positive angle".into()));
        }
        den = den.lcm(a.denom());
    }
    let to_i128 = |x: BigInt| x.to_i128().ok_or_else(|| VertexError::Domain("angle denominators too large".into()));
    let a: Vec<i128> = angles
        .iter()
        .map(|x| to_i128((x * Rat::from_integer(den.clone())).to_integer()))
        .collect::<Result<_, _>>()?;
    let target = to_i128(den * 2)?;
    let bound = |x: i128| ((target / x) as u32).min(cap);
    let mut out = Vec::new();
    for m in 0..=bound(a[0]) {
        let r0 = target - m as i128 * a[0];
        for n in 0..=((r0 / a[1]) as u32).min(cap) {
            let r1 = r0 - n as i128 * a[1];
            for k in 0..=((r1 / a[2]) as u32).min(cap) {
                let r2 = r1 - k as i128 * a[2];
                if r2 % a[3] == 0 {
                    let l = r2 / a[3];
                    if l <= cap as i128 {
                        out.push(VertexCombo::new(m, n, k, l as u32));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn enumerate_numeric(angles: &[f64; 4], cap: u32) -> Enumeration {
    let target = 2.0 * PI;
    let bound = |x: f64, rem: f64| (((rem + AMBIGUOUS_TOL) / x).floor().max(0.0) as u32).min(cap);
    let mut out = Enumeration::default();
    for m in 0..=bound(angles[0], target) {
        let r0 = target - m as f64 * angles[0];
        for n in 0..=bound(angles[1], r0) {
            let r1 = r0 - n as f64 * angles[1];
            for k in 0..=bound(angles[2], r1) {
                let r2 = r1 - k as f64 * angles[2];
                let l = (r2 / angles[3]).round();
                if l < 0.0 || l > cap as f64 {
                    continue;
                }
                let v = VertexCombo::new(m, n, k, l as u32);
                let resid = (v.numeric_sum(angles) - target).abs();
                if resid < SUM_TOL {
                    out.vertices.push(v);
                } else if resid <= AMBIGUOUS_TOL {
                    out.ambiguous.push((v, resid));
                }
            }
        }
    }
    out
}

/// Balance Lemma: γ²⋯ appears iff δ²⋯ appears; without either, b-vertices have k = l = 1.
pub fn balance_filter(vs: &[VertexCombo]) -> Vec<VertexCombo> {
    let mut cur: Vec<VertexCombo> = vs.to_vec();
    loop {
        let has_k2 = cur.iter().any(|v| v.k >= 2);
        let has_l2 = cur.iter().any(|v| v.l >= 2);
        let next: Vec<VertexCombo> = cur
            .iter()
            .copied()
            .filter(|v| {
                if !has_l2 && v.k >= 2 {
                    return false;
                }
                if !has_k2 && v.l >= 2 {
                    return false;
                }
                if !has_k2 && !has_l2 && v.has_b_edge() {
                    return v.k == 1 && v.l == 1;
                }
                true
            })
            .collect();
        if next.len() == cur.len() {
            return next;
        }
        cur = next;
    }
}

/// Counting Lemma: when no vertex has more θ than φ, vertices with fewer θ than φ cannot
/// appear. Applied over all ordered angle pairs until nothing changes.
pub fn counting_filter(vs: &[VertexCombo]) -> Vec<VertexCombo> {
    let mut cur: Vec<VertexCombo> = vs.to_vec();
    loop {
        let before = cur.len();
        for t in 0..4 {
            for p in 0..4 {
                if t == p {
                    continue;
                }
                if cur.iter().all(|v| v.as_array()[t] <= v.as_array()[p]) {
                    cur.retain(|v| v.as_array()[t] == v.as_array()[p]);
                }
            }
        }
        if cur.len() == before {
            return cur;
        }
    }
}

/// Vertex multiplicities `x` with every angle counted `f` times and `Σx = f + 2`.
pub fn count_feasibility(
    vertices: &[VertexCombo],
    required: &[bool],
    f: u32,
) -> Result<Option<Vec<u64>>, VertexError> {
    if required.len() != vertices.len() {
        return Err(VertexError::Domain("required flags do not match vertex list".into()));
    }
    if vertices.iter().any(|v| v.degree() == 0) {
        return Err(VertexError::Domain("empty vertex leaves the count system unbounded".into()));
    }
    let n = vertices.len();
    // Suffix masks of which angles remain coverable and degree bounds.
    let mut suffix_mask = vec![0u8; n + 1];
    let mut suffix_dmin = vec![u32::MAX; n + 1];
    let mut suffix_dmax = vec![0u32; n + 1];
    for i in (0..n).rev() {
        let arr = vertices[i].as_array();
        let mask = (0..4).filter(|&j| arr[j] > 0).fold(0u8, |m, j| m | (1 << j));
        suffix_mask[i] = suffix_mask[i + 1] | mask;
        suffix_dmin[i] = suffix_dmin[i + 1].min(vertices[i].degree());
        suffix_dmax[i] = suffix_dmax[i + 1].max(vertices[i].degree());
    }
    let mut x = vec![0u64; n];
    let rem = [f as u64; 4];
    let ok = dfs(vertices, required, &suffix_mask, &suffix_dmin, &suffix_dmax, 0, rem, f as u64 + 2, &mut x);
    Ok(if ok { Some(x) } else { None })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    vs: &[VertexCombo],
    req: &[bool],
    mask: &[u8],
    dmin: &[u32],
    dmax: &[u32],
    i: usize,
    rem: [u64; 4],
    rem_count: u64,
    x: &mut [u64],
) -> bool {
    let total: u64 = rem.iter().sum();
    if i == vs.len() {
        return total == 0 && rem_count == 0;
    }
    let need = (0..4).filter(|&j| rem[j] > 0).fold(0u8, |m, j| m | (1 << j));
    if need & !mask[i] != 0 {
        return false;
    }
    if total < rem_count * dmin[i] as u64 || total > rem_count * dmax[i] as u64 {
        return false;
    }
    let arr = vs[i].as_array();
    let mut hi = rem_count;
    for j in 0..4 {
        if arr[j] > 0 {
            hi = hi.min(rem[j] / arr[j] as u64);
        }
    }
    let lo = if req[i] { 1 } else { 0 };
    if hi < lo {
        return false;
    }
    for c in (lo..=hi).rev() {
        let mut r = rem;
        for j in 0..4 {
            r[j] -= c * arr[j] as u64;
        }
        x[i] = c;
        if dfs(vs, req, mask, dmin, dmax, i + 1, r, rem_count - c, x) {
            return true;
        }
    }
    x[i] = 0;
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeReject {
    DegreeBelowThree(u32),
    CountMismatch { v3_expected: u64, v3_given: u64 },
    OddF(u64),
}

/// Checks `f = 6 + Σ_{h≥4}(h−3)v_h` against `v₃ = 8 + Σ_{h≥4}(h−4)v_h`; returns `f`.
pub fn check_degree_counts(hist: &BTreeMap<u32, u64>) -> Result<u64, DegreeReject> {
    let mut f = 6u64;
    let mut v3 = 8u64;
    for (&h, &count) in hist {
        if h < 3 && count > 0 {
            return Err(DegreeReject::DegreeBelowThree(h));
        }
        if h >= 4 {
            f += (h as u64 - 3) * count;
            v3 += (h as u64 - 4) * count;
        }
    }
    let given = hist.get(&3).copied().unwrap_or(0);
    if given != v3 {
        return Err(DegreeReject::CountMismatch { v3_expected: v3, v3_given: given });
    }
    if f % 2 == 1 {
        return Err(DegreeReject::OddF(f));
    }
    Ok(f)
}


/// An exponent in vertex notation with symbolic parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatExp {
    Fixed(u32),
    /// Any value ≥ 1; equal names inside one vertex take equal values.
    Var(char),
    /// `(a·f + b)/c`, present only when that is a positive integer.
    Affine { a: i64, b: i64, c: i64 },
}

impl PatExp {
    fn fmt_sup(&self) -> String {
        match *self {
            PatExp::Fixed(1) => String::new(),
            PatExp::Fixed(e) => superscript(e),
            PatExp::Var(v) => format!("^{v}"),
            PatExp::Affine { a, b, c } => {
                let head = match a {
                    1 => "f".to_string(),
                    _ => format!("{a}f"),
                };
                let num = match b.cmp(&0) {
                    std::cmp::Ordering::Equal => head,
                    std::cmp::Ordering::Greater => format!("({head}+{b})"),
                    std::cmp::Ordering::Less => format!("({head}-{})", -b),
                };
                if c == 1 {
                    format!("^{{{num}}}")
                } else {
                    format!("^{{{num}/{c}}}")
                }
            }
        }
    }

    fn parse(s: &str) -> Option<PatExp> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(e) = t.parse::<u32>() {
            return Some(PatExp::Fixed(e));
        }
        let mut chars = t.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if c.is_ascii_lowercase() && c != 'f' {
                return Some(PatExp::Var(c));
            }
        }
        let (num, den) = match t.rsplit_once('/') {
            Some((n, d)) => (n, d.parse::<i64>().ok()?),
            None => (t.as_str(), 1),
        };
        let num = num.trim_start_matches('(').trim_end_matches(')');
        let fpos = num.find('f')?;
        let a = match &num[..fpos] {
            "" => 1,
            x => x.parse::<i64>().ok()?,
        };
        let rest = &num[fpos + 1..];
        let b = if rest.is_empty() { 0 } else { rest.trim_start_matches('+').parse::<i64>().ok()? };
        Some(PatExp::Affine { a, b, c: den })
    }

    pub fn at(&self, f: u32) -> Option<u32> {
        match *self {
            PatExp::Fixed(e) => Some(e),
            PatExp::Var(_) => None,
            PatExp::Affine { a, b, c } => {
                let n = a * f as i64 + b;
                (n > 0 && n % c == 0).then(|| (n / c) as u32)
            }
        }
    }
}

/// A vertex in symbolic notation such as `α^mβ^n` or `αβ^{(f+2)/6}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPattern {
    pub exps: [PatExp; 4],
}

impl VertexPattern {
    pub fn from_combo(v: &VertexCombo) -> Self {
        VertexPattern { exps: v.as_array().map(PatExp::Fixed) }
    }

    /// Parses `α^mβ^n`, `γ^kδ^k`, `β^{f/2}`, `αβ^{(f-4)/6}δ²` and plain vertices.
    pub fn parse(s: &str) -> Option<Self> {
        let mut exps = [PatExp::Fixed(0); 4];
        let chars: Vec<char> = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
        let mut i = 0;
        while i < chars.len() {
            let idx = match chars[i] {
                'α' | 'a' => 0,
                'β' | 'b' => 1,
                'γ' | 'g' | 'c' => 2,
                'δ' | 'd' => 3,
                _ => return None,
            };
            i += 1;
            let mut e = PatExp::Fixed(1);
            if i < chars.len() && superscript_digit(chars[i]).is_some() {
                let mut d = String::new();
                while i < chars.len() {
                    match superscript_digit(chars[i]) {
                        Some(c) => d.push(c),
                        None => break,
                    }
                    i += 1;
                }
                e = PatExp::Fixed(d.parse().ok()?);
            } else if i < chars.len() && SUP_VARS.iter().any(|(c, _)| *c == chars[i]) {
                e = PatExp::Var(SUP_VARS.iter().find(|(c, _)| *c == chars[i]).unwrap().1);
                i += 1;
            } else if i < chars.len() && chars[i] == '^' {
                i += 1;
                let body: String = if chars.get(i) == Some(&'{') {
                    let end = chars[i..].iter().position(|&c| c == '}')? + i;
                    let b = chars[i + 1..end].iter().collect();
                    i = end + 1;
                    b
                } else {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_digit() || (i == start && chars[i].is_ascii_lowercase())) {
                        i += 1;
                        if !chars[start].is_ascii_digit() {
                            break;
                        }
                    }
                    chars[start..i].iter().collect()
                };
                e = PatExp::parse(&body)?;
            } else if i < chars.len() && chars[i].is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                e = PatExp::Fixed(chars[start..i].iter().collect::<String>().parse().ok()?);
            }
            if exps[idx] != PatExp::Fixed(0) {
                return None;
            }
            exps[idx] = e;
        }
        Some(VertexPattern { exps })
    }

    /// True when `v` is an instance at `f` (needed only for `f`-dependent exponents).
    pub fn matches(&self, v: &VertexCombo, f: Option<u32>) -> bool {
        let mut vars: Vec<(char, u32)> = Vec::new();
        for (p, &e) in self.exps.iter().zip(v.as_array().iter()) {
            match *p {
                PatExp::Fixed(x) => {
                    if x != e {
                        return false;
                    }
                }
                PatExp::Var(name) => {
                    if e == 0 {
                        return false;
                    }
                    match vars.iter().find(|(n, _)| *n == name) {
                        Some((_, val)) if *val != e => return false,
                        Some(_) => {}
                        None => vars.push((name, e)),
                    }
                }
                PatExp::Affine { .. } => match f.and_then(|f| p.at(f)) {
                    Some(x) if x == e => {}
                    _ => return false,
                },
            }
        }
        true
    }

    /// The concrete vertex at `f`, when the pattern has no free variables.
    pub fn at(&self, f: u32) -> Option<VertexCombo> {
        let mut a = [0u32; 4];
        for (i, p) in self.exps.iter().enumerate() {
            a[i] = p.at(f)?;
        }
        Some(VertexCombo::from_array(a))
    }

    pub fn swapped(&self) -> Self {
        let e = self.exps;
        VertexPattern { exps: [e[1], e[0], e[3], e[2]] }
    }
}

const SUP_VARS: [(char, char); 4] = [('ᵐ', 'm'), ('ⁿ', 'n'), ('ᵏ', 'k'), ('ˡ', 'l')];

impl fmt::Display for VertexPattern {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in ANGLE_NAMES.iter().zip(self.exps.iter()) {
            if *e != PatExp::Fixed(0) {
                write!(out, "{name}{}", e.fmt_sup())?;
            }
        }
        Ok(())
    }
}

/// An AVC in symbolic notation, e.g. `{αγδ, α^mβ^n, β^nγδ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvcPattern {
    pub vertices: Vec<VertexPattern>,
}

impl AvcPattern {
    pub fn parse(s: &str) -> Option<Self> {
        let t = s.trim();
        let inner = t.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(t);
        let mut vertices = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        for c in inner.chars() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    vertices.push(VertexPattern::parse(&cur)?);
                    cur.clear();
                    continue;
                }
                _ => {}
            }
            cur.push(c);
        }
        if !cur.trim().is_empty() {
            vertices.push(VertexPattern::parse(&cur)?);
        }
        Some(AvcPattern { vertices })
    }

    pub fn swapped(&self) -> Self {
        AvcPattern { vertices: self.vertices.iter().map(|v| v.swapped()).collect() }
    }

    /// Every vertex of `avc` is an instance of some pattern vertex.
    pub fn covers(&self, avc: &Avc, f: Option<u32>) -> bool {
        avc.vertices.iter().all(|v| self.vertices.iter().any(|p| p.matches(v, f)))
    }

    /// `covers`, and every pattern vertex has at least one instance in `avc`.
    pub fn matches_exactly(&self, avc: &Avc, f: Option<u32>) -> bool {
        self.covers(avc, f) && self.vertices.iter().all(|p| avc.vertices.iter().any(|v| p.matches(v, f)))
    }

    /// Some choice of one distinct instance per pattern vertex lies in `avc`.
    pub fn embeds_in(&self, avc: &Avc, f: Option<u32>) -> bool {
        fn go(ps: &[VertexPattern], avc: &Avc, f: Option<u32>, used: &mut Vec<VertexCombo>) -> bool {
            let Some((p, rest)) = ps.split_first() else { return true };
            for v in &avc.vertices {
                if !used.contains(v) && p.matches(v, f) {
                    used.push(*v);
                    if go(rest, avc, f, used) {
                        return true;
                    }
                    used.pop();
                }
            }
            false
        }
        go(&self.vertices, avc, f, &mut Vec::new())
    }
}

impl fmt::Display for AvcPattern {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(out, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_angles::rat;

    fn exact(a: [(i64, i64); 4]) -> AngleSet {
        AngleSet::Exact(a.map(|(n, d)| rat(n, d)))
    }

    #[test]
    fn parse_and_display() {
        let v = VertexCombo::parse("αβ²γδ").unwrap();
        assert_eq!(v, VertexCombo::new(1, 2, 1, 1));
        assert_eq!(v.to_string(), "αβ²γδ");
        assert_eq!(VertexCombo::parse("a b2 d10").unwrap(), VertexCombo::new(1, 2, 0, 10));
        assert_eq!(VertexCombo::parse("β¹⁰").unwrap().to_string(), "β¹⁰");
        assert!(VertexCombo::parse("2a").is_none());
    }

    #[test]
    fn f16_rational_row() {
        let got = enumerate_vertices(&exact([(1, 1), (1, 2), (1, 2), (1, 4)]), &EnumFilters::for_f(16)).unwrap();
        let want = Avc::parse("αβ², αγ², αβδ², β⁴, β²γ², γ⁴, αδ⁴, β³δ², βγ²δ², β²δ⁴, γ²δ⁴, βδ⁶, δ⁸").unwrap();
        assert_eq!(got.vertices.into_iter().collect::<BTreeSet<_>>(), want.vertices);
    }

    #[test]
    fn cube_degree_three() {
        let got = enumerate_vertices(&exact([(2, 3); 4]), &EnumFilters::default()).unwrap();
        assert_eq!(got.vertices.len(), 10);
        assert!(got.vertices.iter().all(|v| v.degree() == 3));
    }

    #[test]
    fn s6_counts() {
        let avc = ["αδ²", "αβ³", "γ³δ", "α²βγ²"].map(|s| VertexCombo::parse(s).unwrap());
        let x = count_feasibility(&avc, &[true; 4], 36).unwrap().unwrap();
        assert_eq!(x, vec![14, 10, 8, 6]);
    }

    #[test]
    fn f20_pair_infeasible() {
        let avc = ["αβ²", "γδ³", "α²γδ"].map(|s| VertexCombo::parse(s).unwrap());
        assert_eq!(count_feasibility(&avc, &[true, true, false], 20).unwrap(), None);
    }

    #[test]
    fn earth_map_counts() {
        let avc = ["αγδ", "β⁵"].map(|s| VertexCombo::parse(s).unwrap());
        assert_eq!(count_feasibility(&avc, &[false, false], 10).unwrap(), Some(vec![10, 2]));
    }

    #[test]
    fn degree_identities() {
        let h = |pairs: &[(u32, u64)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
        assert_eq!(check_degree_counts(&h(&[(3, 8)])), Ok(6));
        assert_eq!(check_degree_counts(&h(&[(3, 10), (5, 2)])), Ok(10));
        assert!(check_degree_counts(&h(&[(3, 8), (4, 1)])).is_err());
    }

    #[test]
    fn balance_drops_one_sided() {
        let vs = ["αβ²", "γδ³", "α²γδ"].map(|s| VertexCombo::parse(s).unwrap());
        let kept = balance_filter(&vs);
        assert_eq!(kept, vec![VertexCombo::parse("αβ²").unwrap(), VertexCombo::parse("α²γδ").unwrap()]);
    }

    #[test]
    fn patterns() {
        let p = AvcPattern::parse("{αγδ, γ³δ, αβ^{(f+2)/6}, αβ^{(f-4)/6}δ²}").unwrap();
        let avc = Avc::parse("αγδ, γ³δ, αβ², αβδ²").unwrap();
        assert!(p.matches_exactly(&avc, Some(10)));
        assert!(!p.matches_exactly(&avc, Some(16)));
        let q = AvcPattern::parse("αγδ, α^mβ^n, β^nγδ").unwrap();
        assert!(q.matches_exactly(&Avc::parse("αγδ, α²β², β⁴γδ").unwrap(), None));
        let k = VertexPattern::parse("γ^kδ^k").unwrap();
        assert!(k.matches(&VertexCombo::new(0, 0, 2, 2), None));
        assert!(!k.matches(&VertexCombo::new(0, 0, 2, 1), None));
        assert_eq!(VertexPattern::parse("β^{f/2}").unwrap().at(12), Some(VertexCombo::new(0, 6, 0, 0)));
        assert_eq!(VertexPattern::parse("αᵐβⁿ").unwrap().to_string(), "α^mβ^n");
        assert_eq!(p.to_string(), "{αγδ, γ³δ, αβ^{(f+2)/6}, αβ^{(f-4)/6}δ²}");
    }
}
