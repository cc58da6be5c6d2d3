//! Combinatorial tiling maps: the earth-map family and its flips and
//! rearrangement, fixture documents, and a verifier for arbitrary maps.
//!
//! A map stores, for every tile, the vertex ids at its α, β, γ, δ corners and
//! whether those corners run clockwise or counterclockwise. Edges are derived:
//! γδ is the b-edge, βγ is the c-edge of an a²bc tile, all others are a-edges.

pub mod fixtures;
pub mod minimal;
mod render;
pub mod search;

pub use render::render_svg;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::exact_angles::{rat, rint, AngleExpr, Rat};
use crate::geometry::{self, TileKind};
use crate::vertex_enum::{check_degree_counts, Avc, VertexCombo};

pub const DOCUMENT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TilingError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("flip precondition failed: {0}")]
    FlipPrecondition(String),
    #[error("malformed map at {location}: {message}")]
    Structure { location: Location, message: String },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("version error: {0}")]
    Version(String),
    #[error("search failed: {0}")]
    NotFound(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Cw,
    Ccw,
}

impl Orientation {
    pub fn toggled(self) -> Self {
        match self {
            Orientation::Cw => Orientation::Ccw,
            Orientation::Ccw => Orientation::Cw,
        }
    }

    /// Corner labels (0 = α … 3 = δ) in counterclockwise order, starting at α.
    pub fn ccw_labels(self) -> [usize; 4] {
        match self {
            Orientation::Ccw => [0, 1, 2, 3],
            Orientation::Cw => [0, 3, 2, 1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeType {
    A,
    B,
    C,
}

impl fmt::Display for EdgeType {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            EdgeType::A => "a",
            EdgeType::B => "b",
            EdgeType::C => "c",
        })
    }
}

/// Type of the tile edge joining corner labels `i` and `j` (cyclically adjacent).
pub fn edge_type(kind: TileKind, i: usize, j: usize) -> EdgeType {
    match (i.min(j), i.max(j)) {
        (2, 3) => EdgeType::B,
        (1, 2) if kind == TileKind::A2BC => EdgeType::C,
        (0, 1) | (1, 2) | (0, 3) => EdgeType::A,
        _ => panic!("corners {i} and {j} are not adjacent"),
    }
}

pub const ANGLE_NAMES: [&str; 4] = ["α", "β", "γ", "δ"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tile {
    pub id: u32,
    pub orientation: Orientation,
    /// Vertex ids at the α, β, γ, δ corners.
    pub corners: [u32; 4],
}

impl Tile {
    pub fn new(id: u32, orientation: Orientation, corners: [u32; 4]) -> Self {
        Tile { id, orientation, corners }
    }

    /// Edges as `(from, to, type)`, traversed counterclockwise.
    pub fn ccw_edges(&self, kind: TileKind) -> [(u32, u32, EdgeType); 4] {
        let l = self.orientation.ccw_labels();
        std::array::from_fn(|i| {
            let (p, q) = (l[i], l[(i + 1) % 4]);
            (self.corners[p], self.corners[q], edge_type(kind, p, q))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileAngles {
    pub alpha: AngleExpr,
    pub beta: AngleExpr,
    pub gamma: AngleExpr,
    pub delta: AngleExpr,
}

impl TileAngles {
    pub fn new([alpha, beta, gamma, delta]: [AngleExpr; 4]) -> Self {
        TileAngles { alpha, beta, gamma, delta }
    }

    /// Constant exact angles, in π units.
    pub fn exact(values: [Rat; 4]) -> Self {
        TileAngles::new(values.map(AngleExpr::constant))
    }

    pub fn as_array(&self) -> [&AngleExpr; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }

    /// Exact values in π units at `f`, if all four angles are exact.
    pub fn exact_at(&self, f: u32) -> Option<[Rat; 4]> {
        let v: Vec<Rat> = self.as_array().iter().filter_map(|a| a.exact_at(f)).collect();
        v.try_into().ok()
    }

    pub fn radians_at(&self, f: u32) -> [f64; 4] {
        self.as_array().map(|a| a.radians_at(f))
    }
}

impl fmt::Display for TileAngles {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.as_array().iter().zip(ANGLE_NAMES).map(|(a, n)| format!("{n} = {a}")).collect();
        out.write_str(&parts.join(", "))
    }
}

/// A tiling of the sphere as corner incidences. Tiles are kept sorted by id.
#[derive(Clone, Debug, PartialEq)]
pub struct TilingMap {
    pub tile_kind: TileKind,
    pub f: u32,
    pub angles: TileAngles,
    pub tiles: Vec<Tile>,
    pub meta: Option<Value>,
}

impl TilingMap {
    pub fn new(tile_kind: TileKind, f: u32, angles: TileAngles, mut tiles: Vec<Tile>, meta: Option<Value>) -> Self {
        tiles.sort_by_key(|t| t.id);
        TilingMap { tile_kind, f, angles, tiles, meta }
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.tiles.iter().flat_map(|t| t.corners).collect()
    }

    pub fn tile(&self, id: u32) -> Option<&Tile> {
        self.tiles.binary_search_by_key(&id, |t| t.id).ok().map(|i| &self.tiles[i])
    }

    /// Undirected edges keyed by `(min, max)` vertex id, with the tiles using them.
    pub fn edges(&self) -> BTreeMap<(u32, u32), Vec<EdgeUse>> {
        let mut edges: BTreeMap<(u32, u32), Vec<EdgeUse>> = BTreeMap::new();
        for t in &self.tiles {
            for (from, to, kind) in t.ccw_edges(self.tile_kind) {
                edges.entry((from.min(to), from.max(to))).or_default().push(EdgeUse { tile: t.id, from, to, kind });
            }
        }
        edges
    }

    /// Angle combination at every vertex.
    pub fn vertex_combos(&self) -> BTreeMap<u32, VertexCombo> {
        let mut counts: BTreeMap<u32, [u32; 4]> = BTreeMap::new();
        for t in &self.tiles {
            for (label, v) in t.corners.iter().enumerate() {
                counts.entry(*v).or_default()[label] += 1;
            }
        }
        counts.into_iter().map(|(v, c)| (v, VertexCombo::from_array(c))).collect()
    }

    pub fn vertex_multiset(&self) -> BTreeMap<VertexCombo, u64> {
        let mut out = BTreeMap::new();
        for c in self.vertex_combos().into_values() {
            *out.entry(c).or_insert(0) += 1;
        }
        out
    }

    pub fn with_angles(mut self, angles: TileAngles) -> Self {
        self.angles = angles;
        self
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeUse {
    pub tile: u32,
    pub from: u32,
    pub to: u32,
    pub kind: EdgeType,
}

/// Formats a vertex multiset as `6αδ², 2β³`.
pub fn format_multiset(m: &BTreeMap<VertexCombo, u64>) -> String {
    let parts: Vec<String> = m.iter().map(|(v, n)| format!("{n}{v}")).collect();
    parts.join(", ")
}

/// Parses `6αδ², 6αβγ², 2β³` into a multiset.
pub fn parse_multiset(s: &str) -> Option<BTreeMap<VertexCombo, u64>> {
    let mut out = BTreeMap::new();
    for part in s.split(',') {
        let part = part.trim();
        let split = part.find(|c: char| !c.is_ascii_digit())?;
        let (n, v) = part.split_at(split);
        let n: u64 = if n.is_empty() { 1 } else { n.parse().ok()? };
        *out.entry(VertexCombo::parse(v)?).or_insert(0) += n;
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Documents

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u64,
    tile_kind: TileKind,
    f: u32,
    angles: TileAngles,
    tiles: Vec<Tile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

pub fn load_tiling(bytes: &[u8]) -> Result<TilingMap, TilingError> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| TilingError::Parse { path: ".".into(), message: e.to_string() })?;
    let Some(obj) = value.as_object() else {
        return Err(TilingError::Parse { path: ".".into(), message: "document is not an object".into() });
    };
    match obj.get("version") {
        None => return Err(TilingError::Version("missing \"version\"".into())),
        Some(v) if v.as_u64() != Some(DOCUMENT_VERSION) => {
            return Err(TilingError::Version(format!("unsupported version {v}, expected {DOCUMENT_VERSION}")))
        }
        Some(_) => {}
    }
    let doc: Document = serde_path_to_error::deserialize(value)
        .map_err(|e| TilingError::Parse { path: e.path().to_string(), message: e.inner().to_string() })?;
    Ok(TilingMap::new(doc.tile_kind, doc.f, doc.angles, doc.tiles, doc.meta))
}

pub fn save_tiling(map: &TilingMap) -> Vec<u8> {
    let doc = Document {
        version: DOCUMENT_VERSION,
        tile_kind: map.tile_kind,
        f: map.f,
        angles: map.angles.clone(),
        tiles: map.tiles.clone(),
        meta: map.meta.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("tiling documents serialize");
    out.push(b'\n');
    out
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    EdgeMatching,
    Orientation,
    VertexLinks,
    Degrees,
    EulerCounts,
    AngleSums,
    Parity,
    Avc,
}

impl fmt::Display for Rule {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    Map,
    Tile(u32),
    Vertex(u32),
    Edge(u32, u32),
}

impl fmt::Display for Location {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Map => write!(out, "map"),
            Location::Tile(t) => write!(out, "tile {t}"),
            Location::Vertex(v) => write!(out, "vertex {v}"),
            Location::Edge(u, v) => write!(out, "edge {u}-{v}"),
        }
    }
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub rule: Rule,
    pub location: Location,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub rules: Vec<RuleOutcome>,
    #[serde(serialize_with = "combo_counts")]
    pub vertex_multiset: BTreeMap<VertexCombo, u64>,
    pub degree_histogram: BTreeMap<u32, u64>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub failures: Vec<Failure>,
}

fn combo_counts<S: Serializer>(m: &BTreeMap<VertexCombo, u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
}

impl VerificationReport {
    pub fn passed(&self, rule: Rule) -> Option<bool> {
        self.rules.iter().find(|r| r.rule == rule).map(|r| r.passed)
    }

    pub fn multiset_string(&self) -> String {
        format_multiset(&self.vertex_multiset)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "verdict: {}", if self.pass { "pass" } else { "FAIL" })?;
        for r in &self.rules {
            writeln!(out, "  {:<13} {}", r.rule.to_string(), if r.passed { "ok" } else { "FAIL" })?;
        }
        writeln!(out, "vertices: {} ({})", self.vertex_count, self.multiset_string())?;
        let hist: Vec<String> = self.degree_histogram.iter().map(|(d, n)| format!("{n}×deg{d}")).collect();
        writeln!(out, "edges: {}, degrees: {}", self.edge_count, hist.join(", "))?;
        for fail in &self.failures {
            writeln!(out, "  {} at {}: {}", fail.rule, fail.location, fail.message)?;
        }
        Ok(())
    }
}

fn structure(location: Location, message: impl Into<String>) -> TilingError {
    TilingError::Structure { location, message: message.into() }
}

/// Checks a map against edge matching, orientation, vertex links, Euler-type
/// counts, angle sums and parity, and optionally an expected AVC.
///
/// Malformed maps (wrong tile count, repeated ids, repeated corners) are
/// errors; everything else is reported rule by rule.
pub fn verify_tiling(
    map: &TilingMap,
    angles: &TileAngles,
    expected_avc: Option<&Avc>,
) -> Result<VerificationReport, TilingError> {
    let f = map.f;
    if map.tiles.len() != f as usize {
        return Err(structure(Location::Map, format!("f = {f} but the map has {} tiles", map.tiles.len())));
    }
    if f < 2 {
        return Err(structure(Location::Map, "a sphere tiling needs at least two tiles"));
    }
    for w in map.tiles.windows(2) {
        if w[0].id == w[1].id {
            return Err(structure(Location::Tile(w[0].id), "duplicate tile id"));
        }
    }
    for t in &map.tiles {
        let distinct: BTreeSet<u32> = t.corners.iter().copied().collect();
        if distinct.len() != 4 {
            return Err(structure(Location::Tile(t.id), "a vertex occurs at two corners of the tile"));
        }
    }

    let mut failures = Vec::new();
    let mut fail = |rule, location, message: String| failures.push(Failure { rule, location, message });

    let edges = map.edges();
    for (&(u, v), uses) in &edges {
        let loc = Location::Edge(u, v);
        if uses.len() != 2 {
            fail(Rule::EdgeMatching, loc, format!("edge belongs to {} tiles", uses.len()));
            continue;
        }
        if uses[0].kind != uses[1].kind {
            fail(
                Rule::EdgeMatching,
                loc,
                format!("tile {} sees a {}-edge, tile {} a {}-edge", uses[0].tile, uses[0].kind, uses[1].tile, uses[1].kind),
            );
        }
        if uses[0].from == uses[1].from {
            fail(
                Rule::Orientation,
                loc,
                format!("tiles {} and {} traverse the edge in the same direction", uses[0].tile, uses[1].tile),
            );
        }
    }

    // Wedges: the two neighbours of each corner.
    let mut wedges: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for t in &map.tiles {
        for i in 0..4 {
            wedges.entry(t.corners[i]).or_default().push((t.corners[(i + 3) % 4], t.corners[(i + 1) % 4]));
        }
    }
    for (&v, ws) in &wedges {
        if !is_single_cycle(ws) {
            fail(Rule::VertexLinks, Location::Vertex(v), "corners around the vertex do not close up into one cycle".into());
        }
    }

    let combos = map.vertex_combos();
    let mut degree_histogram: BTreeMap<u32, u64> = BTreeMap::new();
    for (&v, c) in &combos {
        *degree_histogram.entry(c.degree()).or_insert(0) += 1;
        if c.degree() < 3 {
            fail(Rule::Degrees, Location::Vertex(v), format!("degree {} vertex {c}", c.degree()));
        }
    }

    let vertex_count = combos.len();
    let edge_count = edges.len();
    if vertex_count != f as usize + 2 {
        fail(Rule::EulerCounts, Location::Map, format!("V = {vertex_count}, expected f + 2 = {}", f + 2));
    }
    if edge_count != 2 * f as usize {
        fail(Rule::EulerCounts, Location::Map, format!("E = {edge_count}, expected 2f = {}", 2 * f));
    }
    match check_degree_counts(&degree_histogram) {
        Ok(g) if g == f as u64 => {}
        Ok(g) => fail(Rule::EulerCounts, Location::Map, format!("degree counts give f = {g}, not {f}")),
        Err(e) => fail(Rule::EulerCounts, Location::Map, format!("degree counts rejected: {e:?}")),
    }

    let exact = angles.exact_at(f);
    let radians = angles.radians_at(f);
    let tol = geometry::tolerance();
    for (&v, c) in &combos {
        let ok = match &exact {
            Some(e) => c.exact_sum(e) == rint(2),
            None => (c.numeric_sum(&radians) - 2.0 * PI).abs() < tol,
        };
        if !ok {
            let sum = c.numeric_sum(&radians) / PI;
            fail(Rule::AngleSums, Location::Vertex(v), format!("{c} sums to {sum:.12}π, not 2π"));
        }
        let b_ok = (c.k + c.l) % 2 == 0;
        let c_ok = map.tile_kind == TileKind::A3B || (c.n + c.k) % 2 == 0;
        if !(b_ok && c_ok) {
            fail(Rule::Parity, Location::Vertex(v), format!("{c} has an odd number of b- or c-edge corners"));
        }
    }

    let mut rules = vec![
        Rule::EdgeMatching,
        Rule::Orientation,
        Rule::VertexLinks,
        Rule::Degrees,
        Rule::EulerCounts,
        Rule::AngleSums,
        Rule::Parity,
    ];
    if let Some(avc) = expected_avc {
        rules.push(Rule::Avc);
        for (&v, c) in &combos {
            if !avc.vertices.contains(c) {
                fail(Rule::Avc, Location::Vertex(v), format!("{c} is not in the expected AVC {avc}"));
            }
        }
        let seen: BTreeSet<&VertexCombo> = combos.values().collect();
        for c in &avc.vertices {
            if !seen.contains(c) {
                fail(Rule::Avc, Location::Map, format!("expected vertex {c} does not occur"));
            }
        }
    }

    let outcomes: Vec<RuleOutcome> =
        rules.into_iter().map(|rule| RuleOutcome { rule, passed: failures.iter().all(|x| x.rule != rule) }).collect();
    let mut vertex_multiset = BTreeMap::new();
    for c in combos.values() {
        *vertex_multiset.entry(*c).or_insert(0) += 1;
    }
    Ok(VerificationReport {
        pass: outcomes.iter().all(|r| r.passed),
        rules: outcomes,
        vertex_multiset,
        degree_histogram,
        vertex_count,
        edge_count,
        failures,
    })
}

/// Each wedge joins two neighbours; a manifold vertex has wedges forming one cycle.
fn is_single_cycle(wedges: &[(u32, u32)]) -> bool {
    let mut incident: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &(p, q)) in wedges.iter().enumerate() {
        incident.entry(p).or_default().push(i);
        incident.entry(q).or_default().push(i);
    }
    if incident.values().any(|w| w.len() != 2) {
        return false;
    }
    // Walk the cycle from wedge 0.
    let (start, mut at) = wedges[0];
    let mut prev = 0usize;
    let mut steps = 1;
    while at != start {
        let next = incident[&at].iter().copied().find(|&w| w != prev).unwrap();
        let (p, q) = wedges[next];
        at = if p == at { q } else { p };
        prev = next;
        steps += 1;
        if steps > wedges.len() {
            return false;
        }
    }
    steps == wedges.len()
}

// ---------------------------------------------------------------------------
// Earth maps

/// Vertex ids of an earth map with `h` timezones: poles 0 and 1, then the
/// upper ring `u_i` and the lower ring `w_i`.
#[derive(Clone, Copy, Debug)]
struct EarthIds {
    h: u32,
}

impl EarthIds {
    const NORTH: u32 = 0;
    const SOUTH: u32 = 1;

    fn u(&self, i: u32) -> u32 {
        2 + i % self.h
    }

    fn w(&self, i: u32) -> u32 {
        2 + self.h + i % self.h
    }
}

fn check_even_f(f: u32) -> Result<(), TilingError> {
    if f < 6 || f % 2 == 1 {
        return Err(TilingError::Domain(format!("f must be even and at least 6, got {f}")));
    }
    Ok(())
}

/// Tiles of the earth map: timezone `i` holds tiles `2i` (north) and `2i + 1` (south).
pub fn earth_map_tiles(f: u32, tile_kind: TileKind) -> Result<Vec<Tile>, TilingError> {
    check_even_f(f)?;
    let ids = EarthIds { h: f / 2 };
    let (n, s) = (EarthIds::NORTH, EarthIds::SOUTH);
    let mut tiles = Vec::with_capacity(f as usize);
    for i in 0..f / 2 {
        let (u0, u1, w0, w1) = (ids.u(i), ids.u(i + 1), ids.w(i), ids.w(i + 1));
        match tile_kind {
            // β at the poles; αγδ on the rings.
            TileKind::A3B => {
                tiles.push(Tile::new(2 * i, Orientation::Cw, [u0, n, u1, w0]));
                tiles.push(Tile::new(2 * i + 1, Orientation::Cw, [w1, s, w0, u1]));
            }
            // α at the poles; βγδ on the rings.
            TileKind::A2BC => {
                tiles.push(Tile::new(2 * i, Orientation::Ccw, [n, u0, w0, u1]));
                tiles.push(Tile::new(2 * i + 1, Orientation::Ccw, [s, w1, u1, w0]));
            }
        }
    }
    Ok(tiles)
}

/// a³b earth-map angles for `α = alpha·π` and `β = 4π/f`.
///
/// γ and δ are measured on the constructed tile when α ∈ (π/2, 3π/2). Outside
/// that range there is no construction here and γ = δ = (2π − α)/2 is used,
/// which satisfies every vertex sum of the family but is not a geometric tile.
pub fn a3b_earth_map_angles(f: u32, alpha: &AngleExpr) -> TileAngles {
    let beta = AngleExpr::affine(Rat::zero(), rint(4));
    let al = alpha.radians_at(f);
    let be = beta.radians_at(f);
    match geometry::earth_map_quad(al, be, geometry::tolerance()) {
        Ok(g) => {
            let formula = |name: &str| format!("{name} of the earth-map tile with α = {alpha}, β = 4π/f at f = {f}");
            TileAngles::new([
                alpha.clone(),
                beta,
                AngleExpr::numeric(g.angles[2], formula("γ")).expect("finite"),
                AngleExpr::numeric(g.angles[3], formula("δ")).expect("finite"),
            ])
        }
        Err(_) => {
            let half = match alpha {
                AngleExpr::Affine { c0, c1 } => AngleExpr::affine((rint(2) - c0) / rint(2), -c1 / rint(2)),
                AngleExpr::Numeric { value, .. } => {
                    AngleExpr::numeric(PI - value / 2.0, "(2π − α)/2").expect("finite")
                }
            };
            TileAngles::new([alpha.clone(), beta, half.clone(), half])
        }
    }
}

/// Angles attached to freshly generated earth maps.
///
/// a³b: α = (1 − 4/(3f))π, β = 4π/f, γ and δ from the construction.
/// a²bc: α = 4π/f and β, γ, δ from the tile with a = π/2 − α/2 whose γ corner
/// sits α/3 east of its β corner.
pub fn default_earth_map_angles(f: u32, tile_kind: TileKind) -> TileAngles {
    match tile_kind {
        TileKind::A3B => a3b_earth_map_angles(f, &AngleExpr::affine(rint(1), rat(-4, 3))),
        TileKind::A2BC => {
            let alpha = 4.0 * PI / f as f64;
            let a = PI / 2.0 - alpha / 2.0;
            let g = geometry::a2bc_earth_map_quad(alpha, a, alpha / 3.0, geometry::tolerance())
                .expect("the a²bc earth-map tile exists for every f ≥ 6");
            let formula = |name: &str| format!("{name} of the a²bc earth-map tile (a = π/2 − α/2, offset α/3) at f = {f}");
            TileAngles::new([
                AngleExpr::affine(Rat::zero(), rint(4)),
                AngleExpr::numeric(g.angles[1], formula("β")).expect("finite"),
                AngleExpr::numeric(g.angles[2], formula("γ")).expect("finite"),
                AngleExpr::numeric(g.angles[3], formula("δ")).expect("finite"),
            ])
        }
    }
}

pub fn generate_earth_map(f: u32, tile_kind: TileKind) -> Result<TilingMap, TilingError> {
    let tiles = earth_map_tiles(f, tile_kind)?;
    let meta = serde_json::json!({ "family": "E" });
    Ok(TilingMap::new(tile_kind, f, default_earth_map_angles(f, tile_kind), tiles, Some(meta)))
}

/// Expected AVC of the plain earth map.
pub fn earth_map_avc(f: u32, tile_kind: TileKind) -> Avc {
    let h = f / 2;
    match tile_kind {
        TileKind::A3B => Avc::from_vertices([VertexCombo::new(1, 0, 1, 1), VertexCombo::new(0, h, 0, 0)]),
        TileKind::A2BC => Avc::from_vertices([VertexCombo::new(0, 1, 1, 1), VertexCombo::new(h, 0, 0, 0)]),
    }
}

// ---------------------------------------------------------------------------
// Flips

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipKind {
    /// Reflection exchanging the north pole with the block's first upper vertex; needs α = sβ.
    EPrime,
    /// Reflection exchanging the north pole with the block's last upper vertex; needs γ + δ = sβ.
    EDoublePrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSpec {
    pub kind: FlipKind,
    /// Timezones per flipped block.
    pub s: u32,
    /// First timezone of each block.
    pub positions: Vec<u32>,
}

/// Vertex relabelling of one flipped block; interior vertices are fixed.
fn flip_sigma(kind: FlipKind, ids: EarthIds, start: u32, s: u32) -> [(u32, u32); 3] {
    let (n, so) = (EarthIds::NORTH, EarthIds::SOUTH);
    let end = start + s;
    match kind {
        FlipKind::EPrime => [(n, ids.u(start)), (ids.w(start), ids.u(end)), (so, ids.w(end))],
        FlipKind::EDoublePrime => [(n, ids.u(end)), (ids.u(start), ids.w(end)), (ids.w(start), so)],
    }
}

/// `Σ coef·angle = 0`, exactly when every angle involved is exact.
fn relation_holds(terms: &[(i64, &AngleExpr)], f: u32) -> bool {
    let exact: Option<Vec<Rat>> = terms.iter().map(|(_, a)| a.exact_at(f)).collect();
    match exact {
        Some(values) => {
            let sum = terms.iter().zip(values).fold(Rat::zero(), |acc, ((c, _), v)| acc + v * rint(*c));
            sum.is_zero()
        }
        None => {
            let sum: f64 = terms.iter().map(|(c, a)| *c as f64 * a.radians_at(f)).sum();
            sum.abs() < geometry::tolerance()
        }
    }
}

/// Flips blocks of `s` consecutive timezones of an a³b earth map.
///
/// Each block is a hexagon with sides a; reflecting it swaps its boundary
/// vertices pairwise and reverses its tiles. The map must use the numbering of
/// [`earth_map_tiles`]; flipping the same block twice restores the input.
pub fn apply_flip(map: &TilingMap, spec: &FlipSpec, angles: &TileAngles) -> Result<TilingMap, TilingError> {
    if map.tile_kind != TileKind::A3B {
        return Err(TilingError::Domain("flips apply to a³b earth maps".into()));
    }
    check_even_f(map.f)?;
    let h = map.f / 2;
    if map.tiles.len() != map.f as usize || map.tiles.iter().enumerate().any(|(i, t)| t.id != i as u32) {
        return Err(TilingError::Domain("the map does not use the earth-map tile numbering".into()));
    }
    if spec.s == 0 || spec.s >= h {
        return Err(TilingError::Domain(format!("block size s = {} must lie in [1, f/2) = [1, {h})", spec.s)));
    }
    if spec.positions.is_empty() {
        return Err(TilingError::Domain("no flip positions given".into()));
    }
    let mut used = vec![false; h as usize];
    for &p in &spec.positions {
        if p >= h {
            return Err(TilingError::Domain(format!("position {p} is not a timezone (f/2 = {h})")));
        }
        for t in p..p + spec.s {
            let slot = &mut used[(t % h) as usize];
            if *slot {
                return Err(TilingError::Domain(format!("flip blocks overlap at timezone {}", t % h)));
            }
            *slot = true;
        }
    }
    let s = spec.s as i64;
    let ok = match spec.kind {
        FlipKind::EPrime => relation_holds(&[(1, &angles.alpha), (-s, &angles.beta)], map.f),
        FlipKind::EDoublePrime => {
            relation_holds(&[(1, &angles.gamma), (1, &angles.delta), (-s, &angles.beta)], map.f)
        }
    };
    if !ok {
        let what = match spec.kind {
            FlipKind::EPrime => format!("α ≠ {s}β"),
            FlipKind::EDoublePrime => format!("γ + δ ≠ {s}β"),
        };
        return Err(TilingError::FlipPrecondition(format!("{what} for {angles}")));
    }

    let ids = EarthIds { h };
    let mut tiles = map.tiles.clone();
    for &p in &spec.positions {
        let sigma = flip_sigma(spec.kind, ids, p, spec.s);
        let apply = |v: u32| {
            sigma.iter().find_map(|&(x, y)| if v == x { Some(y) } else if v == y { Some(x) } else { None }).unwrap_or(v)
        };
        for t in p..p + spec.s {
            let zone = t % h;
            for id in [2 * zone, 2 * zone + 1] {
                let tile = &mut tiles[id as usize];
                tile.corners = tile.corners.map(apply);
                tile.orientation = tile.orientation.toggled();
            }
        }
    }
    Ok(TilingMap::new(map.tile_kind, map.f, angles.clone(), tiles, map.meta.clone()))
}

/// Angles for the flip family: α = sβ for E′, γ + δ = sβ (α = 2π − sβ) for E″.
pub fn flip_angles(f: u32, kind: FlipKind, s: u32) -> TileAngles {
    let alpha = match kind {
        FlipKind::EPrime => AngleExpr::affine(Rat::zero(), rint(4 * s as i64)),
        FlipKind::EDoublePrime => AngleExpr::affine(rint(2), rint(-4 * s as i64)),
    };
    a3b_earth_map_angles(f, &alpha)
}

/// Earth map with the given flips applied, using [`flip_angles`].
pub fn generate_flipped(f: u32, spec: &FlipSpec) -> Result<TilingMap, TilingError> {
    let base = generate_earth_map(f, TileKind::A3B)?;
    let family = match spec.kind {
        FlipKind::EPrime => "E'",
        FlipKind::EDoublePrime => "E''",
    };
    let meta = serde_json::json!({ "family": family, "flip": spec });
    Ok(apply_flip(&base, spec, &flip_angles(f, spec.kind, spec.s))?.with_meta(meta))
}

/// AVC of an earth map after flipping the given number of blocks of size `s`.
pub fn flipped_avc(f: u32, kind: FlipKind, s: u32, blocks: u32) -> Avc {
    let h = f / 2;
    let rest = h - s * blocks;
    // αγδ survives outside the blocks and inside blocks of two or more
    // timezones; flipping every timezone singly leaves none.
    let mut v = Vec::new();
    if blocks < h {
        v.push(VertexCombo::new(1, 0, 1, 1));
    }
    match kind {
        FlipKind::EPrime => {
            v.push(VertexCombo::new(blocks, rest, 0, 0));
            v.push(VertexCombo::new(0, s, 1, 1));
        }
        FlipKind::EDoublePrime => {
            v.push(VertexCombo::new(1, s, 0, 0));
            v.push(VertexCombo::new(0, rest, blocks, blocks));
        }
    }
    Avc::from_vertices(v)
}

// ---------------------------------------------------------------------------
// Rearrangement

/// Angles of the rearrangement at `f = 6q + 4`:
/// α = (4/3 − 4/(3f))π, β = 4π/f, γ = (2/3 − 2/(3f))π, δ = 2π/f.
pub fn rearrangement_angles() -> TileAngles {
    TileAngles::new([
        AngleExpr::affine(rat(4, 3), rat(-4, 3)),
        AngleExpr::affine(Rat::zero(), rint(4)),
        AngleExpr::affine(rat(2, 3), rat(-2, 3)),
        AngleExpr::affine(Rat::zero(), rint(2)),
    ])
}

/// Vertex multiset of the rearrangement for `q`:
/// (f − 6)αγδ, 2γ³δ, 4αβ^(q+1), 2αβ^qδ².
pub fn rearrangement_multiset(q: u32) -> BTreeMap<VertexCombo, u64> {
    let f = 6 * q + 4;
    BTreeMap::from([
        (VertexCombo::new(1, 0, 1, 1), (f - 6) as u64),
        (VertexCombo::new(0, 0, 3, 1), 2),
        (VertexCombo::new(1, q + 1, 0, 0), 4),
        (VertexCombo::new(1, q, 0, 2), 2),
    ])
}

/// The rearrangement of the earth map with `f = 6q + 4` tiles: three blocks
/// of `q` timezones and four more tiles.
///
/// The map is assembled by the growth search constrained to the exact
/// vertex multiset, so the result is deterministic for each `q`.
pub fn generate_rearrangement(q: u32) -> Result<TilingMap, TilingError> {
    if q == 0 {
        return Err(TilingError::Domain("q must be a positive integer".into()));
    }
    let f = 6 * q + 4;
    let target = rearrangement_multiset(q);
    let spec = search::SearchSpec::exact(TileKind::A3B, f, &target);
    let found = search::search(&spec);
    let tiles = found
        .tilings
        .into_iter()
        .next()
        .ok_or_else(|| TilingError::NotFound(format!("no rearrangement found for q = {q}")))?;
    let meta = serde_json::json!({ "family": "E'''", "q": q });
    Ok(TilingMap::new(TileKind::A3B, f, rearrangement_angles(), tiles, Some(meta)))
}
