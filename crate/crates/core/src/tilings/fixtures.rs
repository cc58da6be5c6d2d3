//! Named fixture maps of the isolated and special tilings.
//!
//! The documents under `fixtures/` are embedded at compile time. S3 and S′3
//! are transcribed by hand from their polar drawings; the others are the first
//! canonical map found by the search with the tabulated vertex multiset.
//! [`build_fixture`] reproduces every document from scratch.

use serde_json::json;

use super::search::{search, SearchSpec};
use super::{
    load_tiling, parse_multiset, rearrangement_angles, rearrangement_multiset, Orientation, Tile, TileAngles,
    TilingError, TilingMap,
};
use crate::exact_angles::{rat, AngleExpr};
use crate::geometry::tables::{a2bc_rows, isolated_rows, TableRow};
use crate::geometry::TileKind;

pub struct Fixture {
    pub name: &'static str,
    /// Row name in the geometry tables whose angles the map carries.
    pub row: Option<&'static str>,
    /// Expected vertex multiset.
    pub vertices: &'static str,
    document: &'static str,
}

macro_rules! fixture {
    ($name:literal, $row:expr, $vertices:literal) => {
        Fixture {
            name: $name,
            row: $row,
            vertices: $vertices,
            document: include_str!(concat!("../../fixtures/", $name, ".json")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("S1_12", Some("S1_12"), "6αδ², 6αβγ², 2β³"),
    fixture!("S1_16", Some("S1_16"), "8αδ², 8αβγ², 2β⁴"),
    fixture!("S2", Some("S2"), "8αγ², 8β²δ², 2α⁴"),
    fixture!("S3", Some("S3"), "8αγ², 8αβδ², 2β⁴"),
    fixture!("S3_prime", Some("S'3"), "8αγ², 8αβδ², 2β⁴"),
    fixture!("S4", Some("S4"), "8αβ², 4α²γδ, 6γ²δ²"),
    fixture!("S5", Some("S5"), "18αβ², 6α²δ², 6γδ³, 6αγ³δ, 2γ⁶"),
    fixture!("S6", Some("S6"), "14αδ², 10αβ³, 8γ³δ, 6α²βγ²"),
    fixture!("QP6", Some("QP6"), "8α³, 12β²δ², 6γ⁴"),
    fixture!("QP6_a2bc", Some("QP6_a2bc(δ=π/3)"), "8α³, 12β²δ², 6γ⁴"),
    fixture!("QP6_prime", Some("QP6'"), "2α³, 6αβ², 6α²δ², 6β²δ², 6γ⁴"),
    fixture!("E_sq5_16", Some("E□5_16"), "8αβ², 4α²δ², 4γ⁴, 2δ⁴"),
    fixture!("E3_q1", None, "4αγδ, 2γ³δ, 4αβ², 2αβδ²"),
    fixture!("E3_q4", None, "22αγδ, 2γ³δ, 4αβ⁵, 2αβ⁴δ²"),
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|x| x.name == name)
}

/// Parses an embedded fixture document.
pub fn load_fixture(name: &str) -> Result<TilingMap, TilingError> {
    let fx = fixture(name).ok_or_else(|| TilingError::Domain(format!("unknown fixture {name:?}")))?;
    load_tiling(fx.document.as_bytes())
}

/// Tile angles of a table row: exact where the row gives a rational multiple
/// of π, numeric with the closed form otherwise.
pub fn row_angles(row: &TableRow) -> TileAngles {
    let angle = |symbol: &str| {
        let x = row.known.iter().find(|x| x.symbol == symbol).expect("row lists all four angles");
        match x.exact_pi {
            Some((n, d)) => AngleExpr::constant(rat(n, d)),
            None => AngleExpr::numeric(x.value, x.formula.clone()).expect("finite tabulated angle"),
        }
    };
    TileAngles::new([angle("α"), angle("β"), angle("γ"), angle("δ")])
}

fn find_row(name: &str) -> Option<TableRow> {
    isolated_rows().into_iter().chain(a2bc_rows()).find(|r| r.name == name)
}

/// S3 (or S′3 when `prime`) from the polar drawing: a centre O, rings
/// P, Q, R, T of four vertices each, and the antipode.
pub fn transcribed_s3(prime: bool) -> Vec<Tile> {
    let m = |k: i64| k.rem_euclid(4) as u32;
    let (o, inf) = (0u32, 17u32);
    let p = |k: i64| 1 + m(k);
    let q = |k: i64| 5 + m(k);
    let r = |k: i64| 9 + m(k);
    let t = |k: i64| 13 + m(k);
    let mut tiles = Vec::new();
    for k in 0..4i64 {
        let id = k as u32;
        tiles.push(Tile::new(id, Orientation::Ccw, [p(k + 1), o, p(k), q(k)]));
        tiles.push(Tile::new(4 + id, Orientation::Cw, [r(k), q(k - 1), p(k), q(k)]));
        if prime {
            tiles.push(Tile::new(8 + id, Orientation::Ccw, [q(k), r(k), t(k), r(k + 1)]));
            tiles.push(Tile::new(12 + id, Orientation::Cw, [t(k), inf, t(k - 1), r(k)]));
        } else {
            tiles.push(Tile::new(8 + id, Orientation::Cw, [q(k), r(k + 1), t(k), r(k)]));
            tiles.push(Tile::new(12 + id, Orientation::Ccw, [t(k - 1), inf, t(k), r(k)]));
        }
    }
    tiles
}

/// Rebuilds a fixture map without reading its document.
pub fn build_fixture(name: &str) -> Result<TilingMap, TilingError> {
    let fx = fixture(name).ok_or_else(|| TilingError::Domain(format!("unknown fixture {name:?}")))?;
    let target = parse_multiset(fx.vertices).expect("well-formed fixture multiset");
    let (kind, angles) = match fx.row {
        Some(row) => {
            let row = find_row(row).ok_or_else(|| TilingError::Domain(format!("no table row {row:?}")))?;
            (row.tile_kind, row_angles(&row))
        }
        None => {
            let q = name.trim_start_matches("E3_q").parse::<u32>().expect("rearrangement fixture name");
            debug_assert_eq!(rearrangement_multiset(q), target);
            (TileKind::A3B, rearrangement_angles())
        }
    };
    let f = target.iter().map(|(v, n)| v.degree() as u64 * n).sum::<u64>() / 4;
    let tiles = match name {
        "S3" => transcribed_s3(false),
        "S3_prime" => transcribed_s3(true),
        _ => search(&SearchSpec::exact(kind, f as u32, &target))
            .tilings
            .into_iter()
            .next()
            .ok_or_else(|| TilingError::NotFound(format!("no tiling for fixture {name}")))?,
    };
    let meta = json!({ "family": name });
    Ok(TilingMap::new(kind, f as u32, angles, tiles, Some(meta)))
}
