//! Schematic SVG nets: tiles are drawn as squares, two per column, so an
//! earth map shows one strip per timezone. Corner labels carry the angle and
//! the vertex id, b-edges are heavy, c-edges dashed, and clockwise tiles get
//! a "-" mark.

use std::fmt::Write;

use super::{edge_type, EdgeType, Orientation, TilingMap, ANGLE_NAMES};

const CELL: i64 = 64;
const GAP: i64 = 16;
const MARGIN: i64 = 24;
const TOP: i64 = 48;

pub fn render_svg(map: &TilingMap) -> String {
    let cols = (map.tiles.len() as i64 + 1) / 2;
    let width = 2 * MARGIN + cols * (CELL + GAP) - GAP;
    let height = TOP + 2 * (CELL + GAP) - GAP + MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="serif">"#
    );
    let family = map.meta.as_ref().and_then(|m| m.get("family")).and_then(|v| v.as_str()).unwrap_or("tiling");
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="14">{} {}, f = {}</text>"#,
        TOP / 2,
        escape(family),
        map.tile_kind,
        map.f
    );
    for (idx, tile) in map.tiles.iter().enumerate() {
        let x0 = MARGIN + (idx as i64 / 2) * (CELL + GAP);
        let y0 = TOP + (idx as i64 % 2) * (CELL + GAP);
        // Screen corners in counterclockwise order: top-left, bottom-left, bottom-right, top-right.
        let screen = [(x0, y0), (x0, y0 + CELL), (x0 + CELL, y0 + CELL), (x0 + CELL, y0)];
        let seq = tile.orientation.ccw_labels();
        let _ = writeln!(out, r#"<g id="tile-{}">"#, tile.id);
        for k in 0..4 {
            let (p, q) = (screen[k], screen[(k + 1) % 4]);
            let style = match edge_type(map.tile_kind, seq[k], seq[(k + 1) % 4]) {
                EdgeType::A => r#"stroke-width="1.5""#,
                EdgeType::B => r#"stroke-width="4""#,
                EdgeType::C => r#"stroke-width="1.5" stroke-dasharray="4 2""#,
            };
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" {style}/>"#,
                p.0, p.1, q.0, q.1
            );
        }
        let (cx, cy) = (x0 + CELL / 2, y0 + CELL / 2);
        for k in 0..4 {
            let (px, py) = screen[k];
            let (lx, ly) = (px + (cx - px) * 2 / 5, py + (cy - py) * 2 / 5 + 4);
            let label = seq[k];
            let _ = writeln!(
                out,
                r#"<text x="{lx}" y="{ly}" font-size="11" text-anchor="middle">{}<tspan font-size="7">{}</tspan></text>"#,
                ANGLE_NAMES[label],
                tile.corners[label]
            );
        }
        let _ = writeln!(
            out,
            r##"<text x="{cx}" y="{}" font-size="8" text-anchor="middle" fill="#666">{}</text>"##,
            cy + 3,
            tile.id
        );
        if tile.orientation == Orientation::Cw {
            let _ = writeln!(out, r#"<text x="{cx}" y="{}" font-size="12" text-anchor="middle">-</text>"#, cy + 14);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
