use std::collections::BTreeMap;

use quadtile::geometry::TileKind;
use quadtile::tilings::fixtures::{build_fixture, load_fixture, transcribed_s3, FIXTURES};
use quadtile::tilings::search::{isomorphic, search, SearchSpec};
use quadtile::tilings::{
    apply_flip, earth_map_avc, flip_angles, generate_earth_map, generate_flipped, generate_rearrangement,
    load_tiling, parse_multiset, rearrangement_multiset, save_tiling, verify_tiling, FlipKind, FlipSpec, Rule,
    TilingError, TilingMap,
};
use quadtile::vertex_enum::{Avc, VertexCombo};

fn support(m: &BTreeMap<VertexCombo, u64>) -> Avc {
    Avc::from_vertices(m.keys().copied())
}

#[test]
fn fixtures_verify_with_their_multisets() {
    for fx in FIXTURES {
        let map = load_fixture(fx.name).unwrap();
        let want = parse_multiset(fx.vertices).unwrap();
        let r = verify_tiling(&map, &map.angles, Some(&support(&want))).unwrap();
        assert!(r.pass, "{}: {r}", fx.name);
        assert_eq!(r.vertex_multiset, want, "{}", fx.name);
        assert_eq!(r.vertex_count as u32, map.f + 2, "{}", fx.name);
        assert_eq!(r.edge_count as u32, 2 * map.f, "{}", fx.name);
    }
}

#[test]
fn fixture_documents_rebuild() {
    for fx in FIXTURES {
        let stored = load_fixture(fx.name).unwrap();
        let built = build_fixture(fx.name).unwrap();
        assert!(isomorphic(&stored, &built), "{}", fx.name);
    }
}

#[test]
fn two_sixteen_tile_classes_with_the_s3_vertices() {
    let target = parse_multiset("8αγ², 8αβδ², 2β⁴").unwrap();
    let mut spec = SearchSpec::exact(TileKind::A3B, 16, &target);
    spec.max_solutions = usize::MAX;
    let out = search(&spec);
    assert!(out.complete);
    assert_eq!(out.tilings.len(), 2);
    let angles = load_fixture("S3").unwrap().angles;
    let as_map = |tiles| TilingMap::new(TileKind::A3B, 16, angles.clone(), tiles, None);
    let plain = as_map(transcribed_s3(false));
    let prime = as_map(transcribed_s3(true));
    assert!(!isomorphic(&plain, &prime));
    for want in [&plain, &prime] {
        assert!(out.tilings.iter().any(|t| isomorphic(&as_map(t.clone()), want)));
    }
}

#[test]
fn rotated_corners_break_edge_matching() {
    let map = load_fixture("QP6").unwrap();
    let mut bad = map.clone();
    let t = &mut bad.tiles[3];
    t.corners = [t.corners[1], t.corners[2], t.corners[3], t.corners[0]];
    let r = verify_tiling(&bad, &bad.angles, None).unwrap();
    assert!(!r.pass);
    assert_eq!(r.passed(Rule::EdgeMatching), Some(false));
}

#[test]
fn swapped_corners_are_detected() {
    for name in ["S1_12", "S5", "E3_q1"] {
        let map = load_fixture(name).unwrap();
        let mut bad = map.clone();
        bad.tiles[0].corners.swap(1, 3);
        let ok = verify_tiling(&bad, &bad.angles, None).map(|r| r.pass).unwrap_or(false);
        assert!(!ok, "{name}");
    }
}

#[test]
fn documents_round_trip() {
    for fx in FIXTURES {
        let map = load_fixture(fx.name).unwrap();
        let back = load_tiling(&save_tiling(&map)).unwrap();
        assert_eq!(back, map, "{}", fx.name);
    }
}

#[test]
fn missing_version_is_rejected() {
    let map = load_fixture("S2").unwrap();
    let mut doc: serde_json::Value = serde_json::from_slice(&save_tiling(&map)).unwrap();
    doc.as_object_mut().unwrap().remove("version");
    let err = load_tiling(doc.to_string().as_bytes()).unwrap_err();
    assert!(matches!(err, TilingError::Version(_)), "{err}");
}

#[test]
fn unknown_field_reports_its_path() {
    let map = load_fixture("S2").unwrap();
    let mut doc: serde_json::Value = serde_json::from_slice(&save_tiling(&map)).unwrap();
    doc["tiles"][2]["colour"] = serde_json::json!("red");
    match load_tiling(doc.to_string().as_bytes()).unwrap_err() {
        TilingError::Parse { path, .. } => assert!(path.contains("tiles[2]"), "{path}"),
        e => panic!("{e}"),
    }
}

#[test]
fn flipping_twice_restores_the_map() {
    for (f, kind, s, positions) in
        [(12, FlipKind::EPrime, 2, vec![0, 2]), (16, FlipKind::EDoublePrime, 3, vec![1]), (20, FlipKind::EPrime, 1, vec![0, 4, 7])]
    {
        let spec = FlipSpec { kind, s, positions };
        let once = generate_flipped(f, &spec).unwrap();
        let twice = apply_flip(&once, &spec, &flip_angles(f, kind, s)).unwrap();
        let base = generate_earth_map(f, TileKind::A3B).unwrap();
        assert_eq!(twice.tiles, base.tiles, "f={f}");
    }
}

#[test]
fn flip_needs_its_angle_relation() {
    let base = generate_earth_map(12, TileKind::A3B).unwrap();
    let spec = FlipSpec { kind: FlipKind::EPrime, s: 2, positions: vec![0] };
    let err = apply_flip(&base, &spec, &base.angles).unwrap_err();
    assert!(matches!(err, TilingError::FlipPrecondition(_)), "{err}");
}

#[test]
fn earth_map_counts() {
    for f in (6..=64).step_by(2) {
        for kind in [TileKind::A3B, TileKind::A2BC] {
            let map = generate_earth_map(f, kind).unwrap();
            assert_eq!(map.vertices().len() as u32, f + 2);
            assert_eq!(map.edges().len() as u32, 2 * f);
            let poles = map.vertex_combos().values().filter(|v| v.degree() == f / 2).count();
            assert_eq!(poles, if f == 6 { 8 } else { 2 }, "f={f}");
            let r = verify_tiling(&map, &map.angles, Some(&earth_map_avc(f, kind))).unwrap();
            assert!(r.pass, "f={f} {kind}: {r}");
        }
    }
}

#[test]
fn earth_map_rejects_odd_or_small_f() {
    assert!(generate_earth_map(9, TileKind::A3B).is_err());
    assert!(generate_earth_map(4, TileKind::A3B).is_err());
}

#[test]
fn rearrangements_carry_their_multisets() {
    for q in 1..=4 {
        let map = generate_rearrangement(q).unwrap();
        let want = rearrangement_multiset(q);
        let r = verify_tiling(&map, &map.angles, Some(&support(&want))).unwrap();
        assert!(r.pass, "q={q}: {r}");
        assert_eq!(r.vertex_multiset, want);
    }
}
