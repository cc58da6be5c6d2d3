use quadtile::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("quadtile").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["classify", "--f", "7"]).0, 2);
    assert_eq!(call(&["classify", "--f", "4"]).0, 2);
    assert_eq!(call(&["realize", "--angles", "1/2,x,1/2,1/2"]).0, 2);
    assert_eq!(call(&["generate", "--family", "Ep", "--f", "12"]).0, 2);
}

#[test]
fn failed_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.json");
    assert_eq!(call(&["verify", "--tiling", missing.to_str().unwrap()]).0, 1);
    // A square with all angles π/2 does not close.
    assert_eq!(call(&["realize", "--angles", "1/2,1/2,1/2,1/2"]).0, 1);
}

#[test]
fn generated_maps_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (args, avc) in [
        (vec!["--family", "E", "--f", "10"], "αγδ, β⁵"),
        (vec!["--family", "Ep", "--f", "12", "--flip", "2@0,2,4"], "αγδ, α³, β²γδ"),
        (vec!["--family", "Eppp", "--f", "16"], "αγδ, γ³δ, αβ³, αβ²δ²"),
        (vec!["--family", "fixture:S5"], "αβ², α²δ², γδ³, αγ³δ, γ⁶"),
    ] {
        let path = dir.path().join("map.json");
        let mut full = vec!["generate"];
        full.extend(&args);
        full.extend(["--out", path.to_str().unwrap()]);
        assert_eq!(call(&full).0, 0, "{args:?}");
        let (code, out, _) = call(&["verify", "--tiling", path.to_str().unwrap(), "--avc", avc]);
        assert_eq!(code, 0, "{args:?}: {out}");
        assert!(out.contains("verdict: pass"));
    }
}

#[test]
fn wrong_expected_avc_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.json");
    assert_eq!(call(&["generate", "--family", "E", "--f", "8", "--out", path.to_str().unwrap()]).0, 0);
    assert_eq!(call(&["verify", "--tiling", path.to_str().unwrap(), "--avc", "αγδ, β³"]).0, 1);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["classify", "--f", "24", "--format", "json"],
        vec!["generate", "--family", "Eppp", "--f", "22"],
        vec!["tables"],
    ] {
        let first = call(&args);
        assert_eq!(first.0, 0, "{args:?}");
        assert_eq!(first, call(&args), "{args:?}");
    }
}

#[test]
fn six_tiles_give_the_cube_avc() {
    let (code, out, _) = call(&["classify", "--f", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("AVC {αγδ, β³}"), "{out}");
    assert!(out.contains("6αγδ, 2β³"), "{out}");
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("m.json");
    let svg = dir.path().join("m.svg");
    assert_eq!(call(&["generate", "--family", "fixture:QP6", "--out", map.to_str().unwrap()]).0, 0);
    assert_eq!(call(&["render", "--tiling", map.to_str().unwrap(), "--out", svg.to_str().unwrap()]).0, 0);
    let text = std::fs::read_to_string(svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches("<g id=\"tile-").count() == 24);
}

#[test]
fn realize_reports_edges() {
    let (code, out, _) = call(&["realize", "--angles", "1,1/2,1/2,1/4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["geometry"]["a"].as_f64().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-9, "{out}");
}
