//! Regenerates the fixture documents under `crates/core/fixtures/`.

use std::path::Path;

use quadtile::tilings::fixtures::{build_fixture, FIXTURES};
use quadtile::tilings::{save_tiling, verify_tiling};

fn main() -> anyhow::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for fx in FIXTURES {
        let map = build_fixture(fx.name)?;
        let report = verify_tiling(&map, &map.angles, None)?;
        anyhow::ensure!(report.pass, "{} does not verify:\n{report}", fx.name);
        std::fs::write(dir.join(format!("{}.json", fx.name)), save_tiling(&map))?;
        println!("{}: {}", fx.name, report.multiset_string());
    }
    Ok(())
}
