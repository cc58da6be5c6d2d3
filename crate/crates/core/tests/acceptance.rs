//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. A criterion may fail only for the reasons listed in
//! `KNOWN`; anything else makes the run exit non-zero.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quadtile::cli;
use quadtile::diophantine::{
    agd_split_avc, classify_nonrational, classify_nonrational_agd, pair_families, pattern_refines,
    brute_force_vertices, NonRationalSplit,
};
use quadtile::exact_angles::rat;
use quadtile::geometry::tables::{a2bc_rows, check_row, isolated_rows};
use quadtile::geometry::{alpha_delta_sq_roots, TileKind, EXIST_TOL};
use quadtile::rational_solver::{classify_rational, classify_rational_agd, myerson_self_check};
use quadtile::tilings::fixtures::{load_fixture, FIXTURES};
use quadtile::tilings::minimal::classify_six;
use quadtile::tilings::search::isomorphic;
use quadtile::tilings::{
    earth_map_avc, flipped_avc, generate_earth_map, generate_flipped, load_tiling, parse_multiset,
    verify_tiling, FlipKind, FlipSpec, TilingMap,
};
use quadtile::vertex_enum::{enumerate_vertices, AngleSet, Avc, AvcPattern, EnumFilters, PatExp, VertexCombo};

/// Failures whose cause is a misprint in the published data rather than in the code.
const KNOWN: &[(u32, &str)] = &[(1, "S1_12 δ")];

struct Outcome {
    pass: bool,
    detail: String,
    /// Failure labels, matched against `KNOWN`.
    misses: Vec<String>,
}

impl Outcome {
    fn from_misses(misses: Vec<String>, detail: String) -> Self {
        Outcome { pass: misses.is_empty(), detail, misses }
    }
}

fn avc(s: &str) -> Avc {
    Avc::parse(s).unwrap_or_else(|| panic!("bad AVC {s}"))
}

fn pattern(s: &str) -> AvcPattern {
    AvcPattern::parse(s).unwrap_or_else(|| panic!("bad pattern {s}"))
}

fn same_up_to_swap(a: &Avc, b: &Avc) -> bool {
    a == b || a.swapped() == *b
}

// ---------------------------------------------------------------------------
// 1, 2: table rows

fn table_rows() -> Vec<quadtile::geometry::tables::TableRow> {
    isolated_rows().into_iter().chain(a2bc_rows()).collect()
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let mut misses = Vec::new();
    let mut worst_closed: f64 = 0.0;
    let mut worst_approx: f64 = 0.0;
    let mut notes = Vec::new();
    let rows = table_rows();
    for row in &rows {
        match check_row(row, EXIST_TOL) {
            Ok(c) => {
                worst_closed = worst_closed.max(c.closed_form_error);
                if c.closed_form_error >= 1e-9 {
                    misses.push(format!("{} closed form {:e}", row.name, c.closed_form_error));
                }
                for m in &c.approx_misses {
                    misses.push(format!("{} {}", row.name, m.symbol));
                    notes.push(format!(
                        "{} {} printed ≈{:.2}π, realized {:.4}π",
                        row.name, m.symbol, m.published_pi, m.realized_pi
                    ));
                }
                if c.approx_misses.is_empty() {
                    worst_approx = worst_approx.max(c.approx_error_pi);
                }
            }
            Err(e) => misses.push(format!("{} not realized: {e}", row.name)),
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        misses.push(format!("runtime {elapsed:?}"));
    }
    let mut detail = format!(
        "{} rows, closed forms within {:.1e}, other rounded values within {:.4}π, {:?}",
        rows.len(),
        worst_closed,
        worst_approx,
        elapsed
    );
    if !notes.is_empty() {
        detail.push_str(&format!(
            "; {} (the text quotes 0.7902π for the same closed form, so the table entry is a misprint)",
            notes.join("; ")
        ));
    }
    Outcome::from_misses(misses, detail)
}

fn closure_residuals() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    let rows = table_rows();
    for row in &rows {
        match check_row(row, EXIST_TOL) {
            Ok(c) => {
                worst = worst.max(c.closure);
                if c.closure.is_nan() || c.closure >= 1e-9 {
                    misses.push(format!("{} closure {:e}", row.name, c.closure));
                }
            }
            Err(e) => misses.push(format!("{} not realized: {e}", row.name)),
        }
    }
    Outcome::from_misses(misses, format!("{} geometries, max rotation-product residual {worst:.1e}", rows.len()))
}

// ---------------------------------------------------------------------------
// 3: rational census

const RATIONAL_ROWS: &[(u32, &str)] = &[
    (8, "{α³, βδ², δ⁴, α²γ², αγ⁴}"),
    (16, "{αβ², αγ², αβδ², β⁴, β²γ², γ⁴, αδ⁴, β³δ², βγ²δ², β²δ⁴, γ²δ⁴, βδ⁶, δ⁸}"),
    (20, "{αβ², γδ³, α²γδ}"),
    (24, "{αβ², α⁴, γδ³, αβγ², αγ⁴}"),
    (36, "{αβ², α²δ², γδ³, α³γ², αγ³δ, γ⁶}"),
    (36, "{αδ², αβ³, γ³δ, α²βγ², α⁶}"),
    (60, "{αβ², γδ³, α³β, α⁵, βγ⁴, α²γ⁴}"),
    (84, "{αβ², γδ³, α³γδ, γ⁵δ}"),
    (132, "{αβ², γδ³, α⁴γ², αγ⁶}"),
];

/// Rows with `αγδ`; E‴ uses the exponent of the displayed equation, `αβ^{(f−4)/6}δ²`.
const RATIONAL_AGD_ROWS: &[(&str, &str)] = &[
    ("E", "{αγδ, β^{f/2}}"),
    ("E'", "{αγδ, α^mβ^n, β^nγδ}"),
    ("E'", "{αγδ, α³, β^nγδ}"),
    ("E''", "{αγδ, αβ^n, β^nγ²δ²}"),
    ("E'''", "{αγδ, γ³δ, αβ^{(f+2)/6}, αβ^{(f-4)/6}δ²}"),
];

const AGD_FS: [u32; 6] = [8, 10, 12, 18, 20, 30];

fn rational_census() -> Outcome {
    let mut misses = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut found: Vec<(u32, Avc, bool)> = Vec::new();
    let mut pair_only = 0;
    let mut fs: Vec<u32> = (8..=64).step_by(2).collect();
    fs.extend([84, 132]);
    for &f in &fs {
        let t = Instant::now();
        for c in classify_rational(f) {
            if c.pair_only {
                pair_only += 1;
                continue;
            }
            found.push((f, c.avc, c.counts.is_some()));
        }
        slowest = slowest.max(t.elapsed());
    }
    let mut matched = vec![false; found.len()];
    for (f, row) in RATIONAL_ROWS {
        let row_avc = avc(row);
        let hits: Vec<usize> =
            (0..found.len()).filter(|&i| found[i].0 == *f && same_up_to_swap(&found[i].1, &row_avc)).collect();
        match hits.as_slice() {
            [i] => {
                matched[*i] = true;
                if *f == 20 && found[*i].2 {
                    misses.push("f=20 row not flagged counting-infeasible".into());
                }
            }
            _ => misses.push(format!("f={f} {row}: {} matches", hits.len())),
        }
    }
    for (i, (f, a, _)) in found.iter().enumerate() {
        if !matched[i] {
            misses.push(format!("unexpected f={f} {a}"));
        }
    }
    let infeasible: Vec<u32> = found.iter().filter(|x| !x.2).map(|x| x.0).collect();

    // Rows with αγδ: every record contains the earth-map vertices, and each row embeds somewhere.
    let mut embeds: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for f in AGD_FS {
        let t = Instant::now();
        let recs = classify_rational_agd(f);
        slowest = slowest.max(t.elapsed());
        let e = pattern(RATIONAL_AGD_ROWS[0].1);
        for c in &recs {
            if !e.embeds_in(&c.avc, Some(f)) {
                misses.push(format!("f={f} {} lacks the earth-map vertices", c.avc));
            }
        }
        for (i, (_, row)) in RATIONAL_AGD_ROWS.iter().enumerate() {
            let p = pattern(row);
            if recs.iter().any(|c| p.embeds_in(&c.avc, Some(f))) {
                embeds.entry(i).or_default().push(f);
            }
        }
    }
    for (i, (name, row)) in RATIONAL_AGD_ROWS.iter().enumerate() {
        if !embeds.contains_key(&i) {
            misses.push(format!("{name} {row} not found"));
        }
    }
    if embeds.get(&0).map(Vec::len) != Some(AGD_FS.len()) {
        misses.push("E missing at some f".into());
    }
    if embeds.get(&4).map(|v| v.contains(&10)) != Some(true) {
        misses.push("E‴ missing at f=10".into());
    }
    if slowest >= Duration::from_secs(10) {
        misses.push(format!("slowest f took {slowest:?}"));
    }
    let agd: Vec<String> = RATIONAL_AGD_ROWS
        .iter()
        .enumerate()
        .map(|(i, (n, _))| format!("{n}@{:?}", embeds.get(&i).cloned().unwrap_or_default()))
        .collect();
    Outcome::from_misses(
        misses,
        format!(
            "{} AVCs equal the {} rows up to α↔β,γ↔δ ({} pair-only records excluded); counting-infeasible at f={:?}; αγδ rows {}; slowest f {:?}",
            found.len(),
            RATIONAL_ROWS.len(),
            pair_only,
            infeasible,
            agd.join(" "),
            slowest
        ),
    )
}

// ---------------------------------------------------------------------------
// 4: non-rational census

#[derive(Clone, Copy)]
enum FRange {
    Exactly(u32),
    AtLeast(u32),
}

impl FRange {
    fn admits(self, f: u32) -> bool {
        match self {
            FRange::Exactly(x) => f == x,
            FRange::AtLeast(x) => f >= x,
        }
    }
}

const NONRATIONAL_ROWS: &[(FRange, &str)] = &[
    (FRange::Exactly(12), "{α³, αγ², β²δ²}"),
    (FRange::Exactly(12), "{α³, αδ², β²γ²}"),
    (FRange::Exactly(24), "{α³, βγ², β²δ⁴}"),
    (FRange::Exactly(24), "{α³, βδ², β²γ⁴}"),
    (FRange::AtLeast(8), "{α²β, βδ², γ^k}"),
    (FRange::AtLeast(8), "{αδ², βγ², α^mβ^m}"),
    (FRange::Exactly(24), "{α³, γ⁴, β²δ²}"),
    (FRange::Exactly(24), "{α³, δ⁴, β²γ²}"),
    (FRange::Exactly(24), "{α³, γ²δ², β⁴, β²γδ}"),
    (FRange::Exactly(36), "{α³, γ²δ², αβ³}"),
    (FRange::Exactly(60), "{α³, γ²δ², β⁵}"),
    (FRange::AtLeast(16), "{αβ², γ²δ², α^m, α^mβ, α^mγδ}"),
    (FRange::AtLeast(16), "{αγ², β²δ², α^m}"),
    (FRange::AtLeast(16), "{αδ², β²γ², α^m}"),
    (FRange::AtLeast(16), "{αγ², αβδ², β^n}"),
    (FRange::AtLeast(16), "{αδ², αβγ², β^n}"),
];

/// The last two rows are also realized at f = 12 (by S1 at twelve tiles).
const TWELVE_TILE_ROWS: [usize; 2] = [14, 15];

const NONRATIONAL_AGD_ROWS: &[(&str, &str)] = &[
    ("E", "{αγδ, β^{f/2}}"),
    ("E'", "{αγδ, α^m, β^nγδ}"),
    ("E'", "{αγδ, α^mβ^n, β^nγδ}"),
    ("E''", "{αγδ, αβ^n, γ^kδ^k}"),
    ("E''", "{αγδ, αβ^n, β^nγ^kδ^k}"),
];

fn is_fixed(p: &quadtile::vertex_enum::VertexPattern) -> bool {
    p.exps.iter().all(|e| matches!(e, PatExp::Fixed(_)))
}

/// `a` uses only vertices of `row`, holds every fixed vertex of `row`, and
/// instantiates at least one parametric vertex when the row has any.
fn is_instance(row: &AvcPattern, a: &Avc, f: u32) -> bool {
    [row.clone(), row.swapped()].iter().any(|r| {
        let fixed_present = r.vertices.iter().filter(|p| is_fixed(p)).all(|p| a.vertices.iter().any(|v| p.matches(v, Some(f))));
        let params: Vec<_> = r.vertices.iter().filter(|p| !is_fixed(p)).collect();
        let param_present = params.is_empty() || a.vertices.iter().any(|v| params.iter().any(|p| p.matches(v, Some(f))));
        r.covers(a, Some(f)) && fixed_present && param_present
    })
}

fn nonrational_census() -> Outcome {
    let start = Instant::now();
    let mut misses = Vec::new();
    let rows: Vec<AvcPattern> = NONRATIONAL_ROWS.iter().map(|(_, s)| pattern(s)).collect();
    let mut hits: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let mut records = 0;
    let mut twelve = Vec::new();
    for f in (8..=64).step_by(2) {
        for rec in classify_nonrational(f) {
            records += 1;
            let mut owner = None;
            for (i, (range, _)) in NONRATIONAL_ROWS.iter().enumerate() {
                if range.admits(f) && is_instance(&rows[i], &rec.avc, f) {
                    owner = Some(i);
                    hits.entry(i).or_default().push(f);
                    if let FRange::Exactly(_) = range {
                        let exact = avc(NONRATIONAL_ROWS[i].1);
                        if !same_up_to_swap(&exact, &rec.avc) {
                            misses.push(format!("f={f} {} differs from {}", rec.avc, NONRATIONAL_ROWS[i].1));
                        }
                    }
                }
            }
            if owner.is_none() {
                let special = f == 12 && TWELVE_TILE_ROWS.iter().any(|&i| is_instance(&rows[i], &rec.avc, f));
                if special {
                    twelve.push(rec.avc.to_string());
                } else {
                    misses.push(format!("f={f} {} matches no row", rec.avc));
                }
            }
        }
    }
    for (i, (_, row)) in NONRATIONAL_ROWS.iter().enumerate() {
        if !hits.contains_key(&i) {
            misses.push(format!("{row} not produced"));
        }
    }

    // Rows with αγδ: the classifier's families, checked against the split
    // analysis and against the flip modifications that realize them.
    let fams = classify_nonrational_agd();
    let expected: Vec<AvcPattern> = NONRATIONAL_AGD_ROWS.iter().map(|(_, s)| pattern(s)).collect();
    let got: Vec<AvcPattern> = fams.iter().map(|x| x.avc.clone()).collect();
    if got != expected || fams.iter().zip(NONRATIONAL_AGD_ROWS).any(|(x, (n, _))| x.tiling != *n) {
        misses.push("αγδ family rows differ".into());
    }
    let split = agd_split_avc(NonRationalSplit::GammaDelta);
    for (p, (n, s)) in expected.iter().zip(NONRATIONAL_AGD_ROWS) {
        if !pattern_refines(p, &split) {
            misses.push(format!("{n} {s} is not allowed by the γ,δ split"));
        }
    }
    let mut agd_hits = vec![0usize; expected.len()];
    for (f, a) in flip_avcs(8, 64) {
        if let Some(i) = expected.iter().position(|p| is_instance(p, &a, f)) { agd_hits[i] += 1 }
    }
    for f in (8..=64).step_by(2) {
        if is_instance(&expected[0], &earth_map_avc(f, TileKind::A3B), f) {
            agd_hits[0] += 1;
        }
    }
    for (i, n) in agd_hits.iter().enumerate() {
        if *n == 0 {
            misses.push(format!("{} {} has no earth-map or flip instance", NONRATIONAL_AGD_ROWS[i].0, NONRATIONAL_AGD_ROWS[i].1));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        misses.push(format!("runtime {elapsed:?}"));
    }
    Outcome::from_misses(
        misses,
        format!(
            "{records} AVCs over f=8..64 cover all {} rows; f=12 instances of the β^n rows: {}; {} αγδ rows with {:?} flip/earth-map instances; {elapsed:?}",
            NONRATIONAL_ROWS.len(),
            twelve.join(" "),
            expected.len(),
            agd_hits
        ),
    )
}

/// AVCs of every admissible flip of consecutive blocks for even `f` in range.
fn flip_avcs(lo: u32, hi: u32) -> Vec<(u32, Avc)> {
    let mut out = Vec::new();
    for f in (lo..=hi).step_by(2) {
        let h = f / 2;
        for kind in [FlipKind::EPrime, FlipKind::EDoublePrime] {
            for s in 1..h {
                for blocks in 1..=h / s {
                    if flip_is_admissible(kind, h, s, blocks) {
                        out.push((f, flipped_avc(f, kind, s, blocks)));
                    }
                }
            }
        }
    }
    out
}

/// Flips that leave no vertex of degree below three.
fn flip_is_admissible(kind: FlipKind, h: u32, s: u32, blocks: u32) -> bool {
    let rest = h - s * blocks;
    match kind {
        FlipKind::EPrime => s + 2 >= 3 && blocks + rest >= 3,
        FlipKind::EDoublePrime => 1 + s >= 3 && rest + 2 * blocks >= 3,
    }
}

// ---------------------------------------------------------------------------
// 5: Diophantine families against brute force

fn diophantine_oracle() -> Outcome {
    const BOUND: u32 = 64;
    let start = Instant::now();
    let fams = pair_families();
    let mut misses = Vec::new();
    let mut compared = 0;
    let even: Vec<u32> = (2..=64).step_by(2).collect();
    for (pair, cond, fam) in &fams {
        // One sweep of the box per pair, recording every even f each point satisfies.
        let mut oracle: BTreeMap<u32, BTreeSet<VertexCombo>> = BTreeMap::new();
        for m in 0..=BOUND {
            for n in 0..=BOUND {
                for k in 0..=BOUND {
                    for l in 0..=BOUND {
                        let e = [m as i64, n as i64, k as i64, l as i64];
                        if m + n + k + l < 3 {
                            continue;
                        }
                        let dot = |c: &[i64; 4]| c.iter().zip(&e).map(|(a, b)| a * b).sum::<i64>();
                        if dot(&cond.lambda) != 0 {
                            continue;
                        }
                        let a = dot(&cond.mu0) + cond.mu0_const;
                        let b = 4 * dot(&cond.mu1);
                        for &f in &even {
                            if a * f as i64 + b == 0 {
                                oracle.entry(f).or_default().insert(VertexCombo::new(m, n, k, l));
                            }
                        }
                    }
                }
            }
        }
        // Each family is derived under the pair's lower bound on f.
        for &f in even.iter().filter(|&&f| f >= pair.threshold) {
            let got: BTreeSet<VertexCombo> = fam
                .instantiate(cond, f)
                .into_iter()
                .filter(|v| v.as_array().iter().all(|&e| e <= BOUND))
                .collect();
            let want = oracle.remove(&f).unwrap_or_default();
            compared += 1;
            if got != want {
                let extra: Vec<_> = got.difference(&want).take(3).map(|v| v.to_string()).collect();
                let missing: Vec<_> = want.difference(&got).take(3).map(|v| v.to_string()).collect();
                misses.push(format!("{pair} f={f}: extra {extra:?} missing {missing:?}"));
            }
        }
    }
    // The library's own oracle agrees with the sweep at the largest f.
    for (pair, cond, fam) in fams.iter().take(4) {
        let lib: BTreeSet<VertexCombo> = brute_force_vertices(cond, 64, BOUND).into_iter().collect();
        let got: BTreeSet<VertexCombo> = fam.instantiate(cond, 64).into_iter().collect();
        if lib != got {
            misses.push(format!("{pair}: library oracle differs at f=64"));
        }
    }
    Outcome::from_misses(
        misses,
        format!(
            "{} pairs, {compared} (pair, even f) comparisons from each pair's threshold up to 64, exponent bound {BOUND}, {:?}",
            fams.len(),
            start.elapsed()
        ),
    )
}

// ---------------------------------------------------------------------------
// 6: vertex enumeration against the quadruple loop

fn quadruple_loop(num: [i64; 4], den: i64) -> BTreeSet<VertexCombo> {
    let cap = |x: i64| (2 * den / x).min(64) as u32;
    let mut out = BTreeSet::new();
    for m in 0..=cap(num[0]) {
        for n in 0..=cap(num[1]) {
            for k in 0..=cap(num[2]) {
                for l in 0..=cap(num[3]) {
                    let sum = num[0] * m as i64 + num[1] * n as i64 + num[2] * k as i64 + num[3] * l as i64;
                    if sum == 2 * den && m + n + k + l >= 3 && (k + l) % 2 == 0 {
                        out.insert(VertexCombo::new(m, n, k, l));
                    }
                }
            }
        }
    }
    out
}

fn enumeration_oracle() -> Outcome {
    const DENS: [i64; 8] = [2, 3, 4, 5, 6, 8, 10, 12];
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut misses = Vec::new();
    let mut total = 0;
    for trial in 0..100 {
        // A common denominator keeps the oracle in integers.
        let den = 120;
        let num: [i64; 4] = std::array::from_fn(|_| {
            let q = DENS[rng.gen_range(0..DENS.len())];
            let p = rng.gen_range(1..2 * q);
            p * den / q
        });
        let angles = AngleSet::Exact(num.map(|p| rat(p, den)));
        let got: BTreeSet<VertexCombo> =
            enumerate_vertices(&angles, &EnumFilters::default()).expect("angles in (0, 2π)").vertices.into_iter().collect();
        let want = quadruple_loop(num, den);
        total += want.len();
        if got != want {
            misses.push(format!("trial {trial}: {num:?}/{den}"));
        }
    }
    Outcome::from_misses(misses, format!("100 seeded quadruples, {total} vertices in total"))
}

// ---------------------------------------------------------------------------
// 7, 8

fn myerson() -> Outcome {
    let r = myerson_self_check();
    let mut misses = r.failures.clone();
    if r.rows_checked != 15 * 8 {
        misses.push(format!("{} row checks", r.rows_checked));
    }
    if r.max_residual.is_nan() || r.max_residual >= 1e-12 {
        misses.push(format!("residual {:e}", r.max_residual));
    }
    Outcome::from_misses(
        misses,
        format!("{} row×permutation checks, {} one-parameter checks, max residual {:.1e}", r.rows_checked, r.type_ii_checked, r.max_residual),
    )
}

fn root_finding() -> Outcome {
    // Independent closed forms: δ of S1 at twelve and sixteen tiles.
    let d12 = PI - (10f64.sqrt() / 4.0).acos();
    let r16 = (7.0 + 2f64.sqrt() + 5f64.sqrt() - 10f64.sqrt()).sqrt() / 12f64.sqrt();
    let d16 = PI - r16.acos();
    let mut misses = Vec::new();
    let mut detail = Vec::new();
    for (f, want, printed) in [(12, d12, 0.7902), (16, d16, 0.7898)] {
        let roots = alpha_delta_sq_roots(f);
        match roots.as_slice() {
            [r] => {
                let err = (r.x - want).abs() / PI;
                // The printed four digits are truncated, not rounded.
                if err >= 1e-6 || (r.x / PI - printed).abs() >= 1e-4 {
                    misses.push(format!("f={f} root {:.6}π", r.x / PI));
                }
                detail.push(format!("f={f} δ={:.6}π (closed form Δ {err:.1e}π)", r.x / PI));
            }
            _ => misses.push(format!("f={f}: {} roots", roots.len())),
        }
    }
    let r20 = alpha_delta_sq_roots(20);
    if !r20.is_empty() {
        misses.push(format!("f=20: {} roots", r20.len()));
    }
    detail.push(format!("f=20 {} roots", r20.len()));
    Outcome::from_misses(misses, detail.join(", "))
}

// ---------------------------------------------------------------------------
// 9: tiling suite

fn corruptions(map: &TilingMap) -> [TilingMap; 2] {
    // Rotating one tile's corner labels moves its b-edge onto an a-edge slot.
    let mut relabel = map.clone();
    let t = &mut relabel.tiles[0];
    t.corners = [t.corners[1], t.corners[2], t.corners[3], t.corners[0]];
    let mut swap = map.clone();
    let t = &mut swap.tiles[0];
    t.corners.swap(0, 2);
    [relabel, swap]
}

fn detected(map: &TilingMap, expected: &Avc) -> bool {
    match verify_tiling(map, &map.angles, Some(expected)) {
        Ok(r) => !r.pass,
        Err(_) => true,
    }
}

fn tiling_suite() -> Outcome {
    let mut misses = Vec::new();
    let mut corrupted = 0;
    for fx in FIXTURES {
        let want = parse_multiset(fx.vertices).expect("fixture multiset");
        let map = match load_fixture(fx.name) {
            Ok(m) => m,
            Err(e) => {
                misses.push(format!("{} does not load: {e}", fx.name));
                continue;
            }
        };
        let expected = Avc::from_vertices(want.keys().copied());
        match verify_tiling(&map, &map.angles, Some(&expected)) {
            Ok(r) if r.pass && r.vertex_multiset == want => {}
            Ok(r) => misses.push(format!("{}: pass={} multiset {}", fx.name, r.pass, r.multiset_string())),
            Err(e) => misses.push(format!("{}: {e}", fx.name)),
        }
        // The tabulated "Vertices" column, where the table gives one.
        if let Some(row) = fx.row.and_then(|r| table_rows().into_iter().find(|x| x.name == r)) {
            if parse_multiset(&row.vertices) != Some(want.clone()) {
                misses.push(format!("{}: table lists {}", fx.name, row.vertices));
            }
        }
        for bad in corruptions(&map) {
            corrupted += 1;
            if !detected(&bad, &expected) {
                misses.push(format!("{}: corruption not detected", fx.name));
            }
        }
    }

    let patterns: Vec<AvcPattern> =
        RATIONAL_AGD_ROWS.iter().chain(NONRATIONAL_AGD_ROWS).map(|(_, s)| pattern(s)).collect();
    let mut maps = 0;
    for f in (6..=24).step_by(2) {
        for kind in [TileKind::A3B, TileKind::A2BC] {
            let m = generate_earth_map(f, kind).expect("earth map");
            maps += 1;
            let want = earth_map_avc(f, kind);
            if !verify_tiling(&m, &m.angles, Some(&want)).map(|r| r.pass).unwrap_or(false) {
                misses.push(format!("earth map {kind} f={f} fails"));
            }
        }
        let h = f / 2;
        for kind in [FlipKind::EPrime, FlipKind::EDoublePrime] {
            for s in 1..h {
                for blocks in 1..=h / s {
                    if !flip_is_admissible(kind, h, s, blocks) {
                        continue;
                    }
                    let spec = FlipSpec { kind, s, positions: (0..blocks).map(|b| b * s).collect() };
                    let want = flipped_avc(f, kind, s, blocks);
                    if f >= 8 && !patterns.iter().any(|p| is_instance(p, &want, f)) {
                        misses.push(format!("f={f} {want} is not a listed αγδ AVC"));
                    }
                    match generate_flipped(f, &spec) {
                        Ok(m) => {
                            maps += 1;
                            let r = verify_tiling(&m, &m.angles, Some(&want));
                            if !r.as_ref().map(|r| r.pass).unwrap_or(false) {
                                misses.push(format!("flip {kind:?} f={f} s={s}×{blocks} fails"));
                            }
                            for bad in corruptions(&m) {
                                corrupted += 1;
                                if !detected(&bad, &want) {
                                    misses.push(format!("flip {kind:?} f={f}: corruption not detected"));
                                }
                            }
                        }
                        Err(e) => misses.push(format!("flip {kind:?} f={f} s={s}×{blocks}: {e}")),
                    }
                }
            }
        }
    }
    Outcome::from_misses(
        misses,
        format!("{} fixtures, {maps} earth maps and flips for f=6..24, {corrupted} corruptions detected", FIXTURES.len()),
    )
}

// ---------------------------------------------------------------------------
// 10: six tiles

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("quadtile").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn six_tiles() -> Outcome {
    let mut misses = Vec::new();
    let (code, out) = run_cli(&["classify", "--f", "6", "--format", "json"]);
    let records: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    let avcs: Vec<&str> = records.as_array().map(|a| a.iter().filter_map(|r| r["avc"].as_str()).collect()).unwrap_or_default();
    if code != 0 || avcs != ["{αγδ, β³}"] {
        misses.push(format!("classify --f 6 exit {code}, AVCs {avcs:?}"));
    }
    let (code, doc) = run_cli(&["generate", "--family", "E", "--f", "6"]);
    let cube = generate_earth_map(6, TileKind::A3B).expect("earth map");
    match load_tiling(doc.as_bytes()) {
        Ok(m) if code == 0 => {
            let ok = verify_tiling(&m, &m.angles, Some(&avc("{αγδ, β³}"))).map(|r| r.pass).unwrap_or(false);
            let edges = m.edges().len();
            if !ok || m.vertices().len() != 8 || edges != 12 || !isomorphic(&m, &cube) {
                misses.push("generated map is not the cube".into());
            }
        }
        _ => misses.push(format!("generate exit {code}")),
    }
    let minimal = classify_six(TileKind::A3B);
    if minimal.len() != 1 || !isomorphic(&minimal[0].map(), &cube) {
        misses.push(format!("{} six-tile classes", minimal.len()));
    }
    Outcome::from_misses(misses, "classify gives {αγδ, β³} only; the generated map verifies and is the cube".into())
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "table reproduction", table_reproduction),
        (2, "closure residual", closure_residuals),
        (3, "rational AVC census", rational_census),
        (4, "non-rational AVC census", nonrational_census),
        (5, "diophantine families vs brute force", diophantine_oracle),
        (6, "vertex enumeration vs quadruple loop", enumeration_oracle),
        (7, "sine identity self-check", myerson),
        (8, "free-angle roots", root_finding),
        (9, "tiling suite", tiling_suite),
        (10, "six-tile endpoint", six_tiles),
    ];
    let mut unexpected = 0;
    for (n, label, run) in criteria {
        let o = run();
        println!("{} {n:>2} {label}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        for m in &o.misses {
            let known = KNOWN.iter().any(|(k, s)| *k == n && m == s);
            if !known {
                unexpected += 1;
            }
            println!("       {} {m}", if known { "known:" } else { "miss:" });
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected failures");
        std::process::exit(1);
    }
}
