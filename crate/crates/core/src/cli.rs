//! Command-line front end. [`run`] parses arguments, writes results to the
//! given streams and returns the process exit code: 0 on success, 1 when a
//! verification or realization fails, 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::diophantine::{classify_nonrational, classify_nonrational_agd};
use crate::exact_angles::{parse_rat, rat_to_f64, Rat};
use crate::geometry::tables::table_records;
use crate::geometry::{self, realize_a2bc, realize_a3b, simplicity_check, Simplicity, TileKind};
use crate::rational_solver::{classify_rational, classify_rational_agd, Classified, CuratedNote};
use crate::tilings::fixtures::load_fixture;
use crate::tilings::minimal::classify_six;
use crate::tilings::{
    generate_earth_map, generate_flipped, generate_rearrangement, load_tiling, render_svg, save_tiling, verify_tiling,
    FlipKind, FlipSpec, TilingMap,
};
use crate::vertex_enum::{sort_for_display, Avc, VertexCombo};

#[derive(Parser, Debug)]
#[command(name = "quadtile", version, about = "Tilings of the sphere by congruent a3b and a2bc quadrilaterals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Branch {
    Rational,
    Nonrational,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    A3b,
    A2bc,
}

impl From<Kind> for TileKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::A3b => TileKind::A3B,
            Kind::A2bc => TileKind::A2BC,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Angle sets and AVCs admitted at a given number of tiles.
    Classify {
        #[arg(long)]
        f: u32,
        #[arg(long, value_enum, default_value = "all")]
        branch: Branch,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Realizes a tile from its angles, given in units of π.
    Realize {
        /// Four comma-separated angles α,β,γ,δ in units of π, e.g. "2/3,1/2,1/3,1/2".
        #[arg(long)]
        angles: String,
        /// Equal edge a of an a²bc tile, in units of π; omit for a³b.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Regenerates the angle and edge tables with independently realized values.
    Tables {
        /// Output file; CSV unless it ends in .json. Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Writes a tiling document.
    Generate {
        /// E, Ep, Epp, Eppp or fixture:NAME.
        #[arg(long)]
        family: String,
        #[arg(long)]
        f: Option<u32>,
        /// Flip blocks as s@pos,pos,... (required for Ep and Epp).
        #[arg(long)]
        flip: Option<String>,
        /// Tile kind of an earth map.
        #[arg(long, value_enum, default_value = "a3b")]
        kind: Kind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks a tiling document and prints the report.
    Verify {
        #[arg(long)]
        tiling: PathBuf,
        /// Expected AVC, e.g. "αγδ, β³".
        #[arg(long)]
        avc: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Draws the schematic net of a tiling document as SVG.
    Render {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

type Outcome = Result<i32, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn check(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Check(e.into())
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify { f, branch, format } => classify(f, branch, format, out),
        Command::Realize { angles, a, format } => realize(&angles, a.as_deref(), format, out),
        Command::Tables { out: path, format } => tables(path, format, out),
        Command::Generate { family, f, flip, kind, out: path } => generate(&family, f, flip.as_deref(), kind, path, out),
        Command::Verify { tiling, avc, format } => verify(&tiling, avc.as_deref(), format, out),
        Command::Render { tiling, out: path } => render(&tiling, &path),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e:#}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Check(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(check)?;
    Ok(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// classify

#[derive(Serialize)]
struct ClassifyRecord {
    f: u32,
    branch: &'static str,
    angles: String,
    avc: String,
    /// One feasible vertex multiset, e.g. `6αγδ, 2β³`.
    counts: Option<String>,
    feasibility: &'static str,
    realization: String,
    notes: Vec<String>,
}

fn realization_verdict(angles: &[Rat; 4]) -> String {
    let radians: [f64; 4] = std::array::from_fn(|i| rat_to_f64(&angles[i]) * std::f64::consts::PI);
    match realize_a3b(radians, geometry::tolerance()) {
        Ok(g) => match simplicity_check(&g).verdict {
            Simplicity::Simple => "simple".into(),
            Simplicity::Unknown => "realized, simplicity undecided".into(),
        },
        Err(e) => e.to_string(),
    }
}

fn note_text(n: &CuratedNote) -> String {
    match n {
        CuratedNote::NoTilingKnown { reason } => format!("no tiling: {reason}"),
        CuratedNote::ReducesTo { avc, tilings } => format!("reduces to {avc}: {}", tilings.join(", ")),
    }
}

/// Counts are stored in the AVC's set order; print them as a multiset.
fn count_string(avc: &Avc, counts: &[u64]) -> String {
    let count = |v: &VertexCombo| avc.vertices.iter().position(|w| w == v).map_or(0, |i| counts[i]);
    let parts: Vec<String> = sort_for_display(&avc.vertices)
        .iter()
        .filter(|v| count(v) > 0)
        .map(|v| format!("{}{v}", count(v)))
        .collect();
    parts.join(", ")
}

fn rational_record(c: &Classified) -> ClassifyRecord {
    ClassifyRecord {
        f: c.f,
        branch: "rational",
        angles: c.angle_string(),
        avc: c.avc.to_string(),
        counts: c.counts.as_ref().map(|n| count_string(&c.avc, n)),
        feasibility: if c.counts.is_some() { "feasible" } else { "counting-infeasible" },
        realization: realization_verdict(&c.angles),
        notes: c.notes.iter().map(note_text).collect(),
    }
}

fn classify_records(f: u32, branch: Branch) -> Vec<ClassifyRecord> {
    let mut records = Vec::new();
    if f == 6 {
        let earth = generate_earth_map(f, TileKind::A3B)
            .ok()
            .and_then(|m| verify_tiling(&m, &m.angles, None).ok().filter(|r| r.pass).map(|_| {
                let r = m.angles.radians_at(f);
                let parts: Vec<String> = ["α", "β", "γ", "δ"]
                    .iter()
                    .zip(r)
                    .map(|(n, x)| format!("{n} ≈ {:.4}π", x / std::f64::consts::PI))
                    .collect();
                parts.join(", ")
            }));
        for m in classify_six(TileKind::A3B) {
            let sums: Vec<String> = m
                .avc
                .vertices
                .iter()
                .map(|v| {
                    let terms: Vec<String> = ["α", "β", "γ", "δ"]
                        .iter()
                        .zip(v.as_array())
                        .filter(|(_, e)| *e > 0)
                        .map(|(n, e)| if e == 1 { n.to_string() } else { format!("{e}{n}") })
                        .collect();
                    format!("{} = 2π", terms.join(" + "))
                })
                .collect();
            records.push(ClassifyRecord {
                f,
                branch: "minimal",
                angles: format!("{}-parameter family with {}", m.free_parameters, sums.join(", ")),
                avc: m.avc.to_string(),
                counts: Some(count_string(&m.avc, &m.counts)),
                feasibility: "feasible",
                realization: match &earth {
                    Some(angles) => format!("simple, realized by the earth map tile {angles}"),
                    None => "not realized".into(),
                },
                notes: vec!["earth map E (cube)".into()],
            });
        }
        return records;
    }
    if branch != Branch::Nonrational {
        records.extend(classify_rational(f).iter().map(rational_record));
        records.extend(classify_rational_agd(f).iter().map(|c| {
            let mut r = rational_record(c);
            r.notes.insert(0, "with αγδ".into());
            r
        }));
    }
    if branch != Branch::Rational {
        for n in classify_nonrational(f) {
            records.push(ClassifyRecord {
                f,
                branch: "nonrational",
                angles: format!("non-rational, forced by {}", n.pair),
                avc: n.avc.to_string(),
                counts: Some(count_string(&n.avc, &n.counts)),
                feasibility: "feasible",
                realization: "not determined by the AVC".into(),
                notes: vec![],
            });
        }
        for fam in classify_nonrational_agd() {
            records.push(ClassifyRecord {
                f,
                branch: "nonrational",
                angles: "non-rational, with αγδ".into(),
                avc: fam.avc.to_string(),
                counts: None,
                feasibility: "family pattern",
                realization: "not determined by the AVC".into(),
                notes: vec![format!("realized by {}", fam.tiling)],
            });
        }
    }
    records
}

fn classify(f: u32, branch: Branch, format: Format, out: &mut dyn Write) -> Outcome {
    if f < 6 || f % 2 == 1 {
        return Err(usage(anyhow!("--f must be an even integer ≥ 6, got {f}")));
    }
    let records = classify_records(f, branch);
    match format {
        Format::Json => emit(out, &to_json(&records)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &records {
                w.write_record([
                    r.f.to_string(),
                    r.branch.to_string(),
                    r.angles.clone(),
                    r.avc.clone(),
                    r.counts.clone().unwrap_or_default(),
                    r.feasibility.to_string(),
                    r.realization.clone(),
                    r.notes.join("; "),
                ])
                .map_err(check)?;
            }
            let bytes = w.into_inner().map_err(|e| check(anyhow!("{e}")))?;
            emit(out, &String::from_utf8(bytes).expect("utf-8 csv"))
        }
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                s.push_str(&format!("f={} [{}] {}\n  AVC {}\n  {}", r.f, r.branch, r.angles, r.avc, r.feasibility));
                if let Some(c) = &r.counts {
                    s.push_str(&format!(" ({c})"));
                }
                s.push_str(&format!("; {}\n", r.realization));
                for n in &r.notes {
                    s.push_str(&format!("  note: {n}\n"));
                }
            }
            if records.is_empty() {
                s.push_str(&format!("f={f}: no admissible angle sets\n"));
            }
            emit(out, &s)
        }
    }
}

// ---------------------------------------------------------------------------
// realize

fn parse_pi(s: &str) -> anyhow::Result<f64> {
    let t = s.trim();
    if let Ok(r) = parse_rat(t) {
        return Ok(rat_to_f64(&r) * std::f64::consts::PI);
    }
    let x: f64 = t.parse().with_context(|| format!("bad angle or edge value {t:?}"))?;
    if !x.is_finite() {
        bail!("bad angle or edge value {t:?}");
    }
    Ok(x * std::f64::consts::PI)
}

fn realize(spec: &str, a: Option<&str>, format: Format, out: &mut dyn Write) -> Outcome {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        return Err(usage(anyhow!("--angles needs four comma-separated values, got {}", parts.len())));
    }
    let mut angles = [0.0; 4];
    for (slot, p) in angles.iter_mut().zip(&parts) {
        *slot = parse_pi(p).map_err(usage)?;
    }
    let tol = geometry::tolerance();
    let result = match a {
        Some(a) => realize_a2bc(angles, parse_pi(a).map_err(usage)?, tol),
        None => realize_a3b(angles, tol),
    };
    let g = result.map_err(check)?;
    let simplicity = simplicity_check(&g);
    match format {
        Format::Json | Format::Csv => emit(out, &to_json(&json!({ "geometry": g, "simplicity": simplicity }))),
        Format::Text => {
            let pi = std::f64::consts::PI;
            let mut s = format!("{} tile, {:?}, {:?}\n", g.tile_kind, g.shape, g.degeneracy);
            for (n, x) in ["α", "β", "γ", "δ"].iter().zip(g.angles) {
                s.push_str(&format!("  {n} = {x} ({}π)\n", x / pi));
            }
            s.push_str(&format!("  a = {} ({}π)\n  b = {} ({}π)\n", g.a, g.a / pi, g.b, g.b / pi));
            if let Some(c) = g.c {
                s.push_str(&format!("  c = {c} ({}π)\n", c / pi));
            }
            s.push_str(&format!("  closure residual {:e}\n  simplicity {:?}\n", g.residuals.closure, simplicity.verdict));
            emit(out, &s)
        }
    }
}

// ---------------------------------------------------------------------------
// tables

fn tables(path: Option<PathBuf>, format: Option<Format>, out: &mut dyn Write) -> Outcome {
    let format = format.unwrap_or(match &path {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    });
    let records = table_records(geometry::tolerance());
    let text = match format {
        Format::Json => to_json(&records),
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &records {
                w.serialize(r).map_err(check)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| check(anyhow!("{e}")))?).expect("utf-8 csv")
        }
    };
    match path {
        Some(p) => {
            std::fs::write(&p, text).with_context(|| format!("writing {}", p.display())).map_err(check)?;
            Ok(0)
        }
        None => emit(out, &text),
    }
}

// ---------------------------------------------------------------------------
// generate / verify / render

fn parse_flip(kind: FlipKind, text: &str) -> anyhow::Result<FlipSpec> {
    let mut s: Option<u32> = None;
    let mut positions = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        let pos = match item.split_once('@') {
            Some((a, b)) => {
                let value: u32 = a.trim().parse().with_context(|| format!("bad flip size in {item:?}"))?;
                if s.is_some_and(|prev| prev != value) {
                    bail!("all flip blocks must share one size");
                }
                s = Some(value);
                b
            }
            None => item,
        };
        positions.push(pos.trim().parse::<u32>().with_context(|| format!("bad flip position in {item:?}"))?);
    }
    let s = s.ok_or_else(|| anyhow!("--flip needs the form s@pos,pos,..."))?;
    Ok(FlipSpec { kind, s, positions })
}

fn build_map(family: &str, f: Option<u32>, flip: Option<&str>, kind: Kind) -> Result<TilingMap, Failure> {
    if let Some(name) = family.strip_prefix("fixture:") {
        let map = load_fixture(name).map_err(usage)?;
        if let Some(f) = f {
            if f != map.f {
                return Err(usage(anyhow!("fixture {name} has f = {}, not {f}", map.f)));
            }
        }
        return Ok(map);
    }
    let f = f.ok_or_else(|| usage(anyhow!("--f is required for family {family}")))?;
    let map = match family {
        "E" => generate_earth_map(f, kind.into()),
        "Ep" | "Epp" => {
            let flip_kind = if family == "Ep" { FlipKind::EPrime } else { FlipKind::EDoublePrime };
            let text = flip.ok_or_else(|| usage(anyhow!("--flip is required for family {family}")))?;
            let spec = parse_flip(flip_kind, text).map_err(usage)?;
            generate_flipped(f, &spec)
        }
        "Eppp" => {
            if f < 10 || (f - 4) % 6 != 0 {
                return Err(usage(anyhow!("the rearrangement needs f = 6q + 4 with q ≥ 1, got {f}")));
            }
            generate_rearrangement((f - 4) / 6)
        }
        other => return Err(usage(anyhow!("unknown family {other:?}; expected E, Ep, Epp, Eppp or fixture:NAME"))),
    };
    map.map_err(usage)
}

fn generate(
    family: &str,
    f: Option<u32>,
    flip: Option<&str>,
    kind: Kind,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Outcome {
    let map = build_map(family, f, flip, kind)?;
    let bytes = save_tiling(&map);
    match path {
        Some(p) => {
            std::fs::write(&p, bytes).with_context(|| format!("writing {}", p.display())).map_err(check)?;
            Ok(0)
        }
        None => emit(out, &String::from_utf8(bytes).expect("utf-8 json")),
    }
}

fn read_map(path: &PathBuf) -> Result<TilingMap, Failure> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display())).map_err(check)?;
    load_tiling(&bytes).map_err(check)
}

fn verify(path: &PathBuf, avc: Option<&str>, format: Format, out: &mut dyn Write) -> Outcome {
    let map = read_map(path)?;
    let expected = match avc {
        Some(s) => Some(Avc::parse(s).ok_or_else(|| usage(anyhow!("cannot parse AVC {s:?}")))?),
        None => None,
    };
    let report = verify_tiling(&map, &map.angles, expected.as_ref()).map_err(check)?;
    let text = match format {
        Format::Json | Format::Csv => to_json(&report),
        Format::Text => format!("{report}\n"),
    };
    emit(out, &text)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn render(path: &PathBuf, svg: &PathBuf) -> Outcome {
    let map = read_map(path)?;
    std::fs::write(svg, render_svg(&map)).with_context(|| format!("writing {}", svg.display())).map_err(check)?;
    Ok(0)
}
