//! The six-tile case, where every vertex has degree three: all combinatorial
//! tilings come from the search, and angle-sum consistency with at least
//! three distinct angle values and the exchange rule (α ≥ β iff γ ≥ δ)
//! filters them.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::search::{search, SearchSpec};
use super::{Tile, TileAngles, TilingMap};
use crate::exact_angles::{rat, rint, Rat};
use crate::geometry::TileKind;
use crate::linalg::solve_affine;
use crate::vertex_enum::{Avc, VertexCombo};

const F: u32 = 6;

#[derive(Clone, Debug, Serialize)]
pub struct MinimalTiling {
    pub tile_kind: TileKind,
    pub avc: Avc,
    /// Vertex counts in the order of `avc.vertices`.
    pub counts: Vec<u64>,
    /// An exact angle assignment (π units) satisfying every filter.
    pub witness: [Rat; 4],
    /// Dimension of the angle family cut out by the vertex sums.
    pub free_parameters: usize,
    #[serde(skip)]
    pub tiles: Vec<Tile>,
}

impl MinimalTiling {
    pub fn map(&self) -> TilingMap {
        let angles = TileAngles::exact(self.witness.clone());
        TilingMap::new(self.tile_kind, F, angles, self.tiles.clone(), Some(serde_json::json!({ "family": "E" })))
    }
}

fn degree3_vertices(kind: TileKind) -> Vec<VertexCombo> {
    let mut out = Vec::new();
    for m in 0..=3u32 {
        for n in 0..=3 - m {
            for k in 0..=3 - m - n {
                let l = 3 - m - n - k;
                let parity = (k + l) % 2 == 0 && (kind == TileKind::A3B || (n + k) % 2 == 0);
                if parity {
                    out.push(VertexCombo::new(m, n, k, l));
                }
            }
        }
    }
    out
}

fn admissible(x: &[Rat; 4]) -> bool {
    let two = rint(2);
    if !x.iter().all(|v| v.is_positive() && *v < two) {
        return false;
    }
    let mut distinct = x.to_vec();
    distinct.sort();
    distinct.dedup();
    distinct.len() >= 3 && (x[0] >= x[1]) == (x[2] >= x[3]) && (x[1] >= x[0]) == (x[3] >= x[2])
}

/// First admissible point of the affine family on a grid of step 1/12.
fn witness(vertices: &[VertexCombo]) -> Option<([Rat; 4], usize)> {
    let mut a: Vec<Vec<Rat>> =
        vertices.iter().map(|v| v.as_array().iter().map(|&e| rint(e as i64)).collect()).collect();
    let mut b = vec![rint(2); a.len()];
    a.push(vec![Rat::one(); 4]);
    b.push(rint(2) + rat(4, F as i64));
    let sol = solve_affine(&a, &b)?;
    let dims = sol.null_basis.len();
    let steps: Vec<Rat> = (-24..=24).map(|i| rat(i, 12)).collect();
    let mut idx = vec![0usize; dims];
    loop {
        let mut x: [Rat; 4] = std::array::from_fn(|j| sol.particular[j].clone());
        for (d, nb) in sol.null_basis.iter().enumerate() {
            for j in 0..4 {
                x[j] += &steps[idx[d]] * &nb[j];
            }
        }
        if admissible(&x) {
            return Some((x, dims));
        }
        // Odometer over the grid.
        let mut d = 0;
        loop {
            if d == dims {
                return None;
            }
            idx[d] += 1;
            if idx[d] < steps.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// All six-tile tilings up to isomorphism, with a3b AVCs merged under the
/// α↔β, γ↔δ symmetry (the representative containing αγδ is kept).
pub fn classify_six(kind: TileKind) -> Vec<MinimalTiling> {
    let outcome = search(&SearchSpec::within(kind, F, degree3_vertices(kind)));
    let mut out: Vec<MinimalTiling> = Vec::new();
    for tiles in outcome.tilings {
        let probe = TilingMap::new(kind, F, TileAngles::exact(std::array::from_fn(|_| Rat::zero())), tiles.clone(), None);
        let multiset = probe.vertex_multiset();
        let vertices: Vec<VertexCombo> = multiset.keys().copied().collect();
        let Some((witness, free_parameters)) = witness(&vertices) else { continue };
        let avc = Avc::from_vertices(vertices);
        let agd = VertexCombo::new(1, 0, 1, 1);
        if kind == TileKind::A3B {
            if let Some(prev) = out.iter_mut().find(|o| o.avc == avc.swapped()) {
                if !prev.avc.vertices.contains(&agd) && avc.vertices.contains(&agd) {
                    *prev = MinimalTiling { tile_kind: kind, avc, counts: multiset.values().copied().collect(), witness, free_parameters, tiles };
                }
                continue;
            }
        }
        out.push(MinimalTiling { tile_kind: kind, avc, counts: multiset.values().copied().collect(), witness, free_parameters, tiles });
    }
    out
}
