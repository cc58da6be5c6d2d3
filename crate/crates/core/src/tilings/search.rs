//! Growth search for tilings with prescribed vertices, and a canonical form
//! for comparing maps up to relabelling and reflection.
//!
//! The search keeps a connected patch of placed tiles whose free edges form
//! one or more counterclockwise boundary cycles (holes of a sphere). At the
//! most constrained free edge, the far side is either a new tile or another
//! free edge of the same cycle. Gluing two free edges identifies their ends
//! and may split the hole in two; a hole bounded by two edges is sealed at
//! once since the maps are simple. Vertices must stay sub-combinations of
//! allowed vertices, and vertices leaving the boundary must be allowed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{edge_type, EdgeType, Orientation, Tile, TilingMap};
use crate::geometry::TileKind;
use crate::vertex_enum::VertexCombo;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub tile_kind: TileKind,
    pub f: u32,
    /// Allowed vertices.
    pub vertices: Vec<VertexCombo>,
    /// Exact number of each allowed vertex, when prescribed.
    pub counts: Option<Vec<u64>>,
    /// Stop after this many pairwise non-isomorphic tilings.
    pub max_solutions: usize,
    /// Stop after this many search nodes.
    pub max_nodes: u64,
}

impl SearchSpec {
    /// First tiling with exactly the vertex multiset `target`.
    pub fn exact(tile_kind: TileKind, f: u32, target: &BTreeMap<VertexCombo, u64>) -> Self {
        SearchSpec {
            tile_kind,
            f,
            vertices: target.keys().copied().collect(),
            counts: Some(target.values().copied().collect()),
            max_solutions: 1,
            max_nodes: 20_000_000,
        }
    }

    /// All tilings whose vertices lie in `vertices`.
    pub fn within(tile_kind: TileKind, f: u32, vertices: impl IntoIterator<Item = VertexCombo>) -> Self {
        SearchSpec {
            tile_kind,
            f,
            vertices: vertices.into_iter().collect(),
            counts: None,
            max_solutions: usize::MAX,
            max_nodes: 20_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Pairwise non-isomorphic tilings, each in canonical form.
    pub tilings: Vec<Vec<Tile>>,
    pub nodes: u64,
    /// False when a limit stopped the search early.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug)]
enum Move {
    /// Glue the chosen edge to edge `k` of the same cycle.
    Glue { k: usize },
    Add { orientation: Orientation, j: usize },
}

#[derive(Clone)]
struct Hole {
    verts: Vec<usize>,
    /// `types[i]` is the type of the edge `verts[i] → verts[i + 1]`.
    types: Vec<EdgeType>,
}

#[derive(Clone)]
struct State {
    /// Corner vertex ids in label order.
    tiles: Vec<(Orientation, [usize; 4])>,
    counts: Vec<[u32; 4]>,
    /// Edge multiplicities; above one only transiently.
    adj: Vec<BTreeMap<usize, u32>>,
    holes: Vec<Hole>,
    /// Finished vertices per allowed combination.
    done: Vec<u64>,
}

struct Ctx<'a> {
    spec: &'a SearchSpec,
    allowed: Vec<[u32; 4]>,
    seen: BTreeSet<Vec<u32>>,
    found: Vec<Vec<Tile>>,
    nodes: u64,
    aborted: bool,
}

fn unit(label: usize) -> [u32; 4] {
    let mut e = [0; 4];
    e[label] = 1;
    e
}

fn plus(a: [u32; 4], b: [u32; 4]) -> [u32; 4] {
    std::array::from_fn(|i| a[i] + b[i])
}

impl Ctx<'_> {
    fn remaining(&self, s: &State, i: usize) -> u64 {
        match &self.spec.counts {
            Some(c) => c[i].saturating_sub(s.done[i]),
            None => u64::MAX,
        }
    }

    /// Some allowed vertex with spare count contains `c`.
    fn fits(&self, s: &State, c: [u32; 4]) -> bool {
        self.allowed
            .iter()
            .enumerate()
            .any(|(i, v)| (0..4).all(|k| c[k] <= v[k]) && self.remaining(s, i) > 0)
    }

    fn complete_ok(&self, s: &State, c: [u32; 4]) -> bool {
        self.allowed.iter().position(|v| *v == c).is_some_and(|i| self.remaining(s, i) > 0)
    }

    /// Candidate moves for edge `i` of hole `h`, screened by vertex counts only.
    fn moves_at(&self, s: &State, h: usize, i: usize) -> Vec<Move> {
        let hole = &s.holes[h];
        let len = hole.verts.len();
        let v = hole.verts[i];
        let y = hole.verts[(i + 1) % len];
        let t = hole.types[i];
        let mut out = Vec::new();

        for k in 0..len {
            if k == i || hole.types[k] != t {
                continue;
            }
            let (p, q) = (hole.verts[k], hole.verts[(k + 1) % len]);
            let inner = (k + len - i - 1) % len;
            let outer = (i + len - k - 1) % len;
            if inner == 1 || outer == 1 {
                continue;
            }
            let cv = if q == v { s.counts[v] } else { plus(s.counts[v], s.counts[q]) };
            let cy = if p == y { s.counts[y] } else { plus(s.counts[y], s.counts[p]) };
            let ok_v = if outer == 0 { self.complete_ok(s, cv) } else { self.fits(s, cv) };
            let ok_y = if inner == 0 { self.complete_ok(s, cy) } else { self.fits(s, cy) };
            if ok_v && ok_y {
                out.push(Move::Glue { k });
            }
        }

        if s.tiles.len() < self.spec.f as usize {
            for orientation in [Orientation::Ccw, Orientation::Cw] {
                let seq = orientation.ccw_labels();
                for j in 0..4 {
                    let (ly, lv) = (seq[j], seq[(j + 1) % 4]);
                    if edge_type(self.spec.tile_kind, ly, lv) != t {
                        continue;
                    }
                    if self.fits(s, plus(s.counts[v], unit(lv)))
                        && self.fits(s, plus(s.counts[y], unit(ly)))
                        && self.fits(s, unit(seq[(j + 2) % 4]))
                        && self.fits(s, unit(seq[(j + 3) % 4]))
                    {
                        out.push(Move::Add { orientation, j });
                    }
                }
            }
        }
        out
    }

    /// Counts a vertex leaving the boundary; false if it is not allowed.
    fn finish(&self, s: &mut State, v: usize) -> bool {
        match self.allowed.iter().position(|a| *a == s.counts[v]) {
            Some(i) if self.remaining(s, i) > 0 => {
                s.done[i] += 1;
                true
            }
            _ => false,
        }
    }

    /// Glues edge `i` to edge `k` of hole `h`. Returns false if the result
    /// breaks simplicity or the vertex constraints.
    fn glue(&self, s: &mut State, h: usize, i: usize, k: usize) -> bool {
        let hole = s.holes.swap_remove(h);
        let len = hole.verts.len();
        let b = &hole.verts;
        let (v, y) = (b[i], b[(i + 1) % len]);
        let (p, q) = (b[k], b[(k + 1) % len]);
        if q != v && !merge(s, v, q) {
            return false;
        }
        if p != y && !merge(s, y, p) {
            return false;
        }
        if !unlink(s, v, y) {
            return false;
        }
        let take = |from: usize, n: usize| -> Hole {
            let idx = (0..n).map(|d| (from + d) % len);
            Hole {
                verts: idx.clone().map(|j| if b[j] == q { v } else { b[j] }).collect(),
                types: idx.map(|j| hole.types[j]).collect(),
            }
        };
        let inner = take(i + 1, (k + len - i - 1) % len);
        let outer = take(k + 1, (i + len - k - 1) % len);
        let mut touched = vec![v, y];
        for (part, closed) in [(inner, y), (outer, v)] {
            match part.verts.len() {
                0 => {
                    if !self.finish(s, closed) {
                        return false;
                    }
                }
                1 => return false,
                2 => {
                    let (a, c) = (part.verts[0], part.verts[1]);
                    if part.types[0] != part.types[1] || !unlink(s, a, c) {
                        return false;
                    }
                    if !self.finish(s, a) || !self.finish(s, c) {
                        return false;
                    }
                    touched.extend([a, c]);
                }
                _ => {
                    if !part.verts.iter().all(|&w| self.fits(s, s.counts[w])) {
                        return false;
                    }
                    s.holes.push(part);
                }
            }
        }
        touched.iter().all(|&w| s.adj[w].values().all(|&m| m == 1))
    }

    fn add(&self, s: &mut State, h: usize, i: usize, orientation: Orientation, j: usize) -> bool {
        let kind = self.spec.tile_kind;
        let hole = &s.holes[h];
        let len = hole.verts.len();
        let (v, y) = (hole.verts[i], hole.verts[(i + 1) % len]);
        let seq = orientation.ccw_labels();
        let (ly, lv, l1, l2) = (seq[j], seq[(j + 1) % 4], seq[(j + 2) % 4], seq[(j + 3) % 4]);
        let n1 = s.counts.len();
        let n2 = n1 + 1;
        s.counts.push(unit(l1));
        s.counts.push(unit(l2));
        s.adj.push(BTreeMap::new());
        s.adj.push(BTreeMap::new());
        s.counts[v] = plus(s.counts[v], unit(lv));
        s.counts[y] = plus(s.counts[y], unit(ly));
        let mut corners = [0usize; 4];
        corners[ly] = y;
        corners[lv] = v;
        corners[l1] = n1;
        corners[l2] = n2;
        s.tiles.push((orientation, corners));
        link(s, v, n1);
        link(s, n1, n2);
        link(s, n2, y);
        // v → y becomes v → n1 → n2 → y.
        let hole = &mut s.holes[h];
        hole.verts.splice(i + 1..i + 1, [n1, n2]);
        hole.types.splice(i..i + 1, [edge_type(kind, lv, l1), edge_type(kind, l1, l2), edge_type(kind, l2, ly)]);
        true
    }

    fn record(&mut self, s: &State) {
        let mut relabel: BTreeMap<usize, u32> = BTreeMap::new();
        let tiles: Vec<Tile> = s
            .tiles
            .iter()
            .enumerate()
            .map(|(id, (o, c))| {
                let corners = c.map(|v| {
                    let next = relabel.len() as u32;
                    *relabel.entry(v).or_insert(next)
                });
                Tile::new(id as u32, *o, corners)
            })
            .collect();
        let (code, canonical) = canonical_form(self.spec.tile_kind, &tiles);
        if self.seen.insert(code) {
            self.found.push(canonical);
        }
    }

    fn dfs(&mut self, s: &State) {
        if self.found.len() >= self.spec.max_solutions || self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.spec.max_nodes {
            self.aborted = true;
            return;
        }
        if s.holes.is_empty() {
            let counts_ok = self.spec.counts.as_ref().is_none_or(|c| *c == s.done);
            if s.tiles.len() == self.spec.f as usize && counts_ok {
                self.record(s);
            }
            return;
        }
        let mut best: Option<(usize, usize, Vec<Move>)> = None;
        'scan: for h in 0..s.holes.len() {
            for i in 0..s.holes[h].verts.len() {
                let moves = self.moves_at(s, h, i);
                if moves.is_empty() {
                    return;
                }
                if best.as_ref().is_none_or(|(_, _, m)| moves.len() < m.len()) {
                    let single = moves.len() == 1;
                    best = Some((h, i, moves));
                    if single {
                        break 'scan;
                    }
                }
            }
        }
        let Some((h, i, moves)) = best else { return };
        for mv in moves {
            let mut next = s.clone();
            let ok = match mv {
                Move::Glue { k } => self.glue(&mut next, h, i, k),
                Move::Add { orientation, j } => self.add(&mut next, h, i, orientation, j),
            };
            if ok {
                self.dfs(&next);
            }
            if self.found.len() >= self.spec.max_solutions || self.aborted {
                return;
            }
        }
    }
}

fn link(s: &mut State, a: usize, b: usize) {
    *s.adj[a].entry(b).or_insert(0) += 1;
    *s.adj[b].entry(a).or_insert(0) += 1;
}

/// Removes one copy of the edge a–b; false if it is absent.
fn unlink(s: &mut State, a: usize, b: usize) -> bool {
    for (x, z) in [(a, b), (b, a)] {
        match s.adj[x].get_mut(&z) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                s.adj[x].remove(&z);
            }
            None => return false,
        }
    }
    true
}

/// Replaces `y` by `x` everywhere; false if they are adjacent.
fn merge(s: &mut State, x: usize, y: usize) -> bool {
    if s.adj[x].contains_key(&y) {
        return false;
    }
    for (_, c) in s.tiles.iter_mut() {
        for v in c.iter_mut() {
            if *v == y {
                *v = x;
            }
        }
    }
    for hole in s.holes.iter_mut() {
        for v in hole.verts.iter_mut() {
            if *v == y {
                *v = x;
            }
        }
    }
    s.counts[x] = plus(s.counts[x], s.counts[y]);
    s.counts[y] = [0; 4];
    let ys = std::mem::take(&mut s.adj[y]);
    for (n, m) in ys {
        s.adj[n].remove(&y);
        *s.adj[n].entry(x).or_insert(0) += m;
        *s.adj[x].entry(n).or_insert(0) += m;
    }
    true
}

/// Runs the search from a single counterclockwise tile.
pub fn search(spec: &SearchSpec) -> SearchOutcome {
    let mut ctx = Ctx {
        spec,
        allowed: spec.vertices.iter().map(|v| v.as_array()).collect(),
        seen: BTreeSet::new(),
        found: Vec::new(),
        nodes: 0,
        aborted: false,
    };
    let kind = spec.tile_kind;
    let mut start = State {
        tiles: vec![(Orientation::Ccw, [0, 1, 2, 3])],
        counts: (0..4).map(unit).collect(),
        adj: vec![BTreeMap::new(); 4],
        holes: vec![Hole {
            verts: vec![0, 1, 2, 3],
            types: (0..4).map(|i| edge_type(kind, i, (i + 1) % 4)).collect(),
        }],
        done: vec![0; spec.vertices.len()],
    };
    for i in 0..4 {
        link(&mut start, i, (i + 1) % 4);
    }
    if spec.f >= 2 && (0..4).all(|l| ctx.fits(&start, unit(l))) {
        ctx.dfs(&start);
    }
    SearchOutcome { tilings: ctx.found, nodes: ctx.nodes, complete: !ctx.aborted }
}

/// Canonical code and relabelled tiles: the lexicographically least
/// breadth-first encoding over all root tiles, with and without reflection.
///
/// The encoding visits tiles from the root, crossing edges in the order
/// αβ, βγ, γδ, δα, numbering vertices as first met. Reflection reverses every
/// orientation mark.
pub fn canonical_form(kind: TileKind, tiles: &[Tile]) -> (Vec<u32>, Vec<Tile>) {
    let _ = kind;
    let n = tiles.len();
    let mut by_edge: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for (i, t) in tiles.iter().enumerate() {
        for e in 0..4 {
            let (p, q) = (t.corners[e], t.corners[(e + 1) % 4]);
            by_edge.entry((p.min(q), p.max(q))).or_default().push(i);
        }
    }
    let across: Vec<[Option<usize>; 4]> = tiles
        .iter()
        .enumerate()
        .map(|(i, t)| {
            std::array::from_fn(|e| {
                let (p, q) = (t.corners[e], t.corners[(e + 1) % 4]);
                by_edge[&(p.min(q), p.max(q))].iter().copied().find(|&o| o != i)
            })
        })
        .collect();

    let encode = |root: usize, mirror: bool| -> (Vec<u32>, Vec<usize>, BTreeMap<u32, u32>) {
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        let mut names: BTreeMap<u32, u32> = BTreeMap::new();
        let mut code = Vec::with_capacity(5 * n);
        while let Some(t) = queue.pop_front() {
            order.push(t);
            let flipped = (tiles[t].orientation == Orientation::Cw) != mirror;
            code.push(flipped as u32);
            for v in tiles[t].corners {
                let next = names.len() as u32;
                code.push(*names.entry(v).or_insert(next));
            }
            for o in across[t].iter().flatten() {
                if !visited[*o] {
                    visited[*o] = true;
                    queue.push_back(*o);
                }
            }
        }
        (code, order, names)
    };

    let mut best: Option<(Vec<u32>, usize, bool)> = None;
    for root in 0..n {
        for mirror in [false, true] {
            let (code, _, _) = encode(root, mirror);
            if best.as_ref().is_none_or(|(b, _, _)| code < *b) {
                best = Some((code, root, mirror));
            }
        }
    }
    let Some((code, root, mirror)) = best else { return (Vec::new(), Vec::new()) };
    let (_, order, names) = encode(root, mirror);
    let canonical = order
        .iter()
        .enumerate()
        .map(|(id, &t)| {
            let o = if mirror { tiles[t].orientation.toggled() } else { tiles[t].orientation };
            Tile::new(id as u32, o, tiles[t].corners.map(|v| names[&v]))
        })
        .collect();
    (code, canonical)
}

/// Same map up to relabelling of tiles and vertices and reflection.
pub fn isomorphic(a: &TilingMap, b: &TilingMap) -> bool {
    a.tile_kind == b.tile_kind
        && a.tiles.len() == b.tiles.len()
        && canonical_form(a.tile_kind, &a.tiles).0 == canonical_form(b.tile_kind, &b.tiles).0
}
