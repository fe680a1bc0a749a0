//! Path machinery and the two classic constructive theorems the rest of the
//! crate leans on: the Gallai–Roy coloring-or-path dichotomy and Raynaud's
//! red/blue Hamilton cycle in 2-colored complete symmetric digraphs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{set_bit, words_for, Color, DirectedPath, EdgeColoring, OrientedGraph, VertexColoring};

pub const RED: Color = 1;
pub const BLUE: Color = 2;

/// Default vertex limit for the bitmask longest-path search.
pub const DEFAULT_EXACT_LIMIT: usize = 16;
/// Hard ceiling for the bitmask search (memory is `4 * 2^n` bytes).
const EXACT_HARD_LIMIT: usize = 26;

/// Kahn order, smallest available vertex first. A cyclic graph yields
/// `Error::Cyclic` with a cycle witness.
pub fn topological_order(g: &OrientedGraph) -> Result<Vec<usize>> {
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(u)) = ready.pop() {
        order.push(u);
        for w in g.out_neighbors(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(std::cmp::Reverse(w));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    Err(Error::Cyclic {
        cycle: cycle_among(g, |v| indeg[v] > 0),
    })
}

/// Walk backwards inside the leftover set of Kahn's algorithm; every such
/// vertex keeps an in-neighbor in the set, so the walk must close a cycle.
fn cycle_among(g: &OrientedGraph, leftover: impl Fn(usize) -> bool) -> Vec<usize> {
    let start = (0..g.n()).find(|&v| leftover(v)).expect("leftover vertex");
    let mut pos = vec![usize::MAX; g.n()];
    let mut walk = Vec::new();
    let mut v = start;
    while pos[v] == usize::MAX {
        pos[v] = walk.len();
        walk.push(v);
        v = g
            .in_neighbors(v)
            .find(|&u| leftover(u))
            .expect("leftover vertex has a leftover in-neighbor");
    }
    let mut cycle = walk[pos[v]..].to_vec();
    cycle.reverse();
    cycle
}

pub fn is_acyclic(g: &OrientedGraph) -> bool {
    topological_order(g).is_ok()
}

/// `levels[v]` = length of a longest path ending at `v`, plus the
/// predecessor on one such path.
fn longest_ending(g: &OrientedGraph) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    let order = topological_order(g)?;
    let mut level = vec![0usize; g.n()];
    let mut pred = vec![None; g.n()];
    for &u in &order {
        for w in g.out_neighbors(u) {
            if level[u] + 1 > level[w] {
                level[w] = level[u] + 1;
                pred[w] = Some(u);
            }
        }
    }
    Ok((level, pred))
}

/// Longest path of an acyclic graph in `O(|V| + |E|)` word operations.
pub fn longest_path_dag(g: &OrientedGraph) -> Result<DirectedPath> {
    if g.n() == 0 {
        return Ok(DirectedPath::empty());
    }
    let (level, pred) = longest_ending(g)?;
    let mut end = 0;
    for v in 1..g.n() {
        if level[v] > level[end] {
            end = v;
        }
    }
    let mut vertices = vec![end];
    let mut v = end;
    while let Some(u) = pred[v] {
        vertices.push(u);
        v = u;
    }
    vertices.reverse();
    Ok(DirectedPath::new(vertices))
}

/// `Z_i = { v : longest path ending at v has length i }`, `i = 0..=t`.
pub fn level_decomposition(z: &OrientedGraph) -> Result<Vec<Vec<usize>>> {
    let (level, _) = longest_ending(z)?;
    let t = level.iter().copied().max().unwrap_or(0);
    let mut levels = vec![Vec::new(); if z.n() == 0 { 0 } else { t + 1 }];
    for (v, &l) in level.iter().enumerate() {
        levels[l].push(v);
    }
    Ok(levels)
}

/// Per-vertex levels (longest path ending at each vertex).
pub fn vertex_levels(z: &OrientedGraph) -> Result<Vec<usize>> {
    Ok(longest_ending(z)?.0)
}

/// Exact longest path by dynamic programming over vertex subsets:
/// `ends[S]` is the set of vertices at which some path spanning exactly
/// `S` ends.
pub fn longest_path_exact(g: &OrientedGraph, limit: usize) -> Result<DirectedPath> {
    let n = g.n();
    let limit = limit.min(EXACT_HARD_LIMIT);
    if n > limit {
        return Err(Error::SizeLimit {
            what: "exact longest path vertex count",
            size: n as u128,
            limit: limit as u128,
        });
    }
    if n == 0 {
        return Ok(DirectedPath::empty());
    }
    let out: Vec<u32> = (0..n)
        .map(|v| g.out_neighbors(v).fold(0u32, |m, w| m | 1 << w))
        .collect();
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best_mask = 1usize;
    for mask in 1usize..(1 << n) {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        if mask.count_ones() > best_mask.count_ones() {
            best_mask = mask;
        }
        let mut bits = e;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut next = out[v] & !(mask as u32);
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    // Walk back through the table.
    let mut mask = best_mask;
    let mut v = ends[mask].trailing_zeros() as usize;
    let mut vertices = vec![v];
    while mask.count_ones() > 1 {
        let prev = mask & !(1 << v);
        let mut cands = ends[prev];
        let u = loop {
            let u = cands.trailing_zeros() as usize;
            if out[u] >> v & 1 == 1 {
                break u;
            }
            cands &= cands - 1;
        };
        vertices.push(u);
        mask = prev;
        v = u;
    }
    vertices.reverse();
    Ok(DirectedPath::new(vertices))
}

/// Exact longest path by backtracking over simple paths. No vertex limit;
/// the cost grows with the number of simple paths, so it suits sparse graphs.
pub fn longest_path_backtracking(g: &OrientedGraph) -> DirectedPath {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.out_neighbors(v).collect()).collect();
    let mut on_path = vec![false; n];
    let mut current = Vec::new();
    let mut best: Vec<usize> = Vec::new();

    fn go(
        v: usize,
        adj: &[Vec<usize>],
        on_path: &mut [bool],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        n: usize,
    ) -> bool {
        on_path[v] = true;
        current.push(v);
        if current.len() > best.len() {
            best.clone_from(current);
        }
        let done = best.len() == n
            || adj[v]
                .iter()
                .any(|&w| !on_path[w] && go(w, adj, on_path, current, best, n));
        current.pop();
        on_path[v] = false;
        done
    }

    for s in 0..n {
        if (g.in_degree(s) == 0 || g.out_degree(s) > 0) && go(s, &adj, &mut on_path, &mut current, &mut best, n) {
            break;
        }
    }
    if best.is_empty() && n > 0 {
        best.push(0);
    }
    DirectedPath::new(best)
}

/// Outcome of the constructive Gallai–Roy theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GallaiRoy {
    /// A proper coloring with at most `threshold` colors.
    Coloring(VertexColoring),
    /// A path of the input graph with at least `threshold` edges.
    Path(DirectedPath),
}

/// Maximal acyclic spanning subgraph: edges inserted in graph order, each
/// kept unless its head already reaches its tail.
pub fn maximal_acyclic_subgraph(g: &OrientedGraph) -> OrientedGraph {
    let n = g.n();
    let words = words_for(n);
    let mut rows = vec![0u64; n * words];
    let mut keep = vec![false; g.edge_count()];
    let mut seen = vec![0u64; words];
    let mut stack = Vec::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        // Does v reach u in H?
        seen.iter_mut().for_each(|w| *w = 0);
        set_bit(&mut seen, v);
        stack.clear();
        stack.push(v);
        let mut reaches = false;
        'search: while let Some(x) = stack.pop() {
            let row = &rows[x * words..(x + 1) * words];
            for i in 0..words {
                let mut fresh = row[i] & !seen[i];
                seen[i] |= fresh;
                while fresh != 0 {
                    let y = i * 64 + fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    if y == u {
                        reaches = true;
                        break 'search;
                    }
                    stack.push(y);
                }
            }
        }
        if !reaches {
            set_bit(&mut rows[u * words..(u + 1) * words], v);
            keep[id] = true;
        }
    }
    g.edge_subgraph(|id| keep[id])
}

/// Either a proper coloring with at most `threshold` colors or a path with
/// at least `threshold` edges. Vertices are colored by their level in a
/// maximal acyclic spanning subgraph `H`, plus one; every edge outside `H`
/// closes a cycle with `H`, so its endpoints sit on different levels.
pub fn gallai_roy(g: &OrientedGraph, threshold: usize) -> GallaiRoy {
    let h = maximal_acyclic_subgraph(g);
    let levels = vertex_levels(&h).expect("H is acyclic");
    let used = levels.iter().copied().max().map_or(0, |t| t + 1);
    if used <= threshold.max(1) || g.n() == 0 {
        GallaiRoy::Coloring(VertexColoring::new_unchecked(
            levels.into_iter().map(|l| l + 1).collect(),
        ))
    } else {
        GallaiRoy::Path(longest_path_dag(&h).expect("H is acyclic"))
    }
}

/// Hamilton cycle of a 2-colored complete symmetric digraph split into a
/// red path followed by a blue path.
///
/// In the generic case `cycle[0..=a]` is `red_segment` and `cycle[a..]`
/// followed by `cycle[0]` is `blue_segment`. When every cycle edge has one
/// color, that color's segment is the cycle minus its closing edge and the
/// other segment is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonDecomposition {
    pub cycle: Vec<usize>,
    pub red_segment: DirectedPath,
    pub blue_segment: DirectedPath,
}

impl HamiltonDecomposition {
    /// The longer segment and its color (red on ties).
    pub fn monochromatic_path(&self) -> (DirectedPath, Color) {
        if self.blue_segment.len() > self.red_segment.len() {
            (self.blue_segment.clone(), BLUE)
        } else {
            (self.red_segment.clone(), RED)
        }
    }

    pub fn validate(&self, g: &OrientedGraph, coloring: &EdgeColoring) -> Result<()> {
        let t = g.n();
        let bad = |m: &str| Err(Error::InvalidInput(format!("decomposition: {m}")));
        let mut seen = vec![false; t];
        if self.cycle.len() != t {
            return bad("cycle does not cover every vertex");
        }
        for &v in &self.cycle {
            if v >= t || seen[v] {
                return bad("cycle repeats or leaves the vertex set");
            }
            seen[v] = true;
        }
        if t >= 2 {
            for i in 0..t {
                if !g.has_edge(self.cycle[i], self.cycle[(i + 1) % t]) {
                    return bad("cycle uses a missing edge");
                }
            }
        }
        self.red_segment.validate_monochromatic(g, coloring, RED)?;
        self.blue_segment.validate_monochromatic(g, coloring, BLUE)?;
        let (r, b) = (self.red_segment.vertices(), self.blue_segment.vertices());
        let covered = if r.is_empty() || b.is_empty() {
            // Degenerate: one segment is the cycle minus its closing edge,
            // and the closing edge has the same color.
            let seg = if r.is_empty() { b } else { r };
            let color = if r.is_empty() { BLUE } else { RED };
            t <= 1
                || (seg == self.cycle.as_slice()
                    && coloring.color_of(g, self.cycle[t - 1], self.cycle[0]) == Some(color))
        } else {
            let mut joined = r.to_vec();
            joined.extend_from_slice(&b[1..]);
            let mut expect = self.cycle.clone();
            expect.push(self.cycle[0]);
            r.len() >= 2 && b.len() >= 2 && joined == expect
        };
        if !covered {
            return bad("segments do not concatenate to the cycle");
        }
        let longest = self.red_segment.len().max(self.blue_segment.len());
        if longest < t / 2 {
            return bad("no segment reaches half the cycle");
        }
        Ok(())
    }
}

fn check_raynaud_input(g: &OrientedGraph, coloring: &EdgeColoring) -> Result<()> {
    if !g.is_complete_symmetric() {
        return Err(Error::InvalidInput("host graph is not complete symmetric".into()));
    }
    if coloring.num_colors() != 2 {
        return Err(Error::ColoringMismatch(format!(
            "expected 2 colors, found {}",
            coloring.num_colors()
        )));
    }
    coloring.validate(g)
}

/// Red path `P` and blue path `Q`, vertex disjoint. Their concatenation
/// `P ++ Q` is always a Hamilton cycle of the covered vertices with at most
/// two color changes, whatever the colors of the two joining edges.
struct PathPair<'a> {
    g: &'a OrientedGraph,
    coloring: &'a EdgeColoring,
    red: VecDeque<usize>,
    blue: VecDeque<usize>,
}

impl PathPair<'_> {
    fn col(&self, u: usize, v: usize) -> Color {
        self.coloring.color_of(self.g, u, v).expect("complete host")
    }

    /// Try to absorb `w`; returns false when no local move applies.
    fn insert(&mut self, w: usize) -> bool {
        let (Some(&p1), Some(&pa)) = (self.red.front(), self.red.back()) else {
            self.red.push_back(w);
            return true;
        };
        let (Some(&q1), Some(&qb)) = (self.blue.front(), self.blue.back()) else {
            self.blue.push_back(w);
            return true;
        };
        if self.col(w, p1) == RED {
            self.red.push_front(w);
            return true;
        }
        if self.col(pa, w) == RED {
            self.red.push_back(w);
            return true;
        }
        if self.col(w, q1) == BLUE {
            self.blue.push_front(w);
            return true;
        }
        if self.col(qb, w) == BLUE {
            self.blue.push_back(w);
            return true;
        }
        if let Some(i) =
            (0..self.red.len() - 1).find(|&i| self.col(self.red[i], w) == RED && self.col(w, self.red[i + 1]) == RED)
        {
            self.red.insert(i + 1, w);
            return true;
        }
        if let Some(i) = (0..self.blue.len() - 1)
            .find(|&i| self.col(self.blue[i], w) == BLUE && self.col(w, self.blue[i + 1]) == BLUE)
        {
            self.blue.insert(i + 1, w);
            return true;
        }
        // Here w -> p1 and pa -> w are blue, w -> q1 and qb -> w are red.
        // Move one endpoint across so that w joins through it.
        if self.col(q1, p1) == RED {
            self.blue.pop_front();
            self.red.push_front(q1);
            self.red.push_front(w);
            return true;
        }
        if self.col(pa, qb) == RED {
            self.blue.pop_back();
            self.red.push_back(qb);
            self.red.push_back(w);
            return true;
        }
        if self.col(p1, q1) == BLUE {
            self.red.pop_front();
            self.blue.push_front(p1);
            self.blue.push_front(w);
            return true;
        }
        if self.col(qb, pa) == BLUE {
            self.red.pop_back();
            self.blue.push_back(pa);
            self.blue.push_back(w);
            return true;
        }
        false
    }

    /// Insert `w`, re-splitting the current cycle at its color boundaries
    /// when the present split admits no move.
    fn insert_with_resplit(&mut self, w: usize) -> bool {
        if self.insert(w) {
            return true;
        }
        let (red, blue) = (self.red.clone(), self.blue.clone());
        for (r, b) in self.alternative_splits() {
            self.red = r;
            self.blue = b;
            if self.insert(w) {
                return true;
            }
        }
        self.red = red;
        self.blue = blue;
        false
    }

    /// Other red/blue splits of the same cycle: each boundary vertex of the
    /// red arc may go to either side.
    fn alternative_splits(&self) -> Vec<(VecDeque<usize>, VecDeque<usize>)> {
        let cycle: Vec<usize> = self.red.iter().chain(self.blue.iter()).copied().collect();
        let t = cycle.len();
        if t < 3 {
            return Vec::new();
        }
        let colors: Vec<Color> = (0..t).map(|i| self.col(cycle[i], cycle[(i + 1) % t])).collect();
        let Some(start) = (0..t).find(|&i| colors[i] == RED && colors[(i + t - 1) % t] == BLUE) else {
            return Vec::new();
        };
        let mut c = cycle;
        c.rotate_left(start);
        let a = colors.iter().filter(|&&x| x == RED).count();
        let mut out = Vec::new();
        for s in 0..=1usize {
            for e in [a - 1, a] {
                let red: VecDeque<usize> = if s <= e {
                    c[s..=e].iter().copied().collect()
                } else {
                    VecDeque::new()
                };
                let blue: VecDeque<usize> = c[e + 1..].iter().chain(c[..s].iter()).copied().collect();
                out.push((red, blue));
            }
        }
        out
    }
}

/// Largest `t` for which the subset search fallback is attempted.
const RAYNAUD_SUBSET_LIMIT: usize = 18;

/// Raynaud decomposition by vertex insertion: grow a disjoint red path /
/// blue path pair one vertex at a time; vertices that admit no local move
/// are retried after the others. Should a full pass stall, an exact subset
/// search finishes small instances.
pub fn raynaud(g: &OrientedGraph, coloring: &EdgeColoring) -> Result<HamiltonDecomposition> {
    check_raynaud_input(g, coloring)?;
    let t = g.n();
    let mut pair = PathPair {
        g,
        coloring,
        red: VecDeque::new(),
        blue: VecDeque::new(),
    };
    let mut pending: Vec<usize> = (0..t).collect();
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&w| !pair.insert_with_resplit(w));
        if pending.len() == before {
            break;
        }
    }
    let (red, blue) = if pending.is_empty() {
        (Vec::from(pair.red), Vec::from(pair.blue))
    } else {
        subset_partition(g, coloring).ok_or(Error::SizeLimit {
            what: "Raynaud subset search vertex count",
            size: t as u128,
            limit: RAYNAUD_SUBSET_LIMIT as u128,
        })?
    };
    Ok(decomposition_from_paths(g, coloring, red, blue))
}

/// Exact search for a red path and a disjoint blue path covering all
/// vertices, by subset dynamic programming.
fn subset_partition(g: &OrientedGraph, coloring: &EdgeColoring) -> Option<(Vec<usize>, Vec<usize>)> {
    let t = g.n();
    if t > RAYNAUD_SUBSET_LIMIT {
        return None;
    }
    let full = (1usize << t) - 1;
    let table = |color: Color| {
        let out: Vec<u32> = (0..t)
            .map(|u| {
                (0..t)
                    .filter(|&v| v != u && coloring.color_of(g, u, v) == Some(color))
                    .fold(0u32, |m, v| m | 1 << v)
            })
            .collect();
        let mut ends = vec![0u32; 1 << t];
        for v in 0..t {
            ends[1 << v] = 1 << v;
        }
        for mask in 1..=full {
            let mut e = ends[mask];
            while e != 0 {
                let v = e.trailing_zeros() as usize;
                e &= e - 1;
                let mut next = out[v] & !(mask as u32);
                while next != 0 {
                    let w = next.trailing_zeros() as usize;
                    next &= next - 1;
                    ends[mask | 1 << w] |= 1 << w;
                }
            }
        }
        (out, ends)
    };
    let (red_out, red_ends) = table(RED);
    let (blue_out, blue_ends) = table(BLUE);
    let rebuild = |mut mask: usize, out: &[u32], ends: &[u32]| -> Vec<usize> {
        if mask == 0 {
            return Vec::new();
        }
        let mut v = ends[mask].trailing_zeros() as usize;
        let mut path = vec![v];
        while mask.count_ones() > 1 {
            let prev = mask & !(1 << v);
            let mut c = ends[prev];
            let u = loop {
                let u = c.trailing_zeros() as usize;
                if out[u] >> v & 1 == 1 {
                    break u;
                }
                c &= c - 1;
            };
            path.push(u);
            mask = prev;
            v = u;
        }
        path.reverse();
        path
    };
    (0..=full)
        .find(|&s| (s == 0 || red_ends[s] != 0) && (s == full || blue_ends[full ^ s] != 0))
        .map(|s| {
            (
                rebuild(s, &red_out, &red_ends),
                rebuild(full ^ s, &blue_out, &blue_ends),
            )
        })
}

fn decomposition_from_paths(
    g: &OrientedGraph,
    coloring: &EdgeColoring,
    red: Vec<usize>,
    blue: Vec<usize>,
) -> HamiltonDecomposition {
    let mut cycle = red;
    cycle.extend(blue);
    let t = cycle.len();
    if t <= 1 {
        return HamiltonDecomposition {
            red_segment: DirectedPath::new(cycle.clone()),
            blue_segment: DirectedPath::empty(),
            cycle,
        };
    }
    let col = |i: usize| {
        coloring
            .color_of(g, cycle[i], cycle[(i + 1) % t])
            .expect("complete host")
    };
    let colors: Vec<Color> = (0..t).map(col).collect();
    if colors.iter().all(|&c| c == colors[0]) {
        let seg = DirectedPath::new(cycle.clone());
        let (red_segment, blue_segment) = if colors[0] == RED {
            (seg, DirectedPath::empty())
        } else {
            (DirectedPath::empty(), seg)
        };
        return HamiltonDecomposition {
            cycle,
            red_segment,
            blue_segment,
        };
    }
    // Rotate so that edge 0 is the first red edge after a blue one.
    let start = (0..t)
        .find(|&i| colors[i] == RED && colors[(i + t - 1) % t] == BLUE)
        .expect("both colors present");
    cycle.rotate_left(start);
    let reds = colors.iter().filter(|&&c| c == RED).count();
    let red_segment = DirectedPath::new(cycle[..=reds].to_vec());
    let mut blue = cycle[reds..].to_vec();
    blue.push(cycle[0]);
    HamiltonDecomposition {
        cycle,
        red_segment,
        blue_segment: DirectedPath::new(blue),
    }
}

/// Exhaustive Raynaud decomposition: tries every Hamilton cycle through
/// vertex 0 and keeps the first whose edge colors change at most twice.
/// Intended as an oracle for `t <= 8`.
pub fn raynaud_exhaustive(g: &OrientedGraph, coloring: &EdgeColoring) -> Result<HamiltonDecomposition> {
    check_raynaud_input(g, coloring)?;
    let t = g.n();
    if t > 8 {
        return Err(Error::SizeLimit {
            what: "exhaustive Raynaud vertex count",
            size: t as u128,
            limit: 8,
        });
    }
    if t <= 1 {
        return Ok(decomposition_from_paths(g, coloring, (0..t).collect(), Vec::new()));
    }
    let mut rest: Vec<usize> = (1..t).collect();
    let mut found = None;
    permute(&mut rest, 0, &mut |perm| {
        let mut cycle = vec![0];
        cycle.extend_from_slice(perm);
        let changes = (0..t)
            .filter(|&i| {
                let a = coloring.color_of(g, cycle[i], cycle[(i + 1) % t]);
                let b = coloring.color_of(g, cycle[(i + 1) % t], cycle[(i + 2) % t]);
                a != b
            })
            .count();
        if changes <= 2 {
            found = Some(cycle);
            true
        } else {
            false
        }
    });
    let cycle = found.ok_or_else(|| Error::InvalidInput("no decomposition exists".into()))?;
    // Split the cycle at its red run so decomposition_from_paths sees a
    // red path followed by a blue path.
    let colors: Vec<Color> = (0..t)
        .map(|i| coloring.color_of(g, cycle[i], cycle[(i + 1) % t]).expect("complete"))
        .collect();
    let mut rotated = cycle.clone();
    if let Some(start) = (0..t).find(|&i| colors[i] == RED && colors[(i + t - 1) % t] == BLUE) {
        rotated.rotate_left(start);
    }
    Ok(decomposition_from_paths(g, coloring, rotated, Vec::new()))
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permute(items, k + 1, visit) {
            return true;
        }
        items.swap(k, i);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag_abc() -> OrientedGraph {
        // a=0, b=1, c=2: a->b, a->c, c->b
        OrientedGraph::from_edges(3, false, [(0, 1), (0, 2), (2, 1)]).unwrap()
    }

    #[test]
    fn longest_path_dag_examples() {
        assert_eq!(longest_path_dag(&OrientedGraph::new(1, false)).unwrap().len(), 0);
        assert_eq!(
            longest_path_dag(&OrientedGraph::path(3)).unwrap().vertices(),
            &[0, 1, 2]
        );
        assert_eq!(longest_path_dag(&dag_abc()).unwrap().vertices(), &[0, 2, 1]);
    }

    #[test]
    fn cyclic_input_reports_a_cycle() {
        let mut g = OrientedGraph::from_edges(5, false, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)]).unwrap();
        g.add_edge(4, 0).unwrap();
        match longest_path_dag(&g) {
            Err(Error::Cyclic { cycle }) => {
                assert!(cycle.len() >= 3);
                for i in 0..cycle.len() {
                    assert!(g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]));
                }
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
        assert!(level_decomposition(&OrientedGraph::cycle(3)).is_err());
    }

    #[test]
    fn exact_longest_path_examples() {
        let c3 = OrientedGraph::cycle(3);
        let p = longest_path_exact(&c3, 16).unwrap();
        assert_eq!(p.len(), 2);
        p.validate(&c3).unwrap();
        let t4 = OrientedGraph::transitive_tournament(4);
        assert_eq!(longest_path_exact(&t4, 16).unwrap().vertices(), &[0, 1, 2, 3]);
        let e = OrientedGraph::from_edges(2, false, [(1, 0)]).unwrap();
        assert_eq!(longest_path_exact(&e, 16).unwrap().vertices(), &[1, 0]);
        assert!(matches!(
            longest_path_exact(&OrientedGraph::new(17, false), 16),
            Err(Error::SizeLimit { .. })
        ));
        assert_eq!(longest_path_backtracking(&c3).len(), 2);
    }

    #[test]
    fn level_examples() {
        assert_eq!(
            level_decomposition(&OrientedGraph::path(4)).unwrap(),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
        assert_eq!(
            level_decomposition(&OrientedGraph::new(3, false)).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            level_decomposition(&dag_abc()).unwrap(),
            vec![vec![0], vec![2], vec![1]]
        );
    }

    #[test]
    fn gallai_roy_examples() {
        let c3 = OrientedGraph::cycle(3);
        match gallai_roy(&c3, 3) {
            GallaiRoy::Coloring(vc) => {
                assert_eq!(vc.num_colors(), 3);
                assert!(vc.is_proper_for(&c3));
            }
            other => panic!("{other:?}"),
        }
        match gallai_roy(&c3, 2) {
            GallaiRoy::Path(p) => {
                assert_eq!(p.len(), 2);
                p.validate(&c3).unwrap();
            }
            other => panic!("{other:?}"),
        }
        match gallai_roy(&OrientedGraph::new(4, false), 1) {
            GallaiRoy::Coloring(vc) => assert_eq!(vc.num_colors(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn maximal_acyclic_subgraph_of_tournament_has_hamilton_path() {
        let g = OrientedGraph::cycle(3).tournament_completion();
        let h = maximal_acyclic_subgraph(&g);
        assert!(is_acyclic(&h));
        assert_eq!(longest_path_dag(&h).unwrap().len(), 2);
    }

    fn coloring_from_mask(g: &OrientedGraph, mask: u64) -> EdgeColoring {
        let colors = (0..g.edge_count())
            .map(|i| if mask >> i & 1 == 1 { BLUE } else { RED })
            .collect();
        EdgeColoring::from_colors(g, 2, colors).unwrap()
    }

    #[test]
    fn raynaud_monochromatic_examples() {
        let g2 = OrientedGraph::complete_symmetric(2);
        let d = raynaud(&g2, &EdgeColoring::monochromatic(&g2, 2, RED)).unwrap();
        assert_eq!(d.red_segment.len(), 1);
        assert!(d.blue_segment.is_empty());
        d.validate(&g2, &EdgeColoring::monochromatic(&g2, 2, RED)).unwrap();

        let g3 = OrientedGraph::complete_symmetric(3);
        let blue = EdgeColoring::monochromatic(&g3, 2, BLUE);
        let d = raynaud(&g3, &blue).unwrap();
        assert_eq!(d.blue_segment.len(), 2);
        d.validate(&g3, &blue).unwrap();
    }

    #[test]
    fn raynaud_all_colorings_t4() {
        let g = OrientedGraph::complete_symmetric(4);
        for mask in 0..1u64 << 12 {
            let c = coloring_from_mask(&g, mask);
            let d = raynaud(&g, &c).unwrap();
            d.validate(&g, &c).unwrap();
            raynaud_exhaustive(&g, &c).unwrap().validate(&g, &c).unwrap();
        }
    }

    #[test]
    fn raynaud_rejects_bad_hosts() {
        let g = OrientedGraph::cycle(3);
        assert!(raynaud(&g, &EdgeColoring::monochromatic(&g, 2, RED)).is_err());
        let k = OrientedGraph::complete_symmetric(3);
        assert!(raynaud(&k, &EdgeColoring::monochromatic(&k, 3, RED)).is_err());
    }

    #[test]
    fn subset_fallback_agrees() {
        let g = OrientedGraph::complete_symmetric(5);
        for mask in [0u64, 0xfffff, 0x5a5a5, 0x12345, 0xabcde] {
            let c = coloring_from_mask(&g, mask);
            let (r, b) = subset_partition(&g, &c).unwrap();
            decomposition_from_paths(&g, &c, r, b).validate(&g, &c).unwrap();
        }
    }
}
