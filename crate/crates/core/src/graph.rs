//! Directed graphs on `0..n` with bit-matrix adjacency, plus the value types
//! every algorithm in the crate hands around: paths, vertex colorings and
//! edge colorings.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge colors are 1-based; `0` marks an edge not yet colored.
pub type Color = u8;

const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
pub(crate) fn test_bit(row: &[u64], v: usize) -> bool {
    row[v / WORD] >> (v % WORD) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(row: &mut [u64], v: usize) {
    row[v / WORD] |= 1 << (v % WORD);
}

/// Iterate the set bits of a row in ascending order.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD + tz)
            }
        })
    })
}

/// A loopless directed graph. With `allow_antiparallel == false` it is an
/// oriented graph: at most one of `u -> v`, `v -> u` is present.
///
/// Edge order is insertion order; it is part of the value (edge ids index
/// into [`EdgeColoring`]) and of the text format.
#[derive(Clone, Debug)]
pub struct OrientedGraph {
    n: usize,
    words: usize,
    allow_antiparallel: bool,
    out_bits: Vec<u64>,
    in_bits: Vec<u64>,
    edges: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    out_deg: Vec<usize>,
    in_deg: Vec<usize>,
}

impl PartialEq for OrientedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.allow_antiparallel == other.allow_antiparallel && self.edges == other.edges
    }
}

impl Eq for OrientedGraph {}

impl OrientedGraph {
    pub fn new(n: usize, allow_antiparallel: bool) -> Self {
        let words = words_for(n);
        Self {
            n,
            words,
            allow_antiparallel,
            out_bits: vec![0; n * words],
            in_bits: vec![0; n * words],
            edges: Vec::new(),
            index: HashMap::new(),
            out_deg: vec![0; n],
            in_deg: vec![0; n],
        }
    }

    pub fn from_edges<I>(n: usize, allow_antiparallel: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n, allow_antiparallel);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `u -> v` and returns its edge id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        if !self.allow_antiparallel && self.has_edge(v, u) {
            return Err(Error::Antiparallel(u, v));
        }
        let w = self.words;
        set_bit(&mut self.out_bits[u * w..(u + 1) * w], v);
        set_bit(&mut self.in_bits[v * w..(v + 1) * w], u);
        let id = self.edges.len();
        self.edges.push((u, v));
        self.index.insert((u, v), id);
        self.out_deg[u] += 1;
        self.in_deg[v] += 1;
        Ok(id)
    }

    /// Complete symmetric digraph: both directions between every pair.
    pub fn complete_symmetric(t: usize) -> Self {
        let mut g = Self::new(t, true);
        for u in 0..t {
            for v in 0..t {
                if u != v {
                    g.add_edge(u, v).expect("fresh edge");
                }
            }
        }
        g
    }

    /// Transitive tournament `i -> j` for all `i < j`.
    pub fn transitive_tournament(n: usize) -> Self {
        let mut g = Self::new(n, false);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
        g
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, false, (1..n).map(|v| (v - 1, v))).expect("valid path")
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, false, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn allow_antiparallel(&self) -> bool {
        self.allow_antiparallel
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        test_bit(self.out_row(u), v)
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    #[inline]
    pub fn out_row(&self, v: usize) -> &[u64] {
        &self.out_bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn in_row(&self, v: usize) -> &[u64] {
        &self.in_bits[v * self.words..(v + 1) * self.words]
    }

    /// Words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    /// Out-neighbors in ascending order.
    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.out_row(v))
    }

    /// In-neighbors in ascending order.
    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.in_row(v))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_deg[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_deg[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_deg[v] + self.in_deg[v]
    }

    /// Maximum total degree.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `|E| / |V|^2`.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.edges.len() as f64 / (self.n as f64 * self.n as f64)
        }
    }

    /// `u` and `v` are joined in at least one direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    pub fn is_tournament(&self) -> bool {
        self.tournament_violation().is_none()
    }

    pub(crate) fn tournament_violation(&self) -> Option<Error> {
        for u in 0..self.n {
            for v in u + 1..self.n {
                match (self.has_edge(u, v), self.has_edge(v, u)) {
                    (true, true) => return Some(Error::NotTournament(u, v, "has both directions")),
                    (false, false) => return Some(Error::NotTournament(u, v, "has no edge")),
                    _ => {}
                }
            }
        }
        None
    }

    pub fn is_complete_symmetric(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1)
    }

    /// Induced subgraph; vertex `i` of the result is `vertices[i]`. Edge
    /// order follows the parent graph.
    pub fn induced(&self, vertices: &[usize]) -> OrientedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = OrientedGraph::new(vertices.len(), self.allow_antiparallel);
        for &(u, v) in &self.edges {
            let (a, b) = (local[u], local[v]);
            if a != usize::MAX && b != usize::MAX {
                g.add_edge(a, b).expect("edge of a valid graph");
            }
        }
        g
    }

    /// Same vertex set, keeping the edges whose id passes `keep`.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> OrientedGraph {
        let mut g = OrientedGraph::new(self.n, self.allow_antiparallel);
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if keep(id) {
                g.add_edge(u, v).expect("edge of a valid graph");
            }
        }
        g
    }

    /// Edge ids of `E(A)` for a vertex set `A`.
    pub fn edges_within(&self, vertices: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.n];
        for &v in vertices {
            member[v] = true;
        }
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| member[u] && member[v])
            .map(|(id, _)| id)
            .collect()
    }

    /// Orient every missing pair `low -> high`. Any vertex set acyclic in
    /// the completion is acyclic here.
    pub fn tournament_completion(&self) -> OrientedGraph {
        let mut g = OrientedGraph::new(self.n, false);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(v, u) {
                    g.add_edge(v, u).expect("fresh edge");
                } else {
                    g.add_edge(u, v).expect("fresh edge");
                }
            }
        }
        g
    }

    /// Whether the induced subgraph on `vertices` has no directed cycle.
    pub fn is_acyclic_set(&self, vertices: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &v in vertices {
            member[v] = true;
        }
        // Kahn on the induced subgraph.
        let mut indeg: HashMap<usize, usize> = vertices
            .iter()
            .map(|&v| (v, self.in_neighbors(v).filter(|&u| member[u]).count()))
            .collect();
        let mut stack: Vec<usize> = vertices.iter().copied().filter(|v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for w in self.out_neighbors(u) {
                if member[w] {
                    let d = indeg.get_mut(&w).expect("member");
                    *d -= 1;
                    if *d == 0 {
                        stack.push(w);
                    }
                }
            }
        }
        seen == vertices.len()
    }
}

/// A sequence of distinct vertices joined by forward edges. The empty path
/// (no vertices) is allowed and has length 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectedPath {
    vertices: Vec<usize>,
}

impl DirectedPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self { vertices }
    }

    pub fn single(v: usize) -> Self {
        Self { vertices: vec![v] }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    pub fn first(&self) -> Option<usize> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.vertices.last().copied()
    }

    /// Translate local ids through `map` (e.g. back out of an induced subgraph).
    pub fn mapped(&self, map: &[usize]) -> DirectedPath {
        DirectedPath::new(self.vertices.iter().map(|&v| map[v]).collect())
    }

    /// Checks distinctness and that every consecutive pair is an edge of `g`.
    pub fn validate(&self, g: &OrientedGraph) -> Result<()> {
        let mut seen = vec![false; g.n()];
        for &v in &self.vertices {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if seen[v] {
                return Err(Error::InvalidInput(format!("path repeats vertex {v}")));
            }
            seen[v] = true;
        }
        for w in self.vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::InvalidInput(format!(
                    "path uses missing edge {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Valid in `g` and every edge has color `color`.
    pub fn validate_monochromatic(&self, g: &OrientedGraph, coloring: &EdgeColoring, color: Color) -> Result<()> {
        self.validate(g)?;
        for w in self.vertices.windows(2) {
            let c = coloring.color_of(g, w[0], w[1]);
            if c != Some(color) {
                return Err(Error::InvalidInput(format!(
                    "edge {} -> {} has color {:?}, expected {color}",
                    w[0], w[1], c
                )));
            }
        }
        Ok(())
    }
}

/// Proper vertex coloring with colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    colors: Vec<usize>,
}

impl VertexColoring {
    /// Validates properness (both edge directions) and `colors[v] >= 1`.
    pub fn new(g: &OrientedGraph, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != g.n() {
            return Err(Error::InvalidInput(format!(
                "vertex coloring has {} entries for {} vertices",
                colors.len(),
                g.n()
            )));
        }
        if let Some(v) = colors.iter().position(|&c| c == 0) {
            return Err(Error::InvalidInput(format!("vertex {v} has color 0")));
        }
        for &(u, v) in g.edges() {
            if colors[u] == colors[v] {
                return Err(Error::ImproperVertexColoring(u, v));
            }
        }
        Ok(Self { colors })
    }

    pub(crate) fn new_unchecked(colors: Vec<usize>) -> Self {
        Self { colors }
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// Class `c - 1` holds the vertices of color `c`, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors()];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c - 1].push(v);
        }
        classes
    }

    pub fn is_proper_for(&self, g: &OrientedGraph) -> bool {
        self.colors.len() == g.n() && g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }
}

/// Edge coloring aligned with a host graph's edge ids. A zero entry is an
/// uncolored edge; finished colorings are total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    num_colors: Color,
    colors: Vec<Color>,
}

impl EdgeColoring {
    pub fn uncolored(g: &OrientedGraph, num_colors: Color) -> Self {
        Self {
            num_colors,
            colors: vec![0; g.edge_count()],
        }
    }

    pub fn monochromatic(g: &OrientedGraph, num_colors: Color, color: Color) -> Self {
        Self {
            num_colors,
            colors: vec![color; g.edge_count()],
        }
    }

    /// A total coloring; every entry must lie in `1..=num_colors`.
    pub fn from_colors(g: &OrientedGraph, num_colors: Color, colors: Vec<Color>) -> Result<Self> {
        let c = Self { num_colors, colors };
        c.validate(g)?;
        Ok(c)
    }

    pub fn num_colors(&self) -> Color {
        self.num_colors
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn get(&self, edge: usize) -> Option<Color> {
        match self.colors[edge] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, edge: usize, color: Color) {
        debug_assert!(color >= 1 && color <= self.num_colors);
        self.colors[edge] = color;
    }

    pub fn color_of(&self, g: &OrientedGraph, u: usize, v: usize) -> Option<Color> {
        g.edge_id(u, v).and_then(|id| self.get(id))
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    /// Total, in range, and sized for `g`.
    pub fn validate(&self, g: &OrientedGraph) -> Result<()> {
        if self.num_colors == 0 {
            return Err(Error::ColoringMismatch("zero colors".into()));
        }
        if self.colors.len() != g.edge_count() {
            return Err(Error::ColoringMismatch(format!(
                "{} colors for {} edges",
                self.colors.len(),
                g.edge_count()
            )));
        }
        for (id, &c) in self.colors.iter().enumerate() {
            if c == 0 {
                let (u, v) = g.edges()[id];
                return Err(Error::ColoringMismatch(format!("edge {u} -> {v} is uncolored")));
            }
            if c > self.num_colors {
                return Err(Error::ColorOutOfRange {
                    color: c as usize,
                    num_colors: self.num_colors as usize,
                });
            }
        }
        Ok(())
    }

    /// The spanning subgraph of edges colored `color`.
    pub fn color_class(&self, g: &OrientedGraph, color: Color) -> OrientedGraph {
        g.edge_subgraph(|id| self.colors[id] == color)
    }

    /// Induced subgraph on `vertices` with the inherited coloring.
    pub fn restrict(&self, g: &OrientedGraph, vertices: &[usize]) -> (OrientedGraph, EdgeColoring) {
        let sub = g.induced(vertices);
        let colors = sub
            .edges()
            .iter()
            .map(|&(a, b)| self.colors[g.edge_id(vertices[a], vertices[b]).expect("induced edge")])
            .collect();
        (
            sub,
            EdgeColoring {
                num_colors: self.num_colors,
                colors,
            },
        )
    }

    /// Relabel colors: `c` becomes `perm[c - 1]`.
    pub fn permuted(&self, perm: &[Color]) -> EdgeColoring {
        EdgeColoring {
            num_colors: self.num_colors,
            colors: self
                .colors
                .iter()
                .map(|&c| if c == 0 { 0 } else { perm[c as usize - 1] })
                .collect(),
        }
    }

    /// Same colors, with the palette widened or narrowed.
    pub fn with_num_colors(mut self, num_colors: Color) -> EdgeColoring {
        self.num_colors = num_colors;
        self
    }

    pub fn distinct_colors(&self) -> Vec<Color> {
        let mut used: Vec<Color> = self.colors.iter().copied().filter(|&c| c != 0).collect();
        used.sort_unstable();
        used.dedup();
        used
    }
}
