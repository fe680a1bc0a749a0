//! Exhaustive ground truth for small instances.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{is_acyclic, longest_path_backtracking, longest_path_dag, longest_path_exact};
use crate::error::{Error, Result};
use crate::graph::{Color, DirectedPath, EdgeColoring, OrientedGraph};

/// Cyclic color classes with at most this many edges are searched by
/// backtracking regardless of their vertex count.
pub const BACKTRACK_EDGE_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Path(DirectedPath),
    Coloring(EdgeColoring),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: usize,
    pub witness: Witness,
    pub explored: u64,
}

/// Exact longest path of a single color class. Acyclic classes use the
/// topological fast path at any size; cyclic ones need at most `limit`
/// non-isolated vertices or at most [`BACKTRACK_EDGE_LIMIT`] edges.
pub fn longest_class_path(class: &OrientedGraph, limit: usize) -> Result<OracleResult> {
    if is_acyclic(class) {
        let path = longest_path_dag(class)?;
        return Ok(OracleResult {
            value: path.len(),
            witness: Witness::Path(path),
            explored: class.n() as u64,
        });
    }
    let touched: Vec<usize> = (0..class.n()).filter(|&v| class.degree(v) > 0).collect();
    let sub = class.induced(&touched);
    let (path, explored) = if touched.len() <= limit {
        (longest_path_exact(&sub, limit)?, 1u64 << touched.len())
    } else if class.edge_count() <= BACKTRACK_EDGE_LIMIT {
        (longest_path_backtracking(&sub), class.edge_count() as u64)
    } else {
        return Err(Error::SizeLimit {
            what: "cyclic color class vertices",
            size: touched.len() as u128,
            limit: limit as u128,
        });
    };
    let path = path.mapped(&touched);
    Ok(OracleResult {
        value: path.len(),
        witness: Witness::Path(path),
        explored,
    })
}

/// Longest monochromatic path of every color; entry `c - 1` is color `c`.
pub fn longest_mono_path(g: &OrientedGraph, coloring: &EdgeColoring, limit: usize) -> Result<Vec<OracleResult>> {
    coloring.validate(g)?;
    (1..=coloring.num_colors())
        .map(|c| longest_class_path(&coloring.color_class(g, c), limit))
        .collect()
}

/// Largest value over all colors, with the path and its color.
pub fn max_mono_path(g: &OrientedGraph, coloring: &EdgeColoring, limit: usize) -> Result<(usize, DirectedPath, Color)> {
    let per_color = longest_mono_path(g, coloring, limit)?;
    let mut best = (0, DirectedPath::empty(), 1);
    for (i, r) in per_color.into_iter().enumerate() {
        if r.value > best.0 || (best.1.is_empty() && r.value == best.0) {
            if let Witness::Path(p) = r.witness {
                best = (r.value, p, (i + 1) as Color);
            }
        }
    }
    Ok(best)
}

/// Edge lists compressed onto the non-isolated vertices, as bit masks.
struct Compact {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Compact {
    fn new(g: &OrientedGraph) -> Result<Self> {
        let touched: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) > 0).collect();
        if touched.len() > 64 {
            return Err(Error::SizeLimit {
                what: "non-isolated vertices",
                size: touched.len() as u128,
                limit: 64,
            });
        }
        let mut local = vec![0usize; g.n()];
        for (i, &v) in touched.iter().enumerate() {
            local[v] = i;
        }
        Ok(Self {
            n: touched.len(),
            edges: g.edges().iter().map(|&(u, v)| (local[u], local[v])).collect(),
        })
    }

    /// Longest monochromatic path under `colors`, capped at `cap` (the
    /// search stops as soon as some path reaches `cap`).
    fn max_path(&self, colors: &[Color], q: usize, cap: usize, adj: &mut [u64]) -> usize {
        let mut best = 0;
        for c in 1..=q as Color {
            adj.iter_mut().for_each(|row| *row = 0);
            let mut any = false;
            for (&(u, v), &col) in self.edges.iter().zip(colors) {
                if col == c {
                    adj[u] |= 1 << v;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            for s in 0..self.n {
                if adj[s] != 0 {
                    best = best.max(extend(adj, s, 1u64 << s, 0, cap));
                    if best >= cap {
                        return cap;
                    }
                }
            }
        }
        best
    }
}

fn extend(adj: &[u64], v: usize, seen: u64, len: usize, cap: usize) -> usize {
    let mut best = len;
    let mut next = adj[v] & !seen;
    while next != 0 {
        let w = next.trailing_zeros() as usize;
        next &= next - 1;
        best = best.max(extend(adj, w, seen | 1 << w, len + 1, cap));
        if best >= cap {
            return best;
        }
    }
    best
}

fn decode(index: u64, m: usize, q: usize, colors: &mut [Color]) {
    colors[0] = 1;
    let mut rest = index;
    for c in colors[1..m].iter_mut() {
        *c = (rest % q as u64) as Color + 1;
        rest /= q as u64;
    }
}

fn coloring_count(m: usize, q: usize) -> Option<u64> {
    let mut count: u64 = 1;
    for _ in 1..m {
        count = count.checked_mul(q as u64)?;
    }
    Some(count)
}

/// Minimum over all `q`-colorings of the longest monochromatic path.
/// The first edge is fixed to color 1 (colors are interchangeable), so
/// `q^(m-1)` colorings are enumerated; `budget` caps that count. The
/// witness is the lowest-index optimal coloring.
pub fn min_max_mono_path(g: &OrientedGraph, q: usize, budget: u64) -> Result<OracleResult> {
    if q == 0 || q > Color::MAX as usize {
        return Err(Error::InvalidInput(format!("q = {q} out of range")));
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(OracleResult {
            value: 0,
            witness: Witness::Coloring(EdgeColoring::uncolored(g, q as Color)),
            explored: 1,
        });
    }
    let count = coloring_count(m, q).filter(|&c| c <= budget).ok_or(Error::SizeLimit {
        what: "colorings",
        size: (q as u128).saturating_pow((m - 1) as u32),
        limit: budget as u128,
    })?;
    let compact = Compact::new(g)?;
    const CHUNK: u64 = 1 << 12;
    let chunks = count.div_ceil(CHUNK);
    let (value, index) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut colors = vec![0 as Color; m];
            let mut adj = vec![0u64; compact.n.max(1)];
            let mut best = (usize::MAX, u64::MAX);
            for index in chunk * CHUNK..((chunk + 1) * CHUNK).min(count) {
                decode(index, m, q, &mut colors);
                let v = compact.max_path(&colors, q, best.0, &mut adj);
                if v < best.0 {
                    best = (v, index);
                    if v <= 1 {
                        break;
                    }
                }
            }
            best
        })
        .min()
        .expect("at least one coloring");
    let mut colors = vec![0 as Color; m];
    decode(index, m, q, &mut colors);
    Ok(OracleResult {
        value,
        witness: Witness::Coloring(EdgeColoring::from_colors(g, q as Color, colors)?),
        explored: count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowingResult {
    /// Every `q`-coloring has a monochromatic path of length `n_target`.
    pub arrows: bool,
    /// A coloring without such a path, when `arrows` is false.
    pub witness: Option<EdgeColoring>,
    pub min_max: Option<usize>,
    pub explored: u64,
}

pub fn arrowing_check(g: &OrientedGraph, n_target: usize, q: usize, budget: u64) -> Result<ArrowingResult> {
    if n_target == 0 {
        return Ok(ArrowingResult {
            arrows: true,
            witness: None,
            min_max: None,
            explored: 0,
        });
    }
    let r = min_max_mono_path(g, q, budget)?;
    let arrows = r.value >= n_target;
    let witness = match (arrows, r.witness) {
        (false, Witness::Coloring(c)) => Some(c),
        _ => None,
    };
    Ok(ArrowingResult {
        arrows,
        witness,
        min_max: Some(r.value),
        explored: r.explored,
    })
}
