//! Long monochromatic paths in colored pseudorandom digraphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classic::{gallai_roy, longest_path_dag, maximal_acyclic_subgraph, raynaud, GallaiRoy, BLUE, RED};
use crate::config::ConstantsConfig;
use crate::error::{Error, Result};
use crate::graph::{set_bit, test_bit, Color, DirectedPath, EdgeColoring, OrientedGraph};
use crate::oracle::max_mono_path;
use crate::pseudorandom::{dfs_long_path, thread_path_through_sets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    RedCase,
    BlueCase,
    MonochromaticShortcut,
    SmallNFallback,
    BestEffort,
}

/// Size bookkeeping of the two-color construction for given `n`, `k` and
/// constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainArithmetic {
    pub n: usize,
    pub k: usize,
    /// Gallai–Roy threshold `ceil(n / (rho k))` on the red graph.
    pub red_threshold: usize,
    pub block_size: usize,
    /// Blocks guaranteed after discarding class remainders:
    /// `ceil((n - tau (b - 1)) / b)`.
    pub t_min: usize,
    /// `b - 4k + 4`: a DFS path of `b - 2k + 2` vertices minus at most
    /// `k - 1` vertices at each end.
    pub cycle_floor: i64,
    pub red_bound: usize,
    pub blue_bound: usize,
    /// `n / (k red_bound)`.
    pub c_r: Option<f64>,
    /// `n / blue_bound`.
    pub c_b: Option<f64>,
    /// `t_min >= 1` and cycles are long enough (`>= 3k - 2`) to leave
    /// `2k - 1` red-side vertices and `k` endpoints.
    pub closes: bool,
}

impl ChainArithmetic {
    pub fn new(n: usize, k: usize, cfg: &ConstantsConfig) -> Self {
        let k = k.max(1);
        let red_threshold = ((n as f64 / (cfg.red_threshold_factor * k as f64)).ceil() as usize).max(1);
        let block_size = ((cfg.block_factor * k as f64).floor() as usize).max(1);
        let discarded = red_threshold * (block_size - 1);
        let t_min = if n > discarded {
            (n - discarded).div_ceil(block_size)
        } else {
            0
        };
        let cycle_floor = block_size as i64 - 4 * k as i64 + 4;
        let closes = t_min >= 1 && cycle_floor >= (3 * k as i64 - 2).max(1);
        let (red_bound, blue_bound) = if closes {
            (red_threshold.min(t_min / 2), k * (t_min / 2) + cycle_floor as usize - 1)
        } else {
            (0, 0)
        };
        let ratio = |d: usize| (d > 0).then(|| n as f64 / d as f64);
        Self {
            n,
            k,
            red_threshold,
            block_size,
            t_min,
            cycle_floor,
            red_bound,
            blue_bound,
            c_r: ratio(k * red_bound),
            c_b: ratio(blue_bound),
            closes,
        }
    }
}

/// One peeled color of the multicolor recursions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelLevel {
    pub color: Color,
    pub vertices: usize,
    pub classes: usize,
    /// Size of the largest class, where the recursion continues.
    pub kept: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BuilderTrace {
    pub chain: Option<ChainArithmetic>,
    pub red_classes: usize,
    pub blocks: Vec<Vec<usize>>,
    pub cycles: Vec<Vec<usize>>,
    /// `h_coloring[i][j]` colors the edge `C_i -> C_j` of the auxiliary
    /// graph; the diagonal is 0.
    pub h_coloring: Vec<Vec<Color>>,
    pub h_path: Vec<usize>,
    pub h_path_color: Option<Color>,
    pub levels: Vec<PeelLevel>,
    /// Stage floors that failed; any entry means the graph is not
    /// pseudorandom at the claimed `k` or the chain does not close.
    pub floor_violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuilderCertificate {
    pub path: DirectedPath,
    pub color: Color,
    pub branch: Branch,
    pub guarantee_active: bool,
    /// Length the active guarantee promises for this branch.
    pub bound: usize,
    pub trace: BuilderTrace,
}

impl BuilderCertificate {
    pub fn validate(&self, g: &OrientedGraph, coloring: &EdgeColoring) -> Result<()> {
        self.path.validate_monochromatic(g, coloring, self.color)?;
        if self.guarantee_active && self.path.len() < self.bound {
            return Err(Error::InvalidInput(format!(
                "path of length {} below the active bound {}",
                self.path.len(),
                self.bound
            )));
        }
        Ok(())
    }

    fn mapped(mut self, map: &[usize]) -> Self {
        self.path = self.path.mapped(map);
        let remap = |sets: &mut Vec<Vec<usize>>| {
            for set in sets.iter_mut() {
                for v in set.iter_mut() {
                    *v = map[*v];
                }
            }
        };
        remap(&mut self.trace.blocks);
        remap(&mut self.trace.cycles);
        self
    }
}

fn require_total(g: &OrientedGraph, coloring: &EdgeColoring) -> Result<()> {
    coloring.validate(g)?;
    if !coloring.is_total() {
        return Err(Error::ColoringMismatch("coloring leaves edges uncolored".into()));
    }
    Ok(())
}

/// Longest path of a maximal acyclic spanning subgraph; Hamiltonian for
/// tournaments and complete symmetric digraphs.
fn spanning_path(g: &OrientedGraph) -> DirectedPath {
    longest_path_dag(&maximal_acyclic_subgraph(g)).expect("acyclic subgraph")
}

/// Red path of length `n / (rho k)` or blue path of length about
/// `n / (2 rho)` in a 2-colored k-pseudorandom digraph.
///
/// If the red graph has no path of `tau` edges, its Gallai–Roy classes are
/// cut into blocks of `floor(beta k)` vertices with only blue edges inside.
/// Each block gives a blue DFS path closed into a blue cycle. On the
/// complete symmetric graph of cycles, `C_i -> C_j` is blue when at least
/// `k` vertices of `C_i` send a blue edge into `C_j`. A monochromatic path
/// of that graph is turned into a red path (one vertex per cycle) or a blue
/// path (at least `k` edges per cycle plus a full lap of the last).
pub fn two_color_path_finder(
    g: &OrientedGraph,
    coloring: &EdgeColoring,
    k: usize,
    cfg: &ConstantsConfig,
) -> Result<BuilderCertificate> {
    require_total(g, coloring)?;
    if coloring.colors().iter().any(|&c| c > BLUE) {
        return Err(Error::ColorOutOfRange {
            color: coloring.colors().iter().copied().max().unwrap_or(0) as usize,
            num_colors: 2,
        });
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    cfg.validate()?;
    let mut cert = two_color_pipeline(g, coloring, k, cfg);
    let used = coloring.distinct_colors();
    if used.len() == 1 {
        let path = spanning_path(g);
        if path.len() > cert.path.len() {
            cert.path = path;
            cert.color = used[0];
            cert.branch = Branch::MonochromaticShortcut;
        }
    }
    Ok(cert)
}

fn best_effort(g: &OrientedGraph, coloring: &EdgeColoring, mut trace: BuilderTrace) -> BuilderCertificate {
    let mut best = (DirectedPath::empty(), RED);
    for c in [RED, BLUE] {
        let p = dfs_long_path(&coloring.color_class(g, c)).path;
        if p.len() > best.0.len() {
            best = (p, c);
        }
    }
    if trace.floor_violations.is_empty() {
        trace.floor_violations.push("pipeline stopped early".into());
    }
    BuilderCertificate {
        path: best.0,
        color: best.1,
        branch: Branch::BestEffort,
        guarantee_active: false,
        bound: 0,
        trace,
    }
}

fn two_color_pipeline(
    g: &OrientedGraph,
    coloring: &EdgeColoring,
    k: usize,
    cfg: &ConstantsConfig,
) -> BuilderCertificate {
    let chain = ChainArithmetic::new(g.n(), k, cfg);
    let red = coloring.color_class(g, RED);
    let blue = coloring.color_class(g, BLUE);
    let mut trace = BuilderTrace {
        chain: Some(chain.clone()),
        ..BuilderTrace::default()
    };
    let vc = match gallai_roy(&red, chain.red_threshold) {
        GallaiRoy::Path(path) => {
            return BuilderCertificate {
                path,
                color: RED,
                branch: Branch::MonochromaticShortcut,
                guarantee_active: true,
                bound: chain.red_threshold,
                trace,
            }
        }
        GallaiRoy::Coloring(vc) => vc,
    };
    if !chain.closes {
        trace.floor_violations.push("size chain does not close".into());
    }
    let mut classes = vc.classes();
    trace.red_classes = classes.iter().filter(|c| !c.is_empty()).count();
    classes.sort_by_key(Vec::len);
    let b = chain.block_size;
    trace.blocks = classes
        .iter()
        .flat_map(|class| class.chunks_exact(b).map(<[usize]>::to_vec))
        .collect();
    if trace.blocks.is_empty() {
        return best_effort(g, coloring, trace);
    }
    if trace.blocks.len() < chain.t_min {
        trace
            .floor_violations
            .push(format!("{} blocks, fewer than {}", trace.blocks.len(), chain.t_min));
    }
    let built: Vec<(Option<Vec<usize>>, Vec<String>)> = trace
        .blocks
        .par_iter()
        .map(|block| blue_cycle(g, block, k, chain.cycle_floor))
        .collect();
    for (cycle, notes) in built {
        trace.floor_violations.extend(notes);
        match cycle {
            Some(c) => trace.cycles.push(c),
            None => return best_effort(g, coloring, trace),
        }
    }
    let t = trace.cycles.len();
    trace.h_coloring = auxiliary_coloring(&blue, &trace.cycles, k);

    let (h_path, h_color) = if t == 1 {
        (vec![0], BLUE)
    } else {
        let h = OrientedGraph::complete_symmetric(t);
        let colors = h.edges().iter().map(|&(i, j)| trace.h_coloring[i][j]).collect();
        let h_col = EdgeColoring::from_colors(&h, 2, colors).expect("two colors");
        match raynaud(&h, &h_col) {
            Ok(dec) => {
                let (p, c) = dec.monochromatic_path();
                (p.into_vertices(), c)
            }
            Err(e) => {
                trace
                    .floor_violations
                    .push(format!("auxiliary decomposition failed: {e}"));
                return best_effort(g, coloring, trace);
            }
        }
    };
    trace.h_path = h_path.clone();
    trace.h_path_color = Some(h_color);

    let (path, color, branch, bound) = if h_color == RED && h_path.len() >= 2 {
        let sets: Vec<Vec<usize>> = h_path
            .iter()
            .enumerate()
            .map(|(j, &ci)| match h_path.get(j + 1) {
                Some(&next) => red_side(&blue, &trace.cycles[ci], &trace.cycles[next]),
                None => trace.cycles[ci].clone(),
            })
            .collect();
        match thread_path_through_sets(&red, &sets) {
            Ok(p) => (p, RED, Branch::RedCase, chain.red_bound),
            Err(e) => {
                trace.floor_violations.push(format!("red threading failed: {e}"));
                return best_effort(g, coloring, trace);
            }
        }
    } else {
        let p = blue_walk(&blue, &trace.cycles, &h_path, k, &mut trace.floor_violations);
        (p, BLUE, Branch::BlueCase, chain.blue_bound)
    };
    if chain.closes && trace.floor_violations.is_empty() && path.len() < bound {
        trace
            .floor_violations
            .push(format!("path of length {} below bound {bound}", path.len()));
    }
    let guarantee_active = chain.closes && trace.floor_violations.is_empty();
    BuilderCertificate {
        path,
        color,
        branch,
        guarantee_active,
        bound: if guarantee_active { bound } else { 0 },
        trace,
    }
}

/// Blue DFS path in a block closed by the back edge from its last `k`
/// vertices to its first `k` that gives the longest cycle.
fn blue_cycle(g: &OrientedGraph, block: &[usize], k: usize, cycle_floor: i64) -> (Option<Vec<usize>>, Vec<String>) {
    let mut notes = Vec::new();
    let sub = g.induced(block);
    let path: Vec<usize> = dfs_long_path(&sub)
        .path
        .into_vertices()
        .into_iter()
        .map(|i| block[i])
        .collect();
    let b = block.len() as i64;
    let path_floor = b - 2 * k as i64 + 2;
    if (path.len() as i64) < path_floor {
        notes.push(format!(
            "block path has {} vertices, fewer than {path_floor}",
            path.len()
        ));
    }
    let l = path.len();
    if l == 1 {
        return (Some(path), notes);
    }
    let mut best: Option<(usize, usize)> = None;
    for i in l.saturating_sub(k)..l {
        for j in 0..k.min(l) {
            if j < i && g.has_edge(path[i], path[j]) && best.is_none_or(|(bi, bj)| i - j > bi - bj) {
                best = Some((i, j));
            }
        }
    }
    let Some((i, j)) = best else {
        notes.push("no back edge closes the block path".into());
        return (None, notes);
    };
    let cycle = path[j..=i].to_vec();
    if (cycle.len() as i64) < cycle_floor {
        notes.push(format!("cycle of {} vertices, fewer than {cycle_floor}", cycle.len()));
    }
    (Some(cycle), notes)
}

fn members(n: usize, words: usize, set: &[usize]) -> Vec<u64> {
    let mut bits = vec![0u64; words];
    for &v in set {
        debug_assert!(v < n);
        set_bit(&mut bits, v);
    }
    bits
}

fn sends_into(blue: &OrientedGraph, v: usize, target: &[u64]) -> bool {
    blue.out_row(v).iter().zip(target).any(|(&r, &t)| r & t != 0)
}

fn auxiliary_coloring(blue: &OrientedGraph, cycles: &[Vec<usize>], k: usize) -> Vec<Vec<Color>> {
    let words = blue.row_words();
    let sets: Vec<Vec<u64>> = cycles.iter().map(|c| members(blue.n(), words, c)).collect();
    (0..cycles.len())
        .map(|i| {
            (0..cycles.len())
                .map(|j| {
                    if i == j {
                        0
                    } else if cycles[i].iter().filter(|&&v| sends_into(blue, v, &sets[j])).count() >= k {
                        BLUE
                    } else {
                        RED
                    }
                })
                .collect()
        })
        .collect()
}

/// Vertices of `from` with no blue edge into `to`.
fn red_side(blue: &OrientedGraph, from: &[usize], to: &[usize]) -> Vec<usize> {
    let target = members(blue.n(), blue.row_words(), to);
    from.iter()
        .copied()
        .filter(|&v| !sends_into(blue, v, &target))
        .collect()
}

/// Walks each cycle from its entry to the nearest endpoint at least `k - 1`
/// steps ahead, hops to the lowest-id blue out-neighbor in the next cycle,
/// and finishes with a full lap of the last cycle.
fn blue_walk(
    blue: &OrientedGraph,
    cycles: &[Vec<usize>],
    h_path: &[usize],
    k: usize,
    notes: &mut Vec<String>,
) -> DirectedPath {
    let words = blue.row_words();
    let mut path = Vec::new();
    let mut entry = 0usize;
    for (j, &ci) in h_path.iter().enumerate() {
        let cycle = &cycles[ci];
        let c = cycle.len();
        let Some(&next) = h_path.get(j + 1) else {
            path.extend((0..c).map(|d| cycle[(entry + d) % c]));
            break;
        };
        let target = members(blue.n(), words, &cycles[next]);
        let is_end = |d: usize| sends_into(blue, cycle[(entry + d) % c], &target);
        let d = (k - 1..c).find(|&d| is_end(d)).or_else(|| {
            notes.push(format!("cycle {ci} has no endpoint {} steps ahead", k - 1));
            (0..c).find(|&d| is_end(d))
        });
        let Some(d) = d else {
            notes.push(format!("cycle {ci} has no endpoint"));
            break;
        };
        path.extend((0..=d).map(|s| cycle[(entry + s) % c]));
        let end = *path.last().expect("walk is nonempty");
        let hop = cycles[next]
            .iter()
            .copied()
            .filter(|&w| test_bit(blue.out_row(end), w))
            .min()
            .expect("endpoint has a blue edge into the next cycle");
        entry = cycles[next]
            .iter()
            .position(|&w| w == hop)
            .expect("hop target on the cycle");
    }
    DirectedPath::new(path)
}

/// Multicolor recursion: peel the top color with Gallai–Roy at threshold
/// `n_target` and continue inside its largest class, down to two colors.
/// The guarantee is active when a peel finds the path or the two-color
/// stage certifies a branch bound of at least `n_target`.
pub fn multicolor_path_finder(
    g: &OrientedGraph,
    coloring: &EdgeColoring,
    k: usize,
    n_target: usize,
    cfg: &ConstantsConfig,
) -> Result<BuilderCertificate> {
    require_total(g, coloring)?;
    let mut vertices: Vec<usize> = (0..g.n()).collect();
    let mut levels = Vec::new();
    match peel(g, coloring, n_target, &mut vertices, &mut levels) {
        Some(cert) => Ok(cert),
        None => {
            let (sub, subcol) = coloring.restrict(g, &vertices);
            let mut cert = if coloring.num_colors() == 1 {
                single_color(&sub, n_target)
            } else {
                let mut cert = two_color_path_finder(&sub, &subcol.with_num_colors(2), k, cfg)?;
                if cert.guarantee_active && cert.bound < n_target {
                    cert.guarantee_active = false;
                    cert.trace
                        .floor_violations
                        .push(format!("two-color bound {} below target {n_target}", cert.bound));
                }
                cert.bound = if cert.guarantee_active { n_target } else { 0 };
                cert
            }
            .mapped(&vertices);
            cert.trace.levels = levels;
            Ok(cert)
        }
    }
}

fn single_color(g: &OrientedGraph, n_target: usize) -> BuilderCertificate {
    let path = spanning_path(g);
    let active = path.len() >= n_target;
    BuilderCertificate {
        path,
        color: 1,
        branch: Branch::MonochromaticShortcut,
        guarantee_active: active,
        bound: if active { n_target } else { 0 },
        trace: BuilderTrace::default(),
    }
}

/// Peels colors `num_colors` down to 3. Returns a certificate if some
/// peel finds a path of length `n_target`; otherwise shrinks `vertices`
/// to the surviving class.
fn peel(
    g: &OrientedGraph,
    coloring: &EdgeColoring,
    n_target: usize,
    vertices: &mut Vec<usize>,
    levels: &mut Vec<PeelLevel>,
) -> Option<BuilderCertificate> {
    for c in (3..=coloring.num_colors()).rev() {
        let (sub, subcol) = coloring.restrict(g, vertices);
        let class = subcol.color_class(&sub, c);
        match gallai_roy(&class, n_target) {
            GallaiRoy::Path(p) => {
                return Some(BuilderCertificate {
                    path: p.mapped(vertices),
                    color: c,
                    branch: Branch::MonochromaticShortcut,
                    guarantee_active: true,
                    bound: n_target,
                    trace: BuilderTrace {
                        levels: levels.clone(),
                        ..BuilderTrace::default()
                    },
                })
            }
            GallaiRoy::Coloring(vc) => {
                let classes = vc.classes();
                let largest = classes
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                let kept: Vec<usize> = classes
                    .get(largest)
                    .map(|cl| cl.iter().map(|&i| vertices[i]).collect())
                    .unwrap_or_default();
                levels.push(PeelLevel {
                    color: c,
                    vertices: vertices.len(),
                    classes: classes.iter().filter(|cl| !cl.is_empty()).count(),
                    kept: kept.len(),
                });
                *vertices = kept;
            }
        }
    }
    None
}

/// The same recursion on a colored complete symmetric digraph on `t`
/// vertices, with the Hamilton decomposition of two-colored complete
/// symmetric digraphs at the base (a path of `floor(|A|/2)` edges). The
/// guarantee is active only when the base class is large enough, which
/// `t >= n_target^q` alone does not ensure. When the recursion falls short
/// and `t` is within the exact-search limit, an exhaustive search replaces
/// the result.
pub fn symmetric_multicolor_finder(
    t: usize,
    coloring: &EdgeColoring,
    n_target: usize,
    cfg: &ConstantsConfig,
) -> Result<BuilderCertificate> {
    let g = OrientedGraph::complete_symmetric(t);
    require_total(&g, coloring)?;
    let mut vertices: Vec<usize> = (0..t).collect();
    let mut levels = Vec::new();
    let mut cert = match peel(&g, coloring, n_target, &mut vertices, &mut levels) {
        Some(cert) => cert,
        None => {
            let (sub, subcol) = coloring.restrict(&g, &vertices);
            let (path, color) = if coloring.num_colors() == 1 || sub.edge_count() == 0 {
                (DirectedPath::new((0..sub.n()).collect()), 1)
            } else {
                let dec = raynaud(&sub, &subcol.with_num_colors(2))?;
                dec.monochromatic_path()
            };
            let base_bound = if coloring.num_colors() == 1 {
                sub.n().saturating_sub(1)
            } else {
                sub.n() / 2
            };
            let active = base_bound >= n_target;
            let mut trace = BuilderTrace {
                levels,
                ..BuilderTrace::default()
            };
            if !active {
                trace.floor_violations.push(format!(
                    "base class of {} vertices guarantees only {base_bound}",
                    sub.n()
                ));
            }
            BuilderCertificate {
                path: path.mapped(&vertices),
                color,
                branch: if color == RED {
                    Branch::RedCase
                } else {
                    Branch::BlueCase
                },
                guarantee_active: active,
                bound: if active { n_target } else { 0 },
                trace,
            }
        }
    };
    if cert.path.len() < n_target && t <= cfg.exact_path_limit {
        let (value, path, color) = max_mono_path(&g, coloring, cfg.exact_path_limit)?;
        if value > cert.path.len() {
            cert.path = path;
            cert.color = color;
            cert.branch = Branch::SmallNFallback;
            cert.guarantee_active = value >= n_target;
            cert.bound = if cert.guarantee_active { n_target } else { 0 };
        }
    }
    Ok(cert)
}
