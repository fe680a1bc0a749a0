use serde::{Deserialize, Serialize};

use super::acyclic::sparse_acyclic_set;
use super::digits::{
    acyclic_edge_coloring, block_product_coloring, color_classes_coloring, constructive_chromatic, minimal_base,
};
use crate::config::ConstantsConfig;
use crate::error::{Error, Result};
use crate::graph::{Color, EdgeColoring, OrientedGraph};

/// Parts in escape order: an edge from a lower part to a higher one gets
/// color 1, the reverse direction color 2.
pub const PART_X: u8 = 0;
pub const PART_RESIDUE: u8 = 1;
pub const PART_COVERED: u8 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    pub step: usize,
    pub epsilon: f64,
    /// Common block size.
    pub a: usize,
    pub blocks: Vec<Vec<usize>>,
    /// Largest bound among the acyclic block colorings.
    pub block_bound: usize,
    /// Bound for the whole family after the block product.
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartBounds {
    pub x: usize,
    pub covered: usize,
    pub residue: usize,
    /// `x + covered + residue + 2`: a path crosses between parts at most twice.
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyPartition {
    pub q: usize,
    pub target_path_length: Option<usize>,
    pub degree_threshold: f64,
    pub termination_edge_threshold: f64,
    pub x: Vec<usize>,
    /// `|Y|`, the number of high-degree vertices.
    pub m: usize,
    pub families: Vec<Family>,
    pub residue: Vec<usize>,
    pub covered: Vec<usize>,
    pub residue_edges: usize,
    /// The procedure stopped because the residue got sparse enough.
    pub terminated: bool,
    /// Steps cut short because no acyclic set of the step's size was found.
    pub shortfalls: usize,
    pub x_classes: usize,
    pub residue_classes: usize,
    pub bounds: PartBounds,
}

impl FamilyPartition {
    pub fn parts(&self, n: usize) -> Vec<u8> {
        let mut part = vec![u8::MAX; n];
        for &v in &self.x {
            part[v] = PART_X;
        }
        for &v in &self.residue {
            part[v] = PART_RESIDUE;
        }
        for &v in &self.covered {
            part[v] = PART_COVERED;
        }
        part
    }

    /// Structural checks: the three parts partition `V`, every block is
    /// acyclic, blocks in a family share a size, and the residue meets the
    /// termination threshold if the procedure terminated.
    pub fn validate(&self, g: &OrientedGraph) -> Result<()> {
        let mut seen = vec![false; g.n()];
        for &v in self.x.iter().chain(&self.residue).chain(&self.covered) {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if seen[v] {
                return Err(Error::NotDisjoint(v));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidInput(format!("vertex {v} is in no part")));
        }
        let mut in_blocks: Vec<usize> = Vec::new();
        for family in &self.families {
            for block in &family.blocks {
                if block.len() != family.a {
                    return Err(Error::InvalidInput(format!(
                        "block of size {} in a family of size {}",
                        block.len(),
                        family.a
                    )));
                }
                if !g.is_acyclic_set(block) {
                    return Err(Error::InvalidInput(format!("block {block:?} is not acyclic")));
                }
                in_blocks.extend(block);
            }
        }
        in_blocks.sort_unstable();
        if in_blocks != self.covered {
            return Err(Error::InvalidInput("blocks do not cover the covered part".into()));
        }
        if self.terminated && self.residue_edges as f64 > self.termination_edge_threshold {
            return Err(Error::InvalidInput("residue above the termination threshold".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryOutput {
    pub coloring: EdgeColoring,
    pub trace: FamilyPartition,
}

fn require_oriented(g: &OrientedGraph) -> Result<()> {
    match g.edges().iter().find(|&&(u, v)| g.has_edge(v, u)) {
        Some(&(u, v)) => Err(Error::Antiparallel(u, v)),
        None => Ok(()),
    }
}

/// Copies a coloring of `g.induced(vertices)` onto the matching edges of `g`.
fn lift(g: &OrientedGraph, vertices: &[usize], local: &EdgeColoring, into: &mut EdgeColoring) {
    for (local_id, global_id) in g.edges_within(vertices).into_iter().enumerate() {
        if let Some(c) = local.get(local_id) {
            into.set(global_id, c);
        }
    }
}

fn classes_part(g: &OrientedGraph, vertices: &[usize], q: usize, into: &mut EdgeColoring) -> Result<(usize, usize)> {
    let sub = g.induced(vertices);
    let vc = constructive_chromatic(&sub);
    let colored = color_classes_coloring(&sub, &vc, q)?;
    lift(g, vertices, &colored.coloring, into);
    let classes = if vertices.is_empty() { 0 } else { vc.num_colors() };
    Ok((classes, colored.bound))
}

fn block_size(cfg_block: Option<usize>, c: f64, scale: f64, epsilon: f64) -> usize {
    if let Some(a) = cfg_block {
        return a;
    }
    let log_scale = scale.log2().max(0.0);
    let a = if epsilon >= 0.25 {
        log_scale.floor() + 1.0
    } else {
        c * log_scale / (epsilon * (1.0 / epsilon).log2())
    };
    if a.is_finite() {
        a.floor().max(1.0) as usize
    } else {
        1
    }
}

/// The full partition pipeline on an oriented graph, producing a
/// `(q + 1)`-coloring and the partition trace.
///
/// Low-degree vertices `X` and the final residue `Y'` are colored through
/// their first-fit classes. The high-degree rest is peeled into families
/// of equal-size acyclic blocks: step `i` fixes `eps_i = |E(Y')| / (m/2^i)^2`
/// and a block size `a_i`, then removes blocks until `|Y'| <= m/2^i`. The
/// procedure stops once `|E(Y')|` drops to the termination threshold.
pub fn theorem1_adversary(g: &OrientedGraph, q: usize, cfg: &ConstantsConfig) -> Result<AdversaryOutput> {
    if q == 0 || q + 1 > Color::MAX as usize {
        return Err(Error::InvalidInput(format!("q = {q} out of range")));
    }
    cfg.validate()?;
    require_oriented(g)?;
    let th = cfg.adversary_thresholds(q, g.edge_count())?;
    let n = g.n();
    let (x, y): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| g.degree(v) as f64 <= th.degree_threshold);
    let m = y.len();

    let mut residue = y;
    let mut families = Vec::new();
    let mut shortfalls = 0;
    let mut terminated = false;
    let mut step = 1usize;
    loop {
        let edges = g.edges_within(&residue).len();
        if edges as f64 <= th.termination_edge_threshold {
            terminated = true;
            break;
        }
        let scale = m as f64 / 2f64.powi(step as i32);
        if scale < 1.0 {
            break;
        }
        let epsilon = edges as f64 / (scale * scale);
        let a = block_size(th.block_size, cfg.c, scale, epsilon)
            .min(residue.len())
            .max(1);
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        // The unused part of an acyclic set stays acyclic after removals.
        let mut pool: Vec<usize> = Vec::new();
        while residue.len() as f64 > scale {
            if pool.len() < a {
                let sub = g.induced(&residue);
                pool = sparse_acyclic_set(&sub, cfg)
                    .set
                    .into_iter()
                    .map(|i| residue[i])
                    .collect();
                if pool.len() < a {
                    shortfalls += 1;
                    break;
                }
            }
            let block: Vec<usize> = pool.drain(..a).collect();
            residue.retain(|v| block.binary_search(v).is_err());
            blocks.push(block);
        }
        if !blocks.is_empty() {
            families.push(Family {
                step,
                epsilon,
                a,
                blocks,
                block_bound: 0,
                bound: 0,
            });
        }
        step += 1;
    }

    let num_colors = (q + 1) as Color;
    let mut coloring = EdgeColoring::uncolored(g, num_colors);
    for family in &mut families {
        for block in &family.blocks {
            let colored = acyclic_edge_coloring(&g.induced(block), q)?;
            lift(g, block, &colored.coloring, &mut coloring);
            family.block_bound = family.block_bound.max(colored.bound);
        }
        let product = block_product_coloring(g, &family.blocks, &coloring, family.block_bound, q)?;
        coloring = product.coloring;
        family.bound = product.bound;
    }
    let family_sets: Vec<Vec<usize>> = families.iter().map(|f| f.blocks.concat()).collect();
    let covered_bound = if families.is_empty() {
        0
    } else {
        let r = families.iter().map(|f| f.bound).max().unwrap_or(0);
        let product = block_product_coloring(g, &family_sets, &coloring, r, q)?;
        coloring = product.coloring;
        product.bound
    };
    let mut covered = family_sets.concat();
    covered.sort_unstable();

    let (x_classes, x_bound) = classes_part(g, &x, q, &mut coloring)?;
    let (residue_classes, residue_bound) = classes_part(g, &residue, q, &mut coloring)?;
    let residue_edges = g.edges_within(&residue).len();

    let mut trace = FamilyPartition {
        q,
        target_path_length: th.target_path_length,
        degree_threshold: th.degree_threshold,
        termination_edge_threshold: th.termination_edge_threshold,
        x,
        m,
        families,
        residue,
        covered,
        residue_edges,
        terminated,
        shortfalls,
        x_classes,
        residue_classes,
        bounds: PartBounds {
            x: x_bound,
            covered: covered_bound,
            residue: residue_bound,
            total: x_bound + covered_bound + residue_bound + 2,
        },
    };
    let part = trace.parts(n);
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if part[u] != part[v] {
            coloring.set(id, if part[u] < part[v] { 1 } else { 2 });
        }
    }
    debug_assert!(coloring.is_total());
    trace.residue.sort_unstable();
    Ok(AdversaryOutput { coloring, trace })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricColoring {
    pub coloring: EdgeColoring,
    pub classes: usize,
    /// `q ceil(classes^{1/q})`.
    pub bound: usize,
}

/// First-fit classes then the class product. Works on any digraph,
/// antiparallel pairs included; with `m` edges there are at most
/// `2 sqrt(m) + 1` classes.
pub fn symmetric_adversary(g: &OrientedGraph, q: usize) -> Result<SymmetricColoring> {
    let vc = constructive_chromatic(g);
    let colored = color_classes_coloring(g, &vc, q)?;
    let classes = if g.n() == 0 { 0 } else { vc.num_colors() };
    Ok(SymmetricColoring {
        coloring: colored.coloring,
        classes,
        bound: if classes == 0 { 0 } else { q * minimal_base(classes, q) },
    })
}
