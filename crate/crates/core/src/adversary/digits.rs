use serde::{Deserialize, Serialize};

use crate::classic::vertex_levels;
use crate::error::{Error, Result};
use crate::graph::{set_bit, Color, EdgeColoring, OrientedGraph, VertexColoring};

/// A 0-based index written in base `base` with exactly `q` digits, most
/// significant first, so `digits[0]` is coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitEncoding {
    pub base: usize,
    pub digits: Vec<usize>,
}

impl DigitEncoding {
    pub fn new(index: usize, base: usize, q: usize) -> Result<Self> {
        if base == 0 || checked_pow(base, q).is_some_and(|cap| index >= cap) {
            return Err(Error::InvalidInput(format!(
                "index {index} does not fit in {q} base-{base} digits"
            )));
        }
        let mut digits = vec![0; q];
        let mut rest = index;
        if base > 1 {
            for d in digits.iter_mut().rev() {
                *d = rest % base;
                rest /= base;
            }
        }
        Ok(Self { base, digits })
    }

    pub fn index(&self) -> usize {
        self.digits.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    /// 1-based coordinate `y`.
    pub fn digit(&self, y: usize) -> usize {
        self.digits[y - 1]
    }

    pub fn digit_sum(&self) -> usize {
        self.digits.iter().sum()
    }
}

fn checked_pow(base: usize, q: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..q {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Smallest `s >= 1` with `count <= s^q`, i.e. `ceil(count^{1/q})`.
pub fn minimal_base(count: usize, q: usize) -> usize {
    assert!(q >= 1, "at least one digit");
    let mut s = (count as f64).powf(1.0 / q as f64).floor().max(1.0) as usize;
    while s > 1 && checked_pow(s - 1, q).is_some_and(|p| p >= count) {
        s -= 1;
    }
    while checked_pow(s, q).is_some_and(|p| p < count) {
        s += 1;
    }
    s
}

/// Color of every edge from block `i` to block `j`: the lowest coordinate
/// where `i` has the smaller digit, else `q + 1`.
pub fn digit_color(i: &DigitEncoding, j: &DigitEncoding) -> Color {
    let q = i.digits.len();
    let y = (0..q).find(|&y| i.digits[y] < j.digits[y]).unwrap_or(q);
    (y + 1) as Color
}

fn require_q(q: usize) -> Result<()> {
    if q == 0 || q + 1 > Color::MAX as usize {
        return Err(Error::InvalidInput(format!("q = {q} out of range")));
    }
    Ok(())
}

/// Bound of the block product: `q (r + 1) ceil(k^{1/q})`, zero for no blocks.
pub fn product_bound(q: usize, r: usize, k: usize) -> usize {
    if k == 0 {
        0
    } else {
        q * (r + 1) * minimal_base(k, q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProduct {
    /// Edges inside `∪ A_i` are colored; every other edge keeps the color
    /// it had in the inner coloring (0 if none).
    pub coloring: EdgeColoring,
    pub base: usize,
    pub bound: usize,
}

/// Extends `inner` (a `(q+1)`-coloring of the edges inside each block,
/// longest monochromatic path at most `r` per block) to every edge between
/// blocks. Block `i` gets the encoding of `i` in base `s`, `s` minimal with
/// `k <= s^q`; a monochromatic path of color `y <= q` strictly increases
/// coordinate `y` from block to block and one of color `q + 1` strictly
/// decreases the digit sum, so it visits at most `qs` blocks.
pub fn block_product_coloring(
    g: &OrientedGraph,
    blocks: &[Vec<usize>],
    inner: &EdgeColoring,
    r: usize,
    q: usize,
) -> Result<BlockProduct> {
    require_q(q)?;
    if inner.colors().len() != g.edge_count() {
        return Err(Error::ColoringMismatch(format!(
            "inner coloring has {} entries for {} edges",
            inner.colors().len(),
            g.edge_count()
        )));
    }
    let n = g.n();
    let mut owner = vec![usize::MAX; n];
    for (i, block) in blocks.iter().enumerate() {
        for &v in block {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if owner[v] != usize::MAX {
                return Err(Error::NotDisjoint(v));
            }
            owner[v] = i;
        }
    }
    let k = blocks.len();
    let base = if k == 0 { 1 } else { minimal_base(k, q) };
    let codes: Vec<DigitEncoding> = (0..k)
        .map(|i| DigitEncoding::new(i, base, q).expect("k <= s^q"))
        .collect();
    let num_colors = (q + 1) as Color;
    let mut coloring = inner.clone().with_num_colors(num_colors.max(inner.num_colors()));
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        let (bu, bv) = (owner[u], owner[v]);
        if bu == usize::MAX || bv == usize::MAX {
            continue;
        }
        if bu == bv {
            match inner.get(id) {
                Some(c) if c as usize <= q + 1 => {}
                Some(c) => {
                    return Err(Error::ColorOutOfRange {
                        color: c as usize,
                        num_colors: q + 1,
                    })
                }
                None => {
                    return Err(Error::ColoringMismatch(format!(
                        "edge {u} -> {v} inside block {bu} is uncolored"
                    )))
                }
            }
        } else {
            coloring.set(id, digit_color(&codes[bu], &codes[bv]));
        }
    }
    Ok(BlockProduct {
        coloring,
        base,
        bound: product_bound(q, r, k),
    })
}

/// The block product over the classes of a proper vertex coloring, with
/// no inner edges: no monochromatic path longer than `q ceil(k^{1/q})`.
pub fn color_classes_coloring(g: &OrientedGraph, vc: &VertexColoring, q: usize) -> Result<BlockProduct> {
    if vc.colors().len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "vertex coloring covers {} of {} vertices",
            vc.colors().len(),
            g.n()
        )));
    }
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| vc.color(u) == vc.color(v)) {
        return Err(Error::ImproperVertexColoring(u, v));
    }
    let blocks: Vec<Vec<usize>> = vc.classes().into_iter().filter(|c| !c.is_empty()).collect();
    let inner = EdgeColoring::uncolored(g, (q + 1).min(Color::MAX as usize) as Color);
    block_product_coloring(g, &blocks, &inner, 0, q)
}

/// First-fit coloring of the underlying undirected graph. A vertex opens
/// class `j` only after meeting a neighbor in every earlier class, so every
/// two classes are adjacent and `m >= C(k, 2)`, giving `k <= 2 sqrt(m) + 1`.
pub fn constructive_chromatic(g: &OrientedGraph) -> VertexColoring {
    let words = g.row_words();
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut colors = vec![0usize; g.n()];
    for (v, color) in colors.iter_mut().enumerate() {
        let (out, inn) = (g.out_row(v), g.in_row(v));
        let free = classes.iter().position(|class| {
            class
                .iter()
                .zip(out.iter().zip(inn))
                .all(|(&c, (&o, &i))| c & (o | i) == 0)
        });
        let j = free.unwrap_or_else(|| {
            classes.push(vec![0u64; words]);
            classes.len() - 1
        });
        set_bit(&mut classes[j], v);
        *color = j + 1;
    }
    VertexColoring::new_unchecked(colors)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicColoring {
    pub coloring: EdgeColoring,
    pub base: usize,
    /// Longest path of the acyclic graph.
    pub longest_path: usize,
    /// `base - 1`: no monochromatic path has more than `base` vertices.
    pub bound: usize,
}

/// Colors an acyclic graph with `q` colors. With levels `Z_0..Z_t` (longest
/// path ending at each vertex) encoded in base `s`, `s` minimal with
/// `t + 1 <= s^q`, an edge `Z_i -> Z_j` gets the lowest coordinate where
/// `j` has the larger digit. The result is declared with `q + 1` colors so
/// it can serve as the inner coloring of a block product.
pub fn acyclic_edge_coloring(z: &OrientedGraph, q: usize) -> Result<AcyclicColoring> {
    require_q(q)?;
    let level = vertex_levels(z)?;
    let t = level.iter().copied().max().unwrap_or(0);
    let base = minimal_base(t + 1, q);
    let codes: Vec<DigitEncoding> = (0..=t)
        .map(|i| DigitEncoding::new(i, base, q).expect("t + 1 <= s^q"))
        .collect();
    let colors = z
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (&codes[level[u]], &codes[level[v]]);
            let y = (0..q).find(|&y| b.digits[y] > a.digits[y]).expect("levels increase");
            (y + 1) as Color
        })
        .collect();
    Ok(AcyclicColoring {
        coloring: EdgeColoring::from_colors(z, (q + 1) as Color, colors)?,
        base,
        longest_path: t,
        bound: base - 1,
    })
}
