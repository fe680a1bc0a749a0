//! Fixed benchmark inputs, shared so numbers stay comparable across runs.

use dipath_core::harness::random_coloring;
use dipath_core::pseudorandom::random_tournament;
use dipath_core::{EdgeColoring, OrientedGraph};

pub fn tournament(n: usize) -> OrientedGraph {
    random_tournament(n, 0x5eed ^ n as u64).into_graph()
}

pub fn colored_tournament(n: usize) -> (OrientedGraph, EdgeColoring) {
    let g = tournament(n);
    let c = random_coloring(&g, 2, n as u64);
    (g, c)
}
