use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ConstantsConfig;
use crate::graph::{ones, set_bit, test_bit, OrientedGraph};
use crate::pseudorandom::Tournament;

/// Transitive subtournament of size at least `floor(log2 n) + 1`, listed in
/// topological order: take a vertex of largest out-degree inside the
/// current set (lowest id on ties) and continue inside its out-neighborhood,
/// which keeps at least half of the remaining vertices.
pub fn tournament_acyclic_set(t: &Tournament) -> Vec<usize> {
    let g = t.graph();
    let words = g.row_words();
    let mut current = vec![0u64; words];
    for v in 0..g.n() {
        set_bit(&mut current, v);
    }
    let mut chain = Vec::new();
    loop {
        let best = ones(&current)
            .map(|v| (inside(g.out_row(v), &current), v))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((_, v)) = best else { break };
        chain.push(v);
        for (c, &r) in current.iter_mut().zip(g.out_row(v)) {
            *c &= r;
        }
    }
    chain
}

fn inside(row: &[u64], set: &[u64]) -> usize {
    row.iter().zip(set).map(|(&a, &b)| (a & b).count_ones() as usize).sum()
}

/// Acyclic subset of `subset` via the tournament completion of the induced
/// subgraph; falls back to the greedy set if the graph has 2-cycles there.
pub fn acyclic_via_completion(g: &OrientedGraph, subset: &[usize]) -> Vec<usize> {
    let sub = g.induced(subset);
    let completion = Tournament::new(sub.tournament_completion()).expect("completion is a tournament");
    let mut set: Vec<usize> = tournament_acyclic_set(&completion)
        .into_iter()
        .map(|i| subset[i])
        .collect();
    set.sort_unstable();
    if g.is_acyclic_set(&set) {
        set
    } else {
        greedy_acyclic_set(g, subset)
    }
}

/// Scans `subset` in order and keeps each vertex that closes no cycle.
pub fn greedy_acyclic_set(g: &OrientedGraph, subset: &[usize]) -> Vec<usize> {
    let words = g.row_words();
    let mut members = vec![0u64; words];
    let mut set = Vec::new();
    for &v in subset {
        if !closes_cycle(g, &members, v) {
            set_bit(&mut members, v);
            set.push(v);
        }
    }
    set.sort_unstable();
    set
}

/// Whether some vertex of `members` reachable from `v` inside `members`
/// has an edge back to `v`.
fn closes_cycle(g: &OrientedGraph, members: &[u64], v: usize) -> bool {
    let words = members.len();
    let mut reached = vec![0u64; words];
    let mut frontier: Vec<usize> = Vec::new();
    for (i, (&r, &m)) in g.out_row(v).iter().zip(members).enumerate() {
        reached[i] = r & m;
    }
    frontier.extend(ones(&reached));
    while let Some(u) = frontier.pop() {
        if g.has_edge(u, v) {
            return true;
        }
        for i in 0..words {
            let fresh = g.out_row(u)[i] & members[i] & !reached[i];
            if fresh != 0 {
                reached[i] |= fresh;
                let mut bits = fresh;
                while bits != 0 {
                    frontier.push(i * 64 + bits.trailing_zeros() as usize);
                    bits &= bits - 1;
                }
            }
        }
    }
    false
}

/// Outcome of the acyclic-set search in a sparse graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcyclicSearch {
    /// Ascending vertex ids.
    pub set: Vec<usize>,
    /// Edge density `|E| / n^2`.
    pub epsilon: f64,
    /// `c log n / (eps log(1/eps))`, or `floor(log n) + 1` for dense input.
    pub target: f64,
    /// The target was not reached and no improving step was found.
    pub best_effort: bool,
    pub improvements: usize,
}

/// Large acyclic set in a sparse oriented graph. Starts from the larger of
/// a greedy maximal acyclic set and the completion-based set, then repeats
/// the exchange step: among vertices with few out-neighbors in `U`, group
/// those whose out-neighborhoods in `U` fit in a common cover, take an
/// acyclic `R''` inside a group, and replace `U` by `R'' ∪ (U \ N⁺(R''))`
/// when that is larger. No edge leaves `R''` into the kept part of `U`, so
/// the new set is acyclic.
pub fn sparse_acyclic_set(g: &OrientedGraph, cfg: &ConstantsConfig) -> AcyclicSearch {
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    if n == 0 {
        return AcyclicSearch {
            set: Vec::new(),
            epsilon: 0.0,
            target: 0.0,
            best_effort: false,
            improvements: 0,
        };
    }
    let epsilon = g.edge_count() as f64 / (n * n) as f64;
    let greedy = greedy_acyclic_set(g, &all);
    let mut set = if greedy.len() == n {
        greedy
    } else {
        let other = acyclic_via_completion(g, &all);
        if other.len() > greedy.len() {
            other
        } else {
            greedy
        }
    };
    let log_n = (n as f64).log2();
    if epsilon == 0.0 || epsilon >= 0.25 {
        let target = if epsilon == 0.0 { n as f64 } else { log_n.floor() + 1.0 };
        return AcyclicSearch {
            best_effort: (set.len() as f64) < target,
            set,
            epsilon,
            target,
            improvements: 0,
        };
    }
    let target = cfg.c * log_n / (epsilon * (1.0 / epsilon).log2());
    let mut improvements = 0;
    let mut best_effort = false;
    while (set.len() as f64) < target {
        match exchange_step(g, &set, epsilon) {
            Some(next) => {
                set = next;
                improvements += 1;
            }
            None => {
                best_effort = true;
                break;
            }
        }
    }
    AcyclicSearch {
        set,
        epsilon,
        target,
        best_effort,
        improvements,
    }
}

fn exchange_step(g: &OrientedGraph, set: &[usize], epsilon: f64) -> Option<Vec<usize>> {
    let n = g.n();
    let words = g.row_words();
    let mut in_u = vec![0u64; words];
    for &v in set {
        set_bit(&mut in_u, v);
    }
    let cover = (5.0 * epsilon * set.len() as f64).floor() as usize;
    let mut exact: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut padded: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in (0..n).filter(|&v| !test_bit(&in_u, v)) {
        let hits: Vec<usize> = set.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        if hits.len() > cover {
            continue;
        }
        let mut key = hits.clone();
        for &u in set {
            if key.len() >= cover {
                break;
            }
            if !hits.contains(&u) {
                key.push(u);
            }
        }
        key.sort_unstable();
        exact.entry(hits).or_default().push(v);
        padded.entry(key).or_default().push(v);
    }
    let mut best: Option<Vec<usize>> = None;
    for group in exact.values().chain(padded.values()) {
        let r2 = acyclic_via_completion(g, group);
        let mut blocked = vec![0u64; words];
        for &v in &r2 {
            for (b, (&r, &m)) in blocked.iter_mut().zip(g.out_row(v).iter().zip(&in_u)) {
                *b |= r & m;
            }
        }
        let kept = set.iter().filter(|&&u| !test_bit(&blocked, u)).count();
        let size = kept + r2.len();
        if size > best.as_ref().map_or(set.len(), Vec::len) {
            let mut next: Vec<usize> = set.iter().copied().filter(|&u| !test_bit(&blocked, u)).collect();
            next.extend(r2);
            next.sort_unstable();
            best = Some(next);
        }
    }
    best
}
