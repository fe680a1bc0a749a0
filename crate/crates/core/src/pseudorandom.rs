//! Random and quadratic-residue tournaments, k-pseudorandomness (every two
//! disjoint k-sets `A`, `B` have an edge from `A` to `B`), and the two path
//! constructions that pseudorandomness guarantees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ones, set_bit, test_bit, DirectedPath, OrientedGraph};

/// An oriented graph with exactly one edge between every pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament(OrientedGraph);

impl Tournament {
    pub fn new(g: OrientedGraph) -> Result<Self> {
        match g.tournament_violation() {
            Some(e) => Err(e),
            None => Ok(Self(g)),
        }
    }

    pub fn graph(&self) -> &OrientedGraph {
        &self.0
    }

    pub fn into_graph(self) -> OrientedGraph {
        self.0
    }
}

impl AsRef<OrientedGraph> for Tournament {
    fn as_ref(&self) -> &OrientedGraph {
        &self.0
    }
}

/// Every pair oriented by an independent fair coin from a ChaCha8 stream
/// seeded with `seed`; pairs are visited as `(u, v)`, `u < v`, in
/// lexicographic order.
pub fn random_tournament(n: usize, seed: u64) -> Tournament {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = OrientedGraph::new(n, false);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<bool>() {
                g.add_edge(u, v).expect("fresh pair");
            } else {
                g.add_edge(v, u).expect("fresh pair");
            }
        }
    }
    Tournament(g)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Quadratic residue tournament: `i -> j` iff `i - j` is a nonzero square
/// mod `p`. Requires `p` prime with `p = 3 (mod 4)`, which makes `-1` a
/// non-residue and the result a tournament.
pub fn paley_tournament(p: u64) -> Result<Tournament> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::NotThreeModFour(p));
    }
    let n = p as usize;
    let mut residue = vec![false; n];
    for x in 1..n {
        residue[x * x % n] = true;
    }
    let mut g = OrientedGraph::new(n, false);
    for i in 0..n {
        for j in 0..n {
            if i != j && residue[(i + n - j) % n] {
                g.add_edge(i, j).expect("antisymmetric residues");
            }
        }
    }
    Ok(Tournament(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Sampled,
}

/// Two disjoint vertex sets with no edge from `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Counterexample {
    /// Disjoint, of equal size `k`, and no edge from `a` into `b`.
    pub fn verify(&self, g: &OrientedGraph, k: usize) -> bool {
        let mut in_a = vec![false; g.n()];
        for &v in &self.a {
            in_a[v] = true;
        }
        self.a.len() == k
            && self.b.len() == k
            && self.b.iter().all(|&v| !in_a[v])
            && self.a.iter().all(|&u| self.b.iter().all(|&v| !g.has_edge(u, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudorandomnessReport {
    pub mode: CheckMode,
    /// Exact mode: smallest `k` for which the graph is k-pseudorandom.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_star: Option<usize>,
    /// `k_star` exceeds `n/2`, so no two disjoint `k_star`-sets exist.
    #[serde(default)]
    pub vacuous: bool,
    /// The k at which `counterexample` violates the property.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub trials: u64,
}

/// First (lexicographic) k-set `A` whose closed out-neighborhood misses at
/// least `k` vertices; `B` is the first `k` of those. Partial sets whose
/// uncovered part is already below `k` are pruned, since adding members
/// only shrinks it. Each visited partial set counts against `budget`.
pub fn find_violation(g: &OrientedGraph, k: usize, budget: u64) -> Result<Option<Counterexample>> {
    let n = g.n();
    if k == 0 || 2 * k > n {
        return Ok(None);
    }
    let mut search = ViolationSearch {
        g,
        k,
        covered: vec![vec![0u64; g.row_words()]; k + 1],
        members: Vec::with_capacity(k),
        visited: 0,
        budget,
    };
    search.extend(0)
}

struct ViolationSearch<'a> {
    g: &'a OrientedGraph,
    k: usize,
    /// `covered[d]` is `A ∪ N⁺(A)` for the first `d` members.
    covered: Vec<Vec<u64>>,
    members: Vec<usize>,
    visited: u64,
    budget: u64,
}

impl ViolationSearch<'_> {
    fn extend(&mut self, start: usize) -> Result<Option<Counterexample>> {
        let n = self.g.n();
        let depth = self.members.len();
        let uncovered = n - ones(&self.covered[depth]).count();
        if uncovered < self.k {
            return Ok(None);
        }
        if depth == self.k {
            let b: Vec<usize> = (0..n)
                .filter(|&v| !test_bit(&self.covered[depth], v))
                .take(self.k)
                .collect();
            return Ok(Some(Counterexample {
                a: self.members.clone(),
                b,
            }));
        }
        // A further member `v` is useful only if `k` vertices stay uncovered
        // after adding it.
        let need = self.k - depth;
        let candidates: Vec<usize> = (start..n)
            .filter(|&v| {
                let left: u32 = self.covered[depth]
                    .iter()
                    .zip(self.g.out_row(v))
                    .map(|(&c, &r)| (!(c | r)).count_ones())
                    .sum::<u32>()
                    - (self.covered[depth].len() * 64 - n) as u32;
                let left = left as usize - usize::from(!test_bit(&self.covered[depth], v));
                left >= self.k
            })
            .collect();
        if candidates.len() < need {
            return Ok(None);
        }
        for (pos, &next) in candidates.iter().enumerate() {
            if candidates.len() - pos < need {
                break;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::SizeLimit {
                    what: "pseudorandomness search nodes",
                    size: self.visited as u128,
                    limit: self.budget as u128,
                });
            }
            let (done, rest) = self.covered.split_at_mut(depth + 1);
            for ((slot, &p), &r) in rest[0].iter_mut().zip(&done[depth]).zip(self.g.out_row(next)) {
                *slot = p | r;
            }
            set_bit(&mut rest[0], next);
            self.members.push(next);
            let found = self.extend(next + 1)?;
            self.members.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Exact k-pseudorandomness: scan `k = 1, 2, ...` and stop at the first
/// `k` with no violating pair. The property at `k` implies it at every
/// larger `k`, so checking `|A| = |B| = k` suffices. `budget` caps the
/// search nodes of each `k`.
pub fn pseudorandomness_exact(g: &OrientedGraph, budget: u64) -> Result<PseudorandomnessReport> {
    let n = g.n();
    let mut last: Option<(usize, Counterexample)> = None;
    for k in 1..=n / 2 {
        match find_violation(g, k, budget)? {
            Some(cx) => last = Some((k, cx)),
            None => return Ok(exact_report(k, false, last)),
        }
    }
    Ok(exact_report(n / 2 + 1, true, last))
}

fn exact_report(k: usize, vacuous: bool, last: Option<(usize, Counterexample)>) -> PseudorandomnessReport {
    let (counterexample_k, counterexample) = match last {
        Some((k, cx)) => (Some(k), Some(cx)),
        None => (None, None),
    };
    PseudorandomnessReport {
        mode: CheckMode::Exact,
        k_star: Some(k),
        vacuous,
        counterexample_k,
        counterexample,
        trials: 0,
    }
}

/// Monte Carlo refutation: `trials` random disjoint pairs of k-sets, trial
/// `i` drawn from ChaCha8 stream `i` of `seed`. Returns the lowest-index
/// violating pair. Only a returned counterexample is conclusive.
pub fn refute_pseudorandomness(g: &OrientedGraph, k: usize, trials: u64, seed: u64) -> Result<Option<Counterexample>> {
    let n = g.n();
    if k == 0 || 2 * k > n {
        return Err(Error::InvalidInput(format!("k = {k} needs 1 <= k <= n/2 = {}", n / 2)));
    }
    let words = g.row_words();
    Ok((0..trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let picked = rand::seq::index::sample(&mut rng, n, 2 * k).into_vec();
        let (a, b) = picked.split_at(k);
        let mut reach = vec![0u64; words];
        for &u in a {
            for (r, &w) in reach.iter_mut().zip(g.out_row(u)) {
                *r |= w;
            }
        }
        if b.iter().any(|&v| test_bit(&reach, v)) {
            None
        } else {
            let mut a = a.to_vec();
            let mut b = b.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            Some(Counterexample { a, b })
        }
    }))
}

pub fn sampled_report(cx: Option<Counterexample>, k: usize, trials: u64) -> PseudorandomnessReport {
    PseudorandomnessReport {
        mode: CheckMode::Sampled,
        k_star: None,
        vacuous: false,
        counterexample_k: cx.as_ref().map(|_| k),
        counterexample: cx,
        trials,
    }
}

/// Result of the three-set depth-first search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfsPath {
    /// Longest stack seen during the run.
    pub path: DirectedPath,
    /// Stack at the first moment `|S| = |T|`.
    pub snapshot: DirectedPath,
}

/// Depth-first search keeping `S` (finished), `T` (unvisited) and the stack
/// `U`, which is always a directed path; no edge runs from `S` to `T`.
/// Neighbors and restarts are taken in ascending id order. In a
/// k-pseudorandom graph `|S| = |T| <= k - 1` at the snapshot, so the
/// returned path has at least `n - 2k + 1` edges.
pub fn dfs_long_path(g: &OrientedGraph) -> DfsPath {
    let n = g.n();
    let words = g.row_words();
    let mut unvisited = vec![0u64; words];
    for v in 0..n {
        set_bit(&mut unvisited, v);
    }
    let mut t_count = n;
    let mut s_count = 0;
    let mut stack: Vec<usize> = Vec::new();
    let mut best: Vec<usize> = Vec::new();
    let mut snapshot: Option<Vec<usize>> = None;
    let take = |bits: &mut [u64], v: usize| bits[v / 64] &= !(1 << (v % 64));
    while s_count < n {
        match stack.last() {
            None => {
                let v = ones(&unvisited).next().expect("unvisited vertex remains");
                take(&mut unvisited, v);
                t_count -= 1;
                stack.push(v);
            }
            Some(&v) => {
                let next = g
                    .out_row(v)
                    .iter()
                    .zip(&unvisited)
                    .enumerate()
                    .find_map(|(i, (&r, &t))| {
                        let m = r & t;
                        (m != 0).then(|| i * 64 + m.trailing_zeros() as usize)
                    });
                match next {
                    Some(w) => {
                        take(&mut unvisited, w);
                        t_count -= 1;
                        stack.push(w);
                    }
                    None => {
                        stack.pop();
                        s_count += 1;
                    }
                }
            }
        }
        if stack.len() > best.len() {
            best.clone_from(&stack);
        }
        if snapshot.is_none() && s_count == t_count {
            snapshot = Some(stack.clone());
        }
    }
    DfsPath {
        path: DirectedPath::new(best),
        snapshot: DirectedPath::new(snapshot.unwrap_or_default()),
    }
}

/// `n - 2k + 1`, the length a k-pseudorandom graph guarantees (may be
/// non-positive, then vacuous).
pub fn dfs_bound(n: usize, k: usize) -> i64 {
    n as i64 - 2 * k as i64 + 1
}

/// A path `v_1 v_2 ... v_t` with `v_i` in `sets[i]`. Good sets are computed
/// backwards (`A*_t = A_t`, `A*_j` = members of `A_j` with an edge into
/// `A*_{j+1}`) and the path is read off forwards, smallest ids first. If
/// `g` is k-pseudorandom and every `|A_i| >= 2k`, all good sets keep at
/// least `k` vertices. An empty good set is reported with its 1-based index.
pub fn thread_path_through_sets(g: &OrientedGraph, sets: &[Vec<usize>]) -> Result<DirectedPath> {
    let n = g.n();
    let mut owner = vec![false; n];
    for set in sets {
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if owner[v] {
                return Err(Error::NotDisjoint(v));
            }
            owner[v] = true;
        }
    }
    let t = sets.len();
    if t == 0 {
        return Ok(DirectedPath::empty());
    }
    let words = g.row_words();
    let mut good: Vec<Vec<u64>> = vec![vec![0u64; words]; t];
    for &v in &sets[t - 1] {
        set_bit(&mut good[t - 1], v);
    }
    if sets[t - 1].is_empty() {
        return Err(Error::ThreadFailure { index: t });
    }
    for j in (0..t - 1).rev() {
        let mut any = false;
        for &u in &sets[j] {
            if g.out_row(u).iter().zip(&good[j + 1]).any(|(&r, &gd)| r & gd != 0) {
                set_bit(&mut good[j], u);
                any = true;
            }
        }
        if !any {
            return Err(Error::ThreadFailure { index: j + 1 });
        }
    }
    let mut path = Vec::with_capacity(t);
    let mut current = ones(&good[0]).next().expect("nonempty good set");
    path.push(current);
    for gd in good.iter().skip(1) {
        current = g
            .out_row(current)
            .iter()
            .zip(gd)
            .enumerate()
            .find_map(|(i, (&r, &x))| {
                let m = r & x;
                (m != 0).then(|| i * 64 + m.trailing_zeros() as usize)
            })
            .expect("good vertex has a good successor");
        path.push(current);
    }
    Ok(DirectedPath::new(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_tournament_is_deterministic() {
        assert_eq!(random_tournament(1, 9).graph().edge_count(), 0);
        let a = random_tournament(5, 7);
        let b = random_tournament(5, 7);
        assert_eq!(a, b);
        assert!(a.graph().is_tournament());
        assert_ne!(random_tournament(30, 1), random_tournament(30, 2));
    }

    #[test]
    fn paley_examples() {
        let t3 = paley_tournament(3).unwrap();
        let mut e = t3.graph().edges().to_vec();
        e.sort();
        assert_eq!(e, vec![(0, 2), (1, 0), (2, 1)]);
        let t7 = paley_tournament(7).unwrap();
        assert!((0..7).all(|v| t7.graph().out_degree(v) == 3));
        assert!(matches!(paley_tournament(5), Err(Error::NotThreeModFour(5))));
        assert!(matches!(paley_tournament(15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn exact_examples() {
        let tt = OrientedGraph::transitive_tournament(3);
        let r = pseudorandomness_exact(&tt, 1000).unwrap();
        assert_eq!(r.k_star, Some(2));
        assert!(r.vacuous);
        assert_eq!(r.counterexample, Some(Counterexample { a: vec![1], b: vec![0] }));
        let c3 = OrientedGraph::cycle(3);
        let r = pseudorandomness_exact(&c3, 1000).unwrap();
        assert_eq!(r.k_star, Some(2));
        assert!(r.counterexample.unwrap().verify(&c3, 1));
        // a=0 -> b=1 -> c=2 -> a: the pair ({a}, {c}) has no edge a -> c.
        assert!(Counterexample { a: vec![0], b: vec![2] }.verify(&c3, 1));
    }

    /// Smallest k with no violating pair, by trying every pair of k-sets.
    fn brute_force_k_star(g: &OrientedGraph) -> usize {
        let n = g.n();
        let subsets = |k: usize| -> Vec<u32> { (0u32..1 << n).filter(|s| s.count_ones() as usize == k).collect() };
        for k in 1..=n / 2 {
            let sets = subsets(k);
            let violated = sets.iter().any(|&a| {
                sets.iter().any(|&b| {
                    a & b == 0
                        && (0..n).all(|u| a >> u & 1 == 0 || (0..n).all(|v| b >> v & 1 == 0 || !g.has_edge(u, v)))
                })
            });
            if !violated {
                return k;
            }
        }
        n / 2 + 1
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for seed in 0..60u64 {
            let n = 2 + (seed as usize % 9);
            let g = random_tournament(n, seed).into_graph();
            let r = pseudorandomness_exact(&g, u64::MAX).unwrap();
            assert_eq!(r.k_star, Some(brute_force_k_star(&g)), "seed {seed}");
            if let (Some(k), Some(cx)) = (r.counterexample_k, r.counterexample) {
                assert!(cx.verify(&g, k));
            }
        }
    }

    #[test]
    fn exact_respects_budget() {
        let g = random_tournament(40, 1);
        assert!(matches!(
            pseudorandomness_exact(g.graph(), 10),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn refuter_finds_planted_violation() {
        // V1 = {0..k}, V2 = {k..2k}; every edge runs V2 -> V1.
        let k = 4;
        let mut g = OrientedGraph::new(2 * k, false);
        for u in k..2 * k {
            for v in 0..k {
                g.add_edge(u, v).unwrap();
            }
        }
        let cx = refute_pseudorandomness(&g, k, 2000, 3)
            .unwrap()
            .expect("violation found");
        assert!(cx.verify(&g, k));
        assert!(refute_pseudorandomness(&g, k + 1, 1, 0).is_err());
    }

    #[test]
    fn refuter_never_refutes_complete_symmetric() {
        let g = OrientedGraph::complete_symmetric(10);
        for k in 1..=5 {
            assert!(refute_pseudorandomness(&g, k, 500, k as u64).unwrap().is_none());
        }
    }

    #[test]
    fn dfs_examples() {
        let tt = OrientedGraph::transitive_tournament(9);
        assert_eq!(dfs_long_path(&tt).path.len(), 8);
        let ks = OrientedGraph::complete_symmetric(7);
        let out = dfs_long_path(&ks);
        assert!(out.path.len() >= 6);
        out.path.validate(&ks).unwrap();
        out.snapshot.validate(&ks).unwrap();
    }

    #[test]
    fn thread_examples() {
        let g = OrientedGraph::complete_symmetric(10);
        assert_eq!(thread_path_through_sets(&g, &[vec![3, 4]]).unwrap().len(), 0);
        let sets: Vec<Vec<usize>> = (0..5).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let p = thread_path_through_sets(&g, &sets).unwrap();
        assert_eq!(p.len(), 4);
        p.validate(&g).unwrap();
        for (i, &v) in p.vertices().iter().enumerate() {
            assert!(sets[i].contains(&v));
        }
        let empty = OrientedGraph::new(4, false);
        assert!(matches!(
            thread_path_through_sets(&empty, &[vec![0, 1], vec![2, 3]]),
            Err(Error::ThreadFailure { index: 1 })
        ));
        assert!(matches!(
            thread_path_through_sets(&g, &[vec![0, 1], vec![1, 2]]),
            Err(Error::NotDisjoint(1))
        ));
    }
}
