//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dipath_core::adversary::{acyclic_edge_coloring, block_product_coloring, symmetric_adversary, theorem1_adversary};
use dipath_core::classic::{gallai_roy, longest_path_exact, raynaud, GallaiRoy};
use dipath_core::harness::{run_experiment, ExperimentManifest};
use dipath_core::oracle::{arrowing_check, max_mono_path, min_max_mono_path};
use dipath_core::pseudorandom::{dfs_long_path, pseudorandomness_exact, random_tournament, refute_pseudorandomness};
use dipath_core::{two_color_path_finder, Branch, ConstantsConfig, EdgeColoring, OrientedGraph, RED};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_digraph(r: &mut ChaCha8Rng, n: usize, p: f64, antiparallel: bool) -> OrientedGraph {
    let mut g = OrientedGraph::new(n, antiparallel);
    for u in 0..n {
        for v in 0..n {
            if u == v || (!antiparallel && g.adjacent(u, v)) {
                continue;
            }
            if r.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn random_oriented_with_edges(r: &mut ChaCha8Rng, n: usize, m: usize) -> OrientedGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(r);
    let mut g = OrientedGraph::new(n, false);
    for &(u, v) in pairs.iter().take(m) {
        if r.gen() {
            g.add_edge(u, v).unwrap();
        } else {
            g.add_edge(v, u).unwrap();
        }
    }
    g
}

fn random_coloring(r: &mut ChaCha8Rng, g: &OrientedGraph, colors: u8) -> EdgeColoring {
    let c = (0..g.edge_count()).map(|_| r.gen_range(1..=colors)).collect();
    EdgeColoring::from_colors(g, colors, c).unwrap()
}

/// `ceil(x^{1/q})` by integer search.
fn int_root_ceil(x: usize, q: usize) -> usize {
    let mut s = 1usize;
    while s.pow(q as u32) < x {
        s += 1;
    }
    s
}

/// `k* = 1 + max_A min(|A|, |V \ (A ∪ N+(A))|)`: a violating pair at `k`
/// exists iff some `A` has both quantities at least `k`.
fn brute_force_k_star(g: &OrientedGraph) -> usize {
    let n = g.n();
    let out: Vec<u32> = (0..n)
        .map(|v| g.out_neighbors(v).fold(0u32, |m, w| m | 1 << w))
        .collect();
    let full = (1u32 << n) - 1;
    let mut best = 0;
    for a in 1..=full {
        let mut reach = a;
        for (v, &o) in out.iter().enumerate() {
            if a >> v & 1 == 1 {
                reach |= o;
            }
        }
        let free = (full & !reach).count_ones() as usize;
        best = best.max((a.count_ones() as usize).min(free));
    }
    best + 1
}

fn raynaud_exhaustive() -> Outcome {
    let mut o = Outcome::new();
    let mut total = 0usize;
    for t in 2..=4usize {
        let g = OrientedGraph::complete_symmetric(t);
        let m = g.edge_count();
        for mask in 0u32..1 << m {
            let colors = (0..m).map(|i| 1 + (mask >> i & 1) as u8).collect();
            let c = EdgeColoring::from_colors(&g, 2, colors).unwrap();
            total += 1;
            match raynaud(&g, &c) {
                Ok(dec) => {
                    let (p, color) = dec.monochromatic_path();
                    o.check(
                        dec.validate(&g, &c).is_ok()
                            && p.validate_monochromatic(&g, &c, color).is_ok()
                            && p.len() >= t / 2,
                        || format!("t={t} mask={mask:#x}"),
                    );
                }
                Err(e) => o.failures.push(format!("t={t} mask={mask:#x}: {e}")),
            }
        }
    }
    o.detail = format!("{total} colorings");
    o
}

fn gallai_roy_dichotomy() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(2);
    let (mut colorings, mut paths) = (0, 0);
    for i in 0..500 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.05..0.6);
        let g = random_digraph(&mut r, n, p, true);
        let longest = longest_path_exact(&g, 12).unwrap().len();
        let threshold = r.gen_range(1..=n);
        match gallai_roy(&g, threshold) {
            GallaiRoy::Coloring(vc) => {
                colorings += 1;
                let used = vc.classes().iter().filter(|c| !c.is_empty()).count();
                o.check(
                    vc.is_proper_for(&g) && used <= longest + 1 && used <= threshold.max(1),
                    || format!("instance {i}: {used} colors, longest {longest}"),
                );
            }
            GallaiRoy::Path(path) => {
                paths += 1;
                o.check(path.validate(&g).is_ok() && path.len() >= threshold, || {
                    format!("instance {i}: bad path {:?}", path.vertices())
                });
            }
        }
    }
    o.detail = format!("{colorings} coloring / {paths} path branches");
    o
}

fn digit_bounds() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(3);
    for i in 0..500 {
        let q = 1 + i % 3;
        let n = r.gen_range(2..=14);
        if i % 2 == 0 {
            // Random DAG: edges follow a hidden permutation.
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut r);
            let p = r.gen_range(0.1..0.7);
            let mut z = OrientedGraph::new(n, false);
            for a in 0..n {
                for b in a + 1..n {
                    if r.gen_bool(p) {
                        z.add_edge(order[a], order[b]).unwrap();
                    }
                }
            }
            let t = longest_path_exact(&z, 16).unwrap().len();
            let col = acyclic_edge_coloring(&z, q).unwrap();
            let (measured, _, _) = max_mono_path(&z, &col.coloring, 16).unwrap();
            let bound = int_root_ceil(t + 1, q);
            o.check(col.coloring.is_total() && measured <= bound, || {
                format!("acyclic instance {i}: q={q} t={t} measured {measured} > {bound}")
            });
        } else {
            let p = r.gen_range(0.1..0.5);
            let g = random_digraph(&mut r, n, p, false);
            let k = r.gen_range(1..=n);
            let mut block_of: Vec<usize> = (0..n).map(|v| v % k).collect();
            block_of.shuffle(&mut r);
            let blocks: Vec<Vec<usize>> = (0..k).map(|b| (0..n).filter(|&v| block_of[v] == b).collect()).collect();
            let mut inner = EdgeColoring::uncolored(&g, q as u8 + 1);
            for (id, &(u, v)) in g.edges().iter().enumerate() {
                if block_of[u] == block_of[v] {
                    inner.set(id, r.gen_range(1..=q as u8 + 1));
                }
            }
            let inside = g.edge_subgraph(|id| inner.get(id).is_some());
            let inside_colors = g
                .edges()
                .iter()
                .enumerate()
                .filter_map(|(id, _)| inner.get(id))
                .collect();
            let inside_col = EdgeColoring::from_colors(&inside, q as u8 + 1, inside_colors).unwrap();
            let (rr, _, _) = max_mono_path(&inside, &inside_col, 16).unwrap();
            let out = block_product_coloring(&g, &blocks, &inner, rr, q).unwrap();
            let (measured, _, _) = max_mono_path(&g, &out.coloring, 16).unwrap();
            let bound = q * (rr + 1) * int_root_ceil(k, q);
            o.check(out.coloring.is_total() && measured <= bound, || {
                format!("product instance {i}: q={q} k={k} r={rr} measured {measured} > {bound}")
            });
        }
    }
    o.detail = "250 acyclic + 250 product instances".into();
    o
}

fn pseudorandom_statistics() -> Outcome {
    let mut o = Outcome::new();
    let mut parts = Vec::new();
    for n in [32usize, 64] {
        let k = (2.0 * (n as f64).log2()).ceil() as usize;
        let mut clean = 0;
        for seed in 0..20u64 {
            let t = random_tournament(n, 1000 + seed).into_graph();
            match refute_pseudorandomness(&t, k, 100_000, seed).unwrap() {
                None => clean += 1,
                Some(cx) => {
                    let edge = cx.a.iter().any(|&a| cx.b.iter().any(|&b| t.has_edge(a, b)));
                    o.check(!edge && cx.a.len() >= k && cx.b.len() >= k, || {
                        format!("n={n} seed={seed}: invalid counterexample")
                    });
                }
            }
        }
        o.check(clean >= 19, || format!("n={n}: only {clean}/20 unrefuted"));
        parts.push(format!("n={n} k={k}: {clean}/20"));
    }
    o.detail = parts.join(", ");
    o
}

fn dfs_path_bound() -> Outcome {
    let mut o = Outcome::new();
    let mut r = rng(5);
    for i in 0..200u64 {
        let n = r.gen_range(2..=14);
        let t = random_tournament(n, 5000 + i).into_graph();
        let k = pseudorandomness_exact(&t, u64::MAX).unwrap().k_star.unwrap();
        let oracle = brute_force_k_star(&t);
        let path = dfs_long_path(&t).path;
        o.check(k == oracle, || format!("sample {i}: k* {k} vs oracle {oracle}"));
        o.check(
            path.validate(&t).is_ok() && path.len() as i64 > n as i64 - 2 * k as i64,
            || format!("sample {i}: n={n} k*={k} path {}", path.len()),
        );
    }
    o.detail = "200 tournaments, k* cross-checked".into();
    o
}

fn adversary_near_optimal() -> Outcome {
    let mut o = Outcome::new();
    let cfg = ConstantsConfig::relaxed(2.0, 1.0);
    let mut graphs = Vec::new();
    for n in 1..=4usize {
        let pairs = n * (n - 1) / 2;
        for index in 0..3usize.pow(pairs as u32) {
            graphs.push(dipath_core::harness::oriented_graph_from_index(n, index));
        }
    }
    let exhaustive = graphs.len();
    let mut r = rng(6);
    for _ in 0..200 {
        let n = r.gen_range(4..=9);
        let m = r.gen_range(0..=14usize.min(n * (n - 1) / 2));
        graphs.push(random_oriented_with_edges(&mut r, n, m));
    }
    let mut tight = 0;
    for (i, g) in graphs.iter().enumerate() {
        let out = match theorem1_adversary(g, 1, &cfg) {
            Ok(out) => out,
            Err(e) => {
                o.failures.push(format!("graph {i}: {e}"));
                continue;
            }
        };
        let c = &out.coloring;
        let valid = c.validate(g).is_ok()
            && c.is_total()
            && c.colors().iter().all(|&x| x <= 2)
            && out.trace.validate(g).is_ok();
        let (measured, _, _) = max_mono_path(g, c, 16).unwrap();
        let optimum = min_max_mono_path(g, 2, 1 << 20).unwrap().value;
        tight += usize::from(measured == optimum);
        o.check(
            valid && measured <= out.trace.bounds.total && measured >= optimum,
            || {
                format!(
                    "graph {i}: measured {measured}, bound {}, optimum {optimum}",
                    out.trace.bounds.total
                )
            },
        );
    }
    o.detail = format!("{exhaustive} exhaustive + 200 random, {tight} optimal");
    o
}

fn builder_soundness() -> Outcome {
    let mut o = Outcome::new();
    let mut parts = Vec::new();
    for (n, seed) in [(64usize, 64u64), (128, 128)] {
        let t = random_tournament(n, seed).into_graph();
        let k = pseudorandomness_exact(&t, u64::MAX).unwrap().k_star.unwrap();
        let cfg = ConstantsConfig {
            relax: true,
            block_factor: 7.0 - 6.0 / k as f64,
            ..ConstantsConfig::default()
        };
        let mut r = rng(7 + seed);
        let mut branches = std::collections::BTreeMap::<String, usize>::new();
        for i in 0..50 {
            let c = random_coloring(&mut r, &t, 2);
            let cert = two_color_path_finder(&t, &c, k, &cfg).unwrap();
            *branches.entry(format!("{:?}", cert.branch)).or_default() += 1;
            let chain = cert.trace.chain.clone().unwrap();
            let len = cert.path.len() as f64;
            // A missing ratio means the matching bound is 0 (infinite constant).
            let meets = match (cert.branch, cert.color) {
                (Branch::RedCase | Branch::MonochromaticShortcut, RED) => {
                    len >= chain.c_r.map_or(0.0, |c_r| n as f64 / (c_r * k as f64)) - 1e-9
                }
                (Branch::BlueCase | Branch::MonochromaticShortcut, _) => {
                    len >= chain.c_b.map_or(0.0, |c_b| n as f64 / c_b) - 1e-9
                }
                _ => false,
            };
            o.check(
                chain.closes && cert.guarantee_active && cert.validate(&t, &c).is_ok() && meets,
                || {
                    format!(
                        "n={n} coloring {i}: {:?} len {len} violations {:?}",
                        cert.branch, cert.trace.floor_violations
                    )
                },
            );
        }
        parts.push(format!("n={n} k*={k} {branches:?}"));
    }
    o.detail = parts.join("; ");
    o
}

fn small_scale_duality() -> Outcome {
    let mut o = Outcome::new();
    let k4 = OrientedGraph::complete_symmetric(4);
    let arrow = arrowing_check(&k4, 2, 2, 1 << 20).unwrap();
    o.check(arrow.arrows, || format!("K*_4 min-max {:?}", arrow.min_max));

    // Every digraph on at most 5 vertices with m <= 6 edges: whenever
    // m < (n/3)^2 the 2-coloring has no monochromatic path of length n.
    let mut checked = 0usize;
    let mut literal_counterexamples = 0usize;
    for v in 1..=5usize {
        let arcs: Vec<(usize, usize)> = (0..v)
            .flat_map(|a| (0..v).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let mut chosen = Vec::new();
        enumerate_subsets(&arcs, 0, 6, &mut chosen, &mut |edges| {
            let g = OrientedGraph::from_edges(v, true, edges.iter().copied()).unwrap();
            let m = edges.len();
            let sym = symmetric_adversary(&g, 1).unwrap();
            let c = &sym.coloring;
            let (measured, _, _) = max_mono_path(&g, c, 16).unwrap();
            let n_thr = (1..).find(|&n: &usize| 9 * m < n * n).unwrap();
            checked += 1;
            o.check(
                c.is_total() && c.colors().iter().all(|&x| x <= 2) && measured < n_thr && measured < sym.bound.max(1),
                || format!("v={v} edges {edges:?}: measured {measured}, threshold {n_thr}"),
            );
            if m < 4 && measured >= 2 {
                literal_counterexamples += 1;
            }
        });
    }
    o.detail = format!(
        "K*_4 arrows; {checked} digraphs; {literal_counterexamples} with m<4 still carry a length-2 path (e.g. the directed triangle)"
    );
    o
}

fn enumerate_subsets(
    arcs: &[(usize, usize)],
    from: usize,
    left: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    visit(chosen);
    if left == 0 {
        return;
    }
    for i in from..arcs.len() {
        chosen.push(arcs[i]);
        enumerate_subsets(arcs, i + 1, left - 1, chosen, visit);
        chosen.pop();
    }
}

fn reproducibility() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let manifests = [
        r#"{"id":"pr","generator":{"model":"random"},"sizes":[16,24],"runs":3,
            "module":{"kind":"prcheck","mode":"sampled","trials":2000}}"#,
        r#"{"id":"dfs","generator":{"model":"paley"},"sizes":[7,11,19],"runs":2,"module":{"kind":"dfs"}}"#,
        r#"{"id":"adv","generator":{"model":"all_oriented","max_edges":4},"sizes":[4],
            "module":{"kind":"adversary_vs_oracle","q":1},"config":{"relax":true,"degree_threshold":2.0,"termination_edge_threshold":1.0}}"#,
        r#"{"id":"bld","generator":{"model":"random"},"sizes":[32],"runs":4,"module":{"kind":"builder"}}"#,
        r#"{"id":"ray","generator":{"model":"complete_symmetric"},"sizes":[5,9],"runs":3,"module":{"kind":"raynaud"}}"#,
    ];
    let mut rows = 0;
    for text in manifests {
        let mut m = ExperimentManifest::from_json(text).unwrap();
        m.output.csv = Some(format!("{}.csv", m.id).into());
        let first = run_experiment(&m, Some(dir.path())).unwrap();
        let csv = std::fs::read(dir.path().join(format!("{}.csv", m.id))).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let second = pool.install(|| run_experiment(&m, Some(dir.path()))).unwrap();
        let again = std::fs::read(dir.path().join(format!("{}.csv", m.id))).unwrap();
        rows += first.runs;
        o.check(csv == again, || format!("{}: CSV differs between runs", m.id));
        o.check(first.success() && second.success(), || {
            format!("{}: run failures", m.id)
        });
    }
    o.detail = format!("{} manifests, {rows} rows", manifests.len());
    o
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("raynaud-exhaustive", raynaud_exhaustive, 10),
        ("gallai-roy-dichotomy", gallai_roy_dichotomy, 30),
        ("digit-coloring-bounds", digit_bounds, 60),
        ("pseudorandom-statistics", pseudorandom_statistics, 120),
        ("dfs-path-bound", dfs_path_bound, 120),
        ("adversary-near-optimal", adversary_near_optimal, 300),
        ("builder-soundness", builder_soundness, 300),
        ("small-scale-duality", small_scale_duality, 60),
        ("reproducibility", reproducibility, 600),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(*limit) {
            o.failures.push(format!("took {elapsed:.1?}, limit {limit}s"));
        }
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("[{verdict}] {} {name} ({:.2?}): {}", i + 1, elapsed, o.detail);
        for f in o.failures.iter().take(5) {
            println!("       {f}");
        }
        if !o.failures.is_empty() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
