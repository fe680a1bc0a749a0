use dipath_core::adversary::{
    block_product_coloring, minimal_base, sparse_acyclic_set, symmetric_adversary, DigitEncoding,
};
use dipath_core::classic::{level_decomposition, longest_path_dag, longest_path_exact};
use dipath_core::io::{parse_coloring, parse_graph, write_coloring, write_graph};
use dipath_core::oracle::{longest_mono_path, max_mono_path, min_max_mono_path};
use dipath_core::pseudorandom::{
    find_violation, paley_tournament, pseudorandomness_exact, random_tournament, refute_pseudorandomness,
    thread_path_through_sets,
};
use dipath_core::{symmetric_multicolor_finder, two_color_path_finder, ConstantsConfig, EdgeColoring, OrientedGraph};
use proptest::prelude::*;

fn digraph(max_n: usize, antiparallel: bool) -> impl Strategy<Value = OrientedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(any::<u8>(), n * n).prop_map(move |bits| {
            let mut g = OrientedGraph::new(n, antiparallel);
            for u in 0..n {
                for v in 0..n {
                    if u != v && bits[u * n + v] % 3 == 0 && (antiparallel || !g.adjacent(u, v)) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn colored(max_n: usize, antiparallel: bool, colors: u8) -> impl Strategy<Value = (OrientedGraph, EdgeColoring)> {
    digraph(max_n, antiparallel).prop_flat_map(move |g| {
        let m = g.edge_count();
        proptest::collection::vec(1..=colors, m).prop_map(move |c| {
            let col = EdgeColoring::from_colors(&g, colors, c).unwrap();
            (g.clone(), col)
        })
    })
}

fn dag(max_n: usize) -> impl Strategy<Value = OrientedGraph> {
    digraph(max_n, false).prop_map(|g| g.edge_subgraph(|id| g.edges()[id].0 < g.edges()[id].1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn graph_and_coloring_text_roundtrip((g, c) in colored(12, true, 4)) {
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.allow_antiparallel(), g.allow_antiparallel());
        prop_assert_eq!(write_graph(&back), text);
        let ctext = write_coloring(&g, &c);
        let cback = parse_coloring(&ctext, &back, 4).unwrap();
        prop_assert_eq!(cback.colors(), c.colors());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn block_product_digits_move_monotonically(
        g in digraph(12, false),
        q in 1usize..=3,
        k_seed in any::<u64>(),
    ) {
        let n = g.n();
        let k = 1 + (k_seed as usize) % n;
        let blocks: Vec<Vec<usize>> = (0..k).map(|b| (0..n).filter(|v| v % k == b).collect()).collect();
        let mut inner = EdgeColoring::uncolored(&g, q as u8 + 1);
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            if u % k == v % k {
                inner.set(id, 1 + ((u + v) % (q + 1)) as u8);
            }
        }
        let out = block_product_coloring(&g, &blocks, &inner, 0, q).unwrap();
        let s = minimal_base(k, q);
        prop_assert_eq!(out.base, s);
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            let (bu, bv) = (u % k, v % k);
            if bu == bv {
                prop_assert_eq!(out.coloring.get(id), inner.get(id));
                continue;
            }
            let (du, dv) = (DigitEncoding::new(bu, s, q).unwrap(), DigitEncoding::new(bv, s, q).unwrap());
            let y = out.coloring.get(id).unwrap() as usize;
            if y <= q {
                prop_assert!(du.digit(y) < dv.digit(y));
                prop_assert!((1..y).all(|z| du.digit(z) >= dv.digit(z)));
            } else {
                prop_assert!((1..=q).all(|z| du.digit(z) >= dv.digit(z)));
                prop_assert!(du.digit_sum() > dv.digit_sum());
            }
        }
    }

    #[test]
    fn mono_path_is_invariant_under_color_permutation((g, c) in colored(9, true, 3), perm in 0usize..6) {
        let perms = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        let p = perms[perm];
        let permuted: Vec<u8> = c.colors().iter().map(|&x| p[x as usize - 1]).collect();
        let pc = EdgeColoring::from_colors(&g, 3, permuted).unwrap();
        let a = longest_mono_path(&g, &c, 16).unwrap();
        let b = longest_mono_path(&g, &pc, 16).unwrap();
        for color in 1..=3usize {
            prop_assert_eq!(a[color - 1].value, b[p[color - 1] as usize - 1].value);
        }
        prop_assert_eq!(max_mono_path(&g, &c, 16).unwrap().0, max_mono_path(&g, &pc, 16).unwrap().0);
    }

    #[test]
    fn min_max_is_monotone(g in digraph(6, false), extra in any::<(u8, u8)>()) {
        prop_assume!(g.edge_count() <= 10);
        let budget = 1 << 22;
        let v1 = min_max_mono_path(&g, 1, budget).unwrap().value;
        let v2 = min_max_mono_path(&g, 2, budget).unwrap().value;
        let v3 = min_max_mono_path(&g, 3, budget).unwrap().value;
        prop_assert!(v1 >= v2 && v2 >= v3);
        let n = g.n();
        let (u, v) = (extra.0 as usize % n, extra.1 as usize % n);
        if u != v && !g.adjacent(u, v) {
            let mut bigger = g.clone();
            bigger.add_edge(u, v).unwrap();
            prop_assert!(min_max_mono_path(&bigger, 2, budget).unwrap().value >= v2);
        }
    }

    #[test]
    fn exact_longest_path_agrees_on_dags(z in dag(12)) {
        let dp = longest_path_dag(&z).unwrap();
        let exact = longest_path_exact(&z, 12).unwrap();
        prop_assert!(dp.validate(&z).is_ok());
        prop_assert_eq!(dp.len(), exact.len());
        let levels = level_decomposition(&z).unwrap();
        let mut level = vec![0; z.n()];
        for (i, l) in levels.iter().enumerate() {
            prop_assert!(z.is_acyclic_set(l));
            for &v in l {
                level[v] = i;
            }
            for &a in l {
                for &b in l {
                    prop_assert!(!z.adjacent(a, b));
                }
            }
        }
        for &(u, v) in z.edges() {
            prop_assert!(level[u] < level[v]);
        }
    }

    #[test]
    fn k_star_is_the_threshold(n in 2usize..=14, seed in any::<u64>()) {
        let t = random_tournament(n, seed).into_graph();
        let r = pseudorandomness_exact(&t, u64::MAX).unwrap();
        let k = r.k_star.unwrap();
        // No oriented graph is k-pseudorandom for k <= log2(n) / 2.
        prop_assert!(k as f64 > (n as f64).log2() / 2.0);
        for kk in k..=n / 2 {
            prop_assert!(refute_pseudorandomness(&t, kk, 300, seed).unwrap().is_none());
        }
        if k > 1 {
            let cx = find_violation(&t, k - 1, u64::MAX).unwrap().unwrap();
            prop_assert!(cx.verify(&t, k - 1));
        }
    }

    #[test]
    fn threading_visits_sets_in_order(n in 6usize..=20, seed in any::<u64>(), parts in 2usize..=4) {
        let t = random_tournament(n, seed).into_graph();
        let mut vs: Vec<usize> = (0..n).collect();
        vs.rotate_left(seed as usize % n);
        let sets: Vec<Vec<usize>> = vs.chunks(n.div_ceil(parts)).map(<[usize]>::to_vec).collect();
        if let Ok(p) = thread_path_through_sets(&t, &sets) {
            prop_assert!(p.validate(&t).is_ok());
            prop_assert_eq!(p.vertices().len(), sets.len());
            for (v, set) in p.vertices().iter().zip(&sets) {
                prop_assert!(set.contains(v));
            }
        }
    }

    #[test]
    fn sparse_acyclic_sets_are_acyclic(g in digraph(24, false)) {
        let cfg = ConstantsConfig::default();
        let out = sparse_acyclic_set(&g, &cfg);
        prop_assert!(g.is_acyclic_set(&out.set));
        if out.epsilon < 0.25 && g.n() >= 2 {
            prop_assert!(out.set.len() >= (g.n() as f64).log2().floor() as usize);
        }
    }

    #[test]
    fn monochromatic_recoloring_never_shortens(
        n in 2usize..=16,
        seed in any::<u64>(),
        bits in proptest::collection::vec(1u8..=2, 120),
    ) {
        let g = random_tournament(n, seed).into_graph();
        let c = EdgeColoring::from_colors(&g, 2, bits[..g.edge_count()].to_vec()).unwrap();
        let cfg = ConstantsConfig::default();
        let k = pseudorandomness_exact(&g, u64::MAX).unwrap().k_star.unwrap();
        let before = two_color_path_finder(&g, &c, k, &cfg).unwrap();
        before.validate(&g, &c).unwrap();
        for color in 1..=2 {
            let mono = EdgeColoring::monochromatic(&g, 2, color);
            let after = two_color_path_finder(&g, &mono, k, &cfg).unwrap();
            prop_assert!(after.path.len() >= before.path.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_tournaments_have_one_edge_per_pair(n in 1usize..40, seed in any::<u64>()) {
        let t = random_tournament(n, seed).into_graph();
        for u in 0..n {
            for v in u + 1..n {
                prop_assert!(t.has_edge(u, v) ^ t.has_edge(v, u));
            }
        }
    }
}

#[test]
fn paley_tournaments_are_regular() {
    for p in [3u64, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
        let t = paley_tournament(p).unwrap().into_graph();
        let n = p as usize;
        for v in 0..n {
            assert_eq!(t.out_degree(v), (n - 1) / 2);
            for w in v + 1..n {
                assert!(t.has_edge(v, w) ^ t.has_edge(w, v));
            }
        }
    }
}

#[test]
fn symmetric_side_agrees_with_oracle_exhaustively() {
    let cfg = ConstantsConfig::default();
    for t in 2..=4usize {
        let g = OrientedGraph::complete_symmetric(t);
        let m = g.edge_count();
        for mask in 0u32..1 << m {
            let colors = (0..m).map(|i| 1 + (mask >> i & 1) as u8).collect();
            let c = EdgeColoring::from_colors(&g, 2, colors).unwrap();
            let cert = symmetric_multicolor_finder(t, &c, t / 2, &cfg).unwrap();
            cert.validate(&g, &c).unwrap();
            assert!(cert.path.len() >= t / 2, "t={t} mask={mask:#x}");
        }
        let optimum = min_max_mono_path(&g, 2, 1 << 20).unwrap().value;
        let sym = symmetric_adversary(&g, 1).unwrap();
        assert!(max_mono_path(&g, &sym.coloring, 16).unwrap().0 >= optimum);
    }
}

#[test]
fn desk_instance_of_the_lower_bound() {
    use rand::{Rng, SeedableRng};
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(44);
    for n in [4usize, 6, 8] {
        for _ in 0..200 {
            let v = r.gen_range(2..=12);
            let m_max = (n * n).div_ceil(9) - 1;
            let mut g = OrientedGraph::new(v, true);
            for _ in 0..r.gen_range(0..=m_max) {
                let (a, b) = (r.gen_range(0..v), r.gen_range(0..v));
                if a != b && !g.has_edge(a, b) {
                    g.add_edge(a, b).unwrap();
                }
            }
            assert!(9 * g.edge_count() < n * n);
            let sym = symmetric_adversary(&g, 1).unwrap();
            let (len, _, _) = max_mono_path(&g, &sym.coloring, 16).unwrap();
            assert!(len < n, "n={n} m={} len={len}", g.edge_count());
        }
    }
}
