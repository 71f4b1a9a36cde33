use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use stripmix::kernel::{build_kernel_graph, is_valid_steps, KernelGraph, MonotonePath, Move, Step};
use stripmix::linalg::det_poly_bareiss;
use stripmix::markov::{
    boundary_flow, build_chain, conductance_exact, conductance_upper_bound, lambda_max_dense,
    lambda_max_iterative, spectrum, stationary, tv_evolution, tv_evolution_exact, ChainSpec,
};
use stripmix::pip::{bottleneck_partition, build_pip, ideal_graph};
use stripmix::poly::IntPolynomial;
use stripmix::transfer::{build_transfer_graph, charpoly};

fn kernel_and_vertex() -> impl Strategy<Value = (u32, usize, usize)> {
    (1u32..=3, 2usize..=7, any::<prop::sample::Index>()).prop_map(|(m, n, ix)| {
        let k = build_kernel_graph(m, n);
        (m, n, ix.index(k.len()))
    })
}

/// Every single-step edit that could be a move, filtered by validity.
/// Applies moves with disjoint supports directly to the step word.
fn raw_edit(steps: &[Step], moves: &[Move]) -> Vec<Step> {
    let mut t = steps.to_vec();
    let n = t.len();
    for &mv in moves {
        match mv {
            Move::CornerSwitch(i) => t.swap(i - 1, i),
            Move::EndFlip(c) => t[n - 1] = c,
        }
    }
    t
}

fn brute_force_neighbours(p: &MonotonePath) -> BTreeSet<Vec<Step>> {
    let s = p.steps();
    let n = s.len();
    let mut out = BTreeSet::new();
    for i in 0..n.saturating_sub(1) {
        if s[i] != s[i + 1] {
            let mut t = s.to_vec();
            t.swap(i, i + 1);
            if is_valid_steps(p.m(), &t) {
                out.insert(t);
            }
        }
    }
    if let Some(&last) = s.last() {
        for c in [Step::E, Step::N, Step::S] {
            // 90 degree turns only.
            if c != last && (c == Step::E || last == Step::E) {
                let mut t = s.to_vec();
                t[n - 1] = c;
                if is_valid_steps(p.m(), &t) {
                    out.insert(t);
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn moves_are_reversible((m, n, v) in kernel_and_vertex()) {
        let k = build_kernel_graph(m, n);
        let p = &k.vertices[v];
        for (mv, q) in p.available_moves() {
            let w = k.index_of(&q).unwrap();
            prop_assert!(k.adjacency[w].iter().any(|&(_, u)| u == v));
            if let Move::CornerSwitch(_) = mv {
                let back = q.apply(mv);
                prop_assert_eq!(back.as_ref(), Some(p));
            }
        }
        prop_assert!(k.degree(v) <= n + 1);
    }

    #[test]
    fn moves_match_brute_force((m, n, v) in kernel_and_vertex()) {
        let k = build_kernel_graph(m, n);
        let p = &k.vertices[v];
        let got: BTreeSet<Vec<Step>> =
            p.available_moves().into_iter().map(|(_, q)| q.steps().to_vec()).collect();
        prop_assert_eq!(got, brute_force_neighbours(p));
    }

    #[test]
    fn compatible_moves_span_cubes_unless_they_retrace(v in 0usize..10_000, pick in prop::collection::vec(any::<prop::sample::Index>(), 1..=3)) {
        let k = build_kernel_graph(2, 6);
        let p = &k.vertices[v % k.len()];
        let moves: Vec<Move> = p.available_moves().into_iter().map(|(mv, _)| mv).collect();
        prop_assume!(!moves.is_empty());
        let mut chosen: Vec<Move> = Vec::new();
        for ix in pick {
            let mv = moves[ix.index(moves.len())];
            if chosen.iter().all(|&c| c.compatible(mv, 6) && c != mv) {
                chosen.push(mv);
            }
        }
        let kdim = chosen.len();
        let mut corners = BTreeSet::new();
        let mut feasible = 0;
        for mask in 0u32..(1 << kdim) {
            let subset: Vec<Move> =
                (0..kdim).filter(|i| mask & (1 << i) != 0).map(|i| chosen[i]).collect();
            let raw = raw_edit(p.steps(), &subset);
            let forward = subset.iter().try_fold(p.clone(), |q, &mv| q.apply(mv));
            let backward = subset.iter().rev().try_fold(p.clone(), |q, &mv| q.apply(mv));
            match forward {
                Some(q) => {
                    prop_assert_eq!(Some(&q), backward.as_ref());
                    prop_assert_eq!(q.steps(), &raw[..]);
                    corners.insert(raw);
                    feasible += 1;
                }
                None => {
                    // Disjoint supports only clash through a new N/S retrace.
                    prop_assert!(backward.is_none());
                    prop_assert!(raw.windows(2).any(|w| w[0].is_vertical() && w[1].is_vertical() && w[0] != w[1]));
                }
            }
        }
        prop_assert_eq!(corners.len(), feasible);
        if kdim <= 1 {
            prop_assert_eq!(feasible, 1 << kdim);
        }
    }

    #[test]
    fn exact_and_float_tv_agree(n in 3usize..=5, start in any::<prop::sample::Index>(), lazy in any::<bool>()) {
        let k = build_kernel_graph(2, n);
        let spec = if lazy {
            ChainSpec::lazy(BigRational::new(1.into(), 3.into())).unwrap()
        } else {
            ChainSpec::Symmetric
        };
        let p = build_chain(&k, &spec).unwrap();
        let pi = stationary(&p).unwrap();
        let s = start.index(k.len());
        let fl = tv_evolution(&p, &pi, s, 15);
        let ex = tv_evolution_exact(&p, &pi, s, 15);
        prop_assert_eq!(fl.len(), ex.len());
        for (a, b) in fl.iter().zip(&ex) {
            let b = b.numer().to_string().parse::<f64>().unwrap() / b.denom().to_string().parse::<f64>().unwrap();
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

fn primitivity_exponent(m: u32) -> usize {
    let a: Vec<Vec<u64>> = build_transfer_graph(m)
        .adjacency()
        .into_iter()
        .map(|r| r.into_iter().map(u64::from).collect())
        .collect();
    let n = a.len();
    let mut pow = a.clone();
    let mut k = 1;
    while pow.iter().flatten().any(|&x| x == 0) {
        let mut next = vec![vec![0u64; n]; n];
        for i in 0..n {
            for l in 0..n {
                if pow[i][l] != 0 {
                    for j in 0..n {
                        next[i][j] += pow[i][l] * a[l][j];
                    }
                }
            }
        }
        pow = next;
        k += 1;
        assert!(k <= n * n, "not primitive");
    }
    k
}

#[test]
fn transfer_matrix_is_primitive() {
    for m in 1..=5u32 {
        let k = primitivity_exponent(m);
        assert_eq!(k, m as usize + 3, "m={m}");
        // The 2m+1 witness holds from m = 2 on; for m = 1 the walk
        // (0,1) -> (1,1) -> (1,0) -> (0,0) -> (0,1) needs four steps.
        assert_eq!(k <= 2 * m as usize + 1, m >= 2);
    }
}

#[test]
fn compatible_switches_can_retrace() {
    let p = MonotonePath::parse(2, "NEES").unwrap();
    let (s1, s3) = (Move::CornerSwitch(1), Move::CornerSwitch(3));
    assert!(s1.compatible(s3, 4));
    assert_eq!(
        p.apply(s1).unwrap().steps(),
        &[Step::E, Step::N, Step::E, Step::S]
    );
    assert_eq!(
        p.apply(s3).unwrap().steps(),
        &[Step::N, Step::E, Step::S, Step::E]
    );
    assert!(p.apply(s1).unwrap().apply(s3).is_none());
    assert!(!is_valid_steps(2, &raw_edit(p.steps(), &[s1, s3])));
}

#[test]
fn charpoly_matches_determinant() {
    for m in 0..=4u32 {
        let a = build_transfer_graph(m).adjacency();
        let n = a.len();
        let mat: Vec<Vec<IntPolynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = IntPolynomial::constant(BigInt::from(a[i][j]));
                        if i == j {
                            &c - &IntPolynomial::x()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(det_poly_bareiss(mat), charpoly(m), "m={m}");
    }
}

#[test]
fn ideal_graph_is_graded_and_connected() {
    for (m, n) in [(1, 5), (2, 5), (2, 7), (3, 6)] {
        let pip = build_pip(m, n).unwrap();
        let ig = ideal_graph(&pip.pip);
        assert!(ig.graph.is_connected());
        for (u, v) in ig.graph.edges() {
            let (a, b) = (&ig.ideals[u], &ig.ideals[v]);
            assert_eq!(a.count_ones(..).abs_diff(b.count_ones(..)), 1);
            assert_eq!(a.symmetric_difference(b).count(), 1);
        }
        for ideal in &ig.ideals {
            assert!(pip.pip.is_consistent_ideal(ideal));
        }
    }
}

#[test]
fn smaller_layers_embed_by_label_shift() {
    let big = build_pip(2, 9).unwrap();
    for k in 3..9 {
        let small = build_pip(2, k).unwrap();
        let shift = 9 - k;
        let image: Vec<usize> = small
            .elements
            .iter()
            .map(|e| {
                let steps = small.snakes[e.snake].steps();
                big.element_index(steps, e.label + shift)
                    .expect("image exists")
            })
            .collect();
        for x in 0..small.len() {
            for y in 0..small.len() {
                assert_eq!(small.pip.lt(x, y), big.pip.lt(image[x], image[y]));
                assert_eq!(
                    small.pip.is_inconsistent(x, y),
                    big.pip.is_inconsistent(image[x], image[y])
                );
            }
        }
    }
}

#[test]
fn every_inconsistent_pair_is_a_bottleneck() {
    let pip = build_pip(2, 6).unwrap();
    let ig = ideal_graph(&pip.pip);
    for &(a, b) in pip.pip.minimal_pairs() {
        let part = bottleneck_partition(&ig.ideals, a, b);
        assert_eq!(
            part.sep.len() + part.side_a.len() + part.side_b.len(),
            ig.len()
        );
        assert!(!part.sep.is_empty());
        let in_a: BTreeSet<usize> = part.side_a.iter().copied().collect();
        for &v in &part.side_b {
            assert!(ig.graph.neighbors(v).iter().all(|u| !in_a.contains(u)));
        }
    }
}

fn chain(
    k: &KernelGraph,
    spec: ChainSpec,
) -> (
    stripmix::markov::StochasticMatrix,
    stripmix::markov::Distribution,
) {
    let p = build_chain(k, &spec).unwrap();
    let pi = stationary(&p).unwrap();
    (p, pi)
}

#[test]
fn non_lazy_walk_is_periodic() {
    let k = build_kernel_graph(2, 5);
    let (p, pi) = chain(&k, ChainSpec::NonLazyWalk);
    let ev = spectrum(&p, &pi);
    assert!((ev[0] - 1.0).abs() < 1e-9);
    assert!((ev[ev.len() - 1] + 1.0).abs() < 1e-9);
}

#[test]
fn dense_and_iterative_lambda_agree() {
    let k = build_kernel_graph(2, 4);
    for spec in [
        ChainSpec::Symmetric,
        ChainSpec::lazy(BigRational::new(1.into(), 2.into())).unwrap(),
    ] {
        let (p, pi) = chain(&k, spec);
        let d = lambda_max_dense(&p, &pi);
        let it = lambda_max_iterative(&p, &pi, 1e-12).unwrap();
        assert!((d - it).abs() < 1e-6, "{d} vs {it}");
    }
}

#[test]
fn exact_conductance_matches_subset_scan() {
    let k = build_kernel_graph(1, 5);
    assert!(k.len() <= 22);
    let (p, pi) = chain(&k, ChainSpec::Symmetric);
    let exact = conductance_exact(&p, &pi).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    let mut best: Option<BigRational> = None;
    for mask in 1u32..(1 << k.len()) {
        let set: Vec<usize> = (0..k.len()).filter(|&i| mask & (1 << i) != 0).collect();
        let mass = pi.mass(&set);
        if mass.is_zero() || mass > half {
            continue;
        }
        let phi = boundary_flow(&p, &pi, &set) / mass;
        if best.as_ref().is_none_or(|b| phi < *b) {
            best = Some(phi);
        }
    }
    assert_eq!(Some(exact.phi.clone()), best);
    let witness = conductance_upper_bound(&p, &pi, &exact.set).unwrap();
    assert_eq!(witness, exact.phi);
}
