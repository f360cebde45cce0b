#![allow(dead_code)]

use matroid_mcmc::exact::{set_of, BruteRank};
use matroid_mcmc::{Fields, MatroidSpec};
use proptest::prelude::*;

pub fn triangle() -> Vec<(usize, usize)> {
    vec![(0, 1), (1, 2), (2, 0)]
}

pub fn k4() -> Vec<(usize, usize)> {
    vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
}

pub fn path(edges: usize) -> Vec<(usize, usize)> {
    (0..edges).map(|i| (i, i + 1)).collect()
}

/// The explicit form of `spec`: its whole independent family, listed.
pub fn explicit_of(spec: &MatroidSpec) -> MatroidSpec {
    let r = BruteRank::new(spec).unwrap();
    let n = r.ground_size();
    let sets = (0..1u64 << n).filter(|&s| r.is_independent(s)).map(set_of).collect();
    MatroidSpec::Explicit { n: Some(n), independent_sets: sets }
}

pub fn arb_uniform(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    (1..=max_n).prop_flat_map(|n| (0..=n).prop_map(move |k| MatroidSpec::Uniform { n, k }))
}

pub fn arb_partition(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    prop::collection::vec((1usize..=4, 0usize..=4), 1..=4)
        .prop_filter("ground set too large", move |b| b.iter().map(|x| x.0).sum::<usize>() <= max_n)
        .prop_flat_map(|b| {
            let n: usize = b.iter().map(|x| x.0).sum();
            (Just(b), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(b, perm)| {
            let mut blocks = Vec::new();
            let mut caps = Vec::new();
            let mut at = 0;
            for (size, cap) in b {
                blocks.push(perm[at..at + size].to_vec());
                caps.push(cap.min(size));
                at += size;
            }
            MatroidSpec::Partition { blocks, caps }
        })
}

/// A multigraph on up to `max_v` vertices, possibly with loops and parallel edges.
pub fn arb_multigraph(max_v: usize, max_m: usize) -> impl Strategy<Value = (usize, Vec<[usize; 2]>)> {
    (1..=max_v).prop_flat_map(move |nv| (Just(nv), prop::collection::vec([0..nv, 0..nv], 1..=max_m)))
}

/// A connected multigraph: a random spanning tree plus extra edges.
pub fn arb_connected(max_v: usize, max_m: usize) -> impl Strategy<Value = (usize, Vec<[usize; 2]>)> {
    (2..=max_v.min(max_m + 1))
        .prop_flat_map(move |nv| {
            let parents: Vec<_> = (1..nv).map(|i| 0..i).collect();
            (Just(nv), parents, prop::collection::vec([0..nv, 0..nv], 0..=max_m + 1 - nv))
        })
        .prop_flat_map(|(nv, parents, extra)| {
            let mut edges: Vec<[usize; 2]> = parents.iter().enumerate().map(|(i, &p)| [i + 1, p]).collect();
            edges.extend(extra);
            let m = edges.len();
            (Just(nv), Just(edges), Just((0..m).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(nv, edges, perm)| (nv, perm.iter().map(|&k| edges[k]).collect()))
}

pub fn arb_graphic(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    arb_multigraph(5, max_n).prop_map(|(nv, edges)| MatroidSpec::Graphic { vertices: Some(nv), edges })
}

pub fn arb_cographic(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    arb_connected(5, max_n).prop_map(|(nv, edges)| MatroidSpec::Cographic { vertices: Some(nv), edges })
}

pub fn arb_binary(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    (1..=4usize, 1..=max_n).prop_flat_map(|(rows, n)| {
        prop::collection::vec(prop::collection::vec(0u8..=1, n), rows)
            .prop_map(|matrix| MatroidSpec::BinaryLinear { matrix })
    })
}

/// Explicit matroids obtained by listing the family of a small structured one.
pub fn arb_explicit(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    prop_oneof![arb_graphic(max_n), arb_binary(max_n), arb_partition(max_n)].prop_map(|s| explicit_of(&s))
}

/// Any variant, ground set at most `max_n`.
pub fn arb_spec(max_n: usize) -> impl Strategy<Value = MatroidSpec> {
    prop_oneof![
        arb_uniform(max_n),
        arb_partition(max_n),
        arb_graphic(max_n),
        arb_cographic(max_n),
        arb_binary(max_n),
        arb_explicit(max_n.min(8)),
    ]
}

pub fn arb_fields(n: usize) -> impl Strategy<Value = Fields> {
    prop::collection::vec(0.1f64..5.0, n).prop_map(|l| Fields::new(l).unwrap())
}

pub fn arb_spec_with_fields(max_n: usize) -> impl Strategy<Value = (MatroidSpec, Fields)> {
    arb_spec(max_n).prop_flat_map(|s| {
        let n = s.ground_size();
        (Just(s), arb_fields(n))
    })
}
