//! Seeded random instances for property campaigns: small valid graphs of
//! groups and random words in their generators.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::exact::{Int, IntMatrix};
use crate::gog::{Edge, GbsGraph, GroupWord};

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn random_nonsingular(rng: &mut ChaCha20Rng, n: usize) -> IntMatrix {
    loop {
        let m = IntMatrix::from_fn(n, n, |_, _| Int::from(rng.gen_range(-3i64..=3)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A uniformly small valid graph: rank <= 3, at most 3 vertices and 4
/// edges, iota entries in [-3, 3], connected by construction.
pub fn random_graph(rng: &mut ChaCha20Rng) -> GbsGraph {
    let n = rng.gen_range(1usize..=3);
    let nv = rng.gen_range(1usize..=3);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let ne = rng.gen_range(nv.saturating_sub(1)..=4.max(nv - 1));
    let mut edges = Vec::new();
    for i in 0..ne {
        // the first nv-1 edges form a spanning tree
        let (from, to) = if i + 1 < nv {
            (format!("v{}", rng.gen_range(0..=i)), format!("v{}", i + 1))
        } else {
            (
                format!("v{}", rng.gen_range(0..nv)),
                format!("v{}", rng.gen_range(0..nv)),
            )
        };
        edges.push(Edge {
            id: format!("e{i}"),
            from,
            to,
            iota_from: random_nonsingular(rng, n),
            iota_to: random_nonsingular(rng, n),
        });
    }
    let g = GbsGraph::new(n, vertices, edges);
    debug_assert!(g.validate().is_empty());
    g
}

/// A random word with at most `max_len` letters in the given graph's
/// generators, with small vertex-group exponents.
pub fn random_word(rng: &mut ChaCha20Rng, g: &GbsGraph, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let mut w = GroupWord::empty();
    for _ in 0..len {
        if g.edges.is_empty() || rng.gen_bool(0.5) {
            let v = &g.vertices[rng.gen_range(0..g.vertices.len())];
            let vec: Vec<Int> = (0..g.rank)
                .map(|_| Int::from(rng.gen_range(-2i64..=2)))
                .collect();
            w = w.concat(&GroupWord::v(v, vec));
        } else {
            let e = &g.edges[rng.gen_range(0..g.edges.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            w = w.concat(&GroupWord::t(&e.id, sign));
        }
    }
    w
}
