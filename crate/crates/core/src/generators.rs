//! Built-in game families: the three worked examples and seeded random
//! games for the property suites and benchmarks.

use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{GameStructure, Player, VertexId};

/// Four-vertex one-player ring with priorities 3, 1, 2, 0.
pub fn gen_fig1() -> GameStructure {
    GameStructure::new(
        vec![Player::P1; 4],
        vec![vec![1], vec![2], vec![3], vec![0]],
        vec![vec![3, 1, 2, 0]],
        vec![4],
        (0..4).map(|v| Some(format!("v{v}"))).collect(),
    )
    .expect("fig1 is valid")
}

/// Three-vertex game where P1 wins parity from v0 but loses every window
/// and response variant: P2 can stall on the v1 self-loop.
pub fn gen_fig2() -> GameStructure {
    GameStructure::new(
        vec![Player::P1, Player::P2, Player::P1],
        vec![vec![1], vec![1, 2], vec![0]],
        vec![vec![1, 2, 0]],
        vec![2],
        (0..3).map(|v| Some(format!("v{v}"))).collect(),
    )
    .expect("fig2 is valid")
}

/// Choice-mirroring family with `6n` vertices and `2n` dimensions: P2 picks
/// left or right at each `v_i`, and P1 can only answer the pending request
/// by matching the pick at `u_i`. Vertices are laid out as
/// `v_1, v_{1,L}, v_{1,R}, ..., v_n, v_{n,L}, v_{n,R}, u_1, u_{1,L}, ...`.
pub fn gen_fig3(n: usize) -> GameStructure {
    assert!(n >= 1);
    let dims = 2 * n;
    let count = 6 * n;
    let v_base = |i: usize| 3 * i; // v_{i+1}
    let u_base = |i: usize| 3 * n + 3 * i; // u_{i+1}

    let mut owner = Vec::with_capacity(count);
    let mut succ = vec![Vec::new(); count];
    let mut names = vec![None; count];
    let mut priorities = vec![vec![2u32; count]; dims];

    for i in 0..n {
        let v = v_base(i);
        let (vl, vr) = (v + 1, v + 2);
        owner.extend([Player::P2, Player::P2, Player::P2]);
        names[v] = Some(format!("v{}", i + 1));
        names[vl] = Some(format!("v{}L", i + 1));
        names[vr] = Some(format!("v{}R", i + 1));
        succ[v] = vec![vl, vr];
        let next = if i + 1 < n { v_base(i + 1) } else { u_base(0) };
        succ[vl] = vec![next];
        succ[vr] = vec![next];
        priorities[2 * i][vl] = 1;
        priorities[2 * i + 1][vr] = 1;
    }
    for i in 0..n {
        let u = u_base(i);
        let (ul, ur) = (u + 1, u + 2);
        owner.extend([Player::P1, Player::P1, Player::P1]);
        names[u] = Some(format!("u{}", i + 1));
        names[ul] = Some(format!("u{}L", i + 1));
        names[ur] = Some(format!("u{}R", i + 1));
        succ[u] = vec![ul, ur];
        let next = if i + 1 < n { u_base(i + 1) } else { v_base(0) };
        succ[ul] = vec![next];
        succ[ur] = vec![next];
        priorities[2 * i][ul] = 0;
        priorities[2 * i + 1][ur] = 0;
    }

    GameStructure::new(owner, succ, priorities, vec![2; dims], names).expect("fig3 family is valid")
}

/// Seeded random game: uniform owners and priorities, successor sets
/// sampled without replacement, no deadlocks by construction.
pub fn gen_random(
    num_vertices: usize,
    out_degree: RangeInclusive<usize>,
    dims: usize,
    max_priority: u32,
    seed: u64,
) -> GameStructure {
    assert!(num_vertices >= 1 && dims >= 1);
    let lo = (*out_degree.start()).clamp(1, num_vertices);
    let hi = (*out_degree.end()).clamp(lo, num_vertices);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner = Vec::with_capacity(num_vertices);
    let mut succ: Vec<Vec<VertexId>> = Vec::with_capacity(num_vertices);
    let mut priorities = vec![vec![0u32; num_vertices]; dims];
    for v in 0..num_vertices {
        owner.push(if rng.random_bool(0.5) {
            Player::P1
        } else {
            Player::P2
        });
        for dim_priorities in priorities.iter_mut() {
            dim_priorities[v] = rng.random_range(0..=max_priority);
        }
        let degree = rng.random_range(lo..=hi);
        succ.push(sample(&mut rng, num_vertices, degree).into_vec());
    }
    GameStructure::new(
        owner,
        succ,
        priorities,
        vec![max_priority; dims],
        vec![None; num_vertices],
    )
    .expect("random games are valid by construction")
}
