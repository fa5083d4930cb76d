//! Definition-level membership checks for every objective on ultimately
//! periodic plays.
//!
//! These checks unroll the lasso far enough to be exact and serve as the
//! independent oracle for the product-based solvers: a play `prefix cycle^ω`
//! with prefix length `a` and cycle length `l` is decided by examining start
//! positions `j < a + l` (later positions repeat earlier ones shifted by the
//! period) against an unrolling of length `a + l + lambda`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{preceq, GameStructure, Lasso, Objective, ObjectiveKind, ResponseKind, VertexId};

fn priority_at(g: &GameStructure, lasso: &Lasso, dim: usize, t: usize) -> u32 {
    g.priority(dim, lasso.at(t))
}

/// Offsets beyond `a + 2l` cannot change any per-position verdict: by then
/// the scan has seen the whole remaining prefix and a full cycle period.
fn scan_horizon(lasso: &Lasso) -> u64 {
    (lasso.prefix_len() + 2 * lasso.cycle_len()) as u64
}

/// Position `j` is good for PR iff some offset `l < lambda` carries an even
/// priority `<=` the priority at `j`.
fn pr_position_ok(g: &GameStructure, lasso: &Lasso, lambda: u64, dim: usize, j: usize) -> bool {
    let c = priority_at(g, lasso, dim, j);
    let max_l = lambda.min(scan_horizon(lasso));
    (0..max_l).any(|l| preceq(priority_at(g, lasso, dim, j + l as usize), c))
}

/// Position `j` is good for WP iff the running minimum over the window
/// becomes even within `lambda` offsets.
fn wp_position_ok(g: &GameStructure, lasso: &Lasso, lambda: u64, dim: usize, j: usize) -> bool {
    let max_l = lambda.min(scan_horizon(lasso));
    let mut min = u32::MAX;
    for l in 0..max_l {
        min = min.min(priority_at(g, lasso, dim, j + l as usize));
        if min % 2 == 0 {
            return true;
        }
    }
    false
}

fn position_ok(
    g: &GameStructure,
    lasso: &Lasso,
    lambda: u64,
    dim: usize,
    kind: ResponseKind,
    j: usize,
) -> bool {
    match kind {
        ResponseKind::Pr => pr_position_ok(g, lasso, lambda, dim, j),
        ResponseKind::Wp => wp_position_ok(g, lasso, lambda, dim, j),
    }
}

/// Direct fixed check for the suffix of the play starting at `start`.
fn dirfix_from(
    g: &GameStructure,
    lasso: &Lasso,
    lambda: u64,
    dim: usize,
    kind: ResponseKind,
    start: usize,
) -> bool {
    let end = start.max(lasso.prefix_len()) + lasso.cycle_len();
    (start..end).all(|j| position_ok(g, lasso, lambda, dim, kind, j))
}

/// Membership in `DirFixPR(lambda, p_dim)`.
pub fn check_dirfixpr(g: &GameStructure, lasso: &Lasso, lambda: u64, dim: usize) -> bool {
    assert!(lambda >= 1);
    dirfix_from(g, lasso, lambda, dim, ResponseKind::Pr, 0)
}

/// Membership in `DirFixWP(lambda, p_dim)`.
pub fn check_dirfixwp(g: &GameStructure, lasso: &Lasso, lambda: u64, dim: usize) -> bool {
    assert!(lambda >= 1);
    dirfix_from(g, lasso, lambda, dim, ResponseKind::Wp, 0)
}

/// Membership in the prefix-independent `FixPR`/`FixWP`: some suffix
/// satisfies the direct variant. Only suffixes starting before `a + l` need
/// testing.
pub fn check_fix(
    g: &GameStructure,
    lasso: &Lasso,
    lambda: u64,
    dim: usize,
    kind: ResponseKind,
) -> bool {
    assert!(lambda >= 1);
    let horizon = lasso.prefix_len() + lasso.cycle_len();
    (0..horizon).any(|i| dirfix_from(g, lasso, lambda, dim, kind, i))
}

/// Witness bound for bounded objectives on a lasso: if any finite bound
/// works then `a + 2l` works, because every answer or window close that ever
/// happens does so within the remaining prefix plus one full cycle.
pub fn bounded_witness(lasso: &Lasso) -> u64 {
    scan_horizon(lasso)
}

/// Membership in the bounded variants, decided exactly at the witness bound.
pub fn check_bounded(
    g: &GameStructure,
    lasso: &Lasso,
    dim: usize,
    kind: ResponseKind,
    direct: bool,
) -> bool {
    let witness = bounded_witness(lasso);
    if direct {
        dirfix_from(g, lasso, witness, dim, kind, 0)
    } else {
        check_fix(g, lasso, witness, dim, kind)
    }
}

/// Parity on dimension `dim`: the minimum priority on the cycle is even.
pub fn check_parity(g: &GameStructure, lasso: &Lasso, dim: usize) -> bool {
    lasso
        .cycle()
        .iter()
        .map(|&v| g.priority(dim, v))
        .min()
        .map(|m| m % 2 == 0)
        .unwrap_or(false)
}

/// Conjunction of the per-dimension check over all dimensions of `g`.
pub fn check_multi(g: &GameStructure, lasso: &Lasso, objective: &Objective) -> bool {
    (0..g.dims()).all(|dim| check_one_dim(g, lasso, objective, dim))
}

/// One-dimension dispatch of an objective on a play.
pub fn check_one_dim(g: &GameStructure, lasso: &Lasso, objective: &Objective, dim: usize) -> bool {
    let kind = objective.kind();
    match kind {
        ObjectiveKind::Parity => check_parity(g, lasso, dim),
        _ => {
            let response = kind.response_kind().unwrap();
            if kind.is_fixed() {
                let lambda = objective.lambda().unwrap();
                if kind.is_direct() {
                    dirfix_from(g, lasso, lambda, dim, response, 0)
                } else {
                    check_fix(g, lasso, lambda, dim, response)
                }
            } else {
                check_bounded(g, lasso, dim, response, kind.is_direct())
            }
        }
    }
}

/// Seeded random walk folded into a valid lasso. The walk takes a random
/// number of prefix steps (at most `max_prefix`), then continues until a
/// vertex repeats among the post-prefix visits; `max_cycle` caps how long it
/// keeps trying before folding at the first repeat anyway.
pub fn random_lasso(g: &GameStructure, seed: u64, max_prefix: usize, max_cycle: usize) -> Lasso {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.num_vertices();
    let mut v = rng.random_range(0..n);
    let target_prefix = rng.random_range(0..=max_prefix);
    let mut path = vec![v];
    let step = |rng: &mut ChaCha8Rng, v: VertexId| {
        let succs = g.successors(v);
        succs[rng.random_range(0..succs.len())]
    };
    for _ in 0..target_prefix {
        v = step(&mut rng, v);
        path.push(v);
    }
    let boundary = path.len() - 1;
    let mut seen_at = vec![usize::MAX; n];
    seen_at[v] = boundary;
    let _ = max_cycle; // soft shaping only; the fold below always terminates
    loop {
        v = step(&mut rng, v);
        if seen_at[v] != usize::MAX {
            let start = seen_at[v];
            let prefix = path[..start].to_vec();
            let cycle = path[start..].to_vec();
            return Lasso::new(g.arena(), prefix, cycle)
                .expect("random walk yields a valid lasso")
                .normalized();
        }
        seen_at[v] = path.len();
        path.push(v);
    }
}
