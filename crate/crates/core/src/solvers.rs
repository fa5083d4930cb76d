//! Classical backends: attractor computation and solvers for reachability,
//! safety, Büchi, co-Büchi, and parity games, all with memoryless strategy
//! extraction.
//!
//! Every solver returns a determinacy partition: `win1` and its complement
//! cover the arena. All of them are memoryless determined, so the brute
//! force enumeration over memoryless strategy pairs used in the tests is a
//! complete oracle.

use std::collections::VecDeque;

use crate::game::{Arena, Player, VertexId};

/// Set of vertices over a fixed arena.
#[derive(Clone, PartialEq, Eq)]
pub struct Region {
    bits: Vec<bool>,
}

impl Region {
    pub fn empty(n: usize) -> Region {
        Region {
            bits: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Region {
        Region {
            bits: vec![true; n],
        }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = VertexId>) -> Region {
        let mut r = Region::empty(n);
        for v in members {
            r.insert(v);
        }
        r
    }

    /// Number of vertices of the underlying arena, not the member count.
    pub fn domain_size(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits[v]
    }

    pub fn insert(&mut self, v: VertexId) {
        self.bits[v] = true;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.bits[v] = false;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn complement(&self) -> Region {
        Region {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn minus(&self, other: &Region) -> Region {
        Region {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && !b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Region) -> Region {
        Region {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn union(&self, other: &Region) -> Region {
        Region {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &Region) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

impl std::fmt::Debug for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Partial map from owned vertices to a chosen successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemorylessStrategy {
    choice: Vec<Option<VertexId>>,
}

impl MemorylessStrategy {
    pub fn empty(n: usize) -> MemorylessStrategy {
        MemorylessStrategy {
            choice: vec![None; n],
        }
    }

    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.choice[v]
    }

    pub fn set(&mut self, v: VertexId, w: VertexId) {
        self.choice[v] = Some(w);
    }

    pub fn clear(&mut self, v: VertexId) {
        self.choice[v] = None;
    }

    pub fn defined_on(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.choice
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|w| (v, w)))
    }

    /// Drops choices outside `region` or not owned by `player`.
    fn restrict(&mut self, arena: &Arena, player: Player, region: &Region) {
        for v in 0..self.choice.len() {
            if arena.owner(v) != player || !region.contains(v) {
                self.choice[v] = None;
            }
        }
    }
}

/// Winning partition and memoryless strategies for both players.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub win1: Region,
    pub strategy1: MemorylessStrategy,
    pub strategy2: MemorylessStrategy,
}

impl SolveResult {
    pub fn win2(&self) -> Region {
        self.win1.complement()
    }

    pub fn winner(&self, v: VertexId) -> Player {
        if self.win1.contains(v) {
            Player::P1
        } else {
            Player::P2
        }
    }

    pub fn strategy_of(&self, player: Player) -> &MemorylessStrategy {
        match player {
            Player::P1 => &self.strategy1,
            Player::P2 => &self.strategy2,
        }
    }
}

struct AttractorOutcome {
    region: Region,
    strategy: MemorylessStrategy,
}

/// Backward predecessor-counting fixpoint restricted to `mask`: the set of
/// vertices from which `player` can force reaching `target` without leaving
/// `mask`, in `O(|V| + |E|)`.
///
/// The strategy maps `player`-owned attractor vertices outside the target to
/// the lowest-id successor one BFS layer closer to the target.
fn attractor_in(arena: &Arena, mask: &Region, player: Player, target: &Region) -> AttractorOutcome {
    let n = arena.num_vertices();
    let mut region = Region::empty(n);
    let mut rank = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    // For opponent vertices: successors inside the mask not yet attracted.
    let mut pending = vec![0usize; n];
    for v in mask.iter() {
        pending[v] = arena
            .successors(v)
            .iter()
            .filter(|&&w| mask.contains(w))
            .count();
    }
    for v in target.iter() {
        if mask.contains(v) {
            region.insert(v);
            rank[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in arena.predecessors(v) {
            if !mask.contains(u) || region.contains(u) {
                continue;
            }
            let attracted = if arena.owner(u) == player {
                true
            } else {
                pending[u] -= 1;
                pending[u] == 0
            };
            if attracted {
                region.insert(u);
                rank[u] = rank[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let mut strategy = MemorylessStrategy::empty(n);
    for v in region.iter() {
        if arena.owner(v) == player && rank[v] > 0 {
            let choice = arena
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| mask.contains(w) && region.contains(w) && rank[w] < rank[v])
                .min();
            strategy.choice[v] = Some(choice.expect("attractor vertex has a closer successor"));
        }
    }
    AttractorOutcome { region, strategy }
}

/// Attractor of `target` for `player` over the whole arena.
pub fn attractor(arena: &Arena, player: Player, target: &Region) -> (Region, MemorylessStrategy) {
    let out = attractor_in(arena, &Region::full(arena.num_vertices()), player, target);
    (out.region, out.strategy)
}

/// Lowest-id successor of `v` inside `region`, falling back to the overall
/// lowest-id successor. Used where the objective is already decided at `v`.
fn settled_choice(arena: &Arena, mask: &Region, region: &Region, v: VertexId) -> VertexId {
    arena
        .successors(v)
        .iter()
        .copied()
        .filter(|&w| mask.contains(w) && region.contains(w))
        .min()
        .or_else(|| {
            arena
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| mask.contains(w))
                .min()
        })
        .unwrap_or_else(|| arena.successors(v)[0])
}

/// Safety game: P1 wins iff the play never leaves `safe`.
pub fn solve_safety(arena: &Arena, safe: &Region) -> SolveResult {
    let n = arena.num_vertices();
    let full = Region::full(n);
    let unsafe_region = safe.complement();
    let att = attractor_in(arena, &full, Player::P2, &unsafe_region);
    let win2 = att.region;
    let win1 = win2.complement();
    let mut strategy1 = MemorylessStrategy::empty(n);
    for v in win1.iter() {
        if arena.owner(v) == Player::P1 {
            // Some successor stays in the safe region, by the fixpoint.
            let w = arena
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| win1.contains(w))
                .min()
                .expect("winning safety vertex keeps a winning successor");
            strategy1.set(v, w);
        }
    }
    let mut strategy2 = att.strategy;
    for v in win2.iter() {
        if arena.owner(v) == Player::P2 && unsafe_region.contains(v) {
            strategy2.set(v, settled_choice(arena, &full, &win2, v));
        }
    }
    SolveResult {
        win1,
        strategy1,
        strategy2,
    }
}

/// Reachability game: P1 wins iff the play visits `target` at least once.
pub fn solve_reachability(arena: &Arena, target: &Region) -> SolveResult {
    let n = arena.num_vertices();
    let full = Region::full(n);
    let att = attractor_in(arena, &full, Player::P1, target);
    let win1 = att.region;
    let win2 = win1.complement();
    let mut strategy1 = att.strategy;
    for v in win1.iter() {
        if arena.owner(v) == Player::P1 && target.contains(v) {
            strategy1.set(v, settled_choice(arena, &full, &win1, v));
        }
    }
    let mut strategy2 = MemorylessStrategy::empty(n);
    for v in win2.iter() {
        if arena.owner(v) == Player::P2 {
            let w = arena
                .successors(v)
                .iter()
                .copied()
                .filter(|&w| win2.contains(w))
                .min()
                .expect("avoiding vertex keeps an avoiding successor");
            strategy2.set(v, w);
        }
    }
    SolveResult {
        win1,
        strategy1,
        strategy2,
    }
}

struct BuchiOutcome {
    win: Region,
    strategy: MemorylessStrategy,
    opponent_strategy: MemorylessStrategy,
}

/// Classical repeated attractor-and-prune fixpoint for the Büchi objective
/// of `protagonist`: visit `target` infinitely often. `O(|V| * (|V|+|E|))`.
fn solve_buchi_for(arena: &Arena, protagonist: Player, target: &Region) -> BuchiOutcome {
    let n = arena.num_vertices();
    let opponent = protagonist.opponent();
    let mut mask = Region::full(n);
    let mut strategy = MemorylessStrategy::empty(n);
    let mut opponent_strategy = MemorylessStrategy::empty(n);
    loop {
        let live_target = target.intersection(&mask);
        let att = attractor_in(arena, &mask, protagonist, &live_target);
        let escape = mask.minus(&att.region);
        if escape.is_empty() {
            // The protagonist can reach the target from everywhere left, so
            // it can do so forever: attract to the target, step out, repeat.
            for v in mask.iter() {
                if arena.owner(v) != protagonist {
                    continue;
                }
                if live_target.contains(v) {
                    strategy.set(v, settled_choice(arena, &mask, &mask, v));
                } else if let Some(w) = att.strategy.get(v) {
                    strategy.set(v, w);
                }
            }
            return BuchiOutcome {
                win: mask,
                strategy,
                opponent_strategy,
            };
        }
        // `escape` is a protagonist trap avoiding the target entirely; the
        // opponent wins its attractor and is removed from the game.
        let datt = attractor_in(arena, &mask, opponent, &escape);
        for v in datt.region.iter() {
            if arena.owner(v) != opponent {
                continue;
            }
            if escape.contains(v) {
                let w = arena
                    .successors(v)
                    .iter()
                    .copied()
                    .filter(|&w| mask.contains(w) && escape.contains(w))
                    .min()
                    .expect("trap vertex keeps a trap successor");
                opponent_strategy.set(v, w);
            } else if let Some(w) = datt.strategy.get(v) {
                opponent_strategy.set(v, w);
            }
        }
        mask = mask.minus(&datt.region);
    }
}

/// Büchi game: P1 wins iff the play visits `target` infinitely often.
pub fn solve_buchi(arena: &Arena, target: &Region) -> SolveResult {
    let out = solve_buchi_for(arena, Player::P1, target);
    SolveResult {
        win1: out.win,
        strategy1: out.strategy,
        strategy2: out.opponent_strategy,
    }
}

/// Co-Büchi game: P1 wins iff the play visits `bad` only finitely often.
/// Solved as the dual of the Büchi game in which P2 tries to visit `bad`
/// infinitely often.
pub fn solve_cobuchi(arena: &Arena, bad: &Region) -> SolveResult {
    let out = solve_buchi_for(arena, Player::P2, bad);
    SolveResult {
        win1: out.win.complement(),
        strategy1: out.opponent_strategy,
        strategy2: out.strategy,
    }
}

/// Parity game under the minimum-priority convention: P1 wins iff the
/// smallest priority seen infinitely often is even. Zielonka's recursive
/// algorithm with strategy extraction.
pub fn solve_parity(arena: &Arena, priorities: &[u32]) -> SolveResult {
    let n = arena.num_vertices();
    assert_eq!(priorities.len(), n);
    let mut strategy1 = MemorylessStrategy::empty(n);
    let mut strategy2 = MemorylessStrategy::empty(n);
    let win1 = zielonka(
        arena,
        priorities,
        Region::full(n),
        &mut strategy1,
        &mut strategy2,
    );
    strategy1.restrict(arena, Player::P1, &win1);
    strategy2.restrict(arena, Player::P2, &win1.complement());
    SolveResult {
        win1,
        strategy1,
        strategy2,
    }
}

/// Returns P1's winning region within `mask`; writes both players' choices
/// for the vertices they win (later frames overwrite earlier ones, and
/// `solve_parity` prunes leftovers outside the final regions).
fn zielonka(
    arena: &Arena,
    priorities: &[u32],
    mask: Region,
    strategy1: &mut MemorylessStrategy,
    strategy2: &mut MemorylessStrategy,
) -> Region {
    let n = arena.num_vertices();
    let Some(min_priority) = mask.iter().map(|v| priorities[v]).min() else {
        return Region::empty(n);
    };
    let favored = if min_priority % 2 == 0 {
        Player::P1
    } else {
        Player::P2
    };
    let target = Region::from_members(n, mask.iter().filter(|&v| priorities[v] == min_priority));
    let att = attractor_in(arena, &mask, favored, &target);
    let sub = mask.minus(&att.region);
    let sub_win1 = zielonka(arena, priorities, sub.clone(), strategy1, strategy2);
    let sub_unfavored = match favored {
        Player::P1 => sub.minus(&sub_win1),
        Player::P2 => sub_win1,
    };
    if sub_unfavored.is_empty() {
        // `favored` wins all of `mask`: cycle through the minimal priority
        // or defer to the recursive strategy.
        let strat = match favored {
            Player::P1 => &mut *strategy1,
            Player::P2 => &mut *strategy2,
        };
        for v in att.region.iter() {
            if arena.owner(v) != favored {
                continue;
            }
            if target.contains(v) {
                strat.set(v, settled_choice(arena, &mask, &mask, v));
            } else if let Some(w) = att.strategy.get(v) {
                strat.set(v, w);
            }
        }
        return match favored {
            Player::P1 => mask,
            Player::P2 => Region::empty(n),
        };
    }
    let unfavored = favored.opponent();
    let att2 = attractor_in(arena, &mask, unfavored, &sub_unfavored);
    {
        let strat = match unfavored {
            Player::P1 => &mut *strategy1,
            Player::P2 => &mut *strategy2,
        };
        for v in att2.region.iter() {
            if arena.owner(v) == unfavored && !sub_unfavored.contains(v) {
                if let Some(w) = att2.strategy.get(v) {
                    strat.set(v, w);
                }
            }
        }
    }
    let rest = mask.minus(&att2.region);
    let rest_win1 = zielonka(arena, priorities, rest, strategy1, strategy2);
    match unfavored {
        Player::P1 => rest_win1.union(&att2.region),
        Player::P2 => rest_win1,
    }
}

/// Checks that following `strategy` from any vertex of `region` never leaves
/// `region`, treating `stop` vertices as absorbing (the objective is decided
/// there). Opponent moves are unconstrained.
pub fn strategy_closed(
    arena: &Arena,
    player: Player,
    strategy: &MemorylessStrategy,
    region: &Region,
    stop: &Region,
) -> bool {
    for v in region.iter() {
        if stop.contains(v) {
            continue;
        }
        if arena.owner(v) == player {
            match strategy.get(v) {
                Some(w) => {
                    if !region.contains(w) {
                        return false;
                    }
                }
                None => return false,
            }
        } else if !arena.successors(v).iter().all(|&w| region.contains(w)) {
            return false;
        }
    }
    true
}
