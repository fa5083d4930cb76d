//! Product-arena constructions: the fixed objectives reduce to safety
//! (direct) or co-Büchi (undirect) games on an extended arena that tracks
//! per-dimension window or request bookkeeping, and the bounded objectives
//! reduce to the fixed ones at a threshold bound.
//!
//! Products are built on the fly by forward reachability from one canonical
//! initial annotation per base vertex, so only reachable bookkeeping states
//! are ever materialized. A transition that completes a bad window (or lets
//! a request expire) routes through a flagged copy of the destination; the
//! flag clears after one step and the affected dimensions reset.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{
    preceq, Arena, GameStructure, Objective, ObjectiveKind, Player, ResponseKind, VertexId,
};
use crate::solvers::{solve_cobuchi, solve_parity, solve_safety, Region, SolveResult};

/// Default cap on materialized product vertices.
pub const DEFAULT_PRODUCT_CAP: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("product arena exceeds the cap of {cap} vertices (raise --max-product)")]
    ProductTooLarge { cap: usize },
    #[error("threshold bound for {objective} overflows a 64-bit integer")]
    ThresholdOverflow { objective: ObjectiveKind },
    #[error("parity solving requires a one-dimension game ({0} dimensions given)")]
    MultiDimParity(usize),
    #[error("the history construction requires a one-dimension game ({0} dimensions given)")]
    MultiDimHistory(usize),
}

/// Which extended-arena construction backs the PR objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrConstruction {
    /// One step counter per odd priority per dimension; works in any
    /// dimension count.
    Counters,
    /// The last `lambda` vertices of the play; one-dimension only.
    History,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub max_product_vertices: usize,
    pub pr_construction: PrConstruction,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_product_vertices: DEFAULT_PRODUCT_CAP,
            pr_construction: PrConstruction::Counters,
        }
    }
}

/// Per-dimension window bookkeeping: either no window is pending, or the
/// oldest unresolved window has the given odd running minimum and has
/// covered `steps` vertices so far (`1 <= steps <= lambda-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowTracker {
    Closed,
    Open { min: u32, steps: u64 },
}

impl WindowTracker {
    /// Feeds the next priority. Returns the follow-up state and whether this
    /// step completed a bad window. Closing on an even minimum also closes
    /// every window opened at intermediate positions, which is what lets a
    /// single tracker stand in for all of them.
    fn advance(self, q: u32, lambda: u64) -> (WindowTracker, bool) {
        match self {
            WindowTracker::Closed => {
                if q % 2 == 0 {
                    (WindowTracker::Closed, false)
                } else if lambda == 1 {
                    (WindowTracker::Closed, true)
                } else {
                    (WindowTracker::Open { min: q, steps: 1 }, false)
                }
            }
            WindowTracker::Open { min, steps } => {
                let min = min.min(q);
                if min % 2 == 0 {
                    (WindowTracker::Closed, false)
                } else if steps + 1 == lambda {
                    (WindowTracker::Closed, true)
                } else {
                    (
                        WindowTracker::Open {
                            min,
                            steps: steps + 1,
                        },
                        false,
                    )
                }
            }
        }
    }
}

trait Tracking: Clone + Eq + std::hash::Hash {
    fn start(g: &GameStructure, v: VertexId, lambda: u64) -> (Self, bool);
    fn step(&self, g: &GameStructure, to: VertexId, lambda: u64) -> (Self, bool);
    fn label(&self) -> String;
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct WindowTracking(Vec<WindowTracker>);

impl Tracking for WindowTracking {
    fn start(g: &GameStructure, v: VertexId, lambda: u64) -> (Self, bool) {
        WindowTracking(vec![WindowTracker::Closed; g.dims()]).step(g, v, lambda)
    }

    fn step(&self, g: &GameStructure, to: VertexId, lambda: u64) -> (Self, bool) {
        let mut bad = false;
        let next = self
            .0
            .iter()
            .enumerate()
            .map(|(m, t)| {
                let (t2, b) = t.advance(g.priority(m, to), lambda);
                bad |= b;
                // A dimension whose window just went bad restarts closed.
                if b {
                    WindowTracker::Closed
                } else {
                    t2
                }
            })
            .collect();
        (WindowTracking(next), bad)
    }

    fn label(&self) -> String {
        let mut s = String::from("w");
        for t in &self.0 {
            match t {
                WindowTracker::Closed => s.push_str(";C"),
                WindowTracker::Open { min, steps } => {
                    let _ = write!(s, ";{min}.{steps}");
                }
            }
        }
        s
    }
}

/// Step counters per dimension, one per odd priority: 0 means no pending
/// request, `k >= 1` means the oldest unanswered request of that priority
/// was raised `k-1` steps ago.
#[derive(Clone, PartialEq, Eq, Hash)]
struct CounterTracking(Vec<Vec<u64>>);

fn advance_counters(counters: &mut [u64], q: u32, lambda: u64) -> bool {
    let mut bad = false;
    for (idx, c) in counters.iter_mut().enumerate() {
        if *c > 0 {
            *c += 1;
            let pending = 2 * idx as u32 + 1;
            if *c >= lambda && !preceq(q, pending) {
                bad = true;
            }
        }
    }
    if bad {
        counters.iter_mut().for_each(|c| *c = 0);
    }
    if q % 2 == 0 {
        for (idx, c) in counters.iter_mut().enumerate() {
            if 2 * idx as u32 + 1 >= q {
                *c = 0;
            }
        }
    } else if lambda == 1 {
        // An odd priority can never be answered within a one-step window.
        bad = true;
    } else {
        let idx = (q / 2) as usize;
        if counters[idx] == 0 {
            counters[idx] = 1;
        }
    }
    bad
}

impl Tracking for CounterTracking {
    fn start(g: &GameStructure, v: VertexId, lambda: u64) -> (Self, bool) {
        let mut bad = false;
        let counters = (0..g.dims())
            .map(|m| {
                let mut cs = vec![0u64; (g.even_max(m) / 2) as usize];
                bad |= advance_counters(&mut cs, g.priority(m, v), lambda);
                cs
            })
            .collect();
        (CounterTracking(counters), bad)
    }

    fn step(&self, g: &GameStructure, to: VertexId, lambda: u64) -> (Self, bool) {
        let mut bad = false;
        let next = self
            .0
            .iter()
            .enumerate()
            .map(|(m, cs)| {
                let mut cs = cs.clone();
                bad |= advance_counters(&mut cs, g.priority(m, to), lambda);
                cs
            })
            .collect();
        (CounterTracking(next), bad)
    }

    fn label(&self) -> String {
        let mut s = String::from("c");
        for cs in &self.0 {
            s.push(';');
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{c}");
            }
        }
        s
    }
}

/// The last `lambda` vertices of the play, most recent last. A full history
/// is bad iff its head priority is odd and no stored position answers it.
#[derive(Clone, PartialEq, Eq, Hash)]
struct HistoryTracking(Vec<VertexId>);

impl HistoryTracking {
    fn is_bad(&self, g: &GameStructure, lambda: u64) -> bool {
        if (self.0.len() as u64) < lambda {
            return false;
        }
        let head = g.priority(0, self.0[0]);
        head % 2 == 1 && !self.0.iter().any(|&v| preceq(g.priority(0, v), head))
    }
}

impl Tracking for HistoryTracking {
    fn start(g: &GameStructure, v: VertexId, lambda: u64) -> (Self, bool) {
        let h = HistoryTracking(vec![v]);
        let bad = h.is_bad(g, lambda);
        (h, bad)
    }

    fn step(&self, g: &GameStructure, to: VertexId, lambda: u64) -> (Self, bool) {
        let mut window = self.0.clone();
        window.push(to);
        if window.len() as u64 > lambda {
            window.remove(0);
        }
        let h = HistoryTracking(window);
        let bad = h.is_bad(g, lambda);
        (h, bad)
    }

    fn label(&self) -> String {
        let mut s = String::from("h");
        for v in &self.0 {
            let _ = write!(s, ";{v}");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    Window,
    Counters,
    History,
}

/// Extended arena with a bad-vertex set and the mapping back to the base
/// game. Ownership and moves of a product vertex mirror its base vertex;
/// product successor lists follow the base successor order.
pub struct ProductArena {
    arena: Arena,
    bad: Region,
    back_map: Vec<VertexId>,
    init_of_base: Vec<VertexId>,
    labels: Vec<String>,
    num_base: usize,
    lambda: u64,
    kind: ProductKind,
    size_bound: u128,
}

impl ProductArena {
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn num_vertices(&self) -> usize {
        self.arena.num_vertices()
    }

    pub fn num_base_vertices(&self) -> usize {
        self.num_base
    }

    pub fn bad(&self) -> &Region {
        &self.bad
    }

    pub fn reachable_bad_count(&self) -> usize {
        self.bad.count()
    }

    /// Base vertex a product vertex projects to.
    pub fn base_of(&self, pv: VertexId) -> VertexId {
        self.back_map[pv]
    }

    /// Canonical initial product vertex of a base vertex.
    pub fn init_of(&self, v: VertexId) -> VertexId {
        self.init_of_base[v]
    }

    /// Annotation label of a product vertex (flag excluded); product
    /// vertices with equal labels carry the same bookkeeping state.
    pub fn annotation_label(&self, pv: VertexId) -> &str {
        &self.labels[pv]
    }

    pub fn is_flagged(&self, pv: VertexId) -> bool {
        self.bad.contains(pv)
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    /// Combinatorial bound on the construction's state count; the reachable
    /// size never exceeds it.
    pub fn size_bound(&self) -> u128 {
        self.size_bound
    }

    /// Product successor matching the base move `v -> w` from `pv`.
    pub fn successor_for_move(
        &self,
        g: &GameStructure,
        pv: VertexId,
        w: VertexId,
    ) -> Option<VertexId> {
        let v = self.back_map[pv];
        let idx = g.successors(v).iter().position(|&x| x == w)?;
        Some(self.arena.successors(pv)[idx])
    }

    /// DOT rendering; bad copies are highlighted.
    pub fn to_dot(&self, g: &GameStructure) -> String {
        let mut out = String::from("digraph product {\n");
        for pv in 0..self.num_vertices() {
            let v = self.back_map[pv];
            let shape = match self.arena.owner(pv) {
                Player::P1 => "circle",
                Player::P2 => "box",
            };
            let name = g.name(v).map(str::to_string).unwrap_or(format!("v{v}"));
            let extra = if self.bad.contains(pv) {
                ", style=filled, fillcolor=salmon"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  {pv} [shape={shape}, label=\"{name}\\n{}\"{extra}];",
                self.labels[pv]
            );
        }
        for pv in 0..self.num_vertices() {
            for &qv in self.arena.successors(pv) {
                let _ = writeln!(out, "  {pv} -> {qv};");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn build_product<T: Tracking>(
    g: &GameStructure,
    lambda: u64,
    cap: usize,
    kind: ProductKind,
    size_bound: u128,
) -> Result<ProductArena, SolveError> {
    let mut index: HashMap<(VertexId, T, bool), VertexId> = HashMap::new();
    let mut keys: Vec<(VertexId, T, bool)> = Vec::new();
    let mut succ: Vec<Vec<VertexId>> = Vec::new();
    let mut init_of_base = Vec::with_capacity(g.num_vertices());

    let mut intern = |key: (VertexId, T, bool),
                      keys: &mut Vec<(VertexId, T, bool)>|
     -> Result<VertexId, SolveError> {
        if let Some(&id) = index.get(&key) {
            return Ok(id);
        }
        let id = keys.len();
        if id >= cap {
            return Err(SolveError::ProductTooLarge { cap });
        }
        index.insert(key.clone(), id);
        keys.push(key);
        Ok(id)
    };

    for v in 0..g.num_vertices() {
        let (t, b) = T::start(g, v, lambda);
        init_of_base.push(intern((v, t, b), &mut keys)?);
    }
    let mut next = 0;
    while next < keys.len() {
        let (v, t, _) = keys[next].clone();
        let mut edges = Vec::with_capacity(g.successors(v).len());
        for &w in g.successors(v) {
            let (t2, b2) = t.step(g, w, lambda);
            edges.push(intern((w, t2, b2), &mut keys)?);
        }
        succ.push(edges);
        next += 1;
    }

    let n = keys.len();
    let mut owner = Vec::with_capacity(n);
    let mut back_map = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut bad = Region::empty(n);
    for (pv, (v, t, flagged)) in keys.iter().enumerate() {
        owner.push(g.owner(*v));
        back_map.push(*v);
        labels.push(t.label());
        if *flagged {
            bad.insert(pv);
        }
    }
    debug_assert!((n as u128) <= size_bound);
    Ok(ProductArena {
        arena: Arena::new(owner, succ),
        bad,
        back_map,
        init_of_base,
        labels,
        num_base: g.num_vertices(),
        lambda,
        kind,
        size_bound,
    })
}

fn wp_size_bound(g: &GameStructure, lambda: u64) -> u128 {
    let per_dim = (0..g.dims()).map(|m| {
        1u128.saturating_add(
            (g.even_max(m) as u128 / 2).saturating_mul(lambda.saturating_sub(1) as u128),
        )
    });
    per_dim
        .fold(g.num_vertices() as u128, u128::saturating_mul)
        .saturating_mul(2)
}

fn counter_size_bound(g: &GameStructure, lambda: u64) -> u128 {
    let per_dim = (0..g.dims()).map(|m| {
        let odd = g.even_max(m) / 2;
        (0..odd).fold(1u128, |acc, _| acc.saturating_mul(lambda as u128))
    });
    per_dim
        .fold(g.num_vertices() as u128, u128::saturating_mul)
        .saturating_mul(2)
}

fn history_size_bound(g: &GameStructure, lambda: u64) -> u128 {
    let v = g.num_vertices() as u128;
    let mut total = 0u128;
    let mut pow = 1u128;
    for _ in 0..lambda.min(128) {
        pow = pow.saturating_mul(v);
        total = total.saturating_add(pow);
    }
    total
}

/// Window-tracker product over all dimensions: one [`WindowTracker`] per
/// dimension, a flagged copy whenever any dimension completes a bad window.
pub fn build_wp_product(
    g: &GameStructure,
    lambda: u64,
    cap: usize,
) -> Result<ProductArena, SolveError> {
    assert!(lambda >= 1);
    build_product::<WindowTracking>(
        g,
        lambda,
        cap,
        ProductKind::Window,
        wp_size_bound(g, lambda),
    )
}

/// Request-counter product over all dimensions.
pub fn build_pr_counter_product(
    g: &GameStructure,
    lambda: u64,
    cap: usize,
) -> Result<ProductArena, SolveError> {
    assert!(lambda >= 1);
    build_product::<CounterTracking>(
        g,
        lambda,
        cap,
        ProductKind::Counters,
        counter_size_bound(g, lambda),
    )
}

/// Vertex-history product; one-dimension games only.
pub fn build_pr_history_product(
    g: &GameStructure,
    lambda: u64,
    cap: usize,
) -> Result<ProductArena, SolveError> {
    assert!(lambda >= 1);
    if g.dims() != 1 {
        return Err(SolveError::MultiDimHistory(g.dims()));
    }
    build_product::<HistoryTracking>(
        g,
        lambda,
        cap,
        ProductKind::History,
        history_size_bound(g, lambda),
    )
}

/// Base winning region via the initial-annotation embedding: a base vertex
/// wins iff its canonical initial product vertex wins.
pub fn project_region(product_win: &Region, product: &ProductArena) -> Region {
    Region::from_members(
        product.num_base_vertices(),
        (0..product.num_base_vertices()).filter(|&v| product_win.contains(product.init_of(v))),
    )
}

/// A solved product: the product arena, the product-level result, and its
/// projection to the base game.
pub struct ProductSolve {
    pub product: ProductArena,
    pub result: SolveResult,
    pub base_win1: Region,
}

/// Solves a fixed objective by building the matching product and solving
/// safety (direct) or co-Büchi (undirect) over it.
pub fn solve_fixed(
    g: &GameStructure,
    objective: &Objective,
    options: &SolveOptions,
) -> Result<ProductSolve, SolveError> {
    let kind = objective.kind();
    assert!(kind.is_fixed(), "solve_fixed takes a fixed objective");
    let lambda = objective.lambda().expect("fixed objectives carry lambda");
    let cap = options.max_product_vertices;
    let product = match kind.response_kind().unwrap() {
        ResponseKind::Wp => build_wp_product(g, lambda, cap)?,
        ResponseKind::Pr => match options.pr_construction {
            PrConstruction::Counters => build_pr_counter_product(g, lambda, cap)?,
            PrConstruction::History => build_pr_history_product(g, lambda, cap)?,
        },
    };
    let result = if kind.is_direct() {
        solve_safety(product.arena(), &product.bad().complement())
    } else {
        solve_cobuchi(product.arena(), product.bad())
    };
    let base_win1 = project_region(&result.win1, &product);
    Ok(ProductSolve {
        product,
        result,
        base_win1,
    })
}

/// Threshold bound at which a fixed objective's winning set coincides with
/// the bounded one: `|V|` (PR) and `d/2 * |V|` (WP) in one dimension;
/// `b = |V| * 2^(n*d/2) * (n*d/2)` and `b * d/2` in higher dimensions.
pub fn bounded_threshold(g: &GameStructure, kind: ObjectiveKind) -> Result<u64, SolveError> {
    assert!(kind.is_bounded());
    let overflow = || SolveError::ThresholdOverflow { objective: kind };
    let v = g.num_vertices() as u64;
    let half_d = (g.max_even_max() / 2) as u64;
    let n = g.dims() as u64;
    let base = if n == 1 {
        v
    } else {
        let requests = n.checked_mul(half_d).ok_or_else(overflow)?;
        let pow = 1u64
            .checked_shl(u32::try_from(requests).map_err(|_| overflow())?)
            .ok_or_else(overflow)?;
        v.checked_mul(pow)
            .and_then(|x| x.checked_mul(requests))
            .ok_or_else(overflow)?
    };
    let threshold = match kind.response_kind().unwrap() {
        ResponseKind::Pr => base,
        ResponseKind::Wp => base.checked_mul(half_d).ok_or_else(overflow)?,
    };
    Ok(threshold.max(1))
}

/// A bounded objective solved through the fixed construction at the
/// threshold bound, which is returned as the witness.
pub struct BoundedSolve {
    pub lambda: u64,
    pub solve: ProductSolve,
}

pub fn solve_bounded(
    g: &GameStructure,
    kind: ObjectiveKind,
    options: &SolveOptions,
) -> Result<BoundedSolve, SolveError> {
    assert!(kind.is_bounded(), "solve_bounded takes a bounded objective");
    let lambda = bounded_threshold(g, kind)?;
    let fixed_kind = match kind {
        ObjectiveKind::DirBndPr => ObjectiveKind::DirFixPr,
        ObjectiveKind::BndPr => ObjectiveKind::FixPr,
        ObjectiveKind::DirBndWp => ObjectiveKind::DirFixWp,
        ObjectiveKind::BndWp => ObjectiveKind::FixWp,
        _ => unreachable!(),
    };
    let solve = solve_fixed(g, &Objective::fixed(fixed_kind, lambda), options)?;
    Ok(BoundedSolve { lambda, solve })
}

/// Uniform entry point covering all nine objectives.
pub struct GameSolve {
    /// Bound actually used: the given one for fixed kinds, the threshold
    /// for bounded kinds, absent for parity.
    pub lambda_used: Option<u64>,
    pub base_win1: Region,
    /// Product-level solve for the eight time-bounded kinds.
    pub product: Option<ProductSolve>,
    /// Base-level result for parity.
    pub parity: Option<SolveResult>,
}

pub fn solve_objective(
    g: &GameStructure,
    objective: &Objective,
    options: &SolveOptions,
) -> Result<GameSolve, SolveError> {
    match objective.kind() {
        ObjectiveKind::Parity => {
            if g.dims() != 1 {
                return Err(SolveError::MultiDimParity(g.dims()));
            }
            let priorities: Vec<u32> = (0..g.num_vertices()).map(|v| g.priority(0, v)).collect();
            let result = solve_parity(g.arena(), &priorities);
            Ok(GameSolve {
                lambda_used: None,
                base_win1: result.win1.clone(),
                product: None,
                parity: Some(result),
            })
        }
        kind if kind.is_fixed() => {
            let solve = solve_fixed(g, objective, options)?;
            Ok(GameSolve {
                lambda_used: objective.lambda(),
                base_win1: solve.base_win1.clone(),
                product: Some(solve),
                parity: None,
            })
        }
        kind => {
            let bounded = solve_bounded(g, kind, options)?;
            Ok(GameSolve {
                lambda_used: Some(bounded.lambda),
                base_win1: bounded.solve.base_win1.clone(),
                product: Some(bounded.solve),
                parity: None,
            })
        }
    }
}
