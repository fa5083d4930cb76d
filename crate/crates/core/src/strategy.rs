//! Finite-memory strategies as Moore machines: lifting memoryless product
//! strategies to the base game, deterministic simulation, and independent
//! verification against the product arena.
//!
//! Machine semantics: memory starts at `init`; on arriving at a vertex `v`
//! (including the start vertex) memory becomes `update(memory, v)`, and if
//! `v` is owned by the machine's player the move is `output(memory, v)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{GameStructure, Lasso, Objective, ObjectiveKind, Player, ResponseKind, VertexId};
use crate::product::{
    bounded_threshold, build_pr_counter_product, build_pr_history_product, build_wp_product,
    GameSolve, PrConstruction, ProductArena, SolveError, SolveOptions,
};
use crate::solvers::{MemorylessStrategy, SolveResult};

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("strategy undefined on reachable owned product vertex {vertex} ({label})")]
    StrategyGap { vertex: VertexId, label: String },
    #[error("machine update undefined for state {state} observing vertex {vertex}")]
    MissingUpdate { state: usize, vertex: VertexId },
    #[error("machine output undefined for state {state} at owned vertex {vertex}")]
    MissingOutput { state: usize, vertex: VertexId },
    #[error("machine chooses {choice} at vertex {vertex}, which is not an edge")]
    ChoiceNotEdge { vertex: VertexId, choice: VertexId },
    #[error("malformed machine: {0}")]
    Malformed(String),
    #[error("no finite witness exported: {player} may need infinite memory for {objective}")]
    NoFiniteWitness {
        player: Player,
        objective: ObjectiveKind,
    },
    #[error("verification graph exceeds {cap} nodes")]
    VerificationTooLarge { cap: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Deterministic finite-state strategy transducer.
#[derive(Debug, Clone)]
pub struct MooreMachine {
    player: Player,
    labels: Vec<String>,
    init: usize,
    update: HashMap<(usize, VertexId), usize>,
    output: HashMap<(usize, VertexId), VertexId>,
}

impl MooreMachine {
    pub fn player(&self) -> Player {
        self.player
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn init_state(&self) -> usize {
        self.init
    }

    pub fn state_label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    pub fn update(&self, state: usize, v: VertexId) -> Option<usize> {
        self.update.get(&(state, v)).copied()
    }

    pub fn output(&self, state: usize, v: VertexId) -> Option<VertexId> {
        self.output.get(&(state, v)).copied()
    }

    /// Single-state machine realizing a memoryless strategy on the base
    /// game; the update function is total.
    pub fn memoryless(
        g: &GameStructure,
        player: Player,
        strategy: &MemorylessStrategy,
    ) -> MooreMachine {
        let mut update = HashMap::new();
        let mut output = HashMap::new();
        for v in 0..g.num_vertices() {
            update.insert((0, v), 0);
            if g.owner(v) == player {
                if let Some(w) = strategy.get(v) {
                    output.insert((0, v), w);
                }
            }
        }
        MooreMachine {
            player,
            labels: vec!["m".into()],
            init: 0,
            update,
            output,
        }
    }

    /// Assembles a machine from explicit tables, checking basic shape.
    pub fn from_parts(
        player: Player,
        labels: Vec<String>,
        init: usize,
        update: impl IntoIterator<Item = ((usize, VertexId), usize)>,
        output: impl IntoIterator<Item = ((usize, VertexId), VertexId)>,
    ) -> Result<MooreMachine, MachineError> {
        let states = labels.len();
        if init >= states {
            return Err(MachineError::Malformed(format!(
                "initial state {init} out of range"
            )));
        }
        let mut update_map = HashMap::new();
        for ((s, v), t) in update {
            if s >= states || t >= states {
                return Err(MachineError::Malformed(format!(
                    "update ({s}, {v}) -> {t} references an unknown state"
                )));
            }
            if let Some(&prev) = update_map.get(&(s, v)) {
                if prev != t {
                    return Err(MachineError::Malformed(format!(
                        "conflicting updates for state {s} at vertex {v}"
                    )));
                }
            }
            update_map.insert((s, v), t);
        }
        let mut output_map = HashMap::new();
        for ((s, v), w) in output {
            if s >= states {
                return Err(MachineError::Malformed(format!(
                    "output ({s}, {v}) references an unknown state"
                )));
            }
            output_map.insert((s, v), w);
        }
        Ok(MooreMachine {
            player,
            labels,
            init,
            update: update_map,
            output: output_map,
        })
    }

    pub fn to_json(&self) -> String {
        let mut transitions: Vec<JsonTransition> = self
            .update
            .iter()
            .map(|(&(state, vertex), &next)| JsonTransition {
                state,
                vertex,
                next_state: next,
                choice: self.output.get(&(next, vertex)).copied(),
            })
            .collect();
        transitions.sort_by_key(|t| (t.state, t.vertex));
        let jm = JsonMachine {
            player: self.player.tag(),
            states: self.labels.clone(),
            init: self.init,
            transitions,
        };
        serde_json::to_string_pretty(&jm).expect("machine serialization")
    }

    pub fn from_json(text: &str) -> Result<MooreMachine, MachineError> {
        let jm: JsonMachine =
            serde_json::from_str(text).map_err(|e| MachineError::Malformed(e.to_string()))?;
        let player = Player::from_tag(jm.player)
            .ok_or_else(|| MachineError::Malformed("player must be 1 or 2".into()))?;
        let mut update = Vec::new();
        let mut output = Vec::new();
        for t in jm.transitions {
            update.push(((t.state, t.vertex), t.next_state));
            if let Some(choice) = t.choice {
                output.push(((t.next_state, t.vertex), choice));
            }
        }
        MooreMachine::from_parts(player, jm.states, jm.init, update, output)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonMachine {
    player: u8,
    states: Vec<String>,
    init: usize,
    transitions: Vec<JsonTransition>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct JsonTransition {
    state: usize,
    vertex: VertexId,
    next_state: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    choice: Option<VertexId>,
}

fn memory_label(product: &ProductArena, pv: VertexId) -> String {
    if product.is_flagged(pv) {
        format!("{}!", product.annotation_label(pv))
    } else {
        product.annotation_label(pv).to_string()
    }
}

fn clear_label(product: &ProductArena, g: &GameStructure) -> String {
    match product.kind() {
        crate::product::ProductKind::Window => {
            let mut s = String::from("w");
            for _ in 0..g.dims() {
                s.push_str(";C");
            }
            s
        }
        crate::product::ProductKind::Counters => {
            let mut s = String::from("c");
            for m in 0..g.dims() {
                s.push(';');
                let odd = (g.even_max(m) / 2) as usize;
                s.push_str(&vec!["0"; odd].join(","));
            }
            s
        }
        crate::product::ProductKind::History => "h".into(),
    }
}

/// Lifts a memoryless product strategy to a Moore machine on the base game.
///
/// Memory states are the product annotations reachable while the player
/// follows the strategy (from every base vertex, so the machine can also be
/// run from losing starts); outside the player's winning region the machine
/// falls back to the lowest-id successor. The initial memory state is the
/// all-clear annotation, whose dynamics coincide with the per-vertex
/// initial annotations.
pub fn lift_strategy(
    g: &GameStructure,
    product: &ProductArena,
    solve: &SolveResult,
    player: Player,
) -> Result<MooreMachine, MachineError> {
    let strategy = solve.strategy_of(player);
    let win = match player {
        Player::P1 => solve.win1.clone(),
        Player::P2 => solve.win2(),
    };

    // Integrity pass: following the strategy from the player's winning
    // initial vertices must never hit an owned vertex without a choice.
    {
        let mut seen = vec![false; product.num_vertices()];
        let mut stack: Vec<VertexId> = (0..g.num_vertices())
            .map(|v| product.init_of(v))
            .filter(|&pv| win.contains(pv))
            .collect();
        for &pv in &stack {
            seen[pv] = true;
        }
        while let Some(pv) = stack.pop() {
            let next: Vec<VertexId> = if product.arena().owner(pv) == player {
                match strategy.get(pv) {
                    Some(qv) => vec![qv],
                    None => {
                        return Err(MachineError::StrategyGap {
                            vertex: pv,
                            label: memory_label(product, pv),
                        })
                    }
                }
            } else {
                product.arena().successors(pv).to_vec()
            };
            for qv in next {
                if !seen[qv] {
                    seen[qv] = true;
                    stack.push(qv);
                }
            }
        }
    }

    // Machine-closure pass from every base vertex, completing missing
    // choices deterministically.
    let choice_at = |pv: VertexId| -> VertexId {
        strategy.get(pv).unwrap_or_else(|| {
            *product
                .arena()
                .successors(pv)
                .iter()
                .min_by_key(|&&qv| product.base_of(qv))
                .expect("no deadlocks")
        })
    };

    let mut labels: Vec<String> = Vec::new();
    let mut state_ids: HashMap<String, usize> = HashMap::new();
    let mut state_of = |label: String, labels: &mut Vec<String>| -> usize {
        if let Some(&id) = state_ids.get(&label) {
            return id;
        }
        let id = labels.len();
        state_ids.insert(label.clone(), id);
        labels.push(label);
        id
    };

    let init = state_of(clear_label(product, g), &mut labels);
    let mut update: HashMap<(usize, VertexId), usize> = HashMap::new();
    let mut output: HashMap<(usize, VertexId), VertexId> = HashMap::new();

    let mut seen = vec![false; product.num_vertices()];
    let mut stack: Vec<VertexId> = Vec::new();
    for v in 0..g.num_vertices() {
        let pv = product.init_of(v);
        update.insert((init, v), state_of(memory_label(product, pv), &mut labels));
        if !seen[pv] {
            seen[pv] = true;
            stack.push(pv);
        }
    }
    while let Some(pv) = stack.pop() {
        let state = state_of(memory_label(product, pv), &mut labels);
        let base = product.base_of(pv);
        let followed: Vec<VertexId> = if product.arena().owner(pv) == player {
            let qv = choice_at(pv);
            output.insert((state, base), product.base_of(qv));
            vec![qv]
        } else {
            product.arena().successors(pv).to_vec()
        };
        for qv in followed {
            let next = state_of(memory_label(product, qv), &mut labels);
            update.insert((state, product.base_of(qv)), next);
            if !seen[qv] {
                seen[qv] = true;
                stack.push(qv);
            }
        }
    }

    Ok(MooreMachine {
        player,
        labels,
        init,
        update,
        output,
    })
}

/// Lifts the strategy of `player` out of a finished solve, for any
/// objective kind. Undirect bounded objectives admit no finite witness for
/// P2 (spoiling them can require unbounded stalling), so that export is
/// refused.
pub fn lift_from_solve(
    g: &GameStructure,
    objective: &Objective,
    solve: &GameSolve,
    player: Player,
) -> Result<MooreMachine, MachineError> {
    if player == Player::P2
        && matches!(
            objective.kind(),
            ObjectiveKind::BndPr | ObjectiveKind::BndWp
        )
    {
        return Err(MachineError::NoFiniteWitness {
            player,
            objective: objective.kind(),
        });
    }
    match (&solve.product, &solve.parity) {
        (Some(ps), _) => lift_strategy(g, &ps.product, &ps.result, player),
        (None, Some(result)) => Ok(MooreMachine::memoryless(
            g,
            player,
            result.strategy_of(player),
        )),
        _ => Err(MachineError::Malformed("empty solve".into())),
    }
}

/// The unique play of two machines from a start vertex, folded into a lasso
/// at the first repetition of the joint (vertex, memory, memory) state.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub lasso: Lasso,
    pub steps_to_cycle: usize,
}

pub fn simulate(
    g: &GameStructure,
    sigma1: &MooreMachine,
    sigma2: &MooreMachine,
    start: VertexId,
) -> Result<SimulationOutcome, MachineError> {
    if sigma1.player() != Player::P1 || sigma2.player() != Player::P2 {
        return Err(MachineError::Malformed(
            "simulate takes a P1 machine and a P2 machine".into(),
        ));
    }
    let mut mem1 = sigma1.init;
    let mut mem2 = sigma2.init;
    let mut v = start;
    let mut path: Vec<VertexId> = Vec::new();
    let mut seen: HashMap<(VertexId, usize, usize), usize> = HashMap::new();
    loop {
        mem1 = sigma1.update(mem1, v).ok_or(MachineError::MissingUpdate {
            state: mem1,
            vertex: v,
        })?;
        mem2 = sigma2.update(mem2, v).ok_or(MachineError::MissingUpdate {
            state: mem2,
            vertex: v,
        })?;
        if let Some(&at) = seen.get(&(v, mem1, mem2)) {
            let prefix = path[..at].to_vec();
            let cycle = path[at..].to_vec();
            let lasso = Lasso::new(g.arena(), prefix, cycle)
                .map_err(|e| MachineError::Malformed(e.to_string()))?;
            return Ok(SimulationOutcome {
                lasso,
                steps_to_cycle: at,
            });
        }
        seen.insert((v, mem1, mem2), path.len());
        path.push(v);
        let (machine, mem) = match g.owner(v) {
            Player::P1 => (sigma1, mem1),
            Player::P2 => (sigma2, mem2),
        };
        let w = machine.output(mem, v).ok_or(MachineError::MissingOutput {
            state: mem,
            vertex: v,
        })?;
        if !g.arena().has_edge(v, w) {
            return Err(MachineError::ChoiceNotEdge {
                vertex: v,
                choice: w,
            });
        }
        v = w;
    }
}

/// Verdict of [`verify_winning`]: either the machine wins from the start
/// vertex, or a consistent play spoiling the objective is returned.
///
/// Bounded objectives are verified as their fixed counterpart at the
/// threshold bound (the winning sets coincide there); `checked` records the
/// objective the verdict and any counterexample refer to.
#[derive(Debug)]
pub struct Verification {
    pub winning: bool,
    pub counterexample: Option<Lasso>,
    pub checked: Objective,
}

/// Joint graph of a P1 machine against a free adversary, over either the
/// product arena (time-bounded kinds) or the base arena (parity).
struct JointGraph {
    /// Per node: (memory state, arena vertex).
    nodes: Vec<(usize, VertexId)>,
    succ: Vec<Vec<usize>>,
    start: usize,
}

fn explore_joint(
    machine: &MooreMachine,
    moves_of: &dyn Fn(VertexId) -> Vec<VertexId>,
    base_of: &dyn Fn(VertexId) -> VertexId,
    move_for_choice: &dyn Fn(VertexId, VertexId) -> Option<VertexId>,
    owner_of: &dyn Fn(VertexId) -> Player,
    start_vertex: VertexId,
    cap: usize,
) -> Result<JointGraph, MachineError> {
    let init_mem =
        machine
            .update(machine.init, base_of(start_vertex))
            .ok_or(MachineError::MissingUpdate {
                state: machine.init,
                vertex: base_of(start_vertex),
            })?;
    let mut index: HashMap<(usize, VertexId), usize> = HashMap::new();
    let mut nodes: Vec<(usize, VertexId)> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    index.insert((init_mem, start_vertex), 0);
    nodes.push((init_mem, start_vertex));
    let mut next = 0;
    while next < nodes.len() {
        let (mem, av) = nodes[next];
        let moves: Vec<VertexId> = if owner_of(av) == Player::P1 {
            let choice = machine
                .output(mem, base_of(av))
                .ok_or(MachineError::MissingOutput {
                    state: mem,
                    vertex: base_of(av),
                })?;
            let qv = move_for_choice(av, choice).ok_or(MachineError::ChoiceNotEdge {
                vertex: base_of(av),
                choice,
            })?;
            vec![qv]
        } else {
            moves_of(av)
        };
        let mut row = Vec::with_capacity(moves.len());
        for qv in moves {
            let mem2 = machine
                .update(mem, base_of(qv))
                .ok_or(MachineError::MissingUpdate {
                    state: mem,
                    vertex: base_of(qv),
                })?;
            let id = match index.get(&(mem2, qv)) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    if id >= cap {
                        return Err(MachineError::VerificationTooLarge { cap });
                    }
                    index.insert((mem2, qv), id);
                    nodes.push((mem2, qv));
                    id
                }
            };
            row.push(id);
        }
        succ.push(row);
        next += 1;
    }
    Ok(JointGraph {
        nodes,
        succ,
        start: 0,
    })
}

/// Iterative Tarjan; returns the SCC id of each node and whether that SCC
/// contains a cycle (size >= 2 or a self-loop).
fn scc_with_cycles(succ: &[Vec<usize>]) -> (Vec<usize>, Vec<bool>) {
    let n = succ.len();
    let mut scc_id = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut disc = vec![usize::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut cycles: Vec<bool> = Vec::new();
    let mut counter = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge == 0 {
                disc[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *edge < succ[v].len() {
                let w = succ[v][*edge];
                *edge += 1;
                if disc[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == disc[v] {
                    let id = cycles.len();
                    let mut size = 0;
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        scc_id[w] = id;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    let has_cycle = size >= 2 || succ[v].contains(&v);
                    cycles.push(has_cycle);
                }
            }
        }
    }
    (scc_id, cycles)
}

fn bfs_path(succ: &[Vec<usize>], from: usize, to: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; succ.len()];
    let mut visited = vec![false; succ.len()];
    let mut queue = std::collections::VecDeque::new();
    visited[from] = true;
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        if to(v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &succ[v] {
            if !visited[w] {
                visited[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Cycle through `node` staying inside its SCC, as `node, ..., last` with an
/// edge from `last` back to `node`.
fn cycle_through(succ: &[Vec<usize>], scc_id: &[usize], node: usize) -> Option<Vec<usize>> {
    if succ[node].contains(&node) {
        return Some(vec![node]);
    }
    let mut parent = vec![usize::MAX; succ.len()];
    let mut visited = vec![false; succ.len()];
    let mut queue = std::collections::VecDeque::new();
    for &w in &succ[node] {
        if scc_id[w] == scc_id[node] && !visited[w] {
            visited[w] = true;
            parent[w] = usize::MAX;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if v == node {
            // Reconstruct backwards to one of node's successors.
            unreachable!("node is never enqueued");
        }
        for &w in &succ[v] {
            if scc_id[w] != scc_id[node] {
                continue;
            }
            if w == node {
                let mut path = vec![v];
                let mut cur = v;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.push(node);
                path.reverse();
                return Some(path);
            }
            if !visited[w] {
                visited[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Reusable verification context: resolves the objective (bounded kinds
/// are checked as their fixed counterpart at the threshold bound) and
/// builds the product arena once, so many start vertices can be checked
/// against the same machine or different machines cheaply.
pub struct Verifier<'a> {
    g: &'a GameStructure,
    checked: Objective,
    product: Option<ProductArena>,
    cap: usize,
}

impl<'a> Verifier<'a> {
    pub fn new(
        g: &'a GameStructure,
        objective: &Objective,
        options: &SolveOptions,
    ) -> Result<Verifier<'a>, MachineError> {
        let cap = options.max_product_vertices;
        match objective.kind() {
            ObjectiveKind::Parity => {
                if g.dims() != 1 {
                    return Err(MachineError::Solve(SolveError::MultiDimParity(g.dims())));
                }
                Ok(Verifier {
                    g,
                    checked: *objective,
                    product: None,
                    cap,
                })
            }
            kind => {
                let (lambda, checked) = if kind.is_fixed() {
                    (objective.lambda().unwrap(), *objective)
                } else {
                    let lambda = bounded_threshold(g, kind)?;
                    let fixed_kind = match kind {
                        ObjectiveKind::DirBndPr => ObjectiveKind::DirFixPr,
                        ObjectiveKind::BndPr => ObjectiveKind::FixPr,
                        ObjectiveKind::DirBndWp => ObjectiveKind::DirFixWp,
                        ObjectiveKind::BndWp => ObjectiveKind::FixWp,
                        _ => unreachable!(),
                    };
                    (lambda, Objective::fixed(fixed_kind, lambda))
                };
                let product = match kind.response_kind().unwrap() {
                    ResponseKind::Wp => build_wp_product(g, lambda, cap)?,
                    ResponseKind::Pr => match options.pr_construction {
                        PrConstruction::Counters => build_pr_counter_product(g, lambda, cap)?,
                        PrConstruction::History => build_pr_history_product(g, lambda, cap)?,
                    },
                };
                Ok(Verifier {
                    g,
                    checked,
                    product: Some(product),
                    cap,
                })
            }
        }
    }

    /// Objective the verdicts refer to (threshold-resolved for bounded kinds).
    pub fn checked_objective(&self) -> Objective {
        self.checked
    }

    pub fn verify(
        &self,
        sigma1: &MooreMachine,
        start: VertexId,
    ) -> Result<Verification, MachineError> {
        if sigma1.player() != Player::P1 {
            return Err(MachineError::Malformed(
                "verify_winning checks P1 machines".into(),
            ));
        }
        match &self.product {
            None => self.verify_parity(sigma1, start),
            Some(product) => self.verify_product(product, sigma1, start),
        }
    }

    fn verify_parity(
        &self,
        sigma1: &MooreMachine,
        start: VertexId,
    ) -> Result<Verification, MachineError> {
        let g = self.g;
        let joint = explore_joint(
            sigma1,
            &|v| g.successors(v).to_vec(),
            &|v| v,
            &|v, choice| g.arena().has_edge(v, choice).then_some(choice),
            &|v| g.owner(v),
            start,
            self.cap,
        )?;
        // A spoiling play is a reachable cycle whose minimum priority is
        // some odd c: all cycle vertices have priority >= c and one hits c.
        let priorities: Vec<u32> = joint.nodes.iter().map(|&(_, v)| g.priority(0, v)).collect();
        let odd_values: std::collections::BTreeSet<u32> =
            priorities.iter().copied().filter(|p| p % 2 == 1).collect();
        for c in odd_values {
            let masked: Vec<Vec<usize>> = joint
                .succ
                .iter()
                .enumerate()
                .map(|(v, row)| {
                    if priorities[v] >= c {
                        row.iter()
                            .copied()
                            .filter(|&w| priorities[w] >= c)
                            .collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let (scc_id, has_cycle) = scc_with_cycles(&masked);
            let witness =
                (0..joint.nodes.len()).find(|&nid| priorities[nid] == c && has_cycle[scc_id[nid]]);
            if let Some(b) = witness {
                let path =
                    bfs_path(&joint.succ, joint.start, |n| n == b).expect("witness is reachable");
                let cycle = cycle_through(&masked, &scc_id, b).expect("witness lies on a cycle");
                let project = |nodes: &[usize]| -> Vec<VertexId> {
                    nodes.iter().map(|&n| joint.nodes[n].1).collect()
                };
                let prefix = project(&path[..path.len() - 1]);
                let cycle = project(&cycle);
                let lasso = Lasso::new(g.arena(), prefix, cycle)
                    .map_err(|e| MachineError::Malformed(e.to_string()))?;
                return Ok(Verification {
                    winning: false,
                    counterexample: Some(lasso),
                    checked: self.checked,
                });
            }
        }
        Ok(Verification {
            winning: true,
            counterexample: None,
            checked: self.checked,
        })
    }

    fn verify_product(
        &self,
        product: &ProductArena,
        sigma1: &MooreMachine,
        start: VertexId,
    ) -> Result<Verification, MachineError> {
        let g = self.g;
        let joint = explore_joint(
            sigma1,
            &|pv| product.arena().successors(pv).to_vec(),
            &|pv| product.base_of(pv),
            &|pv, choice| product.successor_for_move(g, pv, choice),
            &|pv| product.arena().owner(pv),
            product.init_of(start),
            self.cap,
        )?;
        let bad_node = |n: usize| product.bad().contains(joint.nodes[n].1);
        let witness = if self.checked.kind().is_direct() {
            bfs_path(&joint.succ, joint.start, |n| bad_node(n)).map(|path| (path, None))
        } else {
            let (scc_id, has_cycle) = scc_with_cycles(&joint.succ);
            (0..joint.nodes.len())
                .find(|&n| bad_node(n) && has_cycle[scc_id[n]])
                .map(|b| {
                    let path = bfs_path(&joint.succ, joint.start, |n| n == b)
                        .expect("witness is reachable");
                    let cycle =
                        cycle_through(&joint.succ, &scc_id, b).expect("witness lies on a cycle");
                    (path, Some(cycle))
                })
        };
        let Some((path, cycle)) = witness else {
            return Ok(Verification {
                winning: true,
                counterexample: None,
                checked: self.checked,
            });
        };
        let project = |nodes: &[usize]| -> Vec<VertexId> {
            nodes
                .iter()
                .map(|&n| product.base_of(joint.nodes[n].1))
                .collect()
        };
        let (prefix_nodes, cycle_nodes) = match cycle {
            Some(cycle) => (path[..path.len() - 1].to_vec(), cycle),
            None => {
                // Direct violation: extend deterministically past the bad
                // vertex until the joint state repeats.
                let mut seen_at: HashMap<usize, usize> = HashMap::new();
                let mut tail = vec![*path.last().unwrap()];
                seen_at.insert(tail[0], 0);
                loop {
                    let cur = *tail.last().unwrap();
                    let (_, pv) = joint.nodes[cur];
                    let next = if product.arena().owner(pv) == Player::P1 {
                        joint.succ[cur][0]
                    } else {
                        // Adversary continues via the lowest base id.
                        *joint.succ[cur]
                            .iter()
                            .min_by_key(|&&n| product.base_of(joint.nodes[n].1))
                            .expect("no deadlocks")
                    };
                    if let Some(&at) = seen_at.get(&next) {
                        let mut prefix_nodes = path[..path.len() - 1].to_vec();
                        prefix_nodes.extend_from_slice(&tail[..at]);
                        let cycle_nodes = tail[at..].to_vec();
                        break (prefix_nodes, cycle_nodes);
                    }
                    seen_at.insert(next, tail.len());
                    tail.push(next);
                }
            }
        };
        let lasso = Lasso::new(g.arena(), project(&prefix_nodes), project(&cycle_nodes))
            .map_err(|e| MachineError::Malformed(e.to_string()))?;
        Ok(Verification {
            winning: false,
            counterexample: Some(lasso),
            checked: self.checked,
        })
    }
}

/// Exhaustive check that `sigma1` wins `objective` from `start`: the product
/// (or base, for parity) arena is restricted to the machine's choices and
/// the adversary is left free, which reduces winning to plain graph
/// questions — no reachable bad vertex for direct kinds, no reachable cycle
/// through a bad vertex for undirect kinds, no reachable cycle with odd
/// minimum priority for parity.
pub fn verify_winning(
    g: &GameStructure,
    objective: &Objective,
    sigma1: &MooreMachine,
    start: VertexId,
    options: &SolveOptions,
) -> Result<Verification, MachineError> {
    Verifier::new(g, objective, options)?.verify(sigma1, start)
}
