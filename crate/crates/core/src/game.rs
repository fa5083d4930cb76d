//! Arena representation: vertices, ownership, edges, priority vectors, and
//! the objectives played on them.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index in `0..|V|`.
pub type VertexId = usize;

/// The two players. `P1` tries to satisfy the objective, `P2` to spoil it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// Numeric tag used by the text/JSON formats (1 or 2).
    pub fn tag(self) -> u8 {
        match self {
            Player::P1 => 1,
            Player::P2 => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Player> {
        match tag {
            1 => Some(Player::P1),
            2 => Some(Player::P2),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.tag())
    }
}

/// Priority order: `c` answers `c2` iff `c` is even and `c <= c2`.
pub fn preceq(c: u32, c2: u32) -> bool {
    c % 2 == 0 && c <= c2
}

/// Ownership and move structure of a game, without priorities.
///
/// Predecessor lists are materialized lazily on first use and cached; the
/// arena itself is immutable after construction and safe to share.
#[derive(Debug)]
pub struct Arena {
    owner: Vec<Player>,
    succ: Vec<Vec<VertexId>>,
    preds: OnceLock<Vec<Vec<VertexId>>>,
}

impl Arena {
    pub fn new(owner: Vec<Player>, succ: Vec<Vec<VertexId>>) -> Arena {
        assert_eq!(owner.len(), succ.len());
        Arena {
            owner,
            succ,
            preds: OnceLock::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.owner[v]
    }

    /// Successors in input order; all iteration over moves follows this order.
    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v]
    }

    pub fn has_edge(&self, v: VertexId, w: VertexId) -> bool {
        self.succ[v].contains(&w)
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.preds()[v]
    }

    fn preds(&self) -> &Vec<Vec<VertexId>> {
        self.preds.get_or_init(|| {
            let mut preds = vec![Vec::new(); self.num_vertices()];
            for (v, succs) in self.succ.iter().enumerate() {
                for &w in succs {
                    preds[w].push(v);
                }
            }
            preds
        })
    }

    /// Copy with ownership of every vertex swapped. Used for duality checks.
    pub fn with_swapped_owners(&self) -> Arena {
        Arena::new(
            self.owner.iter().map(|p| p.opponent()).collect(),
            self.succ.clone(),
        )
    }
}

/// A finite game arena with `n >= 1` priority functions.
///
/// Vertex ids form the contiguous range `0..num_vertices()`. Each dimension
/// `m` carries a declared maximum priority; [`GameStructure::even_max`]
/// rounds it up to the even bound used by all window/counter formulas.
#[derive(Debug)]
pub struct GameStructure {
    arena: Arena,
    /// `priorities[dim][vertex]`.
    priorities: Vec<Vec<u32>>,
    /// Declared maximum priority per dimension, as written in the input.
    declared_max: Vec<u32>,
    names: Vec<Option<String>>,
}

/// Invariant violations reported by [`GameStructure::validate`]. These are
/// data, not failures: building or parsing a game surfaces them as errors,
/// but `validate` itself always succeeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Vertex has no successor.
    Deadlock(VertexId),
    /// A priority exceeds the declared per-dimension maximum.
    PriorityOutOfRange {
        vertex: VertexId,
        dim: usize,
        priority: u32,
        max: u32,
    },
    /// An edge points at a vertex id outside `0..|V|`.
    DanglingSuccessor {
        vertex: VertexId,
        successor: VertexId,
    },
    /// The same vertex id was declared twice.
    DuplicateVertex(VertexId),
    /// Declared ids do not cover `0..|V|` exactly.
    MissingVertex(VertexId),
    /// The game has no vertices at all.
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Deadlock(v) => write!(f, "vertex {v} has no successor"),
            Violation::PriorityOutOfRange {
                vertex,
                dim,
                priority,
                max,
            } => write!(
                f,
                "vertex {vertex}: priority {priority} in dimension {dim} exceeds declared maximum {max}"
            ),
            Violation::DanglingSuccessor { vertex, successor } => {
                write!(f, "vertex {vertex}: successor {successor} does not exist")
            }
            Violation::DuplicateVertex(v) => write!(f, "vertex id {v} declared more than once"),
            Violation::MissingVertex(v) => write!(f, "vertex id {v} is missing"),
            Violation::Empty => write!(f, "game has no vertices"),
        }
    }
}

impl GameStructure {
    /// Builds a game and rejects it if any structural invariant is violated.
    pub fn new(
        owner: Vec<Player>,
        succ: Vec<Vec<VertexId>>,
        priorities: Vec<Vec<u32>>,
        declared_max: Vec<u32>,
        names: Vec<Option<String>>,
    ) -> Result<GameStructure, Vec<Violation>> {
        let g = GameStructure {
            arena: Arena::new(owner, succ),
            priorities,
            declared_max,
            names,
        };
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(violations)
        }
    }

    /// Checks every structural invariant, returning one record per breach.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.num_vertices();
        if n == 0 {
            out.push(Violation::Empty);
        }
        for v in 0..n {
            if self.arena.successors(v).is_empty() {
                out.push(Violation::Deadlock(v));
            }
            for &w in self.arena.successors(v) {
                if w >= n {
                    out.push(Violation::DanglingSuccessor {
                        vertex: v,
                        successor: w,
                    });
                }
            }
            for (dim, ps) in self.priorities.iter().enumerate() {
                if ps[v] > self.declared_max[dim] {
                    out.push(Violation::PriorityOutOfRange {
                        vertex: v,
                        dim,
                        priority: ps[v],
                        max: self.declared_max[dim],
                    });
                }
            }
        }
        out
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn num_vertices(&self) -> usize {
        self.arena.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.arena.num_edges()
    }

    pub fn dims(&self) -> usize {
        self.priorities.len()
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.arena.owner(v)
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        self.arena.successors(v)
    }

    pub fn priority(&self, dim: usize, v: VertexId) -> u32 {
        self.priorities[dim][v]
    }

    pub fn priorities_of(&self, v: VertexId) -> Vec<u32> {
        (0..self.dims()).map(|m| self.priority(m, v)).collect()
    }

    pub fn declared_max(&self, dim: usize) -> u32 {
        self.declared_max[dim]
    }

    /// Declared maximum of `dim`, rounded up to the nearest even number.
    pub fn even_max(&self, dim: usize) -> u32 {
        let d = self.declared_max[dim];
        d + d % 2
    }

    /// Largest normalized maximum across dimensions; the `d` of all
    /// threshold formulas in the multi-dimension setting.
    pub fn max_even_max(&self) -> u32 {
        (0..self.dims())
            .map(|m| self.even_max(m))
            .max()
            .unwrap_or(0)
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names[v].as_deref()
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }
}

/// The objective kinds supported by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    DirFixPr,
    FixPr,
    DirFixWp,
    FixWp,
    DirBndPr,
    BndPr,
    DirBndWp,
    BndWp,
    Parity,
}

/// PR asks each priority to be answered by a smaller even priority within
/// the bound; WP asks a sliding window to close on an even minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResponseKind {
    Pr,
    Wp,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 9] = [
        ObjectiveKind::DirFixPr,
        ObjectiveKind::FixPr,
        ObjectiveKind::DirFixWp,
        ObjectiveKind::FixWp,
        ObjectiveKind::DirBndPr,
        ObjectiveKind::BndPr,
        ObjectiveKind::DirBndWp,
        ObjectiveKind::BndWp,
        ObjectiveKind::Parity,
    ];

    pub fn is_fixed(self) -> bool {
        matches!(
            self,
            ObjectiveKind::DirFixPr
                | ObjectiveKind::FixPr
                | ObjectiveKind::DirFixWp
                | ObjectiveKind::FixWp
        )
    }

    pub fn is_bounded(self) -> bool {
        matches!(
            self,
            ObjectiveKind::DirBndPr
                | ObjectiveKind::BndPr
                | ObjectiveKind::DirBndWp
                | ObjectiveKind::BndWp
        )
    }

    /// Direct variants constrain the play from position 0; the others only
    /// from some suffix onward.
    pub fn is_direct(self) -> bool {
        matches!(
            self,
            ObjectiveKind::DirFixPr
                | ObjectiveKind::DirFixWp
                | ObjectiveKind::DirBndPr
                | ObjectiveKind::DirBndWp
        )
    }

    pub fn response_kind(self) -> Option<ResponseKind> {
        match self {
            ObjectiveKind::DirFixPr
            | ObjectiveKind::FixPr
            | ObjectiveKind::DirBndPr
            | ObjectiveKind::BndPr => Some(ResponseKind::Pr),
            ObjectiveKind::DirFixWp
            | ObjectiveKind::FixWp
            | ObjectiveKind::DirBndWp
            | ObjectiveKind::BndWp => Some(ResponseKind::Wp),
            ObjectiveKind::Parity => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::DirFixPr => "dirfixpr",
            ObjectiveKind::FixPr => "fixpr",
            ObjectiveKind::DirFixWp => "dirfixwp",
            ObjectiveKind::FixWp => "fixwp",
            ObjectiveKind::DirBndPr => "dirbndpr",
            ObjectiveKind::BndPr => "bndpr",
            ObjectiveKind::DirBndWp => "dirbndwp",
            ObjectiveKind::BndWp => "bndwp",
            ObjectiveKind::Parity => "parity",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = ObjectiveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjectiveKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| ObjectiveError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("unknown objective kind `{0}`")]
    UnknownKind(String),
    #[error("objective {0} requires a bound of at least 1")]
    LambdaTooSmall(ObjectiveKind),
    #[error("objective {0} requires a bound (--lambda)")]
    LambdaMissing(ObjectiveKind),
    #[error("objective {0} does not take a bound")]
    LambdaForbidden(ObjectiveKind),
}

/// One of the eight time-bounded variants or plain parity, with the window
/// size / bound `lambda` present exactly for the fixed variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Objective {
    kind: ObjectiveKind,
    lambda: Option<u64>,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, lambda: Option<u64>) -> Result<Objective, ObjectiveError> {
        match (kind.is_fixed(), lambda) {
            (true, None) => Err(ObjectiveError::LambdaMissing(kind)),
            (true, Some(0)) => Err(ObjectiveError::LambdaTooSmall(kind)),
            (false, Some(_)) => Err(ObjectiveError::LambdaForbidden(kind)),
            _ => Ok(Objective { kind, lambda }),
        }
    }

    pub fn fixed(kind: ObjectiveKind, lambda: u64) -> Objective {
        Objective::new(kind, Some(lambda)).expect("fixed objective")
    }

    pub fn bare(kind: ObjectiveKind) -> Objective {
        Objective::new(kind, None).expect("objective without bound")
    }

    pub fn parity() -> Objective {
        Objective::bare(ObjectiveKind::Parity)
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn lambda(&self) -> Option<u64> {
        self.lambda
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda {
            Some(l) => write!(f, "{}({})", self.kind, l),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Finite representation of an ultimately periodic play: `prefix cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    prefix: Vec<VertexId>,
    cycle: Vec<VertexId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LassoError {
    #[error("lasso cycle must be non-empty")]
    EmptyCycle,
    #[error("consecutive lasso vertices {0} -> {1} are not an edge")]
    NotAnEdge(VertexId, VertexId),
    #[error("lasso vertex {0} outside the arena")]
    UnknownVertex(VertexId),
}

impl Lasso {
    /// Validates that consecutive vertices (including prefix→cycle and the
    /// cycle wrap-around) are edges of `arena`.
    pub fn new(
        arena: &Arena,
        prefix: Vec<VertexId>,
        cycle: Vec<VertexId>,
    ) -> Result<Lasso, LassoError> {
        if cycle.is_empty() {
            return Err(LassoError::EmptyCycle);
        }
        for &v in prefix.iter().chain(cycle.iter()) {
            if v >= arena.num_vertices() {
                return Err(LassoError::UnknownVertex(v));
            }
        }
        let check = |a: VertexId, b: VertexId| {
            if arena.has_edge(a, b) {
                Ok(())
            } else {
                Err(LassoError::NotAnEdge(a, b))
            }
        };
        for w in prefix.windows(2) {
            check(w[0], w[1])?;
        }
        if let Some(&last) = prefix.last() {
            check(last, cycle[0])?;
        }
        for w in cycle.windows(2) {
            check(w[0], w[1])?;
        }
        check(*cycle.last().unwrap(), cycle[0])?;
        Ok(Lasso { prefix, cycle })
    }

    pub fn prefix(&self) -> &[VertexId] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[VertexId] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Vertex at position `t` of the infinite unrolling.
    pub fn at(&self, t: usize) -> VertexId {
        if t < self.prefix.len() {
            self.prefix[t]
        } else {
            self.cycle[(t - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Rotates the cycle left by `k` and absorbs the skipped vertices into
    /// the prefix; represents the same play.
    pub fn rotated(&self, k: usize) -> Lasso {
        let k = k % self.cycle.len();
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(&self.cycle[..k]);
        let mut cycle = self.cycle[k..].to_vec();
        cycle.extend_from_slice(&self.cycle[..k]);
        Lasso { prefix, cycle }
    }

    /// Shortens the prefix as far as possible without changing the play:
    /// while the last prefix vertex equals the last cycle vertex, the cycle
    /// can be rotated right by one and the prefix dropped by one.
    pub fn normalized(mut self) -> Lasso {
        while let Some(&last) = self.prefix.last() {
            if last == *self.cycle.last().unwrap() {
                self.prefix.pop();
                let moved = self.cycle.pop().unwrap();
                self.cycle.insert(0, moved);
            } else {
                break;
            }
        }
        self
    }
}
