//! Shared helpers for the integration suites: an exhaustive memoryless
//! strategy-pair oracle for the classical objectives (complete on them by
//! memoryless determinacy), and random finite-memory adversary machines.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wpg::game::{GameStructure, Player, VertexId};
use wpg::solvers::Region;
use wpg::strategy::MooreMachine;

#[derive(Clone, Copy)]
pub enum Classical<'a> {
    Safety(&'a Region),
    Reachability(&'a Region),
    Buchi(&'a Region),
    CoBuchi(&'a Region),
    Parity,
}

/// All choice vectors over the given per-vertex degrees (odometer order).
struct Profiles {
    radix: Vec<usize>,
    current: Vec<usize>,
    done: bool,
}

impl Profiles {
    fn new(radix: Vec<usize>) -> Profiles {
        let current = vec![0; radix.len()];
        Profiles {
            radix,
            current,
            done: false,
        }
    }
}

impl Iterator for Profiles {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = true;
        for i in 0..self.current.len() {
            self.current[i] += 1;
            if self.current[i] < self.radix[i] {
                self.done = false;
                break;
            }
            self.current[i] = 0;
        }
        Some(out)
    }
}

fn outcome_satisfies(
    g: &GameStructure,
    choice: &[VertexId],
    start: VertexId,
    objective: Classical,
) -> bool {
    let n = g.num_vertices();
    let mut seen_at = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut v = start;
    let cycle_start = loop {
        if seen_at[v] != usize::MAX {
            break seen_at[v];
        }
        seen_at[v] = path.len();
        path.push(v);
        v = choice[v];
    };
    let cycle = &path[cycle_start..];
    match objective {
        Classical::Safety(safe) => path.iter().all(|&v| safe.contains(v)),
        Classical::Reachability(target) => path.iter().any(|&v| target.contains(v)),
        Classical::Buchi(target) => cycle.iter().any(|&v| target.contains(v)),
        Classical::CoBuchi(bad) => !cycle.iter().any(|&v| bad.contains(v)),
        Classical::Parity => {
            cycle
                .iter()
                .map(|&v| g.priority(0, v))
                .min()
                .expect("cycle is non-empty")
                % 2
                == 0
        }
    }
}

/// P1's winning region by enumerating every memoryless strategy pair.
pub fn bruteforce_win1(g: &GameStructure, objective: Classical) -> Region {
    let n = g.num_vertices();
    let owned: Vec<Vec<VertexId>> = [Player::P1, Player::P2]
        .iter()
        .map(|&p| (0..n).filter(|&v| g.owner(v) == p).collect())
        .collect();
    let strategies: Vec<Vec<Vec<VertexId>>> = owned
        .iter()
        .map(|vs| {
            Profiles::new(vs.iter().map(|&v| g.successors(v).len()).collect())
                .map(|idx| {
                    let mut choice = vec![0; n];
                    for (&v, &i) in vs.iter().zip(&idx) {
                        choice[v] = g.successors(v)[i];
                    }
                    choice
                })
                .collect()
        })
        .collect();
    let mut win1 = Region::empty(n);
    for start in 0..n {
        let winning = strategies[0].iter().any(|s1| {
            strategies[1].iter().all(|s2| {
                let mut choice = vec![0; n];
                for v in 0..n {
                    choice[v] = match g.owner(v) {
                        Player::P1 => s1[v],
                        Player::P2 => s2[v],
                    };
                }
                outcome_satisfies(g, &choice, start, objective)
            })
        });
        if winning {
            win1.insert(start);
        }
    }
    win1
}

/// Seeded region over the game's vertices.
#[allow(dead_code)]
pub fn random_region(g: &GameStructure, seed: u64) -> Region {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Region::from_members(
        g.num_vertices(),
        (0..g.num_vertices()).filter(|_| rng.random_bool(0.5)),
    )
}

/// Random total P2 Moore machine with the given number of memory states.
#[allow(dead_code)]
pub fn random_p2_machine(g: &GameStructure, states: usize, seed: u64) -> MooreMachine {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..states).map(|s| format!("s{s}")).collect();
    let mut update = Vec::new();
    let mut output = Vec::new();
    for s in 0..states {
        for v in 0..g.num_vertices() {
            update.push(((s, v), rng.random_range(0..states)));
            if g.owner(v) == Player::P2 {
                let succs = g.successors(v);
                output.push(((s, v), succs[rng.random_range(0..succs.len())]));
            }
        }
    }
    MooreMachine::from_parts(Player::P2, labels, 0, update, output).expect("valid random machine")
}
