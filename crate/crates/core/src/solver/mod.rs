//! Two-player turn-based parity games: attractors, Zielonka's algorithm
//! with memoryless strategies, and the punishment regions of a concurrent
//! parity game obtained through sequentialisation.

mod punish;

pub use punish::{punishment_region, sequentialise, PunishmentResult, Sequentialised};

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::graph::{self, Adjacency};

/// Marks the absence of a strategy choice.
pub const NO_MOVE: usize = usize::MAX;

/// `(V0, V1, E, α)` with `owner[v]` telling which player moves at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnBasedParityGame {
    pub owner: Vec<u8>,
    pub succ: Adjacency,
    pub priority: Vec<u32>,
    pub names: Vec<String>,
}

/// Winning regions and memoryless strategies; `strategy[v]` is the chosen
/// successor of `v` when `v` belongs to the winner of its region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningRegions {
    pub win0: FixedBitSet,
    pub win1: FixedBitSet,
    pub strategy: Vec<usize>,
}

impl WinningRegions {
    pub fn winner(&self, v: usize) -> u8 {
        if self.win0.contains(v) {
            0
        } else {
            1
        }
    }
}

impl TurnBasedParityGame {
    /// Panics when a vertex has no successor or an owner is not 0/1.
    pub fn new(owner: Vec<u8>, succ: Adjacency, priority: Vec<u32>, names: Vec<String>) -> Self {
        assert_eq!(owner.len(), succ.len());
        assert_eq!(owner.len(), priority.len());
        assert_eq!(owner.len(), names.len());
        assert!(owner.iter().all(|&o| o < 2), "owners are 0 or 1");
        assert!(succ.iter().all(|s| !s.is_empty()), "every vertex needs a successor");
        TurnBasedParityGame { owner, succ, priority, names }
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    fn predecessors(&self) -> Adjacency {
        let mut pred = vec![Vec::new(); self.num_vertices()];
        for (v, ss) in self.succ.iter().enumerate() {
            for &w in ss {
                pred[w].push(v);
            }
        }
        for p in pred.iter_mut() {
            p.sort_unstable();
            p.dedup();
        }
        pred
    }

    /// PGSolver-style listing: `id priority owner successors "name";`
    /// (priorities follow the min-even convention).
    pub fn to_pgsolver(&self) -> String {
        let mut out = format!("parity {};\n", self.num_vertices().saturating_sub(1));
        for v in 0..self.num_vertices() {
            let succ: Vec<String> = self.succ[v].iter().map(|w| w.to_string()).collect();
            let _ = writeln!(
                out,
                "{v} {} {} {} \"{}\";",
                self.priority[v],
                self.owner[v],
                succ.join(","),
                self.names[v].replace('"', "'")
            );
        }
        out
    }
}

struct Solver<'a> {
    g: &'a TurnBasedParityGame,
    pred: Adjacency,
}

impl Solver<'_> {
    /// Attractor of `target` for `player` inside the subgame `within`, with
    /// the attracting move of each of the player's vertices (lowest
    /// successor of smaller rank).
    fn attractor(&self, player: u8, target: &FixedBitSet, within: &FixedBitSet) -> (FixedBitSet, Vec<(usize, usize)>) {
        let g = self.g;
        let n = g.num_vertices();
        let mut rank = vec![usize::MAX; n];
        let mut attr = FixedBitSet::with_capacity(n);
        let mut frontier: Vec<usize> = Vec::new();
        for v in target.ones() {
            if within.contains(v) {
                attr.insert(v);
                rank[v] = 0;
                frontier.push(v);
            }
        }
        let mut remaining: Vec<usize> = (0..n)
            .map(|v| if within.contains(v) { g.succ[v].iter().filter(|&&w| within.contains(w)).count() } else { 0 })
            .collect();
        let mut layer = 0;
        while !frontier.is_empty() {
            layer += 1;
            let mut next = Vec::new();
            for &w in &frontier {
                for &v in &self.pred[w] {
                    if !within.contains(v) || attr.contains(v) {
                        continue;
                    }
                    let add = if g.owner[v] == player {
                        true
                    } else {
                        remaining[v] -= g.succ[v].iter().filter(|&&x| x == w).count();
                        remaining[v] == 0
                    };
                    if add {
                        attr.insert(v);
                        rank[v] = layer;
                        next.push(v);
                    }
                }
            }
            next.sort_unstable();
            frontier = next;
        }
        let moves = attr
            .ones()
            .filter(|&v| g.owner[v] == player && rank[v] > 0)
            .map(|v| {
                let w = g.succ[v]
                    .iter()
                    .copied()
                    .filter(|&w| attr.contains(w) && rank[w] < rank[v])
                    .min()
                    .expect("attracting successor");
                (v, w)
            })
            .collect();
        (attr, moves)
    }

    fn solve(&self, within: &FixedBitSet) -> WinningRegions {
        let g = self.g;
        let n = g.num_vertices();
        let mut result = WinningRegions {
            win0: FixedBitSet::with_capacity(n),
            win1: FixedBitSet::with_capacity(n),
            strategy: vec![NO_MOVE; n],
        };
        let Some(p) = within.ones().map(|v| g.priority[v]).min() else {
            return result;
        };
        let x = (p % 2) as u8;
        let mut top = FixedBitSet::with_capacity(n);
        for v in within.ones().filter(|&v| g.priority[v] == p) {
            top.insert(v);
        }
        let (a, a_moves) = self.attractor(x, &top, within);
        let mut rest = within.clone();
        rest.difference_with(&a);
        let sub = self.solve(&rest);
        let sub_opp = if x == 0 { &sub.win1 } else { &sub.win0 };
        if sub_opp.is_clear() {
            // x wins everywhere in `within`
            let win = if x == 0 { &mut result.win0 } else { &mut result.win1 };
            win.union_with(within);
            result.strategy.copy_from_slice(&sub.strategy);
            for (v, w) in a_moves {
                result.strategy[v] = w;
            }
            for v in top.ones().filter(|&v| g.owner[v] == x) {
                result.strategy[v] = g.succ[v].iter().copied().filter(|&w| within.contains(w)).min().expect("subgame is total");
            }
            return result;
        }
        let (b, b_moves) = self.attractor(1 - x, sub_opp, within);
        let mut rest2 = within.clone();
        rest2.difference_with(&b);
        let sub2 = self.solve(&rest2);
        result.strategy.copy_from_slice(&sub2.strategy);
        for v in sub_opp.ones() {
            result.strategy[v] = sub.strategy[v];
        }
        for (v, w) in b_moves {
            result.strategy[v] = w;
        }
        result.win0 = sub2.win0;
        result.win1 = sub2.win1;
        let opp = if x == 0 { &mut result.win1 } else { &mut result.win0 };
        opp.union_with(&b);
        result
    }
}

/// Vertices from which `player` can force a visit to `target`.
pub fn attractor(g: &TurnBasedParityGame, player: u8, target: &FixedBitSet) -> FixedBitSet {
    let solver = Solver { g, pred: g.predecessors() };
    solver.attractor(player, target, &graph::full_set(g.num_vertices())).0
}

/// Zielonka's recursive algorithm for min-even parity games.
pub fn zielonka(g: &TurnBasedParityGame) -> WinningRegions {
    let solver = Solver { g, pred: g.predecessors() };
    solver.solve(&graph::full_set(g.num_vertices()))
}

/// Whether some cycle inside `within` (reachable from `from` when given) has
/// a least priority of the given parity.
pub fn has_cycle_with_min_parity(
    succ: &Adjacency,
    priority: &[u32],
    within: &FixedBitSet,
    from: Option<&[usize]>,
    parity: u32,
) -> bool {
    let scope = match from {
        Some(start) => graph::reachable(succ, start, within),
        None => within.clone(),
    };
    let mut candidates: Vec<u32> =
        scope.ones().map(|v| priority[v]).filter(|p| p % 2 == parity).collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.into_iter().any(|p| {
        let mut sub = FixedBitSet::with_capacity(succ.len());
        for v in scope.ones().filter(|&v| priority[v] >= p) {
            sub.insert(v);
        }
        graph::sccs(succ, &sub)
            .iter()
            .any(|c| graph::is_nontrivial(succ, c) && c.iter().any(|&v| priority[v] == p))
    })
}

/// Checks the regions: they partition the vertices, each winner's
/// strategy stays in its region and the region is a trap for the loser,
/// and with the strategy fixed the loser has no cycle of its own parity.
pub fn certify(g: &TurnBasedParityGame, r: &WinningRegions) -> bool {
    let n = g.num_vertices();
    if r.win0.count_ones(..) + r.win1.count_ones(..) != n || !r.win0.is_disjoint(&r.win1) {
        return false;
    }
    for (player, region) in [(0u8, &r.win0), (1u8, &r.win1)] {
        let mut succ: Adjacency = vec![Vec::new(); n];
        for v in region.ones() {
            if g.owner[v] == player {
                let w = r.strategy[v];
                if w == NO_MOVE || !g.succ[v].contains(&w) || !region.contains(w) {
                    return false;
                }
                succ[v] = vec![w];
            } else {
                if g.succ[v].iter().any(|&w| !region.contains(w)) {
                    return false;
                }
                succ[v] = g.succ[v].clone();
            }
        }
        if has_cycle_with_min_parity(&succ, &g.priority, region, None, 1 - player as u32) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(owner: &[u8], succ: &[&[usize]], priority: &[u32]) -> TurnBasedParityGame {
        TurnBasedParityGame::new(
            owner.to_vec(),
            succ.iter().map(|s| s.to_vec()).collect(),
            priority.to_vec(),
            (0..owner.len()).map(|v| format!("v{v}")).collect(),
        )
    }

    fn set(n: usize, vs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &v in vs {
            s.insert(v);
        }
        s
    }

    #[test]
    fn attractor_edge_cases() {
        let g = game(&[0, 0, 0], &[&[1], &[2], &[2]], &[0, 0, 0]);
        assert_eq!(attractor(&g, 0, &set(3, &[0, 1, 2])), set(3, &[0, 1, 2]));
        assert_eq!(attractor(&g, 0, &set(3, &[])), set(3, &[]));
        assert_eq!(attractor(&g, 0, &set(3, &[2])), set(3, &[0, 1, 2]));
    }

    #[test]
    fn opponent_must_be_forced() {
        // v0 (player 1) may escape to v1 which loops
        let g = game(&[1, 1, 0], &[&[1, 2], &[1], &[2]], &[0, 0, 0]);
        assert_eq!(attractor(&g, 0, &set(3, &[2])), set(3, &[2]));
        assert_eq!(attractor(&g, 1, &set(3, &[2])), set(3, &[0, 2]));
    }

    #[test]
    fn self_loops() {
        let even = zielonka(&game(&[0], &[&[0]], &[0]));
        assert!(even.win0.contains(0));
        let odd = zielonka(&game(&[0], &[&[0]], &[1]));
        assert!(odd.win1.contains(0));
    }

    #[test]
    fn choice_matters() {
        // v0 (player 0) picks between an odd sink v1 and an even sink v2
        let g = game(&[0, 0, 0], &[&[1, 2], &[1], &[2]], &[3, 1, 2]);
        let r = zielonka(&g);
        assert_eq!(r.win0, set(3, &[0, 2]));
        assert_eq!(r.strategy[0], 2);
        assert!(certify(&g, &r));
    }

    #[test]
    fn certification_rejects_bad_strategy() {
        let g = game(&[0, 0, 0], &[&[1, 2], &[1], &[2]], &[3, 1, 2]);
        let mut r = zielonka(&g);
        r.strategy[0] = 1;
        assert!(!certify(&g, &r));
    }

    #[test]
    fn pgsolver_listing() {
        let g = game(&[0, 1], &[&[1], &[0]], &[0, 1]);
        assert_eq!(g.to_pgsolver(), "parity 1;\n0 0 0 1 \"v0\";\n1 1 1 0 \"v1\";\n");
    }
}
