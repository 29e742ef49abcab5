use fixedbitset::FixedBitSet;

use super::{zielonka, TurnBasedParityGame, WinningRegions, NO_MOVE};
use crate::game::{JointAction, ParityGame};

/// The sequentialisation of a concurrent parity game against player `j`,
/// together with the meaning of each vertex.
#[derive(Clone, Debug)]
pub struct Sequentialised {
    pub game: TurnBasedParityGame,
    pub player: usize,
    /// Vertices `0..num_states` are the game states; the rest are
    /// `(state, partial profile)` pairs listed here in vertex order.
    pub profiles: Vec<(usize, JointAction)>,
}

impl Sequentialised {
    pub fn num_states(&self) -> usize {
        self.game.num_vertices() - self.profiles.len()
    }
}

/// Player 0 is the coalition of everyone but `j` and moves at the game
/// states by choosing an available partial profile; player 1 answers with
/// one of `j`'s actions. Priorities are `α_j + 1`, so player 0 wins exactly
/// when `j`'s objective fails.
pub fn sequentialise(g: &ParityGame, j: usize) -> Sequentialised {
    let cgs = &g.cgs;
    let n = cgs.num_states();
    let mut owner = vec![0u8; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut priority: Vec<u32> = g.priority[j].iter().map(|p| p + 1).collect();
    let mut names = cgs.state_names.clone();
    let mut profiles = Vec::new();
    for s in 0..n {
        for partial in cgs.partial_profiles(s, j) {
            let v = n + profiles.len();
            succ[s].push(v);
            let mut targets: Vec<usize> = cgs
                .available(s, j)
                .iter()
                .map(|&a| {
                    let mut ja = partial.clone();
                    ja[j] = a;
                    cgs.tr(s, &ja).expect("available joint action")
                })
                .collect();
            targets.sort_unstable();
            targets.dedup();
            owner.push(1);
            succ.push(targets);
            priority.push(g.priority[j][s] + 1);
            names.push(format!("{}/({})", cgs.state_names[s], cgs.joint_action_names(&partial).join(",")));
            profiles.push((s, partial));
        }
    }
    Sequentialised { game: TurnBasedParityGame::new(owner, succ, priority, names), player: j, profiles }
}

/// `Pun_j`: the states from which the other players can prevent `j` from
/// meeting its objective, with a memoryless punishing partial profile for
/// each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunishmentResult {
    pub player: usize,
    pub region: FixedBitSet,
    /// Defined exactly on the region; entry `player` is [`crate::game::FREE`].
    pub punish_strategy: Vec<Option<JointAction>>,
}

impl PunishmentResult {
    pub fn contains(&self, s: usize) -> bool {
        self.region.contains(s)
    }
}

pub fn punishment_region(g: &ParityGame, j: usize) -> PunishmentResult {
    let seq = sequentialise(g, j);
    let regions: WinningRegions = zielonka(&seq.game);
    debug_assert!(super::certify(&seq.game, &regions));
    let n = seq.num_states();
    let mut region = FixedBitSet::with_capacity(n);
    let mut punish_strategy = vec![None; n];
    for s in 0..n {
        if regions.win0.contains(s) {
            region.insert(s);
            let v = regions.strategy[s];
            assert_ne!(v, NO_MOVE, "winning coalition vertex without a move");
            punish_strategy[s] = Some(seq.profiles[v - n].1.clone());
        }
    }
    PunishmentResult { player: j, region, punish_strategy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::adder;
    use crate::game::FREE;

    fn parity(cgs: crate::game::Cgs, prio: Vec<Vec<u32>>) -> ParityGame {
        ParityGame::new(cgs, prio).unwrap()
    }

    #[test]
    fn vertex_counts_and_priorities() {
        let g = parity(adder(3), vec![vec![0, 1, 2], vec![1, 1, 1]]);
        let seq = sequentialise(&g, 0);
        assert_eq!(seq.num_states(), 3);
        assert_eq!(seq.profiles.len(), 3 * 2);
        assert_eq!(seq.game.priority[0], 1);
        let v = seq.game.succ[0][0];
        assert_eq!(seq.game.priority[v], 1);
        assert_eq!(seq.profiles[v - 3], (0, vec![FREE, 0]));
    }

    #[test]
    fn trivial_objectives() {
        let odd = punishment_region(&parity(adder(3), vec![vec![1; 3], vec![0; 3]]), 0);
        assert_eq!(odd.region.count_ones(..), 3);
        assert!(odd.punish_strategy.iter().all(|p| p.as_ref().is_some_and(|p| p[0] == FREE)));
        let even = punishment_region(&parity(adder(3), vec![vec![0; 3], vec![0; 3]]), 0);
        assert_eq!(even.region.count_ones(..), 0);
    }

    #[test]
    fn adder_player_can_always_escape() {
        // player 1 wants to visit s0 infinitely often; with the sum mod 3 the
        // coalition cannot stop it
        let g = parity(adder(3), vec![vec![0, 1, 1], vec![0; 3]]);
        assert_eq!(punishment_region(&g, 0).region.count_ones(..), 0);
    }
}
