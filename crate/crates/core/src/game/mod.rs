//! Concurrent game structures, LTL and parity games, the product with goal
//! automata, strategy transducers and bisimulation.

mod arena;
mod bisim;
mod product;
mod strategy;

pub use arena::parse_arena;
pub use bisim::check_bisimilar;
pub use product::{product_game, product_game_with_cap, DEFAULT_STATE_CAP};
pub use strategy::{run_profile, Lasso, StrategyTransducer};

use crate::error::{Error, Result};
use crate::ltl::{Label, LtlFormula};

/// One action id per player, indexing the player's action alphabet.
pub type JointAction = Vec<usize>;

/// Marks the missing entry of a partial profile `ā_{-j}`.
pub const FREE: usize = usize::MAX;

/// A concurrent game structure with named players, actions and states.
///
/// Transitions are stored densely per state, indexed by the positions of
/// the players' actions in their availability lists (first player most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cgs {
    pub players: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub state_names: Vec<String>,
    pub initial: usize,
    available: Vec<Vec<Vec<usize>>>,
    succ: Vec<Vec<usize>>,
}

impl Cgs {
    /// Builds the structure, asking `transition` for the successor of every
    /// available joint action.
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        state_names: Vec<String>,
        initial: usize,
        available: Vec<Vec<Vec<usize>>>,
        mut transition: impl FnMut(usize, &JointAction) -> Result<usize>,
    ) -> Result<Cgs> {
        let n = players.len();
        if n == 0 {
            return Err(Error::Arena("a game needs at least one player".into()));
        }
        if actions.len() != n {
            return Err(Error::Arena("one action alphabet per player expected".into()));
        }
        if initial >= state_names.len() {
            return Err(Error::Arena("initial state out of range".into()));
        }
        if available.len() != state_names.len() {
            return Err(Error::Arena("availability missing for some state".into()));
        }
        let mut available = available;
        for (s, per) in available.iter_mut().enumerate() {
            if per.len() != n {
                return Err(Error::Arena(format!("state {}: availability per player expected", state_names[s])));
            }
            for (i, acts) in per.iter_mut().enumerate() {
                acts.sort_unstable();
                acts.dedup();
                if acts.is_empty() {
                    return Err(Error::Arena(format!(
                        "player {} has no action at state {}",
                        players[i], state_names[s]
                    )));
                }
                if acts.iter().any(|&a| a >= actions[i].len()) {
                    return Err(Error::Arena(format!("unknown action for player {}", players[i])));
                }
            }
        }
        let mut cgs = Cgs { players, actions, state_names, initial, available, succ: Vec::new() };
        let mut succ = Vec::with_capacity(cgs.num_states());
        for s in 0..cgs.num_states() {
            let mut row = Vec::with_capacity(cgs.num_joint(s));
            for ja in cgs.joint_actions(s) {
                let t = transition(s, &ja)?;
                if t >= cgs.num_states() {
                    return Err(Error::Arena(format!("transition from {} to unknown state", cgs.state_names[s])));
                }
                row.push(t);
            }
            succ.push(row);
        }
        cgs.succ = succ;
        Ok(cgs)
    }

    /// Assembles a structure whose successor rows are already in dense
    /// order; availability lists must be sorted and nonempty.
    pub(crate) fn from_dense(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        state_names: Vec<String>,
        initial: usize,
        available: Vec<Vec<Vec<usize>>>,
        succ: Vec<Vec<usize>>,
    ) -> Cgs {
        let cgs = Cgs { players, actions, state_names, initial, available, succ };
        debug_assert!((0..cgs.num_states()).all(|s| cgs.succ[s].len() == cgs.num_joint(s)));
        cgs
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    /// `Ac_i(s)`, sorted.
    pub fn available(&self, s: usize, i: usize) -> &[usize] {
        &self.available[s][i]
    }

    pub fn is_available(&self, s: usize, ja: &[usize]) -> bool {
        ja.len() == self.num_players()
            && ja.iter().enumerate().all(|(i, a)| self.available[s][i].binary_search(a).is_ok())
    }

    /// Number of available joint actions at `s`.
    pub fn num_joint(&self, s: usize) -> usize {
        self.available[s].iter().map(|a| a.len()).product()
    }

    /// Number of (state, available joint action) pairs.
    pub fn edge_count(&self) -> usize {
        (0..self.num_states()).map(|s| self.num_joint(s)).sum()
    }

    fn index_of(&self, s: usize, ja: &[usize]) -> Option<usize> {
        if ja.len() != self.num_players() {
            return None;
        }
        let mut idx = 0;
        for (i, a) in ja.iter().enumerate() {
            let avail = &self.available[s][i];
            idx = idx * avail.len() + avail.binary_search(a).ok()?;
        }
        Some(idx)
    }

    /// The joint action stored at dense position `idx` of state `s`.
    pub fn joint_at(&self, s: usize, mut idx: usize) -> JointAction {
        let n = self.num_players();
        let mut ja = vec![0; n];
        for i in (0..n).rev() {
            let avail = &self.available[s][i];
            ja[i] = avail[idx % avail.len()];
            idx /= avail.len();
        }
        ja
    }

    /// Available joint actions at `s` in lexicographic order.
    pub fn joint_actions(&self, s: usize) -> impl Iterator<Item = JointAction> + '_ {
        (0..self.num_joint(s)).map(move |k| self.joint_at(s, k))
    }

    /// `tr(s, ā)`; `None` when `ā` is not available at `s`.
    pub fn tr(&self, s: usize, ja: &[usize]) -> Option<usize> {
        self.index_of(s, ja).map(|k| self.succ[s][k])
    }

    /// `(joint action, successor)` pairs of `s` in lexicographic order.
    pub fn moves(&self, s: usize) -> impl Iterator<Item = (JointAction, usize)> + '_ {
        (0..self.num_joint(s)).map(move |k| (self.joint_at(s, k), self.succ[s][k]))
    }

    /// Distinct successor states, sorted.
    pub fn successors(&self, s: usize) -> Vec<usize> {
        let mut v = self.succ[s].clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Partial profiles `ā_{-j}` available at `s` (entry `j` is [`FREE`]),
    /// in lexicographic order.
    pub fn partial_profiles(&self, s: usize, j: usize) -> Vec<JointAction> {
        let mut out: Vec<JointAction> = vec![Vec::new()];
        for i in 0..self.num_players() {
            let choices: Vec<usize> = if i == j { vec![FREE] } else { self.available[s][i].clone() };
            out = out
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn action_name(&self, i: usize, a: usize) -> &str {
        &self.actions[i][a]
    }

    pub fn joint_action_names(&self, ja: &[usize]) -> Vec<String> {
        ja.iter()
            .enumerate()
            .map(|(i, &a)| if a == FREE { "*".to_string() } else { self.actions[i][a].clone() })
            .collect()
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    /// Reachable states from the initial one.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for t in self.successors(s) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

/// Returns `ja` with player `j`'s entry replaced by `a`.
pub fn with_action(ja: &[usize], j: usize, a: usize) -> JointAction {
    let mut v = ja.to_vec();
    v[j] = a;
    v
}

/// A concurrent game with one LTL goal per player and an optional query.
#[derive(Clone, Debug)]
pub struct LtlGame {
    pub cgs: Cgs,
    pub labels: Vec<Label>,
    pub goals: Vec<LtlFormula>,
    pub query: Option<LtlFormula>,
}

impl LtlGame {
    pub fn new(cgs: Cgs, labels: Vec<Label>, goals: Vec<LtlFormula>) -> Result<Self> {
        if labels.len() != cgs.num_states() {
            return Err(Error::Arena("labelling must cover every state".into()));
        }
        if goals.len() != cgs.num_players() {
            return Err(Error::Arena("one goal per player expected".into()));
        }
        Ok(LtlGame { cgs, labels, goals, query: None })
    }

    /// All propositions used by labels and goals.
    pub fn propositions(&self) -> std::collections::BTreeSet<String> {
        let mut ap: std::collections::BTreeSet<String> =
            self.labels.iter().flat_map(|l| l.iter().cloned()).collect();
        for g in &self.goals {
            ap.extend(g.atoms());
        }
        ap
    }
}

/// A concurrent game with one min-even parity objective per player.
#[derive(Clone, Debug)]
pub struct ParityGame {
    pub cgs: Cgs,
    /// `priority[i][s]`
    pub priority: Vec<Vec<u32>>,
    /// For products: the LTL-game state each state projects to.
    pub base: Vec<usize>,
    /// For products: the goal automata states (empty otherwise).
    pub automaton_states: Vec<Vec<usize>>,
}

impl ParityGame {
    pub fn new(cgs: Cgs, priority: Vec<Vec<u32>>) -> Result<Self> {
        if priority.len() != cgs.num_players() || priority.iter().any(|p| p.len() != cgs.num_states()) {
            return Err(Error::Arena("one total priority function per player expected".into()));
        }
        let base = (0..cgs.num_states()).collect();
        let automaton_states = vec![Vec::new(); cgs.num_states()];
        Ok(ParityGame { cgs, priority, base, automaton_states })
    }

    /// Whether the least priority of player `i` on `cycle` is even.
    pub fn satisfies(&self, i: usize, cycle: &[usize]) -> bool {
        cycle.iter().map(|&s| self.priority[i][s]).min().is_some_and(|p| p % 2 == 0)
    }
}
