use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Cgs, JointAction};
use crate::error::{Error, Result};
use crate::ltl::{Label, UltimatelyPeriodicWord};

/// A finite-state strategy: internal states updated on the observed joint
/// action, each internal state emitting one action of `player`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyTransducer {
    pub player: usize,
    pub initial: usize,
    /// `τ`: the action emitted in each internal state.
    pub output: Vec<usize>,
    /// `δ`: successor internal state per observed joint action.
    pub delta: Vec<BTreeMap<JointAction, usize>>,
}

impl StrategyTransducer {
    pub fn num_states(&self) -> usize {
        self.output.len()
    }

    /// A one-state strategy that always plays `action`, for a structure
    /// whose joint actions are drawn from `alphabet`.
    pub fn constant(player: usize, action: usize, alphabet: &[JointAction]) -> Self {
        StrategyTransducer {
            player,
            initial: 0,
            output: vec![action],
            delta: vec![alphabet.iter().map(|ja| (ja.clone(), 0)).collect()],
        }
    }

    pub fn next(&self, m: usize, ja: &[usize]) -> Option<usize> {
        self.delta[m].get(ja).copied()
    }
}

/// An ultimately periodic play: `(state, joint action)` steps of a prefix
/// followed by a nonempty cycle that returns to its first state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso {
    pub prefix: Vec<(usize, JointAction)>,
    pub cycle: Vec<(usize, JointAction)>,
}

impl Lasso {
    pub fn steps(&self) -> impl Iterator<Item = &(usize, JointAction)> {
        self.prefix.iter().chain(&self.cycle)
    }

    pub fn cycle_states(&self) -> Vec<usize> {
        self.cycle.iter().map(|(s, _)| *s).collect()
    }

    pub fn prefix_states(&self) -> Vec<usize> {
        self.prefix.iter().map(|(s, _)| *s).collect()
    }

    /// Checks that every step is available, consecutive steps follow `tr`,
    /// and the cycle closes.
    pub fn is_consistent(&self, cgs: &Cgs) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let steps: Vec<_> = self.steps().collect();
        let first = steps[0].0;
        if first != cgs.initial {
            return false;
        }
        for (k, (s, ja)) in steps.iter().enumerate() {
            let next = if k + 1 < steps.len() { steps[k + 1].0 } else { self.cycle[0].0 };
            if cgs.tr(*s, ja) != Some(next) {
                return false;
            }
        }
        true
    }

    /// The word of labels along the play.
    pub fn word(&self, labels: &[Label]) -> UltimatelyPeriodicWord {
        UltimatelyPeriodicWord::new(
            self.prefix.iter().map(|(s, _)| labels[*s].clone()).collect(),
            self.cycle.iter().map(|(s, _)| labels[*s].clone()).collect(),
        )
    }

    /// Replaces every state through `f` (for instance a product projection).
    pub fn map_states(&self, f: impl Fn(usize) -> usize) -> Lasso {
        let m = |v: &Vec<(usize, JointAction)>| v.iter().map(|(s, ja)| (f(*s), ja.clone())).collect();
        Lasso { prefix: m(&self.prefix), cycle: m(&self.cycle) }
    }
}

/// The unique play induced by a strategy profile, closed into a lasso as
/// soon as the pair (game state, internal states) repeats.
pub fn run_profile(cgs: &Cgs, profile: &[StrategyTransducer]) -> Result<Lasso> {
    if profile.len() != cgs.num_players() {
        return Err(Error::InvalidStrategy(format!(
            "{} strategies for {} players",
            profile.len(),
            cgs.num_players()
        )));
    }
    let mut s = cgs.initial;
    let mut mem: Vec<usize> = profile.iter().map(|t| t.initial).collect();
    let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    let mut steps: Vec<(usize, JointAction)> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(s, mem.clone())) {
            let cycle = steps.split_off(start);
            return Ok(Lasso { prefix: steps, cycle });
        }
        seen.insert((s, mem.clone()), steps.len());
        let ja: JointAction = profile.iter().zip(&mem).map(|(t, &m)| t.output[m]).collect();
        for (i, &a) in ja.iter().enumerate() {
            if cgs.available(s, i).binary_search(&a).is_err() {
                return Err(Error::InvalidStrategy(format!(
                    "player {} plays an unavailable action at {}",
                    cgs.players[i], cgs.state_names[s]
                )));
            }
        }
        let t = cgs.tr(s, &ja).expect("available joint action");
        for (i, tr) in profile.iter().enumerate() {
            mem[i] = tr.next(mem[i], &ja).ok_or_else(|| {
                Error::InvalidStrategy(format!(
                    "strategy of player {} has no move on {:?}",
                    cgs.players[i],
                    cgs.joint_action_names(&ja)
                ))
            })?;
        }
        steps.push((s, ja));
        s = t;
    }
}
