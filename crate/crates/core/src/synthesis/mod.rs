//! Equilibrium strategies from a witness run and punishment strategies, and
//! a check that a given profile is a Nash equilibrium.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::automata::ltl_to_dpw_with_cap;
use crate::equilibrium::check_punishing_secure;
use crate::error::{Error, Result};
use crate::game::{run_profile, Cgs, JointAction, Lasso, LtlGame, ParityGame, StrategyTransducer};
use crate::graph;
use crate::ltl::eval_lasso;
use crate::solver::{has_cycle_with_min_parity, PunishmentResult};

/// The machine generating a witness run: one state per lasso position,
/// emitting that position's joint action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTransducer {
    pub initial: usize,
    pub next: Vec<usize>,
    pub output: Vec<JointAction>,
}

impl WitnessTransducer {
    pub fn new(lasso: &Lasso) -> Self {
        let m = lasso.prefix.len() + lasso.cycle.len();
        let next = (0..m).map(|k| if k + 1 < m { k + 1 } else { lasso.prefix.len() }).collect();
        WitnessTransducer { initial: 0, next, output: lasso.steps().map(|(_, ja)| ja.clone()).collect() }
    }

    pub fn num_states(&self) -> usize {
        self.output.len()
    }
}

/// Who is being punished: nobody yet, or a loser.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Flag {
    OnPath,
    Punish(usize),
}

/// A synthesized profile. All transducers share their internal states,
/// which are `(game state, witness position, flag)` triples described by
/// `state_names`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesizedProfile {
    pub transducers: Vec<StrategyTransducer>,
    pub state_names: Vec<String>,
    /// Game-state component of each internal state.
    pub game_state: Vec<usize>,
}

/// Builds one transducer per player that follows the witness and, as soon
/// as a loser deviates, plays the coalition's punishing profile against
/// that loser forever.
///
/// Completions outside the cases that matter for the equilibrium: when
/// several players deviate at once the lowest deviating loser is punished;
/// when only winners deviate, the lowest loser is punished if there is one,
/// otherwise play carries on with the witness position counter, using the
/// witness action when it is available and the lowest available action
/// otherwise. In punishing mode outside the punishment region the lowest
/// available action is played.
///
/// `pun` must hold the punishment results of all losers.
pub fn synthesize_profile(
    g: &ParityGame,
    winners: &[usize],
    witness: &Lasso,
    pun: &[&PunishmentResult],
) -> Result<SynthesizedProfile> {
    let cgs = &g.cgs;
    let n = cgs.num_players();
    let losers: Vec<usize> = (0..n).filter(|i| !winners.contains(i)).collect();
    let pun_of = |j: usize| pun.iter().find(|p| p.player == j).copied();
    if !witness.is_consistent(cgs) {
        return Err(Error::Refused("the witness is not a run of the game".into()));
    }
    for &j in &losers {
        let p = pun_of(j).ok_or_else(|| Error::Refused(format!("no punishment region for player {}", cgs.players[j])))?;
        if !check_punishing_secure(g, witness, j, p) {
            return Err(Error::Refused(format!(
                "the witness is not punishing secure for player {}",
                cgs.players[j]
            )));
        }
    }
    let eta = WitnessTransducer::new(witness);
    let steps: Vec<usize> = witness.steps().map(|(s, _)| *s).collect();
    let lowest = |s: usize, i: usize| cgs.available(s, i)[0];
    let output = |s: usize, k: usize, f: Flag, i: usize| -> usize {
        match f {
            Flag::OnPath => {
                let a = eta.output[k][i];
                if steps[k] == s || cgs.available(s, i).binary_search(&a).is_ok() {
                    a
                } else {
                    lowest(s, i)
                }
            }
            Flag::Punish(j) if i != j => match pun_of(j).and_then(|p| p.punish_strategy[s].as_ref()) {
                Some(partial) => partial[i],
                None => lowest(s, i),
            },
            Flag::Punish(_) => lowest(s, i),
        }
    };

    let mut states: IndexSet<(usize, usize, Flag)> = IndexSet::new();
    states.insert((cgs.initial, eta.initial, Flag::OnPath));
    let mut delta: Vec<BTreeMap<JointAction, usize>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (s, pos, f) = states[k];
        let expected: JointAction = (0..n).map(|i| output(s, pos, f, i)).collect();
        let mut row = BTreeMap::new();
        for (b, t) in cgs.moves(s) {
            let next = match f {
                Flag::Punish(j) => (t, 0, Flag::Punish(j)),
                Flag::OnPath => {
                    let deviators: Vec<usize> = (0..n).filter(|&i| b[i] != expected[i]).collect();
                    if deviators.is_empty() {
                        (t, eta.next[pos], Flag::OnPath)
                    } else if let Some(&j) = deviators.iter().find(|d| losers.contains(d)) {
                        (t, 0, Flag::Punish(j))
                    } else if let Some(&j) = losers.first() {
                        (t, 0, Flag::Punish(j))
                    } else {
                        (t, eta.next[pos], Flag::OnPath)
                    }
                }
            };
            row.insert(b, states.insert_full(next).0);
        }
        delta.push(row);
        k += 1;
    }
    let transducers = (0..n)
        .map(|i| StrategyTransducer {
            player: i,
            initial: 0,
            output: states.iter().map(|&(s, pos, f)| output(s, pos, f, i)).collect(),
            delta: delta.clone(),
        })
        .collect();
    let state_names = states
        .iter()
        .map(|&(s, pos, f)| match f {
            Flag::OnPath => format!("{}@{pos}", cgs.state_names[s]),
            Flag::Punish(j) => format!("{}!{}", cgs.state_names[s], cgs.players[j]),
        })
        .collect();
    Ok(SynthesizedProfile {
        transducers,
        state_names,
        game_state: states.iter().map(|&(s, _, _)| s).collect(),
    })
}

/// Whether `profile` is a Nash equilibrium of `g`: no player whose goal
/// fails on the outcome can reach a run satisfying its goal by deviating
/// while the others keep their transducers.
pub fn validate_equilibrium(g: &LtlGame, profile: &[StrategyTransducer]) -> Result<bool> {
    validate_equilibrium_with_cap(g, profile, crate::automata::DEFAULT_AUTOMATON_CAP)
}

pub fn validate_equilibrium_with_cap(g: &LtlGame, profile: &[StrategyTransducer], cap: usize) -> Result<bool> {
    let cgs = &g.cgs;
    let outcome = run_profile(cgs, profile)?;
    let word = outcome.word(&g.labels);
    for j in 0..cgs.num_players() {
        if eval_lasso(&g.goals[j], &word) {
            continue;
        }
        let d = ltl_to_dpw_with_cap(&g.goals[j], cap)?;
        let start = (cgs.initial, profile.iter().map(|t| t.initial).collect::<Vec<_>>(), d.initial);
        let mut vertices: IndexSet<(usize, Vec<usize>, usize)> = IndexSet::new();
        vertices.insert(start);
        let mut succ: graph::Adjacency = Vec::new();
        let mut k = 0;
        while k < vertices.len() {
            let (s, mem, q) = vertices[k].clone();
            let q2 = d.step_label(q, &g.labels[s]);
            let mut row = Vec::new();
            for &a in cgs.available(s, j) {
                let b: JointAction =
                    (0..cgs.num_players()).map(|i| if i == j { a } else { profile[i].output[mem[i]] }).collect();
                let t = cgs.tr(s, &b).ok_or_else(|| {
                    Error::InvalidStrategy(format!("unavailable action at {}", cgs.state_names[s]))
                })?;
                let mem2 = next_memories(cgs, profile, &mem, &b, j)?;
                row.push(vertices.insert_full((t, mem2, q2)).0);
            }
            row.sort_unstable();
            row.dedup();
            succ.push(row);
            k += 1;
        }
        let prio: Vec<u32> = vertices.iter().map(|(_, _, q)| d.priority[*q]).collect();
        if has_cycle_with_min_parity(&succ, &prio, &graph::full_set(succ.len()), Some(&[0]), 0) {
            log::info!("player {} has a profitable deviation", cgs.players[j]);
            return Ok(false);
        }
    }
    Ok(true)
}

fn next_memories(cgs: &Cgs, profile: &[StrategyTransducer], mem: &[usize], b: &[usize], j: usize) -> Result<Vec<usize>> {
    mem.iter()
        .enumerate()
        .map(|(i, &m)| {
            if i == j {
                // the deviator's own transducer plays no part
                return Ok(0);
            }
            profile[i].next(m, b).ok_or_else(|| {
                Error::InvalidStrategy(format!(
                    "strategy of player {} has no move on {:?}",
                    cgs.players[i],
                    cgs.joint_action_names(b)
                ))
            })
        })
        .collect()
}

/// Serialisable form of one transducer with readable names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransducerDoc {
    pub player: String,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<TransitionDoc>,
    pub output: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub on: Vec<String>,
    pub to: String,
}

pub fn transducer_doc(cgs: &Cgs, profile: &SynthesizedProfile, i: usize) -> TransducerDoc {
    let t = &profile.transducers[i];
    let names = &profile.state_names;
    TransducerDoc {
        player: cgs.players[t.player].clone(),
        states: names.clone(),
        initial: names[t.initial].clone(),
        transitions: t
            .delta
            .iter()
            .enumerate()
            .flat_map(|(m, row)| {
                row.iter().map(move |(b, &to)| TransitionDoc {
                    from: names[m].clone(),
                    on: cgs.joint_action_names(b),
                    to: names[to].clone(),
                })
            })
            .collect(),
        output: t
            .output
            .iter()
            .enumerate()
            .map(|(m, &a)| (names[m].clone(), cgs.action_name(t.player, a).to_string()))
            .collect(),
    }
}

pub fn transducer_dot(cgs: &Cgs, profile: &SynthesizedProfile, i: usize) -> String {
    let t = &profile.transducers[i];
    let mut out = format!("digraph \"{}\" {{\n  rankdir=LR;\n", cgs.players[t.player]);
    for (m, name) in profile.state_names.iter().enumerate() {
        let _ = writeln!(
            out,
            "  q{m} [label=\"{}\\n{}\"{}];",
            name.replace('"', "'"),
            cgs.action_name(t.player, t.output[m]),
            if m == t.initial { ", shape=doublecircle" } else { "" }
        );
    }
    for (m, row) in t.delta.iter().enumerate() {
        let mut grouped: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (b, &to) in row {
            grouped.entry(to).or_default().push(cgs.joint_action_names(b).join(","));
        }
        for (to, labels) in grouped {
            let _ = writeln!(out, "  q{m} -> q{to} [label=\"{}\"];", labels.join("\\n"));
        }
    }
    out.push_str("}\n");
    out
}
