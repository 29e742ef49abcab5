use indexmap::IndexSet;

use super::{Cgs, LtlGame, ParityGame};
use crate::automata::Dpw;
use crate::error::{Error, Result};

/// Default bound on the number of product states.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// The parity game of an LTL game: states pair a game state with one state
/// of each goal automaton, the automata read the label of the state being
/// left, and player `i`'s priority is that of its automaton component.
/// Only the part reachable from `(s0, q_1^0, ..., q_n^0)` is built.
pub fn product_game(g: &LtlGame, dpws: &[Dpw]) -> Result<ParityGame> {
    product_game_with_cap(g, dpws, DEFAULT_STATE_CAP)
}

pub fn product_game_with_cap(g: &LtlGame, dpws: &[Dpw], cap: usize) -> Result<ParityGame> {
    let cgs = &g.cgs;
    if dpws.len() != cgs.num_players() {
        return Err(Error::Arena("one automaton per player expected".into()));
    }
    let mut states: IndexSet<(usize, Vec<usize>)> = IndexSet::new();
    states.insert((cgs.initial, dpws.iter().map(|d| d.initial).collect()));
    let mut succ = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (s, qs) = states[k].clone();
        let next_q: Vec<usize> = dpws
            .iter()
            .zip(&qs)
            .map(|(d, &q)| d.step_label(q, &g.labels[s]))
            .collect();
        let row: Vec<usize> = cgs
            .moves(s)
            .map(|(_, t)| states.insert_full((t, next_q.clone())).0)
            .collect();
        succ.push(row);
        if states.len() > cap {
            return Err(Error::StateCapExceeded { cap, what: "product game" });
        }
        k += 1;
    }
    let names = states
        .iter()
        .map(|(s, qs)| {
            let qs: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
            format!("{}[{}]", cgs.state_names[*s], qs.join(","))
        })
        .collect();
    let available = states
        .iter()
        .map(|(s, _)| (0..cgs.num_players()).map(|i| cgs.available(*s, i).to_vec()).collect())
        .collect();
    let priority = (0..cgs.num_players())
        .map(|i| states.iter().map(|(_, qs)| dpws[i].priority[qs[i]]).collect())
        .collect();
    let product = Cgs::from_dense(
        cgs.players.clone(),
        cgs.actions.clone(),
        names,
        0,
        available,
        succ,
    );
    Ok(ParityGame {
        cgs: product,
        priority,
        base: states.iter().map(|(s, _)| *s).collect(),
        automaton_states: states.into_iter().map(|(_, qs)| qs).collect(),
    })
}
