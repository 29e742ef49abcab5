//! Random instance generators shared by the oracle tests.
#![allow(dead_code)]

pub mod oracles;

use std::collections::{BTreeMap, HashMap};

use eve_core::game::{Cgs, JointAction, LtlGame, StrategyTransducer};
use eve_core::ltl::{Label, LtlFormula, UltimatelyPeriodicWord};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula with exactly `ops` operators over `atoms`.
pub fn formula(rng: &mut ChaCha8Rng, ops: usize, atoms: &[&str]) -> LtlFormula {
    if ops == 0 {
        return if rng.gen_bool(0.1) {
            LtlFormula::True
        } else {
            LtlFormula::atom(*atoms.choose(rng).unwrap())
        };
    }
    match rng.gen_range(0..8) {
        0 => LtlFormula::not(formula(rng, ops - 1, atoms)),
        1 => LtlFormula::next(formula(rng, ops - 1, atoms)),
        2 => LtlFormula::eventually(formula(rng, ops - 1, atoms)),
        3 => LtlFormula::always(formula(rng, ops - 1, atoms)),
        k => {
            let left = rng.gen_range(0..ops);
            let a = formula(rng, left, atoms);
            let b = formula(rng, ops - 1 - left, atoms);
            match k {
                4 => LtlFormula::and(a, b),
                5 => LtlFormula::or(a, b),
                6 => LtlFormula::implies(a, b),
                _ => LtlFormula::until(a, b),
            }
        }
    }
}

pub fn label(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Label {
    atoms.iter().filter(|_| rng.gen_bool(0.5)).map(|a| a.to_string()).collect()
}

/// A lasso with at most `max_positions` positions in total.
pub fn word(rng: &mut ChaCha8Rng, max_positions: usize, atoms: &[&str]) -> UltimatelyPeriodicWord {
    let total = rng.gen_range(1..=max_positions);
    let cycle_len = rng.gen_range(1..=total);
    let prefix = (0..total - cycle_len).map(|_| label(rng, atoms)).collect();
    let cycle = (0..cycle_len).map(|_| label(rng, atoms)).collect();
    UltimatelyPeriodicWord::new(prefix, cycle)
}

/// A concurrent game on `states` states where each player has the actions
/// `a` and `b` everywhere (or only `a` with some probability) and
/// successors are drawn uniformly.
pub fn cgs(rng: &mut ChaCha8Rng, players: usize, states: usize) -> Cgs {
    let available: Vec<Vec<Vec<usize>>> = (0..states)
        .map(|_| (0..players).map(|_| if rng.gen_bool(0.2) { vec![0] } else { vec![0, 1] }).collect())
        .collect();
    let mut table: HashMap<(usize, JointAction), usize> = HashMap::new();
    Cgs::new(
        (0..players).map(|i| format!("P{i}")).collect(),
        vec![vec!["a".to_string(), "b".to_string()]; players],
        (0..states).map(|s| format!("s{s}")).collect(),
        0,
        available,
        |s, ja| Ok(*table.entry((s, ja.clone())).or_insert_with(|| rng.gen_range(0..states))),
    )
    .unwrap()
}

/// A random LTL game with goals of at most `ops` operators.
pub fn ltl_game(rng: &mut ChaCha8Rng, players: usize, states: usize, ops: usize, atoms: &[&str]) -> LtlGame {
    let c = cgs(rng, players, states);
    let labels = (0..states).map(|_| label(rng, atoms)).collect();
    let goals = (0..players)
        .map(|_| {
            let k = rng.gen_range(1..=ops);
            formula(rng, k, atoms)
        })
        .collect();
    LtlGame::new(c, labels, goals).unwrap()
}

/// A random transducer for player `i` with at most `max_states` internal
/// states. Each internal state remembers the structure state it belongs to
/// so that only available actions are emitted.
pub fn transducer(rng: &mut ChaCha8Rng, cgs: &Cgs, i: usize, max_states: usize) -> StrategyTransducer {
    let k = rng.gen_range(1..=max_states);
    // internal state (m, s): memory m at structure state s
    let n = cgs.num_states();
    let id = |m: usize, s: usize| m * n + s;
    let mut output = vec![0; k * n];
    let mut delta = vec![BTreeMap::new(); k * n];
    for m in 0..k {
        for s in 0..n {
            output[id(m, s)] = *cgs.available(s, i).choose(rng).unwrap();
            for (ja, t) in cgs.moves(s) {
                delta[id(m, s)].insert(ja, id(rng.gen_range(0..k), t));
            }
        }
    }
    StrategyTransducer { player: i, initial: id(0, cgs.initial), output, delta }
}

/// Sets of states `v` from which, in the one-player graph `succ`, some
/// reachable cycle has an even minimum priority. Checked by asking, for
/// each even priority `p`, which vertices of priority `p` return to
/// themselves through vertices of priority at least `p`.
pub fn can_reach_even_cycle(succ: &[Vec<usize>], priority: &[u32]) -> Vec<bool> {
    let n = succ.len();
    let mut good = vec![false; n];
    for v in 0..n {
        let p = priority[v];
        if p % 2 != 0 {
            continue;
        }
        // v on a cycle within {u : priority[u] >= p}?
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = succ[v].iter().copied().filter(|&u| priority[u] >= p).collect();
        while let Some(u) = stack.pop() {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            stack.extend(succ[u].iter().copied().filter(|&w| priority[w] >= p));
        }
        good[v] = seen[v];
    }
    // backwards closure: anything reaching a good vertex
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if !good[v] && succ[v].iter().any(|&u| good[u]) {
                good[v] = true;
                changed = true;
            }
        }
    }
    good
}
