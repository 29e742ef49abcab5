use std::collections::HashMap;

use super::Cgs;
use crate::error::{Error, Result};
use crate::ltl::Label;

/// Whether the initial states of two labelled structures are bisimilar:
/// equal labels, and every joint action (compared by action names) that is
/// available on one side is available on the other and leads to related
/// states.
///
/// Computed by partition refinement over the disjoint union of the two
/// structures.
pub fn check_bisimilar(a: &Cgs, la: &[Label], b: &Cgs, lb: &[Label]) -> Result<bool> {
    if a.players.len() != b.players.len() {
        return Err(Error::Arena("bisimulation needs the same players on both sides".into()));
    }
    let na = a.num_states();
    let n = na + b.num_states();
    let mut directions: HashMap<Vec<String>, usize> = HashMap::new();
    // per global state: sorted (direction id, global successor)
    let mut moves: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    for (g, offset) in [(a, 0), (b, na)] {
        for s in 0..g.num_states() {
            let mut m: Vec<(usize, usize)> = g
                .moves(s)
                .map(|(ja, t)| {
                    let fresh = directions.len();
                    let d = *directions.entry(g.joint_action_names(&ja)).or_insert(fresh);
                    (d, t + offset)
                })
                .collect();
            m.sort_unstable();
            moves.push(m);
        }
    }
    let mut label_ids: HashMap<&Label, usize> = HashMap::new();
    let mut block: Vec<usize> = la
        .iter()
        .chain(lb)
        .map(|l| {
            let fresh = label_ids.len();
            *label_ids.entry(l).or_insert(fresh)
        })
        .collect();
    let mut count = label_ids.len();
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let sig: Vec<(usize, usize)> = moves[s].iter().map(|&(d, t)| (d, block[t])).collect();
                let fresh = ids.len();
                *ids.entry((block[s], sig)).or_insert(fresh)
            })
            .collect();
        block = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    Ok(block[a.initial] == block[na + b.initial])
}
