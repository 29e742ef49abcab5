use std::collections::BTreeSet;

use crate::error::Result;
use crate::game::{Cgs, LtlGame};
use crate::ltl::{Label, LtlFormula};

fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..).map(|k| format!("{base}_{k}")).find(|n| !taken.contains(n)).unwrap()
}

/// Reduces the existence of an equilibrium satisfying `phi` to plain
/// existence: two extra players set fresh variables `p` and `q` on every
/// step, one wanting `phi ∨ X(p ↔ q)` and the other `phi ∨ X¬(p ↔ q)`.
/// When `phi` fails on a run, one of them can always switch its first
/// choice and win, so every equilibrium of the new game satisfies `phi`.
///
/// The comparison sits under `X` because both variables start out false in
/// the initial state; the players' first choices are visible one step
/// later.
pub fn gadget_game(g: &LtlGame, phi: &LtlFormula) -> Result<LtlGame> {
    let mut taken = g.propositions();
    taken.extend(phi.atoms());
    let p = fresh("p", &taken);
    taken.insert(p.clone());
    let q = fresh("q", &taken);
    let player_names: BTreeSet<String> = g.cgs.players.iter().cloned().collect();
    let m1 = fresh("matcher", &player_names);
    let m2 = fresh("mismatcher", &player_names);

    let base = &g.cgs;
    let n = base.num_players();
    let mut players = base.players.clone();
    players.extend([m1, m2]);
    let mut actions = base.actions.clone();
    actions.push(vec![format!("{p}0"), format!("{p}1")]);
    actions.push(vec![format!("{q}0"), format!("{q}1")]);
    // state 4s + b carries the bits b = p + 2q
    let states = 4 * base.num_states();
    let names = (0..states)
        .map(|v| format!("{}/{}{}", base.state_names[v / 4], v % 2, v / 2 % 2))
        .collect();
    let available = (0..states)
        .map(|v| {
            let mut a: Vec<Vec<usize>> = (0..n).map(|i| base.available(v / 4, i).to_vec()).collect();
            a.extend([vec![0, 1], vec![0, 1]]);
            a
        })
        .collect();
    let cgs = Cgs::new(players, actions, names, 4 * base.initial, available, |v, ja| {
        let t = base.tr(v / 4, &ja[..n]).expect("available");
        Ok(4 * t + ja[n] + 2 * ja[n + 1])
    })?;
    let labels: Vec<Label> = (0..states)
        .map(|v| {
            let mut l = g.labels[v / 4].clone();
            if v % 2 == 1 {
                l.insert(p.clone());
            }
            if v / 2 % 2 == 1 {
                l.insert(q.clone());
            }
            l
        })
        .collect();
    let same = LtlFormula::iff(LtlFormula::Atom(p.clone()), LtlFormula::Atom(q.clone()));
    let mut goals = g.goals.clone();
    goals.push(LtlFormula::or(phi.clone(), LtlFormula::next(same.clone())));
    goals.push(LtlFormula::or(phi.clone(), LtlFormula::next(LtlFormula::not(same))));
    LtlGame::new(cgs, labels, goals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{e_nash, non_emptiness};
    use crate::game::tests::adder;
    use crate::ltl::parse_ltl;

    fn base() -> LtlGame {
        let labels = vec![["p".to_string()].into(), Label::new(), Label::new()];
        let goals = vec![parse_ltl("G F p").unwrap(), parse_ltl("F G ~p").unwrap()];
        LtlGame::new(adder(3), labels, goals).unwrap()
    }

    #[test]
    fn two_more_players_and_fresh_names() {
        let g = base();
        let h = gadget_game(&g, &parse_ltl("G F p").unwrap()).unwrap();
        assert_eq!(h.cgs.num_players(), g.cgs.num_players() + 2);
        let ap = h.propositions();
        assert!(ap.contains("p_1") && ap.contains("q"));
    }

    #[test]
    fn verdicts_agree_with_query_route() {
        let g = base();
        for phi in ["G F p", "F G ~p", "true", "false", "G p"] {
            let phi = parse_ltl(phi).unwrap();
            let direct = e_nash(&g, &phi).unwrap().is_yes();
            let via = non_emptiness(&gadget_game(&g, &phi).unwrap()).unwrap().is_yes();
            assert_eq!(direct, via, "{phi}");
        }
    }
}
