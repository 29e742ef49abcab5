//! Reader for explicitly listed game arenas.
//!
//! ```text
//! players: x y z
//! actions x: a b
//! actions z: a b a' b'
//! state s0
//! state s2: {p}
//! init s0
//! available s1 z: a b
//! trans s0: a, b, * -> s1
//! goal x: F p
//! query: G ~q
//! ```
//!
//! Every player may use all of its actions at every state unless an
//! `available` line narrows them. `*` in a transition row stands for every
//! available action; the rows of a state must cover each available joint
//! action and may only overlap when they agree on the successor.

use std::collections::{BTreeMap, HashMap};

use super::{Cgs, JointAction, LtlGame};
use crate::error::{Error, Result};
use crate::ltl::{parser::parse_ltl_at, Label, LtlFormula};
use crate::syntax::{Cursor, Tok};

struct Row {
    line: usize,
    state: String,
    pattern: Vec<Option<String>>,
    target: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

/// A state or action name: a word with optional trailing primes.
fn primed(cur: &mut Cursor, what: &str) -> Result<String> {
    let mut name = cur.ident(what)?;
    while cur.eat(&Tok::Prime) {
        name.push('\'');
    }
    Ok(name)
}

fn expect_end(cur: &Cursor) -> Result<()> {
    if cur.at_end() {
        Ok(())
    } else {
        Err(cur.unexpected("end of line"))
    }
}

pub fn parse_arena(text: &str) -> Result<LtlGame> {
    let mut players: Option<(usize, Vec<String>)> = None;
    let mut actions: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    let mut states: Vec<(usize, String, Label)> = Vec::new();
    let mut init: Option<(usize, String)> = None;
    let mut available: Vec<(usize, String, String, Vec<String>)> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut goals: BTreeMap<String, (usize, LtlFormula)> = BTreeMap::new();
    let mut query: Option<LtlFormula> = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        // blank out comments so columns stay aligned
        let content = match raw.find(['#']) {
            Some(c) => &raw[..c],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let shift = |e: Error| match e {
            Error::Syntax { column, message, .. } => Error::Syntax { line, column, message },
            other => other,
        };
        let mut cur = Cursor::new(content).map_err(shift)?;
        let keyword = cur.ident("a declaration keyword").map_err(shift)?;
        let colon_col = |content: &str| content.find(':').map(|c| c + 2).unwrap_or(1);
        match keyword.as_str() {
            "players" => {
                (|| {
                    cur.expect(&Tok::Colon)?;
                    let mut names = Vec::new();
                    while !cur.at_end() {
                        names.push(cur.ident("a player name")?);
                        cur.eat(&Tok::Comma);
                    }
                    if names.is_empty() {
                        return Err(cur.error("no players listed"));
                    }
                    players = Some((line, names));
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "actions" => {
                (|| {
                    let p = cur.ident("a player name")?;
                    cur.expect(&Tok::Colon)?;
                    let mut acts = Vec::new();
                    while !cur.at_end() {
                        let a = primed(&mut cur, "an action name")?;
                        if acts.contains(&a) {
                            return Err(cur.error(format!("action `{a}` listed twice")));
                        }
                        acts.push(a);
                        cur.eat(&Tok::Comma);
                    }
                    if acts.is_empty() {
                        return Err(cur.error("no actions listed"));
                    }
                    actions.insert(p, (line, acts));
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "state" => {
                (|| {
                    let name = primed(&mut cur, "a state name")?;
                    let mut label = Label::new();
                    if cur.eat(&Tok::Colon) {
                        cur.expect(&Tok::LBrace)?;
                        while !cur.eat(&Tok::RBrace) {
                            label.insert(cur.ident("a proposition")?);
                            if !cur.eat(&Tok::Comma) {
                                cur.expect(&Tok::RBrace)?;
                                break;
                            }
                        }
                    }
                    expect_end(&cur)?;
                    if states.iter().any(|(_, n, _)| *n == name) {
                        return Err(err(line, 7, format!("state `{name}` declared twice")));
                    }
                    states.push((line, name, label));
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "init" => {
                (|| {
                    let name = primed(&mut cur, "a state name")?;
                    expect_end(&cur)?;
                    init = Some((line, name));
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "available" => {
                (|| {
                    let s = primed(&mut cur, "a state name")?;
                    let p = cur.ident("a player name")?;
                    cur.expect(&Tok::Colon)?;
                    let mut acts = Vec::new();
                    while !cur.at_end() {
                        acts.push(primed(&mut cur, "an action name")?);
                        cur.eat(&Tok::Comma);
                    }
                    available.push((line, s, p, acts));
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "trans" => {
                (|| {
                    let state = primed(&mut cur, "a state name")?;
                    cur.expect(&Tok::Colon)?;
                    let paren = cur.eat(&Tok::LParen);
                    let mut pattern = Vec::new();
                    loop {
                        if cur.eat(&Tok::Star) {
                            pattern.push(None);
                        } else {
                            pattern.push(Some(primed(&mut cur, "an action name")?));
                        }
                        if !cur.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    if paren {
                        cur.expect(&Tok::RParen)?;
                    }
                    cur.expect(&Tok::Implies)?;
                    let target = primed(&mut cur, "a target state")?;
                    expect_end(&cur)?;
                    rows.push(Row { line, state, pattern, target });
                    Ok(())
                })()
                .map_err(shift)?;
            }
            "goal" => {
                let p = cur.ident("a player name").map_err(shift)?;
                cur.expect(&Tok::Colon).map_err(shift)?;
                let c = colon_col(content);
                let f = parse_ltl_at(&content[c - 1..], line, c)?;
                goals.insert(p, (line, f));
            }
            "query" => {
                cur.expect(&Tok::Colon).map_err(shift)?;
                let c = colon_col(content);
                query = Some(parse_ltl_at(&content[c - 1..], line, c)?);
            }
            other => return Err(err(line, 1, format!("unknown declaration `{other}`"))),
        }
    }

    let (_, players) = players.ok_or_else(|| err(1, 1, "missing `players:` line"))?;
    let mut alphabets = Vec::new();
    for p in &players {
        let (_, acts) = actions
            .remove(p)
            .ok_or_else(|| err(1, 1, format!("no `actions` line for player `{p}`")))?;
        alphabets.push(acts);
    }
    if let Some((p, (line, _))) = actions.into_iter().next() {
        return Err(err(line, 9, format!("unknown player `{p}`")));
    }
    if states.is_empty() {
        return Err(err(1, 1, "no states declared"));
    }
    let state_index: HashMap<String, usize> =
        states.iter().enumerate().map(|(i, (_, n, _))| (n.clone(), i)).collect();
    let lookup_state = |line: usize, name: &str| {
        state_index.get(name).copied().ok_or_else(|| err(line, 1, format!("unknown state `{name}`")))
    };
    let initial = match &init {
        Some((line, name)) => lookup_state(*line, name)?,
        None => 0,
    };
    let action_of = |line: usize, i: usize, a: &str| {
        alphabets[i]
            .iter()
            .position(|x| x == a)
            .ok_or_else(|| err(line, 1, format!("`{a}` is not an action of player `{}`", players[i])))
    };
    let player_of = |line: usize, p: &str| {
        players.iter().position(|x| x == p).ok_or_else(|| err(line, 1, format!("unknown player `{p}`")))
    };

    let n = players.len();
    let mut avail: Vec<Vec<Vec<usize>>> =
        vec![(0..n).map(|i| (0..alphabets[i].len()).collect()).collect(); states.len()];
    for (line, s, p, acts) in &available {
        let s = lookup_state(*line, s)?;
        let i = player_of(*line, p)?;
        let ids = acts.iter().map(|a| action_of(*line, i, a)).collect::<Result<Vec<_>>>()?;
        if ids.is_empty() {
            return Err(err(*line, 1, "a player needs at least one available action"));
        }
        avail[s][i] = ids;
    }

    let mut table: Vec<HashMap<JointAction, (usize, usize)>> = vec![HashMap::new(); states.len()];
    for row in &rows {
        let s = lookup_state(row.line, &row.state)?;
        let t = lookup_state(row.line, &row.target)?;
        if row.pattern.len() != n {
            return Err(err(row.line, 1, format!("expected {n} actions, found {}", row.pattern.len())));
        }
        let mut choices: Vec<Vec<usize>> = Vec::new();
        for (i, a) in row.pattern.iter().enumerate() {
            choices.push(match a {
                None => avail[s][i].clone(),
                Some(a) => {
                    let id = action_of(row.line, i, a)?;
                    if !avail[s][i].contains(&id) {
                        return Err(err(
                            row.line,
                            1,
                            format!("`{a}` is not available to `{}` at `{}`", players[i], row.state),
                        ));
                    }
                    vec![id]
                }
            });
        }
        let mut combos: Vec<JointAction> = vec![Vec::new()];
        for c in &choices {
            combos = combos
                .into_iter()
                .flat_map(|p| c.iter().map(move |&a| [p.clone(), vec![a]].concat()))
                .collect();
        }
        for ja in combos {
            if let Some(&(other, line)) = table[s].get(&ja) {
                if other != t {
                    return Err(err(
                        row.line,
                        1,
                        format!(
                            "nondeterministic transition at `{}`: also leads to `{}` (line {line})",
                            row.state, states[other].1
                        ),
                    ));
                }
            }
            table[s].insert(ja, (t, row.line));
        }
    }

    let state_lines: Vec<usize> = states.iter().map(|(l, _, _)| *l).collect();
    let names: Vec<String> = states.iter().map(|(_, n, _)| n.clone()).collect();
    let alph = alphabets.clone();
    let cgs = Cgs::new(players.clone(), alphabets, names.clone(), initial, avail, |s, ja| {
        table[s].get(ja).map(|&(t, _)| t).ok_or_else(|| {
            let acts: Vec<&str> = ja.iter().enumerate().map(|(i, &a)| alph[i][a].as_str()).collect();
            err(
                state_lines[s],
                1,
                format!("no transition from `{}` on ({})", names[s], acts.join(", ")),
            )
        })
    })?;

    let mut goal_list = Vec::new();
    for p in &players {
        let (_, f) = goals.remove(p).ok_or_else(|| err(1, 1, format!("no goal for player `{p}`")))?;
        goal_list.push(f);
    }
    if let Some((p, (line, _))) = goals.into_iter().next() {
        return Err(err(line, 6, format!("unknown player `{p}`")));
    }
    let labels = states.into_iter().map(|(_, _, l)| l).collect();
    let mut game = LtlGame::new(cgs, labels, goal_list)?;
    game.query = query;
    Ok(game)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
players: 1 2
actions 1: a b
actions 2: c
state s0          # start
state s1: {p, q}
trans s0: a, * -> s1
trans s0: b, c -> s0
trans s1: *, * -> s1
goal 1: F p
goal 2: G ~q
";

    #[test]
    fn parses_small_arena() {
        let g = parse_arena(SMALL).unwrap();
        assert_eq!(g.cgs.num_states(), 2);
        assert_eq!(g.cgs.tr(0, &[0, 0]), Some(1));
        assert_eq!(g.cgs.tr(0, &[1, 0]), Some(0));
        assert!(g.labels[1].contains("q"));
        assert_eq!(g.goals[1].to_string(), "G ~q");
    }

    #[test]
    fn missing_transition_is_an_error() {
        let text = SMALL.replace("trans s0: b, c -> s0\n", "");
        let e = parse_arena(&text).unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 5, .. }), "{e}");
    }

    #[test]
    fn conflicting_rows_are_an_error() {
        let text = SMALL.replace("trans s0: b, c -> s0", "trans s0: *, c -> s0");
        let e = parse_arena(&text).unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 8, .. }), "{e}");
    }

    #[test]
    fn bad_goal_reports_column() {
        let text = SMALL.replace("goal 2: G ~q", "goal 2: G (~q");
        match parse_arena(&text).unwrap_err() {
            Error::Syntax { line: 11, column, .. } => assert_eq!(column, 14),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn primed_actions_and_availability() {
        let text = "
players: x
actions x: a a'
state s'
available s' x: a'
trans s': a' -> s'
goal x: true
";
        let g = parse_arena(text).unwrap();
        assert_eq!(g.cgs.state_names[0], "s'");
        assert_eq!(g.cgs.available(0, 0), &[1]);
        assert_eq!(g.cgs.action_name(0, 1), "a'");
    }
}
