use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use eve_core::game::{Lasso, LtlGame};

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The game graph, one edge per successor with the joint actions leading
/// there. Edges taken by `run` are drawn bold.
pub fn game_dot(g: &LtlGame, run: Option<&Lasso>) -> String {
    let cgs = &g.cgs;
    let taken: BTreeSet<(usize, usize)> = match run {
        Some(l) => {
            let steps: Vec<usize> = l.steps().map(|(s, _)| *s).collect();
            let mut e: BTreeSet<(usize, usize)> = steps.windows(2).map(|w| (w[0], w[1])).collect();
            if let (Some(&last), Some(first)) = (steps.last(), l.cycle.first()) {
                e.insert((last, first.0));
            }
            e
        }
        None => BTreeSet::new(),
    };
    let mut out = String::from("digraph game {\n");
    for s in 0..cgs.num_states() {
        let label: Vec<&str> = g.labels[s].iter().map(String::as_str).collect();
        let _ = writeln!(
            out,
            "  s{s} [label=\"{}\\n{{{}}}\"{}];",
            quote(&cgs.state_names[s]),
            quote(&label.join(",")),
            if s == cgs.initial { ", shape=doublecircle" } else { "" }
        );
    }
    for s in 0..cgs.num_states() {
        let mut grouped: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (ja, t) in cgs.moves(s) {
            grouped.entry(t).or_default().push(cgs.joint_action_names(&ja).join(","));
        }
        for (t, labels) in grouped {
            let style = if taken.contains(&(s, t)) { ", style=bold" } else { "" };
            let labels: Vec<String> = labels.iter().map(|l| quote(l)).collect();
            let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"{style}];", labels.join("\\n"));
        }
    }
    out.push_str("}\n");
    out
}
