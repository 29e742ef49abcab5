use std::fmt::Write as _;
use std::time::Duration;

use eve_core::equilibrium::Verdict;
use eve_core::game::{Lasso, LtlGame};
use serde::{Deserialize, Serialize};

/// One position of a witness run, with names resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub state: String,
    pub label: Vec<String>,
    pub actions: Vec<String>,
}

/// JSON form of a verdict. The verdict's own fields come first and are
/// flattened, so the document also reads back as a plain `Verdict`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub winner_names: Vec<String>,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

fn steps(g: &LtlGame, part: &[(usize, Vec<usize>)]) -> Vec<Step> {
    part.iter()
        .map(|(s, ja)| Step {
            state: g.cgs.state_names[*s].clone(),
            label: g.labels[*s].iter().cloned().collect(),
            actions: g.cgs.joint_action_names(ja),
        })
        .collect()
}

impl Report {
    pub fn new(command: &str, g: &LtlGame, verdict: Verdict, elapsed: Option<Duration>) -> Self {
        let empty = Lasso { prefix: Vec::new(), cycle: Vec::new() };
        let lasso = verdict.lasso.as_ref().unwrap_or(&empty);
        Report {
            command: command.to_string(),
            winner_names: verdict.winners.iter().map(|&i| g.cgs.players[i].clone()).collect(),
            prefix: steps(g, &lasso.prefix),
            cycle: steps(g, &lasso.cycle),
            verdict,
            seconds: elapsed.map(|d| d.as_secs_f64()),
        }
    }

    pub fn text(&self, g: &LtlGame) -> String {
        let mut out = String::new();
        let yes = self.verdict.is_yes();
        let _ = writeln!(out, "{}", if yes { "YES" } else { "NO" });
        let has_run = !self.cycle.is_empty();
        if has_run {
            let heading = if self.command == "a-nash" { "counterexample" } else { "witness" };
            let winners = if self.winner_names.is_empty() { "none".to_string() } else { self.winner_names.join(", ") };
            let losers: Vec<&str> = g
                .cgs
                .players
                .iter()
                .enumerate()
                .filter(|(i, _)| !self.verdict.winners.contains(i))
                .map(|(_, p)| p.as_str())
                .collect();
            let _ = writeln!(out, "winners: {winners}");
            if !losers.is_empty() {
                let _ = writeln!(out, "losers: {}", losers.join(", "));
            }
            let _ = writeln!(out, "{heading} (players: {}):", g.cgs.players.join(", "));
            let width = self.prefix.iter().chain(&self.cycle).map(|s| s.state.len()).max().unwrap_or(0);
            let line = |out: &mut String, s: &Step| {
                let _ = writeln!(
                    out,
                    "    {:width$}  {{{}}}  ({})",
                    s.state,
                    s.label.join(", "),
                    s.actions.join(", ")
                );
            };
            for s in &self.prefix {
                line(&mut out, s);
            }
            let _ = writeln!(out, "  repeat:");
            for s in &self.cycle {
                line(&mut out, s);
            }
        }
        let st = &self.verdict.stats;
        let _ = writeln!(
            out,
            "parity game states: {}, winner sets tried: {}, punishment regions solved: {}",
            st.product_states, st.subsets_checked, st.solver_calls
        );
        if let Some(t) = self.seconds {
            let _ = writeln!(out, "time: {t:.3}s");
        }
        out
    }
}
