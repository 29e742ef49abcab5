//! Simple reactive modules: Boolean variables owned by modules and changed
//! through guarded commands, compiled into a concurrent game structure.

mod parser;

pub use parser::parse_srml;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::game::{Cgs, LtlGame};
use crate::ltl::{Label, LtlFormula};

/// Default bound on the number of reachable valuations.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Propositional expression over the system's variables (by index).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    /// Evaluates under a valuation given as a bit mask.
    pub fn eval(&self, v: u64) -> bool {
        match self {
            BoolExpr::Const(c) => *c,
            BoolExpr::Var(x) => v >> x & 1 == 1,
            BoolExpr::Not(e) => !e.eval(v),
            BoolExpr::And(a, b) => a.eval(v) && b.eval(v),
            BoolExpr::Or(a, b) => a.eval(v) || b.eval(v),
        }
    }
}

/// `:: guard ~> x' := e; ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedCommand {
    pub guard: BoolExpr,
    pub assignments: Vec<(usize, BoolExpr)>,
}

impl GuardedCommand {
    fn apply(&self, current: u64, next: &mut u64) {
        for (x, e) in &self.assignments {
            if e.eval(current) {
                *next |= 1 << x;
            } else {
                *next &= !(1 << x);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrmlModule {
    pub name: String,
    pub controls: Vec<usize>,
    pub init: Vec<GuardedCommand>,
    pub update: Vec<GuardedCommand>,
    pub goal: LtlFormula,
}

impl SrmlModule {
    /// Action names: one per init command, one per update command, `idle`.
    pub fn action_names(&self) -> Vec<String> {
        (0..self.init.len())
            .map(|k| format!("init{k}"))
            .chain((0..self.update.len()).map(|k| format!("update{k}")))
            .chain(["idle".to_string()])
            .collect()
    }

    fn idle(&self) -> usize {
        self.init.len() + self.update.len()
    }

    fn command(&self, action: usize) -> Option<&GuardedCommand> {
        if action < self.init.len() {
            Some(&self.init[action])
        } else {
            self.update.get(action - self.init.len())
        }
    }

    /// Enabled actions at a state; the pre-initial state offers the init
    /// commands, evaluated on the all-false valuation.
    fn enabled(&self, valuation: Option<u64>) -> Vec<usize> {
        let (commands, offset, v) = match valuation {
            None => (&self.init, 0, 0),
            Some(v) => (&self.update, self.init.len(), v),
        };
        let acts: Vec<usize> = commands
            .iter()
            .enumerate()
            .filter(|(_, c)| c.guard.eval(v))
            .map(|(k, _)| k + offset)
            .collect();
        if acts.is_empty() {
            vec![self.idle()]
        } else {
            acts
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrmlSystem {
    pub variables: Vec<String>,
    pub modules: Vec<SrmlModule>,
    pub query: Option<LtlFormula>,
}

impl SrmlSystem {
    fn label(&self, v: u64) -> Label {
        self.variables
            .iter()
            .enumerate()
            .filter(|(x, _)| v >> x & 1 == 1)
            .map(|(_, n)| n.clone())
            .collect()
    }
}

/// The concurrent game structure of a system and its labelling. State 0 is
/// the pre-initial state (labelled with the empty set); the others are the
/// reachable valuations.
pub fn build_cgs(sys: &SrmlSystem) -> Result<(Cgs, Vec<Label>)> {
    build_cgs_with_cap(sys, DEFAULT_STATE_CAP)
}

pub fn build_cgs_with_cap(sys: &SrmlSystem, cap: usize) -> Result<(Cgs, Vec<Label>)> {
    let n = sys.modules.len();
    // None is the pre-initial state
    let mut states: IndexSet<Option<u64>> = IndexSet::new();
    states.insert(None);
    let mut available: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let state = states[k];
        let current = state.unwrap_or(0);
        let avail: Vec<Vec<usize>> = sys.modules.iter().map(|m| m.enabled(state)).collect();
        let mut row = Vec::new();
        let mut idx = vec![0usize; n];
        loop {
            let mut next = current;
            for (i, m) in sys.modules.iter().enumerate() {
                if let Some(c) = m.command(avail[i][idx[i]]) {
                    c.apply(current, &mut next);
                }
            }
            row.push(states.insert_full(Some(next)).0);
            // mixed-radix increment, last player least significant
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < avail[i].len() {
                    break;
                }
                idx[i] = 0;
            }
            if idx.iter().all(|&d| d == 0) {
                break;
            }
        }
        if states.len() > cap {
            return Err(Error::StateCapExceeded { cap, what: "module system" });
        }
        available.push(avail);
        succ.push(row);
        k += 1;
    }
    let names = states
        .iter()
        .map(|s| match s {
            None => "init".to_string(),
            Some(v) => {
                let l: Vec<String> = sys.label(*v).into_iter().collect();
                format!("{{{}}}", l.join(","))
            }
        })
        .collect();
    let labels = states.iter().map(|s| s.map(|v| sys.label(v)).unwrap_or_default()).collect();
    let cgs = Cgs::from_dense(
        sys.modules.iter().map(|m| m.name.clone()).collect(),
        sys.modules.iter().map(|m| m.action_names()).collect(),
        names,
        0,
        available,
        succ,
    );
    Ok((cgs, labels))
}

/// The LTL game of a system: its structure, labelling, the module goals
/// and the query if one was given.
pub fn srml_game(sys: &SrmlSystem, cap: usize) -> Result<LtlGame> {
    let (cgs, labels) = build_cgs_with_cap(sys, cap)?;
    let mut g = LtlGame::new(cgs, labels, sys.modules.iter().map(|m| m.goal.clone()).collect())?;
    g.query = sys.query.clone();
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOGGLE: &str = "
module toggle controls x
  init
    :: true ~> x' := true;
    :: true ~> x' := false;
  update
    :: ~x ~> x' := true;
    :: x ~> x' := false;
  goal G F x;
";

    #[test]
    fn toggle_parses() {
        let sys = parse_srml(TOGGLE).unwrap();
        assert_eq!(sys.modules.len(), 1);
        let m = &sys.modules[0];
        assert_eq!((m.controls.len(), m.init.len(), m.update.len()), (1, 2, 2));
    }

    #[test]
    fn toggle_structure() {
        let (cgs, labels) = build_cgs(&parse_srml(TOGGLE).unwrap()).unwrap();
        assert_eq!(cgs.num_states(), 3);
        assert!(labels[0].is_empty());
        let on = labels.iter().position(|l| l.contains("x")).unwrap();
        let off = (1..3).find(|&s| s != on).unwrap();
        assert_eq!(cgs.successors(on), vec![off]);
        assert_eq!(cgs.successors(off), vec![on]);
        assert_eq!(cgs.available(on, 0).len(), 1);
    }

    #[test]
    fn empty_update_idles() {
        let sys = parse_srml("module m controls x init :: true ~> x' := true; update goal true;").unwrap();
        let (cgs, labels) = build_cgs(&sys).unwrap();
        assert_eq!(cgs.num_states(), 2);
        assert_eq!(cgs.successors(1), vec![1]);
        assert_eq!(cgs.action_name(0, cgs.available(1, 0)[0]), "idle");
        assert!(labels[1].contains("x"));
    }

    #[test]
    fn ownership_errors() {
        let dup = parse_srml("module a controls x module b controls x");
        assert!(matches!(dup, Err(Error::DuplicateVariable { .. })));
        let foreign = parse_srml("module a controls x update :: true ~> y' := true; module b controls y");
        assert!(matches!(foreign, Err(Error::ForeignAssignment { .. })));
        let twice = parse_srml("module a controls x update :: true ~> x' := true; x' := false;");
        assert!(matches!(twice, Err(Error::ConflictingAssignment { .. })));
        let unknown = parse_srml("module a controls x update :: z ~> x' := true;");
        assert!(matches!(unknown, Err(Error::UnknownVariable { .. })));
        let module = parse_srml("module a controls x module a controls y");
        assert!(matches!(module, Err(Error::DuplicateModule { .. })));
        let goal = parse_srml("module a controls x goal F z;");
        assert!(matches!(goal, Err(Error::UnknownVariable { .. })));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_srml("module a controls x\n  update\n    :: x ~> x := true;").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, column: 15, .. }), "{e}");
    }

    #[test]
    fn simultaneous_update_reads_current_values() {
        // swap-like: b copies a while a copies b
        let sys = parse_srml(
            "module m controls a init :: true ~> a' := true; update :: true ~> a' := b;
             module n controls b update :: true ~> b' := a;",
        )
        .unwrap();
        let (cgs, labels) = build_cgs(&sys).unwrap();
        let s1 = cgs.successors(0)[0];
        assert_eq!(labels[s1], ["a".to_string()].into());
        let s2 = cgs.successors(s1)[0];
        assert_eq!(labels[s2], ["b".to_string()].into());
    }

    #[test]
    fn cap_is_enforced() {
        let sys = parse_srml(TOGGLE).unwrap();
        assert!(matches!(build_cgs_with_cap(&sys, 2), Err(Error::StateCapExceeded { .. })));
    }
}
