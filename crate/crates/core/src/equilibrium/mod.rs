//! Deciding whether Nash equilibria exist: guess the winners, cut the arena
//! down to what the losers cannot exploit, and look for a run that
//! satisfies every winner (and the query, when there is one).

mod gadget;

pub use gadget::gadget_game;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{ltl_to_dpw_with_cap, parity_to_streett, streett_emptiness, Dpw, DEFAULT_AUTOMATON_CAP};
use crate::error::{Error, Result};
use crate::game::{self, JointAction, Lasso, LtlGame, ParityGame, DEFAULT_STATE_CAP};
use crate::graph::Adjacency;
use crate::ltl::LtlFormula;
use crate::solver::{punishment_region, PunishmentResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub product_states: usize,
    pub subsets_checked: usize,
    pub solver_calls: usize,
}

/// Outcome of a decision procedure. On `Yes`, `winners` lists the players
/// satisfied by the witness and `lasso` is the witness run in the LTL game;
/// the same run over the parity game is kept in `product_lasso`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: Answer,
    pub winners: Vec<usize>,
    pub lasso: Option<Lasso>,
    #[serde(skip)]
    pub product_lasso: Option<Lasso>,
    pub stats: Stats,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_states: usize,
    pub max_automaton: usize,
    /// Worker threads for the winner-set search; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_states: DEFAULT_STATE_CAP, max_automaton: DEFAULT_AUTOMATON_CAP, jobs: None }
    }
}

/// The arena left after removing what the losers could exploit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedArena {
    pub alive: FixedBitSet,
    /// Surviving joint actions per state (empty for removed states).
    pub actions: Vec<Vec<JointAction>>,
}

impl RestrictedArena {
    /// Successor lists of the surviving edges.
    pub fn graph(&self, g: &ParityGame) -> Adjacency {
        self.actions
            .iter()
            .enumerate()
            .map(|(s, acts)| {
                let mut v: Vec<usize> = acts.iter().map(|ja| g.cgs.tr(s, ja).expect("available")).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }
}

/// Keeps the states inside every loser's punishment region and, at those
/// states, the joint actions from which no loser can leave its region by
/// deviating alone. `pun[k]` is the punishment result of `losers[k]`.
pub fn restrict_game(g: &ParityGame, losers: &[usize], pun: &[&PunishmentResult]) -> Result<RestrictedArena> {
    assert_eq!(losers.len(), pun.len());
    let cgs = &g.cgs;
    let n = cgs.num_states();
    let mut alive = FixedBitSet::with_capacity(n);
    for s in 0..n {
        if pun.iter().all(|p| p.contains(s)) {
            alive.insert(s);
        }
    }
    if !alive.contains(cgs.initial) {
        return Err(Error::InitialStateEliminated);
    }
    let actions = (0..n)
        .map(|s| {
            if !alive.contains(s) {
                return Vec::new();
            }
            cgs.joint_actions(s)
                .filter(|ja| {
                    losers.iter().zip(pun).all(|(&j, p)| {
                        cgs.available(s, j)
                            .iter()
                            .all(|&a| p.contains(cgs.tr(s, &game::with_action(ja, j, a)).expect("available")))
                    })
                })
                .collect()
        })
        .collect();
    Ok(RestrictedArena { alive, actions })
}

/// Audit of a run: at every position of the lasso, every unilateral
/// deviation of `j` stays in `j`'s punishment region.
pub fn check_punishing_secure(g: &ParityGame, lasso: &Lasso, j: usize, pun: &PunishmentResult) -> bool {
    lasso.steps().all(|(s, ja)| {
        pun.contains(*s)
            && g.cgs.available(*s, j).iter().all(|&a| {
                g.cgs.tr(*s, &game::with_action(ja, j, a)).is_some_and(|t| pun.contains(t))
            })
    })
}

/// Searches the restricted arena for a run satisfying every winner's
/// parity objective and, when given, the query automaton (which reads the
/// labels of the LTL-game states the parity-game states project to).
pub fn find_ne_for_winners(
    g: &ParityGame,
    labels: &[crate::ltl::Label],
    winners: &[usize],
    arena: &RestrictedArena,
    query: Option<&Dpw>,
) -> Option<Lasso> {
    let cgs = &g.cgs;
    let start = (cgs.initial, query.map_or(0, |d| d.initial));
    let mut vertices: IndexSet<(usize, usize)> = IndexSet::new();
    vertices.insert(start);
    let mut succ: Adjacency = Vec::new();
    let mut k = 0;
    while k < vertices.len() {
        let (s, q) = vertices[k];
        let q2 = query.map_or(0, |d| d.step_label(q, &labels[g.base[s]]));
        let mut row: Vec<usize> = arena.actions[s]
            .iter()
            .map(|ja| vertices.insert_full((cgs.tr(s, ja).expect("available"), q2)).0)
            .collect();
        row.sort_unstable();
        row.dedup();
        succ.push(row);
        k += 1;
    }
    let mut cond = crate::automata::StreettCondition::default();
    for &i in winners {
        let prio: Vec<u32> = vertices.iter().map(|&(s, _)| g.priority[i][s]).collect();
        cond.extend(parity_to_streett(&prio));
    }
    if let Some(d) = query {
        let prio: Vec<u32> = vertices.iter().map(|&(_, q)| d.priority[q]).collect();
        cond.extend(parity_to_streett(&prio));
    }
    let witness = streett_emptiness(&succ, 0, &cond)?;
    let step = |v: usize, w: usize| -> (usize, JointAction) {
        let (s, _) = vertices[v];
        let (t, _) = vertices[w];
        let ja = arena.actions[s]
            .iter()
            .find(|ja| cgs.tr(s, ja) == Some(t))
            .expect("witness edge")
            .clone();
        (s, ja)
    };
    let walk: Vec<usize> = witness.prefix.iter().chain(&witness.cycle).copied().collect();
    let mut steps: Vec<(usize, JointAction)> = walk.windows(2).map(|w| step(w[0], w[1])).collect();
    steps.push(step(*walk.last().unwrap(), witness.cycle[0]));
    let cycle = steps.split_off(witness.prefix.len());
    Some(Lasso { prefix: steps, cycle })
}

/// Winner sets in search order: larger sets first, then lexicographically.
pub fn winner_sets(n: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0..1u64 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    sets.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    sets
}

/// An LTL game together with its parity game and lazily computed
/// punishment regions, shared by the decision procedures and synthesis.
pub struct Analysis<'a> {
    pub game: &'a LtlGame,
    pub parity: ParityGame,
    pub options: Options,
    pun: Vec<OnceLock<PunishmentResult>>,
    solver_calls: AtomicUsize,
}

impl<'a> Analysis<'a> {
    pub fn new(game: &'a LtlGame, options: Options) -> Result<Self> {
        let run = || -> Result<Vec<Dpw>> {
            game.goals.par_iter().map(|f| ltl_to_dpw_with_cap(f, options.max_automaton)).collect()
        };
        let dpws = with_jobs(options.jobs, run)?;
        let parity = game::product_game_with_cap(game, &dpws, options.max_states)?;
        log::info!(
            "parity game: {} states, {} edges",
            parity.cgs.num_states(),
            parity.cgs.edge_count()
        );
        let n = game.cgs.num_players();
        Ok(Analysis {
            game,
            parity,
            options,
            pun: (0..n).map(|_| OnceLock::new()).collect(),
            solver_calls: AtomicUsize::new(0),
        })
    }

    /// `Pun_j`, computed on first use.
    pub fn punishment(&self, j: usize) -> &PunishmentResult {
        self.pun[j].get_or_init(|| {
            self.solver_calls.fetch_add(1, Ordering::Relaxed);
            let p = punishment_region(&self.parity, j);
            log::debug!("Pun_{}: {} states", self.game.cgs.players[j], p.region.count_ones(..));
            p
        })
    }

    pub fn restrict(&self, losers: &[usize]) -> Result<RestrictedArena> {
        let pun: Vec<&PunishmentResult> = losers.iter().map(|&j| self.punishment(j)).collect();
        restrict_game(&self.parity, losers, &pun)
    }

    pub fn find(&self, winners: &[usize], query: Option<&Dpw>) -> Option<Lasso> {
        let n = self.game.cgs.num_players();
        let losers: Vec<usize> = (0..n).filter(|i| !winners.contains(i)).collect();
        match self.restrict(&losers) {
            Ok(arena) => find_ne_for_winners(&self.parity, &self.game.labels, winners, &arena, query),
            Err(_) => None,
        }
    }

    /// Tries winner sets in order; the query automaton, when given, is
    /// intersected with the restricted arena.
    pub fn decide(&self, query: Option<&Dpw>) -> Verdict {
        let sets = winner_sets(self.game.cgs.num_players());
        let found = with_jobs(self.options.jobs, || {
            sets.par_iter().enumerate().find_map_first(|(k, w)| self.find(w, query).map(|l| (k, l)))
        });
        let mut stats = Stats {
            product_states: self.parity.cgs.num_states(),
            subsets_checked: sets.len(),
            solver_calls: self.solver_calls.load(Ordering::Relaxed),
        };
        match found {
            Some((k, l)) => {
                stats.subsets_checked = k + 1;
                log::info!("equilibrium found with winners {:?}", sets[k]);
                Verdict {
                    answer: Answer::Yes,
                    winners: sets[k].clone(),
                    lasso: Some(l.map_states(|s| self.parity.base[s])),
                    product_lasso: Some(l),
                    stats,
                }
            }
            None => Verdict { answer: Answer::No, winners: Vec::new(), lasso: None, product_lasso: None, stats },
        }
    }

    pub fn query_automaton(&self, phi: &LtlFormula) -> Result<Dpw> {
        ltl_to_dpw_with_cap(phi, self.options.max_automaton)
    }

    /// Checks that a verdict's witness meets the characterisation: it is a
    /// run of the parity game, satisfies every winner and is punishing
    /// secure for every loser.
    pub fn audit(&self, v: &Verdict) -> bool {
        let Some(l) = &v.product_lasso else {
            return v.answer == Answer::No;
        };
        let n = self.game.cgs.num_players();
        l.is_consistent(&self.parity.cgs)
            && v.winners.iter().all(|&i| self.parity.satisfies(i, &l.cycle_states()))
            && (0..n)
                .filter(|j| !v.winners.contains(j))
                .all(|j| check_punishing_secure(&self.parity, l, j, self.punishment(j)))
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Does the game have a Nash equilibrium?
pub fn non_emptiness(g: &LtlGame) -> Result<Verdict> {
    non_emptiness_with(g, Options::default())
}

pub fn non_emptiness_with(g: &LtlGame, options: Options) -> Result<Verdict> {
    Ok(Analysis::new(g, options)?.decide(None))
}

/// Is there a Nash equilibrium whose run satisfies `phi`?
pub fn e_nash(g: &LtlGame, phi: &LtlFormula) -> Result<Verdict> {
    e_nash_with(g, phi, Options::default())
}

pub fn e_nash_with(g: &LtlGame, phi: &LtlFormula, options: Options) -> Result<Verdict> {
    let a = Analysis::new(g, options)?;
    let d = a.query_automaton(phi)?;
    Ok(a.decide(Some(&d)))
}

/// Do all Nash equilibrium runs satisfy `phi`? Answered as the negation of
/// `e_nash(g, ¬phi)`; on `No` the lasso is a counterexample equilibrium
/// run.
pub fn a_nash(g: &LtlGame, phi: &LtlFormula) -> Result<Verdict> {
    a_nash_with(g, phi, Options::default())
}

pub fn a_nash_with(g: &LtlGame, phi: &LtlFormula, options: Options) -> Result<Verdict> {
    let mut v = e_nash_with(g, &LtlFormula::not(phi.clone()), options)?;
    v.answer = match v.answer {
        Answer::Yes => Answer::No,
        Answer::No => Answer::Yes,
    };
    Ok(v)
}
