//! Brute-force oracles: memoryless enumeration for parity games, subset
//! enumeration for Streett emptiness and a direct search for equilibria.

use std::collections::{BTreeMap, HashMap, VecDeque};

use eve_core::automata::{ltl_to_dpw, Dpw, StreettCondition, StreettPair};
use eve_core::game::{product_game, Cgs, JointAction, LtlGame, ParityGame};
use eve_core::ltl::{eval_lasso, parse_ltl, UltimatelyPeriodicWord};
use eve_core::solver::TurnBasedParityGame;
use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{can_reach_even_cycle, ltl_game, rng};

pub const ATOMS: [&str; 2] = ["p", "q"];

pub fn parity_of(g: &LtlGame) -> ParityGame {
    let dpws: Vec<Dpw> = g.goals.iter().map(|f| ltl_to_dpw(f).unwrap()).collect();
    product_game(g, &dpws).unwrap()
}

pub fn with_action(ja: &[usize], j: usize, a: usize) -> JointAction {
    let mut b = ja.to_vec();
    b[j] = a;
    b
}

pub fn random_game(r: &mut ChaCha8Rng) -> TurnBasedParityGame {
    let n = r.gen_range(1..=8);
    let owner = (0..n).map(|_| r.gen_range(0..2u8)).collect();
    let succ = (0..n)
        .map(|_| {
            let k = r.gen_range(1..=3);
            let mut s: Vec<usize> = (0..k).map(|_| r.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let priority = (0..n).map(|_| r.gen_range(0..=4)).collect();
    TurnBasedParityGame::new(owner, succ, priority, (0..n).map(|v| format!("v{v}")).collect())
}

/// Every memoryless choice function: one successor index per vertex of
/// `player`, as a vector of successor indices over all vertices.
pub fn choices(g: &TurnBasedParityGame, player: u8) -> Vec<Vec<usize>> {
    let mut all = vec![vec![0; g.succ.len()]];
    for v in 0..g.succ.len() {
        if g.owner[v] != player {
            continue;
        }
        all = all
            .into_iter()
            .flat_map(|c| {
                (0..g.succ[v].len()).map(move |k| {
                    let mut c = c.clone();
                    c[v] = k;
                    c
                })
            })
            .collect();
    }
    all
}

/// The play from `v` when both players' choices are fixed: follow the
/// unique path until a vertex repeats, and report the cycle's least
/// priority.
pub fn play_min_priority(g: &TurnBasedParityGame, c0: &[usize], c1: &[usize], v: usize) -> u32 {
    let mut order = vec![usize::MAX; g.succ.len()];
    let mut path = Vec::new();
    let mut u = v;
    while order[u] == usize::MAX {
        order[u] = path.len();
        path.push(u);
        let k = if g.owner[u] == 0 { c0[u] } else { c1[u] };
        u = g.succ[u][k];
    }
    path[order[u]..].iter().map(|&w| g.priority[w]).min().unwrap()
}

/// Player 0 wins from `v` iff some memoryless choice of player 0 beats
/// every memoryless choice of player 1.
pub fn brute_force_win0(g: &TurnBasedParityGame, v: usize) -> bool {
    let c0s = choices(g, 0);
    let c1s = choices(g, 1);
    c0s.iter().any(|c0| c1s.iter().all(|c1| play_min_priority(g, c0, c1, v) % 2 == 0))
}

pub fn random_streett(r: &mut ChaCha8Rng) -> (Vec<Vec<usize>>, StreettCondition) {
    let n = 8;
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let k = r.gen_range(0..=3);
            let mut s: Vec<usize> = (0..k).map(|_| r.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let set = |r: &mut ChaCha8Rng| {
        let mut b = FixedBitSet::with_capacity(n);
        for v in 0..n {
            if r.gen_bool(0.3) {
                b.insert(v);
            }
        }
        b
    };
    let pairs = (0..r.gen_range(0..=3)).map(|_| StreettPair { e: set(r), c: set(r) }).collect();
    (succ, StreettCondition { pairs })
}

/// Whether the vertex set `s` (a bit mask) induces a strongly connected
/// subgraph with at least one edge.
pub fn strongly_connected(succ: &[Vec<usize>], s: u32) -> bool {
    let members: Vec<usize> = (0..succ.len()).filter(|v| s >> v & 1 == 1).collect();
    let Some(&first) = members.first() else { return false };
    let reach_from = |start: usize, forward: bool| {
        let mut seen = 0u32;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in 0..succ.len() {
                let edge = if forward { succ[u].contains(&w) } else { succ[w].contains(&u) };
                if edge && s >> w & 1 == 1 && seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen
    };
    // every member reachable from `first` by a nonempty path, both ways
    reach_from(first, true) == s && reach_from(first, false) == s
}

/// Enumerates every candidate set of infinitely visited vertices: a
/// strongly connected set reachable from the start satisfying all pairs.
pub fn exhaustive_nonempty(succ: &[Vec<usize>], start: usize, cond: &StreettCondition) -> bool {
    let n = succ.len();
    let mut reach = 1u32 << start;
    loop {
        let before = reach;
        for v in 0..n {
            if reach >> v & 1 == 1 {
                for &w in &succ[v] {
                    reach |= 1 << w;
                }
            }
        }
        if reach == before {
            break;
        }
    }
    (1u32..1 << n).any(|s| {
        s & !reach == 0
            && strongly_connected(succ, s)
            && cond.pairs.iter().all(|p| {
                let hits = |b: &FixedBitSet| (0..n).any(|v| s >> v & 1 == 1 && b.contains(v));
                !hits(&p.e) || hits(&p.c)
            })
    })
}

/// A product of the game with every goal automaton, built independently of
/// the library's product: vertex `(s, q_1, .., q_n)` where each `q_i` has
/// read the labels of the states before `s`.
pub struct Oracle<'a> {
    pub g: &'a LtlGame,
    pub dpws: Vec<Dpw>,
    /// `pun[j]`: pairs `(s, q_j)` from which the others can keep `j` losing.
    pub pun: Vec<HashMap<(usize, usize), bool>>,
}

impl<'a> Oracle<'a> {
    pub fn new(g: &'a LtlGame) -> Self {
        let dpws: Vec<Dpw> = g.goals.iter().map(|f| ltl_to_dpw(f).unwrap()).collect();
        let pun = (0..g.cgs.num_players()).map(|j| punishment_oracle(g, &dpws[j], j)).collect();
        Oracle { g, dpws, pun }
    }

    pub fn step(&self, v: &(usize, Vec<usize>), ja: &[usize]) -> (usize, Vec<usize>) {
        let (s, qs) = v;
        let t = self.g.cgs.tr(*s, ja).unwrap();
        let label = &self.g.labels[*s];
        (t, qs.iter().zip(&self.dpws).map(|(&q, d)| d.step_label(q, label)).collect())
    }

    /// Every unilateral deviation of every loser from `ja` at `v` lands in
    /// that loser's punishment region, and so does `v`.
    pub fn secure(&self, v: &(usize, Vec<usize>), ja: &[usize], losers: &[usize]) -> bool {
        let (s, qs) = v;
        losers.iter().all(|&j| {
            self.pun[j][&(*s, qs[j])]
                && self.g.cgs.available(*s, j).iter().all(|&a| {
                    let (t, q2) = self.step(v, &with_action(ja, j, a));
                    self.pun[j][&(t, q2[j])]
                })
        })
    }

    /// Searches lassos of at most `max_len` positions in the part of the
    /// product that is secure for `losers`, for one satisfying every
    /// player outside `losers`.
    pub fn ne_run_with_losers(&self, losers: &[usize], max_len: usize) -> bool {
        let n = self.g.cgs.num_players();
        let init = (self.g.cgs.initial, self.dpws.iter().map(|d| d.initial).collect::<Vec<_>>());
        // secure edges of the reachable product
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut verts = vec![init.clone()];
        ids.insert(init, 0);
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut k = 0;
        while k < verts.len() {
            let v = verts[k].clone();
            let mut row = Vec::new();
            for (ja, _) in self.g.cgs.moves(v.0) {
                if !self.secure(&v, &ja, losers) {
                    continue;
                }
                let w = self.step(&v, &ja);
                let id = *ids.entry(w.clone()).or_insert_with(|| {
                    verts.push(w);
                    verts.len() - 1
                });
                row.push(id);
            }
            row.sort_unstable();
            row.dedup();
            succ.push(row);
            k += 1;
        }
        assert!(verts.len() <= 128);
        // shortest prefixes
        let mut prefix: Vec<Option<Vec<usize>>> = vec![None; verts.len()];
        prefix[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &succ[v] {
                if prefix[w].is_none() {
                    let mut p = prefix[v].clone().unwrap();
                    p.push(v);
                    prefix[w] = Some(p);
                    queue.push_back(w);
                }
            }
        }
        let winners: Vec<usize> = (0..n).filter(|i| !losers.contains(i)).collect();
        for c in 0..verts.len() {
            let Some(pre) = &prefix[c] else { continue };
            if pre.len() >= max_len {
                continue;
            }
            // closed walks from c, one representative per visited set
            let mut layer: BTreeMap<(usize, u128), Vec<usize>> = BTreeMap::new();
            layer.insert((c, 1 << c), vec![c]);
            for _ in 0..max_len - pre.len() {
                let mut next = BTreeMap::new();
                for ((v, set), walk) in &layer {
                    for &w in &succ[*v] {
                        if w == c {
                            let word = UltimatelyPeriodicWord::new(
                                pre.iter().map(|&u| self.g.labels[verts[u].0].clone()).collect(),
                                walk.iter().map(|&u| self.g.labels[verts[u].0].clone()).collect(),
                            );
                            if winners.iter().all(|&i| eval_lasso(&self.g.goals[i], &word)) {
                                return true;
                            }
                        }
                        let mut w2 = walk.clone();
                        w2.push(w);
                        next.entry((w, set | 1 << w)).or_insert(w2);
                    }
                }
                layer = next;
            }
        }
        false
    }

    pub fn ne_exists(&self, max_len: usize) -> bool {
        let n = self.g.cgs.num_players();
        (0..1u32 << n).any(|mask| {
            let losers: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            self.ne_run_with_losers(&losers, max_len)
        })
    }

    /// Checks a run of the game as an equilibrium run: replays it through
    /// the product until it closes, then audits winners and security.
    pub fn audit_run(&self, l: &eve_core::game::Lasso) -> bool {
        let word = l.word(&self.g.labels);
        let n = self.g.cgs.num_players();
        let losers: Vec<usize> = (0..n).filter(|&i| !eval_lasso(&self.g.goals[i], &word)).collect();
        let steps: Vec<&(usize, JointAction)> = l.steps().collect();
        let mut v = (self.g.cgs.initial, self.dpws.iter().map(|d| d.initial).collect::<Vec<_>>());
        let mut seen = std::collections::HashSet::new();
        let mut k = 0;
        loop {
            let (s, ja) = steps[k];
            assert_eq!(*s, v.0);
            if !seen.insert((v.clone(), k)) {
                return true;
            }
            if !self.secure(&v, ja, &losers) {
                return false;
            }
            v = self.step(&v, ja);
            k += 1;
            if k == steps.len() {
                k = l.prefix.len();
            }
        }
    }
}

/// `Pun_j` on the pairs `(s, q)` by trying every memoryless choice of the
/// other players' actions: the others win from a pair if some choice
/// leaves `j` without a reachable cycle of even least priority.
pub fn punishment_oracle(g: &LtlGame, d: &Dpw, j: usize) -> HashMap<(usize, usize), bool> {
    let cgs = &g.cgs;
    let verts: Vec<(usize, usize)> =
        (0..cgs.num_states()).flat_map(|s| (0..d.num_states()).map(move |q| (s, q))).collect();
    let index = |s: usize, q: usize| s * d.num_states() + q;
    let options: Vec<Vec<JointAction>> = verts.iter().map(|&(s, _)| cgs.partial_profiles(s, j)).collect();
    let total: usize = options.iter().map(|o| o.len()).product();
    assert!(total <= 1 << 18, "oracle instance too large");
    let priority: Vec<u32> = verts.iter().map(|&(_, q)| d.priority[q]).collect();
    let mut pun = vec![false; verts.len()];
    for mut code in 0..total {
        let succ: Vec<Vec<usize>> = verts
            .iter()
            .enumerate()
            .map(|(v, &(s, q))| {
                let choice = &options[v][code % options[v].len()];
                code /= options[v].len();
                let q2 = d.step_label(q, &g.labels[s]);
                cgs.available(s, j)
                    .iter()
                    .map(|&a| index(cgs.tr(s, &with_action(choice, j, a)).unwrap(), q2))
                    .collect()
            })
            .collect();
        let escapes = can_reach_even_cycle(&succ, &priority);
        for v in 0..verts.len() {
            pun[v] |= !escapes[v];
        }
    }
    verts.iter().enumerate().map(|(v, &p)| (p, pun[v])).collect()
}

/// Tiny two-player games whose punishment oracle stays cheap.
pub fn tiny_games(seed: u64, count: usize) -> Vec<LtlGame> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let states = r.gen_range(1..=4);
        let g = ltl_game(&mut r, 2, states, 4, &ATOMS);
        let small = g.goals.iter().all(|f| {
            let d = ltl_to_dpw(f).unwrap();
            let free: usize = (0..states).filter(|&s| g.cgs.available(s, 0).len() > 1 || g.cgs.available(s, 1).len() > 1).count();
            states * d.num_states() <= 12 && free * d.num_states() <= 14
        });
        if small {
            out.push(g);
        }
    }
    out
}

/// Rings where each step advances by the number of `b`s played, with a
/// random labelling and opposed recurrence goals: the kind of game where
/// equilibria can fail to exist.
pub fn pursuit_games(seed: u64, count: usize) -> Vec<LtlGame> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let states = r.gen_range(2..=3);
            let c = Cgs::new(
                vec!["P0".into(), "P1".into()],
                vec![vec!["a".into(), "b".into()]; 2],
                (0..states).map(|s| format!("s{s}")).collect(),
                0,
                vec![vec![vec![0, 1]; 2]; states],
                |s, ja| Ok((s + ja[0] + ja[1]) % states),
            )
            .unwrap();
            let labels = (0..states).map(|_| super::label(&mut r, &ATOMS)).collect();
            let x = ATOMS[r.gen_range(0..2)];
            let goals = match r.gen_range(0..3) {
                0 => [format!("G F {x}"), format!("F G ~{x}")],
                1 => [format!("F G ~{x}"), format!("G F {x}")],
                _ => [format!("G F {x}"), format!("G ~{x}")],
            };
            LtlGame::new(c, labels, goals.iter().map(|f| parse_ltl(f).unwrap()).collect()).unwrap()
        })
        .collect()
}
