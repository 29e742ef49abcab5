//! The shipped example models.

use std::collections::{HashSet, VecDeque};

use eve_core::equilibrium::{e_nash, non_emptiness, Analysis, Options};
use eve_core::game::{parse_arena, LtlGame};
use eve_core::ltl::parse_ltl;
use eve_core::srml::{parse_srml, srml_game, DEFAULT_STATE_CAP};

fn read(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn srml(name: &str) -> LtlGame {
    srml_game(&parse_srml(&read(name)).unwrap(), DEFAULT_STATE_CAP).unwrap()
}

fn arena(name: &str) -> LtlGame {
    parse_arena(&read(name)).unwrap()
}

#[test]
fn gossip_sizes() {
    for (p, states) in [(2, 4), (3, 8), (4, 16)] {
        let g = srml(&format!("gossip{p}.srml"));
        // valuations plus the pre-initial state
        assert_eq!(g.cgs.num_states(), states + 1, "gossip{p}");
        let edges = g.cgs.edge_count() - g.cgs.num_joint(g.cgs.initial);
        assert_eq!(edges, 3usize.pow(p), "gossip{p}");
    }
}

#[test]
fn replica_sizes() {
    for (n, edges) in [(2, 8), (3, 20)] {
        let g = arena(&format!("replica{n}.arena"));
        assert_eq!(g.cgs.num_states(), n + 1);
        assert_eq!(g.cgs.num_players(), n);
        assert_eq!(g.cgs.edge_count(), edges);
    }
}

#[test]
fn gossip_equilibria_exist() {
    for p in [2, 3, 4] {
        assert!(non_emptiness(&srml(&format!("gossip{p}.srml"))).unwrap().is_yes());
    }
}

#[test]
fn toggle_and_no_ne() {
    assert!(non_emptiness(&srml("toggle.srml")).unwrap().is_yes());
    assert!(!non_emptiness(&arena("no_ne.arena")).unwrap().is_yes());
}

type Cell = (usize, usize);

/// Free cells from the map drawn in a grid file's header.
fn grid_map(text: &str) -> Vec<Vec<bool>> {
    text.lines()
        .skip_while(|l| !l.contains("layout"))
        .skip(1)
        .take_while(|l| l.starts_with("#   "))
        .map(|l| l[4..].chars().map(|c| c != '#').collect())
        .collect()
}

/// Joint-position search: both agents reach their targets without sharing
/// a cell, from a position where the play can continue safely forever.
fn cooperative_safe_run(free: &[Vec<bool>]) -> bool {
    let n = free.len();
    let ok = |(x, y): Cell| free[y][x];
    let step = |c: Cell| -> Vec<Cell> {
        let (x, y) = (c.0 as isize, c.1 as isize);
        let out: Vec<Cell> = [(0, -1), (0, 1), (1, 0), (-1, 0)]
            .iter()
            .map(|(dx, dy)| (x + dx, y + dy))
            .filter(|&(a, b)| a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n)
            .map(|(a, b)| (a as usize, b as usize))
            .filter(|&t| ok(t))
            .collect();
        if out.is_empty() { vec![c] } else { out }
    };
    let cells: Vec<Cell> = (0..n).flat_map(|y| (0..n).map(move |x| (x, y))).filter(|&c| ok(c)).collect();
    let succ = |(a, b): (Cell, Cell)| -> Vec<(Cell, Cell)> {
        step(a).into_iter().flat_map(|s| step(b).into_iter().map(move |t| (s, t))).filter(|(s, t)| s != t).collect()
    };
    let mut alive: HashSet<(Cell, Cell)> =
        cells.iter().flat_map(|&a| cells.iter().map(move |&b| (a, b))).filter(|(a, b)| a != b).collect();
    loop {
        let dead: Vec<_> = alive.iter().copied().filter(|&v| !succ(v).iter().any(|w| alive.contains(w))).collect();
        if dead.is_empty() {
            break;
        }
        for v in dead {
            alive.remove(&v);
        }
    }
    let corner = (n - 1, n - 1);
    let start = ((0, 0), corner);
    if !alive.contains(&start) {
        return false;
    }
    let mut seen = HashSet::from([(start, false, false)]);
    let mut todo = VecDeque::from([(start, false, false)]);
    while let Some((v, f1, f2)) = todo.pop_front() {
        let (f1, f2) = (f1 || v.0 == corner, f2 || v.1 == (0, 0));
        if f1 && f2 {
            return true;
        }
        for w in succ(v) {
            if alive.contains(&w) && seen.insert((w, f1, f2)) {
                todo.push_back((w, f1, f2));
            }
        }
    }
    false
}

#[test]
fn grid_safety_matches_search() {
    for (name, expected) in [("grid_fig1.srml", false), ("grid_fig2.srml", true)] {
        let text = read(name);
        let map = grid_map(&text);
        assert_eq!(map.len(), 4);
        assert_eq!(cooperative_safe_run(&map), expected, "{name}");
        let safety = text.lines().find_map(|l| l.strip_prefix("# collision freedom: ")).unwrap();
        let g = srml(name);
        let v = e_nash(&g, &parse_ltl(safety).unwrap()).unwrap();
        assert_eq!(v.is_yes(), expected, "{name}");
        if expected {
            assert_eq!(v.winners, vec![0, 1]);
        }
    }
}

#[test]
fn bisim_fixture_punishes_z_after_p_or_q() {
    let g = arena("bisim1.arena");
    let a = Analysis::new(&g, Options::default()).unwrap();
    let z = g.cgs.player_index("z").unwrap();
    let pun = a.punishment(z);
    let mut seen = 0;
    for s in 0..a.parity.cgs.num_states() {
        let name = &g.cgs.state_names[a.parity.base[s]];
        if name == "s2" || name == "s3" {
            assert!(pun.contains(s), "{}", a.parity.cgs.state_names[s]);
            seen += 1;
        }
        if name == "s4" {
            assert!(!pun.contains(s));
        }
    }
    assert!(seen > 0);
}

#[test]
fn bisimilar_fixtures_agree() {
    let (g1, g2) = (arena("bisim1.arena"), arena("bisim2.arena"));
    assert_eq!(non_emptiness(&g1).unwrap().is_yes(), non_emptiness(&g2).unwrap().is_yes());
    for phi in ["F p", "F q", "G ~(p | q)"] {
        let phi = parse_ltl(phi).unwrap();
        assert_eq!(e_nash(&g1, &phi).unwrap().is_yes(), e_nash(&g2, &phi).unwrap().is_yes(), "{phi}");
    }
}
