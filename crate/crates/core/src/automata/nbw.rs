use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;

use super::Alphabet;
use crate::graph::{self, Adjacency};
use crate::ltl::{LtlFormula, UltimatelyPeriodicWord};

/// An edge enabled on every letter that contains all atoms of `pos` and
/// none of `neg` (both bitmasks over the automaton's alphabet).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NbwEdge {
    pub pos: u32,
    pub neg: u32,
    pub target: usize,
}

impl NbwEdge {
    pub fn enabled(&self, letter: usize) -> bool {
        let l = letter as u32;
        l & self.pos == self.pos && l & self.neg == 0
    }
}

/// Nondeterministic Büchi automaton with state-based acceptance.
#[derive(Clone, Debug)]
pub struct Nbw {
    pub alphabet: Alphabet,
    pub initial: Vec<usize>,
    pub edges: Vec<Vec<NbwEdge>>,
    pub accepting: Vec<bool>,
}

impl Nbw {
    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn successors(&self, q: usize, letter: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[q].iter().filter(move |e| e.enabled(letter)).map(|e| e.target)
    }

    /// Membership of an ultimately periodic word, decided by searching the
    /// product of the automaton with the word's lasso for a reachable cycle
    /// through an accepting state.
    pub fn accepts_lasso(&self, w: &UltimatelyPeriodicWord) -> bool {
        let positions = w.positions();
        let n = self.num_states();
        let id = |q: usize, i: usize| q * positions + i;
        let mut succ: Adjacency = vec![Vec::new(); n * positions];
        for q in 0..n {
            for i in 0..positions {
                let letter = self.alphabet.letter_of(w.at(i));
                let j = if i + 1 < positions { i + 1 } else { w.prefix.len() };
                succ[id(q, i)] = self.successors(q, letter).map(|t| id(t, j)).collect();
            }
        }
        let starts: Vec<usize> = self.initial.iter().map(|&q| id(q, 0)).collect();
        let reach = graph::reachable(&succ, &starts, &graph::full_set(n * positions));
        graph::sccs(&succ, &reach).iter().any(|comp| {
            graph::is_nontrivial(&succ, comp) && comp.iter().any(|&v| self.accepting[v / positions])
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph nbw {\n  rankdir=LR;\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        for &q in &self.initial {
            let _ = writeln!(out, "  init{q} [shape=point]; init{q} -> q{q};");
        }
        for (q, es) in self.edges.iter().enumerate() {
            for e in es {
                let _ = writeln!(
                    out,
                    "  q{q} -> q{} [label=\"{}\"];",
                    e.target,
                    self.guard_text(e)
                );
            }
        }
        out.push_str("}\n");
        out
    }

    fn guard_text(&self, e: &NbwEdge) -> String {
        let mut lits = Vec::new();
        for (i, a) in self.alphabet.atoms().iter().enumerate() {
            if e.pos >> i & 1 == 1 {
                lits.push(a.clone());
            }
            if e.neg >> i & 1 == 1 {
                lits.push(format!("~{a}"));
            }
        }
        if lits.is_empty() {
            "true".into()
        } else {
            lits.join(" & ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(u32, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

/// One way of satisfying a set of obligations at the current position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cover {
    pos: u32,
    neg: u32,
    next: BTreeSet<usize>,
    /// Until subformulas whose eventuality was postponed.
    delayed: BTreeSet<usize>,
}

struct Tableau {
    alphabet: Alphabet,
    nodes: IndexSet<Node>,
    expansions: HashMap<usize, Vec<Cover>>,
}

impl Tableau {
    fn intern(&mut self, f: &LtlFormula) -> usize {
        use LtlFormula as L;
        let node = match f {
            L::True => Node::True,
            L::Not(a) if **a == L::True => Node::False,
            L::Atom(p) => Node::Lit(self.atom_index(p), true),
            L::Not(a) => match &**a {
                L::Atom(p) => Node::Lit(self.atom_index(p), false),
                _ => unreachable!("formula not in negation normal form"),
            },
            L::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            L::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            L::Next(a) => Node::Next(self.intern(a)),
            L::Until(a, b) => Node::Until(self.intern(a), self.intern(b)),
            L::Release(a, b) => Node::Release(self.intern(a), self.intern(b)),
            L::Implies(..) | L::Eventually(_) | L::Always(_) => {
                unreachable!("formula not in negation normal form")
            }
        };
        self.nodes.insert_full(node).0
    }

    fn atom_index(&self, p: &str) -> u32 {
        self.alphabet.atoms().iter().position(|a| a == p).expect("atom in alphabet") as u32
    }

    fn expand(&mut self, id: usize) -> Vec<Cover> {
        if let Some(c) = self.expansions.get(&id) {
            return c.clone();
        }
        let empty = Cover {
            pos: 0,
            neg: 0,
            next: BTreeSet::new(),
            delayed: BTreeSet::new(),
        };
        let covers = match self.nodes[id].clone() {
            Node::True => vec![empty],
            Node::False => vec![],
            Node::Lit(i, true) => vec![Cover { pos: 1 << i, ..empty }],
            Node::Lit(i, false) => vec![Cover { neg: 1 << i, ..empty }],
            Node::And(a, b) => {
                let (ca, cb) = (self.expand(a), self.expand(b));
                product(&ca, &cb)
            }
            Node::Or(a, b) => {
                let mut c = self.expand(a);
                c.extend(self.expand(b));
                dedup(c)
            }
            Node::Next(a) => vec![Cover { next: [a].into(), ..empty }],
            Node::Until(a, b) => {
                let mut c = self.expand(b);
                let later = Cover {
                    next: [id].into(),
                    delayed: [id].into(),
                    ..empty
                };
                let ca = self.expand(a);
                c.extend(product(&ca, &[later]));
                dedup(c)
            }
            Node::Release(a, b) => {
                let cb = self.expand(b);
                let ca = self.expand(a);
                let mut c = product(&cb, &ca);
                let later = Cover { next: [id].into(), ..empty };
                c.extend(product(&cb, &[later]));
                dedup(c)
            }
        };
        self.expansions.insert(id, covers.clone());
        covers
    }
}

fn product(a: &[Cover], b: &[Cover]) -> Vec<Cover> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let pos = x.pos | y.pos;
            let neg = x.neg | y.neg;
            if pos & neg != 0 {
                continue;
            }
            out.push(Cover {
                pos,
                neg,
                next: x.next.union(&y.next).copied().collect(),
                delayed: x.delayed.union(&y.delayed).copied().collect(),
            });
        }
    }
    dedup(out)
}

fn dedup(mut c: Vec<Cover>) -> Vec<Cover> {
    c.sort();
    c.dedup();
    c
}

/// Tableau translation of `f` into a Büchi automaton over the atoms of `f`.
///
/// States are pairs (obligations, postponed eventualities). A generalized
/// Büchi set per Until asks that it is not postponed infinitely often; the
/// result is degeneralized with a round-robin counter and pruned to states
/// that can still reach an accepting cycle.
pub fn ltl_to_nbw(f: &LtlFormula) -> Nbw {
    let alphabet = Alphabet::new(f.atoms());
    let mut tab = Tableau {
        alphabet: alphabet.clone(),
        nodes: IndexSet::new(),
        expansions: HashMap::new(),
    };
    let root = tab.intern(&f.to_nnf());

    type State = (BTreeSet<usize>, BTreeSet<usize>);
    let mut states: IndexSet<State> = IndexSet::new();
    states.insert(([root].into(), BTreeSet::new()));
    let mut gen_edges: Vec<Vec<NbwEdge>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let (obligations, _) = states[k].clone();
        let mut covers = vec![Cover {
            pos: 0,
            neg: 0,
            next: BTreeSet::new(),
            delayed: BTreeSet::new(),
        }];
        for &o in &obligations {
            let c = tab.expand(o);
            covers = product(&covers, &c);
        }
        let mut es = Vec::new();
        for c in covers {
            let target = states.insert_full((c.next, c.delayed)).0;
            es.push(NbwEdge { pos: c.pos, neg: c.neg, target });
        }
        es.sort();
        es.dedup();
        gen_edges.push(es);
        k += 1;
    }

    let untils: Vec<usize> = {
        let all: BTreeSet<usize> = states.iter().flat_map(|(_, d)| d.iter().copied()).collect();
        all.into_iter().collect()
    };
    let fair = |q: usize, i: usize| !states[q].1.contains(&untils[i]);

    // Degeneralize: (q, i) with i the index of the Büchi set awaited next.
    let rounds = untils.len().max(1);
    let n = states.len() * rounds;
    let id = |q: usize, i: usize| q * rounds + i;
    let mut edges: Vec<Vec<NbwEdge>> = vec![Vec::new(); n];
    let mut accepting = vec![false; n];
    for q in 0..states.len() {
        for i in 0..rounds {
            let passed = untils.is_empty() || fair(q, i);
            accepting[id(q, i)] = i == 0 && passed;
            let j = if passed { (i + 1) % rounds } else { i };
            edges[id(q, i)] = gen_edges[q]
                .iter()
                .map(|e| NbwEdge { target: id(e.target, j), ..*e })
                .collect();
        }
    }
    quotient(prune(Nbw { alphabet, initial: vec![id(0, 0)], edges, accepting }))
}

/// Clears the acceptance flag of states that lie on no cycle (they are
/// visited at most once) and merges bisimilar states.
pub(crate) fn quotient(mut a: Nbw) -> Nbw {
    let n = a.num_states();
    let succ: Adjacency = a.edges.iter().map(|es| es.iter().map(|e| e.target).collect()).collect();
    for comp in graph::sccs(&succ, &graph::full_set(n)) {
        if !graph::is_nontrivial(&succ, &comp) {
            a.accepting[comp[0]] = false;
        }
    }
    let mut block: Vec<usize> = a.accepting.iter().map(|&b| b as usize).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(bool, usize, Vec<(u32, u32, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let mut sig: Vec<_> = a.edges[q].iter().map(|e| (e.pos, e.neg, block[e.target])).collect();
                sig.sort_unstable();
                sig.dedup();
                let key = (a.accepting[q], block[q], sig);
                let fresh = ids.len();
                *ids.entry(key).or_insert(fresh)
            })
            .collect();
        let blocks = ids.len();
        block = next;
        if blocks == count {
            break;
        }
        count = blocks;
    }
    let mut edges = vec![Vec::new(); count];
    let mut accepting = vec![false; count];
    for q in 0..n {
        let b = block[q];
        accepting[b] = a.accepting[q];
        let mut es: Vec<NbwEdge> =
            a.edges[q].iter().map(|e| NbwEdge { target: block[e.target], ..*e }).collect();
        es.sort();
        es.dedup();
        edges[b] = es;
    }
    let mut initial: Vec<usize> = a.initial.iter().map(|&q| block[q]).collect();
    initial.sort_unstable();
    initial.dedup();
    Nbw { alphabet: a.alphabet, initial, edges, accepting }
}

/// Keeps the states that are reachable and can reach an accepting cycle.
pub(crate) fn prune(a: Nbw) -> Nbw {
    let n = a.num_states();
    let succ: Adjacency = a.edges.iter().map(|es| es.iter().map(|e| e.target).collect()).collect();
    let reach = graph::reachable(&succ, &a.initial, &graph::full_set(n));
    let mut good = FixedBitSet::with_capacity(n);
    for comp in graph::sccs(&succ, &reach) {
        if graph::is_nontrivial(&succ, &comp) && comp.iter().any(|&q| a.accepting[q]) {
            for q in comp {
                good.insert(q);
            }
        }
    }
    let mut pred: Adjacency = vec![Vec::new(); n];
    for (q, ss) in succ.iter().enumerate() {
        for &t in ss {
            pred[t].push(q);
        }
    }
    let seeds: Vec<usize> = good.ones().collect();
    let alive = graph::reachable(&pred, &seeds, &reach);
    let mut renumber = vec![usize::MAX; n];
    for (new, old) in alive.ones().enumerate() {
        renumber[old] = new;
    }
    let edges = alive
        .ones()
        .map(|q| {
            a.edges[q]
                .iter()
                .filter(|e| alive.contains(e.target))
                .map(|e| NbwEdge { target: renumber[e.target], ..*e })
                .collect()
        })
        .collect();
    Nbw {
        initial: a.initial.iter().filter(|&&q| alive.contains(q)).map(|&q| renumber[q]).collect(),
        accepting: alive.ones().map(|q| a.accepting[q]).collect(),
        edges,
        alphabet: a.alphabet,
    }
}
