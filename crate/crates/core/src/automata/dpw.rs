use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::Alphabet;
use crate::graph::{self, Adjacency};
use crate::ltl::{Label, UltimatelyPeriodicWord};

/// Deterministic, complete parity automaton with priorities on states. A run
/// accepts iff the least priority visited infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpw {
    pub alphabet: Alphabet,
    pub initial: usize,
    pub priority: Vec<u32>,
    /// `trans[q * alphabet.size() + letter]`
    trans: Vec<usize>,
}

impl Dpw {
    /// Panics unless `trans` has one entry per (state, letter) pair and all
    /// targets exist.
    pub fn new(alphabet: Alphabet, initial: usize, priority: Vec<u32>, trans: Vec<usize>) -> Self {
        let n = priority.len();
        assert!(initial < n, "initial state out of range");
        assert_eq!(trans.len(), n * alphabet.size(), "transition table is not total");
        assert!(trans.iter().all(|&t| t < n), "transition to unknown state");
        Dpw { alphabet, initial, priority, trans }
    }

    /// One state, self-loops on every letter.
    pub fn constant(alphabet: Alphabet, priority: u32) -> Self {
        let letters = alphabet.size();
        Dpw::new(alphabet, 0, vec![priority], vec![0; letters])
    }

    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.trans[q * self.alphabet.size() + letter]
    }

    pub fn step_label(&self, q: usize, label: &Label) -> usize {
        self.step(q, self.alphabet.letter_of(label))
    }

    pub fn priorities_used(&self) -> BTreeSet<u32> {
        self.priority.iter().copied().collect()
    }

    /// Runs the automaton over the word. The run is periodic once a pair
    /// (automaton state, cycle position) repeats; the verdict is the parity
    /// of the least priority on that period.
    pub fn accepts_lasso(&self, w: &UltimatelyPeriodicWord) -> bool {
        let mut q = self.initial;
        for l in &w.prefix {
            q = self.step_label(q, l);
        }
        let c = w.cycle.len();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut trace = Vec::new();
        let mut i = 0;
        loop {
            if let Some(&start) = seen.get(&(q, i)) {
                let min = trace[start..].iter().map(|&s| self.priority[s]).min().unwrap();
                return min % 2 == 0;
            }
            seen.insert((q, i), trace.len());
            trace.push(q);
            q = self.step_label(q, &w.cycle[i]);
            i = (i + 1) % c;
        }
    }

    /// Normalises the priorities of transient states, merges states with equal priority and equivalent successors (Moore
    /// partition refinement), drops unreachable states and compresses the
    /// priorities while keeping their order and parity.
    pub fn minimize(&self) -> Dpw {
        let letters = self.alphabet.size();
        // reachable states in BFS order
        let mut order = vec![self.initial];
        let mut index = HashMap::from([(self.initial, 0usize)]);
        let mut k = 0;
        while k < order.len() {
            let q = order[k];
            for a in 0..letters {
                let t = self.step(q, a);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(t) {
                    e.insert(order.len());
                    order.push(t);
                }
            }
            k += 1;
        }
        let n = order.len();
        let succ = |i: usize, a: usize| index[&self.step(order[i], a)];
        let mut prio: Vec<u32> = order.iter().map(|&q| self.priority[q]).collect();
        // A state on no cycle is seen at most once, so its priority is free;
        // copy the successors' priority when they agree.
        let succ_lists: Adjacency = (0..n)
            .map(|i| {
                let mut v: Vec<usize> = (0..letters).map(|a| succ(i, a)).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        for comp in graph::sccs(&succ_lists, &graph::full_set(n)) {
            if graph::is_nontrivial(&succ_lists, &comp) {
                continue;
            }
            let i = comp[0];
            let first = prio[succ_lists[i][0]];
            if succ_lists[i].iter().all(|&t| prio[t] == first) {
                prio[i] = first;
            }
        }
        let prio = compress_priorities(&prio);

        let mut block: Vec<usize> = prio.iter().map(|&p| p as usize).collect();
        let mut count = 0;
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|i| {
                    let mut key = Vec::with_capacity(letters + 1);
                    key.push(block[i]);
                    key.extend((0..letters).map(|a| block[succ(i, a)]));
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
        // renumber blocks in order of first appearance for a canonical result
        let mut canon = vec![usize::MAX; count];
        let mut next_id = 0;
        for &b in &block {
            if canon[b] == usize::MAX {
                canon[b] = next_id;
                next_id += 1;
            }
        }
        let mut priority = vec![0; count];
        let mut trans = vec![0; count * letters];
        for i in 0..n {
            let b = canon[block[i]];
            priority[b] = prio[i];
            for a in 0..letters {
                trans[b * letters + a] = canon[block[succ(i, a)]];
            }
        }
        Dpw::new(self.alphabet.clone(), canon[block[0]], priority, trans)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dpw {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  init [shape=point]; init -> q{};", self.initial);
        for q in 0..self.num_states() {
            let _ = writeln!(out, "  q{q} [label=\"q{q} / {}\"];", self.priority[q]);
        }
        for q in 0..self.num_states() {
            let mut by_target: HashMap<usize, Vec<String>> = HashMap::new();
            for a in 0..self.alphabet.size() {
                by_target.entry(self.step(q, a)).or_default().push(self.alphabet.letter_name(a));
            }
            let mut targets: Vec<_> = by_target.into_iter().collect();
            targets.sort();
            for (t, ls) in targets {
                let _ = writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", ls.join(" "));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Maps priorities onto the smallest values with the same relative order and
/// parity; runs of equal parity collapse to one value.
pub(crate) fn compress_priorities(ps: &[u32]) -> Vec<u32> {
    let distinct: BTreeSet<u32> = ps.iter().copied().collect();
    let mut map = HashMap::new();
    let mut current: Option<u32> = None;
    for p in distinct {
        let v = match current {
            None => p % 2,
            Some(c) if c % 2 == p % 2 => c,
            Some(c) => c + 1,
        };
        map.insert(p, v);
        current = Some(v);
    }
    ps.iter().map(|p| map[p]).collect()
}
