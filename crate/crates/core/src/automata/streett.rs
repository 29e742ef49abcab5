use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::graph::{self, Adjacency};

/// `(E, C)`: a run is fine if it visits `E` finitely often or `C`
/// infinitely often.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreettPair {
    pub e: FixedBitSet,
    pub c: FixedBitSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StreettCondition {
    pub pairs: Vec<StreettPair>,
}

impl StreettCondition {
    pub fn extend(&mut self, other: StreettCondition) {
        self.pairs.extend(other.pairs);
    }

    /// Whether a run whose infinitely visited vertices are `inf` satisfies
    /// every pair.
    pub fn satisfied_by(&self, inf: &[usize]) -> bool {
        self.pairs.iter().all(|p| {
            !inf.iter().any(|&v| p.e.contains(v)) || inf.iter().any(|&v| p.c.contains(v))
        })
    }
}

/// One pair per odd priority `p` in use: `E` holds the vertices of priority
/// `p`, `C` those with an even priority below `p`.
pub fn parity_to_streett(priority: &[u32]) -> StreettCondition {
    let n = priority.len();
    let mut by_odd: BTreeMap<u32, FixedBitSet> = BTreeMap::new();
    for (v, &p) in priority.iter().enumerate() {
        if p % 2 == 1 {
            by_odd.entry(p).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(v);
        }
    }
    let pairs = by_odd
        .into_iter()
        .map(|(p, e)| {
            let mut c = FixedBitSet::with_capacity(n);
            for (v, &q) in priority.iter().enumerate() {
                if q % 2 == 0 && q < p {
                    c.insert(v);
                }
            }
            StreettPair { e, c }
        })
        .collect();
    StreettCondition { pairs }
}

/// A path `prefix · cycle^ω` through a graph. The first cycle vertex follows
/// the last prefix vertex (or is the start when the prefix is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl VertexLasso {
    pub fn start(&self) -> usize {
        self.prefix.first().copied().unwrap_or(self.cycle[0])
    }

    /// Checks that consecutive vertices are joined by edges and the cycle
    /// closes.
    pub fn is_path_in(&self, succ: &Adjacency) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let walk: Vec<usize> = self.prefix.iter().chain(&self.cycle).copied().collect();
        walk.windows(2).all(|w| succ[w[0]].contains(&w[1]))
            && succ[*self.cycle.last().unwrap()].contains(&self.cycle[0])
    }
}

/// Searches for a path from `initial` whose infinitely visited vertices
/// satisfy `cond`.
///
/// Reachable strongly connected components are examined one by one. When a
/// component meets `E` of some pair but not its `C`, those `E` vertices can
/// only be visited finitely often, so they are deleted and the rest of the
/// component is decomposed again. A component with an edge and no such
/// conflict is accepting; the witness cycle walks through one `C` vertex
/// per pair whose `E` it meets.
pub fn streett_emptiness(
    succ: &Adjacency,
    initial: usize,
    cond: &StreettCondition,
) -> Option<VertexLasso> {
    let n = succ.len();
    let reach = graph::reachable(succ, &[initial], &graph::full_set(n));
    let mut work = vec![reach.clone()];
    while let Some(region) = work.pop() {
        let mut comps = graph::sccs(succ, &region);
        // smallest vertex first, for reproducible witnesses
        comps.sort();
        comps.reverse();
        for comp in comps {
            if !graph::is_nontrivial(succ, &comp) {
                continue;
            }
            let mut members = FixedBitSet::with_capacity(n);
            for &v in &comp {
                members.insert(v);
            }
            let mut bad = FixedBitSet::with_capacity(n);
            let mut conflict = false;
            for p in &cond.pairs {
                if p.e.is_disjoint(&members) || !p.c.is_disjoint(&members) {
                    continue;
                }
                conflict = true;
                bad.union_with(&p.e);
            }
            if conflict {
                members.difference_with(&bad);
                if !members.is_clear() {
                    work.push(members);
                }
                continue;
            }
            return Some(witness(succ, initial, &reach, &members, &comp, cond));
        }
    }
    None
}

fn witness(
    succ: &Adjacency,
    initial: usize,
    reach: &FixedBitSet,
    members: &FixedBitSet,
    comp: &[usize],
    cond: &StreettCondition,
) -> VertexLasso {
    let anchor = comp[0];
    let mut required: Vec<usize> = cond
        .pairs
        .iter()
        .filter(|p| !p.e.is_disjoint(members))
        .map(|p| p.c.ones().find(|&v| members.contains(v)).expect("C meets component"))
        .collect();
    required.sort_unstable();
    required.dedup();

    let mut cycle = vec![anchor];
    let mut cur = anchor;
    for &r in &required {
        if r == cur {
            continue;
        }
        let path = graph::shortest_path(succ, cur, |v| v == r, members, 1).expect("strongly connected");
        cycle.extend_from_slice(&path[1..]);
        cur = r;
    }
    let back = graph::shortest_path(succ, cur, |v| v == anchor, members, 1).expect("strongly connected");
    cycle.extend_from_slice(&back[1..back.len() - 1]);

    let mut prefix = graph::shortest_path(succ, initial, |v| v == anchor, reach, 0).expect("reachable");
    prefix.pop();
    VertexLasso { prefix, cycle }
}
