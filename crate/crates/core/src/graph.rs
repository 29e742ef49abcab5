//! Small directed-graph helpers over adjacency lists, restricted to a vertex
//! subset given as a bitset.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

/// Successor lists indexed by vertex.
pub type Adjacency = Vec<Vec<usize>>;

/// Strongly connected components of the subgraph induced by `within`,
/// in reverse topological order (Tarjan).
pub fn sccs(succ: &Adjacency, within: &FixedBitSet) -> Vec<Vec<usize>> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = FixedBitSet::with_capacity(n);
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    // explicit call stack of (vertex, next child position)
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in within.ones() {
        if index[root] != UNSEEN {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack.insert(root);
        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if !within.contains(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    frames.push((w, 0));
                } else if on_stack.contains(w) {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack.set(w, false);
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// True if the component has at least one internal edge.
pub fn is_nontrivial(succ: &Adjacency, comp: &[usize]) -> bool {
    comp.len() > 1 || succ[comp[0]].contains(&comp[0])
}

/// Vertices of `within` reachable from `from` (which must lie in `within`).
pub fn reachable(succ: &Adjacency, from: &[usize], within: &FixedBitSet) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(succ.len());
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in from {
        if within.contains(v) && !seen.put(v) {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if within.contains(w) && !seen.put(w) {
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path (breadth first, lowest successor first) from `from` to a
/// vertex satisfying `goal`, using at least `min_edges` edges (0 or 1) and
/// staying inside `within`. The returned path includes both endpoints.
pub fn shortest_path(
    succ: &Adjacency,
    from: usize,
    goal: impl Fn(usize) -> bool,
    within: &FixedBitSet,
    min_edges: usize,
) -> Option<Vec<usize>> {
    if min_edges == 0 && goal(from) {
        return Some(vec![from]);
    }
    let n = succ.len();
    let mut parent = vec![usize::MAX; n];
    let mut seen = FixedBitSet::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut first = succ[from].clone();
    first.sort_unstable();
    for w in first {
        if within.contains(w) && !seen.put(w) {
            parent[w] = from;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = vec![v];
            let mut cur = v;
            loop {
                cur = parent[cur];
                path.push(cur);
                if cur == from {
                    break;
                }
            }
            path.reverse();
            return Some(path);
        }
        let mut next = succ[v].clone();
        next.sort_unstable();
        for w in next {
            if within.contains(w) && !seen.put(w) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

pub fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}
