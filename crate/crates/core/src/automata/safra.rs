//! Safra-Piterman determinization of Büchi automata into parity automata.
//!
//! A state is a compact Safra tree: nodes are named `1..=k`, parents have
//! smaller names than their children and older siblings smaller names than
//! younger ones, so storing the nodes sorted by name fixes the whole tree.

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;

use super::dpw::Dpw;
use super::nbw::Nbw;
use super::DEFAULT_AUTOMATON_CAP;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct TreeNode {
    /// Position of the parent in the node vector; `usize::MAX` for the root.
    parent: usize,
    label: FixedBitSet,
}

type Tree = Vec<TreeNode>;

const ROOT: usize = usize::MAX;

struct Determinizer<'a> {
    nbw: &'a Nbw,
    accepting: FixedBitSet,
    /// `post[q][letter]`
    post: Vec<Vec<FixedBitSet>>,
    /// No event on a transition; odd and above every event priority.
    quiet: u32,
}

impl<'a> Determinizer<'a> {
    fn new(nbw: &'a Nbw) -> Self {
        let n = nbw.num_states();
        let letters = nbw.alphabet.size();
        let mut accepting = FixedBitSet::with_capacity(n);
        for q in 0..n {
            accepting.set(q, nbw.accepting[q]);
        }
        let post = (0..n)
            .map(|q| {
                (0..letters)
                    .map(|a| {
                        let mut s = FixedBitSet::with_capacity(n);
                        for t in nbw.successors(q, a) {
                            s.insert(t);
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        Determinizer { nbw, accepting, post, quiet: 4 * n as u32 + 1 }
    }

    fn initial(&self) -> Tree {
        let mut label = FixedBitSet::with_capacity(self.nbw.num_states());
        for &q in &self.nbw.initial {
            label.insert(q);
        }
        if label.is_clear() {
            Vec::new()
        } else {
            vec![TreeNode { parent: ROOT, label }]
        }
    }

    fn image(&self, s: &FixedBitSet, letter: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.nbw.num_states());
        for q in s.ones() {
            out.union_with(&self.post[q][letter]);
        }
        out
    }

    /// Successor tree and the priority of the transition.
    fn step(&self, tree: &Tree, letter: usize) -> (Tree, u32) {
        if tree.is_empty() {
            return (Vec::new(), self.quiet);
        }
        // 1. every node with accepting states spawns a youngest child
        let mut nodes = tree.clone();
        for i in 0..tree.len() {
            let mut f = tree[i].label.clone();
            f.intersect_with(&self.accepting);
            if !f.is_clear() {
                nodes.push(TreeNode { parent: i, label: f });
            }
        }
        // 2. subset step
        for node in nodes.iter_mut() {
            node.label = self.image(&node.label, letter);
        }
        // 3. horizontal merge: a state stays only with the oldest claimant
        let mut claimed: Vec<FixedBitSet> =
            vec![FixedBitSet::with_capacity(self.nbw.num_states()); nodes.len()];
        for i in 0..nodes.len() {
            let p = nodes[i].parent;
            if p == ROOT {
                continue;
            }
            let mut allowed = nodes[p].label.clone();
            allowed.difference_with(&claimed[p]);
            nodes[i].label.intersect_with(&allowed);
            let label = nodes[i].label.clone();
            claimed[p].union_with(&label);
        }
        // 4. remove empty nodes (a removed parent takes its subtree along)
        let mut alive: Vec<bool> = nodes.iter().map(|n| !n.label.is_clear()).collect();
        for i in 0..nodes.len() {
            let p = nodes[i].parent;
            if p != ROOT && !alive[p] {
                alive[i] = false;
            }
        }
        // 5. vertical merge: a node covered by its children absorbs them
        let mut green = vec![false; nodes.len()];
        for i in 0..nodes.len() {
            if !alive[i] {
                continue;
            }
            let mut union = FixedBitSet::with_capacity(self.nbw.num_states());
            let mut has_child = false;
            for j in i + 1..nodes.len() {
                if alive[j] && nodes[j].parent == i {
                    union.union_with(&nodes[j].label);
                    has_child = true;
                }
            }
            if has_child && union == nodes[i].label {
                green[i] = true;
                for j in i + 1..nodes.len() {
                    if is_descendant(&nodes, j, i) {
                        alive[j] = false;
                    }
                }
            }
        }
        // 6. priority from the least name that was removed or marked
        let mut priority = self.quiet;
        for i in 0..nodes.len() {
            let name = i as u32 + 1;
            if !alive[i] {
                priority = priority.min(2 * name - 1);
            } else if green[i] {
                priority = priority.min(2 * name);
            }
        }
        // 7. compact names
        let mut new_index = vec![ROOT; nodes.len()];
        let mut out = Vec::new();
        for i in 0..nodes.len() {
            if alive[i] {
                new_index[i] = out.len();
                let parent = if nodes[i].parent == ROOT { ROOT } else { new_index[nodes[i].parent] };
                out.push(TreeNode { parent, label: nodes[i].label.clone() });
            }
        }
        (out, priority)
    }
}

fn is_descendant(nodes: &[TreeNode], mut j: usize, ancestor: usize) -> bool {
    while nodes[j].parent != ROOT {
        j = nodes[j].parent;
        if j == ancestor {
            return true;
        }
    }
    false
}

pub fn nbw_to_dpw(nbw: &Nbw) -> Result<Dpw> {
    nbw_to_dpw_with_cap(nbw, DEFAULT_AUTOMATON_CAP)
}

/// Determinizes `nbw`; fails once more than `cap` deterministic states
/// would be needed.
pub fn nbw_to_dpw_with_cap(nbw: &Nbw, cap: usize) -> Result<Dpw> {
    let det = Determinizer::new(nbw);
    let letters = nbw.alphabet.size();
    // States carry the priority of the transition that entered them.
    let mut states: IndexSet<(Tree, u32)> = IndexSet::new();
    states.insert((det.initial(), det.quiet));
    let mut trans = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let tree = states[k].0.clone();
        for a in 0..letters {
            let (t, p) = det.step(&tree, a);
            let (id, _) = states.insert_full((t, p));
            trans.push(id);
        }
        if states.len() > cap {
            return Err(Error::StateCapExceeded { cap, what: "deterministic automaton" });
        }
        k += 1;
    }
    let priority = states.iter().map(|(_, p)| *p).collect();
    Ok(Dpw::new(nbw.alphabet.clone(), 0, priority, trans).minimize())
}
