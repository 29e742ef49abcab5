use std::fmt;

use super::{Label, LtlFormula};

/// An infinite word `prefix · cycle^ω` over label sets.
#[derive(Clone, Debug)]
pub struct UltimatelyPeriodicWord {
    pub prefix: Vec<Label>,
    pub cycle: Vec<Label>,
}

impl UltimatelyPeriodicWord {
    /// Panics if `cycle` is empty.
    pub fn new(prefix: Vec<Label>, cycle: Vec<Label>) -> Self {
        assert!(!cycle.is_empty(), "an ultimately periodic word needs a nonempty cycle");
        UltimatelyPeriodicWord { prefix, cycle }
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &Label {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Number of distinct positions in the lasso representation.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Successor of a lasso position.
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.positions() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    fn letter(&self, i: usize) -> &Label {
        self.at(i)
    }

    /// Moves the first cycle letter into the prefix; denotes the same word.
    pub fn unroll_once(&self) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.push(self.cycle[0].clone());
        let mut cycle = self.cycle[1..].to_vec();
        cycle.push(self.cycle[0].clone());
        UltimatelyPeriodicWord { prefix, cycle }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialEq for UltimatelyPeriodicWord {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.cycle.len(), other.cycle.len());
        let horizon = self.prefix.len().max(other.prefix.len()) + a / gcd(a, b) * b;
        (0..horizon).all(|i| self.at(i) == other.at(i))
    }
}

impl Eq for UltimatelyPeriodicWord {}

impl fmt::Display for UltimatelyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, l: &Label| {
            write!(f, "{{{}}}", l.iter().cloned().collect::<Vec<_>>().join(","))
        };
        for l in &self.prefix {
            show(f, l)?;
            write!(f, " ")?;
        }
        write!(f, "(")?;
        for (i, l) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            show(f, l)?;
        }
        write!(f, ")^w")
    }
}

/// Decides `w ⊨ f` at position 0.
///
/// Every subformula is evaluated at every lasso position. Until is the least
/// and Release the greatest fixpoint of its one-step unfolding over the
/// lasso's successor function, which is exact on the infinite word.
pub fn eval_lasso(f: &LtlFormula, w: &UltimatelyPeriodicWord) -> bool {
    eval_all(f, w)[0]
}

fn eval_all(f: &LtlFormula, w: &UltimatelyPeriodicWord) -> Vec<bool> {
    use LtlFormula::*;
    let n = w.positions();
    match f {
        True => vec![true; n],
        Atom(p) => (0..n).map(|i| w.letter(i).contains(p)).collect(),
        Not(a) => eval_all(a, w).into_iter().map(|b| !b).collect(),
        And(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| x && y),
        Or(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| x || y),
        Implies(a, b) => zip(eval_all(a, w), eval_all(b, w), |x, y| !x || y),
        Next(a) => {
            let v = eval_all(a, w);
            (0..n).map(|i| v[w.succ(i)]).collect()
        }
        Until(a, b) => fixpoint(w, &eval_all(a, w), &eval_all(b, w), false),
        Release(a, b) => fixpoint(w, &eval_all(a, w), &eval_all(b, w), true),
        Eventually(a) => fixpoint(w, &vec![true; n], &eval_all(a, w), false),
        Always(a) => fixpoint(w, &vec![false; n], &eval_all(a, w), true),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// `a U b` (least, `greatest = false`) or `a R b` (greatest, `true`).
fn fixpoint(w: &UltimatelyPeriodicWord, a: &[bool], b: &[bool], greatest: bool) -> Vec<bool> {
    let n = w.positions();
    let mut v = vec![greatest; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let nxt = v[w.succ(i)];
            let val = if greatest {
                b[i] && (a[i] || nxt)
            } else {
                b[i] || (a[i] && nxt)
            };
            if val != v[i] {
                v[i] = val;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    fn label(atoms: &[&str]) -> Label {
        atoms.iter().map(|s| s.to_string()).collect()
    }

    fn word(prefix: &[&[&str]], cycle: &[&[&str]]) -> UltimatelyPeriodicWord {
        UltimatelyPeriodicWord::new(
            prefix.iter().map(|l| label(l)).collect(),
            cycle.iter().map(|l| label(l)).collect(),
        )
    }

    fn holds(f: &str, w: &UltimatelyPeriodicWord) -> bool {
        eval_lasso(&parse_ltl(f).unwrap(), w)
    }

    #[test]
    fn eventually_found_on_cycle() {
        assert!(holds("F p", &word(&[&[]], &[&["p"]])));
    }

    #[test]
    fn always_fails_on_cycle() {
        assert!(!holds("G ~p", &word(&[], &[&["p"]])));
    }

    #[test]
    fn both_recur() {
        assert!(holds("G F p & G F ~p", &word(&[], &[&["p"], &[]])));
    }

    #[test]
    fn until_needs_witness() {
        let w = word(&[], &[&["a"]]);
        assert!(!holds("a U b", &w));
        assert!(holds("~(a U b)", &w));
        assert!(holds("a U b", &word(&[&["a"], &["a"]], &[&["b"]])));
        assert!(!holds("a U b", &word(&[&["a"], &[]], &[&["b"]])));
    }

    #[test]
    fn next_wraps_into_cycle() {
        let w = word(&[&[]], &[&["p"], &[]]);
        assert!(holds("X p", &w));
        assert!(holds("X X X p", &w));
        assert!(!holds("X X p", &w));
    }

    #[test]
    fn word_equality_is_on_unrollings() {
        let a = word(&[], &[&["p"], &[]]);
        let b = word(&[&["p"]], &[&[], &["p"]]);
        let c = word(&[], &[&["p"], &[], &["p"], &[]]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, a.unroll_once());
        assert_ne!(a, word(&[], &[&["p"]]));
    }
}
