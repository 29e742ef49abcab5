//! Linear temporal logic: syntax trees, parsing, normal forms and a direct
//! evaluator over ultimately periodic words.
//!
//! The evaluator is the reference semantics every automaton construction in
//! this crate is tested against.

mod eval;
pub(crate) mod parser;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{eval_lasso, UltimatelyPeriodicWord};
pub use parser::parse_ltl;

/// A set of atomic propositions that hold at one position of a word.
pub type Label = BTreeSet<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LtlFormula {
    True,
    Atom(String),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Always(Box<LtlFormula>),
    /// Dual of `Until`. Produced by [`LtlFormula::to_nnf`]; not part of the
    /// surface grammar.
    Release(Box<LtlFormula>, Box<LtlFormula>),
}

use LtlFormula::*;

impl LtlFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    pub fn ff() -> Self {
        Not(Box::new(True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: LtlFormula, b: LtlFormula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LtlFormula, b: LtlFormula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: LtlFormula, b: LtlFormula) -> Self {
        Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: LtlFormula) -> Self {
        Next(Box::new(f))
    }

    pub fn until(a: LtlFormula, b: LtlFormula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: LtlFormula, b: LtlFormula) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: LtlFormula) -> Self {
        Eventually(Box::new(f))
    }

    pub fn always(f: LtlFormula) -> Self {
        Always(Box::new(f))
    }

    /// `a <-> b`, spelled with the connectives of the grammar.
    pub fn iff(a: LtlFormula, b: LtlFormula) -> Self {
        Self::and(Self::implies(a.clone(), b.clone()), Self::implies(b, a))
    }

    /// Conjunction of all formulas; `true` when empty.
    pub fn conjunction(fs: impl IntoIterator<Item = LtlFormula>) -> Self {
        fs.into_iter()
            .reduce(Self::and)
            .unwrap_or(True)
    }

    /// Disjunction of all formulas; `false` when empty.
    pub fn disjunction(fs: impl IntoIterator<Item = LtlFormula>) -> Self {
        fs.into_iter().reduce(Self::or).unwrap_or_else(Self::ff)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            True => {}
            Atom(p) => {
                out.insert(p.clone());
            }
            Not(a) | Next(a) | Eventually(a) | Always(a) => a.collect_atoms(out),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of operators (atoms and constants count zero).
    pub fn operator_count(&self) -> usize {
        match self {
            True | Atom(_) => 0,
            Not(a) | Next(a) | Eventually(a) | Always(a) => 1 + a.operator_count(),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => {
                1 + a.operator_count() + b.operator_count()
            }
        }
    }

    /// Rewrites derived operators into the core syntax
    /// `true | p | ~f | f | g | X f | f U g`.
    pub fn to_core(&self) -> LtlFormula {
        match self {
            True => True,
            Atom(p) => Atom(p.clone()),
            Not(a) => Self::not(a.to_core()),
            And(a, b) => Self::not(Self::or(
                Self::not(a.to_core()),
                Self::not(b.to_core()),
            )),
            Or(a, b) => Self::or(a.to_core(), b.to_core()),
            Implies(a, b) => Self::or(Self::not(a.to_core()), b.to_core()),
            Next(a) => Self::next(a.to_core()),
            Until(a, b) => Self::until(a.to_core(), b.to_core()),
            Eventually(a) => Self::until(True, a.to_core()),
            Always(a) => Self::not(Self::until(True, Self::not(a.to_core()))),
            Release(a, b) => Self::not(Self::until(
                Self::not(a.to_core()),
                Self::not(b.to_core()),
            )),
        }
    }

    /// Negation normal form over `true`, `false`, literals, `&`, `|`, `X`,
    /// `U` and `R`.
    pub fn to_nnf(&self) -> LtlFormula {
        self.nnf(false)
    }

    fn nnf(&self, negated: bool) -> LtlFormula {
        match (self, negated) {
            (True, false) => True,
            (True, true) => Self::ff(),
            (Atom(p), false) => Atom(p.clone()),
            (Atom(p), true) => Self::not(Atom(p.clone())),
            (Not(a), n) => a.nnf(!n),
            (And(a, b), false) | (Or(a, b), true) => Self::and(a.nnf(negated), b.nnf(negated)),
            (Or(a, b), false) | (And(a, b), true) => Self::or(a.nnf(negated), b.nnf(negated)),
            (Implies(a, b), false) => Self::or(a.nnf(true), b.nnf(false)),
            (Implies(a, b), true) => Self::and(a.nnf(false), b.nnf(true)),
            (Next(a), n) => Self::next(a.nnf(n)),
            (Until(a, b), false) => Self::until(a.nnf(false), b.nnf(false)),
            (Until(a, b), true) => Self::release(a.nnf(true), b.nnf(true)),
            (Release(a, b), false) => Self::release(a.nnf(false), b.nnf(false)),
            (Release(a, b), true) => Self::until(a.nnf(true), b.nnf(true)),
            (Eventually(a), false) => Self::until(True, a.nnf(false)),
            (Eventually(a), true) => Self::release(Self::ff(), a.nnf(true)),
            (Always(a), false) => Self::release(Self::ff(), a.nnf(false)),
            (Always(a), true) => Self::until(True, a.nnf(true)),
        }
    }

    /// True if negation appears only directly above atoms or `true`.
    pub fn is_nnf(&self) -> bool {
        match self {
            True | Atom(_) => true,
            Not(a) => matches!(**a, Atom(_) | True),
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => a.is_nnf() && b.is_nnf(),
            Next(a) => a.is_nnf(),
            Implies(..) | Eventually(_) | Always(_) => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Until(..) | Release(..) => 4,
            Not(_) | Next(_) | Eventually(_) | Always(_) => 5,
            True | Atom(_) => 6,
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &mut fmt::Formatter<'_>, child: &LtlFormula, min: u8| {
            if child.precedence() < min {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        };
        match self {
            True => write!(f, "true"),
            Not(a) if **a == True => write!(f, "false"),
            Atom(p) => write!(f, "{p}"),
            Not(a) => {
                write!(f, "~")?;
                sub(f, a, 5)
            }
            Next(a) => {
                write!(f, "X ")?;
                sub(f, a, 5)
            }
            Eventually(a) => {
                write!(f, "F ")?;
                sub(f, a, 5)
            }
            Always(a) => {
                write!(f, "G ")?;
                sub(f, a, 5)
            }
            // Binary operators: print the left operand one level tighter for
            // right-associative ones so that re-parsing is unambiguous.
            Until(a, b) | Release(a, b) => {
                sub(f, a, 5)?;
                write!(f, " {} ", if matches!(self, Until(..)) { "U" } else { "R" })?;
                sub(f, b, 4)
            }
            And(a, b) => {
                sub(f, a, 3)?;
                write!(f, " & ")?;
                sub(f, b, 4)
            }
            Or(a, b) => {
                sub(f, a, 2)?;
                write!(f, " | ")?;
                sub(f, b, 3)
            }
            Implies(a, b) => {
                sub(f, a, 2)?;
                write!(f, " -> ")?;
                sub(f, b, 1)
            }
        }
    }
}
