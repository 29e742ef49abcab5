//! ω-automata: LTL to Büchi translation, determinization to parity
//! automata, and Streett acceptance with an emptiness check.

mod dpw;
mod nbw;
mod safra;
mod streett;

pub use dpw::Dpw;
pub use nbw::{ltl_to_nbw, Nbw, NbwEdge};
pub use safra::{nbw_to_dpw, nbw_to_dpw_with_cap};
pub use streett::{
    parity_to_streett, streett_emptiness, StreettCondition, StreettPair, VertexLasso,
};

use crate::error::Result;
use crate::ltl::{Label, LtlFormula};

/// Default bound on the number of deterministic states built.
pub const DEFAULT_AUTOMATON_CAP: usize = 1_000_000;

/// Letters are subsets of a fixed, sorted list of atoms, encoded as bitmasks
/// (bit `i` set iff `atoms[i]` holds).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    atoms: Vec<String>,
}

impl Alphabet {
    pub fn new(atoms: impl IntoIterator<Item = String>) -> Self {
        let mut atoms: Vec<String> = atoms.into_iter().collect();
        atoms.sort();
        atoms.dedup();
        assert!(atoms.len() < 31, "too many atoms for an explicit alphabet");
        Alphabet { atoms }
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Number of letters.
    pub fn size(&self) -> usize {
        1 << self.atoms.len()
    }

    /// Projects a label onto the alphabet; atoms outside it are ignored.
    pub fn letter_of(&self, label: &Label) -> usize {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| label.contains(*a))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn label_of(&self, letter: usize) -> Label {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| letter >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    pub fn letter_name(&self, letter: usize) -> String {
        let l: Vec<_> = self.label_of(letter).into_iter().collect();
        format!("{{{}}}", l.join(","))
    }
}

/// Whether the unique run of `d` over `w` is accepting.
pub fn dpw_accepts_lasso(d: &Dpw, w: &crate::ltl::UltimatelyPeriodicWord) -> bool {
    d.accepts_lasso(w)
}

/// `A[f]`: a deterministic parity automaton for the models of `f`.
pub fn ltl_to_dpw(f: &LtlFormula) -> Result<Dpw> {
    ltl_to_dpw_with_cap(f, DEFAULT_AUTOMATON_CAP)
}

pub fn ltl_to_dpw_with_cap(f: &LtlFormula, cap: usize) -> Result<Dpw> {
    let nbw = ltl_to_nbw(f);
    let dpw = nbw_to_dpw_with_cap(&nbw, cap)?;
    log::debug!(
        "{f}: nbw {} states, dpw {} states, {} priorities",
        nbw.num_states(),
        dpw.num_states(),
        dpw.priorities_used().len()
    );
    Ok(dpw)
}
