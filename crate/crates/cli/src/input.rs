use std::fs;
use std::path::{Path, PathBuf};

use eve_core::game::{parse_arena, LtlGame};
use eve_core::ltl::{parse_ltl, LtlFormula};
use eve_core::srml::{parse_srml, srml_game};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Srml,
    Arena,
}

impl InputKind {
    pub fn of(path: &Path) -> anyhow::Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("srml") => Ok(InputKind::Srml),
            Some("arena") => Ok(InputKind::Arena),
            _ => anyhow::bail!("{}: expected a .srml or .arena file", path.display()),
        }
    }
}

pub fn load_game(path: &Path, max_states: usize) -> anyhow::Result<LtlGame> {
    let text = fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let parsed = match InputKind::of(path)? {
        InputKind::Srml => parse_srml(&text).and_then(|sys| srml_game(&sys, max_states)),
        InputKind::Arena => parse_arena(&text),
    };
    parsed.map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Where the query formula comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuerySource {
    Inline(String),
    File(PathBuf),
    /// The `query` declared in the input itself.
    Input,
}

pub fn load_query(source: &QuerySource, game: &LtlGame) -> anyhow::Result<LtlFormula> {
    let parse = |text: &str, origin: &str| parse_ltl(text).map_err(|e| anyhow::anyhow!("{origin}: {e}"));
    match source {
        QuerySource::Inline(text) => parse(text, "--phi"),
        QuerySource::File(path) => {
            let text = fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            parse(text.trim(), &path.display().to_string())
        }
        QuerySource::Input => game
            .query
            .clone()
            .ok_or_else(|| anyhow::anyhow!("no query given: use --phi, --phi-file or a `query` in the input")),
    }
}
