use super::LtlFormula;
use crate::error::{Error, Result};
use crate::syntax::{Cursor, Tok};

/// Parses an LTL formula.
///
/// Precedence from tightest to loosest: `~ X F G`, `U` (right
/// associative), `&`, `|`, `->` (right associative), `<->`. Words built
/// only from the letters `X`, `F`, `G` are read as stacked operators, so
/// `GF p` is `G (F p)`.
pub fn parse_ltl(text: &str) -> Result<LtlFormula> {
    let mut cur = Cursor::new(text)?;
    let f = parse_formula(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    Ok(f)
}

pub(crate) fn parse_formula(cur: &mut Cursor) -> Result<LtlFormula> {
    let mut lhs = parse_implies(cur)?;
    while cur.eat(&Tok::Iff) {
        lhs = LtlFormula::iff(lhs, parse_implies(cur)?);
    }
    Ok(lhs)
}

fn parse_implies(cur: &mut Cursor) -> Result<LtlFormula> {
    let lhs = parse_or(cur)?;
    if cur.eat(&Tok::Implies) {
        let rhs = parse_implies(cur)?;
        return Ok(LtlFormula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_or(cur: &mut Cursor) -> Result<LtlFormula> {
    let mut lhs = parse_and(cur)?;
    while cur.eat(&Tok::Or) {
        lhs = LtlFormula::or(lhs, parse_and(cur)?);
    }
    Ok(lhs)
}

fn parse_and(cur: &mut Cursor) -> Result<LtlFormula> {
    let mut lhs = parse_until(cur)?;
    while cur.eat(&Tok::And) {
        lhs = LtlFormula::and(lhs, parse_until(cur)?);
    }
    Ok(lhs)
}

fn parse_until(cur: &mut Cursor) -> Result<LtlFormula> {
    let lhs = parse_unary(cur)?;
    if cur.eat_keyword("U") {
        let rhs = parse_until(cur)?;
        return Ok(LtlFormula::until(lhs, rhs));
    }
    Ok(lhs)
}

fn is_operator_word(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| matches!(c, 'X' | 'F' | 'G'))
}

fn parse_unary(cur: &mut Cursor) -> Result<LtlFormula> {
    match cur.peek() {
        Some(Tok::Not) => {
            cur.bump();
            Ok(LtlFormula::not(parse_unary(cur)?))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let f = parse_formula(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(w)) if is_operator_word(w) => {
            let ops = w.clone();
            cur.bump();
            let mut f = parse_unary(cur)?;
            for op in ops.chars().rev() {
                f = match op {
                    'X' => LtlFormula::next(f),
                    'F' => LtlFormula::eventually(f),
                    _ => LtlFormula::always(f),
                };
            }
            Ok(f)
        }
        Some(Tok::Ident(w)) if w == "U" => Err(cur.error("`U` needs a left operand")),
        Some(Tok::Ident(w)) if w == "true" => {
            cur.bump();
            Ok(LtlFormula::True)
        }
        Some(Tok::Ident(w)) if w == "false" => {
            cur.bump();
            Ok(LtlFormula::ff())
        }
        Some(Tok::Ident(w)) => {
            if w.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(cur.error(format!("invalid identifier `{w}`")));
            }
            let name = w.clone();
            cur.bump();
            Ok(LtlFormula::Atom(name))
        }
        _ => Err(cur.unexpected("a formula")),
    }
}

/// Parses a formula that appears at `line`, starting at column `column` of
/// a larger document, shifting error positions accordingly.
pub(crate) fn parse_ltl_at(text: &str, line: usize, column: usize) -> Result<LtlFormula> {
    parse_ltl(text).map_err(|e| match e {
        Error::Syntax { line: l, column: c, message } => Error::Syntax {
            line: line + l - 1,
            column: if l == 1 { column + c - 1 } else { c },
            message,
        },
        other => other,
    })
}
