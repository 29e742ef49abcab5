use std::collections::HashMap;

use super::{BoolExpr, GuardedCommand, SrmlModule, SrmlSystem};
use crate::error::{Error, Result};
use crate::ltl::parser::parse_formula;
use crate::ltl::LtlFormula;
use crate::syntax::{is_identifier, Cursor, Tok};

const KEYWORDS: &[&str] = &["module", "controls", "init", "update", "goal", "query", "skip", "true", "false"];

struct Pending {
    name: String,
    controls: Vec<String>,
    init: Vec<RawCommand>,
    update: Vec<RawCommand>,
    goal: Option<LtlFormula>,
}

struct RawCommand {
    guard: RawExpr,
    assignments: Vec<(String, RawExpr)>,
}

enum RawExpr {
    Const(bool),
    Var(String),
    Not(Box<RawExpr>),
    And(Box<RawExpr>, Box<RawExpr>),
    Or(Box<RawExpr>, Box<RawExpr>),
    Implies(Box<RawExpr>, Box<RawExpr>),
    Iff(Box<RawExpr>, Box<RawExpr>),
}

/// Parses a system of SRML modules, optionally followed by a `query`.
pub fn parse_srml(text: &str) -> Result<SrmlSystem> {
    let mut cur = Cursor::new(text)?;
    let mut pending: Vec<Pending> = Vec::new();
    let mut query = None;
    while !cur.at_end() {
        if cur.eat_keyword("query") {
            let f = parse_formula(&mut cur)?;
            cur.expect(&Tok::Semi)?;
            query = Some(f);
            continue;
        }
        cur.expect_keyword("module")?;
        pending.push(parse_module(&mut cur)?);
    }
    if pending.is_empty() {
        return Err(cur.error("expected at least one module"));
    }
    resolve(pending, query)
}

fn name(cur: &mut Cursor, what: &str) -> Result<String> {
    let (line, column) = cur.location();
    let n = cur.ident(what)?;
    if !is_identifier(&n) || KEYWORDS.contains(&n.as_str()) {
        return Err(Error::Syntax { line, column, message: format!("invalid {what} `{n}`") });
    }
    Ok(n)
}

fn parse_module(cur: &mut Cursor) -> Result<Pending> {
    let module = name(cur, "module name")?;
    cur.expect_keyword("controls")?;
    let mut controls = vec![name(cur, "variable")?];
    while cur.eat(&Tok::Comma) {
        controls.push(name(cur, "variable")?);
    }
    let mut m = Pending { name: module, controls, init: Vec::new(), update: Vec::new(), goal: None };
    if cur.eat_keyword("init") {
        m.init = parse_commands(cur)?;
    }
    if cur.eat_keyword("update") {
        m.update = parse_commands(cur)?;
    }
    if cur.eat_keyword("goal") {
        m.goal = Some(parse_formula(cur)?);
        cur.expect(&Tok::Semi)?;
    }
    match cur.peek_ident() {
        None if cur.at_end() => Ok(m),
        Some("module") | Some("query") => Ok(m),
        _ => Err(cur.unexpected("`init`, `update`, `goal`, `module` or `query`")),
    }
}

fn parse_commands(cur: &mut Cursor) -> Result<Vec<RawCommand>> {
    let mut out = Vec::new();
    while cur.eat(&Tok::ColonColon) {
        let guard = parse_expr(cur)?;
        cur.expect(&Tok::LeadsTo)?;
        let mut assignments = Vec::new();
        if cur.eat_keyword("skip") {
            cur.expect(&Tok::Semi)?;
        } else {
            loop {
                let var = name(cur, "variable")?;
                cur.expect(&Tok::Prime)?;
                cur.expect(&Tok::Assign)?;
                assignments.push((var, parse_expr(cur)?));
                cur.expect(&Tok::Semi)?;
                if !(matches!(cur.peek(), Some(Tok::Ident(_))) && cur.peek_at(1) == Some(&Tok::Prime)) {
                    break;
                }
            }
        }
        out.push(RawCommand { guard, assignments });
    }
    Ok(out)
}

fn parse_expr(cur: &mut Cursor) -> Result<RawExpr> {
    let mut lhs = parse_implies(cur)?;
    while cur.eat(&Tok::Iff) {
        lhs = RawExpr::Iff(Box::new(lhs), Box::new(parse_implies(cur)?));
    }
    Ok(lhs)
}

fn parse_implies(cur: &mut Cursor) -> Result<RawExpr> {
    let lhs = parse_or(cur)?;
    if cur.eat(&Tok::Implies) {
        return Ok(RawExpr::Implies(Box::new(lhs), Box::new(parse_implies(cur)?)));
    }
    Ok(lhs)
}

fn parse_or(cur: &mut Cursor) -> Result<RawExpr> {
    let mut lhs = parse_and(cur)?;
    while cur.eat(&Tok::Or) {
        lhs = RawExpr::Or(Box::new(lhs), Box::new(parse_and(cur)?));
    }
    Ok(lhs)
}

fn parse_and(cur: &mut Cursor) -> Result<RawExpr> {
    let mut lhs = parse_atom(cur)?;
    while cur.eat(&Tok::And) {
        lhs = RawExpr::And(Box::new(lhs), Box::new(parse_atom(cur)?));
    }
    Ok(lhs)
}

fn parse_atom(cur: &mut Cursor) -> Result<RawExpr> {
    if cur.eat(&Tok::Not) {
        return Ok(RawExpr::Not(Box::new(parse_atom(cur)?)));
    }
    if cur.eat(&Tok::LParen) {
        let e = parse_expr(cur)?;
        cur.expect(&Tok::RParen)?;
        return Ok(e);
    }
    if cur.eat_keyword("true") {
        return Ok(RawExpr::Const(true));
    }
    if cur.eat_keyword("false") {
        return Ok(RawExpr::Const(false));
    }
    match cur.peek_ident() {
        Some(_) => Ok(RawExpr::Var(name(cur, "variable")?)),
        None => Err(cur.unexpected("a Boolean expression")),
    }
}

fn resolve(pending: Vec<Pending>, query: Option<LtlFormula>) -> Result<SrmlSystem> {
    let mut owner: HashMap<String, String> = HashMap::new();
    let mut variables: Vec<String> = Vec::new();
    let mut seen_modules: Vec<&str> = Vec::new();
    for m in &pending {
        if seen_modules.contains(&m.name.as_str()) {
            return Err(Error::DuplicateModule { module: m.name.clone() });
        }
        seen_modules.push(&m.name);
        for v in &m.controls {
            if let Some(first) = owner.get(v) {
                return Err(Error::DuplicateVariable { var: v.clone(), first: first.clone(), second: m.name.clone() });
            }
            owner.insert(v.clone(), m.name.clone());
            variables.push(v.clone());
        }
    }
    if variables.len() > 64 {
        return Err(Error::Arena("at most 64 variables are supported".into()));
    }
    let index: HashMap<&str, usize> = variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let expr = |module: &str, e: &RawExpr| -> Result<BoolExpr> { lower(module, e, &index) };
    let mut modules = Vec::new();
    for m in &pending {
        let commands = |raw: &[RawCommand]| -> Result<Vec<GuardedCommand>> {
            raw.iter()
                .map(|c| {
                    let mut assignments: Vec<(usize, BoolExpr)> = Vec::new();
                    for (var, e) in &c.assignments {
                        let &x = index.get(var.as_str()).ok_or_else(|| Error::UnknownVariable {
                            module: m.name.clone(),
                            var: var.clone(),
                        })?;
                        if owner[var] != m.name {
                            return Err(Error::ForeignAssignment { module: m.name.clone(), var: var.clone() });
                        }
                        if assignments.iter().any(|(y, _)| *y == x) {
                            return Err(Error::ConflictingAssignment { module: m.name.clone(), var: var.clone() });
                        }
                        assignments.push((x, expr(&m.name, e)?));
                    }
                    Ok(GuardedCommand { guard: expr(&m.name, &c.guard)?, assignments })
                })
                .collect()
        };
        let goal = m.goal.clone().unwrap_or(LtlFormula::True);
        check_atoms(&m.name, &goal, &index)?;
        modules.push(SrmlModule {
            name: m.name.clone(),
            controls: m.controls.iter().map(|v| index[v.as_str()]).collect(),
            init: commands(&m.init)?,
            update: commands(&m.update)?,
            goal,
        });
    }
    if let Some(q) = &query {
        check_atoms("query", q, &index)?;
    }
    Ok(SrmlSystem { variables, modules, query })
}

fn check_atoms(module: &str, f: &LtlFormula, index: &HashMap<&str, usize>) -> Result<()> {
    match f.atoms().into_iter().find(|a| !index.contains_key(a.as_str())) {
        Some(var) => Err(Error::UnknownVariable { module: module.to_string(), var }),
        None => Ok(()),
    }
}

fn lower(module: &str, e: &RawExpr, index: &HashMap<&str, usize>) -> Result<BoolExpr> {
    let b = |x: &RawExpr| lower(module, x, index).map(Box::new);
    Ok(match e {
        RawExpr::Const(c) => BoolExpr::Const(*c),
        RawExpr::Var(v) => BoolExpr::Var(*index.get(v.as_str()).ok_or_else(|| Error::UnknownVariable {
            module: module.to_string(),
            var: v.clone(),
        })?),
        RawExpr::Not(x) => BoolExpr::Not(b(x)?),
        RawExpr::And(x, y) => BoolExpr::And(b(x)?, b(y)?),
        RawExpr::Or(x, y) => BoolExpr::Or(b(x)?, b(y)?),
        RawExpr::Implies(x, y) => BoolExpr::Or(Box::new(BoolExpr::Not(b(x)?)), b(y)?),
        RawExpr::Iff(x, y) => {
            let (x, y) = (b(x)?, b(y)?);
            BoolExpr::Or(
                Box::new(BoolExpr::And(x.clone(), y.clone())),
                Box::new(BoolExpr::And(Box::new(BoolExpr::Not(x)), Box::new(BoolExpr::Not(y)))),
            )
        }
    })
}
