use super::{Atom, BodyItem, DatalogProgram, Rule, GOAL};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Datalog(format!("line {line}: {msg}"))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn normalize_predicate(name: &str) -> String {
    if name.eq_ignore_ascii_case(GOAL) {
        GOAL.to_string()
    } else {
        name.to_string()
    }
}

fn parse_atom(text: &str, line: usize) -> Result<Atom> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| err(line, format!("expected an atom, got {text:?}")))?;
    if !text.ends_with(')') {
        return Err(err(line, format!("atom {text:?} is missing ')'")));
    }
    let name = text[..open].trim();
    if !is_ident(name) {
        return Err(err(line, format!("bad predicate name {name:?}")));
    }
    let inner = text[open + 1..text.len() - 1].trim();
    let args: Vec<String> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| a.trim().to_string()).collect()
    };
    if let Some(bad) = args.iter().find(|a| !is_ident(a)) {
        return Err(err(line, format!("bad variable {bad:?} in {text:?}")));
    }
    Ok(Atom {
        predicate: normalize_predicate(name),
        args,
    })
}

/// Splits on commas that are not inside parentheses.
fn split_top_level(text: &str, line: usize) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(line, "unbalanced ')'"));
                }
            }
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(err(line, "unbalanced '('"));
    }
    parts.push(&text[start..]);
    Ok(parts)
}

fn parse_body_item(text: &str, line: usize) -> Result<BodyItem> {
    let text = text.trim();
    if text.is_empty() {
        return Err(err(line, "empty body item"));
    }
    if !text.contains('(') {
        if let Some((x, y)) = text.split_once('=') {
            let (x, y) = (x.trim(), y.trim());
            if is_ident(x) && is_ident(y) {
                return Ok(BodyItem::Eq(x.to_string(), y.to_string()));
            }
            return Err(err(line, format!("equalities relate two variables, got {text:?}")));
        }
    }
    parse_atom(text, line).map(BodyItem::Atom)
}

fn parse_rule(text: &str, line: usize) -> Result<Rule> {
    let (head, body) = text
        .split_once(":-")
        .ok_or_else(|| err(line, "expected a rule of the form Head(..) :- Body."))?;
    let body = body.trim();
    let body = body.strip_suffix('.').unwrap_or(body);
    let head = parse_atom(head, line)?;
    let body = split_top_level(body, line)?
        .into_iter()
        .map(|item| parse_body_item(item, line))
        .collect::<Result<Vec<_>>>()?;
    Ok(Rule { head, body })
}

/// Parses and validates a program in the line format.
pub fn parse_program(text: &str) -> Result<DatalogProgram> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        rules.push(parse_rule(line, i + 1)?);
    }
    DatalogProgram::new(rules)
}
