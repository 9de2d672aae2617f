//! A small bottom-up Datalog engine for Boolean programs.
//!
//! Rules are Horn clauses over EDB predicates (relations of the input
//! structure), IDB predicates (defined by the rules) and equality atoms
//! between variables. The goal is the nullary IDB predicate `Ans`.
//!
//! Text format, one rule per line:
//!
//! ```text
//! % comments start with a percent sign
//! X(x,y) :- R(x,y).
//! X(x,y) :- X(x,z), R(z,y).
//! Ans() :- X(z,z).
//! ```

mod builtin;
mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub use builtin::{builtin_program, builtin_source, BUILTIN_PROGRAMS};
pub use eval::{evaluate, evaluate_with_state, FixpointState};
pub use parse::parse_program;

pub const GOAL: &str = "Ans";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BodyItem {
    Atom(Atom),
    Eq(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub body: Vec<BodyItem>,
}

impl Rule {
    pub fn body_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Atom(a) => Some(a),
            BodyItem::Eq(..) => None,
        })
    }
}

/// A validated program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatalogProgram {
    rules: Vec<Rule>,
    edb: BTreeMap<String, usize>,
    idb: BTreeMap<String, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgramClass {
    pub monadic: bool,
    pub linear: bool,
}

impl DatalogProgram {
    /// Validates the rules: consistent arities, range restriction (equality
    /// atoms count as occurrences) and a nullary goal `Ans` that is defined.
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::Datalog("program has no rules".into()));
        }
        let mut arity: BTreeMap<String, usize> = BTreeMap::new();
        let mut idb: BTreeMap<String, usize> = BTreeMap::new();
        let mut note = |a: &Atom| -> Result<()> {
            match arity.get(&a.predicate) {
                Some(&k) if k != a.args.len() => Err(Error::Datalog(format!(
                    "predicate {} used with arities {k} and {}",
                    a.predicate,
                    a.args.len()
                ))),
                _ => {
                    arity.insert(a.predicate.clone(), a.args.len());
                    Ok(())
                }
            }
        };
        for rule in &rules {
            note(&rule.head)?;
            for a in rule.body_atoms() {
                note(a)?;
            }
            idb.insert(rule.head.predicate.clone(), rule.head.args.len());
        }
        for rule in &rules {
            if rule.body.is_empty() {
                return Err(Error::Datalog(format!("rule for {} has an empty body", rule.head.predicate)));
            }
            for v in &rule.head.args {
                let occurs = rule.body.iter().any(|b| match b {
                    BodyItem::Atom(a) => a.args.contains(v),
                    BodyItem::Eq(x, y) => x == v || y == v,
                });
                if !occurs {
                    return Err(Error::Datalog(format!(
                        "unsafe rule: head variable {v} of {} does not occur in the body",
                        rule.head.predicate
                    )));
                }
            }
        }
        match idb.get(GOAL) {
            Some(0) => {}
            Some(k) => return Err(Error::Datalog(format!("goal {GOAL} must be nullary, has arity {k}"))),
            None => return Err(Error::Datalog(format!("no rule defines the goal {GOAL}()"))),
        }
        let edb = arity.into_iter().filter(|(name, _)| !idb.contains_key(name)).collect();
        Ok(Self { rules, edb, idb })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Predicates read from the input structure, with arities.
    pub fn edb(&self) -> &BTreeMap<String, usize> {
        &self.edb
    }

    /// Predicates defined by rules, with arities.
    pub fn idb(&self) -> &BTreeMap<String, usize> {
        &self.idb
    }

    pub fn max_idb_arity(&self) -> usize {
        self.idb.values().copied().max().unwrap_or(0)
    }

    /// Monadic: every IDB predicate has arity at most 1. Linear: no rule
    /// body has more than one IDB atom.
    pub fn classify(&self) -> ProgramClass {
        ProgramClass {
            monadic: self.idb.values().all(|&k| k <= 1),
            linear: self
                .rules
                .iter()
                .all(|r| r.body_atoms().filter(|a| self.idb.contains_key(&a.predicate)).count() <= 1),
        }
    }
}

pub fn classify_program(p: &DatalogProgram) -> ProgramClass {
    p.classify()
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.args.join(","))
    }
}

impl fmt::Display for BodyItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Atom(a) => a.fmt(f),
            BodyItem::Eq(x, y) => write!(f, "{x} = {y}"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :- ", self.head)?;
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            b.fmt(f)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for DatalogProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifications() {
        let flags = |name: &str| builtin_program(name).unwrap().classify();
        assert_eq!(flags("pq-reachability"), ProgramClass { monadic: true, linear: true });
        assert_eq!(flags("directed-cycle"), ProgramClass { monadic: false, linear: true });
        assert_eq!(flags("nonzero-net-cycle"), ProgramClass { monadic: false, linear: false });
    }

    #[test]
    fn validation() {
        assert!(parse_program("X(x,y) :- R(x,z).\nAns() :- X(a,a).").is_err());
        assert!(parse_program("X(x) :- R(x,y).\nX(x,y) :- R(x,y).\nAns() :- X(a).").is_err());
        assert!(parse_program("X(x) :- R(x,y).").is_err());
        assert!(parse_program("Ans(x) :- R(x,x).").is_err());
        let p = parse_program("X(a,b) :- a = b.\nAns() :- X(a,a).").unwrap();
        assert!(p.edb().is_empty());
    }

    #[test]
    fn display_round_trips() {
        for name in BUILTIN_PROGRAMS {
            let p = builtin_program(name).unwrap();
            assert_eq!(parse_program(&p.to_string()).unwrap(), p);
        }
    }
}
