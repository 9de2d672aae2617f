use std::collections::{BTreeMap, BTreeSet};

use super::{BodyItem, DatalogProgram, Rule, GOAL};
use crate::error::{Error, Result};
use crate::structure::{Structure, Tuple};

/// Derived IDB tuples after evaluation, and the number of rounds taken.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixpointState {
    pub relations: BTreeMap<String, BTreeSet<Tuple>>,
    pub rounds: usize,
}

impl FixpointState {
    pub fn tuples(&self, predicate: &str) -> Option<&BTreeSet<Tuple>> {
        self.relations.get(predicate)
    }

    pub fn goal_derived(&self) -> bool {
        self.relations.get(GOAL).is_some_and(|s| !s.is_empty())
    }
}

enum Source {
    Edb(usize),
    Idb(String),
}

struct CompiledAtom {
    source: Source,
    vars: Vec<usize>,
}

struct CompiledRule {
    head: String,
    head_vars: Vec<usize>,
    atoms: Vec<CompiledAtom>,
    equalities: Vec<(usize, usize)>,
    var_count: usize,
}

fn compile(rule: &Rule, p: &DatalogProgram, s: &Structure) -> Result<CompiledRule> {
    let mut names: Vec<String> = Vec::new();
    let mut var = |name: &str| -> usize {
        match names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        }
    };
    let mut atoms = Vec::new();
    let mut equalities = Vec::new();
    for item in &rule.body {
        match item {
            BodyItem::Atom(a) => {
                let source = if p.idb().contains_key(&a.predicate) {
                    Source::Idb(a.predicate.clone())
                } else {
                    let idx = s.signature().index_of(&a.predicate).ok_or_else(|| {
                        Error::Datalog(format!("EDB predicate {} is not in {}", a.predicate, s.signature()))
                    })?;
                    if s.signature().arity(idx) != a.args.len() {
                        return Err(Error::Datalog(format!(
                            "EDB predicate {} has arity {} in the program but {} in the structure",
                            a.predicate,
                            a.args.len(),
                            s.signature().arity(idx)
                        )));
                    }
                    Source::Edb(idx)
                };
                atoms.push(CompiledAtom {
                    source,
                    vars: a.args.iter().map(|v| var(v)).collect(),
                });
            }
            BodyItem::Eq(x, y) => equalities.push((var(x), var(y))),
        }
    }
    let head_vars = rule.head.args.iter().map(|v| var(v)).collect();
    Ok(CompiledRule {
        head: rule.head.predicate.clone(),
        head_vars,
        atoms,
        equalities,
        var_count: names.len(),
    })
}

struct RuleEval<'a> {
    rule: &'a CompiledRule,
    s: &'a Structure,
    idb: &'a BTreeMap<String, BTreeSet<Tuple>>,
    out: BTreeSet<Tuple>,
}

impl RuleEval<'_> {
    fn join(&mut self, i: usize, binding: &mut Vec<Option<usize>>) {
        if i == self.rule.atoms.len() {
            self.close_equalities(binding);
            return;
        }
        let atom = &self.rule.atoms[i];
        let tuples: &BTreeSet<Tuple> = match &atom.source {
            Source::Edb(r) => self.s.tuples(*r),
            Source::Idb(name) => &self.idb[name],
        };
        for t in tuples {
            let saved = binding.clone();
            let ok = atom.vars.iter().zip(t).all(|(&v, &e)| match binding[v] {
                Some(b) => b == e,
                None => {
                    binding[v] = Some(e);
                    true
                }
            });
            if ok {
                self.join(i + 1, binding);
            }
            *binding = saved;
        }
    }

    /// Applies equality atoms; variables still unbound afterwards range
    /// over the whole domain, one choice per equality class.
    fn close_equalities(&mut self, binding: &[Option<usize>]) {
        let n = self.rule.var_count;
        let mut class: Vec<usize> = (0..n).collect();
        fn find(class: &mut [usize], mut x: usize) -> usize {
            while class[x] != x {
                class[x] = class[class[x]];
                x = class[x];
            }
            x
        }
        for &(x, y) in &self.rule.equalities {
            let (rx, ry) = (find(&mut class, x), find(&mut class, y));
            class[rx.max(ry)] = rx.min(ry);
        }
        let mut value: Vec<Option<usize>> = vec![None; n];
        for (v, bound) in binding.iter().enumerate() {
            if let Some(e) = *bound {
                let root = find(&mut class, v);
                match value[root] {
                    Some(prev) if prev != e => return,
                    _ => value[root] = Some(e),
                }
            }
        }
        let free: Vec<usize> = (0..n)
            .filter(|&v| find(&mut class, v) == v && value[v].is_none())
            .collect();
        let roots: Vec<usize> = (0..n).map(|v| find(&mut class, v)).collect();
        let domain = self.s.size();
        let mut choice = vec![0usize; free.len()];
        loop {
            for (k, &root) in free.iter().enumerate() {
                value[root] = Some(choice[k]);
            }
            let head: Tuple = self
                .rule
                .head_vars
                .iter()
                .map(|&v| value[roots[v]].expect("every class has a value"))
                .collect();
            self.out.insert(head);
            let mut k = 0;
            loop {
                if k == free.len() {
                    return;
                }
                choice[k] += 1;
                if choice[k] < domain {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

/// Naive bottom-up evaluation to the least fixpoint.
pub fn evaluate_with_state(p: &DatalogProgram, s: &Structure) -> Result<FixpointState> {
    let compiled = p
        .rules()
        .iter()
        .map(|r| compile(r, p, s))
        .collect::<Result<Vec<_>>>()?;
    let mut state = FixpointState {
        relations: p.idb().keys().map(|k| (k.clone(), BTreeSet::new())).collect(),
        rounds: 0,
    };
    let bound = (s.size() as u128)
        .saturating_pow(p.max_idb_arity() as u32)
        .saturating_mul(p.rules().len() as u128)
        .saturating_add(1);
    loop {
        let mut derived: Vec<(String, BTreeSet<Tuple>)> = Vec::with_capacity(compiled.len());
        for rule in &compiled {
            let mut ev = RuleEval {
                rule,
                s,
                idb: &state.relations,
                out: BTreeSet::new(),
            };
            ev.join(0, &mut vec![None; rule.var_count]);
            derived.push((rule.head.clone(), ev.out));
        }
        state.rounds += 1;
        let mut changed = false;
        for (head, tuples) in derived {
            let target = state.relations.get_mut(&head).expect("IDB initialised");
            for t in tuples {
                changed |= target.insert(t);
            }
        }
        if !changed {
            return Ok(state);
        }
        if state.rounds as u128 > bound {
            return Err(Error::Internal(format!(
                "fixpoint not reached within the round bound {bound}"
            )));
        }
    }
}

/// Whether the program derives its goal on `s`.
pub fn evaluate(p: &DatalogProgram, s: &Structure) -> Result<bool> {
    Ok(evaluate_with_state(p, s)?.goal_derived())
}
