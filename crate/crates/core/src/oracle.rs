//! Brute-force reference implementations.
//!
//! Nothing here shares code with the homomorphism solver or the structural
//! analysis: homomorphisms are counted by walking every map `A → B`, and
//! graph properties are decided by plain depth-first search.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::structure::Structure;

/// Default limit on the number of maps `|B|^|A|` the oracle will walk.
pub const DEFAULT_ORACLE_GUARD: u64 = 100_000_000;

/// Counts homomorphisms by testing all `|B|^|A|` maps.
pub fn oracle_hom_count(a: &Structure, b: &Structure) -> Result<BigUint> {
    oracle_hom_count_with_guard(a, b, DEFAULT_ORACLE_GUARD)
}

pub fn oracle_hom_count_with_guard(a: &Structure, b: &Structure, guard: u64) -> Result<BigUint> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch {
            left: a.signature().to_string(),
            right: b.signature().to_string(),
        });
    }
    let (na, nb) = (a.size(), b.size());
    let maps = (nb as u128).checked_pow(na as u32).unwrap_or(u128::MAX);
    if maps > guard as u128 {
        return Err(Error::GuardExceeded {
            what: "oracle map count",
            size: maps.min(usize::MAX as u128) as usize,
            limit: guard as usize,
        });
    }
    // Dense membership tables for the target, one per relation.
    let tables: Vec<Vec<bool>> = (0..b.signature().len())
        .map(|r| {
            let arity = b.signature().arity(r);
            let mut table = vec![false; nb.pow(arity as u32)];
            for t in b.tuples(r) {
                table[t.iter().fold(0, |acc, &e| acc * nb + e)] = true;
            }
            table
        })
        .collect();
    let facts: Vec<(usize, &Vec<usize>)> = a.facts().collect();
    let mut map = vec![0usize; na];
    let mut count: u64 = 0;
    loop {
        let ok = facts
            .iter()
            .all(|(r, t)| tables[*r][t.iter().fold(0, |acc, &e| acc * nb + map[e])]);
        if ok {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == na {
                return Ok(BigUint::from(count));
            }
            map[i] += 1;
            if map[i] < nb {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}

/// Whether the digraph has a directed cycle, by three-colour DFS.
pub fn dfs_has_directed_cycle(d: &Structure) -> Result<bool> {
    if !d.is_digraph() {
        return Err(Error::NotDigraph(d.signature().to_string()));
    }
    let n = d.size();
    let mut out = vec![Vec::new(); n];
    for (u, v) in d.edges() {
        out[u].push(v);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut colour = vec![0u8; n];
    for root in 0..n {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(top) = stack.last_mut() {
            let u = top.0;
            if top.1 < out[u].len() {
                let v = out[u][top.1];
                top.1 += 1;
                match colour[v] {
                    0 => {
                        colour[v] = 1;
                        stack.push((v, 0));
                    }
                    1 => return Ok(true),
                    _ => {}
                }
            } else {
                colour[u] = 2;
                stack.pop();
            }
        }
    }
    Ok(false)
}

/// Whether some element of unary relation `p` is connected to some element
/// of unary relation `q` through the binary relation `r`, ignoring edge
/// direction.
pub fn undirected_reachable(s: &Structure, r: &str, p: &str, q: &str) -> Result<bool> {
    let sig = s.signature();
    let idx = |name: &str, arity: usize| {
        sig.index_of(name)
            .filter(|&i| sig.arity(i) == arity)
            .ok_or_else(|| Error::WrongShape(format!("expected relation {name}/{arity} in {sig}")))
    };
    let (ri, pi, qi) = (idx(r, 2)?, idx(p, 1)?, idx(q, 1)?);
    let n = s.size();
    let mut adj = vec![Vec::new(); n];
    for t in s.tuples(ri) {
        adj[t[0]].push(t[1]);
        adj[t[1]].push(t[0]);
    }
    let mut seen = vec![false; n];
    let mut stack: Vec<usize> = s.tuples(pi).iter().map(|t| t[0]).collect();
    for &e in &stack {
        seen[e] = true;
    }
    while let Some(u) = stack.pop() {
        if s.contains(qi, &[u]) {
            return Ok(true);
        }
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    Ok(false)
}
