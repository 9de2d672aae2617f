//! Isomorphism testing by plain backtracking.
//!
//! Elements are only ever matched to elements with the same local
//! invariant (per-position occurrence counts), which keeps the search tiny
//! at the sizes this crate works with.

use crate::structure::Structure;

/// Per-element isomorphism invariant: for every relation and position, how
/// many tuples hold the element there; then, per relation, how many tuples
/// contain the element more than once.
pub(crate) fn element_invariants(s: &Structure) -> Vec<Vec<u32>> {
    let sig = s.signature();
    let width: usize = sig.relations().iter().map(|r| r.arity + 1).sum();
    let mut inv = vec![vec![0u32; width]; s.size()];
    let mut offset = 0;
    for (r, rel) in sig.relations().iter().enumerate() {
        for t in s.tuples(r) {
            for (p, &e) in t.iter().enumerate() {
                inv[e][offset + p] += 1;
            }
            for (p, &e) in t.iter().enumerate() {
                if t[..p].contains(&e) {
                    continue;
                }
                if t[p + 1..].contains(&e) {
                    inv[e][offset + rel.arity] += 1;
                }
            }
        }
        offset += rel.arity + 1;
    }
    inv
}

/// True iff some bijection of the domains maps the tuple sets of `a` exactly
/// onto those of `b`. Structures over different signatures are never
/// isomorphic.
pub fn isomorphic(a: &Structure, b: &Structure) -> bool {
    isomorphism(a, b).is_some()
}

/// An isomorphism `a → b` as an element map, if one exists.
pub fn isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return None;
    }
    let nrel = a.signature().len();
    if (0..nrel).any(|r| a.tuples(r).len() != b.tuples(r).len()) {
        return None;
    }
    let inv_a = element_invariants(a);
    let inv_b = element_invariants(b);
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }

    // Assign elements of `a` in an order where each element tends to share
    // a fact with earlier ones, so tuple checks fire early.
    let order = connectivity_order(a);
    let mut position = vec![0; a.size()];
    for (i, &e) in order.iter().enumerate() {
        position[e] = i;
    }
    // checks[i]: tuples of `a` whose last-assigned element is order[i].
    let mut checks: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); a.size()];
    for (r, t) in a.facts() {
        let last = t.iter().map(|&e| position[e]).max().expect("arity >= 1");
        checks[last].push((r, t));
    }

    let mut map = vec![usize::MAX; a.size()];
    let mut used = vec![false; b.size()];
    let mut image = Vec::new();
    if extend(0, &order, &checks, &inv_a, &inv_b, b, &mut map, &mut used, &mut image) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    checks: &[Vec<(usize, &Vec<usize>)>],
    inv_a: &[Vec<u32>],
    inv_b: &[Vec<u32>],
    b: &Structure,
    map: &mut [usize],
    used: &mut [bool],
    image: &mut Vec<usize>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..b.size() {
        if used[y] || inv_a[x] != inv_b[y] {
            continue;
        }
        map[x] = y;
        let ok = checks[depth].iter().all(|(r, t)| {
            image.clear();
            image.extend(t.iter().map(|&e| map[e]));
            b.contains(*r, image)
        });
        if ok {
            used[y] = true;
            if extend(depth + 1, order, checks, inv_a, inv_b, b, map, used, image) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
    }
    false
}

/// Elements ordered by breadth-first search over the incidence multigraph,
/// component by component, starting each component at its smallest element.
pub(crate) fn connectivity_order(s: &Structure) -> Vec<usize> {
    let n = s.size();
    let mut facts_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    let facts: Vec<&Vec<usize>> = s.facts().map(|(_, t)| t).collect();
    for (fi, t) in facts.iter().enumerate() {
        for &e in t.iter() {
            if facts_of[e].last() != Some(&fi) {
                facts_of[e].push(fi);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut fact_seen = vec![false; facts.len()];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut head = order.len();
        order.push(start);
        while head < order.len() {
            let e = order[head];
            head += 1;
            for &fi in &facts_of[e] {
                if fact_seen[fi] {
                    continue;
                }
                fact_seen[fi] = true;
                for &x in facts[fi].iter() {
                    if !seen[x] {
                        seen[x] = true;
                        order.push(x);
                    }
                }
            }
        }
    }
    order
}
