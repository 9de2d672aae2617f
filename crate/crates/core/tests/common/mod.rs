//! Reference computations for the integration tests. None of these call the
//! solver, the structural analysis or the library oracle.

#![allow(dead_code)]

use homq_core::structure::{Signature, Structure};

/// Number of homomorphisms `a → b`, by trying every map.
pub fn brute_hom_count(a: &Structure, b: &Structure) -> u128 {
    fn go(e: usize, a: &Structure, b: &Structure, map: &mut Vec<usize>) -> u128 {
        if e == a.size() {
            let ok = a.facts().all(|(r, t)| {
                let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                b.contains(r, &image)
            });
            return ok as u128;
        }
        let mut total = 0;
        for v in 0..b.size() {
            map.push(v);
            total += go(e + 1, a, b, map);
            map.pop();
        }
        total
    }
    assert_eq!(a.signature(), b.signature());
    go(0, a, b, &mut Vec::with_capacity(a.size()))
}

pub fn brute_hom_exists(a: &Structure, b: &Structure) -> bool {
    brute_hom_count(a, b) > 0
}

/// Directed cycle detection by repeatedly deleting vertices without
/// incoming edges (a loop is an incoming edge).
pub fn has_directed_cycle(d: &Structure) -> bool {
    let n = d.size();
    let edges: Vec<(usize, usize)> = d.edges().collect();
    let mut alive = vec![true; n];
    loop {
        let removable: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && !edges.iter().any(|&(u, w)| w == v && alive[u]))
            .collect();
        if removable.is_empty() {
            return alive.iter().any(|&x| x);
        }
        for v in removable {
            alive[v] = false;
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of |net length| over all simple oriented cycles of the underlying
/// multigraph, 0 if no cycle has non-zero net length.
pub fn gamma_by_cycles(d: &Structure) -> u64 {
    let n = d.size();
    let edges: Vec<(usize, usize)> = d.edges().collect();
    let mut g = 0;
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        if u == v {
            g = gcd(g, 1);
        } else {
            adj[u].push((v, 1));
            adj[v].push((u, -1));
            if edges.contains(&(v, u)) {
                g = gcd(g, 2);
            }
        }
    }
    fn walk(
        start: usize,
        u: usize,
        arcs: usize,
        net: i64,
        adj: &[Vec<(usize, i64)>],
        visited: &mut [bool],
        g: &mut u64,
    ) {
        for &(w, step) in &adj[u] {
            if w == start && arcs >= 2 {
                *g = gcd(*g, (net + step).unsigned_abs());
            } else if w > start && !visited[w] {
                visited[w] = true;
                walk(start, w, arcs + 1, net + step, adj, visited, g);
                visited[w] = false;
            }
        }
    }
    let mut visited = vec![false; n];
    for start in 0..n {
        visited[start] = true;
        walk(start, start, 0, 0, &adj, &mut visited, &mut g);
        visited[start] = false;
    }
    g
}

/// Whether some oriented walk from `a` to `b` has net length 0, by search
/// over (vertex, net) states with bounded net.
pub fn net_zero_walk(d: &Structure, a: usize, b: usize) -> bool {
    const BOUND: i64 = 40;
    let n = d.size();
    let edges: Vec<(usize, usize)> = d.edges().collect();
    let idx = |v: usize, net: i64| v * (2 * BOUND as usize + 1) + (net + BOUND) as usize;
    let mut seen = vec![false; n * (2 * BOUND as usize + 1)];
    let mut stack = vec![(a, 0i64)];
    seen[idx(a, 0)] = true;
    while let Some((v, net)) = stack.pop() {
        if v == b && net == 0 {
            return true;
        }
        for &(x, y) in &edges {
            let mut moves = Vec::new();
            if x == v {
                moves.push((y, net + 1));
            }
            if y == v {
                moves.push((x, net - 1));
            }
            for (w, m) in moves {
                if m.abs() <= BOUND && !seen[idx(w, m)] {
                    seen[idx(w, m)] = true;
                    stack.push((w, m));
                }
            }
        }
    }
    false
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether some `P` element and some `Q` element are joined by an
/// undirected `R` path.
pub fn pq_connected(s: &Structure) -> bool {
    let sig = s.signature();
    let (r, p, q) = (
        sig.index_of("R").unwrap(),
        sig.index_of("P").unwrap(),
        sig.index_of("Q").unwrap(),
    );
    let mut parent: Vec<usize> = (0..s.size()).collect();
    for t in s.tuples(r) {
        let (x, y) = (find(&mut parent, t[0]), find(&mut parent, t[1]));
        parent[x] = y;
    }
    let ps: Vec<usize> = s.tuples(p).iter().map(|t| t[0]).collect();
    let qs: Vec<usize> = s.tuples(q).iter().map(|t| t[0]).collect();
    ps.iter()
        .any(|&x| qs.iter().any(|&y| find(&mut parent, x) == find(&mut parent, y)))
}

/// Berge acyclicity: the element/fact incidence multigraph is a forest.
pub fn incidence_forest(s: &Structure) -> bool {
    let facts: Vec<_> = s.facts().collect();
    let mut parent: Vec<usize> = (0..s.size() + facts.len()).collect();
    for (i, (_, t)) in facts.iter().enumerate() {
        let node = s.size() + i;
        for &e in t.iter() {
            let (a, b) = (find(&mut parent, node), find(&mut parent, e));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

/// Number of weakly connected components (isolated elements count).
pub fn weak_components(s: &Structure) -> usize {
    let mut parent: Vec<usize> = (0..s.size()).collect();
    for (_, t) in s.facts() {
        for w in t.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    (0..s.size()).filter(|&x| find(&mut parent, x) == x).count()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism by trying every bijection.
pub fn brute_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.signature() == b.signature()
        && a.size() == b.size()
        && a.fact_count() == b.fact_count()
        && permutations(a.size()).iter().any(|p| &a.relabel(p) == b)
}

/// Every digraph on `n` labeled vertices.
pub fn labeled_digraphs(n: usize) -> Vec<Structure> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            Structure::digraph(n, edges).unwrap()
        })
        .collect()
}

/// Number of isomorphism classes of labeled digraphs on `n` vertices, by
/// taking the least edge mask over all relabelings.
pub fn brute_digraph_class_count(n: usize) -> usize {
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    for mask in 0u64..1 << (n * n) {
        let canon = perms
            .iter()
            .map(|p| {
                (0..n * n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .fold(0u64, |m, i| m | 1 << (p[i / n] * n + p[i % n]))
            })
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.len()
}

/// Every `{R/2, P/1, Q/1}` structure on `n` labeled elements.
pub fn labeled_rpq(n: usize) -> Vec<Structure> {
    let sig = Signature::new([("R", 2), ("P", 1), ("Q", 1)]).unwrap();
    let bits = n * n + 2 * n;
    (0u64..1 << bits)
        .map(|mask| {
            let bit = |i: usize| mask >> i & 1 == 1;
            let r = (0..n * n).filter(|&i| bit(i)).map(|i| vec![i / n, i % n]).collect();
            let p = (0..n).filter(|&i| bit(n * n + i)).map(|i| vec![i]).collect();
            let q = (0..n).filter(|&i| bit(n * n + n + i)).map(|i| vec![i]).collect();
            Structure::new(sig.clone(), n, vec![r, p, q]).unwrap()
        })
        .collect()
}

pub fn ceil_log2_plus_one(n: u32) -> usize {
    let mut k = 0;
    while (1u64 << k) < n as u64 + 1 {
        k += 1;
    }
    k
}
