//! Structural parameters: the incidence multigraph, components,
//! Berge-acyclicity, the cycle-gcd parameter γ, the star transform of an
//! n-ary structure, cores, and homomorphic equivalence to an acyclic
//! structure.

use std::collections::VecDeque;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::hom::hom_exists;
use crate::structure::{Signature, Structure, Tuple};

/// Default element limit for [`core`].
pub const DEFAULT_CORE_GUARD: usize = 7;

/// The bipartite incidence multigraph: element nodes `0..element_count`,
/// one fact node per `(relation, tuple)`, and one edge per tuple position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMultigraph {
    pub element_count: usize,
    pub facts: Vec<(usize, Tuple)>,
    /// `(element, fact index)`, one entry per tuple position.
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceMultigraph {
    pub fn multiplicity(&self, element: usize, fact: usize) -> usize {
        self.edges.iter().filter(|&&e| e == (element, fact)).count()
    }

    pub fn node_count(&self) -> usize {
        self.element_count + self.facts.len()
    }
}

pub fn incidence_multigraph(s: &Structure) -> IncidenceMultigraph {
    let facts: Vec<(usize, Tuple)> = s.facts().map(|(r, t)| (r, t.clone())).collect();
    let edges = facts
        .iter()
        .enumerate()
        .flat_map(|(fi, (_, t))| t.iter().map(move |&e| (e, fi)))
        .collect();
    IncidenceMultigraph {
        element_count: s.size(),
        facts,
        edges,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Component label for every element, labels numbered `0..c` in order of
/// each component's smallest element.
pub fn component_labels(s: &Structure) -> Vec<usize> {
    let mut uf = UnionFind::new(s.size());
    for (_, t) in s.facts() {
        for w in t.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut label = vec![usize::MAX; s.size()];
    let mut next = 0;
    let mut out = Vec::with_capacity(s.size());
    for e in 0..s.size() {
        let root = uf.find(e);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        out.push(label[root]);
    }
    out
}

/// `c(A)`: the number of connected components of the incidence multigraph.
/// Elements that occur in no tuple are components of their own.
pub fn component_count(s: &Structure) -> usize {
    component_labels(s).into_iter().max().map_or(0, |m| m + 1)
}

/// Splits a structure into its connected components (as induced
/// substructures), in order of smallest element.
pub fn components(s: &Structure) -> Vec<Structure> {
    let labels = component_labels(s);
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); count];
    for (e, &l) in labels.iter().enumerate() {
        members[l].push(e);
    }
    members
        .iter()
        .map(|keep| s.induced(keep).expect("components are non-empty"))
        .collect()
}

/// True iff the incidence multigraph is a forest. Parallel edges (an
/// element repeated within one tuple) count as a cycle.
pub fn is_berge_acyclic(s: &Structure) -> bool {
    // A multigraph is a forest iff |E| = |V| - #components. Every fact node
    // sits in the component of its elements, so the component count of the
    // incidence multigraph equals c(A).
    let edges: usize = s.facts().map(|(_, t)| t.len()).sum();
    edges + component_count(s) == s.size() + s.fact_count()
}

/// Net-length bookkeeping for a digraph: every weak component gets integer
/// potentials (+1 along an edge, -1 against it) from a traversal rooted at
/// its smallest vertex, and the gcd of the discrepancies
/// `|potential(u) + 1 - potential(v)|` over its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkAnalysis {
    pub potential: Vec<i64>,
    pub component: Vec<usize>,
    pub discrepancy_gcd: Vec<u64>,
}

impl WalkAnalysis {
    /// γ(A): the gcd over all components; 0 when every component is
    /// balanced.
    pub fn gamma(&self) -> u64 {
        self.discrepancy_gcd.iter().fold(0, |acc, &g| acc.gcd(&g))
    }
}

pub fn walk_analysis(d: &Structure) -> Result<WalkAnalysis> {
    d.require_digraph()?;
    let n = d.size();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (u, v) in d.edges() {
        adj[u].push((v, 1));
        adj[v].push((u, -1));
    }
    let mut potential = vec![0i64; n];
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        component[root] = count;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(v, step) in &adj[u] {
                if component[v] == usize::MAX {
                    component[v] = count;
                    potential[v] = potential[u] + step;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    let mut discrepancy_gcd = vec![0u64; count];
    for (u, v) in d.edges() {
        let c = component[u];
        let disc = (potential[u] + 1 - potential[v]).unsigned_abs();
        discrepancy_gcd[c] = discrepancy_gcd[c].gcd(&disc);
    }
    Ok(WalkAnalysis {
        potential,
        component,
        discrepancy_gcd,
    })
}

/// γ(A), the gcd of the net lengths of all oriented cycles of positive net
/// length (0 when there are none).
pub fn gamma(d: &Structure) -> Result<u64> {
    Ok(walk_analysis(d)?.gamma())
}

/// Whether `d → C_n`, decided as `n | γ(d)`.
pub fn maps_to_cycle(d: &Structure, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("cycle length must be >= 1".into()));
    }
    Ok(gamma(d)? % n == 0)
}

/// The binary structure `A*` on the same domain with `(a, b)` whenever `a`
/// and `b` occur consecutively in some tuple of the single n-ary relation.
pub fn star_transform(s: &Structure) -> Result<Structure> {
    let sig = s.signature();
    if sig.len() != 1 || sig.arity(0) < 2 {
        return Err(Error::WrongShape(format!(
            "star transform needs one relation of arity >= 2, got {sig}"
        )));
    }
    let edges = s
        .tuples(0)
        .iter()
        .flat_map(|t| t.windows(2).map(|w| vec![w[0], w[1]]))
        .collect();
    Ok(Structure::from_sets(Signature::digraph(), s.size(), vec![edges]))
}

/// Length of the shortest directed cycle, if any (a loop has length 1).
pub fn shortest_directed_cycle(d: &Structure) -> Result<Option<usize>> {
    d.require_digraph()?;
    let n = d.size();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, v) in d.edges() {
        out[u].push(v);
    }
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        dist[start] = 0;
        queue.clear();
        queue.push_back(start);
        'bfs: while let Some(u) = queue.pop_front() {
            for &v in &out[u] {
                if v == start {
                    let len = dist[u] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                    break 'bfs;
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(best)
}

/// A core of `s` with the default size guard.
pub fn core(s: &Structure) -> Result<Structure> {
    core_with_guard(s, DEFAULT_CORE_GUARD)
}

/// A core of `s`: an induced substructure `c` with `s → c` that has no
/// homomorphism into any of its one-element-smaller induced substructures.
///
/// Elements are tried for removal in increasing index order and the result
/// keeps the surviving elements in their original order, so the output is
/// deterministic.
pub fn core_with_guard(s: &Structure, guard: usize) -> Result<Structure> {
    if s.size() > guard {
        return Err(Error::GuardExceeded {
            what: "core input size",
            size: s.size(),
            limit: guard,
        });
    }
    let mut current = s.clone();
    'shrink: loop {
        if current.size() == 1 {
            return Ok(current);
        }
        for drop in 0..current.size() {
            let keep: Vec<usize> = (0..current.size()).filter(|&e| e != drop).collect();
            let candidate = current.induced(&keep)?;
            // candidate → current holds by inclusion, so one direction suffices.
            if hom_exists(&current, &candidate)? {
                current = candidate;
                continue 'shrink;
            }
        }
        return Ok(current);
    }
}

/// Whether `s` is homomorphically equivalent to a Berge-acyclic structure,
/// decided by checking whether its core is acyclic.
pub fn hom_equiv_to_acyclic(s: &Structure) -> Result<bool> {
    hom_equiv_to_acyclic_with_guard(s, DEFAULT_CORE_GUARD)
}

pub fn hom_equiv_to_acyclic_with_guard(s: &Structure, guard: usize) -> Result<bool> {
    Ok(is_berge_acyclic(&core_with_guard(s, guard)?))
}
