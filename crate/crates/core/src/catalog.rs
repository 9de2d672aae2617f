//! Enumeration of structures up to isomorphism.
//!
//! A structure of size `n` is encoded as a bitmask over its tuple space:
//! the tuple `t` of relation `r` gets bit
//! `offset[r] + Σ t[j]·n^(arity-1-j)`. The canonical form is the smallest
//! mask reachable by a relabeling that keeps elements sorted by their local
//! invariants. Catalogs of size `n` are grown from the catalog of size
//! `n - 1` by adding one element and every subset of the tuples that touch
//! it.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure, Tuple};

/// Default size limit for catalogs.
pub const DEFAULT_CATALOG_GUARD: usize = 4;

/// The bit layout of all possible tuples over a fixed domain size.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    signature: Signature,
    n: usize,
    offsets: Vec<usize>,
    tuples: Vec<(usize, Tuple)>,
}

impl TupleSpace {
    pub fn new(signature: &Signature, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tuple space needs n >= 1".into()));
        }
        let mut offsets = Vec::with_capacity(signature.len());
        let mut total: usize = 0;
        for rel in signature.relations() {
            offsets.push(total);
            let block = (n as u128).pow(rel.arity as u32);
            if total as u128 + block > 64 {
                return Err(Error::GuardExceeded {
                    what: "tuple space bits",
                    size: (total as u128 + block).min(usize::MAX as u128) as usize,
                    limit: 64,
                });
            }
            total += block as usize;
        }
        let mut tuples = Vec::with_capacity(total);
        for (r, rel) in signature.relations().iter().enumerate() {
            let mut t = vec![0; rel.arity];
            loop {
                tuples.push((r, t.clone()));
                if !odometer(&mut t, n) {
                    break;
                }
            }
        }
        Ok(Self {
            signature: signature.clone(),
            n,
            offsets,
            tuples,
        })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    pub fn index(&self, rel: usize, t: &[usize]) -> usize {
        self.offsets[rel] + t.iter().fold(0, |acc, &e| acc * self.n + e)
    }

    pub fn tuple(&self, bit: usize) -> (usize, &Tuple) {
        let (r, t) = &self.tuples[bit];
        (*r, t)
    }

    pub fn mask(&self, s: &Structure) -> u64 {
        debug_assert_eq!(s.size(), self.n);
        s.facts().fold(0, |m, (r, t)| m | 1 << self.index(r, t))
    }

    pub fn structure(&self, mask: u64) -> Structure {
        let mut sets = vec![BTreeSet::new(); self.signature.len()];
        for bit in bits(mask) {
            let (r, t) = &self.tuples[bit];
            sets[*r].insert(t.clone());
        }
        Structure::from_sets(self.signature.clone(), self.n, sets)
    }

    /// The canonical mask of the structure encoded by `mask`.
    pub fn canonical(&self, mask: u64) -> u64 {
        let n = self.n;
        let facts: Vec<usize> = bits(mask).collect();
        let width: usize = self.signature.relations().iter().map(|r| r.arity + 1).sum();
        let mut inv = vec![vec![0u32; width]; n];
        let rel_base: Vec<usize> = self
            .signature
            .relations()
            .iter()
            .scan(0, |acc, r| {
                let start = *acc;
                *acc += r.arity + 1;
                Some(start)
            })
            .collect();
        for &f in &facts {
            let (r, t) = &self.tuples[f];
            let base = rel_base[*r];
            for (p, &e) in t.iter().enumerate() {
                inv[e][base + p] += 1;
                if !t[..p].contains(&e) && t[p + 1..].contains(&e) {
                    inv[e][base + t.len()] += 1;
                }
            }
        }
        let (mut cell, mut cells) = rank(&inv);
        // Refine: an element's cell also records the cells of the tuples it
        // occurs in, until the partition is stable.
        loop {
            let keys: Vec<(usize, Vec<Occurrence>)> = (0..n)
                .map(|e| {
                    let mut seen: Vec<Occurrence> = Vec::new();
                    for &f in &facts {
                        let (r, t) = &self.tuples[f];
                        for (p, &x) in t.iter().enumerate() {
                            if x == e {
                                seen.push((*r, p, t.iter().map(|&y| cell[y]).collect()));
                            }
                        }
                    }
                    seen.sort();
                    (cell[e], seen)
                })
                .collect();
            let (next, count) = rank(&keys);
            if count == cells {
                break;
            }
            cell = next;
            cells = count;
        }
        // block_start[c] = first label reserved for elements in cell c.
        let mut block_start = vec![0; cells + 1];
        for &c in &cell {
            block_start[c + 1] += 1;
        }
        for c in 0..cells {
            block_start[c + 1] += block_start[c];
        }
        let mut best = u64::MAX;
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.search_labels(0, &cell, &block_start, &facts, &mut perm, &mut used, &mut best);
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn search_labels(
        &self,
        e: usize,
        cell: &[usize],
        block_start: &[usize],
        facts: &[usize],
        perm: &mut [usize],
        used: &mut [bool],
        best: &mut u64,
    ) {
        if e == self.n {
            let m = facts.iter().fold(0u64, |m, &f| {
                let (r, t) = &self.tuples[f];
                let idx = self.offsets[*r] + t.iter().fold(0, |acc, &x| acc * self.n + perm[x]);
                m | 1 << idx
            });
            *best = (*best).min(m);
            return;
        }
        let c = cell[e];
        for label in block_start[c]..block_start[c + 1] {
            if used[label] {
                continue;
            }
            used[label] = true;
            perm[e] = label;
            self.search_labels(e + 1, cell, block_start, facts, perm, used, best);
            used[label] = false;
        }
    }
}

/// Relation, position and tuple cells of one occurrence of an element.
type Occurrence = (usize, usize, Vec<usize>);

/// Dense ranks of the values in sorted order, and the number of ranks.
fn rank<T: Ord>(values: &[T]) -> (Vec<usize>, usize) {
    let mut distinct: Vec<&T> = values.iter().collect();
    distinct.sort();
    distinct.dedup();
    let ranks = values
        .iter()
        .map(|v| distinct.binary_search(&v).expect("present"))
        .collect();
    (ranks, distinct.len())
}

fn odometer(t: &mut [usize], n: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

/// Canonical mask of a structure (over the tuple space of its size).
pub fn canonical_mask(s: &Structure) -> Result<u64> {
    let space = TupleSpace::new(s.signature(), s.size())?;
    Ok(space.canonical(space.mask(s)))
}

/// The canonical representative of the isomorphism class of `s`.
pub fn canonical_form(s: &Structure) -> Result<Structure> {
    let space = TupleSpace::new(s.signature(), s.size())?;
    Ok(space.structure(space.canonical(space.mask(s))))
}

/// All isomorphism classes of structures of one size over one signature,
/// as canonical masks in increasing order.
#[derive(Clone, Debug)]
pub struct IsoClassCatalog {
    pub n: usize,
    pub signature: Signature,
    space: Arc<TupleSpace>,
    masks: Arc<Vec<u64>>,
}

impl IsoClassCatalog {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn get(&self, i: usize) -> Structure {
        self.space.structure(self.masks[i])
    }

    pub fn representatives(&self) -> impl Iterator<Item = Structure> + '_ {
        self.masks.iter().map(|&m| self.space.structure(m))
    }

    /// Position of the class containing `s`.
    pub fn position(&self, s: &Structure) -> Option<usize> {
        if s.size() != self.n || s.signature() != &self.signature {
            return None;
        }
        let canon = self.space.canonical(self.space.mask(s));
        self.masks.binary_search(&canon).ok()
    }
}

type CacheKey = (Signature, usize);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<u64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<u64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The isomorphism classes of structures of size `n` over `signature`.
pub fn enumerate_structures(signature: &Signature, n: usize, guard: usize) -> Result<IsoClassCatalog> {
    if n > guard {
        return Err(Error::GuardExceeded {
            what: "catalog size",
            size: n,
            limit: guard,
        });
    }
    let space = Arc::new(TupleSpace::new(signature, n)?);
    let masks = class_masks(signature, n, &space)?;
    Ok(IsoClassCatalog {
        n,
        signature: signature.clone(),
        space,
        masks,
    })
}

fn class_masks(signature: &Signature, n: usize, space: &TupleSpace) -> Result<Arc<Vec<u64>>> {
    let key = (signature.clone(), n);
    if let Some(found) = cache().lock().expect("catalog cache").get(&key) {
        return Ok(found.clone());
    }
    let masks: Vec<u64> = if n == 1 {
        let all = if space.len() == 64 { u64::MAX } else { (1u64 << space.len()) - 1 };
        let set: BTreeSet<u64> = (0..=all).map(|m| space.canonical(m)).collect();
        set.into_iter().collect()
    } else {
        let smaller_space = TupleSpace::new(signature, n - 1)?;
        let smaller = class_masks(signature, n - 1, &smaller_space)?;
        let fresh: Vec<usize> = (0..space.len())
            .filter(|&b| space.tuple(b).1.contains(&(n - 1)))
            .collect();
        if fresh.len() >= 32 {
            return Err(Error::GuardExceeded {
                what: "new tuples per extension step",
                size: fresh.len(),
                limit: 31,
            });
        }
        let mut found: Vec<u64> = smaller
            .par_iter()
            .flat_map_iter(|&m| {
                let base = bits(m).fold(0u64, |acc, b| {
                    let (r, t) = smaller_space.tuple(b);
                    acc | 1 << space.index(r, t)
                });
                let fresh = &fresh;
                (0u64..1 << fresh.len()).map(move |sub| {
                    let extra = bits(sub).fold(0u64, |acc, i| acc | 1 << fresh[i]);
                    space.canonical(base | extra)
                })
            })
            .collect();
        found.par_sort_unstable();
        found.dedup();
        found
    };
    let masks = Arc::new(masks);
    cache().lock().expect("catalog cache").insert(key, masks.clone());
    Ok(masks)
}

/// Isomorphism classes of digraphs on `n` vertices, with the default guard.
pub fn enumerate_digraphs(n: usize) -> Result<IsoClassCatalog> {
    enumerate_structures(&Signature::digraph(), n, DEFAULT_CATALOG_GUARD)
}

pub fn enumerate_digraphs_with_guard(n: usize, guard: usize) -> Result<IsoClassCatalog> {
    enumerate_structures(&Signature::digraph(), n, guard)
}

/// Representatives of all classes of sizes `1..=max_n`, ordered by size
/// and then by canonical mask.
pub fn structures_up_to(signature: &Signature, max_n: usize, guard: usize) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_structures(signature, n, guard)?.representatives());
    }
    Ok(out)
}

pub fn digraphs_up_to(max_n: usize, guard: usize) -> Result<Vec<Structure>> {
    structures_up_to(&Signature::digraph(), max_n, guard)
}

/// Every labeled structure of size `n` (all subsets of the tuple space).
pub fn labeled_structures(signature: &Signature, n: usize, max_bits: usize) -> Result<Vec<Structure>> {
    let space = TupleSpace::new(signature, n)?;
    if space.len() > max_bits {
        return Err(Error::GuardExceeded {
            what: "labeled tuple space bits",
            size: space.len(),
            limit: max_bits,
        });
    }
    Ok((0u64..1 << space.len()).map(|m| space.structure(m)).collect())
}

/// A random labeled structure: every tuple of the tuple space is present
/// independently with probability `density`.
pub fn random_structure<R: Rng + ?Sized>(
    rng: &mut R,
    signature: &Signature,
    n: usize,
    density: f64,
) -> Result<Structure> {
    let space = TupleSpace::new(signature, n)?;
    let mask = (0..space.len()).fold(0u64, |m, b| if rng.gen_bool(density) { m | 1 << b } else { m });
    Ok(space.structure(mask))
}
