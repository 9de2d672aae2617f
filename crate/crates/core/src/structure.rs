//! Signatures, finite relational structures and the standard constructions
//! on them (cycles, paths, n-ary cycles, complete structures, disjoint
//! unions, scalar multiples and direct products).
//!
//! Elements are always the integers `0..domain_size`. Structures are
//! immutable once built; every combinator returns a fresh value.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A relation symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with pairwise distinct names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    relations: Vec<Relation>,
}

impl Signature {
    pub fn new<S: Into<String>>(relations: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let relations: Vec<Relation> = relations
            .into_iter()
            .map(|(name, arity)| Relation {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, r) in relations.iter().enumerate() {
            if r.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "relation {} has arity 0",
                    r.name
                )));
            }
            if r.name.is_empty() {
                return Err(Error::InvalidSignature("empty relation name".into()));
            }
            if relations[..i].iter().any(|o| o.name == r.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate relation name {}",
                    r.name
                )));
            }
        }
        Ok(Self { relations })
    }

    /// The digraph signature `{R/2}`.
    pub fn digraph() -> Self {
        Self {
            relations: vec![Relation {
                name: "R".into(),
                arity: 2,
            }],
        }
    }

    /// A signature with a single relation `R` of the given arity.
    pub fn single(arity: usize) -> Result<Self> {
        Self::new([("R", arity)])
    }

    /// A signature of unary predicates with the given names.
    pub fn unary<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(names.into_iter().map(|n| (n, 1)))
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn is_digraph(&self) -> bool {
        self.relations.len() == 1 && self.relations[0].arity == 2
    }

    pub fn is_unary(&self) -> bool {
        self.relations.iter().all(|r| r.arity == 1)
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }
}

/// Parses `R/2,P/1` (braces and spaces are ignored).
impl std::str::FromStr for Signature {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let relations = inner
            .split(',')
            .map(|part| {
                let (name, arity) = part
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| Error::InvalidSignature(format!("expected name/arity, got {part:?}")))?;
                let arity = arity
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSignature(format!("bad arity in {part:?}")))?;
                Ok((name.trim().to_string(), arity))
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(relations)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.relations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", r.name, r.arity)?;
        }
        write!(f, "}}")
    }
}

pub type Tuple = Vec<usize>;

/// A finite relational structure with domain `{0, .., domain_size - 1}`.
///
/// Equality is labeled equality: same signature, same domain size and the
/// same tuple sets. Use [`crate::iso::isomorphic`] for equality up to
/// relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    signature: Signature,
    domain: usize,
    relations: Vec<BTreeSet<Tuple>>,
}

impl Structure {
    /// Builds a structure, validating every invariant. Duplicate tuples in
    /// the input are rejected rather than silently merged.
    pub fn new(signature: Signature, domain: usize, relations: Vec<Vec<Tuple>>) -> Result<Self> {
        if domain == 0 {
            return Err(Error::InvalidStructure("domain must be non-empty".into()));
        }
        if relations.len() != signature.len() {
            return Err(Error::InvalidStructure(format!(
                "signature has {} relations but {} tuple lists were given",
                signature.len(),
                relations.len()
            )));
        }
        let mut sets = Vec::with_capacity(relations.len());
        for (idx, tuples) in relations.into_iter().enumerate() {
            let rel = &signature.relations[idx];
            let mut set = BTreeSet::new();
            for t in tuples {
                if t.len() != rel.arity {
                    return Err(Error::InvalidStructure(format!(
                        "tuple {:?} of {} has length {}, expected {}",
                        t,
                        rel.name,
                        t.len(),
                        rel.arity
                    )));
                }
                if let Some(&bad) = t.iter().find(|&&e| e >= domain) {
                    return Err(Error::InvalidStructure(format!(
                        "element {bad} of {} is outside the domain 0..{domain}",
                        rel.name
                    )));
                }
                if !set.insert(t.clone()) {
                    return Err(Error::InvalidStructure(format!(
                        "duplicate tuple {:?} in {}",
                        t, rel.name
                    )));
                }
            }
            sets.push(set);
        }
        Ok(Self {
            signature,
            domain,
            relations: sets,
        })
    }

    /// Builds a structure from tuple sets that are already known to be valid.
    pub(crate) fn from_sets(signature: Signature, domain: usize, relations: Vec<BTreeSet<Tuple>>) -> Self {
        debug_assert!(domain > 0);
        debug_assert_eq!(signature.len(), relations.len());
        debug_assert!(relations.iter().enumerate().all(|(r, set)| set
            .iter()
            .all(|t| t.len() == signature.arity(r) && t.iter().all(|&e| e < domain))));
        Self {
            signature,
            domain,
            relations,
        }
    }

    /// The structure with `domain` elements and every relation empty.
    pub fn empty(signature: Signature, domain: usize) -> Result<Self> {
        let n = signature.len();
        Self::new(signature, domain, vec![Vec::new(); n])
    }

    /// A digraph on `n` vertices with the given edges.
    pub fn digraph(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges = edges.into_iter().map(|(u, v)| vec![u, v]).collect();
        Self::new(Signature::digraph(), n, vec![edges])
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Number of elements, written `|A|`.
    pub fn size(&self) -> usize {
        self.domain
    }

    pub fn tuples(&self, rel: usize) -> &BTreeSet<Tuple> {
        &self.relations[rel]
    }

    pub fn relation_sets(&self) -> &[BTreeSet<Tuple>] {
        &self.relations
    }

    pub fn contains(&self, rel: usize, tuple: &[usize]) -> bool {
        self.relations[rel].contains(tuple)
    }

    /// All facts `(relation index, tuple)` in signature order, tuples in
    /// lexicographic order.
    pub fn facts(&self) -> impl Iterator<Item = (usize, &Tuple)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .flat_map(|(r, set)| set.iter().map(move |t| (r, t)))
    }

    pub fn fact_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn is_digraph(&self) -> bool {
        self.signature.is_digraph()
    }

    /// Edges of a digraph; empty for any other signature.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let rel = if self.is_digraph() { Some(&self.relations[0]) } else { None };
        rel.into_iter().flatten().map(|t| (t[0], t[1]))
    }

    pub(crate) fn require_digraph(&self) -> Result<()> {
        if self.is_digraph() {
            Ok(())
        } else {
            Err(Error::NotDigraph(self.signature.to_string()))
        }
    }

    pub(crate) fn require_same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.signature.to_string(),
                right: other.signature.to_string(),
            })
        }
    }

    /// Renames elements: element `e` becomes `perm[e]`. `perm` must be a
    /// permutation of `0..size`.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.domain, "relabeling must cover the domain");
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .map(|t| t.iter().map(|&e| perm[e]).collect())
                    .collect()
            })
            .collect();
        Structure::from_sets(self.signature.clone(), self.domain, relations)
    }

    /// The induced substructure on `keep` (which must be non-empty and
    /// duplicate-free). Elements are renumbered in the order given.
    pub fn induced(&self, keep: &[usize]) -> Result<Structure> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument(
                "induced substructure needs at least one element".into(),
            ));
        }
        let mut new_index = vec![usize::MAX; self.domain];
        for (i, &e) in keep.iter().enumerate() {
            if e >= self.domain || new_index[e] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "invalid element list {keep:?} for domain of size {}",
                    self.domain
                )));
            }
            new_index[e] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|set| {
                set.iter()
                    .filter(|t| t.iter().all(|&e| new_index[e] != usize::MAX))
                    .map(|t| t.iter().map(|&e| new_index[e]).collect())
                    .collect()
            })
            .collect();
        Ok(Structure::from_sets(
            self.signature.clone(),
            keep.len(),
            relations,
        ))
    }

    /// A short human-readable description used in traces and reports.
    pub fn summary(&self) -> String {
        let mut out = format!("n={}", self.domain);
        for (r, rel) in self.signature.relations.iter().enumerate() {
            out.push_str(&format!(" {}:{}", rel.name, self.relations[r].len()));
        }
        out
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.domain)?;
        for (r, rel) in self.signature.relations.iter().enumerate() {
            write!(f, " {}=", rel.name)?;
            let tuples: Vec<String> = self.relations[r]
                .iter()
                .map(|t| {
                    let items: Vec<String> = t.iter().map(usize::to_string).collect();
                    format!("({})", items.join(","))
                })
                .collect();
            write!(f, "{{{}}}", tuples.join(","))?;
        }
        Ok(())
    }
}

/// The directed cycle `C_n` on `0..n` with edges `(i, i+1 mod n)`.
pub fn directed_cycle(n: usize) -> Result<Structure> {
    if n == 0 {
        return Err(Error::InvalidArgument("directed cycle length must be >= 1".into()));
    }
    Structure::digraph(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// The directed path `P_n` with `n` edges and `n + 1` vertices.
pub fn directed_path(n: usize) -> Structure {
    Structure::digraph(n + 1, (0..n).map(|i| (i, i + 1))).expect("paths are valid digraphs")
}

/// The n-ary cycle of length `d`: one `n`-ary relation holding the tuples
/// `(i, i+1, .., i+n-1) mod d` for every `i < d`.
pub fn n_ary_cycle(d: usize, n: usize) -> Result<Structure> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "n-ary cycle needs d >= 1 and n >= 1 (got d={d}, n={n})"
        )));
    }
    let tuples: BTreeSet<Tuple> = (0..d).map(|i| (0..n).map(|j| (i + j) % d).collect()).collect();
    Ok(Structure::from_sets(Signature::single(n)?, d, vec![tuples]))
}

/// The one-element structure in which every relation holds on the all-zero
/// tuple. For digraphs this is a single loop.
pub fn complete_singleton(signature: &Signature) -> Structure {
    let relations = signature
        .relations()
        .iter()
        .map(|r| BTreeSet::from([vec![0; r.arity]]))
        .collect();
    Structure::from_sets(signature.clone(), 1, relations)
}

/// The two-element structure in which every relation of arity `m` holds on
/// all `2^m` tuples.
pub fn complete_pair(signature: &Signature) -> Structure {
    let relations = signature
        .relations()
        .iter()
        .map(|r| {
            (0u64..(1u64 << r.arity))
                .map(|bits| (0..r.arity).map(|i| ((bits >> (r.arity - 1 - i)) & 1) as usize).collect())
                .collect()
        })
        .collect();
    Structure::from_sets(signature.clone(), 2, relations)
}

/// The one-element structure with every relation empty (for digraphs, the
/// edgeless singleton).
pub fn edgeless_singleton(signature: &Signature) -> Structure {
    Structure::from_sets(signature.clone(), 1, vec![BTreeSet::new(); signature.len()])
}

/// `A ⊕ B`: the elements of `b` are shifted past those of `a`.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure> {
    a.require_same_signature(b)?;
    let shift = a.size();
    let relations = a
        .relations
        .iter()
        .zip(&b.relations)
        .map(|(sa, sb)| {
            let mut set = sa.clone();
            set.extend(sb.iter().map(|t| t.iter().map(|&e| e + shift).collect::<Tuple>()));
            set
        })
        .collect();
    Ok(Structure::from_sets(
        a.signature.clone(),
        a.size() + b.size(),
        relations,
    ))
}

/// `m · H`, the disjoint union of `m` copies of `h`. `m = 0` is rejected
/// because structures are non-empty.
pub fn scalar_multiple(m: usize, h: &Structure) -> Result<Structure> {
    if m == 0 {
        return Err(Error::InvalidArgument("scalar multiple needs m >= 1".into()));
    }
    let n = h.size();
    let relations = h
        .relations
        .iter()
        .map(|set| {
            (0..m)
                .flat_map(|copy| {
                    set.iter()
                        .map(move |t| t.iter().map(|&e| e + copy * n).collect::<Tuple>())
                })
                .collect()
        })
        .collect();
    Ok(Structure::from_sets(h.signature.clone(), m * n, relations))
}

/// `A ⊗ B`. The pair `(x, y)` is element `x * |B| + y`.
pub fn direct_product(a: &Structure, b: &Structure) -> Result<Structure> {
    a.require_same_signature(b)?;
    let nb = b.size();
    let relations = a
        .relations
        .iter()
        .zip(&b.relations)
        .map(|(sa, sb)| {
            let mut set = BTreeSet::new();
            for ta in sa {
                for tb in sb {
                    set.insert(ta.iter().zip(tb).map(|(&x, &y)| x * nb + y).collect());
                }
            }
            set
        })
        .collect();
    Ok(Structure::from_sets(
        a.signature.clone(),
        a.size() * nb,
        relations,
    ))
}
