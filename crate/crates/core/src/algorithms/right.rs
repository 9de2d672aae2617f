use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;

use super::ClassPredicate;
use crate::catalog::enumerate_structures;
use crate::error::{Error, Result};
use crate::hom::hom_count;
use crate::query::{Strategy, StrategyDecision, Transcript, Verdict};
use crate::structure::{complete_pair, Signature, Structure};

/// Largest class size `n` the brute-force distinguisher accepts by default.
pub const DEFAULT_DISTINGUISHER_GUARD: usize = 2;
/// Largest candidate size the brute-force distinguisher tries by default.
pub const DEFAULT_DISTINGUISHER_SEARCH_CAP: usize = 4;

/// Supplies, for a size `n` and signature, a structure `F` such that
/// `hom(H, F)` differs across all isomorphism classes `H` of size `n`.
pub type Distinguisher = Arc<dyn Fn(usize, &Signature) -> Result<Structure> + Send + Sync>;

fn class_representatives(n: usize, sig: &Signature) -> Result<Vec<Structure>> {
    Ok(enumerate_structures(sig, n, n)?.representatives().collect())
}

fn separates(classes: &[Structure], f: &Structure) -> Result<bool> {
    let mut seen = BTreeSet::new();
    for h in classes {
        if !seen.insert(hom_count(h, f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first structure, in order of size and then canonical mask, whose
/// hom counts from the size-`n` classes are pairwise distinct.
pub fn brute_force_distinguisher(n: usize, sig: &Signature, search_cap: usize) -> Result<Structure> {
    brute_force_distinguisher_with_guard(n, sig, search_cap, DEFAULT_DISTINGUISHER_GUARD)
}

pub fn brute_force_distinguisher_with_guard(
    n: usize,
    sig: &Signature,
    search_cap: usize,
    guard: usize,
) -> Result<Structure> {
    if n == 0 || n > guard {
        return Err(Error::GuardExceeded {
            what: "distinguisher class size",
            size: n,
            limit: guard,
        });
    }
    let classes = class_representatives(n, sig)?;
    for size in 1..=search_cap {
        for f in enumerate_structures(sig, size, search_cap)?.representatives() {
            if separates(&classes, &f)? {
                return Ok(f);
            }
        }
    }
    Err(Error::InvalidArgument(format!(
        "no distinguisher for size {n} over {sig} among structures with at most {search_cap} elements"
    )))
}

/// Right, counting, two queries: `hom(A, 2_τ) = 2^|A|` gives the size,
/// then `hom(A, F(|A|))` identifies the class of `A`.
pub struct RightTwoQueryDecider {
    class: ClassPredicate,
    signature: Signature,
    size_cap: usize,
    /// Per size `1..=size_cap`: the distinguisher and the (answer, class
    /// representative) table.
    tables: Vec<(Structure, Vec<(BigUint, Structure)>)>,
}

pub fn right_two_query_decider(
    class: ClassPredicate,
    signature: &Signature,
    distinguisher: Distinguisher,
    size_cap: usize,
) -> Result<RightTwoQueryDecider> {
    RightTwoQueryDecider::new(class, signature, distinguisher, size_cap)
}

impl RightTwoQueryDecider {
    pub fn new(
        class: ClassPredicate,
        signature: &Signature,
        distinguisher: Distinguisher,
        size_cap: usize,
    ) -> Result<Self> {
        let mut tables = Vec::with_capacity(size_cap);
        for n in 1..=size_cap {
            let f = distinguisher(n, signature)?;
            if f.signature() != signature {
                return Err(Error::InvalidArgument(format!("distinguisher for size {n} has the wrong signature")));
            }
            let classes = class_representatives(n, signature)?;
            let table = classes
                .into_iter()
                .map(|h| Ok((hom_count(&h, &f)?, h)))
                .collect::<Result<Vec<_>>>()?;
            let distinct: BTreeSet<&BigUint> = table.iter().map(|(a, _)| a).collect();
            if distinct.len() != table.len() {
                return Err(Error::InvalidArgument(format!(
                    "distinguisher for size {n} gives equal counts to non-isomorphic structures"
                )));
            }
            tables.push((f, table));
        }
        Ok(Self {
            class,
            signature: signature.clone(),
            size_cap,
            tables,
        })
    }

    /// Decider whose distinguishers come from [`brute_force_distinguisher`].
    pub fn with_brute_force(
        class: ClassPredicate,
        signature: &Signature,
        size_cap: usize,
        search_cap: usize,
    ) -> Result<Self> {
        let guard = size_cap.max(DEFAULT_DISTINGUISHER_GUARD);
        let d: Distinguisher =
            Arc::new(move |n, sig| brute_force_distinguisher_with_guard(n, sig, search_cap, guard));
        Self::new(class, signature, d, size_cap)
    }

    pub fn distinguisher(&self, n: usize) -> Option<&Structure> {
        self.tables.get(n.checked_sub(1)?).map(|(f, _)| f)
    }

    fn size_from(&self, answer: &BigUint) -> Result<usize> {
        let bits = answer.bits();
        if bits < 2 || answer.count_ones() != 1 {
            return Err(Error::Internal(format!("hom(A, 2) = {answer} is not a positive power of two")));
        }
        let n = (bits - 1) as usize;
        if n > self.size_cap {
            return Err(Error::GuardExceeded {
                what: "input size for the right two-query decider",
                size: n,
                limit: self.size_cap,
            });
        }
        Ok(n)
    }

    /// The class representative matching a complete transcript.
    pub fn identify(&self, t: &Transcript) -> Result<&Structure> {
        let a = t.answers();
        if a.len() != 2 {
            return Err(Error::Strategy(format!("expected 2 answers, got {}", a.len())));
        }
        let n = self.size_from(&a[0])?;
        self.tables[n - 1]
            .1
            .iter()
            .find(|(v, _)| *v == a[1])
            .map(|(_, h)| h)
            .ok_or_else(|| Error::Internal(format!("no class of size {n} gives answer {}", a[1])))
    }
}

impl Strategy for RightTwoQueryDecider {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        match t.len() {
            0 => Ok(StrategyDecision::Query(complete_pair(&self.signature))),
            1 => {
                let n = self.size_from(&t.answers()[0])?;
                Ok(StrategyDecision::Query(self.tables[n - 1].0.clone()))
            }
            2 => Ok(StrategyDecision::Halt(Verdict::from_bool(self.class.contains(self.identify(t)?)))),
            n => Err(Error::Strategy(format!("transcript of length {n} is past the leaves"))),
        }
    }

    fn step_cap(&self, _input_size: usize) -> Option<usize> {
        Some(2)
    }
}
