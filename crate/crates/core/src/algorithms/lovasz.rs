use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::ClassPredicate;
use crate::catalog::digraphs_up_to;
use crate::error::{Error, Result};
use crate::hom::hom_count;
use crate::query::{Strategy, StrategyDecision, Transcript, Verdict};
use crate::structure::{edgeless_singleton, Signature, Structure};

pub const DEFAULT_LOVASZ_CAP: usize = 3;

/// Left, counting. Asks for the size `n`, then `hom(B, A)` for every digraph
/// `B` on at most `n` vertices, in catalog order (size, then canonical
/// mask). The answers identify `A` up to isomorphism.
pub struct LovaszDecider {
    class: ClassPredicate,
    size_cap: usize,
    candidates: Vec<Structure>,
    /// prefix[n] = number of candidates with at most n vertices.
    prefix: Vec<usize>,
    /// Full transcript each candidate produces.
    vectors: Vec<Vec<BigUint>>,
}

pub fn lovasz_universal_decider(class: ClassPredicate, size_cap: usize) -> Result<LovaszDecider> {
    LovaszDecider::new(class, size_cap)
}

impl LovaszDecider {
    pub fn new(class: ClassPredicate, size_cap: usize) -> Result<Self> {
        if size_cap == 0 {
            return Err(Error::InvalidArgument("size cap must be >= 1".into()));
        }
        let candidates = digraphs_up_to(size_cap, size_cap.max(crate::catalog::DEFAULT_CATALOG_GUARD))?;
        let mut prefix = vec![0; size_cap + 1];
        for c in &candidates {
            for p in prefix.iter_mut().skip(c.size()) {
                *p += 1;
            }
        }
        let vectors = candidates
            .iter()
            .map(|c| {
                let mut v = vec![BigUint::from(c.size())];
                for probe in &candidates[..prefix[c.size()]] {
                    v.push(hom_count(probe, c)?);
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            class,
            size_cap,
            candidates,
            prefix,
            vectors,
        })
    }

    pub fn size_cap(&self) -> usize {
        self.size_cap
    }

    pub fn candidates(&self) -> &[Structure] {
        &self.candidates
    }

    /// Number of queries on an input with `n` vertices.
    pub fn queries_for(&self, n: usize) -> usize {
        1 + self.prefix[n.min(self.size_cap)]
    }

    fn input_size(&self, t: &Transcript) -> Result<usize> {
        let n = t.answers()[0]
            .to_usize()
            .ok_or_else(|| Error::Strategy("vertex count does not fit".into()))?;
        if n > self.size_cap {
            return Err(Error::GuardExceeded {
                what: "input size for the universal decider",
                size: n,
                limit: self.size_cap,
            });
        }
        Ok(n)
    }

    /// The candidate whose answers equal a complete transcript.
    pub fn identify(&self, t: &Transcript) -> Result<&Structure> {
        let n = self.input_size(t)?;
        if t.len() != self.queries_for(n) {
            return Err(Error::Strategy(format!(
                "transcript has {} answers, a complete one for size {n} has {}",
                t.len(),
                self.queries_for(n)
            )));
        }
        let start = self.prefix[n - 1];
        (start..self.prefix[n])
            .find(|&i| self.vectors[i] == t.answers())
            .map(|i| &self.candidates[i])
            .ok_or_else(|| Error::Internal("no enumerated digraph matches the transcript".into()))
    }
}

impl Strategy for LovaszDecider {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        if t.is_empty() {
            return Ok(StrategyDecision::Query(edgeless_singleton(&Signature::digraph())));
        }
        let n = self.input_size(t)?;
        let done = t.len() - 1;
        if done < self.prefix[n] {
            return Ok(StrategyDecision::Query(self.candidates[done].clone()));
        }
        let matched = self.identify(t)?;
        Ok(StrategyDecision::Halt(Verdict::from_bool(self.class.contains(matched))))
    }

    fn step_cap(&self, input_size: usize) -> Option<usize> {
        Some(self.queries_for(input_size))
    }
}
