use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hom::hom_into_cycle_union_formula;
use crate::query::{NonAdaptiveAlgorithm, Orientation, Strategy, StrategyDecision, Transcript, Verdict};
use crate::structure::{directed_cycle, scalar_multiple, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: u32) -> Self {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::InvalidArgument(format!("parity must be even or odd, got {other:?}"))),
        }
    }
}

/// The family `{2^(n-m)·C_(2^m) : 0 ≤ m ≤ n, m of the given parity}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleFamilySpec {
    pub n: u32,
    pub parity: Parity,
}

const MAX_N: u32 = 20;

fn check_n(n: u32) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidArgument(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    Ok(())
}

/// `2^(n-m)·C_(2^m)`.
pub fn dn_member(n: u32, m: u32) -> Result<Structure> {
    check_n(n)?;
    if m > n {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
    }
    scalar_multiple(1 << (n - m), &directed_cycle(1 << m)?)
}

/// Members of the family paired with their `m`, in increasing `m`.
pub fn dn_family(family: CycleFamilySpec) -> Result<Vec<(u32, Structure)>> {
    check_n(family.n)?;
    (0..=family.n)
        .filter(|&m| Parity::of(m) == family.parity)
        .map(|m| Ok((m, dn_member(family.n, m)?)))
        .collect()
}

/// Left algorithm asking `C_1, C_2, …, C_(2^(n-1))` and accepting the answer
/// vectors of the even-`m` members.
pub fn dn_nonadaptive_separator(n: u32) -> Result<NonAdaptiveAlgorithm> {
    check_n(n)?;
    let queries: Vec<Structure> = (0..n).map(|r| directed_cycle(1 << r)).collect::<Result<_>>()?;
    let accepted = (0..=n)
        .filter(|m| m % 2 == 0)
        .map(|m| {
            queries
                .iter()
                .map(|q| hom_into_cycle_union_formula(q, 1 << (n - m), 1 << m))
                .collect::<Result<Vec<BigUint>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    NonAdaptiveAlgorithm::with_set(Orientation::Left, queries, accepted)
}

/// Binary search for `m` on inputs `2^(n-m)·C_(2^m)`: `hom(C_(2^r), ·)` is
/// non-zero iff `m ≤ r`. Answers YES iff `m` is even. Inputs outside the
/// family get an arbitrary verdict.
#[derive(Clone, Copy, Debug)]
pub struct DnBinarySearch {
    n: u32,
}

pub fn dn_adaptive_binary_search(n: u32) -> Result<DnBinarySearch> {
    check_n(n)?;
    Ok(DnBinarySearch { n })
}

impl DnBinarySearch {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `ceil(log2(n + 1))`.
    pub fn query_bound(&self) -> usize {
        (u32::BITS - self.n.leading_zeros()) as usize
    }
}

impl Strategy for DnBinarySearch {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        let (mut lo, mut hi) = (0u32, self.n);
        for answer in t.answers() {
            if lo == hi {
                return Err(Error::Strategy("transcript continues past the leaf".into()));
            }
            let mid = (lo + hi) / 2;
            if answer.is_zero() {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == hi {
            Ok(StrategyDecision::Halt(Verdict::from_bool(lo % 2 == 0)))
        } else {
            Ok(StrategyDecision::Query(directed_cycle(1 << ((lo + hi) / 2))?))
        }
    }

    fn step_cap(&self, _input_size: usize) -> Option<usize> {
        Some(self.query_bound())
    }
}
