use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::query::{default_max_steps, Strategy, StrategyDecision, Transcript, Verdict};
use crate::structure::{directed_cycle, directed_path, edgeless_singleton, Signature};

/// Asks for the number of vertices `n`, then for `hom(P_n, A)`. A digraph
/// on `n` vertices has a walk of length `n` iff it has a directed cycle.
#[derive(Clone, Copy, Debug, Default)]
pub struct CycleDetector2Query;

pub fn cycle_detector_2query() -> CycleDetector2Query {
    CycleDetector2Query
}

impl Strategy for CycleDetector2Query {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        let a = t.answers();
        match a.len() {
            0 => Ok(StrategyDecision::Query(edgeless_singleton(&Signature::digraph()))),
            1 => {
                let n = a[0]
                    .to_usize()
                    .ok_or_else(|| Error::Strategy(format!("vertex count {} does not fit", a[0])))?;
                Ok(StrategyDecision::Query(directed_path(n)))
            }
            2 => Ok(StrategyDecision::Halt(Verdict::from_bool(!a[1].is_zero()))),
            n => Err(Error::Strategy(format!("transcript of length {n} is past the leaves"))),
        }
    }

    fn step_cap(&self, _input_size: usize) -> Option<usize> {
        Some(2)
    }
}

/// Query cap used by the unbounded Boolean detectors: `2n + n²`, raised to
/// `2n + 2` where that is larger.
pub fn unbounded_step_cap(input_size: usize) -> usize {
    default_max_steps(input_size).max(2 * input_size + 2)
}

fn round_query(index: usize) -> Result<crate::structure::Structure> {
    let round = index / 2 + 1;
    if index.is_multiple_of(2) {
        Ok(directed_path(round))
    } else {
        directed_cycle(round)
    }
}

fn is_one(v: &BigUint) -> bool {
    !v.is_zero()
}

/// Left, Boolean: asks `P_1, C_1, P_2, C_2, …`. Halts NO once some path
/// does not map in, YES once some cycle maps in.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnboundedCycleDetector;

pub fn unbounded_boolean_cycle_detector() -> UnboundedCycleDetector {
    UnboundedCycleDetector
}

impl Strategy for UnboundedCycleDetector {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        if let Some(last) = t.last() {
            let index = t.len() - 1;
            if index.is_multiple_of(2) && !is_one(last) {
                return Ok(StrategyDecision::Halt(Verdict::No));
            }
            if index % 2 == 1 && is_one(last) {
                return Ok(StrategyDecision::Halt(Verdict::Yes));
            }
        }
        Ok(StrategyDecision::Query(round_query(t.len())?))
    }

    fn step_cap(&self, input_size: usize) -> Option<usize> {
        Some(unbounded_step_cap(input_size))
    }
}

/// Right, Boolean: asks `A → P_1, A → C_1, A → P_2, …`. Halts NO once the
/// input maps to a path, YES once it fails to map to a cycle.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnboundedNetCycleDetector;

pub fn unbounded_boolean_nonzero_net_cycle_detector() -> UnboundedNetCycleDetector {
    UnboundedNetCycleDetector
}

impl Strategy for UnboundedNetCycleDetector {
    fn decide(&self, t: &Transcript) -> Result<StrategyDecision> {
        if let Some(last) = t.last() {
            let index = t.len() - 1;
            if index.is_multiple_of(2) && is_one(last) {
                return Ok(StrategyDecision::Halt(Verdict::No));
            }
            if index % 2 == 1 && !is_one(last) {
                return Ok(StrategyDecision::Halt(Verdict::Yes));
            }
        }
        Ok(StrategyDecision::Query(round_query(t.len())?))
    }

    fn step_cap(&self, input_size: usize) -> Option<usize> {
        Some(unbounded_step_cap(input_size))
    }
}
