use super::{
    cycle_detector_2query, dn_adaptive_binary_search, dn_nonadaptive_separator, lovasz_universal_decider, named_class,
    unary_full_decider, unbounded_boolean_cycle_detector, unbounded_boolean_nonzero_net_cycle_detector, ClassPredicate,
    RightTwoQueryDecider, DEFAULT_DISTINGUISHER_GUARD, DEFAULT_DISTINGUISHER_SEARCH_CAP, DEFAULT_LOVASZ_CAP,
};
use crate::error::{Error, Result};
use crate::hom::Semiring;
use crate::query::{run_adaptive_capped, run_non_adaptive, NonAdaptiveAlgorithm, Orientation, RunReport, Strategy};
use crate::structure::{Signature, Structure};

pub const ALGORITHM_NAMES: &[&str] = &[
    "cycle2q",
    "lovasz",
    "dn-sep",
    "dn-binsearch",
    "unary-full",
    "right2q",
    "ub-bool-cycle",
    "ub-bool-netcycle",
];

/// Parameters shared by the registered algorithms; each one reads only the
/// fields it needs.
#[derive(Clone, Debug)]
pub struct AlgorithmParams {
    pub class: ClassPredicate,
    pub n: u32,
    pub size_cap: Option<usize>,
    pub search_cap: usize,
    pub signature: Signature,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        Self {
            class: named_class("all").expect("built-in class"),
            n: 3,
            size_cap: None,
            search_cap: DEFAULT_DISTINGUISHER_SEARCH_CAP,
            signature: Signature::digraph(),
        }
    }
}

pub enum Algorithm {
    Adaptive {
        strategy: Box<dyn Strategy>,
        orientation: Orientation,
        semiring: Semiring,
    },
    NonAdaptive {
        algorithm: NonAdaptiveAlgorithm,
        semiring: Semiring,
    },
}

impl Algorithm {
    pub fn orientation(&self) -> Orientation {
        match self {
            Algorithm::Adaptive { orientation, .. } => *orientation,
            Algorithm::NonAdaptive { algorithm, .. } => algorithm.orientation(),
        }
    }

    pub fn semiring(&self) -> Semiring {
        match self {
            Algorithm::Adaptive { semiring, .. } | Algorithm::NonAdaptive { semiring, .. } => *semiring,
        }
    }

    pub fn run(&self, input: &Structure) -> Result<RunReport> {
        match self {
            Algorithm::Adaptive {
                strategy,
                orientation,
                semiring,
            } => run_adaptive_capped(strategy.as_ref(), input, *orientation, *semiring),
            Algorithm::NonAdaptive { algorithm, semiring } => run_non_adaptive(algorithm, input, *semiring),
        }
    }
}

fn adaptive(strategy: impl Strategy + 'static, orientation: Orientation, semiring: Semiring) -> Algorithm {
    Algorithm::Adaptive {
        strategy: Box::new(strategy),
        orientation,
        semiring,
    }
}

/// Builds one of the algorithms in [`ALGORITHM_NAMES`].
pub fn build_algorithm(name: &str, params: &AlgorithmParams) -> Result<Algorithm> {
    use Orientation::{Left, Right};
    use Semiring::{Boolean, Count};
    Ok(match name {
        "cycle2q" => adaptive(cycle_detector_2query(), Left, Count),
        "lovasz" => adaptive(
            lovasz_universal_decider(params.class.clone(), params.size_cap.unwrap_or(DEFAULT_LOVASZ_CAP))?,
            Left,
            Count,
        ),
        "dn-sep" => Algorithm::NonAdaptive {
            algorithm: dn_nonadaptive_separator(params.n)?,
            semiring: Count,
        },
        "dn-binsearch" => adaptive(dn_adaptive_binary_search(params.n)?, Left, Count),
        "unary-full" => Algorithm::NonAdaptive {
            algorithm: unary_full_decider(&params.signature, params.class.clone())?,
            semiring: Count,
        },
        "right2q" => adaptive(
            RightTwoQueryDecider::with_brute_force(
                params.class.clone(),
                &params.signature,
                params.size_cap.unwrap_or(DEFAULT_DISTINGUISHER_GUARD),
                params.search_cap,
            )?,
            Right,
            Count,
        ),
        "ub-bool-cycle" => adaptive(unbounded_boolean_cycle_detector(), Left, Boolean),
        "ub-bool-netcycle" => adaptive(unbounded_boolean_nonzero_net_cycle_detector(), Right, Boolean),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown algorithm {other:?}; known: {}",
                ALGORITHM_NAMES.join(", ")
            )))
        }
    })
}
