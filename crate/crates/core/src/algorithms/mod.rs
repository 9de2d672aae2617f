//! Concrete query algorithms and the classes they decide.

mod classes;
mod cycles;
mod dn;
mod lovasz;
mod prime_cycles;
mod registry;
mod right;
mod unary;

pub use classes::{even_power_cycle_class, even_power_cycle_class_with, named_class, ClassPredicate, CLASS_NAMES};
pub use cycles::{
    cycle_detector_2query, unbounded_boolean_cycle_detector, unbounded_boolean_nonzero_net_cycle_detector,
    unbounded_step_cap, CycleDetector2Query, UnboundedCycleDetector, UnboundedNetCycleDetector,
};
pub use dn::{
    dn_adaptive_binary_search, dn_family, dn_member, dn_nonadaptive_separator, CycleFamilySpec, DnBinarySearch,
    Parity,
};
pub use lovasz::{lovasz_universal_decider, LovaszDecider, DEFAULT_LOVASZ_CAP};
pub use prime_cycles::{
    adaptive_not_better_instance, adaptive_not_better_instance_with_guard, AdaptiveNotBetterInstance,
    DEFAULT_PRIME_PRODUCT_GUARD,
};
pub use registry::{build_algorithm, Algorithm, AlgorithmParams, ALGORITHM_NAMES};
pub use right::{
    brute_force_distinguisher, right_two_query_decider, Distinguisher, RightTwoQueryDecider,
    DEFAULT_DISTINGUISHER_GUARD, DEFAULT_DISTINGUISHER_SEARCH_CAP,
};
pub use unary::{reconstruct_unary, unary_full_decider, unary_queries};
