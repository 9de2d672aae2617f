use std::fmt;
use std::sync::Arc;

use crate::analysis::{component_count, gamma, shortest_directed_cycle};
use crate::structure::Structure;

type Membership = Arc<dyn Fn(&Structure) -> bool + Send + Sync>;

/// A named isomorphism-closed class of structures.
#[derive(Clone)]
pub struct ClassPredicate {
    name: String,
    membership: Membership,
}

impl ClassPredicate {
    pub fn new(name: impl Into<String>, membership: impl Fn(&Structure) -> bool + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            membership: Arc::new(membership),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, s: &Structure) -> bool {
        (self.membership)(s)
    }
}

impl fmt::Debug for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassPredicate({})", self.name)
    }
}

fn is_power_of_four(l: usize) -> bool {
    l.is_power_of_two() && l.trailing_zeros().is_multiple_of(2)
}

/// Digraphs whose shortest directed cycle has length `4^j`. Cycle-free
/// digraphs are members.
pub fn even_power_cycle_class() -> ClassPredicate {
    even_power_cycle_class_with(true)
}

/// As [`even_power_cycle_class`], with explicit membership for cycle-free
/// digraphs.
pub fn even_power_cycle_class_with(cycle_free_members: bool) -> ClassPredicate {
    ClassPredicate::new("even-power-cycle", move |s| match shortest_directed_cycle(s) {
        Ok(Some(l)) => is_power_of_four(l),
        Ok(None) => cycle_free_members,
        Err(_) => false,
    })
}

pub const CLASS_NAMES: &[&str] = &[
    "all",
    "none",
    "has-directed-cycle",
    "even-power-cycle",
    "even-components",
    "has-loop",
    "nonzero-net-cycle",
    "even-size",
    "connected",
];

/// Looks up one of the classes in [`CLASS_NAMES`].
pub fn named_class(name: &str) -> Option<ClassPredicate> {
    Some(match name {
        "all" => ClassPredicate::new(name, |_| true),
        "none" => ClassPredicate::new(name, |_| false),
        "has-directed-cycle" => {
            ClassPredicate::new(name, |s| matches!(shortest_directed_cycle(s), Ok(Some(_))))
        }
        "even-power-cycle" => even_power_cycle_class(),
        "even-components" => ClassPredicate::new(name, |s| component_count(s).is_multiple_of(2)),
        "has-loop" => ClassPredicate::new(name, |s| s.is_digraph() && s.edges().any(|(u, v)| u == v)),
        "nonzero-net-cycle" => ClassPredicate::new(name, |s| matches!(gamma(s), Ok(g) if g != 0)),
        "even-size" => ClassPredicate::new(name, |s| s.size() % 2 == 0),
        "connected" => ClassPredicate::new(name, |s| component_count(s) == 1),
        _ => return None,
    })
}
