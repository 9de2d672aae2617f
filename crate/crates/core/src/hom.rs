//! Homomorphism counting and existence, plus the closed forms for
//! homomorphisms into disjoint unions of (n-ary) cycles.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::analysis::{component_count, component_labels, gamma, star_transform};
use crate::error::{Error, Result};
use crate::iso::connectivity_order;
use crate::structure::Structure;

/// Exact homomorphism count.
pub type HomCount = BigUint;

/// Default cap on search nodes per call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semiring {
    Count,
    Boolean,
}

impl Semiring {
    /// Maps an exact count into this semiring.
    pub fn project(self, count: BigUint) -> BigUint {
        match self {
            Semiring::Count => count,
            Semiring::Boolean if count.is_zero() => BigUint::zero(),
            Semiring::Boolean => BigUint::one(),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semiring::Count => "count",
            Semiring::Boolean => "boolean",
        })
    }
}

impl std::str::FromStr for Semiring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" | "N" | "nat" => Ok(Semiring::Count),
            "boolean" | "bool" | "B" => Ok(Semiring::Boolean),
            other => Err(Error::InvalidArgument(format!("unknown semiring {other:?}"))),
        }
    }
}

/// Backtracking homomorphism solver with a node budget.
#[derive(Clone, Copy, Debug)]
pub struct HomSolver {
    budget: u64,
}

impl Default for HomSolver {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl HomSolver {
    pub fn new(budget: u64) -> Self {
        Self { budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Number of homomorphisms `a → b`.
    pub fn count(&self, a: &Structure, b: &Structure) -> Result<HomCount> {
        a.require_same_signature(b)?;
        let plans = plan(a, b);
        let mut nodes = 0;
        let mut total = BigUint::one();
        for p in &plans {
            let c = Search::new(p, b, self.budget, &mut nodes, false).run()?;
            if c == 0 {
                return Ok(BigUint::zero());
            }
            total *= c;
        }
        Ok(total)
    }

    /// Whether some homomorphism `a → b` exists.
    pub fn exists(&self, a: &Structure, b: &Structure) -> Result<bool> {
        a.require_same_signature(b)?;
        let plans = plan(a, b);
        let mut nodes = 0;
        for p in &plans {
            if Search::new(p, b, self.budget, &mut nodes, true).run()? == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn value(&self, a: &Structure, b: &Structure, semiring: Semiring) -> Result<HomCount> {
        match semiring {
            Semiring::Count => self.count(a, b),
            Semiring::Boolean => Ok(if self.exists(a, b)? {
                BigUint::one()
            } else {
                BigUint::zero()
            }),
        }
    }
}

pub fn hom_count(a: &Structure, b: &Structure) -> Result<HomCount> {
    HomSolver::default().count(a, b)
}

pub fn hom_exists(a: &Structure, b: &Structure) -> Result<bool> {
    HomSolver::default().exists(a, b)
}

pub fn hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(hom_exists(a, b)? && hom_exists(b, a)?)
}

/// `hom_𝒦(a, b)` for the given semiring.
pub fn hom_value(a: &Structure, b: &Structure, semiring: Semiring) -> Result<HomCount> {
    HomSolver::default().value(a, b, semiring)
}

/// One element assignment in a component's search order.
struct Step {
    elem: usize,
    /// Candidate images indexed by the image of an already-assigned
    /// neighbour; `None` means every element of the target is a candidate.
    anchor: Option<(usize, Vec<Vec<usize>>)>,
    /// Facts of the source whose last element in the order is `elem`.
    checks: Vec<(usize, Vec<usize>)>,
}

fn plan(a: &Structure, b: &Structure) -> Vec<Vec<Step>> {
    let labels = component_labels(a);
    let order = connectivity_order(a);
    let mut position = vec![0; a.size()];
    for (i, &e) in order.iter().enumerate() {
        position[e] = i;
    }
    let mut checks: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); a.size()];
    for (r, t) in a.facts() {
        let last = *t.iter().max_by_key(|&&e| position[e]).expect("arity >= 1");
        checks[last].push((r, t.clone()));
    }

    let mut plans: Vec<Vec<Step>> = Vec::new();
    let mut current_label = usize::MAX;
    for &x in &order {
        if labels[x] != current_label {
            current_label = labels[x];
            plans.push(Vec::new());
        }
        let anchor = a.facts().find_map(|(r, t)| {
            let xp = t.iter().position(|&e| e == x)?;
            let kp = t.iter().position(|&e| position[e] < position[x])?;
            Some((r, t[kp], kp, xp))
        });
        let anchor = anchor.map(|(r, known, kp, xp)| {
            let mut table = vec![Vec::new(); b.size()];
            for t in b.tuples(r) {
                table[t[kp]].push(t[xp]);
            }
            for list in &mut table {
                list.sort_unstable();
                list.dedup();
            }
            (known, table)
        });
        plans.last_mut().expect("pushed above").push(Step {
            elem: x,
            anchor,
            checks: std::mem::take(&mut checks[x]),
        });
    }
    plans
}

struct Search<'a> {
    steps: &'a [Step],
    b: &'a Structure,
    map: Vec<usize>,
    image: Vec<usize>,
    nodes: &'a mut u64,
    budget: u64,
    first_only: bool,
}

impl<'a> Search<'a> {
    fn new(steps: &'a [Step], b: &'a Structure, budget: u64, nodes: &'a mut u64, first_only: bool) -> Self {
        let max_elem = steps.iter().map(|s| s.elem).max().map_or(0, |m| m + 1);
        Self {
            steps,
            b,
            map: vec![usize::MAX; max_elem],
            image: Vec::new(),
            nodes,
            budget,
            first_only,
        }
    }

    fn run(mut self) -> Result<u64> {
        self.extend(0)
    }

    fn extend(&mut self, depth: usize) -> Result<u64> {
        if depth == self.steps.len() {
            return Ok(1);
        }
        let step = &self.steps[depth];
        // A trailing unconstrained element contributes a factor of |B|.
        if depth + 1 == self.steps.len() && step.anchor.is_none() && step.checks.is_empty() {
            return Ok(if self.first_only { 1 } else { self.b.size() as u64 });
        }
        let all: Vec<usize>;
        let candidates: &[usize] = match &step.anchor {
            Some((known, table)) => &table[self.map[*known]],
            None => {
                all = (0..self.b.size()).collect();
                &all
            }
        };
        let mut total = 0u64;
        for &y in candidates {
            *self.nodes += 1;
            if *self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            self.map[step.elem] = y;
            if !self.checks_hold(step) {
                continue;
            }
            total += self.extend(depth + 1)?;
            if self.first_only && total > 0 {
                break;
            }
        }
        self.map[step.elem] = usize::MAX;
        Ok(total)
    }

    fn checks_hold(&mut self, step: &Step) -> bool {
        for (r, t) in &step.checks {
            self.image.clear();
            self.image.extend(t.iter().map(|&e| self.map[e]));
            if !self.b.contains(*r, &self.image) {
                return false;
            }
        }
        true
    }
}

/// `hom(a, m·C_n)` by the closed form: 0 unless `n | γ(a)`, else
/// `(m·n)^c(a)`.
pub fn hom_into_cycle_union_formula(a: &Structure, m: u64, n: u64) -> Result<HomCount> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be >= 1".into()));
    }
    if gamma(a)? % n != 0 {
        return Ok(BigUint::zero());
    }
    Ok(BigUint::from(m * n).pow(component_count(a) as u32))
}

/// `hom(a, m·C_d^n)` for a structure with one n-ary relation: 0 unless
/// `d | γ(a*)`, else `(m·d)^c(a)`. For `n = 1` the star transform has no
/// edges, so the condition always holds.
pub fn hom_into_nary_cycle_union_formula(a: &Structure, m: u64, d: u64) -> Result<HomCount> {
    let sig = a.signature();
    if sig.len() != 1 {
        return Err(Error::WrongShape(format!("expected one relation, got {sig}")));
    }
    if m == 0 || d == 0 {
        return Err(Error::InvalidArgument("m and d must be >= 1".into()));
    }
    let g = if sig.arity(0) >= 2 { gamma(&star_transform(a)?)? } else { 0 };
    if g % d != 0 {
        return Ok(BigUint::zero());
    }
    Ok(BigUint::from(m * d).pow(component_count(a) as u32))
}

/// 2-adic valuation with `ν₂(0) = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nu2 {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Nu2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu2::Finite(v) => write!(f, "{v}"),
            Nu2::Infinite => f.write_str("inf"),
        }
    }
}

pub fn nu2(k: u64) -> Nu2 {
    if k == 0 {
        Nu2::Infinite
    } else {
        Nu2::Finite(k.trailing_zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{
        complete_pair, directed_cycle, directed_path, disjoint_union, edgeless_singleton, n_ary_cycle,
        scalar_multiple, Signature,
    };

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn basic_counts() {
        let sig = Signature::digraph();
        let c3 = directed_cycle(3).unwrap();
        assert_eq!(hom_count(&edgeless_singleton(&sig), &c3).unwrap(), big(3));
        assert_eq!(hom_count(&c3, &complete_pair(&sig)).unwrap(), big(8));
        assert_eq!(hom_count(&directed_path(1), &c3).unwrap(), big(3));
        let two_c3 = scalar_multiple(2, &c3).unwrap();
        assert_eq!(hom_count(&two_c3, &two_c3).unwrap(), big(36));
        assert_eq!(hom_count(&directed_cycle(2).unwrap(), &two_c3).unwrap(), big(0));
    }

    #[test]
    fn existence() {
        let c3 = directed_cycle(3).unwrap();
        assert!(hom_exists(&directed_cycle(6).unwrap(), &c3).unwrap());
        assert!(!hom_exists(&c3, &directed_cycle(2).unwrap()).unwrap());
        let both = disjoint_union(&c3, &directed_cycle(6).unwrap()).unwrap();
        assert!(hom_equivalent(&c3, &both).unwrap());
        assert!(!hom_equivalent(&directed_path(1), &directed_path(2)).unwrap());
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let t = n_ary_cycle(2, 3).unwrap();
        assert!(matches!(
            hom_count(&t, &directed_cycle(2).unwrap()),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let tiny = HomSolver::new(10);
        let p = directed_path(6);
        let k = complete_pair(&Signature::digraph());
        assert!(matches!(tiny.count(&p, &k), Err(Error::BudgetExceeded(10))));
        assert_eq!(HomSolver::default().count(&p, &k).unwrap(), big(128));
    }

    #[test]
    fn boolean_projection() {
        let c3 = directed_cycle(3).unwrap();
        assert_eq!(hom_value(&directed_path(2), &c3, Semiring::Boolean).unwrap(), big(1));
        assert_eq!(hom_value(&c3, &directed_path(4), Semiring::Boolean).unwrap(), big(0));
        assert_eq!(Semiring::Boolean.project(big(17)), big(1));
    }

    #[test]
    fn cycle_union_formula() {
        let c3 = directed_cycle(3).unwrap();
        let c2 = directed_cycle(2).unwrap();
        assert_eq!(hom_into_cycle_union_formula(&c2, 2, 3).unwrap(), big(0));
        assert_eq!(hom_into_cycle_union_formula(&directed_path(1), 1, 3).unwrap(), big(3));
        let two_c3 = scalar_multiple(2, &c3).unwrap();
        assert_eq!(hom_into_cycle_union_formula(&two_c3, 2, 3).unwrap(), big(36));
    }

    #[test]
    fn nary_formula() {
        let c23 = n_ary_cycle(2, 3).unwrap();
        assert_eq!(hom_into_nary_cycle_union_formula(&c23, 1, 2).unwrap(), big(2));
        let single = Structure::new(Signature::single(3).unwrap(), 3, vec![vec![vec![0, 1, 2]]]).unwrap();
        assert_eq!(hom_into_nary_cycle_union_formula(&single, 1, 5).unwrap(), big(5));
        assert_eq!(hom_count(&single, &n_ary_cycle(5, 3).unwrap()).unwrap(), big(5));
        for d in 1..=4 {
            assert_eq!(
                hom_into_nary_cycle_union_formula(&n_ary_cycle(d, 3).unwrap(), 1, d as u64).unwrap(),
                big(d as u64)
            );
        }
    }

    #[test]
    fn two_adic_valuation() {
        assert_eq!(nu2(12), Nu2::Finite(2));
        assert_eq!(nu2(0), Nu2::Infinite);
        assert_eq!(nu2(1), Nu2::Finite(0));
        assert!(Nu2::Infinite > Nu2::Finite(u32::MAX));
    }
}
