use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::ClassPredicate;
use crate::error::{Error, Result};
use crate::query::{NonAdaptiveAlgorithm, Orientation};
use crate::structure::{Signature, Structure};

const MAX_UNARY_RELATIONS: usize = 16;

fn check_unary(sig: &Signature) -> Result<()> {
    if !sig.is_unary() {
        return Err(Error::WrongShape(format!("expected a unary signature, got {sig}")));
    }
    if sig.len() > MAX_UNARY_RELATIONS {
        return Err(Error::GuardExceeded {
            what: "unary relation count",
            size: sig.len(),
            limit: MAX_UNARY_RELATIONS,
        });
    }
    Ok(())
}

/// The singletons `F_S`, one per subset `S` of the relations, indexed by
/// the bitmask of `S` (bit `r` for relation `r`).
pub fn unary_queries(sig: &Signature) -> Result<Vec<Structure>> {
    check_unary(sig)?;
    (0usize..1 << sig.len())
        .map(|s| {
            let rels = (0..sig.len())
                .map(|r| if s >> r & 1 == 1 { vec![vec![0]] } else { Vec::new() })
                .collect();
            Structure::new(sig.clone(), 1, rels)
        })
        .collect()
}

/// Rebuilds a structure from the answers `hom(F_S, A)` (the number of
/// elements in at least the relations of `S`) by Möbius inversion over the
/// subset lattice. Elements come out grouped by their exact relation set,
/// in increasing bitmask order.
pub fn reconstruct_unary(sig: &Signature, answers: &[BigUint]) -> Result<Structure> {
    check_unary(sig)?;
    let k = sig.len();
    if answers.len() != 1 << k {
        return Err(Error::InvalidArgument(format!(
            "expected {} answers, got {}",
            1usize << k,
            answers.len()
        )));
    }
    let at_least: Vec<i128> = answers
        .iter()
        .map(|a| a.to_i128().ok_or_else(|| Error::InvalidArgument(format!("answer {a} is too large"))))
        .collect::<Result<_>>()?;
    let mut exact = at_least.clone();
    for r in 0..k {
        for s in 0..1usize << k {
            if s >> r & 1 == 0 {
                exact[s] -= exact[s | 1 << r];
            }
        }
    }
    if let Some(bad) = exact.iter().find(|&&c| c < 0) {
        return Err(Error::InvalidArgument(format!("answers are inconsistent (class count {bad})")));
    }
    let size: i128 = exact.iter().sum();
    if !(1..=1 << 20).contains(&size) {
        return Err(Error::InvalidArgument(format!("reconstructed size {size} is out of range")));
    }
    let mut rels = vec![Vec::new(); k];
    let mut next = 0;
    for (s, &count) in exact.iter().enumerate() {
        for _ in 0..count {
            for (r, rel) in rels.iter_mut().enumerate() {
                if s >> r & 1 == 1 {
                    rel.push(vec![next]);
                }
            }
            next += 1;
        }
    }
    Structure::new(sig.clone(), next, rels)
}

/// Left, `2^k` queries: reconstructs the input and applies the class.
pub fn unary_full_decider(sig: &Signature, class: ClassPredicate) -> Result<NonAdaptiveAlgorithm> {
    let queries = unary_queries(sig)?;
    let sig = sig.clone();
    NonAdaptiveAlgorithm::with_predicate(Orientation::Left, queries, move |answers| {
        reconstruct_unary(&sig, answers).is_ok_and(|s| class.contains(&s))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::Semiring;
    use crate::iso::isomorphic;
    use crate::query::run_non_adaptive;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn one_predicate() {
        let sig = Signature::unary(["P"]).unwrap();
        let s = Structure::new(sig.clone(), 2, vec![vec![vec![1]]]).unwrap();
        let alg = unary_full_decider(&sig, ClassPredicate::new("all", |_| true)).unwrap();
        let r = run_non_adaptive(&alg, &s, Semiring::Count).unwrap();
        assert_eq!(r.transcript.answers(), [big(2), big(1)]);
        let back = reconstruct_unary(&sig, r.transcript.answers()).unwrap();
        assert!(isomorphic(&back, &s));

        let empty = Structure::empty(sig.clone(), 3).unwrap();
        let r = run_non_adaptive(&alg, &empty, Semiring::Count).unwrap();
        assert_eq!(r.transcript.answers(), [big(3), big(0)]);
    }

    #[test]
    fn two_predicates() {
        let sig = Signature::unary(["P", "Q"]).unwrap();
        let s = Structure::new(sig.clone(), 3, vec![vec![vec![0], vec![1]], vec![vec![1], vec![2]]]).unwrap();
        let qs = unary_queries(&sig).unwrap();
        let answers: Vec<BigUint> = qs.iter().map(|q| crate::hom::hom_count(q, &s).unwrap()).collect();
        assert_eq!(answers, vec![big(3), big(2), big(2), big(1)]);
        assert!(isomorphic(&reconstruct_unary(&sig, &answers).unwrap(), &s));
        assert!(reconstruct_unary(&sig, &[big(1), big(2), big(0), big(0)]).is_err());
        assert!(unary_queries(&Signature::digraph()).is_err());
    }
}
