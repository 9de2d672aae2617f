use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hom::hom_into_cycle_union_formula;
use crate::query::{NonAdaptiveAlgorithm, Orientation};
use crate::structure::{directed_cycle, scalar_multiple, Structure};

/// Default limit on the product of the primes.
pub const DEFAULT_PRIME_PRODUCT_GUARD: u64 = 1000;

/// For distinct primes `p_1..p_2k` with product `P` and `q_i = P / p_i`:
/// the queries `F_i = p_i·C_(q_i)` for `i ≤ k`, the test structures
/// `p_j·C_(q_j)` for `j ≤ 2k`, and the non-adaptive algorithm accepting the
/// answer vectors of the first `k` test structures.
#[derive(Clone, Debug)]
pub struct AdaptiveNotBetterInstance {
    pub k: usize,
    pub primes: Vec<u64>,
    pub product: u64,
    pub queries: Vec<Structure>,
    pub tests: Vec<Structure>,
    /// `matrix[i][j] = hom(F_i, p_j·C_(q_j))`, by the closed form.
    pub matrix: Vec<Vec<BigUint>>,
    pub algorithm: NonAdaptiveAlgorithm,
}

impl AdaptiveNotBetterInstance {
    /// `q_j = P / p_j`.
    pub fn q(&self, j: usize) -> u64 {
        self.product / self.primes[j]
    }

    /// Answer vector of test structure `j`.
    pub fn column(&self, j: usize) -> Vec<BigUint> {
        self.matrix.iter().map(|row| row[j].clone()).collect()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn adaptive_not_better_instance(k: usize, primes: &[u64]) -> Result<AdaptiveNotBetterInstance> {
    adaptive_not_better_instance_with_guard(k, primes, DEFAULT_PRIME_PRODUCT_GUARD)
}

pub fn adaptive_not_better_instance_with_guard(
    k: usize,
    primes: &[u64],
    guard: u64,
) -> Result<AdaptiveNotBetterInstance> {
    if k == 0 || primes.len() != 2 * k {
        return Err(Error::InvalidArgument(format!("need 2k primes for k = {k}, got {}", primes.len())));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() || !primes.iter().all(|&p| is_prime(p)) {
        return Err(Error::InvalidArgument(format!("{primes:?} are not distinct primes")));
    }
    let product = primes.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p)).unwrap_or(u64::MAX);
    if product > guard {
        return Err(Error::GuardExceeded {
            what: "prime product",
            size: product as usize,
            limit: guard as usize,
        });
    }
    let member = |j: usize| -> Result<Structure> {
        scalar_multiple(primes[j] as usize, &directed_cycle((product / primes[j]) as usize)?)
    };
    let queries = (0..k).map(member).collect::<Result<Vec<_>>>()?;
    let tests = (0..2 * k).map(member).collect::<Result<Vec<_>>>()?;
    let matrix = queries
        .iter()
        .map(|f| {
            (0..2 * k)
                .map(|j| hom_into_cycle_union_formula(f, primes[j], product / primes[j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let accepted: Vec<Vec<BigUint>> = (0..k)
        .map(|j| matrix.iter().map(|row| row[j].clone()).collect())
        .collect();
    let algorithm = NonAdaptiveAlgorithm::with_set(Orientation::Left, queries.clone(), accepted)?;
    Ok(AdaptiveNotBetterInstance {
        k,
        primes: primes.to_vec(),
        product,
        queries,
        tests,
        matrix,
        algorithm,
    })
}
