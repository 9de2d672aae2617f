//! Query algorithms: non-adaptive algorithms (a tuple of query structures
//! plus an acceptance set) and adaptive strategies that pick each query
//! from the answers so far.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hom::{hom_value, Semiring};
use crate::structure::{Signature, Structure};

/// Left algorithms ask `hom(F, A)`, right algorithms ask `hom(A, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Left => "left",
            Orientation::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
        })
    }
}

/// The answers received so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Transcript(Vec<BigUint>);

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_answers(answers: Vec<BigUint>) -> Self {
        Self(answers)
    }

    pub fn answers(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<&BigUint> {
        self.0.last()
    }

    fn push(&mut self, answer: BigUint) {
        self.0.push(answer);
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyDecision {
    Query(Structure),
    Halt(Verdict),
}

/// An adaptive query algorithm, given as its decision function on
/// transcripts.
pub trait Strategy: Send + Sync {
    fn decide(&self, transcript: &Transcript) -> Result<StrategyDecision>;

    /// Upper bound on the number of queries for an input of the given size,
    /// if the strategy knows one.
    fn step_cap(&self, _input_size: usize) -> Option<usize> {
        None
    }
}

impl<S: Strategy + ?Sized> Strategy for Arc<S> {
    fn decide(&self, transcript: &Transcript) -> Result<StrategyDecision> {
        (**self).decide(transcript)
    }

    fn step_cap(&self, input_size: usize) -> Option<usize> {
        (**self).step_cap(input_size)
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn decide(&self, transcript: &Transcript) -> Result<StrategyDecision> {
        (**self).decide(transcript)
    }

    fn step_cap(&self, input_size: usize) -> Option<usize> {
        (**self).step_cap(input_size)
    }
}

/// A strategy backed by a closure.
pub struct FnStrategy<F>(pub F);

impl<F> Strategy for FnStrategy<F>
where
    F: Fn(&Transcript) -> Result<StrategyDecision> + Send + Sync,
{
    fn decide(&self, transcript: &Transcript) -> Result<StrategyDecision> {
        (self.0)(transcript)
    }
}

/// `2n + n²`, the query cap for built-in unbounded strategies.
pub fn default_max_steps(input_size: usize) -> usize {
    2 * input_size + input_size * input_size
}

pub type AcceptFn = Arc<dyn Fn(&[BigUint]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Acceptance {
    /// Sorted, duplicate-free answer vectors.
    Set(Vec<Vec<BigUint>>),
    Predicate(AcceptFn),
}

impl fmt::Debug for Acceptance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Acceptance::Set(v) => f.debug_tuple("Set").field(v).finish(),
            Acceptance::Predicate(_) => f.write_str("Predicate(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NonAdaptiveAlgorithm {
    orientation: Orientation,
    queries: Vec<Structure>,
    accept: Acceptance,
}

impl NonAdaptiveAlgorithm {
    pub fn with_set(
        orientation: Orientation,
        queries: Vec<Structure>,
        accepted: impl IntoIterator<Item = Vec<BigUint>>,
    ) -> Result<Self> {
        let mut set: Vec<Vec<BigUint>> = accepted.into_iter().collect();
        if let Some(bad) = set.iter().find(|v| v.len() != queries.len()) {
            return Err(Error::InvalidArgument(format!(
                "accepted vector has length {}, expected {}",
                bad.len(),
                queries.len()
            )));
        }
        set.sort();
        set.dedup();
        Self::build(orientation, queries, Acceptance::Set(set))
    }

    pub fn with_predicate(
        orientation: Orientation,
        queries: Vec<Structure>,
        accept: impl Fn(&[BigUint]) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(orientation, queries, Acceptance::Predicate(Arc::new(accept)))
    }

    fn build(orientation: Orientation, queries: Vec<Structure>, accept: Acceptance) -> Result<Self> {
        let Some(first) = queries.first() else {
            return Err(Error::InvalidArgument("a non-adaptive algorithm needs at least one query".into()));
        };
        for q in &queries[1..] {
            first.require_same_signature(q)?;
        }
        Ok(Self {
            orientation,
            queries,
            accept,
        })
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn queries(&self) -> &[Structure] {
        &self.queries
    }

    pub fn k(&self) -> usize {
        self.queries.len()
    }

    pub fn signature(&self) -> &Signature {
        self.queries[0].signature()
    }

    pub fn acceptance(&self) -> &Acceptance {
        &self.accept
    }

    pub fn accepts(&self, answers: &[BigUint]) -> bool {
        match &self.accept {
            Acceptance::Set(set) => set.binary_search_by(|v| v.as_slice().cmp(answers)).is_ok(),
            Acceptance::Predicate(f) => f(answers),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub verdict: Verdict,
    pub transcript: Transcript,
    pub queries: Vec<Structure>,
}

impl RunReport {
    pub fn query_count(&self) -> usize {
        self.queries.len()
    }
}

/// The answer to a single query in the given orientation and semiring.
pub fn ask(query: &Structure, input: &Structure, orientation: Orientation, semiring: Semiring) -> Result<BigUint> {
    match orientation {
        Orientation::Left => hom_value(query, input, semiring),
        Orientation::Right => hom_value(input, query, semiring),
    }
}

pub fn run_non_adaptive(alg: &NonAdaptiveAlgorithm, input: &Structure, semiring: Semiring) -> Result<RunReport> {
    alg.queries[0].require_same_signature(input)?;
    let mut transcript = Transcript::new();
    for q in &alg.queries {
        transcript.push(ask(q, input, alg.orientation, semiring)?);
    }
    Ok(RunReport {
        verdict: Verdict::from_bool(alg.accepts(transcript.answers())),
        transcript,
        queries: alg.queries.clone(),
    })
}

/// Runs a strategy until it halts. With `max_steps = Some(c)`, issuing a
/// query beyond the `c`-th is an error.
pub fn run_adaptive(
    strategy: &dyn Strategy,
    input: &Structure,
    orientation: Orientation,
    semiring: Semiring,
    max_steps: Option<usize>,
) -> Result<RunReport> {
    let mut transcript = Transcript::new();
    let mut queries = Vec::new();
    loop {
        match strategy.decide(&transcript)? {
            StrategyDecision::Halt(verdict) => {
                return Ok(RunReport {
                    verdict,
                    transcript,
                    queries,
                })
            }
            StrategyDecision::Query(q) => {
                if let Some(cap) = max_steps {
                    if queries.len() >= cap {
                        return Err(Error::StepCapExceeded(cap));
                    }
                }
                if q.signature() != input.signature() {
                    return Err(Error::Strategy(format!(
                        "query over {} issued against an input over {}",
                        q.signature(),
                        input.signature()
                    )));
                }
                transcript.push(ask(&q, input, orientation, semiring)?);
                queries.push(q);
            }
        }
    }
}

/// [`run_adaptive`] with the strategy's own step cap.
pub fn run_adaptive_capped(
    strategy: &dyn Strategy,
    input: &Structure,
    orientation: Orientation,
    semiring: Semiring,
) -> Result<RunReport> {
    run_adaptive(strategy, input, orientation, semiring, strategy.step_cap(input.size()))
}

/// True iff the strategy halts within `k` queries on every given input.
pub fn bounded_depth_check<'a>(
    strategy: &dyn Strategy,
    inputs: impl IntoIterator<Item = &'a Structure>,
    orientation: Orientation,
    semiring: Semiring,
    k: usize,
) -> Result<bool> {
    for input in inputs {
        match run_adaptive(strategy, input, orientation, semiring, Some(k)) {
            Ok(_) => {}
            Err(Error::StepCapExceeded(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// A non-adaptive algorithm viewed as an adaptive one.
pub struct LiftedStrategy {
    alg: NonAdaptiveAlgorithm,
}

pub fn lift_non_adaptive(alg: NonAdaptiveAlgorithm) -> LiftedStrategy {
    LiftedStrategy { alg }
}

impl Strategy for LiftedStrategy {
    fn decide(&self, transcript: &Transcript) -> Result<StrategyDecision> {
        let k = self.alg.k();
        match transcript.len() {
            i if i < k => Ok(StrategyDecision::Query(self.alg.queries[i].clone())),
            i if i == k => Ok(StrategyDecision::Halt(Verdict::from_bool(
                self.alg.accepts(transcript.answers()),
            ))),
            i => Err(Error::Strategy(format!(
                "transcript of length {i} is past the leaves of a {k}-query algorithm"
            ))),
        }
    }

    fn step_cap(&self, _input_size: usize) -> Option<usize> {
        Some(self.alg.k())
    }
}

#[derive(Clone, Debug)]
enum Node {
    Query(usize),
    Halt(Verdict),
}

/// Turns a Boolean strategy of depth at most `k` into a non-adaptive
/// algorithm that asks every query the strategy could reach (at most
/// `2^k - 1` distinct structures) and replays the decision tree on the
/// answers.
pub fn flatten_adaptive_boolean(
    strategy: &dyn Strategy,
    orientation: Orientation,
    k: usize,
) -> Result<NonAdaptiveAlgorithm> {
    let mut queries: Vec<Structure> = Vec::new();
    let mut tree: HashMap<Vec<bool>, Node> = HashMap::new();
    let mut frontier: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(path) = frontier.pop() {
        let transcript = Transcript::from_answers(path.iter().map(|&b| BigUint::from(b as u8)).collect());
        let node = match strategy.decide(&transcript)? {
            StrategyDecision::Halt(v) => Node::Halt(v),
            StrategyDecision::Query(_) if path.len() == k => {
                return Err(Error::Strategy(format!(
                    "strategy asks a query after {k} answers, so its depth exceeds {k}"
                )));
            }
            StrategyDecision::Query(q) => {
                let idx = match queries.iter().position(|x| *x == q) {
                    Some(i) => i,
                    None => {
                        queries.push(q);
                        queries.len() - 1
                    }
                };
                for bit in [false, true] {
                    let mut child = path.clone();
                    child.push(bit);
                    frontier.push(child);
                }
                Node::Query(idx)
            }
        };
        tree.insert(path, node);
    }
    if queries.is_empty() {
        return Err(Error::Strategy(
            "strategy halts before any query, so there is no query tuple to flatten into".into(),
        ));
    }
    let tree = Arc::new(tree);
    NonAdaptiveAlgorithm::with_predicate(orientation, queries, move |answers| {
        let mut path = Vec::new();
        loop {
            match &tree[&path] {
                Node::Halt(v) => return v.is_yes(),
                Node::Query(i) => path.push(!answers[*i].is_zero()),
            }
        }
    })
}
