use super::{parse_program, DatalogProgram};
use crate::error::{Error, Result};

pub const BUILTIN_PROGRAMS: &[&str] = &["directed-cycle", "pq-reachability", "nonzero-net-cycle"];

const DIRECTED_CYCLE: &str = "\
X(x,y) :- R(x,y).
X(x,y) :- X(x,x1), R(x1,y).
Ans() :- X(z,z).
";

const PQ_REACHABILITY: &str = "\
X(x) :- P(x).
X(y) :- X(x), R(x,y).
X(y) :- X(x), R(y,x).
Ans() :- X(y), Q(y).
";

const NONZERO_NET_CYCLE: &str = "\
% X(a,b): some oriented walk from a to b has net length 0
X(a,b) :- a = b.
X(a,b) :- X(a',b'), R(a',a), R(b',b).
X(a,b) :- X(a',b'), R(a,a'), R(b,b').
X(a,b) :- X(a,c), X(c,b).
% Y(a,b): some oriented walk from a to b has net length 1
Y(a,b) :- R(a,b).
Y(a,b) :- Y(a,c), X(c,b).
Y(a,b) :- X(a,c), Y(c,b).
Y(a,b) :- Y(a,c), Y(c,b).
Ans() :- Y(a,a).
";

/// Source text of a built-in program.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "directed-cycle" => Some(DIRECTED_CYCLE),
        "pq-reachability" => Some(PQ_REACHABILITY),
        "nonzero-net-cycle" => Some(NONZERO_NET_CYCLE),
        _ => None,
    }
}

/// One of the programs in [`BUILTIN_PROGRAMS`].
pub fn builtin_program(name: &str) -> Result<DatalogProgram> {
    let src = builtin_source(name).ok_or_else(|| {
        Error::Datalog(format!(
            "unknown built-in program {name:?}; known: {}",
            BUILTIN_PROGRAMS.join(", ")
        ))
    })?;
    parse_program(src)
}
