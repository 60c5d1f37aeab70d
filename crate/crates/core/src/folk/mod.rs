//! First-order constraint kernel.
//!
//! Two evaluators share one formula type: [`eval_naive`] walks the formula
//! over the whole domain and serves as ground truth, while
//! [`find_violations`] drives evaluation from predicate indices and
//! reports counterexample bindings. Their agreement is checked by the
//! test suite.

mod formula;
mod indexed;
mod naive;
mod query;
mod shape;

pub use formula::{
    and, atom, eq, exists, exists_unique, falsum, forall, iff, implies, not, or, well_formed, Atom,
    Binding, Diagnostic, Formula, Term,
};
pub use indexed::{find_violations, Constraint, Index, ViolationError, Witness};
pub use naive::{eval_naive, EvalError};
pub use query::{parse_pattern, query, PatternError};
pub use shape::{constraint_clauses, Clause, ShapeError};
