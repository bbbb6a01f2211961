//! Classical and fuzzy AHP decision engine.
//!
//! * [`comparison`]: crisp reciprocal matrices, eigenvector and geometric-mean
//!   priorities, consistency ratio.
//! * [`fuzzy`]: triangular fuzzy numbers, the fuzzy judgment scale, fuzzy
//!   comparison matrices.
//! * [`extent`]: extent analysis (synthetic extents, degree of possibility).
//! * [`hierarchy`]: goal / criteria / alternatives problems, synthesis,
//!   ranking comparison, attitude what-ifs and rank-reversal probing.
//! * [`store`]: problem documents, CSV import, fixtures, result files.
//! * [`report`]: 4-decimal serializable views of results.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod comparison;
pub mod extent;
pub mod fuzzy;
pub mod hierarchy;
pub mod report;
pub mod store;

pub use comparison::{
    consistency, eigen_weights, geometric_mean_weights, repair_matrix, validate_matrix, ComparisonMatrix,
    ConsistencyReport, MatrixError, Strictness, WeightMethod, WeightVector,
};
pub use extent::{extent_weights, possibility, synthetic_extents, ExtentError, ExtentSet, PossibilityMatrix};
pub use fuzzy::{defuzzify, scale_to_tfn, Attitude, FuzzyError, FuzzyMatrix, Tfn};
pub use hierarchy::{
    aggregate_global, compare_rankings, rank_reversal_probe, solve, solve_crisp, solve_fuzzy, what_if_attitude,
    ComparisonReport, CrispMethod, DecisionProblem, EngineError, Judgments, MatrixSelector, Mode, NewAlternative,
    ProbeJudgments, ProbeReport, RankedResult, Solve,
};
pub use store::{load_problem_path, load_problem_str, LoadedProblem, ProblemDocument, StoreError};
