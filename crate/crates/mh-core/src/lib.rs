//! Generalized Markov-Hurwitz equations and their mutation dynamics.
//!
//! The crate covers four layers:
//!
//! * [`equation`] — the equation family, exact residuals, Vieta mutations,
//!   and descent to the fundamental solution;
//! * [`tree`] — breadth-first enumeration of mutation trees under bounds,
//!   with DOT / JSON-lines / CSV export;
//! * [`euclid`] — classical and k-deformed Euclid chains over exact
//!   rationals, comparison tuples, total intervals, auxiliary and envelope
//!   sequences;
//! * [`asymptotics`] — ratio-number sequences, logarithms of huge
//!   coordinates, and the estimation of the asymptotic scalar q;
//! * [`conjecture`] — empirical uniqueness checking and fundamental-solution
//!   searches for the extended family.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so everything can be shared freely across
//! threads.

pub mod asymptotics;
pub mod conjecture;
pub mod equation;
pub mod error;
pub mod euclid;
pub mod fmt;
pub mod tree;
pub mod word;

pub use asymptotics::{
    big_log, convergence_report, log_chain, q_estimate, ratio_closed_form, ratio_number,
    ratio_sequence, ratio_sequence_from, ConvergenceReport, LogChain, LogPoint, QEstimate,
    RatioSequence, ReportRow,
};
pub use conjecture::{
    check_uniqueness, find_fundamentals, positional_uniqueness, Counterexample,
    FundamentalCriterion, FundamentalSet, UniquenessReport,
};
pub use equation::{Descent, Equation, Limits, SolutionTuple};
pub use error::{Error, Result};
pub use euclid::{
    auxiliary_tuple, comparison_mutate, comparison_tuple, envelope_tuples, euclid_chain,
    euclid_mutate, reduce_frozen_direction, total_interval, total_interval_excluding,
    ComparisonTuple, DeformationSchedule, EnvelopePair, EuclidChain, EuclidPoint, TotalInterval,
};
pub use tree::{
    brute_force_solutions, expand_tree, expand_tree_with, solutions_upto, write_csv, write_dot,
    write_jsonl, EnumerationBound, TreeExpansion, TreeNode,
};
pub use word::MutationWord;

// The arbitrary-precision types appear throughout the public API.
pub use rug;
pub use rug::{Integer, Rational};
