//! Feasible TTP-2 schedules for `n ≡ 0 (mod 4)` teams built from a minimum
//! perfect matching of the distance graph.
//!
//! The pipeline pairs teams into super-teams ([`matching`], [`superplan`]),
//! schedules the super-teams on a rotating round-robin, expands every
//! super-game into concrete games ([`expander`]), and measures the result
//! against the independent lower bound ([`cost`]). [`localsearch`] relabels
//! super-teams and reorders teams inside them to shave off extra travel.

pub mod bench;
pub mod cost;
pub mod error;
pub mod expander;
pub mod instance;
pub mod localsearch;
pub mod matching;
pub mod model;
pub mod superplan;

pub use cost::{CostReport, LowerBound};
pub use error::{Error, Result};
pub use expander::{build_schedule, build_schedule_with_layout, solve_n4, Construction};
pub use instance::DistanceMatrix;
pub use localsearch::{improve, solve, Outcome, Solution};
pub use matching::{brute_force_matching, min_perfect_matching, PairMatching};
pub use model::{validate_schedule, Entry, Schedule, Venue, Violation, ViolationKind};
pub use superplan::{build_layout, build_timetable, GameKind, SuperGame, SuperLayout, SuperTeam, SuperTimetable};
