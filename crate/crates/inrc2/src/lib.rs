//! Toolkit for the multi-stage nurse rostering problem used by the second
//! international nurse rostering competition: a planning horizon of 4 or 8
//! weeks is solved one week at a time, with per-nurse history carried
//! between stages and the horizon evaluated as a whole at the end.
//!
//! The crate provides:
//!
//! - [`model`]: resolved domain types (scenario, week data, history,
//!   solutions, costs);
//! - [`textio`]: parsers and writers for the four text file formats;
//! - [`evaluation`]: hard feasibility checks, weekly and end-of-horizon
//!   soft costs with exact week-border semantics, and the history
//!   transition;
//! - [`solver`]: a baseline greedy + simulated annealing week solver;
//! - [`simulator`]: the multi-stage orchestrator driving an external
//!   solver executable;
//! - [`adjudication`]: rank-based competition scoring with tie averaging;
//! - [`generator`], [`screen`], [`report`]: instance generation, a
//!   necessary-condition feasibility screen, and the validator report.

pub mod adjudication;
pub mod evaluation;
pub mod generator;
pub mod model;
pub mod report;
pub mod screen;
pub mod simulator;
pub mod solver;
pub mod textio;
