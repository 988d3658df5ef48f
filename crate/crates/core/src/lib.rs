//! Multi-goal achievement games.
//!
//! `N` agents each pay one of `K` cost levels toward each of `M` goals; a goal
//! is achieved when its contributions reach its threshold, and every agent
//! earns its motivation for each achieved goal minus what it paid. This crate
//! builds such games, enumerates their pure-strategy Nash equilibria exactly,
//! runs iterated strict-dominance elimination, checks the diagonal-equilibrium
//! theorem for individual purpose games, and computes group performance
//! scores over sweeps of group compositions.

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod game;
mod odometer;
pub mod rational;
pub mod scoring;
pub mod sweep;

pub use equilibrium::{
    brute_force_equilibria, equilibria, iesds, is_equilibrium, single_goal_equilibria,
    verify_importance_of_being_different, EquilibriumSet, GoalColumnProfile, Limits, SurvivorSets,
    TheoremReport,
};
pub use error::{Error, Result};
pub use game::{
    standard_game, Classification, ContributionProfile, CostSet, Game, GroupSpec, TypeCode,
};
pub use odometer::Odometer;
pub use rational::Rational;
pub use scoring::{RankedRow, ScoreReport};
pub use sweep::{run_sweep, SweepConfig, SweepRecord, TypeUniverse};
