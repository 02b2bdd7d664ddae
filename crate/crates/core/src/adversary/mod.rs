//! The white-box robustness game as an executable harness.
//!
//! Adversaries see the serialized internal state before every move and the
//! harness keeps its own dense ground truth, so each response is judged
//! independently of the algorithm under test.

mod collision;
mod game;
mod scenario;
mod strategies;

pub use collision::{
    collision_params, hybrid4_check, kernel_vector, syndrome_collision_attack, CollisionAdversary,
    CollisionPlan, Hybrid4Report, Hybrid4Trial,
};
pub use game::{play, Adversary, GameOutcome, Move, RoundRecord};
pub use scenario::{
    run_scenario, scenario_passed, trial_seed, Scenario, ScenarioConfig, TrialRecord,
};
pub use strategies::{ObliviousRandom, SparseKeeper, StateInspector};
