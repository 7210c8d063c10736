//! Reproduction harness: named scenarios with checked assertions, the
//! growth experiment and the automatic-identity fragment check.

mod boozer;
mod growth;
mod report;
mod scenarios;
mod suite;

pub use boozer::{boozer_fragment_check, FragmentConfig};
pub use growth::{growth_csv, growth_experiment, render_growth, Flavor, GrowthConfig, GrowthRow, Level, LevelOutcome};
pub use report::{render_reports, Assertion, ScenarioReport, ScenarioStatus};
pub use scenarios::{run_scenario, verify_suite, VerifyConfig, SCENARIO_IDS};
pub use suite::{random_faithful_actions, SuiteMember, MAX_STAR_SIZE};
