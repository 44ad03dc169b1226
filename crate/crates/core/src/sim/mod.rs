//! Evolution engines, scenarios and the algebra suite.

pub mod algebra;
pub mod config;
pub mod dump;
pub mod engine;
pub mod fokker_planck;
pub mod oracle;
pub mod scenario;

pub use algebra::{check_algebra, AlgebraReport, CheckLine, Profile};
pub use config::ScenarioConfig;
pub use engine::{evolve_heisenberg, evolve_quantum, EvolutionResult, EvolveOptions, Method};
pub use scenario::{run_scenario, simulate, write_outputs, Simulation};
