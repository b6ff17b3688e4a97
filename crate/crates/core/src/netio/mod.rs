//! Network text format, scenario configs, and CSV/JSON output.

mod emit;
mod parser;
mod scenario;

pub use emit::{report_json, schedule_from_json, schedule_to_json, trajectory_csv};
pub use parser::{network_to_text, parse_network};
pub use scenario::{Scenario, ScenarioConfig};

#[cfg(test)]
mod tests;
