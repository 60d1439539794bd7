//! Running a scenario from a JSON configuration and printing its report.

use framekin::scenario::{report_json, run_scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScenarioConfig::from_json(r#"{"scenario":"experiment","a":1e-3,"u":0.1005,"v-probe":0.01}"#)?;
    let report = run_scenario(&config)?;
    print!("{}", report_json(&report));
    Ok(())
}
