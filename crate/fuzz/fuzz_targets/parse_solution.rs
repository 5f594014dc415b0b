#![no_main]

use std::sync::OnceLock;

use inrc2::model::Scenario;
use libfuzzer_sys::fuzz_target;

static SCENARIO: OnceLock<Scenario> = OnceLock::new();

fn scenario() -> &'static Scenario {
    SCENARIO.get_or_init(|| {
        inrc2::textio::parse_scenario(include_str!("../corpus/parse_scenario/sample_scenario.txt"))
            .expect("seed scenario parses")
    })
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = inrc2::textio::parse_solution(text, scenario());
    }
});
