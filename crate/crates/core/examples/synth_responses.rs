//! Writes one synthetic conjoint response file with the study's effect sizes.
//!
//! cargo run -p newslens-core --example synth_responses -- [seed] > responses.csv

use newslens_core::conjoint::synthetic::SyntheticDesign;
use newslens_core::conjoint::write_responses;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let set = SyntheticDesign::overview_study().generate(seed);
    if let Err(e) = write_responses(&set, std::io::stdout().lock()) {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
