//! Run every pinned reproduction scenario and print the assertion lines.
//!
//! Run with: cargo run --release --example reproduce_all

use wildbrauer::scenarios;

fn main() {
    let mut all = true;
    for id in scenarios::SCENARIO_IDS {
        let outcome = scenarios::run_scenario(id).unwrap();
        print!("{outcome}");
        all &= outcome.all_pass();
    }
    println!();
    println!("overall: {}", if all { "PASS" } else { "FAIL" });
    if !all {
        std::process::exit(1);
    }
}
