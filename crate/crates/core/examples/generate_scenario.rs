//! Writes a generated scenario to stdout and checks its ground truth.

use statdisc::blackwell::mps_dominates;
use statdisc::cli::generate_scenario;
use statdisc::oracle::InstanceSeed;

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let scenario = generate_scenario(InstanceSeed::new(seed, 2, 4, 8).unwrap());
    print!("{}", scenario.to_text());
    for truth in &scenario.ground_truth {
        let hi = scenario.population(&truth.hi).unwrap();
        let lo = scenario.population(&truth.lo).unwrap();
        let holds = mps_dominates(&hi, &lo).unwrap().holds();
        eprintln!("{} over {}: {}", truth.hi, truth.lo, if holds { "confirmed" } else { "NOT confirmed" });
    }
}
