//! Decides the spread order in both directions and turns a failed decision
//! into a firm that pays the supposedly less informed population more.

use statdisc::blackwell::{extract_discriminating_firm, mps_dominates, Dominance};
use statdisc::model::{expected_surplus, Population};
use statdisc::oracle::{random_mps_split, random_population, InstanceSeed};
use statdisc::rational::{format_rational, format_vector};

fn report(hi: &Population, lo: &Population) {
    match mps_dominates(hi, lo).expect("equal means") {
        Dominance::Dominates(coupling) => {
            println!("dominates; coupling rows:");
            for row in coupling.weights() {
                println!("  {}", format_vector(row));
            }
        }
        Dominance::NotDominates(cert) => {
            let firm = extract_discriminating_firm(&cert, lo, hi).expect("certificate re-verifies");
            println!("does not dominate; witness tasks:");
            for task in firm.tasks() {
                println!("  {}", format_vector(task));
            }
            println!(
                "  surplus on the candidate spread {} < {} on the other side",
                format_rational(&expected_surplus(&firm, hi)),
                format_rational(&expected_surplus(&firm, lo))
            );
        }
    }
}

fn main() {
    let seed = InstanceSeed::new(42, 3, 3, 6).unwrap();
    let base = random_population(seed);
    let split = random_mps_split(&base, seed.derive(1));
    println!("base  = {base}");
    println!("split = {}", split.population);

    print!("split over base: ");
    report(&split.population, &base);
    print!("base over split: ");
    report(&base, &split.population);
}
