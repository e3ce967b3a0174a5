//! Costly interviews: a firm interviews a population only when the expected
//! value of interviewing exceeds the cost.
//!
//! The example classifies a pair at several costs and prints each excluding
//! firm with its interview values on both sides.

use statdisc::exante::{classify_ex_ante, interview_value, ExAnteScenario};
use statdisc::model::Population;
use statdisc::rational::{format_rational, int, q};

fn main() {
    let uniform = Population::from_raw(vec![(vec![q(1, 2), q(1, 2)], int(1))]).unwrap();
    let full = Population::from_raw(vec![(vec![int(1), int(0)], q(1, 2)), (vec![int(0), int(1)], q(1, 2))]).unwrap();

    for cost in [q(1, 100), q(1, 4), int(3)] {
        let scenario = ExAnteScenario::new(cost.clone(), uniform.clone(), full.clone()).unwrap();
        let verdict = classify_ex_ante(&scenario).unwrap();
        println!("cost {}: {}", format_rational(&cost), verdict.tag());
        for (side, firm) in verdict.witnesses() {
            println!(
                "  excludes {side:?}: alpha {}, value on first {}, on second {}",
                format_rational(firm.alpha()),
                format_rational(&interview_value(firm, &uniform)),
                format_rational(&interview_value(firm, &full))
            );
        }
    }
}
