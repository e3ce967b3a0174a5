//! Classifies a few equal-mean pairs over two skills and prints the witnesses.
//!
//! Run with `cargo run --example classify_pairs`.

use statdisc::blackwell::{classify, Classification, Side};
use statdisc::model::{expected_surplus, Population};
use statdisc::rational::{format_rational, int, q};

fn pop(atoms: &[((i64, i64), (i64, i64))]) -> Population {
    Population::from_raw(
        atoms
            .iter()
            .map(|&((n, d), (wn, wd))| (vec![q(n, d), int(1) - q(n, d)], q(wn, wd)))
            .collect(),
    )
    .expect("valid population")
}

fn main() {
    let uniform = pop(&[((1, 2), (1, 1))]);
    let full = pop(&[((1, 1), (1, 2)), ((0, 1), (1, 2))]);
    let outer = pop(&[((1, 10), (1, 2)), ((9, 10), (1, 2))]);
    let three = pop(&[((1, 1), (1, 4)), ((1, 2), (1, 2)), ((0, 1), (1, 4))]);

    let pairs = [("uniform", &uniform, "full", &full), ("outer", &outer, "three", &three), ("full", &full, "full", &full)];
    for (a_name, a, b_name, b) in pairs {
        let verdict = classify(a, b).expect("equal means");
        println!("{a_name} vs {b_name}: {}", verdict.tag());
        match &verdict {
            Classification::NoDiscrimination => {}
            other => {
                for (side, firm) in other.witnesses() {
                    let (against, favoured) = match side {
                        Side::First => (a, b),
                        Side::Second => (b, a),
                    };
                    println!(
                        "  witness against {side:?}: {} tasks, surplus {} < {}",
                        firm.tasks().len(),
                        format_rational(&expected_surplus(firm, against)),
                        format_rational(&expected_surplus(firm, favoured)),
                    );
                }
            }
        }
    }
}
