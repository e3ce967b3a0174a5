//! With free interviews only the convex hull of each support matters.
//! Two populations with the same hull tie at zero cost even when one is a
//! strict spread of the other, which a positive cost tells apart.

use statdisc::exante::{classify_ex_ante, classify_ex_ante_zero_cost, n_equivalent, ExAnteScenario};
use statdisc::model::Population;
use statdisc::rational::{int, q};

fn main() {
    let full = Population::from_raw(vec![(vec![int(1), int(0)], q(1, 2)), (vec![int(0), int(1)], q(1, 2))]).unwrap();
    let three = Population::from_raw(vec![
        (vec![int(1), int(0)], q(1, 4)),
        (vec![q(1, 2), q(1, 2)], q(1, 2)),
        (vec![int(0), int(1)], q(1, 4)),
    ])
    .unwrap();

    println!("same hull: {}", n_equivalent(&full, &three).unwrap());
    println!("zero cost: {}", classify_ex_ante_zero_cost(&full, &three).unwrap().tag());
    let positive = ExAnteScenario::new(int(1), full, three).unwrap();
    println!("cost 1:    {}", classify_ex_ante(&positive).unwrap().tag());
}
