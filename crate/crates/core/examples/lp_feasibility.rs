//! The exact feasibility solver on its own: `M w = b, w ≥ 0` either yields
//! a point or a Farkas vector `y` with `yᵀM ≥ 0` and `yᵀb < 0`.

use statdisc::lp::{solve_feasibility, Feasibility, FeasibilitySystem};
use statdisc::rational::{format_vector, q};

fn solve(label: &str, rows: &[&[i64]], rhs: &[i64]) {
    let system = FeasibilitySystem::new(
        rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect(),
        rhs.iter().map(|&x| q(x, 1)).collect(),
        rows[0].len(),
    )
    .unwrap();
    match solve_feasibility(&system).unwrap() {
        Feasibility::Feasible(w) => println!("{label}: feasible at {}", format_vector(&w)),
        Feasibility::Infeasible(cert) => {
            println!("{label}: infeasible, certificate y = {}", format_vector(cert.multipliers()));
            println!("  yᵀM = {}", format_vector(&system.weighted_columns(cert.multipliers())));
        }
    }
}

fn main() {
    solve("transport 2x2", &[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0]], &[1, 2, 2]);
    solve("sign forced", &[&[1]], &[-1]);
    solve("contradictory", &[&[1, 2], &[2, 4]], &[1, 3]);
}
