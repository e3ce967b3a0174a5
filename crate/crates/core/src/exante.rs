//! Costly interviews and ex-ante exclusion.
//!
//! A firm `(A, α)` pays cost `c` to learn a worker's belief, hires when
//! `v_A(s) > 0`, and keeps share `α` of the surplus. It interviews a
//! population exactly when `α ∫max{v_A, 0} dπ > c`; otherwise the population
//! is excluded (ties exclude).
//!
//! For `c > 0` the exclusion pattern follows the spread order, and excluding
//! firms are built from pay-discrimination witnesses by a shift and a
//! rescale. For `c = 0` the relevant order compares supports: `hi` covers
//! `lo` when every support belief of `lo` lies in the convex hull of `hi`'s
//! support beliefs.

use num_traits::{One, Signed, Zero};

use crate::blackwell::{analyze_pair, classify_from, Classification, PairAnalysis, Side};
use crate::error::Error;
use crate::lp::{solve_feasibility, Feasibility, FeasibilitySystem};
use crate::model::{expected_surplus, require_equal_means, Belief, ExAnteFirm, Firm, Population};
use crate::rational::Rational;

/// Interview cost plus the pair under comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ExAnteScenario {
    cost: Rational,
    first: Population,
    second: Population,
}

impl ExAnteScenario {
    pub fn new(cost: Rational, first: Population, second: Population) -> Result<Self, Error> {
        if cost.is_negative() {
            return Err(Error::NegativeCost(cost));
        }
        require_equal_means(&first, &second)?;
        Ok(Self { cost, first, second })
    }

    pub fn cost(&self) -> &Rational {
        &self.cost
    }

    pub fn first(&self) -> &Population {
        &self.first
    }

    pub fn second(&self) -> &Population {
        &self.second
    }
}

/// `α · Σ weight · max{v_A(s), 0}`.
pub fn interview_value(firm: &ExAnteFirm, population: &Population) -> Rational {
    let gross: Rational = population
        .atoms()
        .iter()
        .map(|atom| {
            let v = firm.firm().value(&atom.belief);
            if v.is_positive() { &atom.weight * v } else { Rational::zero() }
        })
        .sum();
    firm.alpha() * gross
}

/// True when the firm does not interview: `interview_value ≤ cost`.
pub fn excludes(firm: &ExAnteFirm, cost: &Rational, population: &Population) -> bool {
    &interview_value(firm, population) <= cost
}

/// Folds `α` into the payoffs: `({α·a}, 1)`.
pub fn normalize_firm(firm: &ExAnteFirm) -> ExAnteFirm {
    ExAnteFirm::new(firm.firm().scaled(firm.alpha()), Rational::one()).expect("alpha of one is valid")
}

/// Builds `(A'', 1)` excluding `pi_prime` but interviewing `pi`, from a base
/// firm that pays `pi_prime` strictly less than `pi`.
///
/// The base is shifted by `β = max(0, -min a·s)` over all tasks and support
/// beliefs of both populations, which makes every value non-negative where
/// it matters, then scaled by `γ = 2c / (I + I')` where `I`, `I'` are the
/// shifted surpluses. Since `I' < I` this puts `γI' ≤ c < γI`.
pub fn construct_excluding_firm(
    base: &Firm,
    pi: &Population,
    pi_prime: &Population,
    cost: &Rational,
) -> Result<ExAnteFirm, Error> {
    if cost.is_negative() {
        return Err(Error::NegativeCost(cost.clone()));
    }
    if cost.is_zero() {
        return Err(Error::ZeroCost);
    }
    require_equal_means(pi, pi_prime)?;
    let (gap_hi, gap_lo) = (expected_surplus(base, pi), expected_surplus(base, pi_prime));
    if gap_lo >= gap_hi {
        return Err(Error::NoStrictGap(format!("surplus {gap_lo} on the excluded side vs {gap_hi}")));
    }

    let lowest = base
        .tasks()
        .iter()
        .flat_map(|task| pi.beliefs().chain(pi_prime.beliefs()).map(move |s| s.dot(task)))
        .min()
        .expect("firm and populations are non-empty");
    let beta = if lowest.is_negative() { -lowest } else { Rational::zero() };
    let shifted = base.shifted(&beta);

    let interviewed = expected_surplus(&shifted, pi);
    let excluded = expected_surplus(&shifted, pi_prime);
    let gamma = Rational::from_integer(2.into()) * cost / (&interviewed + &excluded);
    let firm = ExAnteFirm::new(shifted.scaled(&gamma), Rational::one())?;

    let (on_excluded, on_interviewed) = (interview_value(&firm, pi_prime), interview_value(&firm, pi));
    if !(&on_excluded <= cost && cost < &on_interviewed) {
        return Err(Error::Internal(format!(
            "excluding firm fails: {on_excluded} ≤ {cost} < {on_interviewed} does not hold"
        )));
    }
    Ok(firm)
}

/// Ex-ante classification for a positive interview cost.
pub fn classify_ex_ante(scenario: &ExAnteScenario) -> Result<Classification<ExAnteFirm>, Error> {
    if scenario.cost.is_zero() {
        return Err(Error::ZeroCost);
    }
    let analysis = analyze_pair(&scenario.first, &scenario.second)?;
    classify_ex_ante_from(scenario, &analysis)
}

/// Ex-ante classification reusing precomputed dominance verdicts.
pub fn classify_ex_ante_from(
    scenario: &ExAnteScenario,
    analysis: &PairAnalysis,
) -> Result<Classification<ExAnteFirm>, Error> {
    if scenario.cost.is_zero() {
        return Err(Error::ZeroCost);
    }
    let (first, second, cost) = (&scenario.first, &scenario.second, &scenario.cost);
    classify_from(first, second, analysis)?.try_map(|against, base| match against {
        Side::First => construct_excluding_firm(&base, second, first, cost),
        Side::Second => construct_excluding_firm(&base, first, second, cost),
    })
}

/// Result of a convex-hull membership query.
#[derive(Debug, Clone, PartialEq)]
pub enum HullMembership {
    /// Convex weights over the hull points reproducing the query point.
    Inside(Vec<Rational>),
    /// Payoff vector `a` with `a·p ≤ 0` on every hull point and `a·s > 0`
    /// at the query point.
    Outside(Vec<Rational>),
}

/// Decides whether `point` lies in the convex hull of `hull`.
pub fn hull_membership(point: &Belief, hull: &[Belief]) -> Result<HullMembership, Error> {
    let dim = point.dim();
    if let Some(bad) = hull.iter().find(|b| b.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
    }
    // Σ_j μ_j p_j = s with μ ≥ 0; Σ μ = 1 follows from the coordinates summing to one.
    let matrix = (0..dim)
        .map(|theta| hull.iter().map(|p| p.probs()[theta].clone()).collect())
        .collect();
    let system = FeasibilitySystem::new(matrix, point.probs().to_vec(), hull.len())?;
    Ok(match solve_feasibility(&system)? {
        Feasibility::Feasible(mu) => HullMembership::Inside(mu),
        Feasibility::Infeasible(cert) => {
            HullMembership::Outside(cert.multipliers().iter().map(|y| -y).collect())
        }
    })
}

/// Outcome of the zero-cost order check.
#[derive(Debug, Clone, PartialEq)]
pub enum NDominance {
    Dominates,
    /// `point` is a support belief of `lo` outside the hull of `hi`'s
    /// support; `firm` interviews `lo` but excludes `hi` at zero cost.
    NotDominates { point: Belief, firm: Firm },
}

/// Zero-cost order with a witness when it fails.
pub fn n_dominance(hi: &Population, lo: &Population) -> Result<NDominance, Error> {
    require_equal_means(hi, lo)?;
    let hull: Vec<Belief> = hi.beliefs().cloned().collect();
    for point in lo.beliefs() {
        if let HullMembership::Outside(task) = hull_membership(point, &hull)? {
            let firm = Firm::new(vec![task])?;
            let normalized = ExAnteFirm::new(firm.clone(), Rational::one())?;
            let zero = Rational::zero();
            if !(excludes(&normalized, &zero, hi) && !excludes(&normalized, &zero, lo)) {
                return Err(Error::Internal("separating firm does not exclude at zero cost".into()));
            }
            return Ok(NDominance::NotDominates { point: point.clone(), firm });
        }
    }
    Ok(NDominance::Dominates)
}

/// Every support belief of `lo` lies in the convex hull of `hi`'s support.
pub fn n_dominates(hi: &Population, lo: &Population) -> Result<bool, Error> {
    Ok(matches!(n_dominance(hi, lo)?, NDominance::Dominates))
}

/// Ex-ante classification at zero interview cost, using the support order.
///
/// Distinct populations whose supports lie in each other's hulls come back
/// as [`Classification::NoDiscrimination`]; see [`n_equivalent`].
pub fn classify_ex_ante_zero_cost(first: &Population, second: &Population) -> Result<Classification<ExAnteFirm>, Error> {
    require_equal_means(first, second)?;
    let witness = |firm: Firm| ExAnteFirm::new(firm, Rational::one());
    // A failure of "first covers second" yields a firm excluding `first`.
    let second_over_first = n_dominance(second, first)?;
    let first_over_second = n_dominance(first, second)?;
    Ok(match (second_over_first, first_over_second) {
        (NDominance::Dominates, NDominance::Dominates) => Classification::NoDiscrimination,
        (NDominance::Dominates, NDominance::NotDominates { firm, .. }) => {
            Classification::SystematicAgainst { against: Side::First, witness: witness(firm)? }
        }
        (NDominance::NotDominates { firm, .. }, NDominance::Dominates) => {
            Classification::SystematicAgainst { against: Side::Second, witness: witness(firm)? }
        }
        (NDominance::NotDominates { firm: f21, .. }, NDominance::NotDominates { firm: f12, .. }) => {
            Classification::Unsystematic { against_first: witness(f12)?, against_second: witness(f21)? }
        }
    })
}

/// Distinct populations that are equivalent under the zero-cost order.
pub fn n_equivalent(first: &Population, second: &Population) -> Result<bool, Error> {
    Ok(first != second && n_dominates(first, second)? && n_dominates(second, first)?)
}
