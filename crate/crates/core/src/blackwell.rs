//! Blackwell (mean-preserving spread) dominance and the classification of
//! discrimination between equal-mean populations.
//!
//! `hi` dominates `lo` when some barycenter-preserving kernel carries `lo`'s
//! atoms onto `hi`'s. The kernel is found by an exact feasibility program
//! with one variable `w[i][j]` per pair (lo atom `i`, hi atom `j`):
//!
//! - column rows: `Σ_i w[i][j] = hi_j` for every hi atom `j`;
//! - barycenter rows: `Σ_j w[i][j] · s'_j(θ) = lo_i · s_i(θ)` for every lo
//!   atom `i` and skill `θ`.
//!
//! Row sums `Σ_j w[i][j] = lo_i` follow by summing the barycenter rows over
//! `θ`, since beliefs sum to one. When the program is infeasible its
//! certificate splits into multipliers `v_j` on the column rows and vectors
//! `λ_i` on the barycenter rows; the firm `{-λ_i}` then pays `lo` strictly
//! more than `hi`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::lp::{solve_feasibility, FarkasCertificate, Feasibility, FeasibilitySystem};
use crate::model::{expected_surplus, require_equal_means, Firm, Population};
use crate::rational::Rational;

/// Barycenter-preserving kernel from `source` (the less spread population)
/// to `target`. `weights[i][j]` is the joint mass on source atom `i` and
/// target atom `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    source: Population,
    target: Population,
    weights: Vec<Vec<Rational>>,
}

impl Coupling {
    /// Builds a coupling after checking all of its invariants.
    pub fn new(source: Population, target: Population, weights: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let coupling = Self { source, target, weights };
        coupling.verify()?;
        Ok(coupling)
    }

    pub fn identity(population: &Population) -> Self {
        let n = population.len();
        let weights = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { population.atoms()[i].weight.clone() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { source: population.clone(), target: population.clone(), weights }
    }

    pub fn source(&self) -> &Population {
        &self.source
    }

    pub fn target(&self) -> &Population {
        &self.target
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    /// Re-checks non-negativity, row sums, column sums and barycenters exactly.
    pub fn verify(&self) -> Result<(), Error> {
        let (src, tgt) = (self.source.atoms(), self.target.atoms());
        if self.weights.len() != src.len() || self.weights.iter().any(|r| r.len() != tgt.len()) {
            return Err(Error::Internal("coupling matrix has the wrong shape".into()));
        }
        if src.is_empty() || tgt.is_empty() || self.source.dim() != self.target.dim() {
            return Err(Error::Internal("coupling populations have mismatched dimension".into()));
        }
        if self.weights.iter().flatten().any(|w| w < &Rational::zero()) {
            return Err(Error::Internal("coupling has a negative entry".into()));
        }
        for (i, row) in self.weights.iter().enumerate() {
            let sum: Rational = row.iter().sum();
            if sum != src[i].weight {
                return Err(Error::Internal(format!("coupling row {i} sums to {sum}, expected {}", src[i].weight)));
            }
            for theta in 0..self.source.dim() {
                let bary: Rational = row
                    .iter()
                    .zip(tgt)
                    .map(|(w, atom)| w * &atom.belief.probs()[theta])
                    .sum();
                if bary != &src[i].weight * &src[i].belief.probs()[theta] {
                    return Err(Error::Internal(format!("coupling row {i} moves the barycenter")));
                }
            }
        }
        for (j, atom) in tgt.iter().enumerate() {
            let sum: Rational = self.weights.iter().map(|row| &row[j]).sum();
            if sum != atom.weight {
                return Err(Error::Internal(format!("coupling column {j} sums to {sum}, expected {}", atom.weight)));
            }
        }
        Ok(())
    }

    /// Chains `self: π → π'` with `next: π' → π''` into a kernel `π → π''`.
    pub fn compose(&self, next: &Coupling) -> Result<Coupling, Error> {
        if self.target != next.source {
            return Err(Error::Internal("couplings do not chain".into()));
        }
        let middle = self.target.atoms();
        let weights = self
            .weights
            .iter()
            .map(|row| {
                (0..next.target.len())
                    .map(|k| {
                        row.iter()
                            .zip(middle)
                            .zip(&next.weights)
                            .filter(|((w, _), _)| !w.is_zero())
                            .map(|((w, atom), next_row)| w * &next_row[k] / &atom.weight)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Coupling::new(self.source.clone(), next.target.clone(), weights)
    }
}

/// Outcome of a dominance check.
#[derive(Debug, Clone, PartialEq)]
pub enum Dominance {
    Dominates(Coupling),
    NotDominates(FarkasCertificate),
}

impl Dominance {
    pub fn holds(&self) -> bool {
        matches!(self, Dominance::Dominates(_))
    }
}

/// The coupling program for "`hi` is a mean-preserving spread of `lo`".
/// Variable `i * |hi| + j` is `w[i][j]`.
pub fn dominance_system(hi: &Population, lo: &Population) -> Result<FeasibilitySystem, Error> {
    if hi.dim() != lo.dim() {
        return Err(Error::DimensionMismatch { expected: lo.dim(), found: hi.dim() });
    }
    let (n_hi, n_lo, dim) = (hi.len(), lo.len(), lo.dim());
    let columns = n_hi * n_lo;
    let mut matrix = Vec::with_capacity(n_hi + n_lo * dim);
    let mut rhs = Vec::with_capacity(n_hi + n_lo * dim);
    for (j, atom) in hi.atoms().iter().enumerate() {
        let mut row = vec![Rational::zero(); columns];
        for i in 0..n_lo {
            row[i * n_hi + j] = Rational::one();
        }
        matrix.push(row);
        rhs.push(atom.weight.clone());
    }
    for (i, atom) in lo.atoms().iter().enumerate() {
        for theta in 0..dim {
            let mut row = vec![Rational::zero(); columns];
            for (j, target) in hi.atoms().iter().enumerate() {
                row[i * n_hi + j] = target.belief.probs()[theta].clone();
            }
            matrix.push(row);
            rhs.push(&atom.weight * &atom.belief.probs()[theta]);
        }
    }
    FeasibilitySystem::new(matrix, rhs, columns)
}

/// Decides whether `hi` is a mean-preserving spread of `lo`.
pub fn mps_dominates(hi: &Population, lo: &Population) -> Result<Dominance, Error> {
    require_equal_means(hi, lo)?;
    let system = dominance_system(hi, lo)?;
    match solve_feasibility(&system)? {
        Feasibility::Feasible(point) => {
            let n_hi = hi.len();
            let weights = point.chunks(n_hi).map(<[Rational]>::to_vec).collect();
            let coupling = Coupling::new(lo.clone(), hi.clone(), weights)?;
            Ok(Dominance::Dominates(coupling))
        }
        Feasibility::Infeasible(cert) => Ok(Dominance::NotDominates(cert)),
    }
}

/// Turns a certificate from a failed `mps_dominates(hi, lo)` into a firm
/// with `∫v_A d(hi) < ∫v_A d(lo)`.
pub fn extract_discriminating_firm(
    certificate: &FarkasCertificate,
    lo: &Population,
    hi: &Population,
) -> Result<Firm, Error> {
    let system = dominance_system(hi, lo)?;
    let y = certificate.multipliers();
    if y.len() != system.rows() {
        return Err(Error::InvalidCertificate(format!(
            "{} multipliers for a {}-row dominance program",
            y.len(),
            system.rows()
        )));
    }
    if !system.certifies(y) {
        return Err(Error::InvalidCertificate("does not certify infeasibility of the coupling program".into()));
    }
    let dim = lo.dim();
    let tasks = y[hi.len()..].chunks(dim).map(|lambda| lambda.iter().map(|x| -x).collect()).collect();
    let firm = Firm::new(tasks)?;
    let (on_hi, on_lo) = (expected_surplus(&firm, hi), expected_surplus(&firm, lo));
    if on_hi >= on_lo {
        return Err(Error::Internal(format!(
            "extracted firm does not separate: surplus {on_hi} on hi vs {on_lo} on lo"
        )));
    }
    Ok(firm)
}

/// `∫v_A d(against) < ∫v_A d(other)`.
pub fn discriminates_strictly(firm: &Firm, against: &Population, other: &Population) -> Result<bool, Error> {
    require_equal_means(against, other)?;
    Ok(expected_surplus(firm, against) < expected_surplus(firm, other))
}

/// Which of the two compared populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// Classification tag without witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    SystematicAgainstFirst,
    SystematicAgainstSecond,
    Unsystematic,
    NoDiscrimination,
}

impl Tag {
    /// The tag seen from the other argument order.
    pub fn swapped(self) -> Tag {
        match self {
            Tag::SystematicAgainstFirst => Tag::SystematicAgainstSecond,
            Tag::SystematicAgainstSecond => Tag::SystematicAgainstFirst,
            other => other,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::SystematicAgainstFirst => "systematic_against_first",
            Tag::SystematicAgainstSecond => "systematic_against_second",
            Tag::Unsystematic => "unsystematic",
            Tag::NoDiscrimination => "no_discrimination",
        })
    }
}

/// Verdict with witnesses. `W` is a [`Firm`] for pay discrimination and an
/// [`ExAnteFirm`](crate::model::ExAnteFirm) for interview exclusion.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification<W> {
    /// Every firm weakly disfavours `against`; `witness` does so strictly.
    SystematicAgainst { against: Side, witness: W },
    Unsystematic { against_first: W, against_second: W },
    NoDiscrimination,
}

impl<W> Classification<W> {
    pub fn tag(&self) -> Tag {
        match self {
            Classification::SystematicAgainst { against: Side::First, .. } => Tag::SystematicAgainstFirst,
            Classification::SystematicAgainst { against: Side::Second, .. } => Tag::SystematicAgainstSecond,
            Classification::Unsystematic { .. } => Tag::Unsystematic,
            Classification::NoDiscrimination => Tag::NoDiscrimination,
        }
    }

    /// Witnesses paired with the side each one disfavours.
    pub fn witnesses(&self) -> Vec<(Side, &W)> {
        match self {
            Classification::SystematicAgainst { against, witness } => vec![(*against, witness)],
            Classification::Unsystematic { against_first, against_second } => {
                vec![(Side::First, against_first), (Side::Second, against_second)]
            }
            Classification::NoDiscrimination => vec![],
        }
    }

    pub(crate) fn try_map<V>(self, mut f: impl FnMut(Side, W) -> Result<V, Error>) -> Result<Classification<V>, Error> {
        Ok(match self {
            Classification::SystematicAgainst { against, witness } => {
                Classification::SystematicAgainst { against, witness: f(against, witness)? }
            }
            Classification::Unsystematic { against_first, against_second } => Classification::Unsystematic {
                against_first: f(Side::First, against_first)?,
                against_second: f(Side::Second, against_second)?,
            },
            Classification::NoDiscrimination => Classification::NoDiscrimination,
        })
    }
}

/// Both directional dominance verdicts for a pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAnalysis {
    /// `second` is a spread of `first`.
    pub second_over_first: Dominance,
    /// `first` is a spread of `second`.
    pub first_over_second: Dominance,
}

pub fn analyze_pair(first: &Population, second: &Population) -> Result<PairAnalysis, Error> {
    require_equal_means(first, second)?;
    Ok(PairAnalysis {
        second_over_first: mps_dominates(second, first)?,
        first_over_second: mps_dominates(first, second)?,
    })
}

/// Classifies pay discrimination between two equal-mean populations.
pub fn classify(first: &Population, second: &Population) -> Result<Classification<Firm>, Error> {
    let analysis = analyze_pair(first, second)?;
    classify_from(first, second, &analysis)
}

/// Classification from precomputed dominance verdicts.
pub fn classify_from(
    first: &Population,
    second: &Population,
    analysis: &PairAnalysis,
) -> Result<Classification<Firm>, Error> {
    if first == second {
        return Ok(Classification::NoDiscrimination);
    }
    // A failed "first over second" check yields a firm against `first`.
    let against_first = |cert| extract_discriminating_firm(cert, second, first);
    let against_second = |cert| extract_discriminating_firm(cert, first, second);
    match (&analysis.second_over_first, &analysis.first_over_second) {
        (Dominance::Dominates(_), Dominance::Dominates(_)) => Err(Error::Internal(
            "distinct populations dominate each other; the spread order must be anti-symmetric".into(),
        )),
        (Dominance::Dominates(_), Dominance::NotDominates(cert)) => {
            Ok(Classification::SystematicAgainst { against: Side::First, witness: against_first(cert)? })
        }
        (Dominance::NotDominates(cert), Dominance::Dominates(_)) => {
            Ok(Classification::SystematicAgainst { against: Side::Second, witness: against_second(cert)? })
        }
        (Dominance::NotDominates(c21), Dominance::NotDominates(c12)) => Ok(Classification::Unsystematic {
            against_first: against_first(c12)?,
            against_second: against_second(c21)?,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{skill_distribution, Belief};
    use crate::rational::{int, q};

    fn pop(atoms: &[((i64, i64), (i64, i64))]) -> Population {
        Population::from_raw(
            atoms
                .iter()
                .map(|&((n, d), (wn, wd))| (vec![q(n, d), q(1, 1) - q(n, d)], q(wn, wd)))
                .collect(),
        )
        .unwrap()
    }

    fn uniform() -> Population {
        Population::point_mass(Belief::new(vec![q(1, 2), q(1, 2)]).unwrap())
    }

    fn full_info() -> Population {
        pop(&[((1, 1), (1, 2)), ((0, 1), (1, 2))])
    }

    fn outer() -> Population {
        pop(&[((1, 10), (1, 2)), ((9, 10), (1, 2))])
    }

    fn three_point() -> Population {
        pop(&[((1, 1), (1, 4)), ((1, 2), (1, 2)), ((0, 1), (1, 4))])
    }

    #[test]
    fn full_information_dominates_none() {
        let Dominance::Dominates(c) = mps_dominates(&full_info(), &uniform()).unwrap() else {
            panic!("expected dominance");
        };
        assert_eq!(c.weights(), &[vec![q(1, 2), q(1, 2)]]);
    }

    #[test]
    fn reflexive_identity() {
        let p = three_point();
        let Dominance::Dominates(c) = mps_dominates(&p, &p).unwrap() else {
            panic!("expected dominance");
        };
        assert_eq!(c, Coupling::identity(&p));
    }

    #[test]
    fn inner_split_coupling() {
        let hi = pop(&[((3, 4), (1, 2)), ((1, 4), (1, 2))]);
        let lo = pop(&[((2, 3), (1, 2)), ((1, 3), (1, 2))]);
        // Hand check: 5/6·(3/4,1/4) + 1/6·(1/4,3/4) = (2/3,1/3).
        let lifted: Vec<Rational> = (0..2)
            .map(|t| {
                q(5, 6) * [q(3, 4), q(1, 4)][t].clone() + q(1, 6) * [q(1, 4), q(3, 4)][t].clone()
            })
            .collect();
        assert_eq!(lifted, vec![q(2, 3), q(1, 3)]);
        let Dominance::Dominates(c) = mps_dominates(&hi, &lo).unwrap() else {
            panic!("expected dominance");
        };
        c.verify().unwrap();
        // Canonical order puts (1/3,2/3) first; the (2/3,1/3) atom is row 1
        // and hi's (3/4,1/4) atom is column 1.
        assert_eq!(c.weights()[1], vec![q(1, 12), q(5, 12)]);
    }

    #[test]
    fn outer_does_not_dominate_three_point() {
        // Oracle: h(s) = (s1 - 9/10)^+ is convex with ∫h d(lo) = 1/4 · 1/10 = 1/40
        // and ∫h d(hi) = 0, so hi cannot be a spread of lo.
        let h = |b: &Belief| {
            let x = &b.probs()[0] - q(9, 10);
            if x > int(0) { x } else { int(0) }
        };
        let integral = |p: &Population| -> Rational { p.atoms().iter().map(|a| &a.weight * h(&a.belief)).sum() };
        assert_eq!(integral(&three_point()), q(1, 40));
        assert_eq!(integral(&outer()), int(0));

        let Dominance::NotDominates(cert) = mps_dominates(&outer(), &three_point()).unwrap() else {
            panic!("expected non-dominance");
        };
        let firm = extract_discriminating_firm(&cert, &three_point(), &outer()).unwrap();
        assert!(expected_surplus(&firm, &three_point()) > expected_surplus(&firm, &outer()));
        assert!(firm.tasks().len() <= three_point().len());
        assert!(discriminates_strictly(&firm, &outer(), &three_point()).unwrap());
    }

    #[test]
    fn reversed_direction_witness() {
        let Dominance::NotDominates(cert) = mps_dominates(&uniform(), &full_info()).unwrap() else {
            panic!("expected non-dominance");
        };
        let firm = extract_discriminating_firm(&cert, &full_info(), &uniform()).unwrap();
        assert!(expected_surplus(&firm, &full_info()) > expected_surplus(&firm, &uniform()));
    }

    #[test]
    fn zero_barycenter_multipliers_rejected() {
        let (hi, lo) = (outer(), three_point());
        let rows = dominance_system(&hi, &lo).unwrap().rows();
        let mut y = vec![int(0); rows];
        y[0] = int(-1);
        let err = extract_discriminating_firm(&FarkasCertificate::new_unchecked(y), &lo, &hi).unwrap_err();
        assert!(matches!(err, Error::InvalidCertificate(_)));
        let err = extract_discriminating_firm(&FarkasCertificate::new_unchecked(vec![int(0); 3]), &lo, &hi)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidCertificate(_)));
    }

    #[test]
    fn unequal_means_rejected() {
        let left = Population::point_mass(Belief::vertex(2, 0));
        let right = Population::point_mass(Belief::vertex(2, 1));
        assert!(matches!(mps_dominates(&left, &right), Err(Error::UnequalMeans { .. })));
        assert!(matches!(classify(&left, &right), Err(Error::UnequalMeans { .. })));
        let f = Firm::new(vec![vec![int(1), int(0)]]).unwrap();
        assert!(matches!(discriminates_strictly(&f, &left, &right), Err(Error::UnequalMeans { .. })));
    }

    #[test]
    fn discriminates_strictly_examples() {
        let f = Firm::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert!(discriminates_strictly(&f, &uniform(), &full_info()).unwrap());
        let single = Firm::new(vec![vec![int(3), int(-2)]]).unwrap();
        assert!(!discriminates_strictly(&single, &uniform(), &full_info()).unwrap());
        assert!(!discriminates_strictly(&single, &full_info(), &uniform()).unwrap());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&uniform(), &full_info()).unwrap();
        assert_eq!(c.tag(), Tag::SystematicAgainstFirst);
        let (side, w) = c.witnesses()[0];
        assert_eq!(side, Side::First);
        assert!(discriminates_strictly(w, &uniform(), &full_info()).unwrap());

        assert_eq!(classify(&three_point(), &three_point()).unwrap(), Classification::NoDiscrimination);

        // Mirror oracle: h(s) = |s1 - 1/2| gives 2/5 on `outer` and 1/4 on `three_point`.
        let h = |b: &Belief| {
            let x = &b.probs()[0] - q(1, 2);
            if x < int(0) { -x } else { x }
        };
        let integral = |p: &Population| -> Rational { p.atoms().iter().map(|a| &a.weight * h(&a.belief)).sum() };
        assert_eq!(integral(&outer()), q(2, 5));
        assert_eq!(integral(&three_point()), q(1, 4));

        let c = classify(&outer(), &three_point()).unwrap();
        assert_eq!(c.tag(), Tag::Unsystematic);
        let Classification::Unsystematic { against_first, against_second } = c else { unreachable!() };
        assert!(discriminates_strictly(&against_first, &outer(), &three_point()).unwrap());
        assert!(discriminates_strictly(&against_second, &three_point(), &outer()).unwrap());
    }

    #[test]
    fn classification_symmetric() {
        let pairs = [(uniform(), full_info()), (outer(), three_point()), (full_info(), three_point())];
        for (a, b) in pairs {
            assert_eq!(classify(&a, &b).unwrap().tag(), classify(&b, &a).unwrap().tag().swapped());
        }
    }

    #[test]
    fn row_sums_implied() {
        let Dominance::Dominates(c) = mps_dominates(&full_info(), &three_point()).unwrap() else {
            panic!("expected dominance");
        };
        for (row, atom) in c.weights().iter().zip(c.source().atoms()) {
            assert_eq!(row.iter().sum::<Rational>(), atom.weight);
        }
        assert_eq!(skill_distribution(c.source()), skill_distribution(c.target()));
    }

    #[test]
    fn composition_is_transitive() {
        let mid = pop(&[((3, 4), (1, 2)), ((1, 4), (1, 2))]);
        let Dominance::Dominates(c1) = mps_dominates(&mid, &uniform()).unwrap() else { panic!() };
        let Dominance::Dominates(c2) = mps_dominates(&full_info(), &mid).unwrap() else { panic!() };
        let composed = c1.compose(&c2).unwrap();
        assert_eq!(composed.source(), &uniform());
        assert_eq!(composed.target(), &full_info());
    }

    #[test]
    fn corrupted_coupling_fails_verification() {
        let c = Coupling::identity(&full_info());
        let mut weights = c.weights().to_vec();
        weights[0].swap(0, 1);
        assert!(Coupling::new(full_info(), full_info(), weights).is_err());
    }
}
