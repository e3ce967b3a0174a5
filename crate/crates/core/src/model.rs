//! Skills, beliefs, populations and firms.
//!
//! Every value here is immutable once built and validated on construction:
//! beliefs are exact probability vectors, populations are canonical
//! (distinct beliefs, sorted, weights summing to one) and firms hold a
//! deduplicated, sorted task list.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{format_rational, format_vector, Rational};

/// Ordered, non-empty list of distinct skill-type labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkillSet {
    labels: Vec<String>,
}

impl SkillSet {
    pub fn new(labels: Vec<String>) -> Result<Self, Error> {
        if labels.is_empty() {
            return Err(Error::EmptySkillSet);
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateSkillLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Posterior belief over the skill types: non-negative, sums to exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Belief {
    probs: Vec<Rational>,
}

/// A population's mean belief, i.e. the fraction of workers of each type.
pub type SkillDistribution = Belief;

impl Belief {
    pub fn new(probs: Vec<Rational>) -> Result<Self, Error> {
        if probs.is_empty() {
            return Err(Error::InvalidBelief("no entries".into()));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidBelief(format!("negative entry {p}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidBelief(format!(
                "entries of {} sum to {total}",
                format_vector(&probs)
            )));
        }
        Ok(Self { probs })
    }

    /// Point belief on skill type `index`.
    pub fn vertex(dim: usize, index: usize) -> Self {
        let probs = (0..dim)
            .map(|k| if k == index { Rational::one() } else { Rational::zero() })
            .collect();
        Self { probs }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    /// Inner product with a payoff vector of the same dimension.
    pub fn dot(&self, payoff: &[Rational]) -> Rational {
        assert_eq!(payoff.len(), self.probs.len(), "payoff/belief dimension mismatch");
        crate::rational::dot(&self.probs, payoff)
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vector(&self.probs))
    }
}

/// One support point of a population.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub belief: Belief,
    pub weight: Rational,
}

/// Finite-support distribution over beliefs, always held in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Population {
    atoms: Vec<Atom>,
}

impl Population {
    /// Validates and canonicalizes: duplicate beliefs merge, atoms sort
    /// lexicographically by belief.
    pub fn new(atoms: Vec<(Belief, Rational)>) -> Result<Self, Error> {
        canonicalize(atoms)
    }

    /// Like [`Population::new`] but validates raw belief vectors too.
    pub fn from_raw(atoms: Vec<(Vec<Rational>, Rational)>) -> Result<Self, Error> {
        let atoms = atoms
            .into_iter()
            .map(|(probs, w)| Belief::new(probs).map(|b| (b, w)))
            .collect::<Result<Vec<_>, _>>()?;
        canonicalize(atoms)
    }

    pub fn point_mass(belief: Belief) -> Self {
        Self { atoms: vec![Atom { belief, weight: Rational::one() }] }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].belief.dim()
    }

    pub fn beliefs(&self) -> impl Iterator<Item = &Belief> {
        self.atoms.iter().map(|a| &a.belief)
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.atoms.iter().map(|a| &a.weight)
    }

    /// Mixture `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Population, lambda: &Rational) -> Result<Population, Error> {
        if lambda.is_negative() || lambda > &Rational::one() {
            return Err(Error::InvalidBelief(format!("mixture weight {lambda} outside [0, 1]")));
        }
        let rest = Rational::one() - lambda;
        let atoms = self
            .atoms
            .iter()
            .map(|a| (a.belief.clone(), &a.weight * lambda))
            .chain(other.atoms.iter().map(|a| (a.belief.clone(), &a.weight * &rest)))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        canonicalize(atoms)
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, atom) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", atom.belief, format_rational(&atom.weight))?;
        }
        f.write_str("}")
    }
}

/// Builds the canonical population from raw atoms.
pub fn canonicalize(atoms: Vec<(Belief, Rational)>) -> Result<Population, Error> {
    let Some((first, _)) = atoms.first() else {
        return Err(Error::EmptyPopulation);
    };
    let dim = first.dim();
    let mut merged: BTreeMap<Belief, Rational> = BTreeMap::new();
    let mut total = Rational::zero();
    for (belief, weight) in atoms {
        if belief.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: belief.dim() });
        }
        if !weight.is_positive() {
            return Err(Error::NonPositiveWeight(weight));
        }
        total += &weight;
        *merged.entry(belief).or_insert_with(Rational::zero) += weight;
    }
    if !total.is_one() {
        return Err(Error::WeightSum(total));
    }
    let atoms = merged.into_iter().map(|(belief, weight)| Atom { belief, weight }).collect();
    Ok(Population { atoms })
}

/// Mean belief `p(θ) = Σ weight · belief(θ)`.
pub fn skill_distribution(population: &Population) -> SkillDistribution {
    let mut mean = vec![Rational::zero(); population.dim()];
    for atom in population.atoms() {
        for (m, p) in mean.iter_mut().zip(atom.belief.probs()) {
            *m += &atom.weight * p;
        }
    }
    Belief { probs: mean }
}

pub fn same_skill_distribution(first: &Population, second: &Population) -> bool {
    first.dim() == second.dim() && skill_distribution(first) == skill_distribution(second)
}

/// Errors with [`Error::UnequalMeans`] unless both populations share a mean.
pub fn require_equal_means(first: &Population, second: &Population) -> Result<(), Error> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch { expected: first.dim(), found: second.dim() });
    }
    let (a, b) = (skill_distribution(first), skill_distribution(second));
    if a == b {
        Ok(())
    } else {
        Err(Error::UnequalMeans { first: a, second: b })
    }
}

/// Non-empty set of task payoff vectors; a task pays `a(θ)` on skill `θ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Firm {
    tasks: Vec<Vec<Rational>>,
}

impl Firm {
    pub fn new(tasks: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let Some(first) = tasks.first() else {
            return Err(Error::EmptyFirm);
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(bad) = tasks.iter().find(|t| t.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let mut tasks = tasks;
        tasks.sort();
        tasks.dedup();
        Ok(Self { tasks })
    }

    pub fn tasks(&self) -> &[Vec<Rational>] {
        &self.tasks
    }

    pub fn dim(&self) -> usize {
        self.tasks[0].len()
    }

    /// `v_A(s) = max_a a · s`.
    pub fn value(&self, belief: &Belief) -> Rational {
        self.tasks
            .iter()
            .map(|task| belief.dot(task))
            .max()
            .expect("firm has at least one task")
    }

    /// Adds `shift` to every payoff entry of every task.
    pub fn shifted(&self, shift: &Rational) -> Firm {
        let tasks = self
            .tasks
            .iter()
            .map(|t| t.iter().map(|x| x + shift).collect())
            .collect();
        Firm::new(tasks).expect("shift preserves validity")
    }

    /// Multiplies every payoff by `factor`; a zero factor collapses to one task.
    pub fn scaled(&self, factor: &Rational) -> Firm {
        let tasks = self
            .tasks
            .iter()
            .map(|t| t.iter().map(|x| x * factor).collect())
            .collect();
        Firm::new(tasks).expect("scaling preserves validity")
    }
}

impl fmt::Display for Firm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tasks: Vec<String> = self.tasks.iter().map(|t| format_vector(t)).collect();
        write!(f, "{{{}}}", tasks.join(", "))
    }
}

/// Firm in the costly-interview model: keeps share `alpha` of surplus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExAnteFirm {
    firm: Firm,
    alpha: Rational,
}

impl ExAnteFirm {
    pub fn new(firm: Firm, alpha: Rational) -> Result<Self, Error> {
        if !alpha.is_positive() || alpha > Rational::one() {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { firm, alpha })
    }

    pub fn firm(&self) -> &Firm {
        &self.firm
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }
}

pub fn firm_value(firm: &Firm, belief: &Belief) -> Rational {
    firm.value(belief)
}

/// `∫ v_A dπ` over the population's atoms.
pub fn expected_surplus(firm: &Firm, population: &Population) -> Rational {
    let values: Vec<Rational> = population.atoms().iter().map(|atom| firm.value(&atom.belief)).collect();
    crate::rational::dot(population.weights(), &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn b(v: &[(i64, i64)]) -> Belief {
        Belief::new(v.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    fn pop(atoms: &[(&[(i64, i64)], (i64, i64))]) -> Population {
        Population::new(atoms.iter().map(|(v, (n, d))| (b(v), q(*n, *d))).collect()).unwrap()
    }

    fn firm(tasks: &[&[i64]]) -> Firm {
        Firm::new(tasks.iter().map(|t| t.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn half() -> Population {
        Population::point_mass(b(&[(1, 2), (1, 2)]))
    }

    fn split() -> Population {
        pop(&[(&[(1, 1), (0, 1)], (1, 2)), (&[(0, 1), (1, 1)], (1, 2))])
    }

    #[test]
    fn skill_set_validation() {
        assert_eq!(SkillSet::new(vec![]), Err(Error::EmptySkillSet));
        assert!(matches!(
            SkillSet::new(vec!["lo".into(), "lo".into()]),
            Err(Error::DuplicateSkillLabel(_))
        ));
        assert_eq!(SkillSet::new(vec!["lo".into(), "hi".into()]).unwrap().len(), 2);
    }

    #[test]
    fn belief_validation() {
        assert!(Belief::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(Belief::new(vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(Belief::new(vec![]).is_err());
    }

    #[test]
    fn canonicalize_merges_duplicates() {
        let p = pop(&[(&[(1, 2), (1, 2)], (1, 3)), (&[(1, 2), (1, 2)], (2, 3))]);
        assert_eq!(p, half());
    }

    #[test]
    fn canonicalize_keeps_sorted_input() {
        let p = split();
        let beliefs: Vec<_> = p.beliefs().cloned().collect();
        assert_eq!(beliefs, vec![b(&[(0, 1), (1, 1)]), b(&[(1, 1), (0, 1)])]);
    }

    #[test]
    fn canonicalize_merges_and_sorts() {
        let p = pop(&[
            (&[(1, 1), (0, 1)], (1, 4)),
            (&[(0, 1), (1, 1)], (1, 4)),
            (&[(1, 1), (0, 1)], (1, 2)),
        ]);
        let atoms: Vec<_> = p.atoms().iter().map(|a| (a.belief.clone(), a.weight.clone())).collect();
        assert_eq!(atoms, vec![(b(&[(0, 1), (1, 1)]), q(1, 4)), (b(&[(1, 1), (0, 1)]), q(3, 4))]);
    }

    #[test]
    fn canonicalize_rejections() {
        assert_eq!(canonicalize(vec![]), Err(Error::EmptyPopulation));
        assert!(matches!(
            Population::new(vec![(b(&[(1, 2), (1, 2)]), q(1, 2))]),
            Err(Error::WeightSum(_))
        ));
        assert!(matches!(
            Population::from_raw(vec![(vec![q(1, 2), q(1, 3)], q(1, 1))]),
            Err(Error::InvalidBelief(_))
        ));
        assert!(matches!(
            Population::new(vec![(b(&[(1, 2), (1, 2)]), q(3, 2)), (b(&[(1, 1), (0, 1)]), q(-1, 2))]),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(matches!(
            Population::new(vec![(b(&[(1, 1)]), q(1, 2)), (b(&[(1, 1), (0, 1)]), q(1, 2))]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn canonicalize_idempotent() {
        let p = split();
        let again = canonicalize(p.atoms().iter().map(|a| (a.belief.clone(), a.weight.clone())).collect()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn skill_distribution_examples() {
        assert_eq!(skill_distribution(&half()), b(&[(1, 2), (1, 2)]));
        assert_eq!(skill_distribution(&split()), b(&[(1, 2), (1, 2)]));
        let inner = pop(&[(&[(3, 4), (1, 4)], (1, 2)), (&[(1, 4), (3, 4)], (1, 2))]);
        assert_eq!(skill_distribution(&inner), b(&[(1, 2), (1, 2)]));
    }

    #[test]
    fn firm_value_examples() {
        let match_state = firm(&[&[1, 0], &[0, 1]]);
        assert_eq!(firm_value(&match_state, &b(&[(1, 2), (1, 2)])), q(1, 2));
        assert_eq!(firm_value(&firm(&[&[1, -1]]), &b(&[(1, 2), (1, 2)])), q(0, 1));
        assert_eq!(firm_value(&match_state, &b(&[(3, 4), (1, 4)])), q(3, 4));
    }

    #[test]
    fn expected_surplus_examples() {
        let match_state = firm(&[&[1, 0], &[0, 1]]);
        assert_eq!(expected_surplus(&match_state, &half()), q(1, 2));
        assert_eq!(expected_surplus(&match_state, &split()), q(1, 1));
        let inner = pop(&[(&[(3, 4), (1, 4)], (1, 2)), (&[(1, 4), (3, 4)], (1, 2))]);
        assert_eq!(expected_surplus(&match_state, &inner), q(3, 4));
    }

    #[test]
    fn same_skill_distribution_examples() {
        assert!(same_skill_distribution(&half(), &split()));
        let left = Population::point_mass(b(&[(1, 1), (0, 1)]));
        let right = Population::point_mass(b(&[(0, 1), (1, 1)]));
        assert!(!same_skill_distribution(&left, &right));
        let a = pop(&[(&[(3, 4), (1, 4)], (1, 2)), (&[(1, 4), (3, 4)], (1, 2))]);
        let c = pop(&[(&[(2, 3), (1, 3)], (1, 2)), (&[(1, 3), (2, 3)], (1, 2))]);
        assert!(same_skill_distribution(&a, &c));
        assert!(matches!(require_equal_means(&left, &right), Err(Error::UnequalMeans { .. })));
    }

    #[test]
    fn firm_canonical_and_covariant() {
        let f = firm(&[&[0, 1], &[1, 0], &[0, 1]]);
        assert_eq!(f.tasks().len(), 2);
        assert_eq!(Firm::new(vec![]), Err(Error::EmptyFirm));
        let s = b(&[(1, 3), (2, 3)]);
        assert_eq!(f.shifted(&q(5, 2)).value(&s), f.value(&s) + q(5, 2));
        assert_eq!(f.scaled(&q(3, 7)).value(&s), f.value(&s) * q(3, 7));
    }

    #[test]
    fn alpha_bounds() {
        let f = firm(&[&[1, 0]]);
        assert!(ExAnteFirm::new(f.clone(), q(0, 1)).is_err());
        assert!(ExAnteFirm::new(f.clone(), q(3, 2)).is_err());
        assert!(ExAnteFirm::new(f, q(1, 1)).is_ok());
    }

    #[test]
    fn mixture_is_affine_in_surplus() {
        let f = firm(&[&[2, -1], &[0, 1]]);
        let lambda = q(2, 5);
        let mixed = half().mix(&split(), &lambda).unwrap();
        let expected = &lambda * expected_surplus(&f, &half())
            + (q(1, 1) - &lambda) * expected_surplus(&f, &split());
        assert_eq!(expected_surplus(&f, &mixed), expected);
    }
}
