//! Seeded instance generators and sampling-based refutation checks.
//!
//! Nothing here decides dominance. The generators build pairs whose
//! relation is known by construction, and the samplers only ever refute a
//! verdict: one sampled firm with the wrong strict inequality contradicts a
//! claimed dominance, but no finite sample confirms one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blackwell::Coupling;
use crate::error::Error;
use crate::exante::{excludes, interview_value};
use crate::model::{expected_surplus, require_equal_means, Belief, ExAnteFirm, Firm, Population};
use crate::rational::Rational;

/// Parameters of a randomized instance. Every generator is a pure function
/// of this value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstanceSeed {
    pub seed: u64,
    pub skill_count: usize,
    pub support_bound: usize,
    pub denominator_bound: u32,
}

impl InstanceSeed {
    pub fn new(seed: u64, skill_count: usize, support_bound: usize, denominator_bound: u32) -> Result<Self, Error> {
        if skill_count == 0 || support_bound == 0 || denominator_bound == 0 {
            return Err(Error::Internal("instance bounds must be positive".into()));
        }
        Ok(Self { seed, skill_count, support_bound, denominator_bound })
    }

    /// Same bounds, different stream.
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Derived stream, so that one seed can drive several independent draws.
    pub fn derive(self, salt: u64) -> Self {
        self.with_seed(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt.wrapping_mul(0xD1B5_4A32_D192_ED03)) ^ salt)
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Random belief with entries on the grid `k / den` for `den ≤ denominator_bound`.
pub fn random_belief(seed: InstanceSeed) -> Belief {
    let mut rng = seed.rng();
    sample_belief(&mut rng, seed.skill_count, seed.denominator_bound)
}

fn sample_belief(rng: &mut ChaCha8Rng, dim: usize, denominator_bound: u32) -> Belief {
    let den = rng.gen_range(1..=denominator_bound as i64);
    // Stars and bars: `dim - 1` cut points in 0..=den.
    let mut cuts: Vec<i64> = (0..dim - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut probs = Vec::with_capacity(dim);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(den)) {
        probs.push(ratio(c - prev, den));
        prev = c;
    }
    Belief::new(probs).expect("grid belief sums to one")
}

/// Result of [`random_mps_split`]: the spread population, the kernel from
/// the input, and whether the split changed nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub population: Population,
    pub coupling: Coupling,
    pub degenerate: bool,
}

/// Replaces each atom by a two-point mixture with the same barycenter.
///
/// For atom `s` an integer direction `d` with `Σd = 0` is drawn, and the split
/// points are `s + (a/D)·d` and `s - (b/D)·d` for positive integers `a, b`,
/// weighted `b/(a+b)` and `a/(a+b)`. `D` is the lcm of the denominators of `s`
/// times the denominator bound, so split points stay on a modest grid. Atoms
/// with no room to move stay put.
pub fn random_mps_split(population: &Population, seed: InstanceSeed) -> Split {
    let mut rng = seed.rng();
    let steps = BigInt::from(seed.denominator_bound.max(2));
    // (source atom index, target belief, mass)
    let mut pieces: Vec<(usize, Belief, Rational)> = Vec::new();
    for (i, atom) in population.atoms().iter().enumerate() {
        let s = &atom.belief;
        let direction = sample_direction(&mut rng, s, seed.denominator_bound);
        let grid = s.probs().iter().fold(steps.clone(), |acc, p| acc.lcm(p.denom()));
        let room = |sign| {
            max_step(s, &direction, sign)
                .map(|t| (t * Rational::from_integer(grid.clone())).floor().to_integer())
                .and_then(|k| i64::try_from(k.min(BigInt::from(64))).ok())
                .unwrap_or(0)
        };
        let (a_max, b_max) = (room(1), room(-1));
        if a_max >= 1 && b_max >= 1 {
            let a = rng.gen_range(1..=a_max);
            let b = rng.gen_range(1..=b_max);
            let unit = Rational::new(BigInt::one(), grid);
            let plus = offset(s, &direction, &(&unit * ratio(a, 1)));
            let minus = offset(s, &direction, &(&unit * ratio(-b, 1)));
            pieces.push((i, plus, &atom.weight * ratio(b, a + b)));
            pieces.push((i, minus, &atom.weight * ratio(a, a + b)));
        } else {
            pieces.push((i, s.clone(), atom.weight.clone()));
        }
    }
    let spread = Population::new(pieces.iter().map(|(_, b, w)| (b.clone(), w.clone())).collect())
        .expect("split pieces form a population");
    let mut weights = vec![vec![Rational::zero(); spread.len()]; population.len()];
    for (i, belief, mass) in pieces {
        let j = spread
            .atoms()
            .binary_search_by(|a| a.belief.cmp(&belief))
            .expect("piece belief is in the canonical support");
        weights[i][j] += mass;
    }
    let coupling = Coupling::new(population.clone(), spread.clone(), weights).expect("split kernel preserves barycenters");
    let degenerate = &spread == population;
    Split { population: spread, coupling, degenerate }
}

/// Integer direction with `Σd = 0`, supported on the coordinates where `s`
/// is positive so that both steps stay inside the face of `s`. Zero only when
/// that face is a vertex.
fn sample_direction(rng: &mut ChaCha8Rng, s: &Belief, bound: u32) -> Vec<Rational> {
    let bound = i64::from(bound.max(1));
    let face: Vec<usize> = (0..s.dim()).filter(|&k| s.probs()[k].is_positive()).collect();
    let mut d = vec![0i64; s.dim()];
    if face.len() < 2 {
        return d.into_iter().map(|x| ratio(x, 1)).collect();
    }
    let mut local = vec![0i64; face.len()];
    for _ in 0..16 {
        for x in local.iter_mut().take(face.len() - 1) {
            *x = rng.gen_range(-bound..=bound);
        }
        local[face.len() - 1] = -local[..face.len() - 1].iter().sum::<i64>();
        if local.iter().any(|&x| x != 0) {
            break;
        }
    }
    local.shuffle(rng);
    for (&k, x) in face.iter().zip(local) {
        d[k] = x;
    }
    d.into_iter().map(|x| ratio(x, 1)).collect()
}

/// Largest `t ≥ 0` with `s + sign·t·d ≥ 0`; `None` when unbounded (`d = 0`).
fn max_step(s: &Belief, d: &[Rational], sign: i64) -> Option<Rational> {
    let sign = ratio(sign, 1);
    s.probs()
        .iter()
        .zip(d)
        .map(|(p, x)| (p, x * &sign))
        .filter(|(_, x)| x.is_negative())
        .map(|(p, x)| p / -x)
        .min()
}

fn offset(s: &Belief, d: &[Rational], t: &Rational) -> Belief {
    Belief::new(s.probs().iter().zip(d).map(|(p, x)| p + t * x).collect()).expect("step stays in the simplex")
}

/// Random population: up to `support_bound` grid beliefs with small integer
/// weights. Repeated draws of the same belief merge.
pub fn random_population(seed: InstanceSeed) -> Population {
    let mut rng = seed.rng();
    let size = rng.gen_range(1..=seed.support_bound);
    let counts: Vec<i64> = (0..size).map(|_| rng.gen_range(1..=3)).collect();
    let total: i64 = counts.iter().sum();
    let atoms = counts
        .into_iter()
        .map(|c| (sample_belief(&mut rng, seed.skill_count, seed.denominator_bound), ratio(c, total)))
        .collect();
    Population::new(atoms).expect("grid atoms form a population")
}

/// Random population with the given mean.
///
/// A random population is drawn on the face of `mean` (the coordinates where
/// `mean` is positive), recentred at `mean` and shrunk towards it by the
/// largest factor in `{1, 7/8, ..., 1/8}` that keeps every atom in the
/// simplex, or by a fraction of the exact limit when none does.
pub fn random_population_with_mean(mean: &Belief, seed: InstanceSeed) -> Population {
    let mut rng = seed.rng();
    let face: Vec<usize> = (0..mean.dim()).filter(|&k| mean.probs()[k].is_positive()).collect();
    let local = random_population(InstanceSeed { skill_count: face.len(), ..seed.derive(1) });
    let lift = |b: &Belief| {
        let mut probs = vec![Rational::zero(); mean.dim()];
        for (&k, p) in face.iter().zip(b.probs()) {
            probs[k] = p.clone();
        }
        probs
    };
    let centre = lift(&crate::model::skill_distribution(&local));
    let offsets: Vec<(Vec<Rational>, Rational)> = local
        .atoms()
        .iter()
        .map(|a| (lift(&a.belief).iter().zip(&centre).map(|(p, c)| p - c).collect(), a.weight.clone()))
        .collect();
    // Largest τ with mean + τ·offset ≥ 0 for every atom.
    let limit = offsets
        .iter()
        .flat_map(|(o, _)| o.iter().zip(mean.probs()).filter(|(x, _)| x.is_negative()).map(|(x, m)| m / -x))
        .min();
    let shrink = match limit {
        None => Rational::one(),
        Some(limit) => (1..=8i64)
            .rev()
            .map(|k| ratio(k, 8))
            .find(|t| *t <= limit)
            .unwrap_or_else(|| limit * ratio(rng.gen_range(1..=4), 4)),
    };
    let atoms = offsets
        .into_iter()
        .map(|(o, w)| {
            let probs = mean.probs().iter().zip(&o).map(|(m, x)| m + &shrink * x).collect();
            (Belief::new(probs).expect("shrunk atom stays in the simplex"), w)
        })
        .collect();
    Population::new(atoms).expect("recentred atoms form a population")
}

/// Firm with `task_count` tasks whose payoffs are grid rationals in
/// `[-payoff_bound, payoff_bound]` with denominators up to the seed's bound.
pub fn sample_random_firm(seed: InstanceSeed, task_count: usize, payoff_bound: i64) -> Firm {
    let mut rng = seed.rng();
    draw_firm(&mut rng, seed.skill_count, task_count.max(1), payoff_bound, seed.denominator_bound)
}

fn draw_firm(rng: &mut ChaCha8Rng, dim: usize, tasks: usize, payoff_bound: i64, denominator_bound: u32) -> Firm {
    let tasks = (0..tasks)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let den = rng.gen_range(1..=i64::from(denominator_bound));
                    let span = payoff_bound * den;
                    ratio(rng.gen_range(-span..=span), den)
                })
                .collect()
        })
        .collect();
    Firm::new(tasks).expect("sampled firm is well formed")
}

/// Deterministic stream of sampled firms with 1..=(|Θ|+1) tasks each.
pub fn sample_firms(seed: InstanceSeed, count: usize, payoff_bound: i64) -> Vec<Firm> {
    let mut rng = seed.rng();
    (0..count)
        .map(|_| {
            let tasks = rng.gen_range(1..=seed.skill_count + 1);
            draw_firm(&mut rng, seed.skill_count, tasks, payoff_bound, seed.denominator_bound)
        })
        .collect()
}

/// Counts of sampled firms that strictly favour one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Evidence {
    pub samples: usize,
    /// Firms paying the first population strictly less.
    pub strict_against_first: usize,
    /// Firms paying the second population strictly less.
    pub strict_against_second: usize,
}

impl Evidence {
    /// Strict inequalities in both directions rule out both systematic tags
    /// and no-discrimination.
    pub fn refutes_ranking(&self) -> bool {
        self.strict_against_first > 0 && self.strict_against_second > 0
    }

    pub fn merge(self, other: Evidence) -> Evidence {
        Evidence {
            samples: self.samples + other.samples,
            strict_against_first: self.strict_against_first + other.strict_against_first,
            strict_against_second: self.strict_against_second + other.strict_against_second,
        }
    }
}

/// Compares expected surplus under `samples` random firms.
pub fn estimate_classification(
    first: &Population,
    second: &Population,
    samples: usize,
    seed: InstanceSeed,
) -> Result<Evidence, Error> {
    require_equal_means(first, second)?;
    let seed = InstanceSeed { skill_count: first.dim(), ..seed };
    let mut evidence = Evidence { samples, ..Evidence::default() };
    for firm in sample_firms(seed, samples, 4) {
        let (a, b) = (expected_surplus(&firm, first), expected_surplus(&firm, second));
        if a < b {
            evidence.strict_against_first += 1;
        } else if b < a {
            evidence.strict_against_second += 1;
        }
    }
    Ok(evidence)
}

/// Tests one convex function `h = v_A` (or `max{v_A, 0}` when `nonneg`).
///
/// Plain: returns `∫h d(hi) ≥ ∫h d(lo)`. Non-negative: returns the implication
/// `∫h d(lo) > 0 ⇒ ∫h d(hi) > 0`.
pub fn convex_test_function_check(hi: &Population, lo: &Population, firm: &Firm, nonneg: bool) -> Result<bool, Error> {
    require_equal_means(hi, lo)?;
    if nonneg {
        let probe = ExAnteFirm::new(firm.clone(), Rational::one())?;
        let zero = Rational::zero();
        Ok(excludes(&probe, &zero, lo) || !excludes(&probe, &zero, hi))
    } else {
        Ok(expected_surplus(firm, hi) >= expected_surplus(firm, lo))
    }
}

/// Non-negative convex test of the zero-cost order: `∫max{v_A,0}` on each side.
pub fn positive_part_integrals(firm: &Firm, first: &Population, second: &Population) -> (Rational, Rational) {
    let probe = ExAnteFirm::new(firm.clone(), Rational::one()).expect("unit alpha");
    (interview_value(&probe, first), interview_value(&probe, second))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackwell::{mps_dominates, Dominance};
    use crate::model::skill_distribution;
    use crate::rational::q;

    fn seed(s: u64) -> InstanceSeed {
        InstanceSeed::new(s, 2, 4, 6).unwrap()
    }

    #[test]
    fn split_of_uniform_preserves_barycenter() {
        let uniform = Population::point_mass(Belief::new(vec![q(1, 2), q(1, 2)]).unwrap());
        for s in 0..20 {
            let split = random_mps_split(&uniform, seed(s));
            assert_eq!(skill_distribution(&split.population), skill_distribution(&uniform));
            if !split.degenerate {
                assert_eq!(split.population.len(), 2);
            }
        }
    }

    #[test]
    fn vertices_split_degenerately() {
        let vertex = Population::point_mass(Belief::vertex(3, 1));
        let split = random_mps_split(&vertex, InstanceSeed::new(5, 3, 3, 5).unwrap());
        assert!(split.degenerate);
        assert_eq!(split.coupling, Coupling::identity(&vertex));
    }

    #[test]
    fn split_dominates_input() {
        for s in 0..30 {
            let base = random_population(InstanceSeed::new(s, 3, 4, 6).unwrap());
            let split = random_mps_split(&base, InstanceSeed::new(s + 1000, 3, 4, 6).unwrap());
            assert!(matches!(mps_dominates(&split.population, &base).unwrap(), Dominance::Dominates(_)));
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let s = InstanceSeed::new(42, 3, 5, 8).unwrap();
        assert_eq!(random_population(s), random_population(s));
        assert_eq!(sample_random_firm(s, 3, 4), sample_random_firm(s, 3, 4));
        let p = random_population(s);
        assert_eq!(random_mps_split(&p, s), random_mps_split(&p, s));
    }

    #[test]
    fn population_respects_support_bound() {
        for s in 0..40 {
            let seed = InstanceSeed::new(s, 3, 5, 6).unwrap();
            assert!(random_population(seed).len() <= 5);
        }
    }

    #[test]
    fn single_task_firms() {
        let f = sample_random_firm(seed(3), 1, 4);
        assert_eq!(f.tasks().len(), 1);
    }

    #[test]
    fn identical_pair_has_no_strict_evidence() {
        let p = random_population(seed(9));
        let e = estimate_classification(&p, &p, 50, seed(1)).unwrap();
        assert_eq!((e.strict_against_first, e.strict_against_second), (0, 0));
    }

    #[test]
    fn uninformed_never_favoured() {
        let uniform = Population::point_mass(Belief::new(vec![q(1, 2), q(1, 2)]).unwrap());
        let full = Population::new(vec![(Belief::vertex(2, 0), q(1, 2)), (Belief::vertex(2, 1), q(1, 2))]).unwrap();
        let e = estimate_classification(&uniform, &full, 100, seed(7)).unwrap();
        assert_eq!(e.strict_against_second, 0);
        assert!(e.strict_against_first >= 1);
    }
}
