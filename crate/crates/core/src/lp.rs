//! Exact feasibility for `M·w = b, w ≥ 0`.
//!
//! Phase-one simplex with Bland's rule, run on a fraction-free integer
//! tableau so that every step is exact. When the artificial
//! objective cannot be driven to zero, the simplex multipliers of the final
//! basis give a Farkas certificate `y` with `yᵀM ≥ 0` and `yᵀb < 0`. Both
//! outcomes are re-verified against the original system before they leave
//! this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;

/// Standard-form system: find `w ≥ 0` with `matrix · w = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilitySystem {
    matrix: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    columns: usize,
}

impl FeasibilitySystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, columns: usize) -> Result<Self, Error> {
        if matrix.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: matrix.len(), found: rhs.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != columns) {
            return Err(Error::DimensionMismatch { expected: columns, found: row.len() });
        }
        Ok(Self { matrix, rhs, columns })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    /// Exact check of `M·w = b` and `w ≥ 0`.
    pub fn is_solution(&self, point: &[Rational]) -> bool {
        point.len() == self.columns
            && point.iter().all(|x| !x.is_negative())
            && self.matrix.iter().zip(&self.rhs).all(|(row, b)| {
                let lhs: Rational = row.iter().zip(point).filter(|(a, _)| !a.is_zero()).map(|(a, x)| a * x).sum();
                &lhs == b
            })
    }

    /// `yᵀM` as a row vector.
    pub fn weighted_columns(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.columns];
        for (row, yi) in self.matrix.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o += yi * a;
                }
            }
        }
        out
    }

    /// Whether `y` proves infeasibility: `yᵀM ≥ 0` and `yᵀb < 0`.
    pub fn certifies(&self, y: &[Rational]) -> bool {
        if y.len() != self.rows() {
            return false;
        }
        let yb: Rational = y.iter().zip(&self.rhs).map(|(a, b)| a * b).sum();
        yb.is_negative() && self.weighted_columns(y).iter().all(|x| !x.is_negative())
    }
}

/// Row multipliers proving a [`FeasibilitySystem`] has no solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    y: Vec<Rational>,
}

impl FarkasCertificate {
    /// Checks both certificate inequalities exactly.
    pub fn new(system: &FeasibilitySystem, y: Vec<Rational>) -> Result<Self, Error> {
        if y.len() != system.rows() {
            return Err(Error::InvalidCertificate(format!(
                "{} multipliers for {} rows",
                y.len(),
                system.rows()
            )));
        }
        if !system.certifies(&y) {
            return Err(Error::InvalidCertificate("yᵀM ≥ 0 and yᵀb < 0 do not both hold".into()));
        }
        Ok(Self { y })
    }

    /// Wraps multipliers without checking them. Consumers that rely on a
    /// certificate (such as witness extraction) re-verify it against their
    /// own system.
    pub fn new_unchecked(y: Vec<Rational>) -> Self {
        Self { y }
    }

    pub fn multipliers(&self) -> &[Rational] {
        &self.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides feasibility; never returns "unknown".
pub fn solve_feasibility(system: &FeasibilitySystem) -> Result<Feasibility, Error> {
    let outcome = PhaseOne::new(system).run();
    match outcome {
        Feasibility::Feasible(point) => {
            if !system.is_solution(&point) {
                return Err(Error::Internal("simplex returned a point that fails re-verification".into()));
            }
            Ok(Feasibility::Feasible(point))
        }
        Feasibility::Infeasible(cert) => {
            let cert = FarkasCertificate::new(system, cert.y)
                .map_err(|e| Error::Internal(format!("simplex certificate rejected: {e}")))?;
            Ok(Feasibility::Infeasible(cert))
        }
    }
}

/// Integer-preserving (fraction-free) dense tableau over the non-zero rows,
/// one artificial column per row.
///
/// Every row is scaled to integers up front. The stored integers are the
/// true tableau entries times the common denominator `denom`, which is the
/// previous pivot element; each pivot divides exactly (Bareiss), so entries
/// stay bounded by subdeterminants of the scaled input and no gcd work is
/// needed.
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN_LIMIT: usize = 32;

struct PhaseOne<'a> {
    system: &'a FeasibilitySystem,
    /// Original row index for each tableau row.
    row_index: Vec<usize>,
    /// Tableau row = scale · original row; negative scale when the rhs was negative.
    scale: Vec<BigInt>,
    /// Columns `0..n` original, `n..n+m` artificial, then the rhs.
    tableau: Vec<Vec<BigInt>>,
    /// Phase-one reduced costs (objective = sum of artificials), same layout.
    reduced: Vec<BigInt>,
    basis: Vec<usize>,
    denom: BigInt,
}

impl<'a> PhaseOne<'a> {
    fn new(system: &'a FeasibilitySystem) -> Self {
        let n = system.columns();
        let kept: Vec<usize> = (0..system.rows())
            .filter(|&i| system.matrix[i].iter().any(|a| !a.is_zero()))
            .collect();
        let m = kept.len();
        let width = n + m + 1;
        let mut scale = Vec::with_capacity(m);
        let mut tableau = Vec::with_capacity(m);
        for (r, &i) in kept.iter().enumerate() {
            let lcm = system.matrix[i]
                .iter()
                .chain(std::iter::once(&system.rhs[i]))
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let s = if system.rhs[i].is_negative() { -lcm } else { lcm };
            let factor = Rational::from_integer(s.clone());
            let mut row: Vec<BigInt> = system.matrix[i].iter().map(|a| (a * &factor).to_integer()).collect();
            row.extend((0..m).map(|k| if k == r { BigInt::one() } else { BigInt::zero() }));
            row.push((&system.rhs[i] * &factor).to_integer());
            tableau.push(row);
            scale.push(s);
        }
        let mut reduced = vec![BigInt::zero(); width];
        for row in &tableau {
            for (d, a) in reduced[..n].iter_mut().zip(&row[..n]) {
                *d -= a;
            }
            reduced[width - 1] -= &row[width - 1];
        }
        Self {
            system,
            row_index: kept,
            scale,
            tableau,
            reduced,
            basis: (n..n + m).collect(),
            denom: BigInt::one(),
        }
    }

    fn run(mut self) -> Feasibility {
        // A zero row with non-zero rhs is infeasible on its own.
        if let Some(i) = (0..self.system.rows()).find(|&i| {
            !self.row_index.contains(&i) && !self.system.rhs[i].is_zero()
        }) {
            let mut y = vec![Rational::zero(); self.system.rows()];
            y[i] = if self.system.rhs[i].is_positive() { -Rational::one() } else { Rational::one() };
            return Feasibility::Infeasible(FarkasCertificate::new_unchecked(y));
        }

        let n = self.system.columns();
        let m = self.tableau.len();
        let rhs = n + m;
        // Dantzig pricing (most negative reduced cost), falling back to Bland's
        // rule after a run of degenerate pivots. Bland cannot cycle, and every
        // non-degenerate pivot strictly lowers the objective, so this terminates.
        let mut degenerate_run = 0usize;
        loop {
            let candidates = self.reduced[..rhs].iter().enumerate().filter(|(_, d)| d.is_negative());
            let entering = if degenerate_run >= DEGENERATE_RUN_LIMIT {
                candidates.map(|(j, _)| j).next()
            } else {
                candidates.min_by(|a, b| a.1.cmp(b.1)).map(|(j, _)| j)
            };
            let Some(entering) = entering else { break };
            let mut leaving: Option<usize> = None;
            for r in 0..m {
                if !self.tableau[r][entering].is_positive() {
                    continue;
                }
                let better = match leaving {
                    None => true,
                    Some(best) => {
                        // rhs_r / a_r versus rhs_best / a_best, both a > 0.
                        let lhs = &self.tableau[r][rhs] * &self.tableau[best][entering];
                        let rhs_cmp = &self.tableau[best][rhs] * &self.tableau[r][entering];
                        lhs < rhs_cmp || (lhs == rhs_cmp && self.basis[r] < self.basis[best])
                    }
                };
                if better {
                    leaving = Some(r);
                }
            }
            // The phase-one objective is bounded below by zero, so some row qualifies.
            let pivot_row = leaving.expect("phase-one objective is bounded");
            if self.tableau[pivot_row][rhs].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(pivot_row, entering);
        }

        // reduced[rhs] holds minus the objective value.
        if self.reduced[rhs].is_zero() {
            let mut point = vec![Rational::zero(); n];
            for (r, &b) in self.basis.iter().enumerate() {
                if b < n {
                    point[b] = Rational::new(self.tableau[r][rhs].clone(), self.denom.clone());
                }
            }
            return Feasibility::Feasible(point);
        }

        // Simplex multipliers u satisfy reduced_j = c_j - uᵀA_j; for the
        // artificial column of row r that is 1 - u_r. Optimality gives
        // uᵀA ≤ 0 and uᵀb > 0 on the scaled rows, so y = -u · scale certifies
        // the original system.
        let mut y = vec![Rational::zero(); self.system.rows()];
        for (r, &i) in self.row_index.iter().enumerate() {
            let reduced = Rational::new(self.reduced[n + r].clone(), self.denom.clone());
            let u = Rational::one() - reduced;
            y[i] = -(u * Rational::from_integer(self.scale[r].clone()));
        }
        Feasibility::Infeasible(FarkasCertificate::new_unchecked(y))
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.tableau[row][col].clone();
        let pivot_row = std::mem::take(&mut self.tableau[row]);
        let denom = &self.denom;
        let update = |target: &mut Vec<BigInt>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                // (pivot · t) / denom for every entry.
                if pivot != *denom {
                    for t in target.iter_mut().filter(|t| !t.is_zero()) {
                        *t = &*t * &pivot / denom;
                    }
                }
                return;
            }
            for (j, t) in target.iter_mut().enumerate() {
                let mut value = &*t * &pivot;
                if !pivot_row[j].is_zero() {
                    value -= &factor * &pivot_row[j];
                }
                *t = value / denom;
            }
        };
        for (r, target) in self.tableau.iter_mut().enumerate() {
            if r != row {
                update(target);
            }
        }
        update(&mut self.reduced);
        self.tableau[row] = pivot_row;
        self.basis[row] = col;
        self.denom = pivot;
    }
}
