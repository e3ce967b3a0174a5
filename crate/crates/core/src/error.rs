use crate::model::SkillDistribution;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("skill set must contain at least one skill type")]
    EmptySkillSet,
    #[error("duplicate skill label {0:?}")]
    DuplicateSkillLabel(String),
    #[error("invalid belief: {0}")]
    InvalidBelief(String),
    #[error("population has no atoms")]
    EmptyPopulation,
    #[error("population weight {0} is not positive")]
    NonPositiveWeight(Rational),
    #[error("population weights sum to {0}, expected 1")]
    WeightSum(Rational),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("firm has no tasks")]
    EmptyFirm,
    #[error("retention share {0} is outside (0, 1]")]
    InvalidAlpha(Rational),
    #[error("interview cost {0} is negative")]
    NegativeCost(Rational),
    #[error("interview cost is zero; use the zero-cost classification")]
    ZeroCost,
    #[error("populations have different skill distributions: {first} vs {second}")]
    UnequalMeans {
        first: SkillDistribution,
        second: SkillDistribution,
    },
    #[error("base firm does not strictly separate the populations: {0}")]
    NoStrictGap(String),
    #[error("invalid Farkas certificate: {0}")]
    InvalidCertificate(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
