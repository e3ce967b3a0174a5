//! Scenario files: skill labels, named populations, optional firms and cost.
//!
//! JSON with every rational written as a `"num/den"` (or integer) string.
//! Decimal numbers are rejected, as are unknown fields. Maps are ordered by
//! name so emitting a parsed file reproduces it byte for byte.
//!
//! ```json
//! {
//!   "skill_labels": ["low", "high"],
//!   "populations": {
//!     "A": [{ "belief": ["1/2", "1/2"], "weight": "1" }]
//!   },
//!   "cost": "1/4"
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{ExAnteFirm, Firm, Population, SkillSet};
use crate::rational::{from_exact, to_exact, Exact, Rational};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown population {0:?}")]
    UnknownPopulation(String),
    #[error("unknown firm {0:?}")]
    UnknownFirm(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub belief: Vec<Exact>,
    pub weight: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirmEntry {
    pub tasks: Vec<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Exact>,
}

/// Known relation between two populations, written by the generator:
/// `hi` is a mean-preserving spread of `lo` via `coupling`, and `strict`
/// says the two differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruth {
    pub hi: String,
    pub lo: String,
    pub strict: bool,
    /// Rows follow `lo`'s canonical atoms, columns `hi`'s.
    pub coupling: Vec<Vec<Exact>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub skill_labels: Vec<String>,
    pub populations: BTreeMap<String, Vec<AtomEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub firms: BTreeMap<String, FirmEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Exact>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ground_truth: Vec<GroundTruth>,
}

impl ScenarioFile {
    /// Parses and validates every population and firm.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    /// Canonical text: pretty JSON plus a trailing newline.
    pub fn to_text(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("scenario serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let skills = self.skill_set()?;
        for name in self.populations.keys() {
            let population = self.population(name)?;
            if population.dim() != skills.len() {
                return Err(invalid(format!(
                    "population {name:?} has beliefs of length {}, expected {}",
                    population.dim(),
                    skills.len()
                )));
            }
        }
        for name in self.firms.keys() {
            let firm = self.firm(name)?;
            if firm.firm().dim() != skills.len() {
                return Err(invalid(format!("firm {name:?} has tasks of the wrong length")));
            }
        }
        if let Some(cost) = &self.cost {
            if cost.0 < Rational::from_integer(0.into()) {
                return Err(invalid(format!("negative cost {cost}")));
            }
        }
        for truth in &self.ground_truth {
            self.population(&truth.hi)?;
            self.population(&truth.lo)?;
        }
        Ok(())
    }

    pub fn skill_set(&self) -> Result<SkillSet, ScenarioError> {
        SkillSet::new(self.skill_labels.clone()).map_err(domain)
    }

    pub fn population(&self, name: &str) -> Result<Population, ScenarioError> {
        let atoms = self
            .populations
            .get(name)
            .ok_or_else(|| ScenarioError::UnknownPopulation(name.to_string()))?;
        Population::from_raw(atoms.iter().map(|a| (from_exact(&a.belief), a.weight.0.clone())).collect())
            .map_err(|e| invalid(format!("population {name:?}: {e}")))
    }

    pub fn firm(&self, name: &str) -> Result<ExAnteFirm, ScenarioError> {
        let entry = self.firms.get(name).ok_or_else(|| ScenarioError::UnknownFirm(name.to_string()))?;
        let firm = Firm::new(entry.tasks.iter().map(|t| from_exact(t)).collect())
            .map_err(|e| invalid(format!("firm {name:?}: {e}")))?;
        let alpha = entry.alpha.as_ref().map_or_else(|| Rational::from_integer(1.into()), |a| a.0.clone());
        ExAnteFirm::new(firm, alpha).map_err(|e| invalid(format!("firm {name:?}: {e}")))
    }

    pub fn cost(&self) -> Option<Rational> {
        self.cost.as_ref().map(|c| c.0.clone())
    }

    pub fn insert_population(&mut self, name: &str, population: &Population) {
        self.populations.insert(name.to_string(), population_entry(population));
    }
}

pub fn population_entry(population: &Population) -> Vec<AtomEntry> {
    population
        .atoms()
        .iter()
        .map(|a| AtomEntry { belief: to_exact(a.belief.probs()), weight: Exact(a.weight.clone()) })
        .collect()
}

pub fn firm_entry(firm: &Firm, alpha: Option<&Rational>) -> FirmEntry {
    FirmEntry {
        tasks: firm.tasks().iter().map(|t| to_exact(t)).collect(),
        alpha: alpha.cloned().map(Exact),
    }
}

fn invalid(message: String) -> ScenarioError {
    ScenarioError::Invalid(message)
}

fn domain(e: Error) -> ScenarioError {
    ScenarioError::Invalid(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const SAMPLE: &str = r#"{
  "skill_labels": ["low", "high"],
  "populations": {
    "A": [{"belief": ["1/2", "1/2"], "weight": "1"}],
    "B": [{"belief": ["1", "0"], "weight": "1/2"}, {"belief": ["0", "1"], "weight": "1/2"}]
  },
  "firms": {"match": {"tasks": [["1", "0"], ["0", "1"]], "alpha": "1/2"}},
  "cost": "1/4"
}"#;

    #[test]
    fn parses_sample() {
        let s = ScenarioFile::parse(SAMPLE).unwrap();
        assert_eq!(s.population("B").unwrap().len(), 2);
        assert_eq!(s.firm("match").unwrap().alpha(), &q(1, 2));
        assert_eq!(s.cost(), Some(q(1, 4)));
        let again = ScenarioFile::parse(&s.to_text()).unwrap();
        assert_eq!(again, s);
        assert_eq!(again.to_text(), s.to_text());
    }

    #[test]
    fn rejects_bad_files() {
        let unknown = SAMPLE.replace("\"cost\"", "\"costs\"");
        assert!(matches!(ScenarioFile::parse(&unknown), Err(ScenarioError::Syntax(_))));
        let decimal = SAMPLE.replace("\"1/4\"", "\"0.25\"");
        assert!(matches!(ScenarioFile::parse(&decimal), Err(ScenarioError::Syntax(_))));
        let float = SAMPLE.replace("\"1/4\"", "0.25");
        assert!(ScenarioFile::parse(&float).is_err());
        let zero_den = SAMPLE.replace("\"1/4\"", "\"1/0\"");
        assert!(ScenarioFile::parse(&zero_den).is_err());
        let bad_sum = SAMPLE.replace("[\"1/2\", \"1/2\"], \"weight\": \"1\"", "[\"1/2\", \"1/3\"], \"weight\": \"1\"");
        assert!(matches!(ScenarioFile::parse(&bad_sum), Err(ScenarioError::Invalid(_))));
        let wrong_dim = SAMPLE.replace("[\"1/2\", \"1/2\"]", "[\"1\"]");
        assert!(matches!(ScenarioFile::parse(&wrong_dim), Err(ScenarioError::Invalid(_))));
        let negative = SAMPLE.replace("\"1/4\"", "\"-1/4\"");
        assert!(matches!(ScenarioFile::parse(&negative), Err(ScenarioError::Invalid(_))));
    }

    #[test]
    fn unknown_names() {
        let s = ScenarioFile::parse(SAMPLE).unwrap();
        assert!(matches!(s.population("C"), Err(ScenarioError::UnknownPopulation(_))));
        assert!(matches!(s.firm("other"), Err(ScenarioError::UnknownFirm(_))));
    }
}
