//! Reports emitted by the CLI.
//!
//! A report carries the verdict together with the exact values behind every
//! inequality it claims, so each claim can be re-checked from the printed
//! numbers alone ([`Report::check_values`]) or against the scenario the
//! report came from ([`Report::verify_against`]).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::blackwell::Coupling;
use crate::exante::interview_value;
use crate::model::{expected_surplus, ExAnteFirm, Firm};
use crate::rational::{format_rational, format_vector, from_exact, Exact, Rational};
use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingReport {
    /// Less spread population; rows follow its canonical atoms.
    pub source: String,
    /// More spread population; columns follow its canonical atoms.
    pub target: String,
    pub weights: Vec<Vec<Exact>>,
}

/// A firm that disfavours `against` relative to `favoured`.
///
/// Without `cost` the claim is `against_value < favoured_value` (expected
/// surplus). With `cost` the values are interview values and the claim is
/// `against_value ≤ cost < favoured_value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessReport {
    pub against: String,
    pub favoured: String,
    pub tasks: Vec<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Exact>,
    pub against_value: Exact,
    pub favoured_value: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Exact>,
}

impl WitnessReport {
    pub fn surplus(firm: &Firm, against: (&str, &crate::model::Population), favoured: (&str, &crate::model::Population)) -> Self {
        Self {
            against: against.0.to_string(),
            favoured: favoured.0.to_string(),
            tasks: firm.tasks().iter().map(|t| crate::rational::to_exact(t)).collect(),
            alpha: None,
            against_value: Exact(expected_surplus(firm, against.1)),
            favoured_value: Exact(expected_surplus(firm, favoured.1)),
            cost: None,
        }
    }

    pub fn exclusion(
        firm: &ExAnteFirm,
        cost: &Rational,
        against: (&str, &crate::model::Population),
        favoured: (&str, &crate::model::Population),
    ) -> Self {
        Self {
            against: against.0.to_string(),
            favoured: favoured.0.to_string(),
            tasks: firm.firm().tasks().iter().map(|t| crate::rational::to_exact(t)).collect(),
            alpha: Some(Exact(firm.alpha().clone())),
            against_value: Exact(interview_value(firm, against.1)),
            favoured_value: Exact(interview_value(firm, favoured.1)),
            cost: Some(Exact(cost.clone())),
        }
    }

    fn claim_holds(&self) -> bool {
        match &self.cost {
            Some(c) => self.against_value.0 <= c.0 && c.0 < self.favoured_value.0,
            None => self.against_value.0 < self.favoured_value.0,
        }
    }

    fn claim_text(&self) -> String {
        let (a, f) = (format_rational(&self.against_value.0), format_rational(&self.favoured_value.0));
        match &self.cost {
            Some(c) => format!(
                "interview value on {} = {a} <= cost {} < {f} = interview value on {}",
                self.against,
                format_rational(&c.0),
                self.favoured
            ),
            None => format!("surplus on {} = {a} < {f} = surplus on {}", self.against, self.favoured),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub first: String,
    pub second: String,
    pub skill_labels: Vec<String>,
    pub skill_distribution: Vec<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Exact>,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub against: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Headline such as `systematic_against: A` or
    /// `no_ex_ante_discrimination (N-equivalent)`.
    pub fn headline(&self) -> String {
        let mut line = self.verdict.clone();
        if let Some(against) = &self.against {
            let _ = write!(line, ": {against}");
        }
        if let Some(note) = &self.note {
            let _ = write!(line, " ({note})");
        }
        line
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} vs {}", self.command, self.first, self.second);
        let _ = writeln!(out, "skill labels: {}", self.skill_labels.join(", "));
        let _ = writeln!(out, "skill distribution: {}", format_vector(&from_exact(&self.skill_distribution)));
        if let Some(regime) = &self.regime {
            let _ = writeln!(out, "regime: {regime}");
        }
        if let Some(cost) = &self.cost {
            let _ = writeln!(out, "interview cost: {}", format_rational(&cost.0));
        }
        let _ = writeln!(out, "verdict: {}", self.headline());
        if let Some(c) = &self.coupling {
            let _ = writeln!(out, "coupling ({} atoms -> {} atoms):", c.source, c.target);
            for row in &c.weights {
                let _ = writeln!(out, "  {}", format_vector(&from_exact(row)));
            }
        }
        for w in &self.witnesses {
            let tasks: Vec<String> = w.tasks.iter().map(|t| format_vector(&from_exact(t))).collect();
            let _ = writeln!(out, "witness against {}:", w.against);
            let _ = writeln!(out, "  tasks: {{{}}}", tasks.join(", "));
            if let Some(alpha) = &w.alpha {
                let _ = writeln!(out, "  alpha: {}", format_rational(&alpha.0));
            }
            let _ = writeln!(out, "  {}", w.claim_text());
        }
        out
    }

    /// Every claimed inequality holds on the printed values.
    pub fn check_values(&self) -> Result<(), String> {
        for w in &self.witnesses {
            if !w.claim_holds() {
                return Err(format!("claim fails on printed values: {}", w.claim_text()));
            }
        }
        Ok(())
    }

    /// Recomputes every witness value and coupling against the scenario.
    pub fn verify_against(&self, scenario: &ScenarioFile) -> Result<(), String> {
        self.check_values()?;
        let err = |e: &dyn std::fmt::Display| e.to_string();
        for w in &self.witnesses {
            let against = scenario.population(&w.against).map_err(|e| err(&e))?;
            let favoured = scenario.population(&w.favoured).map_err(|e| err(&e))?;
            let firm = Firm::new(w.tasks.iter().map(|t| from_exact(t)).collect()).map_err(|e| err(&e))?;
            let (a, f) = match &w.alpha {
                Some(alpha) => {
                    let firm = ExAnteFirm::new(firm, alpha.0.clone()).map_err(|e| err(&e))?;
                    (interview_value(&firm, &against), interview_value(&firm, &favoured))
                }
                None => (expected_surplus(&firm, &against), expected_surplus(&firm, &favoured)),
            };
            if a != w.against_value.0 || f != w.favoured_value.0 {
                return Err(format!("witness values against {} do not recompute", w.against));
            }
        }
        if let Some(c) = &self.coupling {
            let source = scenario.population(&c.source).map_err(|e| err(&e))?;
            let target = scenario.population(&c.target).map_err(|e| err(&e))?;
            let weights = c.weights.iter().map(|r| from_exact(r)).collect();
            Coupling::new(source, target, weights).map_err(|e| err(&e))?;
        }
        Ok(())
    }
}
