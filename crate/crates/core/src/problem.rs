//! Problem files: one JSON object tagged by `"class"`.
//!
//! ```json
//! {"class": "ode", "B": {...}, "f": [...], "T": 1.0, "h": 0.001}
//! {"class": "pde24", "B": {...}, "n": 3, "a": 1.0, "f": {...}, "options": {"truncation": 12}}
//! ```
//!
//! PDE classes take an optional `"options"` object with the solver options of
//! their module; `pde24` also takes `"path": "chain" | "projector"`.

use serde::{Deserialize, Serialize};

use crate::odesolve::IrregularOdeProblem;
use crate::pdesolve::integro::{IntegroOptions, IntegroProblem};
use crate::pdesolve::mixed::{MixedOptions, MixedProblem};
use crate::pdesolve::parabolic::{ParabolicOptions, ParabolicProblem};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParabolicPath {
    #[default]
    Chain,
    Projector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum IrregularProblem {
    #[serde(rename = "ode")]
    Ode(IrregularOdeProblem),
    #[serde(rename = "pde19")]
    Mixed {
        #[serde(flatten)]
        problem: MixedProblem,
        #[serde(default)]
        options: MixedOptions,
    },
    #[serde(rename = "pde24")]
    Parabolic {
        #[serde(flatten)]
        problem: ParabolicProblem,
        #[serde(default)]
        options: ParabolicOptions,
        #[serde(default)]
        path: ParabolicPath,
    },
    #[serde(rename = "integro30")]
    Integro {
        #[serde(flatten)]
        problem: IntegroProblem,
        #[serde(default)]
        options: IntegroOptions,
    },
}

impl IrregularProblem {
    pub fn class(&self) -> &'static str {
        match self {
            Self::Ode(_) => "ode",
            Self::Mixed { .. } => "pde19",
            Self::Parabolic { .. } => "pde24",
            Self::Integro { .. } => "integro30",
        }
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_every_class() {
        let problems = [
            IrregularProblem::Ode(fixtures::example_one_problem()),
            IrregularProblem::Mixed { problem: fixtures::mixed_problem(), options: MixedOptions::default() },
            IrregularProblem::Parabolic {
                problem: fixtures::parabolic_generic_problem(),
                options: ParabolicOptions::default(),
                path: ParabolicPath::Projector,
            },
            IrregularProblem::Integro { problem: fixtures::integro_single_mode_problem(), options: IntegroOptions::default() },
        ];
        for p in problems {
            let back = IrregularProblem::from_json(&p.to_json()).unwrap();
            assert_eq!(back, p, "{}", p.class());
        }
    }

    #[test]
    fn options_default_when_absent() {
        let json = r#"{"class": "ode", "B": {"rows": 1, "cols": 1, "data": [[0.0]]}, "f": [{"terms": []}]}"#;
        let p = IrregularProblem::from_json(json).unwrap();
        assert_eq!(p.class(), "ode");
        assert!(IrregularProblem::from_json(r#"{"class": "wave"}"#).is_err());
    }
}
