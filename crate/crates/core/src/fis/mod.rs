//! Mamdani-style steering controller.
//!
//! Six inputs in `[0.1, 1.0]` with three terms each, one output `y1` in
//! `[0, 180]` degrees (90 = go straight). Rules combine antecedents with
//! `min`; the crisp set point is the firing-strength weighted mean of the
//! consequent term centers.

mod dsl;
mod engine;
mod membership;
mod rules;
mod variables;

pub use dsl::{parse_controller, parse_rulebase};
pub use engine::{check_inputs, defuzzify, fire_rules, infer, InferenceResult, NO_FIRE_OUTPUT};
pub use membership::{eval_gaussian, eval_pi, eval_s, MembershipFunction};
pub use rules::{Rule, RuleBase};
pub use variables::{
    InputVar, Level, LinguisticVariable, Steer, Term, TermTable, INPUT_UNIVERSE, OUTPUT_NAME,
    OUTPUT_UNIVERSE,
};

use std::fmt::Write as _;

use thiserror::Error;

use crate::features::FeatureVector;

/// Text of the shipped rule base.
pub const DEFAULT_RULES: &str = include_str!("../../assets/default.rules");

/// Default rules with membership parameters tuned on the bundled scenarios.
pub const TUNED_RULES: &str = include_str!("../../assets/tuned.rules");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FisError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown variable {name:?}")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: unknown term {term:?} for variable {variable}")]
    UnknownTerm {
        line: usize,
        variable: String,
        term: String,
    },
    #[error("line {line}: rule has no antecedent")]
    EmptyAntecedent { line: usize },
    #[error("{variable} = {value} lies outside its universe [0.1, 1.0]")]
    OutOfUniverse { variable: &'static str, value: f64 },
}

/// The 13-rule default rule base.
pub fn default_rulebase() -> RuleBase {
    parse_rulebase(DEFAULT_RULES).expect("shipped rule base parses")
}

/// Rule base plus the membership parameters it is evaluated with.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyController {
    pub rules: RuleBase,
    pub terms: TermTable,
}

impl Default for FuzzyController {
    fn default() -> Self {
        Self::new(default_rulebase(), TermTable::default())
    }
}

impl FuzzyController {
    /// The bundled tuned controller.
    pub fn tuned() -> Self {
        parse_controller(TUNED_RULES).expect("bundled tuned rules parse")
    }

    pub fn new(rules: RuleBase, terms: TermTable) -> Self {
        Self { rules, terms }
    }

    pub fn infer(&self, x: &FeatureVector) -> Result<InferenceResult, FisError> {
        infer(&self.rules, &self.terms, x)
    }

    /// Full DSL text: every term parameter followed by the rules.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for var in InputVar::ALL {
            for level in Level::ALL {
                let _ = writeln!(
                    out,
                    "term.{var}.{} = {}",
                    var.term_name(level),
                    self.terms.input(var, level)
                );
            }
        }
        for s in Steer::ALL {
            let _ = writeln!(out, "term.{OUTPUT_NAME}.{s} = {}", self.terms.output(s));
        }
        out.push('\n');
        out.push_str(&self.rules.to_string());
        out
    }
}
