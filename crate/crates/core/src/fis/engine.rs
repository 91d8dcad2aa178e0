use super::rules::RuleBase;
use super::variables::{InputVar, TermTable, INPUT_UNIVERSE};
use super::FisError;
use crate::features::FeatureVector;

/// Set point returned when no rule fires.
pub const NO_FIRE_OUTPUT: f64 = 90.0;

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub firing_strengths: Vec<f64>,
    /// Steering set point in degrees, within `[0, 180]`.
    pub output: f64,
    pub no_fire: bool,
}

/// Firing strength of every rule: the minimum of its antecedent memberships.
pub fn fire_rules(rb: &RuleBase, terms: &TermTable, x: &FeatureVector) -> Vec<f64> {
    rb.rules()
        .iter()
        .map(|rule| {
            rule.antecedents()
                .iter()
                .map(|&(var, level)| terms.input(var, level).eval(x.values[var.index()]))
                .fold(1.0, f64::min)
        })
        .collect()
}

/// Weighted mean of consequent centers by firing strength. Returns
/// `(set point, no_fire)`.
pub fn defuzzify(alphas: &[f64], rb: &RuleBase, terms: &TermTable) -> (f64, bool) {
    let (num, den) = rb
        .rules()
        .iter()
        .zip(alphas)
        .fold((0.0, 0.0), |(num, den), (rule, &a)| {
            (num + terms.output(rule.consequent()).center() * a, den + a)
        });
    if den > 0.0 {
        (num / den, false)
    } else {
        (NO_FIRE_OUTPUT, true)
    }
}

pub fn check_inputs(x: &FeatureVector) -> Result<(), FisError> {
    for var in InputVar::ALL {
        let value = x.values[var.index()];
        if !(INPUT_UNIVERSE.0..=INPUT_UNIVERSE.1).contains(&value) {
            return Err(FisError::OutOfUniverse {
                variable: var.name(),
                value,
            });
        }
    }
    Ok(())
}

pub fn infer(rb: &RuleBase, terms: &TermTable, x: &FeatureVector) -> Result<InferenceResult, FisError> {
    check_inputs(x)?;
    let firing_strengths = fire_rules(rb, terms, x);
    let (output, no_fire) = defuzzify(&firing_strengths, rb, terms);
    Ok(InferenceResult {
        firing_strengths,
        output,
        no_fire,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fis::dsl::parse_rulebase;

    fn rb(text: &str) -> RuleBase {
        parse_rulebase(text).unwrap()
    }

    #[test]
    fn min_conjunction() {
        let terms = TermTable::default();
        let rules = rb("IF x5 IS Center AND x6 IS Center THEN y1 IS GoStraight\n\
                        IF x1 IS Small AND x5 IS Left THEN y1 IS TurnLeft");
        let x = FeatureVector::new(1, [0.1, 0.1, 0.1, 0.1, 0.55, 0.55]);
        let a = fire_rules(&rules, &terms, &x);
        assert_eq!(a[0], 1.0);
        // Left at 0.55 with sigma 0.19: exp(-0.2025 / 0.0722)
        assert!((a[1] - (-0.2025f64 / 0.0722).exp()).abs() < 1e-12);
    }

    #[test]
    fn min_of_two_memberships() {
        let terms = TermTable::default();
        let rules = rb("IF x1 IS Medium AND x2 IS Medium THEN y1 IS GoStraight");
        // solve for inputs giving memberships 0.3 and 0.8
        let at = |m: f64| 0.55 + 0.19 * (-2.0 * m.ln()).sqrt();
        let x = FeatureVector::new(1, [at(0.3), at(0.8), 0.1, 0.1, 0.55, 0.55]);
        assert!((fire_rules(&rules, &terms, &x)[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn defuzzify_examples() {
        let terms = TermTable::default();
        let one = rb("IF x1 IS Small THEN y1 IS TurnRight");
        let mut t = terms.clone();
        t.set_output(
            crate::fis::Steer::TurnRight,
            crate::fis::MembershipFunction::Pi { b: 60.0, c: 120.0 },
        )
        .unwrap();
        let (y, nf) = defuzzify(&[0.7], &one, &t);
        assert!((y - 120.0).abs() < 1e-12 && !nf);

        let two = rb("IF x1 IS Small THEN y1 IS TurnLeft\nIF x1 IS Large THEN y1 IS GoStraight");
        // 0.2 @ 30 and 0.6 @ 90: (6 + 54) / 0.8 = 75
        let (y, nf) = defuzzify(&[0.2, 0.6], &two, &terms);
        assert!((y - 75.0).abs() < 1e-12 && !nf);

        let sym = rb("IF x1 IS Small THEN y1 IS TurnLeft\nIF x1 IS Large THEN y1 IS TurnRight");
        assert_eq!(defuzzify(&[0.4, 0.4], &sym, &terms), (90.0, false));
        assert_eq!(defuzzify(&[0.0, 0.0], &sym, &terms), (90.0, true));
    }

    #[test]
    fn out_of_universe_rejected() {
        let x = FeatureVector::new(1, [1.5, 0.1, 0.1, 0.1, 0.55, 0.55]);
        let err = infer(&RuleBase::default(), &TermTable::default(), &x).unwrap_err();
        assert_eq!(err, FisError::OutOfUniverse { variable: "x1", value: 1.5 });
    }
}
