use std::fmt;

use super::variables::{InputVar, Level, Steer};
use super::FisError;

/// `IF <antecedents joined by AND> THEN y1 IS <consequent>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    antecedents: Vec<(InputVar, Level)>,
    consequent: Steer,
}

impl Rule {
    pub fn new(antecedents: Vec<(InputVar, Level)>, consequent: Steer) -> Result<Self, FisError> {
        if antecedents.is_empty() {
            return Err(FisError::EmptyAntecedent { line: 0 });
        }
        for (i, (var, _)) in antecedents.iter().enumerate() {
            if antecedents[..i].iter().any(|(v, _)| v == var) {
                return Err(FisError::Parse {
                    line: 0,
                    message: format!("variable {var} appears twice in one rule"),
                });
            }
        }
        Ok(Self {
            antecedents,
            consequent,
        })
    }

    pub fn antecedents(&self) -> &[(InputVar, Level)] {
        &self.antecedents
    }

    pub fn consequent(&self) -> Steer {
        self.consequent
    }

    pub fn mirrored(&self) -> Self {
        Self {
            antecedents: self
                .antecedents
                .iter()
                .map(|&(v, l)| {
                    if v.is_location() {
                        (v, l.flipped())
                    } else {
                        (v.mirrored(), l)
                    }
                })
                .collect(),
            consequent: self.consequent.mirrored(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("IF ")?;
        for (i, (var, level)) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{var} IS {}", var.term_name(*level))?;
        }
        write!(f, " THEN y1 IS {}", self.consequent)
    }
}

/// Ordered list of rules.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleBase {
    rules: Vec<Rule>,
}

impl RuleBase {
    pub fn new(rules: Vec<Rule>) -> Self {
        Self { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn mirrored(&self) -> Self {
        Self::new(self.rules.iter().map(Rule::mirrored).collect())
    }

    /// True when mirroring yields the same set of rules.
    pub fn is_mirror_symmetric(&self) -> bool {
        let mut a = self.rules.clone();
        let mut b = self.mirrored().rules;
        a.sort();
        b.sort();
        a == b
    }
}

/// One rule per line, in the DSL syntax.
impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_display() {
        let r = Rule::new(
            vec![(InputVar::X1, Level::High), (InputVar::X3, Level::High)],
            Steer::TurnLeft,
        )
        .unwrap();
        assert_eq!(r.to_string(), "IF x1 IS Large AND x3 IS Large THEN y1 IS TurnLeft");
        assert_eq!(
            r.mirrored().to_string(),
            "IF x2 IS Large AND x4 IS Large THEN y1 IS TurnRight"
        );
    }

    #[test]
    fn rule_validation() {
        assert!(matches!(
            Rule::new(vec![], Steer::GoStraight),
            Err(FisError::EmptyAntecedent { .. })
        ));
        assert!(Rule::new(
            vec![(InputVar::X5, Level::Low), (InputVar::X5, Level::High)],
            Steer::GoStraight
        )
        .is_err());
    }

    #[test]
    fn location_mirror_flips_side() {
        let r = Rule::new(vec![(InputVar::X5, Level::Low)], Steer::TurnLeft).unwrap();
        assert_eq!(r.mirrored().to_string(), "IF x5 IS Right THEN y1 IS TurnRight");
    }
}
