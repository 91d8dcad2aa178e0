//! Line-oriented rule language.
//!
//! ```text
//! # comment
//! IF x5 IS Left AND x6 IS Left THEN y1 IS TurnLeft
//! term.x5.Left = gaussian(0.19, 0.1)
//! term.y1.TurnRight = pi(60, 150)
//! ```

use super::membership::MembershipFunction;
use super::rules::{Rule, RuleBase};
use super::variables::{InputVar, Level, Steer, TermTable, OUTPUT_NAME};
use super::{FisError, FuzzyController};

pub fn parse_controller(text: &str) -> Result<FuzzyController, FisError> {
    let mut rules = Vec::new();
    let mut terms = TermTable::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("term.") {
            parse_term_override(line, line_no, &mut terms)?;
        } else {
            rules.push(parse_rule(line, line_no)?);
        }
    }
    Ok(FuzzyController::new(RuleBase::new(rules), terms))
}

/// Parses the rules of a DSL text. Term overrides are validated but dropped.
pub fn parse_rulebase(text: &str) -> Result<RuleBase, FisError> {
    Ok(parse_controller(text)?.rules)
}

fn parse_error(line: usize, message: impl Into<String>) -> FisError {
    FisError::Parse {
        line,
        message: message.into(),
    }
}

fn at_line(e: FisError, line: usize) -> FisError {
    match e {
        FisError::EmptyAntecedent { .. } => FisError::EmptyAntecedent { line },
        FisError::Parse { message, .. } => FisError::Parse { line, message },
        FisError::InvalidParameter(message) => FisError::Parse { line, message },
        other => other,
    }
}

fn parse_rule(line: &str, line_no: usize) -> Result<Rule, FisError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first() != Some(&"IF") {
        return Err(parse_error(line_no, format!("expected IF, found {:?}", tokens[0])));
    }
    let then = tokens
        .iter()
        .position(|&t| t == "THEN")
        .ok_or_else(|| parse_error(line_no, "missing THEN"))?;

    let body = &tokens[1..then];
    if body.is_empty() {
        return Err(FisError::EmptyAntecedent { line: line_no });
    }
    let mut antecedents = Vec::new();
    for (i, clause) in body.split(|&t| t == "AND").enumerate() {
        let (var_name, term) = match clause {
            [v, "IS", t] => (*v, *t),
            [] => {
                return Err(if i == 0 {
                    FisError::EmptyAntecedent { line: line_no }
                } else {
                    parse_error(line_no, "dangling AND")
                })
            }
            _ => {
                return Err(parse_error(
                    line_no,
                    format!("malformed clause {:?}", clause.join(" ")),
                ))
            }
        };
        let var: InputVar = var_name.parse().map_err(|_| FisError::UnknownVariable {
            line: line_no,
            name: var_name.to_string(),
        })?;
        let level = var.parse_term(term).ok_or_else(|| FisError::UnknownTerm {
            line: line_no,
            variable: var_name.to_string(),
            term: term.to_string(),
        })?;
        antecedents.push((var, level));
    }

    let consequent = match &tokens[then + 1..] {
        [v, "IS", t] => {
            if *v != OUTPUT_NAME {
                return Err(FisError::UnknownVariable {
                    line: line_no,
                    name: v.to_string(),
                });
            }
            t.parse::<Steer>().map_err(|_| FisError::UnknownTerm {
                line: line_no,
                variable: OUTPUT_NAME.to_string(),
                term: t.to_string(),
            })?
        }
        rest => {
            return Err(parse_error(
                line_no,
                format!("malformed consequent {:?}", rest.join(" ")),
            ))
        }
    };
    Rule::new(antecedents, consequent).map_err(|e| at_line(e, line_no))
}

fn parse_term_override(line: &str, line_no: usize, terms: &mut TermTable) -> Result<(), FisError> {
    let (key, value) = line
        .split_once('=')
        .ok_or_else(|| parse_error(line_no, "term override needs '='"))?;
    let key = key.trim();
    let parts: Vec<&str> = key.split('.').collect();
    let [_, var_name, term] = parts[..] else {
        return Err(parse_error(line_no, format!("bad term key {key:?}")));
    };
    let shape = parse_shape(value.trim()).map_err(|m| parse_error(line_no, m))?;

    if var_name == OUTPUT_NAME {
        let steer: Steer = term.parse().map_err(|_| FisError::UnknownTerm {
            line: line_no,
            variable: var_name.to_string(),
            term: term.to_string(),
        })?;
        terms
            .set_output(steer, shape)
            .map_err(|e| at_line(e, line_no))
    } else {
        let var: InputVar = var_name.parse().map_err(|_| FisError::UnknownVariable {
            line: line_no,
            name: var_name.to_string(),
        })?;
        let level: Level = var.parse_term(term).ok_or_else(|| FisError::UnknownTerm {
            line: line_no,
            variable: var_name.to_string(),
            term: term.to_string(),
        })?;
        terms
            .set_input(var, level, shape)
            .map_err(|e| at_line(e, line_no))
    }
}

fn parse_shape(text: &str) -> Result<MembershipFunction, String> {
    let open = text.find('(').ok_or("expected kind(params)")?;
    if !text.ends_with(')') {
        return Err("missing closing parenthesis".into());
    }
    let kind = text[..open].trim();
    let params: Vec<f64> = text[open + 1..text.len() - 1]
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number {:?}", p.trim())))
        .collect::<Result<_, _>>()?;
    let [width, center] = params[..] else {
        return Err(format!("{kind} takes 2 parameters, got {}", params.len()));
    };
    let shape = match kind {
        "gaussian" => MembershipFunction::gaussian(width, center),
        "pi" => MembershipFunction::pi(width, center),
        _ => return Err(format!("unknown membership kind {kind:?}")),
    };
    shape.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_rule() {
        let rb = parse_rulebase("IF x5 IS Right THEN y1 IS TurnRight").unwrap();
        assert_eq!(rb.len(), 1);
        assert_eq!(rb.rules()[0].antecedents().len(), 1);
        assert_eq!(rb.rules()[0].consequent(), Steer::TurnRight);
    }

    #[test]
    fn conjunction() {
        let rb = parse_rulebase("IF x1 IS Large AND x3 IS Large THEN y1 IS TurnLeft").unwrap();
        assert_eq!(
            rb.rules()[0].antecedents(),
            &[(InputVar::X1, Level::High), (InputVar::X3, Level::High)]
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n  IF x6 IS Left THEN y1 IS TurnLeft  # trailing\n";
        assert_eq!(parse_rulebase(text).unwrap().len(), 1);
    }

    #[test]
    fn unknown_variable_is_named() {
        let err = parse_rulebase("IF x9 IS Small THEN y1 IS TurnLeft").unwrap_err();
        assert_eq!(
            err,
            FisError::UnknownVariable {
                line: 1,
                name: "x9".into()
            }
        );
        assert!(err.to_string().contains("x9"));
    }

    #[test]
    fn error_cases_report_line() {
        let text = "IF x1 IS Small THEN y1 IS TurnLeft\nIF x1 IS Left THEN y1 IS TurnLeft";
        assert!(matches!(
            parse_rulebase(text),
            Err(FisError::UnknownTerm { line: 2, .. })
        ));
        assert!(matches!(
            parse_rulebase("IF THEN y1 IS TurnLeft"),
            Err(FisError::EmptyAntecedent { line: 1 })
        ));
        assert!(matches!(
            parse_rulebase("\nIF x1 IS Small y1 IS TurnLeft"),
            Err(FisError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_rulebase("IF x1 IS Small THEN y2 IS TurnLeft"),
            Err(FisError::UnknownVariable { .. })
        ));
        assert!(matches!(
            parse_rulebase("IF x1 IS Small THEN y1 IS Reverse"),
            Err(FisError::UnknownTerm { .. })
        ));
        assert!(matches!(
            parse_rulebase("IF x1 IS Small AND THEN y1 IS TurnLeft"),
            Err(FisError::Parse { .. })
        ));
        assert!(matches!(
            parse_rulebase("when x1 is small"),
            Err(FisError::Parse { .. })
        ));
    }

    #[test]
    fn term_overrides() {
        let c = parse_controller(
            "term.x5.Left = gaussian(0.25, 0.2)\nterm.y1.TurnRight = pi(40, 140)\n",
        )
        .unwrap();
        assert_eq!(
            c.terms.input(InputVar::X5, Level::Low),
            MembershipFunction::Gaussian { sigma: 0.25, c: 0.2 }
        );
        assert_eq!(
            c.terms.output(Steer::TurnRight),
            MembershipFunction::Pi { b: 40.0, c: 140.0 }
        );
        for bad in [
            "term.x5.Left = gaussian(0.25)",
            "term.x5.Left = gaussian(-1, 0.5)",
            "term.x5.Left = triangle(0.1, 0.2)",
            "term.x5.Left = gaussian(0.2, 1.5)",
            "term.x5 = gaussian(0.2, 0.5)",
        ] {
            assert!(matches!(parse_controller(bad), Err(FisError::Parse { line: 1, .. })), "{bad}");
        }
        assert!(matches!(
            parse_controller("term.x1.Left = gaussian(0.2, 0.5)"),
            Err(FisError::UnknownTerm { .. })
        ));
    }
}
