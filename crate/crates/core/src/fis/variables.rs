use std::fmt;
use std::str::FromStr;

use super::membership::MembershipFunction;
use super::FisError;

/// One of the six controller inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputVar {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
}

impl InputVar {
    pub const ALL: [InputVar; 6] = [
        InputVar::X1,
        InputVar::X2,
        InputVar::X3,
        InputVar::X4,
        InputVar::X5,
        InputVar::X6,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        ["x1", "x2", "x3", "x4", "x5", "x6"][self.index()]
    }

    /// Area inputs use Small/Medium/Large, location inputs Left/Center/Right.
    pub fn is_location(self) -> bool {
        matches!(self, InputVar::X5 | InputVar::X6)
    }

    pub fn term_names(self) -> [&'static str; 3] {
        if self.is_location() {
            ["Left", "Center", "Right"]
        } else {
            ["Small", "Medium", "Large"]
        }
    }

    pub fn term_name(self, level: Level) -> &'static str {
        self.term_names()[level.index()]
    }

    pub fn parse_term(self, name: &str) -> Option<Level> {
        self.term_names()
            .iter()
            .position(|&t| t == name)
            .map(|i| Level::ALL[i])
    }

    /// Left-right mirror partner (x1<->x2, x3<->x4, x5 and x6 fixed).
    pub fn mirrored(self) -> Self {
        match self {
            InputVar::X1 => InputVar::X2,
            InputVar::X2 => InputVar::X1,
            InputVar::X3 => InputVar::X4,
            InputVar::X4 => InputVar::X3,
            v => v,
        }
    }
}

impl fmt::Display for InputVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputVar {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or(())
    }
}

/// Position of a term within its variable's ordered term set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Low,
    Mid,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Mid, Level::High];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn flipped(self) -> Self {
        match self {
            Level::Low => Level::High,
            Level::Mid => Level::Mid,
            Level::High => Level::Low,
        }
    }
}

/// Output term of the steering variable `y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Steer {
    TurnLeft,
    GoStraight,
    TurnRight,
}

impl Steer {
    pub const ALL: [Steer; 3] = [Steer::TurnLeft, Steer::GoStraight, Steer::TurnRight];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["TurnLeft", "GoStraight", "TurnRight"][self.index()]
    }

    pub fn mirrored(self) -> Self {
        match self {
            Steer::TurnLeft => Steer::TurnRight,
            Steer::GoStraight => Steer::GoStraight,
            Steer::TurnRight => Steer::TurnLeft,
        }
    }
}

impl fmt::Display for Steer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Steer {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|t| t.name() == s).ok_or(())
    }
}

pub const OUTPUT_NAME: &str = "y1";
pub const INPUT_UNIVERSE: (f64, f64) = (0.1, 1.0);
pub const OUTPUT_UNIVERSE: (f64, f64) = (0.0, 180.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: &'static str,
    pub shape: MembershipFunction,
}

/// A named variable with a closed universe and three ordered terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    pub name: &'static str,
    pub universe: (f64, f64),
    pub terms: [Term; 3],
}

impl LinguisticVariable {
    pub fn contains(&self, x: f64) -> bool {
        (self.universe.0..=self.universe.1).contains(&x)
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }
}

/// Membership parameters for every input and output term.
#[derive(Debug, Clone, PartialEq)]
pub struct TermTable {
    inputs: [[MembershipFunction; 3]; 6],
    output: [MembershipFunction; 3],
}

impl Default for TermTable {
    /// Gaussian inputs centered at 0.1 / 0.55 / 1.0 with sigma 0.19; pi-shaped
    /// outputs centered at 30 / 90 / 150 with half-width 60.
    fn default() -> Self {
        let input = [0.1, 0.55, 1.0].map(|c| MembershipFunction::Gaussian { sigma: 0.19, c });
        let output = [30.0, 90.0, 150.0].map(|c| MembershipFunction::Pi { b: 60.0, c });
        Self {
            inputs: [input; 6],
            output,
        }
    }
}

impl TermTable {
    pub fn input(&self, var: InputVar, level: Level) -> MembershipFunction {
        self.inputs[var.index()][level.index()]
    }

    pub fn output(&self, steer: Steer) -> MembershipFunction {
        self.output[steer.index()]
    }

    pub fn set_input(
        &mut self,
        var: InputVar,
        level: Level,
        shape: MembershipFunction,
    ) -> Result<(), FisError> {
        check_term(var.name(), var.term_name(level), shape, INPUT_UNIVERSE)?;
        self.inputs[var.index()][level.index()] = shape;
        Ok(())
    }

    pub fn set_output(&mut self, steer: Steer, shape: MembershipFunction) -> Result<(), FisError> {
        check_term(OUTPUT_NAME, steer.name(), shape, OUTPUT_UNIVERSE)?;
        self.output[steer.index()] = shape;
        Ok(())
    }

    pub fn input_variable(&self, var: InputVar) -> LinguisticVariable {
        let names = var.term_names();
        LinguisticVariable {
            name: var.name(),
            universe: INPUT_UNIVERSE,
            terms: Level::ALL.map(|l| Term {
                name: names[l.index()],
                shape: self.input(var, l),
            }),
        }
    }

    pub fn output_variable(&self) -> LinguisticVariable {
        LinguisticVariable {
            name: OUTPUT_NAME,
            universe: OUTPUT_UNIVERSE,
            terms: Steer::ALL.map(|s| Term {
                name: s.name(),
                shape: self.output(s),
            }),
        }
    }

    /// Largest absolute difference between any pair of corresponding parameters.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self.inputs.iter().flatten().chain(&self.output);
        let b = other.inputs.iter().flatten().chain(&other.output);
        a.zip(b)
            .map(|(x, y)| {
                if std::mem::discriminant(x) != std::mem::discriminant(y) {
                    f64::INFINITY
                } else {
                    (x.center() - y.center()).abs().max((x.width() - y.width()).abs())
                }
            })
            .fold(0.0, f64::max)
    }

    /// Reflects the table left-right: swaps paired area inputs, reflects the
    /// location inputs about the universe midpoint and the output about 90.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        for var in InputVar::ALL {
            for level in Level::ALL {
                let src = if var.is_location() {
                    let s = self.input(var, level.flipped());
                    s.with_center(INPUT_UNIVERSE.0 + INPUT_UNIVERSE.1 - s.center())
                } else {
                    self.input(var.mirrored(), level)
                };
                out.inputs[var.index()][level.index()] = src;
            }
        }
        for s in Steer::ALL {
            let src = self.output(s.mirrored());
            out.output[s.index()] = src.with_center(OUTPUT_UNIVERSE.1 - src.center());
        }
        out
    }
}

fn check_term(
    var: &str,
    term: &str,
    shape: MembershipFunction,
    universe: (f64, f64),
) -> Result<(), FisError> {
    shape.validate()?;
    let c = shape.center();
    if !(universe.0..=universe.1).contains(&c) {
        return Err(FisError::InvalidParameter(format!(
            "center {c} of {var}.{term} lies outside [{}, {}]",
            universe.0, universe.1
        )));
    }
    Ok(())
}
