//! The built-in generator corpus used by the verification suites.

use crate::error::Result;
use crate::generator::{make_builtin, parse_generator, BuiltinFamily, Generator};
use crate::interval::Interval;

pub const EXP_RATES: [f64; 9] = [-20.0, -15.0, -5.0, -1.0, 0.0, 1.0, 5.0, 15.0, 20.0];
pub const POWER_EXPONENTS: [f64; 5] = [-1.0, 0.0, 1.0, 2.0, 3.0];
pub const EXPRESSIONS: [&str; 3] = ["x^3 + x", "ln(x) + x^2", "exp(2*x) - 3*x"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusSelector {
    /// Exponential family on `(0, 1)`.
    Exp,
    /// Powers and expressions on `[1, 2]`.
    Power,
    /// Both of the above.
    Default,
    /// Default plus the exponential family moved to `[1, 2]` and paired
    /// with the powers and expressions.
    All,
}

impl std::str::FromStr for CorpusSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exp" => Ok(Self::Exp),
            "power" => Ok(Self::Power),
            "default" => Ok(Self::Default),
            "all" => Ok(Self::All),
            other => Err(format!("unknown corpus '{other}' (expected default, exp, power or all)")),
        }
    }
}

/// Generators sharing a common interval.
#[derive(Debug, Clone)]
pub struct Group {
    pub interval: Interval,
    pub generators: Vec<Generator>,
}

pub fn exp_group(interval: Interval) -> Result<Group> {
    let generators =
        EXP_RATES.iter().map(|&s| make_builtin(&BuiltinFamily::Exp(s), interval)).collect::<Result<_>>()?;
    Ok(Group { interval, generators })
}

pub fn power_group() -> Result<Group> {
    let interval = Interval::closed(1.0, 2.0)?;
    let mut generators: Vec<Generator> =
        POWER_EXPONENTS.iter().map(|&s| make_builtin(&BuiltinFamily::Power(s), interval)).collect::<Result<_>>()?;
    for e in EXPRESSIONS {
        generators.push(parse_generator(e, interval)?);
    }
    Ok(Group { interval, generators })
}

/// A pair of generators and the interval they are compared on.
#[derive(Debug, Clone)]
pub struct Pair {
    pub f: Generator,
    pub g: Generator,
    pub interval: Interval,
}

fn pairs_within(group: &Group, out: &mut Vec<Pair>) {
    let gs = &group.generators;
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            out.push(Pair { f: gs[i].clone(), g: gs[j].clone(), interval: group.interval });
        }
    }
}

pub fn groups(selector: CorpusSelector) -> Result<Vec<Group>> {
    let unit = Interval::open(0.0, 1.0)?;
    Ok(match selector {
        CorpusSelector::Exp => vec![exp_group(unit)?],
        CorpusSelector::Power => vec![power_group()?],
        CorpusSelector::Default => vec![exp_group(unit)?, power_group()?],
        CorpusSelector::All => {
            let mut mixed = power_group()?;
            mixed.generators.extend(exp_group(mixed.interval)?.generators);
            vec![exp_group(unit)?, mixed]
        }
    })
}

pub fn pairs(selector: CorpusSelector) -> Result<Vec<Pair>> {
    let mut out = Vec::new();
    for g in groups(selector)? {
        pairs_within(&g, &mut out);
    }
    Ok(out)
}
