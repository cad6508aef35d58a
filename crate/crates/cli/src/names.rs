//! Parsers for method, rule and weight-sequence names given on the command
//! line.
//!
//! Weight sequences are either a family name (`pav`, `cc`, `topk`,
//! `penrose`, `harmonic-odd`, `affine(Z)`, `t-best(t)`, `t-median(t)`,
//! optionally truncated as `base[t]`) or an explicit prefix such as
//! `1,1/2,1/3;tail=0`. Every `Display` form of a weight sequence parses back
//! to the same sequence.

use std::str::FromStr;

use apportion_core::{DivisorSequence, Rational, Rule, WeightSequence};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct NameError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, NameError> {
    Err(NameError(msg.into()))
}

pub fn parse_rational(s: &str) -> Result<Rational, NameError> {
    let s = s.trim();
    Rational::from_str(s).or_else(|_| err(format!("not a rational number: {s:?}")))
}

pub fn parse_rationals(s: &str) -> Result<Vec<Rational>, NameError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// Comma-separated non-negative integers.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, NameError> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .or_else(|_| err(format!("not a non-negative integer: {:?}", item.trim())))
        })
        .collect()
}

fn parenthesized<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

fn parse_count(s: &str) -> Result<usize, NameError> {
    s.trim().parse().or_else(|_| err(format!("not a count: {s:?}")))
}

pub fn parse_weights(text: &str) -> Result<WeightSequence, NameError> {
    let text = text.trim();
    if let Some(body) = text.strip_suffix(']') {
        if let Some(open) = body.rfind('[') {
            let base = parse_weights(&body[..open])?;
            return Ok(WeightSequence::truncated(base, parse_count(&body[open + 1..])?));
        }
    }
    if let Some(z) = parenthesized(text, "affine") {
        return WeightSequence::affine(parse_rational(z)?).map_err(|e| NameError(e.to_string()));
    }
    if let Some(t) = parenthesized(text, "t-best") {
        return Ok(WeightSequence::t_best(parse_count(t)?));
    }
    if let Some(t) = parenthesized(text, "t-median") {
        let t = parse_count(t)?;
        if t == 0 {
            return err("t-median needs t >= 1");
        }
        return Ok(WeightSequence::t_median(t));
    }
    match text {
        "pav" => return Ok(WeightSequence::Pav),
        "cc" => return Ok(WeightSequence::ChamberlinCourant),
        "topk" | "top-k" => return Ok(WeightSequence::TopK),
        "penrose" => return Ok(WeightSequence::Penrose),
        "harmonic-odd" => return Ok(WeightSequence::HarmonicOdd),
        _ => {}
    }
    if !text.starts_with(|c: char| c.is_ascii_digit() || c == ';') {
        return err(format!("unknown weight sequence: {text:?}"));
    }
    let (prefix, tail) = match text.split_once(';') {
        Some((prefix, rest)) => {
            let Some(tail) = rest.trim().strip_prefix("tail=") else {
                return err(format!("expected ';tail=<rational>' in {text:?}"));
            };
            (prefix, parse_rational(tail)?)
        }
        None => (text, Rational::zero()),
    };
    WeightSequence::explicit(parse_rationals(prefix)?, tail).map_err(|e| NameError(e.to_string()))
}

/// An apportionment method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Divisor { name: String, divisors: DivisorSequence },
    LargestRemainder,
}

impl Method {
    pub fn name(&self) -> &str {
        match self {
            Method::Divisor { name, .. } => name,
            Method::LargestRemainder => "largest-remainder",
        }
    }
}

/// `dhondt`, `sainte-lague`, `adams`, `largest-remainder`,
/// `divisor:from-weights:<weights>`, or
/// `divisor:<d0,d1,...>[;slope=<r>][;intercept=<r>]`. A leading zero divisor
/// makes the method impervious.
pub fn parse_method(text: &str) -> Result<Method, NameError> {
    let text = text.trim();
    let divisor = |divisors| {
        Ok(Method::Divisor {
            name: text.to_string(),
            divisors,
        })
    };
    match text {
        "dhondt" | "d'hondt" | "jefferson" => return divisor(DivisorSequence::dhondt()),
        "sainte-lague" | "webster" => return divisor(DivisorSequence::sainte_lague()),
        "adams" => return divisor(DivisorSequence::adams()),
        "largest-remainder" | "hamilton" => return Ok(Method::LargestRemainder),
        _ => {}
    }
    let Some(body) = text.strip_prefix("divisor:") else {
        return err(format!("unknown method: {text:?}"));
    };
    if let Some(w) = body.strip_prefix("from-weights:") {
        return divisor(DivisorSequence::from_weights(parse_weights(w)?));
    }
    let mut parts = body.split(';');
    let prefix = parse_rationals(parts.next().unwrap_or_default())?;
    let (mut slope, mut intercept) = (None, None);
    for part in parts {
        match part.trim().split_once('=') {
            Some(("slope", r)) => slope = Some(parse_rational(r)?),
            Some(("intercept", r)) => intercept = Some(parse_rational(r)?),
            _ => return err(format!("unexpected divisor option {part:?}")),
        }
    }
    if prefix.is_empty() && slope.is_none() {
        return err("a divisor sequence needs a prefix or a slope");
    }
    let impervious = prefix.first().is_some_and(Zero::is_zero);
    // without a slope the last listed divisor repeats
    let (slope, intercept) = match (slope, intercept) {
        (Some(s), i) => (s, i.unwrap_or_else(Rational::zero)),
        (None, Some(i)) => (Rational::zero(), i),
        (None, None) => (Rational::zero(), prefix.last().cloned().unwrap_or_else(Rational::zero)),
    };
    divisor(DivisorSequence::explicit(prefix, slope, intercept).with_impervious(impervious))
}

/// `pav`, `cc`, `topk`, `seq-pav`, `seq-cc`, `seq-topk`, `owa:<weights>`,
/// `seq-owa:<weights>`, `monroe`, `max-phragmen`, `var-phragmen`, `sav`,
/// `mav`.
pub fn parse_rule(text: &str) -> Result<Rule, NameError> {
    let text = text.trim();
    if let Some(w) = text.strip_prefix("seq-owa:") {
        return Ok(Rule::SeqOwa(parse_weights(w)?));
    }
    if let Some(w) = text.strip_prefix("owa:") {
        return Ok(Rule::Owa(parse_weights(w)?));
    }
    Ok(match text {
        "pav" => Rule::Owa(WeightSequence::Pav),
        "cc" => Rule::Owa(WeightSequence::ChamberlinCourant),
        "topk" | "top-k" => Rule::Owa(WeightSequence::TopK),
        "seq-pav" => Rule::SeqOwa(WeightSequence::Pav),
        "seq-cc" => Rule::SeqOwa(WeightSequence::ChamberlinCourant),
        "seq-topk" => Rule::SeqOwa(WeightSequence::TopK),
        "monroe" => Rule::Monroe,
        "max-phragmen" => Rule::MaxPhragmen,
        "var-phragmen" => Rule::VarPhragmen,
        "sav" => Rule::Sav,
        "mav" => Rule::Mav,
        _ => return err(format!("unknown rule: {text:?}")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use apportion_core::rational::{int, ratio};

    #[test]
    fn weight_families() {
        assert_eq!(parse_weights("pav").unwrap(), WeightSequence::Pav);
        assert_eq!(
            parse_weights("pav[2]").unwrap(),
            WeightSequence::truncated(WeightSequence::Pav, 2)
        );
        assert_eq!(
            parse_weights("affine(31)").unwrap(),
            WeightSequence::affine(int(31)).unwrap()
        );
        assert_eq!(parse_weights("t-best(2)").unwrap(), WeightSequence::t_best(2));
        assert!(parse_weights("t-median(0)").is_err());
        assert!(parse_weights("bogus").is_err());
    }

    #[test]
    fn explicit_weights() {
        assert_eq!(
            parse_weights("1,1/2;tail=1/4").unwrap(),
            WeightSequence::explicit(vec![int(1), ratio(1, 2)], ratio(1, 4)).unwrap()
        );
        assert_eq!(
            parse_weights("3,2").unwrap(),
            WeightSequence::explicit(vec![int(3), int(2)], int(0)).unwrap()
        );
        assert!(parse_weights("1,-1").is_err());
        assert!(parse_weights("1;rest=2").is_err());
    }

    #[test]
    fn display_round_trips() {
        for w in [
            WeightSequence::Pav,
            WeightSequence::HarmonicOdd,
            WeightSequence::affine(ratio(7, 2)).unwrap(),
            WeightSequence::truncated(WeightSequence::Penrose, 3),
            WeightSequence::truncated(WeightSequence::truncated(WeightSequence::Pav, 1), 2),
            WeightSequence::explicit(vec![int(1), ratio(1, 3)], ratio(1, 9)).unwrap(),
            WeightSequence::explicit(vec![], int(1)).unwrap(),
        ] {
            assert_eq!(parse_weights(&w.to_string()).unwrap(), w, "{w}");
        }
    }

    #[test]
    fn methods() {
        assert_eq!(parse_method("largest-remainder").unwrap(), Method::LargestRemainder);
        let Method::Divisor { divisors, .. } = parse_method("divisor:1,3;slope=2;intercept=1").unwrap() else {
            panic!()
        };
        assert_eq!(divisors.divisor_at(4).unwrap(), int(9));
        let Method::Divisor { divisors, .. } = parse_method("divisor:0,1;slope=1").unwrap() else {
            panic!()
        };
        assert!(divisors.impervious);
        let Method::Divisor { divisors, .. } = parse_method("divisor:from-weights:pav").unwrap() else {
            panic!()
        };
        assert_eq!(divisors.divisor_at(2).unwrap(), int(3));
        assert!(parse_method("divisor:").is_err());
        assert!(parse_method("plurality").is_err());
    }

    #[test]
    fn rules() {
        assert_eq!(parse_rule("seq-pav").unwrap(), Rule::SeqOwa(WeightSequence::Pav));
        assert_eq!(
            parse_rule("owa:harmonic-odd").unwrap(),
            Rule::Owa(WeightSequence::HarmonicOdd)
        );
        for r in ["monroe", "max-phragmen", "var-phragmen", "sav", "mav", "owa:pav[1]", "seq-owa:cc"] {
            assert_eq!(parse_rule(r).unwrap().to_string(), r);
        }
        assert!(parse_rule("stv").is_err());
    }
}
