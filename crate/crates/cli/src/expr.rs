//! Tiny field-expression grammar for config values:
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := number | [number '*'] x1 | [number '*'] x2
//!       | [number '*'] sin(number '*' pi '*' x1)   (same with x2)
//! ```
//!
//! Covers constants, affine tilts and sine modulations; anything richer is
//! out of scope on purpose.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
enum Term {
    Const(f64),
    Linear { coeff: f64, axis: usize },
    Sine { coeff: f64, freq: f64, axis: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldExpr {
    terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError(pub String);

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FieldExpr {
    pub fn parse(input: &str) -> Result<Self, ExprError> {
        let mut terms = Vec::new();
        for (sign, chunk) in split_terms(input)? {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(ExprError(format!("empty term in expression '{input}'")));
            }
            let mut term = parse_term(chunk)?;
            if sign < 0.0 {
                term = match term {
                    Term::Const(c) => Term::Const(-c),
                    Term::Linear { coeff, axis } => Term::Linear {
                        coeff: -coeff,
                        axis,
                    },
                    Term::Sine { coeff, freq, axis } => Term::Sine {
                        coeff: -coeff,
                        freq,
                        axis,
                    },
                };
            }
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(ExprError(format!("empty expression '{input}'")));
        }
        Ok(FieldExpr { terms })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for term in &self.terms {
            acc += match *term {
                Term::Const(c) => c,
                Term::Linear { coeff, axis } => coeff * x.get(axis).copied().unwrap_or(0.0),
                Term::Sine { coeff, freq, axis } => {
                    coeff
                        * (freq * std::f64::consts::PI * x.get(axis).copied().unwrap_or(0.0))
                            .sin()
                }
            };
        }
        acc
    }
}

/// Split at top-level `+`/`-`, keeping signs; `e`/`E` exponents and
/// parenthesized arguments are kept intact.
fn split_terms(input: &str) -> Result<Vec<(f64, String)>, ExprError> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut sign = 1.0f64;
    let mut depth = 0usize;
    let mut prev: Option<char> = None;
    for ch in input.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                if depth == 0 {
                    return Err(ExprError(format!("unbalanced ')' in '{input}'")));
                }
                depth -= 1;
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                let exponent_sign = matches!(prev, Some('e') | Some('E'));
                if exponent_sign {
                    current.push(ch);
                } else if out.is_empty() && current.trim().is_empty() {
                    // unary sign at the very start
                    if ch == '-' {
                        sign = -sign;
                    }
                    current.clear();
                } else {
                    out.push((sign, std::mem::take(&mut current)));
                    sign = if ch == '-' { -1.0 } else { 1.0 };
                }
            }
            _ => current.push(ch),
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(ExprError(format!("unbalanced '(' in '{input}'")));
    }
    out.push((sign, current));
    Ok(out)
}

fn parse_axis(token: &str) -> Result<usize, ExprError> {
    match token.trim() {
        "x1" => Ok(0),
        "x2" => Ok(1),
        other => Err(ExprError(format!("expected x1 or x2, found '{other}'"))),
    }
}

fn parse_number(token: &str) -> Result<f64, ExprError> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| ExprError(format!("invalid number '{}'", token.trim())))
}

fn parse_term(chunk: &str) -> Result<Term, ExprError> {
    if let Some(open) = chunk.find("sin(") {
        let coeff = match chunk[..open].trim().trim_end_matches('*').trim() {
            "" => 1.0,
            num => parse_number(num)?,
        };
        let close = chunk
            .rfind(')')
            .ok_or_else(|| ExprError(format!("missing ')' in '{chunk}'")))?;
        let inner = &chunk[open + 4..close];
        let parts: Vec<&str> = inner.split('*').map(str::trim).collect();
        let (freq, axis) = match parts.as_slice() {
            [k, "pi", var] => (parse_number(k)?, parse_axis(var)?),
            ["pi", var] => (1.0, parse_axis(var)?),
            _ => {
                return Err(ExprError(format!(
                    "sine argument must be 'k*pi*x1' or 'k*pi*x2', found '{inner}'"
                )))
            }
        };
        if !chunk[close + 1..].trim().is_empty() {
            return Err(ExprError(format!("trailing input after ')' in '{chunk}'")));
        }
        return Ok(Term::Sine { coeff, freq, axis });
    }

    let parts: Vec<&str> = chunk.split('*').map(str::trim).collect();
    match parts.as_slice() {
        [single] => {
            if let Ok(axis) = parse_axis(single) {
                Ok(Term::Linear { coeff: 1.0, axis })
            } else {
                Ok(Term::Const(parse_number(single)?))
            }
        }
        [num, var] => Ok(Term::Linear {
            coeff: parse_number(num)?,
            axis: parse_axis(var)?,
        }),
        _ => Err(ExprError(format!("cannot parse term '{chunk}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_config_grammar() {
        let cases: Vec<(&str, Box<dyn Fn(&[f64]) -> f64>)> = vec![
            ("1.8", Box::new(|_| 1.8)),
            ("x1", Box::new(|x: &[f64]| x[0])),
            ("0.5*x2", Box::new(|x: &[f64]| 0.5 * x[1])),
            ("1.2 + 0.6*x1", Box::new(|x: &[f64]| 1.2 + 0.6 * x[0])),
            (
                "1.4 + 0.2*sin(2*pi*x1)",
                Box::new(|x: &[f64]| 1.4 + 0.2 * (2.0 * std::f64::consts::PI * x[0]).sin()),
            ),
            (
                "sin(pi*x2) - 0.1*x1",
                Box::new(|x: &[f64]| (std::f64::consts::PI * x[1]).sin() - 0.1 * x[0]),
            ),
            ("-0.5 + x1", Box::new(|x: &[f64]| -0.5 + x[0])),
            ("1e-3", Box::new(|_| 1e-3)),
            ("2.5e-2 + 1E2*x2", Box::new(|x: &[f64]| 2.5e-2 + 1e2 * x[1])),
        ];
        for (src, oracle) in cases {
            let expr = FieldExpr::parse(src).unwrap_or_else(|e| panic!("{src}: {e}"));
            for probe in [[0.0, 0.0], [0.3, 0.7], [1.0, 0.5]] {
                let got = expr.eval(&probe);
                let want = oracle(&probe);
                assert!(
                    (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                    "{src} at {probe:?}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn rejects_out_of_grammar_input() {
        for bad in [
            "",
            "x3",
            "sin(x1)",
            "sin(2*pi*x1",
            "x1*x2",
            "2**x1",
            "cos(pi*x1)",
            "1.2.3",
        ] {
            assert!(FieldExpr::parse(bad).is_err(), "'{bad}' should not parse");
        }
    }
}
