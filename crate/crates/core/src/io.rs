//! Text formats: CA table files, local rule files and generator files.
//!
//! A table file has the header line `n q` followed by the `q^n` image
//! indices; a local rule file has the same header followed by the `q^n`
//! rule values. A generator file lists one automaton per line, either as an
//! image table or in cycle/arrow notation on configuration labels:
//!
//! ```text
//! # comments and blank lines are skipped
//! (1,2,4)(0,7)
//! ({1,2,4} -> 0)
//! (1 → 6)(2 → 5)(4 → 3)
//! 0 2 1 3
//! ```
//!
//! A cycle `(a,b,c)` sends `a` to `b`, `b` to `c` and `c` to `a`; an arrow
//! `(X → y)` sends every label in `X` to `y`. Unmentioned labels are fixed
//! and the factors of a line are applied left to right.

use crate::automaton::{CellularAutomaton, LocalRule, Params};
use crate::error::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_error(line, format!("expected an integer, found {t:?}")))
        })
        .collect()
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: usize, text: &str) -> Result<Params> {
    match parse_numbers(text, line)?.as_slice() {
        &[n, q] => Params::new(n as usize, q as usize),
        _ => Err(parse_error(line, "header must be \"n q\"")),
    }
}

fn header_and_body(text: &str) -> Result<(Params, usize, Vec<u64>)> {
    let mut lines = content_lines(text);
    let (h, header) = lines.next().ok_or_else(|| parse_error(1, "empty file"))?;
    let params = parse_header(h, header)?;
    let (b, body) = lines
        .next()
        .ok_or_else(|| parse_error(h + 1, "missing table line"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(parse_error(extra, "unexpected content after the table"));
    }
    Ok((params, b, parse_numbers(body, b)?))
}

fn to_u32(values: Vec<u64>, line: usize) -> Result<Vec<u32>> {
    values
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| parse_error(line, format!("{v} is too large"))))
        .collect()
}

pub fn read_ca_table(text: &str) -> Result<CellularAutomaton> {
    let (params, line, values) = header_and_body(text)?;
    CellularAutomaton::from_table(params, to_u32(values, line)?)
}

pub fn write_ca_table(ca: &CellularAutomaton) -> String {
    format!("{} {}\n{}\n", ca.params().n(), ca.params().q(), ca)
}

pub fn read_local_rule(text: &str) -> Result<LocalRule> {
    let (params, line, values) = header_and_body(text)?;
    LocalRule::new(params, to_u32(values, line)?)
}

pub fn write_local_rule(rule: &LocalRule) -> String {
    let body: Vec<String> = rule.table().iter().map(u32::to_string).collect();
    format!(
        "{} {}\n{}\n",
        rule.params().n(),
        rule.params().q(),
        body.join(" ")
    )
}

/// One generator in table form or cycle/arrow notation.
pub fn parse_generator(text: &str, params: &Params) -> Result<CellularAutomaton> {
    parse_generator_at(text, params, 1)
}

fn parse_generator_at(text: &str, params: &Params, line: usize) -> Result<CellularAutomaton> {
    let text = text.trim();
    let images = if text.starts_with('(') || text == "id" {
        parse_notation(text, params, line)?
    } else {
        to_u32(parse_numbers(text, line)?, line)?
    };
    CellularAutomaton::from_table(*params, images).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => parse_error(line, other.to_string()),
    })
}

/// Every generator in a file. An optional leading `n q` header must agree
/// with `params`.
pub fn read_generators(text: &str, params: &Params) -> Result<Vec<CellularAutomaton>> {
    let mut out = Vec::new();
    for (i, (line, content)) in content_lines(text).enumerate() {
        let numbers = content.split_whitespace().count();
        if i == 0 && numbers == 2 && !content.starts_with('(') {
            let header = parse_header(line, content)?;
            if &header != params {
                return Err(parse_error(
                    line,
                    format!("file is for {header}, expected {params}"),
                ));
            }
            continue;
        }
        out.push(parse_generator_at(content, params, line)?);
    }
    if out.is_empty() {
        return Err(parse_error(1, "no generators found"));
    }
    Ok(out)
}

pub fn write_generators(gens: &[CellularAutomaton]) -> String {
    let mut out = String::new();
    if let Some(first) = gens.first() {
        out.push_str(&format!("{} {}\n", first.params().n(), first.params().q()));
    }
    for g in gens {
        out.push_str(&format!("{g}\n"));
    }
    out
}

fn parse_label(token: &str, params: &Params, line: usize) -> Result<u32> {
    let value: u64 = token
        .trim()
        .parse()
        .map_err(|_| parse_error(line, format!("expected a label, found {:?}", token.trim())))?;
    if value >= params.states() as u64 {
        return Err(parse_error(
            line,
            format!("label {value} out of range for {params}"),
        ));
    }
    Ok(value as u32)
}

fn parse_notation(text: &str, params: &Params, line: usize) -> Result<Vec<u32>> {
    let mut table: Vec<u32> = (0..params.states() as u32).collect();
    if text == "id" {
        return Ok(table);
    }
    let mut rest = text;
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| parse_error(line, format!("expected '(' at {rest:?}")))?;
        let close = body_start
            .find(')')
            .ok_or_else(|| parse_error(line, "unbalanced parenthesis"))?;
        let factor = factor_table(&body_start[..close], params, line)?;
        // right action: apply the earlier factors first
        table = table.iter().map(|&c| factor[c as usize]).collect();
        rest = body_start[close + 1..].trim_start();
    }
    Ok(table)
}

fn factor_table(body: &str, params: &Params, line: usize) -> Result<Vec<u32>> {
    let mut table: Vec<u32> = (0..params.states() as u32).collect();
    let arrow = body
        .find('→')
        .map(|i| (i, '→'.len_utf8()))
        .or_else(|| body.find("->").map(|i| (i, 2)));
    if let Some((at, width)) = arrow {
        let (lhs, rhs) = (body[..at].trim(), &body[at + width..]);
        let target = parse_label(rhs, params, line)?;
        let sources = match lhs.strip_prefix('{') {
            Some(inner) => inner
                .strip_suffix('}')
                .ok_or_else(|| parse_error(line, "unbalanced brace"))?
                .split(',')
                .map(|t| parse_label(t, params, line))
                .collect::<Result<Vec<_>>>()?,
            None => vec![parse_label(lhs, params, line)?],
        };
        for s in sources {
            table[s as usize] = target;
        }
        return Ok(table);
    }
    if body.trim().is_empty() {
        return Ok(table);
    }
    let points = body
        .split(',')
        .map(|t| parse_label(t, params, line))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = std::collections::HashSet::new();
    if let Some(p) = points.iter().find(|p| !seen.insert(**p)) {
        return Err(parse_error(line, format!("label {p} repeated in a cycle")));
    }
    for (k, &p) in points.iter().enumerate() {
        table[p as usize] = points[(k + 1) % points.len()];
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::GeneratorSet;
    use crate::rank::idempotent_tau_anchored;
    use crate::Configuration;

    fn p(n: usize, q: usize) -> Params {
        Params::new(n, q).unwrap()
    }

    #[test]
    fn table_round_trip() {
        let shift = CellularAutomaton::shift(p(2, 2));
        let text = write_ca_table(&shift);
        assert_eq!(text, "2 2\n0 2 1 3\n");
        assert_eq!(read_ca_table(&text).unwrap(), shift);
    }

    #[test]
    fn table_validation() {
        assert!(matches!(read_ca_table(""), Err(Error::Parse { .. })));
        assert!(matches!(
            read_ca_table("2 2\n0 2 1"),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            read_ca_table("2 2\n0 0 2 3"),
            Err(Error::NotACellularAutomaton { .. })
        ));
        assert!(matches!(
            read_ca_table("2 2\n0 2 x 3"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_ca_table("2\n0 2 1 3"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_ca_table("2 2\n0 2 1 3\n0"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn local_rule_round_trip() {
        let params = p(3, 2);
        let rule = CellularAutomaton::shift(params).to_local_rule();
        let text = write_local_rule(&rule);
        assert_eq!(read_local_rule(&text).unwrap(), rule);
        assert!(read_local_rule("2 2\n0 1 2 1").is_err());
    }

    #[test]
    fn notation_n2() {
        let params = p(2, 2);
        let gens = read_generators("(1,2)\n({1,2} → 0)\n(0,3)\n(3 -> 0)\n", &params).unwrap();
        assert_eq!(gens[0], CellularAutomaton::shift(params));
        assert_eq!(gens[1].images(), &[0, 0, 0, 3]);
        assert_eq!(gens[2].images(), &[3, 1, 2, 0]);
        assert_eq!(gens[3].images(), &[0, 1, 2, 0]);
        assert!(GeneratorSet::new(params, gens)
            .unwrap()
            .is_generating(1 << 20)
            .unwrap());
    }

    #[test]
    fn notation_n3() {
        let params = p(3, 2);
        let text = "# the five generators\n\
                    (1,2,4)(0,7)\n\
                    (1,6)(2,5)(3,4)\n\
                    \n\
                    (1 → 6)(2 → 5)(4 → 3)\n\
                    ({1,2,4} → 0)\n\
                    (7 → 0)\n";
        let gens = read_generators(text, &params).unwrap();
        assert_eq!(gens.len(), 5);
        assert_eq!(gens[0].images(), &[7, 2, 4, 3, 1, 5, 6, 0]);
        assert_eq!(
            gens[2],
            idempotent_tau_anchored(&params, Configuration(1), Configuration(6)).unwrap()
        );
        assert!(gens[1].is_invertible());
        assert!(gens[4].is_idempotent());
    }

    #[test]
    fn left_to_right_factors() {
        let params = p(2, 2);
        // 1 -> 2 by the first factor, then 2 -> 0 by the second
        let g = parse_generator("(1,2)({1,2} -> 0)", &params).unwrap();
        assert_eq!(g.images(), &[0, 0, 0, 3]);
        assert_eq!(
            parse_generator("id", &params).unwrap(),
            CellularAutomaton::identity(params)
        );
        assert_eq!(
            parse_generator("()", &params).unwrap(),
            CellularAutomaton::identity(params)
        );
    }

    #[test]
    fn notation_errors() {
        let params = p(2, 2);
        for bad in [
            "(1 → 0)",
            "(1,2",
            "(1,9)",
            "({1,2 → 0)",
            "(a,b)",
            "(1,1)",
            "1,2",
        ] {
            assert!(
                matches!(parse_generator(bad, &params), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
        assert!(matches!(
            read_generators("3 2\n(1,2)", &params),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_generators("# nothing\n", &params),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_generators("(1,2)\n(1 → 0)\n", &params),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn generator_file_round_trip() {
        let params = p(2, 3);
        let gens = crate::rank::standard_generating_set(&params).unwrap();
        let text = write_generators(&gens);
        assert_eq!(read_generators(&text, &params).unwrap(), gens);
    }
}
