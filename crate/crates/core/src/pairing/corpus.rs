//! Text format of certificate collections.
//!
//! Entries are separated by blank lines. An entry is `n`, then `(a,b)` pairs
//! that may wrap onto indented continuation lines, then optional bare numbers
//! separated by commas or spaces. A bare number that the forced pairs can
//! isolate is an exclusion; any other bare number is the opening.

use std::fmt::Write as _;

use super::{can_isolate, PairingCertificate};
use crate::numset::NumSet;
use crate::{Error, Result};

/// The shipped certificate collection.
pub const CORPUS_TEXT: &str = include_str!("../../data/certificates.txt");

pub fn builtin_corpus() -> Result<Vec<PairingCertificate>> {
    parse_appendix(CORPUS_TEXT)
}

#[derive(Debug, PartialEq)]
enum Token {
    Pair(u32, u32),
    Number(u32),
    Comma,
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number(chars: &[char], i: &mut usize, line: usize) -> Result<u32> {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    if start == *i {
        return Err(parse_error(line, "expected a number"));
    }
    chars[start..*i].iter().collect::<String>().parse().map_err(|_| parse_error(line, "number too large"))
}

fn tokenize(text: &str, line: usize, out: &mut Vec<(usize, Token)>) -> Result<()> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == ',' {
            out.push((line, Token::Comma));
            i += 1;
        } else if c == '(' {
            i += 1;
            let a = number(&chars, &mut i, line)?;
            if chars.get(i) != Some(&',') {
                return Err(parse_error(line, "malformed pair: expected ','"));
            }
            i += 1;
            let b = number(&chars, &mut i, line)?;
            if chars.get(i) != Some(&')') {
                return Err(parse_error(line, "malformed pair: expected ')'"));
            }
            i += 1;
            out.push((line, Token::Pair(a, b)));
        } else if c.is_ascii_digit() {
            out.push((line, Token::Number(number(&chars, &mut i, line)?)));
        } else {
            return Err(parse_error(line, format!("unexpected character {c:?}")));
        }
    }
    Ok(())
}

fn parse_entry(tokens: Vec<(usize, Token)>) -> Result<PairingCertificate> {
    let mut it = tokens.into_iter();
    let (first_line, n) = match it.next() {
        Some((line, Token::Number(n))) if n >= 2 => (line, n),
        Some((line, _)) => return Err(parse_error(line, "entry must start with n >= 2")),
        None => unreachable!("entries are non-empty"),
    };
    let mut seen = NumSet::empty(n);
    let mut check = |line: usize, k: u32| -> Result<()> {
        if k < 1 || k > n {
            return Err(parse_error(line, format!("{k} is outside 1..={n}")));
        }
        if !seen.insert(k) {
            return Err(parse_error(line, format!("{k} appears twice")));
        }
        Ok(())
    };
    let mut pairs = Vec::new();
    let mut trailing: Vec<(usize, u32)> = Vec::new();
    let mut expect_number = false;
    for (line, tok) in it {
        match tok {
            Token::Pair(a, b) if trailing.is_empty() => {
                check(line, a)?;
                check(line, b)?;
                pairs.push((a, b));
            }
            Token::Pair(..) => return Err(parse_error(line, "pair after trailing numbers")),
            Token::Number(k) => {
                check(line, k)?;
                trailing.push((line, k));
                expect_number = false;
            }
            Token::Comma if !trailing.is_empty() && !expect_number => expect_number = true,
            Token::Comma => return Err(parse_error(line, "misplaced ','")),
        }
    }
    if expect_number {
        return Err(parse_error(first_line, "dangling ','"));
    }
    let mut first_move = None;
    let mut excluded = Vec::new();
    if !trailing.is_empty() {
        for (line, k) in trailing {
            if can_isolate(n, k)? {
                excluded.push(k);
            } else if first_move.replace(k).is_some() {
                return Err(parse_error(line, "more than one opening"));
            }
        }
    }
    Ok(PairingCertificate { n, pairs, first_move, excluded })
}

pub fn parse_appendix(text: &str) -> Result<Vec<PairingCertificate>> {
    let mut entries = Vec::new();
    let mut current: Vec<(usize, Token)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                entries.push(parse_entry(std::mem::take(&mut current))?);
            }
            continue;
        }
        tokenize(line, idx + 1, &mut current)?;
    }
    if !current.is_empty() {
        entries.push(parse_entry(current)?);
    }
    Ok(entries)
}

const PAIRS_PER_LINE: usize = 13;

pub fn render_certificate(cert: &PairingCertificate) -> String {
    let mut out = format!("{:<4}", cert.n);
    for (i, (a, b)) in cert.pairs.iter().enumerate() {
        if i > 0 && i % PAIRS_PER_LINE == 0 {
            out.push_str("\n    ");
        }
        let _ = write!(out, "({a},{b})");
    }
    let trailing: Vec<String> = cert.excluded.iter().chain(&cert.first_move).map(u32::to_string).collect();
    if !trailing.is_empty() {
        let _ = write!(out, " {}", trailing.join(","));
    }
    out
}

pub fn render_corpus(certs: &[PairingCertificate]) -> String {
    let mut out = certs.iter().map(render_certificate).collect::<Vec<_>>().join("\n\n");
    out.push('\n');
    out
}
