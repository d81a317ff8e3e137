//! Defining-polynomial parser and the line-oriented arrangement file format.
//!
//! A defining polynomial is a `*`-separated product of factors. A factor is
//! a variable, or a parenthesised homogeneous linear form such as
//! `(x - 2*y + [3]*z)`. Integer literals are mapped into the field through
//! `Z -> k`; bracketed literals are field encodings (`[2]` is `t` in GF(4),
//! `[1/2]` a rational).

use num_bigint::BigInt;

use crate::arrangement::{Arrangement, Hyperplane};
use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Encoded(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            '[' => {
                let end = chars[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| syntax(col, "unterminated '['"))?;
                let inner: String = chars[i + 1..i + end].iter().collect();
                out.push((Tok::Encoded(inner), col));
                i += end + 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits")), col));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => return Err(syntax(col, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    field: &'a FieldSpec,
    vars: &'a [String],
    factor: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn var_index(&self, name: &str, col: usize) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| syntax(col, format!("unknown variable {name:?}")))
    }

    fn literal(&self, tok: &Tok, col: usize) -> Result<Scalar> {
        match tok {
            Tok::Int(n) => Ok(self.field.from_bigint(n)),
            Tok::Encoded(s) => self
                .field
                .parse_scalar(s)
                .map_err(|_| syntax(col, format!("[{s}] is not an element of {}", self.field))),
            _ => unreachable!(),
        }
    }

    fn product(&mut self) -> Result<Vec<Vec<Scalar>>> {
        let mut factors = Vec::new();
        loop {
            self.factor += 1;
            factors.push(self.factor_()?);
            match self.peek() {
                None => return Ok(factors),
                Some(Tok::Star) => {
                    self.bump();
                }
                Some(_) => return Err(syntax(self.col(), "expected '*' between factors")),
            }
        }
    }

    fn factor_(&mut self) -> Result<Vec<Scalar>> {
        let col = self.col();
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let mut covector = match self.bump() {
            Some(Tok::LParen) => {
                let form = self.linear()?;
                match self.bump() {
                    Some(Tok::RParen) => form,
                    _ => {
                        return Err(syntax(
                            self.toks.get(self.pos - 1).map_or(self.end_col, |t| t.1),
                            "expected ')'",
                        ))
                    }
                }
            }
            Some(Tok::Ident(name)) => {
                let mut v = vec![self.field.zero(); self.vars.len()];
                v[self.var_index(&name, col)?] = self.field.one();
                v
            }
            Some(Tok::Int(_) | Tok::Encoded(_)) => return Err(syntax(col, "constant factor; expected a linear form")),
            Some(_) => return Err(syntax(col, "expected a variable or '('")),
            None => return Err(syntax(col, "unexpected end of input")),
        };
        if negate {
            covector = covector.iter().map(|c| self.field.neg(c)).collect();
        }
        Ok(covector)
    }

    fn linear(&mut self) -> Result<Vec<Scalar>> {
        let f = self.field;
        let mut acc = vec![f.zero(); self.vars.len()];
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    false
                }
                Some(Tok::Minus) => {
                    self.bump();
                    true
                }
                _ if first => false,
                _ => return Ok(acc),
            };
            first = false;
            let col = self.col();
            let (coef, var) = match self.bump() {
                Some(t @ (Tok::Int(_) | Tok::Encoded(_))) => {
                    let c = self.literal(&t, col)?;
                    if matches!(self.peek(), Some(Tok::Star)) {
                        self.bump();
                    }
                    let vcol = self.col();
                    match self.peek() {
                        Some(Tok::Ident(name)) => {
                            let name = name.clone();
                            self.bump();
                            (c, Some(self.var_index(&name, vcol)?))
                        }
                        _ => (c, None),
                    }
                }
                Some(Tok::Ident(name)) => (f.one(), Some(self.var_index(&name, col)?)),
                _ => return Err(syntax(col, "expected a term")),
            };
            let Some(var) = var else {
                return Err(Error::NonHomogeneous { factor: self.factor });
            };
            let coef = if negative { f.neg(&coef) } else { coef };
            acc[var] = f.add(&acc[var], &coef);
        }
    }
}

/// Parses `Q(A)` into an arrangement, one hyperplane per factor, in order.
/// `"1"` or an empty string denote the empty arrangement.
pub fn parse_defining_polynomial(text: &str, field: &FieldSpec, vars: &[String]) -> Result<Arrangement> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "1" {
        return Ok(Arrangement::empty(field, vars.len()));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end_col: text.chars().count() + 1,
        field,
        vars,
        factor: 0,
    };
    let factors = p.product()?;
    let mut hs: Vec<Hyperplane> = Vec::with_capacity(factors.len());
    for (i, c) in factors.into_iter().enumerate() {
        let h = Hyperplane::new(field, c).map_err(|_| Error::ZeroFactor { factor: i + 1 })?;
        if let Some(previous) = hs.iter().position(|x| *x == h) {
            return Err(Error::DuplicateHyperplane { index: i, previous });
        }
        hs.push(h);
    }
    Arrangement::new(field, vars.len(), hs)
}

/// Field line of an arrangement file, before it is realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDecl {
    Finite { q: u64, modulus: Option<Vec<u32>> },
    Rational,
}

impl FieldDecl {
    pub fn build(&self) -> Result<FieldSpec> {
        match self {
            FieldDecl::Rational => Ok(FieldSpec::rational()),
            FieldDecl::Finite { q, modulus } => {
                let (p, k) = crate::exactfield::prime_power(*q).ok_or(Error::NotPrime(*q))?;
                FieldSpec::finite(p, k, modulus.clone())
            }
        }
    }

    /// Accepts `gf2`, `gf4`, `gf 9`, `rational`, `q`.
    pub fn from_name(name: &str) -> Result<FieldDecl> {
        let n = name.trim().to_ascii_lowercase();
        if n == "rational" || n == "q" {
            return Ok(FieldDecl::Rational);
        }
        let digits = n.strip_prefix("gf").map(str::trim).unwrap_or(&n);
        let q = digits
            .parse::<u64>()
            .map_err(|_| Error::InvalidScalar(format!("unknown field {name:?}")))?;
        Ok(FieldDecl::Finite { q, modulus: None })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    /// Polynomial text with the file line and the column where it starts.
    Poly {
        text: String,
        line: usize,
        column: usize,
    },
    /// Raw coordinate tokens of each `hyperplane` line.
    Hyperplanes(Vec<(usize, Vec<String>)>),
    Empty,
}

/// A parsed arrangement file that has not yet been realized over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementFile {
    pub field: FieldDecl,
    pub dim: usize,
    pub vars: Vec<String>,
    pub body: Body,
}

fn file_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::File {
        line,
        column,
        message: message.into(),
    }
}

impl ArrangementFile {
    pub fn parse(text: &str) -> Result<ArrangementFile> {
        let mut field = None;
        let mut dim = None;
        let mut vars: Option<Vec<String>> = None;
        let mut poly: Option<(String, usize, usize)> = None;
        let mut hyperplanes = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = content.len() - trimmed.len();
            let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let rest_col = indent + keyword.len() + 2;
            let words: Vec<&str> = rest.split_whitespace().collect();
            match keyword {
                "field" => {
                    if field.is_some() {
                        return Err(file_err(line, 1, "duplicate field line"));
                    }
                    field = Some(parse_field_words(&words).map_err(|m| file_err(line, rest_col, m))?);
                }
                "dim" => {
                    let d = match words.as_slice() {
                        [d] => d.parse::<usize>().ok().filter(|&d| d >= 1),
                        _ => None,
                    };
                    dim = Some(d.ok_or_else(|| file_err(line, rest_col, "expected a positive dimension"))?);
                }
                "vars" => {
                    if words.is_empty() {
                        return Err(file_err(line, rest_col, "expected variable names"));
                    }
                    vars = Some(words.iter().map(|s| s.to_string()).collect());
                }
                "poly" => {
                    if poly.is_some() {
                        return Err(file_err(line, 1, "duplicate poly line"));
                    }
                    poly = Some((rest.to_string(), line, rest_col));
                }
                "hyperplane" => hyperplanes.push((line, words.iter().map(|s| s.to_string()).collect())),
                other => return Err(file_err(line, indent + 1, format!("unknown keyword {other:?}"))),
            }
        }
        let field = field.ok_or_else(|| file_err(1, 1, "missing field line"))?;
        let dim = dim.ok_or_else(|| file_err(1, 1, "missing dim line"))?;
        let vars = vars.unwrap_or_else(|| Arrangement::default_vars(dim));
        if vars.len() != dim {
            return Err(file_err(1, 1, format!("{} variables for dimension {dim}", vars.len())));
        }
        let body = match (poly, hyperplanes.is_empty()) {
            (Some(_), false) => {
                return Err(file_err(
                    hyperplanes[0].0,
                    1,
                    "poly and hyperplane lines are mutually exclusive",
                ))
            }
            (Some((text, line, column)), true) => Body::Poly { text, line, column },
            (None, false) => Body::Hyperplanes(hyperplanes),
            (None, true) => Body::Empty,
        };
        Ok(ArrangementFile { field, dim, vars, body })
    }

    /// Realizes the arrangement over the declared field.
    pub fn realize(&self) -> Result<Arrangement> {
        let field = self.field.build().map_err(|e| file_err(1, 1, e.to_string()))?;
        self.realize_over(&field)
    }

    /// Realizes the arrangement over `field`. Polynomial input is
    /// reinterpreted coefficient by coefficient; hyperplane lines must hold
    /// valid encodings for `field`.
    pub fn realize_over(&self, field: &FieldSpec) -> Result<Arrangement> {
        match &self.body {
            Body::Empty => Ok(Arrangement::empty(field, self.dim)),
            Body::Poly { text, line, column } => {
                parse_defining_polynomial(text, field, &self.vars).map_err(|e| match e {
                    Error::Parse { column: c, message } => file_err(*line, column + c - 1, message),
                    other => file_err(*line, *column, other.to_string()),
                })
            }
            Body::Hyperplanes(rows) => {
                let mut hs: Vec<Hyperplane> = Vec::with_capacity(rows.len());
                for (i, (line, words)) in rows.iter().enumerate() {
                    if words.len() != self.dim {
                        return Err(file_err(*line, 1, format!("expected {} coordinates", self.dim)));
                    }
                    let c = words
                        .iter()
                        .map(|w| field.parse_scalar(w))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| file_err(*line, 1, e.to_string()))?;
                    let h = Hyperplane::new(field, c).map_err(|e| file_err(*line, 1, e.to_string()))?;
                    if let Some(previous) = hs.iter().position(|x| *x == h) {
                        return Err(file_err(
                            *line,
                            1,
                            Error::DuplicateHyperplane { index: i, previous }.to_string(),
                        ));
                    }
                    hs.push(h);
                }
                Arrangement::new(field, self.dim, hs)
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.body, Body::Poly { .. } | Body::Empty)
    }
}

fn parse_field_words(words: &[&str]) -> std::result::Result<FieldDecl, String> {
    match words {
        ["rational"] | ["q"] | ["Q"] => Ok(FieldDecl::Rational),
        ["gf", q, rest @ ..] => {
            let q: u64 = q.parse().map_err(|_| format!("invalid field order {q:?}"))?;
            let modulus = match rest {
                [] => None,
                ["modulus", digits @ ..] => Some(
                    digits
                        .iter()
                        .map(|d| d.parse::<u32>().map_err(|_| format!("invalid modulus digit {d:?}")))
                        .collect::<std::result::Result<Vec<_>, _>>()?,
                ),
                _ => return Err("expected 'modulus' followed by digits".into()),
            };
            Ok(FieldDecl::Finite { q, modulus })
        }
        _ => Err("expected 'gf <q> [modulus ...]' or 'rational'".into()),
    }
}

/// Reads and realizes an arrangement file.
pub fn read_arrangement(text: &str) -> Result<(Arrangement, Vec<String>)> {
    let file = ArrangementFile::parse(text)?;
    let a = file.realize()?;
    Ok((a, file.vars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn example_polynomial() {
        let f2 = FieldSpec::gf(2).unwrap();
        let a = parse_defining_polynomial("x*y*z*(x+y)*(x+z)*(y+z)", &f2, &xyz()).unwrap();
        let expected = Arrangement::from_int_rows(
            &f2,
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]],
        )
        .unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn parse_errors() {
        let q = FieldSpec::rational();
        assert_eq!(
            parse_defining_polynomial("x*(2*x)", &q, &xyz()),
            Err(Error::DuplicateHyperplane { index: 1, previous: 0 })
        );
        assert_eq!(
            parse_defining_polynomial("(x+y+1)", &q, &xyz()),
            Err(Error::NonHomogeneous { factor: 1 })
        );
        let f2 = FieldSpec::gf(2).unwrap();
        assert_eq!(
            parse_defining_polynomial("x*(2*y)", &f2, &xyz()),
            Err(Error::ZeroFactor { factor: 2 })
        );
        assert_eq!(parse_defining_polynomial("x*(y+x-x)", &f2, &xyz()).unwrap().len(), 2);
        match parse_defining_polynomial("x*(y+w)", &q, &xyz()) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        match parse_defining_polynomial("x y", &q, &xyz()) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_defining_polynomial("x*(y", &q, &xyz()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_defining_polynomial("2*x", &q, &xyz()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn coefficients() {
        let q = FieldSpec::rational();
        let a = parse_defining_polynomial("(2x - 4*y)*([1/3]*z + y)", &q, &xyz()).unwrap();
        assert_eq!(a.get(0).covector(), &[q.from_int(1), q.from_int(-2), q.from_int(0)]);
        assert_eq!(
            a.get(1).covector(),
            &[q.from_int(0), q.from_int(1), Scalar::rational(1, 3)]
        );
        let f4 = FieldSpec::gf(4).unwrap();
        let b = parse_defining_polynomial("([2]*x + y)", &f4, &xyz()).unwrap();
        // normalized by t^{-1} = t + 1
        assert_eq!(
            b.get(0).covector(),
            &[Scalar::Finite(1), Scalar::Finite(3), Scalar::Finite(0)]
        );
        assert!(matches!(
            parse_defining_polynomial("([7]*x)", &f4, &xyz()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn file_format() {
        let text = "# two-field example\nfield gf 4 modulus 1 1 1\ndim 3\nvars x y z\npoly x*y*z*(x+y)*(x+z)*(y+z)\n";
        let (a, vars) = read_arrangement(text).unwrap();
        assert_eq!(a.len(), 6);
        assert_eq!(a.field(), &FieldSpec::gf(4).unwrap());
        assert_eq!(vars, xyz());

        let text = "field gf 2\ndim 3\nhyperplane 1 0 0\nhyperplane 0 1 1  # trailing\n";
        let (a, vars) = read_arrangement(text).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(vars, vec!["x1", "x2", "x3"]);

        let (a, _) = read_arrangement("field rational\ndim 2\n").unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn file_errors() {
        let err = read_arrangement("field gf 2\ndim 3\nvars x y z\npoly x*(y+q)\n").unwrap_err();
        assert_eq!(
            err,
            Error::File {
                line: 4,
                column: 11,
                message: "unknown variable \"q\"".into()
            }
        );
        assert!(read_arrangement("field gf 6\ndim 2\n").is_err());
        assert!(read_arrangement("field gf 2\ndim 2\npoly x1\nhyperplane 1 0\n").is_err());
        assert!(read_arrangement("dim 2\n").is_err());
        assert!(read_arrangement("field gf 2\ndim 2\nhyperplane 1 2\n").is_err());
        assert!(read_arrangement("field gf 2\ndim 2\nfoo\n").is_err());
    }

    #[test]
    fn printed_polynomial_reparses() {
        let q = FieldSpec::rational();
        let a = parse_defining_polynomial("(x-2*y)*([1/2]*x+z)*(y-z)*x", &q, &xyz()).unwrap();
        let printed = a.defining_polynomial(&xyz());
        assert_eq!(parse_defining_polynomial(&printed, &q, &xyz()).unwrap(), a);
        let text = a.to_file_string(&xyz());
        assert_eq!(read_arrangement(&text).unwrap().0, a);
    }
}
