use std::fmt::Write as _;

use super::AltForm;
use crate::error::{Error, Result};
use crate::exactlin::{Field, FieldCtx, PrimeField, Rationals};

const HEADER: &str = "altform v1";

impl<F: Field> AltForm<F> {
    /// Canonical text rendering; terms in lex order, one per line.
    pub fn render(&self) -> String {
        let f = &self.field;
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "field {}", f.ctx());
        let _ = writeln!(out, "arity {}", self.s);
        let _ = writeln!(out, "dim {}", self.n);
        let _ = writeln!(out, "codim {}", self.m);
        for (idx, vals) in &self.coeffs {
            out.push_str("term");
            for i in idx.indices() {
                let _ = write!(out, " {i}");
            }
            for v in vals {
                let _ = write!(out, " {}", f.format_elem(v));
            }
            out.push('\n');
        }
        out
    }
}

/// A parsed form whose field is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Rational(AltForm<Rationals>),
    Prime(AltForm<PrimeField>),
}

impl AnyForm {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut next_line = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: text.lines().count() + 1,
                message: format!("unexpected end of input, expected {what}"),
            })
        };

        let (ln, l) = next_line("header")?;
        if l != HEADER {
            return Err(parse_err(ln, format!("expected `{HEADER}`, found `{l}`")));
        }
        let (ln, l) = next_line("field line")?;
        let ctx = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["field", "Q"] => FieldCtx::Rationals,
            ["field", "gf", p] => {
                let p: u64 = p.parse().map_err(|_| parse_err(ln, format!("bad modulus `{p}`")))?;
                FieldCtx::prime(p).map_err(|e| parse_err(ln, e.to_string()))?
            }
            _ => return Err(parse_err(ln, format!("expected `field Q` or `field gf <p>`, found `{l}`"))),
        };
        let s = header_value(next_line("arity line")?, "arity")?;
        let n = header_value(next_line("dim line")?, "dim")?;
        let m = header_value(next_line("codim line")?, "codim")?;

        let rest: Vec<(usize, &str)> = lines.collect();
        match ctx {
            FieldCtx::Rationals => Ok(AnyForm::Rational(parse_terms(&Rationals, s, n, m, &rest)?)),
            FieldCtx::PrimeField(p) => {
                let f = PrimeField::new(p as u64).expect("validated above");
                Ok(AnyForm::Prime(parse_terms(&f, s, n, m, &rest)?))
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            AnyForm::Rational(f) => f.render(),
            AnyForm::Prime(f) => f.render(),
        }
    }

    pub fn field_ctx(&self) -> FieldCtx {
        match self {
            AnyForm::Rational(f) => f.field().ctx(),
            AnyForm::Prime(f) => f.field().ctx(),
        }
    }

    /// `(arity, dim, codim)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        match self {
            AnyForm::Rational(f) => (f.arity(), f.dim(), f.codim()),
            AnyForm::Prime(f) => (f.arity(), f.dim(), f.codim()),
        }
    }
}

fn parse_err(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

fn header_value((ln, l): (usize, &str), key: &str) -> Result<usize> {
    match l.split_whitespace().collect::<Vec<_>>().as_slice() {
        [k, v] if *k == key => v
            .parse()
            .map_err(|_| parse_err(ln, format!("`{key}` needs a non-negative integer, found `{v}`"))),
        _ => Err(parse_err(ln, format!("expected `{key} <value>`, found `{l}`"))),
    }
}

fn parse_terms<F: Field>(
    field: &F,
    s: usize,
    n: usize,
    m: usize,
    lines: &[(usize, &str)],
) -> Result<AltForm<F>> {
    let mut form = AltForm::zero(field, s, n, m).map_err(|e| parse_err(5, e.to_string()))?;
    for &(ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.first() != Some(&"term") {
            return Err(parse_err(ln, format!("expected `term ...`, found `{l}`")));
        }
        let body = &toks[1..];
        if body.len() != s + m {
            return Err(parse_err(
                ln,
                format!("term needs {s} indices and {m} coefficients, found {} tokens", body.len()),
            ));
        }
        let idx = body[..s]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad index `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let vals = body[s..]
            .iter()
            .map(|t| {
                field
                    .parse_elem(t)
                    .ok_or_else(|| parse_err(ln, format!("bad coefficient `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        form.add_term(idx, vals).map_err(|e| parse_err(ln, e.to_string()))?;
    }
    Ok(form)
}
