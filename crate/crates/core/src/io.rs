//! Text formats for ideals and point lists.
//!
//! Ideal files are line oriented:
//!
//! ```text
//! field F 32003        # or: field Q
//! vars x0 x1 x2 x3     # leftmost greatest
//! order deglex         # deglex | degrevlex | lex
//! gen x0*x2 - x1^2
//! ```
//!
//! Point files hold one `point c_0 … c_n` per line, coordinates being
//! integers or fractions `a/b`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, RationalField};
use crate::groebner::Ideal;
use crate::poly::{MonomialOrder, Ring};

/// An ideal over either supported field.
#[derive(Clone, Debug)]
pub enum AnyIdeal {
    Rational(Ideal<RationalField>),
    Prime(Ideal<PrimeField>),
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FieldDesc {
    Rational,
    Prime(u64),
}

/// Parse an ideal file.
pub fn parse_ideal_file(text: &str) -> Result<AnyIdeal> {
    let mut field: Option<FieldDesc> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut order = MonomialOrder::Deglex;
    let mut gens: Vec<(usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "field" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                field = Some(match parts.as_slice() {
                    ["Q"] => FieldDesc::Rational,
                    ["F", p] => FieldDesc::Prime(p.parse().map_err(|_| format_err(line_no, format!("bad prime `{p}`")))?),
                    _ => return Err(format_err(line_no, "expected `field Q` or `field F <prime>`")),
                });
            }
            "vars" => {
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(format_err(line_no, "no variables"));
                }
                vars = Some(names);
            }
            "order" => {
                order = rest.parse().map_err(|e: String| format_err(line_no, e))?;
            }
            "gen" => gens.push((line_no, rest.to_string())),
            other => return Err(format_err(line_no, format!("unknown directive `{other}`"))),
        }
    }
    let field = field.ok_or_else(|| format_err(0, "missing `field` line"))?;
    let vars = vars.ok_or_else(|| format_err(0, "missing `vars` line"))?;
    fn build<F: Field>(field: F, vars: Vec<String>, order: MonomialOrder, gens: &[(usize, String)]) -> Result<Ideal<F>> {
        let ring = Ring::new(field, vars, order).map_err(|e| format_err(0, e.to_string()))?;
        let polys = gens.iter().map(|(line, g)| ring.parse(g).map_err(|e| format_err(*line, e.to_string()))).collect::<Result<Vec<_>>>()?;
        Ideal::new(ring, polys)
    }
    Ok(match field {
        FieldDesc::Rational => AnyIdeal::Rational(build(RationalField, vars, order, &gens)?),
        FieldDesc::Prime(p) => AnyIdeal::Prime(build(PrimeField::new(p)?, vars, order, &gens)?),
    })
}

/// Render an ideal in the file format (generators as stored).
pub fn write_ideal<F: Field>(ideal: &Ideal<F>) -> String {
    let ring = ideal.ring();
    let mut out = String::new();
    writeln!(out, "field {}", ring.field().kind()).expect("string write");
    writeln!(out, "vars {}", ring.vars().join(" ")).expect("string write");
    writeln!(out, "order {}", ring.order()).expect("string write");
    for g in ideal.gens() {
        writeln!(out, "gen {}", ring.format(g)).expect("string write");
    }
    out
}

/// Parse `point c_0 … c_{n-1}` lines, checking the coordinate count.
pub fn parse_points<F: Field>(field: &F, text: &str, nvars: usize) -> Result<Vec<Vec<F::Elem>>> {
    let mut points = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        if words.next() != Some("point") {
            return Err(format_err(line_no, "expected `point c_0 ... c_n`"));
        }
        let coords = words
            .map(|w| field.parse_elem(w).map_err(|e| e.to_string()).map_err(|e| format_err(line_no, e)))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != nvars {
            return Err(format_err(line_no, format!("{} coordinates for {nvars} variables", coords.len())));
        }
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(format_err(line_no, "the zero vector is not a point"));
        }
        points.push(coords);
    }
    Ok(points)
}

/// Parse a single point given as comma- or space-separated coordinates.
pub fn parse_point_arg<F: Field>(field: &F, text: &str) -> Result<Vec<F::Elem>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| field.parse_elem(w).map_err(|e| e.to_string()).map_err(|e| format_err(0, e)))
        .collect()
}

pub fn write_points<F: Field>(field: &F, points: &[Vec<F::Elem>]) -> String {
    let mut out = String::new();
    for p in points {
        let coords: Vec<String> = p.iter().map(|c| field.format_elem(c)).collect();
        writeln!(out, "point {}", coords.join(" ")).expect("string write");
    }
    out
}
