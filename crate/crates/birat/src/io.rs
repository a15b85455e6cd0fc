//! File formats and serialization: a small polynomial expression parser with
//! line/column diagnostics, surface and map files, and JSON output helpers.
//!
//! Surface file: a header line `vars x y z t` followed by one homogeneous
//! form per line. Map file: the same header, then `stage` lines each
//! followed by d+1 form lines. `#` starts a comment; blank lines ignored.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::maps::BirationalMap;
use crate::mpoly::{format_mpoly, MPoly, Mono};
use crate::nf::{Fe, Field, NumberField};
use crate::rat::Rat;
use crate::scheme::Surface;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use std::str::FromStr;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// expression parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    field: Field,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, line: usize, vars: &'a [String]) -> Parser<'a> {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            line,
            field: NumberField::rationals(),
            vars,
        }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_expr(&mut self) -> Result<MPoly> {
        let mut acc = if self.eat('-') {
            self.parse_term()?.neg()
        } else {
            self.parse_term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.parse_term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.parse_term()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<MPoly> {
        let mut acc = self.parse_factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MPoly> {
        let base = self.parse_base()?;
        if self.eat('^') {
            let e = self.parse_nat()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn parse_nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(self.line, self.col(), "expected exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<usize>()
            .map_err(|_| perr(self.line, start + 1, "exponent out of range"))
    }

    fn parse_base(&mut self) -> Result<MPoly> {
        let nv = self.vars.len();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if !self.eat(')') {
                    return Err(perr(self.line, self.col(), "expected ')'"));
                }
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.parse_factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_int()?;
                let den = if self.eat('/') {
                    let d = self.parse_int()?;
                    if d.is_zero() {
                        return Err(perr(self.line, self.col(), "zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                let r = Rat::new(num, den);
                Ok(MPoly::constant(&self.field, nv, Fe::from_rat(&self.field, r)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && ((self.src[self.pos] as char).is_ascii_alphanumeric()
                        || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(MPoly::var(&self.field, nv, i)),
                    None => Err(perr(
                        self.line,
                        start + 1,
                        format!("unknown variable '{name}'"),
                    )),
                }
            }
            Some(c) => Err(perr(
                self.line,
                self.col(),
                format!("unexpected character '{c}'"),
            )),
            None => Err(perr(self.line, self.col(), "unexpected end of expression")),
        }
    }

    fn parse_int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(self.line, self.col(), "expected number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        BigInt::from_str(s).map_err(|_| perr(self.line, start + 1, "bad integer"))
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(c) = self.peek() {
            return Err(perr(
                self.line,
                self.col(),
                format!("trailing input at '{c}'"),
            ));
        }
        Ok(())
    }
}

/// Parses one polynomial over Q in the given variables.
pub fn parse_form(src: &str, line: usize, vars: &[String]) -> Result<MPoly> {
    let mut p = Parser::new(src, line, vars);
    let poly = p.parse_expr()?;
    p.finish()?;
    Ok(poly)
}

// ---------------------------------------------------------------------------
// file formats
// ---------------------------------------------------------------------------

struct FileLines {
    /// (line number, content) with comments and blanks removed
    lines: Vec<(usize, String)>,
    vars: Vec<String>,
}

fn read_lines(src: &str) -> Result<FileLines> {
    let mut lines = vec![];
    for (i, raw) in src.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            lines.push((i + 1, content.to_string()));
        }
    }
    let Some((hline, header)) = lines.first().cloned() else {
        return Err(perr(1, 1, "empty file"));
    };
    let mut parts = header.split_whitespace();
    if parts.next() != Some("vars") {
        return Err(perr(hline, 1, "expected 'vars' header line"));
    }
    let vars: Vec<String> = parts.map(|s| s.to_string()).collect();
    if vars.is_empty() {
        return Err(perr(hline, 1, "no variables declared"));
    }
    for v in &vars {
        if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(perr(hline, 1, format!("bad variable name '{v}'")));
        }
    }
    lines.remove(0);
    Ok(FileLines { lines, vars })
}

/// Parses and validates a surface file; returns the variable names too.
pub fn parse_surface_str(src: &str) -> Result<(Vec<String>, Surface)> {
    let f = read_lines(src)?;
    let forms: Result<Vec<MPoly>> = f
        .lines
        .iter()
        .map(|(ln, s)| parse_form(s, *ln, &f.vars))
        .collect();
    let surface = Surface::new(forms?)?;
    Ok((f.vars, surface))
}

pub fn parse_surface_file(path: &str) -> Result<(Vec<String>, Surface)> {
    parse_surface_str(&std::fs::read_to_string(path)?)
}

/// Parses a map file as a stage chain over the given surface.
pub fn parse_map_str(src: &str, surface: &Surface) -> Result<BirationalMap> {
    let f = read_lines(src)?;
    let nv = surface.nvars();
    let mut stages: Vec<Vec<MPoly>> = vec![];
    let mut current: Option<Vec<MPoly>> = None;
    for (ln, s) in &f.lines {
        if s == "stage" {
            if let Some(st) = current.take() {
                if st.len() != nv {
                    return Err(perr(*ln, 1, format!("stage has {} forms, need {nv}", st.len())));
                }
                stages.push(st);
            }
            current = Some(vec![]);
            continue;
        }
        let Some(st) = current.as_mut() else {
            return Err(perr(*ln, 1, "form before first 'stage' line"));
        };
        st.push(parse_form(s, *ln, &f.vars)?);
    }
    if let Some(st) = current {
        if st.len() != nv {
            return Err(perr(0, 1, format!("stage has {} forms, need {nv}", st.len())));
        }
        stages.push(st);
    }
    if stages.is_empty() {
        return Err(perr(0, 1, "map file has no stages"));
    }
    let mut map = BirationalMap::from_stage(surface, stages[0].clone())?;
    map.stages = stages;
    Ok(map)
}

pub fn parse_map_file(path: &str, surface: &Surface) -> Result<BirationalMap> {
    parse_map_str(&std::fs::read_to_string(path)?, surface)
}

/// Parses comma-separated rational coordinates, e.g. "1,-1,-1,1".
pub fn parse_point_spec(spec: &str) -> Result<Vec<Rat>> {
    spec.split(',')
        .enumerate()
        .map(|(i, s)| {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let n = BigInt::from_str(num).map_err(|_| perr(1, i + 1, "bad coordinate"))?;
            let d = BigInt::from_str(den).map_err(|_| perr(1, i + 1, "bad coordinate"))?;
            if d.is_zero() {
                return Err(perr(1, i + 1, "zero denominator"));
            }
            Ok(Rat::new(n, d))
        })
        .collect()
}

/// Parses comma-separated forms cutting a centre, e.g. "x, z, s".
pub fn parse_ideal_spec(spec: &str, vars: &[String]) -> Result<Vec<MPoly>> {
    spec.split(',')
        .map(|s| parse_form(s.trim(), 1, vars))
        .collect()
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

fn mono_string(m: &Mono, vars: &[String]) -> String {
    let mut parts = vec![];
    for (v, name) in vars.iter().enumerate() {
        match m.e[v] {
            0 => {}
            1 => parts.push(name.clone()),
            k => parts.push(format!("{name}^{k}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// A form as an ordered JSON object {monomial: "num/den"}.
pub fn form_to_json(f: &MPoly, vars: &[String]) -> Value {
    let mut obj = Map::new();
    for (m, c) in &f.terms {
        obj.insert(mono_string(m, vars), json!(c.as_rat().unwrap().to_string()));
    }
    Value::Object(obj)
}

/// A matrix over Q as row-major rational strings.
pub fn mat_to_json(m: &Mat) -> Value {
    let rows: Vec<Vec<String>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|c| c.as_rat().unwrap().to_string()).collect())
        .collect();
    json!(rows)
}

pub fn form_to_text(f: &MPoly, vars: &[String]) -> String {
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    format_mpoly(f, &refs)
}

/// Coordinates over a (possibly extension) field as display strings.
pub fn coords_to_strings(coords: &[Fe]) -> Vec<String> {
    coords.iter().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_paper_cubic() {
        let src = "vars x y z t\nx^3 + 2*y^3 + 3*z^3 + 4*t^3\n";
        let (vs, x) = parse_surface_str(src).unwrap();
        assert_eq!(vs, vars(&["x", "y", "z", "t"]));
        assert_eq!(x.ambient_dim, 3);
        assert_eq!(x.forms.len(), 1);
    }

    #[test]
    fn parses_dp4_with_comments() {
        let src = "# the paper's quartic del Pezzo\nvars x y z t s\n\
                   x*y - z*t + 2*x^2 + s^2\n-x^2 + y^2 - z^2 + t^2 - s^2  # second quadric\n";
        let (_, x) = parse_surface_str(src).unwrap();
        assert_eq!(x.ambient_dim, 4);
        assert_eq!(x.forms.len(), 2);
    }

    #[test]
    fn rejects_unknown_variable_with_position() {
        let src = "vars x y z t\nx^3 + w^3\n";
        match parse_surface_str(src) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!(line, 2);
                assert_eq!(col, 7);
                assert!(msg.contains('w'));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let vs = vars(&["x", "y"]);
        assert!(parse_form("2x", 1, &vs).is_err());
        assert!(parse_form("x y", 1, &vs).is_err());
        assert!(parse_form("2*x", 1, &vs).is_ok());
    }

    #[test]
    fn rational_coefficients_and_parens() {
        let vs = vars(&["x", "y"]);
        let p = parse_form("3/2*(x + y)^2 - 1/2*x^2", 1, &vs).unwrap();
        let q = parse_form("x^2 + 3*x*y + 3/2*y^2", 1, &vs).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn map_file_round_trip() {
        let ssrc = "vars x y z t\nx^3 + 2*y^3 + 3*z^3 + 4*t^3\n";
        let (_, x) = parse_surface_str(ssrc).unwrap();
        let msrc = "vars x y z t\nstage\nx^2\ny^2\nz^2\nt^2\nstage\ny\nx\nz\nt\n";
        let m = parse_map_str(msrc, &x).unwrap();
        assert_eq!(m.stages.len(), 2);
        assert_eq!(m.stage_degrees(), vec![2, 1]);
    }

    #[test]
    fn point_and_ideal_specs() {
        let coords = parse_point_spec("1,-1,-1,1").unwrap();
        assert_eq!(coords, vec![rat_int(1), rat_int(-1), rat_int(-1), rat_int(1)]);
        let half = parse_point_spec("1/2,1").unwrap();
        assert_eq!(half[0], &rat_int(1) / &rat_int(2));
        let forms = parse_ideal_spec("x, z, s", &vars(&["x", "y", "z", "t", "s"])).unwrap();
        assert_eq!(forms.len(), 3);
    }

    #[test]
    fn json_forms_are_ordered_and_exact() {
        let vs = vars(&["x", "y"]);
        let p = parse_form("1/3*x^2 - y^2", 1, &vs).unwrap();
        let v = form_to_json(&p, &vs);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"x^2":"1/3","y^2":"-1"}"#);
    }
}
