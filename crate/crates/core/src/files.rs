//! Text and JSON input formats.
//!
//! Algebra files list generators, an optional precedence, and relations:
//!
//! ```text
//! # comments start with '#'
//! generators: x, y
//! precedence: x > y
//! relation: xy + yx
//! relation: x^3 - y^2
//! local: true
//! ```
//!
//! Polynomial files name the variables and give one polynomial, which may
//! span several `poly:` lines (they are added).

use serde::{Deserialize, Serialize};

use crate::commalg::CommPoly;
use crate::error::{Error, Result};
use crate::freealg::{Alphabet, NCPoly};
use crate::ncgb::Presentation;
use crate::parse::Location;

/// Parsed algebra file.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraFile {
    pub presentation: Presentation,
    /// Value of the `local:` line, if present. A `true` value is checked.
    pub declared_local: Option<bool>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: Location { line, column },
        message: message.into(),
    }
}

/// Splits `key: value` and returns the value with its starting column.
fn key_value(raw: &str) -> Option<(&str, &str, usize)> {
    let colon = raw.find(':')?;
    let key = raw[..colon].trim();
    let rest = &raw[colon + 1..];
    let skipped = rest.len() - rest.trim_start().len();
    let column = raw[..colon + 1 + skipped].chars().count() + 1;
    Some((key, rest.trim(), column))
}

fn names_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    let mut generators: Option<Vec<String>> = None;
    let mut precedence: Option<(Vec<String>, usize, usize)> = None;
    let mut relations: Vec<(String, Location)> = Vec::new();
    let mut declared_local = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value, column)) = key_value(line) else {
            let col = line.len() - line.trim_start().len() + 1;
            return Err(parse_error(lineno, col, "expected 'key: value'"));
        };
        match key {
            "generators" => {
                if generators.is_some() {
                    return Err(parse_error(lineno, 1, "generators declared twice"));
                }
                generators = Some(names_list(value));
            }
            "precedence" => {
                let order: Vec<String> = value.split('>').map(|s| s.trim().to_string()).collect();
                precedence = Some((order, lineno, column));
            }
            "relation" => relations.push((value.to_string(), Location { line: lineno, column })),
            "local" => {
                declared_local = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => return Err(parse_error(lineno, column, "expected true or false")),
                });
            }
            other => {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(parse_error(lineno, col, format!("unknown key '{other}'")));
            }
        }
    }
    let generators = generators.ok_or_else(|| parse_error(1, 1, "missing 'generators:' line"))?;
    let alphabet = match precedence {
        None => Alphabet::new(&generators),
        Some((order, line, column)) => {
            let mut idx = Vec::new();
            for name in &order {
                match generators.iter().position(|g| g == name) {
                    Some(k) => idx.push(k),
                    None => return Err(parse_error(line, column, format!("unknown generator '{name}' in precedence"))),
                }
            }
            Alphabet::with_precedence(&generators, idx)
        }
    }
    .map_err(|e| parse_error(1, 1, e.to_string()))?;
    let mut polys: Vec<NCPoly> = Vec::new();
    for (text, loc) in &relations {
        let p = alphabet.parse_at(text, *loc)?;
        if p.is_zero() {
            return Err(parse_error(loc.line, loc.column, "relation is zero"));
        }
        polys.push(p);
    }
    let presentation = Presentation::new(alphabet, polys)?;
    if declared_local == Some(true) && !presentation.is_local() {
        return Err(Error::NotLocal(
            "file declares local: true but a relation has a term of degree below 2".into(),
        ));
    }
    Ok(AlgebraFile {
        presentation,
        declared_local,
    })
}

/// Parsed polynomial file.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFile {
    pub vars: Vec<String>,
    pub poly: CommPoly,
}

pub fn parse_poly_file(text: &str) -> Result<PolyFile> {
    let mut vars: Option<Vec<String>> = None;
    let mut poly: Option<CommPoly> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value, column)) = key_value(line) else {
            return Err(parse_error(lineno, 1, "expected 'key: value'"));
        };
        match key {
            "vars" => vars = Some(names_list(value)),
            "poly" => {
                let names = vars
                    .as_ref()
                    .ok_or_else(|| parse_error(lineno, 1, "'vars:' must come before 'poly:'"))?;
                let p = CommPoly::parse_at(value, names, Location { line: lineno, column })?;
                poly = Some(match poly {
                    Some(q) => q.add(&p),
                    None => p,
                });
            }
            other => return Err(parse_error(lineno, 1, format!("unknown key '{other}'"))),
        }
    }
    let vars = vars.ok_or_else(|| parse_error(1, 1, "missing 'vars:' line"))?;
    let poly = poly.ok_or_else(|| parse_error(1, 1, "missing 'poly:' line"))?;
    Ok(PolyFile { vars, poly })
}

/// Affine chart of a blowup: a hypersurface with a map to the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartFile {
    pub name: String,
    pub vars: Vec<String>,
    pub relation: String,
    pub base_vars: Vec<String>,
    /// Equation of the base hypersurface.
    pub base: String,
    /// Images of the base variables, polynomials in `vars`.
    pub map: Vec<String>,
    /// Optional fibre check: setting `zero` to 0 turns the relation into `expected`.
    #[serde(default)]
    pub fibre: Option<FibreCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibreCheck {
    pub zero: Vec<String>,
    pub expected: String,
}

/// Parsed chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub name: String,
    pub vars: Vec<String>,
    pub relation: CommPoly,
    pub base_vars: Vec<String>,
    pub base: CommPoly,
    pub map: Vec<CommPoly>,
    pub fibre: Option<(Vec<usize>, CommPoly)>,
}

impl ChartFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("chart file: {e}")))
    }

    pub fn load(&self) -> Result<Chart> {
        let relation = CommPoly::parse(&self.relation, &self.vars)?;
        let base = CommPoly::parse(&self.base, &self.base_vars)?;
        if self.map.len() != self.base_vars.len() {
            return Err(Error::Invalid(format!(
                "chart map has {} images for {} base variables",
                self.map.len(),
                self.base_vars.len()
            )));
        }
        let map = self
            .map
            .iter()
            .map(|s| CommPoly::parse(s, &self.vars))
            .collect::<Result<Vec<_>>>()?;
        let fibre = match &self.fibre {
            None => None,
            Some(f) => {
                let idx = f
                    .zero
                    .iter()
                    .map(|n| {
                        self.vars
                            .iter()
                            .position(|v| v == n)
                            .ok_or_else(|| Error::Invalid(format!("unknown chart variable '{n}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some((idx, CommPoly::parse(&f.expected, &self.vars)?))
            }
        };
        Ok(Chart {
            name: self.name.clone(),
            vars: self.vars.clone(),
            relation,
            base_vars: self.base_vars.clone(),
            base,
            map,
            fibre,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_file_roundtrip() {
        let text = "# test\ngenerators: a, b\nprecedence: b > a\nrelation: ab + ba   # anticommute\nrelation: a^2\nlocal: true\n";
        let f = parse_algebra_file(text).unwrap();
        assert_eq!(f.presentation.alphabet().generators(), &["a", "b"]);
        assert_eq!(f.presentation.alphabet().precedence(), &[1, 0]);
        assert_eq!(f.presentation.relations().len(), 2);
        assert_eq!(f.declared_local, Some(true));
    }

    #[test]
    fn relation_error_location() {
        let text = "generators: x, y\nrelation: x^2 + z\n";
        match parse_algebra_file(text) {
            Err(Error::Parse { location, .. }) => assert_eq!((location.line, location.column), (2, 17)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_algebra_file("generators: x\nrelations x^2\n") {
            Err(Error::Parse { location, .. }) => assert_eq!(location.line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn local_declaration_is_checked() {
        assert!(matches!(
            parse_algebra_file("generators: x\nrelation: x - x^2\nlocal: true\n"),
            Err(Error::NotLocal(_))
        ));
    }

    #[test]
    fn poly_file() {
        let f = parse_poly_file("vars: x, y\npoly: x^2\npoly: + y^3\n").unwrap();
        assert_eq!(f.poly, CommPoly::parse("x^2 + y^3", &["x", "y"]).unwrap());
    }
}
