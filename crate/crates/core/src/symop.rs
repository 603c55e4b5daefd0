//! Coordinate-triplet notation (`x, 1/2-y, 1/4-z`) and generating-set documents.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::AffineIsometry;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

const LETTERS: [char; 4] = ['x', 'y', 'z', 'w'];

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax { pos, message: message.into() }
}

struct Cursor {
    chars: Vec<(usize, char)>,
    at: usize,
}

impl Cursor {
    fn new(text: &str, offset: usize) -> Self {
        let chars = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + offset, c))
            .collect();
        Cursor { chars, at: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars
            .get(self.at)
            .map_or_else(|| self.chars.last().map_or(0, |&(i, _)| i + 1), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.at += 1;
        c
    }

    fn digits(&mut self) -> Option<BigInt> {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.at += 1;
        }
        (!s.is_empty()).then(|| s.parse().expect("digits"))
    }
}

/// One comma-separated component: coefficients per variable plus constant.
fn parse_component(cur: &mut Cursor, dim: usize) -> Result<(Vec<Rational>, Rational)> {
    let mut coeffs = vec![Rational::zero(); dim];
    let mut constant = Rational::zero();
    let mut first = true;
    if cur.peek().is_none() {
        return Err(syntax(cur.pos(), "empty component"));
    }
    while cur.peek().is_some() {
        let mut sign = Rational::one();
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(syntax(cur.pos(), format!("expected `+` or `-`, found `{c}`"))),
            None => unreachable!(),
        }
        first = false;
        let start = cur.pos();
        let num = match cur.digits() {
            Some(n) => {
                if cur.peek() == Some('/') {
                    cur.bump();
                    let den = cur.digits().ok_or_else(|| syntax(cur.pos(), "expected denominator"))?;
                    if den.is_zero() {
                        return Err(syntax(start, "zero denominator"));
                    }
                    Some(Rational::new(n, den))
                } else {
                    Some(Rational::from_integer(n))
                }
            }
            None => None,
        };
        if num.is_some() && cur.peek() == Some('*') {
            cur.bump();
        }
        match cur.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let vpos = cur.pos();
                let idx = parse_variable(cur, dim, vpos)?;
                coeffs[idx] += sign * num.unwrap_or_else(Rational::one);
            }
            _ => match num {
                Some(n) => constant += sign * n,
                None => {
                    let msg = match cur.peek() {
                        Some(c) => format!("unexpected `{c}`"),
                        None => "dangling sign".to_string(),
                    };
                    return Err(syntax(cur.pos(), msg));
                }
            },
        }
    }
    Ok((coeffs, constant))
}

fn parse_variable(cur: &mut Cursor, dim: usize, pos: usize) -> Result<usize> {
    let c = cur.bump().expect("letter");
    let unknown = |name: String| Error::UnknownVariable { name, pos };
    if c == 'x' {
        if let Some(n) = cur.digits() {
            let i = n.to_usize().filter(|&i| i >= 1 && i <= dim);
            return i.map(|i| i - 1).ok_or_else(|| unknown(format!("x{n}")));
        }
    }
    match LETTERS.iter().position(|&l| l == c) {
        Some(i) if i < dim && dim <= 4 => Ok(i),
        _ => Err(unknown(c.to_string())),
    }
}

/// Parses `text` as an isometry of `Q^dimension`.
pub fn parse_symop(text: &str, dimension: usize) -> Result<AffineIsometry> {
    if dimension == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != dimension {
        return Err(Error::ComponentCount { expected: dimension, found: parts.len() });
    }
    let mut linear = Vec::with_capacity(dimension * dimension);
    let mut translation = Vec::with_capacity(dimension);
    let mut offset = 0;
    for part in parts {
        let mut cur = Cursor::new(part, offset);
        let start = cur.pos();
        let (coeffs, constant) = parse_component(&mut cur, dimension)?;
        for c in coeffs {
            if !c.is_integer() {
                return Err(syntax(start, "linear coefficients must be integers"));
            }
            linear.push(c.to_integer().to_i64().ok_or(Error::Overflow)?);
        }
        translation.push(constant);
        offset += part.len() + 1;
    }
    AffineIsometry::new(dimension, linear, translation)
}

fn variable_name(i: usize, dim: usize) -> String {
    if dim <= 4 {
        LETTERS[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

/// Canonical triplet text: constant first, then variables in ascending order.
pub fn format_symop(g: &AffineIsometry) -> String {
    let d = g.dim();
    (0..d)
        .map(|i| {
            let mut s = String::new();
            let c = &g.translation()[i];
            if !c.is_zero() {
                s.push_str(&format_rational(c));
            }
            for j in 0..d {
                let a = g.linear_entry(i, j);
                if a == 0 {
                    continue;
                }
                if a < 0 {
                    s.push('-');
                } else if !s.is_empty() {
                    s.push('+');
                }
                if a.abs() != 1 {
                    s.push_str(&a.abs().to_string());
                }
                s.push_str(&variable_name(j, d));
            }
            if s.is_empty() {
                s.push('0');
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// A named generator of a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: char,
    pub op: AffineIsometry,
}

/// Ordered generating set with optional labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSetDocument {
    pub dimension: usize,
    pub label: Option<String>,
    pub generators: Vec<NamedGenerator>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RawGenerator {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    xyz: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    generators: Vec<RawGenerator>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
}

fn parse_matrix(rows: &[Vec<String>], d: usize) -> Result<AffineIsometry> {
    if rows.len() != d && rows.len() != d + 1 {
        return Err(Error::DimensionMismatch { expected: d + 1, found: rows.len() });
    }
    let mut m = Vec::new();
    for row in rows {
        if row.len() != d + 1 {
            return Err(Error::DimensionMismatch { expected: d + 1, found: row.len() });
        }
        m.push(row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
    }
    if rows.len() == d + 1 {
        let last = &m[d];
        let ok = last[..d].iter().all(Zero::is_zero) && last[d].is_one();
        if !ok {
            return Err(Error::Document("last matrix row must be (0, ..., 0, 1)".into()));
        }
    }
    let mut linear = Vec::with_capacity(d * d);
    let mut translation = Vec::with_capacity(d);
    for row in &m[..d] {
        for x in &row[..d] {
            if !x.is_integer() {
                return Err(Error::NotUnimodular);
            }
            linear.push(x.to_integer().to_i64().ok_or(Error::Overflow)?);
        }
        translation.push(row[d].clone());
    }
    AffineIsometry::new(d, linear, translation)
}

/// Parses the JSON generating-set document.
pub fn parse_generating_set(document: &str) -> Result<GeneratingSetDocument> {
    let raw: RawDocument =
        serde_json::from_str(document).map_err(|e| Error::Document(e.to_string()))?;
    if raw.dimension == 0 {
        return Err(Error::Document("dimension must be positive".into()));
    }
    if raw.generators.is_empty() {
        return Err(Error::Document("generator list is empty".into()));
    }
    let mut seen = HashSet::new();
    let mut generators = Vec::new();
    for g in raw.generators {
        let mut chars = g.name.chars();
        let name = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => c,
            _ => return Err(Error::Document(format!("generator name `{}` is not a single letter", g.name))),
        };
        if !seen.insert(name) {
            return Err(Error::Document(format!("duplicate generator `{name}`")));
        }
        let op = match (g.xyz, g.matrix) {
            (Some(t), None) => parse_symop(&t, raw.dimension)?,
            (None, Some(m)) => parse_matrix(&m, raw.dimension)?,
            _ => return Err(Error::Document(format!("generator `{name}` needs exactly one of xyz, matrix"))),
        };
        generators.push(NamedGenerator { name, op });
    }
    Ok(GeneratingSetDocument {
        dimension: raw.dimension,
        label: raw.label,
        generators,
        metadata: raw.metadata,
    })
}

impl GeneratingSetDocument {
    pub fn new(dimension: usize, generators: Vec<NamedGenerator>) -> Self {
        GeneratingSetDocument { dimension, label: None, generators, metadata: BTreeMap::new() }
    }

    pub fn names(&self) -> Vec<char> {
        self.generators.iter().map(|g| g.name).collect()
    }

    pub fn ops(&self) -> Vec<AffineIsometry> {
        self.generators.iter().map(|g| g.op.clone()).collect()
    }

    /// Same document with generators taken in the given order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        GeneratingSetDocument {
            generators: order.iter().map(|&i| self.generators[i].clone()).collect(),
            ..self.clone()
        }
    }

    /// Keeps only generators whose names appear in `names`, in document order.
    pub fn restricted(&self, names: &str) -> Self {
        GeneratingSetDocument {
            generators: self
                .generators
                .iter()
                .filter(|g| names.contains(g.name))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let raw = RawDocument {
            dimension: self.dimension,
            label: self.label.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| RawGenerator { name: g.name.to_string(), xyz: Some(format_symop(&g.op)), matrix: None })
                .collect(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parses_paper_style_triplets() {
        let a = parse_symop("x, 1/2-y, 1/4-z", 3).unwrap();
        assert_eq!(a.linear(), &[1, 0, 0, 0, -1, 0, 0, 0, -1]);
        assert_eq!(a.translation(), &[int(0), frac(1, 2), frac(1, 4)]);
        assert!(parse_symop("x, y, z", 3).unwrap().is_identity());
        let c = parse_symop("y,-x,-z", 3).unwrap();
        // image of e1 is column 0: (0,-1,0)
        assert_eq!((c.linear_entry(0, 0), c.linear_entry(1, 0), c.linear_entry(2, 0)), (0, -1, 0));
        assert_eq!((c.linear_entry(0, 1), c.linear_entry(1, 1)), (1, 0));
    }

    #[test]
    fn indexed_variables_and_scaled_terms() {
        let g = parse_symop("x2, x1, -x3+1/3", 3).unwrap();
        assert_eq!(g, parse_symop("y, x, 1/3 - z", 3).unwrap());
        let h = parse_symop("x1, x2, x3, x4, x5+2", 5).unwrap();
        assert_eq!(h.translation()[4], int(2));
        assert_eq!(parse_symop("x-y, x", 2).unwrap().linear(), &[1, -1, 1, 0]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_symop("x, y", 3), Err(Error::ComponentCount { expected: 3, found: 2 }));
        assert_eq!(
            parse_symop("x, q, z", 3),
            Err(Error::UnknownVariable { name: "q".into(), pos: 3 })
        );
        assert!(matches!(parse_symop("x, y+, z", 3), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_symop("x, 1/0+y, z", 3), Err(Error::Syntax { .. })));
        assert_eq!(parse_symop("x, y, w", 3), Err(Error::UnknownVariable { name: "w".into(), pos: 6 }));
        assert_eq!(parse_symop("2x, y", 2), Err(Error::NotUnimodular));
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_symop(&AffineIsometry::identity(3)), "x, y, z");
        let a = parse_symop("x, -y+1/2, -z+1/4", 3).unwrap();
        assert_eq!(format_symop(&a), "x, 1/2-y, 1/4-z");
        let t = AffineIsometry::from_translation(vec![int(1), int(0)]);
        assert_eq!(format_symop(&t), "1+x, y");
        assert_eq!(parse_symop(&format_symop(&t), 2).unwrap(), t);
    }

    #[test]
    fn documents() {
        let doc = r#"{"dimension":3,"label":"I-42d","generators":[
            {"name":"a","xyz":"x, 1/2-y, 1/4-z"},
            {"name":"b","xyz":"1/2-x, y, -1/4-z"},
            {"name":"c","matrix":[["0","1","0","0"],["-1","0","0","0"],["0","0","-1","0"]]}]}"#;
        let d = parse_generating_set(doc).unwrap();
        assert_eq!(d.names(), vec!['a', 'b', 'c']);
        assert_eq!(d.generators[2].op, parse_symop("y,-x,-z", 3).unwrap());
        let again = parse_generating_set(&d.to_json()).unwrap();
        assert_eq!(again, d);

        assert!(parse_generating_set(r#"{"dimension":2,"generators":[]}"#).is_err());
        let dup = r#"{"dimension":1,"generators":[{"name":"a","xyz":"x+1"},{"name":"a","xyz":"-x"}]}"#;
        assert!(matches!(parse_generating_set(dup), Err(Error::Document(_))));
        let mismatch = r#"{"dimension":2,"generators":[{"name":"a","xyz":"x+1"}]}"#;
        assert!(matches!(parse_generating_set(mismatch), Err(Error::ComponentCount { .. })));
    }
}
