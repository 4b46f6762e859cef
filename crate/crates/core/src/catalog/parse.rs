//! Parser for the `.eqh` space-definition format.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{check_slot, CatalogError, LimitBasis, MapKind, Slot, SpaceSpec};
use crate::module::{BasisSpec, GradedMap, ModuleElem};
use crate::ring::{RingConfig, RingElem};
use crate::seidel::WeightRule;
use crate::template::{Seed, TVar};
use crate::{TemplateCoeff, TemplateMap};

type Scalar = RingElem<TemplateCoeff>;
type Vector = ModuleElem<TemplateCoeff>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Question,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Equals,
    Other(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Question => "`?`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Other(c) => format!("`{c}`"),
            Tok::End => "end of line".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(text: &str, col0: usize) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                col,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        let tok = match c {
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '?' => Tok::Question,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '=' => Tok::Equals,
            other => Tok::Other(other),
        };
        out.push(Token { tok, col });
        i += 1;
    }
    out.push(Token {
        tok: Tok::End,
        col: col0 + chars.len(),
    });
    out
}

/// What an expression may refer to.
#[derive(Clone, Copy)]
struct Scope<'a> {
    config: RingConfig,
    basis: Option<&'a BasisSpec>,
    level: bool,
    unknowns: bool,
}

#[derive(Debug, Clone)]
enum Val {
    Scalar(Scalar),
    Vector(Vector),
}

struct LineParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    scope: Scope<'a>,
}

impl<'a> LineParser<'a> {
    fn new(text: &str, line: usize, col0: usize, scope: Scope<'a>) -> Self {
        LineParser {
            toks: lex(text, col0),
            pos: 0,
            line,
            scope,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, expected: &[&str]) -> CatalogError {
        let t = &self.toks[self.pos];
        CatalogError::Syntax {
            line: self.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn semantic(&self, message: impl Into<String>) -> CatalogError {
        CatalogError::Semantic {
            line: self.line,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), CatalogError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(&[name]))
        }
    }

    fn ident(&mut self) -> Result<String, CatalogError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.syntax(&["identifier"])),
        }
    }

    fn end(&mut self) -> Result<(), CatalogError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.syntax(&["operator", "end of line"]))
        }
    }

    fn signed_int(&mut self) -> Result<BigInt, CatalogError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.syntax(&["integer"])),
        }
    }

    fn expr(&mut self) -> Result<Val, CatalogError> {
        let mut acc = self.term()?;
        loop {
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc = self.add(acc, rhs, neg)?;
        }
    }

    fn term(&mut self) -> Result<Val, CatalogError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            acc = self.mul(acc, rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Val, CatalogError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(match self.unary()? {
                Val::Scalar(s) => Val::Scalar(-s),
                Val::Vector(v) => Val::Vector(v.neg()),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, CatalogError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = if *self.peek() == Tok::LParen {
            self.bump();
            let e = self.signed_int()?;
            self.expect(Tok::RParen, "`)`")?;
            e
        } else {
            self.signed_int()?
        };
        let exp = exp
            .to_i64()
            .filter(|e| e.abs() <= 1000)
            .ok_or_else(|| self.semantic("exponent out of range"))?;
        match base {
            Val::Vector(_) => Err(self.semantic("cannot raise a basis vector to a power")),
            Val::Scalar(s) if exp >= 0 => Ok(Val::Scalar(s.pow(exp as u32))),
            Val::Scalar(s) => self.invert_monomial(&s, -exp).map(Val::Scalar),
        }
    }

    fn invert_monomial(&self, s: &Scalar, k: i64) -> Result<Scalar, CatalogError> {
        let mut terms = s.terms();
        let (Some((m, c)), None) = (terms.next(), terms.next()) else {
            return Err(self.semantic("negative powers apply only to monomials"));
        };
        let c = c
            .constant_value()
            .filter(|c| c.abs().is_one())
            .ok_or_else(|| self.semantic("negative powers need a unit coefficient"))?;
        let sign = if c.is_negative() && k % 2 == 1 { -1 } else { 1 };
        RingElem::monomial(
            self.scope.config,
            TemplateCoeff::from_int(sign),
            -m.q * k,
            -m.u * k,
        )
        .map_err(|e| self.semantic(e.to_string()))
    }

    fn atom(&mut self) -> Result<Val, CatalogError> {
        let config = self.scope.config;
        let scalar = |c: TemplateCoeff| Val::Scalar(RingElem::constant(config, c));
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(scalar(TemplateCoeff::constant(n)))
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Question => {
                self.bump();
                let name = self.ident()?;
                if !self.scope.unknowns {
                    return Err(self.semantic(format!("unknown ?{name} not allowed here")));
                }
                Ok(scalar(TemplateCoeff::var(TVar::Unknown(name))))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "q" => RingElem::q(config)
                        .map(Val::Scalar)
                        .map_err(|_| self.semantic("q is not available in a ring without q")),
                    "u" => Ok(Val::Scalar(RingElem::u(config))),
                    "r" if self.scope.level => Ok(scalar(TemplateCoeff::var(TVar::Level))),
                    "r" => Err(self.semantic("the level r is not allowed here")),
                    _ => match self.scope.basis {
                        Some(b) => {
                            let i = b
                                .index_of(&name)
                                .map_err(|_| self.semantic(format!("unknown symbol `{name}`")))?;
                            Ok(Val::Vector(ModuleElem::basis_vector(b, config, i)))
                        }
                        None => Err(self.semantic(format!("unknown symbol `{name}`"))),
                    },
                }
            }
            _ => Err(self.syntax(&["integer", "symbol", "`?`", "`(`", "`-`"])),
        }
    }

    fn add(&self, a: Val, b: Val, negate: bool) -> Result<Val, CatalogError> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(if negate { x - y } else { x + y })),
            (Val::Vector(x), Val::Vector(y)) => {
                let y = if negate { y.neg() } else { y };
                Ok(Val::Vector(x.try_add(&y).map_err(|e| self.semantic(e.to_string()))?))
            }
            _ => Err(self.semantic("cannot add a scalar and a basis vector")),
        }
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val, CatalogError> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x * y)),
            (Val::Scalar(s), Val::Vector(v)) | (Val::Vector(v), Val::Scalar(s)) => Ok(Val::Vector(
                v.scale(&s).map_err(|e| self.semantic(e.to_string()))?,
            )),
            (Val::Vector(_), Val::Vector(_)) => {
                Err(self.semantic("cannot multiply two basis vectors"))
            }
        }
    }

    fn vector(&mut self) -> Result<Vector, CatalogError> {
        match self.expr()? {
            Val::Vector(v) => Ok(v),
            Val::Scalar(s) if s.is_zero() => match self.scope.basis {
                Some(b) => Ok(ModuleElem::zero(b, self.scope.config)),
                None => Err(self.semantic("expected a module element")),
            },
            Val::Scalar(_) => Err(self.semantic("expected a module element, found a scalar")),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, CatalogError> {
        match self.expr()? {
            Val::Scalar(s) => Ok(s),
            Val::Vector(_) => Err(self.semantic("expected a scalar, found a module element")),
        }
    }
}

struct SourceLine {
    number: usize,
    text: String,
    col0: usize,
}

fn split_sections(text: &str) -> Result<Vec<(String, usize, Vec<SourceLine>)>, CatalogError> {
    let mut sections: Vec<(String, usize, Vec<SourceLine>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = body.len() - body.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or(CatalogError::Syntax {
                line: number,
                col: col0 + trimmed.len(),
                expected: vec!["`]`".into()],
                found: "end of line".into(),
            })?;
            let name = name.trim().to_string();
            const KNOWN: [&str; 7] = ["space", "product", "seidel", "inverse", "seeds", "zeros", "limit"];
            if !KNOWN.contains(&name.as_str()) {
                return Err(CatalogError::Syntax {
                    line: number,
                    col: col0 + 1,
                    expected: KNOWN.iter().map(|k| format!("`{k}`")).collect(),
                    found: format!("`{name}`"),
                });
            }
            if sections.iter().any(|(n, _, _)| *n == name) {
                return Err(CatalogError::Semantic {
                    line: number,
                    message: format!("duplicate section [{name}]"),
                });
            }
            sections.push((name, number, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, lines)) => lines.push(SourceLine {
                number,
                text: trimmed.to_string(),
                col0,
            }),
            None => {
                return Err(CatalogError::Syntax {
                    line: number,
                    col: col0,
                    expected: vec!["section header".into()],
                    found: format!("`{trimmed}`"),
                })
            }
        }
    }
    Ok(sections)
}

fn semantic(line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Semantic {
        line,
        message: message.into(),
    }
}

fn key_value(line: &SourceLine) -> Result<(String, String), CatalogError> {
    let Some(eq) = line.text.find('=') else {
        return Err(CatalogError::Syntax {
            line: line.number,
            col: line.col0 + line.text.len(),
            expected: vec!["`=`".into()],
            found: "end of line".into(),
        });
    };
    Ok((
        line.text[..eq].trim().to_string(),
        line.text[eq + 1..].trim().to_string(),
    ))
}

#[derive(Default)]
struct Header {
    id: Option<String>,
    q_degree: Option<i64>,
    labels: Option<Vec<String>>,
    degrees: Option<Vec<i64>>,
    maslov: Option<i64>,
    unit: Option<String>,
    generator: Option<String>,
    slope: Option<BigRational>,
    offset: Option<BigRational>,
}

fn parse_header(lines: &[SourceLine]) -> Result<Header, CatalogError> {
    let mut h = Header::default();
    let mut seen = BTreeSet::new();
    for line in lines {
        let (key, value) = key_value(line)?;
        if !seen.insert(key.clone()) {
            return Err(semantic(line.number, format!("duplicate key `{key}`")));
        }
        let int = |v: &str| {
            v.parse::<i64>()
                .map_err(|_| semantic(line.number, format!("`{key}` expects an integer")))
        };
        let rational = |v: &str| {
            BigRational::from_str(v)
                .map_err(|_| semantic(line.number, format!("`{key}` expects a rational")))
        };
        match key.as_str() {
            "id" => h.id = Some(value),
            "q_degree" => h.q_degree = Some(int(&value)?),
            "basis" => h.labels = Some(value.split_whitespace().map(String::from).collect()),
            "degrees" => {
                h.degrees = Some(
                    value
                        .split_whitespace()
                        .map(int)
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "maslov" => h.maslov = Some(int(&value)?),
            "unit" => h.unit = Some(value),
            "generator" => h.generator = Some(value),
            "weight_slope" => h.slope = Some(rational(&value)?),
            "weight_offset" => h.offset = Some(rational(&value)?),
            _ => return Err(semantic(line.number, format!("unknown key `{key}`"))),
        }
    }
    Ok(h)
}

fn parse_map(
    lines: &[SourceLine],
    scope: Scope,
    basis: &BasisSpec,
    shift: i64,
) -> Result<TemplateMap, CatalogError> {
    let config = scope.config;
    let mut map = GradedMap::zero(basis, basis, config, shift);
    let mut matrix = map.matrix().clone();
    let mut seen = BTreeSet::new();
    for line in lines {
        let mut p = LineParser::new(&line.text, line.number, line.col0, scope);
        let label = p.ident()?;
        let k = basis
            .index_of(&label)
            .map_err(|_| p.semantic(format!("unknown basis label `{label}`")))?;
        if !seen.insert(k) {
            return Err(p.semantic(format!("duplicate entry for `{label}`")));
        }
        p.expect(Tok::Arrow, "`->`")?;
        let v = p.vector()?;
        p.end()?;
        for (l, c) in v.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let expected = shift + basis.degree(k) - basis.degree(l);
            match c.degree() {
                Ok(d) if d == expected => {}
                _ => {
                    return Err(p.semantic(format!(
                        "coefficient {} of {} in the image of {label} must have degree {expected}",
                        c.render(),
                        basis.label(l)
                    )))
                }
            }
            matrix[l][k] = c.clone();
        }
    }
    map = GradedMap::new(basis.clone(), basis.clone(), config, shift, matrix)
        .map_err(|e| CatalogError::Invalid(e.to_string()))?;
    Ok(map)
}

fn parse_seeds(lines: &[SourceLine], config: RingConfig) -> Result<Vec<Seed>, CatalogError> {
    let scope = Scope {
        config,
        basis: None,
        level: true,
        unknowns: false,
    };
    let mut seeds = Vec::new();
    for line in lines {
        let mut p = LineParser::new(&line.text, line.number, line.col0, scope);
        let name = p.ident()?;
        let level = if *p.peek() == Tok::LBracket {
            p.bump();
            let l = p.signed_int()?;
            p.expect(Tok::RBracket, "`]`")?;
            Some(l.to_i64().ok_or_else(|| p.semantic("level out of range"))?)
        } else {
            None
        };
        p.expect(Tok::Equals, "`=`")?;
        let s = p.scalar()?;
        p.end()?;
        let value = if s.is_zero() {
            TemplateCoeff::zero()
        } else {
            s.as_constant()
                .ok_or_else(|| p.semantic("seed values may not involve q or u"))?
        };
        if level.is_some() && value.vars().contains(&TVar::Level) {
            return Err(p.semantic("a level-specific seed may not involve r"));
        }
        seeds.push(Seed { name, level, value });
    }
    Ok(seeds)
}

fn parse_zeros(lines: &[SourceLine], config: RingConfig, basis: &BasisSpec) -> Result<Vec<Slot>, CatalogError> {
    let scope = Scope {
        config,
        basis: Some(basis),
        level: false,
        unknowns: false,
    };
    let mut out = Vec::new();
    for line in lines {
        let mut p = LineParser::new(&line.text, line.number, line.col0, scope);
        let map = match p.ident()?.as_str() {
            "product" => MapKind::Product,
            "seidel" => MapKind::Seidel,
            _ => {
                p.pos = 0;
                return Err(p.syntax(&["`product`", "`seidel`"]));
            }
        };
        let input = p.ident()?;
        p.expect(Tok::Arrow, "`->`")?;
        let v = p.vector()?;
        p.end()?;
        let mut found = None;
        for (l, c) in v.coords().iter().enumerate() {
            for (m, coeff) in c.terms() {
                if found.is_some() || !coeff.is_one() {
                    return Err(p.semantic("a zero slot is a single monomial times a basis label"));
                }
                found = Some((l, m));
            }
        }
        let (l, m) = found.ok_or_else(|| p.semantic("empty zero slot"))?;
        basis
            .index_of(&input)
            .map_err(|_| p.semantic(format!("unknown basis label `{input}`")))?;
        out.push(Slot {
            map,
            input,
            target: basis.label(l).to_string(),
            q: m.q,
            u: m.u,
        });
    }
    Ok(out)
}

fn parse_limit(lines: &[SourceLine], config: RingConfig, basis: &BasisSpec) -> Result<LimitBasis, CatalogError> {
    let scope = Scope {
        config,
        basis: Some(basis),
        level: false,
        unknowns: false,
    };
    let mut labels = Vec::new();
    let mut vectors = Vec::new();
    for line in lines {
        let mut p = LineParser::new(&line.text, line.number, line.col0, scope);
        let label = p.ident()?;
        p.expect(Tok::Arrow, "`->`")?;
        let v = p.vector()?;
        p.end()?;
        let coords = v
            .coords()
            .iter()
            .map(|c| {
                c.try_map_coeffs(|x| x.constant_value().ok_or(()))
                    .map_err(|_| p.semantic("limit basis coefficients must be numeric"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        labels.push(label);
        vectors.push(ModuleElem::from_coords(basis, config, coords).expect("same shape"));
    }
    Ok(LimitBasis { labels, vectors })
}

/// Parse a `.eqh` definition and check every invariant.
pub fn parse_space(text: &str) -> Result<SpaceSpec, CatalogError> {
    let sections = split_sections(text)?;
    let Some((first, first_line, header_lines)) = sections.first() else {
        return Err(CatalogError::Syntax {
            line: 1,
            col: 1,
            expected: vec!["`[space]`".into()],
            found: "end of input".into(),
        });
    };
    if first != "space" {
        return Err(semantic(*first_line, "the first section must be [space]"));
    }
    let h = parse_header(header_lines)?;
    let missing = |k: &str| semantic(*first_line, format!("[space] is missing `{k}`"));
    let id = h.id.ok_or_else(|| missing("id"))?;
    let config = match h.q_degree {
        Some(d) => RingConfig::with_q(d).map_err(|e| semantic(*first_line, e.to_string()))?,
        None => RingConfig::without_q(),
    };
    let labels = h.labels.ok_or_else(|| missing("basis"))?;
    for l in &labels {
        if matches!(l.as_str(), "q" | "u" | "r")
            || !l.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            || !l.chars().all(|c| c.is_alphanumeric() || c == '_')
        {
            return Err(semantic(*first_line, format!("invalid basis label `{l}`")));
        }
    }
    let degrees = h.degrees.ok_or_else(|| missing("degrees"))?;
    let basis = BasisSpec::new(labels, degrees).map_err(|e| semantic(*first_line, e.to_string()))?;
    let maslov = h.maslov.ok_or_else(|| missing("maslov"))?;
    let unit = h.unit.ok_or_else(|| missing("unit"))?;
    let weight = WeightRule {
        slope: h.slope.unwrap_or_else(BigRational::one),
        offset: h.offset.unwrap_or_else(BigRational::zero),
    };

    let scope = Scope {
        config,
        basis: Some(&basis),
        level: true,
        unknowns: true,
    };
    let find = |name: &str| sections.iter().find(|(n, _, _)| n == name);
    let product = find("product")
        .map(|(_, _, lines)| parse_map(lines, scope, &basis, 2))
        .transpose()?;
    let seidel = match find("seidel") {
        Some((_, _, lines)) => parse_map(lines, scope, &basis, maslov)?,
        None => return Err(semantic(*first_line, "missing [seidel] section")),
    };
    let inverse = find("inverse")
        .map(|(_, _, lines)| parse_map(lines, scope, &basis, -maslov))
        .transpose()?;
    let seeds = find("seeds")
        .map(|(_, _, lines)| parse_seeds(lines, config))
        .transpose()?
        .unwrap_or_default();
    let zeros = find("zeros")
        .map(|(_, _, lines)| parse_zeros(lines, config, &basis))
        .transpose()?
        .unwrap_or_default();
    let limit = find("limit")
        .map(|(_, _, lines)| parse_limit(lines, config, &basis))
        .transpose()?;

    let spec = SpaceSpec {
        id,
        config,
        basis,
        unit,
        generator: h.generator,
        product,
        seidel,
        inverse,
        seeds,
        zeros,
        limit,
        weight,
    };
    if let Some((_, _, lines)) = find("zeros") {
        for (slot, line) in spec.zeros.iter().zip(lines) {
            check_slot(&spec, slot).map_err(|m| semantic(line.number, m))?;
        }
    }
    spec.validate()?;
    Ok(spec)
}
