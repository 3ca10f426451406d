//! Line-oriented parser for realization files and catalog entry bodies.
//!
//! A realization file holds optional `param` constraint lines and one
//! `e<k> = <field>` line per basis element, with `#` comments. Catalog
//! entries extend this with `invariant`, `iod`, `liedet`, `case`, `slot`,
//! `series`, `samples`, `require`, `counting` and `labels` directives;
//! expression cells stay as raw text until instantiation because exponents
//! may depend on parameter values.

use super::expr_parser::{parse_expr_with, ParseOptions, DX_MARK, DY_MARK};
use crate::error::{Error, Result, SourceSpan};
use crate::expr::zero::{parse_constraint, parse_rational, Constraint};
use crate::expr::{Expr, Symbol};
use crate::jet::VectorField;
use num_rational::BigRational;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
pub enum CaseRhs {
    Rational(BigRational),
    /// `r+1`, resolved against the series index at instantiation time.
    RPlusOne,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CasePredicate {
    pub param: String,
    pub negated: bool,
    pub rhs: CaseRhs,
}

impl CasePredicate {
    pub fn holds(&self, value: &BigRational, series_r: u32) -> bool {
        let rhs = match &self.rhs {
            CaseRhs::Rational(r) => r.clone(),
            CaseRhs::RPlusOne => BigRational::from_integer((series_r as i64 + 1).into()),
        };
        (value == &rhs) != self.negated
    }

    pub fn describe(&self) -> String {
        let rhs = match &self.rhs {
            CaseRhs::Rational(r) => format!("{r}"),
            CaseRhs::RPlusOne => "r+1".into(),
        };
        format!("{}{}{}", self.param, if self.negated { "!=" } else { "=" }, rhs)
    }
}

/// Expected Lie determinant cell: an expression up to a nonzero constant, or
/// the `const` marker meaning any nonzero constant.
#[derive(Debug, Clone, PartialEq)]
pub enum LieDetCell {
    ConstMarker,
    Text(String),
}

/// One group of verification cells, optionally guarded by a case predicate.
#[derive(Debug, Clone, Default)]
pub struct CellGroup {
    pub case: Option<CasePredicate>,
    pub invariant_texts: Vec<String>,
    pub iod_text: Option<String>,
    pub liedet: Option<LieDetCell>,
    pub samples: BTreeMap<String, Vec<BigRational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub min: u32,
    pub default: u32,
    pub max: u32,
}

/// Parsed but uninstantiated catalog entry or realization file.
#[derive(Debug, Clone)]
pub struct EntrySpec {
    pub label: String,
    pub params: Vec<(String, Constraint)>,
    /// Joint order constraints `a < b` between parameters.
    pub requires: Vec<(String, String)>,
    pub fields: Vec<VectorField>,
    pub slots: Vec<(String, String)>,
    pub series: Option<SeriesSpec>,
    pub groups: Vec<CellGroup>,
    pub counting: bool,
    pub labels: BTreeMap<String, String>,
}

impl Default for EntrySpec {
    fn default() -> Self {
        EntrySpec {
            label: String::new(),
            params: Vec::new(),
            requires: Vec::new(),
            fields: Vec::new(),
            slots: Vec::new(),
            series: None,
            groups: vec![CellGroup::default()],
            counting: true,
            labels: BTreeMap::new(),
        }
    }
}

impl EntrySpec {
    pub fn constraint_of(&self, name: &str) -> Constraint {
        self.params
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Constraint::free)
    }
}

fn line_span(offset: usize, line_no: usize, line: &str) -> SourceSpan {
    SourceSpan::new(offset, offset + line.len(), line_no, 1)
}

/// Extracts a vector field from a parsed expression over the `D[x]`, `D[y]`
/// marker atoms, checking linearity and planarity.
pub fn field_from_expr(e: &Expr, span: SourceSpan) -> Result<VectorField> {
    let dx = Symbol::param(DX_MARK);
    let dy = Symbol::param(DY_MARK);
    let xi = e.diff(&dx);
    let eta = e.diff(&dy);
    for c in [&xi, &eta] {
        if c.contains_symbol(&dx) || c.contains_symbol(&dy) {
            return Err(Error::parse(span, "field must be linear in D[x], D[y]", &["linear field"]));
        }
        if c.has_jet_or_lambda() {
            return Err(Error::Arity(format!("field coefficient {c} lives on the plane")));
        }
    }
    let residual = e.clone()
        - crate::expr::mul(vec![xi.clone(), Expr::sym(dx.clone())])
        - crate::expr::mul(vec![eta.clone(), Expr::sym(dy.clone())]);
    if !residual.is_zero_const() {
        return Err(Error::parse(
            span,
            "field must be a combination of D[x] and D[y] with planar coefficients",
            &["linear field"],
        ));
    }
    VectorField::new(xi, eta)
}

pub fn parse_field_text(text: &str, span: SourceSpan) -> Result<VectorField> {
    let opts = ParseOptions { field_atoms: true, ..Default::default() };
    let e = parse_expr_with(text, opts).map_err(|err| relocate(err, span))?;
    field_from_expr(&e, span)
}

/// Shifts a sub-parser error onto the enclosing file span so the reported
/// location still points inside the offending token.
fn relocate(err: Error, base: SourceSpan) -> Error {
    match err {
        Error::Parse { span, message, expected } => Error::Parse {
            span: SourceSpan::new(
                base.begin + span.begin,
                base.begin + span.end,
                base.line,
                span.column,
            ),
            message,
            expected,
        },
        other => other,
    }
}

fn parse_case_predicate(text: &str) -> Result<CasePredicate> {
    let text = text.trim().trim_end_matches(':').trim();
    let (param, negated, rest) = if let Some((p, r)) = text.split_once("!=") {
        (p.trim(), true, r.trim())
    } else if let Some((p, r)) = text.split_once('=') {
        (p.trim(), false, r.trim())
    } else {
        return Err(Error::Invalid(format!("bad case predicate `{text}`")));
    };
    let rhs = if rest == "r+1" {
        CaseRhs::RPlusOne
    } else {
        CaseRhs::Rational(parse_rational(rest)?)
    };
    Ok(CasePredicate { param: param.to_string(), negated, rhs })
}

/// Parses one entry body (already stripped of `entry`/`end` framing).
/// `offset`/`first_line` locate the body inside the enclosing file.
pub fn parse_entry_body(label: &str, lines: &[(usize, usize, String)]) -> Result<EntrySpec> {
    let mut spec = EntrySpec { label: label.to_string(), ..Default::default() };
    let mut field_count = 0usize;
    for (offset, line_no, raw) in lines {
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let span = line_span(*offset, *line_no, raw);
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "param" => {
                let (name, cons) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(span, "param needs a name and a constraint", &["param NAME CONSTRAINT"]))?;
                spec.params.push((name.to_string(), parse_constraint(cons.trim())?));
            }
            "samples" => {
                let (name, vals) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(span, "samples needs `name = v1, v2`", &["samples NAME = ..."]))?;
                let values = vals
                    .split(',')
                    .map(|v| parse_rational(v.trim()))
                    .collect::<Result<Vec<_>>>()?;
                spec.groups
                    .last_mut()
                    .unwrap()
                    .samples
                    .insert(name.trim().to_string(), values);
            }
            "require" => {
                let parts: Vec<&str> = rest.split('<').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(Error::parse(span, "require supports `a < b`", &["require A < B"]));
                }
                spec.requires.push((parts[0].to_string(), parts[1].to_string()));
            }
            "series" => {
                // series r min 3 default 3 [max 6]
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let mut min = 1u32;
                let mut default = 1u32;
                let mut max = 6u32;
                let mut i = 0;
                while i < toks.len() {
                    match toks[i] {
                        "r" => i += 1,
                        "min" => {
                            min = toks[i + 1].parse().map_err(|_| Error::parse(span, "bad series min", &["integer"]))?;
                            i += 2;
                        }
                        "default" => {
                            default = toks[i + 1].parse().map_err(|_| Error::parse(span, "bad series default", &["integer"]))?;
                            i += 2;
                        }
                        "max" => {
                            max = toks[i + 1].parse().map_err(|_| Error::parse(span, "bad series max", &["integer"]))?;
                            i += 2;
                        }
                        _ => return Err(Error::parse(span, "bad series directive", &["series r min M default D"])),
                    }
                }
                spec.series = Some(SeriesSpec { min, default, max });
            }
            "slot" => {
                // slot xi1 default = x^2
                let (name, after) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::parse(span, "slot needs a name", &["slot NAME default = EXPR"]))?;
                let text = after
                    .trim()
                    .strip_prefix("default")
                    .and_then(|t| t.trim().strip_prefix('='))
                    .ok_or_else(|| Error::parse(span, "slot needs `default = <expr>`", &["slot NAME default = EXPR"]))?;
                spec.slots.push((name.to_string(), text.trim().to_string()));
            }
            "case" => {
                let pred = parse_case_predicate(rest)?;
                // The implicit leading group is reused if still empty.
                let reuse = spec.groups.len() == 1
                    && spec.groups[0].case.is_none()
                    && spec.groups[0].invariant_texts.is_empty()
                    && spec.groups[0].iod_text.is_none()
                    && spec.groups[0].liedet.is_none();
                if reuse {
                    spec.groups[0].case = Some(pred);
                } else {
                    spec.groups.push(CellGroup { case: Some(pred), ..Default::default() });
                }
            }
            "invariant" => {
                let text = rest
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(span, "invariant needs `= <expr>`", &["invariant = EXPR"]))?;
                spec.groups.last_mut().unwrap().invariant_texts.push(text.trim().to_string());
            }
            "iod" => {
                let text = rest
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(span, "iod needs `= <expr>`", &["iod = EXPR"]))?;
                spec.groups.last_mut().unwrap().iod_text = Some(text.trim().to_string());
            }
            "liedet" => {
                let text = rest
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(span, "liedet needs `= <expr>` or `= const`", &["liedet = EXPR"]))?
                    .trim();
                let cell = if text == "const" {
                    LieDetCell::ConstMarker
                } else {
                    LieDetCell::Text(text.to_string())
                };
                spec.groups.last_mut().unwrap().liedet = Some(cell);
            }
            "counting" => {
                spec.counting = rest.trim() != "off";
            }
            "labels" => {
                for kv in rest.split_whitespace() {
                    if let Some((k, v)) = kv.split_once('=') {
                        spec.labels.insert(k.to_string(), v.trim_matches('"').to_string());
                    }
                }
            }
            _ if head.starts_with('e') && head[1..].chars().all(|c| c.is_ascii_digit()) && !head[1..].is_empty() => {
                let idx: usize = head[1..].parse().unwrap();
                field_count += 1;
                if idx != field_count {
                    return Err(Error::parse(
                        span,
                        format!("basis element e{idx} out of order (expected e{field_count})"),
                        &["sequential basis elements"],
                    ));
                }
                let text = rest
                    .strip_prefix('=')
                    .ok_or_else(|| Error::parse(span, "basis element needs `= <field>`", &["e1 = FIELD"]))?;
                spec.fields.push(parse_field_text(text.trim(), span)?);
            }
            other => {
                return Err(Error::parse(
                    span,
                    format!("unknown directive `{other}`"),
                    &["param", "e<k> = ...", "invariant", "iod", "liedet", "case", "slot", "series"],
                ));
            }
        }
    }
    if spec.fields.is_empty() {
        return Err(Error::Invalid(format!("entry {label}: no basis elements")));
    }
    Ok(spec)
}

fn number_lines(text: &str) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, line) in text.lines().enumerate() {
        out.push((offset, i + 1, line.to_string()));
        offset += line.len() + 1;
    }
    out
}

/// Parses a standalone realization file (the full directive set is accepted;
/// cells are retained in the returned spec).
pub fn parse_realization_file(text: &str) -> Result<EntrySpec> {
    parse_entry_body("file", &number_lines(text))
}

/// Builds the Realization from a spec, substituting slot defaults into the
/// basis fields. Parameters stay symbolic.
pub fn realize(spec: &EntrySpec) -> Result<crate::lie::Realization> {
    let mut env: BTreeMap<Symbol, Expr> = BTreeMap::new();
    for (name, text) in &spec.slots {
        let e = super::expr_parser::parse_expr(text)?;
        env.insert(Symbol::param(name), e);
    }
    let basis = spec
        .fields
        .iter()
        .map(|f| {
            VectorField::new(f.xi.substitute(&env), f.eta.substitute(&env))
        })
        .collect::<Result<Vec<_>>>()?;
    let params = spec
        .params
        .iter()
        .map(|(n, c)| (std::sync::Arc::<str>::from(n.as_str()), c.clone()))
        .collect();
    Ok(crate::lie::Realization { basis, params, label: Some(spec.label.clone()) })
}

/// Spec operation surface: realization files parse to a Realization with the
/// basis in declaration order and declared parameter constraints.
pub fn parse_realization(text: &str) -> Result<crate::lie::Realization> {
    let spec = parse_realization_file(text)?;
    realize(&spec)
}
