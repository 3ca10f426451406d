//! The embedded catalog: machine-readable data for every realization row,
//! its invariant basis, invariant-differentiation multiplier and Lie
//! determinant, the real-to-complex transformation rows, and constructors
//! for the notation block.
//!
//! The catalog is data, not code: `data.cat` is parsed at startup and
//! embedded in the binary. Series rows are stored at their default series
//! index; other indices regenerate through `series::build_series`, which a
//! unit test keeps consistent with the stored text.

pub mod notation;
pub mod series;

use crate::error::{Error, Result};
use crate::expr::zero::{is_zero, Constraint, ZeroPolicy};
use crate::expr::{Expr, Symbol};
use crate::jet::VectorField;
use crate::lie::Realization;
use crate::parse::{
    parse_entry_body, parse_expr_with, CellGroup, EntrySpec, LieDetCell, MacroResolver,
    ParseOptions,
};
use crate::scalar::Scalar;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const CATALOG_TEXT: &str = include_str!("data.cat");

/// Notation macros available inside catalog expression cells.
pub struct CatalogMacros;

fn int_arg(args: &[Expr], idx: usize, name: &str) -> Result<u32> {
    args.get(idx)
        .and_then(|e| e.as_const())
        .and_then(|c| c.as_i64())
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Invalid(format!("{name}: argument {} must be a small integer", idx + 1)))
}

impl MacroResolver for CatalogMacros {
    fn is_macro(&self, name: &str) -> bool {
        matches!(
            name,
            "W" | "K" | "S" | "Q" | "P" | "B0" | "B1" | "R4" | "U5" | "Ut5" | "V7" | "Qt3" | "dd" | "dlog"
        )
    }

    fn resolve(&self, name: &str, args: Vec<Expr>) -> Result<Expr> {
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(Error::Invalid(format!("{name} takes {n} argument(s), got {}", args.len())));
            }
            Ok(())
        };
        match name {
            "S" => {
                arity(1)?;
                notation::s(int_arg(&args, 0, name)?)
            }
            "Q" => {
                arity(1)?;
                notation::q(int_arg(&args, 0, name)?)
            }
            "P" => {
                arity(4)?;
                Ok(notation::p(int_arg(&args, 0, name)?, int_arg(&args, 1, name)?, &args[2], &args[3]))
            }
            "W" => notation::wronskian(&args),
            "K" => notation::k_form(&args).map(|(k, _)| k),
            "dd" => {
                arity(2)?;
                Ok(notation::dd(&args[0], int_arg(&args, 1, name)?))
            }
            "dlog" => {
                arity(1)?;
                Ok(notation::dlog(&args[0]))
            }
            "B0" => {
                arity(0)?;
                Ok(notation::b0())
            }
            "B1" => {
                arity(0)?;
                Ok(notation::b1())
            }
            "R4" => {
                arity(0)?;
                Ok(notation::r4())
            }
            "U5" => {
                arity(0)?;
                Ok(notation::u5())
            }
            "Ut5" => {
                arity(0)?;
                Ok(notation::ut5())
            }
            "V7" => {
                arity(0)?;
                Ok(notation::v7())
            }
            "Qt3" => {
                arity(0)?;
                Ok(notation::qt3())
            }
            other => Err(Error::Invalid(format!("unknown macro `{other}`"))),
        }
    }
}

/// Parses a catalog expression cell with the notation macros and bindings.
pub fn parse_cell(text: &str, env: &BTreeMap<Symbol, Expr>) -> Result<Expr> {
    let opts = ParseOptions { field_atoms: false, resolver: &CatalogMacros, env: Some(env) };
    parse_expr_with(text, opts)
}

/// One stored real-to-complex transformation row.
#[derive(Debug, Clone)]
pub struct Table2Spec {
    pub n1: String,
    pub source: String,
    pub n2: String,
    pub map_text: (String, String),
    pub inverse_text: (String, String),
    pub matrix_text: String,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub entries: Vec<EntrySpec>,
    pub table2: Vec<Table2Spec>,
}

impl Catalog {
    /// Parses the embedded data file.
    pub fn load() -> Result<Catalog> {
        Self::parse(CATALOG_TEXT)
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        let mut entries = Vec::new();
        let mut table2 = Vec::new();
        let mut lines = Vec::new();
        let mut offset = 0usize;
        for (i, line) in text.lines().enumerate() {
            lines.push((offset, i + 1, line.to_string()));
            offset += line.len() + 1;
        }
        let mut i = 0;
        while i < lines.len() {
            let raw = lines[i].2.trim();
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                i += 1;
                continue;
            }
            if let Some(label) = body.strip_prefix("entry ") {
                let label = label.trim().to_string();
                let start = i + 1;
                let mut end = start;
                while end < lines.len() && lines[end].2.split('#').next().unwrap_or("").trim() != "end" {
                    end += 1;
                }
                if end == lines.len() {
                    return Err(Error::Invalid(format!("entry {label}: missing `end`")));
                }
                entries.push(parse_entry_body(&label, &lines[start..end])?);
                i = end + 1;
                continue;
            }
            if let Some(rest) = body.strip_prefix("table2 ") {
                let spec = parse_table2_header(rest)?;
                let start = i + 1;
                let mut end = start;
                while end < lines.len() && lines[end].2.split('#').next().unwrap_or("").trim() != "end" {
                    end += 1;
                }
                if end == lines.len() {
                    return Err(Error::Invalid(format!("table2 {}: missing `end`", spec.0)));
                }
                table2.push(parse_table2_body(spec, &lines[start..end])?);
                i = end + 1;
                continue;
            }
            return Err(Error::Invalid(format!("unexpected catalog line: `{raw}`")));
        }
        Ok(Catalog { entries, table2 })
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    pub fn spec(&self, label: &str) -> Result<&EntrySpec> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Error::UnknownEntry(label.to_string()))
    }

    pub fn table2_row(&self, n1: &str) -> Result<&Table2Spec> {
        self.table2
            .iter()
            .find(|t| t.n1 == n1)
            .ok_or_else(|| Error::UnknownEntry(format!("table2 row {n1}")))
    }
}

fn parse_table2_header(rest: &str) -> Result<(String, String, String)> {
    // N1 source LABEL n2 "TEXT"
    let toks: Vec<&str> = rest.split_whitespace().collect();
    let n1 = toks
        .first()
        .ok_or_else(|| Error::Invalid("table2 header needs a label".into()))?
        .to_string();
    let mut source = String::new();
    let mut n2 = String::new();
    let mut i = 1;
    while i < toks.len() {
        match toks[i] {
            "source" => {
                source = toks.get(i + 1).map(|s| s.to_string()).unwrap_or_default();
                i += 2;
            }
            "n2" => {
                n2 = toks[i + 1..].join(" ").trim_matches('"').to_string();
                break;
            }
            _ => i += 1,
        }
    }
    if source.is_empty() {
        return Err(Error::Invalid(format!("table2 {n1}: missing source")));
    }
    Ok((n1, source, n2))
}

fn parse_table2_body(
    (n1, source, n2): (String, String, String),
    lines: &[(usize, usize, String)],
) -> Result<Table2Spec> {
    let mut map_text = None;
    let mut inverse_text = None;
    let mut matrix_text = None;
    for (_, _, raw) in lines {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("map") {
            map_text = Some(parse_pair_text(rest, &n1)?);
        } else if let Some(rest) = line.strip_prefix("inverse") {
            inverse_text = Some(parse_pair_text(rest, &n1)?);
        } else if let Some(rest) = line.strip_prefix("matrix") {
            let rest = rest.trim().strip_prefix('=').unwrap_or(rest).trim();
            matrix_text = Some(rest.to_string());
        } else {
            return Err(Error::Invalid(format!("table2 {n1}: bad line `{line}`")));
        }
    }
    Ok(Table2Spec {
        n1: n1.clone(),
        source,
        n2,
        map_text: map_text.ok_or_else(|| Error::Invalid(format!("table2 {n1}: missing map")))?,
        inverse_text: inverse_text.ok_or_else(|| Error::Invalid(format!("table2 {n1}: missing inverse")))?,
        matrix_text: matrix_text.ok_or_else(|| Error::Invalid(format!("table2 {n1}: missing matrix")))?,
    })
}

/// Splits `= ( e1 , e2 )` at the top-level comma.
fn parse_pair_text(rest: &str, ctx: &str) -> Result<(String, String)> {
    let rest = rest.trim().strip_prefix('=').unwrap_or(rest).trim();
    let inner = rest
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Invalid(format!("table2 {ctx}: expected `( .. , .. )`")))?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                return Ok((inner[..i].trim().to_string(), inner[i + 1..].trim().to_string()));
            }
            _ => {}
        }
    }
    Err(Error::Invalid(format!("table2 {ctx}: expected two components")))
}

/// A parameter binding supplied to `get_entry`: a concrete scalar value or
/// "keep symbolic".
#[derive(Debug, Clone, PartialEq)]
pub enum ParamBinding {
    Value(Scalar),
    Symbolic,
}

/// A fully instantiated catalog entry ready for verification.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: String,
    pub case: Option<String>,
    pub realization: Realization,
    pub invariants: Vec<Expr>,
    pub iod: Expr,
    /// `None` means the table cell is the `const` marker.
    pub liedet_expected: Option<Expr>,
    pub counting: bool,
    pub series_r: Option<u32>,
    pub params_used: BTreeMap<String, ParamBinding>,
    pub labels: BTreeMap<String, String>,
}

/// Internal fixed policy for side-condition checks at instantiation time.
fn side_policy() -> ZeroPolicy {
    ZeroPolicy::with_seed(0x51de_0002)
}

/// Instantiates an entry spec: binds parameters (validated against their
/// constraints), fills function slots (validated for independence), selects
/// the case group, parses the cells and builds the realization.
pub fn instantiate(
    spec: &EntrySpec,
    params: &BTreeMap<String, ParamBinding>,
    functions: &BTreeMap<String, Expr>,
    series_r: Option<u32>,
) -> Result<CatalogEntry> {
    let spec_owned;
    let spec = match (spec.series, series_r) {
        (Some(series), Some(r)) if r != series.default => {
            if r < series.min || r > series.max {
                return Err(Error::Constraint(format!(
                    "entry {}: series index r={} outside [{}, {}]",
                    spec.label, r, series.min, series.max
                )));
            }
            spec_owned = series::build_series(&spec.label, r)?;
            &spec_owned
        }
        _ => spec,
    };
    let series_r = series_r.or(spec.series.map(|s| s.default));

    // Resolve parameter bindings and validate constraints.
    let mut bound: BTreeMap<String, ParamBinding> = BTreeMap::new();
    for (name, constraint) in &spec.params {
        let binding = params.get(name).cloned().unwrap_or(ParamBinding::Symbolic);
        if let ParamBinding::Value(v) = &binding {
            let r = v
                .as_rational()
                .ok_or_else(|| Error::Constraint(format!("parameter {name} must be real")))?;
            if !constraint.satisfied(r) {
                return Err(Error::Constraint(format!(
                    "entry {}: parameter {name} = {v} violates its constraint",
                    spec.label
                )));
            }
        }
        bound.insert(name.clone(), binding);
    }
    for (a, b) in &spec.requires {
        if let (Some(ParamBinding::Value(va)), Some(ParamBinding::Value(vb))) = (bound.get(a), bound.get(b)) {
            if va.as_rational() >= vb.as_rational() {
                return Err(Error::Constraint(format!(
                    "entry {}: requires {a} < {b}, got {va} and {vb}",
                    spec.label
                )));
            }
        }
    }

    // Build the substitution environment: parameters and slots.
    let mut env: BTreeMap<Symbol, Expr> = BTreeMap::new();
    for (name, binding) in &bound {
        if let ParamBinding::Value(v) = binding {
            env.insert(Symbol::param(name), Expr::constant(v.clone()));
        }
    }
    let mut xi_slots: Vec<Expr> = Vec::new();
    let mut eta_slots: Vec<Expr> = Vec::new();
    for (name, default_text) in &spec.slots {
        let value = match functions.get(name) {
            Some(e) => e.clone(),
            None => crate::parse::parse_expr(default_text)?,
        };
        if value.jet_order() > 0 || value.contains_symbol(&Symbol::Y) {
            return Err(Error::Invalid(format!("slot {name} must be a function of x")));
        }
        if name.starts_with("xi") {
            xi_slots.push(value.clone());
        } else if name.starts_with("eta") {
            eta_slots.push(value.clone());
        }
        env.insert(Symbol::param(name), value);
    }

    // Side conditions: 1, x, xi_1, ..., xi_r linearly independent
    // (Wronskian test); the eta_i a fundamental system (confirmed by K).
    let policy = side_policy();
    if !xi_slots.is_empty() {
        let mut fs = vec![Expr::one(), Expr::x()];
        fs.extend(xi_slots.iter().cloned());
        let w = notation::wronskian(&fs)?;
        if is_zero(&w, &policy)? {
            return Err(Error::Independence(format!(
                "entry {}: functions 1, x, xi_* are linearly dependent",
                spec.label
            )));
        }
    }
    if !eta_slots.is_empty() {
        notation::k_form(&eta_slots)?;
    }

    // Select the cell group.
    let group = select_group(spec, &bound, series_r)?;

    // Parse cells.
    let invariants = group
        .invariant_texts
        .iter()
        .map(|t| parse_cell(t, &env))
        .collect::<Result<Vec<_>>>()?;
    let iod = group
        .iod_text
        .as_ref()
        .map(|t| parse_cell(t, &env))
        .transpose()?
        .unwrap_or_else(Expr::one);
    let liedet_expected = match &group.liedet {
        Some(LieDetCell::ConstMarker) | None => None,
        Some(LieDetCell::Text(t)) => Some(parse_cell(t, &env)?),
    };

    // Instantiate the realization.
    let basis = spec
        .fields
        .iter()
        .map(|f| VectorField::new(f.xi.substitute(&env), f.eta.substitute(&env)))
        .collect::<Result<Vec<_>>>()?;
    let params_left: Vec<(Arc<str>, Constraint)> = spec
        .params
        .iter()
        .filter(|(n, _)| matches!(bound.get(n.as_str()), Some(ParamBinding::Symbolic) | None))
        .map(|(n, c)| (Arc::<str>::from(n.as_str()), c.clone()))
        .collect();
    let realization = Realization { basis, params: params_left, label: Some(spec.label.clone()) };

    Ok(CatalogEntry {
        label: spec.label.clone(),
        case: group.case.as_ref().map(|c| c.describe()),
        realization,
        invariants,
        iod,
        liedet_expected,
        counting: spec.counting,
        series_r,
        params_used: bound,
        labels: spec.labels.clone(),
    })
}

fn select_group<'s>(
    spec: &'s EntrySpec,
    bound: &BTreeMap<String, ParamBinding>,
    series_r: Option<u32>,
) -> Result<&'s CellGroup> {
    if spec.groups.len() == 1 && spec.groups[0].case.is_none() {
        return Ok(&spec.groups[0]);
    }
    let r = series_r.unwrap_or(0);
    for g in &spec.groups {
        let Some(pred) = &g.case else {
            return Ok(g);
        };
        let value = match bound.get(&pred.param) {
            Some(ParamBinding::Value(v)) => v
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::Constraint(format!("case parameter {} must be real", pred.param)))?,
            _ => {
                return Err(Error::Constraint(format!(
                    "entry {}: case split on {} needs a concrete value",
                    spec.label, pred.param
                )))
            }
        };
        if pred.holds(&value, r) {
            return Ok(g);
        }
    }
    Err(Error::Constraint(format!(
        "entry {}: no case matches the supplied parameters",
        spec.label
    )))
}

/// The per-case parameter sample tuples: the k-th run binds each sampled
/// parameter to its k-th listed value (values are aligned so joint
/// constraints like `a < b` hold per tuple). Groups without samples get one
/// empty tuple.
pub fn sample_tuples(group: &CellGroup) -> Vec<BTreeMap<String, ParamBinding>> {
    if group.samples.is_empty() {
        return vec![BTreeMap::new()];
    }
    let n = group.samples.values().map(|v| v.len()).max().unwrap_or(1);
    (0..n)
        .map(|k| {
            group
                .samples
                .iter()
                .map(|(name, vals)| {
                    let v = vals
                        .get(k.min(vals.len() - 1))
                        .cloned()
                        .unwrap_or_else(|| BigRational::from_integer(0.into()));
                    (name.clone(), ParamBinding::Value(Scalar::from_rational(v)))
                })
                .collect()
        })
        .collect()
}

/// Convenience wrapper: instantiate by label with the stored defaults.
pub fn get_entry(
    catalog: &Catalog,
    label: &str,
    params: &BTreeMap<String, ParamBinding>,
    functions: &BTreeMap<String, Expr>,
) -> Result<CatalogEntry> {
    instantiate(catalog.spec(label)?, params, functions, None)
}

/// Builds the Table 2 row's transformation objects against an environment
/// binding the source realization's parameters.
pub fn table2_row_build(
    row: &Table2Spec,
    env: &BTreeMap<Symbol, Expr>,
) -> Result<crate::transform::Table2Row> {
    let map = (parse_cell(&row.map_text.0, env)?, parse_cell(&row.map_text.1, env)?);
    let inverse = (parse_cell(&row.inverse_text.0, env)?, parse_cell(&row.inverse_text.1, env)?);
    let matrix = parse_matrix(&row.matrix_text, env)?;
    Ok(crate::transform::Table2Row {
        n1: row.n1.clone(),
        source_label: row.source.clone(),
        n2: row.n2.clone(),
        map,
        inverse,
        matrix,
    })
}

fn parse_matrix(text: &str, env: &BTreeMap<Symbol, Expr>) -> Result<Vec<Vec<Scalar>>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Invalid(format!("bad matrix `{text}`")))?;
    let mut rows = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 1 {
                    start = Some(i + 1);
                }
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    let row_text = &inner[start.unwrap()..i];
                    let mut row = Vec::new();
                    for cell in split_top_level(row_text) {
                        let e = parse_cell(cell.trim(), env)?;
                        let c = e
                            .as_const()
                            .cloned()
                            .ok_or_else(|| Error::Invalid(format!("matrix entry `{cell}` is not constant")))?;
                        row.push(c);
                    }
                    rows.push(row);
                }
            }
            _ => {}
        }
    }
    if rows.is_empty() {
        return Err(Error::Invalid(format!("bad matrix `{text}`")));
    }
    Ok(rows)
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Parses a transformation file: `map`, `inverse` and `matrix` directives on
/// top of the usual realization lines. Returns the transformation row and the
/// source realization.
pub fn parse_transform_file(text: &str) -> Result<(crate::transform::Table2Row, Realization)> {
    let mut map_text = None;
    let mut inverse_text = None;
    let mut matrix_text = None;
    let mut rest = String::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if let Some(r) = body.strip_prefix("map") {
            map_text = Some(parse_pair_text(r, "file")?);
        } else if let Some(r) = body.strip_prefix("inverse") {
            inverse_text = Some(parse_pair_text(r, "file")?);
        } else if let Some(r) = body.strip_prefix("matrix") {
            matrix_text = Some(r.trim().strip_prefix('=').unwrap_or(r).trim().to_string());
        } else {
            rest.push_str(line);
            rest.push('\n');
        }
    }
    let spec = crate::parse::parse_realization_file(&rest)?;
    let realization = crate::parse::realize(&spec)?;
    let env = BTreeMap::new();
    let map_text = map_text.ok_or_else(|| Error::Invalid("transform file: missing map".into()))?;
    let inverse_text =
        inverse_text.ok_or_else(|| Error::Invalid("transform file: missing inverse".into()))?;
    let matrix_text = matrix_text.unwrap_or_else(|| identity_matrix_text(realization.dim()));
    let row = crate::transform::Table2Row {
        n1: "file".into(),
        source_label: spec.label.clone(),
        n2: String::new(),
        map: (parse_cell(&map_text.0, &env)?, parse_cell(&map_text.1, &env)?),
        inverse: (parse_cell(&inverse_text.0, &env)?, parse_cell(&inverse_text.1, &env)?),
        matrix: parse_matrix(&matrix_text, &env)?,
    };
    Ok((row, realization))
}

fn identity_matrix_text(n: usize) -> String {
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<&str> = (0..n).map(|j| if i == j { "1" } else { "0" }).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Factorial as an exact rational, used by the series builders.
pub fn factorial(n: u32) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for k in 2..=n as i64 {
        acc *= BigRational::from_integer(k.into());
    }
    acc
}


/// The shipped defaults for one entry: slot-function bindings and the aligned
/// parameter sample tuples of each cell group.
pub struct DefaultInstantiations {
    pub functions: BTreeMap<String, Expr>,
    pub sample_sets: Vec<Vec<BTreeMap<String, ParamBinding>>>,
    pub series_r: Option<u32>,
}

/// Returns the defaults an unparameterized verification run uses: shipped
/// slot functions, per-group parameter samples, and the default series index.
pub fn default_instantiations(catalog: &Catalog, label: &str) -> Result<DefaultInstantiations> {
    let spec = catalog.spec(label)?;
    let mut functions = BTreeMap::new();
    for (name, text) in &spec.slots {
        functions.insert(name.clone(), crate::parse::parse_expr(text)?);
    }
    Ok(DefaultInstantiations {
        functions,
        sample_sets: spec.groups.iter().map(sample_tuples).collect(),
        series_r: spec.series.map(|s| s.default),
    })
}

#[cfg(test)]
mod default_tests {
    use super::*;

    #[test]
    fn shipped_defaults() {
        let c = Catalog::load().unwrap();
        // Row 50 ships the exponential fundamental system.
        let d = default_instantiations(&c, "50").unwrap();
        assert_eq!(d.series_r, Some(4));
        let eta1 = d.functions.get("eta1").unwrap();
        assert_eq!(*eta1, crate::parse::parse_expr("exp(x)").unwrap());
        assert_eq!(d.functions.len(), 4);
        // Row 56 defaults to the smallest admissible series index.
        let d = default_instantiations(&c, "56").unwrap();
        assert_eq!(d.series_r, Some(0));
        // Row 39 carries both case variants with their samples.
        let d = default_instantiations(&c, "39").unwrap();
        assert_eq!(d.sample_sets.len(), 2);
        assert_eq!(d.sample_sets[0].len(), 1); // the degenerate case value
        assert_eq!(d.sample_sets[1].len(), 3); // three generic samples
        // Rows with a b >= 0 parameter sample three values.
        let d = default_instantiations(&c, "17").unwrap();
        assert_eq!(d.sample_sets[0].len(), 3);
    }
}
