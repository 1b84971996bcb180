//! Serialization formats: spec files, the canonical model JSON, the
//! qbsolv-style `.qubo` text format, and bare edge lists.
//!
//! Exports are byte-canonical: fixed key order, variables sorted by id,
//! quadratic keys sorted with `i < j`, and numbers printed as integers when
//! integral and as shortest round-trip decimals otherwise. Importing an
//! export and re-exporting it reproduces the file byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qubonet_core::constraint::{ConstraintKind, ConstraintSpec};
use qubonet_core::network::VarRef;
use qubonet_core::qubo::QuboModel;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Canonical number rendering: integral values without a decimal point,
/// everything else as the shortest round-trip decimal.
pub fn format_number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 9.007_199_254_740_992e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// serde_json number with the same integral normalization as
/// [`format_number`], for report output.
pub fn canonical_number(v: f64) -> serde_json::Number {
    if v == v.trunc() && v.abs() < 9.007_199_254_740_992e15 {
        serde_json::Number::from(v as i64)
    } else {
        serde_json::Number::from_f64(v).expect("finite number")
    }
}

/// The on-disk spec object. Unknown fields are rejected, and each kind must
/// carry exactly its own bound fields.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kind: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<usize>,
}

impl SpecFile {
    pub fn from_spec(spec: &ConstraintSpec) -> Self {
        let (k, k1, k2) = match spec.kind() {
            ConstraintKind::OneHot => (None, None, None),
            ConstraintKind::Equality { k }
            | ConstraintKind::AtMost { k }
            | ConstraintKind::AtLeast { k } => (Some(k), None, None),
            ConstraintKind::Range { k1, k2 } => (None, Some(k1), Some(k2)),
        };
        SpecFile { kind: spec.kind().name().to_string(), n: spec.n(), k, k1, k2 }
    }

    pub fn to_spec(&self) -> Result<ConstraintSpec, CliError> {
        let invalid = |msg: &str| CliError::invalid(format!("spec: {msg}"));
        let need_k = || self.k.ok_or_else(|| invalid("missing field `k`"));
        let reject = |cond: bool, msg: &str| if cond { Err(invalid(msg)) } else { Ok(()) };
        let spec = match self.kind.as_str() {
            "one-hot" => {
                reject(self.k.is_some(), "`k` not allowed for one-hot")?;
                reject(self.k1.is_some() || self.k2.is_some(), "`k1`/`k2` only allowed for range")?;
                ConstraintSpec::one_hot(self.n)
            }
            "equality" | "at-most" | "at-least" => {
                reject(self.k1.is_some() || self.k2.is_some(), "`k1`/`k2` only allowed for range")?;
                let k = need_k()?;
                match self.kind.as_str() {
                    "equality" => ConstraintSpec::equality(self.n, k),
                    "at-most" => ConstraintSpec::at_most(self.n, k),
                    _ => ConstraintSpec::at_least(self.n, k),
                }
            }
            "range" => {
                reject(self.k.is_some(), "`k` not allowed for range")?;
                let k1 = self.k1.ok_or_else(|| invalid("missing field `k1`"))?;
                let k2 = self.k2.ok_or_else(|| invalid("missing field `k2`"))?;
                ConstraintSpec::range(self.n, k1, k2)
            }
            other => return Err(invalid(&format!("unknown kind `{other}`"))),
        };
        spec.map_err(|e| CliError::invalid(format!("spec: {e}")))
    }

    /// Canonical single-line JSON rendering, used inside model files.
    fn write_json(&self, out: &mut String) {
        write!(out, "{{\"kind\":\"{}\",\"n\":{}", self.kind, self.n).unwrap();
        if let Some(k) = self.k {
            write!(out, ",\"k\":{k}").unwrap();
        }
        if let Some(k1) = self.k1 {
            write!(out, ",\"k1\":{k1}").unwrap();
        }
        if let Some(k2) = self.k2 {
            write!(out, ",\"k2\":{k2}").unwrap();
        }
        out.push('}');
    }
}

/// Parses a spec file (JSON object, unknown fields rejected).
pub fn read_spec_file(text: &str) -> Result<ConstraintSpec, CliError> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|e| CliError::invalid(format!("spec: {e}")))?;
    file.to_spec()
}

pub fn write_spec_file(spec: &ConstraintSpec) -> String {
    let mut out = String::new();
    SpecFile::from_spec(spec).write_json(&mut out);
    out.push('\n');
    out
}

fn role_name(var: VarRef) -> &'static str {
    match var {
        VarRef::Original(_) => "original",
        VarRef::Auxiliary(_) => "auxiliary",
        VarRef::Slack(_) => "slack",
    }
}

fn parse_label(label: &str) -> Option<VarRef> {
    if label.len() < 2 || !label.is_ascii() {
        return None;
    }
    let (prefix, digits) = label.split_at(1);
    if digits.is_empty() || digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    let index: usize = digits.parse().ok()?;
    match prefix {
        "x" => Some(VarRef::Original(index)),
        "y" => Some(VarRef::Auxiliary(index)),
        "s" => Some(VarRef::Slack(index)),
        _ => None,
    }
}

/// Writes the canonical model JSON:
/// `{"spec":…,"lambda":…,"variables":[…],"linear":{…},"quadratic":[…],"offset":…}`
/// with variables sorted by id and quadratic triples sorted by `(i, j)`.
pub fn write_model_json(spec: &ConstraintSpec, model: &QuboModel) -> String {
    let mut out = String::with_capacity(256 + model.var_count() * 40);
    out.push_str("{\"spec\":");
    SpecFile::from_spec(spec).write_json(&mut out);
    write!(out, ",\"lambda\":{}", format_number(model.lam())).unwrap();
    out.push_str(",\"variables\":[");
    for (id, &var) in model.vars().iter().enumerate() {
        if id > 0 {
            out.push(',');
        }
        write!(out, "{{\"id\":{id},\"label\":\"{var}\",\"role\":\"{}\"}}", role_name(var)).unwrap();
    }
    out.push_str("],\"linear\":{");
    for (i, (id, coef)) in model.linear().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "\"{id}\":{}", format_number(*coef)).unwrap();
    }
    out.push_str("},\"quadratic\":[");
    for (i, (&(a, b), coef)) in model.quadratic().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "[{a},{b},{}]", format_number(*coef)).unwrap();
    }
    write!(out, "],\"offset\":{}}}", format_number(model.offset())).unwrap();
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    spec: SpecFile,
    lambda: f64,
    variables: Vec<VariableEntry>,
    linear: BTreeMap<String, f64>,
    quadratic: Vec<(usize, usize, f64)>,
    offset: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableEntry {
    id: usize,
    label: String,
    role: String,
}

/// Reads and validates a model JSON file.
pub fn read_model_json(text: &str) -> Result<(ConstraintSpec, QuboModel), CliError> {
    let invalid = |msg: String| CliError::invalid(format!("model: {msg}"));
    let file: ModelFile = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    let spec = file.spec.to_spec()?;

    let mut vars = Vec::with_capacity(file.variables.len());
    for (position, entry) in file.variables.iter().enumerate() {
        if entry.id != position {
            return Err(invalid(format!("variable ids must be dense, got {}", entry.id)));
        }
        let var = parse_label(&entry.label)
            .ok_or_else(|| invalid(format!("bad label `{}`", entry.label)))?;
        if role_name(var) != entry.role {
            return Err(invalid(format!(
                "label `{}` does not match role `{}`",
                entry.label, entry.role
            )));
        }
        vars.push(var);
    }

    let mut linear = BTreeMap::new();
    for (key, coef) in &file.linear {
        let id: usize = key.parse().map_err(|_| invalid(format!("bad linear key `{key}`")))?;
        if linear.insert(id, *coef).is_some() {
            return Err(invalid(format!("duplicate linear key {id}")));
        }
    }
    let mut quadratic = BTreeMap::new();
    for &(i, j, coef) in &file.quadratic {
        if quadratic.insert((i, j), coef).is_some() {
            return Err(invalid(format!("duplicate quadratic key ({i}, {j})")));
        }
    }

    let model = QuboModel::from_parts(vars, linear, quadratic, file.offset, file.lambda)
        .map_err(|e| invalid(e.to_string()))?;
    Ok((spec, model))
}

/// Writes the qbsolv-style text format. The offset travels in a leading
/// comment because the format itself has no offset field.
pub fn write_qubo_text(model: &QuboModel) -> String {
    write_qubo_text_parts(&QuboTextModel {
        n_vars: model.var_count(),
        linear: model.linear().clone(),
        quadratic: model.quadratic().clone(),
        offset: model.offset(),
    })
}

/// Coefficients parsed back from a `.qubo` file. The format carries no
/// variable roles or spec, so this is the whole content.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboTextModel {
    pub n_vars: usize,
    pub linear: BTreeMap<usize, f64>,
    pub quadratic: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
}

/// Canonical rendering of parsed `.qubo` content; [`read_qubo_text`] and
/// this function round-trip byte for byte.
pub fn write_qubo_text_parts(parts: &QuboTextModel) -> String {
    let mut out = String::new();
    writeln!(out, "c offset {}", format_number(parts.offset)).unwrap();
    writeln!(
        out,
        "p qubo 0 {} {} {}",
        parts.n_vars,
        parts.linear.len(),
        parts.quadratic.len()
    )
    .unwrap();
    for (id, coef) in &parts.linear {
        writeln!(out, "{id} {id} {}", format_number(*coef)).unwrap();
    }
    for (&(i, j), coef) in &parts.quadratic {
        writeln!(out, "{i} {j} {}", format_number(*coef)).unwrap();
    }
    out
}

/// Parses the `.qubo` text format written by [`write_qubo_text`].
pub fn read_qubo_text(text: &str) -> Result<QuboTextModel, CliError> {
    let invalid = |msg: String| CliError::invalid(format!("qubo: {msg}"));
    let mut offset = 0.0;
    let mut header: Option<(usize, usize, usize)> = None;
    let mut linear = BTreeMap::new();
    let mut quadratic = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "c" => {
                if fields.len() == 3 && fields[1] == "offset" {
                    offset = fields[2]
                        .parse()
                        .map_err(|_| invalid(format!("bad offset on line {}", lineno + 1)))?;
                }
            }
            "p" => {
                if header.is_some() {
                    return Err(invalid("duplicate p line".into()));
                }
                if fields.len() != 6 || fields[1] != "qubo" || fields[2] != "0" {
                    return Err(invalid(format!("bad p line: `{line}`")));
                }
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| invalid(format!("bad p line: `{line}`")))
                };
                header = Some((parse(fields[3])?, parse(fields[4])?, parse(fields[5])?));
            }
            _ => {
                if header.is_none() {
                    return Err(invalid(format!("term before p line at line {}", lineno + 1)));
                }
                if fields.len() != 3 {
                    return Err(invalid(format!("bad term line: `{line}`")));
                }
                let i: usize =
                    fields[0].parse().map_err(|_| invalid(format!("bad index `{}`", fields[0])))?;
                let j: usize =
                    fields[1].parse().map_err(|_| invalid(format!("bad index `{}`", fields[1])))?;
                let coef: f64 = fields[2]
                    .parse()
                    .map_err(|_| invalid(format!("bad coefficient `{}`", fields[2])))?;
                if i == j {
                    if linear.insert(i, coef).is_some() {
                        return Err(invalid(format!("duplicate linear term {i}")));
                    }
                } else {
                    let key = (i.min(j), i.max(j));
                    if quadratic.insert(key, coef).is_some() {
                        return Err(invalid(format!("duplicate quadratic term {i} {j}")));
                    }
                }
            }
        }
    }
    let (n_vars, n_linear, n_quadratic) = header.ok_or_else(|| invalid("missing p line".into()))?;
    if linear.len() != n_linear || quadratic.len() != n_quadratic {
        return Err(invalid(format!(
            "header counts ({n_linear} linear, {n_quadratic} quadratic) do not match body \
             ({} linear, {} quadratic)",
            linear.len(),
            quadratic.len()
        )));
    }
    if let Some(max) = linear
        .keys()
        .copied()
        .chain(quadratic.keys().flat_map(|&(i, j)| [i, j]))
        .max()
    {
        if max >= n_vars {
            return Err(invalid(format!("index {max} exceeds declared variable count {n_vars}")));
        }
    }
    Ok(QuboTextModel { n_vars, linear, quadratic, offset })
}

/// Bare coupling-graph dump: one `i j` pair per line, sorted.
pub fn write_edgelist(model: &QuboModel) -> String {
    let mut out = String::new();
    for &(i, j) in model.quadratic().keys() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}
