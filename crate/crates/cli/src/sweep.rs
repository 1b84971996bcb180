//! Scaling sweeps over problem size and target value, emitted as CSV.

use std::fmt;
use std::str::FromStr;

use qubonet_core::constraint::{ConstraintKind, ConstraintSpec};
use qubonet_core::network::{
    build_clique_network, build_divide_and_conquer, select_network, CostModel, DepthLimit, Network,
};
use qubonet_core::qubo::{assemble, model_stats, FormulationStats};

use crate::threads::parallel_map;
use crate::CliError;

/// How to build the network for a constraint instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Conventional single dense switch.
    Clique,
    /// Fully divided network.
    Full,
    /// Division halted at the given depth.
    Depth(usize),
    /// Depth selected by minimizing the edge count.
    Optimized,
}

impl Method {
    pub fn build(&self, spec: &ConstraintSpec) -> Network {
        match self {
            Method::Clique => build_clique_network(spec),
            Method::Full => build_divide_and_conquer(spec, DepthLimit::Unlimited),
            Method::Depth(d) => build_divide_and_conquer(spec, DepthLimit::Limited(*d)),
            Method::Optimized => select_network(spec, CostModel::Edges),
        }
    }

    /// The method column label used in sweep CSVs.
    pub fn label(&self) -> String {
        match self {
            Method::Clique => "conventional".into(),
            Method::Full => "proposed-full".into(),
            Method::Depth(d) => format!("proposed-depth({d})"),
            Method::Optimized => "proposed-optimized".into(),
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "clique" => Ok(Method::Clique),
            "full" => Ok(Method::Full),
            "optimized" => Ok(Method::Optimized),
            _ => {
                if let Some(d) = s.strip_prefix("depth=") {
                    let d = d
                        .parse()
                        .map_err(|_| CliError::invalid(format!("bad depth in method `{s}`")))?;
                    Ok(Method::Depth(d))
                } else {
                    Err(CliError::invalid(format!(
                        "unknown method `{s}` (expected clique|full|depth=d|optimized)"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Clique => write!(f, "clique"),
            Method::Full => write!(f, "full"),
            Method::Depth(d) => write!(f, "depth={d}"),
            Method::Optimized => write!(f, "optimized"),
        }
    }
}

/// Inclusive size range `start:end:step` as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl SizeRange {
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        (self.start..=self.end).step_by(self.step)
    }
}

impl FromStr for SizeRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::invalid(format!("bad range `{s}` (expected start:end:step)"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let parse = |p: &str| p.parse::<usize>().map_err(|_| bad());
        let range =
            SizeRange { start: parse(parts[0])?, end: parse(parts[1])?, step: parse(parts[2])? };
        if range.step == 0 {
            return Err(bad());
        }
        Ok(range)
    }
}

pub const CSV_HEADER: &str = "method,kind,n,k,variables,edges,max_degree";

/// One CSV row of a scaling sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub method: String,
    pub kind: &'static str,
    pub n: usize,
    /// Bound column: `k` (1 for one-hot), or `k1-k2` for range kinds.
    pub k: String,
    k_order: (usize, usize),
    pub variables: usize,
    pub edges: usize,
    pub max_degree: usize,
}

impl SweepRow {
    fn render(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.method, self.kind, self.n, self.k, self.variables, self.edges, self.max_degree
        )
    }
}

fn bound_column(spec: &ConstraintSpec) -> (String, (usize, usize)) {
    match spec.kind() {
        ConstraintKind::OneHot => ("1".into(), (1, 1)),
        ConstraintKind::Equality { k }
        | ConstraintKind::AtMost { k }
        | ConstraintKind::AtLeast { k } => (k.to_string(), (k, k)),
        ConstraintKind::Range { k1, k2 } => (format!("{k1}-{k2}"), (k1, k2)),
    }
}

fn stats_for(spec: &ConstraintSpec, method: Method) -> FormulationStats {
    let net = method.build(spec);
    let model = assemble(&net, 1.0);
    model_stats(&net, &model)
}

fn row(spec: &ConstraintSpec, method: Method) -> SweepRow {
    let stats = stats_for(spec, method);
    let (k, k_order) = bound_column(spec);
    SweepRow {
        method: method.label(),
        kind: spec.kind().name(),
        n: spec.n(),
        k,
        k_order,
        variables: stats.n_variables,
        edges: stats.n_edges,
        max_degree: stats.max_degree,
    }
}

/// The sweep instance for a kind at size n. Equality and the inequality
/// kinds use the worst-case bound `k = n/2`; range brackets the middle third.
pub fn sweep_spec(kind: &str, n: usize) -> Result<ConstraintSpec, CliError> {
    let spec = match kind {
        "one-hot" => ConstraintSpec::one_hot(n),
        "equality" => ConstraintSpec::equality(n, n / 2),
        "at-most" => ConstraintSpec::at_most(n, n / 2),
        "at-least" => ConstraintSpec::at_least(n, n / 2),
        "range" => ConstraintSpec::range(n, n / 3, n - n / 3),
        other => return Err(CliError::invalid(format!("unknown kind `{other}`"))),
    };
    spec.map_err(|e| CliError::invalid(e.to_string()))
}

fn render_csv(mut rows: Vec<SweepRow>) -> String {
    rows.sort_by(|a, b| (&a.method, a.n, a.k_order).cmp(&(&b.method, b.n, b.k_order)));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.render());
        out.push('\n');
    }
    out
}

/// Variable/edge scaling against problem size for each method.
pub fn sweep_size(kind: &str, range: SizeRange, methods: &[Method]) -> Result<String, CliError> {
    let mut cases = Vec::new();
    for n in range.values() {
        let spec = sweep_spec(kind, n)?;
        for &method in methods {
            cases.push((spec, method));
        }
    }
    let rows = parallel_map(cases, |(spec, method)| row(&spec, method));
    Ok(render_csv(rows))
}

/// Model complexity against the target value: equality constraints on `n`
/// variables for every k in 1..n.
pub fn sweep_target(n: usize, methods: &[Method]) -> Result<String, CliError> {
    if n < 2 {
        return Err(CliError::invalid("sweep-target needs n >= 2".into()));
    }
    let mut cases = Vec::new();
    for k in 1..n {
        let spec = ConstraintSpec::equality(n, k).map_err(|e| CliError::invalid(e.to_string()))?;
        for &method in methods {
            cases.push((spec, method));
        }
    }
    let rows = parallel_map(cases, |(spec, method)| row(&spec, method));
    Ok(render_csv(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_parsing() {
        assert_eq!("clique".parse::<Method>().unwrap(), Method::Clique);
        assert_eq!("depth=3".parse::<Method>().unwrap(), Method::Depth(3));
        assert_eq!("optimized".parse::<Method>().unwrap(), Method::Optimized);
        assert!("depth=".parse::<Method>().is_err());
        assert!("chains".parse::<Method>().is_err());
    }

    #[test]
    fn size_range_parsing() {
        let r: SizeRange = "4:16:4".parse().unwrap();
        assert_eq!(r.values().collect::<Vec<_>>(), vec![4, 8, 12, 16]);
        assert!("4:16".parse::<SizeRange>().is_err());
        assert!("4:16:0".parse::<SizeRange>().is_err());
    }

    #[test]
    fn empty_range_gives_header_only() {
        let range: SizeRange = "8:4:1".parse().unwrap();
        let csv = sweep_size("one-hot", range, &[Method::Clique, Method::Full]).unwrap();
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_hot_closed_forms_in_csv() {
        let range: SizeRange = "4:16:4".parse().unwrap();
        let csv = sweep_size("one-hot", range, &[Method::Clique, Method::Full]).unwrap();
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let n: usize = cols[2].parse().unwrap();
            let edges: usize = cols[5].parse().unwrap();
            match cols[0] {
                "conventional" => assert_eq!(edges, n * (n - 1) / 2),
                "proposed-full" => assert_eq!(edges, 3 * n - 5),
                other => panic!("unexpected method {other}"),
            }
        }
    }

    #[test]
    fn rows_sorted_by_method_then_n() {
        let range: SizeRange = "4:8:2".parse().unwrap();
        let csv = sweep_size("equality", range, &[Method::Full, Method::Clique]).unwrap();
        let methods: Vec<&str> =
            csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        let mut sorted = methods.clone();
        sorted.sort();
        assert_eq!(methods, sorted);
    }

    #[test]
    fn target_sweep_has_full_row_per_k() {
        let csv = sweep_target(8, &[Method::Full]).unwrap();
        assert_eq!(csv.lines().count(), 1 + 7);
        // k=4 row carries the known worst-case counts; the top-level cross
        // auxiliaries hit the peak degree (3 neighbors from each of 2 subs)
        let row = csv.lines().find(|l| l.contains(",8,4,")).unwrap();
        assert!(row.ends_with("24,52,6"), "{row}");
    }
}
