//! Subcommand implementations: pure input-to-string logic, so the binary
//! shell only handles argument parsing, file IO, and exit codes.

use qubonet_core::anneal::{energy_histogram, feasible_rate, AnnealParams, Sample, SampleSet};
use qubonet_core::constraint::ConstraintSpec;
use qubonet_core::network::Network;
use qubonet_core::qubo::{assemble, model_stats, QuboModel};
use qubonet_core::verify::{exactness_scan, ExactnessReport};
use serde_json::{json, Map, Value};

use crate::formats::{
    canonical_number, read_model_json, write_edgelist, write_model_json, write_qubo_text, SpecFile,
};
use crate::sweep::Method;
use crate::threads::{parallel_map, worker_count};
use crate::CliError;

/// Output format for model files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFormat {
    Json,
    Qubo,
    Edgelist,
}

impl std::str::FromStr for ModelFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(ModelFormat::Json),
            "qubo" => Ok(ModelFormat::Qubo),
            "edgelist" => Ok(ModelFormat::Edgelist),
            other => Err(CliError::invalid(format!(
                "unknown format `{other}` (expected json|qubo|edgelist)"
            ))),
        }
    }
}

pub fn render_model(spec: &ConstraintSpec, model: &QuboModel, format: ModelFormat) -> String {
    match format {
        ModelFormat::Json => write_model_json(spec, model),
        ModelFormat::Qubo => write_qubo_text(model),
        ModelFormat::Edgelist => write_edgelist(model),
    }
}

/// `build`: assemble a model and render it in the requested format.
pub fn build(spec: &ConstraintSpec, method: Method, lam: f64, format: ModelFormat) -> Result<String, CliError> {
    if !(lam.is_finite() && lam > 0.0) {
        return Err(CliError::invalid(format!("lambda must be positive, got {lam}")));
    }
    let network = method.build(spec);
    let model = assemble(&network, lam);
    Ok(render_model(spec, &model, format))
}

fn report_to_json(report: &ExactnessReport) -> Value {
    json!({
        "n_inputs_checked": report.n_inputs_checked,
        "n_feasible": report.n_feasible,
        "n_routed": report.n_routed,
        "counterexamples": report
            .counterexamples
            .iter()
            .map(|x| x.iter().map(|&b| u8::from(b)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "gap_verified": report.gap_verified,
    })
}

/// `verify` on a spec: exhaustive exactness sweep, partitioned across
/// workers for larger inputs. The boolean is false when counterexamples
/// exist (exit code 4 at the shell).
pub fn verify_spec(spec: &ConstraintSpec, method: Method) -> Result<(String, bool), CliError> {
    let network = method.build(spec);
    let total = 1u64 << spec.n();
    let workers = worker_count().clamp(1, 16) as u64;
    let chunk = total.div_ceil(workers);
    let ranges: Vec<std::ops::Range<u64>> = (0..workers)
        .map(|w| (w * chunk).min(total)..((w + 1) * chunk).min(total))
        .filter(|r| !r.is_empty())
        .collect();
    let parts = parallel_map(ranges, |range| exactness_scan(spec, &network, range));
    let mut report: Option<ExactnessReport> = None;
    for part in parts {
        let part = part.map_err(|e| CliError::invalid(e.to_string()))?;
        report = Some(match report {
            Some(acc) => acc.merge(part),
            None => part,
        });
    }
    let report = report.expect("at least one partition");
    let exact = report.is_exact();
    Ok((format!("{}\n", report_to_json(&report)), exact))
}

/// `verify --model`: schema and invariant validation of a model file.
pub fn verify_model(text: &str) -> Result<String, CliError> {
    let (spec, model) = read_model_json(text)?;
    let out = json!({
        "model": "ok",
        "spec": serde_json::to_value(SpecFile::from_spec(&spec)).expect("serializable"),
        "variables": model.var_count(),
        "edges": model.edge_count(),
    });
    Ok(format!("{out}\n"))
}

/// `stats`: formulation counts of a freshly built model.
pub fn stats(spec: &ConstraintSpec, method: Method) -> Result<String, CliError> {
    let network = method.build(spec);
    let model = assemble(&network, 1.0);
    let stats = model_stats(&network, &model);
    let histogram: Map<String, Value> = stats
        .degree_histogram
        .iter()
        .map(|(&degree, &count)| (degree.to_string(), Value::from(count)))
        .collect();
    let out = json!({
        "method": method.label(),
        "n_original": stats.n_original,
        "n_auxiliary": stats.n_auxiliary,
        "n_slack": stats.n_slack,
        "n_variables": stats.n_variables,
        "n_edges": stats.n_edges,
        "max_degree": stats.max_degree,
        "degree_histogram": histogram,
    });
    Ok(format!("{out}\n"))
}

fn network_to_json(spec: &ConstraintSpec, network: &Network, method: Method) -> Value {
    let subs: Vec<Value> = network
        .subs()
        .iter()
        .map(|sub| {
            json!({
                "lhs": sub.lhs.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "rhs": sub.rhs.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "spec": serde_json::to_value(SpecFile::from_spec(spec)).expect("serializable"),
        "method": method.label(),
        "depth": network.depth_label().to_string(),
        "aux_count": network.aux_count(),
        "slack_count": network.slack_count(),
        "subs": subs,
    })
}

/// `inspect`: network debug dump.
pub fn inspect(spec: &ConstraintSpec, method: Method) -> Result<String, CliError> {
    let network = method.build(spec);
    Ok(format!("{}\n", network_to_json(spec, &network, method)))
}

/// `solve`: anneal and summarize, sharding reads across workers.
pub fn solve(spec: &ConstraintSpec, method: Method, lam: f64, params: AnnealParams) -> Result<String, CliError> {
    if !(lam.is_finite() && lam > 0.0) {
        return Err(CliError::invalid(format!("lambda must be positive, got {lam}")));
    }
    params.validate().map_err(|e| CliError::invalid(e.to_string()))?;
    let network = method.build(spec);
    let model = assemble(&network, lam);

    let workers = worker_count().min(params.num_reads).max(1);
    let chunk = params.num_reads.div_ceil(workers);
    let ranges: Vec<std::ops::Range<usize>> = (0..workers)
        .map(|w| (w * chunk).min(params.num_reads)..((w + 1) * chunk).min(params.num_reads))
        .filter(|r| !r.is_empty())
        .collect();
    let shards = parallel_map(ranges, |range| {
        qubonet_core::anneal::anneal_reads(&model, &params, range)
    });
    let samples: Vec<Sample> = shards.into_iter().flatten().collect();
    let set = SampleSet { samples, params };

    let histogram: Map<String, Value> = energy_histogram(&set)
        .into_iter()
        .map(|(energy, count)| {
            (crate::formats::format_number(energy), Value::from(count))
        })
        .collect();
    let out = json!({
        "reads": params.num_reads,
        "min_energy": Value::Number(canonical_number(set.min_energy())),
        "feasible_rate": Value::Number(canonical_number(feasible_rate(&set, spec))),
        "energy_histogram": histogram,
    });
    Ok(format!("{out}\n"))
}

/// `export`: re-render a model JSON file in another format.
pub fn export(text: &str, format: ModelFormat) -> Result<String, CliError> {
    let (spec, model) = read_model_json(text)?;
    Ok(render_model(&spec, &model, format))
}
