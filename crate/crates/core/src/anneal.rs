//! Simulated annealing sampler for QUBO models.
//!
//! Single-bit-flip Metropolis sweeps under a geometric inverse-temperature
//! schedule. Every read consumes its own RNG stream keyed by `(seed, read)`,
//! so output is a deterministic function of `(model, params)` and reads may
//! run serially or concurrently with bit-identical results.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::constraint::ConstraintSpec;
use crate::network::Network;
use crate::qubo::{Adjacency, Assignment, ModelError, QuboModel};
use crate::rng::Xoshiro256PlusPlus;

/// Annealing schedule and read-count parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealParams {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        Self { num_reads: 1000, sweeps: 2000, beta_start: 0.1, beta_end: 10.0, seed: 0 }
    }
}

/// Parameter validation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamError(&'static str);

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid anneal parameters: {}", self.0)
    }
}

impl core::error::Error for ParamError {}

impl AnnealParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        if self.num_reads < 1 {
            return Err(ParamError("num_reads must be >= 1"));
        }
        if self.sweeps < 1 {
            return Err(ParamError("sweeps must be >= 1"));
        }
        if !(self.beta_start.is_finite() && self.beta_end.is_finite()) {
            return Err(ParamError("beta bounds must be finite"));
        }
        if !(self.beta_start > 0.0 && self.beta_start <= self.beta_end) {
            return Err(ParamError("need 0 < beta_start <= beta_end"));
        }
        Ok(())
    }
}

/// One annealer read: the final state, its exact energy, and the read index.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub assignment: Assignment,
    pub energy: f64,
    pub read: usize,
}

/// All reads of one run, ordered by read index, with the parameters echoed.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<Sample>,
    pub params: AnnealParams,
}

impl SampleSet {
    pub fn min_energy(&self) -> f64 {
        self.samples.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min)
    }
}

/// Runs one read on a prepared adjacency. Exposed indirectly through
/// [`anneal_reads`] so callers can shard the read range across workers.
fn run_read(
    model: &QuboModel,
    adjacency: &Adjacency,
    params: &AnnealParams,
    read: usize,
) -> Sample {
    let n = model.var_count();
    let mut rng = Xoshiro256PlusPlus::from_stream(params.seed, read as u64);
    let mut bits: Vec<bool> = (0..n).map(|_| rng.next_bool()).collect();

    let mut beta = params.beta_start;
    let factor = if params.sweeps > 1 {
        libm::pow(params.beta_end / params.beta_start, 1.0 / (params.sweeps - 1) as f64)
    } else {
        1.0
    };
    for sweep in 0..params.sweeps {
        for var in 0..n {
            let delta = adjacency.flip_delta(&bits, var);
            if delta <= 0.0 || rng.next_f64() < libm::exp(-beta * delta) {
                bits[var] = !bits[var];
            }
        }
        if sweep + 1 < params.sweeps {
            beta *= factor;
        }
    }

    let assignment = Assignment::new(bits);
    let energy = model.energy(&assignment).expect("assignment covers the model");
    Sample { assignment, energy, read }
}

/// Runs the reads in `reads` and returns their samples in read order.
/// Shards with disjoint ranges concatenate to the same result as one run.
pub fn anneal_reads(model: &QuboModel, params: &AnnealParams, reads: Range<usize>) -> Vec<Sample> {
    assert!(model.var_count() >= 1, "model must have at least one variable");
    params.validate().expect("anneal parameters must be valid");
    let adjacency = Adjacency::new(model);
    reads.map(|read| run_read(model, &adjacency, params, read)).collect()
}

/// Samples `params.num_reads` independent reads.
pub fn simulated_anneal(model: &QuboModel, params: &AnnealParams) -> SampleSet {
    SampleSet { samples: anneal_reads(model, params, 0..params.num_reads), params: *params }
}

/// Projects an assignment of a network's model onto the original variables.
pub fn decode(assignment: &Assignment, network: &Network) -> Result<Vec<bool>, ModelError> {
    let expected = network.var_count();
    if assignment.len() != expected {
        return Err(ModelError::Coverage { expected, got: assignment.len() });
    }
    Ok(assignment.bits()[..network.spec().n()].to_vec())
}

/// Fraction of reads whose original-variable part satisfies the constraint.
/// Auxiliaries and slacks are ignored; the samples must cover at least the
/// `n` original variables (ids `0..n`).
pub fn feasible_rate(samples: &SampleSet, spec: &ConstraintSpec) -> f64 {
    let n = spec.n();
    if samples.samples.is_empty() {
        return 0.0;
    }
    let feasible = samples
        .samples
        .iter()
        .filter(|s| {
            assert!(s.assignment.len() >= n, "sample must cover the original variables");
            spec.is_satisfied(&s.assignment.bits()[..n])
        })
        .count();
    feasible as f64 / samples.samples.len() as f64
}

/// Histogram of sample energies, keyed by exact energy value.
pub fn energy_histogram(samples: &SampleSet) -> Vec<(f64, usize)> {
    let mut energies: Vec<f64> = samples.samples.iter().map(|s| s.energy).collect();
    energies.sort_unstable_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for e in energies {
        match out.last_mut() {
            Some((last, count)) if *last == e => *count += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::ConstraintSpec;
    use crate::network::{build_divide_and_conquer, DepthLimit, VarRef};
    use crate::qubo::{assemble, QuboModel};
    use alloc::collections::BTreeMap;

    #[test]
    fn single_variable_model_reaches_minimum() {
        // linear {x: +1}: unique minimum at x = 0 with energy 0
        let mut linear = BTreeMap::new();
        linear.insert(0, 1.0);
        let model = QuboModel::from_parts(
            alloc::vec![VarRef::Original(0)],
            linear,
            BTreeMap::new(),
            0.0,
            1.0,
        )
        .unwrap();
        let params = AnnealParams { num_reads: 20, sweeps: 50, seed: 3, ..Default::default() };
        let set = simulated_anneal(&model, &params);
        for sample in &set.samples {
            assert_eq!(sample.energy, 0.0);
            assert!(!sample.assignment.get(0));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = ConstraintSpec::equality(6, 3).unwrap();
        let model = assemble(&build_divide_and_conquer(&spec, DepthLimit::Unlimited), 1.0);
        let params = AnnealParams { num_reads: 40, sweeps: 200, seed: 42, ..Default::default() };
        let a = simulated_anneal(&model, &params);
        let b = simulated_anneal(&model, &params);
        assert_eq!(a, b);
        let other = simulated_anneal(
            &model,
            &AnnealParams { seed: 43, ..params },
        );
        assert_ne!(a, other);
    }

    #[test]
    fn sharded_reads_match_serial() {
        let spec = ConstraintSpec::at_most(5, 2).unwrap();
        let model = assemble(&build_divide_and_conquer(&spec, DepthLimit::Unlimited), 1.0);
        let params = AnnealParams { num_reads: 16, sweeps: 100, seed: 7, ..Default::default() };
        let serial = simulated_anneal(&model, &params);
        let mut sharded = anneal_reads(&model, &params, 0..5);
        sharded.extend(anneal_reads(&model, &params, 5..16));
        assert_eq!(serial.samples, sharded);
    }

    #[test]
    fn zero_energy_samples_decode_feasible() {
        let spec = ConstraintSpec::one_hot(8).unwrap();
        let net = build_divide_and_conquer(&spec, DepthLimit::Unlimited);
        let model = assemble(&net, 1.0);
        let params = AnnealParams { num_reads: 100, sweeps: 300, seed: 11, ..Default::default() };
        let set = simulated_anneal(&model, &params);
        let mut zero_seen = false;
        for sample in &set.samples {
            if sample.energy == 0.0 {
                zero_seen = true;
                let x = decode(&sample.assignment, &net).unwrap();
                assert!(spec.is_satisfied(&x));
            }
        }
        assert!(zero_seen, "annealer should find the ground state at this size");
    }

    #[test]
    fn feasible_rate_counts_original_part_only() {
        let spec = ConstraintSpec::one_hot(2).unwrap();
        let params = AnnealParams::default();
        let mk = |bits: &[bool], energy: f64, read: usize| Sample {
            assignment: Assignment::new(bits.to_vec()),
            energy,
            read,
        };
        let set = SampleSet {
            samples: alloc::vec![
                mk(&[true, false], 0.0, 0),
                mk(&[false, true], 0.0, 1),
                mk(&[true, true], 2.0, 2),
                mk(&[false, false], 1.0, 3),
            ],
            params,
        };
        assert_eq!(feasible_rate(&set, &spec), 0.5);
    }

    #[test]
    fn decode_requires_coverage() {
        let spec = ConstraintSpec::one_hot(4).unwrap();
        let net = build_divide_and_conquer(&spec, DepthLimit::Unlimited);
        let short = Assignment::new(alloc::vec![false; 3]);
        assert!(matches!(decode(&short, &net), Err(ModelError::Coverage { .. })));
    }

    #[test]
    fn histogram_orders_energies() {
        let params = AnnealParams::default();
        let mk = |energy: f64, read: usize| Sample {
            assignment: Assignment::new(alloc::vec![false]),
            energy,
            read,
        };
        let set = SampleSet {
            samples: alloc::vec![mk(1.0, 0), mk(0.0, 1), mk(1.0, 2), mk(4.0, 3)],
            params,
        };
        assert_eq!(energy_histogram(&set), alloc::vec![(0.0, 1), (1.0, 2), (4.0, 1)]);
    }

    #[test]
    fn params_validation() {
        let bad = AnnealParams { beta_start: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = AnnealParams { beta_start: 2.0, beta_end: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = AnnealParams { num_reads: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(AnnealParams::default().validate().is_ok());
    }
}
