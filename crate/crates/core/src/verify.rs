//! Desk-scale proofs that a network encodes its constraint exactly.
//!
//! Four layers, from structural to exhaustive:
//! - [`check_wiring`]: producer/consumer multiplicities of every variable,
//! - [`check_telescoping`]: summing all sub-constraints cancels auxiliaries
//!   and leaves exactly `Σx − Σc`,
//! - [`find_routing`]: a witness search assigning auxiliaries and slacks so
//!   every sub-constraint holds for a given input,
//! - [`exhaustive_exactness`]: sweeps all `2^n` inputs, requiring feasible
//!   inputs to route and infeasible ones to fail.
//!
//! Wiring plus telescoping already imply one half of exactness: any zero-
//! energy assignment satisfies the original constraint on its input part,
//! and since energies are multiples of λ, every violating assignment costs
//! at least λ. The routing sweep supplies the other half (every feasible
//! input actually reaches energy zero).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::constraint::ConstraintSpec;
use crate::network::{Network, Operand, SubConstraint, VarRef};
use crate::qubo::{Assignment, QuboModel};

/// Enumeration bound for [`exhaustive_exactness`].
pub const MAX_EXACTNESS_VARS: usize = 20;
/// Enumeration bound for [`brute_force_min`].
pub const MAX_BRUTE_FORCE_FREE: usize = 24;

/// Errors from the enumerating verifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyError {
    /// Input space too large to enumerate.
    TooManyInputs { n: usize, max: usize },
    /// Too many free variables to enumerate.
    TooManyFree { count: usize, max: usize },
    /// A fixed id is out of range or repeated.
    BadFixed { id: usize },
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::TooManyInputs { n, max } => {
                write!(f, "exactness sweep limited to n <= {max}, got n = {n}")
            }
            VerifyError::TooManyFree { count, max } => {
                write!(f, "brute force limited to {max} free variables, got {count}")
            }
            VerifyError::BadFixed { id } => write!(f, "bad fixed variable id {id}"),
        }
    }
}

impl core::error::Error for VerifyError {}

/// First wiring rule a network violates, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WiringViolation {
    EmptySide { sub: usize },
    IndexOutOfRange { var: VarRef },
    /// `var` appears on left-hand sides `count` times, expected `expected`.
    LhsCount { var: VarRef, count: usize, expected: usize },
    /// `var` appears on right-hand sides `count` times, expected `expected`.
    RhsCount { var: VarRef, count: usize, expected: usize },
    /// Constant `value` appears `count` times, target sequence has `expected`.
    ConstantCount { value: bool, count: usize, expected: usize },
}

impl fmt::Display for WiringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WiringViolation::EmptySide { sub } => write!(f, "sub-constraint {sub} has an empty side"),
            WiringViolation::IndexOutOfRange { var } => write!(f, "{var} out of declared range"),
            WiringViolation::LhsCount { var, count, expected } => {
                write!(f, "{var} on lhs x{count}, expected x{expected}")
            }
            WiringViolation::RhsCount { var, count, expected } => {
                write!(f, "{var} on rhs x{count}, expected x{expected}")
            }
            WiringViolation::ConstantCount { value, count, expected } => {
                let bit = i32::from(*value);
                write!(f, "constant {bit} appears x{count}, target sequence has x{expected}")
            }
        }
    }
}

/// Checks producer/consumer multiplicities: each original exactly once on a
/// left side and never on a right side; each auxiliary once on each side;
/// each slack exactly once on a right side; constants matching the target
/// sequence composition.
pub fn check_wiring(network: &Network) -> Result<(), WiringViolation> {
    let n = network.spec().n();
    let aux = network.aux_count();
    let slack = network.slack_count();
    let index = |v: VarRef| -> Result<usize, WiringViolation> {
        let ok = match v {
            VarRef::Original(i) => i < n,
            VarRef::Auxiliary(j) => j < aux,
            VarRef::Slack(k) => k < slack,
        };
        if !ok {
            return Err(WiringViolation::IndexOutOfRange { var: v });
        }
        Ok(match v {
            VarRef::Original(i) => i,
            VarRef::Auxiliary(j) => n + j,
            VarRef::Slack(k) => n + aux + k,
        })
    };

    let total = n + aux + slack;
    let mut lhs_count = vec![0usize; total];
    let mut rhs_count = vec![0usize; total];
    let mut const_count = [0usize; 2];
    for (s, sub) in network.subs().iter().enumerate() {
        if sub.lhs.is_empty() || sub.rhs.is_empty() {
            return Err(WiringViolation::EmptySide { sub: s });
        }
        for &v in &sub.lhs {
            lhs_count[index(v)?] += 1;
        }
        for op in &sub.rhs {
            match op {
                Operand::Var(v) => rhs_count[index(*v)?] += 1,
                Operand::Constant(bit) => const_count[usize::from(*bit)] += 1,
            }
        }
    }

    let roles = (0..n)
        .map(VarRef::Original)
        .chain((0..aux).map(VarRef::Auxiliary))
        .chain((0..slack).map(VarRef::Slack));
    for (id, var) in roles.enumerate() {
        let (lhs_expected, rhs_expected) = match var {
            VarRef::Original(_) => (1, 0),
            VarRef::Auxiliary(_) => (1, 1),
            VarRef::Slack(_) => (0, 1),
        };
        if lhs_count[id] != lhs_expected {
            return Err(WiringViolation::LhsCount {
                var,
                count: lhs_count[id],
                expected: lhs_expected,
            });
        }
        if rhs_count[id] != rhs_expected {
            return Err(WiringViolation::RhsCount {
                var,
                count: rhs_count[id],
                expected: rhs_expected,
            });
        }
    }

    let zeros = network.targets().zero_count();
    let ones = network.targets().one_count();
    for (value, count, expected) in [(false, const_count[0], zeros), (true, const_count[1], ones)] {
        if count != expected {
            return Err(WiringViolation::ConstantCount { value, count, expected });
        }
    }
    Ok(())
}

/// The residual left after summing all sub-constraints, expressed as the
/// deviation from the expected `Σx − Σc`. Empty deviations mean success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TelescopingResidual {
    /// Non-cancelling variable coefficients (actual minus expected).
    pub coefficients: BTreeMap<VarRef, i64>,
    /// Constant-term deviation (actual minus expected `-ones`).
    pub constant: i64,
}

impl fmt::Display for TelescopingResidual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "telescoping residual:")?;
        for (v, c) in &self.coefficients {
            write!(f, " {v}:{c:+}")?;
        }
        write!(f, " const:{:+}", self.constant)
    }
}

/// Sums `Σlhs − Σrhs` over all sub-constraints as a formal expression and
/// checks that it equals `Σx − Σc`: originals +1, auxiliaries cancelled,
/// slacks −1, constant term −(number of ones).
pub fn check_telescoping(network: &Network) -> Result<(), TelescopingResidual> {
    let mut coefficients: BTreeMap<VarRef, i64> = BTreeMap::new();
    let mut constant: i64 = 0;
    for sub in network.subs() {
        for &v in &sub.lhs {
            *coefficients.entry(v).or_insert(0) += 1;
        }
        for op in &sub.rhs {
            match op {
                Operand::Var(v) => *coefficients.entry(*v).or_insert(0) -= 1,
                Operand::Constant(bit) => constant -= i64::from(*bit),
            }
        }
    }
    for i in 0..network.spec().n() {
        *coefficients.entry(VarRef::Original(i)).or_insert(0) -= 1;
    }
    for k in 0..network.slack_count() {
        *coefficients.entry(VarRef::Slack(k)).or_insert(0) += 1;
    }
    constant += network.targets().one_count() as i64;
    coefficients.retain(|_, c| *c != 0);
    if coefficients.is_empty() && constant == 0 {
        Ok(())
    } else {
        Err(TelescopingResidual { coefficients, constant })
    }
}

/// A routing witness: values for every auxiliary and slack variable under
/// which all sub-constraints hold for the given input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Routing {
    pub aux: Vec<bool>,
    pub slacks: Vec<bool>,
}

impl Routing {
    /// Assembles the full model assignment (originals, auxiliaries, slacks).
    pub fn to_assignment(&self, x: &[bool]) -> Assignment {
        let mut bits = Vec::with_capacity(x.len() + self.aux.len() + self.slacks.len());
        bits.extend_from_slice(x);
        bits.extend_from_slice(&self.aux);
        bits.extend_from_slice(&self.slacks);
        Assignment::new(bits)
    }
}

struct RoutingSearch<'a> {
    subs: &'a [SubConstraint],
    order: Vec<usize>,
    x: &'a [bool],
    aux: Vec<Option<bool>>,
    slacks: Vec<Option<bool>>,
}

impl<'a> RoutingSearch<'a> {
    fn value(&self, v: VarRef) -> Option<bool> {
        match v {
            VarRef::Original(i) => Some(self.x[i]),
            VarRef::Auxiliary(j) => self.aux[j],
            VarRef::Slack(k) => self.slacks[k],
        }
    }

    fn dfs(&mut self, pos: usize) -> bool {
        let Some(&sub_idx) = self.order.get(pos) else {
            return true;
        };
        let sub = &self.subs[sub_idx];
        let mut lhs_sum = 0usize;
        for &v in &sub.lhs {
            match self.value(v) {
                Some(true) => lhs_sum += 1,
                Some(false) => {}
                // producer ordering guarantees known inputs on valid networks
                None => return false,
            }
        }
        let mut constants = 0usize;
        let mut unknown_aux: Vec<usize> = Vec::new();
        let mut unknown_slacks: Vec<usize> = Vec::new();
        for op in &sub.rhs {
            match op {
                Operand::Constant(bit) => constants += usize::from(*bit),
                Operand::Var(VarRef::Auxiliary(j)) => unknown_aux.push(*j),
                Operand::Var(VarRef::Slack(k)) => unknown_slacks.push(*k),
                Operand::Var(VarRef::Original(_)) => return false,
            }
        }
        if lhs_sum < constants {
            return false;
        }
        let needed = lhs_sum - constants;
        let (p_a, p_s) = (unknown_aux.len(), unknown_slacks.len());
        if needed > p_a + p_s {
            return false;
        }

        // Slacks are free variables seen nowhere else, so their distribution
        // within the sub-constraint is canonical (first ones get 1). Only the
        // auxiliary split branches, and only at cross switches (p_a = 2).
        let ones_lo = needed.saturating_sub(p_s);
        let ones_hi = needed.min(p_a);
        for aux_ones in ones_lo..=ones_hi {
            let mut mask: u64 = 0;
            loop {
                if (mask.count_ones() as usize) == aux_ones {
                    for (bit, &j) in unknown_aux.iter().enumerate() {
                        self.aux[j] = Some(mask >> bit & 1 == 1);
                    }
                    let slack_ones = needed - aux_ones;
                    for (i, &k) in unknown_slacks.iter().enumerate() {
                        self.slacks[k] = Some(i < slack_ones);
                    }
                    if self.dfs(pos + 1) {
                        return true;
                    }
                    for &j in &unknown_aux {
                        self.aux[j] = None;
                    }
                    for &k in &unknown_slacks {
                        self.slacks[k] = None;
                    }
                }
                mask += 1;
                if mask >= 1u64 << p_a {
                    break;
                }
            }
        }
        false
    }
}

/// Orders sub-constraints producer-before-consumer by auxiliary dependency.
/// Returns `None` if the dependency graph is cyclic.
fn topological_order(network: &Network) -> Option<Vec<usize>> {
    let subs = network.subs();
    let aux = network.aux_count();
    let mut producer = vec![usize::MAX; aux];
    for (idx, sub) in subs.iter().enumerate() {
        for op in &sub.rhs {
            if let Operand::Var(VarRef::Auxiliary(j)) = op {
                producer[*j] = idx;
            }
        }
    }
    let mut in_degree = vec![0usize; subs.len()];
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); subs.len()];
    for (idx, sub) in subs.iter().enumerate() {
        for &v in &sub.lhs {
            if let VarRef::Auxiliary(j) = v {
                let p = producer[j];
                if p == usize::MAX {
                    return None;
                }
                consumers[p].push(idx);
                in_degree[idx] += 1;
            }
        }
    }
    // Kahn's algorithm; the ready set is kept sorted for deterministic order.
    let mut ready: alloc::collections::BTreeSet<usize> =
        (0..subs.len()).filter(|&i| in_degree[i] == 0).collect();
    let mut order = Vec::with_capacity(subs.len());
    while let Some(&next) = ready.iter().next() {
        ready.remove(&next);
        order.push(next);
        for &c in &consumers[next] {
            in_degree[c] -= 1;
            if in_degree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    (order.len() == subs.len()).then_some(order)
}

/// Searches for auxiliary and slack values making every sub-constraint hold
/// for the input `x`. Sub-constraints are visited producer-first; forced
/// values propagate and only genuinely branching cross switches backtrack.
/// `None` means no routing exists.
pub fn find_routing(network: &Network, x: &[bool]) -> Option<Routing> {
    assert_eq!(x.len(), network.spec().n(), "input length must match n");
    // Telescoping bounds the achievable target sums; inputs outside the
    // window cannot route no matter the switch settings.
    let weight = x.iter().filter(|&&b| b).count();
    let lo = network.targets().one_count();
    let hi = lo + network.slack_count();
    if weight < lo || weight > hi {
        return None;
    }
    let order = topological_order(network)?;
    let mut search = RoutingSearch {
        subs: network.subs(),
        order,
        x,
        aux: vec![None; network.aux_count()],
        slacks: vec![None; network.slack_count()],
    };
    if !search.dfs(0) {
        return None;
    }
    Some(Routing {
        aux: search.aux.into_iter().map(|v| v.unwrap_or(false)).collect(),
        slacks: search.slacks.into_iter().map(|v| v.unwrap_or(false)).collect(),
    })
}

/// Outcome of an exhaustive input sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub n_inputs_checked: u64,
    pub n_feasible: u64,
    pub n_routed: u64,
    /// Inputs whose routability disagrees with feasibility.
    pub counterexamples: Vec<Vec<bool>>,
    /// Whether the structural checks backing the energy-gap argument passed.
    pub gap_verified: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.counterexamples.is_empty() && self.n_routed == self.n_feasible
    }

    /// Combines two partial sweeps; merging is associative, so the input
    /// space may be partitioned across workers in any way.
    pub fn merge(mut self, other: ExactnessReport) -> ExactnessReport {
        self.n_inputs_checked += other.n_inputs_checked;
        self.n_feasible += other.n_feasible;
        self.n_routed += other.n_routed;
        self.counterexamples.extend(other.counterexamples);
        self.gap_verified &= other.gap_verified;
        self
    }
}

/// Sweeps the input masks in `inputs` (each bit `i` of a mask is `x_i`).
/// See [`exhaustive_exactness`] for the full-space wrapper.
pub fn exactness_scan(
    spec: &ConstraintSpec,
    network: &Network,
    inputs: core::ops::Range<u64>,
) -> Result<ExactnessReport, VerifyError> {
    let n = spec.n();
    if n > MAX_EXACTNESS_VARS {
        return Err(VerifyError::TooManyInputs { n, max: MAX_EXACTNESS_VARS });
    }
    let gap_verified = check_wiring(network).is_ok() && check_telescoping(network).is_ok();
    let mut report = ExactnessReport {
        n_inputs_checked: 0,
        n_feasible: 0,
        n_routed: 0,
        counterexamples: Vec::new(),
        gap_verified,
    };
    let mut x = vec![false; n];
    for mask in inputs {
        for (i, bit) in x.iter_mut().enumerate() {
            *bit = mask >> i & 1 == 1;
        }
        let feasible = spec.admits_sum(mask.count_ones() as usize);
        let routed = find_routing(network, &x).is_some();
        report.n_inputs_checked += 1;
        report.n_feasible += u64::from(feasible);
        report.n_routed += u64::from(routed);
        if feasible != routed {
            report.counterexamples.push(x.clone());
        }
    }
    Ok(report)
}

/// Checks every input in `{0,1}^n`: feasible inputs must route to a witness
/// (an energy-0 assignment) and infeasible ones must not route. Infeasible
/// inputs then have conditional minimum ≥ λ by the telescoping and energy
/// quantization arguments.
pub fn exhaustive_exactness(
    spec: &ConstraintSpec,
    network: &Network,
) -> Result<ExactnessReport, VerifyError> {
    let n = spec.n();
    if n > MAX_EXACTNESS_VARS {
        return Err(VerifyError::TooManyInputs { n, max: MAX_EXACTNESS_VARS });
    }
    exactness_scan(spec, network, 0..1u64 << n)
}

/// Exact minimum energy over all completions of a partial assignment, by
/// Gray-code enumeration of the free variables. Returns the minimum and one
/// minimizing assignment.
pub fn brute_force_min(
    model: &QuboModel,
    fixed: &[(usize, bool)],
) -> Result<(f64, Assignment), VerifyError> {
    let total = model.var_count();
    let mut is_fixed = vec![false; total];
    let mut bits = vec![false; total];
    for &(id, value) in fixed {
        if id >= total || is_fixed[id] {
            return Err(VerifyError::BadFixed { id });
        }
        is_fixed[id] = true;
        bits[id] = value;
    }
    let free: Vec<usize> = (0..total).filter(|&id| !is_fixed[id]).collect();
    if free.len() > MAX_BRUTE_FORCE_FREE {
        return Err(VerifyError::TooManyFree { count: free.len(), max: MAX_BRUTE_FORCE_FREE });
    }

    let adjacency = crate::qubo::Adjacency::new(model);
    let mut energy = model.energy(&Assignment::new(bits.clone())).expect("full coverage");
    let mut best_energy = energy;
    let mut best_bits = bits.clone();
    // Gray-code walk: step i flips exactly one free variable.
    for step in 1u64..1u64 << free.len() {
        let var = free[step.trailing_zeros() as usize];
        energy += adjacency.flip_delta(&bits, var);
        bits[var] = !bits[var];
        if energy < best_energy {
            best_energy = energy;
            best_bits = bits.clone();
        }
    }
    Ok((best_energy, Assignment::new(best_bits)))
}
