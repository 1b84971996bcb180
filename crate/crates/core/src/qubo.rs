//! QUBO assembly: squared-penalty expansion of sub-constraints.
//!
//! Each sub-constraint `Σlhs = Σrhs` becomes the penalty `λ (Σlhs − Σrhs)²`;
//! the model is the sum of these penalties. The minimum energy over all
//! binary assignments is 0 exactly when every sub-constraint can be satisfied
//! simultaneously, and any violating assignment costs at least λ because all
//! achievable energies are multiples of λ.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::network::{Network, Operand, SubConstraint, VarRef};

/// Errors from model construction and evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    /// An assignment does not cover the model's variables.
    Coverage { expected: usize, got: usize },
    /// Variable registry not strictly increasing in canonical order.
    UnsortedVariables,
    /// A coefficient key references no registered variable.
    UnknownId { id: usize },
    /// Quadratic key not canonical (requires i < j).
    BadPair { i: usize, j: usize },
    /// A coefficient, offset, or λ is not finite, or λ is not positive.
    BadValue,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Coverage { expected, got } => {
                write!(f, "assignment covers {got} variables, model has {expected}")
            }
            ModelError::UnsortedVariables => {
                write!(f, "variable registry must be strictly increasing")
            }
            ModelError::UnknownId { id } => write!(f, "coefficient references unknown id {id}"),
            ModelError::BadPair { i, j } => write!(f, "quadratic key ({i}, {j}) requires i < j"),
            ModelError::BadValue => write!(f, "coefficients and λ must be finite, λ > 0"),
        }
    }
}

impl core::error::Error for ModelError {}

/// A binary valuation of every model variable, indexed by dense id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn get(&self, id: usize) -> bool {
        self.bits[id]
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(bits: Vec<bool>) -> Self {
        Self::new(bits)
    }
}

/// The expansion of one squared penalty, keyed by variable reference rather
/// than dense id so it can be inspected independently of any model.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyExpansion {
    pub linear: BTreeMap<VarRef, f64>,
    pub quadratic: BTreeMap<(VarRef, VarRef), f64>,
    pub offset: f64,
}

/// Expands `λ (Σlhs − Σrhs)²` into coefficient increments.
///
/// With signed coefficient `σ_v` per variable (+1 on the left, −1 on the
/// right) and `t` the sum of right-side constant bits, using `b² = b`:
/// linear gains `λ (σ_v² − 2 t σ_v)`, each unordered pair gains
/// `λ 2 σ_u σ_v`, and the offset gains `λ t²`.
pub fn expand_sub_constraint(sub: &SubConstraint, lam: f64) -> PenaltyExpansion {
    let mut signed: BTreeMap<VarRef, i64> = BTreeMap::new();
    for &v in &sub.lhs {
        *signed.entry(v).or_insert(0) += 1;
    }
    let mut t: i64 = 0;
    for op in &sub.rhs {
        match op {
            Operand::Var(v) => *signed.entry(*v).or_insert(0) -= 1,
            Operand::Constant(bit) => t += i64::from(*bit),
        }
    }
    signed.retain(|_, sigma| *sigma != 0);

    let mut linear = BTreeMap::new();
    for (&v, &sigma) in &signed {
        let coef = lam * (sigma * sigma - 2 * t * sigma) as f64;
        if coef != 0.0 {
            linear.insert(v, coef);
        }
    }
    let vars: Vec<(VarRef, i64)> = signed.into_iter().collect();
    let mut quadratic = BTreeMap::new();
    for (i, &(u, su)) in vars.iter().enumerate() {
        for &(v, sv) in &vars[i + 1..] {
            quadratic.insert((u, v), lam * (2 * su * sv) as f64);
        }
    }
    PenaltyExpansion { linear, quadratic, offset: lam * (t * t) as f64 }
}

/// A QUBO model: a variable registry plus sparse coefficient maps.
///
/// Dense ids are positions in the registry, which is kept strictly increasing
/// in the canonical variable order (originals, auxiliaries, slacks). Zero
/// coefficients are never stored, so the quadratic key count is the edge
/// count of the coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    vars: Vec<VarRef>,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
    lam: f64,
}

impl QuboModel {
    /// Builds a model from raw parts, validating registry order and keys.
    pub fn from_parts(
        vars: Vec<VarRef>,
        linear: BTreeMap<usize, f64>,
        quadratic: BTreeMap<(usize, usize), f64>,
        offset: f64,
        lam: f64,
    ) -> Result<Self, ModelError> {
        if !vars.windows(2).all(|w| w[0] < w[1]) {
            return Err(ModelError::UnsortedVariables);
        }
        if !(lam.is_finite() && lam > 0.0 && offset.is_finite()) {
            return Err(ModelError::BadValue);
        }
        for (&id, &coef) in &linear {
            if id >= vars.len() {
                return Err(ModelError::UnknownId { id });
            }
            if !coef.is_finite() {
                return Err(ModelError::BadValue);
            }
        }
        for (&(i, j), &coef) in &quadratic {
            if i >= j {
                return Err(ModelError::BadPair { i, j });
            }
            if j >= vars.len() {
                return Err(ModelError::UnknownId { id: j });
            }
            if !coef.is_finite() {
                return Err(ModelError::BadValue);
            }
        }
        let mut model = Self { vars, linear, quadratic, offset, lam };
        model.prune_zeros();
        Ok(model)
    }

    fn prune_zeros(&mut self) {
        self.linear.retain(|_, c| *c != 0.0);
        self.quadratic.retain(|_, c| *c != 0.0);
    }

    pub fn vars(&self) -> &[VarRef] {
        &self.vars
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    /// Dense id of a variable, if registered.
    pub fn id_of(&self, var: VarRef) -> Option<usize> {
        self.vars.binary_search(&var).ok()
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn lam(&self) -> f64 {
        self.lam
    }

    /// Number of quadratic keys: the edge count of the coupling graph.
    pub fn edge_count(&self) -> usize {
        self.quadratic.len()
    }

    /// Evaluates `offset + Σ linear·b + Σ quadratic·b·b`.
    pub fn energy(&self, assignment: &Assignment) -> Result<f64, ModelError> {
        if assignment.len() != self.vars.len() {
            return Err(ModelError::Coverage { expected: self.vars.len(), got: assignment.len() });
        }
        let mut e = self.offset;
        for (&id, &coef) in &self.linear {
            if assignment.get(id) {
                e += coef;
            }
        }
        for (&(i, j), &coef) in &self.quadratic {
            if assignment.get(i) && assignment.get(j) {
                e += coef;
            }
        }
        Ok(e)
    }
}

/// Assembles a network into a QUBO model: the sum of the squared penalties
/// of all its sub-constraints, with coefficient merging and zero-pruning.
///
/// Equivalent to folding [`expand_sub_constraint`] over the network, but the
/// inner loop works on flat vectors so that dense clique expansions stay
/// cheap at sweep scale.
pub fn assemble(network: &Network, lam: f64) -> QuboModel {
    assert!(lam.is_finite() && lam > 0.0, "penalty scale must be positive");
    let n = network.spec().n();
    let aux = network.aux_count();
    let slack = network.slack_count();
    let id_of = |v: VarRef| -> usize {
        match v {
            VarRef::Original(i) => i,
            VarRef::Auxiliary(j) => n + j,
            VarRef::Slack(k) => n + aux + k,
        }
    };

    let mut linear = alloc::vec![0.0f64; n + aux + slack];
    let mut pairs: Vec<((usize, usize), f64)> = Vec::new();
    let mut offset = 0.0;
    let mut signed: Vec<(usize, i64)> = Vec::new();
    for sub in network.subs() {
        signed.clear();
        signed.extend(sub.lhs.iter().map(|&v| (id_of(v), 1i64)));
        let mut t: i64 = 0;
        for op in &sub.rhs {
            match op {
                Operand::Var(v) => signed.push((id_of(*v), -1)),
                Operand::Constant(bit) => t += i64::from(*bit),
            }
        }
        signed.sort_unstable_by_key(|&(id, _)| id);
        // collapse duplicate operands into net signed coefficients
        let mut write = 0;
        for read in 0..signed.len() {
            if write > 0 && signed[write - 1].0 == signed[read].0 {
                signed[write - 1].1 += signed[read].1;
            } else {
                signed[write] = signed[read];
                write += 1;
            }
        }
        signed.truncate(write);
        signed.retain(|&(_, sigma)| sigma != 0);

        for &(id, sigma) in &signed {
            linear[id] += lam * (sigma * sigma - 2 * t * sigma) as f64;
        }
        for (i, &(u, su)) in signed.iter().enumerate() {
            for &(v, sv) in &signed[i + 1..] {
                pairs.push(((u, v), lam * (2 * su * sv) as f64));
            }
        }
        offset += lam * (t * t) as f64;
    }

    pairs.sort_unstable_by_key(|&(key, _)| key);
    let mut quadratic = BTreeMap::new();
    let mut iter = pairs.into_iter().peekable();
    while let Some((key, mut coef)) = iter.next() {
        while let Some(&(next_key, next_coef)) = iter.peek() {
            if next_key != key {
                break;
            }
            coef += next_coef;
            iter.next();
        }
        if coef != 0.0 {
            quadratic.insert(key, coef);
        }
    }

    let mut vars = Vec::with_capacity(n + aux + slack);
    vars.extend((0..n).map(VarRef::Original));
    vars.extend((0..aux).map(VarRef::Auxiliary));
    vars.extend((0..slack).map(VarRef::Slack));

    let linear_map: BTreeMap<usize, f64> =
        linear.into_iter().enumerate().filter(|&(_, c)| c != 0.0).collect();

    QuboModel { vars, linear: linear_map, quadratic, offset, lam }
}

/// Neighbor lists for incremental energy evaluation; shared by the annealer
/// and the brute-force enumerator.
pub(crate) struct Adjacency {
    linear: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Adjacency {
    pub(crate) fn new(model: &QuboModel) -> Self {
        let mut linear = alloc::vec![0.0f64; model.var_count()];
        for (&id, &coef) in model.linear() {
            linear[id] = coef;
        }
        let mut neighbors = alloc::vec![Vec::new(); model.var_count()];
        for (&(i, j), &coef) in model.quadratic() {
            neighbors[i].push((j, coef));
            neighbors[j].push((i, coef));
        }
        Self { linear, neighbors }
    }

    /// Energy change from flipping variable `var` under `bits`.
    pub(crate) fn flip_delta(&self, bits: &[bool], var: usize) -> f64 {
        let mut field = self.linear[var];
        for &(j, coef) in &self.neighbors[var] {
            if bits[j] {
                field += coef;
            }
        }
        if bits[var] {
            -field
        } else {
            field
        }
    }
}

/// Structural counts of a formulation, as plotted in scaling sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulationStats {
    pub n_original: usize,
    pub n_auxiliary: usize,
    pub n_slack: usize,
    pub n_variables: usize,
    pub n_edges: usize,
    pub max_degree: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
}

/// Exact variable/edge/degree counts of a model assembled from `network`.
pub fn model_stats(network: &Network, model: &QuboModel) -> FormulationStats {
    debug_assert_eq!(model.var_count(), network.var_count());
    let mut n_original = 0;
    let mut n_auxiliary = 0;
    let mut n_slack = 0;
    for v in model.vars() {
        match v {
            VarRef::Original(_) => n_original += 1,
            VarRef::Auxiliary(_) => n_auxiliary += 1,
            VarRef::Slack(_) => n_slack += 1,
        }
    }
    let mut degree = alloc::vec![0usize; model.var_count()];
    for &(i, j) in model.quadratic().keys() {
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut degree_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &degree {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    FormulationStats {
        n_original,
        n_auxiliary,
        n_slack,
        n_variables: model.var_count(),
        n_edges: model.edge_count(),
        max_degree: degree.iter().copied().max().unwrap_or(0),
        degree_histogram,
    }
}

/// Coefficient-wise sum of models over the union of their variables.
///
/// Variables are identified by reference (role plus index), so overlapping
/// models add up on their shared variables and disjoint ones concatenate.
/// Zero coefficients are pruned. The result keeps the common λ if all inputs
/// agree, and resets it to 1.0 otherwise.
pub fn merge(models: &[&QuboModel]) -> QuboModel {
    let mut linear: BTreeMap<VarRef, f64> = BTreeMap::new();
    let mut quadratic: BTreeMap<(VarRef, VarRef), f64> = BTreeMap::new();
    let mut offset = 0.0;
    let mut vars: alloc::collections::BTreeSet<VarRef> = alloc::collections::BTreeSet::new();
    for model in models {
        vars.extend(model.vars().iter().copied());
        for (&id, &coef) in model.linear() {
            *linear.entry(model.vars()[id]).or_insert(0.0) += coef;
        }
        for (&(i, j), &coef) in model.quadratic() {
            *quadratic.entry((model.vars()[i], model.vars()[j])).or_insert(0.0) += coef;
        }
        offset += model.offset();
    }
    let lam = match models {
        [] => 1.0,
        [first, rest @ ..] => {
            if rest.iter().all(|m| m.lam() == first.lam()) {
                first.lam()
            } else {
                1.0
            }
        }
    };
    let vars: Vec<VarRef> = vars.into_iter().collect();
    let id_of = |v: VarRef| vars.binary_search(&v).expect("merged variable registered");
    let linear = linear
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|(v, c)| (id_of(v), c))
        .collect();
    let quadratic = quadratic
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|((u, v), c)| ((id_of(u), id_of(v)), c))
        .collect();
    QuboModel { vars, linear, quadratic, offset, lam }
}
