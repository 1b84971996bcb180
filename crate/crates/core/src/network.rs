//! Decomposition networks for cardinality constraints.
//!
//! A network rewrites one global constraint `Σx = Σc` as a list of local
//! sub-constraints. Wires carry binary values from the original variables on
//! the left to the target entries on the right; each switch equates the sum
//! of its incoming operands with the sum of its outgoing ones, introducing
//! fresh auxiliary variables on intermediate wire segments. Summing all
//! sub-constraints telescopes the auxiliaries away and recovers the original
//! constraint, so enforcing every local equality enforces the global one.
//!
//! Three builders are provided:
//! - [`build_clique_network`]: the conventional single dense switch,
//! - [`build_chain`]: the `N-1`-switch ladder for one-hot / one-cold targets,
//! - [`build_divide_and_conquer`]: the general recursive construction, with a
//!   controllable halting depth for trading variables against edges.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::constraint::{ConstraintSpec, TargetEntry, TargetSequence};
use crate::qubo::{assemble, model_stats};

/// A reference to one binary variable of the formulation.
///
/// Indices are contiguous from 0 within each role. The ordering (originals,
/// then auxiliaries, then slacks) matches the dense id layout used by
/// assembled models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRef {
    /// One of the `n` constrained variables, `x_i`.
    Original(usize),
    /// A fresh variable on an intermediate wire segment, `y_j`.
    Auxiliary(usize),
    /// An independent slack from the target sequence, `s_k`.
    Slack(usize),
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarRef::Original(i) => write!(f, "x{i}"),
            VarRef::Auxiliary(i) => write!(f, "y{i}"),
            VarRef::Slack(i) => write!(f, "s{i}"),
        }
    }
}

/// A variable or a constant bit. Constants only ever appear on the right
/// side of a sub-constraint, mirroring the targets sitting on the right side
/// of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operand {
    Var(VarRef),
    Constant(bool),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Var(v) => write!(f, "{v}"),
            Operand::Constant(false) => write!(f, "0"),
            Operand::Constant(true) => write!(f, "1"),
        }
    }
}

/// One local equality: the sum of the left side equals the sum of the right
/// side in any satisfying assignment. The left side holds only variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubConstraint {
    pub lhs: Vec<VarRef>,
    pub rhs: Vec<Operand>,
}

impl fmt::Display for SubConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.lhs.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, " = ")?;
        for (i, o) in self.rhs.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Where the recursive division stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthLimit {
    /// Emit a dense sub-constraint for any group still undivided at `d`.
    Limited(usize),
    /// Divide until only base cases remain.
    Unlimited,
}

impl DepthLimit {
    fn as_option(self) -> Option<usize> {
        match self {
            DepthLimit::Limited(d) => Some(d),
            DepthLimit::Unlimited => None,
        }
    }
}

/// Reporting label describing how a network was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthLabel {
    /// The conventional single-switch construction.
    Clique,
    /// Division halted at the given depth.
    Depth(usize),
    /// Fully divided.
    Full,
}

impl fmt::Display for DepthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthLabel::Clique => write!(f, "clique"),
            DepthLabel::Depth(d) => write!(f, "depth={d}"),
            DepthLabel::Full => write!(f, "full"),
        }
    }
}

/// A complete decomposition network for one constraint instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    spec: ConstraintSpec,
    targets: TargetSequence,
    subs: Vec<SubConstraint>,
    aux_count: usize,
    depth: DepthLabel,
}

impl Network {
    pub fn spec(&self) -> &ConstraintSpec {
        &self.spec
    }

    pub fn targets(&self) -> &TargetSequence {
        &self.targets
    }

    pub fn subs(&self) -> &[SubConstraint] {
        &self.subs
    }

    /// Number of auxiliary variables introduced by the construction.
    pub fn aux_count(&self) -> usize {
        self.aux_count
    }

    /// Number of slack variables in the target sequence.
    pub fn slack_count(&self) -> usize {
        self.targets.slack_count()
    }

    /// Total variable count: originals + auxiliaries + slacks.
    pub fn var_count(&self) -> usize {
        self.spec.n() + self.aux_count + self.slack_count()
    }

    pub fn depth_label(&self) -> DepthLabel {
        self.depth
    }

    /// Structural equality ignoring the reporting label.
    pub fn same_structure(&self, other: &Network) -> bool {
        self.spec == other.spec && self.subs == other.subs && self.aux_count == other.aux_count
    }

    /// Replaces the sub-constraint list wholesale; for constructing broken
    /// networks in negative tests.
    #[cfg(test)]
    pub(crate) fn test_with_subs(base: Network, subs: Vec<SubConstraint>) -> Network {
        Network { subs, ..base }
    }
}

/// Error from [`build_chain`] when the targets are not a one-hot or one-cold
/// pattern of constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCaseError {
    pub zeros: usize,
    pub ones: usize,
    pub slacks: usize,
    pub wires: usize,
}

impl fmt::Display for BaseCaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chain base case needs >= 2 wires and exactly one 1 among 0s or one 0 among 1s, \
             got {} wires with {} zeros / {} ones / {} slacks",
            self.wires, self.zeros, self.ones, self.slacks
        )
    }
}

impl core::error::Error for BaseCaseError {}

/// Cost function used by [`select_network`] to pick a division depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostModel {
    /// Minimize quadratic terms (the embedding-relevant metric).
    Edges,
    /// Minimize total variable count.
    Variables,
    /// Minimize `alpha * variables + beta * edges`.
    Weighted { alpha: f64, beta: f64 },
}

/// A group of target entries in canonical order: zeros, then slacks, then
/// ones. Groups are the unit the recursive builder splits and hands down.
#[derive(Debug, Clone)]
struct TargetGroup {
    zeros: usize,
    slack_ids: Vec<usize>,
    ones: usize,
}

impl TargetGroup {
    fn from_sequence(seq: &TargetSequence) -> Self {
        let mut group = TargetGroup { zeros: 0, slack_ids: Vec::new(), ones: 0 };
        for entry in seq.entries() {
            match entry {
                TargetEntry::Zero => group.zeros += 1,
                TargetEntry::One => group.ones += 1,
                TargetEntry::Slack(id) => group.slack_ids.push(*id),
            }
        }
        group
    }

    fn len(&self) -> usize {
        self.zeros + self.slack_ids.len() + self.ones
    }

    fn to_operands(&self) -> Vec<Operand> {
        let mut rhs = Vec::with_capacity(self.len());
        rhs.extend((0..self.zeros).map(|_| Operand::Constant(false)));
        rhs.extend(self.slack_ids.iter().map(|&id| Operand::Var(VarRef::Slack(id))));
        rhs.extend((0..self.ones).map(|_| Operand::Constant(true)));
        rhs
    }
}

#[derive(Clone, Copy)]
enum ChainKind {
    /// One 1 among 0s: zeros drain left to right, the 1 exits last.
    OneHot,
    /// One 0 among 1s: same ladder with the constants exchanged.
    OneCold,
}

#[derive(Default)]
struct Builder {
    subs: Vec<SubConstraint>,
    aux_count: usize,
}

impl Builder {
    fn fresh_aux(&mut self) -> VarRef {
        let var = VarRef::Auxiliary(self.aux_count);
        self.aux_count += 1;
        var
    }

    /// One dense switch equating the whole group with its targets.
    fn dense(&mut self, wires: &[VarRef], targets: &TargetGroup) {
        self.subs.push(SubConstraint { lhs: wires.to_vec(), rhs: targets.to_operands() });
    }

    /// Per-wire constant sub-constraints for all-zero / all-one groups.
    fn per_wire_constant(&mut self, wires: &[VarRef], bit: bool) {
        for &w in wires {
            self.subs.push(SubConstraint { lhs: vec![w], rhs: vec![Operand::Constant(bit)] });
        }
    }

    /// Per-wire identity sub-constraints for all-slack groups.
    fn per_wire_slack(&mut self, wires: &[VarRef], slack_ids: &[usize]) {
        for (&w, &id) in wires.iter().zip(slack_ids) {
            self.subs
                .push(SubConstraint { lhs: vec![w], rhs: vec![Operand::Var(VarRef::Slack(id))] });
        }
    }

    /// The ladder network: `m - 1` switches chained left to right. The
    /// majority constant drains off one switch at a time; the final switch
    /// emits the last drain constant together with the minority constant.
    fn chain(&mut self, wires: &[VarRef], kind: ChainKind) {
        debug_assert!(wires.len() >= 2);
        let (drain, last) = match kind {
            ChainKind::OneHot => (false, true),
            ChainKind::OneCold => (true, false),
        };
        let m = wires.len();
        let mut prev = wires[0];
        for (j, &wire) in wires.iter().enumerate().skip(1) {
            if j + 1 < m {
                let next = self.fresh_aux();
                self.subs.push(SubConstraint {
                    lhs: vec![prev, wire],
                    rhs: vec![Operand::Constant(drain), Operand::Var(next)],
                });
                prev = next;
            } else {
                self.subs.push(SubConstraint {
                    lhs: vec![prev, wire],
                    rhs: vec![Operand::Constant(drain), Operand::Constant(last)],
                });
            }
        }
    }

    /// Recursive division. `limit` of `Some(d)` halts division at depth `d`
    /// by emitting a dense switch for the remaining group.
    fn recurse(&mut self, wires: &[VarRef], targets: TargetGroup, depth: usize, limit: Option<usize>) {
        let m = wires.len();
        debug_assert_eq!(m, targets.len());
        debug_assert!(m >= 1);

        if limit == Some(depth) {
            self.dense(wires, &targets);
            return;
        }

        let slacks = targets.slack_ids.len();
        if slacks == 0 {
            if targets.ones == 0 {
                self.per_wire_constant(wires, false);
                return;
            }
            if targets.zeros == 0 {
                self.per_wire_constant(wires, true);
                return;
            }
            if targets.ones == 1 {
                self.chain(wires, ChainKind::OneHot);
                return;
            }
            if targets.zeros == 1 {
                self.chain(wires, ChainKind::OneCold);
                return;
            }
        } else if targets.zeros == 0 && targets.ones == 0 {
            self.per_wire_slack(wires, &targets.slack_ids);
            return;
        }

        // Divide. Group 1 takes the first ceil(m/2) wires and ceil(ones/2)
        // ones; slacks split so that each group's admissible sum interval is
        // the halved parent interval (group 1 gets the ceilings), and zeros
        // fill the remainder. Splitting slacks by a bare ceiling instead can
        // strand a group without absorption capacity for the values its
        // cross switches are forced to hand over, breaking exactness.
        let g1_len = m.div_ceil(2);
        let g2_len = m / 2;
        let o1 = targets.ones.div_ceil(2);
        let s1 = (targets.ones + slacks).div_ceil(2) - o1;
        let z1 = g1_len - o1 - s1;
        debug_assert!(z1 <= targets.zeros);

        let g1_targets = TargetGroup {
            zeros: z1,
            slack_ids: targets.slack_ids[..s1].to_vec(),
            ones: o1,
        };
        let g2_targets = TargetGroup {
            zeros: targets.zeros - z1,
            slack_ids: targets.slack_ids[s1..].to_vec(),
            ones: targets.ones - o1,
        };

        // Cross switches pair the groups wire by wire; when m is odd the
        // first wire of group 1 has no partner and passes through unchanged.
        let offset = g1_len - g2_len;
        let mut g1_wires = Vec::with_capacity(g1_len);
        let mut g2_wires = Vec::with_capacity(g2_len);
        if offset == 1 {
            g1_wires.push(wires[0]);
        }
        for i in 0..g2_len {
            let a = self.fresh_aux();
            let b = self.fresh_aux();
            self.subs.push(SubConstraint {
                lhs: vec![wires[offset + i], wires[g1_len + i]],
                rhs: vec![Operand::Var(a), Operand::Var(b)],
            });
            g1_wires.push(a);
            g2_wires.push(b);
        }

        self.recurse(&g1_wires, g1_targets, depth + 1, limit);
        self.recurse(&g2_wires, g2_targets, depth + 1, limit);
    }
}

fn original_wires(n: usize) -> Vec<VarRef> {
    (0..n).map(VarRef::Original).collect()
}

/// The conventional formulation: one switch connecting every wire, directly
/// enforcing `Σx = Σc`. No auxiliary variables.
pub fn build_clique_network(spec: &ConstraintSpec) -> Network {
    let targets = spec.build_target_sequence();
    let group = TargetGroup::from_sequence(&targets);
    let mut builder = Builder::default();
    builder.dense(&original_wires(spec.n()), &group);
    Network {
        spec: *spec,
        targets,
        subs: builder.subs,
        aux_count: builder.aux_count,
        depth: DepthLabel::Clique,
    }
}

/// Builds the ladder network for a one-hot or one-cold constant target
/// pattern over the given wires. Returns the sub-constraints and the number
/// of fresh auxiliaries (numbered from 0).
///
/// The input order of the targets is immaterial; the builder always places
/// the minority constant on the final switch.
pub fn build_chain(
    wires: &[VarRef],
    targets: &[TargetEntry],
) -> Result<(Vec<SubConstraint>, usize), BaseCaseError> {
    let zeros = targets.iter().filter(|e| matches!(e, TargetEntry::Zero)).count();
    let ones = targets.iter().filter(|e| matches!(e, TargetEntry::One)).count();
    let slacks = targets.len() - zeros - ones;
    let err = BaseCaseError { zeros, ones, slacks, wires: wires.len() };
    if wires.len() != targets.len() || wires.len() < 2 || slacks > 0 {
        return Err(err);
    }
    let kind = if ones == 1 {
        ChainKind::OneHot
    } else if zeros == 1 {
        ChainKind::OneCold
    } else {
        return Err(err);
    };
    let mut builder = Builder::default();
    builder.chain(wires, kind);
    Ok((builder.subs, builder.aux_count))
}

/// The divide-and-conquer construction.
///
/// Groups are recursively halved, with cross switches between the halves
/// allowing values to migrate; recursion stops at all-constant, all-slack,
/// one-hot, and one-cold base cases, or at `depth_limit`, whichever comes
/// first. `DepthLimit::Limited(0)` reproduces the clique sub-constraint
/// exactly.
pub fn build_divide_and_conquer(spec: &ConstraintSpec, depth_limit: DepthLimit) -> Network {
    let targets = spec.build_target_sequence();
    let group = TargetGroup::from_sequence(&targets);
    let mut builder = Builder::default();
    builder.recurse(&original_wires(spec.n()), group, 0, depth_limit.as_option());
    let depth = match depth_limit {
        DepthLimit::Limited(d) => DepthLabel::Depth(d),
        DepthLimit::Unlimited => DepthLabel::Full,
    };
    Network { spec: *spec, targets, subs: builder.subs, aux_count: builder.aux_count, depth }
}

/// Builds the network at every halting depth, from 0 (clique) up to full
/// division. The list stops once deeper limits no longer change the result;
/// the last entry always equals the fully divided network and is labeled
/// [`DepthLabel::Full`].
pub fn enumerate_depths(spec: &ConstraintSpec) -> Vec<Network> {
    let mut out = vec![build_divide_and_conquer(spec, DepthLimit::Limited(0))];
    // The recursion depth is bounded by log2(n) + 1, so 2n iterations is
    // already unreachable; the cap only guards against construction bugs.
    for d in 1..=spec.n().max(2) * 2 {
        let net = build_divide_and_conquer(spec, DepthLimit::Limited(d));
        if net.same_structure(out.last().expect("nonempty")) {
            break;
        }
        out.push(net);
    }
    if let Some(last) = out.last_mut() {
        last.depth = DepthLabel::Full;
    }
    out
}

impl CostModel {
    fn evaluate(&self, variables: usize, edges: usize) -> f64 {
        match self {
            CostModel::Edges => edges as f64,
            CostModel::Variables => variables as f64,
            CostModel::Weighted { alpha, beta } => {
                alpha * variables as f64 + beta * edges as f64
            }
        }
    }
}

/// Picks the halting depth minimizing the given formulation-level cost.
/// Ties break toward deeper division.
pub fn select_network(spec: &ConstraintSpec, cost: CostModel) -> Network {
    let mut best: Option<(f64, Network)> = None;
    for net in enumerate_depths(spec) {
        let model = assemble(&net, 1.0);
        let stats = model_stats(&net, &model);
        let c = cost.evaluate(stats.n_variables, stats.n_edges);
        match &best {
            Some((b, _)) if c > *b => {}
            _ => best = Some((c, net)),
        }
    }
    best.expect("enumerate_depths is never empty").1
}
