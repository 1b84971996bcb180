//! Constraint instances and their target sequences.
//!
//! A constraint restricts the number of ones among `n` binary variables.
//! Every supported kind is reduced to the same normal form: the sum of the
//! variables must equal the sum of a fixed-length sequence of binary targets,
//! where each target is the constant 0, the constant 1, or an independent
//! binary slack variable. Slack entries are what turn inequalities into an
//! equality family: `k` slacks can absorb any integer in `0..=k`.

use alloc::vec::Vec;
use core::fmt;

/// The supported constraint kinds over `n` binary variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// Exactly one variable is 1.
    OneHot,
    /// Exactly `k` variables are 1.
    Equality { k: usize },
    /// At most `k` variables are 1.
    AtMost { k: usize },
    /// At least `k` variables are 1.
    AtLeast { k: usize },
    /// Between `k1` and `k2` variables are 1 (inclusive).
    Range { k1: usize, k2: usize },
}

impl ConstraintKind {
    /// Canonical kind name, as used by the CLI and serialized spec files.
    pub fn name(&self) -> &'static str {
        match self {
            ConstraintKind::OneHot => "one-hot",
            ConstraintKind::Equality { .. } => "equality",
            ConstraintKind::AtMost { .. } => "at-most",
            ConstraintKind::AtLeast { .. } => "at-least",
            ConstraintKind::Range { .. } => "range",
        }
    }
}

/// Errors raised when a constraint instance violates its bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecError {
    /// `n` must be at least 1.
    Size { n: usize },
    /// A target bound lies outside `0..=n`, or `k1 > k2` for a range.
    Bounds { kind: &'static str, n: usize, lo: usize, hi: usize },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Size { n } => write!(f, "constraint needs at least one variable, got n={n}"),
            SpecError::Bounds { kind, n, lo, hi } => {
                if lo == hi {
                    write!(f, "{kind} bound k={lo} outside 0..={n}")
                } else {
                    write!(f, "{kind} bounds ({lo}, {hi}) invalid for n={n}")
                }
            }
        }
    }
}

impl core::error::Error for SpecError {}

/// A validated constraint instance: a kind plus the variable count `n`.
///
/// Construction checks all invariants, so holding a `ConstraintSpec` is proof
/// of validity. The declared kind is retained for reporting even though
/// one-hot is handled as equality with `k = 1` everywhere else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintSpec {
    kind: ConstraintKind,
    n: usize,
}

impl ConstraintSpec {
    /// Validates and constructs a constraint instance.
    pub fn new(kind: ConstraintKind, n: usize) -> Result<Self, SpecError> {
        if n < 1 {
            return Err(SpecError::Size { n });
        }
        match kind {
            ConstraintKind::OneHot => {}
            ConstraintKind::Equality { k } if k > n => {
                return Err(SpecError::Bounds { kind: "equality", n, lo: k, hi: k });
            }
            ConstraintKind::AtMost { k } if k > n => {
                return Err(SpecError::Bounds { kind: "at-most", n, lo: k, hi: k });
            }
            ConstraintKind::AtLeast { k } if k > n => {
                return Err(SpecError::Bounds { kind: "at-least", n, lo: k, hi: k });
            }
            ConstraintKind::Range { k1, k2 } if k1 > k2 || k2 > n => {
                return Err(SpecError::Bounds { kind: "range", n, lo: k1, hi: k2 });
            }
            _ => {}
        }
        Ok(Self { kind, n })
    }

    pub fn one_hot(n: usize) -> Result<Self, SpecError> {
        Self::new(ConstraintKind::OneHot, n)
    }

    pub fn equality(n: usize, k: usize) -> Result<Self, SpecError> {
        Self::new(ConstraintKind::Equality { k }, n)
    }

    pub fn at_most(n: usize, k: usize) -> Result<Self, SpecError> {
        Self::new(ConstraintKind::AtMost { k }, n)
    }

    pub fn at_least(n: usize, k: usize) -> Result<Self, SpecError> {
        Self::new(ConstraintKind::AtLeast { k }, n)
    }

    pub fn range(n: usize, k1: usize, k2: usize) -> Result<Self, SpecError> {
        Self::new(ConstraintKind::Range { k1, k2 }, n)
    }

    /// Number of constrained variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The kind as declared by the caller.
    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    /// The kind with one-hot rewritten as equality with `k = 1`.
    pub fn normalized_kind(&self) -> ConstraintKind {
        match self.kind {
            ConstraintKind::OneHot => ConstraintKind::Equality { k: 1 },
            other => other,
        }
    }

    /// How many zeros, slacks, and ones make up the target sequence.
    pub fn composition(&self) -> TargetComposition {
        let n = self.n;
        match self.normalized_kind() {
            ConstraintKind::OneHot => unreachable!("normalized away"),
            ConstraintKind::Equality { k } => TargetComposition { zeros: n - k, slacks: 0, ones: k },
            ConstraintKind::AtMost { k } => TargetComposition { zeros: n - k, slacks: k, ones: 0 },
            ConstraintKind::AtLeast { k } => TargetComposition { zeros: 0, slacks: n - k, ones: k },
            ConstraintKind::Range { k1, k2 } => {
                TargetComposition { zeros: n - k2, slacks: k2 - k1, ones: k1 }
            }
        }
    }

    /// Inclusive bounds on the admissible number of ones among the variables.
    pub fn sum_bounds(&self) -> (usize, usize) {
        let c = self.composition();
        (c.ones, c.ones + c.slacks)
    }

    /// Whether a given count of ones satisfies the constraint.
    pub fn admits_sum(&self, weight: usize) -> bool {
        let (lo, hi) = self.sum_bounds();
        (lo..=hi).contains(&weight)
    }

    /// Whether a full binary assignment of the `n` variables is feasible.
    pub fn is_satisfied(&self, bits: &[bool]) -> bool {
        debug_assert_eq!(bits.len(), self.n);
        self.admits_sum(bits.iter().filter(|&&b| b).count())
    }

    /// Number of binary vectors of length `n` satisfying the constraint,
    /// computed as a sum of binomial coefficients. Exact up to n = 127,
    /// where the intermediate products still fit in u128.
    pub fn feasible_count(&self) -> u128 {
        assert!(self.n <= 127, "feasible_count overflows u128 beyond n = 127");
        let (lo, hi) = self.sum_bounds();
        (lo..=hi).map(|w| binomial(self.n, w)).sum()
    }

    /// Builds the canonical target sequence: zeros, then slacks, then ones.
    ///
    /// The composition is what matters semantically; the order is fixed only
    /// so that repeated builds are reproducible. Slack entries are numbered
    /// `0..slacks` in sequence order.
    pub fn build_target_sequence(&self) -> TargetSequence {
        let c = self.composition();
        let mut entries = Vec::with_capacity(self.n);
        entries.extend((0..c.zeros).map(|_| TargetEntry::Zero));
        entries.extend((0..c.slacks).map(TargetEntry::Slack));
        entries.extend((0..c.ones).map(|_| TargetEntry::One));
        TargetSequence { entries }
    }
}

impl fmt::Display for ConstraintSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConstraintKind::OneHot => write!(f, "one-hot(n={})", self.n),
            ConstraintKind::Equality { k } => write!(f, "equality(n={}, k={k})", self.n),
            ConstraintKind::AtMost { k } => write!(f, "at-most(n={}, k={k})", self.n),
            ConstraintKind::AtLeast { k } => write!(f, "at-least(n={}, k={k})", self.n),
            ConstraintKind::Range { k1, k2 } => write!(f, "range(n={}, k1={k1}, k2={k2})", self.n),
        }
    }
}

/// Multiset summary of a target sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetComposition {
    pub zeros: usize,
    pub slacks: usize,
    pub ones: usize,
}

/// One entry of the target sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TargetEntry {
    Zero,
    One,
    /// An independent binary slack variable, identified by its index.
    Slack(usize),
}

/// The right-hand side of the normalized constraint: `n` target entries whose
/// sum the original variables must match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSequence {
    entries: Vec<TargetEntry>,
}

impl TargetSequence {
    pub fn entries(&self) -> &[TargetEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn zero_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, TargetEntry::Zero)).count()
    }

    pub fn one_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, TargetEntry::One)).count()
    }

    pub fn slack_count(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e, TargetEntry::Slack(_))).count()
    }
}

/// Binomial coefficient C(n, k) in u128 (exact for the sizes handled here).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
