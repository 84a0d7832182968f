//! Magic distances, the `⊕` operation and the stage ordering used by the
//! magic completion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{AdmissibilityCase, ParameterSequence};

/// Every magic distance of an admissible parameter sequence, ascending.
pub fn magic_distances(p: &ParameterSequence) -> Result<Vec<u32>> {
    p.require_admissible()?;
    let (delta, k1, k2, c) = (p.delta(), p.k1(), p.k2(), p.c());
    let lower = k1.max(delta.div_ceil(2));
    let upper = k2.min((c - delta - 1) / 2);
    let case_iii = p.case() == AdmissibilityCase::CaseIII;
    let tight_k = case_iii && k1 + 2 * k2 == 2 * delta - 1;
    let tight_c = case_iii && p.c_prime() > c + 1 && c == 2 * delta + k2;
    Ok((lower..=upper)
        .filter(|&m| !tight_k || m > k1)
        .filter(|&m| !tight_c || m < k2)
        .collect())
}

/// Which branch of `⊕` closed a fork.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ForkKind {
    /// `x + y`
    Plus,
    /// `|x - y|`
    Minus,
    /// `C - 1 - x - y`
    CFork,
    /// The fallback value `M`.
    Magic,
}

/// Value of the time function; `Infinite` only for `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Time {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Finite(t) => write!(f, "{t}"),
            Time::Infinite => f.write_str("inf"),
        }
    }
}

/// How distances below `M` are timed. Distances above `M` always get
/// `2(δ - x)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRule {
    /// `t(x) = 2x + 1`, so `δ - 1` is filled before `1`.
    #[default]
    Standard,
    /// `t(x) = 2x - 1`, giving the alternating order `δ, 1, δ - 1, 2, ...`.
    Interleaved,
}

impl TimeRule {
    pub fn time(self, delta: u32, m: u32, x: u32) -> Time {
        use std::cmp::Ordering::*;
        match x.cmp(&m) {
            Less => Time::Finite(match self {
                TimeRule::Standard => 2 * x + 1,
                TimeRule::Interleaved => 2 * x - 1,
            }),
            Greater => Time::Finite(2 * (delta - x)),
            Equal => Time::Infinite,
        }
    }
}

impl fmt::Display for TimeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeRule::Standard => "standard",
            TimeRule::Interleaved => "interleaved",
        })
    }
}

pub fn time_of(delta: u32, m: u32, x: u32) -> Time {
    TimeRule::Standard.time(delta, m, x)
}

/// Distances `1..=δ` sorted by time; the last entry is always `m`.
pub fn magic_permutation(p: &ParameterSequence, m: u32) -> Result<Vec<u32>> {
    magic_permutation_with(p, m, TimeRule::Standard)
}

pub fn magic_permutation_with(p: &ParameterSequence, m: u32, rule: TimeRule) -> Result<Vec<u32>> {
    let candidates = magic_distances(p)?;
    if !candidates.contains(&m) {
        return Err(Error::NotMagic { params: p.raw(), m, candidates });
    }
    Ok(permutation_for(p.delta(), m, rule))
}

fn permutation_for(delta: u32, m: u32, rule: TimeRule) -> Vec<u32> {
    let mut order: Vec<u32> = (1..=delta).collect();
    order.sort_by_key(|&x| rule.time(delta, m, x));
    order
}

/// An admissible parameter sequence together with a chosen magic distance
/// and the precomputed `⊕` table. Immutable once built.
#[derive(Debug, Clone)]
pub struct MagicContext {
    params: ParameterSequence,
    m: u32,
    rule: TimeRule,
    oplus: Vec<u32>,
    forks: Vec<ForkKind>,
    permutation: Vec<u32>,
    // rank[x] = position of x in the permutation (0-based); index 0 unused
    rank: Vec<u32>,
}

impl MagicContext {
    /// Uses the smallest magic distance.
    pub fn new(params: ParameterSequence) -> Result<Self> {
        let m = magic_distances(&params)?[0];
        Ok(Self::build(params, m, TimeRule::Standard))
    }

    pub fn with_magic(params: ParameterSequence, m: u32) -> Result<Self> {
        magic_permutation(&params, m)?;
        Ok(Self::build(params, m, TimeRule::Standard))
    }

    /// Same parameters and `M`, stages reordered by `rule`.
    pub fn with_rule(self, rule: TimeRule) -> Self {
        Self::build(self.params, self.m, rule)
    }

    fn build(params: ParameterSequence, m: u32, rule: TimeRule) -> Self {
        let delta = params.delta();
        let c = i64::from(params.c());
        let size = (delta * delta) as usize;
        let mut oplus = Vec::with_capacity(size);
        let mut forks = Vec::with_capacity(size);
        for x in 1..=delta {
            for y in 1..=delta {
                let (value, kind) = evaluate(c, m, x, y);
                oplus.push(value);
                forks.push(kind);
            }
        }
        let permutation = permutation_for(delta, m, rule);
        let mut rank = vec![0; delta as usize + 1];
        for (i, &d) in permutation.iter().enumerate() {
            rank[d as usize] = i as u32;
        }
        Self { params, m, rule, oplus, forks, permutation, rank }
    }

    pub fn params(&self) -> &ParameterSequence {
        &self.params
    }

    pub fn delta(&self) -> u32 {
        self.params.delta()
    }

    /// The magic distance `M`.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rule(&self) -> TimeRule {
        self.rule
    }

    pub fn permutation(&self) -> &[u32] {
        &self.permutation
    }

    pub fn check_label(&self, label: u32) -> Result<()> {
        if (1..=self.delta()).contains(&label) {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange { label, delta: self.delta() })
        }
    }

    pub fn oplus(&self, x: u32, y: u32) -> Result<u32> {
        self.check_label(x)?;
        self.check_label(y)?;
        Ok(self.op(x, y))
    }

    pub fn fork_kind(&self, x: u32, y: u32) -> Result<ForkKind> {
        self.check_label(x)?;
        self.check_label(y)?;
        Ok(self.forks[self.index(x, y)])
    }

    /// Unchecked `⊕`; labels must already be in `1..=δ`.
    #[inline]
    pub(crate) fn op(&self, x: u32, y: u32) -> u32 {
        self.oplus[self.index(x, y)]
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        ((x - 1) * self.delta() + (y - 1)) as usize
    }

    pub fn time(&self, x: u32) -> Time {
        self.rule.time(self.delta(), self.m, x)
    }

    /// 0-based stage at which distance `x` is filled.
    #[inline]
    pub fn stage_of(&self, x: u32) -> usize {
        self.rank[x as usize] as usize
    }

    /// Row-major `⊕` table, rows and columns indexed by `1..=δ`.
    pub fn table(&self) -> Vec<Vec<u32>> {
        self.oplus.chunks(self.delta() as usize).map(<[u32]>::to_vec).collect()
    }
}

fn evaluate(c: i64, m: u32, x: u32, y: u32) -> (u32, ForkKind) {
    let diff = x.abs_diff(y);
    if diff > m {
        return (diff, ForkKind::Minus);
    }
    let plus = i64::from(x + y);
    let cfork = c - 1 - plus;
    let low = plus.min(cfork);
    if low < i64::from(m) {
        // ties report Plus; the value is the same either way
        let kind = if plus <= cfork { ForkKind::Plus } else { ForkKind::CFork };
        return (low as u32, kind);
    }
    (m, ForkKind::Magic)
}
