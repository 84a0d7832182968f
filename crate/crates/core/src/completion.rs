//! The staged magic completion on graphs, and its single-fork view on
//! cycles (steps, inverse steps, tension).

use serde::Serialize;

use crate::error::Result;
use crate::graph::{EdgeLabelledGraph, LabelledCycle};
use crate::magic::{ForkKind, MagicContext};

/// Pairs filled during one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageFill {
    /// 1-based stage index `i`; the stage fills distance `d_i`.
    pub stage: usize,
    pub distance: u32,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CompletionTrace {
    /// Only stages that filled at least one pair, in permutation order.
    pub stages: Vec<StageFill>,
    /// Pairs no fork reached; these get `M`.
    pub fallback_pairs: Vec<(usize, usize)>,
}

impl CompletionTrace {
    pub fn is_empty(&self) -> bool {
        self.stages.is_empty() && self.fallback_pairs.is_empty()
    }

    pub fn used_fallback(&self) -> bool {
        !self.fallback_pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub graph: EdgeLabelledGraph,
    pub trace: CompletionTrace,
}

fn check_graph(ctx: &MagicContext, g: &EdgeLabelledGraph) -> Result<()> {
    g.edges().try_for_each(|(_, _, l)| ctx.check_label(l))
}

/// Runs the magic completion. Existing labels are never changed, and the
/// result is always complete.
pub fn magic_complete(ctx: &MagicContext, g: &EdgeLabelledGraph) -> Result<Completion> {
    check_graph(ctx, g)?;
    let n = g.n();
    let mut current = g.clone();
    let mut trace = CompletionTrace::default();
    let mut missing: Vec<(usize, usize)> = g.non_edges().collect();

    for (i, &target) in ctx.permutation().iter().enumerate() {
        if missing.is_empty() {
            break;
        }
        // Decide every fill against the graph as it stood before this stage.
        let (filled, rest): (Vec<_>, Vec<_>) = missing.iter().partition(|&&(x, y)| {
            (0..n).any(|z| {
                let (a, b) = (current.raw(x, z), current.raw(y, z));
                a != 0 && b != 0 && ctx.op(a, b) == target
            })
        });
        for &(x, y) in &filled {
            current.put(x, y, target);
        }
        if !filled.is_empty() {
            trace.stages.push(StageFill { stage: i + 1, distance: target, pairs: filled });
        }
        missing = rest;
    }

    for &(x, y) in &missing {
        current.put(x, y, ctx.m());
    }
    trace.fallback_pairs = missing;
    Ok(Completion { graph: current, trace })
}

fn check_cycle(ctx: &MagicContext, c: &LabelledCycle) -> Result<()> {
    c.labels().iter().try_for_each(|&l| ctx.check_label(l))
}

/// One step: the adjacent pair at `position`, `position + 1` (cyclically)
/// is replaced by `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepMove {
    pub position: usize,
    pub pair: (u32, u32),
    pub value: u32,
    pub kind: ForkKind,
    pub result: LabelledCycle,
}

/// Every step the completion could take on `c`, one per first-stage fork.
pub fn step_moves(ctx: &MagicContext, c: &LabelledCycle) -> Result<Vec<StepMove>> {
    check_cycle(ctx, c)?;
    let labels = c.labels();
    let k = labels.len();
    if k <= 3 {
        return Ok(Vec::new());
    }
    let values: Vec<u32> = (0..k).map(|j| ctx.op(labels[j], labels[(j + 1) % k])).collect();
    let first = values.iter().map(|&v| ctx.stage_of(v)).min().expect("nonempty");
    let moves = (0..k)
        .filter(|&j| ctx.stage_of(values[j]) == first)
        .map(|j| {
            let (a, b) = (labels[j], labels[(j + 1) % k]);
            let mut next: Vec<u32> = (2..k).map(|s| labels[(j + s) % k]).collect();
            next.push(values[j]);
            StepMove {
                position: j,
                pair: (a, b),
                value: values[j],
                kind: ctx.fork_kind(a, b).expect("checked labels"),
                result: LabelledCycle::from_vec_unchecked(next),
            }
        })
        .collect();
    Ok(moves)
}

/// Canonical cycles reachable from `c` by one step, sorted and deduplicated.
pub fn steps(ctx: &MagicContext, c: &LabelledCycle) -> Result<Vec<LabelledCycle>> {
    Ok(canonical_set(step_moves(ctx, c)?.into_iter().map(|m| m.result)))
}

/// One inverse step: the edge at `position` (labelled `expanded`) is
/// replaced by the fork `q, r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseStepMove {
    pub position: usize,
    pub expanded: u32,
    pub fork: (u32, u32),
    pub result: LabelledCycle,
}

/// Every way to expand one edge of `c` into a fork such that a step on the
/// result can give `c` back. Results longer than `max_edges` are dropped.
pub fn inverse_step_moves(ctx: &MagicContext, c: &LabelledCycle, max_edges: usize) -> Result<Vec<InverseStepMove>> {
    check_cycle(ctx, c)?;
    let labels = c.labels();
    let k = labels.len();
    let delta = ctx.delta();
    let mut moves = Vec::new();
    if k + 1 > max_edges {
        return Ok(moves);
    }
    for (position, &p) in labels.iter().enumerate() {
        for q in 1..=delta {
            for r in 1..=delta {
                if ctx.op(q, r) != p {
                    continue;
                }
                let mut next = Vec::with_capacity(k + 1);
                next.extend_from_slice(&labels[..position]);
                next.extend([q, r]);
                next.extend_from_slice(&labels[position + 1..]);
                if first_stage(ctx, &next) == ctx.stage_of(p) {
                    moves.push(InverseStepMove {
                        position,
                        expanded: p,
                        fork: (q, r),
                        result: LabelledCycle::from_vec_unchecked(next),
                    });
                }
            }
        }
    }
    Ok(moves)
}

pub fn inverse_steps(ctx: &MagicContext, c: &LabelledCycle, max_edges: usize) -> Result<Vec<LabelledCycle>> {
    Ok(canonical_set(inverse_step_moves(ctx, c, max_edges)?.into_iter().map(|m| m.result)))
}

fn first_stage(ctx: &MagicContext, labels: &[u32]) -> usize {
    let k = labels.len();
    (0..k).map(|j| ctx.stage_of(ctx.op(labels[j], labels[(j + 1) % k]))).min().unwrap_or(usize::MAX)
}

/// True iff two neighbouring edges `a, b` have `a ⊕ b ≠ M`.
pub fn has_tension(ctx: &MagicContext, c: &LabelledCycle) -> Result<bool> {
    check_cycle(ctx, c)?;
    let labels = c.labels();
    let k = labels.len();
    Ok((0..k).any(|j| ctx.op(labels[j], labels[(j + 1) % k]) != ctx.m()))
}

fn canonical_set(cycles: impl Iterator<Item = LabelledCycle>) -> Vec<LabelledCycle> {
    let mut out: Vec<LabelledCycle> = cycles.map(|c| c.canonical()).collect();
    out.sort();
    out.dedup();
    out
}
