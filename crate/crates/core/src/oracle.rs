//! Ground truth by exhaustive labelling, and the sweep that checks the
//! forbidden-cycle description and the magic completion against it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::magic_complete;
use crate::error::{Error, Result};
use crate::families::WitnessDetector;
use crate::graph::{is_member_with, EdgeLabelledGraph, GraphFile, TriangleTable};
use crate::magic::{MagicContext, TimeRule};
use crate::params::ParameterSequence;

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Largest graph the sweep enumerates.
pub const MAX_SWEEP_VERTICES: usize = 7;

/// Searches every labelling of the non-edges of `g` for a member of the
/// class. Returns one completion if any exists.
///
/// The search backtracks as soon as a triangle with all three sides fixed is
/// forbidden; such a triangle stays forbidden under any extension, so no
/// completion is skipped.
pub fn has_completion_bruteforce(p: &ParameterSequence, g: &EdgeLabelledGraph, budget: u128) -> Result<Option<EdgeLabelledGraph>> {
    let table = TriangleTable::new(p);
    complete_with(&table, g, budget)
}

pub(crate) fn complete_with(table: &TriangleTable, g: &EdgeLabelledGraph, budget: u128) -> Result<Option<EdgeLabelledGraph>> {
    let delta = table.delta();
    let holes: Vec<(usize, usize)> = g.non_edges().collect();
    let required = (delta as u128).checked_pow(holes.len() as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    if g.edges().any(|(_, _, l)| l > delta) {
        return Ok(None);
    }
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let (a, b, c) = (g.raw(u, v), g.raw(v, w), g.raw(u, w));
                if a != 0 && b != 0 && c != 0 && !table.allowed(a, b, c) {
                    return Ok(None);
                }
            }
        }
    }
    let mut work = g.clone();
    Ok(assign(table, &mut work, &holes, 0).then_some(work))
}

fn assign(table: &TriangleTable, g: &mut EdgeLabelledGraph, holes: &[(usize, usize)], i: usize) -> bool {
    let Some(&(u, v)) = holes.get(i) else {
        return true;
    };
    let n = g.n();
    for label in 1..=table.delta() {
        let fits = (0..n).all(|w| {
            let (a, b) = (g.raw(u, w), g.raw(v, w));
            w == u || w == v || a == 0 || b == 0 || table.allowed(label, a, b)
        });
        if fits {
            g.put(u, v, label);
            if assign(table, g, holes, i + 1) {
                return true;
            }
        }
    }
    g.put(u, v, 0);
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepMode {
    /// Every labelling of every graph on `1..=n_max` vertices.
    Exhaustive,
    /// `count` uniformly random labellings of graphs on exactly `n_max` vertices.
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: u128,
    /// Check one representative per isomorphism class (exhaustive mode only).
    pub iso_reduction: bool,
    /// Magic distance for the completion; the smallest one when `None`.
    pub magic: Option<u32>,
    pub rule: TimeRule,
    pub threads: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, iso_reduction: true, magic: None, rule: TimeRule::Standard, threads: None }
    }
}

/// A graph on which two of the three verdicts disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub graph: GraphFile,
    /// Brute force found a completion.
    pub completable: bool,
    /// Some member of `F` maps homomorphically into the graph.
    pub witness_found: bool,
    /// The magic completion lies in the class.
    pub magic_member: bool,
    /// The magic completion needed the `M` fallback.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub params: ParameterSequence,
    pub n_max: usize,
    #[serde(flatten)]
    pub mode: SweepMode,
    pub magic_distance: u32,
    pub time_rule: TimeRule,
    /// Labelled graphs covered (each isomorphism class counted with its size).
    pub graphs_checked: u64,
    /// Graphs actually evaluated.
    pub classes_checked: u64,
    pub completable: u64,
    /// Completable but a forbidden witness was found, or vice versa.
    pub mismatches: Vec<Mismatch>,
    /// Completable disagrees with membership of the magic completion.
    pub magic_disagreements: Vec<Mismatch>,
    /// Graphs whose magic completion used the fallback.
    pub fallback_events: u64,
    /// Fallback graphs where the completion verdict disagreed with brute force.
    pub fallback_disagreements: u64,
    /// The first few fallback graphs, for inspection.
    pub fallback_examples: Vec<GraphFile>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.magic_disagreements.is_empty()
    }
}

const FALLBACK_EXAMPLES: usize = 8;

#[derive(Debug, Default)]
struct Tally {
    graphs: u64,
    classes: u64,
    completable: u64,
    // (sort key, mismatch)
    mismatches: Vec<(u64, Mismatch)>,
    magic: Vec<(u64, Mismatch)>,
    fallback_events: u64,
    fallback_disagreements: u64,
    fallback_examples: Vec<(u64, GraphFile)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.graphs += other.graphs;
        self.classes += other.classes;
        self.completable += other.completable;
        self.mismatches.extend(other.mismatches);
        self.magic.extend(other.magic);
        self.fallback_events += other.fallback_events;
        self.fallback_disagreements += other.fallback_disagreements;
        self.fallback_examples.extend(other.fallback_examples);
        self.fallback_examples.sort_by_key(|(k, _)| *k);
        self.fallback_examples.truncate(FALLBACK_EXAMPLES);
        self
    }
}

struct Checker {
    table: TriangleTable,
    detector: WitnessDetector,
    ctx: MagicContext,
    budget: u128,
}

impl Checker {
    fn check(&self, g: &EdgeLabelledGraph, weight: u64, key: u64, tally: &mut Tally) -> Result<()> {
        let completable = complete_with(&self.table, g, self.budget)?.is_some();
        let witness_found = self.detector.has_witness(g);
        let completion = magic_complete(&self.ctx, g)?;
        let magic_member = is_member_with(&self.table, &completion.graph);
        let fallback = completion.trace.used_fallback();

        tally.graphs += weight;
        tally.classes += 1;
        tally.completable += u64::from(completable);
        let record = || Mismatch { graph: GraphFile::from(g), completable, witness_found, magic_member, fallback };
        if completable == witness_found {
            tally.mismatches.push((key, record()));
        }
        if completable != magic_member {
            tally.magic.push((key, record()));
        }
        if fallback {
            tally.fallback_events += 1;
            tally.fallback_disagreements += u64::from(completable != magic_member);
            if tally.fallback_examples.len() < FALLBACK_EXAMPLES {
                tally.fallback_examples.push((key, GraphFile::from(g)));
            }
        }
        Ok(())
    }
}

/// Compares brute-force completability against the absence of forbidden
/// homomorphic images and against the magic completion, over the graphs
/// selected by `mode`.
pub fn verify_equivalence(p: &ParameterSequence, n_max: usize, mode: SweepMode, options: VerifyOptions) -> Result<EquivalenceReport> {
    p.require_admissible()?;
    if n_max > MAX_SWEEP_VERTICES {
        return Err(Error::TooManyVertices { n: n_max, max: MAX_SWEEP_VERTICES });
    }
    let ctx = match options.magic {
        Some(m) => MagicContext::with_magic(*p, m)?,
        None => MagicContext::new(*p)?,
    }
    .with_rule(options.rule);
    let checker = Checker { table: TriangleTable::new(p), detector: WitnessDetector::new(*p)?, ctx, budget: options.budget };

    let run = || match mode {
        SweepMode::Exhaustive => (1..=n_max)
            .map(|n| sweep_exhaustive(&checker, n, options.iso_reduction))
            .try_fold(Tally::default(), |acc, t| t.map(|t| acc.merge(t))),
        SweepMode::Sample { count, seed } => sweep_sampled(&checker, n_max, count, seed),
    };
    let tally = match options.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }?;

    let unkey = |mut v: Vec<(u64, Mismatch)>| {
        v.sort_by_key(|(k, _)| *k);
        v.into_iter().map(|(_, m)| m).collect()
    };
    Ok(EquivalenceReport {
        params: *p,
        n_max,
        mode,
        magic_distance: checker.ctx.m(),
        time_rule: checker.ctx.rule(),
        graphs_checked: tally.graphs,
        classes_checked: tally.classes,
        completable: tally.completable,
        mismatches: unkey(tally.mismatches),
        magic_disagreements: unkey(tally.magic),
        fallback_events: tally.fallback_events,
        fallback_disagreements: tally.fallback_disagreements,
        fallback_examples: tally.fallback_examples.into_iter().map(|(_, g)| g).collect(),
    })
}

/// Vertex pairs `(u, v)`, `u < v`, in lexicographic order.
fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Labelled graphs on `n` vertices indexed by a base-`δ+1` code; digit `i`
/// (most significant first) is the label of pair `i`, `0` meaning no edge.
struct CodeSpace {
    n: usize,
    base: u64,
    pairs: Vec<(usize, usize)>,
    // index of pair (u, v) in `pairs`, for both orders
    pair_index: Vec<usize>,
    perms: Vec<Vec<usize>>,
}

impl CodeSpace {
    fn new(n: usize, delta: u32) -> Self {
        let pairs = pair_list(n);
        let mut pair_index = vec![usize::MAX; n * n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            pair_index[u * n + v] = i;
            pair_index[v * n + u] = i;
        }
        Self { n, base: u64::from(delta) + 1, pairs, pair_index, perms: permutations(n) }
    }

    fn total(&self) -> u64 {
        self.base.pow(self.pairs.len() as u32)
    }

    fn digits(&self, mut code: u64, out: &mut [u8]) {
        for slot in out.iter_mut().rev() {
            *slot = (code % self.base) as u8;
            code /= self.base;
        }
    }

    fn graph(&self, digits: &[u8]) -> EdgeLabelledGraph {
        let mut g = EdgeLabelledGraph::new(self.n);
        for (&(u, v), &d) in self.pairs.iter().zip(digits) {
            if d != 0 {
                g.put(u, v, u32::from(d));
            }
        }
        g
    }

    /// `None` if some relabelling gives a smaller code; otherwise the number
    /// of vertex permutations fixing the code.
    fn automorphisms_if_canonical(&self, digits: &[u8], scratch: &mut [u8]) -> Option<u64> {
        let mut automorphisms = 0u64;
        for perm in &self.perms {
            for (i, &(u, v)) in self.pairs.iter().enumerate() {
                scratch[self.pair_index[perm[u] * self.n + perm[v]]] = digits[i];
            }
            match (*scratch).cmp(digits) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => automorphisms += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        Some(automorphisms)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    fn rec(k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == current.len() {
            out.push(current.clone());
            return;
        }
        for i in k..current.len() {
            current.swap(k, i);
            rec(k + 1, current, out);
            current.swap(k, i);
        }
    }
    rec(0, &mut current, &mut out);
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

const CHUNK: u64 = 4096;

fn sweep_exhaustive(checker: &Checker, n: usize, iso_reduction: bool) -> Result<Tally> {
    let space = CodeSpace::new(n, checker.ctx.delta());
    let total = space.total();
    let chunks = total.div_ceil(CHUNK);
    let fact = factorial(n);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut tally = Tally::default();
            let mut digits = vec![0u8; space.pairs.len()];
            let mut scratch = vec![0u8; space.pairs.len()];
            for code in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
                space.digits(code, &mut digits);
                let weight = if iso_reduction {
                    match space.automorphisms_if_canonical(&digits, &mut scratch) {
                        Some(aut) => fact / aut,
                        None => continue,
                    }
                } else {
                    1
                };
                let key = ((n as u64) << 56) | code;
                checker.check(&space.graph(&digits), weight, key, &mut tally)?;
            }
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

fn sweep_sampled(checker: &Checker, n: usize, count: u64, seed: u64) -> Result<Tally> {
    let space = CodeSpace::new(n, checker.ctx.delta());
    let total = space.total();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codes: Vec<u64> = (0..count).map(|_| rng.gen_range(0..total)).collect();
    codes
        .par_chunks(CHUNK as usize)
        .enumerate()
        .map(|(chunk, codes)| {
            let mut tally = Tally::default();
            let mut digits = vec![0u8; space.pairs.len()];
            for (i, &code) in codes.iter().enumerate() {
                space.digits(code, &mut digits);
                let key = chunk as u64 * CHUNK + i as u64;
                checker.check(&space.graph(&digits), 1, key, &mut tally)?;
            }
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}
