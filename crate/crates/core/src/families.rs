//! The forbidden cycle families, the family `F` selected by the parameters,
//! its finite enumeration, and homomorphic-image search in graphs.
//!
//! Every family inequality depends only on the multiset of labels, so
//! membership is decided on the labels sorted in descending order: the best
//! choice of distinguished edges is always the largest labels.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{canonical_labels, ClosedWalk, EdgeLabelledGraph, LabelledCycle};
use crate::params::{AdmissibilityCase, ParameterSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyTag {
    NonMetric,
    CCycle,
    C0Cycle,
    C1Cycle,
    K1Cycle,
    K2Cycle,
    /// The cycle `(5,5,5,5,5)` for `δ = 5`.
    Special5,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NonMetric => "non-metric",
            Self::CCycle => "C",
            Self::C0Cycle => "C0",
            Self::C1Cycle => "C1",
            Self::K1Cycle => "K1",
            Self::K2Cycle => "K2",
            Self::Special5 => "(5,5,5,5,5)",
        };
        f.write_str(s)
    }
}

/// A decomposition of a cycle's labels into distinguished edges `d` and
/// filler edges `x` that satisfies the inequality of `tag`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FamilyWitness {
    pub tag: FamilyTag,
    pub n: u32,
    /// Descending.
    pub d_edges: Vec<u32>,
    /// Descending.
    pub x_edges: Vec<u32>,
    pub cycle: LabelledCycle,
}

impl FamilyWitness {
    pub fn k(&self) -> usize {
        self.x_edges.len()
    }

    pub fn d_sum(&self) -> u32 {
        self.d_edges.iter().sum()
    }

    pub fn x_sum(&self) -> u32 {
        self.x_edges.iter().sum()
    }
}

/// Which union of families forms `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyBranch {
    /// `|C0 - C1| = 1`: C-cycles, K1, K2, non-metric.
    CCycles,
    /// `|C0 - C1| > 1`: C0-, C1-cycles, K1, K2, non-metric.
    SplitParity,
    /// As `SplitParity`, plus `(5,5,5,5,5)` (δ = 5, Case IIB).
    SplitParityWithPentagon,
}

impl FamilyBranch {
    pub fn of(p: &ParameterSequence) -> Self {
        if p.c_prime() == p.c() + 1 {
            Self::CCycles
        } else if p.delta() == 5 && p.case() == AdmissibilityCase::CaseIIB {
            Self::SplitParityWithPentagon
        } else {
            Self::SplitParity
        }
    }

    pub fn tags(self) -> &'static [FamilyTag] {
        use FamilyTag::*;
        match self {
            Self::CCycles => &[NonMetric, CCycle, K1Cycle, K2Cycle],
            Self::SplitParity => &[NonMetric, C0Cycle, C1Cycle, K1Cycle, K2Cycle],
            Self::SplitParityWithPentagon => &[NonMetric, C0Cycle, C1Cycle, K1Cycle, K2Cycle, Special5],
        }
    }
}

/// Largest edge count of any member of each family; `0` means the family
/// has no member with at least three edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyBounds {
    pub non_metric: usize,
    pub c: usize,
    pub c0: usize,
    pub c1: usize,
    pub k1: usize,
    pub k2: usize,
    pub special5: usize,
}

impl FamilyBounds {
    pub fn of(p: &ParameterSequence) -> Self {
        let delta = p.delta() as i64;
        let at_least_3 = |edges: i64| if edges >= 3 { edges as usize } else { 0 };
        // (2n+1)δ > n(C-1) + k with C-1 ≥ 2δ+1 forces n + k < δ
        let c = at_least_3(2 * delta - 1);
        // 3δ > C_x - 1 + k
        let split = |cx: u32| {
            let slack = 3 * delta - i64::from(cx);
            if slack >= 0 {
                at_least_3(3 + slack)
            } else {
                0
            }
        };
        // (2n+2)δ > 2K2 + n(2δ+1) + k forces n + k < 2δ - 2K2
        let k2_room = 2 * delta - 2 * i64::from(p.k2());
        let k2 = if k2_room > 0 { at_least_3(2 * (k2_room - 1) + 2) } else { 0 };
        Self {
            non_metric: at_least_3(delta),
            c,
            c0: split(p.c0()),
            c1: split(p.c1()),
            k1: at_least_3(2 * i64::from(p.k1()) - 1),
            k2,
            special5: if p.delta() == 5 { 5 } else { 0 },
        }
    }

    pub fn for_tag(&self, tag: FamilyTag) -> usize {
        match tag {
            FamilyTag::NonMetric => self.non_metric,
            FamilyTag::CCycle => self.c,
            FamilyTag::C0Cycle => self.c0,
            FamilyTag::C1Cycle => self.c1,
            FamilyTag::K1Cycle => self.k1,
            FamilyTag::K2Cycle => self.k2,
            FamilyTag::Special5 => self.special5,
        }
    }
}

/// Does a single family contain a cycle with these labels?
/// `desc` must be sorted descending and have at least three entries.
fn family_contains(p: &ParameterSequence, tag: FamilyTag, desc: &[u32]) -> bool {
    let k = desc.len();
    let perimeter: i64 = desc.iter().map(|&l| i64::from(l)).sum();
    // 2·(sum of the top s labels) - perimeter = Σd - Σx for the best split
    let excess = |s: usize| 2 * desc[..s].iter().map(|&l| i64::from(l)).sum::<i64>() - perimeter;
    let c_minus_1 = i64::from(p.c()) - 1;
    let odd = perimeter % 2 == 1;
    match tag {
        FamilyTag::NonMetric => excess(1) > 0,
        FamilyTag::CCycle => (1..).map(|n| (n, 2 * n + 1)).take_while(|&(_, s)| s <= k).any(|(n, s)| excess(s) > n as i64 * c_minus_1),
        FamilyTag::C0Cycle => !odd && excess(3) > i64::from(p.c0()) - 1,
        FamilyTag::C1Cycle => odd && excess(3) > i64::from(p.c1()) - 1,
        FamilyTag::K1Cycle => odd && excess(1) <= 0 && perimeter < 2 * i64::from(p.k1()),
        FamilyTag::K2Cycle => {
            odd && (0..)
                .map(|n| (n, 2 * n + 2))
                .take_while(|&(_, s)| s <= k)
                .any(|(n, s)| excess(s) > 2 * i64::from(p.k2()) + n as i64 * c_minus_1)
        }
        FamilyTag::Special5 => p.delta() == 5 && desc == [5, 5, 5, 5, 5],
    }
}

/// Every witnessing decomposition of `c`, over all family tags (not only
/// the ones in `F`). C-, C0- and C1-decompositions with `n = 0` are the
/// non-metric ones and are reported under [`FamilyTag::NonMetric`].
pub fn classify_cycle(p: &ParameterSequence, c: &LabelledCycle) -> Vec<FamilyWitness> {
    let desc = c.sorted_desc();
    let k = desc.len();
    let perimeter = c.perimeter() as i64;
    let odd = perimeter % 2 == 1;
    let c_minus_1 = i64::from(p.c()) - 1;
    let canonical = c.canonical();
    let mut out = Vec::new();
    let mut push = |tag, n, d: Vec<u32>, x: Vec<u32>| {
        out.push(FamilyWitness { tag, n, d_edges: d, x_edges: x, cycle: canonical.clone() })
    };

    let split_excess = |d: &[u32]| 2 * d.iter().map(|&l| i64::from(l)).sum::<i64>() - perimeter;

    for (d, x) in sub_multisets(&desc, 1) {
        if split_excess(&d) > 0 {
            push(FamilyTag::NonMetric, 0, d, x);
        }
    }
    for n in 1..=(k.saturating_sub(1) / 2) {
        for (d, x) in sub_multisets(&desc, 2 * n + 1) {
            if split_excess(&d) > n as i64 * c_minus_1 {
                push(FamilyTag::CCycle, n as u32, d, x);
            }
        }
    }
    if k >= 3 {
        let (tag, cx) = if odd { (FamilyTag::C1Cycle, p.c1()) } else { (FamilyTag::C0Cycle, p.c0()) };
        for (d, x) in sub_multisets(&desc, 3) {
            if split_excess(&d) > i64::from(cx) - 1 {
                push(tag, 1, d, x);
            }
        }
    }
    if family_contains(p, FamilyTag::K1Cycle, &desc) {
        push(FamilyTag::K1Cycle, 0, Vec::new(), desc.clone());
    }
    if odd {
        for n in 0..=(k.saturating_sub(2) / 2) {
            for (d, x) in sub_multisets(&desc, 2 * n + 2) {
                if split_excess(&d) > 2 * i64::from(p.k2()) + n as i64 * c_minus_1 {
                    push(FamilyTag::K2Cycle, n as u32, d, x);
                }
            }
        }
    }
    if family_contains(p, FamilyTag::Special5, &desc) {
        push(FamilyTag::Special5, 2, desc.clone(), Vec::new());
    }
    out
}

/// All ways to pick `size` labels out of the multiset `desc` (sorted
/// descending), as `(picked, rest)`, both descending. Distinct multisets only.
fn sub_multisets(desc: &[u32], size: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &l in desc {
        match groups.last_mut() {
            Some((v, c)) if *v == l => *c += 1,
            _ => groups.push((l, 1)),
        }
    }
    let mut out = Vec::new();
    let mut take = vec![0usize; groups.len()];
    fn rec(groups: &[(u32, usize)], take: &mut [usize], i: usize, left: usize, out: &mut Vec<(Vec<u32>, Vec<u32>)>) {
        if i == groups.len() {
            if left == 0 {
                let mut d = Vec::new();
                let mut x = Vec::new();
                for (&(v, c), &t) in groups.iter().zip(take.iter()) {
                    d.extend(std::iter::repeat_n(v, t));
                    x.extend(std::iter::repeat_n(v, c - t));
                }
                out.push((d, x));
            }
            return;
        }
        for t in (0..=groups[i].1.min(left)).rev() {
            take[i] = t;
            rec(groups, take, i + 1, left - t, out);
        }
        take[i] = 0;
    }
    if size <= desc.len() {
        rec(&groups, &mut take, 0, size, &mut out);
    }
    out
}

/// The forbidden family `F` for an admissible parameter sequence.
#[derive(Debug, Clone)]
pub struct ForbiddenFamily {
    params: ParameterSequence,
    branch: FamilyBranch,
    bounds: FamilyBounds,
}

impl ForbiddenFamily {
    pub fn new(params: ParameterSequence) -> Result<Self> {
        params.require_admissible()?;
        Ok(Self { params, branch: FamilyBranch::of(&params), bounds: FamilyBounds::of(&params) })
    }

    pub fn params(&self) -> &ParameterSequence {
        &self.params
    }

    pub fn branch(&self) -> FamilyBranch {
        self.branch
    }

    pub fn bounds(&self) -> FamilyBounds {
        self.bounds
    }

    /// `B(p)`: no member of `F` has more edges than this.
    pub fn length_bound(&self) -> usize {
        self.branch.tags().iter().map(|&t| self.bounds.for_tag(t)).max().unwrap_or(0)
    }

    /// Membership of a label sequence (read cyclically; order is irrelevant).
    pub fn contains_labels(&self, labels: &[u32]) -> bool {
        if labels.len() < 3 || labels.iter().any(|&l| l == 0 || l > self.params.delta()) {
            return false;
        }
        let mut desc = labels.to_vec();
        desc.sort_unstable_by(|a, b| b.cmp(a));
        self.contains_desc(&desc)
    }

    fn contains_desc(&self, desc: &[u32]) -> bool {
        self.branch.tags().iter().any(|&t| family_contains(&self.params, t, desc))
    }

    pub fn contains(&self, c: &LabelledCycle) -> bool {
        self.contains_labels(c.labels())
    }

    /// Witnesses of `c` restricted to the families that make up `F`.
    pub fn witnesses(&self, c: &LabelledCycle) -> Vec<FamilyWitness> {
        let tags = self.branch.tags();
        classify_cycle(&self.params, c).into_iter().filter(|w| tags.contains(&w.tag)).collect()
    }

    /// Every canonical member of `F`, sorted by length and then labels.
    pub fn enumerate(&self) -> Vec<LabelledCycle> {
        let delta = self.params.delta();
        let mut out = Vec::new();
        for len in 3..=self.length_bound() {
            let mut members = Vec::new();
            for_each_multiset_desc(delta, len, &mut |desc| {
                if self.contains_desc(desc) {
                    arrangements(desc, &mut members);
                }
            });
            members.sort();
            out.extend(members.into_iter().map(LabelledCycle::from_vec_unchecked));
        }
        out
    }

    /// Canonical members grouped by their label multiset (descending).
    pub fn member_multisets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for len in 3..=self.length_bound() {
            for_each_multiset_desc(self.params.delta(), len, &mut |desc| {
                if self.contains_desc(desc) {
                    out.push(desc.to_vec());
                }
            });
        }
        out
    }
}

pub fn in_f(p: &ParameterSequence, c: &LabelledCycle) -> Result<bool> {
    Ok(ForbiddenFamily::new(*p)?.contains(c))
}

pub fn enumerate_f(p: &ParameterSequence) -> Result<Vec<LabelledCycle>> {
    Ok(ForbiddenFamily::new(*p)?.enumerate())
}

/// Calls `f` with every multiset of `len` labels from `1..=delta`, as a
/// descending sequence.
fn for_each_multiset_desc(delta: u32, len: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, max: u32, len: usize, f: &mut dyn FnMut(&[u32])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for l in (1..=max).rev() {
            buf.push(l);
            rec(buf, l, len, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(len), delta, len, f);
}

/// Pushes every canonical cyclic arrangement of the multiset `desc`.
fn arrangements(desc: &[u32], out: &mut Vec<Vec<u32>>) {
    // A canonical sequence starts with the smallest label; permute the rest.
    let mut rest: Vec<u32> = desc.to_vec();
    rest.sort_unstable();
    let first = rest.remove(0);
    loop {
        let mut seq = Vec::with_capacity(desc.len());
        seq.push(first);
        seq.extend_from_slice(&rest);
        if canonical_labels(&seq) == seq {
            out.push(seq);
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A closed walk in a graph whose label sequence is a member of `F`.
#[derive(Debug, Clone, Serialize)]
pub struct ForbiddenWalk {
    pub walk: ClosedWalk,
    pub witness: FamilyWitness,
}

/// Label-sequence trie; node 0 is the root.
#[derive(Debug, Clone)]
struct Trie {
    width: usize,
    children: Vec<u32>,
    terminal: Vec<bool>,
}

impl Trie {
    fn new(delta: u32) -> Self {
        let width = delta as usize + 1;
        Self { width, children: vec![0; width], terminal: vec![false] }
    }

    fn insert(&mut self, seq: &[u32]) {
        let mut node = 0usize;
        for &l in seq {
            let slot = node * self.width + l as usize;
            node = match self.children[slot] {
                0 => {
                    let fresh = self.terminal.len();
                    self.terminal.push(false);
                    self.children.extend(std::iter::repeat_n(0, self.width));
                    self.children[slot] = fresh as u32;
                    fresh
                }
                c => c as usize,
            };
        }
        self.terminal[node] = true;
    }

    #[inline]
    fn child(&self, node: usize, label: u32) -> usize {
        self.children[node * self.width + label as usize] as usize
    }

    fn len(&self) -> usize {
        self.terminal.len()
    }
}

/// Precomputed search structure for homomorphic images of members of `F`.
#[derive(Debug, Clone)]
pub struct WitnessDetector {
    family: ForbiddenFamily,
    // one representative per member; existence only
    canonical: Trie,
    // every rotation and reflection, one trie per length (index = length)
    oriented: BTreeMap<usize, Trie>,
}

impl WitnessDetector {
    pub fn new(params: ParameterSequence) -> Result<Self> {
        let family = ForbiddenFamily::new(params)?;
        let delta = params.delta();
        let mut canonical = Trie::new(delta);
        let mut oriented: BTreeMap<usize, Trie> = BTreeMap::new();
        for member in family.enumerate() {
            let labels = member.labels();
            canonical.insert(labels);
            let k = labels.len();
            let trie = oriented.entry(k).or_insert_with(|| Trie::new(delta));
            let reversed: Vec<u32> = labels.iter().rev().copied().collect();
            for seq in [labels, &reversed[..]] {
                for r in 0..k {
                    let rotated: Vec<u32> = (0..k).map(|i| seq[(r + i) % k]).collect();
                    trie.insert(&rotated);
                }
            }
        }
        Ok(Self { family, canonical, oriented })
    }

    pub fn family(&self) -> &ForbiddenFamily {
        &self.family
    }

    pub fn trie_size(&self) -> usize {
        self.canonical.len()
    }

    /// Does some member of `F` map homomorphically into `g`? Graphs with
    /// more than 32 vertices are not supported.
    pub fn has_witness(&self, g: &EdgeLabelledGraph) -> bool {
        let n = g.n();
        assert!(n <= 32, "witness detection supports at most 32 vertices");
        let width = self.canonical.width;
        // adj[v * width + l] = neighbours of v along label l
        let mut adj = vec![0u32; n * width];
        for (u, v, l) in g.edges() {
            if l as usize >= width {
                continue;
            }
            adj[u * width + l as usize] |= 1 << v;
            adj[v * width + l as usize] |= 1 << u;
        }
        let mut reach = vec![0u32; n];
        for (s, r) in reach.iter_mut().enumerate() {
            *r = 1 << s;
        }
        self.search(0, &reach, &adj, width)
    }

    fn search(&self, node: usize, reach: &[u32], adj: &[u32], width: usize) -> bool {
        let trie = &self.canonical;
        if trie.terminal[node] && reach.iter().enumerate().any(|(s, &r)| r & (1 << s) != 0) {
            return true;
        }
        let mut next = vec![0u32; reach.len()];
        for label in 1..width as u32 {
            let child = trie.child(node, label);
            if child == 0 {
                continue;
            }
            let mut alive = false;
            for (slot, &r) in next.iter_mut().zip(reach) {
                let mut acc = 0u32;
                let mut bits = r;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    acc |= adj[v * width + label as usize];
                }
                *slot = acc;
                alive |= acc != 0;
            }
            if alive && self.search(child, &next, adj, width) {
                return true;
            }
        }
        false
    }

    /// The first closed walk (by length, then vertex sequence) whose label
    /// sequence lies in `F`.
    pub fn find(&self, g: &EdgeLabelledGraph) -> Option<ForbiddenWalk> {
        let n = g.n();
        for (&len, trie) in &self.oriented {
            for start in 0..n {
                let mut path = vec![start];
                let mut labels = Vec::with_capacity(len);
                if let Some(walk) = walk_dfs(g, trie, 0, len, &mut path, &mut labels) {
                    let cycle = walk.cycle();
                    let witness = self.family.witnesses(&cycle).into_iter().next().expect("member has a witness");
                    return Some(ForbiddenWalk { walk, witness });
                }
            }
        }
        None
    }
}

fn walk_dfs(
    g: &EdgeLabelledGraph,
    trie: &Trie,
    node: usize,
    len: usize,
    path: &mut Vec<usize>,
    labels: &mut Vec<u32>,
) -> Option<ClosedWalk> {
    let last = *path.last().expect("path starts nonempty");
    if path.len() == len {
        let l = g.raw(last, path[0]);
        if l == 0 || l as usize >= trie.width {
            return None;
        }
        let child = trie.child(node, l);
        if child != 0 && trie.terminal[child] {
            let mut full = labels.clone();
            full.push(l);
            return Some(ClosedWalk { vertices: path.clone(), labels: full });
        }
        return None;
    }
    for w in 0..g.n() {
        let l = g.raw(last, w);
        if l == 0 || l as usize >= trie.width {
            continue;
        }
        let child = trie.child(node, l);
        if child == 0 {
            continue;
        }
        path.push(w);
        labels.push(l);
        let found = walk_dfs(g, trie, child, len, path, labels);
        path.pop();
        labels.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn find_forbidden_witness(p: &ParameterSequence, g: &EdgeLabelledGraph) -> Result<Option<ForbiddenWalk>> {
    Ok(WitnessDetector::new(*p)?.find(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t: (i64, i64, i64, i64, i64)) -> ParameterSequence {
        ParameterSequence::admissible(t.0, t.1, t.2, t.3, t.4).unwrap()
    }

    fn cyc(labels: &[u32]) -> LabelledCycle {
        LabelledCycle::new(labels.to_vec()).unwrap()
    }

    fn tags(ws: &[FamilyWitness]) -> Vec<FamilyTag> {
        let mut t: Vec<_> = ws.iter().map(|w| w.tag).collect();
        t.dedup();
        t
    }

    #[test]
    fn classify_examples() {
        let p = params((5, 3, 3, 16, 13));
        let ws = classify_cycle(&p, &cyc(&[1, 1, 1]));
        assert_eq!(tags(&ws), vec![FamilyTag::K1Cycle]);

        let ws = classify_cycle(&p, &cyc(&[5, 5, 5]));
        // C-cycle with n = 1 as well, though F uses the C1 reading here
        assert_eq!(tags(&ws), vec![FamilyTag::CCycle, FamilyTag::C1Cycle]);
        assert!(ws.iter().all(|w| w.n == 1));

        let ws = classify_cycle(&p, &cyc(&[5, 5, 5, 5, 5]));
        assert!(ws.iter().any(|w| w.tag == FamilyTag::Special5));
        assert!(ws.iter().any(|w| w.tag == FamilyTag::CCycle && w.n == 2));

        let ws = classify_cycle(&p, &cyc(&[1, 1, 5]));
        assert!(ws.iter().any(|w| w.tag == FamilyTag::NonMetric && w.d_edges == [5]));
        assert!(classify_cycle(&p, &cyc(&[1, 2, 3])).is_empty());
    }

    #[test]
    fn witnesses_satisfy_their_inequalities() {
        let p = params((5, 3, 3, 16, 13));
        let c = i64::from(p.c());
        for member in enumerate_f(&p).unwrap() {
            for w in classify_cycle(&p, &member) {
                let (d, x) = (i64::from(w.d_sum()), i64::from(w.x_sum()));
                let n = i64::from(w.n);
                let mut all = w.d_edges.clone();
                all.extend(&w.x_edges);
                all.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(all, member.sorted_desc());
                match w.tag {
                    FamilyTag::NonMetric => assert!(d > x),
                    FamilyTag::CCycle => assert!(d > n * (c - 1) + x),
                    FamilyTag::C0Cycle => assert!(d > i64::from(p.c0()) - 1 + x && (d + x) % 2 == 0),
                    FamilyTag::C1Cycle => assert!(d > i64::from(p.c1()) - 1 + x && (d + x) % 2 == 1),
                    FamilyTag::K1Cycle => assert!(x < 2 * i64::from(p.k1()) && x % 2 == 1),
                    FamilyTag::K2Cycle => assert!(d > 2 * i64::from(p.k2()) + n * (c - 1) + x),
                    FamilyTag::Special5 => assert_eq!(member.labels(), [5, 5, 5, 5, 5]),
                }
            }
        }
    }

    #[test]
    fn in_f_examples() {
        let p = params((5, 3, 3, 16, 13));
        assert_eq!(FamilyBranch::of(&p), FamilyBranch::SplitParityWithPentagon);
        assert!(in_f(&p, &cyc(&[5, 5, 5, 5, 5])).unwrap());
        assert!(!in_f(&p, &cyc(&[1, 2, 3])).unwrap());

        let p = params((4, 2, 3, 12, 11));
        assert_eq!(FamilyBranch::of(&p), FamilyBranch::CCycles);
        assert!(in_f(&p, &cyc(&[4, 4, 4])).unwrap());

        let not_admissible = ParameterSequence::new(3, 1, 1, 8, 9).unwrap();
        assert!(in_f(&not_admissible, &cyc(&[1, 1, 1])).is_err());
    }

    #[test]
    fn enumeration_respects_bounds() {
        let p = params((5, 3, 3, 16, 13));
        let fam = ForbiddenFamily::new(p).unwrap();
        let members = fam.enumerate();
        assert!(members.contains(&cyc(&[5, 5, 5, 5, 5])));
        assert!(members.iter().all(|m| m.is_canonical() && fam.contains(m)));
        assert!(members.len() <= members.iter().collect::<std::collections::BTreeSet<_>>().len());
        for m in &members {
            let ws = fam.witnesses(m);
            assert!(!ws.is_empty());
            for w in ws {
                assert!(m.len() <= fam.bounds().for_tag(w.tag), "{m} exceeds {:?} bound", w.tag);
            }
        }
        let bounds = fam.bounds();
        assert_eq!(bounds.non_metric, 5);
        assert_eq!(bounds.k1, 5);
        // K2: n + k < 2δ - 2K2 = 4, so at most 2·3 + 2 edges
        assert_eq!(bounds.k2, 8);
        assert_eq!(fam.length_bound(), 8);
    }

    #[test]
    fn enumeration_matches_brute_force_bracelets() {
        // every canonical sequence of length ≤ B, filtered by membership
        let p = params((4, 1, 3, 14, 11));
        let fam = ForbiddenFamily::new(p).unwrap();
        let mut expected = Vec::new();
        for len in 3..=fam.length_bound() {
            let total = 4u32.pow(len as u32);
            for code in 0..total {
                let seq: Vec<u32> = (0..len).map(|i| (code / 4u32.pow(i as u32)) % 4 + 1).collect();
                if canonical_labels(&seq) == seq && fam.contains_labels(&seq) {
                    expected.push(cyc(&seq));
                }
            }
        }
        expected.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(fam.enumerate(), expected);
    }

    #[test]
    fn witness_search_examples() {
        let p = params((5, 3, 3, 16, 13));
        let det = WitnessDetector::new(p).unwrap();
        let pentagon = EdgeLabelledGraph::cycle(&[5, 5, 5, 5, 5]).unwrap();
        assert!(det.has_witness(&pentagon));
        let found = det.find(&pentagon).unwrap();
        assert_eq!(found.walk.labels, vec![5, 5, 5, 5, 5]);
        assert_eq!(found.walk.vertices, vec![0, 1, 2, 3, 4]);

        let tri = EdgeLabelledGraph::triangle(1, 2, 3);
        assert!(!det.has_witness(&tri));
        assert!(det.find(&tri).is_none());
        assert!(det.find(&EdgeLabelledGraph::new(4)).is_none());

        // a single 1-edge traversed back and forth three times is a K1 image
        let edge = EdgeLabelledGraph::from_edges(2, &[(0, 1, 1)]).unwrap();
        assert!(!det.has_witness(&edge));
        let path = EdgeLabelledGraph::from_edges(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let found = det.find(&path).unwrap();
        assert_eq!(found.witness.tag, FamilyTag::K1Cycle);
    }

    #[test]
    fn sub_multisets_are_distinct() {
        let subs = sub_multisets(&[5, 5, 3, 1], 2);
        let picked: Vec<_> = subs.iter().map(|(d, _)| d.clone()).collect();
        assert_eq!(picked, vec![vec![5, 5], vec![5, 3], vec![5, 1], vec![3, 1]]);
        assert!(subs.iter().all(|(d, x)| d.len() + x.len() == 4));
        assert!(sub_multisets(&[1, 1], 3).is_empty());
    }
}
