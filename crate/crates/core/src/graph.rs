//! δ-edge-labelled graphs, labelled cycles and triangle constraints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ParameterSequence;

/// A finite graph with a symmetric partial labelling of vertex pairs.
/// Label `0` is never stored; it stands for "no edge" internally.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeLabelledGraph {
    n: usize,
    labels: Vec<u32>,
}

impl EdgeLabelledGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self { n, labels: vec![0; n * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut g = Self::new(n);
        for &(u, v, l) in edges {
            g.add_edge(u, v, l)?;
        }
        Ok(g)
    }

    /// Complete graph on three vertices with the given side lengths.
    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        Self::from_edges(3, &[(0, 1, a), (1, 2, b), (2, 0, c)]).expect("valid triangle")
    }

    /// A cycle `0-1-...-(k-1)-0` with the given labels in order.
    pub fn cycle(labels: &[u32]) -> Result<Self> {
        let k = labels.len();
        if k < 3 {
            return Err(Error::CycleTooShort(k));
        }
        let edges: Vec<_> = labels.iter().enumerate().map(|(i, &l)| (i, (i + 1) % k, l)).collect();
        Self::from_edges(k, &edges)
    }

    /// Adds an edge. Re-adding the same label is a no-op; a different label
    /// for an already labelled pair is an error.
    pub fn add_edge(&mut self, u: usize, v: usize, label: u32) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if label == 0 {
            return Err(Error::LabelOutOfRange { label, delta: u32::MAX });
        }
        match self.labels[u * self.n + v] {
            0 => {
                self.put(u, v, label);
                Ok(())
            }
            existing if existing == label => Ok(()),
            existing => Err(Error::ConflictingLabel { u, v, first: existing, second: label }),
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub(crate) fn put(&mut self, u: usize, v: usize, label: u32) {
        self.labels[u * self.n + v] = label;
        self.labels[v * self.n + u] = label;
    }

    /// Raw label of a pair, `0` when unlabelled. No bounds check beyond the slice.
    #[inline]
    pub(crate) fn raw(&self, u: usize, v: usize) -> u32 {
        self.labels[u * self.n + v]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self, u: usize, v: usize) -> Option<u32> {
        if u >= self.n || v >= self.n {
            return None;
        }
        match self.raw(u, v) {
            0 => None,
            l => Some(l),
        }
    }

    /// Labelled pairs `(u, v, label)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.pairs().filter_map(|(u, v)| self.label(u, v).map(|l| (u, v, l)))
    }

    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs().filter(|&(u, v)| self.raw(u, v) == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn is_complete(&self) -> bool {
        self.non_edges().next().is_none()
    }

    pub fn max_label(&self) -> u32 {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Parses the JSON exchange format `{"n": N, "edges": [[u, v, label], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile::from(self)).expect("graph serializes")
    }
}

/// On-disk representation of a graph; vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize, u32)>,
}

impl From<&EdgeLabelledGraph> for GraphFile {
    fn from(g: &EdgeLabelledGraph) -> Self {
        Self { n: g.n(), edges: g.edges().collect() }
    }
}

impl TryFrom<GraphFile> for EdgeLabelledGraph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let mut g = EdgeLabelledGraph::new(file.n);
        for (i, &(u, v, l)) in file.edges.iter().enumerate() {
            g.add_edge(u, v, l)
                .map_err(|e| Error::GraphFormat(format!("edges[{i}] = [{u}, {v}, {l}]: {e}")))?;
        }
        Ok(g)
    }
}

/// A cyclic sequence of at least three labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledCycle {
    labels: Vec<u32>,
}

impl LabelledCycle {
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if labels.len() < 3 {
            return Err(Error::CycleTooShort(labels.len()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l == 0) {
            return Err(Error::LabelOutOfRange { label: bad, delta: u32::MAX });
        }
        Ok(Self { labels })
    }

    pub(crate) fn from_vec_unchecked(labels: Vec<u32>) -> Self {
        debug_assert!(labels.len() >= 3);
        Self { labels }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn perimeter(&self) -> u32 {
        self.labels.iter().sum()
    }

    /// The lexicographically least sequence among all rotations of the
    /// cycle and of its reflection.
    pub fn canonical(&self) -> Self {
        Self { labels: canonical_labels(&self.labels) }
    }

    pub fn is_canonical(&self) -> bool {
        canonical_labels(&self.labels) == self.labels
    }

    /// Labels sorted descending: the view every family inequality works on.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.labels.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

pub(crate) fn canonical_labels(labels: &[u32]) -> Vec<u32> {
    let k = labels.len();
    let mut best: Option<Vec<u32>> = None;
    let reversed: Vec<u32> = labels.iter().rev().copied().collect();
    for seq in [labels, &reversed[..]] {
        for r in 0..k {
            let better = match &best {
                None => true,
                Some(b) => (0..k).map(|i| seq[(r + i) % k]).lt(b.iter().copied()),
            };
            if better {
                best = Some((0..k).map(|i| seq[(r + i) % k]).collect());
            }
        }
    }
    best.unwrap_or_default()
}

impl fmt::Display for LabelledCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for LabelledCycle {
    type Err = Error;

    /// Accepts `5,5,5` or `(5,5,5)`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let labels = body
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::GraphFormat(format!("bad label {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }
}

impl Serialize for LabelledCycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels.serialize(s)
    }
}

/// Ways a triangle can fail to belong to the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    NonMetric,
    K1Low,
    K2High,
    C0High,
    C1High,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleVerdict {
    pub violations: Vec<Violation>,
    pub perimeter: u32,
    pub shortest: u32,
}

impl TriangleVerdict {
    pub fn is_allowed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn triangle_verdict(p: &ParameterSequence, a: u32, b: u32, c: u32) -> Result<TriangleVerdict> {
    for l in [a, b, c] {
        if !(1..=p.delta()).contains(&l) {
            return Err(Error::LabelOutOfRange { label: l, delta: p.delta() });
        }
    }
    Ok(verdict_unchecked(p, a, b, c))
}

fn verdict_unchecked(p: &ParameterSequence, a: u32, b: u32, c: u32) -> TriangleVerdict {
    let perimeter = a + b + c;
    let shortest = a.min(b).min(c);
    let longest = a.max(b).max(c);
    let mut violations = Vec::new();
    if 2 * longest > perimeter {
        violations.push(Violation::NonMetric);
    }
    if perimeter % 2 == 1 {
        if perimeter <= 2 * p.k1() {
            violations.push(Violation::K1Low);
        }
        if perimeter >= 2 * p.k2() + 2 * shortest {
            violations.push(Violation::K2High);
        }
        if perimeter >= p.c1() {
            violations.push(Violation::C1High);
        }
    } else if perimeter >= p.c0() {
        violations.push(Violation::C0High);
    }
    TriangleVerdict { violations, perimeter, shortest }
}

/// `δ³` lookup of allowed triangles, for inner loops.
#[derive(Debug, Clone)]
pub struct TriangleTable {
    delta: u32,
    allowed: Vec<bool>,
}

impl TriangleTable {
    pub fn new(p: &ParameterSequence) -> Self {
        let delta = p.delta();
        let mut allowed = Vec::with_capacity((delta * delta * delta) as usize);
        for a in 1..=delta {
            for b in 1..=delta {
                for c in 1..=delta {
                    allowed.push(verdict_unchecked(p, a, b, c).is_allowed());
                }
            }
        }
        Self { delta, allowed }
    }

    /// Labels must lie in `1..=δ`.
    #[inline]
    pub fn allowed(&self, a: u32, b: u32, c: u32) -> bool {
        let d = self.delta;
        self.allowed[(((a - 1) * d + (b - 1)) * d + (c - 1)) as usize]
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }
}

/// Why a graph is not a member of the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipFailure {
    MissingPair { u: usize, v: usize },
    LabelOutOfRange { u: usize, v: usize, label: u32 },
    Triangle { vertices: [usize; 3], labels: [u32; 3], verdict: TriangleVerdict },
}

/// First reason (in vertex order) why `g` is not in the class, if any.
pub fn first_membership_failure(p: &ParameterSequence, g: &EdgeLabelledGraph) -> Option<MembershipFailure> {
    if let Some((u, v)) = g.non_edges().next() {
        return Some(MembershipFailure::MissingPair { u, v });
    }
    if let Some((u, v, label)) = g.edges().find(|&(_, _, l)| l > p.delta()) {
        return Some(MembershipFailure::LabelOutOfRange { u, v, label });
    }
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let labels = [g.raw(u, v), g.raw(v, w), g.raw(u, w)];
                let verdict = verdict_unchecked(p, labels[0], labels[1], labels[2]);
                if !verdict.is_allowed() {
                    return Some(MembershipFailure::Triangle { vertices: [u, v, w], labels, verdict });
                }
            }
        }
    }
    None
}

/// Complete, labels within `1..=δ`, and no forbidden triangle.
pub fn is_member(p: &ParameterSequence, g: &EdgeLabelledGraph) -> bool {
    first_membership_failure(p, g).is_none()
}

/// Same as [`is_member`] with a precomputed triangle table.
pub fn is_member_with(table: &TriangleTable, g: &EdgeLabelledGraph) -> bool {
    let n = g.n();
    let delta = table.delta();
    for u in 0..n {
        for v in u + 1..n {
            let a = g.raw(u, v);
            if a == 0 || a > delta {
                return false;
            }
            for w in v + 1..n {
                let (b, c) = (g.raw(v, w), g.raw(u, w));
                if b == 0 || c == 0 || b > delta || c > delta || !table.allowed(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// A closed walk `v_0 v_1 ... v_{k-1} v_0` and its label sequence
/// `labels[i] = ℓ(v_i, v_{i+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedWalk {
    pub vertices: Vec<usize>,
    pub labels: Vec<u32>,
}

impl ClosedWalk {
    pub fn cycle(&self) -> LabelledCycle {
        LabelledCycle::from_vec_unchecked(self.labels.clone())
    }
}

/// Streams every closed walk of length `3..=max_len`, ordered by length and
/// then by vertex sequence. Vertices and edges may repeat.
pub fn closed_walks(g: &EdgeLabelledGraph, max_len: usize) -> ClosedWalks<'_> {
    ClosedWalks { g, max_len, len: 3, path: Vec::new(), cursor: vec![0; 4] }
}

pub struct ClosedWalks<'a> {
    g: &'a EdgeLabelledGraph,
    max_len: usize,
    len: usize,
    path: Vec<usize>,
    // cursor[d] = next vertex to try at depth d
    cursor: Vec<usize>,
}

impl Iterator for ClosedWalks<'_> {
    type Item = ClosedWalk;

    fn next(&mut self) -> Option<ClosedWalk> {
        let n = self.g.n();
        loop {
            if self.len > self.max_len || n == 0 {
                return None;
            }
            let depth = self.path.len();
            let from = self.cursor[depth];
            let found = match self.path.last() {
                None => (from < n).then_some(from),
                Some(&prev) => (from..n).find(|&w| self.g.raw(prev, w) != 0),
            };
            let Some(w) = found else {
                if depth == 0 {
                    self.len += 1;
                    self.cursor = vec![0; self.len + 1];
                } else {
                    self.path.pop();
                }
                continue;
            };
            self.cursor[depth] = w + 1;
            self.path.push(w);
            self.cursor[depth + 1] = 0;
            if self.path.len() == self.len {
                let first = self.path[0];
                let walk = (self.g.raw(w, first) != 0).then(|| {
                    let k = self.path.len();
                    let labels = (0..k).map(|i| self.g.raw(self.path[i], self.path[(i + 1) % k])).collect();
                    ClosedWalk { vertices: self.path.clone(), labels }
                });
                self.path.pop();
                if walk.is_some() {
                    return walk;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> ParameterSequence {
        ParameterSequence::admissible(5, 3, 3, 16, 13).unwrap()
    }

    #[test]
    fn triangle_verdict_examples() {
        let p = p5();
        let v = triangle_verdict(&p, 1, 1, 1).unwrap();
        assert_eq!(v.violations, vec![Violation::K1Low]);
        assert_eq!((v.perimeter, v.shortest), (3, 1));
        assert_eq!(triangle_verdict(&p, 5, 5, 5).unwrap().violations, vec![Violation::C1High]);
        assert!(triangle_verdict(&p, 1, 1, 5).unwrap().violations.contains(&Violation::NonMetric));
        assert!(triangle_verdict(&p, 1, 2, 3).unwrap().is_allowed());
        assert!(triangle_verdict(&p, 0, 2, 3).is_err());
        assert!(triangle_verdict(&p, 6, 2, 3).is_err());
    }

    #[test]
    fn triangle_verdict_is_symmetric() {
        let p = p5();
        for a in 1..=5 {
            for b in 1..=5 {
                for c in 1..=5 {
                    let v = triangle_verdict(&p, a, b, c).unwrap();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(triangle_verdict(&p, x, y, z).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let p = p5();
        assert!(is_member(&p, &EdgeLabelledGraph::triangle(1, 2, 3)));
        assert!(!is_member(&p, &EdgeLabelledGraph::triangle(1, 1, 1)));
        let path = EdgeLabelledGraph::from_edges(3, &[(0, 1, 2), (1, 2, 3)]).unwrap();
        assert!(!is_member(&p, &path));
        assert_eq!(
            first_membership_failure(&p, &path),
            Some(MembershipFailure::MissingPair { u: 0, v: 2 })
        );
        let table = TriangleTable::new(&p);
        assert!(is_member_with(&table, &EdgeLabelledGraph::triangle(1, 2, 3)));
        assert!(!is_member_with(&table, &path));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        let mut g = EdgeLabelledGraph::new(3);
        assert_eq!(g.add_edge(0, 0, 1), Err(Error::SelfLoop(0)));
        assert_eq!(g.add_edge(0, 3, 1), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
        g.add_edge(0, 1, 2).unwrap();
        g.add_edge(1, 0, 2).unwrap();
        assert!(matches!(g.add_edge(1, 0, 3), Err(Error::ConflictingLabel { .. })));
        assert!(g.add_edge(1, 2, 0).is_err());
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let g = EdgeLabelledGraph::from_edges(4, &[(0, 1, 2), (2, 3, 5)]).unwrap();
        let text = g.to_json();
        assert_eq!(text, r#"{"n":4,"edges":[[0,1,2],[2,3,5]]}"#);
        assert_eq!(EdgeLabelledGraph::from_json(&text).unwrap(), g);

        let err = EdgeLabelledGraph::from_json("{\"n\": 3,\n \"edges\": [[0, 1]]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = EdgeLabelledGraph::from_json(r#"{"n": 2, "edges": [[0, 5, 1]]}"#).unwrap_err();
        assert!(err.to_string().contains("edges[0]"), "{err}");
        assert!(EdgeLabelledGraph::from_json(r#"{"n": 2, "edgez": []}"#).is_err());
    }

    #[test]
    fn canonical_form_examples() {
        let c: LabelledCycle = "3,1,2".parse().unwrap();
        assert_eq!(c.canonical().labels(), &[1, 2, 3]);
        let c: LabelledCycle = "(5,5,5,2)".parse().unwrap();
        assert_eq!(c.canonical().labels(), &[2, 5, 5, 5]);
        let c = LabelledCycle::new(vec![2, 1, 3, 1]).unwrap();
        assert_eq!(c.canonical().labels(), &[1, 2, 1, 3]);
        assert!(LabelledCycle::new(vec![1, 1]).is_err());
        assert_eq!(c.perimeter(), 7);
        assert_eq!(c.to_string(), "(2,1,3,1)");
    }

    #[test]
    fn closed_walk_examples() {
        let tri = EdgeLabelledGraph::triangle(1, 2, 3);
        let walks: Vec<_> = closed_walks(&tri, 3).collect();
        // 3 starting points times 2 directions
        assert_eq!(walks.len(), 6);
        assert!(walks.iter().all(|w| w.cycle().canonical().labels() == [1, 2, 3]));
        assert_eq!(walks[0].vertices, vec![0, 1, 2]);

        let edge = EdgeLabelledGraph::from_edges(2, &[(0, 1, 4)]).unwrap();
        assert_eq!(closed_walks(&edge, 3).count(), 0);
        // length 4 back-and-forth walks do exist
        assert!(closed_walks(&edge, 4).all(|w| w.labels == vec![4, 4, 4, 4]));

        let pentagon = EdgeLabelledGraph::cycle(&[5, 5, 5, 5, 5]).unwrap();
        let w = closed_walks(&pentagon, 5).find(|w| w.vertices.len() == 5 && {
            let mut v = w.vertices.clone();
            v.sort();
            v.dedup();
            v.len() == 5
        });
        assert!(w.is_some());
        assert_eq!(closed_walks(&EdgeLabelledGraph::new(0), 5).count(), 0);
    }

    #[test]
    fn closed_walks_are_ordered_by_length() {
        let g = EdgeLabelledGraph::from_edges(4, &[(0, 1, 1), (1, 2, 2), (0, 2, 3), (2, 3, 1)]).unwrap();
        let lens: Vec<usize> = closed_walks(&g, 6).map(|w| w.labels.len()).collect();
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(lens[0], 3);
        for w in closed_walks(&g, 6) {
            let k = w.vertices.len();
            for i in 0..k {
                assert_eq!(g.label(w.vertices[i], w.vertices[(i + 1) % k]), Some(w.labels[i]));
            }
        }
    }
}
