use mhg_core::completion::{magic_complete, steps};
use mhg_core::families::{classify_cycle, ForbiddenFamily};
use mhg_core::graph::{is_member, triangle_verdict};
use mhg_core::magic::{magic_distances, TimeRule};
use mhg_core::onedelta::{classify_1d, OneDeltaTable};
use mhg_core::oracle::{has_completion_bruteforce, DEFAULT_BUDGET};
use mhg_core::params::enumerate_admissible;
use mhg_core::{EdgeLabelledGraph, LabelledCycle, MagicContext, ParameterSequence};
use proptest::prelude::*;

fn p5() -> ParameterSequence {
    ParameterSequence::admissible(5, 3, 3, 16, 13).unwrap()
}

fn all_admissible(max_delta: u32) -> Vec<ParameterSequence> {
    (3..=max_delta).flat_map(enumerate_admissible).collect()
}

fn cycle_labels(delta: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1..=delta, 3..9)
}

/// Random graph on `n` vertices; label 0 means no edge.
fn graph(n: usize, delta: u32) -> impl Strategy<Value = EdgeLabelledGraph> {
    prop::collection::vec(0..=delta, n * (n - 1) / 2).prop_map(move |labels| {
        let mut g = EdgeLabelledGraph::new(n);
        let mut it = labels.into_iter();
        for u in 0..n {
            for v in u + 1..n {
                let l = it.next().unwrap();
                if l != 0 {
                    g.add_edge(u, v, l).unwrap();
                }
            }
        }
        g
    })
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent_and_invariant(labels in cycle_labels(6), shift in 0usize..9, flip: bool) {
        let c = LabelledCycle::new(labels.clone()).unwrap();
        let canon = c.canonical();
        prop_assert_eq!(canon.canonical(), canon.clone());
        prop_assert!(canon.is_canonical());

        let mut moved = labels.clone();
        moved.rotate_left(shift % labels.len());
        if flip {
            moved.reverse();
        }
        prop_assert_eq!(LabelledCycle::new(moved).unwrap().canonical(), canon);
    }

    #[test]
    fn cycle_text_round_trips(labels in cycle_labels(9)) {
        let c = LabelledCycle::new(labels).unwrap();
        let back: LabelledCycle = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn family_membership_ignores_arrangement(labels in cycle_labels(5), shift in 0usize..9) {
        let fam = ForbiddenFamily::new(p5()).unwrap();
        let c = LabelledCycle::new(labels.clone()).unwrap();
        let mut moved = labels.clone();
        moved.rotate_left(shift % labels.len());
        moved.reverse();
        let d = LabelledCycle::new(moved).unwrap();
        prop_assert_eq!(fam.contains(&c), fam.contains(&d));
        prop_assert_eq!(classify_cycle(&p5(), &c).is_empty(), classify_cycle(&p5(), &d).is_empty());
    }

    #[test]
    fn magic_completion_keeps_edges(g in graph(6, 5)) {
        let ctx = MagicContext::new(p5()).unwrap();
        let done = magic_complete(&ctx, &g).unwrap();
        prop_assert!(done.graph.is_complete());
        for (u, v, l) in g.edges() {
            prop_assert_eq!(done.graph.label(u, v), Some(l));
        }
        let filled: usize = done.trace.stages.iter().map(|s| s.pairs.len()).sum::<usize>() + done.trace.fallback_pairs.len();
        prop_assert_eq!(filled, g.non_edges().count());
        let completable = has_completion_bruteforce(&p5(), &g, DEFAULT_BUDGET).unwrap();
        if is_member(&p5(), &done.graph) {
            prop_assert!(completable.is_some());
        }
        if let Some(h) = completable {
            prop_assert!(is_member(&p5(), &h));
        }
    }

    #[test]
    fn graph_json_round_trips(g in graph(5, 4)) {
        prop_assert_eq!(EdgeLabelledGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn steps_shorten_by_one(labels in prop::collection::vec(1u32..=5, 4..9)) {
        let ctx = MagicContext::new(p5()).unwrap();
        let c = LabelledCycle::new(labels).unwrap();
        let next = steps(&ctx, &c).unwrap();
        prop_assert!(!next.is_empty());
        for s in next {
            prop_assert_eq!(s.len(), c.len() - 1);
        }
    }
}

#[test]
fn oplus_is_commutative_for_both_rules() {
    for p in all_admissible(7) {
        for rule in [TimeRule::Standard, TimeRule::Interleaved] {
            for m in magic_distances(&p).unwrap() {
                let ctx = MagicContext::with_magic(p, m).unwrap().with_rule(rule);
                for x in 1..=p.delta() {
                    for y in 1..=p.delta() {
                        assert_eq!(ctx.oplus(x, y).unwrap(), ctx.oplus(y, x).unwrap());
                    }
                }
                assert_eq!(*ctx.permutation().last().unwrap(), m);
            }
        }
    }
}

#[test]
fn triangle_verdict_is_symmetric() {
    for p in all_admissible(5) {
        let d = p.delta();
        for a in 1..=d {
            for b in 1..=d {
                for c in 1..=d {
                    let v = triangle_verdict(&p, a, b, c).unwrap().is_allowed();
                    assert_eq!(v, triangle_verdict(&p, b, c, a).unwrap().is_allowed());
                    assert_eq!(v, triangle_verdict(&p, c, b, a).unwrap().is_allowed());
                }
            }
        }
    }
}

#[test]
fn one_delta_tables_are_monotone() {
    for p in all_admissible(8) {
        let t = OneDeltaTable::new(&p).unwrap();
        for &(i, j) in t.cells().keys() {
            if i >= 2 && i - 2 + j >= 3 {
                assert!(t.tag(i - 2, j).is_some(), "{} ({i},{j}) without ({},{j})", p.raw(), i - 2);
            }
            if j >= 2 && i + j - 2 >= 3 {
                assert!(t.tag(i, j - 2).is_some(), "{} ({i},{j}) without ({i},{})", p.raw(), j - 2);
            }
        }
    }
}

#[test]
fn one_delta_tables_have_no_even_even_cell() {
    for p in all_admissible(8) {
        let t = OneDeltaTable::new(&p).unwrap();
        for &(i, j) in t.cells().keys() {
            assert!(i % 2 == 1 || j % 2 == 1, "{} tags ({i},{j})", p.raw());
        }
    }
}

/// The table agrees with the general family description on every cycle
/// made of `i` edges of length δ and `j` edges of length 1.
#[test]
fn one_delta_cells_match_families() {
    for p in all_admissible(6) {
        let fam = ForbiddenFamily::new(p).unwrap();
        let d = p.delta();
        for i in 0..=2 * d {
            for j in 0..=2 * d {
                if i + j < 3 {
                    continue;
                }
                let mut labels = vec![d; i as usize];
                labels.extend(std::iter::repeat_n(1, j as usize));
                let tagged = classify_1d(&p, i, j).is_some();
                assert_eq!(tagged, fam.contains_labels(&labels), "{} cell ({i},{j})", p.raw());
            }
        }
    }
}
