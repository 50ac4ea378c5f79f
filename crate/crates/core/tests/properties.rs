use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use positroid::coline::{cocircuit_pair_witness, positive_coline};
use positroid::enumerate::gen_le_diagrams;
use positroid::routing::{brute_force_rank, max_disjoint_routing, routing_size};
use positroid::{build_le_graph, parse_le_diagram, positroid, rank, GroundSubset, LeDiagram, Step};

/// Arbitrary path plus arbitrary dots in its boxes; usually not an Le-diagram.
fn raw_diagram(max_n: usize) -> impl Strategy<Value = (Vec<Step>, Vec<(usize, usize)>)> {
    (1..=max_n)
        .prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n))
        .prop_flat_map(|bits| {
            let path: Vec<Step> = bits
                .iter()
                .map(|&v| if v { Step::V } else { Step::H })
                .collect();
            let boxes: Vec<(usize, usize)> = (1..=path.len())
                .flat_map(|s| (s + 1..=path.len()).map(move |h| (s, h)))
                .filter(|&(s, h)| path[s - 1] == Step::V && path[h - 1] == Step::H)
                .collect();
            let k = boxes.len();
            (
                Just(path),
                Just(boxes),
                proptest::collection::vec(any::<bool>(), k),
            )
        })
        .prop_map(|(path, boxes, keep)| {
            let dots = boxes
                .into_iter()
                .zip(keep)
                .filter_map(|(b, k)| k.then_some(b))
                .collect();
            (path, dots)
        })
}

fn all_diagrams(n: usize) -> &'static [LeDiagram] {
    static CACHE: [OnceLock<Vec<LeDiagram>>; 9] = [const { OnceLock::new() }; 9];
    CACHE[n].get_or_init(|| gen_le_diagrams(n, None).unwrap().collect())
}

/// A valid diagram: the `idx`-th generated one of a random size.
fn le_diagram(max_n: usize) -> impl Strategy<Value = LeDiagram> {
    (1..=max_n, any::<prop::sample::Index>()).prop_map(|(n, idx)| {
        let all = all_diagrams(n);
        all[idx.index(all.len())].clone()
    })
}

/// Diagrams of size 7 whose positroid is simple of rank at least 3.
fn simple_diagram() -> impl Strategy<Value = LeDiagram> {
    static POOL: OnceLock<Vec<LeDiagram>> = OnceLock::new();
    any::<prop::sample::Index>().prop_map(|idx| {
        let pool = POOL.get_or_init(|| {
            all_diagrams(7)
                .iter()
                .filter(|d| {
                    let m = positroid(d);
                    m.is_simple() && m.rank() >= 3
                })
                .cloned()
                .collect()
        });
        pool[idx.index(pool.len())].clone()
    })
}

fn with_subset(max_n: usize) -> impl Strategy<Value = (LeDiagram, GroundSubset)> {
    (le_diagram(max_n), any::<u64>()).prop_map(|(d, bits)| {
        let set = d
            .ground()
            .iter()
            .filter(|e| bits >> (e - 1) & 1 == 1)
            .collect();
        (d, set)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_round_trip(d in le_diagram(7)) {
        let back = parse_le_diagram(&d.to_led()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn generator_is_sound_and_complete((path, dots) in raw_diagram(6)) {
        let n = path.len();
        let accepted = LeDiagram::new(&path, &dots);
        let generated = gen_le_diagrams(n, None)
            .unwrap()
            .any(|g| g.steps() == path && g.dots() == {
                let mut sorted = dots.clone();
                sorted.sort_unstable();
                sorted
            });
        prop_assert_eq!(accepted.is_ok(), generated);
    }

    #[test]
    fn closure_laws((d, x) in with_subset(7), extra in any::<u64>()) {
        let m = positroid(&d);
        let cx = m.closure(x).elements;
        prop_assert!(x.is_subset(cx));
        prop_assert_eq!(m.closure(cx).elements, cx);
        prop_assert_eq!(m.rank_of(cx), m.rank_of(x));
        let y = x | d.ground().iter().filter(|e| extra >> (e - 1) & 1 == 1).collect();
        prop_assert!(cx.is_subset(m.closure(y).elements));
    }

    #[test]
    fn routing_rank_matches_brute_force((d, x) in with_subset(7)) {
        let g = build_le_graph(&d);
        let m = positroid(&d);
        let r = rank(&g, x);
        prop_assert_eq!(r, brute_force_rank(&g, x));
        prop_assert_eq!(r, m.rank_of(x));
    }

    #[test]
    fn routing_plans_are_valid((d, x) in with_subset(8), y_bits in any::<u64>()) {
        let g = build_le_graph(&d);
        let sources = x & d.sources();
        let sinks: GroundSubset = d.sinks().iter().filter(|e| y_bits >> (e - 1) & 1 == 1).collect();
        let plan = max_disjoint_routing(&g, sources, sinks).unwrap();
        prop_assert!(plan.verify(&g, sources, sinks));
        prop_assert_eq!(plan.len(), routing_size(&g, sources, sinks));
        let mut seen = HashSet::new();
        for v in plan.paths.iter().flatten() {
            prop_assert!(seen.insert(*v));
        }
    }

    #[test]
    fn dual_rank_formula((d, x) in with_subset(7)) {
        let m = positroid(&d);
        let dual = m.dual();
        prop_assert_eq!(dual.dual(), m.clone());
        let complement = d.ground() - x;
        prop_assert_eq!(dual.rank_of(x), x.len() + m.rank_of(complement) - m.rank());
    }

    #[test]
    fn positive_colines_have_two_element_witnesses(d in simple_diagram()) {
        let m = positroid(&d);
        let pc = positive_coline(&m, &d).unwrap();
        prop_assert!(pc.report.positive);
        let w = cocircuit_pair_witness(&m, &pc.report).unwrap();
        prop_assert_eq!(w.symmetric_difference().len(), 2);
        for c in [w.c1, w.c2] {
            let hyperplane = d.ground() - c;
            prop_assert!(m.is_flat(hyperplane));
            prop_assert_eq!(m.rank_of(hyperplane), m.rank() - 1);
        }
    }
}
