//! Loops, coloops and parallel pairs read directly off the Le-graph.
//!
//! A loop is a source linked to no sink and a coloop is a sink no source is
//! linked to. Sinks form a basis, so a parallel pair is either two sources or
//! a source and a sink:
//!
//! * sources `h_i < h_j` (so `h_i` is to the right) are parallel iff every
//!   path leaving `h_j` passes through `w`, the first internal vertex above
//!   `h_i`;
//! * a source `h` and a sink `v` are parallel iff `v` is the only sink linked
//!   to `h`.

use crate::diagram::LeDiagram;
use crate::graph::{build_le_graph, LeGraph};
use crate::routing::linkage;
use crate::subset::GroundSubset;

/// `(loops, coloops)` detected on the Le-graph.
pub fn graph_loops_coloops(d: &LeDiagram) -> (GroundSubset, GroundSubset) {
    loops_coloops_of(&build_le_graph(d))
}

pub(crate) fn loops_coloops_of(g: &LeGraph) -> (GroundSubset, GroundSubset) {
    let links = linkage(g);
    let loops = g
        .sources()
        .iter()
        .filter(|&h| links[h].is_empty())
        .collect();
    let reached = g
        .sources()
        .iter()
        .fold(GroundSubset::EMPTY, |acc, h| acc | links[h]);
    (loops, g.sinks() - reached)
}

/// Parallel pairs `(e, f)`, `e < f`, detected structurally.
pub fn graph_parallel_pairs(d: &LeDiagram) -> Vec<(usize, usize)> {
    parallel_pairs_of(&build_le_graph(d))
}

pub(crate) fn parallel_pairs_of(g: &LeGraph) -> Vec<(usize, usize)> {
    let links = linkage(g);
    let live: Vec<usize> = g
        .sources()
        .iter()
        .filter(|&h| !links[h].is_empty())
        .collect();
    let mut pairs = Vec::new();

    for &h in &live {
        if links[h].len() == 1 {
            let v = links[h].first().expect("one sink");
            pairs.push((v.min(h), v.max(h)));
        }
    }

    let mut avoid = vec![false; g.vertex_count()];
    for (i, &right) in live.iter().enumerate() {
        let w = g
            .first_above(right)
            .expect("a non-loop source has a dot above it");
        avoid[w] = true;
        for &left in &live[i + 1..] {
            if g.reachable_sinks_avoiding(g.external(left), &avoid)
                .is_empty()
            {
                pairs.push((right, left));
            }
        }
        avoid[w] = false;
    }
    pairs.sort_unstable();
    pairs
}
