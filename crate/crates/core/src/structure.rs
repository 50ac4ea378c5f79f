//! Levels, isolated blocks, connectivity and direct-sum decomposition.
//!
//! A level is a maximal run of sinks together with the run of sources that
//! follows it on the path (pattern `V+H*`). Sources ahead of the first sink
//! belong to no level; they own no boxes and are always loops.
//!
//! Isolated blocks are computed as the connected components of the
//! source–sink linkage relation, with loops and coloops as singletons. The
//! matroid-level notion of connectivity (every pair of elements on a common
//! circuit) is available separately as [`is_connected`].

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::diagram::LeDiagram;
use crate::error::Error;
use crate::graph::build_le_graph;
use crate::matroid::BasisMatroid;
use crate::routing::{linkage, positroid};
use crate::subset::GroundSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Level {
    pub elements: GroundSubset,
}

impl Level {
    pub fn sinks(&self, d: &LeDiagram) -> GroundSubset {
        self.elements & d.sinks()
    }

    pub fn sources(&self, d: &LeDiagram) -> GroundSubset {
        self.elements - d.sinks()
    }
}

/// Levels in path order.
pub fn levels(d: &LeDiagram) -> Vec<Level> {
    let mut out: Vec<Level> = Vec::new();
    let mut prev_sink = false;
    for e in 1..=d.n() {
        let sink = d.is_sink(e);
        if sink && !prev_sink {
            out.push(Level {
                elements: GroundSubset::EMPTY,
            });
        }
        if let Some(level) = out.last_mut() {
            level.elements = level.elements.insert(e);
        }
        prev_sink = sink;
    }
    out
}

/// Sources before the first sink (they belong to no level).
pub fn leading_sources(d: &LeDiagram) -> GroundSubset {
    (1..=d.n()).take_while(|&e| !d.is_sink(e)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// Blocks ordered by smallest label.
    pub blocks: Vec<GroundSubset>,
    /// For each block, the indices (into [`levels`]) of the levels it meets.
    pub block_levels: Vec<Vec<usize>>,
}

impl DecompositionReport {
    pub fn is_connected(&self) -> bool {
        self.blocks.len() <= 1
    }
}

/// `{"blocks":[[..],..],"connected":bool}`
impl Serialize for DecompositionReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DecompositionReport", 2)?;
        st.serialize_field("blocks", &self.blocks)?;
        st.serialize_field("connected", &self.is_connected())?;
        st.end()
    }
}

/// Minimal union-find over labels `1..=n`.
struct Partition(Vec<usize>);

impl Partition {
    fn new(n: usize) -> Self {
        Partition((0..=n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Classes over `1..=n`, ordered by smallest member.
    fn classes(&mut self, n: usize) -> Vec<GroundSubset> {
        let mut by_root = vec![GroundSubset::EMPTY; n + 1];
        for e in 1..=n {
            let r = self.find(e);
            by_root[r] = by_root[r].insert(e);
        }
        let mut out: Vec<GroundSubset> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
        out.sort_unstable_by_key(|c| c.first());
        out
    }
}

pub fn isolated_blocks(d: &LeDiagram) -> DecompositionReport {
    let g = build_le_graph(d);
    let links = linkage(&g);
    let mut parts = Partition::new(d.n());
    for h in d.sources() {
        for v in links[h] {
            parts.union(h, v);
        }
    }
    let blocks = parts.classes(d.n());
    debug_assert!(blocks.iter().all(|&b| is_isolated_block(d, &links, b)));
    let lv = levels(d);
    let block_levels = blocks
        .iter()
        .map(|b| {
            lv.iter()
                .enumerate()
                .filter(|(_, l)| !l.elements.is_disjoint(*b))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    DecompositionReport {
        blocks,
        block_levels,
    }
}

/// Checks both isolation conditions for `block`: no outside source is linked
/// to a sink inside, and no inside source is linked to a sink outside.
/// `links[h]` is the set of sinks linked to source `h`.
pub fn is_isolated_block(d: &LeDiagram, links: &[GroundSubset], block: GroundSubset) -> bool {
    let inside_sinks = block & d.sinks();
    let outside_sinks = d.sinks() - block;
    d.sources().iter().all(|h| {
        if block.contains(h) {
            links[h].is_disjoint(outside_sinks)
        } else {
            links[h].is_disjoint(inside_sinks)
        }
    })
}

/// Matroid connectivity: every pair of elements lies on a common circuit.
/// The empty matroid and single elements count as connected.
pub fn is_connected(m: &BasisMatroid) -> bool {
    components(m).len() <= 1
}

/// Connected components of a matroid via shared circuits.
pub fn components(m: &BasisMatroid) -> Vec<GroundSubset> {
    let mut parts = Partition::new(m.n());
    for c in m.circuits() {
        let first = c.first().expect("circuits are nonempty");
        for e in c {
            parts.union(first, e);
        }
    }
    parts.classes(m.n())
}

/// One direct summand of a positroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Labels of the block in the original ground set.
    pub labels: GroundSubset,
    /// The restriction to the block, relabeled onto `1..=|block|`.
    pub matroid: BasisMatroid,
    /// The block's own Le-diagram, relabeled the same way.
    pub diagram: LeDiagram,
}

impl Component {
    /// Maps a subset of the component's ground set back to original labels.
    pub fn lift(&self, set: GroundSubset) -> GroundSubset {
        let labels = self.labels.to_vec();
        set.iter().map(|e| labels[e - 1]).collect()
    }
}

/// Splits `m` (the positroid of `d`) along the isolated blocks of `d`.
pub fn decompose(m: &BasisMatroid, d: &LeDiagram) -> Result<Vec<Component>, Error> {
    if positroid(d) != *m {
        return Err(Error::DiagramMismatch);
    }
    Ok(split(m, d))
}

/// [`decompose`] without re-deriving `m` from `d`.
pub(crate) fn split(m: &BasisMatroid, d: &LeDiagram) -> Vec<Component> {
    isolated_blocks(d)
        .blocks
        .into_iter()
        .map(|labels| Component {
            labels,
            matroid: m.restrict(labels).matroid,
            diagram: d.restrict(labels),
        })
        .collect()
}

/// Bases of the direct sum of the components, in original labels.
pub fn direct_sum_bases(components: &[Component]) -> Vec<GroundSubset> {
    let mut acc = vec![GroundSubset::EMPTY];
    for c in components {
        acc = acc
            .iter()
            .flat_map(|&a| c.matroid.bases().iter().map(move |&b| (a, b)))
            .map(|(a, b)| a | c.lift(b))
            .collect();
    }
    acc.sort_unstable();
    acc
}

/// Some circuit has `r + 1` elements.
pub fn has_spanning_circuit(m: &BasisMatroid) -> bool {
    m.circuits().iter().any(|c| c.len() == m.rank() + 1)
}
