//! Le-graphs: the planar DAG read off a Le-diagram.
//!
//! External vertices sit on the path edges (ids `0..n`, label = id + 1),
//! internal vertices sit on the dots (ids `n..`, in sorted `(s, h)` order).
//! Rows carry arcs to the right, ending at the row's sink; columns carry arcs
//! upwards, starting at the column's source. Only consecutive nodes are
//! joined, and the top dot of a column has no upward arc.

use std::fmt;
use std::fmt::Write as _;

use crate::diagram::LeDiagram;
use crate::routing::Digraph;
use crate::subset::GroundSubset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    External(usize),
    Internal(usize, usize),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::External(label) => write!(f, "{label}"),
            Vertex::Internal(s, h) => write!(f, "({s},{h})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LeGraph {
    n: usize,
    sinks: GroundSubset,
    dots: Vec<(usize, usize)>,
    digraph: Digraph,
}

impl LeGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sinks(&self) -> GroundSubset {
        self.sinks
    }

    pub fn sources(&self) -> GroundSubset {
        GroundSubset::full(self.n) - self.sinks
    }

    pub fn rank(&self) -> usize {
        self.sinks.len()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.dots.len()
    }

    pub fn internal_count(&self) -> usize {
        self.dots.len()
    }

    pub fn arc_count(&self) -> usize {
        self.digraph.arc_count()
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        if id < self.n {
            Vertex::External(id + 1)
        } else {
            let (s, h) = self.dots[id - self.n];
            Vertex::Internal(s, h)
        }
    }

    pub fn id_of(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::External(label) => (1..=self.n).contains(&label).then(|| label - 1),
            Vertex::Internal(s, h) => self.dots.binary_search(&(s, h)).ok().map(|i| i + self.n),
        }
    }

    /// Vertex id of an external label.
    pub fn external(&self, label: usize) -> usize {
        debug_assert!((1..=self.n).contains(&label));
        label - 1
    }

    pub fn is_sink_id(&self, id: usize) -> bool {
        id < self.n && self.sinks.contains(id + 1)
    }

    pub fn is_source_id(&self, id: usize) -> bool {
        id < self.n && !self.sinks.contains(id + 1)
    }

    /// All arcs as `(tail, head)` vertex pairs, ordered by tail then head id.
    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        self.digraph
            .arcs()
            .map(|(u, v)| (self.vertex(u), self.vertex(v)))
            .collect()
    }

    pub fn has_arc(&self, from: Vertex, to: Vertex) -> bool {
        match (self.id_of(from), self.id_of(to)) {
            (Some(u), Some(v)) => self.digraph.out(u).contains(&v),
            _ => false,
        }
    }

    /// Sinks reachable from vertex `id`.
    pub fn reachable_sinks(&self, id: usize) -> GroundSubset {
        let seen = self.digraph.reachable(id, &[]);
        self.sinks.iter().filter(|&v| seen[v - 1]).collect()
    }

    /// Sinks reachable from `id` when the vertices marked in `avoid` are
    /// removed.
    pub fn reachable_sinks_avoiding(&self, id: usize, avoid: &[bool]) -> GroundSubset {
        let seen = self.digraph.reachable(id, avoid);
        self.sinks.iter().filter(|&v| seen[v - 1]).collect()
    }

    /// The first internal vertex above source `h`, if its column has a dot.
    pub fn first_above(&self, h: usize) -> Option<usize> {
        self.digraph.out(self.external(h)).first().copied()
    }

    pub fn name(&self, id: usize) -> String {
        self.vertex(id).to_string()
    }
}

/// Builds the Le-graph of a valid diagram.
pub fn build_le_graph(d: &LeDiagram) -> LeGraph {
    let n = d.n();
    let dots = d.dots().to_vec();
    let mut digraph = Digraph::new(n + dots.len());
    let id = |s: usize, h: usize| n + dots.binary_search(&(s, h)).expect("dot exists");

    // Rows: walk each sink's dots left to right (descending source label).
    for s in d.sinks() {
        let mut row: Vec<usize> = dots.iter().filter(|d| d.0 == s).map(|d| d.1).collect();
        row.sort_unstable_by(|a, b| b.cmp(a));
        for (i, &h) in row.iter().enumerate() {
            let head = match row.get(i + 1) {
                Some(&next) => id(s, next),
                None => s - 1,
            };
            digraph.add_arc(id(s, h), head);
        }
    }
    // Columns: walk each source's dots bottom to top (descending sink label).
    for h in d.sources() {
        let mut col: Vec<usize> = dots.iter().filter(|d| d.1 == h).map(|d| d.0).collect();
        col.sort_unstable_by(|a, b| b.cmp(a));
        let mut tail = h - 1;
        for &s in &col {
            digraph.add_arc(tail, id(s, h));
            tail = id(s, h);
        }
    }
    digraph.sort_adjacency();
    LeGraph {
        n,
        sinks: d.sinks(),
        dots,
        digraph,
    }
}

impl From<&LeDiagram> for LeGraph {
    fn from(d: &LeDiagram) -> Self {
        build_le_graph(d)
    }
}

/// Deterministic Graphviz rendering. Sinks, sources and internal vertices are
/// told apart by the `class` attribute (and by shape).
pub fn emit_dot(g: &LeGraph) -> String {
    let mut out = String::from("digraph le_graph {\n");
    for id in 0..g.vertex_count() {
        let name = g.name(id);
        let attrs = if g.is_sink_id(id) {
            "class=\"sink\", shape=box"
        } else if g.is_source_id(id) {
            "class=\"source\", shape=invtriangle"
        } else {
            "class=\"internal\", shape=circle"
        };
        let _ = writeln!(out, "  \"{name}\" [{attrs}];");
    }
    for (u, v) in g.digraph.arcs() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", g.name(u), g.name(v));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::diagram;
    use crate::fixtures;

    fn ext(l: usize) -> Vertex {
        Vertex::External(l)
    }

    fn dot(s: usize, h: usize) -> Vertex {
        Vertex::Internal(s, h)
    }

    #[test]
    fn fig2_graph() {
        let g = build_le_graph(&fixtures::fig2());
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.internal_count(), 5);
        assert_eq!(g.arc_count(), 10);
        for (a, b) in [
            (ext(7), dot(3, 7)),
            (dot(3, 7), dot(3, 6)),
            (dot(3, 6), dot(2, 6)),
            (dot(2, 6), ext(2)),
            (ext(6), dot(5, 6)),
            (dot(5, 6), ext(5)),
        ] {
            assert!(g.has_arc(a, b), "missing arc {a} -> {b}");
        }
    }

    #[test]
    fn fig4_graph() {
        let g = build_le_graph(&fixtures::fig4());
        for (a, b) in [
            (ext(7), dot(5, 7)),
            (dot(5, 7), dot(5, 6)),
            (dot(5, 6), ext(5)),
            (dot(5, 6), dot(2, 6)),
            (dot(2, 6), ext(2)),
        ] {
            assert!(g.has_arc(a, b), "missing arc {a} -> {b}");
        }
        // Exactly these 8 arcs.
        assert_eq!(g.arc_count(), 8);
    }

    #[test]
    fn single_sink() {
        let g = build_le_graph(&diagram("V", &[]).unwrap());
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.arc_count(), 0);
        let dot = emit_dot(&g);
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("class=").count(), 1);
    }

    #[test]
    fn dot_export_counts() {
        let g = build_le_graph(&fixtures::fig2());
        let text = emit_dot(&g);
        assert_eq!(text.matches("class=").count(), 12);
        assert_eq!(text.matches("->").count(), 10);
        assert_eq!(text, emit_dot(&build_le_graph(&fixtures::fig2())));

        let g7 = build_le_graph(&fixtures::fig7());
        let text = emit_dot(&g7);
        assert_eq!(text.matches("class=").count(), 13);
        assert!(text.contains("\"7\" -> \"(6,7)\";"));
        assert!(text.contains("\"2\" [class=\"sink\""));
        assert!(text.contains("\"3\" [class=\"source\""));
        assert!(text.contains("\"(1,3)\" [class=\"internal\""));
    }

    #[test]
    fn id_round_trip() {
        let g = build_le_graph(&fixtures::fig7());
        for id in 0..g.vertex_count() {
            assert_eq!(g.id_of(g.vertex(id)), Some(id));
        }
        assert_eq!(g.id_of(dot(2, 5)), None);
    }
}
