//! Vertex-disjoint routings, the positroid rank oracle and basis generation.
//!
//! Maximum routings are computed with unit vertex capacities (each vertex is
//! split into an in/out pair joined by a capacity-one arc) and augmenting
//! paths, so the routing size is the Menger value.

use serde::Serialize;

use crate::diagram::LeDiagram;
use crate::error::Error;
use crate::graph::{build_le_graph, LeGraph, Vertex};
use crate::matroid::BasisMatroid;
use crate::subset::{k_subsets, GroundSubset};

/// A finite digraph on vertices `0..len`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertices: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); vertices],
        }
    }

    pub fn from_arcs(vertices: usize, arcs: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Digraph::new(vertices);
        for &(u, v) in arcs {
            for x in [u, v] {
                if x >= vertices {
                    return Err(Error::UnknownVertex(x));
                }
            }
            g.add_arc(u, v);
        }
        g.sort_adjacency();
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn add_arc(&mut self, from: usize, to: usize) {
        self.out[from].push(to);
    }

    pub(crate) fn sort_adjacency(&mut self) {
        for adj in &mut self.out {
            adj.sort_unstable();
            adj.dedup();
        }
    }

    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |&v| (u, v)))
    }

    /// Vertices reachable from `start` (inclusive) without entering `avoid`.
    /// An empty `avoid` slice avoids nothing.
    pub fn reachable(&self, start: usize, avoid: &[bool]) -> Vec<bool> {
        let blocked = |v: usize| avoid.get(v).copied().unwrap_or(false);
        let mut seen = vec![false; self.len()];
        if blocked(start) {
            return seen;
        }
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.out[u] {
                if !seen[v] && !blocked(v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// A topological order, or `None` when the digraph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.len()];
        for (_, v) in self.arcs() {
            indeg[v] += 1;
        }
        let mut ready: Vec<usize> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(u) = ready.pop() {
            order.push(u);
            for &v in &self.out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(v);
                }
            }
        }
        (order.len() == self.len()).then_some(order)
    }

    /// Maximum number of vertex-disjoint paths from distinct vertices of
    /// `from` to vertices flagged in `to`, never touching `blocked`. A vertex
    /// in both `from` and `to` counts as a length-0 path.
    pub fn max_disjoint(&self, from: &[usize], to: &[bool], blocked: &[bool]) -> usize {
        let mut net = SplitNetwork::new(self, from, to, blocked);
        net.saturate()
    }

    /// Like [`Digraph::max_disjoint`] but also returns one maximum family of
    /// paths (as vertex sequences).
    pub fn max_disjoint_paths(
        &self,
        from: &[usize],
        to: &[bool],
        blocked: &[bool],
    ) -> Vec<Vec<usize>> {
        let mut net = SplitNetwork::new(self, from, to, blocked);
        net.saturate();
        net.paths()
    }

    /// The lexicographically smallest maximum routing, comparing path lists
    /// ordered by start vertex and then vertex sequence (vertex ids order).
    pub fn canonical_routing(&self, from: &[usize], to: &[bool]) -> Vec<Vec<usize>> {
        let mut starts = from.to_vec();
        starts.sort_unstable();
        starts.dedup();
        let total = self.max_disjoint(&starts, to, &[]);
        let mut blocked = vec![false; self.len()];
        let mut plan = Vec::with_capacity(total);
        let mut rest: &[usize] = &starts;

        // Greedy choice is safe because routable start sets form a matroid
        // (a gammoid) on every subgraph: if `head` can reach `to` on its own
        // and `{head} ∪ rest` routes `need` paths, some maximum family uses
        // `head`.
        let feasible = |head: usize, rest: &[usize], blocked: &[bool], need: usize| -> bool {
            if blocked[head] || self.max_disjoint(&[head], to, blocked) == 0 {
                return false;
            }
            let mut all = Vec::with_capacity(rest.len() + 1);
            all.push(head);
            all.extend(rest.iter().copied().filter(|&x| !blocked[x] && x != head));
            self.max_disjoint(&all, to, blocked) >= need
        };

        for slot in 0..total {
            let need = total - slot;
            let pick = (0..rest.len())
                .find(|&i| feasible(rest[i], &rest[i + 1..], &blocked, need))
                .expect("a maximum routing exists, so some start is feasible");
            let start = rest[pick];
            rest = &rest[pick + 1..];

            let mut path = vec![start];
            let mut cur = start;
            while !to[cur] {
                blocked[cur] = true;
                let next = self.out[cur]
                    .iter()
                    .copied()
                    .find(|&w| feasible(w, rest, &blocked, need))
                    .expect("the feasible prefix extends");
                path.push(next);
                cur = next;
            }
            blocked[cur] = true;
            plan.push(path);
        }
        plan
    }
}

/// Residual network for unit vertex-capacity flow. Vertex `v` becomes
/// `2v` (in) and `2v + 1` (out); the super source and sink follow.
struct SplitNetwork {
    /// Edge list: (head, residual capacity). Edge `e ^ 1` is the reverse of `e`.
    edges: Vec<(usize, u8)>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
    vertices: usize,
}

impl SplitNetwork {
    fn new(g: &Digraph, from: &[usize], to: &[bool], blocked: &[bool]) -> Self {
        let vertices = g.len();
        let blocked = |v: usize| blocked.get(v).copied().unwrap_or(false);
        let nodes = 2 * vertices + 2;
        let mut net = SplitNetwork {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
            source: 2 * vertices,
            sink: 2 * vertices + 1,
            vertices,
        };
        for v in 0..vertices {
            if blocked(v) {
                continue;
            }
            net.add_edge(2 * v, 2 * v + 1);
            for &w in g.out(v) {
                if !blocked(w) {
                    net.add_edge(2 * v + 1, 2 * w);
                }
            }
            if to[v] {
                net.add_edge(2 * v + 1, net.sink);
            }
        }
        let mut seen = vec![false; vertices];
        for &x in from {
            if !blocked(x) && !seen[x] {
                seen[x] = true;
                net.add_edge(net.source, 2 * x);
            }
        }
        net
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a].push(self.edges.len());
        self.edges.push((b, 1));
        self.adj[b].push(self.edges.len());
        self.edges.push((a, 0));
    }

    fn saturate(&mut self) -> usize {
        let mut flow = 0;
        let mut visited = vec![false; self.adj.len()];
        loop {
            visited.iter_mut().for_each(|v| *v = false);
            if !self.augment(self.source, &mut visited) {
                return flow;
            }
            flow += 1;
        }
    }

    fn augment(&mut self, u: usize, visited: &mut [bool]) -> bool {
        if u == self.sink {
            return true;
        }
        visited[u] = true;
        for i in 0..self.adj[u].len() {
            let e = self.adj[u][i];
            let (v, cap) = self.edges[e];
            if cap > 0 && !visited[v] && self.augment(v, visited) {
                self.edges[e].1 -= 1;
                self.edges[e ^ 1].1 += 1;
                return true;
            }
        }
        false
    }

    /// Decomposes the current flow into vertex paths.
    fn paths(&self) -> Vec<Vec<usize>> {
        let used = |e: usize| e.is_multiple_of(2) && self.edges[e].1 == 0;
        let mut out = Vec::new();
        for &e in &self.adj[self.source] {
            if !used(e) {
                continue;
            }
            let mut v = self.edges[e].0 / 2;
            let mut path = vec![v];
            loop {
                let node = 2 * v + 1;
                let next = self.adj[node]
                    .iter()
                    .copied()
                    .find(|&f| used(f))
                    .map(|f| self.edges[f].0)
                    .expect("flow is conserved");
                if next == self.sink {
                    break;
                }
                v = next / 2;
                debug_assert!(v < self.vertices);
                path.push(v);
            }
            out.push(path);
        }
        out
    }
}

/// A family of pairwise vertex-disjoint paths from sources to sinks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutingPlan {
    pub paths: Vec<Vec<Vertex>>,
}

impl RoutingPlan {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Checks arcs, disjointness, and that every path runs from `from` to `to`.
    pub fn verify(&self, g: &LeGraph, from: GroundSubset, to: GroundSubset) -> bool {
        let mut used = std::collections::HashSet::new();
        for path in &self.paths {
            let (Some(&Vertex::External(a)), Some(&Vertex::External(b))) =
                (path.first(), path.last())
            else {
                return false;
            };
            if !from.contains(a) || !to.contains(b) {
                return false;
            }
            if path.windows(2).any(|w| !g.has_arc(w[0], w[1])) {
                return false;
            }
            if !path.iter().all(|v| used.insert(*v)) {
                return false;
            }
        }
        true
    }
}

/// Serialized as a list of vertex-name lists, e.g. `[["7","(3,7)","3"]]`.
impl Serialize for RoutingPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let names: Vec<Vec<String>> = self
            .paths
            .iter()
            .map(|p| p.iter().map(Vertex::to_string).collect())
            .collect();
        names.serialize(s)
    }
}

fn check_sources(g: &LeGraph, set: GroundSubset) -> Result<(), Error> {
    match set.iter().find(|&e| e > g.n() || g.sinks().contains(e)) {
        Some(e) => Err(Error::NotASource(e)),
        None => Ok(()),
    }
}

fn check_sinks(g: &LeGraph, set: GroundSubset) -> Result<(), Error> {
    match set.iter().find(|&e| e > g.n() || !g.sinks().contains(e)) {
        Some(e) => Err(Error::NotASink(e)),
        None => Ok(()),
    }
}

fn target_flags(g: &LeGraph, targets: GroundSubset) -> Vec<bool> {
    let mut flags = vec![false; g.vertex_count()];
    for v in targets {
        flags[g.external(v)] = true;
    }
    flags
}

/// True iff a directed path runs from source `h` to sink `v`.
pub fn linked(g: &LeGraph, h: usize, v: usize) -> Result<bool, Error> {
    if h == 0 || h > g.n() || g.sinks().contains(h) {
        return Err(Error::NotASource(h));
    }
    if v == 0 || v > g.n() || !g.sinks().contains(v) {
        return Err(Error::NotASink(v));
    }
    Ok(g.reachable_sinks(g.external(h)).contains(v))
}

/// The set of sinks linked to each source, indexed by label (sinks map to
/// the empty set).
pub fn linkage(g: &LeGraph) -> Vec<GroundSubset> {
    let mut out = vec![GroundSubset::EMPTY; g.n() + 1];
    for h in g.sources() {
        out[h] = g.reachable_sinks(g.external(h));
    }
    out
}

/// A maximum vertex-disjoint routing from sources `x` into sinks `y`, chosen
/// lexicographically smallest for reproducible output.
pub fn max_disjoint_routing(
    g: &LeGraph,
    x: GroundSubset,
    y: GroundSubset,
) -> Result<RoutingPlan, Error> {
    check_sources(g, x)?;
    check_sinks(g, y)?;
    let from: Vec<usize> = x.iter().map(|e| g.external(e)).collect();
    let paths = g.digraph().canonical_routing(&from, &target_flags(g, y));
    Ok(RoutingPlan {
        paths: paths
            .into_iter()
            .map(|p| p.into_iter().map(|id| g.vertex(id)).collect())
            .collect(),
    })
}

/// Size of a maximum routing from `x` into `y` (no paths materialized).
pub fn routing_size(g: &LeGraph, x: GroundSubset, y: GroundSubset) -> usize {
    let from: Vec<usize> = x.iter().map(|e| g.external(e)).collect();
    g.digraph().max_disjoint(&from, &target_flags(g, y), &[])
}

/// Rank of `set`: its sinks plus the number of disjoint paths from its
/// sources into the sinks it does not contain.
pub fn rank(g: &LeGraph, set: GroundSubset) -> usize {
    debug_assert!(set.within(g.n()));
    let b = g.sinks();
    (set & b).len() + routing_size(g, set - b, b - set)
}

/// The positroid of the Le-graph: all `r`-subsets whose sources link onto
/// the sinks they miss.
pub fn bases(g: &LeGraph) -> BasisMatroid {
    let r = g.rank();
    let b = g.sinks();
    let list = k_subsets(g.n(), r)
        .filter(|&set| {
            let missing = set - b;
            missing.is_empty() || routing_size(g, missing, b - set) == missing.len()
        })
        .collect();
    BasisMatroid::from_sorted_bases(g.n(), r, list)
}

pub fn positroid(d: &LeDiagram) -> BasisMatroid {
    bases(&build_le_graph(d))
}

/// Rank of `x` in the gammoid represented by `(d, targets, ground)`: the
/// largest subset of `x` routable into `targets` by vertex-disjoint paths.
pub fn gammoid_rank(
    d: &Digraph,
    targets: &[usize],
    ground: &[usize],
    x: &[usize],
) -> Result<usize, Error> {
    if let Some(&v) = targets.iter().chain(ground).find(|&&v| v >= d.len()) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some(&v) = x.iter().find(|v| !ground.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    let mut to = vec![false; d.len()];
    for &t in targets {
        to[t] = true;
    }
    Ok(d.max_disjoint(x, &to, &[]))
}

/// Exhaustive oracle for [`rank`]: enumerates every path from each source of
/// `set` to the sinks outside `set` and searches for the largest disjoint
/// subfamily. Exponential; meant for small diagrams (at most 128 vertices).
pub fn brute_force_rank(g: &LeGraph, set: GroundSubset) -> usize {
    assert!(
        g.vertex_count() <= 128,
        "brute_force_rank needs at most 128 vertices"
    );
    let b = g.sinks();
    let targets = b - set;
    let sources: Vec<usize> = (set - b).iter().collect();

    let per_source: Vec<Vec<u128>> = sources
        .iter()
        .map(|&h| {
            let mut found = Vec::new();
            collect_paths(g, g.external(h), 0, targets, &mut found);
            found
        })
        .collect();

    fn search(i: usize, used: u128, count: usize, paths: &[Vec<u128>], best: &mut usize) {
        if count > *best {
            *best = count;
        }
        if i == paths.len() || count + (paths.len() - i) <= *best {
            return;
        }
        for &p in &paths[i] {
            if p & used == 0 {
                search(i + 1, used | p, count + 1, paths, best);
            }
        }
        search(i + 1, used, count, paths, best);
    }

    let mut best = 0;
    search(0, 0, 0, &per_source, &mut best);
    (set & b).len() + best
}

fn collect_paths(g: &LeGraph, v: usize, seen: u128, targets: GroundSubset, out: &mut Vec<u128>) {
    let seen = seen | (1u128 << v);
    if g.is_sink_id(v) {
        if targets.contains(v + 1) {
            out.push(seen);
        }
        return;
    }
    for &w in g.digraph().out(v) {
        if seen & (1u128 << w) == 0 {
            collect_paths(g, w, seen, targets, out);
        }
    }
}
