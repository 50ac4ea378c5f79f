//! Exhaustive generation of Le-diagrams, positroid catalogs, and the
//! verification suites run over them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coline::{
    candidate_colines, cocircuit_pair_witness, last_consecutive_sink_pair, positive_coline,
    Candidate,
};
use crate::diagram::{LeDiagram, Step};
use crate::error::Error;
use crate::graph::build_le_graph;
use crate::matroid::{BasisMatroid, ColineReport};
use crate::routing::{brute_force_rank, gammoid_rank, max_disjoint_routing, positroid, rank};
use crate::simplicity::{loops_coloops_of, parallel_pairs_of};
use crate::structure::{components, isolated_blocks};
use crate::subset::{GroundSubset, MAX_GROUND};

// ---------------------------------------------------------------------------
// Generation

/// Every Le-diagram of size `n` (of rank `r` if given): paths in
/// lexicographic order with `H < V`, and for each path the dot sets in
/// lexicographic order of their sorted `(s, h)` lists.
pub fn gen_le_diagrams(n: usize, r: Option<usize>) -> Result<LeDiagrams, Error> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::EnumerationSize(n));
    }
    Ok(LeDiagrams {
        r,
        next_path: Some(vec![Step::H; n]),
        buffer: Vec::new().into_iter(),
    })
}

/// Iterator returned by [`gen_le_diagrams`]. Fillings are produced one path
/// at a time.
pub struct LeDiagrams {
    r: Option<usize>,
    next_path: Option<Vec<Step>>,
    buffer: std::vec::IntoIter<LeDiagram>,
}

impl Iterator for LeDiagrams {
    type Item = LeDiagram;

    fn next(&mut self) -> Option<LeDiagram> {
        loop {
            if let Some(d) = self.buffer.next() {
                return Some(d);
            }
            let path = self.next_path.take()?;
            self.next_path = successor(&path);
            let vertical = path.iter().filter(|&&s| s == Step::V).count();
            if self.r.is_none_or(|r| r == vertical) {
                self.buffer = fillings(&path).into_iter();
            }
        }
    }
}

/// Next path in lexicographic order, treating the path as a binary number
/// with `H = 0`, `V = 1`.
fn successor(path: &[Step]) -> Option<Vec<Step>> {
    let last_h = path.iter().rposition(|&s| s == Step::H)?;
    let mut next = path.to_vec();
    next[last_h] = Step::V;
    for s in &mut next[last_h + 1..] {
        *s = Step::H;
    }
    Some(next)
}

/// All valid dot sets on `path`, sorted.
///
/// Boxes are visited row by row from sink 1 downward, and within a row from
/// the leftmost column (largest source) to the right. When a box is reached
/// every dot above it and to its left has been decided, so an empty box is
/// rejected exactly when its column already has a dot and its row already
/// has a dot.
fn fillings(path: &[Step]) -> Vec<LeDiagram> {
    let n = path.len();
    let sinks: GroundSubset = (1..=n).filter(|&e| path[e - 1] == Step::V).collect();
    let mut boxes = Vec::new();
    for s in sinks {
        for h in ((s + 1)..=n).rev().filter(|&h| !sinks.contains(h)) {
            boxes.push((s, h));
        }
    }

    struct Search<'a> {
        boxes: &'a [(usize, usize)],
        chosen: Vec<(usize, usize)>,
        out: Vec<Vec<(usize, usize)>>,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, columns: GroundSubset, row_dot: bool) {
            let Some(&(s, h)) = self.boxes.get(i) else {
                let mut dots = self.chosen.clone();
                dots.sort_unstable();
                self.out.push(dots);
                return;
            };
            let row_dot = row_dot && self.boxes[i - 1].0 == s;
            if !(columns.contains(h) && row_dot) {
                self.run(i + 1, columns, row_dot);
            }
            self.chosen.push((s, h));
            self.run(i + 1, columns.insert(h), true);
            self.chosen.pop();
        }
    }

    let mut search = Search {
        boxes: &boxes,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    search.run(0, GroundSubset::EMPTY, false);
    let mut out = search.out;
    out.sort_unstable();
    out.into_iter()
        .map(|dots| LeDiagram::from_sorted(n, sinks, dots))
        .collect()
}

// ---------------------------------------------------------------------------
// Catalog

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub diagram: LeDiagram,
    pub matroid: BasisMatroid,
}

/// The positroids on `1..=n`, one entry per distinct basis set.
#[derive(Clone, Debug)]
pub struct Catalog {
    n: usize,
    entries: Vec<CatalogEntry>,
    index: HashMap<BasisMatroid, usize>,
    /// Diagrams whose basis set was already cataloged, with the index of
    /// the earlier entry. Always empty unless realization is not unique.
    collisions: Vec<(LeDiagram, usize)>,
}

/// Builds the catalog of all positroids of size `n`.
pub fn catalog(n: usize) -> Result<Catalog, Error> {
    let diagrams: Vec<LeDiagram> = gen_le_diagrams(n, None)?.collect();
    let pairs = diagrams
        .into_par_iter()
        .map(|d| {
            let m = positroid(&d);
            (d, m)
        })
        .collect();
    Ok(Catalog::from_pairs(n, pairs))
}

impl Catalog {
    /// Inserts `(diagram, matroid)` pairs in order; later duplicates of a
    /// basis set become collisions.
    pub fn from_pairs(n: usize, pairs: Vec<(LeDiagram, BasisMatroid)>) -> Catalog {
        let mut catalog = Catalog {
            n,
            entries: Vec::with_capacity(pairs.len()),
            index: HashMap::with_capacity(pairs.len()),
            collisions: Vec::new(),
        };
        for (diagram, matroid) in pairs {
            catalog.insert(diagram, matroid);
        }
        catalog
    }

    fn insert(&mut self, diagram: LeDiagram, matroid: BasisMatroid) {
        match self.index.get(&matroid) {
            Some(&i) => self.collisions.push((diagram, i)),
            None => {
                self.index.insert(matroid.clone(), self.entries.len());
                self.entries.push(CatalogEntry { diagram, matroid });
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of diagrams inserted, collisions included.
    pub fn diagram_count(&self) -> usize {
        self.entries.len() + self.collisions.len()
    }

    pub fn collisions(&self) -> &[(LeDiagram, usize)] {
        &self.collisions
    }

    pub fn lookup(&self, m: &BasisMatroid) -> Option<&CatalogEntry> {
        self.index.get(m).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, m: &BasisMatroid) -> bool {
        self.index.contains_key(m)
    }

    /// One JSON object per line: `{"diagram":{..},"bases":["7","b",..]}`
    /// with basis bitmasks in hex (bit `e - 1` set for label `e`).
    pub fn write_ndjson<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.entries {
            let line = CatalogLine {
                diagram: e.diagram.clone(),
                bases: e
                    .matroid
                    .bases()
                    .iter()
                    .map(|b| format!("{:x}", b.mask()))
                    .collect(),
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads the format written by [`Catalog::write_ndjson`].
    pub fn read_ndjson<R: BufRead>(n: usize, r: R) -> Result<Catalog, Error> {
        let mut catalog = Catalog::from_pairs(n, Vec::new());
        for (i, line) in r.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::Syntax {
                line: lineno,
                msg: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: CatalogLine = serde_json::from_str(&line).map_err(|e| Error::Syntax {
                line: lineno,
                msg: e.to_string(),
            })?;
            if parsed.diagram.n() != n {
                return Err(Error::Syntax {
                    line: lineno,
                    msg: format!(
                        "diagram has n = {}, catalog has n = {n}",
                        parsed.diagram.n()
                    ),
                });
            }
            let bases = parsed
                .bases
                .iter()
                .map(|h| {
                    u64::from_str_radix(h, 16)
                        .map(GroundSubset::from_mask)
                        .map_err(|e| Error::Syntax {
                            line: lineno,
                            msg: format!("basis {h:?}: {e}"),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let matroid = BasisMatroid::new(n, bases)?;
            catalog.insert(parsed.diagram, matroid);
        }
        Ok(catalog)
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogLine {
    diagram: LeDiagram,
    bases: Vec<String>,
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Theorem,
    Corollary,
    Lemma,
    Duality,
    RankOracle,
    Axioms,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem,
        Suite::Corollary,
        Suite::Lemma,
        Suite::Duality,
        Suite::RankOracle,
        Suite::Axioms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Corollary => "corollary",
            Suite::Lemma => "lemma",
            Suite::Duality => "duality",
            Suite::RankOracle => "rank-oracle",
            Suite::Axioms => "axioms",
        }
    }

    /// Largest `n` checked when no bound is given.
    pub fn default_n(self) -> usize {
        match self {
            Suite::Theorem | Suite::Corollary => 8,
            Suite::Lemma | Suite::RankOracle | Suite::Axioms => 7,
            Suite::Duality => 6,
        }
    }

    /// `"all"` or a single suite name.
    pub fn parse_selector(s: &str) -> Result<Vec<Suite>, Error> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.parse().map(|suite| vec![suite])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub suites: Vec<Suite>,
    /// Overrides every suite's default bound.
    pub n_max: Option<usize>,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl VerifyOptions {
    pub fn new(suites: Vec<Suite>) -> Self {
        VerifyOptions {
            suites,
            ..Default::default()
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n_max = Some(n);
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    fn bound(&self, suite: Suite) -> Option<usize> {
        self.suites
            .contains(&suite)
            .then(|| self.n_max.unwrap_or_else(|| suite.default_n()))
    }
}

/// A diagram on which a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub diagram: LeDiagram,
    pub detail: String,
}

impl Failure {
    fn new(diagram: &LeDiagram, detail: impl Into<String>) -> Self {
        Failure {
            diagram: diagram.clone(),
            detail: detail.into(),
        }
    }

    fn sort_key(&self) -> (usize, String, &[(usize, usize)], &str) {
        (
            self.diagram.n(),
            self.diagram.path_string(),
            self.diagram.dots(),
            &self.detail,
        )
    }
}

impl PartialOrd for Failure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Failure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}
/// How often each sink-pair candidate was positive on connected
/// How often each candidate of the corollary was positive on connected
/// simple positroids of rank at least 3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStats {
    /// Candidate A positive (B not needed).
    pub a: usize,
    /// Candidate A not positive, candidate B positive.
    pub b: usize,
    /// Both candidates positive (a subset of `a`).
    pub both: usize,
}

impl BranchStats {
    fn merge(&mut self, other: BranchStats) {
        self.a += other.a;
        self.b += other.b;
        self.both += other.both;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub n_max: usize,
    pub diagrams_checked: usize,
    pub failures: usize,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `[1, largest n checked]`.
    pub n_range: [usize; 2],
    pub suites: Vec<SuiteSummary>,
    /// Distinct diagrams visited by at least one suite.
    pub diagrams_checked: usize,
    pub simple_rank3plus_count: usize,
    /// Positive colines that neither sink-pair candidate provided.
    pub theorem_search_fallbacks: usize,
    pub theorem_failures: Vec<Failure>,
    pub witness_failures: Vec<Failure>,
    pub lift_failures: Vec<Failure>,
    pub corollary_failures: Vec<Failure>,
    pub corollary_branch_stats: BranchStats,
    pub corollary_branch_stats_by_n: BTreeMap<usize, BranchStats>,
    pub lemma_mismatches: Vec<Failure>,
    pub duality_misses: Vec<Failure>,
    pub minor_misses: Vec<Failure>,
    pub catalog_collisions: Vec<Failure>,
    pub rank_oracle_mismatches: Vec<Failure>,
    pub axiom_violations: Vec<Failure>,
}

impl VerificationReport {
    pub fn is_success(&self) -> bool {
        self.suites.iter().all(SuiteSummary::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.suites.iter().map(|s| s.failures).sum()
    }

    fn failures_of(&self, suite: Suite) -> usize {
        match suite {
            Suite::Theorem => {
                self.theorem_failures.len() + self.witness_failures.len() + self.lift_failures.len()
            }
            Suite::Corollary => self.corollary_failures.len(),
            Suite::Lemma => self.lemma_mismatches.len(),
            Suite::Duality => {
                self.duality_misses.len() + self.minor_misses.len() + self.catalog_collisions.len()
            }
            Suite::RankOracle => self.rank_oracle_mismatches.len(),
            Suite::Axioms => self.axiom_violations.len(),
        }
    }

    fn merge(&mut self, other: VerificationReport) {
        self.simple_rank3plus_count += other.simple_rank3plus_count;
        self.theorem_search_fallbacks += other.theorem_search_fallbacks;
        self.theorem_failures.extend(other.theorem_failures);
        self.witness_failures.extend(other.witness_failures);
        self.lift_failures.extend(other.lift_failures);
        self.corollary_failures.extend(other.corollary_failures);
        self.corollary_branch_stats
            .merge(other.corollary_branch_stats);
        for (n, s) in other.corollary_branch_stats_by_n {
            self.corollary_branch_stats_by_n
                .entry(n)
                .or_default()
                .merge(s);
        }
        self.lemma_mismatches.extend(other.lemma_mismatches);
        self.duality_misses.extend(other.duality_misses);
        self.minor_misses.extend(other.minor_misses);
        self.catalog_collisions.extend(other.catalog_collisions);
        self.rank_oracle_mismatches
            .extend(other.rank_oracle_mismatches);
        self.axiom_violations.extend(other.axiom_violations);
    }

    fn sort(&mut self) {
        for list in [
            &mut self.theorem_failures,
            &mut self.witness_failures,
            &mut self.lift_failures,
            &mut self.corollary_failures,
            &mut self.lemma_mismatches,
            &mut self.duality_misses,
            &mut self.minor_misses,
            &mut self.catalog_collisions,
            &mut self.rank_oracle_mismatches,
            &mut self.axiom_violations,
        ] {
            list.sort();
        }
    }
}

/// Runs the selected suites over every diagram with `n` up to each suite's
/// bound. Failures are collected, not raised; the result does not depend
/// on the thread count.
pub fn verify(options: &VerifyOptions) -> Result<VerificationReport, Error> {
    match options.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(|| verify_in_pool(options)),
        None => verify_in_pool(options),
    }
}

fn verify_in_pool(options: &VerifyOptions) -> Result<VerificationReport, Error> {
    let mut suites: Vec<Suite> = options.suites.clone();
    suites.sort_unstable();
    suites.dedup();
    let bounds: Vec<(Suite, usize)> = suites
        .iter()
        .filter_map(|&s| options.bound(s).map(|n| (s, n)))
        .collect();
    let n_top = bounds.iter().map(|&(_, n)| n).max().unwrap_or(0);
    if let Some(&(_, n)) = bounds.iter().find(|&&(_, n)| n == 0 || n > MAX_GROUND) {
        return Err(Error::EnumerationSize(n));
    }

    let mut report = VerificationReport {
        n_range: [1.min(n_top), n_top],
        ..Default::default()
    };
    let mut checked: BTreeMap<Suite, usize> = BTreeMap::new();
    let mut previous: Option<Catalog> = None;

    for n in 1..=n_top {
        let active: Vec<Suite> = bounds
            .iter()
            .filter(|&&(_, bound)| n <= bound)
            .map(|&(s, _)| s)
            .collect();
        let diagrams: Vec<LeDiagram> = gen_le_diagrams(n, None)?.collect();
        report.diagrams_checked += diagrams.len();
        for &s in &active {
            *checked.entry(s).or_default() += diagrams.len();
        }

        let pairs: Vec<(LeDiagram, BasisMatroid)> = diagrams
            .into_par_iter()
            .map(|d| {
                let m = positroid(&d);
                (d, m)
            })
            .collect();
        let partial = pairs
            .par_iter()
            .map(|(d, m)| check_diagram(d, m, &active))
            .reduce(VerificationReport::default, |mut a, b| {
                a.merge(b);
                a
            });
        report.merge(partial);

        if active.contains(&Suite::Duality) {
            let cat = Catalog::from_pairs(n, pairs);
            report.merge(check_catalog(&cat, previous.as_ref()));
            previous = Some(cat);
        }
    }

    report.sort();
    report.suites = bounds
        .iter()
        .map(|&(suite, n_max)| SuiteSummary {
            suite,
            n_max,
            diagrams_checked: checked.get(&suite).copied().unwrap_or(0),
            failures: report.failures_of(suite),
        })
        .collect();
    Ok(report)
}

fn check_diagram(d: &LeDiagram, m: &BasisMatroid, active: &[Suite]) -> VerificationReport {
    let mut out = VerificationReport::default();
    let on = |s: Suite| active.contains(&s);

    let target = m.rank() >= 3 && m.is_simple();
    if target && (on(Suite::Theorem) || on(Suite::Corollary)) {
        out.simple_rank3plus_count = 1;
    }
    if target && on(Suite::Theorem) {
        check_theorem(d, m, &mut out);
    }
    if target && on(Suite::Corollary) && isolated_blocks(d).is_connected() {
        check_corollary(d, m, &mut out);
    }
    if on(Suite::Lemma) {
        check_lemma(d, m, &mut out);
    }
    if on(Suite::RankOracle) {
        check_rank_oracle(d, m, &mut out);
    }
    if on(Suite::Axioms) {
        check_axioms(d, m, &mut out);
    }
    out
}

fn check_theorem(d: &LeDiagram, m: &BasisMatroid, out: &mut VerificationReport) {
    let pc = match positive_coline(m, d) {
        Ok(pc) => pc,
        Err(e) => {
            out.theorem_failures.push(Failure::new(d, e.to_string()));
            return;
        }
    };
    let report = &pc.report;
    if pc.candidate == Candidate::Search {
        out.theorem_search_fallbacks += 1;
    }
    if !report.positive {
        out.theorem_failures.push(Failure::new(
            d,
            format!("returned coline {} is not positive", report.coline.elements),
        ));
    }
    match m.copoints_on(report.coline.elements) {
        Ok(direct) if direct == *report => {}
        other => {
            let detail = match other {
                Ok(direct) => format!(
                    "report on {} disagrees with copoints_on: {:?} vs {:?}",
                    report.coline.elements, report.copoints, direct.copoints
                ),
                Err(e) => e.to_string(),
            };
            let list = if pc.component.is_some() {
                &mut out.lift_failures
            } else {
                &mut out.theorem_failures
            };
            list.push(Failure::new(d, detail));
        }
    }
    match cocircuit_pair_witness(m, report) {
        Ok(w) => {
            let is_cocircuit = |c: GroundSubset| {
                let h = m.ground() - c;
                m.is_flat(h) && m.rank_of(h) + 1 == m.rank()
            };
            let delta = w.symmetric_difference();
            if delta.len() != 2 || !is_cocircuit(w.c1) || !is_cocircuit(w.c2) {
                out.witness_failures.push(Failure::new(
                    d,
                    format!(
                        "bad witness {} / {} (symmetric difference {delta})",
                        w.c1, w.c2
                    ),
                ));
            }
        }
        Err(e) => out.witness_failures.push(Failure::new(d, e.to_string())),
    }
}

fn check_corollary(d: &LeDiagram, m: &BasisMatroid, out: &mut VerificationReport) {
    let outcome = last_consecutive_sink_pair(d)
        .and_then(|pair| candidate_colines(m, pair, d.sinks()))
        .and_then(|(a, b)| {
            let a = m.copoints_on(a.elements)?;
            let b = b.map(|b| m.copoints_on(b.elements)).transpose()?;
            Ok((a, b))
        });
    let b_positive = |b: &Option<ColineReport>| b.as_ref().is_some_and(|b| b.positive);
    let stats = match outcome {
        Ok((a, b)) if a.positive => BranchStats {
            a: 1,
            b: 0,
            both: b_positive(&b) as usize,
        },
        Ok((_, b)) if b_positive(&b) => BranchStats {
            a: 0,
            b: 1,
            both: 0,
        },
        Ok((a, b)) => {
            let census = |name: &str, r: &ColineReport| {
                format!(
                    "{name} = {} has {} simple / {} multiple",
                    r.coline.elements,
                    r.simple_count(),
                    r.multiple_count()
                )
            };
            let mut detail = format!("neither candidate is positive: {}", census("A", &a));
            match &b {
                Some(b) => detail += &format!(", {}", census("B", b)),
                None => detail += ", no B",
            }
            out.corollary_failures.push(Failure::new(d, detail));
            return;
        }
        Err(e) => {
            out.corollary_failures.push(Failure::new(d, e.to_string()));
            return;
        }
    };
    out.corollary_branch_stats.merge(stats);
    out.corollary_branch_stats_by_n.insert(d.n(), stats);
}

fn check_lemma(d: &LeDiagram, m: &BasisMatroid, out: &mut VerificationReport) {
    let blocks = isolated_blocks(d).blocks;
    let comps = components(m);
    if (blocks.len() == 1) != (comps.len() <= 1) || blocks != comps {
        out.lemma_mismatches.push(Failure::new(
            d,
            format!("isolated blocks {blocks:?}, matroid components {comps:?}"),
        ));
    }
}

fn check_rank_oracle(d: &LeDiagram, m: &BasisMatroid, out: &mut VerificationReport) {
    let g = build_le_graph(d);
    let sinks = d.sinks();
    let sink_ids: Vec<usize> = sinks.iter().map(|e| g.external(e)).collect();
    let ground_ids: Vec<usize> = (1..=d.n()).map(|e| g.external(e)).collect();
    for set in d.ground().subsets() {
        let routed = rank(&g, set);
        let brute = brute_force_rank(&g, set);
        let ids: Vec<usize> = set.iter().map(|e| g.external(e)).collect();
        let gammoid = gammoid_rank(g.digraph(), &sink_ids, &ground_ids, &ids);
        let from_bases = m.rank_of(set);
        let plan_ok = max_disjoint_routing(&g, set - sinks, sinks - set).is_ok_and(|plan| {
            plan.len() + (set & sinks).len() == routed && plan.verify(&g, set - sinks, sinks - set)
        });
        if gammoid != Ok(routed) || brute != routed || from_bases != routed || !plan_ok {
            out.rank_oracle_mismatches.push(Failure::new(
                d,
                format!(
                    "{set}: routing {routed}, brute force {brute}, gammoid {gammoid:?}, \
                     bases {from_bases}, routing plan valid {plan_ok}"
                ),
            ));
            return;
        }
    }
}

fn check_axioms(d: &LeDiagram, m: &BasisMatroid, out: &mut VerificationReport) {
    let mut fail = |detail: String| out.axiom_violations.push(Failure::new(d, detail));
    let n = m.n();
    let r = m.rank();

    if m.bases().is_empty() || m.bases().iter().any(|b| b.len() != r) {
        fail("bases empty or of mixed size".into());
    }
    if let Some((b1, e, b2)) = m.exchange_violation() {
        fail(format!("basis exchange fails for {b1} - {e} against {b2}"));
    }

    let size = 1usize << n;
    let ranks: Vec<usize> = (0..size)
        .map(|mask| m.rank_of(GroundSubset::from_mask(mask as u64)))
        .collect();
    if ranks[0] != 0 {
        fail(format!("rank of the empty set is {}", ranks[0]));
    }
    'unit: for mask in 0..size {
        for e in 1..=n {
            let bit = 1usize << (e - 1);
            if mask & bit == 0 {
                let step = ranks[mask | bit] as isize - ranks[mask] as isize;
                if !(0..=1).contains(&step) {
                    fail(format!("rank jumps by {step} adding {e}"));
                    break 'unit;
                }
            }
        }
    }
    'sub: for a in 0..size {
        for b in a + 1..size {
            if ranks[a] + ranks[b] < ranks[a | b] + ranks[a & b] {
                fail(format!(
                    "submodularity fails for {} and {}",
                    GroundSubset::from_mask(a as u64),
                    GroundSubset::from_mask(b as u64)
                ));
                break 'sub;
            }
        }
    }

    let closures: Vec<GroundSubset> = (0..size)
        .map(|mask| m.closure(GroundSubset::from_mask(mask as u64)).elements)
        .collect();
    for mask in 0..size {
        let set = GroundSubset::from_mask(mask as u64);
        let cl = closures[mask];
        let by_rank: GroundSubset = (1..=n)
            .filter(|&e| ranks[mask | 1 << (e - 1)] == ranks[mask])
            .collect();
        let problem = if !set.is_subset(cl) {
            Some("not extensive")
        } else if closures[cl.mask() as usize] != cl {
            Some("not idempotent")
        } else if cl != by_rank {
            Some("disagrees with the rank function")
        } else if (1..=n).any(|e| !cl.is_subset(closures[mask | 1 << (e - 1)])) {
            Some("not monotone")
        } else {
            None
        };
        if let Some(p) = problem {
            fail(format!("closure of {set} = {cl} is {p}"));
            break;
        }
    }

    let g = build_le_graph(d);
    if loops_coloops_of(&g) != m.loops_coloops() {
        fail("graph-level loops/coloops disagree with the matroid".into());
    }
    if parallel_pairs_of(&g) != m.parallel_pairs() {
        fail("graph-level parallel pairs disagree with the matroid".into());
    }
}

/// Dual lookups in the same catalog and single-element minors in the
/// catalog one size smaller.
fn check_catalog(cat: &Catalog, smaller: Option<&Catalog>) -> VerificationReport {
    let mut out = cat
        .entries()
        .par_iter()
        .map(|e| {
            let mut out = VerificationReport::default();
            let m = &e.matroid;
            if !cat.contains(&m.dual()) {
                out.duality_misses
                    .push(Failure::new(&e.diagram, "dual is not in the catalog"));
            }
            if let Some(smaller) = smaller {
                for x in m.ground() {
                    let single = GroundSubset::singleton(x);
                    for (what, minor) in [
                        ("deletion", m.minor(single, GroundSubset::EMPTY)),
                        ("contraction", m.minor(GroundSubset::EMPTY, single)),
                    ] {
                        let found = minor.map(|mm| smaller.contains(&mm.matroid));
                        if found != Ok(true) {
                            out.minor_misses.push(Failure::new(
                                &e.diagram,
                                format!("{what} of {x} is not in the size-{} catalog", cat.n() - 1),
                            ));
                        }
                    }
                }
            }
            out
        })
        .reduce(VerificationReport::default, |mut a, b| {
            a.merge(b);
            a
        });
    for (d, i) in cat.collisions() {
        out.catalog_collisions.push(Failure::new(
            d,
            format!("same bases as {:?}", cat.entries()[*i].diagram),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{diagram, DiagramDraft};
    use crate::fixtures;

    #[test]
    fn small_counts() {
        let one: Vec<String> = gen_le_diagrams(1, None)
            .unwrap()
            .map(|d| d.path_string())
            .collect();
        assert_eq!(one, vec!["H", "V"]);
        let two: Vec<LeDiagram> = gen_le_diagrams(2, None).unwrap().collect();
        assert_eq!(
            two,
            vec![
                diagram("HH", &[]).unwrap(),
                diagram("HV", &[]).unwrap(),
                diagram("VH", &[]).unwrap(),
                diagram("VH", &[(1, 2)]).unwrap(),
                diagram("VV", &[]).unwrap(),
            ]
        );
        assert_eq!(gen_le_diagrams(2, Some(1)).unwrap().count(), 3);
        assert_eq!(
            gen_le_diagrams(0, None).err(),
            Some(Error::EnumerationSize(0))
        );
        assert_eq!(
            gen_le_diagrams(65, None).err(),
            Some(Error::EnumerationSize(65))
        );
    }

    /// Independent recount: every subset of boxes, filtered by the
    /// validating constructor.
    fn brute_force_count(n: usize) -> usize {
        let mut total = 0;
        for mask in 0u32..(1 << n) {
            let path: Vec<Step> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { Step::V } else { Step::H })
                .collect();
            let boxes: Vec<(usize, usize)> = (1..=n)
                .flat_map(|s| ((s + 1)..=n).map(move |h| (s, h)))
                .filter(|&(s, h)| path[s - 1] == Step::V && path[h - 1] == Step::H)
                .collect();
            for pick in 0u32..(1 << boxes.len()) {
                let dots: Vec<(usize, usize)> = boxes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .map(|(_, &b)| b)
                    .collect();
                let draft = DiagramDraft::new(&path, &dots).unwrap();
                if draft.validate_le_property().is_empty() {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn generator_matches_brute_force_filter() {
        for n in 1..=4 {
            assert_eq!(
                gen_le_diagrams(n, None).unwrap().count(),
                brute_force_count(n),
                "n = {n}"
            );
        }
    }

    /// Positroids on `n` labeled elements: the sum of `n! / k!` over `k`.
    fn positroid_count(n: usize) -> usize {
        (0..=n).map(|k| ((k + 1)..=n).product::<usize>()).sum()
    }

    #[test]
    fn generator_matches_closed_form_count() {
        for n in 1..=8 {
            assert_eq!(
                gen_le_diagrams(n, None).unwrap().count(),
                positroid_count(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn generator_order_and_contents() {
        let all: Vec<LeDiagram> = gen_le_diagrams(5, None).unwrap().collect();
        for w in all.windows(2) {
            let key = |d: &LeDiagram| (d.path_string(), d.dots().to_vec());
            assert!(key(&w[0]) < key(&w[1]));
        }
        let seven: Vec<LeDiagram> = gen_le_diagrams(7, None).unwrap().collect();
        for d in [
            fixtures::fig2(),
            fixtures::fig3(),
            fixtures::fig4(),
            fixtures::fig7(),
        ] {
            assert!(seven.contains(&d), "{d:?}");
        }
    }

    #[test]
    fn catalogs() {
        let c1 = catalog(1).unwrap();
        assert_eq!(c1.len(), 2);
        assert_eq!(catalog(2).unwrap().len(), 5);

        let c = catalog(5).unwrap();
        assert!(c.collisions().is_empty());
        assert_eq!(c.len(), c.diagram_count());

        let mut buf = Vec::new();
        c.write_ndjson(&mut buf).unwrap();
        let back = Catalog::read_ndjson(5, buf.as_slice()).unwrap();
        assert_eq!(back.entries(), c.entries());

        assert!(Catalog::read_ndjson(5, &b"{\"diagram\":1}\n"[..]).is_err());
    }

    #[test]
    fn fig2_line_format() {
        let d = fixtures::fig2();
        let cat = Catalog::from_pairs(7, vec![(d.clone(), positroid(&d))]);
        let mut buf = Vec::new();
        cat.write_ndjson(&mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(line.starts_with(r#"{"diagram":{"n":7,"r":3,"path":"HVVHVHH","#));
        // {2,3,5} is bits 1, 2 and 4.
        assert!(line.contains(r#""bases":["16","#));
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_selector("all").unwrap().len(), 6);
        assert_eq!(
            Suite::parse_selector("rank-oracle").unwrap(),
            vec![Suite::RankOracle]
        );
        assert_eq!(
            Suite::parse_selector("nope"),
            Err(Error::UnknownSuite("nope".into()))
        );
        assert_eq!(
            serde_json::to_string(&Suite::RankOracle).unwrap(),
            r#""rank-oracle""#
        );
    }

    #[test]
    fn small_verification_is_clean_and_deterministic() {
        let opts = VerifyOptions::new(Suite::ALL.to_vec()).with_n(5);
        let one = verify(&opts.clone().with_threads(1)).unwrap();
        let many = verify(&opts.with_threads(4)).unwrap();
        assert_eq!(one, many);
        assert!(one.is_success(), "{one:#?}");
        assert_eq!(one.n_range, [1, 5]);
        assert_eq!(one.diagrams_checked, 2 + 5 + 16 + 65 + 326);
        assert!(one.simple_rank3plus_count > 0);
    }
}
