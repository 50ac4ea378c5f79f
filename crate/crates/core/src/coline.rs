//! Positive colines of simple positroids of rank at least 3.
//!
//! Let `v_i, v_{i+1}` be the last two adjacent sinks on the lattice path and
//! `v_{i+2}` the next sink after them. On a connected simple positroid the
//! candidates are
//!
//! * `A = cl(V \ {v_i, v_{i+1}})`
//! * `B = cl(V \ {v_i, v_{i+2}})`
//!
//! and the first positive one (more simple than multiple copoints on it) is
//! returned. The two candidates do not always suffice: there are connected
//! simple positroids of size 8 where both tie at two simple and two multiple
//! copoints (see [`fixtures::tie8`](crate::fixtures::tie8)). Those fall back to
//! an exhaustive search over all colines.
//!
//! Disconnected inputs are handled component-wise: a positive coline `L` of
//! one summand lifts to `L ∪ rest` on the whole matroid with the same copoint
//! census.

use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::diagram::LeDiagram;
use crate::error::Error;
use crate::matroid::{BasisMatroid, ColineReport, Copoint, Flat};
use crate::structure::{isolated_blocks, split};
use crate::subset::GroundSubset;

/// The last pair of adjacent sinks and the sink after them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SinkPair {
    pub first: usize,
    pub second: usize,
    pub after: Option<usize>,
}

/// Largest `i` with both `i` and `i + 1` sinks. In a run of three or more
/// sinks this picks the two highest-labeled ones.
pub fn last_consecutive_sink_pair(d: &LeDiagram) -> Result<SinkPair, Error> {
    let sinks = d.sinks();
    let first = (1..d.n())
        .rev()
        .find(|&i| sinks.contains(i) && sinks.contains(i + 1))
        .ok_or(Error::NoConsecutiveSinks)?;
    let second = first + 1;
    let after = sinks.iter().find(|&v| v > second);
    Ok(SinkPair {
        first,
        second,
        after,
    })
}

/// `(A, B)`: the closures of the sink basis minus `{v_i, v_{i+1}}` and minus
/// `{v_i, v_{i+2}}` (the latter only when `v_{i+2}` exists).
pub fn candidate_colines(
    m: &BasisMatroid,
    pair: SinkPair,
    sinks: GroundSubset,
) -> Result<(Flat, Option<Flat>), Error> {
    if m.rank() < 3 {
        return Err(Error::RankTooSmall(m.rank()));
    }
    let base = sinks.remove(pair.first);
    let a = m.closure(base.remove(pair.second));
    let b = pair.after.map(|v| m.closure(base.remove(v)));
    debug_assert_eq!(a.rank, m.rank() - 2);
    debug_assert!(b.is_none_or(|b| b.rank == m.rank() - 2));
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Candidate {
    A,
    B,
    /// Neither candidate was positive; found by trying every coline.
    #[serde(rename = "search")]
    Search,
    /// Rank-2 summand: its only coline is the closure of the empty set.
    #[serde(rename = "rank-two")]
    RankTwo,
}

/// Result of [`positive_coline`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveColine {
    /// The positive coline on the whole matroid.
    pub report: ColineReport,
    /// Which construction produced it (within `component` when lifted).
    pub candidate: Candidate,
    /// Candidates evaluated and found not positive, in order.
    pub rejected: Vec<ColineReport>,
    /// The summand the coline was built in, for disconnected inputs.
    pub component: Option<GroundSubset>,
}

impl Serialize for PositiveColine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PositiveColine", 8)?;
        st.serialize_field("coline", &self.report.coline.elements)?;
        st.serialize_field("copoints", &self.report.copoints)?;
        st.serialize_field("positive", &self.report.positive)?;
        st.serialize_field("candidate", &self.candidate)?;
        st.serialize_field("simple", &self.report.simple_count())?;
        st.serialize_field("multiple", &self.report.multiple_count())?;
        st.serialize_field("component", &self.component)?;
        st.serialize_field(
            "rejected",
            &self
                .rejected
                .iter()
                .map(|r| r.coline.elements)
                .collect::<Vec<_>>(),
        )?;
        st.end()
    }
}

/// Produces a positive coline of the simple positroid `m` of rank >= 3
/// presented by `d`.
///
/// A simple positroid of rank >= 3 without any positive coline would
/// contradict the theorem this construction rests on; it is reported as
/// [`Error::TheoremViolation`] with a diagnostic dump.
pub fn positive_coline(m: &BasisMatroid, d: &LeDiagram) -> Result<PositiveColine, Error> {
    if m.rank() < 3 {
        return Err(Error::RankTooSmall(m.rank()));
    }
    let (loops, _) = m.loops_coloops();
    let parallel = m.parallel_pairs().len();
    if !loops.is_empty() || parallel > 0 {
        return Err(Error::NotSimple { loops, parallel });
    }

    let blocks = isolated_blocks(d);
    if blocks.is_connected() || m.rank() == m.n() {
        // A free matroid has only coloop summands; candidate A still applies
        // to it and gives two simple copoints and no multiple one.
        return connected_positive_coline(m, d);
    }

    for comp in split(m, d) {
        let rank = comp.matroid.rank();
        let found = match rank {
            0 | 1 => continue,
            2 => {
                let line = comp.matroid.closure(GroundSubset::EMPTY).elements;
                let report = comp.matroid.copoints_on(line)?;
                if !report.positive {
                    continue;
                }
                PositiveColine {
                    report,
                    candidate: Candidate::RankTwo,
                    rejected: Vec::new(),
                    component: None,
                }
            }
            _ => connected_positive_coline(&comp.matroid, &comp.diagram)?,
        };
        let rest = m.ground() - comp.labels;
        let rest_rank = m.rank() - rank;
        let lift_report = |r: &ColineReport| {
            relabel_report(r, |s| comp.lift(s)).and_then(|r| lift_coline(&r, rest, rest_rank))
        };
        return Ok(PositiveColine {
            report: lift_report(&found.report)?,
            candidate: found.candidate,
            rejected: found
                .rejected
                .iter()
                .map(lift_report)
                .collect::<Result<_, _>>()?,
            component: Some(comp.labels),
        });
    }
    unreachable!("a simple matroid of rank >= 3 that is not free has a summand of rank >= 2")
}

fn connected_positive_coline(m: &BasisMatroid, d: &LeDiagram) -> Result<PositiveColine, Error> {
    let pair = last_consecutive_sink_pair(d)?;
    let (a, b) = candidate_colines(m, pair, d.sinks())?;
    let mut rejected = Vec::new();
    for (candidate, flat) in [(Candidate::A, Some(a)), (Candidate::B, b)] {
        let Some(flat) = flat else { continue };
        let report = m.copoints_on(flat.elements)?;
        if report.positive {
            return Ok(PositiveColine {
                report,
                candidate,
                rejected,
                component: None,
            });
        }
        rejected.push(report);
    }
    match search_positive_coline(m)? {
        Some(report) => Ok(PositiveColine {
            report,
            candidate: Candidate::Search,
            rejected,
            component: None,
        }),
        None => Err(Error::TheoremViolation(diagnostic(m, d, pair, &rejected))),
    }
}

/// The positive coline whose label list is lexicographically smallest.
pub fn search_positive_coline(m: &BasisMatroid) -> Result<Option<ColineReport>, Error> {
    let mut lines: Vec<GroundSubset> = m.colines().into_iter().map(|f| f.elements).collect();
    lines.sort_by(|a, b| a.lex_cmp(*b));
    for line in lines {
        let report = m.copoints_on(line)?;
        if report.positive {
            return Ok(Some(report));
        }
    }
    Ok(None)
}

fn diagnostic(
    m: &BasisMatroid,
    d: &LeDiagram,
    pair: SinkPair,
    rejected: &[ColineReport],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "diagram:\n{}", d.to_led().trim_end());
    let _ = writeln!(out, "sink pair: {pair:?}");
    let _ = writeln!(out, "bases ({}): {:?}", m.bases().len(), m.bases());
    let census = |r: &ColineReport| {
        format!(
            "{} simple {:?} / {} multiple {:?}",
            r.simple_count(),
            r.simple().collect::<Vec<_>>(),
            r.multiple_count(),
            r.multiple().collect::<Vec<_>>()
        )
    };
    for r in rejected {
        let _ = writeln!(out, "rejected {}: {}", r.coline.elements, census(r));
    }
    let _ = write!(out, "colines searched: {}", m.colines().len());
    out
}

/// Renames every set in a report through `map`.
fn relabel_report(
    r: &ColineReport,
    map: impl Fn(GroundSubset) -> GroundSubset,
) -> Result<ColineReport, Error> {
    Ok(ColineReport {
        coline: Flat {
            elements: map(r.coline.elements),
            rank: r.coline.rank,
        },
        copoints: r
            .copoints
            .iter()
            .map(|c| Copoint {
                set: map(c.set),
                kind: c.kind,
            })
            .collect(),
        positive: r.positive,
    })
}

/// Lifts a coline report of one summand to the direct sum with `rest`
/// (of rank `rest_rank`): every set gains `rest`, classifications stay.
pub fn lift_coline(
    report: &ColineReport,
    rest: GroundSubset,
    rest_rank: usize,
) -> Result<ColineReport, Error> {
    let covered = report
        .copoints
        .iter()
        .fold(report.coline.elements, |acc, c| acc | c.set);
    let overlap = covered & rest;
    if !overlap.is_empty() {
        return Err(Error::OverlappingLift(overlap));
    }
    let coline = Flat {
        elements: report.coline.elements | rest,
        rank: report.coline.rank + rest_rank,
    };
    Ok(ColineReport::new(
        coline,
        report.copoints.iter().map(|c| c.set | rest),
    ))
}

/// Complements of two simple copoints on the same coline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocircuitPairWitness {
    pub coline: GroundSubset,
    pub c1: GroundSubset,
    pub c2: GroundSubset,
}

impl CocircuitPairWitness {
    pub fn symmetric_difference(&self) -> GroundSubset {
        self.c1 ^ self.c2
    }
}

/// `{"coline":[..],"cocircuits":[[..],[..]],"symdiff":[e,f]}`
impl Serialize for CocircuitPairWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CocircuitPairWitness", 3)?;
        st.serialize_field("coline", &self.coline)?;
        st.serialize_field("cocircuits", &[self.c1, self.c2])?;
        st.serialize_field("symdiff", &self.symmetric_difference())?;
        st.end()
    }
}

/// Takes the two lexicographically smallest simple copoints `L ∪ e`,
/// `L ∪ f` and returns their complements, which differ exactly in `{e, f}`.
pub fn cocircuit_pair_witness(
    m: &BasisMatroid,
    report: &ColineReport,
) -> Result<CocircuitPairWitness, Error> {
    let mut simple: Vec<GroundSubset> = report.simple().collect();
    if simple.len() < 2 {
        return Err(Error::TooFewSimpleCopoints {
            coline: report.coline.elements,
            found: simple.len(),
        });
    }
    simple.sort_by(|a, b| a.lex_cmp(*b));
    Ok(CocircuitPairWitness {
        coline: report.coline.elements,
        c1: m.ground() - simple[0],
        c2: m.ground() - simple[1],
    })
}
