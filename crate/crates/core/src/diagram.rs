//! Le-diagrams: a lattice path from the Northeast to the Southwest corner
//! with dotted boxes above it.
//!
//! Labels `1..=n` are assigned to the path edges in NE→SW order. A vertical
//! edge is a *sink* and owns a row of boxes; a horizontal edge is a *source*
//! and owns a column. The box in row `s` and column `h` exists exactly when
//! `s < h`, so a dot is addressed by the pair `(s, h)`.
//!
//! Within a row, larger source labels lie further left; within a column,
//! smaller sink labels lie further up.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::subset::{GroundSubset, MAX_GROUND};

/// One edge of the lattice path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Horizontal edge (source).
    H,
    /// Vertical edge (sink).
    V,
}

impl Step {
    pub fn symbol(self) -> char {
        match self {
            Step::H => 'H',
            Step::V => 'V',
        }
    }
}

/// An empty box together with the dots that make it illegal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LeViolation {
    pub empty: (usize, usize),
    /// Nearest dot above the box in its column.
    pub above: (usize, usize),
    /// Nearest dot left of the box in its row.
    pub left: (usize, usize),
}

/// A lattice path with dots that has passed the structural checks (labels,
/// box existence, duplicates) but whose Le-property has not been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramDraft {
    n: usize,
    sinks: GroundSubset,
    dots: Vec<(usize, usize)>,
}

impl DiagramDraft {
    pub fn new(path: &[Step], dots: &[(usize, usize)]) -> Result<Self, Error> {
        let n = path.len();
        if n > MAX_GROUND {
            return Err(Error::SizeOutOfRange(n));
        }
        let sinks: GroundSubset = path
            .iter()
            .enumerate()
            .filter(|(_, st)| **st == Step::V)
            .map(|(i, _)| i + 1)
            .collect();
        let mut sorted = Vec::with_capacity(dots.len());
        for &(s, h) in dots {
            if s == 0 || s > n || !sinks.contains(s) {
                return Err(Error::DotRowNotSink { s, h });
            }
            if h == 0 || h > n || sinks.contains(h) {
                return Err(Error::DotColumnNotSource { s, h });
            }
            if s > h {
                return Err(Error::DotOutsideDiagram { s, h });
            }
            sorted.push((s, h));
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateDot {
                s: w[0].0,
                h: w[0].1,
            });
        }
        Ok(DiagramDraft {
            n,
            sinks,
            dots: sorted,
        })
    }

    /// Every empty box that has a dot above it in its column and a dot to its
    /// left in its row. Empty iff the Le-property holds.
    pub fn validate_le_property(&self) -> Vec<LeViolation> {
        le_violations(self.n, self.sinks, &self.dots)
    }

    pub fn into_diagram(self) -> Result<LeDiagram, Error> {
        if let Some(v) = self.validate_le_property().first() {
            return Err(Error::LeViolation(*v));
        }
        Ok(LeDiagram::from_sorted(self.n, self.sinks, self.dots))
    }
}

fn le_violations(n: usize, sinks: GroundSubset, dots: &[(usize, usize)]) -> Vec<LeViolation> {
    let rows = row_masks(n, dots);
    let sources = GroundSubset::full(n) - sinks;
    let mut out = Vec::new();
    for s in sinks {
        for h in sources.iter().filter(|&h| h > s) {
            if rows[s].contains(h) {
                continue;
            }
            let above = sinks
                .iter()
                .filter(|&t| t < s && rows[t].contains(h))
                .last();
            let left = rows[s].iter().find(|&g| g > h);
            if let (Some(a), Some(l)) = (above, left) {
                out.push(LeViolation {
                    empty: (s, h),
                    above: (a, h),
                    left: (s, l),
                });
            }
        }
    }
    out
}

fn row_masks(n: usize, dots: &[(usize, usize)]) -> Vec<GroundSubset> {
    let mut rows = vec![GroundSubset::EMPTY; n + 1];
    for &(s, h) in dots {
        rows[s] = rows[s].insert(h);
    }
    rows
}

/// A valid Le-diagram. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LeDiagram {
    n: usize,
    sinks: GroundSubset,
    /// Sorted `(sink, source)` pairs.
    dots: Vec<(usize, usize)>,
}

impl LeDiagram {
    /// Validating constructor.
    pub fn new(path: &[Step], dots: &[(usize, usize)]) -> Result<Self, Error> {
        DiagramDraft::new(path, dots)?.into_diagram()
    }

    /// Constructor for callers that already guarantee validity (the
    /// enumerator). `dots` must be sorted.
    pub(crate) fn from_sorted(n: usize, sinks: GroundSubset, dots: Vec<(usize, usize)>) -> Self {
        debug_assert!(dots.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(le_violations(n, sinks, &dots).is_empty());
        LeDiagram { n, sinks, dots }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.sinks.len()
    }

    pub fn sinks(&self) -> GroundSubset {
        self.sinks
    }

    pub fn sources(&self) -> GroundSubset {
        self.ground() - self.sinks
    }

    pub fn ground(&self) -> GroundSubset {
        GroundSubset::full(self.n)
    }

    pub fn is_sink(&self, label: usize) -> bool {
        self.sinks.contains(label)
    }

    pub fn is_source(&self, label: usize) -> bool {
        label >= 1 && label <= self.n && !self.sinks.contains(label)
    }

    pub fn dots(&self) -> &[(usize, usize)] {
        &self.dots
    }

    pub fn has_dot(&self, s: usize, h: usize) -> bool {
        self.dots.binary_search(&(s, h)).is_ok()
    }

    pub fn steps(&self) -> Vec<Step> {
        (1..=self.n)
            .map(|e| {
                if self.sinks.contains(e) {
                    Step::V
                } else {
                    Step::H
                }
            })
            .collect()
    }

    pub fn path_string(&self) -> String {
        self.steps().into_iter().map(Step::symbol).collect()
    }

    /// Source labels `h` whose column holds a dot in row `s`.
    pub fn row(&self, s: usize) -> GroundSubset {
        self.dots.iter().filter(|d| d.0 == s).map(|d| d.1).collect()
    }

    /// Sink labels `s` whose row holds a dot in column `h`.
    pub fn column(&self, h: usize) -> GroundSubset {
        self.dots.iter().filter(|d| d.1 == h).map(|d| d.0).collect()
    }

    /// The diagram restricted to the labels of `keep`, relabeled
    /// order-preservingly. Dots survive when both ends are kept.
    ///
    /// The Le-property is inherited: a box that is empty in the restriction
    /// was already empty, and its witness dots were already present.
    pub fn restrict(&self, keep: GroundSubset) -> LeDiagram {
        let labels = keep.to_vec();
        let relabel = |e: usize| labels.binary_search(&e).map(|i| i + 1).ok();
        let sinks = (self.sinks & keep)
            .iter()
            .filter_map(relabel)
            .collect::<GroundSubset>();
        let dots = self
            .dots
            .iter()
            .filter_map(|&(s, h)| Some((relabel(s)?, relabel(h)?)))
            .collect::<Vec<_>>();
        LeDiagram::from_sorted(labels.len(), sinks, dots)
    }

    /// Canonical `.led` text.
    pub fn to_led(&self) -> String {
        let mut out = format!("{} {}\n{}\n", self.n, self.rank(), self.path_string());
        for (s, h) in &self.dots {
            out.push_str(&format!("{s} {h}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DiagramJson::from(self)).expect("diagram JSON is infallible")
    }
}

impl fmt::Debug for LeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dots: Vec<String> = self
            .dots
            .iter()
            .map(|(s, h)| format!("({s},{h})"))
            .collect();
        write!(
            f,
            "LeDiagram(n={}, r={}, path={}, dots={{{}}})",
            self.n,
            self.rank(),
            self.path_string(),
            dots.join(",")
        )
    }
}

/// JSON mirror of the `.led` format.
#[derive(Serialize, Deserialize)]
struct DiagramJson {
    n: usize,
    r: usize,
    path: String,
    dots: Vec<[usize; 2]>,
}

impl From<&LeDiagram> for DiagramJson {
    fn from(d: &LeDiagram) -> Self {
        DiagramJson {
            n: d.n,
            r: d.rank(),
            path: d.path_string(),
            dots: d.dots.iter().map(|&(s, h)| [s, h]).collect(),
        }
    }
}

impl Serialize for LeDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagramJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LeDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = DiagramJson::deserialize(d)?;
        from_parts(
            raw.n,
            raw.r,
            &raw.path,
            raw.dots.iter().map(|d| (d[0], d[1])),
        )
        .map_err(serde::de::Error::custom)
    }
}

fn parse_path(path: &str, line: usize) -> Result<Vec<Step>, Error> {
    path.chars()
        .map(|c| match c {
            'V' | 'v' => Ok(Step::V),
            'H' | 'h' => Ok(Step::H),
            other => Err(Error::Syntax {
                line,
                msg: format!("unexpected path symbol {other:?}; expected V or H"),
            }),
        })
        .collect()
}

fn from_parts(
    n: usize,
    r: usize,
    path: &str,
    dots: impl Iterator<Item = (usize, usize)>,
) -> Result<LeDiagram, Error> {
    if n > MAX_GROUND {
        return Err(Error::SizeOutOfRange(n));
    }
    let steps = parse_path(path, 2)?;
    if steps.len() != n {
        return Err(Error::PathLengthMismatch {
            expected: n,
            found: steps.len(),
        });
    }
    let vertical = steps.iter().filter(|s| **s == Step::V).count();
    if vertical != r {
        return Err(Error::RankMismatch {
            expected: r,
            found: vertical,
        });
    }
    let dots: Vec<_> = dots.collect();
    LeDiagram::new(&steps, &dots)
}

/// Parses a diagram in `.led` format, or its JSON mirror when the text
/// starts with `{`.
pub fn parse_le_diagram(text: &str) -> Result<LeDiagram, Error> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()));
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Syntax {
        line: 1,
        msg: "missing header line `n r`".into(),
    })?;
    let nums = parse_ints(header, hline)?;
    let [n, r] = nums[..] else {
        return Err(Error::Syntax {
            line: hline,
            msg: "header must be `n r`".into(),
        });
    };

    // An all-empty path (n = 0) has no path line.
    let (pline, path) = if n == 0 {
        (hline + 1, "")
    } else {
        lines.next().ok_or(Error::Syntax {
            line: hline + 1,
            msg: "missing lattice path line".into(),
        })?
    };
    if n > MAX_GROUND {
        return Err(Error::SizeOutOfRange(n));
    }
    let steps = parse_path(path, pline)?;
    if steps.len() != n {
        return Err(Error::PathLengthMismatch {
            expected: n,
            found: steps.len(),
        });
    }

    let mut dots = Vec::new();
    for (line, l) in lines {
        let nums = parse_ints(l, line)?;
        let [s, h] = nums[..] else {
            return Err(Error::Syntax {
                line,
                msg: "dot lines must be `s h`".into(),
            });
        };
        dots.push((s, h));
    }
    let vertical = steps.iter().filter(|s| **s == Step::V).count();
    if vertical != r {
        return Err(Error::RankMismatch {
            expected: r,
            found: vertical,
        });
    }
    LeDiagram::new(&steps, &dots)
}

fn parse_ints(text: &str, line: usize) -> Result<Vec<usize>, Error> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Syntax {
                line,
                msg: format!("expected a non-negative integer, found {t:?}"),
            })
        })
        .collect()
}

impl FromStr for LeDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_le_diagram(s)
    }
}

/// Shorthand used by tests and fixtures: `diagram("VVHH", &[(1, 3)])`.
pub fn diagram(path: &str, dots: &[(usize, usize)]) -> Result<LeDiagram, Error> {
    let steps = parse_path(path, 2)?;
    LeDiagram::new(&steps, dots)
}
