//! Matroid computations over an explicit list of bases: rank, closure,
//! flats, circuits, copoints on colines, simplicity data, duals and minors.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::Error;
use crate::subset::{GroundSubset, MAX_GROUND};

/// A matroid on `1..=n` given by its bases, kept sorted by mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisMatroid {
    n: usize,
    rank: usize,
    bases: Vec<GroundSubset>,
}

impl BasisMatroid {
    /// Validates cardinalities and the ground set; the exchange axiom is
    /// checked separately by [`BasisMatroid::exchange_violation`].
    pub fn new(n: usize, bases: Vec<GroundSubset>) -> Result<Self, Error> {
        if n > MAX_GROUND {
            return Err(Error::SizeOutOfRange(n));
        }
        let ground = GroundSubset::full(n);
        let Some(first) = bases.first() else {
            return Err(Error::Syntax {
                line: 0,
                msg: "a matroid needs at least one basis".into(),
            });
        };
        let rank = first.len();
        for b in &bases {
            if let Some(e) = (*b - ground).first() {
                return Err(Error::LabelOutOfRange { label: e, n });
            }
            if b.len() != rank {
                return Err(Error::Syntax {
                    line: 0,
                    msg: format!("basis {b} does not have {rank} elements"),
                });
            }
        }
        let mut bases = bases;
        bases.sort_unstable();
        bases.dedup();
        Ok(BasisMatroid { n, rank, bases })
    }

    pub(crate) fn from_sorted_bases(n: usize, rank: usize, bases: Vec<GroundSubset>) -> Self {
        debug_assert!(!bases.is_empty());
        debug_assert!(bases.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(bases.iter().all(|b| b.len() == rank));
        BasisMatroid { n, rank, bases }
    }

    /// The free matroid on `n` elements (every element a coloop).
    pub fn free(n: usize) -> Self {
        BasisMatroid::from_sorted_bases(n, n, vec![GroundSubset::full(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground(&self) -> GroundSubset {
        GroundSubset::full(self.n)
    }

    pub fn bases(&self) -> &[GroundSubset] {
        &self.bases
    }

    pub fn is_basis(&self, set: GroundSubset) -> bool {
        self.bases.binary_search(&set).is_ok()
    }

    pub fn is_independent(&self, set: GroundSubset) -> bool {
        self.bases.iter().any(|b| set.is_subset(*b))
    }

    pub fn rank_of(&self, set: GroundSubset) -> usize {
        let cap = set.len().min(self.rank);
        let mut best = 0;
        for b in &self.bases {
            best = best.max((set & *b).len());
            if best == cap {
                break;
            }
        }
        best
    }

    pub fn closure(&self, set: GroundSubset) -> Flat {
        let rank = self.rank_of(set);
        let elements = (self.ground() - set)
            .iter()
            .filter(|&e| self.rank_of(set.insert(e)) == rank)
            .fold(set, |acc, e| acc.insert(e));
        Flat { elements, rank }
    }

    pub fn is_flat(&self, set: GroundSubset) -> bool {
        self.closure(set).elements == set
    }

    /// All flats of rank `k`, ascending by mask.
    pub fn flats_of_rank(&self, k: usize) -> Result<Vec<Flat>, Error> {
        if k > self.rank {
            return Err(Error::RankOutOfRange { k, r: self.rank });
        }
        let mut level = vec![self.closure(GroundSubset::EMPTY)];
        for _ in 0..k {
            let mut next: Vec<Flat> = level
                .iter()
                .flat_map(|f| {
                    (self.ground() - f.elements)
                        .iter()
                        .map(move |e| self.closure(f.elements.insert(e)))
                })
                .collect();
            next.sort_unstable_by_key(|f| f.elements);
            next.dedup();
            level = next;
        }
        Ok(level)
    }

    /// Flats of rank `r - 2`.
    pub fn colines(&self) -> Vec<Flat> {
        match self.rank.checked_sub(2) {
            Some(k) => self.flats_of_rank(k).expect("k <= r"),
            None => Vec::new(),
        }
    }

    /// All minimal dependent sets, ascending by mask. Exponential in `n`.
    pub fn circuits(&self) -> Vec<GroundSubset> {
        let indep = self.independence_table();
        let is_indep = |s: GroundSubset| indep[s.mask() as usize];
        let mut out = Vec::new();
        for set in self.ground().subsets() {
            if set.len() > self.rank + 1 || is_indep(set) {
                continue;
            }
            if set.iter().all(|e| is_indep(set.remove(e))) {
                out.push(set);
            }
        }
        out
    }

    /// Independence flag for every subset of the ground set, indexed by mask.
    /// Only available for `n <= 24`.
    pub fn independence_table(&self) -> Vec<bool> {
        assert!(self.n <= 24, "independence table needs n <= 24");
        let mut table = vec![false; 1usize << self.n];
        for b in &self.bases {
            table[b.mask() as usize] = true;
        }
        // Push independence down one element at a time, largest masks first.
        for mask in (0..table.len()).rev() {
            if table[mask] {
                continue;
            }
            let missing = !mask & (table.len() - 1);
            let mut bits = missing;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                if table[mask | bit] {
                    table[mask] = true;
                    break;
                }
                bits &= bits - 1;
            }
        }
        table
    }

    /// Groups the elements outside the coline `line` into the copoints on it.
    pub fn copoints_on(&self, line: GroundSubset) -> Result<ColineReport, Error> {
        let expected = self.rank.checked_sub(2).ok_or(Error::NotAColine {
            set: line,
            expected: 0,
        })?;
        let coline = self.closure(line);
        if coline.elements != line || coline.rank != expected {
            return Err(Error::NotAColine {
                set: line,
                expected,
            });
        }
        let mut groups: BTreeMap<GroundSubset, GroundSubset> = BTreeMap::new();
        for e in self.ground() - line {
            let h = self.closure(line.insert(e));
            debug_assert_eq!(h.rank, expected + 1);
            *groups.entry(h.elements).or_default() |= GroundSubset::singleton(e);
        }
        Ok(ColineReport::new(coline, groups.into_keys()))
    }

    /// Elements in no basis and elements in every basis.
    pub fn loops_coloops(&self) -> (GroundSubset, GroundSubset) {
        let union = self
            .bases
            .iter()
            .fold(GroundSubset::EMPTY, |acc, b| acc | *b);
        let inter = self.bases.iter().fold(self.ground(), |acc, b| acc & *b);
        (self.ground() - union, inter)
    }

    /// Pairs `(e, f)`, `e < f`, of non-loops spanning a rank-1 set.
    pub fn parallel_pairs(&self) -> Vec<(usize, usize)> {
        let (loops, _) = self.loops_coloops();
        let live: Vec<usize> = (self.ground() - loops).iter().collect();
        let mut out = Vec::new();
        for (i, &e) in live.iter().enumerate() {
            for &f in &live[i + 1..] {
                if self.rank_of(GroundSubset::singleton(e).insert(f)) == 1 {
                    out.push((e, f));
                }
            }
        }
        out
    }

    /// No loops and no parallel pairs.
    pub fn is_simple(&self) -> bool {
        self.loops_coloops().0.is_empty() && self.parallel_pairs().is_empty()
    }

    pub fn dual(&self) -> BasisMatroid {
        let ground = self.ground();
        let mut bases: Vec<GroundSubset> = self.bases.iter().map(|b| ground - *b).collect();
        bases.sort_unstable();
        BasisMatroid::from_sorted_bases(self.n, self.n - self.rank, bases)
    }

    /// `M / contract \ delete`, relabeled order-preservingly onto `1..=n'`.
    pub fn minor(&self, delete: GroundSubset, contract: GroundSubset) -> Result<Minor, Error> {
        let ground = self.ground();
        if let Some(e) = ((delete | contract) - ground).first() {
            return Err(Error::LabelOutOfRange {
                label: e,
                n: self.n,
            });
        }
        let overlap = delete & contract;
        if !overlap.is_empty() {
            return Err(Error::OverlappingMinor(overlap));
        }

        // Contraction keeps bases meeting `contract` in a maximal set.
        let rc = self.rank_of(contract);
        let contracted: Vec<GroundSubset> = self
            .bases
            .iter()
            .filter(|b| (**b & contract).len() == rc)
            .map(|b| *b - contract)
            .collect();
        // Deletion keeps those meeting `delete` as little as possible.
        let least = contracted
            .iter()
            .map(|b| (*b & delete).len())
            .min()
            .expect("a matroid has a basis");
        let kept: Vec<GroundSubset> = contracted
            .into_iter()
            .filter(|b| (*b & delete).len() == least)
            .collect();

        let labels: Vec<usize> = (ground - delete - contract).iter().collect();
        let relabel = |set: GroundSubset| -> GroundSubset {
            labels
                .iter()
                .enumerate()
                .filter(|(_, &old)| set.contains(old))
                .map(|(i, _)| i + 1)
                .collect()
        };
        let mut bases: Vec<GroundSubset> = kept.into_iter().map(relabel).collect();
        bases.sort_unstable();
        bases.dedup();
        let rank = bases[0].len();
        Ok(Minor {
            matroid: BasisMatroid::from_sorted_bases(labels.len(), rank, bases),
            labels,
        })
    }

    /// The restriction to `keep` (deleting everything else), relabeled.
    pub fn restrict(&self, keep: GroundSubset) -> Minor {
        self.minor(self.ground() - keep, GroundSubset::EMPTY)
            .expect("restriction is always a valid minor")
    }

    /// A triple `(b1, e, b2)` violating basis exchange, if any.
    pub fn exchange_violation(&self) -> Option<(GroundSubset, usize, GroundSubset)> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for e in b1 - b2 {
                    let base = b1.remove(e);
                    if !(b2 - b1).iter().any(|f| self.is_basis(base.insert(f))) {
                        return Some((b1, e, b2));
                    }
                }
            }
        }
        None
    }
}

/// A minor together with the original label of each new element
/// (`labels[i]` is the old name of element `i + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub matroid: BasisMatroid,
    pub labels: Vec<usize>,
}

impl Minor {
    /// Maps a subset of the minor's ground set back to original labels.
    pub fn lift(&self, set: GroundSubset) -> GroundSubset {
        set.iter().map(|e| self.labels[e - 1]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Flat {
    pub elements: GroundSubset,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CopointKind {
    Simple,
    Multiple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Copoint {
    pub set: GroundSubset,
    pub kind: CopointKind,
}

/// The copoints on a coline with their simple/multiple classification.
///
/// Copoints are listed simple first, each group in lexicographic order of
/// the label lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColineReport {
    pub coline: Flat,
    pub copoints: Vec<Copoint>,
    pub positive: bool,
}

impl ColineReport {
    pub(crate) fn new(coline: Flat, copoints: impl IntoIterator<Item = GroundSubset>) -> Self {
        let mut copoints: Vec<Copoint> = copoints
            .into_iter()
            .map(|set| Copoint {
                set,
                kind: if (set - coline.elements).len() == 1 {
                    CopointKind::Simple
                } else {
                    CopointKind::Multiple
                },
            })
            .collect();
        copoints.sort_by(|a, b| {
            (a.kind == CopointKind::Multiple)
                .cmp(&(b.kind == CopointKind::Multiple))
                .then(a.set.lex_cmp(b.set))
        });
        let simple = copoints
            .iter()
            .filter(|c| c.kind == CopointKind::Simple)
            .count();
        ColineReport {
            coline,
            positive: 2 * simple > copoints.len(),
            copoints,
        }
    }

    pub fn simple(&self) -> impl Iterator<Item = GroundSubset> + '_ {
        self.copoints
            .iter()
            .filter(|c| c.kind == CopointKind::Simple)
            .map(|c| c.set)
    }

    pub fn multiple(&self) -> impl Iterator<Item = GroundSubset> + '_ {
        self.copoints
            .iter()
            .filter(|c| c.kind == CopointKind::Multiple)
            .map(|c| c.set)
    }

    pub fn simple_count(&self) -> usize {
        self.simple().count()
    }

    pub fn multiple_count(&self) -> usize {
        self.multiple().count()
    }
}

/// `{"coline":[..],"copoints":[{"set":[..],"kind":"simple"},..],"positive":true}`
impl Serialize for ColineReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ColineReport", 3)?;
        st.serialize_field("coline", &self.coline.elements)?;
        st.serialize_field("copoints", &self.copoints)?;
        st.serialize_field("positive", &self.positive)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::routing::positroid;

    fn set(labels: &[usize]) -> GroundSubset {
        labels.iter().copied().collect()
    }

    /// Closure straight from the definition, scanning every basis for every
    /// candidate element.
    fn closure_oracle(m: &BasisMatroid, s: GroundSubset) -> GroundSubset {
        let rank = |t: GroundSubset| m.bases().iter().map(|b| (t & *b).len()).max().unwrap();
        let r = rank(s);
        (1..=m.n()).filter(|&e| rank(s.insert(e)) == r).collect()
    }

    #[test]
    fn rank_of_examples() {
        let m2 = positroid(&fixtures::fig2());
        assert_eq!(m2.rank_of(set(&[2, 3, 5])), 3);
        assert_eq!(m2.rank_of(GroundSubset::EMPTY), 0);
        let m7 = positroid(&fixtures::fig7());
        assert_eq!(m7.rank_of(set(&[4, 5, 6, 7])), 3);
    }

    #[test]
    fn closure_examples() {
        let m7 = positroid(&fixtures::fig7());
        let c = m7.closure(set(&[4, 6]));
        assert_eq!((c.elements, c.rank), (set(&[4, 6]), 2));
        assert_eq!(c.elements, closure_oracle(&m7, set(&[4, 6])));
        let m2 = positroid(&fixtures::fig2());
        assert_eq!(m2.closure(GroundSubset::EMPTY).elements, set(&[1]));
        assert_eq!(m2.closure(m2.ground()).elements, m2.ground());
        for s in m2.ground().subsets() {
            assert_eq!(m2.closure(s).elements, closure_oracle(&m2, s));
        }
    }

    #[test]
    fn flats_examples() {
        let m7 = positroid(&fixtures::fig7());
        let colines: Vec<_> = m7
            .flats_of_rank(2)
            .unwrap()
            .iter()
            .map(|f| f.elements)
            .collect();
        assert!(colines.contains(&set(&[4, 6])));
        assert!(colines.contains(&set(&[2, 6])));
        assert_eq!(
            m7.flats_of_rank(4).unwrap(),
            vec![Flat {
                elements: m7.ground(),
                rank: 4
            }]
        );
        assert_eq!(
            m7.flats_of_rank(5),
            Err(Error::RankOutOfRange { k: 5, r: 4 })
        );
        let m2 = positroid(&fixtures::fig2());
        let zero = m2.flats_of_rank(0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].elements, set(&[1]));
    }

    #[test]
    fn flats_match_brute_force() {
        let m = positroid(&fixtures::fig5());
        for k in 0..=m.rank() {
            let mut brute: Vec<GroundSubset> = m
                .ground()
                .subsets()
                .filter(|&s| m.rank_of(s) == k && closure_oracle(&m, s) == s)
                .collect();
            brute.sort_unstable();
            let flats: Vec<_> = m
                .flats_of_rank(k)
                .unwrap()
                .iter()
                .map(|f| f.elements)
                .collect();
            assert_eq!(flats, brute, "rank {k}");
        }
    }

    #[test]
    fn circuits_examples() {
        let m7 = positroid(&fixtures::fig7());
        let circuits = m7.circuits();
        // Dependent of rank 3, so it holds a circuit of size <= 4; here the
        // whole set is that circuit and no larger circuit contains it.
        assert!(circuits.contains(&set(&[4, 5, 6, 7])));
        assert!(!circuits
            .iter()
            .any(|c| set(&[4, 5, 6, 7]).is_subset(*c) && c.len() > 4));
        assert_eq!(positroid(&fixtures::u12()).circuits(), vec![set(&[1, 2])]);
        assert!(positroid(&fixtures::fig2()).circuits().contains(&set(&[1])));
    }

    #[test]
    fn copoints_fig5() {
        let m = positroid(&fixtures::fig5());
        let a = m.copoints_on(set(&[4, 7])).unwrap();
        assert_eq!(a.simple().collect::<Vec<_>>(), vec![set(&[2, 4, 7])]);
        assert_eq!(
            a.multiple().collect::<Vec<_>>(),
            vec![set(&[1, 4, 7, 8]), set(&[3, 4, 5, 6, 7])]
        );
        assert!(!a.positive);

        let b = m.copoints_on(set(&[2, 7])).unwrap();
        assert_eq!(
            b.simple().collect::<Vec<_>>(),
            vec![set(&[2, 4, 7]), set(&[2, 5, 7]), set(&[2, 6, 7])]
        );
        assert_eq!(
            b.multiple().collect::<Vec<_>>(),
            vec![set(&[1, 2, 3, 7, 8])]
        );
        assert!(b.positive);
    }

    #[test]
    fn copoints_fig7() {
        let m = positroid(&fixtures::fig7());
        let r = m.copoints_on(set(&[4, 6])).unwrap();
        assert_eq!(
            r.simple().collect::<Vec<_>>(),
            vec![set(&[2, 4, 6]), set(&[3, 4, 6])]
        );
        assert_eq!(
            r.multiple().collect::<Vec<_>>(),
            vec![set(&[1, 4, 5, 6, 7])]
        );
        assert!(r.positive);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"coline":[4,6],"copoints":[{"set":[2,4,6],"kind":"simple"},{"set":[3,4,6],"kind":"simple"},{"set":[1,4,5,6,7],"kind":"multiple"}],"positive":true}"#
        );
        assert!(matches!(
            m.copoints_on(set(&[4])),
            Err(Error::NotAColine { .. })
        ));
        assert!(matches!(
            m.copoints_on(set(&[4, 5])),
            Err(Error::NotAColine { .. })
        ));
    }

    #[test]
    fn loops_and_parallels() {
        let m3 = positroid(&fixtures::fig3());
        assert_eq!(m3.loops_coloops(), (set(&[1, 4]), set(&[5])));
        assert!(!m3.is_simple());
        let m7 = positroid(&fixtures::fig7());
        assert_eq!(
            m7.loops_coloops(),
            (GroundSubset::EMPTY, GroundSubset::EMPTY)
        );
        assert!(m7.parallel_pairs().is_empty());
        assert!(m7.is_simple());
        let m2 = positroid(&fixtures::fig2());
        assert_eq!(m2.loops_coloops(), (set(&[1]), GroundSubset::EMPTY));
        assert_eq!(m2.parallel_pairs(), vec![(3, 4)]);
        assert!(!m2.is_simple());
        assert_eq!(
            positroid(&fixtures::fig4()).parallel_pairs(),
            vec![(3, 4), (6, 7)]
        );
        assert_eq!(positroid(&fixtures::u12()).parallel_pairs(), vec![(1, 2)]);
    }

    #[test]
    fn duality() {
        let u = positroid(&fixtures::u12());
        assert_eq!(u.dual(), u);
        for (_, text) in fixtures::ALL {
            let m = positroid(&crate::diagram::parse_le_diagram(text).unwrap());
            assert_eq!(m.dual().dual(), m);
            assert_eq!(m.dual().rank(), m.n() - m.rank());
        }
    }

    #[test]
    fn minor_examples() {
        let m2 = positroid(&fixtures::fig2());
        let del = m2.minor(set(&[1]), GroundSubset::EMPTY).unwrap();
        assert_eq!(del.labels, vec![2, 3, 4, 5, 6, 7]);
        let shifted: Vec<GroundSubset> = m2
            .bases()
            .iter()
            .map(|b| b.iter().map(|e| e - 1).collect())
            .collect();
        assert_eq!(del.matroid.bases(), &shifted[..]);
        assert!(del.matroid.loops_coloops().0.is_empty());

        let same = m2.minor(GroundSubset::EMPTY, GroundSubset::EMPTY).unwrap();
        assert_eq!(same.matroid, m2);

        let m7 = positroid(&fixtures::fig7());
        let con = m7.minor(GroundSubset::EMPTY, set(&[1])).unwrap();
        assert_eq!(con.matroid.rank(), 3);
        let mut expected: Vec<GroundSubset> = m7
            .bases()
            .iter()
            .filter(|b| b.contains(1))
            .map(|b| b.remove(1).iter().map(|e| e - 1).collect())
            .collect();
        expected.sort_unstable();
        assert_eq!(con.matroid.bases(), &expected[..]);

        assert_eq!(
            m7.minor(set(&[1, 2]), set(&[2])),
            Err(Error::OverlappingMinor(set(&[2])))
        );
        let empty = BasisMatroid::new(2, vec![GroundSubset::EMPTY])
            .unwrap()
            .minor(GroundSubset::EMPTY, set(&[1, 2]))
            .unwrap();
        assert_eq!(empty.matroid.n(), 0);
        assert_eq!(empty.matroid.bases(), &[GroundSubset::EMPTY]);
    }

    #[test]
    fn minors_commute_with_duality() {
        for (_, text) in fixtures::ALL {
            let m = positroid(&crate::diagram::parse_le_diagram(text).unwrap());
            let d = set(&[1]);
            let c = GroundSubset::from_mask(0b100) & m.ground();
            let left = m.minor(d, c).unwrap().matroid.dual();
            let right = m.dual().minor(c, d).unwrap().matroid;
            assert_eq!(left, right);
        }
    }

    #[test]
    fn exchange_holds_on_fixtures() {
        for (_, text) in fixtures::ALL {
            let m = positroid(&crate::diagram::parse_le_diagram(text).unwrap());
            assert_eq!(m.exchange_violation(), None);
        }
        let bad = BasisMatroid::new(4, vec![set(&[1, 2]), set(&[3, 4])]).unwrap();
        assert!(bad.exchange_violation().is_some());
    }

    #[test]
    fn constructor_validation() {
        assert!(BasisMatroid::new(3, vec![]).is_err());
        assert!(BasisMatroid::new(3, vec![set(&[1]), set(&[1, 2])]).is_err());
        assert!(BasisMatroid::new(3, vec![set(&[4])]).is_err());
        assert_eq!(BasisMatroid::free(3).loops_coloops().1, set(&[1, 2, 3]));
    }
}
