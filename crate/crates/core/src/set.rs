//! Ground sets, member sets and set families.
//!
//! Members are bit vectors with trailing zero words stripped, so equality and
//! hashing are semantic regardless of how wide the ground set is. The `Ord`
//! on [`MemberSet`] is the canonical order used everywhere a "first" result
//! is reported: smaller sets first, then lexicographic on sorted elements.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use smallvec::SmallVec;

use crate::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MemberSet {
    words: SmallVec<[u64; 2]>,
}

impl MemberSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(x: usize) -> Self {
        let mut s = Self::empty();
        s.insert(x);
        s
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        let mut s = Self::empty();
        for x in elements {
            s.insert(x);
        }
        s
    }

    /// Builds a set from a `u64` mask (bit `i` = element `i`).
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::empty();
        if mask != 0 {
            s.words.push(mask);
        }
        s
    }

    /// The set as a `u64` mask, if every element is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, x: usize) {
        let (w, b) = (x / WORD, x % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << b;
    }

    pub fn remove(&mut self, x: usize) {
        let (w, b) = (x / WORD, x % WORD);
        if w < self.words.len() {
            self.words[w] &= !(1u64 << b);
            self.normalize();
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        let (w, b) = (x / WORD, x % WORD);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_element(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD + (WORD - 1 - last.leading_zeros() as usize))
    }

    pub fn iter(&self) -> Elements<'_> {
        Elements {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.clone();
        for (o, s) in out.words.iter_mut().zip(short.words.iter()) {
            *o |= s;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Self {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        };
        out.normalize();
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, s) in out.words.iter_mut().zip(other.words.iter()) {
            *o &= !s;
        }
        out.normalize();
        out
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `self ⊆ other`.
    #[inline]
    pub fn is_subset(&self, other: &Self) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// All subsets of `self`, in canonical order. Intended for small sets.
    pub fn subsets(&self) -> Vec<MemberSet> {
        let elems = self.to_vec();
        let k = elems.len();
        assert!(k < 32, "subset enumeration of a {k}-element set");
        let mut out: Vec<MemberSet> = (0u32..(1u32 << k))
            .map(|mask| {
                MemberSet::from_elements(
                    elems
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &x)| x),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Relabels each element `x` as `map(x)`.
    pub fn map<F: Fn(usize) -> usize>(&self, f: F) -> Self {
        Self::from_elements(self.iter().map(f))
    }

    /// Keeps only the elements below `limit`.
    pub fn truncate_below(&self, limit: usize) -> Self {
        Self::from_elements(self.iter().filter(|&x| x < limit))
    }
}

impl Ord for MemberSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for MemberSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for MemberSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_elements(iter)
    }
}

pub struct Elements<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Elements<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let b = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + b);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// The finite ground set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    dummy_start: Option<usize>,
    block_bounds: Option<Vec<usize>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            dummy_start: None,
            block_bounds: None,
        }
    }

    /// `bounds` lists block boundaries `0 = b_0 < b_1 < ... < b_k = n`.
    pub fn with_blocks(n: usize, bounds: Vec<usize>) -> Result<Self> {
        let valid = bounds.first() == Some(&0)
            && bounds.last() == Some(&n)
            && bounds.windows(2).all(|p| p[0] < p[1]);
        if !valid || (n == 0 && bounds.len() != 1) {
            return Err(Error::InvalidGround(format!(
                "block bounds {bounds:?} do not partition 0..{n} into nonempty intervals"
            )));
        }
        Ok(Self {
            n,
            dummy_start: None,
            block_bounds: Some(bounds),
        })
    }

    pub fn with_dummy_start(mut self, start: usize) -> Result<Self> {
        if start > self.n {
            return Err(Error::InvalidGround(format!(
                "dummy_start {start} exceeds n = {}",
                self.n
            )));
        }
        self.dummy_start = Some(start);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dummy_start(&self) -> Option<usize> {
        self.dummy_start
    }

    pub fn block_bounds(&self) -> Option<&[usize]> {
        self.block_bounds.as_deref()
    }

    /// Block index of element `x`, when block bounds are present.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        let b = self.block_bounds.as_ref()?;
        if x >= self.n {
            return None;
        }
        Some(b.partition_point(|&s| s <= x) - 1)
    }

    fn check(&self, s: &MemberSet) -> Result<()> {
        match s.max_element() {
            Some(x) if x >= self.n => Err(Error::ElementOutOfRange {
                element: x,
                n: self.n,
            }),
            _ => Ok(()),
        }
    }
}

/// An ordered multiset of members over a ground set. Duplicates are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    ground: GroundSet,
    members: Vec<MemberSet>,
    w: usize,
}

impl SetFamily {
    pub fn new(ground: GroundSet, members: Vec<MemberSet>) -> Result<Self> {
        for m in &members {
            ground.check(m)?;
        }
        let w = members.iter().map(MemberSet::len).max().unwrap_or(0);
        Ok(Self { ground, members, w })
    }

    pub fn empty(ground: GroundSet) -> Self {
        Self {
            ground,
            members: Vec::new(),
            w: 0,
        }
    }

    /// Convenience constructor from element lists on the ground set `0..n`.
    pub fn from_lists<L: AsRef<[usize]>>(n: usize, lists: &[L]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| MemberSet::from_elements(l.as_ref().iter().copied()))
            .collect();
        Self::new(GroundSet::new(n), members)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n
    }

    pub fn members(&self) -> &[MemberSet] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &MemberSet {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Maximum member size (0 for the empty family).
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn is_uniform(&self) -> bool {
        self.members.iter().all(|m| m.len() == self.w)
    }

    pub fn contains_empty(&self) -> bool {
        self.members.iter().any(MemberSet::is_empty)
    }

    pub fn check_set(&self, s: &MemberSet) -> Result<()> {
        self.ground.check(s)
    }

    /// Union of all members.
    pub fn support(&self) -> MemberSet {
        self.members
            .iter()
            .fold(MemberSet::empty(), |acc, m| acc.union(m))
    }

    /// Distinct members with the index of their first occurrence, in member order.
    pub fn distinct(&self) -> Vec<(usize, &MemberSet)> {
        let mut seen = BTreeSet::new();
        self.members
            .iter()
            .enumerate()
            .filter(|(_, m)| seen.insert(*m))
            .collect()
    }

    pub fn distinct_len(&self) -> usize {
        self.members.iter().collect::<BTreeSet<_>>().len()
    }

    /// Members sorted canonically, as a multiset fingerprint.
    pub fn sorted_members(&self) -> Vec<MemberSet> {
        let mut v = self.members.clone();
        v.sort();
        v
    }

    /// The subfamily at the given member indices (same ground set).
    pub fn subfamily(&self, indices: &[usize]) -> SetFamily {
        let members: Vec<MemberSet> = indices.iter().map(|&i| self.members[i].clone()).collect();
        let w = members.iter().map(MemberSet::len).max().unwrap_or(0);
        SetFamily {
            ground: self.ground.clone(),
            members,
            w,
        }
    }

    fn with_members(&self, members: Vec<MemberSet>) -> SetFamily {
        let w = members.iter().map(MemberSet::len).max().unwrap_or(0);
        SetFamily {
            ground: self.ground.clone(),
            members,
            w,
        }
    }

    /// Indices of the members containing `t`.
    pub fn containing(&self, t: &MemberSet) -> Vec<usize> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, s)| t.is_subset(s))
            .map(|(i, _)| i)
            .collect()
    }

    /// The link `{S \ T : S ∈ F, T ⊆ S}`, keeping order and multiplicity.
    pub fn link(&self, t: &MemberSet) -> SetFamily {
        self.with_members(
            self.members
                .iter()
                .filter(|s| t.is_subset(s))
                .map(|s| s.difference(t))
                .collect(),
        )
    }

    /// Number of members containing `t`.
    pub fn link_len(&self, t: &MemberSet) -> usize {
        self.members.iter().filter(|s| t.is_subset(s)).count()
    }

    pub fn common_intersection(&self) -> Result<MemberSet> {
        let (first, rest) = self.members.split_first().ok_or(Error::UndefinedKernel)?;
        Ok(rest.iter().fold(first.clone(), |k, s| k.intersection(s)))
    }

    /// Pads every member to exactly `w` elements with fresh dummy ids allocated
    /// above the current ground set, one block of dummies per member in order.
    pub fn uniformize(&self, w: usize) -> Result<SetFamily> {
        if w < self.w {
            return Err(Error::WidthTooSmall {
                requested: w,
                max: self.w,
            });
        }
        let old_n = self.ground.n;
        let mut next = old_n;
        let members: Vec<MemberSet> = self
            .members
            .iter()
            .map(|s| {
                let mut m = s.clone();
                for _ in s.len()..w {
                    m.insert(next);
                    next += 1;
                }
                m
            })
            .collect();
        let dummy_start = self.ground.dummy_start.unwrap_or(old_n);
        let block_bounds = self.ground.block_bounds.clone().map(|mut b| {
            if next > old_n {
                b.push(next);
            }
            b
        });
        let ground = GroundSet {
            n: next,
            dummy_start: Some(dummy_start),
            block_bounds,
        };
        Ok(SetFamily {
            ground,
            members,
            w: if self.members.is_empty() { 0 } else { w },
        })
    }

    /// Drops all ids at or above `limit` from every member (ground set unchanged).
    pub fn restrict_below(&self, limit: usize) -> SetFamily {
        self.with_members(self.members.iter().map(|m| m.truncate_below(limit)).collect())
    }

    /// Indices of `r` pairwise disjoint members, by complete backtracking search
    /// in member order.
    pub fn find_pairwise_disjoint(&self, r: usize) -> Option<Vec<usize>> {
        fn go(
            members: &[MemberSet],
            start: usize,
            need: usize,
            used: &MemberSet,
            chosen: &mut Vec<usize>,
        ) -> bool {
            if need == 0 {
                return true;
            }
            for i in start..members.len() {
                if members.len() - i < need {
                    return false;
                }
                if used.is_disjoint(&members[i]) {
                    chosen.push(i);
                    if go(members, i + 1, need - 1, &used.union(&members[i]), chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let mut chosen = Vec::with_capacity(r);
        go(&self.members, 0, r, &MemberSet::empty(), &mut chosen).then_some(chosen)
    }

    /// Every pair of members (duplicates included) shares an element.
    pub fn is_intersecting(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members[i + 1..]
                .iter()
                .all(|b| !a.is_disjoint(b))
        })
    }
}

/// `r` member indices whose pairwise intersections all equal the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunflowerWitness {
    pub indices: Vec<usize>,
    pub kernel: MemberSet,
}

impl SunflowerWitness {
    /// Builds the witness for `indices`, computing the kernel; validates it.
    pub fn from_indices(family: &SetFamily, indices: Vec<usize>) -> Result<Self> {
        let kernel = family.subfamily(&indices).common_intersection()?;
        let w = Self { indices, kernel };
        w.validate(family)?;
        Ok(w)
    }

    pub fn r(&self) -> usize {
        self.indices.len()
    }

    /// Checks the sunflower predicate against `family`: distinct in-range
    /// indices, kernel equal to the common intersection, and every pairwise
    /// intersection equal to the kernel.
    pub fn validate(&self, family: &SetFamily) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidWitness(msg));
        if self.indices.is_empty() {
            return bad("no members".into());
        }
        if let Some(&i) = self.indices.iter().find(|&&i| i >= family.len()) {
            return bad(format!("index {i} out of range"));
        }
        let distinct: BTreeSet<_> = self.indices.iter().collect();
        if distinct.len() != self.indices.len() {
            return bad("repeated index".into());
        }
        let sets: Vec<&MemberSet> = self.indices.iter().map(|&i| family.member(i)).collect();
        let common = sets
            .iter()
            .skip(1)
            .fold(sets[0].clone(), |k, s| k.intersection(s));
        if common != self.kernel {
            return bad(format!(
                "kernel {} differs from the common intersection {}",
                self.kernel, common
            ));
        }
        for (a, sa) in sets.iter().enumerate() {
            for sb in &sets[a + 1..] {
                if sa.intersection(sb) != self.kernel {
                    return bad(format!("{sa} ∩ {sb} is not the kernel {}", self.kernel));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn set(xs: &[usize]) -> MemberSet {
        MemberSet::from_elements(xs.iter().copied())
    }

    #[test]
    fn bitset_basics() {
        let a = set(&[0, 1, 70]);
        let b = set(&[1, 2]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.max_element(), Some(70));
        assert_eq!(a.intersection(&b), set(&[1]));
        assert_eq!(a.union(&b).to_vec(), vec![0, 1, 2, 70]);
        assert_eq!(a.difference(&set(&[70])), set(&[0, 1]));
        assert_eq!(a.difference(&set(&[70])).words().len(), 1);
        assert!(set(&[1]).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(MemberSet::empty().is_subset(&b));
        assert!(set(&[3, 64]).is_disjoint(&a));
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut v = vec![set(&[1, 2]), set(&[3]), set(&[0, 5]), MemberSet::empty()];
        v.sort();
        assert_eq!(v, vec![MemberSet::empty(), set(&[3]), set(&[0, 5]), set(&[1, 2])]);
    }

    #[test]
    fn out_of_range_member_is_rejected() {
        assert_eq!(
            SetFamily::from_lists(3, &[&[0, 3][..]]),
            Err(Error::ElementOutOfRange { element: 3, n: 3 })
        );
    }

    #[test]
    fn link_examples() {
        let f = fam(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        assert_eq!(f.link(&set(&[0])).members(), &[set(&[1]), set(&[2])]);
        let g = fam(4, &[&[0, 1], &[0, 2]]);
        assert_eq!(g.link(&MemberSet::empty()), g);
        assert!(g.link(&set(&[3])).is_empty());
    }

    #[test]
    fn common_intersection_examples() {
        assert_eq!(fam(3, &[&[0, 1], &[0, 2]]).common_intersection().unwrap(), set(&[0]));
        assert_eq!(fam(2, &[&[0, 1]]).common_intersection().unwrap(), set(&[0, 1]));
        assert_eq!(fam(2, &[&[0], &[1]]).common_intersection().unwrap(), MemberSet::empty());
        assert_eq!(
            SetFamily::empty(GroundSet::new(2)).common_intersection(),
            Err(Error::UndefinedKernel)
        );
    }

    #[test]
    fn uniformize_examples() {
        let u = fam(3, &[&[0], &[1, 2]]).uniformize(2).unwrap();
        assert_eq!(u.members(), &[set(&[0, 3]), set(&[1, 2])]);
        assert_eq!(u.ground().dummy_start(), Some(3));
        assert_eq!(u.n(), 4);

        let same = fam(2, &[&[0, 1]]).uniformize(2).unwrap();
        assert_eq!(same.members(), &[set(&[0, 1])]);
        assert_eq!(same.ground().dummy_start(), Some(2));

        let dup = fam(3, &[&[0], &[0]]).uniformize(2).unwrap();
        assert_eq!(dup.members(), &[set(&[0, 3]), set(&[0, 4])]);

        assert_eq!(
            fam(3, &[&[0, 1, 2]]).uniformize(2),
            Err(Error::WidthTooSmall { requested: 2, max: 3 })
        );
    }

    #[test]
    fn uniformize_extends_block_bounds() {
        let g = GroundSet::with_blocks(4, vec![0, 2, 4]).unwrap();
        let f = SetFamily::new(g, vec![set(&[0]), set(&[1, 3])]).unwrap();
        let u = f.uniformize(3).unwrap();
        assert_eq!(u.ground().block_bounds(), Some(&[0, 2, 4, 7][..]));
        assert_eq!(u.ground().block_of(5), Some(2));
    }

    #[test]
    fn block_bounds_validation() {
        assert!(GroundSet::with_blocks(4, vec![0, 2, 4]).is_ok());
        assert!(GroundSet::with_blocks(4, vec![0, 2, 2, 4]).is_err());
        assert!(GroundSet::with_blocks(4, vec![0, 3]).is_err());
        assert!(GroundSet::new(3).with_dummy_start(4).is_err());
    }

    #[test]
    fn pairwise_disjoint_examples() {
        assert_eq!(fam(3, &[&[0], &[1], &[2]]).find_pairwise_disjoint(3), Some(vec![0, 1, 2]));
        assert_eq!(fam(3, &[&[0, 1], &[1, 2], &[0, 2]]).find_pairwise_disjoint(2), None);
        assert_eq!(
            fam(4, &[&[0, 1], &[2, 3], &[0, 2], &[1, 3]]).find_pairwise_disjoint(2),
            Some(vec![0, 1])
        );
        assert_eq!(fam(2, &[&[0]]).find_pairwise_disjoint(0), Some(vec![]));
    }

    #[test]
    fn intersecting_examples() {
        assert!(fam(3, &[&[0, 1], &[1, 2], &[0, 2]]).is_intersecting());
        assert!(!fam(2, &[&[0], &[1]]).is_intersecting());
        let star: Vec<Vec<usize>> = (1..5).map(|j| vec![0, j]).collect();
        assert!(SetFamily::from_lists(5, &star).unwrap().is_intersecting());
        assert!(SetFamily::empty(GroundSet::new(1)).is_intersecting());
        assert!(fam(2, &[&[0]]).is_intersecting());
        assert!(!fam(2, &[&[0], &[]]).is_intersecting());
        assert!(!fam(2, &[&[], &[]]).is_intersecting());
    }

    #[test]
    fn witness_validation() {
        let f = fam(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2]]);
        assert!(SunflowerWitness::from_indices(&f, vec![0, 1, 2]).is_ok());
        assert!(SunflowerWitness::from_indices(&f, vec![0, 1, 3]).is_err());
        let bad_kernel = SunflowerWitness {
            indices: vec![0, 1],
            kernel: MemberSet::empty(),
        };
        assert!(bad_kernel.validate(&f).is_err());
        let repeated = SunflowerWitness {
            indices: vec![0, 0],
            kernel: set(&[0, 1]),
        };
        assert!(repeated.validate(&f).is_err());
    }
}
