//! Sunflower and robust-sunflower search.
//!
//! All finders work on distinct members; a returned index is the first
//! occurrence of its set. Every returned witness has been re-validated.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::constructions::Color;
use crate::probability::{self, McParams, Method, ProbEstimate, Verdict};
use crate::rational::ratio;
use crate::set::{MemberSet, SetFamily, SunflowerWitness};
use crate::{Bias, Error, Result};

/// Largest number of distinct members accepted by the exhaustive robust search.
pub const ROBUST_EXHAUSTIVE_CAP: usize = 15;
/// Largest member size accepted by the link-kernels strategy (2^size candidates per member).
pub const LINK_KERNEL_MEMBER_CAP: usize = 20;

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

/// Complete search over r-subsets of distinct members. The kernel is fixed
/// by the first two choices; later members must meet every chosen one in it.
fn exhaustive_with<F: Fn(&MemberSet, &MemberSet) -> bool>(
    family: &SetFamily,
    r: usize,
    petal_ok: F,
) -> Result<Option<SunflowerWitness>> {
    check_r(r)?;
    let distinct = family.distinct();
    let sets: Vec<&MemberSet> = distinct.iter().map(|(_, s)| *s).collect();

    fn extend<F: Fn(&MemberSet, &MemberSet) -> bool>(
        sets: &[&MemberSet],
        kernel: &MemberSet,
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        petal_ok: &F,
    ) -> bool {
        if need == 0 {
            return true;
        }
        for l in start..sets.len() {
            if sets.len() - l < need {
                return false;
            }
            let s = sets[l];
            if petal_ok(s, kernel) && chosen.iter().all(|&c| s.intersection(sets[c]) == *kernel) {
                chosen.push(l);
                if extend(sets, kernel, l + 1, need - 1, chosen, petal_ok) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let kernel = sets[i].intersection(sets[j]);
            if !petal_ok(sets[i], &kernel) || !petal_ok(sets[j], &kernel) {
                continue;
            }
            let mut chosen = alloc::vec![i, j];
            if extend(&sets, &kernel, j + 1, r - 2, &mut chosen, &petal_ok) {
                let indices = chosen.iter().map(|&c| distinct[c].0).collect();
                return SunflowerWitness::from_indices(family, indices).map(Some);
            }
        }
    }
    Ok(None)
}

/// Complete search for an r-sunflower among the distinct members.
pub fn find_sunflower_exhaustive(family: &SetFamily, r: usize) -> Result<Option<SunflowerWitness>> {
    exhaustive_with(family, r, |_, _| true)
}

/// The constructive Erdős–Rado recursion: a greedy maximal disjoint
/// subfamily in member order, else the link at the most popular element
/// (ties to the smallest id).
pub fn find_sunflower_erdos_rado(family: &SetFamily, r: usize) -> Result<Option<SunflowerWitness>> {
    check_r(r)?;
    let sets: Vec<(usize, MemberSet)> = family
        .distinct()
        .into_iter()
        .map(|(i, s)| (i, s.clone()))
        .collect();

    fn go(sets: &[(usize, MemberSet)], r: usize) -> Option<Vec<usize>> {
        if sets.len() < r {
            return None;
        }
        let mut used = MemberSet::empty();
        let mut chosen = Vec::new();
        for (i, s) in sets {
            if used.is_disjoint(s) {
                used = used.union(s);
                chosen.push(*i);
                if chosen.len() == r {
                    return Some(chosen);
                }
            }
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, s) in sets {
            for x in s.iter() {
                *counts.entry(x).or_default() += 1;
            }
        }
        let mut best: Option<(usize, usize)> = None;
        for (&x, &c) in &counts {
            if best.is_none_or(|(bc, _)| c > bc) {
                best = Some((c, x));
            }
        }
        let (_, x) = best?;
        let link: Vec<(usize, MemberSet)> = sets
            .iter()
            .filter(|(_, s)| s.contains(x))
            .map(|(i, s)| {
                let mut t = s.clone();
                t.remove(x);
                (*i, t)
            })
            .collect();
        go(&link, r)
    }

    match go(&sets, r) {
        Some(indices) => SunflowerWitness::from_indices(family, indices).map(Some),
        None => Ok(None),
    }
}

/// Complete search for an r-sunflower whose petals use only `color`.
pub fn find_monochromatic_sunflower(
    family: &SetFamily,
    r: usize,
    colors: &[Color],
    color: Color,
) -> Result<Option<SunflowerWitness>> {
    if colors.len() < family.n() {
        return Err(Error::InvalidParameter(format!(
            "coloring covers {} of {} elements",
            colors.len(),
            family.n()
        )));
    }
    exhaustive_with(family, r, |s, k| s.difference(k).iter().all(|x| colors[x] == color))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelStrategy {
    /// Kernels of the subfamilies `{S : T ⊆ S}` for every subset `T` of a member.
    LinkKernels,
    /// Every nonempty subfamily of distinct members.
    ExhaustiveSubfamilies,
}

impl KernelStrategy {
    pub fn name(self) -> &'static str {
        match self {
            KernelStrategy::LinkKernels => "link-kernels",
            KernelStrategy::ExhaustiveSubfamilies => "exhaustive-subfamilies",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "link-kernels" => Some(KernelStrategy::LinkKernels),
            "exhaustive-subfamilies" | "exhaustive" => Some(KernelStrategy::ExhaustiveSubfamilies),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustSunflowerWitness {
    pub kernel: MemberSet,
    /// Member indices of the subfamily.
    pub member_indices: Vec<usize>,
    pub link_probability: ProbEstimate,
    pub alpha: Bias,
    pub beta: Bias,
}

/// The kernel of the subfamily and its link, or `None` when the kernel is a member.
fn kernel_and_link(family: &SetFamily, indices: &[usize]) -> Result<Option<(MemberSet, SetFamily)>> {
    let sub = family.subfamily(indices);
    let kernel = sub.common_intersection()?;
    if sub.members().contains(&kernel) {
        return Ok(None);
    }
    let link = sub.link(&kernel);
    Ok(Some((kernel, link)))
}

/// Searches for a subfamily whose kernel is not a member and whose link at
/// the kernel is (α, β)-satisfying. Sampled link probabilities only count
/// when the whole confidence interval clears `1 − β`.
pub fn robust_sunflower_search(
    family: &SetFamily,
    alpha: &Bias,
    beta: &Bias,
    strategy: KernelStrategy,
    method: Method,
    mc: &McParams,
) -> Result<Option<RobustSunflowerWitness>> {
    let mut memo: BTreeMap<Vec<MemberSet>, (Verdict, ProbEstimate)> = BTreeMap::new();
    let mut evaluate = |link: &SetFamily| -> Result<(Verdict, ProbEstimate)> {
        let key = probability::minimal_members(link.members());
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let est = probability::satisfaction_probability(link, alpha, method, mc)?;
        let v = (probability::decide(&est, beta), est);
        memo.insert(key, v.clone());
        Ok(v)
    };
    let found = |kernel: MemberSet, indices: Vec<usize>, est: ProbEstimate| RobustSunflowerWitness {
        kernel,
        member_indices: indices,
        link_probability: est,
        alpha: alpha.clone(),
        beta: beta.clone(),
    };

    match strategy {
        KernelStrategy::LinkKernels => {
            if family.w() > LINK_KERNEL_MEMBER_CAP {
                return Err(Error::CapExceeded {
                    what: "link-kernels member size",
                    limit: LINK_KERNEL_MEMBER_CAP as u64,
                    actual: family.w() as u64,
                });
            }
            let mut candidates = BTreeSet::new();
            for (_, s) in family.distinct() {
                candidates.extend(s.subsets());
            }
            let mut seen_kernels = BTreeSet::new();
            for t in candidates {
                let indices = family.containing(&t);
                let Some((kernel, link)) = kernel_and_link(family, &indices)? else {
                    continue;
                };
                if !seen_kernels.insert(kernel.clone()) {
                    continue;
                }
                let (verdict, est) = evaluate(&link)?;
                if verdict == Verdict::Satisfying {
                    return Ok(Some(found(kernel, indices, est)));
                }
            }
            Ok(None)
        }
        KernelStrategy::ExhaustiveSubfamilies => {
            let distinct = family.distinct();
            let d = distinct.len();
            if d > ROBUST_EXHAUSTIVE_CAP {
                return Err(Error::CapExceeded {
                    what: "exhaustive-subfamilies distinct members",
                    limit: ROBUST_EXHAUSTIVE_CAP as u64,
                    actual: d as u64,
                });
            }
            // Canonical order: by size, then lexicographically by index list.
            let mut masks: Vec<u32> = (1u32..(1u32 << d)).collect();
            masks.sort_by_key(|&m| {
                let idx: Vec<usize> = (0..d).filter(|&b| m >> b & 1 == 1).collect();
                (m.count_ones(), idx)
            });
            for mask in masks {
                let indices: Vec<usize> = (0..d)
                    .filter(|&b| mask >> b & 1 == 1)
                    .map(|b| distinct[b].0)
                    .collect();
                let Some((kernel, link)) = kernel_and_link(family, &indices)? else {
                    continue;
                };
                let (verdict, est) = evaluate(&link)?;
                if verdict == Verdict::Satisfying {
                    return Ok(Some(found(kernel, indices, est)));
                }
            }
            Ok(None)
        }
    }
}

/// Re-checks a robust witness against `family`: kernel, `K ∉` subfamily, and a
/// recomputed satisfying verdict for the link.
pub fn validate_robust(
    family: &SetFamily,
    witness: &RobustSunflowerWitness,
    method: Method,
    mc: &McParams,
) -> Result<()> {
    let bad = |msg: alloc::string::String| Err(Error::InvalidWitness(msg));
    if witness.member_indices.is_empty() {
        return bad("empty subfamily".into());
    }
    if let Some(&i) = witness.member_indices.iter().find(|&&i| i >= family.len()) {
        return bad(format!("index {i} out of range"));
    }
    let Some((kernel, link)) = kernel_and_link(family, &witness.member_indices)? else {
        return bad("the kernel is a member of the subfamily".into());
    };
    if kernel != witness.kernel {
        return bad(format!("kernel {} differs from the common intersection {}", witness.kernel, kernel));
    }
    let est = probability::satisfaction_probability(&link, &witness.alpha, method, mc)?;
    match probability::decide(&est, &witness.beta) {
        Verdict::Satisfying => Ok(()),
        v => bad(format!("link is {} (probability {})", v.name(), est.value)),
    }
}

/// Extracts an r-sunflower from a robust sunflower at `α = β = 1/r`: `r`
/// pairwise disjoint sets in the link, with the kernel re-attached.
pub fn sunflower_from_robust(
    family: &SetFamily,
    witness: &RobustSunflowerWitness,
    r: usize,
) -> Result<SunflowerWitness> {
    check_r(r)?;
    let one_over_r = Bias::new(ratio(1, r as i64))?;
    if witness.alpha != one_over_r || witness.beta != one_over_r {
        return Err(Error::InvalidWitness(format!(
            "witness parameters ({}, {}) are not (1/{r}, 1/{r})",
            witness.alpha, witness.beta
        )));
    }
    validate_robust(family, witness, Method::Auto, &McParams::default())?;
    let sub = family.subfamily(&witness.member_indices);
    let link = sub.link(&witness.kernel);
    let picked = link.find_pairwise_disjoint(r).ok_or_else(|| {
        Error::InvalidWitness(format!("link has no {r} pairwise disjoint sets"))
    })?;
    // The link keeps the subfamily's order, so link index = subfamily index.
    let indices = picked.iter().map(|&i| witness.member_indices[i]).collect();
    SunflowerWitness::from_indices(family, indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn pairs(n: usize) -> SetFamily {
        let mut lists = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                lists.push(alloc::vec![a, b]);
            }
        }
        SetFamily::from_lists(n, &lists).unwrap()
    }

    fn half() -> Bias {
        Bias::from_ratio(1, 2).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        let w = find_sunflower_exhaustive(&fam(4, &[&[0, 1], &[0, 2], &[0, 3]]), 3).unwrap().unwrap();
        assert_eq!(w.kernel, MemberSet::singleton(0));
        assert!(find_sunflower_exhaustive(&fam(3, &[&[0, 1], &[1, 2], &[0, 2]]), 3).unwrap().is_none());
        let f = pairs(5);
        let w = find_sunflower_exhaustive(&f, 3).unwrap().unwrap();
        w.validate(&f).unwrap();
    }

    #[test]
    fn duplicates_do_not_form_sunflowers() {
        let f = fam(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        assert!(find_sunflower_exhaustive(&f, 2).unwrap().is_none());
        assert!(find_sunflower_erdos_rado(&f, 2).unwrap().is_none());
    }

    #[test]
    fn r_below_two_is_rejected() {
        assert!(find_sunflower_exhaustive(&pairs(3), 1).is_err());
    }

    #[test]
    fn erdos_rado_examples() {
        let f = fam(3, &[&[0], &[1], &[2]]);
        let w = find_sunflower_erdos_rado(&f, 3).unwrap().unwrap();
        assert!(w.kernel.is_empty());
        let f = fam(5, &[&[0, 1], &[0, 2], &[0, 3], &[0, 4]]);
        let w = find_sunflower_erdos_rado(&f, 3).unwrap().unwrap();
        assert_eq!(w.kernel, MemberSet::singleton(0));
        assert_eq!(w.indices, alloc::vec![0, 1, 2]);
    }

    #[test]
    fn monochromatic_examples() {
        let f = fam(3, &[&[0], &[1], &[2]]);
        let red = [Color::Red; 3];
        assert!(find_monochromatic_sunflower(&f, 3, &red, Color::Red).unwrap().is_some());
        let mixed = [Color::Blue, Color::Red, Color::Red];
        assert!(find_monochromatic_sunflower(&f, 3, &mixed, Color::Red).unwrap().is_none());
    }

    #[test]
    fn monochromatic_dense_link_pattern() {
        // S = {0,1,2}; S_i ∩ S = {0} and S_i \ S red for three members.
        let f = fam(9, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6], &[0, 7, 8]]);
        let mut colors = alloc::vec![Color::Blue; 9];
        for c in colors.iter_mut().skip(3) {
            *c = Color::Red;
        }
        let w = find_monochromatic_sunflower(&f, 3, &colors, Color::Red).unwrap().unwrap();
        assert!(MemberSet::singleton(0).is_subset(&w.kernel));
        assert_eq!(w.indices, alloc::vec![1, 2, 3]);
    }

    #[test]
    fn robust_examples() {
        let mc = McParams::default();
        let f = fam(3, &[&[0, 1], &[0, 2]]);
        for strategy in [KernelStrategy::LinkKernels, KernelStrategy::ExhaustiveSubfamilies] {
            let w = robust_sunflower_search(&f, &half(), &half(), strategy, Method::ExactEnum, &mc)
                .unwrap()
                .unwrap();
            assert_eq!(w.kernel, MemberSet::singleton(0));
            assert_eq!(w.link_probability.exact, Some(ratio(3, 4)));
            validate_robust(&f, &w, Method::ExactEnum, &mc).unwrap();
        }
        let single = fam(2, &[&[0, 1]]);
        for strategy in [KernelStrategy::LinkKernels, KernelStrategy::ExhaustiveSubfamilies] {
            assert!(robust_sunflower_search(&single, &half(), &half(), strategy, Method::Auto, &mc)
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn exhaustive_robust_cap() {
        let lists: Vec<Vec<usize>> = (0..16).map(|i| alloc::vec![i]).collect();
        let f = SetFamily::from_lists(16, &lists).unwrap();
        let err = robust_sunflower_search(
            &f,
            &half(),
            &half(),
            KernelStrategy::ExhaustiveSubfamilies,
            Method::Auto,
            &McParams::default(),
        );
        assert!(matches!(err, Err(Error::CapExceeded { .. })));
    }

    fn third() -> Bias {
        Bias::from_ratio(1, 3).unwrap()
    }

    #[test]
    fn from_robust_examples() {
        // Kernel ∅ over three singletons: 1 − (2/3)^3 = 19/27 > 2/3.
        let f = fam(3, &[&[0], &[1], &[2]]);
        let est = probability::satisfaction_probability(&f, &third(), Method::ExactEnum, &McParams::default())
            .unwrap();
        let witness = RobustSunflowerWitness {
            kernel: MemberSet::empty(),
            member_indices: alloc::vec![0, 1, 2],
            link_probability: est.clone(),
            alpha: third(),
            beta: third(),
        };
        let s = sunflower_from_robust(&f, &witness, 3).unwrap();
        assert!(s.kernel.is_empty());

        let f = fam(10, &[&[9, 0], &[9, 1], &[9, 2]]);
        let witness = RobustSunflowerWitness {
            kernel: MemberSet::singleton(9),
            member_indices: alloc::vec![0, 1, 2],
            link_probability: est,
            alpha: third(),
            beta: third(),
        };
        let s = sunflower_from_robust(&f, &witness, 3).unwrap();
        assert_eq!(s.kernel, MemberSet::singleton(9));
        assert_eq!(s.indices, alloc::vec![0, 1, 2]);
    }

    #[test]
    fn from_robust_rejects_invalid_witnesses() {
        let f = fam(2, &[&[0], &[1]]);
        let est = ProbEstimate::exact(ratio(5, 9), Method::ExactEnum);
        let witness = RobustSunflowerWitness {
            kernel: MemberSet::empty(),
            member_indices: alloc::vec![0, 1],
            link_probability: est,
            alpha: third(),
            beta: third(),
        };
        // 1 − (2/3)^2 = 5/9 ≤ 2/3.
        assert!(matches!(
            sunflower_from_robust(&f, &witness, 3),
            Err(Error::InvalidWitness(_))
        ));
    }
}
