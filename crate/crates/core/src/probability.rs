//! `Pr_{R ~ U(X, α)}[∃ S ∈ F, S ⊆ R]`, exactly or by sampling.
//!
//! Exact values are polynomials in α evaluated over the rationals:
//!
//! * inclusion–exclusion over the distinct members, grouped by union size;
//! * enumeration of all `R` over the support, grouped by `|R|` (elements
//!   outside every member are summed out);
//! * conditioning on one element at a time with absorption, component
//!   splitting and memoization, for families too large for the first two.
//!
//! Monte Carlo returns the empirical frequency and a two-sided Hoeffding
//! radius at the configured confidence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{self, to_f64, Rational};
use crate::rng::{self, Coin};
use crate::set::{MemberSet, SetFamily};
use crate::{Bias, Error, Result};

/// Largest number of distinct members handled by inclusion–exclusion.
pub const EXACT_IE_CAP: usize = 20;
/// Largest support size handled by exhaustive enumeration.
pub const EXACT_ENUM_CAP: usize = 24;
/// Memo-table budget of the branching evaluator.
pub const EXACT_BRANCH_NODE_CAP: usize = 1 << 18;

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ExactIe,
    ExactEnum,
    ExactBranch,
    MonteCarlo,
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExactIe => "exact-ie",
            Method::ExactEnum => "exact-enum",
            Method::ExactBranch => "exact-branch",
            Method::MonteCarlo => "mc",
            Method::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "exact-ie" => Method::ExactIe,
            "exact-enum" => Method::ExactEnum,
            "exact-branch" => Method::ExactBranch,
            "mc" | "monte-carlo" => Method::MonteCarlo,
            "auto" => Method::Auto,
            _ => return None,
        })
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactIe | Method::ExactEnum | Method::ExactBranch)
    }
}

/// `⌈ln(2/δ) / (2ε²)⌉`: samples for a two-sided Hoeffding radius `ε` at confidence `1 − δ`.
pub fn hoeffding_samples(epsilon: f64, delta: f64) -> u64 {
    libm::ceil(libm::log(2.0 / delta) / (2.0 * epsilon * epsilon)) as u64
}

/// Two-sided Hoeffding radius for `samples` draws at confidence `1 − δ`.
pub fn hoeffding_radius(samples: u64, delta: f64) -> f64 {
    if samples == 0 {
        return 1.0;
    }
    libm::sqrt(libm::log(2.0 / delta) / (2.0 * samples as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct McParams {
    pub samples: u64,
    pub seed: u64,
    pub substreams: u32,
    /// Confidence is `1 − delta`.
    pub delta: f64,
}

impl Default for McParams {
    fn default() -> Self {
        Self {
            samples: hoeffding_samples(DEFAULT_EPSILON, DEFAULT_DELTA),
            seed: rng::DEFAULT_SEED,
            substreams: rng::DEFAULT_SUBSTREAMS,
            delta: DEFAULT_DELTA,
        }
    }
}

impl McParams {
    pub fn with_samples(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbEstimate {
    /// Exact value, present for exact methods.
    pub exact: Option<Rational>,
    pub value: f64,
    pub method: Method,
    pub abs_error: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    /// `δ` of the `1 − δ` confidence, for sampled estimates.
    pub delta: Option<f64>,
}

impl ProbEstimate {
    pub fn exact(value: Rational, method: Method) -> Self {
        Self {
            value: to_f64(&value),
            exact: Some(value),
            method,
            abs_error: 0.0,
            samples: 0,
            seed: None,
            delta: None,
        }
    }

    pub fn sampled(hits: u64, params: &McParams) -> Self {
        let value = if params.samples == 0 {
            0.0
        } else {
            hits as f64 / params.samples as f64
        };
        Self {
            exact: None,
            value,
            method: Method::MonteCarlo,
            abs_error: hoeffding_radius(params.samples, params.delta),
            samples: params.samples,
            seed: Some(params.seed),
            delta: Some(params.delta),
        }
    }

    /// `1 − value`, preserving exactness.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.exact = self.exact.as_ref().map(|v| Rational::one() - v);
        out.value = 1.0 - self.value;
        out
    }
}

/// Distinct members with every superset of another member removed, canonically sorted.
/// The satisfaction probability only depends on this antichain.
pub fn minimal_members(members: &[MemberSet]) -> Vec<MemberSet> {
    let mut sorted: Vec<MemberSet> = members.to_vec();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sorted.dedup();
    // Distinct sets of equal size never absorb each other, so each set is
    // only tested against strictly smaller kept sets.
    let mut kept: Vec<MemberSet> = Vec::with_capacity(sorted.len());
    let mut smaller = 0;
    for s in sorted {
        while smaller < kept.len() && kept[smaller].len() < s.len() {
            smaller += 1;
        }
        if !kept[..smaller].iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

/// Relabels the support of `members` to `0..k`; returns the sorted support.
fn compress(members: &[MemberSet]) -> (Vec<usize>, Vec<MemberSet>) {
    let support = members
        .iter()
        .fold(MemberSet::empty(), |acc, m| acc.union(m))
        .to_vec();
    let mut index = BTreeMap::new();
    for (i, &x) in support.iter().enumerate() {
        index.insert(x, i);
    }
    let remapped = members.iter().map(|m| m.map(|x| index[&x])).collect();
    (support, remapped)
}

/// `Σ_k coeff[k] α^k (1−α)^(top−k)` for `top = coeff.len() − 1`.
fn bernstein_sum(coeff: &[i64], alpha: &Bias) -> Rational {
    let top = coeff.len().saturating_sub(1);
    let a = alpha.value();
    let b = alpha.complement();
    // Work over the common denominator den^top.
    let (an, ad) = (a.numer().clone(), a.denom().clone());
    let bn = b.numer().clone();
    let mut total = BigInt::zero();
    for (k, &c) in coeff.iter().enumerate() {
        if c == 0 {
            continue;
        }
        total += BigInt::from(c) * num_traits::pow(an.clone(), k) * num_traits::pow(bn.clone(), top - k);
    }
    Rational::new(total, num_traits::pow(ad, top))
}

/// `Σ_k coeff[k] α^k`.
fn power_sum(coeff: &[i64], alpha: &Bias) -> Rational {
    let a = alpha.value();
    let top = coeff.len().saturating_sub(1);
    let (an, ad) = (a.numer().clone(), a.denom().clone());
    let mut total = BigInt::zero();
    for (k, &c) in coeff.iter().enumerate() {
        if c == 0 {
            continue;
        }
        total += BigInt::from(c) * num_traits::pow(an.clone(), k) * num_traits::pow(ad.clone(), top - k);
    }
    Rational::new(total, num_traits::pow(ad, top))
}

/// Inclusion–exclusion over the distinct members:
/// `Σ_{∅≠G} (−1)^{|G|+1} α^{|∪G|}`.
pub fn exact_ie(family: &SetFamily, alpha: &Bias) -> Result<Rational> {
    let mut distinct: Vec<MemberSet> = family.members().to_vec();
    distinct.sort();
    distinct.dedup();
    ie_on(&distinct, alpha)
}

fn ie_on(distinct: &[MemberSet], alpha: &Bias) -> Result<Rational> {
    let d = distinct.len();
    if d > EXACT_IE_CAP {
        return Err(Error::CapExceeded {
            what: "exact-ie distinct members",
            limit: EXACT_IE_CAP as u64,
            actual: d as u64,
        });
    }
    if d == 0 {
        return Ok(Rational::zero());
    }
    let (support, members) = compress(distinct);
    let words = support.len().div_ceil(64).max(1);
    let dense: Vec<u64> = members
        .iter()
        .flat_map(|m| {
            let mut row = vec![0u64; words];
            row[..m.words().len()].copy_from_slice(m.words());
            row
        })
        .collect();
    let mut unions = vec![0u64; words << d];
    let mut coeff = vec![0i64; support.len() + 1];
    for mask in 1usize..(1 << d) {
        let low = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        let mut size = 0usize;
        for k in 0..words {
            let v = unions[prev * words + k] | dense[low * words + k];
            unions[mask * words + k] = v;
            size += v.count_ones() as usize;
        }
        coeff[size] += if mask.count_ones() % 2 == 1 { 1 } else { -1 };
    }
    Ok(power_sum(&coeff, alpha))
}

/// Exhaustive enumeration: `Σ_{R covers some member} α^{|R|}(1−α)^{k−|R|}` over
/// subsets `R` of the support (size `k`).
pub fn exact_enum(family: &SetFamily, alpha: &Bias) -> Result<Rational> {
    let support = family.support();
    let k = support.len();
    if k > EXACT_ENUM_CAP {
        return Err(Error::CapExceeded {
            what: "exact-enum support size",
            limit: EXACT_ENUM_CAP as u64,
            actual: k as u64,
        });
    }
    if family.is_empty() {
        return Ok(Rational::zero());
    }
    let (_, members) = compress(family.members());
    let full = 1usize << k;
    let mut covered = vec![false; full];
    for m in &members {
        covered[m.to_mask().expect("support fits in a word") as usize] = true;
    }
    // Upward closure: R is covered iff some member is a subset of R.
    for b in 0..k {
        let bit = 1usize << b;
        for r in 0..full {
            if r & bit != 0 && covered[r ^ bit] {
                covered[r] = true;
            }
        }
    }
    let mut coeff = vec![0i64; k + 1];
    for (r, &c) in covered.iter().enumerate() {
        if c {
            coeff[r.count_ones() as usize] += 1;
        }
    }
    Ok(bernstein_sum(&coeff, alpha))
}

/// Conditioning on the most frequent element with absorption, component
/// splitting and memoization.
pub fn exact_branch(family: &SetFamily, alpha: &Bias) -> Result<Rational> {
    let mut b = Brancher {
        alpha: alpha.value().clone(),
        beta: alpha.complement(),
        memo: BTreeMap::new(),
    };
    b.prob(minimal_members(family.members()))
}

struct Brancher {
    alpha: Rational,
    beta: Rational,
    memo: BTreeMap<Vec<MemberSet>, Rational>,
}

impl Brancher {
    /// `fam` is a canonically sorted antichain.
    fn prob(&mut self, fam: Vec<MemberSet>) -> Result<Rational> {
        match fam.len() {
            0 => return Ok(Rational::zero()),
            1 => return Ok(rational::pow(&self.alpha, fam[0].len())),
            _ => {}
        }
        if fam[0].is_empty() {
            return Ok(Rational::one());
        }
        if let Some(v) = self.memo.get(&fam) {
            return Ok(v.clone());
        }
        if self.memo.len() >= EXACT_BRANCH_NODE_CAP {
            return Err(Error::CapExceeded {
                what: "exact-branch memo entries",
                limit: EXACT_BRANCH_NODE_CAP as u64,
                actual: self.memo.len() as u64,
            });
        }
        let components = split_components(&fam);
        let value = if components.len() > 1 {
            // Multiply unreduced and normalize once; many small components
            // would otherwise pay a gcd per factor.
            let (mut num, mut den) = (BigInt::one(), BigInt::one());
            for c in components {
                let miss = Rational::one() - self.prob(c)?;
                num *= miss.numer();
                den *= miss.denom();
            }
            Rational::one() - Rational::new(num, den)
        } else {
            let x = most_frequent(&fam);
            let mut shrunk = Vec::new();
            let mut rest = Vec::new();
            for s in &fam {
                if s.contains(x) {
                    let mut t = s.clone();
                    t.remove(x);
                    shrunk.push(t);
                } else {
                    rest.push(s.clone());
                }
            }
            // Only shrunk members can absorb the others.
            let mut with: Vec<MemberSet> = rest
                .iter()
                .filter(|s| !shrunk.iter().any(|t| t.is_subset(s)))
                .cloned()
                .collect();
            with.extend(shrunk);
            with.sort();
            let p_with = self.prob(with)?;
            let p_without = self.prob(rest)?;
            &self.alpha * p_with + &self.beta * p_without
        };
        self.memo.insert(fam, value.clone());
        Ok(value)
    }
}

fn most_frequent(fam: &[MemberSet]) -> usize {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for s in fam {
        for x in s.iter() {
            *counts.entry(x).or_default() += 1;
        }
    }
    // Highest count, ties to the smallest id.
    let mut best = (0usize, usize::MAX);
    for (&x, &c) in &counts {
        if c > best.0 {
            best = (c, x);
        }
    }
    best.1
}

/// Splits into groups of members connected through shared elements.
fn split_components(fam: &[MemberSet]) -> Vec<Vec<MemberSet>> {
    let n = fam.iter().filter_map(MemberSet::max_element).max().map_or(0, |m| m + 1);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in fam {
        let mut it = s.iter();
        if let Some(first) = it.next() {
            for y in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<MemberSet>> = BTreeMap::new();
    for s in fam {
        let root = s.iter().next().map_or(usize::MAX, |x| find(&mut parent, x));
        groups.entry(root).or_default().push(s.clone());
    }
    groups.into_values().collect()
}

/// Precomputed sampler over the minimal members, relabeled to the support.
pub struct Sampler {
    support: usize,
    masks: Option<Vec<u64>>,
    sets: Vec<MemberSet>,
    coin: Coin,
}

impl Sampler {
    pub fn new(family: &SetFamily, alpha: &Bias) -> Self {
        let (support, members) = compress(&minimal_members(family.members()));
        let masks = if support.len() <= 64 {
            members.iter().map(MemberSet::to_mask).collect::<Option<Vec<_>>>()
        } else {
            None
        };
        Self {
            support: support.len(),
            masks,
            sets: members,
            coin: Coin::new(alpha),
        }
    }

    /// Number of hits among `samples` draws from substream `index` of `seed`.
    pub fn run_substream(&self, seed: u64, index: u32, samples: u64) -> u64 {
        let mut rng = rng::substream(seed, index);
        let mut hits = 0;
        if self.sets.is_empty() {
            return 0;
        }
        if let Some(masks) = &self.masks {
            for _ in 0..samples {
                let mut r = 0u64;
                for b in 0..self.support {
                    if self.coin.flip(&mut rng) {
                        r |= 1 << b;
                    }
                }
                if masks.iter().any(|m| m & !r == 0) {
                    hits += 1;
                }
            }
        } else {
            for _ in 0..samples {
                let r = MemberSet::from_elements((0..self.support).filter(|_| self.coin.flip(&mut rng)));
                if self.sets.iter().any(|m| m.is_subset(&r)) {
                    hits += 1;
                }
            }
        }
        hits
    }
}

/// Sequential Monte Carlo over all substreams.
pub fn monte_carlo(family: &SetFamily, alpha: &Bias, params: &McParams) -> ProbEstimate {
    let sampler = Sampler::new(family, alpha);
    let hits = rng::split_work(params.samples, params.substreams)
        .into_iter()
        .enumerate()
        .map(|(i, n)| sampler.run_substream(params.seed, i as u32, n))
        .sum();
    ProbEstimate::sampled(hits, params)
}

/// Satisfaction probability by the requested method. `Auto` picks the
/// cheapest applicable exact method and falls back to sampling.
pub fn satisfaction_probability(
    family: &SetFamily,
    alpha: &Bias,
    method: Method,
    mc: &McParams,
) -> Result<ProbEstimate> {
    match method {
        Method::ExactIe => Ok(ProbEstimate::exact(exact_ie(family, alpha)?, method)),
        Method::ExactEnum => Ok(ProbEstimate::exact(exact_enum(family, alpha)?, method)),
        Method::ExactBranch => Ok(ProbEstimate::exact(exact_branch(family, alpha)?, method)),
        Method::MonteCarlo => Ok(monte_carlo(family, alpha, mc)),
        Method::Auto => {
            if let Some(exact) = auto_exact(family, alpha) {
                return Ok(exact);
            }
            Ok(monte_carlo(family, alpha, mc))
        }
    }
}

/// The exact part of `Auto`: `None` when every exact method is over budget.
pub fn auto_exact(family: &SetFamily, alpha: &Bias) -> Option<ProbEstimate> {
    if family.is_empty() {
        return Some(ProbEstimate::exact(Rational::zero(), Method::ExactIe));
    }
    let minimal = minimal_members(family.members());
    let d = minimal.len();
    let k = family.support().len();
    let ie_cost = if d >= 63 { u64::MAX } else { 1u64 << d };
    let enum_cost = if k >= 58 { u64::MAX } else { (1u64 << k) * (k as u64).max(1) };
    if d <= EXACT_IE_CAP && (ie_cost <= enum_cost || k > EXACT_ENUM_CAP) {
        return ie_on(&minimal, alpha)
            .ok()
            .map(|v| ProbEstimate::exact(v, Method::ExactIe));
    }
    if k <= EXACT_ENUM_CAP {
        return exact_enum(family, alpha)
            .ok()
            .map(|v| ProbEstimate::exact(v, Method::ExactEnum));
    }
    let mut b = Brancher {
        alpha: alpha.value().clone(),
        beta: alpha.complement(),
        memo: BTreeMap::new(),
    };
    b.prob(minimal)
        .ok()
        .map(|v| ProbEstimate::exact(v, Method::ExactBranch))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfying,
    NotSatisfying,
    /// A sampled estimate whose confidence interval straddles `1 − β`.
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Satisfying => "satisfying",
            Verdict::NotSatisfying => "not-satisfying",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// Decides `probability > 1 − β`. Exact values use the strict inequality;
/// sampled values only decide when the whole interval lies on one side.
pub fn decide(estimate: &ProbEstimate, beta: &Bias) -> Verdict {
    let threshold = beta.complement();
    if let Some(v) = &estimate.exact {
        return if *v > threshold {
            Verdict::Satisfying
        } else {
            Verdict::NotSatisfying
        };
    }
    let t = to_f64(&threshold);
    if estimate.value - estimate.abs_error > t {
        Verdict::Satisfying
    } else if estimate.value + estimate.abs_error <= t {
        Verdict::NotSatisfying
    } else {
        Verdict::Indeterminate
    }
}

/// Whether the family is (α, β)-satisfying.
pub fn is_satisfying(
    family: &SetFamily,
    alpha: &Bias,
    beta: &Bias,
    method: Method,
    mc: &McParams,
) -> Result<(Verdict, ProbEstimate)> {
    let est = satisfaction_probability(family, alpha, method, mc)?;
    Ok((decide(&est, beta), est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn half() -> Bias {
        Bias::from_ratio(1, 2).unwrap()
    }

    fn all_exact(f: &SetFamily, a: &Bias) -> [Rational; 3] {
        [
            exact_ie(f, a).unwrap(),
            exact_enum(f, a).unwrap(),
            exact_branch(f, a).unwrap(),
        ]
    }

    #[test]
    fn single_singleton_is_alpha() {
        let a = Bias::from_ratio(2, 7).unwrap();
        for v in all_exact(&fam(1, &[&[0]]), &a) {
            assert_eq!(v, ratio(2, 7));
        }
    }

    #[test]
    fn two_singletons_at_half() {
        for v in all_exact(&fam(2, &[&[0], &[1]]), &half()) {
            assert_eq!(v, ratio(3, 4));
        }
    }

    #[test]
    fn product_family_two_by_two() {
        // Brute force over the 16 subsets of {0,1,2,3}: R must meet both {0,1} and {2,3}.
        let f = fam(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]);
        for v in all_exact(&f, &half()) {
            assert_eq!(v, ratio(9, 16));
        }
    }

    #[test]
    fn empty_family_and_empty_member() {
        let empty = SetFamily::from_lists::<&[usize]>(3, &[]).unwrap();
        for v in all_exact(&empty, &half()) {
            assert_eq!(v, Rational::zero());
        }
        let with_empty = fam(3, &[&[0, 1], &[]]);
        for v in all_exact(&with_empty, &half()) {
            assert_eq!(v, Rational::one());
        }
        let est = satisfaction_probability(&with_empty, &half(), Method::Auto, &McParams::default()).unwrap();
        assert_eq!(est.exact, Some(Rational::one()));
    }

    #[test]
    fn caps_are_enforced_for_forced_methods() {
        let lists: Vec<Vec<usize>> = (0..21).map(|i| vec![i]).collect();
        let f = SetFamily::from_lists(30, &lists).unwrap();
        let err = satisfaction_probability(&f, &half(), Method::ExactIe, &McParams::default());
        assert!(matches!(err, Err(Error::CapExceeded { limit: 20, actual: 21, .. })));
        let lists: Vec<Vec<usize>> = (0..5).map(|i| (5 * i..5 * i + 5).collect()).collect();
        let f = SetFamily::from_lists(25, &lists).unwrap();
        let err = satisfaction_probability(&f, &half(), Method::ExactEnum, &McParams::default());
        assert!(matches!(err, Err(Error::CapExceeded { limit: 24, actual: 25, .. })));
        // Auto still answers exactly.
        let est = satisfaction_probability(&f, &half(), Method::Auto, &McParams::default()).unwrap();
        assert!(est.exact.is_some());
    }

    #[test]
    fn auto_goes_to_branching_for_wide_families() {
        // 64 disjoint singletons: support 64, 64 minimal members.
        let lists: Vec<Vec<usize>> = (0..64).map(|i| vec![i]).collect();
        let f = SetFamily::from_lists(64, &lists).unwrap();
        let est = satisfaction_probability(&f, &half(), Method::Auto, &McParams::default()).unwrap();
        assert_eq!(est.method, Method::ExactBranch);
        let miss = rational::pow(&ratio(1, 2), 64);
        assert_eq!(est.exact.unwrap(), Rational::one() - miss);
    }

    #[test]
    fn strict_threshold() {
        let mc = McParams::default();
        let (v, est) = is_satisfying(&fam(1, &[&[0]]), &half(), &half(), Method::ExactEnum, &mc).unwrap();
        assert_eq!(est.exact, Some(ratio(1, 2)));
        assert_eq!(v, Verdict::NotSatisfying);
        let (v, est) =
            is_satisfying(&fam(3, &[&[0], &[1], &[2]]), &half(), &half(), Method::ExactEnum, &mc).unwrap();
        assert_eq!(est.exact, Some(ratio(7, 8)));
        assert_eq!(v, Verdict::Satisfying);
        // Four blocks of one element: the only member is {0,1,2,3}.
        let (v, est) =
            is_satisfying(&fam(4, &[&[0, 1, 2, 3]]), &half(), &half(), Method::ExactEnum, &mc).unwrap();
        assert_eq!(est.exact, Some(ratio(1, 16)));
        assert_eq!(v, Verdict::NotSatisfying);
    }

    #[test]
    fn mc_decisions_are_conservative() {
        let beta = half();
        let mut est = ProbEstimate::sampled(600, &McParams::with_samples(1000, 1));
        assert_eq!(decide(&est, &beta), Verdict::Satisfying);
        est.value = 0.52;
        assert_eq!(decide(&est, &beta), Verdict::Indeterminate);
        est.value = 0.40;
        assert_eq!(decide(&est, &beta), Verdict::NotSatisfying);
    }

    #[test]
    fn default_sample_count() {
        // ln(200) / (2 * 1e-4) = 26491.6...
        assert_eq!(McParams::default().samples, 26492);
        assert!((hoeffding_radius(26492, 0.01) - 0.01).abs() < 1e-6);
    }

    #[test]
    fn mc_is_reproducible_and_close() {
        let f = fam(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]);
        let p = McParams::with_samples(20_000, 7);
        let a = monte_carlo(&f, &half(), &p);
        let b = monte_carlo(&f, &half(), &p);
        assert_eq!(a, b);
        assert!((a.value - 0.5625).abs() <= a.abs_error);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn mc_wide_support_path() {
        let lists: Vec<Vec<usize>> = (0..70).map(|i| vec![i]).collect();
        let f = SetFamily::from_lists(70, &lists).unwrap();
        let est = monte_carlo(&f, &Bias::from_ratio(1, 100).unwrap(), &McParams::with_samples(20_000, 3));
        let truth = 1.0 - libm::pow(0.99, 70.0);
        assert!((est.value - truth).abs() <= est.abs_error);
    }

    #[test]
    fn minimal_members_drop_supersets_and_duplicates() {
        let m = minimal_members(fam(4, &[&[0, 1], &[0], &[2, 3], &[0], &[1, 2, 3]]).members());
        assert_eq!(
            m,
            vec![MemberSet::from_elements([0]), MemberSet::from_elements([2, 3])]
        );
    }

    #[test]
    fn components_split_on_shared_elements() {
        let f = fam(6, &[&[0, 1], &[1, 2], &[3], &[4, 5]]);
        let c = split_components(f.members());
        assert_eq!(c.len(), 3);
    }
}
