//! Generators and coloring experiments: product families and their greedy
//! spread subfamilies, random families, and rainbow / white-cover searches.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;

use crate::probability::{self, ProbEstimate};
use crate::rational::{self, to_f64, Rational};
use crate::rng::{self, Coin};
use crate::set::{GroundSet, MemberSet, SetFamily};
use crate::{Bias, Error, Result};

/// Largest number of members a generator will materialize.
pub const MEMBER_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Green,
    Blue,
    White,
    Plain,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
            Color::White => "white",
            Color::Plain => "plain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "red" => Color::Red,
            "green" => Color::Green,
            "blue" => Color::Blue,
            "white" => Color::White,
            "plain" => Color::Plain,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Palette {
    RedBlue,
    RedGreenBlue,
    WhitePlain,
}

impl Palette {
    pub fn colors(self) -> &'static [Color] {
        match self {
            Palette::RedBlue => &[Color::Red, Color::Blue],
            Palette::RedGreenBlue => &[Color::Red, Color::Green, Color::Blue],
            Palette::WhitePlain => &[Color::White, Color::Plain],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Palette::RedBlue => "red-blue",
            Palette::RedGreenBlue => "red-green-blue",
            Palette::WhitePlain => "white-plain",
        }
    }
}

/// A color per ground element.
#[derive(Clone, Debug, PartialEq)]
pub struct Coloring {
    pub colors: Vec<Color>,
    pub palette: Palette,
    pub seed: Option<u64>,
    /// White probability, for white/plain colorings.
    pub delta: Option<Rational>,
}

impl Coloring {
    pub fn new(colors: Vec<Color>, palette: Palette) -> Result<Self> {
        if let Some(c) = colors.iter().find(|c| !palette.colors().contains(c)) {
            return Err(Error::InvalidParameter(format!(
                "color {} is not in the {} palette",
                c.name(),
                palette.name()
            )));
        }
        Ok(Self {
            colors,
            palette,
            seed: None,
            delta: None,
        })
    }

    /// Each element colored uniformly from the palette.
    pub fn random(n: usize, palette: Palette, seed: u64, stream: u32) -> Self {
        let mut rng = rng::substream(seed, stream);
        let choices = palette.colors();
        let colors = (0..n).map(|_| choices[rng.random_range(0..choices.len())]).collect();
        Self {
            colors,
            palette,
            seed: Some(seed),
            delta: None,
        }
    }

    /// Each element white independently with probability `delta`.
    pub fn white(n: usize, delta: &Bias, seed: u64, stream: u32) -> Self {
        let mut rng = rng::substream(seed, stream);
        let coin = Coin::new(delta);
        let colors = (0..n)
            .map(|_| if coin.flip(&mut rng) { Color::White } else { Color::Plain })
            .collect();
        Self {
            colors,
            palette: Palette::WhitePlain,
            seed: Some(seed),
            delta: Some(delta.value().clone()),
        }
    }

    pub fn covers(&self, n: usize) -> Result<()> {
        if self.colors.len() < n {
            return Err(Error::InvalidParameter(format!(
                "coloring covers {} of {n} elements",
                self.colors.len()
            )));
        }
        Ok(())
    }

    pub fn all(&self, s: &MemberSet, color: Color) -> bool {
        s.iter().all(|x| self.colors[x] == color)
    }

    /// The elements with the given color.
    pub fn class(&self, color: Color) -> MemberSet {
        MemberSet::from_elements((0..self.colors.len()).filter(|&x| self.colors[x] == color))
    }
}

/// All `m^w` transversals of `w` consecutive blocks of size `m`, in
/// lexicographic order.
pub fn product_family(w: usize, m: usize) -> Result<SetFamily> {
    if w == 0 || m == 0 {
        return Err(Error::InvalidParameter("product family needs w >= 1 and m >= 1".into()));
    }
    let count = (m as u64).checked_pow(w as u32).filter(|&c| c <= MEMBER_BUDGET);
    let Some(count) = count else {
        return Err(Error::CapExceeded {
            what: "product family members",
            limit: MEMBER_BUDGET,
            actual: libm::pow(m as f64, w as f64).min(u64::MAX as f64) as u64,
        });
    };
    let bounds: Vec<usize> = (0..=w).map(|i| i * m).collect();
    let ground = GroundSet::with_blocks(w * m, bounds)?;
    let mut members = Vec::with_capacity(count as usize);
    let mut digits = alloc::vec![0usize; w];
    for _ in 0..count {
        members.push(MemberSet::from_elements(digits.iter().enumerate().map(|(i, &d)| i * m + d)));
        for i in (0..w).rev() {
            digits[i] += 1;
            if digits[i] < m {
                break;
            }
            digits[i] = 0;
        }
    }
    SetFamily::new(ground, members)
}

/// `(w, m)` when `family` is a full product family over equal blocks.
pub fn product_shape(family: &SetFamily) -> Option<(usize, usize)> {
    let bounds = family.ground().block_bounds()?;
    let w = bounds.len() - 1;
    let m = bounds[1] - bounds[0];
    if bounds.windows(2).any(|b| b[1] - b[0] != m) || !family.is_uniform() || family.w() != w {
        return None;
    }
    let expect = (m as u64).checked_pow(w as u32)?;
    let transversal = family
        .members()
        .iter()
        .all(|s| (0..w).all(|i| s.iter().filter(|&x| family.ground().block_of(x) == Some(i)).count() == 1));
    (family.len() as u64 == expect && family.distinct_len() == family.len() && transversal).then_some((w, m))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyOutcome {
    pub family: SetFamily,
    /// Indices into the product family of the kept members.
    pub kept: Vec<usize>,
    /// Largest allowed pairwise intersection, `⌊(1−ε)w⌋`.
    pub max_intersection: usize,
    /// `2^{−w} m^{(1−ε)w}`.
    pub size_bound: f64,
    pub size_bound_holds: bool,
}

/// Greedy in member order: keep a member, delete every later member meeting
/// it in more than `(1−ε)w` elements.
pub fn greedy_spread_subfamily(product: &SetFamily, epsilon: &Rational) -> Result<GreedyOutcome> {
    if *epsilon <= Rational::zero() || *epsilon > Rational::one() {
        return Err(Error::InvalidParameter("epsilon must lie in (0, 1]".into()));
    }
    let (w, m) = product_shape(product)
        .ok_or_else(|| Error::InvalidParameter("input is not a product family".into()))?;
    let limit = (Rational::one() - epsilon) * rational::int(w as i64);
    let max_intersection = limit.floor().to_integer();
    let max_intersection: usize = num_traits::ToPrimitive::to_usize(&max_intersection).unwrap_or(0);
    let mut kept: Vec<usize> = Vec::new();
    for (i, s) in product.members().iter().enumerate() {
        if kept
            .iter()
            .all(|&k| product.member(k).intersection_len(s) <= max_intersection)
        {
            kept.push(i);
        }
    }
    let family = product.subfamily(&kept);
    let eps = to_f64(epsilon);
    let size_bound = libm::pow(2.0, -(w as f64)) * libm::pow(m as f64, (1.0 - eps) * w as f64);
    Ok(GreedyOutcome {
        size_bound_holds: family.len() as f64 >= size_bound,
        family,
        kept,
        max_intersection,
        size_bound,
    })
}

/// Largest pairwise intersection over distinct indices (0 for fewer than two members).
pub fn max_pairwise_intersection(family: &SetFamily) -> usize {
    let m = family.members();
    let mut best = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            best = best.max(m[i].intersection_len(&m[j]));
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductClosedForm {
    /// `(1−(1−α)^m)^w`.
    pub closed_form: Rational,
    /// `1 − (1−(1−α)^m)^w`.
    pub closed_form_miss: Rational,
    pub exact: ProbEstimate,
    pub matches: bool,
}

/// Compares the exact satisfaction probability of the product family with
/// the closed form.
pub fn verify_product_closed_form(w: usize, m: usize, alpha: &Bias) -> Result<ProductClosedForm> {
    let family = product_family(w, m)?;
    let exact = probability::auto_exact(&family, alpha).ok_or(Error::CapExceeded {
        what: "exact methods for the product family",
        limit: probability::EXACT_BRANCH_NODE_CAP as u64,
        actual: family.len() as u64,
    })?;
    let block_hit = Rational::one() - rational::pow(&alpha.complement(), m);
    let closed_form = rational::pow(&block_hit, w);
    let matches = exact.exact.as_ref() == Some(&closed_form);
    Ok(ProductClosedForm {
        closed_form_miss: Rational::one() - &closed_form,
        closed_form,
        exact,
        matches,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustFreeInequality {
    /// Blocks untouched by any admissible kernel, at least `⌈εw⌉`.
    pub free_blocks: usize,
    /// `1 − (1 − 2^{−m})^{⌈εw⌉}`: a lower bound on the miss probability at α = 1/2.
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The inequality behind the no-robust-sunflower argument at `α = β = 1/2`:
/// every admissible kernel leaves `⌈εw⌉` blocks empty, and the link misses
/// with probability at least the left side.
pub fn robust_free_inequality(w: usize, m: usize, epsilon: &Rational) -> RobustFreeInequality {
    let free = (epsilon * rational::int(w as i64)).ceil().to_integer();
    let free_blocks: usize = num_traits::ToPrimitive::to_usize(&free).unwrap_or(0);
    let lhs = 1.0 - libm::pow(1.0 - libm::pow(2.0, -(m as f64)), free_blocks as f64);
    RobustFreeInequality {
        free_blocks,
        lhs,
        rhs: 0.5,
        holds: lhs > 0.5,
    }
}

/// A random family: `count` members with sizes drawn uniformly from
/// `min_size..=max_size`, elements uniform without replacement. With
/// `distinct`, repeats are redrawn (error if the space is too small).
pub fn random_family(
    n: usize,
    count: usize,
    min_size: usize,
    max_size: usize,
    distinct: bool,
    seed: u64,
) -> Result<SetFamily> {
    if min_size > max_size || max_size > n {
        return Err(Error::InvalidParameter(format!(
            "member sizes {min_size}..={max_size} do not fit a ground set of {n}"
        )));
    }
    if count as u64 > MEMBER_BUDGET {
        return Err(Error::CapExceeded {
            what: "random family members",
            limit: MEMBER_BUDGET,
            actual: count as u64,
        });
    }
    if distinct {
        let space: f64 = (min_size..=max_size).map(|k| binomial_f64(n, k)).sum();
        if (count as f64) > space {
            return Err(Error::InvalidParameter(format!(
                "only {space} distinct sets of the requested sizes exist"
            )));
        }
    }
    let mut rng = rng::substream(seed, 0);
    let mut seen = alloc::collections::BTreeSet::new();
    let mut members = Vec::with_capacity(count);
    while members.len() < count {
        let k = rng.random_range(min_size..=max_size);
        let s = MemberSet::from_elements(rng::sample_k_subset(&mut rng, n, k));
        if distinct && !seen.insert(s.clone()) {
            continue;
        }
        members.push(s);
    }
    SetFamily::new(GroundSet::new(n), members)
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// First ordered pair `(i, j)` of distinct sets with `S_i \ S_j` all red and
/// `S_j \ S_i` all blue.
pub fn rainbow_pair_search(family: &SetFamily, coloring: &Coloring) -> Result<Option<(usize, usize)>> {
    coloring.covers(family.n())?;
    let d = family.distinct();
    for &(i, a) in &d {
        for &(j, b) in &d {
            if i != j && coloring.all(&a.difference(b), Color::Red) && coloring.all(&b.difference(a), Color::Blue) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// First ordered triple `(i, j, k)` of distinct sets with, for
/// `Y = S_i ∩ S_j ∩ S_k`, `S_i \ Y` red, `S_j \ Y` green and `S_k \ Y` blue.
pub fn rainbow_triple_search(family: &SetFamily, coloring: &Coloring) -> Result<Option<(usize, usize, usize)>> {
    coloring.covers(family.n())?;
    let d = family.distinct();
    for &(i, a) in &d {
        for &(j, b) in &d {
            // Y ⊆ S_i ∩ S_j, so these parts of the petals are forced.
            if i == j || !coloring.all(&a.difference(b), Color::Red) || !coloring.all(&b.difference(a), Color::Green) {
                continue;
            }
            let ab = a.intersection(b);
            for &(k, c) in &d {
                if k == i || k == j {
                    continue;
                }
                let y = ab.intersection(c);
                if coloring.all(&a.difference(&y), Color::Red)
                    && coloring.all(&b.difference(&y), Color::Green)
                    && coloring.all(&c.difference(&y), Color::Blue)
                {
                    return Ok(Some((i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

/// First ordered pair `(i, j)` of distinct sets other than the anchor with
/// `S_i \ S` red, `S_j \ S` blue and `S_i ∩ S = S_j ∩ S ⊊ S`.
pub fn anchored_pair_search(
    family: &SetFamily,
    anchor: usize,
    coloring: &Coloring,
) -> Result<Option<(usize, usize)>> {
    coloring.covers(family.n())?;
    if anchor >= family.len() {
        return Err(Error::InvalidParameter(format!("anchor {anchor} out of range")));
    }
    let s = family.member(anchor);
    let d = family.distinct();
    for &(i, a) in &d {
        let trace = a.intersection(s);
        if trace == *s || !coloring.all(&a.difference(s), Color::Red) {
            continue;
        }
        for &(j, b) in &d {
            if i != j && b.intersection(s) == trace && coloring.all(&b.difference(s), Color::Blue) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WhiteCoverTrial {
    /// Members `S_j` with no `i ≠ j` such that `S_i \ S_j` is all white.
    pub uncovered: usize,
    /// Fraction of members whose cover multiplicity reaches the threshold.
    pub well_covered_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WhiteCoverStats {
    pub trials: Vec<WhiteCoverTrial>,
    pub mean_uncovered: f64,
    /// `(2/δ)^w`.
    pub mean_bound: f64,
    /// `|F| / (4/δ)^w`.
    pub multiplicity_threshold: f64,
    /// `1 − 2^{−w/2}`.
    pub fraction_target: f64,
    /// Trials whose well-covered fraction reached the target.
    pub trials_meeting_target: usize,
    pub seed: u64,
}

/// Cover multiplicity of every member for one white set `W`:
/// `#{i ≠ j : S_i \ S_j ⊆ W}` = `#{i : S_i \ W ⊆ S_j} − 1`.
pub fn cover_multiplicities(family: &SetFamily, white: &MemberSet) -> Vec<usize> {
    let members = family.members();
    let residual: Vec<MemberSet> = members.iter().map(|s| s.difference(white)).collect();
    let w = family.w();
    if w < 20 && (1usize << w) < members.len() {
        let mut counts: BTreeMap<&MemberSet, usize> = BTreeMap::new();
        for r in &residual {
            *counts.entry(r).or_default() += 1;
        }
        members
            .iter()
            .map(|s| s.subsets().iter().map(|t| counts.get(t).copied().unwrap_or(0)).sum::<usize>() - 1)
            .collect()
    } else {
        members
            .iter()
            .map(|s| residual.iter().filter(|r| r.is_subset(s)).count() - 1)
            .collect()
    }
}

/// Samples white sets (each element white with probability δ), one
/// substream per trial, and counts uncovered members and cover multiplicities.
pub fn white_cover_experiment(family: &SetFamily, delta: &Bias, trials: u32, seed: u64) -> WhiteCoverStats {
    let threshold = white_cover_threshold(family, delta);
    let runs: Vec<WhiteCoverTrial> = (0..trials)
        .map(|t| white_cover_trial(family, delta, seed, t, threshold))
        .collect();
    summarize_white_cover(family, delta, seed, runs)
}

/// `|F| / (4/δ)^w`.
pub fn white_cover_threshold(family: &SetFamily, delta: &Bias) -> f64 {
    family.len() as f64 / libm::pow(4.0 / delta.to_f64(), family.w() as f64)
}

/// One trial of [`white_cover_experiment`].
pub fn white_cover_trial(family: &SetFamily, delta: &Bias, seed: u64, trial: u32, threshold: f64) -> WhiteCoverTrial {
    let white = Coloring::white(family.n(), delta, seed, trial).class(Color::White);
    let mult = cover_multiplicities(family, &white);
    let uncovered = mult.iter().filter(|&&c| c == 0).count();
    let well = mult.iter().filter(|&&c| c as f64 >= threshold).count();
    WhiteCoverTrial {
        uncovered,
        well_covered_fraction: if mult.is_empty() { 1.0 } else { well as f64 / mult.len() as f64 },
    }
}

/// Aggregates per-trial results in trial order.
pub fn summarize_white_cover(family: &SetFamily, delta: &Bias, seed: u64, trials: Vec<WhiteCoverTrial>) -> WhiteCoverStats {
    let w = family.w() as f64;
    let d = delta.to_f64();
    let target = 1.0 - libm::pow(2.0, -w / 2.0);
    let mean = if trials.is_empty() {
        0.0
    } else {
        trials.iter().map(|t| t.uncovered as f64).sum::<f64>() / trials.len() as f64
    };
    WhiteCoverStats {
        mean_uncovered: mean,
        mean_bound: libm::pow(2.0 / d, w),
        multiplicity_threshold: white_cover_threshold(family, delta),
        fraction_target: target,
        trials_meeting_target: trials.iter().filter(|t| t.well_covered_fraction >= target).count(),
        trials,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn colored(colors: &[Color], palette: Palette) -> Coloring {
        Coloring::new(colors.to_vec(), palette).unwrap()
    }

    use Color::{Blue, Green, Red};

    #[test]
    fn product_examples() {
        let f = product_family(1, 3).unwrap();
        assert_eq!(f.members(), fam(3, &[&[0], &[1], &[2]]).members());
        let f = product_family(2, 2).unwrap();
        assert_eq!(f.members(), fam(4, &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]]).members());
        assert_eq!(f.ground().block_bounds(), Some(&[0, 2, 4][..]));
        assert_eq!(product_shape(&f), Some((2, 2)));
        assert_eq!(product_family(3, 2).unwrap().len(), 8);
        assert!(product_family(23, 2).is_err());
        assert!(product_shape(&fam(4, &[&[0, 2]])).is_none());
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_spread_subfamily(&product_family(2, 2).unwrap(), &ratio(1, 2)).unwrap();
        assert_eq!(g.family.len(), 4);
        let g = greedy_spread_subfamily(&product_family(2, 3).unwrap(), &ratio(1, 1)).unwrap();
        assert_eq!(g.family.len(), 3);
        assert_eq!(max_pairwise_intersection(&g.family), 0);
        assert!(greedy_spread_subfamily(&product_family(2, 2).unwrap(), &ratio(0, 1)).is_err());
        assert!(greedy_spread_subfamily(&fam(2, &[&[0, 1]]), &ratio(1, 2)).is_err());
    }

    #[test]
    fn product_closed_form_examples() {
        let c = verify_product_closed_form(2, 2, &Bias::from_ratio(1, 2).unwrap()).unwrap();
        assert_eq!(c.closed_form, ratio(9, 16));
        assert!(c.matches);
        let c = verify_product_closed_form(4, 1, &Bias::from_ratio(1, 2).unwrap()).unwrap();
        assert_eq!(c.closed_form, ratio(1, 16));
        assert!(c.matches);
        let a = Bias::from_ratio(1, 4).unwrap();
        let c = verify_product_closed_form(1, 5, &a).unwrap();
        assert_eq!(c.closed_form, Rational::one() - rational::pow(&ratio(3, 4), 5));
        assert!(c.matches);
    }

    #[test]
    fn robust_free_inequality_examples() {
        let h = robust_free_inequality(3, 2, &ratio(1, 3));
        assert_eq!(h.free_blocks, 1);
        assert!((h.lhs - 0.25).abs() < 1e-12);
        assert!(!h.holds);
        let h = robust_free_inequality(6, 2, &ratio(1, 2));
        assert_eq!(h.free_blocks, 3);
        assert!(h.holds);
    }

    #[test]
    fn rainbow_pair_examples() {
        let f = fam(2, &[&[0], &[1]]);
        assert_eq!(rainbow_pair_search(&f, &colored(&[Red, Blue], Palette::RedBlue)).unwrap(), Some((0, 1)));
        assert_eq!(rainbow_pair_search(&f, &colored(&[Red, Red], Palette::RedBlue)).unwrap(), None);
        let nested = fam(2, &[&[0, 1], &[0]]);
        assert_eq!(
            rainbow_pair_search(&nested, &colored(&[Red, Red], Palette::RedBlue)).unwrap(),
            Some((0, 1))
        );
    }

    #[test]
    fn rainbow_triple_examples() {
        let f = fam(3, &[&[0], &[1], &[2]]);
        let c = colored(&[Red, Green, Blue], Palette::RedGreenBlue);
        assert_eq!(rainbow_triple_search(&f, &c).unwrap(), Some((0, 1, 2)));
        let g = fam(4, &[&[3, 0], &[3, 1], &[3, 2]]);
        let c = colored(&[Red, Green, Blue, Red], Palette::RedGreenBlue);
        assert_eq!(rainbow_triple_search(&g, &c).unwrap(), Some((0, 1, 2)));
        assert_eq!(rainbow_triple_search(&fam(2, &[&[0], &[1]]), &colored(&[Red, Green], Palette::RedGreenBlue)).unwrap(), None);
    }

    #[test]
    fn anchored_examples() {
        let f = fam(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        let c = colored(&[Red, Red, Red, Blue], Palette::RedBlue);
        assert_eq!(anchored_pair_search(&f, 0, &c).unwrap(), Some((1, 2)));
        assert_eq!(anchored_pair_search(&fam(2, &[&[0, 1]]), 0, &colored(&[Red, Red], Palette::RedBlue)).unwrap(), None);
        // Both traces equal S: rejected even though the colors fit.
        let f = fam(4, &[&[0, 1], &[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(anchored_pair_search(&f, 0, &c).unwrap(), None);
    }

    #[test]
    fn identical_sets_cover_each_other() {
        let s: &[usize] = &[0, 1, 2];
        let f = fam(3, &[s; 5]);
        let stats = white_cover_experiment(&f, &Bias::from_ratio(1, 2).unwrap(), 20, 1);
        assert!(stats.trials.iter().all(|t| t.uncovered == 0));
    }

    #[test]
    fn multiplicity_paths_agree() {
        let f = random_family(12, 40, 1, 3, false, 9).unwrap();
        for t in 0..10 {
            let white = Coloring::white(12, &Bias::from_ratio(1, 2).unwrap(), 4, t).class(Color::White);
            let fast = cover_multiplicities(&f, &white);
            let slow: Vec<usize> = f
                .members()
                .iter()
                .enumerate()
                .map(|(j, sj)| {
                    f.members()
                        .iter()
                        .enumerate()
                        .filter(|(i, si)| *i != j && si.difference(sj).is_subset(&white))
                        .count()
                })
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn random_family_shapes() {
        let f = random_family(10, 30, 2, 2, true, 5).unwrap();
        assert_eq!(f.len(), 30);
        assert_eq!(f.distinct_len(), 30);
        assert!(f.is_uniform() && f.w() == 2);
        assert!(random_family(4, 7, 2, 2, true, 5).is_err());
        assert_eq!(random_family(10, 30, 2, 2, true, 5).unwrap(), f);
    }
}
