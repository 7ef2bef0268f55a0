//! The width-reduction step, the Janson final step and the iteration schedule.
//!
//! A pair `(W, S)` is good when some member `S′` has `S′ \ W ⊆ S \ W` and
//! `|S′ \ W| ≤ w′`; the canonical witness minimizes `S′ \ W` in canonical
//! set order (size, then lexicographic) and then the member index.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::probability::{self, McParams, Method, ProbEstimate};
use crate::rational::{self, to_f64, Rational};
use crate::rng::{self, Coin};
use crate::set::{MemberSet, SetFamily};
use crate::spread::WeightedFamily;
use crate::{Bias, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairClass {
    Good {
        /// Index of the canonical `S′`.
        witness: usize,
        /// `S′ \ W`.
        reduced: MemberSet,
    },
    Bad,
}

impl PairClass {
    pub fn is_good(&self) -> bool {
        matches!(self, PairClass::Good { .. })
    }
}

fn check_width(family: &SetFamily, w_prime: usize) -> Result<()> {
    if w_prime > family.w() {
        return Err(Error::InvalidParameter(format!(
            "w' = {w_prime} exceeds the family width {}",
            family.w()
        )));
    }
    Ok(())
}

/// Classification of every member against `W`.
pub fn classify_all(family: &SetFamily, w: &MemberSet, w_prime: usize) -> Result<Vec<PairClass>> {
    check_width(family, w_prime)?;
    // Reduced sets small enough to serve as S′ \ W, with their smallest index.
    let mut pool: BTreeMap<MemberSet, usize> = BTreeMap::new();
    let residual: Vec<MemberSet> = family.members().iter().map(|s| s.difference(w)).collect();
    for (i, r) in residual.iter().enumerate() {
        if r.len() <= w_prime {
            pool.entry(r.clone()).or_insert(i);
        }
    }
    Ok(residual
        .iter()
        .map(|r| {
            let hit = if r.len() < 20 && (1usize << r.len()) <= pool.len() {
                r.subsets()
                    .into_iter()
                    .filter(|t| t.len() <= w_prime)
                    .find_map(|t| pool.get(&t).map(|&i| (i, t)))
            } else {
                pool.iter().find(|(t, _)| t.is_subset(r)).map(|(t, &i)| (i, t.clone()))
            };
            match hit {
                Some((witness, reduced)) => PairClass::Good { witness, reduced },
                None => PairClass::Bad,
            }
        })
        .collect())
}

/// Classifies the pair `(W, S_index)`.
pub fn classify_pair(family: &SetFamily, w: &MemberSet, index: usize, w_prime: usize) -> Result<PairClass> {
    check_width(family, w_prime)?;
    if index >= family.len() {
        return Err(Error::InvalidParameter(format!("member index {index} out of range")));
    }
    let r = family.member(index).difference(w);
    let best = family
        .members()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.difference(w), i))
        .filter(|(t, _)| t.len() <= w_prime && t.is_subset(&r))
        .min();
    Ok(match best {
        Some((reduced, witness)) => PairClass::Good { witness, reduced },
        None => PairClass::Bad,
    })
}

/// `σ(B(W))`.
pub fn bad_mass(wf: &WeightedFamily, w: &MemberSet, w_prime: usize) -> Result<Rational> {
    let classes = classify_all(wf.family(), w, w_prime)?;
    Ok(classes
        .iter()
        .zip(wf.sigma())
        .filter(|(c, _)| !c.is_good())
        .map(|(_, s)| s)
        .sum())
}

/// Weights scaled to integers: `σ_i = n_i / scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerWeights {
    pub n: Vec<u128>,
    pub scale: BigInt,
}

impl IntegerWeights {
    pub fn new(sigma: &[Rational]) -> Result<Self> {
        let scale = rational::common_denominator(sigma);
        let n = sigma
            .iter()
            .map(|s| (s * Rational::from_integer(scale.clone())).to_integer().to_u128())
            .collect::<Option<Vec<u128>>>()
            .ok_or(Error::Overflow("integerized weights"))?;
        n.iter()
            .try_fold(0u128, |acc, &v| acc.checked_add(v))
            .ok_or(Error::Overflow("integerized total weight"))?;
        Ok(Self { n, scale })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// `W` uniform among subsets of size `p·n`.
    FixedSize,
    /// Each element in `W` independently with probability `p`.
    Biased,
}

impl SampleMode {
    pub fn name(self) -> &'static str {
        match self {
            SampleMode::FixedSize => "fixed-size",
            SampleMode::Biased => "biased",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fixed-size" | "fixed" => Some(SampleMode::FixedSize),
            "biased" => Some(SampleMode::Biased),
            _ => None,
        }
    }
}

/// Samples `W` for trial `t` from substream `t` of the seed.
#[derive(Clone, Debug)]
pub struct RestrictionSampler {
    n: usize,
    mode: SampleMode,
    size: usize,
    coin: Coin,
    seed: u64,
}

impl RestrictionSampler {
    pub fn new(n: usize, p: &Bias, mode: SampleMode, seed: u64) -> Result<Self> {
        let pn = p.value() * rational::int(n as i64);
        let size = match mode {
            SampleMode::FixedSize => {
                if !pn.is_integer() {
                    return Err(Error::InvalidParameter(format!(
                        "fixed-size sampling needs p·n integral, got {}",
                        rational::to_ratio_string(&pn)
                    )));
                }
                pn.to_integer().to_usize().unwrap_or(0)
            }
            SampleMode::Biased => 0,
        };
        Ok(Self {
            n,
            mode,
            size,
            coin: Coin::new(p),
            seed,
        })
    }

    pub fn fixed_size(&self) -> Option<usize> {
        (self.mode == SampleMode::FixedSize).then_some(self.size)
    }

    pub fn sample(&self, trial: u32) -> MemberSet {
        let mut rng = rng::substream(self.seed, trial);
        match self.mode {
            SampleMode::FixedSize => MemberSet::from_elements(rng::sample_k_subset(&mut rng, self.n, self.size)),
            SampleMode::Biased => MemberSet::from_elements((0..self.n).filter(|_| self.coin.flip(&mut rng))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BadMassExperiment {
    pub mode: SampleMode,
    pub fixed_size: Option<usize>,
    pub trials: u32,
    pub seed: u64,
    /// Exact mean of `σ(B(W))` over the sampled `W`.
    pub mean: Rational,
    pub empirical_mean: f64,
    /// `(4/p)^w · s_{w′}`.
    pub bound: Rational,
    pub bound_f64: f64,
    pub ratio: f64,
    pub within_bound: bool,
}

/// Prepared state for [`expected_bad_mass_experiment`], so that trials can be
/// run in any order (and in parallel) with identical results.
#[derive(Clone, Debug)]
pub struct BadMassSampler {
    family: SetFamily,
    weights: IntegerWeights,
    w_prime: usize,
    sampler: RestrictionSampler,
    p: Bias,
}

impl BadMassSampler {
    pub fn new(wf: &WeightedFamily, p: &Bias, w_prime: usize, mode: SampleMode, seed: u64) -> Result<Self> {
        check_width(wf.family(), w_prime)?;
        Ok(Self {
            family: wf.family().clone(),
            weights: IntegerWeights::new(wf.sigma())?,
            w_prime,
            sampler: RestrictionSampler::new(wf.family().n(), p, mode, seed)?,
            p: p.clone(),
        })
    }

    /// Integerized bad mass for trial `t`.
    pub fn trial(&self, t: u32) -> u128 {
        let w = self.sampler.sample(t);
        let classes = classify_all(&self.family, &w, self.w_prime).expect("width checked");
        classes
            .iter()
            .zip(&self.weights.n)
            .filter(|(c, _)| !c.is_good())
            .map(|(_, &n)| n)
            .sum()
    }

    /// Combines per-trial integerized masses (in trial order) into the report.
    pub fn summarize(&self, per_trial: &[u128], s_w_prime: &Rational) -> BadMassExperiment {
        let total: BigInt = per_trial.iter().map(|&v| BigInt::from(v)).sum();
        let trials = per_trial.len() as u32;
        let mean = if trials == 0 {
            Rational::zero()
        } else {
            Rational::new(total, &self.weights.scale * BigInt::from(trials))
        };
        let four_over_p = rational::int(4) / self.p.value();
        let bound = rational::pow(&four_over_p, self.family.w()) * s_w_prime;
        let empirical_mean = to_f64(&mean);
        let bound_f64 = to_f64(&bound);
        BadMassExperiment {
            mode: self.sampler.mode,
            fixed_size: self.sampler.fixed_size(),
            trials,
            seed: self.sampler.seed,
            ratio: if bound_f64 > 0.0 { empirical_mean / bound_f64 } else { f64::INFINITY },
            within_bound: mean <= bound,
            mean,
            empirical_mean,
            bound,
            bound_f64,
        }
    }
}

/// Averages `σ(B(W))` over sampled `W` and compares with `(4/p)^w s_{w′}`.
pub fn expected_bad_mass_experiment(
    wf: &WeightedFamily,
    p: &Bias,
    w_prime: usize,
    mode: SampleMode,
    trials: u32,
    seed: u64,
    s_w_prime: &Rational,
) -> Result<BadMassExperiment> {
    let sampler = BadMassSampler::new(wf, p, w_prime, mode, seed)?;
    let per_trial: Vec<u128> = (0..trials).map(|t| sampler.trial(t)).collect();
    Ok(sampler.summarize(&per_trial, s_w_prime))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkDomination {
    /// Number of nonempty `T` inside some reduced member that were checked.
    pub checked: usize,
    /// First `T` (canonical order) with `σ′(F′_T) > σ(F_T)`, with both masses.
    pub violation: Option<(MemberSet, Rational, Rational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutcome {
    pub w: MemberSet,
    pub w_prime: usize,
    pub bad_indices: Vec<usize>,
    pub bad_mass: Rational,
    /// Reduced sets `π(S) \ W` in first-appearance order, weights aggregated.
    pub reduced: WeightedFamily,
    /// For each original member: the chosen `π(S)` index, if good.
    pub pi: Vec<Option<usize>>,
    /// For each original member: index of its reduced set, if good.
    pub projection: Vec<Option<usize>>,
    /// The reduced family contains `∅` (W covers a member).
    pub contains_empty: bool,
    /// `None` when the reduced width is too large for the exhaustive check.
    pub link_domination: Option<LinkDomination>,
}

impl ReductionOutcome {
    /// `σ′(F′) + σ(B(W))`.
    pub fn accounted_mass(&self) -> Rational {
        self.reduced.total() + &self.bad_mass
    }
}

/// Largest reduced width for the exhaustive link-domination check.
pub const LINK_CHECK_WIDTH_CAP: usize = 16;

/// Builds `F′ = {π(S) \ W : S good}` with `σ′(R) = σ(π⁻¹(R))`.
pub fn reduce(wf: &WeightedFamily, w: &MemberSet, w_prime: usize) -> Result<ReductionOutcome> {
    let family = wf.family();
    let classes = classify_all(family, w, w_prime)?;
    let mut index_of: BTreeMap<MemberSet, usize> = BTreeMap::new();
    let mut reduced_sets: Vec<MemberSet> = Vec::new();
    let mut reduced_sigma: Vec<Rational> = Vec::new();
    let mut pi = Vec::with_capacity(classes.len());
    let mut projection = Vec::with_capacity(classes.len());
    let mut bad_indices = Vec::new();
    let mut bad = Rational::zero();
    for (i, c) in classes.into_iter().enumerate() {
        match c {
            PairClass::Good { witness, reduced } => {
                let k = *index_of.entry(reduced.clone()).or_insert_with(|| {
                    reduced_sets.push(reduced);
                    reduced_sigma.push(Rational::zero());
                    reduced_sets.len() - 1
                });
                reduced_sigma[k] += wf.weight(i);
                pi.push(Some(witness));
                projection.push(Some(k));
            }
            PairClass::Bad => {
                bad += wf.weight(i);
                bad_indices.push(i);
                pi.push(None);
                projection.push(None);
            }
        }
    }
    let contains_empty = reduced_sets.iter().any(MemberSet::is_empty);
    let reduced_family = SetFamily::new(family.ground().clone(), reduced_sets)?;
    let reduced = WeightedFamily::from_parts(reduced_family, reduced_sigma);
    let link_domination = if reduced.family().w() <= LINK_CHECK_WIDTH_CAP {
        let masses = reduced.link_masses()?;
        let mut violation = None;
        for (t, m) in &masses {
            let original = wf.link_mass(t);
            if *m > original {
                violation = Some((t.clone(), m.clone(), original));
                break;
            }
        }
        Some(LinkDomination {
            checked: masses.len(),
            violation,
        })
    } else {
        None
    };
    Ok(ReductionOutcome {
        w: w.clone(),
        w_prime,
        bad_indices,
        bad_mass: bad,
        reduced,
        pi,
        projection,
        contains_empty,
        link_domination,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionStats {
    pub trials: u32,
    pub seed: u64,
    /// Trials where `W′` contained a reduced member.
    pub reduced_hits: u32,
    /// Trials where `W ∪ W′` contained an original member.
    pub original_hits: u32,
    /// Trials with a reduced hit but no original hit (must be zero).
    pub violations: u32,
}

/// Samples `W′ ∼ U(X \ W, α′)` and checks that a reduced member inside `W′`
/// always yields an original member inside `W ∪ W′`.
pub fn composition_experiment(
    outcome: &ReductionOutcome,
    original: &SetFamily,
    alpha_prime: &Bias,
    trials: u32,
    seed: u64,
) -> CompositionStats {
    let coin = Coin::new(alpha_prime);
    let n = original.n();
    let mut stats = CompositionStats {
        trials,
        seed,
        reduced_hits: 0,
        original_hits: 0,
        violations: 0,
    };
    for t in 0..trials {
        let mut rng = rng::substream(seed, t);
        let w2 = MemberSet::from_elements((0..n).filter(|&x| !outcome.w.contains(x) && coin.flip(&mut rng)));
        let reduced_hit = outcome.reduced.family().members().iter().any(|r| r.is_subset(&w2));
        let union = outcome.w.union(&w2);
        let original_hit = original.members().iter().any(|s| s.is_subset(&union));
        stats.reduced_hits += u32::from(reduced_hit);
        stats.original_hits += u32::from(original_hit);
        stats.violations += u32::from(reduced_hit && !original_hit);
    }
    stats
}

#[derive(Clone, Debug, PartialEq)]
pub struct JansonHypothesis {
    /// `max{4 ln(1/β), 2} · w / α`.
    pub kappa: f64,
    /// `max_T σ(F_T) κ^{|T|} / σ(F)`; the hypothesis needs this below 1.
    pub worst_ratio: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JansonReport {
    pub w: usize,
    /// Multiplicities are `σ(S) · scale`.
    pub scale: Rational,
    /// `N = Σ N_S`.
    pub total: BigInt,
    pub mu: Rational,
    pub delta: Rational,
    /// `μ² / (2Δ)`.
    pub exponent: f64,
    /// `exp(−μ²/(2Δ))`.
    pub bound: f64,
    pub delta_ge_mu: bool,
    /// Non-satisfaction probability of the uniformized multiset.
    pub nonsat: ProbEstimate,
    /// Non-satisfaction probability of the family itself.
    pub original_nonsat: ProbEstimate,
    /// `nonsat ≤ bound` (for sampled estimates: not contradicted by the interval).
    pub bound_holds: bool,
    pub hypothesis: Option<JansonHypothesis>,
}

/// Largest support for exact non-satisfaction of non-uniform multisets.
pub const JANSON_ENUM_CAP: usize = 16;

/// Janson quantities for the multiset with `N_S = σ(S)·scale` copies of each
/// member, each copy padded to width `w` with its own dummy elements.
/// `scale` is the smallest factor making every weight an integer.
pub fn janson_report(
    wf: &WeightedFamily,
    alpha: &Bias,
    beta: Option<&Bias>,
    mc: &McParams,
) -> Result<JansonReport> {
    let family = wf.family();
    if family.is_empty() {
        return Err(Error::InvalidParameter("Janson report of an empty family".into()));
    }
    let w = family.w();
    if w == 0 {
        return Err(Error::InvalidParameter("Janson report needs a nonempty member".into()));
    }
    // Minimal integer multiplicities, aggregated over repeated sets.
    let den = rational::common_denominator(wf.sigma());
    let scaled: Vec<BigInt> = wf
        .sigma()
        .iter()
        .map(|s| (s * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
    let scale = Rational::new(den, g.clone());
    let mut mult: BTreeMap<MemberSet, BigInt> = BTreeMap::new();
    for (s, v) in family.members().iter().zip(&scaled) {
        *mult.entry(s.clone()).or_insert_with(BigInt::zero) += v / &g;
    }
    mult.retain(|_, v| !v.is_zero());
    let sets: Vec<(&MemberSet, &BigInt)> = mult.iter().collect();
    let total: BigInt = sets.iter().map(|(_, v)| *v).sum();

    let a = alpha.value();
    let aw = rational::pow(a, w);
    let mu = Rational::from_integer(total.clone()) * &aw;
    // coeff[ℓ]: ordered pairs of distinct copies meeting in ℓ elements.
    let mut coeff = alloc::vec![BigInt::zero(); w + 1];
    for (i, (s, ns)) in sets.iter().enumerate() {
        if !s.is_empty() {
            coeff[s.len()] += *ns * (*ns - BigInt::one());
        }
        for (t, nt) in &sets[i + 1..] {
            let l = s.intersection_len(t);
            if l > 0 {
                coeff[l] += BigInt::from(2) * *ns * *nt;
            }
        }
    }
    let mut delta = mu.clone();
    for (l, c) in coeff.iter().enumerate() {
        if !c.is_zero() {
            delta += Rational::from_integer(c.clone()) * rational::pow(a, 2 * w - l);
        }
    }
    let exponent_exact = &mu * &mu / (rational::int(2) * &delta);
    let exponent = to_f64(&exponent_exact);
    let bound = libm::exp(-exponent);

    let original = probability::satisfaction_probability(family, alpha, Method::Auto, mc)?.complement();
    let uniform = sets.iter().all(|(s, _)| s.len() == w);
    let nonsat = if uniform {
        original.clone()
    } else {
        padded_nonsat(&sets, w, alpha, mc)
    };
    let bound_holds = match &nonsat.exact {
        Some(v) => to_f64(v) <= bound,
        None => nonsat.value - nonsat.abs_error <= bound,
    };
    let hypothesis = beta.map(|b| janson_hypothesis(wf, alpha, b)).transpose()?;
    Ok(JansonReport {
        w,
        scale,
        total,
        delta_ge_mu: delta >= mu,
        mu,
        delta,
        exponent,
        bound,
        nonsat,
        original_nonsat: original,
        bound_holds,
        hypothesis,
    })
}

/// `E_R[Π_{S ⊆ R} (1 − α^{w−|S|})^{N_S}]` over `R ∼ U(support, α)`: padded
/// copies of `S` are covered independently once `S ⊆ R`.
fn padded_nonsat(sets: &[(&MemberSet, &BigInt)], w: usize, alpha: &Bias, mc: &McParams) -> ProbEstimate {
    let support = sets.iter().fold(MemberSet::empty(), |acc, (s, _)| acc.union(s)).to_vec();
    let index: BTreeMap<usize, usize> = support.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let local: Vec<(MemberSet, usize, usize)> = sets
        .iter()
        .map(|(s, n)| (s.map(|x| index[&x]), s.len(), n.to_usize().unwrap_or(usize::MAX)))
        .collect();
    let k = support.len();
    let a = alpha.value();
    if k <= JANSON_ENUM_CAP {
        let miss: Vec<Rational> = local
            .iter()
            .map(|(_, len, n)| rational::pow(&(Rational::one() - rational::pow(a, w - len)), *n))
            .collect();
        let b = alpha.complement();
        let mut total = Rational::zero();
        for r in 0u64..(1u64 << k) {
            let rs = MemberSet::from_mask(r);
            let mut f = Rational::one();
            for ((s, _, _), m) in local.iter().zip(&miss) {
                if s.is_subset(&rs) {
                    f *= m;
                    if f.is_zero() {
                        break;
                    }
                }
            }
            if !f.is_zero() {
                let size = r.count_ones() as usize;
                total += f * rational::pow(a, size) * rational::pow(&b, k - size);
            }
        }
        return ProbEstimate::exact(total, Method::ExactEnum);
    }
    let af = alpha.to_f64();
    let miss: Vec<f64> = local
        .iter()
        .map(|(_, len, n)| libm::pow(1.0 - libm::pow(af, (w - len) as f64), *n as f64))
        .collect();
    let coin = Coin::new(alpha);
    let mut sum = 0.0;
    for (i, n) in rng::split_work(mc.samples, mc.substreams).into_iter().enumerate() {
        let mut g = rng::substream(mc.seed, i as u32);
        for _ in 0..n {
            let r = MemberSet::from_elements((0..k).filter(|_| coin.flip(&mut g)));
            let mut f = 1.0;
            for ((s, _, _), m) in local.iter().zip(&miss) {
                if s.is_subset(&r) {
                    f *= m;
                }
            }
            sum += f;
        }
    }
    let mut est = ProbEstimate::sampled(0, mc);
    est.value = if mc.samples == 0 { 0.0 } else { sum / mc.samples as f64 };
    est
}

/// Checks `σ(F_T) < κ^{−|T|} σ(F)` for every nonempty `T`, with
/// `κ = max{4 ln(1/β), 2} · w / α`, in floating point.
pub fn janson_hypothesis(wf: &WeightedFamily, alpha: &Bias, beta: &Bias) -> Result<JansonHypothesis> {
    let w = wf.family().w() as f64;
    let q = (4.0 * libm::log(1.0 / beta.to_f64())).max(2.0);
    let kappa = q * w / alpha.to_f64();
    let total = to_f64(&wf.total());
    let mut worst: f64 = 0.0;
    for (t, m) in wf.link_masses()? {
        worst = worst.max(to_f64(&m) * libm::pow(kappa, t.len() as f64) / total);
    }
    Ok(JansonHypothesis {
        kappa,
        worst_ratio: worst,
        holds: worst < 1.0,
    })
}

/// Relative slack for floating-point comparisons in the schedule.
pub const SCHEDULE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleStep {
    /// `w_i` (step `i ≥ 1`).
    pub w: f64,
    pub p: f64,
    /// `ln γ_i` with `γ_i = (4/p)^{w_{i−1}} / κ^{w_i}`.
    pub ln_gamma: f64,
    pub gamma: f64,
    /// `δ_i = √γ_i`.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: f64,
    pub pass: bool,
}

impl Constraint {
    fn ge(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            pass: lhs >= rhs * (1.0 - SCHEDULE_TOLERANCE),
            lhs,
            relation: ">=",
            rhs,
        }
    }

    fn le(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            pass: lhs <= rhs * (1.0 + SCHEDULE_TOLERANCE),
            lhs,
            relation: "<=",
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub epsilon: f64,
    pub w_star: f64,
    pub k_const: f64,
    pub c_const: f64,
    /// `w_0, w_1, …, w_r`.
    pub widths: Vec<f64>,
    pub steps: Vec<ScheduleStep>,
    /// `Δ_r = Σ δ_i`.
    pub delta_r: f64,
    /// The four constraints, then the final-step requirement, `Δ_r ≤ β/4`
    /// and the step-count bound `r ≤ ⌈K ln w / ε⌉`.
    pub constraints: Vec<Constraint>,
}

impl Schedule {
    pub fn r(&self) -> usize {
        self.steps.len()
    }

    pub fn all_pass(&self) -> bool {
        self.constraints.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleInput {
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    /// Defaults to `1 / ln ln w`.
    pub epsilon: Option<f64>,
    /// Defaults to `c · max{ln(1/β), ln ln w}`.
    pub w_star: Option<f64>,
    pub k_const: f64,
    pub c_const: f64,
}

impl ScheduleInput {
    pub fn new(w: f64, alpha: f64, beta: f64, kappa: f64) -> Self {
        Self {
            w,
            alpha,
            beta,
            kappa,
            epsilon: None,
            w_star: None,
            k_const: 1.0,
            c_const: 1.0,
        }
    }
}

/// Largest number of reduction steps the schedule will generate.
pub const SCHEDULE_STEP_CAP: usize = 1 << 20;

/// Builds the width sequence and evaluates the constraints, natural logs throughout.
pub fn schedule(input: &ScheduleInput) -> Result<Schedule> {
    let ScheduleInput {
        w,
        alpha,
        beta,
        kappa,
        k_const,
        c_const,
        ..
    } = *input;
    if !(w >= 4.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!("schedule needs finite w >= 4, got {w}")));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    if !(kappa > 1.0) {
        return Err(Error::InvalidParameter(format!("kappa must exceed 1, got {kappa}")));
    }
    let lw = libm::log(w);
    let llw = libm::log(lw);
    let epsilon = input.epsilon.unwrap_or(1.0 / llw);
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let w_star = input
        .w_star
        .unwrap_or(c_const * libm::log(1.0 / beta).max(llw));
    if epsilon * w_star < 1.0 - SCHEDULE_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "epsilon * w_star = {} < 1: widths would stop shrinking",
            epsilon * w_star
        )));
    }
    let mut widths = alloc::vec![w];
    while *widths.last().unwrap() > w_star {
        if widths.len() > SCHEDULE_STEP_CAP {
            return Err(Error::CapExceeded {
                what: "schedule steps",
                limit: SCHEDULE_STEP_CAP as u64,
                actual: widths.len() as u64,
            });
        }
        let next = libm::ceil((1.0 - epsilon) * widths.last().unwrap());
        if next >= *widths.last().unwrap() {
            return Err(Error::InvalidParameter("width sequence stopped shrinking".into()));
        }
        widths.push(next);
    }
    let r = widths.len() - 1;
    let p = alpha / (2.0 * r.max(1) as f64);
    let ln_four_over_p = libm::log(4.0 / p);
    let ln_kappa = libm::log(kappa);
    let steps: Vec<ScheduleStep> = (1..=r)
        .map(|i| {
            let ln_gamma = widths[i - 1] * ln_four_over_p - widths[i] * ln_kappa;
            ScheduleStep {
                w: widths[i],
                p,
                ln_gamma,
                gamma: libm::exp(ln_gamma),
                delta: libm::exp(ln_gamma / 2.0),
            }
        })
        .collect();
    let delta_r: f64 = steps.iter().map(|s| s.delta).sum();
    let final_factor = 2.0 + 4.0 * libm::log(2.0 / beta);
    let constraints = alloc::vec![
        Constraint::ge("1: w* >= 1/epsilon", w_star, 1.0 / epsilon),
        Constraint::ge(
            "2: kappa^(1-epsilon) >= 32 K ln w / (epsilon alpha)",
            libm::pow(kappa, 1.0 - epsilon),
            32.0 * k_const * lw / (epsilon * alpha),
        ),
        Constraint::ge(
            "3: kappa >= 4 (2 + 4 ln(2/beta)) w* / alpha",
            kappa,
            4.0 * final_factor * w_star / alpha,
        ),
        Constraint::le("4: 2^(1-w*) <= beta/4", libm::pow(2.0, 1.0 - w_star), beta / 4.0),
        Constraint::ge(
            "final step: kappa/2 >= (2 + 4 ln(2/beta)) 2 w* / alpha",
            kappa / 2.0,
            final_factor * 2.0 * w_star / alpha,
        ),
        Constraint::le("Delta_r <= beta/4", delta_r, beta / 4.0),
        Constraint::le(
            "r <= ceil(K ln w / epsilon)",
            r as f64,
            libm::ceil(k_const * lw / epsilon),
        ),
    ];
    Ok(Schedule {
        w,
        alpha,
        beta,
        kappa,
        epsilon,
        w_star,
        k_const,
        c_const,
        widths,
        steps,
        delta_r,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn fam(n: usize, lists: &[&[usize]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn ms(xs: &[usize]) -> MemberSet {
        MemberSet::from_elements(xs.iter().copied())
    }

    #[test]
    fn classify_examples() {
        let f = fam(3, &[&[0, 1], &[1, 2]]);
        let c = classify_pair(&f, &ms(&[0]), 1, 1).unwrap();
        assert_eq!(c, PairClass::Good { witness: 0, reduced: ms(&[1]) });
        assert_eq!(classify_all(&f, &ms(&[0]), 1).unwrap()[1], c);
        // W = ∅ and w' < w on a uniform family: everything bad.
        assert!(classify_all(&f, &MemberSet::empty(), 1).unwrap().iter().all(|c| !c.is_good()));
        // W covering a member: everything good.
        assert!(classify_all(&f, &ms(&[0, 1]), 0).unwrap().iter().all(PairClass::is_good));
        assert!(classify_pair(&f, &ms(&[0]), 0, 3).is_err());
    }

    #[test]
    fn reflexive_witness_is_allowed() {
        let f = fam(3, &[&[0, 1, 2]]);
        let c = classify_pair(&f, &ms(&[0]), 0, 2).unwrap();
        assert_eq!(c, PairClass::Good { witness: 0, reduced: ms(&[1, 2]) });
    }

    #[test]
    fn bad_mass_examples() {
        let f = fam(3, &[&[0, 1], &[1, 2]]);
        let wf = WeightedFamily::normalized(f);
        assert_eq!(bad_mass(&wf, &ms(&[0]), 1).unwrap(), Rational::zero());
        assert_eq!(bad_mass(&wf, &MemberSet::empty(), 1).unwrap(), int(1));
        assert_eq!(bad_mass(&wf, &ms(&[1, 2]), 0).unwrap(), Rational::zero());
    }

    #[test]
    fn reduce_examples() {
        let f = fam(3, &[&[0, 1], &[1, 2]]);
        let wf = WeightedFamily::normalized(f.clone());
        let out = reduce(&wf, &ms(&[0]), 1).unwrap();
        assert_eq!(out.reduced.family().members(), &[ms(&[1])]);
        assert_eq!(out.reduced.sigma(), &[int(1)]);
        assert_eq!(out.pi, alloc::vec![Some(0), Some(0)]);
        assert_eq!(out.accounted_mass(), int(1));
        assert!(out.link_domination.unwrap().violation.is_none());

        let out = reduce(&wf, &MemberSet::empty(), 2).unwrap();
        assert_eq!(out.reduced.family().members(), f.members());
        assert_eq!(out.reduced.sigma(), wf.sigma());

        let out = reduce(&wf, &ms(&[0, 1, 2]), 1).unwrap();
        assert_eq!(out.reduced.family().members(), &[MemberSet::empty()]);
        assert!(out.contains_empty);
        assert_eq!(out.reduced.total(), int(1));
    }

    #[test]
    fn fixed_size_needs_integral_pn() {
        let wf = WeightedFamily::normalized(fam(3, &[&[0, 1], &[1, 2]]));
        let half = Bias::from_ratio(1, 2).unwrap();
        let err = expected_bad_mass_experiment(&wf, &half, 1, SampleMode::FixedSize, 10, 1, &int(1));
        assert!(err.is_err());
        let ok = expected_bad_mass_experiment(&wf, &half, 1, SampleMode::Biased, 10, 1, &int(1)).unwrap();
        assert_eq!(ok.trials, 10);
    }

    #[test]
    fn composition_is_sound() {
        let f = fam(6, &[&[0, 1, 2], &[1, 3, 4], &[2, 4, 5], &[0, 3, 5]]);
        let wf = WeightedFamily::normalized(f.clone());
        let out = reduce(&wf, &ms(&[1, 2]), 2).unwrap();
        let stats = composition_experiment(&out, &f, &Bias::from_ratio(1, 2).unwrap(), 500, 3);
        assert_eq!(stats.violations, 0);
        assert!(stats.reduced_hits > 0);
    }

    #[test]
    fn janson_disjoint_sets_closed_form() {
        // N disjoint w-sets: Δ = μ, non-satisfaction (1 − α^w)^N.
        for (nsets, w) in [(1usize, 1usize), (5, 2), (20, 3)] {
            let lists: Vec<Vec<usize>> = (0..nsets).map(|i| (i * w..(i + 1) * w).collect()).collect();
            let f = SetFamily::from_lists(nsets * w, &lists).unwrap();
            let a = Bias::from_ratio(1, 2).unwrap();
            let rep = janson_report(&WeightedFamily::counting(f), &a, None, &McParams::default()).unwrap();
            assert_eq!(rep.delta, rep.mu);
            let aw = rational::pow(&ratio(1, 2), w);
            assert_eq!(rep.mu, rational::int(nsets as i64) * &aw);
            let expect = rational::pow(&(Rational::one() - aw), nsets);
            assert_eq!(rep.nonsat.exact, Some(expect));
            assert!(rep.bound_holds);
        }
    }

    #[test]
    fn janson_product_family() {
        // w=2, m=4, α=1/2: μ = 16/4 = 4. Ordered pairs: 16 diagonal at α², 2·16·3 = 96 sharing one
        // element at α³, the rest disjoint: Δ = 16/4 + 96/8 = 16.
        let lists: Vec<Vec<usize>> = (0..4).flat_map(|a| (4..8).map(move |b| alloc::vec![a, b])).collect();
        let f = SetFamily::from_lists(8, &lists).unwrap();
        let rep = janson_report(&WeightedFamily::counting(f), &Bias::from_ratio(1, 2).unwrap(), None, &McParams::default())
            .unwrap();
        assert_eq!(rep.mu, int(4));
        assert_eq!(rep.delta, int(16));
        assert!((rep.bound - libm::exp(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn janson_padding_with_multiplicity() {
        // {0} with weight 2 and {0,1} with weight 1 at w = 2: copies of {0} carry one dummy each.
        let f = fam(2, &[&[0], &[0, 1]]);
        let wf = WeightedFamily::new(f, alloc::vec![int(2), int(1)]).unwrap();
        let a = Bias::from_ratio(1, 2).unwrap();
        let rep = janson_report(&wf, &a, None, &McParams::default()).unwrap();
        // R ∌ 0: 1/2. R ∋ 0, ∌ 1: (1/4)(1/2)^2. R ⊇ {0,1}: covered.
        assert_eq!(rep.nonsat.exact, Some(ratio(9, 16)));
        assert!(rep.delta_ge_mu);
    }

    #[test]
    fn schedule_structure() {
        let kappa = crate::spread::kappa_bound(libm::pow(2.0, 256.0), 1.0 / 3.0, 1.0 / 3.0, crate::spread::KappaVariant::LogLog, 1.0)
            .unwrap()
            .value;
        let s = schedule(&ScheduleInput::new(libm::pow(2.0, 256.0), 1.0 / 3.0, 1.0 / 3.0, kappa)).unwrap();
        for pair in s.widths.windows(2) {
            assert_eq!(pair[1], libm::ceil((1.0 - s.epsilon) * pair[0]));
        }
        assert!(s.widths[s.widths.len() - 2] > s.w_star);
        assert!(*s.widths.last().unwrap() <= s.w_star);
        assert_eq!(s.constraints.len(), 7);
        assert!(s.constraints[6].pass);
        assert!(s.constraints[0].pass);
    }

    #[test]
    fn schedule_small_kappa_fails_constraint_two() {
        let s = schedule(&ScheduleInput::new(1e6, 0.5, 0.5, 1.01)).unwrap();
        assert!(!s.constraints[1].pass);
        assert!(s.constraints[1].lhs < s.constraints[1].rhs);
    }

    #[test]
    fn schedule_errors() {
        assert!(schedule(&ScheduleInput::new(3.0, 0.5, 0.5, 10.0)).is_err());
        assert!(schedule(&ScheduleInput::new(100.0, 0.5, 0.5, 1.0)).is_err());
        let mut input = ScheduleInput::new(1e6, 0.5, 0.5, 10.0);
        input.w_star = Some(1.0);
        assert!(schedule(&input).is_err());
    }
}
