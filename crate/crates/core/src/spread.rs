//! Weighted families, weight profiles and spreadness.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::rational::{self, cmp_root, to_f64, Rational};
use crate::set::{MemberSet, SetFamily};
use crate::{Error, Result};

/// Largest member size for which link masses are enumerated (2^w subsets per member).
pub const SPREAD_MEMBER_CAP: usize = 24;

/// A family with one nonnegative rational weight per member.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFamily {
    family: SetFamily,
    sigma: Vec<Rational>,
}

impl WeightedFamily {
    /// Validates one nonnegative weight per member, not all zero.
    pub fn new(family: SetFamily, sigma: Vec<Rational>) -> Result<Self> {
        if sigma.len() != family.len() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} members",
                sigma.len(),
                family.len()
            )));
        }
        if let Some(i) = sigma.iter().position(|s| *s < Rational::zero()) {
            return Err(Error::InvalidParameter(format!("weight {i} is negative")));
        }
        if !family.is_empty() && sigma.iter().all(Zero::is_zero) {
            return Err(Error::InvalidParameter("all weights are zero".into()));
        }
        Ok(Self { family, sigma })
    }

    /// Weight 1 per member, so `σ(F_T) = |F_T|`.
    pub fn counting(family: SetFamily) -> Self {
        let sigma = alloc::vec![Rational::one(); family.len()];
        Self { family, sigma }
    }

    /// Weight `1/|F|` per member, so `σ(F) = 1`.
    pub fn normalized(family: SetFamily) -> Self {
        let n = family.len().max(1) as i64;
        let sigma = alloc::vec![rational::ratio(1, n); family.len()];
        Self { family, sigma }
    }

    pub(crate) fn from_parts(family: SetFamily, sigma: Vec<Rational>) -> Self {
        debug_assert_eq!(family.len(), sigma.len());
        Self { family, sigma }
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn sigma(&self) -> &[Rational] {
        &self.sigma
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.sigma[i]
    }

    /// `σ(F)`.
    pub fn total(&self) -> Rational {
        self.sigma.iter().sum()
    }

    /// `σ` of the members at `indices`.
    pub fn mass(&self, indices: &[usize]) -> Rational {
        indices.iter().map(|&i| &self.sigma[i]).sum()
    }

    /// `σ(F_T)`: total weight of the members containing `t`.
    pub fn link_mass(&self, t: &MemberSet) -> Rational {
        self.family
            .members()
            .iter()
            .zip(&self.sigma)
            .filter(|(s, _)| t.is_subset(s))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            family: self.family.clone(),
            sigma: self.sigma.iter().map(|s| s * factor).collect(),
        }
    }

    /// `σ(F_T)` for every nonempty `T` contained in some member.
    pub fn link_masses(&self) -> Result<BTreeMap<MemberSet, Rational>> {
        if self.family.w() > SPREAD_MEMBER_CAP {
            return Err(Error::CapExceeded {
                what: "spread member size",
                limit: SPREAD_MEMBER_CAP as u64,
                actual: self.family.w() as u64,
            });
        }
        let mut masses: BTreeMap<MemberSet, Rational> = BTreeMap::new();
        for (s, w) in self.family.members().iter().zip(&self.sigma) {
            for t in s.subsets() {
                if t.is_empty() {
                    continue;
                }
                *masses.entry(t).or_insert_with(Rational::zero) += w;
            }
        }
        Ok(masses)
    }
}

/// `(s₀; s₁, …, s_k)` with `s₀ ≥ s₁ ≥ … ≥ s_k ≥ 0` and `s₀ > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    s0: Rational,
    s: Vec<Rational>,
}

impl WeightProfile {
    pub fn new(s0: Rational, s: Vec<Rational>) -> Result<Self> {
        if s0 <= Rational::zero() {
            return Err(Error::InvalidParameter("s0 must be positive".into()));
        }
        let mut prev = &s0;
        for (i, v) in s.iter().enumerate() {
            if v > prev {
                return Err(Error::InvalidParameter(format!("profile increases at s{}", i + 1)));
            }
            prev = v;
        }
        if s.last().is_some_and(|v| *v < Rational::zero()) {
            return Err(Error::InvalidParameter("profile entries must be nonnegative".into()));
        }
        Ok(Self { s0, s })
    }

    /// `(1; κ⁻¹, …, κ^{−w})`.
    pub fn kappa(kappa: &Rational, w: usize) -> Result<Self> {
        if *kappa < Rational::one() {
            return Err(Error::InvalidParameter("kappa must be at least 1".into()));
        }
        let inv = kappa.recip();
        Self::new(Rational::one(), (1..=w).map(|i| rational::pow(&inv, i)).collect())
    }

    pub fn s0(&self) -> &Rational {
        &self.s0
    }

    /// `s₁, …, s_k`.
    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    /// `s_i`, with `s_i = 0` beyond the stored entries.
    pub fn get(&self, i: usize) -> Rational {
        match i {
            0 => self.s0.clone(),
            _ => self.s.get(i - 1).cloned().unwrap_or_else(Rational::zero),
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            s0: &self.s0 * factor,
            s: self.s.iter().map(|v| v * factor).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpreadViolation {
    /// `σ(F) < s₀`.
    Total { total: Rational, bound: Rational },
    /// `σ(F_T) > s_{|T|}`.
    Link { t: MemberSet, mass: Rational, bound: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpreadReport {
    pub violation: Option<SpreadViolation>,
}

impl SpreadReport {
    pub fn is_spread(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `σ(F) ≥ s₀` and then `σ(F_T) ≤ s_{|T|}` for each nonempty `T`
/// inside some member, in canonical order; reports the first violation.
pub fn is_spread(wf: &WeightedFamily, profile: &WeightProfile) -> Result<SpreadReport> {
    let w = wf.family().w();
    if profile.len() < w {
        return Err(Error::ProfileTooShort { len: profile.len(), w });
    }
    let total = wf.total();
    if total < *profile.s0() {
        return Ok(SpreadReport {
            violation: Some(SpreadViolation::Total {
                total,
                bound: profile.s0().clone(),
            }),
        });
    }
    for (t, mass) in wf.link_masses()? {
        let bound = profile.get(t.len());
        if mass > bound {
            return Ok(SpreadReport {
                violation: Some(SpreadViolation::Link { t, mass, bound }),
            });
        }
    }
    Ok(SpreadReport { violation: None })
}

/// `κ* = min_T (|F| / |F_T|)^{1/|T|}` over nonempty `T` inside some member.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadCoefficient {
    pub kappa_star: f64,
    /// The minimizing `T` (first in canonical order among ties).
    pub argmin: MemberSet,
    /// `|F| / |F_argmin|`; `κ*` is its `|argmin|`-th root.
    pub ratio: Rational,
    pub size: usize,
    pub w: usize,
    /// `|F|^{1/w}`: full κ-spreadness also needs `κ` at most this.
    pub size_root: f64,
}

pub fn spread_coefficient(family: &SetFamily) -> Result<SpreadCoefficient> {
    if family.is_empty() {
        return Err(Error::InvalidParameter("spread coefficient of an empty family".into()));
    }
    if family.w() == 0 {
        return Err(Error::InvalidParameter("spread coefficient needs a nonempty member".into()));
    }
    let size = family.len();
    let counts = WeightedFamily::counting(family.clone()).link_masses()?;
    let total = rational::int(size as i64);
    let mut best: Option<(MemberSet, Rational)> = None;
    for (t, count) in counts {
        let ratio = &total / count;
        let better = match &best {
            None => true,
            Some((bt, br)) => cmp_root(&ratio, t.len() as u32, br, bt.len() as u32) == Ordering::Less,
        };
        if better {
            best = Some((t, ratio));
        }
    }
    let (argmin, ratio) = best.expect("a nonempty member has a nonempty subset");
    let kappa_star = libm::pow(to_f64(&ratio), 1.0 / argmin.len() as f64);
    let w = family.w();
    Ok(SpreadCoefficient {
        kappa_star,
        argmin,
        ratio,
        size,
        w,
        size_root: libm::pow(size as f64, 1.0 / w as f64),
    })
}

/// `|F_T| · κ^{|T|} ≤ |F|` for every nonempty `T`, exactly.
pub fn link_condition_holds(family: &SetFamily, kappa: &Rational) -> Result<bool> {
    Ok(first_link_violation(family, kappa)?.is_none())
}

fn first_link_violation(family: &SetFamily, kappa: &Rational) -> Result<Option<MemberSet>> {
    let total = rational::int(family.len() as i64);
    for (t, count) in WeightedFamily::counting(family.clone()).link_masses()? {
        if count * rational::pow(kappa, t.len()) > total {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// κ-spread: the link condition plus `|F| ≥ κ^w`.
pub fn is_kappa_spread(family: &SetFamily, kappa: &Rational) -> Result<bool> {
    let size_ok = rational::int(family.len() as i64) >= rational::pow(kappa, family.w());
    Ok(size_ok && link_condition_holds(family, kappa)?)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dichotomy {
    /// Uniform weights satisfy the link condition at `κ`.
    Certificate {
        /// Whether `|F| ≥ κ^w` also holds (full κ-spreadness).
        size_condition: bool,
    },
    /// A maximum-size `K` with `|F_K| > κ^{−|K|}|F|`, and its link, which
    /// satisfies the link condition at `κ`.
    Structure { kernel: MemberSet, link: SetFamily },
}

/// Either certifies the link condition at `κ`, or returns a violating `K`
/// with its link, re-verified. `K` is a largest violator with `|K| ≤ w − 1`
/// (lexicographically smallest among those); when that link fails the
/// re-verification, which needs `|F| ≤ κ^w`, a largest violator of any size
/// is used instead.
pub fn structure_dichotomy(family: &SetFamily, kappa: &Rational) -> Result<Dichotomy> {
    if *kappa <= Rational::one() {
        return Err(Error::InvalidParameter("kappa must exceed 1".into()));
    }
    if family.is_empty() {
        return Err(Error::InvalidParameter("dichotomy of an empty family".into()));
    }
    let total = rational::int(family.len() as i64);
    let w = family.w();
    let mut capped: Option<MemberSet> = None;
    let mut any: Option<MemberSet> = None;
    for (t, count) in WeightedFamily::counting(family.clone()).link_masses()? {
        if count * rational::pow(kappa, t.len()) > total {
            // Canonical order is by size, then lexicographic: keep the first of the largest size.
            if t.len() < w && capped.as_ref().is_none_or(|b| t.len() > b.len()) {
                capped = Some(t.clone());
            }
            if any.as_ref().is_none_or(|b| t.len() > b.len()) {
                any = Some(t);
            }
        }
    }
    let Some(largest) = any else {
        let size_condition = total >= rational::pow(kappa, w);
        return Ok(Dichotomy::Certificate { size_condition });
    };
    for kernel in capped.into_iter().chain(core::iter::once(largest)) {
        let link = family.link(&kernel);
        if first_link_violation(&link, kappa)?.is_none() {
            return Ok(Dichotomy::Structure { kernel, link });
        }
    }
    Err(Error::InvalidWitness("no violating kernel has a link passing the link condition".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaVariant {
    /// `C α^{−2} (ln w · ln ln w + (ln 1/β)²)`.
    LogLog,
    /// `(C/α) ln(w/β)`.
    LogOverAlpha,
}

impl KappaVariant {
    pub fn name(self) -> &'static str {
        match self {
            KappaVariant::LogLog => "loglog",
            KappaVariant::LogOverAlpha => "log",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "loglog" => Some(KappaVariant::LogLog),
            "log" => Some(KappaVariant::LogOverAlpha),
            _ => None,
        }
    }
}

/// The implementation constant used when none is given. Only existence of
/// the constant is known, so values computed with it are placeholders.
pub const DEFAULT_KAPPA_CONSTANT: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct KappaBound {
    pub value: f64,
    pub variant: KappaVariant,
    pub constant: f64,
    /// Always true: the constant is not a certified value.
    pub placeholder_constant: bool,
}

/// Evaluates the κ bound in natural logarithms. `w` is a float so that
/// astronomically large widths can be passed.
pub fn kappa_bound(w: f64, alpha: f64, beta: f64, variant: KappaVariant, constant: f64) -> Result<KappaBound> {
    if !(w >= 2.0) {
        return Err(Error::InvalidParameter(format!("kappa bound needs w >= 2, got {w}")));
    }
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    let lw = libm::log(w);
    let value = match variant {
        KappaVariant::LogLog => {
            let lb = libm::log(1.0 / beta);
            constant / (alpha * alpha) * (lw * libm::log(lw) + lb * lb)
        }
        KappaVariant::LogOverAlpha => constant / alpha * (lw - libm::log(beta)),
    };
    Ok(KappaBound {
        value,
        variant,
        constant,
        placeholder_constant: true,
    })
}
