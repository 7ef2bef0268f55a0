//! Kneser packing hypergraphs and nowhere-zero vectors for several matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;

use crate::rng;
use crate::set::{GroundSet, MemberSet, SetFamily};
use crate::{Error, Result};

/// Largest number of `k`-subsets a Kneser instance may have.
pub const KNESER_VERTEX_CAP: usize = 1 << 20;
/// Largest `p^n` for brute-force scans over `F_p^n`.
pub const AJT_BUDGET: u64 = 10_000_000;

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<MemberSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(MemberSet::from_elements(c.iter().copied()));
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KneserInstance {
    n: usize,
    k: usize,
    /// `pi[v]` is the index of `π(v)` among the lexicographic `k`-subsets.
    pi: Vec<usize>,
    vertices: Vec<MemberSet>,
}

impl KneserInstance {
    pub fn new(n: usize, k: usize, pi: Vec<usize>) -> Result<Self> {
        if !(n > k && k >= 1) {
            return Err(Error::InvalidParameter(format!("Kneser parameters need n > k >= 1, got n={n}, k={k}")));
        }
        let count = binomial(n, k).filter(|&c| c <= KNESER_VERTEX_CAP).ok_or(Error::CapExceeded {
            what: "Kneser vertices",
            limit: KNESER_VERTEX_CAP as u64,
            actual: binomial(n, k).map_or(u64::MAX, |c| c as u64),
        })?;
        if pi.len() != count {
            return Err(Error::InvalidParameter(format!("pi has {} entries, expected {count}", pi.len())));
        }
        let mut seen = vec![false; count];
        for &v in &pi {
            if v >= count || core::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter("pi is not a bijection".into()));
            }
        }
        Ok(Self {
            n,
            k,
            pi,
            vertices: k_subsets(n, k),
        })
    }

    pub fn identity(n: usize, k: usize) -> Result<Self> {
        let count = binomial(n, k).unwrap_or(usize::MAX).min(KNESER_VERTEX_CAP + 1);
        Self::new(n, k, (0..count).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn vertices(&self) -> &[MemberSet] {
        &self.vertices
    }
}

/// `e(v) = v ∪ (n + π(v))` on `2n` elements.
pub fn packing_hypergraph(inst: &KneserInstance) -> Result<SetFamily> {
    let n = inst.n;
    let members = inst
        .vertices
        .iter()
        .zip(&inst.pi)
        .map(|(v, &img)| v.union(&inst.vertices[img].map(|x| x + n)))
        .collect();
    SetFamily::new(GroundSet::with_blocks(2 * n, vec![0, n, 2 * n])?, members)
}

/// True iff every disjoint pair `u, v` has intersecting images.
pub fn verify_packing(inst: &KneserInstance) -> bool {
    first_packing_violation(inst).is_none()
}

/// First disjoint pair `(u, v)`, `u < v`, whose images are disjoint.
pub fn first_packing_violation(inst: &KneserInstance) -> Option<(usize, usize)> {
    let vs = &inst.vertices;
    for u in 0..vs.len() {
        for v in u + 1..vs.len() {
            if vs[u].is_disjoint(&vs[v]) && vs[inst.pi[u]].is_disjoint(&vs[inst.pi[v]]) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Advances to the next permutation in lexicographic order.
pub fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).expect("suffix has a larger entry");
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingSearch {
    /// First packing in lexicographic order of `π`.
    pub packing: Option<Vec<usize>>,
    pub examined: u64,
    pub packings: u64,
    pub exhausted: bool,
}

/// Scans bijections in lexicographic order, counting packings, until `budget`
/// bijections have been examined.
pub fn search_packings(n: usize, k: usize, budget: u64) -> Result<PackingSearch> {
    let mut inst = KneserInstance::identity(n, k)?;
    let mut out = PackingSearch {
        packing: None,
        examined: 0,
        packings: 0,
        exhausted: false,
    };
    loop {
        if out.examined == budget {
            return Ok(out);
        }
        out.examined += 1;
        if verify_packing(&inst) {
            out.packings += 1;
            out.packing.get_or_insert_with(|| inst.pi.clone());
        }
        if !next_permutation(&mut inst.pi) {
            out.exhausted = true;
            return Ok(out);
        }
    }
}

/// Uniform random bijection from substream `stream`.
pub fn random_bijection(len: usize, seed: u64, stream: u32) -> Vec<usize> {
    let mut g = rng::substream(seed, stream);
    let mut pi: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        pi.swap(i, g.random_range(0..=i));
    }
    pi
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Row-reduces in place over `F_p`; returns the pivot columns.
fn row_reduce(rows: &mut [Vec<u64>], cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..rows[i].len() {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    row_reduce(&mut rows.to_vec(), cols, p).len()
}

/// Number of solutions of `M x = b` over `F_p^n`: `p^{n − rank}` or 0.
pub fn count_solutions(rows: &[(Vec<u64>, u64)], n: usize, p: u64) -> BigUint {
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .map(|(a, b)| a.iter().copied().chain(core::iter::once(*b)).collect())
        .collect();
    let pivots = row_reduce(&mut aug, n + 1, p);
    if pivots.last() == Some(&n) {
        return BigUint::from(0u32);
    }
    BigUint::from(p).pow((n - pivots.len()) as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AjtInstance {
    p: u64,
    n: usize,
    matrices: Vec<Vec<Vec<u64>>>,
}

impl AjtInstance {
    pub fn new(p: u64, matrices: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("field order {p} too large")));
        }
        let n = matrices.first().map_or(0, Vec::len);
        if matrices.is_empty() || n == 0 {
            return Err(Error::InvalidParameter("need at least one nonempty matrix".into()));
        }
        for (i, a) in matrices.iter().enumerate() {
            if a.len() != n || a.iter().any(|row| row.len() != n) {
                return Err(Error::InvalidParameter(format!("matrix {i} is not {n}x{n}")));
            }
            if a.iter().flatten().any(|&v| v >= p) {
                return Err(Error::InvalidParameter(format!("matrix {i} has entries outside F_{p}")));
            }
            if rank_mod_p(a, p) != n {
                return Err(Error::InvalidParameter(format!("matrix {i} is singular over F_{p}")));
            }
        }
        Ok(Self { p, n, matrices })
    }

    /// `r` invertible matrices drawn by rejection from substream `stream`.
    pub fn random(p: u64, n: usize, r: usize, seed: u64, stream: u32) -> Result<Self> {
        let mut g = rng::substream(seed, stream);
        let mut matrices = Vec::with_capacity(r);
        while matrices.len() < r {
            let a: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| g.random_range(0..p)).collect()).collect();
            if is_prime(p) && rank_mod_p(&a, p) == n {
                matrices.push(a);
            }
        }
        Self::new(p, matrices)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Vec<Vec<u64>>] {
        &self.matrices
    }

    pub fn apply(&self, i: usize, x: &[u64]) -> Vec<u64> {
        self.matrices[i]
            .iter()
            .map(|row| row.iter().zip(x).fold(0, |acc, (a, b)| (acc + a * b) % self.p))
            .collect()
    }

    pub fn is_solution(&self, x: &[u64]) -> bool {
        (0..self.r()).all(|i| self.apply(i, x).iter().all(|&v| v != 0))
    }

    /// `p^n`, checked against the brute-force budget.
    pub fn space_size(&self) -> Result<u64> {
        let size = self.p.checked_pow(self.n as u32).filter(|&s| s <= AJT_BUDGET);
        size.ok_or(Error::CapExceeded {
            what: "field vectors",
            limit: AJT_BUDGET,
            actual: self.p.checked_pow(self.n as u32).unwrap_or(u64::MAX),
        })
    }

    /// The `t`-th vector of `F_p^n` in lexicographic order.
    pub fn vector(&self, mut t: u64) -> Vec<u64> {
        let mut x = vec![0; self.n];
        for slot in x.iter_mut().rev() {
            *slot = t % self.p;
            t /= self.p;
        }
        x
    }

    /// Element id of the triple `(i, j, a)`.
    pub fn triple_id(&self, i: usize, j: usize, a: u64) -> usize {
        (i * self.n + j) * self.p as usize + a as usize
    }

    pub fn triple(&self, id: usize) -> (usize, usize, u64) {
        let p = self.p as usize;
        (id / (self.n * p), id / p % self.n, (id % p) as u64)
    }

    /// `S_x = {(i, j, (A_i x)_j)}`.
    pub fn member(&self, x: &[u64]) -> MemberSet {
        MemberSet::from_elements(
            (0..self.r()).flat_map(|i| self.apply(i, x).into_iter().enumerate().map(move |(j, a)| (i, j, a)))
                .map(|(i, j, a)| self.triple_id(i, j, a)),
        )
    }
}

/// First `x` in lexicographic order with every `A_i x` nowhere zero.
pub fn ajt_search(inst: &AjtInstance) -> Result<Option<Vec<u64>>> {
    let size = inst.space_size()?;
    Ok((0..size).map(|t| inst.vector(t)).find(|x| inst.is_solution(x)))
}

/// `{S_x : x ∈ F_p^n}` with members in lexicographic order of `x`.
pub fn ajt_family(inst: &AjtInstance) -> Result<SetFamily> {
    let size = inst.space_size()?;
    let members = (0..size).map(|t| inst.member(&inst.vector(t))).collect();
    SetFamily::new(GroundSet::new(inst.r() * inst.n * inst.p as usize), members)
}

/// `|F_T|` from the rank of the linear system `(A_i x)_j = a`.
pub fn ajt_link_count(inst: &AjtInstance, t: &MemberSet) -> BigUint {
    let rows: Vec<(Vec<u64>, u64)> = t
        .iter()
        .map(|id| {
            let (i, j, a) = inst.triple(id);
            (inst.matrices[i][j].clone(), a)
        })
        .collect();
    count_solutions(&rows, inst.n, inst.p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AjtLinkCheck {
    pub t: MemberSet,
    pub count: BigUint,
    /// `|F_T|^r · p^{|T|} ≤ |F|^r`.
    pub bound_holds: bool,
}

pub fn ajt_link_check(inst: &AjtInstance, t: &MemberSet) -> AjtLinkCheck {
    let count = ajt_link_count(inst, t);
    let r = inst.r() as u32;
    let total = BigUint::from(inst.p).pow(inst.n as u32);
    let lhs = count.pow(r) * BigUint::from(inst.p).pow(t.len() as u32);
    AjtLinkCheck {
        bound_holds: lhs <= total.pow(r),
        t: t.clone(),
        count,
    }
}

/// Random nonempty `T` of at most `max_size` triples, one substream per sample.
pub fn sample_link_sets(inst: &AjtInstance, count: usize, max_size: usize, seed: u64) -> Vec<MemberSet> {
    let ground = inst.r() * inst.n * inst.p as usize;
    (0..count)
        .map(|s| {
            let mut g = rng::substream(seed, s as u32);
            let size = g.random_range(1..=max_size.clamp(1, ground));
            MemberSet::from_elements(rng::sample_k_subset(&mut g, ground, size))
        })
        .collect()
}

/// Checks that every disjoint pair `S_{x′}, S_{x″}` gives a solution `x′ − x″`.
pub fn disjoint_pairs_yield_solutions(inst: &AjtInstance, family: &SetFamily) -> bool {
    let p = inst.p;
    let xs: Vec<Vec<u64>> = (0..family.len() as u64).map(|t| inst.vector(t)).collect();
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            if family.member(a).is_disjoint(family.member(b)) {
                let diff: Vec<u64> = xs[a].iter().zip(&xs[b]).map(|(u, v)| (u + p - v) % p).collect();
                if !inst.is_solution(&diff) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_and_binomials() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(4, 2)[1], MemberSet::from_elements([0, 2]));
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
    }

    #[test]
    fn kneser_examples() {
        let id = KneserInstance::identity(3, 1).unwrap();
        let h = packing_hypergraph(&id).unwrap();
        let lists: Vec<Vec<usize>> = h.members().iter().map(MemberSet::to_vec).collect();
        assert_eq!(lists, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert!(!verify_packing(&KneserInstance::identity(5, 2).unwrap()));
        assert!(KneserInstance::new(3, 1, vec![0, 0, 1]).is_err());
        assert!(KneserInstance::new(2, 2, vec![0]).is_err());
    }

    #[test]
    fn no_packing_of_three_singletons() {
        let s = search_packings(3, 1, u64::MAX).unwrap();
        assert_eq!((s.examined, s.packings, s.exhausted), (6, 0, true));
    }

    #[test]
    fn permutations_in_order() {
        let mut a = vec![0, 1, 2];
        let mut seen = vec![a.clone()];
        while next_permutation(&mut a) {
            seen.push(a.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
    }

    #[test]
    fn ajt_examples() {
        let inst = AjtInstance::new(5, vec![vec![vec![1]], vec![vec![2]]]).unwrap();
        assert_eq!(ajt_search(&inst).unwrap(), Some(vec![1]));

        let inst = AjtInstance::new(2, vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![0, 1]]]).unwrap();
        assert_eq!(ajt_search(&inst).unwrap(), None);
        let f = ajt_family(&inst).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.is_uniform());
        assert_eq!(f.w(), 4);
        assert!(f.is_intersecting());
        assert!(disjoint_pairs_yield_solutions(&inst, &f));

        assert!(AjtInstance::new(4, vec![vec![vec![1]]]).is_err());
        assert!(AjtInstance::new(2, vec![vec![vec![1, 1], vec![1, 1]]]).is_err());
    }

    #[test]
    fn ajt_single_triple_link() {
        let inst = AjtInstance::random(3, 2, 2, 7, 0).unwrap();
        let t = MemberSet::from_elements([inst.triple_id(1, 0, 2)]);
        let c = ajt_link_check(&inst, &t);
        assert_eq!(c.count, BigUint::from(3u32));
        assert!(c.bound_holds);
    }

    #[test]
    fn ajt_rank_matches_brute_force() {
        for stream in 0..5 {
            let inst = AjtInstance::random(3, 2, 2, 11, stream).unwrap();
            let f = ajt_family(&inst).unwrap();
            for t in sample_link_sets(&inst, 40, 4, stream as u64) {
                let brute = f.members().iter().filter(|s| t.is_subset(s)).count();
                assert_eq!(ajt_link_count(&inst, &t), BigUint::from(brute));
                assert!(ajt_link_check(&inst, &t).bound_holds);
            }
        }
    }
}
