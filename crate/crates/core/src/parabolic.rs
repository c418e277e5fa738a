//! Parabolics of equivalenced schemes and the arithmetic around them: the
//! divisibility test on chains, the indistinguishing number, the intersection
//! property inside a parabolic, and the separability verdict.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::frobenius::{invariant_lattice, FrobeniusError, FrobeniusSpec, InvariantSubgroupLattice};
use crate::numtheory::{prime_divisors, prime_power};
use crate::scheme::{compute_tensor, IntersectionTensor, Relation, Scheme, SchemeError};

#[derive(Debug, Error)]
pub enum ParabolicError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error("scheme is not equivalenced: irreflexive valencies {0:?}")]
    NotEquivalenced(Vec<u32>),
    #[error("scheme is primitive: only the trivial parabolics exist")]
    Primitive,
}

/// An equivalence relation that is a union of basis relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Parabolic {
    /// Class size `n_e`.
    size: u64,
    relations: Vec<Relation>,
}

impl Parabolic {
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn contains(&self, r: Relation) -> bool {
        self.relations.binary_search(&r).is_ok()
    }

    pub fn is_subset_of(&self, other: &Parabolic) -> bool {
        self.relations.iter().all(|&r| other.contains(r))
    }

    /// Class index of each point, numbered by first occurrence.
    pub fn classes(&self, scheme: &Scheme) -> Vec<usize> {
        let n = scheme.n();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for a in 0..n {
            if class[a] == usize::MAX {
                for (b, c) in class.iter_mut().enumerate() {
                    if self.contains(scheme.relation(a, b)) {
                        *c = next;
                    }
                }
                next += 1;
            }
        }
        class
    }

    /// The parabolic made of exactly these relations, if they form one.
    pub fn from_relations(relations: &[Relation], tensor: &IntersectionTensor) -> Option<Self> {
        let mut mask = vec![false; tensor.rank()];
        mask[0] = true;
        for &r in relations {
            *mask.get_mut(r as usize)? = true;
        }
        let mut closed = mask.clone();
        close(tensor, &mut closed);
        (closed == mask).then(|| Parabolic::from_mask(&mask, tensor))
    }

    fn from_mask(mask: &[bool], tensor: &IntersectionTensor) -> Self {
        let relations: Vec<Relation> = (0..mask.len()).filter(|&r| mask[r]).map(|r| r as Relation).collect();
        let size = relations.iter().map(|&r| tensor.valency(r) as u64).sum();
        Parabolic { size, relations }
    }
}

/// Smallest parabolic containing the relations in `mask`.
fn close(tensor: &IntersectionTensor, mask: &mut [bool]) {
    let gens: Vec<Relation> = (0..mask.len()).filter(|&r| mask[r]).map(|r| r as Relation).collect();
    mask.copy_from_slice(&generated(tensor, &gens));
}

/// Mask of the smallest parabolic containing `gens`: the relations reachable
/// from the diagonal by repeatedly composing with a generator or its star.
fn generated(tensor: &IntersectionTensor, gens: &[Relation]) -> Vec<bool> {
    let m = tensor.rank();
    let steps: Vec<Relation> = gens.iter().flat_map(|&r| [r, tensor.star(r)]).collect();
    let mut reached = vec![false; m];
    reached[0] = true;
    let mut queue = vec![0 as Relation];
    while let Some(x) = queue.pop() {
        for &s in &steps {
            for (t, seen) in reached.iter_mut().enumerate() {
                if !*seen && tensor.get(x, s, t as Relation) > 0 {
                    *seen = true;
                    queue.push(t as Relation);
                }
            }
        }
    }
    reached
}

/// All parabolics ordered by class size then relation list, with inclusion.
#[derive(Debug, Clone)]
pub struct ParabolicLattice {
    n: u64,
    parabolics: Vec<Parabolic>,
    /// `below[j][i]`: parabolic `i` is strictly contained in parabolic `j`.
    below: Vec<Vec<bool>>,
}

impl ParabolicLattice {
    pub fn from_tensor(tensor: &IntersectionTensor) -> Self {
        let m = tensor.rank();
        // each parabolic is kept with a short generating list
        let mut minimal: Vec<(Vec<bool>, Relation)> = Vec::new();
        for s in 1..m as Relation {
            let mask = generated(tensor, &[s]);
            if !minimal.iter().any(|(a, _)| *a == mask) {
                minimal.push((mask, s));
            }
        }
        let mut trivial = vec![false; m];
        trivial[0] = true;
        let mut found: Vec<(Vec<bool>, Vec<Relation>)> = vec![(trivial.clone(), Vec::new())];
        let mut seen: HashMap<Vec<bool>, ()> = HashMap::from([(trivial, ())]);
        let mut i = 0;
        while i < found.len() {
            for (atom, s) in &minimal {
                if (0..m).all(|r| !atom[r] || found[i].0[r]) {
                    continue;
                }
                let mut gens = found[i].1.clone();
                gens.push(*s);
                let joined = generated(tensor, &gens);
                if seen.insert(joined.clone(), ()).is_none() {
                    found.push((joined, gens));
                }
            }
            i += 1;
        }
        let mut parabolics: Vec<Parabolic> = found.iter().map(|(mask, _)| Parabolic::from_mask(mask, tensor)).collect();
        parabolics.sort();
        Self::from_parabolics(tensor.degree(), parabolics)
    }

    fn from_parabolics(n: u64, parabolics: Vec<Parabolic>) -> Self {
        let len = parabolics.len();
        let below = (0..len)
            .map(|j| (0..len).map(|i| i != j && parabolics[i].is_subset_of(&parabolics[j])).collect())
            .collect();
        ParabolicLattice { n, parabolics, below }
    }

    pub fn parabolics(&self) -> &[Parabolic] {
        &self.parabolics
    }

    pub fn len(&self) -> usize {
        self.parabolics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parabolics.is_empty()
    }

    pub fn is_primitive(&self) -> bool {
        self.parabolics.len() == 2 || self.n == 1
    }

    pub fn strictly_below(&self, i: usize, j: usize) -> bool {
        self.below[j][i]
    }

    /// Indices of the nontrivial parabolics.
    pub fn nontrivial(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parabolics[i].size != 1 && self.parabolics[i].size != self.n).collect()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.parabolics.iter().map(Parabolic::size).collect()
    }

    /// Closed under intersection and join (join computed as the smallest
    /// common upper bound, which must be unique).
    pub fn is_lattice(&self) -> bool {
        let len = self.len();
        for i in 0..len {
            for j in 0..len {
                let meet: Vec<Relation> =
                    self.parabolics[i].relations.iter().copied().filter(|&r| self.parabolics[j].contains(r)).collect();
                if !self.parabolics.iter().any(|p| p.relations == meet) {
                    return false;
                }
                let uppers: Vec<usize> = (0..len)
                    .filter(|&k| {
                        self.parabolics[i].is_subset_of(&self.parabolics[k]) && self.parabolics[j].is_subset_of(&self.parabolics[k])
                    })
                    .collect();
                let least = uppers.iter().filter(|&&u| uppers.iter().all(|&v| self.parabolics[u].is_subset_of(&self.parabolics[v])));
                if least.count() != 1 {
                    return false;
                }
            }
        }
        true
    }
}

pub fn enumerate_parabolics(scheme: &Scheme) -> Result<ParabolicLattice, SchemeError> {
    Ok(ParabolicLattice::from_tensor(&compute_tensor(scheme)?))
}

/// Parabolics by testing every relation subset containing the diagonal.
/// Returns `None` above rank 20.
pub fn enumerate_parabolics_exhaustive(tensor: &IntersectionTensor) -> Option<Vec<Parabolic>> {
    let m = tensor.rank();
    if m > 20 {
        return None;
    }
    let mut out = Vec::new();
    for bits in 0u32..(1 << (m - 1)) {
        let mask: Vec<bool> = (0..m).map(|r| r == 0 || bits >> (r - 1) & 1 == 1).collect();
        let closed = (0..m).all(|a| {
            !mask[a]
                || (mask[tensor.star(a as Relation) as usize]
                    && (0..m).all(|b| !mask[b] || tensor.product(a as Relation, b as Relation).iter().all(|&t| mask[t as usize])))
        });
        if closed {
            out.push(Parabolic::from_mask(&mask, tensor));
        }
    }
    out.sort();
    Some(out)
}

/// The common irreflexive valency, if there is one.
pub fn equivalenced_valency(tensor: &IntersectionTensor) -> Option<u32> {
    let v = &tensor.valencies()[1..];
    match v.first() {
        Some(&k) if v.iter().all(|&x| x == k) => Some(k),
        _ => None,
    }
}

/// `max_r Σ_s c[s][s*][r]` over irreflexive `r`: the largest number of
/// points that do not distinguish the two ends of a pair.
pub fn indistinguishing_number(tensor: &IntersectionTensor) -> u64 {
    let m = tensor.rank() as Relation;
    (1..m).map(|r| (0..m).map(|s| tensor.get(s, tensor.star(s), r) as u64).sum::<u64>()).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivideCheck {
    pub lower: Vec<Relation>,
    pub upper: Vec<Relation>,
    pub lower_size: u64,
    pub upper_size: u64,
    /// `n_{e2}/n_{e1} - 1`.
    pub quotient: u64,
    pub passes: bool,
}

/// `k | n_{e2}/n_{e1} - 1` for every comparable pair `e1 < e2`. A pair whose
/// sizes do not divide fails with quotient 0.
pub fn divide_check(tensor: &IntersectionTensor, lattice: &ParabolicLattice) -> Result<Vec<DivideCheck>, ParabolicError> {
    let k = equivalenced_valency(tensor).ok_or_else(|| ParabolicError::NotEquivalenced(tensor.valencies()[1..].to_vec()))?;
    let mut out = Vec::new();
    for j in 0..lattice.len() {
        for i in 0..lattice.len() {
            if !lattice.strictly_below(i, j) {
                continue;
            }
            let (lo, hi) = (&lattice.parabolics[i], &lattice.parabolics[j]);
            let divides = hi.size % lo.size == 0;
            let quotient = if divides { hi.size / lo.size - 1 } else { 0 };
            out.push(DivideCheck {
                lower: lo.relations.clone(),
                upper: hi.relations.clone(),
                lower_size: lo.size,
                upper_size: hi.size,
                quotient,
                passes: divides && quotient % k as u64 == 0,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionViolation {
    pub parabolic: Vec<Relation>,
    pub r: Relation,
    pub s: Relation,
    pub t: Relation,
    /// The offending relation `u ⊆ e` (equal to `t` when `c[r][s][t] ≠ 1`).
    pub u: Relation,
    pub value: u32,
}

/// Checks, for each nontrivial parabolic `e` and irreflexive `r, s, t` with
/// `t ∈ rs`, `t ⊆ e`, `r ∪ s ⊄ e`, that `c[r][s][t] = 1` and `c[r][s][u] = 0`
/// for the other `u ⊆ e`. Returns the number of triples checked.
pub fn intersection_property(
    tensor: &IntersectionTensor,
    lattice: &ParabolicLattice,
) -> Result<usize, IntersectionViolation> {
    let m = tensor.rank() as Relation;
    let mut checked = 0;
    for i in lattice.nontrivial() {
        let e = &lattice.parabolics[i];
        for r in 1..m {
            for s in 1..m {
                if e.contains(r) && e.contains(s) {
                    continue;
                }
                for &t in e.relations.iter().filter(|&&t| t != 0) {
                    if tensor.get(r, s, t) == 0 {
                        continue;
                    }
                    checked += 1;
                    let violation = |u: Relation, value: u32| IntersectionViolation {
                        parabolic: e.relations.clone(),
                        r,
                        s,
                        t,
                        u,
                        value,
                    };
                    if tensor.get(r, s, t) != 1 {
                        return Err(violation(t, tensor.get(r, s, t)));
                    }
                    if let Some(&u) = e.relations.iter().find(|&&u| u != t && tensor.get(r, s, u) != 0) {
                        return Err(violation(u, tensor.get(r, s, u)));
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Checks that `L ↦ {r(0, h) : h ∈ L}` maps the invariant subgroups of a
/// Frobenius kernel bijectively onto the parabolics of its scheme, preserving
/// inclusion and sizes. Point 0 must be the kernel identity.
pub fn subgroup_correspondence(
    scheme: &Scheme,
    parabolics: &ParabolicLattice,
    subgroups: &InvariantSubgroupLattice,
) -> Result<(), String> {
    if subgroups.len() != parabolics.len() {
        return Err(format!("{} invariant subgroups but {} parabolics", subgroups.len(), parabolics.len()));
    }
    let mut image = Vec::new();
    for (li, l) in subgroups.subgroups().iter().enumerate() {
        let mut rels: Vec<Relation> = l.elements().iter().map(|&h| scheme.relation(0, h)).collect();
        rels.sort_unstable();
        rels.dedup();
        let pi = parabolics
            .parabolics
            .iter()
            .position(|p| p.relations == rels)
            .ok_or_else(|| format!("subgroup {li} of order {} maps to a non-parabolic", l.order()))?;
        if parabolics.parabolics[pi].size != l.order() as u64 {
            return Err(format!("subgroup of order {} maps to a parabolic of size {}", l.order(), parabolics.parabolics[pi].size));
        }
        image.push(pi);
    }
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != image.len() {
        return Err("two subgroups map to the same parabolic".into());
    }
    for a in 0..image.len() {
        for b in 0..image.len() {
            let sub = subgroups.subgroups()[a].is_subset_of(&subgroups.subgroups()[b]);
            let par = parabolics.parabolics[image[a]].is_subset_of(&parabolics.parabolics[image[b]]);
            if sub != par {
                return Err(format!("inclusion differs between subgroups {a}, {b} and their parabolics"));
            }
        }
    }
    Ok(())
}

/// Evidence that an equivalenced imprimitive scheme is separable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparabilityWitness {
    /// `n > 3k(k-1)^2`.
    Bound { n: u64, k: u64, bound: u64 },
    /// Class sizes of a chain `1 < e1 < e2 < e3 < full`.
    FourChain { sizes: [u64; 3] },
    /// A chain `1 < e1 < e2 < full` whose multiset
    /// `{n1-1, n2/n1-1, n/n2-1}` is neither `{k,k,k}` nor `{k,k,2k}`.
    Multiset { n1: u64, n2: u64, multiset: [u64; 3] },
}

/// Parameters of an undecided instance. Both case flags are reported; when
/// both hold neither is preferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UndecidedCase {
    pub n: u64,
    pub k: u64,
    pub primes: usize,
    pub d: usize,
    pub in_table: bool,
    /// `d = 3`, `n = (k+1)^3` a prime power.
    pub case1: bool,
    /// `d = 3`, `n = (k+1)^2 (2k+1)` with `k+1`, `2k+1` powers of distinct primes.
    pub case2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SeparabilityVerdict {
    Separable { witnesses: Vec<SeparabilityWitness> },
    Undecided { case: UndecidedCase },
}

impl SeparabilityVerdict {
    pub fn is_separable(&self) -> bool {
        matches!(self, SeparabilityVerdict::Separable { .. })
    }
}

/// Class sizes of a lattice with strict inclusion; index 0 is the bottom and
/// the last index the top.
struct ChainPoset {
    n: u64,
    k: u64,
    sizes: Vec<u64>,
    below: Vec<Vec<bool>>,
}

impl ChainPoset {
    fn depth(&self) -> usize {
        let len = self.sizes.len();
        let mut longest = vec![0usize; len];
        // sizes ascend, so increasing index is a linear extension
        for j in 0..len {
            for i in 0..j {
                if self.below[j][i] {
                    longest[j] = longest[j].max(longest[i] + 1);
                }
            }
        }
        longest[len - 1]
    }

    fn verdict(&self) -> SeparabilityVerdict {
        let (n, k) = (self.n, self.k);
        let len = self.sizes.len();
        let inner: Vec<usize> = (1..len - 1).collect();
        let mut witnesses = Vec::new();
        let bound = 3 * k * (k - 1) * (k - 1);
        if n > bound {
            witnesses.push(SeparabilityWitness::Bound { n, k, bound });
        }
        'four: for &a in &inner {
            for &b in &inner {
                if !self.below[b][a] {
                    continue;
                }
                for &c in &inner {
                    if self.below[c][b] {
                        witnesses.push(SeparabilityWitness::FourChain { sizes: [self.sizes[a], self.sizes[b], self.sizes[c]] });
                        break 'four;
                    }
                }
            }
        }
        'three: for &a in &inner {
            for &b in &inner {
                if !self.below[b][a] {
                    continue;
                }
                let (n1, n2) = (self.sizes[a], self.sizes[b]);
                let mut ms = [n1 - 1, n2 / n1 - 1, n / n2 - 1];
                ms.sort_unstable();
                if ms != [k, k, k] && ms != [k, k, 2 * k] {
                    witnesses.push(SeparabilityWitness::Multiset { n1, n2, multiset: ms });
                    break 'three;
                }
            }
        }
        if !witnesses.is_empty() {
            return SeparabilityVerdict::Separable { witnesses };
        }
        let primes = prime_divisors(n).len();
        let d = self.depth();
        let case2 = {
            let (pa, qb) = (k + 1, 2 * k + 1);
            match (prime_power(pa), prime_power(qb)) {
                (Some((p, _)), Some((q, _))) => d == 3 && p != q && n == pa * pa * qb,
                _ => false,
            }
        };
        SeparabilityVerdict::Undecided {
            case: UndecidedCase {
                n,
                k,
                primes,
                d,
                in_table: (1..=2).contains(&primes) && (2..=3).contains(&d),
                case1: d == 3 && prime_power(n).is_some() && n == (k + 1).pow(3),
                case2,
            },
        }
    }
}

pub fn separability_verdict(scheme: &Scheme) -> Result<SeparabilityVerdict, ParabolicError> {
    let tensor = compute_tensor(scheme)?;
    separability_verdict_from(&tensor, &ParabolicLattice::from_tensor(&tensor))
}

pub fn separability_verdict_from(
    tensor: &IntersectionTensor,
    lattice: &ParabolicLattice,
) -> Result<SeparabilityVerdict, ParabolicError> {
    let k = equivalenced_valency(tensor).ok_or_else(|| ParabolicError::NotEquivalenced(tensor.valencies()[1..].to_vec()))?;
    if lattice.is_primitive() {
        return Err(ParabolicError::Primitive);
    }
    let poset = ChainPoset { n: tensor.degree(), k: k as u64, sizes: lattice.sizes(), below: lattice.below.clone() };
    Ok(poset.verdict())
}

/// The verdict for the scheme of a Frobenius spec, read off its invariant
/// subgroup lattice without building the scheme.
pub fn separability_verdict_spec(spec: &FrobeniusSpec) -> Result<SeparabilityVerdict, ParabolicError> {
    let lattice = invariant_lattice(spec)?;
    if lattice.len() == 2 {
        return Err(ParabolicError::Primitive);
    }
    let subgroups = lattice.subgroups();
    let len = subgroups.len();
    let below = (0..len)
        .map(|j| (0..len).map(|i| i != j && subgroups[i].order() < subgroups[j].order() && subgroups[i].is_subset_of(&subgroups[j])).collect())
        .collect();
    let poset = ChainPoset {
        n: lattice.kernel_order() as u64,
        k: spec.complement_order,
        sizes: lattice.orders().into_iter().map(|o| o as u64).collect(),
        below,
    };
    Ok(poset.verdict())
}

/// Summary of the pseudofrobenius screen for one scheme.
#[derive(Debug, Clone, Serialize)]
pub struct PseudofrobeniusProfile {
    pub n: u64,
    pub valency: Option<u32>,
    pub indistinguishing_number: u64,
    pub parabolics: Vec<Parabolic>,
    pub depth: usize,
    pub divide_failures: Vec<DivideCheck>,
    pub divide_pairs: usize,
    pub separability: Option<SeparabilityVerdict>,
}

pub fn pseudofrobenius_profile(tensor: &IntersectionTensor) -> PseudofrobeniusProfile {
    let lattice = ParabolicLattice::from_tensor(tensor);
    let valency = equivalenced_valency(tensor);
    let (divide_failures, divide_pairs) = match divide_check(tensor, &lattice) {
        Ok(all) => {
            let pairs = all.len();
            (all.into_iter().filter(|d| !d.passes).collect(), pairs)
        }
        Err(_) => (Vec::new(), 0),
    };
    let poset_depth = {
        let len = lattice.len();
        let mut longest = vec![0usize; len];
        for j in 0..len {
            for i in 0..j {
                if lattice.below[j][i] {
                    longest[j] = longest[j].max(longest[i] + 1);
                }
            }
        }
        longest.last().copied().unwrap_or(0)
    };
    PseudofrobeniusProfile {
        n: tensor.degree(),
        valency,
        indistinguishing_number: indistinguishing_number(tensor),
        depth: poset_depth,
        separability: separability_verdict_from(tensor, &lattice).ok(),
        parabolics: lattice.parabolics,
        divide_failures,
        divide_pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{build_frobenius, KernelFactor};
    use crate::scheme::fixtures::{f3_lines, z9};

    /// Parabolics by brute force on the point level: unions of relations that
    /// are reflexive, symmetric and transitive as binary relations.
    fn brute_parabolics(scheme: &Scheme) -> Vec<Vec<Relation>> {
        let m = scheme.rank();
        let n = scheme.n();
        let mut out = Vec::new();
        for bits in 0u32..(1 << (m - 1)) {
            let inside = |r: Relation| r == 0 || bits >> (r - 1) & 1 == 1;
            let rel = |a: usize, b: usize| inside(scheme.relation(a, b));
            let symmetric = (0..n).all(|a| (0..n).all(|b| rel(a, b) == rel(b, a)));
            let transitive = (0..n).all(|a| (0..n).all(|b| !rel(a, b) || (0..n).all(|c| !rel(b, c) || rel(a, c))));
            if symmetric && transitive {
                out.push((0..m as Relation).filter(|&r| inside(r)).collect());
            }
        }
        out.sort();
        out
    }

    fn relation_sets(l: &ParabolicLattice) -> Vec<Vec<Relation>> {
        let mut v: Vec<Vec<Relation>> = l.parabolics().iter().map(|p| p.relations().to_vec()).collect();
        v.sort();
        v
    }

    #[test]
    fn examples() {
        let l = enumerate_parabolics(&Scheme::trivial(5)).unwrap();
        assert!(l.is_primitive());
        assert_eq!(l.sizes(), vec![1, 5]);

        let z9 = z9();
        let l = enumerate_parabolics(&z9).unwrap();
        assert_eq!(l.sizes(), vec![1, 3, 9]);
        // classes of the middle parabolic are the cosets of 3Z_9
        let classes = l.parabolics()[1].classes(&z9);
        assert!((0..9).all(|a| classes[a] == classes[a % 3]));
        assert_eq!(relation_sets(&l), brute_parabolics(&z9));

        let f3 = f3_lines();
        let l = enumerate_parabolics(&f3).unwrap();
        assert_eq!(l.sizes(), vec![1, 3, 3, 3, 3, 9]);
        assert_eq!(relation_sets(&l), brute_parabolics(&f3));
        assert!(l.is_lattice());
    }

    #[test]
    fn exhaustive_cross_check() {
        for s in [z9(), f3_lines(), Scheme::trivial(4)] {
            let t = compute_tensor(&s).unwrap();
            assert_eq!(ParabolicLattice::from_tensor(&t).parabolics(), &enumerate_parabolics_exhaustive(&t).unwrap()[..]);
        }
    }

    #[test]
    fn divide_examples() {
        let t = compute_tensor(&z9()).unwrap();
        let checks = divide_check(&t, &ParabolicLattice::from_tensor(&t)).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.passes));
        let t = compute_tensor(&f3_lines()).unwrap();
        let checks = divide_check(&t, &ParabolicLattice::from_tensor(&t)).unwrap();
        assert!(checks.iter().all(|c| c.passes && (c.quotient == 2 || c.quotient == 8)));
        // sizes 4 inside 9: 4 does not divide 9, and 2 does not divide 3
        let fake = ParabolicLattice::from_parabolics(
            9,
            vec![
                Parabolic { size: 1, relations: vec![0] },
                Parabolic { size: 4, relations: vec![0, 1] },
                Parabolic { size: 9, relations: vec![0, 1, 2] },
            ],
        );
        let checks = divide_check(&t, &fake).unwrap();
        assert!(checks.iter().any(|c| !c.passes));
    }

    #[test]
    fn indistinguishing_examples() {
        for n in [3usize, 4, 7] {
            assert_eq!(indistinguishing_number(&compute_tensor(&Scheme::trivial(n)).unwrap()), n as u64 - 2);
        }
        for s in [z9(), f3_lines()] {
            let t = compute_tensor(&s).unwrap();
            // direct count over pairs in each relation
            let direct = (1..s.rank() as Relation)
                .map(|r| {
                    let (a, b) = (0, (0..s.n()).find(|&b| s.relation(0, b) == r).unwrap());
                    (0..s.n()).filter(|&g| s.relation(a, g) == s.relation(b, g)).count() as u64
                })
                .max()
                .unwrap();
            assert_eq!(indistinguishing_number(&t), direct);
            assert_eq!(indistinguishing_number(&t), 1);
        }
    }

    #[test]
    fn intersection_property_on_frobenius_schemes() {
        for s in [z9(), f3_lines()] {
            let t = compute_tensor(&s).unwrap();
            let checked = intersection_property(&t, &ParabolicLattice::from_tensor(&t)).unwrap();
            assert!(checked > 0);
        }
    }

    #[test]
    fn correspondence_with_subgroups() {
        let specs = [
            FrobeniusSpec::cyclic(9, &[8]).unwrap(),
            FrobeniusSpec::cyclic(105, &[104]).unwrap(),
            FrobeniusSpec {
                kernel: vec![KernelFactor::ElementaryAbelian { p: 3, dim: 2, matrices: vec![vec![vec![2, 0], vec![0, 2]]] }],
                complement_order: 2,
            },
        ];
        for spec in specs {
            let scheme = Scheme::from_orbitals(&build_frobenius(&spec).unwrap()).unwrap();
            let pl = enumerate_parabolics(&scheme).unwrap();
            let sl = invariant_lattice(&spec).unwrap();
            subgroup_correspondence(&scheme, &pl, &sl).unwrap();
        }
    }

    #[test]
    fn separability_examples() {
        let z105 = separability_verdict_spec(&FrobeniusSpec::cyclic(105, &[-1]).unwrap()).unwrap();
        match &z105 {
            SeparabilityVerdict::Separable { witnesses } => {
                // 3 < 15 gives the multiset {2, 4, 6}
                assert!(witnesses.contains(&SeparabilityWitness::Multiset { n1: 3, n2: 15, multiset: [2, 4, 6] }));
                assert!(witnesses.contains(&SeparabilityWitness::Bound { n: 105, k: 2, bound: 6 }));
            }
            other => panic!("{other:?}"),
        }
        let z81 = separability_verdict_spec(&FrobeniusSpec::cyclic(81, &[-1]).unwrap()).unwrap();
        assert!(z81.is_separable());

        // n = 9 already exceeds 3k(k-1)^2 = 6
        assert_eq!(
            separability_verdict(&f3_lines()).unwrap(),
            SeparabilityVerdict::Separable { witnesses: vec![SeparabilityWitness::Bound { n: 9, k: 2, bound: 6 }] }
        );
        // scalars of order 4 on F_5^2: n = 25 <= 108
        let f5 = FrobeniusSpec {
            kernel: vec![KernelFactor::ElementaryAbelian { p: 5, dim: 2, matrices: vec![vec![vec![2, 0], vec![0, 2]]] }],
            complement_order: 4,
        };
        let scheme = Scheme::from_orbitals(&build_frobenius(&f5).unwrap()).unwrap();
        for verdict in [separability_verdict(&scheme).unwrap(), separability_verdict_spec(&f5).unwrap()] {
            match verdict {
                SeparabilityVerdict::Undecided { case } => {
                    assert_eq!((case.n, case.k, case.primes, case.d), (25, 4, 1, 2));
                    assert!(case.in_table && !case.case1 && !case.case2);
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(matches!(separability_verdict(&Scheme::trivial(5)), Err(ParabolicError::Primitive)));
    }

    #[test]
    fn spec_and_scheme_verdicts_agree() {
        for spec in [FrobeniusSpec::cyclic(9, &[8]).unwrap(), FrobeniusSpec::cyclic(45, &[-1]).unwrap(), FrobeniusSpec::cyclic(49, &[18]).unwrap()] {
            let scheme = Scheme::from_orbitals(&build_frobenius(&spec).unwrap()).unwrap();
            assert_eq!(separability_verdict(&scheme).unwrap(), separability_verdict_spec(&spec).unwrap());
        }
    }
}
