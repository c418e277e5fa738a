use std::collections::HashMap;

use super::{FrobeniusError, FrobeniusGroup, FrobeniusSpec, KernelGroup};
use crate::numtheory::prime_divisors;

/// A subgroup of the kernel as a bitset over points plus its sorted elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    bits: Vec<u64>,
    elements: Vec<usize>,
}

impl Subgroup {
    fn trivial(n: usize) -> Self {
        let mut bits = vec![0u64; n.div_ceil(64)];
        bits[0] |= 1;
        Subgroup { bits, elements: vec![0] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    /// Sorted elements.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn insert(&mut self, x: usize) {
        self.bits[x / 64] |= 1 << (x % 64);
        self.elements.push(x);
    }

    /// Smallest subgroup containing `self` and `g`: the union of cosets `A + i·g`.
    fn extend(&mut self, kernel: &KernelGroup, g: usize) {
        let base = self.elements.clone();
        let mut shift = g;
        while !self.contains(shift) {
            for &a in &base {
                self.insert(kernel.add(a, shift));
            }
            shift = kernel.add(shift, g);
        }
    }

    fn finish(mut self) -> Self {
        self.elements.sort_unstable();
        self
    }
}

/// All `K`-invariant subgroups, sorted by order then by element list, with
/// the covering relation of the inclusion order.
#[derive(Debug, Clone)]
pub struct InvariantSubgroupLattice {
    kernel_order: usize,
    subgroups: Vec<Subgroup>,
    /// `covers[i]`: indices of the subgroups covering subgroup `i`.
    covers: Vec<Vec<usize>>,
    depth: usize,
    min_chain: usize,
    primes: Vec<u64>,
}

impl InvariantSubgroupLattice {
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_order
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    /// Length of the longest maximal chain, `d(G)`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// True when all maximal chains have the same length.
    pub fn chain_independent(&self) -> bool {
        self.min_chain == self.depth
    }

    /// `π(H)`, sorted.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn orders(&self) -> Vec<usize> {
        self.subgroups.iter().map(Subgroup::order).collect()
    }

    pub fn index_of(&self, elements: &[usize]) -> Option<usize> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        self.subgroups.iter().position(|s| s.elements == sorted)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        let common: Vec<usize> =
            self.subgroups[i].elements.iter().copied().filter(|&x| self.subgroups[j].contains(x)).collect();
        self.index_of(&common).expect("lattice is closed under intersection")
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        (0..self.len())
            .find(|&k| self.subgroups[i].is_subset_of(&self.subgroups[k]) && self.subgroups[j].is_subset_of(&self.subgroups[k]))
            .expect("the kernel contains everything")
    }

    /// Every maximal chain as a list of subgroup indices, up to `limit` chains.
    pub fn maximal_chains(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![self.bottom()];
        self.chains_from(&mut path, &mut out, limit);
        out
    }

    fn chains_from(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let last = *path.last().expect("path starts at the bottom");
        if last == self.top() {
            out.push(path.clone());
            return;
        }
        for &c in &self.covers[last] {
            path.push(c);
            self.chains_from(path, out, limit);
            path.pop();
        }
    }
}

pub fn invariant_lattice(spec: &FrobeniusSpec) -> Result<InvariantSubgroupLattice, FrobeniusError> {
    Ok(lattice_of(&spec.validate()?))
}

pub(crate) fn lattice_of(group: &FrobeniusGroup) -> InvariantSubgroupLattice {
    let kernel = group.kernel();
    let n = kernel.order() as usize;

    // generating sets of the subgroups spanned by single K-orbits
    let mut atoms: Vec<Vec<usize>> = Vec::new();
    let mut seen_atoms: HashMap<Vec<u64>, ()> = HashMap::new();
    for h in 1..n {
        let orbit = group.complement_orbit(h);
        let mut s = Subgroup::trivial(n);
        for &x in &orbit {
            s.extend(kernel, x);
        }
        if seen_atoms.insert(s.bits.clone(), ()).is_none() {
            atoms.push(orbit);
        }
    }

    let mut subgroups = vec![Subgroup::trivial(n)];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::from([(subgroups[0].bits.clone(), 0)]);
    let mut i = 0;
    while i < subgroups.len() {
        for atom in &atoms {
            if subgroups[i].contains(atom[0]) {
                continue;
            }
            let mut joined = subgroups[i].clone();
            for &x in atom {
                joined.extend(kernel, x);
            }
            if !index.contains_key(&joined.bits) {
                index.insert(joined.bits.clone(), subgroups.len());
                subgroups.push(joined);
            }
        }
        i += 1;
    }
    let mut subgroups: Vec<Subgroup> = subgroups.into_iter().map(Subgroup::finish).collect();
    subgroups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));

    let len = subgroups.len();
    let below: Vec<Vec<bool>> = (0..len)
        .map(|j| (0..len).map(|i| i != j && subgroups[i].order() < subgroups[j].order() && subgroups[i].is_subset_of(&subgroups[j])).collect())
        .collect();
    let mut covers = vec![Vec::new(); len];
    for j in 0..len {
        for i in 0..len {
            if below[j][i] && !(0..len).any(|k| below[j][k] && below[k][i]) {
                covers[i].push(j);
            }
        }
    }

    // longest and shortest maximal chains, processing by increasing order
    let mut longest = vec![0usize; len];
    let mut shortest = vec![usize::MAX; len];
    shortest[0] = 0;
    for i in 0..len {
        for &j in &covers[i] {
            longest[j] = longest[j].max(longest[i] + 1);
            shortest[j] = shortest[j].min(shortest[i] + 1);
        }
    }
    InvariantSubgroupLattice {
        kernel_order: n,
        depth: longest[len - 1],
        min_chain: shortest[len - 1],
        covers,
        subgroups,
        primes: prime_divisors(n as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{FrobeniusSpec, KernelFactor};
    use super::*;
    use crate::numtheory::big_omega;

    fn f3_scalars() -> FrobeniusSpec {
        FrobeniusSpec {
            kernel: vec![KernelFactor::ElementaryAbelian { p: 3, dim: 2, matrices: vec![vec![vec![2, 0], vec![0, 2]]] }],
            complement_order: 2,
        }
    }

    #[test]
    fn cyclic_lattices() {
        let l = invariant_lattice(&FrobeniusSpec::cyclic(9, &[8]).unwrap()).unwrap();
        assert_eq!(l.orders(), vec![1, 3, 9]);
        assert_eq!(l.depth(), 2);
        assert_eq!(l.primes(), &[3]);

        let l = invariant_lattice(&FrobeniusSpec::cyclic(105, &[104]).unwrap()).unwrap();
        assert_eq!(l.len(), 8);
        assert_eq!(l.depth(), 3);
        assert_eq!(l.primes(), &[3, 5, 7]);
        assert!(l.chain_independent());
        assert_eq!(l.maximal_chains(100).len(), 6);
    }

    #[test]
    fn cyclic_depth_is_big_omega() {
        for m in [7u64, 25, 45, 63, 81, 99, 175] {
            let spec = FrobeniusSpec::cyclic(m, &[-1]).unwrap();
            let l = invariant_lattice(&spec).unwrap();
            assert_eq!(l.depth() as u32, big_omega(m), "Z_{m}");
            // every subgroup of a cyclic group is invariant: one per divisor
            assert_eq!(l.len(), crate::numtheory::divisors(m).len());
        }
    }

    #[test]
    fn scalar_invariant_subgroups_are_subspaces() {
        let l = invariant_lattice(&f3_scalars()).unwrap();
        assert_eq!(l.orders(), vec![1, 3, 3, 3, 3, 9]);
        assert_eq!(l.depth(), 2);
        for s in l.subgroups() {
            // closed under addition and under x ↦ 2x
            for &a in s.elements() {
                let (a1, a0) = (a / 3, a % 3);
                assert!(s.contains((2 * a1 % 3) * 3 + 2 * a0 % 3));
                for &b in s.elements() {
                    assert!(s.contains(((a1 + b / 3) % 3) * 3 + (a0 + b % 3) % 3));
                }
            }
        }
        for i in 0..l.len() {
            for j in 0..l.len() {
                let m = l.meet(i, j);
                let jn = l.join(i, j);
                assert!(l.subgroups()[m].is_subset_of(&l.subgroups()[i]));
                assert!(l.subgroups()[i].is_subset_of(&l.subgroups()[jn]));
            }
        }
    }

    #[test]
    fn irreducible_action_has_no_proper_subgroups() {
        // multiplication by a primitive element of F_9 on F_3^2 (companion of x^2 + 2x + 2)
        let spec = FrobeniusSpec {
            kernel: vec![KernelFactor::ElementaryAbelian { p: 3, dim: 2, matrices: vec![vec![vec![0, 1], vec![1, 1]]] }],
            complement_order: 8,
        };
        let l = invariant_lattice(&spec).unwrap();
        assert_eq!(l.orders(), vec![1, 9]);
        assert_eq!(l.depth(), 1);
    }
}
