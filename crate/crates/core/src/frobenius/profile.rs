use serde::Serialize;

use super::lattice::{lattice_of, InvariantSubgroupLattice};
use super::{FrobeniusError, FrobeniusGroup, FrobeniusSpec};
use crate::numtheory::prime_power;

/// The group induced on the quotient `U/L` of a covering pair of invariant subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub lower_order: usize,
    pub upper_order: usize,
    pub degree: usize,
    /// 1 + number of `K`-orbits on the nonzero quotient elements.
    pub rank: usize,
    pub is_2_transitive: bool,
    pub is_rank_3: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionProfile {
    pub sections: Vec<Section>,
}

impl SectionProfile {
    pub fn degrees(&self) -> Vec<usize> {
        self.sections.iter().map(|s| s.degree).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.sections.iter().map(|s| s.rank).collect()
    }
}

fn section(group: &FrobeniusGroup, lattice: &InvariantSubgroupLattice, lower: usize, upper: usize) -> Section {
    let kernel = group.kernel();
    let (l, u) = (&lattice.subgroups()[lower], &lattice.subgroups()[upper]);
    let n = kernel.order() as usize;
    let mut coset = vec![usize::MAX; n];
    let mut cosets = 0;
    for &x in u.elements() {
        if coset[x] == usize::MAX {
            for &y in l.elements() {
                coset[kernel.add(x, y)] = cosets;
            }
            cosets += 1;
        }
    }
    let mut reps = vec![0usize; cosets];
    for &x in u.elements().iter().rev() {
        reps[coset[x]] = x;
    }
    let mut seen = vec![false; cosets];
    seen[coset[0]] = true;
    let mut orbits = 0;
    for c in 0..cosets {
        if seen[c] {
            continue;
        }
        orbits += 1;
        for kappa in group.complement() {
            seen[coset[kernel.apply(kappa, reps[c])]] = true;
        }
    }
    let rank = orbits + 1;
    Section {
        lower_order: l.order(),
        upper_order: u.order(),
        degree: cosets,
        rank,
        is_2_transitive: rank == 2,
        is_rank_3: rank == 3,
    }
}

/// Sections along one maximal chain, always stepping to the smallest cover.
pub fn principal_sections(spec: &FrobeniusSpec) -> Result<SectionProfile, FrobeniusError> {
    let group = spec.validate()?;
    let lattice = lattice_of(&group);
    let mut sections = Vec::new();
    let mut at = lattice.bottom();
    while at != lattice.top() {
        let next = *lattice.covers(at).iter().min_by_key(|&&c| (lattice.subgroups()[c].order(), c)).expect("not yet at the top");
        sections.push(section(&group, &lattice, at, next));
        at = next;
    }
    Ok(SectionProfile { sections })
}

/// Sections for every covering pair of the lattice.
pub fn all_principal_sections(spec: &FrobeniusSpec) -> Result<SectionProfile, FrobeniusError> {
    let group = spec.validate()?;
    Ok(sections_of(&group, &lattice_of(&group)))
}

fn sections_of(group: &FrobeniusGroup, lattice: &InvariantSubgroupLattice) -> SectionProfile {
    let mut sections = Vec::new();
    for lower in 0..lattice.len() {
        for &upper in lattice.covers(lower) {
            sections.push(section(group, lattice, lower, upper));
        }
    }
    SectionProfile { sections }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProperVerdict {
    /// `d = 1`: the group is primitive and the classification says nothing.
    Primitive,
    ProperExcluded,
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm2Profile {
    pub kernel_order: u64,
    pub complement_order: u64,
    pub primes: Vec<u64>,
    pub d: usize,
    pub chain_independent: bool,
    /// `(|π|, d) ∈ {1,2} × {2,3}`.
    pub in_table: bool,
    pub case1: Option<CaseCheck>,
    pub case2: Option<CaseCheck>,
    pub verdict: ProperVerdict,
}

pub fn thm2_profile(spec: &FrobeniusSpec) -> Result<Thm2Profile, FrobeniusError> {
    let group = spec.validate()?;
    let lattice = lattice_of(&group);
    let primes = lattice.primes().to_vec();
    let d = lattice.depth();
    let in_table = (1..=2).contains(&primes.len()) && (2..=3).contains(&d);
    let (mut case1, mut case2) = (None, None);
    if d == 3 {
        let sections = sections_of(&group, &lattice);
        case1 = Some(check_case1(group.kernel_order(), &sections));
        case2 = Some(check_case2(group.kernel_order(), &sections));
    }
    let verdict = if d == 1 {
        ProperVerdict::Primitive
    } else if !in_table || (d == 3 && !case1.as_ref().unwrap().holds && !case2.as_ref().unwrap().holds) {
        ProperVerdict::ProperExcluded
    } else {
        ProperVerdict::NotExcluded
    };
    Ok(Thm2Profile {
        kernel_order: group.kernel_order(),
        complement_order: group.complement_order(),
        primes,
        d,
        chain_independent: lattice.chain_independent(),
        in_table,
        case1,
        case2,
        verdict,
    })
}

/// `|H| = p^{3a}` with every section 2-transitive of degree `p^a`.
fn check_case1(order: u64, sections: &SectionProfile) -> CaseCheck {
    let Some((p, e)) = prime_power(order) else {
        return CaseCheck { holds: false, detail: format!("|H| = {order} is not a prime power") };
    };
    if e % 3 != 0 {
        return CaseCheck { holds: false, detail: format!("|H| = {p}^{e}, exponent not divisible by 3") };
    }
    let deg = p.pow(e / 3) as usize;
    match sections.sections.iter().find(|s| s.degree != deg || !s.is_2_transitive) {
        Some(s) => CaseCheck {
            holds: false,
            detail: format!("section {}/{} has degree {} and rank {}, need degree {deg} and rank 2", s.upper_order, s.lower_order, s.degree, s.rank),
        },
        None => CaseCheck { holds: true, detail: format!("|H| = {deg}^3, all sections 2-transitive of degree {deg}") },
    }
}

/// `|H| = p^{2a} q^b` with sections 2-transitive of degree `p^a` or rank 3 of
/// degree `q^b`, and `q^b = 2p^a - 1`.
fn check_case2(order: u64, sections: &SectionProfile) -> CaseCheck {
    let primes = crate::numtheory::factorize(order);
    if primes.len() != 2 {
        return CaseCheck { holds: false, detail: format!("|H| = {order} does not have exactly two prime divisors") };
    }
    let mut failures = Vec::new();
    for (i, j) in [(0, 1), (1, 0)] {
        let ((p, e), (q, f)) = (primes[i], primes[j]);
        if e % 2 != 0 {
            failures.push(format!("{p}-part {p}^{e} is not a square"));
            continue;
        }
        let pa = p.pow(e / 2) as usize;
        let qb = q.pow(f) as usize;
        if qb != 2 * pa - 1 {
            failures.push(format!("{q}^{f} = {qb} is not 2·{pa} - 1"));
            continue;
        }
        let bad = sections.sections.iter().find(|s| !((s.degree == pa && s.is_2_transitive) || (s.degree == qb && s.is_rank_3)));
        match bad {
            Some(s) => failures.push(format!("section {}/{} has degree {} and rank {}", s.upper_order, s.lower_order, s.degree, s.rank)),
            None => {
                return CaseCheck {
                    holds: true,
                    detail: format!("|H| = {pa}^2·{qb}, sections of degree {pa} rank 2 and degree {qb} rank 3"),
                }
            }
        }
    }
    CaseCheck { holds: false, detail: failures.join("; ") }
}

#[cfg(test)]
mod tests {
    use super::super::KernelFactor;
    use super::*;

    fn elem(p: u64, dim: usize, matrices: Vec<Vec<Vec<u64>>>, k: u64) -> FrobeniusSpec {
        FrobeniusSpec { kernel: vec![KernelFactor::ElementaryAbelian { p, dim, matrices }], complement_order: k }
    }

    fn scalar(dim: usize, c: u64) -> Vec<Vec<u64>> {
        (0..dim).map(|i| (0..dim).map(|j| if i == j { c } else { 0 }).collect()).collect()
    }

    /// Rank of a section by brute force: orbits of `K` on the cosets, counted
    /// via the permutation action on all elements of `U`.
    fn brute_rank(m: u64, units: &[u64], lower: u64, upper: u64) -> usize {
        // Z_m: subgroup of order s is generated by m/s
        let (lg, ug) = (m / lower, m / upper);
        let cosets: Vec<u64> = (0..m).step_by(ug as usize).collect();
        let key = |x: u64| x % lg;
        let mut seen = std::collections::HashSet::new();
        let mut orbits = 0;
        for &x in &cosets {
            if key(x) == 0 || seen.contains(&key(x)) {
                continue;
            }
            orbits += 1;
            let mut stack = vec![x];
            while let Some(y) = stack.pop() {
                if seen.insert(key(y)) {
                    for &u in units {
                        stack.push(y * u % m);
                    }
                }
            }
        }
        orbits + 1
    }

    #[test]
    fn greedy_chain_sections() {
        let p = principal_sections(&FrobeniusSpec::cyclic(9, &[8]).unwrap()).unwrap();
        assert_eq!(p.degrees(), vec![3, 3]);
        assert_eq!(p.ranks(), vec![2, 2]);

        let p = principal_sections(&FrobeniusSpec::cyclic(105, &[104]).unwrap()).unwrap();
        assert_eq!(p.degrees(), vec![3, 5, 7]);
        assert_eq!(p.ranks(), vec![2, 3, 4]);
        let brute: Vec<usize> = [(1, 3), (3, 15), (15, 105)].iter().map(|&(l, u)| brute_rank(105, &[104], l, u)).collect();
        assert_eq!(p.ranks(), brute);

        let p = principal_sections(&elem(3, 2, vec![scalar(2, 2)], 2)).unwrap();
        assert_eq!(p.degrees(), vec![3, 3]);
        assert_eq!(p.ranks(), vec![2, 2]);
    }

    #[test]
    fn section_degrees_are_prime_powers() {
        for spec in [
            FrobeniusSpec::cyclic(105, &[104]).unwrap(),
            FrobeniusSpec::cyclic(225, &[-1]).unwrap(),
            elem(5, 3, vec![scalar(3, 4)], 2),
        ] {
            let all = all_principal_sections(&spec).unwrap();
            assert!(!all.sections.is_empty());
            for s in &all.sections {
                assert!(prime_power(s.degree as u64).is_some(), "degree {}", s.degree);
                assert_eq!(s.degree * s.lower_order, s.upper_order);
            }
        }
    }

    #[test]
    fn table_membership() {
        let z105 = thm2_profile(&FrobeniusSpec::cyclic(105, &[104]).unwrap()).unwrap();
        assert_eq!((z105.primes.len(), z105.d), (3, 3));
        assert!(!z105.in_table);
        assert_eq!(z105.verdict, ProperVerdict::ProperExcluded);

        let f3 = thm2_profile(&elem(3, 2, vec![scalar(2, 2)], 2)).unwrap();
        assert_eq!((f3.primes.len(), f3.d), (1, 2));
        assert!(f3.in_table);
        assert!(f3.case1.is_none() && f3.case2.is_none());
        assert_eq!(f3.verdict, ProperVerdict::NotExcluded);

        let z81 = thm2_profile(&FrobeniusSpec::cyclic(81, &[80]).unwrap()).unwrap();
        assert_eq!((z81.primes.len(), z81.d), (1, 4));
        assert_eq!(z81.verdict, ProperVerdict::ProperExcluded);

        let z7 = thm2_profile(&FrobeniusSpec::cyclic(7, &[3]).unwrap()).unwrap();
        assert_eq!(z7.d, 1);
        assert_eq!(z7.verdict, ProperVerdict::Primitive);
    }

    #[test]
    fn depth_three_cases() {
        // scalars of order 10 on F_11^3: 2-transitive sections of degree 11
        let c1 = thm2_profile(&elem(11, 3, vec![scalar(3, 2)], 10)).unwrap();
        assert_eq!(c1.d, 3);
        assert!(c1.case1.as_ref().unwrap().holds);
        assert!(!c1.case2.as_ref().unwrap().holds);
        assert_eq!(c1.verdict, ProperVerdict::NotExcluded);

        // same kernel, complement of order 5: sections have rank 3
        let not1 = thm2_profile(&elem(11, 3, vec![scalar(3, 3)], 5)).unwrap();
        assert!(!not1.case1.as_ref().unwrap().holds);
        assert_eq!(not1.verdict, ProperVerdict::ProperExcluded);

        // Z_7 x Z_7 x Z_13 with K of order 6: degrees 7, 7 (rank 2) and 13 = 2·7 - 1 (rank 3)
        let spec = FrobeniusSpec {
            kernel: vec![
                KernelFactor::ElementaryAbelian { p: 7, dim: 2, matrices: vec![scalar(2, 3)] },
                KernelFactor::Cyclic { modulus: 13, units: vec![4] },
            ],
            complement_order: 6,
        };
        let c2 = thm2_profile(&spec).unwrap();
        assert_eq!((c2.primes.len(), c2.d), (2, 3));
        assert!(c2.case2.as_ref().unwrap().holds, "{:?}", c2.case2);
        assert!(!c2.case1.as_ref().unwrap().holds);
        assert_eq!(c2.verdict, ProperVerdict::NotExcluded);
    }
}
