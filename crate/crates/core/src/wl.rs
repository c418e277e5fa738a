//! WL-dimension verdicts for Frobenius circulants.
//!
//! The dimension is never computed directly. A verdict of exactly 2 needs a
//! Frobenius automorphism group, an order outside the exception set and a
//! separability witness for the coherent closure.

use serde::Serialize;

use crate::autsearch::stabilizer_automorphisms;
use crate::generators::CirculantSpec;
use crate::numtheory::{big_omega, factorize, prime_divisors};
use crate::parabolic::{divide_check, equivalenced_valency, indistinguishing_number, separability_verdict, ParabolicLattice, SeparabilityVerdict};
use crate::scheme::{compute_tensor, wl_closure_with, Scheme};
use crate::par::Execution;

/// Largest order for which the automorphism search is attempted.
pub const MAX_SEARCH_DEGREE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionCheck {
    pub n: u64,
    pub in_exception_set: bool,
    pub reason: String,
}

/// Whether `n` has the shape `p`, `p²`, `p³`, `pq` or `p²q`.
pub fn exception_check(n: u64) -> ExceptionCheck {
    let primes = prime_divisors(n).len();
    let omega = big_omega(n);
    let in_exception_set = n >= 2 && primes <= 2 && omega <= 3;
    let shape = factorize(n).iter().map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") }).collect::<Vec<_>>().join("·");
    let reason = if in_exception_set {
        format!("{n} = {shape} has at most two prime divisors and at most three prime factors")
    } else if primes >= 3 {
        format!("{n} = {shape} has {primes} distinct prime divisors")
    } else {
        format!("{n} = {shape} has {omega} prime factors with multiplicity")
    };
    ExceptionCheck { n, in_exception_set, reason }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureStats {
    pub rank: usize,
    pub valency: Option<u32>,
    pub rounds: usize,
}

/// Evidence that the automorphism group is Frobenius: it contains the
/// translations, and the stabilizer of 0 has exactly `k` elements, each
/// nonidentity one fixing only 0.
#[derive(Debug, Clone, Serialize)]
pub struct AutCertificate {
    pub stabilizer_order: usize,
    pub search_nodes: u64,
    /// The units supplied with the circulant, if any.
    pub construction: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WlOutcome {
    Exactly2 { separability: SeparabilityVerdict },
    ExceptionUnresolved,
    NotFrobeniusCertified { reason: String },
    /// The automorphism search was out of range.
    Unknown { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct WlVerdict {
    pub n: u64,
    pub factorization: Vec<(u64, u32)>,
    pub exception: ExceptionCheck,
    pub closure: ClosureStats,
    pub automorphisms: Option<AutCertificate>,
    pub outcome: WlOutcome,
}

pub fn dimwl_verdict(circ: &CirculantSpec) -> WlVerdict {
    dimwl_verdict_with(circ, Execution::default())
}

pub fn dimwl_verdict_with(circ: &CirculantSpec, exec: Execution) -> WlVerdict {
    let n = circ.n;
    let closure = wl_closure_with(n, &circ.colors(), exec);
    let rounds = closure.rounds;
    let scheme = closure.into_scheme().expect("a circulant closure is homogeneous");
    let tensor = compute_tensor(&scheme).expect("closure is coherent");
    let valency = equivalenced_valency(&tensor);
    let mut verdict = WlVerdict {
        n: n as u64,
        factorization: factorize(n as u64),
        exception: exception_check(n as u64),
        closure: ClosureStats { rank: scheme.rank(), valency, rounds },
        automorphisms: None,
        outcome: WlOutcome::ExceptionUnresolved,
    };
    let refuse = |reason: String| WlOutcome::NotFrobeniusCertified { reason };

    let degree = circ.connection.len();
    if degree == 0 || degree + 1 == n {
        verdict.outcome = refuse(format!("graph is {}, so it is not a nontrivial regular graph", if degree == 0 { "empty" } else { "complete" }));
        return verdict;
    }
    let Some(k) = valency.filter(|&k| k >= 2) else {
        verdict.outcome = refuse(format!("closure is not equivalenced with valency at least 2: {:?}", tensor.valencies()));
        return verdict;
    };
    let c = indistinguishing_number(&tensor);
    if c != k as u64 - 1 {
        verdict.outcome = refuse(format!("indistinguishing number {c} differs from k - 1 = {}", k - 1));
        return verdict;
    }
    let lattice = ParabolicLattice::from_tensor(&tensor);
    if let Some(d) = divide_check(&tensor, &lattice).ok().and_then(|all| all.into_iter().find(|d| !d.passes)) {
        verdict.outcome = refuse(format!("{k} does not divide {} - 1", d.quotient));
        return verdict;
    }

    if n > MAX_SEARCH_DEGREE {
        verdict.outcome = WlOutcome::Unknown { reason: format!("automorphism search is limited to {MAX_SEARCH_DEGREE} points") };
        return verdict;
    }
    match frobenius_automorphisms(&scheme, k as usize) {
        Ok(cert) => verdict.automorphisms = Some(AutCertificate { construction: circ.complement.clone(), ..cert }),
        Err(reason) => {
            verdict.outcome = refuse(reason);
            return verdict;
        }
    }

    if verdict.exception.in_exception_set {
        return verdict;
    }
    verdict.outcome = match separability_verdict(&scheme) {
        Ok(s @ SeparabilityVerdict::Separable { .. }) => WlOutcome::Exactly2 { separability: s },
        Ok(SeparabilityVerdict::Undecided { .. }) => WlOutcome::Unknown { reason: "no separability witness applies".into() },
        Err(e) => WlOutcome::Unknown { reason: e.to_string() },
    };
    verdict
}

/// Point stabilizer of the closure, which has the automorphisms of the graph.
fn frobenius_automorphisms(scheme: &Scheme, k: usize) -> Result<AutCertificate, String> {
    let search = stabilizer_automorphisms(scheme, 0, k + 1);
    if !search.complete {
        return Err(format!("the stabilizer of 0 has more than {k} elements"));
    }
    if search.elements.len() != k {
        return Err(format!("the stabilizer of 0 has {} elements, expected {k}", search.elements.len()));
    }
    if let Some(g) = search.elements.iter().find(|g| !g.is_identity() && g.fixed_points().count() != 1) {
        return Err(format!("stabilizer element {g} fixes more than one point"));
    }
    Ok(AutCertificate { stabilizer_order: k, search_nodes: search.nodes, construction: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::frobenius_circulant;
    use crate::numtheory::spf_sieve;

    #[test]
    fn exception_examples() {
        assert!(!exception_check(105).in_exception_set);
        assert!(!exception_check(81).in_exception_set);
        assert!(exception_check(63).in_exception_set);
        assert!(exception_check(7).in_exception_set);
        assert!(exception_check(12).in_exception_set);
        assert!(!exception_check(16).in_exception_set);
    }

    /// Builds the exception set from its listed shapes and compares.
    #[test]
    fn exception_set_matches_shapes() {
        let limit = 20_000u64;
        let spf = spf_sieve(limit as usize);
        let primes: Vec<u64> = (2..=limit).filter(|&p| spf[p as usize] as u64 == p).collect();
        let mut shaped = vec![false; limit as usize + 1];
        for &p in &primes {
            for m in [p, p * p, p * p * p] {
                if m <= limit {
                    shaped[m as usize] = true;
                }
            }
            for &q in &primes {
                if q != p {
                    for m in [p * q, p * p * q] {
                        if m <= limit {
                            shaped[m as usize] = true;
                        }
                    }
                }
                if p * q > limit {
                    break;
                }
            }
        }
        for n in 2..=limit {
            assert_eq!(exception_check(n).in_exception_set, shaped[n as usize], "n = {n}");
        }
    }

    #[test]
    fn verdicts() {
        let c81 = frobenius_circulant(81, &[-1], &[1]).unwrap();
        assert!(matches!(dimwl_verdict(&c81).outcome, WlOutcome::Exactly2 { .. }));
        let c105 = frobenius_circulant(105, &[-1], &[1, 2]).unwrap();
        let v = dimwl_verdict(&c105);
        assert!(matches!(v.outcome, WlOutcome::Exactly2 { .. }), "{v:?}");
        assert_eq!(v.automorphisms.unwrap().stabilizer_order, 2);
        let c63 = frobenius_circulant(63, &[-1], &[1]).unwrap();
        assert!(matches!(dimwl_verdict(&c63).outcome, WlOutcome::ExceptionUnresolved));
    }

    #[test]
    fn non_frobenius_graphs_are_refused() {
        // Möbius ladder on 16 points
        let g = CirculantSpec::new(16, &[1, 15, 8]);
        assert!(matches!(dimwl_verdict(&g).outcome, WlOutcome::NotFrobeniusCertified { .. }));
        assert!(matches!(dimwl_verdict(&CirculantSpec::new(9, &[])).outcome, WlOutcome::NotFrobeniusCertified { .. }));
        let complete: Vec<usize> = (1..13).collect();
        assert!(matches!(dimwl_verdict(&CirculantSpec::new(13, &complete)).outcome, WlOutcome::NotFrobeniusCertified { .. }));
    }
}
