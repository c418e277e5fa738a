use num_bigint::BigUint;
use serde::Serialize;

use super::base::{base_coordinates, find_compatible_triples, first_base_triple, verify_induced, BaseTriple};
use super::{find_algebraic_isomorphisms, AlgIsoError, RelationBijection};
use crate::frobenius::{build_frobenius, FrobeniusSpec};
use crate::parabolic::{divide_check, equivalenced_valency, indistinguishing_number, Parabolic, ParabolicLattice};
use crate::perm::{PermGroup, Permutation};
use crate::scheme::{compute_tensor, Point, Relation, Scheme};
use crate::tcond::{check_t_condition, FourConditionCertificate, TWitness};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SchurityResult {
    Schurian {
        #[serde(serialize_with = "ser_perms")]
        generators: Vec<Permutation>,
        #[serde(serialize_with = "ser_big")]
        order: BigUint,
    },
    /// No constructed automorphism moves the representative pair of
    /// `relation` onto `target`.
    NotTransitive { relation: Relation, representative: (Point, Point), target: (Point, Point), candidates: usize },
}

fn ser_perms<S: serde::Serializer>(perms: &[Permutation], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(perms.iter().map(|p| p.images()))
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Builds automorphisms from base triples until the group they generate is
/// transitive on every relation.
///
/// The construction is only guaranteed for schemes passing the 4-condition,
/// so a certificate for `scheme` is required. With `e = None` the smallest
/// nontrivial parabolic is used.
pub fn schurity_via_base_triples(
    scheme: &Scheme,
    e: Option<&Parabolic>,
    certificate: &FourConditionCertificate,
) -> Result<SchurityResult, AlgIsoError> {
    if !certificate.certifies(scheme) {
        return Err(AlgIsoError::MissingCertificate);
    }
    let n = scheme.n();
    let m = scheme.rank();
    if m <= 2 {
        let group = PermGroup::symmetric(n);
        return Ok(SchurityResult::Schurian { generators: group.generators().to_vec(), order: group.order() });
    }
    let tensor = compute_tensor(scheme)?;
    if equivalenced_valency(&tensor).is_none() {
        return Err(AlgIsoError::NotEquivalenced);
    }
    let e = match e {
        Some(e) => {
            let trivial = e.relations().len() <= 1 || e.relations().len() == m;
            if trivial || Parabolic::from_relations(e.relations(), &tensor).as_ref() != Some(e) {
                return Err(AlgIsoError::ParabolicImage);
            }
            e.clone()
        }
        None => {
            let lattice = ParabolicLattice::from_tensor(&tensor);
            let &i = lattice.nontrivial().first().ok_or(AlgIsoError::Primitive)?;
            lattice.parabolics()[i].clone()
        }
    };

    let id = RelationBijection::identity(m);
    let mut orbits = UnionFind((0..n * n).collect());
    let mut generators: Vec<Permutation> = Vec::new();
    for (s, (a0, b0)) in scheme.representatives().into_iter().enumerate() {
        let s = s as Relation;
        let tau = if s == 0 {
            first_base_triple(scheme, &e, a0)?
        } else if e.contains(s) {
            let rho = (0..n).find(|&c| !e.contains(scheme.relation(a0, c))).expect("e is not the full relation");
            BaseTriple::new(scheme, &e, a0, b0, rho)?
        } else {
            let nu = (0..n).find(|&c| c != a0 && e.contains(scheme.relation(a0, c))).expect("e is not trivial");
            BaseTriple::new(scheme, &e, a0, nu, b0)?
        };
        let cx = base_coordinates(scheme, &tensor, &e, tau)?;

        for a in 0..n {
            for b in scheme.neighbours(a, s) {
                if orbits.find(a0 * n + b0) == orbits.find(a * n + b) {
                    continue;
                }
                let wanted = |&(_, nu, rho): &(Point, Point, Point)| {
                    if s == 0 {
                        true
                    } else if e.contains(s) {
                        nu == b
                    } else {
                        rho == b
                    }
                };
                let candidates: Vec<_> = find_compatible_triples(scheme, &id, &tau, a).into_iter().filter(wanted).collect();
                let automorphism = candidates.iter().find_map(|&(mu, nu, rho)| {
                    let tp = BaseTriple::new(scheme, &e, mu, nu, rho).ok()?;
                    let cy = base_coordinates(scheme, &tensor, &e, tp).ok()?;
                    let f: Vec<Point> = (0..n).map(|p| cy.point(cx.coordinates(p))).collect::<Option<_>>()?;
                    verify_induced(scheme, scheme, &f, &id).ok()?;
                    Permutation::new(f).ok()
                });
                let Some(f) = automorphism else {
                    return Ok(SchurityResult::NotTransitive {
                        relation: s,
                        representative: (a0, b0),
                        target: (a, b),
                        candidates: candidates.len(),
                    });
                };
                for p in 0..n {
                    for q in 0..n {
                        orbits.union(p * n + q, f.image(p) * n + f.image(q));
                    }
                }
                generators.push(f);
            }
        }
    }

    let group = PermGroup::new(n, generators).expect("generators have degree n");
    // each generator is an automorphism and each relation is one orbit, so the
    // orbital scheme is the input; recheck from the group itself
    let orbital = Scheme::from_orbitals(&group)?;
    assert_eq!(orbital, scheme.canonicalized(), "orbitals of the constructed group differ from the relations");
    let generators = group.generators().to_vec();
    Ok(SchurityResult::Schurian { generators, order: group.order() })
}

/// Classification of an imprimitive scheme against the Frobenius criterion.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FrobeniusVerdict {
    /// Pseudofrobenius and passes the 4-condition.
    Frobenius { phi: RelationBijection },
    /// Pseudofrobenius and fails the 4-condition.
    Proper { phi: RelationBijection, witness: TWitness },
    /// Fails the arithmetic screen.
    NotPseudofrobenius { reason: String },
    /// Passes the screen but no algebraic isomorphism to the reference
    /// Frobenius scheme was supplied or found.
    Unknown { four_condition: bool },
}

/// Screens `scheme`, looks for an algebraic isomorphism to the scheme of the
/// reference Frobenius group and then decides by the 4-condition.
pub fn four_condition_frobenius_verdict(scheme: &Scheme, reference: Option<&FrobeniusSpec>) -> Result<FrobeniusVerdict, AlgIsoError> {
    let tensor = compute_tensor(scheme)?;
    let lattice = ParabolicLattice::from_tensor(&tensor);
    if lattice.is_primitive() {
        return Err(AlgIsoError::Primitive);
    }
    let not_pf = |reason: String| Ok(FrobeniusVerdict::NotPseudofrobenius { reason });
    let Some(k) = equivalenced_valency(&tensor) else {
        return not_pf(format!("not equivalenced: valencies {:?}", tensor.valencies()));
    };
    let c = indistinguishing_number(&tensor);
    if c != k as u64 - 1 {
        return not_pf(format!("indistinguishing number {c}, expected {}", k - 1));
    }
    let divide = divide_check(&tensor, &lattice).map_err(|e| AlgIsoError::NotAlgebraic(e.to_string()))?;
    if let Some(d) = divide.iter().find(|d| !d.passes) {
        return not_pf(format!("{k} does not divide {} for parabolics of sizes {} and {}", d.quotient - 1, d.lower_size, d.upper_size));
    }

    let report = check_t_condition(scheme, 4).map_err(|e| AlgIsoError::NotAlgebraic(e.to_string()))?;
    let phi = match reference {
        Some(spec) => {
            let group = build_frobenius(spec).map_err(|e| AlgIsoError::Reference(e.to_string()))?;
            let target = compute_tensor(&Scheme::from_orbitals(&group)?)?;
            find_algebraic_isomorphisms(&tensor, &target, 1).pop()
        }
        None => None,
    };
    Ok(match (phi, report.passed) {
        (None, passed) => FrobeniusVerdict::Unknown { four_condition: passed },
        (Some(phi), true) => FrobeniusVerdict::Frobenius { phi },
        (Some(phi), false) => FrobeniusVerdict::Proper { phi, witness: report.witness.expect("failing report has a witness") },
    })
}
